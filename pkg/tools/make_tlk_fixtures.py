#!/usr/bin/env python3
"""Assemble the committed talk-table fixtures byte by byte.

Deliberately independent of the tlkcorpus package: fixtures are packed with
struct straight from the format notes (20-byte header, 40-byte records,
string heap in entry order), so they stand as an external check on the
parser and writer. Output goes to tests/fixtures/tlk/.

Two fictional games, five languages each (Aurora ids: en=0 fr=1 de=2 it=3
es=4). The data bakes in the awkward cases on purpose: tagged and hybrid
tagged lines, a leaked developer comment in the German tables, an empty
entry, a markup remnant, an abbreviation before a period, a French table
one entry short, and cp1252 accents.
"""

import struct
from pathlib import Path
from xml.sax.saxutils import escape

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "tlk"

LANGUAGE_IDS = {"en": 0, "fr": 1, "de": 2, "it": 3, "es": 4}

# (en, fr, de, it, es); None means the entry is absent from that language's
# table (only allowed at the tail, since StrRefs are positional).
THUL = [
    ("Welcome to the Drowned Flagon. Mind the floorboards.",
     "Bienvenue au Pavillon Noyé. Attention aux lattes.",
     "Willkommen im Ersoffenen Krug. Achtet auf die Dielen.",
     "Benvenuto alla Bandiera Affondata. Attento alle assi.",
     "Bienvenido al Estandarte Hundido. Cuidado con las tablas."),
    ("[Persuade] Surely you can spare a room for a weary traveler?",
     "Vous pouvez bien céder une chambre à un voyageur épuisé ?",
     "Ihr könnt doch einem müden Reisenden ein Zimmer überlassen?",
     "Potete certo cedere una stanza a un viandante stanco?",
     "¿Seguro que puede ceder un cuarto a un viajero cansado?"),
    ("The ferry leaves at dawn. Do not be late.",
     "Le bac part à l'aube. Ne soyez pas en retard.",
     "Die Fähre legt bei Morgengrauen ab. Kommt nicht zu spät.",
     "Il traghetto parte all'alba. Non fare tardi.",
     "El transbordador sale al alba. No llegues tarde."),
    ("I have nothing more to say to you.",
     "Je n'ai plus rien à vous dire.",
     "Ich habe Euch nichts mehr zu sagen.",
     "Non ho altro da dirti.",
     "No tengo nada más que decirte."),
    ("[Persuade/Lie] The captain sent me himself. Check your ledger.",
     "Le capitaine m'envoie lui-même. Vérifiez votre registre.",
     "Der Hauptmann schickt mich persönlich. Prüft Euer Buch.",
     "Mi manda il capitano in persona. Controlla il registro.",
     "Me envía el capitán en persona. Revisa tu libro."),
    ("", "", "", "", ""),
    ("Guards patrol the east wall after sunset. The west gate stays open.",
     "Des gardes patrouillent au mur est après le coucher du soleil. La porte ouest reste ouverte.",
     "Wachen patrouillieren nach Sonnenuntergang an der Ostmauer. Das Westtor bleibt offen.",
     "Le guardie pattugliano il muro est dopo il tramonto. La porta ovest resta aperta.",
     "Los guardias patrullan el muro este tras el ocaso. La puerta oeste queda abierta."),
    ("My brother went into the mine three days ago. Nobody has seen him since.",
     "Mon frère est entré dans la mine il y a trois jours. Personne ne l'a revu.",
     "Mein Bruder ging vor drei Tagen in die Mine. Niemand hat ihn seither gesehen.",
     "Mio fratello è sceso in miniera tre giorni fa. Nessuno l'ha più visto.",
     "Mi hermano entró en la mina hace tres días. Nadie lo ha visto desde entonces."),
    ("You shall find I am always very committed - to gold.",
     "Vous verrez que je suis toujours très dévoué... à l'or.",
     "Ihr werdet feststellen, dass ich jeder Sache sehr ergeben bin... wenn die Bezahlung stimmt.",
     "Scoprirai che sono sempre molto devoto... all'oro.",
     "Verás que siempre estoy muy entregado... al oro."),
    ("Mr. Aldric keeps the key. He trusts no one.",
     "M. Aldric garde la clé. Il ne fait confiance à personne.",
     "Hr. Aldric verwahrt den Schlüssel. Er traut niemandem.",
     "Il sig. Aldric custodisce la chiave. Non si fida di nessuno.",
     "El sr. Aldric guarda la llave. No confía en nadie."),
    ("[Persuade] What other choice do you have?",
     "Quel autre choix avez-vous ?",
     "Welche andere Wahl habt Ihr denn?",
     "Quale altra scelta hai?",
     "¿Qué otra opción tienes?"),
    ("The harvest was poor this year.",
     "La récolte a été maigre cette année.",
     "Die Ernte war dieses Jahr mager.",
     "Il raccolto è stato scarso quest'anno.",
     "La cosecha fue pobre este año."),
    ("Stay away from the old tower.",
     "Restez loin de la vieille tour.",
     "DO NOT TRANSLATE - temp string",
     "Stai lontano dalla vecchia torre.",
     "Aléjate de la torre vieja."),
    ("A dragon? Are you certain of this?",
     "Un dragon ? Vous en êtes certain ?",
     "Ein Drache? Seid Ihr Euch sicher?",
     "Un drago? Ne sei certo?",
     "¿Un dragón? ¿Estás seguro?"),
    ("This blade has seen three wars.",
     "Cette lame a connu trois guerres.",
     "Diese Klinge hat drei Kriege gesehen.",
     "Questa lama ha visto tre guerre.",
     "Esta hoja ha visto tres guerras."),
    ("Hello.</string>",
     "Bonjour.</string>",
     "Hallo.</string>",
     "Salve.</string>",
     "Hola.</string>"),
    ("We buried him by the river. It was what he wanted.",
     "Nous l'avons enterré près de la rivière. C'est ce qu'il voulait.",
     "Wir haben ihn am Fluss begraben. So wollte er es.",
     "Lo abbiamo sepolto presso il fiume. Era ciò che voleva.",
     "Lo enterramos junto al río. Era lo que quería."),
    ("[Persuade] A man of your standing deserves better than this hovel.",
     "Un homme de votre rang mérite mieux que ce taudis.",
     "Ein Mann Eures Ranges verdient Besseres als diese Hütte.",
     "Un uomo del tuo rango merita di meglio di questo tugurio.",
     "Un hombre de tu categoría merece algo mejor que esta choza."),
    ("The miller owes me twelve coppers.",
     "Le meunier me doit douze sous.",
     "Der Müller schuldet mir zwölf Kupferstücke.",
     "Il mugnaio mi deve dodici monete di rame.",
     "El molinero me debe doce cobres."),
    ("Nothing here but dust and rats.",
     "Rien ici que poussière et rats.",
     "Hier gibt es nur Staub und Ratten.",
     "Qui non c'è che polvere e ratti.",
     "Aquí no hay más que polvo y ratas."),
    ("Ask the innkeeper about the cellar.",
     "Interrogez l'aubergiste sur la cave.",
     "Fragt den Wirt nach dem Keller.",
     "Chiedi all'oste della cantina.",
     "Pregunta al posadero por el sótano."),
    ("I remember you. You broke the miller's cart.",
     "Je me souviens de vous. Vous avez cassé la charrette du meunier.",
     "Ich erinnere mich an Euch. Ihr habt den Karren des Müllers zerbrochen.",
     "Mi ricordo di te. Hai rotto il carro del mugnaio.",
     "Te recuerdo. Rompiste el carro del molinero."),
    ("The road north is washed out. Take the forest path instead.",
     "La route du nord est emportée. Prenez plutôt le sentier de la forêt.",
     "Die Nordstraße ist weggespült. Nehmt stattdessen den Waldpfad.",
     "La strada a nord è franata. Prendi invece il sentiero nel bosco.",
     "El camino del norte está arrasado. Toma mejor la senda del bosque."),
    ("The chapel bell has not rung since winter.",
     "La cloche de la chapelle n'a pas sonné depuis l'hiver.",
     "Die Kapellenglocke hat seit dem Winter nicht geläutet.",
     "La campana della cappella non suona dall'inverno.",
     "La campana de la capilla no suena desde el invierno."),
    ("Wolves took two sheep last night.",
     "Les loups ont pris deux moutons la nuit dernière.",
     "Wölfe haben letzte Nacht zwei Schafe gerissen.",
     "I lupi hanno preso due pecore la notte scorsa.",
     "Los lobos se llevaron dos ovejas anoche."),
    ("The bridge toll doubled this spring.",
     "Le péage du pont a doublé ce printemps.",
     "Der Brückenzoll hat sich im Frühjahr verdoppelt.",
     "Il pedaggio del ponte è raddoppiato questa primavera.",
     "El peaje del puente se duplicó esta primavera."),
    ("Nobody fishes the black pond anymore.",
     "Personne ne pêche plus dans l'étang noir.",
     "Niemand fischt mehr im schwarzen Teich.",
     "Nessuno pesca più nello stagno nero.",
     "Ya nadie pesca en el estanque negro."),
    ("The smith left for the capital years ago.",
     "Le forgeron est parti pour la capitale il y a des années.",
     "Der Schmied ging vor Jahren in die Hauptstadt.",
     "Il fabbro partì per la capitale anni fa.",
     "El herrero se marchó a la capital hace años."),
    ("Keep your voice down in the archive.",
     "Baissez la voix dans les archives.",
     "Senkt die Stimme im Archiv.",
     "Abbassa la voce nell'archivio.",
     "Baja la voz en el archivo."),
    ("May the road rise to meet you.",
     None,
     "Möge der Weg Euch entgegenkommen.",
     "Che la strada ti venga incontro.",
     "Que el camino salga a tu encuentro."),
]

VEXA = [
    ("After I overheard the deal they made with Lorso in the Czerka offices, I confronted them. When they tried to run, I chased them down and killed them.",
     "Après avoir surpris leur accord avec Lorso dans les bureaux de la Czerka, je les ai confrontés. Quand ils ont tenté de fuir, je les ai rattrapés et tués.",
     "Nachdem ich ihre Abmachung mit Lorso in den Czerka-Büros belauscht hatte, stellte ich sie. Als sie fliehen wollten, holte ich sie ein und tötete sie.",
     "Dopo aver origliato l'accordo con Lorso negli uffici della Czerka, li ho affrontati. Quando hanno provato a fuggire, li ho raggiunti e uccisi.",
     "Tras escuchar el trato que hicieron con Lorso en las oficinas de Czerka, los encaré. Cuando intentaron huir, los alcancé y los maté."),
    ("[Persuade] Come on, what harm is there in telling me?",
     "Allons, quel mal y a-t-il à me le dire ?",
     "[Überzeugen] Kommt schon, was schadet es, wenn Ihr es mir sagt?",
     "Andiamo, che male c'è a dirmelo?",
     "Vamos, ¿qué daño hay en decírmelo?"),
    ("A technician named Chano, located in unit 2B in Residential Module 082, handles Czerka's droid maintenance.",
     "Un technicien nommé Chano, dans l'unité 2B du module résidentiel 082, assure la maintenance des droïdes de la Czerka.",
     "Ein Techniker namens Chano in Einheit 2B des Wohnmoduls 082 wartet die Droiden der Czerka.",
     "Un tecnico di nome Chano, nell'unità 2B del modulo residenziale 082, cura la manutenzione dei droidi della Czerka.",
     "Un técnico llamado Chano, en la unidad 2B del módulo residencial 082, se encarga de los droides de Czerka."),
    ("Work for Czerka, and be handsomely rewarded.",
     "Travaillez pour la Czerka et soyez grassement récompensé.",
     "Arbeitet für die Czerka und werdet fürstlich entlohnt.",
     "Lavora per la Czerka e sarai lautamente ricompensato.",
     "Trabaja para Czerka y serás bien recompensado."),
    ("[Persuade] You can trust me.",
     "Vous pouvez me faire confiance.",
     "Ihr könnt mir vertrauen.",
     "Puoi fidarti di me.",
     "Confía en mí, ¿vale?"),
    ("The hyperdrive is shot. We are not going anywhere.",
     "L'hyperdrive est mort. Nous n'irons nulle part.",
     "Der Hyperantrieb ist hinüber. Wir kommen hier nicht weg.",
     "L'iperguida è a pezzi. Non andiamo da nessuna parte.",
     "El hiperimpulsor está frito. No vamos a ninguna parte."),
    ("", "", "", "", ""),
    ("Peragus was nothing compared to what I'll do if you don't give me back my ship.",
     "Peragus n'était rien comparé à ce que je ferai si vous ne me rendez pas mon vaisseau.",
     "Peragus war nichts gegen das, was ich tue, wenn Ihr mir mein Schiff nicht zurückgebt.",
     "Peragus non era niente rispetto a ciò che farò se non mi ridai la mia nave.",
     "Peragus no fue nada comparado con lo que haré si no me devuelves mi nave."),
    ("[Persuade/Lie] I had nothing to do with it.",
     "Je n'ai rien à voir avec ça.",
     "Ich hatte damit nichts zu tun.",
     "Non c'entro niente.",
     "No tuve nada que ver con eso."),
    ("You didn't see anything.",
     "Vous n'avez rien vu.",
     "Ihr habt nichts gesehen.",
     "Tu non hai visto niente.",
     "No viste nada."),
    ("Don't worry, I won't tell anybody your secret.",
     "Ne vous inquiétez pas, je ne dirai votre secret à personne.",
     "Keine Sorge, ich verrate Euer Geheimnis niemandem.",
     "Tranquillo, non dirò a nessuno il tuo segreto.",
     "Tranquilo, no le contaré a nadie tu secreto."),
    ("The maintenance shaft is sealed. Use the service corridor.",
     "Le puits de maintenance est scellé. Prenez le couloir de service.",
     "Der Wartungsschacht ist versiegelt. Nehmt den Versorgungsgang.",
     "Il condotto di manutenzione è sigillato. Usa il corridoio di servizio.",
     "El pozo de mantenimiento está sellado. Usa el pasillo de servicio."),
    ("Give me the baby or die, now!",
     "Donnez-moi le bébé ou mourez, tout de suite !",
     "Gebt mir das Kind oder sterbt, sofort!",
     "Dammi il bambino o muori, adesso!",
     "¡Dame al bebé o muere, ahora!"),
    ("Credits first. Then we talk.",
     "Les crédits d'abord. Ensuite on discute.",
     "Erst die Credits. Dann reden wir.",
     "Prima i crediti. Poi parliamo.",
     "Primero los créditos. Luego hablamos."),
    ("[Persuade] We are friends, right?",
     "On est copains, non ?",
     "Wir sind doch Freunde, oder?",
     "Siamo amici, no?",
     "Somos amigos, ¿no?"),
    ("The council will decide your fate.",
     "Le conseil décidera de votre sort.",
     "Der Rat wird über Euer Schicksal entscheiden.",
     "Il consiglio deciderà la tua sorte.",
     "El consejo decidirá tu destino."),
    ("I wait for you here.",
     "Je vous attends ici.",
     "Ich warte hier auf Euch.",
     "Ti aspetto qui.",
     "Te espero aquí."),
    ("Of course you can.",
     "Bien sûr que vous le pouvez.",
     "Natürlich könnt Ihr das.",
     "Certo che puoi.",
     "Claro que puedes."),
    ("Are you aware that the white dragon is the weakest of the many draconic species?",
     "Savez-vous que le dragon blanc est la plus faible des espèces draconiques ?",
     "Wisst Ihr, dass der weiße Drache die schwächste der Drachenarten ist?",
     "Sai che il drago bianco è la più debole delle specie draconiche?",
     "¿Sabes que el dragón blanco es la más débil de las especies dracónicas?"),
    ("Sensors show movement on level three. Could be womp rats.",
     "Les capteurs détectent du mouvement au niveau trois. Sans doute des rats womp.",
     "Die Sensoren zeigen Bewegung auf Ebene drei. Vielleicht Womp-Ratten.",
     "I sensori rilevano movimento al livello tre. Forse ratti womp.",
     "Los sensores detectan movimiento en el nivel tres. Podrían ser ratas womp."),
    ("Docking clamps release in five minutes.",
     "Les bras d'amarrage se libèrent dans cinq minutes.",
     "Die Andockklammern lösen sich in fünf Minuten.",
     "I morsetti di attracco si sganciano tra cinque minuti.",
     "Las abrazaderas de atraque se sueltan en cinco minutos."),
    ("The cantina closes at curfew.",
     "La cantina ferme au couvre-feu.",
     "Die Cantina schließt zur Sperrstunde.",
     "La cantina chiude al coprifuoco.",
     "La cantina cierra con el toque de queda."),
    ("That droid has a bad motivator.",
     "Ce droïde a un mauvais motivateur.",
     "Dieser Droide hat einen defekten Motivator.",
     "Quel droide ha un motivatore difettoso.",
     "Ese droide tiene un motivador estropeado."),
    ("Mining rigs run day and night on the lower decks.",
     "Les foreuses tournent jour et nuit dans les ponts inférieurs.",
     "Die Bohranlagen laufen Tag und Nacht auf den unteren Decks.",
     "Le trivelle lavorano giorno e notte nei ponti inferiori.",
     "Las perforadoras funcionan día y noche en las cubiertas inferiores."),
    ("The exchange does not forgive debts.",
     "L'Échange ne pardonne pas les dettes.",
     "Der Austausch vergibt keine Schulden.",
     "Lo Scambio non perdona i debiti.",
     "El Intercambio no perdona deudas."),
    ("Security cameras cover every corridor on this level.",
     "Des caméras couvrent chaque couloir de ce niveau.",
     "Kameras überwachen jeden Gang auf dieser Ebene.",
     "Le telecamere coprono ogni corridoio di questo livello.",
     "Las cámaras cubren cada pasillo de este nivel."),
]

GAMES = {"thul": THUL, "vexa": VEXA}

# A few entries carry voice-over metadata so the full 40-byte record shape is
# exercised, not just the text path.
SOUND_ENTRIES = {
    ("thul", 0): ("vo_thul_inn_01", 2.5),
    ("thul", 10): ("vo_thul_choice", 1.75),
    ("vexa", 1): ("vo_vexa_harm", 3.25),
}


def pack_table(game: str, language: str, column: int, language_id: int) -> bytes:
    texts = [row[column] for row in GAMES[game] if row[column] is not None]
    records = bytearray()
    heap = bytearray()
    for str_ref, text in enumerate(texts):
        encoded = text.encode("cp1252")
        flags = 0x1 if text else 0x0
        resref, sound_length = SOUND_ENTRIES.get((game, str_ref), ("", 0.0))
        if resref:
            flags |= 0x2 | 0x4
        records += struct.pack(
            "<I16sIIIIf",
            flags,
            resref.encode("ascii").ljust(16, b"\x00"),
            0,
            0,
            len(heap),
            len(encoded) if text else 0,
            sound_length,
        )
        if text:
            heap += encoded
    header = struct.pack(
        "<4s4sIII", b"TLK ", b"V3.0", language_id, len(texts), 20 + len(records)
    )
    return header + bytes(records) + bytes(heap)


def render_xml(game: str, column: int, language_id: int) -> str:
    lines = [f'<?xml version="1.0" encoding="UTF-8"?>', f'<tlk language="{language_id}">']
    str_ref = 0
    for row in GAMES[game]:
        text = row[column]
        if text is None:
            continue
        attrs = f' id="{str_ref}"'
        resref, sound_length = SOUND_ENTRIES.get((game, str_ref), ("", 0.0))
        if resref:
            attrs += f' flags="7" sound="{resref}" soundlength="{sound_length!r}"'
        lines.append(f"  <string{attrs}>{escape(text)}</string>")
        str_ref += 1
    lines.append("</tlk>")
    return "\n".join(lines) + "\n"


def main() -> None:
    for game, rows in GAMES.items():
        for column, (language, language_id) in enumerate(LANGUAGE_IDS.items()):
            path = OUT / game / f"{language}.tlk"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(pack_table(game, language, column, language_id))
            print(f"{path} ({len(rows)} rows)")
    xml_path = OUT / "thul" / "en.xml"
    xml_path.write_text(render_xml("thul", 0, 0), encoding="utf-8")
    print(xml_path)


if __name__ == "__main__":
    main()
