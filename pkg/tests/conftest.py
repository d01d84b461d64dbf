import random
import struct
from pathlib import Path

from tlkcorpus import tlk

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

# cp1252-friendly word pool, accents included on purpose.
WORDS = (
    "the a door gate key ship crate guard captain river tower mine road "
    "credits gold vertraut schlüssel épée niño già dragón cœur straße "
    "trust me now here open closed broken old new dark"
).split()


def random_entry(rnd: random.Random) -> tlk.TlkEntry:
    has_text = rnd.random() < 0.8
    text = " ".join(rnd.choice(WORDS) for _ in range(rnd.randint(1, 6))) if has_text else ""
    flags = 0
    if has_text or rnd.random() < 0.1:
        flags |= tlk.FLAG_TEXT        # text-present with empty text is legal
    resref = ""
    if rnd.random() < 0.3:
        resref = "vo_" + "".join(rnd.choice("abcdefgh012") for _ in range(rnd.randint(1, 10)))
        flags |= tlk.FLAG_SOUND
    # quantize to float32 so the value survives the 4-byte field
    sound_length = struct.unpack("<f", struct.pack("<f", rnd.random() * 10))[0]
    if sound_length:
        flags |= tlk.FLAG_SOUND_LENGTH
    return tlk.TlkEntry(
        flags=flags,
        text=text if flags & tlk.FLAG_TEXT else "",
        sound_resref=resref,
        volume_variance=rnd.randint(0, 2**32 - 1),
        pitch_variance=rnd.randint(0, 2**32 - 1),
        sound_length=sound_length,
    )


def random_table(rnd: random.Random, max_entries: int = 8) -> tlk.TalkTable:
    return tlk.TalkTable(
        language_id=rnd.randint(0, 10),
        entries=[random_entry(rnd) for _ in range(rnd.randint(0, max_entries))],
    )


def pytest_runtest_logreport(report):
    # One visible line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.rsplit("::", 1)[-1]
        print(f"\n[ACCEPTANCE] {name}: {'PASS' if report.passed else 'FAIL'}")
