"""Reader/writer for Aurora-engine TLK talk tables (binary V3.0 and XML form).

A talk table holds every localized string of a game. Strings are addressed by
their position in the table (the StrRef), which is stable across that game's
localizations, so the same StrRef in the English and German tables is the
same line of dialogue.

Binary layout (all integers little-endian):

  Header (20 bytes):
    0x00  4  magic "TLK "
    0x04  4  version "V3.0"
    0x08  4  language id (uint32)
    0x0C  4  string count (uint32)
    0x10  4  offset to string entries (uint32)

  Entry records (40 bytes each, immediately after the header):
    0x00  4  flags (bit 0 text present, bit 1 sound present, bit 2 sound length present)
    0x04 16  sound resref, NUL padded
    0x14  4  volume variance (uint32)
    0x18  4  pitch variance (uint32)
    0x1C  4  offset to string, relative to the string-entries offset (uint32)
    0x20  4  string size in bytes (uint32)
    0x24  4  sound length in seconds (float32)

  String heap: raw string bytes, not NUL terminated; each entry's offset/size
  pair addresses its slice.

Only version V3.0 is supported; anything else is a typed error rather than a
best-effort parse. The writer always emits the canonical layout: entries in
StrRef order, heap slices concatenated in the same order with minimal,
non-overlapping offsets, so writing is deterministic and canonical files
round-trip byte-exactly.

The XML form mirrors the table one string element per entry:

  <tlk language="0">
    <string id="0">Hello.</string>
    <string id="3" flags="7" sound="vo_hello" soundlength="2.5">Hi.</string>
  </tlk>

Attributes other than id are omitted when they hold their defaults (flags
default to 1 for non-empty text and 0 otherwise). Ids must form a contiguous
zero-based range; gaps are filled with empty text-absent entries and reported
as warnings.
"""

from __future__ import annotations

import struct
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

_HEADER = struct.Struct("<4s4sIII")
_ENTRY = struct.Struct("<I16sIIIIf")

HEADER_SIZE = _HEADER.size      # 20
ENTRY_SIZE = _ENTRY.size        # 40

MAGIC = b"TLK "
VERSION = b"V3.0"

FLAG_TEXT = 0x1
FLAG_SOUND = 0x2
FLAG_SOUND_LENGTH = 0x4

_U32_MAX = 0xFFFFFFFF


class TlkError(Exception):
    """Base for all talk-table errors.

    ``offset`` is the file position the error was detected at, when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (at offset {offset})")
        self.offset = offset


class BadMagicError(TlkError):
    """Input does not start with the TLK signature."""


class BadVersionError(TlkError):
    """Signature is TLK but the version is not V3.0."""


class TruncatedError(TlkError):
    """Declared counts or offsets point beyond the end of the file."""


class DecodeError(TlkError):
    """A byte sequence is invalid for the configured codepage."""


class EncodeError(TlkError):
    """A character cannot be represented in the target codepage."""


class MalformedDocumentError(TlkError):
    """XML input is not a well-formed talk-table document."""


class DuplicateIdError(TlkError):
    """The same string id appears twice in an XML document."""


@dataclass(frozen=True)
class CodepageConfig:
    """Maps a talk table's language id to the single-byte codepage its
    strings are stored in. Ids 0-4 are the Aurora convention (English,
    French, German, Italian, Spanish); all default to Windows-1252 because
    the games ship their Western localizations in it. Unknown ids fall back
    to ``default``."""

    mapping: dict[int, str] = field(
        default_factory=lambda: {i: "cp1252" for i in range(5)}
    )
    default: str = "cp1252"

    def encoding_for(self, language_id: int) -> str:
        return self.mapping.get(language_id, self.default)


DEFAULT_CODEPAGES = CodepageConfig()


@dataclass
class TlkEntry:
    flags: int = 0
    text: str = ""
    sound_resref: str = ""
    volume_variance: int = 0
    pitch_variance: int = 0
    sound_length: float = 0.0

    @property
    def text_present(self) -> bool:
        return bool(self.flags & FLAG_TEXT)

    @classmethod
    def of_text(cls, text: str) -> "TlkEntry":
        return cls(flags=FLAG_TEXT if text else 0, text=text)


@dataclass
class TalkTable:
    """Decoded talk table; the index of an entry IS its StrRef."""

    language_id: int = 0
    entries: list[TlkEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, str_ref: int) -> TlkEntry:
        return self.entries[str_ref]


def parse_tlk(data: bytes, cp: CodepageConfig = DEFAULT_CODEPAGES) -> TalkTable:
    """Decode a complete binary talk-table file image.

    Never reads outside ``data``: any byte string either parses or raises a
    TlkError subclass.
    """
    if len(data) >= 4 and data[:4] != MAGIC:
        raise BadMagicError(f"not a TLK file (signature {data[:4]!r})", offset=0)
    if len(data) < HEADER_SIZE:
        raise TruncatedError(f"file too short for header ({len(data)} bytes)", offset=len(data))
    magic, version, language_id, count, heap_offset = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagicError(f"not a TLK file (signature {magic!r})", offset=0)
    if version != VERSION:
        raise BadVersionError(f"unsupported TLK version {version!r}", offset=4)

    entries_end = HEADER_SIZE + count * ENTRY_SIZE
    if entries_end > len(data):
        raise TruncatedError(
            f"{count} declared entries need {entries_end} bytes, file has {len(data)}",
            offset=HEADER_SIZE,
        )

    encoding = cp.encoding_for(language_id)
    entries = []
    for i in range(count):
        record_at = HEADER_SIZE + i * ENTRY_SIZE
        flags, resref_raw, volume, pitch, str_off, str_size, sound_len = _ENTRY.unpack_from(
            data, record_at
        )
        try:
            resref = resref_raw.rstrip(b"\x00").decode(encoding)
        except UnicodeDecodeError as exc:
            raise DecodeError(f"entry {i} sound resref not valid {encoding}: {exc}",
                              offset=record_at + 4) from None
        text = ""
        if flags & FLAG_TEXT:
            start = heap_offset + str_off
            end = start + str_size
            if end > len(data):
                raise TruncatedError(
                    f"entry {i} string slice [{start}:{end}] exceeds file length {len(data)}",
                    offset=record_at + 0x1C,
                )
            try:
                text = data[start:end].decode(encoding)
            except UnicodeDecodeError as exc:
                raise DecodeError(f"entry {i} text not valid {encoding}: {exc}",
                                  offset=start) from None
        entries.append(
            TlkEntry(
                flags=flags,
                text=text,
                sound_resref=resref,
                volume_variance=volume,
                pitch_variance=pitch,
                sound_length=sound_len,
            )
        )
    return TalkTable(language_id=language_id, entries=entries)


def write_tlk(table: TalkTable, cp: CodepageConfig = DEFAULT_CODEPAGES) -> bytes:
    """Encode a table in the canonical layout. Deterministic: equal tables
    yield identical bytes."""
    encoding = cp.encoding_for(table.language_id)
    heap = bytearray()
    records = bytearray()
    for i, entry in enumerate(table.entries):
        _check_u32(entry.flags, f"entry {i} flags")
        _check_u32(entry.volume_variance, f"entry {i} volume variance")
        _check_u32(entry.pitch_variance, f"entry {i} pitch variance")
        try:
            resref = entry.sound_resref.encode(encoding)
            text = entry.text.encode(encoding) if entry.text_present else b""
        except UnicodeEncodeError as exc:
            raise EncodeError(f"entry {i} not representable in {encoding}: {exc}") from None
        if len(resref) > 16:
            raise EncodeError(f"entry {i} sound resref exceeds 16 bytes: {entry.sound_resref!r}")
        records += _ENTRY.pack(
            entry.flags,
            resref.ljust(16, b"\x00"),
            entry.volume_variance,
            entry.pitch_variance,
            len(heap),
            len(text),
            entry.sound_length,
        )
        heap += text
    header = _HEADER.pack(
        MAGIC, VERSION, table.language_id, len(table.entries),
        HEADER_SIZE + len(records),
    )
    return header + bytes(records) + bytes(heap)


def _check_u32(value: int, what: str) -> None:
    if not 0 <= value <= _U32_MAX:
        raise ValueError(f"{what} out of uint32 range: {value}")


# Characters that cannot survive an XML round trip: control characters are
# rejected outright, and \r would be folded into \n by the XML line-ending
# normalization rules, so it is rejected too.
_XML_UNSAFE = {chr(c) for c in range(0x20)} - {"\t", "\n"}


def write_tlk_xml(table: TalkTable) -> str:
    """Render a table as the XML form described in the module docstring."""
    root = ET.Element("tlk", {"language": str(table.language_id)})
    for str_ref, entry in enumerate(table.entries):
        if any(ch in _XML_UNSAFE for ch in entry.text + entry.sound_resref):
            raise EncodeError(f"entry {str_ref} contains characters XML cannot carry")
        attrs = {"id": str(str_ref)}
        default_flags = FLAG_TEXT if entry.text else 0
        if entry.flags != default_flags:
            attrs["flags"] = str(entry.flags)
        if entry.sound_resref:
            attrs["sound"] = entry.sound_resref
        if entry.volume_variance:
            attrs["volumevariance"] = str(entry.volume_variance)
        if entry.pitch_variance:
            attrs["pitchvariance"] = str(entry.pitch_variance)
        if entry.sound_length != 0.0:
            attrs["soundlength"] = repr(entry.sound_length)
        el = ET.SubElement(root, "string", attrs)
        el.text = entry.text
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def parse_tlk_xml(text: str) -> tuple[TalkTable, list[str]]:
    """Parse the XML form back into a table.

    Returns the table together with a list of warnings, one per id gap that
    was filled with an empty text-absent entry.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedDocumentError(f"not well-formed XML: {exc}") from None
    try:
        language_id = int(root.get("language", "0"))
    except ValueError:
        raise MalformedDocumentError(f"language attribute is not an integer: {root.get('language')!r}") from None

    seen: dict[int, TlkEntry] = {}
    for el in root.iter("string"):
        raw_id = el.get("id")
        if raw_id is None:
            raise MalformedDocumentError("string element without id attribute")
        try:
            str_ref = int(raw_id)
        except ValueError:
            raise MalformedDocumentError(f"id is not an integer: {raw_id!r}") from None
        if str_ref < 0:
            raise MalformedDocumentError(f"id is negative: {str_ref}")
        if str_ref in seen:
            raise DuplicateIdError(f"id {str_ref} appears more than once")
        entry_text = el.text or ""
        flags_attr = el.get("flags")
        if flags_attr is None:
            flags = FLAG_TEXT if entry_text else 0
        else:
            try:
                flags = int(flags_attr)
            except ValueError:
                raise MalformedDocumentError(f"flags is not an integer: {flags_attr!r}") from None
        try:
            seen[str_ref] = TlkEntry(
                flags=flags,
                text=entry_text,
                sound_resref=el.get("sound", ""),
                volume_variance=int(el.get("volumevariance", "0")),
                pitch_variance=int(el.get("pitchvariance", "0")),
                sound_length=float(el.get("soundlength", "0")),
            )
        except ValueError as exc:
            raise MalformedDocumentError(f"bad attribute on string id {str_ref}: {exc}") from None

    warnings: list[str] = []
    entries: list[TlkEntry] = []
    size = max(seen) + 1 if seen else 0
    for str_ref in range(size):
        entry = seen.get(str_ref)
        if entry is None:
            warnings.append(f"id {str_ref} missing; filled with an empty entry")
            entry = TlkEntry()
        entries.append(entry)
    return TalkTable(language_id=language_id, entries=entries), warnings


def looks_like_xml(data: bytes) -> bool:
    """True when the file content starts like an XML document (used by the
    CLI to auto-detect converted talk tables)."""
    return data.lstrip(b"\xef\xbb\xbf \t\r\n").startswith(b"<")
