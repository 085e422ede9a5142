"""Bibliographic ingestion: field-tagged and line-delimited record parsers,
cited-reference key normalization, and noun-phrase extraction."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable, Iterator

CITATION_INDEXED = "citation_indexed"
TERM_ONLY = "term_only"


class ParseError(ValueError):
    """Malformed input; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True)
class BibRecord:
    id: str
    year: int
    title: str
    index_terms: tuple[str, ...] = ()
    cited_refs: tuple[str, ...] = ()
    times_cited: int = 0
    source_tag: str = CITATION_INDEXED

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if self.source_tag == TERM_ONLY and self.cited_refs:
            raise ValueError(f"term-only record {self.id!r} cannot carry cited_refs")
        if self.times_cited < 0:
            raise ValueError(f"record {self.id!r} has negative times_cited")


@dataclass(frozen=True)
class ParseResult:
    records: tuple[BibRecord, ...]
    skipped: int = 0


# --------------------------------------------------------------------------
# Reference normalization
# --------------------------------------------------------------------------

_DOI_RE = re.compile(r"\b(?:DOI[: ]*)?10\.\d{4,9}/\S+", re.IGNORECASE)
_YEAR_RE = re.compile(r"^(1[5-9]\d\d|20\d\d)$")
_VOLUME_RE = re.compile(r"^V\d+$")
_PAGE_RE = re.compile(r"^P\w+$")
_TRAILING_PUNCT = " .,;:"


def _clean(raw: str) -> str:
    text = _DOI_RE.sub("", raw)
    text = " ".join(text.split()).upper()
    return text.rstrip(_TRAILING_PUNCT)


def _surname(author_part: str) -> str:
    # Drop trailing initials ("York D" -> "YORK"); keep at least one token.
    tokens = author_part.split()
    while len(tokens) > 1 and len(tokens[-1]) <= 2 and tokens[-1].isalpha():
        tokens.pop()
    return " ".join(tokens)


def normalize_reference(raw: str) -> str:
    """Reduce a raw cited-reference string to a canonical key.

    Comma-separated references become "AUTHOR-YEAR-VENUE-VOL-PAGE" with
    missing components omitted; anything without commas is kept verbatim
    after cleanup (uppercase, collapsed whitespace, DOI and trailing
    punctuation stripped). The result is a fixed point of this function.
    """
    if raw is None or not raw.strip():
        raise NormalizationError("empty reference string")
    cleaned = _clean(raw)
    if not cleaned:
        raise NormalizationError(f"reference reduces to empty: {raw!r}")
    if "," not in cleaned:
        return cleaned
    parts = [p.strip(_TRAILING_PUNCT) for p in cleaned.split(",")]
    parts = [p for p in parts if p and not p.startswith("DOI")]
    if not parts:
        raise NormalizationError(f"reference reduces to empty: {raw!r}")
    author = _surname(parts[0])
    year = None
    year_idx = 0
    for i, part in enumerate(parts[1:], start=1):
        if _YEAR_RE.match(part):
            year, year_idx = part, i
            break
    venue = volume = page = None
    for part in parts[year_idx + 1 :] if year else parts[1:]:
        if volume is None and _VOLUME_RE.match(part):
            volume = part
        elif page is None and _PAGE_RE.match(part):
            page = part
        elif venue is None:
            venue = part
    key = "-".join(c for c in (author, year, venue, volume, page) if c)
    if not key:
        raise NormalizationError(f"reference reduces to empty: {raw!r}")
    return key


# --------------------------------------------------------------------------
# Field-tagged format (2-letter tag + space + content, 3-space continuations,
# ER record terminator, EF file terminator)
# --------------------------------------------------------------------------

_TAG_RE = re.compile(r"^([A-Z][A-Z0-9])(?: (.*))?$")


def _decode_lines(stream: IO[bytes] | bytes | str) -> Iterator[str]:
    if hasattr(stream, "read"):
        data = stream.read()
    else:
        data = stream
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    # Split on newlines only: content may carry exotic Unicode separators
    # that str.splitlines would treat as line breaks.
    for line in data.split("\n"):
        yield line.rstrip("\r")


def parse_field_tagged(stream: IO[bytes] | bytes | str) -> ParseResult:
    """Parse field-tagged bibliographic data (WoS plain-text style).

    Records missing a parsable year or a title are skipped and counted.
    Unknown tags are ignored. Raises :class:`ParseError` on lines that are
    neither tag lines, 3-space continuations, nor blank.
    """
    records: list[BibRecord] = []
    seen_ids: set[str] = set()
    skipped = 0
    fields: dict[str, list[str]] = {}
    current_tag: str | None = None

    def finalize(line_no: int) -> None:
        nonlocal skipped
        if not fields:
            return
        title = " ".join(" ".join(fields.get("TI", [])).split())
        year = _parse_int(fields.get("PY", [None])[0])
        if not title or year is None:
            skipped += 1
            fields.clear()
            return
        times_cited = _parse_int(fields.get("TC", [None])[0]) or 0
        refs = []
        for ref in fields.get("CR", []):
            try:
                refs.append(normalize_reference(ref))
            except NormalizationError:
                continue
        terms = []
        for tag in ("ID", "DE"):
            joined = " ".join(fields.get(tag, []))
            terms.extend(t.strip() for t in joined.split(";") if t.strip())
        rec_id = fields.get("UT", [""])[0].strip() or f"wos-{len(records) + skipped + 1:05d}"
        if rec_id in seen_ids:
            raise ParseError(f"duplicate record id {rec_id!r}", line_no)
        seen_ids.add(rec_id)
        records.append(
            BibRecord(
                id=rec_id,
                year=year,
                title=title,
                index_terms=tuple(terms),
                cited_refs=tuple(refs),
                times_cited=max(times_cited, 0),
                source_tag=CITATION_INDEXED,
            )
        )
        fields.clear()

    line_no = 0
    for line_no, line in enumerate(_decode_lines(stream), start=1):
        if not line.strip():
            current_tag = None
            continue
        if line.startswith("   "):
            if current_tag is None:
                raise ParseError("continuation line without a field", line_no)
            fields[current_tag].append(line.strip())
            continue
        match = _TAG_RE.match(line)
        if not match:
            raise ParseError(f"malformed tag line: {line[:40]!r}", line_no)
        tag, content = match.group(1), match.group(2) or ""
        if tag == "ER":
            finalize(line_no)
            current_tag = None
        elif tag == "EF":
            break
        else:
            fields.setdefault(tag, []).append(content.strip())
            current_tag = tag
    finalize(line_no + 1)
    return ParseResult(tuple(records), skipped)


def _parse_int(text: str | None) -> int | None:
    if text is None:
        return None
    try:
        return int(text.strip())
    except ValueError:
        return None


def records_to_field_tagged(records: Iterable[BibRecord]) -> str:
    """Serialize records to the field-tagged format (fixtures and exports).

    Whitespace in titles is collapsed the same way the parser collapses it,
    so embedded newlines cannot corrupt the block structure.
    """
    lines: list[str] = []
    for rec in records:
        lines.append(f"UT {rec.id}")
        lines.append(f"TI {' '.join(rec.title.split())}")
        lines.append(f"PY {rec.year}")
        lines.append(f"TC {rec.times_cited}")
        if rec.index_terms:
            lines.append(f"ID {'; '.join(rec.index_terms)}")
        for i, ref in enumerate(rec.cited_refs):
            lines.append(f"CR {ref}" if i == 0 else f"   {ref}")
        lines.append("ER")
        lines.append("")
    lines.append("EF")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Line-delimited format (one JSON object per line: id/year/title/terms)
# --------------------------------------------------------------------------


def parse_line_records(stream: IO[bytes] | bytes | str) -> ParseResult:
    """Parse line-delimited records from citation-free sources.

    Every record gets ``source_tag=term_only`` and empty ``cited_refs``.
    """
    records: list[BibRecord] = []
    seen_ids: set[str] = set()
    for line_no, line in enumerate(_decode_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"unparsable record: {exc.msg}", line_no) from exc
        if not isinstance(obj, dict):
            raise ParseError("record is not a key-value object", line_no)
        missing = {"id", "year", "title"} - obj.keys()
        if missing:
            raise ParseError(f"missing keys: {sorted(missing)}", line_no)
        rec_id = str(obj["id"])
        if rec_id in seen_ids:
            raise ParseError(f"duplicate record id {rec_id!r}", line_no)
        seen_ids.add(rec_id)
        year = _parse_int(str(obj["year"]))
        if year is None:
            raise ParseError(f"unparsable year: {obj['year']!r}", line_no)
        terms = obj.get("terms") or []
        if not isinstance(terms, list):
            raise ParseError("terms must be a list", line_no)
        records.append(
            BibRecord(
                id=rec_id,
                year=year,
                title=str(obj["title"]),
                index_terms=tuple(str(t) for t in terms),
                cited_refs=(),
                times_cited=max(_parse_int(str(obj.get("times_cited", 0))) or 0, 0),
                source_tag=TERM_ONLY,
            )
        )
    return ParseResult(tuple(records), 0)


def records_to_lines(records: Iterable[BibRecord]) -> str:
    """Serialize records to the line-delimited format (term-only fields)."""
    lines = []
    for rec in records:
        lines.append(
            json.dumps(
                {
                    "id": rec.id,
                    "year": rec.year,
                    "title": rec.title,
                    "terms": list(rec.index_terms),
                    "times_cited": rec.times_cited,
                },
                sort_keys=True,
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


# --------------------------------------------------------------------------
# Noun phrases
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NounPhrase:
    tokens: tuple[str, ...]

    @property
    def surface(self) -> str:
        return " ".join(self.tokens)


_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
MAX_PHRASE_TOKENS = 5


def load_stopwords(path: str | None = None) -> frozenset[str]:
    """Load a stopword list: one word per line, '#' comments."""
    if path is None:
        text = resources.files("cocitemap.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


DEFAULT_STOPWORDS = load_stopwords()


def stem_plural(token: str) -> str:
    """Strip plural suffixes until a fixed point, so stemming is idempotent."""
    while True:
        stemmed = _stem_once(token)
        if stemmed == token:
            return token
        token = stemmed


def _stem_once(token: str) -> str:
    if len(token) > 3 and token.endswith("ies"):
        return token[:-3] + "y"
    if len(token) > 3 and token.endswith(("ses", "xes", "ches", "shes")):
        return token[:-2]
    if len(token) > 2 and token.endswith("s") and not token.endswith("ss"):
        return token[:-1]
    return token


def extract_noun_phrases(
    text: str,
    stopwords: frozenset[str] | None = None,
    max_tokens: int = MAX_PHRASE_TOKENS,
) -> list[NounPhrase]:
    """Chunk text into stopword-free noun phrases of 1..max_tokens tokens.

    Lowercases, splits at punctuation, stopwords, digit-only tokens, and
    sub-2-character tokens, then plural-stems each remaining token. Runs
    longer than max_tokens are emitted in consecutive pieces.
    """
    sw = DEFAULT_STOPWORDS if stopwords is None else stopwords
    phrases: list[NounPhrase] = []
    chunk: list[str] = []

    def flush() -> None:
        for start in range(0, len(chunk), max_tokens):
            piece = chunk[start : start + max_tokens]
            phrases.append(NounPhrase(tuple(piece)))
        chunk.clear()

    for token in _WORD_RE.findall(text.lower()):
        if token in sw or token.isdigit() or len(token) < 2:
            flush()
            continue
        stemmed = stem_plural(token)
        if stemmed in sw or len(stemmed) < 2:
            flush()
            continue
        chunk.append(stemmed)
    flush()
    return phrases


def record_phrases(
    record: BibRecord,
    source: str = "title",
    stopwords: frozenset[str] | None = None,
) -> list[NounPhrase]:
    """Noun phrases of one record from its title or index terms."""
    if source == "title":
        return extract_noun_phrases(record.title, stopwords)
    if source == "index":
        phrases: list[NounPhrase] = []
        for term in record.index_terms:
            phrases.extend(extract_noun_phrases(term, stopwords))
        return phrases
    raise ValueError(f"unknown phrase source: {source!r}")
