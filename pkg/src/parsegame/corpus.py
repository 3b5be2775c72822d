"""Sentence corpus: garden-path templates, mora counting, and file IO.

The corpus groups sentences into fillers and three six-phrase garden-path
variants that share the surface template

    NP-NOM  NP-ACC  V-PAST  NP-DAT  X  V-PAST

and differ only in the fifth slot, which flips the global attachment of the
early phrases:

* ``CTRL`` - X is a nominative NP; phrases 1 and 2 attach to the first verb.
* ``EB``   - X is an accusative NP; phrase 1 attaches to the final verb.
* ``LB``   - X is anything else; phrases 1 and 2 attach to the final verb.

Corpus files are UTF-8 JSON Lines: a format header line followed by one
record per sentence (schema documented in the README).  Stored mora and
character counts are the runtime fast path; validation re-derives them from
readings and flags any drift.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Sequence

from .transition import GoldTree, Phrase, Sentence, validate_tree

CORPUS_FORMAT = "parsegame-corpus"
CORPUS_VERSION = 1


class SentenceType(str, Enum):
    FILLER = "FILLER"
    CTRL = "CTRL"
    EB = "EB"
    LB = "LB"


GP_TYPES = (SentenceType.CTRL, SentenceType.EB, SentenceType.LB)


class CaseMarker(str, Enum):
    NOM = "NOM"
    ACC = "ACC"
    DAT = "DAT"
    OTHER = "OTHER"


class InvalidReadingError(ValueError):
    """A reading contains something other than katakana (plus the long-vowel mark)."""


class InsufficientLexiconError(ValueError):
    """The lexicon cannot fill a template without repeating a noun phrase."""


class CorpusParseError(ValueError):
    """A corpus file failed to parse; carries line context."""

    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


# Small kana that merge into the preceding mora.
_MERGED_SMALL = set("ャュョァィゥェォ")
# Counted as morae of their own despite being "small" or non-syllabic.
_LONG_VOWEL = "ー"  # ー
_SMALL_TSU = "ッ"


def count_morae(reading: str) -> int:
    """Count morae in a katakana reading.

    One mora per kana, except the small glide/vowel kana (ャュョァィゥェォ)
    which merge into the preceding kana.  The small tsu and the long-vowel
    mark each count as a full mora.
    """
    if not reading:
        raise InvalidReadingError("empty reading")
    count = 0
    for ch in reading:
        if ch == _LONG_VOWEL or ch == _SMALL_TSU:
            count += 1
        elif ch in _MERGED_SMALL:
            continue
        elif "ァ" <= ch <= "ヶ":
            count += 1
        else:
            raise InvalidReadingError(f"non-katakana character {ch!r} in {reading!r}")
    return count


def make_phrase(
    index: int,
    surface: str,
    reading: str | None = None,
    case_marker: str | None = None,
    char_count: int | None = None,
    mora_count: int | None = None,
) -> Phrase:
    """Build a phrase, deriving character and mora counts when not supplied."""
    if char_count is None:
        char_count = len(surface)
    if mora_count is None:
        if reading is None:
            raise ValueError(f"phrase {surface!r} needs a reading or an explicit mora count")
        mora_count = count_morae(reading)
    return Phrase(
        index=index,
        surface=surface,
        char_count=char_count,
        mora_count=mora_count,
        reading=reading,
        case_marker=case_marker,
    )


def gold_tree_for(sentence_type: SentenceType) -> GoldTree:
    """The reference tree of a garden-path variant.

    Fixed arcs per variant: CTRL attaches phrases 1 and 2 to the first verb
    and phrase 5 to the final verb; EB sends phrase 1 to the final verb and
    phrases 2 and 5 to their nearest verbs; LB sends both early NPs to the
    final verb.  In all three, the relative clause (3,4) and the dative
    host (4,6) complete the only projective rightward reading.  All three
    choices live here so a corpus-wide correction touches one function.
    """
    if sentence_type is SentenceType.CTRL:
        return GoldTree((3, 3, 4, 6, 6, 0))
    if sentence_type is SentenceType.EB:
        return GoldTree((6, 3, 4, 6, 6, 0))
    if sentence_type is SentenceType.LB:
        return GoldTree((6, 6, 4, 6, 6, 0))
    raise ValueError(f"no template tree for {sentence_type}")


@dataclass(frozen=True)
class SlotSpec:
    """One template slot: the lexicon role that fills it and its case marker."""

    role: str  # "NP" | "V" | "X"
    marker: CaseMarker | None


@dataclass(frozen=True)
class GpTemplate:
    sentence_type: SentenceType
    slots: tuple[SlotSpec, ...]
    gold: GoldTree


def _template(sentence_type: SentenceType, fifth: SlotSpec) -> GpTemplate:
    slots = (
        SlotSpec("NP", CaseMarker.NOM),
        SlotSpec("NP", CaseMarker.ACC),
        SlotSpec("V", None),
        SlotSpec("NP", CaseMarker.DAT),
        fifth,
        SlotSpec("V", None),
    )
    return GpTemplate(sentence_type, slots, gold_tree_for(sentence_type))


TEMPLATES: dict[SentenceType, GpTemplate] = {
    SentenceType.CTRL: _template(SentenceType.CTRL, SlotSpec("NP", CaseMarker.NOM)),
    SentenceType.EB: _template(SentenceType.EB, SlotSpec("NP", CaseMarker.ACC)),
    # The fifth phrase of an LB sentence is anything non-nominative,
    # non-accusative; the fixture lexicon uses adverbials.
    SentenceType.LB: _template(SentenceType.LB, SlotSpec("X", CaseMarker.OTHER)),
}

_MARKERS = {
    CaseMarker.NOM: ("が", "ガ"),
    CaseMarker.ACC: ("を", "ヲ"),
    CaseMarker.DAT: ("に", "ニ"),
}


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    reading: str
    char_count: int
    mora_count: int

    @classmethod
    def build(cls, surface: str, reading: str) -> "LexiconEntry":
        return cls(surface, reading, len(surface), count_morae(reading))


@dataclass(frozen=True)
class Lexicon:
    """Slot-role word lists for template filling."""

    nouns: tuple[LexiconEntry, ...]
    verbs_past: tuple[LexiconEntry, ...]
    others: tuple[LexiconEntry, ...]

    def verify(self) -> None:
        for group in (self.nouns, self.verbs_past, self.others):
            for entry in group:
                derived = count_morae(entry.reading)
                if derived != entry.mora_count:
                    raise ValueError(
                        f"lexicon entry {entry.surface!r}: stored mora count "
                        f"{entry.mora_count} != derived {derived}"
                    )


@dataclass(frozen=True)
class SentenceRecord:
    """A sentence paired with its reference tree."""

    sentence: Sentence
    gold: GoldTree

    @property
    def id(self) -> str:
        return self.sentence.id

    @property
    def type(self) -> SentenceType:
        return SentenceType(self.sentence.type_tag)


def generate_gp_sentence(
    sentence_type: SentenceType,
    lexicon: Lexicon,
    rng_seed: int,
    sentence_id: str | None = None,
) -> SentenceRecord:
    """Fill a garden-path template from the lexicon, deterministically per seed.

    Noun phrases never repeat within a sentence, and the two verb slots draw
    distinct verbs; either constraint failing raises
    :class:`InsufficientLexiconError`.
    """
    if sentence_type not in TEMPLATES:
        raise ValueError(f"cannot generate sentences of type {sentence_type}")
    template = TEMPLATES[sentence_type]
    rng = random.Random(rng_seed)

    np_slots = sum(1 for slot in template.slots if slot.role == "NP")
    if len(lexicon.nouns) < np_slots:
        raise InsufficientLexiconError(
            f"{sentence_type.value} needs {np_slots} distinct noun phrases, "
            f"lexicon has {len(lexicon.nouns)}"
        )
    if len(lexicon.verbs_past) < 2:
        raise InsufficientLexiconError(
            f"{sentence_type.value} needs 2 distinct past verbs, "
            f"lexicon has {len(lexicon.verbs_past)}"
        )
    if any(slot.role == "X" for slot in template.slots) and not lexicon.others:
        raise InsufficientLexiconError(f"{sentence_type.value} needs an adverbial entry")

    nouns = rng.sample(list(lexicon.nouns), np_slots)
    verbs = rng.sample(list(lexicon.verbs_past), 2)
    phrases: list[Phrase] = []
    for pos, slot in enumerate(template.slots, start=1):
        if slot.role == "NP":
            word = nouns.pop(0)
            marker_surface, marker_reading = _MARKERS[slot.marker]
            phrases.append(
                make_phrase(
                    pos,
                    word.surface + marker_surface,
                    word.reading + marker_reading,
                    case_marker=slot.marker.value,
                )
            )
        elif slot.role == "V":
            word = verbs.pop(0)
            phrases.append(make_phrase(pos, word.surface, word.reading))
        else:
            word = rng.choice(lexicon.others)
            phrases.append(
                make_phrase(pos, word.surface, word.reading, case_marker=slot.marker.value)
            )

    if sentence_id is None:
        sentence_id = f"{sentence_type.value.lower()}_{rng_seed:04d}"
    sentence = Sentence(sentence_id, tuple(phrases), sentence_type.value)
    return SentenceRecord(sentence, template.gold)


@dataclass
class CorpusFile:
    """A loaded corpus: versioned, id-addressable sentence records."""

    version: int
    records: tuple[SentenceRecord, ...]
    _by_id: dict[str, SentenceRecord] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.records = tuple(self.records)
        self._by_id = {}
        for record in self.records:
            # Duplicates are reported by validate_corpus; keep the first here.
            self._by_id.setdefault(record.id, record)

    def __len__(self) -> int:
        return len(self.records)

    def get(self, sentence_id: str) -> SentenceRecord | None:
        return self._by_id.get(sentence_id)

    def of_type(self, sentence_type: SentenceType) -> tuple[SentenceRecord, ...]:
        return tuple(r for r in self.records if r.type is sentence_type)

    @property
    def fillers(self) -> tuple[SentenceRecord, ...]:
        return self.of_type(SentenceType.FILLER)


@dataclass(frozen=True)
class CorpusValidity:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def record_to_dict(record: SentenceRecord) -> dict:
    return {
        "id": record.sentence.id,
        "type": record.sentence.type_tag,
        "phrases": [
            {
                "surface": p.surface,
                "reading": p.reading,
                "chars": p.char_count,
                "morae": p.mora_count,
                "marker": p.case_marker,
            }
            for p in record.sentence.phrases
        ],
        "heads": list(record.gold.heads),
    }


def record_from_dict(data: dict) -> SentenceRecord:
    phrases = tuple(
        Phrase(
            index=pos,
            surface=p["surface"],
            char_count=p["chars"],
            mora_count=p["morae"],
            reading=p.get("reading"),
            case_marker=p.get("marker"),
        )
        for pos, p in enumerate(data["phrases"], start=1)
    )
    sentence = Sentence(data["id"], phrases, data["type"])
    return SentenceRecord(sentence, GoldTree(tuple(data["heads"])))


def load_corpus(path: str | Path) -> CorpusFile:
    """Read a JSONL corpus file; parse failures carry file/line context."""
    path = Path(path)
    records: list[SentenceRecord] = []
    version = CORPUS_VERSION
    with path.open(encoding="utf-8") as fp:
        for line_no, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusParseError(str(path), line_no, f"invalid JSON: {exc}") from exc
            if line_no == 1 and data.get("format") == CORPUS_FORMAT:
                version = data.get("version", CORPUS_VERSION)
                continue
            try:
                records.append(record_from_dict(data))
            except (KeyError, TypeError, ValueError) as exc:
                raise CorpusParseError(str(path), line_no, f"bad record: {exc}") from exc
    return CorpusFile(version=version, records=tuple(records))


def dump_corpus(corpus: CorpusFile, fp: IO[str]) -> None:
    header = {"format": CORPUS_FORMAT, "version": corpus.version}
    fp.write(json.dumps(header, ensure_ascii=False, sort_keys=True) + "\n")
    for record in corpus.records:
        fp.write(
            json.dumps(record_to_dict(record), ensure_ascii=False, sort_keys=True) + "\n"
        )


def save_corpus(corpus: CorpusFile, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fp:
        dump_corpus(corpus, fp)


def validate_corpus(corpus: CorpusFile) -> CorpusValidity:
    """Lint a corpus; every problem is reported, none raised.

    Checks id uniqueness, minimum length, tree validity, garden-path
    structural conformance against the templates, and that stored character
    and mora counts match what the surfaces and readings derive to.
    """
    violations: list[str] = []
    seen: set[str] = set()
    for record in corpus.records:
        rid = record.id
        if rid in seen:
            violations.append(f"{rid}: duplicate sentence id")
        seen.add(rid)

        sentence = record.sentence
        if sentence.n < 2:
            violations.append(f"{rid}: sentence has {sentence.n} phrase(s); need at least 2")
            continue

        tree = validate_tree(record.gold, sentence.n)
        violations.extend(f"{rid}: {v}" for v in tree.violations)

        try:
            stype = record.type
        except ValueError:
            violations.append(f"{rid}: unknown sentence type {sentence.type_tag!r}")
            continue

        if stype in TEMPLATES:
            template = TEMPLATES[stype]
            if sentence.n != len(template.slots):
                violations.append(
                    f"{rid}: {stype.value} sentence has {sentence.n} phrases, expected "
                    f"{len(template.slots)}"
                )
            else:
                for phrase, slot in zip(sentence.phrases, template.slots):
                    expected = slot.marker.value if slot.marker else None
                    if phrase.case_marker != expected:
                        violations.append(
                            f"{rid}: phrase {phrase.index} marker "
                            f"{phrase.case_marker!r}, template requires {expected!r}"
                        )
                if record.gold.heads != template.gold.heads:
                    violations.append(
                        f"{rid}: heads {list(record.gold.heads)} do not match the "
                        f"{stype.value} template {list(template.gold.heads)}"
                    )

        for phrase in sentence.phrases:
            if phrase.char_count != len(phrase.surface):
                violations.append(
                    f"{rid}: phrase {phrase.index} stores {phrase.char_count} chars, "
                    f"surface has {len(phrase.surface)}"
                )
            if phrase.reading is not None:
                try:
                    derived = count_morae(phrase.reading)
                except InvalidReadingError as exc:
                    violations.append(f"{rid}: phrase {phrase.index}: {exc}")
                    continue
                if derived != phrase.mora_count:
                    violations.append(
                        f"{rid}: phrase {phrase.index} stores {phrase.mora_count} morae, "
                        f"reading derives {derived}"
                    )
    return CorpusValidity(tuple(violations))


def corpus_summary(corpus: CorpusFile) -> dict:
    """Counts and ids per category, for the service and CLI."""
    summary: dict = {"total": len(corpus), "by_type": {}}
    for stype in SentenceType:
        records = corpus.of_type(stype)
        summary["by_type"][stype.value] = {
            "count": len(records),
            "ids": [r.id for r in records],
        }
    return summary
