"""Shipped fixture lexicon and filler sentences.

The lexicon is a stand-in vocabulary (no frequency or familiarity control);
fillers are authored by hand, not generated, and cover lengths 2 through 6
with a spread of attachment shapes.  ``build_fixture_corpus`` combines the
25 fillers with 15 generated garden-path sentences (5 per variant) into the
corpus shipped under ``parsegame/data/``.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .corpus import (
    GP_TYPES,
    CorpusFile,
    CORPUS_VERSION,
    Lexicon,
    LexiconEntry,
    SentenceRecord,
    SentenceType,
    generate_gp_sentence,
    load_corpus,
    make_phrase,
)
from .transition import GoldTree, Sentence

_NOUNS = [
    ("学生", "ガクセイ"),
    ("先生", "センセイ"),
    ("子供", "コドモ"),
    ("医者", "イシャ"),
    ("記者", "キシャ"),
    ("社長", "シャチョー"),
    ("友達", "トモダチ"),
    ("警官", "ケイカン"),
    ("歌手", "カシュ"),
    ("作家", "サッカ"),
]

_VERBS_PAST = [
    ("褒めた", "ホメタ"),
    ("叱った", "シカッタ"),
    ("呼んだ", "ヨンダ"),
    ("見つけた", "ミツケタ"),
    ("紹介した", "ショーカイシタ"),
    ("手伝った", "テツダッタ"),
]

_OTHERS = [
    ("昨日", "キノー"),
    ("静かに", "シズカニ"),
    ("すぐに", "スグニ"),
    ("何度も", "ナンドモ"),
]


def default_lexicon() -> Lexicon:
    lexicon = Lexicon(
        nouns=tuple(LexiconEntry.build(s, r) for s, r in _NOUNS),
        verbs_past=tuple(LexiconEntry.build(s, r) for s, r in _VERBS_PAST),
        others=tuple(LexiconEntry.build(s, r) for s, r in _OTHERS),
    )
    lexicon.verify()
    return lexicon


def lexicon_to_dict(lexicon: Lexicon) -> dict:
    def group(entries):
        return [
            {
                "surface": e.surface,
                "reading": e.reading,
                "chars": e.char_count,
                "morae": e.mora_count,
            }
            for e in entries
        ]

    return {
        "nouns": group(lexicon.nouns),
        "verbs_past": group(lexicon.verbs_past),
        "others": group(lexicon.others),
    }


def lexicon_from_dict(data: dict) -> Lexicon:
    def group(items):
        return tuple(
            LexiconEntry(e["surface"], e["reading"], e["chars"], e["morae"]) for e in items
        )

    lexicon = Lexicon(
        nouns=group(data["nouns"]),
        verbs_past=group(data["verbs_past"]),
        others=group(data["others"]),
    )
    lexicon.verify()
    return lexicon


def load_lexicon(path: str | Path) -> Lexicon:
    with Path(path).open(encoding="utf-8") as fp:
        return lexicon_from_dict(json.load(fp))


# (surfaces, readings, heads) per filler; mora/char counts derive at build.
_FILLERS: list[tuple[list[str], list[str], list[int]]] = [
    (["犬が", "走った"], ["イヌガ", "ハシッタ"], [2, 0]),
    (["空が", "青い"], ["ソラガ", "アオイ"], [2, 0]),
    (["猫が", "魚を", "食べた"], ["ネコガ", "サカナヲ", "タベタ"], [3, 3, 0]),
    (["子供が", "公園で", "遊んだ"], ["コドモガ", "コーエンデ", "アソンダ"], [3, 3, 0]),
    (["先生が", "本を", "読んだ"], ["センセイガ", "ホンヲ", "ヨンダ"], [3, 3, 0]),
    (["鳥が", "空を", "飛んだ"], ["トリガ", "ソラヲ", "トンダ"], [3, 3, 0]),
    (["赤い", "花が", "咲いた"], ["アカイ", "ハナガ", "サイタ"], [2, 3, 0]),
    (
        ["母が", "駅で", "友達に", "会った"],
        ["ハハガ", "エキデ", "トモダチニ", "アッタ"],
        [4, 4, 4, 0],
    ),
    (
        ["兄が", "新しい", "車を", "買った"],
        ["アニガ", "アタラシイ", "クルマヲ", "カッタ"],
        [4, 3, 4, 0],
    ),
    (
        ["小さな", "犬が", "庭を", "走った"],
        ["チイサナ", "イヌガ", "ニワヲ", "ハシッタ"],
        [2, 4, 4, 0],
    ),
    (
        ["学生が", "図書館で", "熱心に", "勉強した"],
        ["ガクセイガ", "トショカンデ", "ネッシンニ", "ベンキョーシタ"],
        [4, 4, 4, 0],
    ),
    (
        ["祖父が", "孫に", "昔話を", "語った"],
        ["ソフガ", "マゴニ", "ムカシバナシヲ", "カタッタ"],
        [4, 4, 4, 0],
    ),
    (
        ["妹が", "台所で", "ケーキを", "作った"],
        ["イモートガ", "ダイドコロデ", "ケーキヲ", "ツクッタ"],
        [4, 4, 4, 0],
    ),
    (
        ["友達が", "駅前で", "大きな", "荷物を", "運んだ"],
        ["トモダチガ", "エキマエデ", "オオキナ", "ニモツヲ", "ハコンダ"],
        [5, 5, 4, 5, 0],
    ),
    (
        ["父が", "会社で", "長い", "手紙を", "書いた"],
        ["チチガ", "カイシャデ", "ナガイ", "テガミヲ", "カイタ"],
        [5, 5, 4, 5, 0],
    ),
    (
        ["白い", "鳥が", "高い", "空を", "飛んだ"],
        ["シロイ", "トリガ", "タカイ", "ソラヲ", "トンダ"],
        [2, 5, 4, 5, 0],
    ),
    (
        ["医者が", "患者に", "薬を", "渡した"],
        ["イシャガ", "カンジャニ", "クスリヲ", "ワタシタ"],
        [4, 4, 4, 0],
    ),
    (
        ["姉が", "朝から", "部屋を", "掃除した"],
        ["アネガ", "アサカラ", "ヘヤヲ", "ソージシタ"],
        [4, 4, 4, 0],
    ),
    (
        ["弟が", "公園で", "古い", "友達と", "遊んだ"],
        ["オトートガ", "コーエンデ", "フルイ", "トモダチト", "アソンダ"],
        [5, 5, 4, 5, 0],
    ),
    (
        ["歌手が", "舞台で", "新しい", "歌を", "歌った"],
        ["カシュガ", "ブタイデ", "アタラシイ", "ウタヲ", "ウタッタ"],
        [5, 5, 4, 5, 0],
    ),
    (
        ["隣の", "家の", "犬が", "夜に", "吠えた"],
        ["トナリノ", "イエノ", "イヌガ", "ヨルニ", "ホエタ"],
        [2, 3, 5, 5, 0],
    ),
    (
        ["警官が", "街角で", "迷子の", "子供を", "助けた"],
        ["ケイカンガ", "マチカドデ", "マイゴノ", "コドモヲ", "タスケタ"],
        [5, 5, 4, 5, 0],
    ),
    (
        ["作家が", "静かな", "部屋で", "長い", "小説を", "書いた"],
        ["サッカガ", "シズカナ", "ヘヤデ", "ナガイ", "ショーセツヲ", "カイタ"],
        [6, 3, 6, 5, 6, 0],
    ),
    (
        ["記者が", "朝の", "会議で", "重要な", "質問を", "した"],
        ["キシャガ", "アサノ", "カイギデ", "ジューヨーナ", "シツモンヲ", "シタ"],
        [6, 3, 6, 5, 6, 0],
    ),
    (
        ["社長が", "新しい", "計画を", "社員に", "説明した"],
        ["シャチョーガ", "アタラシイ", "ケイカクヲ", "シャインニ", "セツメイシタ"],
        [5, 3, 5, 5, 0],
    ),
]


def filler_records() -> tuple[SentenceRecord, ...]:
    records = []
    for num, (surfaces, readings, heads) in enumerate(_FILLERS, start=1):
        phrases = tuple(
            make_phrase(pos, surface, reading)
            for pos, (surface, reading) in enumerate(zip(surfaces, readings), start=1)
        )
        sentence = Sentence(f"f{num:03d}", phrases, SentenceType.FILLER.value)
        records.append(SentenceRecord(sentence, GoldTree(tuple(heads))))
    return tuple(records)


def build_fixture_corpus(
    lexicon: Lexicon | None = None,
    gp_per_type: int = 5,
    seed: int = 2024,
) -> CorpusFile:
    """25 authored fillers plus ``gp_per_type`` generated sentences per variant."""
    if lexicon is None:
        lexicon = default_lexicon()
    records = list(filler_records())
    for stype in GP_TYPES:
        for k in range(gp_per_type):
            records.append(
                generate_gp_sentence(
                    stype,
                    lexicon,
                    rng_seed=seed * 1000 + len(records) + k,
                    sentence_id=f"{stype.value.lower()}{k + 1:02d}",
                )
            )
    return CorpusFile(version=CORPUS_VERSION, records=tuple(records))


def _data_path(name: str) -> Path:
    return Path(str(resources.files("parsegame").joinpath("data", name)))


def default_corpus_path() -> Path:
    return _data_path("corpus.jsonl")


def default_lexicon_path() -> Path:
    return _data_path("lexicon.json")


def default_corpus() -> CorpusFile:
    return load_corpus(default_corpus_path())
