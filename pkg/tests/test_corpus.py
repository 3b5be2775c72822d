"""Corpus: mora counting, templates, generation, file IO, validation."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parsegame.corpus import (
    CorpusFile,
    CorpusParseError,
    GP_TYPES,
    InsufficientLexiconError,
    InvalidReadingError,
    Lexicon,
    LexiconEntry,
    SentenceType,
    count_morae,
    dump_corpus,
    generate_gp_sentence,
    gold_tree_for,
    load_corpus,
    record_from_dict,
    record_to_dict,
    save_corpus,
    validate_corpus,
)
from parsegame.fixtures import build_fixture_corpus, filler_records
from parsegame.transition import GoldTree, oracle_policy, run_with_policy, validate_tree


class TestCountMorae:
    @pytest.mark.parametrize(
        "reading,expected",
        [
            ("トーキョー", 4),
            ("キャ", 1),
            ("ガッコー", 4),
            ("シャチョー", 3),
            ("ガクセイ", 4),
            ("ン", 1),
            ("ファイル", 3),
        ],
    )
    def test_examples(self, reading, expected):
        assert count_morae(reading) == expected

    def test_rejects_hiragana(self):
        with pytest.raises(InvalidReadingError):
            count_morae("がっこう")

    def test_rejects_empty(self):
        with pytest.raises(InvalidReadingError):
            count_morae("")

    @given(
        st.lists(
            st.sampled_from(list("アイウエオカキクケコサシスセソタチツテトナニヌネノャュョァィゥェォッー")),
            min_size=1,
            max_size=12,
        )
    )
    def test_never_exceeds_kana_count(self, chars):
        reading = "".join(chars)
        merged = set("ャュョァィゥェォ")
        count = count_morae(reading)
        assert count <= len(reading)
        if not any(c in merged for c in reading):
            assert count == len(reading)


class TestGoldTrees:
    def test_expected_head_arrays(self):
        assert gold_tree_for(SentenceType.CTRL).heads == (3, 3, 4, 6, 6, 0)
        assert gold_tree_for(SentenceType.EB).heads == (6, 3, 4, 6, 6, 0)
        assert gold_tree_for(SentenceType.LB).heads == (6, 6, 4, 6, 6, 0)

    def test_all_valid_and_pairwise_distinct(self):
        trees = [gold_tree_for(t).heads for t in GP_TYPES]
        for heads in trees:
            assert validate_tree(heads, 6).ok
        assert len(set(trees)) == 3

    def test_oracle_round_trip(self, corpus):
        from helpers import bare_sentence

        for stype in GP_TYPES:
            gold = gold_tree_for(stype)
            result = run_with_policy(bare_sentence(6), oracle_policy(gold))
            assert result.heads() == gold.heads

    def test_filler_not_a_template(self):
        with pytest.raises(ValueError):
            gold_tree_for(SentenceType.FILLER)


class TestGenerateGpSentence:
    def test_deterministic_per_seed(self, lexicon):
        a = generate_gp_sentence(SentenceType.CTRL, lexicon, rng_seed=1)
        b = generate_gp_sentence(SentenceType.CTRL, lexicon, rng_seed=1)
        assert a == b

    def test_different_seeds_differ(self, lexicon):
        a = generate_gp_sentence(SentenceType.CTRL, lexicon, rng_seed=1)
        b = generate_gp_sentence(SentenceType.CTRL, lexicon, rng_seed=2)
        assert a != b

    @pytest.mark.parametrize("stype", GP_TYPES)
    def test_markers_follow_template(self, lexicon, stype):
        record = generate_gp_sentence(stype, lexicon, rng_seed=7)
        markers = [p.case_marker for p in record.sentence.phrases]
        fifth = {"CTRL": "NOM", "EB": "ACC", "LB": "OTHER"}[stype.value]
        assert markers == ["NOM", "ACC", None, "DAT", fifth, None]
        assert record.sentence.n == 6

    def test_eb_fifth_phrase_surface_carries_accusative(self, lexicon):
        record = generate_gp_sentence(SentenceType.EB, lexicon, rng_seed=3)
        assert record.sentence.phrases[4].surface.endswith("を")

    def test_no_repeated_noun_phrase(self, lexicon):
        for seed in range(30):
            record = generate_gp_sentence(SentenceType.CTRL, lexicon, rng_seed=seed)
            nps = [
                p.surface[:-1]
                for p in record.sentence.phrases
                if p.case_marker in ("NOM", "ACC", "DAT")
            ]
            assert len(set(nps)) == len(nps)

    def test_insufficient_nouns_rejected(self, lexicon):
        small = Lexicon(
            nouns=(LexiconEntry.build("学生", "ガクセイ"),),
            verbs_past=lexicon.verbs_past,
            others=lexicon.others,
        )
        with pytest.raises(InsufficientLexiconError):
            generate_gp_sentence(SentenceType.LB, small, rng_seed=1)

    def test_gold_attached(self, lexicon):
        record = generate_gp_sentence(SentenceType.LB, lexicon, rng_seed=5)
        assert record.gold.heads == gold_tree_for(SentenceType.LB).heads


class TestCorpusIO:
    def test_fixture_corpus_shape(self, corpus):
        assert len(corpus.fillers) == 25
        for stype in GP_TYPES:
            assert len(corpus.of_type(stype)) == 5
        assert validate_corpus(corpus).ok

    def test_round_trip(self, corpus, tmp_path):
        path = tmp_path / "c.jsonl"
        save_corpus(corpus, path)
        reloaded = load_corpus(path)
        assert [record_to_dict(r) for r in reloaded.records] == [
            record_to_dict(r) for r in corpus.records
        ]

    def test_record_dict_round_trip(self, corpus):
        for record in corpus.records:
            assert record_to_dict(record_from_dict(record_to_dict(record))) == record_to_dict(
                record
            )

    def test_parse_error_carries_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"format": "parsegame-corpus", "version": 1}\nnot json\n')
        with pytest.raises(CorpusParseError) as exc:
            load_corpus(path)
        assert exc.value.line_no == 2

    def test_head_final_violation_reported(self, corpus):
        bad = record_from_dict(
            {
                "id": "bad1",
                "type": "FILLER",
                "phrases": [
                    {"surface": "a", "reading": None, "chars": 1, "morae": 1, "marker": None},
                    {"surface": "b", "reading": None, "chars": 1, "morae": 1, "marker": None},
                    {"surface": "c", "reading": None, "chars": 1, "morae": 1, "marker": None},
                ],
                "heads": [2, 1, 0],
            }
        )
        report = validate_corpus(CorpusFile(1, (bad,)))
        assert any("not to its right" in v for v in report.violations)

    def test_duplicate_id_reported(self, corpus):
        doubled = CorpusFile(1, (corpus.records[0], corpus.records[0]))
        report = validate_corpus(doubled)
        assert any("duplicate" in v for v in report.violations)

    def test_mora_drift_reported(self, corpus):
        data = record_to_dict(corpus.records[0])
        data["phrases"][0]["morae"] += 1
        report = validate_corpus(CorpusFile(1, (record_from_dict(data),)))
        assert any("morae" in v for v in report.violations)

    def test_gp_structure_mismatch_reported(self, corpus):
        data = record_to_dict(corpus.of_type(SentenceType.CTRL)[0])
        data["heads"] = list(gold_tree_for(SentenceType.EB).heads)
        report = validate_corpus(CorpusFile(1, (record_from_dict(data),)))
        assert any("template" in v for v in report.violations)

    def test_single_phrase_reported(self):
        one = record_from_dict(
            {
                "id": "one",
                "type": "FILLER",
                "phrases": [
                    {"surface": "a", "reading": None, "chars": 1, "morae": 1, "marker": None}
                ],
                "heads": [0],
            }
        )
        report = validate_corpus(CorpusFile(1, (one,)))
        assert any("at least 2" in v for v in report.violations)


class TestFixtures:
    def test_fillers_all_valid(self):
        for record in filler_records():
            assert record.sentence.n >= 2
            assert validate_tree(record.gold, record.sentence.n).ok

    def test_filler_lengths_vary(self):
        lengths = {r.sentence.n for r in filler_records()}
        assert lengths == {2, 3, 4, 5, 6}

    def test_build_matches_shipped_file(self, corpus):
        rebuilt = build_fixture_corpus()
        assert [record_to_dict(r) for r in rebuilt.records] == [
            record_to_dict(r) for r in corpus.records
        ]

    def test_shipped_lexicon_consistent(self, lexicon):
        lexicon.verify()
        data = json.loads(
            __import__("parsegame.fixtures", fromlist=["x"])
            .default_lexicon_path()
            .read_text(encoding="utf-8")
        )
        assert len(data["nouns"]) == len(lexicon.nouns)
