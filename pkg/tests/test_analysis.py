"""Covariate extraction, OLS diagnostics, and the category report."""

import random

import numpy as np
import pytest

from parsegame.analysis import (
    CategoryStats,
    CategoryTable,
    Grouping,
    InsufficientDataError,
    ObservationRow,
    RegressionFit,
    UndefinedResidualError,
    YMode,
    analyze_rows,
    category_report,
    design_matrix,
    extract_observations,
    fit_design,
    fit_ols,
    studentized_residuals,
)
from parsegame.bots import NoisyPolicy, OraclePolicy, TimingModel, run_bot_session
from parsegame.engine import build_plan, custom_plan


def hat_matrix_oracle(X, y):
    """Brute-force studentized residuals via the explicit projection matrix."""
    H = X @ np.linalg.inv(X.T @ X) @ X.T
    e = y - H @ y
    n, p = X.shape
    sigma = np.sqrt(e @ e / (n - p))
    return e / (sigma * np.sqrt(1.0 - np.diag(H))), np.diag(H), e


def synth_row(
    subject,
    sid,
    order,
    y,
    morae=10,
    chars=8,
    phrases=4,
    e=None,
    f=None,
    g=None,
    h=None,
    alt=0,
    correct=True,
    category="FILLER",
):
    n1 = phrases - 1
    if e is None:
        e, g = 1, n1 - 1
    if f is None:
        f, h = 1, n1 - 1
    return ObservationRow(
        subject_id=subject,
        sentence_id=sid,
        category=category,
        correct=correct,
        y=y,
        morae=morae,
        characters=chars,
        phrases=phrases,
        order=order,
        n_default_shift=e,
        n_default_reduce=f,
        n_shift=g,
        n_reduce=h,
        alternations=alt,
    )


def random_rows(rng, count, beta_morae=0.0, noise=0.0, intercept=2.0):
    rows = []
    for i in range(count):
        phrases = rng.randint(2, 6)
        n1 = phrases - 1
        e = rng.randint(1, n1)
        f = rng.randint(1, n1)
        morae = rng.randint(4, 30)
        y = intercept + beta_morae * morae + (rng.gauss(0, noise) if noise else 0.0)
        rows.append(
            synth_row(
                f"s{i % 7}",
                f"x{i}",
                order=i + 1,
                y=y,
                morae=morae,
                chars=rng.randint(3, 20),
                phrases=phrases,
                e=e,
                g=n1 - e,
                f=f,
                h=n1 - f,
                alt=rng.randint(0, 5),
            )
        )
    return rows


class TestObservationRow:
    def test_count_invariant_enforced(self):
        with pytest.raises(ValueError):
            synth_row("s", "x", 1, 1.0, phrases=4, e=1, f=1, g=1, h=1)


@pytest.fixture(scope="module")
def oracle_rows(corpus):
    logs = [
        run_bot_session(
            corpus, build_plan(corpus, f"s{i}", seed=50 + i), OraclePolicy(), timing_seed=i
        )
        for i in range(2)
    ]
    return extract_observations(logs), logs


class TestExtraction:

    def test_action_kind_counts_per_category(self, oracle_rows):
        rows, _ = oracle_rows
        expected = {"CTRL": (3, 2, 2, 3), "EB": (1, 3, 4, 2), "LB": (1, 4, 4, 1)}
        for row in rows:
            if row.category in expected:
                actual = (
                    row.n_default_shift,
                    row.n_default_reduce,
                    row.n_shift,
                    row.n_reduce,
                )
                assert actual == expected[row.category]

    def test_counts_always_sum_to_action_law(self, oracle_rows):
        rows, _ = oracle_rows
        for row in rows:
            total = row.n_default_shift + row.n_default_reduce + row.n_shift + row.n_reduce
            assert total == 2 * (row.phrases - 1)

    def test_y_is_judged_seconds(self, oracle_rows):
        rows, logs = oracle_rows
        trial = logs[0].trials[0]
        judged_ms = sum(a.response_ms for a in trial.actions if a.response_ms is not None)
        row = next(
            r
            for r in rows
            if r.subject_id == logs[0].subject_id and r.sentence_id == trial.sentence_id
        )
        assert row.y == pytest.approx(judged_ms / 1000.0)

    def test_order_unique_per_subject(self, oracle_rows):
        rows, _ = oracle_rows
        for subject in {r.subject_id for r in rows}:
            orders = [r.order for r in rows if r.subject_id == subject]
            assert sorted(orders) == list(range(1, 41))

    def test_practice_sessions_excluded_by_default(self, corpus):
        from parsegame.engine import build_practice_plan

        log = run_bot_session(
            corpus, build_practice_plan(corpus, "p", seed=3), OraclePolicy()
        )
        assert extract_observations([log]) == []
        assert len(extract_observations([log], include_practice=True)) == 10

    def test_missing_metadata_names_the_sentence(self, corpus):
        from dataclasses import replace

        from parsegame.analysis import ExtractionError

        plan = custom_plan(corpus, "s", ["f001"])
        log = run_bot_session(corpus, plan, OraclePolicy())
        stripped = replace(
            log,
            trials=tuple(
                replace(t, sentence_id="ghost", phrases=0, morae=0, chars=0)
                for t in log.trials
            ),
        )
        with pytest.raises(ExtractionError, match="ghost"):
            extract_observations([stripped])
        # With a corpus fallback available the lookup still fails for an
        # unknown id, but succeeds for a known one.
        known = replace(
            log,
            trials=tuple(replace(t, phrases=0, morae=0, chars=0) for t in log.trials),
        )
        rows = extract_observations([known], corpus)
        assert rows[0].phrases == corpus.get("f001").sentence.n

    def test_wall_clock_mode_agrees_on_native_logs(self, corpus):
        # Engine trials are exactly animation windows plus judgment waits,
        # so wall clock minus animations equals the judged-response sum.
        plan = custom_plan(corpus, "s", ["ctrl01"])
        log = run_bot_session(corpus, plan, OraclePolicy(), TimingModel(sd_ms=0.0))
        judged = extract_observations([log])[0]
        wall = extract_observations([log], y_mode=YMode.WALL_CLOCK)[0]
        assert wall.y > 0
        assert wall.y == pytest.approx(judged.y, abs=1e-9)


class TestFitOls:
    def test_noiseless_recovery_is_exact(self):
        rows = random_rows(random.Random(0), 60, beta_morae=0.5)
        fit = fit_ols(rows)
        assert isinstance(fit, RegressionFit)
        assert fit.coefficient("intercept") == pytest.approx(2.0, abs=1e-8)
        assert fit.coefficient("morae") == pytest.approx(0.5, abs=1e-8)
        for name in fit.column_names:
            if name not in ("intercept", "morae"):
                assert fit.coefficient(name) == pytest.approx(0.0, abs=1e-8)

    def test_gaussian_noise_recovery_within_three_se(self):
        rng = np.random.default_rng(7)
        n, p = 200, 4
        X = np.column_stack([np.ones(n), rng.standard_normal((n, p - 1))])
        beta_true = np.array([1.0, 0.5, -0.25, 2.0])
        sigma = 0.3
        y = X @ beta_true + rng.normal(0, sigma, n)
        fit = fit_design(X, y)
        cov = sigma**2 * np.linalg.inv(X.T @ X)
        se = np.sqrt(np.diag(cov))
        assert np.all(np.abs(fit.beta - beta_true) <= 3 * se)

    def test_builtin_collinearity_dropped_with_fit_proceeding(self):
        # Action counts satisfy shifts = reduces = phrases - 1, so the
        # trailing count columns are always redundant.
        rows = random_rows(random.Random(3), 80, beta_morae=0.1, noise=0.05)
        fit = fit_ols(rows)
        assert set(fit.dropped_columns) == {"n_shift", "n_reduce"}
        assert fit.p == 8

    def test_uniform_length_corpus_drops_phrases_too(self):
        rng = random.Random(5)
        rows = []
        for i in range(40):
            n1 = 5
            e, f = rng.randint(1, n1), rng.randint(1, n1)
            rows.append(
                synth_row(
                    f"s{i % 4}",
                    f"x{i}",
                    order=i + 1,
                    y=rng.random() + 3.0,
                    morae=rng.randint(10, 25),
                    chars=rng.randint(8, 18),
                    phrases=6,
                    e=e,
                    g=n1 - e,
                    f=f,
                    h=n1 - f,
                    alt=rng.randint(0, 4),
                    category="CTRL",
                )
            )
        fit = fit_ols(rows)
        assert "phrases" in fit.dropped_columns
        assert set(fit.dropped_columns) == {"phrases", "n_shift", "n_reduce"}
        assert fit.n == 40 and fit.p == 7

    def test_incorrect_rows_excluded(self):
        rows = random_rows(random.Random(1), 50, beta_morae=0.2)
        rows += [synth_row("bad", f"b{i}", i + 1, 99.0, correct=False) for i in range(5)]
        fit = fit_ols(rows)
        assert fit.n == 50

    def test_insufficient_data_rejected(self):
        rows = random_rows(random.Random(2), 6)
        with pytest.raises(InsufficientDataError):
            fit_ols(rows)

    def test_residuals_orthogonal_and_leverages_proper(self):
        rows = random_rows(random.Random(4), 120, beta_morae=0.3, noise=0.2)
        fit = fit_ols(rows)
        X, _ = design_matrix([r for r in rows if r.correct])
        dots = X.T @ fit.residuals
        scale = max(np.linalg.norm(fit.residuals), 1.0)
        assert np.all(np.abs(dots) <= 1e-8 * scale * np.linalg.norm(X, axis=0))
        assert np.all(fit.leverages >= -1e-12)
        assert np.all(fit.leverages <= 1.0 + 1e-12)
        assert fit.leverages.sum() == pytest.approx(fit.p)
        assert fit.residuals.sum() == pytest.approx(0.0, abs=1e-8)

    def test_per_subject_grouping(self):
        rows = random_rows(random.Random(6), 140, beta_morae=0.2, noise=0.1)
        fits = fit_ols(rows, Grouping.PER_SUBJECT)
        assert isinstance(fits, dict)
        assert set(fits) == {r.subject_id for r in rows}


class TestStudentizedResiduals:
    def test_matches_hat_matrix_oracle_on_random_designs(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            n = int(rng.integers(20, 200))
            p = int(rng.integers(2, 10))
            X = np.column_stack([np.ones(n), rng.standard_normal((n, p - 1))])
            y = rng.standard_normal(n)
            fit = fit_design(X, y)
            expected, hexp, eexp = hat_matrix_oracle(X, y)
            assert np.max(np.abs(studentized_residuals(fit) - expected)) <= 1e-9
            assert np.max(np.abs(fit.leverages - hexp)) <= 1e-9
            assert np.max(np.abs(fit.residuals - eexp)) <= 1e-9

    def test_equal_leverage_design_scales_uniformly(self):
        # Balanced one-way layout: every point has the same leverage.
        X = np.array([[1.0, 1.0]] * 5 + [[1.0, 0.0]] * 5)
        y = np.arange(10, dtype=float)
        fit = fit_design(X, y)
        assert np.allclose(fit.leverages, fit.leverages[0])
        r = studentized_residuals(fit)
        nonzero = np.abs(fit.residuals) > 1e-12
        ratio = r[nonzero] / fit.residuals[nonzero]
        assert np.allclose(ratio, ratio[0])

    def test_zero_residual_row_is_zero(self):
        rng = np.random.default_rng(3)
        X = np.column_stack([np.ones(8), rng.standard_normal(8)])
        y = X @ np.array([1.0, 2.0])
        y[4:] += rng.standard_normal(4)
        # Shift y[0] so that row 0 lands exactly on the refitted plane:
        # moving y_0 by delta moves its residual by delta * (1 - h_00).
        fit0 = fit_design(X, y)
        y[0] -= fit0.residuals[0] / (1.0 - fit0.leverages[0])
        fit = fit_design(X, y)
        r = studentized_residuals(fit)
        assert abs(fit.residuals[0]) <= 1e-10
        assert r[0] == pytest.approx(0.0, abs=1e-8)
        assert not np.allclose(r, 0.0)

    def test_unit_leverage_raises(self):
        # The second column isolates row 0, giving it leverage exactly 1.
        X = np.array([[1.0, 1.0], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0]])
        y = np.array([5.0, 1.0, 2.0, 3.0])
        fit = fit_design(X, y)
        with pytest.raises(UndefinedResidualError) as exc:
            studentized_residuals(fit)
        assert 0 in exc.value.rows

    def test_perfect_fit_studentizes_to_zeros(self):
        X = np.column_stack([np.ones(6), np.arange(6.0)])
        y = 3.0 + 0.5 * np.arange(6.0)
        fit = fit_design(X, y)
        assert np.allclose(studentized_residuals(fit), 0.0)


class TestCategoryReport:
    def test_oracle_pipeline_reports_full_accuracy(self, corpus):
        logs = [
            run_bot_session(
                corpus, build_plan(corpus, f"s{i}", seed=20 + i), OraclePolicy(), timing_seed=i
            )
            for i in range(3)
        ]
        rows = extract_observations(logs)
        table, _ = analyze_rows(rows)
        assert table.categories() == ("FILLER", "CTRL", "EB", "LB")
        for stats in table.stats:
            assert stats.accuracy_mean == 100.0
            assert stats.srrt_mean is not None

    def test_permutation_invariance(self):
        rows = random_rows(random.Random(8), 90, beta_morae=0.2, noise=0.1)
        fit = fit_ols(rows)
        residuals = studentized_residuals(fit)
        table_a = category_report(rows, residuals)
        shuffled = rows[:]
        random.Random(9).shuffle(shuffled)
        residual_map = dict(zip(fit.row_keys, map(float, residuals)))
        table_b = category_report(shuffled, residual_map)
        assert table_a.get("FILLER").accuracy_mean == table_b.get("FILLER").accuracy_mean
        assert table_a.get("FILLER").srrt_mean == pytest.approx(
            table_b.get("FILLER").srrt_mean
        )

    def test_empty_category_absent_not_zero(self):
        rows = random_rows(random.Random(10), 40, noise=0.1)
        fit = fit_ols(rows)
        table = category_report(rows, studentized_residuals(fit))
        assert table.categories() == ("FILLER",)
        assert table.get("LB") is None

    def test_accuracy_stdev_is_between_subjects(self):
        rows = [
            synth_row("s1", f"a{i}", i + 1, 1.0, correct=True, category="CTRL")
            for i in range(4)
        ] + [
            synth_row("s2", f"b{i}", i + 1, 1.0, correct=(i < 2), category="CTRL")
            for i in range(4)
        ]
        table = category_report(rows, {})
        stats = table.get("CTRL")
        assert stats.accuracy_mean == pytest.approx(75.0)
        # subject accuracies 100 and 50 -> sample stdev 35.36
        assert stats.accuracy_stdev == pytest.approx(35.355339, abs=1e-4)

    def test_table_one_rendering_fixture(self):
        # Human results layout check only; these numbers are a formatting
        # fixture, not something bots reproduce.
        table = CategoryTable(
            (
                CategoryStats("FILLER", 300, 216, 72.0, 19.7, -0.12, 0.12),
                CategoryStats("CTRL", 60, 38, 63.0, 38.9, 0.05, 0.71),
                CategoryStats("EB", 60, 49, 82.0, 21.7, 0.12, 0.51),
                CategoryStats("LB", 60, 27, 45.0, 32.1, 0.81, 0.40),
            )
        )
        text = table.render_text()
        lines = text.splitlines()
        assert len(lines) == 5
        header, acc_ave, acc_sd, srrt_ave, srrt_sd = lines
        assert header.split() == ["Filler", "CTRL", "EB", "LB"]
        assert acc_ave.split() == ["acc.", "(%)", "ave.", "72", "63", "82", "45"]
        assert acc_sd.split() == ["stdev.", "19.7", "38.9", "21.7", "32.1"]
        assert srrt_ave.split() == ["s.r.r.t.", "ave.", "-0.12", "0.05", "0.12", "0.81"]
        assert srrt_sd.split() == ["stdev.", "0.12", "0.71", "0.51", "0.40"]

    def test_delimited_output_structure(self):
        table = CategoryTable(
            (
                CategoryStats("FILLER", 10, 10, 100.0, 0.0, 0.1, 1.0),
                CategoryStats("CTRL", 5, 5, 100.0, 0.0, -0.1, 0.9),
            )
        )
        lines = table.render_delimited().splitlines()
        assert lines[0].split("\t") == ["stat", "Filler", "CTRL"]
        assert [ln.split("\t")[0] for ln in lines[1:]] == [
            "acc_ave",
            "acc_stdev",
            "srrt_ave",
            "srrt_stdev",
        ]

    def test_noisy_bot_accuracy_below_oracle(self, corpus):
        plans = [build_plan(corpus, f"s{i}", seed=30 + i) for i in range(3)]
        oracle_rows = extract_observations(
            [run_bot_session(corpus, p, OraclePolicy(), timing_seed=i) for i, p in enumerate(plans)]
        )
        noisy_rows = extract_observations(
            [
                run_bot_session(corpus, p, NoisyPolicy(0.5, seed=i), timing_seed=i)
                for i, p in enumerate(plans)
            ]
        )
        for category in ("FILLER", "CTRL", "EB", "LB"):
            oracle_acc = np.mean([r.correct for r in oracle_rows if r.category == category])
            noisy_acc = np.mean([r.correct for r in noisy_rows if r.category == category])
            assert noisy_acc < oracle_acc
