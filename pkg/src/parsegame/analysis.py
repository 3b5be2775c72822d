"""Response-time analysis: covariate extraction, OLS, studentized residuals.

Each correctly or incorrectly parsed trial flattens to one observation row
with nine covariates: (a) morae, (b) characters, (c) phrases, (d)
presentation order, (e) default shifts, (f) default reduces, (g) SHIFTs,
(h) REDUCEs, (i) left/right alternations.  Sentence response time is
regressed on all nine for the correct rows only, and the internally
studentized residuals (full-sample residual scale, leverage-adjusted) are
averaged per sentence category.

The covariate set is linearly dependent by construction: every run
satisfies e+f+g+h = 2*(c-1), so one column is always redundant, and on a
corpus of uniform sentence length (c) collapses into the intercept as
well.  The fit therefore drops dependent columns greedily in declaration
order (earlier columns win) with a logged warning instead of failing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import CorpusFile, SentenceType
from .engine import SessionLog
from .transition import ActionKind

logger = logging.getLogger(__name__)

COLUMN_NAMES = (
    "intercept",
    "morae",
    "characters",
    "phrases",
    "order",
    "n_default_shift",
    "n_default_reduce",
    "n_shift",
    "n_reduce",
    "alternations",
)


class ExtractionError(ValueError):
    """A trial lacks the sentence metadata needed for covariates."""


class InsufficientDataError(ValueError):
    """Too few correct rows to fit the regression."""


class UndefinedResidualError(ValueError):
    """A unit-leverage row has no defined studentized residual."""

    def __init__(self, rows: Sequence[int]):
        super().__init__(f"leverage is 1 at rows {list(rows)}; residuals undefined there")
        self.rows = tuple(rows)


class Grouping(str, Enum):
    POOLED = "pooled"
    PER_SUBJECT = "per_subject"


class YMode(str, Enum):
    JUDGED_SUM = "judged_sum"  # sum of judged-action response times
    WALL_CLOCK = "wall_clock"  # trial duration minus animation windows


@dataclass(frozen=True)
class ObservationRow:
    subject_id: str
    sentence_id: str
    category: str
    correct: bool
    y: float  # seconds
    morae: int
    characters: int
    phrases: int
    order: int
    n_default_shift: int
    n_default_reduce: int
    n_shift: int
    n_reduce: int
    alternations: int

    def __post_init__(self) -> None:
        total = self.n_default_shift + self.n_default_reduce + self.n_shift + self.n_reduce
        if total != 2 * (self.phrases - 1):
            raise ValueError(
                f"{self.subject_id}/{self.sentence_id}: action counts sum to {total}, "
                f"expected 2*({self.phrases}-1)"
            )

    def features(self) -> tuple[float, ...]:
        return (
            float(self.morae),
            float(self.characters),
            float(self.phrases),
            float(self.order),
            float(self.n_default_shift),
            float(self.n_default_reduce),
            float(self.n_shift),
            float(self.n_reduce),
            float(self.alternations),
        )


def extract_observations(
    logs: Iterable[SessionLog],
    corpus: CorpusFile | None = None,
    y_mode: YMode = YMode.JUDGED_SUM,
    include_practice: bool = False,
) -> list[ObservationRow]:
    """Flatten session logs into regression rows.

    Sentence metadata comes from the trial records themselves; a corpus is
    only consulted as a fallback for logs predating embedded metadata, and
    a missing sentence there raises :class:`ExtractionError` naming the id.
    """
    rows: list[ObservationRow] = []
    for log in logs:
        if log.practice and not include_practice:
            continue
        for trial in log.trials:
            phrases, morae, chars = trial.phrases, trial.morae, trial.chars
            if not phrases or not morae or not chars:
                record = corpus.get(trial.sentence_id) if corpus else None
                if record is None:
                    raise ExtractionError(
                        f"no metadata for sentence {trial.sentence_id!r} "
                        f"(subject {log.subject_id})"
                    )
                phrases = record.sentence.n
                morae = record.sentence.total_morae
                chars = record.sentence.total_chars
            counts = {kind: 0 for kind in ActionKind}
            judged_ms = 0.0
            for action in trial.actions:
                counts[action.kind] += 1
                if action.response_ms is not None:
                    judged_ms += action.response_ms
            if y_mode is YMode.JUDGED_SUM:
                y = judged_ms / 1000.0
            else:
                # Every action is followed by one animation window of the
                # configured length; subtract them all from the wall time.
                anim_ms = float(log.config.get("animation_ms", 840.0))
                animations = len(trial.actions) * anim_ms
                y = max(trial.done_ms - trial.started_ms - animations, 0.0) / 1000.0
            rows.append(
                ObservationRow(
                    subject_id=log.subject_id,
                    sentence_id=trial.sentence_id,
                    category=trial.category,
                    correct=trial.verdict == "OK",
                    y=y,
                    morae=morae,
                    characters=chars,
                    phrases=phrases,
                    order=trial.order,
                    n_default_shift=counts[ActionKind.DEFAULT_SHIFT],
                    n_default_reduce=counts[ActionKind.DEFAULT_REDUCE],
                    n_shift=counts[ActionKind.SHIFT],
                    n_reduce=counts[ActionKind.REDUCE],
                    alternations=trial.direction_alternations,
                )
            )
    return rows


@dataclass(frozen=True)
class RegressionFit:
    """OLS fit on the correct rows: coefficients, residuals, leverages.

    ``column_names`` lists the retained design columns in order;
    ``dropped_columns`` the ones removed as linearly dependent (or empty).
    ``row_keys`` maps residual positions back to (subject, sentence).
    """

    column_names: tuple[str, ...]
    dropped_columns: tuple[str, ...]
    beta: np.ndarray
    residuals: np.ndarray
    leverages: np.ndarray
    sigma_hat: float
    n: int
    p: int
    row_keys: tuple[tuple[str, str], ...]
    y_norm: float = 1.0

    def coefficient(self, name: str) -> float:
        return float(self.beta[self.column_names.index(name)])


def design_matrix(rows: Sequence[ObservationRow]) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([(1.0,) + row.features() for row in rows], dtype=float)
    y = np.array([row.y for row in rows], dtype=float)
    return X, y


def _independent_columns(X: np.ndarray, rtol: float = 1e-9) -> tuple[list[int], list[int]]:
    """Greedy left-to-right selection of a full-rank column subset.

    Earlier columns win ties, so the intercept and the named covariates stay
    interpretable and only trailing redundant columns are dropped.
    """
    n = X.shape[0]
    basis = np.empty((n, 0))
    kept: list[int] = []
    dropped: list[int] = []
    for j in range(X.shape[1]):
        col = X[:, j]
        norm = np.linalg.norm(col)
        if norm == 0.0:
            dropped.append(j)
            continue
        residual = col - basis @ (basis.T @ col)
        residual -= basis @ (basis.T @ residual)  # re-orthogonalize
        if np.linalg.norm(residual) <= rtol * norm:
            dropped.append(j)
            continue
        kept.append(j)
        basis = np.column_stack([basis, residual / np.linalg.norm(residual)])
    return kept, dropped


def fit_design(
    X: np.ndarray,
    y: np.ndarray,
    column_names: Sequence[str] | None = None,
    row_keys: Sequence[tuple[str, str]] | None = None,
) -> RegressionFit:
    """Least squares on an explicit design matrix.

    Solved by QR decomposition of the retained columns (never the normal
    equations); leverages are the squared row norms of Q.  Linearly
    dependent columns are dropped with a warning, earliest columns winning.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    names = tuple(column_names) if column_names else tuple(
        f"x{j}" for j in range(X.shape[1])
    )
    if n == 0:
        raise InsufficientDataError("no rows to fit")

    kept_idx, dropped_idx = _independent_columns(X)
    if dropped_idx:
        logger.warning(
            "design matrix rank %d < %d; dropping dependent column(s): %s",
            len(kept_idx),
            X.shape[1],
            ", ".join(names[j] for j in dropped_idx),
        )
    p = len(kept_idx)
    if n <= p:
        raise InsufficientDataError(f"{n} rows cannot support {p} coefficients")

    Xk = X[:, kept_idx]
    Q, R = np.linalg.qr(Xk, mode="reduced")
    beta = np.linalg.solve(R, Q.T @ y)
    residuals = y - Xk @ beta
    leverages = np.einsum("ij,ij->i", Q, Q)
    rss = float(residuals @ residuals)
    sigma_hat = float(np.sqrt(rss / (n - p)))
    return RegressionFit(
        column_names=tuple(names[j] for j in kept_idx),
        dropped_columns=tuple(names[j] for j in dropped_idx),
        beta=beta,
        residuals=residuals,
        leverages=leverages,
        sigma_hat=sigma_hat,
        n=n,
        p=p,
        row_keys=tuple(row_keys) if row_keys else tuple(("", str(i)) for i in range(n)),
        y_norm=float(np.linalg.norm(y)),
    )


def fit_ols(
    rows: Sequence[ObservationRow],
    grouping: Grouping = Grouping.POOLED,
) -> RegressionFit | dict[str, RegressionFit]:
    """Least squares of response time on the nine covariates plus intercept.

    Only correct rows enter the fit; see :func:`fit_design` for the solver.
    """
    if grouping is Grouping.PER_SUBJECT:
        fits: dict[str, RegressionFit] = {}
        for subject in sorted({r.subject_id for r in rows}):
            subset = [r for r in rows if r.subject_id == subject]
            fits[subject] = fit_ols(subset, Grouping.POOLED)  # type: ignore[assignment]
        return fits

    correct_rows = [r for r in rows if r.correct]
    if not correct_rows:
        raise InsufficientDataError("no correctly parsed rows to fit")
    X, y = design_matrix(correct_rows)
    return fit_design(
        X,
        y,
        COLUMN_NAMES,
        [(r.subject_id, r.sentence_id) for r in correct_rows],
    )


def studentized_residuals(fit: RegressionFit) -> np.ndarray:
    """Internally studentized residuals: e_i / (sigma_hat * sqrt(1 - h_i)).

    Uses the full-sample residual standard error (not leave-one-out).  A
    perfect fit (sigma zero) has all-zero residuals and studentizes to
    zeros; unit-leverage rows are undefined and raise.
    """
    near_one = np.flatnonzero(fit.leverages >= 1.0 - 1e-12)
    if near_one.size:
        raise UndefinedResidualError(near_one.tolist())
    if fit.sigma_hat <= 1e-12 * max(1.0, fit.y_norm):
        return np.zeros_like(fit.residuals)
    return fit.residuals / (fit.sigma_hat * np.sqrt(1.0 - fit.leverages))


CATEGORY_ORDER = ("FILLER", "CTRL", "EB", "LB")
_CATEGORY_LABELS = {"FILLER": "Filler", "CTRL": "CTRL", "EB": "EB", "LB": "LB"}


@dataclass(frozen=True)
class CategoryStats:
    category: str
    n_rows: int
    n_correct: int
    accuracy_mean: float  # percent, over all rows
    accuracy_stdev: float | None  # over per-subject accuracies
    srrt_mean: float | None  # over correct rows' residuals
    srrt_stdev: float | None


@dataclass(frozen=True)
class CategoryTable:
    """Per-category accuracy and studentized-residual summary."""

    stats: tuple[CategoryStats, ...]
    grouping: str = Grouping.POOLED.value

    def get(self, category: str) -> CategoryStats | None:
        for s in self.stats:
            if s.category == category:
                return s
        return None

    def categories(self) -> tuple[str, ...]:
        return tuple(s.category for s in self.stats)

    def render_text(self) -> str:
        """Four stat rows by category columns, in the fixed report layout."""
        labels = [_CATEGORY_LABELS.get(s.category, s.category) for s in self.stats]
        col_w = max(8, *(len(lb) + 2 for lb in labels)) if labels else 8
        head = " " * 18 + "".join(f"{lb:>{col_w}}" for lb in labels)

        def fmt(value: float | None, pattern: str) -> str:
            return "-" if value is None else pattern.format(value)

        rows = [
            ("acc. (%)", "ave.", [fmt(s.accuracy_mean, "{:.0f}") for s in self.stats]),
            ("", "stdev.", [fmt(s.accuracy_stdev, "{:.1f}") for s in self.stats]),
            ("s.r.r.t.", "ave.", [fmt(s.srrt_mean, "{:.2f}") for s in self.stats]),
            ("", "stdev.", [fmt(s.srrt_stdev, "{:.2f}") for s in self.stats]),
        ]
        lines = [head]
        for group, stat, values in rows:
            lines.append(
                f"{group:<10}{stat:<8}" + "".join(f"{v:>{col_w}}" for v in values)
            )
        return "\n".join(lines) + "\n"

    def render_delimited(self, sep: str = "\t") -> str:
        labels = [_CATEGORY_LABELS.get(s.category, s.category) for s in self.stats]

        def fmt(value: float | None) -> str:
            return "" if value is None else repr(round(value, 6))

        lines = [sep.join(["stat"] + labels)]
        lines.append(sep.join(["acc_ave"] + [fmt(s.accuracy_mean) for s in self.stats]))
        lines.append(sep.join(["acc_stdev"] + [fmt(s.accuracy_stdev) for s in self.stats]))
        lines.append(sep.join(["srrt_ave"] + [fmt(s.srrt_mean) for s in self.stats]))
        lines.append(sep.join(["srrt_stdev"] + [fmt(s.srrt_stdev) for s in self.stats]))
        return "\n".join(lines) + "\n"


def _stdev(values: Sequence[float]) -> float | None:
    if len(values) < 2:
        return None
    return float(np.std(np.asarray(values, dtype=float), ddof=1))


def category_report(
    rows: Sequence[ObservationRow],
    residuals: np.ndarray | Mapping[tuple[str, str], float],
    grouping: Grouping = Grouping.POOLED,
) -> CategoryTable:
    """Aggregate accuracy and residual response time per sentence category.

    ``residuals`` is either the vector returned by
    :func:`studentized_residuals` (aligned with the correct rows in their
    original order) or a mapping from (subject, sentence) to residual.
    Accuracy averages over all rows of a category; its stdev is the spread
    of per-subject accuracies.  Residual stats cover correct rows only.
    Categories with no rows are omitted, not zeroed.
    """
    if isinstance(residuals, Mapping):
        residual_of = dict(residuals)
    else:
        correct_keys = [(r.subject_id, r.sentence_id) for r in rows if r.correct]
        if len(correct_keys) != len(residuals):
            raise ValueError(
                f"{len(residuals)} residuals for {len(correct_keys)} correct rows"
            )
        residual_of = dict(zip(correct_keys, (float(v) for v in residuals)))

    stats: list[CategoryStats] = []
    known = [c for c in CATEGORY_ORDER] + sorted(
        {r.category for r in rows} - set(CATEGORY_ORDER)
    )
    for category in known:
        cat_rows = [r for r in rows if r.category == category]
        if not cat_rows:
            continue
        accuracy = 100.0 * sum(r.correct for r in cat_rows) / len(cat_rows)
        per_subject = []
        for subject in sorted({r.subject_id for r in cat_rows}):
            sub = [r for r in cat_rows if r.subject_id == subject]
            per_subject.append(100.0 * sum(r.correct for r in sub) / len(sub))
        res = [
            residual_of[(r.subject_id, r.sentence_id)]
            for r in cat_rows
            if r.correct and (r.subject_id, r.sentence_id) in residual_of
        ]
        stats.append(
            CategoryStats(
                category=category,
                n_rows=len(cat_rows),
                n_correct=sum(r.correct for r in cat_rows),
                accuracy_mean=accuracy,
                accuracy_stdev=_stdev(per_subject),
                srrt_mean=float(np.mean(res)) if res else None,
                srrt_stdev=_stdev(res),
            )
        )
    return CategoryTable(tuple(stats), grouping=grouping.value)


def analyze_rows(
    rows: Sequence[ObservationRow], grouping: Grouping = Grouping.POOLED
) -> tuple[CategoryTable, RegressionFit | dict[str, RegressionFit]]:
    """The full pipeline from observation rows to the category table."""
    fits = fit_ols(rows, grouping)
    if isinstance(fits, dict):
        residual_map: dict[tuple[str, str], float] = {}
        for fit in fits.values():
            values = studentized_residuals(fit)
            residual_map.update(zip(fit.row_keys, (float(v) for v in values)))
        table = category_report(rows, residual_map, grouping)
    else:
        table = category_report(rows, studentized_residuals(fits), grouping)
    return table, fits
