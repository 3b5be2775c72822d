"""Shift-reduce transition machine for strictly head-final dependency parsing.

A sentence of N phrases is parsed with a stack, a queue, and a growing arc
set.  Two of the four actions are forced: when the stack is empty the front
of the queue is shifted automatically, and when a single phrase remains in
the queue the stack is reduced onto it automatically.  Everywhere else the
machine pauses for an external judgment between SHIFT (the queue front is
not the head of the stack top) and REDUCE (it is).

Every run over a length-N sentence performs exactly 2*(N-1) actions and
yields N-1 arcs forming a projective tree rooted at the last phrase, no
matter which judgments were made.  Transitions are pure functions over
immutable states, so a state can be shared freely between threads.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterator, Mapping, Sequence

#: Sentinel head index marking the root phrase.
ROOT = 0


class ActionKind(str, Enum):
    DEFAULT_SHIFT = "DEFAULT_SHIFT"
    DEFAULT_REDUCE = "DEFAULT_REDUCE"
    SHIFT = "SHIFT"
    REDUCE = "REDUCE"


class Judgment(str, Enum):
    """The two answers a player (or policy) can give at a judged position."""

    SHIFT = "SHIFT"
    REDUCE = "REDUCE"


class DegenerateSentenceError(ValueError):
    """Sentence is too short to parse (fewer than two phrases)."""


class InvalidStateError(RuntimeError):
    """An action was applied at a position that does not allow it."""


class ArcComparisonError(ValueError):
    """Arc sets of different sizes cannot come from the same sentence."""


@dataclass(frozen=True)
class Phrase:
    """One pre-segmented base phrase of the input sentence.

    ``index`` is the 1-based position in the sentence.  ``reading`` is an
    optional katakana rendering used for mora counting; ``char_count`` and
    ``mora_count`` are stored rather than derived so that corpus files
    remain the single source of truth at runtime.
    """

    index: int
    surface: str
    char_count: int
    mora_count: int
    reading: str | None = None
    case_marker: str | None = None

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"phrase index must be >= 1, got {self.index}")
        if self.char_count < 1:
            raise ValueError(f"char_count must be >= 1, got {self.char_count}")
        if self.mora_count < 1:
            raise ValueError(f"mora_count must be >= 1, got {self.mora_count}")


@dataclass(frozen=True)
class Sentence:
    """An ordered sequence of phrases with a category tag.

    Phrase indices must run 1..N in order.  Single-phrase sentences can be
    represented but are rejected wherever parsing would begin (see
    :func:`init_state`) and by corpus validation.
    """

    id: str
    phrases: tuple[Phrase, ...]
    type_tag: str = "FILLER"

    def __post_init__(self) -> None:
        object.__setattr__(self, "phrases", tuple(self.phrases))
        if not self.phrases:
            raise ValueError(f"sentence {self.id!r} has no phrases")
        for pos, phrase in enumerate(self.phrases, start=1):
            if phrase.index != pos:
                raise ValueError(
                    f"sentence {self.id!r}: phrase at position {pos} "
                    f"carries index {phrase.index}"
                )

    def __len__(self) -> int:
        return len(self.phrases)

    @property
    def n(self) -> int:
        return len(self.phrases)

    @property
    def total_morae(self) -> int:
        return sum(p.mora_count for p in self.phrases)

    @property
    def total_chars(self) -> int:
        return sum(p.char_count for p in self.phrases)


@dataclass(frozen=True)
class Arc:
    """A dependency arc from a dependent phrase to its head (dependent < head)."""

    dependent: int
    head: int

    def __post_init__(self) -> None:
        if not self.dependent < self.head:
            raise ValueError(
                f"arc must point rightward, got ({self.dependent}, {self.head})"
            )


@dataclass(frozen=True)
class GoldTree:
    """Reference head assignment: ``heads[i-1]`` is the head of phrase i.

    The last entry is the :data:`ROOT` sentinel.  Construction does not
    validate structure; run :func:`validate_tree` for that.
    """

    heads: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "heads", tuple(self.heads))
        if not self.heads:
            raise ValueError("empty head array")

    @property
    def n(self) -> int:
        return len(self.heads)

    def head_of(self, index: int) -> int:
        if not 1 <= index <= self.n:
            raise IndexError(f"phrase index {index} out of range 1..{self.n}")
        return self.heads[index - 1]

    def arcs(self) -> frozenset[Arc]:
        """The tree as an arc set (root excluded)."""
        return frozenset(
            Arc(i, h) for i, h in enumerate(self.heads, start=1) if h != ROOT
        )


@dataclass(frozen=True)
class ActionRecord:
    """One executed action with the (stack top, queue front) it consumed.

    Judged actions and the default reduce always have a stack top; the
    default shift fires on an empty stack and records none.
    """

    kind: ActionKind
    stack_top_before: int | None
    queue_front_before: int

    def __post_init__(self) -> None:
        if self.kind is ActionKind.DEFAULT_SHIFT:
            if self.stack_top_before is not None:
                raise ValueError("default shift fires on an empty stack")
        elif self.stack_top_before is None:
            raise ValueError(f"{self.kind.value} requires a stack top")


class PendingKind(str, Enum):
    AUTOMATIC = "AUTOMATIC"
    JUDGED = "JUDGED"
    TERMINAL = "TERMINAL"


@dataclass(frozen=True)
class Pending:
    """What the machine needs next: a forced action, a judgment, or nothing."""

    kind: PendingKind
    action: ActionKind | None = None
    stack_top: int | None = None
    queue_front: int | None = None

    @property
    def is_terminal(self) -> bool:
        return self.kind is PendingKind.TERMINAL

    @property
    def is_automatic(self) -> bool:
        return self.kind is PendingKind.AUTOMATIC

    @property
    def is_judged(self) -> bool:
        return self.kind is PendingKind.JUDGED


@dataclass(frozen=True)
class ParserState:
    """Immutable machine state: stack, queue, arc set, and action trace.

    Invariants (see :meth:`verify`): stack indices increase bottom to top,
    queue indices increase front to back, the stack top precedes the queue
    front, and each of the N phrase indices lives in exactly one of stack,
    queue, or the dependent side of an arc.
    """

    n: int
    stack: tuple[int, ...]
    queue: tuple[int, ...]
    arcs: frozenset[Arc]
    trace: tuple[ActionRecord, ...]

    def verify(self) -> None:
        """Raise :class:`InvalidStateError` if any structural invariant fails."""
        if any(a >= b for a, b in zip(self.stack, self.stack[1:])):
            raise InvalidStateError(f"stack not increasing: {self.stack}")
        if any(a >= b for a, b in zip(self.queue, self.queue[1:])):
            raise InvalidStateError(f"queue not increasing: {self.queue}")
        if self.stack and self.queue and self.stack[-1] >= self.queue[0]:
            raise InvalidStateError(
                f"stack top {self.stack[-1]} >= queue front {self.queue[0]}"
            )
        placed = list(self.stack) + list(self.queue) + [a.dependent for a in self.arcs]
        if sorted(placed) != list(range(1, self.n + 1)):
            raise InvalidStateError(
                f"phrases not partitioned into stack/queue/arcs: {sorted(placed)}"
            )


def init_state(sentence: Sentence) -> ParserState:
    """Fresh state: empty stack, all phrases queued, no arcs.

    Rejects single-phrase sentences: the machine would strand the sole
    phrase on the stack with nothing to attach it to.
    """
    if sentence.n < 2:
        raise DegenerateSentenceError(
            f"sentence {sentence.id!r} has {sentence.n} phrase(s); need at least 2"
        )
    return ParserState(
        n=sentence.n,
        stack=(),
        queue=tuple(range(1, sentence.n + 1)),
        arcs=frozenset(),
        trace=(),
    )


def pending_action(state: ParserState) -> Pending:
    """Classify the current position: terminal, forced, or awaiting judgment."""
    if not state.stack:
        if len(state.queue) == 1:
            return Pending(PendingKind.TERMINAL)
        return Pending(
            PendingKind.AUTOMATIC,
            action=ActionKind.DEFAULT_SHIFT,
            queue_front=state.queue[0],
        )
    if len(state.queue) == 1:
        return Pending(
            PendingKind.AUTOMATIC,
            action=ActionKind.DEFAULT_REDUCE,
            stack_top=state.stack[-1],
            queue_front=state.queue[0],
        )
    return Pending(
        PendingKind.JUDGED,
        stack_top=state.stack[-1],
        queue_front=state.queue[0],
    )


def apply_automatic(state: ParserState) -> ParserState:
    """Execute the forced action at an automatic position."""
    pending = pending_action(state)
    if not pending.is_automatic:
        raise InvalidStateError(f"no automatic action at this position: {pending.kind.value}")
    q = state.queue[0]
    if pending.action is ActionKind.DEFAULT_SHIFT:
        record = ActionRecord(ActionKind.DEFAULT_SHIFT, None, q)
        return replace(
            state,
            stack=state.stack + (q,),
            queue=state.queue[1:],
            trace=state.trace + (record,),
        )
    s = state.stack[-1]
    record = ActionRecord(ActionKind.DEFAULT_REDUCE, s, q)
    return replace(
        state,
        stack=state.stack[:-1],
        arcs=state.arcs | {Arc(s, q)},
        trace=state.trace + (record,),
    )


def apply_judgment(state: ParserState, judgment: Judgment) -> ParserState:
    """Execute SHIFT or REDUCE at a judged position."""
    pending = pending_action(state)
    if not pending.is_judged:
        raise InvalidStateError(f"no judgment expected at this position: {pending.kind.value}")
    s, q = state.stack[-1], state.queue[0]
    if judgment is Judgment.REDUCE:
        record = ActionRecord(ActionKind.REDUCE, s, q)
        return replace(
            state,
            stack=state.stack[:-1],
            arcs=state.arcs | {Arc(s, q)},
            trace=state.trace + (record,),
        )
    record = ActionRecord(ActionKind.SHIFT, s, q)
    return replace(
        state,
        stack=state.stack + (q,),
        queue=state.queue[1:],
        trace=state.trace + (record,),
    )


def oracle_judgment(state: ParserState, gold: GoldTree) -> Judgment:
    """The judgment that reproduces ``gold``: REDUCE iff the queue front heads the stack top."""
    pending = pending_action(state)
    if not pending.is_judged:
        raise InvalidStateError("oracle consulted outside a judged position")
    assert pending.stack_top is not None and pending.queue_front is not None
    if gold.head_of(pending.stack_top) == pending.queue_front:
        return Judgment.REDUCE
    return Judgment.SHIFT


#: A judgment policy: called at every judged position with the state and
#: the pending (stack top, queue front) pair.
PolicyFn = Callable[[ParserState, Pending], Judgment]


@dataclass(frozen=True)
class ParseResult:
    """Outcome of a complete run: arc set, full trace, and per-kind counts."""

    n: int
    arcs: frozenset[Arc]
    trace: tuple[ActionRecord, ...]

    @property
    def counts(self) -> Mapping[ActionKind, int]:
        c: Counter[ActionKind] = Counter(rec.kind for rec in self.trace)
        return {kind: c.get(kind, 0) for kind in ActionKind}

    def heads(self) -> tuple[int, ...]:
        """The produced tree as a head array (root sentinel last)."""
        heads = [ROOT] * self.n
        for arc in self.arcs:
            heads[arc.dependent - 1] = arc.head
        return tuple(heads)

    def judged_kinds(self) -> tuple[ActionKind, ...]:
        return tuple(
            rec.kind
            for rec in self.trace
            if rec.kind in (ActionKind.SHIFT, ActionKind.REDUCE)
        )


def run_with_policy(sentence: Sentence, policy: PolicyFn) -> ParseResult:
    """Drive the machine to termination, asking ``policy`` at judged positions.

    Terminates for every total policy: each phrase before the last is
    shifted exactly once and reduced exactly once, so the run takes exactly
    2*(N-1) actions.
    """
    state = init_state(sentence)
    while True:
        pending = pending_action(state)
        if pending.is_terminal:
            break
        if pending.is_automatic:
            state = apply_automatic(state)
        else:
            state = apply_judgment(state, policy(state, pending))
    return ParseResult(n=state.n, arcs=state.arcs, trace=state.trace)


def oracle_policy(gold: GoldTree) -> PolicyFn:
    """Policy that reproduces ``gold`` exactly."""

    def policy(state: ParserState, pending: Pending) -> Judgment:
        return oracle_judgment(state, gold)

    return policy


def constant_policy(judgment: Judgment) -> PolicyFn:
    """Policy that always answers the same way."""

    def policy(state: ParserState, pending: Pending) -> Judgment:
        return judgment

    return policy


@dataclass(frozen=True)
class TreeValidity:
    """Per-check outcome of tree validation; failures accumulate, never raise."""

    head_final: bool
    single_root: bool
    projective: bool
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_tree(heads: GoldTree | Sequence[int], n: int | None = None) -> TreeValidity:
    """Check a head array for head-finality, a single final root, and projectivity.

    All violations are collected into the report rather than raised, so a
    corpus linter can show everything wrong with a record at once.
    """
    hs = tuple(heads.heads if isinstance(heads, GoldTree) else heads)
    violations: list[str] = []
    if n is None:
        n = len(hs)
    if len(hs) != n:
        violations.append(f"head array has length {len(hs)}, expected {n}")
        return TreeValidity(False, False, False, tuple(violations))

    head_final = True
    for i, h in enumerate(hs, start=1):
        if h == ROOT:
            continue
        if h <= i:
            head_final = False
            violations.append(f"phrase {i}: head {h} is not to its right")
        elif h > n:
            head_final = False
            violations.append(f"phrase {i}: head {h} exceeds sentence length {n}")

    roots = [i for i, h in enumerate(hs, start=1) if h == ROOT]
    single_root = roots == [n]
    if not single_root:
        violations.append(f"root must be exactly the last phrase, found roots at {roots}")

    projective = True
    arcs = [(i, h) for i, h in enumerate(hs, start=1) if h != ROOT and i < h <= n]
    for ai in range(len(arcs)):
        for aj in range(ai + 1, len(arcs)):
            i, hi = arcs[ai]
            j, hj = arcs[aj]
            if i < j < hi < hj:
                projective = False
                violations.append(f"arcs ({i},{hi}) and ({j},{hj}) cross")

    return TreeValidity(head_final, single_root, projective, tuple(violations))


def is_correct(result_arcs: frozenset[Arc] | set[Arc], gold: GoldTree) -> bool:
    """True iff the produced arc set equals the gold arc set exactly."""
    gold_arcs = gold.arcs()
    if len(result_arcs) != len(gold_arcs):
        raise ArcComparisonError(
            f"cannot compare {len(result_arcs)} arcs against a tree with "
            f"{len(gold_arcs)}; runs on the same sentence always yield N-1 arcs"
        )
    return frozenset(result_arcs) == gold_arcs


def enumerate_head_final_trees(n: int) -> Iterator[tuple[int, ...]]:
    """Yield every projective strictly-rightward head array over ``n`` phrases.

    Each yielded tuple has the root sentinel 0 in the last slot.  The number
    of arrays is the (n-1)-th Catalan number.  Recursion: the head of the
    leftmost unattached phrase ``lo`` is some ``k``; projectivity then pens
    phrases between ``lo`` and ``k`` inside the new arc, and the remainder
    builds independently from ``k``.
    """
    if n < 1:
        raise ValueError(f"need at least one phrase, got {n}")

    def build(lo: int, hi: int) -> Iterator[dict[int, int]]:
        # head assignments for phrases lo..hi-1, each headed within (phrase, hi]
        if lo >= hi:
            yield {}
            return
        for k in range(lo + 1, hi + 1):
            for inner in build(lo + 1, k):
                for outer in build(k, hi):
                    assignment = {lo: k}
                    assignment.update(inner)
                    assignment.update(outer)
                    yield assignment

    for assignment in build(1, n):
        yield tuple(assignment.get(i, ROOT) for i in range(1, n + 1))
