"""Shared test utilities, including independent reference implementations.

The reference simulator and the brute-force tree tools here are written
directly from first principles with plain lists and loops, on purpose: they
provide oracle values for the package code without sharing any of its code
paths.
"""

from __future__ import annotations

from itertools import product

from parsegame.transition import Phrase, Sentence


def bare_sentence(n: int, sid: str = "s", type_tag: str = "FILLER") -> Sentence:
    return Sentence(
        sid, tuple(Phrase(i, f"p{i}", 1, 1) for i in range(1, n + 1)), type_tag
    )


def reference_simulate(heads: list[int]) -> tuple[list[str], list[tuple[int, int]]]:
    """Independent simulator: parse with the oracle over a gold head array.

    ``heads`` uses 0 as the root sentinel in the last slot.  Returns the
    action-kind sequence and the arcs in creation order.
    """
    n = len(heads)
    stack: list[int] = []
    queue = list(range(1, n + 1))
    arcs: list[tuple[int, int]] = []
    kinds: list[str] = []
    while not (len(stack) == 0 and len(queue) == 1):
        if not stack:
            kinds.append("DEFAULT_SHIFT")
            stack.append(queue.pop(0))
        elif len(queue) == 1:
            kinds.append("DEFAULT_REDUCE")
            arcs.append((stack.pop(), queue[0]))
        elif heads[stack[-1] - 1] == queue[0]:
            kinds.append("REDUCE")
            arcs.append((stack.pop(), queue[0]))
        else:
            kinds.append("SHIFT")
            stack.append(queue.pop(0))
    return kinds, arcs


def brute_force_trees(n: int) -> set[tuple[int, ...]]:
    """All head-final projective head arrays by exhaustive filtering."""
    if n == 1:
        return {(0,)}
    candidates = product(*(range(i + 1, n + 1) for i in range(1, n)))
    valid = set()
    for assignment in candidates:
        heads = list(assignment) + [0]
        arcs = [(i, heads[i - 1]) for i in range(1, n)]
        crossing = any(
            i < j < hi < hj
            for ai, (i, hi) in enumerate(arcs)
            for (j, hj) in arcs[ai + 1 :]
        )
        if not crossing:
            valid.add(tuple(heads))
    return valid


def kind_counts(kinds: list[str]) -> tuple[int, int, int, int]:
    """(default shifts, default reduces, shifts, reduces)."""
    return (
        kinds.count("DEFAULT_SHIFT"),
        kinds.count("DEFAULT_REDUCE"),
        kinds.count("SHIFT"),
        kinds.count("REDUCE"),
    )
