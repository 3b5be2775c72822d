"""Headless players: judgment policies and synthetic timing.

Bots drive a :class:`~parsegame.engine.GameSession` through the same
feed-input/tick interface a UI uses, with a synthetic clock, so their logs
are schema-identical to live ones (only the recorded agent string tells
them apart).  The noisy policy flips each correct judgment independently
with a fixed probability; since distinct judgment sequences always yield
distinct trees, any flip makes the trial wrong.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import CorpusFile
from .engine import (
    CommitMode,
    Direction,
    EngineConfig,
    GameSession,
    InputEvent,
    InputKind,
    Phase,
    SessionLog,
    SessionPlan,
    SessionSink,
)
from .transition import (
    GoldTree,
    Judgment,
    ParserState,
    Pending,
    oracle_judgment,
    pending_action,
)


class BotPolicy:
    """Decides SHIFT or REDUCE at each judged position."""

    name = "policy"

    def decide(self, state: ParserState, pending: Pending, gold: GoldTree) -> Judgment:
        raise NotImplementedError


class OraclePolicy(BotPolicy):
    name = "oracle"

    def decide(self, state: ParserState, pending: Pending, gold: GoldTree) -> Judgment:
        return oracle_judgment(state, gold)


class NoisyPolicy(BotPolicy):
    """Oracle with each judgment independently flipped with probability ``p``."""

    def __init__(self, p: float, seed: int):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"flip probability must be in [0, 1], got {p}")
        self.p = p
        self.rng = random.Random(seed)
        self.name = f"noisy({p})"

    def decide(self, state: ParserState, pending: Pending, gold: GoldTree) -> Judgment:
        correct = oracle_judgment(state, gold)
        if self.rng.random() < self.p:
            return Judgment.SHIFT if correct is Judgment.REDUCE else Judgment.REDUCE
        return correct


class ConstantPolicy(BotPolicy):
    def __init__(self, judgment: Judgment):
        self.judgment = judgment
        self.name = f"constant-{judgment.value.lower()}"

    def decide(self, state: ParserState, pending: Pending, gold: GoldTree) -> Judgment:
        return self.judgment


@dataclass(frozen=True)
class TimingModel:
    """Synthetic think times: normal around ``mean_ms``, floored.

    With ``sd_ms`` zero the bot is metronomic.  Jump delay spaces trials.
    """

    mean_ms: float = 900.0
    sd_ms: float = 250.0
    floor_ms: float = 120.0
    jump_delay_ms: float = 500.0

    def think_ms(self, rng: random.Random) -> float:
        if self.sd_ms <= 0:
            return max(self.mean_ms, self.floor_ms)
        return max(rng.gauss(self.mean_ms, self.sd_ms), self.floor_ms)


def run_bot_session(
    corpus: CorpusFile,
    plan: SessionPlan,
    policy: BotPolicy,
    timing: TimingModel = TimingModel(),
    config: EngineConfig | None = None,
    timing_seed: int = 0,
    sink: SessionSink | None = None,
) -> SessionLog:
    """Play the whole plan with synthetic timestamps; deterministic per seeds.

    In hold mode the bot leans after its think time and keeps leaning until
    the icon reaches the wall, then recenters; the logged response time is
    think time plus wall travel.
    """
    config = config or EngineConfig()
    rng = random.Random(timing_seed)
    session = GameSession(corpus, plan, config, agent=f"bot:{policy.name}", sink=sink)
    travel_ms = 1000.0 / config.icon_speed

    t = 0.0
    session.start_trial(t)
    while not session.complete:
        rt = session.trial
        assert rt is not None
        if rt.phase is Phase.ANIMATING:
            t = max(t, rt.anim_end_ms)
            session.tick(t)
        elif rt.phase is Phase.AWAIT_JUDGMENT:
            judgment = policy.decide(rt.state, pending_action(rt.state), rt.record.gold)
            direction = Direction.RIGHT if judgment is Judgment.REDUCE else Direction.LEFT
            t += timing.think_ms(rng)
            session.feed_input(InputEvent(t, InputKind.DIRECTION, direction))
            if config.commit_mode is CommitMode.HOLD:
                t += travel_ms
                session.tick(t)
            session.feed_input(InputEvent(t, InputKind.DIRECTION, Direction.NEUTRAL))
        else:  # TRIAL_DONE
            t = max(t, rt.done_ms or t) + timing.jump_delay_ms
            session.feed_input(InputEvent(t, InputKind.JUMP))
    return session.to_session_log()


def make_policy(name: str, flip_prob: float = 0.3, seed: int = 0) -> BotPolicy:
    """Policy factory for the CLI: oracle, noisy, shift, or reduce."""
    if name == "oracle":
        return OraclePolicy()
    if name == "noisy":
        return NoisyPolicy(flip_prob, seed)
    if name == "shift":
        return ConstantPolicy(Judgment.SHIFT)
    if name == "reduce":
        return ConstantPolicy(Judgment.REDUCE)
    raise ValueError(f"unknown policy {name!r}")
