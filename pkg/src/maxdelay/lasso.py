"""Membership of ultimately periodic words ``u v^omega``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Tuple

from .automaton import MaxAutomaton, eval_acceptance, run_finite
from .errors import StructuralError
from .transfer import TransferSignature, compose, elementwise_max, identity_signature, label_signature, mat_mul


@dataclass(frozen=True)
class LassoWord:
    u: Tuple
    v: Tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))
        if not self.v:
            raise StructuralError("loop of a lasso must be nonempty")


@dataclass(frozen=True)
class NormalLoop:
    """The run on ``u v^omega`` ends in the cycle ``entry --v^period--> entry``.

    ``skipped`` counts the copies of `v` read before `entry` is first
    reached; ``transitions`` lists the ``(state, letter)`` pairs of
    ``v^period`` read from `entry`.
    """

    entry: object
    period: int
    skipped: int
    transitions: Tuple

    def labels(self, automaton):
        return tuple(automaton.labels[key] for key in self.transitions)


def _as_lasso(lasso):
    return lasso if isinstance(lasso, LassoWord) else LassoWord(*lasso)


def loop_normalize(automaton: MaxAutomaton, lasso) -> NormalLoop:
    lasso = _as_lasso(lasso)
    automaton.check_word(lasso.u)
    automaton.check_word(lasso.v)
    q = automaton.target(automaton.initial, lasso.u)
    seen = {}
    i = 0
    while q not in seen:
        seen[q] = i
        q = automaton.target(q, lasso.v)
        i += 1
    start = seen[q]
    period = i - start
    transitions = []
    state = q
    for a in lasso.v * period:
        transitions.append((state, a))
        state = automaton.delta[state, a]
    return NormalLoop(q, period, start, tuple(transitions))


def loop_signature(automaton: MaxAutomaton, loop: NormalLoop, cap: int = 1) -> TransferSignature:
    k = len(automaton.counters)
    sig = identity_signature(k, cap)
    for key in loop.transitions:
        sig = compose(sig, label_signature(automaton.index_labels[key], k, cap))
    return sig


def unbounded_indices(sig: TransferSignature) -> FrozenSet[int]:
    """Counters that grow without bound when the label word of `sig` is repeated forever.

    Counter c is unbounded iff some counter e lies on a cycle of the loop's
    transfer relation carrying at least one increment, and e reaches c
    through further whole loops followed by a prefix of the loop.
    """
    k = sig.k
    M = tuple(min(x, 1) if x >= 0 else x for x in sig.T)
    # transitive closure of the cap-1 transfer relation over loop powers
    plus = M
    while True:
        nxt = elementwise_max(plus, mat_mul(plus, M, k, 1))
        if nxt == plus:
            break
        plus = nxt
    pumping = [e for e in range(k) if plus[e * k + e] >= 1]
    unbounded = set()
    for e in pumping:
        # zero or more further loops, then a (possibly empty) prefix of the loop
        reach = {x for x in range(k) if x == e or plus[e * k + x] >= 0}
        for x in reach:
            for c in range(k):
                if sig.P[x * k + c] >= 0:
                    unbounded.add(c)
    return frozenset(unbounded)


def unbounded_counters(automaton: MaxAutomaton, lasso) -> FrozenSet[str]:
    loop = loop_normalize(automaton, lasso)
    sig = loop_signature(automaton, loop, cap=1)
    return frozenset(automaton.counters[i] for i in unbounded_indices(sig))


def boundedness(automaton: MaxAutomaton, lasso) -> dict:
    unb = unbounded_counters(automaton, lasso)
    return {c: c not in unb for c in automaton.counters}


def member(automaton: MaxAutomaton, lasso) -> bool:
    return eval_acceptance(automaton.accept, boundedness(automaton, lasso))


# Independent cross-check #####################################################

def growth_unbounded(automaton: MaxAutomaton, lasso, ks=(16, 32, 64)) -> FrozenSet[str]:
    """Counters whose maximum sample keeps growing between ``u v^K`` and ``u v^2K``."""
    lasso = _as_lasso(lasso)
    longest = max(ks)
    trace = run_finite(automaton, automaton.initial, lasso.u + lasso.v * (2 * longest))
    out = set()
    for c in automaton.counters:
        samples = trace.samples[c]
        grows = True
        for K in ks:
            upto_k = max(samples[: len(lasso.u) + K * len(lasso.v) + 1])
            upto_2k = max(samples[: len(lasso.u) + 2 * K * len(lasso.v) + 1])
            if upto_2k <= upto_k:
                grows = False
                break
        if grows:
            out.add(c)
    return frozenset(out)


def growth_member(automaton: MaxAutomaton, lasso, ks=(16, 32, 64)) -> bool:
    unb = growth_unbounded(automaton, lasso, ks)
    return eval_acceptance(automaton.accept, {c: c not in unb for c in automaton.counters})
