"""Translations of other deterministic automata into max-automata."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

from .automaton import And, Bounded, Inc, MaxAutomaton, Not, Or
from .errors import StructuralError


@dataclass(frozen=True)
class DetAutomaton:
    """Plain complete DFA skeleton used as the source of a reduction."""

    states: Tuple
    alphabet: Tuple
    initial: object
    delta: Mapping

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if self.initial not in self.states:
            raise StructuralError(f"initial state {self.initial!r} is not a state")
        for q in self.states:
            for a in self.alphabet:
                if self.delta.get((q, a)) not in self.states:
                    raise StructuralError(f"delta not total or bad target at ({q!r}, {a!r})")

    def run_states(self, word, q=None):
        q = self.initial if q is None else q
        out = [q]
        for a in word:
            q = self.delta[q, a]
            out.append(q)
        return out


@dataclass(frozen=True)
class ParityAutomaton(DetAutomaton):
    """Min-parity: a run is accepting iff the least color seen infinitely often is even."""

    colors: Mapping = None

    def __post_init__(self):
        super().__post_init__()
        if self.colors is None or any(q not in self.colors for q in self.states):
            raise StructuralError("every state needs a color")
        if any(int(c) < 0 for c in self.colors.values()):
            raise StructuralError("colors must be non-negative")


@dataclass(frozen=True)
class SafetyAutomaton(DetAutomaton):
    """A run is accepting iff it never visits a state outside ``safe``."""

    safe: frozenset = None

    def __post_init__(self):
        super().__post_init__()
        if self.safe is None:
            raise StructuralError("safety automaton needs a set of safe states")
        object.__setattr__(self, "safe", frozenset(self.safe))
        if not self.safe <= set(self.states):
            raise StructuralError("safe states must be states")


def color_counter(j: int) -> str:
    return f"k{j}"


def parity_formula(colors) -> object:
    """Acceptance formula "the least color whose counter is unbounded is even"."""
    colors = sorted(set(colors))
    disjuncts = []
    for j in colors:
        if j % 2:
            continue
        lower = [Bounded(color_counter(i)) for i in colors if i < j]
        unb = Not(Bounded(color_counter(j)))
        disjuncts.append(And(tuple(lower) + (unb,)) if lower else unb)
    if not disjuncts:
        # no even color: unsatisfiable
        atom = Bounded(color_counter(colors[0]))
        return And((atom, Not(atom)))
    return disjuncts[0] if len(disjuncts) == 1 else Or(tuple(disjuncts))


def parity_to_max(parity: ParityAutomaton) -> MaxAutomaton:
    colors = sorted(set(parity.colors[q] for q in parity.states))
    labels = {}
    for q in parity.states:
        for a in parity.alphabet:
            target = parity.delta[q, a]
            labels[q, a] = (Inc(color_counter(parity.colors[target])),)
    return MaxAutomaton(
        states=parity.states,
        counters=tuple(color_counter(j) for j in colors),
        alphabet=parity.alphabet,
        initial=parity.initial,
        delta=dict(parity.delta),
        labels=labels,
        accept=parity_formula(colors),
    )


def safety_to_max(safety: SafetyAutomaton, counter: str = "c") -> MaxAutomaton:
    """Non-safe states become sinks; `counter` counts transitions into safe states."""
    delta: Dict = {}
    labels: Dict = {}
    for q in safety.states:
        for a in safety.alphabet:
            if q not in safety.safe:
                delta[q, a] = q
                labels[q, a] = ()
                continue
            target = safety.delta[q, a]
            delta[q, a] = target
            labels[q, a] = (Inc(counter),) if target in safety.safe else ()
    return MaxAutomaton(
        states=safety.states,
        counters=(counter,),
        alphabet=safety.alphabet,
        initial=safety.initial,
        delta=delta,
        labels=labels,
        accept=Not(Bounded(counter)),
    )


def _fresh(name, taken):
    while name in taken:
        name += "'"
    return name


def diagonal_lift(automaton: MaxAutomaton) -> MaxAutomaton:
    """Move `automaton` to the alphabet of pairs, keeping only the diagonal.

    Letters ``(a, a)`` behave like ``a``; every off-diagonal letter leads to
    an absorbing sink whose self-loop increments a fresh counter ``z``.  The
    acceptance formula becomes ``phi & bounded(z)``, so runs reaching the
    sink are rejected.
    """
    if automaton.is_product:
        raise StructuralError("diagonal_lift expects a plain alphabet")
    for a in automaton.alphabet:
        if not isinstance(a, str):
            raise StructuralError("diagonal_lift expects string letters")
    sink = _fresh("sink", {str(q) for q in automaton.states})
    z = _fresh("z", set(automaton.counters))
    sigma = automaton.alphabet
    states = automaton.states + (sink,)
    delta = {}
    labels = {}
    for q in states:
        for a in sigma:
            for b in sigma:
                if q != sink and a == b:
                    delta[q, (a, a)] = automaton.delta[q, a]
                    labels[q, (a, a)] = automaton.labels[q, a]
                else:
                    delta[q, (a, b)] = sink
                    labels[q, (a, b)] = (Inc(z),)
    return MaxAutomaton(
        states=states,
        counters=automaton.counters + (z,),
        alphabet=tuple((a, b) for a in sigma for b in sigma),
        initial=automaton.initial,
        delta=delta,
        labels=labels,
        accept=And((automaton.accept, Bounded(z))),
        input_alphabet=sigma,
        output_alphabet=sigma,
    )
