"""Max-automata: counter operations, acceptance formulas and finite runs.

A max-automaton is a complete DFA whose transitions carry sequences of
counter operations (increment, reset, max-assignment).  An infinite run is
accepting when the boolean acceptance formula holds under the valuation that
maps each counter to ``True`` iff its sampled values stay bounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Hashable, Iterable, Mapping, Sequence, Tuple, Union

from .errors import StructuralError

Letter = Union[str, Tuple[str, str]]
State = Hashable


# Counter operations ##########################################################

@dataclass(frozen=True)
class Inc:
    counter: str

    def counters(self):
        return (self.counter,)

    def __str__(self):
        return f"inc {self.counter}"


@dataclass(frozen=True)
class Reset:
    counter: str

    def counters(self):
        return (self.counter,)

    def __str__(self):
        return f"reset {self.counter}"


@dataclass(frozen=True)
class MaxOp:
    """``target := max(left, right)``."""

    target: str
    left: str
    right: str

    def counters(self):
        return (self.target, self.left, self.right)

    def __str__(self):
        return f"max {self.target} {self.left} {self.right}"


CounterOp = Union[Inc, Reset, MaxOp]
OpSequence = Tuple[CounterOp, ...]


def apply_ops(valuation: Mapping[str, int], ops: Iterable[CounterOp]) -> Dict[str, int]:
    """Return the valuation obtained by applying `ops` left to right."""
    v = dict(valuation)
    for op in ops:
        for c in op.counters():
            if c not in v:
                raise StructuralError(f"unknown counter {c!r} in {op}")
        if isinstance(op, Inc):
            v[op.counter] += 1
        elif isinstance(op, Reset):
            v[op.counter] = 0
        elif isinstance(op, MaxOp):
            v[op.target] = max(v[op.left], v[op.right])
        else:
            raise StructuralError(f"not a counter operation: {op!r}")
    return v


# Acceptance formulas #########################################################

class Formula:
    """Boolean formula over atoms ``bounded(c)``."""

    def evaluate(self, boundedness: Mapping[str, bool]) -> bool:
        raise NotImplementedError

    def counters(self) -> frozenset:
        raise NotImplementedError

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Bounded(Formula):
    counter: str

    def evaluate(self, boundedness):
        try:
            return bool(boundedness[self.counter])
        except KeyError:
            raise StructuralError(f"no boundedness value for counter {self.counter!r}") from None

    def counters(self):
        return frozenset([self.counter])

    def __str__(self):
        return f"(bounded {self.counter})"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def evaluate(self, boundedness):
        return not self.arg.evaluate(boundedness)

    def counters(self):
        return self.arg.counters()

    def __str__(self):
        return f"!{self.arg}"


@dataclass(frozen=True)
class And(Formula):
    args: Tuple[Formula, ...]

    def evaluate(self, boundedness):
        # evaluate every operand so missing atoms are always reported
        return all([a.evaluate(boundedness) for a in self.args])

    def counters(self):
        return frozenset().union(*(a.counters() for a in self.args))

    def __str__(self):
        return "(" + " & ".join(str(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Or(Formula):
    args: Tuple[Formula, ...]

    def evaluate(self, boundedness):
        return any([a.evaluate(boundedness) for a in self.args])

    def counters(self):
        return frozenset().union(*(a.counters() for a in self.args))

    def __str__(self):
        return "(" + " | ".join(str(a) for a in self.args) + ")"


def eval_acceptance(phi: Formula, boundedness: Mapping[str, bool]) -> bool:
    return phi.evaluate(boundedness)


# Automata ####################################################################

@dataclass(frozen=True)
class MaxAutomaton:
    """Deterministic, complete max-automaton.

    ``delta`` and ``labels`` are keyed by ``(state, letter)``.  For product
    alphabets letters are ``(input, output)`` pairs and ``input_alphabet`` /
    ``output_alphabet`` are set; ``alphabet`` is then their product in
    input-major order.
    """

    states: Tuple[State, ...]
    counters: Tuple[str, ...]
    alphabet: Tuple[Letter, ...]
    initial: State
    delta: Mapping[Tuple[State, Letter], State]
    labels: Mapping[Tuple[State, Letter], OpSequence]
    accept: Formula
    input_alphabet: Tuple[str, ...] = None
    output_alphabet: Tuple[str, ...] = None

    def __post_init__(self):
        for name in ("states", "counters", "alphabet"):
            value = tuple(getattr(self, name))
            if len(set(value)) != len(value):
                raise StructuralError(f"duplicate entries in {name}")
            object.__setattr__(self, name, value)
        if not self.states:
            raise StructuralError("automaton needs at least one state")
        if not self.alphabet:
            raise StructuralError("alphabet must be nonempty")
        if (self.input_alphabet is None) != (self.output_alphabet is None):
            raise StructuralError("input and output alphabets must be given together")
        if self.input_alphabet is not None:
            object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
            object.__setattr__(self, "output_alphabet", tuple(self.output_alphabet))
            expected = tuple((a, b) for a in self.input_alphabet for b in self.output_alphabet)
            if expected != self.alphabet:
                raise StructuralError("product alphabet must equal input x output")
        if self.initial not in self.states:
            raise StructuralError(f"initial state {self.initial!r} is not a state")
        counters = set(self.counters)
        states = set(self.states)
        delta = {}
        labels = {}
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise StructuralError(f"delta not total: no transition for ({q!r}, {a!r})")
                target = self.delta[q, a]
                if target not in states:
                    raise StructuralError(f"transition ({q!r}, {a!r}) targets unknown state {target!r}")
                ops = tuple(self.labels.get((q, a), ()))
                for op in ops:
                    for c in op.counters():
                        if c not in counters:
                            raise StructuralError(f"label of ({q!r}, {a!r}) uses unknown counter {c!r}")
                delta[q, a] = target
                labels[q, a] = ops
        if len(self.delta) != len(delta) or any(k not in delta for k in self.labels):
            raise StructuralError("transitions mention unknown states or letters")
        unknown = self.accept.counters() - counters
        if unknown:
            raise StructuralError(f"acceptance formula uses unknown counters {sorted(unknown)}")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "labels", labels)

    @property
    def is_product(self) -> bool:
        return self.input_alphabet is not None

    @cached_property
    def state_index(self) -> Dict[State, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def counter_index(self) -> Dict[str, int]:
        return {c: i for i, c in enumerate(self.counters)}

    @cached_property
    def letter_set(self) -> frozenset:
        return frozenset(self.alphabet)

    @cached_property
    def index_labels(self) -> Dict[Tuple[State, Letter], tuple]:
        """Labels with counters replaced by their indices."""
        ci = self.counter_index
        out = {}
        for key, ops in self.labels.items():
            conv = []
            for op in ops:
                if isinstance(op, Inc):
                    conv.append(("inc", ci[op.counter]))
                elif isinstance(op, Reset):
                    conv.append(("reset", ci[op.counter]))
                else:
                    conv.append(("max", ci[op.target], ci[op.left], ci[op.right]))
            out[key] = tuple(conv)
        return out

    @cached_property
    def derived(self) -> dict:
        """Scratch space for per-automaton caches kept by other modules."""
        return {}

    def check_word(self, word: Sequence[Letter]) -> None:
        for a in word:
            if a not in self.letter_set:
                raise StructuralError(f"letter {a!r} not in alphabet")

    def target(self, q: State, word: Sequence[Letter]) -> State:
        """The state reached from `q` after reading `word`."""
        self.check_word(word)
        for a in word:
            q = self.delta[q, a]
        return q

    def zero_valuation(self) -> Dict[str, int]:
        return {c: 0 for c in self.counters}


@dataclass
class RunTrace:
    """The run of an automaton on a finite word.

    ``samples[c]`` holds the value of `c` before the first transition and
    after each complete transition label.
    """

    states: list
    labels: list
    samples: Dict[str, list] = field(default_factory=dict)

    def final_valuation(self) -> Dict[str, int]:
        return {c: vals[-1] for c, vals in self.samples.items()}

    def max_sample(self, counter: str) -> int:
        return max(self.samples[counter])


def run_finite(automaton: MaxAutomaton, q: State, word: Sequence[Letter]) -> RunTrace:
    if q not in automaton.state_index:
        raise StructuralError(f"unknown state {q!r}")
    automaton.check_word(word)
    v = automaton.zero_valuation()
    trace = RunTrace(states=[q], labels=[], samples={c: [0] for c in automaton.counters})
    for a in word:
        ops = automaton.labels[q, a]
        q = automaton.delta[q, a]
        v = apply_ops(v, ops)
        trace.states.append(q)
        trace.labels.append(ops)
        for c in automaton.counters:
            trace.samples[c].append(v[c])
    return trace
