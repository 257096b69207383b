"""Round-based delay games on finite horizons.

In round ``i`` Player I supplies ``f(i)`` input letters, then Player O
answers with one output letter.  Plays are finite prefixes of the infinite
game; the engine records transcripts and never declares a winner.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

from .errors import ContractError, StructuralError


@dataclass(frozen=True)
class DelayFunction:
    """``f(i) = prefix[i]`` for ``i < len(prefix)``, else ``tail``."""

    prefix: Tuple[int, ...] = ()
    tail: int = 1

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(x) for x in self.prefix))
        if any(x < 1 for x in self.prefix) or self.tail < 1:
            raise StructuralError("delay function values must be >= 1")

    def __call__(self, i: int) -> int:
        return self.prefix[i] if i < len(self.prefix) else self.tail

    @classmethod
    def parse(cls, text: str) -> "DelayFunction":
        """Parse ``"3,1*"`` (explicit prefix, then a starred tail) or ``"2*"``."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts or not parts[-1].endswith("*"):
            raise StructuralError(f"delay function {text!r} must end with a 'c*' tail")
        try:
            tail = int(parts[-1][:-1])
            prefix = tuple(int(p) for p in parts[:-1])
        except ValueError:
            raise StructuralError(f"cannot parse delay function {text!r}") from None
        return cls(prefix, tail)

    def __str__(self):
        return ",".join([str(x) for x in self.prefix] + [f"{self.tail}*"])

    def classify(self) -> str:
        if self.tail != 1:
            return "unbounded"
        if all(x == 1 for x in self.prefix[1:]):
            return "constant"
        return "bounded"

    def max_lookahead(self) -> int:
        """``sum over f(i) > 1 of f(i) - 1``; only finite for bounded functions."""
        if self.tail != 1:
            raise StructuralError("unbounded delay functions have no maximal lookahead")
        return sum(x - 1 for x in self.prefix)

    def lookahead(self, i: int) -> int:
        """Revealed-but-unanswered letters after round `i`."""
        return sum(self(j) for j in range(i + 1)) - (i + 1)


def classify(f: DelayFunction) -> str:
    return f.classify()


class InputStrategy:
    """Player I: maps the output history to the next input word."""

    def start(self) -> None:
        """Reset per-play state; called once before round 0."""

    def next_word(self, outputs: Sequence, length: int) -> Sequence:
        raise NotImplementedError


class OutputStrategy:
    """Player O: maps the revealed input letters to the output at `position`."""

    def start(self) -> None:
        """Reset per-play state; called once before round 0."""

    def next_letter(self, inputs: Sequence, position: int):
        raise NotImplementedError


class FunctionInput(InputStrategy):
    def __init__(self, fn: Callable):
        self.fn = fn

    def next_word(self, outputs, length):
        return self.fn(outputs, length)


class FunctionOutput(OutputStrategy):
    def __init__(self, fn: Callable):
        self.fn = fn

    def next_letter(self, inputs, position):
        return self.fn(inputs, position)


class RandomInput(InputStrategy):
    """Uniform letters drawn one at a time, so the input word does not depend on f."""

    def __init__(self, alphabet: Sequence, seed: int):
        self.alphabet = tuple(alphabet)
        self.seed = seed
        self.start()

    def start(self):
        self.rng = random.Random(self.seed)

    def next_word(self, outputs, length):
        return [self.rng.choice(self.alphabet) for _ in range(length)]


class RandomOutput(OutputStrategy):
    def __init__(self, alphabet: Sequence, seed: int):
        self.alphabet = tuple(alphabet)
        self.seed = seed
        self.start()

    def start(self):
        self.rng = random.Random(self.seed)

    def next_letter(self, inputs, position):
        return self.rng.choice(self.alphabet)


class CopyOutput(OutputStrategy):
    """Answers every position with the input letter found there."""

    def next_letter(self, inputs, position):
        return inputs[position]


@dataclass
class PlayRecord:
    f: DelayFunction
    inputs: List[tuple] = field(default_factory=list)
    outputs: list = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.outputs)

    @property
    def alpha(self) -> list:
        return [a for u in self.inputs for a in u]

    @property
    def beta(self) -> list:
        return list(self.outputs)

    def revealed(self, i: int) -> int:
        """Number of input letters visible when output `i` is chosen."""
        return sum(len(u) for u in self.inputs[: i + 1])

    def lookaheads(self) -> List[int]:
        total = 0
        out = []
        for i, u in enumerate(self.inputs):
            total += len(u)
            out.append(total - (i + 1))
        return out

    def to_dict(self) -> dict:
        return {
            "f": str(self.f),
            "rounds": self.rounds,
            "inputs": ["".join(map(str, u)) for u in self.inputs],
            "outputs": [str(b) for b in self.outputs],
            "lookahead": self.lookaheads(),
        }


def play(f: DelayFunction, sigma_i: InputStrategy, sigma_o: OutputStrategy, rounds: int,
         input_alphabet: Sequence = None, output_alphabet: Sequence = None) -> PlayRecord:
    if rounds < 1:
        raise StructuralError("need at least one round")
    ins = frozenset(input_alphabet) if input_alphabet is not None else None
    outs = frozenset(output_alphabet) if output_alphabet is not None else None
    sigma_i.start()
    sigma_o.start()
    record = PlayRecord(f)
    alpha: list = []
    for i in range(rounds):
        need = f(i)
        u = tuple(sigma_i.next_word(tuple(record.outputs), need))
        if len(u) != need:
            raise ContractError(f"input strategy produced {len(u)} letters, expected {need}", i)
        if ins is not None and any(a not in ins for a in u):
            raise ContractError(f"input word {u!r} leaves the input alphabet", i)
        record.inputs.append(u)
        alpha.extend(u)
        b = sigma_o.next_letter(tuple(alpha), i)
        if outs is not None and b not in outs:
            raise ContractError(f"output letter {b!r} not in the output alphabet", i)
        record.outputs.append(b)
    return record


def outcome_prefix(record: PlayRecord) -> List[tuple]:
    """Joint letters for every answered position; the unanswered lookahead is left out."""
    alpha = record.alpha
    return list(zip(alpha[: len(record.outputs)], record.outputs))


def pending_lookahead(record: PlayRecord) -> list:
    return record.alpha[len(record.outputs):]
