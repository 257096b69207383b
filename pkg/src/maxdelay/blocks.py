"""The block game: won by Player O with any unbounded lookahead, lost with bounded lookahead.

Input letters are ``0 1 #`` and output letters ``0 1 *``.  An input block
is ``# w`` with ``w`` a nonempty 0/1 word.  An output block pairs an input
block ``# a1 .. an`` with outputs ``x * .. * x`` where ``x = an``.  The
winning condition: if the input has infinitely many ``#`` and arbitrarily
long input blocks, the play must contain arbitrarily long output blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .automaton import Bounded, Inc, MaxAutomaton, MaxOp, Not, Or, Reset
from .delay import CopyOutput, InputStrategy, OutputStrategy, RandomInput, RandomOutput
from .errors import StructuralError

INPUT = ("0", "1", "#")
OUTPUT = ("0", "1", "*")
BITS = ("0", "1")

C_HASH, C_IN, C_OPEN, C_OUT = "c#", "ci", "co'", "co"


def build_block_automaton() -> MaxAutomaton:
    """Four counters: ``c#`` counts #'s, ``ci`` the current input block,
    ``co'`` the current candidate output block and ``co`` the last
    completed output block.  States: ``pre`` (no # yet), ``out`` (inside an
    input block, no open output block) and ``o0``/``o1`` (output block
    open, committed to 0/1)."""
    states = ("pre", "out", "o0", "o1")
    delta = {}
    labels = {}
    for q in states:
        for a in INPUT:
            for b in OUTPUT:
                if a == "#":
                    ops = [Inc(C_HASH), Reset(C_IN), Inc(C_IN), Reset(C_OPEN)]
                    if b in BITS:
                        ops.append(Inc(C_OPEN))
                        target = "o" + b
                    else:
                        target = "out"
                elif q == "pre":
                    ops, target = [], "pre"
                elif q == "out":
                    ops, target = [Inc(C_IN)], "out"
                else:
                    committed = q[1]
                    if b == "*":
                        ops, target = [Inc(C_IN), Inc(C_OPEN)], q
                    elif b == committed and a == committed:
                        ops = [Inc(C_IN), Inc(C_OPEN), MaxOp(C_OUT, C_OPEN, C_OPEN), Reset(C_OPEN)]
                        target = "out"
                    else:
                        ops, target = [Inc(C_IN), Reset(C_OPEN)], "out"
                delta[q, (a, b)] = target
                labels[q, (a, b)] = tuple(ops)
    accept = Or((Bounded(C_HASH), Bounded(C_IN), Not(Bounded(C_OUT))))
    return MaxAutomaton(
        states=states,
        counters=(C_HASH, C_IN, C_OPEN, C_OUT),
        alphabet=tuple((a, b) for a in INPUT for b in OUTPUT),
        initial="pre",
        delta=delta,
        labels=labels,
        accept=accept,
        input_alphabet=INPUT,
        output_alphabet=OUTPUT,
    )


# Statistics ##################################################################

@dataclass
class BlockStats:
    input_blocks: List[int] = field(default_factory=list)
    output_blocks: List[int] = field(default_factory=list)
    output_spans: List[Tuple[int, int]] = field(default_factory=list)
    input_open: bool = False
    output_open: bool = False

    def max_input(self) -> int:
        return max(self.input_blocks, default=0)

    def max_output(self) -> int:
        return max(self.output_blocks, default=0)

    def to_dict(self) -> dict:
        return {
            "input_blocks": self.input_blocks,
            "output_blocks": self.output_blocks,
            "max_input_block": self.max_input(),
            "max_output_block": self.max_output(),
            "input_open": self.input_open,
            "output_open": self.output_open,
        }


def block_statistics(prefix: Sequence) -> BlockStats:
    """Scan a finite prefix over the input alphabet or over input/output pairs.

    ``input_blocks`` lists maximal-so-far input blocks (the last one may still
    be open); ``output_blocks`` lists completed output blocks only.
    """
    joint = bool(prefix) and isinstance(prefix[0], tuple)
    stats = BlockStats()
    block_start = None
    opened = None  # (start, committed letter) of the candidate output block
    for i, letter in enumerate(prefix):
        a, b = letter if joint else (letter, None)
        if a not in INPUT:
            raise StructuralError(f"{a!r} is not an input letter")
        if a == "#":
            if block_start is not None and i - block_start > 1:
                stats.input_blocks.append(i - block_start)
            block_start = i
            opened = (i, b) if b in BITS else None
            continue
        if opened is not None:
            start, x = opened
            if b == "*":
                pass
            elif b == x and a == x:
                stats.output_blocks.append(i - start + 1)
                stats.output_spans.append((start, i))
                opened = None
            else:
                opened = None
    if block_start is not None and len(prefix) - block_start > 1:
        stats.input_blocks.append(len(prefix) - block_start)
        stats.input_open = True
    stats.output_open = opened is not None
    return stats


def longest_visible_block(alpha: Sequence, position: int, revealed: int) -> int:
    """Length of the longest input block starting at `position` inside ``alpha[:revealed]``."""
    if position >= revealed or alpha[position] != "#":
        return 0
    j = position + 1
    while j < revealed and alpha[j] in BITS:
        j += 1
    return j - position if j > position + 1 else 0


# Strategies ##################################################################

class LongestBlockOutput(OutputStrategy):
    """At a ``#`` commit to the last letter of the longest visible input block
    starting there; answer ``*`` inside it and repeat the letter at its end.
    Everywhere else answer `default`."""

    def __init__(self, default: str = "*"):
        self.default = default
        self.start()

    def start(self):
        self.commitments: List[Tuple[int, int, str]] = []
        self._active: Optional[Tuple[int, int, str]] = None

    def next_letter(self, inputs, position):
        if self._active is not None:
            start, end, x = self._active
            if position < end:
                return "*"
            self._active = None
            return x
        if inputs[position] == "#":
            length = longest_visible_block(inputs, position, len(inputs))
            if length:
                end = position + length - 1
                x = inputs[end]
                self._active = (position, end, x)
                self.commitments.append(self._active)
                return x
        return self.default


class Spoiler(InputStrategy):
    """Player I against lookahead at most `ell`.

    Opens a block with ``#`` and plays 0's until Player O's answer at that
    ``#`` is known, then fills the block with the letter Player O cannot end
    on (1 after a 0, otherwise 0).  Block ``j`` is at least
    ``max(ell + 2 + j, previous + 1)`` letters long, so blocks grow strictly.
    """

    def __init__(self, ell: int):
        if ell < 0:
            raise StructuralError("lookahead bound must be non-negative")
        self.ell = ell
        self.start()

    def start(self):
        self.emitted = 0
        self.block_lengths: List[int] = []
        self._hash_at: Optional[int] = None
        self._fill: Optional[str] = None
        self._target = 0

    def _next_letter(self, outputs):
        pos = self.emitted
        if self._hash_at is None:
            j = len(self.block_lengths)
            prev = self.block_lengths[-1] if self.block_lengths else 0
            self._target = max(self.ell + 2 + j, prev + 1)
            self._hash_at = pos
            self._fill = None
            return "#"
        p = self._hash_at
        if self._fill is None:
            if len(outputs) <= p:
                return "0"
            self._fill = "1" if outputs[p] == "0" else "0"
        letter = self._fill
        if pos - p + 1 >= self._target:
            self.block_lengths.append(pos - p + 1)
            self._hash_at = None
        return letter

    def next_word(self, outputs, length):
        word = []
        for _ in range(length):
            word.append(self._next_letter(outputs))
            self.emitted += 1
        return word


def make_input_strategy(name: str, seed: int = 0) -> InputStrategy:
    if name.startswith("i-spoiler:"):
        try:
            ell = int(name.split(":", 1)[1])
        except ValueError:
            raise StructuralError(f"bad spoiler bound in {name!r}") from None
        return Spoiler(ell)
    if name == "i-random":
        return RandomInput(INPUT, seed)
    raise StructuralError(f"unknown input strategy {name!r}")


def make_output_strategy(name: str, seed: int = 0) -> OutputStrategy:
    if name == "o-longest-block":
        return LongestBlockOutput()
    if name == "o-random":
        return RandomOutput(OUTPUT, seed)
    if name == "o-copy":
        return CopyOutput()
    raise StructuralError(f"unknown output strategy {name!r}")


INPUT_STRATEGIES = ("i-spoiler:<l>", "i-random")
OUTPUT_STRATEGIES = ("o-longest-block", "o-random", "o-copy")


def player_o_unbounded() -> LongestBlockOutput:
    return LongestBlockOutput()


def player_i_spoiler(ell: int) -> Spoiler:
    return Spoiler(ell)
