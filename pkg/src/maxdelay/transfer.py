"""Transfers, c-traces and cap-m signatures of label words.

Counters are addressed by index ``0..k-1``.  A capped count is ``BOT`` (no
such transfer/trace) or an integer in ``[0, cap]``; addition saturates at
the cap and ``BOT`` absorbs it.  Because clamping at `cap` is a homomorphism
of the (max, +) semiring, every computation below is exact at its cap.

A label word is a sequence of transition labels (each an operation
sequence treated as one letter).  Its signature records, for the flattened
operation sequence:

``A[c]``
    best c-trace that is a suffix of the flattening of some infix,
``B[c]``
    best c-trace that is a suffix of the whole flattening,
``T[c][d]``
    best number of increments with which the flattening transfers c to d,
``P[c][d]``
    best such transfer over the flattenings of the prefixes.

Infixes and prefixes are taken letter-wise, suffixes of a flattening
operation-wise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence, Tuple

from .errors import StructuralError

BOT = -1


def cadd(a: int, b: int, cap: int) -> int:
    if a < 0 or b < 0:
        return BOT
    return min(a + b, cap)


def clamp(a: int, cap: int) -> int:
    return a if a < 0 else min(a, cap)


# Index-level operations: ("inc", c) / ("reset", c) / ("max", c, c0, c1)
IndexOp = Tuple


def op_matrix(op: IndexOp, k: int, cap: int) -> Tuple[int, ...]:
    """Row-major k*k transfer matrix of a single operation."""
    m = [BOT] * (k * k)
    kind = op[0]
    for x in range(k):
        m[x * k + x] = 0
    if kind == "inc":
        e = op[1]
        m[e * k + e] = min(1, cap)
    elif kind == "reset":
        m[op[1] * k + op[1]] = BOT
    elif kind == "max":
        c, c0, c1 = op[1], op[2], op[3]
        m[c * k + c] = BOT
        m[c0 * k + c] = 0
        m[c1 * k + c] = 0
    else:
        raise StructuralError(f"unknown operation {op!r}")
    return tuple(m)


def mat_mul(x, y, k, cap):
    out = [BOT] * (k * k)
    for i in range(k):
        row = i * k
        for e in range(k):
            a = x[row + e]
            if a < 0:
                continue
            col = e * k
            for j in range(k):
                b = y[col + j]
                if b < 0:
                    continue
                s = a + b
                if s > cap:
                    s = cap
                if s > out[row + j]:
                    out[row + j] = s
    return tuple(out)


def vec_mul(v, y, k, cap):
    """Row vector times matrix."""
    out = [BOT] * k
    for e in range(k):
        a = v[e]
        if a < 0:
            continue
        col = e * k
        for j in range(k):
            b = y[col + j]
            if b < 0:
                continue
            s = a + b
            if s > cap:
                s = cap
            if s > out[j]:
                out[j] = s
    return tuple(out)


def elementwise_max(x, y):
    return tuple(a if a >= b else b for a, b in zip(x, y))


def identity_matrix(k):
    return tuple(0 if i == j else BOT for i in range(k) for j in range(k))


@dataclass(frozen=True)
class TransferSignature:
    """One cap-m class of label words; see the module docstring."""

    cap: int
    k: int
    A: Tuple[int, ...]
    B: Tuple[int, ...]
    T: Tuple[int, ...]
    P: Tuple[int, ...]

    def t(self, c, d):
        return self.T[c * self.k + d]

    def p(self, c, d):
        return self.P[c * self.k + d]

    def __matmul__(self, other):
        return compose(self, other)

    def format(self, names=None) -> str:
        return format_signature(self, names)


def identity_signature(k: int, cap: int) -> TransferSignature:
    if cap < 0:
        raise StructuralError("cap must be non-negative")
    ident = identity_matrix(k)
    zeros = (0,) * k
    return TransferSignature(cap, k, zeros, zeros, ident, ident)


def label_signature(ops: Sequence[IndexOp], k: int, cap: int) -> TransferSignature:
    """Signature of the one-letter label word `ops`."""
    if cap < 0:
        raise StructuralError("cap must be non-negative")
    T = identity_matrix(k)
    # best c-trace that is a suffix of the ops read so far; the empty
    # suffix is a trace of length 0 for every counter
    B = (0,) * k
    zeros = B
    for op in ops:
        M = op_matrix(op, k, cap)
        T = mat_mul(T, M, k, cap)
        B = elementwise_max(zeros, vec_mul(B, M, k, cap))
    P = elementwise_max(identity_matrix(k), T)
    # letter-wise infixes of one letter are the empty word and the letter
    return TransferSignature(cap, k, B, B, T, P)


def compose(s1: TransferSignature, s2: TransferSignature) -> TransferSignature:
    """Signature of the concatenation of two label words."""
    if s1.cap != s2.cap:
        raise StructuralError(f"cap mismatch: {s1.cap} vs {s2.cap}")
    if s1.k != s2.k:
        raise StructuralError(f"counter count mismatch: {s1.k} vs {s2.k}")
    k, cap = s1.k, s1.cap
    T = mat_mul(s1.T, s2.T, k, cap)
    P = elementwise_max(s1.P, mat_mul(s1.T, s2.P, k, cap))
    B = elementwise_max(s2.B, vec_mul(s1.B, s2.T, k, cap))
    A = elementwise_max(elementwise_max(s1.A, s2.A), vec_mul(s1.B, s2.P, k, cap))
    return TransferSignature(cap, k, A, B, T, P)


def project_cap(s: TransferSignature, cap: int) -> TransferSignature:
    if cap > s.cap or cap < 0:
        raise StructuralError(f"cannot project cap {s.cap} signature to cap {cap}")

    def cl(xs):
        return tuple(clamp(x, cap) for x in xs)

    return TransferSignature(cap, s.k, cl(s.A), cl(s.B), cl(s.T), cl(s.P))


def format_signature(s: TransferSignature, names=None) -> str:
    """Four labeled tables; ``-`` marks an absent trace or transfer."""
    names = list(names) if names is not None else [f"c{i}" for i in range(s.k)]
    width = max([len(n) for n in names] + [2])

    def cell(v):
        return ("-" if v < 0 else str(v)).rjust(width)

    lines = [f"cap {s.cap}"]
    for label, vec in (("A", s.A), ("B", s.B)):
        lines.append(f"{label}: " + " ".join(f"{n}={'-' if v < 0 else v}" for n, v in zip(names, vec)))
    for label, mat in (("T", s.T), ("P", s.P)):
        lines.append(f"{label}:" + " " * (width + 1) + " ".join(n.rjust(width) for n in names))
        for i, n in enumerate(names):
            row = mat[i * s.k:(i + 1) * s.k]
            lines.append("  " + n.rjust(width) + " " + " ".join(cell(v) for v in row))
    return "\n".join(lines)


# Reference oracle ############################################################

def _op_transfers(op: IndexOp, c: int, d: int) -> bool:
    kind = op[0]
    if kind == "inc":
        return c == d
    if kind == "reset":
        return c == d and c != op[1]
    target, c0, c1 = op[1], op[2], op[3]
    if d == target:
        return c in (c0, c1)
    return c == d


@lru_cache(maxsize=None)
def transfers(ops: Tuple[IndexOp, ...], c: int, d: int) -> bool:
    """Whether `ops` transfers `c` to `d` (inductive definition, no increments)."""
    if not ops:
        return c == d
    if len(ops) == 1:
        return _op_transfers(ops[0], c, d)
    head, rest = ops[:1], ops[1:]
    counters = {c, d}
    for op in ops:
        counters.update(op[1:])
    return any(transfers(head, c, e) and transfers(rest, e, d) for e in counters)


@lru_cache(maxsize=None)
def transfers_with(ops: Tuple[IndexOp, ...], c: int, d: int, m: int) -> bool:
    """Whether `ops` transfers `c` to `d` with exactly `m` increments.

    Enumerates every choice of `m` increment positions as the split points
    of the decomposition.
    """
    incs = [i for i, op in enumerate(ops) if op[0] == "inc"]
    for chosen in combinations(incs, m):
        cur = c
        start = 0
        ok = True
        for pos in chosen:
            e = ops[pos][1]
            if not transfers(ops[start:pos], cur, e):
                ok = False
                break
            cur = e
            start = pos + 1
        if ok and transfers(ops[start:], cur, d):
            return True
    return False


def transfers_naive(ops: Sequence[IndexOp], c: int, d: int, cap: int) -> int:
    """Largest ``m' <= cap`` with which `ops` transfers `c` to `d`, or BOT."""
    ops = tuple(ops)
    for m in range(cap, -1, -1):
        if transfers_with(ops, c, d, m):
            return m
    return BOT
