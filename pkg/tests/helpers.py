"""Shared builders and brute-force oracles for the test suite.

The oracles here never touch the matrix algebra: transfer facts come from
``transfers_naive`` (explicit decomposition enumeration) and counter values
from ``apply_ops``.
"""

import random
from functools import lru_cache
from itertools import product

from maxdelay import And, Bounded, Inc, MaxAutomaton, MaxOp, Not, Or, Reset
from maxdelay.equivalence import word_compose, word_signature
from maxdelay.reductions import DetAutomaton
from maxdelay.transfer import BOT, transfers_naive


def r1(accept=None):
    """One state q, letter a increments c, letter b resets it."""
    return MaxAutomaton(
        states=("q",),
        counters=("c",),
        alphabet=("a", "b"),
        initial="q",
        delta={("q", "a"): "q", ("q", "b"): "q"},
        labels={("q", "a"): (Inc("c"),), ("q", "b"): (Reset("c"),)},
        accept=accept if accept is not None else Not(Bounded("c")),
    )


def random_op(rng, counters):
    kind = rng.choice(("inc", "inc", "reset", "max"))
    if kind == "inc":
        return Inc(rng.choice(counters))
    if kind == "reset":
        return Reset(rng.choice(counters))
    return MaxOp(rng.choice(counters), rng.choice(counters), rng.choice(counters))


def random_ops(rng, counters, max_len):
    return tuple(random_op(rng, counters) for _ in range(rng.randint(0, max_len)))


def random_formula(rng, counters, depth=2):
    if depth == 0 or rng.random() < 0.4:
        atom = Bounded(rng.choice(counters))
        return Not(atom) if rng.random() < 0.5 else atom
    parts = tuple(random_formula(rng, counters, depth - 1) for _ in range(2))
    return And(parts) if rng.random() < 0.5 else Or(parts)


def random_automaton(rng, n_states=None, n_counters=None, alphabet=("a", "b"),
                     max_ops=2, outputs=None):
    """Random complete automaton; with `outputs` the alphabet is ``alphabet x outputs``."""
    n = n_states or rng.randint(1, 3)
    k = n_counters or rng.randint(1, 2)
    states = tuple(f"q{i}" for i in range(n))
    counters = tuple(f"c{i}" for i in range(k))
    letters = tuple(product(alphabet, outputs)) if outputs else tuple(alphabet)
    delta, labels = {}, {}
    for q in states:
        for a in letters:
            delta[q, a] = rng.choice(states)
            labels[q, a] = random_ops(rng, counters, max_ops)
    return MaxAutomaton(
        states=states, counters=counters, alphabet=letters, initial=states[0],
        delta=delta, labels=labels, accept=random_formula(rng, counters),
        input_alphabet=tuple(alphabet) if outputs else None,
        output_alphabet=tuple(outputs) if outputs else None,
    )


def random_det(rng, n_states, alphabet=("a", "b")):
    states = tuple(f"s{i}" for i in range(n_states))
    delta = {(q, a): rng.choice(states) for q in states for a in alphabet}
    return DetAutomaton(states, tuple(alphabet), states[0], delta)


def random_word(rng, alphabet, lo, hi):
    return [rng.choice(alphabet) for _ in range(rng.randint(lo, hi))]


def words_upto(alphabet, n):
    for length in range(n + 1):
        for w in product(alphabet, repeat=length):
            yield list(w)


# Naive characteristics ########################################################

@lru_cache(maxsize=None)
def _naive(flat, c, d, cap):
    return transfers_naive(flat, c, d, cap)


@lru_cache(maxsize=None)
def _trace(ops, c, k, cap):
    # best over op-suffixes of ops of "some counter transfers to c"
    best = BOT
    for j in range(len(ops) + 1):
        for e in range(k):
            best = max(best, _naive(ops[j:], e, c, cap))
    return best


def naive_signature(letters, k, cap):
    """(A, B, T, P) of a word over label letters, straight from the definitions.

    `letters` is a tuple of index-op tuples.  T: transfers of the whole
    flattening; P: best over letter-prefixes; B: best c-trace among
    op-suffixes of the flattening; A: best c-trace among op-suffixes of the
    flattening of any letter-infix.
    """
    letters = tuple(tuple(x) for x in letters)
    flat = tuple(op for x in letters for op in x)
    n = len(letters)

    def trace(ops, c):
        return _trace(ops, c, k, cap)

    T = tuple(_naive(flat, c, d, cap) for c in range(k) for d in range(k))
    P = tuple(
        max(_naive(tuple(op for x in letters[:i] for op in x), c, d, cap) for i in range(n + 1))
        for c in range(k) for d in range(k)
    )
    B = tuple(trace(flat, c) for c in range(k))
    infixes = {tuple(op for x in letters[i:j] for op in x) for i in range(n + 1) for j in range(i, n + 1)}
    A = tuple(max(trace(ops, c) for ops in infixes) for c in range(k))
    return A, B, T, P


def sig_tuple(sig):
    return sig.A, sig.B, sig.T, sig.P


def label_letters(automaton, q, word):
    """Index-op labels read along `word` from state `q`."""
    out = []
    for a in word:
        out.append(automaton.index_labels[q, a])
        q = automaton.delta[q, a]
    return tuple(out)


def naive_word_class(automaton, word, cap):
    """Transition profile plus naive per-state characteristics."""
    k = len(automaton.counters)
    profile = tuple(automaton.target(q, word) for q in automaton.states)
    per_state = tuple(naive_signature(label_letters(automaton, q, word), k, cap) for q in automaton.states)
    return profile, per_state


# Thresholds ##################################################################

def scan_threshold(A, cap, horizon=12):
    """Threshold from an exhaustive scan of input words up to `horizon`.

    Every input word is visited; its projected class is extended letter by
    letter from its prefix's.  Returns None when the scan is too short to
    separate finite from infinite classes by pumping.
    """
    step = {(a, b): word_signature(A, [(a, b)], cap) for a, b in A.alphabet}

    memo = {}

    def extend(classes, a):
        key = (classes, a)
        if key not in memo:
            memo[key] = frozenset(word_compose(s, step[a, b]) for s in classes for b in A.output_alphabet)
        return memo[key]

    layer = [frozenset([word_signature(A, [], cap)])]
    by_length = [set(layer)]
    for _ in range(horizon):
        layer = [extend(c, a) for c in layer for a in A.input_alphabet]
        by_length.append(set(layer))
        if len(set().union(*by_length)) > (horizon + 1) // 2:
            return None
    classes = set().union(*by_length)
    n = len(classes)
    if 2 * n > horizon + 1:
        return None
    infinite = set().union(*by_length[n:])
    finite_lengths = [L for L, seen in enumerate(by_length) if seen - infinite]
    return 1 + max(finite_lengths) if finite_lengths else 0


def toy_automata(seed, count):
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        A = random_automaton(rng, n_states=rng.randint(1, 2), n_counters=1,
                             alphabet=("0", "1"), outputs=("x", "y"))
        cap = rng.randint(0, 1)
        expected = scan_threshold(A, cap)
        if expected is not None:
            found.append((A, cap, expected))
    return found


# Omega-word oracles ##########################################################

def lasso_states(det, u, v):
    """States visited infinitely often by the run of `det` on ``u v^omega``."""
    q = det.initial
    for a in u:
        q = det.delta[q, a]
    seen = {}
    entries = []
    while q not in seen:
        seen[q] = len(entries)
        entries.append(q)
        for a in v:
            q = det.delta[q, a]
    start = seen[q]
    visited = set()
    for _ in range(len(entries) - start):
        for a in v:
            q = det.delta[q, a]
            visited.add(q)
    return visited, q


def prefix_states(det, u, v):
    """Every state visited on ``u v^omega`` (finitely or infinitely often)."""
    q = det.initial
    states = {q}
    for a in u:
        q = det.delta[q, a]
        states.add(q)
    for _ in range(len(det.states) + 1):
        for a in v:
            q = det.delta[q, a]
            states.add(q)
    return states


def rng_for(*parts):
    return random.Random("/".join(str(p) for p in parts))
