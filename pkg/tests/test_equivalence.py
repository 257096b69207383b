import random
from collections import defaultdict
from itertools import product

import pytest

from maxdelay import Bounded, BudgetExceeded, Inc, MaxAutomaton, StructuralError
from maxdelay.equivalence import (
    below_tower,
    JointTracker,
    ProjectedTracker,
    class_is_infinite,
    compute_threshold,
    empty_signature,
    enumerate_classes,
    lookahead_bound,
    projected_index_bound,
    projected_signature,
    shortest_representative,
    theorem_initial_lookahead,
    tower_exponent,
    tracker_run,
    word_compose,
    word_index_bound,
    word_signature,
)
from maxdelay.transfer import BOT

from helpers import (
    naive_word_class,
    r1,
    random_automaton,
    random_word,
    sig_tuple,
    toy_automata,
    words_upto,
)


def class_view(sig, automaton):
    """Comparable view of a WordSignature in the naive oracle's shape."""
    profile = tuple(automaton.states[i] for i in sig.profile)
    return profile, tuple(sig_tuple(s) for s in sig.per_state)


def test_empty_word_signature():
    A = r1()
    assert word_signature(A, [], 2) == empty_signature(A, 2)


def test_r1_ab_example():
    s = word_signature(r1(), ["a", "b"], 1)
    t = s.per_state[0]
    assert s.profile == (0,)
    assert (t.t(0, 0), t.B[0], t.A[0], t.p(0, 0)) == (BOT, 0, 1, 1)


def test_word_signature_matches_naive():
    rng = random.Random(3)
    for _ in range(150):
        A = random_automaton(rng)
        cap = rng.randint(0, 2)
        w = random_word(rng, A.alphabet, 0, 4)
        assert class_view(word_signature(A, w, cap), A) == naive_word_class(A, w, cap)


def test_word_signature_splits():
    rng = random.Random(4)
    for _ in range(1000):
        A = random_automaton(rng)
        cap = rng.randint(0, 3)
        w = random_word(rng, A.alphabet, 0, 10)
        i = rng.randint(0, len(w))
        joined = word_compose(word_signature(A, w[:i], cap), word_signature(A, w[i:], cap))
        assert joined == word_signature(A, w, cap)


def test_word_signature_bad_letter():
    with pytest.raises(StructuralError):
        word_signature(r1(), ["z"], 1)


def test_tracker_agrees_and_memoizes():
    rng = random.Random(6)
    A = random_automaton(rng, n_states=3, n_counters=2)
    T = JointTracker(A, 2)
    assert tracker_run(T, []) == T.initial
    for _ in range(300):
        w = random_word(rng, A.alphabet, 0, 12)
        first = tracker_run(T, w)
        assert first == word_signature(A, w, 2)
        assert tracker_run(T, w) is first


def brute_force_count(A, cap):
    """Classes met by words of growing length, one representative word per class."""
    layer = {word_signature(A, [], cap): []}
    seen = dict(layer)
    while layer:
        nxt = {}
        for w in layer.values():
            for a in A.alphabet:
                sig = word_signature(A, w + [a], cap)
                if sig not in seen:
                    seen[sig] = nxt[sig] = w + [a]
        layer = nxt
    return len(seen)


def naive_count(A, cap, length):
    return len({naive_word_class(A, w, cap) for w in words_upto(A.alphabet, length)})


def test_r1_class_count():
    A = r1()
    result = enumerate_classes(A, 1)
    assert result.complete and result.bound == 81
    assert len(result) <= 81
    # stabilized: length 5 already reaches every class seen at length 6
    assert naive_count(A, 1, 5) == naive_count(A, 1, 6) == len(result)


def test_empty_labels_single_class():
    A = MaxAutomaton(("q",), ("c",), ("a", "b"), "q", {("q", "a"): "q", ("q", "b"): "q"}, {},
                     Bounded("c"))
    for cap in range(3):
        assert len(enumerate_classes(A, cap)) == 1


def test_enumeration_bounds_random():
    rng = random.Random(8)
    for _ in range(30):
        A = random_automaton(rng, n_states=rng.randint(1, 2), n_counters=1, outputs=("x", "y"))
        cap = rng.randint(0, 1)
        joint = enumerate_classes(A, cap)
        assert joint.complete
        assert len(joint) <= word_index_bound(len(A.states), 1, cap)
        assert len(joint) == brute_force_count(A, cap)
        P = ProjectedTracker(A, cap)
        proj = P.explore()
        assert proj.complete and len(proj) <= projected_index_bound(len(joint))


def test_budget_flag():
    A = r1()
    partial = JointTracker(A, 3).explore(budget=2)
    assert not partial.complete and len(partial) == 2
    with pytest.raises(BudgetExceeded):
        compute_threshold(random_automaton(random.Random(1), outputs=("x", "y")), 2, budget=1)


def test_projected_signature_brute_force():
    rng = random.Random(9)
    for _ in range(60):
        A = random_automaton(rng, n_states=rng.randint(1, 2), outputs=("x", "y"))
        cap = rng.randint(0, 2)
        x = random_word(rng, A.input_alphabet, 0, 4)
        expected = {word_signature(A, list(zip(x, y)), cap)
                    for y in product(A.output_alphabet, repeat=len(x))}
        assert projected_signature(A, x, cap).classes == expected


def test_projected_empty_and_singleton_output():
    rng = random.Random(10)
    A = random_automaton(rng, outputs=("x",))
    assert projected_signature(A, [], 1).classes == {empty_signature(A, 1)}
    for _ in range(20):
        x = random_word(rng, A.input_alphabet, 0, 6)
        got = projected_signature(A, x, 1)
        assert got.classes == {word_signature(A, [(a, "x") for a in x], 1)}


def test_projected_tracker_agrees():
    rng = random.Random(12)
    A = random_automaton(rng, n_states=2, outputs=("x", "y"))
    P = ProjectedTracker(A, 1)
    for _ in range(500):
        x = random_word(rng, A.input_alphabet, 0, 8)
        assert P.run(x) == projected_signature(A, x, 1)


def test_projected_requires_product():
    with pytest.raises(StructuralError):
        projected_signature(r1(), [], 1)


def test_finiteness_by_pumping():
    rng = random.Random(13)
    checked = 0
    while checked < 200:
        A = random_automaton(rng, n_states=rng.randint(1, 2), n_counters=1, alphabet=("a", "b"))
        T = JointTracker(A, rng.randint(0, 1))
        states = T.explore(budget=6)
        if not states.complete:
            continue
        n = len(states)
        # a class is infinite iff some word of length in [n, 2n) reaches it
        long_hits = defaultdict(bool)
        for w in words_upto(A.alphabet, 2 * n - 1):
            if len(w) >= n:
                long_hits[T.run(w)] = True
        for s in states.states:
            assert class_is_infinite(T, s) == long_hits[s]
        checked += 1


def test_finiteness_trivia():
    A = MaxAutomaton(("q",), ("c",), ("a",), "q", {("q", "a"): "q"}, {}, Bounded("c"))
    T = JointTracker(A, 1)
    T.explore()
    assert class_is_infinite(T, T.initial)
    R = JointTracker(r1(), 1)
    R.explore()
    assert not class_is_infinite(R, R.initial)


def test_shortest_representatives():
    rng = random.Random(14)
    for _ in range(20):
        A = random_automaton(rng, n_states=2, n_counters=1)
        T = JointTracker(A, 1)
        result = T.explore(budget=200)
        if not result.complete:
            continue
        assert shortest_representative(T, T.initial) == []
        for s in result.states:
            w = shortest_representative(T, s)
            assert T.run(w) == s
            for shorter in words_upto(A.alphabet, len(w) - 1):
                assert T.run(shorter) != s
            # shortlex: no word of the same length that sorts earlier reaches it
            order = {a: i for i, a in enumerate(A.alphabet)}
            for other in product(A.alphabet, repeat=len(w)):
                if [order[a] for a in other] < [order[a] for a in w]:
                    assert T.run(list(other)) != s


def test_unreachable_representative():
    T = JointTracker(r1(), 1)
    T.explore()
    foreign = word_signature(r1(), ["a"] * 5, 2)
    with pytest.raises(StructuralError):
        shortest_representative(T, foreign)


def test_threshold_against_scan():
    cases = toy_automata(21, 10)
    for A, cap, expected in cases:
        assert compute_threshold(A, cap) == expected
    assert any(expected > 0 for _, _, expected in cases)


def test_threshold_all_infinite():
    A = MaxAutomaton(("q",), ("c",), (("0", "x"),), "q", {("q", ("0", "x")): "q"},
                     {("q", ("0", "x")): (Inc("c"),)}, Bounded("c"),
                     input_alphabet=("0",), output_alphabet=("x",))
    # the empty word is alone in its class, everything else pumps
    assert compute_threshold(A, 1) == 1
    # at cap 0 an increment is invisible, so there is a single class
    assert compute_threshold(A, 0) == 0
    B = MaxAutomaton(("q",), ("c",), (("0", "x"),), "q", {("q", ("0", "x")): "q"}, {},
                     Bounded("c"), input_alphabet=("0",), output_alphabet=("x",))
    assert compute_threshold(B, 0) == 0


def test_theorem_bounds():
    assert tower_exponent(1, 0) == 0
    assert theorem_initial_lookahead(1, 0) == 4
    assert theorem_initial_lookahead(1, 1) == 2 * 2 ** (2 ** 8)
    for n in range(1, 4):
        for k in range(0, 3):
            assert tower_exponent(n + 1, k) > tower_exponent(n, k)
            assert tower_exponent(n, k + 1) > tower_exponent(n, k)
    with pytest.raises(OverflowError):
        lookahead_bound(3, 2).value()
    assert lookahead_bound(1, 1).tower == "2 * 2^(2^8)"


def test_threshold_below_tower():
    for A, _, _ in toy_automata(22, 5):
        d0 = compute_threshold(A, 0)
        assert below_tower(d0, tower_exponent(len(A.states), len(A.counters)))
