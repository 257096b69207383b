import random
from itertools import product

import pytest

from maxdelay import Bounded, BudgetExceeded, ContractError, IllegalMove, Inc, MaxAutomaton, StructuralError
from maxdelay.classgame import GPlay, legal_o_moves, outcome_material, submit_i_move, submit_o_move
from maxdelay.equivalence import compute_threshold, word_signature
from maxdelay.lasso import member

from helpers import r1, random_automaton, random_word


def last_letter_game():
    """State remembers the last input letter; a wrong output increments e."""
    ins, outs = ("0", "1"), ("0", "1")
    delta, labels = {}, {}
    for q in ("p", "r"):
        for a in ins:
            for b in outs:
                delta[q, (a, b)] = "p" if a == "0" else "r"
                labels[q, (a, b)] = () if a == b else (Inc("e"),)
    return MaxAutomaton(("p", "r"), ("e",), tuple(product(ins, outs)), "p", delta, labels,
                        Bounded("e"), input_alphabet=ins, output_alphabet=outs)


def test_needs_product_alphabet():
    with pytest.raises(StructuralError):
        GPlay(r1())


def test_finite_class_rejected():
    game = GPlay(last_letter_game())
    with pytest.raises(IllegalMove, match="infinite"):
        game.submit_i_move(1, [])


def test_turn_discipline():
    game = GPlay(last_letter_game())
    with pytest.raises(ContractError):
        game.legal_o_moves()
    submit_i_move(game, 1, ["0"])
    assert game.turn == "I"
    submit_i_move(game, 1, ["1"])
    assert game.turn == "O"
    with pytest.raises(ContractError):
        game.submit_i_move(1, ["0"])
    submit_o_move(game, [("0", "0")])
    # from now on Player I is one class ahead
    assert len(game.i_moves) == len(game.o_moves) + 1
    submit_i_move(game, 2, ["0", "1"])
    submit_o_move(game, [("1", "1")])
    assert len(game.i_moves) == len(game.o_moves) + 1


def test_legal_moves_brute_force():
    A = last_letter_game()
    game = GPlay(A)
    game.submit_i_move(1, ["0", "1"])
    game.submit_i_move(1, ["1"])
    tracker = game.projected(1)
    x = tracker.shortest_representative(game.i_moves[0])
    expected = {word_signature(A, list(zip(x, y)), 1) for y in product(A.output_alphabet, repeat=len(x))}
    assert set(legal_o_moves(game)) == expected
    with pytest.raises(IllegalMove):
        # a joint word whose input ends in 0 cannot answer a class of words ending in 1
        game.submit_o_move([("1", "1"), ("0", "0")])


def test_legality_independent_of_representative():
    A = last_letter_game()
    one = GPlay(A)
    two = GPlay(A)
    for game, x in ((one, ["0", "1"]), (two, ["1", "1", "0", "1"])):
        game.submit_i_move(2, x)
        game.submit_i_move(2, x)
    assert one.i_moves[0] == two.i_moves[0]
    assert legal_o_moves(one) == legal_o_moves(two)


def test_singleton_output_one_legal_move():
    rng = random.Random(4)
    A = random_automaton(rng, n_states=2, n_counters=1, outputs=("x",))
    game = GPlay(A)
    d = compute_threshold(A, 1)
    x = ["a"] * (d + 1)
    game.submit_i_move(1, x)
    game.submit_i_move(1, x)
    assert len(legal_o_moves(game)) == 1


def test_decreasing_precision_is_flagged():
    game = GPlay(last_letter_game())
    game.submit_i_move(2, ["0"] * 4)
    game.submit_i_move(1, ["1"] * 4)
    status = game.rate_status()
    assert not status["weakly_increasing"] and status["violations"] == [1]
    assert status["unbounded"] == "indeterminate"


def test_cap_mismatch_rejected():
    game = GPlay(last_letter_game())
    cls = game.input_class(2, ["0"])
    with pytest.raises(IllegalMove):
        game.submit_i_move(1, cls)


def play_rounds(A, rounds, rng, caps, budget=None):
    game = GPlay(A, budget)
    inputs = []
    for t in range(rounds + 1):
        r = caps[t]
        d = game.projected(r).threshold()
        x = random_word(rng, A.input_alphabet, d, d + 3)
        inputs.append(x)
        game.submit_i_move(r, x)
        if t >= 1:
            y = [rng.choice(A.output_alphabet) for _ in inputs[t - 1]]
            game.submit_o_move(list(zip(inputs[t - 1], y)))
    return game


def test_outcome_material_representatives():
    rng = random.Random(7)
    A = last_letter_game()
    game = play_rounds(A, 4, rng, [1, 1, 2, 2, 2])
    with pytest.raises(ContractError):
        outcome_material(game, 5)
    word = outcome_material(game, 4)
    pos = 0
    for t in range(4):
        rep = game.representative(t)
        assert word[pos:pos + len(rep)] == rep
        pos += len(rep)
        tracker = game.projected(game.rs[t])
        assert tracker.joint.run(rep) == game.o_moves[t]
        assert tracker.run([a for a, _ in rep]) == game.i_moves[t]
    one = GPlay(A)
    one.submit_i_move(1, ["0"])
    one.submit_i_move(1, ["0"])
    one.submit_o_move([("0", "1")])
    assert outcome_material(one, 1) == one.representative(0)


def test_threshold_words_are_legal_moves():
    rng = random.Random(9)
    for _ in range(10):
        A = random_automaton(rng, n_states=2, n_counters=1, alphabet=("0", "1"), outputs=("x", "y"))
        for r in (0, 1):
            d = compute_threshold(A, r)
            tracker = GPlay(A).projected(r)
            for _ in range(10):
                x = random_word(rng, A.input_alphabet, d, d + 4)
                assert tracker.is_infinite(tracker.run(x))


def other_member(tracker, cls, avoid, max_len=6):
    alphabet = tracker.alphabet
    for length in range(1, max_len + 1):
        for w in product(alphabet, repeat=length):
            w = list(w)
            if w != avoid and tracker.run(w) == cls:
                return w
    return None


def test_swapping_representatives_keeps_membership():
    rng = random.Random(11)
    swaps = 0
    for _ in range(40):
        A = random_automaton(rng, n_states=2, n_counters=1, alphabet=("0", "1"), outputs=("x", "y"))
        try:
            game = play_rounds(A, 2, rng, [2, 2, 2], budget=2000)
            reps = [game.representative(t) for t in range(2)]
        except BudgetExceeded:
            continue
        tracker = game.projected(2).joint
        for t, rep in enumerate(reps):
            alt = other_member(tracker, game.o_moves[t], rep)
            if alt is None or not rep:
                continue
            swaps += 1
            for u in (random_word(rng, A.alphabet, 0, 3) for _ in range(5)):
                assert member(A, (u, rep)) == member(A, (u, alt))
    assert swaps > 10


def test_to_dict():
    game = GPlay(last_letter_game())
    game.submit_i_move(1, ["0"])
    data = game.to_dict()
    assert data["rs"] == [1] and data["turn"] == "I" and data["o_moves"] == 0
