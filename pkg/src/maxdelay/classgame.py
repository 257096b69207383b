"""Validation harness for the delay-free game on equivalence classes.

Player I picks precisions ``r_i`` and infinite classes of the projected
relation on input words, staying one class ahead; Player O answers each
pending input class with a joint class containing some ``x (x) y``.  The
engine checks legality and keeps the transcript; it does not decide who
wins an infinite play.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, List, Optional, Sequence

from .automaton import MaxAutomaton
from .equivalence import ProjectedSignature, ProjectedTracker, WordSignature, default_budget
from .errors import BudgetExceeded, ContractError, IllegalMove, StructuralError


class GPlay:
    def __init__(self, automaton: MaxAutomaton, budget: Optional[int] = None):
        if not automaton.is_product:
            raise StructuralError("the class game needs a product alphabet")
        self.automaton = automaton
        self.budget = budget
        self.rs: List[int] = []
        self.i_moves: List[ProjectedSignature] = []
        self.o_moves: List[WordSignature] = []
        self.rate_violations: List[int] = []
        self._trackers: Dict[int, ProjectedTracker] = {}

    # trackers ----------------------------------------------------------------

    def projected(self, r: int) -> ProjectedTracker:
        tracker = self._trackers.get(r)
        if tracker is None:
            tracker = ProjectedTracker(self.automaton, r)
            result = tracker.explore(self.budget)
            if not result.complete:
                raise BudgetExceeded(f"projected classes at precision {r} exceed the budget")
            self._trackers[r] = tracker
        return tracker

    def input_class(self, r: int, word: Sequence) -> ProjectedSignature:
        return self.projected(r).run(word)

    def joint_class(self, r: int, word: Sequence) -> WordSignature:
        return self.projected(r).joint.run(word)

    # protocol ----------------------------------------------------------------

    @property
    def turn(self) -> str:
        return "O" if len(self.i_moves) == len(self.o_moves) + 2 else "I"

    @property
    def round(self) -> int:
        return len(self.o_moves)

    def submit_i_move(self, r: int, cls) -> ProjectedSignature:
        """`cls` is a projected class at precision `r` or an input word."""
        if self.turn != "I":
            raise ContractError("Player O must answer first", self.round)
        if r < 0:
            raise IllegalMove("precision must be non-negative", self.round)
        if not isinstance(cls, ProjectedSignature):
            cls = self.input_class(r, cls)
        if cls.cap != r:
            raise IllegalMove(f"class has precision {cls.cap}, expected {r}", self.round)
        tracker = self.projected(r)
        try:
            infinite = tracker.is_infinite(cls)
        except StructuralError:
            raise IllegalMove("class is not reachable", self.round) from None
        if not infinite:
            raise IllegalMove("Player I must pick an infinite class", self.round)
        if self.rs and r < self.rs[-1]:
            self.rate_violations.append(len(self.rs))
        self.rs.append(r)
        self.i_moves.append(cls)
        return cls

    def legal_o_moves(self) -> frozenset:
        if self.turn != "O":
            raise ContractError("no pending move of Player I", self.round)
        return self.i_moves[len(self.o_moves)].classes

    def submit_o_move(self, cls) -> WordSignature:
        """`cls` is a joint class or a joint word over input/output pairs."""
        legal = self.legal_o_moves()
        r = self.rs[len(self.o_moves)]
        if not isinstance(cls, WordSignature):
            cls = self.joint_class(r, cls)
        if cls not in legal:
            raise IllegalMove("joint class does not extend the pending input class", self.round)
        self.o_moves.append(cls)
        return cls

    def rate_status(self) -> dict:
        return {
            "weakly_increasing": not self.rate_violations,
            "violations": list(self.rate_violations),
            # unboundedness is a property of the infinite sequence
            "unbounded": "indeterminate",
        }

    # outcome -----------------------------------------------------------------

    def representative(self, t: int) -> list:
        """Shortest joint word in O's class of round `t` whose input
        projection lies in I's class of round `t`."""
        r = self.rs[t]
        tracker = self.projected(r)
        joint = tracker.joint
        target = (self.o_moves[t], self.i_moves[t])
        start = (joint.initial, tracker.initial)
        parent = {start: None}
        queue = deque([start])
        budget = default_budget() if self.budget is None else self.budget
        while queue:
            node = queue.popleft()
            if node == target:
                word = []
                while parent[node] is not None:
                    node, letter = parent[node]
                    word.append(letter)
                return word[::-1]
            s, p = node
            for letter in self.automaton.alphabet:
                nxt = (joint.step(s, letter), tracker.step(p, letter[0]))
                if nxt not in parent:
                    if len(parent) >= budget:
                        raise BudgetExceeded("budget exhausted while searching for a representative")
                    parent[nxt] = (node, letter)
                    queue.append(nxt)
        raise StructuralError(f"no representative for round {t}")

    def outcome_material(self, horizon: int) -> list:
        if horizon > len(self.o_moves):
            raise ContractError(f"only {len(self.o_moves)} completed rounds, need {horizon}")
        word = []
        for t in range(horizon):
            word.extend(self.representative(t))
        return word

    def to_dict(self) -> dict:
        return {
            "rs": list(self.rs),
            "i_moves": [self._class_id(c, self.rs[i]) for i, c in enumerate(self.i_moves)],
            "o_moves": len(self.o_moves),
            "turn": self.turn,
            "rate": self.rate_status(),
        }

    def _class_id(self, cls, r):
        return self.projected(r).index_of(cls)


def legal_o_moves(play: GPlay) -> frozenset:
    return play.legal_o_moves()


def submit_i_move(play: GPlay, r: int, cls):
    return play.submit_i_move(r, cls)


def submit_o_move(play: GPlay, cls):
    return play.submit_o_move(cls)


def outcome_material(play: GPlay, horizon: int) -> list:
    return play.outcome_material(horizon)
