"""Word equivalences of bounded precision and their tracking automata.

Two words are cap-m equivalent when they have the same transition profile
and, from every state, label words with equal cap-m transfer signatures.
This is a congruence, so its classes form the states of a DFA (the
tracker) that is materialised lazily.  For product alphabets the projected
relation identifies input words whose sets of reachable joint classes
coincide.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from .automaton import MaxAutomaton
from .errors import BudgetExceeded, StructuralError
from .transfer import TransferSignature, compose, identity_signature, label_signature

DEFAULT_BUDGET = 10**6


def default_budget() -> int:
    value = os.environ.get("MAXDELAY_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


@dataclass(frozen=True)
class WordSignature:
    """One class of the cap-m word equivalence.

    ``profile[i]`` is the index of the state reached from state ``i``;
    ``per_state[i]`` is the signature of the label word read from state ``i``.
    """

    profile: Tuple[int, ...]
    per_state: Tuple[TransferSignature, ...]
    cap: int


@dataclass(frozen=True)
class ProjectedSignature:
    """One class of the projected relation: the set of joint classes
    ``[x (x) y]`` over all output words ``y`` of the same length."""

    classes: FrozenSet[WordSignature]
    cap: int


def empty_signature(automaton: MaxAutomaton, cap: int) -> WordSignature:
    n, k = len(automaton.states), len(automaton.counters)
    ident = identity_signature(k, cap)
    return WordSignature(tuple(range(n)), (ident,) * n, cap)


def letter_signatures(automaton: MaxAutomaton, cap: int) -> Dict:
    cache = automaton.derived.setdefault("letter_signatures", {})
    if cap not in cache:
        k = len(automaton.counters)
        si = automaton.state_index
        table = {}
        for a in automaton.alphabet:
            profile = tuple(si[automaton.delta[q, a]] for q in automaton.states)
            per_state = tuple(
                label_signature(automaton.index_labels[q, a], k, cap) for q in automaton.states
            )
            table[a] = WordSignature(profile, per_state, cap)
        cache[cap] = table
    return cache[cap]


def word_compose(s1: WordSignature, s2: WordSignature) -> WordSignature:
    if s1.cap != s2.cap:
        raise StructuralError(f"cap mismatch: {s1.cap} vs {s2.cap}")
    if len(s1.profile) != len(s2.profile):
        raise StructuralError("signatures belong to different automata")
    p1, p2 = s1.profile, s2.profile
    profile = tuple(p2[j] for j in p1)
    per_state = tuple(compose(s1.per_state[i], s2.per_state[j]) for i, j in enumerate(p1))
    return WordSignature(profile, per_state, s1.cap)


def word_signature(automaton: MaxAutomaton, word: Sequence, cap: int) -> WordSignature:
    automaton.check_word(word)
    letters = letter_signatures(automaton, cap)
    sig = empty_signature(automaton, cap)
    for a in word:
        sig = word_compose(sig, letters[a])
    return sig


# Trackers ####################################################################

@dataclass
class Exploration:
    """Result of a breadth-first closure of a tracker."""

    states: list
    complete: bool
    bound: Optional[int] = None

    def __len__(self):
        return len(self.states)


class Tracker:
    """Lazily built DFA whose states are equivalence classes.

    Subclasses provide ``initial``, ``alphabet`` and ``_successor``.  The
    step table is memoised, so repeated runs return the same objects.
    """

    alphabet: Tuple = ()
    initial = None

    def __init__(self):
        self._succ: Dict = {}
        self._graph: Optional[nx.MultiDiGraph] = None
        self._infinite: Optional[set] = None
        self._order: Optional[list] = None
        self._parent: Dict = {}

    def _successor(self, state, letter):
        raise NotImplementedError

    def step(self, state, letter):
        key = (state, letter)
        nxt = self._succ.get(key)
        if nxt is None:
            if letter not in self._letters:
                raise StructuralError(f"letter {letter!r} not in tracker alphabet")
            nxt = self._successor(state, letter)
            self._succ[key] = nxt
        return nxt

    @property
    def _letters(self):
        return frozenset(self.alphabet)

    def run(self, word, start=None):
        state = self.initial if start is None else start
        for a in word:
            state = self.step(state, a)
        return state

    def explore(self, budget: Optional[int] = None) -> Exploration:
        """Breadth-first closure; letters are tried in declared order."""
        if self._order is not None:
            return Exploration(list(self._order), True)
        budget = default_budget() if budget is None else budget
        order = [self.initial]
        parent = {self.initial: None}
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for a in self.alphabet:
                t = self.step(s, a)
                if t not in parent:
                    if len(order) >= budget:
                        return Exploration(order, False)
                    parent[t] = (s, a)
                    order.append(t)
                    queue.append(t)
        self._order = order
        self._parent = parent
        return Exploration(list(order), True)

    def _require_complete(self):
        if self._order is None:
            raise BudgetExceeded("tracker has not been explored completely")

    @property
    def graph(self) -> nx.MultiDiGraph:
        self._require_complete()
        if self._graph is None:
            g = nx.MultiDiGraph()
            g.add_nodes_from(range(len(self._order)))
            index = {s: i for i, s in enumerate(self._order)}
            for s in self._order:
                for a in self.alphabet:
                    g.add_edge(index[s], index[self._succ[s, a]], letter=a)
            self._graph = g
            self._index = index
        return self._graph

    def index_of(self, state) -> int:
        self.graph
        try:
            return self._index[state]
        except KeyError:
            raise StructuralError("state is not reachable in this tracker") from None

    def infinite_states(self) -> set:
        """Indices of states whose language (words reaching them) is infinite."""
        if self._infinite is None:
            g = self.graph
            cyclic = set()
            for comp in nx.strongly_connected_components(g):
                if len(comp) > 1 or any(g.has_edge(v, v) for v in comp):
                    cyclic |= comp
            infinite = set(cyclic)
            for v in cyclic:
                infinite |= nx.descendants(g, v)
            self._infinite = infinite
        return self._infinite

    def is_infinite(self, state) -> bool:
        return self.index_of(state) in self.infinite_states()

    def shortest_representative(self, state, budget: Optional[int] = None) -> list:
        """Shortlex-least word reaching `state` (letters in declared order)."""
        if state not in self._parent:
            found = self._search(state, budget)
            if not found:
                raise StructuralError("class is not reachable")
        word = []
        cur = state
        while self._parent[cur] is not None:
            cur, a = self._parent[cur]
            word.append(a)
        word.reverse()
        return word

    def _search(self, target, budget):
        # bounded BFS that stops as soon as `target` is found
        if self._order is not None:
            return False
        budget = default_budget() if budget is None else budget
        parent = {self.initial: None}
        queue = deque([self.initial])
        while queue:
            s = queue.popleft()
            if s == target:
                self._parent.update(parent)
                return True
            for a in self.alphabet:
                t = self.step(s, a)
                if t not in parent:
                    if len(parent) >= budget:
                        raise BudgetExceeded("budget exhausted while searching for a representative")
                    parent[t] = (s, a)
                    queue.append(t)
        return False

    def threshold(self) -> int:
        """Least d such that every word of length >= d reaches an infinite class."""
        g = self.graph
        finite = set(g.nodes) - self.infinite_states()
        if not finite:
            return 0
        # finite classes are closed under predecessors and acyclic
        sub = nx.DiGraph(g.subgraph(finite))
        return 1 + nx.dag_longest_path_length(sub)


class JointTracker(Tracker):
    """Tracker for the cap-m word equivalence over the automaton's alphabet."""

    def __init__(self, automaton: MaxAutomaton, cap: int):
        super().__init__()
        if cap < 0:
            raise StructuralError("cap must be non-negative")
        self.automaton = automaton
        self.cap = cap
        self.alphabet = automaton.alphabet
        self._letter_sigs = letter_signatures(automaton, cap)
        self.initial = empty_signature(automaton, cap)

    def _successor(self, state, letter):
        return word_compose(state, self._letter_sigs[letter])


class ProjectedTracker(Tracker):
    """Power construction over a joint tracker, reading input letters only."""

    def __init__(self, automaton: MaxAutomaton, cap: int, joint: Optional[JointTracker] = None):
        super().__init__()
        if not automaton.is_product:
            raise StructuralError("projection needs a product alphabet")
        self.automaton = automaton
        self.cap = cap
        self.joint = joint if joint is not None else JointTracker(automaton, cap)
        self.alphabet = automaton.input_alphabet
        self.initial = ProjectedSignature(frozenset([self.joint.initial]), cap)

    def _successor(self, state, letter):
        outs = self.automaton.output_alphabet
        step = self.joint.step
        return ProjectedSignature(
            frozenset(step(s, (letter, b)) for s in state.classes for b in outs), self.cap
        )


def tracker_step(tracker: Tracker, state, letter):
    return tracker.step(state, letter)


def tracker_run(tracker: Tracker, word):
    return tracker.run(word)


def projected_signature(automaton: MaxAutomaton, word: Sequence, cap: int) -> ProjectedSignature:
    if not automaton.is_product:
        raise StructuralError("projection needs a product alphabet")
    for a in word:
        if a not in automaton.input_alphabet:
            raise StructuralError(f"letter {a!r} not in input alphabet")
    letters = letter_signatures(automaton, cap)
    current = {empty_signature(automaton, cap)}
    for a in word:
        current = {word_compose(s, letters[(a, b)]) for s in current for b in automaton.output_alphabet}
    return ProjectedSignature(frozenset(current), cap)


def projected_tracker(automaton: MaxAutomaton, cap: int) -> ProjectedTracker:
    return ProjectedTracker(automaton, cap)


# Bounds ######################################################################

def op_index_bound(k: int, cap: int) -> int:
    """Number of cap-m label classes at most: (m+2)^(2(k^2+k))."""
    return (cap + 2) ** (2 * (k * k + k))


def word_index_bound(n: int, k: int, cap: int) -> int:
    """(n * op_index_bound)^n, i.e. 2^(n(log n + 2(k^2+k) log(m+2)))."""
    return (n * op_index_bound(k, cap)) ** n


def projected_index_bound(joint_count: int) -> int:
    return 2 ** joint_count


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return (n - 1).bit_length()


def tower_exponent(n: int, k: int) -> int:
    """E = 2n(ceil(log2 n) + 2(k^2+k)); the length bound is 2^(2^E)."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return 2 * n * (ceil_log2(n) + 2 * (k * k + k))


def below_tower(x: int, exponent: int) -> bool:
    """Whether ``x < 2**(2**exponent)`` without materialising the tower."""
    if x < 1:
        return True
    if exponent >= 63:
        return True
    return x.bit_length() <= 2 ** exponent


@dataclass(frozen=True)
class LookaheadBound:
    n: int
    k: int
    exponent: int

    @property
    def tower(self) -> str:
        return f"2 * 2^(2^{self.exponent})"

    def value(self, max_bits: int = 1 << 20) -> int:
        bits = 2 ** self.exponent if self.exponent < 63 else None
        if bits is None or bits > max_bits:
            raise OverflowError(f"{self.tower} exceeds the display bound of {max_bits} bits")
        return 2 * 2 ** bits


def lookahead_bound(n: int, k: int) -> LookaheadBound:
    return LookaheadBound(n, k, tower_exponent(n, k))


def theorem_initial_lookahead(n: int, k: int, max_bits: int = 1 << 20) -> int:
    """Initial lookahead 2d sufficient for every unbounded delay function,
    with ``d = 2^(2^(2n(log n + 2(k^2+k))))`` and log rounded up."""
    return lookahead_bound(n, k).value(max_bits)


# Enumeration and queries #####################################################

def enumerate_classes(automaton: MaxAutomaton, cap: int, budget: Optional[int] = None,
                      tracker: Optional[JointTracker] = None) -> Exploration:
    tracker = tracker or JointTracker(automaton, cap)
    result = tracker.explore(budget)
    result.bound = word_index_bound(len(automaton.states), len(automaton.counters), cap)
    return result


def class_is_infinite(tracker: Tracker, state) -> bool:
    return tracker.is_infinite(state)


def shortest_representative(tracker: Tracker, state, budget: Optional[int] = None) -> list:
    return tracker.shortest_representative(state, budget)


def compute_threshold(automaton: MaxAutomaton, cap: int, budget: Optional[int] = None,
                      tracker: Optional[ProjectedTracker] = None) -> int:
    tracker = tracker or ProjectedTracker(automaton, cap)
    result = tracker.explore(budget)
    if not result.complete:
        raise BudgetExceeded(f"projected tracker did not close within {len(result)} states")
    return tracker.threshold()


def class_summary(tracker: Tracker) -> List[dict]:
    """Per-class finiteness and shortest representative of an explored tracker."""
    tracker._require_complete()
    infinite = tracker.infinite_states()
    rows = []
    for i, s in enumerate(tracker._order):
        rows.append({
            "id": i,
            "infinite": i in infinite,
            "representative": tracker.shortest_representative(s),
        })
    return rows
