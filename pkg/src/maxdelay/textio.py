"""Line-oriented text format for automata.

Example::

    # one state, counter c counts a's since the last b
    alphabet: a b
    counters: c
    states: q
    initial: q
    accept: !(bounded c)
    trans: q a q : inc c
    trans: q b q : reset c

Product alphabets use ``alphabet_input:`` / ``alphabet_output:`` and letters
written ``a|x``.  Lines whose first non-blank character is ``#`` are
comments; ``#`` elsewhere is an ordinary character, so it can be a letter or
part of a counter name.  Source automata for the reductions use the same
format with ``colors: q0=0 q1=1`` (parity) or ``safe: q0 q1`` (safety)
instead of ``counters:``/``accept:``.
"""

from __future__ import annotations

import re

from .automaton import And, Bounded, Inc, MaxAutomaton, MaxOp, Not, Or, Reset
from .errors import ParseError, StructuralError
from .reductions import ParityAutomaton, SafetyAutomaton

_KEYS = {
    "alphabet", "alphabet_input", "alphabet_output", "counters", "states",
    "initial", "accept", "trans", "colors", "safe",
}

_TOKEN = re.compile(r"\s*(?:([()!&|])|([^\s()!&|]+))")


# Formulas ####################################################################

def parse_formula(text, counters=None, line=None):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot tokenize formula at {text[pos:]!r}", line)
        tokens.append(m.group(1) or m.group(2))
        pos = m.end()
    if not tokens:
        raise ParseError("empty acceptance formula", line)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take(expected=None):
        nonlocal i
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"malformed formula: expected {expected or 'token'}, got {tok!r}", line)
        i += 1
        return tok

    def disj():
        args = [conj()]
        while peek() == "|":
            take()
            args.append(conj())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conj():
        args = [unary()]
        while peek() == "&":
            take()
            args.append(unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary():
        tok = peek()
        if tok == "!":
            take()
            return Not(unary())
        if tok == "(":
            take()
            inner = disj()
            take(")")
            return inner
        if tok == "bounded":
            take()
            name = take()
            if name in "()!&|":
                raise ParseError(f"malformed formula: bad counter name {name!r}", line)
            if counters is not None and name not in counters:
                raise ParseError(f"unknown counter {name!r} in formula", line)
            return Bounded(name)
        raise ParseError(f"malformed formula: unexpected {tok!r}", line)

    result = disj()
    if i != len(tokens):
        raise ParseError(f"malformed formula: trailing {tokens[i]!r}", line)
    return result


def format_formula(phi) -> str:
    text = str(phi)
    return text


# Reading #####################################################################

def _parse_op(text, counters, line):
    parts = text.split()
    if not parts:
        raise ParseError("empty counter operation", line)
    kind, args = parts[0], parts[1:]
    arity = {"inc": 1, "reset": 1, "max": 3}.get(kind)
    if arity is None:
        raise ParseError(f"unknown counter operation {kind!r}", line)
    if len(args) != arity:
        raise ParseError(f"{kind} takes {arity} counter(s), got {len(args)}", line)
    for c in args:
        if c not in counters:
            raise ParseError(f"unknown counter {c!r}", line)
    if kind == "inc":
        return Inc(args[0])
    if kind == "reset":
        return Reset(args[0])
    return MaxOp(*args)


def _read_sections(text):
    sections = {}
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in _KEYS:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno)
        if key == "trans":
            transitions.append((lineno, rest))
        elif key in sections:
            raise ParseError(f"duplicate {key!r} line", lineno)
        else:
            sections[key] = (lineno, rest.strip())
    return sections, transitions


def _parse_body(text):
    sections, transitions = _read_sections(text)
    for key in ("states", "initial"):
        if key not in sections:
            raise ParseError(f"missing {key!r} line")
    product = "alphabet_input" in sections or "alphabet_output" in sections
    if product:
        if "alphabet" in sections:
            raise ParseError("give either 'alphabet' or input/output alphabets", sections["alphabet"][0])
        if "alphabet_input" not in sections or "alphabet_output" not in sections:
            raise ParseError("product alphabet needs both alphabet_input and alphabet_output")
        ins = tuple(sections["alphabet_input"][1].split())
        outs = tuple(sections["alphabet_output"][1].split())
        for a in ins + outs:
            if "|" in a:
                raise ParseError(f"letter {a!r} may not contain '|'", sections["alphabet_input"][0])
        alphabet = tuple((a, b) for a in ins for b in outs)
    else:
        if "alphabet" not in sections:
            raise ParseError("missing 'alphabet' line")
        ins = outs = None
        alphabet = tuple(sections["alphabet"][1].split())
    if not alphabet:
        raise ParseError("alphabet must be nonempty")
    states = tuple(sections["states"][1].split())
    state_set = set(states)
    init_line, initial = sections["initial"]
    if initial not in state_set:
        raise ParseError(f"unknown initial state {initial!r}", init_line)
    counters = tuple(sections["counters"][1].split()) if "counters" in sections else ()
    letters = set(alphabet)
    delta = {}
    labels = {}
    for lineno, rest in transitions:
        head, sep, ops_text = rest.partition(":")
        parts = head.split()
        if len(parts) != 3:
            raise ParseError("transition needs 'source letter target'", lineno)
        src, letter_text, dst = parts
        for q in (src, dst):
            if q not in state_set:
                raise ParseError(f"unknown state {q!r}", lineno)
        if product:
            a, bar, b = letter_text.partition("|")
            letter = (a, b)
            if not bar:
                raise ParseError(f"product letter must look like 'a|b', got {letter_text!r}", lineno)
        else:
            letter = letter_text
        if letter not in letters:
            raise ParseError(f"unknown letter {letter_text!r}", lineno)
        if (src, letter) in delta:
            raise ParseError(f"duplicate transition for ({src}, {letter_text})", lineno)
        ops = []
        if sep:
            for chunk in ops_text.split(";"):
                if chunk.strip():
                    ops.append(_parse_op(chunk, counters, lineno))
        delta[src, letter] = dst
        labels[src, letter] = tuple(ops)
    for q in states:
        for a in alphabet:
            if (q, a) not in delta:
                shown = "|".join(a) if isinstance(a, tuple) else a
                raise ParseError(f"delta not total: no transition for ({q}, {shown})")
    return dict(
        sections=sections, states=states, alphabet=alphabet, initial=initial,
        counters=counters, delta=delta, labels=labels, ins=ins, outs=outs,
    )


def parse_automaton(text: str) -> MaxAutomaton:
    body = _parse_body(text)
    sections = body["sections"]
    if "accept" not in sections:
        raise ParseError("missing 'accept' line")
    line, formula_text = sections["accept"]
    accept = parse_formula(formula_text, set(body["counters"]), line)
    try:
        return MaxAutomaton(
            states=body["states"],
            counters=body["counters"],
            alphabet=body["alphabet"],
            initial=body["initial"],
            delta=body["delta"],
            labels=body["labels"],
            accept=accept,
            input_alphabet=body["ins"],
            output_alphabet=body["outs"],
        )
    except StructuralError as exc:
        raise ParseError(str(exc)) from exc


def parse_parity(text: str) -> ParityAutomaton:
    body = _parse_body(text)
    sections = body["sections"]
    if "colors" not in sections:
        raise ParseError("parity automaton needs a 'colors' line")
    line, spec = sections["colors"]
    colors = {}
    for item in spec.split():
        q, eq, c = item.partition("=")
        if not eq or not c.isdigit():
            raise ParseError(f"color entries look like 'q=3', got {item!r}", line)
        if q not in body["states"]:
            raise ParseError(f"unknown state {q!r}", line)
        colors[q] = int(c)
    try:
        return ParityAutomaton(body["states"], body["alphabet"], body["initial"], body["delta"], colors)
    except StructuralError as exc:
        raise ParseError(str(exc), line) from exc


def parse_safety(text: str) -> SafetyAutomaton:
    body = _parse_body(text)
    sections = body["sections"]
    if "safe" not in sections:
        raise ParseError("safety automaton needs a 'safe' line")
    line, spec = sections["safe"]
    safe = spec.split()
    for q in safe:
        if q not in body["states"]:
            raise ParseError(f"unknown state {q!r}", line)
    return SafetyAutomaton(body["states"], body["alphabet"], body["initial"], body["delta"], frozenset(safe))


# Writing #####################################################################

def format_letter(a) -> str:
    return "|".join(a) if isinstance(a, tuple) else str(a)


def serialize_automaton(automaton: MaxAutomaton) -> str:
    lines = []
    if automaton.is_product:
        lines.append("alphabet_input: " + " ".join(automaton.input_alphabet))
        lines.append("alphabet_output: " + " ".join(automaton.output_alphabet))
    else:
        lines.append("alphabet: " + " ".join(automaton.alphabet))
    lines.append("counters: " + " ".join(automaton.counters))
    lines.append("states: " + " ".join(str(q) for q in automaton.states))
    lines.append(f"initial: {automaton.initial}")
    lines.append(f"accept: {format_formula(automaton.accept)}")
    for q in automaton.states:
        for a in automaton.alphabet:
            ops = " ; ".join(str(op) for op in automaton.labels[q, a])
            lines.append(f"trans: {q} {format_letter(a)} {automaton.delta[q, a]} : {ops}".rstrip())
    return "\n".join(lines) + "\n"


def load_automaton(path) -> MaxAutomaton:
    with open(path, encoding="utf-8") as fh:
        return parse_automaton(fh.read())
