"""Command-line interface.

Every command prints a human-readable report, or a JSON report with
``--json``.  Exit codes: 0 success, 2 usage, 3 parse error, 4 budget
exhausted, 5 protocol/contract violation, 6 structural error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from pathlib import Path

from . import blocks, equivalence, lasso, reductions, textio
from .classgame import GPlay
from .delay import DelayFunction, outcome_prefix, play
from .errors import BudgetExceeded, ContractError, ParseError, StructuralError
from .transfer import format_signature

EXIT_PARSE, EXIT_BUDGET, EXIT_CONTRACT, EXIT_STRUCTURE = 3, 4, 5, 6


def parse_word(text, letters):
    """Split a word given on the command line.

    Space- or comma-separated tokens are letters; pair letters are written
    ``a|b``.  Without separators every character is a letter, which only
    works when all letters are single characters.
    """
    text = text.strip()
    if not text:
        return []
    product = any(isinstance(a, tuple) for a in letters)
    if any(ch in text for ch in " ,\t"):
        tokens = [t for t in text.replace(",", " ").split() if t]
    else:
        tokens = [text] if product else list(text)
    word = []
    for t in tokens:
        letter = tuple(t.split("|", 1)) if product else t
        if letter not in letters:
            raise StructuralError(f"letter {t!r} not in alphabet")
        word.append(letter)
    return word


def _show(word):
    return " ".join(textio.format_letter(a) for a in word) if word else "ε"


class Report:
    def __init__(self, args, argv):
        self.started = time.perf_counter()
        self.data = {
            "command": list(argv),
            "seed": getattr(args, "seed", None),
            "inputs": {},
            "results": {},
        }

    def add_input(self, path):
        digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
        self.data["inputs"][str(path)] = digest

    def finish(self):
        self.data["wall_clock"] = round(time.perf_counter() - self.started, 6)
        return self.data


def _load(report, path):
    report.add_input(path)
    return textio.load_automaton(path)


def cmd_member(args, report, out):
    A = _load(report, args.automaton)
    u = parse_word(args.u, A.alphabet)
    v = parse_word(args.v, A.alphabet)
    table = lasso.boundedness(A, (u, v))
    verdict = lasso.member(A, (u, v))
    loop = lasso.loop_normalize(A, (u, v))
    report.data["results"] = {
        "accepted": verdict,
        "bounded": table,
        "loop_entry": str(loop.entry),
        "loop_period": loop.period,
    }
    if not args.json:
        out.write(f"{'accepted' if verdict else 'rejected'}\n")
        out.write(f"loop entry {loop.entry}, period {loop.period}\n")
        width = max([7] + [len(c) for c in A.counters])
        out.write(f"{'counter'.ljust(width)}  bounded\n")
        for c in A.counters:
            out.write(f"{c.ljust(width)}  {'yes' if table[c] else 'no'}\n")


def cmd_classes(args, report, out):
    A = _load(report, args.automaton)
    n, k = len(A.states), len(A.counters)
    if args.projected:
        tracker = equivalence.ProjectedTracker(A, args.m)
    else:
        tracker = equivalence.JointTracker(A, args.m)
    result = tracker.explore(args.budget)
    bound = equivalence.word_index_bound(n, k, args.m)
    res = {
        "cap": args.m,
        "projected": args.projected,
        "count": len(result),
        "complete": result.complete,
        "bound": str(bound),
        "bound_formula": f"(n*(m+2)^(2(k^2+k)))^n with n={n}, k={k}, m={args.m}",
    }
    if args.projected:
        joint = tracker.joint.explore(args.budget)
        res["joint_count"] = len(joint)
        if joint.complete:
            res["bound"] = str(2 ** len(joint))
            res["bound_formula"] = f"2^(joint classes) = 2^{len(joint)}"
    rows = equivalence.class_summary(tracker) if result.complete else []
    res["classes"] = [
        {"id": r["id"], "infinite": r["infinite"], "representative": _show(r["representative"])}
        for r in rows
    ]
    report.data["results"] = res
    if not args.json:
        kind = "projected" if args.projected else "joint"
        out.write(f"{kind} classes at cap {args.m}: {len(result)} "
                  f"({'complete' if result.complete else 'INCOMPLETE'})\n")
        out.write(f"index bound: {res['bound']}  [{res['bound_formula']}]\n")
        if rows:
            out.write("id    infinite  representative\n")
            for r in res["classes"]:
                out.write(f"{str(r['id']).ljust(5)} {('yes' if r['infinite'] else 'no').ljust(9)} "
                          f"{r['representative']}\n")
    if not result.complete:
        raise BudgetExceeded(f"enumeration stopped after {len(result)} classes")


def cmd_threshold(args, report, out):
    A = _load(report, args.automaton)
    d = equivalence.compute_threshold(A, args.m, args.budget)
    n, k = len(A.states), len(A.counters)
    bound = equivalence.lookahead_bound(n, k)
    try:
        value = str(bound.value(args.max_bits))
    except OverflowError:
        value = None
    report.data["results"] = {
        "cap": args.m,
        "threshold": d,
        "initial_lookahead": {"n": n, "k": k, "tower": bound.tower, "value": value},
    }
    if not args.json:
        out.write(f"threshold d({args.m}) = {d}\n")
        out.write(f"sufficient initial lookahead (n={n}, k={k}): {bound.tower}\n")
        if value is not None:
            out.write(f"  = {value}\n")


def cmd_simulate(args, report, out):
    if args.game != "block":
        raise StructuralError(f"unknown game {args.game!r}")
    f = DelayFunction.parse(args.f)
    sigma_i = blocks.make_input_strategy(args.i, args.seed)
    sigma_o = blocks.make_output_strategy(args.o, args.seed)
    record = play(f, sigma_i, sigma_o, args.rounds, blocks.INPUT, blocks.OUTPUT)
    stats = blocks.block_statistics(outcome_prefix(record))
    curve = record.lookaheads()
    report.data["results"] = {
        "game": args.game,
        "f": str(f),
        "class": f.classify(),
        "strategies": {"input": args.i, "output": args.o},
        "rounds": record.rounds,
        "lookahead_curve": curve,
        "block_statistics": stats.to_dict(),
    }
    if args.transcript:
        report.data["results"]["transcript"] = record.to_dict()
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["round", "lookahead"])
            writer.writerows(enumerate(curve))
    if not args.json:
        alpha = "".join(record.alpha)
        beta = "".join(record.beta)
        out.write(f"f = {f} ({f.classify()}), {record.rounds} rounds, seed {args.seed}\n")
        if args.transcript:
            out.write(f"input : {alpha}\noutput: {beta}\n")
        out.write(f"final lookahead: {curve[-1]}\n")
        out.write(f"input blocks : {len(stats.input_blocks)} (max {stats.max_input()})\n")
        out.write(f"output blocks: {len(stats.output_blocks)} (max {stats.max_output()})\n")


def cmd_class_game(args, report, out):
    A = _load(report, args.automaton)
    report.add_input(args.script)
    moves = json.loads(Path(args.script).read_text())
    game = GPlay(A, args.budget)
    for move in moves:
        player = move.get("player", "").upper()
        if player == "I":
            r = int(move["r"])
            if "class" in move:
                tracker = game.projected(r)
                cls = tracker.explore().states[int(move["class"])]
            else:
                cls = parse_word(move["word"], A.input_alphabet)
            game.submit_i_move(r, cls)
        elif player == "O":
            if "class" in move:
                r = game.rs[len(game.o_moves)]
                joint = game.projected(r).joint
                result = joint.explore(args.budget)
                if not result.complete:
                    raise BudgetExceeded("joint classes exceed the budget")
                cls = result.states[int(move["class"])]
            else:
                cls = parse_word(move["word"], A.alphabet)
            game.submit_o_move(cls)
        else:
            raise ContractError(f"move without a valid player: {move!r}")
    res = game.to_dict()
    if args.horizon:
        res["outcome_material"] = _show(game.outcome_material(args.horizon))
    report.data["results"] = res
    if not args.json:
        out.write(f"precisions: {res['rs']}\n")
        out.write(f"input classes: {res['i_moves']}\n")
        out.write(f"completed rounds: {res['o_moves']}, next to move: {res['turn']}\n")
        out.write(f"weakly increasing: {res['rate']['weakly_increasing']}\n")
        if args.horizon:
            out.write(f"outcome material: {res['outcome_material']}\n")


def cmd_reduce(args, report, out):
    report.add_input(args.input)
    text = Path(args.input).read_text()
    if args.kind == "parity":
        result = reductions.parity_to_max(textio.parse_parity(text))
    elif args.kind == "safety":
        result = reductions.safety_to_max(textio.parse_safety(text))
    else:
        result = reductions.diagonal_lift(textio.parse_automaton(text))
    serialized = textio.serialize_automaton(result)
    if args.output:
        Path(args.output).write_text(serialized)
    report.data["results"] = {"kind": args.kind, "automaton": serialized}
    if not args.json:
        out.write(serialized)


def cmd_inspect(args, report, out):
    A = _load(report, args.automaton)
    word = parse_word(args.word, A.alphabet)
    sig = equivalence.word_signature(A, word, args.m)
    rows = {}
    for i, q in enumerate(A.states):
        rows[str(q)] = {
            "target": str(A.states[sig.profile[i]]),
            "signature": format_signature(sig.per_state[i], A.counters),
        }
    report.data["results"] = {"word": _show(word), "cap": args.m, "states": rows}
    if not args.json:
        for q, row in rows.items():
            out.write(f"from {q} -> {row['target']}\n{row['signature']}\n\n")


def build_parser():
    p = argparse.ArgumentParser(prog="maxdelay", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, budget=False):
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        if budget:
            sp.add_argument("--budget", type=int, default=None,
                            help="node budget (default: $MAXDELAY_BUDGET or 10^6)")

    sp = sub.add_parser("member", help="membership of u v^omega")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--u", default="")
    sp.add_argument("--v", required=True)
    common(sp)
    sp.set_defaults(func=cmd_member)

    sp = sub.add_parser("classes", help="enumerate cap-m classes")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--projected", action="store_true", help="classes of the projected relation")
    common(sp, budget=True)
    sp.set_defaults(func=cmd_classes)

    sp = sub.add_parser("threshold", help="length threshold for infinite projected classes")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--max-bits", type=int, default=4096, help="largest tower value printed")
    common(sp, budget=True)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("simulate", help="play a delay game for a finite horizon")
    sp.add_argument("--game", default="block")
    sp.add_argument("--f", required=True, help='delay function, e.g. "6,1*" or "2*"')
    sp.add_argument("--rounds", type=int, default=100)
    sp.add_argument("--o", default="o-longest-block", help="one of " + ", ".join(blocks.OUTPUT_STRATEGIES))
    sp.add_argument("--i", default="i-random", help="one of " + ", ".join(blocks.INPUT_STRATEGIES))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--transcript", action="store_true")
    sp.add_argument("--csv", help="write the lookahead curve as CSV")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("class-game", help="replay scripted moves of the class game")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--script", required=True, help="JSON list of moves")
    sp.add_argument("--horizon", type=int, default=0, help="emit outcome material for this many rounds")
    common(sp, budget=True)
    sp.set_defaults(func=cmd_class_game)

    sp = sub.add_parser("reduce", help="translate parity/safety automata or lift to the diagonal")
    sp.add_argument("--kind", choices=["parity", "safety", "diagonal"], required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--output")
    common(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("inspect", help="print the signature tables of a word")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--word", default="")
    sp.add_argument("--m", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_inspect)
    return p


def main(argv=None, out=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    report = Report(args, argv)
    try:
        args.func(args, report, out)
        code = 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        code = EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        code = EXIT_BUDGET
    except ContractError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        code = EXIT_CONTRACT
    except (StructuralError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_STRUCTURE
    if args.json and code == 0:
        json.dump(report.finish(), out, indent=2)
        out.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
