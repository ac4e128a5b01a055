"""Command-line entry point.

Exit codes: 0 success or true, 1 false verdict, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .automata import (
    Dfa, accepts, compile_formula, cofinal_k, fixture_dfas, load_dfa,
)
from .caps import get_caps, set_caps
from .duality import graph_report
from .ef import ef_witness, equiv_k, render_strategy, Mismatch
from .errors import InputError, ResourceError
from .evaluate import check_axioms, evaluate
from .logic import is_sentence, parse
from .monoid import (
    build_sk, membership, omega_eval, parse_term, refinement_report, render_term,
)
from .words import Alphabet, Word, mso

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _word(args, text: Optional[str], flag: str) -> Word:
    if text is None:
        raise InputError(f"{flag} is required")
    return Word.parse(_alphabet(args), text)


def _alphabet(args) -> Alphabet:
    return Alphabet.of(args.alphabet)


def _formula(args):
    if args.formula is None:
        raise InputError("--formula is required")
    return parse(args.formula, _alphabet(args))


def _dfa(args) -> Dfa:
    if args.dfa is None:
        if getattr(args, "formula", None) is not None:
            phi = _formula(args)
            if not is_sentence(phi):
                raise InputError("--formula must be a sentence here")
            return compile_formula(phi, _alphabet(args))
        raise InputError("--dfa is required")
    if args.dfa.startswith("fixture:"):
        name = args.dfa[len("fixture:"):]
        fixtures = fixture_dfas()
        if name not in fixtures:
            raise InputError(f"unknown fixture {name!r}; choose from {', '.join(fixtures)}")
        return fixtures[name]
    return load_dfa(args.dfa)


def _verdict(args, value: bool, extra: Optional[dict] = None) -> int:
    if args.format == "json":
        print(json.dumps({"result": value, **(extra or {})}))
    else:
        print("true" if value else "false")
    return EXIT_OK if value else EXIT_FALSE


def _write(path: Optional[str], text: str):
    if path:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc}") from None


# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    w = _word(args, args.word, "--word")
    phi = _formula(args)
    return _verdict(args, evaluate(mso(w), phi))


def cmd_compile(args) -> int:
    phi = _formula(args)
    if not is_sentence(phi):
        raise InputError("compile expects a sentence")
    A = compile_formula(phi, _alphabet(args), minimal=not args.no_minimize)
    _write(args.out, A.dumps())
    if args.format == "json":
        print(A.dumps())
    else:
        print(f"states: {A.states}")
        print(f"start: {A.start}")
        print(f"accepting: {A.accepting_states()}")
        for q in range(A.states):
            moves = " ".join(f"{s}->{int(A.delta[q, i])}" for i, s in enumerate(A.base.symbols))
            print(f"  {q}: {moves}")
    return EXIT_OK


def cmd_accepts(args) -> int:
    A = _dfa(args)
    w = Word.parse(A.base, _required(args.word, "--word"))
    return _verdict(args, accepts(A, w))


def cmd_equiv(args) -> int:
    w1, w2 = _word(args, args.w1, "--w1"), _word(args, args.w2, "--w2")
    return _verdict(args, equiv_k(w1, w2, args.k))


def _strategy_json(node, S1, S2):
    if node is None:
        return None
    if isinstance(node, Mismatch):
        return {"mismatch": node.formula, "holds_in": node.true_on}
    S, O = (S1, S2) if node.side == 1 else (S2, S1)
    return {
        "spoiler": {"side": node.side, "element": S.element_str(node.element)},
        "replies": [{"element": O.element_str(d), "then": _strategy_json(sub, S1, S2)}
                    for d, sub in node.replies],
    }


def cmd_witness(args) -> int:
    w1, w2 = _word(args, args.w1, "--w1"), _word(args, args.w2, "--w2")
    strat = ef_witness(w1, w2, args.k)
    S1, S2 = mso(w1), mso(w2)
    if args.format == "json":
        print(json.dumps({"strategy": _strategy_json(strat, S1, S2)}))
    else:
        print(render_strategy(strat, S1, S2, (f'mso("{w1}")', f'mso("{w2}")')))
    return EXIT_OK if strat is not None else EXIT_FALSE


def cmd_monoid(args) -> int:
    M = build_sk(_alphabet(args), args.k)
    _write(args.out, M.dumps())
    if args.format == "json":
        print(M.dumps())
    else:
        reps = [str(w) or "ε" for w in M.reps]
        print(f"S_{args.k} over {_alphabet(args)}: {M.size} elements, identity {M.identity}")
        for i, r in enumerate(reps):
            print(f"  {i}: {r}")
        width = len(str(M.size - 1))
        for row in M.table:
            print("  " + " ".join(str(x).rjust(width) for x in row))
    return EXIT_OK


def cmd_omega(args) -> int:
    alphabet = _alphabet(args)
    t = parse_term(_required(args.term, "--term"), alphabet)
    levels = [args.k] if args.k is not None else range(get_caps().sk_max_k(len(alphabet)) + 1)
    rows = []
    for k in levels:
        e = omega_eval(t, alphabet, k)
        rows.append({"k": k, "element": e, "representative": str(build_sk(alphabet, k).reps[e])})
    if args.format == "json":
        print(json.dumps({"term": render_term(t), "levels": rows}))
    else:
        for r in rows:
            print(f"k={r['k']}: element {r['element']} (representative \"{r['representative']}\")")
    return EXIT_OK


def _required(value, flag):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def cmd_member(args) -> int:
    A = _dfa(args)
    t = parse_term(_required(args.term, "--term"), A.base)
    m = membership(A, t)
    if args.format == "json":
        print(json.dumps({"result": m.result, "via": m.via, "element": m.element,
                          "representative": str(m.representative)}))
    else:
        print("true" if m.result else "false")
    return EXIT_OK if m.result else EXIT_FALSE


def cmd_cofinal_k(args) -> int:
    A = _dfa(args)
    if args.no_check:
        k = cofinal_k(A)
        print(json.dumps({"k": k}) if args.format == "json" else k)
        return EXIT_OK
    r = refinement_report(A)
    if args.format == "json":
        print(json.dumps({"k": r.k, "level": r.level, "downgraded": r.downgraded,
                          "pairs": r.pairs, "violations": [list(v) for v in r.violations],
                          "passed": r.passed}))
    else:
        print(r.k)
        print(r.render())
    return EXIT_OK if r.passed else EXIT_FALSE


def cmd_duality(args) -> int:
    M = build_sk(_alphabet(args), args.k)
    r = graph_report(M)
    if args.format == "json":
        print(json.dumps({"points": r.points, "functional": r.functional, "graph": r.passed}))
    else:
        print(r.render(args.k))
    return EXIT_OK if r.passed else EXIT_FALSE


def cmd_axioms(args) -> int:
    w = _word(args, args.word, "--word")
    corpus = [parse(f, _alphabet(args)) for f in (args.formula_list or [])]
    report = check_axioms(w, corpus)
    if args.format == "json":
        print(json.dumps({"passed": report.passed,
                          "results": [{"axiom": n, "holds": ok} for n, ok in report.results]}))
    else:
        print(report.render())
    return EXIT_OK if report.passed else EXIT_FALSE


def cmd_selftest(args) -> int:
    from .selftest import run

    results = run(seed=args.seed)
    if args.format == "json":
        print(json.dumps([{"criterion": r.number, "name": r.name, "passed": r.passed,
                           "detail": r.detail} for r in results]))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FALSE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", default="ab", help="alphabet, one character per symbol (default: ab)")
    common.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default: 0)")
    common.add_argument("--max-positions", type=int, metavar="N",
                        help="override the position caps for evaluation and EF types")

    parser = _Parser(prog="msokit", description="MSO on finite words: evaluation, automata, "
                     "EF types, type monoids and their duals.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(fn=fn)
        return p

    p = add("eval", cmd_eval, "evaluate a formula in mso(word)")
    p.add_argument("--word")
    p.add_argument("--formula")

    p = add("compile", cmd_compile, "compile a sentence to a minimal DFA")
    p.add_argument("--formula")
    p.add_argument("--out", help="write the DFA as JSON to this file")
    p.add_argument("--no-minimize", action="store_true", help="skip the final minimisation")

    p = add("accepts", cmd_accepts, "run a DFA (file, fixture:NAME, or --formula) on a word")
    p.add_argument("--dfa")
    p.add_argument("--formula")
    p.add_argument("--word")

    p = add("equiv", cmd_equiv, "decide w1 ≈_k w2")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--w1")
    p.add_argument("--w2")

    p = add("witness", cmd_witness, "print a winning Spoiler strategy, if any")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--w1")
    p.add_argument("--w2")

    p = add("monoid", cmd_monoid, "build the type monoid S_k")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--out", help="write the monoid as JSON to this file")

    p = add("omega", cmd_omega, "evaluate an omega-term in S_k (all feasible k by default)")
    p.add_argument("--k", type=int)
    p.add_argument("--term")

    p = add("member", cmd_member, "is the point named by an omega-term in the closure of L(dfa)?")
    p.add_argument("--dfa")
    p.add_argument("--formula")
    p.add_argument("--term")

    p = add("cofinal-k", cmd_cofinal_k, "depth k whose ≈_k refines the syntactic congruence")
    p.add_argument("--dfa")
    p.add_argument("--formula")
    p.add_argument("--no-check", action="store_true", help="skip the refinement check")

    p = add("duality", cmd_duality, "check that R_+ of the dual of S_k is the graph of ⊗_k")
    p.add_argument("--k", type=int, default=1)

    p = add("axioms", cmd_axioms, "check the axiom fragment in mso(word)")
    p.add_argument("--word")
    p.add_argument("--formula", dest="formula_list", action="append",
                   help="comprehension formula with free atom variable x (repeatable)")

    add("selftest", cmd_selftest, "run the acceptance suite")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    previous = None
    try:
        if args.max_positions is not None:
            n = args.max_positions
            if n < 0:
                raise InputError("--max-positions must be non-negative")
            previous = set_caps(get_caps().replace(
                positions=n, eval_positions_deep=n, union_iso_positions=n,
                ef_positions_k1=n, ef_positions_k2=n, ef_positions_k3=n))
        return args.fn(args)
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if previous is not None:
            set_caps(previous)


if __name__ == "__main__":
    sys.exit(main())
