"""Command-line tool: translate, eval, check-ip, equiv, fuzz, exhaustive, gen.

Exit codes: 0 success, 1 internal error, 2 parse error, 3 usage or arity
error, 4 invalid model, 5 a check ran and reported a failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import harness, structures, transpiler
from .semantics import EvaluationError, UnboundVariable, eval_fo, eval_path, eval_state
from .structures import FiniteStructure, ModelError
from .syntax import fo, pdl
from .syntax.names import InvalidName, Signature, fresh_names
from .syntax.parser import ParseError, parse_any, parse_fo, to_text

EXIT_OK, EXIT_INTERNAL, EXIT_PARSE, EXIT_USAGE, EXIT_MODEL, EXIT_FAIL = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _formula_text(args, attr="formula"):
    text = getattr(args, attr, None)
    path = getattr(args, "file", None)
    if text is not None and path is not None:
        raise UsageError("give the formula either inline or with --file, not both")
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return fh.read().strip()
    if text is None:
        raise UsageError("no formula given")
    return text


def _parse_assign(text):
    out = {}
    if not text:
        return out
    for part in text.split(","):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"bad assignment {part!r}, expected name=index")
        try:
            out[key] = int(val)
        except ValueError:
            raise UsageError(f"bad index in assignment {part!r}") from None
    return out


def _signature(text):
    if not text:
        return None
    preds, rels = set(), set()
    for name in text.split(","):
        name = name.strip()
        (preds if name[:1].isupper() else rels).add(name)
    return Signature(frozenset(preds), frozenset(rels))


# -- commands ------------------------------------------------------------

def cmd_translate(args, out):
    f = parse_fo(_formula_text(args))
    simplify = not args.no_simplify
    if args.to == "fo3":
        print(to_text(transpiler.fo_to_fo3(f, simplify=simplify)), file=out)
        return EXIT_OK
    free = fo.free_vars(f)
    if len(free) == 0:
        # a sentence becomes a state formula that holds everywhere or nowhere
        (v,) = fresh_names(fo.all_vars(f))
        g = fo.And(f, fo.Eq(v, v))
        print(to_text(transpiler.fo_to_state(g, simplify=simplify)), file=out)
    elif len(free) == 1:
        print(to_text(transpiler.fo_to_state(f, simplify=simplify)), file=out)
    elif len(free) == 2:
        order = tuple(args.order.split(",")) if args.order else None
        print(to_text(transpiler.fo_to_path(f, order=order, simplify=simplify)), file=out)
    else:
        p = transpiler.fo_to_pbc(fo.desugar(f), simplify=simplify)
        print(to_text(p), file=out)
    return EXIT_OK


def _load(args):
    return structures.load_model(args.model, allow_non_ip=args.allow_non_ip)


def cmd_eval(args, out):
    sort, t = parse_any(_formula_text(args))
    m = _load(args)
    if sort == "fo":
        nu = _parse_assign(args.assign)
        missing = sorted(fo.free_vars(t) - set(nu))
        if missing:
            raise UnboundVariable(missing[0])
        for k, v in nu.items():
            if not 0 <= v < m.size:
                raise UsageError(f"assignment {k}={v} is outside the domain 0..{m.size - 1}")
        print("true" if eval_fo(m, t, nu) else "false", file=out)
    elif sort == "state":
        print(" ".join(str(a) for a in sorted(eval_state(m, t))), file=out)
    else:
        pairs = sorted(eval_path(m, t).pairs)
        print(" ".join(f"({a},{b})" for a, b in pairs), file=out)
    return EXIT_OK


def cmd_check_ip(args, out):
    # parse without the IP check so that bad relations can be reported
    m = structures.load_model(args.model, allow_non_ip=True)
    names = sorted(m.relation_val)
    if args.relation is not None:
        if args.relation not in m.relation_val:
            raise UsageError(f"unknown relation {args.relation!r}")
        names = [args.relation]
    ok = True
    for name in names:
        cx = structures.check_interval_preserving(m.relation_val[name])
        if cx is None:
            print(f"{name}: ok", file=out)
        else:
            ok = False
            print(f"{name}: counterexample {cx}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def _finish(name, verdict, args, out, cfg=None):
    print(harness.report_text(name, verdict), file=out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(harness.summary_json(name, verdict, cfg) + "\n")
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_equiv(args, out):
    f = parse_fo(args.left)
    g = parse_fo(args.right)
    if args.model:
        from .semantics import fo_equiv_on

        nu = fo_equiv_on(_load(args), f, g)
        if nu is None:
            print("equivalent", file=out)
            return EXIT_OK
        print("differ at " + (", ".join(f"{k}={v}" for k, v in nu.items()) or "(empty)"), file=out)
        return EXIT_FAIL
    _check_max_size(args.max_size)
    v = harness.exhaustive_equiv(f, g, max_n=args.max_size, signature=_signature(args.signature))
    return _finish("equiv", v, args, out)


def _check_max_size(n):
    if not 1 <= n <= harness.EXHAUSTIVE_MAX_N:
        raise UsageError(f"--max-size must lie in 1..{harness.EXHAUSTIVE_MAX_N}")


def cmd_exhaustive(args, out):
    f = parse_fo(_formula_text(args))
    _check_max_size(args.max_size)
    v = harness.exhaustive_translation(f, max_n=args.max_size, signature=_signature(args.signature),
                                       simplify=not args.no_simplify)
    return _finish("exhaustive", v, args, out)


def _fuzz_config(args):
    common = dict(seed=args.seed, iterations=args.iters, max_structure_size=args.max_size,
                  max_formula_depth=args.depth, jobs=args.jobs, stop_on_fail=not args.all)
    try:
        if args.negative_control:
            return harness.negative_control_config(**common)
        return harness.FuzzConfig(allow_non_ip=args.allow_non_ip, **common)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_fuzz(args, out):
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    cfg = _fuzz_config(args)
    if args.replay is not None:
        if not 0 <= args.replay < cfg.iterations:
            raise UsageError("--replay index is outside the run")
        case, w = harness.replay(cfg, args.replay)
        print(f"case {case.index}: {to_text(case.formula)}", file=out)
        print(f"structure: {case.structure.dumps()}", file=out)
        if w is None:
            print("agrees", file=out)
            return EXIT_OK
        if args.shrink:
            w = harness.shrink(w)
        print(w.describe(), file=out)
        return EXIT_FAIL
    return _finish("fuzz", harness.fuzz_equiv(cfg), args, out, cfg)


def cmd_gen(args, out):
    n = args.size
    if n < 0:
        raise UsageError("--size must be non-negative")
    rng = np.random.default_rng(args.seed)
    if args.kind == "until":
        preds = {"P": {a for a in range(n) if rng.random() < 0.6},
                 "Q": {a for a in range(n) if rng.random() < 0.4}}
        rel = structures.gen_until(FiniteStructure(n, preds), "P", "Q")
    elif args.kind == "monotone":
        preds = {}
        rel = structures.gen_monotone(n, rng, args.direction, args.density)
    elif args.kind == "succ":
        preds = {}
        rel = structures.gen_succ(n, args.k)
    elif args.kind == "random":
        preds = {"P": {a for a in range(n) if rng.random() < 0.5}}
        rel = structures.gen_random_ip(n, rng)
    else:
        preds = {}
        rel = structures.non_ip_relation(n)
    m = FiniteStructure(n, preds, {"a": rel}, allow_non_ip=args.kind == "non-ip")
    if args.out:
        structures.save_model(m, args.out)
    else:
        print(m.dumps(), file=out)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def build_parser():
    p = _Parser(prog="fo3pdl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("translate", help="FO to PDL or to three-variable FO")
    t.add_argument("formula", nargs="?")
    t.add_argument("--file")
    t.add_argument("--to", choices=("pdl", "fo3"), default="pdl")
    t.add_argument("--order", help="source,target variables for a path result")
    t.add_argument("--no-simplify", action="store_true")
    t.set_defaults(run=cmd_translate)

    e = sub.add_parser("eval", help="evaluate a formula on a model file")
    e.add_argument("formula", nargs="?")
    e.add_argument("--file")
    e.add_argument("--model", required=True)
    e.add_argument("--assign", default="")
    e.add_argument("--allow-non-ip", action="store_true")
    e.set_defaults(run=cmd_eval)

    c = sub.add_parser("check-ip", help="check relations for interval preservation")
    c.add_argument("--model", required=True)
    c.add_argument("--relation")
    c.set_defaults(run=cmd_check_ip)

    q = sub.add_parser("equiv", help="compare two FO formulas")
    q.add_argument("left")
    q.add_argument("right")
    q.add_argument("--model")
    q.add_argument("--allow-non-ip", action="store_true")
    q.add_argument("--max-size", type=int, default=3)
    q.add_argument("--signature", help="comma-separated names, e.g. P,Q,a")
    q.add_argument("--out")
    q.set_defaults(run=cmd_equiv)

    f = sub.add_parser("fuzz", help="random differential testing of the translations")
    f.add_argument("--iters", type=int, default=1000)
    f.add_argument("--seed", type=int, default=42)
    f.add_argument("--max-size", type=int, default=8)
    f.add_argument("--depth", type=int, default=3)
    f.add_argument("--jobs", type=int, default=1)
    f.add_argument("--allow-non-ip", action="store_true")
    f.add_argument("--negative-control", action="store_true")
    f.add_argument("--all", action="store_true", help="keep going after the first failure")
    f.add_argument("--replay", type=int)
    f.add_argument("--shrink", action="store_true")
    f.add_argument("--out")
    f.set_defaults(run=cmd_fuzz)

    x = sub.add_parser("exhaustive", help="check a formula against its translations")
    x.add_argument("--formula")
    x.add_argument("--file")
    x.add_argument("--max-size", type=int, default=3)
    x.add_argument("--signature")
    x.add_argument("--no-simplify", action="store_true")
    x.add_argument("--out")
    x.set_defaults(run=cmd_exhaustive)

    g = sub.add_parser("gen", help="write a generated model file")
    g.add_argument("--kind", choices=("until", "monotone", "succ", "random", "non-ip"),
                   required=True)
    g.add_argument("--size", type=int, required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--direction", choices=("increasing", "decreasing"), default="increasing")
    g.add_argument("--density", type=float, default=1.0)
    g.add_argument("--out")
    g.set_defaults(run=cmd_gen)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.run(args, out)
    except ParseError as e:
        print(f"parse error: {e}", file=err)
        if e.text:
            print(f"  {e.text}\n  {' ' * e.pos}^", file=err)
        return EXIT_PARSE
    except (UsageError, InvalidName, UnboundVariable, transpiler.TranslationError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except (ModelError, OSError) as e:
        print(f"model error: {e}", file=err)
        return EXIT_MODEL
    except EvaluationError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return e.code if isinstance(e.code, int) else EXIT_OK
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=err)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
