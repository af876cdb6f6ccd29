"""Command-line front end.

Every command takes flags only, prints a text result by default and a JSON
object with ``--json``.  Exit codes: 0 on success, 1 on malformed input,
2 on a well-formed query that has no answer (incomparable elements,
mismatched dimensions or block sizes).
"""

from __future__ import annotations

import argparse
import io
import json
import random
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, Sequence

from . import affcosetmat as acm
from . import affsymgroup as asg
from . import cosetmat as cm
from . import oracle
from . import qpoly
from . import quiverorbits as qo
from . import symgroup as sg

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_UNDEFINED = 2

UNDEFINED_ERRORS = (
    sg.NotComparableError, sg.DegreeMismatchError,
    asg.NotComparableError, asg.DegreeMismatchError,
    cm.NotComparableError, cm.SpecMismatchError,
    qo.NotComparableError, qo.DimensionMismatchError, qo.FundamentalDomainError,
)
MALFORMED_ERRORS = (ValueError, IndexError, KeyError, TypeError, json.JSONDecodeError)


class UsageError(Exception):
    """Raised instead of argparse's own exit so malformed flags map to exit 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# values <-> text/JSON

def _perm(text: str, affine: bool):
    return asg.parse(text) if affine else sg.parse(text)


def _perm_text(w) -> str:
    return asg.to_text(w) if isinstance(w, asg.AffPerm) else sg.to_text(w, compact=False)


def _perm_json(w) -> list:
    return list(w.window) if isinstance(w, asg.AffPerm) else list(w.oneline)


def _matrix(text: str, affine: bool, nprime: Optional[int]):
    text = text.strip()
    if text.startswith("{") or text.startswith("[["):
        return acm.from_json(text) if affine else cm.from_json(text)
    if affine:
        if nprime is None:
            raise ValueError("a periodic matrix in grid form needs --nprime")
        return acm.from_text(text, nprime)
    return cm.from_text(text)


def _matrix_text(m) -> str:
    return acm.to_text(m) if isinstance(m, acm.PeriodicMatrix) else cm.to_text(m)


def _matrix_json(m) -> dict:
    return acm.to_json(m) if isinstance(m, acm.PeriodicMatrix) else cm.to_json(m)


def _multiseg(text: str, mod: Optional[int]):
    if mod is not None and "mod" not in text:
        text = f"{text} mod {mod}"
    return qo.parse(text)


def _ints(text: str) -> tuple:
    return qo.parse_weight(text)


def _poly_out(p) -> tuple[str, object]:
    return qpoly.to_text(p), qpoly.to_json(p)


# commands; each returns (text, json-able result)

def cmd_kl(args):
    affine = args.affine or args.command == "akl"
    if args.my is not None or args.mw is not None:
        if args.my is None or args.mw is None:
            raise ValueError("give both --my and --mw")
        a = _matrix(args.my, affine, args.nprime)
        b = _matrix(args.mw, affine, args.nprime)
        if affine:
            p = acm.kl_inverse_mat_aff(a, b) if args.inverse else acm.kl_poly_mat_aff(a, b)
        else:
            p = cm.kl_inverse_mat(a, b) if args.inverse else cm.kl_poly_mat(a, b)
        return _poly_out(p)
    if args.y is None or args.w is None:
        raise ValueError("give --y and --w (or --my and --mw)")
    y, w = _perm(args.y, affine), _perm(args.w, affine)
    if affine:
        p = asg.kl_inverse(y, w) if args.inverse else asg.kl_poly(y, w, args.policy)
    else:
        p = sg.kl_inverse(y, w) if args.inverse else sg.kl_poly(y, w, args.policy)
    return _poly_out(p)


def cmd_bruhat(args):
    if args.my is not None or args.mw is not None:
        if args.my is None or args.mw is None:
            raise ValueError("give both --my and --mw")
        a = _matrix(args.my, args.affine, args.nprime)
        b = _matrix(args.mw, args.affine, args.nprime)
        ok = acm.leq_aff(a, b) if args.affine else cm.leq(a, b)
    else:
        if args.y is None or args.w is None:
            raise ValueError("give --y and --w (or --my and --mw)")
        y, w = _perm(args.y, args.affine), _perm(args.w, args.affine)
        ok = asg.bruhat_leq(y, w) if args.affine else sg.bruhat_leq(y, w)
    return ("true" if ok else "false"), ok


def cmd_len(args):
    if args.matrix is not None:
        m = _matrix(args.matrix, args.affine, args.nprime)
        n = acm.length_aff(m) if args.affine else cm.length(m)
    else:
        if args.w is None:
            raise ValueError("give --w or --matrix")
        w = _perm(args.w, args.affine)
        n = asg.length(w) if args.affine else sg.length(w)
    return str(n), n


def cmd_wm(args):
    m = _matrix(args.matrix, args.affine, args.nprime)
    if args.affine:
        w = acm.longest_rep_aff(m, args.row_start, args.col_start)
    else:
        w = cm.longest_rep(m)
    return _perm_text(w), _perm_json(w)


def cmd_psi(args):
    w = _perm(args.w, args.affine)
    rows, cols = _ints(args.rows), _ints(args.cols)
    if args.affine:
        m = acm.psi_aff(w, rows, cols, args.row_start, args.col_start)
    else:
        m = cm.psi(w, cm.BlockSpec(rows), cm.BlockSpec(cols))
    return _matrix_text(m), _matrix_json(m)


def cmd_cancel(args):
    if args.random:
        if args.d is None:
            raise ValueError("--random needs --d")
        y, w, i = oracle.random_cancellable(args.d, affine=args.affine, seed=args.seed)
    elif args.my is not None or args.mw is not None:
        return _cancel_matrix(args)
    else:
        if args.y is None or args.w is None or args.i is None:
            raise ValueError("give --y, --w and --i (or --random --d)")
        y, w, i = _perm(args.y, args.affine), _perm(args.w, args.affine), args.i
    mod = asg if args.affine else sg
    if not mod.cancellable(y, w, i):
        raise mod.NotComparableError(f"index {i} is not cancellable for ({_perm_text(y)}, {_perm_text(w)})")
    y2, w2 = mod.cancel(y, i), mod.cancel(w, i)
    text = f"{_perm_text(y2)} | {_perm_text(w2)}"
    result = {"y": _perm_json(y2), "w": _perm_json(w2)}
    if args.random:
        text = f"y={_perm_text(y)} w={_perm_text(w)} i={i} -> {text}"
        result.update(source={"y": _perm_json(y), "w": _perm_json(w), "i": i})
    return text, result


def _cancel_matrix(args):
    if args.my is None or args.mw is None or args.entry is None:
        raise ValueError("give --my, --mw and --entry i,j")
    i, j = _ints(args.entry)
    a = _matrix(args.my, args.affine, args.nprime)
    b = _matrix(args.mw, args.affine, args.nprime)
    if args.affine:
        ok = acm.cancellable_entry_aff(a, b, i, j)
        cancel = acm.cancel_entry_aff
    else:
        ok = cm.cancellable_entry(a, b, i, j)
        cancel = cm.cancel_entry
    if not ok:
        raise cm.NotComparableError(f"entry ({i},{j}) is not cancellable")
    a2, b2 = cancel(a, i, j), cancel(b, i, j)
    text = _matrix_text(a2) + "\n\n" + _matrix_text(b2)
    return text, {"m": _matrix_json(a2), "m2": _matrix_json(b2)}


def _pair(args):
    return _multiseg(args.m, args.mod), _multiseg(args.m2, args.mod)


def cmd_ic(args):
    m, m2 = _pair(args)
    return _poly_out(qo.ic_poly(m, m2, method=args.method))


def cmd_icinv(args):
    m, m2 = _pair(args)
    method = {"full": "segments"}.get(args.method, args.method)
    return _poly_out(qo.ic_inverse(m, m2, method=method))


def cmd_reduce(args):
    m, m2 = _pair(args)
    a, b = qo.reduce(m, m2)
    text = _matrix_text(a) + "\n\n" + _matrix_text(b)
    return text, {"m": _matrix_json(a), "m2": _matrix_json(b)}


def cmd_orbitdim(args):
    n = qo.orbit_dim(_multiseg(args.m, args.mod))
    return str(n), n


def cmd_maxelts(args):
    elts = sorted(qo.maximal_elements(_multiseg(args.m, args.mod)), key=qo.to_text)
    return "\n".join(qo.to_text(e) for e in elts), [qo.to_json(e) for e in elts]


def cmd_decomp(args):
    lam, mu = _ints(args.lam), _ints(args.mu)
    k = args.k if args.k is not None else max(len(lam), len(mu))
    v = qo.decomp_multiplicity(lam, mu, args.n, k)
    return str(v), v


def cmd_selftest(args):
    results = oracle.selftest()
    rng = random.Random(args.seed)
    bad = 0
    samples = 10
    for _ in range(samples):
        d = rng.randint(3, 6)
        y, w, i = oracle.random_cancellable(d, affine=False, seed=rng.randrange(2**31))
        if sg.kl_poly(y, w) != sg.kl_poly(sg.cancel(y, i), sg.cancel(w, i)):
            bad += 1
    results.append(("cancellation", bad == 0, f"{samples} random triples, {bad} mismatches"))
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results]
    passed = sum(ok for _, ok, _ in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    payload = {"passed": passed, "total": len(results),
               "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]}
    if passed != len(results):
        raise _SelftestFailed("\n".join(lines), payload)
    return "\n".join(lines), payload


class _SelftestFailed(Exception):
    def __init__(self, text, payload):
        super().__init__(text)
        self.text, self.payload = text, payload


COMMANDS: dict[str, Callable] = {
    "kl": cmd_kl, "akl": cmd_kl, "bruhat": cmd_bruhat, "len": cmd_len,
    "wm": cmd_wm, "psi": cmd_psi, "cancel": cmd_cancel, "ic": cmd_ic,
    "icinv": cmd_icinv, "reduce": cmd_reduce, "orbitdim": cmd_orbitdim,
    "maxelts": cmd_maxelts, "decomp": cmd_decomp, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a JSON object instead of text")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized commands")

    parser = _Parser(prog="klquiver", parents=[common],
                     description="Kazhdan-Lusztig polynomials for (affine) symmetric "
                                 "groups and quiver orbit closures.")
    parser.add_argument("--batch", metavar="FILE",
                        help="run one query per line of FILE ('-' for stdin)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for --batch")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def perms(p, affine_flag=True):
        p.add_argument("--y", help="lower element: one-line, window or 'd=3: tau s1 ...'")
        p.add_argument("--w", help="upper element")
        if affine_flag:
            p.add_argument("--affine", action="store_true")

    def matrices(p):
        p.add_argument("--my", help="lower coset matrix (rows split by ';', or JSON)")
        p.add_argument("--mw", help="upper coset matrix")
        p.add_argument("--nprime", type=int, help="column period of a periodic grid")

    def multisegs(p):
        p.add_argument("--m", required=True, help="multisegment, e.g. '[1,2]+[2,3]'")
        p.add_argument("--m2", required=True)
        p.add_argument("--mod", type=int, help="cyclic quiver with this many vertices")

    for name in ("kl", "akl"):
        p = sub.add_parser(name, parents=[common], help="KL polynomial P_{y,w}")
        perms(p, affine_flag=(name == "kl"))
        if name == "akl":
            p.set_defaults(affine=True)
        matrices(p)
        p.add_argument("--policy", choices=("smallest", "largest"), default="smallest")
        p.add_argument("--inverse", action="store_true", help="inverse KL polynomial instead")

    p = sub.add_parser("bruhat", parents=[common], help="is y <= w in Bruhat order")
    perms(p)
    matrices(p)

    p = sub.add_parser("len", parents=[common], help="length of a (coset) element")
    p.add_argument("--w")
    p.add_argument("--matrix")
    p.add_argument("--affine", action="store_true")
    p.add_argument("--nprime", type=int)

    p = sub.add_parser("wm", parents=[common], help="longest coset representative")
    p.add_argument("--matrix", required=True)
    p.add_argument("--affine", action="store_true")
    p.add_argument("--nprime", type=int)
    p.add_argument("--row-start", type=int, default=1)
    p.add_argument("--col-start", type=int, default=1)

    p = sub.add_parser("psi", parents=[common], help="coset matrix of a permutation")
    p.add_argument("--w", required=True)
    p.add_argument("--rows", required=True, help="row block sizes, e.g. '1,4,3,1'")
    p.add_argument("--cols", required=True, help="column block sizes")
    p.add_argument("--affine", action="store_true")
    p.add_argument("--row-start", type=int, default=1)
    p.add_argument("--col-start", type=int, default=1)

    p = sub.add_parser("cancel", parents=[common], help="delete a cancellable index or entry")
    perms(p)
    matrices(p)
    p.add_argument("--i", type=int, help="index to cancel")
    p.add_argument("--entry", help="matrix entry 'i,j' to cancel")
    p.add_argument("--random", action="store_true", help="sample a cancellable triple")
    p.add_argument("--d", type=int, help="degree for --random")

    for name, help_ in (("ic", "IC polynomial of orbit closures"),
                        ("icinv", "entry of the inverse IC matrix")):
        p = sub.add_parser(name, parents=[common], help=help_)
        multisegs(p)
        p.add_argument("--method", choices=("reduced", "full", "both"), default="reduced")

    p = sub.add_parser("reduce", parents=[common], help="reduced matrix encodings of a pair")
    multisegs(p)

    for name, help_ in (("orbitdim", "orbit dimension"),
                        ("maxelts", "maximal elements above m")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--m", required=True)
        p.add_argument("--mod", type=int)

    p = sub.add_parser("decomp", parents=[common], help="decomposition multiplicity")
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)

    sub.add_parser("selftest", parents=[common], help="oracle agreement checks")
    return parser


def _execute(args, out, err) -> int:
    as_json = getattr(args, "json", False)
    if not hasattr(args, "seed"):
        args.seed = None
    try:
        text, result = COMMANDS[args.command](args)
    except _SelftestFailed as exc:
        text, result, code = exc.text, exc.payload, EXIT_UNDEFINED
    except UNDEFINED_ERRORS as exc:
        print(f"undefined: {exc}", file=err)
        return EXIT_UNDEFINED
    except MALFORMED_ERRORS as exc:
        print(f"error: {exc}", file=err)
        return EXIT_MALFORMED
    else:
        code = EXIT_OK
    if as_json:
        print(json.dumps({"command": args.command, "result": result}), file=out)
    else:
        print(text, file=out)
    return code


def _run_captured(argv: Sequence[str]) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def _batch(args, out, err) -> int:
    try:
        if args.batch == "-":
            lines = sys.stdin.read().splitlines()
        else:
            with open(args.batch) as fh:
                lines = fh.read().splitlines()
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_MALFORMED
    extra = []
    if getattr(args, "json", False):
        extra.append("--json")
    if getattr(args, "seed", None) is not None:
        extra += ["--seed", str(args.seed)]
    queries = []
    for ln in lines:
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            queries.append(shlex.split(ln) + extra)
    if args.jobs > 1 and len(queries) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_captured, queries))
    else:
        results = [_run_captured(q) for q in queries]
    worst = EXIT_OK
    for code, o, e in results:
        out.write(o)
        err.write(e)
        worst = max(worst, code)
    return worst


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=err)
        return EXIT_MALFORMED
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.batch is not None:
        if args.command is not None:
            print("error: --batch takes no command", file=err)
            return EXIT_MALFORMED
        return _batch(args, out, err)
    if args.command is None:
        parser.print_usage(err)
        return EXIT_MALFORMED
    return _execute(args, out, err)


def main() -> None:
    sys.exit(run())
