"""Command-line front end.

Exit codes form a stable contract: 0 on success, 1 when a verification
case fails (or a decision procedure ends undecided), 2 on usage or size
errors.  JSON output is byte-stable for identical inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import DEFAULT_SEED
from .cohomology import cohomology_dims, restricted_h1
from .lie_core import algebra_to_json
from .repmod import (
    UndecidedError,
    composition_series,
    is_isomorphic,
    module_to_json,
)
from .verify import (
    UnsupportedParamsError,
    registered_checks,
    run_all,
    run_check,
)
from .zassenhaus import SpecError, build_algebra, build_module

MAX_COCHAIN_DIM = 100_000


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MODLIE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise SpecError(f"MODLIE_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _module_spec(args) -> str:
    spec = args.module
    if ":" not in spec and spec in ("verma", "dpow", "simple"):
        if getattr(args, "lam", None) is None:
            raise SpecError(f"module spec {spec!r} needs ':lambda' or --lambda")
        spec = f"{spec}:{args.lam}"
        if getattr(args, "c", None):
            spec += f",{args.c}"
    return spec


def _guard_cochain_size(ctx, M, max_degree, cap):
    worst = 0
    for n in range(0, max_degree + 2):
        worst = max(worst, math.comb(ctx.algebra.dim, n) * M.dim)
    if worst > cap:
        raise UnsupportedParamsError(
            f"cochain spaces would hold up to {worst} basis elements, over the "
            f"limit {cap}; raise --max-cochain-dim to proceed"
        )


def _table_dims(spec_a, spec_m, dims, extra=None):
    lines = [f"algebra: {spec_a}", f"module:  {spec_m}"]
    lines.append("degree | dim H^n")
    for n, d in enumerate(dims):
        lines.append(f"{n:6d} | {d}")
    if extra:
        lines.append(extra)
    return "\n".join(lines) + "\n"


def _cmd_algebra(args):
    ctx = build_algebra(args.spec)
    prov = ctx.envelope.provenance if ctx.envelope is not None else None
    obj = algebra_to_json(ctx.algebra, provenance=prov)
    _emit(_dump(obj), args.out)
    return 0


def _cmd_module(args):
    ctx = build_algebra(args.algebra)
    M = build_module(ctx, _module_spec(args), seed=_seed_from(args))
    obj = module_to_json(M, algebra_ref=None)
    _emit(_dump(obj), args.out)
    return 0


def _cmd_cohomology(args):
    ctx = build_algebra(args.algebra)
    spec_m = _module_spec(args)
    M = build_module(ctx, spec_m, seed=_seed_from(args))
    if args.max_degree > ctx.algebra.dim:
        raise SpecError(
            f"--max-degree {args.max_degree} exceeds the algebra dimension {ctx.algebra.dim}"
        )
    _guard_cochain_size(ctx, M, args.max_degree, args.max_cochain_dim)
    res = cohomology_dims(ctx.algebra, M, args.max_degree)
    obj = {
        "algebra": args.algebra,
        "module": spec_m,
        "degrees": list(range(args.max_degree + 1)),
        "dims": list(res.dims),
    }
    if args.format == "json":
        _emit(_dump(obj), args.out)
    else:
        _emit(_table_dims(args.algebra, spec_m, res.dims), args.out)
    return 0


def _cmd_restricted_h1(args):
    ctx = build_algebra(args.algebra)
    spec_m = _module_spec(args)
    M = build_module(ctx, spec_m, seed=_seed_from(args))
    if ctx.algebra.pmap is None:
        raise SpecError(f"algebra {args.algebra!r} carries no p-mapping")
    value = restricted_h1(ctx.algebra, ctx.algebra.pmap, M)
    obj = {
        "algebra": args.algebra,
        "module": spec_m,
        "degrees": [],
        "dims": [],
        "restricted_h1": value,
    }
    if args.format == "json":
        _emit(_dump(obj), args.out)
    else:
        _emit(f"restricted H^1({args.algebra}, {spec_m}) = {value}\n", args.out)
    return 0


def _cmd_composition_series(args):
    ctx = build_algebra(args.algebra)
    spec_m = _module_spec(args)
    M = build_module(ctx, spec_m, seed=_seed_from(args))
    try:
        series = composition_series(M, seed=_seed_from(args))
    except UndecidedError as exc:
        sys.stderr.write(f"undecided: {exc}\n")
        return 1
    obj = {
        "algebra": args.algebra,
        "module": spec_m,
        "factors": [[d, lbl] for d, lbl in series.factors],
        "flags": [s.dim for s in series.flags],
    }
    if args.format == "json":
        _emit(_dump(obj), args.out)
    else:
        facts = ", ".join(
            f"{d}" + (f" ({lbl})" if lbl else "") for d, lbl in series.factors
        )
        _emit(f"composition factors (bottom to top): {facts}\n", args.out)
    return 0


def _cmd_isomorphic(args):
    ctx = build_algebra(args.algebra)
    seed = _seed_from(args)
    M = build_module(ctx, args.module_a, seed=seed)
    N = build_module(ctx, args.module_b, seed=seed)
    verdict = is_isomorphic(M, N, seed=seed)
    text = {True: "true", False: "false", None: "undecided"}[verdict]
    obj = {
        "algebra": args.algebra,
        "modules": [args.module_a, args.module_b],
        "isomorphic": verdict,
    }
    if args.format == "json":
        _emit(_dump(obj), args.out)
    else:
        _emit(f"isomorphic: {text}\n", args.out)
    return 0 if verdict is not None else 1


def _report_table(reports):
    lines = []
    width = max(len(r.check) for r in reports)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        lines.append(
            f"{r.check:<{width}}  p={r.p} m={r.m}  cases={len(r.cases):3d}  "
            f"{r.ms:6d} ms  {status}"
        )
        if not r.passed:
            for c in r.cases:
                if not c["pass"]:
                    lines.append(
                        f"    case {json.dumps(c['inputs'], sort_keys=True)}: "
                        f"expected {c['expected']}, got {c['computed']}  [{c['cite']}]"
                    )
    return "\n".join(lines) + "\n"


def _cmd_verify(args):
    seed = _seed_from(args)
    if args.all:
        reports = run_all(args.p, args.m, seed)
    else:
        if args.check is None:
            raise SpecError("verify needs --check NAME or --all")
        reports = [run_check(args.check, args.p, args.m, seed)]
    payload = [r.to_json() for r in reports]
    if args.format == "json":
        _emit(_dump(payload if args.all else payload[0]), args.out)
    else:
        _emit(_report_table(reports), args.out)
    return 0 if all(r.passed for r in reports) else 1


def _add_common(sub, module_arg=True):
    if module_arg:
        sub.add_argument("--lambda", dest="lam", type=int, default=None)
        sub.add_argument("--c", dest="c", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--format", choices=["json", "table"], default="json")
    sub.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="modlie",
        description=(
            "Exact modular Lie algebra computations: structure, restricted "
            "envelopes, modules, and cohomology over prime fields."
        ),
    )
    sp = ap.add_subparsers(dest="command", required=True)

    a = sp.add_parser("algebra", help="build an algebra and write its JSON")
    a.add_argument("spec", help="witt:p,m | borel:p,m | envelope:p,m")
    _add_common(a, module_arg=False)
    a.set_defaults(fn=_cmd_algebra)

    mo = sp.add_parser("module", help="build a module and write its JSON")
    mo.add_argument("algebra")
    mo.add_argument("module", help="verma:l[,c] | dpow:l | simple:l | adjoint | trivial | dual:<spec>")
    _add_common(mo)
    mo.set_defaults(fn=_cmd_module)

    co = sp.add_parser("cohomology", help="dimensions of H^0..H^n")
    co.add_argument("algebra")
    co.add_argument("module")
    co.add_argument("--max-degree", type=int, default=2)
    co.add_argument("--max-cochain-dim", type=int, default=MAX_COCHAIN_DIM)
    _add_common(co)
    co.set_defaults(fn=_cmd_cohomology)

    rh = sp.add_parser("restricted-h1", help="restricted 1-cohomology")
    rh.add_argument("algebra")
    rh.add_argument("module")
    _add_common(rh)
    rh.set_defaults(fn=_cmd_restricted_h1)

    cs = sp.add_parser("composition-series", help="composition factors of a module")
    cs.add_argument("algebra")
    cs.add_argument("module")
    _add_common(cs)
    cs.set_defaults(fn=_cmd_composition_series)

    iso = sp.add_parser("isomorphic", help="decide isomorphism of two modules")
    iso.add_argument("algebra")
    iso.add_argument("module_a")
    iso.add_argument("module_b")
    iso.add_argument("--seed", type=int, default=None)
    iso.add_argument("--format", choices=["json", "table"], default="json")
    iso.add_argument("--out", default=None)
    iso.set_defaults(fn=_cmd_isomorphic)

    ve = sp.add_parser("verify", help="run registered theorem checks")
    ve.add_argument("--check", choices=registered_checks(), default=None)
    ve.add_argument("--all", action="store_true")
    ve.add_argument("--p", type=int, required=True)
    ve.add_argument("--m", type=int, required=True)
    ve.add_argument("--seed", type=int, default=None)
    ve.add_argument("--format", choices=["json", "table"], default="json")
    ve.add_argument("--out", default=None)
    ve.set_defaults(fn=_cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (SpecError, UnsupportedParamsError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
