"""Command-line interface: dimension tables, tabulation, Gram checks, kernel
and spectral verification, and orthogonal projection.

Exit codes: 0 success, 2 usage, 3 parameter domain, 4 tolerance failure,
5 I/O.  Failures print a JSON report on stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from contextlib import nullcontext

import numpy as np

from .catalog import FamilyBasis
from .domains import DomainSpec, Family, WeightSpec
from .errors import CapabilityError, DomainError, IndexRangeError, ParameterDomainError
from .kernels import KernelSpec, basis_kernel, cone_kernel, doublecone_even_kernel, mapped_kernel, oddeven_relation_check
from .quad import default_degree, domain_rule, gram
from .revolve import EvalFn, enumerate_indices, project
from .spectral import OPERATORS, OperatorSpec, eigenbasis, residual_report, spectral_residual

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_TOL, EXIT_IO = 0, 2, 3, 4, 5

ALIASES = {
    "a": "alpha",
    "alpha": "alpha",
    "b": "beta",
    "beta": "beta",
    "g": "gamma",
    "gamma": "gamma",
    "th": "theta",
    "theta": "theta",
    "mu": "mu",
    "lambda": "lam",
    "lam": "lam",
    "fa": "fa",
    "fb": "fb",
}

FAMILIES = [f.value for f in Family]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so usage errors get a JSON report too."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def parse_params(text: str | None) -> dict[str, float]:
    """``"a=0,mu=0.5"`` to canonical names; floats at full precision."""
    out: dict[str, float] = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, val = item.partition("=")
        key = key.strip().lower()
        if not sep or key not in ALIASES:
            raise UsageError(f"bad parameter {item!r}; expected key=value with key in {sorted(ALIASES)}")
        try:
            out[ALIASES[key]] = float(val)
        except ValueError:
            raise UsageError(f"parameter {key} is not a number: {val!r}") from None
    return out


def _domain(args, params) -> DomainSpec:
    fa = params.pop("fa", args.fa if args.fa is not None else _default_fa(args.family))
    fb = params.pop("fb", args.fb if args.fb is not None else _default_fb(args.family))
    return DomainSpec(Family(args.family), args.d, fa, fb)


def _default_fa(family: str) -> float:
    return {"doubleconic": 0.5, "doublehyperbolic": 0.625, "cappedquadratic": 0.625}.get(family, 1.0)


def _default_fb(family: str) -> float:
    return {
        "hyperboloid": 0.1,
        "doublehyperbolic": 0.125,
        "ellipsoidlens": 0.5,
        "cappedquadratic": 0.0625,
        "cappedellipsoid": 0.5,
    }.get(family, 0.0)


def _setup(args):
    params = parse_params(args.params)
    dom = _domain(args, params)
    w = WeightSpec(**params)
    w.validate(dom)
    return dom, w


def _parity(args, dom: DomainSpec) -> str:
    if args.parity:
        return args.parity
    return "even" if dom.family.even_only else "any"


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------- subcommands


def cmd_dims(args) -> int:
    dom = _domain(args, parse_params(args.params))
    out = io.StringIO()
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow(["n", "dim", "parity"])
    for n in range(args.nmax + 1):
        wr.writerow([n, len(enumerate_indices(n, dom, args.parity or "any")), args.parity or "any"])
    _emit(out.getvalue(), args.out)
    return EXIT_OK


def _read_points(path: str, d: int):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OSError(f"cannot read points file {path}: {exc}") from exc
    if not rows:
        raise OSError(f"points file {path} is empty")
    body = rows[1:] if not _is_number(rows[0][0]) else rows
    arr = np.array([[float(v) for v in r] for r in body if r], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != d + 1:
        raise UsageError(f"points file needs {d + 1} columns (x1..x{d}, t)")
    return arr[:, :d], arr[:, d]


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def cmd_tabulate(args) -> int:
    dom, w = _setup(args)
    basis = FamilyBasis(dom, w)
    parity = _parity(args, dom)
    if args.points:
        x, t = _read_points(args.points, dom.d)
    else:
        x, t = dom.sample(np.random.default_rng(args.seed), args.grid)
    out = io.StringIO()
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow(["n", "k", "j", "ell", "parity"] + [f"x{i + 1}" for i in range(dom.d)] + ["t", "value"])
    for idx in basis.indices(args.n, parity):
        vals = basis.element(idx)(x, t)
        for xi, ti, v in zip(x, t, vals):
            wr.writerow([idx.n, idx.k, idx.j, idx.ell, idx.parity] + [repr(float(c)) for c in xi] + [repr(float(ti)), repr(float(v))])
    _emit(out.getvalue(), args.out)
    return EXIT_OK


def cmd_gram(args) -> int:
    dom, w = _setup(args)
    basis = FamilyBasis(dom, w)
    parity = _parity(args, dom)
    fns = basis.elements(args.nmax, parity)
    idxs = [i for n in range(args.nmax + 1) for i in basis.indices(n, parity)]
    qd = args.quad_degree or default_degree(args.nmax) + 2
    res = gram(fns, domain_rule(dom, w, qd))
    norms = np.array([f.norm for f in fns])
    diag_err = float(np.max(np.abs(np.diag(res.matrix) / norms - 1))) if len(fns) else 0.0
    off = res.max_offdiag()
    ok = off <= args.tol and diag_err <= args.tol and not res.underintegrated
    doc = {
        "family": dom.family.value,
        "params": {"d": dom.d, "fa": dom.fa, "fb": dom.fb, **w.used(dom.family)},
        "nmax": args.nmax,
        "parity": parity,
        "quad_degree": qd,
        "size": len(fns),
        "max_offdiag": off,
        "max_norm_error": diag_err,
        "underintegrated": res.underintegrated,
        "tol": args.tol,
        "pass": ok,
        "indices": [i.as_dict() for i in idxs],
        "matrix": res.matrix.tolist(),
    }
    _emit(_dump(doc), args.out)
    return EXIT_OK if ok else EXIT_TOL


CHECKS = ("cone", "doublecone", "mapped", "oddeven")


def cmd_kernel(args) -> int:
    params = parse_params(args.params)
    rng = np.random.default_rng(args.seed)
    check = args.check
    tol = args.tol if args.tol is not None else (1e-8 if check == "oddeven" else 1e-6)
    errs = []
    if check == "oddeven":
        be, ga, th = params.get("beta", 0.0), params.get("gamma", 0.0), params.get("theta", 2.0)
        dom = DomainSpec(Family.DOUBLE_CONE, args.d)
        p, q = dom.sample(rng, args.pairs), dom.sample(rng, args.pairs)
        for n in range(1, args.n + 1):
            errs.append(oddeven_relation_check(be, ga, th, n, (p, q), args.d))
        used = {"beta": be, "gamma": ga, "theta": th}
    else:
        if check == "cone":
            family = Family.CONE
            fn, parity = cone_kernel, "any"
        elif check == "doublecone":
            family = Family.DOUBLE_CONE
            fn, parity = doublecone_even_kernel, "even"
            params.setdefault("theta", 0.5)
        else:
            family = Family(args.family or "doubleconic")
            if not family.mapped:
                raise UsageError(f"--family must be a mapped family for the mapped check, got {family.value}")
            fn, parity = mapped_kernel, "even"
            params.setdefault("theta", 0.5)
        fa = params.pop("fa", _default_fa(family.value))
        fb = params.pop("fb", _default_fb(family.value))
        w = WeightSpec(**params)
        dom = DomainSpec(family, args.d, fa, fb)
        w.validate(dom)
        p, q = dom.sample(rng, args.pairs), dom.sample(rng, args.pairs)
        for n in range(args.n + 1):
            spec = KernelSpec(family, w, n, args.d, fa, fb)
            closed = fn(spec, p, q)
            direct = basis_kernel(spec, p, q, parity)
            errs.append(float(np.max(np.abs(closed - direct)) / max(1.0, float(np.max(np.abs(direct))))))
        used = {**w.used(family), "fa": fa, "fb": fb}
    worst = max(errs) if errs else 0.0
    ok = worst <= tol
    doc = {
        "check": check,
        "params": {**used, "d": args.d},
        "n": args.n,
        "pairs": args.pairs,
        "seed": args.seed,
        "errors": errs,
        "max_error": worst,
        "tol": tol,
        "pass": ok,
    }
    _emit(_dump(doc), args.out)
    return EXIT_OK if ok else EXIT_TOL


def _eigen_points(spec: OperatorSpec, rng, k: int):
    if spec.op == "ball":
        pts = []
        while len(pts) < k:
            x = rng.uniform(-1, 1, spec.d)
            if np.linalg.norm(x) <= 1 - spec.margin:
                pts.append(x)
        return np.array(pts), None
    if spec.op == "sphere":
        x = rng.normal(size=(k, spec.d))
        return x / np.linalg.norm(x, axis=1, keepdims=True), None
    dom = spec.domain()
    tmin = 0.0 if spec.op == "cone" else spec.tmin
    return dom.sample(rng, k, spec.margin, tmin)


def cmd_eigen(args) -> int:
    params = parse_params(args.params)
    dom = None
    if args.op.startswith("mapped"):
        family = Family(args.family or "doubleconic")
        fa = params.pop("fa", _default_fa(family.value))
        fb = params.pop("fb", _default_fb(family.value))
        dom = DomainSpec(family, args.d, fa, fb)
    spec = OperatorSpec(args.op, params, args.d, dom, args.h, args.levels)
    if spec.op not in ("ball", "sphere"):
        from .spectral import eigen_weight

        wdom = dom or spec.domain()
        eigen_weight(spec).validate(wdom)
    rng = np.random.default_rng(args.seed)
    x, t = _eigen_points(spec, rng, args.points)
    worst = 0.0
    per_degree = []
    for n in range(args.n + 1):
        lam = spec.eigenvalue(n)
        r = max((spectral_residual(spec, u, lam, x, t) for u in eigenbasis(spec, n)), default=0.0)
        per_degree.append(r)
        worst = max(worst, r)
    ok = worst <= args.tol
    doc = json.loads(residual_report(spec, args.n, args.points, worst))
    doc.update(per_degree=per_degree, tol=args.tol, pass_=ok, seed=args.seed, h=args.h)
    doc["pass"] = doc.pop("pass_")
    _emit(_dump(doc), args.out)
    return EXIT_OK if ok else EXIT_TOL


BUILTINS = ("one", "t2", "poly4", "exp")


def builtin_function(name: str, d: int, seed: int = 0) -> EvalFn:
    """Named test functions for projection."""
    if name == "one":
        return EvalFn(lambda x, t: np.ones_like(t), 0, "1")
    if name == "t2":
        return EvalFn(lambda x, t: t * t, 2, "t^2")
    if name == "exp":
        return EvalFn(lambda x, t: np.exp(t + x[:, 0]), None, "exp(t+x1)")
    if name == "poly4":
        return random_polynomial(4, d, np.random.default_rng(seed))
    raise UsageError(f"unknown builtin {name!r}; choose from {BUILTINS}")


def random_polynomial(deg: int, d: int, rng) -> EvalFn:
    """Polynomial in (x, t) of total degree ``deg`` with N(0,1) coefficients."""
    terms = [(e, rng.normal()) for e in _exponents(deg, d + 1)]
    return monomial_function(terms, d, f"random degree {deg}")


def _exponents(deg: int, nvar: int):
    if nvar == 1:
        return [(k,) for k in range(deg + 1)]
    return [(k,) + rest for k in range(deg + 1) for rest in _exponents(deg - k, nvar - 1)]


def monomial_function(terms, d: int, label: str = "") -> EvalFn:
    deg = max((sum(e) for e, _ in terms), default=0)

    def fn(x, t):
        P = np.column_stack([x, t])
        out = np.zeros(P.shape[0])
        for e, c in terms:
            out += c * np.prod(P ** np.asarray(e, dtype=float), axis=1)
        return out

    return EvalFn(fn, deg, label)


def read_monomials(path: str, d: int) -> EvalFn:
    """CSV with header ``coef,e_x1,..,e_xd,e_t``: one monomial per row."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OSError(f"cannot read function file {path}: {exc}") from exc
    body = rows[1:] if rows and not _is_number(rows[0][0]) else rows
    terms = []
    for r in body:
        if not r:
            continue
        if len(r) != d + 2:
            raise UsageError(f"function file rows need {d + 2} columns (coef, exponents of x1..x{d}, t)")
        exps = tuple(int(v) for v in r[1:])
        if min(exps) < 0:
            raise UsageError("monomial exponents must be nonnegative")
        terms.append((exps, float(r[0])))
    return monomial_function(terms, d, os.path.basename(path))


def cmd_project(args) -> int:
    dom, w = _setup(args)
    basis = FamilyBasis(dom, w)
    parity = _parity(args, dom)
    if args.f in BUILTINS:
        f = builtin_function(args.f, dom.d, args.seed)
    elif os.path.exists(args.f):
        f = read_monomials(args.f, dom.d)
    else:
        raise UsageError(f"--f must be one of {BUILTINS} or an existing CSV file, got {args.f!r}")
    qd = args.quad_degree or 2 * args.N + 2 * (f.degree or args.N) + 4
    proj = project(f, args.N, basis, domain_rule(dom, w, qd), parity)
    doc = json.loads(proj.to_json())
    x, t = dom.sample(np.random.default_rng(args.seed), 100)
    doc["sup_error_100"] = float(np.max(np.abs(proj(x, t) - f(x, t))))
    doc["quad_degree"] = qd
    doc["function"] = f.label or args.f
    _emit(_dump(doc), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- entry


def _common(p: argparse.ArgumentParser, family: bool = True, params: bool = True) -> None:
    if family:
        p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--d", type=int, default=2, help="dimension of x (default 2)")
    p.add_argument("--fa", type=float, default=None, help="first shape parameter")
    p.add_argument("--fb", type=float, default=None, help="second shape parameter")
    if params:
        p.add_argument("--params", default="", help="comma-separated key=value weight parameters")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="revopoly", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("dims", help="dimension table of the polynomial spaces")
    _common(p)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--parity", choices=("any", "even", "odd"))
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("tabulate", help="evaluate the degree-n basis at points")
    _common(p)
    p.add_argument("--n", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", help="CSV of points x1..xd,t")
    src.add_argument("--grid", type=int, help="number of seeded random interior points")
    p.add_argument("--parity", choices=("any", "even", "odd"))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_tabulate)

    p = sub.add_parser("gram", help="Gram matrix of the basis up to degree nmax")
    _common(p)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--quad-degree", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--parity", choices=("any", "even", "odd"))
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("kernel", help="closed-form kernel against the basis sum")
    _common(p, family=False)
    p.add_argument("--check", required=True, choices=CHECKS)
    p.add_argument("--family", choices=[f.value for f in Family if f.mapped], default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pairs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("eigen", help="finite-difference spectral residuals")
    _common(p, family=False)
    p.add_argument("--op", required=True, choices=OPERATORS)
    p.add_argument("--family", choices=[f.value for f in Family if f.mapped], default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("project", help="orthogonal projection coefficients")
    _common(p)
    p.add_argument("--f", required=True, help=f"builtin ({', '.join(BUILTINS)}) or monomial CSV")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--parity", choices=("any", "even", "odd"))
    p.add_argument("--quad-degree", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_project)
    return ap


def _thread_limit():
    raw = os.environ.get("REVOPOLY_THREADS")
    if not raw:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    try:
        n = max(1, int(raw))
    except ValueError:
        raise UsageError(f"REVOPOLY_THREADS must be an integer, got {raw!r}") from None
    return threadpool_limits(limits=n)


def _fail(code: int, kind: str, exc: BaseException) -> int:
    sys.stdout.write(_dump({"status": "error", "kind": kind, "code": code, "message": str(exc)}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("n", "nmax", "N", "grid", "pairs", "points"):
        val = getattr(args, name, None)
        if isinstance(val, int) and val < (1 if name in ("grid", "pairs") else 0):
            return _fail(EXIT_USAGE, "usage", UsageError(f"--{name} out of range: {val}"))
    try:
        with _thread_limit():
            return args.func(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except (ParameterDomainError, DomainError, CapabilityError, IndexRangeError) as exc:
        return _fail(EXIT_DOMAIN, "parameter-domain", exc)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)


if __name__ == "__main__":
    sys.exit(main())
