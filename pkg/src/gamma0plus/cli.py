"""Command-line surface.

Exit codes: 0 success, 1 verification mismatch, 2 usage error,
3 computation failure.  --json switches the output to a machine-readable
envelope; polynomials are serialized as ascending lists of exact decimal
strings, numeric values as decimal strings with an error bound.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import mpmath

from . import classfield, cmeval, curvedata, fixtures, genpoly, modpoly, quadforms
from .exactalg import IntPoly

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_FAILURE = 3


def _poly_json(p):
    return [str(c) for c in p.coeffs]


def _value_json(ev):
    return {"value": mpmath.nstr(ev.value, 25), "err": mpmath.nstr(ev.err, 3),
            "terms": ev.terms_used}


class Envelope:
    def __init__(self, command, inputs):
        self.command = command
        self.inputs = inputs
        self.result = {}
        self.t0 = time.monotonic()
        self.provenance = {}

    def emit(self, as_json, text_lines):
        if as_json:
            payload = {"command": self.command, "inputs": self.inputs,
                       "result": self.result,
                       "elapsed_s": round(time.monotonic() - self.t0, 3)}
            if self.provenance:
                payload["provenance"] = self.provenance
            print(json.dumps(payload, indent=2))
        else:
            for line in text_lines:
                print(line)


def _registry():
    return curvedata.default_registry()


def _cmd_levels(args):
    env = Envelope("levels", {})
    lv = curvedata.genus_one_levels()
    env.result["levels"] = lv
    env.emit(args.json, [" ".join(str(n) for n in lv)])
    return EXIT_OK


def _cmd_pq(args):
    env = Envelope("pq", {"level": args.level, "m": args.m})
    reg = _registry()
    t_q = 2 * modpoly.sigma1_plus(args.m) + modpoly.DEFAULT_GUARD + 1
    need = t_q * args.m
    curve = reg.get(args.level, min_order=need)
    env.provenance["record"] = curve.provenance
    P, Q = modpoly.pq_extract(curve, args.m)
    env.result["P"] = _poly_json(P)
    env.result["Q"] = _poly_json(Q)
    env.emit(args.json, [f"P_{{{args.m},{args.level}}}(x) = {P.pretty()}",
                         f"Q_{{{args.m},{args.level}}}(x) = {Q.pretty()}"])
    return EXIT_OK


def _cmd_phi(args):
    env = Envelope("phi", {"level": args.level, "m": args.m})
    reg = _registry()
    t_q = 2 * modpoly.sigma1_plus(args.m) + modpoly.DEFAULT_GUARD + 1
    curve = reg.get(args.level, min_order=t_q * args.m)
    env.provenance["record"] = curve.provenance
    phi = modpoly.phi_polynomial(curve, args.m)
    env.result["degree"] = phi.degree
    env.result["coefficients"] = [{"P": _poly_json(c.p), "Q": _poly_json(c.q)}
                                  for c in phi.coeffs]
    lines = [f"Phi_{{{args.m},{args.level}}}(X): degree {phi.degree} in X"]
    for j, c in enumerate(phi.coeffs):
        lines.append(f"  X^{j}: ({c.p.pretty()}) + y*({c.q.pretty()})")
    env.emit(args.json, lines)
    return EXIT_OK


def _cmd_genpoly(args):
    env = Envelope("genpoly", {"level": args.level, "m": args.m, "factor": args.factor})
    reg = _registry()
    t_q = 2 * modpoly.sigma1_plus(args.m) + modpoly.DEFAULT_GUARD + 1
    curve = reg.get(args.level, min_order=t_q * args.m)
    env.provenance["record"] = curve.provenance
    P, Q = modpoly.pq_extract(curve, args.m)
    R = genpoly.generating_polynomial(P, Q, curve)
    env.result["polynomial"] = _poly_json(R)
    lines = [f"generating polynomial ({args.m},{args.level}): {R.pretty()}"]
    if args.factor:
        fp = genpoly.factor_over_z(R)
        env.result["content"] = str(fp.content)
        env.result["factors"] = [{"poly": _poly_json(g), "multiplicity": e}
                                 for g, e in fp.factors]
        lines.append(f"  content: {fp.content}")
        for g, e in fp.factors:
            lines.append(f"  factor: ({g.pretty()})^{e}")
    env.emit(args.json, lines)
    return EXIT_OK


def _parse_form(text):
    try:
        a, b, c = (int(v) for v in text.split(","))
        return quadforms.QuadForm(a, b, c)
    except (ValueError, quadforms.FormError) as e:
        raise UsageError(f"invalid --form {text!r}: {e}") from e


class UsageError(Exception):
    pass


def _cmd_eval(args):
    if (args.sqrt is None) == (args.form is None):
        raise UsageError("eval needs exactly one of --sqrt M or --form a,b,c")
    env = Envelope("eval", {"level": args.level, "sqrt": args.sqrt,
                            "form": args.form, "digits": args.digits})
    reg = _registry()
    if args.sqrt is not None:
        pt = quadforms.cm_root(quadforms.QuadForm(args.level, 0, args.sqrt))
    else:
        pt = quadforms.cm_root(_parse_form(args.form))
    im = pt.imag_part()
    im_val = (im[0] ** 0.5) / im[1]
    need = cmeval.estimate_terms(args.level, im_val, args.digits + 15)
    curve = reg.get(args.level, min_order=need)
    env.provenance["record"] = curve.provenance
    policy = cmeval.PrecisionPolicy(digits=args.digits)
    ex = cmeval.eval_x(curve, pt, policy)
    ey = cmeval.eval_y(curve, pt, policy)
    res = cmeval.cubic_residual(ex, ey, curve)
    env.result["x"] = _value_json(ex)
    env.result["y"] = _value_json(ey)
    env.result["cubic_residual"] = mpmath.nstr(res.residual, 3)
    env.emit(args.json, [
        f"tau = (-({pt.b}) + sqrt({pt.D}))/(2*{pt.a})",
        f"x_{args.level}(tau) = {mpmath.nstr(ex.value, args.digits)}  (+- {mpmath.nstr(ex.err, 3)})",
        f"y_{args.level}(tau) = {mpmath.nstr(ey.value, args.digits)}  (+- {mpmath.nstr(ey.err, 3)})",
        f"cubic residual: {mpmath.nstr(res.residual, 3)}"])
    return EXIT_OK


def _cmd_minpoly(args):
    env = Envelope("minpoly", {"level": args.level, "dk": args.dk,
                               "digits": args.digits, "force": args.force})
    policy = cmeval.PrecisionPolicy(digits=args.digits) if args.digits else None
    if args.force and not args.json:
        print("warning: composite level; the class-field statement is proven for prime N",
              file=sys.stderr)
    job = classfield.MinPolyJob(args.level, args.dk, policy, args.force)
    res = classfield.minpoly(job, registry=_registry())
    env.result["polynomial"] = _poly_json(res.poly)
    env.result["degree"] = res.poly.degree
    env.result["slack"] = repr(res.slack)
    env.result["digits_used"] = res.digits_used
    env.emit(args.json, [f"M(X) for N={args.level}, d_K={args.dk} "
                         f"(degree {res.poly.degree}, slack {res.slack:.2e}):",
                         res.poly.pretty("X")])
    return EXIT_OK


def _cmd_heegner(args):
    env = Envelope("heegner", {"level": args.level, "dk": args.dk})
    pts = classfield.heegner_points(args.level, args.dk, registry=_registry())
    env.result["count"] = len(pts)
    env.result["points"] = [{"x": _value_json(x), "y": _value_json(y)} for x, y in pts]
    lines = [f"{len(pts)} points on the level-{args.level} curve over the "
             f"ring class field of discriminant {args.level ** 2 * args.dk}:"]
    for x, y in pts:
        lines.append(f"  ({mpmath.nstr(x.value, 20)}, {mpmath.nstr(y.value, 20)})")
    env.emit(args.json, lines)
    return EXIT_OK


def _cmd_bootstrap(args):
    env = Envelope("bootstrap", {"level": args.level, "order": args.order})
    import os
    rec = curvedata.bootstrap_record(args.level, args.order)
    out_dir = os.environ.get("SI_DATA_DIR", "si-records")
    from pathlib import Path
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    path = Path(out_dir) / f"N{args.level}.txt"
    curvedata.save_record(path, rec)
    check = curvedata.validate_cubic(rec)
    env.result["path"] = str(path)
    env.result["coefficients"] = [rec.A, rec.B, rec.C, rec.D, rec.E]
    env.result["validated_through"] = check.checked_through
    env.emit(args.json, [
        f"N={args.level}: (A,B,C,D,E) = {(rec.A, rec.B, rec.C, rec.D, rec.E)}",
        f"cubic identity verified through q^{check.checked_through}",
        f"record written to {path}"])
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification against the vendored appendix fixtures
# ---------------------------------------------------------------------------

def _verify_pair_A(reg, m, N):
    t_q = 2 * modpoly.sigma1_plus(m) + modpoly.DEFAULT_GUARD + 1
    curve = reg.get(N, min_order=t_q * m)
    P, Q = modpoly.pq_extract(curve, m)
    Pf, Qf = fixtures.appendix_pq(m, N)
    if (P, Q) == (Pf, Qf):
        return None
    return f"P/Q mismatch: computed P={_short(P)} Q={_short(Q)}, vendored P={_short(Pf)} Q={_short(Qf)}"


def _verify_pair_B(reg, m, N):
    t_q = 2 * modpoly.sigma1_plus(m) + modpoly.DEFAULT_GUARD + 1
    curve = reg.get(N, min_order=t_q * m)
    P, Q = modpoly.pq_extract(curve, m)
    R = genpoly.generating_polynomial(P, Q, curve)
    Rf = fixtures.appendix_genpoly(m, N)
    if R == Rf:
        return None
    return f"generating polynomial mismatch: computed {_short(R)}, vendored {_short(Rf)}"


def _verify_pair_C(reg, m, N):
    xs, ys = fixtures.appendix_value(m, N)
    digits = 30
    pt = quadforms.cm_root(quadforms.QuadForm(N, 0, m))
    need = cmeval.estimate_terms(N, (m / N) ** 0.5, digits + 15)
    curve = reg.get(N, min_order=need)
    policy = cmeval.PrecisionPolicy(digits=digits)
    ex = cmeval.eval_x(curve, pt, policy)
    ey = cmeval.eval_y(curve, pt, policy)
    msgs = []
    with mpmath.mp.workdps(digits + 10):
        for name, got, want in (("x", ex, xs), ("y", ey, ys)):
            decimals = len(want.split(".")[1])
            tol = mpmath.mpf(10) ** -(decimals - 2)
            diff = abs(got.value.real - mpmath.mpf(want)) + abs(got.value.imag)
            if diff > tol:
                msgs.append(f"{name}: computed {mpmath.nstr(got.value, decimals + 2)} vs "
                            f"vendored {want} (|diff| {mpmath.nstr(diff, 3)} > {mpmath.nstr(tol, 2)})")
    return "; ".join(msgs) or None


def _verify_pair_D(reg, N, dk):
    res = classfield.minpoly(classfield.MinPolyJob(N, dk), registry=reg)
    Mf = fixtures.appendix_minpoly(N, dk)
    if res.poly == Mf:
        return None
    return f"M(X) mismatch: computed {_short(res.poly)}, vendored {_short(Mf)}"


def _short(p):
    s = p.pretty()
    return s if len(s) < 70 else s[:67] + "..."


_DEFAULT_VERIFY_M = (2, 3)


def _cmd_verify(args):
    env = Envelope("verify", {"appendix": args.appendix, "level": args.level, "m": args.m})
    reg = _registry()
    app = args.appendix.upper()
    if app in ("A", "B", "C"):
        pairs = fixtures.appendix_pairs(app)
        pairs = [(m, N) for m, N in pairs
                 if (args.m is None and m in _DEFAULT_VERIFY_M) or m == args.m]
        if args.level is not None:
            pairs = [(m, N) for m, N in pairs if N == args.level]
        fn = {"A": _verify_pair_A, "B": _verify_pair_B, "C": _verify_pair_C}[app]
        keyf = lambda mn: (mn[1], mn[0])
    else:
        pairs = fixtures.appendix_pairs("D")
        if args.level is not None:
            pairs = [(N, dk) for N, dk in pairs if N == args.level]
        else:
            # default scope: the fast prime-level entries; larger ones by --level
            pairs = [(N, dk) for N, dk in pairs if (N, dk) in ((37, -3), (43, -3))]
        fn = _verify_pair_D
        keyf = lambda nd: nd
    if not pairs:
        raise UsageError("no fixture entries match the given filters")
    results = {}
    with ThreadPoolExecutor(max_workers=4) as pool:
        futs = {pool.submit(fn, reg, *pair): pair for pair in pairs}
        for fut, pair in futs.items():
            results[pair] = fut.result()
    lines = []
    failures = 0
    detail = {}
    for pair in sorted(pairs, key=keyf):
        msg = results[pair]
        label = (f"m={pair[0]} N={pair[1]}" if app in ("A", "B", "C")
                 else f"N={pair[0]} d_K={pair[1]}")
        if msg is None:
            lines.append(f"ok   appendix {app} {label}")
            detail[label] = "ok"
        else:
            failures += 1
            lines.append(f"FAIL appendix {app} {label}: {msg}")
            detail[label] = msg
    lines.append(f"{len(pairs) - failures}/{len(pairs)} entries verified")
    env.result["checked"] = len(pairs)
    env.result["failures"] = failures
    env.result["detail"] = detail
    env.emit(args.json, lines)
    return EXIT_MISMATCH if failures else EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="gamma0plus",
        description="Singular invariants of the canonical genus-one generators "
                    "x_N, y_N: modular polynomials, generating polynomials, CM "
                    "evaluations, and ring-class-field minimal polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit a JSON envelope")

    common(sub.add_parser("levels", help="list the 38 genus-one levels"))

    p = sub.add_parser("pq", help="the pair (P, Q) with Phi(x)=P(x)+y Q(x)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    common(p)

    p = sub.add_parser("phi", help="the modular polynomial Phi_{m,N}(X)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    common(p)

    p = sub.add_parser("genpoly", help="monic generating polynomial at i*sqrt(m/N)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--factor", action="store_true", help="also factor over Z")
    common(p)

    p = sub.add_parser("eval", help="evaluate x_N, y_N at a CM point")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--sqrt", type=int, help="use tau = i*sqrt(M/N)")
    p.add_argument("--form", help="positive definite form a,b,c; tau = its root")
    p.add_argument("--digits", type=int, default=30)
    common(p)

    p = sub.add_parser("minpoly", help="ring-class-field minimal polynomial M(X)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--dk", type=int, required=True)
    p.add_argument("--digits", type=int)
    p.add_argument("--force", action="store_true",
                   help="compute for composite level despite the prime-level statement")
    common(p)

    p = sub.add_parser("heegner", help="algebraic-integer points from form classes")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--dk", type=int, required=True)
    common(p)

    p = sub.add_parser("verify", help="recompute and diff against vendored fixtures")
    p.add_argument("--appendix", required=True, choices=list("ABCDabcd"))
    p.add_argument("--level", type=int)
    p.add_argument("--m", type=int)
    common(p)

    p = sub.add_parser("bootstrap", help="regenerate a level record from seed data")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    common(p)
    return ap


_DISPATCH = {
    "levels": _cmd_levels, "pq": _cmd_pq, "phi": _cmd_phi, "genpoly": _cmd_genpoly,
    "eval": _cmd_eval, "minpoly": _cmd_minpoly, "heegner": _cmd_heegner,
    "verify": _cmd_verify, "bootstrap": _cmd_bootstrap,
}


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return _DISPATCH[args.command](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (curvedata.UnknownLevelError,) as e:
        print(f"usage error: unknown level {e}", file=sys.stderr)
        return EXIT_USAGE
    except classfield.ClassFieldError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (curvedata.BootstrapError, curvedata.RecordError, modpoly.PipelineError,
            modpoly.InsufficientOrderError, genpoly.FactorError, genpoly.SelectionError,
            cmeval.ConvergenceError, classfield.PrecisionExhausted,
            quadforms.FormError, ArithmeticError) as e:
        print(f"computation failed: {e}", file=sys.stderr)
        return EXIT_FAILURE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
