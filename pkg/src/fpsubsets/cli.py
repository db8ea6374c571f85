"""Command-line driver.

Subcommands: measure | complexity | verify | construct | expsum | curve.
Every run emits a manifest (config echo, version, timings, result, digest)
as canonical JSON, or CSV for histogram-style tables.  Exit codes: 0 all
checks passed, 1 a mathematical assertion failed, 2 invalid input or
budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import random
import re
import sys
import time

import numpy as np

from . import complexity as cx
from . import curves, expsums, kernels, poly, report, subsets
from .errors import BudgetError, CheckFailure, HypothesisError
from .fields import ExtField, PrimeField, is_prime

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(X|x)?(?:\^(\d+))?", re.ASCII)


def parse_poly(expr: str, p: int) -> list:
    """Parse 'X^2+3X+1', '2X+6', 'coeffs:1,0,2' (lowest degree first)."""
    expr = expr.strip()
    if expr.startswith("coeffs:"):
        cs = [int(t) % p for t in expr[len("coeffs:"):].split(",")]
        return poly.strip(cs)
    coeffs: dict[int, int] = {}
    pos = 0
    seen = False
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {expr[pos:]!r}")
        sign, digits, var, exp = m.groups()
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = int(exp) if exp else (1 if var else 0)
        if not var and not digits:
            raise ValueError(f"empty term in {expr!r}")
        coeffs[e] = (coeffs.get(e, 0) + c) % p
        pos = m.end()
        seen = True
    if not seen:
        raise ValueError(f"empty polynomial {expr!r}")
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return poly.strip(out)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t != ""]


def _require_prime(p: int) -> int:
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime >= 3, got {p}")
    return p


def _small_primes(limit: int) -> list[int]:
    return [p for p in range(3, limit + 1) if is_prime(p)]


def _random_instance(p: int, k: int, rng: random.Random) -> curves.BilinearInstance:
    b = tuple(rng.sample(range(p), k))
    c = tuple(rng.sample(range(p), k))
    d = tuple(rng.choice(range(1, p)) for _ in range(k))
    return curves.BilinearInstance(p=p, b=b, c=c, d=d)


# ---------------------------------------------------------------------------
# subcommand handlers (each returns the result payload)
# ---------------------------------------------------------------------------

def cmd_measure(args) -> dict:
    p = _require_prime(args.p)
    spec = subsets.parse_subset_spec(args.subset)
    S = subsets.realize(spec, p)
    f = parse_poly(args.poly, p)
    R = subsets.construct_R(f, S, p)
    w = subsets.measure_W(R)
    result = {
        "p": p,
        "poly": f,
        "subset": args.subset,
        "S_size": len(S),
        "R": sorted(R),
        "R_size": len(R),
        "W": {"value": w.value, "argmax": w.argmax},
    }
    for k in args.k or []:
        ck = subsets.measure_Ck(R, k)
        result[f"C{k}"] = {"value": ck.value, "argmax": ck.argmax}
    return result


def cmd_complexity(args) -> dict:
    p = _require_prime(args.p)
    S = subsets.realize(subsets.parse_subset_spec(args.subset), p)
    fam = cx.Family(args.family, args.d)
    rep = cx.complexity_exact(fam, S, p, args.kmax)
    result = {
        "p": p, "family": args.family, "d": args.d,
        "subset": args.subset, "S": sorted(S),
        "K": rep.K, "partial": rep.capped, "k_max": rep.k_max,
        "failing_partition": rep.failing_partition,
        "witness_samples": [
            {"B": w.B, "C": w.C, "witness": w.witness, "index": w.index}
            for w in rep.witness_samples
        ],
        "scanned_members": rep.scanned_members,
    }
    if args.family == "P3":
        clamp = cx.k3_upper_clamp(p, args.d)
        result["k3_clamp"] = clamp
        if rep.K > clamp:
            raise CheckFailure(f"K3 = {rep.K} exceeds the clamp {clamp}")
    return result


def cmd_construct(args) -> dict:
    p = _require_prime(args.p)
    S = subsets.realize(subsets.parse_subset_spec(args.subset), p)
    Sset = set(S)
    if args.sweep:
        from itertools import combinations

        cases: dict[str, int] = {}
        total = 0
        for A in combinations(range(p), args.d + 2):
            for bits in range(1 << (args.d + 2)):
                B = {A[i] for i in range(args.d + 2) if bits >> i & 1}
                C = set(A) - B
                g, tr = cx.theorem4_construct(B, C, Sset, p, args.d)
                cases[tr.case] = cases.get(tr.case, 0) + 1
                total += 1
        return {
            "p": p, "d": args.d, "subset": args.subset,
            "sweep_constructions": total,
            "branch_counts": cases,
            "all_verified": True,
            "certifies": f"K2(S, {args.d}) >= {args.d + 2}",
        }
    B = _int_list(args.B or "")
    C = _int_list(args.C or "")
    g, tr = cx.theorem4_construct(set(B), set(C), Sset, p, args.d)
    return {
        "p": p, "d": args.d, "subset": args.subset, "B": sorted(B), "C": sorted(C),
        "polynomial": g, "trace": tr, "verified": True,
    }


def cmd_expsum(args) -> dict:
    p = _require_prime(args.p)
    if args.kind == "eq5":
        val = expsums.inverse_complete_sum(args.a, p)
        return {"kind": "eq5", "p": p, "a": args.a, "value": val,
                "expected": -1.0, "pass": abs(val + 1) <= 1e-8}
    if args.kind == "ehn":
        fld = PrimeField(p) if args.n == 1 else ExtField(p, args.n)
        rng = random.Random(args.seed)
        s = args.s
        if args.n == 1:
            evec = rng.sample(range(p), s)
            dvec = [rng.choice(range(1, p)) for _ in range(s)]
        else:
            idxs = rng.sample(range(fld.order), s)
            evec = [fld.from_index(i) for i in idxs]
            dvec = [fld.from_index(rng.choice(range(1, fld.order))) for _ in range(s)]
        val = expsums.ehn_sum(dvec, evec, fld)
        return {"kind": "ehn", "p": p, "n": args.n, "s": s, "seed": args.seed,
                "value": val, "bound": (2 * s - 2) * math.sqrt(p**args.n) + 1,
                "pass": True}
    if args.kind == "eq4":
        h = _int_list(args.h)
        rows = tuple(tuple(_int_list(r)) for r in args.bmat.split(";"))
        excl = frozenset(_int_list(args.exclude or ""))
        spec = expsums.SumSpec4(h=tuple(h), b=rows, excluded=excl)
        val = expsums.expsum_eq4(spec, p)
        return {"kind": "eq4", "p": p, "h": h, "b": rows,
                "excluded": sorted(excl), "value": val}
    raise ValueError(f"unknown expsum kind {args.kind}")


def _instance_from_args(args, rng) -> curves.BilinearInstance:
    if args.b and args.c and args.dvec:
        return curves.BilinearInstance(
            p=args.p, b=tuple(_int_list(args.b)), c=tuple(_int_list(args.c)),
            d=tuple(_int_list(args.dvec)),
        )
    return _random_instance(args.p, args.k, rng)


def cmd_curve(args) -> dict:
    p = _require_prime(args.p)
    rng = random.Random(args.seed)
    inst = _instance_from_args(args, rng)
    base = {"p": p, "n": args.n, "k": inst.k, "b": inst.b, "c": inst.c, "d": inst.d,
            "seed": args.seed}
    if args.op == "sum":
        val = curves.bilinear_sum(inst, threads=args.threads)
        return base | {"op": "sum", "value": val}
    if args.op == "hist":
        hist = curves.histogram_Nn(inst, args.n, threads=args.threads)
        return base | {"op": "hist", "counts": hist.counts,
                       "mass": int(hist.counts.sum()), "max": int(hist.counts.max())}
    if args.op == "prop2":
        return base | {"op": "prop2"} | curves.prop2_verify(inst, args.n, threads=args.threads)
    if args.op == "rel9":
        return base | {"op": "rel9"} | curves.relation9_verify(inst, args.n)
    if args.op == "phi":
        return base | {"op": "phi"} | curves.phi_identity_verify(inst, args.n)
    if args.op == "newton":
        shifted, _, _ = inst.shifted()
        rep = curves.newton_check(shifted, args.lam)
        return base | {"op": "newton", "report": rep}
    if args.op == "exceptional":
        return base | {"op": "exceptional"} | curves.exceptional_lambdas(inst, args.n)
    if args.op == "dev16":
        return base | {"op": "dev16"} | curves.deviation_crosscheck(inst, args.n, threads=args.threads)
    raise ValueError(f"unknown curve op {args.op}")


def _verify_eq5(args) -> dict:
    worst = 0.0
    checked = 0
    for p in _small_primes(args.pmax):
        fld = PrimeField(p)
        inv = fld.inv_table()
        table = expsums.ep_table(p)
        a = np.arange(1, p, dtype=np.int64)
        idx = (a[:, None] * inv[None, 1:]) % p
        sums = table[idx].sum(axis=1)
        worst = max(worst, float(np.abs(sums + 1).max()))
        checked += p - 1
    passed = worst <= 1e-8
    if not passed:
        raise CheckFailure(f"complete inverse sums deviate from -1 by {worst}")
    return {"check": "eq5", "pmax": args.pmax, "pairs": checked,
            "worst_error": worst, "pass": True}


def _verify_thm5(args) -> dict:
    rng = random.Random(args.seed)
    prime_pool = _small_primes(499)
    ext_pool = [p for p in _small_primes(37) if p * p <= 1369]
    fields: dict = {}
    worst_ratio = 0.0
    for s in (1, 2, 3):
        for _ in range(args.trials):
            if rng.random() < 0.8:
                p = rng.choice(prime_pool)
                key = (p, 1)
                fld = fields.setdefault(key, PrimeField(p))
                if s > p:
                    continue
                evec = rng.sample(range(p), s)
                dvec = [rng.choice(range(1, p)) for _ in range(s)]
                while all(d % p == 0 for d in dvec):
                    dvec = [rng.choice(range(1, p)) for _ in range(s)]
            else:
                p = rng.choice(ext_pool)
                key = (p, 2)
                fld = fields.setdefault(key, ExtField(p, 2))
                idxs = rng.sample(range(fld.order), s)
                evec = [fld.from_index(i) for i in idxs]
                dvec = [fld.from_index(rng.choice(range(1, fld.order))) for _ in range(s)]
            q = fld.order
            val = expsums.ehn_sum(dvec, evec, fld)   # raises on violation
            bound = (2 * s - 2) * math.sqrt(q) + 1
            worst_ratio = max(worst_ratio, abs(val) / bound)
    return {"check": "thm5", "trials_per_s": args.trials, "seed": args.seed,
            "worst_ratio": worst_ratio, "violations": 0, "pass": True}


def _verify_thm2(args) -> dict:
    rng = random.Random(args.seed)
    rows = []
    for _ in range(args.trials):
        inst = _random_instance(args.p, args.k, rng)
        rep = curves.bilinear_vs_histogram(inst, threads=args.threads)
        rows.append({"b": inst.b, "c": inst.c, "d": inst.d, "error": rep["error"]})
    return {"check": "thm2", "p": args.p, "k": args.k, "trials": args.trials,
            "seed": args.seed, "worst_error": max(r["error"] for r in rows),
            "instances": rows, "pass": True}


def _verify_prop2(args) -> dict:
    rng = random.Random(args.seed)
    worst = 0
    for _ in range(args.trials):
        inst = _random_instance(args.p, args.k, rng)
        rep = curves.prop2_verify(inst, args.n, threads=args.threads)
        worst = max(worst, rep["exception_count"])
    _, K = curves.prop2_constants(args.k)
    return {"check": "prop2", "p": args.p, "n": args.n, "k": args.k,
            "trials": args.trials, "seed": args.seed,
            "worst_exception_count": worst, "K": K, "pass": True}


def _verify_fourier(args) -> dict:
    worst = 0.0
    for p in _small_primes(args.pmax):
        for beta in ("0.1", "0.3", "0.5", "0.7"):
            fc = expsums.fourier_coeffs(beta, p)
            worst = max(worst, fc.max_reconstruction_error())
    if worst > 1e-6:
        raise CheckFailure(f"indicator reconstruction error {worst} > 1e-6")
    return {"check": "fourier", "pmax": args.pmax, "worst_error": worst, "pass": True}


def _verify_cs(args) -> dict:
    rng = random.Random(args.seed)
    for _ in range(args.trials):
        size = rng.randint(1, args.p - 1)
        S = set(rng.sample(range(args.p), size))
        expsums.cauchy_schwarz_bound_check(S, args.p)
    return {"check": "cs", "p": args.p, "trials": args.trials, "seed": args.seed,
            "pass": True}


def _verify_lemma3(args) -> dict:
    rng = random.Random(args.seed)
    p = args.p
    fld = PrimeField(p)
    orders = [o for o in range(2, p) if (p - 1) % o == 0]
    for _ in range(args.trials):
        dprime = rng.choice(orders)
        chi = expsums.character_of_order(p, dprime)
        nroots = rng.randint(1, 4)
        roots = rng.sample(range(p), nroots)
        factors = [([(-r) % p, 1], rng.randint(1, 3)) for r in roots]
        if all(m % dprime == 0 for _, m in factors):
            factors[0] = (factors[0][0], factors[0][1] + 1)
        expsums.weil_lemma3_check(factors, chi, p)
    return {"check": "lemma3", "p": p, "trials": args.trials, "seed": args.seed,
            "violations": 0, "pass": True}


def _verify_greenruzsa(args) -> dict:
    checked = 0
    for p in _small_primes(min(args.pmax, 11)):
        for m1 in range(1, 1 << p):
            S1 = {i for i in range(p) if m1 >> i & 1}
            for m2 in range(1, 1 << p):
                S2 = {i for i in range(p) if m2 >> i & 1}
                cx.green_ruzsa_verify(S1, S2, p)
                checked += 1
    rng = random.Random(args.seed)
    for _ in range(args.trials):
        s1 = set(rng.sample(range(args.p), rng.randint(1, args.p - 1)))
        s2 = set(rng.sample(range(args.p), rng.randint(1, args.p - 1)))
        cx.green_ruzsa_verify(s1, s2, args.p)
        checked += 1
    return {"check": "greenruzsa", "exhaustive_pmax": min(args.pmax, 11),
            "random_trials": args.trials, "p": args.p, "checked": checked,
            "pass": True}


def cmd_verify(args) -> dict:
    handlers = {
        "eq5": _verify_eq5,
        "thm5": _verify_thm5,
        "thm2": _verify_thm2,
        "prop2": _verify_prop2,
        "fourier": _verify_fourier,
        "cs": _verify_cs,
        "lemma3": _verify_lemma3,
        "greenruzsa": _verify_greenruzsa,
    }
    if args.check in handlers:
        return handlers[args.check](args)
    if args.check == "orthogonality":
        reports = [expsums.orthogonality_check(p) for p in _small_primes(args.pmax)]
        return {"check": "orthogonality", "pmax": args.pmax,
                "worst_error": max(r["worst_error"] for r in reports), "pass": True}
    if args.check == "rel9":
        rng = random.Random(args.seed)
        inst = _instance_from_args(args, rng)
        return {"check": "rel9"} | curves.relation9_verify(inst, args.n)
    if args.check == "phi":
        rng = random.Random(args.seed)
        inst = _instance_from_args(args, rng)
        return {"check": "phi"} | curves.phi_identity_verify(inst, args.n)
    if args.check == "eq16":
        rng = random.Random(args.seed)
        inst = _instance_from_args(args, rng)
        return {"check": "eq16"} | curves.deviation_crosscheck(inst, args.n, threads=args.threads)
    if args.check == "lemma1":
        return {"check": "lemma1"} | expsums.lemma1_decomposition_check(
            args.h, args.bpole, args.d, args.p
        )
    if args.check == "t2id":
        S = subsets.realize(subsets.parse_subset_spec(args.subset), args.p)
        B = _int_list(args.B or "")
        C = _int_list(args.C or "")
        return {"check": "t2id"} | cx.t2_character_identity_check(S, args.d, B, C, args.p)
    if args.check == "thm1":
        return {"check": "thm1"} | cx.theorem1_condition(args.p, args.beta, args.d, args.k)
    if args.check == "thm1scan":
        return {"check": "thm1scan"} | cx.theorem1_crossover_scan(args.beta, args.d, args.k)
    raise ValueError(f"unknown verify check {args.check!r}")


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fpsubsets")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the manifest to this path")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--budget", type=int, default=None,
                        help="advisory work cap echoed into the manifest")

    sp = sub.add_parser("measure", help="subset measures W and C_k")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--subset", required=True)
    sp.add_argument("--k", type=int, action="append")
    common(sp)

    sp = sub.add_parser("complexity", help="exact family complexity")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--family", choices=("P1", "P2", "P3"), required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--subset", required=True)
    sp.add_argument("--kmax", type=int, default=6)
    common(sp)

    sp = sub.add_parser("verify", help="bound and identity checks")
    sp.add_argument("check", choices=(
        "eq5", "thm5", "thm2", "prop2", "rel9", "phi", "eq16", "fourier",
        "orthogonality", "cs", "lemma3", "lemma1", "greenruzsa", "t2id",
        "thm1", "thm1scan",
    ))
    sp.add_argument("--p", type=int, default=101)
    sp.add_argument("--pmax", type=int, default=499)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--h", type=int, default=1)
    sp.add_argument("--bpole", type=int, default=0)
    sp.add_argument("--beta", default="0.5")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--b"), sp.add_argument("--c"), sp.add_argument("--dvec")
    sp.add_argument("--B"), sp.add_argument("--C")
    sp.add_argument("--subset", default="interval:1:3")
    common(sp)

    sp = sub.add_parser("construct", help="squarefree witness constructor")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--subset", required=True)
    sp.add_argument("--B"), sp.add_argument("--C")
    sp.add_argument("--sweep", action="store_true")
    common(sp)

    sp = sub.add_parser("expsum", help="exponential sums")
    sp.add_argument("--kind", choices=("eq5", "ehn", "eq4"), required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--h", default="1")
    sp.add_argument("--bmat", default="0")
    sp.add_argument("--exclude", default="")
    common(sp)

    sp = sub.add_parser("curve", help="bilinear sums and level-set histograms")
    sp.add_argument("--op", choices=("sum", "hist", "prop2", "rel9", "phi",
                                     "newton", "exceptional", "dev16"), required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--b"), sp.add_argument("--c"), sp.add_argument("--dvec")
    sp.add_argument("--lam", type=int, default=1)
    common(sp)
    return ap


_HANDLERS = {
    "measure": cmd_measure,
    "complexity": cmd_complexity,
    "verify": cmd_verify,
    "construct": cmd_construct,
    "expsum": cmd_expsum,
    "curve": cmd_curve,
}


def _emit_csv(result: dict, out) -> None:
    w = csv.writer(out)
    if "counts" in result:
        w.writerow(["lambda", "count"])
        for lam, cnt in enumerate(result["counts"]):
            w.writerow([lam, int(cnt)])
    elif "per_t" in result:
        w.writerow(["t", "lhs", "rhs"])
        for row in result["per_t"]:
            w.writerow([row["t"], row["lhs"], row["rhs"]])
    else:
        w.writerow(["key", "value"])
        for k, v in sorted(report.canonicalize(result).items()):
            w.writerow([k, v])


def _has_failure(obj) -> bool:
    if isinstance(obj, dict):
        if obj.get("pass") is False:
            return True
        return any(_has_failure(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_has_failure(v) for v in obj)
    return False


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}
    t0 = time.time()
    try:
        result = _HANDLERS[args.command](args)
    except (BudgetError, HypothesisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1
    timings = {"wall_seconds": time.time() - t0}
    if args.format == "csv":
        buf = io.StringIO()
        _emit_csv(result, buf)
        payload = buf.getvalue()
    else:
        payload = report.canonical_json(report.manifest(config, result, timings))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + ("\n" if not payload.endswith("\n") else ""))
    else:
        print(payload)
    return 1 if _has_failure(result) else 0


if __name__ == "__main__":
    sys.exit(main())
