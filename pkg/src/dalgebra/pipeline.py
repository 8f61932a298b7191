"""Residue assembly, functional-equation checks and batch orchestration."""
import json
import logging
import os
import re
import time
import traceback
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import gmpy2
from sympy import isprime

from .domain import RATIONAL, ZZ, from_modulus
from .errors import DAlgebraError, FormatError, NotFound
from .polyexpr import parse_poly
from .series import PowerSeries, reduce_mod
from .seriesio import read_series, read_series_with_name, write_series

log = logging.getLogger(__name__)


class SufficiencyWarning(UserWarning):
    """The prime product is too small to pin down coefficients of size 4^N."""


# ---------------------------------------------------------------- CRT

@dataclass
class ResidueBundle:
    primes: list
    residues: list           # residues[k][n] = c_n mod primes[k]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.primes = [int(p) for p in self.primes]
        if not self.primes:
            raise ValueError("a bundle needs at least one prime")
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be pairwise distinct")
        if len(self.residues) != len(self.primes):
            raise ValueError("one residue sequence per prime")
        lengths = {len(r) for r in self.residues}
        if len(lengths) != 1:
            raise ValueError("residue sequences have different lengths: %s" % sorted(lengths))

    @property
    def order(self):
        return len(self.residues[0]) - 1

    @property
    def modulus(self):
        M = 1
        for p in self.primes:
            M *= p
        return M

    def sufficient(self):
        """Does the product exceed 2 * 4^N, so every |c_n| < 4^N is recovered?"""
        return self.modulus > 2 * 4 ** self.order

    @classmethod
    def from_series(cls, F, primes):
        return cls(list(primes), [reduce_mod(F, p).coeffs for p in primes])

    @classmethod
    def from_files(cls, paths):
        """Residue files `<name>.p<prime>.res` in the shared series format."""
        primes, residues, names = [], [], set()
        for path in sorted(paths):
            F, name = read_series_with_name(path)
            dom = F.domain
            if not dom.is_modular or dom.r != 1:
                raise FormatError("residue files need a prime modulus", path)
            m = re.search(r"\.p(\d+)\.res$", os.path.basename(str(path)))
            if m and int(m.group(1)) != dom.p:
                raise FormatError("file name says p=%s, header says %d" % (m.group(1), dom.p), path)
            primes.append(dom.p)
            residues.append(F.coeffs)
            names.add(name)
        return cls(primes, residues, {"files": [str(p) for p in sorted(paths)],
                                      "names": sorted(n for n in names if n)})


def residue_path(directory, name, p):
    return os.path.join(directory, "%s.p%d.res" % (name, p))


def _crt_chunk(args):
    weights, M, half, columns = args
    out = []
    for col in columns:
        acc = gmpy2.mpz(0)
        for w, r in zip(weights, col):
            if r:
                acc += w * r
        acc %= M
        if acc > half:
            acc -= M
        out.append(int(acc))
    return out


def crt_combine(bundle, strict=False, workers=1):
    """Exact integer series whose coefficient n is the symmetric CRT lift.

    Values lie in (-M/2, M/2], M the product of the primes. An insufficient
    product (M <= 2 * 4^N) warns, or raises ValueError when strict.
    """
    if not bundle.sufficient():
        msg = ("prime product has %d bits, below the %d needed for %d terms"
               % (bundle.modulus.bit_length(), (2 * 4 ** bundle.order).bit_length(), bundle.order + 1))
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, SufficiencyWarning, stacklevel=2)
    M = gmpy2.mpz(bundle.modulus)
    half = M // 2
    weights = []
    for p in bundle.primes:
        Mi = M // p
        weights.append(Mi * gmpy2.invert(Mi % p, p))
    cols = list(zip(*bundle.residues))
    if workers > 1 and len(cols) > 1:
        step = -(-len(cols) // workers)
        chunks = [(weights, M, half, cols[i:i + step]) for i in range(0, len(cols), step)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_crt_chunk, chunks))
        coeffs = [c for part in parts for c in part]
    else:
        coeffs = _crt_chunk((weights, M, half, cols))
    return PowerSeries(ZZ, coeffs, bundle.order)


@dataclass
class PrimePlan:
    primes: list
    count: int
    bound_bits: int


def prime_plan(N, bits=15):
    """Descending primes below 2^bits until their product exceeds 2 * 4^N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    bound = 2 * 4 ** N
    primes = []
    prod = 1
    n = (1 << bits) - 1
    while prod <= bound:
        if n < 3:
            raise ValueError("ran out of %d-bit primes" % bits)
        if isprime(n):
            primes.append(n)
            prod *= n
        n -= 2 if n % 2 else 1
    return PrimePlan(primes, len(primes), bound.bit_length())


# ---------------------------------------------------------------- functional equations

@dataclass
class FunctionalEquation:
    """F(x^s) = a(x) F(x) + b(x) modulo `modulus` (a, b as coefficient lists)."""

    modulus: int
    s: int
    a: list
    b: list

    def __post_init__(self):
        if self.s < 2:
            raise ValueError("inner map x -> x^s needs s >= 2")
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        from_modulus(self.modulus)
        self.a = [int(c) % self.modulus for c in self.a]
        self.b = [int(c) % self.modulus for c in self.b]

    @classmethod
    def from_expr(cls, modulus, s, a, b):
        """a and b as polynomial text in x, e.g. from_expr(32, 2, "x", "8*x^3*(x-5)")."""
        def coeffs(text):
            poly = parse_poly(str(text), ("x",))
            out = [0] * (max((e[0] for e in poly), default=0) + 1)
            for (e,), c in poly.items():
                if c.denominator != 1:
                    raise FormatError("non-integer coefficient %s" % c)
                out[e] = int(c)
            return out
        return cls(modulus, s, coeffs(a), coeffs(b))


# the high-temperature susceptibility identity modulo 32
ISING_MOD32 = FunctionalEquation.from_expr(32, 2, "x", "8*x^3*(2*x^15 - x^7 + x - 5)")


def verify_funceq(F, eq):
    """Compare F(x^s) with a(x)F(x) + b(x) mod the modulus through order(F)."""
    from .report import ResidualReport
    m = eq.modulus
    if F.domain.is_modular and F.domain.modulus % m:
        raise ValueError("series known mod %d cannot be checked mod %d" % (F.domain.modulus, m))
    c = [int(v) % m for v in (_integral(F) if F.domain.kind == RATIONAL else F.coeffs)]
    N = len(c) - 1
    for n in range(N + 1):
        lhs = c[n // eq.s] if n % eq.s == 0 else 0
        rhs = eq.b[n] if n < len(eq.b) else 0
        for i, ai in enumerate(eq.a):
            if ai and i <= n:
                rhs += ai * c[n - i]
        if (lhs - rhs) % m:
            return ResidualReport(False, N, n, (lhs - rhs) % m)
    return ResidualReport(True, N)


def _integral(F):
    if not F.is_integral():
        raise ValueError("functional equations mod p^r need integer coefficients")
    return F.to_integer().coeffs


# ---------------------------------------------------------------- series plumbing

def ingest_series(path):
    return read_series(path)


def export_series(series, path, name=None):
    write_series(series, path, name)


def load_source(spec):
    """A series from a job description: {"file": path}, {"named": name, "N": n},
    {"tutte": q, "N": n, "normalized": bool}, {"recurrence": "divergent_c1"|"divergent_c2", "N": n}.
    An optional "modulus" reduces the result."""
    from .generators.named import named_construction
    from .generators.recurrence import convolution_series
    from .generators import tutte
    if "file" in spec:
        F = read_series(spec["file"])
    elif "named" in spec:
        F = named_construction(spec["named"], int(spec["N"]))
    elif "tutte" in spec:
        fn = tutte.tutte_normalized if spec.get("normalized") else tutte.tutte_series
        F = fn(spec["tutte"], int(spec["N"]))
    elif "recurrence" in spec:
        specs = {"divergent_c1": tutte.divergent_c1_spec, "divergent_c2": tutte.divergent_c2_spec}
        if spec["recurrence"] not in specs:
            raise ValueError("unknown recurrence %r" % spec["recurrence"])
        F = convolution_series(specs[spec["recurrence"]](), int(spec["N"]))
    else:
        raise ValueError("source needs one of file, named, tutte, recurrence")
    if spec.get("modulus"):
        F = reduce_mod(F, int(spec["modulus"]))
    elif F.domain.kind == RATIONAL and F.is_integral():
        F = F.to_integer()
    return F


# ---------------------------------------------------------------- batch jobs

def _job_generate(params):
    F = load_source(params["source"])
    out = params.get("out")
    if out:
        export_series(F, out, params.get("name"))
    return {"order": F.order, "head": [str(c) for c in F.coeffs[:8]]}, ([out] if out else [])


def _job_reduce(params):
    F = load_source(params["source"])
    G = reduce_mod(F, int(params["modulus"]))
    out = params.get("out")
    if out:
        export_series(G, out, params.get("name"))
    return {"head": G.coeffs[:12]}, ([out] if out else [])


def _job_guess_algebraic(params):
    from .algebraic.bipoly import BivariatePoly, write_poly
    from .algebraic.guess import GuessBudget, guess_algebraic
    F = load_source(params["source"])
    if "prime" in params:
        F = reduce_mod(F, int(params["prime"]))
    budget = GuessBudget(**params.get("budget", {}))
    P = guess_algebraic(F, budget)
    result = {"degrees": list(P.degrees), "poly": P.pretty(), "verified_through": P.info["verified_through"]}
    if "expect" in params:
        Q = BivariatePoly.from_expr(params["expect"], P.modulus)
        result["matches_expected"] = P.same_up_to_unit(Q)
    if "expect_degrees" in params:
        result["matches_expected_degrees"] = list(P.degrees) == list(params["expect_degrees"])
    out = params.get("out")
    if out:
        write_poly(P, out)
    return result, ([out] if out else [])


def _job_guess_ade(params):
    from .ade.forms import AdeForm
    from .ade.guess import guess_ade, guess_ade_auto, guess_ade_modular
    F = load_source(params["source"])
    T = int(params.get("T", 10))
    if params.get("form", "auto") == "auto":
        rel = guess_ade_auto(F, T, exclusions=params.get("exclusions", ()))
    else:
        form = AdeForm(*params["form"])
        rel = guess_ade_modular(F, form, T) if F.domain.is_modular else guess_ade(F, form, T)
    return {"form": [rel.form.m, rel.form.k, rel.form.d], "relation": rel.pretty()}, []


def _job_analyze(params):
    from . import analytic
    mode = params.get("mode", "radius")
    if mode == "xc":
        return {"xc": analytic.transcendental_critical_point()}, []
    F = load_source(params["source"])
    if mode == "radius":
        est = analytic.radius_estimate(F, params.get("method", "ratio"))
        return {"growth": float(est.growth), "radius": float(est.radius),
                "spread": float(est.spread), "sign_pattern": est.sign_pattern}, []
    if mode == "borel":
        c, rep = analytic.borel_asymptotics(F, params.get("N_used"))
        return rep, []
    if mode == "diffpade":
        specs = [tuple(s) for s in params.get("approximants", [[4, 24], [8, 14]])]
        _, reports = analytic.diff_pade_scan(F, specs)
        return {"dominant": [str(r.dominant.location) if r.dominant else None for r in reports]}, []
    raise ValueError("unknown analyze mode %r" % mode)


def _job_verify(params):
    F = load_source(params["source"])
    if "funceq" in params:
        fe = params["funceq"]
        eq = FunctionalEquation(int(fe["modulus"]), int(fe.get("s", 2)), fe["a"], fe["b"])
        rep = verify_funceq(F, eq)
    elif "poly" in params:
        from .algebraic.bipoly import BivariatePoly
        from .algebraic.guess import verify_algebraic
        P = BivariatePoly.from_expr(params["poly"], int(params["modulus"]))
        rep = verify_algebraic(reduce_mod(F, P.modulus), P)
    elif "ade" in params:
        from .ade.relation import relation_from_expression, verify_ade
        rel = relation_from_expression(params["ade"], int(params["k"]), params.get("params"))
        rep = verify_ade(F, rel)
    else:
        raise ValueError("verify job needs funceq, poly or ade")
    return {"passed": rep.passed, "report": str(rep)}, []


JOB_KINDS = {
    "generate": _job_generate,
    "reduce": _job_reduce,
    "guess-algebraic": _job_guess_algebraic,
    "guess-ade": _job_guess_ade,
    "analyze": _job_analyze,
    "verify": _job_verify,
}


def run_job(job):
    """Run one manifest entry; never raises."""
    t0 = time.time()
    jid = str(job.get("id", "?"))
    kind = job.get("kind")
    row = {"id": jid, "kind": kind, "artifacts": []}
    try:
        if kind not in JOB_KINDS:
            raise ValueError("unknown job kind %r" % kind)
        result, artifacts = JOB_KINDS[kind](job.get("params", {}))
        row.update(status="ok", result=result, artifacts=artifacts)
        if result.get("passed") is False or result.get("matches_expected") is False \
                or result.get("matches_expected_degrees") is False:
            row["status"] = "fail"
    except NotFound as exc:
        row.update(status="not-found", certificate=exc.certificate)
    except (DAlgebraError, ValueError, KeyError, TypeError, OSError, ZeroDivisionError) as exc:
        row.update(status="error", error="%s: %s" % (type(exc).__name__, exc))
        log.debug("job %s failed:\n%s", jid, traceback.format_exc())
    row["seconds"] = round(time.time() - t0, 3)
    return row


def load_manifest(path):
    """JSON object {"jobs": [{"id", "kind", "params"}...], "workers": optional int}."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError("manifest is not valid JSON: %s" % exc, path, exc.lineno)
    if isinstance(data, list):
        data = {"jobs": data}
    if not isinstance(data, dict) or not isinstance(data.get("jobs", []), list):
        raise FormatError("manifest must be an object with a 'jobs' list", path)
    ids = [str(j.get("id")) for j in data.get("jobs", [])]
    if len(set(ids)) != len(ids):
        raise FormatError("duplicate job ids", path)
    return data


def run_batch(manifest, workers=None):
    """Run every job (concurrently up to `workers`); report rows sorted by id.

    `manifest` is a path or an already-loaded dict. The summary counts jobs
    per status; `errors` is nonzero iff some job raised a real error.
    """
    data = load_manifest(manifest) if isinstance(manifest, (str, os.PathLike)) else manifest
    jobs = list(data.get("jobs", []))
    workers = int(workers or data.get("workers", 1))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(run_job, jobs))
    else:
        rows = [run_job(j) for j in jobs]
    rows.sort(key=lambda r: r["id"])
    summary = {}
    for r in rows:
        summary[r["status"]] = summary.get(r["status"], 0) + 1
    return {"jobs": rows, "summary": summary, "errors": summary.get("error", 0)}
