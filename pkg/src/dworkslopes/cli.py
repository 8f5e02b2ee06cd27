"""Command-line driver: run the predicted / brute-force / Dwork routes and
report how they compare.

Exit codes: 0 match (or prefix-match), 1 mismatch, 2 hypothesis failed,
3 budget or precision exhausted, 4 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional

from . import dwork, lemma_lab
from .cache import SumCache, default_cache_dir
from .eisenstein import PrecisionError
from .exact import INF, is_prime
from .lfunction import (
    DEFAULT_ENUMERATION_CAP,
    BudgetExceeded,
    CurveConfig,
    l_coefficients,
    exp_sum,
)
from .polygons import compare_polygons, gap_and_transfer, lower_hull, predict_theorem2

logger = logging.getLogger(__name__)

ROUTES = ("predict", "lfun", "dwork", "lemma", "verify")
FORMATS = ("json", "csv", "table")
EXIT_CODES = {"match": 0, "prefix-match": 0, "mismatch": 1, "hypothesis-failed": 2, "incomplete": 3}
EXIT_INVALID = 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int
    d: int
    h: int = 1
    M: int = 1
    a: tuple = (1,)
    route: str = "verify"
    max_m: Optional[int] = None
    trunc: Optional[int] = None
    guard: int = 6
    precision: Optional[int] = None
    threads: int = 1
    fmt: str = "json"
    cache_dir: Optional[str] = None
    use_cache: bool = True
    enum_cap: int = DEFAULT_ENUMERATION_CAP

    def validate(self) -> CurveConfig:
        if not is_prime(self.p):
            raise ConfigError(f"p = {self.p} is not prime")
        if self.d < 2:
            raise ConfigError("d must be at least 2")
        if self.d % self.p == 0:
            raise ConfigError(f"p = {self.p} divides d = {self.d}")
        if self.h < 1 or self.M < 1:
            raise ConfigError("h and the character level must be positive")
        if self.route not in ROUTES:
            raise ConfigError(f"unknown route {self.route!r}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}")
        if len(self.a) > self.h:
            raise ConfigError(f"a has {len(self.a)} coefficients but F_q has degree {self.h}")
        if self.max_m is not None and self.max_m < 0:
            raise ConfigError("max-m must be nonnegative")
        try:
            return CurveConfig.make(self.p, self.h, self.d, self.a, self.M)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def frac(x):
    """[numerator, denominator], or None for an infinite valuation."""
    if x is INF:
        return None
    x = Fraction(x)
    return [x.numerator, x.denominator]


@dataclass
class VerifyReport:
    config: RunConfig
    curve: CurveConfig
    hypotheses: list = field(default_factory=list)
    predicted_slopes: tuple = ()
    gap: Optional[dict] = None
    bruteforce: Optional[dict] = None
    dwork: Optional[dict] = None
    lemma: Optional[list] = None
    verdict: Optional[str] = None
    errors: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        c = self.config
        return {
            "schema": 1,
            "input": {
                "p": c.p,
                "d": c.d,
                "h": c.h,
                "M": c.M,
                "a": list(self.curve.a.coeffs),
                "modulus": list(self.curve.field.modulus),
                "route": c.route,
            },
            "hypotheses": [{"name": x.name, "pass": x.passed, "detail": x.detail} for x in self.hypotheses],
            "predicted_slopes": [frac(s) for s in self.predicted_slopes],
            "gap": self.gap,
            "bruteforce": self.bruteforce,
            "dwork": self.dwork,
            "lemma": self.lemma,
            "verdict": self.verdict,
            "errors": self.errors,
            "stats": self.stats,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @property
    def exit_code(self) -> int:
        if self.verdict is None:
            return 0
        return EXIT_CODES[self.verdict]


# ---------------------------------------------------------------------------
# routes


def _run_bruteforce(cfg: RunConfig, curve: CurveConfig, cache) -> dict:
    D = curve.degree
    upto = D if cfg.max_m is None else min(D, cfg.max_m)
    kwargs = dict(cap=cfg.enum_cap, workers=cfg.threads, cache=cache)
    sums = [exp_sum(curve, m, **kwargs) for m in range(1, upto + 1)]
    coeffs = l_coefficients(sums) if sums else l_coefficients_trivial(curve)
    if upto == D and coeffs[D].is_zero():
        raise ArithmeticError(f"c_{D} vanishes: the L-polynomial has degree below {D}")
    from .cyclotomic import cyclo_valuation

    vals = [cyclo_valuation(c) for c in coeffs]
    vals = [v if v is INF else v / curve.h for v in vals]
    poly = lower_hull(list(enumerate(vals)))
    return {
        "complete": upto == D,
        "max_index": upto,
        "degree": D,
        "coeff_valuations": [[i, frac(v)] for i, v in enumerate(vals)],
        "slopes": [frac(s) for s in poly.slopes],
        "_polygon": poly,
    }


def l_coefficients_trivial(curve):
    from .cyclotomic import CyclotomicInt

    return [CyclotomicInt.from_int(curve.p, curve.M, 1)]


def default_precision(d: int, p: int, h: int, guard: int) -> int:
    need = dwork.hodge_cutoff(d, d + 1, h) + Fraction(guard, p - 1)
    return max(d + 2, ceil(need) + 1)


def _run_dwork(cfg: RunConfig, curve: CurveConfig) -> dict:
    d, p, h = curve.d, curve.p, curve.h
    s_max = d + 1
    needed = dwork.required_truncation(d, s_max, h)
    n = cfg.trunc if cfg.trunc is not None else max(dwork.default_truncation(d), needed)
    N = cfg.precision or default_precision(d, p, h, cfg.guard)
    for attempt in range(4):
        try:
            data = dwork.dwork_setup(curve, N, cfg.guard)
            A1 = dwork.build_matrix(data, n)
            minors = [dwork.principal_minor_valuation(A1, range(s + 1)) for s in range(d)]
            zhu = dwork.check_zhu_hypothesis(A1, d)
            Ah = dwork.matrix_product_frobenius(A1, h)
            fred = dwork.fredholm_coeffs(Ah, s_max)
            break
        except PrecisionError:
            if attempt == 3:
                raise
            logger.info("precision %d insufficient, retrying at %d", N, 2 * N)
            N *= 2
    slopes = dwork.slopes_below_one(fred, h)
    return {
        "precision": N,
        "guard": cfg.guard,
        "truncation": n,
        "minor_valuations": [[s, frac(v)] for s, v in enumerate(minors)],
        "fredholm_valuations": [[c.s, frac(c.valuation / h), c.exact] for c in fred],
        "slopes_below_one": [frac(s) for s in slopes],
        "zhu": [
            {"i": z.i, "lower": frac(z.lower), "value": frac(z.value), "upper": frac(z.upper), "pass": z.passed}
            for z in zhu.checks
        ],
        "zhu_row_bound": zhu.row_bound_ok,
        "_slopes": slopes,
    }


def _run_lemma(cfg: RunConfig, curve: CurveConfig) -> list:
    d, p = curve.d, curve.p
    a = cfg.a[0] if curve.h == 1 else 1
    rows = []
    for s in range(1, d):
        rep = lemma_lab.verify_factorizations(d, p, a, s)
        value, v = lemma_lab.det_and_valuation(lemma_lab.build_M(d, p, a, s), p)
        rows.append({"s": s, "a": a, "det": frac(value), "valuation": frac(v), "ok": rep.ok, "failures": rep.failures})
    return rows


def run_verify(cfg: RunConfig) -> VerifyReport:
    curve = cfg.validate()
    t0 = time.perf_counter()
    rep = VerifyReport(cfg, curve)
    pred = predict_theorem2(curve.d, curve.p, curve.h, curve.M)
    rep.hypotheses = list(pred.hypotheses)
    rep.predicted_slopes = pred.slopes
    g = gap_and_transfer(pred, curve.d, curve.p, curve.h)
    rep.gap = {"gap": frac(g.gap), "bound": frac(g.bound), "within_bound": g.within_bound, "transfer_ok": g.transfer_ok}

    cache = SumCache(cfg.cache_dir or default_cache_dir(), enabled=cfg.use_cache)
    route = cfg.route
    verdicts = []
    prefix = False

    if route in ("lfun", "verify"):
        try:
            bf = _run_bruteforce(cfg, curve, cache)
            poly = bf.pop("_polygon")
            rep.bruteforce = bf
            if bf["complete"]:
                verdicts.append(compare_polygons(pred.polygon(), poly).match)
            else:
                prefix = True
                verdicts.append(compare_polygons(pred.polygon(), poly, prefix_upto=bf["max_index"]).match)
        except (BudgetExceeded, ArithmeticError) as exc:
            rep.errors.append({"route": "lfun", "error": type(exc).__name__, "detail": str(exc)})

    if route in ("dwork", "verify"):
        if curve.M != 1:
            rep.errors.append({"route": "dwork", "error": "Unsupported", "detail": "Dwork route covers M = 1 only"})
        else:
            try:
                dw = _run_dwork(cfg, curve)
                slopes = dw.pop("_slopes")
                rep.dwork = dw
                verdicts.append(tuple(slopes) == tuple(pred.slopes))
                verdicts.append(all(z["pass"] for z in dw["zhu"]) and dw["zhu_row_bound"])
            except (PrecisionError, dwork.TruncationError) as exc:
                rep.errors.append({"route": "dwork", "error": type(exc).__name__, "detail": str(exc)})

    if route in ("lemma", "verify"):
        try:
            rep.lemma = _run_lemma(cfg, curve)
            verdicts.append(all(r["ok"] for r in rep.lemma))
        except ValueError as exc:
            rep.errors.append({"route": "lemma", "error": type(exc).__name__, "detail": str(exc)})

    fatal = [e for e in rep.errors if e["error"] != "Unsupported" and e["route"] != "lemma"]
    if route == "predict":
        rep.verdict = None if pred.hypotheses_hold else "hypothesis-failed"
    elif route == "lemma":
        rep.verdict = "match" if verdicts and all(verdicts) else "mismatch"
    elif not pred.hypotheses_hold:
        rep.verdict = "hypothesis-failed"
    elif fatal:
        rep.verdict = "incomplete"
    elif all(verdicts):
        rep.verdict = "prefix-match" if prefix else "match"
    else:
        rep.verdict = "mismatch"
    rep.stats = {
        "seconds": round(time.perf_counter() - t0, 3),
        "cache_hits": cache.hits,
        "cache_misses": cache.misses,
    }
    return rep


# ---------------------------------------------------------------------------
# rendering


def render_csv(rep: VerifyReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["route", "index", "num", "den"])
    rows = [("predicted", rep.predicted_slopes and [frac(s) for s in rep.predicted_slopes])]
    if rep.bruteforce:
        rows.append(("bruteforce", rep.bruteforce["slopes"]))
    if rep.dwork:
        rows.append(("dwork", rep.dwork["slopes_below_one"]))
    for route, slopes in rows:
        for i, s in enumerate(slopes or []):
            w.writerow([route, i, s[0], s[1]])
    return buf.getvalue()


def _dec(x):
    return "inf" if x is None else f"{x[0] / x[1]:.6f}"


def render_table(rep: VerifyReport) -> str:
    c = rep.config
    lines = [f"p={c.p} d={c.d} h={c.h} M={c.M} a={list(rep.curve.a.coeffs)} route={c.route}"]
    for hyp in rep.hypotheses:
        lines.append(f"  [{'ok' if hyp.passed else 'FAIL'}] {hyp.name} ({hyp.detail})")
    lines.append("predicted : " + " ".join(_dec(frac(s)) for s in rep.predicted_slopes))
    if rep.bruteforce:
        tag = "" if rep.bruteforce["complete"] else f" (c_0..c_{rep.bruteforce['max_index']})"
        lines.append("bruteforce: " + " ".join(_dec(s) for s in rep.bruteforce["slopes"]) + tag)
    if rep.dwork:
        lines.append("dwork     : " + " ".join(_dec(s) for s in rep.dwork["slopes_below_one"]))
    for e in rep.errors:
        lines.append(f"  error in {e['route']}: {e['error']}: {e['detail']}")
    lines.append(f"verdict   : {rep.verdict or '-'}")
    return "\n".join(lines) + "\n"


def render(rep: VerifyReport) -> str:
    if rep.config.fmt == "csv":
        return render_csv(rep)
    if rep.config.fmt == "table":
        return render_table(rep)
    return rep.to_json() + "\n"


def _parse_a(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coefficient vector {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dworkslopes",
        description="Newton-polygon slopes of L-functions of x^d + a x^(d-1), by prediction, "
        "brute force and Dwork's trace formula.",
    )
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--d", type=int, required=True)
    ap.add_argument("--h", type=int, default=1)
    ap.add_argument("--a", type=_parse_a, default=(1,), help="integer (h = 1) or comma-separated coefficients")
    ap.add_argument("--chi-level", type=int, default=1, dest="M", help="character of order p^M")
    ap.add_argument("--route", choices=ROUTES, default="verify")
    ap.add_argument("--max-m", type=int, default=None, help="largest m for which S_m is enumerated")
    ap.add_argument("--trunc", type=int, default=None, help="Dwork matrix truncation")
    ap.add_argument("--guard", type=int, default=6, help="precision guard in pi-digits")
    ap.add_argument("--precision", type=int, default=None, help="p-adic working precision N")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--format", choices=FORMATS, default="json", dest="fmt")
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--no-cache", action="store_true")
    ap.add_argument("--enum-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    cfg = RunConfig(
        p=args.p,
        d=args.d,
        h=args.h,
        M=args.M,
        a=args.a,
        route=args.route,
        max_m=args.max_m,
        trunc=args.trunc,
        guard=args.guard,
        precision=args.precision,
        threads=args.threads,
        fmt=args.fmt,
        cache_dir=args.cache_dir,
        use_cache=not args.no_cache,
        enum_cap=args.enum_cap,
    )
    try:
        rep = run_verify(cfg)
    except ConfigError as exc:
        print(f"dworkslopes: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = render(rep)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
