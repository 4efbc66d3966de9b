"""Experiment registry: parameter schemas and per-item runners.

Every experiment is a list of independent items.  Item ``i`` draws all of its
randomness from ``item_seed(seed, i)``, so items can run in any order or in
parallel and the collected output stays the same.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import beck as beck_mod
from .corpus import (
    grid,
    incidence_config,
    item_seed,
    line_plus_noise,
    named,
    random_noncollinear,
    uniform_random_fp,
    uniform_random_lattice,
)
from .distances import dot_scaling_check, gk_ratio, lattice_report
from .errors import ConfigError
from .euclid_core import RatPoint, bound_report_cs_st, connecting_line_members, line_y_eq, transplanted_grid
from .euclid_projections import (
    covering_profile,
    exceptional_directions,
    sylvester_gallai_report,
    ungar_report,
)
from .ff_core import FieldSpec, FpFlat, FpSubspace, FpVec, is_prime
from .ff_exceptional import example_fullgrid, example_subfield, falconer_ff_report, radial_bound_report
from .ff_fourier import FpFunction, dft, dft_fast, flat_spectrum_expected, index_point, inverse_dft, plancherel_gap
from .furst import FurstConfig, dual_furst_verify, furst_verify, grid_example, j_count_triples, sharpness_ratio
from .reports import BLOCKING, TRACKED, ReportList, make_report

# parameter kinds ------------------------------------------------------------------


def _int(path, v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(path, f"expected an integer, got {v!r}")
    return v


def _nonneg(path, v):
    v = _int(path, v)
    if v < 0:
        raise ConfigError(path, f"expected a nonnegative integer, got {v}")
    return v


def _pos(path, v):
    v = _int(path, v)
    if v < 1:
        raise ConfigError(path, f"expected a positive integer, got {v}")
    return v


def _prime(path, v):
    v = _int(path, v)
    if not is_prime(v):
        raise ConfigError(path, f"expected a prime, got {v}")
    return v


def _fraction(path, v):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ConfigError(path, f"expected an integer or a 'num/den' string, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(path, f"not a rational number: {v!r}") from None


def _str(path, v):
    if not isinstance(v, str):
        raise ConfigError(path, f"expected a string, got {v!r}")
    return v


def _int_list(path, v):
    if not isinstance(v, list):
        raise ConfigError(path, f"expected a list of integers, got {v!r}")
    return [_pos(f"{path}[{i}]", x) for i, x in enumerate(v)]


def validate_params(schema: dict, params: Any, path: str = "params") -> dict:
    """Fill defaults and type-check ``params`` against ``schema``."""
    if params is None:
        params = {}
    if not isinstance(params, dict):
        raise ConfigError(path, "expected an object")
    for key in sorted(params):
        if key not in schema:
            raise ConfigError(f"{path}.{key}", f"unknown parameter; known: {', '.join(sorted(schema))}")
    out = {}
    for key, (kind, default) in schema.items():
        out[key] = kind(f"{path}.{key}", params[key]) if key in params else default
    return out


def _need(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ConfigError(path, message)


@dataclass(frozen=True)
class Experiment:
    name: str
    summary: str
    schema: dict
    count: Callable[[dict], int]
    run_item: Callable[[dict, int, int], ReportList]
    check: Callable[[dict], None] = lambda params: None

    def validate(self, params) -> dict:
        params = validate_params(self.schema, params)
        self.check(params)
        return params


def _size_range(params: dict, lo_default: int, hi_default: int) -> tuple[int, int]:
    lo = params["min_size"] or lo_default
    hi = params["max_size"] or hi_default
    return lo, hi


def _check_sizes(lo: int, hi: int, top: int | None = None, floor: int = 1) -> None:
    _need(lo >= floor, "params.min_size", f"must be at least {floor}")
    _need(lo <= hi, "params.max_size", f"must be at least min_size = {lo}")
    if top is not None:
        _need(hi <= top, "params.max_size", f"at most {top} points are available")


# finite fields ------------------------------------------------------------------------

FALCONER_SCHEMA = {
    "p": (_prime, 7), "n": (_pos, 2), "k": (_pos, 1), "sets": (_nonneg, 200),
    "min_size": (_nonneg, 0), "max_size": (_nonneg, 0), "C": (_fraction, Fraction(2)),
}


def _falconer_check(params):
    p, n, k = params["p"], params["n"], params["k"]
    _need(k < n, "params.k", f"need k < n = {n}")
    _check_sizes(*_size_range(params, 1, p**n), top=p**n)


def _falconer_item(params, i, seed):
    p, n = params["p"], params["n"]
    lo, hi = _size_range(params, 1, p**n)
    rng = random.Random(seed)
    X = uniform_random_fp(p, n, rng.randint(lo, hi), rng.getrandbits(64))
    return falconer_ff_report(X, params["k"], params["C"])


RADIAL_SCHEMA = {
    "p": (_prime, 17), "n": (_pos, 2), "sets": (_nonneg, 20), "min_size": (_nonneg, 0), "max_size": (_nonneg, 0),
}


def _radial_defaults(params):
    p, n = params["p"], params["n"]
    return _size_range(params, 8 * n * p ** (n - 1) + 1, p**n)


def _radial_check(params):
    _need(params["n"] >= 2, "params.n", "radial projections need n >= 2")
    lo, hi = _radial_defaults(params)
    _check_sizes(lo, hi, top=params["p"] ** params["n"])


def _radial_item(params, i, seed):
    p, n = params["p"], params["n"]
    lo, hi = _radial_defaults(params)
    rng = random.Random(seed)
    Y = uniform_random_fp(p, n, rng.randint(lo, hi), rng.getrandbits(64))
    return radial_bound_report(Y, FieldSpec(p), n)


FOURIER_SCHEMA = {"p": (_prime, 3), "n": (_pos, 2), "functions": (_nonneg, 100)}

FOURIER_IDS = ("fourier_plancherel", "fourier_inversion", "fourier_fast_agreement",
               "fourier_translation", "fourier_flat_spectrum")


def _fourier_check(params):
    _need(params["p"] ** params["n"] <= 4096, "params.n", "p^n above 4096 is too large for the dense transform")


def _fourier_item(params, i, seed):
    p, n = params["p"], params["n"]
    field = FieldSpec(p)
    N = p**n
    rng = np.random.default_rng(seed)
    scale = float(rng.integers(1, 100))
    f = FpFunction(field, n, scale * (rng.standard_normal(N) + 1j * rng.standard_normal(N)))
    tau = f.tolerance()
    F = dft(f)
    v = index_point(int(rng.integers(N)), p, n)
    phases = np.array([cmath.exp(2j * cmath.pi * field.dot(v, index_point(j, p, n)) / p) for j in range(N)])
    out = ReportList()
    common = {"p": p, "n": n, "tolerance": tau}

    def err(a, b):
        return Fraction(float(np.max(np.abs(a - b))))

    out.append(make_report(FOURIER_IDS[0], "Plancherel identity", Fraction(plancherel_gap(f, F)), Fraction(tau),
                           tier=BLOCKING, **common))
    out.append(make_report(FOURIER_IDS[1], "Fourier inversion", err(inverse_dft(F).values, f.values), Fraction(tau),
                           tier=BLOCKING, **common))
    out.append(make_report(FOURIER_IDS[2], "fast and reference transforms agree", err(dft_fast(f).values, F.values),
                           Fraction(tau), tier=BLOCKING, **common))
    out.append(make_report(FOURIER_IDS[3], "translation covariance", err(dft(f.translate(v)).values, phases * F.values),
                           Fraction(tau), tier=BLOCKING, shift=list(v), **common))
    # span of k random vectors; its dimension may come out below k
    k = int(rng.integers(0, n + 1))
    V = FpSubspace.span(field, n, [index_point(int(rng.integers(N)), p, n) for _ in range(k)])
    W = FpFlat.from_point(V, FpVec(index_point(int(rng.integers(N)), p, n), field))
    g = FpFunction.indicator(field, n, W.elements())
    out.append(make_report(FOURIER_IDS[4], "spectrum of a flat", err(dft(g).values, flat_spectrum_expected(W).values),
                           Fraction(g.tolerance()), tier=BLOCKING, p=p, n=n, k=V.k, tolerance=g.tolerance()))
    return out


# Euclidean incidences and projections -----------------------------------------------

INCIDENCE_SCHEMA = {
    "configs": (_nonneg, 500), "max_points": (_pos, 60), "max_lines": (_pos, 60), "extent": (_pos, 8),
    "grids": (_int_list, [3, 5, 7]),
}


def _incidence_item(params, i, seed):
    if i < params["configs"]:
        P, L = incidence_config(seed, params["max_points"], params["max_lines"], params["extent"])
        label = "random"
    else:
        P, L = transplanted_grid(params["grids"][i - params["configs"]])
        label = "transplanted_grid"
    cs, st = bound_report_cs_st(P, L)
    return ReportList([cs, st], notes=[] if L else [f"item {i}: no lines ({label})"])


EXCEPTIONAL_SCHEMA = {"sets": (_nonneg, 500), "min_size": (_nonneg, 3), "max_size": (_nonneg, 50), "extent": (_pos, 12)}


def _exceptional_check(params):
    _check_sizes(params["min_size"], params["max_size"], top=params["extent"] ** 2, floor=3)


def _exceptional_item(params, i, seed):
    rng = random.Random(seed)
    X = random_noncollinear(rng.randint(params["min_size"], params["max_size"]), rng.getrandbits(64), params["extent"])
    m = len(X)
    members = connecting_line_members(X)
    prof = covering_profile(X, members)
    E, reps = exceptional_directions(X, math.isqrt(m), prof)
    out = ReportList()
    out.append(make_report(
        "exceptional_floor_sqrt", "at most one direction below the square-root threshold", len(E), 1,
        tier=BLOCKING, size=m, s=math.isqrt(m),
    ))
    out.append(reps[0])
    _, reps = exceptional_directions(X, max(1, m // 2), prof)
    out.extend(r for r in reps[1:])
    out.append(sylvester_gallai_report(X, members))
    out.append(ungar_report(X, members))
    return out


# Beck family --------------------------------------------------------------------------

BECK_SCHEMA = {"sets": (_nonneg, 300), "max_size": (_pos, 40), "C": (_fraction, Fraction(64))}
ERDOS_BECK_SCHEMA = {"sets": (_nonneg, 300), "max_size": (_pos, 40), "c": (_fraction, Fraction(1, 4))}


def _beck_check(params):
    _need(params["max_size"] >= 4, "params.max_size", "must be at least 4")


def beck_corpus_item(i: int, seed: int, max_size: int) -> tuple[str, list[RatPoint]]:
    """Rotate through random, collinear-heavy and grid sets."""
    rng = random.Random(seed)
    kind = ("random", "collinear_heavy", "grid")[i % 3]
    if kind == "random":
        X = uniform_random_lattice(rng.randint(3, max_size), rng.getrandbits(64), extent=20)
    elif kind == "collinear_heavy":
        frac = rng.choice([Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(9, 10)])
        X = line_plus_noise(rng.randint(4, max_size), frac, rng.getrandbits(64))
    else:
        side = max(2, math.isqrt(max_size))
        w = rng.randint(2, side)
        h = rng.randint(2, max(2, max_size // w))
        X = grid(w, h)
    return kind, X


def _beck_item(params, i, seed):
    kind, X = beck_corpus_item(i, seed, params["max_size"])
    rep, diag = beck_mod.beck_report(X, params["C"])
    extra = dict(rep.params, corpus=kind, diagnostics=diag.to_dict())
    return ReportList([make_report(rep.bound_id, rep.anchor, rep.lhs, rep.rhs, constant=rep.constant,
                                   tier=rep.tier, **extra)])


def _erdos_beck_item(params, i, seed):
    kind, X = beck_corpus_item(i, seed, params["max_size"])
    rep = beck_mod.erdos_beck_report(X, params["c"])
    return ReportList([make_report(rep.bound_id, rep.anchor, rep.lhs, rep.rhs, constant=rep.constant,
                                   tier=rep.tier, corpus=kind, **rep.params)])


PINNED_SCHEMA = {
    "sets": (_nonneg, 100), "max_pins": (_pos, 8), "max_size": (_pos, 40), "containment_max": (_pos, 12),
    "samples": (_nonneg, 20),
}


def _pinned_check(params):
    _need(params["max_pins"] >= 3, "params.max_pins", "must be at least 3")
    _need(params["containment_max"] >= 3, "params.containment_max", "must be at least 3")


def _pinned_item(params, i, seed):
    rng = random.Random(seed)
    X = random_noncollinear(rng.randint(3, params["max_pins"]), rng.getrandbits(64))
    Y = uniform_random_lattice(rng.randint(1, params["max_size"]), rng.getrandbits(64), extent=12)
    out = ReportList()
    out.extend_from(beck_mod.pinned_radial_report(X, Y))
    Z = random_noncollinear(rng.randint(3, params["containment_max"]), rng.getrandbits(64), extent=6)
    out.append(beck_mod.two_directions_check(Z))
    limit = len(Z) - beck_mod.max_collinear(Z)
    out.append(beck_mod.radial_containment_check(Z, rng.randint(1, limit), rng.getrandbits(64), params["samples"]))
    return out


# Furstenberg ---------------------------------------------------------------------------

FURST_SCHEMA = {"s_min": (_pos, 2), "s_max": (_pos, 16), "t_factors": (_int_list, [1, 4, 16]),
                "random_configs": (_nonneg, 50)}


def _furst_check(params):
    _need(params["s_min"] >= 2, "params.s_min", "must be at least 2")
    _need(params["s_min"] <= params["s_max"], "params.s_max", "must be at least s_min")


def _furst_pairs(params):
    return [(s, f * s) for s in range(params["s_min"], params["s_max"] + 1) for f in params["t_factors"]]


def _furst_count(params):
    return len(_furst_pairs(params)) + params["random_configs"]


def _furst_item(params, i, seed):
    pairs = _furst_pairs(params)
    if i < len(pairs):
        cfg = grid_example(*pairs[i])
        label = "grid_example"
    else:
        rng = random.Random(seed)
        P = uniform_random_lattice(rng.randint(4, 40), rng.getrandbits(64), extent=7)
        rich = sorted((l, len(pts)) for l, pts in connecting_line_members(P).items())
        rng.shuffle(rich)
        chosen = rich[: rng.randint(1, len(rich))]
        s = max(2, min(k for _, k in chosen))
        cfg = FurstConfig(set(P), {l for l, _ in chosen}, s, len(chosen))
        label = "random"
    out = furst_verify(cfg)
    ratio = sharpness_ratio(cfg)
    return ReportList([make_report(r.bound_id, r.anchor, r.lhs, r.rhs, constant=r.constant, tier=r.tier,
                                   source=label, sharpness=f"{ratio:.6f}", **r.params) for r in out])


DUAL_SCHEMA = {"configs": (_nonneg, 100), "max_pins": (_pos, 10), "extra_lines": (_nonneg, 10)}


def _dual_check(params):
    _need(params["max_pins"] >= 2, "params.max_pins", "must be at least 2")


def _dual_item(params, i, seed):
    rng = random.Random(seed)
    pins = uniform_random_lattice(rng.randint(2, params["max_pins"]), rng.getrandbits(64), extent=6)
    lines = set(connecting_line_members(pins))
    for _ in range(rng.randint(0, params["extra_lines"])):
        x = rng.choice(pins)
        m = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        lines.add(line_y_eq(m, x.coords[1] - m * x.coords[0]))
    through = {x: sum(1 for l in lines if l.contains(x)) for x in pins}
    s, t = min(through.values()), len(pins)
    reps, J = dual_furst_verify(lines, pins, s, t)
    reps.append(make_report("j_count_oracle", "triple count matches direct enumeration",
                            abs(J - j_count_triples(lines, pins)), 0, tier=BLOCKING, J=J))
    return reps


# distances ---------------------------------------------------------------------------

DISTANCE_SCHEMA = {"p_max_2d": (_nonneg, 50), "p_max_3d": (_nonneg, 12), "gk_grids": (_int_list, [4, 8, 16])}


def _distance_items(params):
    return ([(p, 2) for p in range(1, params["p_max_2d"] + 1)] + [(p, 3) for p in range(1, params["p_max_3d"] + 1)]
            + [(k, None) for k in params["gk_grids"]])


def _distance_item(params, i, seed):
    a, n = _distance_items(params)[i]
    if n is not None:
        return ReportList([lattice_report(a, n)])
    if a < 2:
        return ReportList(notes=[f"item {i}: grid side {a} too small for the log ratio"])
    r = gk_ratio(grid(a))
    return ReportList([make_report("distinct_distance_ratio", "distinct distances against |X|/log|X|",
                                   Fraction(r.baseline), r.distances, tier=TRACKED, side=a, ratio_text=r.ratio)])


DOT_SCHEMA = {"triples": (_nonneg, 100), "max_size": (_pos, 30)}


def _dot_item(params, i, seed):
    rng = random.Random(seed)
    a = RatPoint.of(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), rng.randint(-9, 9))
    lam = Fraction(rng.choice([-1, 1]) * rng.randint(1, 20), rng.randint(1, 7))
    A = uniform_random_lattice(rng.randint(1, params["max_size"]), rng.getrandbits(64), extent=10)
    return ReportList([dot_scaling_check(a, lam, A)])


# named examples ------------------------------------------------------------------------

NAMED_SCHEMA = {"name": (_str, "subfield"), "p": (_prime, 3)}
NAMED_CHOICES = ("subfield", "fullgrid", "triangle", "unit_square", "near_pentagon", "general4")


def _named_check(params):
    _need(params["name"] in NAMED_CHOICES, "params.name", f"expected one of {', '.join(NAMED_CHOICES)}")


def _named_item(params, i, seed):
    name, p = params["name"], params["p"]
    if name == "subfield":
        return ReportList([example_subfield(p)[1]])
    if name == "fullgrid":
        return ReportList([example_fullgrid(p)[2]])
    X = named(name)
    members = connecting_line_members(X)
    return ReportList([sylvester_gallai_report(X, members), ungar_report(X, members)])


EXPERIMENTS: dict[str, Experiment] = {e.name: e for e in [
    Experiment("ff_falconer", "finite-field Falconer exceptional sets of random subsets of F_p^n",
               FALCONER_SCHEMA, lambda q: q["sets"], _falconer_item, _falconer_check),
    Experiment("ff_radial", "radial exceptional sets of large random subsets of F_p^n",
               RADIAL_SCHEMA, lambda q: q["sets"], _radial_item, _radial_check),
    Experiment("ff_fourier_identities", "Plancherel, inversion, translation and flat spectra",
               FOURIER_SCHEMA, lambda q: q["functions"], _fourier_item, _fourier_check),
    Experiment("euclid_incidence", "Cauchy-Schwarz and Szemeredi-Trotter on random configurations",
               INCIDENCE_SCHEMA, lambda q: q["configs"] + len(q["grids"]), _incidence_item),
    Experiment("exceptional_directions", "discrete projection statements for noncollinear planar sets",
               EXCEPTIONAL_SCHEMA, lambda q: q["sets"], _exceptional_item, _exceptional_check),
    Experiment("beck", "Beck dichotomy over random, collinear-heavy and grid sets",
               BECK_SCHEMA, lambda q: q["sets"], _beck_item, _beck_check),
    Experiment("erdos_beck", "connecting line counts against |X| (|X| - max collinear)",
               ERDOS_BECK_SCHEMA, lambda q: q["sets"], _erdos_beck_item, _beck_check),
    Experiment("pinned_radial", "pinned radial projections and the two-line containment",
               PINNED_SCHEMA, lambda q: q["sets"], _pinned_item, _pinned_check),
    Experiment("furstenberg", "primal Furstenberg bounds on grid examples and random configurations",
               FURST_SCHEMA, _furst_count, _furst_item, _furst_check),
    Experiment("dual_furstenberg", "triple-count chain for pins and line families",
               DUAL_SCHEMA, lambda q: q["configs"], _dual_item, _dual_check),
    Experiment("distances", "lattice distance counts and grid distance ratios",
               DISTANCE_SCHEMA, lambda q: len(_distance_items(q)), _distance_item),
    Experiment("dot_products", "scaling invariance of pinned dot-product sets",
               DOT_SCHEMA, lambda q: q["triples"], _dot_item),
    Experiment("named_example", "one named configuration",
               NAMED_SCHEMA, lambda q: 1, _named_item, _named_check),
]}


def run_item(name: str, params: dict, index: int, seed: int) -> ReportList:
    return EXPERIMENTS[name].run_item(params, index, item_seed(seed, index))
