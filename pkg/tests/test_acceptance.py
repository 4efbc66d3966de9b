"""Exit criteria.  Each test is timed against its limit; conftest prints one
PASS/FAIL line per criterion at the end of the run."""

import itertools
import json
import time
from contextlib import contextmanager

import pytest

from incidence_lab.cli import main
from incidence_lab.corpus import incidence_config, item_seed
from incidence_lab.euclid_core import (
    dualize,
    dualize_line,
    incidences,
    rich_points,
    rich_points_via_duality,
    shear_nonvertical,
)
from incidence_lab.experiments import EXPERIMENTS
from incidence_lab.ff_core import FieldSpec, enumerate_subspaces
from incidence_lab.ff_exceptional import example_fullgrid, example_subfield
from incidence_lab.furst import grid_example, sharpness_ratio

crit = pytest.mark.acceptance


@contextmanager
def within(seconds):
    t0 = time.perf_counter()
    yield
    took = time.perf_counter() - t0
    assert took < seconds, f"took {took:.1f}s, limit {seconds}s"


_runs: dict[str, tuple] = {}


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


def lab(workdir, cfg):
    """Run a config through the CLI once per session; returns (rc, reports, jsonl bytes, csv bytes)."""
    key = json.dumps(cfg, sort_keys=True)
    if key not in _runs:
        _runs[key] = _lab_fresh(workdir, cfg, f"run{len(_runs):02d}")
    return _runs[key]


def _lab_fresh(workdir, cfg, stem):
    cfg_path = workdir / f"{stem}.json"
    cfg_path.write_text(json.dumps(cfg))
    out = workdir / f"{stem}.jsonl"
    rc = main(["run", str(cfg_path), "--out", str(out)])
    data = out.read_bytes()
    reps = [json.loads(l) for l in data.decode().splitlines()]
    reps = [r for r in reps if "bound_id" in r]
    return rc, reps, data, (workdir / f"{stem}.summary.csv").read_bytes()


def violations(reps, ids=None, blocking_only=False):
    return [r for r in reps
            if not r["holds"] and (ids is None or r["bound_id"] in ids)
            and (not blocking_only or r["params"]["tier"] == "blocking")]


def q_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@crit(1, title="affine line census, p in {2,3,5,7}")
def test_affine_line_census():
    with within(1):
        for p in (2, 3, 5, 7):
            lines = enumerate_subspaces(FieldSpec(p), 2, 1, affine=True)
            assert len(lines) == p * p + p
            assert len(set(lines)) == len(lines)
            assert all(sum(1 for _ in W.elements()) == p for W in lines)


@crit(2, title="Grassmannian census, p in {2,3}, n <= 4")
def test_grassmannian_census():
    with within(5):
        for p, n in itertools.product((2, 3), range(1, 5)):
            for k in range(n + 1):
                subs = enumerate_subspaces(FieldSpec(p), n, k)
                assert len(subs) == len(set(subs)) == q_binomial(n, k, p), (p, n, k)


FOURIER_SPACES = [(p, n) for p in (2, 3, 5, 7) for n in range(1, 9) if p**n <= 343]


@crit(3, title="Fourier identities, 100 functions per (p, n) with p^n <= 343")
def test_fourier_identities(workdir):
    with within(30):
        for p, n in FOURIER_SPACES:
            rc, reps, _, _ = lab(workdir, {"experiment": "ff_fourier_identities",
                                           "params": {"p": p, "n": n, "functions": 100}, "seed": 3})
            assert rc == 0 and len(reps) == 500 and not violations(reps), (p, n)


@crit(4, title="finite-field Falconer, p in {5,7,11}, 200 sets each")
def test_falconer(workdir):
    with within(60):
        for p in (5, 7, 11):
            rc, reps, _, _ = lab(workdir, {"experiment": "ff_falconer",
                                           "params": {"p": p, "n": 2, "k": 1, "sets": 200}, "seed": 4})
            assert rc == 0 and reps and not violations(reps)
            assert all(r["params"]["tier"] == "blocking" for r in reps)


@crit(5, title="full-grid sharpness, p in {3,5,7}")
def test_fullgrid():
    with within(5):
        for p in (3, 5, 7):
            P, L, rep = example_fullgrid(p)
            assert rep.lhs == p**3 == rep.rhs


@crit(6, title="subfield counterexample count in F_9^2")
def test_subfield():
    with within(5):
        _, rep = example_subfield(3)
        assert rep.lhs == 3, f"found {rep.lhs} exceptional directions: {rep.params['directions']}"


@crit(7, title="finite-field radial bounds at p = 17")
def test_ff_radial(workdir):
    with within(60):
        rc, reps, _, _ = lab(workdir, {"experiment": "ff_radial",
                                       "params": {"p": 17, "sets": 20, "min_size": 273, "max_size": 289}, "seed": 7})
        high_low = [r for r in reps if r["bound_id"] == "ff_radial_highlow"]
        assert rc == 0 and high_low and not violations(reps)
        assert {r["item"] for r in high_low} == set(range(20))
        rc, reps, _, _ = lab(workdir, {"experiment": "ff_radial",
                                       "params": {"p": 17, "sets": 50, "min_size": 102, "max_size": 289}, "seed": 8})
        lpv = [r for r in reps if r["bound_id"] == "ff_radial_lpv"]
        assert rc == 0 and not violations(reps)
        assert {r["item"] for r in lpv} == set(range(50))


@crit(8, title="Cauchy-Schwarz and Szemeredi-Trotter on 500 configurations and grids")
def test_euclid_incidence(workdir):
    with within(60):
        rc, reps, _, _ = lab(workdir, {"experiment": "euclid_incidence",
                                       "params": {"configs": 500, "grids": [3, 5, 7, 11]}, "seed": 8})
        assert rc == 0 and len(reps) == 2 * 504 and not violations(reps)
        grids = [r for r in reps if r["item"] >= 500 and r["bound_id"] == "cauchy_schwarz_incidences"]
        assert [r["lhs"] for r in grids] == [p**3 for p in (3, 5, 7, 11)]


@crit(9, title="point-line duality on 200 configurations")
def test_duality():
    with within(10):
        for i in range(200):
            P, L = incidence_config(item_seed(9, i), 20, 20)
            _, P, L = shear_nonvertical(P, L, seed=i)
            for x in P:
                assert dualize_line(dualize(x)) == x
            for l in L:
                assert dualize(dualize_line(l)) == l
            dP = {x: dualize(x) for x in P}
            dL = {l: dualize_line(l) for l in L}
            before = incidences(P, L)
            after = incidences(set(dL.values()), set(dP.values()))
            assert before.total == after.total
            assert all(l.contains(x) == dP[x].contains(dL[l]) for x in P for l in L)
            for r in (2, 3):
                assert rich_points_via_duality(L, r) == rich_points(L, r)


@crit(10, title="discrete projection statements on 500 noncollinear sets")
def test_exceptional_directions(workdir):
    with within(60):
        rc, reps, _, _ = lab(workdir, {"experiment": "exceptional_directions",
                                       "params": {"sets": 500, "max_size": 50}, "seed": 10})
        assert rc == 0
        for bid in ("exceptional_floor_sqrt", "sylvester_gallai", "ungar_directions"):
            got = [r for r in reps if r["bound_id"] == bid]
            assert len(got) == 500 and not violations(got), bid


@crit(11, title="Beck suite: C* = 64, Erdos-Beck 1/4, pinned radial 1/2, two directions")
def test_beck_suite(workdir):
    with within(120):
        rc, reps, _, _ = lab(workdir, {"experiment": "beck", "params": {"sets": 300, "C": 64}, "seed": 11})
        assert rc == 0 and len(reps) == 300
        assert {r["params"]["corpus"] for r in reps} == {"random", "collinear_heavy", "grid"}
        assert not violations(reps), violations(reps)[:1]
        rc, reps, _, _ = lab(workdir, {"experiment": "erdos_beck", "params": {"sets": 300, "c": "1/4"}, "seed": 11})
        assert rc == 0 and len(reps) == 300 and not violations(reps)
        rc, reps, _, _ = lab(workdir, {"experiment": "pinned_radial", "params": {"sets": 100}, "seed": 11})
        assert rc == 0
        pinned = [r for r in reps if r["bound_id"] == "pinned_radial_noncollinear"]
        assert len(pinned) == 100 and all(r["params"]["constant"] == "1/2" for r in pinned)
        assert not violations(pinned)
        two = [r for r in reps if r["bound_id"] == "pinned_two_directions"]
        assert len(two) == 100 and not violations(two)
        assert not violations(reps, {"radial_containment"})


@crit(12, title="Furstenberg bounds, J-count oracle, grid sharpness over s in [2, 16]")
def test_furstenberg(workdir):
    with within(60):
        rc, reps, _, _ = lab(workdir, {"experiment": "furstenberg",
                                       "params": {"s_min": 2, "s_max": 16, "random_configs": 100}, "seed": 12})
        assert rc == 0
        exact = [r for r in reps if r["bound_id"] == "furstenberg_exact"]
        assert len(exact) == 15 * 3 + 100 and not violations(exact)
        rc, reps, _, _ = lab(workdir, {"experiment": "dual_furstenberg", "params": {"configs": 100}, "seed": 12})
        assert rc == 0 and not violations(reps, blocking_only=True)
        oracle = [r for r in reps if r["bound_id"] == "j_count_oracle"]
        assert len(oracle) == 100 and all(r["lhs"] == 0 for r in oracle)
        ratios = [sharpness_ratio(grid_example(s, f * s)) for s in range(2, 17) for f in (1, 4, 16)]
        assert max(ratios) <= 4 and min(ratios) > 0


@crit(13, title="lattice distance bound and dot-product scaling")
def test_distances(workdir):
    with within(30):
        rc, reps, _, _ = lab(workdir, {"experiment": "distances",
                                       "params": {"p_max_2d": 50, "p_max_3d": 12, "gk_grids": []}, "seed": 13})
        assert rc == 0 and len(reps) == 62 and not violations(reps)
        rc, reps, _, _ = lab(workdir, {"experiment": "dot_products", "params": {"triples": 100}, "seed": 13})
        assert rc == 0 and len(reps) == 100 and all(r["lhs"] == 0 for r in reps)


@crit(14, title="byte-identical reruns of every experiment")
def test_determinism(workdir):
    with within(600):
        # one config per experiment: the one an earlier criterion ran, else the defaults
        chosen = {}
        for key in _runs:
            cfg = json.loads(key)
            chosen.setdefault(cfg["experiment"], cfg)
        for name in EXPERIMENTS:
            chosen.setdefault(name, {"experiment": name, "seed": 14})
        assert set(chosen) == set(EXPERIMENTS)
        for i, name in enumerate(sorted(chosen)):
            cfg = chosen[name]
            first = lab(workdir, cfg)
            again = _lab_fresh(workdir, cfg, f"rerun{i:02d}")
            assert first[2] == again[2] and first[3] == again[3], cfg
            assert first[0] == again[0]
