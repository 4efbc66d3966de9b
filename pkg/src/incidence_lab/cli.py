"""Command line front end: ``lab run``, ``lab corpus`` and ``lab list-experiments``.

Experiment configs and corpus specs are JSON objects::

    {"experiment": "ff_falconer", "params": {"p": 7}, "seed": 1, "output": "out/falconer.jsonl"}
    {"generator": "grid", "params": {"width": 10}, "seed": 0, "count": 1, "output": "corpus/"}

``run`` writes one JSON object per report (plus ``{"item", "note"}`` records)
and a CSV summary next to it.  Exit status: 0 when every blocking report
holds, 1 when one fails, 2 on a config or size-limit error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import caps, geomio
from .corpus import grid, item_seed, line_plus_noise, named, uniform_random_fp, uniform_random_lattice
from .errors import ConfigError, DomainError, SizeLimitError
from .experiments import EXPERIMENTS, _fraction, _nonneg, _pos, _prime, _str, run_item, validate_params
from .ff_core import FieldSpec

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2
SEED_LIMIT = 1 << 64


def _seed(path, v):
    if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < SEED_LIMIT:
        raise ConfigError(path, f"expected an integer in [0, 2^64), got {v!r}")
    return v


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(str(path), f"cannot read: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}", f"invalid JSON: {e.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(str(path), "top level must be an object")
    return data


def _check_keys(data: dict, allowed: set, where: str = "") -> None:
    for key in sorted(data):
        if key not in allowed:
            raise ConfigError(f"{where}{key}", f"unknown field; known: {', '.join(sorted(allowed))}")


# experiments ---------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict
    seed: int = 0
    output: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        _check_keys(data, {"experiment", "params", "seed", "output"})
        name = data.get("experiment")
        if name not in EXPERIMENTS:
            raise ConfigError("experiment", f"expected one of {', '.join(sorted(EXPERIMENTS))}, got {name!r}")
        params = EXPERIMENTS[name].validate(data.get("params"))
        seed = _seed("seed", data.get("seed", 0))
        output = data.get("output")
        if output is not None and not isinstance(output, str):
            raise ConfigError("output", "expected a file path string")
        return cls(name, params, seed, output)


def _work(args):
    name, params, index, seed, cap = args
    caps.set_default_cap(cap)
    reps = run_item(name, params, index, seed)
    return [r.to_dict() for r in reps], list(reps.notes), [r.blocking and not r.holds for r in reps]


def _ratio_text(v) -> str:
    return "" if v is None else f"{float(Fraction(v)):.6f}"


def summarize(records: list[dict]) -> str:
    """CSV with one row per bound_id in first-seen order."""
    rows: dict[str, dict] = {}
    for rec in records:
        if "bound_id" not in rec:
            continue
        row = rows.setdefault(rec["bound_id"], {"instances": 0, "violations": 0, "max": None, "min": None})
        row["instances"] += 1
        row["violations"] += not rec["holds"]
        ratio = rec["params"].get("ratio")
        if ratio is not None:
            r = Fraction(ratio)
            row["max"] = r if row["max"] is None else max(row["max"], r)
            row["min"] = r if row["min"] is None else min(row["min"], r)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bound_id", "instances", "violations", "max_ratio", "min_ratio"])
    for bid, row in rows.items():
        w.writerow([bid, row["instances"], row["violations"], _ratio_text(row["max"]), _ratio_text(row["min"])])
    return buf.getvalue()


def summary_path(out: Path) -> Path:
    return out.with_name(out.stem + ".summary.csv")


def run_experiment(cfg: ExperimentConfig, out: Path | None = None, jobs: int = 1) -> tuple[int, list[dict]]:
    """Run every item, write the report and summary files, return (exit status, records)."""
    exp = EXPERIMENTS[cfg.experiment]
    cap = caps.resolve_cap()
    tasks = [(cfg.experiment, cfg.params, i, cfg.seed, cap) for i in range(exp.count(cfg.params))]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_work, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_work(t) for t in tasks]
    records: list[dict] = []
    failed = False
    for i, (reps, notes, blocking_failures) in enumerate(results):
        for d in reps:
            records.append({"item": i, **d})
        records.extend({"item": i, "note": n} for n in notes)
        failed = failed or any(blocking_failures)
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in records))
        summary_path(out).write_text(summarize(records))
    return (EXIT_VIOLATION if failed else EXIT_OK), records


# corpora --------------------------------------------------------------------------------

GENERATOR_SCHEMAS = {
    "uniform_random_fp": {"p": (_prime, 5), "n": (_pos, 2), "min_size": (_pos, 12), "max_size": (_nonneg, 0)},
    "uniform_random_lattice": {"n": (_pos, 2), "extent": (_pos, 20), "min_size": (_pos, 20), "max_size": (_nonneg, 0)},
    "line_plus_noise": {"frac": (_fraction, Fraction(3, 4)), "extent": (_pos, 40), "min_size": (_pos, 20),
                        "max_size": (_nonneg, 0)},
    "grid": {"width": (_pos, 10), "height": (_nonneg, 0)},
    "named": {"name": (_str, "triangle")},
}


@dataclass
class CorpusSpec:
    generator: str
    params: dict
    seed: int = 0
    count: int = 1
    output: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusSpec":
        _check_keys(data, {"generator", "params", "seed", "count", "output"})
        gen = data.get("generator")
        if gen not in GENERATOR_SCHEMAS:
            raise ConfigError("generator", f"expected one of {', '.join(sorted(GENERATOR_SCHEMAS))}, got {gen!r}")
        params = validate_params(GENERATOR_SCHEMAS[gen], data.get("params"))
        if "max_size" in params:
            params["max_size"] = params["max_size"] or params["min_size"]
            if params["max_size"] < params["min_size"]:
                raise ConfigError("params.max_size", f"must be at least min_size = {params['min_size']}")
        if gen == "line_plus_noise" and not 0 <= params["frac"] <= 1:
            raise ConfigError("params.frac", "must lie in [0, 1]")
        count = _pos("count", data.get("count", 1))
        output = data.get("output")
        if output is not None and not isinstance(output, str):
            raise ConfigError("output", "expected a directory path string")
        return cls(gen, params, _seed("seed", data.get("seed", 0)), count, output)


def corpus_item(spec: CorpusSpec, index: int) -> geomio.GeometryConfig:
    """The index-th configuration; a pure function of (spec, index)."""
    q = spec.params
    seed = item_seed(spec.seed, index)
    rng = random.Random(seed)
    size = rng.randint(q["min_size"], q["max_size"]) if "min_size" in q else None
    meta = {"generator": spec.generator, "seed": spec.seed, "index": index}
    try:
        if spec.generator == "uniform_random_fp":
            pts = uniform_random_fp(q["p"], q["n"], size, rng.getrandbits(64))
            return geomio.from_points(pts, params=meta, field=FieldSpec(q["p"]))
        if spec.generator == "uniform_random_lattice":
            pts = uniform_random_lattice(size, rng.getrandbits(64), q["extent"], q["n"])
        elif spec.generator == "line_plus_noise":
            pts = line_plus_noise(size, q["frac"], rng.getrandbits(64), q["extent"])
            meta["on_line"] = round(q["frac"] * size)
        elif spec.generator == "grid":
            pts = grid(q["width"], q["height"] or q["width"])
        else:
            pts = named(q["name"])
    except DomainError as e:
        raise ConfigError("params", str(e)) from None
    return geomio.from_points(pts, params=meta)


def generate_corpus(spec: CorpusSpec, out: Path) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(spec.count):
        path = out / f"{spec.generator}_{i:04d}.geom"
        geomio.write(path, corpus_item(spec, i))
        paths.append(path)
    return paths


# argument handling ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lab", description="Exact incidence and projection experiments.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--out", help="override the output path")
    run.add_argument("--cap", type=int, help="size cap for enumerations")
    run.add_argument("--jobs", type=int, default=1, help="worker processes")
    corpus = sub.add_parser("corpus", help="generate configuration files")
    corpus.add_argument("spec")
    corpus.add_argument("--seed", type=int)
    corpus.add_argument("--out")
    sub.add_parser("list-experiments", help="show experiment names and parameters")
    return ap


def _describe(schema: dict) -> str:
    def show(v):
        return str(v) if not isinstance(v, list) else "[" + ",".join(map(str, v)) + "]"

    return " ".join(f"{k}={show(d)}" for k, (_, d) in schema.items())


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-experiments":
            for name, exp in EXPERIMENTS.items():
                print(f"{name}: {exp.summary}")
                print(f"    {_describe(exp.schema)}")
            return EXIT_OK
        if args.command == "corpus":
            data = _load_json(args.spec)
            if args.seed is not None:
                data["seed"] = args.seed
            spec = CorpusSpec.from_dict(data)
            out = args.out or spec.output
            if out is None:
                raise ConfigError("output", "no output directory given")
            paths = generate_corpus(spec, Path(out))
            print(f"wrote {len(paths)} files to {out}")
            return EXIT_OK
        if args.cap is not None:
            if args.cap < 1:
                raise ConfigError("--cap", "must be positive")
            caps.set_default_cap(args.cap)
        if args.jobs < 1:
            raise ConfigError("--jobs", "must be positive")
        data = _load_json(args.config)
        if args.seed is not None:
            data["seed"] = args.seed
        cfg = ExperimentConfig.from_dict(data)
        out = args.out or cfg.output
        status, records = run_experiment(cfg, Path(out) if out else None, args.jobs)
        reports = [r for r in records if "bound_id" in r]
        bad = sum(1 for r in reports if not r["holds"] and r["params"]["tier"] == "blocking")
        tracked = sum(1 for r in reports if not r["holds"] and r["params"]["tier"] != "blocking")
        print(f"{cfg.experiment}: {len(reports)} reports, {bad} blocking violations, {tracked} tracked exceedances")
        if out is None:
            sys.stdout.write(summarize(records))
        return status
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SizeLimitError as e:
        print(f"size limit: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
