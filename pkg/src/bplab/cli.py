"""Experiment runner and command line interface.

Configs are JSON documents; trials are the unit of parallel work, each one
owning the stream whose id is its trial index, and aggregation is a
deterministic fold over sorted trial indices, so reports are bit-identical
for a given (config, seed) regardless of worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import spectra
from .hermitian import sample_P_many
from .nonhermitian import sample_L_many, symmetrized_singular_law
from .levy import LevyTriple, is_symmetric, triple_from_spec
from .rng import RngStream
from .sphere import sample_sphere_vectors
from .spectra import (
    EmpiricalDistribution,
    GridSpec,
    esd,
    empirical_moments,
    cauchy_sup_distance,
    psi_image_moments,
    reference_moments,
    marchenko_pastur,
)

__all__ = ["ExperimentConfig", "Report", "run", "projection_experiment", "main"]


class ConfigError(ValueError):
    """Invalid experiment config; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    model: str  # "hermitian" | "nonhermitian"
    triple_spec: dict
    dims: tuple[int, ...]
    trials_per_dim: int
    seed: int
    moments_kmax: int | None = None
    histogram_bins: int | None = None
    cauchy_distance_target: dict | None = None
    inner_cut: float | None = None

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("$", "config must be an object")
        model = doc.get("model")
        if model not in ("hermitian", "nonhermitian"):
            raise ConfigError("model", "must be 'hermitian' or 'nonhermitian'")
        if "triple" not in doc:
            raise ConfigError("triple", "missing")
        dims = doc.get("dims")
        if not isinstance(dims, list) or not dims or dims != sorted(dims) or any(
            not isinstance(d, int) or d < 1 for d in dims
        ):
            raise ConfigError("dims", "must be a nonempty ascending list of positive ints")
        trials = doc.get("trials_per_dim", 1)
        if not isinstance(trials, int) or trials < 1:
            raise ConfigError("trials_per_dim", "must be a positive integer")
        seed = doc.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError("seed", "must be an integer")
        outputs = doc.get("outputs", {"moments": {"kmax": 4}})
        if not isinstance(outputs, dict) or not outputs:
            raise ConfigError("outputs", "must be a nonempty object")
        kmax = None
        bins = None
        target = None
        for key, val in outputs.items():
            if key == "moments":
                kmax = int(val.get("kmax", 4))
                if kmax < 1:
                    raise ConfigError("outputs.moments.kmax", "must be >= 1")
            elif key == "histogram":
                bins = int(val.get("bins", 50))
                if bins < 1:
                    raise ConfigError("outputs.histogram.bins", "must be >= 1")
            elif key == "cauchy_distance":
                target = val
            else:
                raise ConfigError(f"outputs.{key}", "unknown output")
        cut = doc.get("inner_cut")
        if cut is not None:
            cut = float(cut)
            if cut <= 0:
                raise ConfigError("inner_cut", "must be positive")
        try:
            triple = triple_from_spec(doc["triple"])
        except ValueError as exc:
            raise ConfigError("triple", str(exc)) from exc
        if model == "nonhermitian" and not is_symmetric(triple):
            raise ConfigError("triple", "nonhermitian model requires a symmetric triple")
        return cls(
            model=model,
            triple_spec=doc["triple"],
            dims=tuple(dims),
            trials_per_dim=trials,
            seed=seed,
            moments_kmax=kmax,
            histogram_bins=bins,
            cauchy_distance_target=target,
            inner_cut=cut,
        )

    def triple(self) -> LevyTriple:
        return triple_from_spec(self.triple_spec)


@dataclass
class Report:
    config: dict
    seed: int
    version: str
    rows: list[dict] = field(default_factory=list)  # per (dim, stat) aggregates
    histograms: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": self.config,
                "seed": self.seed,
                "version": self.version,
                "rows": self.rows,
                "histograms": self.histograms,
            },
            indent=2,
            sort_keys=True,
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["dim", "trial_count", "stat_name", "mean", "stderr"])
        for row in self.rows:
            writer.writerow(
                [row["dim"], row["trial_count"], row["stat_name"], row["mean"], row["stderr"]]
            )
        return buf.getvalue()


def _worker_count() -> int:
    env = os.environ.get("BPLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _version() -> str:
    try:
        from importlib.metadata import version

        return version("bplab")
    except Exception:
        return "unknown"


def _aggregate(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    if values.size > 1:
        stderr = float(np.std(values, ddof=1) / np.sqrt(values.size))
    else:
        stderr = float("nan")
    return mean, stderr


def _trial_law(config: ExperimentConfig, triple: LevyTriple, d: int, trial: int):
    rng = RngStream(config.seed, trial)
    if config.model == "hermitian":
        sample = sample_P_many(triple, d, rng, 1, config.inner_cut)[0]
        return esd(sample)
    sample = sample_L_many(triple, d, rng, 1, config.inner_cut)[0]
    return symmetrized_singular_law(sample)


def run(config: ExperimentConfig) -> Report:
    """Draw trials_per_dim independent samples per dimension and aggregate
    the requested statistics; deterministic under a fixed seed."""
    triple = config.triple()
    report = Report(
        config={"model": config.model, "triple": config.triple_spec,
                "dims": list(config.dims), "trials_per_dim": config.trials_per_dim,
                "inner_cut": config.inner_cut},
        seed=config.seed,
        version=_version(),
    )
    target_law = None
    grid = None
    if config.cauchy_distance_target is not None:
        target_law, grid = _parse_distance_target(config.cauchy_distance_target)
    workers = _worker_count()
    for d in config.dims:
        trials = list(range(config.trials_per_dim))
        if workers > 1 and len(trials) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                laws = list(pool.map(lambda t: _trial_law(config, triple, d, t), trials))
        else:
            laws = [_trial_law(config, triple, d, t) for t in trials]
        if config.moments_kmax is not None:
            per_trial = np.array(
                [empirical_moments(law, config.moments_kmax).values for law in laws]
            )
            for k in range(1, config.moments_kmax + 1):
                mean, stderr = _aggregate(per_trial[:, k - 1])
                report.rows.append(
                    {"dim": d, "trial_count": len(trials), "stat_name": f"m{k}",
                     "mean": mean, "stderr": stderr}
                )
        if config.histogram_bins is not None:
            pooled = _pool(laws)
            report.histograms[str(d)] = spectra.histogram(pooled, config.histogram_bins)
        if target_law is not None:
            dists = np.array([cauchy_sup_distance(law, target_law, grid) for law in laws])
            mean, stderr = _aggregate(dists)
            report.rows.append(
                {"dim": d, "trial_count": len(trials), "stat_name": "cauchy_distance",
                 "mean": mean, "stderr": stderr}
            )
            pooled = _pool(laws)
            report.rows.append(
                {"dim": d, "trial_count": len(trials), "stat_name": "cauchy_distance_pooled",
                 "mean": cauchy_sup_distance(pooled, target_law, grid), "stderr": float("nan")}
            )
    return report


def _pool(laws) -> EmpiricalDistribution:
    points = np.concatenate([law.support_points for law in laws])
    weights = np.concatenate([law.weights for law in laws])
    return EmpiricalDistribution(points, weights / weights.sum())


def _parse_distance_target(doc: dict):
    grid = GridSpec()
    if "grid" in doc:
        g = doc["grid"]
        grid = GridSpec(
            real_range=tuple(g.get("real_range", (-8.0, 8.0))),
            real_step=float(g.get("real_step", 0.05)),
            imaginary_levels=tuple(g.get("imaginary_levels", (1.0, 2.0, 4.0))),
        )
    spec = doc.get("target")
    if not isinstance(spec, dict):
        raise ConfigError("outputs.cauchy_distance.target", "missing")
    if "law" in spec:
        name = spec["law"]
        params = spec.get("params", [])
        law = {
            "semicircle": spectra.semicircle,
            "cauchy": spectra.cauchy_law,
            "marchenko_pastur": spectra.marchenko_pastur,
            "dirac": spectra.dirac_law,
        }.get(name)
        if law is None:
            raise ConfigError("outputs.cauchy_distance.target.law", f"unknown law {name!r}")
        return law(*params), grid
    raise ConfigError("outputs.cauchy_distance.target", "needs a 'law' entry")


def projection_experiment(d: int, d_prime: int, trials: int, seed: int) -> Report:
    """Fixed-count projection sums: spectral moments of sums of d_prime
    rank-one sphere projections versus the Marchenko-Pastur law with index
    d_prime / d."""
    if d < 1 or d_prime < 0 or trials < 1:
        raise ValueError("need d >= 1, d_prime >= 0, trials >= 1")
    lam = d_prime / d
    kmax = 4
    per_trial = []
    for trial in range(trials):
        rng = RngStream(seed, trial)
        if d_prime == 0:
            law = EmpiricalDistribution.point_mass(0.0)
        else:
            u = sample_sphere_vectors(d, d_prime, rng)
            m = u.T @ u.conj()
            m = (m + m.conj().T) / 2.0
            law = esd(m)
        per_trial.append(empirical_moments(law, kmax).values)
    per_trial = np.array(per_trial)
    ref = reference_moments(marchenko_pastur(lam), kmax)
    report = Report(
        config={"experiment": "projection", "d": d, "d_prime": d_prime, "trials": trials},
        seed=seed,
        version=_version(),
    )
    for k in range(1, kmax + 1):
        mean, stderr = _aggregate(per_trial[:, k - 1])
        report.rows.append(
            {"dim": d, "trial_count": trials, "stat_name": f"m{k}", "mean": mean,
             "stderr": stderr}
        )
        report.rows.append(
            {"dim": d, "trial_count": trials, "stat_name": f"m{k}_reference",
             "mean": ref[k], "stderr": 0.0}
        )
    return report


# ---------------------------------------------------------------------------
# command line


def _write_report(report: Report, out_dir: str | None) -> None:
    if out_dir is None:
        print(report.to_json())
        return
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    with open(os.path.join(out_dir, "report.csv"), "w", encoding="utf-8") as fh:
        fh.write(report.to_csv())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bplab",
        description="Random matrix experiments for infinitely divisible laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config", help="path to a JSON config file")
    p_run.add_argument("--out", default=None, help="output directory")

    p_sample = sub.add_parser("sample", help="draw one matrix sample")
    p_sample.add_argument("triple", help="JSON triple spec")
    p_sample.add_argument("--dim", type=int, required=True)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--model", choices=("hermitian", "nonhermitian"),
                          default="hermitian")

    p_moments = sub.add_parser(
        "moments", help="print the free-image moments of a triple"
    )
    p_moments.add_argument("triple", help="JSON triple spec")
    p_moments.add_argument("--kmax", type=int, default=4)

    p_proj = sub.add_parser("project", help="fixed-count projection experiment")
    p_proj.add_argument("--dim", type=int, required=True)
    p_proj.add_argument("--count", type=int, required=True)
    p_proj.add_argument("--trials", type=int, default=10)
    p_proj.add_argument("--seed", type=int, default=0)
    p_proj.add_argument("--out", default=None)

    sub.add_parser("verify", help="run the built-in acceptance suite")

    args = parser.parse_args(argv)

    try:
        if args.command == "run":
            try:
                with open(args.config, encoding="utf-8") as fh:
                    doc = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                print(f"config error: {exc}", file=sys.stderr)
                return 2
            try:
                config = ExperimentConfig.from_dict(doc)
            except ConfigError as exc:
                print(f"config error: {exc}", file=sys.stderr)
                return 2
            _write_report(run(config), args.out)
            return 0

        if args.command == "sample":
            try:
                triple = triple_from_spec(json.loads(args.triple))
            except (ValueError, json.JSONDecodeError) as exc:
                print(f"config error: {exc}", file=sys.stderr)
                return 2
            rng = RngStream(args.seed, 0)
            if args.model == "hermitian":
                m = sample_P_many(triple, args.dim, rng, 1)[0].entries
            else:
                if not is_symmetric(triple):
                    print("config error: nonhermitian model requires a symmetric triple",
                          file=sys.stderr)
                    return 2
                m = sample_L_many(triple, args.dim, rng, 1)[0].entries
            json.dump(
                {"real": m.real.tolist(), "imag": m.imag.tolist()}, sys.stdout
            )
            print()
            return 0

        if args.command == "moments":
            try:
                triple = triple_from_spec(json.loads(args.triple))
            except (ValueError, json.JSONDecodeError) as exc:
                print(f"config error: {exc}", file=sys.stderr)
                return 2
            moments = psi_image_moments(triple, args.kmax)
            for value in moments.values:
                print(f"{value:.12g}")
            return 0

        if args.command == "project":
            report = projection_experiment(args.dim, args.count, args.trials, args.seed)
            _write_report(report, args.out)
            return 0

        if args.command == "verify":
            import pytest

            here = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))
            tests = os.path.join(here, "tests", "test_acceptance.py")
            if not os.path.exists(tests):
                print("acceptance tests not found; run pytest from a source checkout",
                      file=sys.stderr)
                return 1
            return pytest.main(["-v", tests])
    except Exception as exc:  # runtime failure, not a config problem
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
