"""Batch sweeps of empirical operator-norm ratios over (r, p, N)."""
from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .errors import HypothesisError, InvariantError
from .grid import lp_norm
from .maximal import (LowerBudget, SWEEP_BUDGET, check_hypotheses,
                      empirical_operator_norm, maximal_lower, single_mode)

CSV_COLUMNS = ("config_hash", "seed", "r", "p", "n", "statistic", "value")


@dataclass(frozen=True)
class SweepConfig:
    """Sweep description.

    ``pairs`` lists ``(r, p)``; when empty the product of ``r_list`` and
    ``p_list`` is used.  Pairs in ``expect_reject`` must fail the hypothesis
    gate and are only checked for that.  ``tol`` is the allowed growth factor
    of the largest upper-bound ratio over the smallest ``N``.
    """

    r_list: tuple = (1.5,)
    p_list: tuple = (2.0,)
    n_list: tuple = (64, 128, 256, 512)
    trials: int = 50
    seed: int = 0
    s_grid: object = "auto"
    tol: float = 2.0
    output_dir: str = "sweep_out"
    pairs: tuple = ()
    expect_reject: tuple = ()
    plots: bool = False
    budget: dict = field(default_factory=lambda: asdict(SWEEP_BUDGET))

    @classmethod
    def from_dict(cls, doc):
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown sweep config keys: {sorted(unknown)}")
        kw = dict(doc)
        for key in ("r_list", "p_list", "n_list"):
            if key in kw:
                kw[key] = tuple(kw[key])
        for key in ("pairs", "expect_reject"):
            if key in kw:
                kw[key] = tuple(tuple(float(v) for v in pair) for pair in kw[key])
        if isinstance(kw.get("s_grid"), list):
            kw["s_grid"] = tuple(kw["s_grid"])
        cfg = cls(**kw)
        if cfg.trials < 1 or not cfg.n_list:
            raise ValueError("sweep needs trials >= 1 and a non-empty n_list")
        return cfg

    def all_pairs(self):
        pairs = self.pairs or tuple((r, p) for r in self.r_list for p in self.p_list)
        return tuple((float(r), float(p)) for r, p in pairs)

    def config_hash(self):
        doc = asdict(self)
        doc.pop("output_dir")
        blob = json.dumps(doc, sort_keys=True, default=list).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def validate(cfg: SweepConfig):
    """Raise :class:`HypothesisError` for any unflagged inadmissible pair."""
    flagged = {tuple(p) for p in cfg.expect_reject}
    for pair in cfg.all_pairs():
        if pair in flagged:
            continue
        check_hypotheses(*pair)


def _fmt(v):
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run_sweep(cfg: SweepConfig):
    """Rows ``(config_hash, seed, r, p, n, statistic, value)``, in a fixed order."""
    validate(cfg)
    h = cfg.config_hash()
    budget = LowerBudget(**cfg.budget)
    rows = []

    def emit(r, p, n, stat, value):
        rows.append((h, cfg.seed, r, p, n, stat, value))

    flagged = {tuple(p) for p in cfg.expect_reject}
    for r, p in cfg.all_pairs():
        if (r, p) in flagged:
            try:
                check_hypotheses(r, p)
            except HypothesisError:
                emit(r, p, "all", "rejected", 1)
                continue
            raise InvariantError("hypothesis-gate",
                                 f"(r, p) = ({r}, {p}) flagged but accepted")
        s_grid = None if cfg.s_grid == "auto" else list(cfg.s_grid)
        uppers = []
        for n in cfg.n_list:
            summary = empirical_operator_norm(r, p, n, cfg.trials, cfg.seed,
                                              s_grid=s_grid, budget=budget)
            for key in ("upper_max", "upper_q50", "upper_q90", "lower_max",
                        "lower_q50", "lower_q90", "sandwich_ok", "full_grid"):
                emit(r, p, n, key, summary[key])
            uppers.append(summary["upper_max"])
            f = single_mode(n, 1)
            low = maximal_lower(f, r, budget)
            emit(r, p, n, "single_mode_lower_ratio",
                 lp_norm(low.values, p) / lp_norm(f, p))
        growth = max(uppers) / uppers[0]
        emit(r, p, "all", "growth_ratio", growth)
        emit(r, p, "all", "stable", growth <= cfg.tol)
    return rows


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def plot_ratios(rows, path):
    """SVG of max upper/lower ratios against N, one line per (r, p)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = {}
    for _, _, r, p, n, stat, value in rows:
        if n == "all" or stat not in ("upper_max", "lower_max"):
            continue
        series.setdefault((r, p, stat), []).append((n, value))
    fig, ax = plt.subplots(figsize=(6, 4))
    for (r, p, stat), pts in sorted(series.items()):
        ns, vals = zip(*pts)
        ax.plot(ns, vals, marker="o", label=f"r={r}, p={p}, {stat}")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("||bound||_p / ||f||_p")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def write_sweep(cfg: SweepConfig, rows, output_dir: Optional[str] = None):
    out = Path(output_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "sweep.csv"
    csv_path.write_text(rows_to_csv(rows))
    paths = [csv_path]
    if cfg.plots:
        svg = out / "ratios.svg"
        plot_ratios(rows, svg)
        paths.append(svg)
    return paths
