"""Seeded, reproducible Monte Carlo experiments and verification tools.

Replications are partitioned into fixed-size blocks; block b of an
experiment consumes the substream (master_seed, stage tag, b) from its
start, and block statistics are merged in block order.  Worker count is
therefore a pure throughput hint: identical configurations produce
byte-identical reports however the blocks are scheduled.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, fixedpoint, moments
from .errors import DomainError, ResourceCapError
from .graphs import VARIANT_CODE, VARIANTS
from .rng import (BLOCK, TAG_DIAGNOSTIC, TAG_INCREMENT, TAG_NN, TAG_ONG,
                  TAG_RDE, block_ranges, substream)

KINDS = ("ong_total", "nn_total", "increment", "rde")
_KIND_TAG = {"ong_total": TAG_ONG, "nn_total": TAG_NN,
             "increment": TAG_INCREMENT, "rde": TAG_RDE}


# ---------------------------------------------------------------------------
# experiment configuration and report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    replications: int
    master_seed: int = 0
    d: int = 1
    n: int = 1
    alpha: float = 1.0
    variant: str = "plain"
    family: str = "G"          # rde kind only
    tol: float = 1e-4          # rde kind only
    centred: bool = True       # rde kind only
    bins: int | None = None    # attach a histogram of the samples
    retain: bool = False       # keep raw samples on the report
    worker_count: int | None = None   # throughput hint, not part of identity
    resource_cap: int | None = None   # max replications the harness may run

    def validate(self) -> "ExperimentConfig":
        if self.kind not in KINDS:
            raise DomainError(f"unknown experiment kind {self.kind!r}")
        if self.replications < 1:
            raise DomainError("replications must be >= 1")
        if self.kind == "ong_total":
            if self.d < 1:
                raise DomainError("d must be >= 1")
            if self.n < 1:
                raise DomainError("n must be >= 1")
            if self.alpha < 0.0:
                raise DomainError("alpha must be >= 0 for totals")
            if self.variant not in VARIANTS:
                raise DomainError(f"unknown variant {self.variant!r}")
            if self.d != 1 and self.variant != "plain":
                raise DomainError("rooted variants require d = 1")
        elif self.kind == "nn_total":
            if self.n < 2:
                raise DomainError("nn_total needs n >= 2")
            if not self.alpha > 0.0:
                raise DomainError("nn_total needs alpha > 0")
        elif self.kind == "increment":
            if self.n < 1:
                raise DomainError("increment needs n >= 1")
            if self.variant not in VARIANTS:
                raise DomainError(f"unknown variant {self.variant!r}")
        else:  # rde
            fixedpoint.make_spec(self.family, self.alpha, self.centred)
            if not 0.0 < self.tol < 1.0:
                raise DomainError("tol must lie in (0, 1)")
        return self

    def identity(self) -> dict:
        """The semantic configuration (everything but throughput hints)."""
        out = {"kind": self.kind, "replications": self.replications,
               "master_seed": self.master_seed}
        if self.kind == "ong_total":
            out.update(d=self.d, n=self.n, alpha=self.alpha, variant=self.variant)
        elif self.kind == "nn_total":
            out.update(n=self.n, alpha=self.alpha)
        elif self.kind == "increment":
            out.update(n=self.n, variant=self.variant)
        else:
            out.update(alpha=self.alpha, family=self.family, tol=self.tol,
                       centred=self.centred and self.family != "W")
        if self.bins is not None:
            out["bins"] = self.bins
        return out


@dataclass
class ExperimentReport:
    config: dict
    count: int
    mean: float
    variance: float
    third_central_moment: float
    se_mean: float
    histogram: dict | None = None
    rde_stats: dict | None = None
    ks: dict | None = None
    samples: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> str:
        payload = {"config": self.config, "count": self.count,
                   "mean": self.mean, "variance": self.variance,
                   "third_central_moment": self.third_central_moment,
                   "se_mean": self.se_mean}
        if self.histogram is not None:
            payload["histogram"] = self.histogram
        if self.rde_stats is not None:
            payload["rde_stats"] = self.rde_stats
        if self.ks is not None:
            payload["ks"] = self.ks
        return json.dumps(payload, sort_keys=True)


# ---------------------------------------------------------------------------
# moment accumulation (merged in block order; order-independent math,
# deterministic merge sequence)
# ---------------------------------------------------------------------------

def _block_moments(x: np.ndarray) -> tuple[int, float, float, float]:
    m = x.size
    mean = float(x.mean())
    c = x - mean
    return m, mean, float(c @ c), float(np.sum(c ** 3))


def _merge_moments(a, b):
    na, ma, s2a, s3a = a
    nb, mb, s2b, s3b = b
    n = na + nb
    d = mb - ma
    mean = ma + d * nb / n
    s2 = s2a + s2b + d * d * na * nb / n
    s3 = (s3a + s3b + d ** 3 * na * nb * (na - nb) / n ** 2
          + 3.0 * d * (na * s2b - nb * s2a) / n)
    return n, mean, s2, s3


def _finalize(acc) -> tuple[int, float, float, float, float]:
    n, mean, s2, s3 = acc
    var = s2 / (n - 1) if n > 1 else float("nan")
    third = s3 / n
    se = math.sqrt(var / n) if n > 1 else float("nan")
    return n, mean, var, third, se


# ---------------------------------------------------------------------------
# per-block samplers
# ---------------------------------------------------------------------------

def _nn_block(gen, reps: int, n: int, alpha: float) -> np.ndarray:
    u = np.sort(gen.random((reps, n)), axis=1)
    s = np.empty((reps, n + 1))
    s[:, 0] = u[:, 0]
    if n > 1:
        s[:, 1:n] = np.diff(u, axis=1)
    s[:, n] = 1.0 - u[:, -1]
    tot = s[:, 1] ** alpha + s[:, n - 1] ** alpha
    if n >= 3:
        tot = tot + np.sum(np.minimum(s[:, 1:n - 1], s[:, 2:n]) ** alpha, axis=1)
    return tot


def _increment_block(gen, reps: int, n: int, variant: str) -> np.ndarray:
    u = gen.random((reps, n))
    x = u[:, -1]
    if n == 1:
        if variant == "plain":
            return np.zeros(reps)
        if variant == "rooted0":
            return x.copy()
        return np.minimum(x, 1.0 - x)
    base = u[:, :-1]
    if variant == "rooted0":
        base = np.concatenate([np.zeros((reps, 1)), base], axis=1)
    elif variant == "rooted01":
        base = np.concatenate([np.zeros((reps, 1)), np.ones((reps, 1)), base], axis=1)
    srt = np.sort(base, axis=1)
    pos = np.sum(srt < x[:, None], axis=1)
    rows = np.arange(reps)
    ncol = srt.shape[1]
    left = np.where(pos > 0, srt[rows, np.maximum(pos - 1, 0)], -np.inf)
    right = np.where(pos < ncol, srt[rows, np.minimum(pos, ncol - 1)], np.inf)
    return np.minimum(x - left, right - x)


def _run_block(cfg: ExperimentConfig, block: int, count: int):
    gen = substream(cfg.master_seed, _KIND_TAG[cfg.kind], block)
    extra = None
    if cfg.kind == "ong_total":
        out = np.empty(count)
        if cfg.d == 1:
            _kernels.ong1d_total_block(gen, count, cfg.n, float(cfg.alpha),
                                       VARIANT_CODE[cfg.variant], out)
        else:
            _kernels.ongdd_total_block(gen, count, cfg.n, cfg.d,
                                       float(cfg.alpha), out)
    elif cfg.kind == "nn_total":
        out = _nn_block(gen, count, cfg.n, float(cfg.alpha))
    elif cfg.kind == "increment":
        out = _increment_block(gen, count, cfg.n, cfg.variant)
    else:
        out = np.empty(count)
        code = fixedpoint._FAMILY_CODE["G" if cfg.family == "W" else cfg.family]
        mx, nhit = _kernels.rde_block(gen, count, code, float(cfg.alpha),
                                      float(cfg.tol), fixedpoint.DEPTH_CAP, out)
        spec = fixedpoint.make_spec(cfg.family, cfg.alpha, cfg.centred)
        out += spec.mean()
        extra = (mx, nhit)
    return out, extra


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the experiment and aggregate a report.

    Identical configurations (including master_seed) give byte-identical
    JSON reports regardless of worker_count or scheduling.
    """
    cfg = config.validate()
    reps = cfg.replications
    if cfg.resource_cap is not None and reps > cfg.resource_cap:
        done = (cfg.resource_cap // BLOCK) * BLOCK
        raise ResourceCapError(
            f"replications={reps} exceeds resource cap {cfg.resource_cap}",
            completed=done)
    blocks = list(block_ranges(reps))
    keep = cfg.retain or cfg.bins is not None

    workers = cfg.worker_count or os.cpu_count() or 1
    results: list = [None] * len(blocks)

    def job(k):
        b, c = blocks[k]
        out, extra = _run_block(cfg, b, c)
        stats = _block_moments(out)
        return stats, (out if keep else None), extra

    if workers <= 1 or len(blocks) <= 1:
        for k in range(len(blocks)):
            results[k] = job(k)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for k, res in enumerate(ex.map(job, range(len(blocks)))):
                results[k] = res

    acc = results[0][0]
    for stats, _, _ in results[1:]:
        acc = _merge_moments(acc, stats)
    count, mean, var, third, se = _finalize(acc)

    samples = np.concatenate([r[1] for r in results]) if keep else None
    hist = None
    if cfg.bins is not None:
        counts, edges = np.histogram(samples, bins=cfg.bins)
        hist = {"bin_edges": [float(e) for e in edges],
                "counts": [int(c) for c in counts]}
    rde_stats = None
    if cfg.kind == "rde":
        rde_stats = {
            "max_discarded_weight": float(max(r[2][0] for r in results)),
            "depth_capped_draws": int(sum(r[2][1] for r in results)),
        }
    return ExperimentReport(config=cfg.identity(), count=count, mean=mean,
                            variance=var, third_central_moment=third,
                            se_mean=se, histogram=hist, rde_stats=rde_stats,
                            samples=samples if cfg.retain else None)


# ---------------------------------------------------------------------------
# centred totals (the distributional-limit comparisons)
# ---------------------------------------------------------------------------

def centred_ong_sample(n: int, alpha: float, variant: str, replications: int,
                       seed: int, d: int = 1, centring: str = "exact",
                       worker_count: int | None = None):
    """Centred ONG totals, suitable for density estimates and KS tests.

    centring = "exact" subtracts the exact finite-n mean (d = 1 only),
    "asymptotic" the large-n expansion at this n, "empirical" the sample
    mean (flagged in the returned info, so exactly-centred and
    self-centred samples are never mixed silently).
    """
    if centring not in ("exact", "asymptotic", "empirical"):
        raise DomainError(f"unknown centring {centring!r}")
    if d != 1 and centring != "empirical":
        raise DomainError("exact centring is only available in dimension 1")
    cfg = ExperimentConfig(kind="ong_total", replications=replications,
                           master_seed=seed, d=d, n=n, alpha=alpha,
                           variant=variant, retain=True,
                           worker_count=worker_count)
    report = run_experiment(cfg)
    if centring == "exact":
        centre = moments.expected_ong_weight(n, alpha, variant).value
    elif centring == "asymptotic":
        centre = moments.expected_ong_weight(n, alpha, variant).asymptotic_value
    else:
        centre = report.mean
    info = {"centring": centring, "subtracted_mean": float(centre),
            "empirical_mean_flag": centring == "empirical",
            "config": report.config}
    return report.samples - centre, info


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KsResult:
    statistic: float
    critical_999: float
    kind: str               # "one-sample" | "two-sample"
    n1: int
    n2: int | None = None
    reference: str = ""

    @property
    def passed(self) -> bool:
        return self.statistic < self.critical_999

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "critical_999": self.critical_999,
                "kind": self.kind, "n1": self.n1, "n2": self.n2,
                "reference": self.reference, "passed": self.passed}


def ks_critical_value(n1: int, n2: int | None = None, level: float = 0.999) -> float:
    """Asymptotic KS critical value; 1.9495/sqrt(m) at the 99.9% level."""
    if not 0.0 < level < 1.0:
        raise DomainError("level must lie in (0, 1)")
    c = math.sqrt(-0.5 * math.log((1.0 - level) / 2.0))
    if n2 is None:
        return c / math.sqrt(n1)
    return c * math.sqrt((n1 + n2) / (n1 * n2))


def ks_statistic(samples, reference, reference_tag: str = "") -> KsResult:
    """KS distance of `samples` against a CDF callable or a second sample."""
    x = np.sort(np.asarray(samples, dtype=np.float64).ravel())
    n1 = x.size
    if n1 == 0:
        raise DomainError("ks_statistic needs a non-empty sample")
    if callable(reference):
        f = np.asarray(reference(x), dtype=np.float64)
        hi = np.arange(1, n1 + 1) / n1 - f
        lo = f - np.arange(0, n1) / n1
        stat = float(max(hi.max(), lo.max()))
        return KsResult(statistic=stat, critical_999=ks_critical_value(n1),
                        kind="one-sample", n1=n1, reference=reference_tag)
    y = np.sort(np.asarray(reference, dtype=np.float64).ravel())
    n2 = y.size
    if n2 == 0:
        raise DomainError("ks_statistic needs a non-empty reference sample")
    grid = np.concatenate([x, y])
    cx = np.searchsorted(x, grid, side="right") / n1
    cy = np.searchsorted(y, grid, side="right") / n2
    stat = float(np.abs(cx - cy).max())
    return KsResult(statistic=stat, critical_999=ks_critical_value(n1, n2),
                    kind="two-sample", n1=n1, n2=n2, reference=reference_tag)


# ---------------------------------------------------------------------------
# density estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityEstimate:
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray     # normalised histogram heights
    grid: np.ndarray
    curve: np.ndarray       # Gaussian-kernel smooth on grid
    bandwidth: float

    def curve_integral(self) -> float:
        return float(np.trapezoid(self.curve, self.grid))


def estimate_density(samples, bins: int, grid_points: int = 512) -> DensityEstimate:
    """Normalised histogram plus a Gaussian-kernel smoothed curve.

    Bandwidth is Silverman's rule of thumb,
    0.9 min(sd, IQR/1.349) m^(-1/5); the evaluation grid extends four
    bandwidths past the sample range so the curve integrates to 1 within
    1e-3.
    """
    x = np.asarray(samples, dtype=np.float64).ravel()
    m = x.size
    if m < 100:
        raise DomainError(f"estimate_density needs >= 100 samples, got {m}")
    if bins < 1:
        raise DomainError("bins must be >= 1")
    counts, edges = np.histogram(x, bins=bins)
    widths = np.diff(edges)
    with np.errstate(invalid="ignore", divide="ignore"):
        density = np.where(widths > 0, counts / (m * widths), 0.0)

    sd = float(x.std(ddof=1))
    q75, q25 = np.percentile(x, [75.0, 25.0])
    iqr = float(q75 - q25)
    spread_candidates = [s for s in (sd, iqr / 1.349) if s > 0.0]
    spread = min(spread_candidates) if spread_candidates else 0.0
    bw = 0.9 * spread * m ** (-0.2)
    if bw <= 0.0:  # degenerate (constant) sample: a narrow spike
        bw = max(abs(float(x[0])), 1.0) * 1e-9
    lo = float(x.min()) - 4.0 * bw
    hi = float(x.max()) + 4.0 * bw
    grid = np.linspace(lo, hi, grid_points)
    curve = np.empty(grid_points)
    norm = 1.0 / (m * bw * math.sqrt(2.0 * math.pi))
    chunk = max(1, 2**22 // max(m, 1))
    for i in range(0, grid_points, chunk):
        g = grid[i:i + chunk]
        z = (g[:, None] - x[None, :]) / bw
        curve[i:i + chunk] = norm * np.exp(-0.5 * z * z).sum(axis=1)
    return DensityEstimate(bin_edges=edges, counts=counts, density=density,
                           grid=grid, curve=curve, bandwidth=bw)


def write_histogram_csv(est: DensityEstimate, path) -> None:
    """Histogram as CSV (bin_left, bin_right, count, density), UTF-8."""
    import csv
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_left", "bin_right", "count", "density"])
        for i in range(est.counts.size):
            w.writerow([repr(float(est.bin_edges[i])),
                        repr(float(est.bin_edges[i + 1])),
                        int(est.counts[i]), repr(float(est.density[i]))])


def write_curve_csv(est: DensityEstimate, path) -> None:
    """Smoothed density curve as CSV (x, density), UTF-8."""
    import csv
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "density"])
        for g, c in zip(est.grid, est.curve):
            w.writerow([repr(float(g)), repr(float(c))])


# ---------------------------------------------------------------------------
# tail-term convergence diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagnosticsRow:
    n: int
    binomial_remainder_l3: float   # E |B_alpha(n)|^3
    log_moment_gap: float          # E [U^2 (log+ N - log n - log U)^2]

    def to_dict(self) -> dict:
        return {"n": self.n,
                "binomial_remainder_l3": self.binomial_remainder_l3,
                "log_moment_gap": self.log_moment_gap}


def appendix_diagnostics(n_grid, alpha: float, replications: int,
                         seed: int) -> list[DiagnosticsRow]:
    """Monte Carlo estimates of the binomial-split remainder terms.

    For U uniform and N binomial(n-1, U):

      B_alpha(n) = sqrt(n-1) (U^a (N/(n-1))^(1-a)
                   + (1-U)^a ((n-1-N)/(n-1))^(1-a) - 1)

    converges to 0 in L^3 for 0 <= alpha <= 1 (identically 0 at
    alpha = 1), and U (log+ N - log n) converges in L^2 to U log U.
    Both reported statistics should decrease along an increasing n grid.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"diagnostics require 0 < alpha <= 1, got {alpha!r}")
    rows = []
    for gi, n in enumerate(n_grid):
        if n < 2:
            raise DomainError("diagnostics require every n >= 2")
        m = n - 1
        sum_b3 = 0.0
        sum_lm = 0.0
        total = 0
        for b, c in block_ranges(replications):
            gen = substream(seed, TAG_DIAGNOSTIC, gi * 1_000_000 + b)
            u = np.maximum(gen.random(c), 1e-300)
            nn = gen.binomial(m, u)
            ratio = nn / m
            big_b = math.sqrt(m) * (u ** alpha * ratio ** (1.0 - alpha)
                                    + (1.0 - u) ** alpha * (1.0 - ratio) ** (1.0 - alpha)
                                    - 1.0)
            mm = np.log(np.maximum(nn, 1)) - math.log(n) - np.log(u)
            sum_b3 += float(np.sum(np.abs(big_b) ** 3))
            sum_lm += float(np.sum(u * u * mm * mm))
            total += c
        rows.append(DiagnosticsRow(n=int(n),
                                   binomial_remainder_l3=sum_b3 / total,
                                   log_moment_gap=sum_lm / total))
    return rows
