"""Particle-by-particle sampling of detector outcomes and screen hits.

Each sample ``i`` draws two uniforms from a counter-based Philox stream
keyed by the run seed: the first selects the detector outcome, the second
a screen position by inverse-CDF sampling of that outcome's conditioned
pattern.  Sample ``i`` always consumes stream values ``2i`` and ``2i+1``, so
runs are bit-identical however the work is split across threads.
"""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import EmptyState, IncompatibleGrids
from .qstate import EntangledState

CHUNK = 8192
ALPHA = 1e-3
MIN_EXPECTED = 5


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get("KICKSIM_THREADS", "1"))
    return max(1, int(threads))


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """``(count, 2)`` uniforms for samples ``start .. start+count-1``."""
    if start % 2:
        raise ValueError("chunks must start at an even sample index")
    bg = np.random.Philox(key=seed)
    # one Philox counter step yields four doubles, i.e. two samples
    bg.advance(start // 2)
    return np.random.Generator(bg).random((count, 2))


@dataclass(frozen=True, eq=False)
class SampleRun:
    basis_tag: str
    n_samples: int
    seed: int
    outcomes: np.ndarray
    positions: np.ndarray
    edges: np.ndarray
    counts: np.ndarray

    @property
    def records(self) -> list[tuple[int, float]]:
        return list(zip(self.outcomes.tolist(), self.positions.tolist()))

    def outcome_frequencies(self, n: int) -> np.ndarray:
        if self.n_samples == 0:
            return np.zeros(n)
        return np.bincount(self.outcomes, minlength=n) / self.n_samples

    def histogram_for(self, outcome: int) -> np.ndarray:
        return np.histogram(self.positions[self.outcomes == outcome], self.edges)[0]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "outcome", "x"])
            for i, (j, x) in enumerate(zip(self.outcomes, self.positions)):
                w.writerow([i, int(j), f"{x:.12g}"])

    def histogram_json(self) -> dict:
        return {"basis_tag": self.basis_tag, "n_samples": self.n_samples,
                "seed": self.seed, "edges": [float(f"{e:.12g}") for e in self.edges],
                "counts": self.counts.tolist()}


def _cdfs(state: EntangledState) -> np.ndarray:
    rho = np.abs(state.matrix()) ** 2
    cells = 0.5 * (rho[:, 1:] + rho[:, :-1])
    cdf = np.concatenate([np.zeros((state.n, 1)), np.cumsum(cells, axis=1)], axis=1)
    totals = cdf[:, -1:]
    return np.divide(cdf, totals, out=np.zeros_like(cdf), where=totals > 0)


def sample(state: EntangledState, n_samples: int, seed: int, *, bins: int = 200,
           threads: int | None = None, chunk: int = CHUNK) -> SampleRun:
    """Draw ``n_samples`` (outcome, position) pairs from ``state``."""
    probs = state.probabilities()
    if not probs.sum() > 0:
        raise EmptyState("cannot sample a state with zero norm")
    if chunk % 2:
        raise ValueError("chunk size must be even")
    outcome_cdf = np.cumsum(probs / probs.sum())
    outcome_cdf[-1] = 1.0
    cdfs = _cdfs(state)
    x = state.grid.points

    def work(start):
        count = min(chunk, n_samples - start)
        u = uniforms(seed, start, count)
        j = np.searchsorted(outcome_cdf, u[:, 0], side="right")
        pos = np.empty(count)
        for k in np.unique(j):
            sel = j == k
            pos[sel] = np.interp(u[sel, 1], cdfs[k], x)
        return j, pos

    starts = range(0, n_samples, chunk)
    with ThreadPoolExecutor(thread_count(threads)) as pool:
        parts = list(pool.map(work, starts))
    outcomes = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, int)
    positions = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0)
    edges = np.linspace(state.grid.x_min, state.grid.x_max, bins + 1)
    counts = np.histogram(positions, edges)[0]
    return SampleRun(state.basis_tag, n_samples, seed, outcomes, positions, edges, counts)


def expected_counts(state: EntangledState, outcome: int, edges: np.ndarray,
                    n_samples: int) -> np.ndarray:
    """Expected per-bin counts of ``outcome`` hits among ``n_samples`` draws."""
    probs = state.probabilities()
    cdf = np.interp(edges, state.grid.points, _cdfs(state)[outcome])
    return np.diff(cdf) * n_samples * probs[outcome] / probs.sum()


@dataclass(frozen=True)
class RunComparison:
    chi2: float
    dof: int
    chi2_pvalue: float
    ks_distance: float
    ks_critical: float
    ks_pvalue: float
    alpha: float

    @property
    def passed(self) -> bool:
        return self.ks_distance < self.ks_critical and self.chi2_pvalue >= self.alpha


def ks_critical(n: int, m: int, alpha: float = ALPHA) -> float:
    """Asymptotic two-sample Kolmogorov-Smirnov critical distance."""
    return float(np.sqrt(-np.log(alpha / 2) / 2) * np.sqrt((n + m) / (n * m)))


def _merge_bins(a: np.ndarray, b: np.ndarray, na: int, nb: int):
    fa, fb = na / (na + nb), nb / (na + nb)
    merged_a, merged_b = [], []
    acc_a = acc_b = 0
    for x, y in zip(a, b):
        acc_a += x
        acc_b += y
        tot = acc_a + acc_b
        if tot * fa >= MIN_EXPECTED and tot * fb >= MIN_EXPECTED:
            merged_a.append(acc_a)
            merged_b.append(acc_b)
            acc_a = acc_b = 0
    if merged_a:
        merged_a[-1] += acc_a
        merged_b[-1] += acc_b
    return np.array(merged_a, float), np.array(merged_b, float)


def compare_runs(a: SampleRun, b: SampleRun, alpha: float = ALPHA) -> RunComparison:
    """Two-sample chi-squared on histograms and KS on positions, ignoring outcomes.

    Adjacent bins are merged until each sample expects at least five counts.
    """
    if a.edges.shape != b.edges.shape or not np.allclose(a.edges, b.edges, rtol=0, atol=0):
        raise IncompatibleGrids("runs were binned on different screen grids")
    na, nb = a.n_samples, b.n_samples
    if na == 0 or nb == 0:
        raise EmptyState("cannot compare empty runs")
    ca, cb = _merge_bins(a.counts, b.counts, na, nb)
    ka, kb = np.sqrt(nb / na), np.sqrt(na / nb)
    chi2 = float(np.sum((ka * ca - kb * cb) ** 2 / (ca + cb)))
    dof = max(len(ca) - 1, 1)
    ks = stats.ks_2samp(a.positions, b.positions)
    return RunComparison(chi2, dof, float(stats.chi2.sf(chi2, dof)),
                         float(ks.statistic), ks_critical(na, nb, alpha),
                         float(ks.pvalue), alpha)


def save_histogram(run: SampleRun, path) -> None:
    with open(path, "w") as fh:
        json.dump(run.histogram_json(), fh, indent=2)
        fh.write("\n")
