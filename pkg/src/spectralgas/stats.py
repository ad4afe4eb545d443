"""Empirical statistics: histograms, unfolded spacings, KS distance, edge rescaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    normalized_density: np.ndarray
    empty: bool = False

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write("bin_left,bin_right,count,density\n")
            for lo, hi, c, d in zip(self.edges[:-1], self.edges[1:], self.counts, self.normalized_density):
                fh.write(f"{lo:.17g},{hi:.17g},{int(c)},{d:.17g}\n")


def histogram(data, bins: int, range: tuple[float, float]) -> Histogram:
    """Half-open bins [e_i, e_i+1), last bin closed; out-of-range points are ignored.

    The density is normalized over the in-range points, so its integral is 1
    whenever any point falls in range. An empty selection sets ``empty``.
    """
    lo, hi = range
    if bins < 1 or not lo < hi:
        raise ValueError("need bins >= 1 and lo < hi")
    data = np.asarray(data, dtype=float).ravel()
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(data, bins=edges)
    total = counts.sum()
    if total == 0:
        return Histogram(edges, counts, np.zeros(bins), empty=True)
    return Histogram(edges, counts, counts / (total * np.diff(edges)))


@dataclass(frozen=True)
class Spacings:
    values: np.ndarray
    excluded: int


def unfold_spacings(sorted_sample, rho, n: int, rho_cut: float | None = None) -> Spacings:
    """r_i = n (l_{i+1} - l_i) rho(l_i), keeping pairs with rho(l_i) > rho_cut.

    The default cut is 5% of the largest density value seen on the sample.
    """
    lam = np.asarray(sorted_sample, dtype=float)
    if np.any(np.diff(lam) < 0):
        raise ValueError("sample must be sorted ascending")
    dens = np.asarray(rho(lam[:-1]), dtype=float)
    if rho_cut is None:
        rho_cut = 0.05 * float(np.max(rho(lam)))
    keep = dens > rho_cut
    r = n * np.diff(lam)[keep] * dens[keep]
    return Spacings(r, int(np.count_nonzero(~keep)))


def pooled_spacings(samples, rho, rho_cut: float | None = None) -> Spacings:
    """Unfold each sample separately, then pool."""
    vals, excl = [], 0
    for row in np.atleast_2d(samples):
        sp = unfold_spacings(np.sort(row), rho, len(row), rho_cut)
        vals.append(sp.values)
        excl += sp.excluded
    return Spacings(np.concatenate(vals), excl)


def ks_distance(sample, cdf) -> float:
    """sup |ECDF - cdf|, checking both sides of every jump."""
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("empty sample")
    n = x.size
    F = np.asarray(cdf(x), dtype=float)
    upper = np.arange(1, n + 1) / n - F
    lower = F - np.arange(n) / n
    return float(np.clip(max(upper.max(), lower.max()), 0.0, 1.0))


def edge_rescale(lam_max, n: int, T: float = 1.0):
    """N^(2/3) (l_max - 2 sqrt T) / sqrt T, the soft-edge scaling of the quadratic gas."""
    return n ** (2.0 / 3.0) * (np.asarray(lam_max, dtype=float) - 2.0 * np.sqrt(T)) / np.sqrt(T)


def estimate_support(data, bins: int = 400, range=None, threshold: float = 0.01, merge_gap: float = 0.1):
    """Intervals where a fine histogram exceeds ``threshold`` times its peak.

    Occupied runs separated by less than ``merge_gap`` are joined, so sparse
    bins near an interior zero of the density do not split the support.
    """
    data = np.asarray(data, dtype=float).ravel()
    if range is None:
        pad = 0.05 * (data.max() - data.min())
        range = (data.min() - pad, data.max() + pad)
    h = histogram(data, bins, range)
    occ = np.flatnonzero(h.normalized_density > threshold * h.normalized_density.max())
    runs = []
    for i in occ:
        lo, hi = h.edges[i], h.edges[i + 1]
        if runs and lo - runs[-1][1] < merge_gap:
            runs[-1][1] = hi
        else:
            runs.append([lo, hi])
    return [tuple(r) for r in runs]
