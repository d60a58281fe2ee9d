"""The discrete cube [0, y-1]^k: norm census, shell selection, point counting.

The squared-norm histogram is computed by exact integer convolution: the
distribution of ||v||^2 over the cube is the k-fold convolution of the
one-coordinate histogram {j^2: 1 for j in 0..y-1}, which is the same census
an explicit enumeration would produce.  Shell extraction enumerates the cube
in lexicographic order via chunked index unraveling; chunks split on the
first coordinate so a parallel run merges deterministically.

Window ends are irrational (mu +- a*sigma with sigma a square root of a
rational), so window membership of an integer squared norm t is decided
exactly by comparing (t - mu)^2 against a^2 * var in rational arithmetic.

Counting lattice points in capped balls (alpha_i >= 0 for i >= m) uses an
exact dynamic program over the squared radius: one array pass per dimension,
so the work is O(k * t * sqrt(t)) regardless of how many points are counted.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, NamedTuple, Sequence

import numpy as np

from .errors import BudgetExceeded, EmptyWindow
from .numeric import MomentSummary, ball_volume

#: Default cap on the number of cube points an enumeration may touch.
DEFAULT_BUDGET = 10**8

_CHUNK = 1 << 18


class LatticeVector(NamedTuple):
    coords: tuple[int, ...]
    norm_sq: int


def lattice_vector(coords: Sequence[int]) -> LatticeVector:
    """Build a LatticeVector with its squared norm computed, not trusted."""
    coords = tuple(int(c) for c in coords)
    return LatticeVector(coords, sum(c * c for c in coords))


@dataclass(frozen=True)
class NormHistogram:
    """Population count per squared norm over the full cube (nonzero bins only)."""

    k: int
    y: int
    counts: dict[int, int]

    def total(self) -> int:
        return sum(self.counts.values())

    def population(self, t_low: int, t_high: int) -> int:
        return sum(c for t, c in self.counts.items() if t_low <= t <= t_high)


@dataclass(frozen=True)
class ShellSelection:
    """A chosen squared-norm window [t_low, t_high] and its population.

    sigma_window is the real Chebyshev window the selection was made in;
    pigeonhole_bound is the guaranteed-population floor that was checked.
    """

    t_low: int
    t_high: int
    population: int
    sigma_window: tuple[float, float]
    pigeonhole_bound: float
    meets_bound: bool


def _check_budget(k: int, y: int, budget: int) -> None:
    if y**k > budget:
        raise BudgetExceeded(f"y^k = {y**k} exceeds the enumeration budget {budget}")


def build_histogram(k: int, y: int, budget: int = DEFAULT_BUDGET) -> NormHistogram:
    """Exact squared-norm census of the cube [0, y-1]^k."""
    if k < 1 or y < 1:
        raise ValueError(f"need k >= 1 and y >= 1, got k={k}, y={y}")
    _check_budget(k, y, budget)
    base_len = (y - 1) ** 2 + 1
    if y**k < 2**62:
        base = np.zeros(base_len, dtype=np.int64)
        for j in range(y):
            base[j * j] = 1
        counts = base
        for _ in range(k - 1):
            counts = np.convolve(counts, base)
        mapping = {int(t): int(c) for t, c in enumerate(counts) if c}
    else:
        base_list = [0] * base_len
        for j in range(y):
            base_list[j * j] = 1
        counts_list = base_list
        for _ in range(k - 1):
            out = [0] * (len(counts_list) + base_len - 1)
            for i, ci in enumerate(counts_list):
                if ci:
                    for j in range(y):
                        out[i + j * j] += ci
            counts_list = out
        mapping = {t: c for t, c in enumerate(counts_list) if c}
    return NormHistogram(k=k, y=y, counts=mapping)


def write_histogram_csv(hist: NormHistogram, fh: IO[str]) -> None:
    """Dump as `norm_sq,count` rows, ascending by norm_sq."""
    fh.write("norm_sq,count\n")
    for t in sorted(hist.counts):
        fh.write(f"{t},{hist.counts[t]}\n")


def _window_ends(mu: Fraction, bound_sq: Fraction) -> tuple[int, int]:
    """Integer ends [ceil(mu - s), floor(mu + s)] for s = sqrt(bound_sq), exact."""
    s = math.sqrt(float(bound_sq))

    def left_ok(t: int) -> bool:
        d = mu - t
        return d <= 0 or d * d <= bound_sq

    def right_ok(t: int) -> bool:
        d = Fraction(t) - mu
        return d <= 0 or d * d <= bound_sq

    lo = math.ceil(float(mu) - s)
    while not left_ok(lo):
        lo += 1
    while left_ok(lo - 1):
        lo -= 1
    hi = math.floor(float(mu) + s)
    while not right_ok(hi):
        hi -= 1
    while right_ok(hi + 1):
        hi += 1
    return lo, hi


def select_behrend_shell(
    hist: NormHistogram, moments: MomentSummary, a: float
) -> ShellSelection:
    """Pick the most populated single squared norm inside [mu - a*sigma, mu + a*sigma].

    Ties break toward the smallest norm.  The returned selection records the
    pigeonhole floor (1 - 1/a^2) * y^k / (2*a*sigma + 1).
    """
    if a <= 0:
        raise ValueError(f"a must be > 0, got {a}")
    a_frac = Fraction(a)
    lo, hi = _window_ends(moments.mu_Z, a_frac * a_frac * moments.var_Z)
    best_t = None
    best_count = 0
    for t in sorted(hist.counts):
        if lo <= t <= hi and hist.counts[t] > best_count:
            best_t, best_count = t, hist.counts[t]
    if best_t is None:
        raise EmptyWindow(f"no populated squared norm in [{lo}, {hi}]")
    total = hist.y**hist.k
    sigma = moments.sigma_Z
    bound = float((1 - 1 / (a_frac * a_frac)) * total) / (2 * a * sigma + 1)
    window = (float(moments.mu_Z) - a * sigma, float(moments.mu_Z) + a * sigma)
    return ShellSelection(
        t_low=best_t,
        t_high=best_t,
        population=best_count,
        sigma_window=window,
        pigeonhole_bound=bound,
        meets_bound=best_count >= bound - 1e-9,
    )


def annulus_count(moments: MomentSummary, g: int) -> int:
    """Number of width-g sub-windows tiling the a=2 Chebyshev window: ceil(4*sigma/g)."""
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    var16 = 16 * moments.var_Z
    ell = max(1, math.ceil(4 * moments.sigma_Z / g))
    while Fraction(ell * g) ** 2 < var16:
        ell += 1
    while ell > 1 and Fraction((ell - 1) * g) ** 2 >= var16:
        ell -= 1
    return ell


def select_elkin_annulus(
    hist: NormHistogram, moments: MomentSummary, g: int
) -> ShellSelection:
    """Pick the most populated sub-window of the a=2 Chebyshev window.

    The window is tiled into ell = ceil(4*sigma/g) integer sub-windows: the
    first ell-1 are half-open of width g (g integer norms each), the last is
    closed and absorbs the remainder (at most g+1 norms).  Ties break toward
    the smallest t_low.  The pigeonhole floor is ceil((3/4) * y^k / ell).
    """
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    lo0, hi = _window_ends(moments.mu_Z, 4 * moments.var_Z)
    if lo0 > hi:
        raise EmptyWindow("the Chebyshev window contains no integer squared norm")
    ell = annulus_count(moments, g)
    best: tuple[int, int] | None = None
    best_count = 0
    for i in range(1, ell + 1):
        w_lo = lo0 + (i - 1) * g
        w_hi = hi if i == ell else min(hi, w_lo + g - 1)
        if w_lo > hi:
            break
        count = hist.population(w_lo, w_hi)
        if count > best_count:
            best, best_count = (w_lo, w_hi), count
    if best is None:
        raise EmptyWindow(f"no populated squared norm in [{lo0}, {hi}]")
    total = hist.y**hist.k
    bound = -((-3 * total) // (4 * ell))  # ceil(3*total / (4*ell))
    sigma = moments.sigma_Z
    window = (float(moments.mu_Z) - 2 * sigma, float(moments.mu_Z) + 2 * sigma)
    return ShellSelection(
        t_low=best[0],
        t_high=best[1],
        population=best_count,
        sigma_window=window,
        pigeonhole_bound=float(bound),
        meets_bound=best_count >= bound,
    )


def _coords_of_range(start: int, stop: int, k: int, y: int) -> np.ndarray:
    """Cube points with lexicographic ranks in [start, stop), as an array."""
    rem = np.arange(start, stop, dtype=np.int64)
    coords = np.empty((stop - start, k), dtype=np.int64)
    for j in range(k - 1, -1, -1):
        rem, coords[:, j] = np.divmod(rem, y)
    return coords


def _members_in_band(
    k: int, y: int, t_low: int, t_high: int, c0_lo: int, c0_hi: int
) -> list[LatticeVector]:
    stride = y ** (k - 1)
    out: list[LatticeVector] = []
    start, stop = c0_lo * stride, (c0_hi + 1) * stride
    for chunk_start in range(start, stop, _CHUNK):
        chunk_stop = min(chunk_start + _CHUNK, stop)
        coords = _coords_of_range(chunk_start, chunk_stop, k, y)
        norms = np.einsum("ij,ij->i", coords, coords)
        mask = (norms >= t_low) & (norms <= t_high)
        for row, t in zip(coords[mask], norms[mask]):
            out.append(LatticeVector(tuple(int(c) for c in row), int(t)))
    return out


def shell_members(
    k: int,
    y: int,
    shell: ShellSelection,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> list[LatticeVector]:
    """All cube vectors with t_low <= ||v||^2 <= t_high, in lexicographic order.

    With threads > 1 the first coordinate is split into contiguous bands
    enumerated concurrently; results merge in band order, so output is
    identical for every thread count.
    """
    _check_budget(k, y, budget)
    t_low, t_high = shell.t_low, shell.t_high
    # Skip first coordinates whose own square already exceeds the window top.
    c0_max = min(y - 1, math.isqrt(t_high)) if t_high >= 0 else -1
    if c0_max < 0:
        return []
    n_bands = max(1, min(threads, c0_max + 1))
    edges = np.linspace(0, c0_max + 1, n_bands + 1, dtype=int)
    bands = [(int(edges[i]), int(edges[i + 1]) - 1) for i in range(n_bands)]
    bands = [(a, b) for a, b in bands if a <= b]
    if threads <= 1 or len(bands) == 1:
        results = [_members_in_band(k, y, t_low, t_high, a, b) for a, b in bands]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_members_in_band, k, y, t_low, t_high, a, b)
                for a, b in bands
            ]
            results = [f.result() for f in futures]
    members: list[LatticeVector] = []
    for part in results:
        members.extend(part)
    return members


def _count_work(k: int, t: int) -> int:
    return k * (t + 1) * (math.isqrt(t) + 1)


def _capped_counts_table(
    k: int, t: int, m: int, budget: int
) -> np.ndarray | list[int]:
    """cumulative_count[s] = lattice points with norm^2 <= s, for all s <= t."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if not 1 <= m <= k + 1:
        raise ValueError(f"m must be in [1, {k + 1}], got {m}")
    if _count_work(k, t) > budget:
        raise BudgetExceeded(
            f"counting work ~{_count_work(k, t)} exceeds the budget {budget}"
        )
    n_constrained = k - m + 1 if m <= k else 0
    root = math.isqrt(t)
    exact = (2 * root + 1) ** k >= 2**62
    if exact:
        counts: list[int] = [1] * (t + 1)
        for dim in range(k):
            half = dim < n_constrained
            new = counts[:]
            for a in range(1, root + 1):
                sq = a * a
                if sq > t:
                    break
                w = 1 if half else 2
                for s in range(sq, t + 1):
                    new[s] += w * counts[s - sq]
            counts = new
        return counts
    arr = np.ones(t + 1, dtype=np.int64)
    for dim in range(k):
        w = 1 if dim < n_constrained else 2
        new = arr.copy()
        for a in range(1, root + 1):
            sq = a * a
            new[sq:] += w * arr[: t + 1 - sq]
        arr = new
    return arr


def count_capped_ball(k: int, t: int, m: int, budget: int = DEFAULT_BUDGET) -> int:
    """Exact number of alpha in Z^k with ||alpha||^2 <= t and alpha_i >= 0 for i >= m.

    m = k+1 means no half-space constraints, m = 1 constrains every coordinate.
    """
    table = _capped_counts_table(k, t, m, budget)
    return int(table[t])


def capped_ball_volume(k: int, t: float, m: int) -> float:
    """Volume beta_k / 2^max(k-m+1, 0) * t^(k/2); dimension 0 has volume 1."""
    if k == 0:
        return 1.0
    halves = max(k - m + 1, 0)
    return ball_volume(k, t) / 2.0**halves


@dataclass(frozen=True)
class DiscrepancyRecord:
    """Exact count vs volume of one capped ball, normalized two dimensions down."""

    k: int
    t: int
    m: int
    count_exact: int
    volume: float
    reference_volume: float

    @property
    def ratio(self) -> float:
        return abs(self.count_exact - self.volume) / self.reference_volume


def discrepancy_scan(
    k: int, t_grid: Sequence[int], m: int, budget: int = DEFAULT_BUDGET
) -> list[DiscrepancyRecord]:
    """One record per t: how far the exact count strays from the volume.

    The normalizer is the capped-ball volume in dimension k-2 at the same t,
    the natural scale of the count/volume gap.  Requires every t >= 1.
    """
    if k < 2:
        raise ValueError(f"discrepancy scans need k >= 2, got {k}")
    if any(t < 1 for t in t_grid):
        raise ValueError("every t in the grid must be >= 1")
    if not t_grid:
        return []
    table = _capped_counts_table(k, max(t_grid), m, budget)
    records = []
    for t in t_grid:
        records.append(
            DiscrepancyRecord(
                k=k,
                t=t,
                m=m,
                count_exact=int(table[t]),
                volume=capped_ball_volume(k, t, m),
                reference_volume=capped_ball_volume(k - 2, t, m),
            )
        )
    return records
