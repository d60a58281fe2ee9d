"""Annulus construction: widen the shell, then keep only extreme points.

Instead of a single squared norm, take a window [T-g, T] of width g chosen
by pigeonhole among the tilings of the Chebyshev window.  Points of the
annulus that are convex combinations of other ball points always admit a
short certificate: a nonzero integer vector delta with ||delta||^2 <= g and
0 <= <b, delta> <= g.  Filtering out every point with such a certificate
leaves a subset of the ball's extreme points, which is convexly independent
and therefore encodes to a progression-free set.

The filter can empty the annulus at desk scale (small y relative to g); that
outcome is reported on the artifact, never raised, so parameter sweeps can
record it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .codec import APFreeSet, encode_all
from .errors import BudgetExceeded
from .lattice import (
    DEFAULT_BUDGET,
    LatticeVector,
    ShellSelection,
    build_histogram,
    select_elkin_annulus,
    shell_members,
)
from .numeric import ConstructionParams, eta, exact_moments


class WitnessVector(NamedTuple):
    delta: tuple[int, ...]
    norm_sq: int


class DhatCheck(NamedTuple):
    enumerated: int
    bound: float
    ok: bool


def _witness_count_overestimate(k: int, g: int) -> int:
    # sum_h 2^h * C(k-1+h, h) dominates the number of vectors with norm^2 <= g
    return sum(2**h * math.comb(k - 1 + h, h) for h in range(1, g + 1))


def enumerate_witnesses(
    k: int, g: int, budget: int = DEFAULT_BUDGET
) -> list[WitnessVector]:
    """All nonzero integer vectors delta in Z^k with ||delta||^2 <= g.

    Lexicographic order (negative entries first); each vector appears once.
    The list is not halved by symmetry because the certificate test
    0 <= <b, delta> <= g is not symmetric under delta -> -delta.
    """
    if k < 1 or g < 1:
        raise ValueError(f"need k >= 1 and g >= 1, got k={k}, g={g}")
    if _witness_count_overestimate(k, g) > budget:
        raise BudgetExceeded(f"witness enumeration for k={k}, g={g} exceeds {budget}")
    out: list[WitnessVector] = []
    prefix = [0] * k

    def rec(pos: int, rem: int) -> None:
        if pos == k:
            norm = g - rem
            if norm > 0:
                out.append(WitnessVector(tuple(prefix), norm))
            return
        top = math.isqrt(rem)
        for c in range(-top, top + 1):
            prefix[pos] = c
            rec(pos + 1, rem - c * c)
        prefix[pos] = 0

    rec(0, g)
    return out


def filter_survivors(
    points: Sequence[LatticeVector],
    witnesses: Sequence[WitnessVector],
    g: int,
) -> tuple[list[LatticeVector], int]:
    """Keep points b whose every witness dot product avoids [0, g].

    Survivors are returned in input order.  A removed point had some delta
    with 0 <= <b, delta> <= g, the certificate that b may be expressible as
    a convex combination of other ball points.
    """
    if not points:
        return [], 0
    if not witnesses:
        return list(points), 0
    p_arr = np.asarray([p.coords for p in points], dtype=np.int64)
    w_arr = np.asarray([w.delta for w in witnesses], dtype=np.int64)
    keep = np.ones(len(points), dtype=bool)
    chunk = max(1, (1 << 22) // max(1, len(witnesses)))
    for start in range(0, len(points), chunk):
        dots = p_arr[start : start + chunk] @ w_arr.T
        hit = ((dots >= 0) & (dots <= g)).any(axis=1)
        keep[start : start + chunk] = ~hit
    survivors = [p for p, ok in zip(points, keep) if ok]
    return survivors, len(points) - len(survivors)


@dataclass(frozen=True)
class ElkinArtifact:
    """One annulus run: selected window, census, filter outcome, encoded set."""

    params: ConstructionParams
    shell: ShellSelection
    annulus_points: int
    survivors: tuple[LatticeVector, ...]
    removed: int
    set: APFreeSet

    @property
    def is_empty(self) -> bool:
        return not self.survivors

    @property
    def survivor_fraction(self) -> float:
        return len(self.survivors) / self.annulus_points if self.annulus_points else 0.0


def construct_elkin(
    params: ConstructionParams,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> ElkinArtifact:
    """Run the full annulus pipeline; an emptied filter is reported, not raised."""
    k, y = params.k, params.y
    g = params.effective_g()
    moments = exact_moments(k, y)
    hist = build_histogram(k, y, budget)
    shell = select_elkin_annulus(hist, moments, g)
    members = shell_members(k, y, shell, budget=budget, threads=threads)
    witnesses = enumerate_witnesses(k, g, budget)
    survivors, removed = filter_survivors(members, witnesses, g)
    elements = tuple(sorted(encode_all(survivors, y, k))) if survivors else ()
    apset = APFreeSet(n=params.n, elements=elements, method="elkin", params_echo=params)
    return ElkinArtifact(
        params=params,
        shell=shell,
        annulus_points=len(members),
        survivors=tuple(survivors),
        removed=removed,
        set=apset,
    )


def dhat_bound_check(k: int, g: int, epsilon: float | None = None) -> DhatCheck:
    """Compare the enumerated witness count against 2 * 2^(eta * k).

    The exponent uses the caller's epsilon when g <= epsilon * k (the normal
    regime); otherwise, e.g. when the g >= 1 clamp is active, it is evaluated
    at the effective ratio g / k.
    """
    enumerated = len(enumerate_witnesses(k, g))
    if epsilon is not None and g <= epsilon * k:
        eps_eff = epsilon
    else:
        eps_eff = g / k
    bound = 2.0 * 2.0 ** (eta(eps_eff) * k)
    return DhatCheck(enumerated=enumerated, bound=bound, ok=enumerated <= bound)
