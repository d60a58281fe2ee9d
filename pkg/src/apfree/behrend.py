"""Sphere-shell construction: pigeonhole a squared norm, encode the shell.

Pipeline: census the cube, pick the most populated squared norm T inside the
Chebyshev window [mu - a*sigma, mu + a*sigma], collect the vectors of that
norm, and map them to integers through the radix-2y digit map.  Vectors of a
common norm admit no componentwise midpoints (a sphere is strictly convex),
and the digit map transports midpoints, so the image is progression-free.

The zero vector encodes to 0, which is outside [1, n-1]; a selection landing
on T = 0 (whose only member is the origin) is re-run over the remaining
norms in the window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codec import APFreeSet, encode_all
from .errors import EmptyWindow
from .lattice import (
    DEFAULT_BUDGET,
    LatticeVector,
    NormHistogram,
    ShellSelection,
    build_histogram,
    select_behrend_shell,
    shell_members,
)
from .numeric import ConstructionParams, exact_moments


@dataclass(frozen=True)
class BehrendArtifact:
    """Everything one run produced: parameters, chosen shell, vectors, set."""

    params: ConstructionParams
    shell: ShellSelection
    vectors: tuple[LatticeVector, ...]
    set: APFreeSet


def _without_origin_bin(hist: NormHistogram) -> NormHistogram:
    counts = {t: c for t, c in hist.counts.items() if t != 0}
    return NormHistogram(k=hist.k, y=hist.y, counts=counts)


def construct_behrend(
    params: ConstructionParams,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> BehrendArtifact:
    """Run the full sphere-shell pipeline for the given parameters."""
    k, y = params.k, params.y
    moments = exact_moments(k, y)
    hist = build_histogram(k, y, budget)
    shell = select_behrend_shell(hist, moments, params.a)
    if shell.t_low == 0:
        # The T = 0 shell is exactly the origin, which cannot be encoded.
        try:
            shell = select_behrend_shell(_without_origin_bin(hist), moments, params.a)
        except EmptyWindow:
            raise EmptyWindow(
                "only the origin lies in the Chebyshev window; no encodable shell"
            ) from None
    vectors = shell_members(k, y, shell, budget=budget, threads=threads)
    elements = tuple(sorted(encode_all(vectors, y, k)))
    assert len(elements) == len(vectors), "digit map must be injective on the cube"
    apset = APFreeSet(
        n=params.n, elements=elements, method="behrend", params_echo=params
    )
    return BehrendArtifact(
        params=params, shell=shell, vectors=tuple(vectors), set=apset
    )
