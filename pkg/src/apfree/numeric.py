"""Exact and floating-point numerics behind the constructions.

Everything that is a closed formula lives here: half-integer Gamma values,
ball volumes, the exact first two moments of the squared norm of a uniform
random cube vector, the witness-count exponent eta(epsilon), the classical
and improved density comparators, and parameter derivation from a target
interval bound n.

Moments are kept as exact rationals.  For Y uniform on {0..y-1}:

    E[Y^2] = (y-1)(2y-1)/6
    E[Y^4] = (y-1)(2y-1)(3y^2 - 3y - 1)/30

so Z = sum of k independent Y_i^2 has mu_Z = k*E[Y^2] and
var_Z = k*(E[Y^4] - E[Y^2]^2) exactly.  Logarithms are base 2 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateParameters

#: Default epsilon for the annulus construction, chosen well inside the
#: feasibility window eps + eta(eps) < 1 - log2(pi*e/6) ~ 0.4908.
DEFAULT_EPSILON = 0.05

#: Default Chebyshev multiplier for the sphere-shell construction.
DEFAULT_CHEBYSHEV_A = 2.0


@dataclass(frozen=True)
class ExactGamma:
    """Gamma value at an integer or half-integer point: rational * sqrt(pi)^s."""

    rational: Fraction
    sqrt_pi: bool

    @property
    def value(self) -> float:
        v = float(self.rational)
        return v * math.sqrt(math.pi) if self.sqrt_pi else v

    def __float__(self) -> float:
        return self.value


def gamma_half_integer(twice_n: int) -> ExactGamma:
    """Gamma(twice_n / 2), exact.

    Integer arguments give (m-1)!; half-integer arguments m + 1/2 give
    (2m)! sqrt(pi) / (2^(2m) m!), returned as a rational multiple of sqrt(pi).
    """
    if twice_n <= 0:
        raise ValueError(f"gamma argument must be positive, got {twice_n}/2")
    if twice_n % 2 == 0:
        m = twice_n // 2
        return ExactGamma(Fraction(math.factorial(m - 1)), sqrt_pi=False)
    m = (twice_n - 1) // 2
    coeff = Fraction(math.factorial(2 * m), 4**m * math.factorial(m))
    return ExactGamma(coeff, sqrt_pi=True)


def ball_volume(ell: int, radius_sq: float) -> float:
    """Volume of the ell-dimensional ball with squared radius radius_sq.

    beta_ell * radius_sq^(ell/2) with beta_ell = pi^(ell/2) / Gamma(ell/2 + 1).
    """
    if ell < 1:
        raise ValueError(f"dimension must be >= 1, got {ell}")
    if radius_sq < 0:
        raise ValueError(f"squared radius must be >= 0, got {radius_sq}")
    gamma = gamma_half_integer(ell + 2)
    # Cancel the sqrt(pi) of half-integer Gamma against pi^(ell/2) exactly.
    pi_power = ell / 2 - (0.5 if gamma.sqrt_pi else 0.0)
    beta = math.pi**pi_power / float(gamma.rational)
    return beta * radius_sq ** (ell / 2)


@dataclass(frozen=True)
class MomentSummary:
    """Exact mean/variance of the squared norm over the discrete cube."""

    mu_Z: Fraction
    var_Z: Fraction

    @property
    def sigma_Z(self) -> float:
        return math.sqrt(float(self.var_Z))


def exact_moments(k: int, y: int) -> MomentSummary:
    """Exact moments of Z = ||v||^2 for v uniform on the cube [0, y-1]^k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if y < 2:
        raise ValueError(f"y must be >= 2, got {y}")
    ey2 = Fraction((y - 1) * (2 * y - 1), 6)
    ey4 = Fraction((y - 1) * (2 * y - 1) * (3 * y * y - 3 * y - 1), 30)
    return MomentSummary(mu_Z=k * ey2, var_Z=k * (ey4 - ey2 * ey2))


def eta(epsilon: float) -> float:
    """Witness-count exponent: eps * (log2(2e) + log2(1 + 1/eps)).

    Monotone increasing in epsilon with limit 0 as eps -> 0; the number of
    nonzero integer vectors with squared norm <= eps*k is at most
    2 * 2^(eta(eps) * k).
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    return epsilon * (math.log2(2 * math.e) + math.log2(1 + 1 / epsilon))


def feasibility_gap(epsilon: float) -> float:
    """Slack of eps + eta(eps) below 1 - log2(pi*e/6); positive means feasible."""
    return (1 - math.log2(math.pi * math.e / 6)) - (epsilon + eta(epsilon))


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters governing one construction run.

    n is the target interval bound (arbitrary precision), k the dimension,
    y the cube side (digit radix is 2y).  a is the Chebyshev multiplier of
    the sphere-shell method; epsilon and g drive the annulus method.  g is
    None until derived or overridden.
    """

    n: int
    k: int
    y: int
    a: float = DEFAULT_CHEBYSHEV_A
    epsilon: float = DEFAULT_EPSILON
    g: int | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise DegenerateParameters(f"k must be >= 1, got {self.k}")
        if self.y < 2:
            raise DegenerateParameters(f"y must be >= 2, got {self.y}")
        if (2 * self.y) ** self.k > self.n:
            raise DegenerateParameters(
                f"(2y)^k = {(2 * self.y) ** self.k} exceeds n = {self.n}"
            )
        if self.a <= 0:
            raise DegenerateParameters(f"a must be > 0, got {self.a}")
        if self.epsilon <= 0:
            raise DegenerateParameters(f"epsilon must be > 0, got {self.epsilon}")
        if self.g is not None and self.g < 1:
            raise DegenerateParameters(f"g must be >= 1, got {self.g}")

    @property
    def n_effective(self) -> int:
        """The largest encodable bound (2y)^k; equals n for exact powers."""
        return (2 * self.y) ** self.k

    def effective_g(self) -> int:
        """The annulus squared-width: the override if set, else max(1, floor(eps*k)).

        When g is derived from epsilon, epsilon must sit inside the
        feasibility window eps + eta(eps) < 1 - log2(pi*e/6).
        """
        if self.g is not None:
            return self.g
        if feasibility_gap(self.epsilon) <= 0:
            raise DegenerateParameters(
                f"epsilon = {self.epsilon} violates eps + eta(eps) < 1 - log2(pi*e/6); "
                "pass g explicitly to override"
            )
        return max(1, math.floor(self.epsilon * self.k))


def _integer_kth_root(n: int, k: int) -> int:
    """Largest r >= 0 with r^k <= n, exact for arbitrary-precision n."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if k == 1 or n == 0:
        return n
    lo, hi = 0, 1 << ((n.bit_length() + k - 1) // k + 1)
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid
    return lo


def derive_dimension(n: int) -> int:
    """ceil(sqrt(2 * log2(n))), exact: the smallest k with 2^(k^2) >= n^2."""
    if n < 2:
        raise DegenerateParameters(f"n must be >= 2, got {n}")
    k = max(1, math.ceil(math.sqrt(2 * math.log2(n))))
    n_sq = n * n
    while 2 ** (k * k) < n_sq:
        k += 1
    while k > 1 and 2 ** ((k - 1) * (k - 1)) >= n_sq:
        k -= 1
    return k


def default_params(n: int, method: str) -> ConstructionParams:
    """Derive (k, y) from n: k = ceil(sqrt(2 log2 n)), y = floor(n^(1/k) / 2).

    The annulus method additionally gets g = max(1, floor(epsilon * k)).
    Raises DegenerateParameters when the derived y falls below 2.
    """
    method = method.lower()
    if method not in ("behrend", "elkin"):
        raise ValueError(f"unknown method {method!r}")
    k = derive_dimension(n)
    if k < 2:
        raise DegenerateParameters(f"n = {n} gives dimension k = {k} < 2")
    y = _integer_kth_root(n, k) // 2
    if y < 2:
        raise DegenerateParameters(f"n = {n} gives k = {k}, y = {y} < 2")
    params = ConstructionParams(n=n, k=k, y=y)
    if method == "elkin":
        params = ConstructionParams(
            n=n, k=k, y=y, g=max(1, math.floor(params.epsilon * k))
        )
    return params


def _bound_exponent(n: int) -> tuple[float, float]:
    log_n = math.log2(n)
    return log_n - 2 * math.sqrt(2) * math.sqrt(log_n), 0.25 * math.log2(log_n)


def behrend_bound(n: int) -> float:
    """n / (2^(2 sqrt(2) sqrt(log2 n)) * (log2 n)^(1/4)), the classical comparator.

    The implied constant is taken as 1; this is a yardstick, not a guarantee.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    base, quarter_log = _bound_exponent(n)
    return 2.0 ** (base - quarter_log)


def elkin_bound(n: int) -> float:
    """n * (log2 n)^(1/4) / 2^(2 sqrt(2) sqrt(log2 n)), the improved comparator."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    base, quarter_log = _bound_exponent(n)
    return 2.0 ** (base + quarter_log)
