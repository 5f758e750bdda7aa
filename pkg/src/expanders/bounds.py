"""Closed-form pieces of the expansion-failure probability bounds.

All combinatorial quantities go through log-gamma and every bound is carried
in log space as a (polynomial factor, exponent) pair; ``exp`` is applied only
at reporting time, clamped so a reported probability never exceeds 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import BoundConfig, ExpanderParams, ValidationError, validate
from .splitting import BetaParams, NeighborChain
from .splitting import beta as splitting_beta

LOG2 = math.log(2.0)
_QUARTER_E = math.exp(0.25)


def ceil_pow2(s: int) -> int:
    """Smallest power of two >= s."""
    if s < 1:
        raise ValidationError("s must be positive")
    return 1 << (s - 1).bit_length()


def entropy(z: float) -> float:
    """Shannon entropy H(z) in natural logarithms; H(0) = H(1) = 0."""
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"entropy argument {z!r} outside [0, 1]")
    if z == 0.0 or z == 1.0:
        return 0.0
    return -z * math.log(z) - (1.0 - z) * math.log1p(-z)


def entropy_deriv(z: float) -> float:
    """H'(z) = log((1 - z) / z), antisymmetric about z = 1/2."""
    if not 0.0 < z < 1.0:
        raise ValueError(f"entropy_deriv argument {z!r} outside (0, 1)")
    return math.log1p(-z) - math.log(z)


def log_binom(n: int, k: int) -> float:
    """log C(n, k) via lgamma; exact enough for 64-bit sizes."""
    if k < 0 or k > n:
        raise ValueError(f"binomial ({n}, {k}) out of range")
    return (
        math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)
    )


def p_n_intersect(n: int, b: int, b1: int, b2: int) -> float:
    """Probability that two uniform subsets of [n], of sizes b1 and b2, have
    union of size exactly b (equivalently overlap b1 + b2 - b).

    Equals C(b1, b1+b2-b) * C(n-b1, b-b1) / C(n, b2); sums to 1 over the
    admissible union sizes b in [max(b1, b2), min(n, b1 + b2)].
    """
    if not (1 <= b1 <= n and 1 <= b2 <= n):
        raise ValueError("subset sizes must lie in [1, n]")
    if not max(b1, b2) <= b <= min(n, b1 + b2):
        raise ValueError(f"union size {b} not admissible for ({n}, {b1}, {b2})")
    log_p = (
        log_binom(b1, b1 + b2 - b)
        + log_binom(n - b1, b - b1)
        - log_binom(n, b2)
    )
    return math.exp(log_p)


def _check_union_args(n: int, x: float, y: float, z: float) -> None:
    if not (0 < y <= n and 0 < z <= n):
        raise ValueError("y and z must lie in (0, n]")
    if not max(y, z) <= x <= min(n, y + z):
        raise ValueError(f"x = {x} not admissible for (n={n}, y={y}, z={z})")


def pi_poly(n: int, x: float, y: float, z: float) -> float:
    """Polynomial factor of the union-size bound P_n(x,y,z) <= pi * exp(psi_n).

    Case selection requires y >= z (the underlying probability is symmetric
    in (y, z), so callers order the pair): the general case {y,z} < x < y+z,
    or one of x=y>z, x=y+z, x=y=z. Degenerate denominators (x = n in the
    general case, y + z = n at x = y + z) yield +inf, a trivially valid
    polynomial factor.
    """
    _check_union_args(n, x, y, z)
    if x == y == z:
        if x == n:
            return math.inf
        return 1.25**2 * math.sqrt(2.0 * math.pi * z * (n - z) / n)
    if x == y and y > z:
        return 1.25**3 * math.sqrt(y * (n - z) / (n * (y - z)))
    if x == y + z:
        if n == x:
            return math.inf
        return 1.25**3 * math.sqrt((n - y) * (n - z) / (n * (n - y - z)))
    if y < x < y + z and z < x:
        if x == n:
            return math.inf
        return 1.25**4 * math.sqrt(
            y * z * (n - y) * (n - z)
            / (2.0 * math.pi * n * (y + z - x) * (x - y) * (x - z) * (n - x))
        )
    raise ValueError(f"no polynomial case matches (x={x}, y={y}, z={z})")


def psi_n_exponent(n: int, x: float, y: float, z: float) -> float:
    """Exponent of the union-size bound:
    psi_n(x,y,z) = y H((x-z)/y) + (n-y) H((x-y)/(n-y)) - n H(z/n).
    """
    _check_union_args(n, x, y, z)
    first = y * entropy((x - z) / y)
    second = 0.0 if y == n else (n - y) * entropy((x - y) / (n - y))
    return first + second - n * entropy(z / n)


def psi_i(n: int, a_i: float, a_2i: float) -> float:
    """Per-level exponent contribution psi_i =
    (n - a_i) H((a_2i - a_i)/(n - a_i)) + a_i H((a_2i - a_i)/a_i) - n H(a_i/n).

    Zero on the expected chain; strictly negative when a_2i falls short of
    a_i (2 - a_i / n).
    """
    if not 0.0 < a_i <= a_2i:
        raise ValueError("need 0 < a_i <= a_2i")
    if a_2i > min(2.0 * a_i, float(n)):
        raise ValueError("a_2i exceeds min(2 a_i, n)")
    growth = a_2i - a_i
    first = 0.0 if a_i == n else (n - a_i) * entropy(growth / (n - a_i))
    return first + a_i * entropy(growth / a_i) - n * entropy(a_i / n)


def psi_i_upper(n: int, a_i: float, beta: float, eta: float) -> float:
    """Negative upper bound -a_i eta (beta-1) / (beta (1 - beta a_i / n)).

    eta stands in for a mean-value gap that is not computable from the chain
    alone, so this is a shape statement, not a certified inequality; see the
    configuration notes on eta.
    """
    if beta < 1.0 or eta <= 0.0:
        raise ValueError("need beta >= 1 and eta > 0")
    occupancy = beta * a_i / n
    if occupancy >= 1.0:
        raise ValueError("beta a_i / n must stay below 1")
    return -a_i * eta * (beta - 1.0) / (beta * (1.0 - occupancy))


@dataclass(frozen=True)
class PsiTerms:
    """Per-level psi_i values over the ladder plus their weighted sum."""

    levels: tuple[int, ...]
    values: tuple[float, ...]
    weighted_sum: float


def psi_terms(chain: NeighborChain) -> PsiTerms:
    """psi_i for every i on the ladder below s, weighted by s / (2 i)."""
    levels = chain.levels[:-1]
    values = []
    total = 0.0
    for i, a_i, a_2i in zip(levels, chain.values, chain.values[1:]):
        term = psi_i(chain.n, a_i, a_2i)
        values.append(term)
        total += chain.s / (2.0 * i) * term
    return PsiTerms(levels, tuple(values), total)


def p_n_old(s: int, d: int) -> float:
    """Polynomial factor 2 / (25 sqrt(2 pi s^3 d^3)) of the first dyadic bound."""
    return 2.0 / (25.0 * math.sqrt(2.0 * math.pi * s**3 * d**3))


def psi_cap_n_old(chain: NeighborChain) -> float:
    """Exponent n * Psi_n of the first dyadic bound: 3 s log(5 d) + sum of
    weighted psi_i."""
    d = chain.values[0]
    return 3.0 * chain.s * math.log(5.0 * d) + psi_terms(chain).weighted_sum


def p_n_new(s: int) -> float:
    """Improved polynomial factor 2^-3 s^(9/2) e^(1/4)."""
    return 0.125 * s**4.5 * _QUARTER_E


def psi_cap_n_new(chain: NeighborChain) -> float:
    """Improved exponent: (3 log2 / 2) log2(s)^2 + (log2 s - 3/2) log a_s +
    weighted psi_i sum; polylog in s instead of linear."""
    l2s = math.log2(chain.s)
    return (
        1.5 * LOG2 * l2s**2
        + (l2s - 1.5) * math.log(chain.endpoint)
        + psi_terms(chain).weighted_sum
    )


@dataclass(frozen=True)
class BoundResult:
    """A probability bound carried as poly_factor * exp(exponent)."""

    poly_factor: float
    exponent: float
    log_prob_bound: float

    @classmethod
    def assemble(cls, poly_factor: float, exponent: float) -> "BoundResult":
        if not (poly_factor > 0.0 and math.isfinite(poly_factor)):
            raise ValidationError("poly_factor must be positive and finite")
        log_bound = math.log(poly_factor) + exponent
        if not math.isfinite(log_bound):
            raise ValidationError("log_prob_bound must be finite")
        return cls(poly_factor, exponent, log_bound)

    @property
    def probability(self) -> float:
        """min(1, exp(log_prob_bound)); the reportable probability."""
        if self.log_prob_bound >= 0.0:
            return 1.0
        return math.exp(self.log_prob_bound)

    @property
    def value(self) -> float:
        """The unclamped bound exp(log_prob_bound); +inf if it overflows."""
        try:
            return math.exp(self.log_prob_bound)
        except OverflowError:
            return math.inf


def beta_value(config: BoundConfig, epsilon: float, d: int) -> float:
    """Chain constant beta for this configuration and expansion coefficient."""
    validate(config)
    if config.beta_mode == "approx_one_plus_eps":
        return 1.0 + epsilon
    return splitting_beta(BetaParams(eps_n=epsilon, alpha=config.alpha, d=d))


def tau_value(config: BoundConfig, epsilon: float, d: int) -> float:
    """tau = eta (beta - 1) / beta, the decay-rate factor of the exponents."""
    b = beta_value(config, epsilon, d)
    return config.eta * (b - 1.0) / b


def _consistent_chain(params: ExpanderParams, chain: NeighborChain, s_eval: int) -> None:
    size = params.size
    if chain.s != s_eval:
        raise ValidationError(f"chain built for s={chain.s}, expected {s_eval}")
    if chain.n != size.n:
        raise ValidationError(f"chain built for n={chain.n}, expected {size.n}")
    if chain.values[0] != float(size.d):
        raise ValidationError("chain must start at a_1 = d")


def prob_bound_dyadic(
    params: ExpanderParams, chain: NeighborChain, version: str = "new"
) -> BoundResult:
    """Fixed-set tail bound on P(|A_s| <= a_s), a_s being the chain endpoint.

    The expected chain (beta = 1) covers the unrestricted event at the mean
    endpoint; a constrained chain (beta > 1) covers the event at its smaller
    endpoint. Because P(|A_s| <= t) is monotone in t, the result also
    dominates any threshold at or below the chain endpoint. s is evaluated at
    the next power of two.
    """
    validate(params)
    if version not in ("old", "new"):
        raise ValidationError(f"unknown bound version {version!r}")
    s_eval = ceil_pow2(params.size.s)
    _consistent_chain(params, chain, s_eval)
    if version == "old":
        return BoundResult.assemble(
            p_n_old(s_eval, params.size.d), psi_cap_n_old(chain)
        )
    return BoundResult.assemble(p_n_new(s_eval), psi_cap_n_new(chain))


def prob_bound_epsilon(
    params: ExpanderParams, config: BoundConfig = BoundConfig()
) -> BoundResult:
    """Fixed-set bound on P(|A_s| <= (1-eps) d s) in closed form (no chain).

    Decays like exp(-tau (1-eps) d s log2(s/2) / 2) up to polylog corrections,
    so it needs s >= 4 to have any bite.
    """
    validate(params)
    validate(config)
    size = params.size
    eps = params.epsilon
    s_eval = ceil_pow2(size.s)
    if s_eval < 4:
        raise ValidationError("epsilon bound needs s >= 4")
    tau = tau_value(config, eps, size.d)
    l2s = math.log2(s_eval)
    poly = (
        _QUARTER_E
        * s_eval ** (math.log2(1.0 - eps) + 3.0)
        / math.sqrt(64.0 * (1.0 - eps) ** 3 * size.d**3)
    )
    exponent = -0.5 * (
        tau * (1.0 - eps) * size.d * s_eval * (l2s - 1.0)
        - 5.0 * LOG2 * l2s**2
        - 2.0 * math.log(size.d) * l2s
    )
    return BoundResult.assemble(poly, exponent)


def prob_bound_union(
    params: ExpanderParams, config: BoundConfig = BoundConfig()
) -> BoundResult:
    """Bound on expansion failure over every column set of size at most s.

    Multiplies the fixed-set bound by C(N, s) (via the Stirling upper bound)
    and absorbs the result into an exponent at scale N. The polylog part that
    vanishes like o(N) is kept exactly so the finite-size bound stays a true
    upper bound. s = 2 is admitted even though the decaying term then
    vanishes; the bound is simply >= 1 there.
    """
    validate(params)
    validate(config)
    size = params.size
    eps = params.epsilon
    s_eval = ceil_pow2(size.s)
    if s_eval < 2:
        raise ValidationError("union bound needs s >= 2")
    if s_eval >= size.N:
        raise ValidationError("s must stay below N after rounding")
    tau = tau_value(config, eps, size.d)
    l2s = math.log2(s_eval)
    ratio = s_eval / size.N
    poly = (
        5.0
        * _QUARTER_E
        * s_eval ** (math.log2(1.0 - eps) + 2.5)
        / math.sqrt(
            2.0**10 * (1.0 - eps) ** 3 * size.d**3 * math.pi * (1.0 - ratio)
        )
    )
    exponent = (
        -s_eval * math.log(ratio)
        + s_eval
        - tau * (1.0 - eps) * size.d / (2.0 * LOG2) * s_eval * math.log(s_eval / 2.0)
        + 2.5 * LOG2 * l2s**2
        + math.log(size.d) * l2s
    )
    return BoundResult.assemble(poly, exponent)


@dataclass(frozen=True)
class BinomialSandwich:
    """Two-sided Stirling bounds around an exact binomial, in log space."""

    log_lower: float
    log_exact: float
    log_upper: float

    @property
    def lower(self) -> float:
        return _safe_exp(self.log_lower)

    @property
    def exact(self) -> float:
        return _safe_exp(self.log_exact)

    @property
    def upper(self) -> float:
        return _safe_exp(self.log_upper)


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def binom_sandwich(N: int, p: float) -> BinomialSandwich:
    """16/(25 r) e^(N H(p)) <= C(N, pN) <= 5/(4 r) e^(N H(p)),
    r = sqrt(2 pi p (1-p) N).

    Carried in log space so the sandwich stays checkable far beyond the
    float64 range of the raw binomial.
    """
    if N < 2:
        raise ValidationError("N must be at least 2")
    if not 0.0 < p < 1.0:
        raise ValidationError("p out of range")
    k = p * N
    k_int = round(k)
    if abs(k - k_int) > 1e-9:
        raise ValidationError("p * N must be an integer")
    log_pref = N * entropy(p) - 0.5 * math.log(2.0 * math.pi * p * (1.0 - p) * N)
    return BinomialSandwich(
        log_lower=math.log(16.0 / 25.0) + log_pref,
        log_exact=log_binom(N, k_int),
        log_upper=math.log(5.0 / 4.0) + log_pref,
    )
