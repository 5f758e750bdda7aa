"""Dyadic-splitting machinery for neighbor-count chains.

A chain records neighbor-count targets a_i for column-set sizes
i = 1, 2, 4, ..., s. All chains built here follow the constant-c doubling
rule

    a_{2i} = 2 a_i + c a_i^2,        c = -beta / n,

which is carried internally through v_i = 1 + c a_i: the rule becomes plain
squaring, v_{2i} = v_i ** 2, so v_i = v_1 ** i holds by construction and
a_i = n (1 - v_i) / beta stays accurate even when a_i is within a few ulp of
the fixed point n / beta. With beta = 1 the chain is exactly the expected
neighbor count of i independent random columns, and v_i = (1 - d/n) ** i is
the probability that a fixed row is missed by all i columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import ValidationError


class ChainCollapseError(ValueError):
    """The doubling rule failed to grow the chain (a_{2i} <= a_i)."""


@dataclass(frozen=True)
class SplitCounts:
    """How a set of s columns decomposes after j rounds of halving."""

    level: int
    large_card: int  # ceil(s / 2^j)
    small_card: int  # large_card - 1
    num_large: int   # sets of the larger cardinality
    num_small: int   # sets of the smaller cardinality


def split_counts(s: int, j: int) -> SplitCounts:
    """Cardinalities and multiplicities at level j of the dyadic splitting.

    The counts always satisfy num_large * large_card + num_small * small_card == s.
    """
    if s < 1:
        raise ValidationError("s must be positive")
    max_level = max((s - 1).bit_length() - 1, 0)
    if not 0 <= j <= max_level:
        raise ValidationError(f"level {j} out of range for s={s}")
    pieces = 1 << j
    large = -(-s // pieces)
    num_large = s - pieces * large + pieces
    return SplitCounts(j, large, large - 1, num_large, pieces - num_large)


@dataclass(frozen=True)
class BetaParams:
    """Inputs to the chain-constant quadratic.

    ``eps_n`` is the relative shortfall of the chain endpoint below its
    expected value; ``alpha`` in (0, 1] is the fraction of n reached by the
    doubling ladder.
    """

    eps_n: float
    alpha: float
    d: int


def beta(params: BetaParams) -> float:
    """Positive root of (1-e)(1-g) b^2 - b + (1-e) g = 0, g = exp(-alpha d).

    Returns the "+" branch, which is >= 1 on the whole valid domain and
    equals 1 exactly when eps_n = 0 and g < 1/2.
    """
    if not 0.0 <= params.eps_n < 1.0:
        raise ValidationError("eps_n out of range")
    if not 0.0 < params.alpha <= 1.0:
        raise ValidationError("alpha out of range")
    if params.d < 1:
        raise ValidationError("d must be positive")
    g = math.exp(-params.alpha * params.d)
    one_minus = 1.0 - params.eps_n
    disc = 1.0 - 4.0 * one_minus * one_minus * (1.0 - g) * g
    if disc < 0.0:
        raise ValidationError("negative discriminant")
    return (1.0 + math.sqrt(disc)) / (2.0 * one_minus * (1.0 - g))


@dataclass(frozen=True)
class NeighborChain:
    """Neighbor-count targets on the doubling ladder i = 1, 2, 4, ..., s.

    ``vacancy`` holds v_i = 1 + c a_i; it is the numerically exact carrier of
    the chain (see module docstring) and for beta = 1 equals the probability
    that a fixed row is untouched by i columns.
    """

    s: int
    n: int
    c: float
    beta: float
    levels: tuple[int, ...]
    values: tuple[float, ...]
    vacancy: tuple[float, ...]

    @property
    def entries(self) -> dict[int, float]:
        """Map from ladder size i to a_i."""
        return dict(zip(self.levels, self.values))

    @property
    def endpoint(self) -> float:
        """a_s, the value at the full set size."""
        return self.values[-1]

    def value(self, i: int) -> float:
        return self.values[self.levels.index(i)]


def constrained_chain(d: int, n: int, s: int, beta: float) -> NeighborChain:
    """Chain with c = -beta/n starting from a_1 = d.

    beta = 1 reproduces the expected chain; beta > 1 pulls the endpoint below
    its expected value while every consecutive triple still solves the cubic
    a_{2i}^3 - 2 a_i a_{2i}^2 + 2 a_i^2 a_{2i} - a_i^2 a_{4i} = 0.
    """
    if d < 1 or d > n:
        raise ValidationError("d must lie in [1, n]")
    if s < 1 or s & (s - 1):
        raise ValidationError("s must be a power of two")
    if not beta >= 1.0:
        raise ValidationError("beta must be at least 1")
    v1 = 1.0 - (beta * d) / n
    # v1 = 0 with beta = 1 is the benign d = n fixed point (chain constant at n)
    if v1 < 0.0 or (v1 == 0.0 and beta != 1.0):
        raise ChainCollapseError(
            f"chain collapse: beta*d = {beta * d:g} reaches n = {n}"
        )
    levels = [1]
    values = [float(d)]
    vacancy = [v1]
    while levels[-1] < s:
        v = vacancy[-1] * vacancy[-1]
        a = n * (1.0 - v) / beta
        assert a >= values[-1], "doubling rule must not shrink"
        levels.append(levels[-1] * 2)
        values.append(a)
        vacancy.append(v)
    return NeighborChain(
        s=s,
        n=n,
        c=-beta / n,
        beta=beta,
        levels=tuple(levels),
        values=tuple(values),
        vacancy=tuple(vacancy),
    )


def expected_chain(d: int, n: int, s: int) -> NeighborChain:
    """Expected-value chain a_{2i} = a_i (2 - a_i / n), a_1 = d."""
    return constrained_chain(d, n, s, 1.0)


def cubic_residual(a_i: float, a_2i: float, a_4i: float) -> float:
    """Left-hand side of the consecutive-triple cubic; zero on constant-c chains."""
    return a_2i**3 - 2.0 * a_i * a_2i**2 + 2.0 * a_i**2 * a_2i - a_i**2 * a_4i
