"""Problem-size and configuration values shared by the other modules.

Everything here is an immutable value type. ``validate`` re-checks every
invariant and reports the first violation in declaration order; no other
computation happens in this module.
"""

from __future__ import annotations

from dataclasses import dataclass

_INT64_MAX = 2**63 - 1

BETA_MODES = ("approx_one_plus_eps", "quadratic_root")


class ValidationError(ValueError):
    """A parameter set violates one of its declared invariants."""


@dataclass(frozen=True)
class ProblemSize:
    """Dimensions of one instance: sparsity s, n rows, N columns, d ones per column."""

    s: int
    n: int
    N: int
    d: int


@dataclass(frozen=True)
class ExpanderParams:
    """A ProblemSize together with the expansion coefficient epsilon in (0, 1/2)."""

    size: ProblemSize
    epsilon: float

    @property
    def target_neighbors(self) -> float:
        """The expansion target a_s = (1 - epsilon) * d * s."""
        return (1.0 - self.epsilon) * self.size.d * self.size.s


@dataclass(frozen=True)
class BoundConfig:
    """Tunables shared by the probability bounds and phase-transition curves.

    ``beta_mode`` selects how the chain constant beta is derived from epsilon:
    ``approx_one_plus_eps`` uses beta = 1 + epsilon, ``quadratic_root`` solves
    the defining quadratic with shortfall epsilon and this alpha.
    """

    eta: float = 1.0
    alpha: float = 1.0
    c_n: float = 2.0
    nu: float = 1.0
    beta_mode: str = "approx_one_plus_eps"


@dataclass(frozen=True)
class AsymptoticRatios:
    """Proportional-growth ratios rho = s/n and delta = n/N."""

    rho: float
    delta: float


def _check_int64(name: str, value: object) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"{name} must be an integer")
    if value > _INT64_MAX:
        raise ValidationError(f"{name} exceeds the 64-bit range")
    return value


def _validate_size(size: ProblemSize) -> None:
    for name in ("s", "n", "N", "d"):
        if _check_int64(name, getattr(size, name)) < 1:
            raise ValidationError(f"{name} must be positive")
    if size.d > size.n:
        raise ValidationError("d exceeds n")
    if size.s > size.N:
        raise ValidationError("s exceeds N")
    if size.n > size.N:
        raise ValidationError("n exceeds N")


def _validate_params(params: ExpanderParams) -> None:
    _validate_size(params.size)
    if not 0.0 < params.epsilon < 0.5:
        raise ValidationError("epsilon out of range")
    size = params.size
    a_s = params.target_neighbors
    # s = 1 is a permitted degenerate target: a single column always has
    # exactly d neighbors, so a_s >= d only becomes meaningful once two or
    # more columns can overlap.
    if size.s >= 2 and a_s < size.d:
        raise ValidationError("target neighbor count below d")
    if a_s > size.n:
        raise ValidationError("target neighbor count exceeds n")


def _validate_config(config: BoundConfig) -> None:
    if not config.eta > 0.0:
        raise ValidationError("eta must be positive")
    if not 0.0 < config.alpha <= 1.0:
        raise ValidationError("alpha out of range")
    if not config.c_n > 0.0:
        raise ValidationError("c_n must be positive")
    if not config.nu > 0.0:
        raise ValidationError("nu must be positive")
    if config.beta_mode not in BETA_MODES:
        raise ValidationError("unknown beta_mode")


def _validate_ratios(ratios: AsymptoticRatios) -> None:
    if not 0.0 < ratios.rho < 1.0:
        raise ValidationError("rho out of range")
    if not 0.0 < ratios.delta < 1.0:
        raise ValidationError("delta out of range")


def validate(value: ProblemSize | ExpanderParams | BoundConfig | AsymptoticRatios) -> None:
    """Check every invariant of ``value``; raise ValidationError on the first failure."""
    if isinstance(value, ProblemSize):
        _validate_size(value)
    elif isinstance(value, ExpanderParams):
        _validate_params(value)
    elif isinstance(value, BoundConfig):
        _validate_config(value)
    elif isinstance(value, AsymptoticRatios):
        _validate_ratios(value)
    else:
        raise TypeError(f"no validator for {type(value).__name__}")
