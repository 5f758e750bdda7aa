import pytest

from expanders import (
    AsymptoticRatios,
    BoundConfig,
    ExpanderParams,
    ProblemSize,
    ValidationError,
    validate,
)


def params(s=4, n=40, N=200, d=4, eps=1 / 6):
    return ExpanderParams(ProblemSize(s=s, n=n, N=N, d=d), eps)


class TestValidate:
    def test_reference_parameters_pass(self):
        validate(params())

    def test_epsilon_boundaries_rejected(self):
        for eps in (0.5, 0.0, -0.1, 0.7):
            with pytest.raises(ValidationError, match="epsilon out of range"):
                validate(params(eps=eps))

    def test_d_exceeding_n_named(self):
        with pytest.raises(ValidationError, match="d exceeds n"):
            validate(params(d=10, n=5, N=20))

    def test_first_violation_wins(self):
        # s fails before the later d/n relation in declaration order
        with pytest.raises(ValidationError, match="s must be positive"):
            validate(ProblemSize(s=0, n=5, N=20, d=10))

    def test_size_relations(self):
        with pytest.raises(ValidationError, match="s exceeds N"):
            validate(ProblemSize(s=30, n=5, N=20, d=2))
        with pytest.raises(ValidationError, match="n exceeds N"):
            validate(ProblemSize(s=2, n=50, N=20, d=2))

    def test_target_neighbors_must_fit_in_n(self):
        # a_s = (1 - eps) d s = 30 > n = 20
        with pytest.raises(ValidationError, match="target neighbor count exceeds n"):
            validate(params(s=8, n=20, N=100, d=5, eps=0.25))

    def test_single_column_target_is_degenerate_but_allowed(self):
        validate(params(s=1, n=8, N=10, d=2, eps=0.25))

    def test_int64_limit(self):
        validate(ProblemSize(s=4, n=100, N=2**63 - 1, d=4))
        with pytest.raises(ValidationError, match="64-bit"):
            validate(ProblemSize(s=4, n=100, N=2**63, d=4))

    def test_config_invariants(self):
        validate(BoundConfig())
        with pytest.raises(ValidationError, match="eta"):
            validate(BoundConfig(eta=0.0))
        with pytest.raises(ValidationError, match="alpha"):
            validate(BoundConfig(alpha=1.5))
        with pytest.raises(ValidationError, match="c_n"):
            validate(BoundConfig(c_n=-1.0))
        with pytest.raises(ValidationError, match="nu"):
            validate(BoundConfig(nu=0.0))
        with pytest.raises(ValidationError, match="beta_mode"):
            validate(BoundConfig(beta_mode="linear"))

    def test_ratio_invariants(self):
        validate(AsymptoticRatios(rho=0.3, delta=0.5))
        with pytest.raises(ValidationError, match="rho out of range"):
            validate(AsymptoticRatios(rho=1.0, delta=0.5))
        with pytest.raises(ValidationError, match="delta out of range"):
            validate(AsymptoticRatios(rho=0.5, delta=0.0))


def test_target_neighbors_value():
    assert params().target_neighbors == pytest.approx((5 / 6) * 16)


def test_validate_rejects_unknown_types():
    with pytest.raises(TypeError):
        validate(42)
