import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from binweaver.core import ContractError
from binweaver.entropy import (
    CHECKERS,
    ProbabilityVector,
    altered_binomial,
    altered_vs_next_check,
    binom_exponent_gap,
    binom_inequality_check,
    binom_inequality_finite,
    binomial,
    binomial_entropy_gap_check,
    entropy,
    entropy_lipschitz_check,
    entropy_sandwich_check,
    gamma_entropy_check,
    h,
    h_bin,
    h_inverse,
    multinomial_bounds_check,
    run_checkers,
)

probs = st.lists(st.integers(0, 50), min_size=1, max_size=8).filter(any).map(
    lambda xs: tuple(Fraction(x, sum(xs)) for x in xs))


class TestEntropy:
    def test_examples(self):
        assert entropy((0.5, 0.5)) == 1.0
        assert entropy((1, 0)) == 0.0
        mpmath.mp.dps = 40
        want = -(mpmath.mpf(1) / 4 * mpmath.log(mpmath.mpf(1) / 4, 2)
                 + mpmath.mpf(3) / 4 * mpmath.log(mpmath.mpf(3) / 4, 2))
        assert abs(entropy((Fraction(1, 4), Fraction(3, 4))) - float(want)) < 1e-15
        assert round(h(0.25), 6) == 0.811278

    def test_validation(self):
        for bad in [(), (0.5, 0.6), (-0.1, 1.1)]:
            with pytest.raises(ContractError):
                ProbabilityVector(bad)
        with pytest.raises(ContractError):
            h(1.5)

    @given(probs, st.randoms())
    def test_permutation_invariance_and_max(self, p, rnd):
        q = list(p)
        rnd.shuffle(q)
        assert abs(entropy(p) - entropy(q)) < 1e-12
        assert -1e-12 <= entropy(p) <= math.log2(len(p)) + 1e-12

    @given(st.floats(0, 0.5))
    def test_h_inverse_roundtrip(self, x):
        assert abs(h_inverse(h(x)) - x) < 1e-6

    def test_tiny_masses(self):
        # masses far below float resolution still contribute finite terms
        assert math.isfinite(h_bin(400))


class TestBinomial:
    def test_increasing(self):
        prev = -1.0
        for k in range(0, 513, 7):
            cur = h_bin(k)
            assert cur > prev
            prev = cur

    def test_pascal(self):
        for k in range(65):
            assert altered_binomial(k, Fraction(1, 2)) == binomial(k + 1)

    def test_altered_sums_to_one(self):
        assert sum(altered_binomial(7, 0.3)) == 1

    def test_gap_check(self):
        rep = binomial_entropy_gap_check(9, 64)
        assert rep.passed and rep.cases == 56
        assert 16 in rep.details and rep.details[16]["gap"] <= rep.details[16]["bound"]

    @pytest.mark.parametrize("lo, hi", [(1, 10), (9, 600), (20, 10)])
    def test_gap_range(self, lo, hi):
        with pytest.raises(ContractError):
            binomial_entropy_gap_check(lo, hi)

    def test_altered_examples(self):
        rep = altered_vs_next_check(5, [Fraction(1, 2)])
        assert rep.passed and rep.details["pascal_exact"] and rep.details["half_gap"] <= 1e-12
        assert altered_vs_next_check(5, [Fraction(i, 10) for i in range(11)]).passed
        zero = altered_vs_next_check(0, [0])
        assert zero.passed and entropy(altered_binomial(0, 0)) == 0 and h_bin(1) == 1


class TestBounds:
    def test_sandwich(self):
        rep = entropy_sandwich_check()
        assert rep.passed and rep.cases > 3000
        assert entropy_sandwich_check([0.5]).min_margin == pytest.approx(0, abs=1e-15)

    def test_gamma(self):
        assert gamma_entropy_check(0.1, 0.5, 2).passed
        assert gamma_entropy_check(0.01, 1, 2).passed
        rep = gamma_entropy_check(0.1, 0.5, 2, points=1)
        assert rep.min_margin == pytest.approx(0.1)
        with pytest.raises(ContractError):
            gamma_entropy_check(0.1, 0.2, 2)

    def test_binom_inequality(self):
        assert binom_exponent_gap(0.3, 0.4, 0) == pytest.approx(0, abs=1e-15)
        assert binom_exponent_gap(0.3, 0.4, 0.02) >= 0
        assert binom_inequality_check(random_triples=2000).passed

    def test_binom_finite_runs(self):
        rep = binom_inequality_finite(40)
        assert rep.cases > 0

    def test_multinomial(self):
        half = multinomial_bounds_check((Fraction(1, 2),) * 2, 10)
        assert half.passed and half.details["multinomial"] == 252
        assert multinomial_bounds_check((1, 0), 5).passed
        third = multinomial_bounds_check((Fraction(1, 3),) * 3, 9)
        assert third.passed and third.details["multinomial"] == 1680
        assert third.details["lower_factor"] == 55
        with pytest.raises(ContractError):
            multinomial_bounds_check((Fraction(1, 3),) * 3, 10)

    def test_lipschitz(self):
        rep = entropy_lipschitz_check(4, 0.01)
        assert rep.passed and rep.cases >= 10_000
        with pytest.raises(ContractError):
            entropy_lipschitz_check(4, 0.5)

    def test_lipschitz_large_eps_counterexample(self):
        # at k=2 the adversarial pair breaks the bound once eps is large enough
        rep = entropy_lipschitz_check(2, 0.2, trials=0)
        assert not rep.passed


def test_registry():
    reports = run_checkers()
    assert [r.name for r in reports] == [
        "binomial_entropy_gap", "altered_vs_next", "entropy_sandwich", "gamma_entropy",
        "binom_inequality", "multinomial_bounds", "entropy_lipschitz"]
    assert all(r.passed for r in reports)
    assert len(reports) == len(CHECKERS)
    with pytest.raises(ContractError):
        run_checkers(["nope"])
