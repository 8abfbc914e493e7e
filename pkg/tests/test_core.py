import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from binweaver.core import (
    ContractError,
    Instance,
    InstanceFormatError,
    Solution,
    classify_slack,
    is_alpha_balanced,
    parse_instance,
    serialize_instance,
    sizes_balanced,
    unbalancing_pair,
    verify_solution,
)


class TestParse:
    def test_basic(self):
        inst = parse_instance("4 2\n1 1 1 1\n2 2\n")
        assert inst == Instance((1, 1, 1, 1), (2, 2))
        assert (inst.n, inst.m) == (4, 2)

    def test_worked_example_weights(self):
        inst = parse_instance("3 1\n3 7 10\n20\n")
        assert inst.weights == (3, 7, 10) and inst.capacities == (20,)

    def test_arity_error_reports_line(self):
        with pytest.raises(InstanceFormatError, match="expected 2 weights, found 1") as exc:
            parse_instance("2 1\n1\n5\n")
        assert exc.value.line == 2

    def test_comments_and_whitespace(self):
        text = "# header\n\n  3   2 \n# weights next\n 1\t2 3\n4 5\n"
        assert parse_instance(text) == Instance((1, 2, 3), (4, 5))

    def test_bytes_input(self):
        assert parse_instance(b"1 1\n5\n5\n").weights == (5,)

    @pytest.mark.parametrize("text, line", [
        ("2 1\n1 x\n5\n", 2),
        ("2\n1 1\n5\n", 1),
        ("2 1\n1 1\n", 2),
        ("0 1\n1\n5\n", 1),
        ("2 1\n1 -1\n5\n", 2),
        ("1 17\n1\n" + " ".join(["1"] * 17) + "\n", 1),
        ("2 1\n1 1\n1 2\n", 3),
    ])
    def test_errors_carry_line(self, text, line):
        with pytest.raises(InstanceFormatError) as exc:
            parse_instance(text)
        assert exc.value.line == line

    def test_overflow(self):
        big = (1 << 63)
        with pytest.raises(InstanceFormatError, match="overflows"):
            parse_instance(f"2 1\n{big} {big}\n1\n")

    def test_json_form(self):
        doc = json.dumps({"weights": [3, 7, 10], "capacities": [10, 10]})
        assert parse_instance(doc) == Instance((3, 7, 10), (10, 10))

    def test_json_rejects_non_int(self):
        with pytest.raises(InstanceFormatError):
            parse_instance('{"weights": [1.5], "capacities": [2]}')

    @given(st.lists(st.integers(0, 10**12), min_size=1, max_size=20),
           st.lists(st.integers(0, 10**12), min_size=1, max_size=16))
    def test_roundtrip(self, w, c):
        inst = Instance(tuple(w), tuple(c))
        assert parse_instance(serialize_instance(inst, "round trip")) == inst


class TestVerify:
    def test_examples(self):
        assert verify_solution(Instance((1, 1, 1, 1), (2, 2)), Solution((0, 0, 1, 1)))
        assert not verify_solution(Instance((3, 3), (5, 1)), Solution((0, 1)))
        assert verify_solution(Instance((5, 4, 3, 3, 2, 1), (9, 9)), Solution((0, 0, 1, 1, 1, 1)))

    def test_contract(self):
        inst = Instance((1, 2), (3,))
        with pytest.raises(ContractError):
            verify_solution(inst, Solution((0,)))
        with pytest.raises(ContractError):
            verify_solution(inst, Solution((0, 1)))

    @given(st.lists(st.integers(0, 50), min_size=1, max_size=8), st.data())
    def test_monotone_in_capacity(self, w, data):
        m = data.draw(st.integers(1, 4))
        caps = data.draw(st.lists(st.integers(0, 100), min_size=m, max_size=m))
        sol = Solution(tuple(data.draw(st.lists(st.integers(0, m - 1), min_size=len(w),
                                                max_size=len(w)))))
        j = data.draw(st.integers(0, m - 1))
        bigger = list(caps)
        bigger[j] += data.draw(st.integers(0, 50))
        if verify_solution(Instance(tuple(w), tuple(caps)), sol):
            assert verify_solution(Instance(tuple(w), tuple(bigger)), sol)

    def test_from_bins(self):
        assert Solution.from_bins(3, [0b101, 0b010]).assignment == (0, 1, 0)
        with pytest.raises(ContractError):
            Solution.from_bins(3, [0b011, 0b010])
        with pytest.raises(ContractError):
            Solution.from_bins(3, [0b001])


def balanced_by_permutations(sizes, alpha) -> bool:
    n = sum(sizes)
    lo, hi = (Fraction(1, 2) - alpha) * n, (Fraction(1, 2) + alpha) * n
    for perm in itertools.permutations(range(len(sizes))):
        prefix, ok = 0, False
        for j in (None, *perm):
            if j is not None:
                prefix += sizes[j]
            if lo <= prefix <= hi:
                ok = True
                break
        if not ok:
            return False
    return True


class TestBalance:
    def _sol(self, sizes):
        return Solution(tuple(b for b, k in enumerate(sizes) for _ in range(k)))

    @pytest.mark.parametrize("sizes, alpha, expected", [
        ((5, 5), 0, True),
        ((1, 9), Fraction(3, 10), False),
        ((4, 6), Fraction(1, 10), True),
    ])
    def test_examples(self, sizes, alpha, expected):
        inst = Instance((1,) * sum(sizes), (100,) * len(sizes))
        assert is_alpha_balanced(inst, self._sol(sizes), alpha) is expected

    def test_float_alpha(self):
        inst = Instance((1,) * 10, (10, 10))
        assert not is_alpha_balanced(inst, self._sol((1, 9)), 0.3)

    def test_witness_pair(self):
        T, j = unbalancing_pair((1, 9), Fraction(3, 10))
        assert T in (0, 1) and j in (0, 1)

    @given(st.lists(st.integers(0, 6), min_size=1, max_size=5),
           st.fractions(0, Fraction(1, 2)))
    def test_subset_criterion_matches_permutations(self, sizes, alpha):
        if sum(sizes) == 0:
            return
        assert sizes_balanced(sizes, alpha) == balanced_by_permutations(sizes, alpha)

    @given(st.lists(st.integers(0, 8), min_size=1, max_size=5),
           st.fractions(0, Fraction(1, 2)), st.fractions(0, Fraction(1, 2)))
    def test_antitone_in_alpha(self, sizes, a, b):
        lo, hi = sorted((a, b))
        if sum(sizes) and sizes_balanced(sizes, lo):
            assert sizes_balanced(sizes, hi)


class TestSlack:
    def test_tight(self):
        inst = Instance((1, 2, 3), (3, 3))
        rep = classify_slack(inst, Solution((0, 0, 1)), 2, 3)
        assert rep.slack == (0, 0) and rep.large == (False, False)
        assert rep.small_items == 3 and rep.large_items == 0

    def test_threshold_arithmetic(self):
        inst = Instance((1, 1, 1), (6,))
        sol = Solution((0, 0, 0))
        rep = classify_slack(inst, sol, 5, 5)
        assert rep.slack == (3,) and rep.threshold == 3 and rep.large == (True,)
        rep = classify_slack(inst, sol, 4, 5)
        assert rep.threshold == 6 and rep.large == (False,)

    def test_overfull_names_bin(self):
        with pytest.raises(ContractError, match="bin 1"):
            classify_slack(Instance((5, 5), (5, 1)), Solution((0, 1)), 1, 4)
