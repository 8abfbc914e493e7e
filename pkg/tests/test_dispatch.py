import numpy as np
import pytest

from binweaver.core import Instance, verify_solution
from binweaver.generators import GeneratorSpec, generate
from binweaver.solvers import WitnessSearchConfig, solve_bruteforce, solve_master
from binweaver.solvers.dispatch import DispatcherTrace, with_paper_defaults

from conftest import crafted_infeasible, random_instance


def test_overloaded():
    rep = solve_master(Instance((5, 5), (4, 5)))
    assert rep.answer == "no"
    assert [e["case"] for e in rep.trace] == ["total-weight"]


def test_case0_on_all_zero():
    inst = Instance((0,) * 10, (0, 0))
    rep = solve_master(inst)
    assert rep.answer == "yes" and rep.algorithm == "master/dp"
    assert rep.trace[0]["case"] == "case0"
    assert verify_solution(inst, rep.certificate)


def test_case0_on_all_equal():
    inst, _ = generate(GeneratorSpec("all-equal", 16, m=2))
    rep = solve_master(inst)
    assert rep.trace[0]["case"] == "case0" and rep.trace[0]["outcome"] == rep.answer


def test_trace_order():
    rng = np.random.default_rng(2)
    for _ in range(10):
        rep = solve_master(crafted_infeasible(rng, 10, 2))
        assert rep.answer == "no"
        cases = [e["case"] for e in rep.trace]
        order = ["case0", "caseA", "caseB", "caseC", "fallback"]
        assert cases[0] == "case0" and cases[-1] == "fallback"
        assert [order.index(c) for c in cases] == sorted(order.index(c) for c in cases)


def test_agrees_with_bruteforce():
    rng = np.random.default_rng(5)
    for _ in range(60):
        inst = random_instance(rng, n_max=12)
        rep = solve_master(inst)
        assert rep.answer == solve_bruteforce(inst).answer
        if rep.answer == "yes":
            assert verify_solution(inst, rep.certificate)


def test_budget_gives_unknown():
    inst = crafted_infeasible(np.random.default_rng(0), 30, 2, w_max=10**6)
    rep = solve_master(inst, WitnessSearchConfig(budget_nodes=1 << 8, family_size=4),
                       budget_secs=0.0)
    assert rep.answer == "unknown"
    assert rep.trace[-1]["outcome"] in ("budget", "skipped")


def test_derived_defaults_logged():
    inst, _ = generate(GeneratorSpec("tight-partition", 10, m=4, seed=1))
    rep = solve_master(inst, WitnessSearchConfig(use_paper_defaults=True))
    assert rep.trace[0]["case"] == "parameters"
    assert rep.answer == solve_bruteforce(inst).answer
    cfg, params = with_paper_defaults(WitnessSearchConfig(), 4)
    assert 0 < cfg.delta < 1 and cfg.alpha >= 0
    assert set(params) >= {"alpha", "delta"}


def test_trace_type():
    t = DispatcherTrace()
    t.add("caseA", "inconclusive", nodes=3)
    assert t.cases == ["caseA"]
    assert t.to_list() == [{"case": "caseA", "outcome": "inconclusive", "stats": {"nodes": 3}}]


def test_report_serializes():
    rep = solve_master(Instance((3, 7, 10), (10, 10)))
    d = rep.to_dict()
    assert d["answer"] == "yes" and d["algorithm"].startswith("master/")
