import math

import pytest
from hypothesis import given, strategies as st

from fqlcu.resources import (CostParams, alias_sampling_cost, beta_angle, ceil_log2, choose_aleph,
                             cost_model, equal_superposition_cost, estimate, optimize_kappa,
                             pair_superposition_cost, qpe_repetitions, qroam_cost,
                             qroam_uncompute_cost, select_cost, split_error_budget)
from fqlcu.sparse_assembly import SparseLcu


def test_split_error_budget():
    assert split_error_budget(1.6e-3, "molecular") == pytest.approx((1.0e-3, 3.0e-4, 3.0e-4), rel=1e-15)
    assert split_error_budget(1.6e-3, "dpw") == pytest.approx((1.58e-3, 0.0, 2.0e-5), rel=1e-15)
    with pytest.raises(ValueError):
        split_error_budget(0.0)
    with pytest.raises(ValueError):
        split_error_budget(1.0, "other")


@given(eps=st.floats(1e-9, 10.0), scheme=st.sampled_from(["molecular", "dpw"]))
def test_split_sums_exactly(eps, scheme):
    qpe, trunc, prep = split_error_budget(eps, scheme)
    assert qpe + trunc + prep == eps


def test_equal_superposition():
    assert equal_superposition_cost(7, 8) == (13, 10)
    assert equal_superposition_cost(12, 8) == (7, 10)
    assert equal_superposition_cost(8) == (0, 3)
    with pytest.raises(ValueError):
        equal_superposition_cost(0)


def test_pair_superposition():
    assert pair_superposition_cost(14, 8) == (33, 10)
    assert pair_superposition_cost(16, 8) == (0, 10)
    assert pair_superposition_cost(4, 8)[0] >= 0


@pytest.mark.parametrize("N,expect", [(3, 5.0522), (2, 3 * math.pi / 2)])
def test_beta_angle(N, expect):
    beta = beta_angle(N)
    assert beta == pytest.approx(expect, abs=1e-4)
    # overlap of target and start state with the rotated ancilla
    cos_alpha = math.sqrt(N * (N - 1) / 4 ** ceil_log2(N)) * math.sin(beta / 2 + math.pi / 2)
    assert cos_alpha == pytest.approx(-0.5, abs=1e-12)
    assert 4 * cos_alpha**3 - 3 * cos_alpha == pytest.approx(1.0, abs=1e-12)


@given(N=st.integers(2, 10_000))
def test_beta_always_solvable(N):
    assert 0 <= beta_angle(N) < 2 * math.pi


def test_qroam():
    assert qroam_cost(1000, 100, 4)[0] == 550
    assert qroam_cost(1000, 100, 1)[0] == 1000
    assert qroam_uncompute_cost(1000, 32) == 64
    assert optimize_kappa(1000, 100, "min-T") == (4, 32)
    assert optimize_kappa(1000, 100, "min-Qu")[0] == 1
    with pytest.raises(ValueError):
        qroam_cost(10, 5, 3)


def test_select_and_alias():
    assert select_cost(14, 9, "general") == 532
    assert select_cost(14, 9, "diagonal") == 406
    with pytest.raises(ValueError):
        select_cost(14, 0)
    assert alias_sampling_cost(100, 30) == 64
    assert alias_sampling_cost(34, 30) == 31
    assert alias_sampling_cost(35, 30) == 32
    with pytest.raises(ValueError):
        alias_sampling_cost(32, 30)


def test_repetitions():
    assert qpe_repetitions(100.0, 1e-3) == 157080
    with pytest.raises(ValueError):
        qpe_repetitions(0.0, 1e-3)
    with pytest.raises(ValueError):
        qpe_repetitions(1.0, 0.0)


@given(lam=st.floats(1e-3, 1e6), eps=st.floats(1e-8, 1.0))
def test_choose_aleph_is_smallest(lam, eps):
    a = choose_aleph(lam, eps)
    assert lam * 2.0**-a <= eps
    assert a == 1 or lam * 2.0 ** -(a - 1) > eps


def test_params_validation():
    with pytest.raises(ValueError):
        CostParams(eps_tot=1.0, eps_qpe=0.5, eps_trunc=0.1, eps_prep=0.1)
    with pytest.raises(ValueError):
        CostParams.from_budget(1.0, kappa1=3)
    with pytest.raises(ValueError):
        CostParams.from_budget(1.0, aleph=0)
    with pytest.raises(ValueError):
        CostParams.from_budget(1.0, mode="fast")
    assert CostParams.from_budget(1.0, mode="min-qu").mode == "min-Qu"


def _toy(L=37, N=6, M=3, kind="general"):
    width = 4 if kind == "general" else 3
    idx = [[(l >> (M * k)) % 2**M for k in range(width)] for l in range(L)]
    return SparseLcu(idx, [0.01 * (l + 1) for l in range(L)], kind, N, M)


@pytest.mark.parametrize("kind", ["general", "diagonal"])
def test_estimate_row_sums(kind):
    s = _toy(kind=kind)
    p = CostParams.from_budget(1.6e-3, "molecular")
    e = estimate(s, p)
    walk = sum(r.toffoli or 0 for r in e.rows if r.section == "walk")
    assert e.total_toffoli == (walk + 2) * e.iterations
    assert e.walk_toffoli == walk
    assert e.logical_qubits == sum(r.qubits or 0 for r in e.rows)
    assert e.rows[0].qubits == s.N * s.M
    assert e.lam == s.lambda_block
    assert e.m == e.aleph + 2 * ((4 if kind == "general" else 3) * s.M + 1)
    rows = {r.label: r for r in e.rows}
    assert rows["UNPREP equal superpositions"].toffoli == (
        rows["PREP equal superposition over l"].toffoli
        + rows["PREP equal superposition over i != j"].toffoli)
    assert rows["reflection"].toffoli == ceil_log2(s.L) + 2 * ceil_log2(s.N) + 2
    qb = ceil_log2(e.iterations + 1)
    assert rows["phase estimation ancillas"].qubits == qb
    assert rows["unary iteration over walk operator"].qubits == qb - 1
    assert isinstance(e.total_toffoli, int)
    d = e.to_dict()
    assert d["total_toffoli"] == e.total_toffoli and d["physical_qubits"] is None


@given(L=st.integers(1, 5000), lam=st.floats(1.0, 1e4), N=st.integers(2, 100), M=st.integers(1, 12))
def test_mode_dominance(L, lam, N, M):
    p_t = CostParams.from_budget(1e-3, mode="min-T")
    p_q = CostParams.from_budget(1e-3, mode="min-Qu")
    t = cost_model(lam, L, N, M, "general", p_t)
    q = cost_model(lam, L, N, M, "general", p_q)
    assert q.logical_qubits <= t.logical_qubits
    assert t.total_toffoli <= q.total_toffoli


@given(lam=st.floats(1.0, 1e4), f=st.floats(1.0, 10.0))
def test_monotone_in_lambda_and_eps(lam, f):
    p = CostParams.from_budget(1e-3, aleph=20)
    a = cost_model(lam, 500, 8, 5, "general", p)
    b = cost_model(lam * f, 500, 8, 5, "general", p)
    assert b.total_toffoli >= a.total_toffoli
    loose = CostParams.from_budget(1e-3 * f, aleph=20)
    assert cost_model(lam, 500, 8, 5, "general", loose).total_toffoli <= a.total_toffoli


def test_estimate_errors():
    empty = SparseLcu([], [], "general", 2, 1)
    with pytest.raises(ValueError):
        estimate(empty, CostParams.from_budget(1.0))
    zero = SparseLcu([[0, 1, 0, 0]], [0.0], "general", 2, 1)
    with pytest.raises(ValueError):
        estimate(zero, CostParams.from_budget(1.0))
    with pytest.raises(ValueError):
        cost_model(1.0, 10, 4, 2, "general", CostParams(1.0, 0.0, 0.5, 0.5))


def test_physical_multiplier():
    e = estimate(_toy(), CostParams.from_budget(1e-3), physical_qubit_multiplier=1000.0)
    assert e.physical_qubits == 1000.0 * e.logical_qubits
