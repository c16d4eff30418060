import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epscx.corpus import distance_quantiles, random_cloud, random_metric
from epscx.metric import build_euclidean, build_from_matrix, disjoint_union
from epscx.solvers import (
    EXACT,
    GREEDY_LOWER,
    GREEDY_UPPER,
    CapExceeded,
    b_eps,
    check_subadditivity,
    complexity_profile,
    is_net,
    is_separated,
    local_packing_bound,
    max_separated_exact,
    max_separated_greedy,
    min_net_exact,
    min_net_greedy,
    resolve_cap,
)
from oracles import brute_C, brute_R, lexmin_optimal


def test_line_examples(line5):
    s = max_separated_exact(line5, 2)
    assert (s.size, s.certificate) == (3, EXACT)
    assert s.witness == (0, 2, 4)
    n = min_net_exact(line5, 2)
    assert n.size == 2 and is_net(line5, 2, n.witness)
    assert max_separated_exact(line5, 1.5).size == 3
    assert min_net_exact(line5, 1.5).size == 2


def test_singleton_and_large_eps(line5):
    one = build_from_matrix([[0]])
    assert max_separated_exact(one, 1).size == 1
    assert min_net_exact(one, 1).size == 1
    assert max_separated_exact(line5, 100).size == 1
    assert min_net_exact(line5, 100).size == 1


def test_tiny_eps_gives_all_points(line5):
    assert max_separated_exact(line5, 1e-9).size == 5
    assert min_net_exact(line5, 1e-9).size == 5


def test_boundary_pair():
    pair = build_from_matrix([[0, 1], [1, 0]])
    # distance exactly ε: separated, and balls do not reach
    assert max_separated_exact(pair, 1).size == 2
    assert min_net_exact(pair, 1).size == 2
    assert max_separated_exact(pair, 1 + 1e-12).size == 1


def test_bad_eps(line5):
    for eps in (0, -1, float("nan")):
        with pytest.raises(ValueError):
            max_separated_exact(line5, eps)
        with pytest.raises(ValueError):
            min_net_exact(line5, eps)


def test_witness_validators(line5):
    assert is_separated(line5, 2, [0, 2, 4])
    assert not is_separated(line5, 2, [0, 1])
    assert is_net(line5, 2, [1, 3])
    assert not is_net(line5, 2, [0, 4])
    assert is_net(line5, 2, [0], targets=[0, 1])


@pytest.mark.parametrize("n", [3, 6, 9, 12])
def test_matches_oracle(n, rng):
    for _ in range(6):
        space = random_metric(rng, n)
        for eps in distance_quantiles(space, (0.1, 0.5, 0.9)):
            sep = max_separated_exact(space, eps)
            net = min_net_exact(space, eps)
            assert sep.size == brute_C(space.matrix, eps)
            assert net.size == brute_R(space.matrix, eps)
            assert is_separated(space, eps, sep.witness)
            assert is_net(space, eps, net.witness)


def test_witness_is_lexmin_under_order(rng):
    for trial in range(25):
        space = random_metric(rng, int(rng.integers(3, 9)))
        order = [int(i) for i in rng.permutation(space.n)]
        for eps in distance_quantiles(space, (0.3, 0.7)):
            got = max_separated_exact(space, eps, order=order).witness
            assert got == lexmin_optimal(space.matrix, eps, "separated", order)
            got = min_net_exact(space, eps, order=order).witness
            assert got == lexmin_optimal(space.matrix, eps, "net", order)


def test_reverse_order_changes_witness_not_size(line5):
    fwd = max_separated_exact(line5, 1.5)
    rev = max_separated_exact(line5, 1.5, order=[4, 3, 2, 1, 0])
    assert fwd.size == rev.size
    net_f = min_net_exact(line5, 1.5)
    net_r = min_net_exact(line5, 1.5, order=[4, 3, 2, 1, 0])
    assert net_f.witness == (0, 3) and net_r.witness == (1, 4)


def test_restricted_targets_and_centers(rng):
    space = random_metric(rng, 10)
    eps = distance_quantiles(space, (0.4,))[0]
    target = [0, 2, 4, 6, 8]
    ambient = min_net_exact(space, eps, targets=target)
    inside = min_net_exact(space, eps, targets=target, centers=target)
    assert ambient.size == brute_R(space.matrix, eps, target)
    assert inside.size == brute_R(space.matrix, eps, target, target)
    assert ambient.size <= inside.size
    assert min_net_exact(space, eps, targets=[]).size == 0


def test_uncoverable_target_rejected(line5):
    with pytest.raises(ValueError):
        min_net_exact(line5, 1.5, targets=[4], centers=[0])


def test_cap(rng):
    space = random_cloud(rng, 30, 2)
    eps = 0.3
    with pytest.raises(CapExceeded):
        max_separated_exact(space, eps, cap=5)
    with pytest.raises(CapExceeded):
        min_net_exact(space, eps, cap=5)
    assert max_separated_exact(space, eps, cap=64).size >= 1


def test_cap_env(monkeypatch):
    monkeypatch.setenv("EPSCX_CAP", "7")
    assert resolve_cap() == 7
    assert resolve_cap(9) == 9
    monkeypatch.setenv("EPSCX_CAP", "zero")
    with pytest.raises(ValueError):
        resolve_cap()


def test_cliques_bypass_cap():
    # many tiny clusters far apart: each conflict component is a clique
    pts = [(10.0 * i + 0.01 * j,) for i in range(40) for j in range(3)]
    space = build_euclidean(pts)
    assert max_separated_exact(space, 1.0, cap=2).size == 40
    assert min_net_exact(space, 1.0, cap=2).size == 40


def test_greedy_brackets(rng):
    for _ in range(20):
        space = random_metric(rng, 10)
        for eps in distance_quantiles(space, (0.2, 0.6)):
            exact_c = max_separated_exact(space, eps).size
            exact_r = min_net_exact(space, eps).size
            g_c = max_separated_greedy(space, eps)
            g_r = min_net_greedy(space, eps)
            assert g_c.certificate == GREEDY_LOWER and g_r.certificate == GREEDY_UPPER
            assert g_c.size <= exact_c and exact_r <= g_r.size
            assert is_separated(space, eps, g_c.witness) and is_net(space, eps, g_r.witness)


def test_profile(line5):
    prof = complexity_profile(line5, [1.5, 2, 1])
    assert prof.eps == [2.0, 1.5, 1.0]
    assert prof.C == [3, 3, 5]
    assert prof.R == [2, 2, 5]
    assert prof.exact


def test_profile_greedy_fallback(rng):
    space = random_cloud(rng, 40, 2)
    prof = complexity_profile(space, [0.15], cap=3, allow_greedy=True)
    assert not prof.exact
    with pytest.raises(CapExceeded):
        complexity_profile(space, [0.15], cap=3, allow_greedy=False)


def test_ultrametric_equality():
    # in an ultrametric space ε-balls partition, so C_ε = R_ε
    from epscx.symbolic import Example3Config, example3_space

    space = example3_space(Example3Config(2), 4)
    for eps in (0.5, 1 / 3, 0.25, 0.2, 0.1):
        assert max_separated_exact(space, eps).size == min_net_exact(space, eps).size


def test_subadditivity_on_disjoint_union(line5):
    u = disjoint_union(line5, line5, 10)
    rep = check_subadditivity(u, range(5), range(5, 10), 1.5)
    assert rep.ok and rep.C == (6, 3, 3)


def test_local_quantities(line5):
    assert local_packing_bound(line5, 2) == 2
    assert b_eps(line5, 2) == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1), st.floats(0.05, 0.95))
def test_inequalities_property(n, seed, q):
    space = random_metric(np.random.default_rng(seed), n)
    eps = distance_quantiles(space, (q,))[0]
    c = max_separated_exact(space, eps).size
    r = min_net_exact(space, eps).size
    assert r <= c <= min_net_exact(space, eps / 2).size
    # monotone as ε shrinks
    assert max_separated_exact(space, eps * 0.7).size >= c
