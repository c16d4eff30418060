"""Acceptance criteria, one test each; every test logs a PASS/FAIL summary line."""

import functools
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import record
from epscx.corpus import distance_quantiles, random_metric, standard_corpus
from epscx.experiments import bounds, cantor, markov, nonunique
from epscx.matching import HallFailure, dump_counterexample, kx_partition, net_injection, optimal_separated_bijection
from epscx.measures import (
    TestFunction,
    functional_I,
    functional_I_dual,
    independence_gap,
    indicator,
    invariance_gap,
    mu_nu_comparison,
)
from epscx.metric import check_isometry
from epscx.solvers import NET, b_eps, check_subadditivity, max_separated_exact, min_net_exact
from epscx.symbolic import (
    DistanceSpec,
    Example3Config,
    SymbolicSpace,
    admissible_permutation_isometry,
    example3_space,
    group_translation,
    realize_space,
)
from oracles import brute_C, brute_R

pytestmark = pytest.mark.acceptance

CORPUS_SEED = 7
EPS_QUANTILES = (0.25, 0.5, 0.75)


@functools.lru_cache(maxsize=1)
def oracle_corpus():
    """200 repaired random metrics with n ≤ 12, three realized distances as ε each."""
    rng = np.random.default_rng(CORPUS_SEED)
    out = []
    for _ in range(200):
        space = random_metric(rng, int(rng.integers(2, 13)))
        out.append((space, distance_quantiles(space, EPS_QUANTILES)))
    return out


def test_oracle_equivalence():
    start = time.perf_counter()
    cases = mismatches = 0
    for space, grid in oracle_corpus():
        for eps in grid:
            cases += 1
            c = max_separated_exact(space, eps).size
            r = min_net_exact(space, eps).size
            mismatches += (c != brute_C(space.matrix, eps)) + (r != brute_R(space.matrix, eps))
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and cases == 600 and elapsed < 60
    record("1 oracle equivalence", ok, f"{cases} cases, {mismatches} mismatches, {elapsed:.1f}s (< 60s)")
    assert ok


def test_inequalities():
    rng = np.random.default_rng(CORPUS_SEED + 1)
    counts = dict.fromkeys(["R<=C", "C<=R_half", "subadditivity", "b*R(D)>=R_half(D)"], 0)
    checked = 0
    for space, grid in oracle_corpus():
        for eps in grid:
            checked += 1
            c = max_separated_exact(space, eps).size
            r = min_net_exact(space, eps).size
            counts["R<=C"] += r > c
            counts["C<=R_half"] += c > min_net_exact(space, eps / 2).size
            side = rng.random(space.n) < 0.5
            a, b = np.nonzero(side)[0], np.nonzero(~side)[0]
            counts["subadditivity"] += not check_subadditivity(space, a, b, eps).ok
            # D is a random nonempty subset, covered by balls centered anywhere in the space
            d = np.nonzero(rng.random(space.n) < 0.6)[0]
            if d.size == 0:
                d = np.array([int(rng.integers(space.n))])
            lhs = b_eps(space, eps) * min_net_exact(space, eps, targets=d).size
            counts["b*R(D)>=R_half(D)"] += lhs < min_net_exact(space, eps / 2, targets=d).size
    ok = sum(counts.values()) == 0
    record("2 inequalities", ok, f"{checked} instances, violations {counts}")
    assert ok


def test_euclidean_b_bound():
    start = time.perf_counter()
    report = bounds(seed=0)
    elapsed = time.perf_counter() - start
    check = report["checks"][0]
    ok = report["pass"] and len(report["rows"]) == 200 and elapsed < 120
    record("3 Euclidean b_eps bound", ok,
           f"violations {check['violations']}, max b_eps {check['maxima']} vs limits 6/20, {elapsed:.1f}s (< 120s)")
    assert ok


def test_cantor():
    start = time.perf_counter()
    report = cantor(depth=10, k_max=8)
    elapsed = time.perf_counter() - start
    rows = report["rows"]
    counts_ok = [r["C"] for r in rows] == [2**k for k in range(1, 9)] == [r["oracle"] for r in rows]
    target = math.log(2) / math.log(3)
    slopes_ok = all(abs(s - target) <= 1e-9 for s in report["per_point_slopes"])
    summary_ok = abs(report["slope"] - 0.6309297536) <= 1e-9
    ok = counts_ok and slopes_ok and summary_ok and elapsed < 30
    record("4 Cantor dimension", ok, f"slope {report['slope']:.12f}, C={[r['C'] for r in rows]}, {elapsed:.2f}s (< 30s)")
    assert ok


def test_markov():
    start = time.perf_counter()
    report = markov(depth=12)
    elapsed = time.perf_counter() - start
    lam_err = abs(report["perron"]["lambda"] - (1 + math.sqrt(5)) / 2)
    # aggregate by last symbol of the length-n prefix
    worst = 0.0
    for n in range(1, 5):
        freq, pred = np.zeros(2), np.zeros(2)
        for row in (r for r in report["rows"] if r["n"] == n):
            last = int(row["word"][-1])
            freq[last] += row["frequency"]
            pred[last] += row["perron"]
        worst = max(worst, float(np.max(np.abs(freq - pred))))
    word_worst = max(r["deviation"] for r in report["rows"])
    ok = report["pass"] and worst <= 1e-4 and lam_err <= 1e-12 and elapsed < 30
    record("5 golden-mean Perron frequencies", ok,
           f"max deviation {worst:.2e} (per word {word_worst:.2e}), |lambda error| {lam_err:.1e}, {elapsed:.2f}s")
    assert ok


def test_nonunique():
    start = time.perf_counter()
    report = nonunique(depth=7, n_max=2)
    elapsed = time.perf_counter() - start
    spread = report["cluster_report"]["spread"]
    ok = report["pass"] and spread > 0.5 and elapsed < 120
    failed = [c["name"] for c in report["checks"] if not c["pass"]]
    record("6 Example-3 non-uniqueness", ok, f"spread {spread:.3f}, failed checks {failed}, {elapsed:.2f}s (< 120s)")
    assert ok


def test_hall_propositions(tmp_path):
    failures = []
    instances = 0
    for idx, space in enumerate(standard_corpus(seed=11, count=100, n_max=20)):
        for eps in distance_quantiles(space, (0.3, 0.6)):
            instances += 1
            reverse = list(range(space.n))[::-1]
            sep = max_separated_exact(space, eps).witness
            sep_r = max_separated_exact(space, eps, order=reverse).witness
            net = min_net_exact(space, eps).witness
            for name, fn, a, b, bound in (
                ("bijection", optimal_separated_bijection, sep, sep_r, eps),
                ("injection", net_injection, net, sep, 2 * eps),
            ):
                violator = None
                try:
                    alpha = fn(space, eps, a, b)
                    bad = any(not space.dist(x, y) < bound for x, y in alpha.items())
                except HallFailure as exc:
                    bad, violator = True, exc.result.hall_violator
                if bad:
                    path = tmp_path / f"{name}_{idx}_{eps:.6g}.json"
                    failures.append(dump_counterexample(path, space, eps, A=a, B=b, violator=violator))
            try:
                problems = kx_partition(space, eps, net, sep).problems(space, sep)
            except HallFailure as exc:
                problems = [str(exc)]
            if problems:
                failures.append(dump_counterexample(tmp_path / f"kx_{idx}_{eps:.6g}.json", space, eps, net=net, separated=sep))
    ok = not failures and instances == 200
    record("7 Hall propositions", ok, f"{instances} instances, {len(failures)} failures"
           + (f", counterexamples in {tmp_path}" if failures else ""))
    assert ok


def _shift_isometries():
    full = SymbolicSpace(2, 6, DistanceSpec.geometric(0.5, 6))
    golden = SymbolicSpace(2, 8, DistanceSpec.geometric(0.5, 8), ((1, 1), (1, 0)))
    yield "translation", realize_space(full), group_translation(full, (1, 0, 1, 1, 0, 1))
    yield "g_alpha", realize_space(golden), admissible_permutation_isometry(golden, 2, {(0, 0): (1, 0), (1, 0): (0, 0)})
    yield "g_alpha n=3", realize_space(golden), admissible_permutation_isometry(
        golden, 3, {(0, 0, 0): (0, 1, 0), (0, 1, 0): (1, 0, 0), (1, 0, 0): (0, 0, 0)}
    )


def test_functional_theorems():
    rng = np.random.default_rng(13)
    counts = dict.fromkeys(["independence", "independence_net", "invariance", "mu_nu", "ultrametric I=I~"], 0)
    tested = dict.fromkeys(counts, 0)
    for space in standard_corpus(seed=12, count=100, n_max=12):
        phi = TestFunction(rng.uniform(0, 1, space.n))
        for eps in distance_quantiles(space, (0.3, 0.6)):
            for key, mode in (("independence", "separated"), ("independence_net", NET)):
                tested[key] += 1
                counts[key] += not independence_gap(space, eps, phi, mode).holds
            tested["mu_nu"] += 1
            counts["mu_nu"] += not mu_nu_comparison(space, eps, phi).verdict

    for _, space, tau in _shift_isometries():
        assert check_isometry(space, tau) == []
        radius = tau.isometry_radius
        for _ in range(10):
            phi = TestFunction(rng.uniform(0, 1, space.n))
            for eps in sorted({radius, radius / 2, radius / 4}):
                tested["invariance"] += 1
                counts["invariance"] += not invariance_gap(space, eps, tau, phi).holds

    # cylinder indicators at a coarser scale than ε: both functionals agree exactly
    full = realize_space(SymbolicSpace(2, 6, DistanceSpec.geometric(0.5, 6)))
    for space in (full, example3_space(Example3Config(2), 5)):
        words = space.labels
        for k in range(1, 4):
            prefixes = sorted({w[:k] for w in words})
            for pre in prefixes[:: max(1, len(prefixes) // 3)]:
                inside = np.array([w.startswith(pre) for w in words])
                phi = indicator(space.n, np.nonzero(inside)[0])
                for eps in np.unique(space.matrix)[1:]:
                    # skip ε whose balls straddle the cylinder boundary
                    if (space.matrix[np.ix_(inside, ~inside)] < eps).any():
                        continue
                    tested["ultrametric I=I~"] += 1
                    counts["ultrametric I=I~"] += functional_I(space, eps, phi) != functional_I_dual(space, eps, phi)
    ok = sum(counts.values()) == 0 and all(tested.values())
    record("8 finite-eps functional theorems", ok, f"violations {counts} over {tested}")
    assert ok


def test_cli_determinism(tmp_path):
    mismatched = []
    for name in ("cantor", "markov", "nonunique", "bounds"):
        outs = []
        for _ in range(2):
            out = tmp_path / f"{name}.json"
            proc = subprocess.run(
                [sys.executable, "-m", "epscx.cli", "experiment", name, "--seed", "3", "--out", str(out)],
                capture_output=True,
                check=False,
            )
            assert proc.returncode == 0, proc.stderr
            outs.append(out.read_bytes())
        json.loads(outs[0])
        if outs[0] != outs[1]:
            mismatched.append(name)
    ok = not mismatched
    record("9 CLI determinism", ok, f"byte-identical reports for 4 experiments, mismatches {mismatched}")
    assert ok
