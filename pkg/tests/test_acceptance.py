"""Exit criteria.  One test per criterion; a PASS/FAIL line for each is printed
in the terminal summary."""

import time
from collections import Counter
from itertools import permutations

import numpy as np
import pytest

from abcycle.abfinder import decompose_to_matchings, find_ab_cycle, ore_success_probability, verify_ab_cycle
from abcycle.bihamilton import BipartiteGraph, find_hamilton, ore_check
from abcycle.fklab import binomial_se, fk_bound, make_instance, run_fk
from abcycle.hypergraph import infer_delta_a_lower, min_degree
from abcycle.oracle import complete_hypergraph, exhaustive_ab_cycle, planted_cycle, random_hypergraph
from abcycle.sampling import SeedSpec, sample_ab_partition, sample_matching

# certificates produced by the criteria below, checked by the decomposition criterion
CERTS: list = []


@pytest.fixture
def criterion(record_property):
    def tag(name, detail=""):
        record_property("criterion", name)
        record_property("detail", detail)
    return tag


def test_moon_moser_completeness(criterion):
    t0 = time.perf_counter()
    failures = ore_graphs = 0
    for t in (3, 4):
        for code in range(1 << (t * t)):
            G = BipartiteGraph([(code >> (t * i)) & ((1 << t) - 1) for i in range(t)])
            if ore_check(G).holds:
                ore_graphs += 1
                cyc = find_hamilton(G)
                if cyc is None or not cyc.is_valid(G):
                    failures += 1
    elapsed = time.perf_counter() - t0
    criterion("Moon-Moser completeness (t=3,4 exhaustive)",
              f"ore_graphs={ore_graphs} failures={failures} time={elapsed:.1f}s")
    assert failures == 0
    assert elapsed < 60


@pytest.fixture(scope="module")
def fk_run():
    inst = make_instance(60, 3, 20, 0.5, seed=2024)
    t0 = time.perf_counter()
    stats = run_fk(inst, [0.5, 1.0, 1.5, 2.0, 2.5], trials=100_000, seed=2024)
    return inst, stats, time.perf_counter() - t0


def test_fk_expectation(criterion, fk_run):
    inst, st, elapsed = fk_run
    dev = abs(st.mean_eta - inst.theta * 20)
    criterion("FK expectation (m=60,l=3,t=20, 1e5 trials)",
              f"theta={inst.theta:.6f} mean={st.mean_eta:.4f} |dev|={dev:.4f} time={elapsed:.1f}s")
    assert abs(inst.theta - 0.5) < 1e-4
    assert dev <= 0.1
    assert elapsed < 60


def test_fk_tail_bound(criterion, fk_run):
    inst, st, _ = fk_run
    gammas = sorted(st.tail_freq)
    slack = {}
    for g in gammas:
        b = fk_bound(g)
        slack[g] = b + 3 * binomial_se(b, st.trials) + 1e-3 - st.tail_freq[g]
    tails = [st.tail_freq[g] for g in gammas]
    criterion("FK tail bound (gamma=0.5..2.5)",
              " ".join(f"g={g}:{st.tail_freq[g]:.5f}<={fk_bound(g):.4f}" for g in gammas))
    assert all(s >= 0 for s in slack.values())
    assert all(x >= y for x, y in zip(tails, tails[1:]))


def test_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    grid = [round(0.1 * i, 1) for i in range(1, 10)]
    unsound = dense_exists = dense_found = 0
    for i in range(300):
        p = grid[i % 9]
        H = random_hypergraph(6, 3, p, SeedSpec(7001, i))
        res = find_ab_cycle(H, 1, 2, max_attempts=200, seed=i)
        ora = exhaustive_ab_cycle(H, 1, 2)
        if res.found:
            CERTS.append((H.n, res.cert))
            if verify_ab_cycle(H, res.cert) or not ora.exists:
                unsound += 1
        if ora.exists:
            CERTS.append((H.n, ora.cert))
            if p >= 0.8:
                dense_exists += 1
                dense_found += res.found
    elapsed = time.perf_counter() - t0
    rate = dense_found / dense_exists if dense_exists else float("nan")
    criterion("Oracle equivalence (300 instances, n=6)",
              f"unsound={unsound} dense_success={dense_found}/{dense_exists}={rate:.3f} "
              f"time={elapsed:.1f}s")
    assert unsound == 0
    assert dense_exists > 0 and rate >= 0.95
    assert elapsed < 300


def test_plant_and_recover(criterion):
    mismatches = flips_missed = deletions = 0
    for i in range(100):
        n = (6, 9, 12)[i % 3]
        a = 1 if i % 2 == 0 else 2
        H, plant = planted_cycle(n, a, 3 - a, SeedSpec(8001, i))
        res = exhaustive_ab_cycle(H, a, 3 - a)
        if not res.exists or res.cert != plant:
            mismatches += 1
        else:
            CERTS.append((n, res.cert))
        for e in plant.witness_edges:
            deletions += 1
            if exhaustive_ab_cycle(H.without(e), a, 3 - a).exists:
                flips_missed += 1
    criterion("Plant-and-recover (100 plants, n=6,9,12)",
              f"mismatches={mismatches} deletions={deletions} not_flipped={flips_missed}")
    assert mismatches == 0 and flips_missed == 0


def test_union_bound_shadow(criterion):
    K = complete_hypergraph(30, 3)
    full = ore_success_probability(K, 1, 2, 0.5, 200, seed=9001)
    t = 10
    floor = 1 - 4 / t - 0.1
    dense = []
    for s in range(3):
        H = random_hypergraph(30, 3, 0.95, SeedSpec(9002, s))
        dense.append(ore_success_probability(H, 1, 2, 0.5, 500, seed=9003 + s).events["ore"])
        res = find_ab_cycle(H, 1, 2, seed=s)
        if res.found:
            CERTS.append((30, res.cert))
    criterion("Union-bound shadow (K_30^(3) and 0.95-density)",
              f"complete_ore={full.events['ore']} dense_ore={dense} floor={floor:.2f}")
    assert full.events["ore"] == 1.0
    assert all(f >= floor for f in dense)


def test_sampler_uniformity(criterion):
    counts = Counter()
    for i in range(24_000):
        P = sample_ab_partition(4, 1, 1, SeedSpec(10_001, i))
        counts[(P.A_blocks, P.B_blocks)] += 1
    expected_outcomes = {
        (((p[0],), (p[1],)), ((p[2],), (p[3],))) for p in permutations(range(1, 5))
    }
    part_dev = max(abs(counts[o] - 1000) / 1000 for o in expected_outcomes)
    mcounts = Counter(sample_matching(4, 2, 2, SeedSpec(10_002, i)).blocks for i in range(30_000))
    match_dev = max(abs(c - 10_000) / 10_000 for c in mcounts.values())
    criterion("Sampler uniformity",
              f"partitions={len(counts)} max_rel_dev={part_dev:.3f}; "
              f"matchings={len(mcounts)} max_rel_dev={match_dev:.3f}")
    assert set(counts) == expected_outcomes and part_dev <= 0.15
    assert len(mcounts) == 3 and match_dev <= 0.10


def test_corollary_inequality(criterion):
    rng = np.random.default_rng(11_001)
    violations = 0
    for i in range(100):
        H = random_hypergraph(6, 3, float(rng.uniform(0.3, 1.0)), SeedSpec(11_002, i))
        if infer_delta_a_lower(6, 3, 1, 2, min_degree(H, 2)) > min_degree(H, 1):
            violations += 1
    K = complete_hypergraph(6, 3)
    eq = infer_delta_a_lower(6, 3, 1, 2, min_degree(K, 2)) == min_degree(K, 1)
    criterion("Corollary inequality (100 random H, n=6)", f"violations={violations} complete_equal={eq}")
    assert violations == 0 and eq


def test_decomposition(criterion):
    bad = 0
    for n, cert in CERTS:
        M1, M2 = decompose_to_matchings(cert)
        ok = (
            all(sorted(v for e in M for v in e) == list(range(1, n + 1)) for M in (M1, M2))
            and not set(M1) & set(M2)
            and sorted(M1 + M2) == sorted(cert.witness_edges)
        )
        bad += not ok
    criterion("Decomposition into two perfect matchings", f"certs={len(CERTS)} bad={bad}")
    assert len(CERTS) > 100 and bad == 0
