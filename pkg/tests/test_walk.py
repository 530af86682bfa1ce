import math

import pytest
from hypothesis import given, settings, strategies as st

from gmoat import (
    DominanceRow,
    GapKind,
    GapModel,
    GaussianPrime,
    NormSegment,
    WalkConfig,
    WalkStrategy,
    WalkTermination,
    build_paths,
    dominance_table,
    first_dominant_exponent,
    run_walk,
)
from gmoat.errors import DomainError

from oracles import brute_region_points

CRAMER = GapModel(kind=GapKind.CRAMER, c=1.0)

# trace re-derived below by exhaustive argmin; frozen for regression
GOLDEN_TRACE_M2 = [
    (1, 1), (2, 1), (3, 2), (4, 1), (5, 2), (6, 1), (7, 2), (8, 3),
    (9, 4), (10, 3), (11, 4), (11, 6), (12, 7), (13, 8), (14, 9), (14, 11),
]


def folded_d2(u, v):
    direct = (u[0] - v[0]) ** 2 + (u[1] - v[1]) ** 2
    mirror = (u[0] - v[1]) ** 2 + (u[1] - v[0]) ** 2
    return min(direct, mirror)


def brute_nearest_walk(region, M):
    """Exhaustive argmin re-derivation of the nearest-strategy walk."""
    pts = brute_region_points(region)
    m2 = M * M
    cur = (1, 1)
    visited = {cur}
    trace = [cur]
    while True:
        cn = cur[0] ** 2 + cur[1] ** 2
        cand = [
            (folded_d2(cur, p), p[0] ** 2 + p[1] ** 2, p[0], p[1])
            for p in pts
            if p not in visited and p[0] ** 2 + p[1] ** 2 > cn and folded_d2(cur, p) <= m2
        ]
        if not cand:
            return trace
        cand.sort()
        nxt = (cand[0][2], cand[0][3])
        trace.append(nxt)
        visited.add(nxt)
        cur = nxt


def test_no_candidate_below_lattice_spacing():
    cfg = WalkConfig(M=0.5, region_limit=100, strategy=WalkStrategy.NEAREST)
    rep = run_walk(cfg, GaussianPrime(1, 1))
    assert rep.n_steps == 0
    assert rep.terminated_reason is WalkTermination.NO_CANDIDATE
    assert [(p.a, p.b) for p in rep.steps] == [(1, 1)]


def test_golden_walk_m2():
    cfg = WalkConfig(M=2.0, region_limit=1000, strategy=WalkStrategy.NEAREST)
    rep = run_walk(cfg, GaussianPrime(1, 1))
    got = [(p.a, p.b) for p in rep.steps]
    assert got == GOLDEN_TRACE_M2
    assert got == brute_nearest_walk(1000, 2.0)  # every step is the true argmin
    assert rep.terminated_reason is WalkTermination.NO_CANDIDATE
    assert rep.max_norm_reached == 317
    assert rep.step_lengths_squared == [1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 4, 2, 2, 2, 4]
    assert rep.step_length_histogram == {1: 1, 2: 12, 4: 2}


def test_walk_steps_are_distinct_and_norm_increasing():
    cfg = WalkConfig(M=3.0, region_limit=5000, strategy=WalkStrategy.NEAREST)
    rep = run_walk(cfg, GaussianPrime(1, 1))
    pts = [(p.a, p.b) for p in rep.steps]
    assert len(pts) == len(set(pts))
    norms = [p.norm for p in rep.steps]
    assert norms == sorted(norms) and len(set(norms)) == len(norms)
    for d2 in rep.step_lengths_squared:
        assert d2 <= 9


def test_non_increasing_mode_still_never_revisits():
    cfg = WalkConfig(
        M=2.0, region_limit=500, strategy=WalkStrategy.NEAREST, require_increasing_norm=False
    )
    rep = run_walk(cfg, GaussianPrime(5, 2))
    pts = [(p.a, p.b) for p in rep.steps]
    assert len(pts) == len(set(pts))


def test_region_exit_with_wide_steps():
    cfg = WalkConfig(M=40.0, region_limit=1000, strategy=WalkStrategy.GREEDY_MAX_NORM)
    rep = run_walk(cfg, GaussianPrime(1, 1))
    assert rep.terminated_reason is WalkTermination.REGION_EXIT
    assert rep.n_steps <= 3


def test_greedy_strategy_prefers_norm():
    near = run_walk(WalkConfig(M=5.0, region_limit=1000, strategy=WalkStrategy.NEAREST), GaussianPrime(1, 1))
    greedy = run_walk(
        WalkConfig(M=5.0, region_limit=1000, strategy=WalkStrategy.GREEDY_MAX_NORM), GaussianPrime(1, 1)
    )
    assert greedy.steps[1].norm >= near.steps[1].norm


def test_walk_requires_prime_start():
    cfg = WalkConfig(M=2.0, region_limit=100, strategy=WalkStrategy.NEAREST)
    with pytest.raises(DomainError):
        run_walk(cfg, GaussianPrime(3, 1))


def test_walk_annotation_against_decomposition():
    d = build_paths(NormSegment(2, 1000), CRAMER)
    cfg = WalkConfig(M=2.0, region_limit=1000, strategy=WalkStrategy.NEAREST)
    rep = run_walk(cfg, GaussianPrime(1, 1), d)
    assert rep.steps_outside_segment == 0
    assert sum(rep.path_visits.values()) == len(rep.steps)
    # frozen: 16 visited members spread over 13 paths, 14 transitions
    assert len(rep.path_visits) == 13
    assert rep.path_changes == 14
    assert rep.path_visits[1] == 4


# -- dominance ---------------------------------------------------------------


def test_dominance_cramer_examples():
    rows = dominance_table([5, 200], 10.0, 1.0, 0.025, 0.0, kinds=(GapKind.CRAMER,))
    at5, at200 = rows
    assert at5.lhs == pytest.approx(16.0, rel=1e-9)
    assert at5.rhs == pytest.approx(73.5, rel=1e-9)
    assert not at5.dominates
    assert at200.lhs == pytest.approx(39601.0, rel=1e-9)
    assert at200.rhs == pytest.approx(2550.0, rel=1e-9)
    assert at200.dominates


def test_dominance_zero_m_always_dominates():
    for kind in (GapKind.RH, GapKind.CRAMER, GapKind.BHP):
        (row,) = dominance_table([7], 0.0, 1.0, 0.025, 0.0, kinds=(kind,))
        assert row.rhs == 0.0
        assert row.dominates


def test_first_dominant_exponents_frozen():
    assert first_dominant_exponent(GapKind.CRAMER, 10.0, 1.0, 0.025, 0.0, A_max=10**4) == 16
    assert first_dominant_exponent(GapKind.RH, 10.0, 1.0, 0.025, 0.0, A_max=10**4) == 42
    assert first_dominant_exponent(GapKind.BHP, 10.0, 1.0, 0.025, 0.0, A_max=10**4) == 17


def test_dominance_flip_is_monotone():
    for kind in (GapKind.RH, GapKind.CRAMER, GapKind.BHP):
        rows = dominance_table(list(range(2, 1001)), 10.0, 1.0, 0.025, 0.0, kinds=(kind,))
        flags = [r.dominates for r in rows]
        # once true, stays true
        assert flags == sorted(flags)


def test_log_space_matches_direct_floats_at_small_a():
    rows = dominance_table(list(range(2, 60)), 10.0, 1.0, 0.025, 0.0)
    for r in rows:
        assert r.lhs == pytest.approx(10**r.log10_lhs, rel=1e-9)
        assert r.rhs == pytest.approx(10**r.log10_rhs, rel=1e-9)


def test_dominance_large_a_stays_finite_in_log_space():
    rows = dominance_table([10**4], 10.0, 1.0, 0.025, 0.0)
    for r in rows:
        assert math.isfinite(r.log10_lhs)
        assert math.isfinite(r.log10_rhs)
        assert r.dominates  # far past every flip point


def test_dominance_row_fields():
    (row,) = dominance_table([3], 2.0, 1.5, 0.025, 1.0, kinds=(GapKind.CRAMER,))
    assert isinstance(row, DominanceRow)
    assert row.A == 3 and row.kind is GapKind.CRAMER
    # lhs = c*(A-1)^2, rhs = (1.27*c*A + E'' + 1) * M
    assert row.lhs == pytest.approx(1.5 * 4, rel=1e-12)
    assert row.rhs == pytest.approx((1.27 * 1.5 * 3 + 1.0 + 1.0) * 2.0, rel=1e-9)


def test_dominance_domain():
    with pytest.raises(DomainError):
        dominance_table([1], 10.0, 1.0, 0.025, 0.0)
