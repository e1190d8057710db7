from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats
from sklearn.base import clone

from netenergy.exceptions import InfeasibleCoverageError, InvalidInputError, ZeroFrequencyError
from netenergy.gramian import LinearSystem, finite_gramian, modal_diag_gramian
from netenergy.netgen import random_graph_sf, repair_strong_connectivity, weighted_degrees
from netenergy.oscillators import OscillatorNetwork, modal_decomposition, random_oscillator_network
from netenergy.placement import (
    STRATEGIES,
    BruteForcePlacement,
    ExactTracePlacement,
    GreedyMaxMinPlacement,
    RandomPlacement,
    RwPlacement,
    brute_force_placement,
    exact_trace_placement,
    greedy_maxmin,
    greedy_trinv,
    modal_contributions,
    modal_metrics,
    mode_power_placement,
    placement_objective,
    random_placement,
    rank_by_rw,
    ranking_overlap,
    trace_scores,
)


def net_modal(n, seed, p=0.3, grounding=0.1):
    return modal_decomposition(random_oscillator_network(n, p, seed=seed, grounding=grounding))


def permuted(net, perm):
    """The same network with node ``perm[k]`` relabelled ``k``."""
    return OscillatorNetwork(net.masses[perm], net.grounding[perm], net.laplacian[np.ix_(perm, perm)])


def random_median(modal, m, metric, rng, draws=200):
    vals = [placement_objective(modal, random_placement(modal.n, m, rng), metric) for _ in range(draws)]
    return np.median(vals)


class TestContributions:
    def test_nonnegative_and_match_gramian(self):
        modal = net_modal(8, 1)
        Y = modal_contributions(modal)
        assert np.all(Y >= 0)
        drivers = [1, 5]
        flags = np.isin(np.arange(8), drivers)
        W = modal_diag_gramian(modal, flags, 3.0).W
        np.testing.assert_allclose(np.diag(W), 3.0 * Y[drivers].sum(axis=0), rtol=1e-12)

    def test_exact_weighting_is_trace(self):
        modal = net_modal(8, 2)
        drivers = [0, 3, 4]
        W = modal_diag_gramian(modal, np.isin(np.arange(8), drivers), 1.0).W
        assert trace_scores(modal, "exact")[drivers].sum() == pytest.approx(np.trace(W), rel=1e-12)

    def test_zero_frequency_rejected(self):
        net = OscillatorNetwork([1.0, 1.0], [0.0, 0.0], [[1.0, -1.0], [-1.0, 1.0]])
        with pytest.raises(ZeroFrequencyError):
            greedy_maxmin(modal_decomposition(net), 1)


class TestRw:
    def test_example(self):
        assert rank_by_rw([[0, 2], [-3, 0]]).order == (0, 1)

    def test_symmetric_ties(self, rng):
        S = rng.standard_normal((6, 6))
        assert rank_by_rw(np.abs(S + S.T)).order == tuple(range(6))

    def test_infinite_first(self):
        A = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
        assert rank_by_rw(A).order[0] == 0

    def test_scale_free_top_decile(self):
        A = repair_strong_connectivity(random_graph_sf(1000, seed=2), seed=2)
        order = np.array(rank_by_rw(A).order)
        r = weighted_degrees(A).r_w
        assert np.mean(r[order[:100]]) > 2 * np.mean(r)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31), n=st.integers(2, 15))
    def test_equivariance(self, seed, n):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((n, n))
        perm = rng.permutation(n)
        base = np.array(rank_by_rw(A).order)
        moved = np.array(rank_by_rw(A[np.ix_(perm, perm)]).order)
        assert np.array_equal(perm[moved], base)


class TestRandom:
    def test_edges(self):
        assert sorted(random_placement(5, 5, seed=0)) == list(range(5))
        assert random_placement(5, 0, seed=0) == []
        with pytest.raises(InvalidInputError):
            random_placement(5, 6)

    def test_uniform(self):
        rng = np.random.default_rng(0)
        counts = np.zeros(10)
        for _ in range(10_000):
            counts[random_placement(10, 3, rng)] += 1
        assert stats.chisquare(counts).pvalue > 0.01


class TestModalStrategies:
    def test_single_node(self):
        modal = modal_decomposition(OscillatorNetwork([1.0], [1.0], [[0.0]]))
        assert greedy_maxmin(modal, 1) == [0]
        assert greedy_trinv(modal, 1) == [0]
        assert exact_trace_placement(modal, 1) == [0]

    def test_maxmin_singleton_is_enumeration(self):
        net = OscillatorNetwork([1.0, 3.0, 2.0], [1.0, 2.0, 5.0], np.zeros((3, 3)))
        modal = modal_decomposition(net)
        assert greedy_maxmin(modal, 1) == brute_force_placement(modal, 1, "lambda_min")

    def test_trace_prefers_lighter_mass(self):
        net = OscillatorNetwork([1.0, 10.0], [1.0, 1.0], np.zeros((2, 2)))
        assert exact_trace_placement(modal_decomposition(net), 1) == [0]

    @pytest.mark.parametrize("weighting", ["published", "exact"])
    def test_exact_trace_matches_brute_force(self, weighting):
        for seed in range(6):
            modal = net_modal(10, seed)
            for m in (1, 3, 5, 10):
                got = placement_objective(modal, exact_trace_placement(modal, m, weighting), "trace", weighting)
                best = placement_objective(
                    modal, brute_force_placement(modal, m, "trace", weighting=weighting), "trace", weighting
                )
                assert got == pytest.approx(best, rel=1e-12)

    def test_trinv_follows_greedy_rule(self):
        # oracle: re-run the greedy step by step on the objective itself
        for seed in range(8):
            modal = net_modal(8, seed, grounding=0.5)
            chosen = []
            for _ in range(4):
                rest = [j for j in range(8) if j not in chosen]
                chosen.append(max(rest, key=lambda j: placement_objective(modal, chosen + [j], "trace_inv")))
            assert greedy_trinv(modal, 4) == chosen

    @pytest.mark.xfail(strict=True, reason="a myopic first pick can be far from the best pair")
    def test_trinv_near_optimal_pairs(self):
        for seed in range(20):
            modal = net_modal(8, seed, grounding=0.5)
            got = -placement_objective(modal, greedy_trinv(modal, 2), "trace_inv")
            best = -placement_objective(modal, brute_force_placement(modal, 2, "trace_inv"), "trace_inv")
            assert got <= 1.5 * best

    def test_beats_random_median(self):
        rng = np.random.default_rng(3)
        modal = net_modal(10, 4)
        assert placement_objective(modal, greedy_maxmin(modal, 3), "lambda_min") >= random_median(
            modal, 3, "lambda_min", rng
        )
        assert placement_objective(modal, greedy_trinv(modal, 3), "trace_inv") >= random_median(
            modal, 3, "trace_inv", rng
        )

    def test_dominance_over_realizations(self):
        rng = np.random.default_rng(5)
        wins = {"maxmin": 0, "exact_trace": 0, "trinv": 0}
        runs = 20
        for seed in range(runs):
            modal = net_modal(30, seed, p=0.15)
            m = 5
            sets = {
                "maxmin": (greedy_maxmin(modal, m), "lambda_min"),
                "exact_trace": (exact_trace_placement(modal, m), "trace"),
                "trinv": (greedy_trinv(modal, m), "trace_inv"),
            }
            for name, (S, metric) in sets.items():
                wins[name] += placement_objective(modal, S, metric) >= random_median(modal, m, metric, rng, 101)
        assert all(w >= 0.9 * runs for w in wins.values()), wins

    def test_literal_trinv_is_worse(self):
        modal = net_modal(12, 6, grounding=0.5)
        lit = greedy_trinv(modal, 12, literal=True)
        assert sorted(lit) == list(range(12))
        a = placement_objective(modal, greedy_trinv(modal, 4), "trace_inv")
        b = placement_objective(modal, greedy_trinv(modal, 4, literal=True)[:4], "trace_inv")
        assert a >= b

    def test_infeasible_coverage(self):
        # mode shapes of decoupled oscillators are unit vectors: one driver excites one mode
        modal = modal_decomposition(OscillatorNetwork([1.0, 2.0, 3.0], [1.0, 1.0, 1.0], np.zeros((3, 3))))
        with pytest.raises(InfeasibleCoverageError):
            greedy_trinv(modal, 2)
        assert sorted(greedy_trinv(modal, 3)) == [0, 1, 2]

    @pytest.mark.parametrize("strategy", [greedy_maxmin, greedy_trinv, exact_trace_placement])
    def test_equivariance(self, strategy):
        net = random_oscillator_network(12, 0.3, seed=7, grounding=0.2)
        perm = np.random.default_rng(7).permutation(12)
        base = strategy(modal_decomposition(net), 4)
        moved = strategy(modal_decomposition(permuted(net, perm)), 4)
        assert [int(perm[i]) for i in moved] == base

    @pytest.mark.parametrize("strategy", [greedy_maxmin, greedy_trinv, exact_trace_placement])
    def test_monotone_in_m(self, strategy):
        modal = net_modal(15, 8)
        prev = None
        for m in range(1, 16):
            S = strategy(modal, m)
            if prev is not None:
                assert S[: len(prev)] == prev
            met = modal_metrics(modal, S)
            if prev is not None:
                assert met.lambda_min >= last.lambda_min and met.trace >= last.trace
            prev, last = S, met


class TestModePower:
    def test_cases(self):
        modal = net_modal(8, 9)
        for k in range(8):
            assert mode_power_placement(modal, 1, k) == [int(np.argmax(modal.Psi[:, k] ** 2))]
            assert sorted(mode_power_placement(modal, 8, k)) == list(range(8))

    def test_matches_brute_force(self):
        modal = net_modal(8, 10)
        k = 3
        power = modal.Psi[:, k] ** 2
        best = max(combinations(range(8), 3), key=lambda S: power[list(S)].sum())
        assert sorted(mode_power_placement(modal, 3, k)) == sorted(best)

    def test_bad_mode(self):
        with pytest.raises(InvalidInputError):
            mode_power_placement(net_modal(4, 0), 1, 4)


class TestOverlap:
    def test_bounds(self):
        assert ranking_overlap([0, 1, 2], [0, 1, 2], 2) == 1.0
        assert ranking_overlap([0, 1, 2, 3], [2, 3, 0, 1], 2) == 0.0

    @pytest.mark.parametrize("weighting, floor", [("published", 0.05), ("exact", 0.15)])
    def test_rw_tracks_trace(self, weighting, floor):
        # the strict margin lives in the acceptance suite; this only guards the sign
        rng = np.random.default_rng(11)
        gaps = []
        for seed in range(25):
            net = random_oscillator_network(100, 0.05, seed=seed)
            modal = modal_decomposition(net)
            rw = rank_by_rw(net.coupling_matrix()).order
            tr = np.argsort(-trace_scores(modal, weighting), kind="stable")
            chance = np.mean([ranking_overlap(rw, rng.permutation(100), 10) for _ in range(100)])
            gaps.append(ranking_overlap(rw, tr, 10) - chance)
        assert np.mean(gaps) > floor


class TestBruteForceSystem:
    def test_hand_case(self):
        A = np.diag([-1.0, -10.0])
        S = brute_force_placement(A, 1, "lambda_min", t_f=1.0)
        # only one state is reachable either way; the slower mode has more energy headroom
        assert S in ([0], [1])
        assert brute_force_placement(A, 1, "trace", t_f=1.0) == [0]

    def test_full_set(self):
        A = -np.eye(3) + 0.1 * np.ones((3, 3))
        assert brute_force_placement(A, 3, "lambda_min", t_f=1.0) == [0, 1, 2]

    def test_additive_gramians(self, rng):
        A = rng.standard_normal((5, 5)) - 2 * np.eye(5)
        best = brute_force_placement(LinearSystem(A, np.eye(5)), 2, "trace", t_f=1.0)
        traces = {
            S: np.trace(finite_gramian(LinearSystem.from_drivers(A, S), 1.0).W) for S in combinations(range(5), 2)
        }
        assert tuple(best) == max(traces, key=traces.get)

    def test_limit(self):
        with pytest.raises(InvalidInputError):
            brute_force_placement(-np.eye(40), 20, "trace", t_f=1.0)


class TestEstimators:
    def test_params_and_clone(self):
        est = ExactTracePlacement(n_drivers=3, weighting="exact")
        assert est.get_params() == {"n_drivers": 3, "weighting": "exact"}
        assert clone(est).get_params() == est.get_params()

    def test_rw_estimator(self):
        net = random_oscillator_network(20, 0.2, seed=1)
        est = RwPlacement(n_drivers=4).fit(net)
        assert est.ranking_.shape == (20,)
        np.testing.assert_array_equal(est.drivers_, est.ranking_[:4])
        B = est.transform(net)
        assert B.shape == (20, 4) and np.all(B.sum(axis=0) == 1)
        np.testing.assert_allclose(est.r_w_, weighted_degrees(net.coupling_matrix()).r_w)

    def test_random_estimator_reproducible(self):
        a = RandomPlacement(3, random_state=4).fit(np.zeros((9, 9))).drivers_
        b = RandomPlacement(3, random_state=4).fit(np.zeros((9, 9))).drivers_
        np.testing.assert_array_equal(a, b)

    def test_modal_estimator_rejects_system(self):
        with pytest.raises(InvalidInputError):
            GreedyMaxMinPlacement(2).fit(LinearSystem(-np.eye(3), np.eye(3)))

    def test_brute_force_estimator(self):
        modal = net_modal(6, 2)
        est = BruteForcePlacement(2, metric="trace").fit(modal)
        assert list(est.drivers_) == brute_force_placement(modal, 2, "trace")

    def test_registry(self):
        net = random_oscillator_network(10, 0.4, seed=3)
        for name, cls in STRATEGIES.items():
            est = cls(n_drivers=2).fit(net)
            assert len(set(est.drivers_.tolist())) == 2, name

    def test_unfitted(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            RwPlacement().transform(np.zeros((3, 3)))
