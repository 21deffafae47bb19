import itertools
import math

import numpy as np
import pytest

import bruteforce as bf
from trispin import (
    cancellation_sweep,
    product_state,
    verify_cancellation,
    verify_identity_suite,
    verify_product_vanishing,
    verify_sum_route,
)
from trispin.verify import (
    FACTORIZATION_TOL,
    IDENTITIES,
    RESIDUAL_TOL,
    cancellation_terms,
    factorization_deviation,
    identity_lhs,
    identity_rhs,
    run_verification,
)


class TestIdentityTable:
    def test_every_axis_word_appears_exactly_once(self):
        words = [entry.word for entry in IDENTITIES]
        assert len(words) == 27
        assert sorted(words) == sorted(
            "".join(w) for w in itertools.product("xyz", repeat=3)
        )

    def test_three_cubic_diagonals(self):
        cubes = [e for e in IDENTITIES if e.word in ("xxx", "yyy", "zzz")]
        assert len(cubes) == 3
        for entry in cubes:
            assert entry.singles == (1.75, entry.word[0])
            assert entry.pairs == ()
            assert entry.triples == ((6.0, entry.word),)

    def test_mixed_xyz_words_carry_the_constant(self):
        for entry in IDENTITIES:
            if sorted(entry.word) == ["x", "y", "z"]:
                assert abs(entry.const) == 0.375
                assert entry.singles is None
                assert len(entry.pairs) == 9
                assert len(entry.triples) == 6
            else:
                assert entry.const == 0.0

    def test_suite_passes(self):
        results = verify_identity_suite()
        # 27 collective-product identities plus 6 single-atom relation groups
        assert len(results) == 33
        assert all(r.passed for r in results)
        assert all(r.max_abs_residual <= RESIDUAL_TOL for r in results)
        assert all(r.dim == 8 for r in results)

    def test_cube_identity_is_exact_in_floating_point(self):
        by_id = {r.identity_id: r for r in verify_identity_suite()}
        assert by_id["JxJxJx"].max_abs_residual == 0.0

    def test_mixed_word_identity_is_tight(self):
        by_id = {r.identity_id: r for r in verify_identity_suite()}
        assert by_id["JxJyJz"].max_abs_residual <= 1e-15

    def test_corruption_is_detected(self):
        results = verify_identity_suite(corrupt_id="JzJzJy")
        by_id = {r.identity_id: r for r in results}
        assert not by_id["JzJzJy"].passed
        assert sum(not r.passed for r in results) == 1

    def test_rhs_matches_independent_oracle_terms(self):
        # spot-check one identity against matrices built by the test oracle
        entry = next(e for e in IDENTITIES if e.identity_id == "JxJxJy")
        lhs = bf.collective(3, "x") @ bf.collective(3, "x") @ bf.collective(3, "y")
        np.testing.assert_allclose(identity_lhs(entry), lhs, atol=1e-14)
        rhs = 0.75 * sum(bf.atom_operator(3, {n: "y"}) for n in (1, 2, 3))
        for first, second in [
            ((1, "z"), (2, "x")), ((1, "x"), (2, "z")), ((1, "z"), (3, "x")),
            ((1, "x"), (3, "z")), ((2, "z"), (3, "x")), ((2, "x"), (3, "z")),
        ]:
            rhs = rhs + 1j * bf.atom_operator(3, dict([first])) @ bf.atom_operator(
                3, dict([second])
            )
        for word in ("xxy", "xyx", "yxx"):
            rhs = rhs + 2.0 * (
                bf.atom_operator(3, {1: word[0]})
                @ bf.atom_operator(3, {2: word[1]})
                @ bf.atom_operator(3, {3: word[2]})
            )
        np.testing.assert_allclose(identity_rhs(entry), rhs, atol=1e-14)


class TestCancellation:
    def test_axis_aligned_angles_reduce_to_cube_checks(self):
        assert verify_cancellation(0.0, 0.0).max_abs_residual == 0.0
        assert verify_cancellation(math.pi / 2, math.pi / 2).passed

    def test_random_angles(self):
        rng = np.random.default_rng(99)
        for _ in range(10):
            theta = rng.uniform(0, math.pi)
            phi = rng.uniform(-math.pi, math.pi)
            assert verify_cancellation(theta, phi).max_abs_residual <= RESIDUAL_TOL

    def test_reduced_form_has_no_bipartite_terms(self):
        terms = cancellation_terms(0.3, -1.2)
        sizes = {len(factors) for _, factors in terms}
        assert sizes == {1, 3}

    def test_sweep_summary(self):
        summary = cancellation_sweep(100, seed=13)
        assert summary.n_trials == 100
        assert summary.passed
        assert summary.worst <= RESIDUAL_TOL


class TestSumRouteSweep:
    def test_small_sweep_passes_and_counts_skips(self):
        summary = verify_sum_route(3, 30, seed=1)
        assert summary.passed
        assert summary.n_skipped >= 1  # the zero-mean-spin probe state
        assert summary.n_trials == 31

    def test_atom_count_window_enforced(self):
        with pytest.raises(ValueError):
            verify_sum_route(7, 5, seed=1)
        with pytest.raises(ValueError):
            verify_sum_route(2, 5, seed=1)


class TestProductVanishing:
    def test_random_products(self):
        summary = verify_product_vanishing(3, 100, seed=3)
        assert summary.passed and summary.worst <= 1e-10

    def test_spin_coherent_along_x(self):
        from trispin import entanglement_s

        q = [1 / math.sqrt(2), 1 / math.sqrt(2)]
        report = entanglement_s(product_state([q] * 3))
        assert report.s_parameter <= 1e-12

    def test_factorization_conditions_hold_numerically(self):
        from trispin import random_product_state

        for seed in range(20):
            state = random_product_state(4, seed)
            assert factorization_deviation(state) <= FACTORIZATION_TOL


class TestRunVerification:
    def test_aggregated_report_passes(self):
        report = run_verification(trials=10, seed=2)
        assert report["passed"]
        assert len(report["identities"]) == 33
        ids = {s["check_id"] for s in report["sweeps"]}
        assert ids == {
            "cancellation_sweep",
            "sum_route_n3", "sum_route_n4", "sum_route_n5", "sum_route_n6",
            "product_vanishing_n3", "product_vanishing_n8",
        }

    def test_deterministic(self):
        a = run_verification(trials=5, seed=42)
        b = run_verification(trials=5, seed=42)
        assert a == b

    def test_corruption_fails_the_run(self):
        report = run_verification(trials=5, seed=2, corrupt_identity="JyJyJy")
        assert not report["passed"]
