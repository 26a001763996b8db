"""Tests for the spectrum machinery: characters, transform, kernels, quotients.

The character finder is checked against a brute-force oracle: for a standard
function algebra over n points the even characters must be exactly the n
point evaluations, which we can write down without running any eigensolver.
"""

import numpy as np
import pytest

from kreinalg import (
    Character,
    KElem,
    KreinAlgebra,
    MissingOddGeneratorError,
    NotCommutativeError,
    SpectralHypothesisError,
    build_function_algebra,
    character_kernel_ideal,
    character_residuals,
    conjugate_algebra,
    even_characters,
    evenness_residual,
    extend_character,
    gelfand,
    gelfand_matrix,
    k_norm,
    kernel_lemma_checks,
    quotient_with_map,
    random_unitary,
    spectrum_classes,
    verify_spectral_theorem,
)


def evaluation_table(algebra, omegas):
    """Each character read on the standard even elements (the point
    projections), as a sorted tuple of rounded value vectors."""
    n = algebra.dim // 2
    eye = np.eye(algebra.dim)
    rows = []
    for om in omegas:
        rows.append(tuple(complex(np.round(om.eval_coords(eye[2 * p]), 8)) for p in range(n)))
    return sorted(rows, key=lambda r: [(z.real, z.imag) for z in r])


def sort_rows(rows):
    return sorted(rows, key=lambda r: [(z.real, z.imag) for z in r])


class TestEvenCharacters:
    def test_diagonal_span_frozen_example(self):
        basis = np.zeros((2, 2, 2), dtype=complex)
        basis[0] = np.eye(2)
        basis[1] = np.diag([1.0, 2.0])
        alg = KreinAlgebra(basis, np.eye(2))
        omegas = even_characters(alg)
        values = sorted(complex(om.eval_coords([0.0, 1.0])).real for om in omegas)
        assert values == pytest.approx([1.0, 2.0], abs=1e-10)
        for om in omegas:
            assert complex(om.eval_coords(alg.unit_coords)) == pytest.approx(1.0, abs=1e-10)

    def test_corner_algebra_has_one_character(self):
        # The ambient zero eigenvalue is junk (the unit reads 0 there), so a
        # single character must survive.
        basis = np.zeros((1, 2, 2), dtype=complex)
        basis[0, 0, 0] = 1.0
        alg = KreinAlgebra(basis, np.eye(2))
        omegas = even_characters(alg)
        assert len(omegas) == 1
        assert complex(omegas[0].eval_coords([1.0])) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("points", [1, 2, 3, 4])
    def test_matches_point_evaluations(self, points):
        alg = build_function_algebra(points)
        omegas = even_characters(alg)
        assert len(omegas) == points
        expected = sort_rows(
            tuple(complex(1.0 if q == p else 0.0) for q in range(points))
            for p in range(points)
        )
        assert evaluation_table(alg, omegas) == expected

    def test_frame_independent(self, fn3, conj3):
        # Coordinates do not change under conjugation, so the value tables
        # must agree between the two presentations.
        assert evaluation_table(fn3, even_characters(fn3)) == evaluation_table(
            conj3, even_characters(conj3)
        )

    def test_rejects_noncommutative(self, m2_algebra):
        with pytest.raises(NotCommutativeError):
            even_characters(m2_algebra)

    def test_deterministic_and_seed_stable(self, fn3):
        first = even_characters(fn3, seed=7)
        second = even_characters(fn3, seed=7)
        for a, b in zip(first, second):
            assert np.array_equal(a.values, b.values)
        other = even_characters(fn3, seed=12345)
        assert evaluation_table(fn3, first) == evaluation_table(fn3, other)


class TestExtension:
    def test_single_point_extension_is_the_identity(self, fn1):
        om = even_characters(fn1)[0]
        w = extend_character(fn1, om)
        u = w(fn1.unit)
        assert abs(u.a - 1.0) + abs(u.b) <= 1e-10
        g = w(fn1.odd_generator)
        assert abs(g.a) + abs(g.b - 1.0) <= 1e-10
        rng = np.random.default_rng(0)
        for _ in range(10):
            x = fn1.random_element(rng)
            v = w(x)
            assert abs(v.a - x.coords[0]) + abs(v.b - x.coords[1]) <= 1e-10

    def test_requires_generator(self, no_generator_algebra):
        om = even_characters(no_generator_algebra)[0]
        with pytest.raises(MissingOddGeneratorError):
            extend_character(no_generator_algebra, om)

    def test_residuals_small(self, fn3, conj3):
        for alg in (fn3, conj3):
            for om in even_characters(alg):
                w = extend_character(alg, om)
                assert max(character_residuals(w).values()) <= 1e-8

    def test_each_class_has_one_even_member(self, fn3):
        for cls in spectrum_classes(fn3):
            assert evenness_residual(cls.even_rep) <= 1e-8
            assert evenness_residual(cls.partner) > 0.5
            assert np.allclose(cls.partner.a_values, cls.even_rep.a_values)
            assert np.allclose(cls.partner.b_values, -cls.even_rep.b_values)

    def test_partner_agrees_with_symmetry_composition(self, fn3):
        for cls in spectrum_classes(fn3):
            rng = np.random.default_rng(1)
            for _ in range(5):
                x = fn3.random_element(rng)
                via_alpha = cls.even_rep(x.alpha())
                direct = cls.partner(x)
                assert abs(via_alpha.a - direct.a) + abs(via_alpha.b - direct.b) <= 1e-10


class TestGelfand:
    def test_standard_frame_transform_is_a_permutation(self, fn3):
        T = gelfand_matrix(spectrum_classes(fn3))
        assert T.shape == (6, 6)
        assert np.allclose(np.abs(T) @ np.ones(6), np.ones(6), atol=1e-8)
        assert np.allclose(T.conj().T @ T, np.eye(6), atol=1e-8)

    def test_unit_maps_to_constant_one(self, fn3):
        values = gelfand(fn3, fn3.unit)
        for v in values:
            assert abs(v.a - 1.0) + abs(v.b) <= 1e-10

    def test_values_are_the_blocks_up_to_order(self, fn3):
        classes = spectrum_classes(fn3)
        rng = np.random.default_rng(2)
        x = fn3.random_element(rng)
        got = sorted(
            (round(v.a.real, 8), round(v.a.imag, 8), round(v.b.real, 8), round(v.b.imag, 8))
            for v in gelfand(fn3, x, classes)
        )
        want = sorted(
            (
                round(x.coords[2 * p].real, 8),
                round(x.coords[2 * p].imag, 8),
                round(x.coords[2 * p + 1].real, 8),
                round(x.coords[2 * p + 1].imag, 8),
            )
            for p in range(3)
        )
        assert got == want

    def test_isometry(self, conj3):
        classes = spectrum_classes(conj3)
        rng = np.random.default_rng(3)
        for _ in range(10):
            x = conj3.random_element(rng)
            sup = max(k_norm(v) for v in gelfand(conj3, x, classes))
            assert sup == pytest.approx(x.norm(), rel=1e-9)


class TestSpectralTheorem:
    @pytest.mark.parametrize("points", [1, 2, 4])
    def test_passes_on_function_algebras(self, points):
        alg = build_function_algebra(points)
        report = verify_spectral_theorem(alg, samples=40, seed=4)
        assert report.passed
        assert report.spectrum_size == points
        assert report.transform_rank == 2 * points
        assert np.isfinite(report.condition_number)
        assert all(c.passed for c in report.checks)

    def test_passes_in_a_rotated_frame(self, conj3):
        report = verify_spectral_theorem(conj3, samples=40, seed=5)
        assert report.passed and report.spectrum_size == 3

    def test_report_is_json_ready(self, fn1):
        import json

        report = verify_spectral_theorem(fn1, samples=10, seed=6)
        blob = json.dumps(report.to_dict())
        assert "spectrum_size" in blob

    def test_hypothesis_commutative(self, m2_algebra):
        with pytest.raises(SpectralHypothesisError) as err:
            verify_spectral_theorem(m2_algebra, samples=5, seed=7)
        assert err.value.hypothesis == "commutative"

    def test_hypothesis_full(self, nonfull_algebra):
        with pytest.raises(SpectralHypothesisError) as err:
            verify_spectral_theorem(nonfull_algebra, samples=5, seed=8)
        assert err.value.hypothesis == "full"

    def test_hypothesis_odd_symmetry(self, no_generator_algebra, broken_generator_algebra):
        for alg in (no_generator_algebra, broken_generator_algebra):
            with pytest.raises(SpectralHypothesisError) as err:
                verify_spectral_theorem(alg, samples=5, seed=9)
            assert err.value.hypothesis == "odd symmetry"


class TestKernels:
    def test_lemma_checks_pass(self, fn3, conj3):
        for alg in (fn3, conj3):
            for cls in spectrum_classes(alg):
                results = kernel_lemma_checks(alg, cls.even_rep, samples=40, seed=10)
                assert all(r.passed for r in results), [
                    (r.name, r.max_residual) for r in results if not r.passed
                ]

    def test_kernel_dimension(self, fn3):
        w = spectrum_classes(fn3)[0].even_rep
        assert w.kernel_basis().shape == (6, 4)

    def test_kernel_elements_vanish_quadratically(self, fn3):
        w = spectrum_classes(fn3)[1].even_rep
        K = w.kernel_basis()
        rng = np.random.default_rng(11)
        for _ in range(10):
            c = rng.standard_normal(K.shape[1]) + 1j * rng.standard_normal(K.shape[1])
            x = fn3.element(K @ c)
            v = w(x)
            assert abs(v.a) + abs(v.b) <= 1e-8 * max(1.0, x.norm())
            vq = w(x.dagger() * x)
            assert abs(vq.a) + abs(vq.b) <= 1e-7 * max(1.0, x.norm() ** 2)

    def test_partner_has_the_same_kernel(self, fn3):
        cls = spectrum_classes(fn3)[2]
        K1, K2 = cls.even_rep.kernel_basis(), cls.partner.kernel_basis()
        # Same column space: projecting one basis onto the other is lossless.
        proj = K2 @ (K2.conj().T @ K1)
        assert np.allclose(proj, K1, atol=1e-9)


class TestCharacterQuotients:
    @pytest.mark.parametrize("points", [1, 2, 3])
    def test_quotient_by_character_kernel_is_rank_one(self, points):
        alg = build_function_algebra(points)
        for om in even_characters(alg):
            ideal = character_kernel_ideal(alg, om)
            quot, cmap = quotient_with_map(alg, ideal, tol=1e-9)
            assert quot.dim == 2
            w = extend_character(alg, om)
            # Express quotient coordinates in the (unit, generator) frame;
            # the induced map must be the extended character.
            P = np.linalg.inv(
                np.column_stack([quot.unit_coords, quot.odd_generator_coords])
            )
            rng = np.random.default_rng(12)
            for _ in range(10):
                x = alg.random_element(rng)
                mu, nu = P @ (cmap @ x.coords)
                v = w(x)
                assert abs(mu - v.a) + abs(nu - v.b) <= 1e-8
