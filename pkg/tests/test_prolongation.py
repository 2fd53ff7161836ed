import math

import numpy as np
import pytest

from lieprolong import (
    ProlongedMatrix,
    Representation,
    SpecMismatchError,
    StepSizeError,
    TangentGroupElement,
    TangentVector,
    algebra_element,
    apply_prolonged,
    catalog_entry,
    circle,
    circle_element,
    differential_rep,
    differential_report,
    finite_difference_differential,
    general_linear,
    group_element,
    identity_element,
    jn_embed,
    prolong,
    prolonged,
    rep_image,
    relative_residual,
    sample_tangent_element,
    special_orthogonal,
    tangent_action_oracle,
    tg_multiply,
    tv_add,
    tv_scale,
    zero_algebra,
)


def scalar_pair(a: float, b: float) -> TangentGroupElement:
    spec = general_linear(1)
    return TangentGroupElement(
        group_element([[a]], spec), algebra_element([[b]], spec)
    )


class TestJnEmbed:
    def test_identity_embeds_to_identity(self):
        from lieprolong import identity_tangent

        M = jn_embed(identity_tangent(general_linear(3)))
        np.testing.assert_array_equal(M.dense(), np.eye(6))

    def test_scalar_frozen(self):
        M = jn_embed(scalar_pair(2.0, 3.0))
        np.testing.assert_array_equal(M.dense(), [[2.0, 0.0], [6.0, 2.0]])

    def test_scalar_product_frozen(self):
        left = jn_embed(scalar_pair(2.0, 3.0))
        right = jn_embed(scalar_pair(5.0, 7.0))
        np.testing.assert_allclose(
            (left @ right).dense(), [[10.0, 0.0], [100.0, 10.0]], atol=1e-12
        )

    @pytest.mark.parametrize("spec", [general_linear(2), special_orthogonal(3), circle()])
    def test_turns_tg_multiplication_into_matrix_multiplication(self, spec):
        for i in range(25):
            X = sample_tangent_element(spec, (61, i))
            Y = sample_tangent_element(spec, (67, i))
            left = jn_embed(tg_multiply(X, Y)).dense()
            right = jn_embed(X).dense() @ jn_embed(Y).dense()
            assert relative_residual(left, right) < 1e-11


class TestProlongedMatrix:
    def test_top_right_block_is_exactly_zero(self):
        M = ProlongedMatrix([[2.0, 1.0], [0.0, 1.0]], [[3.0, 4.0], [5.0, 6.0]])
        dense = M.dense()
        np.testing.assert_array_equal(dense[:2, 2:], np.zeros((2, 2)))
        np.testing.assert_array_equal(dense[:2, :2], dense[2:, 2:])

    def test_block_product_matches_dense_product(self):
        rng = np.random.default_rng(3)
        A = ProlongedMatrix(rng.uniform(-1, 1, (3, 3)) + 2 * np.eye(3), rng.uniform(-1, 1, (3, 3)))
        B = ProlongedMatrix(rng.uniform(-1, 1, (3, 3)) + 2 * np.eye(3), rng.uniform(-1, 1, (3, 3)))
        np.testing.assert_allclose((A @ B).dense(), A.dense() @ B.dense(), atol=1e-13)

    def test_singular_diagonal_block_rejected(self):
        with pytest.raises(ValueError):
            ProlongedMatrix([[1.0, 0.0], [0.0, 0.0]], np.zeros((2, 2)))

    def test_mismatched_blocks_rejected(self):
        with pytest.raises(ValueError):
            ProlongedMatrix(np.eye(2), np.zeros((3, 3)))

    def test_blocks_are_read_only(self):
        M = ProlongedMatrix(np.eye(2), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            M.top_left[0, 0] = 7.0


class TestDifferential:
    def test_circle_generator_frozen(self):
        rep = catalog_entry("circle_rotation").rep
        B = algebra_element([[0.0, 1.0], [-1.0, 0.0]], circle())
        np.testing.assert_allclose(
            differential_rep(rep, B), [[0.0, 1.0], [-1.0, 0.0]], atol=1e-12
        )

    def test_identity_representation_differential_is_identity_map(self):
        rep = catalog_entry("gl_identity(2)").rep
        B = algebra_element([[0.5, -1.0], [2.0, 0.25]], general_linear(2))
        np.testing.assert_array_equal(differential_rep(rep, B), B.matrix)

    def test_zero_direction_gives_zero(self):
        rep = catalog_entry("so3_standard").rep
        out = differential_rep(rep, zero_algebra(special_orthogonal(3)))
        assert np.max(np.abs(out)) < 1e-12

    def test_finite_difference_matches_analytic(self):
        for name in ["circle_winding_2", "so3_standard", "sl2_standard"]:
            rep = catalog_entry(name).rep
            for i in range(5):
                B = sample_tangent_element(rep.group, (71, i)).algebra
                numeric = finite_difference_differential(rep, B)
                analytic = differential_rep(rep, B)
                assert np.max(np.abs(numeric - analytic)) < 1e-8

    def test_richardson_beats_plain_quotient_at_coarse_steps(self):
        rep = catalog_entry("circle_winding_2").rep
        B = algebra_element([[0.0, 1.0], [-1.0, 0.0]], circle())
        analytic = differential_rep(rep, B)
        plain = finite_difference_differential(rep, B, step=1e-3)
        extrapolated = finite_difference_differential(rep, B, step=1e-3, richardson=True)
        err_plain = np.max(np.abs(plain - analytic))
        err_extrapolated = np.max(np.abs(extrapolated - analytic))
        assert err_extrapolated < err_plain / 10

    def test_report_with_analytic_differential(self):
        rep = catalog_entry("circle_winding_2").rep
        B = algebra_element([[0.0, 1.0], [-1.0, 0.0]], circle())
        report = differential_report(rep, B)
        assert report.analytic is not None
        assert report.discrepancy < 1e-8
        np.testing.assert_allclose(report.numeric, report.analytic, atol=1e-8)

    def test_report_without_analytic_differential(self):
        base = catalog_entry("circle_winding_2").rep
        rep = Representation(base.group, base.target_dim, base.apply)
        B = algebra_element([[0.0, 1.0], [-1.0, 0.0]], circle())
        report = differential_report(rep, B)
        assert report.analytic is None
        assert report.discrepancy < 1e-9

    def test_rejects_bad_step(self):
        rep = catalog_entry("circle_rotation").rep
        B = algebra_element([[0.0, 1.0], [-1.0, 0.0]], circle())
        with pytest.raises(ValueError):
            finite_difference_differential(rep, B, step=0.0)
        with pytest.raises(ValueError):
            finite_difference_differential(rep, B, step=float("nan"))

    def test_overflowing_quotient_raises_step_error(self):
        # Square-root cusp at the identity: values at h = 1e-6 are ~1e303
        # and finite, but the difference quotient overflows to inf.
        spec = general_linear(1)

        def cusp(a):
            gap = a.matrix - np.eye(1)
            return np.eye(1) + np.sign(gap) * np.sqrt(np.abs(gap)) * 1e306

        steep = Representation(spec, 1, cusp)
        B = algebra_element([[1.0]], spec)
        with np.errstate(over="ignore"), pytest.raises(StepSizeError):
            finite_difference_differential(steep, B)

    def test_spec_mismatch_rejected(self):
        rep = catalog_entry("circle_rotation").rep
        with pytest.raises(SpecMismatchError):
            differential_rep(rep, algebra_element([[1.0]], general_linear(1)))


class TestProlong:
    def test_scalar_identity_rep_frozen(self):
        rep = catalog_entry("gl_identity(1)").rep
        M = prolong(rep, scalar_pair(2.0, 3.0))
        np.testing.assert_array_equal(M.top_left, [[2.0]])
        np.testing.assert_array_equal(M.bottom_left, [[6.0]])

    def test_circle_generator_frozen(self):
        rep = catalog_entry("circle_rotation").rep
        X = TangentGroupElement(
            identity_element(circle()),
            algebra_element([[0.0, 1.0], [-1.0, 0.0]], circle()),
        )
        M = prolong(rep, X)
        np.testing.assert_allclose(M.top_left, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(M.bottom_left, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-12)

    def test_identity_rep_prolongation_is_jn_embed(self):
        rep = catalog_entry("gl_identity(2)").rep
        for i in range(10):
            X = sample_tangent_element(general_linear(2), (73, i))
            M = prolong(rep, X)
            E = jn_embed(X)
            np.testing.assert_array_equal(M.top_left, E.top_left)
            np.testing.assert_array_equal(M.bottom_left, E.bottom_left)

    def test_homomorphism_on_samples(self):
        rep = catalog_entry("so3_standard").rep
        for i in range(20):
            X = sample_tangent_element(rep.group, (79, i))
            Y = sample_tangent_element(rep.group, (83, i))
            left = prolong(rep, tg_multiply(X, Y)).dense()
            right = (prolong(rep, X) @ prolong(rep, Y)).dense()
            assert relative_residual(left, right) < 1e-9

    def test_spec_mismatch_rejected(self):
        rep = catalog_entry("circle_rotation").rep
        with pytest.raises(SpecMismatchError):
            prolong(rep, sample_tangent_element(general_linear(2), 0))

    def test_singular_image_rejected(self):
        # This map is the identity at the identity but collapses a row at a
        # quarter turn, so the image cannot sit on the prolonged diagonal.
        def collapse(a):
            return np.diag([1.0, a.matrix[0, 0]])

        rep = Representation(circle(), 2, collapse)
        X = TangentGroupElement(circle_element(math.pi / 2), zero_algebra(circle()))
        with pytest.raises(ValueError):
            prolong(rep, X)


class TestApplyProlonged:
    def test_circle_action_frozen(self):
        rep = catalog_entry("circle_rotation").rep
        X = TangentGroupElement(
            identity_element(circle()),
            algebra_element([[0.0, 1.0], [-1.0, 0.0]], circle()),
        )
        out = apply_prolonged(prolong(rep, X), TangentVector([1.0, 0.0], [0.0, 0.0]))
        np.testing.assert_allclose(out.base, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(out.fiber, [0.0, -1.0], atol=1e-12)

    def test_vertical_vectors_stay_vertical(self):
        rep = catalog_entry("so3_standard").rep
        for i in range(10):
            X = sample_tangent_element(rep.group, (89, i))
            M = prolong(rep, X)
            out = apply_prolonged(M, TangentVector(np.zeros(3), [1.0, -2.0, 0.5]))
            np.testing.assert_array_equal(out.base, np.zeros(3))
            np.testing.assert_allclose(
                out.fiber, M.top_left @ [1.0, -2.0, 0.5], atol=1e-14
            )

    def test_action_is_exactly_linear_on_integer_data(self):
        M = ProlongedMatrix([[2.0, 0.0], [0.0, 3.0]], [[1.0, 2.0], [3.0, 4.0]])
        u = TangentVector([1.0, -2.0], [3.0, 5.0])
        w = TangentVector([4.0, 0.0], [-1.0, 2.0])
        left = apply_prolonged(M, tv_add(u, w))
        right = tv_add(apply_prolonged(M, u), apply_prolonged(M, w))
        np.testing.assert_array_equal(left.coordinates, right.coordinates)
        scaled = apply_prolonged(M, tv_scale(3.0, u))
        np.testing.assert_array_equal(
            scaled.coordinates, tv_scale(3.0, apply_prolonged(M, u)).coordinates
        )

    def test_matches_dense_matrix_action(self):
        M = ProlongedMatrix([[2.0, 1.0], [0.0, 1.0]], [[3.0, 4.0], [5.0, 6.0]])
        u = TangentVector([1.0, 2.0], [3.0, 4.0])
        out = apply_prolonged(M, u)
        np.testing.assert_array_equal(out.coordinates, M.dense() @ u.coordinates)

    def test_dimension_mismatch_rejected(self):
        M = ProlongedMatrix(np.eye(2), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            apply_prolonged(M, TangentVector([1.0], [2.0]))


class TestActionOracle:
    @pytest.mark.parametrize("name", ["circle_rotation", "gl_identity(2)", "so3_standard"])
    def test_agrees_with_block_formula(self, name):
        rep = catalog_entry(name).rep
        rng = np.random.default_rng(5)
        for i in range(30):
            X = sample_tangent_element(rep.group, (97, i))
            Y = TangentVector(
                rng.uniform(-1, 1, rep.target_dim), rng.uniform(-1, 1, rep.target_dim)
            )
            direct = apply_prolonged(prolong(rep, X), Y)
            oracle = tangent_action_oracle(rep, X, Y)
            assert np.max(np.abs(direct.coordinates - oracle.coordinates)) < 1e-5

    def test_base_component_is_exact(self):
        rep = catalog_entry("circle_rotation").rep
        X = sample_tangent_element(circle(), 7)
        Y = TangentVector([1.0, 2.0], [3.0, 4.0])
        oracle = tangent_action_oracle(rep, X, Y)
        np.testing.assert_allclose(
            oracle.base, rep_image(rep, X.base) @ Y.base, atol=1e-15
        )

    def test_rejects_mismatches(self):
        rep = catalog_entry("circle_rotation").rep
        X = sample_tangent_element(circle(), 7)
        with pytest.raises(ValueError):
            tangent_action_oracle(rep, X, TangentVector([1.0], [2.0]))
        with pytest.raises(SpecMismatchError):
            tangent_action_oracle(
                rep, sample_tangent_element(general_linear(2), 0), TangentVector([1.0, 0.0], [0.0, 0.0])
            )
        with pytest.raises(ValueError):
            tangent_action_oracle(rep, X, TangentVector([1.0, 0.0], [0.0, 0.0]), step=-1.0)


class TestProlongedRepresentation:
    def test_wraps_block_images(self):
        rep = catalog_entry("circle_rotation").rep
        lifted = prolonged(rep)
        assert lifted.group == rep.group
        assert lifted.target_dim == 4
        assert lifted.name == "prolonged(circle_rotation)"
        X = sample_tangent_element(circle(), 13)
        np.testing.assert_array_equal(lifted.apply(X), prolong(rep, X).dense())

    def test_identity_validation_still_applies(self):
        spec = general_linear(1)
        with pytest.raises(ValueError):
            Representation(spec, 1, lambda a: 2.0 * np.eye(1))
