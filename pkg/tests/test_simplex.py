"""Affine smearing simplices: faces, oriented chains, the cone construction
and the associated forms."""

from fractions import Fraction

import numpy as np
import pytest

from causalloops.checks import random_poincare, random_rational_chain, random_rational_point
from causalloops.geometry import FourVector, LorentzMatrix, PoincareElement
from causalloops.simplex import (
    AffineSimplex,
    Chain,
    GAUSSIAN_CUTOFF,
    SimplexError,
    TestFunctionTag,
    boundary,
    cone,
    cone_simplex,
    homotopy_identity_check,
    jacobian_tensor,
    poincare_act,
    segment,
    simplex_form,
    support_ball,
    triangle,
)


def fv(*comps):
    return FourVector.of(*[Fraction(c) for c in comps])


@pytest.fixture
def tri(bump_tag):
    return triangle(fv(0, 0, 0, 0), fv(1, 0, 0, 0), fv(0, 1, 0, 0), bump_tag)


@pytest.fixture
def seg(bump_tag):
    return segment(fv(0, 0, 0, 0), fv(1, 1, 0, 0), bump_tag)


class TestTag:
    def test_kinds_validated(self):
        with pytest.raises(SimplexError):
            TestFunctionTag("box", 0.1)
        with pytest.raises(SimplexError):
            TestFunctionTag("bump", -0.1)

    def test_effective_radius(self):
        assert TestFunctionTag("bump", 0.2).effective_radius == 0.2
        assert TestFunctionTag("gaussian", 0.2).effective_radius == GAUSSIAN_CUTOFF * 0.2

    def test_rotation_stretches_radius(self):
        L = LorentzMatrix.boost(1, 1.0)
        t = TestFunctionTag("bump", 0.2).rotated(L)
        assert t.effective_radius == pytest.approx(0.2 * L.op_norm())

    def test_bump_compact_support(self, bump_tag):
        far = np.array([[0.3, 0.0, 0.0, 0.0]])
        assert bump_tag.values(far)[0] == 0.0
        near = np.array([[0.1, 0.0, 0.0, 0.0]])
        assert bump_tag.values(near)[0] > 0.0

    def test_json_roundtrip(self):
        t = TestFunctionTag("gaussian", 0.3, 2.0, "h", LorentzMatrix.boost(2, 0.5))
        assert TestFunctionTag.from_json(t.to_json()) == t


class TestFaces:
    def test_triangle_faces(self, tri):
        c0, c1, c2 = tri.vertices
        assert tri.face(0).vertices == (c1, c2)
        assert tri.face(1).vertices == (c0, c2)
        assert tri.face(2).vertices == (c0, c1)

    def test_segment_faces(self, seg):
        b0, b1 = seg.vertices
        assert seg.face(0).vertices == (b1,)
        assert seg.face(1).vertices == (b0,)

    def test_tag_preserved(self, tri):
        assert tri.face(0).tag == tri.tag

    def test_out_of_range(self, tri, seg):
        with pytest.raises(SimplexError):
            tri.face(3)
        with pytest.raises(SimplexError):
            seg.face(0).face(0)


class TestBoundary:
    def test_segment_boundary(self, seg, bump_tag):
        b0, b1 = seg.vertices
        expected = Chain.of([(1, AffineSimplex((b1,), bump_tag)),
                             (-1, AffineSimplex((b0,), bump_tag))])
        assert boundary(seg) == expected

    def test_triangle_boundary_signs(self, tri):
        b = boundary(tri)
        assert boundary(b).is_zero()
        assert len(b.terms) == 3

    def test_boundary_squared_zero_on_random_chains(self, rng, bump_tag):
        for _ in range(50):
            ch = random_rational_chain(rng, bump_tag, 2, int(rng.integers(1, 6)))
            assert boundary(boundary(ch)).is_zero()

    def test_chains_merge_and_drop(self, tri):
        assert Chain.of([(1, tri), (-1, tri)]).is_zero()
        assert Chain.of([(2, tri), (1, tri.opposite())]) == Chain.single(tri)

    def test_mixed_dimension_rejected(self, tri, seg):
        with pytest.raises(SimplexError):
            Chain.of([(1, tri), (1, seg)])


class TestOpposite:
    def test_segment_swap(self, seg):
        b0, b1 = seg.vertices
        assert seg.opposite().vertices == (b1, b0)

    def test_triangle_swaps_last_two(self, tri):
        c0, c1, c2 = tri.vertices
        assert tri.opposite().vertices == (c0, c2, c1)

    def test_boundary_of_opposite_negates(self, tri, seg):
        assert boundary(seg.opposite()) == -boundary(seg)
        assert (boundary(tri.opposite()) + boundary(tri)).is_zero()

    def test_unsupported_dimension(self, tri, bump_tag):
        point = AffineSimplex((fv(0, 0, 0, 0),), bump_tag)
        with pytest.raises(SimplexError):
            point.opposite()


class TestCone:
    def test_vertex_tuple(self, seg):
        z = fv(Fraction(1, 2), Fraction(1, 3), 0, 0)
        assert cone_simplex(z, seg).vertices == (z,) + seg.vertices

    def test_faces_of_cone(self, seg):
        z = fv(2, 0, 0, 1)
        cs = cone_simplex(z, seg)
        assert cs.face(0) == seg
        assert cs.face(1).vertices == (z, seg.vertices[1])
        assert cs.face(2).vertices == (z, seg.vertices[0])

    def test_cone_of_opposite(self, seg):
        z = fv(0, 0, 1, 0)
        assert cone_simplex(z, seg.opposite()) == cone_simplex(z, seg).opposite()

    def test_homotopy_identity_single_simplices(self, seg, tri):
        z = fv(Fraction(1, 3), Fraction(-1, 2), 0, 1)
        assert homotopy_identity_check(z, seg)
        assert homotopy_identity_check(z, tri)

    def test_homotopy_identity_random_chains(self, rng, bump_tag):
        for _ in range(100):
            dim = int(rng.integers(1, 3))
            ch = random_rational_chain(rng, bump_tag, dim, int(rng.integers(1, 7)))
            z = random_rational_point(rng)
            assert homotopy_identity_check(z, ch)

    def test_apex_at_vertex_still_exact(self, seg):
        # the cone degenerates but the identity survives canonicalization
        assert homotopy_identity_check(seg.vertices[0], seg)

    def test_cone_linearity(self, tri, bump_tag):
        z = fv(0, 0, 0, 2)
        ch = Chain.of([(2, tri)])
        assert cone(z, ch) == cone(z, tri).scale(2)


class TestPoincareAction:
    def test_identity(self, tri):
        assert poincare_act(PoincareElement.identity(), tri) == tri

    def test_face_commutes(self, rng, tri):
        P = random_poincare(rng)
        moved = poincare_act(P, tri)
        for i in range(3):
            assert moved.face(i) == poincare_act(P, tri.face(i))

    def test_cone_equivariance(self, rng, seg):
        P = random_poincare(rng)
        z = fv(1, 0, 1, 0)
        lhs = cone_simplex(P.apply(z), poincare_act(P, seg))
        rhs = poincare_act(P, cone_simplex(z, seg))
        assert lhs == rhs

    def test_translation_preserves_tag(self, tri):
        P = PoincareElement.from_translation(FourVector.of(1.0, 0.0, 0.0, 0.0))
        assert poincare_act(P, tri).tag == tri.tag

    def test_boost_rotates_tag(self, tri):
        L = LorentzMatrix.boost(1, 0.7)
        moved = poincare_act(PoincareElement.from_lorentz(L), tri)
        assert moved.tag.rotation == L


class TestSupport:
    def test_point_support(self, bump_tag):
        p = AffineSimplex((fv(0, 0, 0, 0),), bump_tag)
        ball = support_ball(p)
        assert ball.hull == p.vertices and ball.eps == bump_tag.eps

    def test_segment_tube(self, seg):
        ball = support_ball(seg)
        assert ball.hull == seg.vertices

    def test_poincare_covariance(self, rng, seg):
        P = random_poincare(rng)
        direct = support_ball(poincare_act(P, seg))
        mapped = support_ball(seg).poincare_image(P)
        assert direct.hull == mapped.hull
        assert direct.eps == pytest.approx(mapped.eps, rel=1e-12)


class TestSimplexForm:
    def test_point_case_is_shifted_tag(self, bump_tag):
        s0 = FourVector.of(0.1, 0.0, -0.2, 0.0)
        form = simplex_form(AffineSimplex((s0,), bump_tag), 4)
        x = FourVector.of(0.15, 0.05, -0.2, 0.0)
        expected = float(bump_tag.values((x - s0).as_array()[None])[0])
        assert form.evaluate(x) == pytest.approx(expected, rel=1e-12)

    def test_degenerate_triangle_vanishes(self, rng, bump_tag):
        v = FourVector.of(0.0, 0.3, 0.0, 0.0)
        w = FourVector.of(0.5, 0.1, 0.2, 0.0)
        degen = AffineSimplex((v, w, w), bump_tag)
        form = simplex_form(degen, 4)
        for _ in range(100):
            x = FourVector.from_seq(rng.uniform(-1, 1, 4).tolist())
            mu, nu = int(rng.integers(0, 4)), int(rng.integers(0, 4))
            assert form.evaluate(x, mu, nu) == 0.0

    def test_affine_bivector_is_constant_formula(self, bump_tag):
        v0 = FourVector.of(0.0, 0.0, 0.0, 0.0)
        v1 = FourVector.of(1.0, 2.0, 0.0, 0.0)
        v2 = FourVector.of(0.0, 1.0, 3.0, 0.0)
        c = AffineSimplex((v0, v1, v2), bump_tag)
        jac = jacobian_tensor(c)
        d1 = v1.as_array() - v0.as_array()
        d2 = v2.as_array() - v0.as_array()
        for mu in range(4):
            for nu in range(4):
                assert jac[mu, nu] == pytest.approx(d1[mu] * d2[nu] - d1[nu] * d2[mu])
        assert np.max(np.abs(jac + jac.T)) == 0.0

    def test_segment_jacobian(self, seg):
        jac = jacobian_tensor(seg.to_float())
        assert np.allclose(jac, seg.vertex_array()[1] - seg.vertex_array()[0])

    def test_index_count_enforced(self, seg):
        form = simplex_form(seg, 4)
        with pytest.raises(SimplexError):
            form.evaluate(FourVector.zero())


class TestJson:
    def test_simplex_roundtrip(self, tri):
        data = tri.to_float().to_json()
        assert data["n"] == 2
        assert AffineSimplex.from_json(data) == tri.to_float()

    def test_chain_roundtrip(self, tri, seg):
        ch = Chain.of([(2, tri.to_float())])
        assert Chain.from_json(ch.to_json()) == ch
