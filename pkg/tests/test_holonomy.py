"""Unitary cochains, loop representations, connections, gauges, the
correspondences among them, and the mock lattice cochain."""

import numpy as np
import pytest

from causalloops.checks import (
    default_models,
    default_tags,
    dogleg_frames,
    mock_cochain_instance,
    random_loop,
    random_mock_triangle,
    random_point,
    random_segment,
    random_triangle,
)
from causalloops.emfield import QuadratureConfig, em_cochain
from causalloops.geometry import DoubleCone, FourVector, PoincareElement
from causalloops.holonomy import (
    Cochain,
    CochainScenario,
    HolonomyError,
    MockLatticeCochain,
    UnitaryValue,
    apply_gauge,
    cochain_from_rep,
    connection_from_rep,
    frame_change_gauge,
    mock_lattice_cochain,
    rep_from_cochain,
    rep_from_connection,
    verify_cochain,
)
from causalloops.loopgroup import Letter, LoopWord, Path, PathFrameSystem, path_boundary
from causalloops.simplex import AffineSimplex, TestFunctionTag, triangle

QUAD = QuadratureConfig(order=8)
TAG = TestFunctionTag("gaussian", 0.15)
MODEL = default_models()[2]  # plane wave


def em_phase_cochain():
    return em_cochain(MODEL, TAG, QUAD)


def trivial_cochain(dim=1):
    return Cochain(lambda c: UnitaryValue.identity(dim), value_dim=dim)


class TestUnitaryValue:
    def test_phase_product_and_star(self):
        u = UnitaryValue.phase(0.3)
        v = UnitaryValue.phase(-1.1)
        assert (u @ v).distance(UnitaryValue.phase(-0.8)) < 1e-15
        assert u.star().distance(UnitaryValue.phase(-0.3)) < 1e-15

    def test_matrix_unitarity_enforced(self):
        with pytest.raises(HolonomyError):
            UnitaryValue.from_matrix(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_mixed_product_scales(self):
        u = UnitaryValue.phase(np.pi)
        m = UnitaryValue.from_matrix(np.eye(2))
        out = u @ m
        assert out.distance(UnitaryValue.from_matrix(-np.eye(2))) < 1e-12

    def test_phase_commutators_vanish(self):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        u = UnitaryValue.from_matrix(x)
        assert UnitaryValue.phase(0.4).commutator_norm(u) == 0.0

    def test_matrix_commutator(self):
        x = UnitaryValue.from_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
        z = UnitaryValue.from_matrix(np.diag([1.0, -1.0]).astype(complex))
        assert x.commutator_norm(z) == pytest.approx(2.0)

    def test_dimension_mismatch(self):
        a = UnitaryValue.from_matrix(np.eye(2))
        b = UnitaryValue.from_matrix(np.eye(4))
        with pytest.raises(HolonomyError):
            a @ b


class TestRepFromCochain:
    def test_trivial_cochain_gives_trivial_rep(self, rng):
        lam = rep_from_cochain(trivial_cochain())
        loop = random_loop(rng, TAG, 4)
        assert lam(LoopWord((loop,))).distance(UnitaryValue.identity()) == 0.0

    def test_path_boundary_recovers_cochain(self, rng):
        # the two extra cone simplices are degenerate, so evaluating the
        # induced representation on the path-boundary returns w(c)
        w = em_phase_cochain()
        lam = rep_from_cochain(w)
        for _ in range(10):
            c = random_triangle(rng, TAG)
            assert lam(path_boundary(c)).distance(w(c)) < 1e-15

    def test_loop_times_inverse_is_identity(self, rng):
        w = em_phase_cochain()
        lam = rep_from_cochain(w)
        loop = random_loop(rng, TAG, 3)
        lw = LoopWord((loop, loop.reversed()))
        assert lam(lw).distance(UnitaryValue.identity()) < 1e-12

    def test_reduction_invariance(self, rng):
        w = em_phase_cochain()
        lam = rep_from_cochain(w)
        loop = random_loop(rng, TAG, 3)
        padded = Path(loop.letters + (loop.letters[0], loop.letters[0].inverse()))
        assert lam(LoopWord((padded,))).distance(lam(LoopWord((loop,)))) < 1e-12

    def test_non_loop_rejected(self):
        lam = rep_from_cochain(trivial_cochain())
        open_path = Path((Letter(random_segment(np.random.default_rng(0), TAG)),))
        with pytest.raises(HolonomyError):
            lam(open_path)


class TestRoundTrips:
    def test_cochain_roundtrip_em(self, rng):
        w = em_phase_cochain()
        back = cochain_from_rep(rep_from_cochain(w))
        for _ in range(20):
            c = random_triangle(rng, TAG)
            assert back(c).distance(w(c)) < 1e-12

    def test_rep_roundtrip_em(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        back = rep_from_cochain(cochain_from_rep(lam))
        for _ in range(20):
            p = LoopWord((random_loop(rng, TAG, int(rng.integers(1, 6))),))
            assert back(p).distance(lam(p)) < 1e-12

    def test_cochain_roundtrip_mock(self, rng):
        mock = mock_cochain_instance()
        w = mock.as_cochain()
        back = cochain_from_rep(rep_from_cochain(w))
        tag = TestFunctionTag("bump", 0.05)
        for _ in range(5):
            c = random_mock_triangle(rng, tag, mock)
            assert back(c).distance(w(c)) < 1e-12


class TestConnections:
    def test_trivial_rep_gives_trivial_connection(self, rng):
        lam = rep_from_cochain(trivial_cochain())
        u = connection_from_rep(lam, PathFrameSystem.euclidean())
        a = AffineSimplex((random_point(rng),), TAG)
        b = Letter(random_segment(rng, TAG))
        assert u.on_letter(a, b).distance(UnitaryValue.identity()) == 0.0

    def test_loop_restoration(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        for frames in (PathFrameSystem.euclidean(), dogleg_frames(0.4)):
            u = connection_from_rep(lam, frames)
            loop = random_loop(rng, TAG, 4)
            assert u.on_path(loop.start, loop).distance(lam(LoopWord((loop,)))) < 1e-12

    def test_adjoint_axiom(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        u = connection_from_rep(lam, PathFrameSystem.euclidean())
        a = AffineSimplex((random_point(rng),), TAG)
        b = Letter(random_segment(rng, TAG))
        assert u.on_letter(a, b.inverse()).distance(u.on_letter(a, b).star()) < 1e-15

    def test_trivial_loop_axiom(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        u = connection_from_rep(lam, PathFrameSystem.euclidean())
        a = AffineSimplex((random_point(rng),), TAG)
        e = Letter(AffineSimplex((a.vertices[0], a.vertices[0]), TAG))
        assert u.on_letter(a, e).distance(UnitaryValue.identity()) < 1e-15

    def test_rep_from_connection_roundtrip(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        u = connection_from_rep(lam, dogleg_frames(0.6))
        lam2 = rep_from_connection(u)
        for _ in range(10):
            p = LoopWord((random_loop(rng, TAG, int(rng.integers(1, 5))),))
            assert lam2(p).distance(lam(p)) < 1e-12

    def test_component_mismatch_rejected(self, rng):
        lam = rep_from_cochain(trivial_cochain())
        u = connection_from_rep(lam, PathFrameSystem.euclidean())
        a = AffineSimplex((random_point(rng),), TAG)
        other = TestFunctionTag("gaussian", 0.15, token="other")
        b = Letter(random_segment(rng, other))
        with pytest.raises(HolonomyError):
            u.on_letter(a, b)


class TestGauges:
    def test_trivial_gauge_is_identity_map(self, rng):
        from causalloops.holonomy import GaugeFamily

        lam = rep_from_cochain(em_phase_cochain())
        u = connection_from_rep(lam, PathFrameSystem.euclidean())
        gauged = apply_gauge(u, GaugeFamily.trivial())
        a = AffineSimplex((random_point(rng),), TAG)
        b = Letter(random_segment(rng, TAG))
        assert gauged.on_letter(a, b).distance(u.on_letter(a, b)) == 0.0

    def test_loop_conjugation_identity(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        u = connection_from_rep(lam, PathFrameSystem.euclidean())
        g = frame_change_gauge(lam, PathFrameSystem.euclidean(), dogleg_frames(0.5))
        gauged = apply_gauge(u, g)
        loop = random_loop(rng, TAG, 3)
        a = loop.start
        lhs = gauged.on_path(a, loop)
        rhs = g(a, a) @ u.on_path(a, loop) @ g(a, a).star()
        assert lhs.distance(rhs) < 1e-12

    def test_frame_change_identity_frames(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        frames = dogleg_frames(0.3)
        g = frame_change_gauge(lam, frames, frames)
        a = AffineSimplex((random_point(rng),), TAG)
        b = AffineSimplex((random_point(rng),), TAG)
        assert g(a, b).distance(UnitaryValue.identity()) < 1e-15

    def test_frame_change_transport(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        fa, fb = dogleg_frames(0.25), dogleg_frames(0.75)
        g = frame_change_gauge(lam, fa, fb)
        ua = connection_from_rep(lam, fa)
        ub = connection_from_rep(lam, fb)
        gauged = apply_gauge(ua, g)
        for _ in range(10):
            a = AffineSimplex((random_point(rng),), TAG)
            b = Letter(random_segment(rng, TAG))
            assert gauged.on_letter(a, b).distance(ub.on_letter(a, b)) < 1e-12

    def test_pole_value_is_identity(self, rng):
        lam = rep_from_cochain(em_phase_cochain())
        g = frame_change_gauge(lam, dogleg_frames(0.2), dogleg_frames(0.9))
        a = AffineSimplex((random_point(rng),), TAG)
        assert g(a, a).distance(UnitaryValue.identity()) < 1e-15


class TestVerifyCochain:
    def _scenario(self, rng, n=5):
        triangles = tuple(random_triangle(rng, TAG) for _ in range(n))
        pairs = tuple((random_triangle(rng, TAG), random_triangle(rng, TAG))
                      for _ in range(n))
        return CochainScenario(triangles, pairs, (), tolerance=1e-9)

    def test_trivial_cochain_clean(self, rng):
        report = verify_cochain(trivial_cochain(), self._scenario(rng))
        assert all(r["max_violation"] == 0.0 for r in report)
        assert all(r["pass"] for r in report)

    def test_em_cochain_clean(self, rng):
        report = verify_cochain(em_phase_cochain(), self._scenario(rng))
        assert all(r["pass"] for r in report)

    def test_broken_cochain_flagged(self, rng):
        from causalloops.simplex import oriented_key

        w = em_phase_cochain()

        def broken(c):
            _, sign = oriented_key(c)
            return w(c if sign >= 0 else c.opposite())

        bad = Cochain(broken, value_dim=1)
        report = verify_cochain(bad, self._scenario(rng))
        adjoint = next(r for r in report if r["check"] == "adjoint")
        assert adjoint["max_violation"] > 0.0
        assert not adjoint["pass"]


class TestMockLattice:
    def test_degenerate_gives_identity(self, rng):
        mock = mock_cochain_instance()
        w = mock.as_cochain()
        tag = TestFunctionTag("bump", 0.05)
        c = random_mock_triangle(rng, tag, mock)
        degen = AffineSimplex((c.vertices[0], c.vertices[1], c.vertices[1]), tag)
        assert w(degen).distance(UnitaryValue.identity(mock.dim)) == 0.0

    def test_adjoint_exact(self, rng):
        mock = mock_cochain_instance()
        w = mock.as_cochain()
        tag = TestFunctionTag("bump", 0.05)
        c = random_mock_triangle(rng, tag, mock)
        assert w(c.opposite()).distance(w(c).star()) == 0.0

    def test_disjoint_cells_commute_exactly(self, rng):
        mock = mock_cochain_instance()
        w = mock.as_cochain()
        tag = TestFunctionTag("bump", 0.05)
        c1 = random_mock_triangle(rng, tag, mock, cell=0)
        c2 = random_mock_triangle(rng, tag, mock, cell=5)
        assert mock.cells_disjoint(c1, c2)
        assert w(c1).commutator_norm(w(c2)) == 0.0

    def test_shared_cell_crossed_weights_do_not_commute(self):
        mock = mock_cochain_instance()
        w = mock.as_cochain()
        tag = TestFunctionTag("bump", 0.05)
        x1 = mock.lo + 2.5 * mock.cell_size

        def pt(t, x, y, z):
            return FourVector.of(t, x, y, z)

        c_time = AffineSimplex((pt(0.0, x1 - 0.25, 0.0, 0.0),
                                pt(0.0, x1 + 0.25, 0.0, 0.0),
                                pt(1.5, x1, 0.0, 0.0)), tag)
        c_space = AffineSimplex((pt(0.0, x1, -0.25, 0.0),
                                 pt(0.0, x1, 1.25, 0.0),
                                 pt(0.0, x1, 0.0, 1.5)), tag)
        assert not mock.cells_disjoint(c_time, c_space)
        assert w(c_time).commutator_norm(w(c_space)) > 0.1

    def test_lattice_translation_covariance_exact(self, rng):
        mock = mock_cochain_instance()
        w = mock.as_cochain()
        tag = TestFunctionTag("bump", 0.05)
        c = random_mock_triangle(rng, tag, mock, cell=1)
        P = PoincareElement.from_translation(FourVector.of(0.0, 2.0, 0.0, 0.0))
        from causalloops.simplex import poincare_act

        U = w.intertwiner(P)
        assert (U @ w(c) @ U.star()).distance(w(poincare_act(P, c))) == 0.0

    def test_non_lattice_translation_rejected(self):
        mock = mock_cochain_instance()
        P = PoincareElement.from_translation(FourVector.of(0.0, 0.37, 0.0, 0.0))
        with pytest.raises(HolonomyError):
            mock.translation_unitary(P)

    def test_region_too_large(self):
        region = DoubleCone.standard(FourVector.zero(), 50.0)
        with pytest.raises(HolonomyError):
            mock_lattice_cochain(region, 1.0)

    def test_qudit_dimension_three(self):
        region = DoubleCone.standard(FourVector.zero(), 2.0)
        mock = MockLatticeCochain(region, 1.0, qudit_dim=3)
        assert mock.dim == 3 ** 4
        tag = TestFunctionTag("bump", 0.05)
        rng = np.random.default_rng(5)
        c = random_mock_triangle(rng, tag, mock, cell=1)
        w = mock.as_cochain()
        assert w(c.opposite()).distance(w(c).star()) == 0.0

    def test_support_outside_region_rejected(self):
        mock = mock_cochain_instance()
        tag = TestFunctionTag("bump", 0.05)
        far = triangle(FourVector.of(0, 40, 0, 0), FourVector.of(0, 41, 0, 0),
                       FourVector.of(1, 40, 0, 0), tag)
        with pytest.raises(HolonomyError):
            mock.evaluate(far)
