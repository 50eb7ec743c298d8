"""Words over segments, free reduction, paths/loops, localization and
path-frame systems."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalloops.checks import _letter_pool, random_poincare
from causalloops.geometry import DoubleCone, FourVector, PoincareElement
from causalloops.loopgroup import (
    Letter,
    LoopWord,
    Path,
    PathFrameSystem,
    Word,
    WordError,
    brute_force_reduce,
    compose,
    euclidean_frame,
    is_local,
    path_boundary,
    poincare_act_loop,
    poincare_act_word,
    support,
)
from causalloops.simplex import AffineSimplex, TestFunctionTag, poincare_act, triangle


def fv(*comps):
    return FourVector.of(*[Fraction(c) for c in comps])


TAG = TestFunctionTag("bump", 0.25)
POOL = _letter_pool(TAG)
B1, B2, B3, B4, B5, EA = POOL


def word_of(*letters):
    return Word(tuple(letters))


class TestReduce:
    def test_inverse_pair_cancels(self):
        assert word_of(B1, B1.inverse()).reduce().is_identity()
        assert word_of(B1.inverse(), B1).reduce().is_identity()

    def test_degenerate_letter_is_identity(self):
        assert word_of(EA).reduce().is_identity()

    def test_mixed_example(self):
        # traversal order e_a, b1, bbar, b, b2 is the word b2 b bbar b1 e_a
        w = word_of(EA, B1, B2.inverse(), B2, B3)
        red = w.reduce()
        assert [l.sid for l in red.letters] == [B1.sid, B3.sid]

    def test_opposite_segment_cancels_inverted_flag(self):
        # (b, inverted) and (opposite(b), plain) are the same group element
        flipped = Letter(B1.simplex.opposite())
        assert word_of(B1, flipped).reduce().is_identity()

    def test_idempotent(self):
        w = word_of(B1, B2, B2.inverse(), B3)
        assert w.reduce().reduce().letterwise_eq(w.reduce())

    @given(st.lists(st.tuples(st.integers(0, len(POOL) - 1), st.booleans()), max_size=10))
    @settings(max_examples=300, deadline=None)
    def test_matches_brute_force_oracle(self, spec):
        letters = tuple(POOL[i].inverse() if inv else POOL[i] for i, inv in spec)
        w = Word(letters)
        assert w.reduce().letterwise_eq(brute_force_reduce(w))

    @given(st.lists(st.tuples(st.integers(0, len(POOL) - 1), st.booleans()), max_size=10))
    @settings(max_examples=300, deadline=None)
    def test_word_times_inverse_is_identity(self, spec):
        letters = tuple(POOL[i].inverse() if inv else POOL[i] for i, inv in spec)
        w = Word(letters)
        assert (w * w.inverse()).reduce().is_identity()
        assert (w.inverse() * w).reduce().is_identity()

    def test_non_segment_letter_rejected(self):
        tri = triangle(fv(0, 0, 0, 0), fv(1, 0, 0, 0), fv(0, 1, 0, 0), TAG)
        with pytest.raises(WordError):
            Letter(tri)


class TestSupport:
    def test_identity_word_empty(self):
        assert support(Word.identity()) == ()

    def test_cancelled_letters_drop_out(self):
        w = word_of(B1, B2, B2.inverse())
        balls = support(w)
        assert len(balls) == 1
        assert balls[0].hull == B1.simplex.vertices

    def test_poincare_covariance(self, rng):
        P = random_poincare(rng)
        w = word_of(B1, B2)
        direct = support(poincare_act_word(P, w))
        mapped = tuple(b.poincare_image(P) for b in support(w))
        assert [b.hull for b in direct] == [b.hull for b in mapped]


class TestPaths:
    def test_path_validation(self):
        Path((B1, B2))  # endpoints chain up
        with pytest.raises(WordError):
            Path((B2, B1))

    def test_compose_endpoints(self):
        p = Path((B1,))
        q = Path((B2,))
        pq = compose(q, p)
        assert pq.start == p.start and pq.end == q.end

    def test_compose_mismatch_raises(self):
        with pytest.raises(WordError):
            compose(Path((B1,)), Path((B2,)))

    def test_compose_tag_mismatch_raises(self):
        other = TestFunctionTag("bump", 0.25, token="other")
        b_other = Letter(AffineSimplex(
            (B1.simplex.vertices[1], fv(5, 5, 5, 5)), other))
        with pytest.raises(WordError):
            compose(Path((b_other,)), Path((B1,)))

    def test_reverse_then_compose_cancels(self):
        p = Path((B1, B2))
        assert compose(p.reversed(), p).reduce().is_identity()

    def test_trivial_loop_composes_away(self):
        p = Path((B1,))
        e = Path((Letter(AffineSimplex((p.end.vertices[0],) * 2, TAG)),))
        assert compose(e, p).reduce().letterwise_eq(p)

    def test_reduction_preserves_endpoints(self):
        w = Path((B1, B2, B2.inverse(), B2))
        red = w.reduce()
        assert red.start == w.start and red.end == w.end


class TestPathBoundary:
    def test_letters_in_traversal_order(self):
        c = triangle(fv(0, 0, 0, 0), fv(1, 0, 0, 0), fv(0, 1, 0, 0), TAG)
        lw = path_boundary(c)
        letters = lw.factors[0].letters
        assert letters[0].simplex == c.face(2)
        assert letters[1].simplex == c.face(0)
        assert letters[2].simplex == c.face(1) and letters[2].inverted
        assert lw.factors[0].is_loop()
        assert lw.factors[0].start.vertices[0] == c.vertices[0]

    def test_boundary_of_opposite_is_opposite_word(self):
        c = triangle(fv(0, 0, 0, 0), fv(2, 1, 0, 0), fv(0, 1, 1, 0), TAG)
        lhs = path_boundary(c.opposite()).word()
        rhs = path_boundary(c).word().inverse()
        assert lhs.letterwise_eq(rhs)

    def test_degenerate_triangle_reduces(self):
        c = triangle(fv(0, 0, 0, 0), fv(0, 0, 0, 0), fv(1, 0, 0, 0), TAG)
        letters = path_boundary(c).word().letters
        # the c0=c1 edge is a degenerate letter; the two remaining letters
        # traverse the same segment out and back, so the loop is trivial
        assert letters[0].sid == 0
        assert letters[1].cancels(letters[2])
        assert path_boundary(c).word().reduce().is_identity()


class TestLocalization:
    def test_identity_local_everywhere(self):
        o = DoubleCone.standard(FourVector.zero(), 1.0)
        assert is_local(Word.identity(), o) is True

    def test_tiny_loop_at_center(self):
        o = DoubleCone.standard(FourVector.zero(), 10.0)
        tag = TestFunctionTag("bump", 0.01)
        a = FourVector.of(0.0, 0.0, 0.0, 0.0)
        b = FourVector.of(0.0, 0.5, 0.0, 0.0)
        loop = Path((Letter(AffineSimplex((a, b), tag)),
                     Letter(AffineSimplex((b, a), tag))))
        assert is_local(loop, o) is True

    def test_straddling_loop_rejected(self):
        o = DoubleCone.standard(FourVector.zero(), 1.0)
        far = FourVector.of(0.0, 5.0, 0.0, 0.0)
        w = word_of(Letter(AffineSimplex((FourVector.zero(), far), TAG)))
        assert is_local(w, o) is False

    def test_marginal_containment_undecided(self):
        o = DoubleCone.standard(FourVector.zero(), 1.0)
        inside = FourVector.of(0.0, 0.9, 0.0, 0.0)
        w = word_of(Letter(AffineSimplex((FourVector.zero(), inside), TAG)))
        # vertices inside but the inflated ball is not certified
        assert is_local(w, o) is None

    def test_covariance_of_locality(self, rng):
        o = DoubleCone.standard(FourVector.zero(), 5.0)
        tag = TestFunctionTag("bump", 0.05)
        a = FourVector.of(0.0, 0.2, 0.0, 0.0)
        b = FourVector.of(0.1, -0.3, 0.2, 0.0)
        w = word_of(Letter(AffineSimplex((a, b), tag)))
        for _ in range(10):
            P = random_poincare(rng)
            if is_local(w, o) is True:
                assert is_local(poincare_act_word(P, w), o.transformed(P)) is True


class TestFrames:
    def test_euclidean_trivial_loop(self):
        a = AffineSimplex((fv(1, 0, 0, 0),), TAG)
        p = euclidean_frame(a, a)
        assert p.reduce().is_identity()

    def test_euclidean_endpoints(self):
        a = AffineSimplex((fv(0, 0, 0, 0),), TAG)
        b = AffineSimplex((fv(1, 2, 0, 0),), TAG)
        p = euclidean_frame(a, b)
        assert p.start == a and p.end == b

    def test_euclidean_covariance(self, rng):
        P = random_poincare(rng)
        a = AffineSimplex((fv(0, 0, 0, 0),), TAG)
        b = AffineSimplex((fv(1, 2, 0, 0),), TAG)
        lhs = poincare_act_word(P, euclidean_frame(a, b))
        rhs = euclidean_frame(poincare_act(P, a), poincare_act(P, b))
        assert lhs.letterwise_eq(rhs)

    def test_frame_system_paths_into_pole(self):
        frames = PathFrameSystem.euclidean()
        pole = AffineSimplex((fv(0, 0, 0, 0),), TAG)
        target = AffineSimplex((fv(0, 3, 0, 0),), TAG)
        p = frames.path(pole, target)
        assert p.start == target and p.end == pole

    def test_component_mismatch_rejected(self):
        frames = PathFrameSystem.euclidean()
        pole = AffineSimplex((fv(0, 0, 0, 0),), TAG)
        other = AffineSimplex((fv(0, 3, 0, 0),), TestFunctionTag("bump", 0.25, token="q"))
        with pytest.raises(WordError):
            frames.path(pole, other)


class TestPoincareWordAction:
    def test_identity(self):
        w = word_of(B1, B2)
        assert poincare_act_word(PoincareElement.identity(), w).letterwise_eq(w)

    def test_reduce_commutes(self, rng):
        P = random_poincare(rng)
        w = word_of(B1, B2, B2.inverse(), B3)
        lhs = poincare_act_word(P, w).reduce()
        rhs = poincare_act_word(P, w.reduce())
        assert lhs.letterwise_eq(rhs)

    def test_loops_map_to_loops(self, rng):
        P = random_poincare(rng)
        c = triangle(fv(0, 0, 0, 0), fv(1, 0, 0, 0), fv(0, 1, 0, 0), TAG)
        lw = path_boundary(c)
        moved = poincare_act_loop(P, lw)
        assert moved.factors[0].is_loop()
        assert moved.factors[0].start.vertices[0] == P.apply(c.vertices[0])

    def test_loopword_inverse(self):
        c = triangle(fv(0, 0, 0, 0), fv(1, 0, 0, 0), fv(0, 1, 0, 0), TAG)
        lw = path_boundary(c)
        prod = lw.word() * lw.inverse().word()
        assert prod.reduce().is_identity()
