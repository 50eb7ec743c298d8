"""Affine smearing simplices and integer chains.

A smearing n-simplex is an ordered (n+1)-tuple of vertices plus a test
function tag.  Chains are kept in an oriented canonical form: degenerate
simplices (repeated vertex) are dropped and each simplex is stored with
sorted vertices and a permutation sign, so that the opposite of a simplex
is literally minus the simplex.  With that convention the boundary and
cone-construction identities hold exactly over rational coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from .geometry import FourVector, GeometryError, LorentzMatrix, PoincareElement

#: Effective support radius of a gaussian tag, in units of its width.
GAUSSIAN_CUTOFF = 6.0


class SimplexError(ValueError):
    """Invalid simplex/chain data or unsupported dimension."""


# ---------------------------------------------------------------------------
# Test function tags
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bump_radial_moment(power: int) -> float:
    """integral_0^1 exp(-1/(1-r^2)) r^power dr by high-order Gauss-Legendre."""
    x, w = leggauss(200)
    r = 0.5 * (x + 1.0)
    vals = np.exp(-1.0 / (1.0 - r * r)) * r ** power
    return float(0.5 * np.sum(w * vals))


# Surface area of the unit 3-sphere; the 4d radial volume element is S3 r^3 dr.
_S3 = 2.0 * math.pi ** 2


@dataclass(frozen=True)
class TestFunctionTag:
    """A smearing function: a normalized bump or gaussian of width eps,
    optionally rotated by a Lorentz matrix (translations never act on tags).

    The support of a bump is the closed ball of radius eps; the gaussian
    gets the effective radius GAUSSIAN_CUTOFF * eps.  The token makes tags
    with identical parameters distinguishable (distinct test functions)."""

    kind: str
    eps: float
    normalization: float = 1.0
    token: str = "f"
    rotation: Optional[LorentzMatrix] = None

    def __post_init__(self):
        if self.kind not in ("bump", "gaussian"):
            raise SimplexError(f"unknown tag kind {self.kind!r}")
        if not self.eps > 0:
            raise SimplexError("tag eps must be positive")

    @property
    def base_radius(self) -> float:
        return self.eps if self.kind == "bump" else GAUSSIAN_CUTOFF * self.eps

    @property
    def effective_radius(self) -> float:
        """Support radius bound after any Lorentz rotation of the tag."""
        stretch = 1.0 if self.rotation is None else self.rotation.op_norm()
        return self.base_radius * stretch

    def rotated(self, L: LorentzMatrix) -> "TestFunctionTag":
        if L.is_identity:
            return self
        rot = L if self.rotation is None else L.compose(self.rotation)
        return TestFunctionTag(self.kind, self.eps, self.normalization, self.token, rot)

    def key(self) -> tuple:
        rot = None if self.rotation is None else self.rotation.matrix.tobytes()
        return (self.kind, self.eps, self.normalization, self.token, rot)

    def values(self, points: np.ndarray) -> np.ndarray:
        """Evaluate the (rotated) test function at float points, shape (N, 4)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.rotation is not None:
            pts = pts @ self.rotation.inverse().matrix.T
        r2 = np.sum(pts * pts, axis=1) / (self.eps * self.eps)
        if self.kind == "bump":
            const = self.normalization / (self.eps ** 4 * _S3 * _bump_radial_moment(3))
            out = np.zeros(len(pts))
            inside = r2 < 1.0
            out[inside] = const * np.exp(-1.0 / (1.0 - r2[inside]))
            return out
        const = self.normalization / ((2.0 * math.pi) ** 2 * self.eps ** 4)
        return const * np.exp(-0.5 * r2)

    def to_json(self) -> dict:
        data = {
            "kind": self.kind,
            "eps": self.eps,
            "normalization": self.normalization,
            "token": self.token,
        }
        if self.rotation is not None:
            data["rotation"] = self.rotation.to_json()
        return data

    @staticmethod
    def from_json(data: dict) -> "TestFunctionTag":
        rot = LorentzMatrix.from_json(data["rotation"]) if "rotation" in data else None
        return TestFunctionTag(
            data["kind"],
            float(data["eps"]),
            float(data.get("normalization", 1.0)),
            str(data.get("token", "f")),
            rot,
        )


# ---------------------------------------------------------------------------
# Affine simplices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineSimplex:
    """An affine smearing simplex (s_0, ..., s_n; f), dimensions 0..3."""

    vertices: Tuple[FourVector, ...]
    tag: TestFunctionTag

    def __post_init__(self):
        if not 1 <= len(self.vertices) <= 4:
            raise SimplexError("affine simplices have dimension 0..3")

    @property
    def n(self) -> int:
        return len(self.vertices) - 1

    def map_point(self, t: Sequence[float]) -> FourVector:
        """phi(t) = s_0 + sum t_i (s_i - s_0) on the standard simplex."""
        if len(t) != self.n:
            raise SimplexError("parameter dimension mismatch")
        out = self.vertices[0]
        for ti, vi in zip(t, self.vertices[1:]):
            out = out + (vi - self.vertices[0]).scale(ti)
        return out

    def is_degenerate(self) -> bool:
        verts = self.vertices
        return any(verts[i] == verts[j] for i in range(len(verts)) for j in range(i + 1, len(verts)))

    def face(self, i: int) -> "AffineSimplex":
        """Drop vertex i; the 1-face of a segment is its 0-vertex and
        conversely."""
        if self.n < 1:
            raise SimplexError("0-simplices have no faces")
        if not 0 <= i <= self.n:
            raise SimplexError(f"face index {i} out of range for n={self.n}")
        verts = self.vertices[:i] + self.vertices[i + 1:]
        return AffineSimplex(verts, self.tag)

    def opposite(self) -> "AffineSimplex":
        """Orientation reversal: swap the two vertices of a segment, swap the
        last two vertices of a triangle."""
        if self.n == 1:
            return AffineSimplex((self.vertices[1], self.vertices[0]), self.tag)
        if self.n == 2:
            v = self.vertices
            return AffineSimplex((v[0], v[2], v[1]), self.tag)
        raise SimplexError("opposite is defined for segments and triangles")

    def to_float(self) -> "AffineSimplex":
        return AffineSimplex(tuple(v.to_float() for v in self.vertices), self.tag)

    def to_exact(self) -> "AffineSimplex":
        return AffineSimplex(tuple(v.to_exact() for v in self.vertices), self.tag)

    def vertex_array(self) -> np.ndarray:
        return np.array([v.as_array() for v in self.vertices])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [v.to_json() for v in self.vertices],
            "tag": self.tag.to_json(),
        }

    @staticmethod
    def from_json(data: dict) -> "AffineSimplex":
        return AffineSimplex(
            tuple(FourVector.from_json(v) for v in data["vertices"]),
            TestFunctionTag.from_json(data["tag"]),
        )


def point_simplex(x: FourVector, tag: TestFunctionTag) -> AffineSimplex:
    return AffineSimplex((x,), tag)


def segment(a: FourVector, b: FourVector, tag: TestFunctionTag) -> AffineSimplex:
    return AffineSimplex((a, b), tag)


def triangle(a: FourVector, b: FourVector, c: FourVector, tag: TestFunctionTag) -> AffineSimplex:
    return AffineSimplex((a, b, c), tag)


def _vertex_sort_key(v: FourVector) -> tuple:
    return tuple(v.components)


def oriented_key(s: AffineSimplex) -> Tuple[Optional[tuple], int]:
    """Canonical (key, sign) of a simplex under even/odd vertex permutations.

    Returns (None, 0) for degenerate simplices.  The key identifies the
    simplex with sorted vertices; sign is the permutation parity."""
    verts = list(s.vertices)
    keys = [_vertex_sort_key(v) for v in verts]
    if len(set(keys)) < len(keys):
        return None, 0
    sign = 1
    for i in range(len(keys)):  # selection sort, counting swaps
        m = min(range(i, len(keys)), key=lambda j: keys[j])
        if m != i:
            keys[i], keys[m] = keys[m], keys[i]
            sign = -sign
    return (s.tag.key(), tuple(keys)), sign


def _oriented_representative(s: AffineSimplex) -> Tuple[Optional[AffineSimplex], int]:
    key, sign = oriented_key(s)
    if key is None:
        return None, 0
    verts = sorted(s.vertices, key=_vertex_sort_key)
    return AffineSimplex(tuple(verts), s.tag), sign


# ---------------------------------------------------------------------------
# Chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    """Integer combination of equal-dimension simplices, in oriented
    canonical form (degenerates dropped, vertices sorted with sign, equal
    terms merged, zero coefficients removed, terms deterministically
    ordered)."""

    terms: Tuple[Tuple[int, AffineSimplex], ...]

    @staticmethod
    def of(terms: Iterable[Tuple[int, AffineSimplex]]) -> "Chain":
        acc: dict = {}
        reps: dict = {}
        dim = None
        for coef, s in terms:
            if dim is None:
                dim = s.n
            elif s.n != dim:
                raise SimplexError("chain terms must share one dimension")
            rep, sign = _oriented_representative(s)
            if rep is None:
                continue
            key, _ = oriented_key(rep)
            acc[key] = acc.get(key, 0) + coef * sign
            reps[key] = rep
        out = tuple(
            (acc[key], reps[key]) for key in sorted(acc, key=repr) if acc[key] != 0
        )
        return Chain(out)

    @staticmethod
    def zero() -> "Chain":
        return Chain(())

    @staticmethod
    def single(s: AffineSimplex, coef: int = 1) -> "Chain":
        return Chain.of([(coef, s)])

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def dimension(self) -> Optional[int]:
        return self.terms[0][1].n if self.terms else None

    def __add__(self, other: "Chain") -> "Chain":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return Chain.of(list(self.terms) + list(other.terms))

    def __neg__(self) -> "Chain":
        return Chain(tuple((-c, s) for c, s in self.terms))

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scale(self, k: int) -> "Chain":
        if k == 0:
            return Chain.zero()
        return Chain(tuple((k * c, s) for c, s in self.terms))

    def to_json(self) -> list:
        return [{"coef": c, "simplex": s.to_json()} for c, s in self.terms]

    @staticmethod
    def from_json(data: list) -> "Chain":
        return Chain.of([(int(t["coef"]), AffineSimplex.from_json(t["simplex"])) for t in data])


ChainLike = Union[AffineSimplex, Chain]


def _as_chain(x: ChainLike) -> Chain:
    return x if isinstance(x, Chain) else Chain.single(x)


def face(s: AffineSimplex, i: int) -> AffineSimplex:
    return s.face(i)


def opposite(s: AffineSimplex) -> AffineSimplex:
    return s.opposite()


def boundary(x: ChainLike) -> Chain:
    """Alternating-sign chain of faces, extended linearly to chains."""
    if isinstance(x, AffineSimplex):
        if x.n < 1:
            raise SimplexError("boundary needs dimension >= 1")
        return Chain.of([((-1) ** i, x.face(i)) for i in range(x.n + 1)])
    terms = []
    for coef, s in x.terms:
        for i in range(s.n + 1):
            terms.append((coef * (-1) ** i, s.face(i)))
    return Chain.of(terms)


def cone_simplex(z: FourVector, s: AffineSimplex) -> AffineSimplex:
    """The contracting-homotopy simplex with apex z: vertex tuple
    (z, s_0, ..., s_n).  Its 0-face is s and the other faces are cones of
    the faces of s."""
    if s.n >= 3:
        raise SimplexError("coning a 3-simplex would exceed dimension 3")
    return AffineSimplex((z,) + s.vertices, s.tag)


def cone(z: FourVector, x: ChainLike) -> Chain:
    if isinstance(x, AffineSimplex):
        return Chain.single(cone_simplex(z, x))
    return Chain.of([(c, cone_simplex(z, s)) for c, s in x.terms])


def homotopy_identity_check(z: FourVector, phi: ChainLike) -> bool:
    """Exact check of boundary(cone) + cone(boundary) = identity on phi."""
    chain = _as_chain(phi)
    if chain.is_zero():
        return True
    if chain.dimension < 1:
        raise SimplexError("homotopy identity needs dimension >= 1")
    lhs = boundary(cone(z, chain)) + cone(z, boundary(chain))
    return lhs == chain


def poincare_act(P: PoincareElement, x: ChainLike) -> ChainLike:
    """Vertices mapped by P; the tag picks up the Lorentz rotation only."""
    if isinstance(x, AffineSimplex):
        verts = tuple(P.apply(v) for v in x.vertices)
        return AffineSimplex(verts, x.tag.rotated(P.lorentz))
    return Chain.of([(c, poincare_act(P, s)) for c, s in x.terms])


# ---------------------------------------------------------------------------
# Support estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportBall:
    """Convex hull of the vertices inflated by eps: a sound bound for the
    support of the smeared form of the simplex."""

    hull: Tuple[FourVector, ...]
    eps: float

    def poincare_image(self, P: PoincareElement) -> "SupportBall":
        stretch = P.lorentz.op_norm()
        return SupportBall(tuple(P.apply(v) for v in self.hull), self.eps * stretch)


def support_ball(s: AffineSimplex) -> SupportBall:
    return SupportBall(s.vertices, s.tag.effective_radius)


# ---------------------------------------------------------------------------
# Quadrature rules on the standard simplex
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def unit_interval_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, 1]."""
    if order < 1:
        raise SimplexError("quadrature order must be >= 1")
    x, w = leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def triangle_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on the standard triangle via the Duffy transform,
    order points per axis."""
    u, wu = unit_interval_rule(order)
    v, wv = unit_interval_rule(order)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    t1 = (uu * (1.0 - vv)).ravel()
    t2 = (uu * vv).ravel()
    w = (np.outer(wu, wv) * uu).ravel()
    return np.column_stack([t1, t2]), w


def simplex_nodes(s: AffineSimplex, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes mapped onto the simplex (global float coords) and
    weights for the parameter-domain measure."""
    verts = s.vertex_array()
    if s.n == 0:
        return verts[:1], np.array([1.0])
    if s.n == 1:
        t, w = unit_interval_rule(order)
        pts = verts[0] + np.outer(t, verts[1] - verts[0])
        return pts, w
    if s.n == 2:
        t, w = triangle_rule(order)
        pts = verts[0] + np.outer(t[:, 0], verts[1] - verts[0]) + np.outer(t[:, 1], verts[2] - verts[0])
        return pts, w
    raise SimplexError("quadrature supports dimensions 0..2")


def jacobian_tensor(s: AffineSimplex) -> np.ndarray:
    """Constant Jacobian of an affine simplex: scalar 1 for points, the edge
    vector for segments, the antisymmetrized bivector for triangles."""
    verts = s.vertex_array()
    if s.n == 0:
        return np.array(1.0)
    if s.n == 1:
        return verts[1] - verts[0]
    if s.n == 2:
        d1 = verts[1] - verts[0]
        d2 = verts[2] - verts[0]
        return np.outer(d1, d2) - np.outer(d2, d1)
    raise SimplexError("jacobian supports dimensions 0..2")


@dataclass(frozen=True)
class SimplexForm:
    """The n-form of a smearing simplex: a map (x, multi-index) -> scalar
    computed by quadrature of f(x - chi(t)) against the constant Jacobian."""

    n: int
    support_radius: float
    _nodes: np.ndarray = field(repr=False)
    _weights: np.ndarray = field(repr=False)
    _jacobian: np.ndarray = field(repr=False)
    _tag: TestFunctionTag = field(repr=False)

    def evaluate(self, x: FourVector, *alphas: int) -> float:
        if len(alphas) != self.n:
            raise SimplexError(f"expected {self.n} indices")
        jac = float(self._jacobian[alphas]) if self.n else 1.0
        if jac == 0.0:
            return 0.0
        vals = self._tag.values(x.as_array()[None, :] - self._nodes)
        return float(np.sum(self._weights * vals)) * jac


def simplex_form(s: AffineSimplex, quad_order: int) -> SimplexForm:
    if s.n > 2:
        raise SimplexError("forms are built for dimensions 0..2")
    nodes, weights = simplex_nodes(s.to_float(), quad_order)
    hull = s.vertex_array()
    diam = max(
        float(np.linalg.norm(hull[i] - hull[j]))
        for i in range(len(hull))
        for j in range(len(hull))
    )
    return SimplexForm(
        n=s.n,
        support_radius=s.tag.effective_radius + diam,
        _nodes=nodes,
        _weights=weights,
        _jacobian=jacobian_tensor(s),
        _tag=s.tag,
    )
