"""Minkowski geometry: four-vectors, the restricted Lorentz and Poincare
groups, double cones and causal-disjointness predicates.

Metric signature is (+,-,-,-).  Four-vector components may be exact
(int / Fraction) or floats; Lorentz matrices are always floats.  Pure
translations preserve exact components, so combinatorial identities that
only involve translated simplices stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Optional, Sequence, Union

import numpy as np

Scalar = Union[int, float, Fraction]

#: Diagonal of the metric tensor g.
METRIC_DIAG = (1, -1, -1, -1)

#: Metric tensor as a float matrix.
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

#: Default absolute tolerance for scalar comparisons.
DEFAULT_TOL = 1e-12


class GeometryError(ValueError):
    """Invalid geometric data (non-Lorentz matrix, bad cone, ...)."""


@dataclass(frozen=True)
class FourVector:
    """A point/vector of Minkowski space, contravariant components x^0..x^3."""

    components: tuple

    def __post_init__(self):
        if len(self.components) != 4:
            raise GeometryError("FourVector needs exactly 4 components")
        for c in self.components:
            if isinstance(c, float) and not math.isfinite(c):
                raise GeometryError("FourVector components must be finite")

    @staticmethod
    def of(x0: Scalar, x1: Scalar, x2: Scalar, x3: Scalar) -> "FourVector":
        return FourVector((x0, x1, x2, x3))

    @staticmethod
    def from_seq(seq: Sequence[Scalar]) -> "FourVector":
        return FourVector(tuple(seq))

    @staticmethod
    def zero() -> "FourVector":
        return FourVector((0, 0, 0, 0))

    def __getitem__(self, i: int) -> Scalar:
        return self.components[i]

    def __add__(self, other: "FourVector") -> "FourVector":
        return FourVector(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "FourVector") -> "FourVector":
        return FourVector(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "FourVector":
        return FourVector(tuple(-a for a in self.components))

    def scale(self, s: Scalar) -> "FourVector":
        return FourVector(tuple(s * a for a in self.components))

    def lowered(self) -> "FourVector":
        """Covariant components x_mu = g_{mu nu} x^nu."""
        return FourVector(tuple(g * a for g, a in zip(METRIC_DIAG, self.components)))

    def euclid_norm(self) -> float:
        return math.sqrt(sum(float(a) * float(a) for a in self.components))

    def spatial_norm(self) -> float:
        return math.sqrt(sum(float(a) * float(a) for a in self.components[1:]))

    def is_exact(self) -> bool:
        return all(isinstance(a, (int, Fraction)) for a in self.components)

    def to_float(self) -> "FourVector":
        return FourVector(tuple(float(a) for a in self.components))

    def to_exact(self) -> "FourVector":
        """Exact (Fraction) components; floats convert by their binary value."""
        return FourVector(tuple(Fraction(a) for a in self.components))

    def as_array(self) -> np.ndarray:
        return np.array([float(a) for a in self.components], dtype=float)

    def to_json(self) -> list:
        return [float(a) for a in self.components]

    @staticmethod
    def from_json(data: Sequence[Real]) -> "FourVector":
        return FourVector.from_seq([float(a) for a in data])


def inner(x: FourVector, y: FourVector) -> Scalar:
    """Minkowski inner product x^mu g_{mu nu} y^nu."""
    xs, ys = x.components, y.components
    return xs[0] * ys[0] - xs[1] * ys[1] - xs[2] * ys[2] - xs[3] * ys[3]


def minkowski_sq(x: FourVector) -> Scalar:
    return inner(x, x)


def spacelike_separated(x: FourVector, y: FourVector) -> bool:
    """True iff (x - y)^2 < 0."""
    return inner(x - y, x - y) < 0


class LorentzMatrix:
    """An element of the restricted Lorentz group: L^T g L = g, det L > 0,
    L^0_0 >= 1.  Wraps a float 4x4 array, immutable by convention."""

    __slots__ = ("matrix", "_is_identity", "_op_norm", "_inv")

    def __init__(self, matrix, tol: float = 1e-9):
        m = np.asarray(matrix, dtype=float)
        if m.shape != (4, 4):
            raise GeometryError("Lorentz matrix must be 4x4")
        defect = m.T @ METRIC @ m - METRIC
        if np.max(np.abs(defect)) > tol:
            raise GeometryError("matrix does not preserve the metric")
        if np.linalg.det(m) <= 0:
            raise GeometryError("matrix not proper (det <= 0)")
        if m[0, 0] < 1.0 - tol:
            raise GeometryError("matrix not orthochronous (L^0_0 < 1)")
        m.setflags(write=False)
        self.matrix = m
        self._is_identity = bool(np.array_equal(m, np.eye(4)))
        self._op_norm = None
        self._inv = None

    @staticmethod
    def identity() -> "LorentzMatrix":
        return LorentzMatrix(np.eye(4))

    @staticmethod
    def boost(spatial_axis: int, rapidity: float) -> "LorentzMatrix":
        """Hyperbolic boost along a spatial axis (1..3)."""
        if spatial_axis not in (1, 2, 3):
            raise GeometryError("boost axis must be 1, 2 or 3")
        if not math.isfinite(rapidity):
            raise GeometryError("rapidity must be finite")
        m = np.eye(4)
        c, s = math.cosh(rapidity), math.sinh(rapidity)
        m[0, 0] = c
        m[spatial_axis, spatial_axis] = c
        m[0, spatial_axis] = s
        m[spatial_axis, 0] = s
        return LorentzMatrix(m)

    @staticmethod
    def rotation(axis_i: int, axis_j: int, angle: float) -> "LorentzMatrix":
        """Spatial rotation in the (axis_i, axis_j) plane, axes in 1..3."""
        if axis_i not in (1, 2, 3) or axis_j not in (1, 2, 3) or axis_i == axis_j:
            raise GeometryError("rotation needs two distinct spatial axes")
        m = np.eye(4)
        c, s = math.cos(angle), math.sin(angle)
        m[axis_i, axis_i] = c
        m[axis_j, axis_j] = c
        m[axis_i, axis_j] = -s
        m[axis_j, axis_i] = s
        return LorentzMatrix(m)

    @property
    def is_identity(self) -> bool:
        return self._is_identity

    def op_norm(self) -> float:
        """Spectral norm; bounds the Euclidean stretching of the matrix."""
        if self._op_norm is None:
            self._op_norm = 1.0 if self._is_identity else float(np.linalg.norm(self.matrix, 2))
        return self._op_norm

    def inverse(self) -> "LorentzMatrix":
        if self._inv is None:
            if self._is_identity:
                self._inv = self
            else:
                # g L^T g is the exact group inverse of L.
                self._inv = LorentzMatrix(METRIC @ self.matrix.T @ METRIC)
        return self._inv

    def compose(self, other: "LorentzMatrix") -> "LorentzMatrix":
        if self._is_identity:
            return other
        if other._is_identity:
            return self
        return LorentzMatrix(self.matrix @ other.matrix)

    def apply(self, x: FourVector) -> FourVector:
        if self._is_identity:
            return x
        return FourVector(tuple((self.matrix @ x.as_array()).tolist()))

    def __eq__(self, other) -> bool:
        return isinstance(other, LorentzMatrix) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def __repr__(self) -> str:
        return f"LorentzMatrix({self.matrix.tolist()!r})"

    def to_json(self) -> list:
        return [list(row) for row in self.matrix.tolist()]

    @staticmethod
    def from_json(data) -> "LorentzMatrix":
        return LorentzMatrix(np.array(data, dtype=float))


@dataclass(frozen=True)
class PoincareElement:
    """(x, L) acting as y -> x + L y; composition (x,L)(x',L') = (x+Lx', LL')."""

    translation: FourVector
    lorentz: LorentzMatrix

    @staticmethod
    def identity() -> "PoincareElement":
        return PoincareElement(FourVector.zero(), LorentzMatrix.identity())

    @staticmethod
    def from_translation(x: FourVector) -> "PoincareElement":
        return PoincareElement(x, LorentzMatrix.identity())

    @staticmethod
    def from_lorentz(L: LorentzMatrix) -> "PoincareElement":
        return PoincareElement(FourVector.zero(), L)

    def apply(self, y: FourVector) -> FourVector:
        return self.translation + self.lorentz.apply(y)

    def compose(self, other: "PoincareElement") -> "PoincareElement":
        return PoincareElement(
            self.translation + self.lorentz.apply(other.translation),
            self.lorentz.compose(other.lorentz),
        )

    def inverse(self) -> "PoincareElement":
        linv = self.lorentz.inverse()
        return PoincareElement(-linv.apply(self.translation), linv)

    @property
    def is_pure_translation(self) -> bool:
        return self.lorentz.is_identity

    def to_json(self) -> dict:
        return {"translation": self.translation.to_json(), "lorentz": self.lorentz.to_json()}

    @staticmethod
    def from_json(data: dict) -> "PoincareElement":
        return PoincareElement(
            FourVector.from_json(data["translation"]),
            LorentzMatrix.from_json(data["lorentz"]),
        )


def poincare_apply(P: PoincareElement, y: FourVector) -> FourVector:
    return P.apply(y)


def boost(spatial_axis: int, rapidity: float) -> LorentzMatrix:
    return LorentzMatrix.boost(spatial_axis, rapidity)


# ---------------------------------------------------------------------------
# Double cones
# ---------------------------------------------------------------------------

#: |x^0 - c^0| + |x_vec - c_vec| <= sqrt(2) |x - c|_E for any x, c.
MINKOWSKI_NORM_FACTOR = math.sqrt(2.0)


@dataclass(frozen=True)
class DoubleCone:
    """A double cone stored as radius + the Poincare frame mapping the
    standard time-axis-aligned cone { |x^0| + |x_vec| < r } onto it.
    The center is derived from the frame, which makes Poincare covariance
    of the family exact by construction."""

    radius: float
    frame: PoincareElement = field(default_factory=PoincareElement.identity)

    def __post_init__(self):
        if not (self.radius > 0):
            raise GeometryError("double cone radius must be positive")

    @staticmethod
    def standard(center: FourVector, radius: float) -> "DoubleCone":
        return DoubleCone(radius, PoincareElement.from_translation(center))

    @property
    def center(self) -> FourVector:
        return self.frame.apply(FourVector.zero())

    @property
    def is_axis_aligned(self) -> bool:
        return self.frame.lorentz.is_identity

    def minkowski_gauge(self, x: FourVector) -> float:
        """|u^0| + |u_vec| of x mapped to the standard frame."""
        u = self.frame.inverse().apply(x).to_float()
        return abs(u[0]) + u.spatial_norm()

    def contains(self, x: FourVector) -> bool:
        return self.minkowski_gauge(x) < self.radius

    def transformed(self, P: PoincareElement) -> "DoubleCone":
        return DoubleCone(self.radius, P.compose(self.frame))

    def boundary_sample(self, n_dir: int = 26, n_shell: int = 3) -> np.ndarray:
        """Deterministic interior points near the cone boundary, as global
        float coordinates, shape (N, 4).  Used by the sampling fallback."""
        dirs = []
        for i in (-1, 0, 1):
            for j in (-1, 0, 1):
                for k in (-1, 0, 1):
                    if i == j == k == 0:
                        continue
                    v = np.array([i, j, k], dtype=float)
                    dirs.append(v / np.linalg.norm(v))
        dirs = np.array(dirs[:n_dir])
        pts = [np.zeros(4)]
        for shell in range(1, n_shell + 1):
            rho = self.radius * shell / (n_shell + 0.5)
            for frac_t in (-0.9, -0.45, 0.0, 0.45, 0.9):
                t = frac_t * (self.radius - rho)
                for d in dirs:
                    pts.append(np.array([t, rho * d[0], rho * d[1], rho * d[2]]))
        pts = np.array(pts)
        # map standard-frame points to global coordinates
        L = self.frame.lorentz.matrix
        tr = self.frame.translation.as_array()
        return pts @ L.T + tr

    def enclosing_axis_cone(self) -> "DoubleCone":
        """Axis-aligned cone containing this one (conservative)."""
        if self.is_axis_aligned:
            return self
        r = MINKOWSKI_NORM_FACTOR * self.frame.lorentz.op_norm() * self.radius
        return DoubleCone.standard(self.center.to_float(), r * (1 + 1e-12))

    def to_json(self) -> dict:
        return {
            "center": self.center.to_json(),
            "radius": self.radius,
            "frame": self.frame.to_json(),
        }

    @staticmethod
    def from_json(data: dict) -> "DoubleCone":
        if "frame" in data:
            return DoubleCone(float(data["radius"]), PoincareElement.from_json(data["frame"]))
        return DoubleCone.standard(FourVector.from_json(data["center"]), float(data["radius"]))


def _axis_aligned_disjoint(c1: FourVector, r1: float, c2: FourVector, r2: float) -> bool:
    d = (c2 - c1).to_float()
    return d.spatial_norm() > abs(d[0]) + r1 + r2


def cones_causally_disjoint(o1: DoubleCone, o2: DoubleCone) -> Optional[bool]:
    """Three-valued causal disjointness: True / False are certified, None
    means undecided; callers asserting causality treat None as False."""
    if o1.is_axis_aligned and o2.is_axis_aligned:
        return _axis_aligned_disjoint(o1.center, o1.radius, o2.center, o2.radius)
    # Map both cones by the inverse frame of o1; re-test if both align.
    q = o1.frame.inverse()
    p1, p2 = o1.transformed(q), o2.transformed(q)
    if p1.frame.lorentz.op_norm() < 1 + 1e-9 and p2.frame.lorentz.op_norm() < 1 + 1e-9:
        a1 = DoubleCone.standard(p1.center.to_float(), p1.radius)
        a2 = DoubleCone.standard(p2.center.to_float(), p2.radius)
        return _axis_aligned_disjoint(a1.center, a1.radius, a2.center, a2.radius)
    # Conservative sufficient criterion on enclosing axis-aligned cones.
    e1, e2 = o1.enclosing_axis_cone(), o2.enclosing_axis_cone()
    if _axis_aligned_disjoint(e1.center, e1.radius, e2.center, e2.radius):
        return True
    # Certified negative: a concrete non-spacelike pair of member points.
    x = o1.boundary_sample()
    y = o2.boundary_sample()
    d0 = x[:, None, 0] - y[None, :, 0]
    dv = x[:, None, 1:] - y[None, :, 1:]
    sq = d0 * d0 - np.sum(dv * dv, axis=2)
    if np.any(sq >= 0):
        return False
    return None


def ball_in_cone(center: FourVector, eps: float, o: DoubleCone) -> bool:
    """True guarantees the Euclidean ball B_eps(center) lies inside o."""
    if eps < 0:
        raise GeometryError("eps must be nonnegative")
    stretch = o.frame.lorentz.inverse().op_norm()
    margin = o.radius - o.minkowski_gauge(center)
    return MINKOWSKI_NORM_FACTOR * stretch * eps < margin
