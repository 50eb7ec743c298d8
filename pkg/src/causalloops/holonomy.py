"""Unitary-valued 2-cochains, loop representations, connection systems,
gauge transformations and the constructive correspondences among them,
plus a finite-dimensional noncommutative mock cochain on a cell lattice.

Values live in a single algebra unifying U(1) phases and small unitary
matrices, so each correspondence is written once.  A connection is built
from a representation by conjugating each segment with frame legs into the
pole; the resulting word is an honest loop (frame leg out of the pole,
the segment, frame leg back into the pole), which reproduces the loop
restoration, adjoint and frame-change identities exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from .geometry import DoubleCone, FourVector, PoincareElement
from .loopgroup import Letter, LoopWord, Path, PathFrameSystem, Word
from .simplex import AffineSimplex, cone_simplex, oriented_key, support_ball

#: Hard cap on the total tensor dimension of the mock lattice cochain.
MAX_TENSOR_DIM = 2 ** 10

#: Operator-norm tolerance for unitarity checks.
UNITARY_TOL = 1e-12


class HolonomyError(ValueError):
    """Invalid unitary data or correspondence input."""


# ---------------------------------------------------------------------------
# Unitary values
# ---------------------------------------------------------------------------

class UnitaryValue:
    """Either a U(1) phase e^{i theta} or a d x d unitary matrix, with the
    product, adjoint, operator-norm distance and commutator norm."""

    __slots__ = ("theta", "matrix")

    def __init__(self, theta: Optional[float] = None, matrix: Optional[np.ndarray] = None):
        if (theta is None) == (matrix is None):
            raise HolonomyError("provide exactly one of theta / matrix")
        self.theta = theta
        if matrix is None:
            self.matrix = None
        else:
            m = np.asarray(matrix, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise HolonomyError("matrix value must be square")
            d = m.shape[0]
            if np.linalg.norm(m @ m.conj().T - np.eye(d), 2) > UNITARY_TOL * max(1, d):
                raise HolonomyError("matrix is not unitary")
            self.matrix = m

    @staticmethod
    def phase(theta: float) -> "UnitaryValue":
        return UnitaryValue(theta=float(theta))

    @staticmethod
    def from_matrix(m: np.ndarray) -> "UnitaryValue":
        return UnitaryValue(matrix=m)

    @staticmethod
    def identity(dim: int = 1) -> "UnitaryValue":
        if dim == 1:
            return UnitaryValue(theta=0.0)
        return UnitaryValue(matrix=np.eye(dim, dtype=complex))

    @property
    def is_phase(self) -> bool:
        return self.theta is not None

    @property
    def dim(self) -> int:
        return 1 if self.is_phase else self.matrix.shape[0]

    def scalar(self) -> complex:
        if not self.is_phase:
            raise HolonomyError("not a phase value")
        return complex(math.cos(self.theta), math.sin(self.theta))

    def as_matrix(self, dim: Optional[int] = None) -> np.ndarray:
        if self.is_phase:
            d = dim or 1
            return self.scalar() * np.eye(d, dtype=complex)
        if dim is not None and dim != self.dim:
            raise HolonomyError("dimension mismatch")
        return self.matrix

    def __matmul__(self, other: "UnitaryValue") -> "UnitaryValue":
        if self.is_phase and other.is_phase:
            return UnitaryValue(theta=self.theta + other.theta)
        if self.is_phase:
            return UnitaryValue(matrix=self.scalar() * other.matrix)
        if other.is_phase:
            return UnitaryValue(matrix=other.scalar() * self.matrix)
        if self.dim != other.dim:
            raise HolonomyError("dimension mismatch in product")
        return UnitaryValue(matrix=self.matrix @ other.matrix)

    def star(self) -> "UnitaryValue":
        if self.is_phase:
            return UnitaryValue(theta=-self.theta)
        return UnitaryValue(matrix=self.matrix.conj().T)

    def distance(self, other: "UnitaryValue") -> float:
        """Operator-norm distance; phases embed as scalars."""
        if self.is_phase and other.is_phase:
            return abs(self.scalar() - other.scalar())
        d = max(self.dim, other.dim)
        return float(np.linalg.norm(self.as_matrix(d) - other.as_matrix(d), 2))

    def commutator_norm(self, other: "UnitaryValue") -> float:
        if self.is_phase or other.is_phase:
            return 0.0
        if self.dim != other.dim:
            raise HolonomyError("dimension mismatch in commutator")
        return float(np.linalg.norm(self.matrix @ other.matrix - other.matrix @ self.matrix, 2))

    def is_identity(self, tol: float = UNITARY_TOL) -> bool:
        return self.distance(UnitaryValue.identity(self.dim)) <= tol

    def __repr__(self) -> str:
        if self.is_phase:
            return f"UnitaryValue(phase={self.theta!r})"
        return f"UnitaryValue(matrix dim={self.dim})"


# ---------------------------------------------------------------------------
# Cochains, representations, connections, gauges
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cochain:
    """A unitary-valued function of 2-simplices with declared covariance.

    Optional hooks for verification: ``transformed(P)`` returns the cochain
    of the transformed data (classical model pushforward), ``intertwiner(P)``
    returns a unitary U with U w(c) U* = w(Pc) for P in the declared group.
    """

    evaluator: Callable[[AffineSimplex], UnitaryValue]
    value_dim: int = 1
    covariance_group: str = "full"
    transformed: Optional[Callable[[PoincareElement], "Cochain"]] = None
    intertwiner: Optional[Callable[[PoincareElement], UnitaryValue]] = None

    def __call__(self, c: AffineSimplex) -> UnitaryValue:
        if c.n != 2:
            raise HolonomyError("cochains evaluate on 2-simplices")
        return self.evaluator(c)


@dataclass(frozen=True)
class LoopRepresentation:
    """A multiplicative unitary evaluation on certified loop words."""

    evaluator: Callable[[LoopWord], UnitaryValue]
    value_dim: int = 1

    def __call__(self, p: Union[LoopWord, Path]) -> UnitaryValue:
        if isinstance(p, Path):
            if not p.is_loop():
                raise HolonomyError("path is not a loop")
            p = LoopWord((p,))
        return self.evaluator(p)


@dataclass(frozen=True)
class Connection:
    """A pole-indexed family of unitary assignments to segments of the
    pole's component, extended to paths as the ordered product."""

    evaluator: Callable[[AffineSimplex, Letter], UnitaryValue]
    value_dim: int = 1

    def on_letter(self, a: AffineSimplex, l: Letter) -> UnitaryValue:
        if a.n != 0:
            raise HolonomyError("pole must be a 0-simplex")
        if l.tag != a.tag:
            raise HolonomyError("segment lives in a different component")
        return self.evaluator(a, l)

    def on_segment(self, a: AffineSimplex, b: AffineSimplex) -> UnitaryValue:
        return self.on_letter(a, Letter(b))

    def on_path(self, a: AffineSimplex, w: Union[Word, Path]) -> UnitaryValue:
        out = UnitaryValue.identity(1)
        for l in w.letters:
            out = self.on_letter(a, l) @ out
        return out


@dataclass(frozen=True)
class GaugeFamily:
    """A pole-indexed family of unitaries on the pole's component."""

    evaluator: Callable[[AffineSimplex, AffineSimplex], UnitaryValue]
    value_dim: int = 1

    def __call__(self, a: AffineSimplex, a_prime: AffineSimplex) -> UnitaryValue:
        if a.n != 0 or a_prime.n != 0:
            raise HolonomyError("gauge families evaluate on 0-simplices")
        if a.tag != a_prime.tag:
            raise HolonomyError("points live in different components")
        return self.evaluator(a, a_prime)

    @staticmethod
    def trivial(dim: int = 1) -> "GaugeFamily":
        return GaugeFamily(lambda a, ap: UnitaryValue.identity(dim), dim)


def _pole_point(a: AffineSimplex) -> FourVector:
    if a.n != 0:
        raise HolonomyError("pole must be a 0-simplex")
    return a.vertices[0]


def _coned(a: AffineSimplex, l: Letter) -> AffineSimplex:
    return cone_simplex(_pole_point(a), l.traversed_simplex())


def rep_from_cochain(w: Cochain) -> LoopRepresentation:
    """Evaluate a loop by coning each letter to the loop's base point and
    multiplying the cochain values; reduction-invariant because the cochain
    of an opposite simplex is the adjoint and degenerate cones drop out."""

    def evaluate(lw: LoopWord) -> UnitaryValue:
        out = UnitaryValue.identity(1)
        for p in lw.factors:
            if not p.letters:
                continue
            a = p.start
            for l in p.letters:
                out = w(_coned(a, l)) @ out
        return out

    return LoopRepresentation(evaluate, w.value_dim)


def cochain_from_rep(lam: LoopRepresentation) -> Cochain:
    """The cochain evaluating the representation on the path-boundary."""
    from .loopgroup import path_boundary

    def evaluate(c: AffineSimplex) -> UnitaryValue:
        return lam(path_boundary(c))

    return Cochain(evaluate, lam.value_dim, covariance_group="inherited")


def connection_from_rep(lam: LoopRepresentation, frames: PathFrameSystem) -> Connection:
    """Conjugate each segment with frame legs into the pole.  The loop runs
    pole -> start(b) along the reversed frame leg, across b, then back into
    the pole, so every value is the representation of a certified loop."""

    def evaluate(a: AffineSimplex, l: Letter) -> UnitaryValue:
        start = AffineSimplex((l.start,), l.tag)
        end = AffineSimplex((l.end,), l.tag)
        out_leg = frames.path(a, start).reversed()
        in_leg = frames.path(a, end)
        loop = Path(out_leg.letters + (l,) + in_leg.letters)
        return lam(LoopWord((loop,)))

    return Connection(evaluate, lam.value_dim)


def rep_from_connection(u: Connection) -> LoopRepresentation:
    """Multiplicative extension over the stored loop factorization."""

    def evaluate(lw: LoopWord) -> UnitaryValue:
        out = UnitaryValue.identity(1)
        for p in lw.factors:
            if not p.letters:
                continue
            out = u.on_path(p.start, p) @ out
        return out

    return LoopRepresentation(evaluate, u.value_dim)


def apply_gauge(u: Connection, g: GaugeFamily) -> Connection:
    """u^g_a(b) = g_a(end b) u_a(b) g_a(start b)*."""
    if g.value_dim not in (1, u.value_dim):
        raise HolonomyError("gauge and connection dimensions do not match")

    def evaluate(a: AffineSimplex, l: Letter) -> UnitaryValue:
        start = AffineSimplex((l.start,), l.tag)
        end = AffineSimplex((l.end,), l.tag)
        return g(a, end) @ u.on_letter(a, l) @ g(a, start).star()

    return Connection(evaluate, u.value_dim)


def frame_change_gauge(lam: LoopRepresentation, frames_from: PathFrameSystem,
                       frames_to: PathFrameSystem) -> GaugeFamily:
    """The gauge carrying the connection of frames_from onto the one of
    frames_to: g_a(a') is the representation of the loop that leaves the
    pole along the reversed from-leg and returns along the to-leg."""

    def evaluate(a: AffineSimplex, a_prime: AffineSimplex) -> UnitaryValue:
        out_leg = frames_from.path(a, a_prime).reversed()
        in_leg = frames_to.path(a, a_prime)
        loop = Path(out_leg.letters + in_leg.letters)
        return lam(LoopWord((loop,)))

    return GaugeFamily(evaluate, lam.value_dim)


# ---------------------------------------------------------------------------
# Cochain verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CochainScenario:
    """Sampled data for checking the cochain axioms: plain 2-simplices,
    pairs with causally disjoint supports, and group elements in the
    cochain's declared covariance group."""

    simplices: Tuple[AffineSimplex, ...]
    disjoint_pairs: Tuple[Tuple[AffineSimplex, AffineSimplex], ...] = ()
    group_elements: Tuple[PoincareElement, ...] = ()
    tolerance: float = UNITARY_TOL


def _degenerate_of(c: AffineSimplex) -> AffineSimplex:
    v = c.vertices
    return AffineSimplex((v[0], v[1], v[1]), c.tag)


def verify_cochain(w: Cochain, scenario: CochainScenario) -> List[dict]:
    """Report the maximal violations of the adjoint/degeneracy, causal
    commutator and covariance properties on the scenario samples."""
    tol = scenario.tolerance
    report = []

    adj = 0.0
    deg = 0.0
    for c in scenario.simplices:
        adj = max(adj, w(c.opposite()).distance(w(c).star()))
        d = _degenerate_of(c)
        deg = max(deg, w(d).distance(UnitaryValue.identity(w(d).dim)))
    report.append({"check": "adjoint", "samples": len(scenario.simplices),
                   "max_violation": adj, "tolerance": tol, "pass": adj <= tol})
    report.append({"check": "degeneracy", "samples": len(scenario.simplices),
                   "max_violation": deg, "tolerance": tol, "pass": deg <= tol})

    if scenario.disjoint_pairs:
        comm = max(w(c1).commutator_norm(w(c2)) for c1, c2 in scenario.disjoint_pairs)
        report.append({"check": "causality", "samples": len(scenario.disjoint_pairs),
                       "max_violation": comm, "tolerance": tol, "pass": comm <= tol})

    if scenario.group_elements:
        from .simplex import poincare_act

        cov = 0.0
        n = 0
        for P in scenario.group_elements:
            for c in scenario.simplices:
                pc = poincare_act(P, c)
                if w.intertwiner is not None:
                    U = w.intertwiner(P)
                    cov = max(cov, (U @ w(c) @ U.star()).distance(w(pc)))
                elif w.transformed is not None:
                    cov = max(cov, w.transformed(P)(pc).distance(w(c)))
                else:
                    cov = max(cov, w(pc).distance(w(c)))
                n += 1
        report.append({"check": "covariance", "samples": n,
                       "max_violation": cov, "tolerance": tol, "pass": cov <= tol})
    return report


# ---------------------------------------------------------------------------
# Mock lattice cochain
# ---------------------------------------------------------------------------

def _shift_clock(d: int) -> Tuple[np.ndarray, np.ndarray]:
    """Hermitian shift/clock quadratures; the Pauli X and Z for d = 2."""
    shift = np.zeros((d, d), dtype=complex)
    for j in range(d):
        shift[(j + 1) % d, j] = 1.0
    clock = np.diag(np.exp(2j * math.pi * np.arange(d) / d))
    if d == 2:
        return shift.real.astype(complex), clock.real.astype(complex)
    return shift + shift.conj().T, clock + clock.conj().T


def _clip_strip_area(poly: List[Tuple[float, float]], coeffs: Tuple[float, float, float],
                     lo: float, hi: float) -> float:
    """Area of a convex polygon clipped to lo <= c0 + c1 t1 + c2 t2 <= hi,
    by Sutherland-Hodgman against the two half planes."""

    def clip(points, a, b, c):
        # keep a*t1 + b*t2 + c >= 0
        out = []
        m = len(points)
        for i in range(m):
            p, q = points[i], points[(i + 1) % m]
            fp = a * p[0] + b * p[1] + c
            fq = a * q[0] + b * q[1] + c
            if fp >= 0:
                out.append(p)
            if (fp > 0 > fq) or (fp < 0 < fq):
                t = fp / (fp - fq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        return out

    c0, c1, c2 = coeffs
    pts = clip(poly, c1, c2, c0 - lo)
    if len(pts) < 3:
        return 0.0
    pts = clip(pts, -c1, -c2, hi - c0)
    if len(pts) < 3:
        return 0.0
    area = 0.0
    for i in range(len(pts)):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % len(pts)]
        area += x1 * y2 - x2 * y1
    return 0.5 * abs(area)


#: Reference 2-tensors the area bivector is contracted against.
_REF_TENSOR_X = ((0, 1), 1.0)   # dx^0 ^ dx^1
_REF_TENSOR_Z = ((2, 3), 1.0)   # dx^2 ^ dx^3


class MockLatticeCochain:
    """Matrix-valued cochain on a slab lattice: the bounding box of the
    region is partitioned into slabs of width cell_size along one spatial
    axis, each slab owning one qudit tensor factor.  The value of a
    2-simplex is the tensor product over slabs of exp(i(a1 X + a2 Z)),
    where a1, a2 contract the slab-clipped signed-area bivector against
    two fixed reference 2-tensors.  Orientation reversal flips the signs
    exactly, cell-disjoint simplices commute exactly, and slab-lattice
    translations act by tensor-factor permutation."""

    def __init__(self, region: DoubleCone, cell_size: float, qudit_dim: int = 2,
                 axis: int = 1):
        if cell_size <= 0:
            raise HolonomyError("cell_size must be positive")
        if qudit_dim < 2:
            raise HolonomyError("qudit_dim must be >= 2")
        if axis not in (1, 2, 3):
            raise HolonomyError("partition axis must be spatial")
        box = region.enclosing_axis_cone()
        center = box.center.to_float()
        self.axis = axis
        self.lo = float(center[axis]) - box.radius
        self.cell_size = float(cell_size)
        self.n_cells = max(1, math.ceil(2.0 * box.radius / cell_size))
        self.qudit_dim = qudit_dim
        self.dim = qudit_dim ** self.n_cells
        if self.dim > MAX_TENSOR_DIM:
            raise HolonomyError(
                f"region needs {self.n_cells} cells: tensor dimension "
                f"{self.dim} exceeds the cap {MAX_TENSOR_DIM}")
        self.region = region
        X, Z = _shift_clock(qudit_dim)
        self._X, self._Z = X, Z
        self._eye = np.eye(qudit_dim, dtype=complex)

    # -- geometry ----------------------------------------------------------

    def _alphas(self, c: AffineSimplex) -> Tuple[np.ndarray, np.ndarray, int, Tuple[int, ...]]:
        """Per-cell bivector weights of the canonically oriented simplex,
        the orientation sign of c relative to it, and the touched-cell
        index set (support based, hence sound for disjointness)."""
        key, sign = oriented_key(c)
        if key is None:
            return np.zeros(self.n_cells), np.zeros(self.n_cells), 0, ()
        rep = AffineSimplex(tuple(sorted(c.vertices, key=lambda v: tuple(v.components))), c.tag)
        verts = rep.vertex_array()
        d1, d2 = verts[1] - verts[0], verts[2] - verts[0]
        biv = np.outer(d1, d2) - np.outer(d2, d1)
        (i1, j1), s1 = _REF_TENSOR_X
        (i2, j2), s2 = _REF_TENSOR_Z
        w1 = s1 * biv[i1, j1]
        w2 = s2 * biv[i2, j2]
        # affine coordinate along the partition axis
        coeffs = (float(verts[0][self.axis]),
                  float(d1[self.axis]), float(d2[self.axis]))
        poly = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
        a1 = np.zeros(self.n_cells)
        a2 = np.zeros(self.n_cells)
        for k in range(self.n_cells):
            lo = self.lo + k * self.cell_size
            frac = _clip_strip_area(poly, coeffs, lo, lo + self.cell_size)
            a1[k] = w1 * frac
            a2[k] = w2 * frac
        ball = support_ball(c)
        smin = min(float(v[self.axis]) for v in ball.hull) - ball.eps
        smax = max(float(v[self.axis]) for v in ball.hull) + ball.eps
        k0 = max(0, math.floor((smin - self.lo) / self.cell_size))
        k1 = min(self.n_cells - 1, math.ceil((smax - self.lo) / self.cell_size - 1.0))
        if smin < self.lo - 1e-12 or smax > self.lo + self.n_cells * self.cell_size + 1e-12:
            raise HolonomyError("simplex support leaves the lattice region")
        return a1, a2, sign, tuple(range(k0, k1 + 1))

    def touched_cells(self, c: AffineSimplex) -> Tuple[int, ...]:
        return self._alphas(c)[3]

    def cells_disjoint(self, c1: AffineSimplex, c2: AffineSimplex) -> bool:
        return not set(self.touched_cells(c1)) & set(self.touched_cells(c2))

    # -- values --------------------------------------------------------------

    def _cell_unitary(self, a1: float, a2: float) -> np.ndarray:
        if a1 == 0.0 and a2 == 0.0:
            return self._eye
        h = a1 * self._X + a2 * self._Z
        vals, vecs = np.linalg.eigh(h)
        return (vecs * np.exp(1j * vals)) @ vecs.conj().T

    def evaluate(self, c: AffineSimplex) -> UnitaryValue:
        a1, a2, sign, _ = self._alphas(c)
        if sign == 0:
            return UnitaryValue(matrix=np.eye(self.dim, dtype=complex))
        out = np.eye(1, dtype=complex)
        for k in range(self.n_cells):
            out = np.kron(out, self._cell_unitary(a1[k], a2[k]))
        if sign < 0:
            # bit-exact adjoint: orientation reversal flips the weights
            out = out.conj().T
        return UnitaryValue(matrix=np.ascontiguousarray(out))

    # -- covariance ----------------------------------------------------------

    def translation_unitary(self, P: PoincareElement) -> UnitaryValue:
        """The tensor-factor permutation implementing a lattice translation
        (pure translation whose partition-axis component is an integer
        multiple of the cell size).  The shift acts cyclically; it agrees
        with the honest shift on simplices whose cells stay in range."""
        if not P.is_pure_translation:
            raise HolonomyError("mock covariance group contains translations only")
        shift = float(P.translation[self.axis]) / self.cell_size
        m = round(shift)
        if abs(shift - m) > 1e-9:
            raise HolonomyError("translation is not a lattice vector")
        d, n = self.qudit_dim, self.n_cells
        perm = np.zeros(self.dim, dtype=int)
        for idx in range(self.dim):
            digits = []
            rest = idx
            for _ in range(n):
                digits.append(rest % d)
                rest //= d
            digits.reverse()  # digits[k] = state of cell k
            shifted = [0] * n
            for k in range(n):
                shifted[(k + m) % n] = digits[k]
            out = 0
            for dd in shifted:
                out = out * d + dd
            perm[out] = idx
        U = np.zeros((self.dim, self.dim), dtype=complex)
        U[np.arange(self.dim), perm] = 1.0
        return UnitaryValue(matrix=U)

    def as_cochain(self) -> Cochain:
        return Cochain(
            evaluator=self.evaluate,
            value_dim=self.dim,
            covariance_group=f"lattice translations (axis {self.axis}, step {self.cell_size})",
            intertwiner=self.translation_unitary,
        )


def mock_lattice_cochain(region: DoubleCone, cell_size: float, qudit_dim: int = 2,
                         axis: int = 1) -> Cochain:
    return MockLatticeCochain(region, cell_size, qudit_dim, axis).as_cochain()
