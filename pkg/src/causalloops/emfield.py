"""Classical closed 2-form field models with analytic smearing, surface and
line integrals, pole-indexed potential reconstruction, gauge families, the
electromagnetic phase cochain and its potential connection.

All field tensors carry two lower indices and are contracted against
contravariant displacement vectors, so no metric factors appear in the
integrals.  Surface and line integrals canonically orient their domains
(sorted vertices plus a sign), which makes orientation reversal an exact
float negation and the induced cochain adjoint exact.

The pole-indexed potential is

    A^z_mu(y) = int_0^1 t (y-z)^alpha F_{alpha mu}(z + t(y-z)) dt,

the Poincare-lemma primitive with the field's first index contracted; its
curl is the smeared field and the Stokes and cone identities hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .geometry import FourVector, METRIC_DIAG, PoincareElement
from .holonomy import Cochain, Connection, GaugeFamily, UnitaryValue
from .loopgroup import Letter, Path
from .simplex import (
    AffineSimplex,
    Chain,
    TestFunctionTag,
    cone_simplex,
    oriented_key,
    triangle_rule,
    unit_interval_rule,
)

_METRIC = np.array(METRIC_DIAG, dtype=float)


class FieldModelError(ValueError):
    """Invalid field model data (asymmetry, closedness, bad parameters)."""


class SmearingError(ValueError):
    """No analytic convolution for this model/tag combination."""


def _check_antisymmetric(m: np.ndarray, what: str) -> None:
    if np.max(np.abs(m + np.swapaxes(m, 0, 1))) > 1e-12:
        raise FieldModelError(f"{what} must be antisymmetric in its first two indices")


@dataclass(frozen=True, eq=False)
class FieldModel:
    """A closed antisymmetric 2-form field on Minkowski space.

    kinds: "constant" (C_{mu nu}), "linear" (F(y) = D_{mu nu, rho} y^rho with
    vanishing cyclic sum), "plane_wave" (the exact form of the covector
    potential eps_mu cos(k.y + phase)), "superposition" (a sum of models).
    """

    kind: str
    c_tensor: Optional[np.ndarray] = None
    d_tensor: Optional[np.ndarray] = None
    amplitude: Optional[np.ndarray] = None
    wave_vector: Optional[np.ndarray] = None
    phase: float = 0.0
    parts: Tuple["FieldModel", ...] = ()

    @staticmethod
    def constant(c: np.ndarray) -> "FieldModel":
        c = np.asarray(c, dtype=float)
        if c.shape != (4, 4):
            raise FieldModelError("constant tensor must be 4x4")
        _check_antisymmetric(c, "constant field")
        return FieldModel("constant", c_tensor=c)

    @staticmethod
    def linear(d: np.ndarray) -> "FieldModel":
        d = np.asarray(d, dtype=float)
        if d.shape != (4, 4, 4):
            raise FieldModelError("linear slope must be 4x4x4")
        _check_antisymmetric(d, "linear field slope")
        cyc = d + np.transpose(d, (2, 0, 1)) + np.transpose(d, (1, 2, 0))
        if np.max(np.abs(cyc)) > 1e-12:
            raise FieldModelError("linear slope violates closedness (cyclic sum != 0)")
        return FieldModel("linear", d_tensor=d)

    @staticmethod
    def linear_from_quadratic_potential(q: np.ndarray) -> "FieldModel":
        """The exact field of the covector potential A_nu = q_{nu,rho lam}
        y^rho y^lam / 2 (q symmetric in its last two indices): closed by
        construction."""
        q = np.asarray(q, dtype=float)
        q = 0.5 * (q + np.transpose(q, (0, 2, 1)))
        d = np.transpose(q, (1, 0, 2)) - np.transpose(q, (0, 1, 2))
        # d_{mu nu, lam} = q_{nu, mu lam} - q_{mu, nu lam}
        return FieldModel.linear(d)

    @staticmethod
    def plane_wave(amplitude: Sequence[float], wave_vector: Sequence[float],
                   phase: float = 0.0) -> "FieldModel":
        eps = np.asarray(amplitude, dtype=float)
        k = np.asarray(wave_vector, dtype=float)
        if eps.shape != (4,) or k.shape != (4,):
            raise FieldModelError("plane wave needs a covector amplitude and a wave 4-vector")
        return FieldModel("plane_wave", amplitude=eps, wave_vector=k, phase=float(phase))

    @staticmethod
    def superposition(*parts: "FieldModel") -> "FieldModel":
        flat: List[FieldModel] = []
        for p in parts:
            if p.kind == "superposition":
                flat.extend(p.parts)
            else:
                flat.append(p)
        return FieldModel("superposition", parts=tuple(flat))

    # -- evaluation ----------------------------------------------------------

    def field_at(self, points: np.ndarray) -> np.ndarray:
        """F_{mu nu} at float points, shape (N, 4) -> (N, 4, 4)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind == "constant":
            return np.broadcast_to(self.c_tensor, (len(pts), 4, 4)).copy()
        if self.kind == "linear":
            return np.einsum("mnr,pr->pmn", self.d_tensor, pts)
        if self.kind == "plane_wave":
            k_low = self.wave_vector * _METRIC
            s = np.outer(self.amplitude, k_low) - np.outer(k_low, self.amplitude)
            arg = pts @ k_low + self.phase
            return np.sin(arg)[:, None, None] * s
        if self.kind == "superposition":
            out = np.zeros((len(pts), 4, 4))
            for p in self.parts:
                out += p.field_at(pts)
            return out
        raise FieldModelError(f"unknown model kind {self.kind!r}")

    # -- Poincare pushforward -------------------------------------------------

    def pushforward(self, P: PoincareElement) -> "FieldModel":
        """The transformed field F' with F'(P y) = L^{-T} F(y) L^{-1}."""
        li = P.lorentz.inverse().matrix
        a = P.translation.as_array()
        if self.kind == "constant":
            return FieldModel.constant(li.T @ self.c_tensor @ li)
        if self.kind == "linear":
            d = np.einsum("am,bn,abl,lk->mnk", li, li, self.d_tensor, li)
            c = -np.einsum("mnk,k->mn", d, a)
            if np.max(np.abs(c)) == 0.0:
                return FieldModel.linear(d)
            return FieldModel.superposition(FieldModel.linear(d), FieldModel.constant(c))
        if self.kind == "plane_wave":
            eps = li.T @ self.amplitude
            k = P.lorentz.matrix @ self.wave_vector
            phase = self.phase - float(np.dot(k * _METRIC, a))
            return FieldModel.plane_wave(eps, k, phase)
        if self.kind == "superposition":
            return FieldModel.superposition(*(p.pushforward(P) for p in self.parts))
        raise FieldModelError(f"unknown model kind {self.kind!r}")

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "c": self.c_tensor.tolist()}
        if self.kind == "linear":
            return {"kind": "linear", "d": self.d_tensor.tolist()}
        if self.kind == "plane_wave":
            return {"kind": "plane_wave", "amplitude": self.amplitude.tolist(),
                    "wave_vector": self.wave_vector.tolist(), "phase": self.phase}
        return {"kind": "superposition", "parts": [p.to_json() for p in self.parts]}

    @staticmethod
    def from_json(data: dict) -> "FieldModel":
        kind = data["kind"]
        if kind == "constant":
            return FieldModel.constant(np.array(data["c"], dtype=float))
        if kind == "linear":
            return FieldModel.linear(np.array(data["d"], dtype=float))
        if kind == "plane_wave":
            return FieldModel.plane_wave(data["amplitude"], data["wave_vector"],
                                         float(data.get("phase", 0.0)))
        if kind == "superposition":
            return FieldModel.superposition(*(FieldModel.from_json(p) for p in data["parts"]))
        raise FieldModelError(f"unknown model kind {kind!r}")


# ---------------------------------------------------------------------------
# Analytic smearing
# ---------------------------------------------------------------------------

def _smeared_batch(model: FieldModel, tag: TestFunctionTag, points: np.ndarray) -> np.ndarray:
    """The convolved field (f * F)(y) = int F(y + u) f_rot(u) du at float
    points (N, 4), per analytic model/tag rule."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    norm = tag.normalization
    if model.kind == "constant":
        return norm * model.field_at(pts)
    if model.kind == "linear":
        # even test functions have vanishing first moment, rotated or not
        return norm * model.field_at(pts)
    if model.kind == "plane_wave":
        if tag.kind != "gaussian":
            raise SmearingError("plane waves smear analytically against gaussian tags only")
        k = model.wave_vector
        if tag.rotation is not None:
            k = tag.rotation.inverse().matrix @ k
        damp = math.exp(-0.5 * tag.eps ** 2 * float(np.dot(k, k)))
        return norm * damp * model.field_at(pts)
    if model.kind == "superposition":
        out = np.zeros((len(pts), 4, 4))
        for p in model.parts:
            out += _smeared_batch(p, tag, pts)
        return out
    raise FieldModelError(f"unknown model kind {model.kind!r}")


def smeared_field(model: FieldModel, tag: TestFunctionTag, y: FourVector) -> np.ndarray:
    """The smeared field matrix at one point."""
    return _smeared_batch(model, tag, y.as_array()[None, :])[0]


@dataclass(frozen=True)
class SmearedField:
    """A field model bundled with its smearing tag."""

    model: FieldModel
    tag: TestFunctionTag

    def __call__(self, y: FourVector) -> np.ndarray:
        return smeared_field(self.model, self.tag, y)

    def batch(self, points: np.ndarray) -> np.ndarray:
        return _smeared_batch(self.model, self.tag, points)


# ---------------------------------------------------------------------------
# Quadrature configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureConfig:
    """Gauss-Legendre points per axis for the surface/line/homotopy
    integrals; a separate (coarser) per-axis order for the 4d gauge
    smearing; the step for finite-difference derivative checks."""

    order: int = 16
    gauge_order: int = 8
    fd_step: float = 1e-4

    def __post_init__(self):
        if self.order < 2:
            raise FieldModelError("quadrature order must be >= 2")
        if self.gauge_order < 2:
            raise FieldModelError("gauge smearing order must be >= 2")

    def to_json(self) -> dict:
        return {"order": self.order, "gauge_order": self.gauge_order, "fd_step": self.fd_step}

    @staticmethod
    def from_json(data: dict) -> "QuadratureConfig":
        return QuadratureConfig(int(data.get("order", 16)), int(data.get("gauge_order", 8)),
                                float(data.get("fd_step", 1e-4)))


# ---------------------------------------------------------------------------
# Surface integral
# ---------------------------------------------------------------------------

def surface_integral(model: FieldModel, c: Union[AffineSimplex, Chain],
                     cfg: QuadratureConfig) -> float:
    """(1/2) int_T F~_{mu nu}(sigma(t)) sigma^{mu nu} d2t over the triangle,
    extended linearly to chains.  The domain is canonically oriented, so
    opposite orientation negates the value exactly."""
    if isinstance(c, Chain):
        return float(sum(coef * surface_integral(model, s, cfg) for coef, s in c.terms))
    if c.n != 2:
        raise FieldModelError("surface integrals need 2-simplices")
    _, sign = oriented_key(c)
    if sign == 0:
        return 0.0
    rep = AffineSimplex(tuple(sorted(c.vertices, key=lambda v: tuple(v.components))), c.tag)
    verts = rep.vertex_array()
    d1, d2 = verts[1] - verts[0], verts[2] - verts[0]
    biv = np.outer(d1, d2) - np.outer(d2, d1)
    t, w = triangle_rule(cfg.order)
    pts = verts[0] + np.outer(t[:, 0], d1) + np.outer(t[:, 1], d2)
    f = _smeared_batch(model, c.tag, pts)
    return sign * 0.5 * float(np.dot(w, np.einsum("qmn,mn->q", f, biv)))


# ---------------------------------------------------------------------------
# Potential and line integrals
# ---------------------------------------------------------------------------

def _potential_batch(model: FieldModel, tag: TestFunctionTag, z: np.ndarray,
                     points: np.ndarray, cfg: QuadratureConfig) -> np.ndarray:
    """A^z_mu at float points (N, 4) -> (N, 4), covariant components."""
    t, w = unit_interval_rule(cfg.order)
    disp = points - z                               # (N, 4)
    rays = z + t[None, :, None] * disp[:, None, :]  # (N, Q, 4)
    f = _smeared_batch(model, tag, rays.reshape(-1, 4)).reshape(len(points), len(t), 4, 4)
    integrand = np.einsum("na,nqam->nqm", disp, f)
    return np.einsum("q,nqm->nm", w * t, integrand)


def potential(model: FieldModel, tag: TestFunctionTag, z: FourVector, y: FourVector,
              cfg: QuadratureConfig) -> np.ndarray:
    """The pole-indexed primitive A^z_mu(y), covariant components (4,)."""
    return _potential_batch(model, tag, z.as_array(), y.as_array()[None, :], cfg)[0]


Curve = Union[AffineSimplex, Path, Sequence]


def _as_segments(curve: Curve) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Normalize a curve to an ordered list of float segment endpoint pairs."""
    if isinstance(curve, AffineSimplex):
        if curve.n != 1:
            raise FieldModelError("curve segments must be 1-simplices")
        v = curve.vertex_array()
        return [(v[0], v[1])]
    if isinstance(curve, Path):
        out = []
        for l in curve.letters:
            out.append((l.start.as_array(), l.end.as_array()))
        return out
    segs: List[Tuple[np.ndarray, np.ndarray]] = []
    for item in curve:
        if isinstance(item, AffineSimplex):
            v = item.vertex_array()
            segs.append((v[0], v[1]))
        else:
            a, b = item
            a = a.as_array() if isinstance(a, FourVector) else np.asarray(a, dtype=float)
            b = b.as_array() if isinstance(b, FourVector) else np.asarray(b, dtype=float)
            segs.append((a, b))
    if not segs:
        raise FieldModelError("empty curve")
    return segs


def _segment_line_integral(model: FieldModel, tag: TestFunctionTag, z: np.ndarray,
                           p: np.ndarray, q: np.ndarray, cfg: QuadratureConfig) -> float:
    """int_0^1 A_nu(p + s(q-p)) (q-p)^nu ds with canonical orientation."""
    if tuple(q.tolist()) < tuple(p.tolist()):
        return -_segment_line_integral(model, tag, z, q, p, cfg)
    s, w = unit_interval_rule(cfg.order)
    pts = p + np.outer(s, q - p)
    a = _potential_batch(model, tag, z, pts, cfg)
    return float(np.dot(w, a @ (q - p)))


def line_integral(model: FieldModel, tag: TestFunctionTag, z: FourVector,
                  curve: Curve, cfg: QuadratureConfig) -> float:
    """Line integral of the pole-z potential along a piecewise-affine curve."""
    za = z.as_array()
    return float(sum(
        _segment_line_integral(model, tag, za, p, q, cfg) for p, q in _as_segments(curve)
    ))


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------

def stokes_check(model: FieldModel, tag: TestFunctionTag, z: FourVector,
                 sigma: AffineSimplex, cfg: QuadratureConfig) -> float:
    """|line integral over the oriented boundary of sigma - surface integral|."""
    if sigma.n != 2:
        raise FieldModelError("stokes check needs a 2-simplex")
    za = z.as_array()
    v = sigma.vertex_array()
    line = (
        _segment_line_integral(model, tag, za, v[1], v[2], cfg)   # face 0
        - _segment_line_integral(model, tag, za, v[0], v[2], cfg)  # face 1
        + _segment_line_integral(model, tag, za, v[0], v[1], cfg)  # face 2
    )
    return abs(line - surface_integral(model, sigma, cfg))


def cone_check(model: FieldModel, tag: TestFunctionTag, z: FourVector,
               gamma: AffineSimplex, cfg: QuadratureConfig) -> float:
    """|line integral of gamma - surface integral over the cone of gamma|."""
    if gamma.n != 1:
        raise FieldModelError("cone check needs a 1-simplex")
    line = line_integral(model, tag, z, gamma, cfg)
    surf = surface_integral(model, cone_simplex(z, gamma), cfg)
    return abs(line - surf)


def boundary_independence_check(model: FieldModel, c1: AffineSimplex,
                                c2: Union[AffineSimplex, Chain],
                                cfg: QuadratureConfig) -> float:
    """|F<c1> - F<c2>| for surfaces (or 2-chains) with equal boundary."""
    from .simplex import boundary

    b1 = boundary(c1)
    b2 = boundary(c2)
    if b1 != b2:
        raise FieldModelError("surfaces do not share a boundary")
    return abs(surface_integral(model, c1, cfg) - surface_integral(model, c2, cfg))


def covariance_check(model: FieldModel, tag: TestFunctionTag, z: FourVector,
                     y: FourVector, P: PoincareElement, cfg: QuadratureConfig) -> float:
    """Residual of the moving-pole covariance law: the L^T-contracted
    potential of the pushforward model at (Py, rotated tag, pole Pz) must
    reproduce the original potential at (y, tag, z)."""
    a = potential(model, tag, z, y, cfg)
    moved = potential(model.pushforward(P), tag.rotated(P.lorentz),
                      P.apply(z), P.apply(y), cfg)
    return float(np.max(np.abs(P.lorentz.matrix.T @ moved - a)))


def closedness_residual(model: FieldModel, tag: TestFunctionTag, y: FourVector,
                        step: float = 1e-4) -> float:
    """Max |cyclic sum of central-difference partials| of the smeared field."""
    ya = y.as_array()
    df = np.zeros((4, 4, 4))
    for rho in range(4):
        e = np.zeros(4)
        e[rho] = step
        df[rho] = (_smeared_batch(model, tag, (ya + e)[None])[0]
                   - _smeared_batch(model, tag, (ya - e)[None])[0]) / (2 * step)
    cyc = df + np.transpose(df, (1, 2, 0)) + np.transpose(df, (2, 0, 1))
    return float(np.max(np.abs(cyc)))


def primitivity_residual(model: FieldModel, tag: TestFunctionTag, z: FourVector,
                         y: FourVector, cfg: QuadratureConfig,
                         step: float = 1e-4) -> float:
    """Max |curl of the potential - smeared field| by central differences."""
    ya, za = y.as_array(), z.as_array()
    da = np.zeros((4, 4))
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = step
        da[mu] = (_potential_batch(model, tag, za, (ya + e)[None], cfg)[0]
                  - _potential_batch(model, tag, za, (ya - e)[None], cfg)[0]) / (2 * step)
    curl = da - da.T
    return float(np.max(np.abs(curl - _smeared_batch(model, tag, ya[None])[0])))


# ---------------------------------------------------------------------------
# Gauge function families
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _smear_rule(tag: TestFunctionTag, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Fixed 4d tensor-product rule representing integration against the
    tag: global nodes (N, 4) and weights w_i f(x_i).  Rotated tags map the
    base rule through the rotation, so the rule itself is covariant."""
    x, w = unit_interval_rule(order)
    r = tag.base_radius
    x1 = r * (2.0 * x - 1.0)
    w1 = 2.0 * r * w
    grids = np.meshgrid(x1, x1, x1, x1, indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.ones(len(nodes))
    for gw in np.meshgrid(w1, w1, w1, w1, indexing="ij"):
        weights *= gw.ravel()
    base_tag = TestFunctionTag(tag.kind, tag.eps, tag.normalization, tag.token, None)
    weights *= base_tag.values(nodes)
    keep = weights != 0.0
    nodes, weights = nodes[keep], weights[keep]
    if tag.rotation is not None:
        nodes = nodes @ tag.rotation.matrix.T
    return nodes, weights


@dataclass(frozen=True)
class GaugeFunctionFamily:
    """The covariant family g^z(y) = g((y-z)^2) built from a polynomial
    base g; smeared values and gradients integrate against the tag with a
    fixed rule, so the gradient is the exact derivative of the value."""

    coeffs: Tuple[float, ...]

    @staticmethod
    def polynomial(*coeffs: float) -> "GaugeFunctionFamily":
        return GaugeFunctionFamily(tuple(float(c) for c in coeffs))

    def g(self, s: np.ndarray) -> np.ndarray:
        out = np.zeros_like(s)
        for c in reversed(self.coeffs):
            out = out * s + c
        return out

    def dg(self, s: np.ndarray) -> np.ndarray:
        out = np.zeros_like(s)
        n = len(self.coeffs)
        for k in range(n - 1, 0, -1):
            out = out * s + k * self.coeffs[k]
        return out

    def _u(self, z: np.ndarray, points: np.ndarray, nodes: np.ndarray) -> np.ndarray:
        return points[:, None, :] - nodes[None, :, :] - z[None, None, :]

    def value(self, z: FourVector, y: FourVector, tag: TestFunctionTag,
              order: int) -> float:
        return self.value_batch(z, y.as_array()[None], tag, order)[0]

    def value_batch(self, z: FourVector, points: np.ndarray, tag: TestFunctionTag,
                    order: int) -> np.ndarray:
        nodes, weights = _smear_rule(tag, order)
        u = self._u(z.as_array(), np.atleast_2d(points), nodes)
        s = np.einsum("pnm,m,pnm->pn", u, _METRIC, u)
        return self.g(s) @ weights

    def grad_batch(self, z: FourVector, points: np.ndarray, tag: TestFunctionTag,
                   order: int) -> np.ndarray:
        """d/dy^mu of the smeared value, covariant components (N, 4)."""
        nodes, weights = _smear_rule(tag, order)
        u = self._u(z.as_array(), np.atleast_2d(points), nodes)
        s = np.einsum("pnm,m,pnm->pn", u, _METRIC, u)
        low = u * _METRIC
        return np.einsum("pn,pnm,n->pm", 2.0 * self.dg(s), low, weights)


def gauge_shift(model: FieldModel, tag: TestFunctionTag, g: GaugeFunctionFamily,
                z: FourVector, curve: Curve, cfg: QuadratureConfig) -> Tuple[float, float]:
    """The line integral of the gauged potential A + grad g^z along the
    curve, and the boundary term g^z(end) - g^z(start); for closed curves
    the gauged and ungauged line integrals agree."""
    segs = _as_segments(curve)
    za = z.as_array()
    unshifted = float(sum(
        _segment_line_integral(model, tag, za, p, q, cfg) for p, q in segs
    ))
    s_nodes, w = unit_interval_rule(cfg.order)
    grad_term = 0.0
    boundary_term = 0.0
    for p, q in segs:
        sign = 1.0
        if tuple(q.tolist()) < tuple(p.tolist()):
            p, q, sign = q, p, -1.0
        pts = p + np.outer(s_nodes, q - p)
        gr = g.grad_batch(z, pts, tag, cfg.gauge_order)
        grad_term += sign * float(np.dot(w, gr @ (q - p)))
        vals = g.value_batch(z, np.stack([q, p]), tag, cfg.gauge_order)
        boundary_term += sign * float(vals[0] - vals[1])
    return unshifted + grad_term, boundary_term


# ---------------------------------------------------------------------------
# The electromagnetic cochain and the potential connection
# ---------------------------------------------------------------------------

def em_cochain(model: FieldModel, tag: TestFunctionTag, cfg: QuadratureConfig) -> Cochain:
    """The phase cochain exp(i F<sigma_c, f>); each simplex is integrated
    against its own tag.  Covariance is realized classically: the cochain
    of the pushforward model evaluated on transformed simplices reproduces
    the original values."""

    def evaluate(c: AffineSimplex) -> UnitaryValue:
        return UnitaryValue.phase(surface_integral(model, c, cfg))

    def transformed(P: PoincareElement) -> Cochain:
        return em_cochain(model.pushforward(P), tag.rotated(P.lorentz), cfg)

    return Cochain(evaluate, value_dim=1, covariance_group="full", transformed=transformed)


def pot_connection(model: FieldModel, tag: TestFunctionTag, cfg: QuadratureConfig) -> Connection:
    """u^pot_a(b) = exp(i A^{a_0}<r_b, f>): pole-indexed phases from line
    integrals of the potential based at the connection's pole."""

    def evaluate(a: AffineSimplex, l: Letter) -> UnitaryValue:
        seg = l.traversed_simplex()
        theta = line_integral(model, a.tag, a.vertices[0], seg, cfg)
        return UnitaryValue.phase(theta)

    return Connection(evaluate, value_dim=1)


def gauge_lift(g: GaugeFunctionFamily, tag: TestFunctionTag,
               cfg: QuadratureConfig) -> GaugeFamily:
    """The phase gauge family exp(i g^{a_0}(a'_0, f)) for the holonomy
    module; it fixes every loop value (abelian conjugation)."""

    def evaluate(a: AffineSimplex, a_prime: AffineSimplex) -> UnitaryValue:
        val = g.value(a.vertices[0], a_prime.vertices[0], a.tag, cfg.gauge_order)
        return UnitaryValue.phase(val)

    return GaugeFamily(evaluate, value_dim=1)
