"""Registered verification checks, scenario configuration and the random
generators the checks and the test suite share.

Every check is a named function taking a ScenarioConfig and returning a
list of records {check, params, samples, max_residual, tolerance, pass}.
Each check seeds its own generator from the config seed and its name, so
a report is byte-identical for a fixed config regardless of which other
checks run.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import emfield, geometry, holonomy, loopgroup, simplex
from .emfield import FieldModel, GaugeFunctionFamily, QuadratureConfig
from .geometry import DoubleCone, FourVector, LorentzMatrix, PoincareElement
from .holonomy import CochainScenario, MockLatticeCochain, UnitaryValue
from .loopgroup import Letter, LoopWord, Path, PathFrameSystem, Word
from .simplex import AffineSimplex, Chain, TestFunctionTag


class ConfigError(ValueError):
    """Malformed scenario configuration."""


# ---------------------------------------------------------------------------
# Scenario configuration
# ---------------------------------------------------------------------------

def default_models() -> Tuple[FieldModel, ...]:
    c = np.zeros((4, 4))
    c[0, 1], c[1, 0] = 0.7, -0.7
    c[2, 3], c[3, 2] = -0.3, 0.3
    q = np.zeros((4, 4, 4))
    q[1, 0, 0], q[0, 1, 1], q[2, 3, 3], q[3, 0, 2] = 0.4, -0.2, 0.5, 0.3
    return (
        FieldModel.constant(c),
        FieldModel.linear_from_quadratic_potential(q),
        FieldModel.plane_wave([0.3, 0.8, -0.2, 0.1], [1.2, 0.7, -0.4, 0.3], phase=0.4),
    )


def default_tags() -> Tuple[TestFunctionTag, ...]:
    return (
        TestFunctionTag("gaussian", 0.15),
        TestFunctionTag("bump", 0.15, token="g"),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """Deterministic scenario: a seed, quadrature orders, field models and
    tags, Poincare sampling, simplex scale, the checks to run and optional
    per-check tolerance/count overrides."""

    seed: int = 0
    orders: Tuple[int, ...] = (4, 8, 16, 32)
    gauge_order: int = 8
    models: Tuple[FieldModel, ...] = field(default_factory=default_models)
    tags: Tuple[TestFunctionTag, ...] = field(default_factory=default_tags)
    poincare_count: int = 10
    rapidity_cap: float = 2.0
    simplex_scale: float = 1.0
    checks: Tuple[str, ...] = ()
    tolerances: Tuple[Tuple[str, float], ...] = ()
    counts: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        if not self.orders or any(o < 2 for o in self.orders):
            raise ConfigError("orders must be a nonempty list of integers >= 2")
        for name, tol in self.tolerances:
            if not tol > 0:
                raise ConfigError(f"tolerance override for {name!r} must be positive")
        for name, n in self.counts:
            if n < 1:
                raise ConfigError(f"count override for {name!r} must be >= 1")

    @property
    def order(self) -> int:
        return max(self.orders)

    def quad(self, order: Optional[int] = None) -> QuadratureConfig:
        return QuadratureConfig(order or self.order, self.gauge_order)

    def tolerance(self, check: str, default: float) -> float:
        return dict(self.tolerances).get(check, default)

    def count(self, check: str, default: int) -> int:
        return dict(self.counts).get(check, default)

    def rng(self, check: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(check.encode())])

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "orders": list(self.orders),
            "gauge_order": self.gauge_order,
            "models": [m.to_json() for m in self.models],
            "tags": [t.to_json() for t in self.tags],
            "poincare": {"count": self.poincare_count, "rapidity_cap": self.rapidity_cap},
            "simplex_scale": self.simplex_scale,
            "checks": list(self.checks),
            "tolerances": {k: v for k, v in self.tolerances},
            "counts": {k: v for k, v in self.counts},
        }

    @staticmethod
    def from_json(data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {"seed", "orders", "gauge_order", "models", "tags", "poincare",
                 "simplex_scale", "checks", "tolerances", "counts"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            kwargs = {}
            if "seed" in data:
                kwargs["seed"] = int(data["seed"])
            if "orders" in data:
                kwargs["orders"] = tuple(int(o) for o in data["orders"])
            if "gauge_order" in data:
                kwargs["gauge_order"] = int(data["gauge_order"])
            if "models" in data:
                kwargs["models"] = tuple(FieldModel.from_json(m) for m in data["models"])
            if "tags" in data:
                kwargs["tags"] = tuple(TestFunctionTag.from_json(t) for t in data["tags"])
            if "poincare" in data:
                kwargs["poincare_count"] = int(data["poincare"].get("count", 10))
                kwargs["rapidity_cap"] = float(data["poincare"].get("rapidity_cap", 2.0))
            if "simplex_scale" in data:
                kwargs["simplex_scale"] = float(data["simplex_scale"])
            if "checks" in data:
                kwargs["checks"] = tuple(str(c) for c in data["checks"])
            if "tolerances" in data:
                kwargs["tolerances"] = tuple(sorted(
                    (str(k), float(v)) for k, v in data["tolerances"].items()))
            if "counts" in data:
                kwargs["counts"] = tuple(sorted(
                    (str(k), int(v)) for k, v in data["counts"].items()))
        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigError(f"malformed config: {e}") from e
        cfg = ScenarioConfig(**kwargs)
        unknown_checks = [c for c in cfg.checks if c not in CHECKS]
        if unknown_checks:
            raise ConfigError(f"unknown checks: {unknown_checks}")
        return cfg


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------

def random_point(rng: np.random.Generator, scale: float = 1.0) -> FourVector:
    return FourVector.from_seq(rng.uniform(-scale, scale, 4).tolist())


def random_rational_point(rng: np.random.Generator) -> FourVector:
    comps = tuple(
        Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 9))) for _ in range(4)
    )
    return FourVector(comps)


def random_segment(rng, tag: TestFunctionTag, scale: float = 1.0) -> AffineSimplex:
    return AffineSimplex((random_point(rng, scale), random_point(rng, scale)), tag)


def random_triangle(rng, tag: TestFunctionTag, scale: float = 1.0) -> AffineSimplex:
    return AffineSimplex(
        (random_point(rng, scale), random_point(rng, scale), random_point(rng, scale)), tag)


def random_rotation(rng) -> LorentzMatrix:
    i, j = [int(a) for a in rng.choice([1, 2, 3], size=2, replace=False)]
    return LorentzMatrix.rotation(i, j, float(rng.uniform(0, 2 * math.pi)))


def random_poincare(rng, rapidity_cap: float = 2.0, translation_scale: float = 1.0,
                    allow_boost: bool = True) -> PoincareElement:
    L = random_rotation(rng)
    if allow_boost:
        axis = int(rng.integers(1, 4))
        eta = float(rng.uniform(-rapidity_cap, rapidity_cap))
        L = LorentzMatrix.boost(axis, eta).compose(L)
    return PoincareElement(random_point(rng, translation_scale), L)


def random_loop(rng, tag: TestFunctionTag, length: int, scale: float = 1.0,
                base: Optional[FourVector] = None) -> Path:
    """A closed polygon path with the given number of segments."""
    pts = [base if base is not None else random_point(rng, scale)]
    for _ in range(max(0, length - 1)):
        pts.append(random_point(rng, scale))
    letters = []
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        letters.append(Letter(AffineSimplex((a, b), tag)))
    return Path(tuple(letters))


def random_word(rng, pool: Sequence[Letter], length: int) -> Word:
    letters = []
    for _ in range(length):
        l = pool[int(rng.integers(0, len(pool)))]
        if rng.integers(0, 2):
            l = l.inverse()
        letters.append(l)
    return Word(tuple(letters))


def random_rational_chain(rng, tag: TestFunctionTag, n: int, length: int) -> Chain:
    terms = []
    for _ in range(length):
        verts = tuple(random_rational_point(rng) for _ in range(n + 1))
        coef = int(rng.integers(-3, 4))
        if coef == 0:
            coef = 1
        terms.append((coef, AffineSimplex(verts, tag)))
    return Chain.of(terms)


def dogleg_frames(shift: float) -> PathFrameSystem:
    """A covariant non-Euclidean frame family: detour through the affine
    midpoint displaced toward the pole by the given fraction."""

    def rule(pole: AffineSimplex, target: AffineSimplex) -> Path:
        p, t = pole.vertices[0], target.vertices[0]
        if p == t:
            return loopgroup.euclidean_frame(target, pole)
        mid = t + (p - t).scale(shift)
        leg1 = AffineSimplex((t, mid), pole.tag)
        leg2 = AffineSimplex((mid, p), pole.tag)
        return Path((Letter(leg1), Letter(leg2)))

    return PathFrameSystem(rule=rule, kind="custom")


def compatible(model: FieldModel, tag: TestFunctionTag) -> bool:
    try:
        emfield.smeared_field(model, tag, FourVector.zero())
        return True
    except emfield.SmearingError:
        return False


def _record(check: str, params: dict, samples: int, residual: float,
            tolerance: float) -> dict:
    return {
        "check": check,
        "params": params,
        "samples": samples,
        "max_residual": float(residual),
        "tolerance": float(tolerance),
        "pass": bool(residual <= tolerance),
    }


# ---------------------------------------------------------------------------
# Checks: exact chain and word algebra
# ---------------------------------------------------------------------------

def check_chain_identities(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("chain_identities")
    n_samples = cfg.count("chain_identities", 50)
    tag = TestFunctionTag("bump", 0.25)
    failures = 0
    for _ in range(n_samples):
        ch2 = random_rational_chain(rng, tag, 2, int(rng.integers(1, 5)))
        if not simplex.boundary(simplex.boundary(ch2)).is_zero():
            failures += 1
    tol = cfg.tolerance("chain_identities", 0.0)
    return [_record("chain_identities", {"identity": "boundary^2=0"}, n_samples,
                    float(failures), tol)]


def check_homotopy_identity(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("homotopy_identity")
    n_samples = cfg.count("homotopy_identity", 50)
    tag = TestFunctionTag("bump", 0.25)
    failures = 0
    for _ in range(n_samples):
        dim = int(rng.integers(1, 3))
        ch = random_rational_chain(rng, tag, dim, int(rng.integers(1, 5)))
        z = random_rational_point(rng)
        if not simplex.homotopy_identity_check(z, ch):
            failures += 1
    tol = cfg.tolerance("homotopy_identity", 0.0)
    return [_record("homotopy_identity", {"identity": "d h + h d = id"}, n_samples,
                    float(failures), tol)]


def _letter_pool(tag: TestFunctionTag) -> List[Letter]:
    def pt(*c):
        return FourVector.of(*[Fraction(x) for x in c])

    segs = [
        AffineSimplex((pt(0, 0, 0, 0), pt(0, 1, 0, 0)), tag),
        AffineSimplex((pt(0, 1, 0, 0), pt(1, 1, 1, 0)), tag),
        AffineSimplex((pt(1, 1, 1, 0), pt(0, 0, 0, 1)), tag),
        AffineSimplex((pt(0, 0, 0, 1), pt(0, 0, 0, 0)), tag),
        AffineSimplex((pt(2, 0, 0, 0), pt(2, 2, 0, 0)), tag),
        AffineSimplex((pt(0, 0, 0, 0), pt(0, 0, 0, 0)), tag),  # degenerate
    ]
    return [Letter(s) for s in segs]


def check_word_reduction(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("word_reduction")
    n_samples = cfg.count("word_reduction", 500)
    pool = _letter_pool(TestFunctionTag("bump", 0.25))
    failures = 0
    for _ in range(n_samples):
        w = random_word(rng, pool, int(rng.integers(0, 9)))
        red = w.reduce()
        if not red.letterwise_eq(loopgroup.brute_force_reduce(w)):
            failures += 1
        if not (w * w.inverse()).reduce().is_identity():
            failures += 1
        if not red.reduce().letterwise_eq(red):
            failures += 1
    tol = cfg.tolerance("word_reduction", 0.0)
    return [_record("word_reduction", {"alphabet": len(pool)}, n_samples,
                    float(failures), tol)]


def check_geometry_invariants(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("geometry_invariants")
    n = cfg.count("geometry_invariants", cfg.poincare_count)
    worst = 0.0
    g = np.diag([1.0, -1.0, -1.0, -1.0])
    for _ in range(n):
        P = random_poincare(rng, cfg.rapidity_cap)
        Q = random_poincare(rng, cfg.rapidity_cap)
        L = P.lorentz.matrix
        worst = max(worst, float(np.max(np.abs(L.T @ g @ L - g))))
        y = random_point(rng, cfg.simplex_scale)
        lhs = P.compose(Q).apply(y)
        rhs = P.apply(Q.apply(y))
        worst = max(worst, float(np.max(np.abs(lhs.as_array() - rhs.as_array()))))
        back = P.inverse().apply(P.apply(y))
        worst = max(worst, float(np.max(np.abs(back.as_array() - y.as_array()))))
        x2 = random_point(rng, cfg.simplex_scale)
        worst = max(worst, abs(geometry.inner(P.lorentz.apply(y), P.lorentz.apply(x2))
                               - geometry.inner(y, x2)))
    tol = cfg.tolerance("geometry_invariants", 1e-10)
    return [_record("geometry_invariants", {"rapidity_cap": cfg.rapidity_cap}, n, worst, tol)]


def check_support_covariance(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("support_covariance")
    n = cfg.count("support_covariance", 25)
    tag = TestFunctionTag("bump", 0.2)
    failures = 0
    for _ in range(n):
        s = random_segment(rng, tag, cfg.simplex_scale)
        P = random_poincare(rng, cfg.rapidity_cap)
        moved = simplex.poincare_act(P, s)
        direct = simplex.support_ball(moved)
        mapped = simplex.support_ball(s).poincare_image(P)
        if direct.hull != mapped.hull:
            failures += 1
        if not math.isclose(direct.eps, mapped.eps, rel_tol=1e-12):
            failures += 1
    tol = cfg.tolerance("support_covariance", 0.0)
    return [_record("support_covariance", {}, n, float(failures), tol)]


# ---------------------------------------------------------------------------
# Checks: electromagnetic identities
# ---------------------------------------------------------------------------

def _em_pairs(cfg: ScenarioConfig):
    for model in cfg.models:
        for tag in cfg.tags:
            if compatible(model, tag):
                yield model, tag


def _em_tolerance(cfg: ScenarioConfig, check: str, model: FieldModel) -> float:
    default = 1e-8 if model.kind in ("plane_wave", "superposition") else 1e-10
    return cfg.tolerance(check, default)


def check_stokes(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("stokes")
    n = cfg.count("stokes", 20)
    quad = cfg.quad()
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            sigma = random_triangle(rng, tag, cfg.simplex_scale)
            z = random_point(rng, cfg.simplex_scale)
            worst = max(worst, emfield.stokes_check(model, tag, z, sigma, quad))
        out.append(_record("stokes", {"model": model.kind, "tag": tag.kind,
                                      "order": quad.order}, n, worst,
                           _em_tolerance(cfg, "stokes", model)))
    return out


def check_cone_equivalence(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("cone_equivalence")
    n = cfg.count("cone_equivalence", 20)
    quad = cfg.quad()
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            gamma = random_segment(rng, tag, cfg.simplex_scale)
            z = random_point(rng, cfg.simplex_scale)
            worst = max(worst, emfield.cone_check(model, tag, z, gamma, quad))
        out.append(_record("cone_equivalence", {"model": model.kind, "tag": tag.kind,
                                                "order": quad.order}, n, worst,
                           _em_tolerance(cfg, "cone_equivalence", model)))
    return out


def check_primitivity(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("primitivity")
    n = cfg.count("primitivity", 20)
    quad = cfg.quad()
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            z = random_point(rng, cfg.simplex_scale)
            y = random_point(rng, cfg.simplex_scale)
            worst = max(worst, emfield.primitivity_residual(model, tag, z, y, quad,
                                                            step=quad.fd_step))
        out.append(_record("primitivity", {"model": model.kind, "tag": tag.kind,
                                           "step": quad.fd_step}, n, worst,
                           cfg.tolerance("primitivity", 1e-6)))
    return out


def check_closedness(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("closedness")
    n = cfg.count("closedness", 20)
    quad = cfg.quad()
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            y = random_point(rng, cfg.simplex_scale)
            worst = max(worst, emfield.closedness_residual(model, tag, y, step=quad.fd_step))
        out.append(_record("closedness", {"model": model.kind, "tag": tag.kind,
                                          "step": quad.fd_step}, n, worst,
                           cfg.tolerance("closedness", 1e-6)))
    return out


def check_covariance_moving_pole(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("covariance_moving_pole")
    n = cfg.count("covariance_moving_pole", cfg.poincare_count)
    quad = cfg.quad()
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            P = random_poincare(rng, cfg.rapidity_cap)
            z = random_point(rng, cfg.simplex_scale)
            y = random_point(rng, cfg.simplex_scale)
            worst = max(worst, emfield.covariance_check(model, tag, z, y, P, quad))
        out.append(_record("covariance_moving_pole", {"model": model.kind, "tag": tag.kind,
                                                      "order": quad.order}, n, worst,
                           cfg.tolerance("covariance_moving_pole", 1e-8)))
    return out


def check_orientation_reversal(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("orientation_reversal")
    n = cfg.count("orientation_reversal", 20)
    quad = cfg.quad()
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            c = random_triangle(rng, tag, cfg.simplex_scale)
            worst = max(worst, abs(emfield.surface_integral(model, c.opposite(), quad)
                                   + emfield.surface_integral(model, c, quad)))
        out.append(_record("orientation_reversal", {"model": model.kind, "tag": tag.kind},
                           n, worst, cfg.tolerance("orientation_reversal", 0.0)))
    return out


def check_boundary_independence(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("boundary_independence")
    n = cfg.count("boundary_independence", 10)
    quad = cfg.quad()
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            c = random_triangle(rng, tag, cfg.simplex_scale)
            z = random_point(rng, cfg.simplex_scale)
            decomposed = simplex.cone(z, simplex.boundary(c))
            worst = max(worst, emfield.boundary_independence_check(model, c, decomposed, quad))
        out.append(_record("boundary_independence", {"model": model.kind, "tag": tag.kind,
                                                     "order": quad.order}, n, worst,
                           _em_tolerance(cfg, "boundary_independence", model)))
    return out


def check_gauge_invariance_closed(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("gauge_invariance_closed")
    n = cfg.count("gauge_invariance_closed", 10)
    quad = cfg.quad()
    gauge = GaugeFunctionFamily.polynomial(0.0, 0.8, -0.3)
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            loop = random_loop(rng, tag, int(rng.integers(2, 5)), cfg.simplex_scale)
            z = random_point(rng, cfg.simplex_scale)
            unshifted = emfield.line_integral(model, tag, z, loop, quad)
            shifted, _ = emfield.gauge_shift(model, tag, gauge, z, loop, quad)
            worst = max(worst, abs(shifted - unshifted))
        out.append(_record("gauge_invariance_closed", {"model": model.kind, "tag": tag.kind},
                           n, worst, cfg.tolerance("gauge_invariance_closed", 1e-9)))
    return out


def check_gauge_boundary_term(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("gauge_boundary_term")
    n = cfg.count("gauge_boundary_term", 10)
    quad = cfg.quad()
    gauge = GaugeFunctionFamily.polynomial(0.2, 1.0, 0.0, -0.1)
    out = []
    for model, tag in _em_pairs(cfg):
        worst = 0.0
        for _ in range(n):
            segs = [random_segment(rng, tag, cfg.simplex_scale)]
            for _ in range(int(rng.integers(0, 2))):
                prev_end = segs[-1].vertices[1]
                segs.append(AffineSimplex((prev_end, random_point(rng, cfg.simplex_scale)), tag))
            z = random_point(rng, cfg.simplex_scale)
            unshifted = emfield.line_integral(model, tag, z, segs, quad)
            shifted, boundary_term = emfield.gauge_shift(model, tag, gauge, z, segs, quad)
            worst = max(worst, abs(shifted - unshifted - boundary_term))
        out.append(_record("gauge_boundary_term", {"model": model.kind, "tag": tag.kind},
                           n, worst, cfg.tolerance("gauge_boundary_term", 1e-9)))
    return out


def check_quadrature_convergence(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("quadrature_convergence")
    model = next((m for m in cfg.models if m.kind == "plane_wave"), None)
    tag = next((t for t in cfg.tags if t.kind == "gaussian"), None)
    if model is None or tag is None:
        model = default_models()[2]
        tag = default_tags()[0]
    sigma = random_triangle(rng, tag, cfg.simplex_scale)
    z = random_point(rng, cfg.simplex_scale)
    residuals = [emfield.stokes_check(model, tag, z, sigma, cfg.quad(o))
                 for o in sorted(cfg.orders)]
    floor = cfg.tolerance("quadrature_convergence", 1e-12)
    worst = max((residuals[i + 1] - residuals[i] for i in range(len(residuals) - 1)),
                default=0.0)
    return [_record("quadrature_convergence",
                    {"orders": sorted(cfg.orders),
                     "residuals": [float(r) for r in residuals]},
                    len(residuals), max(0.0, worst), floor)]


def check_potential_connection(cfg: ScenarioConfig) -> List[dict]:
    """Headline: the Euclidean-frame connection of the em cochain equals the
    potential connection, and a frame change realizes the equivalence."""
    rng = cfg.rng("potential_connection")
    n = cfg.count("potential_connection", 20)
    quad = cfg.quad()
    frames_e = PathFrameSystem.euclidean()
    frames_p = dogleg_frames(0.35)
    out = []
    for model, tag in _em_pairs(cfg):
        w = emfield.em_cochain(model, tag, quad)
        lam = holonomy.rep_from_cochain(w)
        u_em = holonomy.connection_from_rep(lam, frames_e)
        u_pot = emfield.pot_connection(model, tag, quad)
        u_p = holonomy.connection_from_rep(lam, frames_p)
        g = holonomy.frame_change_gauge(lam, frames_e, frames_p)
        gauged = holonomy.apply_gauge(u_em, g)
        worst = 0.0
        worst_frame = 0.0
        for _ in range(n):
            a = AffineSimplex((random_point(rng, cfg.simplex_scale),), tag)
            b = Letter(random_segment(rng, tag, cfg.simplex_scale))
            worst = max(worst, u_em.on_letter(a, b).distance(u_pot.on_letter(a, b)))
            worst_frame = max(worst_frame, gauged.on_letter(a, b).distance(u_p.on_letter(a, b)))
        out.append(_record("potential_connection", {"model": model.kind, "tag": tag.kind,
                                                    "order": quad.order, "side": "u_em=u_pot"},
                           n, worst, cfg.tolerance("potential_connection", 1e-9)))
        out.append(_record("potential_connection", {"model": model.kind, "tag": tag.kind,
                                                    "order": quad.order,
                                                    "side": "frame_change"},
                           n, worst_frame, cfg.tolerance("potential_connection", 1e-9)))
    return out


# ---------------------------------------------------------------------------
# Checks: holonomy correspondences
# ---------------------------------------------------------------------------

def _em_phase_cochain(cfg: ScenarioConfig, order: int = 8):
    for model, tag in _em_pairs(cfg):
        return emfield.em_cochain(model, tag, cfg.quad(order)), tag
    model, tag = default_models()[0], default_tags()[0]
    return emfield.em_cochain(model, tag, cfg.quad(order)), tag


def mock_region() -> DoubleCone:
    return DoubleCone.standard(FourVector.zero(), 4.0)


def mock_cochain_instance(cell_size: float = 1.0, qudit_dim: int = 2) -> MockLatticeCochain:
    return MockLatticeCochain(mock_region(), cell_size, qudit_dim)


def random_mock_triangle(rng, tag: TestFunctionTag, mock: MockLatticeCochain,
                         cell: Optional[int] = None) -> AffineSimplex:
    """A small dyadic triangle inside one lattice cell (time-space plane)."""
    if cell is None:
        cell = int(rng.integers(0, mock.n_cells))
    x1 = mock.lo + (cell + 0.5) * mock.cell_size
    h = 0.125 * mock.cell_size
    base = np.array([
        float(rng.integers(-4, 5)) * h * 0.5,
        x1,
        float(rng.integers(-4, 5)) * h * 0.5,
        float(rng.integers(-4, 5)) * h * 0.5,
    ])
    def pt(dt, dx):
        return FourVector.of(base[0] + dt, base[1] + dx, base[2], base[3])
    return AffineSimplex((pt(0.0, -h), pt(0.0, h), pt(2.0 * h, 0.0)), tag)


def loops_within(rng, tag: TestFunctionTag, scale: float, count: int,
                 max_len: int = 5) -> List[LoopWord]:
    out = []
    for _ in range(count):
        length = int(rng.integers(1, max_len + 1))
        out.append(LoopWord((random_loop(rng, tag, length, scale),)))
    return out


def _roundtrip_records(cfg: ScenarioConfig, name: str, w, tag: TestFunctionTag,
                       triangles: List[AffineSimplex], loops: List[LoopWord]) -> List[dict]:
    lam = holonomy.rep_from_cochain(w)
    w_back = holonomy.cochain_from_rep(lam)
    worst_w = 0.0
    for c in triangles:
        worst_w = max(worst_w, w_back(c).distance(w(c)))
    lam_back = holonomy.rep_from_cochain(holonomy.cochain_from_rep(lam))
    worst_l = 0.0
    for p in loops:
        worst_l = max(worst_l, lam_back(p).distance(lam(p)))
        reduced = LoopWord((Path(p.word().reduce().letters),))
        worst_l = max(worst_l, lam(p).distance(lam(reduced)))
    tol = cfg.tolerance(name, 1e-12)
    return [
        _record(name, {"side": "cochain"}, len(triangles), worst_w, tol),
        _record(name, {"side": "representation"}, len(loops), worst_l, tol),
    ]


def check_cochain_roundtrip_em(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("cochain_roundtrip_em")
    n = cfg.count("cochain_roundtrip_em", 20)
    w, tag = _em_phase_cochain(cfg)
    triangles = [random_triangle(rng, tag, cfg.simplex_scale) for _ in range(n)]
    loops = loops_within(rng, tag, cfg.simplex_scale, n)
    return _roundtrip_records(cfg, "cochain_roundtrip_em", w, tag, triangles, loops)


def check_cochain_roundtrip_mock(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("cochain_roundtrip_mock")
    n = cfg.count("cochain_roundtrip_mock", 10)
    mock = mock_cochain_instance()
    w = mock.as_cochain()
    tag = TestFunctionTag("bump", 0.1)
    triangles = [random_mock_triangle(rng, tag, mock) for _ in range(n)]
    loops = []
    for _ in range(n):
        c = random_mock_triangle(rng, tag, mock)
        loops.append(loopgroup.path_boundary(c))
    return _roundtrip_records(cfg, "cochain_roundtrip_mock", w, tag, triangles, loops)


def check_connection_restores_rep(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("connection_restores_rep")
    n = cfg.count("connection_restores_rep", 20)
    w, tag = _em_phase_cochain(cfg)
    lam = holonomy.rep_from_cochain(w)
    worst = 0.0
    for frames in (PathFrameSystem.euclidean(), dogleg_frames(0.5)):
        u = holonomy.connection_from_rep(lam, frames)
        for _ in range(n):
            loop = random_loop(rng, tag, int(rng.integers(1, 5)), cfg.simplex_scale)
            a = loop.start
            worst = max(worst, u.on_path(a, loop).distance(lam(LoopWord((loop,)))))
    tol = cfg.tolerance("connection_restores_rep", 1e-12)
    return [_record("connection_restores_rep", {"frames": ["euclidean", "custom"]},
                    2 * n, worst, tol)]


def check_frame_change_transport(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("frame_change_transport")
    n = cfg.count("frame_change_transport", 10)
    w, tag = _em_phase_cochain(cfg)
    lam = holonomy.rep_from_cochain(w)
    worst = 0.0
    worst_id = 0.0
    pairs = 0
    for _ in range(n):
        fa = dogleg_frames(float(rng.uniform(0.1, 0.9)))
        fb = dogleg_frames(float(rng.uniform(0.1, 0.9)))
        g = holonomy.frame_change_gauge(lam, fa, fb)
        ua = holonomy.connection_from_rep(lam, fa)
        ub = holonomy.connection_from_rep(lam, fb)
        gauged = holonomy.apply_gauge(ua, g)
        a = AffineSimplex((random_point(rng, cfg.simplex_scale),), tag)
        b = Letter(random_segment(rng, tag, cfg.simplex_scale))
        worst = max(worst, gauged.on_letter(a, b).distance(ub.on_letter(a, b)))
        worst_id = max(worst_id, g(a, a).distance(UnitaryValue.identity()))
        pairs += 1
    tol = cfg.tolerance("frame_change_transport", 1e-12)
    return [
        _record("frame_change_transport", {"side": "transport"}, pairs, worst, tol),
        _record("frame_change_transport", {"side": "pole_identity"}, pairs, worst_id, tol),
    ]


def check_gauge_axioms(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("gauge_axioms")
    n = cfg.count("gauge_axioms", 10)
    w, tag = _em_phase_cochain(cfg)
    lam = holonomy.rep_from_cochain(w)
    u = holonomy.connection_from_rep(lam, PathFrameSystem.euclidean())
    gauge = emfield.gauge_lift(GaugeFunctionFamily.polynomial(0.0, 0.6), tag, cfg.quad(8))
    gauged = holonomy.apply_gauge(u, gauge)
    worst = 0.0
    for _ in range(n):
        a = AffineSimplex((random_point(rng, cfg.simplex_scale),), tag)
        b = Letter(random_segment(rng, tag, cfg.simplex_scale))
        # u^g(bbar) = u^g(b)*
        worst = max(worst, gauged.on_letter(a, b.inverse()).distance(
            gauged.on_letter(a, b).star()))
        # u^g(e_a) = 1
        e = Letter(AffineSimplex((a.vertices[0], a.vertices[0]), tag))
        worst = max(worst, gauged.on_letter(a, e).distance(UnitaryValue.identity()))
        # loop conjugation: abelian values leave loops fixed
        loop = random_loop(rng, tag, 3, cfg.simplex_scale, base=a.vertices[0])
        worst = max(worst, gauged.on_path(a, loop).distance(u.on_path(a, loop)))
    tol = cfg.tolerance("gauge_axioms", 1e-12)
    return [_record("gauge_axioms", {"gauge": "lifted polynomial"}, n, worst, tol)]


def check_cochain_axioms_em(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("cochain_axioms_em")
    n = cfg.count("cochain_axioms_em", 10)
    quad = cfg.quad(8)
    out = []
    for model, tag in _em_pairs(cfg):
        w = emfield.em_cochain(model, tag, quad)
        triangles = tuple(random_triangle(rng, tag, cfg.simplex_scale) for _ in range(n))
        pairs = tuple((random_triangle(rng, tag, cfg.simplex_scale),
                       random_triangle(rng, tag, cfg.simplex_scale)) for _ in range(n))
        elements = tuple(random_poincare(rng, cfg.rapidity_cap) for _ in range(3))
        scenario = CochainScenario(triangles, pairs, elements,
                                   tolerance=cfg.tolerance("cochain_axioms_em", 1e-9))
        for rec in holonomy.verify_cochain(w, scenario):
            params = {"model": model.kind, "tag": tag.kind, "property": rec["check"]}
            out.append(_record("cochain_axioms_em", params, rec["samples"],
                               rec["max_violation"], rec["tolerance"]))
    return out


def _triangle_cone(c: AffineSimplex, radius: float) -> DoubleCone:
    centroid = FourVector.from_seq((np.mean(c.vertex_array(), axis=0)).tolist())
    return DoubleCone.standard(centroid, radius)


def mock_disjoint_pair(rng, tag, mock: MockLatticeCochain):
    """A cell-disjoint pair whose supports are certified causally disjoint
    (cells at least two slabs apart keep the light cones separated)."""
    lo = int(rng.integers(0, mock.n_cells - 2))
    hi = int(rng.integers(lo + 2, mock.n_cells))
    c1 = random_mock_triangle(rng, tag, mock, cell=lo)
    c2 = random_mock_triangle(rng, tag, mock, cell=hi)
    return c1, c2


def check_mock_causality(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("mock_causality")
    n = cfg.count("mock_causality", 10)
    mock = mock_cochain_instance()
    w = mock.as_cochain()
    tag = TestFunctionTag("bump", 0.05)
    worst = 0.0
    kept = 0
    for _ in range(n):
        c1, c2 = mock_disjoint_pair(rng, tag, mock)
        o1 = _triangle_cone(c1, 0.55 * mock.cell_size)
        o2 = _triangle_cone(c2, 0.55 * mock.cell_size)
        if not mock.cells_disjoint(c1, c2):
            continue
        if geometry.cones_causally_disjoint(o1, o2) is not True:
            continue
        worst = max(worst, w(c1).commutator_norm(w(c2)))
        kept += 1
    tol = cfg.tolerance("mock_causality", 1e-14)
    return [_record("mock_causality", {"cells": mock.n_cells, "kept": kept}, kept, worst, tol)]


def check_mock_noncommutativity(cfg: ScenarioConfig) -> List[dict]:
    """Negative control: overlapping-cell pairs with crossed X/Z weights
    must fail to commute by a margin."""
    mock = mock_cochain_instance()
    w = mock.as_cochain()
    tag = TestFunctionTag("bump", 0.05)
    n = cfg.count("mock_noncommutativity", 5)
    rng = cfg.rng("mock_noncommutativity")
    min_comm = math.inf
    for _ in range(n):
        cell = int(rng.integers(0, mock.n_cells))
        x1 = mock.lo + (cell + 0.5) * mock.cell_size
        def pt(t, x, y, zc):
            return FourVector.of(t, x, y, zc)
        c1 = AffineSimplex((pt(0.0, x1 - 0.25, 0.0, 0.0), pt(0.0, x1 + 0.25, 0.0, 0.0),
                            pt(1.5, x1, 0.0, 0.0)), tag)
        c2 = AffineSimplex((pt(0.0, x1, -0.25, 0.0), pt(0.0, x1, 1.25, 0.0),
                            pt(0.0, x1, 0.0, 1.5)), tag)
        min_comm = min(min_comm, w(c1).commutator_norm(w(c2)))
    residual = 0.0 if min_comm > 0.1 else 0.1 - min_comm
    return [_record("mock_noncommutativity", {"control": "negative",
                                              "min_commutator": float(min_comm)},
                    n, residual, cfg.tolerance("mock_noncommutativity", 0.0))]


def check_mock_covariance(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("mock_covariance")
    n = cfg.count("mock_covariance", 10)
    mock = mock_cochain_instance()
    w = mock.as_cochain()
    tag = TestFunctionTag("bump", 0.05)
    worst = 0.0
    for _ in range(n):
        cell = int(rng.integers(0, mock.n_cells - 1))
        c = random_mock_triangle(rng, tag, mock, cell=cell)
        shift = float(rng.integers(1, mock.n_cells - cell)) * mock.cell_size
        P = PoincareElement.from_translation(FourVector.of(0.0, shift, 0.0, 0.0))
        U = w.intertwiner(P)
        moved = simplex.poincare_act(P, c)
        worst = max(worst, (U @ w(c) @ U.star()).distance(w(moved)))
    tol = cfg.tolerance("mock_covariance", 1e-12)
    return [_record("mock_covariance", {"cells": mock.n_cells}, n, worst, tol)]


def check_cochain_axioms_mock(cfg: ScenarioConfig) -> List[dict]:
    rng = cfg.rng("cochain_axioms_mock")
    n = cfg.count("cochain_axioms_mock", 8)
    mock = mock_cochain_instance()
    w = mock.as_cochain()
    tag = TestFunctionTag("bump", 0.05)
    triangles = tuple(random_mock_triangle(rng, tag, mock) for _ in range(n))
    pairs = []
    for _ in range(n):
        c1, c2 = mock_disjoint_pair(rng, tag, mock)
        if mock.cells_disjoint(c1, c2):
            pairs.append((c1, c2))
    shifts = tuple(
        PoincareElement.from_translation(FourVector.of(0.0, 0.0, 0.0, 0.0))
        for _ in range(1)
    )
    scenario = CochainScenario(triangles, tuple(pairs), shifts,
                               tolerance=cfg.tolerance("cochain_axioms_mock", 1e-12))
    out = []
    for rec in holonomy.verify_cochain(w, scenario):
        out.append(_record("cochain_axioms_mock", {"property": rec["check"]},
                           rec["samples"], rec["max_violation"], rec["tolerance"]))
    return out


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

CHECKS: Dict[str, Callable[[ScenarioConfig], List[dict]]] = {
    "chain_identities": check_chain_identities,
    "homotopy_identity": check_homotopy_identity,
    "word_reduction": check_word_reduction,
    "geometry_invariants": check_geometry_invariants,
    "support_covariance": check_support_covariance,
    "stokes": check_stokes,
    "cone_equivalence": check_cone_equivalence,
    "primitivity": check_primitivity,
    "closedness": check_closedness,
    "covariance_moving_pole": check_covariance_moving_pole,
    "orientation_reversal": check_orientation_reversal,
    "boundary_independence": check_boundary_independence,
    "gauge_invariance_closed": check_gauge_invariance_closed,
    "gauge_boundary_term": check_gauge_boundary_term,
    "quadrature_convergence": check_quadrature_convergence,
    "potential_connection": check_potential_connection,
    "cochain_roundtrip_em": check_cochain_roundtrip_em,
    "cochain_roundtrip_mock": check_cochain_roundtrip_mock,
    "connection_restores_rep": check_connection_restores_rep,
    "frame_change_transport": check_frame_change_transport,
    "gauge_axioms": check_gauge_axioms,
    "cochain_axioms_em": check_cochain_axioms_em,
    "cochain_axioms_mock": check_cochain_axioms_mock,
    "mock_causality": check_mock_causality,
    "mock_noncommutativity": check_mock_noncommutativity,
    "mock_covariance": check_mock_covariance,
}

SUITES: Dict[str, Tuple[str, ...]] = {
    "all": tuple(sorted(CHECKS)),
    "geometry": ("geometry_invariants",),
    "simplex": ("chain_identities", "homotopy_identity", "support_covariance",
                "orientation_reversal"),
    "loopgroup": ("word_reduction",),
    "holonomy": ("cochain_roundtrip_em", "cochain_roundtrip_mock",
                 "connection_restores_rep", "frame_change_transport", "gauge_axioms",
                 "cochain_axioms_em", "cochain_axioms_mock"),
    "emfield": ("stokes", "cone_equivalence", "primitivity", "closedness",
                "covariance_moving_pole", "orientation_reversal", "boundary_independence",
                "gauge_invariance_closed", "gauge_boundary_term",
                "quadrature_convergence", "potential_connection"),
    "mock": ("mock_causality", "mock_noncommutativity", "mock_covariance"),
}
