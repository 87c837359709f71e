"""Quadrature rules on spheres, geodesic slices and planar regions; cone samplers.

Points of ``C^n`` are stored either as complex arrays of shape ``(N, n)`` or
as real arrays of shape ``(N, 2n)`` laid out as ``(x_1..x_n, y_1..y_n)`` for
``z = x + i y``.  :func:`to_real` / :func:`to_complex` convert between them.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .specfun import gegenbauer

__all__ = [
    "QuadratureRule",
    "ConeSampler",
    "RegionSpec",
    "to_real",
    "to_complex",
    "sphere_area",
    "sphere_quadrature",
    "real_sphere_quadrature",
    "geodesic_quadrature",
    "orthonormal_complement",
    "sample_cone",
    "cone_residual",
    "classify_armitage",
    "ArmitageVerdict",
    "region_measure",
    "disk",
    "rectangle",
    "half_annulus",
    "union",
]


def to_real(z) -> np.ndarray:
    """Complex ``(..., n)`` -> real ``(..., 2n)`` as ``(Re z, Im z)``."""
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def to_complex(x) -> np.ndarray:
    """Real ``(..., 2n)`` -> complex ``(..., n)``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] // 2
    return x[..., :n] + 1j * x[..., n:]


def sphere_area(n: int, r: float = 1.0) -> float:
    """Surface area of ``S_r^{2n-1}`` in ``R^{2n}``: ``2 pi^n / Gamma(n) r^{2n-1}``."""
    return 2.0 * math.pi**n / math.gamma(n) * r ** (2 * n - 1)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights on a manifold, with a stated polynomial exactness."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    total_mass: float
    kind: str = "sphere"
    radius: float | None = None
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.nodes.ndim != 2 or self.nodes.shape[0] != self.weights.shape[0]:
            raise ValueError("nodes must be (N, D) with one weight per node")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def complex_nodes(self) -> np.ndarray:
        return to_complex(self.nodes)

    def integrate(self, values):
        """Weighted sum of ``values`` (first axis indexes nodes)."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def to_csv(self, stream=None) -> str:
        """CSV layout: one node per row, coordinates ``c0..c{D-1}`` then ``weight``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"c{i}" for i in range(self.dim)] + ["weight"])
        for x, wt in zip(self.nodes, self.weights):
            w.writerow([repr(float(v)) for v in x] + [repr(float(wt))])
        text = buf.getvalue()
        if stream is not None:
            stream.write(text)
        return text


# ------------------------------------------------------------------ spheres


def _trapezoid_circle(m: int):
    ang = 2.0 * np.pi * np.arange(m) / m
    return ang, np.full(m, 2.0 * np.pi / m)


def _simplex_rule(n: int, deg: int):
    """Rule on ``{u in R^n_+ : sum u = 1}`` (coordinates ``u_1..u_{n-1}``), exact to ``deg``."""
    if n == 1:
        return np.ones((1, 1)), np.ones(1)
    if n == 2:
        t, w = roots_legendre(deg // 2 + 1)
        u = (t + 1) / 2
        return np.stack([1 - u, u], axis=1), w / 2
    if n == 3:
        # collapsed (Duffy) map s in [0,1], v in [0,1] with Jacobian (1 - s)
        ts, ws = roots_jacobi((deg + 1) // 2 + 1, 1.0, 0.0)  # weight (1-x)^1
        tv, wv = roots_legendre(deg // 2 + 1)
        s = (ts + 1) / 2
        ws = ws / 4  # (1-x)^1 dx -> 2(1-s) * 2 ds
        v = (tv + 1) / 2
        wv = wv / 2
        S, V = np.meshgrid(s, v, indexing="ij")
        W = np.outer(ws, wv)
        u1 = S
        u2 = (1 - S) * V
        u3 = (1 - S) * (1 - V)
        return np.stack([u1.ravel(), u2.ravel(), u3.ravel()], axis=1), W.ravel()
    raise ValueError(f"unsupported complex dimension n={n} (supported: 1, 2, 3)")


def sphere_quadrature(n: int, r: float = 1.0, degree: int = 20, normalized: bool = False) -> QuadratureRule:
    """Product rule on ``S_r^{2n-1}`` exact for polynomials of total degree ``<= degree``.

    Coordinates ``z_j = sqrt(u_j) e^{i phi_j}`` with ``u`` on the simplex: the
    surface measure is ``2^{1-n} du dphi``.  Phases use the trapezoid rule with
    ``degree + 1`` points (exact for trigonometric polynomials of that degree),
    ``u`` uses Gauss rules exact to degree ``degree // 2``.
    """
    if n not in (1, 2, 3):
        raise ValueError(f"unsupported complex dimension n={n} (supported: 1, 2, 3)")
    if degree < 0 or degree > 200:
        raise ValueError("degree must be in [0, 200]")
    if r <= 0:
        raise ValueError("radius must be positive")
    U, wu = _simplex_rule(n, degree // 2)
    ang, wang = _trapezoid_circle(degree + 1)
    m = ang.size
    phase_idx = np.indices((m,) * n).reshape(n, -1).T  # all phase tuples
    phases = ang[phase_idx]  # (m^n, n)
    wphase = np.prod(wang[phase_idx], axis=1)
    Z = np.sqrt(U)[:, None, :] * np.exp(1j * phases)[None, :, :]
    W = wu[:, None] * wphase[None, :] * 2.0 ** (1 - n)
    Z = Z.reshape(-1, n) * r
    W = W.ravel() * r ** (2 * n - 1)
    mass = sphere_area(n, r)
    if normalized:
        W = W / mass
        mass = 1.0
    return QuadratureRule(to_real(Z), W, degree, mass, kind="sphere", radius=r, normalized=normalized)


def real_sphere_quadrature(m: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Recursive Gauss–Jacobi rule on the real sphere ``S^m`` in ``R^{m+1}`` (un-normalised)."""
    if m == 0:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if m == 1:
        k = degree + 1
        ang, w = _trapezoid_circle(k)
        return np.stack([np.cos(ang), np.sin(ang)], axis=1), w
    a = (m - 2) / 2.0
    t, wt = roots_jacobi(degree // 2 + 1, a, a)
    sub_nodes, sub_w = real_sphere_quadrature(m - 1, degree)
    rad = np.sqrt(1 - t**2)
    nodes = np.concatenate(
        [rad[:, None, None] * sub_nodes[None, :, :], np.broadcast_to(t[:, None, None], (t.size, sub_w.size, 1))],
        axis=2,
    ).reshape(-1, m + 1)
    return nodes, np.outer(wt, sub_w).ravel()


def orthonormal_complement(omega) -> np.ndarray:
    """Orthonormal basis of ``omega^perp`` (rows), by pivoted Gram–Schmidt on the standard basis."""
    omega = np.asarray(omega, dtype=float)
    D = omega.size
    basis = [omega / np.linalg.norm(omega)]
    remaining = list(range(D))
    while len(basis) < D:
        Q = np.array(basis)
        best, best_norm, best_vec = None, -1.0, None
        for i in remaining:
            e = np.zeros(D)
            e[i] = 1.0
            v = e - Q.T @ (Q @ e)
            v = v - Q.T @ (Q @ v)  # re-orthogonalise
            nv = np.linalg.norm(v)
            if nv > best_norm:
                best, best_norm, best_vec = i, nv, v
        remaining.remove(best)
        basis.append(best_vec / best_norm)
    return np.array(basis[1:])


def _as_real_unit(omega) -> np.ndarray:
    omega = np.asarray(omega)
    if np.iscomplexobj(omega):
        omega = to_real(omega)
    omega = np.asarray(omega, dtype=float)
    nrm = np.linalg.norm(omega)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"omega must be a unit vector (|omega| = {nrm})")
    return omega


def geodesic_quadrature(omega, t: float, degree: int = 20) -> QuadratureRule:
    """Normalised rule on the slice ``{nu in S^{D-1} : omega . nu = t}``.

    ``omega`` may be a real unit vector in ``R^D`` or a complex unit vector in
    ``C^n`` (then ``D = 2n``).
    """
    if not abs(t) < 1:
        raise ValueError("geodesic slice requires |t| < 1")
    omega = _as_real_unit(omega)
    D = omega.size
    if D < 3:
        raise ValueError("geodesic spheres need ambient dimension >= 3")
    frame = orthonormal_complement(omega)
    sub, w = real_sphere_quadrature(D - 2, degree)
    nodes = t * omega[None, :] + math.sqrt(1 - t * t) * (sub @ frame)
    w = w / w.sum()
    return QuadratureRule(nodes, w, degree, 1.0, kind="geodesic", radius=1.0, normalized=True)


# --------------------------------------------------------------------- cones


@dataclass(frozen=True)
class ConeSampler:
    """Description of a cone to sample.

    kind ``complex_H``: zero set of ``H(z) = a z_1 conj(z_2) + |z|^2`` in ``C^n``.
    kind ``armitage_Ka``: ``{x in R^d : x_1^2 = a^2 |x|^2}``.
    kind ``custom``: user ``generator(rng, count)`` and ``equation(points)``.
    """

    kind: str
    a: complex | float = 4.0
    dimension: int = 2
    budget: int = 64
    seed: int = 0
    generator: Callable | None = field(default=None, compare=False)
    equation: Callable | None = field(default=None, compare=False)
    is_complex: bool = True
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("complex_H", "armitage_Ka", "custom"):
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.kind == "armitage_Ka":
            object.__setattr__(self, "is_complex", False)
        if self.kind == "custom" and (self.generator is None or self.equation is None):
            raise ValueError("custom cones need generator and equation callables")

    def residual(self, points) -> np.ndarray:
        return cone_residual(self, points)


def cone_residual(c: ConeSampler, points) -> np.ndarray:
    """Relative residual of the defining equation, ``|eq(z)| / |z|^2``."""
    pts = np.asarray(points)
    if c.kind == "complex_H":
        z = pts.astype(complex)
        nrm2 = np.sum(np.abs(z) ** 2, axis=-1)
        val = c.a * z[..., 0] * np.conj(z[..., 1]) + nrm2
        return np.abs(val) / nrm2
    if c.kind == "armitage_Ka":
        x = pts.astype(float)
        nrm2 = np.sum(x * x, axis=-1)
        return np.abs(x[..., 0] ** 2 - c.a**2 * nrm2) / nrm2
    return np.abs(np.asarray(c.equation(pts)))


def _sample_complex_H(c: ConeSampler, count: int, rng: np.random.Generator) -> np.ndarray:
    n = c.dimension
    if n < 2:
        raise ValueError("complex_H cones need n >= 2")
    a = complex(c.a)
    amod = abs(a)
    if amod <= 2.0:
        raise ValueError(f"complex_H cone with |a| = {amod} <= 2 has no non-zero real solutions")
    theta_a = np.angle(a)
    pts = []
    # z_2 on a grid of phases (modulus fixed to 1 by homogeneity) and, for
    # n >= 3, the remaining coordinates on a grid of sizes below feasibility.
    phases = 2 * np.pi * (np.arange(count) + 0.5) / count
    branch = np.arange(count) % 2
    rmax2 = amod**2 / 4.0 - 1.0  # max of |z_3..n|^2 when |z_2| = 1
    for i in range(count):
        z2 = np.exp(1j * phases[i])
        if n > 2:
            frac = 0.9 * ((i * 0.6180339887498949) % 1.0)
            tail = rng.normal(size=n - 2) + 1j * rng.normal(size=n - 2)
            tail *= math.sqrt(frac * rmax2) / np.linalg.norm(tail)
        else:
            tail = np.zeros(0, dtype=complex)
        R2 = float(np.sum(np.abs(tail) ** 2))
        disc = amod**2 - 4.0 * (1.0 + R2)
        if disc < 0:
            continue  # complex-infeasible branch
        rho1 = (amod + (1 if branch[i] else -1) * math.sqrt(disc)) / 2.0
        # phase of z_1 so that a z_1 conj(z_2) is real negative
        z1 = rho1 * np.exp(1j * (np.pi - theta_a + phases[i]))
        pts.append(np.concatenate([[z1, z2], tail]))
    return np.array(pts)


def _sample_armitage(c: ConeSampler, count: int, rng: np.random.Generator) -> np.ndarray:
    d = c.dimension
    a = float(c.a)
    if not 0 < a < 1:
        raise ValueError("armitage cone requires 0 < a < 1")
    if d < 2:
        raise ValueError("armitage cone requires d >= 2")
    rest = rng.normal(size=(count, d - 1))
    rest /= np.linalg.norm(rest, axis=1, keepdims=True)
    sign = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
    x1 = sign * a
    return np.concatenate([x1[:, None], math.sqrt(1 - a * a) * rest], axis=1)


def sample_cone(c: ConeSampler, count: int | None = None, rng=None) -> np.ndarray:
    """Points of the cone, normalised to the unit sphere.

    Complex cones return complex arrays ``(count, n)``; real cones real ``(count, d)``.
    """
    count = c.budget if count is None else int(count)
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(c.seed) if rng is None else rng
    if c.kind == "complex_H":
        pts = _sample_complex_H(c, count, rng)
    elif c.kind == "armitage_Ka":
        pts = _sample_armitage(c, count, rng)
    else:
        pts = np.asarray(c.generator(rng, count))
    if pts.shape[0] == 0:
        raise ValueError("cone sampler produced no feasible points")
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    bad = cone_residual(c, pts) > 1e-10
    if np.any(bad):
        raise ValueError(f"{int(bad.sum())} sampled points violate the cone equation")
    return pts


@dataclass(frozen=True)
class ArmitageVerdict:
    k: int
    min_abs_derivative: float | None
    verdict: str  # "holds" | "fails" | "vacuous"


def classify_armitage(a: float, d: int, k_max: int, tol: float = 1e-12) -> list[ArmitageVerdict]:
    """Check ``D^m G_k^{(d-2)/2}(a) != 0`` for ``0 <= m <= k-2``, degree by degree."""
    if not 0 < a < 1:
        raise ValueError("0 < a < 1 required")
    if d < 3:
        raise ValueError("d >= 3 required")
    beta = (d - 2) / 2.0
    out = []
    for k in range(k_max + 1):
        if k < 2:
            out.append(ArmitageVerdict(k, None, "vacuous"))
            continue
        vals = []
        for m in range(k - 1):
            v = abs(gegenbauer(k, beta, a, m))
            scale = max(1.0, float(np.max(np.abs(gegenbauer(k, beta, np.linspace(-1, 1, 41), m)))))
            vals.append((v, scale))
        mn = min(v for v, _ in vals)
        fails = any(v <= tol * s for v, s in vals)
        out.append(ArmitageVerdict(k, mn, "fails" if fails else "holds"))
    return out


# ------------------------------------------------------------------- regions


@dataclass(frozen=True)
class RegionSpec:
    """A bounded region of ``C^n = R^{2n}``.

    kinds: ``disk`` (center, radius), ``rectangle`` (lower, upper corners),
    ``half-annulus`` (center, inner, outer; upper half ``Im >= 0``, ``n = 1``)
    and ``union`` (parts).
    """

    kind: str
    center: tuple = (0.0, 0.0)
    radius: float = 1.0
    inner: float = 0.0
    lower: tuple = ()
    upper: tuple = ()
    parts: tuple = ()

    def __post_init__(self):
        if self.kind not in ("disk", "rectangle", "half-annulus", "union", "empty"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.kind == "disk" and self.radius < 0:
            raise ValueError("disk radius must be >= 0")
        if self.kind == "rectangle":
            if len(self.lower) != len(self.upper) or not self.lower:
                raise ValueError("rectangle needs lower/upper corners of equal length")
            if any(hi < lo for lo, hi in zip(self.lower, self.upper)):
                raise ValueError("rectangle corners must satisfy lower <= upper")
        if self.kind == "half-annulus" and not 0 <= self.inner <= self.radius:
            raise ValueError("half-annulus needs 0 <= inner <= outer")

    @property
    def dim(self) -> int:
        if self.kind == "rectangle":
            return len(self.lower)
        if self.kind == "union":
            return self.parts[0].dim
        return len(self.center)

    def contains(self, points) -> np.ndarray:
        """Membership mask for real points ``(..., 2n)``."""
        p = np.asarray(points, dtype=float)
        if self.kind == "empty":
            return np.zeros(p.shape[:-1], dtype=bool)
        if self.kind == "disk":
            return np.sum((p - np.asarray(self.center)) ** 2, axis=-1) <= self.radius**2
        if self.kind == "rectangle":
            return np.all((p >= np.asarray(self.lower)) & (p <= np.asarray(self.upper)), axis=-1)
        if self.kind == "half-annulus":
            d = p - np.asarray(self.center)
            r2 = np.sum(d**2, axis=-1)
            return (r2 <= self.radius**2) & (r2 >= self.inner**2) & (d[..., 1] >= 0)
        mask = np.zeros(p.shape[:-1], dtype=bool)
        for part in self.parts:
            mask |= part.contains(p)
        return mask

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        if self.kind == "rectangle":
            return np.asarray(self.lower, float), np.asarray(self.upper, float)
        if self.kind in ("disk", "half-annulus"):
            c = np.asarray(self.center, float)
            return c - self.radius, c + self.radius
        if self.kind == "union":
            boxes = [p.bounding_box() for p in self.parts]
            return np.min([b[0] for b in boxes], axis=0), np.max([b[1] for b in boxes], axis=0)
        c = np.asarray(self.center, float)
        return c, c

    def is_disjoint_union(self) -> bool:
        if self.kind != "union":
            return True
        parts = self.parts
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if not _parts_disjoint(parts[i], parts[j]):
                    return False
        return True

    def measure_estimate(self, cells: int = 400) -> tuple[float, float]:
        """``(measure, error bound)``: closed form when available, else a grid count."""
        d = self.dim
        if self.kind == "empty":
            return 0.0, 0.0
        if self.kind == "disk":
            n = d / 2.0
            return math.pi**n / math.gamma(n + 1) * self.radius**d, 0.0
        if self.kind == "rectangle":
            return float(np.prod(np.subtract(self.upper, self.lower))), 0.0
        if self.kind == "half-annulus":
            if d != 2:
                raise ValueError("half-annulus regions are planar (n = 1)")
            return 0.5 * math.pi * (self.radius**2 - self.inner**2), 0.0
        if self.is_disjoint_union():
            vals = [p.measure_estimate(cells) for p in self.parts]
            return float(sum(v for v, _ in vals)), float(sum(e for _, e in vals))
        return _grid_measure(self, cells)

    def quadrature(self, order: int = 40, angular: int | None = None) -> QuadratureRule:
        """Planar (``n = 1``) quadrature rule for integrals over the region."""
        return _region_rule(self, order, angular)


def _parts_disjoint(A: RegionSpec, B: RegionSpec) -> bool:
    la, ua = A.bounding_box()
    lb, ub = B.bounding_box()
    if np.any(ua < lb) or np.any(ub < la):
        return True
    if A.kind == "disk" and B.kind == "disk":
        return float(np.linalg.norm(np.subtract(A.center, B.center))) >= A.radius + B.radius
    return False


def _grid_measure(A: RegionSpec, cells: int) -> tuple[float, float]:
    lo, hi = A.bounding_box()
    d = lo.size
    if d != 2:
        raise ValueError("grid measure fallback is implemented for planar regions")
    hx = (hi - lo) / cells
    xs = lo[0] + (np.arange(cells) + 0.5) * hx[0]
    ys = lo[1] + (np.arange(cells) + 0.5) * hx[1]
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    inside = A.contains(np.stack([X, Y], axis=-1))
    cell = float(np.prod(hx))
    # boundary cells: neighbours disagree
    edge = np.zeros_like(inside)
    edge[:-1] |= inside[:-1] != inside[1:]
    edge[1:] |= inside[:-1] != inside[1:]
    edge[:, :-1] |= inside[:, :-1] != inside[:, 1:]
    edge[:, 1:] |= inside[:, :-1] != inside[:, 1:]
    return float(inside.sum() * cell), float(0.5 * edge.sum() * cell)


def region_measure(A: RegionSpec) -> float:
    """Lebesgue measure of the region (closed form where available)."""
    return A.measure_estimate()[0]


def disk(radius: float = 1.0, center=(0.0, 0.0)) -> RegionSpec:
    return RegionSpec("disk", center=tuple(float(c) for c in center), radius=float(radius))


def rectangle(lower, upper) -> RegionSpec:
    return RegionSpec("rectangle", lower=tuple(map(float, lower)), upper=tuple(map(float, upper)))


def half_annulus(inner: float, outer: float, center=(0.0, 0.0)) -> RegionSpec:
    return RegionSpec("half-annulus", center=tuple(map(float, center)), radius=float(outer), inner=float(inner))


def union(*parts: RegionSpec) -> RegionSpec:
    if not parts:
        return RegionSpec("empty")
    return RegionSpec("union", parts=tuple(parts), center=parts[0].center)


def _polar_rule(center, r_in, r_out, theta0, theta1, order, angular):
    t, w = roots_legendre(order)
    rho = r_in + (r_out - r_in) * (t + 1) / 2
    wr = w * (r_out - r_in) / 2 * rho
    if theta1 - theta0 >= 2 * np.pi - 1e-15:
        ang = theta0 + 2 * np.pi * np.arange(angular) / angular
        wa = np.full(angular, 2 * np.pi / angular)
    else:
        ta, wa = roots_legendre(angular)
        ang = theta0 + (theta1 - theta0) * (ta + 1) / 2
        wa = wa * (theta1 - theta0) / 2
    R, T = np.meshgrid(rho, ang, indexing="ij")
    nodes = np.stack([center[0] + R * np.cos(T), center[1] + R * np.sin(T)], axis=-1).reshape(-1, 2)
    return nodes, np.outer(wr, wa).ravel()


def _region_rule(A: RegionSpec, order: int, angular: int | None) -> QuadratureRule:
    if A.dim != 2:
        raise ValueError("region quadrature is implemented for n = 1 (planar) regions")
    angular = angular or 2 * order
    if A.kind == "disk":
        nodes, w = _polar_rule(A.center, 0.0, A.radius, 0.0, 2 * np.pi, order, angular)
    elif A.kind == "half-annulus":
        nodes, w = _polar_rule(A.center, A.inner, A.radius, 0.0, np.pi, order, angular)
    elif A.kind == "rectangle":
        t, wt = roots_legendre(order)
        xs = A.lower[0] + (A.upper[0] - A.lower[0]) * (t + 1) / 2
        ys = A.lower[1] + (A.upper[1] - A.lower[1]) * (t + 1) / 2
        wx = wt * (A.upper[0] - A.lower[0]) / 2
        wy = wt * (A.upper[1] - A.lower[1]) / 2
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        nodes = np.stack([X, Y], axis=-1).reshape(-1, 2)
        w = np.outer(wx, wy).ravel()
    elif A.kind == "union":
        if not A.is_disjoint_union():
            raise ValueError("quadrature on overlapping unions is not supported; split the region")
        rules = [_region_rule(p, order, angular) for p in A.parts]
        nodes = np.concatenate([r.nodes for r in rules])
        w = np.concatenate([r.weights for r in rules])
    elif A.kind == "empty":
        return QuadratureRule(np.zeros((0, 2)), np.zeros(0), order, 0.0, kind="region")
    else:  # pragma: no cover - guarded by RegionSpec
        raise ValueError(A.kind)
    return QuadratureRule(nodes, w, order, float(np.sum(w)), kind="region")
