"""Bigraded spherical harmonics on ``S^{2n-1}`` and the projections built from them.

A polynomial ``P(z) = sum c_{ab} z^a conj(z)^b`` with ``|a| = p``, ``|b| = q``
is stored as a coefficient vector over an ordered monomial list.  The space
``H_{p,q}`` of harmonic ones is the nullspace of the symbolic Laplacian

    Delta (z^a zbar^b) = 4 sum_j a_j b_j z^{a - e_j} zbar^{b - e_j},

orthonormalised against the (un-normalised) surface measure.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np
from scipy.special import roots_jacobi

from .geometry import QuadratureRule, geodesic_quadrature, sphere_area, sphere_quadrature, to_complex, to_real
from .specfun import chebyshev_t, gegenbauer, generalized_binomial, multi_indices

__all__ = [
    "QuadratureWarning",
    "CalibrationRecord",
    "calibration_log",
    "BigradedPolynomial",
    "HarmonicBasis",
    "SphereFunction",
    "monomials",
    "laplacian_matrix",
    "harmonic_dimension",
    "harmonic_basis",
    "zonal",
    "zonal_constant",
    "project_l",
    "theta_average",
    "project_pq",
    "funk_hecke",
    "funk_hecke_constant",
    "cesaro_weight",
    "geodesic_mean",
]


class QuadratureWarning(UserWarning):
    """Emitted when a quadrature rule is too coarse for the requested integrand."""


@dataclass(frozen=True)
class CalibrationRecord:
    """A numerically calibrated constant and how well it reproduced its defining identity."""

    name: str
    key: tuple
    value: complex
    closed_form: complex | None
    residual: float

    def as_dict(self) -> dict:
        def enc(v):
            if v is None:
                return None
            v = complex(v)
            return [v.real, v.imag] if v.imag else v.real

        return {
            "name": self.name,
            "key": list(self.key),
            "value": enc(self.value),
            "closed_form": enc(self.closed_form),
            "residual": float(self.residual),
        }


_CALIBRATIONS: dict[tuple, CalibrationRecord] = {}


def _record(rec: CalibrationRecord) -> CalibrationRecord:
    _CALIBRATIONS[(rec.name,) + tuple(rec.key)] = rec
    return rec


def calibration_log() -> list[CalibrationRecord]:
    """All constants calibrated so far in this process, in a stable order."""
    return [_CALIBRATIONS[k] for k in sorted(_CALIBRATIONS, key=repr)]


# ----------------------------------------------------------------- polynomials


@lru_cache(maxsize=None)
def monomials(n: int, p: int, q: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Ordered monomial list ``(alpha, beta)`` spanning ``P_{p,q}``."""
    return tuple((a, b) for a in multi_indices(n, p) for b in multi_indices(n, q))


def _powers(z: np.ndarray, kmax: int) -> tuple[np.ndarray, np.ndarray]:
    pw = np.ones((kmax + 1,) + z.shape, dtype=complex)
    for k in range(1, kmax + 1):
        pw[k] = pw[k - 1] * z
    return pw, np.conj(pw)


def _monomial_matrix(z: np.ndarray, mons) -> np.ndarray:
    """Values of each monomial at points ``z`` (N, n) -> (N, len(mons))."""
    if not mons:
        return np.zeros((z.shape[0], 0), dtype=complex)
    kmax = max(max(max(a), max(b)) for a, b in mons)
    pw, cpw = _powers(z, kmax)
    n = z.shape[1]
    out = np.empty((z.shape[0], len(mons)), dtype=complex)
    for i, (a, b) in enumerate(mons):
        v = np.ones(z.shape[0], dtype=complex)
        for j in range(n):
            if a[j]:
                v = v * pw[a[j], :, j]
            if b[j]:
                v = v * cpw[b[j], :, j]
        out[:, i] = v
    return out


def _as_points(z) -> tuple[np.ndarray, bool]:
    z = np.asarray(z)
    single = z.ndim == 1
    z = np.atleast_2d(z)
    if not np.iscomplexobj(z):
        z = z.astype(complex)
    return z, single


@dataclass(frozen=True)
class BigradedPolynomial:
    """``P(z) = sum_{(a,b)} c_{ab} z^a zbar^b`` homogeneous of bidegree ``(p, q)``."""

    n: int
    p: int
    q: int
    coeffs: np.ndarray
    harmonic: bool = False

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (len(monomials(self.n, self.p, self.q)),):
            raise ValueError("coefficient vector does not match the monomial count of P_{p,q}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_dict(cls, n: int, table: Mapping) -> "BigradedPolynomial":
        """Build from ``{(alpha, beta): c}``; the bidegree is read off the keys."""
        keys = list(table)
        if not keys:
            raise ValueError("empty coefficient table")
        p, q = sum(keys[0][0]), sum(keys[0][1])
        mons = monomials(n, p, q)
        index = {m: i for i, m in enumerate(mons)}
        c = np.zeros(len(mons), dtype=complex)
        for (a, b), v in table.items():
            key = (tuple(a), tuple(b))
            if key not in index:
                raise ValueError(f"monomial {key} is not of bidegree ({p}, {q}) in dimension {n}")
            c[index[key]] += v
        return cls(n, p, q, c)

    @property
    def monomials(self):
        return monomials(self.n, self.p, self.q)

    @property
    def degree(self) -> int:
        return self.p + self.q

    def as_dict(self) -> dict:
        return {m: c for m, c in zip(self.monomials, self.coeffs) if c != 0}

    def evaluate(self, z):
        z, single = _as_points(z)
        vals = _monomial_matrix(z, self.monomials) @ self.coeffs
        return complex(vals[0]) if single else vals

    __call__ = evaluate

    def laplacian(self) -> "BigradedPolynomial":
        """Symbolic Euclidean Laplacian ``4 sum_j d_j dbar_j``; bidegree ``(p-1, q-1)``."""
        if self.p == 0 or self.q == 0:
            return BigradedPolynomial(self.n, max(self.p - 1, 0), max(self.q - 1, 0),
                                      np.zeros(len(monomials(self.n, max(self.p - 1, 0), max(self.q - 1, 0)))))
        L = laplacian_matrix(self.n, self.p, self.q)
        return BigradedPolynomial(self.n, self.p - 1, self.q - 1, L @ self.coeffs)

    def is_harmonic(self, tol: float = 1e-12) -> bool:
        lap = self.laplacian().coeffs
        scale = max(1.0, float(np.max(np.abs(self.coeffs), initial=0.0)))
        return bool(np.all(np.abs(lap) <= tol * scale))

    def __add__(self, other: "BigradedPolynomial") -> "BigradedPolynomial":
        if (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise ValueError("can only add polynomials of the same bidegree")
        return BigradedPolynomial(self.n, self.p, self.q, self.coeffs + other.coeffs,
                                  harmonic=self.harmonic and other.harmonic)

    def __mul__(self, s) -> "BigradedPolynomial":
        return BigradedPolynomial(self.n, self.p, self.q, self.coeffs * s, harmonic=self.harmonic)

    __rmul__ = __mul__


@lru_cache(maxsize=None)
def laplacian_matrix(n: int, p: int, q: int) -> np.ndarray:
    """Matrix of the Laplacian ``P_{p,q} -> P_{p-1,q-1}`` in monomial coordinates."""
    src = monomials(n, p, q)
    if p == 0 or q == 0:
        return np.zeros((0, len(src)))
    dst = {m: i for i, m in enumerate(monomials(n, p - 1, q - 1))}
    L = np.zeros((len(dst), len(src)))
    for col, (a, b) in enumerate(src):
        for j in range(n):
            if a[j] and b[j]:
                a2 = a[:j] + (a[j] - 1,) + a[j + 1:]
                b2 = b[:j] + (b[j] - 1,) + b[j + 1:]
                L[dst[(a2, b2)], col] += 4.0 * a[j] * b[j]
    L.setflags(write=False)
    return L


def harmonic_dimension(n: int, p: int, q: int) -> int:
    """``d(p,q) = dim P_{p,q} - dim P_{p-1,q-1}``."""

    def dimP(a, b):
        if a < 0 or b < 0:
            return 0
        return math.comb(n + a - 1, a) * math.comb(n + b - 1, b)

    return dimP(p, q) - dimP(p - 1, q - 1)


@dataclass(frozen=True)
class HarmonicBasis:
    """Orthonormal basis ``Y_1..Y_d`` of ``H_{p,q}`` (columns of ``coefficients``)."""

    n: int
    p: int
    q: int
    coefficients: np.ndarray  # (len(monomials), d)

    @property
    def dim(self) -> int:
        return self.coefficients.shape[1]

    def __len__(self) -> int:
        return self.dim

    @property
    def elements(self) -> list[BigradedPolynomial]:
        return [BigradedPolynomial(self.n, self.p, self.q, self.coefficients[:, j], harmonic=True)
                for j in range(self.dim)]

    def __getitem__(self, j) -> BigradedPolynomial:
        return self.elements[j]

    def evaluate(self, z) -> np.ndarray:
        """Values ``Y_j(z)``; shape ``(N, d)``."""
        z, _ = _as_points(z)
        return _monomial_matrix(z, monomials(self.n, self.p, self.q)) @ self.coefficients

    def combination(self, c) -> BigradedPolynomial:
        return BigradedPolynomial(self.n, self.p, self.q, self.coefficients @ np.asarray(c, dtype=complex),
                                  harmonic=True)

    def to_csv(self, stream=None) -> str:
        """CSV layout ``p,q,j,alpha,beta,re,im`` (multi-indices joined by ';')."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "q", "j", "alpha", "beta", "re", "im"])
        mons = monomials(self.n, self.p, self.q)
        for j in range(self.dim):
            for (a, b), c in zip(mons, self.coefficients[:, j]):
                if c != 0:
                    w.writerow([self.p, self.q, j, ";".join(map(str, a)), ";".join(map(str, b)),
                                repr(float(c.real)), repr(float(c.imag))])
        text = buf.getvalue()
        if stream is not None:
            stream.write(text)
        return text


@lru_cache(maxsize=None)
def harmonic_basis(n: int, p: int, q: int) -> HarmonicBasis:
    """Orthonormal basis of ``H_{p,q}`` with respect to un-normalised ``sigma`` on ``S^{2n-1}``."""
    if n < 1 or p < 0 or q < 0:
        raise ValueError("need n >= 1 and p, q >= 0")
    if n == 1 and min(p, q) > 0:
        raise ValueError("for n = 1 only H_{p,0} and H_{0,q} are non-trivial")
    mons = monomials(n, p, q)
    L = laplacian_matrix(n, p, q)
    if L.shape[0] == 0:
        null = np.eye(len(mons))
    else:
        _, s, vh = np.linalg.svd(L)
        thr = 1e-10 * (s[0] if s.size else 1.0)
        rank = int(np.sum(s > thr))
        null = vh[rank:].conj().T
    rule = sphere_quadrature(n, 1.0, 2 * (p + q))
    vals = _monomial_matrix(rule.complex_nodes, mons) @ null
    G = (vals.conj().T * rule.weights) @ vals
    chol = np.linalg.cholesky(G)
    coef = null @ np.linalg.inv(chol).conj().T
    coef = np.where(np.abs(coef) < 1e-14, 0.0, coef)  # tidy exact zeros for export
    coef.setflags(write=False)
    basis = HarmonicBasis(n, p, q, coef)
    if basis.dim != harmonic_dimension(n, p, q):  # pragma: no cover - structural guard
        raise RuntimeError("harmonic basis dimension mismatch")
    return basis


def bidegrees(L: int) -> list[tuple[int, int]]:
    """All ``(p, q)`` with ``p + q <= L`` ordered by degree, then descending ``p``."""
    return [(l - q, q) for l in range(L + 1) for q in range(l + 1)]


# ------------------------------------------------------------ sphere functions


class SphereFunction:
    """A function on ``S^{2n-1}``: bigraded coefficients, a callable, or samples on a rule.

    ``coeffs`` maps ``(p, q)`` to the coefficient vector in the orthonormal
    basis :func:`harmonic_basis` ``(n, p, q)``.
    """

    def __init__(self, n: int, band_limit: int, coeffs: Mapping | None = None,
                 func: Callable | None = None, rule: QuadratureRule | None = None,
                 samples=None):
        if coeffs is None and func is None and samples is None:
            raise ValueError("a SphereFunction needs coefficients, a callable or samples")
        self.n = int(n)
        self.band_limit = int(band_limit)
        self.coeffs = None
        if coeffs is not None:
            self.coeffs = {}
            for (p, q), c in coeffs.items():
                if p + q > self.band_limit:
                    raise ValueError(f"class ({p},{q}) exceeds band limit {band_limit}")
                c = np.array(c, dtype=complex)
                c.setflags(write=False)
                self.coeffs[(int(p), int(q))] = c
        self.func = func
        self.rule = rule
        if samples is not None:
            samples = np.array(samples, dtype=complex)
            samples.setflags(write=False)
            if rule is None or samples.shape != (rule.size,):
                raise ValueError("samples must come with the rule they were taken on")
        self.samples = samples

    # constructors ---------------------------------------------------------
    @classmethod
    def from_coefficients(cls, n: int, coeffs: Mapping) -> "SphereFunction":
        L = max((p + q for p, q in coeffs), default=0)
        return cls(n, L, coeffs=coeffs)

    @classmethod
    def from_callable(cls, n: int, func: Callable, band_limit: int) -> "SphereFunction":
        return cls(n, band_limit, func=func)

    @classmethod
    def from_samples(cls, rule: QuadratureRule, values, band_limit: int) -> "SphereFunction":
        n = rule.dim // 2
        return cls(n, band_limit, rule=rule, samples=values)

    @classmethod
    def from_polynomial(cls, P: BigradedPolynomial) -> "SphereFunction":
        return cls.from_callable(P.n, P.evaluate, P.degree)

    @classmethod
    def random(cls, n: int, L: int, rng: np.random.Generator, classes=None) -> "SphereFunction":
        """Random complex coefficients on every class ``p + q <= L`` (or the listed classes)."""
        classes = classes if classes is not None else bidegrees(L)
        coeffs = {}
        for p, q in classes:
            if n == 1 and min(p, q) > 0:
                continue
            d = harmonic_dimension(n, p, q)
            coeffs[(p, q)] = rng.normal(size=d) + 1j * rng.normal(size=d)
        return cls(n, L, coeffs=coeffs)

    # evaluation -------------------------------------------------------------
    @property
    def has_evaluator(self) -> bool:
        return self.coeffs is not None or self.func is not None

    def evaluate(self, z):
        z, single = _as_points(z)
        if self.coeffs is not None:
            out = np.zeros(z.shape[0], dtype=complex)
            for (p, q), c in self.coeffs.items():
                out += harmonic_basis(self.n, p, q).evaluate(z) @ c
        elif self.func is not None:
            out = np.asarray(self.func(z), dtype=complex).reshape(z.shape[0])
        else:
            raise ValueError("sample-backed SphereFunction cannot be evaluated off its rule")
        return complex(out[0]) if single else out

    __call__ = evaluate

    def samples_on(self, rule: QuadratureRule) -> np.ndarray:
        if self.samples is not None and rule is self.rule:
            return self.samples
        return self.evaluate(rule.complex_nodes / (rule.radius or 1.0))

    def coefficients(self, rule: QuadratureRule | None = None) -> dict:
        """Bigraded coefficients (stored, or computed by quadrature)."""
        if self.coeffs is not None:
            return dict(self.coeffs)
        rule = rule or self.rule or sphere_quadrature(self.n, 1.0, 2 * self.band_limit)
        vals = self.samples_on(rule)
        out = {}
        for p, q in bidegrees(self.band_limit):
            if self.n == 1 and min(p, q) > 0:
                continue
            Y = harmonic_basis(self.n, p, q).evaluate(rule.complex_nodes)
            out[(p, q)] = (Y.conj().T * rule.weights) @ vals
        return out

    def _combine(self, other: "SphereFunction", sign: float) -> "SphereFunction":
        L = max(self.band_limit, other.band_limit)
        if self.coeffs is not None and other.coeffs is not None:
            out = dict(self.coeffs)
            for k, c in other.coeffs.items():
                out[k] = out[k] + sign * c if k in out else sign * c
            return SphereFunction(self.n, L, coeffs=out)
        a, b = self, other
        return SphereFunction(self.n, L, func=lambda z: a.evaluate(z) + sign * b.evaluate(z))

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, s):
        if self.coeffs is not None:
            return SphereFunction(self.n, self.band_limit, coeffs={k: s * c for k, c in self.coeffs.items()})
        f = self
        return SphereFunction(self.n, self.band_limit, func=lambda z: s * f.evaluate(z))

    __rmul__ = __mul__


# -------------------------------------------------------------- zonal harmonics


def _unit_real(v) -> np.ndarray:
    v = np.asarray(v)
    if np.iscomplexobj(v):
        v = to_real(v)
    return np.asarray(v, dtype=float)


def _profile(l: int, n: int, t):
    """``G_l^{n-1}`` for ``n >= 2`` and ``T_l`` on the circle."""
    return chebyshev_t(l, t) if n == 1 else gegenbauer(l, n - 1, t)


def _random_harmonic(n: int, l: int, rng: np.random.Generator) -> SphereFunction:
    classes = [(l - q, q) for q in range(l + 1) if not (n == 1 and min(l - q, q) > 0)]
    return SphereFunction.random(n, l, rng, classes=classes)


def _random_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


@lru_cache(maxsize=None)
def zonal_constant(l: int, d: int) -> float:
    """Constant ``c_{l,d}`` with ``Z^{(l)}_xi(eta) = c_{l,d} G_l(xi . eta)``, fixed by reproduction.

    Calibrated on one random degree-``l`` harmonic; a second random harmonic is
    used to measure the residual that is logged.
    """
    if d % 2 or d < 2:
        raise ValueError("zonal harmonics are provided on spheres S^{2n-1} (even ambient dimension)")
    n = d // 2
    rng = np.random.default_rng(1000 + 97 * l + d)
    rule = sphere_quadrature(n, 1.0, 2 * l + 2)
    Zc = rule.complex_nodes
    X = rule.nodes

    def reproduce(Y: SphereFunction, xi):
        t = np.clip(X @ to_real(xi), -1, 1)
        integral = rule.integrate(_profile(l, n, t) * Y.evaluate(Zc))
        return integral, Y.evaluate(xi)

    Y = _random_harmonic(n, l, rng)
    xi = _random_unit(n, rng)
    integral, target = reproduce(Y, xi)
    c = complex(target / integral)
    Y2 = _random_harmonic(n, l, rng)
    xi2 = _random_unit(n, rng)
    integral2, target2 = reproduce(Y2, xi2)
    residual = abs(c * integral2 - target2) / abs(target2)
    dimH = sum(harmonic_dimension(n, l - q, q) for q in range(l + 1) if not (n == 1 and min(l - q, q) > 0))
    closed = dimH / sphere_area(n) / float(_profile(l, n, 1.0))
    _record(CalibrationRecord("zonal_constant", (l, d), c.real, closed, residual))
    return c.real


def zonal(l: int, d: int, xi, eta):
    """Zonal harmonic ``Z^{(l)}_xi(eta)`` of the un-normalised measure on ``S^{d-1}``.

    ``xi`` and ``eta`` may be complex ``(n,)`` / ``(N, n)`` or real ``(d,)`` / ``(N, d)``.
    """
    x = _unit_real(xi)
    e = _unit_real(eta)
    if x.shape[-1] != d or e.shape[-1] != d:
        raise ValueError("vector dimension does not match d")
    t = np.clip(np.sum(x * e, axis=-1), -1.0, 1.0)
    val = zonal_constant(l, d) * np.asarray(_profile(l, d // 2, t))
    return float(val) if np.ndim(val) == 0 else val


def _rule_for(f: SphereFunction, degree: int) -> QuadratureRule:
    if f.samples is not None and not f.has_evaluator:
        if f.rule.exactness_degree < degree:
            warnings.warn(
                f"rule exactness {f.rule.exactness_degree} < required {degree}; projection is approximate",
                QuadratureWarning,
                stacklevel=3,
            )
        return f.rule
    return sphere_quadrature(f.n, 1.0, degree)


def project_l(f: SphereFunction, l: int, xi, rule: QuadratureRule | None = None):
    """``Pi_l f(xi) = int Z^{(l)}_xi(eta) f(eta) d sigma(eta)``; ``xi`` a point or ``(N, n)`` array."""
    need = f.band_limit + l
    if rule is None:
        rule = _rule_for(f, need)
    elif rule.exactness_degree < need:
        warnings.warn(f"rule exactness {rule.exactness_degree} < required {need}", QuadratureWarning,
                      stacklevel=2)
    xi_arr, single = _as_points(xi)
    vals = f.samples_on(rule)
    t = np.clip(to_real(xi_arr) @ rule.nodes.T, -1.0, 1.0)  # (M, N)
    Z = zonal_constant(l, 2 * f.n) * np.asarray(_profile(l, f.n, t))
    out = Z @ (rule.weights * vals)
    return complex(out[0]) if single else out


def theta_average(f: SphereFunction, s: int, z, n_theta: int) -> np.ndarray:
    """``(1/T) sum_m f(e^{i theta_m} z) e^{-i s theta_m}`` on a uniform ``T``-point grid."""
    z, single = _as_points(z)
    thetas = 2 * np.pi * np.arange(n_theta) / n_theta
    acc = np.zeros(z.shape[0], dtype=complex)
    for th in thetas:
        acc += f.evaluate(np.exp(1j * th) * z) * np.exp(-1j * s * th)
    acc /= n_theta
    return complex(acc[0]) if single else acc


def project_pq(f: SphereFunction, p: int, q: int, n_theta: int | None = None) -> SphereFunction:
    """The ``H_{p,q}`` component of a band-limited ``f``.

    The class ``p - q`` is isolated by averaging ``f(e^{i theta} .)`` against
    ``e^{-i(p-q) theta}``; the degree is then isolated by the inner products
    with the orthonormal basis of ``H_{p,q}``.
    """
    L = f.band_limit
    n_theta = 4 * L + 5 if n_theta is None else int(n_theta)
    if n_theta < 2 * L + 1:
        raise ValueError(f"theta grid of {n_theta} points aliases band limit {L} (need >= {2 * L + 1})")
    if not f.has_evaluator:
        raise ValueError("project_pq needs a SphereFunction that can be evaluated at rotated points")
    if p + q > L or (f.n == 1 and min(p, q) > 0):
        d = 0 if (f.n == 1 and min(p, q) > 0) else harmonic_dimension(f.n, p, q)
        return SphereFunction(f.n, p + q, coeffs={(p, q): np.zeros(d)})
    rule = sphere_quadrature(f.n, 1.0, L + p + q)
    fs = theta_average(f, p - q, rule.complex_nodes, n_theta)
    Y = harmonic_basis(f.n, p, q).evaluate(rule.complex_nodes)
    c = (Y.conj().T * rule.weights) @ fs
    return SphereFunction(f.n, p + q, coeffs={(p, q): c})


# ----------------------------------------------------------------- Funk–Hecke


def _jacobi_weight_rule(n: int, points: int = 120):
    a = (2 * n - 3) / 2.0
    return roots_jacobi(points, a, a)


@lru_cache(maxsize=None)
def funk_hecke_constant(l: int, n: int) -> float:
    """``alpha_l`` in ``C_l = alpha_l int F G_l^{n-1} (1-t^2)^{(2n-3)/2} dt``, calibrated.

    Calibration uses ``F = G_l^{n-1}`` itself, a random harmonic and a random
    pole; the closed form ``sigma(S^{2n-2}) / G_l^{n-1}(1)`` is logged next to it.
    """
    rng = np.random.default_rng(2000 + 31 * l + n)
    rule = sphere_quadrature(n, 1.0, 2 * l + 2)
    t_nodes, t_w = _jacobi_weight_rule(n, l + 4)
    norm = float(np.sum(t_w * np.asarray(_profile(l, n, t_nodes)) ** 2))

    def ratio(Y, xi):
        t = np.clip(rule.nodes @ to_real(xi), -1, 1)
        return rule.integrate(np.asarray(_profile(l, n, t)) * Y.evaluate(rule.complex_nodes)) / Y.evaluate(xi)

    r1 = ratio(_random_harmonic(n, l, rng), _random_unit(n, rng))
    r2 = ratio(_random_harmonic(n, l, rng), _random_unit(n, rng))
    alpha = complex(r1).real / norm
    m = 2 * n - 2
    area = 2 * math.pi ** ((m + 1) / 2) / math.gamma((m + 1) / 2)
    closed = area / float(_profile(l, n, 1.0))
    _record(CalibrationRecord("funk_hecke_alpha", (l, n), alpha, closed, abs(r1 - r2) / abs(r1)))
    return alpha


def funk_hecke(F: Callable, l: int, n: int, points: int = 120) -> float:
    """Funk–Hecke multiplier: ``int F(xi.eta) Y(eta) d sigma(eta) = C_l Y(xi)`` for ``Y in H_l``."""
    t, w = _jacobi_weight_rule(n, points)
    val = float(np.sum(w * np.asarray(F(t), dtype=float) * np.asarray(_profile(l, n, t))))
    return funk_hecke_constant(l, n) * val


def cesaro_weight(l: int, m: int, delta: float, n: int | None = None) -> float:
    """``A_l^m(delta) = binom(m - l + delta, delta) / binom(m + delta, delta)``."""
    if l < 0 or m < 0:
        raise ValueError("l and m must be non-negative")
    if l > m:
        raise ValueError("Cesaro weight needs l <= m")
    if n is not None and not delta > n - 1:
        raise ValueError(f"delta must exceed n - 1 = {n - 1}")
    return generalized_binomial(m - l + delta, m - l) / generalized_binomial(m + delta, m)


def geodesic_mean(f: SphereFunction, omega, t: float, degree: int | None = None) -> complex:
    """Mean of ``f`` over ``{nu : omega . nu = t}`` with the normalised measure."""
    degree = f.band_limit + 2 if degree is None else degree
    rule = geodesic_quadrature(omega, t, degree)
    return complex(rule.integrate(f.evaluate(rule.complex_nodes)))
