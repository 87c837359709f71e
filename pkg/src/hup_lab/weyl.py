"""Weyl transform in the Hermite basis, the projections E_A and F_N, and the
Hilbert–Schmidt diagnostics of ``E_A F_N`` (all for ``n = 1``).

Grid functions live on a uniform lattice ``x, y in h * {-J..J}``.  The Weyl
transform ``W_lam(g) = int g(w) pi_lam(w) dw`` is an integral operator with kernel

    K(xi, eta) = int g(x, eta - xi) exp(i lam x (xi + eta) / 2) dx,

which we sample on a ``xi``-lattice sharing the grid step, so that
``eta - xi`` always falls on the ``y``-lattice.  Matrix entries are then
``W[beta, alpha] = <W phi_alpha, phi_beta> = sum K(xi, eta) phi_alpha(eta) phi_beta(xi)``.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import RegionSpec, region_measure
from .harmonics import QuadratureWarning
from .specfun import hermite_functions_1d
from .transforms import schrodinger_elements

__all__ = [
    "GridSpec",
    "GridFunction",
    "WeylMatrix",
    "HSReport",
    "ProbeReport",
    "SAPReport",
    "fourier_wigner",
    "weyl_transform",
    "range_index_convention",
    "special_hermite_coefficients",
    "synthesize",
    "random_symbol",
    "project_EA",
    "project_FN",
    "kernel_K",
    "basis_gram",
    "hs_identity",
    "annihilation_probe",
    "sap_ratio",
    "sap_estimate",
]

TWO_PI = 2.0 * math.pi


# --------------------------------------------------------------------- grids


@dataclass(frozen=True)
class GridSpec:
    """Uniform square lattice ``h * {-J..J}`` in both ``x`` and ``y``."""

    R: float = 18.0
    step: float = 0.125

    @property
    def J(self) -> int:
        return int(round(self.R / self.step))

    @property
    def axis(self) -> np.ndarray:
        return self.step * np.arange(-self.J, self.J + 1)

    @property
    def shape(self) -> tuple[int, int]:
        m = 2 * self.J + 1
        return (m, m)

    @property
    def cell(self) -> float:
        return self.step**2

    def points(self) -> np.ndarray:
        """Complex points ``x + i y`` with shape ``(Nx, Ny)``."""
        ax = self.axis
        return ax[:, None] + 1j * ax[None, :]

    def real_points(self) -> np.ndarray:
        ax = self.axis
        X, Y = np.meshgrid(ax, ax, indexing="ij")
        return np.stack([X, Y], axis=-1)


@dataclass(frozen=True)
class GridFunction:
    """Samples ``values[ix, iy] = g(x_ix + i y_iy)`` on a :class:`GridSpec`."""

    values: np.ndarray
    grid: GridSpec
    support: RegionSpec | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, func, grid: GridSpec, support: RegionSpec | None = None) -> "GridFunction":
        vals = np.asarray(func(grid.points()), dtype=complex)
        if support is not None:
            vals = np.where(support.contains(grid.real_points()), vals, 0.0)
        return cls(vals, grid, support)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "GridFunction":
        return cls(np.zeros(grid.shape), grid)

    def inner(self, other: "GridFunction") -> complex:
        return complex(np.sum(self.values * np.conj(other.values)) * self.grid.cell)

    def norm(self) -> float:
        return math.sqrt(max(self.inner(self).real, 0.0))

    def support_consistent(self, tol: float = 1e-14) -> bool:
        if self.support is None:
            return True
        outside = ~self.support.contains(self.grid.real_points())
        return bool(np.all(np.abs(self.values[outside]) <= tol))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.values + other.values, self.grid)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.values - other.values, self.grid)

    def __mul__(self, s) -> "GridFunction":
        return GridFunction(self.values * s, self.grid, self.support)

    __rmul__ = __mul__


@dataclass(frozen=True)
class WeylMatrix:
    """Truncated ``W_lam(g)``: ``entries[beta, alpha] = <W phi_alpha, phi_beta>``, ``0 <= alpha, beta <= M``."""

    M: int
    entries: np.ndarray
    lam: float = 1.0
    kernel_hs_sq: float = 0.0  # int int |K|^2 over the sampled window
    tail_estimate: float = 0.0  # HS^2 mass of the kernel not captured by the truncation

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    @property
    def tail_fraction(self) -> float:
        return self.tail_estimate / self.kernel_hs_sq if self.kernel_hs_sq > 0 else 0.0

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)

    def to_text(self, stream=None, tol: float = 0.0) -> str:
        """Text dump ``row col re im`` (one entry per line; header comment)."""
        lines = [f"# WeylMatrix M={self.M} lam={self.lam!r} rows=range(beta) cols=alpha"]
        for (i, j), v in np.ndenumerate(self.entries):
            if abs(v) > tol:
                lines.append(f"{i} {j} {float(v.real)!r} {float(v.imag)!r}")
        text = "\n".join(lines) + "\n"
        if stream is not None:
            stream.write(text)
        return text


# ------------------------------------------------------------- Fourier–Wigner


def fourier_wigner(alpha: int, beta: int, z, lam: float = 1.0):
    """``V(z) = (2 pi)^{-1/2} <pi_lam(z) phi_alpha^lam, phi_beta^lam>`` (``n = 1``)."""
    z_arr = np.asarray(z, dtype=complex)
    flat = z_arr.ravel()
    E = schrodinger_elements(flat, [int(alpha)], int(beta), lam)[:, 0, int(beta)]
    out = E.reshape(z_arr.shape) / math.sqrt(TWO_PI)
    return complex(out) if out.ndim == 0 else out


# ----------------------------------------------------------- Weyl transform


def _xi_lattice(M: int, grid: GridSpec, lam: float) -> np.ndarray:
    half = (math.sqrt(2 * M + 1) + 8.0) / math.sqrt(abs(lam))
    A = int(math.ceil(half / grid.step))
    return np.arange(-A, A + 1)


def _scaled_hermite(M: int, x: np.ndarray, lam: float) -> np.ndarray:
    s = math.sqrt(abs(lam))
    return abs(lam) ** 0.25 * hermite_functions_1d(M, s * x)


def weyl_transform(g: GridFunction, M: int, lam: float = 1.0, tail_warn: float = 1e-6) -> WeylMatrix:
    """Truncated Weyl transform of a grid function via its integral kernel."""
    if lam == 0:
        raise ValueError("lam must be non-zero")
    grid = g.grid
    h = grid.step
    J = grid.J
    x = grid.axis
    a_idx = _xi_lattice(M, grid, lam)
    A = a_idx[-1]
    nA = a_idx.size
    Ea = np.exp(1j * lam * np.outer(x, a_idx * h))  # (Nx, nA)
    K = np.zeros((nA, nA), dtype=complex)
    vals = g.values
    for d in range(-min(2 * A, J), min(2 * A, J) + 1):
        col = vals[:, d + J]
        if not np.any(col):
            continue
        v = col * np.exp(0.5j * lam * x * d * h)
        row = (v @ Ea) * h  # value for every a; need a and a+d inside the window
        lo = max(-A, -A - d)
        hi = min(A, A - d)
        ia = np.arange(lo, hi + 1)
        K[ia + A, ia + d + A] = row[ia + A]
    Phi = _scaled_hermite(M, a_idx * h, lam).T  # (nA, M+1)
    entries = (Phi.T @ K @ Phi) * h * h
    kernel_sq = float(np.sum(np.abs(K) ** 2) * h * h)
    tail = max(kernel_sq - float(np.sum(np.abs(entries) ** 2)), 0.0)
    W = WeylMatrix(M, entries, lam, kernel_sq, tail)
    if kernel_sq > 0 and tail > tail_warn * kernel_sq:
        warnings.warn(f"Weyl truncation at M={M} discards {tail / kernel_sq:.2e} of the HS mass",
                      QuadratureWarning, stacklevel=2)
    return W


@lru_cache(maxsize=None)
def range_index_convention() -> str:
    """Which index of ``phi_{alpha beta}`` is the range of ``W(phi_{alpha beta})``.

    Determined by transforming ``phi_{(0),(1)}`` and checking whether the left
    singular vector lies along ``phi_0`` (``'first'``) or ``phi_1`` (``'second'``).
    """
    grid = GridSpec(10.0, 0.125)
    g = GridFunction(fourier_wigner(0, 1, grid.points()), grid)
    W = weyl_transform(g, 4)
    u, s, _ = np.linalg.svd(W.entries)
    lead = np.abs(u[:, 0])
    if lead[0] > 1 - 1e-8:
        return "first"
    if lead[1] > 1 - 1e-8:
        return "second"
    raise RuntimeError("could not pin the range index of W(phi_{alpha beta})")  # pragma: no cover


def special_hermite_coefficients(W: WeylMatrix) -> np.ndarray:
    """Coefficients ``c[alpha, beta]`` of ``g = sum c phi_{alpha beta}`` from ``W(g)`` (``lam = 1``).

    Uses ``W(phi_{alpha beta}) = (2 pi)^{1/2} (-1)^{alpha+beta} E_{r d}`` with the
    range index ``r`` pinned by :func:`range_index_convention`.
    """
    if W.lam != 1.0:
        raise ValueError("special Hermite coefficients are defined for lam = 1")
    idx = np.arange(W.M + 1)
    sign = (-1.0) ** (idx[:, None] + idx[None, :])
    mat = W.entries if range_index_convention() == "first" else W.entries.T
    return mat * sign / math.sqrt(TWO_PI)


def synthesize(coeffs, grid: GridSpec) -> GridFunction:
    """``g = sum_{alpha, beta} c[alpha, beta] phi_{alpha beta}`` sampled on the grid (``lam = 1``).

    ``g(x + i y) = (2 pi)^{-1/2} e^{i x y / 2} sum_xi e^{i x xi} G_y(xi) h`` with
    ``G_y(xi) = sum c[alpha, beta] h_alpha(xi + y) h_beta(xi)``.
    """
    c = np.asarray(coeffs, dtype=complex)
    K = max(c.shape) - 1
    c = np.pad(c, ((0, K + 1 - c.shape[0]), (0, K + 1 - c.shape[1])))
    h = grid.step
    J = grid.J
    a_idx = _xi_lattice(K, grid, 1.0)
    A = a_idx[-1]
    ext = np.arange(-A - J, A + J + 1)
    Hext = hermite_functions_1d(K, ext * h)  # (K+1, len(ext))
    Hxi = Hext[:, J:J + 2 * A + 1]  # lattice points a in [-A, A]
    CH = c @ Hxi  # (K+1 alpha, nA): sum_beta c[alpha,beta] h_beta(xi)
    x = grid.axis
    E = np.exp(1j * np.outer(x, a_idx * h)) * h  # (Nx, nA)
    vals = np.empty(grid.shape, dtype=complex)
    for jy in range(-J, J + 1):
        shifted = Hext[:, J + jy:J + jy + 2 * A + 1]  # h_alpha(xi + y)
        G = np.sum(shifted * CH, axis=0)
        vals[:, jy + J] = np.exp(0.5j * x * jy * h) * (E @ G)
    return GridFunction(vals / math.sqrt(TWO_PI), grid)


def random_symbol(band: int, grid: GridSpec, rng: np.random.Generator) -> tuple[GridFunction, np.ndarray]:
    """A random unit-norm combination of ``phi_{alpha beta}``, ``alpha, beta <= band``."""
    c = rng.normal(size=(band + 1, band + 1)) + 1j * rng.normal(size=(band + 1, band + 1))
    c /= np.linalg.norm(c)
    return synthesize(c, grid), c


# ------------------------------------------------------------- projections


def project_EA(g: GridFunction, A: RegionSpec) -> GridFunction:
    """``E_A g = chi_A g``."""
    mask = A.contains(g.grid.real_points())
    return GridFunction(np.where(mask, g.values, 0.0), g.grid, A)


def project_FN(g: GridFunction, N: int, M: int) -> GridFunction:
    """``F_N g``: keep the special Hermite coefficients whose range index is below ``N``."""
    if not 0 <= N <= M + 1:
        raise ValueError("need 0 <= N <= M + 1")
    c = special_hermite_coefficients(weyl_transform(g, M, tail_warn=np.inf))
    kept = np.zeros_like(c)
    kept[:N, :] = c[:N, :]
    return synthesize(kept, g.grid)


def kernel_K(z, w, A: RegionSpec, N: int):
    """Kernel of ``E_A F_N``: ``(2 pi)^{-1} chi_A(z) e^{-(i/2) Im(w conj z)} sum_{j<N} <pi(w - z) phi_j, phi_j>``."""
    z_arr, w_arr = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
    shape = z_arr.shape
    zf, wf = z_arr.ravel(), w_arr.ravel()
    inside = A.contains(np.stack([zf.real, zf.imag], axis=-1))
    out = np.zeros(zf.size, dtype=complex)
    if N > 0 and np.any(inside):
        zi, wi = zf[inside], wf[inside]
        E = schrodinger_elements(wi - zi, list(range(N)), N - 1)
        tr = np.einsum("pjj->p", E)
        out[inside] = np.exp(-0.5j * np.imag(wi * np.conj(zi))) * tr / TWO_PI
    out = out.reshape(shape)
    return complex(out) if out.ndim == 0 else out


# ----------------------------------------------------- Hilbert–Schmidt tools


def _region_rule(A: RegionSpec, M: int, order: int | None = None):
    if order is None:
        # Hermite functions of degree <= M oscillate at frequency ~ sqrt(2M+1);
        # scale the Gauss order with the region's extent.
        lo, hi = A.bounding_box()
        extent = float(np.max(np.asarray(hi) - np.asarray(lo)))
        order = max(24 + M // 2, int(extent * (math.sqrt(2 * M + 2) + 2) / 2) + 24)
    return A.quadrature(order, angular=2 * M + 16)


def basis_gram(A: RegionSpec, alphas, M: int, order: int | None = None) -> np.ndarray:
    """Gram matrix on ``A`` of ``{phi_{alpha beta} : alpha in alphas, beta <= M}`` (alpha-major)."""
    if A.kind == "empty":
        k = len(alphas) * (M + 1)
        return np.zeros((k, k), dtype=complex)
    rule = _region_rule(A, M, order)
    Z = rule.complex_nodes[:, 0]
    E = schrodinger_elements(Z, list(alphas), M) / math.sqrt(TWO_PI)  # (P, len(alphas), M+1)
    Phi = E.reshape(Z.size, -1)
    return (Phi.conj().T * rule.weights) @ Phi


@dataclass(frozen=True)
class HSReport:
    computed: float
    predicted: float
    rel_err: float
    tail_bound: float
    kernel_route: float | None
    kernel_rel_diff: float | None
    truncation_dominated: bool
    N: int
    M: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)

    def to_csv(self, stream=None) -> str:
        """CSV layout ``quantity,value``, one field per row."""
        return _write_csv([("quantity", "value")] + [(k, repr(v)) for k, v in self.as_dict().items()], stream)


def _write_csv(rows, stream=None) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def _kernel_route(A: RegionSpec, N: int, R_u: float = 11.0, h_u: float = 0.2, order: int = 6) -> float:
    rule = A.quadrature(order, angular=8)
    ax = h_u * np.arange(-int(round(R_u / h_u)), int(round(R_u / h_u)) + 1)
    U = (ax[:, None] + 1j * ax[None, :]).ravel()
    total = 0.0
    for z, wz in zip(rule.complex_nodes[:, 0], rule.weights):
        K = kernel_K(z, z + U, A, N)
        total += wz * float(np.sum(np.abs(K) ** 2)) * h_u * h_u
    return total


def hs_identity(A: RegionSpec, N: int, M: int, kernel_route: bool = True, tolerance: float = 0.02) -> HSReport:
    """``||E_A F_N||_HS^2`` by summing ``||E_A b||^2`` over the Hermite-truncated basis of ``R(F_N)``,
    compared with ``(2 pi)^{-1} m(A) N``; optionally also through the kernel."""
    predicted = region_measure(A) * N / TWO_PI
    if A.kind == "empty" or N == 0:
        return HSReport(0.0, predicted, 0.0, 0.0, 0.0 if kernel_route else None, 0.0 if kernel_route else None,
                        False, N, M)
    extra = 8
    G = basis_gram(A, range(N), M + extra)
    diag = np.real(np.diag(G)).reshape(N, M + extra + 1)
    computed = float(np.sum(diag[:, :M + 1]))
    tail = float(np.sum(diag[:, M + 1:]))
    rel = abs(computed - predicted) / predicted if predicted else abs(computed)
    kr = krd = None
    if kernel_route:
        kr = _kernel_route(A, N)
        krd = abs(kr - computed) / abs(kr) if kr else abs(computed)
    dominated = tail > 0.1 * tolerance * max(predicted, 1e-300)
    return HSReport(computed, predicted, rel, tail, kr, krd, dominated, N, M)


@dataclass(frozen=True)
class ProbeReport:
    singular_values: np.ndarray
    count_near_one: int
    bound: int
    hs_sq: float
    N: int
    M: int

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["singular_values"] = [float(s) for s in self.singular_values]
        return d

    def to_csv(self, stream=None) -> str:
        """Singular spectrum as CSV ``index,sigma`` (descending)."""
        return _write_csv([("index", "sigma")] + [(i, repr(float(s))) for i, s in enumerate(self.singular_values)],
                          stream)


def annihilation_probe(A: RegionSpec, N: int, M: int, near_one: float = 1e-6) -> ProbeReport:
    """Singular values of ``E_A F_N`` restricted to the truncated ``R(F_N)``."""
    if N == 0:
        return ProbeReport(np.zeros(0), 0, 0, 0.0, N, M)
    G = basis_gram(A, range(N), M)
    ev = np.linalg.eigvalsh((G + G.conj().T) / 2)[::-1]
    sv = np.sqrt(np.clip(ev, 0.0, None))
    hs_sq = float(np.real(np.trace(G)))
    return ProbeReport(sv, int(np.sum(sv >= 1 - near_one)), int(math.floor(hs_sq + 1e-9)), hs_sq, N, M)


def sap_ratio(g: GridFunction, A: RegionSpec, N: int, M: int) -> tuple[float, float]:
    """``(squared, unsquared)`` SAP ratios of a grid function:
    ``||g||^2 / (||g||_{A^c}^2 + ||P_N^perp W g||^2)`` and the variant with ``||g||_{A^c}``."""
    total = g.norm() ** 2
    outside = total - project_EA(g, A).norm() ** 2
    W = weyl_transform(g, M, tail_warn=np.inf)
    rows = W.entries if range_index_convention() == "first" else W.entries.T
    perp = float(np.sum(np.abs(rows[N:, :]) ** 2))
    sq = total / (outside + perp) if outside + perp > 0 else math.inf
    unsq = total / (math.sqrt(max(outside, 0.0)) + perp) if outside + perp > 0 else math.inf
    return sq, unsq


@dataclass(frozen=True)
class SAPReport:
    constant: float  # both terms squared
    constant_unsquared: float
    exact_constant: float  # sup over the truncated space (squared variant)
    trials: int
    band: int
    history: tuple

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["history"] = list(self.history)
        return d


def sap_estimate(A: RegionSpec, N: int, M: int, trials: int = 500, seed: int = 0,
                 band: int | None = None) -> SAPReport:
    """Empirical SAP constant over random unit-norm ``g`` in the span of ``phi_{alpha beta}``, ``alpha, beta <= band``.

    In coefficient space ``||g||_{A^c}^2 = 1 - c^* G_A c`` and
    ``||P_N^perp W(g)||_HS^2 = 2 pi sum_{alpha >= N} |c|^2``.
    """
    band = M if band is None else min(band, M)
    G = basis_gram(A, range(band + 1), band)
    dim = (band + 1) ** 2
    alpha = np.repeat(np.arange(band + 1), band + 1)
    Dn = np.where(alpha >= N, TWO_PI, 0.0)
    rng = np.random.default_rng(seed)
    C = rng.normal(size=(trials, dim)) + 1j * rng.normal(size=(trials, dim))
    C /= np.linalg.norm(C, axis=1, keepdims=True)
    inside = np.real(np.einsum("ti,ij,tj->t", C.conj(), G, C))
    outside = np.clip(1.0 - inside, 0.0, None)
    perp = np.sum(np.abs(C) ** 2 * Dn[None, :], axis=1)
    sq = 1.0 / (outside + perp)
    unsq = 1.0 / (np.sqrt(outside) + perp)
    Q = np.eye(dim) - (G + G.conj().T) / 2 + np.diag(Dn)
    lam_min = float(np.linalg.eigvalsh(Q)[0])
    history = tuple(float(np.max(sq[:k])) for k in (trials // 2, trials) if k > 0)
    return SAPReport(float(np.max(sq)), float(np.max(unsq)), 1.0 / lam_min, trials, band, history)
