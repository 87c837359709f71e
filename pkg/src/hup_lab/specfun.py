"""Scalar special functions: Laguerre, Gegenbauer, Bessel J, Hermite functions.

Everything here is written against plain numpy so that the numerical
behaviour (recurrence direction, normalisation of the Miller recurrence,
series cut-offs) is explicit and testable.  ``scipy.special`` is used only
by the test-suite as an independent oracle.

All functions accept scalar or array ``x`` and return a float for scalar
input and an ``ndarray`` otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "BracketingError",
    "MultiIndex",
    "SpecValue",
    "multi_indices",
    "generalized_binomial",
    "laguerre",
    "laguerre_binomial",
    "laguerre_value",
    "laguerre_function",
    "gegenbauer",
    "chebyshev_t",
    "bessel_j",
    "bessel_j_value",
    "hermite_functions_1d",
    "hermite_function",
    "find_zeros",
    "real_zeros",
]

_EPS = np.finfo(float).eps


class DomainError(ValueError):
    """Raised when a special function is evaluated outside its domain."""


class BracketingError(ValueError):
    """Raised when a root search finds no sign change to refine."""


@dataclass(frozen=True)
class MultiIndex:
    """A multi-index ``alpha`` in ``Z_+^n``."""

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int] | int):
        if isinstance(entries, (int, np.integer)):
            entries = (int(entries),)
        vals = tuple(int(e) for e in entries)
        if not vals:
            raise ValueError("a multi-index needs at least one entry")
        if any(e < 0 for e in vals):
            raise ValueError(f"multi-index entries must be >= 0, got {vals}")
        object.__setattr__(self, "entries", vals)

    @property
    def order(self) -> int:
        """``|alpha|``, the sum of the entries."""
        return sum(self.entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def factorial(self) -> int:
        return math.prod(math.factorial(e) for e in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        return ";".join(str(e) for e in self.entries)

    @classmethod
    def coerce(cls, value) -> "MultiIndex":
        return value if isinstance(value, MultiIndex) else cls(value)


def multi_indices(n: int, k: int) -> list[tuple[int, ...]]:
    """All ``alpha`` in ``Z_+^n`` with ``|alpha| = k``, lexicographically descending.

    >>> multi_indices(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    if n < 1 or k < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(n), k):
        a = [0] * n
        for j in combo:
            a[j] += 1
        out.append(tuple(a))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class SpecValue:
    """A scalar result together with an absolute error bound."""

    value: float | complex
    abs_error_bound: float

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("SpecValue must hold a finite value")
        if not self.abs_error_bound >= 0:
            raise ValueError("abs_error_bound must be non-negative")


def _is_negative_integer(v: float) -> bool:
    return float(v) == math.floor(v) and v <= -1


def _gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    # Gamma alternates sign between consecutive poles on the negative axis.
    return -1.0 if math.ceil(-x) % 2 == 1 else 1.0


def generalized_binomial(a: float, m: int) -> float:
    """``binom(a, m) = Gamma(a+1) / (m! Gamma(a-m+1))`` for real ``a`` via log-Gamma."""
    if m < 0:
        return 0.0
    if _is_negative_integer(a + 1):
        raise DomainError(f"binomial undefined for upper argument {a}")
    b = a - m + 1
    if b <= 0 and b == math.floor(b):
        return 0.0  # 1/Gamma at a pole
    sign = _gamma_sign(a + 1) * _gamma_sign(b)
    return sign * math.exp(math.lgamma(a + 1) - math.lgamma(m + 1) - math.lgamma(b))


def _check_laguerre_args(k, nu):
    if int(k) != k or k < 0:
        raise DomainError(f"Laguerre degree must be a non-negative integer, got {k}")
    if _is_negative_integer(nu):
        raise DomainError(f"Laguerre order nu={nu} is a negative integer")


def _wrap(x_in, out):
    return float(out) if np.ndim(x_in) == 0 else out


def laguerre(k: int, nu: float, x):
    """Generalized Laguerre polynomial ``L_k^nu(x)`` by forward recurrence.

    ``(j+1) L_{j+1} = (2j + nu + 1 - x) L_j - (j + nu) L_{j-1}``.
    """
    _check_laguerre_args(k, nu)
    x_arr = np.asarray(x, dtype=float)
    prev = np.ones_like(x_arr)
    if k == 0:
        return _wrap(x, prev)
    cur = 1.0 + nu - x_arr
    for j in range(1, int(k)):
        prev, cur = cur, ((2 * j + nu + 1 - x_arr) * cur - (j + nu) * prev) / (j + 1)
    return _wrap(x, cur)


def laguerre_binomial(k: int, nu: float, x):
    """``L_k^nu(x)`` from the explicit alternating sum; only a cross-check for small ``k``."""
    _check_laguerre_args(k, nu)
    x_arr = np.asarray(x, dtype=float)
    total = np.zeros_like(x_arr)
    for j in range(int(k) + 1):
        total = total + generalized_binomial(nu + k, k - j) * (-x_arr) ** j / math.factorial(j)
    return _wrap(x, total)


def laguerre_value(k: int, nu: float, x: float) -> SpecValue:
    """Scalar ``L_k^nu(x)`` with a rounding-error bound from the recurrence magnitudes."""
    _check_laguerre_args(k, nu)
    x = float(x)
    prev, cur = 1.0, 1.0 + nu - x
    scale = max(1.0, abs(cur))
    if k == 0:
        return SpecValue(1.0, 0.0)
    for j in range(1, int(k)):
        term1 = (2 * j + nu + 1 - x) * cur
        term2 = (j + nu) * prev
        prev, cur = cur, (term1 - term2) / (j + 1)
        scale = max(scale, (abs(term1) + abs(term2)) / (j + 1))
    return SpecValue(cur, 4 * (k + 1) * _EPS * scale)


def laguerre_function(k: int, n: int, r, lam: float = 1.0):
    """Laguerre function ``phi_k^{n-1}(z) = L_k^{n-1}(|z|^2/2) exp(-|z|^2/4)`` at ``|z| = r``.

    With ``lam`` given, returns the scaled version ``phi_{k,lam}^{n-1}(z) =
    phi_k^{n-1}(sqrt(|lam|) z)``.
    """
    if n < 1:
        raise DomainError("dimension n must be >= 1")
    if lam == 0:
        raise DomainError("lam must be non-zero")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("radius must be non-negative")
    s = abs(lam) * r_arr**2
    out = np.asarray(laguerre(k, n - 1, s / 2.0)) * np.exp(-s / 4.0)
    return _wrap(r, out)


def gegenbauer(l: int, beta: float, t, m: int = 0):
    """m-th derivative of the Gegenbauer polynomial ``G_l^beta`` at ``t``.

    Uses ``d^m/dt^m G_l^beta = 2^m (beta)_m G_{l-m}^{beta+m}`` and the
    three-term recurrence in ``l``.
    """
    if l < 0 or m < 0:
        raise DomainError("degree and derivative order must be non-negative")
    if beta <= 0:
        raise DomainError("Gegenbauer parameter must be positive; use chebyshev_t for beta=0")
    t_arr = np.asarray(t, dtype=float)
    if m > l:
        return _wrap(t, np.zeros_like(t_arr))
    b = beta + m
    deg = l - m
    prefactor = 2.0**m * math.exp(math.lgamma(beta + m) - math.lgamma(beta))
    prev = np.ones_like(t_arr)
    cur = 2.0 * b * t_arr
    if deg == 0:
        cur = prev
    for j in range(2, deg + 1):
        prev, cur = cur, (2.0 * t_arr * (j + b - 1) * cur - (j + 2 * b - 2) * prev) / j
    return _wrap(t, prefactor * cur)


def chebyshev_t(l: int, t):
    """Chebyshev polynomial of the first kind (the ``beta -> 0`` zonal profile)."""
    t_arr = np.asarray(t, dtype=float)
    prev = np.ones_like(t_arr)
    if l == 0:
        return _wrap(t, prev)
    cur = t_arr.copy()
    for _ in range(2, l + 1):
        prev, cur = cur, 2.0 * t_arr * cur - prev
    return _wrap(t, cur)


# --------------------------------------------------------------------- Bessel

_SERIES_X = 8.0


def _bessel_series(nu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending series; returns (value, magnitude of largest term)."""
    half = x / 2.0
    with np.errstate(divide="ignore"):
        log_t0 = nu * np.log(half) - math.lgamma(nu + 1)
    term = np.where(x > 0, np.exp(log_t0), 0.0)
    total = term.copy()
    biggest = np.abs(term)
    q = -(half**2)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + nu))
        total += term
        biggest = np.maximum(biggest, np.abs(term))
        if k > 4 and np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
        if k > 400:
            break
    return total, biggest


def _miller_start(nu: float, xmax: float) -> int:
    return int(max(nu, xmax) + 30 + 6 * xmax ** (1.0 / 3.0))


def _bessel_miller(nu: float, x: np.ndarray, start: int | None = None) -> np.ndarray:
    """Backward recurrence normalised by the Neumann series.

    With ``nu0 = nu - floor(nu)`` the normalisation is
    ``(x/2)^nu0 = sum_k (nu0 + 2k) Gamma(nu0 + k) / k! J_{nu0+2k}(x)``
    (for ``nu0 = 0``: ``1 = J_0 + 2 sum_k J_{2k}``).
    """
    nu0 = nu - math.floor(nu)
    target = int(math.floor(nu))
    top = start if start is not None else _miller_start(nu, float(np.max(x)))
    f_next = np.zeros_like(x)
    f_cur = np.full_like(x, 1e-280)
    norm = np.zeros_like(x)
    want = np.zeros_like(x)
    for m in range(top, -1, -1):
        order = nu0 + m
        if m == target:
            want = f_cur.copy()
        if m % 2 == 0:
            kk = m // 2
            if nu0 == 0.0:
                coef = 1.0 if kk == 0 else 2.0
            else:
                coef = (nu0 + 2 * kk) * math.exp(math.lgamma(nu0 + kk) - math.lgamma(kk + 1))
            norm = norm + coef * f_cur
        if m == 0:
            break
        f_prev = (2.0 * order / x) * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        big = np.abs(f_cur) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            f_cur, f_next = f_cur * scale, f_next * scale
            norm, want = norm * scale, want * scale
    return want * (x / 2.0) ** nu0 / norm


def bessel_j(nu: float, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``nu >= 0``, ``x >= 0``.

    Ascending series for small arguments, Miller backward recurrence otherwise.
    """
    if nu < 0:
        raise DomainError("bessel_j requires nu >= 0")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr < 0):
        raise DomainError("bessel_j requires x >= 0")
    out = np.empty_like(x_arr)
    zero = x_arr == 0
    out[zero] = 1.0 if nu == 0 else 0.0
    small = (~zero) & (x_arr < _SERIES_X)
    large = x_arr >= _SERIES_X
    if np.any(small):
        out[small] = _bessel_series(nu, x_arr[small])[0]
    if np.any(large):
        out[large] = _bessel_miller(nu, x_arr[large])
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))


def bessel_j_value(nu: float, x: float) -> SpecValue:
    """Scalar ``J_nu(x)`` with an error estimate.

    The bound is the cancellation estimate of the series, or the change of the
    Miller value when the starting order is raised by 20.
    """
    x = float(x)
    val = bessel_j(nu, x)
    if x == 0.0:
        return SpecValue(val, 0.0)
    if x < _SERIES_X:
        _, biggest = _bessel_series(nu, np.array([x]))
        return SpecValue(val, float(8 * _EPS * biggest[0]) + _EPS * abs(val))
    arr = np.array([x])
    alt = _bessel_miller(nu, arr, start=_miller_start(nu, x) + 20)[0]
    return SpecValue(val, abs(alt - val) + 4 * _EPS * abs(val))


# -------------------------------------------------------------------- Hermite


def hermite_functions_1d(kmax: int, x) -> np.ndarray:
    """Normalised Hermite functions ``h_0 .. h_kmax`` at ``x``; shape ``(kmax+1,) + x.shape``.

    Stable recurrence ``h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = np.pi ** (-0.25) * np.exp(-0.5 * x * x)
    if kmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, kmax):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_function(alpha, x, lam: float = 1.0):
    """Scaled Hermite function ``phi_alpha^lam(x) = |lam|^{n/4} prod_j h_{alpha_j}(sqrt|lam| x_j)``.

    ``x`` has shape ``(n,)`` or ``(..., n)``.
    """
    alpha = MultiIndex.coerce(alpha)
    if lam == 0:
        raise DomainError("lam must be non-zero")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != alpha.dim:
        raise ValueError(f"point dimension {x.shape[-1]} != multi-index length {alpha.dim}")
    s = math.sqrt(abs(lam))
    val = np.full(x.shape[:-1], abs(lam) ** (alpha.dim / 4.0))
    for j, a in enumerate(alpha):
        val = val * hermite_functions_1d(a, s * x[..., j])[a]
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------- root finding


def _refine(func: Callable[[float], float], a: float, b: float, fa: float, fb: float, tol: float) -> float:
    # Bisection until the bracket is small, then safeguarded secant.
    for _ in range(60):
        if b - a < 1e-6 * max(1.0, abs(a)):
            break
        m = 0.5 * (a + b)
        fm = func(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    x0, f0, x1, f1 = a, fa, b, fb
    for _ in range(100):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not (a <= x2 <= b):
            x2 = 0.5 * (a + b)
        f2 = func(x2)
        if f2 == 0.0:
            return x2
        if (f2 > 0) == (fa > 0):
            a, fa = x2, f2
        else:
            b, fb = x2, f2
        step = abs(x2 - x1)
        x0, f0, x1, f1 = x1, f1, x2, f2
        if step < tol or b - a < tol:
            break
    return x1


def find_zeros(
    func: Callable,
    interval: tuple[float, float],
    samples: int = 2000,
    tol: float = 1e-12,
    max_count: int | None = None,
) -> list[float]:
    """Sign-change scan on a uniform grid followed by bisection-then-secant refinement.

    ``func`` must accept numpy arrays.  Raises :class:`BracketingError` if no
    sign change is found.
    """
    a, b = map(float, interval)
    if not b > a:
        raise ValueError("interval must satisfy a < b")
    grid = np.linspace(a, b, samples + 1)
    vals = np.asarray(func(grid), dtype=float)
    roots: list[float] = []
    scalar = lambda t: float(np.asarray(func(np.array([t])))[0])  # noqa: E731
    for i in range(samples):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            if not roots or abs(roots[-1] - grid[i]) > tol:
                roots.append(float(grid[i]))
        elif f0 * f1 < 0:
            roots.append(_refine(scalar, grid[i], grid[i + 1], f0, f1, tol))
        if max_count is not None and len(roots) >= max_count:
            break
    if vals[-1] == 0.0 and (not roots or abs(roots[-1] - grid[-1]) > tol):
        roots.append(float(grid[-1]))
    if not roots:
        raise BracketingError(f"no sign change of the function on [{a}, {b}]")
    return roots


def real_zeros(kind: str, order: float, count: int, interval: Sequence[float] | None = None) -> list[float]:
    """Real zeros of ``L_count^order`` (``kind='laguerre'``) or the first ``count``
    positive zeros of ``J_order`` (``kind='bessel'``) inside ``interval``.
    """
    if kind == "laguerre":
        k = int(count)
        _check_laguerre_args(k, order)
        if interval is None:
            interval = (0.0, 4.0 * k + 2.0 * order + 2.0)
        lo, hi = interval
        samples = max(4000, int(200 * (hi - lo)), 400 * k)
        return find_zeros(lambda t: laguerre(k, order, t), (lo, hi), samples=samples)
    if kind == "bessel":
        if interval is None:
            interval = (0.0, order + math.pi * (count + 2) + 10.0)
        lo, hi = interval
        lo = max(lo, 1e-8)  # J_nu(0) = 0 for nu > 0 is not a "found" zero
        samples = max(2000, int(40 * (hi - lo)))
        return find_zeros(lambda t: bessel_j(order, t), (lo, hi), samples=samples, max_count=count)
    raise ValueError(f"unknown zero family {kind!r}")
