"""Real, complex and Laguerre polynomials at the coefficient level.

A :class:`BiPolynomial` stores ``sum_{j,k} c[j, k] z**j * zbar**k`` and treats
``z`` and ``zbar`` as independent variables, so Wirtinger derivatives are
plain coefficient shifts.  Values are only ever produced by substituting
``zbar = conj(z)`` at evaluation time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d

FACTORIAL_CAP = 170
_FACTORIALS = tuple(float(math.factorial(k)) for k in range(FACTORIAL_CAP + 1))


class FactorialOverflowError(OverflowError):
    """Raised when a factorial beyond the configured cap is requested."""


def factorial(k: int, cap: int = FACTORIAL_CAP) -> float:
    if k < 0:
        raise ValueError(f"factorial of negative integer {k}")
    if k > cap or k > FACTORIAL_CAP:
        raise FactorialOverflowError(f"{k}! exceeds the factorial cap {min(cap, FACTORIAL_CAP)}")
    return _FACTORIALS[k]


def check_nu(nu: float) -> float:
    nu = float(nu)
    if not nu > 0 or not math.isfinite(nu):
        raise ValueError(f"magnetic parameter nu must be a finite positive real, got {nu}")
    return nu


def _check_order(name: str, k: int) -> int:
    if int(k) != k or k < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {k}")
    return int(k)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RealPolynomial:
    """Polynomial in one real variable, ``coeffs[k]`` multiplies ``x**k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float)).copy()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0.0
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        # complex arguments are allowed; the coefficients stay real
        return npoly.polyval(x, self.coeffs)

    def allclose(self, other: "RealPolynomial", atol: float = 0.0, rtol: float = 1e-12) -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.pad(self.coeffs, (0, n - len(self.coeffs)))
        b = np.pad(other.coeffs, (0, n - len(other.coeffs)))
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1.0)
        return bool(np.max(np.abs(a - b)) <= atol + rtol * scale)


@dataclass(frozen=True, eq=False)
class BiPolynomial:
    """Polynomial in ``(z, zbar)``; ``coeffs[j, k]`` multiplies ``z**j zbar**k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex, ndmin=2, copy=True)
        if c.ndim != 2:
            raise ValueError("BiPolynomial coefficients must be a 2-D array")
        rows = np.flatnonzero(np.any(c != 0, axis=1))
        cols = np.flatnonzero(np.any(c != 0, axis=0))
        if rows.size == 0:
            c = np.zeros((1, 1), dtype=complex)
        else:
            c = c[: rows[-1] + 1, : cols[-1] + 1]
        object.__setattr__(self, "coeffs", _frozen(np.ascontiguousarray(c)))

    # construction helpers
    @classmethod
    def constant(cls, value) -> "BiPolynomial":
        return cls(np.array([[value]]))

    @classmethod
    def monomial(cls, j: int, k: int, coeff=1.0) -> "BiPolynomial":
        c = np.zeros((j + 1, k + 1), dtype=complex)
        c[j, k] = coeff
        return cls(c)

    @property
    def deg_z(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def deg_zbar(self) -> int:
        return self.coeffs.shape[1] - 1

    def evaluate(self, z, zbar):
        z, zbar = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(zbar, dtype=complex))
        return npoly.polyval2d(z, zbar, self.coeffs)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.evaluate(z, np.conj(z))

    def _pad_to(self, shape):
        out = np.zeros(shape, dtype=complex)
        out[: self.coeffs.shape[0], : self.coeffs.shape[1]] = self.coeffs
        return out

    def __add__(self, other):
        if not isinstance(other, BiPolynomial):
            other = BiPolynomial.constant(other)
        shape = (max(self.coeffs.shape[0], other.coeffs.shape[0]),
                 max(self.coeffs.shape[1], other.coeffs.shape[1]))
        return BiPolynomial(self._pad_to(shape) + other._pad_to(shape))

    __radd__ = __add__

    def __neg__(self):
        return BiPolynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, BiPolynomial):
            return BiPolynomial(convolve2d(self.coeffs, other.coeffs))
        return BiPolynomial(self.coeffs * other)

    __rmul__ = __mul__

    def times_z(self, power: int = 1) -> "BiPolynomial":
        return BiPolynomial(np.pad(self.coeffs, ((power, 0), (0, 0))))

    def times_zbar(self, power: int = 1) -> "BiPolynomial":
        return BiPolynomial(np.pad(self.coeffs, ((0, 0), (power, 0))))

    def conjugate(self) -> "BiPolynomial":
        """Polynomial whose values are the complex conjugates of this one's."""
        return BiPolynomial(np.conj(self.coeffs).T)

    def allclose(self, other: "BiPolynomial", atol: float = 0.0, rtol: float = 1e-12) -> bool:
        shape = (max(self.coeffs.shape[0], other.coeffs.shape[0]),
                 max(self.coeffs.shape[1], other.coeffs.shape[1]))
        a, b = self._pad_to(shape), other._pad_to(shape)
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1.0)
        return bool(np.max(np.abs(a - b)) <= atol + rtol * scale)

    def __repr__(self):
        return f"BiPolynomial(deg_z={self.deg_z}, deg_zbar={self.deg_zbar})"


def wirtinger_dz(p: BiPolynomial) -> BiPolynomial:
    c = p.coeffs
    if c.shape[0] == 1:
        return BiPolynomial.constant(0.0)
    j = np.arange(1, c.shape[0])[:, None]
    return BiPolynomial(j * c[1:, :])


def wirtinger_dzbar(p: BiPolynomial) -> BiPolynomial:
    c = p.coeffs
    if c.shape[1] == 1:
        return BiPolynomial.constant(0.0)
    k = np.arange(1, c.shape[1])[None, :]
    return BiPolynomial(k * c[:, 1:])


def landau_apply(p: BiPolynomial, nu: float) -> BiPolynomial:
    """Apply ``-d^2/dz dzbar + nu * zbar * d/dzbar`` exactly."""
    nu = check_nu(nu)
    dzb = wirtinger_dzbar(p)
    return -wirtinger_dz(dzb) + nu * dzb.times_zbar()


# ---------------------------------------------------------------- constructors


@lru_cache(maxsize=None)
def _real_hermite_list(n: int, nu: float) -> tuple:
    out = [RealPolynomial([1.0])]
    if n >= 1:
        out.append(RealPolynomial([0.0, 2.0 * nu]))
    for k in range(1, n):
        # H_{k+1} = 2 nu x H_k - 2 nu k H_{k-1}
        a = np.concatenate([[0.0], 2.0 * nu * out[k].coeffs])
        b = 2.0 * nu * k * out[k - 1].coeffs
        m = max(len(a), len(b))
        out.append(RealPolynomial(np.pad(a, (0, m - len(a))) - np.pad(b, (0, m - len(b)))))
    return tuple(out)


def real_hermite(n: int, nu: float) -> RealPolynomial:
    """Rescaled real Hermite polynomial, ``(-1)^n e^{nu x^2} d^n/dx^n e^{-nu x^2}``."""
    n = _check_order("n", n)
    return _real_hermite_list(n, check_nu(nu))[n]


@lru_cache(maxsize=None)
def _uchp_entry(m: int, n: int, nu: float) -> BiPolynomial:
    if m == 0:
        return BiPolynomial.monomial(0, n, nu**n)
    nxt = nu * _uchp_entry(m - 1, n, nu).times_z()
    if n > 0:
        nxt = nxt - (nu * n) * _uchp_entry(m - 1, n - 1, nu)
    return nxt


def _uchp_fill(m: int, n: int, nu: float) -> BiPolynomial:
    # fill the cache row by row so the recursion never goes deeper than one step
    for i in range(m + 1):
        for k in range(max(0, n - m + i), n + 1):
            _uchp_entry(i, k, nu)
    return _uchp_entry(m, n, nu)


def uchp(m: int, n: int, nu: float) -> BiPolynomial:
    """Complex Hermite polynomial ``H^nu_{m,n}(z, zbar)`` (degree m in z, n in zbar).

    Built from ``H_{0,n} = nu^n zbar^n`` and the recurrence
    ``H_{m+1,n} = nu z H_{m,n} - nu n H_{m,n-1}``.
    """
    m = _check_order("m", m)
    n = _check_order("n", n)
    return _uchp_fill(m, n, check_nu(nu))


def rodrigues_uchp(m: int, n: int, nu: float, variant: str = "mixed") -> BiPolynomial:
    """Independent construction by differentiating ``p * exp(-nu z zbar)``.

    ``variant="mixed"`` differentiates the bare Gaussian n times in z and m
    times in zbar; ``variant="zbar"`` differentiates ``zbar^n`` times the
    Gaussian m times in zbar only.
    """
    m = _check_order("m", m)
    n = _check_order("n", n)
    nu = check_nu(nu)
    if variant == "mixed":
        p = BiPolynomial.constant(1.0)
        for _ in range(n):
            p = wirtinger_dz(p) - nu * p.times_zbar()
        for _ in range(m):
            p = wirtinger_dzbar(p) - nu * p.times_z()
        return (-1) ** (m + n) * p
    if variant == "zbar":
        p = BiPolynomial.monomial(0, n)
        for _ in range(m):
            p = wirtinger_dzbar(p) - nu * p.times_z()
        return ((-1) ** m * nu**n) * p
    raise ValueError(f"unknown Rodrigues variant {variant!r}")


@lru_cache(maxsize=None)
def _laguerre_list(m: int) -> tuple:
    out = [RealPolynomial([1.0])]
    if m >= 1:
        out.append(RealPolynomial([1.0, -1.0]))
    for k in range(1, m):
        a = np.concatenate([(2 * k + 1) * out[k].coeffs, [0.0]]) - np.concatenate([[0.0], out[k].coeffs])
        b = k * np.pad(out[k - 1].coeffs, (0, len(a) - len(out[k - 1].coeffs)))
        out.append(RealPolynomial((a - b) / (k + 1)))
    return tuple(out)


def laguerre(m: int) -> RealPolynomial:
    """Laguerre polynomial ``L^{(0)}_m``."""
    m = _check_order("m", m)
    return _laguerre_list(m)[m]


def uchp_rescaling_check(m: int, n: int, nu: float, z) -> float:
    """``max |H^nu_{m,n}(z) - nu^{(m+n)/2} H^1_{m,n}(sqrt(nu) z)| / max(|rhs|, 1)``.

    The left side comes from the recurrence at parameter nu, the right side
    from Rodrigues differentiation at parameter 1.
    """
    nu = check_nu(nu)
    lhs = uchp(m, n, nu)(z)
    rhs = nu ** ((m + n) / 2) * rodrigues_uchp(m, n, 1.0)(np.sqrt(nu) * np.asarray(z, dtype=complex))
    return float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1.0)))


def uchp_norm_sq(m: int, n: int, nu: float, cap: int = FACTORIAL_CAP) -> float:
    """Squared Gaussian-weighted norm ``(pi/nu) m! n! nu^(m+n)``."""
    m = _check_order("m", m)
    n = _check_order("n", n)
    nu = check_nu(nu)
    if m + n > cap:
        raise FactorialOverflowError(f"m + n = {m + n} exceeds the factorial cap {cap}")
    return math.pi / nu * factorial(m) * factorial(n) * nu ** (m + n)


def real_hermite_norm_sq(m: int, nu: float, cap: int = FACTORIAL_CAP) -> float:
    m = _check_order("m", m)
    nu = check_nu(nu)
    return math.sqrt(math.pi / nu) * 2.0**m * nu**m * factorial(m, cap)


def monomial_norm_sq(m: int, n: int, nu: float) -> float:
    """Squared norm of ``u^m v^n`` in the Gaussian-weighted space on C^2."""
    nu = check_nu(nu)
    return (math.pi / nu) ** 2 * factorial(m) * factorial(n) / nu ** (m + n)


# ------------------------------------------------------------- point evaluators


def hermite_table(count: int, nu, x) -> np.ndarray:
    """Values ``H^nu_k(x)`` for ``k < count``, stacked on a new leading axis.

    ``nu`` may be complex here; the recurrence is the polynomial identity.
    """
    x = np.asarray(x, dtype=complex)
    out = np.empty((count,) + x.shape, dtype=complex)
    out[0] = 1.0
    if count > 1:
        out[1] = 2.0 * nu * x
    for k in range(1, count - 1):
        out[k + 1] = 2.0 * nu * x * out[k] - 2.0 * nu * k * out[k - 1]
    return out


def hermite_eval(n: int, nu, x):
    return hermite_table(n + 1, nu, x)[n]


def uchp_table(rows: int, cols: int, nu: float, z) -> np.ndarray:
    """Values ``H^nu_{m,n}(z)`` for ``m < rows, n < cols`` by the point recurrence."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((rows, cols) + z.shape, dtype=complex)
    ks = np.arange(cols).reshape((cols,) + (1,) * z.ndim)
    out[0] = (nu * np.conj(z)) ** ks
    for i in range(rows - 1):
        out[i + 1, 0] = nu * z * out[i, 0]
        out[i + 1, 1:] = nu * z * out[i, 1:] - nu * ks[1:] * out[i, :-1]
    return out


def laguerre_eval(m: int, x):
    x = np.asarray(x, dtype=complex)
    prev, cur = np.ones_like(x), 1.0 - x
    if m == 0:
        return prev
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur
