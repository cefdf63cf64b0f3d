"""Integral transforms between Gaussian-weighted spaces on R, R^2, C and C^2.

Transforms act on :class:`FunctionHandle` objects and return new handles
whose evaluators run the defining quadrature on demand.  Every Gaussian
factor of a kernel is absorbed into the Gauss-Hermite weight; what remains
is assembled as one complex exponent (log weight included) and exponentiated
once per node.
"""
from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .polynomials import (
    BiPolynomial,
    check_nu,
    factorial,
    hermite_table,
    monomial_norm_sq,
    real_hermite,
    real_hermite_norm_sq,
    uchp,
    uchp_norm_sq,
)
from .quadrature import (
    QuadratureError,
    complex_grid,
    gauss_hermite_rule,
    line_nodes,
    DECAY_THRESHOLD,
)

N_REAL = 80
N_COMPLEX = 80
N_BICOMPLEX = 40
N_LINE = 1024
LINE_HALF_WIDTH = 20.0
POINT_CHUNK = 256

DOMAINS = ("R", "R2", "C", "C2")


class DecayWarning(RuntimeWarning):
    """Line-rule integrand has not decayed at the ends of the interval."""


# ------------------------------------------------------------------ handles


@dataclass(frozen=True)
class Representation:
    """Finite expansion in a named basis; ``terms`` is a tuple of (index, coefficient).

    kinds: ``uchp`` (C, index (m, n)), ``monomial`` (C2, z^m w^n),
    ``hermite`` (R, index m), ``hermite_gauss`` (R2, H_j(x) H_k(y) e^{-nu(x^2+y^2)/2}).
    """

    kind: str
    nu: float
    terms: tuple

    def evaluate(self, *args):
        nu = self.nu
        if self.kind == "uchp":
            z = np.asarray(args[0], dtype=complex)
            return sum((c * uchp(m, n, nu)(z) for (m, n), c in self.terms), np.zeros(z.shape, complex))
        if self.kind == "monomial":
            z, w = np.broadcast_arrays(np.asarray(args[0], complex), np.asarray(args[1], complex))
            return sum((c * z**m * w**n for (m, n), c in self.terms), np.zeros(z.shape, complex))
        if self.kind == "hermite":
            x = np.asarray(args[0], dtype=complex)
            return sum((c * real_hermite(m, nu)(x) for m, c in self.terms), np.zeros(x.shape, complex))
        if self.kind == "hermite_gauss":
            x, y = np.broadcast_arrays(np.asarray(args[0], complex), np.asarray(args[1], complex))
            g = np.exp(-nu * (x**2 + y**2) / 2)
            return g * sum((c * real_hermite(j, nu)(x) * real_hermite(k, nu)(y) for (j, k), c in self.terms),
                           np.zeros(x.shape, complex))
        raise ValueError(f"unknown representation kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class FunctionHandle:
    """A pure function on one of R, R^2, C, C^2.

    ``evaluator`` takes one array per real/complex coordinate (two for R^2
    and C^2), broadcasts them, and returns complex values.  The optional
    ``representation`` gives an exact basis expansion of the same function.
    """

    domain: str
    evaluator: Callable
    representation: Optional[Representation] = None
    label: str = ""

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"domain must be one of {DOMAINS}")

    @property
    def arity(self) -> int:
        return 2 if self.domain in ("R2", "C2") else 1

    def __call__(self, *args):
        if len(args) != self.arity:
            raise TypeError(f"{self.domain} function takes {self.arity} argument(s)")
        out = self.evaluator(*args)
        if np.ndim(out) == 0:
            return complex(out)
        return np.asarray(out, dtype=complex)

    @property
    def has_exact(self) -> bool:
        return self.representation is not None

    def exact(self, *args):
        if self.representation is None:
            raise ValueError(f"{self.label or 'handle'} has no exact representation")
        out = self.representation.evaluate(*args)
        return complex(out) if np.ndim(out) == 0 else out


def _from_representation(domain: str, rep: Representation, label: str) -> FunctionHandle:
    return FunctionHandle(domain, rep.evaluate, rep, label)


def uchp_combination(coeffs: dict, nu: float) -> FunctionHandle:
    """``sum c_{mn} H^nu_{m,n}`` as a function on C."""
    nu = check_nu(nu)
    terms = tuple(sorted((tuple(k), complex(v)) for k, v in coeffs.items()))
    return _from_representation("C", Representation("uchp", nu, terms), f"uchp{dict(terms)}")


def uchp_function(m: int, n: int, nu: float) -> FunctionHandle:
    return uchp_combination({(m, n): 1.0}, nu)


def monomial_combination(coeffs: dict, nu: float) -> FunctionHandle:
    terms = tuple(sorted((tuple(k), complex(v)) for k, v in coeffs.items()))
    return _from_representation("C2", Representation("monomial", check_nu(nu), terms), "monomials")


def hermite_function(m: int, nu: float) -> FunctionHandle:
    return hermite_combination({m: 1.0}, nu)


def hermite_combination(coeffs: dict, nu: float) -> FunctionHandle:
    terms = tuple(sorted((int(k), complex(v)) for k, v in coeffs.items()))
    return _from_representation("R", Representation("hermite", check_nu(nu), terms), "hermite")


def hermite_gauss_product(j: int, k: int, nu: float, coeff: complex = 1.0) -> FunctionHandle:
    """``H^nu_j(x) H^nu_k(y) exp(-nu (x^2 + y^2) / 2)`` on R^2."""
    rep = Representation("hermite_gauss", check_nu(nu), (((j, k), complex(coeff)),))
    return _from_representation("R2", rep, f"hermite_gauss({j},{k})")


def gaussian(domain: str, rate: float = 0.5, center=0.0) -> FunctionHandle:
    """``exp(-rate |s - center|^2)`` on R, R^2 or C."""
    if domain == "R":
        return FunctionHandle("R", lambda x: np.exp(-rate * (np.asarray(x, complex) - center) ** 2), label="gauss")
    if domain == "R2":
        cx, cy = (center.real, center.imag) if isinstance(center, complex) else (center, 0.0)
        return FunctionHandle(
            "R2",
            lambda x, y: np.exp(-rate * ((np.asarray(x, complex) - cx) ** 2 + (np.asarray(y, complex) - cy) ** 2)),
            label="gauss",
        )
    if domain == "C":
        return FunctionHandle("C", lambda z: np.exp(-rate * np.abs(np.asarray(z, complex) - center) ** 2)
                              .astype(complex), label="gauss")
    raise ValueError("gaussian test functions are defined on R, R2 and C")


def zero(domain: str) -> FunctionHandle:
    def f(*args):
        return np.zeros(np.broadcast(*[np.asarray(a) for a in args]).shape, dtype=complex)

    rep = None
    if domain == "C":
        rep = Representation("uchp", 1.0, ())
    elif domain == "C2":
        rep = Representation("monomial", 1.0, ())
    return FunctionHandle(domain, f, rep, "zero")


def as_complex_function(f: FunctionHandle) -> FunctionHandle:
    """View a function on R^2 as a function on C through ``xi = x + i y``."""
    if f.domain == "C":
        return f
    if f.domain != "R2":
        raise ValueError("only R2 functions can be viewed on C")
    return FunctionHandle("C", lambda z: f(np.real(z), np.imag(z)), label=f.label)


def as_plane_function(f: FunctionHandle) -> FunctionHandle:
    if f.domain == "R2":
        return f
    if f.domain != "C":
        raise ValueError("only C functions can be viewed on R2")
    return FunctionHandle("R2", lambda x, y: f(np.asarray(x) + 1j * np.asarray(y)), label=f.label)


def random_uchp_combination(rng: np.random.Generator, max_order: int, nu: float, terms: int = 4,
                            level: Optional[int] = None) -> FunctionHandle:
    """Random combination of ``terms`` distinct UCHP with orders <= max_order.

    With ``level`` set, all terms share the second index (one Landau level).
    """
    if level is None:
        pool = [(m, n) for m in range(max_order + 1) for n in range(max_order + 1)]
    else:
        pool = [(m, level) for m in range(max_order + 1)]
    pick = rng.choice(len(pool), size=min(terms, len(pool)), replace=False)
    coeffs = {}
    for i in sorted(pick):
        m, n = pool[i]
        scale = 1.0 / math.sqrt(uchp_norm_sq(m, n, nu))
        coeffs[(m, n)] = scale * complex(rng.normal(), rng.normal())
    return uchp_combination(coeffs, nu)


# -------------------------------------------------------------- group action


@dataclass(frozen=True)
class GroupElement:
    """2x2 complex matrix acting by ``(z, w) -> (a z + b w, c z + d w)``."""

    a: complex
    b: complex
    c: complex
    d: complex

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @classmethod
    def from_matrix(cls, m) -> "GroupElement":
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement.from_matrix(self.matrix @ other.matrix)

    def scaled(self, s: complex) -> "GroupElement":
        return GroupElement.from_matrix(s * self.matrix)

    def is_unitary(self, tol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(2))) <= tol)

    def act(self, z, w):
        z, w = np.asarray(z, complex), np.asarray(w, complex)
        return self.a * z + self.b * w, self.c * z + self.d * w


IDENTITY = GroupElement(1, 0, 0, 1)
G_I = GroupElement(1, 1j, 1, -1j)


def gamma_action(g: GroupElement, f: FunctionHandle) -> FunctionHandle:
    """``(Gamma_g f)(z, w) = f(a z + b w, c z + d w)``."""
    if f.domain != "C2":
        raise ValueError("group action is defined for functions on C2")

    def ev(z, w):
        return f(*g.act(z, w))

    return FunctionHandle("C2", ev, label=f"Gamma[{f.label}]")


def rotation(theta: complex, f: FunctionHandle) -> FunctionHandle:
    """``f(theta * s)`` for a function on C or C2."""
    if f.domain == "C2":
        return gamma_action(GroupElement(theta, 0, 0, theta), f)
    if f.domain == "C":
        return FunctionHandle("C", lambda z: f(theta * np.asarray(z, complex)), label=f"rot[{f.label}]")
    raise ValueError("rotation acts on C or C2 functions")


def restrict_diag(sign: str, F: FunctionHandle) -> FunctionHandle:
    """``+``: ``z -> F(z, z)``; ``-``: ``z -> F(z, conj z)``."""
    if F.domain != "C2":
        raise ValueError("restriction needs a function on C2")
    if sign == "+":
        return FunctionHandle("C", lambda z: F(z, z), label=f"R+[{F.label}]")
    if sign == "-":
        return FunctionHandle("C", lambda z: F(z, np.conj(np.asarray(z, complex))), label=f"R-[{F.label}]")
    raise ValueError("sign must be '+' or '-'")


def ground_state(alpha: float, f: FunctionHandle) -> FunctionHandle:
    """Multiplication by ``exp(-alpha |z|^2)``."""
    if f.domain != "C":
        raise ValueError("ground-state multiplication acts on C functions")
    return FunctionHandle("C", lambda z: np.exp(-alpha * np.abs(np.asarray(z, complex)) ** 2) * f(z),
                          label=f"M{alpha}[{f.label}]")


# ------------------------------------------------------------------ helpers


def _pointwise(fn, *args, chunk: int = POINT_CHUNK):
    """Evaluate ``fn`` on flattened broadcast points in fixed-size chunks."""
    arrs = np.broadcast_arrays(*[np.asarray(a, dtype=complex) for a in args])
    shape = arrs[0].shape
    flat = [a.ravel() for a in arrs]
    out = np.empty(flat[0].size, dtype=complex)
    for s in range(0, out.size, chunk):
        out[s : s + chunk] = fn(*[f[s : s + chunk] for f in flat])
    if not np.all(np.isfinite(out)):
        bad = int(np.argmax(~np.isfinite(out)))
        raise QuadratureError(f"non-finite transform value at point {tuple(f[bad] for f in flat)!r}")
    return out.reshape(shape) if shape else complex(out[0])


def _real_nodes(nu: float, N: int):
    rule = gauss_hermite_rule(N)
    return rule.nodes / math.sqrt(nu), np.log(rule.weights / math.sqrt(nu))


def _complex_nodes(nu: float, N: int):
    z, w = complex_grid(nu, N).complex_nodes()
    return z, np.log(w)


def _samples(f: FunctionHandle, *nodes) -> np.ndarray:
    vals = np.asarray(f(*nodes), dtype=complex)
    vals = np.broadcast_to(vals, np.broadcast(*nodes).shape)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError(f"input function {f.label!r} is non-finite at a quadrature node")
    return vals


def _require(f: FunctionHandle, domain: str, name: str):
    if f.domain != domain:
        raise ValueError(f"{name} expects a function on {domain}, got {f.domain}")


# -------------------------------------------------------- Segal-Bargmann (R)


def bargmann1(phi: FunctionHandle, nu: float, N: int = N_REAL) -> FunctionHandle:
    """``(nu/pi)^{3/4} int exp(-nu (x - z/sqrt 2)^2) phi(x) dx``."""
    return bargmann1_level(phi, nu, 0, N)


def bargmann1_level(phi: FunctionHandle, nu: float, n: int, N: int = N_REAL) -> FunctionHandle:
    """Level-n transform from L^2(R) onto the n-th Landau level."""
    _require(phi, "R", "bargmann1_level")
    nu = check_nu(nu)
    x, logw = _real_nodes(nu, N)
    px = _samples(phi, x)
    pref = (nu / math.pi) ** 0.75 / math.sqrt(2.0**n * nu**n * factorial(n))
    hn = real_hermite(n, nu)
    r2 = math.sqrt(2.0)

    def block(z):
        z = z[:, None]
        expo = nu * (r2 * x[None, :] * z - z * z / 2) + logw[None, :]
        vals = np.exp(expo) * px[None, :]
        if n:
            vals = vals * hn((z + np.conj(z)) / r2 - x[None, :])
        return pref * vals.sum(axis=1)

    return FunctionHandle("C", lambda z: _pointwise(block, z), label=f"B1_{n}[{phi.label}]")


def bargmann2(psi: FunctionHandle, nu: float, N: int = N_REAL) -> FunctionHandle:
    """Two-dimensional transform with the product Gaussian kernel on R^2."""
    _require(psi, "R2", "bargmann2")
    nu = check_nu(nu)
    x, logw = _real_nodes(nu, N)
    P = _samples(psi, x[:, None], x[None, :])
    pref = (nu / math.pi) ** 1.5
    r2 = math.sqrt(2.0)

    def block(z, w):
        A = np.exp(nu * (r2 * x[None, :] * z[:, None] - z[:, None] ** 2 / 2) + logw[None, :])
        B = np.exp(nu * (r2 * x[None, :] * w[:, None] - w[:, None] ** 2 / 2) + logw[None, :])
        return pref * np.einsum("pa,pa->p", A @ P, B)

    return FunctionHandle("C2", lambda z, w: _pointwise(block, z, w), label=f"B2[{psi.label}]")


def g_composite(phi: FunctionHandle, nu: float, N: int = N_REAL) -> FunctionHandle:
    """``(nu/pi)^{1/2} (B1 phi)((z + i w)/sqrt 2)`` on C^2."""
    b1 = bargmann1(phi, nu, N)
    pref = math.sqrt(nu / math.pi)
    return FunctionHandle("C2", lambda z, w: pref * b1((np.asarray(z) + 1j * np.asarray(w)) / math.sqrt(2.0)),
                          label=f"G[{phi.label}]")


# ------------------------------------------------------------------ T and inverse


def t_forward(psi: FunctionHandle, nu: float, N: int = N_COMPLEX) -> FunctionHandle:
    """``(nu/pi)^{3/2} int_C exp(-nu (z - xi)(w - conj xi)) psi(xi) dlambda(xi)``.

    Evaluating on an outer product of points (``z`` shaped ``(a, 1)``, ``w``
    shaped ``(1, b)``) uses one matrix product instead of a ``a*b`` loop.
    If ``psi`` carries a UCHP expansion the result carries the matching
    monomial expansion ``(nu/pi)^{1/2} nu^{m+n} z^m w^n``.
    """
    psi = as_complex_function(psi)
    nu = check_nu(nu)
    xi, logw = _complex_nodes(nu, N)
    samples = _samples(psi, xi)
    c = samples * np.exp(logw)
    xib = np.conj(xi)
    pref = (nu / math.pi) ** 1.5
    lock = threading.Lock()
    cache = {}  # w-side factor of the last outer-product evaluation

    def pairs(z, w):
        expo = nu * (z[:, None] * xib[None, :] + w[:, None] * xi[None, :] - (z * w)[:, None])
        return pref * (np.exp(expo) @ c)

    def evaluate(z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        if z.ndim == 2 and w.ndim == 2 and z.shape[1] == 1 and w.shape[0] == 1:
            A = np.exp(nu * z[:, 0][:, None] * xib[None, :])
            key = w.tobytes()
            with lock:
                if cache.get("key") != key:
                    B = np.exp(nu * w[0, :][:, None] * xi[None, :] + logw[None, :]) * samples[None, :]
                    cache.update(key=key, BT=np.ascontiguousarray(B.T))
                BT = cache["BT"]
            return pref * np.exp(-nu * z * w) * (A @ BT)
        return _pointwise(pairs, z, w)

    rep = None
    if psi.representation is not None and psi.representation.kind == "uchp" and psi.representation.nu == nu:
        s = math.sqrt(nu / math.pi)
        rep = Representation("monomial", nu, tuple(((m, n), cf * s * nu ** (m + n))
                                                   for (m, n), cf in psi.representation.terms))
    return FunctionHandle("C2", evaluate, rep, f"T[{psi.label}]")


def sample_bicomplex(phi: FunctionHandle, nu: float, N: int = N_BICOMPLEX, exact: bool = False,
                     chunk: int = 160) -> np.ndarray:
    """Values ``phi(z_i, w_j)`` on the C^2 tensor grid, rows indexed by z."""
    z, _ = _complex_nodes(nu, N)
    ev = phi.exact if exact else phi
    rows = [np.asarray(ev(z[s : s + chunk, None], z[None, :]), dtype=complex) for s in range(0, z.size, chunk)]
    out = np.vstack([np.broadcast_to(r, (r.shape[0], z.size)) for r in rows])
    if not np.all(np.isfinite(out)):
        raise QuadratureError(f"{phi.label!r} is non-finite on the C2 grid")
    return out


def norm_sq_bicomplex(phi: FunctionHandle, nu: float, N: int = N_BICOMPLEX, samples=None) -> float:
    """Squared norm in the Gaussian-weighted space on C^2."""
    if samples is None:
        samples = sample_bicomplex(phi, nu, N)
    _, logw = _complex_nodes(nu, N)
    w = np.exp(logw)
    parts = [float(w[s : s + 160] @ np.abs(samples[s : s + 160]) ** 2 @ w) for s in range(0, w.size, 160)]
    return math.fsum(parts)


def norm_sq_complex(f: FunctionHandle, nu: float, N: int = N_COMPLEX) -> float:
    """Squared norm in the Gaussian-weighted space on C."""
    xi, logw = _complex_nodes(nu, N)
    return float(np.exp(logw) @ np.abs(_samples(f, xi)) ** 2)


def t_inverse(phi: FunctionHandle, nu: float, N: int = N_BICOMPLEX, samples=None,
              chunk: int = 160) -> FunctionHandle:
    """Inverse transform from C^2 back to C by a Gauss-Hermite rule on C^2.

    The grid values of ``phi`` are sampled once, on first use, and reused for
    every output point; pass ``samples`` to share them with a norm computation.
    """
    _require(phi, "C2", "t_inverse")
    nu = check_nu(nu)
    z, logw = _complex_nodes(nu, N)
    zb = np.conj(z)
    pref = (nu / math.pi) ** 1.5
    lock = threading.Lock()
    cache = {}

    def weighted():
        with lock:
            if "G" not in cache:
                S = samples if samples is not None else sample_bicomplex(phi, nu, N)
                cache["G"] = np.exp(-nu * zb[:, None] * zb[None, :] + logw[:, None] + logw[None, :]) * S
            return cache["G"]

    def block(xi):
        G = weighted()
        E1 = np.exp(nu * xi[:, None] * zb[None, :])
        E2 = np.exp(nu * np.conj(xi)[:, None] * zb[None, :])
        acc = np.zeros(xi.size, dtype=complex)
        comp = np.zeros(xi.size, dtype=complex)
        for s in range(0, z.size, chunk):
            part = np.einsum("pj,pj->p", E1[:, s : s + chunk] @ G[s : s + chunk], E2)
            y = part - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
        return pref * acc

    rep = None
    if phi.representation is not None and phi.representation.kind == "monomial" and phi.representation.nu == nu:
        s = math.sqrt(nu / math.pi)
        rep = Representation("uchp", nu, tuple(((m, n), cf / (s * nu ** (m + n)))
                                               for (m, n), cf in phi.representation.terms))
    return FunctionHandle("C", lambda xi: _pointwise(block, xi), rep, f"Tinv[{phi.label}]")


# ---------------------------------------------------------- level-pair transform


def t_pair(psi: FunctionHandle, nu: float, n: int, n_prime: int, N: int = N_COMPLEX) -> FunctionHandle:
    """Transform between Landau levels n and n' with the UCHP ``H_{n,n'}(xi - z)`` kernel."""
    psi = as_complex_function(psi)
    nu = check_nu(nu)
    xi, logw = _complex_nodes(nu, N)
    px = _samples(psi, xi)
    xib = np.conj(xi)
    pref = (-1) ** n_prime * nu / (math.pi * math.sqrt(factorial(n) * factorial(n_prime) * nu ** (n + n_prime)))
    H = uchp(n, n_prime, nu)

    def block(z):
        z = z[:, None]
        vals = np.exp(nu * xib[None, :] * z + logw[None, :]) * H(xi[None, :] - z)
        return pref * (vals @ px)

    return FunctionHandle("C", lambda z: _pointwise(block, z, chunk=64), label=f"T{n},{n_prime}[{psi.label}]")


# ----------------------------------------------------------------- Fourier


def shifted_fourier(phi: FunctionHandle, nu: float, N: int = N_COMPLEX) -> FunctionHandle:
    """``(nu/2pi) int exp((nu/2)(xi - i u)(conj xi - i conj u)) phi(u) dlambda(u)``.

    The ``exp(-(nu/2)|u|^2)`` part of the kernel is the quadrature weight.
    """
    phi = as_complex_function(phi)
    nu = check_nu(nu)
    u, logw = _complex_nodes(nu / 2, N)
    pu = _samples(phi, u)
    ub = np.conj(u)
    pref = nu / (2 * math.pi)

    def block(xi):
        x = xi[:, None]
        expo = nu / 2 * np.abs(x) ** 2 - 1j * nu * (x * ub[None, :]).real + logw[None, :]
        return pref * (np.exp(expo) @ pu)

    return FunctionHandle("C", lambda xi: _pointwise(block, xi), label=f"F~[{phi.label}]")


def fourier(f: FunctionHandle, nu: float, rate: float, N: int = N_COMPLEX) -> FunctionHandle:
    """Plain Fourier transform ``(nu/2pi) int exp(-i nu Re(xi conj u)) f(u) dlambda(u)``.

    ``f`` must decay like ``exp(-rate |u|^2)``; that Gaussian is divided out
    and used as the quadrature weight.
    """
    f = as_complex_function(f)
    u, logw = _complex_nodes(rate, N)
    fu = _samples(f, u) * np.exp(rate * np.abs(u) ** 2)
    ub = np.conj(u)
    pref = nu / (2 * math.pi)

    def block(xi):
        expo = -1j * nu * (xi[:, None] * ub[None, :]).real + logw[None, :]
        return pref * (np.exp(expo) @ fu)

    return FunctionHandle("C", lambda xi: _pointwise(block, xi), label=f"F[{f.label}]")


# ----------------------------------------------------------------- Wigner


def wigner_line(f: FunctionHandle, nu: float, x, y, L: float = LINE_HALF_WIDTH, N: int = N_LINE):
    """Wigner transform values and the largest endpoint magnitude of the t-integrand."""
    _require(f, "R2", "wigner")
    t, wt = line_nodes(L, N)
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    out = np.empty(x.size, dtype=complex)
    worst = 0.0
    for s in range(0, x.size, 64):
        xs, ys = x[s : s + 64, None], y[s : s + 64, None]
        vals = np.exp(-1j * nu * xs * t[None, :]) * f(ys + t[None, :] / 2, ys - t[None, :] / 2)
        worst = max(worst, float(np.max(np.abs(vals[:, [0, -1]]))))
        out[s : s + 64] = vals @ wt
    return out / math.sqrt(2 * math.pi), worst


def wigner(f: FunctionHandle, nu: float, L: float = LINE_HALF_WIDTH, N: int = N_LINE) -> FunctionHandle:
    """``(2 pi)^{-1/2} int exp(-i nu x t) f(y + t/2, y - t/2) dt`` on R^2.

    Issues :class:`DecayWarning` when the integrand is above 1e-16 at ``t = +-L``.
    """
    nu = check_nu(nu)

    def evaluate(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
        if np.any(x.imag != 0) or np.any(y.imag != 0):
            raise ValueError("the Wigner transform is evaluated at real points only")
        vals, worst = wigner_line(f, nu, x.real, y.real, L, N)
        if worst > DECAY_THRESHOLD:
            warnings.warn(f"Wigner integrand is {worst:.2e} at t = +-{L}", DecayWarning, stacklevel=3)
        return vals.reshape(x.shape) if x.shape else complex(vals[0])

    return FunctionHandle("R2", evaluate, label=f"W[{f.label}]")


# ------------------------------------------------------- coherent-states kernel


@dataclass(frozen=True)
class Basis:
    """Indexed family of functions with known squared norms."""

    func: Callable  # (index, points...) -> values
    norm_sq: Callable  # index -> positive float
    indices: Callable  # truncation -> iterable of indices
    arity: int = 1


def hermite_basis(nu: float) -> Basis:
    return Basis(lambda m, x: real_hermite(m, nu)(np.asarray(x, complex)),
                 lambda m: real_hermite_norm_sq(m, nu), lambda N: range(N))


def uchp_level_basis(n: int, nu: float) -> Basis:
    """``m -> H^nu_{m,n}`` for a fixed Landau level n."""
    return Basis(lambda m, z: uchp(m, n, nu)(z), lambda m: uchp_norm_sq(m, n, nu), lambda N: range(N))


def uchp_basis(nu: float) -> Basis:
    return Basis(lambda mn, z: uchp(mn[0], mn[1], nu)(z), lambda mn: uchp_norm_sq(mn[0], mn[1], nu),
                 lambda N: [(m, n) for m in range(N) for n in range(N)])


def monomial_basis(nu: float) -> Basis:
    return Basis(lambda mn, u, v: np.asarray(u, complex) ** mn[0] * np.asarray(v, complex) ** mn[1],
                 lambda mn: monomial_norm_sq(mn[0], mn[1], nu),
                 lambda N: [(m, n) for m in range(N) for n in range(N)], arity=2)


def cst_kernel(basis_x: Basis, basis_y: Basis, truncation: int) -> Callable:
    """Truncated coherent-states kernel ``sum conj(e_k(x)) f_k(y) / (|e_k| |f_k|)``.

    Returns ``kernel(x, *y)``; ``x`` is a point (tuple for two-variable bases
    is not needed on the x side here) and ``y`` the target point(s).
    """
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    idx_x = list(basis_x.indices(truncation))
    idx_y = list(basis_y.indices(truncation))
    if len(idx_x) != len(idx_y):
        raise ValueError("bases must have the same number of indices at this truncation")
    norms = []
    for i, j in zip(idx_x, idx_y):
        a, b = basis_x.norm_sq(i), basis_y.norm_sq(j)
        if not (a > 0 and b > 0):
            raise ValueError(f"basis norms must be positive, got {a} and {b} at index {i}")
        norms.append(math.sqrt(a * b))

    def kernel(x, *y):
        total = 0.0
        for i, j, nrm in zip(idx_x, idx_y, norms):
            total = total + np.conj(basis_x.func(i, x)) * basis_y.func(j, *y) / nrm
        return total

    return kernel


def level_kernel_closed_form(x, z, n: int, nu: float):
    """Closed-form kernel of the level-n transform."""
    z = np.asarray(z, dtype=complex)
    pref = (nu / math.pi) ** 0.75 / math.sqrt(2.0**n * nu**n * factorial(n))
    return pref * np.exp(-nu / 2 * z**2 + math.sqrt(2) * nu * x * z) * real_hermite(n, nu)((z + np.conj(z)) / math.sqrt(2) - x)


def t_kernel(xi, u, v, nu: float):
    """Kernel of T with the Gaussian weight of xi removed."""
    return (nu / math.pi) ** 1.5 * np.exp(nu * (u * np.conj(xi) + v * xi - u * v))


# ------------------------------------------------------- integral representation


def integral_rep_uchp(m: int, n: int, alpha: complex, beta: complex, gauss: float, z, N: int = N_COMPLEX):
    """UCHP value from its Gaussian integral representation, ``nu = alpha*beta/gauss``."""
    ab = complex(alpha) * complex(beta)
    if abs(ab.imag) > 1e-14 * max(abs(ab), 1.0) or not ab.real > 0:
        raise ValueError(f"alpha*beta must be real and positive, got {ab}")
    if not gauss > 0:
        raise ValueError("gauss must be positive")
    nu = ab.real / gauss
    xi, logw = _complex_nodes(gauss, N)
    xib = np.conj(xi)

    def block(zz):
        zz = zz[:, None]
        expo = (nu * np.abs(zz) ** 2 + alpha * xi[None, :] * np.conj(zz) - beta * xib[None, :] * zz
                + logw[None, :])
        return np.exp(expo) @ (xi**m * xib**n)

    pref = gauss / math.pi * (-alpha) ** m * beta**n
    return pref * _pointwise(block, z)


def gaussian_integral_rep(alpha: complex, beta: complex, gauss: float, z, N: int = N_COMPLEX):
    """``int exp(-gauss |xi|^2 + alpha xi conj z - beta conj xi z) dlambda``."""
    xi, logw = _complex_nodes(gauss, N)

    def block(zz):
        zz = zz[:, None]
        return np.exp(alpha * xi[None, :] * np.conj(zz) - beta * np.conj(xi)[None, :] * zz + logw[None, :]).sum(1)

    return _pointwise(block, z)


# ---------------------------------------------------------------- dispatch


class TransformKind(str, Enum):
    B1 = "B1"
    B1_LEVEL = "B1_level"
    B2 = "B2"
    T = "T"
    T_INVERSE = "T_inverse"
    T_PAIR = "T_pair"
    SHIFTED_FOURIER = "shifted_fourier"
    WIGNER = "wigner"
    G_COMPOSITE = "G_composite"


@dataclass(frozen=True)
class TransformSpec:
    kind: TransformKind
    nu: float
    levels: tuple = ()
    orders: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", TransformKind(self.kind))
        check_nu(self.nu)
        need = {TransformKind.B1_LEVEL: 1, TransformKind.T_PAIR: 2}.get(self.kind, 0)
        if len(self.levels) != need:
            raise ValueError(f"{self.kind.value} takes {need} level index(es), got {self.levels}")
        if any(int(k) != k or k < 0 for k in self.levels):
            raise ValueError("levels must be nonnegative integers")

    def apply(self, f: FunctionHandle) -> FunctionHandle:
        o = self.orders
        k, nu = self.kind, self.nu
        if k is TransformKind.B1:
            return bargmann1(f, nu, o.get("N_r", N_REAL))
        if k is TransformKind.B1_LEVEL:
            return bargmann1_level(f, nu, self.levels[0], o.get("N_r", N_REAL))
        if k is TransformKind.B2:
            return bargmann2(f, nu, o.get("N_r", N_REAL))
        if k is TransformKind.T:
            return t_forward(f, nu, o.get("N_c", N_COMPLEX))
        if k is TransformKind.T_INVERSE:
            return t_inverse(f, nu, o.get("N_c2", N_BICOMPLEX))
        if k is TransformKind.T_PAIR:
            return t_pair(f, nu, self.levels[0], self.levels[1], o.get("N_c", N_COMPLEX))
        if k is TransformKind.SHIFTED_FOURIER:
            return shifted_fourier(f, nu, o.get("N_c", N_COMPLEX))
        if k is TransformKind.WIGNER:
            return wigner(f, nu, o.get("L", LINE_HALF_WIDTH), o.get("N_line", N_LINE))
        if k is TransformKind.G_COMPOSITE:
            return g_composite(f, nu, o.get("N_r", N_REAL))
        raise AssertionError(k)


# ------------------------------------------------------- holomorphic derivatives


def contour_derivative(f: Callable, point, radius: float = 0.25, nodes: int = 32):
    """Derivative of a holomorphic function of one variable by the trapezoid
    rule on a circle: ``f'(p) = mean(f(p + r e^{i theta}) e^{-i theta}) / r``.

    ``f`` maps an array of complex points to values of the same shape.
    """
    p = np.asarray(point, dtype=complex)
    theta = 2 * np.pi * np.arange(nodes) / nodes
    ring = np.exp(1j * theta)
    vals = np.asarray(f(p[..., None] + radius * ring), dtype=complex)
    return np.mean(vals * np.conj(ring), axis=-1) / radius


def partial_derivatives(F: FunctionHandle, z, w, radius: float = 0.25, nodes: int = 32):
    """``(dF/dz, dF/dw)`` of a handle on C^2 holomorphic in each variable."""
    z, w = np.broadcast_arrays(np.asarray(z, complex), np.asarray(w, complex))
    dz = contour_derivative(lambda s: F(s, w[..., None]), z, radius, nodes)
    dw = contour_derivative(lambda s: F(z[..., None], s), w, radius, nodes)
    return dz, dw


def memoize(f: FunctionHandle) -> FunctionHandle:
    """Handle that reuses the values of its most recent evaluation.

    Useful when a quadrature-defined handle is sampled repeatedly on the
    same node set (a norm and a composed transform on one grid).
    """
    lock = threading.Lock()
    last = {}

    def ev(*args):
        arrs = [np.asarray(a, dtype=complex) for a in args]
        key = tuple((a.shape, a.tobytes()) for a in arrs)
        with lock:
            if last.get("key") == key:
                return last["value"]
        value = f(*arrs)
        with lock:
            last.update(key=key, value=value)
        return value

    return FunctionHandle(f.domain, ev, f.representation, f.label)
