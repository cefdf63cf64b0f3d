"""Closed-form generating functions and their truncated-series counterparts.

Every formula id has two evaluators.  ``closed_form`` uses elementary
functions plus a single polynomial evaluation; ``series`` sums the defining
expansion using only the point recurrences in :mod:`sbhermite.polynomials`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .polynomials import (
    check_nu,
    hermite_eval,
    hermite_table,
    laguerre_eval,
    real_hermite,
    uchp,
    uchp_table,
)

DEFAULT_TERMS = 64
UNIT_CIRCLE_TOL = 1e-12


class GenFormulaId(str, Enum):
    EXP2VAR = "exp2var"
    ONE_INDEX = "one_index"
    MEHLER = "mehler"
    BILINEAR = "bilinear"
    MIXED_REAL_COMPLEX = "mixed_real_complex"
    LAGUERRE_DIAG = "laguerre_diag"
    DIAG_T = "diag_t"
    DIAG_T1 = "diag_t1"
    KERNEL_LEVEL_N = "kernel_level_n"


PARAMETERS = {
    GenFormulaId.EXP2VAR: ("u", "v", "nu", "z"),
    GenFormulaId.ONE_INDEX: ("u", "n", "nu", "z"),
    GenFormulaId.MEHLER: ("t", "m", "mp", "nu", "z", "w"),
    GenFormulaId.BILINEAR: ("u", "t", "mp", "nu", "z", "w"),
    GenFormulaId.MIXED_REAL_COMPLEX: ("xi", "x", "mu", "nu", "n", "z"),
    GenFormulaId.LAGUERRE_DIAG: ("t", "m", "nu", "z", "w"),
    GenFormulaId.DIAG_T: ("t", "m", "nu", "z"),
    GenFormulaId.DIAG_T1: ("m", "nu", "z"),
    GenFormulaId.KERNEL_LEVEL_N: ("x", "z", "n", "nu"),
}


class DomainError(ValueError):
    """A parameter lies outside the validity domain of an identity."""


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail: float  # largest |term| on the truncation boundary
    terms: int


def _validate(fid: GenFormulaId, params: dict) -> dict:
    expected = PARAMETERS[fid]
    missing = [k for k in expected if k not in params]
    extra = [k for k in params if k not in expected]
    if missing or extra:
        raise TypeError(f"{fid.value} expects parameters {expected}; missing {missing}, unexpected {extra}")
    p = dict(params)
    p["nu"] = check_nu(p["nu"])
    for key in ("m", "mp", "n"):
        if key in p and (int(p[key]) != p[key] or p[key] < 0):
            raise DomainError(f"{key} must be a nonnegative integer, got {p[key]}")
    if "t" in p and abs(abs(p["t"]) - 1.0) > UNIT_CIRCLE_TOL:
        raise DomainError(f"|t| = 1 required, got |t| = {abs(p['t'])!r}")
    if fid is GenFormulaId.BILINEAR and not p["nu"] * abs(p["u"]) < 1.0:
        raise DomainError(f"nu*|u| < 1 required, got {p['nu'] * abs(p['u'])!r}")
    if fid is GenFormulaId.MIXED_REAL_COMPLEX:
        if p["xi"] == 0:
            raise DomainError("xi != 0 required")
        p["mu"] = check_nu(p["mu"])
    return p


def _coerce(fid) -> GenFormulaId:
    return fid if isinstance(fid, GenFormulaId) else GenFormulaId(fid)


def closed_form(fid, **params) -> complex:
    """Right-hand side of the generating-function identity ``fid``."""
    fid = _coerce(fid)
    p = _validate(fid, params)
    nu = p["nu"]
    if fid is GenFormulaId.EXP2VAR:
        u, v, z = p["u"], p["v"], p["z"]
        return complex(cmath.exp(nu * (u * z + v * z.conjugate() - u * v)))
    if fid is GenFormulaId.ONE_INDEX:
        u, n, z = p["u"], p["n"], complex(p["z"])
        return complex(nu**n * (z.conjugate() - u) ** n * cmath.exp(nu * u * z))
    if fid is GenFormulaId.MEHLER:
        t, m, mp = p["t"], p["m"], p["mp"]
        z, w = complex(p["z"]), complex(p["w"])
        return complex((-t) ** mp * uchp(m, mp, nu)(z - t * w) * cmath.exp(nu * t * w * z.conjugate()))
    if fid is GenFormulaId.BILINEAR:
        u, t, mp = p["u"], p["t"], p["mp"]
        z, w = complex(p["z"]), complex(p["w"])
        base = z.conjugate() - complex(t).conjugate() * w.conjugate() - u
        return complex((-nu * t) ** mp * base**mp
                       * cmath.exp(nu * t * z.conjugate() * w + nu * u * (z - t * w)))
    if fid is GenFormulaId.MIXED_REAL_COMPLEX:
        xi, x, mu, n = p["xi"], p["x"], p["mu"], p["n"]
        zb = complex(p["z"]).conjugate()
        z = complex(p["z"])
        arg = zb + nu * z / (2 * mu * xi**2) - x / xi
        return complex(cmath.exp(-mu * (xi**2 * zb**2 - 2 * x * xi * zb)) * hermite_eval(n, mu * xi**2, arg))
    if fid is GenFormulaId.LAGUERRE_DIAG:
        t, m = p["t"], p["m"]
        z, w = complex(p["z"]), complex(p["w"])
        return complex((nu * t) ** m * math.factorial(m) * laguerre_eval(m, nu * abs(z - t * w) ** 2)
                       * cmath.exp(nu * t * w * z.conjugate()))
    if fid is GenFormulaId.DIAG_T:
        t, m, z = p["t"], p["m"], complex(p["z"])
        return complex(math.factorial(m) * (nu * t) ** m * laguerre_eval(m, nu * abs(1 - t) ** 2 * abs(z) ** 2)
                       * cmath.exp(nu * t * abs(z) ** 2))
    if fid is GenFormulaId.DIAG_T1:
        m, z = p["m"], complex(p["z"])
        return complex(math.factorial(m) * nu**m * math.exp(nu * abs(z) ** 2))
    if fid is GenFormulaId.KERNEL_LEVEL_N:
        x, z, n = p["x"], complex(p["z"]), p["n"]
        pref = (nu / math.pi) ** 0.75 / math.sqrt(2.0**n * nu**n * math.factorial(n))
        arg = (z + z.conjugate()) / math.sqrt(2) - x
        return complex(pref * cmath.exp(-nu / 2 * z**2 + math.sqrt(2) * nu * x * z) * real_hermite(n, nu)(arg))
    raise AssertionError(fid)


def _powers_over_factorial(x: complex, count: int) -> np.ndarray:
    """``x^k / k!`` for ``k < count`` by cumulative products (no overflow in k!)."""
    out = np.empty(count, dtype=complex)
    out[0] = 1.0
    for k in range(1, count):
        out[k] = out[k - 1] * x / k
    return out


def _finish(terms: np.ndarray) -> SeriesValue:
    terms = np.asarray(terms)
    if terms.ndim == 1:
        tail = abs(terms[-1])
    else:
        tail = max(np.max(np.abs(terms[-1, :])), np.max(np.abs(terms[:, -1])))
    return SeriesValue(complex(np.sum(terms)), float(tail), terms.shape[0])


def series(fid, terms: int = DEFAULT_TERMS, **params) -> SeriesValue:
    """Truncated expansion of ``fid`` keeping indices below ``terms``."""
    fid = _coerce(fid)
    p = _validate(fid, params)
    nu = p["nu"]
    N = int(terms)
    if N < 1:
        raise ValueError("terms must be >= 1")
    if fid is GenFormulaId.EXP2VAR:
        H = uchp_table(N, N, nu, p["z"])
        a = _powers_over_factorial(p["u"], N)
        b = _powers_over_factorial(p["v"], N)
        return _finish(a[:, None] * b[None, :] * H)
    if fid is GenFormulaId.ONE_INDEX:
        H = uchp_table(N, p["n"] + 1, nu, p["z"])[:, p["n"]]
        return _finish(_powers_over_factorial(p["u"], N) * H)
    if fid in (GenFormulaId.MEHLER, GenFormulaId.LAGUERRE_DIAG, GenFormulaId.DIAG_T, GenFormulaId.DIAG_T1):
        m = p["m"]
        mp = p.get("mp", m)
        t = p.get("t", 1.0)
        z = p["z"]
        w = p.get("w", z)
        Hz = uchp_table(m + 1, N, nu, z)[m, :]
        Hw = uchp_table(N, mp + 1, nu, w)[:, mp]
        coef = _powers_over_factorial(t / nu, N)
        return _finish(coef * Hz * Hw)
    if fid is GenFormulaId.BILINEAR:
        mp = p["mp"]
        Hz = uchp_table(N, N, nu, p["z"])
        Hw = uchp_table(N, mp + 1, nu, p["w"])[:, mp]
        a = _powers_over_factorial(p["u"], N)
        b = _powers_over_factorial(p["t"] / nu, N)
        return _finish(a[:, None] * (b * Hw)[None, :] * Hz)
    if fid is GenFormulaId.MIXED_REAL_COMPLEX:
        n = p["n"]
        Hx = hermite_table(N, p["mu"], p["x"])
        Hz = np.conj(uchp_table(N, n + 1, nu, p["z"])[:, n])
        return _finish(_powers_over_factorial(p["xi"] / nu, N) * Hx * Hz)
    if fid is GenFormulaId.KERNEL_LEVEL_N:
        n = p["n"]
        pref = (nu / math.pi) ** 0.75 / math.sqrt(math.factorial(n) * nu**n)
        Hx = hermite_table(N, nu, p["x"])
        Hz = uchp_table(N, n + 1, nu, p["z"])[:, n]
        coef = _powers_over_factorial(1.0 / (math.sqrt(2.0) * nu), N)
        return _finish(pref * coef * Hx * Hz)
    raise AssertionError(fid)
