"""Registry of numerical identity checks.

Each check evaluates one identity along two independent routes (quadrature
or truncated series against a closed form, or two different transform
compositions) and condenses the disagreement into a :class:`CheckReport`.
"""
from __future__ import annotations

import hashlib
import json
import math
import threading
import time
import warnings
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.stats import qmc

from . import __version__
from . import genfuncs as gf
from . import transforms as tr
from .config import RunConfig
from .genfuncs import DomainError
from .polynomials import (
    check_nu,
    landau_apply,
    real_hermite,
    uchp,
    uchp_norm_sq,
    uchp_rescaling_check,
)
from .quadrature import QuadratureError, integrate_gaussian_c


class CheckId(str, Enum):
    ACTION_T = "action_T"
    VANISHING = "vanishing"
    REPRODUCING = "reproducing"
    ISOMETRY_T = "isometry_T"
    INVERSE_T = "inverse_T"
    IMAGE_FN = "image_Fn"
    FOURIER_CONJUGATION = "fourier_conjugation"
    RESTRICTION_FOURIER = "restriction_fourier"
    FOURIER_EIGEN = "fourier_eigen"
    B2_GAMMA = "b2_gamma"
    WIGNER_INTERTWINE = "wigner_intertwine"
    ACTION_TPAIR = "action_Tpair"
    UNITARY_TPAIR = "unitary_Tpair"
    MEHLER = "mehler"
    BILINEAR_GEN = "bilinear_gen"
    EXP_GEN = "exp_gen"
    ONE_INDEX_GEN = "one_index_gen"
    MIXED_GEN = "mixed_gen"
    B1_LEVEL_ACTION = "b1_level_action"
    KERNEL_LEVEL = "kernel_level"
    LAGUERRE_DIAG = "laguerre_diag"
    DIAG_PROBABILITY = "diag_probability"
    LANDAU_EIGEN = "landau_eigen"
    ANNIHILATION_IMAGE = "annihilation_image"
    NORMS = "norms"
    RESCALING = "rescaling"
    INTEGRAL_REP = "integral_rep"
    GAUSSIAN_REP = "gaussian_rep"


# Plain statement of what each check compares.
REFS = {
    CheckId.ACTION_T: "Gaussian-kernel integral of H_{m,n} equals (pi/nu) nu^{m+n} z^m w^n",
    CheckId.VANISHING: "Gaussian mean of H_{m,n} vanishes when m n >= 1",
    CheckId.REPRODUCING: "Gaussian integral of exp(nu(z conj xi + w xi)) equals (pi/nu) exp(nu z w)",
    CheckId.ISOMETRY_T: "T preserves the weighted L2 norm (C to C^2)",
    CheckId.INVERSE_T: "inverse of T recovers UCHP combinations",
    CheckId.IMAGE_FN: "T maps Landau level n onto w^n times holomorphic functions of z",
    CheckId.FOURIER_CONJUGATION: "inverse(T) Gamma_{-i} T equals the shifted Fourier transform; ground-state direction",
    CheckId.RESTRICTION_FOURIER: "Gamma_{-i} of the diagonal restriction of T equals the shifted Fourier transform at nu/2",
    CheckId.FOURIER_EIGEN: "H_{m,n} is an eigenfunction of the shifted Fourier transform with eigenvalue i^{m+n}",
    CheckId.B2_GAMMA: "two-dimensional Segal-Bargmann transform equals Gamma_{g_i} T",
    CheckId.WIGNER_INTERTWINE: "T of the Wigner transform equals a Gaussian multiple of Gamma_{-i g_i} T^{nu/2}",
    CheckId.ACTION_TPAIR: "level-pair transform maps H_{m,n} to a multiple of H_{m,n'}",
    CheckId.UNITARY_TPAIR: "level-pair transform is norm preserving and inverted by the reversed pair",
    CheckId.MEHLER: "Mehler-type bilinear generating function on the unit circle",
    CheckId.BILINEAR_GEN: "bilinear generating function in u and t",
    CheckId.EXP_GEN: "exponential generating function in two variables",
    CheckId.ONE_INDEX_GEN: "generating function in the first index at fixed second index",
    CheckId.MIXED_GEN: "generating function mixing real Hermite and conjugate UCHP",
    CheckId.B1_LEVEL_ACTION: "level-n Segal-Bargmann transform maps H_m to a multiple of H_{m,n}",
    CheckId.KERNEL_LEVEL: "kernel of the level-n transform as a generating function",
    CheckId.LAGUERRE_DIAG: "diagonal Mehler sum as a Laguerre polynomial",
    CheckId.DIAG_PROBABILITY: "weighted sums of |H_{m,n}|^2 over n",
    CheckId.LANDAU_EIGEN: "H_{m,n} is a Landau-operator eigenfunction with eigenvalue n",
    CheckId.ANNIHILATION_IMAGE: "image of the composite transform is annihilated by d/dz + i d/dw",
    CheckId.NORMS: "Gram matrix of H_{m,n} is diagonal with entries (pi/nu) m! n! nu^{m+n}",
    CheckId.RESCALING: "H^nu_{m,n}(z) equals the nu=1 polynomial at sqrt(nu) z times nu^{(m+n)/2}",
    CheckId.INTEGRAL_REP: "Gaussian integral representation of H_{m,n}",
    CheckId.GAUSSIAN_REP: "closed form of the shifted complex Gaussian integral",
}

TOLERANCE_CLASS = {
    CheckId.ACTION_T: "composed",
    CheckId.VANISHING: "vanishing",
    CheckId.REPRODUCING: "quadrature",
    CheckId.ISOMETRY_T: "composed",
    CheckId.INVERSE_T: "roundtrip",
    CheckId.IMAGE_FN: "composed",
    CheckId.FOURIER_CONJUGATION: "composed",
    CheckId.RESTRICTION_FOURIER: "composed",
    CheckId.FOURIER_EIGEN: "composed",
    CheckId.B2_GAMMA: "representation",
    CheckId.WIGNER_INTERTWINE: "composed",
    CheckId.ACTION_TPAIR: "composed",
    CheckId.UNITARY_TPAIR: "composed",
    CheckId.MEHLER: "series",
    CheckId.BILINEAR_GEN: "series",
    CheckId.EXP_GEN: "series",
    CheckId.ONE_INDEX_GEN: "series",
    CheckId.MIXED_GEN: "series",
    CheckId.B1_LEVEL_ACTION: "quadrature",
    CheckId.KERNEL_LEVEL: "quadrature",
    CheckId.LAGUERRE_DIAG: "series",
    CheckId.DIAG_PROBABILITY: "series",
    CheckId.LANDAU_EIGEN: "coefficient",
    CheckId.ANNIHILATION_IMAGE: "quadrature",
    CheckId.NORMS: "quadrature",
    CheckId.RESCALING: "coefficient",
    CheckId.INTEGRAL_REP: "representation",
    CheckId.GAUSSIAN_REP: "quadrature",
}

SCHEMA_VERSION = 1


# ------------------------------------------------------------------ reports


def _jsonable(v):
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


@dataclass
class CheckReport:
    check_id: str
    params: dict
    residual: float
    tolerance: float
    passed: bool
    orders: dict
    provenance: str
    ref: str
    resolution: Optional[dict] = None
    diagnostics: dict = field(default_factory=dict)
    seconds: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        self.params = _jsonable(self.params)
        self.orders = _jsonable(self.orders)
        self.diagnostics = _jsonable(self.diagnostics)
        if self.resolution is not None:
            self.resolution = _jsonable(self.resolution)
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)
        self.passed = bool(self.passed)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "params": self.params,
            "residual": _jsonable(self.residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "orders": self.orders,
            "seconds": self.seconds,
            "resolution": self.resolution,
            "diagnostics": self.diagnostics,
            "provenance": self.provenance,
            "ref": self.ref,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        res = d["residual"]
        return cls(
            check_id=d["check_id"],
            params=d["params"],
            residual=float(res),
            tolerance=d["tolerance"],
            passed=d["pass"],
            orders=d["orders"],
            provenance=d["provenance"],
            ref=d["ref"],
            resolution=d.get("resolution"),
            diagnostics=d.get("diagnostics", {}),
            seconds=d.get("seconds"),
        )


@dataclass
class SuiteSummary:
    reports: list
    traceability: dict
    config: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def failed_ids(self) -> list:
        return sorted({r.check_id for r in self.reports if not r.passed})


# ------------------------------------------------------------------ context


def relative_residual(lhs, rhs) -> float:
    """``max |lhs - rhs| / max(|rhs|, 1)`` over all sampled values."""
    lhs = np.asarray(lhs, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    return float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1.0)))


def _provenance(config: RunConfig) -> str:
    digest = hashlib.sha256(json.dumps(config.numerics(), sort_keys=True).encode()).hexdigest()[:12]
    return f"sbhermite-{__version__}+cfg.{digest}.seed{config.seed}"


class Context:
    """Per-run state: config, seeded generators and shared C^2 samples."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.provenance = _provenance(config)
        self._cache = {}
        self._lock = threading.Lock()

    def rng(self, cid: CheckId, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, zlib.crc32(cid.value.encode()), salt])

    def points(self, cid: CheckId, count: int, radius: float, inner: float = 0.0, salt: int = 0):
        """Low-discrepancy points ``(z, w)`` in an annulus of the bidisc."""
        seed = int(self.rng(cid, salt).integers(2**31))
        u = qmc.Halton(d=4, scramble=True, seed=seed).random(count)
        r1 = np.sqrt(inner**2 + (radius**2 - inner**2) * u[:, 0])
        r2 = np.sqrt(inner**2 + (radius**2 - inner**2) * u[:, 2])
        z = r1 * np.exp(2j * np.pi * u[:, 1])
        w = r2 * np.exp(2j * np.pi * u[:, 3])
        return z, w

    def report(self, cid: CheckId, params: dict, residual: float, orders: Optional[dict] = None,
               resolution: Optional[dict] = None, diagnostics: Optional[dict] = None,
               passed: Optional[bool] = None, tolerance: Optional[float] = None) -> CheckReport:
        tol = self.config.tolerance(TOLERANCE_CLASS[cid]) if tolerance is None else tolerance
        ok = (residual <= tol) if passed is None else passed
        return CheckReport(
            check_id=cid.value, params=params, residual=residual, tolerance=tol, passed=ok,
            orders=orders or {}, provenance=self.provenance, ref=REFS[cid],
            resolution=resolution, diagnostics=diagnostics or {},
        )

    def combo(self, index: int):
        """Random UCHP combination number ``index`` and its T on the C^2 grid."""
        key = ("combo", index)
        with self._lock:
            return self._combo(key, index)

    def _combo(self, key, index: int):
        if key not in self._cache:
            cfg = self.config
            nu = cfg.nus[index % len(cfg.nus)]
            rng = np.random.default_rng([cfg.seed, 0xC2, index])
            psi = tr.random_uchp_combination(rng, cfg.max_order_c2, nu, terms=4)
            T = tr.t_forward(psi, nu, cfg.N_c)
            S = tr.sample_bicomplex(T, nu, cfg.N_c2, chunk=cfg.chunk)
            self._cache[key] = (nu, psi, T, S)
        return self._cache[key]


def _sweep_nus(params: dict, config: RunConfig):
    if "nu" in params:
        return (check_nu(params["nu"]),)
    return config.nus


def _order(params: dict, key: str, default: int) -> int:
    v = params.get(key, default)
    if int(v) != v or v < 0:
        raise DomainError(f"{key} must be a nonnegative integer, got {v}")
    return int(v)


def _exact_norm_sq(psi: tr.FunctionHandle) -> float:
    rep = psi.representation
    return math.fsum(abs(c) ** 2 * uchp_norm_sq(m, n, rep.nu) for (m, n), c in rep.terms)


# ------------------------------------------------------------------ checks


def check_action_T(ctx: Context, params: dict):
    cfg = ctx.config
    top = _order(params, "max_order", cfg.max_order)
    z, w = ctx.points(CheckId.ACTION_T, cfg.points, cfg.radius)
    out = []
    for nu in _sweep_nus(params, cfg):
        res = 0.0
        for m in range(top + 1):
            for n in range(top + 1):
                T = tr.t_forward(tr.uchp_function(m, n, nu), nu, cfg.N_c)
                lhs = (math.pi / nu) ** 1.5 * T(z, w)
                rhs = (math.pi / nu) * nu ** (m + n) * z**m * w**n
                res = max(res, relative_residual(lhs, rhs))
        out.append(ctx.report(CheckId.ACTION_T, {"nu": nu, "max_order": top, "points": cfg.points}, res,
                              {"N_c": cfg.N_c}))
    return out


def check_vanishing(ctx: Context, params: dict):
    cfg = ctx.config
    if "m" in params or "n" in params:
        m, n = _order(params, "m", 1), _order(params, "n", 1)
        if m * n < 1:
            raise DomainError(f"constraint m*n >= 1 violated (m={m}, n={n})")
        pairs = [(m, n)]
    else:
        top = _order(params, "max_order", cfg.max_order)
        pairs = [(m, n) for m in range(1, top + 1) for n in range(1, top + 1)]
    out = []
    for nu in _sweep_nus(params, cfg):
        res = 0.0
        for m, n in pairs:
            val = integrate_gaussian_c(uchp(m, n, nu), nu, cfg.N_c)
            res = max(res, abs(val) / math.sqrt(uchp_norm_sq(m, n, nu)))
        out.append(ctx.report(CheckId.VANISHING, {"nu": nu, "pairs": len(pairs)}, res, {"N_c": cfg.N_c}))
    return out


def check_reproducing(ctx: Context, params: dict):
    cfg = ctx.config
    z, w = ctx.points(CheckId.REPRODUCING, cfg.points, cfg.radius)
    out = []
    for nu in _sweep_nus(params, cfg):
        lhs = np.array([integrate_gaussian_c(lambda x, a=a, b=b: np.exp(nu * (a * np.conj(x) + b * x)), nu, cfg.N_c)
                        for a, b in zip(z, w)])
        rhs = math.pi / nu * np.exp(nu * z * w)
        out.append(ctx.report(CheckId.REPRODUCING, {"nu": nu, "points": cfg.points}, relative_residual(lhs, rhs),
                              {"N_c": cfg.N_c}))
    return out


def check_isometry_T(ctx: Context, params: dict):
    cfg = ctx.config
    out = []
    for i in range(cfg.combos):
        nu, psi, _, S = ctx.combo(i)
        exact = _exact_norm_sq(psi)
        quad = tr.norm_sq_bicomplex(None, nu, cfg.N_c2, samples=S)
        out.append(ctx.report(CheckId.ISOMETRY_T, {"combo": i, "nu": nu, "terms": psi.representation.terms},
                              abs(quad - exact) / exact, {"N_c": cfg.N_c, "N_c2": cfg.N_c2},
                              diagnostics={"norm_sq": exact, "image_norm_sq": quad}))
    return out


def check_inverse_T(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.INVERSE_T, cfg.points, cfg.radius)
    out = []
    for i in range(cfg.combos):
        nu, psi, T, S = ctx.combo(i)
        back = tr.t_inverse(T, nu, cfg.N_c2, samples=S, chunk=cfg.chunk)
        out.append(ctx.report(CheckId.INVERSE_T, {"combo": i, "nu": nu, "terms": psi.representation.terms},
                              relative_residual(back(z), psi.exact(z)), {"N_c": cfg.N_c, "N_c2": cfg.N_c2}))
    return out


def check_image_Fn(ctx: Context, params: dict):
    cfg = ctx.config
    z, w = ctx.points(CheckId.IMAGE_FN, cfg.points, cfg.radius, inner=0.5)
    out = []
    for nu in _sweep_nus(params, cfg):
        rng = ctx.rng(CheckId.IMAGE_FN, int(nu * 1000))
        res = 0.0
        for n in range(cfg.max_order_c2 + 1):
            psi = tr.random_uchp_combination(rng, cfg.max_order_c2, nu, terms=3, level=n)
            F = tr.t_forward(psi, nu, cfg.N_c)
            quotient = tr.FunctionHandle("C2", lambda a, b, F=F, n=n: F(a, b) / np.asarray(b, complex) ** n)
            dz, dw = tr.partial_derivatives(quotient, z, w)
            res = max(res, float(np.max(np.abs(dw) / np.maximum(np.abs(quotient(z, w)), 1.0))))
        out.append(ctx.report(CheckId.IMAGE_FN, {"nu": nu, "levels": cfg.max_order_c2}, res, {"N_c": cfg.N_c}))
    return out


def _fourier_candidates(nu: float, rate: float, N: int, xi):
    """Shifted Fourier transform of exp(-rate |u|^2) against both conjugation orders."""
    phi = tr.gaussian("C", rate)
    target = tr.shifted_fourier(phi, nu, N)(xi)
    # A: M_{nu/2} F M_{-nu/2};  B: M_{-nu/2} F M_{nu/2}
    a_in = tr.ground_state(-nu / 2, phi)
    b_in = tr.ground_state(nu / 2, phi)
    a_out = np.exp(-nu / 2 * np.abs(xi) ** 2) * tr.fourier(a_in, nu, rate - nu / 2, N)(xi)
    b_out = np.exp(nu / 2 * np.abs(xi) ** 2) * tr.fourier(b_in, nu, rate + nu / 2, N)(xi)
    return relative_residual(a_out, target), relative_residual(b_out, target)


def check_fourier_conjugation(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.FOURIER_CONJUGATION, cfg.points, cfg.radius)
    top = min(_order(params, "max_order", cfg.max_order), 6)
    out = []
    for nu in _sweep_nus(params, cfg):
        rng = ctx.rng(CheckId.FOURIER_CONJUGATION, int(nu * 1000))
        coeffs = {(m, n): complex(rng.normal(), rng.normal()) / math.sqrt(uchp_norm_sq(m, n, nu))
                  for m in range(top + 1) for n in range(top + 1 - m)}
        psi = tr.uchp_combination(coeffs, nu)
        T = tr.t_forward(psi, nu, cfg.N_c)
        exact_rot = tr.FunctionHandle("C2", lambda a, b, T=T: T.exact(-1j * np.asarray(a), -1j * np.asarray(b)))
        lhs = tr.t_inverse(exact_rot, nu, cfg.N_c2, chunk=cfg.chunk)(z)
        rhs = tr.shifted_fourier(psi, nu, cfg.N_c)(z)
        out.append(ctx.report(CheckId.FOURIER_CONJUGATION,
                              {"nu": nu, "form": "inverse(T) Gamma_{-i} T", "max_degree": top},
                              relative_residual(lhs, rhs), {"N_c": cfg.N_c, "N_c2": cfg.N_c2}))
    # ground-state conjugation direction, on Gaussians exp(-rate |u|^2)
    for nu in _sweep_nus(params, cfg):
        tol = cfg.tolerance("composed")
        per = {"A": 0.0, "B": 0.0}
        for rate in (nu, 0.75 * nu, 1.5 * nu):
            ra, rb = _fourier_candidates(nu, rate, cfg.N_c, z)
            per["A"], per["B"] = max(per["A"], ra), max(per["B"], rb)
        passing = [k for k, v in per.items() if v <= tol]
        resolution = {
            "candidates": {"A": "M_{nu/2} F M_{-nu/2}", "B": "M_{-nu/2} F M_{nu/2}"},
            "residuals": per,
            "passing": passing,
            "observed": passing[0] if len(passing) == 1 else None,
        }
        out.append(ctx.report(CheckId.FOURIER_CONJUGATION, {"nu": nu, "form": "ground-state direction"},
                              min(per.values()), {"N_c": cfg.N_c}, resolution=resolution,
                              passed=len(passing) == 1))
    return out


def check_restriction_fourier(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.RESTRICTION_FOURIER, cfg.points, cfg.radius)
    out = []
    for i, nu in enumerate(_sweep_nus(params, cfg)):
        rng = ctx.rng(CheckId.RESTRICTION_FOURIER, i)
        psi = tr.random_uchp_combination(rng, cfg.max_order_c2, nu, terms=4)
        T = tr.t_forward(psi, nu, cfg.N_c)
        literal = tr.rotation(-1j, tr.restrict_diag("+", T))(z)
        target = tr.shifted_fourier(psi, nu / 2, cfg.N_c)(z)
        anti = tr.FunctionHandle("C", lambda s: T(-1j * s, -1j * np.conj(s)))(z)
        corrected = math.sqrt(nu / math.pi) * tr.shifted_fourier(psi, 2 * nu, cfg.N_c)(z)
        res_lit = relative_residual(literal, target)
        res_cor = relative_residual(anti, corrected)
        resolution = {
            "literal": "Gamma_{-i} R_+ T = F~^{nu/2}",
            "literal_residual": res_lit,
            "alternative": "T psi(-i z, -i conj z) = (nu/pi)^{1/2} F~^{2 nu} psi(z)",
            "alternative_residual": res_cor,
        }
        out.append(ctx.report(CheckId.RESTRICTION_FOURIER, {"nu": nu, "terms": psi.representation.terms},
                              res_lit, {"N_c": cfg.N_c}, resolution=resolution))
    return out


def check_fourier_eigen(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.FOURIER_EIGEN, max(cfg.points, 8), cfg.radius)
    if "m" in params or "n" in params:
        pairs = [(_order(params, "m", 0), _order(params, "n", 0))]
    else:
        top = _order(params, "max_degree", 8)
        pairs = [(m, d - m) for d in range(top + 1) for m in range(d + 1)]
    out = []
    for nu in _sweep_nus(params, cfg):
        res, estimates, observed = 0.0, {}, 0.0
        for m, n in pairs:
            h = uchp(m, n, nu)(z)
            f = tr.shifted_fourier(tr.uchp_function(m, n, nu), nu, cfg.N_c)(z)
            lam = complex(np.vdot(h, f) / np.vdot(h, h))
            estimates[f"{m},{n}"] = lam
            res = max(res, relative_residual(f, 1j ** (m + n) * h))
            observed = max(observed, relative_residual(f, (-1j) ** (m + n) * h))
        resolution = {"stated": "i^(m+n)", "alternative": "(-i)^(m+n)", "alternative_residual": observed,
                      "eigenvalues": estimates}
        out.append(ctx.report(CheckId.FOURIER_EIGEN, {"nu": nu, "pairs": [list(p) for p in pairs]}, res,
                              {"N_c": cfg.N_c}, resolution=resolution))
    return out


def check_b2_gamma(ctx: Context, params: dict):
    cfg = ctx.config
    z, w = ctx.points(CheckId.B2_GAMMA, cfg.points, cfg.radius)
    rng = ctx.rng(CheckId.B2_GAMMA)
    res_lit = res_alt = 0.0
    cases = []
    half = tr.G_I.scaled(1 / math.sqrt(2))
    for i in range(cfg.combos):
        nu = cfg.nus[i % len(cfg.nus)] if "nu" not in params else check_nu(params["nu"])
        j, k = (int(v) for v in rng.integers(0, 4, size=2))
        psi = tr.hermite_gauss_product(j, k, nu)
        lhs = tr.bargmann2(psi, nu, cfg.N_r)(z, w)
        T = tr.t_forward(psi, nu, cfg.N_c)
        res_lit = max(res_lit, relative_residual(lhs, tr.gamma_action(tr.G_I, T)(z, w)))
        res_alt = max(res_alt, relative_residual(lhs, tr.gamma_action(half, T)(z, w)))
        cases.append([nu, j, k])
    resolution = {"literal": "B2 = Gamma_{g_i} T", "literal_residual": res_lit,
                  "alternative": "B2 = Gamma_{g_i/sqrt 2} T", "alternative_residual": res_alt}
    return [ctx.report(CheckId.B2_GAMMA, {"cases": cases}, res_lit, {"N_r": cfg.N_r, "N_c": cfg.N_c},
                       resolution=resolution)]


def wigner_sides(f: tr.FunctionHandle, nu: float, z, w, cfg: RunConfig):
    """Left side ``T^nu W^nu f`` and the right side without its exponential factor."""
    W = tr.wigner(f, nu, cfg.L, cfg.N_line)
    lhs = tr.t_forward(W, nu, cfg.N_c)(z, w)
    g = tr.G_I.scaled(-1j)
    core = math.sqrt(1 / (2 * nu)) * tr.gamma_action(g, tr.t_forward(f, nu / 2, cfg.N_c))(z, w)
    return lhs, core


def check_wigner_intertwine(ctx: Context, params: dict):
    cfg = ctx.config
    z, w = ctx.points(CheckId.WIGNER_INTERTWINE, cfg.points, 1.0)
    tol = cfg.tolerance("composed")
    out = []
    for nu in _sweep_nus(params, cfg):
        per = {"+1": 0.0, "-1": 0.0}
        ratios = []
        caught = []
        for rate in (nu / 2, nu):
            f = tr.gaussian("R2", rate)
            with warnings.catch_warnings(record=True) as log:
                warnings.simplefilter("always", tr.DecayWarning)
                lhs, core = wigner_sides(f, nu, z, w, cfg)
            caught.extend(sorted({str(m.message) for m in log}))
            for sigma in (1, -1):
                rhs = np.exp(sigma * nu / 4 * (z + w) ** 2) * core
                key = f"{sigma:+d}"
                per[key] = max(per[key], relative_residual(lhs, rhs))
            ratios.extend(lhs / (np.exp(-nu / 4 * (z + w) ** 2) * core))
        passing = [k for k, v in per.items() if v <= tol]
        resolution = {
            "candidates": {"+1": "exp(+(nu/4)(z+w)^2)", "-1": "exp(-(nu/4)(z+w)^2)"},
            "residuals": per,
            "passing": passing,
            "observed": passing[0] if len(passing) == 1 else None,
            "lhs_over_sigma_minus": [complex(np.mean(ratios)), float(np.std(np.abs(ratios)))],
        }
        out.append(ctx.report(CheckId.WIGNER_INTERTWINE, {"nu": nu, "gaussian_rates": [nu / 2, nu]},
                              min(per.values()), {"N_c": cfg.N_c, "N_line": cfg.N_line, "L": cfg.L},
                              resolution=resolution, passed=len(passing) == 1,
                              diagnostics={"decay_warnings": caught}))
    return out


def check_action_Tpair(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.ACTION_TPAIR, cfg.points, cfg.radius)
    top_m = min(_order(params, "max_order", 5), 5)
    top_n = cfg.max_order_c2
    out = []
    for nu in _sweep_nus(params, cfg):
        rng = ctx.rng(CheckId.ACTION_TPAIR, int(nu * 1000))
        res = 0.0
        for n in range(top_n + 1):
            for npr in range(top_n + 1):
                coeffs = {m: complex(rng.normal(), rng.normal()) for m in range(top_m + 1)}
                psi = tr.uchp_combination({(m, n): c for m, c in coeffs.items()}, nu)
                lhs = tr.t_pair(psi, nu, n, npr, cfg.N_c)(z)
                scale = math.sqrt(math.factorial(n) * nu**n / (math.factorial(npr) * nu**npr))
                rhs = sum(c * scale * uchp(m, npr, nu)(z) for m, c in coeffs.items())
                res = max(res, relative_residual(lhs, rhs))
        out.append(ctx.report(CheckId.ACTION_TPAIR, {"nu": nu, "max_m": top_m, "max_level": top_n}, res,
                              {"N_c": cfg.N_c}))
    return out


def check_unitary_Tpair(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.UNITARY_TPAIR, cfg.points, cfg.radius)
    rng = ctx.rng(CheckId.UNITARY_TPAIR)
    out = []
    for i in range(3):
        nu = cfg.nus[i % len(cfg.nus)]
        n, npr = (int(v) for v in rng.integers(0, cfg.max_order_c2 + 1, size=2))
        psi = tr.random_uchp_combination(rng, cfg.max_order_c2, nu, terms=3, level=n)
        fwd = tr.memoize(tr.t_pair(psi, nu, n, npr, cfg.N_c))
        exact = _exact_norm_sq(psi)
        quad = tr.norm_sq_complex(fwd, nu, cfg.N_c2)
        params_i = {"nu": nu, "n": n, "n_prime": npr, "terms": psi.representation.terms}
        out.append(ctx.report(CheckId.UNITARY_TPAIR, {**params_i, "property": "norm"}, abs(quad - exact) / exact,
                              {"N_c": cfg.N_c, "N_norm": cfg.N_c2},
                              diagnostics={"norm_sq": exact, "image_norm_sq": quad}))
        back = tr.t_pair(fwd, nu, npr, n, cfg.N_c2)
        out.append(ctx.report(CheckId.UNITARY_TPAIR, {**params_i, "property": "inverse"},
                              relative_residual(back(z), psi.exact(z)), {"N_c": cfg.N_c, "N_outer": cfg.N_c2},
                              tolerance=cfg.tolerance("roundtrip")))
    return out


def _unit(rng) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def _series_check(ctx: Context, cid: CheckId, fid: gf.GenFormulaId, params: dict, make):
    """Series vs closed form over the configured sweep; ``make(rng, nu, z, w)`` yields parameter dicts."""
    cfg = ctx.config
    z, w = ctx.points(cid, cfg.points, 1.0)
    out = []
    for nu in _sweep_nus(params, cfg):
        rng = ctx.rng(cid, int(nu * 1000))
        res, tail, count = 0.0, 0.0, 0
        for a, b in zip(z, w):
            for p in make(rng, nu, complex(a), complex(b)):
                s = gf.series(fid, cfg.series_terms, **p)
                c = gf.closed_form(fid, **p)
                res = max(res, abs(s.value - c) / max(abs(c), 1.0))
                tail = max(tail, s.tail / max(abs(c), 1.0))
                count += 1
        out.append(ctx.report(cid, {"nu": nu, "evaluations": count}, res, {"terms": cfg.series_terms},
                              diagnostics={"max_relative_tail": tail}))
    return out


def check_mehler(ctx: Context, params: dict):
    top = _order(params, "max_order", ctx.config.max_order)

    def make(rng, nu, z, w):
        t = complex(params["t"]) if "t" in params else _unit(rng)
        for m in range(top + 1):
            for mp in range(top + 1):
                yield {"t": t, "m": m, "mp": mp, "nu": nu, "z": z, "w": w}

    return _series_check(ctx, CheckId.MEHLER, gf.GenFormulaId.MEHLER, params, make)


def check_bilinear_gen(ctx: Context, params: dict):
    top = _order(params, "max_order", ctx.config.max_order)

    def make(rng, nu, z, w):
        t = complex(params["t"]) if "t" in params else _unit(rng)
        u = complex(params["u"]) if "u" in params else 0.5 / nu * rng.random() * _unit(rng)
        for mp in range(top + 1):
            yield {"u": u, "t": t, "mp": mp, "nu": nu, "z": z, "w": w}

    return _series_check(ctx, CheckId.BILINEAR_GEN, gf.GenFormulaId.BILINEAR, params, make)


def check_exp_gen(ctx: Context, params: dict):
    def make(rng, nu, z, w):
        yield {"u": w, "v": complex(rng.normal(), rng.normal()) / 2, "nu": nu, "z": z}

    return _series_check(ctx, CheckId.EXP_GEN, gf.GenFormulaId.EXP2VAR, params, make)


def check_one_index_gen(ctx: Context, params: dict):
    top = _order(params, "max_order", ctx.config.max_order)

    def make(rng, nu, z, w):
        for n in range(top + 1):
            yield {"u": w, "n": n, "nu": nu, "z": z}

    return _series_check(ctx, CheckId.ONE_INDEX_GEN, gf.GenFormulaId.ONE_INDEX, params, make)


def check_mixed_gen(ctx: Context, params: dict):
    top = _order(params, "max_order", ctx.config.max_order)

    def make(rng, nu, z, w):
        xi = 0.3 + 0.7 * rng.random()
        mu = nu * (0.5 + rng.random())
        x = float(2 * w.real)
        for n in range(top + 1):
            yield {"xi": xi, "x": x, "mu": mu, "nu": nu, "n": n, "z": z}
            yield {"xi": xi * _unit(rng), "x": x, "mu": mu, "nu": nu, "n": n, "z": z}

    return _series_check(ctx, CheckId.MIXED_GEN, gf.GenFormulaId.MIXED_REAL_COMPLEX, params, make)


def check_laguerre_diag(ctx: Context, params: dict):
    top = _order(params, "max_order", ctx.config.max_order)

    def make(rng, nu, z, w):
        t = _unit(rng)
        for m in range(top + 1):
            yield {"t": t, "m": m, "nu": nu, "z": z, "w": w}

    return _series_check(ctx, CheckId.LAGUERRE_DIAG, gf.GenFormulaId.LAGUERRE_DIAG, params, make)


def check_diag_probability(ctx: Context, params: dict):
    top = _order(params, "max_order", ctx.config.max_order)
    out = []

    def make_t(rng, nu, z, w):
        t = _unit(rng)
        for m in range(top + 1):
            yield {"t": t, "m": m, "nu": nu, "z": z}

    def make_1(rng, nu, z, w):
        for m in range(top + 1):
            yield {"m": m, "nu": nu, "z": z}

    for r in _series_check(ctx, CheckId.DIAG_PROBABILITY, gf.GenFormulaId.DIAG_T, params, make_t):
        r.params["form"] = "unit circle t"
        out.append(r)
    for r in _series_check(ctx, CheckId.DIAG_PROBABILITY, gf.GenFormulaId.DIAG_T1, params, make_1):
        r.params["form"] = "t = 1"
        out.append(r)
    return out


def check_b1_level_action(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.B1_LEVEL_ACTION, cfg.points, cfg.radius)
    top = _order(params, "max_order", cfg.max_order)
    out = []
    for nu in _sweep_nus(params, cfg):
        res = 0.0
        for m in range(top + 1):
            phi = tr.hermite_function(m, nu)
            for n in range(top + 1):
                lhs = tr.bargmann1_level(phi, nu, n, cfg.N_r)(z)
                rhs = (nu / math.pi) ** 0.25 * math.sqrt(2.0**m / (math.factorial(n) * nu**n)) * uchp(m, n, nu)(z)
                res = max(res, relative_residual(lhs, rhs))
        out.append(ctx.report(CheckId.B1_LEVEL_ACTION, {"nu": nu, "max_order": top}, res, {"N_r": cfg.N_r}))
    return out


def check_kernel_level(ctx: Context, params: dict):
    cfg = ctx.config
    z, w = ctx.points(CheckId.KERNEL_LEVEL, cfg.points, 1.0)
    x = 2 * w.real
    top = min(_order(params, "max_order", cfg.max_order), 4)
    out = []
    for nu in _sweep_nus(params, cfg):
        res_series, res_kernel = 0.0, 0.0
        for n in range(top + 1):
            closed = np.array([gf.closed_form("kernel_level_n", x=float(a), z=complex(b), n=n, nu=nu)
                               for a, b in zip(x, z)])
            ser = np.array([gf.series("kernel_level_n", cfg.series_terms, x=float(a), z=complex(b), n=n, nu=nu).value
                            for a, b in zip(x, z)])
            K = tr.cst_kernel(tr.hermite_basis(nu), tr.uchp_level_basis(n, nu), 40)
            built = K(x, z)
            res_series = max(res_series, relative_residual(ser, closed))
            res_kernel = max(res_kernel, relative_residual(built, closed))
        out.append(ctx.report(CheckId.KERNEL_LEVEL, {"nu": nu, "route": "series", "max_level": top}, res_series,
                              {"terms": cfg.series_terms}))
        out.append(ctx.report(CheckId.KERNEL_LEVEL, {"nu": nu, "route": "coherent-states kernel", "max_level": top},
                              res_kernel, {"truncation": 40}))
    return out


def check_landau_eigen(ctx: Context, params: dict):
    cfg = ctx.config
    top = _order(params, "max_order", 8)
    out = []
    for nu in _sweep_nus(params, cfg):
        res = alt = 0.0
        for m in range(top + 1):
            for n in range(top + 1):
                H = uchp(m, n, nu)
                L = landau_apply(H, nu)
                scale = max(float(np.max(np.abs(H.coeffs))), 1.0)
                res = max(res, _coeff_gap(L, H * n) / max(n, 1) / scale)
                alt = max(alt, _coeff_gap(L, H * (nu * n)) / max(nu * n, 1) / scale)
        resolution = {"stated": "eigenvalue n", "alternative": "eigenvalue nu*n", "alternative_residual": alt}
        out.append(ctx.report(CheckId.LANDAU_EIGEN, {"nu": nu, "max_order": top}, res, {}, resolution=resolution))
    return out


def _coeff_gap(a, b) -> float:
    shape = (max(a.coeffs.shape[0], b.coeffs.shape[0]), max(a.coeffs.shape[1], b.coeffs.shape[1]))
    pa = np.zeros(shape, complex)
    pb = np.zeros(shape, complex)
    pa[: a.coeffs.shape[0], : a.coeffs.shape[1]] = a.coeffs
    pb[: b.coeffs.shape[0], : b.coeffs.shape[1]] = b.coeffs
    return float(np.max(np.abs(pa - pb)))


def check_annihilation_image(ctx: Context, params: dict):
    cfg = ctx.config
    z, w = ctx.points(CheckId.ANNIHILATION_IMAGE, cfg.points, cfg.radius)
    out = []
    for nu in _sweep_nus(params, cfg):
        res = 0.0
        inputs = [tr.hermite_function(m, nu) for m in range(4)] + [tr.gaussian("R", nu)]
        for phi in inputs:
            G = tr.g_composite(phi, nu, cfg.N_r)
            dz, dw = tr.partial_derivatives(G, z, w)
            res = max(res, float(np.max(np.abs(dz + 1j * dw) / np.maximum(np.abs(dz), 1.0))))
        out.append(ctx.report(CheckId.ANNIHILATION_IMAGE, {"nu": nu, "inputs": "H_0..H_3, gaussian"}, res,
                              {"N_r": cfg.N_r, "contour_nodes": 32}))
    return out


def check_norms(ctx: Context, params: dict):
    cfg = ctx.config
    top = min(_order(params, "max_order", cfg.max_order_c2), 4)
    idx = [(m, n) for m in range(top + 1) for n in range(top + 1)]
    out = []
    for nu in _sweep_nus(params, cfg):
        xi, wts = tr.complex_grid(nu, cfg.N_c).complex_nodes()
        V = np.stack([uchp(m, n, nu)(xi) for m, n in idx])
        gram = (V.conj() * wts) @ V.T
        formula = np.array([uchp_norm_sq(m, n, nu) for m, n in idx])
        diag = float(np.max(np.abs(np.diag(gram) - formula) / formula))
        off = gram - np.diag(np.diag(gram))
        offd = float(np.max(np.abs(off) / np.sqrt(np.outer(formula, formula))))
        out.append(ctx.report(CheckId.NORMS, {"nu": nu, "max_order": top}, max(diag, offd), {"N_c": cfg.N_c},
                              diagnostics={"diagonal": diag, "off_diagonal": offd}))
    return out


def check_rescaling(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.RESCALING, cfg.points, cfg.radius)
    top = _order(params, "max_order", cfg.max_order)
    out = []
    for nu in _sweep_nus(params, cfg):
        res = max(uchp_rescaling_check(m, n, nu, z) for m in range(top + 1) for n in range(top + 1))
        out.append(ctx.report(CheckId.RESCALING, {"nu": nu, "max_order": top}, res, {}))
    return out


INTEGRAL_REP_CASES = ((1.0, 1.0, 1.0), (1j, -1j, 1.0), (2.0, 0.5, 2.0), (1 + 1j, 1 - 1j, 1.0))


def check_integral_rep(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.INTEGRAL_REP, cfg.points, 1.5)
    top = min(_order(params, "max_order", cfg.max_order_c2), 4)
    out = []
    for alpha, beta, gauss in INTEGRAL_REP_CASES:
        nu = (alpha * beta).real / gauss
        res = 0.0
        for m in range(top + 1):
            for n in range(top + 1):
                lhs = tr.integral_rep_uchp(m, n, alpha, beta, gauss, z, cfg.N_c)
                res = max(res, relative_residual(lhs, uchp(m, n, nu)(z)))
        out.append(ctx.report(CheckId.INTEGRAL_REP, {"alpha": alpha, "beta": beta, "gauss": gauss, "max_order": top},
                              res, {"N_c": cfg.N_c}))
    return out


def check_gaussian_rep(ctx: Context, params: dict):
    cfg = ctx.config
    z, _ = ctx.points(CheckId.GAUSSIAN_REP, cfg.points, 1.5)
    out = []
    for alpha, beta, gauss in INTEGRAL_REP_CASES:
        lhs = tr.gaussian_integral_rep(alpha, beta, gauss, z, cfg.N_c)
        rhs = math.pi / gauss * np.exp(-alpha * beta * np.abs(z) ** 2 / gauss)
        out.append(ctx.report(CheckId.GAUSSIAN_REP, {"alpha": alpha, "beta": beta, "gauss": gauss},
                              relative_residual(lhs, rhs), {"N_c": cfg.N_c}))
    return out


CHECKS = {
    CheckId.ACTION_T: check_action_T,
    CheckId.VANISHING: check_vanishing,
    CheckId.REPRODUCING: check_reproducing,
    CheckId.ISOMETRY_T: check_isometry_T,
    CheckId.INVERSE_T: check_inverse_T,
    CheckId.IMAGE_FN: check_image_Fn,
    CheckId.FOURIER_CONJUGATION: check_fourier_conjugation,
    CheckId.RESTRICTION_FOURIER: check_restriction_fourier,
    CheckId.FOURIER_EIGEN: check_fourier_eigen,
    CheckId.B2_GAMMA: check_b2_gamma,
    CheckId.WIGNER_INTERTWINE: check_wigner_intertwine,
    CheckId.ACTION_TPAIR: check_action_Tpair,
    CheckId.UNITARY_TPAIR: check_unitary_Tpair,
    CheckId.MEHLER: check_mehler,
    CheckId.BILINEAR_GEN: check_bilinear_gen,
    CheckId.EXP_GEN: check_exp_gen,
    CheckId.ONE_INDEX_GEN: check_one_index_gen,
    CheckId.MIXED_GEN: check_mixed_gen,
    CheckId.B1_LEVEL_ACTION: check_b1_level_action,
    CheckId.KERNEL_LEVEL: check_kernel_level,
    CheckId.LAGUERRE_DIAG: check_laguerre_diag,
    CheckId.DIAG_PROBABILITY: check_diag_probability,
    CheckId.LANDAU_EIGEN: check_landau_eigen,
    CheckId.ANNIHILATION_IMAGE: check_annihilation_image,
    CheckId.NORMS: check_norms,
    CheckId.RESCALING: check_rescaling,
    CheckId.INTEGRAL_REP: check_integral_rep,
    CheckId.GAUSSIAN_REP: check_gaussian_rep,
}
assert set(CHECKS) == set(CheckId)


# ------------------------------------------------------------------ runners


def _run(cid: CheckId, params: dict, ctx: Context, timing: bool):
    t0 = time.perf_counter()
    try:
        reports = CHECKS[cid](ctx, dict(params))
    except QuadratureError as exc:
        reports = [ctx.report(cid, dict(params), math.inf, passed=False, diagnostics={"error": str(exc)})]
    if timing:
        elapsed = (time.perf_counter() - t0) / max(len(reports), 1)
        for r in reports:
            r.seconds = elapsed
    return reports


def run_check(cid, params: Optional[dict] = None, seed: Optional[int] = None,
              config: Optional[RunConfig] = None, timing: bool = False) -> list:
    """Run one check.  Domain violations raise :class:`DomainError`."""
    cid = CheckId(cid)
    config = config or RunConfig()
    if seed is not None and seed != config.seed:
        config = RunConfig.from_dict({**config.to_dict(), "seed": int(seed)})
    return _run(cid, params or {}, Context(config), timing)


def resolve_ids(ids) -> list:
    if ids == "all" or ids == ["all"]:
        return list(CheckId)
    return [CheckId(i) for i in ids]


def run_suite(ids="all", config: Optional[RunConfig] = None, params: Optional[dict] = None,
              timing: bool = False) -> SuiteSummary:
    """Run a set of checks and merge their reports in catalog order."""
    config = config or RunConfig()
    selected = resolve_ids(ids)
    ctx = Context(config)
    params = params or {}
    if config.workers > 1 and len(selected) > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            results = list(pool.map(lambda c: _run(c, params, ctx, timing), selected))
    else:
        results = [_run(c, params, ctx, timing) for c in selected]
    reports = [r for group in results for r in group]
    trace = {c.value: {"ref": REFS[c], "reports": sum(r.check_id == c.value for r in reports),
                       "passed": all(r.passed for r in reports if r.check_id == c.value)} for c in selected}
    return SuiteSummary(reports, trace, config.numerics())
