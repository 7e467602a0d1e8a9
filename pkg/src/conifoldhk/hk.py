"""Instanton-corrected hyperkahler data on the torus fibration.

Bessel-kernel instanton sums V_n, A_n, the corrected metric and Kahler
2-forms, the Ooguri-Vafa comparison forms and smoothing tensors, the
horizontal tensor T, and the semi-flat specialization.

2-forms are stored by their coefficients over the complex coframe
(dt, dtbar, dtheta_bvee, dtheta_b); metrics as real symmetric 4x4 matrices
in the coordinates (Re t, Im t, theta_bvee, theta_b).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np
from scipy.special import k0e, k1e

from .ask import im_tau, tau
from .bps import BETA, BETA_VEE, DELTA, Charge, omega, pairing
from .budget import DEFAULT_BUDGET, SumResult, TruncationBudget
from .errors import DegenerateError, DomainError, SingularityError, WallError

TWO_PI = 2.0 * math.pi
COFRAME = ("dt", "dtbar", "dthbv", "dthb")
PAIRS = (
    ("dt", "dtbar"),
    ("dt", "dthbv"),
    ("dt", "dthb"),
    ("dtbar", "dthbv"),
    ("dtbar", "dthb"),
    ("dthbv", "dthb"),
)
# complex coframe expressed over the real coordinates (x, y, th_bv, th_b)
_COVECTORS = {
    "dt": np.array([1.0, 1j, 0.0, 0.0]),
    "dtbar": np.array([1.0, -1j, 0.0, 0.0]),
    "dthbv": np.array([0.0, 0.0, 1.0, 0.0]),
    "dthb": np.array([0.0, 0.0, 0.0, 1.0]),
}
_CONJ_LABEL = {"dt": "dtbar", "dtbar": "dt", "dthbv": "dthbv", "dthb": "dthb"}


@dataclass(frozen=True)
class FiberPoint:
    """Moduli value t with torus angles; theta_delta is the flavor angle."""

    t: complex
    theta_beta_vee: float = 0.0
    theta_beta: float = 0.0
    theta_delta: float = 0.0

    def theta(self, gamma: Charge) -> float:
        return (
            gamma.n_beta_vee * self.theta_beta_vee
            + gamma.n_beta * self.theta_beta
            + gamma.n_delta * self.theta_delta
        )


@dataclass
class TwoFormCoeffs:
    """Coefficients of a 2-form on the six ordered coframe pairs."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.coeffs = {p: complex(self.coeffs.get(p, 0.0)) for p in PAIRS}

    def get(self, a: str, b: str) -> complex:
        if (a, b) in self.coeffs:
            return self.coeffs[(a, b)]
        if (b, a) in self.coeffs:
            return -self.coeffs[(b, a)]
        raise KeyError((a, b))

    def __sub__(self, other: "TwoFormCoeffs") -> "TwoFormCoeffs":
        return TwoFormCoeffs(
            {p: self.coeffs[p] - other.coeffs[p] for p in PAIRS}
        )

    def __add__(self, other: "TwoFormCoeffs") -> "TwoFormCoeffs":
        return TwoFormCoeffs(
            {p: self.coeffs[p] + other.coeffs[p] for p in PAIRS}
        )

    def scaled(self, c: complex) -> "TwoFormCoeffs":
        return TwoFormCoeffs({p: c * self.coeffs[p] for p in PAIRS})

    def conjugate_form(self) -> "TwoFormCoeffs":
        out: dict = {}
        for (a, b), c in self.coeffs.items():
            ca, cb = _CONJ_LABEL[a], _CONJ_LABEL[b]
            val = complex(c).conjugate()
            if (ca, cb) in PAIRS:
                out[(ca, cb)] = out.get((ca, cb), 0.0) + val
            else:
                out[(cb, ca)] = out.get((cb, ca), 0.0) - val
        return TwoFormCoeffs(out)

    def real_part(self) -> "TwoFormCoeffs":
        return (self + self.conjugate_form()).scaled(0.5)

    def imag_part(self) -> "TwoFormCoeffs":
        return (self - self.conjugate_form()).scaled(-0.5j)

    def coefficient_re(self) -> "TwoFormCoeffs":
        """Coefficient-wise real part over the fixed complex coframe."""
        return TwoFormCoeffs({p: self.coeffs[p].real for p in PAIRS})

    def coefficient_im(self) -> "TwoFormCoeffs":
        return TwoFormCoeffs({p: self.coeffs[p].imag for p in PAIRS})

    def as_coordinate_matrix(self) -> np.ndarray:
        """Antisymmetric 4x4 matrix over (Re t, Im t, th_bvee, th_b)."""
        m = np.zeros((4, 4), dtype=complex)
        for (a, b), c in self.coeffs.items():
            va, vb = _COVECTORS[a], _COVECTORS[b]
            m += c * (np.outer(va, vb) - np.outer(vb, va))
        return m

    def max_abs(self) -> float:
        return max(abs(c) for c in self.coeffs.values())

    def max_abs_diff(self, other: "TwoFormCoeffs") -> float:
        return (self - other).max_abs()


@dataclass
class MetricMatrix:
    """Real symmetric metric over (Re t, Im t, theta_bvee, theta_b)."""

    matrix: np.ndarray
    tail_bound: float = 0.0
    coords: tuple = ("re_t", "im_t", "theta_beta_vee", "theta_beta")

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def is_positive_definite(self) -> bool:
        return bool(np.all(self.eigenvalues() > 0.0))

    def signature(self) -> tuple[int, int]:
        ev = self.eigenvalues()
        return int(np.sum(ev > 0)), int(np.sum(ev < 0))


class YForm(NamedTuple):
    """Coefficients of W + W^inst on (dt, dtbar, dtheta_bvee, dtheta_b)."""

    dt: complex
    dtbar: complex
    dthbv: complex
    dthb: complex
    tail_bound: float


def _fourier_cut(x: float, tol: float, max_terms: int) -> int:
    # scaled-Bessel decay e^{-x m}: keep terms until below tol with margin
    m = int(math.ceil((-math.log(tol) + 6.0) / x)) + 1
    return max(3, min(m, max_terms))


def v_inst(
    n: int,
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
) -> SumResult:
    """V_n = (1/pi) sum_{m>0} cos(m theta_{b - n d}) K0(2 pi m R |t - n|)."""
    d = abs(complex(p.t) - n) * r_scale
    if d < 1e-12:
        raise SingularityError(f"t = {n} is a singular fiber")
    th = p.theta_beta - n * p.theta_delta
    x = TWO_PI * d
    mmax = _fourier_cut(x, budget.series_tol, budget.max_terms)
    m = np.arange(1, mmax + 1)
    scaled = k0e(x * m)
    terms = np.cos(m * th) * scaled * np.exp(-x * m)
    ratio = math.exp(-x)
    tail = float(scaled[-1]) * math.exp(-x * mmax) * ratio / (1.0 - ratio) / math.pi
    return SumResult(complex(float(np.sum(terms)) / math.pi), tail)


def a_inst_coeff(
    n: int,
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
) -> SumResult:
    """Scalar prefactor c_n of A_n = c_n (dt/(t-n) - dtbar/(tbar-n));

    c_n = -(i/(2 pi)) R|t-n| sum_{m>0} sin(m theta_{b - n d}) K1(2 pi m R|t-n|),
    purely imaginary and odd in the angle.
    """
    d = abs(complex(p.t) - n) * r_scale
    if d < 1e-12:
        raise SingularityError(f"t = {n} is a singular fiber")
    th = p.theta_beta - n * p.theta_delta
    x = TWO_PI * d
    mmax = _fourier_cut(x, budget.series_tol, budget.max_terms)
    m = np.arange(1, mmax + 1)
    scaled = k1e(x * m)
    s = float(np.sum(np.sin(m * th) * scaled * np.exp(-x * m)))
    ratio = math.exp(-x)
    tail = d * float(scaled[-1]) * math.exp(-x * mmax) * ratio / (1.0 - ratio) / TWO_PI
    return SumResult(-1j * d * s / TWO_PI, tail)


def _lattice_range(t: complex, tol: float, r_scale: float) -> range:
    half = int(math.ceil((-math.log(tol) + 8.0) / (TWO_PI * r_scale))) + 1
    lo = int(math.floor(t.real)) - half
    hi = int(math.ceil(t.real)) + half
    return range(lo, hi + 1)


def _lattice_tail(t: complex, n_lo: int, n_hi: int, r_scale: float) -> float:
    # bound sum_{n outside [n_lo, n_hi]} V-type terms by the edge values
    ratio = math.exp(-TWO_PI * r_scale)
    tail = 0.0
    for d in (abs(t.real - n_lo) + 1.0, abs(n_hi - t.real) + 1.0):
        x = TWO_PI * r_scale * d
        tail += float(k0e(x)) * math.exp(-x) / (1.0 - math.exp(-x))
    return 2.0 * tail / (1.0 - ratio) / math.pi


def n_inst_beta(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    n_range: Iterable[int] | None = None,
) -> SumResult:
    """N^inst = sum_n V_n with a certified lattice tail bound."""
    t = complex(p.t)
    rng = n_range if n_range is not None else _lattice_range(t, budget.series_tol, r_scale)
    rng = list(rng)
    total = 0j
    tail = _lattice_tail(t, min(rng), max(rng), r_scale)
    for n in rng:
        val, tb = v_inst(n, p, budget, r_scale)
        total += val
        tail += tb
    return SumResult(total, tail)


def w_coeffs(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    n_range: Iterable[int] | None = None,
) -> YForm:
    """Coefficients of Y = W + W^inst
    = P dt - Pbar dtbar + dtheta_bvee - (tau + i N^inst) dtheta_b,
    P = 2 pi sum_n c_n/(t-n),  Pbar = 2 pi sum_n c_n/(tbar-n)."""
    t = complex(p.t)
    rng = list(n_range) if n_range is not None else list(
        _lattice_range(t, budget.series_tol, r_scale)
    )
    tail = _lattice_tail(t, min(rng), max(rng), r_scale)
    vsum = 0j
    psum = 0j
    pbar_sum = 0j
    for n in rng:
        v, tv = v_inst(n, p, budget, r_scale)
        c, tc = a_inst_coeff(n, p, budget, r_scale)
        vsum += v
        psum += c / (t - n)
        pbar_sum += c / (t.conjugate() - n)
        tail += tv + TWO_PI * tc / max(abs(t - n), 1e-12)
    dthb = -tau(t) - 1j * vsum
    return YForm(TWO_PI * psum, -TWO_PI * pbar_sum, 1.0 + 0j, dthb, tail)


def _assemble_metric(rho: float, y: YForm, tail: float) -> MetricMatrix:
    if abs(rho) < 1e-10:
        raise DegenerateError("metric density |Im tau + N^inst| below threshold")
    v = np.array(
        [y.dt + y.dtbar, 1j * (y.dt - y.dtbar), y.dthbv, y.dthb], dtype=complex
    )
    fiber = np.real(np.outer(v, v.conjugate()))
    g = rho * np.diag([1.0, 1.0, 0.0, 0.0]) + fiber / (4.0 * math.pi**2 * rho)
    g = 0.5 * (g + g.T)
    return MetricMatrix(g, tail_bound=tail)


def metric_gn(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    n_range: Iterable[int] | None = None,
) -> MetricMatrix:
    """Instanton-corrected metric
    g = rho |dt|^2 + (1/4 pi^2 rho) |W + W^inst|^2,  rho = Im tau + N^inst."""
    y = w_coeffs(p, budget, r_scale, n_range)
    nin = n_inst_beta(p, budget, r_scale, n_range)
    rho = im_tau(complex(p.t)) + nin.value.real
    return _assemble_metric(rho, y, y.tail_bound + nin.tail_bound)


def semiflat_metric(p: FiberPoint) -> MetricMatrix:
    """Rigid c-map metric: the corrected metric with instanton sums off."""
    t = complex(p.t)
    rho = im_tau(t)
    y = YForm(0j, 0j, 1.0 + 0j, -tau(t), 0.0)
    return _assemble_metric(rho, y, 0.0)


def _charges(n_range: Iterable[int], include_flavor: bool) -> list[Charge]:
    out = []
    for n in n_range:
        out.append(Charge(0, 1, -n))  # beta - n delta
        out.append(Charge(0, -1, n))  # -beta + n delta
    if include_flavor:
        for k in n_range:
            if k != 0:
                out.append(Charge(0, 0, k))
    return out


def kahler_forms(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    n_range: Iterable[int] | None = None,
    route: str = "wedge",
    include_flavor: bool = False,
) -> tuple[TwoFormCoeffs, TwoFormCoeffs, TwoFormCoeffs]:
    """Triple (omega_plus, omega_3, omega_plus_sf_part...) -> see below.

    Returns (omega1, omega2, omega3) as real 2-forms.  ``route="wedge"``
    assembles omega1 + i omega2 = (1/2 pi) dt wedge (W + W^inst);
    ``route="charges"`` runs the literal charge sum (optionally including
    the flavor charges k d, whose pairing-filtered contribution is zero).
    """
    wplus, w3 = kahler_forms_complex(
        p, budget, r_scale, n_range, route, include_flavor
    )
    return wplus.real_part(), wplus.imag_part(), w3


def kahler_forms_complex(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    n_range: Iterable[int] | None = None,
    route: str = "wedge",
    include_flavor: bool = False,
) -> tuple[TwoFormCoeffs, TwoFormCoeffs]:
    """(omega1 + i omega2, omega3) over the complex coframe."""
    t = complex(p.t)
    rng = list(n_range) if n_range is not None else list(
        _lattice_range(t, budget.series_tol, r_scale)
    )
    itau = im_tau(t)
    if route == "wedge":
        y = w_coeffs(p, budget, r_scale, rng)
        pref = 1.0 / TWO_PI
        wplus = TwoFormCoeffs(
            {
                ("dt", "dtbar"): pref * y.dtbar,
                ("dt", "dthbv"): pref * y.dthbv,
                ("dt", "dthb"): pref * y.dthb,
            }
        )
        vsum = 0j
        psum = 0j
        pbar_sum = 0j
        for n in rng:
            vsum += v_inst(n, p, budget, r_scale).value
            c = a_inst_coeff(n, p, budget, r_scale).value
            psum += c / (t - n)
            pbar_sum += c / (t.conjugate() - n)
        w3 = TwoFormCoeffs(
            {
                ("dt", "dtbar"): 0.5j * (itau + vsum),
                ("dthbv", "dthb"): -1.0 / (4.0 * math.pi**2),
                ("dt", "dthb"): -psum / TWO_PI,
                ("dtbar", "dthb"): pbar_sum / TWO_PI,
            }
        )
        return wplus, w3
    if route != "charges":
        raise DomainError("route must be 'wedge' or 'charges'")
    # literal sums over the BPS spectrum through the pairing filter
    tau_t = tau(t)
    wplus = TwoFormCoeffs(
        {
            ("dt", "dthbv"): 1.0 / TWO_PI,
            ("dt", "dthb"): -tau_t / TWO_PI,
        }
    )
    w3 = TwoFormCoeffs(
        {
            ("dt", "dtbar"): 0.5j * itau,
            ("dthbv", "dthb"): -1.0 / (4.0 * math.pi**2),
        }
    )
    for gamma in _charges(rng, include_flavor):
        og = omega(gamma)
        ng = pairing(BETA_VEE, gamma)  # gauge beta-component of gamma
        z_g = gamma.n_beta * t + gamma.n_delta
        dz = complex(gamma.n_beta)  # dZ_gamma = n_beta dt
        dth = float(gamma.n_beta)  # dtheta_gamma = n_beta dtheta_b (theta_d fixed)
        if abs(z_g) * r_scale < 1e-12:
            raise SingularityError("charge with vanishing central charge")
        x = TWO_PI * abs(z_g) * r_scale
        mmax = _fourier_cut(x, budget.series_tol, budget.max_terms)
        m = np.arange(1, mmax + 1)
        th_g = p.theta(gamma)
        kv0 = k0e(x * m) * np.exp(-x * m)
        kv1 = k1e(x * m) * np.exp(-x * m)
        v_g = float(np.sum(np.cos(m * th_g) * kv0)) / TWO_PI + 1j * float(
            np.sum(np.sin(m * th_g) * kv0)
        ) / TWO_PI
        a_scalar = -(
            r_scale
            * abs(z_g)
            / (4.0 * math.pi)
            * complex(np.sum(np.exp(1j * m * th_g) * kv1))
        )
        # A_gamma = a_scalar (dZ/Z - dZbar/Zbar); relevant wedges below
        if dz != 0:
            # Omega dZ_gamma wedge A_gamma
            c_a = og * dz * a_scalar
            wplus.coeffs[("dt", "dtbar")] += c_a * dz * (
                -1.0 / z_g.conjugate()
            )
            # i Omega/(2 pi) V dtheta_gamma wedge dZ_gamma -> dt wedge dthb
            wplus.coeffs[("dt", "dthb")] += -1j * og * v_g * dth * dz / TWO_PI
            # omega3 pieces
            w3.coeffs[("dt", "dtbar")] += 0.5j * og * v_g * dz * dz
            w3.coeffs[("dt", "dthb")] += -og * dth * a_scalar * dz / (
                TWO_PI * z_g
            )
            w3.coeffs[("dtbar", "dthb")] += og * dth * a_scalar * dz / (
                TWO_PI * z_g.conjugate()
            )
        else:
            # flavor charge: dZ_gamma = 0 and dtheta_gamma = 0, so every
            # instanton term carries an explicit zero factor
            wplus.coeffs[("dt", "dtbar")] += 0.0
            w3.coeffs[("dt", "dtbar")] += 0.0
    return wplus, w3


def ov_tau(t: complex, cutoff: complex = 1j / TWO_PI) -> complex:
    """tau^ov = log(t / Lambda) / (2 pi i)."""
    t = complex(t)
    if t == 0:
        raise SingularityError("t = 0")
    return cmath.log(t / cutoff) / (TWO_PI * 1j)


def ov_y_form(
    p: FiberPoint,
    cutoff: complex = 1j / TWO_PI,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
) -> YForm:
    """Y^ov = dtheta_bvee - tau^ov dtheta_b + 2 pi A_0 - i V_0 dtheta_b."""
    t = complex(p.t)
    v0, tv = v_inst(0, p, budget, r_scale)
    c0, tc = a_inst_coeff(0, p, budget, r_scale)
    return YForm(
        TWO_PI * c0 / t,
        -TWO_PI * c0 / t.conjugate(),
        1.0 + 0j,
        -ov_tau(t, cutoff) - 1j * v0,
        tv + tc,
    )


def ov_forms_complex(
    p: FiberPoint,
    cutoff: complex = 1j / TWO_PI,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    with_instantons: bool = True,
) -> tuple[TwoFormCoeffs, TwoFormCoeffs]:
    """(omega1^ov + i omega2^ov, omega3^ov) over the complex coframe."""
    t = complex(p.t)
    if with_instantons:
        y = ov_y_form(p, cutoff, budget, r_scale)
        v0 = v_inst(0, p, budget, r_scale).value
        c0 = a_inst_coeff(0, p, budget, r_scale).value
    else:
        y = YForm(0j, 0j, 1.0 + 0j, -ov_tau(t, cutoff), 0.0)
        v0 = 0j
        c0 = 0j
    pref = 1.0 / TWO_PI
    wplus = TwoFormCoeffs(
        {
            ("dt", "dtbar"): pref * y.dtbar,
            ("dt", "dthbv"): pref * y.dthbv,
            ("dt", "dthb"): pref * y.dthb,
        }
    )
    w3 = TwoFormCoeffs(
        {
            ("dt", "dtbar"): 0.5j * (ov_tau(t, cutoff).imag + v0),
            ("dthbv", "dthb"): -1.0 / (4.0 * math.pi**2),
            ("dt", "dthb"): -(c0 / t) / TWO_PI,
            ("dtbar", "dthb"): (c0 / t.conjugate()) / TWO_PI,
        }
    )
    return wplus, w3


def ov_forms(
    p: FiberPoint,
    cutoff: complex = 1j / TWO_PI,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    with_instantons: bool = True,
) -> tuple[TwoFormCoeffs, TwoFormCoeffs, TwoFormCoeffs]:
    wplus, w3 = ov_forms_complex(p, cutoff, budget, r_scale, with_instantons)
    return wplus.real_part(), wplus.imag_part(), w3


def ov_metric(
    p: FiberPoint,
    cutoff: complex = 1j / TWO_PI,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
) -> MetricMatrix:
    """Ooguri-Vafa metric (single active charge pair, n = 0 sums only)."""
    t = complex(p.t)
    y = ov_y_form(p, cutoff, budget, r_scale)
    v0, tv = v_inst(0, p, budget, r_scale)
    rho = ov_tau(t, cutoff).imag + v0.real
    return _assemble_metric(rho, y, y.tail_bound + tv)


def smoothing_eta(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    cutoff: complex = 1j / TWO_PI,
) -> tuple[TwoFormCoeffs, TwoFormCoeffs, TwoFormCoeffs]:
    """Smoothing tensors eta_alpha = omega_alpha - omega_alpha^ov.

    eta1/eta2 are returned coefficient-wise (real and imaginary parts of the
    complex difference form over the fixed coframe), matching how the t -> 0
    limits are stated; eta3 is an honest real form.
    """
    wplus, w3 = kahler_forms_complex(p, budget, r_scale)
    ovplus, ov3 = ov_forms_complex(p, cutoff, budget, r_scale)
    eta_plus = wplus - ovplus
    return eta_plus.coefficient_re(), eta_plus.coefficient_im(), w3 - ov3


def eta_limits_at_origin(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
) -> tuple[TwoFormCoeffs, TwoFormCoeffs]:
    """Independent t = 0 limits of (eta2, eta3) from Bessel sums at t = 0:

    eta2 -> -(S/2 pi) dt wedge dthb,  eta3 -> (i S/2) dt wedge dtbar,
    with S = sum_{n != 0} V_n |_{t=0}."""
    s = 0.0
    n = 1
    while True:
        th_p = p.theta_beta - n * p.theta_delta
        th_m = p.theta_beta + n * p.theta_delta
        x = TWO_PI * n * r_scale
        mmax = _fourier_cut(x, budget.series_tol, budget.max_terms)
        m = np.arange(1, mmax + 1)
        kv = k0e(x * m) * np.exp(-x * m)
        inc = float(np.sum((np.cos(m * th_p) + np.cos(m * th_m)) * kv)) / math.pi
        s += inc
        if abs(inc) < 1e-18 or n > 60:
            break
        n += 1
    eta2 = TwoFormCoeffs({("dt", "dthb"): -s / TWO_PI})
    eta3 = TwoFormCoeffs({("dt", "dtbar"): 0.5j * s})
    return eta2, eta3


def tensor_t(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    r_scale: float = 1.0,
    n_range: Iterable[int] | None = None,
) -> float:
    """Horizontal coefficient of
    T = (Im tau + (1/pi) sum_n sum_{m>0} cos(m theta_b) K0(2 pi m R |t-n|)) |dt|^2
    (stated for theta_delta = 0)."""
    if p.theta_delta != 0.0:
        raise DomainError("tensor T is defined at theta_delta = 0")
    t = complex(p.t)
    rng = n_range if n_range is not None else _lattice_range(t, budget.series_tol, r_scale)
    total = im_tau(t)
    for n in rng:
        d = abs(t - n) * r_scale
        if d < 1e-12:
            raise SingularityError(f"t = {n}")
        x = TWO_PI * d
        mmax = _fourier_cut(x, budget.series_tol, budget.max_terms)
        m = np.arange(1, mmax + 1)
        total += float(
            np.sum(np.cos(m * p.theta_beta) * k0e(x * m) * np.exp(-x * m))
        ) / math.pi
    return total
