"""Twistor-line Darboux coordinates at finite coupling via contour quadrature.

The corrected coordinate X_bvee carries one ray integral per active charge;
the zeta-family of holomorphic symplectic forms built from d log X pairs is
expanded in zeta to extract the Kahler triple, serving as an independent
oracle for the closed-form instanton sums.

Two normalizations are supported: the "original" one (exponent
pi Z/zeta + i theta + pi zeta Zbar, rays R_- Z_gamma) that matches the
closed-form Bessel sums at unit coupling, and the "rescaled" one (Z -> 2iZ)
used by the conformal-limit analysis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bps import BETA, BETA_VEE, Charge, ModuliPoint, central_charge, pairing
from .budget import DEFAULT_BUDGET, DEFAULT_QUAD, QuadratureSpec, SumResult, TruncationBudget
from .errors import BudgetError, FitError, OnRayError
from .hk import FiberPoint

TWO_PI = 2.0 * math.pi


def _charge_z(p: FiberPoint, gamma: Charge) -> complex:
    return central_charge(ModuliPoint(complex(p.t), 0), gamma)


def x_semiflat(
    gamma: Charge, p: FiberPoint, zeta: complex, use_rescaled: bool = True
) -> complex:
    """Semi-flat coordinate exp(pi Z/zeta + i theta + pi zeta Zbar), or its
    Z -> 2iZ rescaled form exp(2 pi i Z/zeta + i theta - 2 pi i zeta Zbar)."""
    return cmath.exp(_log_x_semiflat(gamma, p, complex(zeta), use_rescaled))


def _log_x_semiflat(
    gamma: Charge, p: FiberPoint, zeta: complex, use_rescaled: bool
) -> complex:
    if zeta == 0:
        raise OnRayError("zeta must be nonzero")
    z = _charge_z(p, gamma)
    th = p.theta(gamma)
    if use_rescaled:
        return TWO_PI * 1j * z / zeta + 1j * th - TWO_PI * 1j * zeta * z.conjugate()
    return math.pi * z / zeta + 1j * th + math.pi * zeta * z.conjugate()


def _ray_direction(z: complex, use_rescaled: bool) -> complex:
    zz = 2j * z if use_rescaled else z
    return -zz / abs(zz)


def _gl_nodes(n: int, s_max: float) -> tuple[np.ndarray, np.ndarray]:
    # composite Gauss-Legendre on [-s_max, s_max] split at 0
    x, w = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    for a, b in ((-s_max, 0.0), (0.0, s_max)):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes.append(mid + half * x)
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def ray_integral(
    gamma_prime: Charge,
    p: FiberPoint,
    zeta: complex,
    quad: QuadratureSpec = DEFAULT_QUAD,
    use_rescaled: bool = True,
) -> SumResult:
    """Contour integral along the BPS ray of gamma':

    int (dzeta'/zeta') (zeta'+zeta)/(zeta'-zeta) log(1 - X^sf_{gamma'}(zeta'))

    with zeta' = -u e^s, u the unit ray direction.  The integrand decays like
    exp(-c |Z| cosh s) (c = 4 pi rescaled, 2 pi original), which sets the
    truncation; the reported error combines node-doubling and the tail bound.
    """
    zeta = complex(zeta)
    if zeta == 0:
        raise OnRayError("zeta must be nonzero")
    z = _charge_z(p, gamma_prime)
    c = (4.0 * math.pi if use_rescaled else TWO_PI) * abs(z)
    u = _ray_direction(z, use_rescaled)
    dphi = (cmath.phase(zeta) - cmath.phase(u) + math.pi) % TWO_PI - math.pi
    if abs(dphi) < 1e-9:
        raise OnRayError("zeta within angular tolerance of the ray")
    log_tol = -math.log(quad.tol)
    if c > log_tol + 42.0:
        return SumResult(0j, math.exp(-c))
    s_max = quad.s_max or (math.acosh(max(1.0, (log_tol + 12.0) / c)) + 1.0)
    th = p.theta(gamma_prime)

    def evaluate(n_nodes: int) -> complex:
        s, w = _gl_nodes(n_nodes, s_max)
        zp = u * np.exp(s)
        if use_rescaled:
            expo = TWO_PI * 1j * z / zp + 1j * th - TWO_PI * 1j * zp * z.conjugate()
        else:
            expo = math.pi * z / zp + 1j * th + math.pi * zp * z.conjugate()
        integrand = np.log1p(-np.exp(expo)) * (zp + zeta) / (zp - zeta)
        return complex(np.sum(w * integrand))

    n = quad.nodes_per_panel
    prev = evaluate(n)
    for _ in range(8):
        n *= 2
        cur = evaluate(n)
        err = abs(cur - prev)
        tail = 2.0 * s_max * math.exp(-c * math.cosh(s_max)) * (
            1.0 + abs(zeta)
        )
        if err + tail <= quad.tol:
            return SumResult(cur, err + tail)
        prev = cur
    raise BudgetError("ray integral did not reach the requested tolerance")


def _active_range(t: complex, tol: float, use_rescaled: bool) -> list[int]:
    c = 4.0 * math.pi if use_rescaled else TWO_PI
    half = int(math.ceil((-math.log(tol) + 42.0) / c + abs(t))) + 1
    return list(range(-half, half + 1))


def log_x_beta_vee(
    p: FiberPoint,
    zeta: complex,
    budget: TruncationBudget = DEFAULT_BUDGET,
    quad: QuadratureSpec = DEFAULT_QUAD,
    use_rescaled: bool = True,
    n_range: Iterable[int] | None = None,
    with_instantons: bool = True,
) -> complex:
    """log of the corrected coordinate X_bvee(zeta):

    log X^sf_bvee - (1/4 pi i) sum_{gamma' = +-b + n d} <bvee, gamma'> I_{gamma'}.

    Charges are summed in the deterministic order |n| ascending, + before -.
    """
    t = complex(p.t)
    total = _log_x_semiflat(BETA_VEE, p, complex(zeta), use_rescaled)
    if not with_instantons:
        return total
    rng = list(n_range) if n_range is not None else _active_range(
        t, quad.tol, use_rescaled
    )
    order = sorted(rng, key=abs)
    corr = 0j
    for n in order:
        for sign in (+1, -1):
            gamma = Charge(0, sign, sign * n)  # +-(beta + n delta)
            val, _ = ray_integral(gamma, p, zeta, quad, use_rescaled)
            corr += pairing(BETA_VEE, gamma) * val
    return total - corr / (4.0 * math.pi * 1j)


def x_beta_vee(
    p: FiberPoint,
    zeta: complex,
    budget: TruncationBudget = DEFAULT_BUDGET,
    quad: QuadratureSpec = DEFAULT_QUAD,
    use_rescaled: bool = True,
    n_range: Iterable[int] | None = None,
) -> complex:
    return cmath.exp(log_x_beta_vee(p, zeta, budget, quad, use_rescaled, n_range))


@dataclass
class VarpiCoefficients:
    """Kahler forms extracted from the zeta-Laurent fit of zeta varpi(zeta).

    Each form is an antisymmetric 4x4 complex matrix over the coordinates
    (Re t, Im t, theta_bvee, theta_b).
    """

    omega1: np.ndarray
    omega2: np.ndarray
    omega3: np.ndarray
    fit_residual: float
    zeta_samples: list


def _perturbed(p: FiberPoint, coord: int, delta: float) -> FiberPoint:
    t = complex(p.t)
    vals = [t.real, t.imag, p.theta_beta_vee, p.theta_beta]
    vals[coord] += delta
    return FiberPoint(
        complex(vals[0], vals[1]), vals[2], vals[3], p.theta_delta
    )


def _grad_log_x(
    p: FiberPoint,
    zeta: complex,
    h: float,
    budget: TruncationBudget,
    quad: QuadratureSpec,
    with_instantons: bool,
) -> np.ndarray:
    g = np.empty(4, dtype=complex)
    for i in range(4):
        fp = log_x_beta_vee(
            _perturbed(p, i, +h), zeta, budget, quad, False, None, with_instantons
        )
        fm = log_x_beta_vee(
            _perturbed(p, i, -h), zeta, budget, quad, False, None, with_instantons
        )
        g[i] = (fp - fm) / (2.0 * h)
    return g


def default_zeta_samples(
    p: FiberPoint,
    n_samples: int = 8,
    radius: float = 1.0,
    n_range: Iterable[int] | None = None,
    min_sep: float = 0.06,
) -> list[complex]:
    """Sample angles on |zeta| = radius staying clear of every BPS ray."""
    t = complex(p.t)
    rng = list(n_range) if n_range is not None else list(range(-6, 7))
    ray_angles = []
    for n in rng:
        z = t + n
        for sgn in (1.0, -1.0):
            ray_angles.append(cmath.phase(-sgn * z / abs(z)))
            ray_angles.append(cmath.phase(sgn * 1j))
    out = []
    k = 0
    base = 0.37
    while len(out) < n_samples and k < 20 * n_samples:
        ang = base + TWO_PI * k / n_samples + 0.013 * (k // n_samples)
        k += 1
        d = min(
            abs((ang - ra + math.pi) % TWO_PI - math.pi) for ra in ray_angles
        )
        if d > min_sep:
            out.append(radius * cmath.exp(1j * ang))
    if len(out) < n_samples:
        raise OnRayError("could not place zeta samples away from the rays")
    return out


def varpi_coefficients(
    p: FiberPoint,
    budget: TruncationBudget = DEFAULT_BUDGET,
    quad: QuadratureSpec = DEFAULT_QUAD,
    h: float = 3e-4,
    zeta_samples: Sequence[complex] | None = None,
    with_instantons: bool = True,
    fit_tol: float = 1e-5,
) -> VarpiCoefficients:
    """Extract (omega1, omega2, omega3) from the zeta-expansion

    zeta varpi(zeta) = -(i/2)(w1 + i w2) + zeta w3 - (i/2) zeta^2 (w1 - i w2),

    with varpi(zeta) = (1/4 pi^2) d log X_bvee(zeta) wedge d log X^sf_b(zeta)
    evaluated in the original normalization (matching the closed-form sums).
    Derivatives in the four real coordinates are central differences of the
    log coordinate; the Laurent coefficients come from a least-squares fit
    over the zeta samples.
    """
    t = complex(p.t)
    zetas = (
        list(zeta_samples)
        if zeta_samples is not None
        else default_zeta_samples(p)
    )
    mats = []
    for zeta in zetas:
        g1 = _grad_log_x(p, zeta, h, budget, quad, with_instantons)
        g2 = np.array(
            [
                math.pi / zeta + math.pi * zeta,
                1j * math.pi / zeta - 1j * math.pi * zeta,
                0.0,
                1j,
            ],
            dtype=complex,
        )
        varpi = (np.outer(g1, g2) - np.outer(g2, g1)) / (4.0 * math.pi**2)
        mats.append(complex(zeta) * varpi)
    zarr = np.asarray(zetas, dtype=complex)
    vander = np.column_stack([np.ones_like(zarr), zarr, zarr**2])
    stacked = np.stack(mats).reshape(len(zetas), 16)
    coef, *_ = np.linalg.lstsq(vander, stacked, rcond=None)
    resid = float(np.max(np.abs(vander @ coef - stacked)))
    if resid > fit_tol:
        raise FitError(f"Laurent fit residual {resid:.2e} exceeds {fit_tol:.2e}")
    c0 = coef[0].reshape(4, 4)
    c1 = coef[1].reshape(4, 4)
    c2 = coef[2].reshape(4, 4)
    return VarpiCoefficients(
        omega1=1j * (c0 + c2),
        omega2=c0 - c2,
        omega3=c1,
        fit_residual=resid,
        zeta_samples=zetas,
    )
