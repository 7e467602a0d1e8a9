"""Independent oracle representations used by the verification suites.

Everything here deliberately avoids the primary algorithms: Bessel values
come from cosh-kernel quadrature, Binet's function from its arctangent-kernel
integral, the multiple sines from a Shintani-type line integral, and the
signed Binet terms of the conformal limit from direct ray quadrature.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainError
from .specfn import gen_bernoulli_poly

__all__ = [
    "bessel_k_quadrature",
    "binet_mu_integral",
    "exp_int_e1_series",
    "exp_int_e1_quadrature",
    "log_multiple_sine_integral",
    "mu_term_ray_quadrature",
    "li_series_direct",
]


def _complex_quad(f, a, b, pts=None, limit=2000, tol=1e-13) -> complex:
    kw = dict(limit=limit, epsabs=tol, epsrel=tol)
    if pts is not None:
        kw["points"] = pts
    re = quad(lambda x: f(x).real, a, b, **kw)[0]
    im = quad(lambda x: f(x).imag, a, b, **kw)[0]
    return re + 1j * im


def bessel_k_quadrature(nu: int, x: float) -> float:
    """K_nu(x) = int_0^oo e^{-x cosh u} cosh(nu u) du."""
    if nu not in (0, 1):
        raise DomainError("only nu = 0, 1")
    if not x > 0.0:
        raise DomainError("x must be positive")
    umax = math.acosh(max(2.0, 46.0 / x)) + 1.0

    def f(u):
        return math.exp(-x * math.cosh(u)) * math.cosh(nu * u)

    return quad(f, 0.0, umax, limit=400, epsabs=1e-15, epsrel=1e-13)[0]


def binet_mu_integral(z: complex) -> complex:
    """mu(z) = -(1/pi) int_0^oo log(1 - e^{-2 pi z / s}) / (s^2 + 1) ds."""
    z = complex(z)
    if not z.real > 0.0:
        raise DomainError("Re z > 0 required")

    # fold (1, oo) onto (0, 1) via s -> 1/s (the measure ds/(s^2+1) is
    # invariant); the folded integrand has only a log singularity at 0
    def f(s):
        g = cmath.log(1.0 - cmath.exp(-2.0 * math.pi * z / s))
        g += cmath.log(1.0 - cmath.exp(-2.0 * math.pi * z * s))
        return g / (s * s + 1.0)

    val = _complex_quad(f, 0.0, 1.0)
    return -val / math.pi


def exp_int_e1_series(x: float, nmax: int = 120) -> float:
    """E_1(x) = -gamma - log x + sum_{n>=1} (-1)^{n+1} x^n / (n n!)."""
    if not x > 0.0:
        raise DomainError("x must be positive")
    acc = -np.euler_gamma - math.log(x)
    term = 1.0
    for n in range(1, nmax):
        term *= -x / n
        acc -= term / n
        if abs(term) < 1e-18:
            break
    return acc


def exp_int_e1_quadrature(x: float) -> float:
    """E_1(x) = int_x^oo e^{-t}/t dt."""
    if not x > 0.0:
        raise DomainError("x must be positive")
    return quad(lambda t: math.exp(-t) / t, x, x + 60.0, limit=400,
                epsabs=1e-16, epsrel=1e-13)[0]


def log_multiple_sine_integral(r: int, z: complex, omegas: Sequence[complex]) -> complex:
    """Shintani-type line-integral oracle for log sin_r, r = 1, 2, 3.

    log sin_r(z|w) = (-1)^r [ (i pi / r!) B_{r,r}(z|w)
                              + int_{R + i d} e^{zw} / (w prod_j (e^{w_j w}-1)) dw ].

    Valid after rotating (scale invariance) so that all periods have positive
    real part and 0 < Re z < Re(sum w_j); the contour runs above the real
    axis below the first pole string.
    """
    ws = [complex(w) for w in omegas]
    if len(ws) != r:
        raise DomainError(f"expected {r} periods")
    # rotation must put every period, z, and |omega| - z in the right
    # half-plane; pick the angle with the widest margin (grid + refine is
    # plenty for an oracle)
    tot0 = sum(ws)
    anchors = np.array(ws + [complex(z), tot0 - complex(z)])
    phis = np.linspace(-math.pi, math.pi, 720, endpoint=False)
    margins = np.min(
        (anchors[None, :] * np.exp(-1j * phis)[:, None]).real
        / np.abs(anchors)[None, :],
        axis=1,
    )
    best = int(np.argmax(margins))
    if margins[best] <= 1e-6:
        raise DomainError(
            "no rotation places the periods and z in the oracle's strip"
        )
    phi = float(phis[best])
    rot = cmath.exp(-1j * phi)
    z2 = complex(z) * rot
    ws2 = [w * rot for w in ws]
    tot = sum(ws2)
    if not all(w.real > 0 for w in ws2) or not (0.0 < z2.real < tot.real):
        raise DomainError("oracle rotation failed the strip conditions")
    delta = min(1.0, 0.5 * min(2.0 * math.pi * w.real / abs(w) ** 2 for w in ws2))
    x_left = (36.0 + abs(delta * z2.imag)) / z2.real
    x_right = (36.0 + abs(delta * (tot - z2).imag)) / (tot - z2).real

    def f(xi):
        w = xi + 1j * delta
        den = w
        for om in ws2:
            den *= cmath.exp(om * w) - 1.0
        return cmath.exp(z2 * w) / den

    integral = _complex_quad(f, -x_left, x_right, pts=[0.0], limit=2500)
    brr = gen_bernoulli_poly(r, r, z2, ws2)
    return (-1) ** r * (1j * math.pi / math.factorial(r) * brr + integral)


def mu_term_ray_quadrature(n: int, t: complex, lam: complex) -> complex:
    """Ray integral behind the signed Binet term of the conformal limit:

    -(lam / pi i) int_{i R_- (t+n)} dl' log(1 - e^{2 pi i (t+n)/l'})
                                    / (l'^2 - lam^2)

    parametrized by l' = -i s (t+n), s in (0, oo).
    """
    tn = complex(t) + n
    lam = complex(lam)

    def f_near(s):
        return cmath.log(1.0 - math.exp(-2.0 * math.pi / s)) / (
            s * s * tn * tn + lam * lam
        )

    def f_far(u):
        # s -> 1/u image of the (1, oo) piece; log singularity at u = 0
        return cmath.log(1.0 - math.exp(-2.0 * math.pi * u)) / (
            tn * tn + lam * lam * u * u
        )

    val = _complex_quad(f_near, 0.0, 1.0)
    val += _complex_quad(f_far, 0.0, 1.0)
    return -(lam * tn / math.pi) * val


def li_series_direct(s: int, z: complex, nmax: int = 10_000_000) -> complex:
    """Plain partial sum of Li_s; only sensible for |z| < 1."""
    if abs(z) >= 1.0 and z != 1.0:
        raise DomainError("series oracle needs |z| < 1 (or z = 1 for s >= 2)")
    acc = 0j
    term = 1.0 + 0j
    for n in range(1, nmax):
        term *= z
        inc = term / n**s
        acc += inc
        if abs(inc) < 1e-18 * max(1.0, abs(acc)):
            break
    return acc
