"""Special-function kernel.

Polylogarithms on the principal branch, scaled modified Bessel functions,
Binet's log-Gamma remainder, generalized Bernoulli polynomials, Barnes-type
multiple sines through their q-product factorizations, the Faddeev quantum
dilogarithm H, its small-period correction Q_H, and the triple-gamma-type
function G3 with its non-perturbative logarithm.

Branch conventions: logs are principal with cut on the negative reals,
Li_s has its cut on [1, oo).  Boundary values on the cut are available
through an explicit ``side`` flag (+1 for the upper side, -1 for the lower).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import exp1, k0, k0e, k1, k1e, loggamma

from .budget import DEFAULT_BUDGET, SumResult, TruncationBudget
from .errors import (
    BranchCutError,
    BudgetError,
    ConvergenceError,
    DivergenceWarning,
    DomainError,
    PoleError,
)

TWO_PI_I = 2j * math.pi
ZETA2 = math.pi**2 / 6.0
ZETA3 = 1.2020569031595942854

__all__ = [
    "OmegaPair",
    "li2",
    "li3",
    "bessel_k",
    "binet_mu",
    "binet_mu_asymptotic",
    "exp_int_e1",
    "gen_bernoulli_poly",
    "multiple_sine",
    "log_multiple_sine",
    "quantum_dilog_h",
    "log_quantum_dilog_h",
    "q_correction",
    "triple_g3",
    "log_triple_g3",
    "f_non_pert",
    "f_non_pert_path",
    "bernoulli_even",
]


# ---------------------------------------------------------------------------
# exact Bernoulli data
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_fractions(nmax: int) -> tuple[Fraction, ...]:
    """B_0 .. B_nmax as exact fractions (B_1 = -1/2 convention)."""
    b = [Fraction(0)] * (nmax + 1)
    b[0] = Fraction(1)
    for n in range(1, nmax + 1):
        acc = Fraction(0)
        binom = 1
        for k in range(n):
            acc += binom * b[k]
            binom = binom * (n + 1 - k) // (k + 1)
        b[n] = -acc / (n + 1)
    return tuple(b)


def bernoulli_even(m: int) -> float:
    """B_{2m} as a float."""
    if m < 0:
        raise DomainError("need m >= 0")
    return float(_bernoulli_fractions(2 * m)[2 * m])


@lru_cache(maxsize=None)
def _zeta_neg(m: int) -> float:
    """zeta(-m) for integer m >= 0."""
    if m == 0:
        return -0.5
    if m % 2 == 0:
        return 0.0
    return float(-_bernoulli_fractions(m + 1)[m + 1] / (m + 1))


# ---------------------------------------------------------------------------
# polylogarithms
# ---------------------------------------------------------------------------

_SERIES_RADIUS = 0.5
_INVERSION_RADIUS = 2.0


def _on_li_cut(z: complex) -> bool:
    return z.imag == 0.0 and z.real > 1.0


def _li_series(s: int, z: complex, tol: float) -> complex:
    acc = 0j
    term = 1.0 + 0j
    for n in range(1, 400):
        term *= z
        inc = term / n**s
        acc += inc
        if abs(inc) < tol * max(1.0, abs(acc)):
            return acc
    raise BudgetError(f"Li_{s} series did not reach tol={tol}")


def _li_log_series(s: int, z: complex, side: int | None, tol: float) -> complex:
    # expansion of Li_s(e^mu) in powers of mu = log z, valid |mu| < 2 pi
    mu = cmath.log(z)
    if mu == 0:
        return ZETA2 if s == 2 else ZETA3
    if mu.imag == 0.0 and mu.real > 0.0:
        # boundary value on the cut; the side flag fixes arg(-mu)
        log_neg_mu = math.log(mu.real) - (side or 0) * 1j * math.pi
    else:
        log_neg_mu = cmath.log(-mu)
    if s == 2:
        acc = ZETA2 + mu * (1.0 - log_neg_mu)
        k0_ = 2
    else:
        acc = ZETA3 + ZETA2 * mu + 0.5 * mu * mu * (1.5 - log_neg_mu)
        k0_ = 3
    pw = mu**k0_
    fact = math.factorial(k0_)
    for k in range(k0_, 160):
        zv = _zeta_neg(k - s)
        if zv != 0.0:
            inc = zv * pw / fact
            acc += inc
            if abs(inc) < tol * max(1.0, abs(acc)) and k > k0_ + 4:
                return acc
        pw *= mu
        fact *= k + 1
    raise BudgetError("polylog log-series did not converge (|log z| too large?)")


def _log_neg(z: complex, side: int | None) -> complex:
    # principal log(-z), side-flagged when z sits on (0, oo)
    if z.imag == 0.0 and z.real > 0.0:
        return math.log(z.real) - (side or 0) * 1j * math.pi
    return cmath.log(-z)


def li2(z: complex, side: int | None = None, tol: float = 1e-15) -> complex:
    """Dilogarithm, principal branch with cut on [1, oo).

    ``side=+1`` (resp. -1) selects the boundary value from above (below)
    when z lies on the cut.
    """
    z = complex(z)
    if _on_li_cut(z) and side not in (+1, -1):
        raise BranchCutError("li2 on the cut [1, oo) requires side=+1 or -1")
    az = abs(z)
    if az <= _SERIES_RADIUS:
        return _li_series(2, z, tol)
    if az >= _INVERSION_RADIUS:
        lm = _log_neg(z, side)
        return -ZETA2 - 0.5 * lm * lm - _li_series(2, 1.0 / z, tol)
    return _li_log_series(2, z, side, tol)


def li3(z: complex, side: int | None = None, tol: float = 1e-15) -> complex:
    """Trilogarithm, principal branch with cut on [1, oo)."""
    z = complex(z)
    if _on_li_cut(z) and side not in (+1, -1):
        raise BranchCutError("li3 on the cut [1, oo) requires side=+1 or -1")
    az = abs(z)
    if az <= _SERIES_RADIUS:
        return _li_series(3, z, tol)
    if az >= _INVERSION_RADIUS:
        lm = _log_neg(z, side)
        return _li_series(3, 1.0 / z, tol) - ZETA2 * lm - lm**3 / 6.0
    return _li_log_series(3, z, side, tol)


def _log1m(w: complex) -> complex:
    """log(1 - w), accurate for small |w|."""
    if abs(w) < 1e-4:
        return -w * (1.0 + w * (0.5 + w * (1.0 / 3.0 + w * (0.25 + 0.2 * w))))
    return cmath.log(1.0 - w)


# ---------------------------------------------------------------------------
# Bessel, Binet, exponential integral
# ---------------------------------------------------------------------------


def bessel_k(nu: int, x: float, scaled: bool = False) -> float:
    """Modified Bessel K_nu for nu in {0, 1}; ``scaled`` returns e^x K_nu(x).

    The scaled form is the internal primitive used by the instanton sums, so
    large arguments never underflow prematurely.
    """
    if nu not in (0, 1):
        raise DomainError("only nu = 0, 1 are implemented")
    if not x > 0.0:
        raise DomainError("bessel_k requires x > 0")
    if scaled:
        return float(k0e(x) if nu == 0 else k1e(x))
    return float(k0(x) if nu == 0 else k1(x))


def binet_mu(z: complex) -> complex:
    """Binet's function log Gamma(z) - (z - 1/2) log z + z - log(2 pi)/2."""
    z = complex(z)
    if not z.real > 0.0:
        raise DomainError("binet_mu requires Re z > 0")
    return (
        loggamma(z)
        - (z - 0.5) * cmath.log(z)
        + z
        - 0.5 * math.log(2.0 * math.pi)
    )


class AsymptoticValue(NamedTuple):
    value: complex
    error_estimate: float


def binet_mu_asymptotic(z: complex, order: int) -> AsymptoticValue:
    """Partial sum of mu(z) ~ sum_m B_{2m} / ((2m-1) 2m z^{2m-1}).

    The error estimate is the magnitude of the first omitted term; a
    ``DivergenceWarning`` is issued if the terms stop decreasing.
    """
    z = complex(z)
    if not z.real > 0.0:
        raise DomainError("asymptotic series requires Re z > 0")
    if order < 1:
        raise DomainError("order must be >= 1")
    acc = 0j
    prev = math.inf
    diverging = False
    for m in range(1, order + 1):
        term = bernoulli_even(m) / ((2 * m - 1) * (2 * m) * z ** (2 * m - 1))
        if abs(term) >= prev:
            diverging = True
        prev = abs(term)
        acc += term
    omitted = abs(
        bernoulli_even(order + 1)
        / ((2 * order + 1) * (2 * order + 2) * z ** (2 * order + 1))
    )
    if diverging or omitted >= prev:
        warnings.warn(
            f"asymptotic series for mu at z={z} is outside its decreasing-term "
            "regime",
            DivergenceWarning,
            stacklevel=2,
        )
    return AsymptoticValue(acc, omitted)


def exp_int_e1(x: float) -> float:
    """Exponential integral E_1(x) for x > 0."""
    if not x > 0.0:
        raise DomainError("exp_int_e1 requires x > 0")
    return float(exp1(x))


# ---------------------------------------------------------------------------
# generalized Bernoulli polynomials
# ---------------------------------------------------------------------------


def gen_bernoulli_poly(
    r: int, n: int, z: complex, omegas: Sequence[complex]
) -> complex:
    """Coefficient B_{r,n}(z | omega_1..omega_r) of the generating function
    x^r e^{zx} / prod_i (e^{omega_i x} - 1).

    Computed by truncated power-series division; the factorial weights enter
    as exact rationals so no floating recursion is involved.
    """
    if len(omegas) != r:
        raise DomainError(f"expected {r} periods, got {len(omegas)}")
    if any(w == 0 for w in omegas):
        raise DomainError("periods must be nonzero")
    if n < 0:
        raise DomainError("n must be >= 0")
    inv_fact = [1.0 / float(math.factorial(k)) for k in range(n + 2)]
    # (e^{w x} - 1)/x has series sum_k w^{k+1} x^k / (k+1)!
    den = [1.0 + 0j] + [0j] * n
    for w in omegas:
        g = [complex(w) ** (k + 1) * inv_fact[k + 1] for k in range(n + 1)]
        den = [
            sum(den[j] * g[k - j] for j in range(k + 1)) for k in range(n + 1)
        ]
    num = [complex(z) ** k * inv_fact[k] for k in range(n + 1)]
    quot = [0j] * (n + 1)
    for k in range(n + 1):
        acc = num[k]
        for j in range(k):
            acc -= quot[j] * den[k - j]
        quot[k] = acc / den[0]
    return quot[n] * math.factorial(n)


# ---------------------------------------------------------------------------
# multiple sines via q-product factorizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OmegaPair:
    """Period pair for the quantum dilogarithm; ratio off the negative reals."""

    omega1: complex
    omega2: complex

    def __post_init__(self) -> None:
        if self.omega1 == 0 or self.omega2 == 0:
            raise DomainError("periods must be nonzero")
        r = complex(self.omega1) / complex(self.omega2)
        if r.imag == 0.0 and r.real < 0.0:
            raise DomainError("omega1/omega2 on the negative reals is outside "
                              "the meromorphy domain")


def _check_factor(one_minus_w: complex, where: str) -> complex:
    if abs(one_minus_w) < 1e-12:
        raise PoleError(f"argument hits the zero/pole lattice ({where})")
    return one_minus_w


def _geom_log_sum(
    x: complex,
    q: complex,
    budget: TruncationBudget,
    weight: str = "one",
    start: int = 0,
) -> complex:
    """sum_{k>=start} w_k log(1 - x q^k) with w_k in {1, k} and |q| < 1."""
    if not abs(q) < 1.0:
        raise ConvergenceError("product nome must satisfy |q| < 1")
    acc = 0j
    xq = x * q**start
    for k in range(start, budget.max_terms):
        w = 1.0 if weight == "one" else float(k)
        if w != 0.0:
            _check_factor(1.0 - xq, f"k={k}")
            acc += w * _log1m(xq)
        if abs(xq) * max(1.0, float(k + 1)) < 1e-18 and k > start + 2:
            return acc
        xq *= q
    raise BudgetError("q-product did not truncate within max_terms")


def _li2_log_sum(x: complex, q: complex, budget: TruncationBudget) -> complex:
    """sum_{k>=0} Li2(x q^k), |q| < 1."""
    acc = 0j
    xq = x
    for k in range(budget.max_terms):
        if xq.imag == 0.0 and xq.real >= 1.0:
            raise PoleError("Li2 argument on [1, oo) in triple-sine product")
        acc += li2(xq)
        if abs(xq) < 1e-18 and k > 2:
            return acc
        xq *= q
    raise BudgetError("dilog sum did not truncate within max_terms")


def _half_plane_sorted(omegas: Sequence[complex]) -> list[complex] | None:
    """Sort periods by argument inside a common open half-plane.

    Returns None when the periods do not fit in an open half-plane.  For the
    sorted list every ratio omega_j / omega_i with i < j has argument in
    (0, pi), i.e. strictly positive imaginary part unless two arguments tie.
    """
    args = sorted(cmath.phase(w) for w in omegas)
    n = len(args)
    gaps = [(args[(i + 1) % n] - args[i]) % (2.0 * math.pi) for i in range(n)]
    widest = max(range(n), key=lambda i: gaps[i])
    if gaps[widest] <= math.pi:
        return None
    ref = args[(widest + 1) % n]  # all args within [ref, ref + pi)
    return sorted(omegas, key=lambda w: (cmath.phase(w) - ref) % (2.0 * math.pi))


def _log_double_sine(
    z: complex, w1: complex, w2: complex, budget: TruncationBudget
) -> complex:
    """log sin_2(z | w1, w2) for Im(w2/w1) > 0."""
    b22 = gen_bernoulli_poly(2, 2, z, [w1, w2])
    s = 0.5j * math.pi * b22
    s += _geom_log_sum(cmath.exp(TWO_PI_I * z / w1), cmath.exp(TWO_PI_I * w2 / w1), budget)
    s -= _geom_log_sum(
        cmath.exp(TWO_PI_I * (z - w1) / w2),
        cmath.exp(-TWO_PI_I * w1 / w2),
        budget,
    )
    return s


def _log_triple_sine_generic(
    z: complex, ws: Sequence[complex], budget: TruncationBudget
) -> complex:
    """log sin_3 for pairwise non-real period ratios, ws sorted by argument."""
    w1, w2, w3 = ws
    b33 = gen_bernoulli_poly(3, 3, z, [w1, w2, w3])
    s = -1j * math.pi / 6.0 * b33
    x = [cmath.exp(TWO_PI_I * z / w) for w in ws]
    q = {
        (i, j): cmath.exp(TWO_PI_I * ws[j] / ws[i])
        for i in range(3)
        for j in range(3)
        if i != j
    }

    def double_sum(x0, qa, qb, ka0, kb0, sign):
        nonlocal s
        # sum_{ka>=ka0, kb>=kb0} log(1 - x0 qa^ka qb^kb), |qa|,|qb| < 1
        xa = x0 * qa**ka0
        for ka in range(ka0, budget.max_terms):
            inner = _geom_log_sum(xa * qb**kb0, qb, budget)
            s += sign * inner
            if abs(xa) * max(abs(qb) ** kb0, 1e-30) < 1e-18 and ka > ka0 + 2:
                return
            xa *= qa
        raise BudgetError("triple product did not truncate within max_terms")

    double_sum(x[0], q[(0, 1)], q[(0, 2)], 0, 0, +1.0)
    double_sum(x[1], 1.0 / q[(1, 0)], q[(1, 2)], 1, 0, -1.0)
    double_sum(x[2], 1.0 / q[(2, 0)], 1.0 / q[(2, 1)], 1, 1, +1.0)
    return s


def _log_triple_sine_repeated(
    z: complex, a: complex, b: complex, budget: TruncationBudget
) -> complex:
    """log sin_3(z | a, a, b) for Im(b/a) > 0.

    The repeated period degenerates the usual triple product: the a-side
    picks up k-weighted factors and a dilogarithm series, the b-side the
    familiar (k-weighted) q-products.
    """
    x = cmath.exp(TWO_PI_I * z / a)
    p = cmath.exp(TWO_PI_I * b / a)
    y = cmath.exp(TWO_PI_I * z / b)
    uinv = cmath.exp(-TWO_PI_I * a / b)
    b33 = gen_bernoulli_poly(3, 3, z, [a, a, b])
    s = -1j * math.pi / 6.0 * b33
    s += (1.0 - z / a) * _geom_log_sum(x, p, budget)
    s -= (b / a) * _geom_log_sum(x, p, budget, weight="k")
    s -= _li2_log_sum(x, p, budget) / TWO_PI_I
    # -S_B + S_{B,w} collapses to a single (k-1)-weighted product over k >= 1
    s += _geom_log_sum(y * uinv, uinv, budget, weight="k")
    return s


def log_multiple_sine(
    r: int,
    z: complex,
    omegas: Sequence[complex],
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """log of the multiple sine sin_r(z | omegas) for r = 2, 3.

    Primary algorithm: the q-product factorization, valid when the period
    ratios are non-real (for r = 3 also when exactly two periods coincide).
    A real ratio raises ``DomainError``.
    """
    z = complex(z)
    ws = [complex(w) for w in omegas]
    if len(ws) != r:
        raise DomainError(f"expected {r} periods")
    if any(w == 0 for w in ws):
        raise DomainError("periods must be nonzero")
    if r == 2:
        ratio = ws[1] / ws[0]
        if ratio.imag == 0.0:
            raise DomainError("product algorithm needs omega1/omega2 off the reals")
        if ratio.imag > 0.0:
            return _log_double_sine(z, ws[0], ws[1], budget)
        return _log_double_sine(z, ws[1], ws[0], budget)
    if r == 3:
        return _log_triple_sine3(z, ws, budget)
    raise DomainError("only r = 2, 3 are implemented")


def _log_triple_sine3(
    z: complex, ws: list[complex], budget: TruncationBudget
) -> complex:
    # split off a repeated period if two coincide (the G3 case)
    pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
    for i, j, k in pairs:
        if abs(ws[i] - ws[j]) <= 1e-14 * max(abs(ws[i]), abs(ws[j])):
            a, b = ws[i], ws[k]
            ratio = b / a
            if ratio.imag == 0.0:
                raise DomainError("need Im(b/a) != 0 for the repeated-period product")
            if ratio.imag > 0.0:
                return _log_triple_sine_repeated(z, a, b, budget)
            return _log_triple_sine_repeated(
                z.conjugate(), a.conjugate(), b.conjugate(), budget
            ).conjugate()
    for i in range(3):
        for j in range(i + 1, 3):
            if (ws[j] / ws[i]).imag == 0.0:
                raise DomainError(
                    "distinct periods with a real ratio are outside the "
                    "product algorithm"
                )
    ws_sorted = _half_plane_sorted(ws)
    if ws_sorted is None:
        raise DomainError("periods must lie in an open half-plane")
    return _log_triple_sine_generic(z, ws_sorted, budget)


def multiple_sine(
    r: int,
    z: complex,
    omegas: Sequence[complex],
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """Multiple sine sin_r(z | omegas), r = 2 or 3."""
    return cmath.exp(log_multiple_sine(r, z, omegas, budget))


# ---------------------------------------------------------------------------
# quantum dilogarithm and friends
# ---------------------------------------------------------------------------


def _qdl_ordered(omegas: OmegaPair) -> tuple[complex, complex]:
    w1, w2 = complex(omegas.omega1), complex(omegas.omega2)
    ratio = w2 / w1
    if ratio.imag == 0.0:
        raise DomainError("quantum dilogarithm product needs a non-real period ratio")
    return (w1, w2) if ratio.imag > 0.0 else (w2, w1)


def log_quantum_dilog_h(
    t: complex, omegas: OmegaPair, budget: TruncationBudget = DEFAULT_BUDGET
) -> complex:
    """log H(t | omega1, omega2) as a termwise sum of principal factor logs.

    H(t|w1,w2) = prod_{k>=0}(1 - e^{2 pi i (t + k w2)/w1})
               / prod_{k>=1}(1 - e^{2 pi i (t - k w1)/w2})
    in the ordering with Im(w2/w1) > 0; symmetric in the periods.
    """
    w1, w2 = _qdl_ordered(omegas)
    t = complex(t)
    s = _geom_log_sum(cmath.exp(TWO_PI_I * t / w1), cmath.exp(TWO_PI_I * w2 / w1), budget)
    s -= _geom_log_sum(
        cmath.exp(TWO_PI_I * (t - w1) / w2), cmath.exp(-TWO_PI_I * w1 / w2), budget
    )
    return s


def quantum_dilog_h(
    t: complex, omegas: OmegaPair, budget: TruncationBudget = DEFAULT_BUDGET
) -> complex:
    """Faddeev quantum dilogarithm
    H(t|w1,w2) = exp(-(pi i/2) B_{2,2}(t|w1,w2)) sin_2(t|w1,w2)."""
    w1, w2 = complex(omegas.omega1), complex(omegas.omega2)
    b22 = gen_bernoulli_poly(2, 2, complex(t), [w1, w2])
    return cmath.exp(-0.5j * math.pi * b22) * multiple_sine(2, t, [w1, w2], budget)


def q_correction(t: complex, omega1: complex, omega2: complex) -> complex:
    """Correction term
    Q_H(t|w1,w2) = -(w1 / 2 pi i w2) Li2(e^{2 pi i t/w1})
                   - log(1 - e^{2 pi i t/w1})/2 + (pi/12)(w2/w1)."""
    w1, w2 = complex(omega1), complex(omega2)
    if w1 == 0 or w2 == 0:
        raise DomainError("periods must be nonzero")
    q = cmath.exp(TWO_PI_I * complex(t) / w1)
    if q.imag == 0.0 and q.real >= 1.0:
        raise BranchCutError("e^{2 pi i t/omega1} on [1, oo)")
    return (
        -(w1 / (TWO_PI_I * w2)) * li2(q)
        - 0.5 * _log1m(q)
        + (math.pi / 12.0) * (w2 / w1)
    )


def log_triple_g3(
    z: complex,
    omega1: complex,
    omega2: complex,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """log G3(z | w1, w2) where
    G3 = exp((pi i/6) B_{3,3}(z|w1,w1,w2)) sin_3(z|w1,w1,w2).

    Note the polynomial prefactor carries an explicit i, so G3 does not obey
    the plain conjugation reflection that sin_3 does; composing the two
    pieces keeps every regime correct.
    """
    z, a, b = complex(z), complex(omega1), complex(omega2)
    if a == 0 or b == 0:
        raise DomainError("periods must be nonzero")
    if (b / a).imag == 0.0:
        raise DomainError("need a non-real period ratio for G3")
    b33 = gen_bernoulli_poly(3, 3, z, [a, a, b])
    return 1j * math.pi / 6.0 * b33 + log_multiple_sine(3, z, [a, a, b], budget)


def triple_g3(
    z: complex,
    omega1: complex,
    omega2: complex,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """Triple-gamma combination G3(z | omega1, omega2)."""
    return cmath.exp(log_triple_g3(z, omega1, omega2, budget))


def f_non_pert(
    lam: complex, t: complex, budget: TruncationBudget = DEFAULT_BUDGET
) -> complex:
    """Non-perturbative free-energy log, F_np(lambda, t) = log G3(t | lambda/2pi, 1)."""
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    return log_triple_g3(t, lam / (2.0 * math.pi), 1.0, budget)


def f_non_pert_path(
    lam: complex,
    ts: Sequence[complex],
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> np.ndarray:
    """F_np along a path of t values with a continuous branch of the log.

    Consecutive points must be close enough that the underlying value moves
    by less than pi in phase; otherwise the 2 pi i bookkeeping is ambiguous
    and ``BranchTrackError`` is raised.
    """
    from .errors import BranchTrackError

    if len(ts) == 0:
        return np.empty(0, dtype=complex)
    vals = [f_non_pert(lam, ts[0], budget)]
    shift = 0.0
    for t_prev, t_next in zip(ts[:-1], ts[1:]):
        prev = vals[-1]
        raw = f_non_pert(lam, t_next, budget) + 1j * shift
        jump = raw.imag - prev.imag
        wraps = round(jump / (2.0 * math.pi))
        if abs(jump - 2.0 * math.pi * wraps) > 0.5 * math.pi:
            raise BranchTrackError(
                f"cannot track the log branch between t={t_prev} and t={t_next}"
            )
        shift -= 2.0 * math.pi * wraps
        vals.append(raw - 1j * 2.0 * math.pi * wraps)
    return np.asarray(vals, dtype=complex)
