"""Charge lattice, BPS indices, central charge with monodromy sheets,
and BPS-ray/sector bookkeeping.

The lattice is Z b_vee + Z b + Z d with skew pairing <b_vee, b> = 1 and d
pairing to zero with everything (a flavor direction).  The modulus t lives
on the strip |Re t| < 1/2 punctured at 0 and off the wall 2 Re(e^{2 pi i t})
= 1; the b_vee component of the central charge picks up +t per anticlockwise
crossing of the ray i R_{<=0}, which the explicit ``sheet`` integer records.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError, OnRayError
from .specfn import li2

TWO_PI_I = 2j * math.pi
WALL_TOL = 1e-12
RAY_ANGLE_TOL = 1e-12


class Charge(NamedTuple):
    """Integer charge n_beta_vee * b_vee + n_beta * b + n_delta * d."""

    n_beta_vee: int
    n_beta: int
    n_delta: int

    def __neg__(self) -> "Charge":
        return Charge(-self.n_beta_vee, -self.n_beta, -self.n_delta)

    def __add__(self, other: "Charge") -> "Charge":  # type: ignore[override]
        return Charge(
            self.n_beta_vee + other.n_beta_vee,
            self.n_beta + other.n_beta,
            self.n_delta + other.n_delta,
        )

    @property
    def is_flavor(self) -> bool:
        return self.n_beta_vee == 0 and self.n_beta == 0


BETA_VEE = Charge(1, 0, 0)
BETA = Charge(0, 1, 0)
DELTA = Charge(0, 0, 1)


def pairing(a: Charge, b: Charge) -> int:
    """Skew pairing; delta pairs to zero with everything."""
    return a.n_beta_vee * b.n_beta - a.n_beta * b.n_beta_vee


def omega(gamma: Charge) -> int:
    """BPS index: 1 on +-b + n d, -2 on k d (k != 0), 0 otherwise."""
    if gamma.n_beta_vee == 0 and abs(gamma.n_beta) == 1:
        return 1
    if gamma.is_flavor and gamma.n_delta != 0:
        return -2
    return 0


def in_strip(t: complex) -> bool:
    return abs(t.real) < 0.5 and t != 0


def on_wall(t: complex, tol: float = WALL_TOL) -> bool:
    return abs(2.0 * cmath.exp(TWO_PI_I * t).real - 1.0) < tol


def in_m(t: complex) -> bool:
    """Membership in the moduli strip M (off the wall, off the origin)."""
    return in_strip(t) and not on_wall(t)


def in_m0(t: complex) -> bool:
    """Membership in M_0 = M minus the ray i R_{<=0} (principal Li2 domain)."""
    return in_m(t) and not (t.real == 0.0 and t.imag <= 0.0)


@dataclass(frozen=True)
class ModuliPoint:
    """Modulus t plus the accumulated monodromy sheet of b_vee."""

    t: complex
    sheet: int = 0

    def __post_init__(self) -> None:
        if not in_m(complex(self.t)):
            raise DomainError(f"t={self.t} is outside the moduli strip M")


def central_charge(p: ModuliPoint, gamma: Charge) -> complex:
    """Z_gamma at p: Z_d = 1, Z_b = t, and

    Z_bvee = -(1/(2 pi i)^2) ( (2 pi i t)^2 / 2 + Li2(e^{2 pi i t}) ) + sheet * t.
    """
    t = complex(p.t)
    if gamma.n_beta_vee != 0:
        if p.sheet == 0 and not in_m0(t):
            raise DomainError("sheet-0 Z_bvee needs t off the ray i R_{<=0}")
        if t.real == 0.0 and t.imag <= 0.0:
            raise DomainError("principal Li2 branch undefined on i R_{<=0}")
        logz = TWO_PI_I * t
        z_bvee = -(0.5 * logz * logz + li2(cmath.exp(logz))) / TWO_PI_I**2
        z_bvee += p.sheet * t
    else:
        z_bvee = 0j
    return gamma.n_beta_vee * z_bvee + gamma.n_beta * t + gamma.n_delta


def rescaled_central_charge(p: ModuliPoint, gamma: Charge) -> complex:
    """Z' = 2 i Z, the normalization used by the twistor/conformal sections."""
    return 2j * central_charge(p, gamma)


class BpsRay(NamedTuple):
    """A BPS ray: l_n = i R_+ (t + n) or l_inf = i R_+, with +- sign."""

    index: int | None  # None encodes the flavor ray l_inf
    sign: int  # +1 for l, -1 for -l
    direction: complex  # unit complex

    @property
    def angle(self) -> float:
        return cmath.phase(self.direction)


def enumerate_rays(t: complex, n_range: Sequence[int]) -> list[BpsRay]:
    """All rays +-l_n for n in n_range plus +-l_inf, sorted by angle."""
    if t.imag == 0.0:
        raise DomainError("rays degenerate for real t")
    rays = []
    for n in n_range:
        u = 1j * (t + n)
        u /= abs(u)
        rays.append(BpsRay(n, +1, u))
        rays.append(BpsRay(n, -1, -u))
    rays.append(BpsRay(None, +1, 1j))
    rays.append(BpsRay(None, -1, -1j))
    return sorted(rays, key=lambda r: r.angle)


class SectorId(NamedTuple):
    """Sector data for lambda: bounding rays, per-n signs of a_n, sign of b."""

    lower: BpsRay
    upper: BpsRay
    signs: dict
    b_sign: int


def classify_sector(
    t: complex,
    lam: complex,
    n_range: Sequence[int] = range(-8, 9),
    tol_angle: float = RAY_ANGLE_TOL,
) -> SectorId:
    """Locate lambda between adjacent BPS rays and record the sign data
    a_n = Re((t+n)/lambda), b = Re(1/lambda)."""
    if t.imag == 0.0:
        raise DomainError("need Im t != 0")
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    rays = enumerate_rays(t, n_range)
    ph = cmath.phase(lam)
    for ray in rays:
        d = (ph - ray.angle + math.pi) % (2.0 * math.pi) - math.pi
        if abs(d) < tol_angle:
            raise OnRayError(f"lambda within {tol_angle} rad of ray {ray.index, ray.sign}")
    below = max(rays, key=lambda r: r.angle if r.angle <= ph else -math.inf)
    above = min(rays, key=lambda r: r.angle if r.angle > ph else math.inf)
    if below.angle > ph:  # wrap-around sector
        below = max(rays, key=lambda r: r.angle)
    if above.angle <= ph:
        above = min(rays, key=lambda r: r.angle)
    signs = {}
    for n in n_range:
        a_n = ((t + n) / lam).real
        if a_n == 0.0:
            raise OnRayError(f"a_{n} vanishes: lambda on a ray")
        signs[n] = 1 if a_n > 0 else -1
    b = (1.0 / lam).real
    if b == 0.0:
        raise OnRayError("lambda on i R_+- (b = 0)")
    return SectorId(below, above, signs, 1 if b > 0 else -1)


def convergence_check(
    p: ModuliPoint, big_r: float, n_cut: int
) -> tuple[float, float]:
    """Partial sum of sum_gamma |Omega| e^{-R |Z_gamma|} over |n| <= n_cut
    plus a geometric tail bound from |Z_{b+nd}| >= |n| - |t|."""
    if big_r <= 0:
        raise DomainError("R must be positive")
    t = complex(p.t)
    partial = 0.0
    for n in range(-n_cut, n_cut + 1):
        partial += 2.0 * math.exp(-big_r * abs(t + n))  # gamma = +-(b + n d)
    for k in range(1, n_cut + 1):
        partial += 2.0 * 2.0 * math.exp(-big_r * k)  # gamma = +-k d, Omega = -2
    decay = math.exp(-big_r)
    tail = (
        4.0 * math.exp(big_r * abs(t)) * math.exp(-big_r * (n_cut + 1))
        + 4.0 * math.exp(-big_r * (n_cut + 1))
    ) / (1.0 - decay)
    return partial, tail
