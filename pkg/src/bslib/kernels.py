"""Extremal band-limited kernels.

Fejer kernel K, the sign-function majorant/minorant pair B/b, the odd
interpolation kernel W, the box majorant/minorant pair S_ell/sigma_ell,
the Fourier-side profile Q, and the smoothing constant lambda.

Evaluation strategy for W: a Taylor series in odd zeta values near the
origin, and a trigamma-based closed form elsewhere (upward shift
recurrence into a Bernoulli asymptotic series).  A direct-series oracle
with a certified sandwich tail bracket is kept alongside for
cross-checking; the two routes are never collapsed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "KernelConfig",
    "BernoulliTable",
    "OddZetaTable",
    "KernelKind",
    "bernoulli_numbers",
    "fejer_K",
    "trigamma",
    "W_eval",
    "sgn",
    "kernel_family_eval",
    "B_eval",
    "b_eval",
    "S_eval",
    "sigma_eval",
    "interval_majorant_direct",
    "Q_eval",
    "lambda_constant",
    "fourier_W_check",
    "extremal_family_check",
    "chi_box",
    "DEFAULT_CONFIG",
]


# ---------------------------------------------------------------------------
# configuration and cached tables


@dataclass(frozen=True)
class BernoulliTable:
    """Bernoulli numbers B_0 .. B_n as exact rationals (B_1 = -1/2)."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        v = self.values
        assert v[0] == 1
        if len(v) > 1:
            assert v[1] == Fraction(-1, 2)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]


@dataclass(frozen=True)
class OddZetaTable:
    """zeta(3), zeta(5), ..., zeta(2*m_max+1)."""

    values: tuple[float, ...]

    def __post_init__(self):
        for z in self.values:
            assert 1.0 < z < 1.21

    def __getitem__(self, m: int) -> float:
        """zeta(2m+1) for m >= 1."""
        return self.values[m - 1]


@dataclass(frozen=True)
class KernelConfig:
    series_terms: int = 10**6
    asymptotic_pairs: int = 10
    crossover_x0: float = 8.0
    taylor_radius: float = 0.4
    taylor_terms: int = 20
    tol: float = 1e-12

    def __post_init__(self):
        assert self.series_terms >= 10
        assert 1 <= self.asymptotic_pairs <= 30
        assert 0 < self.taylor_radius <= 0.5
        assert self.tol > 0


def bernoulli_numbers(n: int) -> BernoulliTable:
    """B_0 .. B_n from the defining recurrence sum_j C(m+1,j) B_j = 0."""
    assert n >= 2
    vals = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(Fraction(math.comb(m + 1, j)) * vals[j] for j in range(m))
        vals.append(-s / (m + 1))
    return BernoulliTable(tuple(vals))


def _zeta_em(s: int, terms: int = 200) -> float:
    # direct sum with Euler-Maclaurin tail: sum_{n>N} n^-s
    #   = N^(1-s)/(s-1) - N^(-s)/2 + s*N^(-s-1)/12 - ...
    N = terms
    head = sum(n ** (-float(s)) for n in range(1, N + 1))
    tail = N ** (1.0 - s) / (s - 1.0) - 0.5 * N ** (-float(s)) + s * N ** (-s - 1.0) / 12.0
    return head + tail


def odd_zeta_table(m_max: int = 20) -> OddZetaTable:
    return OddZetaTable(tuple(_zeta_em(2 * m + 1) for m in range(1, m_max + 1)))


DEFAULT_CONFIG = KernelConfig()
_BERNOULLI = bernoulli_numbers(62)
_ODD_ZETA = odd_zeta_table(20)


# ---------------------------------------------------------------------------
# elementary pieces


def sgn(x: float) -> float:
    """Sign function with sgn(0) = 0."""
    return 0.0 if x == 0 else math.copysign(1.0, x)


def fejer_K(x):
    """(sin(pi x)/(pi x))^2; removable singularity at 0 handled by sinc."""
    return np.sinc(x) ** 2


def _sinpi_over_pi_sq(x):
    """(sin(pi x)/pi)^2, stable for all real x."""
    x = np.asarray(x, dtype=float)
    frac = x - np.round(x)
    return (np.sin(np.pi * frac) / np.pi) ** 2


def trigamma(x: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float:
    """sum_{n>=0} 1/(x+n)^2 for x > 0.

    Upward shift recurrence until x >= crossover, then the Bernoulli
    asymptotic series 1/x + 1/(2x^2) + sum B_2k / x^(2k+1); the first
    omitted term bounds the remainder.
    """
    if x <= 0:
        raise ValueError("trigamma requires x > 0")
    acc = 0.0
    while x < cfg.crossover_x0:
        acc += 1.0 / (x * x)
        x += 1.0
    s = 1.0 / x + 0.5 / (x * x)
    xp = x**3
    for k in range(1, cfg.asymptotic_pairs + 1):
        s += float(_BERNOULLI[2 * k]) / xp
        xp *= x * x
    return acc + s


# ---------------------------------------------------------------------------
# W: fast route and direct-series oracle


def _w_taylor(x: float, cfg: KernelConfig) -> float:
    s = 2.0 * x
    xp = x**3
    for m in range(1, cfg.taylor_terms + 1):
        s += 4.0 * m * _ODD_ZETA[m] * xp
        xp *= x * x
    return float(fejer_K(x)) * s


def _w_fast_pos(x: float, cfg: KernelConfig) -> float:
    if x <= cfg.taylor_radius:
        return _w_taylor(x, cfg)
    bracket = 0.5 / (x * x) + trigamma(x + 1.0, cfg) - 1.0 / x
    return 1.0 - 2.0 * float(_sinpi_over_pi_sq(x)) * bracket


def _w_oracle_pos(x: float, cfg: KernelConfig) -> float:
    # direct partial sum of the defining series plus a sandwich-bracket
    # tail midpoint:  sum_{n>=1} 1/(n+w)^2  in  (1/w - 1/w^2, 1/w),
    # refined midpoint 1/w - 1/(2 w^2).
    if x == 0.0:
        return 0.0
    k0 = round(x)
    if abs(x - k0) < 1e-12 and k0 >= 1:
        return 1.0  # double-pole coefficient at positive integers
    T = cfg.series_terms
    s = 2.0 / x
    chunk = 250_000
    lo = 1
    while lo <= T:
        hi = min(lo + chunk - 1, T)
        k = np.arange(lo, hi + 1, dtype=float)
        s += float(np.sum(1.0 / (x - k) ** 2 - 1.0 / (x + k) ** 2))
        lo = hi + 1
    wm, wp = T - x, T + x
    s += (1.0 / wm - 0.5 / wm**2) - (1.0 / wp - 0.5 / wp**2)
    return float(_sinpi_over_pi_sq(x)) * s


def W_eval(
    x: float,
    cfg: KernelConfig = DEFAULT_CONFIG,
    mode: Literal["fast", "oracle"] = "fast",
) -> float:
    """The odd interpolation kernel W at a real point."""
    if x == 0:
        return 0.0
    if x < 0:
        return -W_eval(-x, cfg, mode)
    if mode == "oracle":
        return _w_oracle_pos(x, cfg)
    return _w_fast_pos(x, cfg)


# ---------------------------------------------------------------------------
# the B / b / S_ell / sigma_ell family


@dataclass(frozen=True)
class KernelKind:
    tag: Literal["K", "W", "B", "b", "S", "sigma"]
    ell: float | None = None

    def __post_init__(self):
        if self.tag in ("S", "sigma"):
            assert self.ell is not None and self.ell > 0


def B_eval(x: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float:
    return W_eval(x, cfg) + float(fejer_K(x))


def b_eval(x: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float:
    return W_eval(x, cfg) - float(fejer_K(x))


def S_eval(ell: float, x: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float:
    return 0.5 * (B_eval(x, cfg) + B_eval(ell - x, cfg))


def sigma_eval(ell: float, x: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float:
    return 0.5 * (b_eval(x, cfg) + b_eval(ell - x, cfg))


def kernel_family_eval(kind: KernelKind, x: float, cfg: KernelConfig = DEFAULT_CONFIG) -> float:
    if kind.tag == "K":
        return float(fejer_K(x))
    if kind.tag == "W":
        return W_eval(x, cfg)
    if kind.tag == "B":
        return B_eval(x, cfg)
    if kind.tag == "b":
        return b_eval(x, cfg)
    if kind.tag == "S":
        return S_eval(kind.ell, x, cfg)
    if kind.tag == "sigma":
        return sigma_eval(kind.ell, x, cfg)
    raise ValueError(f"unknown kernel tag {kind.tag!r}")


def interval_majorant_direct(ell: int, x: float) -> float:
    """Direct finite-sum form of the interval majorant for integer ell.

    (sin(pi z)/pi)^2 { sum_{k=0}^{ell} 1/(z-k)^2 + 1/z + 1/(ell-z) };
    S_ell must reduce to this when ell is a positive integer.
    """
    assert ell == int(ell) and ell >= 1
    k0 = round(x)
    if abs(x - k0) < 1e-12:
        # nodal values: 1 on {0..ell}, 0 outside
        return 1.0 if 0 <= k0 <= ell else 0.0
    s = sum(1.0 / (x - k) ** 2 for k in range(int(ell) + 1))
    s += 1.0 / x + 1.0 / (ell - x)
    return float(_sinpi_over_pi_sq(x)) * s


def chi_box(x: float, ell: float) -> float:
    """Indicator of [0, ell], endpoints included."""
    return 1.0 if 0.0 <= x <= ell else 0.0


# ---------------------------------------------------------------------------
# Fourier-side profile Q and the smoothing constant


def _one_minus_absv_vcot(v: float) -> float:
    """(1-|v|) * v * cot(pi v) for 0 < |v| < 1, stably near both ends."""
    a = abs(v)
    if a < 1e-4:
        # v*cot(pi v) = (1/pi)(1 - (pi v)^2/3 - (pi v)^4/45 - ...)
        t = (math.pi * a) ** 2
        return (1.0 - a) * (1.0 - t / 3.0 - t * t / 45.0) / math.pi
    if a > 1.0 - 1e-4:
        # with u = 1-|v|:  u*|v|*cot(pi|v|) = -|v|*u*cot(pi u)
        u = 1.0 - a
        t = (math.pi * u) ** 2
        return -a * (1.0 - t / 3.0 - t * t / 45.0) / math.pi
    if a > 0.5:
        u = 1.0 - a  # cot(pi v) = -cot(pi u), evaluated away from the zero of sin
        cot = -math.cos(math.pi * u) / math.sin(math.pi * u)
    else:
        cot = math.cos(math.pi * a) / math.sin(math.pi * a)
    return (1.0 - a) * a * cot


def Q_eval(v: float) -> float:
    """|v|/pi + (1-|v|) v cot(pi v) on [-1,1]; 0 outside (even function)."""
    a = abs(v)
    if a >= 1.0:
        return 0.0
    if a == 0.0:
        return 1.0 / math.pi
    return a / math.pi + _one_minus_absv_vcot(a)


def lambda_constant(tol: float = 5e-8) -> float:
    """sup over xi in [0,1] of sqrt(Q(xi)^2 + xi^2 (1-xi)^2)."""
    assert tol > 0

    def f(xi: float) -> float:
        return math.hypot(Q_eval(xi), xi * (1.0 - xi))

    grid = np.linspace(0.0, 1.0, 4001)
    vals = np.array([f(x) for x in grid])
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(
        lambda t: -f(t), bounds=(lo, hi), method="bounded", options={"xatol": tol / 10}
    )
    return max(float(-res.fun), float(vals[i]))


def fourier_W_check(x: float, cfg: KernelConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Evaluate W(x) through its Fourier representation.

    Integrates (Q(v)/v) sin(2 pi x v) over [-1,1] (the integrand is even
    in v); returns (value, achieved error estimate).
    """

    def integrand(v: float) -> float:
        qv_over_v = 1.0 / math.pi + _one_minus_absv_vcot(v) / v
        return qv_over_v * math.sin(2.0 * math.pi * x * v)

    # Q(v)/v -> 1/(pi v) as v -> 0, so the product tends to 2x; split off
    # a tiny interval where the integrand is replaced by that limit.
    val, err = integrate.quad(integrand, 1e-8, 1.0, limit=200)
    val += 2.0 * x * 1e-8  # limit-value contribution of [0, 1e-8]
    return 2.0 * val, 2.0 * err + 4.0 * abs(x) * 1e-8


# ---------------------------------------------------------------------------
# the non-uniqueness family around S_ell


@dataclass(frozen=True)
class FamilyReport:
    ell: int
    eta: float
    majorant_ok: bool
    min_gap: float
    extra_integrals: tuple[tuple[float, float], ...]  # (R, integral over [-R,R])


def _family_extra(ell: int, eta: float, x: float, cfg: KernelConfig) -> float:
    if abs(x) < 1e-9 or abs(x - ell) < 1e-9:
        return 0.0  # removable zeros of the extra term for integer ell
    return eta * float(_sinpi_over_pi_sq(x)) * ell / (x * (ell - x))


def extremal_family_check(
    ell: int,
    eta: float,
    grid: Sequence[float],
    radii: Sequence[float] = (10.5, 20.5, 40.5),
    cfg: KernelConfig = DEFAULT_CONFIG,
) -> FamilyReport:
    """Check that S_ell + eta * (sin pi x/pi)^2 ell/(x(ell-x)) majorizes chi_[0,ell]."""
    assert ell == int(ell) and ell >= 1
    gaps = []
    for x in grid:
        fx = S_eval(ell, x, cfg) + _family_extra(ell, eta, x, cfg)
        gaps.append(fx - chi_box(x, ell))
    min_gap = min(gaps)

    def extra_integrand(x: float) -> float:
        return _family_extra(ell, 1.0, x, cfg) if eta == 0 else _family_extra(ell, eta, x, cfg) / eta

    integrals = []
    for R in radii:
        val, _ = integrate.quad(extra_integrand, -R, R, limit=400)
        integrals.append((float(R), float(val)))
    return FamilyReport(int(ell), eta, min_gap >= -1e-10, float(min_gap), tuple(integrals))
