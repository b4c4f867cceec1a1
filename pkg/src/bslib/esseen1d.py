"""One-variable smoothing bounds for distribution comparison.

The a priori inequality  sup|F - G| <= c1 * pv-int |phi - psi|/|zeta| +
c2 * m / Omega  with admissible constants (c1, c2) = (1/4, pi), plus the
supporting machinery: principal-value integration, Gaussian
mollification, CDF distance measurement, and a convergence harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .kernels import Q_eval

__all__ = [
    "Distribution1D",
    "ComparisonTarget",
    "normal_law",
    "standardized_binomial",
    "irwin_hall_standardized",
    "point_mass",
    "pv_integral",
    "esseen_bound_1d",
    "EsseenReport",
    "gaussian_mollify",
    "sup_cdf_distance",
    "convergence_harness_1d",
    "representation_residual",
    "normal_cdf",
    "C1_DEFAULT",
    "C2_DEFAULT",
]

C1_DEFAULT = 0.25
C2_DEFAULT = math.pi


def normal_cdf(x: float, mu: float = 0.0, sigma: float = 1.0) -> float:
    return 0.5 * (1.0 + math.erf((x - mu) / (sigma * math.sqrt(2.0))))


@dataclass(frozen=True)
class Distribution1D:
    """A one-dimensional probability law for smoothing-bound work."""

    cdf: Callable[[float], float]
    cf: Callable[[float], complex]
    density_bound: float | None
    moment: tuple[float, float]  # (alpha, integral of |x|^alpha)
    sampler: Callable | None = None
    atoms: tuple[float, ...] = ()


@dataclass(frozen=True)
class ComparisonTarget:
    """A comparison measure: G with G(-inf)=0, G(inf)=1, |G'| <= m."""

    cdf: Callable[[float], float]
    cf: Callable[[float], complex]
    density_bound: float
    moment: tuple[float, float]


def normal_law(mu: float = 0.0, sigma: float = 1.0) -> ComparisonTarget:
    m = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    absmom = sigma * math.sqrt(2.0 / math.pi) if mu == 0 else abs(mu) + sigma
    second = mu * mu + sigma * sigma

    def cf(t: float) -> complex:
        return complex(math.cos(mu * t), math.sin(mu * t)) * math.exp(-0.5 * (sigma * t) ** 2)

    return ComparisonTarget(lambda x: normal_cdf(x, mu, sigma), cf, m, (2.0, second))


def standardized_binomial(n: int, p: float = 0.5) -> Distribution1D:
    """(S - n/2)/(sqrt(n)/2) for S ~ Binomial(n, 1/2)."""
    assert p == 0.5, "only the symmetric case is wired up"
    logp = n * math.log(0.5)
    log_pmf = np.array(
        [gammaln(n + 1) - gammaln(j + 1) - gammaln(n - j + 1) + logp for j in range(n + 1)]
    )
    cum = np.cumsum(np.exp(log_pmf))
    xs = (2.0 * np.arange(n + 1) - n) / math.sqrt(n)

    def cdf(t: float) -> float:
        j = np.searchsorted(xs, t, side="right") - 1
        return float(cum[j]) if j >= 0 else 0.0

    def cf(t: float) -> complex:
        return complex(math.cos(t / math.sqrt(n)) ** n)

    def sampler(rng, size):
        s = rng.binomial(n, 0.5, size=size)
        return (2.0 * s - n) / math.sqrt(n)

    return Distribution1D(cdf, cf, None, (2.0, 1.0), sampler, tuple(xs))


def irwin_hall_standardized(n: int) -> Distribution1D:
    """Standardized sum of n independent uniforms on [-1/2, 1/2]."""
    s = math.sqrt(n / 12.0)
    lognf = math.lgamma(n + 1)

    def unit_cdf(x: float) -> float:  # sum of n uniforms on [0,1]
        if x <= 0:
            return 0.0
        if x >= n:
            return 1.0
        terms = [
            (-1.0) ** j * math.exp(math.log(math.comb(n, j)) + n * math.log(x - j) - lognf)
            for j in range(int(math.floor(x)) + 1)
            if x - j > 0
        ]
        return min(max(math.fsum(terms), 0.0), 1.0)

    def cdf(t: float) -> float:
        return unit_cdf(n / 2.0 + t * s)

    def cf(t: float) -> complex:
        u = t / (2.0 * s)
        return complex(float(np.sinc(u / math.pi)) ** n)

    def sampler(rng, size):
        return rng.uniform(-0.5, 0.5, size=(n,) + tuple(np.atleast_1d(size))).sum(axis=0) / s

    return Distribution1D(cdf, cf, None, (2.0, 1.0), sampler)


def point_mass(x0: float = 0.0) -> Distribution1D:
    return Distribution1D(
        lambda t: 1.0 if t >= x0 else 0.0,
        lambda t: complex(math.cos(x0 * t), math.sin(x0 * t)),
        None,
        (2.0, x0 * x0),
        lambda rng, size: np.full(size, x0),
        (x0,),
    )


# ---------------------------------------------------------------------------


def pv_integral(h: Callable[[float], complex], A: float, tol: float = 1e-9) -> tuple[complex, float]:
    """Principal value of int_{-A}^{A} h, paired-node with eps refinement.

    Returns (value, achieved-error estimate).  Raises if the symmetric
    partial integrals fail to Cauchy-converge.
    """
    assert A > 0

    def paired_re(v: float) -> float:
        return (h(v) + h(-v)).real

    def paired_im(v: float) -> float:
        return (h(v) + h(-v)).imag

    prev = None
    for j in range(6, 40):
        eps = A * 2.0 ** (-j)
        re, re_err = integrate.quad(paired_re, eps, A, limit=400)
        im, im_err = integrate.quad(paired_im, eps, A, limit=400)
        cur = complex(re, im)
        if prev is not None and abs(cur - prev) < tol:
            return cur, abs(cur - prev) + re_err + im_err
        prev = cur
    raise ArithmeticError("principal-value refinement did not converge")


@dataclass(frozen=True)
class EsseenReport:
    total: float
    integral_term: float
    tail_term: float
    exclusion_bound: float
    omega: float
    constants: tuple[float, float]


def esseen_bound_1d(
    F: Distribution1D,
    G: ComparisonTarget,
    omega: float,
    constants: tuple[float, float] = (C1_DEFAULT, C2_DEFAULT),
    tol: float = 1e-8,
) -> EsseenReport:
    """c1 * int_{|zeta|<=Omega} |phi - psi|/|zeta| + c2 * m / Omega.

    The small-|zeta| exclusion is certified by the Holder bound
    |phi(w) - psi(w)| <= 2 |w|^alpha~ * (moment sum), alpha~ = min(alpha, 1).
    """
    c1, c2 = constants
    assert omega > 0
    alpha = min(F.moment[0], G.moment[0])
    a_t = min(alpha, 1.0)
    msum = F.moment[1] + G.moment[1]
    eps = (tol / (40.0 * max(msum, 1e-300))) ** (1.0 / a_t)
    eps = min(eps, omega / 4.0)

    def integrand(z: float) -> float:
        d = F.cf(z) - G.cf(z)
        return abs(d) / z

    # piecewise panels keep quad honest on the kinked |phi - psi| profile;
    # the achieved quadrature error is added into the bound as slack.
    cuts = [eps] + [c for c in np.arange(1.0, omega, 4.0)] + [omega]
    val = quad_err = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        v, e = integrate.quad(integrand, a, b, limit=300)
        val += v
        quad_err += e
    integral = 2.0 * val  # Hermitian symmetry: |diff(-z)| = |diff(z)|
    exclusion = 2.0 * 2.0 * msum * eps**a_t  # excluded mass, both signs
    if quad_err > 1e-3 * max(1.0, val):
        raise ArithmeticError(f"quadrature error {quad_err:g} exceeds budget")
    tail = c2 * G.density_bound / omega
    total = c1 * (integral + exclusion + 2.0 * quad_err) + tail
    return EsseenReport(total, c1 * integral, tail, c1 * exclusion, omega, (c1, c2))


def gaussian_mollify(F: Distribution1D, eps: float) -> Distribution1D:
    """Convolve F with a centered Gaussian of standard deviation eps."""
    assert eps > 0
    nodes, weights = np.polynomial.hermite_e.hermegauss(64)
    w = weights / math.sqrt(2.0 * math.pi)

    def cdf(t: float) -> float:
        return float(np.sum(w * np.array([F.cdf(t - eps * u) for u in nodes])))

    def cf(z: float) -> complex:
        return F.cf(z) * math.exp(-0.5 * (eps * z) ** 2)

    m = 1.0 / (eps * math.sqrt(2.0 * math.pi))
    if F.density_bound is not None:
        m = min(m, F.density_bound)
    a, mom = F.moment
    return Distribution1D(cdf, cf, m, (a, mom + eps**a * 2.0), None, ())


def sup_cdf_distance(
    F: Callable[[float], float],
    G: Callable[[float], float],
    grid: Sequence[float],
    atoms: Sequence[float] = (),
) -> float:
    """max |F - G| over the grid, with one-sided limits at declared atoms."""
    best = 0.0
    for t in grid:
        best = max(best, abs(F(t) - G(t)))
    for a in atoms:
        best = max(best, abs(F(a) - G(a)), abs(F(a - 1e-9) - G(a)))
    return best


OMEGA_GRID = tuple(2.0**j for j in range(0, 15))


def best_esseen_bound(
    F: Distribution1D, G: ComparisonTarget, omegas: Sequence[float] = OMEGA_GRID
) -> EsseenReport:
    reports = [esseen_bound_1d(F, G, om) for om in omegas]
    return min(reports, key=lambda r: r.total)


@dataclass(frozen=True)
class HarnessRow:
    index: int
    sup_distance: float
    bound: float
    omega: float
    cf_increment: float


def convergence_harness_1d(
    family: Callable[[int], Distribution1D],
    G: ComparisonTarget,
    indices: Sequence[int],
    grid: Sequence[float] | None = None,
) -> list[HarnessRow]:
    if grid is None:
        grid = np.linspace(-8, 8, 2001)
    rows = []
    zs = np.linspace(-5, 5, 101)
    for n in indices:
        F = family(n)
        d = sup_cdf_distance(F.cdf, G.cdf, grid, F.atoms)
        rep = best_esseen_bound(F, G)
        inc = max(abs(F.cf(z) - G.cf(z)) for z in zs)
        rows.append(HarnessRow(n, d, rep.total, rep.omega, inc))
    return rows


# ---------------------------------------------------------------------------
# Fourier-side representations of the extremal pair


def representation_residual(which: str, x: float, tol: float = 1e-8) -> float:
    """|pv-int_{-1}^{1} [1/(pi i v) + R(v)] e^{2 pi i x v} dv  -  target(x)|

    with R = T/i + (1-|v|) for the majorant and T/i - (1-|v|) for the
    minorant, T(v) = (Q(v) - Q(0))/v.
    """
    from .kernels import B_eval, b_eval

    q0 = Q_eval(0.0)
    sign = {"B": 1.0, "b": -1.0}[which]

    def h(v: float) -> complex:
        T = (Q_eval(v) - q0) / v
        R = T / 1j + sign * (1.0 - abs(v))
        return (1.0 / (math.pi * 1j * v) + R) * np.exp(2j * math.pi * x * v)

    val, _ = pv_integral(h, 1.0, tol)
    target = B_eval(x) if which == "B" else b_eval(x)
    return abs(val - target)
