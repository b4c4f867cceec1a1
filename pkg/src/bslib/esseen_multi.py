"""k-variable smoothing machinery.

Ring expansion of the majorant/minorant product trick, the commuting
difference-operator algebra (D, E, P, Delta), integral factorizations
and derivative bounds, and four bound variants for |F - G| over R^k:
the partition-sum bound, two truncated t-free bounds (pointwise and
box-measure), and the slab-norm bound.  Desk-scale targets: k <= 3 for
the first three variants, k <= 2 for the slab variant.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np
import sympy as sp

from .esseen1d import Distribution1D, normal_cdf

__all__ = [
    "Monomial",
    "PartitionP",
    "KDimLaw",
    "SignedMeasureK",
    "BoundConstants",
    "selberg_ring_expansion",
    "apply_operator",
    "operator_terms",
    "factorization_residual",
    "derivative_bound_check",
    "esseen_bound_k",
    "esseen_bound_truncated",
    "slab_norm",
    "esseen_bound_slab",
    "convergence_harness_k",
    "partitions",
    "product_law",
    "product_normal_target",
    "box_probability",
    "KBoundReport",
]


# ---------------------------------------------------------------------------
# ring expansion


Monomial = tuple[str, ...]  # per-index symbol in {"chi", "delta", "eps"}


def selberg_ring_expansion(k: int) -> tuple[sp.Expr, Counter, Counter]:
    """Expand (1-k) g_1..g_k + sum_j f_j prod_{i != j} g_i symbolically.

    With f_j = chi_j - delta_j and g_j = chi_j + eps_j the expansion
    equals chi_1..chi_k - S; returns (lhs expression, S, S_tilde) where
    S and S_tilde are Counters over per-index symbol tuples and
    S_tilde collects g_1..g_k - chi_1..chi_k.
    """
    assert 2 <= k <= 6
    chi = sp.symbols(f"chi1:{k + 1}")
    dlt = sp.symbols(f"delta1:{k + 1}")
    eps = sp.symbols(f"eps1:{k + 1}")
    f = [chi[j] - dlt[j] for j in range(k)]
    g = [chi[j] + eps[j] for j in range(k)]
    prod_g = sp.prod(g)
    lhs = (1 - k) * prod_g + sum(
        f[j] * sp.prod([g[i] for i in range(k) if i != j]) for j in range(k)
    )
    chi_prod = sp.prod(chi)

    def monomials(expr: sp.Expr) -> Counter:
        out: Counter = Counter()
        for mono, coeff in sp.expand(expr).as_coefficients_dict().items():
            tags = []
            for j in range(k):
                if mono.has(chi[j]):
                    tags.append("chi")
                elif mono.has(dlt[j]):
                    tags.append("delta")
                else:
                    assert mono.has(eps[j])
                    tags.append("eps")
            out[tuple(tags)] += int(coeff)
        return out

    S = monomials(chi_prod - sp.expand(lhs))
    S_tilde = monomials(sp.expand(prod_g) - chi_prod)
    assert all(c > 0 for c in S.values())
    return lhs, S, S_tilde


# ---------------------------------------------------------------------------
# operator algebra

# a composite operator is a linear combination of coordinate transforms;
# each transform acts per coordinate as keep (+1), negate (-1) or zero (0).

_Term = tuple[float, tuple[int, ...]]


def operator_terms(word: Sequence[tuple[str, int]], k: int) -> dict[tuple[int, ...], float]:
    """Reduce a word over {D_j, E_j, P_j, Delta_j} to transform/coefficient form."""
    terms: dict[tuple[int, ...], float] = {tuple([1] * k): 1.0}
    for op, j in word:
        new: dict[tuple[int, ...], float] = {}

        def add(t, c):
            if c != 0.0:
                new[t] = new.get(t, 0.0) + c

        for t, c in terms.items():
            tj = t[j]
            t_neg = t[:j] + (-tj,) + t[j + 1 :]
            t_zero = t[:j] + (0,) + t[j + 1 :]
            if op == "D":
                add(t, 0.5 * c)
                add(t_neg, -0.5 * c)
            elif op == "E":
                add(t, 0.5 * c)
                add(t_neg, 0.5 * c)
            elif op == "P":
                add(t_zero, c)
            elif op == "Delta":
                add(t, c)
                add(t_zero, -c)
            else:
                raise ValueError(f"unknown operator {op!r}")
        terms = {t: c for t, c in new.items() if c != 0.0}
    return terms


def apply_operator(word: Sequence[tuple[str, int]], f: Callable, v: Sequence[float]) -> complex:
    """Evaluate the composite operator word applied to f at the point v."""
    v = np.asarray(v, dtype=float)
    k = v.size
    out = 0.0 + 0.0j
    for t, c in operator_terms(word, k).items():
        out += c * complex(f(v * np.asarray(t, dtype=float)))
    return out


def _d_set_apply(f_vec: Callable, points: np.ndarray, C: Sequence[int]) -> np.ndarray:
    """D_C f on an (N, k) array of points, via the 2^{|C|} signed average."""
    C = list(C)
    if not C:
        return np.asarray(f_vec(points), dtype=complex)
    out = np.zeros(points.shape[0], dtype=complex)
    for signs in itertools.product((1.0, -1.0), repeat=len(C)):
        pts = points.copy()
        parity = 1.0
        for s, j in zip(signs, C):
            pts[:, j] *= s
            parity *= s
        out += parity * np.asarray(f_vec(pts), dtype=complex)
    return out / 2.0 ** len(C)


# ---------------------------------------------------------------------------
# factorizations and derivative bounds


def _gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def factorization_residual(
    f: Callable,
    deriv: Callable,
    m: int,
    which: Literal["mixed", "delta", "e_delta"],
    v: Sequence[float],
    nodes: int = 24,
) -> float:
    """|operator form - factorized integral form| at the point v.

    mixed:   (D_1..D_m) f = (v_1..v_m / 2^m) int_{[-1,1]^m} D^[m] f(v*u) du
    delta:   (Delta_1..Delta_m) f = (v_1..v_m) int_{[0,1]^m} D^[m] f(v*u) du
    e_delta: (E_1 Delta_1 .. E_m Delta_m) f
             = (v_1^2..v_m^2 / 2^m) int_{[-1,1]^m} prod(1-|u_j|) D^[2m] f(v*u) du

    deriv must supply the mixed partial of total order m (or 2m for
    e_delta) as a function of the point.
    """
    v = np.asarray(v, dtype=float)
    k = v.size
    assert 1 <= m <= k
    if which == "mixed":
        word = [("D", j) for j in range(m)]
        lo, weight_fn, front = -1.0, None, float(np.prod(v[:m])) / 2.0**m
    elif which == "delta":
        word = [("Delta", j) for j in range(m)]
        lo, weight_fn, front = 0.0, None, float(np.prod(v[:m]))
    elif which == "e_delta":
        word = [("E", j) for j in range(m)] + [("Delta", j) for j in range(m)]
        lo, weight_fn, front = -1.0, (lambda u: np.prod(1.0 - np.abs(u), axis=-1)), float(
            np.prod(v[:m] ** 2)
        ) / 2.0**m
    else:
        raise ValueError(which)

    lhs = apply_operator(word, f, v)

    if lo < 0.0:
        # split at 0 so the (1 - |u|) weight stays smooth per panel
        xm, wm = _gauss_legendre(lo, 0.0, nodes)
        xp, wp = _gauss_legendre(0.0, 1.0, nodes)
        x, w = np.concatenate([xm, xp]), np.concatenate([wm, wp])
    else:
        x, w = _gauss_legendre(lo, 1.0, nodes)
    grids = np.meshgrid(*([x] * m), indexing="ij")
    ws = np.meshgrid(*([w] * m), indexing="ij")
    u = np.stack([g.ravel() for g in grids], axis=-1)  # (N, m)
    wt = np.prod(np.stack([g.ravel() for g in ws], axis=-1), axis=-1)
    pts = np.tile(v, (u.shape[0], 1))
    pts[:, :m] = v[:m] * u
    vals = np.asarray([deriv(p) for p in pts], dtype=complex)
    if weight_fn is not None:
        wt = wt * weight_fn(u)
    rhs = front * np.sum(wt * vals)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class BoundCheck:
    holds: bool
    slack: float
    inconclusive: bool
    lhs: float
    rhs: float


_STENCILS = {
    1: ((-1.0, -0.5), (1.0, 0.5)),
    2: ((-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)),
}


def _mixed_partial(
    f: Callable, point: np.ndarray, coords: Sequence[int], orders: Sequence[int]
) -> complex:
    """Central-difference mixed partial with per-coordinate orders (1 or 2)."""
    # stencil weights already carry the 1/2 of the first-order central
    # difference, so each coordinate contributes h (order 1) or h^2
    h = 1e-3
    acc = 0.0 + 0.0j
    scale = 1.0
    for o in orders:
        scale *= h if o == 1 else h * h
    for combo in itertools.product(*[_STENCILS[o] for o in orders]):
        p = point.copy()
        coeff = 1.0
        for (off, c), j in zip(combo, coords):
            p[j] += off * h
            coeff *= c
        acc += coeff * complex(f(p))
    return acc / scale


def _sup_estimate(
    f: Callable,
    sigma: Sequence[int],
    orders: Sequence[int],
    v: np.ndarray,
    eps_patterns: Sequence[tuple[tuple[float, ...], Sequence[int]]],
    safety: float = 1.5,
) -> float:
    """Estimate an M_sigma / N_sigma style sup on a refinement grid.

    eps_patterns: list of (values, coords) pairs; each entry fixes the
    non-sigma coordinates to eps * v before taking the u-grid sup over
    the sigma coordinates.
    """
    best_prev = None
    best = 0.0
    for npts in (5, 9, 17):
        u = np.linspace(-1.0, 1.0, npts)
        best = 0.0
        for values, coords in eps_patterns:
            base = v.astype(float).copy()
            for ee, j in zip(values, coords):
                base[j] = ee * v[j]
            for ugrid in itertools.product(*[u for _ in sigma]):
                p = base.copy()
                for uu, j in zip(ugrid, sigma):
                    p[j] = uu * v[j]
                best = max(best, abs(_mixed_partial(f, p, sigma, orders)))
        if best_prev is not None and best <= best_prev * 1.1:
            break
        best_prev = best
    return safety * best


def derivative_bound_check(f: Callable, spec: dict, v: Sequence[float]) -> BoundCheck:
    """Check one of the mixed-difference derivative bounds at a point.

    spec keys: which in {"4.24", "4.26", "4.27", "4.28"}, h, ell, and for
    the Delta-variants n, m, delta (L = ell + delta).  f is a scalar
    function of a k-vector; sups are estimated on refinement grids with
    a 1.5 Lipschitz safety factor (reported inconclusive when the safety
    margin exceeds the slack).
    """
    v = np.asarray(v, dtype=float)
    which = spec["which"]
    h = spec["h"]
    m = spec["m"]

    if which == "4.24":
        ell = spec["ell"]
        assert 1 <= h <= ell <= m
        word = [("D", j) for j in range(m)]
        lhs = abs(apply_operator(word, f, v))
        prod_safe, prod_raw = 1.0, 1.0
        for s in itertools.combinations(range(ell), h):
            others = [j for j in range(m) if j not in s]
            patterns = [
                (pat, others) for pat in itertools.product((1.0, -1.0), repeat=len(others))
            ]
            est = _sup_estimate(f, s, [1] * h, v, patterns)
            prod_safe *= est
            prod_raw *= est / 1.5
        power = 1.0 / math.comb(ell, h)
        vfac = float(np.prod(np.abs(v[:ell]) ** (h / ell)))
        rhs = vfac * prod_safe**power
        rhs_raw = vfac * prod_raw**power
        return BoundCheck(lhs <= rhs, rhs - lhs, rhs_raw < lhs <= rhs, lhs, rhs)

    n = spec["n"]
    delta = spec["delta"]
    ell = spec["ell"]
    L = ell + delta
    assert ell <= n and n + delta <= m and 1 <= h <= L
    if which == "4.26":
        word = [("Delta", j) for j in range(n)] + [("D", j) for j in range(n, m)]
    else:  # 4.27 / 4.28: the product of E_j Delta_j over the first block
        word = [("E", j) for j in range(n)] + [("Delta", j) for j in range(n)]
        word += [("D", j) for j in range(n, m)]
    lhs = abs(apply_operator(word, f, v))

    # sigma lives in the first ell coordinates plus the trailing D-block slice
    allowed = list(range(ell)) + list(range(n, n + delta))
    prod_safe, prod_raw = 1.0, 1.0
    for s in itertools.combinations(allowed, h):
        # per-coordinate derivative order: squared only in the 4.28 variant
        # and only for first-block coordinates
        orders = [2 if (which == "4.28" and j < n) else 1 for j in s]
        others = [j for j in range(m) if j not in s]
        # epsilon = 0 is admitted only for first-block coordinates
        pools = [((1.0, -1.0, 0.0) if j < n else (1.0, -1.0)) for j in others]
        patterns = [(pat, others) for pat in itertools.product(*pools)]
        est = _sup_estimate(f, s, orders, v, patterns)
        prod_safe *= est
        prod_raw *= est / 1.5
    power = 1.0 / math.comb(L, h)
    if which == "4.28":
        base = float(np.prod(np.abs(v[:ell]) ** 2) * np.prod(np.abs(v[n : n + delta])))
    else:
        base = float(np.prod(np.abs(v[:ell])) * np.prod(np.abs(v[n : n + delta])))
    vfac = base ** (h / L)
    rhs = 2.0 ** (m - h) * vfac * prod_safe**power
    rhs_raw = 2.0 ** (m - h) * vfac * prod_raw**power
    return BoundCheck(lhs <= rhs, rhs - lhs, rhs_raw < lhs <= rhs, lhs, rhs)


# ---------------------------------------------------------------------------
# laws, targets, constants


@dataclass(frozen=True)
class KDimLaw:
    """k-dimensional probability law: joint cdf, vectorized cf, moment record."""

    k: int
    cdf: Callable[[np.ndarray], float]
    cf: Callable[[np.ndarray], np.ndarray]  # (N, k) -> (N,) complex
    moment: tuple[float, float]  # (alpha, integral of (max_j |x_j|)^alpha)


@dataclass(frozen=True)
class SignedMeasureK:
    k: int
    cdf: Callable[[np.ndarray], float]
    cf: Callable[[np.ndarray], np.ndarray]
    marginal_bounds: tuple[float, ...]
    moment: tuple[float, float]


def product_law(components: Sequence[Distribution1D]) -> KDimLaw:
    k = len(components)

    def cdf(y: np.ndarray) -> float:
        return float(np.prod([c.cdf(float(y[j])) for j, c in enumerate(components)]))

    def cf(pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        out = np.ones(pts.shape[0], dtype=complex)
        for j, c in enumerate(components):
            out *= np.array([c.cf(float(t)) for t in pts[:, j]])
        return out

    # E max|x_j|^2 <= sum E x_j^2 for alpha = 2 components
    mom = sum(c.moment[1] for c in components)
    return KDimLaw(k, cdf, cf, (2.0, mom))


def product_normal_target(k: int) -> SignedMeasureK:
    m = 1.0 / math.sqrt(2.0 * math.pi)

    def cdf(y: np.ndarray) -> float:
        return float(np.prod([normal_cdf(float(y[j])) for j in range(k)]))

    def cf(pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        return np.exp(-0.5 * np.sum(pts**2, axis=1)) + 0.0j

    return SignedMeasureK(k, cdf, cf, tuple([m] * k), (2.0, float(k)))


@dataclass(frozen=True)
class BoundConstants:
    """Pinned values for the 'explicitly computable' constants.

    Conservative defaults (valid for any values at least as large as the
    proof-path ones); echoed in every bound report.
    """

    c1: float
    c2: float
    c5: float
    c6: float
    c8: float
    c9: float
    c_hat1: float

    @staticmethod
    def for_k(k: int) -> "BoundConstants":
        c5 = 2.0**k
        return BoundConstants(
            c1=1.0,
            c2=math.pi,
            c5=c5,
            c6=math.pi,
            c8=2.0**k * c5,
            c9=2.0**k * math.pi,
            c_hat1=2.0**k,
        )

    def as_dict(self) -> dict:
        return {
            "c1": self.c1, "c2": self.c2, "c5": self.c5, "c6": self.c6,
            "c8": self.c8, "c9": self.c9, "c_hat1": self.c_hat1,
        }


@dataclass(frozen=True)
class KBoundReport:
    total: float
    integral_terms: dict
    tail_term: float
    extra_term: float
    constants: dict
    detail: dict


def partitions(k: int):
    """All 3^k partitions of {0..k-1} into (B, C, D) index tuples."""
    for tags in itertools.product("BCD", repeat=k):
        B = tuple(j for j in range(k) if tags[j] == "B")
        C = tuple(j for j in range(k) if tags[j] == "C")
        D = tuple(j for j in range(k) if tags[j] == "D")
        yield B, C, D


@dataclass(frozen=True)
class PartitionP:
    B_set: frozenset
    C_set: frozenset
    D_set: frozenset

    def __post_init__(self):
        assert not (self.B_set & self.C_set or self.B_set & self.D_set or self.C_set & self.D_set)


def _axis_nodes(omega: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric nodes/weights on [-omega, omega], dyadically refined at 0."""
    xs, ws = [], []
    edges = [omega * 2.0 ** (-i) for i in range(panels)] + [omega * 2.0 ** (-panels), 0.0]
    for a, b in zip(edges[1:], edges[:-1]):
        x, w = _gauss_legendre(a, b, order)
        xs.append(x)
        ws.append(w)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    return np.concatenate([-x, x]), np.concatenate([w, w])


def _tensor_integral(
    axes: Sequence[tuple[np.ndarray, np.ndarray]],
    integrand: Callable[[np.ndarray], np.ndarray],
    fixed: dict[int, float],
    k: int,
) -> float:
    """Integrate over the active axes with the remaining coordinates fixed."""
    active = [j for j in range(k) if j not in fixed]
    if not active:
        p = np.zeros((1, k))
        for j, val in fixed.items():
            p[0, j] = val
        return float(np.real(integrand(p)[0]))
    grids = np.meshgrid(*[axes[i][0] for i in range(len(active))], indexing="ij")
    wgrids = np.meshgrid(*[axes[i][1] for i in range(len(active))], indexing="ij")
    pts = np.zeros((grids[0].size, k))
    for idx, j in enumerate(active):
        pts[:, j] = grids[idx].ravel()
    for j, val in fixed.items():
        pts[:, j] = val
    wt = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return float(np.sum(wt * np.real(integrand(pts))))


def esseen_bound_k(
    F: KDimLaw,
    G: SignedMeasureK,
    omegas: Sequence[float],
    t: Sequence[float],
    constants: BoundConstants | None = None,
    panels: int | None = None,
    order: int | None = None,
) -> KBoundReport:
    """Partition-sum smoothing bound for |F(t) - G(t)|."""
    k = F.k
    assert k <= 3 and len(omegas) == k
    consts = constants or BoundConstants.for_k(k)
    panels = panels or (12 if k <= 2 else 7)
    order = order or (8 if k <= 2 else 5)
    t = np.asarray(t, dtype=float)

    def diff(pts: np.ndarray) -> np.ndarray:
        return F.cf(pts) - G.cf(pts)

    terms = {}
    total_int = 0.0
    for B, C, D in partitions(k):
        fixed = {j: 0.0 for j in B}
        axes = [_axis_nodes(omegas[j], panels, order) for j in range(k) if j not in fixed]

        def integrand(pts: np.ndarray) -> np.ndarray:
            val = np.abs(_d_set_apply(diff, pts, C))
            for j in C:
                val = val / np.abs(pts[:, j])
            for j in D:
                val = val * (1.0 / omegas[j] + np.abs(np.sin(t[j] * pts[:, j])) / np.abs(pts[:, j]))
            return val

        I = _tensor_integral(axes, integrand, fixed, k)
        terms[f"B={B} C={C} D={D}"] = I
        total_int += I

    tail = consts.c2 * sum(m / om for m, om in zip(G.marginal_bounds, omegas))
    total = consts.c1 * total_int + tail
    return KBoundReport(total, terms, tail, 0.0, consts.as_dict(), {"t": tuple(t), "omegas": tuple(omegas)})


def _v_bullet_factor(vals: np.ndarray, delta: float) -> np.ndarray:
    # 1/|v_bullet| = min(Delta, 1/|v|)
    return np.minimum(delta, 1.0 / np.abs(vals))


def esseen_bound_truncated(
    F: KDimLaw,
    G: SignedMeasureK,
    omegas: Sequence[float],
    delta: float,
    mode: Literal["A", "B"] = "A",
    alpha: float | None = None,
    box_extent: float | None = None,
    constants: BoundConstants | None = None,
    panels: int | None = None,
    order: int | None = None,
    use_triangle_replacement: bool = False,
) -> KBoundReport:
    """t-free truncated bound (pointwise mode A; box-measure mode B).

    Mode A requires delta > 1; mode B takes delta = 1 + D where D bounds
    the box edge lengths (box_extent).  With use_triangle_replacement the
    factor 1/|v_bullet| is replaced by the larger delta/|v_triangle|.
    """
    k = F.k
    assert k <= 3 and min(omegas) > 1.0
    consts = constants or BoundConstants.for_k(k)
    panels = panels or (12 if k <= 2 else 7)
    order = order or (8 if k <= 2 else 5)
    if mode == "B":
        assert box_extent is not None and box_extent > 0
        delta = 1.0 + box_extent
    assert delta > 1.0
    a = alpha if alpha is not None else min(F.moment[0], G.moment[0])

    def integrand(pts: np.ndarray) -> np.ndarray:
        val = np.abs(F.cf(pts) - G.cf(pts))
        for j in range(k):
            if use_triangle_replacement:
                # delta / |v_triangle| >= 1/|v_bullet| pointwise
                val = val * delta / np.maximum(np.abs(pts[:, j]), 1.0)
            else:
                val = val * _v_bullet_factor(pts[:, j], delta)
        return val

    axes = [_axis_nodes(omegas[j], panels, order) for j in range(k)]
    I = _tensor_integral(axes, integrand, {}, k)
    tail = (consts.c6 if mode == "A" else consts.c9) * sum(
        m / om for m, om in zip(G.marginal_bounds, omegas)
    )
    cint = consts.c5 if mode == "A" else consts.c8
    extra = 0.0
    if mode == "A":
        extra = (k + 1.0) * delta ** (-a) * (F.moment[1] + G.moment[1])
    total = cint * I + tail + extra
    return KBoundReport(
        total,
        {"truncated_integral": I},
        tail,
        extra,
        consts.as_dict(),
        {"mode": mode, "delta": delta, "alpha": a, "omegas": tuple(omegas)},
    )


def box_probability(cdf: Callable[[np.ndarray], float], a: np.ndarray, b: np.ndarray) -> float:
    """Measure of the half-open box (a, b] by inclusion-exclusion of the cdf."""
    k = len(a)
    total = 0.0
    for picks in itertools.product((0, 1), repeat=k):
        corner = np.where(np.asarray(picks) == 1, b, a)
        total += (-1.0) ** (k - sum(picks)) * cdf(corner)
    return total


# ---------------------------------------------------------------------------
# slab norms and the slab-variant bound


def slab_norm(
    f: Callable[[np.ndarray], np.ndarray],
    C: Sequence[int],
    v: Sequence[float],
    tau: float = 1.0,
    flavor: Literal["bar", "double_bar"] = "double_bar",
    grid: int = 7,
    safety: float = 1.5,
) -> float:
    """Slab-wise sup quantity |f|_C (bar) or ||f||_C (double_bar) at v.

    Coordinates of C with |v_j| >= tau contribute sign flips; those with
    |v_j| < tau are 'small': the value becomes a sup of first partials
    |S_j f| over the short-circuit set (|xi_j| <= |v_j| for bar,
    |xi_j| <= tau for double_bar).  Empty C returns |f(v)|.
    """
    v = np.asarray(v, dtype=float)
    k = v.size
    C = list(C)
    if not C:
        return float(abs(np.asarray(f(v[None, :]))[0]))
    Cb = [j for j in C if abs(v[j]) >= tau]
    Cs = [j for j in C if abs(v[j]) < tau]

    sign_choices = list(itertools.product((1.0, -1.0), repeat=len(Cb)))
    prev = None
    for npts in (grid, 2 * grid + 1):
        cand = []
        for signs in sign_choices:
            base = v.copy()
            for s, j in zip(signs, Cb):
                base[j] = s * v[j]
            if not Cs:
                cand.append(base)
            else:
                ranges = [
                    np.linspace(-(abs(v[j]) if flavor == "bar" else tau) * (1 - 1e-9),
                                (abs(v[j]) if flavor == "bar" else tau) * (1 - 1e-9), npts)
                    for j in Cs
                ]
                for combo in itertools.product(*ranges):
                    p = base.copy()
                    for x, j in zip(combo, Cs):
                        p[j] = x
                    cand.append(p)
        pts = np.asarray(cand)
        if not Cs:
            best = float(np.max(np.abs(np.asarray(f(pts)))))
            return best  # exact finite max, no safety needed
        # sup of first partials over the candidate set
        h = 1e-4
        best = 0.0
        for j in Cs:
            up, dn = pts.copy(), pts.copy()
            up[:, j] += h
            dn[:, j] -= h
            d = np.abs(np.asarray(f(up)) - np.asarray(f(dn))) / (2 * h)
            best = max(best, float(np.max(d)))
        if prev is not None and best <= prev * 1.1:
            break
        prev = best
    return safety * best


def esseen_bound_slab(
    F: KDimLaw,
    G: SignedMeasureK,
    omegas: Sequence[float],
    constants: BoundConstants | None = None,
    tau: float = 1.0,
    panels: int = 6,
    order: int = 4,
) -> KBoundReport:
    """Slab-norm smoothing bound (t-free), k <= 2."""
    k = F.k
    assert k <= 2 and min(omegas) > 1.0
    consts = constants or BoundConstants.for_k(k)

    def diff(pts: np.ndarray) -> np.ndarray:
        return F.cf(pts) - G.cf(pts)

    terms = {}
    total_int = 0.0
    for B, C, D in partitions(k):
        fixed = {j: 0.0 for j in B}
        axes = [_axis_nodes(omegas[j], panels, order) for j in range(k) if j not in fixed]

        def integrand(pts: np.ndarray) -> np.ndarray:
            out = np.empty(pts.shape[0])
            for i, p in enumerate(pts):
                nrm = slab_norm(diff, C, p, tau, "double_bar", grid=5)
                val = nrm
                for j in C:
                    val = val / max(abs(p[j]), 1.0)  # |v_triangle|
                out[i] = val
            for j in D:
                out = out / omegas[j]
            return out

        I = _tensor_integral(axes, integrand, fixed, k)
        terms[f"B={B} C={C} D={D}"] = I
        total_int += I

    tail = consts.c2 * sum(m / om for m, om in zip(G.marginal_bounds, omegas))
    total = consts.c_hat1 * total_int + tail
    return KBoundReport(total, terms, tail, 0.0, consts.as_dict(), {"tau": tau, "omegas": tuple(omegas)})


# ---------------------------------------------------------------------------
# convergence harness


@dataclass(frozen=True)
class KHarnessRow:
    index: int
    sup_distance: float
    bound: float
    omegas: tuple[float, ...]
    moment_diag: float


def convergence_harness_k(
    family: Callable[[int], KDimLaw],
    G: SignedMeasureK,
    indices: Sequence[int],
    variant: Literal["plain", "A", "B", "C"] = "A",
    t_grid: np.ndarray | None = None,
) -> list[KHarnessRow]:
    k = G.k
    if t_grid is None:
        side = np.linspace(-3, 3, 9)
        t_grid = np.array(list(itertools.product(*[side] * k)))
    omega_candidates = [tuple([2.0**j] * k) for j in range(1, 6)]
    rows = []
    h = 1e-3
    for n in indices:
        F = family(n)
        d = max(abs(F.cdf(t) - G.cdf(t)) for t in t_grid)
        best = math.inf
        best_om = omega_candidates[0]
        for oms in omega_candidates:
            if variant == "plain":
                rep = esseen_bound_k(F, G, oms, [0.0] * k, panels=8, order=6)
            elif variant == "A":
                rep = esseen_bound_truncated(F, G, oms, delta=8.0, mode="A", panels=8, order=6)
            elif variant == "B":
                rep = esseen_bound_truncated(F, G, oms, delta=2.0, mode="B", box_extent=4.0,
                                             panels=8, order=6)
            else:
                rep = esseen_bound_slab(F, G, oms)
            if rep.total < best:
                best, best_om = rep.total, oms

        # post-corollary diagnostic: mixed first partials of the cf at 0
        def mixed(cf):
            pts = np.array(list(itertools.product(*[(-h, h)] * k)))
            signs = np.prod(np.sign(pts), axis=1)
            return complex(np.sum(signs * cf(pts)) / (2 * h) ** k)

        diag = abs(mixed(F.cf) - mixed(G.cf))
        rows.append(KHarnessRow(n, d, best, best_om, diag))
    return rows
