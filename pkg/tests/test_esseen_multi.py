"""k-variable smoothing machinery: ring expansion, operator algebra, bounds."""

import itertools
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from bslib import esseen1d as e1
from bslib import esseen_multi as em


# ---------------------------------------------------------------------------
# ring expansion


class TestRingExpansion:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_identity_under_random_rational_substitution(self, k):
        lhs, S, _ = em.selberg_ring_expansion(k)
        chi = sp.symbols(f"chi1:{k + 1}")
        dlt = sp.symbols(f"delta1:{k + 1}")
        eps = sp.symbols(f"eps1:{k + 1}")
        sym = {"chi": chi, "delta": dlt, "eps": eps}
        rng = np.random.default_rng(42)
        for _ in range(100):
            subs = {}
            for s in (*chi, *dlt, *eps):
                subs[s] = sp.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
            rhs = sp.prod(chi) - sum(
                c * sp.prod(sym[tag][j] for j, tag in enumerate(mono)) for mono, c in S.items()
            )
            # exact rational arithmetic: the residual must be identically zero
            assert sp.simplify(lhs.subs(subs) - rhs.subs(subs)) == 0

    def test_k2_error_monomials(self):
        _, S, _ = em.selberg_ring_expansion(2)
        expect = {
            ("delta", "chi"): 1,
            ("chi", "delta"): 1,
            ("delta", "eps"): 1,
            ("eps", "delta"): 1,
            ("eps", "eps"): 1,
        }
        assert dict(S) == expect

    def test_k3_multiplicities(self):
        _, S, _ = em.selberg_ring_expansion(3)
        assert S[("eps", "eps", "eps")] == 2
        assert sum(S.values()) == 17
        # every error monomial touches a delta or an eps in each... at least one index
        assert all(any(tag != "chi" for tag in mono) for mono in S)

    def test_error_terms_positive(self):
        for k in (2, 3, 4):
            _, S, S_tilde = em.selberg_ring_expansion(k)
            assert all(c > 0 for c in S.values())
            assert all(c > 0 for c in S_tilde.values())


# ---------------------------------------------------------------------------
# operator algebra


def _terms_equal(a, b, tol=0.0):
    keys = set(a) | set(b)
    return all(abs(a.get(t, 0.0) - b.get(t, 0.0)) <= tol for t in keys)


class TestOperatorAlgebra:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_annihilations(self, k):
        for j in range(k):
            assert em.operator_terms([("D", j), ("E", j)], k) == {}
            assert em.operator_terms([("D", j), ("P", j)], k) == {}
            assert em.operator_terms([("P", j), ("Delta", j)], k) == {}

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_absorptions(self, k):
        for j in range(k):
            d = em.operator_terms([("D", j)], k)
            assert _terms_equal(em.operator_terms([("D", j), ("Delta", j)], k), d)
            p = em.operator_terms([("P", j)], k)
            assert _terms_equal(em.operator_terms([("E", j), ("P", j)], k), p)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_resolution_of_identity(self, k):
        # I = P_j + D_j + E_j Delta_j, exactly
        for j in range(k):
            combined = {}
            for word in ([("P", j)], [("D", j)], [("E", j), ("Delta", j)]):
                for t, c in em.operator_terms(word, k).items():
                    combined[t] = combined.get(t, 0.0) + c
            combined = {t: c for t, c in combined.items() if c != 0.0}
            assert combined == {tuple([1] * k): 1.0}

    def test_idempotents_and_commutation(self):
        k = 2
        for j in range(k):
            e = em.operator_terms([("E", j)], k)
            assert _terms_equal(em.operator_terms([("E", j), ("E", j)], k), e)
            p = em.operator_terms([("P", j)], k)
            assert _terms_equal(em.operator_terms([("P", j), ("P", j)], k), p)
        # operators on distinct coordinates commute
        ab = em.operator_terms([("D", 0), ("Delta", 1)], k)
        ba = em.operator_terms([("Delta", 1), ("D", 0)], k)
        assert _terms_equal(ab, ba)

    def test_hermitian_preservation(self):
        # Hermitian input (f(-v) = conj f(v)) stays Hermitian under any word
        def f(v):
            return np.exp(1j * (0.7 * v[0] - 1.3 * v[1])) * math.exp(-0.1 * float(np.sum(v**2)))

        words = [
            [("D", 0)],
            [("E", 1), ("Delta", 1)],
            [("D", 0), ("Delta", 1)],
            [("P", 0), ("D", 1)],
        ]
        rng = np.random.default_rng(3)
        for word in words:
            for _ in range(20):
                v = rng.uniform(-2, 2, 2)
                a = em.apply_operator(word, f, v)
                b = em.apply_operator(word, f, -v)
                assert abs(a - b.conjugate()) <= 1e-14


# ---------------------------------------------------------------------------
# factorizations and derivative bounds


class TestFactorizations:
    @pytest.mark.parametrize("which", ["mixed", "delta", "e_delta"])
    @pytest.mark.parametrize("m", [1, 2])
    def test_exponential_residuals(self, which, m):
        a = np.array([0.7, -1.3, 0.4])[:2]

        def f(p):
            return np.exp(1j * np.dot(a, p))

        order = 2 * m if which == "e_delta" else m
        coef = np.prod((1j * a[:m]) ** (2 if which == "e_delta" else 1))

        def deriv(p):
            return coef * f(p)

        res = em.factorization_residual(f, deriv, m, which, (0.8, 1.1))
        assert res <= 1e-10

    def test_product_cosine_residual(self):
        # real product-cosine profile, full mixed factorization
        a = np.array([1.2, 0.6])

        def f(p):
            return math.cos(a[0] * p[0]) * math.sin(a[1] * p[1])

        def deriv(p):
            return a[0] * a[1] * (-math.sin(a[0] * p[0])) * math.cos(a[1] * p[1])

        res = em.factorization_residual(f, deriv, 2, "mixed", (0.9, 1.4))
        assert res <= 1e-8

    def test_three_variable_mixed(self):
        a = np.array([0.5, -0.8, 1.1])

        def f(p):
            return np.exp(1j * np.dot(a, p))

        def deriv(p):
            return np.prod(1j * a) * f(p)

        res = em.factorization_residual(f, deriv, 3, "mixed", (0.7, 0.9, 0.5), nodes=12)
        assert res <= 1e-9


class TestDerivativeBounds:
    def _f(self, v):
        return math.sin(1.1 * v[0] + 0.2) * math.sin(0.9 * v[1] - 0.4) * math.cos(0.5 * v[2])

    def test_mixed_difference_bound(self):
        for h in (1, 2):
            chk = em.derivative_bound_check(
                self._f, {"which": "4.24", "h": h, "ell": 2, "m": 2},
                (0.8, 1.2, 0.5),
            )
            assert chk.holds
            assert not chk.inconclusive
            assert chk.slack >= 0.0

    @pytest.mark.parametrize("which", ["4.26", "4.27", "4.28"])
    def test_truncation_variants(self, which):
        chk = em.derivative_bound_check(
            self._f,
            {"which": which, "h": 1, "ell": 2, "m": 3, "n": 2, "delta": 1},
            (0.8, 1.2, 0.5),
        )
        assert chk.holds

    def test_invalid_spec_rejected(self):
        with pytest.raises(AssertionError):
            em.derivative_bound_check(
                self._f, {"which": "4.24", "h": 3, "ell": 2, "m": 2}, (0.5, 0.5, 0.5)
            )


# ---------------------------------------------------------------------------
# laws, partitions, bounds


def _k2_pair(n=25):
    F = em.product_law([e1.standardized_binomial(n), e1.standardized_binomial(n)])
    G = em.product_normal_target(2)
    return F, G


class TestLawsAndPartitions:
    def test_partition_count_and_disjointness(self):
        for k in (1, 2, 3):
            parts = list(em.partitions(k))
            assert len(parts) == 3**k
            for B, C, D in parts:
                assert set(B) | set(C) | set(D) == set(range(k))
                assert not (set(B) & set(C) or set(B) & set(D) or set(C) & set(D))

    def test_partition_record_validation(self):
        with pytest.raises(AssertionError):
            em.PartitionP(frozenset({0}), frozenset({0}), frozenset())

    def test_product_law_cf_and_cdf(self):
        F, G = _k2_pair()
        pts = np.array([[0.3, -0.7], [1.1, 0.2]])
        vals = F.cf(pts)
        comp = e1.standardized_binomial(25)
        for i, p in enumerate(pts):
            assert vals[i] == pytest.approx(comp.cf(p[0]) * comp.cf(p[1]), abs=1e-14)
        assert F.cdf(np.array([50.0, 50.0])) == pytest.approx(1.0, abs=1e-12)
        assert G.cdf(np.array([0.0, 0.0])) == pytest.approx(0.25, abs=1e-14)

    def test_box_probability(self):
        G = em.product_normal_target(2)
        a, b = np.array([-1.0, -0.5]), np.array([1.0, 0.5])
        p1 = e1.normal_cdf(1.0) - e1.normal_cdf(-1.0)
        p2 = e1.normal_cdf(0.5) - e1.normal_cdf(-0.5)
        assert em.box_probability(G.cdf, a, b) == pytest.approx(p1 * p2, abs=1e-12)

    def test_dirac_collapse_consistency(self):
        # fixing a coordinate at 0 in the tensor integral equals the
        # lower-dimensional integral of the zero-section
        axes = [em._axis_nodes(4.0, 8, 6)]

        def g(pts):
            return np.exp(-0.3 * np.sum(pts**2, axis=1))

        collapsed = em._tensor_integral(axes, g, {0: 0.0}, 2)
        direct = em._tensor_integral(axes, lambda q: np.exp(-0.3 * q[:, 0] ** 2), {}, 1)
        assert collapsed == pytest.approx(direct, rel=1e-10)


class TestConstants:
    def test_defaults_scale_with_k(self):
        for k in (1, 2, 3):
            c = em.BoundConstants.for_k(k)
            assert c.c1 == 1.0
            assert c.c2 == math.pi
            assert c.c5 == 2.0**k
            assert c.c8 == 4.0**k
            assert c.c_hat1 == 2.0**k
            d = c.as_dict()
            assert set(d) == {"c1", "c2", "c5", "c6", "c8", "c9", "c_hat1"}


class TestBounds:
    def test_partition_bound_dominates_pointwise_gap(self):
        F, G = _k2_pair()
        for t in ([0.0, 0.0], [0.5, -0.3], [1.2, 1.2], [-2.0, 0.7], [0.1, -1.8]):
            rep = em.esseen_bound_k(F, G, (8.0, 8.0), t)
            gap = abs(F.cdf(np.asarray(t)) - G.cdf(np.asarray(t)))
            assert rep.total >= gap
            assert rep.constants["c1"] == 1.0

    def test_truncated_bound_dominates_sup(self):
        F, G = _k2_pair()
        rep = em.esseen_bound_truncated(F, G, (8.0, 8.0), delta=8.0, mode="A")
        side = np.linspace(-3, 3, 13)
        sup = max(
            abs(F.cdf(np.array(t)) - G.cdf(np.array(t)))
            for t in itertools.product(side, side)
        )
        assert rep.total >= sup
        assert rep.extra_term > 0.0

    def test_box_measure_bound_dominates_boxes(self):
        F, G = _k2_pair()
        rep = em.esseen_bound_truncated(
            F, G, (8.0, 8.0), delta=2.0, mode="B", box_extent=4.0
        )
        rng = np.random.default_rng(9)
        for _ in range(10):
            a = rng.uniform(-3, 0, 2)
            b = a + rng.uniform(0.1, 4.0, 2)
            gap = abs(em.box_probability(F.cdf, a, b) - em.box_probability(G.cdf, a, b))
            assert rep.total >= gap

    def test_dominance_chain(self):
        # the partition bound at t = 0 is never above the truncated bound
        # once the smaller per-coordinate factor is replaced by the larger
        # delta / max(|v|, 1) one
        F, G = _k2_pair()
        plain = em.esseen_bound_k(F, G, (8.0, 8.0), (0.0, 0.0))
        relaxed = em.esseen_bound_truncated(
            F, G, (8.0, 8.0), delta=8.0, mode="A", use_triangle_replacement=True
        )
        assert plain.total <= relaxed.total

    def test_triangle_replacement_never_smaller(self):
        F, G = _k2_pair()
        base = em.esseen_bound_truncated(F, G, (8.0, 8.0), delta=8.0, mode="A")
        relaxed = em.esseen_bound_truncated(
            F, G, (8.0, 8.0), delta=8.0, mode="A", use_triangle_replacement=True
        )
        assert relaxed.integral_terms["truncated_integral"] >= base.integral_terms[
            "truncated_integral"
        ]

    def test_truncation_moves_little_mass(self):
        # clamping the evaluation point to [-delta, delta]^k changes the cdf
        # by at most k * delta^-alpha * moment
        F, _ = _k2_pair(100)
        alpha, mom = F.moment
        for delta in (3.0, 5.0):
            for t in ([5.0, 0.5], [-4.0, 7.0], [6.0, -6.0]):
                t = np.asarray(t)
                t_star = np.clip(t, -delta, delta)
                lhs = abs(F.cdf(t) - F.cdf(t_star))
                assert lhs <= len(t) * delta ** (-alpha) * mom + 1e-12

    def test_mode_b_requires_box_extent(self):
        F, G = _k2_pair()
        with pytest.raises(AssertionError):
            em.esseen_bound_truncated(F, G, (8.0, 8.0), delta=2.0, mode="B")


class TestSlabNorm:
    def _diff(self):
        F, G = _k2_pair()
        return lambda pts: F.cf(pts) - G.cf(pts)

    def test_empty_set_is_plain_value(self):
        f = self._diff()
        v = np.array([0.7, -1.3])
        assert em.slab_norm(f, [], v) == pytest.approx(abs(f(v[None, :])[0]), abs=1e-15)

    def test_large_coordinate_sign_flips(self):
        # even profile: flipping a |v_j| >= tau coordinate changes nothing
        def g(pts):
            return np.cos(pts[:, 0]) * np.cos(pts[:, 1])

        v = np.array([2.0, 3.0])
        assert em.slab_norm(g, [0, 1], v) == pytest.approx(abs(g(v[None, :])[0]), abs=1e-14)

    def test_bar_at_most_double_bar(self):
        # the bar flavor sups first partials over a subinterval of the
        # double-bar slab, so it can only be smaller
        def g(pts):
            return np.sin(1.3 * pts[:, 0]) * np.exp(-0.1 * pts[:, 1] ** 2)

        v = np.array([0.4, 2.0])
        bar = em.slab_norm(g, [0, 1], v, flavor="bar")
        dbar = em.slab_norm(g, [0, 1], v, flavor="double_bar")
        assert bar <= dbar + 1e-12

    def test_slab_bound_dominates_sup(self):
        F, G = _k2_pair()
        rep = em.esseen_bound_slab(F, G, (8.0, 8.0))
        side = np.linspace(-3, 3, 13)
        sup = max(
            abs(F.cdf(np.array(t)) - G.cdf(np.array(t)))
            for t in itertools.product(side, side)
        )
        assert rep.total >= sup


class TestHarness:
    def test_rows_shrink_with_n(self):
        G = em.product_normal_target(2)

        def family(n):
            return em.product_law(
                [e1.standardized_binomial(n), e1.standardized_binomial(n)]
            )

        rows = em.convergence_harness_k(family, G, (16, 64), variant="plain")
        assert rows[1].sup_distance < rows[0].sup_distance
        for r in rows:
            assert r.bound >= r.sup_distance
            assert math.isfinite(r.moment_diag)
