import json
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab.arith import DivisorSpec, SumResult, divisor_s, lambert_sum
from zetalab.errors import DomainError
from zetalab.meijerg import GSpec, eval_mb
from zetalab.identities import (
    TERM_KEYS,
    IdentityCase,
    ParityClass,
    VerificationReport,
    g_b_params,
    g_series_prefactor,
    j_range,
    make_report,
    residue_0,
    residue_1_over_k,
    residue_1_plus_r,
    residue_log,
    residue_R_coefficients,
    residue_R_odd,
    rhs_g_series,
    rhs_log_series,
    rhs_terms,
    verify,
    x_of_j,
)
from zetalab.specfun import bernoulli, zeta_real

TWO_PI = 2 * math.pi
ZETA3 = 1.2020569031595942


class TestCase:
    def test_parity_dispatch(self):
        assert IdentityCase(2, 0, 1).parity is ParityClass.EVEN_EVEN
        assert IdentityCase(2, 1, 1).parity is ParityClass.EVEN_ODD
        assert IdentityCase(4, -1, 1).parity is ParityClass.EVEN_LOG
        assert IdentityCase(3, 1, 1).parity is ParityClass.ODD_ODD
        assert IdentityCase(1, -1, 1).parity is ParityClass.ODD_LOG

    def test_unsupported_class(self):
        case = IdentityCase(3, 2, 1)
        assert not case.supported
        with pytest.raises(DomainError, match="Case 4"):
            case.parity
        with pytest.raises(DomainError, match="unsupported parity class"):
            verify(case)

    @pytest.mark.parametrize("x", [0.0, -2.0, math.inf, math.nan])
    def test_bad_x(self, x):
        with pytest.raises(DomainError):
            IdentityCase(1, 1, x)

    def test_b_params(self):
        assert g_b_params(IdentityCase(3, 2, 1)) == (2.0, -1 / 3, -2 / 3)


class TestXofJ:
    def test_examples(self):
        p = x_of_j(IdentityCase(2, 0, 1.0), 1, 1)
        assert p.modulus == pytest.approx(TWO_PI**3 / 4, rel=1e-15)
        assert p.angle == pytest.approx(-math.pi / 2)
        q = x_of_j(IdentityCase(2, 0, 1.0), 1, -1)
        assert q.modulus == p.modulus and q.angle == pytest.approx(math.pi / 2)
        u = x_of_j(IdentityCase(1, 1, 1.0), 1, 0)
        assert u.modulus == pytest.approx(4 * math.pi**2, rel=1e-15) and u.angle == 0

    def test_range(self):
        assert list(j_range(1)) == [0]
        assert list(j_range(4)) == [-3, -1, 1, 3]
        with pytest.raises(DomainError):
            x_of_j(IdentityCase(2, 0, 1.0), 1, 0)
        with pytest.raises(DomainError):
            x_of_j(IdentityCase(2, 0, 1.0), 1, 3)

    @given(st.integers(1, 8), st.integers(1, 50), st.floats(0.1, 10))
    def test_linear_in_n(self, k, n, x):
        case = IdentityCase(k, 1, x)
        j = k - 1
        assert x_of_j(case, n, j).modulus == pytest.approx(n * x_of_j(case, 1, j).modulus, rel=1e-13)
        assert abs(x_of_j(case, n, j).angle) < k * math.pi / 2


class TestResidues:
    def test_residue_0(self):
        assert residue_0(IdentityCase(2, 0, 1)) == pytest.approx(0.25)
        assert residue_0(IdentityCase(2, 1, 1)) == pytest.approx(1 / 24)
        assert residue_0(IdentityCase(2, 2, 1)) == 0
        with pytest.raises(DomainError):
            residue_0(IdentityCase(2, -1, 1))

    def test_residue_1_over_k(self):
        a = 3.7
        zh = zeta_real(0.5)
        assert residue_1_over_k(IdentityCase(2, 0, a)) == pytest.approx(math.sqrt(math.pi) / (2 * math.sqrt(a)) * zh)
        beta = 4 * math.pi**3 / a
        assert residue_1_over_k(IdentityCase(2, 0, a)) == pytest.approx(math.sqrt(beta) / (4 * math.pi) * zh)
        assert residue_1_over_k(IdentityCase(2, 1, a)) == pytest.approx(
            math.sqrt(math.pi) / (2 * math.sqrt(a)) * zeta_real(-0.5)
        )
        assert residue_1_over_k(IdentityCase(1, -3, 1)) == pytest.approx(math.pi**4 / 90, rel=1e-14)

    def test_residue_1_plus_r(self):
        x = 1.9
        assert residue_1_plus_r(IdentityCase(2, 0, x)) == pytest.approx(math.pi**2 / (6 * x), rel=1e-14)
        assert residue_1_plus_r(IdentityCase(2, 1, x)) == pytest.approx(math.pi**4 / (90 * x**2), rel=1e-14)
        assert residue_1_plus_r(IdentityCase(1, -3, x)) == pytest.approx(-ZETA3 * x**2 / (8 * math.pi**2), rel=1e-14)
        # k (2km)! zeta(2km+1) / (2m)! scaled form: k = 1, m = 1
        x = TWO_PI
        alt = -math.factorial(2) * ZETA3 / math.factorial(2) * (x / TWO_PI) ** 2 / 2
        assert residue_1_plus_r(IdentityCase(1, -3, x)) == pytest.approx(alt, rel=1e-14)
        with pytest.raises(DomainError):
            residue_1_plus_r(IdentityCase(1, -1, 1))

    def test_residue_log(self):
        assert abs(residue_log(IdentityCase(1, -1, TWO_PI))) < 1e-15
        assert abs(residue_log(IdentityCase(2, -1, TWO_PI**2))) < 1e-15
        assert residue_log(IdentityCase(2, -1, 1.0)) == pytest.approx(-math.log(TWO_PI), rel=1e-15)
        with pytest.raises(DomainError):
            residue_log(IdentityCase(2, 0, 1))

    def test_residue_R_odd(self):
        assert residue_R_odd(IdentityCase(1, 3, 1.0)) == 0
        # B2 = 1/6, B4 = -1/30: -(2pi)^3/2 * (-1/144 - 1/720) = pi^3 / 30
        direct = -(TWO_PI**3) / 2 * sum(
            float((-1) ** (i + 1) * bernoulli(2 * i + 2) * bernoulli(2 - 2 * i))
            / (math.factorial(2 * i + 2) * math.factorial(2 - 2 * i))
            for i in range(2)
        )
        assert direct == pytest.approx(math.pi**3 / 30, rel=1e-15)
        assert residue_R_odd(IdentityCase(1, -3, TWO_PI)) == pytest.approx(direct, rel=1e-15)
        with pytest.raises(DomainError):
            residue_R_odd(IdentityCase(2, -3, 1.0))

    def test_residue_R_coefficients(self):
        # B4 B2 / (1! 4 2!) and B10 B0 / (3! 10 0!), with the -1/2 lead
        assert residue_R_coefficients(3, -3) == [Fraction(-1, 2880), Fraction(-1, 1584)]
        assert residue_R_coefficients(3, 1) == []


class TestSeries:
    def test_first_pair_even_even(self):
        x = 1.0
        beta = 4 * math.pi**3 / x
        case = IdentityCase(2, 0, x)
        # n = 1, j = +-1 through the rotated closed form
        closed = (math.sqrt(2 * math.pi / beta) * np.exp(1j * math.pi / 4)
                  * np.exp(-math.sqrt(2 * beta) * np.exp(-1j * math.pi / 4)))
        mb = eval_mb(GSpec(2, g_b_params(case), x_of_j(case, 1, 1)))
        assert abs(mb - closed) < 1e-12
        y = math.sqrt(beta)
        pair = 2 * closed.real
        assert pair == pytest.approx(2 * math.sqrt(2 * math.pi / beta) * math.exp(-y) * math.cos(y + math.pi / 4), rel=1e-12)
        assert pair == pytest.approx(2 * math.sqrt(math.pi / beta) * math.exp(-y) * (math.cos(y) - math.sin(y)), rel=1e-12)

    def test_k1_explicit(self):
        case = IdentityCase(1, -3, TWO_PI)
        x = case.x
        direct = g_series_prefactor(case) * math.fsum(
            divisor_s(DivisorSpec(1, -3), n) * (x / (4 * math.pi**2 * n)) ** 3 * math.exp(-4 * math.pi**2 * n / x)
            for n in range(1, 15)
        )
        assert rhs_g_series(case).value == pytest.approx(direct, rel=1e-14)

    def test_closed_form_flag(self):
        case = IdentityCase(2, 0, 1.0)
        a = rhs_g_series(case).value
        b = rhs_g_series(case, use_closed_form=False).value
        assert a == pytest.approx(b, abs=1e-11)

    def test_log_series_k1(self):
        ref = math.fsum(1 / (n * math.expm1(TWO_PI * n)) for n in range(1, 30))
        res = rhs_log_series(IdentityCase(1, -1, TWO_PI))
        assert res.value == pytest.approx(ref, rel=1e-13)
        assert res.tail_bound < 1e-15

    def test_log_series_k2_real(self):
        res = rhs_log_series(IdentityCase(2, -1, TWO_PI**2))
        m = np.arange(1, 20000, dtype=np.float64)
        w = np.exp(-1j * math.pi / 4) * math.sqrt(TWO_PI) * np.sqrt(m)
        direct = -2 * np.sum(np.log(1 - np.exp(-w))).real
        assert res.value == pytest.approx(direct, rel=1e-12)
        assert res.imag_residual < 1e-14

    def test_log_series_rejects(self):
        with pytest.raises(DomainError):
            rhs_log_series(IdentityCase(2, 0, 1.0))
        with pytest.raises(DomainError):
            rhs_g_series(IdentityCase(2, -1, 1.0))


class TestVerify:
    @pytest.mark.parametrize(
        "k,r,x,tol",
        [(1, 1, TWO_PI, 1e-12), (2, 0, 1.0, 1e-9), (3, -3, 2.0, 1e-8), (1, -1, 1.0, 1e-12), (2, -1, 3.0, 1e-10),
         (1, 3, 0.5, 1e-10), (2, 1, 0.7, 1e-10), (4, 2, 2.0, 1e-8), (3, -1, 1.0, 1e-9)],
    )
    def test_residuals(self, k, r, x, tol):
        rep = verify(IdentityCase(k, r, x))
        assert rep.abs_residual < tol
        assert rep.effort["imag_residual"] < 1e-10

    def test_schlomilch_structure(self):
        rep = verify(IdentityCase(1, 1, TWO_PI))
        assert rep.lhs.value == pytest.approx(1 / 24 - 1 / (8 * math.pi), abs=1e-15)
        assert rep.rhs_total == pytest.approx(1 / 24 - 1 / (8 * math.pi), abs=1e-13)

    def test_report_invariants(self):
        rep = verify(IdentityCase(2, 2, 1.0))
        assert set(rep.rhs_terms) == set(TERM_KEYS)
        assert rep.rhs_total == pytest.approx(math.fsum(rep.rhs_terms.values()), abs=0)
        assert rep.abs_residual == abs(rep.lhs.value - rep.rhs_total)
        assert rep.rel_residual == pytest.approx(rep.abs_residual / max(abs(rep.lhs.value), abs(rep.rhs_total)))
        assert rep.rhs_terms["residue_0"] == 0.0
        with pytest.raises(TypeError):
            rep.rhs_terms["g_series"] = 1.0

    def test_reports_instead_of_raising(self):
        case = IdentityCase(2, 0, 1.0)
        rep = make_report(case, SumResult(1.0, 0.0, 1), {"a": 0.25})
        assert rep.abs_residual == 0.75 and rep.rel_residual == 0.75

    def test_round_trip(self):
        rep = verify(IdentityCase(3, 1, 1.0))
        again = VerificationReport.from_dict(json.loads(json.dumps(rep.to_dict())))
        assert again.to_dict() == rep.to_dict()
        assert again == rep

    def test_rhs_terms_keys(self):
        terms, series = rhs_terms(IdentityCase(1, -1, 2.0))
        assert terms["residue_0"] == 0 and terms["g_series"] == series.value

    def test_thread_safety(self):
        cases = [IdentityCase(2, 0, x) for x in (0.5, 1.0, 2.0, 3.0)] * 2
        serial = [verify(c).rhs_total for c in cases]
        with ThreadPoolExecutor(4) as pool:
            parallel = [r.rhs_total for r in pool.map(verify, cases)]
        assert serial == parallel

    @settings(max_examples=15)
    @given(st.sampled_from([(1, 1), (1, -1), (2, 0), (2, 1), (2, -1), (3, 1), (1, -3)]), st.floats(0.5, 4.0))
    def test_residual_random_x(self, kr, x):
        rep = verify(IdentityCase(kr[0], kr[1], x))
        assert rep.abs_residual < 1e-9 * max(1.0, abs(rep.lhs.value))

    def test_lhs_matches_lambert(self):
        rep = verify(IdentityCase(2, 1, 1.3))
        assert rep.lhs.value == lambert_sum(DivisorSpec(2, 1), 1.3).value
