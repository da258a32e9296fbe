import random
from fractions import Fraction

import pytest

from segrefuchs.qfield import GaussianRational, ONE, I, qi
from segrefuchs.series import MultiSeries, EXACT, exp_series
from segrefuchs.surfaces import (RealDefining, ComplexDefining, build_real,
                                 build_complex, real_to_complex,
                                 complex_to_real, check_reality,
                                 require_reality, validate_complex,
                                 nonminimality_order, bar_series,
                                 Z, ZB, WB, U)
from segrefuchs.errors import (RealityViolation, SegrefuchsError,
                               OrderTooLowError)


def u_series(terms, order=EXACT):
    return MultiSeries(("u",), order, {(k,): c for k, c in terms.items()})


def wb_series(terms, order=EXACT):
    return MultiSeries(("wb",), order, {(k,): c for k, c in terms.items()})


# ---- real_to_complex --------------------------------------------------------

def test_model_m1_closed_form():
    """v = u z zb has the closed form w = wb (1 + i z zb)/(1 - i z zb)."""
    Mr = build_real(1, 1, {}, 10)
    Mc = real_to_complex(Mr)
    assert Mc.scale_sq == Fraction(1, 2)
    # pre-normalization phi = 2 z zb - (2/3) (z zb)^3 + ...; after the
    # z -> z/sqrt(2) rescale the degree-6 coefficient becomes -1/12
    assert Mc.phi.coefficient((1, 1, 0)) == ONE
    assert Mc.phi.coefficient((2, 2, 0)).is_zero()
    assert Mc.phi.coefficient((3, 3, 0)) == qi(Fraction(-1, 12))
    # oracle: R must satisfy (w - wb)/2i = u * z*zb with u = (w+wb)/2,
    # both sides divided by the original z-scale
    R = Mc.defining_series()
    lhs = (R - MultiSeries.variable(WB, (Z, ZB, WB))).scale(
        qi(0, Fraction(-1, 2)))
    u = (R + MultiSeries.variable(WB, (Z, ZB, WB))).scale(Fraction(1, 2))
    zzb = MultiSeries.monomial(ONE, (1, 1, 0), (Z, ZB, WB))
    rhs = u * zzb.scale(GaussianRational.of(Fraction(Mc.scale_sq)))
    assert (lhs - rhs).truncate(R.order).is_zero()


@pytest.mark.parametrize("m", [1, 2, 3])
def test_pure_model_chain_residual(m):
    """v = u^m z zb: the transfer satisfies its defining relation."""
    order = 3 * m + 4
    Mr = build_real(m, 1, {}, order)
    Mc = real_to_complex(Mr)
    R = Mc.defining_series()
    lhs = (R - MultiSeries.variable(WB, (Z, ZB, WB))).scale(
        qi(0, Fraction(-1, 2)))
    u = (R + MultiSeries.variable(WB, (Z, ZB, WB))).scale(Fraction(1, 2))
    zzb = MultiSeries.monomial(ONE, (1, 1, 0), (Z, ZB, WB))
    rhs = (u ** m) * zzb.scale(GaussianRational.of(Fraction(Mc.scale_sq)))
    assert (lhs - rhs).truncate(R.order).is_zero()
    assert check_reality(Mc).is_zero()


def test_round_trip_real_complex_real():
    u = MultiSeries.variable("u", ("u",))
    h = {(2, 2): u_series({1: qi(1), 2: qi(Fraction(1, 3))}),
         (2, 3): u_series({2: qi(1, 1)}),
         (3, 2): u_series({2: qi(1, -1)}),
         (3, 3): u_series({0: qi(Fraction(-1, 2))})}
    Mr = build_real(2, 1, h, 13)
    Mc = real_to_complex(Mr)
    assert check_reality(Mc).is_zero()
    Mr2 = complex_to_real(Mc)
    assert Mr2.m == Mr.m and Mr2.eps == Mr.eps
    for kl, s in Mr.h.items():
        got = Mr2.h[kl]
        k = min(got.order, 13 - sum(kl))
        assert got.truncate(k) == s.truncate(k)
    assert not Mr2.reality_defect()


def test_round_trip_negative_sign():
    Mr = build_real(2, -1, {(2, 2): u_series({1: qi(2)})}, 12)
    Mc = real_to_complex(Mr)
    assert Mc.eps == -1
    assert check_reality(Mc).is_zero()
    Mr2 = complex_to_real(Mc)
    assert Mr2.eps == -1
    k = min(Mr2.h[(2, 2)].order, 8)
    assert Mr2.h[(2, 2)].truncate(k) == u_series({1: qi(2)}).truncate(k)


def test_complex_to_real_pure_model():
    """phi = z zb exactly at m=1 gives v = u(zzb + higher) with real h."""
    Mc = build_complex(1, 1, {}, 10)
    Mr = complex_to_real(Mc)
    assert Mr.m == 1 and Mr.eps == 1
    assert not Mr.reality_defect()
    for (k, l), s in Mr.h.items():
        assert k >= 2 and l >= 2
        conj = Mr.h[(l, k)].map_coefficients(lambda c: c.conjugate())
        assert s == conj


def test_complex_to_real_order_relation():
    """ord h22 = ord phi22 across the transfer (both directions)."""
    u = MultiSeries.variable("u", ("u",))
    Mr = build_real(2, 1, {(2, 2): u}, 12)
    Mc = real_to_complex(Mr)
    phi22 = Mc.phi_kl(2, 2)
    assert phi22.var_valuation("wb") == 1
    # a w-dependent phi22 with a real coefficient is NOT a real surface
    Mr2 = complex_to_real(Mc)
    assert Mr2.h[(2, 2)].var_valuation("u") == 1


# ---- reality ---------------------------------------------------------------

def test_check_reality_examples():
    M1 = build_complex(1, 1, {}, 8)
    assert check_reality(M1).is_zero()
    # phi = i z zb is not real: residual 2i z zb + higher
    phi = MultiSeries.monomial(I, (1, 1, 0), (Z, ZB, WB), 8)
    M2 = ComplexDefining(1, 1, phi, 8)
    res = check_reality(M2)
    assert res.coefficient((1, 1, 0)) == qi(0, 2)
    # real coefficients independent of wb: real surface
    M3 = build_complex(1, 1, {(2, 2): wb_series({0: qi(Fraction(2, 7))})}, 8)
    assert check_reality(M3).is_zero()


def test_reality_detects_single_perturbation():
    u = MultiSeries.variable("u", ("u",))
    M = real_to_complex(build_real(2, 1, {(2, 2): u}, 12))
    assert check_reality(M).is_zero()
    # phi22 -> phi22 + i wb^k: asymmetric, must be caught
    bad = ComplexDefining(M.m, M.eps,
                          M.phi + MultiSeries.monomial(I, (2, 2, 2),
                                                       (Z, ZB, WB)),
                          M.order)
    res = check_reality(bad)
    assert not res.is_zero()
    with pytest.raises(RealityViolation):
        require_reality(bad)


def test_bar_series_involution():
    rng = random.Random(9)
    terms = {}
    for _ in range(6):
        e = (rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 2))
        terms[e] = qi(rng.randint(-3, 3), rng.randint(-3, 3))
    s = MultiSeries((Z, ZB, WB), 8, terms)
    assert bar_series(bar_series(s)) == s


# ---- nonminimality order ------------------------------------------------------

def test_nonminimality_order_examples():
    zzb = MultiSeries.monomial(ONE, (1, 1, 0), (Z, ZB, U), 9)
    u2 = zzb.monomial_mul(U, 2)
    assert nonminimality_order(u2) == 2
    f = zzb.monomial_mul(U, 1) + \
        MultiSeries.monomial(ONE, (2, 2, 3), (Z, ZB, U), 9)
    assert nonminimality_order(f) == 1
    with pytest.raises(SegrefuchsError):
        nonminimality_order(zzb)  # minimal: m = 0 rejected
    with pytest.raises(SegrefuchsError):
        nonminimality_order(MultiSeries.zero((Z, ZB, U), 9))


def test_nonminimality_unit_invariance():
    zzb = MultiSeries.monomial(ONE, (1, 1, 0), (Z, ZB, U), 9)
    base = zzb.monomial_mul(U, 2)
    unit = MultiSeries.const(ONE, (Z, ZB, U), 9) + \
        MultiSeries.monomial(qi(Fraction(1, 2)), (1, 1, 1), (Z, ZB, U), 9)
    assert nonminimality_order((base * unit).truncate(9)) == 2


# ---- validation and guards -----------------------------------------------------

def test_validation_report():
    M = build_complex(1, 1, {(2, 2): wb_series({0: qi(1)})}, 8)
    rep = validate_complex(M)
    assert rep.ok()
    assert rep.as_dict()["m_admissible"]


def test_conversion_order_guard():
    Mr = build_real(2, 1, {}, 5)
    with pytest.raises(OrderTooLowError):
        real_to_complex(Mr)  # needs >= 3m+2 = 8
