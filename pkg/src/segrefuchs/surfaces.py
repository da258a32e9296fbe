"""Hypersurface models: real and complex defining forms and their transfer.

A surface is carried either as
  real form      v = u**m ( eps*|z|^2 + sum_{k,l>=2} h_kl(u) z^k zb^l )
or as the complex exponential form
  w = wb * exp( eps*i * wb**(m-1) * phi(z, zb, wb) ),
  phi = z*zb + sum_{k,l>=2} phi_kl(wb) z^k zb^l.

Transfers between the two solve the defining relation with the series-level
implicit solver and renormalize the leading coefficient by a real rescaling
z -> lambda*z with rational lambda**2; the rescale factor is recorded on the
result.  All data is exact.
"""

from fractions import Fraction

from .qfield import GaussianRational, ONE, I, qi
from .series import (MultiSeries, EXACT, SeriesError, exp_series, log_series,
                     solve_implicit)
from .errors import (OrderTooLowError, RealityViolation, NotNormalizableError,
                     FormatError, SegrefuchsError)

Z, ZB, WB, U, W = "z", "zb", "wb", "u", "w"

FUCHS_MARGIN = 2  # conversions demand order >= 3m+2


def min_order(m):
    return 3 * m + FUCHS_MARGIN


class RealDefining:
    """Real m-admissible data: m, sign and the coefficient table h_kl(u)."""

    def __init__(self, m, eps, h, order):
        if m < 1:
            raise SegrefuchsError("nonminimality order m must be >= 1")
        if eps not in (1, -1):
            raise SegrefuchsError("sign must be +1 or -1")
        self.m = m
        self.eps = eps
        self.h = {kl: s for kl, s in sorted(h.items()) if not s.is_zero()}
        self.order = order
        for (k, l), s in self.h.items():
            if k < 2 or l < 2:
                raise SegrefuchsError("h indices must satisfy k,l >= 2")
            if s.vars != (U,):
                raise SegrefuchsError("h_kl must be series in u")

    def reality_defect(self):
        """Pairs (k,l) where h_kl != conj(h_lk); empty iff the data is real."""
        bad = []
        seen = set()
        for (k, l) in self.h:
            if (k, l) in seen:
                continue
            seen.add((k, l))
            seen.add((l, k))
            a = self.h.get((k, l), MultiSeries.zero((U,), self.order))
            b = self.h.get((l, k), MultiSeries.zero((U,), self.order))
            if a != b.map_coefficients(lambda c: c.conjugate()):
                bad.append((k, l))
        return bad

    def defining_series(self, order=None):
        """v = F(z, zb, u) as a series over (z, zb, u)."""
        order = self.order if order is None else order
        psi = MultiSeries.monomial(GaussianRational.from_int(self.eps),
                                   (1, 1, 0), (Z, ZB, U), EXACT)
        for (k, l), s in self.h.items():
            term = s.embed((Z, ZB, U))
            psi = psi + term.monomial_mul(Z, k).monomial_mul(ZB, l)
        return psi.truncate(order).monomial_mul(U, self.m).truncate(order)

    def __repr__(self):
        return "<RealDefining m=%d eps=%+d h=%s order=%d>" % (
            self.m, self.eps, sorted(self.h), self.order)


class ComplexDefining:
    """Complex exponential form: m, sign and phi(z, zb, wb)."""

    def __init__(self, m, eps, phi, order, scale_sq=None):
        if m < 1:
            raise SegrefuchsError("nonminimality order m must be >= 1")
        if eps not in (1, -1):
            raise SegrefuchsError("sign must be +1 or -1")
        self.m = m
        self.eps = eps
        self.phi = phi.embed((Z, ZB, WB)) if phi.vars != (Z, ZB, WB) else phi
        self.order = order
        self.scale_sq = scale_sq  # squared z-rescale applied on construction

    def phi_kl(self, k, l):
        """Coefficient series of z^k zb^l in phi, as a series in wb."""
        return self.phi.coeff_of({Z: k, ZB: l})

    def stored_kl(self):
        out = set()
        for e in self.phi.terms:
            k, l = e[self.phi.vars.index(Z)], e[self.phi.vars.index(ZB)]
            out.add((k, l))
        return sorted(out)

    def exponent(self):
        """The full exponent  eps*i * wb^(m-1) * phi."""
        return self.phi.monomial_mul(WB, self.m - 1).scale(
            I if self.eps == 1 else -I)

    def reality_exponent(self):
        """eps * wb^(m-1) * phi: the Psi of w = wb e^{i Psi}."""
        return self.phi.monomial_mul(WB, self.m - 1).scale(
            GaussianRational.from_int(self.eps))

    def defining_series(self, order=None):
        """R(z, zb, wb) with the surface given by w = R."""
        order = self.order if order is None else order
        ex = exp_series(self.exponent().truncate(order), order)
        return ex.monomial_mul(WB, 1).truncate(order)

    def admissibility_defects(self):
        defects = []
        if not (self.phi.coefficient((1, 1, 0)) == ONE):
            defects.append("zzb coefficient of phi is not 1")
        for e, c in self.phi.terms.items():
            k, l = e[0], e[1]
            if (k, l) == (1, 1) and e[2] == 0:
                continue
            if k < 2 or l < 2:
                defects.append("term z^%d zb^%d wb^%d outside admissible "
                               "shape" % e)
        return defects

    def __repr__(self):
        return "<ComplexDefining m=%d eps=%+d order=%d>" % (
            self.m, self.eps, self.order)


class ValidationReport:
    """Structural flags plus the residual series backing each verdict."""

    def __init__(self, normal, admissible, reality_ok, levi_ok, residual):
        self.normal = normal
        self.admissible = admissible
        self.reality_ok = reality_ok
        self.levi_ok = levi_ok
        self.residual = residual

    def ok(self):
        return (self.normal and self.admissible and self.reality_ok
                and self.levi_ok)

    def as_dict(self):
        return {
            "normal_coordinates": self.normal,
            "m_admissible": self.admissible,
            "reality_ok": self.reality_ok,
            "levi_nondegenerate_off_X": self.levi_ok,
        }


def bar_series(s, swap=(Z, ZB), rename=None):
    """Coefficient conjugate with the first two slots swapped.

    For f(z, zb, wb) this realizes bar(f)(zb, z, w) as a series over the
    ambient commuting variables.
    """
    i1, i2 = s.vars.index(swap[0]), s.vars.index(swap[1])
    terms = {}
    for e, c in s.terms.items():
        ne = list(e)
        ne[i1], ne[i2] = ne[i2], ne[i1]
        terms[tuple(ne)] = c.conjugate()
    out = MultiSeries(s.vars, s.order, terms, _clean=False)
    if rename:
        out = out.rename(rename)
    return out


def check_reality(M):
    """Residual of the reality condition for a ComplexDefining surface.

    Zero modulo the working order iff the exponential form defines a real
    hypersurface.  The residual  Psi(z, zb, w e^{-i bar(Psi)}) - bar(Psi)
    is returned over (z, zb, w).
    """
    order = M.order
    psi = M.reality_exponent().truncate(order)
    psibar = bar_series(psi, rename={WB: W})
    arg = exp_series(psibar.scale(-I), order).monomial_mul(W, 1)
    lhs = psi.compose({WB: arg.truncate(order)})
    return (lhs - psibar).truncate(order)


def require_reality(M, tol_order=None):
    res = check_reality(M)
    order = M.order if tol_order is None else tol_order
    if not res.truncate(order).is_zero():
        raise RealityViolation(res)
    return res


def validate_complex(M):
    defects = M.admissibility_defects()
    pure = [e for e in M.phi.terms
            if (e[0] == 0 and (e[1] or e[2])) or (e[1] == 0 and (e[0] or e[2]))]
    res = check_reality(M)
    levi = not M.phi.coeff_of({Z: 1, ZB: 1}).is_zero()
    return ValidationReport(normal=not pure, admissible=not defects,
                            reality_ok=res.is_zero(), levi_ok=levi,
                            residual=res)


def nonminimality_order(F):
    """Largest m with u^m dividing the normal defining series v = F(z,zb,u).

    F must be in normal coordinates (no pure-z or pure-zb slices).  Raises
    when F vanishes identically at this truncation (order undetermined) or
    when the quotient still vanishes on u = 0 (not Levi-nonflat to order N).
    """
    F = F.embed((Z, ZB, U)) if F.vars != (Z, ZB, U) else F
    for e in F.terms:
        if e[0] == 0 or e[1] == 0:
            raise SegrefuchsError("defining series is not in normal "
                                  "coordinates: term %s" % (e,))
    if F.is_zero():
        raise SegrefuchsError("order undetermined at this truncation: "
                              "series is identically zero")
    m = F.var_valuation(U)
    if m < 1:
        raise SegrefuchsError("surface is minimal at this truncation "
                              "(no u factor); nonminimality needs m >= 1")
    psi = F.monomial_div(U, m)
    if psi.coeff_of({U: 0}).is_zero():
        raise SegrefuchsError("not Levi-nonflat to this order")
    return m


def _sqrt_in_field(f):
    """sqrt of a positive rational inside Q(sqrt2), or None."""
    f = Fraction(f)
    if f <= 0:
        return None
    r = _rat_sqrt(f)
    if r is not None:
        return GaussianRational.of(r)
    r = _rat_sqrt(f / 2)
    if r is not None:
        return GaussianRational.of_sqrt2(r)
    return None


def _rat_sqrt(f):
    n, d = f.numerator, f.denominator
    rn, rd = _isqrt_exact(n), _isqrt_exact(d)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _isqrt_exact(n):
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


def rescale_z(phi, lam_sq):
    """Apply z -> lambda z, zb -> lambda zb with rational lambda**2."""
    lam = _sqrt_in_field(lam_sq)
    if lam is None:
        raise NotNormalizableError(
            "scale lambda^2 = %s has no square root in Q(sqrt2)" % lam_sq)
    lam2 = GaussianRational.of(Fraction(lam_sq))
    terms = {}
    for e, c in phi.terms.items():
        deg = e[0] + e[1]
        f = lam2 ** (deg // 2) if deg % 2 == 0 else lam * lam2 ** (deg // 2)
        terms[e] = c * f
    return MultiSeries(phi.vars, phi.order, terms)


def real_to_complex(Mr, order=None):
    """Transfer real m-admissible data to the complex exponential form.

    Solves (w - wb)/2i = F(z, zb, (w+wb)/2) for w, factors the exponential
    shape and rescales z so the z*zb coefficient of phi is exactly 1.  The
    squared rescale is recorded on the result.
    """
    order = Mr.order if order is None else order
    if order < min_order(Mr.m):
        raise OrderTooLowError(order, min_order(Mr.m))
    bad = Mr.reality_defect()
    if bad:
        raise SegrefuchsError("real data violates h_kl = conj(h_lk) at %s"
                              % (bad,))
    F = Mr.defining_series(order)
    vars5 = (Z, ZB, WB, W)
    half = MultiSeries(vars5, EXACT,
                       {(0, 0, 1, 0): qi(Fraction(1, 2)),
                        (0, 0, 0, 1): qi(Fraction(1, 2))}, _clean=False)
    Fw = F.embed((Z, ZB, U, WB, W)).compose({U: half})
    lin = MultiSeries(vars5, EXACT,
                      {(0, 0, 0, 1): qi(0, Fraction(-1, 2)),
                       (0, 0, 1, 0): qi(0, Fraction(1, 2))}, _clean=False)
    G = lin - Fw  # (w - wb)/2i  - F, with 1/2i = -i/2
    sol = solve_implicit([G.truncate(order)], (Z, ZB, WB), (W,), order)
    R = sol[0]
    theta = R.monomial_div(WB, 1)
    if not (theta.constant_term() == ONE):
        raise NotNormalizableError("defining series lacks the w = wb + ... "
                                   "normal shape")
    lg = log_series(theta, order)
    sgn = I if Mr.eps == 1 else -I
    phi_raw = lg.scale(sgn.inverse())
    try:
        phi_raw = phi_raw.monomial_div(WB, Mr.m - 1)
    except SeriesError:
        raise SegrefuchsError("declared nonminimality order %d inconsistent "
                              "with the defining series" % Mr.m)
    c = phi_raw.coefficient((1, 1, 0))
    if c.is_zero() or not c.is_rational() or c.re <= 0:
        raise NotNormalizableError("leading z*zb coefficient %r is not a "
                                   "positive rational" % c)
    lam_sq = Fraction(1) / c.re
    phi = rescale_z(phi_raw, lam_sq)
    Mc = ComplexDefining(Mr.m, Mr.eps, phi, phi.order, scale_sq=lam_sq)
    require_reality(Mc)
    return Mc


def complex_to_real(Mc, order=None):
    """Transfer an admissible complex form back to real m-admissible data.

    Inverse of real_to_complex up to the recorded z-rescaling.
    """
    order = Mc.order if order is None else order
    if order < min_order(Mc.m):
        raise OrderTooLowError(order, min_order(Mc.m))
    R = Mc.defining_series(order)
    # solve (R(z,zb,wb) + wb)/2 = u for wb(z, zb, u)
    vars4 = (Z, ZB, U, WB)
    G = (R.embed(vars4) + MultiSeries.variable(WB, vars4)).scale(
        Fraction(1, 2)) - MultiSeries.variable(U, vars4)
    sol = solve_implicit([G.truncate(order)], (Z, ZB, U), (WB,), order)
    wb = sol[0]
    Rsub = R.compose({WB: wb})
    F = (Rsub - wb).scale(qi(0, Fraction(-1, 2)))  # (R - wb)/2i
    m = nonminimality_order(F.truncate(order))
    if m != Mc.m:
        raise SegrefuchsError("transfer changed the nonminimality order: "
                              "%d vs %d" % (m, Mc.m))
    psi = F.monomial_div(U, m)
    lead = psi.coeff_of({Z: 1, ZB: 1})
    c0 = lead.coefficient((0,) * len(lead.vars))
    if c0.is_zero() or not c0.is_rational():
        raise NotNormalizableError("leading |z|^2 coefficient %r is not "
                                   "rational" % c0)
    eps = 1 if c0.re > 0 else -1
    lam_sq = Fraction(1) / abs(c0.re)
    psi = rescale_z(psi, lam_sq)
    lead = psi.coeff_of({Z: 1, ZB: 1})
    if not lead.equal_mod(MultiSeries.const(eps, lead.vars, lead.order),
                          max(lead.order, 0)):
        raise NotNormalizableError("z*zb slice of the real form is not "
                                   "constant; surface not m-admissible")
    seen = set()
    for e in psi.terms:
        k, l, _ = e
        if (k, l) == (1, 1):
            continue
        if k < 2 or l < 2:
            raise SegrefuchsError("real transfer produced a non-admissible "
                                  "term z^%d zb^%d" % (k, l))
        seen.add((k, l))
    table = {kl: psi.coeff_of({Z: kl[0], ZB: kl[1]}) for kl in sorted(seen)}
    Mr = RealDefining(m, eps, table, min(order, psi.order + m))
    if Mr.reality_defect():
        raise RealityViolation(check_reality(Mc))
    return Mr


def build_complex(m, eps, phi_kl, order):
    """Assemble an admissible ComplexDefining from a phi_kl table.

    phi_kl maps (k, l) with k, l >= 2 to series in wb (or in ("wb",)-compatible
    data); the z*zb term is added automatically.
    """
    phi = MultiSeries.monomial(ONE, (1, 1, 0), (Z, ZB, WB), order)
    for (k, l), s in sorted(phi_kl.items()):
        if k < 2 or l < 2:
            raise SegrefuchsError("phi indices must satisfy k,l >= 2")
        phi = phi + s.embed((Z, ZB, WB)).monomial_mul(Z, k).monomial_mul(ZB, l)
    return ComplexDefining(m, eps, phi.truncate(order), order)


def build_real(m, eps, h_kl, order):
    table = {}
    for (k, l), s in h_kl.items():
        table[(k, l)] = s if isinstance(s, MultiSeries) else \
            MultiSeries((U,), order, s)
    return RealDefining(m, eps, table, order)
