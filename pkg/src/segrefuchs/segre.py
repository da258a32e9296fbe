"""Segre families and the associated singular second-order ODE.

The Segre varieties of an admissible surface are graphs
    w_p(z) = etab * exp( eps*i * etab^(m-1) * phi(z, xib, etab) )
parametrized by the conjugated point coordinates (xib, etab).  Eliminating
(xib, etab) between w_p, w_p'/w_p^m and w_p'' produces the unique singular
ODE  w'' = Phi(z, w, w'/w^m)  with Phi = O(w^m zeta^2).

The jet variable zeta stays a first-class series variable; the substitution
zeta = w'/w^m is never performed symbolically.  Closed-form expressions for
the low-order coefficient family double as an independent oracle for the
elimination route; both are exposed and cross-checked in the test suite.
"""

from fractions import Fraction

from .qfield import GaussianRational, ONE, I
from .series import MultiSeries, LaurentInW, EXACT, exp_series, \
    solve_implicit
from .surfaces import Z, ZB, WB, min_order
from .errors import OrderTooLowError, SegrefuchsError

XIB, ETAB, WV, ZETA = "xib", "etab", "w", "zeta"

COEFF_KEYS = ("a0", "a1", "a2", "b0", "b1", "b2", "c0", "c1")
_COEFF_SLOT = {"a0": (2, 0), "a1": (2, 1), "a2": (2, 2),
               "b0": (3, 0), "b1": (3, 1), "b2": (3, 2),
               "c0": (4, 0), "c1": (4, 1)}


class SegreGraph:
    """Graph series w_p(z) over (z, xib, etab), plus its jet data."""

    def __init__(self, m, eps, w, wz, zeta):
        self.m = m
        self.eps = eps
        self.w = w          # the graph series
        self.wz = wz        # dw/dz
        self.zeta = zeta    # w'/w^m, computed without division
        self.wzz = wz.diff(Z)

    def __repr__(self):
        return "<SegreGraph m=%d eps=%+d order=%d>" % (
            self.m, self.eps, self.w.order)


class AssociatedODE:
    """w'' = Phi(z, w, w'/w^m) together with its coefficient family.

    coeffs holds the eight holomorphic series a0..c1 (in w); a, b, c are the
    meromorphic coefficients of (w')^2, (w')^3, (w')^4 as Laurent values in
    w with bodies over (z, w).
    """

    def __init__(self, m, eps, Phi, order):
        self.m = m
        self.eps = eps
        self.Phi = Phi
        self.order = order
        self._family = None

    @staticmethod
    def from_phi(m, eps, Phi, order=None):
        order = Phi.order if order is None else order
        E = AssociatedODE(m, eps, Phi, order)
        E.check_shape()
        return E

    def check_shape(self):
        """Assert Phi = O(w^m zeta^2); exact divisibility in both factors."""
        self.Phi.monomial_div(WV, self.m)
        self.Phi.monomial_div(ZETA, 2)

    def phi_slice(self, j):
        """Phi's zeta^j slice divided by w^m: a holomorphic series in (z,w)."""
        return self.Phi.coeff_of({ZETA: j}).monomial_div(WV, self.m)

    @property
    def coeffs(self):
        if self._family is None:
            fam = {}
            for key, (j, k) in _COEFF_SLOT.items():
                s = self.Phi.coeff_of({ZETA: j, Z: k})
                fam[key] = s.monomial_div(WV, self.m)
            self._family = fam
        return self._family

    def mero(self, which):
        """Meromorphic a, b or c: Phi's zeta^j slice over w^(j*m)."""
        j = {"a": 2, "b": 3, "c": 4}[which]
        return LaurentInW(self.Phi.coeff_of({ZETA: j}), j * self.m, wvar=WV)

    def a_tilde(self):
        """Double z-antiderivative of a with vanishing z^0, z^1 slices."""
        a = self.mero("a")
        return LaurentInW(a.body.integrate(Z).integrate(Z), a.pole, wvar=WV)

    def __repr__(self):
        return "<AssociatedODE m=%d eps=%+d order=%d>" % (
            self.m, self.eps, self.order)


def _graph_exponent(M, order):
    phig = M.phi.rename({ZB: XIB, WB: ETAB}).truncate(order)
    return phig, phig.monomial_mul(ETAB, M.m - 1).scale(
        I if M.eps == 1 else -I)


def segre_graph(M, order=None):
    """Segre-variety graphs of M as a series in (z, xib, etab)."""
    order = M.order if order is None else order
    phig, X = _graph_exponent(M, order)
    E1 = exp_series(X, order + M.m)
    w = E1.monomial_mul(ETAB, 1)
    wz = X.diff(Z) * w
    # w'/w^m = eps*i * phi_z * exp((1-m) X): exact, no series division
    zeta = phig.diff(Z).scale(I if M.eps == 1 else -I) * \
        exp_series(X.scale(Fraction(1 - M.m)), order + M.m)
    return SegreGraph(M.m, M.eps, w, wz, zeta)


def eliminate(M, order=None):
    """Eliminate the Segre parameters to get the associated ODE.

    Solves w_p = w, w_p'/w_p^m = zeta for (xib, etab) as series in
    (z, w, zeta) and substitutes into w_p''.  The Jacobian of the solve is
    the Levi unit of an admissible surface, so the implicit step cannot
    degenerate for valid input.
    """
    order = M.order if order is None else order
    if order < min_order(M.m):
        raise OrderTooLowError(order, min_order(M.m))
    g = segre_graph(M, order)
    vars5 = (Z, WV, ZETA, XIB, ETAB)
    F1 = g.zeta.embed(vars5) - MultiSeries.variable(ZETA, vars5)
    F2 = g.w.embed(vars5) - MultiSeries.variable(WV, vars5)
    lam, om = solve_implicit([F1, F2], (Z, WV, ZETA), (XIB, ETAB), order)
    Phi = g.wzz.compose({XIB: lam, ETAB: om})
    E = AssociatedODE(M.m, M.eps, Phi, Phi.order)
    E.check_shape()
    return E


def closed_form_coeffs(M):
    """The eight coefficient series from the defining data directly.

    Independent of the elimination route: these come from matching powers
    in the identity satisfied along Segre graphs, with the sign mirrored
    through eps.  Each value is a series in w.
    """
    m, eps = M.m, M.eps
    ei = I if eps == 1 else -I

    def pkl(k, l):
        return M.phi_kl(k, l).rename({WB: WV})

    def wpow(k):
        return MultiSeries.monomial(ONE, (k,), (WV,), EXACT)

    p22, p23, p24 = pkl(2, 2), pkl(2, 3), pkl(2, 4)
    p32, p33, p34 = pkl(3, 2), pkl(3, 3), pkl(3, 4)
    p42, p43 = pkl(4, 2), pkl(4, 3)
    mm = GaussianRational.from_int(m - 1)

    a0 = wpow(m - 1) - p22.scale(2 * ei)
    a1 = -p32.scale(6 * ei)
    a2 = -p42.scale(12 * ei)
    b0 = -p23.scale(2)
    b1 = (-p33.scale(6) + (p22 * p22).scale(8)
          - (wpow(m - 1) * p22).scale(2 * ei * mm)
          + (wpow(m) * p22.diff(WV)).scale(2 * ei))
    b2 = (-p43.scale(12) + (p22 * p32).scale(36)
          - (wpow(m - 1) * p32).scale(6 * ei * mm)
          + (wpow(m) * p32.diff(WV)).scale(6 * ei))
    c0 = p24.scale(2 * ei)
    c1 = (p34.scale(6 * ei) - (p22 * p23).scale(20 * ei)
          + (wpow(m - 1) * p23).scale(4 - 4 * m)
          + (wpow(m) * p23.diff(WV)).scale(2))
    return {"a0": a0, "a1": a1, "a2": a2, "b0": b0, "b1": b1, "b2": b2,
            "c0": c0, "c1": c1}


def families_agree(f1, f2, min_window=0):
    """Exact coefficient-family equality on the common trusted window.

    Returns (ok, report) where report maps keys to the compared order or to
    the disagreeing difference.
    """
    ok = True
    report = {}
    for key in COEFF_KEYS:
        s1, s2 = f1[key], f2[key]
        k = min(s1.order, s2.order)
        if k < min_window:
            raise SegrefuchsError("window too small to compare %s" % key)
        d = s1.truncate(k) - s2.truncate(k)
        if d.is_zero():
            report[key] = ("agree", k)
        else:
            ok = False
            report[key] = ("differ", d)
    return ok, report


def verify_ode(M, E, order=None):
    """Residual of w'' - Phi(z, w, w'/w^m) along the Segre graphs of M.

    Zero modulo the trusted order iff E is the associated ODE of M.  The
    residual comes back in the graph variables (z, xib, etab).
    """
    order = min(M.order, E.order) if order is None else order
    g = segre_graph(M, order)
    sub = E.Phi.compose({WV: g.w.truncate(order),
                         ZETA: g.zeta.truncate(order)})
    return (g.wzz - sub).truncate(min(order, sub.order, g.wzz.order))
