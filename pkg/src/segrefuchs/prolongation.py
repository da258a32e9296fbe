"""Second prolongation, tangency residuals, and the derived linear systems.

Everything here exploits one fact: the tangency condition of a prolonged
field with the associated ODE is linear in the field.  A LinForm is a
formal sum  sum_tag  coefficient(z, w, zeta) * tag  where the tags name the
unknown functions (structural components P0, P1, Q0, Q1 and their
w-derivatives, or full jet derivatives of P and Q), and the coefficients
are Laurent-in-w series.  The tangency residual is computed once,
generically, and the 8x8 u-system, the Fuchsian 8x8 Y-system and the 12x12
complete system are all read off mechanically from its slices; none of the
four-equation reductions is hard-coded.  The classical four-line form of
the collected system is kept as a regression fixture and compared against
the mechanical collection symbolically.
"""

from fractions import Fraction

from .qfield import GaussianRational, ZERO, ONE, I
from .series import MultiSeries, LaurentInW, EXACT
from .segre import WV, ZETA
from .surfaces import Z
from .errors import NonFuchsianError, SegrefuchsError
from . import linalg


class VectorField:
    """Candidate infinitesimal automorphism P d/dz + Q d/dw."""

    __slots__ = ("P", "Q")

    def __init__(self, P, Q):
        self.P = P.embed((Z, WV)) if P.vars != (Z, WV) else P
        self.Q = Q.embed((Z, WV)) if Q.vars != (Z, WV) else Q

    def order(self):
        return min(self.P.order, self.Q.order)

    def truncate(self, order):
        return VectorField(self.P.truncate(order), self.Q.truncate(order))

    def scale(self, c):
        return VectorField(self.P.scale(c), self.Q.scale(c))

    def __add__(self, other):
        return VectorField(self.P + other.P, self.Q + other.Q)

    def __sub__(self, other):
        return VectorField(self.P - other.P, self.Q - other.Q)

    def is_zero(self):
        return self.P.is_zero() and self.Q.is_zero()

    def __repr__(self):
        return "<VectorField P=%r Q=%r>" % (self.P, self.Q)


class ProlongedField:
    """Second jet prolongation: coefficients of d/dw1 and d/dw2.

    q1 maps powers of w1 to series coefficients of Q^(1); q2 and q2_w2 hold
    the w2-free and w2-linear parts of Q^(2) the same way.
    """

    def __init__(self, field):
        P, Q = field.P, field.Q
        Pz, Pw = P.diff(Z), P.diff(WV)
        Qz, Qw = Q.diff(Z), Q.diff(WV)
        self.field = field
        self.q1 = {0: Qz, 1: Qw - Pz, 2: -Pw}
        self.q2 = {0: Qz.diff(Z),
                   1: Qz.diff(WV).scale(2) - Pz.diff(Z),
                   2: Qw.diff(WV) - Pz.diff(WV).scale(2),
                   3: -Pw.diff(WV)}
        self.q2_w2 = {0: Qw - Pz.scale(2), 1: -Pw.scale(3)}

    def __repr__(self):
        return "<ProlongedField of %r>" % (self.field,)


def prolong2(L):
    """Exact second prolongation of a vector field."""
    return ProlongedField(L)


# ---------------------------------------------------------------------------
# linear forms over named unknowns
# ---------------------------------------------------------------------------

CONST_TAG = ("1",)


class TagAlgebra:
    """Derivative rules for tags.  dz/dw return a tag or None."""

    def __init__(self, dz, dw, name=""):
        self.dz = dz
        self.dw = dw
        self.name = name


STRUCT_ALG = TagAlgebra(lambda t: None,
                        lambda t: (t[0], t[1] + 1),
                        name="structural")

CONST_ALG = TagAlgebra(lambda t: None, lambda t: None, name="concrete")


def _jet_dz(t):
    return (t[0], t[1] + 1, t[2])


def _jet_dw(t):
    return (t[0], t[1], t[2] + 1)


JET_ALG = TagAlgebra(_jet_dz, _jet_dw, name="jet")


class LinForm:
    """sum over tags of LaurentInW coefficients times the tagged unknown."""

    __slots__ = ("coef", "alg")

    def __init__(self, coef, alg):
        self.coef = {t: c for t, c in coef.items() if not c.is_zero()}
        self.alg = alg

    @staticmethod
    def from_tags(pairs, alg, vars=(Z, WV, ZETA)):
        coef = {}
        for t, c in pairs.items():
            if isinstance(c, MultiSeries):
                c = LaurentInW(c.embed(vars), 0, WV)
            elif not isinstance(c, LaurentInW):
                c = LaurentInW(MultiSeries.const(c, vars), 0, WV)
            coef[t] = c
        return LinForm(coef, alg)

    def __add__(self, other):
        coef = dict(self.coef)
        for t, c in other.coef.items():
            coef[t] = coef[t] + c if t in coef else c
        return LinForm(coef, self.alg)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LinForm({t: -c for t, c in self.coef.items()}, self.alg)

    def lmul(self, x):
        """Multiply every coefficient by a concrete series/Laurent/scalar."""
        if isinstance(x, (int, GaussianRational, Fraction)):
            return LinForm({t: c.scale(x) for t, c in self.coef.items()},
                           self.alg)
        return LinForm({t: c * x for t, c in self.coef.items()}, self.alg)

    def dz(self):
        coef = {}
        for t, c in self.coef.items():
            _acc(coef, t, c.diff(Z))
            dt = self.alg.dz(t)
            if dt is not None:
                _acc(coef, dt, c)
        return LinForm(coef, self.alg)

    def dw(self):
        coef = {}
        for t, c in self.coef.items():
            _acc(coef, t, c.diff(WV))
            dt = self.alg.dw(t)
            if dt is not None:
                _acc(coef, dt, c)
        return LinForm(coef, self.alg)

    def slice(self, powers):
        """Per-tag coefficient extraction (e.g. the zeta^2 z^1 slot)."""
        out = {}
        for t, c in self.coef.items():
            body = c.body.coeff_of(powers)
            out[t] = LaurentInW(body, c.pole, WV)
        return LinForm(out, self.alg)

    def div_w(self, k):
        return LinForm({t: c.div_w(k) for t, c in self.coef.items()},
                       self.alg)

    def tags(self):
        return sorted(self.coef)

    def get(self, t):
        return self.coef.get(t)

    def is_zero(self):
        return not self.coef

    def max_tag_order(self):
        return max((t[1] for t in self.coef), default=-1)

    def __repr__(self):
        return "LinForm{" + ", ".join(
            "%s: %r" % (t, c) for t, c in sorted(self.coef.items())) + "}"


def _acc(coef, t, c):
    if c.is_zero():
        return
    coef[t] = coef[t] + c if t in coef else c


# ---------------------------------------------------------------------------
# the generic tangency residual
# ---------------------------------------------------------------------------

def _phi_data(E):
    m = E.m
    Phi = E.Phi
    J = MultiSeries.monomial(ONE, _exps((Z, WV, ZETA), {WV: m, ZETA: 1}),
                             (Z, WV, ZETA))
    Phz = Phi.diff(Z)
    Phw = Phi.diff(WV)
    Phzeta = Phi.diff(ZETA)
    G = Phzeta.monomial_div(WV, m)
    # d/dw of Phi(z, w, w1/w^m) at fixed w1, i.e. the composite derivative
    H = Phw - Phzeta.monomial_div(WV, 1).monomial_mul(ZETA, 1).scale(m)
    return J, Phi, Phz, G, H


def _exps(vars, powers):
    return tuple(powers.get(v, 0) for v in vars)


def tangency_forms(Pf, Qf, E):
    """Tangency residual of the prolonged field, linear in the unknowns.

    Works over any tag algebra; coefficients live in (z, w, zeta) with the
    jet substitution w1 = zeta * w^m already performed.  The result is
    polynomial: the zeta^j coefficient carries the weight w^(j*m) relative
    to the four collected equations.
    """
    J, Phi, Phz, G, H = _phi_data(E)
    J2 = J * J
    J3 = J2 * J
    Pz, Pw = Pf.dz(), Pf.dw()
    Qz, Qw = Qf.dz(), Qf.dw()
    Pzz, Pzw, Pww = Pz.dz(), Pz.dw(), Pw.dw()
    Qzz, Qzw, Qww = Qz.dz(), Qz.dw(), Qw.dw()
    lhs = (Qzz
           + (Qzw.lmul(2) - Pzz).lmul(J)
           + (Qww - Pzw.lmul(2)).lmul(J2)
           - Pww.lmul(J3)
           + (Qw - Pz.lmul(2)).lmul(Phi)
           - Pw.lmul(J * Phi).lmul(3))
    q1 = Qz + (Qw - Pz).lmul(J) - Pw.lmul(J2)
    rhs = Pf.lmul(Phz) + Qf.lmul(H) + q1.lmul(G)
    return lhs - rhs


class TangencyResidual:
    """Residual as a polynomial in zeta with (z, w)-series coefficients."""

    def __init__(self, by_zeta, m):
        self.by_zeta = by_zeta
        self.m = m
        self.weights = {j: "w^%d" % (j * m) for j in by_zeta}

    def is_zero(self):
        return all(s.is_zero() for s in self.by_zeta.values())

    def leading(self):
        for j in sorted(self.by_zeta):
            if not self.by_zeta[j].is_zero():
                return j, self.by_zeta[j]
        return None

    def max_degree(self):
        return max(self.by_zeta)

    def __repr__(self):
        nz = {j: s for j, s in self.by_zeta.items() if not s.is_zero()}
        return "<TangencyResidual %s>" % (nz if nz else "0")


def tangency_residual(L, E):
    """Tangency residual of a concrete field against the associated ODE.

    Zero modulo the shared truncation iff L is a Lie point symmetry of the
    ODE (equivalently, lies in the complexified symmetry algebra).  The
    zeta^j slice equals w^(j*m) times the j-th collected equation, so the
    residual is polynomial; the weights are recorded on the result.
    """
    Pf = LinForm.from_tags({CONST_TAG: L.P.embed((Z, WV, ZETA))}, CONST_ALG)
    Qf = LinForm.from_tags({CONST_TAG: L.Q.embed((Z, WV, ZETA))}, CONST_ALG)
    T = tangency_forms(Pf, Qf, E)
    c = T.get(CONST_TAG)
    by_zeta = {}
    if c is not None:
        if c.pole_order() > 0:
            raise SegrefuchsError("tangency residual of a holomorphic field "
                                  "acquired a pole; ODE data is inconsistent")
        body = c.as_series()
        for j in range(body.var_degree(ZETA) + 1):
            by_zeta[j] = body.coeff_of({ZETA: j})
    return TangencyResidual(by_zeta or {0: MultiSeries.zero((Z, WV))}, E.m)


# ---------------------------------------------------------------------------
# symbolic collection of the four-equation system (regression fixture)
# ---------------------------------------------------------------------------

GEN_VARS = ("P", "Q", "Pz", "Pw", "Qz", "Qw", "Pzz", "Pzw", "Pww",
            "Qzz", "Qzw", "Qww", "a", "az", "aw", "b", "bz", "bw",
            "c", "cz", "cw", "w1")


def _gen(name):
    return MultiSeries.variable(name, GEN_VARS)


def collect_initial_system():
    """Mechanical w1^0..w1^3 collection of the tangency condition.

    Uses opaque symbols for the meromorphic coefficients a, b, c and their
    composite derivatives.  Returns (computed, fixture, diffs): computed[j]
    is the collected equation at w1^j in the canonical orientation
    lhs - rhs = 0; fixture holds the classical four-line form; diffs
    lists the per-line difference (all zero: the fixture is reproduced).
    """
    P, Q = _gen("P"), _gen("Q")
    Pz, Pw, Qz, Qw = _gen("Pz"), _gen("Pw"), _gen("Qz"), _gen("Qw")
    Pzz, Pzw, Pww = _gen("Pzz"), _gen("Pzw"), _gen("Pww")
    Qzz, Qzw, Qww = _gen("Qzz"), _gen("Qzw"), _gen("Qww")
    a, az, aw = _gen("a"), _gen("az"), _gen("aw")
    b, bz, bw = _gen("b"), _gen("bz"), _gen("bw")
    c, cz, cw = _gen("c"), _gen("cz"), _gen("cw")
    w1 = _gen("w1")

    Phi = a * w1 ** 2 + b * w1 ** 3 + c * w1 ** 4
    Phiz = az * w1 ** 2 + bz * w1 ** 3 + cz * w1 ** 4
    Phiw = aw * w1 ** 2 + bw * w1 ** 3 + cw * w1 ** 4
    Phiw1 = a.scale(2) * w1 + b.scale(3) * w1 ** 2 + c.scale(4) * w1 ** 3
    Q1 = Qz + (Qw - Pz) * w1 - Pw * w1 ** 2
    Q2 = (Qzz + (Qzw.scale(2) - Pzz) * w1 + (Qww - Pzw.scale(2)) * w1 ** 2
          - Pww * w1 ** 3 + (Qw - Pz.scale(2)) * Phi - Pw.scale(3) * w1 * Phi)
    T = Q2 - P * Phiz - Q * Phiw - Q1 * Phiw1

    computed = [T.coeff_of({"w1": j}) for j in range(4)]
    # fixture lines, lhs - rhs; the third keeps its split a-terms
    fixture = [
        Qzz,
        Qzw.scale(2) - Pzz - a.scale(2) * Qz,
        (Qww - Pzw.scale(2))
        - (a * (-Qw + Pz.scale(2)) + az * P + aw * Q + b.scale(3) * Qz
           + a.scale(2) * (Qw - Pz)),
        Pww - (b * (Qw - Pz.scale(2)) - a * Pw - bz * P - bw * Q
               - c.scale(4) * Qz + b.scale(3) * (Pz - Qw)),
    ]
    # orientation of the mechanical collection: w1^3 slice is -(line 4)
    oriented = [computed[0], computed[1], computed[2], -computed[3]]
    diffs = [o - f for o, f in zip(oriented, fixture)]
    return oriented, fixture, diffs


# ---------------------------------------------------------------------------
# structural reduction and the 8x8 systems
# ---------------------------------------------------------------------------

def structural_reduce(E):
    """The shape data of the structural solve.

    Returns the Laurent value a_tilde (double z-antiderivative of the
    meromorphic a, vanishing to second order in z) plus the parametrization
    metadata: Q = Q0 + Q1 z and P = P0 + P1 z + Q1' z^2 - 2 Q1 a_tilde.
    """
    at = E.a_tilde()
    return {"a_tilde": at,
            "Q_shape": "Q0(w) + Q1(w) z",
            "P_shape": "P0(w) + P1(w) z + Q1'(w) z^2 - 2 Q1(w) a_tilde(z,w)"}


def reconstruct_field(E, P0, P1, Q0, Q1):
    """Build (P, Q) from structural components (series in w).

    P may acquire a pole through a_tilde when the surface is not Fuchsian
    enough; the caller receives Laurent values and decides.
    """
    at = E.a_tilde()
    zvar = MultiSeries.variable(Z, (Z, WV))
    P0e, P1e, Q0e, Q1e = (s.embed((Z, WV)) for s in (P0, P1, Q0, Q1))
    Q = Q0e + Q1e * zvar
    Pser = P0e + P1e * zvar + Q1e.diff(WV) * zvar * zvar
    Plaur = LaurentInW(Pser, 0, WV) - at * LaurentInW(Q1e.scale(2), 0, WV)
    return Plaur, LaurentInW(Q, 0, WV)


class LinearODESystem:
    """n x n first-order system du/dw = C(w) u with Laurent entries."""

    def __init__(self, entries, unknown, order=None):
        self.n = len(entries)
        self.entries = entries
        self.unknown = unknown
        self.pole_order = max((e.pole_order() for row in entries
                               for e in row), default=0)
        if order is None:
            order = min((e.body.order for row in entries for e in row
                         if not e.is_zero()), default=EXACT)
        self.order = order

    def residual(self, u):
        """du/dw - C u for a candidate vector of w-series (Laurent ok)."""
        out = []
        for i in range(self.n):
            acc = (u[i] if isinstance(u[i], LaurentInW)
                   else LaurentInW(u[i], 0, WV)).diff(WV)
            for j in range(self.n):
                if not self.entries[i][j].is_zero():
                    uj = (u[j] if isinstance(u[j], LaurentInW)
                          else LaurentInW(u[j], 0, WV))
                    acc = acc - self.entries[i][j] * uj
            out.append(acc)
        return out

    def eval_matrix(self, w):
        return [[e.eval_complex({WV: w}) if not e.is_zero() else 0j
                 for e in row] for row in self.entries]

    def fuchsian_A(self):
        """For pole order <= 1: the holomorphic matrix A with C = A/w."""
        if self.pole_order > 1:
            raise NonFuchsianError("system has pole order %d > 1"
                                   % self.pole_order)
        return [[e.mul_w(1).as_series() for e in row] for row in self.entries]

    def __repr__(self):
        return "<LinearODESystem n=%d pole<=%d unknown=%s>" % (
            self.n, self.pole_order, self.unknown)


def _zero_laurent():
    return LaurentInW(MultiSeries.zero((WV,)), 0, WV)


def _invert_monomial(L):
    """Inverse of a Laurent value that is a single monomial in w."""
    terms = list(L.body.terms.items())
    if len(terms) != 1:
        raise SegrefuchsError("pivot is not a monomial: %r" % (L,))
    e, c = terms[0]
    iw = L.body.vars.index(WV)
    if any(x and i != iw for i, x in enumerate(e)):
        raise SegrefuchsError("pivot involves variables besides w: %r" % (L,))
    k = e[iw] - L.pole   # actual w-exponent
    inv_c = c.inverse()
    if k >= 0:
        return LaurentInW(MultiSeries.const(inv_c, (WV,)), k, WV)
    return LaurentInW(MultiSeries.monomial(inv_c, (-k,), (WV,)), 0, WV)


def _solve_slot(eq, target, allowed):
    """Express the target tag from one linear equation slot.

    eq is a LinForm in w-Laurent coefficients; returns dict tag -> Laurent
    with target = sum coeff * tag over the remaining tags.
    """
    piv = eq.get(target)
    if piv is None or piv.is_zero():
        raise SegrefuchsError("slot lacks the pivot %s" % (target,))
    inv = _invert_monomial(piv)
    out = {}
    for t, c in eq.coef.items():
        if t == target:
            continue
        if t not in allowed:
            raise SegrefuchsError("unexpected tag %s in slot for %s"
                                  % (t, (target,)))
        out[t] = -(inv * c)
    return out


U_TAGS = [("P0", 0), ("P1", 0), ("P0", 1), ("P1", 1),
          ("Q0", 0), ("Q1", 0), ("Q0", 1), ("Q1", 1)]

Y_TAGS = [("P0", 0), ("P1", 0), ("R0", 0), ("R1", 0),
          ("P0", 1), ("P1", 1), ("R0", 1), ("R1", 1)]


def _struct_tangency(E, with_w_factor):
    """Tagged tangency for the structurally reduced field.

    with_w_factor=False: unknowns (P0, P1, Q0, Q1) -> the u-system shape.
    with_w_factor=True: Q = w R with unknowns (P0, P1, R0, R1).
    """
    V3 = (Z, WV, ZETA)
    at = E.a_tilde()
    at3 = LaurentInW(at.body.embed(V3), at.pole, WV)
    zs = MultiSeries.variable(Z, V3)
    one = MultiSeries.const(ONE, V3)
    wser = MultiSeries.variable(WV, V3)
    if not with_w_factor:
        Pf = LinForm.from_tags({("P0", 0): one, ("P1", 0): zs,
                                ("Q1", 1): zs * zs}, STRUCT_ALG)
        Pf = Pf + LinForm({("Q1", 0): at3.scale(-2)}, STRUCT_ALG)
        Qf = LinForm.from_tags({("Q0", 0): one, ("Q1", 0): zs}, STRUCT_ALG)
    else:
        Pf = LinForm.from_tags({("P0", 0): one, ("P1", 0): zs,
                                ("R1", 1): wser * zs * zs}, STRUCT_ALG)
        Pf = Pf + LinForm(
            {("R1", 0): (LaurentInW(zs * zs, 0, WV)
                         - at3.scale(2) * LaurentInW(wser, 0, WV))},
            STRUCT_ALG)
        Qf = LinForm.from_tags({("R0", 0): wser, ("R1", 0): wser * zs},
                               STRUCT_ALG)
    return tangency_forms(Pf, Qf, E)


_SLOT_TARGETS = [((2, 0), 0), ((2, 1), 1), ((3, 0), 2), ((3, 1), 3)]


def _second_derivative_exprs(E, with_w_factor):
    """Solve the four z^0/z^1 slots for the second-derivative tags."""
    T = _struct_tangency(E, with_w_factor)
    names = ("Q0", "Q1", "P0", "P1") if not with_w_factor else \
            ("R0", "R1", "P0", "P1")
    base = Y_TAGS if with_w_factor else U_TAGS
    allowed = set(base)
    exprs = {}
    for (jz, kz), ni in _SLOT_TARGETS:
        eq = T.slice({ZETA: jz, Z: kz})
        target = (names[ni], 2)
        exprs[target] = _solve_slot(eq, target, allowed)
    return exprs


def assemble_u_system(E):
    """The 8x8 system du/dw = C(w) u for u = (P0,P1,P0',P1',Q0,Q1,Q0',Q1').

    Mechanically derived: rows 3-4 of the collected system at z-degrees 0
    and 1 under the structural substitution.  Pole order is at most 3m.
    """
    exprs = _second_derivative_exprs(E, with_w_factor=False)
    col = {t: i for i, t in enumerate(U_TAGS)}
    C = [[_zero_laurent() for _ in range(8)] for _ in range(8)]
    C[0][2] = _one_laurent()
    C[1][3] = _one_laurent()
    C[4][6] = _one_laurent()
    C[5][7] = _one_laurent()
    rowmap = {("P0", 2): 2, ("P1", 2): 3, ("Q0", 2): 6, ("Q1", 2): 7}
    for target, expr in exprs.items():
        i = rowmap[target]
        for t, c in expr.items():
            C[i][col[t]] = C[i][col[t]] + c
    sys = LinearODESystem(C, unknown="(P0,P1,P0',P1',Q0,Q1,Q0',Q1')")
    if sys.pole_order > 3 * E.m:
        raise SegrefuchsError("u-system pole order %d exceeds 3m = %d"
                              % (sys.pole_order, 3 * E.m))
    return sys


def _one_laurent():
    return LaurentInW(MultiSeries.const(ONE, (WV,)), 0, WV)


def assemble_Y_system(E, report=None):
    """The Fuchsian 8x8 system dY/dw = (1/w) A(w) Y, A holomorphic.

    Y = (P0, P1, R0, R1, wP0', wP1', wR0', wR1') with Q = w R.  On a
    non-Fuchsian surface some entry of A acquires a pole; the structured
    error then names that entry and, when a classifier report is supplied,
    its first violated ledger row.
    """
    from .fuchs import NON_FUCHSIAN
    exprs = _second_derivative_exprs(E, with_w_factor=True)
    names = ["P0", "P1", "R0", "R1"]
    pos = {n: i for i, n in enumerate(names)}
    A = [[MultiSeries.zero((WV,)) for _ in range(8)] for _ in range(8)]
    for i in range(4):
        A[i][4 + i] = MultiSeries.const(ONE, (WV,))

    def note_violation(i, j, value):
        row = None
        if report is not None and report.verdict == NON_FUCHSIAN:
            w = report.witnesses()
            row = w[0].as_dict() if w else None
        raise NonFuchsianError(
            "Y-system entry A[%d][%d] has pole order %d; the Fuchsian "
            "grouping fails" % (i, j, value.pole_order()),
            ledger_row=row, entry=(i, j), pole=value.pole_order())

    for n in names:
        i = 4 + pos[n]
        A[i][i] = A[i][i] + MultiSeries.const(ONE, (WV,))
        for t, c in exprs[(n, 2)].items():
            base, d = t
            if d == 0:
                entry = c.mul_w(2)
                j = pos[base]
            else:
                entry = c.mul_w(1)
                j = 4 + pos[base]
            if entry.pole_order() > 0:
                note_violation(i, j, entry)
            A[i][j] = A[i][j] + entry.as_series().project((WV,))
    entries = [[LaurentInW(A[i][j], 1, WV) for j in range(8)]
               for i in range(8)]
    sys = LinearODESystem(entries, unknown="(P0,P1,R0,R1,wP0',wP1',wR0',wR1')")
    if sys.pole_order > 1:
        raise NonFuchsianError("assembled Y-system is not Fuchsian",
                               entry=None, pole=sys.pole_order)
    return sys


# ---------------------------------------------------------------------------
# the complete 12x12 system
# ---------------------------------------------------------------------------

Y12_COMPONENTS = [("P", 0, 0), ("Q", 0, 0), ("P", 1, 0), ("P", 0, 1),
                  ("Q", 1, 0), ("Q", 0, 1), ("P", 2, 0), ("P", 1, 1),
                  ("P", 0, 2), ("Q", 2, 0), ("Q", 1, 1), ("Q", 0, 2)]

Y12_NAMES = ["P", "Q", "Pz", "Pw", "Qz", "Qw",
             "Pzz", "Pzw", "Pww", "Qzz", "Qzw", "Qww"]

_THIRD = [("P", 3, 0), ("P", 2, 1), ("P", 1, 2), ("P", 0, 3),
          ("Q", 3, 0), ("Q", 2, 1), ("Q", 1, 2), ("Q", 0, 3)]


class TwelveSystem:
    """dy/dz = A y, dy/dw = B y for the full second-jet vector y."""

    def __init__(self, A, B, m):
        self.A = A
        self.B = B
        self.m = m
        self.n = 12
        self.pole_order = max(e.pole_order() for M in (A, B)
                              for row in M for e in row)

    def vector_of(self, L):
        """The 12 jet components of a concrete field, as (z,w)-series."""
        P, Q = L.P, L.Q
        out = []
        for name, i, j in Y12_COMPONENTS:
            s = P if name == "P" else Q
            for _ in range(i):
                s = s.diff(Z)
            for _ in range(j):
                s = s.diff(WV)
            out.append(s)
        return out

    def residuals(self, y):
        """(d/dz y - A y, d/dw y - B y) for a 12-vector of (z,w)-series."""
        yl = [LaurentInW(s, 0, WV) for s in y]
        rz, rw = [], []
        for i in range(12):
            az = yl[i].diff(Z)
            aw = yl[i].diff(WV)
            for j in range(12):
                if not self.A[i][j].is_zero():
                    az = az - self.A[i][j] * yl[j]
                if not self.B[i][j].is_zero():
                    aw = aw - self.B[i][j] * yl[j]
            rz.append(az)
            rw.append(aw)
        return rz, rw


def initial_system(E):
    """The four collected equations of E as linear forms over jet tags.

    Line j is the zeta^j coefficient of the tangency residual divided by
    its w^(j*m) weight: coefficients are Laurent in w, built from the
    meromorphic a, b, c data of E.  Line 0 is Q_zz = 0.
    """
    Pf = LinForm.from_tags(
        {("P", 0, 0): MultiSeries.const(ONE, (Z, WV, ZETA))}, JET_ALG)
    Qf = LinForm.from_tags(
        {("Q", 0, 0): MultiSeries.const(ONE, (Z, WV, ZETA))}, JET_ALG)
    T = tangency_forms(Pf, Qf, E)
    return [T.slice({ZETA: j}).div_w(j * E.m) for j in range(4)]


def assemble_twelve_system(E):
    """Differentiate the four collected equations once in z and w and solve
    for the complete set of third-order derivatives; read off A and B.

    Every entry stays meromorphic with pole order at most 3m+1.
    """
    lines = initial_system(E)
    eqs = []
    for ln in lines:
        eqs.append(ln.dz())
        eqs.append(ln.dw())
    # linear solve for the third-order tags; their coefficient matrix is
    # constant, so the elimination happens over plain rationals
    M = []
    for eq in eqs:
        row = []
        for t in _THIRD:
            c = eq.get(t)
            if c is None:
                row.append(ZERO)
            else:
                cc = _constant_of(c)
                row.append(cc)
        M.append(row)
    Minv = _invert_const_matrix(M)
    rests = []
    for eq in eqs:
        rest = LinForm({t: c for t, c in eq.coef.items()
                        if t not in set(_THIRD)}, JET_ALG)
        rests.append(rest)
    solved = {}
    for i, t in enumerate(_THIRD):
        expr = LinForm({}, JET_ALG)
        for e in range(8):
            if Minv[i][e].is_zero():
                continue
            expr = expr - rests[e].lmul(Minv[i][e])
        solved[t] = expr
        bad = [u for u in expr.coef if u not in set(Y12_COMPONENTS)]
        if bad:
            raise SegrefuchsError("third-order solve left tags %s" % bad)
    comp_index = {t: i for i, t in enumerate(Y12_COMPONENTS)}

    def build(direction):
        step = _jet_dz if direction == "z" else _jet_dw
        rows = []
        for t in Y12_COMPONENTS:
            dt = step(t)
            row = [_zero_zw() for _ in range(12)]
            if dt in comp_index:
                row[comp_index[dt]] = _one_zw()
            else:
                for u, c in solved[dt].coef.items():
                    row[comp_index[u]] = row[comp_index[u]] + c
            rows.append(row)
        return rows

    A = build("z")
    B = build("w")
    sys = TwelveSystem(A, B, E.m)
    if sys.pole_order > 3 * E.m + 1:
        raise SegrefuchsError("12x12 entries reach pole order %d > 3m+1"
                              % sys.pole_order)
    return sys


def _constant_of(L):
    body = L.body
    if body.is_zero():
        return ZERO
    if L.pole_order() > 0 or body.max_degree() > 0:
        raise SegrefuchsError("third-order coefficient is not constant: %r"
                              % (L,))
    return body.constant_term()


def _invert_const_matrix(M):
    n = len(M)
    aug = [row[:] + linalg.identity(n)[i] for i, row in enumerate(M)]
    R, piv = linalg.rref(aug)
    if piv != list(range(n)):
        raise SegrefuchsError("third-order block is singular")
    return [row[n:] for row in R]


def _zero_zw():
    return LaurentInW(MultiSeries.zero((Z, WV)), 0, WV)


def _one_zw():
    return LaurentInW(MultiSeries.const(ONE, (Z, WV)), 0, WV)
