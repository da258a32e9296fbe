"""Frobenius-type solving of Fuchsian systems and the symmetry pipeline.

holomorphic_solutions runs the power-series recurrence
    (k I - A0) y_k = sum_{j>=1} A_j y_{k-j}
keeping every resonant degree of freedom as an exact symbolic parameter;
inconsistent resonant steps cut the parameter space (those branches would
need a log term and are reported, never materialized).  formal_symmetries
feeds the holomorphic basis of the Fuchsian Y-system through the structural
reconstruction and keeps exactly the fields whose full tangency residual
vanishes; the filter, not the recurrence, is the source of truth.
"""

from fractions import Fraction

from .qfield import GaussianRational, ZERO, ONE
from .series import MultiSeries, EXACT
from .segre import WV, eliminate
from .surfaces import Z, min_order
from .errors import NonFuchsianError, SegrefuchsError, OrderTooLowError
from .prolongation import (VectorField, assemble_Y_system,
                           reconstruct_field, tangency_residual)
from .fuchs import check_fuchsian_complex, check_fuchsian_ode, FUCHSIAN
from . import linalg


class ResidueSpectrum:
    """Exact spectral data of the residue matrix A(0)."""

    def __init__(self, charpoly, rational, residual_factor, truncated_search):
        self.charpoly = charpoly            # coefficients, low degree first
        self.rational = rational            # dict Fraction -> multiplicity
        self.residual_factor = residual_factor  # unfactored part or None
        self.truncated_search = truncated_search
        self.resonances = []
        eigs = sorted(self.rational)
        for i, x in enumerate(eigs):
            for y in eigs[i + 1:]:
                d = y - x
                if d != 0 and d.denominator == 1:
                    self.resonances.append((x, y))

    def integer_eigenvalues(self):
        return sorted(x for x in self.rational if x.denominator == 1)

    def as_dict(self):
        return {
            "rational_eigenvalues": {str(k): v
                                     for k, v in sorted(self.rational.items())},
            "resonance_pairs": [[str(a), str(b)] for a, b in self.resonances],
            "non_rational_factor_degree":
                (len(self.residual_factor) - 1 if self.residual_factor
                 else 0),
            "root_search_truncated": self.truncated_search,
        }

    def __repr__(self):
        return "<ResidueSpectrum eig=%s resonances=%s>" % (
            dict(self.rational), self.resonances)


def _divisors(n, cap=10 ** 12):
    n = abs(n)
    if n == 0:
        return [], False
    if n > cap:
        # fall back to small divisors only; flagged as truncated
        out = [d for d in range(1, 1000) if n % d == 0]
        return out, True
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out)), False


def _gaussian_int_content(c):
    """gcd of the integer components of a coefficient (must be Gaussian)."""
    from math import gcd
    return gcd(gcd(abs(c.a), abs(c.b)), gcd(abs(c.c), abs(c.d)))


def residue_spectrum(S):
    """Characteristic polynomial of A(0) with exact rational-root data."""
    if S.pole_order > 1:
        raise NonFuchsianError("residue spectrum needs pole order <= 1, "
                               "got %d" % S.pole_order)
    A = S.fuchsian_A()
    A0 = [[s.coefficient((0,) * len(s.vars)) for s in row] for row in A]
    cp = linalg.charpoly(A0)
    rational = {}
    # peel zero roots
    work = cp[:]
    while len(work) > 1 and work[0].is_zero():
        rational[Fraction(0)] = rational.get(Fraction(0), 0) + 1
        work = work[1:]
    truncated = False
    progress = True
    while progress and len(work) > 1:
        progress = False
        from math import lcm
        den = 1
        for c in work:
            den = lcm(den, c.q)
        cleared = [c * GaussianRational.from_int(den) for c in work]
        p_div, t1 = _divisors(_gaussian_int_content(cleared[0]))
        q_div, t2 = _divisors(_gaussian_int_content(cleared[-1]))
        truncated = truncated or t1 or t2
        found = None
        for q in q_div:
            for p in p_div:
                if _gcd_int(p, q) != 1:
                    continue
                for sign in (1, -1):
                    r = GaussianRational.of(Fraction(sign * p, q))
                    if linalg.poly_eval(work, r).is_zero():
                        found = Fraction(sign * p, q)
                        break
                if found:
                    break
            if found:
                break
        if found is not None:
            rational[found] = rational.get(found, 0) + 1
            work, rem = linalg.poly_divmod_linear(
                work, GaussianRational.of(found))
            if not rem.is_zero():
                raise SegrefuchsError("deflation left a remainder")
            progress = True
    residual = work if len(work) > 1 else None
    return ResidueSpectrum(cp, rational, residual, truncated)


def _gcd_int(a, b):
    from math import gcd
    return gcd(abs(a), abs(b))


class FrobeniusBasis:
    """Holomorphic solution family plus non-integer exponent branches."""

    def __init__(self, solutions, dimension, log_obstructions, order,
                 branches=()):
        self.solutions = solutions          # list of vectors of w-series
        self.dimension = dimension
        self.log_obstructions = log_obstructions
        self.order = order
        self.branches = list(branches)      # (lambda0, solutions) pairs

    def __repr__(self):
        return "<FrobeniusBasis dim=%d order=%d log_obstructions=%s>" % (
            self.dimension, self.order, self.log_obstructions)


def _matrix_coeffs(A, order):
    """w-coefficient matrices A_0..A_order of a holomorphic matrix."""
    for row in A:
        for s in row:
            for v in s.vars:
                if v != WV and s.var_degree(v) > 0:
                    raise SegrefuchsError("matrix entry depends on %r; the "
                                          "recurrence needs w-only data" % v)
    out = []
    for k in range(order + 1):
        out.append([[s.coefficient((k,) if s.vars == (WV,) else
                                   tuple(k if v == WV else 0
                                         for v in s.vars))
                     for s in row] for row in A])
    return out


def _param_recurrence(A_mats, n, order, base_shift=None):
    """Run the Frobenius recurrence with exact symbolic parameters.

    base_shift: optional rational lambda0; the step matrix becomes
    ((lambda0 + k) I - A0).  Returns (M_list, params, obstructions): M_list
    holds n x params coefficient matrices per degree.
    """
    A0 = A_mats[0]
    Ms = []
    params = 0
    obstructions = []
    for k in range(order + 1):
        lam = GaussianRational.of(Fraction(k) + (base_shift or 0))
        L = [[(lam if i == j else ZERO) - A0[i][j] for j in range(n)]
             for i in range(n)]
        rhs = [[ZERO] * params for _ in range(n)]
        for j in range(1, min(k, len(A_mats) - 1) + 1):
            Aj = A_mats[j]
            Mk = Ms[k - j]
            for i in range(n):
                for t in range(n):
                    a = Aj[i][t]
                    if a.is_zero():
                        continue
                    row = Mk[t]
                    for p in range(params):
                        if not row[p].is_zero():
                            rhs[i][p] = rhs[i][p] + a * row[p]
        X, kern, constraints = linalg.solve_with_rhs_matrix(L, rhs)
        if constraints:
            K = linalg.kernel_basis(constraints)
            newp = len(K)
            obstructions.append((k, params - newp))
            Ms = [_apply_params(M, K, params) for M in Ms]
            rhs = _apply_params(rhs, K, params)
            params = newp
            X, kern, constraints = linalg.solve_with_rhs_matrix(L, rhs)
            if constraints:
                raise SegrefuchsError("parameter reduction did not resolve "
                                      "the resonant step at k=%d" % k)
        if kern:
            X = [X[i] + [v[i] for v in kern] for i in range(n)]
            Ms = [[row + [ZERO] * len(kern) for row in M] for M in Ms]
            params += len(kern)
        Ms.append(X)
    return Ms, params, obstructions


def _apply_params(M, K, params):
    """Right-multiply an n x params matrix by the params x r kernel basis.

    K lists the new-parameter directions as length-params vectors.
    """
    return [[_dot(row, k) for k in K] for row in M]


def _dot(xs, ys):
    s = ZERO
    for x, y in zip(xs, ys):
        if not x.is_zero() and not y.is_zero():
            s = s + x * y
    return s


def holomorphic_solutions(S, order=None):
    """Basis of power-series solutions of a Fuchsian system.

    Resonant steps keep their free parameters symbolic; steps with no
    consistent choice are excluded from the holomorphic family and recorded
    as log obstructions.  The returned dimension is the number of exact
    power-series solutions at the working order.
    """
    if S.pole_order > 1:
        raise NonFuchsianError("holomorphic_solutions needs a Fuchsian "
                               "system, pole order %d given" % S.pole_order)
    A = S.fuchsian_A()
    avail = min((s.order for row in A for s in row if not s.is_zero()),
                default=EXACT)
    order = avail if order is None else min(order, avail)
    if order >= EXACT:
        order = 16
    A_mats = _matrix_coeffs(A, order)
    Ms, params, obstructions = _param_recurrence(A_mats, S.n, order)
    sols = []
    for p in range(params):
        vec = []
        for i in range(S.n):
            terms = {}
            for k in range(order + 1):
                c = Ms[k][i][p]
                if not c.is_zero():
                    terms[(k,)] = c
            vec.append(MultiSeries((WV,), order, terms, _clean=False))
        sols.append(vec)
    basis = FrobeniusBasis(sols, params, obstructions, order)
    _assert_independent(basis, S.n)
    return basis


def frobenius_basis(S, order=None):
    """Holomorphic family plus materialized non-integer rational branches.

    For every congruence class (mod 1) of rational eigenvalues other than
    the integers, the recurrence is run from the smallest class member
    lambda0, producing formal solutions H(w) w^lambda0 per the Fuchsian
    fundamental-system shape.
    """
    hol = holomorphic_solutions(S, order)
    spec = residue_spectrum(S)
    classes = {}
    for lam in spec.rational:
        if lam.denominator == 1:
            continue
        frac = lam - int(lam // 1)
        classes.setdefault(frac, []).append(lam)
    branches = []
    A = S.fuchsian_A()
    A_mats = _matrix_coeffs(A, hol.order)
    for frac, lams in sorted(classes.items()):
        lam0 = min(lams)
        Ms, params, _ = _param_recurrence(A_mats, S.n, hol.order,
                                          base_shift=lam0)
        sols = []
        for p in range(params):
            vec = []
            for i in range(S.n):
                terms = {}
                for k in range(hol.order + 1):
                    c = Ms[k][i][p]
                    if not c.is_zero():
                        terms[(k,)] = c
                vec.append(MultiSeries((WV,), hol.order, terms, _clean=False))
            sols.append(vec)
        if sols:
            branches.append((lam0, sols))
    return FrobeniusBasis(hol.solutions, hol.dimension,
                          hol.log_obstructions, hol.order, branches)


def _assert_independent(basis, n):
    if basis.dimension == 0:
        return
    rows = []
    for vec in basis.solutions:
        row = []
        for s in vec:
            for k in range(basis.order + 1):
                row.append(s.coefficient((k,)))
        rows.append(row)
    if linalg.rank(rows) != basis.dimension:
        raise SegrefuchsError("holomorphic solutions are linearly dependent "
                              "at the working order")


# ---------------------------------------------------------------------------
# symmetry pipeline
# ---------------------------------------------------------------------------

class SymmetryBasis:
    """Exact basis of the complex Lie-symmetry space with certificates."""

    def __init__(self, fields, certificates, diagnostics, E, dropped,
                 log_obstructions, order):
        self.fields = fields
        self.certificates = certificates
        self.diagnostics = diagnostics
        self.ode = E
        self.dropped = dropped            # candidates failing the filter
        self.log_obstructions = log_obstructions
        self.order = order

    @property
    def dimension(self):
        return len(self.fields)

    def bracket_closure_defect(self):
        """Max off-span rank increase over all basis pairs (0 = closed)."""
        if not self.fields:
            return 0
        order = max(self.order - 1, 1)
        span = [_field_row(f, order) for f in self.fields]
        base_rank = linalg.rank(span)
        worst = 0
        for i in range(len(self.fields)):
            for j in range(i + 1, len(self.fields)):
                br = lie_bracket(self.fields[i], self.fields[j])
                rows = span + [_field_row(br, order)]
                worst = max(worst, linalg.rank(rows) - base_rank)
        return worst

    def __repr__(self):
        return "<SymmetryBasis dim=%d order=%d>" % (self.dimension,
                                                    self.order)


def _field_row(L, order):
    row = []
    for s in (L.P.truncate(order), L.Q.truncate(order)):
        for kz in range(order + 1):
            for kw in range(order + 1 - kz):
                row.append(s.coefficient(
                    tuple(kz if v == Z else kw for v in s.vars)))
    return row


def lie_bracket(L1, L2):
    """[L1, L2] with components truncated to the shared order minus one."""
    def apply(L, f):
        return L.P * f.diff(Z) + L.Q * f.diff(WV)

    P = apply(L1, L2.P) - apply(L2, L1.P)
    Q = apply(L1, L2.Q) - apply(L2, L1.Q)
    return VectorField(P, Q)


def formal_symmetries(M, order=None):
    """Exact basis of formal infinitesimal symmetries of a Fuchsian surface.

    Pipeline: classifier gate, elimination, Fuchsian Y-system, holomorphic
    Frobenius solutions, structural reconstruction, then the exact filters:
    a candidate stays only if its P-component is pole-free, its full
    tangency residual vanishes, and its 12-component jet vector satisfies
    the complete first-order system.  The jet filter probes the collected
    equations several w-degrees deeper than the direct residual (through
    the high-pole matrix entries), so shallow truncation windows cannot
    smuggle spurious candidates through.  Returns the complex symmetry
    space.
    """
    from .prolongation import assemble_twelve_system
    order = M.order if order is None else order
    if order < min_order(M.m):
        raise OrderTooLowError(order, min_order(M.m))
    rep = check_fuchsian_complex(M)
    if rep.verdict != FUCHSIAN:
        w = rep.witnesses()
        raise NonFuchsianError(
            "surface is %s; symmetry solving needs the Fuchsian bounds"
            % rep.verdict,
            ledger_row=w[0].as_dict() if w else None)
    E = eliminate(M, order)
    ode_rep = check_fuchsian_ode(E)
    Y = assemble_Y_system(E, ode_rep)
    basis = holomorphic_solutions(Y)
    T12 = assemble_twelve_system(E)
    fields, certs, dropped = [], [], []
    for vec in basis.solutions:
        P0, P1, R0, R1 = vec[0], vec[1], vec[2], vec[3]
        Q0 = R0.monomial_mul(WV, 1)
        Q1 = R1.monomial_mul(WV, 1)
        Pl, Ql = reconstruct_field(E, P0, P1, Q0, Q1)
        if Pl.pole_order() > 0:
            dropped.append(("pole", Pl))
            continue
        L = VectorField(Pl.as_series(), Ql.as_series())
        res = tangency_residual(L, E)
        if not res.is_zero():
            dropped.append(("residual", res))
            continue
        rz, rw = T12.residuals(T12.vector_of(L))
        if any(not r.body.is_zero() for r in rz + rw):
            dropped.append(("jet-system", L))
            continue
        fields.append(L)
        certs.append(res)
    diags = [convergence_diagnostic(L) for L in fields]
    return SymmetryBasis(fields, certs, diags, E, dropped,
                         basis.log_obstructions, basis.order)


# ---------------------------------------------------------------------------
# convergence diagnostics
# ---------------------------------------------------------------------------

class ConvergenceReport:
    def __init__(self, norms, ratios, verdict, bound, window):
        self.norms = norms
        self.ratios = ratios
        self.verdict = verdict
        self.bound = bound
        self.window = window

    def as_dict(self):
        return {"verdict": self.verdict, "bound": self.bound,
                "window": list(self.window),
                "ratios": {k: v for k, v in self.ratios.items()}}

    def __repr__(self):
        return "<ConvergenceReport %s ratios=%s>" % (self.verdict,
                                                     self.ratios)


def convergence_diagnostic(y, bound=10.0, window=None):
    """Per-degree coefficient-norm ratio profile with a growth verdict.

    y is a vector of w-series, a single series, or a VectorField; norms are
    exact coefficients compared through float magnitudes (report only).
    Fuchsian theory promises growth-bounded profiles for genuine symmetry
    series; a factorial-type series trips the bound.
    """
    if isinstance(y, VectorField):
        series = [y.P, y.Q]
        order = y.order()
    elif isinstance(y, MultiSeries):
        series = [y]
        order = y.order
    else:
        series = list(y)
        order = min(s.order for s in series)
    if order >= EXACT:
        order = max(max(s.max_degree() for s in series), 8)
    if window is None:
        window = (5, order - 1)
    norms = {}
    for k in range(order + 1):
        m = 0.0
        for s in series:
            for e, c in s.terms.items():
                if sum(e) == k:
                    m = max(m, c.magnitude())
        norms[k] = m
    nonzero = [k for k, v in norms.items() if v > 0.0]
    if len(nonzero) < 2:
        return ConvergenceReport(norms, {}, "inconclusive", bound, window)
    lo, hi = window
    ratios = {}
    for k in range(max(lo, 0), min(hi, order - 1) + 1):
        if norms.get(k, 0.0) > 0.0 and norms.get(k + 1) is not None:
            if norms[k + 1] == 0.0:
                continue
            ratios[k] = norms[k + 1] / norms[k]
    if not ratios:
        if max(nonzero) < lo:
            return ConvergenceReport(norms, {}, "growth-bounded", bound,
                                     window)
        return ConvergenceReport(norms, {}, "inconclusive", bound, window)
    verdict = ("growth-bounded" if max(ratios.values()) <= bound
               else "growth-unbounded")
    return ConvergenceReport(norms, ratios, verdict, bound, window)


def field_u_vector(L):
    """(P0, P1, P0', P1', Q0, Q1, Q0', Q1') of a field, as w-series."""
    P, Q = L.P, L.Q
    P0 = P.coeff_of({Z: 0})
    P1 = P.coeff_of({Z: 1})
    Q0 = Q.coeff_of({Z: 0})
    Q1 = Q.coeff_of({Z: 1})
    return [P0, P1, P0.diff(WV), P1.diff(WV),
            Q0, Q1, Q0.diff(WV), Q1.diff(WV)]


# ---------------------------------------------------------------------------
# optional real-form post-step
# ---------------------------------------------------------------------------

def real_tangency_residual(L, M, order=None):
    """Residual of Q = rho_z P + rho_zb bar(P) + rho_wb bar(Q) on w = rho.

    Zero iff the real flow of L preserves the surface (L lies in the real
    automorphism algebra, not merely its complexification).
    """
    from .surfaces import bar_series, ZB, WB
    order = min(M.order, L.order()) if order is None else order
    rho = M.defining_series(order)
    amb = (Z, ZB, WB)
    P = L.P.rename({WV: "_w"}).embed(amb + ("_w",))
    Q = L.Q.rename({WV: "_w"}).embed(amb + ("_w",))
    Pm = P.compose({"_w": rho})
    Qm = Q.compose({"_w": rho})
    barP = bar_series(L.P.rename({WV: WB}).embed(amb), swap=(Z, ZB))
    barQ = bar_series(L.Q.rename({WV: WB}).embed(amb), swap=(Z, ZB))
    return (Qm - rho.diff(Z) * Pm - rho.diff(ZB) * barP
            - rho.diff(WB) * barQ).truncate(order)


def real_form_basis(basis, M, order=None):
    """Real combinations of the complex basis tangent to the surface itself.

    Imposes Q = rho_z P + rho_zb bar(P) + rho_wb bar(Q) on w = rho as exact
    linear constraints over the real and imaginary parts of the basis
    coordinates; returns the real fields sum (a_j + i b_j) L_j spanning the
    kernel.
    """
    from .surfaces import bar_series, ZB, WB
    order = min(M.order, basis.order) if order is None else order
    # below total degree m+2 the defining function cannot distinguish a
    # field from its complex rotation; constraints would be vacuous
    if order < M.m + 2:
        raise OrderTooLowError(order, M.m + 2,
                               "real-form extraction needs the basis "
                               "trusted through degree m+2 = %d, have %d; "
                               "raise the input truncation order"
                               % (M.m + 2, order))
    rho = M.defining_series(order)
    rho_z = rho.diff(Z)
    rho_zb = rho.diff(ZB)
    rho_wb = rho.diff(WB)
    amb = (Z, ZB, WB)
    rows_by_key = {}
    cols = []
    for j, L in enumerate(basis.fields):
        P = L.P.rename({WV: WB}).truncate(order)
        Q = L.Q.rename({WV: WB}).truncate(order)
        # on-surface values: substitute w -> rho(z, zb, wb)
        Pm = P.embed((Z, WB)).rename({WB: "_w"}).embed(amb + ("_w",)) \
              .compose({"_w": rho}, polynomial_vars=())
        Qm = Q.embed((Z, WB)).rename({WB: "_w"}).embed(amb + ("_w",)) \
              .compose({"_w": rho}, polynomial_vars=())
        barP = bar_series(P.embed((Z, ZB, WB)), swap=(Z, ZB))
        barQ = bar_series(Q.embed((Z, ZB, WB)), swap=(Z, ZB))
        A = Qm - rho_z * Pm
        B = -(rho_zb * barP) - (rho_wb * barQ)
        col_a = A + B                 # coefficient of a_j
        col_b = (A - B).scale(GaussianRational(0, 1, 0, 0, 1))  # of b_j
        cols.append((col_a, col_b))
    nvar = 2 * len(basis.fields)
    keys = set()
    for col_a, col_b in cols:
        keys.update(col_a.terms)
        keys.update(col_b.terms)
    rows = []
    for key in sorted(keys):
        for part in ("a", "b", "c", "d"):
            row = []
            for col_a, col_b in cols:
                for col in (col_a, col_b):
                    coeff = col.terms.get(key, ZERO)
                    row.append(GaussianRational.of(
                        Fraction(getattr(coeff, part), coeff.q)))
            if any(not x.is_zero() for x in row):
                rows.append(row)
    if not rows:
        kern = [[ONE if i == j else ZERO for i in range(nvar)]
                for j in range(nvar)]
    else:
        kern = linalg.kernel_basis(rows)
    fields = []
    for v in kern:
        P = MultiSeries.zero((Z, WV))
        Q = MultiSeries.zero((Z, WV))
        for j, L in enumerate(basis.fields):
            coeff = v[2 * j] + v[2 * j + 1] * GaussianRational(0, 1, 0, 0, 1)
            if not coeff.is_zero():
                P = P + L.P.scale(coeff)
                Q = Q + L.Q.scale(coeff)
        f = VectorField(P, Q)
        if not f.is_zero():
            fields.append(f)
    return fields
