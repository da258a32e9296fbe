"""Exact dense linear algebra over the coefficient field.

Matrices are lists of lists of GaussianRational.  Sizes in this package stay
small (n <= 12), so plain Gaussian elimination with exact division is used
throughout; no fraction-free tricks are needed.
"""

from .qfield import GaussianRational, ZERO, ONE


def zeros(n, m):
    return [[ZERO for _ in range(m)] for _ in range(n)]


def identity(n):
    M = zeros(n, n)
    for i in range(n):
        M[i][i] = ONE
    return M


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    C = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        Ci = C[i]
        for t in range(k):
            a = Ai[t]
            if a.is_zero():
                continue
            Bt = B[t]
            for j in range(m):
                if not Bt[j].is_zero():
                    Ci[j] = Ci[j] + a * Bt[j]
    return C


def mat_vec(A, v):
    out = []
    for row in A:
        s = ZERO
        for a, x in zip(row, v):
            if not a.is_zero() and not x.is_zero():
                s = s + a * x
        out.append(s)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[c * a for a in row] for row in A]


def rref(M):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    R = [row[:] for row in M]
    n = len(R)
    m = len(R[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        pr = None
        for i in range(r, n):
            if not R[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = R[r][c].inverse()
        R[r] = [inv * x for x in R[r]]
        for i in range(n):
            if i != r and not R[i][c].is_zero():
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return R, pivots


def rank(M):
    if not M:
        return 0
    _, pivots = rref(M)
    return len(pivots)


def kernel_basis(M):
    """Basis of the right kernel, as a list of column vectors."""
    n = len(M)
    m = len(M[0]) if n else 0
    R, pivots = rref(M)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * m
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def solve_with_rhs_matrix(A, B):
    """Solve A X = B for an n x m right-hand side.

    Returns (X, kernel, constraints): X is one solution with the convention
    that free variables are set to zero, kernel is a basis of ker A, and
    constraints lists the rows of reduced B that make the system
    inconsistent (each row is a length-m vector that must vanish).
    When constraints is nonempty, X solves only the consistent projection.
    """
    n = len(A)
    m = len(B[0]) if B else 0
    cols = len(A[0]) if n else 0
    aug = [A[i][:] + B[i][:] for i in range(n)]
    R, pivots = rref(aug)
    pivots_in_A = [p for p in pivots if p < cols]
    constraints = []
    for r in range(len(pivots_in_A), len(R)):
        tail = R[r][cols:]
        if any(not x.is_zero() for x in tail):
            constraints.append(tail)
    X = [[ZERO] * m for _ in range(cols)]
    for r, p in enumerate(pivots_in_A):
        for j in range(m):
            X[p][j] = R[r][cols + j]
    return X, kernel_basis(A), constraints


def charpoly(A):
    """Characteristic polynomial det(tI - A), exact Faddeev-LeVerrier.

    Returns coefficients [c_0, ..., c_n] with c_n = 1, lowest degree first.
    """
    n = len(A)
    M = zeros(n, n)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    c = ONE
    for k in range(1, n + 1):
        # M <- A M + c I ; c <- -tr(A M)/k
        AM = mat_mul(A, M)
        for i in range(n):
            AM[i][i] = AM[i][i] + c
        M = AM
        AM2 = mat_mul(A, M)
        tr = ZERO
        for i in range(n):
            tr = tr + AM2[i][i]
        c = -(tr / GaussianRational.from_int(k))
        coeffs[n - k] = c
    return coeffs


def det(A):
    cp = charpoly(A)
    d = cp[0]
    if len(A) % 2 == 1:
        d = -d
    return d


def poly_eval(coeffs, x):
    """Evaluate a coefficient list (lowest degree first) at x."""
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_divmod_linear(coeffs, r):
    """Divide polynomial by (t - r); returns (quotient, remainder)."""
    n = len(coeffs) - 1
    out = [ZERO] * n
    acc = ZERO
    for k in range(n, 0, -1):
        acc = coeffs[k] + acc * r
        out[k - 1] = acc
    rem = coeffs[0] + acc * r
    return out, rem
