"""Exact integer / rational linear algebra helpers.

Everything here works over Python ints and fractions.Fraction; no floating
point is used anywhere, so results are certificates, not approximations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

Vec = tuple[int, ...]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def mat_vec(m, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def det_bareiss(m) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def char_poly(m) -> list[int]:
    """Coefficients [c_0, ..., c_n] of det(x*I - M), low degree first.

    Computed by evaluating integer determinants at x = 0..n and interpolating;
    exact because the polynomial is monic of degree n with integer coefficients.
    """
    n = len(m)
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        shifted = [[(x if i == j else 0) - m[i][j] for j in range(n)] for i in range(n)]
        ys.append(det_bareiss(shifted))
    # Lagrange interpolation over Q
    coeffs = [Fraction(0)] * (n + 1)
    for i, xi in enumerate(xs):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            denom *= xi - xj
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] += c * (-xj)
                new[k + 1] += c
            basis = new
        scale = Fraction(ys[i]) / denom
        for k, c in enumerate(basis):
            coeffs[k] += c * scale
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("characteristic polynomial interpolation not integral")
        out.append(c.numerator)
    return out


def symmetric_inertia(m) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric integer matrix.

    Uses Descartes' rule of signs on the characteristic polynomial, which is
    exact because all roots are real.
    """
    coeffs = char_poly(m)
    zero = 0
    while zero < len(coeffs) and coeffs[zero] == 0:
        zero += 1
    reduced = coeffs[zero:]
    pos = _sign_changes(reduced)
    neg = _sign_changes([c if i % 2 == 0 else -c for i, c in enumerate(reduced)])
    n = len(m)
    assert pos + neg + zero == n
    return pos, neg, zero


def _sign_changes(coeffs) -> int:
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def frac_inverse(m):
    """Inverse of a nonsingular matrix, as Fractions."""
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def ldl_decompose(p):
    """LDL data (d, mu) of a symmetric positive definite rational matrix.

    Returns diagonal entries d and multipliers mu with
    z^T P z = sum_i d_i * (z_i + sum_{j>i} mu[i][j] * z_j)^2.
    """
    n = len(p)
    q = [[Fraction(p[i][j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        di = q[i][i]
        if di <= 0:
            raise ArithmeticError("form is not positive definite")
        d[i] = di
        for j in range(i + 1, n):
            mu[i][j] = q[i][j] / di
        for j in range(i + 1, n):
            qij = q[i][j]
            for k in range(j, n):
                q[j][k] -= qij * q[i][k] / di
                q[k][j] = q[j][k]
    return d, mu


def functional_kernel_basis(w: Vec) -> tuple[list[int], list[list[int]]]:
    """Unimodular splitting of the functional x -> w.x for primitive integer w.

    Returns (u0, basis) where w.u0 = 1 and basis spans {x : w.x = 0} over Z.
    """
    n = len(w)
    cols = [[int(i == j) for i in range(n)] for j in range(n)]
    vals = list(w)
    piv = 0
    for j in range(n):
        if j == piv:
            continue
        if vals[j] == 0:
            continue
        g, s, t = ext_gcd(vals[piv], vals[j])
        cp, cj = cols[piv], cols[j]
        ap, aj = vals[piv] // g, vals[j] // g
        cols[piv] = [s * x + t * y for x, y in zip(cp, cj)]
        cols[j] = [-aj * x + ap * y for x, y in zip(cp, cj)]
        vals[piv], vals[j] = g, 0
    if vals[piv] == -1:
        cols[piv] = [-x for x in cols[piv]]
        vals[piv] = 1
    if vals[piv] != 1:
        raise ValueError("functional is zero or not primitive")
    u0 = cols[piv]
    basis = [cols[j] for j in range(n) if j != piv]
    return u0, basis


def integral_affine_basis(rows, rhs):
    """Solve the integer linear system rows . x = rhs over Z^n.

    Returns (x0, basis) with solution set x0 + Z-span(basis), or None when no
    integral solution exists.  Built by gcd column elimination, so the basis
    extends to a unimodular matrix.
    """
    n = len(rows[0])
    cols = [[int(i == j) for i in range(n)] for j in range(n)]
    free = list(range(n))
    x0 = [0] * n
    for row, target in zip(rows, rhs):
        residual = target - dot(row, x0)
        vals = {j: dot(row, cols[j]) for j in free}
        nonzero = [j for j in free if vals[j] != 0]
        if not nonzero:
            if residual != 0:
                return None
            continue
        piv = nonzero[0]
        for j in nonzero[1:]:
            g, s, t = ext_gcd(vals[piv], vals[j])
            ap, aj = vals[piv] // g, vals[j] // g
            cp, cj = cols[piv], cols[j]
            cols[piv] = [s * a + t * b for a, b in zip(cp, cj)]
            cols[j] = [-aj * a + ap * b for a, b in zip(cp, cj)]
            vals[piv], vals[j] = g, 0
        g = vals[piv]
        if residual % g:
            return None
        k = residual // g
        x0 = [a + k * b for a, b in zip(x0, cols[piv])]
        free.remove(piv)
    return tuple(x0), [cols[j] for j in free]


def ldl_solve(d, mu, rhs):
    """Solve P z = rhs given the LDL data of P (unit upper triangular system)."""
    n = len(d)
    # P = U^T D U with U = I + strict upper part mu; solve U^T D U z = rhs
    y = [Fraction(r) for r in rhs]
    for i in range(n):          # forward: U^T w = rhs
        for j in range(i + 1, n):
            y[j] -= mu[i][j] * y[i]
    for i in range(n):          # diagonal
        y[i] /= d[i]
    for i in range(n - 1, -1, -1):  # back: U z = w
        y[i] -= sum(mu[i][j] * y[j] for j in range(i + 1, n))
    return y


def _leq_center_plus_sqrt(t: int, a: int, b: int, p: int, q: int) -> bool:
    # t <= a/b + sqrt(p/q), with b > 0, q > 0, p >= 0
    lhs = t * b - a
    if lhs <= 0:
        return True
    return q * lhs * lhs <= p * b * b


def _geq_center_minus_sqrt(t: int, a: int, b: int, p: int, q: int) -> bool:
    # t >= a/b - sqrt(p/q)
    lhs = a - t * b
    if lhs <= 0:
        return True
    return q * lhs * lhs <= p * b * b


def integer_range(center: Fraction, radius_sq: Fraction) -> tuple[int, int]:
    """Inclusive integer interval {t : (t - center)^2 <= radius_sq}.

    Returns (lo, hi) with lo > hi when the interval contains no integer.
    """
    if radius_sq < 0:
        return 1, 0
    a, b = center.numerator, center.denominator
    p, q = radius_sq.numerator, radius_sq.denominator
    s = isqrt(p * q)  # floor(sqrt(p*q)), so sqrt(p/q) ~ s/q
    hi = (a * q + b * (s + 1)) // (b * q)
    while not _leq_center_plus_sqrt(hi, a, b, p, q):
        hi -= 1
    while _leq_center_plus_sqrt(hi + 1, a, b, p, q):
        hi += 1
    lo = -((-(a * q - b * (s + 1))) // (b * q))
    while not _geq_center_minus_sqrt(lo, a, b, p, q):
        lo += 1
    while _geq_center_minus_sqrt(lo - 1, a, b, p, q):
        lo -= 1
    return lo, hi


def ceil_sqrt(n: int) -> int:
    """Smallest integer m >= 0 with m*m >= n."""
    if n <= 0:
        return 0
    r = isqrt(n)
    return r if r * r == n else r + 1
