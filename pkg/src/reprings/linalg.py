"""Exact integer and rational linear algebra helpers.

Matrices are lists of lists of Python ints (or Fractions).  The Smith form
routines keep the unimodular change-of-basis matrices because callers need
them to move between lattice coordinates and invariant-factor coordinates.
"""

from fractions import Fraction

import numpy as np


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m):
    return [list(row) for row in zip(*m)]


def matmul(a, b):
    if not a:
        return []
    bt = transpose(b) if b else []
    if not bt:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vecmat(v, m):
    if not m:
        return []
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]))]


def determinant(m):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_fraction(m):
    """Inverse of a square matrix over the rationals."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def solve_fraction(m, b):
    """Solve m x = b for square invertible m."""
    inv = inverse_fraction(m)
    return [sum(Fraction(x) * y for x, y in zip(row, b)) for row in inv]


def smith_normal_form(m):
    """Return (S, U, V) with U m V = S diagonal, d_1 | d_2 | ...

    U and V are unimodular.  Works for rectangular integer matrices.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, row)) for row in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        if f:
            a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        if f:
            for row in a:
                row[dst] += f * row[src]
            for row in v:
                row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < best[0]):
                    best = (abs(a[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility of the rest of the block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % a[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def smith_diagonal(m):
    s, _, _ = smith_normal_form(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def unimodular_inverse(m):
    inv = inverse_fraction(m)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


# --- Smith form over the local ring Z/p^k (numpy backed) -------------------

def _valuation(x, p, k):
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def local_smith(m, p, k, want_u=False, want_v=False):
    """Diagonalise an integer matrix over Z/p^k.

    Returns (diag, U, V) with U m V = diag(d) mod p^k, where each d_i is a
    power of p (p^k meaning zero).  U and V are invertible mod p^k and are
    returned only when requested.  Full pivoting on minimal valuation works
    because Z/p^k is a local principal ideal ring.
    """
    q = p ** k
    if q >= 2 ** 31:
        raise OverflowError("modulus too large for the int64 backend")
    a = np.array(m, dtype=np.int64).reshape(len(m), -1 if m else 0) % q
    rows, cols = a.shape
    n_diag = min(rows, cols)
    u = np.eye(rows, dtype=np.int64) if want_u else None
    v = np.eye(cols, dtype=np.int64) if want_v else None
    vals = []
    t = 0
    while t < min(a.shape[0], cols):
        if u is None and t % 16 == 0:
            # zero rows below the pivot never matter when U is not requested
            keep = np.nonzero(a[t:].any(axis=1))[0] + t
            a = np.concatenate([a[:t], a[keep]])
            if t >= a.shape[0]:
                break
        bi = bj = None
        best_v = k
        # fast path: a unit in column t has the least possible valuation
        hit = np.nonzero(a[t:, t] % p)[0]
        if len(hit):
            # the sparsest candidate row limits fill-in
            nnz = np.count_nonzero(a[hit + t, t:], axis=1)
            best_v, bi, bj = 0, int(hit[int(np.argmin(nnz))]) + t, t
        else:
            block = a[t:, t:]
            nz = np.nonzero(block)
            if len(nz[0]) == 0:
                break
            entries = block[nz]
            for e in range(k):
                hit = np.nonzero(entries % (p ** (e + 1)) != 0)[0]
                if len(hit):
                    best_v = e
                    bi, bj = int(nz[0][hit[0]]) + t, int(nz[1][hit[0]]) + t
                    break
        if bi != t:
            a[[t, bi]] = a[[bi, t]]
            if u is not None:
                u[[t, bi]] = u[[bi, t]]
        if bj != t:
            a[:, [t, bj]] = a[:, [bj, t]]
            if v is not None:
                v[:, [t, bj]] = v[:, [bj, t]]
        piv = int(a[t, t])
        unit = piv // p ** best_v
        inv_unit = pow(unit, -1, q)
        # normalise pivot to p^v
        a[t] = (a[t] * inv_unit) % q
        if u is not None:
            u[t] = (u[t] * inv_unit) % q
        pv = p ** best_v
        idx = np.nonzero(a[t + 1:, t])[0] + t + 1
        if len(idx):
            f = (a[idx, t] // pv) % q
            a[idx] = (a[idx] - np.outer(f, a[t])) % q
            if u is not None:
                u[idx] = (u[idx] - np.outer(f, u[t])) % q
        row = a[t, t + 1:].copy()
        if row.any():
            f = (row // pv) % q
            # column t is p^v e_t at this point, so only row t changes in a
            a[t, t + 1:] = 0
            if v is not None:
                v[:, t + 1:] = (v[:, t + 1:] - np.outer(v[:, t], f)) % q
        vals.append(best_v)
        t += 1
    diag = [p ** e for e in vals] + [q] * (n_diag - len(vals))
    return diag, (u.tolist() if u is not None else None), (v.tolist() if v is not None else None)


def factor_integer(n):
    """Prime factorisation as a dict prime -> exponent (trial division)."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_elementary(divisors):
    """Combine prime-power elementary divisors into invariant factors."""
    by_prime = {}
    for d in divisors:
        if d == 1:
            continue
        (p, _), = factor_integer(d).items()
        by_prime.setdefault(p, []).append(d)
    if not by_prime:
        return []
    length = max(len(v) for v in by_prime.values())
    out = [1] * length
    for p, ds in by_prime.items():
        ds = sorted(ds)
        for i, d in enumerate(ds):
            out[length - len(ds) + i] *= d
    return out
