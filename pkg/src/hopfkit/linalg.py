"""Exact sparse/dense linear algebra over the scalar fields.

Everything here is plain Gaussian elimination with exact division; there are
no tolerances anywhere.  Vectors are dicts {column index: scalar}, matrices are
lists of such rows (sparse) or lists of lists (dense, for small module work).
"""

from __future__ import annotations


class RowEchelon:
    """Incremental sparse row echelon form with unit pivots.

    Rows are added one at a time and reduced against existing pivots; the
    kernel of the accumulated row space (as constraints on column vectors)
    is available after finalize().
    """

    def __init__(self, field):
        self.field = field
        self.pivots = {}  # pivot column -> row dict (row[pivot] == 1)

    def reduce_row(self, row):
        """Reduce a sparse row against current pivots (destructive on a copy)."""
        row = dict(row)
        # iterate until no pivot column appears in the row
        while True:
            hit = None
            for c in row:
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                return {c: v for c, v in row.items() if v}
            coef = row.pop(hit)
            if coef:
                for c2, v2 in self.pivots[hit].items():
                    if c2 == hit:
                        continue
                    nv = row.get(c2, self.field.zero) - coef * v2
                    if nv:
                        row[c2] = nv
                    else:
                        row.pop(c2, None)

    def add_row(self, row):
        """Insert a row; returns the pivot column or None if row reduced to 0."""
        red = self.reduce_row(row)
        if not red:
            return None
        piv = min(red)
        inv = red[piv].inverse()
        red = {c: v * inv for c, v in red.items()}
        # eliminate the new pivot from existing rows
        for p, r in self.pivots.items():
            if piv in r:
                coef = r.pop(piv)
                for c2, v2 in red.items():
                    if c2 == piv:
                        continue
                    nv = r.get(c2, self.field.zero) - coef * v2
                    if nv:
                        r[c2] = nv
                    else:
                        r.pop(c2, None)
        self.pivots[piv] = red
        return piv

    @property
    def rank(self):
        return len(self.pivots)

    def kernel_basis(self, ncols):
        """Basis of {v : row . v == 0 for all rows}, as sparse dicts."""
        out = []
        one = self.field.one
        for j in range(ncols):
            if j in self.pivots:
                continue
            vec = {j: one}
            for p, r in self.pivots.items():
                c = r.get(j)
                if c:
                    vec[p] = -c
            out.append(vec)
        return out

    def contains(self, row):
        return not self.reduce_row(row)


def sparse_kernel(rows, ncols, field):
    ech = RowEchelon(field)
    for r in rows:
        ech.add_row(r)
    return ech.kernel_basis(ncols)


def sparse_rank(rows, field):
    ech = RowEchelon(field)
    for r in rows:
        ech.add_row(r)
    return ech.rank


# -- span / membership machinery (vectors as sparse dicts) -------------------


class SpanBasis:
    """Echelonized spanning set of vectors; supports membership and extension."""

    def __init__(self, field):
        self.field = field
        self.pivots = {}  # pivot index -> vector dict (vec[pivot] == 1)
        self.order = []   # insertion order of pivot columns

    def reduce(self, vec):
        vec = {c: v for c, v in vec.items() if v}
        while True:
            hit = None
            for c in vec:
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                return vec
            coef = vec.pop(hit)
            for c2, v2 in self.pivots[hit].items():
                if c2 == hit:
                    continue
                nv = vec.get(c2, self.field.zero) - coef * v2
                if nv:
                    vec[c2] = nv
                else:
                    vec.pop(c2, None)

    def add(self, vec):
        """Add a vector to the span; returns True if it enlarged the span."""
        red = self.reduce(vec)
        if not red:
            return False
        piv = min(red)
        inv = red[piv].inverse()
        red = {c: v * inv for c, v in red.items()}
        for p, r in self.pivots.items():
            if piv in r:
                coef = r.pop(piv)
                for c2, v2 in red.items():
                    if c2 == piv:
                        continue
                    nv = r.get(c2, self.field.zero) - coef * v2
                    if nv:
                        r[c2] = nv
                    else:
                        r.pop(c2, None)
        self.pivots[piv] = red
        self.order.append(piv)
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    @property
    def dim(self):
        return len(self.pivots)

    def basis(self):
        return [dict(self.pivots[p]) for p in sorted(self.pivots)]

    def coordinates(self, vec):
        """Coordinates of vec in the (sorted-pivot) basis, or None if outside."""
        vec = {c: v for c, v in vec.items() if v}
        coords = {}
        while True:
            hit = None
            for c in vec:
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                if vec:
                    return None
                return coords
            coef = vec.pop(hit)
            coords[hit] = coef
            for c2, v2 in self.pivots[hit].items():
                if c2 == hit:
                    continue
                nv = vec.get(c2, self.field.zero) - coef * v2
                if nv:
                    vec[c2] = nv
                else:
                    vec.pop(c2, None)


# -- dense helpers for small module matrices ----------------------------------


def dense_zero(field, n, m=None):
    m = n if m is None else m
    return [[field.zero] * m for _ in range(n)]


def dense_identity(field, n):
    out = dense_zero(field, n)
    for i in range(n):
        out[i][i] = field.one
    return out


def dense_mul(field, a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[field.zero] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] = oi[j] + c * bt[j]
    return out


def dense_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def dense_scale(c, a):
    return [[c * x for x in row] for row in a]


def dense_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def dense_is_zero(a):
    return all(not x for row in a for x in row)


def dense_matvec(field, a, v):
    return [sum((row[j] * v[j] for j in range(len(v)) if v[j]), field.zero) for row in a]


def dense_rank(field, a):
    rows = [{j: x for j, x in enumerate(row) if x} for row in a]
    return sparse_rank(rows, field)


def dense_kernel(field, a, ncols):
    rows = [{j: x for j, x in enumerate(row) if x} for row in a]
    return sparse_kernel(rows, ncols, field)


def dense_is_nilpotent(field, a):
    """True iff the square matrix a is nilpotent (power vanishes at <= dim)."""
    n = len(a)
    x = a
    k = 1
    while k < 2 * n + 1:
        if dense_is_zero(x):
            return True
        x = dense_mul(field, x, x)
        k *= 2
    return dense_is_zero(x)


def dense_pow(field, a, n):
    out = dense_identity(field, len(a))
    base = a
    while n:
        if n & 1:
            out = dense_mul(field, out, base)
        base = dense_mul(field, base, base) if n > 1 else base
        n >>= 1
    return out


def dense_inverse(field, a):
    """Inverse of a square matrix, or None if singular."""
    n = len(a)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(a)]
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, n):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                coef = aug[i][c]
                aug[i] = [x - coef * y for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[n:] for row in aug]


# -- polynomials over a scalar field (for spectral projectors) ---------------


def poly_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def poly_mul(field, a, b):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def poly_divmod(field, a, b):
    a = list(a)
    if len(a) < len(b):
        return [], a
    q = [field.zero] * (len(a) - len(b) + 1)
    inv = b[-1].inverse()
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] * inv
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] = a[i + j] - c * y
    return poly_trim(q), poly_trim(a[: len(b) - 1])


def poly_gcd_ext(field, a, b):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [field.one], []
    t0, t1 = [], [field.one]
    while r1:
        q, r = poly_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(field, s0, poly_mul(field, q, s1))
        t0, t1 = t1, poly_sub(field, t0, poly_mul(field, q, t1))
    if r0:
        inv = r0[-1].inverse()
        r0 = [c * inv for c in r0]
        s0 = [c * inv for c in s0]
        t0 = [c * inv for c in t0]
    return r0, s0, t0


def poly_sub(field, a, b):
    n = max(len(a), len(b))
    a = list(a) + [field.zero] * (n - len(a))
    b = list(b) + [field.zero] * (n - len(b))
    return poly_trim([x - y for x, y in zip(a, b)])


def poly_eval_matrix(field, p, mat):
    """p(mat) for a dense square matrix (Horner)."""
    n = len(mat)
    out = dense_zero(field, n)
    for c in reversed(p):
        out = dense_mul(field, out, mat)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


class TrackedSpan:
    """Echelonized span that remembers coordinates over the inserted vectors.

    rows[pivot] = (reduced row, expression), where the reduced row equals
    sum_k expression[k] * inserted_vector_k exactly.
    """

    def __init__(self, field):
        self.field = field
        self.rows = {}
        self.inserted = []

    @property
    def dim(self):
        return len(self.rows)

    def _reduce(self, vec, expr):
        vec = {c: v for c, v in vec.items() if v}
        while True:
            hit = None
            for c in vec:
                if c in self.rows:
                    hit = c
                    break
            if hit is None:
                return vec, expr
            coef = vec.pop(hit)
            rvec, rexpr = self.rows[hit]
            for c2, v2 in rvec.items():
                if c2 == hit:
                    continue
                nv = vec.get(c2, self.field.zero) - coef * v2
                if nv:
                    vec[c2] = nv
                else:
                    vec.pop(c2, None)
            for k, e in rexpr.items():
                nv = expr.get(k, self.field.zero) - coef * e
                if nv:
                    expr[k] = nv
                else:
                    expr.pop(k, None)

    def add(self, vec):
        """Insert a vector; returns its insertion index, or None if dependent."""
        n = len(self.inserted)
        red, expr = self._reduce(dict(vec), {n: self.field.one})
        if not red:
            return None
        piv = min(red)
        inv = red[piv].inverse()
        red = {c: v * inv for c, v in red.items()}
        expr = {k: e * inv for k, e in expr.items()}
        for p, (rvec, rexpr) in self.rows.items():
            if piv in rvec:
                coef = rvec.pop(piv)
                for c2, v2 in red.items():
                    if c2 == piv:
                        continue
                    nv = rvec.get(c2, self.field.zero) - coef * v2
                    if nv:
                        rvec[c2] = nv
                    else:
                        rvec.pop(c2, None)
                for k, e in expr.items():
                    nv = rexpr.get(k, self.field.zero) - coef * e
                    if nv:
                        rexpr[k] = nv
                    else:
                        rexpr.pop(k, None)
        self.rows[piv] = (red, expr)
        self.inserted.append(dict(vec))
        return n

    def contains(self, vec):
        red, _ = self._reduce(dict(vec), {})
        return not red

    def coordinates(self, vec):
        """Coordinates over the inserted vectors, or None if outside the span."""
        red, expr = self._reduce(dict(vec), {})
        if red:
            return None
        return {k: -e for k, e in expr.items()}

    def pivot_indices(self):
        return sorted(self.rows)
