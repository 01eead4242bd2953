"""Exact linear algebra over a Field.

Dense matrices are lists of row lists of scalars.  Row reduction is
plain Gauss-Jordan with exact arithmetic; at the sizes this library
handles (a few hundred rows) nothing fancier is warranted.

SpanSolver is an incremental row reducer over sparsely represented
vectors (dicts keyed by arbitrary hashable coordinates).  It answers
membership queries and also returns the combination of inserted vectors
that expresses a member, which is what the witness-producing checks need.
"""


def rref(rows, field):
    """Reduce in place; returns the list of pivot column indices."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != field.zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != field.zero:
                coef = rows[i][c]
                rows[i] = [field.sub(x, field.mul(coef, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(rows, field):
    return len(rref([list(r) for r in rows], field))


def solve(a_rows, b, field):
    """One solution x of A x = b, or None.  A is m x n, b has length m."""
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    aug = [list(a_rows[i]) + [b[i]] for i in range(m)]
    pivots = rref(aug, field)
    x = [field.zero] * n
    for r, c in enumerate(pivots):
        if c == n:
            return None  # pivot in the constant column: inconsistent
        x[c] = aug[r][n]
    return x


def nullspace(a_rows, field):
    """Basis of ker A, deterministic: one vector per free column."""
    m = len(a_rows)
    if m == 0:
        return []
    n = len(a_rows[0])
    work = [list(r) for r in a_rows]
    pivots = rref(work, field)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [field.zero] * n
        v[free] = field.one
        for r, c in enumerate(pivots):
            v[c] = field.neg(work[r][free])
        basis.append(v)
    return basis


def invert_matrix(a_rows, field):
    """Inverse of a square matrix, or None if singular."""
    n = len(a_rows)
    aug = []
    for i in range(n):
        row = list(a_rows[i]) + [field.zero] * n
        row[n + i] = field.one
        aug.append(row)
    pivots = rref(aug, field)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in aug]


def matmul(a_rows, b_rows, field):
    n = len(b_rows[0]) if b_rows else 0
    out = []
    for row in a_rows:
        acc = [field.zero] * n
        for k, x in enumerate(row):
            if x == field.zero:
                continue
            brow = b_rows[k]
            for j in range(n):
                if brow[j] != field.zero:
                    acc[j] = field.add(acc[j], field.mul(x, brow[j]))
        out.append(acc)
    return out


def matvec(a_rows, v, field):
    out = []
    for row in a_rows:
        s = field.zero
        for x, y in zip(row, v):
            if x != field.zero and y != field.zero:
                s = field.add(s, field.mul(x, y))
        out.append(s)
    return out


def identity_matrix(n, field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


class SpanSolver:
    """Incremental span membership with expression witnesses.

    Vectors are dicts {coordinate: scalar}; coordinates may be any
    hashable values.  Pivot choice follows string order of coordinates,
    which keeps runs deterministic without requiring an index map.
    """

    def __init__(self, field):
        self.field = field
        self.rows = []  # (pivot, vector dict, combo dict tag -> scalar)
        self.tags = []

    def _reduce(self, vec, combo):
        f = self.field
        vec = {k: v for k, v in vec.items() if v != f.zero}
        for pivot, row, row_combo in self.rows:
            c = vec.get(pivot)
            if c is None or c == f.zero:
                continue
            for k, v in row.items():
                newv = f.sub(vec.get(k, f.zero), f.mul(c, v))
                if newv == f.zero:
                    vec.pop(k, None)
                else:
                    vec[k] = newv
            if combo is not None:
                for t, v in row_combo.items():
                    newv = f.sub(combo.get(t, f.zero), f.mul(c, v))
                    if newv == f.zero:
                        combo.pop(t, None)
                    else:
                        combo[t] = newv
        return vec, combo

    def add(self, vec, tag=None):
        """Insert a vector; returns True if it enlarged the span."""
        f = self.field
        if tag is None:
            tag = len(self.tags)
        combo = {tag: f.one}
        vec, combo = self._reduce(dict(vec), combo)
        self.tags.append(tag)
        if not vec:
            return False
        pivot = min(vec, key=lambda k: (str(k), repr(k)))
        inv = f.inv(vec[pivot])
        vec = {k: f.mul(inv, v) for k, v in vec.items()}
        combo = {t: f.mul(inv, v) for t, v in combo.items()}
        # keep stored rows fully reduced against the new pivot
        for i, (p, row, rc) in enumerate(self.rows):
            c = row.get(pivot)
            if c is None or c == f.zero:
                continue
            for k, v in vec.items():
                newv = f.sub(row.get(k, f.zero), f.mul(c, v))
                if newv == f.zero:
                    row.pop(k, None)
                else:
                    row[k] = newv
            for t, v in combo.items():
                newv = f.sub(rc.get(t, f.zero), f.mul(c, v))
                if newv == f.zero:
                    rc.pop(t, None)
                else:
                    rc[t] = newv
        self.rows.append((pivot, vec, combo))
        return True

    def contains(self, vec):
        residue, _ = self._reduce(dict(vec), None)
        return not residue

    def express(self, vec):
        """Combination {tag: scalar} with sum(tag_vector * scalar) = vec, or None.

        The scalars refer to the vectors as inserted, so the caller can
        rebuild the expression verbatim.
        """
        f = self.field
        residue, combo = self._reduce(dict(vec), {})
        if residue:
            return None
        return {t: f.neg(v) for t, v in combo.items()}

    @property
    def dim(self):
        return len(self.rows)
