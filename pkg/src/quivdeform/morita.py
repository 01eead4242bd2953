"""Transfer of cochains across a Morita context, and the deformed equivalence.

This layer works with plain structure-constant algebras (FinDimAlgebra) so
that a path-algebra quotient, a matrix amplification and a corner algebra
all go through the same code.  Elements are sparse coordinate dicts
{basis_index: scalar}; cochains are the FullCochain tables from the
hochschild module.

A MoritaContext fixes the two algebras, the inverse bimodules, both
pairings and one finite generator list on each side:

    1_A = sum <p'_j, q'_j>_A   over gens_a = [(p'_j, q'_j)],
    1_B = sum <q_i, p_i>_B     over gens_b = [(q_i, p_i)].

The transfer maps phi/psi, the homotopy h and every construction below are
literal in those lists, so two contexts for the same pair of algebras may
disagree on raw cochains while agreeing on cohomology classes.
"""

from .errors import CharTwoUnsupported, InputError, NotFullIdempotent
from .hochschild import FullCochain, is_full_cocycle
from .linalg import SpanSolver, invert_matrix, matmul, matvec, nullspace, rank


def _addinto(field, acc, vec, c):
    """acc += c * vec on sparse dicts, dropping zeros."""
    if c == field.zero:
        return acc
    for k, v in vec.items():
        s = field.add(acc.get(k, field.zero), field.mul(c, v))
        if s == field.zero:
            acc.pop(k, None)
        else:
            acc[k] = s
    return acc


def _scaled(field, vec, c):
    return _addinto(field, {}, vec, c)


def _clean(field, vec):
    return {k: c for k, c in vec.items() if c != field.zero}


def _dense(field, vec, dim):
    out = [field.zero] * dim
    for k, c in vec.items():
        out[k] = c
    return out


def _mat_sub(field, a, b):
    return [[field.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_add(field, a, b):
    return [[field.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_scale(field, a, c):
    return [[field.mul(c, x) for x in row] for row in a]


def _mat_is_zero(field, a):
    return all(x == field.zero for row in a for x in row)


def _zeros(field, rows, cols):
    return [[field.zero] * cols for _ in range(rows)]


class FinDimAlgebra:
    """Associative unital algebra given by structure constants.

    table[(i, j)] = {k: c} holds the product of basis elements i and j;
    absent entries are zero.  unit is a coordinate dict.  Associativity
    and two-sided unitality are verified on all basis tuples unless
    check=False.
    """

    def __init__(self, field, dim, table, unit, labels=None, check=True):
        self.field = field
        self.dim = dim
        self.table = {}
        for key, vec in table.items():
            vec = _clean(field, vec)
            if vec:
                self.table[key] = vec
        self.unit = _clean(field, unit)
        self.labels = list(labels) if labels else ["x%d" % i for i in range(dim)]
        if len(self.labels) != dim:
            raise InputError("expected %d basis labels" % dim)
        self._left_mats = {}
        self._right_mats = {}
        if check:
            self._validate()

    def multiply_basis(self, i, j):
        return self.table.get((i, j), {})

    def mul(self, x, y):
        fld = self.field
        out = {}
        for i, ci in x.items():
            for j, cj in y.items():
                _addinto(fld, out, self.multiply_basis(i, j), fld.mul(ci, cj))
        return out

    def left_matrix(self, i):
        if i not in self._left_mats:
            cols = [self.multiply_basis(i, m) for m in range(self.dim)]
            self._left_mats[i] = [[cols[m].get(r, self.field.zero)
                                   for m in range(self.dim)] for r in range(self.dim)]
        return self._left_mats[i]

    def right_matrix(self, j):
        if j not in self._right_mats:
            cols = [self.multiply_basis(m, j) for m in range(self.dim)]
            self._right_mats[j] = [[cols[m].get(r, self.field.zero)
                                    for m in range(self.dim)] for r in range(self.dim)]
        return self._right_mats[j]

    def _validate(self):
        fld = self.field
        for i in range(self.dim):
            e = {i: fld.one}
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise InputError("unit fails on basis element %s" % self.labels[i])
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.multiply_basis(i, j)
                for k in range(self.dim):
                    ek = {k: fld.one}
                    if self.mul(ij, ek) != self.mul({i: fld.one}, self.multiply_basis(j, k)):
                        raise InputError(
                            "product is not associative at (%s, %s, %s)"
                            % (self.labels[i], self.labels[j], self.labels[k]))


def algebra_of_basis(basis):
    """Structure-constant copy of a path-algebra quotient basis."""
    table = {(i, j): basis.multiply_basis(i, j)
             for i in range(basis.dim) for j in range(basis.dim)}
    unit = {i: basis.field.one for i in basis.trivial_indices}
    labels = [basis.label(i) for i in range(basis.dim)]
    return FinDimAlgebra(basis.field, basis.dim, table, unit, labels, check=False)


def deform_structure_algebra(alg, f):
    """Structure constants of A_f on the basis (x_i, 0), (0, x_i).

    The product is (a,b)(c,d) = (ac, ad + bc + f(a@c)); f must be a
    2-cocycle, which the associativity validation re-proves.
    """
    if f.degree != 2 or f.dim != alg.dim:
        raise InputError("deformation needs a 2-cochain on the same algebra")
    if not is_full_cocycle(f, alg):
        raise InputError("the cochain is not a Hochschild 2-cocycle")
    n = alg.dim
    fld = alg.field
    table = {}
    for i in range(n):
        for j in range(n):
            prod = alg.multiply_basis(i, j)
            if prod or f.value((i, j)):
                entry = dict(prod)
                for k, c in f.value((i, j)).items():
                    entry[n + k] = c
                table[(i, j)] = entry
            if prod:
                shifted = {n + k: c for k, c in prod.items()}
                table[(i, n + j)] = shifted
                table[(n + i, j)] = dict(shifted)
    labels = list(alg.labels) + ["t*" + s for s in alg.labels]
    return FinDimAlgebra(fld, 2 * n, table, dict(alg.unit), labels)


class Bimodule:
    """Left module over left_alg and right module over right_alg.

    left[(i, m)] = coordinates of e_i . x_m, right[(m, j)] = x_m . e_j.
    Unitality, both associativities and commutation of the two actions
    are checked on all basis tuples unless check=False.
    """

    def __init__(self, left_alg, right_alg, dim, left, right, check=True):
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.dim = dim
        self.field = left_alg.field
        fld = self.field
        self.left = {}
        for key, vec in left.items():
            vec = _clean(fld, vec)
            if vec:
                self.left[key] = vec
        self.right = {}
        for key, vec in right.items():
            vec = _clean(fld, vec)
            if vec:
                self.right[key] = vec
        self._left_mats = {}
        self._right_mats = {}
        if check:
            bad = self.violations()
            if bad:
                raise InputError("; ".join(bad))

    def left_basis(self, i, m):
        return self.left.get((i, m), {})

    def right_basis(self, m, j):
        return self.right.get((m, j), {})

    def left_act(self, avec, mvec):
        fld = self.field
        out = {}
        for i, ci in avec.items():
            for m, cm in mvec.items():
                _addinto(fld, out, self.left_basis(i, m), fld.mul(ci, cm))
        return out

    def right_act(self, mvec, bvec):
        fld = self.field
        out = {}
        for m, cm in mvec.items():
            for j, cj in bvec.items():
                _addinto(fld, out, self.right_basis(m, j), fld.mul(cm, cj))
        return out

    def left_matrix(self, i):
        if i not in self._left_mats:
            fld = self.field
            self._left_mats[i] = [[self.left_basis(i, m).get(r, fld.zero)
                                   for m in range(self.dim)] for r in range(self.dim)]
        return self._left_mats[i]

    def right_matrix(self, j):
        if j not in self._right_mats:
            fld = self.field
            self._right_mats[j] = [[self.right_basis(m, j).get(r, fld.zero)
                                    for m in range(self.dim)] for r in range(self.dim)]
        return self._right_mats[j]

    def violations(self):
        fld = self.field
        la, ra = self.left_alg, self.right_alg
        out = []
        for m in range(self.dim):
            e = {m: fld.one}
            if self.left_act(la.unit, e) != e:
                out.append("left unit fails at %d" % m)
            if self.right_act(e, ra.unit) != e:
                out.append("right unit fails at %d" % m)
        for i in range(la.dim):
            for j in range(la.dim):
                prod = la.multiply_basis(i, j)
                for m in range(self.dim):
                    lhs = self.left_act(prod, {m: fld.one})
                    rhs = self.left_act({i: fld.one}, self.left_basis(j, m))
                    if lhs != rhs:
                        out.append("left action not associative at (%d, %d, %d)" % (i, j, m))
        for i in range(ra.dim):
            for j in range(ra.dim):
                prod = ra.multiply_basis(i, j)
                for m in range(self.dim):
                    lhs = self.right_act({m: fld.one}, prod)
                    rhs = self.right_act(self.right_basis(m, i), {j: fld.one})
                    if lhs != rhs:
                        out.append("right action not associative at (%d, %d, %d)" % (m, i, j))
        for i in range(la.dim):
            for j in range(ra.dim):
                for m in range(self.dim):
                    lhs = self.right_act(self.left_basis(i, m), {j: fld.one})
                    rhs = self.left_act({i: fld.one}, self.right_basis(m, j))
                    if lhs != rhs:
                        out.append("actions do not commute at (%d, %d, %d)" % (i, m, j))
        return out


def regular_bimodule(alg):
    """The algebra as a bimodule over itself."""
    table = {(i, j): alg.multiply_basis(i, j)
             for i in range(alg.dim) for j in range(alg.dim)}
    return Bimodule(alg, alg, alg.dim, table, dict(table), check=False)


def algebra_generators(alg):
    """Greedy unital generating set, as coordinate dicts.

    Scans the basis in order and keeps each element outside the unital
    subalgebra generated so far.  Used to thin the balanced-tensor
    relation set; any generating set induces the same relation span.
    """
    fld = alg.field
    span = SpanSolver(fld)
    closed = []

    def absorb(vec):
        queue = [vec]
        while queue:
            v = queue.pop()
            if not span.add(v, len(closed)):
                continue
            closed.append(v)
            for w in list(closed):
                queue.append(alg.mul(v, w))
                queue.append(alg.mul(w, v))

    absorb(dict(alg.unit))
    gens = []
    for i in range(alg.dim):
        e = {i: fld.one}
        if not span.contains(e):
            gens.append(e)
            absorb(e)
    return gens


class TensorProduct:
    """Balanced product X tensor_B Y with explicit quotient coordinates.

    Raw coordinates are pairs (i, j) flattened to i * dim(Y) + j; the
    quotient basis is the set of free columns after reducing the
    balance relations x.b @ y - x @ b.y.
    """

    def __init__(self, x, y, middle_gens=None):
        if x.right_alg is not y.left_alg:
            raise InputError("tensor factors disagree on the middle algebra")
        self.x = x
        self.y = y
        self.field = x.field
        fld = self.field
        mid = x.right_alg
        gens = middle_gens if middle_gens is not None else algebra_generators(mid)
        ydim = y.dim
        reducers = {}

        def reduce_row(row):
            while row:
                c = min(row)
                if c not in reducers:
                    return row, c
                _addinto(fld, row, reducers[c], fld.neg(row[c]))
            return row, None

        for i in range(x.dim):
            for bvec in gens:
                xb = x.right_act({i: fld.one}, bvec)
                for j in range(ydim):
                    row = {i2 * ydim + j: c for i2, c in xb.items()}
                    by = y.left_act(bvec, {j: fld.one})
                    _addinto(fld, row, {i * ydim + j2: c for j2, c in by.items()},
                             fld.neg(fld.one))
                    row, piv = reduce_row(row)
                    if piv is not None:
                        inv = fld.inv(row[piv])
                        reducers[piv] = {k: fld.mul(inv, c) for k, c in row.items()}
        self._reducers = reducers
        self.free = [c for c in range(x.dim * ydim) if c not in reducers]
        self._pos = {c: t for t, c in enumerate(self.free)}
        self.dim = len(self.free)

        left = {}
        right = {}
        la, ra = x.left_alg, y.right_alg
        for t, col in enumerate(self.free):
            i, j = divmod(col, ydim)
            for r in range(la.dim):
                ax = x.left_act({r: fld.one}, {i: fld.one})
                vec = self.project({i2 * ydim + j: c for i2, c in ax.items()})
                if vec:
                    left[(r, t)] = vec
            for s in range(ra.dim):
                yb = y.right_act({j: fld.one}, {s: fld.one})
                vec = self.project({i * ydim + j2: c for j2, c in yb.items()})
                if vec:
                    right[(s, t)] = vec
        right = {(t, s): v for (s, t), v in right.items()}
        self.bimodule = Bimodule(la, ra, self.dim, left, right, check=True)

    def project(self, raw):
        """Quotient coordinates of a vector given on raw pair columns."""
        fld = self.field
        work = dict(raw)
        hits = sorted(c for c in work if c in self._reducers)
        while hits:
            c = hits[0]
            coeff = work.get(c, fld.zero)
            if coeff != fld.zero:
                before = set(work)
                _addinto(fld, work, self._reducers[c], fld.neg(coeff))
                hits.extend(k for k in set(work) - before if k in self._reducers)
            hits = sorted(set(h for h in hits if h != c and h in work))
        return {self._pos[c]: v for c, v in work.items()}

    def pure(self, i, j):
        return self.project({i * self.y.dim + j: self.field.one})

    def pure_vec(self, xvec, yvec):
        fld = self.field
        raw = {}
        for i, ci in xvec.items():
            for j, cj in yvec.items():
                k = i * self.y.dim + j
                s = fld.add(raw.get(k, fld.zero), fld.mul(ci, cj))
                if s == fld.zero:
                    raw.pop(k, None)
                else:
                    raw[k] = s
        return self.project(raw)


def tensor_over(x, y, middle_gens=None):
    return TensorProduct(x, y, middle_gens)


class MoritaContext:
    """Inverse bimodules with fixed pairings and generator lists.

    a, b: FinDimAlgebra.  p: (a, b)-bimodule, q: (b, a)-bimodule.
    pairing_a[(i, j)] = coords in a of <p_i, q_j>_A; pairing_b[(j, i)]
    = coords in b of <q_j, p_i>_B.  gens_a = [(p', q')] with
    sum <p', q'>_A = 1_A; gens_b = [(q, p)] with sum <q, p>_B = 1_B.
    """

    def __init__(self, a, b, p, q, pairing_a, pairing_b, gens_a, gens_b, check=True):
        self.a = a
        self.b = b
        self.p = p
        self.q = q
        self.field = a.field
        fld = self.field
        self.pairing_a = {k: _clean(fld, v) for k, v in pairing_a.items()}
        self.pairing_b = {k: _clean(fld, v) for k, v in pairing_b.items()}
        self.gens_a = [(_clean(fld, u), _clean(fld, v)) for u, v in gens_a]
        self.gens_b = [(_clean(fld, u), _clean(fld, v)) for u, v in gens_b]
        self._swapped = None
        self._phi_ops = {}
        if check:
            self._validate()

    def pair_a(self, pvec, qvec):
        fld = self.field
        out = {}
        for i, ci in pvec.items():
            for j, cj in qvec.items():
                _addinto(fld, out, self.pairing_a.get((i, j), {}), fld.mul(ci, cj))
        return out

    def pair_b(self, qvec, pvec):
        fld = self.field
        out = {}
        for j, cj in qvec.items():
            for i, ci in pvec.items():
                _addinto(fld, out, self.pairing_b.get((j, i), {}), fld.mul(cj, ci))
        return out

    def swap(self):
        """The same context read from B's side; psi = phi of the swap."""
        if self._swapped is None:
            sw = MoritaContext(self.b, self.a, self.q, self.p,
                               self.pairing_b, self.pairing_a,
                               self.gens_b, self.gens_a, check=False)
            sw._swapped = self
            self._swapped = sw
        return self._swapped

    def _validate(self):
        fld = self.field
        a, b, p, q = self.a, self.b, self.p, self.q
        if p.left_alg is not a or p.right_alg is not b:
            raise InputError("P must be an (A, B)-bimodule")
        if q.left_alg is not b or q.right_alg is not a:
            raise InputError("Q must be a (B, A)-bimodule")

        one = fld.one
        for t in range(a.dim):
            et = {t: one}
            for i in range(p.dim):
                for j in range(q.dim):
                    base = self.pairing_a.get((i, j), {})
                    if self.pair_a(p.left_basis(t, i), {j: one}) != a.mul(et, base):
                        raise InputError("<a.p, q> != a.<p, q> at (%d, %d, %d)" % (t, i, j))
                    if self.pair_a({i: one}, q.right_basis(j, t)) != a.mul(base, et):
                        raise InputError("<p, q.a> != <p, q>.a at (%d, %d, %d)" % (i, j, t))
        for s in range(b.dim):
            es = {s: one}
            for i in range(p.dim):
                for j in range(q.dim):
                    if self.pair_a(p.right_basis(i, s), {j: one}) != \
                            self.pair_a({i: one}, q.left_basis(s, j)):
                        raise InputError("<p.b, q> != <p, b.q> at (%d, %d, %d)" % (i, s, j))
        for s in range(b.dim):
            es = {s: one}
            for j in range(q.dim):
                for i in range(p.dim):
                    base = self.pairing_b.get((j, i), {})
                    if self.pair_b(q.left_basis(s, j), {i: one}) != b.mul(es, base):
                        raise InputError("<b.q, p> != b.<q, p> at (%d, %d, %d)" % (s, j, i))
                    if self.pair_b({j: one}, p.right_basis(i, s)) != b.mul(base, es):
                        raise InputError("<q, p.b> != <q, p>.b at (%d, %d, %d)" % (j, i, s))
        for t in range(a.dim):
            et = {t: one}
            for j in range(q.dim):
                for i in range(p.dim):
                    if self.pair_b(q.right_basis(j, t), {i: one}) != \
                            self.pair_b({j: one}, p.left_basis(t, i)):
                        raise InputError("<q.a, p> != <q, a.p> at (%d, %d, %d)" % (j, t, i))

        # <p, q>_A . p' = p . <q, p'>_B  and  <q, p>_B . q' = q . <p, q'>_A
        for i in range(p.dim):
            for j in range(q.dim):
                pa = self.pairing_a.get((i, j), {})
                pb = self.pairing_b.get((j, i), {})
                for k in range(p.dim):
                    if p.left_act(pa, {k: one}) != p.right_act({i: one},
                                                               self.pairing_b.get((j, k), {})):
                        raise InputError("<p,q>.p' != p.<q,p'> at (%d, %d, %d)" % (i, j, k))
                for k in range(q.dim):
                    if q.left_act(pb, {k: one}) != q.right_act({j: one},
                                                               self.pairing_a.get((i, k), {})):
                        raise InputError("<q,p>.q' != q.<p,q'> at (%d, %d, %d)" % (j, i, k))

        total = {}
        for u, v in self.gens_a:
            _addinto(fld, total, self.pair_a(u, v), one)
        if total != self.a.unit:
            raise InputError("gens_a do not decompose 1_A")
        total = {}
        for u, v in self.gens_b:
            _addinto(fld, total, self.pair_b(u, v), one)
        if total != self.b.unit:
            raise InputError("gens_b do not decompose 1_B")

        # Every x in P splits as sum <x, q_k>_A p_k = sum p'_j <q'_j, x>_B,
        # and dually in Q; these power the transfer and tensor formulas.
        for i in range(p.dim):
            e = {i: one}
            got = {}
            for qk, pk in self.gens_b:
                _addinto(fld, got, p.left_act(self.pair_a(e, qk), pk), one)
            if got != e:
                raise InputError("P basis %d is not recovered from gens_b" % i)
            got = {}
            for pj, qj in self.gens_a:
                _addinto(fld, got, p.right_act(pj, self.pair_b(qj, e)), one)
            if got != e:
                raise InputError("P basis %d is not recovered from gens_a" % i)
        for j in range(q.dim):
            e = {j: one}
            got = {}
            for qk, pk in self.gens_b:
                _addinto(fld, got, q.right_act(qk, self.pair_a(pk, e)), one)
            if got != e:
                raise InputError("Q basis %d is not recovered from gens_b" % j)
            got = {}
            for pj, qj in self.gens_a:
                _addinto(fld, got, q.left_act(self.pair_b(e, pj), qj), one)
            if got != e:
                raise InputError("Q basis %d is not recovered from gens_a" % j)

        # The pairings must induce bijections P (x)_B Q -> A, Q (x)_A P -> B.
        for first, second, pair, target, name in (
                (p, q, self.pair_a, a, "A"),
                (q, p, self.pair_b, b, "B")):
            ten = tensor_over(first, second)
            if ten.dim != target.dim:
                raise InputError("tensor to %s has dimension %d, expected %d"
                                 % (name, ten.dim, target.dim))
            cols = []
            for col in ten.free:
                i, j = divmod(col, second.dim)
                cols.append(_dense(fld, pair({i: one}, {j: one}), target.dim))
            mat = [[cols[c][r] for c in range(len(cols))] for r in range(target.dim)]
            if invert_matrix(mat, fld) is None:
                raise InputError("pairing to %s does not induce a bijection" % name)
            # well-defined on the quotient: the pairing kills every relation
            for i in range(first.dim):
                for bvec in algebra_generators(first.right_alg):
                    xb = first.right_act({i: one}, bvec)
                    for j in range(second.dim):
                        lhs = pair(xb, {j: one})
                        rhs = pair({i: one}, second.left_act(bvec, {j: one}))
                        if lhs != rhs:
                            raise InputError("pairing to %s is not balanced" % name)


def identity_context(alg):
    """A seen as Morita equivalent to itself through the regular bimodule."""
    reg = regular_bimodule(alg)
    pairing = {(i, j): alg.multiply_basis(i, j)
               for i in range(alg.dim) for j in range(alg.dim)}
    gen = [(dict(alg.unit), dict(alg.unit))]
    return MoritaContext(alg, alg, reg, reg, dict(pairing), dict(pairing),
                         list(gen), list(gen))


def matrix_context(alg, n):
    """A against the matrix amplification M_n(A).

    B basis: E_rc x_g, flattened (r*n + c)*dim + g.  P is the row space
    A^(1 x n), Q the column space; both pairings are matrix products.
    """
    if n < 1:
        raise InputError("matrix amplification needs n >= 1")
    fld = alg.field
    d = alg.dim
    dim_b = n * n * d

    def bidx(r, c, g):
        return (r * n + c) * d + g

    btable = {}
    for r in range(n):
        for c in range(n):
            for g in range(d):
                for c2 in range(n):
                    for g2 in range(d):
                        prod = alg.multiply_basis(g, g2)
                        if prod:
                            btable[(bidx(r, c, g), bidx(c, c2, g2))] = \
                                {bidx(r, c2, k): v for k, v in prod.items()}
    bunit = {}
    for r in range(n):
        for u, cu in alg.unit.items():
            bunit[bidx(r, r, u)] = cu
    blabels = ["E%d%d*%s" % (r + 1, c + 1, alg.labels[g])
               for r in range(n) for c in range(n) for g in range(d)]
    b = FinDimAlgebra(fld, dim_b, btable, bunit, blabels, check=True)

    pdim = n * d

    def pidx(c, g):
        return c * d + g

    pleft, pright = {}, {}
    qleft, qright = {}, {}
    for t in range(d):
        for c in range(n):
            for g in range(d):
                prod = alg.multiply_basis(t, g)
                if prod:
                    pleft[(t, pidx(c, g))] = {pidx(c, k): v for k, v in prod.items()}
                prod = alg.multiply_basis(g, t)
                if prod:
                    qright[(pidx(c, g), t)] = {pidx(c, k): v for k, v in prod.items()}
    for c in range(n):
        for g in range(d):
            for g2 in range(d):
                prod = alg.multiply_basis(g, g2)
                if prod:
                    for c3 in range(n):
                        pright[(pidx(c, g), bidx(c, c3, g2))] = \
                            {pidx(c3, k): v for k, v in prod.items()}
                rprod = alg.multiply_basis(g2, g)
                if rprod:
                    for c3 in range(n):
                        qleft[(bidx(c3, c, g2), pidx(c, g))] = \
                            {pidx(c3, k): v for k, v in rprod.items()}
    p = Bimodule(alg, b, pdim, pleft, pright, check=True)
    q = Bimodule(b, alg, pdim, qleft, qright, check=True)

    pairing_a = {}
    pairing_b = {}
    for c in range(n):
        for g in range(d):
            for c2 in range(n):
                for g2 in range(d):
                    prod = alg.multiply_basis(g, g2)
                    if not prod:
                        continue
                    if c == c2:
                        pairing_a[(pidx(c, g), pidx(c2, g2))] = dict(prod)
                    pairing_b[(pidx(c, g), pidx(c2, g2))] = \
                        {bidx(c, c2, k): v for k, v in prod.items()}
    unit_slot = [{pidx(r, u): cu for u, cu in alg.unit.items()} for r in range(n)]
    gens_a = [(dict(unit_slot[0]), dict(unit_slot[0]))]
    gens_b = [(dict(unit_slot[r]), dict(unit_slot[r])) for r in range(n)]
    return MoritaContext(alg, b, p, q, pairing_a, pairing_b, gens_a, gens_b)


def idempotent_context(alg, evec):
    """A against the corner algebra eAe, through P = Ae and Q = eA.

    Raises NotFullIdempotent when 1_A cannot be written as a sum of
    products (x e)(e y), that is when AeA is a proper ideal.
    """
    fld = alg.field
    evec = _clean(fld, evec)
    if alg.mul(evec, evec) != evec:
        raise InputError("the given element is not idempotent")

    def span_of(images):
        solver = SpanSolver(fld)
        basis = []
        for vec in images:
            if vec and solver.add(vec, len(basis)):
                basis.append(vec)
        return solver, basis

    def coords(solver, vec):
        if not vec:
            return {}
        combo = solver.express(vec)
        if combo is None:
            raise InputError("product escapes the expected subspace")
        return _clean(fld, combo)

    e_images = [alg.mul(evec, alg.mul({i: fld.one}, evec)) for i in range(alg.dim)]
    bsolver, bbasis = span_of(e_images)
    p_images = [alg.mul({i: fld.one}, evec) for i in range(alg.dim)]
    psolver, pbasis = span_of(p_images)
    q_images = [alg.mul(evec, {i: fld.one}) for i in range(alg.dim)]
    qsolver, qbasis = span_of(q_images)

    btable = {}
    for r, x in enumerate(bbasis):
        for s, y in enumerate(bbasis):
            prod = alg.mul(x, y)
            if prod:
                btable[(r, s)] = coords(bsolver, prod)
    b = FinDimAlgebra(fld, len(bbasis), btable, coords(bsolver, evec), check=True)

    pleft, pright = {}, {}
    for r, x in enumerate(pbasis):
        for t in range(alg.dim):
            vec = alg.mul({t: fld.one}, x)
            if vec:
                pleft[(t, r)] = coords(psolver, vec)
        for s, y in enumerate(bbasis):
            vec = alg.mul(x, y)
            if vec:
                pright[(r, s)] = coords(psolver, vec)
    p = Bimodule(alg, b, len(pbasis), pleft, pright, check=True)

    qleft, qright = {}, {}
    for r, x in enumerate(qbasis):
        for s, y in enumerate(bbasis):
            vec = alg.mul(y, x)
            if vec:
                qleft[(s, r)] = coords(qsolver, vec)
        for t in range(alg.dim):
            vec = alg.mul(x, {t: fld.one})
            if vec:
                qright[(r, t)] = coords(qsolver, vec)
    q = Bimodule(b, alg, len(qbasis), qleft, qright, check=True)

    pairing_a = {}
    pairing_b = {}
    prod_in_a = {}
    for r, x in enumerate(pbasis):
        for s, y in enumerate(qbasis):
            vec = alg.mul(x, y)
            prod_in_a[(r, s)] = vec
            if vec:
                pairing_a[(r, s)] = vec
    for s, y in enumerate(qbasis):
        for r, x in enumerate(pbasis):
            vec = alg.mul(y, x)
            if vec:
                pairing_b[(s, r)] = coords(bsolver, vec)

    witness = SpanSolver(fld)
    tags = []
    for (r, s), vec in sorted(prod_in_a.items()):
        if vec:
            witness.add(vec, (r, s))
    combo = witness.express(alg.unit)
    if combo is None:
        raise NotFullIdempotent("AeA is a proper ideal; e is not full")
    gens_a = [({r: c}, {s: fld.one}) for (r, s), c in sorted(combo.items())]
    gens_b = [(coords(qsolver, evec), coords(psolver, evec))]
    return MoritaContext(alg, b, p, q, pairing_a, pairing_b, gens_a, gens_b)


def _phi_operator(ctx, n):
    """phi^n as a sparse linear map between cochain tables.

    Rows are keyed by (input key, output coordinate) on the A side; each
    row lists ((b_1..b_n), j) coefficients on the B side.  The inner sums
    over generator indices are matrix chains over the pair weights
    W(b, k)[u][v] = coeff_k <p_u, b . q_v>_A, closed off by the cyclic
    contraction against V(k0)[u][v] = <q_u, k0 . p_v>_B.
    """
    if n in ctx._phi_ops:
        return ctx._phi_ops[n]
    fld = ctx.field
    m = len(ctx.gens_b)
    dim_a, dim_b = ctx.a.dim, ctx.b.dim
    qs = [gv for gv, _ in ctx.gens_b]
    ps = [pv for _, pv in ctx.gens_b]

    weights = {}
    for bidx in range(dim_b):
        eb = {bidx: fld.one}
        mats = {}
        for u in range(m):
            for v in range(m):
                val = ctx.pair_a(ps[u], ctx.q.left_act(eb, qs[v]))
                for k, c in val.items():
                    mats.setdefault(k, [[fld.zero] * m for _ in range(m)])[u][v] = c
        for k, mat in mats.items():
            weights[(bidx, k)] = mat

    closer = {}
    for k0 in range(dim_a):
        for u in range(m):
            for v in range(m):
                val = ctx.pair_b(qs[u], ctx.p.left_act({k0: fld.one}, ps[v]))
                if val:
                    closer[(k0, u, v)] = val

    prefix = {((), ()): [[fld.one if i == j else fld.zero for j in range(m)]
                         for i in range(m)]}
    for _ in range(n):
        nxt = {}
        for (bt, kt), mat in prefix.items():
            for (bidx, k), w in weights.items():
                prod = matmul(mat, w, fld)
                if not _mat_is_zero(fld, prod):
                    nxt[(bt + (bidx,), kt + (k,))] = prod
        prefix = nxt

    rows = {}
    for (bt, kt), mat in prefix.items():
        for k0 in range(dim_a):
            out = {}
            for u in range(m):
                for v in range(m):
                    c = mat[u][v]
                    if c == fld.zero:
                        continue
                    val = closer.get((k0, u, v))
                    if val:
                        _addinto(fld, out, val, c)
            if out:
                row = rows.setdefault((kt, k0), {})
                for j, c in out.items():
                    row[(bt, j)] = c
    ctx._phi_ops[n] = rows
    return rows


def transfer_phi(ctx, f, n=None):
    """phi^n(f): cochains on A to cochains on B, literal in gens_b."""
    if n is None:
        n = f.degree
    if n != f.degree:
        raise InputError("cochain degree %d does not match n=%d" % (f.degree, n))
    if not 1 <= n <= 3:
        raise InputError("transfer is implemented for degrees 1..3")
    if f.dim != ctx.a.dim:
        raise InputError("cochain lives on an algebra of dimension %d, expected %d"
                         % (f.dim, ctx.a.dim))
    fld = ctx.field
    rows = _phi_operator(ctx, n)
    table = {}
    for key, vec in f.table.items():
        for k0, c in vec.items():
            row = rows.get((key, k0))
            if not row:
                continue
            for (bt, j), w in row.items():
                tv = table.setdefault(bt, {})
                s = fld.add(tv.get(j, fld.zero), fld.mul(c, w))
                if s == fld.zero:
                    tv.pop(j, None)
                else:
                    tv[j] = s
    table = {k: v for k, v in table.items() if v}
    return FullCochain(ctx.b.dim, n, fld, table)


def transfer_psi(ctx, g, n=None):
    """psi^n(g): cochains on B to cochains on A; phi of the swapped context."""
    return transfer_phi(ctx.swap(), g, n)


def homotopy_h(ctx, f, n=None):
    """The homotopy h^n sending an n-cochain on A to an (n-1)-cochain.

    Implemented for n = 2 and n = 3 from the displayed specializations
    h^2 = -h_1 + h_2 and h^3 = -h_1 + h_2 - h_3.  Together with the
    transfers it satisfies h d + d h = Id - psi phi on 2-cochains.
    """
    if n is None:
        n = f.degree
    if n != f.degree:
        raise InputError("cochain degree %d does not match n=%d" % (f.degree, n))
    if f.dim != ctx.a.dim:
        raise InputError("cochain lives on the wrong algebra")
    if n not in (2, 3):
        raise InputError("homotopy is implemented for degrees 2 and 3")
    fld = ctx.field
    alg = ctx.a
    # mixed brackets: ba[j][i] = <p'_j, q_i>_A and ab[i][j] = <p_i, q'_j>_A
    ba = [[ctx.pair_a(pj, qi) for qi, _ in ctx.gens_b] for pj, _ in ctx.gens_a]
    ab = [[ctx.pair_a(pi, qj) for _, qj in ctx.gens_a] for _, pi in ctx.gens_b]
    mp = len(ctx.gens_a)
    m = len(ctx.gens_b)
    table = {}

    def emit(key, vec, sign):
        if not vec:
            return
        tv = table.setdefault(key, {})
        _addinto(fld, tv, vec, sign)
        if not tv:
            table.pop(key, None)

    minus, plus = fld.neg(fld.one), fld.one
    if n == 2:
        for t in range(alg.dim):
            et = {t: fld.one}
            for j in range(mp):
                for i in range(m):
                    emit((t,), f.evaluate(ba[j][i], alg.mul(ab[i][j], et)), minus)
            for j0 in range(mp):
                for i0 in range(m):
                    for j1 in range(mp):
                        for i1 in range(m):
                            inner = f.evaluate(alg.mul(ab[i0][j0], et), ba[j1][i1])
                            val = alg.mul(ba[j0][i0], alg.mul(inner, ab[i1][j1]))
                            emit((t,), val, plus)
    else:
        for t0 in range(alg.dim):
            for t1 in range(alg.dim):
                e0, e1 = {t0: fld.one}, {t1: fld.one}
                key = (t0, t1)
                for j in range(mp):
                    for i in range(m):
                        emit(key, f.evaluate(ba[j][i], alg.mul(ab[i][j], e0), e1), minus)
                for j0 in range(mp):
                    for i0 in range(m):
                        for j1 in range(mp):
                            for i1 in range(m):
                                inner = f.evaluate(alg.mul(ab[i0][j0], e0), ba[j1][i1],
                                                   alg.mul(ab[i1][j1], e1))
                                emit(key, alg.mul(ba[j0][i0], inner), plus)
                for j0 in range(mp):
                    for i0 in range(m):
                        for j1 in range(mp):
                            for i1 in range(m):
                                left = alg.mul(alg.mul(ab[i0][j0], e0), ba[j1][i1])
                                mid = alg.mul(ab[i1][j1], e1)
                                for j2 in range(mp):
                                    for i2 in range(m):
                                        inner = f.evaluate(left, mid, ba[j2][i2])
                                        val = alg.mul(ba[j0][i0],
                                                      alg.mul(inner, ab[i2][j2]))
                                        emit(key, val, minus)
    return FullCochain(alg.dim, n - 1, fld, table)


class DeformedBimodule:
    """Bimodule uple (M0, M1, T, f_M, g_M) over deformed scalars.

    M0 and M1 are (left_alg, right_alg)-bimodules, T: M0 -> M1 an
    injective bimodule map, f_tables[i] the matrix of f_M(e_i (x) -) and
    g_tables[j] of g_M(- (x) e_j).  The conditions make M0 + M1 an
    (A_f, B_g)-bimodule under

        (a, b)(m0, m1) = (a m0, a m1 + b T(m0) + f_M(a (x) m0)),
        (m0, m1)(b, c) = (m0 b, m1 b + T(m0) c + g_M(m0 (x) b)).
    """

    def __init__(self, left_alg, right_alg, f, g, m0, m1, t,
                 f_tables, g_tables, check=True):
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.f = f
        self.g = g
        self.m0 = m0
        self.m1 = m1
        self.t = t
        self.f_tables = f_tables
        self.g_tables = g_tables
        self.field = left_alg.field
        if check:
            bad = self.violations()
            if bad:
                raise InputError("; ".join(bad))

    def f_corr(self, avec, mvec):
        fld = self.field
        out = [fld.zero] * self.m1.dim
        for i, ci in avec.items():
            col = matvec(self.f_tables[i], _dense(fld, mvec, self.m0.dim), fld)
            for r, c in enumerate(col):
                out[r] = fld.add(out[r], fld.mul(ci, c))
        return _clean(fld, {r: c for r, c in enumerate(out)})

    def g_corr(self, mvec, bvec):
        fld = self.field
        out = [fld.zero] * self.m1.dim
        for j, cj in bvec.items():
            col = matvec(self.g_tables[j], _dense(fld, mvec, self.m0.dim), fld)
            for r, c in enumerate(col):
                out[r] = fld.add(out[r], fld.mul(cj, c))
        return _clean(fld, {r: c for r, c in enumerate(out)})

    def violations(self):
        fld = self.field
        la, ra = self.left_alg, self.right_alg
        m0, m1, t = self.m0, self.m1, self.t
        out = list(m0.violations())
        out.extend(m1.violations())
        if rank(t, fld) != m0.dim:
            out.append("T is not injective")
        for i in range(la.dim):
            if matmul(t, m0.left_matrix(i), fld) != matmul(m1.left_matrix(i), t, fld):
                out.append("T does not intertwine the left action of %s" % la.labels[i])
        for j in range(ra.dim):
            if matmul(t, m0.right_matrix(j), fld) != matmul(m1.right_matrix(j), t, fld):
                out.append("T does not intertwine the right action of %s" % ra.labels[j])

        # a0 f_M(a1 (x) m) - f_M(a0 a1 (x) m) + f_M(a0 (x) a1 m) = f(a0 (x) a1) T(m)
        for i0 in range(la.dim):
            for i1 in range(la.dim):
                acc = matmul(m1.left_matrix(i0), self.f_tables[i1], fld)
                for k, c in la.multiply_basis(i0, i1).items():
                    acc = _mat_sub(fld, acc, _mat_scale(fld, self.f_tables[k], c))
                acc = _mat_add(fld, acc, matmul(self.f_tables[i0],
                                                m0.left_matrix(i1), fld))
                for k, c in self.f.value((i0, i1)).items():
                    acc = _mat_sub(fld, acc,
                                   _mat_scale(fld, matmul(m1.left_matrix(k), t, fld), c))
                if not _mat_is_zero(fld, acc):
                    out.append("left correction fails at (%s, %s)"
                               % (la.labels[i0], la.labels[i1]))
        # T(m) g(b0 (x) b1) + g_M(m (x) b0 b1) = g_M(m (x) b0) b1 + g_M(m b0 (x) b1)
        for j0 in range(ra.dim):
            for j1 in range(ra.dim):
                acc = _zeros(fld, m1.dim, m0.dim)
                for k, c in self.g.value((j0, j1)).items():
                    acc = _mat_add(fld, acc,
                                   _mat_scale(fld, matmul(m1.right_matrix(k), t, fld), c))
                for k, c in ra.multiply_basis(j0, j1).items():
                    acc = _mat_add(fld, acc, _mat_scale(fld, self.g_tables[k], c))
                acc = _mat_sub(fld, acc, matmul(m1.right_matrix(j1),
                                                self.g_tables[j0], fld))
                acc = _mat_sub(fld, acc, matmul(self.g_tables[j1],
                                                m0.right_matrix(j0), fld))
                if not _mat_is_zero(fld, acc):
                    out.append("right correction fails at (%s, %s)"
                               % (ra.labels[j0], ra.labels[j1]))
        # a g_M(m (x) b) - g_M(a m (x) b) + f_M(a (x) m b) - f_M(a (x) m) b = 0
        for i in range(la.dim):
            for j in range(ra.dim):
                acc = matmul(m1.left_matrix(i), self.g_tables[j], fld)
                acc = _mat_sub(fld, acc, matmul(self.g_tables[j],
                                                m0.left_matrix(i), fld))
                acc = _mat_add(fld, acc, matmul(self.f_tables[i],
                                                m0.right_matrix(j), fld))
                acc = _mat_sub(fld, acc, matmul(m1.right_matrix(j),
                                                self.f_tables[i], fld))
                if not _mat_is_zero(fld, acc):
                    out.append("corrections are not compatible at (%s, %s)"
                               % (la.labels[i], ra.labels[j]))
        return out

    def glue(self, left_def, right_def):
        """The concrete (A_f, B_g)-bimodule on M0 + M1."""
        fld = self.field
        n0, n1 = self.m0.dim, self.m1.dim
        na, nb = self.left_alg.dim, self.right_alg.dim
        left, right = {}, {}

        def fill(table, key, top, bottom):
            vec = {}
            for r, c in top.items():
                vec[r] = c
            for r, c in bottom.items():
                vec[n0 + r] = c
            vec = _clean(fld, vec)
            if vec:
                table[key] = vec

        tcols = [_clean(fld, dict(enumerate(col))) for col in zip(*self.t)]
        for m in range(n0):
            em = {m: fld.one}
            for i in range(na):
                fill(left, (i, m), self.m0.left_basis(i, m),
                     self.f_corr({i: fld.one}, em))
                fill(left, (na + i, m), {},
                     self.m1.left_act({i: fld.one}, tcols[m]))
            for j in range(nb):
                fill(right, (m, j), self.m0.right_basis(m, j),
                     self.g_corr(em, {j: fld.one}))
                fill(right, (m, nb + j), {},
                     self.m1.right_act(tcols[m], {j: fld.one}))
        for m in range(n1):
            for i in range(na):
                vec = self.m1.left_basis(i, m)
                if vec:
                    left[(i, n0 + m)] = {n0 + r: c for r, c in vec.items()}
            for j in range(nb):
                vec = self.m1.right_basis(m, j)
                if vec:
                    right[(n0 + m, j)] = {n0 + r: c for r, c in vec.items()}
        return Bimodule(left_def, right_def, n0 + n1, left, right, check=True)


def _half(field):
    two = field.add(field.one, field.one)
    if two == field.zero:
        raise CharTwoUnsupported("the deformed bimodule maps divide by 2")
    return field.inv(two)


def build_hat_P(ctx, f, g=None, check=True):
    """The deformed bimodule P^ = (P, P, Id, f_P, g_P) over (A_f, B_g)."""
    fld = ctx.field
    half = _half(fld)
    if not is_full_cocycle(f, ctx.a):
        raise InputError("f must be a Hochschild 2-cocycle on A")
    if g is None:
        g = transfer_phi(ctx, f, 2)
    p = ctx.p
    h2f = homotopy_h(ctx, f, 2)
    one = fld.one
    f_tables = []
    for i in range(ctx.a.dim):
        ei = {i: one}
        hvec = h2f.value((i,))
        cols = []
        for x in range(p.dim):
            ex = {x: one}
            acc = {}
            for qk, pk in ctx.gens_b:
                val = f.evaluate(ei, ctx.pair_a(ex, qk))
                _addinto(fld, acc, p.left_act(val, pk), one)
            for p0, q0 in ctx.gens_a:
                for p1, q1 in ctx.gens_a:
                    mid = ctx.pair_b(q0, p.left_act(ei, p1))
                    val = g.evaluate(mid, ctx.pair_b(q1, ex))
                    _addinto(fld, acc, p.right_act(p0, val), one)
            _addinto(fld, acc, p.left_act(hvec, ex), one)
            cols.append(_scaled(fld, acc, half))
        f_tables.append([[cols[x].get(r, fld.zero) for x in range(p.dim)]
                         for r in range(p.dim)])
    g_tables = []
    for j in range(ctx.b.dim):
        ej = {j: one}
        cols = []
        for x in range(p.dim):
            ex = {x: one}
            acc = {}
            for (qk0, pk0) in ctx.gens_b:
                first = ctx.pair_a(ex, qk0)
                moved = p.right_act(pk0, ej)
                for (qk1, pk1) in ctx.gens_b:
                    val = f.evaluate(first, ctx.pair_a(moved, qk1))
                    _addinto(fld, acc, p.left_act(val, pk1), one)
            for p0, q0 in ctx.gens_a:
                val = g.evaluate(ctx.pair_b(q0, ex), ej)
                _addinto(fld, acc, p.right_act(p0, val), one)
            cols.append(_scaled(fld, acc, half))
        g_tables.append([[cols[x].get(r, fld.zero) for x in range(p.dim)]
                         for r in range(p.dim)])
    ident = [[fld.one if i == j else fld.zero for j in range(p.dim)]
             for i in range(p.dim)]
    return DeformedBimodule(ctx.a, ctx.b, f, g, p, p, ident,
                            f_tables, g_tables, check=check)


def build_hat_Q(ctx, f, g=None, check=True):
    """The deformed bimodule Q^ = (Q, Q, Id, g_Q, f_Q) over (B_g, A_f)."""
    fld = ctx.field
    half = _half(fld)
    if not is_full_cocycle(f, ctx.a):
        raise InputError("f must be a Hochschild 2-cocycle on A")
    if g is None:
        g = transfer_phi(ctx, f, 2)
    q = ctx.q
    h2f = homotopy_h(ctx, f, 2)
    one = fld.one
    g_tables = []
    for j in range(ctx.b.dim):
        ej = {j: one}
        cols = []
        for y in range(q.dim):
            ey = {y: one}
            acc = {}
            for (qk0, pk0) in ctx.gens_b:
                moved = ctx.p.right_act(pk0, ej)
                for (qk1, pk1) in ctx.gens_b:
                    val = f.evaluate(ctx.pair_a(moved, qk1), ctx.pair_a(pk1, ey))
                    _addinto(fld, acc, q.right_act(qk0, val), one)
            for p0, q0 in ctx.gens_a:
                val = g.evaluate(ej, ctx.pair_b(ey, p0))
                _addinto(fld, acc, q.left_act(val, q0), one)
            cols.append(_scaled(fld, acc, half))
        g_tables.append([[cols[y].get(r, fld.zero) for y in range(q.dim)]
                         for r in range(q.dim)])
    f_tables = []
    for i in range(ctx.a.dim):
        ei = {i: one}
        hvec = h2f.value((i,))
        cols = []
        for y in range(q.dim):
            ey = {y: one}
            acc = {}
            for qk, pk in ctx.gens_b:
                val = f.evaluate(ctx.pair_a(pk, ey), ei)
                _addinto(fld, acc, q.right_act(qk, val), one)
            for p0, q0 in ctx.gens_a:
                first = ctx.pair_b(ey, p0)
                for p1, q1 in ctx.gens_a:
                    val = g.evaluate(first, ctx.pair_b(q0, ctx.p.left_act(ei, p1)))
                    _addinto(fld, acc, q.left_act(val, q1), one)
            _addinto(fld, acc, q.right_act(ey, hvec), one)
            cols.append(_scaled(fld, acc, half))
        f_tables.append([[cols[y].get(r, fld.zero) for y in range(q.dim)]
                         for r in range(q.dim)])
    ident = [[fld.one if i == j else fld.zero for j in range(q.dim)]
             for i in range(q.dim)]
    return DeformedBimodule(ctx.b, ctx.a, g, f, q, q, ident,
                            g_tables, f_tables, check=check)


def regular_deformed_uple(alg, f):
    """(A, A, Id, f, f): the uple whose glue is the regular A_f-bimodule."""
    fld = alg.field
    reg = regular_bimodule(alg)
    f_tables = []
    g_tables = []
    for i in range(alg.dim):
        f_tables.append([[f.value((i, m)).get(r, fld.zero) for m in range(alg.dim)]
                         for r in range(alg.dim)])
        g_tables.append([[f.value((m, i)).get(r, fld.zero) for m in range(alg.dim)]
                         for r in range(alg.dim)])
    ident = [[fld.one if i == j else fld.zero for j in range(alg.dim)]
             for i in range(alg.dim)]
    return DeformedBimodule(alg, alg, f, f, reg, reg, ident,
                            f_tables, g_tables, check=False)


def triple_violations(src, tgt, u0, u1, u2):
    """Failures of (u0, u1, u2) as a morphism of bimodule uples."""
    fld = src.field
    la, ra = src.left_alg, src.right_alg
    out = []
    if matmul(tgt.t, u0, fld) != matmul(u2, src.t, fld):
        out.append("square T u0 != u2 T fails")
    for i in range(la.dim):
        if matmul(u0, src.m0.left_matrix(i), fld) != \
                matmul(tgt.m0.left_matrix(i), u0, fld):
            out.append("u0 is not left linear over %s" % la.labels[i])
        if matmul(u2, src.m1.left_matrix(i), fld) != \
                matmul(tgt.m1.left_matrix(i), u2, fld):
            out.append("u2 is not left linear over %s" % la.labels[i])
        lhs = matmul(u1, src.m0.left_matrix(i), fld)
        rhs = matmul(tgt.m1.left_matrix(i), u1, fld)
        rhs = _mat_sub(fld, rhs, matmul(u2, src.f_tables[i], fld))
        rhs = _mat_add(fld, rhs, matmul(tgt.f_tables[i], u0, fld))
        if lhs != rhs:
            out.append("left correction rule fails for %s" % la.labels[i])
    for j in range(ra.dim):
        if matmul(u0, src.m0.right_matrix(j), fld) != \
                matmul(tgt.m0.right_matrix(j), u0, fld):
            out.append("u0 is not right linear over %s" % ra.labels[j])
        if matmul(u2, src.m1.right_matrix(j), fld) != \
                matmul(tgt.m1.right_matrix(j), u2, fld):
            out.append("u2 is not right linear over %s" % ra.labels[j])
        lhs = matmul(u1, src.m0.right_matrix(j), fld)
        rhs = matmul(tgt.m1.right_matrix(j), u1, fld)
        rhs = _mat_sub(fld, rhs, matmul(u2, src.g_tables[j], fld))
        rhs = _mat_add(fld, rhs, matmul(tgt.g_tables[j], u0, fld))
        if lhs != rhs:
            out.append("right correction rule fails for %s" % ra.labels[j])
    return out


def _tensor_side(ctx, f, g, s_def, t_def, hat1, hat2, target, prefix):
    """One side of the equivalence: hat1 (x)_{T_def} hat2 = regular S_def.

    Splits the balanced product into a complement and the kernel of the
    pairing, carves the bimodule uple out of it, and checks that the
    explicit pairing triple (w0, w1, w2) is an isomorphism onto
    (A, A, Id, f, f).
    """
    fld = ctx.field
    s_alg = ctx.a
    ns = s_alg.dim
    one = fld.one
    checks = []

    x = hat1.glue(s_def, t_def)
    y = hat2.glue(t_def, s_def)
    ten = tensor_over(x, y)
    z = ten.bimodule
    checks.append((prefix + "tensor-dimension", z.dim == 2 * ns,
                   "dim %d, expected %d" % (z.dim, 2 * ns)))
    if z.dim != 2 * ns:
        return checks

    def action_of(vec, side):
        acc = _zeros(fld, z.dim, z.dim)
        for i, c in vec.items():
            mat = z.left_matrix(i) if side == "left" else z.right_matrix(i)
            acc = _mat_add(fld, acc, _mat_scale(fld, mat, c))
        return acc

    eps = {ns + i: c for i, c in s_alg.unit.items()}
    t_left = action_of(eps, "left")
    t_right = action_of(eps, "right")
    checks.append((prefix + "central-t-action", t_left == t_right,
                   "left and right action of (0, 1) on the tensor"))

    pdim, qdim = hat1.m0.dim, hat2.m0.dim
    zero_pairs = all(not ten.pure_vec({pdim + i: one}, {qdim + j: one})
                     for i in range(pdim) for j in range(qdim))
    checks.append((prefix + "second-slot-collapse", zero_pairs,
                   "(0, x) (x) (0, y) vanishes in the tensor"))

    ker = nullspace(t_left, fld)
    k_solver = SpanSolver(fld)
    k_keys, k_cols = [], []
    in_kernel = True
    z1_vecs = {}
    for i in range(pdim):
        for j in range(qdim):
            vec = ten.pure_vec({i: one}, {qdim + j: one})
            z1_vecs[(i, j)] = vec
            dense = _dense(fld, vec, z.dim)
            if any(c != fld.zero for c in matvec(t_left, dense, fld)):
                in_kernel = False
                continue
            if k_solver.add(vec, (i, j)):
                k_keys.append((i, j))
                k_cols.append(dense)
    ok_ker = in_kernel and len(k_keys) == len(ker) == ns
    checks.append((prefix + "kernel-description", ok_ker,
                   "(x, 0) (x) (0, y) spans ker T: rank %d, nullity %d"
                   % (len(k_keys), len(ker))))
    if not ok_ker:
        return checks

    # corrected generators (x, sum g_M(p' (x) <q', x>)) (x) (y, 0); T sends
    # the one at (i, j) to the kernel generator at (i, j), so indexing them
    # by the kernel basis keys forces the splitting to be direct
    w1_vals = {}
    z0_vecs = {}
    for i in range(pdim):
        ex = {i: one}
        xhat = {i: one}
        for p0, q0 in ctx.gens_a:
            _addinto(fld, xhat, {pdim + r: c for r, c in
                                 hat1.g_corr(p0, ctx.pair_b(q0, ex)).items()}, one)
        for j in range(qdim):
            ey = {j: one}
            z0_vecs[(i, j)] = ten.pure_vec(xhat, ey)
            val = {}
            for p0, q0 in ctx.gens_a:
                corr = hat1.g_corr(p0, ctx.pair_b(q0, ex))
                _addinto(fld, val, ctx.pair_a(corr, ey), one)
            for qk, pk in ctx.gens_b:
                first = ctx.pair_a(ex, qk)
                _addinto(fld, val, ctx.pair_a(hat1.f_corr(first, pk), ey),
                         fld.neg(one))
                _addinto(fld, val, f.evaluate(first, ctx.pair_a(pk, ey)), one)
            w1_vals[(i, j)] = val

    c_keys = list(k_keys)
    c_cols = [_dense(fld, z0_vecs[key], z.dim) for key in c_keys]
    direct = rank([list(col) for col in c_cols + k_cols], fld) == 2 * ns
    checks.append((prefix + "complement-split", direct,
                   "corrected generators complement the kernel"))
    if not direct:
        return checks

    cmat = [[col[r] for col in c_cols] for r in range(z.dim)]
    kmat = [[col[r] for col in k_cols] for r in range(z.dim)]
    schange = [cmat[r] + kmat[r] for r in range(z.dim)]
    sinv = invert_matrix(schange, fld)
    tc = matmul(sinv, matmul(t_left, cmat, fld), fld)
    top_zero = all(tc[r][c] == fld.zero for r in range(ns) for c in range(ns))
    carved_t = [[tc[ns + r][c] for c in range(ns)] for r in range(ns)]
    ok_t = top_zero and invert_matrix(carved_t, fld) is not None
    checks.append((prefix + "t-isomorphism", ok_t,
                   "T maps the complement bijectively onto the kernel"))
    if not ok_t:
        return checks

    left0, right0, f_tabs, g_tabs = {}, {}, [], []
    left1, right1 = {}, {}
    carve_ok = True
    for i in range(ns):
        lz = z.left_matrix(i)
        rz = z.right_matrix(i)
        lc = matmul(sinv, matmul(lz, cmat, fld), fld)
        rc = matmul(sinv, matmul(rz, cmat, fld), fld)
        lk = matmul(sinv, matmul(lz, kmat, fld), fld)
        rk = matmul(sinv, matmul(rz, kmat, fld), fld)
        if any(lk[r][c] != fld.zero or rk[r][c] != fld.zero
               for r in range(ns) for c in range(ns)):
            carve_ok = False
        for m in range(ns):
            v0 = _clean(fld, {r: lc[r][m] for r in range(ns)})
            if v0:
                left0[(i, m)] = v0
            v0 = _clean(fld, {r: rc[r][m] for r in range(ns)})
            if v0:
                right0[(m, i)] = v0
            v1 = _clean(fld, {r: lk[ns + r][m] for r in range(ns)})
            if v1:
                left1[(i, m)] = v1
            v1 = _clean(fld, {r: rk[ns + r][m] for r in range(ns)})
            if v1:
                right1[(m, i)] = v1
        f_tabs.append([[lc[ns + r][m] for m in range(ns)] for r in range(ns)])
        g_tabs.append([[rc[ns + r][m] for m in range(ns)] for r in range(ns)])
    checks.append((prefix + "summands-stable", carve_ok,
                   "both splitting summands are stable under the plain action"))
    if not carve_ok:
        return checks

    m0 = Bimodule(s_alg, s_alg, ns, left0, right0, check=False)
    m1 = Bimodule(s_alg, s_alg, ns, left1, right1, check=False)
    z_uple = DeformedBimodule(s_alg, s_alg, f, f, m0, m1, carved_t,
                              f_tabs, g_tabs, check=False)
    bad = z_uple.violations()
    checks.append((prefix + "quotient-uple", not bad,
                   "carved uple conditions: %s" % (bad[0] if bad else "all hold")))

    w0 = [[_dense(fld, ctx.pair_a({i: one}, {j: one}), ns)[r]
           for (i, j) in c_keys] for r in range(ns)]
    w1 = [[_dense(fld, w1_vals[key], ns)[r] for key in c_keys] for r in range(ns)]
    w2 = [[_dense(fld, ctx.pair_a({i: one}, {j: one}), ns)[r]
           for (i, j) in k_keys] for r in range(ns)]
    bad = triple_violations(z_uple, target, w0, w1, w2)
    checks.append((prefix + "pairing-morphism", not bad,
                   bad[0] if bad else "w = (w0, w1, w2) is a morphism of uples"))

    w_block = [[w0[r][c] if c < ns else fld.zero for c in range(2 * ns)]
               for r in range(ns)]
    w_block += [[w1[r][c] if c < ns else w2[r][c - ns] for c in range(2 * ns)]
                for r in range(ns)]
    w_full = matmul(w_block, sinv, fld)

    # the displayed w formulas are stated for arbitrary sums of corrected
    # generators; the linear extension from the chosen basis must agree
    # with them on every pure generator
    ok_wd = True
    for i in range(pdim):
        for j in range(qdim):
            got = matvec(w_full, _dense(fld, z0_vecs[(i, j)], z.dim), fld)
            pairing = ctx.pair_a({i: one}, {j: one})
            want = _dense(fld, pairing, ns) + _dense(fld, w1_vals[(i, j)], ns)
            if got != want:
                ok_wd = False
            got = matvec(w_full, _dense(fld, z1_vecs[(i, j)], z.dim), fld)
            want = [fld.zero] * ns + _dense(fld, pairing, ns)
            if got != want:
                ok_wd = False
    checks.append((prefix + "pairing-well-defined", ok_wd,
                   "w agrees with its defining formulas on all pure generators"))

    w0i = invert_matrix(w0, fld)
    w2i = invert_matrix(w2, fld)
    ok_inv = w0i is not None and w2i is not None
    checks.append((prefix + "pairing-invertible", ok_inv,
                   "w0 and w2 are invertible"))
    if not ok_inv or bad:
        return checks

    w1i = _mat_scale(fld, matmul(w2i, matmul(w1, w0i, fld), fld), fld.neg(one))
    bad = triple_violations(target, z_uple, w0i, w1i, w2i)
    ident = [[one if r == c else fld.zero for c in range(ns)] for r in range(ns)]
    zero = _zeros(fld, ns, ns)
    back = (matmul(w0i, w0, fld),
            _mat_add(fld, matmul(w2i, w1, fld), matmul(w1i, w0, fld)),
            matmul(w2i, w2, fld))
    fore = (matmul(w0, w0i, fld),
            _mat_add(fld, matmul(w2, w1i, fld), matmul(w1, w0i, fld)),
            matmul(w2, w2i, fld))
    ok_comp = (not bad and back == (ident, zero, ident)
               and fore == (ident, zero, ident))
    checks.append((prefix + "inverse-morphism", ok_comp,
                   "the inverse triple composes to the identity both ways"))

    ok_conc = invert_matrix(w_full, fld) is not None
    for i in range(s_def.dim):
        if matmul(w_full, z.left_matrix(i), fld) != \
                matmul(s_def.left_matrix(i), w_full, fld):
            ok_conc = False
        if matmul(w_full, z.right_matrix(i), fld) != \
                matmul(s_def.right_matrix(i), w_full, fld):
            ok_conc = False
    checks.append((prefix + "concrete-isomorphism", ok_conc,
                   "glued w intertwines both deformed actions"))
    return checks


def verify_morita_deformed(ctx, f):
    """Full certificate that hat P (x) hat Q = A_f and hat Q (x) hat P = B_g.

    Returns a list of (name, passed, detail) triples covering both sides:
    the transferred cocycle, the deformed bimodule conditions, the split
    of the balanced product, and the explicit pairing isomorphism with
    its inverse.
    """
    fld = ctx.field
    if fld.add(fld.one, fld.one) == fld.zero:
        raise CharTwoUnsupported("the deformed bimodule maps divide by 2")
    if f.degree != 2 or f.dim != ctx.a.dim:
        raise InputError("expected a 2-cochain on A")
    if not is_full_cocycle(f, ctx.a):
        raise InputError("f must be a Hochschild 2-cocycle on A")
    checks = []
    g = transfer_phi(ctx, f, 2)
    checks.append(("transferred-cocycle", is_full_cocycle(g, ctx.b),
                   "phi^2(f) is a 2-cocycle on B"))
    hat_p = build_hat_P(ctx, f, g, check=False)
    bad = hat_p.violations()
    checks.append(("deformed-p-bimodule", not bad,
                   bad[0] if bad else "hat P satisfies all bimodule conditions"))
    hat_q = build_hat_Q(ctx, f, g, check=False)
    bad = hat_q.violations()
    checks.append(("deformed-q-bimodule", not bad,
                   bad[0] if bad else "hat Q satisfies all bimodule conditions"))
    if not all(ok for _, ok, _ in checks):
        return checks
    s_def = deform_structure_algebra(ctx.a, f)
    t_def = deform_structure_algebra(ctx.b, g)
    target_a = regular_deformed_uple(ctx.a, f)
    target_b = regular_deformed_uple(ctx.b, g)
    checks += _tensor_side(ctx, f, g, s_def, t_def, hat_p, hat_q,
                           target_a, "A-side:")
    checks += _tensor_side(ctx.swap(), g, f, t_def, s_def, hat_q, hat_p,
                           target_b, "B-side:")
    return checks
