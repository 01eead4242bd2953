"""Hochschild cochains in degrees 1 to 3 and their differential.

Two cochain flavours live here.  `Cochain` is the reduced complex
relative to the vertex subalgebra: a degree-n cochain is determined by
its values on composable n-tuples of non-trivial basis paths, and the
value on (g_1, ..., g_n) must land in the corner e_{s(g_1)} A e_{t(g_n)}.
Tuples that are not composable, or contain a trivial path, are forced
to zero.  `FullCochain` is the unreduced complex on an algebra given by
structure constants; transfers across a Morita context live there, and
`extend_to_full` embeds the first flavour into the second by zero
extension.

The reduced complex only makes sense when products of radical elements
stay in the radical, which is exactly what admissible relations
guarantee; the differential refuses otherwise.
"""

from .errors import InputError
from .linalg import rank, solve
from .quiver import AlgebraElement


def _composable_tuples(basis, n):
    """Composable n-tuples of non-trivial basis paths, in basis order."""
    q = basis.quiver
    rad = [basis.paths[i] for i in basis.radical_indices]
    by_source = {}
    for p in rad:
        by_source.setdefault(q.path_source(p), []).append(p)
    out = []

    def extend(prefix, tgt):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for p in by_source.get(tgt, []):
            prefix.append(p)
            extend(prefix, q.path_target(p))
            prefix.pop()

    for p in rad:
        extend([p], q.path_target(p))
    return out


def _corner_indices(basis, src, tgt):
    return [i for i in range(basis.dim)
            if basis.path_source_of_index(i) == src
            and basis.path_target_of_index(i) == tgt]


class Cochain:
    """Reduced relative cochain of degree 1, 2 or 3."""

    def __init__(self, basis, degree, table):
        if degree not in (1, 2, 3):
            raise InputError("cochain degree must be 1, 2 or 3")
        self.basis = basis
        self.degree = degree
        q = basis.quiver
        self.table = {}
        for key, value in table.items():
            # keys are tuples of paths, also in degree 1: (path,)
            key = tuple(key)
            if len(key) != degree:
                raise InputError("cochain key %r has wrong arity" % (key,))
            for p in key:
                if p not in basis.index:
                    raise InputError("cochain key path %s is not a basis path"
                                     % q.path_str(p))
                if len(p) == 1:
                    raise InputError("cochain keys must be non-trivial paths")
            for a, b in zip(key, key[1:]):
                if q.path_target(a) != q.path_source(b):
                    raise InputError("cochain key %s is not composable"
                                     % " | ".join(q.path_str(p) for p in key))
            if value.is_zero():
                continue
            src = q.path_source(key[0])
            tgt = q.path_target(key[-1])
            for i in value.coeffs:
                if (basis.path_source_of_index(i) != src
                        or basis.path_target_of_index(i) != tgt):
                    raise InputError(
                        "value of cochain at %s leaves the corner e_%s A e_%s"
                        % (" | ".join(q.path_str(p) for p in key),
                           q.vertices[src], q.vertices[tgt]))
            self.table[key] = value

    def value(self, key):
        v = self.table.get(tuple(key))
        return v if v is not None else self.basis.zero()

    def is_zero(self):
        return not self.table

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.basis is other.basis
                and self.degree == other.degree
                and {k: v.coeffs for k, v in self.table.items()}
                == {k: v.coeffs for k, v in other.table.items()})

    def __add__(self, other):
        if self.degree != other.degree or self.basis is not other.basis:
            raise InputError("cochain mismatch in addition")
        keys = set(self.table) | set(other.table)
        return Cochain(self.basis, self.degree,
                       {k: self.value(k) + other.value(k) for k in keys})

    def __sub__(self, other):
        return self + other.scale(self.basis.field.neg(self.basis.field.one))

    def scale(self, c):
        return Cochain(self.basis, self.degree,
                       {k: v.scale(c) for k, v in self.table.items()})

    def evaluate(self, *elems):
        """Multilinear evaluation on algebra elements; trivial basis
        components contribute zero (reduced complex)."""
        if len(elems) != self.degree:
            raise InputError("expected %d arguments" % self.degree)
        basis = self.basis
        f = basis.field
        out = basis.zero()
        paths = basis.paths

        def rec(pos, key, coeff):
            nonlocal out
            if pos == len(elems):
                out = out + self.value(tuple(key)).scale(coeff)
                return
            for i, c in elems[pos].coeffs.items():
                if len(paths[i]) == 1:
                    continue
                key.append(paths[i])
                rec(pos + 1, key, f.mul(coeff, c))
                key.pop()

        rec(0, [], f.one)
        return out

    def coordinates(self):
        """Sparse coordinate dict {(key, value index): scalar}."""
        return {(k, i): c
                for k, v in self.table.items() for i, c in v.coeffs.items()}


def cochain_from_pairs(basis, pairs):
    """Degree-2 cochain from {(path, path): FreeElement} as parsed from
    cocycle lines of an algebra file."""
    table = {}
    for (p1, p2), value in pairs.items():
        table[(p1, p2)] = basis.normal_form(value)
    return Cochain(basis, 2, table)


def _radical_product(x, y, basis):
    prod = x * y
    for i in prod.coeffs:
        if len(basis.paths[i]) == 1:
            raise InputError(
                "product of radical elements has a trivial component; the "
                "reduced complex needs admissible relations")
    return prod


def differential(f, basis):
    """d f in the reduced complex; degree goes up by one."""
    if f.degree >= 3:
        raise InputError("differential supported up to degree 2 inputs")
    n = f.degree
    fld = basis.field
    sign_last = fld.one if (n + 1) % 2 == 0 else fld.neg(fld.one)
    table = {}
    for key in _composable_tuples(basis, n + 1):
        elems = [basis.element_from_path(p) for p in key]
        total = elems[0] * f.evaluate(*[basis.element_from_path(p) for p in key[1:]])
        sign = fld.one
        for j in range(n):
            sign = fld.neg(sign)
            merged = _radical_product(elems[j], elems[j + 1], basis)
            args = ([basis.element_from_path(p) for p in key[:j]] + [merged]
                    + [basis.element_from_path(p) for p in key[j + 2:]])
            total = total + f.evaluate(*args).scale(sign)
        total = total + (f.evaluate(*[basis.element_from_path(p) for p in key[:-1]])
                         * elems[-1]).scale(sign_last)
        if not total.is_zero():
            table[key] = total
    return Cochain(basis, n + 1, table)


def is_cocycle(f, basis):
    if f.degree != 2:
        raise InputError("is_cocycle expects a degree-2 cochain")
    return differential(f, basis).is_zero()


def _coordinate_list(basis, n):
    """All legal (key, value index) coordinates of degree n, in a fixed
    deterministic order."""
    q = basis.quiver
    coords = []
    for key in _composable_tuples(basis, n):
        src = q.path_source(key[0])
        tgt = q.path_target(key[-1])
        for i in _corner_indices(basis, src, tgt):
            coords.append((key, i))
    return coords


def basis_cochain(basis, key, i):
    return Cochain(basis, len(key), {key: basis.basis_element(i)})


def _differential_matrix(basis, n):
    """Columns: d of each degree-n basis cochain, in degree n+1
    coordinates.  Returns (rows, domain coords, codomain index map)."""
    dom = _coordinate_list(basis, n)
    cod = _coordinate_list(basis, n + 1)
    cod_index = {c: r for r, c in enumerate(cod)}
    fld = basis.field
    cols = []
    for key, i in dom:
        img = differential(basis_cochain(basis, key, i), basis)
        col = {}
        for coord, c in img.coordinates().items():
            col[cod_index[coord]] = c
        cols.append(col)
    rows = [[fld.zero] * len(dom) for _ in range(len(cod))]
    for j, col in enumerate(cols):
        for r, c in col.items():
            rows[r][j] = c
    return rows, dom, cod_index


def cobound_solve(f, basis):
    """Degree-1 g with dg = f, or None.  f must be a 2-cocycle."""
    if f.degree != 2:
        raise InputError("cobound_solve expects a degree-2 cochain")
    if not is_cocycle(f, basis):
        raise InputError("cobound_solve expects a 2-cocycle")
    rows, dom, cod_index = _differential_matrix(basis, 1)
    fld = basis.field
    target = [fld.zero] * len(cod_index)
    for coord, c in f.coordinates().items():
        target[cod_index[coord]] = c
    x = solve(rows, target, fld)
    if x is None:
        return None
    table = {}
    for (key, i), c in zip(dom, x):
        if c != fld.zero:
            cur = table.get(key, basis.zero())
            table[key] = cur + basis.basis_element(i).scale(c)
    return Cochain(basis, 1, table)


def hh_summary(basis):
    """(dim Z^2, dim B^2, dim HH^2) on the reduced complex."""
    d2_rows, dom2, _ = _differential_matrix(basis, 2)
    d1_rows, _, _ = _differential_matrix(basis, 1)
    fld = basis.field
    rank_d2 = rank(d2_rows, fld)
    rank_d1 = rank(d1_rows, fld)
    dim_z2 = len(dom2) - rank_d2
    return dim_z2, rank_d1, dim_z2 - rank_d1


def hh_dimension(basis, n=2):
    if n != 2:
        raise InputError("only dim HH^2 is supported")
    return hh_summary(basis)[2]


class FullCochain:
    """Unreduced cochain on a structure-constant algebra.

    Conceptually total on all basis index tuples; stored sparsely as
    table[(i_1, ..., i_n)] = {j: c} with missing entries zero.
    """

    def __init__(self, dim, degree, field, table=None):
        self.dim = dim
        self.degree = degree
        self.field = field
        self.table = {}
        if table:
            for key, vec in table.items():
                if len(key) != degree:
                    raise InputError("full cochain key of wrong arity")
                clean = {j: c for j, c in vec.items() if c != field.zero}
                if clean:
                    self.table[tuple(key)] = clean

    def value(self, key):
        return self.table.get(tuple(key), {})

    def is_zero(self):
        return not self.table

    def __eq__(self, other):
        return (isinstance(other, FullCochain) and self.dim == other.dim
                and self.degree == other.degree and self.table == other.table)

    def __add__(self, other):
        f = self.field
        keys = set(self.table) | set(other.table)
        out = {}
        for k in keys:
            vec = dict(self.value(k))
            for j, c in other.value(k).items():
                vec[j] = f.add(vec.get(j, f.zero), c)
            out[k] = vec
        return FullCochain(self.dim, self.degree, f, out)

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one))

    def scale(self, c):
        f = self.field
        return FullCochain(self.dim, self.degree, f,
                           {k: {j: f.mul(c, v) for j, v in vec.items()}
                            for k, vec in self.table.items()})

    def evaluate(self, *vecs):
        """Multilinear evaluation on coordinate dicts, returning one."""
        if len(vecs) != self.degree:
            raise InputError("expected %d arguments" % self.degree)
        f = self.field
        out = {}

        def rec(pos, key, coeff):
            if pos == len(vecs):
                for j, c in self.value(tuple(key)).items():
                    s = f.add(out.get(j, f.zero), f.mul(coeff, c))
                    if s == f.zero:
                        out.pop(j, None)
                    else:
                        out[j] = s
                return
            for i, c in vecs[pos].items():
                if c == f.zero:
                    continue
                key.append(i)
                rec(pos + 1, key, f.mul(coeff, c))
                key.pop()

        rec(0, [], f.one)
        return out


def extend_to_full(f, basis):
    """Zero-extend a reduced cochain to the full complex of A."""
    return FullCochain(basis.dim, f.degree, basis.field,
                       {tuple(basis.index[p] for p in key): dict(v.coeffs)
                        for key, v in f.table.items()})


def _vec_mul(x, y, alg):
    f = alg.field
    out = {}
    for i, ci in x.items():
        for j, cj in y.items():
            for k, ck in alg.multiply_basis(i, j).items():
                s = f.add(out.get(k, f.zero), f.mul(f.mul(ci, cj), ck))
                if s == f.zero:
                    out.pop(k, None)
                else:
                    out[k] = s
    return out


def full_differential(F, alg):
    """Unreduced differential; alg provides dim, field, multiply_basis."""
    n = F.degree
    f = alg.field
    sign_last = f.one if (n + 1) % 2 == 0 else f.neg(f.one)
    table = {}
    rng = range(alg.dim)

    def tuples(length):
        if length == 0:
            yield ()
            return
        for head in rng:
            for rest in tuples(length - 1):
                yield (head,) + rest

    for key in tuples(n + 1):
        units = [{i: f.one} for i in key]
        total = _vec_mul(units[0], F.evaluate(*units[1:]), alg)

        def acc(vec, sign):
            for j, c in vec.items():
                s = f.add(total.get(j, f.zero), f.mul(sign, c))
                if s == f.zero:
                    total.pop(j, None)
                else:
                    total[j] = s

        sign = f.one
        for j in range(n):
            sign = f.neg(sign)
            merged = alg.multiply_basis(key[j], key[j + 1])
            args = units[:j] + [merged] + units[j + 2:]
            acc(F.evaluate(*args), sign)
        acc(_vec_mul(F.evaluate(*units[:-1]), units[-1], alg), sign_last)
        if total:
            table[key] = total
    return FullCochain(alg.dim, n + 1, f, table)


def is_full_cocycle(F, alg):
    if F.degree != 2:
        raise InputError("is_full_cocycle expects a degree-2 cochain")
    return full_differential(F, alg).is_zero()
