"""Quivers, the path algebra kQ, and finite-dimensional quotients kQ/I.

Paths are tuples (source_vertex_index, arrow_index, arrow_index, ...);
the trivial path at vertex v is (v,).  Arrows compose left to right, so
the path a*b traverses a first and requires t(a) = s(b).

Quotients are handled by a two-sided rewriting system: relations are
completed into a confluent set of rules (leading word -> smaller
element) under the degree-lexicographic order whose lex ties are broken
by declaration order, earlier arrow = larger.  That tie direction is
forced by the quotient conventions used throughout: with relation
a*b + q*b*a the path a*b must reduce and b*a must stay standard.

Standard monomials (paths with no rule word as a subword) then form an
exact basis of kQ/I, and every normal form is exact, not truncated: the
completion resolves all overlap ambiguities, so the diamond lemma
applies to words of every length.
"""

from collections import deque

from .errors import InputError, NotFiniteDimensional


def path_order_key(p):
    # larger key = larger monomial: longer first, then earlier-declared
    # arrows (smaller index) win lex ties
    return (len(p) - 1, tuple(-a for a in p[1:]), -p[0])


class Quiver:
    def __init__(self, vertices, arrows):
        """vertices: list of id strings; arrows: list of (name, src_id, tgt_id)."""
        if not vertices:
            raise InputError("a quiver needs at least one vertex")
        if len(set(vertices)) != len(vertices):
            raise InputError("duplicate vertex ids")
        self.vertices = [str(v) for v in vertices]
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        names = [a[0] for a in arrows]
        if len(set(names)) != len(names):
            raise InputError("duplicate arrow names")
        if set(names) & set(self.vertices):
            raise InputError("arrow names may not collide with vertex ids")
        self.arrows = []
        for name, s, t in arrows:
            s, t = str(s), str(t)
            if s not in self.vindex or t not in self.vindex:
                raise InputError("arrow %s : %s -> %s has an unknown endpoint" % (name, s, t))
            self.arrows.append((str(name), self.vindex[s], self.vindex[t]))
        self.aindex = {a[0]: i for i, a in enumerate(self.arrows)}

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def trivial_path(self, vertex_id):
        return (self.vindex[str(vertex_id)],)

    def arrow_path(self, name):
        i = self.aindex[name]
        return (self.arrows[i][1], i)

    def path_source(self, p):
        return p[0]

    def path_target(self, p):
        return self.arrows[p[-1]][2] if len(p) > 1 else p[0]

    def compose(self, p, q):
        """Concatenation p*q, or None if t(p) != s(q)."""
        if self.path_target(p) != q[0]:
            return None
        return p + q[1:]

    def vertex_seq(self, p):
        seq = [p[0]]
        for a in p[1:]:
            seq.append(self.arrows[a][2])
        return seq

    def path_str(self, p):
        if len(p) == 1:
            return "e(%s)" % self.vertices[p[0]]
        return "*".join(self.arrows[a][0] for a in p[1:])

    def path_from_arrow_names(self, names):
        idxs = [self.aindex[n] for n in names]
        p = (self.arrows[idxs[0]][1],) + tuple(idxs)
        for a, b in zip(idxs, idxs[1:]):
            if self.arrows[a][2] != self.arrows[b][1]:
                raise InputError("arrows do not compose: %s" % "*".join(names))
        return p


class FreeElement:
    """A k-linear combination of paths (an element of the path algebra kQ)."""

    __slots__ = ("quiver", "field", "terms")

    def __init__(self, quiver, field, terms=None):
        self.quiver = quiver
        self.field = field
        self.terms = {}
        if terms:
            for p, c in terms.items():
                if c != field.zero:
                    self.terms[p] = c

    @classmethod
    def zero(cls, quiver, field):
        return cls(quiver, field)

    @classmethod
    def from_path(cls, quiver, field, p, coeff=None):
        return cls(quiver, field, {p: field.one if coeff is None else coeff})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, FreeElement) and self.quiver is other.quiver
                and self.terms == other.terms)

    def __add__(self, other):
        f = self.field
        out = dict(self.terms)
        for p, c in other.terms.items():
            s = f.add(out.get(p, f.zero), c)
            if s == f.zero:
                out.pop(p, None)
            else:
                out[p] = s
        return FreeElement(self.quiver, f, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = self.field
        return FreeElement(self.quiver, f, {p: f.neg(c) for p, c in self.terms.items()})

    def scale(self, c):
        f = self.field
        if c == f.zero:
            return FreeElement.zero(self.quiver, f)
        return FreeElement(self.quiver, f, {p: f.mul(c, v) for p, v in self.terms.items()})

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def __mul__(self, other):
        if not isinstance(other, FreeElement):
            return self.scale(other)
        f = self.field
        q = self.quiver
        out = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                p = q.compose(p1, p2)
                if p is None:
                    continue
                s = f.add(out.get(p, f.zero), f.mul(c1, c2))
                if s == f.zero:
                    out.pop(p, None)
                else:
                    out[p] = s
        return FreeElement(q, f, out)

    def leading(self):
        """(path, coeff) of the largest monomial, or None."""
        if not self.terms:
            return None
        p = max(self.terms, key=path_order_key)
        return p, self.terms[p]

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for p in sorted(self.terms, key=lambda t: (len(t) - 1, t[1:], t[0])):
            c = self.terms[p]
            bits.append("%s*%s" % (self.field.to_str(c), self.quiver.path_str(p)))
        return " + ".join(bits)


def relation_endpoints(elem):
    """Common (source, target) of all terms; raises if they disagree."""
    if elem.is_zero():
        raise InputError("zero relation")
    q = elem.quiver
    ends = {(q.path_source(p), q.path_target(p)) for p in elem.terms}
    if len(ends) != 1:
        raise InputError("relation mixes sources/targets: %r" % elem)
    return next(iter(ends))


def validate_admissible_relations(relations):
    """Input-side shape check: every term a path of length >= 2."""
    for r in relations:
        relation_endpoints(r)
        for p in r.terms:
            if len(p) - 1 < 2:
                raise InputError(
                    "input relation has a term of length %d (admissible "
                    "presentations need length >= 2): %r" % (len(p) - 1, r))


class RewriteSystem:
    """Completed two-sided rewriting system for an ideal of kQ.

    Rules map a monic leading word to the element it rewrites to.  All
    overlap ambiguities (including the insertion ambiguities of rules
    whose leading word is a trivial path) are resolved, so reduction
    computes exact normal forms in every degree.
    """

    def __init__(self, quiver, field, elements, degree_cap):
        self.quiver = quiver
        self.field = field
        self.degree_cap = degree_cap
        self.rules = {}  # leading path -> FreeElement
        pending = deque(e for e in elements if not e.is_zero())
        while pending:
            elem = self.reduce(pending.popleft())
            if elem.is_zero():
                continue
            w, c = elem.leading()
            if len(w) - 1 > degree_cap:
                raise NotFiniteDimensional(
                    "completion produced a rule of degree %d beyond the bound %d"
                    % (len(w) - 1, degree_cap))
            inv = field.inv(c)
            rhs_terms = {p: field.neg(field.mul(inv, v))
                         for p, v in elem.terms.items() if p != w}
            rhs = FreeElement(quiver, field, rhs_terms)
            # older rules whose leading word the new rule reaches must be redone
            for old in [ow for ow in self.rules if self._word_hits(w, ow)]:
                old_rhs = self.rules.pop(old)
                pending.append(FreeElement.from_path(quiver, field, old) - old_rhs)
            for other_w, other_rhs in list(self.rules.items()) + [(w, rhs)]:
                for s in self._spolys(w, rhs, other_w, other_rhs):
                    pending.append(s)
                if other_w != w:
                    for s in self._spolys(other_w, other_rhs, w, rhs):
                        pending.append(s)
            self.rules[w] = rhs
        # canonical form: rule right-hand sides fully reduced
        for w in list(self.rules):
            self.rules[w] = self.reduce(self.rules[w])

    def _word_hits(self, w, target):
        """Does rule word w match somewhere inside the word `target`?"""
        if len(w) == 1:
            return w[0] in self.quiver.vertex_seq(target)
        wa, ta = w[1:], target[1:]
        n, m = len(wa), len(ta)
        return any(ta[i:i + n] == wa for i in range(m - n + 1))

    def _subpaths(self, p, i, j):
        """Path formed by arrows i..j-1 of p (trivial when i == j)."""
        if i == j:
            return (self.quiver.vertex_seq(p)[i],)
        return (self.quiver.vertex_seq(p)[i],) + p[1 + i:1 + j]

    def _spolys(self, w1, r1, w2, r2):
        """Elements witnessing the ambiguities of w1 against w2."""
        q, f = self.quiver, self.field
        out = []
        a1, a2 = w1[1:], w2[1:]
        if len(a1) == 0:
            # trivial-path rule inserted at every visit of its vertex
            v = w1[0]
            seq = q.vertex_seq(w2)
            for i, u in enumerate(seq):
                if u != v:
                    continue
                left = FreeElement.from_path(q, f, self._subpaths(w2, 0, i))
                right = FreeElement.from_path(q, f, self._subpaths(w2, i, len(a2)))
                out.append(r2 - left * r1 * right)
            return out
        if len(a2) == 0:
            return out  # handled with the roles swapped
        # proper overlaps: suffix of w1 = prefix of w2
        for k in range(1, min(len(a1), len(a2))):
            if a1[len(a1) - k:] != a2[:k]:
                continue
            u = FreeElement.from_path(q, f, self._subpaths(w1, 0, len(a1) - k))
            v = FreeElement.from_path(q, f, self._subpaths(w2, k, len(a2)))
            out.append(r1 * v - u * r2)
        return out

    def _find_match(self, p):
        """(left, word, right) splitting p around some rule word, or None."""
        q = self.quiver
        seq = q.vertex_seq(p)
        arrows = p[1:]
        for w in self.rules:
            wa = w[1:]
            if not wa:
                for i, u in enumerate(seq):
                    if u == w[0]:
                        return self._subpaths(p, 0, i), w, self._subpaths(p, i, len(arrows))
                continue
            n = len(wa)
            for i in range(len(arrows) - n + 1):
                if arrows[i:i + n] == wa:
                    return self._subpaths(p, 0, i), w, self._subpaths(p, i + n, len(arrows))
        return None

    def reduce(self, elem):
        """Exact normal form of elem modulo the ideal."""
        f = self.field
        q = self.quiver
        terms = dict(elem.terms)
        while True:
            best = None
            for p in terms:
                m = self._find_match(p)
                if m is None:
                    continue
                if best is None or path_order_key(p) > path_order_key(best[0]):
                    best = (p, m)
            if best is None:
                break
            p, (left, w, right) = best
            c = terms.pop(p)
            replaced = FreeElement.from_path(q, f, left) * self.rules[w] \
                * FreeElement.from_path(q, f, right)
            for rp, rc in replaced.terms.items():
                s = f.add(terms.get(rp, f.zero), f.mul(c, rc))
                if s == f.zero:
                    terms.pop(rp, None)
                else:
                    terms[rp] = s
        return FreeElement(q, f, terms)

    def is_reducible(self, p):
        return self._find_match(p) is not None

    def standard_monomials(self, max_len):
        """All irreducible paths, certified shorter than max_len.

        Irreducible paths are closed under subwords, so if none of length
        exactly max_len exists the enumeration is complete; otherwise the
        quotient is not certified finite-dimensional and we refuse.
        """
        q = self.quiver
        out = []
        layer = []
        for v in range(len(q.vertices)):
            p = (v,)
            if not self.is_reducible(p):
                layer.append(p)
        by_target = {}
        for i, (_, s, t) in enumerate(q.arrows):
            by_target.setdefault(s, []).append(i)
        while layer:
            out.extend(layer)
            if len(layer[0]) - 1 >= max_len:
                raise NotFiniteDimensional(
                    "a standard monomial of length %d survives (bound %d); "
                    "the quotient is not certified finite-dimensional"
                    % (max_len, max_len))
            nxt = []
            for p in layer:
                for a in by_target.get(q.path_target(p), []):
                    cand = p + (a,)
                    if not self.is_reducible(cand):
                        nxt.append(cand)
            layer = nxt
        return out


class AlgebraElement:
    """Element of kQ/I in basis coordinates: {basis index: scalar}."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis, coeffs=None):
        self.basis = basis
        f = basis.field
        self.coeffs = {}
        if coeffs:
            for i, c in coeffs.items():
                if c != f.zero:
                    self.coeffs[i] = c

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and self.basis is other.basis
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        f = self.basis.field
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            s = f.add(out.get(i, f.zero), c)
            if s == f.zero:
                out.pop(i, None)
            else:
                out[i] = s
        return AlgebraElement(self.basis, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = self.basis.field
        return AlgebraElement(self.basis, {i: f.neg(c) for i, c in self.coeffs.items()})

    def scale(self, c):
        f = self.basis.field
        if c == f.zero:
            return AlgebraElement(self.basis)
        return AlgebraElement(self.basis, {i: f.mul(c, v) for i, v in self.coeffs.items()})

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        b = self.basis
        f = b.field
        out = {}
        for i, ci in self.coeffs.items():
            for j, cj in other.coeffs.items():
                prod = b.table.get((i, j))
                if not prod:
                    continue
                c = f.mul(ci, cj)
                for k, ck in prod.items():
                    s = f.add(out.get(k, f.zero), f.mul(c, ck))
                    if s == f.zero:
                        out.pop(k, None)
                    else:
                        out[k] = s
        return AlgebraElement(b, out)

    def to_free(self):
        b = self.basis
        return FreeElement(b.quiver, b.field,
                           {b.paths[i]: c for i, c in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return repr(self.to_free())


class AlgebraBasis:
    """Monomial basis of kQ/I with exact normal forms and products.

    paths holds the standard monomials sorted by (length, declaration
    order); index is its inverse; table maps composable basis pairs to
    the coordinates of their product.
    """

    def __init__(self, quiver, field, relations, rewrite, paths, max_degree):
        self.quiver = quiver
        self.field = field
        self.relations = list(relations)
        self.rewrite = rewrite
        self.paths = paths
        self.index = {p: i for i, p in enumerate(paths)}
        self.dim = len(paths)
        self.max_degree = max_degree
        self.trivial_indices = [i for i, p in enumerate(paths) if len(p) == 1]
        self.radical_indices = [i for i, p in enumerate(paths) if len(p) > 1]
        self.table = {}
        for i, p in enumerate(paths):
            for j, q in enumerate(paths):
                comp = quiver.compose(p, q)
                if comp is None:
                    continue
                nf = rewrite.reduce(FreeElement.from_path(quiver, field, comp))
                if not nf.is_zero():
                    self.table[(i, j)] = {self.index[t]: c for t, c in nf.terms.items()}

    def zero(self):
        return AlgebraElement(self)

    def unit(self):
        return AlgebraElement(self, {i: self.field.one for i in self.trivial_indices})

    def basis_element(self, i):
        return AlgebraElement(self, {i: self.field.one})

    def element_from_path(self, p):
        return self.normal_form(FreeElement.from_path(self.quiver, self.field, p))

    def normal_form(self, x):
        """Image of a free element in kQ/I, in basis coordinates."""
        nf = self.rewrite.reduce(x)
        return AlgebraElement(self, {self.index[p]: c for p, c in nf.terms.items()})

    def reduces_to_zero(self, x):
        return self.rewrite.reduce(x).is_zero()

    def contains_ideal_of(self, other_relations):
        """Do all the given free elements lie in this algebra's ideal?"""
        return all(self.reduces_to_zero(r) for r in other_relations)

    def multiply_basis(self, i, j):
        """Coordinates of the product of basis elements i and j."""
        return self.table.get((i, j), {})

    def path_source_of_index(self, i):
        return self.quiver.path_source(self.paths[i])

    def path_target_of_index(self, i):
        return self.quiver.path_target(self.paths[i])

    def label(self, i):
        return self.quiver.path_str(self.paths[i])


def compute_basis(quiver, relations, field, max_degree=30):
    """Standard-monomial basis of kQ/<relations>, exact.

    Raises NotFiniteDimensional when a standard monomial of length
    max_degree survives or completion escapes the degree cap.
    """
    if max_degree < 2:
        raise InputError("max_degree must be at least 2")
    for r in relations:
        if not r.is_zero():
            relation_endpoints(r)
    rewrite = RewriteSystem(quiver, field, relations, degree_cap=2 * max_degree)
    paths = rewrite.standard_monomials(max_degree)
    paths.sort(key=lambda p: (len(p) - 1, p[1:], p[0]))
    return AlgebraBasis(quiver, field, relations, rewrite, paths, max_degree)


def normal_form(x, basis):
    return basis.normal_form(x)


def multiply(a, b, basis):
    if a.basis is not basis or b.basis is not basis:
        raise InputError("elements belong to a different basis")
    return a * b


def decompose_unit(basis):
    """The trivial basis paths; their classes sum to 1."""
    return [basis.paths[i] for i in basis.trivial_indices]
