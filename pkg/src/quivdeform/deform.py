"""The doubled algebra twisted by a 2-cocycle, and its presentation.

For a 2-cocycle f on A the deformed algebra lives on A + A with

    (a0, b0) (a1, b1) = (a0 a1, a0 b1 + b0 a1 + f(a0, a1)),

which is associative exactly because f is a cocycle.  This module
builds that algebra, the path-lifting map hat_f, and a quiver
presentation of the deformed algebra: every original arrow is doubled
to a hatted copy, vertices whose idempotent is missed by the image of f
get a new loop, and three relation families cut the result down to the
right size.  Everything claimed is then re-verified by independent
computation in verify_presentation.
"""

from .errors import EpsilonUnresolvable, InputError, NormalizationFailed, SignResolutionFailed
from .hochschild import Cochain, cobound_solve, is_cocycle
from .linalg import SpanSolver, rank
from .quiver import (AlgebraElement, FreeElement, Quiver, compute_basis,
                     relation_endpoints)


class DeformedAlgebra:
    """A + A with multiplication twisted by the cocycle f.

    Basis: (gamma, 0) for gamma in the basis of A, then (0, gamma); so
    index i < n is (basis path i, 0) and n + i is (0, basis path i).
    """

    def __init__(self, basis, f, check_cocycle=True):
        if f.degree != 2 or f.basis is not basis:
            raise InputError("deformation needs a degree-2 cochain on this algebra")
        if check_cocycle and not is_cocycle(f, basis):
            raise InputError("not a 2-cocycle; the deformed product would "
                             "not be associative")
        self.basis = basis
        self.f = f
        self.field = basis.field
        self.n = basis.dim
        self.dim = 2 * basis.dim
        self.table = {}
        for i in range(self.dim):
            for j in range(self.dim):
                prod = self._basis_product(i, j)
                if prod:
                    self.table[(i, j)] = prod
        self.unit_indices = list(basis.trivial_indices)

    def _basis_product(self, i, j):
        n = self.n
        basis = self.basis
        fld = self.field
        out = {}

        def put_first(elem):
            for k, c in elem.coeffs.items():
                out[k] = fld.add(out.get(k, fld.zero), c)

        def put_second(elem):
            for k, c in elem.coeffs.items():
                out[n + k] = fld.add(out.get(n + k, fld.zero), c)

        if i < n and j < n:
            put_first(basis.basis_element(i) * basis.basis_element(j))
            put_second(self.f.evaluate(basis.basis_element(i),
                                       basis.basis_element(j)))
        elif i < n <= j:
            put_second(basis.basis_element(i) * basis.basis_element(j - n))
        elif j < n <= i:
            put_second(basis.basis_element(i - n) * basis.basis_element(j))
        return {k: c for k, c in out.items() if c != fld.zero}

    def multiply_basis(self, i, j):
        return self.table.get((i, j), {})

    def unit(self):
        return (self.basis.unit(), self.basis.zero())

    def zero_pair(self):
        return (self.basis.zero(), self.basis.zero())

    def pair_to_coords(self, pair):
        a, b = pair
        vec = dict(a.coeffs)
        for k, c in b.coeffs.items():
            vec[self.n + k] = c
        return vec

    def coords_to_pair(self, vec):
        a = {}
        b = {}
        for k, c in vec.items():
            if k < self.n:
                a[k] = c
            else:
                b[k - self.n] = c
        return (AlgebraElement(self.basis, a), AlgebraElement(self.basis, b))

    def label(self, i):
        if i < self.n:
            return self.basis.label(i)
        return "t*" + self.basis.label(i - self.n)

    def label_index(self, text):
        from .fileio import parse_path
        text = "".join(text.split())
        second = text.startswith("t*")
        if second:
            text = text[2:]
        p = parse_path(text, self.basis.quiver)
        if p not in self.basis.index:
            raise InputError("label %r is not a basis path" % text)
        i = self.basis.index[p]
        return self.n + i if second else i

    def associativity_holds(self):
        """Exhaustive check of (xy)z = x(yz) on basis triples."""
        fld = self.field
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.multiply_basis(i, j)
                for k in range(self.dim):
                    jk = self.multiply_basis(j, k)
                    left = {}
                    for l, c in ij.items():
                        for m, d in self.multiply_basis(l, k).items():
                            left[m] = fld.add(left.get(m, fld.zero), fld.mul(c, d))
                    right = {}
                    for l, c in jk.items():
                        for m, d in self.multiply_basis(i, l).items():
                            right[m] = fld.add(right.get(m, fld.zero), fld.mul(c, d))
                    left = {m: c for m, c in left.items() if c != fld.zero}
                    right = {m: c for m, c in right.items() if c != fld.zero}
                    if left != right:
                        return False
        return True


def deformed_multiply(x, y, deformed):
    """(a0, b0)(a1, b1) in the deformed algebra."""
    a0, b0 = x
    a1, b1 = y
    basis = deformed.basis
    if (a0.basis is not basis or b0.basis is not basis
            or a1.basis is not basis or b1.basis is not basis):
        raise InputError("pair components belong to a different algebra")
    return (a0 * a1, a0 * b1 + b0 * a1 + deformed.f.evaluate(a0, a1))


def hat_f(w, basis, f):
    """Value of the path-lifting map on a free element.

    On a path a_1 ... a_s this is the sum over cut points of
    f(class of a_1..a_i, class of a_{i+1}) times the class of the tail,
    and zero for paths of length at most one.
    """
    q = basis.quiver
    out = basis.zero()
    for p, c in w.terms.items():
        s = len(p) - 1
        if s <= 1:
            continue
        src = p[0]
        for i in range(1, s):
            prefix = basis.element_from_path((src,) + p[1:1 + i])
            arrow = basis.element_from_path(q.arrow_path(q.arrows[p[1 + i]][0]))
            head = f.evaluate(prefix, arrow)
            if head.is_zero():
                continue
            tail_arrows = p[2 + i:]
            if tail_arrows:
                tail_src = q.arrows[tail_arrows[0]][1]
                tail = basis.element_from_path((tail_src,) + tail_arrows)
                head = head * tail
            out = out + head.scale(c)
    return out


def _image_pairs(basis, f):
    """All (key pair, value) entries of f over composable basis pairs."""
    return [(key, v) for key, v in f.table.items()]


def _hat_multiple_span(basis, f, endpoints=None):
    """SpanSolver over hat_f of u*rho*v multiples of the relations.

    Tags are (u, relation index, v).  With endpoints=(i, i) only
    multiples starting and ending at that vertex are taken.
    """
    q = basis.quiver
    fld = basis.field
    solver = SpanSolver(fld)
    bound = basis.max_degree
    for k, rel in enumerate(basis.relations):
        max_term = max(len(p) - 1 for p in rel.terms)
        for u in basis.paths:
            for v in basis.paths:
                if (len(u) - 1) + max_term + (len(v) - 1) > bound:
                    continue
                if endpoints is not None:
                    if (q.path_source(u) != endpoints[0]
                            or q.path_target(v) != endpoints[1]):
                        continue
                m = FreeElement.from_path(q, fld, u) * rel \
                    * FreeElement.from_path(q, fld, v)
                if m.is_zero():
                    continue
                val = hat_f(m, basis, f)
                if val.is_zero():
                    continue
                solver.add(dict(val.coeffs), (u, k, v))
    return solver


class ImageConditionReport:
    def __init__(self, ok, witnesses, failing):
        self.ok = ok
        self.witnesses = witnesses  # key pair -> {(u, rel idx, v): coeff}
        self.failing = failing      # key pairs with no expression


def check_image_condition(basis, f):
    """Is every value of f expressible through hat_f of ideal elements?"""
    solver = _hat_multiple_span(basis, f)
    witnesses = {}
    failing = []
    for key, value in _image_pairs(basis, f):
        combo = solver.express(dict(value.coeffs))
        if combo is None:
            failing.append(key)
        else:
            witnesses[key] = combo
    return ImageConditionReport(not failing, witnesses, failing)


def _arrow_cuts(q, p):
    """Occurrences of arrows inside p: (left path, arrow index, right path)."""
    out = []
    src = p[0]
    arrows = p[1:]
    for i, a in enumerate(arrows):
        left = (src,) + arrows[:i]
        a_src = q.arrows[a][1]
        right_arrows = arrows[i + 1:]
        if right_arrows:
            right = (q.arrows[a][2],) + right_arrows
        else:
            right = (q.arrows[a][2],)
        out.append((left, a, right))
    return out


def _radical_expansion(elem, basis):
    for i in elem.coeffs:
        if len(basis.paths[i]) == 1:
            raise InputError("product of radical elements left the radical; "
                             "relations must be admissible")
    return elem


def _transported_cocycle(basis, f):
    """The cohomologous representative obtained by pushing f through
    the two projective resolutions (down with the contracting homotopy,
    back up with the cut-point comparison map)."""
    q = basis.quiver
    fld = basis.field

    def one_chains(path):
        # image of the generator at a radical basis path in the
        # arrow-spanned resolution: one term per arrow occurrence
        return [(fld.one, basis.element_from_path(left), a,
                 basis.element_from_path(right))
                for left, a, right in _arrow_cuts(q, path)]

    def scale_chain(chain, c, left=None, right=None):
        out = []
        for coef, l, a, r in chain:
            nl = left * l if left is not None else l
            nr = r * right if right is not None else r
            out.append((fld.mul(coef, c), nl, a, nr))
        return out

    table = {}
    rad = [basis.paths[i] for i in basis.radical_indices]
    for w1 in rad:
        for w2 in rad:
            if q.path_target(w1) != q.path_source(w2):
                continue
            e1 = basis.element_from_path(w1)
            e2 = basis.element_from_path(w2)
            chain = []
            chain += scale_chain(one_chains(w2), fld.one, left=e1)
            prod = _radical_expansion(e1 * e2, basis)
            for i, c in prod.coeffs.items():
                chain += scale_chain(one_chains(basis.paths[i]), fld.neg(c))
            chain += scale_chain(one_chains(w1), fld.one, right=e2)
            # push each term a (x) arrow (x) b through the relation-spanned
            # resolution and evaluate
            total = basis.zero()
            for coef, l, a, r in chain:
                for li, lc in l.coeffs.items():
                    gamma = basis.paths[li]
                    if len(gamma) == 1:
                        continue  # a trivial left slot contributes nothing
                    word = q.compose(gamma, (q.arrows[a][1], a))
                    if word is None:
                        continue
                    expansion = basis.element_from_path(word)
                    rho = FreeElement.from_path(q, fld, word) - expansion.to_free()
                    if rho.is_zero():
                        continue
                    val = hat_f(rho, basis, f)
                    if val.is_zero():
                        continue
                    total = total + (val * r).scale(fld.mul(coef, lc))
            if not total.is_zero():
                table[(w1, w2)] = total
    return Cochain(basis, 2, table)


def normalize_cocycle(basis, f):
    """Replace f by a cohomologous cocycle whose image condition holds.

    Returns f itself when the condition already holds.
    """
    if check_image_condition(basis, f).ok:
        return f
    f2 = _transported_cocycle(basis, f)
    if not is_cocycle(f2, basis):
        raise NormalizationFailed("transported representative is not a cocycle")
    if cobound_solve(f - f2, basis) is None:
        raise NormalizationFailed("transported representative changed the "
                                  "cohomology class")
    if not check_image_condition(basis, f2).ok:
        raise NormalizationFailed("transported representative still fails "
                                  "the image condition")
    return f2


class EpsilonEntry:
    """How the square-zero element at a vertex is realised: a fresh
    loop arrow, or a combination of lifted relations."""

    def __init__(self, kind, element, witness):
        self.kind = kind        # "arrow" or "combination"
        self.element = element  # FreeElement over the deformed quiver
        self.witness = witness  # arrow name, or {relation index: scalar}


class EpsilonTable:
    def __init__(self, entries):
        self.entries = entries  # vertex id -> EpsilonEntry

    def __getitem__(self, vertex_id):
        return self.entries[vertex_id]


class Presentation:
    """Quiver presentation of a deformed algebra."""

    def __init__(self, quiver, relations, origins, hat_names, epsilon,
                 dashed, extended):
        self.quiver = quiver
        self.relations = relations
        self.origins = origins
        self.hat_names = hat_names      # original arrow name -> hatted name
        self.epsilon = epsilon
        self.dashed = dashed            # names of the added loops
        self.extended = extended        # multiples appended to the relation set
        for r in relations:
            relation_endpoints(r)


def _hat_path(p, quiver_f):
    # arrows of the deformed quiver list the hatted originals first, in
    # order, so indices carry over
    return p


def _hat_free(elem, quiver_f, field):
    return FreeElement(quiver_f, field,
                       {_hat_path(p, quiver_f): c for p, c in elem.terms.items()})


def build_presentation(basis, f, max_degree=None):
    """Quiver and relations presenting the deformed algebra.

    Needs the image condition; raises InputError otherwise (normalize
    first).  Returns (Presentation, EpsilonTable).
    """
    q = basis.quiver
    fld = basis.field
    if not is_cocycle(f, basis):
        raise InputError("build_presentation expects a 2-cocycle")
    if not check_image_condition(basis, f).ok:
        raise InputError("the cocycle's image escapes the span of lifted "
                         "ideal elements; apply normalize_cocycle first")

    image_span = SpanSolver(fld)
    for idx, (_, value) in enumerate(_image_pairs(basis, f)):
        image_span.add(dict(value.coeffs), idx)

    def e_vec(vi):
        return {basis.index[(vi,)]: fld.one}

    missed = [vi for vi in range(len(q.vertices))
              if not image_span.contains(e_vec(vi))]

    hat_names = {name: name + "^" for name, _, _ in q.arrows}
    arrows_f = [(hat_names[name], q.vertices[s], q.vertices[t])
                for name, s, t in q.arrows]
    loop_names = {}
    for vi in missed:
        nm = "e^" + q.vertices[vi]
        loop_names[vi] = nm
        arrows_f.append((nm, q.vertices[vi], q.vertices[vi]))
    quiver_f = Quiver(list(q.vertices), arrows_f)

    relations = [r for r in basis.relations]
    extended = []

    # resolve the square-zero element at each covered vertex
    entries = {}
    for vi in range(len(q.vertices)):
        if vi in loop_names:
            entries[q.vertices[vi]] = EpsilonEntry(
                "arrow",
                FreeElement.from_path(quiver_f, fld,
                                      quiver_f.arrow_path(loop_names[vi])),
                loop_names[vi])
            continue
        solver = SpanSolver(fld)
        candidates = []
        for k, rel in enumerate(relations):
            src, tgt = relation_endpoints(rel)
            if (src, tgt) == (vi, vi):
                val = hat_f(rel, basis, f)
                if not val.is_zero():
                    solver.add(dict(val.coeffs), len(candidates))
                    candidates.append(k)
        combo = solver.express(e_vec(vi))
        if combo is None:
            # allow bounded-degree multiples of the relations; any that
            # get used are appended to the relation set
            mult_solver = _hat_multiple_span(basis, f, endpoints=(vi, vi))
            mcombo = mult_solver.express(e_vec(vi))
            if mcombo is None:
                raise EpsilonUnresolvable(
                    "vertex %s: its idempotent lies in the image of the "
                    "cocycle but cannot be expressed through lifted ideal "
                    "elements within the degree bound" % q.vertices[vi])
            combo = {}
            for (u, k, v), c in mcombo.items():
                m = FreeElement.from_path(q, fld, u) * relations[k] \
                    * FreeElement.from_path(q, fld, v)
                relations.append(m)
                extended.append(len(relations) - 1)
                combo[len(relations) - 1] = c
        else:
            combo = {candidates[t]: c for t, c in combo.items()}
        elem = FreeElement.zero(quiver_f, fld)
        for k, c in combo.items():
            elem = elem + _hat_free(relations[k], quiver_f, fld).scale(c)
        entries[q.vertices[vi]] = EpsilonEntry("combination", elem, combo)
    epsilon = EpsilonTable(entries)

    rels_f = []
    origins = []

    def emit(elem, origin):
        if not elem.is_zero():
            rels_f.append(elem)
            origins.append(origin)

    for vi, vid in enumerate(q.vertices):
        eps = epsilon[vid].element
        emit(eps * eps, "square-zero:%s" % vid)
    for name, s, t in q.arrows:
        alpha = FreeElement.from_path(quiver_f, fld,
                                      quiver_f.arrow_path(hat_names[name]))
        emit(epsilon[q.vertices[s]].element * alpha
             - alpha * epsilon[q.vertices[t]].element,
             "commute:%s" % name)
    for k, rel in enumerate(relations):
        src, tgt = relation_endpoints(rel)
        w = hat_f(rel, basis, f)
        w_free = _hat_free(w.to_free(), quiver_f, fld)
        lifted = _hat_free(rel, quiver_f, fld)
        emit(lifted - w_free * epsilon[q.vertices[tgt]].element,
             "lift:%d" % k)

    pres = Presentation(quiver_f, rels_f, origins, hat_names, epsilon,
                        set(loop_names.values()),
                        [relations[i] for i in extended])
    return pres, epsilon


def interreduce_presentation(pres, field, max_degree=30):
    """Replace the relation list by the completed rewrite rules; the
    ideal is unchanged, the generators become canonical."""
    from .quiver import RewriteSystem
    rs = RewriteSystem(pres.quiver, field, pres.relations,
                       degree_cap=2 * max_degree)
    rels = []
    for w in sorted(rs.rules, key=lambda p: (len(p) - 1, p[1:], p[0])):
        rels.append(FreeElement.from_path(pres.quiver, field, w) - rs.rules[w])
    return Presentation(pres.quiver, rels, ["interreduced"] * len(rels),
                        pres.hat_names, pres.epsilon, pres.dashed,
                        pres.extended)


def _pi_map(basis, f, pres):
    """The evaluation sending hatted arrows to (arrow, 0) and added
    loops to (0, idempotent), as pairs over the deformed algebra."""
    deformed = DeformedAlgebra(basis, f)
    q = basis.quiver
    qf = pres.quiver
    arrow_images = {}
    for name, s, t in q.arrows:
        arrow_images[pres.hat_names[name]] = (
            basis.element_from_path(q.arrow_path(name)), basis.zero())
    for nm in pres.dashed:
        vid = qf.vertices[qf.arrows[qf.aindex[nm]][1]]
        vi = q.vindex[vid]
        arrow_images[nm] = (basis.zero(),
                            basis.element_from_path((vi,)))

    def pi_path(p):
        cur = (basis.element_from_path((p[0],)), basis.zero())
        for a in p[1:]:
            nm = qf.arrows[a][0]
            cur = deformed_multiply(cur, arrow_images[nm], deformed)
        return cur

    def pi_free(elem):
        total = deformed.zero_pair()
        for p, c in elem.terms.items():
            img = pi_path(p)
            total = (total[0] + img[0].scale(c), total[1] + img[1].scale(c))
        return total

    return deformed, pi_free


def verify_presentation(basis, f, pres, max_degree=30):
    """Three independent checks that the presentation is correct.

    Returns a list of (name, passed, detail) triples: the dimension
    count, vanishing of the relations under evaluation, and linear
    independence of the evaluated basis candidates.
    """
    fld = basis.field
    checks = []

    basis_f = compute_basis(pres.quiver, pres.relations, fld, max_degree)
    ok_dim = basis_f.dim == 2 * basis.dim
    checks.append(("dimension", ok_dim,
                   "dim kQ_f/I_f = %d, expected %d" % (basis_f.dim, 2 * basis.dim)))

    deformed, pi_free = _pi_map(basis, f, pres)
    bad = 0
    for r in pres.relations:
        img = pi_free(r)
        if not (img[0].is_zero() and img[1].is_zero()):
            bad += 1
    checks.append(("relations-vanish", bad == 0,
                   "%d of %d generators evaluate to zero"
                   % (len(pres.relations) - bad, len(pres.relations))))

    q = basis.quiver
    qf = pres.quiver
    vectors = []
    for p in basis.paths:
        hat = _hat_free(FreeElement.from_path(q, fld, p), qf, fld)
        vectors.append(pi_free(hat))
        eps = pres.epsilon[q.vertices[q.path_target(p)]].element
        vectors.append(pi_free(hat * eps))
    rows = []
    for pair in vectors:
        vec = deformed.pair_to_coords(pair)
        rows.append([vec.get(i, fld.zero) for i in range(deformed.dim)])
    rnk = rank(rows, fld)
    ok_ind = rnk == 2 * basis.dim
    checks.append(("independence", ok_ind,
                   "rank %d of %d evaluated candidates" % (rnk, len(vectors))))
    return checks


class Equivalence:
    """Isomorphism between two deformations: (a, b) -> (a, b + s g(a))."""

    def __init__(self, g, sigma, basis):
        self.g = g
        self.sigma = sigma
        self.basis = basis

    def apply(self, pair):
        a, b = pair
        shift = self.g.evaluate(a).scale(
            self.basis.field.one if self.sigma > 0
            else self.basis.field.neg(self.basis.field.one))
        return (a, b + shift)


def deformation_equivalence(f, f2, basis):
    """Explicit isomorphism between the two deformed algebras, or None
    when the cocycles are not cohomologous."""
    g = cobound_solve(f - f2, basis)
    if g is None:
        return None
    d_f = DeformedAlgebra(basis, f)
    d_f2 = DeformedAlgebra(basis, f2)

    def pair_of_index(i):
        if i < basis.dim:
            return (basis.basis_element(i), basis.zero())
        return (basis.zero(), basis.basis_element(i - basis.dim))

    for sigma in (1, -1):
        phi = Equivalence(g, sigma, basis)
        good = True
        for i in range(d_f.dim):
            for j in range(d_f.dim):
                x = pair_of_index(i)
                y = pair_of_index(j)
                lhs = phi.apply(deformed_multiply(x, y, d_f))
                rhs = deformed_multiply(phi.apply(x), phi.apply(y), d_f2)
                if not (lhs[0] == rhs[0] and lhs[1] == rhs[1]):
                    good = False
                    break
            if not good:
                break
        if good:
            return phi
    raise SignResolutionFailed(
        "a coboundary witness exists but neither sign of the shift is "
        "multiplicative; this indicates an internal inconsistency")
