"""Command-line driver.

Every subcommand reads an algebra file, runs exact computations, and
prints either plain values (basis, hh, deform, transfer tables) or a
report of named checks.  The process exits 0 only when all checks
pass; bad input exits 2 and typed computation errors exit 1.
"""

import argparse
import sys

from .deform import (DeformedAlgebra, build_presentation,
                     check_image_condition, deformation_equivalence,
                     deformed_multiply, hat_f, interreduce_presentation,
                     normalize_cocycle, verify_presentation)
from .errors import ComputationError, InputError
from .fields import Field
from .fileio import (emit_algebra_text, emit_dot, parse_algebra_file,
                     parse_module_file, scalar_str)
from .hochschild import (cochain_from_pairs, extend_to_full,
                         full_differential, hh_summary, is_cocycle,
                         is_full_cocycle)
from .linalg import invert_matrix, matmul
from .modcat import functor_F, module_from_file, reconstruct, roundtrip_triple
from .morita import (algebra_of_basis, homotopy_h, idempotent_context,
                     matrix_context, transfer_phi, transfer_psi,
                     verify_morita_deformed)
from .quiver import FreeElement, compute_basis


def _parse_field_flag(text):
    if text is None:
        return None
    if text == "Q":
        return Field.rationals()
    if text.startswith("F") and text[1:].isdigit():
        return Field.prime(int(text[1:]))
    raise InputError("--field expects Q or F<p>, got %r" % text)


def _load_algebra(args):
    af = parse_algebra_file(args.file, _parse_field_flag(args.field))
    basis = compute_basis(af.quiver, af.relations, af.field, args.max_degree)
    return af, basis


def _emit_report(checks, mode):
    for name, ok, detail in checks:
        verdict = "PASS" if ok else "FAIL"
        if mode == "json-lines":
            print("%s\t%s\t%s" % (name, verdict, detail))
        else:
            print("%s: %s  %s" % (name, verdict, detail))
    ok_all = all(ok for _, ok, _ in checks)
    if mode != "json-lines":
        print("overall: %s" % ("PASS" if ok_all else "FAIL"))
    return 0 if ok_all else 1


def _vec_str(vec, labels, field):
    """Coordinate dict as a signed sum of labelled basis terms."""
    if not vec:
        return "0"
    bits = []
    for i in sorted(vec):
        c = vec[i]
        negative = field.char == 0 and c < 0
        mag = -c if negative else c
        body = labels[i]
        if mag != field.one:
            body = "%s*%s" % (scalar_str(mag, field), body)
        if not bits:
            bits.append("-" + body if negative else body)
        else:
            bits.append(("- " if negative else "+ ") + body)
    return " ".join(bits)


def cmd_basis(args):
    af, basis = _load_algebra(args)
    print("dim A = %d" % basis.dim)
    for i in range(basis.dim):
        print(basis.label(i))
    return 0


def cmd_hh(args):
    af, basis = _load_algebra(args)
    z2, b2, hh2 = hh_summary(basis)
    print("dim Z^2 = %d" % z2)
    print("dim B^2 = %d" % b2)
    print("dim HH^2 = %d" % hh2)
    return 0


def cmd_check_cocycle(args):
    af, basis = _load_algebra(args)
    f = cochain_from_pairs(basis, af.cocycle_pairs)
    ok = is_cocycle(f, basis)
    detail = "%d table entries, d^2 f %s 0" % (len(f.table), "=" if ok else "!=")
    return _emit_report([("cocycle", ok, detail)], args.report)


def cmd_deform(args):
    af, basis = _load_algebra(args)
    f = cochain_from_pairs(basis, af.cocycle_pairs)
    if not is_cocycle(f, basis):
        raise InputError("the cocycle lines do not satisfy d^2 f = 0")
    f = normalize_cocycle(basis, f)
    pres, _ = build_presentation(basis, f, args.max_degree)
    if args.interreduce:
        pres = interreduce_presentation(pres, basis.field, args.max_degree)
    header = "presentation of the deformed algebra (dim %d)" % (2 * basis.dim)
    text = emit_algebra_text(basis.field, pres.quiver, pres.relations,
                             origins=pres.origins, header=header)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.dot:
        dot = emit_dot(pres.quiver, dashed_arrows=pres.dashed, graph_name="Qf")
        with open(args.dot, "w") as fh:
            fh.write(dot)
    return 0


def _path_product(basis, deformed, p):
    """(alpha_1, 0) ... (alpha_s, 0) for the path p, starting from the
    source idempotent."""
    q = basis.quiver
    cur = (basis.element_from_path((p[0],)), basis.zero())
    for a in p[1:]:
        arrow = (basis.element_from_path((q.arrows[a][1], a)), basis.zero())
        cur = deformed_multiply(cur, arrow, deformed)
    return cur


def cmd_verify_deform(args):
    af, basis = _load_algebra(args)
    fld = basis.field
    f = cochain_from_pairs(basis, af.cocycle_pairs)
    checks = []

    ok_cocycle = is_cocycle(f, basis)
    checks.append(("cocycle", ok_cocycle,
                   "d^2 f %s 0" % ("=" if ok_cocycle else "!=")))
    deformed = DeformedAlgebra(basis, f, check_cocycle=False)
    ok_assoc = deformed.associativity_holds()
    checks.append(("associativity", ok_assoc,
                   "all %d^3 basis triples" % deformed.dim if ok_assoc
                   else "a basis triple fails"))
    if not ok_cocycle:
        checks.append(("presentation", False, "skipped: not a cocycle"))
        return _emit_report(checks, args.report)

    # products of hatted arrows track f-hat, on basis paths and relations
    bad = 0
    for p in basis.paths:
        cur = _path_product(basis, deformed, p)
        w = FreeElement.from_path(basis.quiver, fld, p)
        if cur[0] != basis.normal_form(w) or cur[1] != hat_f(w, basis, f):
            bad += 1
    checks.append(("path-products", bad == 0,
                   "%d of %d basis paths multiply to (w, f^(w))"
                   % (basis.dim - bad, basis.dim)))

    bad = 0
    for rel in basis.relations:
        total = deformed.zero_pair()
        for p, c in rel.terms.items():
            cur = _path_product(basis, deformed, p)
            total = (total[0] + cur[0].scale(c), total[1] + cur[1].scale(c))
        if not total[0].is_zero() or total[1] != hat_f(rel, basis, f):
            bad += 1
    checks.append(("relation-identity", bad == 0,
                   "%d of %d relations land on (0, f^(rho))"
                   % (len(basis.relations) - bad, len(basis.relations))))

    if check_image_condition(basis, f).ok:
        f2 = f
        checks.append(("image-condition", True, "holds for the given representative"))
    else:
        f2 = normalize_cocycle(basis, f)
        checks.append(("image-condition", True,
                       "restored by a cohomologous representative"))
    pres, _ = build_presentation(basis, f2, args.max_degree)
    checks.extend(verify_presentation(basis, f2, pres, args.max_degree))
    return _emit_report(checks, args.report)


def cmd_equiv(args):
    af, basis = _load_algebra(args)
    fld = basis.field
    af2 = parse_algebra_file(args.other, _parse_field_flag(args.field))
    checks = []

    same = af.field == af2.field and af.quiver == af2.quiver
    detail = "field, quiver and relation ideal agree"
    if not same:
        detail = "field or quiver differ"
    else:
        basis2 = compute_basis(af2.quiver, af2.relations, af2.field,
                               args.max_degree)
        for r in af.relations:
            if not basis2.normal_form(FreeElement(af2.quiver, fld, dict(r.terms))).is_zero():
                same, detail = False, "relation ideals differ"
                break
        for r in af2.relations:
            if same and not basis.normal_form(
                    FreeElement(af.quiver, fld, dict(r.terms))).is_zero():
                same, detail = False, "relation ideals differ"
                break
    checks.append(("same-algebra", same, detail))

    f = cochain_from_pairs(basis, af.cocycle_pairs)
    ok_f = is_cocycle(f, basis)
    checks.append(("cocycle-1", ok_f, "d^2 f %s 0" % ("=" if ok_f else "!=")))
    ok_g = False
    g = None
    if same:
        g = cochain_from_pairs(basis, {
            key: FreeElement(af.quiver, fld, dict(value.terms))
            for key, value in af2.cocycle_pairs.items()})
        ok_g = is_cocycle(g, basis)
    checks.append(("cocycle-2", ok_g,
                   "d^2 f %s 0" % ("=" if ok_g else "!=") if same
                   else "skipped: different algebras"))

    if same and ok_f and ok_g:
        phi = deformation_equivalence(f, g, basis)
        checks.append(("cohomologous", phi is not None,
                       "the difference is a coboundary" if phi is not None
                       else "the cohomology classes differ"))
        checks.append(("multiplicative", phi is not None,
                       "verified on all basis pairs (sign %+d)" % phi.sigma
                       if phi is not None else "skipped: no equivalence"))
    else:
        checks.append(("cohomologous", False, "skipped"))
        checks.append(("multiplicative", False, "skipped"))
    return _emit_report(checks, args.report)


def _context_of(args, af, basis, alg):
    if args.matrix is not None:
        return matrix_context(alg, args.matrix)
    names = [v.strip() for v in args.idempotent.split(",") if v.strip()]
    if not names:
        raise InputError("--idempotent expects a comma-separated vertex list")
    evec = {}
    for name in names:
        if name not in af.quiver.vindex:
            raise InputError("unknown vertex %r" % name)
        idx = basis.index[af.quiver.trivial_path(name)]
        if idx in evec:
            raise InputError("vertex %r listed twice" % name)
        evec[idx] = basis.field.one
    return idempotent_context(alg, evec)


def cmd_transfer(args):
    af, basis = _load_algebra(args)
    f = extend_to_full(cochain_from_pairs(basis, af.cocycle_pairs), basis)
    alg = algebra_of_basis(basis)
    ctx = _context_of(args, af, basis, alg)
    g = transfer_phi(ctx, f, 2)

    labels = ctx.b.labels
    if g.is_zero():
        print("g = 0")
    for key in sorted(g.table):
        print("g(%s, %s) = %s" % (labels[key[0]], labels[key[1]],
                                  _vec_str(g.table[key], labels, ctx.field)))

    checks = []
    checks.append(("cocycle", is_full_cocycle(g, ctx.b), "d^2 g = 0 on B"))
    df = full_differential(f, ctx.a)
    ok = full_differential(g, ctx.b) == transfer_phi(ctx, df, 3)
    checks.append(("chain-map-phi", ok, "d phi^2 f = phi^3 d f"))
    back = transfer_psi(ctx, g, 2)
    ok = full_differential(back, ctx.a) == transfer_psi(ctx, full_differential(g, ctx.b), 3)
    checks.append(("chain-map-psi", ok, "d psi^2 g = psi^3 d g"))
    lhs = homotopy_h(ctx, df, 3) + full_differential(homotopy_h(ctx, f, 2), ctx.a)
    ok = lhs == f - back
    checks.append(("homotopy", ok, "h^3 d f + d h^2 f = f - psi^2 phi^2 f"))
    return _emit_report(checks, args.report)


def cmd_verify_morita(args):
    af, basis = _load_algebra(args)
    f = extend_to_full(cochain_from_pairs(basis, af.cocycle_pairs), basis)
    alg = algebra_of_basis(basis)
    ctx = _context_of(args, af, basis, alg)
    return _emit_report(verify_morita_deformed(ctx, f), args.report)


def cmd_module_roundtrip(args):
    af, basis = _load_algebra(args)
    fld = basis.field
    f = cochain_from_pairs(basis, af.cocycle_pairs)
    deformed = DeformedAlgebra(basis, f)
    mf = parse_module_file(args.module, fld)
    mod = module_from_file(mf, deformed)
    checks = [("module", True,
               "dim %d over a deformed algebra of dim %d" % (mod.dim, deformed.dim))]

    try:
        rec = reconstruct(mod)
    except InputError as exc:
        checks.append(("uple-carved", False, str(exc)))
        return _emit_report(checks, args.report)
    uple = rec.uple
    checks.append(("uple-carved", True,
                   "M0 dim %d, M1 dim %d" % (uple.m0.dim, uple.m1.dim)))

    rebuilt = functor_F(uple)
    cols = rec.complement + rec.kernel
    s = [[cols[j][i] for j in range(len(cols))] for i in range(mod.dim)]
    s_inv = invert_matrix(s, fld)
    ok = all(matmul(s_inv, matmul(mod.matrices[i], s, fld), fld)
             == rebuilt.matrices[i] for i in range(deformed.dim))
    checks.append(("functor-rebuild", ok,
                   "the basis change intertwines all %d actions" % deformed.dim
                   if ok else "actions disagree after the basis change"))

    try:
        tri = roundtrip_triple(uple)
        checks.append(("roundtrip-triple", tri.is_isomorphism(),
                       "comparison triple is an isomorphism"))
    except InputError as exc:
        checks.append(("roundtrip-triple", False, str(exc)))
    return _emit_report(checks, args.report)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quivdeform",
        description="Exact deformations of bound quiver algebras.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", metavar="K", default=None,
                        help="override the field declared in the file (Q or F<p>)")
    common.add_argument("--max-degree", type=int, default=30, metavar="N",
                        help="path length cap for basis computations (default 30)")
    common.add_argument("--report", choices=("text", "json-lines"),
                        default="text", help="format of the check lines")

    p = sub.add_parser("basis", parents=[common],
                       help="print the monomial basis of kQ/I")
    p.add_argument("file")
    p.set_defaults(handler=cmd_basis)

    p = sub.add_parser("hh", parents=[common],
                       help="dimensions of degree-2 cocycles, coboundaries and HH^2")
    p.add_argument("file")
    p.set_defaults(handler=cmd_hh)

    p = sub.add_parser("check-cocycle", parents=[common],
                       help="check d^2 f = 0 for the cocycle lines of the file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_check_cocycle)

    p = sub.add_parser("deform", parents=[common],
                       help="emit a quiver presentation of the deformed algebra")
    p.add_argument("file")
    p.add_argument("-o", "--output", metavar="OUT",
                   help="write the presentation here instead of stdout")
    p.add_argument("--dot", metavar="OUT",
                   help="also write the deformed quiver as a DOT digraph")
    p.add_argument("--interreduce", action="store_true",
                   help="emit the completed rewrite rules instead of the raw generators")
    p.set_defaults(handler=cmd_deform)

    p = sub.add_parser("verify-deform", parents=[common],
                       help="verify the deformed algebra and its presentation")
    p.add_argument("file")
    p.set_defaults(handler=cmd_verify_deform)

    p = sub.add_parser("equiv", parents=[common],
                       help="decide whether two cocycles give equivalent deformations")
    p.add_argument("file")
    p.add_argument("other")
    p.set_defaults(handler=cmd_equiv)

    for name, handler, text in (
            ("transfer", cmd_transfer,
             "transfer the cocycle across a Morita context"),
            ("verify-morita", cmd_verify_morita,
             "verify the deformed Morita equivalence")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        grp = p.add_mutually_exclusive_group(required=True)
        grp.add_argument("--matrix", type=int, metavar="N",
                         help="matrix amplification M_N(A)")
        grp.add_argument("--idempotent", metavar="V1,V2,...",
                         help="corner context at the sum of the named vertex idempotents")
        p.set_defaults(handler=handler)

    p = sub.add_parser("module-roundtrip", parents=[common],
                       help="carve a module into an uple and rebuild it")
    p.add_argument("file", help="algebra file with cocycle lines")
    p.add_argument("module", help="module file over the deformed algebra")
    p.set_defaults(handler=cmd_module_roundtrip)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ComputationError as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
