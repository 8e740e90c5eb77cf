import logging
import sys

import ui_helpers
from normal_generators import pickler
from normal_generators.classifier import build_catalog, enumerate_templates
from normal_generators.constants import Constants
from normal_generators.criteria import (
    flm_bound, flm_guarantee, parity_refine, periodic_verdict, power_subgroup_full, run_case_analysis,
    verify_certificate, Verdict, Certificate, annotate_catalog,
)
from normal_generators.errors import NormalGeneratorError
from normal_generators.isomorphism import Policy
from normal_generators.polygon import (
    PolygonRotation, PolygonSurface, periodic_case3_verdict, quotient_genus, rotation_order,
)
from normal_generators.surface import ambient_genus, to_dot
from normal_generators.symplectic import (
    TwistWord, analyse_word, chain_curve_vectors, congruence_level, is_symplectic,
    matrix_order, named_matrix,
)
from normal_generators.thurston import ThurstonSystem, exponent_growth_check, parse_word, stretch_factor, word_to_text

logger = logging.getLogger("__main__")

MATRIX_NAMES = {"M": "handle-rotation-M", "N": "handle-swap-N", "M_k": "minus-block-M_k"}


def exit_code(verdict: Verdict) -> int:
    return 0 if verdict.positive else 1


def emit(args, report: dict, lines: list[str]) -> None:
    if args.json:
        print(pickler.dumps(report))
    else:
        for line in lines:
            print(line)


def verdict_lines(verdict: Verdict, certificate: Certificate | None) -> list[str]:
    lines = [f"Verdict: {verdict.conclusion}", f"Criterion: {verdict.criterion}",
             f"Justification: {verdict.justification}"]
    if verdict.residue is not None:
        lines.append(f"Residue: {verdict.residue} mod {verdict.modulus}")
    if certificate is not None:
        lines.append(f"Roles: {certificate.roles}")
        if certificate.witnesses:
            lines.append(f"Witnesses: {certificate.witnesses}")
    return lines


def cmd_catalog(args, policy: Policy) -> int:
    types = (args.type,) if args.type else Constants.PAIR_TYPES
    if args.templates:
        found, mismatch = {}, False
        for tag in (t for t in types if t in Constants.EXPECTED_TEMPLATE_COUNTS):
            found[tag] = [pickler.encode_template(t) for t in enumerate_templates(tag, policy)]
            mismatch |= len(found[tag]) != Constants.EXPECTED_TEMPLATE_COUNTS[tag]
        lines = [f"Type {tag}: {len(records)} templates, arc matrices "
                 f"{[r['arc_matrix'] for r in records]}" for tag, records in found.items()]
        emit(args, found, lines)
        return 2 if mismatch else 0

    if args.type or args.rebuild:
        entries = annotate_catalog(build_catalog(policy, args.jobs, types))
    else:
        entries = pickler.cached_catalog(policy, args.jobs)
    if args.output:
        pickler.save_json(pickler.encode_catalog(entries), args.output)

    counts = {tag: sum(1 for e in entries if e.type == tag) for tag in types}
    mismatch = [tag for tag in types if counts[tag] != Constants.EXPECTED_CATALOG_COUNTS[tag]]
    lines = [f"{entry.label}: strategy {entry.strategy}, genus {ambient_genus(entry.system)}" for entry in entries]
    lines += [f"Type {tag}: {counts[tag]} minimal configurations" for tag in types]
    lines.append(f"Total: {len(entries)}")
    for tag in mismatch:
        logger.error(f"Type {tag}: expected {Constants.EXPECTED_CATALOG_COUNTS[tag]} configurations, found {counts[tag]}.")
    emit(args, {"counts": counts, "entries": [{"label": e.label, "strategy": e.strategy} for e in entries]}, lines)
    return 2 if mismatch else 0


def cmd_check(args, policy: Policy) -> int:
    raw = pickler.load_json(args.file)
    if args.triple is None:
        certificate = pickler.decode_certificate(raw)
        verdict = verify_certificate(certificate)
    else:
        system = pickler.decode_system(raw)
        fffc = None
        if args.fffc is not None:
            fffc = ui_helpers.read_json_argument(args.fffc) if args.fffc.lstrip().startswith(("{", "@")) else args.fffc
        catalog = pickler.cached_catalog(policy, args.jobs) if args.catalog else None
        verdict, certificate = run_case_analysis(system, *args.triple, g=args.genus, fffc=fffc,
                                                 catalog=catalog, policy=policy)
    report = {"verdict": pickler.encode_verdict(verdict),
              "certificate": pickler.encode_certificate(certificate) if certificate else None}
    lines = verdict_lines(verdict, certificate)
    if args.dot and certificate is not None:
        lines.append(to_dot(certificate.system))
    emit(args, report, lines)
    return 0 if verdict.positive else 1


def cmd_polygon(args, policy: Policy) -> int:
    layout = "opposite" if args.pairing == "opposite" else ui_helpers.read_json_argument(args.pairing)
    polygon = PolygonSurface.from_layout(args.n, layout)
    rotation = PolygonRotation.for_polygon(polygon, args.k)
    genus, order = quotient_genus(polygon), rotation_order(polygon, rotation)
    verdict, certificate = periodic_case3_verdict(polygon, rotation)
    if args.output and certificate is not None:
        pickler.save_json(pickler.encode_certificate(certificate), args.output)
    report = {"genus": genus, "order": order, "verdict": pickler.encode_verdict(verdict),
              "certificate": pickler.encode_certificate(certificate) if certificate else None}
    emit(args, report, [f"Genus: {genus}", f"Order: {order}"] + verdict_lines(verdict, certificate))
    return exit_code(verdict)


def cmd_symplectic(args, policy: Policy) -> int:
    if args.matrix:
        matrix = named_matrix(MATRIX_NAMES[args.matrix], args.g, args.k)
        report = {"genus": args.g, "matrix": matrix.tolist(), "symplectic": is_symplectic(matrix),
                  "level": congruence_level(matrix), "order": matrix_order(matrix)}
    elif args.word:
        word = TwistWord.from_text(ui_helpers.read_text_argument(args.word), chain_curve_vectors(args.g))
        report = analyse_word(word, args.g)
    else:
        raise NormalGeneratorError("Give a twist word with --word or a named matrix with --matrix.")
    lines = [f"Genus: {args.g}", "Matrix:"] + ["  " + " ".join(f"{x:3d}" for x in row) for row in report["matrix"]]
    lines += [f"Symplectic: {report['symplectic']}", f"Congruence level: {report['level']}"]
    if "order" in report:
        lines.append(f"Order: {report['order']}")
    code = 0
    if args.periodic:
        verdict = periodic_verdict(args.g, args.periodic, report.get("abelianization"))
        report["verdict"] = pickler.encode_verdict(verdict)
        lines += verdict_lines(verdict, None)
        code = exit_code(verdict)
    emit(args, report, lines)
    return code


def cmd_thurston(args, policy: Policy) -> int:
    N = ui_helpers.read_matrix(args.N)
    tol = args.tol if args.tol is not None else Constants.PF_TOLERANCE
    system = ThurstonSystem.from_matrix(N, tol=tol)
    report: dict = {"mu": system.mu}
    lines = [f"Perron-Frobenius eigenvalue of N N^T: {system.mu:.12g}"]
    if args.word:
        word = parse_word(args.word)
        stretch = stretch_factor(system, word)
        report["word"] = word_to_text(word)
        report["stretch"] = stretch
        lines += [f"Word {word_to_text(word)}: {stretch.kind}, |trace| = {stretch.trace:.12g}"]
        if stretch.stretch is not None:
            lines.append(f"Stretch factor: {stretch.stretch:.12g}")
    if args.k_list:
        k_list = [int(k) for k in args.k_list.split(",") if k.strip()]
        rows = exponent_growth_check(N, args.blowup_index, k_list, tol)
        report["growth"] = rows
        lines.append(f"{'k':>5} {'bound':>12} {'mu >=':>12} {'mu':>12} {'lambda >=':>12} {'lambda':>12}")
        lines += [f"{r.k:>5} {r.bound:>12} {r.mu_lower:>12.6f} {r.mu:>12.6f} {r.stretch_lower:>12.6f} {r.stretch:>12.6f}"
                  for r in rows]
    emit(args, report, lines)
    return 0


def cmd_flm_bound(args, policy: Policy) -> int:
    bound = flm_bound(args.lam, args.k)
    refined = parity_refine(flm_guarantee(args.lam, args.k), args.mod2_equal)
    report = {"lambda": args.lam, "k": args.k, "bound": bound, "guarantee": flm_guarantee(args.lam, args.k),
              "refined": refined}
    emit(args, report, [f"i(c, f^{args.k}(c)) < {bound}", f"i(c, f^{args.k}(c)) <= {refined}"])
    return 0


def cmd_power_subgroup(args, policy: Policy) -> int:
    full = power_subgroup_full(args.L, args.n)
    emit(args, {"L": args.L, "n": args.n, "full": full},
         [f"Powers of exponent {args.n} {'generate' if full else 'need not generate'} the whole group."])
    return 0 if full else 1


COMMANDS = {
    "catalog": cmd_catalog,
    "check": cmd_check,
    "polygon": cmd_polygon,
    "symplectic": cmd_symplectic,
    "thurston": cmd_thurston,
    "flm-bound": cmd_flm_bound,
    "power-subgroup": cmd_power_subgroup,
}


def main(argv: list[str] | None = None) -> int:
    args = ui_helpers.handle_terminal(argv)
    # JSON goes to stdout, so the console log moves to stderr
    ui_helpers.create_logger(args.verbose, stream=sys.stderr if args.json else sys.stdout)
    if args.json:
        Constants.SHOW_PROGRESS = False
    if args.tol is not None:
        Constants.PF_TOLERANCE = args.tol
        Constants.TRACE_TOLERANCE = args.tol
    policy = Policy(allow_reflection=args.policy != "no-reflection")
    try:
        return COMMANDS[args.command](args, policy)
    except NormalGeneratorError as error:
        logger.error(f"{type(error).__name__}: {error}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
