"""
Normal generation certificates.

A mapping class f is never stored; a Certificate pins it down only by naming which
curves of a system play c, f(c), f^2(c) (and f^3(c)), plus the witness curves a lemma
needs. Every check_* function decides its lemma from intersection counts, separation
and mod-2 homology of the system alone, so a certificate can always be re-verified.
Crossing counts of 0 and 1 are exact intersection numbers; larger counts are upper
bounds, which is the direction every lemma here needs.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from normal_generators.classifier import (
    TripleCatalogEntry, classify_pair, classify_triple, match_catalog,
)
from normal_generators.constants import Constants
from normal_generators.errors import (
    CatalogMatchError, CriterionPreconditionError, DataDecodingError, SurgeryError, WitnessSearchError,
)
from normal_generators.isomorphism import DEFAULT_POLICY, Policy
from normal_generators.surface import (
    CurveSystem, Walk, ambient_genus, complement_components, component_index, geometric_intersection,
    is_separating, is_trivial, mod2_class_equal, regions_bordering, restrict_to,
)
from normal_generators.surgery import (
    insert_dual_curve, insert_meridian, insert_neighborhood_curve, insert_separator, insert_turn_curve,
    turn_direction,
)

logger = logging.getLogger("__main__")

CRITERIA = ("wscca", "wsccb", "wsccsep", "chen", "lantern", "good-pair-bp", "good-pair",
            "type-IV-turn", "type-I-boundary")
LEMMAS = {
    "wscca": "well-suited curve criterion: i(c, f(c)) = 1",
    "wsccb": "well-suited curve criterion: disjoint, not homologous",
    "wsccsep": "separating curve criterion: i(d, f(d)) <= 2",
    "chen": "Chen's lemma: i(c, d) = 1 and i(f(c), d) = 0",
    "lantern": "lantern lemma: i(c, f(c)) = 2, classes differ mod 2",
    "good-pair-bp": "good pair lemma for a bounding pair",
    "good-pair": "good pair lemma",
    "type-IV-turn": "left turn curves and the well-suited curve criterion",
    "type-I-boundary": "neighbourhood boundary curves and the separating curve criterion",
    "periodic": "periodic mapping classes",
}
POSITIVE = ("contains-commutator-subgroup", "normal-generator")
STRATEGIES = {
    "I": ("good-pair-bp", "type-I-boundary"),
    "II": ("good-pair", "wsccsep"),
    "III": ("good-pair", "wsccb"),
    "IV": ("good-pair", "type-IV-turn"),
}
# i(c, f^3(c)) <= 4 is what the intersection bound gives for stretch factors up to sqrt(2)
TYPE_ONE_FOURTH_IMAGE = {"c_fffc": 4}


@dataclass
class Verdict:
    conclusion: str
    criterion: str
    justification: str
    residue: int | None = None
    modulus: int | None = None

    @property
    def positive(self) -> bool:
        return self.conclusion in POSITIVE

    @property
    def conclusive(self) -> bool:
        return self.conclusion != "inconclusive"


@dataclass
class Certificate:
    criterion: str
    system: CurveSystem
    roles: dict[str, str]
    witnesses: dict[str, str] = field(default_factory=dict)
    genus: int = 0
    images: tuple[str, ...] = ()
    data: dict[str, int] = field(default_factory=dict)


def _verdict(holds: bool, criterion: str, detail: str = "") -> Verdict:
    justification = LEMMAS[criterion] + (f" ({detail})" if detail else "")
    return Verdict("contains-commutator-subgroup" if holds else "inconclusive", criterion, justification)


def for_genus(verdict: Verdict, g: int) -> Verdict:
    """
    From genus 3 on the mapping class group is perfect, so containing the commutator
    subgroup means normally generating.
    """
    if g >= 3 and verdict.conclusion == "contains-commutator-subgroup":
        return Verdict("normal-generator", verdict.criterion, verdict.justification)
    return verdict


def _count(system: CurveSystem, c1: str, c2: str) -> int:
    return geometric_intersection(system, c1, c2)


def _require_distinct(*curves: str) -> None:
    if len(set(curves)) != len(curves):
        raise CriterionPreconditionError(f"Curves {curves} must be distinct.")


def _require_nonseparating(system: CurveSystem, *curves: str) -> None:
    for curve in curves:
        if is_separating(system, curve):
            raise CriterionPreconditionError(f"Curve {curve} is separating.")


def check_wscca(system: CurveSystem, c: str, fc: str) -> Verdict:
    system.require_curve(c, fc)
    _require_distinct(c, fc)
    _require_nonseparating(system, c, fc)
    count = _count(system, c, fc)
    return _verdict(count == 1, "wscca", f"{count} crossings")


def check_wsccb(system: CurveSystem, c: str, fc: str) -> Verdict:
    """
    Disjoint nonseparating curves are homologous up to sign exactly when together
    they separate, so the integral test is a component count.
    """
    system.require_curve(c, fc)
    _require_distinct(c, fc)
    _require_nonseparating(system, c, fc)
    if _count(system, c, fc):
        return _verdict(False, "wsccb", "curves cross")
    together = len(complement_components(system, {c, fc}))
    return _verdict(together == 1, "wsccb", "not homologous" if together == 1 else "homologous")


def check_wsccsep(system: CurveSystem, d: str, fd: str) -> Verdict:
    system.require_curve(d, fd)
    if d == fd:
        raise CriterionPreconditionError("A separating curve and its image must be distinct curves.")
    for curve in (d, fd):
        if not is_separating(system, curve):
            raise CriterionPreconditionError(f"Curve {curve} is not separating.")
    count = _count(system, d, fd)
    return _verdict(count <= 2, "wsccsep", f"{count} crossings")


def check_chen(system: CurveSystem, c: str, fc: str, d: str) -> Verdict:
    """
    Accepts i(c, d) = 1, i(f(c), d) = 0 and the mirrored condition, which is the same
    lemma applied to the inverse.
    """
    system.require_curve(c, fc, d)
    _require_distinct(c, fc, d)
    _require_nonseparating(system, c, fc, d)
    counts = (_count(system, c, d), _count(system, fc, d))
    return _verdict(counts in ((1, 0), (0, 1)), "chen", f"crossings with d: {counts}")


def lantern_witness(system: CurveSystem, c: str, fc: str) -> tuple[CurveSystem, str]:
    """
    A curve crossing one edge of c (or of f(c)) once and staying inside the region on
    both sides of that edge.
    """
    pair = restrict_to(system, (c, fc))
    for curve in (c, fc):
        for edge_id in pair.curve_edges[curve]:
            right, left = pair.sides(edge_id)
            if right != left:
                continue
            grown, d = insert_dual_curve(pair, edge_id)
            if check_chen(grown, c, fc, d).positive:
                return grown, d
    raise WitnessSearchError("witness search failed")


def check_lantern(system: CurveSystem, c: str, fc: str) -> Verdict:
    system.require_curve(c, fc)
    _require_distinct(c, fc)
    _require_nonseparating(system, c, fc)
    if _count(system, c, fc) != 2:
        raise CriterionPreconditionError(f"The lantern lemma needs two crossings of {c} and {fc}.")
    if mod2_class_equal(system, {c}, {fc}):
        return _verdict(False, "lantern", "classes agree mod 2")
    _, d = lantern_witness(system, c, fc)
    return _verdict(True, "lantern", f"Chen witness {d}")


def _nonseparating_after_cutting(system: CurveSystem, curve: str, cut: Iterable[str]) -> bool:
    cut = set(cut)
    return len(complement_components(system, cut | {curve})) == len(complement_components(system, cut))


def _home(system: CurveSystem, witness: str, index: dict[str, int]) -> int:
    """
    The complementary piece a witness lies in; both of its sides belong to it.
    """
    pieces = {index[region] for region in regions_bordering(system, witness)}
    if len(pieces) != 1:
        raise CriterionPreconditionError(f"Witness {witness} borders {len(pieces)} pieces.")
    return pieces.pop()


def check_good_pair(system: CurveSystem, c: str, fc: str, ffc: str, a: str, b: str) -> Verdict:
    """
    a and b lie in different pieces of the complement of c and f(c), in one piece of
    the complement of f(c) and f^2(c), and are nonseparating: in the closed surface when
    c and f(c) cross, after cutting along both when they are disjoint.
    """
    system.require_curve(c, fc, ffc, a, b)
    _require_distinct(c, fc, ffc, a, b)
    for witness in (a, b):
        for curve in (c, fc, ffc):
            if _count(system, witness, curve):
                raise CriterionPreconditionError(f"Witness {witness} crosses {curve}.")
    bounding = _count(system, c, fc) == 0
    criterion = "good-pair-bp" if bounding else "good-pair"
    first, second = component_index(system, {c, fc}), component_index(system, {fc, ffc})
    if _home(system, a, first) == _home(system, b, first):
        return _verdict(False, criterion, "same side of c")
    if _home(system, a, second) != _home(system, b, second):
        return _verdict(False, criterion, "different sides of f^2(c)")
    if bounding:
        local = all(_nonseparating_after_cutting(system, w, (c, fc)) for w in (a, b))
    else:
        local = not is_separating(system, a) and not is_separating(system, b)
    return _verdict(local, criterion, "local witnesses" if local else "a witness separates")


def _restricted_walks(system: CurveSystem, curves: Iterable[str]) -> list[Walk]:
    pair = restrict_to(system, curves)
    return [walk for region in pair.regions for walk in region.walks]


def insert_along_walk(system: CurveSystem, curves: Iterable[str], walk: Walk) -> tuple[CurveSystem, str]:
    """
    Neighbourhood boundary curve of a sub-union, named by a boundary walk of the
    sub-union rather than by its region id, which other insertions may renumber.
    """
    curves = tuple(curves)
    pair = restrict_to(system, curves)
    region = pair.region_of_dart[walk[0]]
    return insert_neighborhood_curve(system, curves, region, pair.region[region].walks.index(walk))


def neighbourhood_walks(system: CurveSystem, curves: Iterable[str], separating: bool) -> list[Walk]:
    """
    Walks whose neighbourhood boundary curve is essential and separating (or nonseparating).
    """
    curves = tuple(curves)
    found = []
    for walk in _restricted_walks(system, curves):
        try:
            grown, new = insert_along_walk(system, curves, walk)
        except SurgeryError as error:
            logger.debug(f"Skipping walk {walk}: {error}")
            continue
        if is_separating(grown, new) == separating and not is_trivial(grown, new):
            found.append(walk)
    return found


def insert_all(system: CurveSystem, plans: Iterable[tuple[tuple[str, ...], Walk]]) -> tuple[CurveSystem, list[str]]:
    names = []
    for curves, walk in plans:
        system, new = insert_along_walk(system, curves, walk)
        names.append(new)
    return system, names


def _insertion_orders(system: CurveSystem, first: list, second: list) -> Iterator[tuple[CurveSystem, list[str], list[str]]]:
    """
    Inserts two batches of neighbourhood curves in every order up to a cap. Parallel
    push-offs nest differently in each order, so curves that are disjoint up to isotopy
    may cross in one drawing and not in another.
    """
    specs = list(enumerate(first + second))
    for order in itertools.islice(itertools.permutations(specs), Constants.MAX_INSERTION_ORDERS):
        try:
            grown, names = insert_all(system, [spec for _, spec in order])
        except SurgeryError:
            continue
        by_index = dict(zip((index for index, _ in order), names))
        named = [by_index[i] for i in range(len(specs))]
        yield grown, named[:len(first)], named[len(first):]


def check_type_I_boundary(system: CurveSystem, c: str, fc: str, ffc: str, fffc: str | dict[str, int]) -> Verdict:
    """
    :param fffc: the curve playing f^3(c), or its crossing counts as a dict with key
        "c_fffc" (and optionally "ffc_fffc", which defaults to the count of c and f(c)).
    """
    system.require_curve(c, fc, ffc)
    pair = classify_pair(system, c, ffc)
    if pair is None or pair.tag != "II":
        raise CriterionPreconditionError(f"Curves {c} and {ffc} do not form a type II pair.")
    if not neighbourhood_walks(system, (c, ffc), separating=True):
        raise CriterionPreconditionError(f"No separating boundary curve around {c} and {ffc}.")
    counts = fourth_image_counts(system, c, fc, ffc, fffc)
    bound = sum(counts.values())
    return _verdict(bound <= 4, "type-I-boundary", f"four-term bound {bound}")


def fourth_image_counts(system: CurveSystem, c: str, fc: str, ffc: str, fffc: str | dict[str, int]) -> dict[str, int]:
    counts = {"c_fc": _count(system, c, fc), "ffc_fc": _count(system, ffc, fc)}
    if isinstance(fffc, str):
        system.require_curve(fffc)
        counts["c_fffc"], counts["ffc_fffc"] = _count(system, c, fffc), _count(system, ffc, fffc)
    else:
        if "c_fffc" not in fffc:
            raise CriterionPreconditionError("Crossing data for f^3(c) needs the key 'c_fffc'.")
        counts["c_fffc"] = int(fffc["c_fffc"])
        counts["ffc_fffc"] = int(fffc.get("ffc_fffc", counts["c_fc"]))
    return counts


def _turn_choices(system: CurveSystem, c1: str, c2: str, direction: str) -> list[tuple[int, int]]:
    return [choice for choice in itertools.product((0, 1), repeat=2)
            if turn_direction(system, c1, c2, choice) == direction]


def type_IV_turn_witness(system: CurveSystem, c: str, fc: str, ffc: str) -> Certificate | None:
    """
    A turn curve d1 of (c, f(c)) crossing both same-direction turn curves of
    (f(c), f^2(c)) once. An orientation preserving f maps d1 to one of them.
    """
    for choice in itertools.product((0, 1), repeat=2):
        direction = turn_direction(system, c, fc, choice)
        grown, d1 = insert_turn_curve(system, c, fc, choice)
        images = _turn_choices(grown, fc, ffc, direction)
        if len(images) != 2:
            continue
        grown, e1 = insert_turn_curve(grown, fc, ffc, images[0])
        later = [other for other in _turn_choices(grown, fc, ffc, direction) if other != images[0]]
        if not later:
            continue
        grown, e2 = insert_turn_curve(grown, fc, ffc, later[0])
        if _count(grown, d1, e1) == 1 and _count(grown, d1, e2) == 1:
            return Certificate("type-IV-turn", grown, {"c": c, "fc": fc, "ffc": ffc},
                               {"d1": d1, "e1": e1, "e2": e2}, ambient_genus(grown), ("e1", "e2"),
                               {"direction_left": int(direction == "left")})
    return None


def check_type_IV_turn(system: CurveSystem, c: str, fc: str, ffc: str) -> Verdict:
    system.require_curve(c, fc, ffc)
    for first, second in ((c, fc), (fc, ffc)):
        pair = classify_pair(system, first, second)
        if pair is None or pair.tag != "IV":
            raise CriterionPreconditionError(f"Curves {first} and {second} do not form a type IV pair.")
    triple = restrict_to(system, (c, fc, ffc))
    found = type_IV_turn_witness(triple, c, fc, ffc)
    return _verdict(found is not None, "type-IV-turn",
                    "turn curves cross once" if found else "no turn curve crosses both images once")


def flm_bound(lam: float, k: int) -> int:
    """
    Least n with lam <= (n/2)^(1/k). Then i(c, f^k(c)) < n for a shortest curve c.
    """
    if lam <= 1:
        raise CriterionPreconditionError(f"Stretch factor must exceed 1, got {lam}.")
    if k < 1:
        raise CriterionPreconditionError(f"Power must be positive, got {k}.")
    return max(1, math.ceil(2 * lam ** k - Constants.FLM_EPSILON))


def flm_guarantee(lam: float, k: int) -> int:
    return flm_bound(lam, k) - 1


def parity_refine(bound: int, mod2_equal: bool) -> int:
    """
    Curves equal mod 2 meet an even number of times.
    """
    return bound - 1 if mod2_equal and bound % 2 else bound


def periodic_verdict(g: int, kind: str, abelianization_image: int | None = None) -> Verdict:
    if g < 1:
        raise CriterionPreconditionError(f"Genus must be at least 1, got {g}.")
    if kind not in Constants.PERIODIC_KINDS:
        raise CriterionPreconditionError(f"Unknown periodic kind '{kind}'.")
    if g >= 3:
        if kind == "hyperelliptic":
            return Verdict("preimage-of-±I", "periodic", "normal closure of the hyperelliptic involution")
        return Verdict("normal-generator", "periodic", LEMMAS["periodic"])
    if kind == "hyperelliptic":
        return Verdict("central-order-2", "periodic", "the hyperelliptic involution is central")
    modulus = 12 if g == 1 else 10
    if abelianization_image is None:
        raise CriterionPreconditionError(f"Genus {g} needs the image in Z/{modulus}.")
    residue = abelianization_image % modulus
    if math.gcd(residue, modulus) == 1:
        return Verdict("normal-generator", "periodic", f"image {residue} generates Z/{modulus}", residue, modulus)
    return Verdict("abelianization-determined", "periodic",
                   f"normal closure has index {math.gcd(residue, modulus)} over the commutator subgroup",
                   residue, modulus)


def power_subgroup_full(L: int, n: int) -> bool:
    """
    Whether the subgroup generated by n-th powers is everything, given L, the least common
    multiple of the orders of periodic elements.
    """
    if L < 2 or L % 2:
        raise CriterionPreconditionError(f"L must be a positive even integer, got {L}.")
    if n < 1:
        raise CriterionPreconditionError(f"n must be positive, got {n}.")
    return n % (L // 2) != 0


def _witness_plans(system: CurveSystem) -> dict[str, list[tuple]]:
    plans: dict[str, list[tuple]] = {}
    for region in system.regions:
        found = []
        if region.genus >= 1:
            found.append(("meridian", region.id))
        if 2 <= len(region.walks) <= Constants.MAX_SEPARATOR_WALKS:
            for size in range(1, len(region.walks)):
                for walks in itertools.combinations(range(len(region.walks)), size):
                    found.extend(("separator", region.id, walks, genus) for genus in range(region.genus + 1))
        plans[region.id] = found
    return plans


def _insert_witness(system: CurveSystem, plan: tuple) -> tuple[CurveSystem, str]:
    if plan[0] == "meridian":
        return insert_meridian(system, plan[1])
    _, region, walks, genus = plan
    return insert_separator(system, region, walks, genus)


def good_pair_witness(system: CurveSystem, c: str, fc: str, ffc: str) -> Certificate | None:
    """
    Searches meridians and region separators of the triple's regions for a good pair.
    """
    triple = restrict_to(system, (c, fc, ffc))
    bounding = _count(triple, c, fc) == 0
    first, second = component_index(triple, {c, fc}), component_index(triple, {fc, ffc})

    usable: dict[str, tuple] = {}
    for region, plans in _witness_plans(triple).items():
        for plan in plans:
            grown, witness = _insert_witness(triple, plan)
            if bounding:
                local = _nonseparating_after_cutting(grown, witness, (c, fc))
            else:
                local = not is_separating(grown, witness)
            if local:
                usable[region] = plan
                break

    for region_a, region_b in itertools.combinations(sorted(usable), 2):
        if first[region_a] == first[region_b] or second[region_a] != second[region_b]:
            continue
        grown, a = _insert_witness(triple, usable[region_a])
        grown, b = _insert_witness(grown, usable[region_b])
        if check_good_pair(grown, c, fc, ffc, a, b).positive:
            criterion = "good-pair-bp" if bounding else "good-pair"
            return Certificate(criterion, grown, {"c": c, "fc": fc, "ffc": ffc}, {"a": a, "b": b},
                               ambient_genus(grown))
    return None


def wsccsep_witness(system: CurveSystem, c: str, fc: str, ffc: str) -> Certificate | None:
    """
    A separating boundary curve d of a neighbourhood of c and f(c) meeting each separating
    boundary curve of a neighbourhood of f(c) and f^2(c), one of which is f(d), at most twice.
    """
    triple = restrict_to(system, (c, fc, ffc))
    images = neighbourhood_walks(triple, (fc, ffc), separating=True)
    if not images:
        return None
    image_specs = [((fc, ffc), walk) for walk in images]
    for walk in neighbourhood_walks(triple, (c, fc), separating=True):
        for grown, (d,), found in _insertion_orders(triple, [((c, fc), walk)], image_specs):
            if all(_count(grown, d, e) <= 2 for e in found):
                names = {f"e{n}": e for n, e in enumerate(found, start=1)}
                return Certificate("wsccsep", grown, {"c": c, "fc": fc, "ffc": ffc}, {"d": d} | names,
                                   ambient_genus(grown), tuple(names))
    return None


def wsccb_witness(system: CurveSystem, c: str, fc: str, ffc: str) -> Certificate | None:
    """
    A nonseparating boundary curve d of a neighbourhood of f(c) and f^2(c) that is
    disjoint from and not homologous to every nonseparating boundary curve of a
    neighbourhood of c and f(c); f maps one of the latter to d. On a triple these are
    the curves around the feet of a handle joining two regions.
    """
    triple = restrict_to(system, (c, fc, ffc))
    preimages = neighbourhood_walks(triple, (c, fc), separating=False)
    if not preimages:
        return None
    preimage_specs = [((c, fc), walk) for walk in preimages]
    for walk in neighbourhood_walks(triple, (fc, ffc), separating=False):
        for grown, (d,), found in _insertion_orders(triple, [((fc, ffc), walk)], preimage_specs):
            if any(mod2_class_equal(grown, {x}, {d}) for x in found):
                # disjoint curves equal mod 2 are homologous, in every drawing
                break
            if all(check_wsccb(grown, x, d).positive for x in found):
                names = {f"x{n}": x for n, x in enumerate(found, start=1)}
                return Certificate("wsccb", grown, {"c": c, "fc": fc, "ffc": ffc}, {"d": d} | names,
                                   ambient_genus(grown), tuple(names))
    return None


def type_I_boundary_witness(system: CurveSystem, c: str, fc: str, ffc: str,
                            fffc: str | dict[str, int] | None) -> Certificate | None:
    if fffc is None:
        return None
    triple = restrict_to(system, (c, fc, ffc) + ((fffc,) if isinstance(fffc, str) else ()))
    if not check_type_I_boundary(triple, c, fc, ffc, fffc).positive:
        return None
    walks = neighbourhood_walks(triple, (c, ffc), separating=True)
    grown, names = insert_all(triple, [((c, ffc), walk) for walk in walks[:2]])
    roles = {"c": c, "fc": fc, "ffc": ffc} | ({"fffc": fffc} if isinstance(fffc, str) else {})
    return Certificate("type-I-boundary", grown, roles, {f"d{n}": d for n, d in enumerate(names, start=1)},
                       ambient_genus(grown), (), fourth_image_counts(grown, c, fc, ffc, fffc))


def _type_iv_strategy(system: CurveSystem, c: str, fc: str, ffc: str, fffc) -> Certificate | None:
    return type_IV_turn_witness(restrict_to(system, (c, fc, ffc)), c, fc, ffc)


SEARCHES: dict[str, Callable[..., Certificate | None]] = {
    "good-pair-bp": lambda system, c, fc, ffc, fffc: good_pair_witness(system, c, fc, ffc),
    "good-pair": lambda system, c, fc, ffc, fffc: good_pair_witness(system, c, fc, ffc),
    "wsccsep": lambda system, c, fc, ffc, fffc: wsccsep_witness(system, c, fc, ffc),
    "wsccb": lambda system, c, fc, ffc, fffc: wsccb_witness(system, c, fc, ffc),
    "type-IV-turn": _type_iv_strategy,
    "type-I-boundary": type_I_boundary_witness,
}


def search(strategy: str, system: CurveSystem, c: str, fc: str, ffc: str,
           fffc: str | dict[str, int] | None = None) -> Certificate | None:
    """
    Runs one witness search; a search whose hypotheses do not hold finds nothing.
    """
    try:
        return SEARCHES[strategy](system, c, fc, ffc, fffc)
    except (CriterionPreconditionError, SurgeryError) as error:
        logger.debug(f"Strategy {strategy} does not apply: {error}")
        return None


def _role(certificate: Certificate, name: str) -> str:
    try:
        return certificate.roles[name]
    except KeyError as error:
        raise DataDecodingError(f"Certificate for {certificate.criterion} has no role '{name}'.") from error


def _witness(certificate: Certificate, name: str) -> str:
    try:
        return certificate.witnesses[name]
    except KeyError as error:
        raise DataDecodingError(f"Certificate for {certificate.criterion} has no witness '{name}'.") from error


def _all_of(verdicts: list[Verdict], criterion: str) -> Verdict:
    if not verdicts:
        return _verdict(False, criterion, "no images listed")
    failed = next((v for v in verdicts if not v.positive), None)
    return failed if failed is not None else verdicts[0]


def verify_certificate(certificate: Certificate) -> Verdict:
    """
    Re-derives the verdict of a certificate from its system and named curves.
    """
    system, criterion = certificate.system, certificate.criterion
    c = _role(certificate, "c")
    if criterion == "wscca":
        verdict = check_wscca(system, c, _role(certificate, "fc"))
    elif criterion in ("wsccb", "wsccsep"):
        check = check_wsccb if criterion == "wsccb" else check_wsccsep
        if "d" in certificate.witnesses:
            d = _witness(certificate, "d")
            others = [_witness(certificate, name) for name in certificate.images]
            # for wsccb the listed curves are the possible preimages of d, for wsccsep its possible images
            verdict = _all_of([check(system, x, d) if criterion == "wsccb" else check(system, d, x)
                               for x in others], criterion)
        else:
            verdict = check(system, c, _role(certificate, "fc"))
    elif criterion == "chen":
        verdict = check_chen(system, c, _role(certificate, "fc"), _witness(certificate, "d"))
    elif criterion == "lantern":
        fc, d = _role(certificate, "fc"), _witness(certificate, "d")
        if _count(system, c, fc) != 2:
            raise CriterionPreconditionError(f"The lantern lemma needs two crossings of {c} and {fc}.")
        holds = not mod2_class_equal(system, {c}, {fc}) and check_chen(system, c, fc, d).positive
        verdict = _verdict(holds, "lantern", f"Chen witness {d}")
    elif criterion in ("good-pair", "good-pair-bp"):
        verdict = check_good_pair(system, c, _role(certificate, "fc"), _role(certificate, "ffc"),
                                  _witness(certificate, "a"), _witness(certificate, "b"))
        if verdict.criterion != criterion:
            verdict = _verdict(False, criterion, f"pair calls for {verdict.criterion}")
    elif criterion == "type-IV-turn":
        d1 = _witness(certificate, "d1")
        images = [_witness(certificate, name) for name in certificate.images]
        verdict = _all_of([check_wscca(system, d1, e) for e in images], "type-IV-turn")
        verdict = _verdict(verdict.positive, "type-IV-turn", verdict.justification)
    elif criterion == "type-I-boundary":
        fffc = certificate.roles.get("fffc") or {k: v for k, v in certificate.data.items() if k.endswith("fffc")}
        verdict = check_type_I_boundary(system, c, _role(certificate, "fc"), _role(certificate, "ffc"), fffc)
    else:
        raise DataDecodingError(f"Unknown criterion '{criterion}', expected one of {CRITERIA}.")
    return for_genus(verdict, certificate.genus or ambient_genus(system))


def _direct_certificate(system: CurveSystem, c: str, fc: str, ffc: str) -> Certificate | None:
    """
    The criteria that need only c and f(c): one crossing, separating curves, disjoint
    non-homologous curves, and two crossings with different classes mod 2.
    """
    roles = {"c": c, "fc": fc, "ffc": ffc}
    genus = ambient_genus(system)
    pair = restrict_to(system, (c, fc))
    if is_separating(system, c):
        if check_wsccsep(pair, c, fc).positive:
            return Certificate("wsccsep", pair, roles, genus=genus)
        return None
    count = _count(system, c, fc)
    if count == 1:
        return Certificate("wscca", pair, roles, genus=genus)
    if count == 0 and check_wsccb(pair, c, fc).positive:
        return Certificate("wsccb", pair, roles, genus=genus)
    if count == 2 and not mod2_class_equal(system, {c}, {fc}):
        grown, d = lantern_witness(system, c, fc)
        return Certificate("lantern", grown, roles, {"d": d}, genus)
    return None


def run_case_analysis(system: CurveSystem, c: str, fc: str, ffc: str, g: int | None = None,
                      fffc: str | dict[str, int] | None = None,
                      catalog: list[TripleCatalogEntry] | None = None,
                      policy: Policy = DEFAULT_POLICY) -> tuple[Verdict, Certificate | None]:
    """
    Tries the criteria in the order of the pseudo-Anosov case analysis. For a triple of
    type I to IV the strategy annotated on its catalog entry goes first.
    """
    system.require_curve(c, fc, ffc)
    g = ambient_genus(system) if g is None else g
    certificate = _direct_certificate(system, c, fc, ffc)
    if certificate is None and not is_separating(system, c):
        tag = classify_triple(system, c, fc, ffc)
        if tag is None:
            return Verdict("inconclusive", "case-analysis", "the triple has no common pair type"), None
        strategies = list(STRATEGIES[tag])
        if catalog is not None:
            try:
                entry = match_catalog(system, c, fc, ffc, catalog, policy)
            except CatalogMatchError as error:
                logger.warning(f"{error}; trying every strategy of type {tag}.")
            else:
                if entry.strategy in strategies:
                    strategies.remove(entry.strategy)
                    strategies.insert(0, entry.strategy)
        for strategy in strategies:
            certificate = search(strategy, system, c, fc, ffc, fffc)
            if certificate is not None:
                break
        else:
            detail = "f^3(c) data is needed" if tag == "I" and fffc is None else "no witness found"
            return Verdict("inconclusive", "case-analysis", f"type {tag}: {detail}"), None
    if certificate is None:
        return Verdict("inconclusive", "wsccsep", "separating curves cross more than twice"), None
    certificate.genus = g
    verdict = verify_certificate(certificate)
    logger.info(f"Case analysis for ({c}, {fc}, {ffc}): {verdict.conclusion} by {certificate.criterion}.")
    return verdict, certificate


def annotate_catalog(entries: list[TripleCatalogEntry]) -> list[TripleCatalogEntry]:
    """
    Stores with each entry the first strategy of its type that yields a certificate.
    """
    gamma, delta, epsilon = Constants.CURVE_LABELS
    for entry in entries:
        for strategy in STRATEGIES[entry.type]:
            fffc = TYPE_ONE_FOURTH_IMAGE if strategy == "type-I-boundary" else None
            if search(strategy, entry.system, gamma, delta, epsilon, fffc) is not None:
                entry.strategy = strategy
                break
        else:
            logger.warning(f"No strategy certifies catalog entry {entry.label}.")
        logger.debug(f"Catalog entry {entry.label}: {entry.strategy}.")
    return entries

