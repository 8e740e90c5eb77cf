"""
Pair types and the minimal configurations of ordered triples (gamma, delta, epsilon)
whose consecutive pairs share one type.

Types II to IV are found in two phases. The first enumerates templates: every ribbon
graph of three curves with the crossings a type prescribes, and every grouping of its
boundary cycles into genus-0 regions on a surface of the template genus, filtered and
deduplicated. The second attaches handles between template regions under the
checkerboard and type conditions, with at most one handle beyond those that remove
bigons and annuli or satisfy the type condition, and keeps what is minimal under
stabilization.
Type I triples are disjoint bounding pairs around delta and are enumerated directly:
the regions get genus exactly where an annulus or a bigon would otherwise survive.
"""
import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from tqdm import tqdm

from normal_generators.constants import Constants
from normal_generators.errors import CatalogMatchError, ClassificationError, InvalidSystemError
from normal_generators.helpers import minimal_hitting_sets, set_partitions
from normal_generators.isomorphism import (
    DEFAULT_POLICY, Policy, canonical_form, genus_free_form, is_stabilization_of,
)
from normal_generators.surface import (
    CurveSystem, Dart, Edge, Region, algebraic_intersection, ambient_genus, arc_count, assemble,
    bounds_annulus, complement_components, crossing_sign, crossing_vertices, detect_bigons, geometric_intersection,
    is_separating, mod2_class_equal, region_coloring, regions_bordering, restrict_to, rotation_sigma,
    trace_faces,
)
from normal_generators.surgery import add_handle, curve_arcs, cut_along, relabel

logger = logging.getLogger("__main__")

GAMMA, DELTA, EPSILON = Constants.CURVE_LABELS
PAIRS = ((GAMMA, DELTA), (DELTA, EPSILON), (GAMMA, EPSILON))
EDGE_PREFIX = {GAMMA: "g", DELTA: "d", EPSILON: "e"}
# the curve whose outgoing dart comes first at a crossing, by vertex name
LEADING_CURVE = {"x": GAMMA, "y": DELTA, "z": GAMMA}


@dataclass(frozen=True)
class PairType:
    tag: str
    intersection: int
    algebraic: int
    regions: int


@dataclass
class Template:
    index: int
    type: str
    system: CurveSystem
    arc_matrix: tuple[tuple[int, int], tuple[int, int]]
    linked: bool


@dataclass
class TripleCatalogEntry:
    label: str
    type: str
    template: int
    system: CurveSystem
    strategy: str | None = None


def _pieces_abut_both(system: CurveSystem, pieces: list[tuple[str, ...]], c1: str, c2: str) -> bool:
    first, second = regions_bordering(system, c1), regions_bordering(system, c2)
    return all(set(piece) & first and set(piece) & second for piece in pieces)


def classify_pair(system: CurveSystem, c1: str, c2: str) -> PairType | None:
    """
    Type of a pair of nonseparating curves in minimal position, or None when the pair
    has none (odd or large intersection, different classes mod 2, bigons, homotopic).
    """
    system.require_curve(c1, c2)
    if c1 == c2 or is_separating(system, c1) or is_separating(system, c2):
        return None
    if detect_bigons(system, c1, c2):
        return None
    intersection = geometric_intersection(system, c1, c2)
    if intersection not in (0, 2) or not mod2_class_equal(system, {c1}, {c2}):
        return None
    pieces = complement_components(system, {c1, c2})
    if intersection == 0:
        if bounds_annulus(system, c1, c2):
            return None
        if len(pieces) == 2 and _pieces_abut_both(system, pieces, c1, c2):
            return PairType("I", 0, 0, 2)
        return None
    algebraic = algebraic_intersection(system, c1, c2)
    if algebraic == 2:
        return PairType("IV", 2, 2, len(pieces))
    if len(pieces) == 3:
        return PairType("II", 2, 0, 3)
    if len(pieces) == 2:
        return PairType("III", 2, 0, 2)
    return None


def classify_triple(system: CurveSystem, c: str, fc: str, ffc: str) -> str | None:
    system.require_curve(c, fc, ffc)
    if len({c, fc, ffc}) != 3:
        return None
    first, second = classify_pair(system, c, fc), classify_pair(system, fc, ffc)
    if first is None or second is None or first.tag != second.tag:
        return None
    if not mod2_class_equal(system, {c}, {ffc}):
        return None
    return first.tag


def block_labels(system: CurveSystem, pair: Iterable[str]) -> dict[str, str]:
    """
    For each region, the id its block gets in restrict_to(system, pair).
    """
    order = {r.id: i for i, r in enumerate(system.regions)}
    labels = {}
    for group in complement_components(system, pair):
        label = min(group, key=order.__getitem__)
        labels.update((rid, label) for rid in group)
    return labels


def _is_bigon(pair: CurveSystem, region: Region) -> bool:
    return (region.genus == 0 and len(region.walks) == 1 and arc_count(pair, region.walks[0]) == 2
            and len({pair.curve_of(d) for d in region.walks[0]}) == 2)


def _is_annulus(pair: CurveSystem, region: Region) -> bool:
    if region.genus or len(region.walks) != 2:
        return False
    owners = [{pair.curve_of(d) for d in walk} for walk in region.walks]
    return all(len(owner) == 1 for owner in owners) and owners[0] != owners[1]


def bad_blocks(system: CurveSystem, pair: Sequence[str]) -> list[frozenset[str]]:
    """
    Regions of the system making up each bigon or annulus of the pair.
    """
    restricted = restrict_to(system, pair)
    bad = {r.id for r in restricted.regions if _is_bigon(restricted, r) or _is_annulus(restricted, r)}
    labels = block_labels(system, pair)
    return [frozenset(rid for rid, label in labels.items() if label == block) for block in sorted(bad)]


def _ribbon(orders: dict[str, Sequence[str]],
            signs: dict[str, int]) -> tuple[dict[str, tuple[Dart, ...]], dict[str, Edge], dict[str, tuple[str, ...]]]:
    """
    Ribbon graph of curves given by their cyclic vertex orders. A vertex on two curves is
    a crossing whose sign says whether the second curve leaves to the left (+1) of the
    leading one; a vertex on one curve is a marker.
    """
    edges: dict[str, Edge] = {}
    curves: dict[str, tuple[str, ...]] = {}
    outgoing: dict[tuple[str, str], Dart] = {}
    incoming: dict[tuple[str, str], Dart] = {}
    for curve, order in orders.items():
        ids = [f"{EDGE_PREFIX[curve]}{j + 1}" for j in range(len(order))]
        for j, vertex in enumerate(order):
            following = order[(j + 1) % len(order)]
            edges[ids[j]] = Edge(ids[j], curve, vertex, following)
            outgoing[(curve, vertex)] = (ids[j], 0)
            incoming[(curve, following)] = (ids[j], 1)
        curves[curve] = tuple(ids)

    rotation = {}
    on_curves: dict[str, list[str]] = {}
    for curve, order in orders.items():
        for vertex in order:
            on_curves.setdefault(vertex, []).append(curve)
    for vertex, owners in on_curves.items():
        if len(owners) == 1:
            rotation[vertex] = (outgoing[(owners[0], vertex)], incoming[(owners[0], vertex)])
            continue
        leading = LEADING_CURVE[vertex[0]]
        other = owners[1] if owners[0] == leading else owners[0]
        p_out, p_in = outgoing[(leading, vertex)], incoming[(leading, vertex)]
        q_out, q_in = outgoing[(other, vertex)], incoming[(other, vertex)]
        if signs[vertex] > 0:
            rotation[vertex] = (p_out, q_out, p_in, q_in)
        else:
            rotation[vertex] = (p_out, q_in, p_in, q_out)
    return rotation, edges, curves


def _grouped(rotation, edges, curves, faces: list, labels: Sequence[int]) -> CurveSystem | None:
    """
    The system whose regions are the given groups of boundary cycles, all of genus 0.
    """
    region_of = {face: f"R{label + 1}" for face, label in zip(faces, labels)}
    try:
        return assemble(rotation, edges, curves, region_of.__getitem__,
                        {name: 0 for name in region_of.values()})
    except InvalidSystemError:
        return None


def _template_ribbons(tag: str) -> Iterator[tuple]:
    second = 1 if tag == "IV" else -1
    for with_z in (False, True):
        extra = ("z1", "z2") if with_z else ()
        for gamma_tail in itertools.permutations(("x2",) + extra):
            for delta_tail in itertools.permutations(("x2", "y1", "y2")):
                for epsilon_tail in itertools.permutations(("y2",) + extra):
                    for z_signs in itertools.product((1, -1), repeat=len(extra)):
                        orders = {GAMMA: ("x1",) + gamma_tail, DELTA: ("x1",) + delta_tail,
                                  EPSILON: ("y1",) + epsilon_tail}
                        signs = {"x1": 1, "x2": second, "y1": 1, "y2": second}
                        signs.update(zip(extra, z_signs))
                        yield _ribbon(orders, signs)


def _arcs_agree(system: CurveSystem) -> bool:
    """
    Whether the arcs epsilon leaves after cutting along delta are all separating or all
    nonseparating.
    """
    cut = cut_along(system, DELTA)
    return len({cut.arc_separates(arc) for arc in cut.arc_edges(EPSILON)}) <= 1


def _arcs_by_side(system: CurveSystem, curve: str) -> list[tuple[int, tuple[str, ...]]]:
    """
    The two arcs delta cuts from a curve, each with the side of delta (+1 left) it
    leaves into, left arc first.
    """
    arcs = curve_arcs(system, curve, crossing_vertices(system, curve, DELTA))
    sided = [(crossing_sign(system, system.edge[arc[0]].tail, DELTA), arc) for arc in arcs]
    return sorted(sided, key=lambda item: -item[0])


def _starts_in_annulus(system: CurveSystem) -> bool:
    """
    An epsilon arc meeting the gamma arc on its own side of delta twice leaves delta
    into the annulus of gamma and delta rather than into one of the bigons.
    """
    pair = restrict_to(system, (GAMMA, DELTA))
    blocks = block_labels(system, (GAMMA, DELTA))
    meeting = set(crossing_vertices(system, GAMMA, EPSILON))
    gamma_arcs = dict(_arcs_by_side(system, GAMMA))
    for side, arc in _arcs_by_side(system, EPSILON):
        on_gamma = {system.edge[e].tail for e in gamma_arcs.get(side, ())}
        crossings = sum(1 for e in arc[1:] if system.edge[e].tail in meeting & on_gamma)
        first_region = system.sides(arc[0])[0]
        if crossings == 2 and len(pair.region[blocks[first_region]].walks) != 2:
            return False
    return True


def _template_conditions(system: CurveSystem, tag: str) -> bool:
    if any(is_separating(system, curve) for curve in Constants.CURVE_LABELS):
        return False
    if not all(mod2_class_equal(system, {a}, {b}) for a, b in PAIRS):
        return False
    first_count, second_counts = Constants.TEMPLATE_PAIR_REGIONS[tag]
    first = restrict_to(system, (GAMMA, DELTA))
    if len(first.regions) != first_count or any(r.genus for r in first.regions):
        return False
    if len(restrict_to(system, (DELTA, EPSILON)).regions) not in second_counts:
        return False
    if tag == "II":
        return _starts_in_annulus(system)
    return tag != "III" or _arcs_agree(system)


def arc_matrix(system: CurveSystem) -> tuple[tuple[int, int], tuple[int, int]]:
    """
    Crossings between the two arcs of gamma and the two arcs of epsilon cut out by delta.
    When the arcs return to the side of delta they leave from, rows and columns are
    indexed by that side and only swap together; otherwise each swaps on its own.
    """
    gamma_arcs = _arcs_by_side(system, GAMMA)
    epsilon_arcs = _arcs_by_side(system, EPSILON)

    def arc_of(arcs: list[tuple[int, tuple[str, ...]]], vertex: str) -> int:
        return next(i for i, (_, arc) in enumerate(arcs) if any(system.edge[e].tail == vertex for e in arc))

    counts = [[0, 0], [0, 0]]
    for vertex in crossing_vertices(system, GAMMA, EPSILON):
        counts[arc_of(gamma_arcs, vertex)][arc_of(epsilon_arcs, vertex)] += 1
    sided = {side for side, _ in gamma_arcs} == {side for side, _ in epsilon_arcs} == {1, -1}
    variants = [counts, [row[::-1] for row in counts[::-1]]]
    if not sided:
        variants += [counts[::-1], [row[::-1] for row in counts]]
    return min(tuple(tuple(row) for row in variant) for variant in variants)


def is_linked(system: CurveSystem) -> bool:
    """
    True when the crossings with gamma and with epsilon alternate along delta.
    """
    with_gamma = set(crossing_vertices(system, GAMMA, DELTA))
    with_epsilon = set(crossing_vertices(system, DELTA, EPSILON))
    labels = [v in with_gamma for v in system.vertices_of(DELTA) if v in with_gamma | with_epsilon]
    return sum(1 for i in range(len(labels)) if labels[i] != labels[i - 1]) == 4


def _progress(iterable: Iterable, **kwargs):
    return tqdm(iterable, disable=None if Constants.SHOW_PROGRESS else True, **kwargs)


def enumerate_templates(tag: str, policy: Policy = DEFAULT_POLICY) -> list[Template]:
    if tag not in Constants.TEMPLATE_GENUS:
        raise ClassificationError(f"Type {tag} has no templates.")
    genus = Constants.TEMPLATE_GENUS[tag]
    ribbons = {}
    for rotation, edges, curves in _template_ribbons(tag):
        faces = trace_faces(rotation_sigma(rotation))
        cellular = _grouped(rotation, edges, curves, faces, range(len(faces)))
        if cellular is None or ambient_genus(cellular) > genus:
            continue
        ribbons.setdefault(canonical_form(cellular, policy), (rotation, edges, curves))
    logger.debug(f"Type {tag}: {len(ribbons)} ribbon graphs of genus at most {genus}.")

    candidates = {}
    for rotation, edges, curves in _progress(ribbons.values(), desc=f"Templates {tag}"):
        faces = trace_faces(rotation_sigma(rotation))
        doubled = 2 - 2 * genus + len(rotation) + len(faces)
        if doubled % 2 or not 1 <= doubled // 2 <= len(faces):
            continue
        for labels in set_partitions(len(faces), doubled // 2):
            system = _grouped(rotation, edges, curves, faces, labels)
            if system is None or ambient_genus(system) != genus:
                continue
            if _template_conditions(system, tag):
                candidates.setdefault(canonical_form(system, policy), system)
    templates = [Template(index, tag, candidates[key], arc_matrix(candidates[key]), is_linked(candidates[key]))
                 for index, key in enumerate(sorted(candidates), start=1)]
    logger.info(f"Type {tag}: {len(templates)} templates.")
    return templates


def apply_handles(system: CurveSystem, handles: Iterable[tuple[str, str]]) -> CurveSystem:
    """
    Adds one handle per pair of (original) region ids, following earlier merges.
    """
    merged_into: dict[str, str] = {}

    def current(region: str) -> str:
        while region in merged_into:
            region = merged_into[region]
        return region

    for first, second in handles:
        first, second = current(first), current(second)
        system = add_handle(system, first, second)
        if first != second:
            merged_into[second] = first
    return system


def allowed_handles(system: CurveSystem, tag: str) -> list[tuple[str, str]]:
    """
    Handle pairs a template admits: self pairs only inside a bigon or annulus of some
    pair, distinct pairs only between regions of equal colour in all three
    checkerboard colourings, and for type II only inside one block of each pair.
    """
    colorings = [region_coloring(system, pair) for pair in PAIRS]
    if any(coloring is None for coloring in colorings):
        return []
    blocks = [block_labels(system, pair) for pair in PAIRS[:2]]
    in_bad = set().union(*(block for pair in PAIRS for block in bad_blocks(system, pair)))
    regions = [r.id for r in system.regions]
    allowed = [(r, r) for r in regions if r in in_bad]
    for first, second in itertools.combinations(regions, 2):
        if any(coloring[first] != coloring[second] for coloring in colorings):
            continue
        if tag == "II" and any(labels[first] != labels[second] for labels in blocks):
            continue
        allowed.append((first, second))
    return allowed


def valid_triple(system: CurveSystem, tag: str) -> bool:
    for first, second in PAIRS[:2]:
        found = classify_pair(system, first, second)
        if found is None or found.tag != tag:
            return False
    if detect_bigons(system, GAMMA, EPSILON) or not mod2_class_equal(system, {GAMMA}, {EPSILON}):
        return False
    return geometric_intersection(system, GAMMA, EPSILON) > 0 or not bounds_annulus(system, GAMMA, EPSILON)


def _optional_handles(system: CurveSystem, handles: Iterable[tuple[str, str]],
                      bad: list[frozenset[str]]) -> int:
    """
    Distinct-region handles with no foot in a bigon or annulus that do not join two
    regions of delta and epsilon either.
    """
    touching = set().union(*bad)
    blocks = block_labels(system, (DELTA, EPSILON))
    return sum(1 for first, second in handles
               if first != second and not {first, second} & touching and blocks[first] == blocks[second])


def _phase_two(arguments: tuple[CurveSystem, str, int]) -> list[CurveSystem]:
    system, tag, max_handles = arguments
    allowed = allowed_handles(system, tag)
    bad = [block for pair in PAIRS for block in bad_blocks(system, pair)]
    found = []
    for size in range(min(max_handles, len(allowed)) + 1):
        for handles in itertools.combinations(allowed, size):
            touched = {region for handle in handles for region in handle}
            # an untouched bigon or annulus survives every handle elsewhere
            if any(not block & touched for block in bad):
                continue
            if _optional_handles(system, handles, bad) > Constants.MAX_OPTIONAL_HANDLES:
                continue
            candidate = apply_handles(system, handles)
            if valid_triple(candidate, tag):
                found.append(candidate)
    return found


def _type_one_ribbons() -> Iterator[tuple]:
    yield _ribbon({GAMMA: ("m_gamma",), DELTA: ("m_delta",), EPSILON: ("m_epsilon",)}, {})
    for second in (1, -1):
        yield _ribbon({GAMMA: ("z1", "z2"), DELTA: ("m_delta",), EPSILON: ("z1", "z2")}, {"z1": 1, "z2": second})


def _type_one_structure(system: CurveSystem) -> bool:
    if any(is_separating(system, curve) for curve in Constants.CURVE_LABELS):
        return False
    if not all(mod2_class_equal(system, {a}, {b}) for a, b in PAIRS):
        return False
    for first, second in PAIRS[:2]:
        pieces = complement_components(system, {first, second})
        if len(pieces) != 2 or not _pieces_abut_both(system, pieces, first, second):
            return False
    return True


def _type_one_candidates() -> list[CurveSystem]:
    found = []
    for rotation, edges, curves in _type_one_ribbons():
        faces = trace_faces(rotation_sigma(rotation))
        for labels in set_partitions(len(faces)):
            base = _grouped(rotation, edges, curves, faces, labels)
            if base is None or not _type_one_structure(base):
                continue
            bad = [block for pair in PAIRS for block in bad_blocks(base, pair)]
            for regions in minimal_hitting_sets(bad):
                candidate = apply_handles(base, ((r, r) for r in sorted(regions)))
                if valid_triple(candidate, "I"):
                    found.append(candidate)
    return found


def minimal_elements(pool: Iterable[tuple[int, CurveSystem]], policy: Policy = DEFAULT_POLICY) -> list[tuple[int, CurveSystem]]:
    """
    Drops isomorphic repeats (keeping the lowest template) and every system that is a
    stabilization of another, then sorts by canonical form.
    """
    unique: dict[tuple, tuple[int, CurveSystem]] = {}
    for template, system in sorted(pool, key=lambda item: item[0]):
        unique.setdefault(canonical_form(system, policy), (template, system))
    groups: dict[tuple, list[tuple]] = {}
    for key, (template, system) in unique.items():
        groups.setdefault(genus_free_form(system, policy), []).append((key, template, system))
    minima = []
    for members in groups.values():
        for key, template, system in members:
            if not any(other_key != key and is_stabilization_of(system, other, policy)
                       for other_key, _, other in members):
                minima.append((key, template, system))
    return [(template, system) for _, template, system in sorted(minima, key=lambda item: item[0])]


def enumerate_minimal_triples(tag: str, policy: Policy = DEFAULT_POLICY, jobs: int = 1) -> list[TripleCatalogEntry]:
    if tag not in Constants.PAIR_TYPES:
        raise ClassificationError(f"Unknown pair type {tag}.")
    if tag == "I":
        pool = [(0, system) for system in _type_one_candidates()]
    else:
        templates = enumerate_templates(tag, policy)
        work = [(t.system, tag, Constants.MAX_HANDLES) for t in templates]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                results = list(_progress(executor.map(_phase_two, work), total=len(work), desc=f"Handles {tag}"))
        else:
            results = [_phase_two(item) for item in _progress(work, desc=f"Handles {tag}")]
        pool = []
        for template, systems in zip(templates, results):
            logger.debug(f"Type {tag}, template {template.index}: {len(systems)} valid handle sets.")
            pool.extend((template.index, system) for system in systems)

    entries = []
    numbering: dict[int, int] = {}
    for template, system in minimal_elements(pool, policy):
        numbering[template] = numbering.get(template, 0) + 1
        entries.append(TripleCatalogEntry(f"{tag}-t{template}-{numbering[template]}", tag, template, system))
    logger.info(f"Type {tag}: {len(entries)} minimal configurations.")
    return entries


def build_catalog(policy: Policy = DEFAULT_POLICY, jobs: int = 1,
                  types: Iterable[str] = Constants.PAIR_TYPES) -> list[TripleCatalogEntry]:
    return [entry for tag in types for entry in enumerate_minimal_triples(tag, policy, jobs)]


def as_labelled_triple(system: CurveSystem, c: str, fc: str, ffc: str) -> CurveSystem:
    """
    The triple alone, with its curves renamed gamma, delta and epsilon.
    """
    return relabel(restrict_to(system, (c, fc, ffc)), {c: GAMMA, fc: DELTA, ffc: EPSILON})


def match_catalog(system: CurveSystem, c: str, fc: str, ffc: str, catalog: list[TripleCatalogEntry],
                  policy: Policy = DEFAULT_POLICY) -> TripleCatalogEntry:
    tag = classify_triple(system, c, fc, ffc)
    if tag is None:
        raise ClassificationError(f"Triple ({c}, {fc}, {ffc}) has no common pair type.")
    triple = as_labelled_triple(system, c, fc, ffc)
    for entry in catalog:
        if entry.type == tag and is_stabilization_of(triple, entry.system, policy):
            logger.debug(f"Triple ({c}, {fc}, {ffc}) matches {entry.label}.")
            return entry
    raise CatalogMatchError(f"no match for the type {tag} triple ({c}, {fc}, {ffc})")


def random_stabilization(system: CurveSystem, rng: random.Random, count: int = 1) -> CurveSystem:
    for _ in range(count):
        region = rng.choice(system.regions).id
        system = add_handle(system, region, region)
    return system
