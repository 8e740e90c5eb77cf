"""
Moves that build new curve systems from old ones: relabelling, cutting along a
curve and reglueing, handle addition, and the insertion of derived curves
(push-offs, neighbourhood boundaries, turn curves, meridians, separators and
curves dual to an edge).
"""
import logging
from typing import Iterable, Sequence

from normal_generators.errors import CurveNotFoundError, SurgeryError
from normal_generators.surface import (
    CurveSystem, CutSurface, Dart, Edge, Walk, alpha, assemble, crossing_vertices,
    restrict_to, restrict_with_runs, rotation_sigma, trace_faces,
)

logger = logging.getLogger("__main__")


def fresh_curve_id(system: CurveSystem, prefix: str = "d") -> str:
    n = 1
    while f"{prefix}{n}" in system.curve_edges:
        n += 1
    return f"{prefix}{n}"


def _fresh(taken: set[str], base: str) -> str:
    candidate, n = base, 1
    while candidate in taken:
        candidate = f"{base}'{n}"
        n += 1
    taken.add(candidate)
    return candidate


def _copy_parts(system: CurveSystem) -> tuple[dict, dict, dict]:
    rotation = {v: tuple(darts) for v, darts in system.rotations}
    edges = {e.id: e for e in system.edges}
    curves = {c: tuple(es) for c, es in system.curves}
    return rotation, edges, curves


def relabel(system: CurveSystem, mapping: dict[str, str]) -> CurveSystem:
    """
    Renames curves; ids missing from mapping are kept.
    """
    system.require_curve(*mapping)
    renamed = [mapping.get(c, c) for c in system.curve_ids]
    if len(set(renamed)) != len(renamed):
        raise SurgeryError(f"Relabelling {mapping} merges two curves.")
    edges = {e.id: Edge(e.id, mapping.get(e.curve, e.curve), e.tail, e.head) for e in system.edges}
    curves = {mapping.get(c, c): es for c, es in system.curves}
    return CurveSystem(
        rotations=system.rotations,
        edges=tuple(edges[e.id] for e in system.edges),
        curves=tuple(curves.items()),
        regions=system.regions,
    )


def add_handle(system: CurveSystem, r1: str, r2: str) -> CurveSystem:
    """
    Attaches a handle with feet in r1 and r2. One region gains genus; two distinct
    regions merge into one carrying both genera and all their boundary walks.
    """
    first, second = system.require_region(r1), system.require_region(r2)
    rotation, edges, curves = _copy_parts(system)
    genus = {r.id: r.genus for r in system.regions}
    if r1 == r2:
        genus[r1] += 1
    else:
        genus[r1] = first.genus + second.genus
        del genus[r2]

    def region_of_face(face: Walk) -> str:
        region = system.region_of_dart[face[0]]
        return r1 if region == r2 else region

    logger.debug(f"Added a handle between {r1} and {r2}.")
    return assemble(rotation, edges, curves, region_of_face, genus)


def cut_along(system: CurveSystem, curve: str) -> CutSurface:
    """
    Doubles a curve into a left copy and a right copy. The strip between them is the seam;
    every other curve crossing the cut gets one seam edge per crossing.
    :param system: the system to cut.
    :param curve: id of the curve to cut along.
    :return: a CutSurface whose boundary copies are "<curve>_1" (left) and "<curve>_2" (right).
    """
    system.require_curve(curve)
    left, right = f"{curve}_1", f"{curve}_2"
    if left in system.curve_edges or right in system.curve_edges:
        raise SurgeryError(f"Curve ids {left}/{right} are already taken.")
    rotation, edges, curves = _copy_parts(system)
    edge_ids = set(edges)
    vertex_ids = set(rotation)
    vertex_copy = {(v, which): _fresh(vertex_ids, f"{v}_{which}")
                   for v in system.vertices_of(curve) for which in (1, 2)}
    copy_of: dict[str, tuple[str, int]] = {}

    for e in system.curve_edges[curve]:
        old = edges.pop(e)
        for which, label in ((1, left), (2, right)):
            copy = _fresh(edge_ids, f"{e}_{which}")
            copy_of[copy] = (e, which)
            edges[copy] = Edge(copy, label, vertex_copy[(old.tail, which)], vertex_copy[(old.head, which)])
    copies = {(e, which): copy for copy, (e, which) in copy_of.items()}

    moved: dict[Dart, str] = {}
    seam_after: dict[str, str] = {}
    pairing = []
    for vertex in system.vertices_of(curve):
        darts = rotation.pop(vertex)
        start = next(i for i, d in enumerate(darts) if system.curve_of(d) == curve and d[1] == 0)
        darts = darts[start:] + darts[:start]
        out_edge, in_edge = darts[0][0], darts[len(darts) // 2][0]
        v_left, v_right = vertex_copy[(vertex, 1)], vertex_copy[(vertex, 2)]
        pairing.append((v_left, v_right))
        left_out, left_in = (copies[(out_edge, 1)], 0), (copies[(in_edge, 1)], 1)
        right_out, right_in = (copies[(out_edge, 2)], 0), (copies[(in_edge, 2)], 1)
        if len(darts) == 2:
            rotation[v_left] = (left_out, left_in)
            rotation[v_right] = (right_out, right_in)
            continue
        on_left, on_right = darts[1], darts[3]
        moved[on_left], moved[on_right] = v_left, v_right
        crossing = system.curve_of(on_left)
        seam = _fresh(edge_ids, f"{vertex}_seam")
        if on_left[1] == 1:
            # crossing curve passes from the left copy over to the right copy
            edges[seam] = Edge(seam, crossing, v_left, v_right)
            seam_after[on_left[0]] = seam
            at_left, at_right = (seam, 0), (seam, 1)
        else:
            edges[seam] = Edge(seam, crossing, v_right, v_left)
            seam_after[on_right[0]] = seam
            at_left, at_right = (seam, 1), (seam, 0)
        rotation[v_left] = (left_out, on_left, left_in, at_left)
        rotation[v_right] = (right_out, at_right, right_in, on_right)

    for dart, vertex in moved.items():
        e = edges[dart[0]]
        edges[e.id] = Edge(e.id, e.curve, vertex if dart[1] == 0 else e.tail,
                           vertex if dart[1] == 1 else e.head)

    new_curves: dict[str, tuple[str, ...]] = {}
    for label, sequence in curves.items():
        if label == curve:
            new_curves[left] = tuple(copies[(e, 1)] for e in sequence)
            new_curves[right] = tuple(copies[(e, 2)] for e in sequence)
            continue
        expanded = []
        for e in sequence:
            expanded.append(e)
            if e in seam_after:
                expanded.append(seam_after[e])
        new_curves[label] = tuple(expanded)

    faces = trace_faces(rotation_sigma(rotation))
    seam_faces = [f for f in faces if any(
        d[0] in copy_of and (copy_of[d[0]][1], d[1]) in ((1, 0), (2, 1)) for d in f)]
    face_region: dict[Walk, str] = {}
    if not seam_after:
        for face in seam_faces:
            face_region[face] = f"{curve}_seam"
    else:
        for n, face in enumerate(seam_faces, start=1):
            face_region[face] = f"{curve}_seam{n}"
    seam_regions = set(face_region.values())
    for face in faces:
        if face in face_region:
            continue
        dart = face[0]
        if dart[0] in copy_of:
            dart = (copy_of[dart[0]][0], dart[1])
        face_region[face] = system.region_of_dart[dart]

    genus = {r.id: r.genus for r in system.regions} | {r: 0 for r in seam_regions}
    cut_system = assemble(rotation, edges, new_curves, face_region.__getitem__, genus)
    logger.debug(f"Cut along {curve}: {len(pairing)} identified vertex pairs, "
                 f"{len(seam_regions)} seam regions.")
    return CutSurface(cut_system, curve, (left, right), frozenset(seam_regions), tuple(pairing))


def reglue(cut: CutSurface) -> CurveSystem:
    """
    Inverse of cut_along up to isomorphism.
    """
    kept = [c for c in cut.system.curve_ids if c != cut.boundary[1]]
    return relabel(restrict_to(cut.system, kept), {cut.boundary[0]: cut.cut_curve})


def _subdivide(system: CurveSystem,
               points: dict[Dart, str]) -> tuple[dict, dict, dict, dict[Dart, tuple[Dart, Dart]], dict[Dart, Dart]]:
    """
    Puts a new degree-2 point on the edge of every dart in points, next to that dart's
    vertex. Returns the new rotation, edges and curves, the (away, back) darts at each
    new point, and for every piece dart the original dart on the same side.
    """
    rotation, edges, curves = _copy_parts(system)
    edge_ids = set(edges)
    origin: dict[Dart, Dart] = {d: d for d in system.sigma}
    at_point: dict[Dart, tuple[Dart, Dart]] = {}
    pieces_of: dict[str, list[str]] = {}
    for e in system.edges:
        near_tail, near_head = points.get((e.id, 0)), points.get((e.id, 1))
        if near_tail is None and near_head is None:
            continue
        stops = [e.tail] + [p for p in (near_tail, near_head) if p is not None] + [e.head]
        pieces = [e.id] + [_fresh(edge_ids, f"{e.id}/{k}") for k in range(1, len(stops) - 1)]
        for k, piece in enumerate(pieces):
            edges[piece] = Edge(piece, e.curve, stops[k], stops[k + 1])
            origin[(piece, 0)], origin[(piece, 1)] = (e.id, 0), (e.id, 1)
        rotation[e.head] = tuple((pieces[-1], 1) if d == (e.id, 1) else d for d in rotation[e.head])
        if near_tail is not None:
            at_point[(e.id, 0)] = ((pieces[1], 0), (pieces[0], 1))
        if near_head is not None:
            k = len(stops) - 2
            at_point[(e.id, 1)] = ((pieces[k - 1], 1), (pieces[k], 0))
        pieces_of[e.id] = pieces
    for label, sequence in curves.items():
        curves[label] = tuple(piece for e in sequence for piece in pieces_of.get(e, [e]))
    return rotation, edges, curves, at_point, origin


def _parallel_crossings(system: CurveSystem, path: Sequence[Dart]) -> list[Dart]:
    if len(set(path)) != len(path):
        raise SurgeryError("Push-off path repeats a dart.")
    for k, dart in enumerate(path):
        following = path[(k + 1) % len(path)]
        if dart not in system.vertex_of or following not in system.vertex_of:
            raise SurgeryError(f"Push-off path uses an unknown dart {dart}.")
        if system.vertex_of[alpha(dart)] != system.vertex_of[following]:
            raise SurgeryError("Push-off path does not close up.")
    path_edges = {d[0] for d in path}
    crossed = []
    for k, incoming in enumerate(path):
        outgoing = path[(k + 1) % len(path)]
        dart = system.sigma[alpha(incoming)]
        while dart != outgoing:
            crossed.append(dart)
            dart = system.sigma[dart]
    if len(set(crossed)) != len(crossed) or path_edges & {d[0] for d in crossed}:
        raise SurgeryError("Push-off would not be a simple curve.")
    return crossed


def _split_with_loop(system: CurveSystem, new_curve: str, region: str,
                     walks_to_left: Iterable[Walk], left_genus: int) -> CurveSystem:
    """
    Adds a crossing-free loop inside a region. The walks_to_left and the loop's left
    side form a new region of genus left_genus; the rest keeps the old region id.
    """
    old = system.require_region(region)
    walks_to_left = set(walks_to_left)
    if not walks_to_left <= set(old.walks):
        raise SurgeryError(f"Walks to separate are not boundary walks of {region}.")
    if not 0 <= left_genus <= old.genus:
        raise SurgeryError(f"Genus {left_genus} cannot be split off a genus-{old.genus} region.")
    rotation, edges, curves = _copy_parts(system)
    marker, loop = _fresh(set(rotation), f"{new_curve}@1"), _fresh(set(edges), f"{new_curve}:1")
    rotation[marker] = ((loop, 0), (loop, 1))
    edges[loop] = Edge(loop, new_curve, marker, marker)
    curves[new_curve] = (loop,)
    side = f"{new_curve}_side"
    genus = {r.id: r.genus for r in system.regions}
    genus[region] = old.genus - left_genus
    genus[side] = left_genus

    def region_of_face(face: Walk) -> str:
        if face == ((loop, 1),) or face in walks_to_left:
            return side
        if face == ((loop, 0),):
            return region
        return system.region_of_dart[face[0]]

    return assemble(rotation, edges, curves, region_of_face, genus)


def _insert_parallel(system: CurveSystem, path: Sequence[Dart], new_curve: str) -> CurveSystem:
    """
    Adds a curve running alongside a closed dart path, just to its right.
    """
    crossed = _parallel_crossings(system, path)
    if not crossed:
        face = system.face_of_dart[path[0]]
        return _split_with_loop(system, new_curve, system.region_of_dart[path[0]], [face], 0)

    vertex_ids = set(system.rotation)
    points = {dart: _fresh(vertex_ids, f"{new_curve}@{j}") for j, dart in enumerate(crossed, start=1)}
    rotation, edges, curves, at_point, origin = _subdivide(system, points)
    edge_ids = set(edges)
    links = [_fresh(edge_ids, f"{new_curve}:{j}") for j in range(1, len(crossed) + 1)]
    for j, dart in enumerate(crossed):
        here, there = points[dart], points[crossed[(j + 1) % len(crossed)]]
        edges[links[j]] = Edge(links[j], new_curve, here, there)
        away, back = at_point[dart]
        rotation[here] = (away, (links[j], 0), back, (links[j - 1], 1))
    curves[new_curve] = tuple(links)

    link_ids = set(links)
    face_region: dict[Walk, str] = {}
    genus = {r.id: r.genus for r in system.regions}
    strips = 0
    for face in trace_faces(rotation_sigma(rotation)):
        if any(d[0] in link_ids and d[1] == 1 for d in face):
            strips += 1
            face_region[face] = f"{new_curve}_strip{strips}"
            genus[face_region[face]] = 0
        else:
            dart = next(d for d in face if d[0] not in link_ids)
            face_region[face] = system.region_of_dart[origin[dart]]
    return assemble(rotation, edges, curves, face_region.__getitem__, genus)


def insert_pushoff(system: CurveSystem, region: str, walk_index: int) -> tuple[CurveSystem, str]:
    """
    Adds a curve parallel to one boundary walk of a region, inside that region.
    :return: the new system and the id of the new curve.
    """
    walks = system.require_region(region).walks
    if not 0 <= walk_index < len(walks):
        raise SurgeryError(f"Region {region} has no boundary walk {walk_index}.")
    new_curve = fresh_curve_id(system)
    return _insert_parallel(system, walks[walk_index], new_curve), new_curve


def lift_walk(walk: Walk, runs: dict[str, tuple[str, ...]]) -> list[Dart]:
    """
    Expands a walk of a restricted system into darts of the full system.
    """
    darts = []
    for e, end in walk:
        run = runs[e]
        if end == 0:
            darts.extend((old, 0) for old in run)
        else:
            darts.extend((old, 1) for old in reversed(run))
    return darts


def insert_neighborhood_curve(system: CurveSystem, curves: Iterable[str], region: str,
                              walk_index: int) -> tuple[CurveSystem, str]:
    """
    Adds the boundary component of a regular neighbourhood of the union of curves that
    faces the given region of that union. The new curve crosses the remaining curves
    transversely wherever they leave the union.
    :param curves: the sub-union.
    :param region: region id of restrict_to(system, curves).
    :param walk_index: which boundary walk of that region to follow.
    """
    sub, runs = restrict_with_runs(system, curves)
    walks = sub.require_region(region).walks
    if not 0 <= walk_index < len(walks):
        raise SurgeryError(f"Region {region} of the sub-union has no boundary walk {walk_index}.")
    new_curve = fresh_curve_id(system)
    path = lift_walk(walks[walk_index], runs)
    return _insert_parallel(system, path, new_curve), new_curve


def curve_arcs(system: CurveSystem, curve: str, ends: Sequence[str]) -> list[tuple[str, ...]]:
    """
    The arcs of a curve between two of its vertices, as edge sequences in curve order.
    """
    edge_ids = system.curve_edges[curve]
    starts = [i for i, e in enumerate(edge_ids) if system.edge[e].tail in ends]
    if len(starts) != 2:
        raise SurgeryError(f"Curve {curve} does not pass through {ends} once each.")
    first, second = starts
    return [edge_ids[first:second], edge_ids[second:] + edge_ids[:first]]


def _turn_path(system: CurveSystem, c1: str, c2: str, arc_choice: tuple[int, int]) -> list[Dart]:
    crossings = crossing_vertices(system, c1, c2)
    if len(crossings) != 2:
        raise SurgeryError(f"Turn curves need exactly two crossings of {c1} and {c2}, found {len(crossings)}.")
    a, b = arc_choice
    if a not in (0, 1) or b not in (0, 1):
        raise SurgeryError(f"Arc choice {arc_choice} must pick arc 0 or 1 of each curve.")
    first = [(e, 0) for e in curve_arcs(system, c1, crossings)[a]]
    second = curve_arcs(system, c2, crossings)[b]
    junction = system.vertex_of[alpha(first[-1])]
    if system.edge[second[0]].tail == junction:
        return first + [(e, 0) for e in second]
    return first + [(e, 1) for e in reversed(second)]


def turn_direction(system: CurveSystem, c1: str, c2: str, arc_choice: tuple[int, int]) -> str:
    """
    "left" or "right": how the chosen arc of c1 turns onto the chosen arc of c2.
    """
    path = _turn_path(system, c1, c2, arc_choice)
    junction = next(k for k, d in enumerate(path) if system.curve_of(d) == c2)
    arriving, leaving = path[junction - 1], path[junction]
    return "right" if system.sigma[alpha(arriving)] == leaving else "left"


def insert_turn_curve(system: CurveSystem, c1: str, c2: str,
                      arc_choice: tuple[int, int]) -> tuple[CurveSystem, str]:
    """
    Adds the curve made of one arc of c1 and one arc of c2, pushed off to the left of
    its direction of travel (along the chosen arc of c1).
    :param arc_choice: (arc of c1, arc of c2), each 0 or 1 as numbered by curve_arcs.
    """
    system.require_curve(c1, c2)
    path = _turn_path(system, c1, c2, arc_choice)
    new_curve = fresh_curve_id(system)
    reverse = [alpha(d) for d in reversed(path)]
    return _insert_parallel(system, reverse, new_curve), new_curve


def insert_meridian(system: CurveSystem, region: str) -> tuple[CurveSystem, str]:
    """
    Adds a nonseparating curve around one handle of a region of positive genus.
    """
    old = system.require_region(region)
    if old.genus < 1:
        raise SurgeryError(f"Region {region} has no handle.")
    rotation, edges, curves = _copy_parts(system)
    new_curve = fresh_curve_id(system)
    marker, loop = _fresh(set(rotation), f"{new_curve}@1"), _fresh(set(edges), f"{new_curve}:1")
    rotation[marker] = ((loop, 0), (loop, 1))
    edges[loop] = Edge(loop, new_curve, marker, marker)
    curves[new_curve] = (loop,)
    genus = {r.id: r.genus for r in system.regions}
    genus[region] -= 1

    def region_of_face(face: Walk) -> str:
        return region if face[0][0] == loop else system.region_of_dart[face[0]]

    return assemble(rotation, edges, curves, region_of_face, genus), new_curve


def insert_separator(system: CurveSystem, region: str, walk_indices: Iterable[int],
                     genus: int) -> tuple[CurveSystem, str]:
    """
    Adds a curve cutting a region in two: one side holds the chosen boundary walks and
    `genus` handles, the other side holds the rest.
    """
    walks = system.require_region(region).walks
    indices = sorted(set(walk_indices))
    if any(not 0 <= i < len(walks) for i in indices):
        raise SurgeryError(f"Region {region} has only {len(walks)} boundary walks.")
    new_curve = fresh_curve_id(system)
    return _split_with_loop(system, new_curve, region, [walks[i] for i in indices], genus), new_curve


def insert_dual_curve(system: CurveSystem, edge_id: str) -> tuple[CurveSystem, str]:
    """
    Adds a curve crossing one edge once and otherwise staying in the region on both
    sides of that edge. When both sides lie on one boundary walk the curve goes over a
    handle of the region, or cuts off a disk piece if the region has genus 0.
    """
    if edge_id not in system.edge:
        raise CurveNotFoundError(f"Edge {edge_id} is not part of the system.")
    right, left = system.sides(edge_id)
    if right != left:
        raise SurgeryError(f"Edge {edge_id} separates regions {right} and {left}.")
    same_walk = system.face_of_dart[(edge_id, 0)] == system.face_of_dart[(edge_id, 1)]
    new_curve = fresh_curve_id(system)
    point = _fresh(set(system.rotation), f"{new_curve}@1")
    rotation, edges, curves, at_point, origin = _subdivide(system, {(edge_id, 0): point})
    loop = _fresh(set(edges), f"{new_curve}:1")
    edges[loop] = Edge(loop, new_curve, point, point)
    away, back = at_point[(edge_id, 0)]
    rotation[point] = (away, (loop, 0), back, (loop, 1))
    curves[new_curve] = (loop,)

    genus = {r.id: r.genus for r in system.regions}
    split_off = None
    if same_walk and genus[right] >= 1:
        genus[right] -= 1
    elif same_walk:
        split_off = f"{new_curve}_side"
        genus[split_off] = 0

    def region_of_face(face: Walk) -> str:
        if split_off is not None and (loop, 1) in face:
            return split_off
        dart = next((d for d in face if d[0] != loop), None)
        return right if dart is None else system.region_of_dart[origin[dart]]

    return assemble(rotation, edges, curves, region_of_face, genus), new_curve

