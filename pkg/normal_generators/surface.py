"""
Curve systems on closed orientable surfaces.

A system is the ribbon graph of a union of simple closed curves (vertices are
transversal crossings or degree-2 markers, darts are listed counterclockwise)
together with a grouping of its boundary cycles into complementary regions,
each of which carries a genus. Darts are pairs (edge id, end) with end 0 at the
edge's tail and 1 at its head; the edge-side seen by a dart's boundary cycle is
"R" for end 0 and "L" for end 1.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

from normal_generators.errors import CurveNotFoundError, InvalidSystemError, RegionNotFoundError
from normal_generators.helpers import UnionFind, natural_key, rotate_to_minimum

logger = logging.getLogger("__main__")

Dart = tuple[str, int]
Walk = tuple[Dart, ...]

SIDE_OF_END = {0: "R", 1: "L"}
END_OF_SIDE = {"R": 0, "L": 1}


def alpha(dart: Dart) -> Dart:
    """
    The dart at the other end of the same edge.
    """
    return dart[0], 1 - dart[1]


@dataclass(frozen=True)
class Edge:
    id: str
    curve: str
    tail: str
    head: str


@dataclass(frozen=True)
class Region:
    id: str
    genus: int
    walks: tuple[Walk, ...]

    @property
    def boundary_count(self) -> int:
        return len(self.walks)

    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count


@dataclass(frozen=True)
class CurveSystem:
    rotations: tuple[tuple[str, tuple[Dart, ...]], ...]
    edges: tuple[Edge, ...]
    curves: tuple[tuple[str, tuple[str, ...]], ...]
    regions: tuple[Region, ...]

    @cached_property
    def rotation(self) -> dict[str, tuple[Dart, ...]]:
        return dict(self.rotations)

    @cached_property
    def sigma(self) -> dict[Dart, Dart]:
        """
        Counterclockwise successor of every dart around its vertex.
        """
        return rotation_sigma(self.rotation)

    @cached_property
    def sigma_inverse(self) -> dict[Dart, Dart]:
        return {after: before for before, after in self.sigma.items()}

    @cached_property
    def vertex_of(self) -> dict[Dart, str]:
        return {dart: vertex for vertex, darts in self.rotations for dart in darts}

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def curve_edges(self) -> dict[str, tuple[str, ...]]:
        return dict(self.curves)

    @cached_property
    def curve_ids(self) -> tuple[str, ...]:
        return tuple(curve for curve, _ in self.curves)

    @cached_property
    def region(self) -> dict[str, Region]:
        return {r.id: r for r in self.regions}

    @cached_property
    def region_of_dart(self) -> dict[Dart, str]:
        return {dart: r.id for r in self.regions for walk in r.walks for dart in walk}

    @cached_property
    def face_of_dart(self) -> dict[Dart, Walk]:
        return {dart: walk for r in self.regions for walk in r.walks for dart in walk}

    def curve_of(self, dart: Dart) -> str:
        return self.edge[dart[0]].curve

    def vertices_of(self, curve: str) -> tuple[str, ...]:
        """
        Vertices met by a curve, in the order it passes them.
        """
        return tuple(self.edge[e].tail for e in self.curve_edges[curve])

    def curves_at(self, vertex: str) -> tuple[str, ...]:
        return tuple(sorted({self.curve_of(d) for d in self.rotation[vertex]}))

    def require_curve(self, *curves: str) -> None:
        for curve in curves:
            if curve not in self.curve_edges:
                raise CurveNotFoundError(f"Curve {curve} is not part of the system.")

    def require_region(self, region: str) -> Region:
        if region not in self.region:
            raise RegionNotFoundError(f"Region {region} is not part of the system.")
        return self.region[region]

    def sides(self, edge_id: str) -> tuple[str, str]:
        """
        Regions on the right and on the left of an edge.
        """
        return self.region_of_dart[(edge_id, 0)], self.region_of_dart[(edge_id, 1)]


@dataclass(frozen=True)
class CutSurface:
    """
    A system cut along one curve: the curve is replaced by two boundary copies and the
    thin strip between them (the seam) is excluded from every region query.
    """
    system: CurveSystem
    cut_curve: str
    boundary: tuple[str, str]
    seam: frozenset[str] = field(default_factory=frozenset)
    pairing: tuple[tuple[str, str], ...] = ()

    def components(self, cut_set: Iterable[str] = ()) -> list[tuple[str, ...]]:
        """
        Components of the cut surface after also cutting along cut_set.
        """
        cut = set(cut_set) | set(self.boundary)
        return [group for group in complement_components(self.system, cut)
                if not set(group) <= self.seam]

    def component_of(self, region: str, cut_set: Iterable[str] = ()) -> int:
        for index, group in enumerate(self.components(cut_set)):
            if region in group:
                return index
        raise RegionNotFoundError(f"Region {region} lies in the seam of the cut.")

    def outer_region(self, boundary_curve: str) -> str:
        """
        The region on the surface side of a boundary copy.
        """
        first_edge = self.system.curve_edges[boundary_curve][0]
        right, left = self.system.sides(first_edge)
        return left if right in self.seam else right

    def arc_edges(self, curve: str) -> list[tuple[str, ...]]:
        """
        Edges of each arc a curve leaves in the cut surface, in curve order. A curve
        that misses the cut curve gives an empty list.
        """
        system = self.system
        system.require_curve(curve)
        edge_ids = system.curve_edges[curve]
        seam_edges = [i for i, e in enumerate(edge_ids) if _is_seam_edge(self, e)]
        result = []
        for j, start in enumerate(seam_edges):
            stop = seam_edges[(j + 1) % len(seam_edges)]
            span = (stop - start - 1) % len(edge_ids)
            result.append(tuple(edge_ids[(start + 1 + n) % len(edge_ids)] for n in range(span)))
        return result

    def arcs(self, curve: str) -> list[tuple[str, str]]:
        """
        Arcs a curve leaves in the cut surface, each given by the boundary copies at its
        two ends.
        """
        result = []
        for arc in self.arc_edges(curve):
            tail = self.system.edge[arc[0]].tail
            head = self.system.edge[arc[-1]].head
            result.append((self._copy_at(tail), self._copy_at(head)))
        return result

    def arc_separates(self, arc: Iterable[str]) -> bool:
        """
        Whether cutting along an arc, given by its edges, disconnects the cut surface.
        """
        removed = set(arc)
        groups = UnionFind(region.id for region in self.system.regions)
        for edge in self.system.edges:
            if edge.curve in self.boundary or edge.id in removed:
                continue
            groups.union(*self.system.sides(edge.id))
        pieces = {groups.find(region.id) for region in self.system.regions if region.id not in self.seam}
        return len(pieces) > len(self.components())

    def _copy_at(self, vertex: str) -> str:
        for curve in self.system.curves_at(vertex):
            if curve in self.boundary:
                return curve
        raise InvalidSystemError("arc end is not on a boundary copy", vertex)


def _is_seam_edge(cut: CutSurface, edge_id: str) -> bool:
    right, left = cut.system.sides(edge_id)
    return right in cut.seam and left in cut.seam


def rotation_sigma(rotation: dict[str, tuple[Dart, ...]]) -> dict[Dart, Dart]:
    successor = {}
    for darts in rotation.values():
        for i, dart in enumerate(darts):
            successor[dart] = darts[(i + 1) % len(darts)]
    return successor


def trace_faces(sigma: dict[Dart, Dart]) -> list[Walk]:
    """
    Boundary cycles of a ribbon graph; each keeps its face on the right.
    """
    seen: set[Dart] = set()
    faces = []
    for start in sorted(sigma):
        if start in seen:
            continue
        face = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            face.append(dart)
            dart = sigma[alpha(dart)]
        faces.append(rotate_to_minimum(face))
    return faces


def assemble(rotation: dict[str, tuple[Dart, ...]],
             edges: dict[str, Edge],
             curves: dict[str, tuple[str, ...]],
             region_of_face: Callable[[Walk], str],
             genus: dict[str, int]) -> CurveSystem:
    """
    Builds a system from its ribbon graph, a rule sending each boundary cycle to a region
    id, and the genus of every region. Invariants are checked before returning.
    :param rotation: vertex id -> counterclockwise darts.
    :param edges: edge id -> Edge.
    :param curves: curve id -> edge ids in order.
    :param region_of_face: boundary cycle -> region id.
    :param genus: region id -> genus.
    :return: a valid CurveSystem.
    """
    sigma = rotation_sigma(rotation)
    grouped: dict[str, list[Walk]] = {}
    for face in trace_faces(sigma):
        grouped.setdefault(region_of_face(face), []).append(face)
    missing = set(genus) - set(grouped)
    if missing:
        raise InvalidSystemError("region without boundary walks", sorted(missing)[0])
    regions = tuple(
        Region(rid, genus[rid], tuple(sorted(grouped[rid])))
        for rid in sorted(grouped, key=natural_key)
    )
    system = CurveSystem(
        rotations=tuple((v, tuple(rotation[v])) for v in sorted(rotation, key=natural_key)),
        edges=tuple(edges[e] for e in sorted(edges, key=natural_key)),
        curves=tuple((c, tuple(es)) for c, es in curves.items()),
        regions=regions,
    )
    check_invariants(system)
    return system


def check_invariants(system: CurveSystem) -> None:
    """
    Raises InvalidSystemError naming the first broken invariant.
    """
    for e in system.edges:
        if e.curve not in system.curve_edges:
            raise InvalidSystemError("edge references unknown curve", e.id)
        for end, vertex in ((0, e.tail), (1, e.head)):
            if system.vertex_of.get((e.id, end)) != vertex:
                raise InvalidSystemError("dart is not listed at its endpoint", e.id)

    for vertex, darts in system.rotations:
        if len(darts) not in (2, 4) or len(set(darts)) != len(darts):
            raise InvalidSystemError("degree must be 2 or 4", vertex)
        labels = [system.curve_of(d) for d in darts]
        if len(darts) == 4:
            if labels[0] != labels[2] or labels[1] != labels[3] or labels[0] == labels[1]:
                raise InvalidSystemError("transversality violated", vertex)
        elif labels[0] != labels[1]:
            raise InvalidSystemError("marker darts lie on two curves", vertex)

    covered: set[str] = set()
    for curve, edge_ids in system.curves:
        if not edge_ids:
            raise InvalidSystemError("curve has no vertex", curve)
        for i, e in enumerate(edge_ids):
            if e not in system.edge or system.edge[e].curve != curve or e in covered:
                raise InvalidSystemError("curve is not a single closed cycle", curve)
            covered.add(e)
            following = system.edge[edge_ids[(i + 1) % len(edge_ids)]]
            if system.edge[e].head != following.tail:
                raise InvalidSystemError("curve is not a single closed cycle", curve)
    if covered != set(system.edge):
        stray = sorted(set(system.edge) - covered)[0]
        raise InvalidSystemError("edge is not covered by its curve", stray)

    claimed: set[Dart] = set()
    for r in system.regions:
        if r.genus < 0 or not r.walks:
            raise InvalidSystemError("region needs a genus >= 0 and a boundary walk", r.id)
        for walk in r.walks:
            for dart in walk:
                if dart in claimed:
                    raise InvalidSystemError("edge-side in two boundary walks", r.id)
                claimed.add(dart)
    if len(claimed) != 2 * len(system.edges):
        raise InvalidSystemError("edge-side missing from boundary walks")

    chi = euler_characteristic(system)
    if chi % 2 or chi > 2:
        raise InvalidSystemError(f"Euler characteristic {chi} is not that of a closed surface")
    if len(complement_components(system, ())) != 1:
        raise InvalidSystemError("surface is disconnected")


def validate(raw: dict) -> CurveSystem:
    """
    Turns a JSON-compatible description into a CurveSystem.
    :param raw: dictionary with the keys vertices, edges, curves, regions.
    :return: the validated system.
    """
    for key in ("vertices", "edges", "curves", "regions"):
        if key not in raw:
            raise InvalidSystemError(f"missing top-level key '{key}'")

    rotation: dict[str, tuple[Dart, ...]] = {}
    for record in raw["vertices"]:
        vertex = str(record["id"])
        if vertex in rotation:
            raise InvalidSystemError("duplicate vertex id", vertex)
        rotation[vertex] = tuple((str(e), int(end)) for e, end in record["darts"])

    edges: dict[str, Edge] = {}
    for record in raw["edges"]:
        e = Edge(str(record["id"]), str(record["curve"]), str(record["tail"]), str(record["head"]))
        if e.id in edges:
            raise InvalidSystemError("duplicate edge id", e.id)
        for vertex in (e.tail, e.head):
            if vertex not in rotation:
                raise InvalidSystemError("edge endpoint is not a vertex", e.id)
        edges[e.id] = e

    curves: dict[str, tuple[str, ...]] = {}
    for record in raw["curves"]:
        curve = str(record["id"])
        if curve in curves:
            raise InvalidSystemError("duplicate curve id", curve)
        curves[curve] = tuple(str(e) for e in record["edges"])

    seen_darts: set[Dart] = set()
    for vertex, darts in rotation.items():
        for dart in darts:
            if dart[0] not in edges or dart[1] not in (0, 1):
                raise InvalidSystemError("dart names an unknown edge end", vertex)
            if dart in seen_darts:
                raise InvalidSystemError("dart listed twice", vertex)
            seen_darts.add(dart)

    regions = []
    for record in raw["regions"]:
        walks = []
        for walk in record["walks"]:
            try:
                walks.append(rotate_to_minimum([(str(e), END_OF_SIDE[side]) for e, side in walk]))
            except KeyError as error:
                raise InvalidSystemError("edge side must be 'R' or 'L'", str(record["id"])) from error
        regions.append(Region(str(record["id"]), int(record["genus"]), tuple(sorted(walks))))
    if len({r.id for r in regions}) != len(regions):
        raise InvalidSystemError("duplicate region id")

    system = CurveSystem(
        rotations=tuple(rotation.items()),
        edges=tuple(edges.values()),
        curves=tuple(curves.items()),
        regions=tuple(regions),
    )
    # structural checks first: face tracing needs every dart in place
    _check_darts(system)
    faces = set(trace_faces(system.sigma))
    for r in system.regions:
        for walk in r.walks:
            if walk not in faces:
                raise InvalidSystemError("boundary walk does not follow the cyclic orders", r.id)
    check_invariants(system)
    logger.debug(f"Validated system with {len(system.edges)} edges, genus {ambient_genus(system)}.")
    return system


def _check_darts(system: CurveSystem) -> None:
    for e in system.edges:
        for end, vertex in ((0, e.tail), (1, e.head)):
            if system.vertex_of.get((e.id, end)) != vertex:
                raise InvalidSystemError("dart is not listed at its endpoint", e.id)
    for vertex, darts in system.rotations:
        if len(darts) not in (2, 4):
            raise InvalidSystemError("degree must be 2 or 4", vertex)
        if len(darts) == 4:
            labels = [system.edge[d[0]].curve for d in darts]
            if labels[0] != labels[2] or labels[1] != labels[3] or labels[0] == labels[1]:
                raise InvalidSystemError("transversality violated", vertex)


def euler_characteristic(system: CurveSystem) -> int:
    return (len(system.rotations) - len(system.edges)
            + sum(r.euler_characteristic() for r in system.regions))


def ambient_genus(system: CurveSystem) -> int:
    return (2 - euler_characteristic(system)) // 2


def crossing_vertices(system: CurveSystem, c1: str, c2: str) -> list[str]:
    system.require_curve(c1, c2)
    if c1 == c2:
        raise CurveNotFoundError("Intersection of a curve with itself is undefined here.")
    return [v for v, darts in system.rotations
            if len(darts) == 4 and set(system.curves_at(v)) == {c1, c2}]


def geometric_intersection(system: CurveSystem, c1: str, c2: str) -> int:
    """
    Crossing count; it is i(c1, c2) whenever detect_bigons(c1, c2) is empty.
    """
    return len(crossing_vertices(system, c1, c2))


def crossing_sign(system: CurveSystem, vertex: str, c1: str) -> int:
    """
    +1 when the other curve crosses c1 from its right to its left at vertex.
    """
    darts = system.rotation[vertex]
    c1_out = next(d for d in darts if d[1] == 0 and system.curve_of(d) == c1)
    other_out = next(d for d in darts if d[1] == 0 and system.curve_of(d) != c1)
    return 1 if system.sigma[c1_out] == other_out else -1


def algebraic_intersection(system: CurveSystem, c1: str, c2: str) -> int:
    return abs(sum(crossing_sign(system, v, c1) for v in crossing_vertices(system, c1, c2)))


def complement_components(system: CurveSystem, cut_set: Iterable[str]) -> list[tuple[str, ...]]:
    """
    Regions grouped by connectivity once the curves in cut_set are removed from the surface.
    """
    cut = set(cut_set)
    components = UnionFind(r.id for r in system.regions)
    for e in system.edges:
        if e.curve not in cut:
            right, left = system.sides(e.id)
            components.union(right, left)
    groups = [tuple(sorted(g, key=natural_key)) for g in components.groups()]
    return sorted(groups, key=lambda g: natural_key(g[0]))


def component_index(system: CurveSystem, cut_set: Iterable[str]) -> dict[str, int]:
    return {region: i
            for i, group in enumerate(complement_components(system, cut_set))
            for region in group}


def is_separating(system: CurveSystem, curve: str) -> bool:
    system.require_curve(curve)
    return len(complement_components(system, {curve})) == 2


def mod2_class_equal(system: CurveSystem, set1: Iterable[str], set2: Iterable[str]) -> bool:
    """
    True iff the regions can be two-coloured so that colours flip exactly across the
    curves lying in one set but not the other.
    """
    set1, set2 = set(set1), set(set2)
    system.require_curve(*(set1 | set2))
    flipping = set1 ^ set2
    coloring = UnionFind(r.id for r in system.regions)
    for e in system.edges:
        right, left = system.sides(e.id)
        if not coloring.union(right, left, 1 if e.curve in flipping else 0):
            return False
    return True


def region_coloring(system: CurveSystem, flipping: Iterable[str]) -> dict[str, int] | None:
    """
    The two-colouring behind mod2_class_equal, normalised so the first region has colour 0.
    """
    flipping = set(flipping)
    coloring = UnionFind(r.id for r in system.regions)
    for e in system.edges:
        right, left = system.sides(e.id)
        if not coloring.union(right, left, 1 if e.curve in flipping else 0):
            return None
    base = coloring.parity(system.regions[0].id)
    return {r.id: coloring.parity(r.id) ^ base for r in system.regions}


def regions_bordering(system: CurveSystem, curve: str) -> set[str]:
    system.require_curve(curve)
    return {region for e in system.curve_edges[curve] for region in system.sides(e)}


def restrict_to(system: CurveSystem, keep: Iterable[str]) -> CurveSystem:
    """
    Forgets every curve not in keep; regions on both sides of a forgotten edge merge.
    """
    return restrict_with_runs(system, keep)[0]


def restrict_with_runs(system: CurveSystem,
                       keep: Iterable[str]) -> tuple[CurveSystem, dict[str, tuple[str, ...]]]:
    """
    restrict_to, also returning for each new edge the run of old edges it replaces.
    A new edge keeps the id of the first old edge of its run.
    """
    keep_set = set(keep)
    system.require_curve(*keep_set)
    kept_curves = [c for c in system.curve_ids if c in keep_set]
    if not kept_curves:
        raise CurveNotFoundError("Cannot restrict to an empty set of curves.")

    def anchored(vertex: str) -> bool:
        darts = system.rotation[vertex]
        return len(darts) == 4 and all(system.curve_of(d) in keep_set for d in darts)

    runs: dict[str, tuple[str, ...]] = {}
    edges: dict[str, Edge] = {}
    curves: dict[str, tuple[str, ...]] = {}
    anchors: set[str] = set()
    for curve in kept_curves:
        edge_ids = system.curve_edges[curve]
        starts = [i for i, e in enumerate(edge_ids) if anchored(system.edge[e].tail)] or [0]
        run_ids = []
        for j, start in enumerate(starts):
            stop = starts[j + 1] if j + 1 < len(starts) else starts[0] + len(edge_ids)
            run = tuple(edge_ids[k % len(edge_ids)] for k in range(start, stop))
            edges[run[0]] = Edge(run[0], curve, system.edge[run[0]].tail, system.edge[run[-1]].head)
            runs[run[0]] = run
            run_ids.append(run[0])
            anchors.add(system.edge[run[0]].tail)
        curves[curve] = tuple(run_ids)

    first_of = {run[0]: rid for rid, run in runs.items()}
    last_of = {run[-1]: rid for rid, run in runs.items()}
    rotation = {}
    for vertex in anchors:
        mapped = []
        for e, end in system.rotation[vertex]:
            if system.edge[e].curve not in keep_set:
                continue
            if end == 0 and e in first_of:
                mapped.append((first_of[e], 0))
            elif end == 1 and e in last_of:
                mapped.append((last_of[e], 1))
        rotation[vertex] = tuple(mapped)

    blocks = UnionFind(r.id for r in system.regions)
    for e in system.edges:
        if e.curve not in keep_set:
            blocks.union(*system.sides(e.id))
    chi: dict = {}
    for r in system.regions:
        root = blocks.find(r.id)
        chi[root] = chi.get(root, 0) + r.euler_characteristic()
    for e in system.edges:
        if e.curve not in keep_set:
            root = blocks.find(system.region_of_dart[(e.id, 0)])
            chi[root] -= 1
    for vertex, darts in system.rotations:
        if all(system.curve_of(d) not in keep_set for d in darts):
            root = blocks.find(system.region_of_dart[darts[0]])
            chi[root] += 1

    order = {r.id: i for i, r in enumerate(system.regions)}
    name = {}
    for group in blocks.groups():
        label = min(group, key=lambda rid: order[rid])
        for rid in group:
            name[blocks.find(rid)] = label

    def old_dart(dart: Dart) -> Dart:
        run = runs[dart[0]]
        return (run[0], 0) if dart[1] == 0 else (run[-1], 1)

    def region_of_face(face: Walk) -> str:
        return name[blocks.find(system.region_of_dart[old_dart(face[0])])]

    sigma = rotation_sigma(rotation)
    walk_count: dict[str, int] = {}
    for face in trace_faces(sigma):
        label = region_of_face(face)
        walk_count[label] = walk_count.get(label, 0) + 1
    genus = {}
    for root, value in chi.items():
        label = name[root]
        doubled = 2 - walk_count.get(label, 0) - value
        if doubled % 2 or doubled < 0:
            raise InvalidSystemError("restriction produced an impossible region", label)
        genus[label] = doubled // 2

    return assemble(rotation, edges, curves, region_of_face, genus), runs


def arc_count(system: CurveSystem, walk: Walk) -> int:
    """
    Number of maximal runs of one curve label along a cyclic boundary walk.
    """
    labels = [system.curve_of(d) for d in walk]
    changes = sum(1 for i in range(len(labels)) if labels[i] != labels[i - 1])
    return changes if changes else 1


def detect_bigons(system: CurveSystem, c1: str, c2: str) -> list[str]:
    """
    Regions of the pair c1, c2 that are disks bounded by one arc of each curve.
    """
    pair = restrict_to(system, [c1, c2])
    bigons = []
    for r in pair.regions:
        if r.genus == 0 and len(r.walks) == 1 and arc_count(pair, r.walks[0]) == 2:
            if {pair.curve_of(d) for d in r.walks[0]} == {c1, c2}:
                bigons.append(r.id)
    return bigons


def bounds_annulus(system: CurveSystem, c1: str, c2: str) -> bool:
    """
    True when disjoint curves c1, c2 cobound an annulus, i.e. are homotopic.
    """
    pair = restrict_to(system, [c1, c2])
    for r in pair.regions:
        if r.genus == 0 and len(r.walks) == 2:
            owners = [{pair.curve_of(d) for d in walk} for walk in r.walks]
            if sorted(map(sorted, owners)) == [[c1], [c2]] or sorted(map(sorted, owners)) == [[c2], [c1]]:
                return True
    return False


def is_trivial(system: CurveSystem, curve: str) -> bool:
    """
    True when the curve bounds a disk.
    """
    alone = restrict_to(system, [curve])
    return len(alone.regions) == 2 and any(r.genus == 0 for r in alone.regions)


def side_sequence(walk: Walk) -> list[list]:
    return [[e, SIDE_OF_END[end]] for e, end in walk]


DOT_COLORS = ("red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan")


def to_dot(system: CurveSystem) -> str:
    """
    Crossing graph in Graphviz DOT, one colour per curve.
    """
    lines = ["graph curves {"]
    for vertex, darts in system.rotations:
        shape = "point" if len(darts) == 2 else "circle"
        lines.append(f'  "{vertex}" [shape={shape}];')
    color = {c: DOT_COLORS[i % len(DOT_COLORS)] for i, c in enumerate(system.curve_ids)}
    for e in system.edges:
        lines.append(f'  "{e.tail}" -- "{e.head}" [color={color[e.curve]}, label="{e.id}"];')
    lines.append("}")
    return "\n".join(lines)
