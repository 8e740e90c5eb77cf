"""
Periodic mapping classes as rotations of a regular polygon with paired sides.

Side i runs from corner i to corner i + 1 (corners counterclockwise). Paired sides are
glued reversing the boundary orientation: the point at parameter t on side i meets
the point at 1 - t on the partner side, so the quotient is always orientable.
A midpoint curve is the segment joining the midpoints of two paired sides.
"""
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from normal_generators.constants import Constants
from normal_generators.criteria import Certificate, Verdict, for_genus, verify_certificate
from normal_generators.errors import PolygonError
from normal_generators.helpers import UnionFind
from normal_generators.surface import (
    CurveSystem, Edge, assemble, is_separating, is_trivial, rotation_sigma, trace_faces,
)

logger = logging.getLogger("__main__")

TAU = 2 * math.pi


@dataclass(frozen=True)
class PolygonSurface:
    n: int
    pairing: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise PolygonError(f"A polygon model needs an even number of sides, got {self.n}.")
        if len(self.pairing) != self.n:
            raise PolygonError(f"Pairing lists {len(self.pairing)} sides for an {self.n}-gon.")
        for side, partner in enumerate(self.pairing):
            if not 0 <= partner < self.n or partner == side or self.pairing[partner] != side:
                raise PolygonError(f"Pairing is not a fixed-point-free involution at side {side}.")

    @classmethod
    def from_layout(cls, n: int, layout) -> "PolygonSurface":
        """
        :param layout: "opposite", or a list of side pairs [i, j]. A pair may carry a third
            entry "reversed" (the only gluing allowed) or "same", which is rejected.
        """
        if layout == "opposite":
            if n < 2 or n % 2:
                raise PolygonError(f"A polygon model needs an even number of sides, got {n}.")
            return cls(n, tuple((i + n // 2) % n for i in range(n)))
        pairing: list[int | None] = [None] * n
        for item in layout:
            if len(item) == 3 and item[2] == "same":
                raise PolygonError(f"Gluing sides {item[0]} and {item[1]} preserving direction is non-orientable.")
            if len(item) not in (2, 3) or (len(item) == 3 and item[2] != "reversed"):
                raise PolygonError(f"Cannot read side pair {item}.")
            i, j = int(item[0]), int(item[1])
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise PolygonError(f"Invalid side pair ({i}, {j}) for an {n}-gon.")
            if pairing[i] is not None or pairing[j] is not None:
                raise PolygonError(f"Side pair ({i}, {j}) reuses a side.")
            pairing[i], pairing[j] = j, i
        if None in pairing:
            raise PolygonError(f"Side {pairing.index(None)} is not paired.")
        return cls(n, tuple(pairing))

    def chord(self, side: int) -> int:
        """
        The midpoint curve through a side, named by the smaller side of its pair.
        """
        side %= self.n
        return min(side, self.pairing[side])

    def chords(self) -> list[int]:
        return sorted({self.chord(side) for side in range(self.n)})


@dataclass(frozen=True)
class PolygonRotation:
    k: int

    @classmethod
    def for_polygon(cls, polygon: PolygonSurface, k: int) -> "PolygonRotation":
        """
        Rotation by 2 pi k / n, which descends to the quotient only when it commutes with
        the pairing.
        """
        n = polygon.n
        for side in range(n):
            if polygon.pairing[(side + k) % n] != (polygon.pairing[side] + k) % n:
                raise PolygonError(f"Rotation by {k} does not respect the pairing at side {side}.")
        return cls(k % n)


def quotient_genus(polygon: PolygonSurface) -> int:
    corners = UnionFind(range(polygon.n))
    for side, partner in enumerate(polygon.pairing):
        corners.union(side, (partner + 1) % polygon.n)
        corners.union((side + 1) % polygon.n, partner)
    chi = len(corners.groups()) - polygon.n // 2 + 1
    if chi % 2:
        raise PolygonError(f"Quotient has odd Euler characteristic {chi}.")
    return (2 - chi) // 2


def rotation_order(polygon: PolygonSurface, rotation: PolygonRotation) -> int:
    return polygon.n // math.gcd(polygon.n, rotation.k)


def rotate_side(polygon: PolygonSurface, rotation: PolygonRotation, side: int, times: int = 1) -> int:
    return (side + times * rotation.k) % polygon.n


def segment_intersection(polygon: PolygonSurface, side1: int, side2: int) -> int:
    """
    1 when the two midpoint segments cross, which happens exactly when their endpoint
    sides interleave around the boundary.
    """
    first, second = polygon.chord(side1), polygon.chord(side2)
    if first == second:
        raise PolygonError(f"Sides {side1} and {side2} give the same segment.")
    low, high = first, polygon.pairing[first]
    inside = [low < side < high for side in (second, polygon.pairing[second])]
    return int(inside[0] != inside[1])


def _corners(n: int) -> np.ndarray:
    angles = TAU * np.arange(n) / n
    return np.column_stack((np.cos(angles), np.sin(angles)))


def _crossing(first: tuple[np.ndarray, np.ndarray], second: tuple[np.ndarray, np.ndarray]) -> tuple[float, float] | None:
    """
    Parameters along both segments of their crossing point, if they cross.
    """
    start, along = first[0], first[1] - first[0]
    other, other_along = second[0], second[1] - second[0]
    denominator = along[0] * other_along[1] - along[1] * other_along[0]
    if abs(denominator) < 1e-15:
        return None
    offset = other - start
    s = (offset[0] * other_along[1] - offset[1] * other_along[0]) / denominator
    t = (offset[0] * along[1] - offset[1] * along[0]) / denominator
    if 0 < s < 1 and 0 < t < 1:
        return float(s), float(t)
    return None


def _angle(vector: np.ndarray) -> float:
    return math.atan2(vector[1], vector[0]) % TAU


def to_curve_system(polygon: PolygonSurface, sides) -> tuple[CurveSystem, dict[int, str]]:
    """
    The quotient surface with the midpoint curves through the given sides.
    Segment endpoints sit slightly off the midpoints, by a different amount per segment,
    so that no three segments pass through one point.
    :return: the system and, per chord, its curve id.
    """
    chords = sorted({polygon.chord(side) for side in sides})
    if not chords:
        raise PolygonError("No midpoint curves were selected.")
    n, pairing = polygon.n, polygon.pairing
    corners = _corners(n)

    def side_point(side: int, t: float) -> np.ndarray:
        return corners[side] + t * (corners[(side + 1) % n] - corners[side])

    ends, endpoint = {}, {}
    for index, chord in enumerate(chords):
        delta = Constants.POLYGON_PERTURBATION * math.sqrt(index + 2)
        ends[chord] = (side_point(chord, 0.5 + delta), side_point(pairing[chord], 0.5 - delta))
        endpoint[chord], endpoint[pairing[chord]] = f"p{chord}s", f"p{chord}e"
    direction = {chord: ends[chord][1] - ends[chord][0] for chord in chords}

    along: dict[int, list[tuple[float, str]]] = {chord: [] for chord in chords}
    for first, second in itertools.combinations(chords, 2):
        hit = _crossing(ends[first], ends[second])
        if hit is not None:
            vertex = f"x{first}_{second}"
            along[first].append((hit[0], vertex))
            along[second].append((hit[1], vertex))
    for chord in chords:
        along[chord].sort()
        params = [p for p, _ in along[chord]]
        if any(abs(p - q) < 1e-12 for p, q in zip(params, params[1:])):
            raise PolygonError(f"Segments meet segment {chord} in a common point.")

    # ribbon graph of the curves
    rotation, edges, curves = {}, {}, {}
    darts_at: dict[str, list] = {}
    first_piece = {}
    for chord in chords:
        curve, stops = f"c{chord}", [v for _, v in along[chord]]
        if not stops:
            marker, loop = f"m{chord}", f"c{chord}_1"
            edges[loop] = Edge(loop, curve, marker, marker)
            rotation[marker] = ((loop, 0), (loop, 1))
            curves[curve] = (loop,)
            first_piece[loop] = f"q{chord}_0"
            continue
        ids = [f"c{chord}_{m}" for m in range(1, len(stops) + 1)]
        for m, vertex in enumerate(stops):
            following = stops[(m + 1) % len(stops)]
            edges[ids[m]] = Edge(ids[m], curve, vertex, following)
            darts_at.setdefault(vertex, []).append((_angle(direction[chord]), (ids[m], 0)))
            darts_at.setdefault(following, []).append((_angle(-direction[chord]), (ids[m], 1)))
            first_piece[ids[m]] = f"q{chord}_{m + 1}"
        curves[curve] = tuple(ids)
    for vertex, found in darts_at.items():
        rotation[vertex] = tuple(dart for _, dart in sorted(found))

    # planar subdivision of the polygon by the segments
    planar: dict[str, list] = {}

    def add(vertex: str, vector: np.ndarray, dart) -> None:
        planar.setdefault(vertex, []).append((_angle(vector), dart))

    boundary = {}
    for side in range(n):
        forward = corners[(side + 1) % n] - corners[side]
        if side in endpoint:
            pieces, stops = [f"b{side}_0", f"b{side}_1"], [f"k{side}", endpoint[side], f"k{(side + 1) % n}"]
        else:
            pieces, stops = [f"b{side}"], [f"k{side}", f"k{(side + 1) % n}"]
        for piece, tail, head in zip(pieces, stops, stops[1:]):
            add(tail, forward, (piece, 0))
            add(head, -forward, (piece, 1))
        boundary[side] = pieces
    for chord in chords:
        stops = [f"p{chord}s"] + [v for _, v in along[chord]] + [f"p{chord}e"]
        for m, (tail, head) in enumerate(zip(stops, stops[1:])):
            add(tail, direction[chord], (f"q{chord}_{m}", 0))
            add(head, -direction[chord], (f"q{chord}_{m}", 1))
    faces = trace_faces(rotation_sigma({v: tuple(d for _, d in sorted(items)) for v, items in planar.items()}))
    face_of = {dart: index for index, face in enumerate(faces) for dart in face}
    outer = face_of[(boundary[0][0], 0)]

    # pieces glued across paired sides; the inner face of a boundary piece is right of its reverse dart
    regions = UnionFind(i for i in range(len(faces)) if i != outer)
    glued_arcs = []
    for side, partner in enumerate(pairing):
        if side > partner:
            continue
        here, there = boundary[side], boundary[partner]
        matched = [(here[0], there[-1]), (here[-1], there[0])] if len(here) == 2 else [(here[0], there[0])]
        for piece, other in matched:
            regions.union(face_of[(piece, 1)], face_of[(other, 1)])
            glued_arcs.append(face_of[(piece, 1)])
    corner_classes = UnionFind(range(n))
    for side, partner in enumerate(pairing):
        corner_classes.union(side, (partner + 1) % n)
        corner_classes.union((side + 1) % n, partner)

    chi: dict = {}
    for face in range(len(faces)):
        if face != outer:
            chi[regions.find(face)] = chi.get(regions.find(face), 0) + 1
    for face in glued_arcs:
        chi[regions.find(face)] -= 1
    for group in corner_classes.groups():
        chi[regions.find(face_of[(boundary[group[0]][0], 1)])] += 1

    roots = sorted(chi, key=lambda root: min(f for f in range(len(faces)) if f != outer and regions.find(f) == root))
    name = {root: f"R{i}" for i, root in enumerate(roots, start=1)}

    def region_of_face(face) -> str:
        edge_id, end = face[0]
        return name[regions.find(face_of[(first_piece[edge_id], end)])]

    walks: dict[str, int] = {}
    for face in trace_faces(rotation_sigma(rotation)):
        walks[region_of_face(face)] = walks.get(region_of_face(face), 0) + 1
    genus = {}
    for root, label in name.items():
        doubled = 2 - walks.get(label, 0) - chi[root]
        if doubled % 2 or doubled < 0:
            raise PolygonError(f"Region {label} has inconsistent Euler characteristic {chi[root]}.")
        genus[label] = doubled // 2
    system = assemble(rotation, edges, curves, region_of_face, genus)
    logger.debug(f"Polygon with {n} sides and segments {chords}: {len(system.regions)} regions.")
    return system, {chord: f"c{chord}" for chord in chords}


def midpoint_curve_properties(polygon: PolygonSurface, side: int) -> str:
    system, names = to_curve_system(polygon, [side])
    curve = names[polygon.chord(side)]
    if is_trivial(system, curve):
        return "trivial"
    return "separating" if is_separating(system, curve) else "nonseparating"


def borders_all(system: CurveSystem, curves) -> bool:
    """
    Whether one complementary region has every given curve on its boundary.
    """
    wanted = set(curves)
    system.require_curve(*wanted)
    for region in system.regions:
        if wanted <= {system.curve_of(d) for walk in region.walks for d in walk}:
            return True
    return False


def triple_region_test(polygon: PolygonSurface, rotation: PolygonRotation, side: int) -> bool:
    """
    For pairwise disjoint c, r(c), r^2(c): true when some region borders all three, in
    which case the three classes are not all equal.
    """
    sides = [rotate_side(polygon, rotation, side, times) for times in range(3)]
    if len({polygon.chord(s) for s in sides}) != 3:
        raise PolygonError(f"Segment {polygon.chord(side)} and its first two images are not distinct.")
    for first, second in itertools.combinations(sides, 2):
        if segment_intersection(polygon, first, second):
            raise PolygonError(f"Segments through sides {first} and {second} cross.")
    system, names = to_curve_system(polygon, sides)
    return borders_all(system, names.values())


def periodic_case3_verdict(polygon: PolygonSurface,
                           rotation: PolygonRotation) -> tuple[Verdict, Certificate | None]:
    """
    Picks the first essential midpoint curve c and certifies the rotation from c and its
    images: separating c, one crossing with r(c), one crossing with r^2(c) (so the
    square normally generates), or disjoint images in different classes.
    """
    g = quotient_genus(polygon)
    if g == 0:
        return Verdict("trivial-group", "periodic", "the mapping class group of the sphere is trivial"), None
    order = rotation_order(polygon, rotation)
    if order <= 2:
        raise PolygonError(f"Rotation has order {order}; this procedure needs order at least 3.")
    side = next((chord for chord in polygon.chords()
                 if midpoint_curve_properties(polygon, chord) != "trivial"), None)
    if side is None:
        raise PolygonError("no essential midpoint curve")
    image, square_image = (rotate_side(polygon, rotation, side, times) for times in (1, 2))

    kind = midpoint_curve_properties(polygon, side)
    if kind == "separating" or segment_intersection(polygon, side, image):
        system, names = to_curve_system(polygon, [side, image])
        roles = {"c": names[polygon.chord(side)], "fc": names[polygon.chord(image)]}
        criterion = "wsccsep" if kind == "separating" else "wscca"
        certificate = Certificate(criterion, system, roles, genus=g, data={"power": 1})
    elif polygon.chord(square_image) != polygon.chord(side) and segment_intersection(polygon, side, square_image):
        system, names = to_curve_system(polygon, [side, square_image])
        roles = {"c": names[polygon.chord(side)], "fc": names[polygon.chord(square_image)]}
        certificate = Certificate("wscca", system, roles, genus=g, data={"power": 2})
    else:
        system, names = to_curve_system(polygon, [side, image, square_image])
        roles = {"c": names[polygon.chord(side)], "fc": names[polygon.chord(image)],
                 "ffc": names[polygon.chord(square_image)]}
        data = {"power": 1, "triple_region": int(borders_all(system, roles.values()))}
        certificate = Certificate("wsccb", system, roles, genus=g, data=data)
    verdict = for_genus(verify_certificate(certificate), g)
    logger.info(f"Rotation by {rotation.k} of the {polygon.n}-gon (genus {g}, order {order}): "
                f"{verdict.conclusion} by {certificate.criterion}.")
    return verdict, certificate
