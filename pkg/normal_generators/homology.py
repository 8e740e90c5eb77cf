"""
Independent first-homology computation over the two-element field.

Every region of genus h with b boundary walks is rebuilt as one disk: b - 1 connector
edges join the base vertices of its walks and 2h loops stand for its handles. Each
connector and loop runs twice around the disk, so only the walk edges survive in the
mod 2 boundary of the region.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from normal_generators.errors import CurveNotFoundError, InvalidSystemError
from normal_generators.surface import CurveSystem

logger = logging.getLogger("__main__")


def row_reduce_gf2(matrix: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """
    Reduced row echelon form over GF(2).
    :return: the nonzero rows and their pivot columns.
    """
    reduced = (np.asarray(matrix) % 2).astype(np.uint8)
    pivots = []
    row = 0
    rows, columns = reduced.shape
    for column in range(columns):
        if row == rows:
            break
        hits = np.nonzero(reduced[row:, column])[0]
        if hits.size == 0:
            continue
        pivot = row + hits[0]
        reduced[[row, pivot]] = reduced[[pivot, row]]
        others = np.nonzero(reduced[:, column])[0]
        others = others[others != row]
        reduced[others] ^= reduced[row]
        pivots.append(column)
        row += 1
    return reduced[:row], pivots


def rank_gf2(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    return len(row_reduce_gf2(matrix)[1])


def kernel_gf2(matrix: np.ndarray) -> list[np.ndarray]:
    columns = matrix.shape[1]
    if matrix.shape[0] == 0:
        return [np.eye(columns, dtype=np.uint8)[i] for i in range(columns)]
    reduced, pivots = row_reduce_gf2(matrix)
    basis = []
    for free in (c for c in range(columns) if c not in pivots):
        vector = np.zeros(columns, dtype=np.uint8)
        vector[free] = 1
        for i, pivot in enumerate(pivots):
            vector[pivot] = reduced[i, free]
        basis.append(vector)
    return basis


@dataclass
class HomologyOracle:
    edges: list[str]
    boundaries: list[np.ndarray]
    basis: list[np.ndarray]
    classes: dict[str, tuple[int, ...]] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, cycle: np.ndarray) -> tuple[int, ...]:
        """
        Coordinates of a cycle in the homology basis, boundaries being zero.
        """
        columns = self.boundaries + self.basis
        if not columns:
            return ()
        system = np.column_stack(columns + [cycle]).astype(np.uint8)
        reduced, pivots = row_reduce_gf2(system)
        if len(columns) in pivots:
            raise InvalidSystemError("vector is not a cycle of the chain complex")
        solution = np.zeros(len(columns), dtype=np.uint8)
        for i, pivot in enumerate(pivots):
            solution[pivot] = reduced[i, -1]
        return tuple(int(x) for x in solution[len(self.boundaries):])

    def class_of(self, curves: Iterable[str]) -> tuple[int, ...]:
        total = np.zeros(self.rank, dtype=np.uint8)
        for curve in curves:
            if curve not in self.classes:
                raise CurveNotFoundError(f"Curve {curve} has no homology class in this oracle.")
            total ^= np.array(self.classes[curve], dtype=np.uint8)
        return tuple(int(x) for x in total)

    def is_zero(self, curves: Iterable[str]) -> bool:
        return not any(self.class_of(curves))


def homology_oracle_gf2(system: CurveSystem) -> HomologyOracle:
    """
    Builds the chain complex of the disk-face model of the system and computes H_1 over
    GF(2) together with the class of every curve.
    """
    vertices = [v for v, _ in system.rotations]
    vertex_index = {v: i for i, v in enumerate(vertices)}
    edges = [e.id for e in system.edges]
    endpoints = [(vertex_index[e.tail], vertex_index[e.head]) for e in system.edges]
    index = {e: i for i, e in enumerate(edges)}
    region_rows = []
    for region in system.regions:
        row = [0] * len(system.edges)
        for walk in region.walks:
            for e, _ in walk:
                row[index[e]] ^= 1
        base = vertex_index[system.vertex_of[region.walks[0][0]]]
        for walk in region.walks[1:]:
            edges.append(f"{region.id}~connector{len(edges)}")
            endpoints.append((base, vertex_index[system.vertex_of[walk[0]]]))
        for handle in range(2 * region.genus):
            edges.append(f"{region.id}~handle{handle}")
            endpoints.append((base, base))
        region_rows.append(row)

    boundary_1 = np.zeros((len(vertices), len(edges)), dtype=np.uint8)
    for j, (tail, head) in enumerate(endpoints):
        boundary_1[tail, j] ^= 1
        boundary_1[head, j] ^= 1
    boundary_2 = np.zeros((len(edges), len(region_rows)), dtype=np.uint8)
    for k, row in enumerate(region_rows):
        boundary_2[:len(row), k] = row

    image = []
    if region_rows:
        reduced, _ = row_reduce_gf2(boundary_2.T)
        image = [r.copy() for r in reduced]
    basis = []
    span = list(image)
    for vector in kernel_gf2(boundary_1):
        if rank_gf2(np.array(span + [vector])) > len(span):
            span.append(vector)
            basis.append(vector)

    oracle = HomologyOracle(edges=edges, boundaries=image, basis=basis)
    position = {e: i for i, e in enumerate(edges)}
    for curve, edge_ids in system.curves:
        cycle = np.zeros(len(edges), dtype=np.uint8)
        for e in edge_ids:
            cycle[position[e]] ^= 1
        oracle.classes[curve] = oracle.coordinates(cycle)
    logger.debug(f"Homology oracle: rank {oracle.rank} over {len(edges)} one-cells.")
    return oracle
