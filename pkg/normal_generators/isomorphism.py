"""
Canonical forms of curve systems.

A system is encoded by numbering its darts breadth first from a root, following the
rotation (or its inverse, for the mirror image) before the edge involution. The
encoding keeps curve labels, forgets curve orientations and records every region as
its genus plus the smallest dart number of each boundary walk. The canonical form is
the least encoding over all admissible roots.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from normal_generators.helpers import UnionFind
from normal_generators.surface import CurveSystem, Dart, alpha

logger = logging.getLogger("__main__")


@dataclass(frozen=True)
class Policy:
    allow_reflection: bool = True


DEFAULT_POLICY = Policy()


def _root_choices(system: CurveSystem) -> list[list[Dart]]:
    """
    Per connected component of the ribbon graph, ordered by smallest curve label, the
    darts of that label.
    """
    parts = UnionFind(system.sigma)
    for dart, following in system.sigma.items():
        parts.union(dart, following)
        parts.union(dart, alpha(dart))
    choices = []
    for group in parts.groups():
        label = min(system.curve_of(d) for d in group)
        choices.append((label, sorted(d for d in group if system.curve_of(d) == label)))
    return [roots for _, roots in sorted(choices)]


def _numberings(system: CurveSystem, policy: Policy) -> Iterator[tuple[bool, dict[Dart, int]]]:
    choices = _root_choices(system)
    for mirror in ((False, True) if policy.allow_reflection else (False,)):
        turn = system.sigma_inverse if mirror else system.sigma
        for roots in itertools.product(*choices):
            numbering: dict[Dart, int] = {}
            for root in roots:
                numbering[root] = len(numbering)
                queue = deque([root])
                while queue:
                    dart = queue.popleft()
                    for neighbour in (turn[dart], alpha(dart)):
                        if neighbour not in numbering:
                            numbering[neighbour] = len(numbering)
                            queue.append(neighbour)
            yield mirror, numbering


def _graph_code(system: CurveSystem, mirror: bool, numbering: dict[Dart, int]) -> tuple:
    turn = system.sigma_inverse if mirror else system.sigma
    ordered = sorted(numbering, key=numbering.__getitem__)
    return tuple((numbering[turn[d]], numbering[alpha(d)], system.curve_of(d)) for d in ordered)


def _region_keys(system: CurveSystem, mirror: bool, numbering: dict[Dart, int]) -> dict[tuple, int]:
    """
    Region key (sorted smallest dart numbers of its walks) -> genus.
    """
    keys = {}
    for region in system.regions:
        # the mirror image of a boundary walk is its set of opposite darts
        walks = [[alpha(d) for d in walk] if mirror else walk for walk in region.walks]
        keys[tuple(sorted(min(numbering[d] for d in walk) for walk in walks))] = region.genus
    return keys


def _encode(system: CurveSystem, mirror: bool, numbering: dict[Dart, int]) -> tuple:
    regions = _region_keys(system, mirror, numbering)
    return _graph_code(system, mirror, numbering), tuple(sorted((g, k) for k, g in regions.items()))


def canonical_form(system: CurveSystem, policy: Policy = DEFAULT_POLICY) -> tuple:
    return min(_encode(system, mirror, numbering) for mirror, numbering in _numberings(system, policy))


def isomorphic(first: CurveSystem, second: CurveSystem, policy: Policy = DEFAULT_POLICY) -> bool:
    """
    True iff a curve-label preserving homeomorphism carries one system onto the other,
    orientation reversing ones included when the policy allows them.
    """
    if sorted(first.curve_ids) != sorted(second.curve_ids):
        return False
    if (len(first.edges), len(first.regions)) != (len(second.edges), len(second.regions)):
        return False
    return canonical_form(first, policy) == canonical_form(second, policy)


def genus_free_form(system: CurveSystem, policy: Policy = DEFAULT_POLICY) -> tuple:
    """
    Canonical form of the system with every region genus forgotten.
    """
    return min((_graph_code(system, mirror, numbering), tuple(sorted(_region_keys(system, mirror, numbering))))
               for mirror, numbering in _numberings(system, policy))


def is_stabilization_of(larger: CurveSystem, smaller: CurveSystem, policy: Policy = DEFAULT_POLICY) -> bool:
    """
    True iff some isomorphism of the genus-free structures sends every region of
    `smaller` to a region of `larger` with at least its genus.
    """
    if sorted(larger.curve_ids) != sorted(smaller.curve_ids) or len(larger.edges) != len(smaller.edges):
        return False
    # one fixed numbering of the smaller system; the larger one runs through all of its own
    mirror, numbering = next(_numberings(smaller, Policy(allow_reflection=False)))
    target_code = _graph_code(smaller, mirror, numbering)
    target_genus = _region_keys(smaller, mirror, numbering)
    target_regions = tuple(sorted(target_genus))
    for mirror, numbering in _numberings(larger, policy):
        if _graph_code(larger, mirror, numbering) != target_code:
            continue
        keys = _region_keys(larger, mirror, numbering)
        if tuple(sorted(keys)) != target_regions:
            continue
        if all(keys[k] >= target_genus[k] for k in target_regions):
            return True
    return False
