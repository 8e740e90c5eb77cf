from typing import TypedDict


class VertexRecord(TypedDict):
    """
    Has elements: id, darts
    Each dart is [edge id, end] with end 0 at the edge's tail and 1 at its head,
    listed counterclockwise.
    """
    id: str
    darts: list[list]


class EdgeRecord(TypedDict):
    id: str
    curve: str
    tail: str
    head: str


class CurveRecord(TypedDict):
    id: str
    edges: list[str]


class RegionRecord(TypedDict):
    """
    Has elements: id, genus, walks
    A walk is a list of [edge id, side] with side "R" or "L" relative to the edge's curve.
    """
    id: str
    genus: int
    walks: list[list[list]]


class SystemRecord(TypedDict):
    vertices: list[VertexRecord]
    edges: list[EdgeRecord]
    curves: list[CurveRecord]
    regions: list[RegionRecord]


class CertificateRecord(TypedDict):
    """
    Has elements: criterion, roles, witnesses, images, genus, data
    """
    criterion: str
    roles: dict[str, str]
    witnesses: dict[str, str]
    images: list[str]
    genus: int
    data: dict[str, int]


class CertificateFile(SystemRecord):
    certificate: CertificateRecord


class CatalogRecord(TypedDict):
    label: str
    type: str
    template: int
    strategy: str
    system: SystemRecord


class TemplateRecord(TypedDict):
    index: int
    type: str
    arc_matrix: list[list[int]]
    linked: bool
    system: SystemRecord
