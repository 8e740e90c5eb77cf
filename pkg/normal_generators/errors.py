import logging

logger = logging.getLogger("__main__")


class NormalGeneratorError(Exception):
    pass


class InvalidSystemError(NormalGeneratorError):
    """
    Raised when a curve system description breaks one of the structural invariants.
    """

    def __init__(self, reason: str, element_id: str | None = None):
        """
        :param reason: Short name of the violated invariant, e.g. "transversality violated".
        :param element_id: Id of the vertex, edge, curve or region at fault.
        """
        self.reason = reason
        self.element_id = element_id
        if element_id is None:
            super().__init__(reason)
        else:
            super().__init__(f"{reason} (at {element_id})")


class CurveNotFoundError(NormalGeneratorError):
    """Raised when a curve id is not part of the system."""


class RegionNotFoundError(NormalGeneratorError):
    """Raised when a region id is not part of the system."""


class SurgeryError(NormalGeneratorError):
    """Raised when a cut, handle or curve insertion cannot be performed."""


class ClassificationError(NormalGeneratorError):
    pass


class CatalogMatchError(ClassificationError):
    """Raised when a classified triple is not a stabilization of any catalog entry."""


class WitnessSearchError(NormalGeneratorError):
    """Raised when a bounded witness search finds nothing where one must exist."""


class CriterionPreconditionError(NormalGeneratorError):
    """Raised when a checker is called on curves that do not meet its hypotheses."""


class PolygonError(NormalGeneratorError):
    pass


class SymplecticError(NormalGeneratorError):
    pass


class ThurstonError(NormalGeneratorError):
    pass


class DataDecodingError(NormalGeneratorError):
    pass
