"""
The symplectic representation of twist words.

Homology vectors are written in the basis (x_1, y_1, ..., x_g, y_g) with
<x_i, y_i> = 1. A twist about a curve of class v acts by the transvection
x -> x + <x, v> v, and a word acts by the product of its letters taken left to right.
"""
import logging
import re
from dataclasses import dataclass

import numpy as np

from normal_generators.constants import Constants
from normal_generators.errors import SymplecticError
from normal_generators.helpers import gcd_all

logger = logging.getLogger("__main__")

Vector = tuple[int, ...]

NAMED_MATRICES = ("handle-rotation-M", "handle-swap-N", "minus-block-M_k")


def symplectic_form(g: int) -> np.ndarray:
    if g < 1:
        raise SymplecticError(f"Genus must be at least 1, got {g}.")
    return np.kron(np.eye(g, dtype=np.int64), np.array([[0, 1], [-1, 0]], dtype=np.int64))


def _as_vector(v) -> np.ndarray:
    vector = np.asarray(v, dtype=np.int64).reshape(-1)
    if vector.size == 0 or vector.size % 2:
        raise SymplecticError(f"Homology vector {tuple(vector)} must have even, positive length.")
    if gcd_all(vector) != 1:
        raise SymplecticError(f"Vector {tuple(int(x) for x in vector)} is zero or not primitive.")
    return vector


def transvection_power(v, exponent: int) -> np.ndarray:
    """
    The matrix of T_v^exponent, that is I + exponent * v <., v>.
    """
    vector = _as_vector(v)
    form = symplectic_form(vector.size // 2)
    return np.eye(vector.size, dtype=np.int64) + exponent * np.outer(vector, form @ vector)


def transvection(v) -> np.ndarray:
    return transvection_power(v, 1)


def is_symplectic(matrix: np.ndarray) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
        return False
    form = symplectic_form(matrix.shape[0] // 2)
    return np.array_equal(matrix.T @ form @ matrix, form)


def chain_curve_vectors(g: int) -> dict[str, Vector]:
    """
    Homology classes of the standard curves: a_i = x_i, b_i = y_i and the chain links
    c_i = y_i - y_{i+1} joining consecutive handles.
    """
    size = 2 * g
    names = {}
    for i in range(g):
        x, y = [0] * size, [0] * size
        x[2 * i], y[2 * i + 1] = 1, 1
        names[f"a{i + 1}"], names[f"b{i + 1}"] = tuple(x), tuple(y)
        if i + 1 < g:
            link = [0] * size
            link[2 * i + 1], link[2 * i + 3] = 1, -1
            names[f"c{i + 1}"] = tuple(link)
    return names


_TOKEN = re.compile(r"^(?P<body>[^\^]+)(\^(?P<exponent>-?\d+))?$")


@dataclass(frozen=True)
class TwistWord:
    letters: tuple[tuple[Vector, int], ...] = ()

    @classmethod
    def from_text(cls, text: str, names: dict[str, Vector] | None = None) -> "TwistWord":
        """
        Parses whitespace-separated tokens "v1,...,v2g^e" (the exponent defaults to 1).
        A token may also be a curve name from `names`, e.g. "a1^-1".
        """
        letters = []
        for token in text.split():
            match = _TOKEN.match(token)
            if match is None:
                raise SymplecticError(f"Cannot parse twist token '{token}'.")
            body = match["body"]
            exponent = int(match["exponent"]) if match["exponent"] is not None else 1
            if names is not None and body in names:
                vector = names[body]
            else:
                try:
                    vector = tuple(int(x) for x in body.split(","))
                except ValueError as error:
                    raise SymplecticError(f"Unknown curve or malformed vector '{body}'.") from error
            letters.append((tuple(int(x) for x in _as_vector(vector)), exponent))
        if len({len(v) for v, _ in letters}) > 1:
            raise SymplecticError("Twist word mixes vectors of different dimensions.")
        return cls(tuple(letters))

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((v, -e) for v, e in reversed(self.letters)))

    def exponent_sum(self) -> int:
        return sum(e for _, e in self.letters)

    def __str__(self) -> str:
        return " ".join(f"{','.join(map(str, v))}^{e}" for v, e in self.letters)


def word_action(word: TwistWord, g: int) -> np.ndarray:
    """
    Ordered product of the transvection powers of a word.
    """
    result = np.eye(2 * g, dtype=np.int64)
    for vector, exponent in word.letters:
        if len(vector) != 2 * g:
            raise SymplecticError(f"Vector of length {len(vector)} used in genus {g}.")
        result = result @ transvection_power(vector, exponent)
    return result


def congruence_level(matrix: np.ndarray) -> int:
    """
    gcd of the entries of M - I; 0 for the identity.
    """
    matrix = np.asarray(matrix, dtype=np.int64)
    return gcd_all((matrix - np.eye(matrix.shape[0], dtype=np.int64)).flat)


def named_matrix(name: str, g: int, k: int | None = None) -> np.ndarray:
    """
    The block matrices of a handle rotation (diag(A, ..., A)), a swap of the first two
    handles (B + I), and -I on the first k handles (M_k).
    """
    if g < 1:
        raise SymplecticError(f"Genus must be at least 1, got {g}.")
    if name == "handle-rotation-M":
        return symplectic_form(g)
    if name == "handle-swap-N":
        if g < 2:
            raise SymplecticError("The handle swap needs genus at least 2.")
        swap = np.zeros((4, 4), dtype=np.int64)
        swap[:2, 2:] = np.eye(2, dtype=np.int64)
        swap[2:, :2] = np.eye(2, dtype=np.int64)
        result = np.eye(2 * g, dtype=np.int64)
        result[:4, :4] = swap
        return result
    if name == "minus-block-M_k":
        if k is None or not 0 <= k <= g:
            raise SymplecticError(f"M_k needs 0 <= k <= g, got k={k}, g={g}.")
        return np.diag([-1] * (2 * k) + [1] * (2 * g - 2 * k)).astype(np.int64)
    raise SymplecticError(f"Unknown matrix '{name}', expected one of {NAMED_MATRICES}.")


def matrix_order(matrix: np.ndarray, cap: int = Constants.ORDER_SEARCH_CAP) -> int:
    matrix = np.asarray(matrix, dtype=np.int64)
    identity = np.eye(matrix.shape[0], dtype=np.int64)
    power = matrix.copy()
    for order in range(1, cap + 1):
        if np.array_equal(power, identity):
            return order
        power = power @ matrix
    raise SymplecticError(f"Matrix has no finite order up to {cap}.")


def abelianization_image(exponent_sum: int, g: int) -> int:
    """
    Image in the abelianization of the mapping class group: Z/12 in genus 1, Z/10 in
    genus 2 and trivial from genus 3 on. Every nonseparating twist maps to 1.
    """
    if g < 1:
        raise SymplecticError(f"Genus must be at least 1, got {g}.")
    if g == 1:
        return exponent_sum % 12
    if g == 2:
        return exponent_sum % 10
    return 0


def analyse_word(word: TwistWord, g: int) -> dict:
    matrix = word_action(word, g)
    report = {
        "genus": g,
        "matrix": matrix.tolist(),
        "symplectic": is_symplectic(matrix),
        "level": congruence_level(matrix),
        "exponent_sum": word.exponent_sum(),
        "abelianization": abelianization_image(word.exponent_sum(), g),
        "trace": int(np.trace(matrix)),
    }
    logger.debug(f"Twist word of length {len(word.letters)} in genus {g}: level {report['level']}.")
    return report
