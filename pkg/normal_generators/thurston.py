"""
Numerics of the Thurston construction for a pair of multicurves A and B.

With N the intersection matrix and mu the Perron-Frobenius eigenvalue of N N^T, the
multitwists T_A and T_B act through
    T_A -> [[1, -sqrt(mu)], [0, 1]],    T_B -> [[1, 0], [sqrt(mu), 1]],
and a word in them is pseudo-Anosov exactly when |trace| > 2 for its image, the
stretch factor being the larger eigenvalue.
"""
import logging
import math
import re
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from normal_generators.constants import Constants
from normal_generators.errors import ThurstonError

logger = logging.getLogger("__main__")

GOLDEN_SQUARE = (3 + math.sqrt(5)) / 2


def penner_bound(g: int) -> float:
    """
    Upper bound 11^(1/g) on the least stretch factor arising from the Thurston construction.
    """
    if g < 1:
        raise ThurstonError(f"Genus must be at least 1, got {g}.")
    return 11 ** (1 / g)


def cho_ham_value() -> float:
    """
    Largest real root of x^4 - x^3 - x^2 - x + 1, about 1.72208.
    """
    roots = np.roots([1, -1, -1, -1, 1])
    return float(max(r.real for r in roots if abs(r.imag) < 1e-12))


def _as_intersection_matrix(N) -> np.ndarray:
    matrix = np.asarray(N)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2 or matrix.size == 0:
        raise ThurstonError("Intersection matrix must be a non-empty 2-dimensional array.")
    if not np.all(np.equal(np.mod(matrix, 1), 0)) or np.any(matrix < 0):
        raise ThurstonError("Intersection matrix entries must be non-negative integers.")
    return matrix.astype(np.int64)


def intersection_graph(N) -> nx.Graph:
    """
    Bipartite graph with a vertex per curve and an edge for every pair that crosses.
    """
    matrix = _as_intersection_matrix(N)
    graph = nx.Graph()
    graph.add_nodes_from((("a", i) for i in range(matrix.shape[0])), bipartite=0)
    graph.add_nodes_from((("b", j) for j in range(matrix.shape[1])), bipartite=1)
    for i, j in zip(*np.nonzero(matrix)):
        graph.add_edge(("a", int(i)), ("b", int(j)), weight=int(matrix[i, j]))
    return graph


def pf_eigenvalue(M, tol: float = Constants.PF_TOLERANCE,
                  max_iterations: int = Constants.PF_MAX_ITERATIONS) -> tuple[float, np.ndarray]:
    """
    Perron-Frobenius eigenvalue and a positive unit eigenvector of an irreducible
    non-negative matrix, by power iteration on M + I.
    :param tol: residual bound, relative to max(1, mu).
    :return: (mu, eigenvector).
    """
    matrix = np.asarray(M, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.size == 0:
        raise ThurstonError("Perron-Frobenius eigenvalue needs a non-empty square matrix.")
    if np.any(matrix < 0):
        raise ThurstonError("Perron-Frobenius eigenvalue needs a non-negative matrix.")
    support = nx.Graph()
    support.add_nodes_from(range(matrix.shape[0]))
    support.add_edges_from((int(i), int(j)) for i, j in zip(*np.nonzero(matrix + matrix.T)) if i != j)
    if not nx.is_connected(support):
        raise ThurstonError("Matrix is reducible: its support graph is disconnected.")

    shifted = matrix + np.eye(matrix.shape[0])
    vector = np.ones(matrix.shape[0]) / math.sqrt(matrix.shape[0])
    for iteration in range(max_iterations):
        image = matrix @ vector
        mu = float(vector @ image)
        residual = float(np.linalg.norm(image - mu * vector))
        if residual <= tol * max(1.0, abs(mu)):
            logger.debug(f"Power iteration converged to {mu} after {iteration} steps.")
            return mu, vector
        following = shifted @ vector
        vector = following / np.linalg.norm(following)
    raise ThurstonError(f"Power iteration did not converge within {max_iterations} steps.")


@dataclass
class ThurstonSystem:
    """
    A pair of multicurves given by their intersection matrix. Filling cannot be read off
    N, so it is recorded as asserted by the caller; connectivity of the intersection
    graph is checked.
    """
    N: np.ndarray
    mu: float
    eigenvector: np.ndarray
    filling: bool = True
    tolerance: float = Constants.PF_TOLERANCE

    @classmethod
    def from_matrix(cls, N, filling: bool = True, tol: float = Constants.PF_TOLERANCE) -> "ThurstonSystem":
        matrix = _as_intersection_matrix(N)
        if not nx.is_connected(intersection_graph(matrix)):
            raise ThurstonError("Intersection graph is disconnected, the multicurves cannot fill.")
        mu, vector = pf_eigenvalue(matrix @ matrix.T, tol)
        logger.info(f"Thurston system with {matrix.shape[0]} A-curves and {matrix.shape[1]} B-curves, mu = {mu}.")
        return cls(matrix, mu, vector, filling, tol)


_LETTER = re.compile(r"([AaBb])(?:\^(-?\d+))?")

Word = tuple[tuple[str, int], ...]


def parse_word(text: str) -> Word:
    """
    Reads a word over A, a, B, b (lowercase is the inverse), each letter optionally
    followed by ^n. Consecutive powers of one letter are merged.
    """
    compact = "".join(text.split())
    letters: list[list] = []
    position = 0
    for match in _LETTER.finditer(compact):
        if match.start() != position:
            raise ThurstonError(f"Unexpected character in word '{text}' at {position}.")
        position = match.end()
        letter, power = match[1], int(match[2]) if match[2] is not None else 1
        exponent = power if letter.isupper() else -power
        if letters and letters[-1][0] == letter.upper():
            letters[-1][1] += exponent
        else:
            letters.append([letter.upper(), exponent])
        if letters[-1][1] == 0:
            letters.pop()
    if position != len(compact):
        raise ThurstonError(f"Unexpected character in word '{text}' at {position}.")
    return tuple((letter, exponent) for letter, exponent in letters)


def word_to_text(word: Word) -> str:
    return "".join(letter if e == 1 else f"{letter}^{e}" for letter, e in word)


def invert_word(word: Word) -> Word:
    return tuple((letter, -e) for letter, e in reversed(word))


def generator_power(mu: float, letter: str, exponent: int) -> np.ndarray:
    root = math.sqrt(mu)
    if letter == "A":
        return np.array([[1.0, -exponent * root], [0.0, 1.0]])
    return np.array([[1.0, 0.0], [exponent * root, 1.0]])


def eval_word(system: ThurstonSystem, word: Word | str) -> tuple[np.ndarray, float]:
    """
    :return: the 2x2 image of the word and the absolute value of its trace.
    """
    if isinstance(word, str):
        word = parse_word(word)
    matrix = np.eye(2)
    for letter, exponent in word:
        matrix = matrix @ generator_power(system.mu, letter, exponent)
    return matrix, abs(float(np.trace(matrix)))


@dataclass
class StretchReport:
    kind: str
    trace: float
    stretch: float | None = None
    matrix: list = field(default_factory=list)


def stretch_from_trace(trace: float) -> float:
    trace = abs(trace)
    return (trace + math.sqrt(trace * trace - 4)) / 2


def stretch_factor(system: ThurstonSystem, word: Word | str) -> StretchReport:
    if isinstance(word, str):
        word = parse_word(word)
    if not word:
        raise ThurstonError("Stretch factor of the empty word is undefined.")
    matrix, trace = eval_word(system, word)
    if abs(trace - 2) <= Constants.TRACE_TOLERANCE:
        return StretchReport("reducible", trace, None, matrix.tolist())
    if trace < 2:
        return StretchReport("periodic", trace, None, matrix.tolist())
    return StretchReport("pseudo-Anosov", trace, stretch_from_trace(trace), matrix.tolist())


def blow_up(N, blowup_index: int, k: int) -> np.ndarray:
    """
    Replaces one A-curve by k parallel copies.
    """
    matrix = _as_intersection_matrix(N)
    if not 0 <= blowup_index < matrix.shape[0]:
        raise ThurstonError(f"No A-curve with index {blowup_index}.")
    if k < 1:
        raise ThurstonError(f"Blow-up factor must be positive, got {k}.")
    copies = np.repeat(matrix[blowup_index:blowup_index + 1], k, axis=0)
    return np.vstack([matrix[:blowup_index], copies, matrix[blowup_index + 1:]])


@dataclass
class LemmaKBound:
    k: int
    bound: int
    diameter: int
    mu_lower: float


def lemma_k_bound(N, blowup_index: int, k: int) -> LemmaKBound:
    """
    Lower bound on the eigenvalue mu_k after blowing up one A-curve k times: with D half
    the largest distance between two A-vertices, the least row sum of (N_k N_k^T)^(D+1)
    is at most mu_k^(D+1), and it is at least k.
    """
    blown = blow_up(N, blowup_index, k)
    graph = intersection_graph(blown)
    if not nx.is_connected(graph):
        raise ThurstonError("Intersection graph is disconnected.")
    a_vertices = [v for v in graph if v[0] == "a"]
    farthest = 0
    for source in a_vertices:
        lengths = nx.single_source_shortest_path_length(graph, source)
        farthest = max(farthest, max(lengths[v] for v in a_vertices))
    diameter = farthest // 2

    gram = (blown @ blown.T).astype(object)
    sums = np.ones(gram.shape[0], dtype=object)
    for _ in range(diameter + 1):
        sums = gram.dot(sums)
    bound = int(min(sums))
    return LemmaKBound(k, bound, diameter, float(bound) ** (1 / (diameter + 1)))


@dataclass
class GrowthRow:
    k: int
    bound: int
    mu_lower: float
    mu: float
    stretch_lower: float
    stretch: float


def exponent_growth_check(N, blowup_index: int, k_list, tol: float = Constants.PF_TOLERANCE) -> list[GrowthRow]:
    """
    Per k: the path-count bound, the mu lower bound it gives, the eigenvalue mu_k and the
    stretch factor of T_A^-1 T_B at mu_k, whose trace is 2 + mu_k.
    """
    rows = []
    for k in k_list:
        estimate = lemma_k_bound(N, blowup_index, k)
        blown = blow_up(N, blowup_index, k)
        mu, _ = pf_eigenvalue(blown @ blown.T, tol)
        rows.append(GrowthRow(k, estimate.bound, estimate.mu_lower, mu,
                              stretch_from_trace(2 + estimate.mu_lower), stretch_from_trace(2 + mu)))
        logger.debug(f"k={k}: bound {estimate.bound}, mu >= {estimate.mu_lower:.6f}, mu = {mu:.6f}.")
    return rows
