import argparse
import json
import logging
from sys import stdout

import numpy as np

from normal_generators.constants import Constants
from normal_generators.errors import DataDecodingError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normal_generators",
        description="Normal generation certificates for mapping classes of closed surfaces.")
    parser.add_argument("--json", action="store_true", default=False,
                        help="Print machine-readable JSON instead of a report.")
    parser.add_argument("--policy", choices=("reflection", "no-reflection"), default="reflection",
                        help="Whether isomorphisms may reverse the orientation of the surface.")
    parser.add_argument("--tol", type=float, required=False, default=None,
                        help="Override the eigenvalue and trace tolerances.")
    parser.add_argument("--jobs", type=int, required=False, default=1,
                        help="Worker processes for catalog generation.")
    parser.add_argument("--verbose", "-v", action="store_true", required=False, default=False,
                        help="If logs should be verbose.")
    commands = parser.add_subparsers(dest="command", required=True)

    catalog = commands.add_parser("catalog", help="Enumerate the minimal triple configurations.")
    catalog.add_argument("--type", choices=Constants.PAIR_TYPES, default=None,
                         help="Only enumerate triples of this pair type.")
    catalog.add_argument("--templates", action="store_true", default=False,
                         help="List the templates of each type instead of the minimal triples.")
    catalog.add_argument("--output", required=False, default=None, help="Write the catalog as JSON.")
    catalog.add_argument("--rebuild", action="store_true", default=False,
                         help="Ignore the cached catalog.")

    check = commands.add_parser("check", help="Verify a certificate, or run the case analysis on a triple.")
    check.add_argument("file", help="Certificate or curve system JSON file.")
    check.add_argument("--triple", nargs=3, metavar=("C", "FC", "FFC"), default=None,
                       help="Run the case analysis on these curves of the system instead.")
    check.add_argument("--fffc", required=False, default=None,
                       help="Curve playing f^3(c), or JSON of intersection counts with it.")
    check.add_argument("--genus", type=int, required=False, default=None)
    check.add_argument("--catalog", action="store_true", default=False,
                       help="Try the strategy stored with the matching catalog entry first.")
    check.add_argument("--dot", action="store_true", default=False,
                       help="Print the crossing graph in DOT format.")

    polygon = commands.add_parser("polygon", help="Certify a rotation of a polygon with paired sides.")
    polygon.add_argument("--n", type=int, required=True)
    polygon.add_argument("--pairing", default="opposite",
                         help="'opposite', or JSON (or @file) list of side pairs.")
    polygon.add_argument("--k", type=int, required=True, help="Rotate by 2 pi k / n.")
    polygon.add_argument("--output", required=False, default=None, help="Write the certificate as JSON.")

    symplectic = commands.add_parser("symplectic", help="Act on homology by a word in Dehn twists.")
    symplectic.add_argument("--g", type=int, required=True)
    symplectic.add_argument("--word", default=None, help="Twist word, or @file.")
    symplectic.add_argument("--matrix", choices=("M", "N", "M_k"), default=None,
                            help="Analyse one of the explicit matrices instead.")
    symplectic.add_argument("--k", type=int, default=None, help="Index for M_k.")
    symplectic.add_argument("--periodic", choices=Constants.PERIODIC_KINDS, default=None,
                            help="Also report the verdict for a periodic class of this kind.")

    thurston = commands.add_parser("thurston", help="Stretch factors in the Thurston construction.")
    thurston.add_argument("--N", required=True, help="Intersection matrix as JSON, or @file.")
    thurston.add_argument("--word", default=None, help="Word over A, a, B, b.")
    thurston.add_argument("--k-list", default=None, help="Comma-separated blow-up factors.")
    thurston.add_argument("--blowup-index", type=int, default=0, help="A-curve that is blown up.")

    flm = commands.add_parser("flm-bound", help="Intersection bound from a stretch factor.")
    flm.add_argument("--lambda", dest="lam", type=float, required=True)
    flm.add_argument("--k", type=int, default=1)
    flm.add_argument("--mod2-equal", action="store_true", default=False,
                     help="c and f^k(c) are equal mod 2.")

    power = commands.add_parser("power-subgroup", help="Whether n-th powers generate everything.")
    power.add_argument("--L", type=int, required=True)
    power.add_argument("--n", type=int, required=True)
    return parser


def handle_terminal(argv: list[str] | None = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def create_logger(verbose: bool, stream=stdout) -> logging.Logger:
    logger = logging.getLogger("__main__")
    handler = logging.StreamHandler(stream)
    handler.set_name("console")

    # clear the log file
    with open(Constants.LOG_FILE, "w"):
        pass

    if verbose:
        logging.basicConfig(filename=Constants.LOG_FILE, level=logging.DEBUG,
                            format="%(asctime)s [%(levelname)s] %(message)s")
        handler.setLevel(logging.DEBUG)
    else:
        logging.basicConfig(filename=Constants.LOG_FILE, level=logging.INFO,
                            format="%(asctime)s [%(levelname)s] %(message)s")
        handler.setLevel(logging.INFO)

    formatter = logging.Formatter('%(asctime)s [%(levelname)s] %(message)s', datefmt="%H:%M:%S")
    handler.setFormatter(formatter)
    for old in [h for h in logger.handlers if h.get_name() == "console"]:
        logger.removeHandler(old)
    logger.addHandler(handler)

    return logger


def read_text_argument(value: str) -> str:
    """
    "@path" reads the file at path, anything else is used as given.
    """
    if not value.startswith("@"):
        return value
    try:
        with open(value[1:], "r") as input_file:
            return input_file.read().strip()
    except OSError as error:
        raise DataDecodingError(f"Cannot read {value[1:]}.") from error


def read_json_argument(value: str):
    text = read_text_argument(value)
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise DataDecodingError(f"Line {error.lineno}, column {error.colno}: {error.msg}.") from error


def read_matrix(value: str) -> np.ndarray:
    """
    A matrix given as JSON rows, or as whitespace-separated rows, one per line.
    """
    text = read_text_argument(value)
    try:
        rows = json.loads(text) if text.lstrip().startswith("[") else [line.split() for line in text.splitlines()
                                                                          if line.strip()]
        return np.array([[int(x) for x in row] for row in rows], dtype=np.int64)
    except (json.JSONDecodeError, ValueError, TypeError) as error:
        raise DataDecodingError(f"Cannot read a matrix from '{value}'.") from error
