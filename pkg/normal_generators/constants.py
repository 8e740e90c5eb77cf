from dataclasses import dataclass


@dataclass
class Constants:
    DEBUG = False
    SHOW_PROGRESS = True

    LOG_FILE = "normal_generators.log"
    DATA_DIRECTORY = "data"
    CATALOG_FILE = "data/catalog.json"
    CATALOG_CACHE = "data/catalog.dill"

    CURVE_LABELS = ("gamma", "delta", "epsilon")
    PAIR_TYPES = ("I", "II", "III", "IV")
    PERIODIC_KINDS = ("hyperelliptic", "other-periodic")
    EXPECTED_TEMPLATE_COUNTS = {"II": 4, "III": 7, "IV": 3}
    EXPECTED_CATALOG_COUNTS = {"I": 2, "II": 10, "III": 16, "IV": 8}
    EXPECTED_STRATEGY_COUNTS = {
        "I": {"good-pair-bp": 1, "type-I-boundary": 1},
        "II": {"good-pair": 5, "wsccsep": 5},
        "III": {"good-pair": 13, "wsccb": 3},
        "IV": {"good-pair": 2, "type-IV-turn": 6},
    }
    TEMPLATE_GENUS = {"II": 1, "III": 2, "IV": 1}

    PF_TOLERANCE = 1e-12
    TRACE_TOLERANCE = 1e-9
    FLM_EPSILON = 1e-12  # slack when rounding 2 * lambda ** k up to an integer

    if DEBUG:
        PF_MAX_ITERATIONS = 20_000
        RANDOM_STABILIZATIONS = 10
        ORACLE_SYSTEMS = 100
    else:
        PF_MAX_ITERATIONS = 200_000
        RANDOM_STABILIZATIONS = 100
        ORACLE_SYSTEMS = 1000

    ORDER_SEARCH_CAP = 1000
    ORACLE_MAX_EDGES = 12
    POLYGON_PERTURBATION = 1e-3  # offset of segment endpoints away from side midpoints
    MAX_SEPARATOR_WALKS = 6  # regions with more walks only get push-off candidates
    MAX_INSERTION_ORDERS = 120  # orders tried when drawing several neighbourhood curves together
    MAX_HANDLES = 5  # handle pairs tried per template in the second enumeration phase
    MAX_OPTIONAL_HANDLES = 1  # handles beyond those the bigons, annuli and type conditions need
    # complementary regions of (gamma, delta) in a template, and the allowed counts for (delta, epsilon)
    TEMPLATE_PAIR_REGIONS = {"II": (3, (3,)), "III": (2, (2, 3)), "IV": (2, (2,))}
