import itertools
import json
import math
import os
import random
import shutil
import tempfile
import unittest

import numpy as np

import cli
import ui_helpers
from normal_generators import pickler
from normal_generators.classifier import (
    TripleCatalogEntry, build_catalog, classify_pair, classify_triple, enumerate_templates, match_catalog,
    random_stabilization,
)
from normal_generators.constants import Constants
from normal_generators.criteria import (
    STRATEGIES, TYPE_ONE_FOURTH_IMAGE, annotate_catalog, check_chen, check_good_pair, check_lantern,
    check_type_I_boundary, check_type_IV_turn, check_wscca, check_wsccb, check_wsccsep, flm_bound,
    flm_guarantee, good_pair_witness, lantern_witness, parity_refine, periodic_verdict, power_subgroup_full,
    run_case_analysis, type_IV_turn_witness, verify_certificate,
)
from normal_generators.errors import (
    CriterionPreconditionError, DataDecodingError, InvalidSystemError, PolygonError, SurgeryError,
    SymplecticError, ThurstonError,
)
from normal_generators.helpers import UnionFind, minimal_hitting_sets, set_partitions
from normal_generators.homology import homology_oracle_gf2
from normal_generators.isomorphism import Policy, canonical_form, is_stabilization_of, isomorphic
from normal_generators.polygon import (
    PolygonRotation, PolygonSurface, midpoint_curve_properties, periodic_case3_verdict, quotient_genus,
    rotation_order, segment_intersection, to_curve_system, triple_region_test,
)
from normal_generators.surface import (
    algebraic_intersection, ambient_genus, detect_bigons, geometric_intersection, is_separating, is_trivial,
    mod2_class_equal, restrict_to, to_dot, validate,
)
from normal_generators.surgery import (
    add_handle, cut_along, insert_dual_curve, insert_meridian, insert_pushoff, insert_separator,
    insert_turn_curve, relabel, reglue, turn_direction,
)
from normal_generators.symplectic import (
    TwistWord, abelianization_image, analyse_word, chain_curve_vectors, congruence_level, is_symplectic,
    matrix_order, named_matrix, transvection, transvection_power, word_action,
)
from normal_generators.thurston import (
    GOLDEN_SQUARE, ThurstonSystem, cho_ham_value, eval_word, invert_word, lemma_k_bound, parse_word,
    penner_bound, pf_eigenvalue, stretch_factor, stretch_from_trace, word_to_text,
)

Constants.DEBUG = True

if Constants.DEBUG:
    random.seed(0)


logger = ui_helpers.create_logger(verbose=True)
logger.info("Starting unit tests.")

TORUS_FILE = os.path.join(Constants.DATA_DIRECTORY, "wscca_torus.json")
THURSTON_FIXTURES = ("thurston_single.txt", "thurston_path.txt", "thurston_chain.txt")


def torus_system():
    """
    Two curves a, b crossing once on a torus.
    """
    return pickler.decode_system(pickler.load_json(TORUS_FILE))


def sphere_system():
    """
    One separating curve on a sphere.
    """
    return validate({
        "vertices": [{"id": "m", "darts": [["e", 0], ["e", 1]]}],
        "edges": [{"id": "e", "curve": "c", "tail": "m", "head": "m"}],
        "curves": [{"id": "c", "edges": ["e"]}],
        "regions": [{"id": "R1", "genus": 0, "walks": [[["e", "R"]]]},
                    {"id": "R2", "genus": 0, "walks": [[["e", "L"]]]}],
    })


LANTERN_FILE = os.path.join(Constants.DATA_DIRECTORY, "lantern_genus3.json")


def two_crossing_system(regions=None):
    """
    Curves c, fc crossing twice with opposite signs. The shipped regions put them in
    different classes mod 2 on a genus-3 surface.
    """
    raw = pickler.load_json(LANTERN_FILE)
    if regions is not None:
        raw["regions"] = regions
    return validate(raw)


# regions pairing the boundary walks of equal colour: c and fc agree mod 2, genus 2
SAME_CLASS_REGIONS = [
    {"id": "R1", "genus": 0, "walks": [[["c1", "R"], ["f2", "R"]], [["c2", "L"], ["f1", "L"]]]},
    {"id": "R2", "genus": 0, "walks": [[["c1", "L"], ["f1", "R"]], [["c2", "R"], ["f2", "L"]]]},
]


def random_word(rng: random.Random, names: dict, length: int) -> TwistWord:
    return TwistWord(tuple((names[rng.choice(sorted(names))], rng.choice([-2, -1, 1, 2])) for _ in range(length)))


def thurston_matrix(filename: str) -> np.ndarray:
    return ui_helpers.read_matrix("@" + os.path.join(Constants.DATA_DIRECTORY, filename))


_CATALOG = []


def catalog():
    if not _CATALOG:
        _CATALOG.extend(annotate_catalog(build_catalog()))
    return _CATALOG


class HelperTests(unittest.TestCase):
    def test_set_partitions(self):
        """
        Description
        Count set partitions of a 4-element set, all and with exactly 2 blocks.

        Expected
        Bell number 15 and Stirling number 7.

        :return:
        """
        self.assertEqual(len(list(set_partitions(4))), 15)
        self.assertEqual(len(list(set_partitions(4, 2))), 7)
        self.assertEqual(list(set_partitions(2)), [(0, 0), (0, 1)])

    def test_minimal_hitting_sets(self):
        found = minimal_hitting_sets([{1, 2}, {2, 3}])
        self.assertEqual(found[0], frozenset({2}))
        self.assertIn(frozenset({1, 3}), found)
        self.assertEqual(len(found), 2)

    def test_union_find_parity(self):
        """
        Description
        Join a-b and b-c with odd parity, then ask for a-c odd.

        Expected
        The third union contradicts the first two.

        :return:
        """
        groups = UnionFind("abc")
        self.assertTrue(groups.union("a", "b", 1))
        self.assertTrue(groups.union("b", "c", 1))
        self.assertFalse(groups.union("a", "c", 1))
        self.assertEqual(len(groups.groups()), 1)


class SurfaceTests(unittest.TestCase):
    def test_torus_fixture(self):
        """
        Description
        Load the shipped torus with two curves crossing once.

        Expected
        Genus 1, one crossing, algebraic intersection 1, both curves nonseparating and
        different mod 2.

        :return:
        """
        torus = torus_system()
        self.assertEqual(ambient_genus(torus), 1)
        self.assertEqual(geometric_intersection(torus, "a", "b"), 1)
        self.assertEqual(algebraic_intersection(torus, "a", "b"), 1)
        self.assertFalse(is_separating(torus, "a"))
        self.assertFalse(is_trivial(torus, "a"))
        self.assertFalse(mod2_class_equal(torus, {"a"}, {"b"}))
        self.assertTrue(mod2_class_equal(torus, {"a"}, {"a"}))

    def test_sphere_curve(self):
        sphere = sphere_system()
        self.assertEqual(ambient_genus(sphere), 0)
        self.assertTrue(is_separating(sphere, "c"))
        self.assertTrue(is_trivial(sphere, "c"))

    def test_region_genus_raises_ambient_genus(self):
        raw = pickler.load_json(TORUS_FILE)
        raw["regions"][0]["genus"] = 1
        self.assertEqual(ambient_genus(validate(raw)), 2)

    def test_restrict_to_one_curve(self):
        """
        Description
        Forget b on the torus.

        Expected
        a alone leaves one annulus: a single genus-0 region with two boundary walks.

        :return:
        """
        alone = restrict_to(torus_system(), ["a"])
        self.assertEqual(len(alone.regions), 1)
        self.assertEqual(alone.regions[0].genus, 0)
        self.assertEqual(len(alone.regions[0].walks), 2)
        self.assertEqual(ambient_genus(alone), 1)

    def test_invalid_systems(self):
        with self.assertRaises(InvalidSystemError):
            validate({})
        raw = pickler.load_json(TORUS_FILE)
        raw["regions"][0]["walks"] = [[["ea", "R"], ["eb", "R"], ["ea", "L"], ["eb", "L"]]]
        with self.assertRaises(InvalidSystemError):
            validate(raw)
        raw = pickler.load_json(TORUS_FILE)
        raw["regions"][0]["walks"][0][0][1] = "X"
        with self.assertRaises(InvalidSystemError):
            validate(raw)

    def test_dot_export(self):
        dot = to_dot(torus_system())
        self.assertTrue(dot.startswith("graph curves {"))
        self.assertIn('label="ea"', dot)

    def test_detect_bigons(self):
        """
        Description
        Two curves crossing twice, once with a handle in the small disk and once without.

        Expected
        No bigon with the handle, the disk region without it.

        :return:
        """
        self.assertEqual(detect_bigons(two_crossing_system(), "c", "fc"), [])
        raw = pickler.load_json(LANTERN_FILE)
        raw["regions"][1]["genus"] = 0
        flattened = validate(raw)
        self.assertEqual(ambient_genus(flattened), 2)
        self.assertEqual(detect_bigons(flattened, "c", "fc"), ["R2"])
        self.assertEqual(detect_bigons(torus_system(), "a", "b"), [])


class SurgeryTests(unittest.TestCase):
    def test_add_handle(self):
        torus = torus_system()
        bigger = add_handle(torus, "R1", "R1")
        self.assertEqual(ambient_genus(bigger), 2)
        self.assertTrue(is_stabilization_of(bigger, torus))
        self.assertFalse(is_stabilization_of(torus, bigger))

    def test_meridian(self):
        """
        Description
        Insert a meridian into a genus-1 region, and try it in a genus-0 region.

        Expected
        The meridian is nonseparating and misses a and b; the genus-0 region refuses.

        :return:
        """
        grown, meridian = insert_meridian(add_handle(torus_system(), "R1", "R1"), "R1")
        self.assertFalse(is_separating(grown, meridian))
        self.assertEqual(geometric_intersection(grown, meridian, "a"), 0)
        self.assertEqual(ambient_genus(grown), 2)
        with self.assertRaises(SurgeryError):
            insert_meridian(torus_system(), "R1")

    def test_separator(self):
        grown, separator = insert_separator(add_handle(torus_system(), "R1", "R1"), "R1", [0], 0)
        self.assertTrue(is_separating(grown, separator))
        self.assertFalse(is_trivial(grown, separator))
        self.assertEqual(ambient_genus(grown), 2)

    def test_pushoff_of_disk_boundary(self):
        """
        Description
        Push off the only boundary walk of the torus's disk region.

        Expected
        The new curve bounds a disk.

        :return:
        """
        grown, pushoff = insert_pushoff(torus_system(), "R1", 0)
        self.assertTrue(is_trivial(grown, pushoff))
        self.assertEqual(geometric_intersection(grown, pushoff, "a"), 0)

    def test_dual_curve(self):
        grown, dual = insert_dual_curve(torus_system(), "ea")
        self.assertEqual(geometric_intersection(grown, dual, "a"), 1)
        self.assertEqual(geometric_intersection(grown, dual, "b"), 0)

    def test_cut_and_reglue(self):
        """
        Description
        Cut the torus along a.

        Expected
        The cut surface is connected, b leaves one arc from one copy of a to the other,
        and reglueing gives back the torus.

        :return:
        """
        torus = torus_system()
        cut = cut_along(torus, "a")
        self.assertEqual(len(cut.components()), 1)
        arcs = cut.arcs("b")
        self.assertEqual(len(arcs), 1)
        self.assertEqual(set(arcs[0]), {"a_1", "a_2"})
        self.assertEqual(cut.outer_region("a_1"), "R1")
        self.assertEqual(cut.component_of("R1"), 0)
        self.assertTrue(isomorphic(reglue(cut), torus))

    def test_relabel(self):
        torus = torus_system()
        swapped = relabel(torus, {"a": "x"})
        self.assertEqual(sorted(swapped.curve_ids), ["b", "x"])
        with self.assertRaises(SurgeryError):
            relabel(torus, {"a": "b"})

    def test_turn_directions(self):
        """
        Description
        The four ways to follow an arc of c and then an arc of fc.

        Expected
        For each arc of c, one arc of fc turns left and the other turns right. Curves
        crossing once have no turn curves.

        :return:
        """
        system = two_crossing_system()
        for a in (0, 1):
            directions = {turn_direction(system, "c", "fc", (a, b)) for b in (0, 1)}
            self.assertEqual(directions, {"left", "right"})
        with self.assertRaises(SurgeryError):
            insert_turn_curve(torus_system(), "a", "b", (0, 0))
        with self.assertRaises(SurgeryError):
            turn_direction(system, "c", "fc", (2, 0))


class IsomorphismTests(unittest.TestCase):
    def test_reloaded_system_is_isomorphic(self):
        torus = torus_system()
        again = pickler.decode_system(pickler.encode_system(torus))
        self.assertTrue(isomorphic(torus, again))
        self.assertEqual(canonical_form(torus), canonical_form(again))
        self.assertFalse(isomorphic(torus, sphere_system()))

    def test_policy_respected(self):
        torus = torus_system()
        self.assertTrue(isomorphic(torus, torus, Policy(allow_reflection=False)))

    def test_isomorphism_is_an_equivalence(self):
        """
        Description
        Compare reloaded copies of three systems on the same curves, pairwise and in triples.

        Expected
        Reflexive, symmetric and transitive; copies match, different region structures do not.

        :return:
        """
        originals = [two_crossing_system(), two_crossing_system(SAME_CLASS_REGIONS),
                     add_handle(two_crossing_system(SAME_CLASS_REGIONS), "R1", "R1")]
        systems = [s for system in originals
                   for s in (system, pickler.decode_system(json.loads(pickler.dumps(pickler.encode_system(system)))))]
        related = {(i, j): isomorphic(systems[i], systems[j]) for i in range(len(systems)) for j in range(len(systems))}
        for i in range(len(systems)):
            self.assertTrue(related[(i, i)])
            self.assertTrue(related[(i, i + 1 if i % 2 == 0 else i - 1)])
        for i, j in itertools.product(range(len(systems)), repeat=2):
            self.assertEqual(related[(i, j)], related[(j, i)])
            self.assertEqual(related[(i, j)], i // 2 == j // 2)
        for i, j, k in itertools.product(range(len(systems)), repeat=3):
            if related[(i, j)] and related[(j, k)]:
                self.assertTrue(related[(i, k)])


class HomologyTests(unittest.TestCase):
    def test_torus_oracle(self):
        oracle = homology_oracle_gf2(torus_system())
        self.assertEqual(oracle.rank, 2)
        self.assertNotEqual(oracle.class_of(["a"]), oracle.class_of(["b"]))
        self.assertTrue(oracle.is_zero(["a", "a"]))

    def test_oracle_agrees_on_random_polygon_systems(self):
        """
        Description
        Random sets of midpoint curves on opposite-pairing polygons, some stabilized, with
        at most ORACLE_MAX_EDGES edges, compared curve by curve and pairwise.

        Expected
        The colouring test and the chain-complex oracle agree on mod-2 equality and on
        separation.

        :return:
        """
        rng = random.Random(0)
        checked = 0
        while checked < Constants.ORACLE_SYSTEMS:
            n = rng.choice([4, 6, 8, 10])
            polygon = PolygonSurface.from_layout(n, "opposite")
            sides = rng.sample(range(n // 2), rng.randint(1, min(4, n // 2)))
            system, names = to_curve_system(polygon, sides)
            if len(system.edges) > Constants.ORACLE_MAX_EDGES:
                continue
            if rng.random() < 0.5:
                system = random_stabilization(system, rng, rng.randint(1, 3))
            checked += 1
            oracle = homology_oracle_gf2(system)
            curves = list(names.values())
            for curve in curves:
                self.assertEqual(is_separating(system, curve), oracle.is_zero([curve]))
            for first, second in itertools.combinations(curves, 2):
                self.assertEqual(mod2_class_equal(system, {first}, {second}),
                                 oracle.class_of([first]) == oracle.class_of([second]))


class CriteriaTests(unittest.TestCase):
    def test_wscca_on_torus(self):
        verdict = check_wscca(torus_system(), "a", "b")
        self.assertTrue(verdict.positive)
        self.assertEqual(verdict.conclusion, "contains-commutator-subgroup")

    def test_wsccb_needs_disjoint_curves(self):
        verdict = check_wsccb(torus_system(), "a", "b")
        self.assertFalse(verdict.positive)
        self.assertEqual(verdict.conclusion, "inconclusive")

    def test_wsccsep_preconditions(self):
        with self.assertRaises(CriterionPreconditionError):
            check_wsccsep(torus_system(), "a", "b")

    def test_shipped_certificate(self):
        certificate = pickler.decode_certificate(pickler.load_json(TORUS_FILE))
        self.assertTrue(verify_certificate(certificate).positive)
        certificate.criterion = "wsccb"
        self.assertFalse(verify_certificate(certificate).positive)

    def test_lantern(self):
        """
        Description
        Curves crossing twice in different classes mod 2, and the same crossing pattern
        with regions that make the classes agree.

        Expected
        The lantern test certifies the first through a curve crossing one of them once,
        and is inconclusive on the second.

        :return:
        """
        system = two_crossing_system()
        self.assertFalse(mod2_class_equal(system, {"c"}, {"fc"}))
        verdict = check_lantern(system, "c", "fc")
        self.assertTrue(verdict.positive)
        self.assertEqual(verdict.criterion, "lantern")
        grown, d = lantern_witness(system, "c", "fc")
        self.assertEqual(sorted((geometric_intersection(grown, "c", d), geometric_intersection(grown, "fc", d))), [0, 1])
        same = two_crossing_system(SAME_CLASS_REGIONS)
        self.assertFalse(check_lantern(same, "c", "fc").positive)
        with self.assertRaises(CriterionPreconditionError):
            check_lantern(torus_system(), "a", "b")

    def test_chen_both_ways(self):
        """
        Description
        The Chen test with the witness crossing c once, then with c and f(c) swapped.

        Expected
        Positive both ways; a witness role taken by a curve crossing twice is not.

        :return:
        """
        grown, d = lantern_witness(two_crossing_system(), "c", "fc")
        crossed = "c" if geometric_intersection(grown, "c", d) == 1 else "fc"
        other = "fc" if crossed == "c" else "c"
        self.assertTrue(check_chen(grown, crossed, other, d).positive)
        self.assertTrue(check_chen(grown, other, crossed, d).positive)
        self.assertFalse(check_chen(grown, crossed, d, other).positive)

    def test_run_case_analysis_on_lantern(self):
        system = two_crossing_system()
        system, third = insert_meridian(system, "R2")
        verdict, certificate = run_case_analysis(system, "c", "fc", third)
        self.assertEqual(certificate.criterion, "lantern")
        self.assertEqual(verdict.conclusion, "normal-generator")

    def test_flm_bounds(self):
        """
        Description
        Bounds for stretch factors between 1.415 and 1.499, and just below sqrt(2).

        Expected
        i(c, f(c)) < 3, refined to <= 2; i(c, f^2(c)) <= 2 and i(c, f^3(c)) <= 4 for
        curves equal mod 2.

        :return:
        """
        for lam in np.linspace(1.4151, 1.4989, 50):
            self.assertEqual(flm_bound(lam, 1), 3)
            self.assertEqual(parity_refine(flm_guarantee(lam, 1), True), 2)
        lam = math.sqrt(2) - 1e-9
        self.assertEqual(parity_refine(flm_guarantee(lam, 2), True), 2)
        self.assertEqual(parity_refine(flm_guarantee(lam, 3), True), 4)
        for lam, k in itertools.product((1.2, 1.5, 2.7), (1, 2, 3)):
            self.assertEqual(flm_bound(lam, k), flm_bound(lam ** k, 1))
            self.assertLessEqual(flm_bound(lam, k), flm_bound(lam, k + 1))
        with self.assertRaises(CriterionPreconditionError):
            flm_bound(1.0, 1)

    def test_power_subgroup(self):
        self.assertFalse(power_subgroup_full(12, 6))
        self.assertTrue(power_subgroup_full(12, 5))
        with self.assertRaises(CriterionPreconditionError):
            power_subgroup_full(7, 2)

    def test_periodic_verdicts(self):
        self.assertEqual(periodic_verdict(3, "other-periodic").conclusion, "normal-generator")
        self.assertEqual(periodic_verdict(2, "hyperelliptic").conclusion, "central-order-2")
        unit = periodic_verdict(1, "other-periodic", 13)
        self.assertEqual((unit.conclusion, unit.residue, unit.modulus), ("normal-generator", 1, 12))
        self.assertEqual(periodic_verdict(2, "other-periodic", 4).conclusion, "abelianization-determined")
        with self.assertRaises(CriterionPreconditionError):
            periodic_verdict(0, "other-periodic")


class CatalogTests(unittest.TestCase):
    def test_template_counts(self):
        """
        Description
        Enumerate the templates of types II, III and IV.

        Expected
        4, 7 and 3 templates.

        :return:
        """
        for tag, expected in Constants.EXPECTED_TEMPLATE_COUNTS.items():
            self.assertEqual(len(enumerate_templates(tag)), expected, f"type {tag}")

    def test_catalog_counts(self):
        entries = catalog()
        for tag, expected in Constants.EXPECTED_CATALOG_COUNTS.items():
            self.assertEqual(sum(1 for e in entries if e.type == tag), expected, f"type {tag}")
        self.assertEqual(len(entries), 36)
        self.assertEqual(len({e.label for e in entries}), 36)

    def test_entries_have_their_type(self):
        gamma, delta, epsilon = Constants.CURVE_LABELS
        for entry in catalog():
            self.assertEqual(classify_triple(entry.system, gamma, delta, epsilon), entry.type, entry.label)
            self.assertEqual(classify_pair(entry.system, gamma, delta).tag, entry.type, entry.label)
            self.assertIn(entry.strategy, STRATEGIES[entry.type], entry.label)

    def test_strategy_counts(self):
        """
        Description
        Count the strategy annotated on the entries of each type.

        Expected
        Type II: five good pairs and five separating pairs. Type III: three entries need
        the disjoint non-homologous witnesses around a handle. Type IV: two good pairs and
        six turn curves.

        :return:
        """
        for tag, expected in Constants.EXPECTED_STRATEGY_COUNTS.items():
            found = {}
            for entry in catalog():
                if entry.type == tag:
                    found[entry.strategy] = found.get(entry.strategy, 0) + 1
            self.assertEqual(found, expected, f"type {tag}")

    def test_catalog_is_minimal(self):
        entries = catalog()
        for first, second in itertools.permutations(entries, 2):
            if first.type != second.type:
                continue
            self.assertFalse(isomorphic(first.system, second.system), f"{first.label} ~ {second.label}")
            self.assertFalse(is_stabilization_of(first.system, second.system),
                             f"{first.label} stabilizes {second.label}")

    def test_template_pruning(self):
        """
        Description
        Check the filters the templates pass.

        Expected
        All three curves are nonseparating, and on type III templates the arcs epsilon
        leaves after cutting along delta are all separating or all nonseparating.

        :return:
        """
        _, delta, epsilon = Constants.CURVE_LABELS
        for tag in Constants.EXPECTED_TEMPLATE_COUNTS:
            for template in enumerate_templates(tag):
                for curve in Constants.CURVE_LABELS:
                    self.assertFalse(is_separating(template.system, curve), f"{tag}-{template.index}")
                if tag == "III":
                    cut = cut_along(template.system, delta)
                    self.assertEqual(len({cut.arc_separates(arc) for arc in cut.arc_edges(epsilon)}), 1)

    def test_good_pair_negatives(self):
        gamma, delta, epsilon = Constants.CURVE_LABELS
        entry = next(e for e in catalog() if e.strategy == "good-pair")
        certificate = good_pair_witness(entry.system, gamma, delta, epsilon)
        grown, a, b = certificate.system, certificate.witnesses["a"], certificate.witnesses["b"]
        self.assertTrue(check_good_pair(grown, gamma, delta, epsilon, a, b).positive)
        self.assertFalse(check_good_pair(grown, epsilon, delta, gamma, a, b).positive)
        with self.assertRaises(CriterionPreconditionError):
            check_good_pair(grown, gamma, delta, epsilon, a, a)

    def test_type_I_boundary(self):
        """
        Description
        The type I entry that needs f^3(c), with four and with six crossings of c and f^3(c).

        Expected
        Four crossings certify it; six leave it inconclusive.

        :return:
        """
        gamma, delta, epsilon = Constants.CURVE_LABELS
        entry = next(e for e in catalog() if e.strategy == "type-I-boundary")
        self.assertTrue(check_type_I_boundary(entry.system, gamma, delta, epsilon, {"c_fffc": 4}).positive)
        verdict = check_type_I_boundary(entry.system, gamma, delta, epsilon, {"c_fffc": 6})
        self.assertEqual(verdict.conclusion, "inconclusive")
        with self.assertRaises(CriterionPreconditionError):
            check_type_I_boundary(entry.system, gamma, delta, epsilon, {"ffc_fffc": 0})

    def test_type_IV_turn_curves(self):
        """
        Description
        Build the turn curve certificate of each type IV entry that needs one, and apply
        the test to a type III entry.

        Expected
        d1 crosses e1 and e2 once each on six entries; a type III triple is rejected.

        :return:
        """
        gamma, delta, epsilon = Constants.CURVE_LABELS
        turned = [e for e in catalog() if e.type == "IV" and e.strategy == "type-IV-turn"]
        self.assertEqual(len(turned), 6)
        for entry in turned:
            certificate = type_IV_turn_witness(entry.system, gamma, delta, epsilon)
            self.assertIsNotNone(certificate, entry.label)
            grown, names = certificate.system, certificate.witnesses
            self.assertEqual(geometric_intersection(grown, names["d1"], names["e1"]), 1, entry.label)
            self.assertEqual(geometric_intersection(grown, names["d1"], names["e2"]), 1, entry.label)
            self.assertTrue(check_type_IV_turn(entry.system, gamma, delta, epsilon).positive)
        third = next(e for e in catalog() if e.type == "III")
        with self.assertRaises(CriterionPreconditionError):
            check_type_IV_turn(third.system, gamma, delta, epsilon)

    def test_catalog_matches_golden_file(self):
        """
        Description
        Compare the built catalog with the one stored in the data directory. A missing
        file is written from the built catalog first.

        Expected
        Same labels, types, templates and strategies, and isomorphic systems.

        :return:
        """
        entries = catalog()
        if not os.path.exists(Constants.CATALOG_FILE):
            logger.warning(f"No catalog at {Constants.CATALOG_FILE}, writing it.")
            pickler.save_json(pickler.encode_catalog(entries), Constants.CATALOG_FILE)
        stored = pickler.decode_catalog(pickler.load_json(Constants.CATALOG_FILE))
        self.assertEqual([(e.label, e.type, e.template, e.strategy) for e in stored],
                         [(e.label, e.type, e.template, e.strategy) for e in entries])
        for old, new in zip(stored, entries):
            self.assertTrue(isomorphic(old.system, new.system), new.label)

    def test_catalog_sweep(self):
        """
        Description
        Run the case analysis on every catalog entry and on Constants.RANDOM_STABILIZATIONS
        random stabilizations of it, each adding one to three handles.

        Expected
        Every triple matches its entry and gets a positive verdict.

        :return:
        """
        gamma, delta, epsilon = Constants.CURVE_LABELS
        rng = random.Random(0)
        entries = catalog()
        for entry in entries:
            fffc = TYPE_ONE_FOURTH_IMAGE if entry.type == "I" else None
            for trial in range(Constants.RANDOM_STABILIZATIONS + 1):
                count = rng.randint(1, 3) if trial else 0
                system = random_stabilization(entry.system, rng, count)
                self.assertEqual(match_catalog(system, gamma, delta, epsilon, entries).type, entry.type)
                verdict, certificate = run_case_analysis(system, gamma, delta, epsilon, fffc=fffc, catalog=entries)
                self.assertTrue(verdict.positive, f"{entry.label} with {count} handles: {verdict}")
                self.assertTrue(verify_certificate(certificate).positive)

    def test_oracle_agrees_on_catalog(self):
        for entry in catalog():
            oracle = homology_oracle_gf2(entry.system)
            for first, second in itertools.combinations(Constants.CURVE_LABELS, 2):
                self.assertEqual(mod2_class_equal(entry.system, {first}, {second}),
                                 oracle.class_of([first]) == oracle.class_of([second]))
            for curve in Constants.CURVE_LABELS:
                self.assertEqual(is_separating(entry.system, curve), oracle.is_zero([curve]))


class PolygonTests(unittest.TestCase):
    def test_quotient_genus(self):
        for n, genus in ((4, 1), (6, 1), (8, 2), (10, 2), (12, 3)):
            self.assertEqual(quotient_genus(PolygonSurface.from_layout(n, "opposite")), genus, f"{n}-gon")
        self.assertEqual(quotient_genus(PolygonSurface.from_layout(4, [[0, 1], [2, 3]])), 0)

    def test_rotation_order(self):
        decagon = PolygonSurface.from_layout(10, "opposite")
        self.assertEqual(rotation_order(decagon, PolygonRotation.for_polygon(decagon, 1)), 10)
        self.assertEqual(rotation_order(decagon, PolygonRotation.for_polygon(decagon, 5)), 2)
        octagon = PolygonSurface.from_layout(8, "opposite")
        self.assertEqual(rotation_order(octagon, PolygonRotation.for_polygon(octagon, 2)), 4)

    def test_invalid_polygons(self):
        with self.assertRaises(PolygonError):
            PolygonSurface.from_layout(4, [[0, 2, "same"], [1, 3]])
        with self.assertRaises(PolygonError):
            PolygonSurface.from_layout(4, [[0, 2]])
        with self.assertRaises(PolygonError):
            PolygonSurface.from_layout(5, "opposite")
        with self.assertRaises(PolygonError):
            PolygonRotation.for_polygon(PolygonSurface.from_layout(4, [[0, 1], [2, 3]]), 1)

    def test_segment_intersection(self):
        decagon = PolygonSurface.from_layout(10, "opposite")
        self.assertEqual(segment_intersection(decagon, 0, 1), 1)
        with self.assertRaises(PolygonError):
            segment_intersection(decagon, 0, 5)
        blocks = PolygonSurface.from_layout(12, [[0, 2], [1, 3], [4, 6], [5, 7], [8, 10], [9, 11]])
        self.assertEqual(segment_intersection(blocks, 0, 4), 0)
        self.assertEqual(segment_intersection(blocks, 0, 1), 1)

    def test_square_matches_torus_fixture(self):
        """
        Description
        Both midpoint curves of a square with opposite sides glued.

        Expected
        The same configuration as the shipped torus: two curves crossing once.

        :return:
        """
        square = PolygonSurface.from_layout(4, "opposite")
        system, names = to_curve_system(square, [0, 1])
        self.assertEqual(ambient_genus(system), 1)
        self.assertTrue(isomorphic(relabel(system, {names[0]: "a", names[1]: "b"}), torus_system()))

    def test_midpoint_curve_properties(self):
        self.assertEqual(midpoint_curve_properties(PolygonSurface.from_layout(4, [[0, 1], [2, 3]]), 0), "trivial")
        self.assertEqual(midpoint_curve_properties(PolygonSurface.from_layout(8, "opposite"), 0), "nonseparating")

    def test_trivial_group(self):
        sphere = PolygonSurface.from_layout(4, [[0, 1], [2, 3]])
        verdict, certificate = periodic_case3_verdict(sphere, PolygonRotation.for_polygon(sphere, 2))
        self.assertEqual(verdict.conclusion, "trivial-group")
        self.assertIsNone(certificate)

    def test_order_two_rejected(self):
        decagon = PolygonSurface.from_layout(10, "opposite")
        with self.assertRaises(PolygonError):
            periodic_case3_verdict(decagon, PolygonRotation.for_polygon(decagon, 5))

    def test_disjoint_images(self):
        """
        Description
        A 12-gon glued in three blocks of four sides, rotated by a third of a turn.

        Expected
        c and its two images are disjoint, a central region borders all three, and the
        verdict comes from the disjoint-curve criterion in genus 3.

        :return:
        """
        polygon = PolygonSurface.from_layout(12, [[0, 2], [1, 3], [4, 6], [5, 7], [8, 10], [9, 11]])
        rotation = PolygonRotation.for_polygon(polygon, 4)
        self.assertEqual(quotient_genus(polygon), 3)
        self.assertTrue(triple_region_test(polygon, rotation, 0))
        verdict, certificate = periodic_case3_verdict(polygon, rotation)
        self.assertEqual(certificate.criterion, "wsccb")
        self.assertEqual(verdict.conclusion, "normal-generator")

    def test_opposite_pairing_sweep(self):
        for n in range(4, 15, 2):
            polygon = PolygonSurface.from_layout(n, "opposite")
            for k in range(1, n):
                rotation = PolygonRotation.for_polygon(polygon, k)
                if rotation_order(polygon, rotation) <= 2:
                    continue
                verdict, certificate = periodic_case3_verdict(polygon, rotation)
                self.assertTrue(verdict.positive, f"{n}-gon, k={k}: {verdict}")
                self.assertTrue(verify_certificate(certificate).positive)


class SymplecticTests(unittest.TestCase):
    def test_transvection_levels(self):
        v = (1, 0, 0, 0)
        for m in range(1, 21):
            matrix = transvection_power(v, m)
            self.assertTrue(is_symplectic(matrix))
            self.assertEqual(congruence_level(matrix), m)

    def test_named_matrices(self):
        """
        Description
        The handle rotation, the handle swap and the partial minus-identity blocks.

        Expected
        Orders 4 and 2, level 2 for 0 < k < g, M_g = -I, all symplectic.

        :return:
        """
        for g in range(2, 6):
            rotation = named_matrix("handle-rotation-M", g)
            swap = named_matrix("handle-swap-N", g)
            self.assertEqual(matrix_order(rotation), 4)
            self.assertEqual(matrix_order(swap), 2)
            self.assertTrue(is_symplectic(rotation) and is_symplectic(swap))
            for k in range(1, g):
                block = named_matrix("minus-block-M_k", g, k)
                self.assertTrue(is_symplectic(block))
                self.assertEqual(congruence_level(block), 2)
            self.assertTrue(np.array_equal(named_matrix("minus-block-M_k", g, g), -np.eye(2 * g, dtype=np.int64)))

    def test_word_analysis(self):
        names = chain_curve_vectors(3)
        with open(os.path.join(Constants.DATA_DIRECTORY, "chain_curves.json")) as input_file:
            shipped = json.load(input_file)["curves"]
        self.assertEqual({k: list(v) for k, v in names.items()}, shipped)
        report = analyse_word(TwistWord.from_text("a1 a1^-1 b2^3 b2^-3", names), 3)
        self.assertEqual(report["level"], 0)
        self.assertTrue(report["symplectic"])
        with open(os.path.join(Constants.DATA_DIRECTORY, "word_genus3.txt")) as input_file:
            report = analyse_word(TwistWord.from_text(input_file.read(), names), 3)
        self.assertTrue(report["symplectic"])
        self.assertEqual(report["exponent_sum"], 3)

    def test_word_action_properties(self):
        """
        Description
        Random words in the chain curves of genus 3.

        Expected
        The action of a concatenation is the product of the actions, every action has
        determinant 1 and is undone by the inverse word, and the level does not change
        under conjugation.

        :return:
        """
        rng = random.Random(3)
        names = chain_curve_vectors(3)
        identity = np.eye(6, dtype=np.int64)
        for _ in range(50):
            first, second = random_word(rng, names, rng.randint(1, 4)), random_word(rng, names, rng.randint(1, 4))
            joined = TwistWord(first.letters + second.letters)
            self.assertTrue(np.array_equal(word_action(joined, 3), word_action(first, 3) @ word_action(second, 3)))
            self.assertEqual(round(np.linalg.det(word_action(first, 3))), 1)
            self.assertTrue(np.array_equal(word_action(first.inverse(), 3) @ word_action(first, 3), identity))
            conjugate = word_action(second, 3) @ word_action(first, 3) @ word_action(second.inverse(), 3)
            self.assertEqual(congruence_level(conjugate), congruence_level(word_action(first, 3)))

    def test_transvection_sign(self):
        rng = random.Random(4)
        for _ in range(50):
            v = [rng.randint(-5, 5) for _ in range(4)]
            if math.gcd(*v) != 1:
                continue
            self.assertTrue(np.array_equal(transvection([-x for x in v]), transvection(v)))
            self.assertTrue(is_symplectic(transvection(v)))

    def test_bad_input(self):
        with self.assertRaises(SymplecticError):
            transvection_power((2, 0), 1)
        with self.assertRaises(SymplecticError):
            TwistWord.from_text("1,0 1,0,0,0")
        self.assertEqual(abelianization_image(13, 1), 1)
        self.assertEqual(abelianization_image(13, 3), 0)


class ThurstonTests(unittest.TestCase):
    def test_golden_square(self):
        system = ThurstonSystem.from_matrix(thurston_matrix("thurston_single.txt"))
        self.assertAlmostEqual(system.mu, 1.0, places=12)
        report = stretch_factor(system, "Ab")
        self.assertEqual(report.kind, "pseudo-Anosov")
        self.assertAlmostEqual(report.stretch, GOLDEN_SQUARE, delta=1e-9)
        self.assertEqual(stretch_factor(system, "AB").kind, "periodic")
        self.assertEqual(stretch_factor(system, "A").kind, "reducible")

    def test_trace_formula(self):
        """
        Description
        T_A^-1 T_B^n on the genus-3 chain fixture.

        Expected
        The trace is 2 + n mu.

        :return:
        """
        system = ThurstonSystem.from_matrix(thurston_matrix("thurston_chain.txt"))
        for n in (1, 2, 10, 1000, 10 ** 6):
            _, trace = eval_word(system, f"aB^{n}")
            expected = 2 + n * system.mu
            self.assertLessEqual(abs(trace - expected), 1e-12 * expected)

    def test_inverse_and_rotation_invariance(self):
        system = ThurstonSystem.from_matrix(thurston_matrix("thurston_path.txt"))
        word = parse_word("Ab^2A^3b")
        stretch = stretch_factor(system, word).stretch
        self.assertAlmostEqual(stretch_factor(system, invert_word(word)).stretch, stretch, delta=1e-9 * stretch)
        rotated = word[1:] + word[:1]
        self.assertAlmostEqual(stretch_factor(system, rotated).stretch, stretch, delta=1e-9 * stretch)

    def test_random_words_are_invariant(self):
        """
        Description
        Random words over the two twists on each fixture, inverted and rotated.

        Expected
        Every pseudo-Anosov word keeps its stretch factor under inversion and under each
        cyclic rotation.

        :return:
        """
        rng = random.Random(5)
        for filename in THURSTON_FIXTURES:
            system = ThurstonSystem.from_matrix(thurston_matrix(filename))
            for _ in range(20):
                word = tuple((letter, rng.choice([-3, -2, -1, 1, 2, 3])) for letter in "AB" * rng.randint(1, 3))
                report = stretch_factor(system, word)
                if report.kind != "pseudo-Anosov":
                    continue
                tolerance = 1e-9 * report.stretch
                self.assertAlmostEqual(stretch_factor(system, invert_word(word)).stretch, report.stretch,
                                       delta=tolerance)
                for shift in range(1, len(word)):
                    rotated = word[shift:] + word[:shift]
                    self.assertAlmostEqual(stretch_factor(system, rotated).stretch, report.stretch,
                                           delta=tolerance, msg=word_to_text(word))

    def test_lemma_k_bounds(self):
        """
        Description
        Blow up the first A-curve of each fixture k times, k up to 200.

        Expected
        The path-count bound is at least k, the stretch lower bounds increase strictly,
        and for the single-curve fixture they pass 100.

        :return:
        """
        for filename in THURSTON_FIXTURES:
            N = thurston_matrix(filename)
            previous = 0.0
            for k in range(1, 201):
                estimate = lemma_k_bound(N, 0, k)
                self.assertGreaterEqual(estimate.bound, k, f"{filename}, k={k}")
                lower = stretch_from_trace(2 + estimate.mu_lower)
                self.assertGreater(lower, previous, f"{filename}, k={k}")
                previous = lower
            if filename == "thurston_single.txt":
                self.assertGreater(previous, 100)
        self.assertEqual(lemma_k_bound(thurston_matrix("thurston_single.txt"), 0, 5).diameter, 1)

    def test_eigenvalue_and_errors(self):
        mu, vector = pf_eigenvalue([[2, 1], [1, 2]])
        self.assertAlmostEqual(mu, 3.0, places=9)
        self.assertTrue(np.all(vector > 0))
        with self.assertRaises(ThurstonError):
            ThurstonSystem.from_matrix([[1, 0], [0, 1]])
        with self.assertRaises(ThurstonError):
            parse_word("AxB")
        self.assertAlmostEqual(cho_ham_value(), 1.72208, places=4)
        self.assertAlmostEqual(penner_bound(1), 11.0)


class SerialisationTests(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_certificate_round_trip(self):
        certificate = pickler.decode_certificate(pickler.load_json(TORUS_FILE))
        again = pickler.decode_certificate(json.loads(pickler.dumps(pickler.encode_certificate(certificate))))
        self.assertEqual((again.criterion, again.roles, again.genus), ("wscca", {"c": "a", "fc": "b"}, 1))
        self.assertTrue(isomorphic(again.system, certificate.system))

    def test_malformed_input(self):
        truncated = os.path.join(self.directory, "truncated.json")
        with open(TORUS_FILE) as source, open(truncated, "w") as target:
            target.write(source.read()[:200])
        with self.assertRaises(DataDecodingError):
            pickler.load_json(truncated)
        with self.assertRaises(DataDecodingError):
            pickler.decode_certificate({})
        with self.assertRaises(DataDecodingError):
            pickler.decode_catalog([{"label": "x"}])

    def test_catalog_cache(self):
        """
        Description
        Save a one-entry catalog with dill and load it under both policies.

        Expected
        The same policy returns the entry, the other policy invalidates the cache.

        :return:
        """
        filename = os.path.join(self.directory, "cache", "catalog.dill")
        entries = [TripleCatalogEntry("test", "III", 1, torus_system(), "wscca")]
        pickler.save_catalog(entries, Policy(), filename)
        loaded = pickler.load_catalog(Policy(), filename)
        self.assertEqual(loaded[0].label, "test")
        self.assertTrue(isomorphic(loaded[0].system, entries[0].system))
        self.assertIsNone(pickler.load_catalog(Policy(allow_reflection=False), filename))
        self.assertIsNone(pickler.load_catalog(Policy(), os.path.join(self.directory, "missing.dill")))

    def test_catalog_export(self):
        entries = [TripleCatalogEntry("test", "III", 1, torus_system(), "wscca")]
        filename = os.path.join(self.directory, "catalog.json")
        pickler.save_json(pickler.encode_catalog(entries), filename)
        loaded = pickler.decode_catalog(pickler.load_json(filename))
        self.assertEqual((loaded[0].label, loaded[0].strategy), ("test", "wscca"))


class CommandLineTests(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)
        ui_helpers.create_logger(verbose=True)

    def test_check_exit_codes(self):
        """
        Description
        Check the shipped certificate, the same curves under the disjoint-curve
        criterion, and a truncated file.

        Expected
        Exit codes 0, 1 and 2.

        :return:
        """
        self.assertEqual(cli.main(["check", TORUS_FILE]), 0)
        raw = pickler.load_json(TORUS_FILE)
        raw["certificate"]["criterion"] = "wsccb"
        inconclusive = os.path.join(self.directory, "wsccb.json")
        with open(inconclusive, "w") as output_file:
            json.dump(raw, output_file)
        self.assertEqual(cli.main(["check", inconclusive]), 1)
        truncated = os.path.join(self.directory, "truncated.json")
        with open(TORUS_FILE) as source, open(truncated, "w") as target:
            target.write(source.read()[:100])
        self.assertEqual(cli.main(["check", truncated]), 2)

    def test_usage_error(self):
        with self.assertRaises(SystemExit) as raised:
            cli.main(["catalog", "--type", "V"])
        self.assertEqual(raised.exception.code, 2)

    def test_arithmetic_commands(self):
        self.assertEqual(cli.main(["--json", "flm-bound", "--lambda", "1.45", "--k", "1"]), 0)
        self.assertEqual(cli.main(["power-subgroup", "--L", "12", "--n", "6"]), 1)
        self.assertEqual(cli.main(["power-subgroup", "--L", "12", "--n", "5"]), 0)

    def test_module_commands(self):
        self.assertEqual(cli.main(["polygon", "--n", "10", "--pairing", "opposite", "--k", "1"]), 0)
        self.assertEqual(cli.main(["polygon", "--n", "10", "--k", "5"]), 2)
        word = "@" + os.path.join(Constants.DATA_DIRECTORY, "word_genus3.txt")
        self.assertEqual(cli.main(["symplectic", "--g", "3", "--word", word]), 0)
        self.assertEqual(cli.main(["symplectic", "--g", "3", "--matrix", "M", "--periodic", "other-periodic"]), 0)
        self.assertEqual(cli.main(["symplectic", "--g", "3", "--matrix", "M", "--periodic", "hyperelliptic"]), 1)
        matrix = "@" + os.path.join(Constants.DATA_DIRECTORY, "thurston_single.txt")
        self.assertEqual(cli.main(["--json", "thurston", "--N", matrix, "--word", "ABBB", "--k-list", "1,2,3"]), 0)

    def test_polygon_certificate_output(self):
        filename = os.path.join(self.directory, "polygon.json")
        self.assertEqual(cli.main(["polygon", "--n", "8", "--k", "1", "--output", filename]), 0)
        self.assertEqual(cli.main(["check", filename]), 0)


if __name__ == '__main__':
    unittest.main()
