"""
Unit tests for the identity catalog and the verifier

Every family is verified on one representative grid point. The full
catalog on its default grids takes minutes and only runs with
GLASSER_SLOW_TESTS=1.
"""

import math
import os
import unittest

from scipy import special

import identities
from config import PROFILES, TolClass
from identities import (
    Domain,
    EvaluationContext,
    IdentityRecord,
    UnknownIdentityError,
    evaluate_point,
    verify,
    verify_all,
)
from quadrature import IntegrationError, IntegrationResult
from reports import ReportCodec

SLOW = os.environ.get("GLASSER_SLOW_TESTS") == "1"

REPRESENTATIVE_POINTS = {
    "LEMMA1": {"f": "gauss", "y": 1.0},
    "GL-POWER": {"mu": 0.5, "y": 1.0},
    "GL-JNU1": {"nu": 0.0, "y": 1.0, "z": 1.0},
    "GL-JNU": {"nu": 0.5, "y": 1.0, "z": 2.0},
    "PG": {"pair": "exp-gauss"},
    "MOMENT": {"f": "exp", "mu": 0.5},
    "KHG": {"f": "gauss", "nu": 0.0, "z": 1.0},
    "REM-NU0": {"f": "gauss", "z": 1.0},
    "REM-NUMH": {"f": "gauss", "z": 1.0},
    "REM-NUPH": {"f": "gauss_balanced", "z": 1.0},
    "IK-HANKEL": {"f": "gauss", "nu": 0.0, "z": 1.0},
    "E21-WIDDER": {"f": "gauss", "z": 1.0},
    "EX1": {"y": 1.0, "z": 2.0},
    "EX2-DAW": {"y": 0.5, "z": 1.0},
    "REM-E2": {"y": 1.0, "z": 2.0},
    "EX3": {"mu": 0.25, "nu": 0.5, "z": 1.0},
}


def describe_failures(report):
    return "; ".join(f"{r.identity_id} {r.point}: rel={r.rel_residual:.2e} {r.reason}"
                     for r in report.failures())


class TestCatalog(unittest.TestCase):
    """Catalog contents and lookups."""

    def test_size(self):
        self.assertEqual(len(identities.catalog()), 34)
        self.assertEqual(len(identities.families()), 16)
        ids = [r.id for r in identities.catalog()]
        self.assertEqual(len(ids), len(set(ids)))

    def test_every_family_has_an_anchor(self):
        for family in identities.families():
            self.assertTrue(identities.FAMILY_ANCHORS[family])
        for record in identities.catalog():
            self.assertTrue(record.anchor, record.id)
        self.assertIn("=", identities.get("EX3-A").anchor)

    def test_records_of_a_family_share_a_domain(self):
        for family in identities.families():
            members = identities.select([family])
            self.assertTrue(all(m.domain is members[0].domain for m in members), family)

    def test_corrections(self):
        self.assertEqual(len(identities.get("EX1-A").corrections), 2)
        self.assertTrue(identities.get("EX1-C").corrections)
        self.assertIn("pi^(3/2)/2", identities.get("REM-E2").corrections[0])
        self.assertTrue(identities.get("IK-HANKEL-1").corrections)
        self.assertFalse(identities.get("GL-POWER").corrections)

    def test_tolerance_classes(self):
        self.assertIs(identities.get("EX1-B").tol_class, TolClass.NEAR_SINGULAR)
        self.assertIs(identities.get("KHG-2").tol_class, TolClass.OSCILLATORY)
        self.assertIs(identities.get("KHG-1").tol_class, TolClass.SMOOTH)
        self.assertIs(identities.get("LEMMA1").tol_class, TolClass.OSCILLATORY)

    def test_lookup(self):
        self.assertEqual(identities.get("PG-2").family, "PG")
        with self.assertRaises(UnknownIdentityError):
            identities.get("PG-9")
        self.assertEqual([r.id for r in identities.select(["EX3"])], ["EX3-A", "EX3-B"])
        self.assertEqual([r.id for r in identities.select(["EX3-B", "GL-POWER"])], ["GL-POWER", "EX3-B"])
        self.assertEqual(len(identities.select(None)), 34)
        with self.assertRaises(UnknownIdentityError):
            identities.select(["nope"])

    def test_to_dict(self):
        d = identities.get("EX1-A").to_dict()
        self.assertEqual(d["tol_class"], "near_singular")
        self.assertEqual(d["family"], "EX1")


class TestDomains(unittest.TestCase):

    def test_strip_excludes_boundary(self):
        grid = identities.get("GL-JNU1").domain.grid()
        self.assertEqual(len(grid), 12)
        self.assertNotIn(0.5, {p["nu"] for p in grid})
        self.assertEqual(len(identities.get("GL-JNU").domain.grid()), 18)
        self.assertEqual(len(identities.get("KHG-1").domain.grid()), 6)

    def test_explicit_points(self):
        grid = identities.get("EX1-A").domain.grid()
        self.assertEqual(len(grid), 5)
        self.assertIn({"y": 0.9, "z": 1.0}, grid)

    def test_contains(self):
        domain = identities.get("GL-POWER").domain
        self.assertTrue(domain.contains({"mu": 0.5, "y": 3.0}))
        self.assertFalse(domain.contains({"mu": 1.0, "y": 1.0}))
        self.assertFalse(domain.contains({"mu": 0.5}))
        ex1 = identities.get("EX1-A").domain
        self.assertFalse(ex1.contains({"y": 2.0, "z": 1.0}))

    def test_grid_sizes(self):
        self.assertEqual(len(identities.get("EX3-A").domain.grid()), 8)
        self.assertEqual(len(identities.get("GL-POWER").domain.grid()), 9)
        self.assertEqual(len(identities.get("PG-1").domain.grid()), 3)

    def test_custom_domain(self):
        domain = Domain(axes=(("a", (0.0, 0.5, 1.0)),), strips=(("a", 0.0, 1.0),))
        self.assertEqual(domain.grid(), [{"a": 0.5}])


class TestEvaluatePoint(unittest.TestCase):
    """Pass rule on synthetic records."""

    def setUp(self):
        self.profile = PROFILES["default"]
        self.domain = Domain(axes=(("a", (1.0,)),))

    def record(self, lhs, rhs, tol_class=TolClass.SMOOTH):
        return IdentityRecord("T", "T", "lhs = rhs", lhs, rhs, self.domain, tol_class)

    def test_pass(self):
        rec = self.record(lambda p, c: IntegrationResult.exact(1.0 + 1e-10),
                          lambda p, c: IntegrationResult.exact(1.0))
        result = evaluate_point(rec, {"a": 1.0}, EvaluationContext(self.profile))
        self.assertTrue(result.passed)
        self.assertEqual(result.reason, "")
        self.assertEqual(result.tolerance, 1e-8)

    def test_fail(self):
        rec = self.record(lambda p, c: IntegrationResult.exact(1.0),
                          lambda p, c: IntegrationResult.exact(2.0))
        result = evaluate_point(rec, {"a": 1.0}, EvaluationContext(self.profile))
        self.assertFalse(result.passed)
        self.assertAlmostEqual(result.rel_residual, 0.5)
        self.assertIn("residual", result.reason)

    def test_near_zero_uses_absolute_residual(self):
        rec = self.record(lambda p, c: IntegrationResult.exact(1e-12),
                          lambda p, c: IntegrationResult.exact(0.0))
        result = evaluate_point(rec, {"a": 1.0}, EvaluationContext(self.profile))
        self.assertTrue(result.passed)

    def test_unconverged_within_threshold_passes_with_note(self):
        rec = self.record(lambda p, c: IntegrationResult(1.0, 1e-10, 10, False, "exp-sinh"),
                          lambda p, c: IntegrationResult.exact(1.0))
        result = evaluate_point(rec, {"a": 1.0}, EvaluationContext(self.profile))
        self.assertTrue(result.passed)
        self.assertIn("missed", result.reason)

    def test_unconverged_beyond_threshold_fails(self):
        rec = self.record(lambda p, c: IntegrationResult(1.0, 1e-3, 10, False, "exp-sinh"),
                          lambda p, c: IntegrationResult.exact(1.0))
        result = evaluate_point(rec, {"a": 1.0}, EvaluationContext(self.profile))
        self.assertFalse(result.passed)
        self.assertIn("did not converge", result.reason)

    def test_evaluation_error_is_recorded(self):
        def broken(point, ctx):
            raise IntegrationError("integrand is not finite")

        rec = self.record(broken, lambda p, c: IntegrationResult.exact(1.0))
        result = evaluate_point(rec, {"a": 1.0}, EvaluationContext(self.profile))
        self.assertFalse(result.passed)
        self.assertTrue(math.isnan(result.lhs))
        self.assertIn("evaluation error", result.reason)

    def test_numeric_library_errors_are_recorded(self):
        def divide(point, ctx):
            return IntegrationResult.exact(1.0 / (point["a"] - 1.0))

        def invalid(point, ctx):
            raise ValueError("invalid input")

        def overflow(point, ctx):
            return IntegrationResult.exact(math.exp(1e4))

        ok = lambda p, c: IntegrationResult.exact(1.0)
        for rec in (self.record(divide, ok), self.record(ok, invalid), self.record(overflow, ok)):
            result = evaluate_point(rec, {"a": 1.0}, EvaluationContext(self.profile))
            self.assertFalse(result.passed)
            self.assertIn("evaluation error", result.reason)

    def test_context_memo(self):
        ctx = EvaluationContext(self.profile)
        calls = []
        for _ in range(3):
            ctx.memo(("k",), lambda: calls.append(1) or len(calls))
        self.assertEqual(calls, [1])
        self.assertLess(ctx.inner(ctx.smooth).rel, ctx.smooth.rel)


class TestVerify(unittest.TestCase):

    def setUp(self):
        self.profile = PROFILES["default"]

    def test_gl_power_default_grid(self):
        report = verify(identities.get("GL-POWER"), profile=self.profile)
        self.assertEqual(len(report.results), 9)
        self.assertTrue(report.all_passed, describe_failures(report))
        self.assertLess(report.worst_rel, 1e-8)

    def test_out_of_domain_grid_rejected(self):
        with self.assertRaises(ValueError):
            verify(identities.get("GL-POWER"), grid=[{"mu": 1.2, "y": 1.0}], profile=self.profile)
        with self.assertRaises(ValueError):
            verify_all(self.profile, ids=["EX1"], grid_override=[{"y": 2.0, "z": 1.0}])

    def test_tolerance_override(self):
        report = verify(identities.get("EX3-A"), grid=[{"mu": 0.5, "nu": 0.5, "z": 2.0}],
                        profile=self.profile, tol_override=1e-3)
        self.assertEqual(report.results[0].tolerance, 1e-3)
        self.assertTrue(report.all_passed, describe_failures(report))

    def test_corrections_in_metadata(self):
        report = verify(identities.get("REM-E2"), grid=[{"y": 0.5, "z": 1.0}], profile=self.profile)
        self.assertIn("REM-E2", report.metadata["corrections"])
        self.assertEqual(report.metadata["profile"]["name"], "default")

    def test_ordering_is_independent_of_workers(self):
        serial = verify_all(self.profile, ids=["EX3", "GL-POWER"], workers=1)
        parallel = verify_all(self.profile, ids=["EX3", "GL-POWER"], workers=2)
        self.assertEqual(ReportCodec.to_json(serial), ReportCodec.to_json(parallel))
        ids = [r.identity_id for r in serial.results]
        self.assertEqual(ids, ["GL-POWER"] * 9 + ["EX3-A"] * 8 + ["EX3-B"] * 8)


class TestInvariants(unittest.TestCase):
    """Structural checks on individual sides."""

    def setUp(self):
        self.ctx = EvaluationContext(PROFILES["default"])

    def test_power_scaling(self):
        # G{x^(mu-1); c y} = c^(mu-1) G{x^(mu-1); y}
        lhs = identities.get("GL-POWER").lhs
        mu = 0.75
        a = lhs({"mu": mu, "y": 1.0}, self.ctx).value
        b = lhs({"mu": mu, "y": 2.0}, self.ctx).value
        self.assertLess(abs(b / a - 2.0 ** (mu - 1.0)), 1e-9)

    def test_moment_coefficients(self):
        for mu in (0.25, 0.5, 0.75):
            direct = 0.5 * special.gamma(0.5 - mu / 2)
            via_glasser = (math.sqrt(math.pi) / special.gamma(mu / 2)) * 0.5 * special.beta(mu / 2, 0.5 - mu / 2)
            self.assertAlmostEqual(direct, via_glasser, places=12)

    def test_exchange_triangle(self):
        # PG-1 and PG-2 passing implies PG-3 passes at the same pair
        report = verify_all(PROFILES["default"], ids=["PG"])
        by_pair = {}
        for r in report.results:
            by_pair.setdefault(r.point["pair"], {})[r.identity_id] = r.passed
        self.assertEqual(len(by_pair), 3)
        for pair, passed in by_pair.items():
            if passed["PG-1"] and passed["PG-2"]:
                self.assertTrue(passed["PG-3"], pair)

    def test_arcsin_small_y_limit(self):
        z = 2.0
        rhs = identities.get("EX1-A").rhs({"y": 1e-9, "z": z}, self.ctx).value
        self.assertAlmostEqual(rhs, math.pi ** 1.5 / (2.0 * z), places=7)


class TestFamilies(unittest.TestCase):
    """Each family at one representative point, all members sharing images."""

    def setUp(self):
        self.profile = PROFILES["default"]

    def check(self, family):
        report = verify_all(self.profile, ids=[family], grid_override=[REPRESENTATIVE_POINTS[family]])
        self.assertEqual(len(report.results), len(identities.select([family])))
        self.assertTrue(report.all_passed, describe_failures(report))

    def test_lemma(self):
        self.check("LEMMA1")

    def test_lemma_large_argument(self):
        # the nested image limits this point to about 1e-8
        report = verify(identities.get("LEMMA1"), grid=[{"f": "gauss", "y": 2.0}], profile=self.profile)
        self.assertTrue(report.all_passed, describe_failures(report))
        self.assertEqual(report.results[0].tolerance, 1e-6)

    def test_glasser_power(self):
        self.check("GL-POWER")

    def test_glasser_bessel_power(self):
        self.check("GL-JNU1")

    def test_glasser_bessel(self):
        self.check("GL-JNU")

    def test_exchange(self):
        self.check("PG")

    def test_moments(self):
        self.check("MOMENT")

    def test_k_hankel_glasser(self):
        self.check("KHG")

    def test_order_zero(self):
        self.check("REM-NU0")

    def test_order_minus_half(self):
        self.check("REM-NUMH")

    def test_order_plus_half(self):
        self.check("REM-NUPH")

    def test_ik_hankel(self):
        self.check("IK-HANKEL")

    def test_e21_widder(self):
        self.check("E21-WIDDER")

    def test_arcsin_examples(self):
        self.check("EX1")

    def test_dawson(self):
        self.check("EX2-DAW")

    def test_dawson_laplace(self):
        self.check("REM-E2")

    def test_gamma_ratios(self):
        self.check("EX3")


@unittest.skipUnless(SLOW, "set GLASSER_SLOW_TESTS=1 to run the full catalog")
class TestFullCatalog(unittest.TestCase):

    def test_verify_all(self):
        report = verify_all(PROFILES["default"], workers=os.cpu_count() or 1)
        self.assertEqual(len(report.results),
                         sum(len(r.domain.grid()) for r in identities.catalog()))
        self.assertTrue(report.all_passed, describe_failures(report))


if __name__ == "__main__":
    unittest.main()
