"""
tests/test_indecomp.py

To run, open a terminal in the root project folder.
Activate your virtual environment if needed, and run one of the following commands:

    py tests\test_indecomp.py
    python3 tests\test_indecomp.py

This test suite checks semi-convergents, the window S_0 of indecomposables,
M_D and M*, both indecomposability tests, the exact identities and bounds for
N_i, elements of small norm and the principal-ideal bounds.
"""

import unittest
import pathlib
import sys
from fractions import Fraction

# For local imports, temporarily add project root to Python sys.path
PROJECT_ROOT = pathlib.Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.append(str(PROJECT_ROOT))

from scripts.contfrac import expand  # noqa: E402
from scripts.indecomp import (  # noqa: E402
    M_D,
    M_star,
    M_star_both,
    Ni,
    Ti,
    check_sum_bounds,
    classify_small_norm,
    enumerate_S0,
    estimate_sum_bounds,
    ideals_below_sqrt_delta,
    is_indecomposable_bruteforce,
    is_indecomposable_fast,
    norm_semiconvergent_formula,
    parse_eps,
    semiconvergent,
    square_root_of_indecomposable,
    verify_bounds_prop6,
    verify_lemma_prop5,
    verify_norm_bounds,
    verify_norm_identities,
    window_indices,
    window_shift,
)
from scripts.quadfield import QuadInt, make_context, totally_positive_up_to_trace  # noqa: E402
from utils.errors import (  # noqa: E402
    BadIndexParity,
    BadParameter,
    IndexOutOfRange,
    MissingIdealData,
    NotTotallyPositive,
    ROutOfRange,
)

SAMPLE_D = [2, 3, 5, 6, 7, 10, 13, 15, 19, 21, 31, 43, 46, 94]


def field(D):
    ctx = make_context(D)
    return ctx, expand(ctx)


class TestNormsAndTraces(unittest.TestCase):

    def test_Ni_for_D15(self):
        _, cf = field(15)
        self.assertEqual([Ni(cf, i) for i in range(-1, 5)], [1, 6, 1, 6, 1, 6], "N_i for D=15 alternate 1 and 6")
        with self.assertRaises(IndexOutOfRange):
            Ni(cf, 5)

    def test_Ti(self):
        _, cf = field(15)
        self.assertEqual(Ti(cf, 0), 3, "T_0 for D=15")
        self.assertEqual(Ti(cf, 1), -3, "T_1 for D=15")
        _, cf = field(5)
        self.assertEqual(Ti(cf, 0), 1, "T_0 for D=5")
        with self.assertRaises(IndexOutOfRange):
            Ti(cf, -1)


class TestSemiConvergents(unittest.TestCase):

    def test_values(self):
        ctx, cf = field(2)
        self.assertEqual(semiconvergent(cf, -1, 0).value, ctx.one, "alpha_(-1,0) = 1")
        self.assertEqual(semiconvergent(cf, -1, 1).value, QuadInt(2, 1, ctx), "alpha_(-1,1) = 2 + sqrt2")
        self.assertEqual(semiconvergent(cf, -1, 2).value, cf.alpha(1), "alpha_(-1,u_1) = alpha_1")

    def test_errors(self):
        _, cf = field(2)
        with self.assertRaises(BadIndexParity):
            semiconvergent(cf, 0, 0)
        with self.assertRaises(ROutOfRange):
            semiconvergent(cf, -1, 3)
        with self.assertRaises(ROutOfRange):
            semiconvergent(cf, -1, -1)

    def test_norm_formula_matches(self):
        for D in SAMPLE_D:
            _, cf = field(D)
            for i in range(-1, 2 * cf.s - 2, 2):
                for r in range(cf.u(i + 2) + 1):
                    self.assertEqual(
                        norm_semiconvergent_formula(cf, i, r),
                        semiconvergent(cf, i, r).value.norm(),
                        f"Norm formula for D={D}, i={i}, r={r}",
                    )
        _, cf = field(2)
        self.assertEqual(norm_semiconvergent_formula(cf, -1, 1), 2, "N(2 + sqrt2) = 2")


class TestWindow(unittest.TestCase):

    def test_known_windows(self):
        ctx, cf = field(2)
        window = enumerate_S0(cf)
        self.assertEqual(window.values, (ctx.one, QuadInt(2, 1, ctx)), "S_0 for D=2")
        self.assertEqual((window.M_D, window.kappa), (2, 2), "M_D and kappa for D=2")

        ctx, cf = field(15)
        window = enumerate_S0(cf)
        self.assertEqual(window.values, (ctx.one,), "S_0 for D=15")
        self.assertEqual((window.M_D, window.kappa), (1, 1), "M_D and kappa for D=15")

        ctx, cf = field(5)
        self.assertEqual(enumerate_S0(cf).values, (ctx.one,), "S_0 for D=5")
        self.assertEqual(M_D(cf), 1, "M_D for D=5")

    def test_size_equals_M_D(self):
        for D in range(2, 400):
            try:
                ctx, cf = field(D)
            except ValueError:
                continue
            self.assertEqual(len(enumerate_S0(cf).elements), M_D(cf), f"|S_0| = M_D for D={D}")

    def test_window_indices(self):
        _, cf = field(19)
        self.assertEqual(window_indices(cf), [-1, 1, 3], "s = 6: odd i from -1 to s - 3")
        _, cf = field(2)
        self.assertEqual(window_indices(cf), [-1], "s = 1: odd i from -1 to 2s - 3")


class TestMStar(unittest.TestCase):

    def test_small_fields(self):
        _, cf = field(5)
        self.assertEqual(M_star_both(cf, Fraction(1, 100)), (1, 0), "D=5: 2u_0 = 2 passes, u_s = 1 does not")
        self.assertEqual(M_star(cf, "1/100", "b"), 0, "Convention b for D=5")
        _, cf = field(15)
        self.assertEqual(M_star_both(cf, "1/100"), (0, 0), "D=15: u_1 = 1 is below 15^(27/200)")

    def test_large_partial_quotients_count(self):
        # sqrt(n^2 + 1) = [n; 2n] and sqrt(n^2 + 2) = [n; n, 2n]
        _, cf = field(122)
        self.assertEqual(cf.period, (22,), "Period of sqrt 122")
        self.assertEqual(M_star_both(cf, "1/100"), (22, 22), "D=122: u_1 = 22 is large under both conventions")
        _, cf = field(51)
        self.assertEqual(cf.period, (7, 14), "Period of sqrt 51")
        self.assertEqual(M_star_both(cf, "1/100"), (7, 7), "D=51: u_1 = 7 is large")

    def test_bad_eps(self):
        _, cf = field(5)
        for bad in ("0", "-1/3", "x", "1/0"):
            with self.assertRaises(BadParameter):
                M_star_both(cf, bad)
        self.assertEqual(parse_eps("3/200"), Fraction(3, 200), "parse_eps keeps the exact fraction")
        with self.assertRaises(BadParameter):
            parse_eps(Fraction(1, 10**9))
        with self.assertRaises(BadParameter):
            parse_eps(float("nan"))

    def test_float_eps(self):
        self.assertEqual(parse_eps(0.01), Fraction(1, 100), "0.01 is read as 1/100")
        _, cf = field(5)
        self.assertEqual(M_star_both(cf, 0.01), M_star_both(cf, "1/100"), "Float and string eps agree for D=5")
        _, cf = field(122)
        self.assertEqual(M_star(cf, 0.01, "b"), 22, "Float eps for D=122")
        with self.assertRaises(BadParameter):
            M_star(cf, "1/100", "c")


class TestIndecomposability(unittest.TestCase):

    def test_examples(self):
        ctx, cf = field(5)
        eps = QuadInt(1, 1, ctx)
        self.assertTrue(is_indecomposable_fast(cf, eps), "Units are indecomposable")
        self.assertTrue(is_indecomposable_bruteforce(ctx, eps), "Units are indecomposable (brute force)")
        ctx, cf = field(2)
        two = ctx.element(2)
        self.assertFalse(is_indecomposable_fast(cf, two), "2 = 1 + 1")
        self.assertFalse(is_indecomposable_bruteforce(ctx, two), "2 = 1 + 1 (brute force)")
        self.assertTrue(is_indecomposable_fast(cf, QuadInt(2, 1, ctx)), "2 + sqrt2 is indecomposable")

    def test_fast_agrees_with_bruteforce(self):
        for D in (2, 3, 5, 6, 7, 10, 13, 15):
            ctx, cf = field(D)
            for x in totally_positive_up_to_trace(ctx, 14):
                self.assertEqual(
                    is_indecomposable_fast(cf, x),
                    is_indecomposable_bruteforce(ctx, x),
                    f"Indecomposability of {x} for D={D}",
                )

    def test_window_shift(self):
        ctx, cf = field(2)
        sigma, k = window_shift(cf, QuadInt(2, 1, ctx) * cf.eps * cf.eps)
        self.assertEqual((sigma, k), (QuadInt(2, 1, ctx), 2), "(2 + sqrt2) eps^2 shifts back to 2 + sqrt2")

    def test_not_totally_positive(self):
        ctx, cf = field(2)
        with self.assertRaises(NotTotallyPositive):
            is_indecomposable_fast(cf, QuadInt(1, 1, ctx))
        with self.assertRaises(NotTotallyPositive):
            is_indecomposable_bruteforce(ctx, QuadInt(-1, 0, ctx))


class TestIdentitiesAndBounds(unittest.TestCase):

    def test_identities_hold(self):
        for D in SAMPLE_D:
            _, cf = field(D)
            for i in range(0, 2 * cf.s + 1):
                self.assertTrue(verify_norm_identities(cf, i), f"Identities for N_i, T_i, D={D}, i={i}")
                self.assertTrue(verify_norm_bounds(cf, i), f"Bounds for N_i, D={D}, i={i}")

    def test_index_range(self):
        _, cf = field(2)
        with self.assertRaises(IndexOutOfRange):
            verify_norm_identities(cf, 3)

    def test_older_names(self):
        self.assertIs(verify_lemma_prop5, verify_norm_identities, "Older name of the identity check")
        self.assertIs(verify_bounds_prop6, verify_norm_bounds, "Older name of the bound check")
        _, cf = field(19)
        for i in range(0, 2 * cf.s + 1):
            self.assertTrue(verify_lemma_prop5(cf, i) and verify_bounds_prop6(cf, i), f"Older names agree for D=19, i={i}")


class TestSmallNorms(unittest.TestCase):

    def test_D19(self):
        ctx, cf = field(19)
        report = classify_small_norm(ctx, cf)
        self.assertEqual(report.bound, 4, "Norms below sqrt(76)/2 are at most 4")
        self.assertEqual([e.norm for e in report.entries], [1, 2, 3, 3, 4], "Principal ideals of norm <= 4 for D=19")
        self.assertEqual(report.entries[0].index, -1, "Norm 1 comes from alpha_-1 = 1")
        self.assertEqual(report.entries[-1].multiplier, 2, "Norm 4 is 2 * 1")

    def test_many_fields(self):
        for D in SAMPLE_D:
            ctx, cf = field(D)
            report = classify_small_norm(ctx, cf)
            self.assertTrue(all(e.multiplier >= 1 for e in report.entries), f"Classification for D={D}")


class TestSumBounds(unittest.TestCase):

    def test_bounds_hold(self):
        for D in SAMPLE_D:
            ctx, cf = field(D)
            report = estimate_sum_bounds(cf, ideals_below_sqrt_delta(ctx, cf))
            self.assertTrue(report.holds, f"Ideal-sum bounds for D={D}")

    def test_exact_comparison(self):
        ctx, cf = field(2)
        check = check_sum_bounds(cf.sum_u, ideals_below_sqrt_delta(ctx, cf), ctx.Delta)
        self.assertEqual(check.upper_sum, Fraction(3, 2), "1/1 + 1/2 for norms below sqrt 8")
        self.assertEqual(check.lower_sum, Fraction(1), "Only norm 1 lies below sqrt(8)/2")
        self.assertEqual(check.count, 2, "Two principal ideals below sqrt 8")

    def test_missing_records(self):
        _, cf = field(2)
        with self.assertRaises(MissingIdealData):
            estimate_sum_bounds(cf, [])
        with self.assertRaises(MissingIdealData):
            estimate_sum_bounds(cf, None)


class TestSquareRoots(unittest.TestCase):

    def test_square_roots_are_convergents(self):
        ctx, cf = field(2)
        report = square_root_of_indecomposable(ctx, cf, 6)
        self.assertIn(ctx.one, report.roots, "1 squares to the indecomposable 1")
        self.assertIn(QuadInt(1, 1, ctx), report.roots, "(1 + sqrt2)^2 = eps is indecomposable")
        ctx, cf = field(19)
        report = square_root_of_indecomposable(ctx, cf, 8)
        self.assertGreater(report.checked, 0, "The box is searched")


if __name__ == "__main__":
    unittest.main(verbosity=2)
