"""
tests/test_universal.py

To run, open a terminal in the root project folder.
Activate your virtual environment if needed, and run one of the following commands:

    py tests\test_universal.py
    python3 tests\test_universal.py

This test suite checks the construction of the 8*M_D-variable diagonal form:
decomposition into indecomposables, reduction of polynomials in eps,
four-square representations, the constructed witnesses and the
independent brute-force search.
"""

import unittest
import random
import pathlib
import sys
from fractions import Fraction

# For local imports, temporarily add project root to Python sys.path
PROJECT_ROOT = pathlib.Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.append(str(PROJECT_ROOT))

from scripts.contfrac import expand  # noqa: E402
from scripts.indecomp import is_indecomposable_fast  # noqa: E402
from scripts.quadfield import QuadInt, make_context, totally_positive_up_to_trace, unit_power  # noqa: E402
from scripts.universal import (  # noqa: E402
    DiagonalForm,
    UnitPoly,
    claim_coefficients,
    collect_by_S0,
    construct_universal_form,
    decompose_indecomposables,
    four_square,
    mdiag_lower_bounds,
    represent,
    represent_in_octad,
    unit_reduce,
    witness_via_construction,
)
from utils.errors import (  # noqa: E402
    InvariantViolation,
    NotTotallyPositive,
    NotTotallyPositiveTarget,
    ZeroInput,
)


def field(D):
    ctx = make_context(D)
    return ctx, expand(ctx)


class TestDecomposition(unittest.TestCase):

    def test_sum_of_indecomposables(self):
        ctx, cf = field(2)
        x = cf.eps + QuadInt(2, 1, ctx)
        parts = decompose_indecomposables(ctx, cf, x)
        self.assertEqual(sum(parts, ctx.zero), x, "Parts should sum to x")
        for part in parts:
            self.assertTrue(is_indecomposable_fast(cf, part), f"{part} should be indecomposable")

    def test_many_targets(self):
        for D in (3, 5, 7, 15):
            ctx, cf = field(D)
            for x in totally_positive_up_to_trace(ctx, 16):
                parts = decompose_indecomposables(ctx, cf, x)
                self.assertEqual(sum(parts, ctx.zero), x, f"Decomposition of {x} for D={D}")

    def test_collect_for_D15(self):
        ctx, cf = field(15)
        five = ctx.element(5)
        collected = collect_by_S0(ctx, cf, decompose_indecomposables(ctx, cf, five))
        self.assertEqual(list(collected), [ctx.one], "S_0 = {1} for D=15")
        self.assertEqual(collected[ctx.one].evaluate(cf.eps), five, "The polynomial evaluates to 5")

    def test_rejects_non_totally_positive(self):
        ctx, cf = field(2)
        with self.assertRaises(NotTotallyPositive):
            decompose_indecomposables(ctx, cf, QuadInt(0, 1, ctx))


class TestUnitReduce(unittest.TestCase):

    def setUp(self):
        self.ctx, self.cf = field(5)

    def test_examples(self):
        self.assertEqual(unit_reduce(self.ctx, self.cf, UnitPoly.from_dict({0: 1, 2: 1})), (3, 0, 1), "1 + eps^2 = 3 eps")
        self.assertEqual(unit_reduce(self.ctx, self.cf, UnitPoly.monomial(3, 7)), (7, 0, 3), "A monomial is already reduced")
        self.assertEqual(unit_reduce(self.ctx, self.cf, UnitPoly.from_dict({-1: 1, 1: 1})), (3, 0, 0), "eps^-1 + eps = Tr eps")

    def test_wide_polynomials(self):
        eps = self.cf.eps
        polys = [
            {0: 5, 6: 1},
            {-3: 2, 0: 7, 4: 11},
            {1: 1, 2: 3, 3: 1, 9: 4},
            {-5: 9, 5: 9},
        ]
        for terms in polys:
            e = UnitPoly.from_dict(terms)
            c, d, i = unit_reduce(self.ctx, self.cf, e)
            self.assertGreaterEqual(min(c, d), 0, f"Nonnegative coefficients for {e}")
            self.assertEqual(unit_power(eps, i) * c + unit_power(eps, i + 1) * d, e.evaluate(eps), f"Reduction of {e}")

    def test_random_polynomials(self):
        rng = random.Random(20240611)
        for D in (2, 5, 15, 19):
            ctx, cf = field(D)
            eps = cf.eps
            for _ in range(200):
                exponents = rng.sample(range(-8, 9), rng.randint(1, 5))
                e = UnitPoly.from_dict({i: rng.randint(1, 30) for i in exponents})
                c, d, i = unit_reduce(ctx, cf, e)
                self.assertGreaterEqual(min(c, d), 0, f"Nonnegative coefficients for {e}, D={D}")
                self.assertEqual(unit_power(eps, i) * c + unit_power(eps, i + 1) * d, e.evaluate(eps), f"Reduction of {e}, D={D}")

    def test_random_claim_coefficients(self):
        rng = random.Random(7)
        for D in (2, 3, 5, 15, 19, 46):
            ctx, cf = field(D)
            eps = cf.eps
            for _ in range(20):
                n = rng.randint(2, 12)
                b = claim_coefficients(eps.trace(), n)
                self.assertEqual(len(b), n - 1, f"One coefficient per exponent 1..{n - 1}")
                self.assertTrue(all(x >= 0 for x in b), f"Nonnegative coefficients for n={n}, D={D}")
                total = sum((unit_power(eps, j + 1) * x for j, x in enumerate(b)), ctx.zero)
                self.assertEqual(total, unit_power(eps, n) + 1, f"eps^{n} + 1 for D={D}")

    def test_zero_polynomial(self):
        with self.assertRaises(ZeroInput):
            unit_reduce(self.ctx, self.cf, UnitPoly.from_dict({}))

    def test_claim_coefficients(self):
        self.assertEqual(claim_coefficients(3, 2), [3], "eps^2 + 1 = 3 eps")
        self.assertEqual(claim_coefficients(3, 3), [2, 2], "eps^3 + 1 = 2 eps + 2 eps^2")


class TestFourSquares(unittest.TestCase):

    def test_small_values(self):
        self.assertEqual(four_square(0), (0, 0, 0, 0), "0 = 0 + 0 + 0 + 0")
        self.assertEqual(four_square(3), (0, 1, 1, 1), "3 = 0 + 1 + 1 + 1")
        self.assertEqual(four_square(7), (1, 1, 1, 2), "7 = 1 + 1 + 1 + 4")

    def test_sums(self):
        for n in list(range(0, 200)) + [10**6 + 7, 2**31 - 1]:
            self.assertEqual(sum(t * t for t in four_square(n)), n, f"Four squares for {n}")


class TestOctad(unittest.TestCase):

    def test_square_of_eps(self):
        ctx, cf = field(2)
        values = represent_in_octad(ctx, cf, UnitPoly.monomial(2))
        self.assertEqual(values[0], cf.eps, "x1 = eps for e = eps^2")
        self.assertTrue(all(not v for v in values[1:]), "The other variables vanish")

    def test_one(self):
        ctx, cf = field(5)
        values = represent_in_octad(ctx, cf, UnitPoly.monomial(0))
        self.assertEqual(values, (ctx.one,) + (ctx.zero,) * 7, "e = 1 uses x1 = 1 only")

    def test_odd_exponent(self):
        ctx, cf = field(5)
        e = UnitPoly.from_dict({0: 1, 2: 1})
        values = represent_in_octad(ctx, cf, e)
        total = sum((v * v for v in values[:4]), ctx.zero) + cf.eps * sum((v * v for v in values[4:]), ctx.zero)
        self.assertEqual(total, e.evaluate(cf.eps), "Octad evaluates to 3 eps")


class TestUniversalForm(unittest.TestCase):

    def test_coefficients(self):
        ctx, cf = field(15)
        form = construct_universal_form(ctx, cf)
        self.assertEqual(form.coeffs, (ctx.one,) * 4 + (QuadInt(4, 1, ctx),) * 4, "Form for D=15")
        ctx, cf = field(2)
        self.assertEqual(construct_universal_form(ctx, cf).arity, 16, "Form for D=2 has 16 variables")
        ctx, cf = field(5)
        form = construct_universal_form(ctx, cf)
        self.assertEqual(form.coeffs[4:], (QuadInt(1, 1, ctx),) * 4, "Second octad of D=5 uses eps = (3 + sqrt5)/2")

    def test_witnesses(self):
        for D in (2, 3, 5, 6, 15):
            ctx, cf = field(D)
            form = construct_universal_form(ctx, cf)
            for x in totally_positive_up_to_trace(ctx, 12):
                values = witness_via_construction(ctx, cf, x)
                self.assertEqual(form.evaluate(values), x, f"Witness for {x}, D={D}")

    def test_search_agrees(self):
        for D in (2, 5):
            ctx, cf = field(D)
            form = construct_universal_form(ctx, cf)
            for x in totally_positive_up_to_trace(ctx, 8):
                witness = represent(ctx, form, x)
                self.assertIsNotNone(witness, f"{x} should be represented for D={D}")
                self.assertEqual(form.evaluate(witness), x, f"Search witness for {x}, D={D}")

    def test_universal_up_to_trace_40(self):
        ctx, cf = field(2)
        form = construct_universal_form(ctx, cf)
        for x in totally_positive_up_to_trace(ctx, 40):
            self.assertEqual(form.evaluate(witness_via_construction(ctx, cf, x)), x, f"Witness for {x}, D=2")
        ctx, cf = field(5)
        form = construct_universal_form(ctx, cf)
        for x in totally_positive_up_to_trace(ctx, 40):
            witness = represent(ctx, form, x)
            self.assertIsNotNone(witness, f"{x} should be represented for D=5")
            self.assertEqual(form.evaluate(witness), x, f"Search witness for {x}, D=5")

    def test_search_can_fail(self):
        ctx = make_context(2)
        form = DiagonalForm((ctx.one,))
        self.assertIsNone(represent(ctx, form, QuadInt(2, 1, ctx)), "2 + sqrt2 is not a square")
        self.assertEqual(represent(ctx, form, ctx.zero), [ctx.zero], "0 = 0^2")
        self.assertEqual(represent(ctx, form, QuadInt(3, 2, ctx)), [QuadInt(1, 1, ctx)], "3 + 2 sqrt2 = (1 + sqrt2)^2")

    def test_bad_inputs(self):
        ctx = make_context(2)
        with self.assertRaises(InvariantViolation):
            DiagonalForm((QuadInt(1, 1, ctx),))
        with self.assertRaises(NotTotallyPositiveTarget):
            represent(ctx, DiagonalForm((ctx.one,)), QuadInt(1, 1, ctx))


class TestLowerBounds(unittest.TestCase):

    def test_ratios(self):
        expected = {2: Fraction(1), 5: Fraction(1, 2), 15: Fraction(1, 2)}
        for D, ratio in expected.items():
            _, cf = field(D)
            self.assertEqual(mdiag_lower_bounds(cf, "1/100").ratio_bound, ratio, f"M_D/(kappa s) for D={D}")


if __name__ == "__main__":
    unittest.main(verbosity=2)
