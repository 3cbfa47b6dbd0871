"""
tests/test_sieve.py

To run, open a terminal in the root project folder.
Activate your virtual environment if needed, and run one of the following commands:

    py tests\test_sieve.py
    python3 tests\test_sieve.py

This test suite checks the norm polynomials f(r) of semi-convergents, root
counts modulo prime powers, the Hensel bound and the power-free counts.
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
from scripts.quadfield import make_context  # noqa: E402
from scripts.sieve import (  # noqa: E402
    count_power_free,
    f_poly,
    hensel_sweep,
    is_power_free,
    power_free_window,
    rho_f,
    rho_prime_power,
    verify_hensel_bound,
)
from utils.errors import BadIndexParity, BadParameter, NotPrime, XOutOfRange  # noqa: E402


def cf_for(D):
    return expand(make_context(D))


class TestNormPolynomial(unittest.TestCase):

    def test_coefficients(self):
        f = f_poly(cf_for(2), -1)
        self.assertEqual((f.A0, f.A1, f.A2), (1, 2, -1), "f(r) = 1 + 2r - r^2 for D=2")
        self.assertEqual([f(r) for r in range(3)], [1, 2, 1], "Norms of 1, 2 + sqrt2, 3 + 2 sqrt2")
        f = f_poly(cf_for(15), -1)
        self.assertEqual((f.A0, f.A1, f.A2), (1, 6, -6), "f(r) = 1 + 6r - 6r^2 for D=15")

    def test_discriminant_is_Delta(self):
        for D in (2, 3, 5, 7, 13, 19, 21, 43, 46, 94):
            cf = cf_for(D)
            for i in range(-1, 2 * cf.s - 2, 2):
                self.assertEqual(f_poly(cf, i).discriminant, cf.ctx.Delta, f"disc f = Delta for D={D}, i={i}")

    def test_even_index_rejected(self):
        with self.assertRaises(BadIndexParity):
            f_poly(cf_for(2), 0)


class TestRootCounts(unittest.TestCase):

    def test_direct_counts(self):
        f = f_poly(cf_for(2), -1)
        self.assertEqual(rho_f(f, 1), 1, "Every n is a root modulo 1")
        self.assertEqual(rho_f(f, 2), 1, "f(0) = 1, f(1) = 2: one root modulo 2")
        with self.assertRaises(BadParameter):
            rho_f(f, 0)

    def test_hensel_matches_scan(self):
        for D in (2, 5, 19, 21):
            cf = cf_for(D)
            f = f_poly(cf, -1)
            for p in (2, 3, 5, 7):
                for k in (1, 2, 3):
                    if p**k > 400:
                        continue
                    self.assertEqual(rho_prime_power(f, p, k), rho_f(f, p**k), f"rho({p}^{k}) for D={D}")

    def test_hensel_bound(self):
        cf = cf_for(19)
        checks = hensel_sweep(cf, (2, 3, 5, 7, 11, 13), (2, 3, 4))
        self.assertTrue(checks, "The sweep produces checks")
        self.assertTrue(all(c.holds for c in checks), "rho_f(p^k) <= 2 for D=19")

    def test_bad_arguments(self):
        f = f_poly(cf_for(19), -1)
        with self.assertRaises(NotPrime):
            verify_hensel_bound(f, 4, 2)
        with self.assertRaises(BadParameter):
            verify_hensel_bound(f, 3, 1)


class TestPowerFree(unittest.TestCase):

    def test_is_power_free(self):
        self.assertTrue(is_power_free(1, 2), "1 is squarefree")
        self.assertTrue(is_power_free(24, 4), "24 = 2^3 * 3 is fourth-power free")
        self.assertFalse(is_power_free(48, 4), "48 = 2^4 * 3")

    def test_count(self):
        f = f_poly(cf_for(2), -1)
        result = count_power_free(f, 4, 1)
        self.assertEqual((result.count, result.density), (1, Fraction(1)), "f(1) = 2 is fourth-power free")
        self.assertTrue(0 < result.zeta_floor < result.euler_floor <= 1, "zeta(4)^-3 <= Euler product <= 1")

    def test_count_starts_at_one(self):
        for D in (2, 19, 46):
            cf = cf_for(D)
            for i in range(-1, 2 * cf.s - 2, 2):
                f = f_poly(cf, i)
                result = count_power_free(f, 4, f.u)
                expected = sum(1 for n in range(1, f.u + 1) if is_power_free(f(n), 4))
                self.assertEqual(result.count, expected, f"n = 0 is not counted for D={D}, i={i}")
                self.assertEqual(result.density, Fraction(expected, f.u), f"Density is count/X for D={D}, i={i}")

    def test_X_out_of_range(self):
        f = f_poly(cf_for(2), -1)
        with self.assertRaises(XOutOfRange):
            count_power_free(f, 4, 0)
        with self.assertRaises(XOutOfRange):
            count_power_free(f, 4, 3)

    def test_window(self):
        window = power_free_window(cf_for(2), 4)
        self.assertEqual([(i, r) for i, r, _ in window.pairs], [(-1, 0), (-1, 1)], "Both elements of S_0 for D=2")


if __name__ == "__main__":
    unittest.main(verbosity=2)
