"""
Norms of Semi-Convergents as a Quadratic Polynomial
File: scripts/sieve.py

For fixed odd i the norm of alpha_{i,r} is a quadratic polynomial f(r) with
integer coefficients, positive exactly on 0 <= r <= u_{i+2}. Its discriminant
is Delta, which keeps the number of roots modulo prime powers at most two.
Counting the n <= X with f(n) k-th power free, together with the local
densities 1 - rho_f(p^k)/p^k, shows that many semi-convergents have norms
that cannot be absorbed by squares of units.
"""

# Imports from Python Standard Library
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

# Imports from external packages
import mpmath
from sympy import factorint, isprime, primerange
from sympy.ntheory import sqrt_mod

# Local imports
from scripts.contfrac import CFExpansion
from scripts.indecomp import Ni, Ti, enumerate_S0, semiconvergent
from scripts.quadfield import unit_normalize
from utils.errors import BadIndexParity, BadParameter, InvariantViolation, NotPrime, XOutOfRange
from utils.logger import logger

EULER_PRIME_LIMIT = 10**4
DIRECT_COUNT_LIMIT = 10**5


@dataclass(frozen=True)
class NormPoly:
    """f(r) = A0 + A1*r + A2*r^2, the norm of alpha_{i,r}."""

    A0: int
    A1: int
    A2: int
    i: int
    N: int
    T: int
    u: int

    def __call__(self, r: int) -> int:
        return self.A0 + self.A1 * r + self.A2 * r * r

    def derivative(self, r: int) -> int:
        return self.A1 + 2 * self.A2 * r

    @property
    def discriminant(self) -> int:
        return self.A1 * self.A1 - 4 * self.A0 * self.A2

    def to_dict(self) -> dict:
        return {"i": self.i, "A0": self.A0, "A1": self.A1, "A2": self.A2, "N": self.N, "T": self.T, "u": self.u}


@dataclass(frozen=True)
class PowerFreeCount:
    count: int
    X: int
    k: int
    density: Fraction
    euler_floor: mpmath.mpf
    zeta_floor: mpmath.mpf

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "X": self.X,
            "k": self.k,
            "density": float(self.density),
            "euler_floor": float(self.euler_floor),
            "zeta_floor": float(self.zeta_floor),
        }


@dataclass(frozen=True)
class HenselCheck:
    i: int
    p: int
    k: int
    rho: int
    holds: bool


def f_poly(cf: CFExpansion, i: int) -> NormPoly:
    """
    The norm polynomial of alpha_{i,r} from N = N_{i+1} and T = T_{i+1}.

    D = 2, 3 (mod 4): f(r) = (D - T^2)/N + 2T r - N r^2
    D = 1 (mod 4):    f(r) = ((D - 1)/4 + T - T^2)/N + (2T - 1) r - N r^2

    Raises:
        BadIndexParity: If i is not an odd index >= -1.
        InvariantViolation: If f disagrees with the norms or its positivity window is not [0, u].
    """
    if i < -1 or i % 2 != 1:
        raise BadIndexParity(f"f(r) needs an odd index >= -1, got {i}")
    D = cf.ctx.D
    N, T = Ni(cf, i + 1), Ti(cf, i + 1)
    u = cf.u(i + 2)
    if cf.ctx.case == 1:
        top, A1 = (D - 1) // 4 + T - T * T, 2 * T - 1
    else:
        top, A1 = D - T * T, 2 * T
    A0, remainder = divmod(top, N)
    if remainder != 0:
        raise InvariantViolation(f"D={D}, i={i}: constant term {top} is not divisible by N = {N}")
    f = NormPoly(A0=A0, A1=A1, A2=-N, i=i, N=N, T=T, u=u)
    for r in range(u + 1):
        if f(r) != semiconvergent(cf, i, r).value.norm():
            raise InvariantViolation(f"D={D}, i={i}: f({r}) = {f(r)} differs from the norm of alpha_({i},{r})")
    for r in range(-2, u + 3):
        if (f(r) > 0) != (0 <= r <= u):
            raise InvariantViolation(f"D={D}, i={i}: f({r}) = {f(r)} breaks the positivity window [0, {u}]")
    return f


def rho_f(f: NormPoly, d: int) -> int:
    """Number of residues n mod d with f(n) = 0 (mod d), by scanning."""
    if d < 1:
        raise BadParameter(f"modulus must be positive, got {d}")
    return sum(1 for n in range(d) if f(n) % d == 0)


def _roots_mod_prime(f: NormPoly, p: int) -> set:
    if p == 2 or f.A2 % p == 0:
        return {n for n in range(p) if f(n) % p == 0}
    roots = set()
    inverse = pow(2 * f.A2, -1, p)
    for s in sqrt_mod(f.discriminant % p, p, all_roots=True) or []:
        roots.add(((-f.A1 + int(s)) * inverse) % p)
    return roots


def rho_prime_power(f: NormPoly, p: int, k: int) -> int:
    """
    rho_f(p^k) by Hensel lifting.

    Roots with f'(r) not divisible by p lift uniquely (one Newton step per
    level); the remaining roots are lifted by trying all p extensions.
    """
    if k < 1:
        raise BadParameter(f"k must be positive, got {k}")
    roots = _roots_mod_prime(f, p)
    modulus = p
    for _ in range(k - 1):
        lifted = set()
        for r in roots:
            slope = f.derivative(r) % p
            if slope:
                t = (-(f(r) // modulus) * pow(slope, -1, p)) % p
                lifted.add(r + t * modulus)
            else:
                lifted.update(r + t * modulus for t in range(p) if f(r + t * modulus) % (modulus * p) == 0)
        roots = lifted
        modulus *= p
    return len(roots)


def verify_hensel_bound(f: NormPoly, p: int, k: int) -> bool:
    """
    rho_f(p^k) <= 2.

    The count comes from Hensel lifting; for p^k up to DIRECT_COUNT_LIMIT it is
    also recounted by scanning all residues and the two must agree.

    Raises:
        NotPrime: If p is not prime.
        BadParameter: If k < 2.
    """
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 2:
        raise BadParameter(f"k must be at least 2, got {k}")
    rho = rho_prime_power(f, p, k)
    if p**k <= DIRECT_COUNT_LIMIT and rho != rho_f(f, p**k):
        raise InvariantViolation(f"i={f.i}: Hensel count {rho} for {p}^{k} differs from the direct count {rho_f(f, p ** k)}")
    return rho <= 2


def hensel_sweep(cf: CFExpansion, primes: Iterable[int], ks: Iterable[int]) -> list[HenselCheck]:
    """verify_hensel_bound for every odd i from -1 to 2s - 3 and every (p, k)."""
    primes, ks = list(primes), list(ks)
    checks = []
    for i in range(-1, 2 * cf.s - 2, 2):
        f = f_poly(cf, i)
        for p in primes:
            for k in ks:
                checks.append(HenselCheck(i, p, k, rho_prime_power(f, p, k), verify_hensel_bound(f, p, k)))
    return checks


def is_power_free(n: int, k: int) -> bool:
    return all(e < k for e in factorint(n).values())


def count_power_free(f: NormPoly, k: int, X: int) -> PowerFreeCount:
    """
    Count 1 <= n <= X with f(n) k-th power free.

    The count starts at n = 1, so n = 0 is never counted even though f(0)
    is defined, and the density is count/X.

    Args:
        f (NormPoly): Norm polynomial, positive on [0, u].
        k (int): The power, at least 2 (4 in the lower-bound argument).
        X (int): Upper end, 1 <= X <= u.

    Returns:
        PowerFreeCount: The count, count/X, the Euler product of
        1 - rho_f(p^k)/p^k over p <= 10^4, and zeta(k)^-3.

    Raises:
        XOutOfRange: If X is outside [1, u].
    """
    if X < 1 or X > f.u:
        raise XOutOfRange(f"X = {X} outside [1, {f.u}]")
    if k < 2:
        raise BadParameter(f"k must be at least 2, got {k}")
    count = sum(1 for n in range(1, X + 1) if is_power_free(f(n), k))
    euler = mpmath.mpf(1)
    for p in primerange(2, EULER_PRIME_LIMIT + 1):
        euler *= 1 - mpmath.mpf(rho_prime_power(f, int(p), k)) / mpmath.mpf(int(p)) ** k
    result = PowerFreeCount(
        count=count,
        X=X,
        k=k,
        density=Fraction(count, X),
        euler_floor=euler,
        zeta_floor=mpmath.zeta(k) ** -3,
    )
    logger.debug(f"i={f.i}: {count} of {X} values are {k}-th power free")
    return result


@dataclass(frozen=True)
class PowerFreeWindow:
    k: int
    pairs: tuple[tuple[int, int, int], ...]  # (i, r, norm)


def power_free_window(cf: CFExpansion, k: int = 4) -> PowerFreeWindow:
    """
    The (i, r) in the S_0 window whose norm is k-th power free.

    Their alpha_{i,r} are checked to be pairwise inequivalent modulo squares of
    units, so each needs its own coefficient in a diagonal universal form.
    """
    square = cf.eps0 * cf.eps0
    pairs = []
    seen: dict = {}
    for element in enumerate_S0(cf).elements:
        n = element.value.norm()
        if not is_power_free(n, k):
            continue
        key = unit_normalize(element.value, square)
        if key in seen:
            raise InvariantViolation(f"D={cf.ctx.D}: alpha_({element.i},{element.r}) and alpha{seen[key]} differ by a square of a unit")
        seen[key] = (element.i, element.r)
        pairs.append((element.i, element.r, n))
    return PowerFreeWindow(k=k, pairs=tuple(pairs))
