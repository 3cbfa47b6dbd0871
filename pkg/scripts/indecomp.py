"""
Indecomposable Elements
File: scripts/indecomp.py

A totally positive integer is indecomposable when it is not a sum of two
totally positive integers. In a real quadratic field these are exactly the
semi-convergents alpha_{i,r} = alpha_i + r*alpha_{i+1} (i odd, 0 <= r <= u_{i+2})
and their conjugates. Up to multiplication by the totally positive unit eps
they form the finite window S_0, whose size is M_D.

This module enumerates S_0, computes N_i, T_i, M_D and M*, decides
indecomposability (by brute force and by the window test), and checks the
exact identities and inequalities relating N_i to the complete quotients c_i.
"""

# Imports from Python Standard Library
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

# Imports from external packages
import mpmath
from mpmath import iv

# Local imports
from scripts.contfrac import CFExpansion, c_surd
from scripts.ideals import PrincipalIdealRecord, enumerate_principal_ideals
from scripts.quadfield import (
    FieldCtx,
    QuadInt,
    QuadRat,
    box_elements,
    ceil_upper,
    embed_approx,
    interval_precision,
    interval_upper,
    ratio_at_least_one,
    unit_inverse,
    unit_normalize,
)
from utils.config import get_precision_bits
from utils.errors import (
    BadIndexParity,
    BadParameter,
    IndexOutOfRange,
    InvariantViolation,
    MissingIdealData,
    NotTotallyPositive,
    ROutOfRange,
)
from utils.logger import logger

MAX_EPS_DENOMINATOR = 10**4


@dataclass(frozen=True)
class SemiConvergent:
    i: int
    r: int
    value: QuadInt

    def to_dict(self) -> dict:
        return {"i": self.i, "r": self.r, "value": self.value.as_pair()}


@dataclass(frozen=True)
class IndecompWindow:
    """S_0: the indecomposables sigma with eps > sigma >= conj(sigma) > 0."""

    elements: tuple[SemiConvergent, ...]
    M_D: int
    kappa: int

    @property
    def values(self) -> tuple[QuadInt, ...]:
        return tuple(e.value for e in self.elements)


# ---------------------------------------------------------------------------
# N_i and T_i
# ---------------------------------------------------------------------------


def _check_index(cf: CFExpansion, i: int, low: int) -> None:
    if i < low or i > 2 * cf.s:
        raise IndexOutOfRange(f"index {i} outside [{low}, {2 * cf.s}] for D={cf.ctx.D}")


def Ni(cf: CFExpansion, i: int) -> int:
    """N_i = |N(alpha_i)| for -1 <= i <= 2s."""
    _check_index(cf, i, -1)
    return abs(cf.alpha(i).norm())


def Ti(cf: CFExpansion, i: int) -> int:
    """The integer T_i with alpha_{i-1} * conj(alpha_i) = T_i + (-1)^(i+1) w, for 0 <= i <= 2s."""
    _check_index(cf, i, 0)
    product = cf.alpha(i - 1) * cf.alpha(i).conjugate()
    expected = -1 if i % 2 == 0 else 1
    if product.b != expected:
        raise InvariantViolation(f"D={cf.ctx.D}: alpha_{i - 1} conj(alpha_{i}) = {product} has w-coefficient {product.b}, expected {expected}")
    return product.a


# ---------------------------------------------------------------------------
# Semi-convergents and the window S_0
# ---------------------------------------------------------------------------


def semiconvergent(cf: CFExpansion, i: int, r: int) -> SemiConvergent:
    """
    alpha_{i,r} = alpha_i + r*alpha_{i+1}.

    Raises:
        BadIndexParity: If i is even or below -1.
        ROutOfRange: If r is outside [0, u_{i+2}].
    """
    if i < -1 or i % 2 != 1:
        raise BadIndexParity(f"semi-convergents need an odd index >= -1, got {i}")
    u = cf.u(i + 2)
    if r < 0 or r > u:
        raise ROutOfRange(f"r = {r} outside [0, {u}] for i = {i}")
    value = cf.alpha(i) + cf.alpha(i + 1) * r
    if not value.is_totally_positive():
        raise InvariantViolation(f"D={cf.ctx.D}: alpha_({i},{r}) = {value} is not totally positive")
    if r == u and value != cf.alpha(i + 2):
        raise InvariantViolation(f"D={cf.ctx.D}: alpha_({i},{u}) != alpha_{i + 2}")
    return SemiConvergent(i=i, r=r, value=value)


def norm_semiconvergent_formula(cf: CFExpansion, i: int, r: int) -> int:
    """
    N(alpha_{i,r}) from N = N_{i+1} and T = T_{i+1} alone.

    D = 2, 3 (mod 4): (D - (T - N r)^2)/N
    D = 1 (mod 4):    ((D - 1)/4 + (T - N r) - (T - N r)^2)/N

    The closed form is compared with the norm of the constructed element.
    """
    element = semiconvergent(cf, i, r)
    D = cf.ctx.D
    N, T = Ni(cf, i + 1), Ti(cf, i + 1)
    m = T - N * r
    numerator = (D - 1) // 4 + m - m * m if cf.ctx.case == 1 else D - m * m
    value, remainder = divmod(numerator, N)
    if remainder != 0:
        raise InvariantViolation(f"D={D}: norm formula numerator {numerator} not divisible by N_{i + 1} = {N}")
    if value != element.value.norm():
        raise InvariantViolation(f"D={D}: norm formula gives {value}, direct norm of alpha_({i},{r}) is {element.value.norm()}")
    return value


def window_indices(cf: CFExpansion) -> list[int]:
    """Odd i from -1 to s - 3 (s even) or 2s - 3 (s odd)."""
    top = cf.s - 3 if cf.s % 2 == 0 else 2 * cf.s - 3
    return list(range(-1, top + 1, 2))


def M_D(cf: CFExpansion) -> int:
    """
    u_1 + u_3 + ... + u_{s-1} for s even; 2u_0 + u_1 + ... + u_{s-1} (minus 1 when D = 1 mod 4) for s odd.

    For s odd the value is cross-checked against u_1 + ... + u_s.
    """
    period = cf.period
    if cf.s % 2 == 0:
        return sum(period[0::2])
    value = 2 * cf.u0 + sum(period[:-1]) - (1 if cf.ctx.case == 1 else 0)
    if value != sum(period):
        raise InvariantViolation(f"D={cf.ctx.D}: the two expressions for M_D disagree ({value} vs {sum(period)})")
    return value


@functools.lru_cache(maxsize=1024)
def enumerate_S0(cf: CFExpansion) -> IndecompWindow:
    """
    The window S_0 of indecomposables, with every window inequality checked exactly.

    Returns:
        IndecompWindow: elements alpha_{i,r} for window indices i and 0 <= r < u_{i+2}.
    """
    eps = cf.eps
    elements = []
    for i in window_indices(cf):
        for r in range(cf.u(i + 2)):
            sc = semiconvergent(cf, i, r)
            sigma = sc.value
            # eps > sigma >= conj(sigma) > 0
            if (eps - sigma).sign() <= 0 or not ratio_at_least_one(sigma) or sigma.sign("second") <= 0:
                raise InvariantViolation(f"D={cf.ctx.D}: alpha_({i},{r}) = {sigma} lies outside the window")
            elements.append(sc)
    size = M_D(cf)
    if len(elements) != size:
        raise InvariantViolation(f"D={cf.ctx.D}: |S_0| = {len(elements)} but M_D = {size}")
    return IndecompWindow(elements=tuple(elements), M_D=size, kappa=2 if cf.s % 2 == 1 else 1)


@functools.lru_cache(maxsize=1024)
def _window_values(cf: CFExpansion) -> frozenset:
    return frozenset(enumerate_S0(cf).values)


# ---------------------------------------------------------------------------
# M* (large partial quotients only)
# ---------------------------------------------------------------------------


def parse_eps(eps_param: Union[Fraction, int, float, str]) -> Fraction:
    """
    eps as an exact positive Fraction.

    A float is read through its shortest decimal form, so 0.01 becomes 1/100
    rather than the binary value with a 2^59 denominator. Denominators above
    MAX_EPS_DENOMINATOR are rejected: the threshold test raises u to that power.
    """
    try:
        value = Fraction(repr(eps_param)) if isinstance(eps_param, float) else Fraction(eps_param)
    except (TypeError, ValueError, ZeroDivisionError, OverflowError) as e:
        raise BadParameter(f"eps must be a rational p/q, got {eps_param!r}") from e
    if value <= 0:
        raise BadParameter(f"eps must be positive, got {value}")
    if value.denominator > MAX_EPS_DENOMINATOR:
        raise BadParameter(f"eps denominator must be at most {MAX_EPS_DENOMINATOR}, got {value}")
    if value >= Fraction(1, 8):
        logger.warning(f"eps = {value} is at least 1/8, outside the range where the lower bound applies")
    return value


def _meets_threshold(u: int, D: int, exponent: Fraction) -> bool:
    """u >= D^exponent, decided as u^den >= D^num."""
    return u ** exponent.denominator >= D ** exponent.numerator


def M_star_both(cf: CFExpansion, eps_param: Union[Fraction, int, float, str]) -> tuple[int, int]:
    """
    M* under the two readings of the s-odd summand.

    Convention a thresholds the single quantity 2u_0, convention b thresholds
    u_s; both contribute u_s (= 2u_0 or 2u_0 - 1) when they pass. For s even
    the conventions coincide.

    Returns:
        tuple[int, int]: (M*_a, M*_b)
    """
    exponent = Fraction(1, 8) + parse_eps(eps_param)
    D = cf.ctx.D
    period = cf.period
    if cf.s % 2 == 0:
        value = sum(u for u in period[0::2] if _meets_threshold(u, D, exponent))
        return value, value
    inner = sum(u for u in period[:-1] if _meets_threshold(u, D, exponent))
    u_s = period[-1]
    a = inner + (u_s if _meets_threshold(2 * cf.u0, D, exponent) else 0)
    b = inner + (u_s if _meets_threshold(u_s, D, exponent) else 0)
    return a, b


def M_star(cf: CFExpansion, eps_param: Union[Fraction, int, float, str], convention: str = "a") -> int:
    a, b = M_star_both(cf, eps_param)
    if convention not in ("a", "b"):
        raise BadParameter(f"convention must be 'a' or 'b', got {convention!r}")
    return a if convention == "a" else b


# ---------------------------------------------------------------------------
# Indecomposability
# ---------------------------------------------------------------------------


def _require_totally_positive(x: QuadInt) -> None:
    if not x.is_totally_positive():
        raise NotTotallyPositive(f"{x} is not totally positive")


def is_indecomposable_bruteforce(ctx: FieldCtx, x: QuadInt) -> bool:
    """
    Search every beta with 0 < beta < x in both embeddings.

    Writing q*beta = C + d*sqrt D, the embeddings satisfy beta_1 + beta_2 = 2C/q
    and beta_1 - beta_2 = 2d*sqrt(D)/q, so 0 < C < q*Tr(x)/2 and
    |d| < q*max(x_1, x_2)/(2 sqrt D). The d-range comes from interval bounds;
    membership is then decided exactly.
    """
    _require_totally_positive(x)
    q, t, D = ctx.omega_denominator, ctx.omega_shift, ctx.D
    bits = get_precision_bits()
    first, second = embed_approx(x, bits)
    top = max(interval_upper(first), interval_upper(second))
    with interval_precision(bits + x.trace().bit_length() + 16):
        d_max = ceil_upper(iv.mpf(q) * iv.mpf(top) / (2 * iv.sqrt(iv.mpf(D))))
    c_max = (q * x.trace() - 1) // 2
    for d in range(-d_max, d_max + 1):
        for C in range(1, c_max + 1):
            if (C - d * t) % q != 0:
                continue
            beta = QuadInt((C - d * t) // q, d, ctx)
            if beta.is_totally_positive() and (x - beta).is_totally_positive():
                return False
    return True


def window_shift(cf: CFExpansion, x: QuadInt) -> tuple[QuadInt, int]:
    """
    (sigma, k) with x = sigma * eps^k and 1 <= sigma/conj(sigma) < eps^2.

    Raises:
        NotTotallyPositive: If x is not totally positive.
    """
    _require_totally_positive(x)
    eps = cf.eps
    inverse = unit_inverse(eps)
    k = 0
    while not ratio_at_least_one(x):
        x = x * eps
        k -= 1
    shifted = x * inverse
    while ratio_at_least_one(shifted):
        x = shifted
        k += 1
        shifted = x * inverse
    return x, k


def is_indecomposable_fast(cf: CFExpansion, x: QuadInt) -> bool:
    """Indecomposable iff x (or its conjugate) lands on an element of S_0 after an eps-shift."""
    window = _window_values(cf)
    sigma, _ = window_shift(cf, x)
    if sigma in window:
        return True
    sigma_conj, _ = window_shift(cf, x.conjugate())
    return sigma_conj in window


# ---------------------------------------------------------------------------
# Identities and inequalities for N_i
# ---------------------------------------------------------------------------


def verify_norm_identities(cf: CFExpansion, i: int) -> bool:
    """
    Check exactly in Q(sqrt D):

        N_i = sqrt(Delta)/c_{i+1} - N_{i-1}/c_{i+1}^2
        T_i = (-1)^i (w - N_{i-1}/c_{i+1})

    Raises:
        IndexOutOfRange: If i is outside [0, 2s].
        InvariantViolation: If either identity fails.
    """
    _check_index(cf, i, 0)
    ctx = cf.ctx
    c = c_surd(cf, i + 1).to_quadrat(ctx)
    n_i, n_prev, t_i = Ni(cf, i), Ni(cf, i - 1), Ti(cf, i)
    root = QuadRat.sqrt_delta(ctx)
    if QuadRat.of(n_i, ctx) != root / c - Fraction(n_prev) / (c * c):
        raise InvariantViolation(f"D={ctx.D}, i={i}: N_i = {n_i} but sqrt(Delta)/c - N_(i-1)/c^2 = {root / c - Fraction(n_prev) / (c * c)}")
    sign = 1 if i % 2 == 0 else -1
    rhs = (ctx.omega.to_quadrat() - Fraction(n_prev) / c) * sign
    if QuadRat.of(t_i, ctx) != rhs:
        raise InvariantViolation(f"D={ctx.D}, i={i}: T_i = {t_i} but (-1)^i (w - N_(i-1)/c) = {rhs}")
    return True


def verify_norm_bounds(cf: CFExpansion, i: int) -> bool:
    """
    Check exactly, for 0 <= i <= 2s:

        sqrt(Delta)/c_{i+1} * (1 - 1/(c_i c_{i+1})) < N_i < sqrt(Delta)/c_{i+1}
        N_i/sqrt(Delta) < 1/u_{i+1}
        1/(u_{i+1} + 10) < N_i/sqrt(Delta)      when u_{i+1} >= 3
    """
    _check_index(cf, i, 0)
    ctx = cf.ctx
    c_this = c_surd(cf, i).to_quadrat(ctx)
    c_next = c_surd(cf, i + 1).to_quadrat(ctx)
    n_i = Ni(cf, i)
    root = QuadRat.sqrt_delta(ctx)
    upper = root / c_next
    lower = upper * (1 - (c_this * c_next).inverse())
    value = QuadRat.of(n_i, ctx)
    if not (lower < value < upper):
        raise InvariantViolation(f"D={ctx.D}, i={i}: N_i = {n_i} outside ({lower}, {upper})")
    u = cf.u(i + 1)
    if not n_i * n_i * u * u < ctx.Delta:
        raise InvariantViolation(f"D={ctx.D}, i={i}: N_i * u_(i+1) = {n_i * u} is not below sqrt(Delta)")
    if u >= 3 and not ctx.Delta < n_i * n_i * (u + 10) * (u + 10):
        raise InvariantViolation(f"D={ctx.D}, i={i}: N_i * (u_(i+1) + 10) = {n_i * (u + 10)} is not above sqrt(Delta)")
    return True


# Older names of the two checks
verify_lemma_prop5 = verify_norm_identities
verify_bounds_prop6 = verify_norm_bounds


# ---------------------------------------------------------------------------
# Elements of small norm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmallNormEntry:
    norm: int
    generator: QuadInt
    multiplier: int
    index: int
    conjugated: bool

    def to_dict(self) -> dict:
        return {
            "norm": self.norm,
            "generator": self.generator.as_pair(),
            "n": self.multiplier,
            "i": self.index,
            "conjugated": self.conjugated,
        }


@dataclass(frozen=True)
class SmallNormReport:
    bound: int
    entries: tuple[SmallNormEntry, ...]


def _convergent_associates(cf: CFExpansion) -> dict:
    """Canonical associate -> (i, conjugated) for alpha_i and conj(alpha_i), -1 <= i <= 2s."""
    table: dict = {}
    for i in range(-1, 2 * cf.s + 1):
        alpha = cf.alpha(i)
        table.setdefault(unit_normalize(alpha, cf.eps0), (i, False))
        table.setdefault(unit_normalize(alpha.conjugate(), cf.eps0), (i, True))
    return table


def small_norm_bound(ctx: FieldCtx) -> int:
    """Largest m with m < sqrt(Delta)/2."""
    return math.isqrt((ctx.Delta - 1) // 4)


def classify_small_norm(ctx: FieldCtx, cf: CFExpansion) -> SmallNormReport:
    """
    Every mu with 0 < |N(mu)| < sqrt(Delta)/2, up to units and sign, written as n*alpha_i or n*conj(alpha_i).

    Each such mu generates a principal ideal of norm |N(mu)|, so running through
    all principal ideals below the bound is exhaustive.

    Raises:
        InvariantViolation: If some mu is not of that shape.
    """
    bound = small_norm_bound(ctx)
    table = _convergent_associates(cf)
    entries = []
    for record in enumerate_principal_ideals(ctx, cf, bound):
        n = record.generator.content()
        primitive_part = QuadInt(record.generator.a // n, record.generator.b // n, ctx)
        match = table.get(unit_normalize(primitive_part, cf.eps0))
        if match is None:
            raise InvariantViolation(f"D={ctx.D}: {record.generator} of norm {record.norm} is not n*alpha_i or n*conj(alpha_i)")
        entries.append(SmallNormEntry(record.norm, record.generator, n, match[0], match[1]))
    logger.info(f"D={ctx.D}: classified {len(entries)} elements of norm below sqrt(Delta)/2")
    return SmallNormReport(bound=bound, entries=tuple(entries))


# ---------------------------------------------------------------------------
# Bounds through principal ideals
# ---------------------------------------------------------------------------


@dataclass
class BoundCheck:
    """total < sqrt(Delta) * upper_sum and total > sqrt(Delta) * lower_sum - 22 * count."""

    total: int
    upper_sum: Fraction
    lower_sum: Fraction
    count: int
    upper_holds: bool
    lower_holds: bool
    Delta: int = field(default=0)

    @property
    def holds(self) -> bool:
        return self.upper_holds and self.lower_holds

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "upper": float(mpmath.sqrt(self.Delta) * mpmath.mpf(self.upper_sum.numerator) / self.upper_sum.denominator),
            "lower": float(mpmath.sqrt(self.Delta) * mpmath.mpf(self.lower_sum.numerator) / self.lower_sum.denominator - 22 * self.count),
            "upper_holds": self.upper_holds,
            "lower_holds": self.lower_holds,
        }


def check_sum_bounds(total: int, records: list[PrincipalIdealRecord], Delta: int) -> BoundCheck:
    """
    Exact comparison of total against the principal-ideal sums, squaring to stay in the integers.

    Only primitive records count; norms below sqrt(Delta) feed the upper sum and
    the count, norms below sqrt(Delta)/2 feed the lower sum.
    """
    below = [r for r in records if r.primitive and r.norm * r.norm < Delta]
    below_half = [r for r in below if 4 * r.norm * r.norm < Delta]
    upper_sum = sum((Fraction(1, r.norm) for r in below), Fraction(0))
    lower_sum = sum((Fraction(1, r.norm) for r in below_half), Fraction(0))
    count = len(below)
    upper_holds = total * total < Delta * upper_sum * upper_sum
    shifted = total + 22 * count
    lower_holds = shifted * shifted > Delta * lower_sum * lower_sum
    return BoundCheck(
        total=total,
        upper_sum=upper_sum,
        lower_sum=lower_sum,
        count=count,
        upper_holds=upper_holds,
        lower_holds=lower_holds,
        Delta=Delta,
    )


@dataclass
class SumBoundsReport:
    sum_u: BoundCheck
    m_d: BoundCheck

    @property
    def holds(self) -> bool:
        return self.sum_u.holds and self.m_d.holds


def _require_ideals(cf: CFExpansion, ideals: Optional[list[PrincipalIdealRecord]]) -> list[PrincipalIdealRecord]:
    if not ideals:
        raise MissingIdealData(f"D={cf.ctx.D}: no principal ideal records supplied")
    if not any(r.norm == 1 for r in ideals):
        raise MissingIdealData(f"D={cf.ctx.D}: the unit ideal is missing from the records")
    return ideals


def estimate_sum_bounds(cf: CFExpansion, ideals: Optional[list[PrincipalIdealRecord]]) -> SumBoundsReport:
    """
    Bounds on sum(u_i) over all principal primitive ideals, and on M_D over those
    generated by an element of negative norm.

    Args:
        cf (CFExpansion): Expansion of w.
        ideals (list[PrincipalIdealRecord]): Principal ideals covering every norm below sqrt(Delta).

    Raises:
        MissingIdealData: If no records are supplied.
        InvariantViolation: If an inequality fails.
    """
    ideals = _require_ideals(cf, ideals)
    Delta = cf.ctx.Delta
    report = SumBoundsReport(
        sum_u=check_sum_bounds(cf.sum_u, ideals, Delta),
        m_d=check_sum_bounds(M_D(cf), [r for r in ideals if r.neg_norm_generator], Delta),
    )
    if not report.holds:
        raise InvariantViolation(f"D={cf.ctx.D}: ideal-sum bounds fail: {report}")
    return report


def ideals_below_sqrt_delta(ctx: FieldCtx, cf: CFExpansion) -> list[PrincipalIdealRecord]:
    """Principal ideals with norm < sqrt(Delta)."""
    return enumerate_principal_ideals(ctx, cf, math.isqrt(ctx.Delta - 1))


# ---------------------------------------------------------------------------
# Square roots of indecomposables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquareRootReport:
    bound: int
    checked: int
    roots: tuple[QuadInt, ...]


def square_root_of_indecomposable(ctx: FieldCtx, cf: CFExpansion, bound: int) -> SquareRootReport:
    """
    Every alpha with |coordinates| <= bound and alpha^2 indecomposable is +-alpha_j or +-conj(alpha_j).

    Raises:
        InvariantViolation: On a counterexample.
    """
    allowed = set()
    j = -1
    while True:
        alpha = cf.alpha(j)
        for candidate in (alpha, alpha.conjugate()):
            allowed.add(candidate)
            allowed.add(-candidate)
        if j >= 1 and cf.convergent(j)[1] > bound:
            break
        j += 1
    roots = []
    checked = 0
    for alpha in box_elements(ctx, bound):
        if not alpha:
            continue
        checked += 1
        if not is_indecomposable_fast(cf, alpha * alpha):
            continue
        if alpha not in allowed:
            raise InvariantViolation(f"D={ctx.D}: {alpha} squares to an indecomposable but is not +-alpha_j or +-conj(alpha_j)")
        roots.append(alpha)
    logger.info(f"D={ctx.D}: {len(roots)} square roots of indecomposables among {checked} elements")
    return SquareRootReport(bound=bound, checked=checked, roots=tuple(roots))
