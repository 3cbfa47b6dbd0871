"""
Characters, L-Values and the Size of the Period Sum
File: scripts/analytic.py

Numerical side of the project: the quadratic character chi_Delta, L(1, chi),
L'(1, chi), zeta^(Delta)(2), class numbers, the constant L(D) in the Laurent
expansion of the partial zeta function of the principal class, and the
resulting main term for u_1 + ... + u_s.

Every real number is carried as a RealApprox (midpoint and radius) produced by
mpmath interval arithmetic or by a certified tail bound, so each reported
digit is backed by its error bar. L(D) is the exception: its bar is an
empirical spread, as no effective error term is known.
"""

# Imports from Python Standard Library
import functools
import math
from dataclasses import dataclass, field, fields
from typing import Optional

# Imports from external packages
import mpmath
from mpmath import iv
from sympy import jacobi_symbol, primefactors

# Local imports
from scripts.contfrac import CFExpansion
from scripts.ideals import (
    PrincipalIdealRecord,
    class_number,
    enumerate_principal_ideals,
    narrow_class_number,
)
from scripts.indecomp import M_D, BoundCheck, check_sum_bounds
from scripts.quadfield import (
    FieldCtx,
    embed_approx,
    interval_lower,
    interval_precision,
    interval_upper,
    is_squarefree,
)
from utils.config import get_ideal_bound, get_l_cutoff, get_precision_bits
from utils.errors import (
    BadParameter,
    CutoffTooSmall,
    InvariantViolation,
    MissingIdealData,
    NotFundamental,
    NumericPrecondition,
)
from utils.logger import logger

MIN_CUTOFF = 1000

__all__ = [
    "RealApprox",
    "LReport",
    "kronecker_chi",
    "character_table",
    "zeta_delta_2",
    "L1_chi",
    "Lprime1_chi",
    "L1_from_class_number",
    "class_number",
    "narrow_class_number",
    "enumerate_principal_ideals",
    "LD_estimate",
    "h1_identity_residual",
    "asymptotic_report",
    "sum_minus_bounds",
]


# ---------------------------------------------------------------------------
# Certified reals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealApprox:
    """A real number known to lie in [mid - rad, mid + rad]."""

    mid: mpmath.mpf
    rad: mpmath.mpf

    @classmethod
    def from_interval(cls, value) -> "RealApprox":
        low, high = interval_lower(value), interval_upper(value)
        with mpmath.workprec(iv.prec + 10):
            mid = (low + high) / 2
            rad = max(high - mid, mid - low)
        return cls(mid, rad)

    def to_interval(self):
        return iv.mpf([self.mid - self.rad, self.mid + self.rad])

    def agrees_with(self, other: "RealApprox") -> bool:
        """The two enclosures overlap."""
        return abs(self.mid - other.mid) <= self.rad + other.rad

    def __float__(self) -> float:
        return float(self.mid)

    def to_dict(self) -> dict:
        return {"mid": float(self.mid), "rad": float(self.rad)}


def _combine(expression) -> RealApprox:
    """Evaluate a callable over intervals at the configured precision and return it as a RealApprox."""
    with interval_precision(get_precision_bits()):
        return RealApprox.from_interval(expression())


# ---------------------------------------------------------------------------
# The quadratic character
# ---------------------------------------------------------------------------


def is_fundamental_discriminant(Delta: int) -> bool:
    if Delta % 4 == 1:
        return Delta > 1 and is_squarefree(Delta)
    if Delta % 4 == 0:
        m = Delta // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def _require_fundamental(Delta: int) -> None:
    if not is_fundamental_discriminant(Delta):
        raise NotFundamental(f"{Delta} is not a positive fundamental discriminant")


def kronecker_chi(Delta: int, n: int) -> int:
    """
    The Kronecker symbol (Delta/n) for n >= 1.

    Odd parts go through the Jacobi symbol; each factor 2 contributes (Delta/2),
    which is 0 for even Delta, 1 for Delta = +-1 (mod 8) and -1 for Delta = +-3 (mod 8).

    Raises:
        NotFundamental: If Delta is not a fundamental discriminant.
    """
    _require_fundamental(Delta)
    if n < 1:
        raise BadParameter(f"n must be positive, got {n}")
    value = 1
    while n % 2 == 0:
        if Delta % 2 == 0:
            return 0
        value *= 1 if Delta % 8 in (1, 7) else -1
        n //= 2
    return value * int(jacobi_symbol(Delta % n, n)) if n > 1 else value


@functools.lru_cache(maxsize=256)
def character_table(Delta: int) -> tuple[int, ...]:
    """chi(0), ..., chi(Delta - 1); chi has period Delta."""
    _require_fundamental(Delta)
    return (0,) + tuple(kronecker_chi(Delta, n) if math.gcd(n, Delta) == 1 else 0 for n in range(1, Delta))


# ---------------------------------------------------------------------------
# zeta^(Delta)(2) and L-values at 1
# ---------------------------------------------------------------------------


def zeta_delta_2(Delta: int) -> RealApprox:
    """zeta(2) with the Euler factors at the primes dividing Delta removed: (pi^2/6) * prod(1 - p^-2)."""
    primes = [int(p) for p in primefactors(Delta)]

    def expression():
        value = iv.pi**2 / 6
        for p in primes:
            value = value * (1 - iv.mpf(1) / (p * p))
        return value

    return _combine(expression)


def _max_partial_sum(table: tuple[int, ...]) -> int:
    """max over t of |chi(1) + ... + chi(t)|; the full period sums to 0."""
    running, largest = 0, 0
    for value in table[1:] + table[:1]:
        running += value
        largest = max(largest, abs(running))
    if running != 0:
        raise InvariantViolation("character does not sum to zero over a period")
    return largest


def _check_cutoff(cutoff: int) -> None:
    if cutoff < MIN_CUTOFF:
        raise CutoffTooSmall(f"cutoff must be at least {MIN_CUTOFF}, got {cutoff}")


def L1_chi(Delta: int, cutoff: Optional[int] = None) -> RealApprox:
    """
    L(1, chi_Delta) = sum chi(n)/n.

    By partial summation the tail beyond N is bounded by 2M/(N + 1), where M is
    the largest |chi(1) + ... + chi(t)|, computed exactly over one period.

    Raises:
        CutoffTooSmall: If cutoff < 1000.
    """
    cutoff = get_l_cutoff() if cutoff is None else cutoff
    _check_cutoff(cutoff)
    table = character_table(Delta)
    M = _max_partial_sum(table)
    bits = get_precision_bits()
    with mpmath.workprec(bits + 32):
        total = mpmath.fsum(mpmath.mpf(table[n % Delta]) / n for n in range(1, cutoff + 1) if table[n % Delta])
        tail = mpmath.mpf(2 * M) / (cutoff + 1)
        rounding = mpmath.mpf(cutoff + 1) * mpmath.mpf(2) ** (-bits)
    return RealApprox(total, tail + rounding)


def Lprime1_chi(Delta: int, cutoff: Optional[int] = None) -> RealApprox:
    """
    L'(1, chi_Delta) = -sum chi(n) log(n)/n.

    log(t)/t decreases for t >= 3, so the tail is at most 2M log(N + 1)/(N + 1).

    Raises:
        CutoffTooSmall: If cutoff < 1000.
    """
    cutoff = get_l_cutoff() if cutoff is None else cutoff
    _check_cutoff(cutoff)
    table = character_table(Delta)
    M = _max_partial_sum(table)
    bits = get_precision_bits()
    with mpmath.workprec(bits + 32):
        total = -mpmath.fsum(table[n % Delta] * mpmath.log(n) / n for n in range(2, cutoff + 1) if table[n % Delta])
        tail = 2 * M * mpmath.log(cutoff + 1) / (cutoff + 1)
        rounding = mpmath.mpf(cutoff + 1) * mpmath.log(cutoff + 1) * mpmath.mpf(2) ** (-bits)
    return RealApprox(total, tail + rounding)


def L1_from_class_number(ctx: FieldCtx, cf: CFExpansion, h: int) -> RealApprox:
    """2h log(eps0)/sqrt(Delta), the value L(1, chi) must take."""
    bits = get_precision_bits()
    first, _ = embed_approx(cf.eps0, bits)
    return _combine(lambda: 2 * h * iv.ln(first) / iv.sqrt(iv.mpf(ctx.Delta)))


def class_numbers(cf: CFExpansion) -> tuple[int, int]:
    """(h, h+)."""
    return class_number(cf.ctx), narrow_class_number(cf)


# ---------------------------------------------------------------------------
# The constant L(D)
# ---------------------------------------------------------------------------


def _harmonic_up_to(records: list[PrincipalIdealRecord], bound) -> mpmath.mpf:
    return mpmath.fsum(mpmath.mpf(1) / r.norm for r in records if r.norm <= bound)


def _remainder_constant(records: list[PrincipalIdealRecord], c, bound) -> mpmath.mpf:
    """Largest |A(t) - c*t|/sqrt(t) over 1 <= t <= bound, checked on both sides of every jump of A."""
    norms = sorted(r.norm for r in records if r.norm <= bound)
    worst = mpmath.mpf(0)
    count = 0
    for index, n in enumerate(norms):
        # A(n-) before the jump, A(n) after all ideals of norm n are counted
        if index == 0 or norms[index - 1] != n:
            if n > 1:
                worst = max(worst, abs(count - c * n) / mpmath.sqrt(n))
        count += 1
        if index + 1 == len(norms) or norms[index + 1] != n:
            worst = max(worst, abs(count - c * n) / mpmath.sqrt(n))
    return max(worst, abs(count - c * bound) / mpmath.sqrt(bound))


def LD_estimate(
    ctx: FieldCtx,
    cf: CFExpansion,
    X: Optional[int] = None,
    L1: Optional[RealApprox] = None,
    h: Optional[int] = None,
) -> RealApprox:
    """
    L(D), the constant term of zeta(s, principal class) - (L(1, chi)/h)/(s - 1).

    Partial summation: let A(t) = #{principal a : Na <= t} = c*t + R(t) with
    c = L(1, chi)/h. Then

        sum_{Na <= X} 1/Na = c + R(X)/X + c log X + int_1^X R(t)/t^2 dt
        sum_a Na^-s        = c/(s - 1) + c + s int_1^oo R(t) t^(-s-1) dt

    so both constants equal c + int_1^oo R(t)/t^2 dt and no Euler-gamma term
    enters: L(D) = lim (sum_{Na <= X} 1/Na - c log X).

    Truncating at X leaves R(X)/X - int_X^oo R(t)/t^2 dt. With |R(t)| <= K sqrt(t)
    this is at most 3K/sqrt(X). K is the largest |R(t)|/sqrt(t) seen on [1, 2X]
    and is assumed to hold beyond 2X as well. The bar is that tail term plus the
    spread of the estimate over X/2, X and 2X and the contribution of the
    L(1, chi) bar.

    Raises:
        CutoffTooSmall: If X < 1000.
    """
    X = get_ideal_bound() if X is None else X
    _check_cutoff(X)
    L1 = L1_chi(ctx.Delta) if L1 is None else L1
    h = class_number(ctx) if h is None else h
    records = enumerate_principal_ideals(ctx, cf, 2 * X)
    with mpmath.workprec(get_precision_bits()):
        c = L1.mid / h
        estimates = [_harmonic_up_to(records, Y) - c * mpmath.log(Y) for Y in (mpmath.mpf(X) / 2, mpmath.mpf(X), mpmath.mpf(2 * X))]
        spread = max(abs(e - estimates[1]) for e in estimates)
        propagated = L1.rad / h * mpmath.log(2 * X)
        K = _remainder_constant(records, c, 2 * X)
        tail = 3 * K / mpmath.sqrt(X)
    logger.debug(f"D={ctx.D}: L(D) estimates at X/2, X, 2X: {[float(e) for e in estimates]}, remainder constant K = {float(K):.4f}")
    return RealApprox(estimates[1], tail + spread + propagated)


def h1_identity_residual(LD: RealApprox, L1: RealApprox, L1prime: RealApprox) -> RealApprox:
    """LD - (gamma*L(1, chi) + L'(1, chi)); for h = 1 the residual should contain 0."""

    def expression():
        return LD.to_interval() - (iv.euler * L1.to_interval() + L1prime.to_interval())

    return _combine(expression)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass
class LReport:
    D: int
    Delta: int
    s: int
    h: int
    h_plus: int
    sum_u: int
    M_D: int
    L1: RealApprox
    L1prime: RealApprox
    L1_class_number: RealApprox
    zeta_delta_2: RealApprox
    LD: RealApprox
    main_term: RealApprox
    ratio: RealApprox
    sum_u_scaled: RealApprox
    M_D_scaled: RealApprox
    period_count_proxy: RealApprox
    L1_over_log: RealApprox
    L1prime_over_log_squared: RealApprox
    grh_band: tuple[float, float]
    trivial_half_holds: bool
    h1_residual: Optional[RealApprox] = field(default=None)

    def to_dict(self) -> dict:
        data = {}
        for item in fields(self):
            value = getattr(self, item.name)
            data[item.name] = value.to_dict() if isinstance(value, RealApprox) else value
        data["grh_band"] = list(self.grh_band)
        return data


def trivial_half(cf: CFExpansion) -> bool:
    """sqrt(Delta) - 2 < 2u_0 and 2u_0 - 1 <= u_1 + ... + u_s, decided exactly."""
    Delta = cf.ctx.Delta
    return (2 * cf.u0 + 2) ** 2 > Delta and 2 * cf.u0 - 1 <= cf.sum_u


def asymptotic_report(
    ctx: FieldCtx,
    cf: CFExpansion,
    X: Optional[int] = None,
    cutoff: Optional[int] = None,
) -> LReport:
    """
    Compare u_1 + ... + u_s with (sqrt(Delta)/zeta^(Delta)(2)) * (L(D) + (L(1, chi)/h) log sqrt(D)).

    Args:
        ctx (FieldCtx): The field.
        cf (CFExpansion): Expansion of w.
        X (int): Ideal norm bound for L(D).
        cutoff (int): Character-sum cutoff for the L-values.

    Returns:
        LReport: Values with bars, the diagnostics, and the h = 1 residual when h = 1.

    Raises:
        InvariantViolation: If the two values of L(1, chi) disagree.
        NumericPrecondition: If the main term is not certified positive.
    """
    logger.info(f"D={ctx.D}: START asymptotic report")
    Delta = ctx.Delta
    h, h_plus = class_numbers(cf)
    L1 = L1_chi(Delta, cutoff)
    L1prime = Lprime1_chi(Delta, cutoff)
    L1_cnf = L1_from_class_number(ctx, cf, h)
    if not L1.agrees_with(L1_cnf):
        raise InvariantViolation(f"D={ctx.D}: L(1, chi) = {float(L1)} +- {float(L1.rad)} disagrees with the class number formula value {float(L1_cnf)}")
    zeta2 = zeta_delta_2(Delta)
    LD = LD_estimate(ctx, cf, X, L1, h)
    m_d = M_D(cf)

    def main_term_interval():
        root = iv.sqrt(iv.mpf(Delta))
        L1_iv = L1.to_interval()
        return root / zeta2.to_interval() * (LD.to_interval() + L1_iv / h * iv.ln(iv.sqrt(iv.mpf(ctx.D))))

    main_term = _combine(main_term_interval)
    if main_term.mid - main_term.rad <= 0:
        raise NumericPrecondition(f"D={ctx.D}: main term {float(main_term)} +- {float(main_term.rad)} is not certified positive")

    def scaled(value):
        return lambda: iv.mpf(value) / (iv.sqrt(iv.mpf(Delta)) * iv.ln(iv.mpf(Delta)) ** 2)

    root_d = math.sqrt(ctx.D)
    log_d = math.log(ctx.D)
    report = LReport(
        D=ctx.D,
        Delta=Delta,
        s=cf.s,
        h=h,
        h_plus=h_plus,
        sum_u=cf.sum_u,
        M_D=m_d,
        L1=L1,
        L1prime=L1prime,
        L1_class_number=L1_cnf,
        zeta_delta_2=zeta2,
        LD=LD,
        main_term=main_term,
        ratio=_combine(lambda: iv.mpf(cf.sum_u) / main_term.to_interval()),
        sum_u_scaled=_combine(scaled(cf.sum_u)),
        M_D_scaled=_combine(scaled(m_d)),
        period_count_proxy=_combine(lambda: iv.mpf(cf.s * h) / (iv.sqrt(iv.mpf(ctx.D)) * L1.to_interval())),
        L1_over_log=_combine(lambda: L1.to_interval() / iv.ln(iv.mpf(Delta))),
        L1prime_over_log_squared=_combine(lambda: abs(L1prime.to_interval()) / iv.ln(iv.mpf(Delta)) ** 2),
        grh_band=(
            root_d * (1 + log_d / h),
            root_d * (1 + log_d / h) * math.log(log_d) ** 2,
        ),
        trivial_half_holds=trivial_half(cf),
    )
    if h == 1:
        report.h1_residual = h1_identity_residual(LD, L1, L1prime)
    logger.info(f"D={ctx.D}: report completed, ratio = {float(report.ratio):.6f}")
    return report


def sum_minus_bounds(ctx: FieldCtx, cf: CFExpansion, ideals: Optional[list[PrincipalIdealRecord]]) -> BoundCheck:
    """
    M_D against the principal ideals of norm < sqrt(Delta) with a generator of negative norm:

        M_D < sum sqrt(Delta)/Na   and   M_D > sum_{Na < sqrt(Delta)/2} sqrt(Delta)/Na - 22 * count

    Raises:
        MissingIdealData: If no ideal records are supplied.
        InvariantViolation: If either inequality fails.
    """
    if not ideals:
        raise MissingIdealData(f"D={ctx.D}: no principal ideal records supplied")
    negative = [r for r in ideals if r.neg_norm_generator]
    check = check_sum_bounds(M_D(cf), negative, ctx.Delta)
    if not check.holds:
        raise InvariantViolation(f"D={ctx.D}: negative-norm ideal bounds fail for M_D = {check.total}")
    return check
