"""
Continued Fractions of w
File: scripts/contfrac.py

Exact periodic continued-fraction expansion of w = sqrt D or (1 + sqrt D)/2.
Every complete quotient c_i is kept as a surd (P + sqrt D)/Q with Q | D - P^2,
so the expansion, its convergents and the fundamental units come out of pure
integer arithmetic.

Convergents p_i/q_i start from p_{-1} = 1, q_{-1} = 0, p_0 = u_0, q_0 = 1, and
alpha_i = p_i - q_i*conj(w) is the element of O_K attached to them.
"""

# Imports from Python Standard Library
import functools
import math
from dataclasses import dataclass
from fractions import Fraction

# Local imports
from scripts.quadfield import FieldCtx, QuadInt, QuadRat, surd_sign, unit_power
from utils.errors import IndexOutOfRange, InvariantViolation
from utils.logger import logger


@dataclass(frozen=True)
class Surd:
    """The quadratic irrational (P + sqrt D)/Q."""

    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.Q == 0:
            raise ValueError("surd denominator must be nonzero")
        if (self.D - self.P * self.P) % self.Q != 0:
            raise ValueError(f"Q = {self.Q} does not divide D - P^2 = {self.D - self.P * self.P}")

    def floor(self) -> int:
        """floor((P + sqrt D)/Q) without leaving the integers."""
        top = self.P + math.isqrt(self.D)  # floor(P + sqrt D), sqrt D is irrational
        if self.Q > 0:
            return top // self.Q
        # (P + sqrt D)/|Q| is never an integer, so floor(-y) = -floor(y) - 1
        return -(top // -self.Q) - 1

    def step(self) -> tuple[int, "Surd"]:
        """One continued-fraction step: (u, 1/(self - u))."""
        u = self.floor()
        P = u * self.Q - self.P
        return u, Surd(P, (self.D - P * P) // self.Q, self.D)

    def to_quadrat(self, ctx: FieldCtx) -> QuadRat:
        return QuadRat(Fraction(self.P, self.Q), Fraction(1, self.Q), ctx)

    def is_reduced(self) -> bool:
        """value > 1 and -1 < conjugate < 0, decided exactly."""
        x, y = Fraction(self.P, self.Q), Fraction(1, self.Q)
        return surd_sign(x - 1, y, self.D) > 0 and surd_sign(x, -y, self.D) < 0 and surd_sign(x + 1, -y, self.D) > 0

    def __str__(self) -> str:
        return f"({self.P} + sqrt {self.D})/{self.Q}"


def omega_surd(ctx: FieldCtx) -> Surd:
    """w as a surd: (0 + sqrt D)/1 or (1 + sqrt D)/2."""
    return Surd(ctx.omega_shift, ctx.omega_denominator, ctx.D)


@dataclass(frozen=True)
class CFExpansion:
    """
    The expansion w = [u_0; u_1, ..., u_s] with minimal period s.

    p and q hold convergent numerators and denominators shifted by one, so
    p[0] = p_{-1}; they are materialised through index 2s + 1. surd_states[i]
    is the complete quotient c_i for 0 <= i <= s.
    """

    ctx: FieldCtx
    u0: int
    period: tuple[int, ...]
    p: tuple[int, ...]
    q: tuple[int, ...]
    surd_states: tuple[Surd, ...]
    eps0: QuadInt
    eps: QuadInt

    @property
    def s(self) -> int:
        return len(self.period)

    @property
    def sum_u(self) -> int:
        return sum(self.period)

    @property
    def period_string(self) -> str:
        return "-".join(str(u) for u in self.period)

    def u(self, i: int) -> int:
        if i < 0:
            raise IndexOutOfRange(f"partial quotient index must be >= 0, got {i}")
        if i == 0:
            return self.u0
        return self.period[(i - 1) % self.s]

    def convergent(self, i: int) -> tuple[int, int]:
        """(p_i, q_i) for any i >= -1."""
        if i < -1:
            raise IndexOutOfRange(f"convergent index must be >= -1, got {i}")
        if i + 1 < len(self.p):
            return self.p[i + 1], self.q[i + 1]
        j = len(self.p) - 2
        p_prev, p_cur = self.p[-2], self.p[-1]
        q_prev, q_cur = self.q[-2], self.q[-1]
        while j < i:
            j += 1
            u = self.u(j)
            p_prev, p_cur = p_cur, u * p_cur + p_prev
            q_prev, q_cur = q_cur, u * q_cur + q_prev
        return p_cur, q_cur

    def alpha(self, i: int) -> QuadInt:
        """alpha_i = p_i - q_i*conj(w) = (p_i - q_i Tr w) + q_i w."""
        p, q = self.convergent(i)
        return QuadInt(p - q * self.ctx.trace_omega, q, self.ctx)

    def state(self, i: int) -> Surd:
        if i < 0:
            raise IndexOutOfRange(f"complete quotient index must be >= 0, got {i}")
        if i == 0:
            return self.surd_states[0]
        return self.surd_states[1 + (i - 1) % self.s]


def _check_expansion(cf: CFExpansion) -> None:
    """Establish the structural facts of the expansion; any failure is a bug, not bad input."""
    ctx, s, period = cf.ctx, cf.s, cf.period
    for i in range(1, s):
        if period[i - 1] != period[s - i - 1]:
            raise InvariantViolation(f"D={ctx.D}: period {list(period)} is not a palindrome")
    expected_last = 2 * cf.u0 - 1 if ctx.case == 1 else 2 * cf.u0
    if period[-1] != expected_last:
        raise InvariantViolation(f"D={ctx.D}: u_s = {period[-1]}, expected {expected_last}")
    first = cf.surd_states[1]
    for d in range(1, s):
        if s % d == 0 and cf.state(1 + d) == first:
            raise InvariantViolation(f"D={ctx.D}: period {s} is not minimal (repeats after {d})")
    for i in range(-1, 2 * s):
        p_i, q_i = cf.convergent(i)
        p_next, q_next = cf.convergent(i + 1)
        if p_next * q_i - p_i * q_next != (-1) ** (i % 2):
            raise InvariantViolation(f"D={ctx.D}: p_(i+1) q_i - p_i q_(i+1) != (-1)^i at i={i}")
        if math.gcd(p_i, q_i) != 1:
            raise InvariantViolation(f"D={ctx.D}: convergent {i} is not in lowest terms")
        alpha = cf.alpha(i)
        if alpha.is_totally_positive() != (i % 2 == 1):
            raise InvariantViolation(f"D={ctx.D}: alpha_{i} = {alpha} has the wrong positivity")
        if i >= 1 and alpha != cf.alpha(i - 1) * cf.u(i) + cf.alpha(i - 2):
            raise InvariantViolation(f"D={ctx.D}: alpha recurrence fails at i={i}")
    if cf.eps0.norm() != (-1) ** s:
        raise InvariantViolation(f"D={ctx.D}: N(eps0) = {cf.eps0.norm()}, expected {(-1) ** s}")
    if cf.eps.norm() != 1 or not cf.eps.is_totally_positive():
        raise InvariantViolation(f"D={ctx.D}: eps = {cf.eps} is not a totally positive unit")
    if cf.eps != (cf.eps0 if s % 2 == 0 else cf.eps0 * cf.eps0):
        raise InvariantViolation(f"D={ctx.D}: eps is not eps0 or eps0^2 as the period parity demands")


@functools.lru_cache(maxsize=4096)
def expand(ctx: FieldCtx) -> CFExpansion:
    """
    Expand w into its periodic continued fraction.

    The period is detected as the first return of the surd state reached after
    u_0; comparing (P, Q) pairs rather than digits rules out spurious short periods.

    Args:
        ctx (FieldCtx): The field.

    Returns:
        CFExpansion: Partial quotients, convergents through index 2s + 1, units.
    """
    start = omega_surd(ctx)
    u0, first = start.step()
    states = [start, first]
    period = []
    state = first
    while True:
        u, state = state.step()
        period.append(u)
        if state == first:
            break
        states.append(state)
    s = len(period)

    p = [1, u0]
    q = [0, 1]
    for i in range(1, 2 * s + 2):
        u = period[(i - 1) % s]
        p.append(u * p[-1] + p[-2])
        q.append(u * q[-1] + q[-2])

    def alpha(i: int) -> QuadInt:
        return QuadInt(p[i + 1] - q[i + 1] * ctx.trace_omega, q[i + 1], ctx)

    eps0 = alpha(s - 1)
    eps = eps0 if s % 2 == 0 else alpha(2 * s - 1)
    cf = CFExpansion(
        ctx=ctx,
        u0=u0,
        period=tuple(period),
        p=tuple(p),
        q=tuple(q),
        surd_states=tuple(states),
        eps0=eps0,
        eps=eps,
    )
    _check_expansion(cf)
    logger.debug(f"D={ctx.D}: u0={u0}, period={cf.period_string}, s={s}")
    return cf


def c_surd(cf: CFExpansion, i: int) -> Surd:
    """
    The complete quotient c_i = [u_i; u_{i+1}, ...] as an exact surd.

    Both tail identities are checked exactly before returning:
    c_i = u_i + 1/c_{i+1}, and for i >= 1
    w = (c_i p_{i-1} + p_{i-2})/(c_i q_{i-1} + q_{i-2}).

    Raises:
        IndexOutOfRange: If i < 0.
        InvariantViolation: If an identity fails.
    """
    if i < 0:
        raise IndexOutOfRange(f"c_i needs i >= 0, got {i}")
    ctx = cf.ctx
    surd = cf.state(i)
    c_i = surd.to_quadrat(ctx)
    c_next = cf.state(i + 1).to_quadrat(ctx)
    if c_i != c_next.inverse() + cf.u(i):
        raise InvariantViolation(f"D={ctx.D}: c_{i} != u_{i} + 1/c_{i + 1}")
    if i >= 1:
        p1, q1 = cf.convergent(i - 1)
        p2, q2 = cf.convergent(i - 2)
        omega = ctx.omega.to_quadrat()
        if omega != (c_i * p1 + p2) / (c_i * q1 + q2):
            raise InvariantViolation(f"D={ctx.D}: w != (c_{i} p_{i - 1} + p_{i - 2})/(c_{i} q_{i - 1} + q_{i - 2})")
    return surd


def fundamental_units(cf: CFExpansion) -> tuple[QuadInt, QuadInt]:
    """(eps0, eps): the fundamental unit > 1 and the totally positive fundamental unit."""
    return cf.eps0, cf.eps


def has_negative_norm_unit(cf: CFExpansion) -> bool:
    return cf.s % 2 == 1


def eps_power(cf: CFExpansion, k: int) -> QuadInt:
    return unit_power(cf.eps, k)
