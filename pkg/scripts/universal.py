"""
Universal Diagonal Forms
File: scripts/universal.py

Builds the diagonal form

    sum over sigma in S_0 of  sigma*(x1^2 + x2^2 + x3^2 + x4^2) + sigma*eps*(x5^2 + x6^2 + x7^2 + x8^2)

with 8*M_D variables and represents every totally positive integer by it in
three steps: split x into indecomposables, collect them by their S_0
representative as polynomials in eps with nonnegative coefficients, and write
each polynomial as c*eps^i + d*eps^(i+1), which one octad represents through the
four-square theorem.

A brute-force search (represent) checks representability independently.
"""

# Imports from Python Standard Library
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

# Imports from external packages
import mpmath
from mpmath import iv
from sympy.solvers.diophantine.diophantine import sum_of_four_squares

# Local imports
from scripts.contfrac import CFExpansion
from scripts.indecomp import M_D, M_star_both, enumerate_S0, window_shift
from scripts.quadfield import (
    FieldCtx,
    QuadInt,
    ceil_upper,
    embed_approx,
    interval_lower,
    interval_precision,
    interval_upper,
    unit_power,
)
from utils.config import get_precision_bits
from utils.errors import (
    InvariantViolation,
    NotTotallyPositive,
    NotTotallyPositiveTarget,
    ZeroInput,
)
from utils.logger import logger

# four_square searches exhaustively up to this value, then defers to sympy
EXHAUSTIVE_FOUR_SQUARE_LIMIT = 10**6


@dataclass(frozen=True)
class DiagonalForm:
    """a_1 x_1^2 + ... + a_m x_m^2 with totally positive a_j."""

    coeffs: tuple[QuadInt, ...]

    def __post_init__(self):
        for a in self.coeffs:
            if not a.is_totally_positive():
                raise InvariantViolation(f"form coefficient {a} is not totally positive")

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    def evaluate(self, values: list[QuadInt]) -> QuadInt:
        if len(values) != self.arity:
            raise ValueError(f"form has {self.arity} variables, got {len(values)} values")
        total = self.coeffs[0].ctx.zero
        for a, x in zip(self.coeffs, values):
            total = total + a * x * x
        return total


@dataclass(frozen=True)
class UnitPoly:
    """sum of e_i eps^i with e_i >= 0, stored as sorted (i, e_i) pairs with e_i > 0."""

    terms: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, coefficients: dict) -> "UnitPoly":
        for i, e in coefficients.items():
            if e < 0:
                raise ValueError(f"negative coefficient {e} at eps^{i}")
        return cls(tuple(sorted((int(i), int(e)) for i, e in coefficients.items() if e)))

    @classmethod
    def monomial(cls, i: int, e: int = 1) -> "UnitPoly":
        return cls.from_dict({i: e})

    @property
    def coefficients(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, eps: QuadInt) -> QuadInt:
        total = eps.ctx.zero
        for i, e in self.terms:
            total = total + unit_power(eps, i) * e
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{e}*eps^{i}" for i, e in self.terms)


@dataclass(frozen=True)
class LowerBounds:
    ratio_bound: Fraction
    mstar_a: int
    mstar_b: int

    def to_dict(self) -> dict:
        return {
            "ratio_bound": str(self.ratio_bound),
            "mstar_a": self.mstar_a,
            "mstar_b": self.mstar_b,
        }


# ---------------------------------------------------------------------------
# Decomposition into indecomposables
# ---------------------------------------------------------------------------


def _log_embeddings(x: QuadInt, bits: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    first, second = embed_approx(x, bits)
    with interval_precision(bits):
        return interval_lower(iv.ln(first)), interval_lower(iv.ln(second))


def _power_range(sigma_logs, remaining_logs, log_eps) -> range:
    """Exponents k with sigma*eps^k possibly below remaining in both embeddings, widened by one."""
    high = int(mpmath.floor((remaining_logs[0] - sigma_logs[0]) / log_eps)) + 1
    low = int(mpmath.ceil((sigma_logs[1] - remaining_logs[1]) / log_eps)) - 1
    return range(low, high + 1)


def decompose_indecomposables(ctx: FieldCtx, cf: CFExpansion, x: QuadInt) -> list[QuadInt]:
    """
    Split x into indecomposables by repeatedly removing the largest-trace one that fits.

    Candidates are sigma*eps^k with sigma in S_0 or conj(S_0); k is bounded through
    logarithms of the embeddings and every candidate is then checked exactly.

    Raises:
        NotTotallyPositive: If x is not totally positive.
    """
    if not x.is_totally_positive():
        raise NotTotallyPositive(f"{x} is not totally positive")
    bits = get_precision_bits()
    eps = cf.eps
    log_eps = _log_embeddings(eps, bits)[0]
    window = enumerate_S0(cf).values
    sigmas = list(window) + [s.conjugate() for s in window if s.conjugate() not in window]
    sigma_logs = [_log_embeddings(s, bits) for s in sigmas]
    parts = []
    remaining = x
    while remaining:
        remaining_logs = _log_embeddings(remaining, bits)
        best: Optional[QuadInt] = None
        for sigma, logs in zip(sigmas, sigma_logs):
            for k in _power_range(logs, remaining_logs, log_eps):
                candidate = sigma * unit_power(eps, k)
                if best is not None and candidate.trace() <= best.trace():
                    continue
                if (remaining - candidate).is_totally_nonnegative():
                    best = candidate
        if best is None:
            raise InvariantViolation(f"D={ctx.D}: no indecomposable fits below {remaining}")
        parts.append(best)
        remaining = remaining - best
    logger.debug(f"D={ctx.D}: {x} split into {len(parts)} indecomposables")
    return parts


def collect_by_S0(ctx: FieldCtx, cf: CFExpansion, decomposition: list[QuadInt]) -> dict:
    """
    Group indecomposables by their S_0 representative.

    Returns:
        dict: sigma -> UnitPoly, in S_0 order, with sum of sigma*P_sigma(eps) equal to the input sum.
    """
    window = enumerate_S0(cf).values
    members = set(window)
    collected: dict = {sigma: {} for sigma in window}
    for part in decomposition:
        sigma, k = window_shift(cf, part)
        if sigma not in members:
            raise InvariantViolation(f"D={ctx.D}: indecomposable {part} shifts to {sigma}, which is not in S_0")
        collected[sigma][k] = collected[sigma].get(k, 0) + 1
    return {sigma: UnitPoly.from_dict(terms) for sigma, terms in collected.items()}


# ---------------------------------------------------------------------------
# Reducing polynomials in eps
# ---------------------------------------------------------------------------


def claim_coefficients(trace_eps: int, length: int) -> list[int]:
    """
    b_1, ..., b_{length-1} with eps^length + 1 = sum of b_j eps^j.

    From eps^2 = A*eps - 1 (A = Tr eps >= 3): b = [A] for length 2, and each
    further step maps b to [A - 1, b_1 - 1, b_2, ..., b_{length-1}]. All b_j
    stay nonnegative and b_1 > 0.
    """
    if length < 2:
        raise ValueError(f"length must be at least 2, got {length}")
    b = [trace_eps]
    for _ in range(length - 2):
        b = [trace_eps - 1, b[0] - 1] + b[1:]
    return b


def unit_reduce(ctx: FieldCtx, cf: CFExpansion, e: UnitPoly) -> tuple[int, int, int]:
    """
    Rewrite e as c*eps^i + d*eps^(i+1) with c, d >= 0.

    While the exponents span at least two, the smaller of the two extreme
    coefficients is cancelled against the other end through
    eps^i0 + eps^i1 = sum of b_j eps^(i0+j); every new exponent lies strictly
    inside, so the span shrinks.

    Raises:
        ZeroInput: If e is the zero polynomial.
    """
    if e.is_zero():
        raise ZeroInput("cannot reduce the zero polynomial")
    A = cf.eps.trace()
    terms = e.coefficients
    while max(terms) - min(terms) >= 2:
        i0, i1 = min(terms), max(terms)
        b = claim_coefficients(A, i1 - i0)
        if terms[i0] >= terms[i1]:
            moved = terms.pop(i1)
            terms[i0] -= moved
            if terms[i0] == 0:
                del terms[i0]
        else:
            moved = terms.pop(i0)
            terms[i1] -= moved
        for j, b_j in enumerate(b, start=1):
            if b_j:
                terms[i0 + j] = terms.get(i0 + j, 0) + moved * b_j
    i = min(terms)
    c, d = terms.get(i, 0), terms.get(i + 1, 0)
    if unit_power(cf.eps, i) * c + unit_power(cf.eps, i + 1) * d != e.evaluate(cf.eps):
        raise InvariantViolation(f"D={ctx.D}: reduction of {e} does not re-evaluate to the input")
    return c, d, i


def four_square(n: int) -> tuple[int, int, int, int]:
    """
    (t1, t2, t3, t4) with t1^2 + t2^2 + t3^2 + t4^2 = n.

    Up to EXHAUSTIVE_FOUR_SQUARE_LIMIT the lexicographically least solution is
    returned (it is automatically nondecreasing); beyond it sympy supplies one.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > EXHAUSTIVE_FOUR_SQUARE_LIMIT:
        return tuple(int(t) for t in sum_of_four_squares(n))
    for t1 in range(math.isqrt(n // 4) + 1):
        r1 = n - t1 * t1
        for t2 in range(t1, math.isqrt(r1 // 3) + 1):
            r2 = r1 - t2 * t2
            for t3 in range(t2, math.isqrt(r2 // 2) + 1):
                r3 = r2 - t3 * t3
                t4 = math.isqrt(r3)
                if t4 * t4 == r3:
                    return t1, t2, t3, t4
    raise InvariantViolation(f"no four-square representation found for {n}")


def represent_in_octad(ctx: FieldCtx, cf: CFExpansion, e: UnitPoly) -> tuple[QuadInt, ...]:
    """
    x_1..x_8 with x_1^2 + ... + x_4^2 + eps*(x_5^2 + ... + x_8^2) = e(eps).

    With e = c*eps^i + d*eps^(i+1): for i even, c*eps^i goes to the first four
    variables scaled by eps^(i/2) and d*eps^(i+1) to the last four; for i odd
    the roles swap, using eps^((i+1)/2) and eps^((i-1)/2). Squares are listed
    largest first.

    Raises:
        ZeroInput: If e is the zero polynomial.
    """
    c, d, i = unit_reduce(ctx, cf, e)
    eps = cf.eps
    t_c = tuple(reversed(four_square(c)))
    t_d = tuple(reversed(four_square(d)))
    if i % 2 == 0:
        first, second = [eps_scaled(t, eps, i // 2) for t in (t_c, t_d)]
    else:
        first, second = eps_scaled(t_d, eps, (i + 1) // 2), eps_scaled(t_c, eps, (i - 1) // 2)
    values = first + second
    total = sum((v * v for v in values[:4]), ctx.zero) + eps * sum((v * v for v in values[4:]), ctx.zero)
    if total != e.evaluate(eps):
        raise InvariantViolation(f"D={ctx.D}: octad for {e} evaluates to {total}")
    return values


def eps_scaled(t: tuple[int, ...], eps: QuadInt, power: int) -> tuple[QuadInt, ...]:
    scale = unit_power(eps, power)
    return tuple(scale * int(v) for v in t)


# ---------------------------------------------------------------------------
# The universal form and witnesses
# ---------------------------------------------------------------------------


def construct_universal_form(ctx: FieldCtx, cf: CFExpansion) -> DiagonalForm:
    """For each sigma in S_0: sigma four times, then sigma*eps four times."""
    coeffs = []
    for sigma in enumerate_S0(cf).values:
        coeffs.extend([sigma] * 4)
        coeffs.extend([sigma * cf.eps] * 4)
    form = DiagonalForm(tuple(coeffs))
    if form.arity != 8 * M_D(cf):
        raise InvariantViolation(f"D={ctx.D}: form has {form.arity} variables, expected {8 * M_D(cf)}")
    return form


def witness_via_construction(ctx: FieldCtx, cf: CFExpansion, x: QuadInt) -> list[QuadInt]:
    """
    Values for the variables of construct_universal_form that represent x.

    Raises:
        NotTotallyPositive: If x is not totally positive.
        InvariantViolation: If the assembled values do not evaluate to x.
    """
    form = construct_universal_form(ctx, cf)
    decomposition = decompose_indecomposables(ctx, cf, x)
    collected = collect_by_S0(ctx, cf, decomposition)
    values = []
    for sigma, poly in collected.items():
        if poly.is_zero():
            values.extend([ctx.zero] * 8)
        else:
            values.extend(represent_in_octad(ctx, cf, poly))
    if form.evaluate(values) != x:
        raise InvariantViolation(f"D={ctx.D}: constructed witness evaluates to {form.evaluate(values)}, not {x}")
    return values


def _candidates(ctx: FieldCtx, a: QuadInt, remaining: QuadInt, bits: int) -> list[QuadInt]:
    """
    Every y with a*y^2 below remaining in both embeddings, y = 0 or y positive in the first embedding.

    |y_j| <= sqrt(remaining_j / a_j) in each embedding, y_1 - y_2 = b*sqrt(Delta)
    and y_1 + y_2 = Tr y give integer ranges for both coordinates.
    """
    if not remaining:
        return [ctx.zero]
    r1, r2 = embed_approx(remaining, bits)
    a1, a2 = embed_approx(a, bits)
    with interval_precision(bits + remaining.trace().bit_length() + 16):
        spread = iv.sqrt(iv.mpf(interval_upper(r1)) / iv.mpf(interval_lower(a1)))
        spread = spread + iv.sqrt(iv.mpf(interval_upper(r2)) / iv.mpf(interval_lower(a2)))
        t_max = ceil_upper(spread)
        b_max = ceil_upper(spread / iv.sqrt(iv.mpf(ctx.Delta)))
    t = ctx.trace_omega
    found = []
    for b in range(-b_max, b_max + 1):
        low = -((t_max + b * t) // 2)
        high = (t_max - b * t) // 2
        for a_coord in range(low, high + 1):
            y = QuadInt(a_coord, b, ctx)
            if y and y.sign() <= 0:
                continue
            if (remaining - a * y * y).is_totally_nonnegative():
                found.append(y)
    found.sort(key=lambda y: (-(a * y * y).trace(), y.a, y.b))
    return found


def represent(ctx: FieldCtx, form: DiagonalForm, x: QuadInt) -> Optional[list[QuadInt]]:
    """
    Exhaustive search for values with form(values) = x.

    Args:
        ctx (FieldCtx): The field.
        form (DiagonalForm): Totally positive diagonal form.
        x (QuadInt): Target, totally positive or zero.

    Returns:
        list[QuadInt] or None: A witness, or None when x is not represented.

    Raises:
        NotTotallyPositiveTarget: If x is neither zero nor totally positive.
    """
    if not x.is_totally_nonnegative():
        raise NotTotallyPositiveTarget(f"target {x} is not totally positive")
    bits = get_precision_bits()
    coeffs = form.coeffs
    failed: set = set()

    def search(index: int, remaining: QuadInt) -> Optional[list[QuadInt]]:
        if not remaining:
            return [ctx.zero] * (len(coeffs) - index)
        if index == len(coeffs) or (index, remaining) in failed:
            return None
        for y in _candidates(ctx, coeffs[index], remaining, bits):
            rest = search(index + 1, remaining - coeffs[index] * y * y)
            if rest is not None:
                return [y] + rest
        failed.add((index, remaining))
        return None

    witness = search(0, x)
    if witness is not None and form.evaluate(witness) != x:
        raise InvariantViolation(f"D={ctx.D}: search witness evaluates to {form.evaluate(witness)}, not {x}")
    return witness


def mdiag_lower_bounds(cf: CFExpansion, eps_param: Union[Fraction, int, float, str]) -> LowerBounds:
    """M_D/(kappa*s) exactly, with M* under both conventions; no constant is attached to M*."""
    window = enumerate_S0(cf)
    mstar_a, mstar_b = M_star_both(cf, eps_param)
    return LowerBounds(
        ratio_bound=Fraction(window.M_D, window.kappa * cf.s),
        mstar_a=mstar_a,
        mstar_b=mstar_b,
    )
