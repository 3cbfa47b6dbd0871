"""
Reduced Ideals and Principal Ideals
File: scripts/ideals.py

A primitive ideal of norm a has the Z-basis [a, (b + sqrt Delta)/2] with
b^2 = Delta (mod 4a), and it equals a*(Z + Z*theta) for the surd
theta = (b + sqrt Delta)/(2a). Two ideals are in the same class exactly when
their surds are GL2(Z)-equivalent, i.e. when their continued fractions end in
the same cycle of reduced surds. This gives

    - the class number h as the number of reduced cycles, and
    - a principality test with an explicit generator: once theta reaches a
      state c_j of the cycle of w, the lattice is carried back to O_K with the
      convergent denominators of theta and of w.

Everything is exact; no numerical approximation is involved.
"""

# Imports from Python Standard Library
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

# Imports from external packages
from sympy import divisors
from sympy.ntheory import sqrt_mod

# Local imports
from scripts.contfrac import CFExpansion, Surd, omega_surd
from scripts.quadfield import FieldCtx, QuadInt, unit_normalize
from utils.errors import InvariantViolation
from utils.logger import logger


@dataclass(frozen=True)
class PrincipalIdealRecord:
    """One principal ideal k*[a, (b + sqrt Delta)/2] of norm k^2 a."""

    norm: int
    generator: QuadInt
    primitive: bool
    neg_norm_generator: bool
    k: int = 1
    b: int = 0

    def to_dict(self) -> dict:
        return {
            "norm": self.norm,
            "generator": self.generator.as_pair(),
            "primitive": self.primitive,
            "neg_norm_generator": self.neg_norm_generator,
        }


@dataclass(frozen=True)
class ClassCycles:
    """Reduced surds of ideal type grouped into cycles of the continued-fraction step."""

    cycles: tuple[tuple[Surd, ...], ...]
    cycle_of: dict  # Surd -> cycle index

    @property
    def class_number(self) -> int:
        return len(self.cycles)


def ideal_surd(ctx: FieldCtx, a: int, b: int) -> Surd:
    """theta = (b + sqrt Delta)/(2a) written as (P + sqrt D)/Q."""
    if ctx.case == 1:
        return Surd(b, 2 * a, ctx.D)
    return Surd(b // 2, a, ctx.D)


def reduced_surds(ctx: FieldCtx) -> list[Surd]:
    """
    All reduced surds (P + sqrt D)/Q that come from ideals of O_K.

    Reduced means 0 < P < sqrt D and sqrt D - P < Q < sqrt D + P. For D = 1 (mod 4)
    ideal surds additionally have Q even with 2Q | D - P^2.
    """
    D = ctx.D
    found = []
    for P in range(1, math.isqrt(D) + 1):
        M = D - P * P
        for Q in divisors(M):
            if (Q + P) * (Q + P) <= D:
                continue
            if Q > P and (Q - P) * (Q - P) >= D:
                continue
            if ctx.case == 1 and (Q % 2 != 0 or M % (2 * Q) != 0):
                continue
            found.append(Surd(P, int(Q), D))
    return found


@functools.lru_cache(maxsize=1024)
def class_cycles(ctx: FieldCtx) -> ClassCycles:
    """Partition the reduced ideal surds into cycles; the step map permutes them."""
    surds = reduced_surds(ctx)
    members = set(surds)
    cycle_of: dict = {}
    cycles = []
    for start in sorted(surds, key=lambda t: (t.Q, t.P)):
        if start in cycle_of:
            continue
        cycle = [start]
        cycle_of[start] = len(cycles)
        _, state = start.step()
        while state != start:
            if state not in members or state in cycle_of:
                raise InvariantViolation(f"D={ctx.D}: reduced surd {state} breaks the cycle structure")
            cycle_of[state] = len(cycles)
            cycle.append(state)
            _, state = state.step()
        cycles.append(tuple(cycle))
    logger.debug(f"D={ctx.D}: {len(surds)} reduced surds in {len(cycles)} cycles")
    return ClassCycles(cycles=tuple(cycles), cycle_of=cycle_of)


def class_number(ctx: FieldCtx) -> int:
    """h, counted as the number of cycles of reduced ideal surds."""
    return class_cycles(ctx).class_number


def narrow_class_number(cf: CFExpansion) -> int:
    """h+ = h when a unit of norm -1 exists (s odd), else 2h."""
    h = class_number(cf.ctx)
    return h if cf.s % 2 == 1 else 2 * h


def primitive_ideals(ctx: FieldCtx, a: int) -> list[int]:
    """The values b mod 2a with b^2 = Delta (mod 4a), one per primitive ideal of norm a."""
    modulus = 4 * a
    roots = sqrt_mod(ctx.Delta % modulus, modulus, all_roots=True) or []
    values = sorted({int(r) % (2 * a) for r in roots})
    return [b for b in values if (b * b - ctx.Delta) % modulus == 0]


def _principal_states(cf: CFExpansion) -> dict:
    return {cf.state(j): j for j in range(1, cf.s + 1)}


def principal_generator(ctx: FieldCtx, cf: CFExpansion, a: int, b: int) -> Optional[QuadInt]:
    """
    A generator of the primitive ideal [a, (b + sqrt Delta)/2], or None when it is not principal.

    Args:
        ctx (FieldCtx): The field.
        cf (CFExpansion): Expansion of w.
        a (int): Norm of the ideal.
        b (int): Second basis parameter, b^2 = Delta (mod 4a).

    Returns:
        QuadInt or None: g with (g) equal to the ideal.
    """
    cycles = class_cycles(ctx)
    principal = _principal_states(cf)
    state = ideal_surd(ctx, a, b)
    # denominators k_{j-2}, k_{j-1} of the convergents of theta
    k_before, k_last = 1, 0
    limit = 4 * (a.bit_length() + ctx.D.bit_length()) + 64
    steps = 0
    while state not in cycles.cycle_of:
        u, state = state.step()
        k_before, k_last = k_last, u * k_last + k_before
        steps += 1
        if steps > limit:
            raise InvariantViolation(f"D={ctx.D}: ideal ({a}, {b}) did not reach a reduced surd in {limit} steps")
    j = principal.get(state)
    if j is None:
        return None
    c_j = state.to_quadrat(ctx)
    q1, q2 = cf.convergent(j - 1)[1], cf.convergent(j - 2)[1]
    scale = (c_j * q1 + q2) / (c_j * k_last + k_before)
    candidate = scale * a
    if not candidate.is_integral():
        raise InvariantViolation(f"D={ctx.D}: transported generator {candidate} of ideal ({a}, {b}) is not integral")
    generator = candidate.to_quadint()
    if abs(generator.norm()) != a:
        raise InvariantViolation(f"D={ctx.D}: generator {generator} of ideal ({a}, {b}) has norm {generator.norm()}")
    return generator


def is_principal(ctx: FieldCtx, a: int, b: int) -> bool:
    """Principality from the cycle alone, without building a generator."""
    cycles = class_cycles(ctx)
    state = ideal_surd(ctx, a, b)
    while state not in cycles.cycle_of:
        _, state = state.step()
    _, first = omega_surd(ctx).step()
    return cycles.cycle_of[state] == cycles.cycle_of[first]


def enumerate_principal_ideals(ctx: FieldCtx, cf: CFExpansion, X: int) -> list[PrincipalIdealRecord]:
    """
    Every principal ideal of norm at most X, one record each.

    An ideal is k times a primitive ideal; it is principal exactly when the
    primitive part is. Generators are canonical associates under +-eps0^Z.

    Args:
        ctx (FieldCtx): The field.
        cf (CFExpansion): Expansion of w.
        X (int): Norm bound.

    Returns:
        list[PrincipalIdealRecord]: Sorted by norm, then by generator coordinates.
    """
    records = []
    for a in range(1, int(X) + 1):
        for b in primitive_ideals(ctx, a):
            generator = principal_generator(ctx, cf, a, b)
            if generator is None:
                continue
            negative = cf.s % 2 == 1 or generator.norm() < 0
            k = 1
            while k * k * a <= X:
                records.append(
                    PrincipalIdealRecord(
                        norm=k * k * a,
                        generator=unit_normalize(generator * k, cf.eps0),
                        primitive=k == 1,
                        neg_norm_generator=negative,
                        k=k,
                        b=b,
                    )
                )
                k += 1
    records.sort(key=lambda r: (r.norm, r.generator.a, r.generator.b))
    logger.debug(f"D={ctx.D}: {len(records)} principal ideals of norm <= {X}")
    return records


def harmonic_sum(records: list[PrincipalIdealRecord]) -> Fraction:
    """Sum of 1/Na over the records, exactly."""
    return sum((Fraction(1, r.norm) for r in records), Fraction(0))
