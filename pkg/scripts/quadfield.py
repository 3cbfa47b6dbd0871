"""
Exact Arithmetic in Real Quadratic Fields
File: scripts/quadfield.py

Elements of the ring of integers O_K = Z[w] of K = Q(sqrt D) are stored in the
integral basis {1, w}, where w = sqrt D when D = 2, 3 (mod 4) and
w = (1 + sqrt D)/2 when D = 1 (mod 4). Field elements with rational coordinates
(needed for continued-fraction tails and ideal generators) are stored over
{1, sqrt D} in QuadRat.

Every order decision (signs of embeddings, total positivity, ratio windows) is
made with integer arithmetic only. Interval enclosures from mpmath are used for
search-box bounds and never for a yes/no decision.
"""

# Imports from Python Standard Library
import contextlib
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

# Imports from external packages
import mpmath
from mpmath import iv

# Local imports
from utils.errors import ContextMismatch, DTooSmall, NotSquarefree, ZeroInput

FIRST = "first"
SECOND = "second"


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldCtx:
    """The field Q(sqrt D) together with its discriminant and the shape of w."""

    D: int
    case: int  # 1 when D = 1 (mod 4), else D mod 4 (2 or 3)
    Delta: int

    @property
    def trace_omega(self) -> int:
        return 1 if self.case == 1 else 0

    @property
    def norm_omega(self) -> int:
        return (1 - self.D) // 4 if self.case == 1 else -self.D

    @property
    def omega_shift(self) -> int:
        """t in w = (t + sqrt D)/q."""
        return 1 if self.case == 1 else 0

    @property
    def omega_denominator(self) -> int:
        """q in w = (t + sqrt D)/q."""
        return 2 if self.case == 1 else 1

    @property
    def omega_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates of w over {1, sqrt D}."""
        q = self.omega_denominator
        return Fraction(self.omega_shift, q), Fraction(1, q)

    @property
    def one(self) -> "QuadInt":
        return QuadInt(1, 0, self)

    @property
    def zero(self) -> "QuadInt":
        return QuadInt(0, 0, self)

    @property
    def omega(self) -> "QuadInt":
        return QuadInt(0, 1, self)

    def element(self, a: int, b: int = 0) -> "QuadInt":
        return QuadInt(a, b, self)


@functools.lru_cache(maxsize=None)
def make_context(D: int) -> FieldCtx:
    """
    Build the context for Q(sqrt D).

    Args:
        D (int): Squarefree integer greater than 1.

    Returns:
        FieldCtx: The field context.

    Raises:
        DTooSmall: If D <= 1.
        NotSquarefree: If p^2 divides D for some prime p.
    """
    if isinstance(D, bool) or not isinstance(D, int):
        raise DTooSmall(f"D must be an integer, got {D!r}")
    if D <= 1:
        raise DTooSmall(f"D must be greater than 1, got {D}")
    p = 2
    while p * p <= D:
        if D % (p * p) == 0:
            raise NotSquarefree(f"D = {D} is divisible by {p}^2")
        p += 1
    residue = D % 4
    if residue == 1:
        return FieldCtx(D=D, case=1, Delta=D)
    return FieldCtx(D=D, case=residue, Delta=4 * D)


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def _sign(n: Union[int, Fraction]) -> int:
    return (n > 0) - (n < 0)


def surd_sign(X: Union[int, Fraction], Y: Union[int, Fraction], D: int) -> int:
    """Exact sign of X + Y sqrt D for rational X, Y and nonsquare D > 1."""
    if Y == 0:
        return _sign(X)
    if X == 0:
        return _sign(Y)
    if (X > 0) == (Y > 0):
        return _sign(X)
    # opposite signs: the larger square wins, never equal since D is not a square
    return _sign(X) if X * X > Y * Y * D else -_sign(X)


# ---------------------------------------------------------------------------
# Integers of the field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadInt:
    """The algebraic integer a + b*w of O_K."""

    a: int
    b: int
    ctx: FieldCtx

    def _check(self, other: "QuadInt") -> None:
        if self.ctx.D != other.ctx.D:
            raise ContextMismatch(f"cannot combine elements of Q(sqrt {self.ctx.D}) and Q(sqrt {other.ctx.D})")

    def _coerce(self, other: Union["QuadInt", int]) -> "QuadInt":
        if isinstance(other, QuadInt):
            self._check(other)
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.ctx)
        return NotImplemented

    def __add__(self, other: Union["QuadInt", int]) -> "QuadInt":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadInt(self.a + other.a, self.b + other.b, self.ctx)

    __radd__ = __add__

    def __sub__(self, other: Union["QuadInt", int]) -> "QuadInt":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadInt(self.a - other.a, self.b - other.b, self.ctx)

    def __rsub__(self, other: int) -> "QuadInt":
        return (-self) + other

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.a, -self.b, self.ctx)

    def __mul__(self, other: Union["QuadInt", int]) -> "QuadInt":
        if isinstance(other, int):
            return QuadInt(self.a * other, self.b * other, self.ctx)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # w^2 = Tr(w) w - N(w)
        bb = self.b * other.b
        return QuadInt(
            self.a * other.a - self.ctx.norm_omega * bb,
            self.a * other.b + other.a * self.b + self.ctx.trace_omega * bb,
            self.ctx,
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "QuadInt":
        if exponent < 0:
            raise ValueError("negative powers are only defined for units; use unit_power")
        result = self.ctx.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __str__(self) -> str:
        symbol = "w"
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}{symbol}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}{symbol}"

    def conjugate(self) -> "QuadInt":
        return QuadInt(self.a + self.b * self.ctx.trace_omega, -self.b, self.ctx)

    def norm(self) -> int:
        return self.a * self.a + self.a * self.b * self.ctx.trace_omega + self.b * self.b * self.ctx.norm_omega

    def trace(self) -> int:
        return 2 * self.a + self.b * self.ctx.trace_omega

    def content(self) -> int:
        """gcd of the coordinates; 0 for the zero element."""
        return math.gcd(self.a, self.b)

    def surd_coords(self) -> tuple[int, int, int]:
        """(X, Y, q) with q*(a + b*w) = X + Y*sqrt D."""
        q = self.ctx.omega_denominator
        return q * self.a + self.b * self.ctx.omega_shift, self.b, q

    def sign(self, which: str = FIRST) -> int:
        X, Y, _ = self.surd_coords()
        return surd_sign(X, Y if which == FIRST else -Y, self.ctx.D)

    def is_totally_positive(self) -> bool:
        return self.sign(FIRST) > 0 and self.sign(SECOND) > 0

    def is_totally_nonnegative(self) -> bool:
        """Totally positive or zero."""
        return not self or self.is_totally_positive()

    def to_quadrat(self) -> "QuadRat":
        X, Y, q = self.surd_coords()
        return QuadRat(Fraction(X, q), Fraction(Y, q), self.ctx)

    def as_pair(self) -> list[int]:
        return [self.a, self.b]


# Module-level names for the ring operations


def add(x: QuadInt, y: QuadInt) -> QuadInt:
    return x + y


def sub(x: QuadInt, y: QuadInt) -> QuadInt:
    return x - y


def neg(x: QuadInt) -> QuadInt:
    return -x


def mul(x: QuadInt, y: QuadInt) -> QuadInt:
    return x * y


def conjugate(x: QuadInt) -> QuadInt:
    return x.conjugate()


def norm(x: QuadInt) -> int:
    return x.norm()


def trace(x: QuadInt) -> int:
    return x.trace()


def sign_embedding(x: QuadInt, which: str) -> int:
    """
    Exact sign of the first (sqrt D > 0) or second (sqrt D < 0) real embedding of x.

    Args:
        x (QuadInt): Element to inspect.
        which (str): "first" or "second".

    Returns:
        int: -1, 0 or +1.
    """
    if which not in (FIRST, SECOND):
        raise ValueError(f"which must be {FIRST!r} or {SECOND!r}, got {which!r}")
    return x.sign(which)


def is_totally_positive(x: QuadInt) -> bool:
    return x.is_totally_positive()


def succeeds(x: QuadInt, y: QuadInt) -> bool:
    """x > y in the totally positive order."""
    return (x - y).is_totally_positive()


def unit_inverse(unit: QuadInt) -> QuadInt:
    n = unit.norm()
    if n not in (1, -1):
        raise ValueError(f"{unit} is not a unit (norm {n})")
    return unit.conjugate() * n


def unit_power(unit: QuadInt, k: int) -> QuadInt:
    """unit^k for any integer k."""
    if k >= 0:
        return unit ** k
    return unit_inverse(unit) ** (-k)


# ---------------------------------------------------------------------------
# Ratio windows (unit normalisation)
# ---------------------------------------------------------------------------


def ratio_at_least_one(x: QuadInt) -> bool:
    """For totally positive x: first embedding >= second embedding."""
    return x.b >= 0


def abs_ratio_at_least_one(x: QuadInt) -> bool:
    """|first embedding| >= |second embedding|, i.e. (x1 - x2)(x1 + x2) >= 0."""
    return _sign(x.b) * _sign(x.trace()) >= 0


def unit_normalize(x: QuadInt, unit: QuadInt) -> QuadInt:
    """
    Canonical associate of x under multiplication by +-unit^k.

    The result y has positive first embedding and 1 <= |y/conj(y)| < unit^2,
    where unit is taken with first embedding > 1. Two nonzero elements are
    associate under +-unit^Z exactly when their canonical associates agree.

    Raises:
        ZeroInput: If x is zero.
    """
    if not x:
        raise ZeroInput("the zero element has no associates")
    inverse = unit_inverse(unit)
    while not abs_ratio_at_least_one(x):
        x = x * unit
    shifted = x * inverse
    while abs_ratio_at_least_one(shifted):
        x = shifted
        shifted = x * inverse
    return -x if x.sign(FIRST) < 0 else x


# ---------------------------------------------------------------------------
# Field elements with rational coordinates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadRat:
    """The field element x + y*sqrt D with rational x, y."""

    x: Fraction
    y: Fraction
    ctx: FieldCtx

    @classmethod
    def of(cls, value: Union[int, Fraction], ctx: FieldCtx) -> "QuadRat":
        return cls(Fraction(value), Fraction(0), ctx)

    @classmethod
    def sqrt_delta(cls, ctx: FieldCtx) -> "QuadRat":
        return cls(Fraction(0), Fraction(1 if ctx.case == 1 else 2), ctx)

    def _coerce(self, other: Union["QuadRat", QuadInt, int, Fraction]) -> "QuadRat":
        if isinstance(other, QuadRat):
            if other.ctx.D != self.ctx.D:
                raise ContextMismatch(f"cannot combine elements of Q(sqrt {self.ctx.D}) and Q(sqrt {other.ctx.D})")
            return other
        if isinstance(other, QuadInt):
            if other.ctx.D != self.ctx.D:
                raise ContextMismatch(f"cannot combine elements of Q(sqrt {self.ctx.D}) and Q(sqrt {other.ctx.D})")
            return other.to_quadrat()
        if isinstance(other, (int, Fraction)):
            return QuadRat.of(other, self.ctx)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadRat(self.x + other.x, self.y + other.y, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadRat(self.x - other.x, self.y - other.y, self.ctx)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> "QuadRat":
        return QuadRat(-self.x, -self.y, self.ctx)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        D = self.ctx.D
        return QuadRat(self.x * other.x + D * self.y * other.y, self.x * other.y + self.y * other.x, self.ctx)

    __rmul__ = __mul__

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt D)")
        return QuadRat(self.x / n, -self.y / n, self.ctx)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def conjugate(self) -> "QuadRat":
        return QuadRat(self.x, -self.y, self.ctx)

    def norm(self) -> Fraction:
        return self.x * self.x - self.ctx.D * self.y * self.y

    def sign(self, which: str = FIRST) -> int:
        return surd_sign(self.x, self.y if which == FIRST else -self.y, self.ctx.D)

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def is_integral(self) -> bool:
        q = self.ctx.omega_denominator
        b = self.y * q
        a = self.x - b * Fraction(self.ctx.omega_shift, q)
        return a.denominator == 1 and b.denominator == 1

    def to_quadint(self) -> QuadInt:
        """Coordinates over {1, w}; raises ValueError when the element is not integral."""
        q = self.ctx.omega_denominator
        b = self.y * q
        a = self.x - b * Fraction(self.ctx.omega_shift, q)
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"{self} is not an algebraic integer")
        return QuadInt(int(a), int(b), self.ctx)

    def __str__(self) -> str:
        return f"{self.x} + {self.y}*sqrt({self.ctx.D})"


# ---------------------------------------------------------------------------
# Certified approximations
# ---------------------------------------------------------------------------


@contextlib.contextmanager
def interval_precision(bits: int) -> Iterator[None]:
    """Temporarily set the working precision of mpmath's interval context."""
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def interval_lower(value) -> mpmath.mpf:
    return mpmath.mp.make_mpf(value._mpi_[0])


def interval_upper(value) -> mpmath.mpf:
    return mpmath.mp.make_mpf(value._mpi_[1])


def ceil_upper(value) -> int:
    """Smallest integer >= every point of the interval."""
    return int(mpmath.ceil(interval_upper(value)))


def floor_lower(value) -> int:
    return int(mpmath.floor(interval_lower(value)))


def embed_approx(x: QuadInt, precision_bits: int):
    """
    Interval enclosures of both real embeddings of x.

    The working precision is raised by the size of the coordinates so that
    cancellation (small conjugates of large elements) still leaves an absolute
    width of at most 2^-precision_bits * max(1, |x|).

    Args:
        x (QuadInt): Element to embed.
        precision_bits (int): Target precision, at least 8.

    Returns:
        tuple: (first, second) as mpmath interval numbers.
    """
    if precision_bits < 8:
        raise ValueError(f"precision_bits must be at least 8, got {precision_bits}")
    X, Y, q = x.surd_coords()
    working = precision_bits + max(abs(X).bit_length(), abs(Y).bit_length()) + x.ctx.D.bit_length() + 16
    with interval_precision(working):
        if Y == 0:
            value = iv.mpf(X) / q
            return value, value
        root = iv.sqrt(iv.mpf(x.ctx.D))
        first = (iv.mpf(X) + iv.mpf(Y) * root) / q
        second = (iv.mpf(X) - iv.mpf(Y) * root) / q
        return first, second


# ---------------------------------------------------------------------------
# Enumeration helpers
# ---------------------------------------------------------------------------


def totally_positive_up_to_trace(ctx: FieldCtx, max_trace: int) -> list[QuadInt]:
    """
    All totally positive integers with trace at most max_trace, ordered by (trace, b).

    Totally positive x has |x1 - x2| < x1 + x2, and x1 - x2 = b*(w - w') with
    w - w' >= 1, so |b| < max_trace bounds the search.
    """
    found = []
    t = ctx.trace_omega
    for b in range(-max_trace, max_trace + 1):
        # trace = 2a + b*t must lie in [2, max_trace]
        low = -((b * t - 2) // 2)  # ceil((2 - b t)/2)
        high = (max_trace - b * t) // 2
        for a in range(low, high + 1):
            x = QuadInt(a, b, ctx)
            if x.is_totally_positive():
                found.append(x)
    found.sort(key=lambda e: (e.trace(), e.b))
    return found


def box_elements(ctx: FieldCtx, bound: int) -> Iterator[QuadInt]:
    """Every a + b*w with |a|, |b| <= bound, in lexicographic order."""
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            yield QuadInt(a, b, ctx)
