"""Exact multivariate truncated formal power series over the rationals.

Series live over a :class:`Frame` (named generators with a positive
integer grading and an integer boundary grading) and are truncated by
weighted total grade.  Coefficients are ``fractions.Fraction``; there is
no floating point anywhere in this module.  All values are immutable
after construction and every operation is a pure function, so instances
can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from ._backend import mul_terms
from .errors import (
    FixedPointDivergence,
    FrameMismatch,
    NonUnitSeries,
    TruncationExceeded,
)

Rational = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class Frame:
    """Exponent monoid of a series ring: generator names and gradings.

    ``grading`` entries must be >= 1 so that graded fixed-point and
    Newton iterations terminate; ``boundary`` is the integer functional
    used for boundary-weighted derivatives (all zero by default).
    """

    names: tuple[str, ...]
    grading: tuple[int, ...] = ()
    boundary: tuple[int, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        grading = tuple(self.grading) if self.grading else (1,) * len(names)
        boundary = tuple(self.boundary) if self.boundary else (0,) * len(names)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "grading", grading)
        object.__setattr__(self, "boundary", boundary)
        if len(grading) != len(names) or len(boundary) != len(names):
            raise ValueError("grading/boundary length must match generator count")
        if any(g < 1 for g in grading):
            raise ValueError("every grading entry must be >= 1")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def grade(self, exponents: Sequence[int]) -> int:
        return sum(g * e for g, e in zip(self.grading, exponents))

    def boundary_grade(self, exponents: Sequence[int]) -> int:
        return sum(b * e for b, e in zip(self.boundary, exponents))

    def zero_exponent(self) -> tuple[int, ...]:
        return (0,) * self.nvars


class TruncatedSeries:
    """Sparse truncated series: exponent tuple -> nonzero Fraction.

    Terms of total grade greater than ``order`` are absent by
    definition (unknown, not zero).  Two series over the same frame and
    order form a commutative ring with exact arithmetic.
    """

    __slots__ = ("frame", "order", "terms")

    def __init__(self, frame: Frame, order: int, terms: Mapping[tuple[int, ...], Fraction]):
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != frame.nvars:
                raise ValueError("exponent arity does not match frame")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent outside frame monoid")
            if frame.grade(exps) > order:
                continue
            value = as_rational(coeff)
            if value != 0:
                clean[exps] = value
        self.frame = frame
        self.order = order
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, frame: Frame, order: int) -> "TruncatedSeries":
        return cls(frame, order, {})

    @classmethod
    def constant(cls, frame: Frame, order: int, value) -> "TruncatedSeries":
        return cls(frame, order, {frame.zero_exponent(): as_rational(value)})

    @classmethod
    def one(cls, frame: Frame, order: int) -> "TruncatedSeries":
        return cls.constant(frame, order, 1)

    @classmethod
    def generator(cls, frame: Frame, order: int, index: int) -> "TruncatedSeries":
        exps = tuple(1 if i == index else 0 for i in range(frame.nvars))
        return cls(frame, order, {exps: ONE})

    @classmethod
    def monomial(cls, frame: Frame, order: int, exponents, coefficient=1) -> "TruncatedSeries":
        return cls(frame, order, {tuple(exponents): as_rational(coefficient)})

    # -- inspection ---------------------------------------------------

    def items(self):
        """Terms in lexicographic exponent order (deterministic)."""
        return [(e, self.terms[e]) for e in sorted(self.terms)]

    def constant_term(self) -> Fraction:
        return self.terms.get(self.frame.zero_exponent(), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> int | None:
        """Minimal grade of a present term, or None for the zero series."""
        if not self.terms:
            return None
        return min(self.frame.grade(e) for e in self.terms)

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        exps = tuple(exponents)
        if len(exps) != self.frame.nvars:
            raise ValueError("exponent arity does not match frame")
        if self.frame.grade(exps) > self.order:
            raise TruncationExceeded(
                f"exponent {exps} has grade beyond truncation order {self.order}"
            )
        return self.terms.get(exps, ZERO)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            if order > self.order:
                raise TruncationExceeded("cannot extend a truncated series")
            return self
        return TruncatedSeries(self.frame, order, self.terms)

    def map_coefficients(self, fn) -> "TruncatedSeries":
        return TruncatedSeries(
            self.frame, self.order, {e: fn(e, c) for e, c in self.terms.items()}
        )

    def filter_terms(self, keep) -> "TruncatedSeries":
        return TruncatedSeries(
            self.frame, self.order, {e: c for e, c in self.terms.items() if keep(e)}
        )

    # -- ring operations ----------------------------------------------

    def _check_frame(self, other: "TruncatedSeries"):
        if self.frame != other.frame:
            raise FrameMismatch(
                f"frames differ: {self.frame.names} vs {other.frame.names}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.frame, self.order, other)
        self._check_frame(other)
        order = min(self.order, other.order)
        merged = dict(self.terms)
        for e, c in other.terms.items():
            merged[e] = merged.get(e, ZERO) + c
        return TruncatedSeries(self.frame, order, merged)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.frame, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.frame, self.order, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            scalar = as_rational(other)
            if scalar == 0:
                return TruncatedSeries.zero(self.frame, self.order)
            return TruncatedSeries(
                self.frame, self.order, {e: c * scalar for e, c in self.terms.items()}
            )
        self._check_frame(other)
        order = min(self.order, other.order)
        product = mul_terms(self.terms, other.terms, self.frame.grading, order)
        return TruncatedSeries(self.frame, order, product)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return pow_int(self, k)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.order == other.order
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self):
        return f"TruncatedSeries({self!s}; order={self.order})"

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for exps in sorted(self.terms, key=lambda e: (self.frame.grade(e), e)):
            coeff = self.terms[exps]
            factors = [
                f"{n}^{e}" if e != 1 else n
                for n, e in zip(self.frame.names, exps)
                if e != 0
            ]
            mono = "*".join(factors)
            if not mono:
                bits.append(str(coeff))
            elif coeff == 1:
                bits.append(mono)
            elif coeff == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{coeff}*{mono}")
        out = " + ".join(bits)
        return out.replace("+ -", "- ")


# -- transcendental and structural operations ------------------------


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def exp_series(s: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with zero constant term (sum of s^k / k!)."""
    if s.constant_term() != 0:
        raise NonUnitSeries("exp requires a zero constant term")
    acc = TruncatedSeries.one(s.frame, s.order)
    term = acc
    for k in range(1, s.order + 1):
        term = (term * s) * Fraction(1, k)
        if term.is_zero():
            break
        acc = acc + term
    return acc


def log_series(s: TruncatedSeries) -> TruncatedSeries:
    """log of a series with constant term one."""
    if s.constant_term() != 1:
        raise NonUnitSeries("log requires constant term 1")
    u = s - 1
    acc = TruncatedSeries.zero(s.frame, s.order)
    power = TruncatedSeries.one(s.frame, s.order)
    for k in range(1, s.order + 1):
        power = power * u
        if power.is_zero():
            break
        acc = acc + power * Fraction((-1) ** (k + 1), k)
    return acc


def inverse(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a unit series (geometric expansion)."""
    c0 = s.constant_term()
    if c0 == 0:
        raise NonUnitSeries("cannot invert a series with zero constant term")
    t = TruncatedSeries.one(s.frame, s.order) - s * (1 / c0)
    acc = TruncatedSeries.one(s.frame, s.order)
    power = acc
    for _ in range(s.order):
        power = power * t
        if power.is_zero():
            break
        acc = acc + power
    return acc * (1 / c0)


def pow_int(s: TruncatedSeries, k: int) -> TruncatedSeries:
    """Integer power; negative exponents require a unit base."""
    if not isinstance(k, int):
        raise TypeError("exponent must be an integer")
    if k < 0:
        return pow_int(inverse(s), -k)
    result = TruncatedSeries.one(s.frame, s.order)
    base = s
    e = k
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def substitute(
    s: TruncatedSeries,
    images: Sequence[TruncatedSeries],
    *,
    frame: Frame | None = None,
    order: int | None = None,
) -> TruncatedSeries:
    """Formal composition: replace generator i of ``s`` by ``images[i]``.

    Every image must have zero constant term (grade >= 1), which makes
    the truncated composition well defined.  For a frame with no
    generators pass the target ``frame`` and ``order`` explicitly.
    """
    if len(images) != s.frame.nvars:
        raise ValueError("one image per generator is required")
    if not images:
        if frame is None or order is None:
            raise ValueError("composition over an empty frame needs an explicit target")
        return TruncatedSeries.constant(frame, order, s.constant_term())
    target = images[0].frame
    target_order = min(min(im.order for im in images), s.order)
    if order is not None:
        target_order = min(target_order, order)
    for i, im in enumerate(images):
        if im.frame != target:
            raise FrameMismatch("images live over different frames")
        if im.constant_term() != 0:
            raise NonUnitSeries("substitution image has a nonzero constant term")
        val = im.valuation()
        if val is not None and val < s.frame.grading[i]:
            raise NonUnitSeries(
                "substitution image valuation is below the source grading; "
                "the truncated composition would not be exact"
            )

    powers: list[list[TruncatedSeries]] = [
        [TruncatedSeries.one(target, target_order)] for _ in images
    ]

    def power(i: int, e: int) -> TruncatedSeries:
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] * images[i])
        return cache[e]

    acc = TruncatedSeries.zero(target, target_order)
    for exps in sorted(s.terms):
        coeff = s.terms[exps]
        mono = TruncatedSeries.constant(target, target_order, coeff)
        for i, e in enumerate(exps):
            if e:
                mono = mono * power(i, e)
        acc = acc + mono
    return acc


def log_derivative(s: TruncatedSeries, var_index: int) -> TruncatedSeries:
    """The operator x d/dx for generator ``var_index``."""
    if not 0 <= var_index < s.frame.nvars:
        raise ValueError("variable index out of range")
    return s.map_coefficients(lambda e, c: c * e[var_index])


def boundary_derivative(s: TruncatedSeries) -> TruncatedSeries:
    """Boundary-grading-weighted derivative: c*x^e -> c*boundary(e)*x^e."""
    frame = s.frame
    return s.map_coefficients(lambda e, c: c * frame.boundary_grade(e))


def coefficient(s: TruncatedSeries, exponents: Sequence[int]) -> Fraction:
    return s.coefficient(exponents)


def fixed_point_system(
    updates: Sequence[Callable[[list[TruncatedSeries]], TruncatedSeries]],
    frame: Frame,
    order: int,
) -> list[TruncatedSeries]:
    """Solve x_a = gen_a * U_a(x) for unit-valued update maps U_a.

    Each pass of the iteration fixes at least one further grade, so the
    unique solution with x_a = gen_a * (1 + higher grade) is reached in
    at most ``order`` passes; a system that keeps rewriting
    already-fixed grades is rejected.
    """
    if len(updates) != frame.nvars:
        raise ValueError("one update map per frame generator is required")
    xs = [TruncatedSeries.generator(frame, order, a) for a in range(frame.nvars)]
    for round_no in range(order + 2):
        new_xs = []
        for a, update in enumerate(updates):
            u = update(list(xs))
            if u.frame != frame:
                raise FrameMismatch("update map changed frames")
            if u.constant_term() != 1:
                raise NonUnitSeries(f"update map {a} is not a unit series")
            new_xs.append(TruncatedSeries.generator(frame, order, a) * u)
        settled = round_no  # grades <= settled must no longer move
        for old, new in zip(xs, new_xs):
            diff = old - new
            if any(frame.grade(e) <= settled for e in diff.terms):
                raise FixedPointDivergence(
                    "fixed-point pass altered an already-settled grade"
                )
        if new_xs == xs:
            return xs
        xs = new_xs
    raise FixedPointDivergence(f"no stabilization after {order + 2} passes")
