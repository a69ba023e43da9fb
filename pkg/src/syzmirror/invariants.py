"""Open Gromov-Witten invariants from brane mirror series.

The z2 coordinate of a brane mirror has the shape
z2 = exp(- sum_beta n_beta [boundary(beta)] Q^beta); dividing -log z2
coefficientwise by the boundary grading recovers the rational
invariants n_beta, integrating once more gives the disc potential, and
Mobius summation inverts the multiple-cover relation
n_beta = sum_{p | beta} N_{beta/p} / p^2 into integer instanton
numbers.  Integrality is reported, never enforced: the multiple-cover
relation is an assumed input, so failures are diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MathDomainError
from .fps import Frame, TruncatedSeries, boundary_derivative, log_series


@dataclass(frozen=True)
class InvariantTable:
    """Open GW invariants n_beta and optional instanton numbers N_beta.

    Keys are frame exponent vectors with positive total grade; when N
    is present the two maps satisfy the multiple-cover relation on
    every key within the truncation.
    """

    frame: Frame
    order: int
    n: dict
    N: dict | None = None

    def sorted_classes(self):
        keys = set(self.n)
        if self.N is not None:
            keys.update(self.N)
        return sorted(keys)


def _neg_log(z2: TruncatedSeries) -> TruncatedSeries:
    if z2.constant_term() != 1:
        raise MathDomainError("z2 must have constant term 1")
    return -log_series(z2)


def extract_open_gw(z2: TruncatedSeries, frame: Frame | None = None) -> InvariantTable:
    """n_beta = (coefficient of Q^beta in -log z2) / boundary(beta).

    A monomial with zero boundary grading cannot be divided out and
    signals a wrong frame or a non-Aganagic-Vafa input.
    """
    frame = frame or z2.frame
    log_part = _neg_log(z2)
    table = {}
    offenders = []
    for exps, coeff in log_part.terms.items():
        weight = frame.boundary_grade(exps)
        if weight == 0:
            offenders.append(exps)
            continue
        table[exps] = coeff / weight
    if offenders:
        raise MathDomainError(
            f"-log z2 has monomials with zero boundary grading: {sorted(offenders)[:4]}"
        )
    return InvariantTable(frame=frame, order=z2.order, n=table)


def disc_potential(z2: TruncatedSeries, frame: Frame | None = None) -> TruncatedSeries:
    """The unique F with F(0)=0 whose boundary-weighted derivative is -log z2.

    Termwise F = sum n_beta Q^beta, so its coefficients are exactly the
    open invariants of :func:`extract_open_gw`.
    """
    table = extract_open_gw(z2, frame)
    return TruncatedSeries(table.frame, z2.order, table.n)


def verify_potential(z2: TruncatedSeries, potential: TruncatedSeries) -> bool:
    """Exact round trip: the weighted derivative of F reproduces -log z2."""
    return boundary_derivative(potential) == _neg_log(z2)


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def _divisor_closure(keys):
    closed = set()
    for beta in keys:
        top = min((x for x in beta if x), default=0)
        for p in range(1, top + 1):
            if all(x % p == 0 for x in beta):
                closed.add(tuple(x // p for x in beta))
    return closed


def multiple_cover_inversion(table: InvariantTable) -> InvariantTable:
    """Fill N via Mobius summation: N_beta = sum_{p|beta} mu(p) n_{beta/p} / p^2.

    Divisibility is componentwise over the whole exponent vector.  The
    forward sum n_beta = sum_{p|beta} N_{beta/p} / p^2 then holds
    exactly on the divisor closure of the support.
    """
    instanton = {}
    for beta in _divisor_closure(table.n):
        total = Fraction(0)
        top = min((x for x in beta if x), default=0)
        for p in range(1, top + 1):
            if all(x % p == 0 for x in beta):
                reduced = tuple(x // p for x in beta)
                total += Fraction(_mobius(p), p * p) * table.n.get(reduced, Fraction(0))
        if total != 0:
            instanton[beta] = total
    return InvariantTable(frame=table.frame, order=table.order, n=dict(table.n), N=instanton)


def cover_sum(table: InvariantTable, beta) -> Fraction:
    """Forward multiple-cover sum at beta from the filled N."""
    if table.N is None:
        raise MathDomainError("cover_sum needs a table with N filled")
    total = Fraction(0)
    top = min((x for x in beta if x), default=0)
    for p in range(1, top + 1):
        if all(x % p == 0 for x in beta):
            reduced = tuple(x // p for x in beta)
            total += table.N.get(reduced, Fraction(0)) / (p * p)
    return total


@dataclass(frozen=True)
class IntegralityReport:
    flagged: tuple

    @property
    def ok(self) -> bool:
        return not self.flagged


def integrality_check(table: InvariantTable) -> IntegralityReport:
    """Flag every non-integer instanton number; an empty list is a pass."""
    if table.N is None:
        raise MathDomainError("integrality_check needs a table with N filled")
    flagged = tuple(
        (beta, value)
        for beta, value in sorted(table.N.items())
        if value.denominator != 1
    )
    return IntegralityReport(flagged=flagged)
