"""Quantum-corrected mirror curve, mirror maps, and brane mirror series.

Sign conventions, pinned by the regression tests rather than prose:
the closed mirror map is Q_a = q_a * exp(+ sum_j iota_j^(a) A_j(q)),
its inverse is the graded fixed point of
q_a = Q_a * exp(- sum_j iota_j^(a) A_j(q)), and the fiber generating
functions are 1 + delta_j = exp(-A_j(q(Q))).  Together these satisfy
Q_a * prod_j (1+delta_j)^{iota_j^(a)} = q_a(Q) identically and
reproduce 1 + delta_0 = 1 - 2Q + 5Q^2 - ... for local P^2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import BranchError, FrameEscape, MathDomainError, ValidationError
from .fps import (
    Frame,
    TruncatedSeries,
    exp_series,
    fixed_point_system,
    inverse,
    log_series,
    pow_int,
    substitute,
)
from .lattice import (
    BraneSpec,
    ToricCYData,
    det_int,
    divisor_pairing,
    dual_exponents,
    effective_charge_basis,
    solve_exact,
    unit_vector,
    validate_brane,
    validate_cy,
)


def closed_frame(data: ToricCYData) -> Frame:
    """Frame of the closed Kahler variables Q_1..Q_{m-n}."""
    k = data.n_closed
    return Frame(names=tuple(f"Q{a}" for a in range(1, k + 1)))


def require_valid(data: ToricCYData) -> None:
    report = validate_cy(data)
    if not report.ok:
        raise ValidationError(f"invalid toric data: {report}")


def coefficient_E(iota, alpha, i: int) -> Fraction:
    """Factorial coefficient of the hypergeometric-type series A_i.

    E_i(alpha) = (-1)^{-<D_i,a>-1} (-<D_i,a>-1)! / prod_{j != i} <D_j,a>!
    with the reciprocal factorial of a negative integer taken to be 0,
    and 0 as well unless -<D_i,alpha> - 1 >= 0.
    """
    pairings = divisor_pairing(iota, alpha)
    top = -pairings[i] - 1
    if top < 0:
        return Fraction(0)
    for j, p in enumerate(pairings):
        if j != i and p < 0:
            return Fraction(0)
    denominator = 1
    for j, p in enumerate(pairings):
        if j != i:
            denominator *= factorial(p)
    return Fraction((-1) ** top * factorial(top), denominator)


def _effective_classes(frame: Frame, order: int):
    """Nonzero componentwise >= 0 exponent vectors of grade <= order."""
    ranges = [range(order // g + 1) for g in frame.grading]
    for alpha in itertools.product(*ranges):
        if any(alpha) and frame.grade(alpha) <= order:
            yield alpha


def a_series(data: ToricCYData, i: int, order: int) -> TruncatedSeries:
    """A_i(q) = sum over effective classes alpha > 0 of E_i(alpha) q^alpha."""
    frame = closed_frame(data)
    iota = effective_charge_basis(data)
    terms = {}
    for alpha in _effective_classes(frame, order):
        value = coefficient_E(iota, alpha, i)
        if value != 0:
            terms[alpha] = value
    return TruncatedSeries(frame, order, terms)


def open_charge(brane: BraneSpec, m: int) -> tuple[int, ...]:
    """The auxiliary charge l^(0) = e_{i2} - e_{i1} of an AV brane."""
    if brane.av_indices is None:
        raise MathDomainError("open direction needs a brane with av_indices")
    _, i1, i2 = brane.av_indices
    return tuple(x - y for x, y in zip(unit_vector(m, i2), unit_vector(m, i1)))


@dataclass(frozen=True)
class MirrorMapData:
    """A mirror map as explicit series, in either direction.

    ``closed`` holds the image of each closed variable; ``open_unit``
    is the unit factor of the open direction (the open variable itself
    is not a generator of the closed frame), present only when a brane
    was supplied.  The A_i carry the factorial series the map is built
    from; each is identically zero whenever every effective pairing
    <D_i, alpha> is non-negative.
    """

    direction: str  # "q_to_Q" or "Q_to_q"
    a_series: tuple[TruncatedSeries, ...]
    closed: tuple[TruncatedSeries, ...]
    open_unit: TruncatedSeries | None
    order: int


def _charge_combinations(data, a_list, order):
    """S_a = sum_j iota_j^(a) A_j for each charge row a."""
    frame = closed_frame(data)
    iota = effective_charge_basis(data)
    combos = []
    for row in iota:
        s = TruncatedSeries.zero(frame, order)
        for j, weight in enumerate(row):
            if weight:
                s = s + a_list[j] * weight
        combos.append(s)
    return combos


def _open_combination(data, brane, a_list, order):
    frame = closed_frame(data)
    l0 = open_charge(brane, data.m)
    s = TruncatedSeries.zero(frame, order)
    for j, weight in enumerate(l0):
        if weight:
            s = s + a_list[j] * weight
    return s


def mirror_map(data: ToricCYData, order: int, brane: BraneSpec | None = None) -> MirrorMapData:
    """Q_a = q_a exp(sum_j iota_j^(a) A_j(q)), open direction likewise."""
    require_valid(data)
    frame = closed_frame(data)
    a_list = tuple(a_series(data, j, order) for j in range(data.m))
    combos = _charge_combinations(data, a_list, order)
    closed = tuple(
        TruncatedSeries.generator(frame, order, a) * exp_series(combos[a])
        for a in range(data.n_closed)
    )
    open_unit = None
    if brane is not None:
        open_unit = exp_series(_open_combination(data, brane, a_list, order))
    return MirrorMapData("q_to_Q", a_list, closed, open_unit, order)


def inverse_mirror_map(
    data: ToricCYData, order: int, brane: BraneSpec | None = None
) -> MirrorMapData:
    """Graded fixed point of q_a = Q_a exp(- sum_j iota_j^(a) A_j(q))."""
    require_valid(data)
    frame = closed_frame(data)
    a_list = tuple(a_series(data, j, order) for j in range(data.m))
    combos = _charge_combinations(data, a_list, order)

    def make_update(s):
        def update(xs):
            return exp_series(-substitute(s, xs, frame=frame, order=order))

        return update

    closed = tuple(fixed_point_system([make_update(s) for s in combos], frame, order))
    open_unit = None
    if brane is not None:
        s0 = _open_combination(data, brane, a_list, order)
        open_unit = exp_series(-substitute(s0, list(closed), frame=frame, order=order))
    return MirrorMapData("Q_to_q", a_list, closed, open_unit, order)


def fiber_open_gw(data: ToricCYData, order: int) -> list[TruncatedSeries]:
    """Fiber disc-generating functions 1 + delta_i = exp(-A_i(q(Q))).

    Satisfies Q_a * prod_j (1+delta_j)^{iota_j^(a)} = q_a(Q) exactly,
    which is the defining identity of the inverse map route.
    """
    inv = inverse_mirror_map(data, order)
    frame = closed_frame(data)
    out = []
    for a in inv.a_series:
        out.append(exp_series(-substitute(a, list(inv.closed), frame=frame, order=order)))
    return out


@dataclass(frozen=True)
class CurveTerm:
    z_exponents: tuple[int, ...]
    q_exponents: tuple[int, ...]
    coefficient: TruncatedSeries


@dataclass(frozen=True)
class MirrorCurve:
    """The Laurent polynomial W with one term per ray.

    Term i < n carries the unit Q-monomial and the i-th z-unit vector
    (z_0 is the constant-1 convention); term i >= n carries
    Q_{i-n+1} * prod_j z_j^{<v_j^*, v_i>}.  Coefficients are the unit
    series 1 + delta_i over the closed frame.
    """

    n_z: int
    terms: tuple[CurveTerm, ...]


def build_curve(data: ToricCYData, order: int, corrected: bool = True) -> MirrorCurve:
    require_valid(data)
    frame = closed_frame(data)
    n, m = data.n, data.m
    if corrected:
        coefficients = fiber_open_gw(data, order)
    else:
        coefficients = [TruncatedSeries.one(frame, order) for _ in range(m)]
    duals = dual_exponents(data)
    terms = []
    for i in range(m):
        if i < n:
            z_exps = tuple(1 if j == i else 0 for j in range(1, n))
            q_exps = (0,) * (m - n)
        else:
            z_exps = tuple(duals[i][1:n])
            q_exps = tuple(1 if b == i - n else 0 for b in range(m - n))
        terms.append(CurveTerm(z_exps, q_exps, coefficients[i]))
    return MirrorCurve(n_z=n - 1, terms=tuple(terms))


@dataclass(frozen=True)
class BraneEquation:
    """One naive mirror-brane equation: prod z^e * prod Q^f = e^{c + i*phi}."""

    z_exponents: tuple[int, ...]
    q_exponents: tuple[int, ...]
    constant: Fraction
    phase: Fraction


def naive_brane(data: ToricCYData, brane: BraneSpec) -> list[BraneEquation]:
    """Monomial brane equations prod_j z_j^{-l_j} = e^{c+i*phi}.

    Rays beyond the leading basis are eliminated through
    z_i = Q_{i-n+1} prod_j z_j^{<v_j^*, v_i>}, so each charge row
    leaves a pure (z, Q)-monomial on the left-hand side.
    """
    require_valid(data)
    report = validate_brane(data, brane)
    special = [f for f in report.failures if "special" in f or "length" in f]
    if special:
        raise MathDomainError("; ".join(special))
    duals = dual_exponents(data)
    n, m = data.n, data.m
    equations = []
    for row, c, phi in zip(brane.charges, brane.constants, brane.phases):
        z_exps = []
        for j in range(1, n):
            e = -row[j] - sum(row[i] * duals[i][j] for i in range(n, m))
            z_exps.append(e)
        q_exps = [-row[n - 1 + b] for b in range(1, m - n + 1)]
        equations.append(BraneEquation(tuple(z_exps), tuple(q_exps), c, phi))
    return equations


class BraneFrame:
    """Brane exponent monoid: generators packaging (Q0, Q_closed) monomials.

    ``generators[k]`` is the integer exponent vector of generator k
    over (Q0, Q1, ..., Q_{m-n}); entries may be negative (for example
    Q1*Q0^-1), but series over the frame only use non-negative powers
    of the generators.  The boundary grading defaults to the
    Q0-exponent of each generator, which is the winding functional.
    """

    def __init__(self, generators, boundary=None, names=None, grading=None):
        self.generators = tuple(tuple(int(x) for x in g) for g in generators)
        if not self.generators:
            raise MathDomainError("a brane frame needs at least one generator")
        width = len(self.generators[0])
        if any(len(g) != width for g in self.generators):
            raise MathDomainError("brane frame generators have mixed arity")
        if boundary is None:
            boundary = tuple(g[0] for g in self.generators)
        if names is None:
            names = tuple(f"P{k}" for k in range(1, len(self.generators) + 1))
        self.frame = Frame(names=tuple(names), grading=tuple(grading or ()), boundary=tuple(boundary))
        self._solver = self._build_solver()

    def _build_solver(self):
        k = len(self.generators)
        width = len(self.generators[0])
        for cols in itertools.combinations(range(width), k):
            sub = [[Fraction(self.generators[a][c]) for a in range(k)] for c in cols]
            if det_int([[int(x) for x in row] for row in sub]) != 0:
                return cols, sub
        raise MathDomainError("brane frame generators are linearly dependent")

    def closed_order_for(self, order: int) -> int:
        """Closed-frame order resolving every brane grade <= order.

        A frame exponent of grade g unpacks to a closed monomial of
        degree at most g times the worst positive closed degree per
        unit of grading among the generators.
        """
        worst = 1
        for g, weight in zip(self.generators, self.frame.grading):
            positive = sum(x for x in g[1:] if x > 0)
            worst = max(worst, -(-positive // weight))
        return order * worst

    def pack(self, vec) -> tuple[int, ...] | None:
        """Frame exponents of a Kahler monomial, or None if it escapes."""
        cols, sub = self._solver
        vec = tuple(int(x) for x in vec)
        sol = solve_exact(sub, [Fraction(vec[c]) for c in cols])
        if sol is None:
            return None
        exps = []
        for x in sol:
            if x.denominator != 1 or x < 0:
                return None
            exps.append(int(x))
        if self.unpack(exps) != vec:
            return None
        return tuple(exps)

    def unpack(self, exps) -> tuple[int, ...]:
        width = len(self.generators[0])
        return tuple(
            sum(e * g[c] for e, g in zip(exps, self.generators)) for c in range(width)
        )

    def q0_exponent(self, exps) -> int:
        return self.unpack(exps)[0]

    def closed_part(self, exps) -> tuple[int, ...]:
        return self.unpack(exps)[1:]


def brane_frame(data: ToricCYData, brane: BraneSpec) -> BraneFrame:
    """The brane's declared frame; explicit input, no heuristics."""
    if brane.frame_generators is None:
        raise MathDomainError(
            "brane frame generators are required input "
            "(the effective open cone depends on brane placement)"
        )
    width = 1 + data.n_closed
    if any(len(g) != width for g in brane.frame_generators):
        raise MathDomainError(
            f"brane frame generators must have {width} entries (Q0 and closed variables)"
        )
    return BraneFrame(brane.frame_generators, boundary=brane.boundary_grading)


def map_closed_series(series: TruncatedSeries, bframe: BraneFrame, order: int) -> TruncatedSeries:
    """Re-express a closed-frame series inside the brane frame."""
    terms = {}
    escapes = []
    for exps, coeff in series.terms.items():
        packed = bframe.pack((0,) + tuple(exps))
        if packed is None:
            escapes.append((0,) + tuple(exps))
            continue
        if bframe.frame.grade(packed) <= order:
            terms[packed] = terms.get(packed, Fraction(0)) + coeff
    if escapes:
        raise FrameEscape(
            f"closed monomials escape the brane frame: {sorted(escapes)[:4]}", escapes
        )
    return TruncatedSeries(bframe.frame, order, terms)


def open_series(data, brane, bframe, order) -> TruncatedSeries:
    """z_1 as a brane-frame series: Q0 times the open inverse-map unit.

    This is the composition form of the open mirror map: the open
    complex parameter expressed in the Kahler variables,
    q_0 = Q_0 * exp(- sum_j l_j^(0) A_j(q(Q))).
    """
    inv = inverse_mirror_map(data, bframe.closed_order_for(order), brane)
    q0_exps = bframe.pack((1,) + (0,) * data.n_closed)
    if q0_exps is None:
        raise FrameEscape("the open variable Q0 is not representable in the brane frame")
    unit = map_closed_series(inv.open_unit, bframe, order)
    return TruncatedSeries.monomial(bframe.frame, order, q0_exps) * unit


def _curve_in_brane_frame(curve, z1, bframe, order, n_closed):
    """Collect W(z1, z2) as {z2 exponent: brane-frame series}.

    z1^e factors through its leading Q0 monomial times a unit, so
    negative powers stay inside the frame monoid as long as the
    combined scalar monomial of each curve term packs.
    """
    frame = bframe.frame
    q0_vec = (1,) + (0,) * n_closed
    q0_exps = bframe.pack(q0_vec)
    if q0_exps is None:
        raise FrameEscape("the open variable Q0 is not representable in the brane frame")
    unit = TruncatedSeries(
        frame,
        order,
        {
            tuple(e - q for e, q in zip(exps, q0_exps)): c
            for exps, c in z1.terms.items()
        },
    )
    if unit.constant_term() == 0:
        raise MathDomainError("z1 must be Q0 times a unit series")

    collected: dict[int, TruncatedSeries] = {}
    escapes = []
    for term in curve.terms:
        e1 = term.z_exponents[0] if curve.n_z >= 1 else 0
        e2 = term.z_exponents[1] if curve.n_z >= 2 else 0
        scalar_vec = tuple(
            e1 * q + v for q, v in zip(q0_vec, (0,) + tuple(term.q_exponents))
        )
        packed = bframe.pack(scalar_vec)
        if packed is None:
            escapes.append(scalar_vec)
            continue
        series = (
            map_closed_series(term.coefficient, bframe, order)
            * TruncatedSeries.monomial(frame, order, packed)
            * pow_int(unit, e1)
        )
        if e2 in collected:
            collected[e2] = collected[e2] + series
        else:
            collected[e2] = series
    if escapes:
        raise FrameEscape(
            f"curve monomials escape the brane frame: {sorted(escapes)[:4]}", escapes
        )
    return collected


def solve_curve_root(
    curve: MirrorCurve,
    z1_series: TruncatedSeries,
    bframe: BraneFrame,
    order: int,
    root0: Fraction = Fraction(-1),
) -> TruncatedSeries:
    """Newton-solve W(z1, z2) = 0 for z2 in the brane frame.

    The start value is the grade-0 simple root (-1, the branch
    continuously connected to -(1+delta_0) - z1); Newton doubles the
    settled grade each step, and the residual is exactly zero at the
    truncation order on success.
    """
    if curve.n_z != 2:
        raise MathDomainError("the curve root solve expects a threefold curve (z1, z2)")
    frame = bframe.frame
    collected = _curve_in_brane_frame(curve, z1_series, bframe, order, len(bframe.generators[0]) - 1)
    shift = max(0, -min(collected))
    poly = {e2 + shift: s for e2, s in collected.items()}

    grade0 = {e2: s.constant_term() for e2, s in poly.items()}
    value = sum(c * root0**e2 for e2, c in grade0.items())
    slope = sum(c * e2 * root0 ** (e2 - 1) for e2, c in grade0.items() if e2)
    if value != 0 or slope == 0:
        raise BranchError(
            f"grade-0 part has no simple root at {root0} (value {value}, slope {slope})"
        )

    z2 = TruncatedSeries.constant(frame, order, root0)

    def evaluate(point, table):
        acc = TruncatedSeries.zero(frame, order)
        for e2, coeff in table.items():
            acc = acc + coeff * pow_int(point, e2)
        return acc

    derivative = {e2 - 1: s * e2 for e2, s in poly.items() if e2}
    for _ in range(order.bit_length() + 2):
        residual = evaluate(z2, poly)
        if residual.is_zero():
            return z2
        z2 = z2 - residual * inverse(evaluate(z2, derivative))
    residual = evaluate(z2, poly)
    if residual.is_zero():
        return z2
    raise BranchError("Newton iteration failed to settle every grade")


def evaluate_curve(curve, z1, z2, bframe, order) -> TruncatedSeries:
    """Independent re-evaluation of W on a candidate root pair (audit)."""
    collected = _curve_in_brane_frame(curve, z1, bframe, order, len(bframe.generators[0]) - 1)
    acc = TruncatedSeries.zero(bframe.frame, order)
    for e2, coeff in collected.items():
        acc = acc + coeff * pow_int(z2, e2)
    return acc


@dataclass(frozen=True)
class BraneMirrorSeries:
    """Normalized mirror coordinates of an AV brane plus the audit residual.

    ``signs`` is the (eps1, eps2) normalization: eps1 flips the sign of
    the open variable Q0 (twisting each coefficient by eps1^boundary),
    eps2 rescales z2; they are chosen so z2 has constant term +1 and
    -log z2 is supported on nonzero boundary grading, with the basic
    disc class entering positively.  ``residual`` is W evaluated on the
    solution pair and must be identically zero.
    """

    z1: TruncatedSeries
    z2: TruncatedSeries
    signs: tuple[int, int]
    residual: TruncatedSeries


def _twist(series: TruncatedSeries, eps1: int) -> TruncatedSeries:
    if eps1 == 1:
        return series
    frame = series.frame
    return series.map_coefficients(lambda e, c: c * (eps1 ** (frame.boundary_grade(e) % 2)))


def _normalize_root(z1, z2_raw, bframe, order, override=None):
    frame = bframe.frame
    const = z2_raw.constant_term()
    if const not in (Fraction(1), Fraction(-1)):
        raise BranchError(f"curve root has non-unit constant term {const}")
    q0_exps = bframe.pack((1,) + (0,) * (len(bframe.generators[0]) - 1))

    candidates = []
    rejected = []
    eps1_options = [override[0]] if override else [1, -1]
    for eps1 in eps1_options:
        twisted = _twist(z2_raw, eps1)
        eps2 = override[1] if override else (1 if twisted.constant_term() == 1 else -1)
        z2 = twisted * eps2
        if z2.constant_term() != 1:
            if override:
                raise BranchError(
                    f"normalization override {override} leaves z2 constant term "
                    f"{z2.constant_term()}, expected 1"
                )
            continue
        log_part = -log_series(z2)
        offenders = [e for e in log_part.terms if frame.boundary_grade(e) == 0]
        if offenders:
            if override:
                raise BranchError(
                    f"-log z2 touches zero-boundary monomials {sorted(offenders)[:4]}"
                )
            rejected.extend(offenders)
            continue
        basic = log_part.terms.get(q0_exps, Fraction(0)) if q0_exps else Fraction(0)
        candidates.append((eps1, eps2, z2, basic))
    if override:
        eps1, eps2, z2, _ = candidates[0]
        return (eps1, eps2), z2
    if not candidates:
        raise BranchError(
            "no sign normalization gives constant term 1 with -log z2 supported "
            f"on nonzero boundary grading; offending monomials {sorted(set(rejected))[:6]}"
        )
    positive = [c for c in candidates if c[3] > 0]
    chosen = positive[0] if positive else candidates[0]
    return (chosen[0], chosen[1]), chosen[2]


def av_mirror_brane(
    data: ToricCYData,
    brane: BraneSpec,
    order: int,
    normalization: tuple[int, int] | None = None,
) -> BraneMirrorSeries:
    """Mirror coordinates (z1, z2) of an Aganagic-Vafa brane.

    z1 is the open inverse mirror map composed with the closed inverse
    map; z2 is the Newton root of the corrected curve at z1, then
    sign-normalized.  The stored residual re-evaluates W on the raw
    solution pair and is identically zero.
    """
    report = validate_brane(data, brane)
    if not report.ok:
        raise ValidationError(f"invalid brane: {report}")
    if brane.av_indices is None:
        raise MathDomainError("av_mirror_brane needs Aganagic-Vafa indices")
    bframe = brane_frame(data, brane)
    curve = build_curve(data, bframe.closed_order_for(order), corrected=True)
    z1 = open_series(data, brane, bframe, order)
    z2_raw = solve_curve_root(curve, z1, bframe, order)
    residual = evaluate_curve(curve, z1, z2_raw, bframe, order)
    signs, z2 = _normalize_root(z1, z2_raw, bframe, order, override=normalization)
    eps1 = signs[0]
    z1_normalized = _twist(z1, eps1) * eps1
    return BraneMirrorSeries(z1=z1_normalized, z2=z2, signs=signs, residual=residual)


@dataclass(frozen=True)
class NaiveComparison:
    """How far the corrected brane mirror sits from the naive one.

    ``z1_correction`` (= z1 - Q0) must vanish modulo the ideal of the
    closed Kahler variables.  ``z2_correction`` (= z2 - 1) splits into
    the pure-open part (the brane's own disc series, reported
    separately) and the mixed part supported on the closed ideal.
    """

    z1_correction: TruncatedSeries
    z2_correction: TruncatedSeries
    z1_in_closed_ideal: bool
    z2_pure_open: TruncatedSeries
    z2_mixed: TruncatedSeries
    signs: tuple[int, int]

    def leading_terms(self, count: int = 3):
        out = []
        for label, series in (("z1", self.z1_correction), ("z2", self.z2_correction)):
            ranked = sorted(
                series.terms.items(), key=lambda item: (series.frame.grade(item[0]), item[0])
            )
            out.extend((label, e, c) for e, c in ranked[:count])
        return out


def compare_naive(
    data: ToricCYData,
    brane: BraneSpec,
    order: int,
    normalization: tuple[int, int] | None = None,
) -> NaiveComparison:
    mirror = av_mirror_brane(data, brane, order, normalization=normalization)
    bframe = brane_frame(data, brane)
    frame = bframe.frame
    q0_exps = bframe.pack((1,) + (0,) * data.n_closed)
    z1_corr = mirror.z1 - TruncatedSeries.monomial(frame, order, q0_exps)
    z2_corr = mirror.z2 - 1

    def pure_open(exps):
        return all(x == 0 for x in bframe.closed_part(exps))

    z1_ok = all(not pure_open(e) for e in z1_corr.terms)
    z2_open = z2_corr.filter_terms(pure_open)
    z2_mixed = z2_corr.filter_terms(lambda e: not pure_open(e))
    return NaiveComparison(
        z1_correction=z1_corr,
        z2_correction=z2_corr,
        z1_in_closed_ideal=z1_ok,
        z2_pure_open=z2_open,
        z2_mixed=z2_mixed,
        signs=mirror.signs,
    )
