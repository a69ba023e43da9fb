"""Integer-lattice and polytope combinatorics for toric Calabi-Yau input.

Validates the Calabi-Yau toric data (rays pairing to 1 against the
covector u, unimodular leading rays), computes the charge matrix as a
Z-basis of the ray relations, the dual-basis exponent table feeding the
mirror curve, brane charge conditions, and the codimension-2 face data
describing the fibration discriminant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import MathDomainError
from .fps import as_rational


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def solve_exact(matrix, rhs):
    """Solve a square rational system exactly; None if singular.

    Plain Gaussian elimination over Fractions; the systems here are
    tiny (lattice rank times lattice rank).
    """
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def det_int(matrix) -> int:
    """Determinant of an integer matrix via fraction-free elimination."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                m[r] = [v - factor * w for v, w in zip(m[r], m[col])]
    assert det.denominator == 1
    return int(det)


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(self.failures)


@dataclass(frozen=True)
class ToricCYData:
    """Fan/polytope input: rays, CY covector, offsets, optional extras.

    The first n rays are required to form a unimodular basis of Z^n;
    ray i >= n corresponds to the closed Kahler variable Q_{i-n+1}.
    """

    rays: tuple[tuple[int, ...], ...]
    u: tuple[int, ...]
    offsets: tuple[Fraction, ...] = ()
    max_cones: tuple[tuple[int, ...], ...] | None = None
    charge_rows: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in ray) for ray in self.rays)
        u = tuple(int(x) for x in self.u)
        offsets = tuple(as_rational(x) for x in self.offsets) or (Fraction(0),) * len(rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "offsets", offsets)
        if self.max_cones is not None:
            object.__setattr__(
                self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
            )
        if self.charge_rows is not None:
            object.__setattr__(
                self, "charge_rows", tuple(tuple(int(x) for x in r) for r in self.charge_rows)
            )

    @property
    def n(self) -> int:
        return len(self.u)

    @property
    def m(self) -> int:
        return len(self.rays)

    @property
    def n_closed(self) -> int:
        return self.m - self.n


@dataclass(frozen=True)
class BraneSpec:
    """Charge-defined Lagrangian data, Aganagic-Vafa or general.

    ``charges`` rows l^(a) must each sum to zero (special condition).
    For the Aganagic-Vafa shape with indices (i0, i1, i2) the rows are
    e_{i1}-e_{i0} and e_{i2}-e_{i0}; the brane sits on the edge
    F_{i0,i1}, so the single nonzero constant belongs to the second
    charge and e^{-c-i*phi} of that row is the open parameter Q0.
    Phases are exact rational multiples of pi.
    """

    charges: tuple[tuple[int, ...], ...]
    constants: tuple[Fraction, ...]
    phases: tuple[Fraction, ...]
    av_indices: tuple[int, int, int] | None = None
    m0: tuple[Fraction, ...] | None = None
    frame_generators: tuple[tuple[int, ...], ...] | None = None
    boundary_grading: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "charges", tuple(tuple(int(x) for x in row) for row in self.charges)
        )
        object.__setattr__(self, "constants", tuple(as_rational(c) for c in self.constants))
        object.__setattr__(self, "phases", tuple(as_rational(p) for p in self.phases))
        if self.av_indices is not None:
            object.__setattr__(self, "av_indices", tuple(int(i) for i in self.av_indices))
        if self.m0 is not None:
            object.__setattr__(self, "m0", tuple(as_rational(x) for x in self.m0))
        if self.frame_generators is not None:
            object.__setattr__(
                self,
                "frame_generators",
                tuple(tuple(int(x) for x in g) for g in self.frame_generators),
            )
        if self.boundary_grading is not None:
            object.__setattr__(
                self, "boundary_grading", tuple(int(b) for b in self.boundary_grading)
            )

    @property
    def k(self) -> int:
        return len(self.charges)


def unit_vector(m: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(m))


def validate_cy(data: ToricCYData) -> ValidationReport:
    """Check every ToricCYData invariant; failures are collected, not raised."""
    failures = []
    n, m = data.n, data.m
    if m < n:
        failures.append(f"need at least {n} rays, got {m}")
        return ValidationReport(tuple(failures))
    for i, ray in enumerate(data.rays):
        if len(ray) != n:
            failures.append(f"ray {i} has length {len(ray)}, expected {n}")
    if len(data.offsets) != m:
        failures.append(f"expected {m} offsets, got {len(data.offsets)}")
    if any(len(ray) != n for ray in data.rays):
        return ValidationReport(tuple(failures))
    for i, ray in enumerate(data.rays):
        pairing = _dot(data.u, ray)
        if pairing != 1:
            failures.append(f"CY condition: <u, v_{i}> = {pairing}, expected 1")
    det = det_int([list(ray) for ray in data.rays[:n]])
    if det not in (1, -1):
        failures.append(f"unimodularity: leading rays have determinant {det}")
    if data.charge_rows is not None:
        failures.extend(_check_charge_rows(data))
    if data.max_cones is not None:
        for cone in data.max_cones:
            if len(cone) != n or any(i < 0 or i >= m for i in cone):
                failures.append(f"maximal cone {cone} is not an index set of size {n}")
    return ValidationReport(tuple(failures))


def _check_charge_rows(data: ToricCYData) -> list[str]:
    failures = []
    rows = data.charge_rows
    if len(rows) != data.n_closed:
        failures.append(
            f"charge basis has {len(rows)} rows, expected {data.n_closed}"
        )
        return failures
    for a, row in enumerate(rows):
        if len(row) != data.m:
            failures.append(f"charge row {a} has length {len(row)}")
            continue
        combo = [sum(row[i] * data.rays[i][j] for i in range(data.m)) for j in range(data.n)]
        if any(x != 0 for x in combo):
            failures.append(f"charge row {a} does not annihilate the rays")
        if sum(row) != 0:
            failures.append(f"charge row {a} does not sum to zero")
    if not failures and rows:
        # Z-basis check: the canonical kernel rows must be integer
        # combinations of the supplied rows and vice versa.
        canonical = charge_basis(ToricCYData(data.rays, data.u, data.offsets))
        if not (_spans_over_z(rows, canonical) and _spans_over_z(canonical, rows)):
            failures.append("charge rows are not a Z-basis of the ray relations")
    return failures


def _spans_over_z(rows, targets) -> bool:
    if not targets:
        return True
    k = len(rows)
    for target in targets:
        cols = _independent_columns(rows)
        if cols is None:
            return False
        sub = [[Fraction(rows[a][c]) for a in range(k)] for c in cols]
        sol = solve_exact(sub, [Fraction(target[c]) for c in cols])
        if sol is None or any(x.denominator != 1 for x in sol):
            return False
        recon = [sum(sol[a] * rows[a][j] for a in range(k)) for j in range(len(target))]
        if any(r != t for r, t in zip(recon, target)):
            return False
    return True


def _independent_columns(rows):
    k = len(rows)
    m = len(rows[0]) if rows else 0
    for cols in itertools.combinations(range(m), k):
        sub = [[rows[a][c] for c in cols] for a in range(k)]
        if det_int(sub) != 0:
            return cols
    return None


def dual_exponents(data: ToricCYData) -> list[list[int]]:
    """Expansion of every ray over the leading unimodular basis.

    Row i solves v_i = sum_j c_j v_j over rays v_0..v_{n-1}; the CY
    condition forces each row to sum to 1.  Rows are integer because
    the leading block is unimodular.  Columns 1..n-1 are the z-variable
    exponents of the mirror curve monomials.
    """
    n = data.n
    basis_cols = [[Fraction(data.rays[j][coord]) for j in range(n)] for coord in range(n)]
    table = []
    for i, ray in enumerate(data.rays):
        sol = solve_exact(basis_cols, [Fraction(x) for x in ray])
        if sol is None:
            raise MathDomainError("leading rays are not a basis")
        if any(c.denominator != 1 for c in sol):
            raise MathDomainError(
                f"ray {i} is not an integer combination of the leading rays"
            )
        table.append([int(c) for c in sol])
    return table


def _interior_ray_index(data: ToricCYData) -> int | None:
    """The unique ray that is not a vertex of the hull of the others.

    Rays live on the affine hyperplane <u, .> = 1; a ray is interior
    when it is a convex combination of n of the remaining rays.  Returns
    None unless exactly one such ray exists.
    """
    interior = []
    indices = range(data.m)
    for i in indices:
        others = [j for j in indices if j != i]
        found = False
        for combo in itertools.combinations(others, data.n):
            mat = [[Fraction(data.rays[j][coord]) for j in combo] for coord in range(data.n)]
            sol = solve_exact(mat, [Fraction(x) for x in data.rays[i]])
            if sol is not None and all(t >= 0 for t in sol):
                found = True
                break
        if found:
            interior.append(i)
    return interior[0] if len(interior) == 1 else None


def charge_basis(data: ToricCYData) -> list[list[int]]:
    """Z-basis of the relations among the rays (kernel of e_i -> v_i).

    Built from the dual expansion: for each i >= n the vector
    e_i - sum_j <v_j^*, v_i> e_j is a relation, and the identity block
    on the trailing columns makes the rows a reduced Z-basis.  Rows are
    sign-normalized: leading entry positive, then flipped so the entry
    in the compact-divisor column (when identifiable) is negative --
    the orientation under which effective curve classes have
    non-negative exponents.
    """
    duals = dual_exponents(data)
    n, m = data.n, data.m
    rows = []
    for i in range(n, m):
        row = [-duals[i][j] for j in range(n)] + [0] * (m - n)
        row[i] = 1
        rows.append(row)
    compact = _interior_ray_index(data)
    normalized = []
    for row in rows:
        lead = next((x for x in row if x != 0), 0)
        if lead < 0:
            row = [-x for x in row]
        if compact is not None and row[compact] > 0:
            row = [-x for x in row]
        normalized.append(row)
    return normalized


def effective_charge_basis(data: ToricCYData) -> list[list[int]]:
    """User-supplied charge rows when present (authoritative), else computed."""
    if data.charge_rows is not None:
        return [list(r) for r in data.charge_rows]
    return charge_basis(data)


def divisor_pairing(iota, alpha) -> list[int]:
    """<D_j, alpha> = sum_a alpha_a * iota_j^(a) for every ray j."""
    if not iota:
        return []
    m = len(iota[0])
    return [sum(alpha[a] * iota[a][j] for a in range(len(iota))) for j in range(m)]


def validate_brane(data: ToricCYData, brane: BraneSpec) -> ValidationReport:
    """Special-Lagrangian and Aganagic-Vafa shape checks, as a report."""
    failures = []
    m = data.m
    for a, row in enumerate(brane.charges):
        if len(row) != m:
            failures.append(f"charge row {a} has length {len(row)}, expected {m}")
            continue
        if sum(row) != 0:
            failures.append(f"charge row {a} violates the special condition (sum != 0)")
    if len(brane.constants) != brane.k or len(brane.phases) != brane.k:
        failures.append("need one constant and one phase per charge row")
    if brane.charges and all(len(r) == m for r in brane.charges):
        if _rank(brane.charges) != brane.k:
            failures.append("charge rows are linearly dependent")
    if brane.av_indices is not None:
        failures.extend(_check_av_shape(data, brane))
    return ValidationReport(tuple(failures))


def _rank(rows) -> int:
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [v * inv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [v - f * w for v, w in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def _check_av_shape(data: ToricCYData, brane: BraneSpec) -> list[str]:
    failures = []
    m = data.m
    if brane.k != 2:
        failures.append(f"Aganagic-Vafa brane needs exactly 2 charges, got {brane.k}")
        return failures
    i0, i1, i2 = brane.av_indices
    if len({i0, i1, i2}) != 3 or not all(0 <= i < m for i in (i0, i1, i2)):
        failures.append(f"av_indices {brane.av_indices} are not 3 distinct ray indices")
        return failures
    def diff(a, b):
        return tuple(x - y for x, y in zip(unit_vector(m, a), unit_vector(m, b)))
    expected = (diff(i1, i0), diff(i2, i0))
    if brane.charges != expected:
        failures.append(
            "Aganagic-Vafa charges must be (e_i1 - e_i0, e_i2 - e_i0) "
            f"for indices {brane.av_indices}"
        )
    nonzero = [a for a, c in enumerate(brane.constants) if c != 0]
    if len(nonzero) != 1:
        failures.append("exactly one Aganagic-Vafa constant must be nonzero")
    elif nonzero[0] != 1:
        failures.append(
            "the nonzero constant must sit on the e_i2 - e_i0 charge "
            "(its e^{-c-i*phi} is the open parameter)"
        )
    return failures


@dataclass(frozen=True)
class AVGeometry:
    m0: tuple[Fraction, ...]
    c: Fraction
    edge: tuple[int, int]


def av_geometry(data: ToricCYData, brane: BraneSpec) -> AVGeometry:
    """Locate the brane point on its polytope edge and compute the constant.

    Requires ``brane.m0``: the point must satisfy the two edge equations
    <m0, v_i> + lambda_i = 0 for i in {i0, i1} and lie strictly inside
    every other face, so the half-line m0 + R>=0 u hits exactly one
    edge.  The nonzero constant is
    c = lambda_{i2} - lambda_{i0} + <m0, v_{i2} - v_{i0}> and must not
    vanish (else the line meets a second edge).
    """
    if brane.av_indices is None or brane.m0 is None:
        raise MathDomainError("av_geometry needs av_indices and m0")
    i0, i1, i2 = brane.av_indices
    heights = [
        _dot(brane.m0, data.rays[i]) + data.offsets[i] for i in range(data.m)
    ]
    on_edge = [i for i in range(data.m) if heights[i] == 0]
    if i0 not in on_edge or i1 not in on_edge:
        raise MathDomainError(
            f"m0 does not lie on the edge F_{{{i0},{i1}}} (heights {heights[i0]}, {heights[i1]})"
        )
    if len(on_edge) > 2:
        raise MathDomainError(
            f"m0 lies on faces {on_edge}; an Aganagic-Vafa brane hits a unique edge"
        )
    negative = [i for i in range(data.m) if heights[i] < 0]
    if negative:
        raise MathDomainError(f"m0 is outside the polytope (faces {negative})")
    c = data.offsets[i2] - data.offsets[i0] + _dot(
        brane.m0, [x - y for x, y in zip(data.rays[i2], data.rays[i0])]
    )
    if c == 0:
        raise MathDomainError("the Aganagic-Vafa constant vanishes (line meets a second edge)")
    return AVGeometry(m0=brane.m0, c=c, edge=(i0, i1))


def gross_discriminant(data: ToricCYData) -> list[tuple[int, int]]:
    """Index pairs spanning 2-dimensional cones of the fan.

    These are the codimension-2 faces entering the discriminant locus
    of the special-Lagrangian fibration; returned as combinatorial data
    only.
    """
    if data.max_cones is None:
        raise MathDomainError("gross_discriminant needs max_cones")
    pairs = set()
    for cone in data.max_cones:
        for pair in itertools.combinations(sorted(cone), 2):
            pairs.add(pair)
    return sorted(pairs)
