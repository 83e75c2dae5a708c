"""Exact rational linear programs for the support-profile bound table.

For a support-size profile (n1, n2, n3) the instance has variables
y_ij in [0,1] (1 <= j <= n_i), the ordering constraints y_i1 >= ... >= y_in_i,
and the triple constraints y_1j1 + y_2j2 + y_3j3 <= 3/2 for every index
triple with j1 + j2 + j3 > 6.  The objective maximizes the sum of all
variables.  Admissible profiles are those with
n1*n2 + n2*n3 + n3*n1 > 2*(n1 + n2 + n3).

Two independent solvers are provided: a two-phase simplex with Bland's
anti-cycling rule, and exhaustive vertex enumeration by cutting the chain
polytope (both over Fractions, so optima are exact).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)
THREE_HALVES = Fraction(3, 2)


class ProfileNotAdmissible(ValueError):
    pass


class Infeasible(ValueError):
    pass


class Unbounded(ValueError):
    pass


class TableMismatch(RuntimeError):
    """The solved bound table disagrees with the asserted headline values."""


class CrossCheckFailed(RuntimeError):
    """Simplex and vertex enumeration disagree (an internal solver bug)."""


def _to_fraction(x) -> Fraction:
    """Exact conversion; float inputs are read as their decimal literal
    (str round-trip), so t_function(2.6, ...) means 13/5, not the binary
    float nearest 2.6."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class SupportProfile:
    n1: int
    n2: int
    n3: int

    def __post_init__(self) -> None:
        if not (4 >= self.n1 >= self.n2 >= self.n3 >= 0):
            raise ValueError(f"profile must be non-increasing in [0,4]: {self}")

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (self.n1, self.n2, self.n3)

    @property
    def is_admissible(self) -> bool:
        n1, n2, n3 = self.sizes
        return n1 * n2 + n2 * n3 + n3 * n1 > 2 * (n1 + n2 + n3)

    @property
    def n_vars(self) -> int:
        return self.n1 + self.n2 + self.n3


def admissible_profiles() -> tuple[SupportProfile, ...]:
    """All non-increasing triples in [0,4]^3 with
    n1*n2 + n2*n3 + n3*n1 > 2*(n1 + n2 + n3)."""
    out = []
    for n1 in range(4, -1, -1):
        for n2 in range(n1, -1, -1):
            for n3 in range(n2, -1, -1):
                p = SupportProfile(n1, n2, n3)
                if p.is_admissible:
                    out.append(p)
    return tuple(out)


def index_triples(profile: SupportProfile) -> tuple[tuple[int, int, int], ...]:
    """The constraint index set: all (j1, j2, j3), 1 <= j_i <= n_i, with
    j1 + j2 + j3 > 6."""
    n1, n2, n3 = profile.sizes
    return tuple((j1, j2, j3)
                 for j1 in range(1, n1 + 1)
                 for j2 in range(1, n2 + 1)
                 for j3 in range(1, n3 + 1)
                 if j1 + j2 + j3 > 6)


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearRow:
    """One inequality coeffs . y <= bound.

    kind is one of "box", "mono", "triple", "f3", "nonneg"; the vertex
    enumerator treats box/mono/nonneg rows as the start polytope and cuts
    with the triple/f3 rows.
    """
    coeffs: tuple[Fraction, ...]
    bound: Fraction
    label: str
    kind: str = "box"


@dataclass(frozen=True)
class LpInstance:
    """Maximize sum(y) subject to rows (and y >= 0, which is implicit in
    `rows` but included in full_rows for vertex enumeration)."""

    profile: SupportProfile
    var_names: tuple[str, ...]
    rows: tuple[LinearRow, ...]
    triple_rows: int
    f3_lower_bound: Optional[Fraction]
    include_monotonicity: bool

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    def objective(self) -> tuple[Fraction, ...]:
        return tuple(ONE for _ in range(self.n_vars))

    def full_rows(self) -> tuple[LinearRow, ...]:
        """All rows plus explicit nonnegativity rows -y_k <= 0."""
        nn = []
        for k, name in enumerate(self.var_names):
            coeffs = tuple(-ONE if j == k else ZERO for j in range(self.n_vars))
            nn.append(LinearRow(coeffs, ZERO, f"{name} >= 0", "nonneg"))
        return self.rows + tuple(nn)

    def is_feasible_point(self, y: Sequence[Fraction]) -> bool:
        if len(y) != self.n_vars or any(v < 0 for v in y):
            return False
        return all(sum(c * v for c, v in zip(row.coeffs, y)) <= row.bound
                   for row in self.rows)


def build_lp(profile: SupportProfile,
             extra_f3_lower_bound=None,
             include_monotonicity: bool = True) -> LpInstance:
    """Assemble the exact instance for an admissible profile.

    extra_f3_lower_bound adds sum_j y_3j >= bound, used for the constrained
    re-solves of the (4,4,2) and (4,4,1) cases.
    """
    if not profile.is_admissible:
        raise ProfileNotAdmissible(f"{profile.sizes} fails the product condition")
    n = profile.n_vars
    names = []
    index = {}
    for i, ni in enumerate(profile.sizes, start=1):
        for j in range(1, ni + 1):
            index[(i, j)] = len(names)
            names.append(f"y{i}{j}")

    def row(entries: dict[int, Fraction], bound: Fraction, label: str,
            kind: str) -> LinearRow:
        coeffs = [ZERO] * n
        for k, v in entries.items():
            coeffs[k] = v
        return LinearRow(tuple(coeffs), bound, label, kind)

    rows: list[LinearRow] = []
    for (i, j), k in index.items():
        rows.append(row({k: ONE}, ONE, f"y{i}{j} <= 1", "box"))
    if include_monotonicity:
        for i, ni in enumerate(profile.sizes, start=1):
            for j in range(1, ni):
                rows.append(row({index[(i, j + 1)]: ONE, index[(i, j)]: -ONE},
                                ZERO, f"y{i}{j + 1} <= y{i}{j}", "mono"))
    triples = index_triples(profile)
    for (j1, j2, j3) in triples:
        entries: dict[int, Fraction] = {}
        for i, j in ((1, j1), (2, j2), (3, j3)):
            k = index[(i, j)]
            entries[k] = entries.get(k, ZERO) + ONE
        rows.append(row(entries, THREE_HALVES, f"y1{j1}+y2{j2}+y3{j3} <= 3/2",
                        "triple"))
    bound = None
    if extra_f3_lower_bound is not None:
        bound = _to_fraction(extra_f3_lower_bound)
        entries = {index[(3, j)]: -ONE for j in range(1, profile.n3 + 1)}
        rows.append(row(entries, -bound, f"F3 >= {bound}", "f3"))
    return LpInstance(profile=profile, var_names=tuple(names), rows=tuple(rows),
                      triple_rows=len(triples), f3_lower_bound=bound,
                      include_monotonicity=include_monotonicity)


# ---------------------------------------------------------------------------
# Two-phase simplex (exact, Bland's rule)
# ---------------------------------------------------------------------------

def simplex_max(a_rows: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
                c: Sequence[Fraction]) -> tuple[Fraction, list[Fraction]]:
    """Maximize c.x subject to a_rows x <= b, x >= 0, in exact rationals.

    Bland's smallest-index rule for both the entering column and ratio-test
    ties guarantees termination.  Raises Infeasible or Unbounded.
    """
    m = len(a_rows)
    n = len(c)
    art_rows = [i for i in range(m) if b[i] < 0]
    n_art = len(art_rows)
    width = n + m + n_art + 1  # structural, slack, artificial, rhs

    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    art_col = {}
    for idx, i in enumerate(art_rows):
        art_col[i] = n + m + idx
    for i in range(m):
        row = [ZERO] * width
        sign = -1 if i in art_col else 1
        for j in range(n):
            row[j] = sign * _to_fraction(a_rows[i][j])
        row[n + i] = Fraction(sign)
        row[-1] = sign * _to_fraction(b[i])
        if i in art_col:
            row[art_col[i]] = ONE
            basis.append(art_col[i])
        else:
            basis.append(n + i)
        tableau.append(row)

    def pivot(r: int, col: int) -> None:
        prow = tableau[r]
        piv = prow[col]
        tableau[r] = prow = [v / piv for v in prow]
        for i in range(len(tableau)):
            if i != r:
                f = tableau[i][col]
                if f:
                    tableau[i] = [v - f * pv for v, pv in zip(tableau[i], prow)]
        basis[r] = col

    def run(obj: list[Fraction], allowed: int) -> None:
        # obj holds reduced costs with obj[-1] = -(current value).
        while True:
            col = next((j for j in range(allowed) if obj[j] > 0), None)
            if col is None:
                return
            best_ratio = None
            leave = None
            for i in range(m):
                aij = tableau[i][col]
                if aij > 0:
                    ratio = tableau[i][-1] / aij
                    if (best_ratio is None or ratio < best_ratio
                            or (ratio == best_ratio and basis[i] < basis[leave])):
                        best_ratio = ratio
                        leave = i
            if leave is None:
                raise Unbounded("objective unbounded above")
            pivot(leave, col)
            f = obj[col]
            obj[:] = [v - f * pv for v, pv in zip(obj, tableau[leave])]

    if n_art:
        # Phase 1: maximize -(sum of artificials).
        obj = [ZERO] * width
        for i in art_rows:
            obj[art_col[i]] = -ONE
        for r in range(m):
            if basis[r] >= n + m:  # artificial basic: zero out its cost
                obj = [v + pv for v, pv in zip(obj, tableau[r])]
        run(obj, allowed=n + m)  # artificials may not re-enter
        if -obj[-1] < 0:
            raise Infeasible("phase 1 optimum below zero")
        # Drive any degenerate artificial out of the basis.
        for r in range(m):
            if basis[r] >= n + m:
                col = next((j for j in range(n + m) if tableau[r][j] != 0), None)
                if col is not None:
                    pivot(r, col)

    obj = [ZERO] * width
    for j in range(n):
        obj[j] = _to_fraction(c[j])
    for r in range(m):
        if basis[r] < n + m and obj[basis[r]] != 0:
            f = obj[basis[r]]
            obj = [v - f * pv for v, pv in zip(obj, tableau[r])]
    run(obj, allowed=n + m)

    x = [ZERO] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = tableau[r][-1]
    return -obj[-1], x


# ---------------------------------------------------------------------------
# Vertex enumeration (independent oracle)
# ---------------------------------------------------------------------------

def _chain_start_vertices(profile: SupportProfile) -> list[tuple[Fraction, ...]]:
    """Vertices of the chain polytope product: per chain these are the 0/1
    prefix vectors (1,...,1,0,...,0)."""
    per_chain = []
    for ni in profile.sizes:
        per_chain.append([tuple([ONE] * t + [ZERO] * (ni - t))
                          for t in range(ni + 1)])
    return [tuple(v1 + v2 + v3) for v1, v2, v3 in product(*per_chain)]


def enumerate_vertices(instance: LpInstance) -> list[tuple[Fraction, ...]]:
    """All vertices of the feasible polytope, by cutting the chain polytope
    with the triple constraints one at a time.

    At each cut, new vertices arise exactly where edges of the current
    polytope cross the cutting hyperplane; edges are detected with the
    combinatorial adjacency test (no third vertex's active set contains the
    intersection of the pair's active sets).  Requires the monotone
    formulation, whose initial polytope has few vertices.
    """
    if not instance.include_monotonicity:
        raise ValueError("vertex enumeration supports the monotone formulation")
    rows = instance.full_rows()
    d = instance.n_vars
    n_rows = len(rows)
    cut_idx = [i for i, r in enumerate(rows) if r.kind in ("triple", "f3")]
    cut_set = set(cut_idx)

    def slack(row: LinearRow, v: tuple[Fraction, ...]) -> Fraction:
        return row.bound - sum(c * x for c, x in zip(row.coeffs, v) if c)

    def active_mask(v: tuple[Fraction, ...]) -> int:
        mask = 0
        for i, row in enumerate(rows):
            if slack(row, v) == 0:
                mask |= 1 << i
        return mask

    verts = _chain_start_vertices(instance.profile)
    masks = [active_mask(v) for v in verts]
    processed = 0
    for i in range(n_rows):
        if i not in cut_set:
            processed |= 1 << i

    for ci in cut_idx:
        row = rows[ci]
        slacks = [slack(row, v) for v in verts]
        keep = [k for k, s in enumerate(slacks) if s >= 0]
        pos = [k for k, s in enumerate(slacks) if s > 0]
        neg = [k for k, s in enumerate(slacks) if s < 0]
        vis_masks = [m & processed for m in masks]
        new_points: dict[tuple[Fraction, ...], None] = {}
        for kp in pos:
            mp = vis_masks[kp]
            for kn in neg:
                common = mp & vis_masks[kn]
                if common.bit_count() < d - 1:
                    continue
                adjacent = True
                for kz in range(len(verts)):
                    if kz == kp or kz == kn:
                        continue
                    if common & ~vis_masks[kz] == 0:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sp, sn = slacks[kp], slacks[kn]
                t = sp / (sp - sn)
                vp, vn = verts[kp], verts[kn]
                point = tuple(a + t * (b - a) for a, b in zip(vp, vn))
                new_points[point] = None
        processed |= 1 << ci
        surviving = [verts[k] for k in keep]
        kept_masks = []
        for k in keep:
            mask = masks[k]
            if slacks[k] == 0:
                mask |= 1 << ci
            kept_masks.append(mask)
        existing = set(surviving)
        verts = surviving
        masks = kept_masks
        for p in new_points:
            if p not in existing:
                verts.append(p)
                masks.append(active_mask(p))
        if not verts:
            raise Infeasible("cut emptied the polytope")

    # Safety: every reported vertex must be feasible with active rows of
    # full rank d.
    for v, mask in zip(verts, masks):
        assert instance.is_feasible_point(v)
        act = [rows[i].coeffs for i in range(n_rows) if (mask >> i) & 1]
        assert _rank(act, d) == d, "enumerated point is not a vertex"
    return verts


def _rank(rows: list[tuple[Fraction, ...]], d: int) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    for col in range(d):
        pivot_row = next((i for i in range(rank, len(mat)) if mat[i][col] != 0),
                         None)
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        prow = mat[rank]
        inv = prow[col]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col] / inv
                mat[i] = [v - f * pv for v, pv in zip(mat[i], prow)]
        rank += 1
        if rank == len(mat):
            break
    return rank


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LpCertificate:
    profile: SupportProfile
    optimum: Fraction
    vertex: tuple[Fraction, ...]
    var_names: tuple[str, ...]
    f3_lower_bound: Optional[Fraction]
    include_monotonicity: bool
    cross_checked: bool
    vertex_count: Optional[int]

    def verify(self, instance: LpInstance) -> bool:
        return (instance.is_feasible_point(self.vertex)
                and sum(self.vertex, ZERO) == self.optimum)


def solve_lp_exact(instance: LpInstance, cross_check: bool = True) -> LpCertificate:
    """Exact optimum with an attaining vertex; when the instance is monotone
    with at most 12 variables (all profile instances are), the simplex value
    is cross-checked against exhaustive vertex enumeration."""
    a_rows = [row.coeffs for row in instance.rows]
    b = [row.bound for row in instance.rows]
    value, x = simplex_max(a_rows, b, instance.objective())
    vertex = tuple(x)
    cert_checked = False
    vertex_count = None
    if cross_check and instance.n_vars <= 12 and instance.include_monotonicity:
        verts = enumerate_vertices(instance)
        vertex_count = len(verts)
        best = max(sum(v, ZERO) for v in verts)
        if best != value:
            raise CrossCheckFailed(
                f"simplex optimum {value} != vertex-enumeration optimum {best} "
                f"on {instance.profile.sizes}")
        cert_checked = True
    cert = LpCertificate(profile=instance.profile, optimum=value, vertex=vertex,
                         var_names=instance.var_names,
                         f3_lower_bound=instance.f3_lower_bound,
                         include_monotonicity=instance.include_monotonicity,
                         cross_checked=cert_checked, vertex_count=vertex_count)
    if not cert.verify(instance):
        raise CrossCheckFailed(f"simplex vertex fails feasibility on "
                               f"{instance.profile.sizes}")
    return cert


# Nominal exact readings of the one-decimal table entries "6.5" and "6.2".
# Solving shows (4,4,1) is tight at 13/2, while the exact optimum of
# (4,4,2) is 37/6 = 6.1666..., strictly below the displayed bound 6.2:
# the table entry is an upper bound (valid, not attained), so the nominal
# reading 31/5 is flagged as a mismatch instead of being rounded to.
NOMINAL_TABLE = {
    (4, 4, 1): Fraction(13, 2),
    (4, 4, 2): Fraction(31, 5),
}
OTHERWISE_BOUND = Fraction(6)


@dataclass
class TableReport:
    optima: dict  # SupportProfile -> Fraction (exact solved optimum)
    constrained: dict  # (sizes, bound) -> Fraction
    mismatches: list  # (sizes, solved, nominal) where solved != nominal
    bounds_hold: bool  # solved <= nominal for headline rows, <= 6 otherwise
    cross_checked: bool


def reproduce_table(cross_check: bool = True, strict: bool = True) -> TableReport:
    """Solve every admissible profile against the nominal bound table:
    (4,4,1) -> 13/2, (4,4,2) -> 31/5, every other profile <= 6; plus the
    constrained variants (4,4,2) with F3 >= 1 and (4,4,1) with F3 >= 1/2,
    both <= 6.

    Exact optima are always recorded.  A headline profile whose solved
    optimum differs from its nominal value is recorded in `mismatches`
    (never rounded); with strict=True any mismatch or violated bound
    raises TableMismatch.
    """
    optima = {}
    mismatches = []
    bounds_hold = True
    for profile in admissible_profiles():
        cert = solve_lp_exact(build_lp(profile), cross_check=cross_check)
        optima[profile] = cert.optimum
        nominal = NOMINAL_TABLE.get(profile.sizes)
        if nominal is not None:
            if cert.optimum != nominal:
                mismatches.append((profile.sizes, cert.optimum, nominal))
            if cert.optimum > nominal:
                bounds_hold = False
        elif cert.optimum > OTHERWISE_BOUND:
            bounds_hold = False
    constrained = {}
    for sizes, bound in (((4, 4, 2), ONE), ((4, 4, 1), Fraction(1, 2))):
        instance = build_lp(SupportProfile(*sizes), extra_f3_lower_bound=bound)
        cert = solve_lp_exact(instance, cross_check=cross_check)
        constrained[(sizes, bound)] = cert.optimum
        if cert.optimum > OTHERWISE_BOUND:
            bounds_hold = False
    report = TableReport(optima=optima, constrained=constrained,
                         mismatches=mismatches, bounds_hold=bounds_hold,
                         cross_checked=cross_check)
    if strict and (mismatches or not bounds_hold):
        raise TableMismatch(
            f"bounds_hold={bounds_hold}, mismatches={mismatches}")
    return report


def dual_bound_certificate(instance: LpInstance) -> tuple[Fraction, list[Fraction]]:
    """Solve the dual LP and return (bound, multipliers): nonnegative row
    multipliers lambda with sum_r lambda_r * row_r dominating the objective
    coordinatewise, so sum(y) <= lambda . b for every feasible y.

    This is a hand-checkable optimality certificate, independent of both
    the primal simplex path and vertex enumeration.
    """
    rows = instance.rows
    n = instance.n_vars
    m = len(rows)
    # Dual: minimize b.lam st A^T lam >= 1, lam >= 0; solved as
    # maximize (-b).lam st (-A^T) lam <= -1.
    at_neg = [[-rows[r].coeffs[j] for r in range(m)] for j in range(n)]
    rhs = [-ONE] * n
    value, lam = simplex_max(at_neg, rhs, [-rows[r].bound for r in range(m)])
    bound = -value
    # Independent arithmetic re-check of the certificate.
    assert all(v >= 0 for v in lam)
    for j in range(n):
        cover = sum(lam[r] * rows[r].coeffs[j] for r in range(m))
        assert cover >= 1, f"dual multipliers fail to cover variable {j}"
    assert sum(l * rows[r].bound for r, l in enumerate(lam)) == bound
    return bound, lam


# ---------------------------------------------------------------------------
# The T function
# ---------------------------------------------------------------------------

def t_function(x, y, z) -> Fraction:
    """T(x, y, z) = xy + yz + zx - 2(x + y + z), exactly."""
    fx, fy, fz = _to_fraction(x), _to_fraction(y), _to_fraction(z)
    return fx * fy + fy * fz + fz * fx - 2 * (fx + fy + fz)


def t_monotone_on_range(fx, fy, fz) -> bool:
    """True when T is non-decreasing in each variable on
    {x >= fx, y >= fy, z >= fz}: the partial derivatives y+z-2, x+z-2,
    x+y-2 are nonnegative throughout iff the pairwise sums of the corner
    coordinates are at least 2."""
    a, b, c = _to_fraction(fx), _to_fraction(fy), _to_fraction(fz)
    return a + b >= 2 and b + c >= 2 and c + a >= 2
