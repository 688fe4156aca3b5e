"""Finite-dimensional Lie-algebra analysis over the rationals.

A Lie algebra arrives either as structure constants or as a list of base
vector fields whose pairwise brackets close over their rational span.  All
the invariants computed here -- Killing form, radical, derived series,
center, derivations, Levi complement, 3-dimensional classification -- are
decided with exact rational linear algebra; no floats anywhere.

Convention: c[i][j][k] is the coefficient of basis element k in [b_i, b_j].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .fields import BaseField, bracket_base
from .linalg import Mat, Vec

__all__ = [
    "LieAlgebraError",
    "NonClosureError",
    "DependentGeneratorsError",
    "StructureConstants",
    "Subspace",
    "DerivationSpace",
    "LeviResult",
    "structure_constants_from_fields",
    "jacobi_check",
    "killing_form",
    "killing_det",
    "is_semisimple",
    "is_simple",
    "derived_subalgebra",
    "center",
    "radical",
    "abelian_ideal_check",
    "find_abelian_ideals_coordinate",
    "derivations",
    "is_derivation",
    "in_inner_span",
    "subalgebra_constants",
    "levi_decomposition",
    "classify_3dim_simple",
]

IDEAL_SEARCH_MAX_DIM = 16


class LieAlgebraError(Exception):
    """Base class for algebra-layer failures."""


class NonClosureError(LieAlgebraError):
    """A bracket left the rational span of the generators."""

    def __init__(self, label_a: str, label_b: str, bracket: BaseField):
        self.pair = (label_a, label_b)
        self.bracket = bracket
        shown = ", ".join(str(c) for c in bracket.components)
        super().__init__(f"bracket [{label_a}, {label_b}] = ({shown}) is outside the span")


class DependentGeneratorsError(LieAlgebraError):
    """The supplied generators are linearly dependent over the rationals."""


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n held as a reduced row echelon basis (zero rows dropped)."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_vectors(vectors: Iterable[Sequence[Fraction]], ambient_dim: int) -> "Subspace":
        rows = [list(v) for v in vectors]
        if not rows:
            return Subspace(ambient_dim, ())
        reduced, pivots = linalg.rref(rows)
        return Subspace(ambient_dim, tuple(tuple(reduced[r]) for r in range(len(pivots))))

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace.from_vectors(linalg.identity(ambient_dim), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def contains(self, vector: Sequence[Fraction]) -> bool:
        residual = [Fraction(v) for v in vector]
        for row in self.basis:
            pivot = next(i for i, v in enumerate(row) if v)
            if residual[pivot]:
                f = residual[pivot]
                for i in range(self.ambient_dim):
                    residual[i] -= f * row[i]
        return all(v == 0 for v in residual)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.from_vectors(list(self.basis) + list(other.basis), self.ambient_dim)


@dataclass(frozen=True)
class StructureConstants:
    """Bracket table [b_i, b_j] = sum_k c[i][j][k] b_k over named basis elements."""

    labels: tuple[str, ...]
    c: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        m = len(self.labels)
        if len(self.c) != m or any(len(p) != m or any(len(r) != m for r in p) for p in self.c):
            raise LieAlgebraError("structure constants must form an m x m x m array")
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    if self.c[i][j][k] != -self.c[j][i][k]:
                        raise LieAlgebraError("structure constants must be antisymmetric")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket_coords(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
        m = self.dim
        out = [Fraction(0)] * m
        for i in range(m):
            if not u[i]:
                continue
            for j in range(m):
                if not v[j]:
                    continue
                f = u[i] * v[j]
                row = self.c[i][j]
                for k in range(m):
                    if row[k]:
                        out[k] += f * row[k]
        return out

    def ad_matrix(self, i: int) -> Mat:
        """Matrix of ad(b_i): column j holds [b_i, b_j]."""
        m = self.dim
        return [[Fraction(self.c[i][j][k]) for j in range(m)] for k in range(m)]

    def ad_of(self, vector: Sequence[Fraction]) -> Mat:
        m = self.dim
        out = linalg.zeros(m, m)
        for i in range(m):
            if vector[i]:
                ad_i = self.ad_matrix(i)
                for k in range(m):
                    for j in range(m):
                        if ad_i[k][j]:
                            out[k][j] += vector[i] * ad_i[k][j]
        return out


def _vectorize_fields(fields: Sequence[BaseField]):
    """Stack fields as exact coordinate vectors over their joint term keys."""
    keys: dict[tuple, int] = {}
    per_field = []
    for f in fields:
        coords = {}
        for pos, comp in enumerate(f.components):
            for key, q in comp.items():
                full = (pos, key)
                keys.setdefault(full, len(keys))
                coords[full] = q
        per_field.append(coords)
    columns = []
    for coords in per_field:
        col = [Fraction(0)] * len(keys)
        for full, q in coords.items():
            col[keys[full]] = q
        columns.append(col)
    return keys, columns


def structure_constants_from_fields(
    fields: Sequence[BaseField],
    labels: Sequence[str] | None = None,
    bracket=bracket_base,
) -> StructureConstants:
    """Bracket table of a generator list; fails if dependent or not closed."""
    m = len(fields)
    if labels is None:
        labels = [f"b{i + 1}" for i in range(m)]
    if len(labels) != m:
        raise LieAlgebraError("one label per generator is required")
    if m == 0:
        return StructureConstants((), ())
    keys, columns = _vectorize_fields(fields)
    rows = [[columns[f][r] for f in range(m)] for r in range(len(keys))]
    if linalg.rank(rows) != m:
        raise DependentGeneratorsError("generators are linearly dependent over the rationals")

    zero = Fraction(0)
    table = [[[zero] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            w = bracket(fields[i], fields[j])
            target = [Fraction(0)] * len(keys)
            outside = False
            for pos, comp in enumerate(w.components):
                for key, q in comp.items():
                    slot = keys.get((pos, key))
                    if slot is None:
                        outside = True
                        break
                    target[slot] = q
                if outside:
                    break
            coeffs = None if outside else linalg.solve(rows, target)
            if coeffs is None:
                raise NonClosureError(labels[i], labels[j], w)
            table[i][j] = list(coeffs)
            table[j][i] = [-q for q in coeffs]
    packed = tuple(tuple(tuple(row) for row in plane) for plane in table)
    return StructureConstants(tuple(labels), packed)


def jacobi_check(sc: StructureConstants):
    """(True, None) or (False, witness indices (i, j, k, s))."""
    m = sc.dim
    for i, j, k in itertools.combinations(range(m), 3):
        for s in range(m):
            total = Fraction(0)
            for l in range(m):
                total += sc.c[i][j][l] * sc.c[l][k][s]
                total += sc.c[j][k][l] * sc.c[l][i][s]
                total += sc.c[k][i][l] * sc.c[l][j][s]
            if total:
                return False, (i, j, k, s)
    return True, None


def killing_form(sc: StructureConstants) -> Mat:
    m = sc.dim
    ads = [sc.ad_matrix(i) for i in range(m)]
    kappa = linalg.zeros(m, m)
    for i in range(m):
        for j in range(i, m):
            trace = Fraction(0)
            a, b = ads[i], ads[j]
            for p in range(m):
                for q in range(m):
                    if a[p][q] and b[q][p]:
                        trace += a[p][q] * b[q][p]
            kappa[i][j] = trace
            kappa[j][i] = trace
    return kappa


def killing_det(sc: StructureConstants) -> Fraction:
    return linalg.det(killing_form(sc))


def is_semisimple(sc: StructureConstants) -> bool:
    return killing_det(sc) != 0


def derived_subalgebra(sc: StructureConstants) -> Subspace:
    m = sc.dim
    vectors = [list(sc.c[i][j]) for i in range(m) for j in range(i + 1, m)]
    return Subspace.from_vectors(vectors, m)


def center(sc: StructureConstants) -> Subspace:
    m = sc.dim
    rows = []
    for j in range(m):
        for k in range(m):
            rows.append([sc.c[i][j][k] for i in range(m)])
    return Subspace.from_vectors(linalg.kernel_basis(rows, ncols=m), m)


def _derived_of_subspace(sc: StructureConstants, space: Subspace) -> Subspace:
    vectors = [
        sc.bracket_coords(u, v) for u, v in itertools.combinations(space.basis, 2)
    ]
    return Subspace.from_vectors(vectors, sc.dim)


def _is_solvable_subspace(sc: StructureConstants, space: Subspace) -> bool:
    current = space
    while not current.is_zero():
        nxt = _derived_of_subspace(sc, current)
        if nxt.dim >= current.dim:
            return False
        current = nxt
    return True


def _is_ideal(sc: StructureConstants, space: Subspace) -> bool:
    for v in space.basis:
        for i in range(sc.dim):
            if not space.contains(sc.bracket_coords(linalg.unit_vector(sc.dim, i), v)):
                return False
    return True


def radical(sc: StructureConstants) -> Subspace:
    """Killing-orthogonal complement of the derived subalgebra.

    For a Lie algebra over a field of characteristic zero this equals the
    maximal solvable ideal; both defining properties are verified before the
    result is returned.
    """
    m = sc.dim
    kappa = killing_form(sc)
    derived = derived_subalgebra(sc)
    rows = [linalg.mat_vec(kappa, list(d)) for d in derived.basis]
    rad = Subspace.from_vectors(linalg.kernel_basis(rows, ncols=m), m)
    if not _is_ideal(sc, rad):
        raise LieAlgebraError("computed radical is not an ideal (Jacobi violation upstream?)")
    if not _is_solvable_subspace(sc, rad):
        raise LieAlgebraError("computed radical is not solvable (Jacobi violation upstream?)")
    return rad


def _coordinate_ideals(sc: StructureConstants) -> list[tuple[int, ...]]:
    """Nonempty proper coordinate-aligned ideals, smallest first."""
    m = sc.dim
    if m > IDEAL_SEARCH_MAX_DIM:
        raise LieAlgebraError(f"coordinate ideal search is capped at dimension {IDEAL_SEARCH_MAX_DIM}")
    found = []
    for size in range(1, m):
        for subset in itertools.combinations(range(m), size):
            inside = set(subset)
            ok = True
            for s in subset:
                for j in range(m):
                    row = sc.c[s][j]
                    if any(row[k] for k in range(m) if k not in inside):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.append(subset)
    return found


def is_simple(sc: StructureConstants) -> bool:
    """Semisimple with no proper nonzero coordinate-aligned ideal.

    The ideal search is restricted to spans of basis subsets, which decides
    the question for bases adapted to the algebra's structure; a simple
    verdict is relative to that search space.
    """
    if sc.dim == 0 or not is_semisimple(sc):
        return False
    return not _coordinate_ideals(sc)


def abelian_ideal_check(sc: StructureConstants, space: Subspace) -> bool:
    """Is the subspace an ideal with all internal brackets zero?"""
    if space.ambient_dim != sc.dim:
        raise LieAlgebraError("subspace ambient dimension does not match the algebra")
    if not _is_ideal(sc, space):
        return False
    for u, v in itertools.combinations(space.basis, 2):
        if any(sc.bracket_coords(u, v)):
            return False
    return True


def find_abelian_ideals_coordinate(sc: StructureConstants) -> list[Subspace]:
    """All nonzero coordinate-subset spans that are abelian ideals.

    This scans every subset of the given basis (2^m candidates with early
    exit), so it finds basis-aligned ideals only; it is not a full
    ideal-lattice enumeration.
    """
    m = sc.dim
    if m > IDEAL_SEARCH_MAX_DIM:
        raise LieAlgebraError(f"coordinate ideal search is capped at dimension {IDEAL_SEARCH_MAX_DIM}")
    out = []
    for size in range(1, m + 1):
        for subset in itertools.combinations(range(m), size):
            inside = set(subset)
            ok = True
            for s in subset:
                for j in range(m):
                    row = sc.c[s][j]
                    if j in inside and any(row):
                        ok = False
                        break
                    if any(row[k] for k in range(m) if k not in inside):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(
                    Subspace.from_vectors([linalg.unit_vector(m, i) for i in subset], m)
                )
    return out


# ---------------------------------------------------------------------------
# derivations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivationSpace:
    basis: tuple[tuple[tuple[Fraction, ...], ...], ...]
    inner_dimension: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def outer_dimension(self) -> int:
        return self.dimension - self.inner_dimension


def derivations(sc: StructureConstants) -> DerivationSpace:
    """Kernel of the Leibniz constraints D[b_i,b_j] = [Db_i,b_j] + [b_i,Db_j].

    Unknowns are the m^2 entries of D (column c = image of b_c).
    """
    m = sc.dim
    rows: list[list[Fraction]] = []
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(m):
                row = [Fraction(0)] * (m * m)
                for l in range(m):
                    # D applied to the bracket: c^l_ij D[k][l]
                    if sc.c[i][j][l]:
                        row[k * m + l] += sc.c[i][j][l]
                    # [D b_i, b_j]: D[l][i] c^k_lj
                    if sc.c[l][j][k]:
                        row[l * m + i] -= sc.c[l][j][k]
                    # [b_i, D b_j]: D[l][j] c^k_il
                    if sc.c[i][l][k]:
                        row[l * m + j] -= sc.c[i][l][k]
                if any(row):
                    rows.append(row)
    flat_basis = linalg.kernel_basis(rows, ncols=m * m)
    basis = tuple(
        tuple(tuple(vec[r * m + c] for c in range(m)) for r in range(m))
        for vec in flat_basis
    )
    inner_rows = [[sc.c[i][j][k] for j in range(m) for k in range(m)] for i in range(m)]
    # flatten ad matrices in the same (row, col) order as the derivation basis
    inner_flat = []
    for i in range(m):
        ad = sc.ad_matrix(i)
        inner_flat.append([ad[r][c] for r in range(m) for c in range(m)])
    inner_dim = linalg.rank(inner_flat) if m else 0
    return DerivationSpace(basis, inner_dim)


def is_derivation(sc: StructureConstants, matrix: Sequence[Sequence[Fraction]]) -> bool:
    m = sc.dim
    d = [[Fraction(v) for v in row] for row in matrix]
    for i in range(m):
        for j in range(i + 1, m):
            lhs = linalg.mat_vec(d, list(sc.c[i][j]))
            di = [d[r][i] for r in range(m)]
            dj = [d[r][j] for r in range(m)]
            rhs_a = sc.bracket_coords(di, linalg.unit_vector(m, j))
            rhs_b = sc.bracket_coords(linalg.unit_vector(m, i), dj)
            if any(lhs[k] != rhs_a[k] + rhs_b[k] for k in range(m)):
                return False
    return True


def in_inner_span(sc: StructureConstants, matrix: Sequence[Sequence[Fraction]]) -> bool:
    m = sc.dim
    flat = [Fraction(matrix[r][c]) for r in range(m) for c in range(m)]
    inner_flat = []
    for i in range(m):
        ad = sc.ad_matrix(i)
        inner_flat.append([ad[r][c] for r in range(m) for c in range(m)])
    base_rank = linalg.rank(inner_flat)
    return linalg.rank(inner_flat + [flat]) == base_rank


# ---------------------------------------------------------------------------
# subalgebras, quotients, Levi complement
# ---------------------------------------------------------------------------


def subalgebra_constants(
    sc: StructureConstants,
    space: Subspace,
    labels: Sequence[str] | None = None,
) -> StructureConstants:
    """Structure constants of a subspace that is closed under the bracket."""
    basis = [list(v) for v in space.basis]
    m = len(basis)
    if labels is None:
        labels = [f"s{i + 1}" for i in range(m)]
    rows = [[basis[f][r] for f in range(m)] for r in range(sc.dim)]
    zero = Fraction(0)
    table = [[[zero] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            w = sc.bracket_coords(basis[i], basis[j])
            coeffs = linalg.solve(rows, w)
            if coeffs is None:
                raise NonClosureError(
                    f"v{i + 1}", f"v{j + 1}", BaseField(())
                )
            table[i][j] = list(coeffs)
            table[j][i] = [-q for q in coeffs]
    packed = tuple(tuple(tuple(r) for r in plane) for plane in table)
    return StructureConstants(tuple(labels), packed)


def _quotient(sc: StructureConstants, ideal: Subspace):
    """Quotient structure constants plus coordinate lift/reduce maps."""
    m = sc.dim
    pivots = [next(i for i, v in enumerate(row) if v) for row in ideal.basis]
    free = [i for i in range(m) if i not in set(pivots)]

    def reduce_mod(vector: Sequence[Fraction]) -> Vec:
        out = [Fraction(v) for v in vector]
        for row, p in zip(ideal.basis, pivots):
            if out[p]:
                f = out[p]
                for i in range(m):
                    out[i] -= f * row[i]
        return out

    q = len(free)
    zero = Fraction(0)
    table = [[[zero] * q for _ in range(q)] for _ in range(q)]
    for a in range(q):
        for b in range(a + 1, q):
            w = reduce_mod(
                sc.bracket_coords(
                    linalg.unit_vector(m, free[a]), linalg.unit_vector(m, free[b])
                )
            )
            coeffs = [w[free[c]] for c in range(q)]
            table[a][b] = coeffs
            table[b][a] = [-v for v in coeffs]
    qsc = StructureConstants(
        tuple(f"q{c + 1}" for c in range(q)),
        tuple(tuple(tuple(r) for r in plane) for plane in table),
    )

    def lift(qvec: Sequence[Fraction]) -> Vec:
        out = [Fraction(0)] * m
        for c, v in enumerate(qvec):
            out[free[c]] = Fraction(v)
        return out

    def project(vector: Sequence[Fraction]) -> Vec:
        w = reduce_mod(vector)
        return [w[free[c]] for c in range(q)]

    return qsc, lift, project


def _levi_abelian(sc: StructureConstants, rad: Subspace) -> list[Vec]:
    """Correct a coordinate complement of an abelian radical into a subalgebra."""
    m = sc.dim
    pivots = [next(i for i, v in enumerate(row) if v) for row in rad.basis]
    free = [i for i in range(m) if i not in set(pivots)]
    s = len(free)
    p = rad.dim
    rad_rows = [list(v) for v in rad.basis]

    def reduce_mod(vector: Sequence[Fraction]) -> Vec:
        out = [Fraction(v) for v in vector]
        for row, piv in zip(rad_rows, pivots):
            if out[piv]:
                f = out[piv]
                for i in range(m):
                    out[i] -= f * row[i]
        return out

    # bracket data on the coordinate complement
    x = [linalg.unit_vector(m, f) for f in free]
    bracket_x = {}
    quotient_coeffs = {}
    defect = {}
    for a in range(s):
        for b in range(a + 1, s):
            w = sc.bracket_coords(x[a], x[b])
            reduced = reduce_mod(w)
            quotient_coeffs[(a, b)] = [reduced[f] for f in free]
            defect[(a, b)] = [wi - ri for wi, ri in zip(w, reduced)]
            bracket_x[(a, b)] = w

    # unknowns alpha[a][t]: correction of x_a by sum_t alpha[a][t] rad_t
    def col(a: int, t: int) -> int:
        return a * p + t

    rad_basis = [list(v) for v in rad.basis]
    ad_x_rad = [
        [sc.bracket_coords(x[a], rad_basis[t]) for t in range(p)] for a in range(s)
    ]
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for a in range(s):
        for b in range(a + 1, s):
            cbar = quotient_coeffs[(a, b)]
            for coord in range(m):
                row = [Fraction(0)] * (s * p)
                for t in range(p):
                    row[col(b, t)] += ad_x_rad[a][t][coord]
                    row[col(a, t)] -= ad_x_rad[b][t][coord]
                    for cpos in range(s):
                        if cbar[cpos]:
                            row[col(cpos, t)] -= cbar[cpos] * rad_basis[t][coord]
                rows.append(row)
                rhs.append(-defect[(a, b)][coord])
    solution = linalg.solve(rows, rhs) if rows else [Fraction(0)] * (s * p)
    if solution is None:
        raise LieAlgebraError("no semisimple complement found for an abelian radical")
    out = []
    for a in range(s):
        vec = list(x[a])
        for t in range(p):
            q = solution[col(a, t)]
            if q:
                for i in range(m):
                    vec[i] += q * rad_basis[t][i]
        out.append(vec)
    return out


def _levi_vectors(sc: StructureConstants, rad: Subspace) -> list[Vec]:
    rad_derived = _derived_of_subspace(sc, rad)
    if rad_derived.is_zero():
        return _levi_abelian(sc, rad)
    # pass to the quotient by [r, r], find a complement there, pull back, recurse
    qsc, lift, project = _quotient(sc, rad_derived)
    qrad = Subspace.from_vectors([project(v) for v in rad.basis], qsc.dim)
    q_levi = _levi_vectors(qsc, qrad)
    h_vectors = [lift(v) for v in q_levi] + [list(v) for v in rad_derived.basis]
    h_space = Subspace.from_vectors(h_vectors, sc.dim)
    hsc = subalgebra_constants(sc, h_space)
    h_rows = [[h_space.basis[f][r] for f in range(h_space.dim)] for r in range(sc.dim)]
    rad_in_h = []
    for v in rad_derived.basis:
        coords = linalg.solve(h_rows, list(v))
        if coords is None:
            raise LieAlgebraError("radical derived series left the lifted subalgebra")
        rad_in_h.append(coords)
    inner = _levi_vectors(hsc, Subspace.from_vectors(rad_in_h, h_space.dim))
    out = []
    for v in inner:
        full = [Fraction(0)] * sc.dim
        for coeff, basis_vec in zip(v, h_space.basis):
            if coeff:
                for i in range(sc.dim):
                    full[i] += coeff * basis_vec[i]
        out.append(full)
    return out


@dataclass(frozen=True)
class LeviResult:
    radical: Subspace
    levi: Subspace


def levi_decomposition(sc: StructureConstants) -> LeviResult:
    """Radical plus a semisimple complement subalgebra.

    The complement is found by lifting through the derived series of the
    radical; before returning, the result is verified: the complement is
    closed under the bracket, has nondegenerate intrinsic Killing form,
    meets the radical trivially, and together they span everything.
    """
    m = sc.dim
    rad = radical(sc)
    if rad.dim == m:
        return LeviResult(rad, Subspace.zero(m))
    if rad.is_zero():
        levi = Subspace.full(m)
    else:
        levi = Subspace.from_vectors(_levi_vectors(sc, rad), m)
    # verification
    if levi.dim + rad.dim != m or levi.sum(rad).dim != m:
        raise LieAlgebraError("Levi complement does not complement the radical")
    for u, v in itertools.combinations(levi.basis, 2):
        if not levi.contains(sc.bracket_coords(u, v)):
            raise LieAlgebraError("Levi complement is not closed under the bracket")
    if levi.dim and linalg.det(killing_form(subalgebra_constants(sc, levi))) == 0:
        raise LieAlgebraError("Levi complement is not semisimple")
    return LeviResult(rad, levi)


def classify_3dim_simple(sc: StructureConstants) -> str:
    """Classify a 3-dimensional algebra by the inertia of its Killing form.

    Returns "sl2-type" (split: signature (2,1)), "so3-type" (negative
    definite), or "not-simple" (degenerate Killing form).
    """
    if sc.dim != 3:
        raise LieAlgebraError("classification requires a 3-dimensional algebra")
    kappa = killing_form(sc)
    if linalg.det(kappa) == 0:
        return "not-simple"
    pos, neg, zero = linalg.congruence_signature(kappa)
    if (pos, neg) == (2, 1):
        return "sl2-type"
    if (pos, neg) == (0, 3):
        return "so3-type"
    raise LieAlgebraError(f"unexpected Killing signature ({pos},{neg}) in dimension 3")
