"""Vector fields on the base and on its tangent bundle.

Frame convention: a tangent-bundle field on an n-dimensional base has 2n
components; slots 0..n-1 multiply d/dx^1..d/dx^n and slots n..2n-1 multiply
d/dy^1..d/dy^n.  Endomorphism fields ("vector one-forms") are 2n x 2n
matrices in that frame, column a holding the image of the a-th frame field.

The membership predicates take the geometry pipeline's output objects (spray,
connection, curvature, metric) as plain data and report the first nonzero
obstruction on failure, so a False answer always comes with a witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import kernel_basis
from .symexpr import CanonicalExpr, yvar

__all__ = [
    "BaseField",
    "TMField",
    "VectorOneForm",
    "VectorTwoForm",
    "MembershipVerdict",
    "complete_lift",
    "bracket_base",
    "bracket_tm",
    "apply_to_scalar",
    "lie_derivative_oneform",
    "fn_bracket",
    "nijenhuis",
    "spray_field",
    "in_AS",
    "in_AGamma",
    "in_Ag",
    "is_horizontal",
    "in_nullity",
    "nullity_rank_numeric",
    "solve_in_span",
    "combine_fields",
]


def _slot_var(n: int, slot: int) -> str:
    return f"x{slot + 1}" if slot < n else f"y{slot - n + 1}"


@dataclass(frozen=True)
class BaseField:
    """Vector field on the base manifold; components may not touch y."""

    components: tuple[CanonicalExpr, ...]

    def __post_init__(self):
        for c in self.components:
            if c.uses_y():
                raise ValueError("base vector fields cannot depend on fiber variables")

    @staticmethod
    def make(components: Iterable[CanonicalExpr]) -> "BaseField":
        return BaseField(tuple(components))

    @staticmethod
    def zero(n: int) -> "BaseField":
        return BaseField((CanonicalExpr(),) * n)

    @property
    def dim(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "BaseField") -> "BaseField":
        return BaseField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "BaseField") -> "BaseField":
        return BaseField(tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, q: Fraction | int) -> "BaseField":
        return BaseField(tuple(c * q for c in self.components))


@dataclass(frozen=True)
class TMField:
    """Vector field on the tangent bundle, 2n components."""

    components: tuple[CanonicalExpr, ...]

    def __post_init__(self):
        if len(self.components) % 2:
            raise ValueError("tangent-bundle fields need an even number of components")

    @staticmethod
    def make(components: Iterable[CanonicalExpr]) -> "TMField":
        return TMField(tuple(components))

    @staticmethod
    def zero(n: int) -> "TMField":
        return TMField((CanonicalExpr(),) * (2 * n))

    @property
    def dim(self) -> int:
        return len(self.components) // 2

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_projectable(self) -> bool:
        n = self.dim
        return all(not self.components[i].uses_y() for i in range(n))

    def __add__(self, other: "TMField") -> "TMField":
        return TMField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "TMField") -> "TMField":
        return TMField(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "TMField":
        return TMField(tuple(-a for a in self.components))

    def scale(self, q: Fraction | int) -> "TMField":
        return TMField(tuple(c * q for c in self.components))


def frame_field(n: int, slot: int) -> TMField:
    comps = [CanonicalExpr()] * (2 * n)
    comps[slot] = CanonicalExpr.const(1)
    return TMField(tuple(comps))


def complete_lift(field: BaseField) -> TMField:
    """Lift X^i d/dx^i to X^i d/dx^i + y^j (dX^i/dx^j) d/dy^i."""
    n = field.dim
    lifted = list(field.components)
    for i in range(n):
        acc = CanonicalExpr()
        for j in range(n):
            acc = acc + yvar(j + 1) * field.components[i].diff(f"x{j + 1}")
        lifted.append(acc)
    return TMField(tuple(lifted))


def bracket_base(a: BaseField, b: BaseField) -> BaseField:
    """Lie bracket on the base: [a,b]^k = a^i d_i b^k - b^i d_i a^k."""
    n = a.dim
    if b.dim != n:
        raise ValueError("bracket of fields with different dimensions")
    out = []
    for k in range(n):
        acc = CanonicalExpr()
        for i in range(n):
            var = f"x{i + 1}"
            acc = acc + a.components[i] * b.components[k].diff(var)
            acc = acc - b.components[i] * a.components[k].diff(var)
        out.append(acc)
    return BaseField(tuple(out))


def bracket_tm(a: TMField, b: TMField) -> TMField:
    """Lie bracket on the tangent bundle, derivatives over all 2n slots."""
    if len(a.components) != len(b.components):
        raise ValueError("bracket of fields with different dimensions")
    n = a.dim
    out = []
    for k in range(2 * n):
        acc = CanonicalExpr()
        for s in range(2 * n):
            var = _slot_var(n, s)
            if a.components[s]:
                acc = acc + a.components[s] * b.components[k].diff(var)
            if b.components[s]:
                acc = acc - b.components[s] * a.components[k].diff(var)
        out.append(acc)
    return TMField(tuple(out))


def apply_to_scalar(field: TMField, scalar: CanonicalExpr) -> CanonicalExpr:
    n = field.dim
    acc = CanonicalExpr()
    for s in range(2 * n):
        if field.components[s]:
            acc = acc + field.components[s] * scalar.diff(_slot_var(n, s))
    return acc


# ---------------------------------------------------------------------------
# endomorphism fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VectorOneForm:
    """Endomorphism field; matrix[b][a] = frame-b coefficient of the image of frame a."""

    matrix: tuple[tuple[CanonicalExpr, ...], ...]

    def __post_init__(self):
        size = len(self.matrix)
        if size % 2 or any(len(row) != size for row in self.matrix):
            raise ValueError("endomorphism matrix must be square of even size")

    @staticmethod
    def make(rows: Iterable[Iterable[CanonicalExpr]]) -> "VectorOneForm":
        return VectorOneForm(tuple(tuple(r) for r in rows))

    @staticmethod
    def identity(n: int) -> "VectorOneForm":
        return VectorOneForm(
            tuple(
                tuple(CanonicalExpr.const(int(i == j)) for j in range(2 * n))
                for i in range(2 * n)
            )
        )

    @staticmethod
    def zero_form(n: int) -> "VectorOneForm":
        return VectorOneForm(tuple((CanonicalExpr(),) * (2 * n) for _ in range(2 * n)))

    @property
    def dim(self) -> int:
        return len(self.matrix) // 2

    def apply(self, field: TMField) -> TMField:
        size = len(self.matrix)
        comps = []
        for b in range(size):
            acc = CanonicalExpr()
            row = self.matrix[b]
            for a in range(size):
                if row[a] and field.components[a]:
                    acc = acc + row[a] * field.components[a]
            comps.append(acc)
        return TMField(tuple(comps))

    def compose(self, other: "VectorOneForm") -> "VectorOneForm":
        size = len(self.matrix)
        rows = []
        for b in range(size):
            row = []
            for a in range(size):
                acc = CanonicalExpr()
                for c in range(size):
                    if self.matrix[b][c] and other.matrix[c][a]:
                        acc = acc + self.matrix[b][c] * other.matrix[c][a]
                row.append(acc)
            rows.append(tuple(row))
        return VectorOneForm(tuple(rows))

    def frame_image(self, a: int) -> TMField:
        return TMField(tuple(self.matrix[b][a] for b in range(len(self.matrix))))

    def __add__(self, other: "VectorOneForm") -> "VectorOneForm":
        return VectorOneForm(
            tuple(
                tuple(p + q for p, q in zip(r1, r2))
                for r1, r2 in zip(self.matrix, other.matrix)
            )
        )

    def __sub__(self, other: "VectorOneForm") -> "VectorOneForm":
        return self + other.scale(-1)

    def __neg__(self) -> "VectorOneForm":
        return self.scale(-1)

    def scale(self, q: Fraction | int) -> "VectorOneForm":
        return VectorOneForm(tuple(tuple(v * q for v in row) for row in self.matrix))

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.matrix for v in row)


def lie_derivative_oneform(field: TMField, form: VectorOneForm) -> VectorOneForm:
    """Lie derivative [X, L] acting as ([X,L])(Y) = [X, L(Y)] - L([X, Y])."""
    size = len(form.matrix)
    n = form.dim
    cols = []
    for a in range(size):
        image = form.frame_image(a)
        first = bracket_tm(field, image)
        second = form.apply(bracket_tm(field, frame_field(n, a)))
        cols.append((first - second).components)
    rows = tuple(tuple(cols[a][b] for a in range(size)) for b in range(size))
    return VectorOneForm(rows)


@dataclass(frozen=True)
class VectorTwoForm:
    """Antisymmetric table of tangent-bundle fields indexed by frame pairs."""

    entries: tuple[tuple[TMField, ...], ...]

    def entry(self, a: int, b: int) -> TMField:
        return self.entries[a][b]

    @property
    def dim(self) -> int:
        return len(self.entries) // 2

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)

    def __sub__(self, other: "VectorTwoForm") -> "VectorTwoForm":
        return VectorTwoForm(
            tuple(
                tuple(p - q for p, q in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            )
        )

    def scale(self, q: Fraction | int) -> "VectorTwoForm":
        return VectorTwoForm(tuple(tuple(f.scale(q) for f in row) for row in self.entries))


def fn_bracket(k_form: VectorOneForm, l_form: VectorOneForm) -> VectorTwoForm:
    """Frolicher-Nijenhuis bracket of two endomorphism fields on frame pairs.

    [K,L](X,Y) = [KX,LY] + [LX,KY] + KL[X,Y] + LK[X,Y]
                 - K[LX,Y] - L[KX,Y] - K[X,LY] - L[X,KY]
    """
    size = len(k_form.matrix)
    n = k_form.dim
    if len(l_form.matrix) != size:
        raise ValueError("bracket of forms with different dimensions")

    frames = [frame_field(n, s) for s in range(size)]
    k_images = [k_form.frame_image(s) for s in range(size)]
    l_images = [l_form.frame_image(s) for s in range(size)]

    table: list[list[TMField]] = [[TMField.zero(n)] * size for _ in range(size)]
    for a in range(size):
        for b in range(a + 1, size):
            x, y = frames[a], frames[b]
            kx, ky = k_images[a], k_images[b]
            lx, ly = l_images[a], l_images[b]
            xy = bracket_tm(x, y)
            value = (
                bracket_tm(kx, ly)
                + bracket_tm(lx, ky)
                + k_form.apply(l_form.apply(xy))
                + l_form.apply(k_form.apply(xy))
                - k_form.apply(bracket_tm(lx, y))
                - l_form.apply(bracket_tm(kx, y))
                - k_form.apply(bracket_tm(x, ly))
                - l_form.apply(bracket_tm(x, ky))
            )
            table[a][b] = value
            table[b][a] = -value
    return VectorTwoForm(tuple(tuple(row) for row in table))


def nijenhuis(form: VectorOneForm) -> VectorTwoForm:
    """Half of [L, L], e.g. zero for the tangent structure, curvature for h."""
    return fn_bracket(form, form).scale(Fraction(1, 2))


# ---------------------------------------------------------------------------
# membership predicates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MembershipVerdict:
    predicate: str
    ok: bool
    residual: CanonicalExpr | None = None
    location: str = ""

    def __bool__(self) -> bool:
        return self.ok


def spray_field(spray) -> TMField:
    """The spray as a tangent-bundle field: y^i d/dx^i - 2 G^i d/dy^i."""
    n = len(spray.G)
    comps = [yvar(i + 1) for i in range(n)]
    comps += [spray.G[i] * Fraction(-2) for i in range(n)]
    return TMField(tuple(comps))


def _connection_oneform(gamma1) -> VectorOneForm:
    """2h - I as a matrix: almost-product structure of the connection."""
    n = len(gamma1)
    rows = [[CanonicalExpr() for _ in range(2 * n)] for _ in range(2 * n)]
    for i in range(n):
        rows[i][i] = CanonicalExpr.const(1)
        rows[n + i][n + i] = CanonicalExpr.const(-1)
    for j in range(n):
        for i in range(n):
            rows[n + j][i] = gamma1[j][i] * Fraction(-2)
    return VectorOneForm(tuple(tuple(r) for r in rows))


def _first_nonzero(labeled: Iterable[tuple[str, CanonicalExpr]]):
    for label, expr in labeled:
        if not expr.is_zero():
            return label, expr
    return None


def _energy(metric) -> CanonicalExpr:
    n = metric.dim
    acc = CanonicalExpr()
    for i in range(n):
        for j in range(n):
            if metric.g[i][j]:
                acc = acc + metric.g[i][j] * yvar(i + 1) * yvar(j + 1)
    return acc * Fraction(1, 2)


def _spray_obstruction(field: BaseField, spray) -> list[tuple[str, CanonicalExpr]]:
    n = field.dim
    lifted = complete_lift(field)
    res = bracket_tm(lifted, spray_field(spray))
    return [(f"component {_slot_var(n, s)}", res.components[s]) for s in range(2 * n)]


def in_AS(field: BaseField, spray) -> MembershipVerdict:
    """Does the complete lift commute with the spray?"""
    witness = _first_nonzero(_spray_obstruction(field, spray))
    if witness is None:
        return MembershipVerdict("in_AS", True)
    return MembershipVerdict("in_AS", False, witness[1], witness[0])


def in_AGamma(field: BaseField, connection) -> MembershipVerdict:
    """Does the complete lift preserve the connection's almost-product structure?"""
    lifted = complete_lift(field)
    form = _connection_oneform(connection.gamma1)
    derivative = lie_derivative_oneform(lifted, form)
    n = field.dim
    labeled = (
        (f"matrix entry ({b},{a})", derivative.matrix[b][a])
        for b in range(2 * n)
        for a in range(2 * n)
    )
    witness = _first_nonzero(labeled)
    if witness is None:
        return MembershipVerdict("in_AGamma", True)
    return MembershipVerdict("in_AGamma", False, witness[1], witness[0])


def in_Ag(field: BaseField, metric, spray) -> MembershipVerdict:
    """Spray symmetry plus annihilation of the energy function."""
    spray_witness = _first_nonzero(_spray_obstruction(field, spray))
    if spray_witness is not None:
        return MembershipVerdict("in_Ag", False, spray_witness[1], spray_witness[0])
    residual = apply_to_scalar(complete_lift(field), _energy(metric))
    if residual.is_zero():
        return MembershipVerdict("in_Ag", True)
    return MembershipVerdict("in_Ag", False, residual, "energy derivative")


def _horizontal_obstruction(field: BaseField, connection) -> list[tuple[str, CanonicalExpr]]:
    n = field.dim
    out = []
    for j in range(n):
        for l in range(n):
            acc = field.components[j].diff(f"x{l + 1}")
            for i in range(n):
                if field.components[i] and connection.gamma2[j][i][l]:
                    acc = acc + field.components[i] * connection.gamma2[j][i][l]
            out.append((f"equation (j={j + 1}, l={l + 1})", acc))
    return out


def is_horizontal(field: BaseField, connection) -> MembershipVerdict:
    """Is the horizontal lift of the field closed under the coordinate frame,
    i.e. dX^j/dx^l + X^i Gamma^j_il = 0 for all j, l?"""
    witness = _first_nonzero(_horizontal_obstruction(field, connection))
    if witness is None:
        return MembershipVerdict("is_horizontal", True)
    return MembershipVerdict("is_horizontal", False, witness[1], witness[0])


def _nullity_obstruction(field: BaseField, curvature) -> list[tuple[str, CanonicalExpr]]:
    n = field.dim
    out = []
    for k in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                acc = CanonicalExpr()
                for l in range(n):
                    if field.components[l] and curvature.R2[k][l][i][j]:
                        acc = acc + field.components[l] * curvature.R2[k][l][i][j]
                out.append((f"contraction (k={k + 1}, i={i + 1}, j={j + 1})", acc))
    return out


def in_nullity(field: BaseField, curvature) -> MembershipVerdict:
    """Does contraction with the curvature coefficients vanish identically?"""
    witness = _first_nonzero(_nullity_obstruction(field, curvature))
    if witness is None:
        return MembershipVerdict("in_nullity", True)
    return MembershipVerdict("in_nullity", False, witness[1], witness[0])


def nullity_rank_numeric(curvature, points: Sequence[Mapping[str, Fraction]]) -> int:
    """Max over sample points of the rank of X^l -> X^l R^k_l,ij(point)."""
    if not points:
        raise ValueError("at least one sample point is required")
    n = len(curvature.R2)
    best = 0
    for point in points:
        rows = []
        for k in range(n):
            for i in range(n):
                for j in range(i + 1, n):
                    rows.append(
                        [curvature.R2[k][l][i][j].eval(point) for l in range(n)]
                    )
        best = max(best, int(np.linalg.matrix_rank(np.array(rows, dtype=float))))
    return best


# ---------------------------------------------------------------------------
# span solver
# ---------------------------------------------------------------------------

CONDITION_ORDER = ("spray-symmetry", "isometry", "horizontality")


def solve_in_span(
    dictionary: Sequence[BaseField],
    conditions: Iterable[str],
    *,
    metric=None,
    spray=None,
    connection=None,
) -> list[tuple[Fraction, ...]]:
    """All rational combinations of the dictionary satisfying every condition.

    Returns a reduced (echelon) basis of coefficient vectors over the
    dictionary, found by exact coefficient matching: the obstruction of a
    combination is the same combination of per-field obstruction expressions,
    so the kernel of the term-coefficient matrix is exactly the solution set.
    """
    wanted = list(dict.fromkeys(conditions))
    for name in wanted:
        if name not in CONDITION_ORDER:
            raise ValueError(f"unknown condition {name!r}")
    if not wanted:
        raise ValueError("at least one condition is required")
    if "spray-symmetry" in wanted and spray is None:
        raise ValueError("spray-symmetry requires the spray")
    if "isometry" in wanted and (spray is None or metric is None):
        raise ValueError("isometry requires the metric and the spray")
    if "horizontality" in wanted and connection is None:
        raise ValueError("horizontality requires the connection")
    if not dictionary:
        return []
    dims = {f.dim for f in dictionary}
    if len(dims) != 1:
        raise ValueError("dictionary fields must share one dimension")

    obstructions: list[list[CanonicalExpr]] = []
    for field in dictionary:
        exprs: list[CanonicalExpr] = []
        for name in CONDITION_ORDER:
            if name not in wanted:
                continue
            if name == "spray-symmetry":
                exprs.extend(e for _lbl, e in _spray_obstruction(field, spray))
            elif name == "isometry":
                exprs.extend(e for _lbl, e in _spray_obstruction(field, spray))
                exprs.append(apply_to_scalar(complete_lift(field), _energy(metric)))
            else:
                exprs.extend(e for _lbl, e in _horizontal_obstruction(field, connection))
        obstructions.append(exprs)

    # coefficient matching: one row per (expression slot, term key)
    keys: dict[tuple, int] = {}
    for exprs in obstructions:
        for pos, expr in enumerate(exprs):
            for key, _c in expr.items():
                keys.setdefault((pos, key), len(keys))
    rows = [[Fraction(0)] * len(dictionary) for _ in range(len(keys))]
    for col, exprs in enumerate(obstructions):
        for pos, expr in enumerate(exprs):
            for key, c in expr.items():
                rows[keys[(pos, key)]][col] = c
    basis = kernel_basis(rows, ncols=len(dictionary))
    return [tuple(v) for v in basis]


def combine_fields(dictionary: Sequence[BaseField], coeffs: Sequence[Fraction]) -> BaseField:
    n = dictionary[0].dim
    acc = BaseField.zero(n)
    for field, q in zip(dictionary, coeffs):
        if q:
            acc = acc + field.scale(q)
    return acc
