"""Exact rational sparse linear algebra.

Everything in this package is computed over Q with `fractions.Fraction`;
there is no floating point anywhere.  This module is the substrate: sparse
vectors and matrices, reduced row echelon form with deterministic pivoting
(leftmost nonzero column, first available row), kernel bases, and the
standard-basis complements used to realize quotient constructions.

Determinism matters more than speed here: every basis produced downstream
(Lie algebra quotients, cohomology representatives, minimal model
generators) is traced back to the pivoting order of this module, so equal
inputs must give bit-equal outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

# A sparse vector: coordinate index -> nonzero Fraction.
Vector = Dict[int, Fraction]


def vec_from(items: Iterable[Tuple[int, Fraction]]) -> Vector:
    v: Vector = {}
    for i, c in items:
        c = Fraction(c)
        if c:
            v[i] = v.get(i, ZERO) + c
            if not v[i]:
                del v[i]
    return v


def vec_add(u: Vector, v: Vector, scale: Fraction = ONE) -> Vector:
    """u + scale*v as a new sparse vector."""
    out = dict(u)
    for i, c in v.items():
        s = out.get(i, ZERO) + scale * c
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def vec_scale(u: Vector, scale: Fraction) -> Vector:
    if not scale:
        return {}
    return {i: scale * c for i, c in u.items()}


def vec_eq(u: Vector, v: Vector) -> bool:
    return u == v


def vec_support_min(u: Vector) -> Optional[int]:
    return min(u) if u else None


@dataclass
class SparseMatrix:
    """Sparse matrix over Q.  No zero entry is ever stored."""

    rows: int
    cols: int
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for (r, c), x in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) out of bounds")
            x = Fraction(x)
            if x:
                clean[(r, c)] = x
        self.entries = clean

    @classmethod
    def from_rows(cls, rows: Sequence[Vector], cols: int) -> "SparseMatrix":
        entries = {}
        for r, row in enumerate(rows):
            for c, x in row.items():
                if x:
                    entries[(r, c)] = Fraction(x)
        return cls(len(rows), cols, entries)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for r in range(rows):
            for c in range(cols):
                x = Fraction(data[r][c])
                if x:
                    entries[(r, c)] = x
        return cls(rows, cols, entries)

    def row(self, r: int) -> Vector:
        return {c: x for (rr, c), x in self.entries.items() if rr == r}

    def row_list(self) -> List[Vector]:
        rows: List[Vector] = [dict() for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            rows[r][c] = x
        return rows

    def mul_vec(self, v: Vector) -> Vector:
        out: Vector = {}
        for (r, c), x in self.entries.items():
            if c in v:
                s = out.get(r, ZERO) + x * v[c]
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, {(c, r): x for (r, c), x in self.entries.items()}
        )

    def to_dense(self) -> List[List[Fraction]]:
        data = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            data[r][c] = x
        return data

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )


def _echelon_rows(rows: List[Vector]) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form of a list of sparse rows.

    Pivoting is deterministic: columns left to right, first row with a
    nonzero entry in the pivot column.  Pivots are normalized to 1 and
    cleared above and below.  Returns (nonzero rows, pivot columns).
    """
    work = [dict(r) for r in rows]
    pivots: List[int] = []
    piv_rows: List[Vector] = []
    remaining = list(range(len(work)))
    cols = sorted({c for r in work for c in r})
    for col in cols:
        hit = None
        for idx in remaining:
            if col in work[idx]:
                hit = idx
                break
        if hit is None:
            continue
        row = work[hit]
        remaining.remove(hit)
        inv = ONE / row[col]
        row = vec_scale(row, inv)
        # clear below
        for idx in remaining:
            if col in work[idx]:
                work[idx] = vec_add(work[idx], row, -work[idx][col])
        # clear above
        for j, prow in enumerate(piv_rows):
            if col in prow:
                piv_rows[j] = vec_add(prow, row, -prow[col])
        piv_rows.append(row)
        pivots.append(col)
    return piv_rows, pivots


def row_reduce(m: SparseMatrix) -> Tuple[SparseMatrix, List[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    piv_rows, pivots = _echelon_rows(m.row_list())
    ech_rows = piv_rows + [dict() for _ in range(m.rows - len(piv_rows))]
    return SparseMatrix.from_rows(ech_rows, m.cols), pivots, len(pivots)


def kernel_basis(m: SparseMatrix) -> List[Vector]:
    """Deterministic basis of the null space {x : m.x = 0}.

    One vector per free column, taken in increasing column order; the free
    coordinate is set to 1 and pivot coordinates are back-solved.
    """
    piv_rows, pivots = _echelon_rows(m.row_list())
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v: Vector = {free: ONE}
        for prow, pcol in zip(piv_rows, pivots):
            if free in prow:
                v[pcol] = -prow[free]
        basis.append(v)
    return basis


def quotient_complement(sub: Sequence[Vector], ambient_dim: int) -> List[Vector]:
    """Standard basis vectors completing `sub` to a basis of Q^ambient_dim.

    They are the non-pivot coordinates of the echelon form of `sub`, so the
    choice is deterministic.
    """
    for v in sub:
        for i in v:
            if not 0 <= i < ambient_dim:
                raise ValueError(f"coordinate {i} outside ambient dimension {ambient_dim}")
    _, pivots = _echelon_rows(list(sub))
    pivot_set = set(pivots)
    return [{i: ONE} for i in range(ambient_dim) if i not in pivot_set]


def solve(m: SparseMatrix, b: Vector) -> Optional[Vector]:
    """One solution of m.x = b, or None.  Free coordinates are set to 0."""
    rows = m.row_list()
    aug = []
    RHS = m.cols  # sentinel column for the right-hand side
    for r, row in enumerate(rows):
        arow = dict(row)
        if r in b and b[r]:
            arow[RHS] = b[r]
        aug.append(arow)
    piv_rows, pivots = _echelon_rows(aug)
    sol: Vector = {}
    for prow, pcol in zip(piv_rows, pivots):
        if pcol == RHS:
            return None  # inconsistent
        if RHS in prow:
            sol[pcol] = prow[RHS]
    return sol


class Subspace:
    """A subspace of Q^dim held in reduced echelon form.

    Supports deterministic membership tests, reduction modulo the subspace,
    and incremental closure (used for ideal saturation and spans).
    """

    def __init__(self, dim: int, vectors: Sequence[Vector] = ()) -> None:
        self.ambient_dim = dim
        self._rows: List[Vector] = []
        self._pivots: List[int] = []
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self) -> List[Vector]:
        return [dict(r) for r in self._rows]

    def pivots(self) -> List[int]:
        return list(self._pivots)

    def reduce(self, v: Vector) -> Vector:
        """Residual of v after eliminating all pivot coordinates."""
        out = dict(v)
        for row, p in zip(self._rows, self._pivots):
            if p in out:
                out = vec_add(out, row, -out[p])
        return out

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def add(self, v: Vector) -> bool:
        """Insert v; returns True when the dimension grew."""
        res = self.reduce(v)
        if not res:
            return False
        p = min(res)
        res = vec_scale(res, ONE / res[p])
        for i, row in enumerate(self._rows):
            if p in row:
                self._rows[i] = vec_add(row, res, -row[p])
        # keep rows sorted by pivot for reproducible bases
        pos = 0
        while pos < len(self._pivots) and self._pivots[pos] < p:
            pos += 1
        self._rows.insert(pos, res)
        self._pivots.insert(pos, p)
        return True

    def coordinates_in_complement(self, v: Vector) -> Vector:
        """Reduce mod the subspace; result lives on non-pivot coordinates."""
        return self.reduce(v)

    def __contains__(self, v: Vector) -> bool:
        return self.contains(v)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self._rows == other._rows
        )

    def copy(self) -> "Subspace":
        s = Subspace(self.ambient_dim)
        s._rows = [dict(r) for r in self._rows]
        s._pivots = list(self._pivots)
        return s


def span_dim(vectors: Sequence[Vector], dim: int) -> int:
    return Subspace(dim, vectors).dim


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int
    weight: Optional[int] = None


class GradedBasis:
    """Ordered basis of a graded vector space.

    The order is (degree, insertion index); it is the normative tie-break
    for every deterministic choice in this package.  Names are unique.
    """

    def __init__(self, elements: Iterable[BasisElement] = ()) -> None:
        staged = list(elements)
        names = [e.name for e in staged]
        if len(set(names)) != len(names):
            raise ValueError("duplicate basis names")
        for e in staged:
            if e.degree < 0:
                raise ValueError(f"negative degree for {e.name}")
            if e.weight is not None and e.weight < 1:
                raise ValueError(f"weight of {e.name} must be >= 1")
        order = sorted(range(len(staged)), key=lambda i: (staged[i].degree, i))
        self.elements: List[BasisElement] = [staged[i] for i in order]
        self._index = {e.name: i for i, e in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> BasisElement:
        return self.elements[i]

    def index(self, name: str) -> int:
        return self._index[name]

    def degrees(self) -> List[int]:
        return [e.degree for e in self.elements]

    def names(self) -> List[str]:
        return [e.name for e in self.elements]

    def has_weights(self) -> bool:
        return all(e.weight is not None for e in self.elements) and len(self.elements) > 0


def format_rational(x: Fraction) -> str:
    """Serialize a rational as "num/den", omitting the denominator 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))
