"""Finite-dimensional graded Lie algebras over Q, degrees >= 0.

A complete enriched Lie algebra enters this package only through its
finite-dimensional nilpotent quotients L/L^(K+1); this module holds that
truncated representation together with validation (graded antisymmetry,
graded Jacobi, degree and weight additivity), lower central series, ideals,
quotients and the centre.

Sign conventions are the package-wide ones: for basis elements x, y with
i <= j the bracket is stored once, and [y, x] = -(-1)^{|x||y|} [x, y] is
derived.  The diagonal [x, x] is stored only when |x| is odd.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactlin import (
    ONE,
    BasisElement,
    GradedBasis,
    SparseMatrix,
    Subspace,
    Vector,
    format_rational,
    parse_rational,
    quotient_complement,
    vec_add,
    vec_scale,
)


class LieError(Exception):
    pass


@dataclass
class ValidationReport:
    ok: bool
    message: str = "ok"
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


class FdGradedLieAlgebra:
    """Graded Lie algebra on a finite basis with exact structure constants.

    `brackets` maps (i, j) with i <= j to the sparse vector of structure
    constants of [e_i, e_j]; entries with i == j are accepted only for odd
    degree.  Construction does not validate Jacobi; call `validate`.
    """

    def __init__(
        self,
        basis: GradedBasis,
        brackets: Dict[Tuple[int, int], Vector],
    ) -> None:
        self.basis = basis
        self.brackets: Dict[Tuple[int, int], Vector] = {}
        n = len(basis)
        for (i, j), v in brackets.items():
            if not (0 <= i <= j < n):
                raise LieError(f"bracket key ({i},{j}) not upper triangular in range")
            if i == j and basis[i].degree % 2 == 0:
                raise LieError(
                    f"diagonal bracket [{basis[i].name},{basis[i].name}] stored for even degree"
                )
            clean = {k: Fraction(c) for k, c in v.items() if Fraction(c)}
            if clean:
                self.brackets[(i, j)] = clean

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    def bracket_basis(self, i: int, j: int) -> Vector:
        """[e_i, e_j] for arbitrary index order."""
        if i <= j:
            return dict(self.brackets.get((i, j), {}))
        sign = -((-1) ** (self.degree(i) * self.degree(j)))
        return vec_scale(self.brackets.get((j, i), {}), Fraction(sign))

    def bracket(self, u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for i, a in u.items():
            for j, b in v.items():
                w = self.bracket_basis(i, j)
                if w:
                    out = vec_add(out, w, a * b)
        return out

    def adjoint_matrix(self, i: int) -> SparseMatrix:
        """Matrix of ad(e_i) acting on column vectors."""
        entries = {}
        for j in range(self.dim):
            w = self.bracket_basis(i, j)
            for k, c in w.items():
                entries[(k, j)] = c
        return SparseMatrix(self.dim, self.dim, entries)

    def jacobi_residual(self, i: int, j: int, k: int) -> Vector:
        """Cyclic graded Jacobi sum for the basis triple (i, j, k).

        (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]],
        which vanishes exactly when the graded Jacobi identity holds.
        """
        dx, dy, dz = self.degree(i), self.degree(j), self.degree(k)
        ei, ej, ek = {i: ONE}, {j: ONE}, {k: ONE}
        t1 = vec_scale(self.bracket(ei, self.bracket(ej, ek)), Fraction((-1) ** (dx * dz)))
        t2 = vec_scale(self.bracket(ej, self.bracket(ek, ei)), Fraction((-1) ** (dy * dx)))
        t3 = vec_scale(self.bracket(ek, self.bracket(ei, ej)), Fraction((-1) ** (dz * dy)))
        return vec_add(vec_add(t1, t2), t3)

    def weights(self) -> Optional[List[int]]:
        if self.basis.has_weights():
            return [e.weight for e in self.basis]  # type: ignore[misc]
        return None

    def vector_str(self, v: Vector) -> str:
        if not v:
            return "0"
        parts = []
        for i in sorted(v):
            c = v[i]
            name = self.basis[i].name
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{format_rational(c)} {name}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        basis = []
        for e in self.basis:
            entry = {"name": e.name, "degree": e.degree}
            if e.weight is not None:
                entry["weight"] = e.weight
            basis.append(entry)
        brackets = []
        for (i, j) in sorted(self.brackets):
            out = [
                {"k": self.basis[k].name, "coeff": format_rational(c)}
                for k, c in sorted(self.brackets[(i, j)].items())
            ]
            brackets.append({"i": self.basis[i].name, "j": self.basis[j].name, "out": out})
        return {"basis": basis, "brackets": brackets}

    @classmethod
    def from_json(cls, data: dict) -> "FdGradedLieAlgebra":
        basis = GradedBasis(
            BasisElement(e["name"], int(e["degree"]), e.get("weight"))
            for e in data["basis"]
        )
        brackets: Dict[Tuple[int, int], Vector] = {}
        for b in data.get("brackets", []):
            i, j = basis.index(b["i"]), basis.index(b["j"])
            v = {basis.index(t["k"]): parse_rational(t["coeff"]) for t in b["out"]}
            if i > j:
                sign = -((-1) ** (basis[i].degree * basis[j].degree))
                i, j = j, i
                v = vec_scale(v, Fraction(sign))
            if (i, j) in brackets:
                raise LieError(f"bracket ({b['i']},{b['j']}) given twice")
            brackets[(i, j)] = v
        return cls(basis, brackets)


def zero_algebra() -> FdGradedLieAlgebra:
    return FdGradedLieAlgebra(GradedBasis(), {})


def abelian(names_degrees: Sequence[Tuple[str, int]]) -> FdGradedLieAlgebra:
    basis = GradedBasis(BasisElement(n, d) for n, d in names_degrees)
    return FdGradedLieAlgebra(basis, {})


def heisenberg() -> FdGradedLieAlgebra:
    """x, y, z in degree 0 with [x, y] = z."""
    basis = GradedBasis([BasisElement("x", 0), BasisElement("y", 0), BasisElement("z", 0)])
    return FdGradedLieAlgebra(basis, {(0, 1): {2: ONE}})


def validate(L: FdGradedLieAlgebra) -> ValidationReport:
    """Check degree additivity, weight additivity and graded Jacobi.

    Antisymmetry is structural (only i <= j brackets are stored).  Reports
    cite the first failing pair or triple in basis order.
    """
    for (i, j), v in sorted(L.brackets.items()):
        dij = L.degree(i) + L.degree(j)
        for k, c in sorted(v.items()):
            if L.degree(k) != dij:
                return ValidationReport(
                    False,
                    f"degree violation: [{L.basis[i].name},{L.basis[j].name}] hits "
                    f"{L.basis[k].name} of degree {L.degree(k)} != {dij}",
                    (i, j, k),
                )
    w = L.weights()
    if w is not None:
        for (i, j), v in sorted(L.brackets.items()):
            wij = w[i] + w[j]
            for k in sorted(v):
                if w[k] != wij:
                    return ValidationReport(
                        False,
                        f"weight violation: [{L.basis[i].name},{L.basis[j].name}] hits "
                        f"{L.basis[k].name} of weight {w[k]} != {wij}",
                        (i, j, k),
                    )
    n = L.dim
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                res = L.jacobi_residual(i, j, k)
                if res:
                    return ValidationReport(
                        False,
                        "Jacobi violation at "
                        f"({L.basis[i].name},{L.basis[j].name},{L.basis[k].name}): "
                        f"sum = {L.vector_str(res)}",
                        (i, j, k),
                    )
    return ValidationReport(True)


class LieIdeal:
    """An ideal of a parent algebra, held as an echelon-reduced subspace."""

    def __init__(self, parent: FdGradedLieAlgebra, vectors: Sequence[Vector]) -> None:
        self.parent = parent
        self.space = Subspace(parent.dim, vectors)

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis(self) -> List[Vector]:
        return self.space.basis()

    def is_ideal(self) -> Optional[Tuple[int, Vector]]:
        """None when [parent, self] is contained in self, else a witness."""
        for i in range(self.parent.dim):
            for b in self.space.basis():
                w = self.parent.bracket({i: ONE}, b)
                if not self.space.contains(w):
                    return (i, b)
        return None


def lower_central_series(L: FdGradedLieAlgebra) -> List[LieIdeal]:
    """L = L^1 >= L^2 >= ... with L^{k+1} = [L, L^k].

    The list ends with the first zero term, or at stabilization for a
    non-nilpotent input.
    """
    terms: List[LieIdeal] = []
    current = LieIdeal(L, [{i: ONE} for i in range(L.dim)])
    terms.append(current)
    while current.dim > 0:
        nxt_vectors = []
        for i in range(L.dim):
            for b in current.space.basis():
                w = L.bracket({i: ONE}, b)
                if w:
                    nxt_vectors.append(w)
        nxt = LieIdeal(L, nxt_vectors)
        if nxt.space == current.space:
            terms.append(nxt)  # stabilized nonzero: not nilpotent
            break
        terms.append(nxt)
        current = nxt
    return terms


def is_nilpotent(L: FdGradedLieAlgebra) -> bool:
    return lower_central_series(L)[-1].dim == 0


def nilpotency_class(L: FdGradedLieAlgebra) -> int:
    """Largest c with L^c != 0 (0 for the zero algebra)."""
    lcs = lower_central_series(L)
    if lcs[-1].dim != 0:
        raise LieError("algebra is not nilpotent")
    return len(lcs) - 1


def lcs_layer_dims(L: FdGradedLieAlgebra) -> List[int]:
    lcs = lower_central_series(L)
    return [lcs[k].dim - lcs[k + 1].dim for k in range(len(lcs) - 1)]


class LieMorphism:
    """Degree-0 linear map given by images of the source basis."""

    def __init__(
        self,
        source: FdGradedLieAlgebra,
        target: FdGradedLieAlgebra,
        images: Sequence[Vector],
    ) -> None:
        if len(images) != source.dim:
            raise LieError("morphism needs one image per source basis element")
        self.source = source
        self.target = target
        self.images = [dict(v) for v in images]

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for i, c in v.items():
            out = vec_add(out, self.images[i], c)
        return out

    def matrix(self) -> SparseMatrix:
        entries = {}
        for i, img in enumerate(self.images):
            for k, c in img.items():
                entries[(k, i)] = c
        return SparseMatrix(self.target.dim, self.source.dim, entries)

    def validate(self) -> ValidationReport:
        for i, img in enumerate(self.images):
            di = self.source.degree(i)
            for k in img:
                if self.target.degree(k) != di:
                    return ValidationReport(
                        False, f"degree not preserved on {self.source.basis[i].name}", (i, k)
                    )
        for i in range(self.source.dim):
            for j in range(i, self.source.dim):
                lhs = self.apply(self.source.bracket_basis(i, j))
                rhs = self.target.bracket(self.images[i], self.images[j])
                if lhs != rhs:
                    return ValidationReport(
                        False,
                        f"bracket not preserved on "
                        f"({self.source.basis[i].name},{self.source.basis[j].name})",
                        (i, j),
                    )
        return ValidationReport(True)

    def is_surjective(self) -> bool:
        return Subspace(self.target.dim, self.images).dim == self.target.dim

    def compose(self, other: "LieMorphism") -> "LieMorphism":
        """self o other (apply `other` first)."""
        if other.target is not self.source:
            raise LieError("composition mismatch")
        return LieMorphism(
            other.source, self.target, [self.apply(img) for img in other.images]
        )

    @classmethod
    def identity(cls, L: FdGradedLieAlgebra) -> "LieMorphism":
        return cls(L, L, [{i: ONE} for i in range(L.dim)])


def nilpotent_quotient(
    L: FdGradedLieAlgebra, I: LieIdeal
) -> Tuple[FdGradedLieAlgebra, LieMorphism]:
    """Quotient L/I on the deterministic complement basis, with projection.

    The quotient basis consists of the basis elements of L at the non-pivot
    coordinates of I, so names, degrees and weights survive.
    """
    witness = I.is_ideal()
    if witness is not None:
        i, b = witness
        raise LieError(
            f"not an ideal: [{L.basis[i].name}, {L.vector_str(b)}] escapes the subspace"
        )
    comp = quotient_complement(I.basis(), L.dim)
    keep = sorted(next(iter(v)) for v in comp)
    pos = {orig: new for new, orig in enumerate(keep)}

    def project(v: Vector) -> Vector:
        red = I.space.reduce(v)
        return {pos[i]: c for i, c in red.items()}

    weights_ok = L.basis.has_weights()
    new_basis = GradedBasis(
        BasisElement(
            L.basis[i].name, L.basis[i].degree, L.basis[i].weight if weights_ok else None
        )
        for i in keep
    )
    # GradedBasis re-sorts by (degree, insertion); keep indices aligned.
    order = {new_basis.index(L.basis[i].name): i for i in keep}
    back = [order[t] for t in range(len(keep))]
    remap = {pos[orig]: t for t, orig in enumerate(back)}

    def project_named(v: Vector) -> Vector:
        return {remap[i]: c for i, c in project(v).items()}

    brackets: Dict[Tuple[int, int], Vector] = {}
    for a in range(len(back)):
        for b in range(a, len(back)):
            ia, ib = back[a], back[b]
            if a == b and new_basis[a].degree % 2 == 0:
                continue
            w = project_named(L.bracket_basis(ia, ib))
            if w:
                brackets[(a, b)] = w
    Q = FdGradedLieAlgebra(new_basis, brackets)
    proj = LieMorphism(L, Q, [project_named({i: ONE}) for i in range(L.dim)])
    return Q, proj


def centre(L: FdGradedLieAlgebra) -> Subspace:
    """{x : [x, L] = 0} as the kernel of the stacked adjoint matrices.

    Rows are indexed by pairs (i, k): the e_k-coefficient of [x, e_i] as a
    linear function of the coordinates of x.
    """
    entries: Dict[Tuple[int, int], Fraction] = {}
    row_index: Dict[Tuple[int, int], int] = {}
    for i in range(L.dim):
        for j in range(L.dim):
            w = L.bracket_basis(j, i)  # [x, e_i] with x = e_j
            for k, c in w.items():
                key = (i, k)
                if key not in row_index:
                    row_index[key] = len(row_index)
                r = row_index[key]
                entries[(r, j)] = entries.get((r, j), Fraction(0)) + c
    m = SparseMatrix(max(len(row_index), 1), L.dim, {k: v for k, v in entries.items() if v})
    from .exactlin import kernel_basis

    return Subspace(L.dim, kernel_basis(m))


def lie_from_file(path: str) -> FdGradedLieAlgebra:
    with open(path, "r", encoding="utf-8") as fh:
        return FdGradedLieAlgebra.from_json(json.load(fh))
