"""Free graded Lie algebras on finitely many generators.

The weight-k component of the free graded Lie algebra on S is realized
inside the tensor algebra T(S) via the super-commutator
[a, b] = ab - (-1)^{|a||b|} ba.  Its basis, per bracket length k, is the
Lyndon-Shirshov one:

  * the standard bracketing b(w) of every Lyndon word w of length k, and
  * [b(u), b(u)] for every Lyndon word u of length k/2 whose bracketing has
    odd total degree.

Generator order is (degree, insertion index), and the Lyndon comparison
uses that order.  The brute-force tensor-algebra rank computation in the
test suite is the arbiter for this choice of basis.

Free nilpotent truncations drop weight > n and (optionally) degree > N;
both cuts are quotients by ideals, so the results are honest graded Lie
algebras.  Structure constants are obtained by expanding each bracket of
basis elements in T(S) and solving against the expanded basis, which is
exact linear algebra.
"""

from __future__ import annotations

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
    solve,
    vec_add,
    vec_scale,
)
from .lie_core import (
    FdGradedLieAlgebra,
    LieError,
    LieIdeal,
    LieMorphism,
    is_nilpotent,
    nilpotent_quotient,
    validate,
)

# A bracketing tree: an int leaf (generator index) or a pair of trees.
Tree = object
# A tensor polynomial: word tuple -> coefficient.
Tensor = Dict[Tuple[int, ...], Fraction]


@dataclass(frozen=True)
class FreeLiePresentation:
    """Finitely many generators, each of weight 1."""

    generators: GradedBasis

    @classmethod
    def from_degrees(cls, names_degrees: Sequence[Tuple[str, int]]) -> "FreeLiePresentation":
        return cls(GradedBasis(BasisElement(n, d, weight=1) for n, d in names_degrees))

    @property
    def num(self) -> int:
        return len(self.generators)

    def degree_of_word(self, word: Sequence[int]) -> int:
        return sum(self.generators[i].degree for i in word)


def lyndon_words(alphabet_size: int, k: int) -> List[Tuple[int, ...]]:
    """Lyndon words of length exactly k over 0..alphabet_size-1 (Duval)."""
    if alphabet_size == 0 or k == 0:
        return []
    out: List[Tuple[int, ...]] = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == k:
            out.append(tuple(w))
        while len(w) < k:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    return sorted(out)


def standard_factorization(word: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """w = uv with v the longest proper Lyndon suffix."""
    n = len(word)
    for start in range(1, n):
        suffix = word[start:]
        if _is_lyndon(suffix):
            return word[:start], suffix
    raise ValueError(f"{word} has no standard factorization")


def _is_lyndon(word: Tuple[int, ...]) -> bool:
    n = len(word)
    if n == 0:
        return False
    for start in range(1, n):
        if word[start:] <= word:
            return False
    return True


def bracketing_of(word: Tuple[int, ...]) -> Tree:
    if len(word) == 1:
        return word[0]
    u, v = standard_factorization(word)
    return (bracketing_of(u), bracketing_of(v))


@dataclass(frozen=True)
class LyndonBasisElement:
    """One basis vector of the weight-k component of a free Lie algebra."""

    word: Tuple[int, ...]
    square: bool  # True for the elements [b(w), b(w)] with |b(w)| odd
    tree: Tree
    degree: int
    weight: int
    name: str

    def __str__(self) -> str:
        return self.name


def tree_name(tree: Tree, gens: GradedBasis) -> str:
    if isinstance(tree, int):
        return gens[tree].name
    l, r = tree
    return f"[{tree_name(l, gens)},{tree_name(r, gens)}]"


def tree_degree(tree: Tree, gens: GradedBasis) -> int:
    if isinstance(tree, int):
        return gens[tree].degree
    l, r = tree
    return tree_degree(l, gens) + tree_degree(r, gens)


def tensor_mul(a: Tensor, b: Tensor) -> Tensor:
    out: Tensor = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            s = out.get(w, Fraction(0)) + ca * cb
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


def tensor_commutator(a: Tensor, b: Tensor, deg_a: int, deg_b: int) -> Tensor:
    ab = tensor_mul(a, b)
    ba = tensor_mul(b, a)
    sign = Fraction((-1) ** (deg_a * deg_b))
    out = dict(ab)
    for w, c in ba.items():
        s = out.get(w, Fraction(0)) - sign * c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return out


def expand_tree(tree: Tree, gens: GradedBasis) -> Tensor:
    """Expansion of a bracketing in the tensor algebra."""
    if isinstance(tree, int):
        return {(tree,): ONE}
    l, r = tree
    return tensor_commutator(
        expand_tree(l, gens), expand_tree(r, gens), tree_degree(l, gens), tree_degree(r, gens)
    )


def lyndon_basis(pres: FreeLiePresentation, k: int) -> List[LyndonBasisElement]:
    """Basis of the weight-k component, Lyndon words first, squares after."""
    if k < 1:
        raise ValueError("weight must be >= 1")
    gens = pres.generators
    out: List[LyndonBasisElement] = []
    for w in lyndon_words(pres.num, k):
        t = bracketing_of(w)
        out.append(
            LyndonBasisElement(w, False, t, tree_degree(t, gens), k, tree_name(t, gens))
        )
    if k % 2 == 0:
        for w in lyndon_words(pres.num, k // 2):
            t = bracketing_of(w)
            if tree_degree(t, gens) % 2 == 1:
                name = f"[{tree_name(t, gens)},{tree_name(t, gens)}]"
                out.append(
                    LyndonBasisElement(w, True, (t, t), 2 * tree_degree(t, gens), k, name)
                )
    return out


def _word_space(pres: FreeLiePresentation, k: int) -> Dict[Tuple[int, ...], int]:
    """Index map for all length-k words, lexicographic."""
    words: List[Tuple[int, ...]] = [()]
    for _ in range(k):
        words = [w + (g,) for w in words for g in range(pres.num)]
    words.sort()
    return {w: i for i, w in enumerate(words)}


def _tensor_to_vector(t: Tensor, index: Dict[Tuple[int, ...], int]) -> Vector:
    return {index[w]: c for w, c in t.items() if c}


class _WeightComponent:
    """Expanded Lyndon basis of one weight, with a solver for coordinates."""

    def __init__(self, pres: FreeLiePresentation, k: int) -> None:
        self.elements = lyndon_basis(pres, k)
        self.index = _word_space(pres, k)
        rows = [
            _tensor_to_vector(expand_tree(e.tree, pres.generators), self.index)
            for e in self.elements
        ]
        # columns of the matrix are the basis elements
        entries = {}
        for col, row in enumerate(rows):
            for r, c in row.items():
                entries[(r, col)] = c
        self.matrix = SparseMatrix(len(self.index), max(len(rows), 1), entries)

    def coordinates(self, t: Tensor) -> Vector:
        target = _tensor_to_vector(t, self.index)
        sol = solve(self.matrix, target)
        if sol is None:
            raise LieError("tensor does not lie in the free Lie component")
        return sol


def free_nilpotent(
    pres: FreeLiePresentation, n: int, degree_cap: Optional[int] = None
) -> FdGradedLieAlgebra:
    """Free nilpotent Lie algebra of class n, optionally cut at degree <= N.

    Basis elements carry weight labels; the output passes `validate`.
    """
    if n < 1:
        raise ValueError("class must be >= 1")
    components = {k: _WeightComponent(pres, k) for k in range(1, n + 1)}

    kept: List[Tuple[int, int]] = []  # (weight, position inside component)
    names: List[BasisElement] = []
    for k in range(1, n + 1):
        for pos, e in enumerate(components[k].elements):
            if degree_cap is not None and e.degree > degree_cap:
                continue
            kept.append((k, pos))
            names.append(BasisElement(e.name, e.degree, weight=k))
    basis = GradedBasis(names)
    # map back: basis index -> (weight, position)
    locate = {}
    for (k, pos), be in zip(kept, names):
        locate[basis.index(be.name)] = (k, pos)

    brackets: Dict[Tuple[int, int], Vector] = {}
    for a in range(len(basis)):
        ka, pa = locate[a]
        ea = components[ka].elements[pa]
        for b in range(a, len(basis)):
            kb, pb = locate[b]
            eb = components[kb].elements[pb]
            if a == b and basis[a].degree % 2 == 0:
                continue
            k = ka + kb
            if k > n:
                continue
            t = tensor_commutator(
                expand_tree(ea.tree, pres.generators),
                expand_tree(eb.tree, pres.generators),
                ea.degree,
                eb.degree,
            )
            coords = components[k].coordinates(t)
            out: Vector = {}
            for pos, c in coords.items():
                e = components[k].elements[pos]
                if degree_cap is not None and e.degree > degree_cap:
                    continue  # quotient by the degree > N ideal
                out[basis.index(e.name)] = c
            if out:
                brackets[(a, b)] = out
    return FdGradedLieAlgebra(basis, brackets)


def _disjoint_names(L: FdGradedLieAlgebra, Lp: FdGradedLieAlgebra) -> Tuple[List[str], List[str]]:
    left = L.basis.names()
    right = Lp.basis.names()
    if set(left) & set(right):
        right = [n + "'" for n in right]
        if set(left) & set(right):
            raise LieError("cannot disambiguate generator names")
    return left, right


def free_product_nilpotent(
    L: FdGradedLieAlgebra,
    Lp: FdGradedLieAlgebra,
    n: int,
    degree_cap: Optional[int] = None,
) -> Tuple[FdGradedLieAlgebra, LieMorphism, LieMorphism]:
    """Class-n truncation of the free product, by presentation.

    Take the free Lie algebra on basis(L) |_| basis(L'), truncate at class n
    (and degree <= N when given), and divide by the ideal generated by the
    elements [g_i, g_j] - (value of [e_i, e_j] in the factor).  The returned
    morphisms are the canonical inclusions of the factors.
    """
    for M, tag in ((L, "left"), (Lp, "right")):
        rep = validate(M)
        if not rep:
            raise LieError(f"{tag} factor invalid: {rep.message}")
        if not is_nilpotent(M):
            raise LieError(f"{tag} factor is not nilpotent")
    left_names, right_names = _disjoint_names(L, Lp)
    gen_list = [(nm, L.basis[i].degree) for i, nm in enumerate(left_names)] + [
        (nm, Lp.basis[i].degree) for i, nm in enumerate(right_names)
    ]
    pres = FreeLiePresentation.from_degrees(gen_list)
    F = free_nilpotent(pres, n, degree_cap)

    def gen_vec(name: str) -> Vector:
        return {F.basis.index(name): ONE}

    # relation vectors: bracket of generators minus its value in the factor
    relations: List[Vector] = []

    def factor_relations(M: FdGradedLieAlgebra, names: List[str]) -> None:
        for i in range(M.dim):
            for j in range(i, M.dim):
                if i == j and M.basis[i].degree % 2 == 0:
                    continue
                bracket_in_F = F.bracket(gen_vec(names[i]), gen_vec(names[j]))
                value = {F.basis.index(names[k]): c for k, c in M.bracket_basis(i, j).items()}
                rel = vec_add(bracket_in_F, value, Fraction(-1))
                if rel:
                    relations.append(rel)

    factor_relations(L, left_names)
    factor_relations(Lp, right_names)

    ideal_space = Subspace(F.dim, relations)
    changed = True
    while changed:
        changed = False
        for i in range(F.dim):
            for b in ideal_space.basis():
                w = F.bracket({i: ONE}, b)
                if w and ideal_space.add(w):
                    changed = True
    Q, proj = nilpotent_quotient(F, LieIdeal(F, ideal_space.basis()))

    inc_left = LieMorphism(L, Q, [proj.apply(gen_vec(nm)) for nm in left_names])
    inc_right = LieMorphism(Lp, Q, [proj.apply(gen_vec(nm)) for nm in right_names])
    return Q, inc_left, inc_right
