"""Truncated universal enveloping algebras UL/J^n with exp, log and BCH.

A nilpotent graded Lie algebra L gives UL with the relations
x y - (-1)^{|x||y|} y x = [x, y].  PBW monomials (weakly increasing basis
indices, odd factors at most once) form a basis.  The J-adic weight of a
monomial is the sum of the lower-central-series depths of its factors;
the truncation UL/J^n keeps weight < n.

exp and log are the standard series between the degree-0 part of the
augmentation ideal and elements with augmentation 1; exp restricted to L_0
lands in the group-like elements (coproduct Delta g = g (x) g), and
log(exp x . exp y) computes the Baker-Campbell-Hausdorff product, which is
a finite computation here because everything is nilpotent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactlin import ONE, Vector, format_rational
from .lie_core import (
    FdGradedLieAlgebra,
    LieError,
    is_nilpotent,
    lower_central_series,
    nilpotency_class,
)

Monomial = Tuple[int, ...]  # weakly increasing Lie basis indices


class UEAError(Exception):
    pass


class TruncatedUEA:
    """PBW model of UL/J^n for a nilpotent graded Lie algebra."""

    def __init__(self, lie: FdGradedLieAlgebra, word_bound: int) -> None:
        if word_bound < 1:
            raise UEAError("word bound must be >= 1")
        if not is_nilpotent(lie):
            raise UEAError("enveloping truncation needs a nilpotent Lie algebra")
        self.lie = lie
        self.n = word_bound
        lcs = lower_central_series(lie)
        self.depth: List[int] = []
        for i in range(lie.dim):
            d = 0
            for k, term in enumerate(lcs):
                if term.space.contains({i: ONE}):
                    d = k + 1
                else:
                    break
            self.depth.append(d)
        self.monomials: List[Monomial] = sorted(
            self._generate((), 0, 0), key=self._mono_key
        )
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self._straighten_cache: Dict[Tuple[int, ...], Dict[Monomial, Fraction]] = {}

    def _mono_key(self, m: Monomial):
        return (self.mono_weight(m), len(m), m)

    def _generate(self, prefix: Monomial, weight: int, start: int):
        yield prefix
        for i in range(start, self.lie.dim):
            w = weight + self.depth[i]
            if w >= self.n:
                continue
            if prefix and prefix[-1] == i and self.lie.degree(i) % 2 == 1:
                continue
            yield from self._generate(prefix + (i,), w, i)

    def mono_weight(self, m: Monomial) -> int:
        return sum(self.depth[i] for i in m)

    def mono_degree(self, m: Monomial) -> int:
        return sum(self.lie.degree(i) for i in m)

    def dim(self) -> int:
        return len(self.monomials)

    # -- straightening ------------------------------------------------------

    def straighten(self, word: Tuple[int, ...]) -> Dict[Monomial, Fraction]:
        """Normal form of an arbitrary word of Lie basis indices."""
        if self.mono_weight(word) >= self.n:
            return {}
        cached = self._straighten_cache.get(word)
        if cached is not None:
            return cached
        result: Dict[Monomial, Fraction] = {}
        spot = None
        for t in range(len(word) - 1):
            i, j = word[t], word[t + 1]
            if i > j or (i == j and self.lie.degree(i) % 2 == 1):
                spot = t
                break
        if spot is None:
            result = {word: ONE}
        else:
            i, j = word[spot], word[spot + 1]
            pre, post = word[:spot], word[spot + 2 :]
            def absorb(sub: Dict[Monomial, Fraction], c: Fraction) -> None:
                for m, x in sub.items():
                    s = result.get(m, Fraction(0)) + c * x
                    if s:
                        result[m] = s
                    else:
                        result.pop(m, None)
            if i == j:
                # odd square: x.x = [x,x]/2
                for k, c in self.lie.bracket_basis(i, i).items():
                    absorb(self.straighten(pre + (k,) + post), c / 2)
            else:
                sign = Fraction((-1) ** (self.lie.degree(i) * self.lie.degree(j)))
                absorb(self.straighten(pre + (j, i) + post), sign)
                for k, c in self.lie.bracket_basis(i, j).items():
                    absorb(self.straighten(pre + (k,) + post), c)
        self._straighten_cache[word] = result
        return result

    # -- element constructors ----------------------------------------------

    def zero(self) -> "UEAElement":
        return UEAElement(self, {})

    def one(self) -> "UEAElement":
        return UEAElement(self, {(): ONE})

    def from_lie_vector(self, v: Vector) -> "UEAElement":
        coeffs = {}
        for i, c in v.items():
            if self.depth[i] < self.n:
                coeffs[(i,)] = Fraction(c)
        return UEAElement(self, coeffs)

    def element(self, coeffs: Dict[Monomial, Fraction]) -> "UEAElement":
        return UEAElement(self, coeffs)


class UEAElement:
    def __init__(self, owner: TruncatedUEA, coeffs: Dict[Monomial, Fraction]) -> None:
        self.owner = owner
        self.coeffs = {m: Fraction(c) for m, c in coeffs.items() if Fraction(c)}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, UEAElement)
            and self.owner is other.owner
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "UEAElement") -> "UEAElement":
        self._same(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return UEAElement(self.owner, out)

    def __sub__(self, other: "UEAElement") -> "UEAElement":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "UEAElement":
        c = Fraction(c)
        return UEAElement(self.owner, {m: c * x for m, x in self.coeffs.items()})

    def _same(self, other: "UEAElement") -> None:
        if self.owner is not other.owner:
            raise UEAError("elements belong to different truncated enveloping algebras")

    def augmentation(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))

    def augmentation_ideal_part(self) -> "UEAElement":
        out = dict(self.coeffs)
        out.pop((), None)
        return UEAElement(self.owner, out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set:
        return {self.owner.mono_degree(m) for m in self.coeffs}

    def lie_part(self) -> Tuple[Vector, "UEAElement"]:
        """(coefficients on single-letter monomials, residual)."""
        v: Vector = {}
        rest: Dict[Monomial, Fraction] = {}
        for m, c in self.coeffs.items():
            if len(m) == 1:
                v[m[0]] = c
            else:
                rest[m] = c
        return v, UEAElement(self.owner, rest)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs, key=self.owner._mono_key):
            c = self.coeffs[m]
            word = ".".join(self.owner.lie.basis[i].name for i in m) or "1"
            if c == 1 and m:
                parts.append(word)
            else:
                parts.append(f"{format_rational(c)} {word}".strip())
        return " + ".join(parts)


def pbw_multiply(a: UEAElement, b: UEAElement) -> UEAElement:
    """Product in normal form; terms of J-adic weight >= n are dropped."""
    a._same(b)
    owner = a.owner
    out: Dict[Monomial, Fraction] = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            if owner.mono_weight(ma) + owner.mono_weight(mb) >= owner.n:
                continue
            for m, c in owner.straighten(ma + mb).items():
                s = out.get(m, Fraction(0)) + ca * cb * c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
    return UEAElement(owner, out)


TensorCoeffs = Dict[Tuple[Monomial, Monomial], Fraction]


class TensorElement:
    """Element of (UL/J^n) (x) (UL/J^n), truncated on each factor."""

    def __init__(self, owner: TruncatedUEA, coeffs: TensorCoeffs) -> None:
        self.owner = owner
        self.coeffs = {k: Fraction(c) for k, c in coeffs.items() if Fraction(c)}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TensorElement)
            and self.owner is other.owner
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TensorElement(self.owner, out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "TensorElement":
        return TensorElement(self.owner, {k: Fraction(c) * x for k, x in self.coeffs.items()})

    def multiply(self, other: "TensorElement") -> "TensorElement":
        """(a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd."""
        owner = self.owner
        out: TensorCoeffs = {}
        for (a, b), c1 in self.coeffs.items():
            for (cc, d), c2 in other.coeffs.items():
                sign = Fraction(
                    (-1) ** (owner.mono_degree(b) * owner.mono_degree(cc))
                )
                left = pbw_multiply(
                    UEAElement(owner, {a: ONE}), UEAElement(owner, {cc: ONE})
                )
                right = pbw_multiply(
                    UEAElement(owner, {b: ONE}), UEAElement(owner, {d: ONE})
                )
                for ml, cl in left.coeffs.items():
                    for mr, cr in right.coeffs.items():
                        s = out.get((ml, mr), Fraction(0)) + sign * c1 * c2 * cl * cr
                        if s:
                            out[(ml, mr)] = s
                        else:
                            out.pop((ml, mr), None)
        return TensorElement(owner, out)

    def is_zero(self) -> bool:
        return not self.coeffs


def tensor_of(a: UEAElement, b: UEAElement) -> TensorElement:
    a._same(b)
    out: TensorCoeffs = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            out[(ma, mb)] = out.get((ma, mb), Fraction(0)) + ca * cb
    return TensorElement(a.owner, out)


def coproduct(a: UEAElement) -> TensorElement:
    """Hopf coproduct: letters are primitive, extended multiplicatively."""
    owner = a.owner
    total = TensorElement(owner, {})
    for m, c in a.coeffs.items():
        term = TensorElement(owner, {((), ()): ONE})
        for i in m:
            prim = TensorElement(owner, {((i,), ()): ONE, ((), (i,)): ONE})
            term = term.multiply(prim)
        total = total + term.scale(c)
    return total


def coproduct_grouplike_residual(g: UEAElement) -> TensorElement:
    return coproduct(g) - tensor_of(g, g)


def coproduct_primitive_residual(x: UEAElement) -> TensorElement:
    owner = x.owner
    one = UEAElement(owner, {(): ONE})
    return coproduct(x) - tensor_of(x, one) - tensor_of(one, x)


class GroupLikeElement:
    """Wrapper certifying Delta g = g (x) g and augmentation 1."""

    def __init__(self, element: UEAElement) -> None:
        if element.augmentation() != 1:
            raise UEAError("group-like element must have augmentation 1")
        residual = coproduct_grouplike_residual(element)
        if not residual.is_zero():
            raise UEAError(
                f"not group-like: coproduct residual has {len(residual.coeffs)} terms"
            )
        self.element = element

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupLikeElement) and self.element == other.element


def _check_exp_domain(x: UEAElement) -> None:
    if x.augmentation():
        raise UEAError("exp needs zero constant term")
    degs = x.degrees()
    if degs - {0}:
        raise UEAError("exp is defined on the degree-0 part only")


def exp_raw(x: UEAElement) -> UEAElement:
    """Truncated power series sum x^k / k! (no group-like certification)."""
    _check_exp_domain(x)
    owner = x.owner
    total = owner.one()
    power = owner.one()
    fact = Fraction(1)
    for k in range(1, owner.n):
        power = pbw_multiply(power, x)
        fact *= k
        if power.is_zero():
            break
        total = total + power.scale(1 / fact)
    return total


def exp(x: UEAElement) -> GroupLikeElement:
    """exp of a degree-0 element of the augmentation ideal.

    Raises when the result fails the group-like certificate, which happens
    exactly when the input is not primitive.
    """
    return GroupLikeElement(exp_raw(x))


def log_raw(g: UEAElement) -> UEAElement:
    if g.augmentation() != 1:
        raise UEAError("log needs augmentation 1")
    owner = g.owner
    u = g.augmentation_ideal_part()
    total = owner.zero()
    power = owner.one()
    for k in range(1, owner.n):
        power = pbw_multiply(power, u)
        if power.is_zero():
            break
        total = total + power.scale(Fraction((-1) ** (k + 1), k))
    return total


def log(g) -> UEAElement:
    """log of a group-like element.

    Accepts a GroupLikeElement, or a raw UEAElement which is then checked;
    a failing check raises with the coproduct residual size.
    """
    if isinstance(g, GroupLikeElement):
        return log_raw(g.element)
    residual = coproduct_grouplike_residual(g)
    if not residual.is_zero():
        raise UEAError(
            f"log input is not group-like: residual has {len(residual.coeffs)} terms"
        )
    return log_raw(g)


def bch(L: FdGradedLieAlgebra, x: Vector, y: Vector) -> Vector:
    """Baker-Campbell-Hausdorff product of degree-0 elements of nilpotent L.

    Computed as log(exp x . exp y) in UL/J^{c+1} where c is the nilpotency
    class; the result is certified primitive and returned in the basis of L.
    """
    for v in (x, y):
        for i, c in v.items():
            if c and L.degree(i) != 0:
                raise UEAError("bch arguments must have degree 0")
    c = max(nilpotency_class(L), 1)
    U = TruncatedUEA(L, c + 1)
    ex = exp_raw(U.from_lie_vector(x))
    ey = exp_raw(U.from_lie_vector(y))
    z = log_raw(pbw_multiply(ex, ey))
    if not coproduct_primitive_residual(z).is_zero():
        raise UEAError("bch result failed the primitivity certificate")
    vec, rest = z.lie_part()
    if not rest.is_zero():
        raise UEAError("bch result does not lie in the Lie algebra")
    return vec
