"""SL2 module structure on the generator space and the induced actions.

A module specification (k_1, ..., k_r) declares the generator space as a
direct sum of binary-form blocks; the (k+1)-dimensional block with basis
xi_0..xi_k is identified with consecutive x-variables.  The two unitriangular
group generators act by

    g1(xi_l)     = sum_{j<=l} C(l,j) xi_j,
    g2(xi_{k-l}) = sum_{j<=l} C(l,j) xi_{k-j},

extended as algebra substitutions to polynomials and simultaneously on the
a/y alphabets of the wreath envelope.  Their logarithms are nilpotent
derivations; an element is invariant iff it is fixed by g1 and g2, or
equivalently killed by both logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from . import linalg
from .metabelian import LieContext, WreathElement, words_of_degree
from .poly import Monomial, Poly, var_key


class NotUnipotent(ValueError):
    """Raised when a matrix logarithm needs a unipotent input."""


@lru_cache(maxsize=None)
def binomial(n: int, k: int) -> int:
    """Binomial coefficient by the Pascal recursion; exact for all sizes."""
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    return binomial(n - 1, k - 1) + binomial(n - 1, k)


@dataclass(frozen=True)
class ModuleSpec:
    """Ordered block degrees (k_1, ..., k_r) of the generator module."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("module specification must list at least one block")
        if any(k < 0 for k in self.blocks):
            raise ValueError("block degrees are nonnegative")

    @classmethod
    def parse(cls, text: str) -> "ModuleSpec":
        try:
            blocks = tuple(int(piece) for piece in text.split(","))
        except ValueError:
            raise ValueError(f"bad module specification {text!r}") from None
        return cls(blocks)

    def __str__(self) -> str:
        return ",".join(str(k) for k in self.blocks)

    @property
    def dimension(self) -> int:
        return sum(k + 1 for k in self.blocks)

    def context(self) -> LieContext:
        return LieContext(self.dimension)

    def offsets(self) -> list[int]:
        """Offset of each block: variable x_{offset+1+l} is xi_l of the block."""
        out, acc = [], 0
        for k in self.blocks:
            out.append(acc)
            acc += k + 1
        return out

    def block_of(self, j: int) -> tuple[int, int]:
        """(block degree k, position l within block) of variable x_j."""
        if not 1 <= j <= self.dimension:
            raise IndexError(f"variable index {j} out of range")
        for k, offset in zip(self.blocks, self.offsets()):
            if offset < j <= offset + k + 1:
                return k, j - offset - 1
        raise AssertionError("unreachable")

    def weight(self, j: int) -> tuple[int, int]:
        """Torus weight of x_j: xi_l in a degree-k block weighs (k-l, l)."""
        k, l = self.block_of(j)
        return k - l, l


def _weight_of_monomial(m: Monomial, spec: ModuleSpec) -> tuple[int, int]:
    w1 = w2 = 0
    for v, e in m:
        letter, index = var_key(v)
        if letter not in ("x", "y", "a"):
            raise ValueError(f"variable {v} carries no weight")
        p, q = spec.weight(index)
        w1 += e * p
        w2 += e * q
    return w1, w2


@dataclass(frozen=True, eq=False)
class LinearAction:
    """Linear substitution on the generators; column j is the image of x_{j+1}.

    The same matrix acts on the x-, a- and y-alphabets.
    """

    spec: ModuleSpec
    matrix: tuple[tuple[Fraction, ...], ...]

    def __eq__(self, other):
        return isinstance(other, LinearAction) and self.spec == other.spec \
            and self.matrix == other.matrix

    def column_image(self, letter: str, j: int) -> Poly:
        acc = Poly.zero()
        for i in range(self.spec.dimension):
            c = self.matrix[i][j - 1]
            if c:
                acc = acc + c * Poly.variable(f"{letter}{i + 1}")
        return acc

    def on_poly(self, p: Poly) -> Poly:
        images = {}
        for v in p.variables():
            letter, index = var_key(v)
            if letter != "x" or not 1 <= index <= self.spec.dimension:
                raise ValueError(f"variable {v} is not one of x1..x{self.spec.dimension}")
            images[v] = self.column_image("x", index)
        return p.substitute(images)

    def on_wreath(self, u: WreathElement) -> WreathElement:
        if u.ctx.dim != self.spec.dimension:
            raise ValueError("element rank does not match the module specification")
        images = {}
        for v in u.poly.variables():
            letter, index = var_key(v)
            images[v] = self.column_image(letter, index)
        return WreathElement(u.ctx, u.poly.substitute(images))

    def act(self, obj):
        if isinstance(obj, Poly):
            return self.on_poly(obj)
        if isinstance(obj, WreathElement):
            return self.on_wreath(obj)
        raise TypeError(f"cannot act on {type(obj).__name__}")


@dataclass(frozen=True, eq=False)
class Derivation:
    """Linear derivation given by its matrix on the generators, extended by
    the Leibniz rule to polynomials and to the wreath envelope."""

    spec: ModuleSpec
    matrix: tuple[tuple[Fraction, ...], ...]

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.spec == other.spec \
            and self.matrix == other.matrix

    def column_image(self, letter: str, j: int) -> Poly:
        acc = Poly.zero()
        for i in range(self.spec.dimension):
            c = self.matrix[i][j - 1]
            if c:
                acc = acc + c * Poly.variable(f"{letter}{i + 1}")
        return acc

    def _apply(self, p: Poly, allowed: tuple[str, ...]) -> Poly:
        acc = Poly.zero()
        for v in p.variables():
            letter, index = var_key(v)
            if letter not in allowed:
                raise ValueError(f"variable {v} is outside the acted alphabets")
            acc = acc + self.column_image(letter, index) * p.partial(v)
        return acc

    def on_poly(self, p: Poly) -> Poly:
        return self._apply(p, ("x",))

    def on_wreath(self, u: WreathElement) -> WreathElement:
        if u.ctx.dim != self.spec.dimension:
            raise ValueError("element rank does not match the module specification")
        return WreathElement(u.ctx, self._apply(u.poly, ("a", "y")))

    def act(self, obj):
        if isinstance(obj, Poly):
            return self.on_poly(obj)
        if isinstance(obj, WreathElement):
            return self.on_wreath(obj)
        raise TypeError(f"cannot act on {type(obj).__name__}")


def g1_matrix(spec: ModuleSpec) -> LinearAction:
    """Action of the upper unitriangular generator on each block."""
    d = spec.dimension
    m = [[Fraction(0)] * d for _ in range(d)]
    for k, offset in zip(spec.blocks, spec.offsets()):
        for l in range(k + 1):
            for j in range(l + 1):
                m[offset + j][offset + l] = Fraction(binomial(l, j))
    return LinearAction(spec, tuple(tuple(row) for row in m))


def g2_matrix(spec: ModuleSpec) -> LinearAction:
    """Action of the lower unitriangular generator, mirroring g1."""
    d = spec.dimension
    m = [[Fraction(0)] * d for _ in range(d)]
    for k, offset in zip(spec.blocks, spec.offsets()):
        for l in range(k + 1):
            for j in range(l + 1):
                m[offset + k - j][offset + k - l] = Fraction(binomial(l, j))
    return LinearAction(spec, tuple(tuple(row) for row in m))


def log_unipotent(g: LinearAction) -> Derivation:
    """Exact matrix logarithm of a unipotent action.

    The series log(1 + N) = N - N^2/2 + ... terminates because N is
    nilpotent; a non-nilpotent input is rejected.
    """
    d = g.spec.dimension
    n = linalg.mat_sub([list(row) for row in g.matrix], linalg.identity(d))
    acc = linalg.zero_matrix(d)
    power = linalg.identity(d)
    for step in range(1, d + 1):
        power = linalg.mat_mul(power, n)
        if linalg.is_zero_matrix(power):
            break
        acc = linalg.mat_add(acc, linalg.mat_scale(power, Fraction((-1) ** (step - 1), step)))
    else:
        raise NotUnipotent("matrix minus identity is not nilpotent")
    return Derivation(g.spec, tuple(tuple(row) for row in acc))


def exp_nilpotent(delta: Derivation) -> LinearAction:
    """Exact matrix exponential of a nilpotent derivation matrix."""
    d = delta.spec.dimension
    n = [list(row) for row in delta.matrix]
    acc = linalg.identity(d)
    power = linalg.identity(d)
    factorial = 1
    for step in range(1, d + 1):
        power = linalg.mat_mul(power, n)
        factorial *= step
        if linalg.is_zero_matrix(power):
            break
        acc = linalg.mat_add(acc, linalg.mat_scale(power, Fraction(1, factorial)))
    else:
        raise NotUnipotent("derivation matrix is not nilpotent")
    return LinearAction(delta.spec, tuple(tuple(row) for row in acc))


def act_on_poly(g: LinearAction, p: Poly) -> Poly:
    return g.on_poly(p)


def act_on_wreath(g: LinearAction, u: WreathElement) -> WreathElement:
    return g.on_wreath(u)


def is_invariant(u, spec: ModuleSpec) -> bool:
    """True when both unitriangular generators fix the element; exact."""
    for g in (g1_matrix(spec), g2_matrix(spec)):
        if g.act(u) != u:
            return False
    return True


def is_invariant_by_derivations(u, spec: ModuleSpec) -> bool:
    """Cross-validation path: both logarithm derivations must kill the element."""
    for g in (g1_matrix(spec), g2_matrix(spec)):
        image = log_unipotent(g).act(u)
        if isinstance(image, Poly):
            if not image.is_zero():
                return False
        elif not image.is_zero():
            return False
    return True


def failing_derivation_image(u, spec: ModuleSpec):
    """(name, image) of the first logarithm derivation that does not kill u."""
    for name, g in (("delta1", g1_matrix(spec)), ("delta2", g2_matrix(spec))):
        image = log_unipotent(g).act(u)
        if not image.is_zero():
            return name, image
    return None


def bidegree_components(u, spec: ModuleSpec):
    """Split into torus weight components; keys are bidegrees (p, q)."""
    if isinstance(u, Poly):
        comps: dict[tuple[int, int], dict] = {}
        for m, c in u.terms.items():
            comps.setdefault(_weight_of_monomial(m, spec), {})[m] = c
        return {w: Poly(t) for w, t in sorted(comps.items())}
    if isinstance(u, WreathElement):
        comps = {}
        for m, c in u.poly.terms.items():
            comps.setdefault(_weight_of_monomial(m, spec), {})[m] = c
        return {w: WreathElement(u.ctx, Poly(t)) for w, t in sorted(comps.items())}
    raise TypeError(f"cannot grade {type(u).__name__}")


# -- direct invariant dimension (kernel of both derivations) -------------------


def _degree_basis(spec: ModuleSpec, degree: int,
                  space: Literal["polyring", "module", "algebra"]):
    """Basis of the degree component as (weight, object) pairs."""
    d = spec.dimension
    items = []
    if space in ("polyring",):
        for exps in _monomial_exponents(d, degree):
            mono = tuple((f"x{j + 1}", e) for j, e in enumerate(exps) if e)
            mono = tuple(sorted(mono, key=lambda it: var_key(it[0])))
            items.append(Poly.monomial(mono))
    elif space in ("module", "algebra"):
        ctx = spec.context()
        if space == "algebra" and degree == 1:
            items.extend(ctx.generator(j) for j in range(1, d + 1))
        else:
            items.extend(w.to_wreath(ctx) for w in words_of_degree(d, degree))
    else:
        raise ValueError(f"unknown space {space!r}")
    out = []
    for obj in items:
        terms = obj.terms if isinstance(obj, Poly) else obj.poly.terms
        weights = {_weight_of_monomial(m, spec) for m in terms}
        if len(weights) != 1:
            raise AssertionError("basis element is not weight homogeneous")
        out.append((weights.pop(), obj))
    return out


def _monomial_exponents(d: int, degree: int):
    if d == 1:
        yield (degree,)
        return
    for head in range(degree + 1):
        for tail in _monomial_exponents(d - 1, degree - head):
            yield (head, *tail)


def invariant_dimension(spec: ModuleSpec, degree: int,
                        space: Literal["polyring", "module", "algebra"] = "polyring") -> int:
    """Dimension of the invariant part of a degree component, by exact linear
    algebra: elements killed by both logarithm derivations.

    Only the balanced torus-weight blocks can contribute, which keeps the
    matrices small.  `space` selects the polynomial algebra, the commutator
    ideal, or the whole metabelian algebra.
    """
    if degree == 0:
        return 1 if space == "polyring" else 0
    deltas = [log_unipotent(g1_matrix(spec)), log_unipotent(g2_matrix(spec))]
    buckets: dict[tuple[int, int], list] = {}
    for weight, obj in _degree_basis(spec, degree, space):
        buckets.setdefault(weight, []).append(obj)
    total = 0
    for (p, q), objs in buckets.items():
        if p != q:
            continue
        rows = []
        for obj in objs:
            row = {}
            for tag, delta in enumerate(deltas):
                image = delta.act(obj)
                terms = image.terms if isinstance(image, Poly) else image.poly.terms
                for m, c in terms.items():
                    row[(tag, m)] = c
            rows.append(row)
        total += len(objs) - linalg.rank(rows)
    return total
