"""The free metabelian Lie algebra inside its wreath-product Poisson envelope.

The ambient algebra is the commutative algebra on a1..ad, y1..yd modulo all
products a_i*a_j, carrying the Poisson bracket determined by

    [a_i * Y^p, Y^q] = (q_1 + ... + q_d) * a_i * Y^{p+q},
    [Y^p, Y^q] = [a_i * Y^p, a_j * Y^q] = 0.

The Lie subalgebra generated by x_j = a_j + y_j is the free metabelian Lie
algebra on d generators; its commutator ideal consists of the elements
sum a_i*f_i(Y) with sum y_i*f_i(Y) = 0, and has the left-normed basis
[x_{j1}, x_{j2}, ..., x_{jk}] with j1 > j2 <= j3 <= ... <= jk.  Everything
here is exact and immutable; all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .poly import (
    Monomial,
    ParseError,
    Poly,
    TokenStream,
    _PolyParser,
    mono_degree,
    tokenize,
    var_key,
)


class ContextMismatch(ValueError):
    """Raised when elements of algebras of different rank are combined."""


class NotInCommutatorIdeal(ValueError):
    """Raised when an operation requires an element of the commutator ideal."""


@dataclass(frozen=True)
class LieContext:
    """Fixes the rank d; all elements carry their context."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("rank must be at least 1")

    def zero(self) -> "WreathElement":
        return WreathElement(self, Poly.zero())

    def generator(self, j: int) -> "WreathElement":
        """The Lie generator x_j = a_j + y_j."""
        if not 1 <= j <= self.dim:
            raise IndexError(f"generator index {j} out of range 1..{self.dim}")
        return WreathElement(self, Poly.variable(f"a{j}") + Poly.variable(f"y{j}"))

    def monomial_element(self, a_index: int | None, y_exponents: Sequence[int]) -> "WreathElement":
        """Basis element a_i * Y^q (or Y^q when a_index is None)."""
        if len(y_exponents) != self.dim:
            raise ContextMismatch("exponent vector has wrong length")
        mono = [(f"y{j + 1}", e) for j, e in enumerate(y_exponents) if e]
        if a_index is not None:
            if not 1 <= a_index <= self.dim:
                raise IndexError(f"index {a_index} out of range 1..{self.dim}")
            mono.append((f"a{a_index}", 1))
        mono.sort(key=lambda item: var_key(item[0]))
        return WreathElement(self, Poly.monomial(tuple(mono)))

    def embed_poly(self, p: Poly) -> "WreathElement":
        """Image of p(x1,...,xd) under x_j -> a_j + y_j, computed by arithmetic
        in the envelope (products truncate the a-part at degree one)."""
        gens = {f"x{j}": self.generator(j) for j in range(1, self.dim + 1)}
        acc = self.zero()
        for mono, coeff in p.terms.items():
            term = WreathElement(self, Poly.const(coeff))
            for v, e in mono:
                if v not in gens:
                    raise ContextMismatch(f"variable {v} is not one of x1..x{self.dim}")
                term = term * (gens[v] ** e)
            acc = acc + term
        return acc


def _split_letter(var: str) -> tuple[str, int]:
    letter, index = var_key(var)
    return letter, index


def _euler(p: Poly) -> Poly:
    """Euler operator sum_v v * d/dv; scales each monomial by its degree."""
    return Poly({m: c * mono_degree(m) for m, c in p.terms.items()})


class WreathElement:
    """Element of the Poisson envelope: a polynomial in the y's plus a sum
    of a_i times polynomials in the y's.

    Stored as a single polynomial in the a- and y-variables whose a-degree is
    at most one.  The wreath product proper consists of the elements whose
    y-part is linear; membership in the embedded Lie algebra and in its
    commutator ideal is decided by `is_lie_element` / `is_in_commutator_ideal`.
    """

    __slots__ = ("ctx", "poly")

    def __init__(self, ctx: LieContext, poly: Poly):
        for m in poly.terms:
            a_deg = 0
            for v, e in m:
                letter, index = _split_letter(v)
                if letter == "a":
                    a_deg += e
                elif letter != "y":
                    raise ContextMismatch(f"variable {v} is not in the a/y alphabets")
                if index < 1 or index > ctx.dim:
                    raise ContextMismatch(f"variable {v} outside rank {ctx.dim}")
            if a_deg > 1:
                raise ContextMismatch("a-degree exceeds one; not reduced")
        self.ctx = ctx
        self.poly = poly

    # -- helpers -------------------------------------------------------------

    def _check(self, other: "WreathElement"):
        if self.ctx.dim != other.ctx.dim:
            raise ContextMismatch("elements from algebras of different rank")

    def split(self) -> tuple[Poly, dict[int, Poly]]:
        """Return (y-only part, {i: coefficient of a_i}); coefficients in K[Y]."""
        y_terms: dict[Monomial, Fraction] = {}
        a_parts: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.poly.terms.items():
            a_index = None
            rest = []
            for v, e in m:
                letter, index = _split_letter(v)
                if letter == "a":
                    a_index = index
                else:
                    rest.append((v, e))
            if a_index is None:
                y_terms[m] = c
            else:
                a_parts.setdefault(a_index, {})[tuple(rest)] = c
        return Poly(y_terms), {i: Poly(t) for i, t in a_parts.items()}

    @property
    def y_linear(self) -> list[Fraction]:
        """Coefficient vector of y_1..y_d; raises if the y-part is not linear."""
        y_part, _ = self.split()
        coeffs = [Fraction(0)] * self.ctx.dim
        for m, c in y_part.terms.items():
            if mono_degree(m) != 1:
                raise ValueError("y-part is not linear")
            coeffs[_split_letter(m[0][0])[1] - 1] = c
        return coeffs

    # -- algebra -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, WreathElement):
            return NotImplemented
        return self.ctx.dim == other.ctx.dim and self.poly == other.poly

    __hash__ = None

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __add__(self, other: "WreathElement") -> "WreathElement":
        self._check(other)
        out = WreathElement.__new__(WreathElement)
        out.ctx, out.poly = self.ctx, self.poly + other.poly
        return out

    def __sub__(self, other: "WreathElement") -> "WreathElement":
        self._check(other)
        out = WreathElement.__new__(WreathElement)
        out.ctx, out.poly = self.ctx, self.poly - other.poly
        return out

    def __neg__(self) -> "WreathElement":
        out = WreathElement.__new__(WreathElement)
        out.ctx, out.poly = self.ctx, -self.poly
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            out = WreathElement.__new__(WreathElement)
            out.ctx, out.poly = self.ctx, self.poly * other
            return out
        if isinstance(other, WreathElement):
            self._check(other)
            product = self.poly * other.poly
            reduced = {m: c for m, c in product.terms.items() if _a_degree(m) <= 1}
            out = WreathElement.__new__(WreathElement)
            out.ctx, out.poly = self.ctx, Poly(reduced)
            return out
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "WreathElement":
        result = WreathElement(self.ctx, Poly.one())
        for _ in range(n):
            result = result * self
        return result

    def bracket(self, other: "WreathElement") -> "WreathElement":
        """Poisson bracket; restricted to the Lie subalgebra it is the bracket
        of the free metabelian algebra."""
        self._check(other)
        u0, u_parts = self.split()
        v0, v_parts = other.split()
        eu, ev = _euler(u0), _euler(v0)
        acc = Poly.zero()
        for i, ui in u_parts.items():
            contrib = ui * ev
            if contrib:
                acc = acc + Poly.variable(f"a{i}") * contrib
        for j, vj in v_parts.items():
            contrib = vj * eu
            if contrib:
                acc = acc - Poly.variable(f"a{j}") * contrib
        return WreathElement(self.ctx, acc)

    def ad_action(self, p: Poly) -> "WreathElement":
        """Right module action u * p(x1,...,xd) = u p(ad x1, ..., ad xd),
        defined on the commutator ideal."""
        if not self.is_in_commutator_ideal():
            raise NotInCommutatorIdeal("module action is defined on the commutator ideal only")
        mapping = {}
        for v in p.variables():
            letter, index = _split_letter(v)
            if letter != "x" or not 1 <= index <= self.ctx.dim:
                raise ContextMismatch(f"variable {v} is not one of x1..x{self.ctx.dim}")
            mapping[v] = f"y{index}"
        out = WreathElement.__new__(WreathElement)
        out.ctx, out.poly = self.ctx, self.poly * p.rename(mapping)
        return out

    # -- membership ----------------------------------------------------------

    def is_in_commutator_ideal(self) -> bool:
        """True when the y-part vanishes and sum_i y_i * f_i(Y) = 0."""
        y_part, a_parts = self.split()
        if not y_part.is_zero():
            return False
        acc = Poly.zero()
        for i, f in a_parts.items():
            acc = acc + Poly.variable(f"y{i}") * f
        return acc.is_zero()

    def is_lie_element(self) -> bool:
        """True when the element lies in the embedded free metabelian algebra."""
        y_part, _ = self.split()
        if any(mono_degree(m) != 1 for m in y_part.terms):
            return False
        linear = self.y_linear
        shift = self.ctx.zero()
        for j, beta in enumerate(linear, start=1):
            if beta:
                shift = shift + beta * self.ctx.generator(j)
        return (self - shift).is_in_commutator_ideal()

    # -- grading ---------------------------------------------------------------

    def total_degree(self) -> int:
        return self.poly.total_degree()

    def is_homogeneous(self) -> bool:
        return self.poly.is_homogeneous()

    def multidegree_components(self) -> dict[tuple[int, ...], "WreathElement"]:
        """Split along the Z^d-grading (a_i and y_i both count as degree e_i)."""
        comps: dict[tuple[int, ...], dict[Monomial, Fraction]] = {}
        for m, c in self.poly.terms.items():
            vec = [0] * self.ctx.dim
            for v, e in m:
                vec[_split_letter(v)[1] - 1] += e
            comps.setdefault(tuple(vec), {})[m] = c
        return {deg: WreathElement(self.ctx, Poly(t)) for deg, t in sorted(comps.items())}

    def coordinates(self) -> dict[Monomial, Fraction]:
        """Coordinates in the monomial basis {Y^q, a_i Y^q} of the envelope."""
        return dict(self.poly.terms)

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"WreathElement(d={self.ctx.dim}, {self.poly})"


def _a_degree(m: Monomial) -> int:
    return sum(e for v, e in m if _split_letter(v)[0] == "a")


# -- left-normed commutator words ---------------------------------------------


@dataclass(frozen=True)
class CommutatorWord:
    """Left-normed commutator [x_{j1}, x_{j2}, ..., x_{jk}], k >= 2."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.indices) < 2:
            raise ValueError("commutator words have length at least two")
        if any(j < 1 for j in self.indices):
            raise ValueError("indices are 1-based")

    def is_normal(self) -> bool:
        j = self.indices
        return j[0] > j[1] and all(j[t] <= j[t + 1] for t in range(1, len(j) - 1))

    def degree(self) -> int:
        return len(self.indices)

    def multidegree(self, dim: int) -> tuple[int, ...]:
        vec = [0] * dim
        for j in self.indices:
            vec[j - 1] += 1
        return tuple(vec)

    def to_wreath(self, ctx: LieContext) -> WreathElement:
        j = self.indices
        if max(j) > ctx.dim:
            raise ContextMismatch(f"index {max(j)} outside rank {ctx.dim}")
        acc = ctx.generator(j[0])
        for t in j[1:]:
            acc = acc.bracket(ctx.generator(t))
        return acc

    def sort_key(self):
        return (len(self.indices), self.indices)

    def __str__(self) -> str:
        return "[" + ",".join(f"x{j}" for j in self.indices) + "]"


def words_of_multidegree(multidegree: Sequence[int]) -> list[CommutatorWord]:
    """All normal-form basis words with the given multidegree."""
    total = sum(multidegree)
    if total < 2:
        return []
    support = [j + 1 for j, e in enumerate(multidegree) if e]
    words = []
    for j1 in support:
        remaining = []
        for j, e in enumerate(multidegree, start=1):
            count = e - 1 if j == j1 else e
            remaining.extend([j] * count)
        j2 = remaining[0]
        if j1 > j2:
            words.append(CommutatorWord((j1, j2, *remaining[1:])))
    words.sort(key=CommutatorWord.sort_key)
    return words


def words_of_degree(dim: int, degree: int) -> list[CommutatorWord]:
    """All normal-form basis words of the given total degree in rank `dim`."""
    words = []
    for multidegree in _compositions(degree, dim):
        words.extend(words_of_multidegree(multidegree))
    words.sort(key=CommutatorWord.sort_key)
    return words


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head, *tail)


def from_commutator_basis(ctx: LieContext,
                          terms: Iterable[tuple[Fraction | int, CommutatorWord]]) -> WreathElement:
    acc = ctx.zero()
    for coeff, word in terms:
        acc = acc + Fraction(coeff) * word.to_wreath(ctx)
    return acc


def to_commutator_basis(u: WreathElement) -> list[tuple[Fraction, CommutatorWord]]:
    """Unique expansion of a commutator-ideal element in the left-normed basis.

    Works one multidegree at a time: the normal words of that multidegree are
    mapped into the envelope and the exact linear system is solved.
    """
    if not u.is_in_commutator_ideal():
        raise NotInCommutatorIdeal("element is not in the commutator ideal")
    expansion: list[tuple[Fraction, CommutatorWord]] = []
    for multidegree, component in u.multidegree_components().items():
        words = words_of_multidegree(multidegree)
        if not words:
            raise NotInCommutatorIdeal(f"no basis words of multidegree {multidegree}")
        columns = [w.to_wreath(u.ctx).coordinates() for w in words]
        coeffs = linalg.solve_unique(columns, component.coordinates())
        expansion.extend((c, w) for c, w in zip(coeffs, words) if c)
    expansion.sort(key=lambda item: item[1].sort_key())
    return expansion


def format_commutator_expansion(terms: Sequence[tuple[Fraction, CommutatorWord]],
                                linear: Mapping[int, Fraction] | None = None) -> str:
    """Render `x3 + 2[x4,x2,x2] - [x4,x1,x3]` style output, deterministically."""
    parts: list[tuple[Fraction, str]] = []
    if linear:
        for j in sorted(linear):
            if linear[j]:
                parts.append((linear[j], f"x{j}"))
    parts.extend((c, str(w)) for c, w in terms)
    if not parts:
        return "0"
    rendered = []
    for coeff, body in parts:
        mag = abs(coeff)
        text = body if mag == 1 else f"{mag}{body}" if body.startswith("[") else f"{mag}*{body}"
        if not rendered:
            rendered.append(text if coeff > 0 else f"-{text}")
        else:
            rendered.append(f"+ {text}" if coeff > 0 else f"- {text}")
    return " ".join(rendered)


def lie_normal_form(u: WreathElement) -> str:
    """Canonical printed form of an element of the embedded Lie algebra."""
    if not u.is_lie_element():
        raise NotInCommutatorIdeal("element is not in the embedded Lie algebra")
    linear = {j: c for j, c in enumerate(u.y_linear, start=1) if c}
    shift = u.ctx.zero()
    for j, beta in linear.items():
        shift = shift + beta * u.ctx.generator(j)
    return format_commutator_expansion(to_commutator_basis(u - shift), linear)


# -- Lie expressions -----------------------------------------------------------


class LieExpr:
    """Abstract syntax for Lie expressions over the generators x_j.

    `Gen(j)` is a generator, `Bracket(items)` a left-normed bracket,
    `Ad(arg, p)` the module action arg * p(ad x), plus sums and scalar
    multiples.  `evaluate` maps an expression into the wreath envelope.
    """

    def evaluate(self, ctx: LieContext) -> WreathElement:
        raise NotImplementedError

    def __add__(self, other: "LieExpr") -> "LieExpr":
        return Sum((self, other))

    def __str__(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Gen(LieExpr):
    index: int

    def evaluate(self, ctx: LieContext) -> WreathElement:
        if not 1 <= self.index <= ctx.dim:
            raise ContextMismatch(f"generator x{self.index} unbound in rank {ctx.dim}")
        return ctx.generator(self.index)

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Bracket(LieExpr):
    items: tuple[LieExpr, ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("bracket needs at least two arguments")

    def evaluate(self, ctx: LieContext) -> WreathElement:
        acc = self.items[0].evaluate(ctx)
        for item in self.items[1:]:
            acc = acc.bracket(item.evaluate(ctx))
        return acc

    def __str__(self):
        return "[" + ",".join(str(i) for i in self.items) + "]"


@dataclass(frozen=True)
class Scale(LieExpr):
    coeff: Fraction
    arg: LieExpr

    def evaluate(self, ctx: LieContext) -> WreathElement:
        return self.coeff * self.arg.evaluate(ctx)

    def __str__(self):
        return f"{self.coeff}*{self.arg}"


@dataclass(frozen=True)
class Sum(LieExpr):
    items: tuple[LieExpr, ...]

    def evaluate(self, ctx: LieContext) -> WreathElement:
        acc = ctx.zero()
        for item in self.items:
            acc = acc + item.evaluate(ctx)
        return acc

    def __str__(self):
        return " + ".join(str(i) for i in self.items)


@dataclass(frozen=True, eq=False)
class Ad(LieExpr):
    arg: LieExpr
    multiplier: Poly

    def evaluate(self, ctx: LieContext) -> WreathElement:
        return self.arg.evaluate(ctx).ad_action(self.multiplier)

    def __str__(self):
        return f"{self.arg}.({self.multiplier})"


def eval_lie_expr(expr: LieExpr, ctx: LieContext) -> WreathElement:
    return expr.evaluate(ctx)


def parse_lie_expr(text: str) -> LieExpr:
    stream = TokenStream(tokenize(text))
    expr = _parse_lie_sum(stream)
    kind, tok, pos = stream.peek()
    if kind != "end":
        raise ParseError(f"trailing input {tok!r} at position {pos}")
    return expr


def _parse_lie_sum(stream: TokenStream) -> LieExpr:
    terms = []
    sign = -1 if stream.accept_op("-") else 1
    terms.append(_parse_lie_term(stream, sign))
    while True:
        op = stream.accept_op("+", "-")
        if op is None:
            break
        terms.append(_parse_lie_term(stream, 1 if op == "+" else -1))
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def _parse_lie_term(stream: TokenStream, sign: int) -> LieExpr:
    coeff = Fraction(sign)
    kind, tok, _ = stream.peek()
    if kind == "num":
        stream.next()
        numerator = int(tok)
        denominator = 1
        save = stream.pos
        if stream.accept_op("/"):
            kind2, tok2, _ = stream.peek()
            if kind2 == "num":
                stream.next()
                denominator = int(tok2)
            else:
                stream.pos = save
        coeff *= Fraction(numerator, denominator)
        stream.accept_op("*")
    base = _parse_lie_factor(stream)
    multiplier = None
    while stream.accept_op(".", "*"):
        factor = _parse_poly_factor(stream)
        multiplier = factor if multiplier is None else multiplier * factor
    if multiplier is not None:
        base = Ad(base, multiplier)
    return base if coeff == 1 else Scale(coeff, base)


def _parse_lie_factor(stream: TokenStream) -> LieExpr:
    kind, tok, pos = stream.peek()
    if kind == "op" and tok == "[":
        stream.next()
        items = [_parse_lie_sum(stream)]
        while stream.accept_op(","):
            items.append(_parse_lie_sum(stream))
        stream.expect_op("]")
        if len(items) < 2:
            raise ParseError(f"bracket at position {pos} needs at least two entries")
        return Bracket(tuple(items))
    if kind == "op" and tok == "(":
        stream.next()
        inner = _parse_lie_sum(stream)
        stream.expect_op(")")
        return inner
    if kind == "name":
        letter, index = var_key(tok)
        if letter != "x" or index < 1:
            raise ParseError(f"expected a generator x<k> at position {pos}, found {tok!r}")
        stream.next()
        return Gen(index)
    raise ParseError(f"unexpected token {tok!r} at position {pos}")


def _parse_poly_factor(stream: TokenStream) -> Poly:
    parser = _PolyParser(stream)
    return parser.parse_factor()
