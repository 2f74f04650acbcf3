"""Truncated exact power series, Hilbert series, and character multiplicities.

The pipeline that produces invariant dimension series is:

  1. the multigraded Hilbert series of the polynomial algebra or of the free
     metabelian algebra, truncated at a total degree bound,
  2. the torus-weight substitution z_j -> t1^(k-l) t2^l z determined by a
     module specification, which turns each degree slice into a genuine
     two-variable character,
  3. Schur-function decomposition of every slice by the weight-difference
     rule m(k, l) = c_{k+l, l} - c_{k+l+1, l-1},
  4. the invariant dimensions sum_l m_n(0, l).

Everything is exact; series arithmetic drops terms beyond the truncation
bound eagerly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .poly import ParseError, Poly, TokenStream, _PolyParser, tokenize
from .sl2 import ModuleSpec

Exponents = tuple[int, ...]


class NotACharacter(ValueError):
    """Raised when a slice fails to decompose with nonnegative multiplicities."""


class TruncationMismatch(ValueError):
    """Raised when series with incompatible shapes are combined."""


@dataclass(eq=False)
class TruncatedSeries:
    """Power series with exact coefficients, truncated in the graded variables.

    `graded` names the variables whose exponent sum is capped at `truncation`;
    the remaining variables (weights t1, t2) are carried along unbounded.
    """

    variables: tuple[str, ...]
    truncation: int
    coefficients: dict[Exponents, Fraction] = field(default_factory=dict)
    graded: tuple[str, ...] = None

    def __post_init__(self):
        if self.graded is None:
            self.graded = self.variables
        unknown = set(self.graded) - set(self.variables)
        if unknown:
            raise TruncationMismatch(f"graded variables {unknown} not declared")
        mask = self._mask()
        cleaned = {}
        for exps, c in self.coefficients.items():
            if len(exps) != len(self.variables):
                raise TruncationMismatch("exponent vector length mismatch")
            c = Fraction(c)
            if c and self._graded_degree(exps, mask) <= self.truncation:
                cleaned[exps] = c
        self.coefficients = cleaned

    def _mask(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.variables) if v in self.graded)

    @staticmethod
    def _graded_degree(exps: Exponents, mask: Sequence[int]) -> int:
        return sum(exps[i] for i in mask)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, variables, truncation, graded=None) -> "TruncatedSeries":
        return cls(tuple(variables), truncation, {}, graded)

    @classmethod
    def one(cls, variables, truncation, graded=None) -> "TruncatedSeries":
        variables = tuple(variables)
        return cls(variables, truncation, {(0,) * len(variables): Fraction(1)}, graded)

    @classmethod
    def term(cls, variables, truncation, exps, coeff=1, graded=None) -> "TruncatedSeries":
        return cls(tuple(variables), truncation, {tuple(exps): Fraction(coeff)}, graded)

    # -- arithmetic ----------------------------------------------------------

    def _compatible(self, other: "TruncatedSeries"):
        if (self.variables, self.truncation, self.graded) != \
                (other.variables, other.truncation, other.graded):
            raise TruncationMismatch("series shapes differ")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.variables, self.truncation, self.graded, self.coefficients) == \
            (other.variables, other.truncation, other.graded, other.coefficients)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._compatible(other)
        coeffs = dict(self.coefficients)
        for exps, c in other.coefficients.items():
            s = coeffs.get(exps, 0) + c
            if s:
                coeffs[exps] = s
            else:
                coeffs.pop(exps, None)
        return TruncatedSeries(self.variables, self.truncation, coeffs, self.graded)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.variables, self.truncation,
                               {e: -c for e, c in self.coefficients.items()}, self.graded)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.variables, self.truncation,
                                   {e: c * other for e, c in self.coefficients.items()},
                                   self.graded)
        self._compatible(other)
        mask = self._mask()
        coeffs: dict[Exponents, Fraction] = {}
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if self._graded_degree(exps, mask) > self.truncation:
                    continue
                s = coeffs.get(exps, 0) + c1 * c2
                if s:
                    coeffs[exps] = s
                else:
                    coeffs.pop(exps, None)
        return TruncatedSeries(self.variables, self.truncation, coeffs, self.graded)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TruncatedSeries":
        acc = TruncatedSeries.one(self.variables, self.truncation, self.graded)
        for _ in range(n):
            acc = acc * self
        return acc

    # -- access ----------------------------------------------------------------

    def coefficient(self, exps: Exponents) -> Fraction:
        return self.coefficients.get(tuple(exps), Fraction(0))

    def univariate_coefficients(self) -> list[Fraction]:
        """Coefficient list [c_0, ..., c_N] of a single-variable series."""
        if len(self.variables) != 1:
            raise TruncationMismatch("not a univariate series")
        return [self.coefficients.get((n,), Fraction(0)) for n in range(self.truncation + 1)]

    def slices_by(self, var: str) -> dict[int, dict[Exponents, Fraction]]:
        """Group coefficients by the exponent of one variable, dropping it."""
        idx = self.variables.index(var)
        out: dict[int, dict[Exponents, Fraction]] = {}
        for exps, c in self.coefficients.items():
            rest = exps[:idx] + exps[idx + 1:]
            out.setdefault(exps[idx], {})[rest] = c
        return out

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for exps, c in sorted(self.coefficients.items(),
                              key=lambda item: (sum(item[0]), item[0])):
            mono = "*".join(f"{v}^{e}" if e > 1 else v
                            for v, e in zip(self.variables, exps) if e)
            body = str(abs(c)) if not mono else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


# -- Hilbert series -------------------------------------------------------------


def _z_variables(d: int) -> tuple[str, ...]:
    return tuple(f"z{j}" for j in range(1, d + 1))


def hilbert_polyring(d: int, truncation: int) -> TruncatedSeries:
    """Multigraded Hilbert series of the polynomial algebra in d variables:
    every monomial appears with coefficient one."""
    if d < 1 or truncation < 0:
        raise ValueError("need d >= 1 and a nonnegative truncation")
    coeffs = {exps: Fraction(1) for exps in _exponents_up_to(d, truncation)}
    return TruncatedSeries(_z_variables(d), truncation, coeffs)


def _exponents_up_to(d: int, bound: int):
    if d == 0:
        yield ()
        return
    for head in range(bound + 1):
        for tail in _exponents_up_to(d - 1, bound - head):
            yield (head, *tail)


def hilbert_metabelian(d: int, truncation: int) -> TruncatedSeries:
    """Multigraded Hilbert series of the free metabelian Lie algebra:
    1 + sum z_j + (sum z_j - 1) * prod 1/(1 - z_j), truncated."""
    if d < 2:
        raise ValueError("need at least two generators")
    variables = _z_variables(d)
    full = hilbert_polyring(d, truncation)
    linear = TruncatedSeries.zero(variables, truncation)
    for j in range(d):
        exps = tuple(1 if i == j else 0 for i in range(d))
        linear = linear + TruncatedSeries.term(variables, truncation, exps)
    one = TruncatedSeries.one(variables, truncation)
    return one + linear + (linear - one) * full


def hilbert_metabelian_module(d: int, truncation: int) -> TruncatedSeries:
    """Hilbert series of the commutator ideal: drop the degree <= 1 part."""
    series = hilbert_metabelian(d, truncation)
    coeffs = {e: c for e, c in series.coefficients.items() if sum(e) >= 2}
    return TruncatedSeries(series.variables, truncation, coeffs)


def weight_substitute(h: TruncatedSeries, spec: ModuleSpec) -> TruncatedSeries:
    """Replace z_j by t1^p t2^q z where (p, q) is the torus weight of x_j.

    The result collects, for each total degree, the character of the degree
    slice as a symmetric polynomial in t1, t2.
    """
    d = spec.dimension
    if h.variables != _z_variables(d):
        raise TruncationMismatch(
            f"series in {len(h.variables)} variables against a rank-{d} specification")
    weights = [spec.weight(j) for j in range(1, d + 1)]
    coeffs: dict[Exponents, Fraction] = {}
    for exps, c in h.coefficients.items():
        t1 = sum(e * w[0] for e, w in zip(exps, weights))
        t2 = sum(e * w[1] for e, w in zip(exps, weights))
        key = (t1, t2, sum(exps))
        s = coeffs.get(key, 0) + c
        if s:
            coeffs[key] = s
        else:
            coeffs.pop(key, None)
    return TruncatedSeries(("t1", "t2", "z"), h.truncation, coeffs, graded=("z",))


# -- characters and Schur decomposition ------------------------------------------

Character = dict[tuple[int, int], Fraction]


def vk_character(k: int) -> Character:
    """Torus character of the degree-k binary form module."""
    return {(k - i, i): Fraction(1) for i in range(k + 1)}


def schur_function(k: int, l: int) -> Character:
    """Character of det^l tensor V_k: (t1 t2)^l * (t1^k + ... + t2^k)."""
    return {(k + l - i, l + i): Fraction(1) for i in range(k + 1)}


def character_product(c1: Character, c2: Character) -> Character:
    out: Character = {}
    for (a1, b1), x in c1.items():
        for (a2, b2), y in c2.items():
            key = (a1 + a2, b1 + b2)
            s = out.get(key, 0) + x * y
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _doubled(c: Character) -> Character:
    return {(2 * a, 2 * b): x for (a, b), x in c.items()}


def symmetric_square_character(c: Character) -> Character:
    square = character_product(c, c)
    doubled = _doubled(c)
    out: Character = {}
    for key in set(square) | set(doubled):
        s = (square.get(key, 0) + doubled.get(key, 0)) / 2
        if s:
            out[key] = s
    return out


def skew_square_character(c: Character) -> Character:
    square = character_product(c, c)
    doubled = _doubled(c)
    out: Character = {}
    for key in set(square) | set(doubled):
        s = (square.get(key, 0) - doubled.get(key, 0)) / 2
        if s:
            out[key] = s
    return out


def decompose_character(character: Mapping[tuple[int, int], Fraction]) -> dict[tuple[int, int], int]:
    """Multiplicities {(k, l): m} with the character equal to
    sum m(k,l) S_{(k+l,l)}; the weight-difference rule is exact here.

    Raises NotACharacter when the input is not a genuine character.
    """
    result: dict[tuple[int, int], int] = {}
    for (a, b), c in character.items():
        if a < b:
            continue
        m = c - character.get((a + 1, b - 1), 0)
        if m:
            if m < 0 or m.denominator != 1:
                raise NotACharacter(f"multiplicity {m} at weight {(a, b)}")
            result[(a - b, b)] = int(m)
    # the symmetric half must agree, otherwise the input was not a character
    reconstructed: Character = {}
    for (k, l), m in result.items():
        for key, v in schur_function(k, l).items():
            reconstructed[key] = reconstructed.get(key, 0) + m * v
    cleaned = {key: c for key, c in character.items() if c}
    if {k: v for k, v in reconstructed.items() if v} != cleaned:
        raise NotACharacter("weight table is not symmetric under t1 <-> t2")
    return result


# -- multiplicity tables ----------------------------------------------------------


@dataclass(eq=True)
class MultiplicityTable:
    """Multiplicities m_n(k, l) of det^l (x) V_k inside each degree slice."""

    truncation: int
    entries: dict[tuple[int, int, int], int] = field(default_factory=dict)

    def multiplicity(self, n: int, k: int, l: int) -> int:
        return self.entries.get((n, k, l), 0)

    def invariant_dimension(self, n: int) -> int:
        return sum(m for (deg, k, _), m in self.entries.items() if deg == n and k == 0)

    def invariant_dimensions(self) -> list[int]:
        return [self.invariant_dimension(n) for n in range(self.truncation + 1)]

    def multiplicity_series(self) -> TruncatedSeries:
        """The series sum m_n(k,l) t1^(k+l) t2^l z^n."""
        coeffs = {(k + l, l, n): Fraction(m) for (n, k, l), m in self.entries.items()}
        return TruncatedSeries(("t1", "t2", "z"), self.truncation, coeffs, graded=("z",))

    def multiplicity_series_tu(self) -> TruncatedSeries:
        """The same data in the variables t, u: sum m_n(k,l) t^k u^l z^n."""
        coeffs = {(k, l, n): Fraction(m) for (n, k, l), m in self.entries.items()}
        return TruncatedSeries(("t", "u", "z"), self.truncation, coeffs, graded=("z",))


def extract_multiplicities(hgl: TruncatedSeries) -> MultiplicityTable:
    """Decompose every degree slice of a weight-substituted Hilbert series."""
    if hgl.variables != ("t1", "t2", "z") or hgl.graded != ("z",):
        raise TruncationMismatch("expected a series in (t1, t2, z) graded by z")
    table = MultiplicityTable(hgl.truncation)
    for n, slice_ in hgl.slices_by("z").items():
        try:
            decomposition = decompose_character(slice_)
        except NotACharacter as exc:
            raise NotACharacter(f"degree {n} slice: {exc}") from exc
        for (k, l), m in decomposition.items():
            table.entries[(n, k, l)] = m
    return table


def invariant_hilbert(table: MultiplicityTable) -> TruncatedSeries:
    """Series of invariant dimensions: coefficient of z^n is sum_l m_n(0, l)."""
    coeffs = {}
    for n in range(table.truncation + 1):
        dim = table.invariant_dimension(n)
        if dim:
            coeffs[(n,)] = Fraction(dim)
    return TruncatedSeries(("z",), table.truncation, coeffs)


def verify_symmetrization(candidate: TruncatedSeries, hgl: TruncatedSeries) -> bool:
    """Check hgl == (t1*f(t1,t2,z) - t2*f(t2,t1,z)) / (t1 - t2) coefficientwise.

    `candidate` is a multiplicity series in the (t1, t2, z) encoding.  Returns
    False when the numerator is not divisible by t1 - t2 or the quotient
    disagrees.
    """
    if candidate.variables != ("t1", "t2", "z") or hgl.variables != ("t1", "t2", "z"):
        raise TruncationMismatch("expected series in (t1, t2, z)")
    if candidate.truncation != hgl.truncation:
        raise TruncationMismatch("truncations differ")
    numerator: dict[Exponents, Fraction] = {}
    for (a, b, n), c in candidate.coefficients.items():
        plus = (a + 1, b, n)          # t1 * f(t1, t2, z)
        minus = (b, a + 1, n)         # t2 * f(t2, t1, z)
        numerator[plus] = numerator.get(plus, 0) + c
        numerator[minus] = numerator.get(minus, 0) - c
    numerator = {k: v for k, v in numerator.items() if v}
    quotient = _divide_by_t1_minus_t2(numerator)
    if quotient is None:
        return False
    return quotient == {k: v for k, v in hgl.coefficients.items() if v}


def _divide_by_t1_minus_t2(numerator: dict[Exponents, Fraction]):
    """Exact division of a (t1, t2, z) table by (t1 - t2); None if impossible."""
    remainder = dict(numerator)
    quotient: dict[Exponents, Fraction] = {}
    while remainder:
        (a, b, n) = max(remainder, key=lambda key: (key[0], key[1]))
        c = remainder.pop((a, b, n))
        if a == 0:
            return None
        key = (a - 1, b, n)
        quotient[key] = quotient.get(key, 0) + c
        low = (a - 1, b + 1, n)
        s = remainder.get(low, 0) + c
        if s:
            remainder[low] = s
        else:
            remainder.pop(low, None)
    return {k: v for k, v in quotient.items() if v}


# -- rational function expansion -----------------------------------------------


def expand_rational(numerator: Poly, denominator_factors: Sequence[Poly],
                    truncation: int) -> TruncatedSeries:
    """Taylor expansion of numerator / prod(factors) in one variable, exact.

    Every factor must have a nonzero constant term.
    """
    variables = set(numerator.variables())
    for f in denominator_factors:
        variables |= set(f.variables())
    if len(variables) > 1:
        raise ValueError(f"rational function uses several variables: {sorted(variables)}")
    var = variables.pop() if variables else "z"

    def to_series(p: Poly) -> TruncatedSeries:
        coeffs = {}
        for m, c in p.terms.items():
            exp = m[0][1] if m else 0
            if exp <= truncation:
                coeffs[(exp,)] = c
        return TruncatedSeries((var,), truncation, coeffs)

    acc = to_series(numerator)
    one = TruncatedSeries.one((var,), truncation)
    for f in denominator_factors:
        c0 = f.constant_term()
        if not c0:
            raise ValueError(f"denominator factor {f} has zero constant term")
        tail = one - to_series(f) * (Fraction(1) / c0)
        inverse = one
        power = one
        for _ in range(truncation):
            power = power * tail
            if not power.coefficients:
                break
            inverse = inverse + power
        acc = acc * inverse * (Fraction(1) / c0)
    return acc


def parse_rational_function(text: str) -> tuple[Poly, list[Poly]]:
    """Parse `z^2 / (1-z^2)(1-z^3)^2` style input into numerator and factors."""
    stream = TokenStream(tokenize(text))
    parser = _PolyParser(stream)
    numerator = parser.parse_expression()
    factors: list[Poly] = []
    if stream.accept_op("/"):
        while True:
            kind, tok, pos = stream.peek()
            if kind == "op" and tok == "(":
                stream.next()
                factor = _PolyParser(stream).parse_expression()
                stream.expect_op(")")
                power = 1
                if stream.accept_op("^"):
                    kind2, tok2, pos2 = stream.next()
                    if kind2 != "num":
                        raise ParseError(f"expected integer exponent at position {pos2}")
                    power = int(tok2)
                factors.extend([factor] * power)
            elif kind == "op" and tok == "*":
                stream.next()
                continue
            elif kind == "end":
                if not factors:
                    raise ParseError("missing denominator after '/'")
                break
            else:
                raise ParseError(f"unexpected token {tok!r} at position {pos}")
            kind, tok, _ = stream.peek()
            if kind == "end":
                break
    else:
        kind, tok, pos = stream.peek()
        if kind != "end":
            raise ParseError(f"trailing input {tok!r} at position {pos}")
    return numerator, factors


# -- stated decomposition rules (tensor, symmetric and skew squares) -------------


def young_tensor_rule(k: int, m: int) -> dict[tuple[int, int], int]:
    """V_k (x) V_m = sum_n det^n (x) V_{k+m-2n} for n = 0..min(k, m)."""
    lo = min(k, m)
    return {(k + m - 2 * n, n): 1 for n in range(lo + 1)}


def symmetric_square_rule(k: int) -> dict[tuple[int, int], int]:
    if k % 2 == 0:
        m = k // 2
        return {(4 * (m - n), 2 * n): 1 for n in range(m + 1)}
    m = (k - 1) // 2
    return {(4 * (m - n) + 2, 2 * n): 1 for n in range(m + 1)}


def skew_square_rule(k: int) -> dict[tuple[int, int], int]:
    if k % 2 == 0:
        m = k // 2
        return {(4 * (m - n) + 2, 2 * n - 1): 1 for n in range(1, m + 1)}
    m = (k - 1) // 2
    return {(4 * (m - n), 2 * n + 1): 1 for n in range(m + 1)}


# -- convenience: the full pipeline ----------------------------------------------


def invariant_dimension_series(spec: ModuleSpec, truncation: int,
                               space: str = "polyring") -> TruncatedSeries:
    """Invariant dimensions of the chosen graded algebra, by the character
    pipeline.  `space` is "polyring", "module" (commutator ideal) or
    "algebra" (the whole metabelian algebra)."""
    d = spec.dimension
    if space == "polyring":
        h = hilbert_polyring(d, truncation)
    elif space == "module":
        h = hilbert_metabelian_module(d, truncation)
    elif space == "algebra":
        h = hilbert_metabelian(d, truncation)
    else:
        raise ValueError(f"unknown space {space!r}")
    return invariant_hilbert(extract_multiplicities(weight_substitute(h, spec)))
