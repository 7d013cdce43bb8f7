"""
Sparse multivariate polynomials with exact rational coefficients and
weighted grading.

A PolyRing fixes variable names and weights; MultiPoly is an immutable map
from exponent tuples to nonzero Fractions. The text format used by the
catalog and the CLI is `coef*x0^2*y5 + ...`.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import logging
import re

import numpy as np
import sympy

from ..errors import DimensionMismatch, PreconditionError
from .exactfield import Subspace, to_residue

logger = logging.getLogger("sigcy.polyring")

Exponent = Tuple[int, ...]
Coefficient = Union[int, Fraction]

MAX_EXPONENT = 64


@dataclass(frozen=True)
class PolyRing:
    """Variable names with positive integer weights (default all 1)"""
    names: Tuple[str, ...]
    weights: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        weights = tuple(self.weights) if self.weights else (1,) * len(self.names)
        if len(weights) != len(self.names):
            raise DimensionMismatch("one weight per variable required")
        if any(w <= 0 for w in weights):
            raise PreconditionError("weights must be positive")
        if len(set(self.names)) != len(self.names):
            raise PreconditionError(f"duplicate variable names in {self.names}")
        object.__setattr__(self, "weights", weights)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PreconditionError(f"unknown variable {name!r} in ring {self.names}") from None

    def var(self, name: Union[str, int]) -> "MultiPoly":
        i = name if isinstance(name, int) else self.index(name)
        exps = [0] * self.nvars
        exps[i] = 1
        return MultiPoly(self, {tuple(exps): Fraction(1)})

    def gens(self) -> List["MultiPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def const(self, c: Coefficient) -> "MultiPoly":
        c = Fraction(c)
        if c == 0:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    @property
    def one(self) -> "MultiPoly":
        return self.const(1)

    def monomial(self, exps: Sequence[int], coeff: Coefficient = 1) -> "MultiPoly":
        if len(exps) != self.nvars:
            raise DimensionMismatch(f"exponent of length {len(exps)} in {self.nvars} variables")
        return MultiPoly(self, {tuple(exps): Fraction(coeff)})

    def weighted_degree(self, exps: Exponent) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    def parse(self, text: str) -> "MultiPoly":
        return parse_poly(text, self)

    def __str__(self):
        pairs = ", ".join(n if w == 1 else f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"Q[{pairs}]"


class MultiPoly:
    """Immutable sparse polynomial; no zero coefficients are stored"""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, Coefficient]):
        self.ring = ring
        cleaned = {}
        for exps, c in terms.items():
            c = Fraction(c)
            if c != 0:
                if len(exps) != ring.nvars:
                    raise DimensionMismatch(f"exponent {exps} does not fit {ring}")
                cleaned[tuple(exps)] = c
        self.terms: Dict[Exponent, Fraction] = cleaned

    # -- coercion -----------------------------------------------------------

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise DimensionMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return MultiPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return MultiPoly(self.ring, {e: c * v for e, v in self.terms.items()})
        other = self._lift(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        result = MultiPoly(self.ring, terms)
        assert all(x <= MAX_EXPONENT for e in result.terms for x in e), "exponent overflow"
        return result

    __rmul__ = __mul__

    def __truediv__(self, c: Coefficient):
        return self * (1 / Fraction(c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degree(self) -> int:
        return max((self.ring.weighted_degree(e) for e in self.terms), default=-1)

    def is_homogeneous(self, weighted: bool = True) -> bool:
        degree = self.ring.weighted_degree if weighted else sum
        return len({degree(e) for e in self.terms}) <= 1

    def variables(self) -> List[int]:
        """Indices of variables that occur"""
        return [i for i in range(self.ring.nvars) if any(e[i] for e in self.terms)]

    def degree_in(self, var: Union[str, int]) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def coeffs_in(self, var: Union[str, int]) -> Dict[int, "MultiPoly"]:
        """Split as sum_k c_k * var^k with var-free c_k"""
        i = var if isinstance(var, int) else self.ring.index(var)
        parts: Dict[int, Dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1:]
            parts.setdefault(e[i], {})[rest] = c
        return {k: MultiPoly(self.ring, t) for k, t in sorted(parts.items())}

    def derivative(self, var: Union[str, int]) -> "MultiPoly":
        i = var if isinstance(var, int) else self.ring.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                terms[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MultiPoly(self.ring, terms)

    def gradient(self) -> List["MultiPoly"]:
        return [self.derivative(i) for i in range(self.ring.nvars)]

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, point: Sequence, coerce: Optional[Callable] = None):
        """
        Exact evaluation at a point of any ring (Fraction, FpElement, complex...).

        Args:
            point: one value per variable
            coerce: maps a Fraction coefficient into the point's ring (default: as is)

        Returns:
            the value, with 0 as the empty sum
        """
        if len(point) != self.ring.nvars:
            raise DimensionMismatch(f"point of length {len(point)} for {self.ring}")
        total = 0
        for e, c in self.terms.items():
            value = coerce(c) if coerce else c
            for x, k in zip(point, e):
                if k:
                    value = value * x ** k
            total = total + value
        return total

    def eval_mod_p(self, columns: Sequence[np.ndarray], p: int) -> np.ndarray:
        """
        Vectorized evaluation over F_p.

        Args:
            columns: one residue array per variable (broadcastable shapes)
            p: odd prime

        Returns:
            int64 array of residues
        """
        if len(columns) != self.ring.nvars:
            raise DimensionMismatch(f"{len(columns)} columns for {self.ring}")
        columns = [np.asarray(c, dtype=np.int64) % p for c in columns]
        shape = np.broadcast_shapes(*(c.shape for c in columns)) if columns else ()
        total = np.zeros(shape, dtype=np.int64)
        powers: Dict[Tuple[int, int], np.ndarray] = {}
        for e, c in self.terms.items():
            term = np.full(shape, to_residue(c, p), dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = _power_mod(columns[i], k, p)
                    term = term * powers[key] % p
            total = (total + term) % p
        return total

    # -- substitution -------------------------------------------------------

    def substitute(self, images: Mapping[Union[str, int], "MultiPoly"],
                   target: Optional[PolyRing] = None) -> "MultiPoly":
        """
        General substitution x_i -> images[i].

        Variables without an image are kept, which requires target == self.ring.
        """
        target = target or self.ring
        resolved: List[MultiPoly] = []
        for i, name in enumerate(self.ring.names):
            image = images.get(name, images.get(i))
            if image is None:
                if target != self.ring:
                    raise PreconditionError(f"no image given for {name} in a ring change")
                image = self.ring.var(i)
            elif image.ring != target:
                raise DimensionMismatch(f"image of {name} lives in {image.ring}, not {target}")
            resolved.append(image)

        cache: Dict[Tuple[int, int], MultiPoly] = {}
        total = target.zero
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = resolved[i] ** k
                    term = term * cache[(i, k)]
            total = total + term
        return total

    def substitute_linear(self, M: Sequence[Sequence[Coefficient]]) -> "MultiPoly":
        """
        Linear change x_i -> sum_j M[i][j] x_j.

        Only weight-1 variables may mix; rows of heavier variables must be a
        pure rescaling (shifts go through substitute).
        """
        n = self.ring.nvars
        if len(M) != n or any(len(row) != n for row in M):
            raise DimensionMismatch(f"need a {n}x{n} matrix")
        gens = self.ring.gens()
        images = {}
        for i, row in enumerate(M):
            if self.ring.weights[i] != 1:
                off = [j for j, c in enumerate(row) if c and j != i]
                if off:
                    raise PreconditionError(
                        f"{self.ring.names[i]} has weight {self.ring.weights[i]}; "
                        "only rescaling is linear for it")
            else:
                heavy = [j for j, c in enumerate(row) if c and self.ring.weights[j] != 1]
                if heavy:
                    raise PreconditionError(
                        f"{self.ring.names[i]} cannot map onto a weight>1 variable")
            image = self.ring.zero
            for j, c in enumerate(row):
                if c:
                    image = image + gens[j] * Fraction(c)
            images[i] = image
        return self.substitute(images)

    # -- conversion ---------------------------------------------------------

    def to_sympy(self, symbols: Optional[Sequence[sympy.Symbol]] = None) -> sympy.Expr:
        symbols = symbols or sympy.symbols(self.ring.names)
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for s, k in zip(symbols, e):
                if k:
                    term *= s ** k
            expr += term
        return expr

    @classmethod
    def from_sympy(cls, expr, ring: PolyRing) -> "MultiPoly":
        symbols = sympy.symbols(ring.names)
        poly = sympy.Poly(sympy.expand(expr), *symbols)
        terms = {}
        for monom, coeff in poly.terms():
            c = sympy.Rational(coeff)
            terms[tuple(monom)] = Fraction(int(c.p), int(c.q))
        return cls(ring, terms)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def _power_mod(a: np.ndarray, k: int, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    while k:
        if k & 1:
            result = result * base % p
        base = base * base % p
        k >>= 1
    return result


# ============================================================================
# TEXT FORMAT
# ============================================================================

_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")
_NUMBER = re.compile(r"^\d+(?:/\d+)?$")


def format_poly(poly: MultiPoly) -> str:
    """Printer for the `coef*x0^2*y5 + ...` format (terms in descending exponent order)"""
    if poly.is_zero():
        return "0"
    pieces = []
    for exps in sorted(poly.terms, reverse=True):
        c = poly.terms[exps]
        factors = []
        for name, k in zip(poly.ring.names, exps):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        magnitude = abs(c)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = f"{magnitude}*" + "*".join(factors)
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def parse_poly(text: str, ring: PolyRing) -> MultiPoly:
    """
    Parse `coef*x0^2*y5 - 1/2*y4 + 3` style text over the given ring.

    Raises:
        PreconditionError: on unknown variables or malformed factors
    """
    text = text.strip()
    if not text:
        raise PreconditionError("empty polynomial text")
    if text[0] not in "+-":
        text = "+" + text
    parts = _TERM_SPLIT.split(text)[1:]
    total = ring.zero
    for sign, body in zip(parts[0::2], parts[1::2]):
        coeff = Fraction(-1 if sign == "-" else 1)
        exps = [0] * ring.nvars
        for factor in body.split("*"):
            factor = factor.strip()
            if _NUMBER.match(factor):
                coeff *= Fraction(factor)
                continue
            match = _FACTOR.match(factor)
            if not match:
                raise PreconditionError(f"cannot parse factor {factor!r} in {text!r}")
            exps[ring.index(match.group(1))] += int(match.group(2) or 1)
        total = total + ring.monomial(exps, coeff)
    return total


# ============================================================================
# GRADED PIECES
# ============================================================================

class MonomialBasis:
    """
    Monomials of a fixed weighted degree, in lexicographic order
    (x0 exponent descending first).
    """

    def __init__(self, ring: PolyRing, degree: int):
        self.ring = ring
        self.degree = degree
        self.monomials: List[Exponent] = sorted(_weighted_monomials(ring.weights, degree),
                                                reverse=True)
        self.position = {e: i for i, e in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)

    def vector(self, poly: MultiPoly) -> List[Fraction]:
        """Coordinates of a homogeneous polynomial of this degree"""
        v = [Fraction(0)] * len(self.monomials)
        for e, c in poly.terms.items():
            if e not in self.position:
                raise PreconditionError(f"term {e} is not of degree {self.degree}")
            v[self.position[e]] = c
        return v

    def poly(self, vector: Sequence[Coefficient]) -> MultiPoly:
        if len(vector) != len(self.monomials):
            raise DimensionMismatch("vector length differs from basis size")
        return MultiPoly(self.ring, {e: c for e, c in zip(self.monomials, vector)})


def _weighted_monomials(weights: Sequence[int], degree: int) -> Iterable[Exponent]:
    if degree < 0:
        return
    if all(w == 1 for w in weights):
        n = len(weights)
        for combo in combinations_with_replacement(range(n), degree):
            exps = [0] * n
            for i in combo:
                exps[i] += 1
            yield tuple(exps)
        return

    def rec(i: int, remaining: int, acc: List[int]):
        if i == len(weights):
            if remaining == 0:
                yield tuple(acc)
            return
        for k in range(remaining // weights[i] + 1):
            yield from rec(i + 1, remaining - k * weights[i], acc + [k])

    yield from rec(0, degree, [])


def graded_piece(generators: Sequence[MultiPoly], degree: int,
                 p: Optional[int] = None,
                 basis: Optional[MonomialBasis] = None) -> Subspace:
    """
    Degree-d part of the ideal generated by homogeneous generators.

    Spans {m*g : m monomial, deg(m*g) = d} in MonomialBasis coordinates, over
    QQ (p None) or GF(p).
    """
    if not generators:
        raise PreconditionError("at least one generator required")
    ring = generators[0].ring
    basis = basis or MonomialBasis(ring, degree)
    rows = []
    for g in generators:
        if not g.is_homogeneous():
            raise PreconditionError(f"generator {g} is not homogeneous")
        if g.is_zero():
            continue
        gd = g.weighted_degree()
        if gd > degree:
            continue
        for m in MonomialBasis(ring, degree - gd).monomials:
            rows.append(basis.vector(ring.monomial(m) * g))
    return Subspace.span(rows, len(basis), p)


# ============================================================================
# SQUARE RELATIONS
# ============================================================================

def reduce_square_relations(poly: MultiPoly, relations: Mapping[Union[str, int], MultiPoly],
                            order: Optional[Sequence[Union[str, int]]] = None) -> MultiPoly:
    """
    Normal form modulo v^2 = R_v for each relation variable v.

    Every v-exponent e is rewritten as R_v^(e // 2) * v^(e % 2) until no
    relation variable appears squared. The right-hand sides must not contain
    relation variables squared themselves, otherwise the loop may not end.

    Args:
        poly: polynomial to reduce
        relations: variable -> right-hand side of v^2 = R_v
        order: processing order of the relation variables (default: ring order)

    Returns:
        the normal form (Y-degree <= 1 in each relation variable)
    """
    ring = poly.ring
    indexed = {(v if isinstance(v, int) else ring.index(v)): rhs for v, rhs in relations.items()}
    sequence = [(v if isinstance(v, int) else ring.index(v)) for v in order] if order \
        else sorted(indexed)
    if set(sequence) != set(indexed):
        raise PreconditionError("processing order must list every relation variable once")

    current = poly
    for _ in range(MAX_EXPONENT):
        if not any(e[v] >= 2 for e in current.terms for v in sequence):
            return current
        for v in sequence:
            rhs = indexed[v]
            total = ring.zero
            untouched = {}
            for e, c in current.terms.items():
                if e[v] < 2:
                    untouched[e] = c
                    continue
                half, rest = divmod(e[v], 2)
                mono = ring.monomial(e[:v] + (rest,) + e[v + 1:], c)
                total = total + mono * rhs ** half
            current = total + MultiPoly(ring, untouched)
    raise PreconditionError("square-relation reduction did not terminate")


# ============================================================================
# RESTRICTION TO RATIONAL CURVES
# ============================================================================

class RestrictionStatus(str, Enum):
    ZERO = "zero"
    SQUARE = "square"
    NOT_SQUARE = "not-square"


@dataclass(frozen=True)
class Restriction:
    """Pullback of a form to a parameterized curve, with its square-free analysis"""
    form: MultiPoly
    status: RestrictionStatus
    constant: Fraction
    multiplicities: Tuple[int, ...]

    @property
    def is_square(self) -> bool:
        return self.status == RestrictionStatus.SQUARE


def restrict_to_curve(poly: MultiPoly, parameterization: Sequence[MultiPoly]) -> Restriction:
    """
    Substitute a parameterization by binary forms and test for a square.

    A form counts as a square when every factor of its square-free
    decomposition over QQ has even multiplicity; the leading constant is
    reported separately.
    """
    if len(parameterization) != poly.ring.nvars:
        raise DimensionMismatch(f"{len(parameterization)} forms for {poly.ring.nvars} variables")
    curve_ring = parameterization[0].ring
    degrees = {f.total_degree() for f in parameterization if not f.is_zero()}
    if len(degrees) > 1 or not all(f.is_homogeneous(weighted=False) for f in parameterization):
        raise PreconditionError("parameterization must be homogeneous of one degree")

    form = poly.substitute(dict(enumerate(parameterization)), target=curve_ring)
    if form.is_zero():
        return Restriction(form, RestrictionStatus.ZERO, Fraction(0), ())

    symbols = sympy.symbols(curve_ring.names)
    constant, factors = sympy.Poly(form.to_sympy(symbols), *symbols).sqf_list()
    multiplicities = tuple(m for _, m in factors)
    c = sympy.Rational(constant)
    status = RestrictionStatus.SQUARE if all(m % 2 == 0 for m in multiplicities) \
        else RestrictionStatus.NOT_SQUARE
    return Restriction(form, status, Fraction(int(c.p), int(c.q)), multiplicities)
