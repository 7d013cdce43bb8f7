"""
Exact arithmetic substrate: prime fields, small extension fields, rationals and
dense linear algebra (rank, kernel, subspace sum and intersection).

Linear algebra is delegated to sympy's DomainMatrix, which runs over QQ (the
authority for every rank in this package) and over GF(p) (certification
witnesses). Finite-field polynomial arithmetic for extension fields uses
sympy.polys.galoistools with coefficient lists ordered highest degree first.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.galoistools import (
    gf_gcd,
    gf_gcdex,
    gf_mul,
    gf_pow_mod,
    gf_rem,
    gf_strip,
    gf_sub,
)
from sympy.polys.matrices import DomainMatrix

from ..errors import DimensionMismatch, FieldError

logger = logging.getLogger("sigcy.exactfield")

BigRational = Fraction
Scalar = Union[int, Fraction]

MAX_PRIME = 10 ** 4
MAX_EXT_DEGREE = 4


def require_odd_prime(p: int) -> int:
    """Validate a characteristic; p = 2 is excluded everywhere"""
    if p == 2:
        raise FieldError("p = 2 is excluded (bad reduction, character sums need odd p)")
    if p < 3 or not isprime(p):
        raise FieldError(f"{p} is not an odd prime")
    return p


# ============================================================================
# PRIME FIELDS
# ============================================================================

@lru_cache(maxsize=None)
def character_table(p: int) -> np.ndarray:
    """
    Quadratic character of every residue mod p, built by one sieve of squares.

    Returns:
        int8 array chi with chi[a] in {-1, 0, 1}
    """
    require_odd_prime(p)
    chi = np.full(p, -1, dtype=np.int8)
    residues = np.arange(1, p, dtype=np.int64)
    chi[(residues * residues) % p] = 1
    chi[0] = 0
    chi.setflags(write=False)
    return chi


@dataclass(frozen=True)
class FpElement:
    """Residue class modulo an odd prime"""
    residue: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise FieldError(f"mixed moduli {self.p} and {other.p}")
            return other
        if isinstance(other, Fraction):
            return FpElement(other.numerator, self.p) / FpElement(other.denominator, self.p)
        return FpElement(int(other), self.p)

    def __add__(self, other):
        return FpElement(self.residue + self._coerce(other).residue, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement(self.residue - self._coerce(other).residue, self.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return FpElement(self.residue * self._coerce(other).residue, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.residue, self.p)

    def inverse(self) -> "FpElement":
        if self.residue == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FpElement(pow(self.residue, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElement(pow(self.residue, n, self.p), self.p)

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} mod {self.p}"


def quadratic_character(a: Union[FpElement, int], p: Optional[int] = None) -> int:
    """
    Legendre symbol by table lookup.

    Args:
        a: residue (FpElement, or int together with p)
        p: modulus when a is a plain int

    Returns:
        0 if a = 0, 1 for a nonzero square, -1 otherwise
    """
    if isinstance(a, FpElement):
        residue, p = a.residue, a.p
    else:
        if p is None:
            raise FieldError("modulus required for integer input")
        residue = int(a) % p
    return int(character_table(p)[residue])


def to_residue(x: Scalar, p: int) -> int:
    """Image of a rational number in F_p"""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


# ============================================================================
# EXTENSION FIELDS
# ============================================================================

def _x_power_minus_x(exponent: int, modulus: List, p: int) -> List:
    """x^exponent - x reduced modulo `modulus` over GF(p)"""
    power = gf_pow_mod(ZZ.map([1, 0]), exponent, modulus, p, ZZ)
    return gf_sub(power, ZZ.map([1, 0]), p, ZZ)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """
    Irreducibility of a monic polynomial of degree k <= 4 over GF(p).

    Degree <= 3: no roots, i.e. gcd(f, x^p - x) = 1.
    Degree 4: no factor of degree <= 2, i.e. gcd(f, x^(p^2) - x) = 1.
    """
    f = gf_strip(ZZ.map([c % p for c in poly]))
    degree = len(f) - 1
    if degree <= 1:
        return degree == 1
    if degree > MAX_EXT_DEGREE:
        raise FieldError(f"irreducibility test supports degree <= {MAX_EXT_DEGREE}")
    exponent = p if degree <= 3 else p * p
    g = gf_gcd(f, _x_power_minus_x(exponent, f, p), p, ZZ)
    return len(g) == 1


@lru_cache(maxsize=None)
def first_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically first monic irreducible polynomial of degree k (highest first)"""
    require_odd_prime(p)
    if not 1 <= k <= MAX_EXT_DEGREE:
        raise FieldError(f"extension degree must be in 1..{MAX_EXT_DEGREE}")
    for tail in product(range(p), repeat=k):
        candidate = (1,) + tail
        if is_irreducible(candidate, p):
            return candidate
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class ExtFieldElement:
    """Element c0 + c1 x + ... of GF(p)[x]/(modulus); coefficients lowest degree first"""
    coeffs: Tuple[int, ...]
    field: "ExtensionField"

    def _gf(self) -> List:
        return gf_strip(ZZ.map(list(reversed(self.coeffs))))

    def _check(self, other: "ExtFieldElement") -> "ExtFieldElement":
        if not isinstance(other, ExtFieldElement):
            return self.field.element([int(other)])
        if other.field is not self.field:
            raise FieldError("elements of different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        p = self.field.p
        return ExtFieldElement(tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)),
                               self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._check(other))

    def __neg__(self):
        p = self.field.p
        return ExtFieldElement(tuple((-a) % p for a in self.coeffs), self.field)

    def __mul__(self, other):
        other = self._check(other)
        p = self.field.p
        prod_ = gf_rem(gf_mul(self._gf(), other._gf(), p, ZZ), self.field.modulus_gf, p, ZZ)
        return self.field.from_gf(prod_)

    __rmul__ = __mul__

    def inverse(self) -> "ExtFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("0 has no inverse")
        p = self.field.p
        s, _, h = gf_gcdex(self._gf(), self.field.modulus_gf, p, ZZ)
        # h is a nonzero constant because the modulus is irreducible
        scale = pow(int(h[-1]), -1, p)
        return self.field.from_gf([int(c) * scale % p for c in s])

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        p = self.field.p
        if self.is_zero():
            return self.field.one if n == 0 else self
        return self.field.from_gf(gf_pow_mod(self._gf(), n, self.field.modulus_gf, p, ZZ))

    def frobenius(self) -> "ExtFieldElement":
        return self ** self.field.p

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def index(self) -> int:
        """Integer code sum c_i p^i, used by the vectorized tables"""
        p = self.field.p
        return sum(c * p ** i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"{list(self.coeffs)} in GF({self.field.p}^{self.field.k})"


class ExtensionField:
    """
    GF(p^k), k <= 4, realized as GF(p)[x]/(f) for the lexicographically first
    monic irreducible f of degree k (reproducible element coordinates).
    """

    def __init__(self, p: int, k: int):
        require_odd_prime(p)
        if p > MAX_PRIME:
            raise FieldError(f"p must be <= {MAX_PRIME}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = first_irreducible(p, k)
        if not is_irreducible(self.modulus, p):
            raise FieldError(f"modulus {self.modulus} is reducible over GF({p})")
        self.modulus_gf = ZZ.map(list(self.modulus))
        self.zero = self.element([0])
        self.one = self.element([1])

    def __repr__(self):
        return f"ExtensionField(p={self.p}, k={self.k}, modulus={self.modulus})"

    def element(self, coeffs: Sequence[int]) -> ExtFieldElement:
        padded = [int(c) % self.p for c in coeffs][: self.k]
        padded += [0] * (self.k - len(padded))
        return ExtFieldElement(tuple(padded), self)

    def from_gf(self, poly: Sequence) -> ExtFieldElement:
        return self.element(list(reversed([int(c) for c in poly])))

    def from_index(self, index: int) -> ExtFieldElement:
        digits = []
        for _ in range(self.k):
            index, digit = divmod(index, self.p)
            digits.append(digit)
        return self.element(digits)

    def elements(self) -> Iterator[ExtFieldElement]:
        for index in range(self.q):
            yield self.from_index(index)

    def generator(self) -> ExtFieldElement:
        """The class of x (equals the root of the modulus)"""
        if self.k == 1:
            return self.element([(-self.modulus[-1]) % self.p])
        return self.element([0, 1])

    def primitive_element(self) -> ExtFieldElement:
        """Smallest-index generator of the multiplicative group"""
        order = self.q - 1
        cofactors = [order // ell for ell in factorint(order)]
        for index in range(1, self.q):
            g = self.from_index(index)
            if all(g ** c != self.one for c in cofactors):
                return g
        raise FieldError("no primitive element found")


# ============================================================================
# LINEAR ALGEBRA
# ============================================================================

def field_domain(p: Optional[int] = None):
    """QQ when p is None, otherwise GF(p)"""
    if p is None:
        return QQ
    return GF(p)


def _domain_entry(x: Scalar, domain):
    if domain.is_QQ:
        x = Fraction(x)
        return domain(x.numerator, x.denominator)
    if isinstance(x, Fraction):
        x = to_residue(x, domain.characteristic())
    return domain(int(x))


def from_domain_entry(e, domain) -> Scalar:
    """Domain element back to a Python Fraction (QQ) or canonical residue (GF)"""
    if domain.is_QQ:
        return Fraction(int(e.numerator), int(e.denominator))
    return int(e) % domain.characteristic()


def to_matrix(rows: Sequence[Sequence[Scalar]], ncols: int, domain) -> DomainMatrix:
    """Dense DomainMatrix from rational/integer rows"""
    for row in rows:
        if len(row) != ncols:
            raise DimensionMismatch(f"row of length {len(row)} in a {ncols}-column matrix")
    converted = [[_domain_entry(x, domain) for x in row] for row in rows]
    return DomainMatrix(converted, (len(converted), ncols), domain)


def matrix_rows(M: DomainMatrix) -> List[List[Scalar]]:
    return [[from_domain_entry(e, M.domain) for e in row] for row in M.to_list()]


def rank(rows: Sequence[Sequence[Scalar]], p: Optional[int] = None,
         ncols: Optional[int] = None) -> int:
    """
    Row rank over QQ (p None) or GF(p).

    Pivots are chosen as the first nonzero entry in column order by the
    Gauss-Jordan elimination underlying DomainMatrix.rref.
    """
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return to_matrix(rows, ncols, field_domain(p)).rank()


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int,
              p: Optional[int] = None) -> List[List[Scalar]]:
    """Basis (as rows) of {x : M x = 0}"""
    domain = field_domain(p)
    if not rows:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    null = to_matrix(rows, ncols, domain).nullspace()
    return matrix_rows(null)


class Subspace:
    """
    Linear subspace of K^n held by a reduced row echelon basis.

    Sums are spans of stacked bases; intersections use annihilators
    (A ∩ B = {y A : y A B^perp^T = 0}), cached in both directions.
    """

    def __init__(self, basis: DomainMatrix, ambient: int, domain):
        self.basis = basis
        self.ambient = ambient
        self.domain = domain
        self._annihilator: Optional["Subspace"] = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _from_domain_rows(cls, M: Optional[DomainMatrix], ambient: int, domain) -> "Subspace":
        if M is None or M.shape[0] == 0:
            return cls(DomainMatrix([], (0, ambient), domain), ambient, domain)
        reduced, pivots = M.rref()
        r = len(pivots)
        rows = reduced.to_list()[:r]
        return cls(DomainMatrix(rows, (r, ambient), domain), ambient, domain)

    @classmethod
    def span(cls, rows: Sequence[Sequence[Scalar]], ambient: int,
             p: Optional[int] = None) -> "Subspace":
        domain = field_domain(p)
        if not rows:
            return cls._from_domain_rows(None, ambient, domain)
        return cls._from_domain_rows(to_matrix(rows, ambient, domain), ambient, domain)

    @classmethod
    def kernel(cls, conditions: Sequence[Sequence[Scalar]], ambient: int,
               p: Optional[int] = None) -> "Subspace":
        """Solutions of the linear conditions; the condition span is kept as annihilator"""
        return cls.span(conditions, ambient, p).annihilator()

    @classmethod
    def whole(cls, ambient: int, p: Optional[int] = None) -> "Subspace":
        domain = field_domain(p)
        return cls(DomainMatrix.eye(ambient, domain).to_dense(), ambient, domain)

    @classmethod
    def zero(cls, ambient: int, p: Optional[int] = None) -> "Subspace":
        return cls._from_domain_rows(None, ambient, field_domain(p))

    # -- queries ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def rows(self) -> List[List[Scalar]]:
        return matrix_rows(self.basis)

    def _check_compatible(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise DimensionMismatch(f"ambient dimensions {self.ambient} and {other.ambient}")
        if self.domain != other.domain:
            raise DimensionMismatch(f"fields {self.domain} and {other.domain}")

    def annihilator(self) -> "Subspace":
        """{y : y . a = 0 for all a in self}"""
        if self._annihilator is None:
            if self.dim == 0:
                ann = Subspace(DomainMatrix.eye(self.ambient, self.domain).to_dense(),
                               self.ambient, self.domain)
            else:
                ann = Subspace._from_domain_rows(self.basis.nullspace(), self.ambient,
                                                 self.domain)
            ann._annihilator = self
            self._annihilator = ann
        return self._annihilator

    def contains(self, vector: Sequence[Scalar]) -> bool:
        ann = self.annihilator()
        if ann.dim == 0:
            return True
        v = to_matrix([list(vector)], self.ambient, self.domain)
        return (ann.basis * v.transpose()).is_zero_matrix

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        ann = self.annihilator()
        if ann.dim == 0 or other.dim == 0:
            return True
        return (other.basis * ann.basis.transpose()).is_zero_matrix

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if self.dim == 0:
            return other
        if other.dim == 0:
            return self
        return Subspace._from_domain_rows(self.basis.vstack(other.basis), self.ambient,
                                          self.domain)

    def intersect(self, other: "Subspace") -> "Subspace":
        return subspace_intersect(self, other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.domain == other.domain
                and self.basis.to_list() == other.basis.to_list())

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, field={self.domain})"


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    """
    A ∩ B over a common field.

    Writes elements of A as y·A_basis and keeps the y with y·A_basis·N^T = 0,
    N a basis of the annihilator of B. dim(A∩B) = dim A + dim B - dim(A+B).
    """
    A._check_compatible(B)
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(A.ambient, None if A.domain.is_QQ else A.domain.characteristic())
    N = B.annihilator()
    if N.dim == 0:
        return A
    pairing = A.basis * N.basis.transpose()
    if pairing.is_zero_matrix:
        return A
    coefficients = pairing.transpose().nullspace()
    if coefficients.shape[0] == 0:
        return Subspace._from_domain_rows(None, A.ambient, A.domain)
    return Subspace._from_domain_rows(coefficients * A.basis, A.ambient, A.domain)
