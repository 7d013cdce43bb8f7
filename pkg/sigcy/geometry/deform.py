"""
Equisingular deformations of the octic D = D1 + D2

Degree-8 graded linear algebra in the 165-dimensional space of octic forms on
P^3: the Jacobian piece (J_F)_8, the order-4 conditions at the fourfold
points, the order-2 conditions along the double lines, and the equisingular
piece (I_eq)_8 = ∩ (conditions + (J_F)_8). The space of first-order
equisingular deformations is (I_eq / J_F)_8.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union
import logging
import random

from ..algebra.exactfield import Subspace
from ..algebra.polyring import MonomialBasis, MultiPoly, graded_piece
from ..errors import PreconditionError, VerificationFailure
from ..report import CheckReport, Provenance, compare, timed
from .arrangement import D1_FORMS, IncidenceModel, Line, Vector, build_incidence, format_point
from .varieties import D2_FORMS, P3_RING, d1_poly, d2_poly, linear_form

logger = logging.getLogger("sigcy.deform")

DEGREE = 8
AMBIENT = 165
POINT_ORDER = 4
LINE_ORDER = 2
EQ_CITATION = "is the equisingular ideal"
H1_CITATION = "we check with Singular"
JF_CITATION = "is the jacobian ideal of $D$"

# x0 + 2x1 + 4x2 + 8x3 misses every fourfold point
WITNESS_FORM = (1, 2, 4, 8)

Center = Union[Vector, Line]


# ============================================================================
# OCTIC DATA
# ============================================================================

@dataclass
class OcticData:
    """F = D1 * D2 with its partials and the 12 + 12 singular centers"""
    F: MultiPoly
    partials: List[MultiPoly]
    points: Tuple[Vector, ...]
    lines: Tuple[Line, ...]
    basis: MonomialBasis = field(repr=False)
    _rows: Dict[Tuple, List[List[Fraction]]] = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, model: Optional[IncidenceModel] = None) -> "OcticData":
        model = model or build_incidence()
        F = d1_poly() * d2_poly()
        return cls(F=F, partials=F.gradient(), points=model.fourfold, lines=model.centers,
                   basis=MonomialBasis(P3_RING, DEGREE))

    @property
    def centers(self) -> List[Tuple[Center, int]]:
        return [(p, POINT_ORDER) for p in self.points] + [(l, LINE_ORDER) for l in self.lines]

    def vector(self, poly: MultiPoly) -> List[Fraction]:
        return self.basis.vector(poly)


def euler_relation(data: OcticData) -> bool:
    """Σ x_j ∂F/∂x_j = 8F"""
    gens = P3_RING.gens()
    lhs = sum((x * d for x, d in zip(gens, data.partials)), P3_RING.zero)
    return lhs == data.F * DEGREE


def jacobian_piece(data: OcticData, p: Optional[int] = None) -> Subspace:
    """(J_F)_8 = span{x_i ∂F/∂x_j} inside the degree-8 forms"""
    return graded_piece(data.partials, DEGREE, p=p, basis=data.basis)


# ============================================================================
# ORDER CONDITIONS
# ============================================================================

def _falling(n: int, k: int) -> int:
    return factorial(n) // factorial(n - k) if k <= n else 0


def _point_rows(data: OcticData, point: Vector, order: int) -> List[List[Fraction]]:
    """
    Rows: the derivatives ∂^α with |α| = order - 1 evaluated at the point.

    For a form all partials of order < order - 1 then vanish as well (Euler).
    """
    rows = []
    k = order - 1
    for alpha in MonomialBasis(P3_RING, k).monomials:
        row = []
        for e in data.basis.monomials:
            coeff = 1
            value = Fraction(1)
            for ei, ai, xi in zip(e, alpha, point):
                coeff *= _falling(ei, ai)
                if coeff == 0:
                    break
                value *= Fraction(xi) ** (ei - ai)
            row.append(Fraction(0) if coeff == 0 else coeff * value)
        rows.append(row)
    return rows


Terms = Dict[Tuple[int, ...], Fraction]


def _truncated_product(a: Terms, b: Terms, order: int) -> Terms:
    """Product modulo (u0, u1)^order"""
    out: Terms = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if e[0] + e[1] >= order:
                continue
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def line_frame(line: Line) -> List[List[Fraction]]:
    """
    Columns (e_i, e_j, p, q) with p, q spanning the line, as a 4x4 matrix B.

    Under x = B u the line becomes {u0 = u1 = 0}.
    """
    p, q = line.basis
    for i, j in sorted(((i, j) for i in range(4) for j in range(i + 1, 4))):
        cols = [[Fraction(int(k == i)) for k in range(4)],
                [Fraction(int(k == j)) for k in range(4)], list(p), list(q)]
        if Subspace.span(cols, 4).dim == 4:
            return [[cols[c][r] for c in range(4)] for r in range(4)]
    raise PreconditionError(f"cannot complete a frame for {line.name}")


def _line_rows(data: OcticData, line: Line, order: int) -> List[List[Fraction]]:
    """Rows: coefficients of u-monomials of (u0, u1)-degree < order in G(Bu)"""
    B = line_frame(line)
    images = [{tuple(int(c == j) for c in range(4)): B[i][j] for j in range(4) if B[i][j]}
              for i in range(4)]
    powers: List[List[Terms]] = []
    for img in images:
        chain = [{(0, 0, 0, 0): Fraction(1)}]
        for _ in range(DEGREE):
            chain.append(_truncated_product(chain[-1], img, order))
        powers.append(chain)

    targets = [e for e in MonomialBasis(P3_RING, DEGREE).monomials if e[0] + e[1] < order]
    columns = []
    for e in data.basis.monomials:
        term: Terms = {(0, 0, 0, 0): Fraction(1)}
        for i, k in enumerate(e):
            if k:
                term = _truncated_product(term, powers[i][k], order)
        columns.append([term.get(t, Fraction(0)) for t in targets])
    return [[col[r] for col in columns] for r in range(len(targets))]


def condition_rows(data: OcticData, center: Center, order: int) -> List[List[Fraction]]:
    key = (center.name if isinstance(center, Line) else tuple(center), order)
    if key not in data._rows:
        data._rows[key] = _condition_rows(data, center, order)
    return data._rows[key]


def _condition_rows(data: OcticData, center: Center, order: int) -> List[List[Fraction]]:
    if isinstance(center, Line):
        if order != LINE_ORDER:
            raise PreconditionError(f"lines carry order {LINE_ORDER}, got {order}")
        if center not in data.lines:
            raise PreconditionError(f"{center.name} is not a double line of D")
        return _line_rows(data, center, order)
    if order != POINT_ORDER:
        raise PreconditionError(f"points carry order {POINT_ORDER}, got {order}")
    point = tuple(Fraction(x) for x in center)
    if point not in data.points:
        raise PreconditionError(f"{format_point(point)} is not a fourfold point of D")
    return _point_rows(data, point, order)


def order_conditions(data: OcticData, center: Center, order: int,
                     p: Optional[int] = None) -> Subspace:
    """
    Degree-8 forms vanishing to the given order at a point or along a line.

    Raises:
        PreconditionError: the center is not a fourfold point (order 4) or a
            double line (order 2) of D
    """
    return Subspace.kernel(condition_rows(data, center, order), AMBIENT, p)


# ============================================================================
# EQUISINGULAR PIECE
# ============================================================================

@dataclass
class EquisingularResult:
    domain: str
    dim_JF8: int
    dim_Ieq8: int
    point_codims: List[int]
    line_codims: List[int]
    include_lines: bool = True

    @property
    def h1(self) -> int:
        return self.dim_Ieq8 - self.dim_JF8

    def as_dict(self) -> Dict[str, int]:
        return {"dim_JF8": self.dim_JF8, "dim_Ieq8": self.dim_Ieq8,
                "h1_equisingular": self.h1}


def equisingular_h1(data: Optional[OcticData] = None, p: Optional[int] = None,
                    include_lines: bool = True) -> EquisingularResult:
    """
    dim (I_eq)_8 - dim (J_F)_8 over QQ (p None) or GF(p).

    Raises:
        VerificationFailure: (J_F)_8 is not contained in (I_eq)_8
    """
    data = data or OcticData.build()
    label = "QQ" if p is None else f"GF({p})"
    jf = jacobian_piece(data, p)
    ieq = Subspace.whole(AMBIENT, p)
    point_codims, line_codims = [], []
    centers = data.centers if include_lines else [(c, o) for c, o in data.centers
                                                 if o == POINT_ORDER]
    for center, order in centers:
        cond = order_conditions(data, center, order, p)
        (point_codims if order == POINT_ORDER else line_codims).append(AMBIENT - cond.dim)
        ieq = ieq.intersect(cond + jf)
    if not ieq.contains_subspace(jf):
        raise VerificationFailure(f"(J_F)_8 not contained in (I_eq)_8 over {label}")
    result = EquisingularResult(label, jf.dim, ieq.dim, point_codims, line_codims,
                                include_lines)
    logger.info(f"Equisingular piece over {label}: dim J_F8={jf.dim}, dim I_eq8={ieq.dim}")
    return result


# ============================================================================
# SYMMETRIES
# ============================================================================

SignedPermutation = Tuple[Tuple[int, int], ...]


def act_on_form(g: SignedPermutation, form: Sequence[int]) -> Tuple[int, ...]:
    """Form l(x) -> l(Mx) where (Mx)_i = sign_i * x_{perm_i}"""
    out = [0] * 4
    for i, (j, s) in enumerate(g):
        out[j] += s * form[i]
    return tuple(out)


def _projective(form: Sequence[int]) -> Tuple[int, ...]:
    lead = next(c for c in form if c)
    return tuple(c if lead > 0 else -c for c in form)


def symmetry_group() -> List[SignedPermutation]:
    """Signed coordinate permutations mapping the planes of D1 and of D2 to themselves"""
    planes1 = {_projective(f) for f in D1_FORMS}
    planes2 = {_projective(f) for f in D2_FORMS}
    group = []
    for perm in permutations(range(4)):
        for signs in product((1, -1), repeat=4):
            g = tuple(zip(perm, signs))
            if {_projective(act_on_form(g, f)) for f in planes1} == planes1 and \
                    {_projective(act_on_form(g, f)) for f in planes2} == planes2:
                group.append(g)
    return group


def act_on_point(g: SignedPermutation, point: Vector) -> Vector:
    """M^{-1} point, normalized (M^{-1} = M^T for signed permutations)"""
    out = [Fraction(0)] * 4
    for i, (j, s) in enumerate(g):
        out[j] += s * point[i]
    lead = next(x for x in out if x)
    return tuple(x / lead for x in out)


def act_on_subspace(g: SignedPermutation, space: Subspace, data: OcticData,
                    p: Optional[int] = None) -> Subspace:
    """{G(Mx) : G in space}; monomials go to signed monomials"""
    target, signs = [], []
    for e in data.basis.monomials:
        image = [0] * 4
        sign = 1
        for i, (j, s) in enumerate(g):
            image[j] += e[i]
            if s < 0 and e[i] % 2:
                sign = -sign
        target.append(data.basis.position[tuple(image)])
        signs.append(sign)
    rows = []
    for row in space.rows():
        new = [0] * AMBIENT
        for k, c in enumerate(row):
            if c:
                new[target[k]] = signs[k] * c
        rows.append(new)
    return Subspace.span(rows, AMBIENT, p)


def symmetry_check(data: OcticData, samples: int = 5, seed: int = 20,
                   p: Optional[int] = 1009) -> List[bool]:
    """For sampled symmetries g: g(J_F)_8 = (J_F)_8 and g(conditions(P)) = conditions(g^-1 P)"""
    rng = random.Random(seed)
    group = symmetry_group()
    jf = jacobian_piece(data, p)
    outcomes = []
    for g in rng.sample(group, min(samples, len(group))):
        ok = act_on_subspace(g, jf, data, p) == jf
        for point in data.points[:3]:
            moved = act_on_subspace(g, order_conditions(data, point, POINT_ORDER, p), data, p)
            ok = ok and moved == order_conditions(data, act_on_point(g, point), POINT_ORDER, p)
        outcomes.append(ok)
    return outcomes


# ============================================================================
# CHECKS
# ============================================================================

def witness_form() -> MultiPoly:
    return linear_form(P3_RING, WITNESS_FORM) ** DEGREE


def verify_deform(primes: Sequence[int] = (1009, 1013),
                  model: Optional[IncidenceModel] = None,
                  exact: bool = True) -> Tuple[List[CheckReport], EquisingularResult]:
    """
    Jacobian piece, order conditions and h^1 of the equisingular piece over QQ
    (when exact) and the given primes.

    Returns:
        (rows, result over the first field computed)
    """
    rows = []
    data = OcticData.build(model)
    rows.append(compare("deform.ambient", "C(11,3)", AMBIENT, len(data.basis),
                        Provenance.TRIVIAL))
    rows.append(compare("deform.euler_relation", JF_CITATION, True, euler_relation(data),
                        Provenance.TRIVIAL))

    fields: List[Optional[int]] = ([None] if exact else []) + list(primes)
    with timed() as timer:
        jf_dims = [jacobian_piece(data, p).dim for p in fields]
    rows.append(compare("deform.jacobian_dim", JF_CITATION, [16] * len(fields), jf_dims,
                        Provenance.DERIVED, ms=timer.ms,
                        note="no linear vector field preserves all eight planes"))

    first = fields[0]
    with timed() as timer:
        point_codims = [AMBIENT - order_conditions(data, pt, POINT_ORDER, first).dim
                        for pt in data.points]
        line_codims = [AMBIENT - order_conditions(data, ln, LINE_ORDER, first).dim
                       for ln in data.lines]
    rows.append(compare("deform.codims", EQ_CITATION, [[20] * 12, [25] * 12],
                        [point_codims, line_codims], Provenance.DERIVED, ms=timer.ms))
    fvec = data.vector(data.F)
    rows.append(compare("deform.F_member", EQ_CITATION, True,
                        all(order_conditions(data, c, o, first).contains(fvec)
                            for c, o in data.centers), Provenance.TRIVIAL))
    wvec = data.vector(witness_form())
    rows.append(compare("deform.witness", EQ_CITATION, 0,
                        sum(order_conditions(data, c, o, first).contains(wvec)
                            for c, o in data.centers), Provenance.DERIVED,
                        note="centers whose conditions the plane^8 witness satisfies"))

    results = []
    for p in fields:
        with timed() as timer:
            res = equisingular_h1(data, p)
        results.append(res)
        rows.append(compare(f"deform.h1.{res.domain}", H1_CITATION, 0, res.h1,
                            Provenance.PAPER, ms=timer.ms, note=str(res.as_dict())))
    rows.append(compare("deform.multi_field", H1_CITATION, 1,
                        len({(r.dim_JF8, r.dim_Ieq8) for r in results}), Provenance.DERIVED,
                        note=", ".join(r.domain for r in results)))

    with timed() as timer:
        relaxed = equisingular_h1(data, primes[0] if primes else None, include_lines=False)
    rows.append(compare("deform.monotone", EQ_CITATION, True, relaxed.h1 >= results[0].h1,
                        Provenance.TRIVIAL, ms=timer.ms, note=f"h1 without lines = {relaxed.h1}"))
    with timed() as timer:
        outcomes = symmetry_check(data, p=primes[0] if primes else None)
    rows.append(compare("deform.symmetry", EQ_CITATION, [True] * len(outcomes), outcomes,
                        Provenance.DERIVED, ms=timer.ms,
                        note=f"{len(symmetry_group())} signed permutations preserve D1 and D2"))
    return rows, results[0]
