"""
The pencil of K3 surfaces cut out by the planes s*x2 + t*x3 = 0

Each plane meets the branch octic in the line pair x0*x1 = 0 (from D1, the
factor x2*x3 becomes a square) and four lines from D2. The generic fiber is
the double-double cover of the plane branched along the pair and the
quadruple; special parameters are where this six-line configuration
degenerates.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import random

import sympy

from ..algebra.exactfield import Subspace
from ..algebra.polyring import PolyRing, Restriction, restrict_to_curve
from ..errors import PreconditionError
from ..report import CheckReport, Provenance, compare, flagged, info, timed
from .arrangement import IncidenceModel, build_incidence, format_point
from .deform import act_on_form, symmetry_group
from .varieties import P3_RING, WeightedVariety, d1_poly, d2_poly, k3_fiber, k3_quadruple

logger = logging.getLogger("sigcy.k3fib")

CURVE_RING = PolyRing(("mu", "nu"))

NODES_CITATION = "the branch curves have seven nodes"
SPLIT_CITATION = "divisors only with multiplicity two"
SPECIAL_CITATION = "has 9 components"
TALLY_CITATION = "we get 16 linearly independent"

Param = Tuple[int, int]
LineCoeffs = Tuple[Fraction, Fraction, Fraction]

PAIR: Tuple[LineCoeffs, LineCoeffs] = ((Fraction(1), Fraction(0), Fraction(0)),
                                       (Fraction(0), Fraction(1), Fraction(0)))


def normalize_param(s: int, t: int) -> Param:
    """(s:t) with gcd 1 and the first nonzero entry positive"""
    if s == 0 and t == 0:
        raise PreconditionError("(0:0) is not a point of P^1")
    g = gcd(s, t)
    s, t = s // g, t // g
    if s < 0 or (s == 0 and t < 0):
        s, t = -s, -t
    return s, t


def _same_line(a: LineCoeffs, b: LineCoeffs) -> bool:
    return Subspace.span([list(a), list(b)], 3).dim < 2


def _meet(a: LineCoeffs, b: LineCoeffs) -> Optional[Tuple[Fraction, ...]]:
    sol = Subspace.kernel([list(a), list(b)], 3)
    if sol.dim != 1:
        return None
    v = sol.rows()[0]
    lead = next(x for x in v if x)
    return tuple(Fraction(x) / lead for x in v)


def _on(line: LineCoeffs, point: Sequence[Fraction]) -> bool:
    return sum(c * x for c, x in zip(line, point)) == 0


# ============================================================================
# FIBERS
# ============================================================================

@dataclass
class FiberSlice:
    """One plane of the pencil with its branch configuration in (x0 : x1 : w)"""
    param: Param
    variety: WeightedVariety
    pair: Tuple[LineCoeffs, LineCoeffs]
    quadruple: List[LineCoeffs]

    @property
    def lines(self) -> List[LineCoeffs]:
        return list(self.pair) + list(self.quadruple)

    def distinct_lines(self) -> bool:
        return not any(_same_line(a, b) for a, b in combinations(self.lines, 2))

    def quadruple_nodes(self) -> List[Tuple[Fraction, ...]]:
        points = {_meet(a, b) for a, b in combinations(self.quadruple, 2)}
        return sorted(p for p in points if p is not None)

    def pair_node(self) -> Tuple[Fraction, ...]:
        return _meet(*self.pair)

    def degenerations(self) -> List[str]:
        """Reasons why the configuration is not the generic one (empty when generic)"""
        reasons = []
        if not self.distinct_lines():
            reasons.append("coincident branch lines")
        if len(self.quadruple_nodes()) != 6:
            reasons.append("three lines of the quadruple concurrent")
        if any(_on(q, self.pair_node()) for q in self.quadruple):
            reasons.append("quadruple line through the node of the pair")
        if any(_on(pl, n) for pl in self.pair for n in self.quadruple_nodes()):
            reasons.append("node of the quadruple on the pair")
        return reasons

    @property
    def is_generic(self) -> bool:
        return not self.degenerations()

    def own_nodes(self) -> int:
        """Double points of each branch curve separately: 1 + 6 when generic"""
        return 1 + len(self.quadruple_nodes())

    def mutual_points(self) -> int:
        return len({_meet(a, b) for a in self.pair for b in self.quadruple} - {None})


def fiber(s: int, t: int) -> FiberSlice:
    """
    The fiber over (s:t) in the chart x2 = t*w, x3 = -s*w.

    Raises:
        PreconditionError: (s, t) = (0, 0)
    """
    s, t = normalize_param(s, t)
    return FiberSlice((s, t), k3_fiber(s, t), PAIR, k3_quadruple(Fraction(s), Fraction(t)))


def discriminant() -> sympy.Expr:
    """
    Product of the nonzero concurrency determinants of the six branch lines,
    as a binary form in (s, t). Coincident lines make every triple through
    them concurrent, so this also detects coincidences.
    """
    s, t = sympy.symbols("s t")
    lines = [sympy.Matrix([[1, 0, 0]]), sympy.Matrix([[0, 1, 0]])]
    for a, b, c, d in ((1, 1, 1, 1), (1, -1, -1, 1), (1, -1, 1, -1), (1, 1, -1, -1)):
        lines.append(sympy.Matrix([[a, b, c * t - d * s]]))
    disc = sympy.Integer(1)
    for trio in combinations(lines, 3):
        det = sympy.expand(sympy.Matrix.vstack(*trio).det())
        if det == 0:
            raise PreconditionError("a concurrency holds for every parameter")
        disc *= det
    return sympy.expand(disc)


def special_fibers() -> List[Param]:
    """
    Rational roots of the discriminant, from its factorization over QQ.

    Returns:
        sorted list of normalized parameters
    """
    s, t = sympy.symbols("s t")
    _, factors = sympy.factor_list(discriminant(), s, t)
    params = set()
    for factor, _ in factors:
        poly = sympy.Poly(factor, s, t)
        if poly.total_degree() != 1:
            logger.debug(f"Discriminant factor {factor} has no rational root")
            continue
        a = int(poly.coeff_monomial(s))
        b = int(poly.coeff_monomial(t))
        params.add(normalize_param(-b, a))
    return sorted(params)


def pencil_symmetries() -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    """Action on (s:t) of the arrangement symmetries preserving the axis x2 = x3 = 0"""
    actions = set()
    for g in symmetry_group():
        img2 = act_on_form(g, (0, 0, 1, 0))
        img3 = act_on_form(g, (0, 0, 0, 1))
        if img2[:2] == (0, 0) and img3[:2] == (0, 0):
            actions.add(((img2[2], img2[3]), (img3[2], img3[3])))
    return sorted(actions)


def _act_param(action, param: Param) -> Param:
    (a2, a3), (b2, b3) = action
    s, t = param
    return normalize_param(s * a2 + t * b2, s * a3 + t * b3)


# ============================================================================
# SPLITTING CURVES
# ============================================================================

def splitting_curves(s: int, t: int) -> Dict[str, List]:
    """
    Parameterizations (x0, x1, x2, x3) of the two lines and the conic in the
    fiber plane, as binary forms in (mu, nu).
    """
    mu, nu = CURVE_RING.gens()
    return {
        "line t*x0+s*x1": [mu * s, mu * (-t), nu * t, nu * (-s)],
        "line s*x0+t*x1": [mu * t, mu * (-s), nu * t, nu * (-s)],
        "conic t*x0*x1+s*x2^2": [mu * mu * s, nu * nu * (-t), mu * nu * t, mu * nu * (-s)],
    }


def restrictions(s: int, t: int) -> Dict[str, Dict[str, Restriction]]:
    branch = {"D1": d1_poly(P3_RING), "D2": d2_poly(P3_RING)}
    return {name: {d: restrict_to_curve(poly, curve) for d, poly in branch.items()}
            for name, curve in splitting_curves(s, t).items()}


def splitting_checks(s: int, t: int) -> CheckReport:
    """
    Restrictions of D1 and D2 to the three splitting curves are squares.

    Skipped at special parameters.
    """
    s, t = normalize_param(s, t)
    label = f"k3.splitting.({s}:{t})"
    if (s, t) in special_fibers():
        return info(label, SPLIT_CITATION, None, "special parameter, check skipped")
    with timed() as timer:
        found = restrictions(s, t)
    computed = {name: {d: r.status.value for d, r in res.items()} for name, res in found.items()}
    expected = {name: {"D1": "square", "D2": "square"} for name in found}
    return compare(label, SPLIT_CITATION, expected, computed, Provenance.DERIVED, ms=timer.ms)


# ============================================================================
# SPECIAL-FIBER INCIDENCE
# ============================================================================

def special_incidence(param: Param, model: IncidenceModel) -> Tuple[List[str], List[str]]:
    """Fourfold points and double lines in the plane s*x2 + t*x3 = 0, off the axis"""
    s, t = param
    form = (0, 0, s, t)
    points = [format_point(p) for p in model.fourfold
              if s * p[2] + t * p[3] == 0 and (p[2], p[3]) != (0, 0)]
    lines = []
    for ln in model.centers:
        if all(sum(c * x for c, x in zip(form, b)) == 0 for b in ln.basis):
            on_axis = all(b[2] == 0 and b[3] == 0 for b in ln.basis)
            if not on_axis:
                lines.append(ln.name)
    return points, lines


# ============================================================================
# CHECKS
# ============================================================================

def random_params(n: int, rng: random.Random, bound: int = 50) -> List[Param]:
    out = []
    while len(out) < n:
        s, t = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if (s, t) != (0, 0):
            out.append(normalize_param(s, t))
    return out


def sweep(n: int, seed: int) -> Dict[str, int]:
    """Classify random rational parameters; only the special ones may degenerate"""
    special = set(special_fibers())
    rng = random.Random(seed)
    tally = {"generic": 0, "special": 0, "unexpected": 0}
    for param in random_params(n, rng):
        generic = fiber(*param).is_generic
        if param in special:
            tally["special"] += 1
        elif generic:
            tally["generic"] += 1
        else:
            tally["unexpected"] += 1
            logger.warning(f"Degenerate fiber at unlisted parameter {param}")
    return tally


def verify_k3(samples: int = 20, sweep_size: int = 100, seed: int = 20240917,
              model: Optional[IncidenceModel] = None) -> List[CheckReport]:
    rows = []
    generic = fiber(2, 1)
    for f in (generic, fiber(1, 1), fiber(1, 0)):
        rows.append(f.variety.check_homogeneity())
    rows.append(compare("k3.generic.(2:1)", NODES_CITATION,
                        {"distinct_lines": True, "own_nodes": 7, "mutual_points": 8},
                        {"distinct_lines": generic.distinct_lines(),
                         "own_nodes": generic.own_nodes(),
                         "mutual_points": generic.mutual_points()},
                        Provenance.PAPER,
                        note="1 node of the pair + 6 of the quadruple"))

    with timed() as timer:
        special = special_fibers()
    rows.append(compare("k3.special_fibers", SPECIAL_CITATION,
                        [(0, 1), (1, -1), (1, 0), (1, 1)], special, Provenance.PAPER,
                        ms=timer.ms))
    rows.append(compare("k3.special_degenerate", SPECIAL_CITATION, [True] * len(special),
                        [not fiber(*p).is_generic for p in special], Provenance.DERIVED))
    actions = pencil_symmetries()
    rows.append(compare("k3.special_symmetric", SPECIAL_CITATION, True,
                        all(set(_act_param(a, p) for p in special) == set(special)
                            for a in actions), Provenance.TRIVIAL,
                        note=f"{len(actions)} induced actions on the pencil"))

    with timed() as timer:
        tally = sweep(sweep_size, seed)
    rows.append(compare("k3.sweep", NODES_CITATION, 0, tally["unexpected"],
                        Provenance.DERIVED, ms=timer.ms, note=str(tally)))

    rng = random.Random(seed + 1)
    params = [p for p in random_params(4 * samples, rng) if p not in special][:samples]
    rows.append(splitting_checks(2, 1))
    with timed() as timer:
        outcomes = [splitting_checks(*p).passed for p in params]
    rows.append(compare("k3.splitting.random", SPLIT_CITATION, [True] * len(params), outcomes,
                        Provenance.DERIVED, ms=timer.ms, note=f"{len(params)} parameters"))
    rows.append(splitting_checks(1, 1))

    model = model or build_incidence()
    computed = {f"({s}:{t})": [len(x) for x in special_incidence((s, t), model)]
                for s, t in special}
    rows.append(compare("k3.special_incidence", SPECIAL_CITATION,
                        {"(0:1)": [4, 2], "(1:-1)": [1, 1], "(1:0)": [4, 2], "(1:1)": [1, 1]},
                        computed, Provenance.DERIVED,
                        note="fourfold points and double lines in the special planes"))

    own = generic.own_nodes()
    rows.append(flagged("k3.divisor_tally", TALLY_CITATION, 16, 2 * own + 1,
                        note=f"{own} nodes x 2 divisors + hyperplane section"))
    return rows
