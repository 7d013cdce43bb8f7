"""
Fixed loci of the sign group K on X_VGN

Every g in K fixes the union of its two eigenspaces L+ and L- in P^7. The
points of X_VGN on them are counted over F_p and F_{p^2} with the butterfly
kernel; the growth between the two fields decides between isolated points and
curves. Curve components come from binomial relations v_u^2 = r v_v^2 in the
restricted quadrics; node witnesses come from the node inventory.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from ..algebra.exactfield import Subspace, to_residue
from ..errors import InconclusiveError, PreconditionError, VerificationFailure
from ..geometry.varieties import (HADAMARD, X_RING, CoordinateSubspace, SignVector,
                                  fixed_subspaces, group_K)
from ..report import CheckReport, Provenance, compare, info, timed
from ..utils.parallel import parallel_map
from .counting import NodeInventory, act_on_point, hadamard_count, singular_points
from .fqarray import FqTables

logger = logging.getLogger("sigcy.fixloci")

NODE_CITATION = "K contains 6 elements which have nodes"
CURVE_CITATION = "each of them has 4 components"
ORBIT_CITATION = "There are exactly 12 orbits"
PAIR_CITATION = "is 24 and that with 16 intersection points is 48"
LEMMA_CITATION = "The number of components of the fixed point locus"

MAX_NODE_COUNT = 64
PAIR_COUNTS = (0, 8, 16)


class FixedKind(str, Enum):
    FREE = "free"
    NODES = "nodes"
    CURVES = "curves"


# ============================================================================
# CURVE COMPONENTS
# ============================================================================

@dataclass(frozen=True, order=True)
class Binomial:
    """v_u = sign * sqrt(ratio) * v_v (u, v global coordinate indices)"""
    u: int
    v: int
    ratio: Fraction
    sign: int

    def describe(self) -> str:
        names = X_RING.names
        s = "+" if self.sign > 0 else "-"
        root = "" if self.ratio == 1 else f"sqrt({self.ratio})*"
        return f"{names[self.u]}={s}{root}{names[self.v]}"


@dataclass(frozen=True)
class CurveComponent:
    """One component of Fix(g): a coordinate subspace cut by two linear binomial factors"""
    g: SignVector
    zero: frozenset
    relations: Tuple[Binomial, ...]
    ambient_dim: int
    quadrics: int

    @property
    def key(self) -> Tuple:
        return (self.g.signs, tuple(sorted(self.zero)), self.relations)

    def act(self, h: SignVector) -> "CurveComponent":
        """Image under h: each relation sign picks up h_u h_v"""
        moved = tuple(Binomial(b.u, b.v, b.ratio, b.sign * h.signs[b.u] * h.signs[b.v])
                      for b in self.relations)
        return CurveComponent(self.g, self.zero, moved, self.ambient_dim, self.quadrics)

    def contains(self, point: Sequence[int], T: FqTables) -> bool:
        """Membership of an F_p point already known to lie on X_VGN"""
        if any(point[i] for i in self.zero):
            return False
        for b in self.relations:
            roots = T.square_roots(T.embed(to_residue(b.ratio, T.p)))
            if not roots:
                raise PreconditionError(f"{b.ratio} is not a square in F_{T.q}")
            rhs = T.mul[roots[0], point[b.v]]
            if b.sign < 0:
                rhs = T.neg[rhs]
            if int(rhs) != int(point[b.u]):
                return False
        return True

    def describe(self) -> str:
        zero = CoordinateSubspace(self.zero).describe()
        return f"{zero} " + ", ".join(b.describe() for b in self.relations)


def _restricted_rows(zero: frozenset) -> Tuple[List[int], List[List[int]]]:
    """Rows of Y_i^2 - sum_j H_ij X_j^2 as vectors over the squares of the free coordinates"""
    free = [i for i in range(8) if i not in zero]
    rows = []
    for i, row in enumerate(HADAMARD):
        full = [-c for c in row] + [1 if j == i else 0 for j in range(4)]
        restricted = [full[j] for j in free]
        if any(restricted):
            rows.append(restricted)
    return free, rows


def binomial_relations(zero: frozenset) -> Tuple[List[Tuple[int, int, Fraction]], int, int]:
    """
    Binomials c_u v_u^2 + c_v v_v^2 in the span of the restricted quadrics.

    Returns:
        ([(u, v, ratio)], rank of the quadric span, number of free coordinates)

    Raises:
        InconclusiveError: a restricted quadric forces a coordinate to vanish
    """
    free, rows = _restricted_rows(zero)
    n = len(free)
    span = Subspace.span(rows, n)
    found = []
    for iu, iv in combinations(range(n), 2):
        plane = Subspace.span([[1 if j == iu else 0 for j in range(n)],
                               [1 if j == iv else 0 for j in range(n)]], n)
        meet = span.intersect(plane)
        if meet.dim == 0:
            continue
        vector = meet.rows()[0]
        cu, cv = vector[iu], vector[iv]
        if meet.dim == 2 or cu == 0 or cv == 0:
            raise InconclusiveError(f"restricted quadrics force a coordinate to vanish on "
                                    f"{CoordinateSubspace(zero).describe()}")
        found.append((free[iu], free[iv], -Fraction(cv) / Fraction(cu)))
    return found, span.dim, n


def side_count(zero: frozenset, p: int, k: int = 1) -> int:
    """Projective points of X_VGN on a coordinate subspace over F_{p^k}"""
    q = p ** k
    return (hadamard_count(p, k, zero) - 1) // (q - 1)


def curve_components(g: SignVector, p: int = 17) -> List[CurveComponent]:
    """
    The four components of a one-dimensional fixed locus, as sign choices in the
    two binomial relations on the nonempty eigenspace.

    Raises:
        InconclusiveError: the two-binomial pattern is not found
    """
    components = []
    for side in fixed_subspaces(g):
        if side_count(side.zero, p, 2) == 0:
            continue
        relations, rank, n = binomial_relations(side.zero)
        supports = [{u, v} for u, v, _ in relations]
        if len(relations) != 2 or supports[0] & supports[1]:
            raise InconclusiveError(f"{g}: expected two disjoint binomials on "
                                    f"{side.describe()}, found {relations}")
        ambient_dim = n - 2 - 1
        for s1, s2 in product((1, -1), repeat=2):
            rel = tuple(Binomial(u, v, r, s) for (u, v, r), s in zip(relations, (s1, s2)))
            components.append(CurveComponent(g, side.zero, rel, ambient_dim, rank - 2))
    logger.debug(f"{g}: {len(components)} curve components")
    return components


# ============================================================================
# CLASSIFICATION
# ============================================================================

@dataclass(frozen=True)
class FixedLocusReport:
    g: SignVector
    kind: FixedKind
    count: int
    counts: Tuple[int, int]
    nodes: Tuple[Tuple[int, ...], ...] = ()
    components: Tuple[CurveComponent, ...] = ()

    def row(self) -> dict:
        return {"g": self.g.label, "kind": self.kind.value, "count": self.count,
                "points_p": self.counts[0], "points_p2": self.counts[1]}


def fixed_count(g: SignVector, p: int, k: int = 1) -> int:
    return sum(side_count(side.zero, p, k) for side in fixed_subspaces(g))


def fixed_nodes(inventory: NodeInventory, g: SignVector) -> Tuple[Tuple[int, ...], ...]:
    T = inventory.tables
    return tuple(pt for pt in inventory.points
                 if act_on_point(T, g.signs, pt, inventory.n_base) == pt)


def classify(g: SignVector, p: int = 17,
             inventory: Optional[NodeInventory] = None) -> FixedLocusReport:
    """
    Free, isolated nodes or curves, decided by the F_p / F_{p^2} point counts.

    Raises:
        PreconditionError: g is the identity, or p is not 1 mod 8
        InconclusiveError: the counts fit neither growth pattern
        VerificationFailure: an isolated fixed point is not a node
    """
    if g.is_identity():
        raise PreconditionError("the identity has no fixed-locus classification")
    if p % 8 != 1:
        raise PreconditionError(f"classification needs p = 1 mod 8, got {p}")
    n1, n2 = fixed_count(g, p, 1), fixed_count(g, p, 2)
    if n1 == 0 and n2 == 0:
        return FixedLocusReport(g, FixedKind.FREE, 0, (n1, n2))
    if n1 == n2 and n1 <= MAX_NODE_COUNT:
        inventory = inventory or singular_points("X_VGN", p)
        nodes = fixed_nodes(inventory, g)
        if len(nodes) != n1:
            raise VerificationFailure(f"{g}: {n1} isolated fixed points but only "
                                      f"{len(nodes)} of them are nodes")
        return FixedLocusReport(g, FixedKind.NODES, n1, (n1, n2), nodes=nodes)
    if n2 > p * n1 / 4:
        components = tuple(curve_components(g, p))
        return FixedLocusReport(g, FixedKind.CURVES, len(components), (n1, n2),
                                components=components)
    raise InconclusiveError(f"{g}: {n1} points over F_{p}, {n2} over F_{p}^2")


@dataclass
class FixedLocusCensus:
    """Classification of all 31 non-identity elements at one prime"""
    p: int
    inventory: NodeInventory
    reports: Dict[SignVector, FixedLocusReport]
    node_sets: Dict[SignVector, frozenset] = field(default_factory=dict)

    def of_kind(self, kind: FixedKind) -> List[FixedLocusReport]:
        return [r for r in self.reports.values() if r.kind == kind]

    @property
    def kind_counts(self) -> Dict[str, int]:
        return {kind.value: len(self.of_kind(kind)) for kind in FixedKind}

    @property
    def components(self) -> List[CurveComponent]:
        return [c for r in self.of_kind(FixedKind.CURVES) for c in r.components]

    def kind_of(self, g: SignVector) -> FixedKind:
        return self.reports[g].kind


def census(p: int = 17, inventory: Optional[NodeInventory] = None,
           jobs: int = 1) -> FixedLocusCensus:
    inventory = inventory or singular_points("X_VGN", p)
    elements = [g for g in group_K() if not g.is_identity()]
    with timed() as timer:
        reports = parallel_map(lambda g: classify(g, p, inventory), elements,
                               max_workers=max(1, jobs))
    result = FixedLocusCensus(p, inventory, {r.g: r for r in reports})
    result.node_sets = {g: frozenset(fixed_nodes(inventory, g)) for g in elements}
    logger.info(f"Fixed-locus census over F_{p}: {result.kind_counts} ({timer.ms} ms)")
    return result


# ============================================================================
# ORBITS
# ============================================================================

def node_orbits(inventory: NodeInventory) -> List[Tuple[Tuple[int, ...], ...]]:
    """Partition of the inventory under K (sign changes, then renormalization)"""
    T = inventory.tables
    seen, orbits = set(), []
    for pt in inventory.points:
        if pt in seen:
            continue
        orbit = {act_on_point(T, g.signs, pt, inventory.n_base) for g in group_K()}
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    return orbits


def component_orbits(components: Sequence[CurveComponent]) -> List[List[CurveComponent]]:
    seen, orbits = set(), []
    for c in components:
        if c.key in seen:
            continue
        orbit = {c.act(h).key: c.act(h) for h in group_K()}
        seen |= set(orbit)
        orbits.append(list(orbit.values()))
    return orbits


# ============================================================================
# PAIR TABLE
# ============================================================================

@dataclass(frozen=True)
class PairEntry:
    g: SignVector
    h: SignVector
    kinds: Tuple[FixedKind, FixedKind]
    count: int
    count_ext: int
    shared_nodes: Tuple[Tuple[int, ...], ...]

    @property
    def all_nodes(self) -> bool:
        return self.count > 0 and len(self.shared_nodes) == self.count

    @property
    def kind_pair(self) -> str:
        return "-".join(sorted(k.value for k in self.kinds))


class PairTable:
    """Joint fixed points of ordered pairs (g, h), g != h, both non-identity"""

    def __init__(self, entries: Dict[Tuple[SignVector, SignVector], PairEntry]):
        self.entries = entries

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, key: Tuple[SignVector, SignVector]) -> PairEntry:
        return self.entries[key]

    def is_symmetric(self) -> bool:
        return all(e.count == self.entries[(h, g)].count and
                   e.shared_nodes == self.entries[(h, g)].shared_nodes
                   for (g, h), e in self.entries.items())

    def select(self, kind_pair: str) -> List[PairEntry]:
        return [e for e in self.entries.values() if e.kind_pair == kind_pair]

    def histogram(self, kind_pair: str) -> Dict[int, int]:
        hist: Dict[int, int] = {}
        for e in self.select(kind_pair):
            hist[e.count] = hist.get(e.count, 0) + 1
        return dict(sorted(hist.items()))

    def rows(self) -> List[dict]:
        return [{"g": g.label, "h": h.label, "kinds": e.kind_pair, "count": e.count,
                 "all_nodes": e.all_nodes} for (g, h), e in self.entries.items()]


def joint_count(g: SignVector, h: SignVector, p: int, k: int = 1) -> int:
    """Points of X_VGN fixed by both g and h (the eigenspace intersections are disjoint)"""
    return sum(side_count(a.meet(b).zero, p, k)
               for a in fixed_subspaces(g) for b in fixed_subspaces(h))


def pair_table(fixed: FixedLocusCensus, jobs: int = 1) -> PairTable:
    """
    Raises:
        VerificationFailure: a joint count outside {0, 8, 16} or unstable in F_{p^2}
    """
    elements = list(fixed.reports)
    pairs = [(g, h) for g in elements for h in elements if g != h]

    def entry(pair):
        g, h = pair
        count = joint_count(g, h, fixed.p, 1)
        count_ext = joint_count(g, h, fixed.p, 2)
        if count not in PAIR_COUNTS or count_ext != count:
            raise VerificationFailure(f"joint fixed locus of {g} and {h}: {count} points "
                                      f"over F_p, {count_ext} over F_p^2")
        shared = tuple(sorted(fixed.node_sets[g] & fixed.node_sets[h]))
        return PairEntry(g, h, (fixed.kind_of(g), fixed.kind_of(h)), count, count_ext, shared)

    entries = parallel_map(entry, pairs, max_workers=max(1, jobs))
    return PairTable({(e.g, e.h): e for e in entries})


def gh_check(table: PairTable, fixed: FixedLocusCensus) -> List[str]:
    """8-node curve-curve pairs whose product is not a node-fixer fixing the shared nodes"""
    bad = []
    for e in table.select("curves-curves"):
        if e.count != 8:
            continue
        gh = e.g * e.h
        report = fixed.reports.get(gh)
        if (report is None or report.kind != FixedKind.NODES
                or not set(e.shared_nodes) <= set(report.nodes)):
            bad.append(f"{e.g}*{e.h}")
    return bad


def component_incidence(table: PairTable, fixed: FixedLocusCensus) -> Dict[int, int]:
    """Histogram of shared nodes per curve component over all 8-node pairs"""
    T = fixed.inventory.tables
    hist: Dict[int, int] = {}
    for e in table.entries.values():
        if e.count != 8 or not e.all_nodes:
            continue
        for g in (e.g, e.h):
            for c in fixed.reports[g].components:
                n = sum(c.contains(pt, T) for pt in e.shared_nodes)
                hist[n] = hist.get(n, 0) + 1
    return dict(sorted(hist.items()))


# ============================================================================
# CHECK SWEEP
# ============================================================================

def verify_fixloci(primes: Sequence[int] = (17, 41),
                   jobs: int = 1) -> Tuple[List[CheckReport], FixedLocusCensus, PairTable]:
    """
    Classification at every prime, node and component orbits, and the pair table
    at the first prime.

    Returns:
        (rows, census at the first prime, its pair table)
    """
    rows = []
    censuses = {}
    for p in primes:
        with timed() as timer:
            fixed = census(p, jobs=jobs)
        censuses[p] = fixed
        rows.append(compare(f"fixloci.kinds.p{p}", NODE_CITATION,
                            {"free": 13, "nodes": 6, "curves": 12}, fixed.kind_counts,
                            Provenance.PAPER, ms=timer.ms,
                            note="12 curve elements, 6 node elements, the rest free"))
    first = censuses[primes[0]]
    if len(primes) > 1:
        kinds = [{g.label: r.kind.value for g, r in c.reports.items()}
                 for c in censuses.values()]
        rows.append(compare("fixloci.stability", NODE_CITATION, 1,
                            len({tuple(sorted(k.items())) for k in kinds}),
                            Provenance.DERIVED, note=f"primes {list(primes)}"))

    node_reports = first.of_kind(FixedKind.NODES)
    rows.append(compare("fixloci.node_counts", "Each of them fixes 16 nodes",
                        [16] * 6, sorted(r.count for r in node_reports), Provenance.PAPER))
    node_sets = [set(r.nodes) for r in node_reports]
    disjoint = all(not (a & b) for a, b in combinations(node_sets, 2))
    covered = len(set().union(*node_sets)) if node_sets else 0
    rows.append(compare("fixloci.node_partition", "So each node occurs as fixed point of",
                        [True, 96], [disjoint, covered], Provenance.DERIVED))

    curve_reports = first.of_kind(FixedKind.CURVES)
    rows.append(compare("fixloci.curve_components", CURVE_CITATION, [4] * 12,
                        sorted(r.count for r in curve_reports), Provenance.PAPER))
    components = first.components
    shapes = sorted({(c.ambient_dim, c.quadrics) for c in components})
    rows.append(compare("fixloci.component_shape", "smooth elliptic curves",
                        [(3, 2)], shapes, Provenance.DERIVED,
                        note="(projective dimension of the span, number of quadrics)"))

    orbits = node_orbits(first.inventory)
    rows.append(compare("fixloci.node_orbits", ORBIT_CITATION, [12, [8] * 12, 96],
                        [len(orbits), sorted(len(o) for o in orbits),
                         sum(len(o) for o in orbits)], Provenance.PAPER))
    classes = component_orbits(components)
    rows.append(info("fixloci.component_orbits", "These are in the two K-orbits",
                     sorted(len(o) for o in classes),
                     f"{len(components)} curve components in {len(classes)} K-orbits"))
    rows.append(compare("fixloci.downstairs_components", LEMMA_CITATION, 36,
                        len(orbits) + len(classes), Provenance.PAPER,
                        note=f"{len(orbits)} node orbits + {len(classes)} curve classes"))

    with timed() as timer:
        table = pair_table(first, jobs=jobs)
    rows.append(compare("fixloci.pairs.symmetric", PAIR_CITATION, True, table.is_symmetric(),
                        Provenance.TRIVIAL, ms=timer.ms))
    rows.append(compare("fixloci.pairs.curve_node", "consists of 8 nodes", [48, True],
                        [table.histogram("curves-nodes").get(8, 0),
                         all(e.all_nodes for e in table.select("curves-nodes") if e.count)],
                        Provenance.PAPER))
    rows.append(compare("fixloci.pairs.curve_curve", PAIR_CITATION, {8: 24, 16: 48},
                        {n: c for n, c in table.histogram("curves-curves").items() if n},
                        Provenance.PAPER))
    curve_pairs = table.select("curves-curves")
    rows.append(compare("fixloci.pairs.curve_curve_nodes", "none of the 16 is a node",
                        [True, True],
                        [all(not e.shared_nodes for e in curve_pairs if e.count == 16),
                         all(e.all_nodes for e in curve_pairs if e.count == 8)],
                        Provenance.PAPER))
    rows.append(compare("fixloci.pairs.node_node", "So each node occurs as fixed point of",
                        {0: 30}, table.histogram("nodes-nodes"), Provenance.DERIVED))
    rows.append(compare("fixloci.pairs.gh", "has $a$ as isolated singularity", [],
                        gh_check(table, first), Provenance.DERIVED))
    rows.append(compare("fixloci.pairs.incidence", "contains 4 of these 8 nodes",
                        [4], list(component_incidence(table, first)), Provenance.PAPER))
    return rows, first, table
