"""
Full verification sweep

Runs every check group in dependency order and collects the rows into one
RunReport:

    counting, nodes, theta                    independent
    symbolic                                  -> topology (split quadrics in the divisor ledger)
    fixloci                                   -> topology (stringy route, Picard ledger)
    arrangement                               -> deform, topology (cover route), k3
    deform                                    -> topology (h12)

A group that raises becomes a single fail row; the sweep always continues.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

from . import CODE_VERSION, __version__
from .arith.fqarray import set_max_table_order
from .config import ConfigManager, get_config
from .errors import PreconditionError
from .report import CheckReport, RunReport, failure, timed

logger = logging.getLogger("sigcy.runner")

GROUPS = ("symbolic", "counting", "nodes", "theta", "fixloci", "arrangement", "deform",
          "topology", "k3")

PREREQUISITES = {
    "deform": ("arrangement",),
    "k3": ("arrangement",),
    "topology": ("symbolic", "fixloci", "arrangement", "deform"),
}


def resolve_groups(only: Optional[Iterable[str]]) -> List[str]:
    """
    Groups to execute, in dependency order, prerequisites included

    Raises:
        ValueError: unknown group name
    """
    if not only:
        return list(GROUPS)
    wanted = set()
    stack = list(only)
    while stack:
        name = stack.pop()
        if name not in GROUPS:
            raise ValueError(f"unknown check group '{name}' (choose from {', '.join(GROUPS)})")
        if name not in wanted:
            wanted.add(name)
            stack.extend(PREREQUISITES.get(name, ()))
    return [g for g in GROUPS if g in wanted]


@dataclass
class RunState:
    """Artifacts handed from one group to the next"""
    census: Any = None
    pairs: Any = None
    model: Any = None
    tally: Any = None
    deform: Any = None
    split_quadrics: Optional[int] = None
    failed: Dict[str, str] = field(default_factory=dict)


class Runner:
    """
    Executes check groups against one configuration

    Args:
        config: configuration manager (the global one when omitted)
        only: restrict the report to these groups; prerequisites still run but
            their rows are not reported
        cache: count cache, or None to recompute every count
        show_progress: tqdm bars for the long count sweeps
    """

    def __init__(self, config: Optional[ConfigManager] = None,
                 only: Optional[Sequence[str]] = None, cache=None,
                 show_progress: bool = False):
        self.config = config or get_config()
        self.requested = set(only) if only else set(GROUPS)
        self.groups = resolve_groups(only)
        self.cache = cache
        self.show_progress = show_progress
        self.state = RunState()
        set_max_table_order(self.config.counting.max_table_order)

    @property
    def seed(self) -> int:
        return self.config.theta.seed

    def run(self) -> RunReport:
        report = RunReport(version=__version__, code_version=CODE_VERSION, seed=self.seed,
                           config=self.config.snapshot())
        for group in self.groups:
            rows = self.run_group(group)
            if group in self.requested:
                report.extend(rows)
            else:
                logger.info(f"{group}: prerequisite only, {len(rows)} rows not reported")
        logger.info(f"Run finished: {report.summary}")
        return report

    def run_group(self, group: str) -> List[CheckReport]:
        missing = [dep for dep in PREREQUISITES.get(group, ()) if dep in self.state.failed]
        if missing:
            error = PreconditionError(f"prerequisite group(s) failed: {', '.join(missing)}")
            self.state.failed[group] = str(error)
            return [failure(f"{group}.prerequisites", "dependency order", error)]

        step: Callable[[], List[CheckReport]] = getattr(self, f"_run_{group}")
        logger.info(f"Running {group} checks")
        with timed() as timer:
            try:
                rows = step()
            except Exception as e:
                logger.error(f"{group} raised {type(e).__name__}: {e}")
                self.state.failed[group] = str(e)
                return [failure(f"{group}.error", "per-check failure capture", e,
                                ms=timer.ms)]
        logger.info(f"{group}: {len(rows)} rows in {timer.ms} ms")
        return rows

    # ------------------------------------------------------------------
    # groups
    # ------------------------------------------------------------------

    def _run_symbolic(self) -> List[CheckReport]:
        from .geometry.varieties import (catalog, split_quadrics, verify_coordinate_changes,
                                         verify_quotient_map, verify_quadric_splitting)

        rows = [v.check_homogeneity() for v in catalog().values()]
        rows += verify_quotient_map() + verify_coordinate_changes()
        quadrics = verify_quadric_splitting()
        self.state.split_quadrics = split_quadrics(quadrics)
        return rows + quadrics

    def _run_counting(self) -> List[CheckReport]:
        from .arith.counting import verify_model_agreement, verify_modularity, verify_oracle
        from .geometry.varieties import catalog

        cfg = self.config.counting
        rows = verify_oracle(list(catalog()), cfg.naive_primes, jobs=cfg.jobs,
                             cache=self.cache)
        modularity, _ = verify_modularity(cfg.pmax, jobs=cfg.jobs, chunk=cfg.chunk,
                                          cache=self.cache, show_progress=self.show_progress)
        rows += modularity
        rows += verify_model_agreement(cfg.naive_primes, jobs=cfg.jobs, cache=self.cache)
        return rows

    def _run_nodes(self) -> List[CheckReport]:
        from .arith.counting import beauville_singularities, verify_nodes

        cfg = self.config.nodes
        return verify_nodes(cfg.primes, cfg.ext) + beauville_singularities(seed=self.seed)

    def _run_theta(self) -> List[CheckReport]:
        from .arith.thetamod import verify_theta

        cfg = self.config.theta
        return verify_theta(cfg.samples, cfg.tol, cfg.gamma_samples, cfg.seed)

    def _run_fixloci(self) -> List[CheckReport]:
        from .arith.fixloci import verify_fixloci

        rows, census, table = verify_fixloci(self.config.nodes.primes,
                                             jobs=self.config.counting.jobs)
        self.state.census, self.state.pairs = census, table
        return rows

    def _run_arrangement(self) -> List[CheckReport]:
        from .geometry.arrangement import verify_arrangement

        rows, model, tally = verify_arrangement()
        self.state.model, self.state.tally = model, tally
        return rows

    def _run_deform(self) -> List[CheckReport]:
        from .geometry.deform import verify_deform

        cfg = self.config.deform
        rows, result = verify_deform(cfg.primes, model=self.state.model, exact=cfg.exact)
        self.state.deform = result
        return rows

    def _run_topology(self) -> List[CheckReport]:
        from .arith.fixloci import component_orbits, node_orbits
        from .geometry.arrangement import divisor_euler, intersection_euler
        from .topology.ledgers import verify_cover, verify_hodge, verify_stringy

        census, model, tally = self.state.census, self.state.model, self.state.tally
        kinds = {g: r.kind for g, r in census.reports.items()}
        rows, stringy = verify_stringy(kinds, self.state.pairs.entries.values())
        cover_rows, e_cover = verify_cover(divisor_euler(tally, 1), divisor_euler(tally, 2),
                                           intersection_euler(model), len(model.fourfold),
                                           len(model.centers))
        rows += cover_rows
        fixed_components = (len(node_orbits(census.inventory))
                            + len(component_orbits(census.components)))
        hodge_rows, _ = verify_hodge(stringy.total, e_cover, self.state.deform.h1,
                                     fixed_components, self.state.split_quadrics,
                                     len(model.fourfold), len(model.centers))
        return rows + hodge_rows

    def _run_k3(self) -> List[CheckReport]:
        from .geometry.k3fib import verify_k3

        cfg = self.config.k3
        return verify_k3(cfg.samples, cfg.sweep, cfg.seed, model=self.state.model)


def run_all(config: Optional[ConfigManager] = None, only: Optional[Sequence[str]] = None,
            cache=None, show_progress: bool = False) -> RunReport:
    """
    Execute the selected check groups and return the consolidated report

    Args:
        config: configuration manager
        only: group names (see GROUPS); None runs everything
        cache: optional count cache
        show_progress: progress bars for count sweeps

    Returns:
        RunReport; exit_code is 0 iff no row failed
    """
    return Runner(config, only, cache, show_progress).run()
