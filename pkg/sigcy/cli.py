"""
Command-line interface for sigcy
"""
import json
import sys
from pathlib import Path
from typing import List, Optional

import click

from . import CODE_VERSION, __version__
from .arith.fqarray import set_max_table_order
from .config import get_config
from .errors import SigcyError
from .logging_conf import setup_logging
from .report import CheckReport, RunReport
from .runner import GROUPS, Runner


class Context:
    """Shared state of one CLI invocation"""

    def __init__(self, config_path: Optional[str], jobs: Optional[int], seed: Optional[int],
                 cache_dir: Optional[str], json_path: Optional[str], verbose: bool,
                 quiet: bool = False):
        self.config = get_config(config_path or "sigcy.cfg")
        self.config.override(jobs=jobs, seed=seed, cache_dir=cache_dir, json_path=json_path)
        set_max_table_order(self.config.counting.max_table_order)
        self.logger = setup_logging("DEBUG" if verbose else self.config.log_level,
                                    self.config.log_file, quiet=quiet)
        self._cache = None

    @property
    def cache(self):
        """Count cache, or None when disabled in the configuration"""
        if not self.config.cache.enabled:
            return None
        if self._cache is None:
            from .db import get_cache
            self._cache = get_cache(self.config.db_url)
        return self._cache

    @property
    def jobs(self) -> int:
        return self.config.counting.jobs

    def report(self, rows: List[CheckReport]) -> RunReport:
        report = RunReport(version=__version__, code_version=CODE_VERSION,
                           seed=self.config.theta.seed, config=self.config.snapshot())
        report.extend(rows)
        return report


pass_context = click.make_pass_decorator(Context)


def _finish(ctx: Context, report: RunReport, title: str) -> None:
    """Print the check table, write the JSON report when requested, exit 1 on failures"""
    frame = report.to_frame()
    click.echo(f"\n📋 {title}")
    if frame.empty:
        click.echo("   (no checks)")
    else:
        with_widths = frame.assign(
            expected=frame["expected"].map(_short), computed=frame["computed"].map(_short))
        click.echo(with_widths.to_string(index=False))

    summary = report.summary
    click.echo("\n" + "   ".join(f"{k}: {v}" for k, v in summary.items()))
    if ctx.config.json_path:
        path = report.write(ctx.config.json_path)
        click.echo(f"   Report: {path}")

    if report.exit_code:
        click.echo(f"\n❌ {summary['fail']} check(s) failed", err=True)
        sys.exit(1)
    click.echo("\n✅ No failed checks")


def _short(value, width: int = 40) -> str:
    text = json.dumps(value, default=str) if not isinstance(value, str) else value
    return text if len(text) <= width else text[:width - 3] + "..."


def _rows_or_exit(func, *args, **kwargs):
    """Call a library entry point; library errors end the command with status 1"""
    try:
        return func(*args, **kwargs)
    except SigcyError as e:
        click.echo(f"❌ {type(e).__name__}: {e}", err=True)
        sys.exit(1)


@click.group()
@click.version_option(version=__version__)
@click.option('--config', 'config_path', default=None, type=click.Path(),
              help='Configuration file (default: sigcy.cfg)')
@click.option('--jobs', default=None, type=int, help='Worker threads for count sweeps')
@click.option('--seed', default=None, type=int, help='Seed for all random sampling')
@click.option('--cache', 'cache_dir', default=None, type=click.Path(),
              help='Count cache directory (overrides SIGCY_CACHE_DIR)')
@click.option('--json', 'json_path', default=None, type=click.Path(),
              help='Write the JSON report here')
@click.option('--verbose', is_flag=True, help='DEBUG logging')
@click.option('--quiet', is_flag=True, help='Console shows warnings only')
@click.pass_context
def main(click_ctx, config_path, jobs, seed, cache_dir, json_path, verbose, quiet):
    """
    sigcy - verification toolkit for a Siegel modular Calabi-Yau threefold

    Recomputes point counts, nodes and fixed loci, the branch arrangement,
    the equisingular deformations, both Euler number routes, the Hodge numbers,
    the theta identities and the K3 pencil, and reports every check.
    """
    click_ctx.obj = Context(config_path, jobs, seed, cache_dir, json_path, verbose, quiet)


# ============================================================================
# FULL SWEEP
# ============================================================================

@main.command('run-all')
@click.option('--only', multiple=True, type=click.Choice(GROUPS),
              help='Restrict to these check groups (repeatable)')
@click.option('--progress/--no-progress', default=False, help='Progress bars for count sweeps')
@pass_context
def run_all(ctx, only, progress):
    """
    Run every check group in dependency order

    Exits with status 0 iff no check failed; flagged discrepancies do not fail.
    """
    click.echo(f"🚀 Running sigcy checks: {', '.join(only) if only else 'all groups'}")
    report = Runner(ctx.config, only=list(only) or None, cache=ctx.cache,
                    show_progress=progress).run()
    _finish(ctx, report, "Verification report")


# ============================================================================
# ARITHMETIC
# ============================================================================

@main.command()
@click.argument('variety')
@click.option('--p', 'primes', multiple=True, type=int, required=True,
              help='Odd prime (repeatable)')
@click.option('--k', default=1, type=int, help='Extension degree')
@click.option('--naive', is_flag=True, help='Also run the exhaustive oracle')
@pass_context
def count(ctx, variety, primes, k, naive):
    """Projective point count of a catalog variety over F_(p^k)"""
    from .arith.counting import count_weighted, naive_count

    for p in primes:
        result = _rows_or_exit(count_weighted, variety, p, k, jobs=ctx.jobs, cache=ctx.cache)
        source = "cache" if result.cached else f"{result.elapsed_ms} ms"
        click.echo(f"📊 #{result.variety}(F_{result.q}) = {result.projective}   "
                   f"(affine {result.affine}, {result.method}, {source})")
        if naive:
            slow = _rows_or_exit(naive_count, variety, p, k)
            mark = "✅" if slow.projective == result.projective else "❌"
            click.echo(f"   {mark} naive oracle: {slow.projective}")


@main.command('count-table')
@click.option('--variety', 'names', multiple=True,
              default=("Y_CY", "Y_BIDOUBLE", "Y_SYM", "VERR"),
              help='Catalog variety (repeatable)')
@click.option('--p', 'primes', multiple=True, type=int, required=True,
              help='Odd prime (repeatable)')
@click.option('--out', 'out_path', default=None, type=click.Path(),
              help='Write the table as CSV')
@pass_context
def count_table(ctx, names, primes, out_path):
    """Projective counts of several varieties over several primes"""
    from .arith.counting import count_table as build

    table = _rows_or_exit(build, list(names), list(primes), jobs=ctx.jobs, cache=ctx.cache)
    click.echo(table.to_string())
    if out_path:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(out_path)
        click.echo(f"   Table: {out_path}")


@main.command('verify-modularity')
@click.option('--pmax', default=None, type=int, help='Largest prime (default from config)')
@click.option('--table', 'table_path', default=None, type=click.Path(),
              help='Also write the comparison table as CSV')
@pass_context
def verify_modularity(ctx, pmax, table_path):
    """Point counts against 1 + p^3 - a_p + 16(p + p^2) - 12(2p + p^2)"""
    from .arith.counting import verify_modularity as run

    cfg = ctx.config.counting
    rows, table = _rows_or_exit(run, pmax or cfg.pmax, jobs=cfg.jobs, chunk=cfg.chunk,
                                cache=ctx.cache, show_progress=True)
    click.echo(table.to_string(index=False))
    if table_path:
        Path(table_path).parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(table_path, index=False)
        click.echo(f"   Table: {table_path}")
    _finish(ctx, ctx.report(rows), "Modularity")


@main.command()
@click.option('--p', 'primes', multiple=True, type=int, help='Primes = 1 mod 8 (repeatable)')
@pass_context
def nodes(ctx, primes):
    """The 96 nodes of the octic and the Beauville surface singularities"""
    from .arith.counting import beauville_singularities, verify_nodes

    cfg = ctx.config.nodes
    rows = _rows_or_exit(verify_nodes, list(primes) or cfg.primes, cfg.ext)
    rows += _rows_or_exit(beauville_singularities, seed=ctx.config.theta.seed)
    _finish(ctx, ctx.report(rows), "Nodes")


@main.command()
@click.option('--pairs', 'pairs_path', default=None, type=click.Path(),
              help='Write the ordered pair table as CSV')
@pass_context
def fixloci(ctx, pairs_path):
    """Fixed loci of the 31 non-identity elements of K and the pair table"""
    import pandas as pd

    from .arith.fixloci import verify_fixloci

    rows, census, table = _rows_or_exit(verify_fixloci, ctx.config.nodes.primes, jobs=ctx.jobs)
    click.echo(f"🔍 Kinds over F_{census.p}: {census.kind_counts}")
    if pairs_path:
        Path(pairs_path).parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(table.rows()).to_csv(pairs_path, index=False)
        click.echo(f"   Pairs: {pairs_path}")
    _finish(ctx, ctx.report(rows), "Fixed loci")


@main.command('cusp-form')
@click.option('--pmax', default=97, type=int, help='Largest prime')
@pass_context
def cusp_form(ctx, pmax):
    """a_p of the weight-4 level-8 eta product and its Hecke checks"""
    from .arith.thetamod import ap_table, eta_product_ap, verify_hecke

    expansion = eta_product_ap(max(100, pmax))
    for p, a in ap_table(pmax, expansion).items():
        click.echo(f"   a_{p} = {a}")
    _finish(ctx, ctx.report(verify_hecke(expansion, min(pmax, expansion.order))),
            "Cusp form")


@main.command('theta-check')
@click.option('--samples', default=None, type=int, help='Random Siegel points')
@pass_context
def theta_check(ctx, samples):
    """Numerical theta-constant identities and the sign action of Gamma"""
    from .arith.thetamod import verify_theta

    cfg = ctx.config.theta
    rows = _rows_or_exit(verify_theta, samples or cfg.samples, cfg.tol, cfg.gamma_samples,
                         cfg.seed)
    _finish(ctx, ctx.report(rows), "Theta constants")


# ============================================================================
# GEOMETRY
# ============================================================================

@main.command()
@click.option('--dump', 'dump_path', default=None, type=click.Path(),
              help='Write the incidence data and blow-up trace as JSON')
@click.option('--sweep/--no-sweep', default=True, help='Sweep all blow-up orders')
@pass_context
def arrangement(ctx, dump_path, sweep):
    """Incidences of the branch octic and the plane blow-up tally"""
    from .geometry.arrangement import incidence_report, verify_arrangement

    rows, model, tally = _rows_or_exit(verify_arrangement, sweep)
    if dump_path:
        out = Path(dump_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(incidence_report(model, tally), indent=2))
        click.echo(f"   Incidence dump: {out}")
    _finish(ctx, ctx.report(rows), "Arrangement")


@main.command()
@click.option('--prime', 'primes', multiple=True, type=int,
              help='Certification prime (repeatable, default from config)')
@click.option('--exact/--no-exact', default=None, help='Also compute over QQ')
@pass_context
def equisingular(ctx, primes, exact):
    """h^1 of the equisingular piece in degree 8"""
    from .geometry.deform import verify_deform

    cfg = ctx.config.deform
    rows, result = _rows_or_exit(verify_deform, list(primes) or cfg.primes,
                                 exact=cfg.exact if exact is None else exact)
    click.echo(f"🔬 {result.domain}: {result.as_dict()}")
    _finish(ctx, ctx.report(rows), "Equisingular deformations")


ROUTE_PREFIXES = {
    "stringy": ("topology.e_resolved_X", "topology.stringy"),
    "cover": ("topology.blowup_euler", "topology.cover"),
}


@main.command()
@click.option('--route', type=click.Choice(["stringy", "cover", "both"]), default="both",
              help='Euler number route')
@pass_context
def euler(ctx, route):
    """Euler number of the Calabi-Yau model by the stringy formula and the bi-double cover"""
    routes = ["stringy", "cover"] if route == "both" else [route]
    prefixes = tuple(p for r in routes for p in ROUTE_PREFIXES[r])
    report = Runner(ctx.config, only=["topology"], cache=ctx.cache).run()
    if route == "both":
        prefixes += ("topology.euler_routes",)
    report.checks = [row for row in report.checks
                     if row.check.startswith(prefixes) or row.failed]
    _finish(ctx, report, f"Euler number ({route})")


@main.command()
@pass_context
def hodge(ctx):
    """h^11 and h^12 with both Picard ledgers"""
    report = Runner(ctx.config, only=["topology"], cache=ctx.cache).run()
    _finish(ctx, report, "Hodge numbers")


@main.command()
@click.option('--param', 'params', multiple=True, help='Pencil parameter s:t (repeatable)')
@click.option('--sweep', 'sweep_size', default=None, type=int,
              help='Random parameters to classify')
@pass_context
def k3(ctx, params, sweep_size):
    """The K3 pencil: one fiber per --param, or the full check set"""
    from .geometry.k3fib import fiber, splitting_checks, sweep, verify_k3
    from .geometry.varieties import parse_param

    cfg = ctx.config.k3
    if not params:
        rows = _rows_or_exit(verify_k3, cfg.samples, sweep_size or cfg.sweep, cfg.seed)
        _finish(ctx, ctx.report(rows), "K3 pencil")
        return

    rows = []
    for text in params:
        s, t = _rows_or_exit(parse_param, text)
        f = _rows_or_exit(fiber, s, t)
        click.echo(f"🔍 Fiber ({f.param[0]}:{f.param[1]})")
        if f.is_generic:
            click.echo(f"   generic: {f.own_nodes()} own nodes, "
                       f"{f.mutual_points()} mutual points")
        else:
            click.echo(f"   special: {', '.join(f.degenerations())}")
        rows.append(splitting_checks(*f.param))
    if sweep_size:
        click.echo(f"   sweep of {sweep_size}: {sweep(sweep_size, cfg.seed)}")
    _finish(ctx, ctx.report(rows), "K3 fibers")


@main.command()
@click.option('--param', 'params', multiple=True, default=("2:1",),
              help='K3 fibers to include (s:t, repeatable)')
@click.option('--out', 'out_path', default=None, type=click.Path(),
              help='Write the catalog here instead of stdout')
@pass_context
def catalog(ctx, params, out_path):
    """Dump every variety of the catalog (ring, weights, equations)"""
    from .geometry.varieties import dump_catalog, parse_param

    text = dump_catalog([_rows_or_exit(parse_param, p) for p in params])
    if out_path:
        out = Path(out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        click.echo(f"✅ Catalog written to {out}")
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
