"""Command-line front end.

    stopord evaluate INSTANCE [--order 1,0]
    stopord solve INSTANCE --method {brute,two-point,fptas,nested-uniform} [--eps E]
    stopord prophet INSTANCE
    stopord gen-hardness 2 3 --target 6 [--out FILE]
    stopord check-structure INSTANCE [--order ...]

Human output is a table; ``--json`` prints the :class:`Report`. Exit status
is 0 on success, 2 for usage, input or shape errors and 1 when a runtime
self-check fails or the deadline passes.
"""

import inspect
import logging
import time
from collections.abc import Callable
from pathlib import Path
from typing import Any

import anyio
import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from stopord.config import SolverSettings
from stopord.core import hardness
from stopord.core.ordering_rules import classify_st
from stopord.core.stopping import evaluate_order
from stopord.core.two_point import TwoPointInstance
from stopord.layers.solvers import Evaluate, Prophet, build_solver
from stopord.types.errors import DeadlineExceeded, InvariantViolation, StopordError
from stopord.types.instance import InstanceFile, Report

logger = logging.getLogger(__name__)

EXIT_INTERNAL = 1
EXIT_USAGE = 2

METHODS = ("brute", "two-point", "fptas", "nested-uniform")


def _parse_order(ctx: click.Context, param: click.Parameter, value: str | None) -> list[int] | None:
    if value is None:
        return None
    try:
        return [int(tok) for tok in value.replace(" ", "").split(",") if tok != ""]
    except ValueError:
        raise click.BadParameter("expected comma-separated indices, e.g. 1,0,2") from None


def _table(title: str, rows: dict[str, Any]) -> Table:
    table = Table(title=title, show_header=False)
    table.add_column("field", style="bold")
    table.add_column("value")
    for key, value in rows.items():
        table.add_row(key, f"{value:.12g}" if isinstance(value, float) else str(value))
    return table


class Runner:
    """Shared state of one invocation: settings, output mode and consoles."""

    def __init__(self, settings: SolverSettings):
        self.settings = settings
        self.out = Console()
        self.err = Console(stderr=True)

    def context_kwargs(self) -> dict[str, Any]:
        kwargs: dict[str, Any] = {"tie_tol": self.settings.tie_tol}
        if self.settings.timeout is not None:
            kwargs["timeout"] = self.settings.timeout
        return kwargs

    def execute(
        self,
        command: str,
        args: dict[str, Any],
        instance: InstanceFile | None,
        work: Callable[[], Any],
        as_json: bool,
    ) -> None:
        """Runs ``work``, maps failures to exit codes and prints the report."""
        start = time.perf_counter()
        try:
            outcome = anyio.run(work) if inspect.iscoroutinefunction(work) else work()
        except (InvariantViolation, DeadlineExceeded) as e:
            self.err.print(f"[red]error:[/red] {e}")
            raise click.exceptions.Exit(EXIT_INTERNAL) from e
        except (StopordError, ValueError) as e:
            self.err.print(f"[red]error:[/red] {e}")
            raise click.exceptions.Exit(EXIT_USAGE) from e

        report = Report(
            command=command,
            args=args,
            instance_digest=instance.digest() if instance is not None else None,
            result=outcome,
            wall_time=time.perf_counter() - start,
        )
        if as_json:
            click.echo(report.to_json())
        else:
            flat = {k: v for k, v in outcome.items() if not isinstance(v, dict)}
            self.out.print(_table(command, flat))
            for key, value in outcome.items():
                if isinstance(value, dict):
                    self.out.print(_table(key, value))


def _load(path: str) -> tuple[InstanceFile, list[Any]]:
    try:
        inst = InstanceFile.read(path)
        return inst, inst.dists()
    except ValueError as e:
        raise click.exceptions.Exit(_usage_error(f"{path}: {e}")) from e


def _usage_error(message: str) -> int:
    Console(stderr=True).print(f"[red]error:[/red] {message}")
    return EXIT_USAGE


json_option = click.option("--json", "as_json", is_flag=True, help="Print the machine-readable report.")
order_option = click.option("--order", callback=_parse_order, help="Probe order as comma-separated indices.")
instance_argument = click.argument("instance", type=click.Path(exists=True, dir_okay=False))


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML settings file.")
@click.option("--workers", type=int, help="Parallel shards for brute force and the approximation scheme.")
@click.option("--timeout", type=float, help="Deadline in seconds for the solve.")
@click.option("--tie-tol", type=float, help="Tolerance for co-optimal orders.")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def main(
    ctx: click.Context,
    config_path: str | None,
    workers: int | None,
    timeout: float | None,
    tie_tol: float | None,
    verbose: bool,
) -> None:
    """Optimal probe orders for optimal stopping."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
    )
    try:
        settings = SolverSettings.load(config_path).merged(workers=workers, timeout=timeout, tie_tol=tie_tol)
    except ValueError as e:
        raise click.exceptions.Exit(_usage_error(str(e))) from e
    ctx.obj = Runner(settings)


@main.command()
@instance_argument
@order_option
@json_option
@click.pass_obj
def evaluate(runner: Runner, instance: str, order: list[int] | None, as_json: bool) -> None:
    """Value, thresholds and excess decomposition of an order."""
    inst, dists = _load(instance)
    chosen = list(range(len(dists))) if order is None else order

    async def work() -> dict[str, Any]:
        res, profile = await Evaluate()(dists, chosen, **runner.context_kwargs())
        return {
            "order": list(res.order),
            "value": res.value,
            "thresholds": list(res.thresholds),
            "excesses": list(profile.excesses),
            "continuations": list(profile.continuations),
        }

    runner.execute("evaluate", {"order": chosen}, inst, work, as_json)


@main.command()
@instance_argument
@click.option("--method", type=click.Choice(METHODS), required=True)
@click.option("--eps", type=float, help="Accuracy of the approximation scheme (fptas only).")
@json_option
@click.pass_obj
def solve(runner: Runner, instance: str, method: str, eps: float | None, as_json: bool) -> None:
    """Find an optimal (or near-optimal) probe order."""
    eps = eps if eps is not None else runner.settings.eps
    if method == "fptas" and eps is None:
        raise click.UsageError("--eps is required with --method fptas")
    inst, dists = _load(instance)

    async def work() -> dict[str, Any]:
        kwargs = runner.context_kwargs()
        extra: dict[str, Any] = {}
        if method == "brute":
            found = await build_solver(method, workers=runner.settings.workers)(dists, **kwargs)
            order = found.best_ordering
            extra = {
                "best_orderings": [list(o) for o in found.best_orderings],
                "evaluated_count": found.evaluated_count,
                "worst_value": found.worst_value,
                "worst_ordering": list(found.worst_ordering),
            }
        elif method == "two-point":
            found = await build_solver(method)(TwoPointInstance.from_dists(dists), **kwargs)
            order = found.order
        elif method == "fptas":
            found = await build_solver(method, workers=runner.settings.workers)(dists, eps, **kwargs)
            order = found.ordering
            extra = {
                "epsilon": found.epsilon,
                "partitions_kept": list(found.partitions_kept),
                "partitions_generated": list(found.partitions_generated),
                "s_indices": list(found.s_indices),
                "t_indices": list(found.t_indices),
                "pinned": found.pinned,
            }
        else:
            found = await build_solver(method)(dists, **kwargs)
            order = found.order
        res = evaluate_order(dists, order)
        return {"method": method, "order": list(res.order), "value": res.value, "thresholds": list(res.thresholds)} | extra

    runner.execute("solve", {"method": method, "eps": eps}, inst, work, as_json)


@main.command()
@instance_argument
@json_option
@click.pass_obj
def prophet(runner: Runner, instance: str, as_json: bool) -> None:
    """Prophet ratio of a two-point instance with its certificate."""
    inst, dists = _load(instance)

    async def work() -> dict[str, Any]:
        report = await Prophet()(TwoPointInstance.from_dists(dists), **runner.context_kwargs())
        out: dict[str, Any] = {
            "e_max": report.e_max,
            "best_order_value": report.best_order_value,
            "best_ordering": list(report.best_ordering),
            "ratio": report.ratio,
        }
        if report.certificate is not None:
            out["certificate"] = report.certificate.model_dump(mode="json")
        return out

    runner.execute("prophet", {}, inst, work, as_json)


@main.command("gen-hardness")
@click.argument("integers", nargs=-1, type=int, required=True)
@click.option("-B", "--target", type=int, required=True, help="Target product B.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Write the instance file here.")
@json_option
@click.pass_obj
def gen_hardness(runner: Runner, integers: tuple[int, ...], target: int, out: str | None, as_json: bool) -> None:
    """Build a subset-product instance from INTEGERS and a target."""

    def work() -> dict[str, Any]:
        inst = hardness.generate(integers, target)
        instance = InstanceFile.from_dists(
            list(inst.dists), gamma=inst.gamma, B=inst.target, integers=list(inst.integers)
        )
        if out is not None:
            instance.write(Path(out))
            logger.info("wrote %s", out)
        return {"m": list(inst.middles), "gamma": inst.gamma, "B": inst.target, "out": out}

    runner.execute("gen-hardness", {"integers": list(integers), "B": target, "out": out}, None, work, as_json)


@main.command("check-structure")
@instance_argument
@order_option
@json_option
@click.pass_obj
def check_structure(runner: Runner, instance: str, order: list[int] | None, as_json: bool) -> None:
    """Split an order of a {0, m, 1} instance into its S and T blocks."""
    inst, dists = _load(instance)
    chosen = list(range(len(dists))) if order is None else order

    def work() -> dict[str, Any]:
        report = classify_st(evaluate_order(dists, chosen), dists)  # type: ignore[arg-type]
        return {
            "order": chosen,
            "s_indices": list(report.s_indices),
            "t_indices": list(report.t_indices),
            "satisfies_claim": report.satisfies_claim,
            "violations": [list(v) for v in report.violations],
        }

    runner.execute("check-structure", {"order": chosen}, inst, work, as_json)
