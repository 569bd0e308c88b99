#!/usr/bin/env python3
"""
NGBS-Toolkit CLI - Main entry point
"""

import argparse
import logging
import sys
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from .config import load_config
from .errors import ConvergenceError, ToolkitError
from .parser import ParsedSpec, SpecParser
from .runner import ToolkitRunner

console = Console()

STATE_FLAGS = ('M', 'p', 'q', 'n', 'alpha', 'cutoff')


class NGBSToolkitCLI:
    """Main CLI interface for NGBS-Toolkit"""

    def __init__(self, settings: Optional[str] = None, workers: Optional[int] = None):
        self.config = load_config(Path(settings) if settings else None)
        self.runner = ToolkitRunner(self.config, workers)
        self.parser = SpecParser()

    def sweep(self, args: argparse.Namespace) -> int:
        """Witness values along a parameter sweep"""
        parsed = self._load_spec(args)
        if args.sweep:
            parsed.set('sweep', 'param', args.sweep)
        for key in ('start', 'stop', 'count'):
            value = getattr(args, key)
            if value is not None:
                parsed.set('sweep', {'start': 'from', 'stop': 'to'}.get(key, key), value)
        if args.witness:
            parsed.witnesses = list(args.witness)
        if args.format:
            parsed.set('output', 'format', args.format)

        spec = self.parser.sweep_spec(parsed)

        console.print("\n📈 [bold cyan]NGBS-Toolkit Sweep[/bold cyan]\n")
        console.print(f"Family: {spec.state_family} {spec.fixed_params}")
        console.print(f"Sweep: {spec.sweep_param} from {spec.start:g} to {spec.stop:g} ({spec.count} points)")
        console.print(f"Witnesses: {', '.join(f'{n}:{o}' for n, o in spec.witnesses)}\n")

        with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                      console=console) as progress:
            task = progress.add_task("Evaluating witnesses...", total=None)
            rows = self.runner.run_sweep(spec)
            progress.remove_task(task)

        self._show_sweep_summary(rows)
        if spec.output:
            console.print(f"✅ Wrote {len(rows)} rows to {spec.output}")
        return 0

    def grid(self, args: argparse.Namespace) -> int:
        """Wigner or tomogram surface data"""
        parsed = self._load_spec(args)
        options = self.parser.grid_options(parsed)
        state_spec = self.parser.state_spec(parsed)

        kind = args.kind or options['kind'] or 'wigner'
        window = self.parser.parse_window(args.grid_window) if args.grid_window else options['window']
        resolution = args.resolution or options['resolution']
        theta_count = args.theta_count or options['theta_count']

        console.print(f"\n🗺️  [bold cyan]NGBS-Toolkit Grid ({kind})[/bold cyan]\n")
        console.print(f"State: {state_spec.label()}\n")

        with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                      console=console) as progress:
            task = progress.add_task(f"Sampling {kind}...", total=None)
            grid = self.runner.run_grid(kind, state_spec, window, resolution,
                                        self._output_path(parsed), theta_count)
            progress.remove_task(task)

        table = Table(title="Grid", show_header=False)
        table.add_column("Metric", style="cyan")
        table.add_column("Value", style="green")
        if kind == 'wigner':
            table.add_row("Window", ', '.join(f"{v:.4g}" for v in grid.window))
            table.add_row("Points", f"{len(grid.x_axis)} x {len(grid.p_axis)}")
            table.add_row("Normalization", f"{grid.normalization:.10f}")
            table.add_row("Minimum W", f"{grid.values.min():.6g}")
        else:
            table.add_row("X range", ', '.join(f"{v:.4g}" for v in grid.x_range))
            table.add_row("Points", f"{len(grid.x_axis)} x {len(grid.theta_axis)}")
            table.add_row("Normalization", f"{grid.normalization.min():.10f} .. {grid.normalization.max():.10f}")
        console.print(table)
        return 0

    def volume(self, args: argparse.Namespace) -> int:
        """Nonclassical volume with its refinement history"""
        parsed = self._load_spec(args)
        options = self.parser.grid_options(parsed)
        state_spec = self.parser.state_spec(parsed)

        tolerance = args.tolerance if args.tolerance is not None else options['tolerance']
        window = self.parser.parse_window(args.grid_window) if args.grid_window else options['window']
        resolution = args.resolution or options['resolution']

        console.print("\n📐 [bold cyan]NGBS-Toolkit Nonclassical Volume[/bold cyan]\n")
        console.print(f"State: {state_spec.label()}\n")

        try:
            with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                          console=console) as progress:
                task = progress.add_task("Refining volume...", total=None)
                report = self.runner.run_volume(state_spec, tolerance, self._output_path(parsed),
                                                window, resolution)
                progress.remove_task(task)
        except ConvergenceError as e:
            self._show_history(e.history)
            raise

        self._show_history(report.history)
        console.print(f"\nδ = [bold green]{report.delta:.8f}[/bold green] "
                      f"(resolution {report.resolution}, tolerance {report.tolerance:g})")
        console.print(f"Negative part of W: [bold green]{report.negative_volume:.8f}[/bold green]  "
                      f"∬W = {report.normalization:.10f}")
        return 0

    def state(self, args: argparse.Namespace) -> int:
        """Coefficients and photon-number distribution of a state"""
        parsed = self._load_spec(args)
        state_spec = self.parser.state_spec(parsed)
        summary = self.runner.dump_state(state_spec, self._output_path(parsed))

        table = Table(title=f"{summary['state']}  <N> = {summary['mean_photon_number']:.10g}")
        table.add_column("n", style="cyan", justify="right")
        table.add_column("c_n", style="green", justify="right")
        table.add_column("P(n)", style="magenta", justify="right")
        for n, re_part, im_part, probability in summary['rows']:
            amplitude = f"{re_part:.10g}" if im_part == 0 else f"{re_part:.6g}{im_part:+.6g}j"
            table.add_row(str(n), amplitude, f"{probability:.10g}")
        console.print(table)
        return 0

    def _load_spec(self, args: argparse.Namespace) -> ParsedSpec:
        """Spec file (if any) with the command-line flags applied on top"""
        parsed = self.parser.parse_file(Path(args.config)) if args.config else ParsedSpec(source='<flags>')
        if args.family:
            parsed.set('state', 'family', args.family)
        for name in STATE_FLAGS:
            value = getattr(args, name, None)
            if value is not None:
                parsed.set('state', name, value)
        if args.out:
            parsed.set('output', 'path', args.out)
        return parsed

    def _output_path(self, parsed: ParsedSpec) -> Optional[Path]:
        path = parsed.get('output', 'path')
        return Path(path) if path else None

    def _show_sweep_summary(self, rows: List[Dict]):
        """Per-witness breakdown of a sweep"""
        grouped: Dict = defaultdict(list)
        for row in rows:
            grouped[(row['criterion'], row['order'])].append(row)

        table = Table(title="Sweep Summary", show_header=True)
        table.add_column("Witness", style="cyan")
        table.add_column("Order", justify="right")
        table.add_column("Nonclassical", style="green", justify="right")
        table.add_column("Minimum", style="magenta", justify="right")
        table.add_column("Skipped", style="yellow", justify="right")

        for (criterion, order), entries in sorted(grouped.items()):
            values = [r['value'] for r in entries if r['value'] is not None]
            table.add_row(
                criterion,
                str(order),
                f"{sum(r['nonclassical'] for r in entries)}/{len(entries)}",
                f"{min(values):.6g}" if values else "-",
                str(len(entries) - len(values)),
            )
        console.print(table)
        console.print()

    def _show_history(self, history: List[Dict]):
        table = Table(title="Refinement History")
        table.add_column("Resolution", style="cyan", justify="right")
        table.add_column("Estimate", justify="right")
        table.add_column("Extrapolated", style="green", justify="right")
        table.add_column("Negative part", justify="right")
        table.add_column("Kink cells", style="magenta", justify="right")
        for entry in history:
            table.add_row(
                str(entry['resolution']),
                f"{entry['estimate']:.8f}",
                f"{entry['extrapolated']:.8f}",
                f"{entry['negative_volume']:.10f}",
                str(entry['kink_cells']),
            )
        console.print(table)


def _configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _add_global_arguments(parser: argparse.ArgumentParser, subcommand: bool = False):
    """Flags accepted before or after the command name"""
    # a subcommand must not reset values given before the command name
    default = argparse.SUPPRESS if subcommand else None
    switch = argparse.SUPPRESS if subcommand else False
    parser.add_argument('--settings', default=default, help='JSON file overriding numerical defaults')
    parser.add_argument('--workers', type=int, default=default, help='Worker processes')
    parser.add_argument('--verbose', action='store_true', default=switch, help='Debug logging')
    parser.add_argument('--debug', action='store_true', default=switch, help='Re-raise unexpected errors')


def _add_common_arguments(parser: argparse.ArgumentParser):
    _add_global_arguments(parser, subcommand=True)
    parser.add_argument('--config', help='Run specification file ([state], [sweep], ... sections)')
    parser.add_argument('--family', choices=['ngbs', 'binomial', 'fock', 'coherent'], help='State family')
    parser.add_argument('--M', help='NGBS/binomial photon-number bound')
    parser.add_argument('--p', help='Probability p')
    parser.add_argument('--q', help='NGBS deformation q')
    parser.add_argument('--n', help='Fock number')
    parser.add_argument('--alpha', help='Coherent amplitude')
    parser.add_argument('--cutoff', help='Fock-space cutoff for fock/coherent')
    parser.add_argument('--out', help='Output file')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="NGBS-Toolkit: nonclassicality witnesses, Wigner functions and tomograms",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    _add_global_arguments(parser)

    subparsers = parser.add_subparsers(dest='command', help='Commands')

    # Sweep command
    sweep_parser = subparsers.add_parser('sweep', help='Witness values along a parameter sweep')
    _add_common_arguments(sweep_parser)
    sweep_parser.add_argument('--sweep', help='Parameter to sweep')
    sweep_parser.add_argument('--from', dest='start', help='First sweep value')
    sweep_parser.add_argument('--to', dest='stop', help='Last sweep value')
    sweep_parser.add_argument('--count', help='Number of sweep values (>= 2)')
    sweep_parser.add_argument('--witness', action='append',
                              help="Witness as name:order (repeatable; default all)")
    sweep_parser.add_argument('--format', choices=['csv', 'json'], help='Table format (default: csv)')

    # Grid command
    grid_parser = subparsers.add_parser('grid', help='Wigner or tomogram surface data')
    _add_common_arguments(grid_parser)
    grid_parser.add_argument('kind', nargs='?', choices=['wigner', 'tomogram'], help='Grid kind (default: wigner)')
    grid_parser.add_argument('--grid-window', help="Radius, 'X_min,X_max' or 'x_min,x_max,p_min,p_max'")
    grid_parser.add_argument('--resolution', type=int, help='Points per axis')
    grid_parser.add_argument('--theta-count', type=int, help='Tomogram angles')

    # Volume command
    volume_parser = subparsers.add_parser('volume', help='Nonclassical volume')
    _add_common_arguments(volume_parser)
    volume_parser.add_argument('--grid-window', help="Radius or 'x_min,x_max,p_min,p_max'")
    volume_parser.add_argument('--resolution', type=int, help='Starting points per axis')
    volume_parser.add_argument('--tolerance', type=float, help='Refinement tolerance')

    # State command
    state_parser = subparsers.add_parser('state', help='Dump coefficients and photon-number distribution')
    _add_common_arguments(state_parser)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 1

    _configure_logging(args.verbose)

    try:
        cli = NGBSToolkitCLI(args.settings, args.workers)
        if args.command == 'sweep':
            return cli.sweep(args)
        elif args.command == 'grid':
            return cli.grid(args)
        elif args.command == 'volume':
            return cli.volume(args)
        elif args.command == 'state':
            return cli.state(args)
    except KeyboardInterrupt:
        console.print("\n\n[yellow]Interrupted by user[/yellow]")
        return 130
    except ToolkitError as e:
        console.print(f"\n[red]Error: {e}[/red]")
        if args.debug:
            raise
        return e.exit_code
    except Exception as e:
        console.print(f"\n[red]Error: {e}[/red]")
        if args.debug:
            raise
        return 1
    return 1


if __name__ == '__main__':
    sys.exit(main())
