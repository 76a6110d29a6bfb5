#!/usr/bin/env python3
"""
Quarterplane Demo Script
Walks through development, both reductions and the field interpolation
"""

import sys
import tempfile
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

# Add the quarterplane package to the path
sys.path.insert(0, str(Path(__file__).parent))

from quarterplane.core.config import QuarterplaneConfig
from quarterplane.core.dynsys import develop, scan_ultimately_zero, xor_system
from quarterplane.core.fieldpoly import embed_system, verify_embedding
from quarterplane.core.formats import format_diagonal
from quarterplane.core.logging_setup import configure_logging
from quarterplane.core.render import RenderPalette, render_ppm
from quarterplane.core.symcode import check_symcod
from quarterplane.reductions.suw import SuwReduction
from quarterplane.reductions.uw import UwReduction
from quarterplane.templates.machine_suite import MachineSuite

console = Console()


def demo_development(out_dir: Path):
    """Exclusive-or develops into Pascal's triangle mod 2"""
    console.print(Panel.fit("Quarterplane Demo: Development", style="bold blue"))

    system = xor_system()
    for diagonal in develop(system, 8):
        console.print(f"   {format_diagonal(diagonal)}")

    verdict = scan_ultimately_zero(system, 64)
    console.print(f"\nZero scan: {verdict}")
    for note in verdict.scan_log():
        console.print(f"   {note}")

    picture = render_ppm(
        develop(system, 255), RenderPalette.for_system(system), out_dir / "xor.ppm", 255, 0
    )
    console.print(f"Picture written to: {picture}")


def demo_reductions(config: QuarterplaneConfig):
    """Compile every sample machine both ways and check the simulations"""
    console.print(Panel.fit("Quarterplane Demo: Reductions", style="bold green"))

    suite = MachineSuite()
    uw = UwReduction(config)
    suw = SuwReduction(config)

    table = Table()
    table.add_column("Machine", style="cyan")
    table.add_column("UW verdict", style="white")
    table.add_column("UW check", style="green")
    table.add_column("SUW verdict", style="white")
    table.add_column("SUW check", style="green")

    for name in suite.names():
        machine = suite.get(name)
        uw_report = uw.verify(machine, ())
        suw_report = suw.verify(machine, ())
        table.add_row(
            name,
            str(uw_report.verdict),
            "ok" if uw_report.ok else "FAILED",
            str(suw_report.verdict),
            "ok" if suw_report.ok else "FAILED",
        )

    console.print(table)


def demo_symcode():
    """The window code separates windows up to reversal"""
    console.print(Panel.fit("Quarterplane Demo: Symmetric Codes", style="bold magenta"))

    report = check_symcod(("_", "a"), ("q0", "qs"))
    console.print(f"   Windows E / S: {report.e_count} / {report.s_count}")
    console.print(f"   Code classes: {report.classes}, largest {report.largest_class}")
    console.print(f"   Collisions: {len(report.collisions)}")
    console.print(f"   Doubled-letter control collides: {report.negative_control_collides}")


def demo_fieldpoly():
    """A compiled table as a polynomial over F_257"""
    console.print(Panel.fit("Quarterplane Demo: Prime Field Polynomial", style="bold cyan"))

    system, _ = UwReduction().compile(MachineSuite().get("clean"), ())
    poly, embedding = embed_system(system, 257)
    report = verify_embedding(system, poly, embedding, 60)
    console.print(f"   Letters: {system.size}, degree {poly.degree()}")
    console.print(f"   Developments agree on {report.compared} diagonals: {report.ok}")


def main():
    """Run the complete Quarterplane demo"""
    console.print(
        Panel.fit(
            "Quarterplane - Dynamical Systems with Double Recursion\n"
            "Halting problems hidden in quarter-plane pictures",
            style="bold blue",
            title="Welcome to Quarterplane Demo",
        )
    )

    try:
        config = QuarterplaneConfig()
        configure_logging(config.logging.level, config.logging.json)
        out_dir = Path(tempfile.mkdtemp(prefix="quarterplane-demo-"))

        demo_development(out_dir)
        console.print("\n" + "=" * 60 + "\n")

        demo_reductions(config)
        console.print("\n" + "=" * 60 + "\n")

        demo_symcode()
        console.print("\n" + "=" * 60 + "\n")

        demo_fieldpoly()

        console.print(f"\nDemo files created in: {out_dir}")

    except Exception as e:
        console.print(f"Demo failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
