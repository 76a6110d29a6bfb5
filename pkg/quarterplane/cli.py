"""
Quarterplane Command Line Interface
"""

import sys
from pathlib import Path

import click
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .core.config import CROSSING_RULES, QuarterplaneConfig
from .core.dynsys import develop, scan_ultimately_zero, validate_system
from .core.fieldpoly import embed_system, embedding_for, load_poly, save_poly, verify_embedding
from .core.formats import load_system, meta_path, save_meta, save_system, write_development
from .core.logging_setup import configure_logging
from .core.render import RenderPalette, render_ppm
from .core.symcode import check_symcod, enum_windows
from .core.turing import load_machine, run_classify, split_word
from .reductions.profile import REDUCTIONS, profile_compile
from .reductions.suw import SuwReduction
from .reductions.uw import UwReduction
from .templates.machine_suite import MachineSuite

console = Console()


def resolve_machine(source: str, seed: int):
    """Machine from a file path, a suite name, ``random`` or ``random:<seed>``"""
    suite = MachineSuite()
    if Path(source).is_file():
        return load_machine(source)
    if source == "random":
        return suite.random_machine(seed)
    if source.startswith("random:"):
        return suite.random_machine(int(source.split(":", 1)[1]))
    return suite.get(source)


def write_compiled(system, sidecar, output) -> Path:
    path = save_system(system, output)
    save_meta(sidecar, meta_path(path))
    return path


def yes_no(value) -> str:
    if value is None:
        return "-"
    return "yes" if value else "no"


@click.group()
@click.version_option(version=__version__)
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Configuration file")
@click.option("--seed", default=0, show_default=True, help="Seed for every randomized choice")
@click.pass_context
def main(ctx, config_path, seed):
    """
    Quarterplane - Dynamical Systems with Double Recursion

    Develop rule tables, compile halting instances and check the simulations.
    """
    config = QuarterplaneConfig(config_path)
    configure_logging(config.logging.level, config.logging.json)
    ctx.obj = {"config": config, "seed": seed}


@main.command()
@click.option("--force", is_flag=True, help="Overwrite an existing configuration file")
def init(force):
    """Write a default quarterplane.yaml"""
    try:
        path = Path(QuarterplaneConfig.CONFIG_NAMES[0])
        if path.exists() and not force:
            console.print(f"{path} already exists. Use --force to overwrite it.")
            sys.exit(1)

        config = QuarterplaneConfig(str(path)) if path.exists() else QuarterplaneConfig()
        saved = config.save_config(str(path))
        console.print(f"Configuration saved to: [bold]{saved}[/bold]")

    except Exception as e:
        console.print(f"Error writing configuration: {e}")
        sys.exit(1)


@main.command()
@click.option(
    "--export", "export_dir", type=click.Path(file_okay=False), help="Write .tm files here"
)
def machines(export_dir):
    """List the sample machines"""
    try:
        suite = MachineSuite()

        table = Table(title="Sample Machines")
        table.add_column("Machine", style="cyan")
        table.add_column("Description", style="white")
        table.add_column("UW", style="green")
        table.add_column("SUW", style="green")

        for name, info in suite.available().items():
            table.add_row(
                name,
                info["description"],
                yes_no(info["uw_accept"]),
                yes_no(info["suw_accept"]),
            )

        console.print(table)

        if export_dir:
            written = suite.export(export_dir)
            console.print(f"Exported {len(written)} machines to: [bold]{export_dir}[/bold]")

    except Exception as e:
        console.print(f"Error listing machines: {e}")
        sys.exit(1)


@main.command("compile-uw")
@click.argument("machine")
@click.argument("word")
@click.option("--output", "-o", required=True, type=click.Path(dir_okay=False), help="System file")
@click.pass_obj
def compile_uw_command(obj, machine, word, output):
    """Compile MACHINE on WORD into a UW system"""
    try:
        tm = resolve_machine(machine, obj["seed"])
        system, meta = UwReduction(obj["config"]).compile(tm, split_word(word))
        path = write_compiled(system, meta.sidecar(system), output)

        console.print(
            Panel.fit(
                f"Letters: {system.size}\n"
                f"Rules: {len(system.table)}\n"
                f"Seeded diagonal: {meta.d_w}\n"
                f"Meta: {meta_path(path)}",
                title=f"UW system for {tm.name}",
                border_style="green",
            )
        )

    except Exception as e:
        console.print(f"Error compiling: {e}")
        sys.exit(1)


@main.command("compile-suw")
@click.argument("machine")
@click.argument("word")
@click.option("--output", "-o", required=True, type=click.Path(dir_okay=False), help="System file")
@click.option("--crossing", type=click.Choice(CROSSING_RULES), help="Rule for the L move at cell 0")
@click.pass_obj
def compile_suw_command(obj, machine, word, output, crossing):
    """Compile MACHINE on WORD into a symmetric SUW system"""
    try:
        tm = resolve_machine(machine, obj["seed"])
        system, meta = SuwReduction(obj["config"]).compile(tm, split_word(word), crossing)
        path = write_compiled(system, meta.sidecar(system), output)

        console.print(
            Panel.fit(
                f"Letters: {system.size}\n"
                f"Rules: {len(system.table)}\n"
                f"Seeded diagonal: {meta.d_w}\n"
                f"Level-7 terms: {meta.level7_terms}\n"
                f"Crossing rule: {meta.crossing_rule}\n"
                f"Meta: {meta_path(path)}",
                title=f"SUW system for {tm.name}",
                border_style="green",
            )
        )

    except Exception as e:
        console.print(f"Error compiling: {e}")
        sys.exit(1)


@main.command("develop")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "diagonals", required=True, type=click.IntRange(min=0), help="Last diagonal")
@click.option("--dump", is_flag=True, help="Write the development to stdout")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the development here")
@click.option("--ppm", type=click.Path(dir_okay=False), help="Render the development as PPM")
@click.pass_obj
def develop_command(obj, system_file, diagonals, dump, output, ppm):
    """Develop SYSTEM_FILE up to diagonal N"""
    try:
        system = load_system(system_file, obj["config"].development.dense_table_limit)

        if output:
            with open(output, "w", encoding="ascii") as f:
                count = write_development(develop(system, diagonals), f)
            console.print(f"Wrote {count} diagonals to: [bold]{output}[/bold]")
        elif dump:
            write_development(develop(system, diagonals), click.get_text_stream("stdout"))

        if ppm:
            render_ppm(
                develop(system, diagonals),
                RenderPalette.for_system(system),
                ppm,
                diagonals,
                system.zero,
            )
            console.print(f"Image saved to: [bold]{ppm}[/bold]")

        if not (output or dump or ppm):
            last = None
            for last in develop(system, diagonals):
                pass
            nonzero = int((last.interior != system.zero).sum()) if last is not None else 0
            console.print(f"D {diagonals}: {nonzero} non-zero interior cells")

    except Exception as e:
        console.print(f"Error developing: {e}")
        sys.exit(1)


@main.command("run-tm")
@click.argument("machine")
@click.argument("word")
@click.option("--max-steps", type=click.IntRange(min=0), help="Step bound")
@click.pass_obj
def run_tm_command(obj, machine, word, max_steps):
    """Run MACHINE on WORD and classify the run"""
    try:
        tm = resolve_machine(machine, obj["seed"])
        bound = max_steps if max_steps is not None else obj["config"].verification.max_steps
        report = run_classify(tm, split_word(word), bound)

        table = Table(title=f"Run of {tm.name}")
        table.add_column("Property", style="cyan")
        table.add_column("Value", style="white")
        table.add_row("Halted", yes_no(report.halted))
        table.add_row("Steps", str(report.steps))
        table.add_row("Timed out", yes_no(report.timed_out))
        table.add_row("Clean at halt", yes_no(report.tape_clean_at_halt))
        table.add_row("Visited negative side", yes_no(report.visited_negative))
        step = report.first_negative_move_step
        table.add_row("First negative move", "-" if step is None else str(step))
        table.add_row(
            "Clean at first negative move", yes_no(report.tape_clean_at_first_negative_move)
        )
        table.add_row("UW accept", yes_no(report.uw_accept))
        table.add_row("SUW accept", yes_no(report.suw_accept))
        console.print(table)

    except Exception as e:
        console.print(f"Error running machine: {e}")
        sys.exit(1)


def print_verification(title, report, rows):
    table = Table(title=title)
    table.add_column("Check", style="cyan")
    table.add_column("Result", style="white")
    for name, value in rows:
        table.add_row(name, value)
    console.print(table)

    if report.ok:
        console.print("Simulation verified.")
        return
    try:
        report.raise_for_status()
    except Exception as e:
        console.print(f"Verification failed: {e}")
    sys.exit(1)


@main.command("verify-uw")
@click.argument("machine")
@click.argument("word")
@click.option("-n", "diagonals", type=click.IntRange(min=2), help="Diagonals to develop")
@click.option("-t", "steps", type=click.IntRange(min=0), help="Machine steps to compare")
@click.pass_obj
def verify_uw_command(obj, machine, word, diagonals, steps):
    """Compile MACHINE on WORD and check the UW simulation"""
    try:
        tm = resolve_machine(machine, obj["seed"])
        report = UwReduction(obj["config"]).verify(tm, split_word(word), steps, diagonals)
        rows = [
            ("Steps compared", str(report.checked)),
            ("Mismatch", str(report.mismatch or "none")),
            ("Bottom free", yes_no(report.bottom_free)),
            (
                "Margins",
                "ok" if report.margin_violation is None else f"D {report.margin_violation}",
            ),
            ("Verdict", str(report.verdict)),
            ("UW accept", yes_no(report.run.uw_accept)),
            ("Agreement", yes_no(report.agreement)),
        ]
    except Exception as e:
        console.print(f"Error verifying: {e}")
        sys.exit(1)

    print_verification(f"UW verification of {tm.name}", report, rows)


@main.command("verify-suw")
@click.argument("machine")
@click.argument("word")
@click.option("-n", "diagonals", type=click.IntRange(min=2), help="Diagonals to develop")
@click.option("-t", "steps", type=click.IntRange(min=0), help="Machine steps to compare")
@click.option("--crossing", type=click.Choice(CROSSING_RULES), help="Rule for the L move at cell 0")
@click.pass_obj
def verify_suw_command(obj, machine, word, diagonals, steps, crossing):
    """Compile MACHINE on WORD and check the mirrored SUW simulation"""
    try:
        tm = resolve_machine(machine, obj["seed"])
        report = SuwReduction(obj["config"]).verify(
            tm, split_word(word), steps, diagonals, crossing
        )
        rows = [
            ("Steps compared", str(report.checked)),
            ("Mismatch", str(report.mismatch or "none")),
            ("Symmetric", yes_no(report.symmetric)),
            ("Bottom free", yes_no(report.bottom_free)),
            ("Minimum margin", str(report.min_margin)),
            ("Verdict", str(report.verdict)),
            ("SUW accept", yes_no(report.suw_accept)),
            ("Agreement", yes_no(report.agreement)),
        ]
    except Exception as e:
        console.print(f"Error verifying: {e}")
        sys.exit(1)

    print_verification(f"SUW verification of {tm.name}", report, rows)


@main.command("certify-zero")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "diagonals", type=click.IntRange(min=2), help="Scan bound")
@click.pass_obj
def certify_zero_command(obj, system_file, diagonals):
    """Scan SYSTEM_FILE for an ultimately-zero certificate"""
    try:
        config = obj["config"]
        system = load_system(system_file, config.development.dense_table_limit)
        verdict = scan_ultimately_zero(system, diagonals or config.development.scan_bound)

        console.print(f"Verdict: [bold]{verdict}[/bold]")
        for note in verdict.scan_log():
            console.print(f"  {note}")

    except Exception as e:
        console.print(f"Error scanning: {e}")
        sys.exit(1)


@main.command("validate")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "diagonals", type=click.IntRange(min=0), help="Probe bound")
@click.pass_obj
def validate_command(obj, system_file, diagonals):
    """Check totality, symmetry and letter leaks of SYSTEM_FILE"""
    try:
        config = obj["config"]
        system = load_system(system_file, config.development.dense_table_limit)
        probe = config.development.scan_bound if diagonals is None else diagonals
        report = validate_system(system, probe)
    except Exception as e:
        console.print(f"Error validating: {e}")
        sys.exit(1)

    for violation in report.violations():
        console.print(f"Violation: {violation}")
    if not report.ok:
        sys.exit(1)
    console.print(f"System is valid up to diagonal {report.probe}.")


@main.command("interpolate")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-p", "modulus", required=True, type=int, help="Prime modulus")
@click.option(
    "--output", "-o", required=True, type=click.Path(dir_okay=False), help="Polynomial file"
)
@click.pass_obj
def interpolate_command(obj, system_file, modulus, output):
    """Interpolate the rule table of SYSTEM_FILE over F_p"""
    try:
        config = obj["config"]
        system = load_system(system_file, config.development.dense_table_limit)
        poly, _ = embed_system(system, modulus, config.fieldpoly.max_modulus)
        save_poly(poly, output)

        console.print(
            Panel.fit(
                f"Modulus: {poly.p}\n"
                f"Degree: {poly.degree()}\n"
                f"Symmetric: {yes_no(poly.is_symmetric())}\n"
                f"Saved to: {output}",
                title="Polynomial",
                border_style="blue",
            )
        )

    except Exception as e:
        console.print(f"Error interpolating: {e}")
        sys.exit(1)


@main.command("verify-poly")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("poly_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "diagonals", default=100, show_default=True, type=click.IntRange(min=0))
@click.pass_obj
def verify_poly_command(obj, system_file, poly_file, diagonals):
    """Compare table-driven and polynomial-driven developments"""
    try:
        system = load_system(system_file, obj["config"].development.dense_table_limit)
        poly = load_poly(poly_file)
        report = verify_embedding(system, poly, embedding_for(system, poly.p), diagonals)
    except Exception as e:
        console.print(f"Error verifying polynomial: {e}")
        sys.exit(1)

    if not report.ok:
        console.print(f"Verification failed: {report.divergence}")
        sys.exit(1)
    console.print(f"Developments agree on {report.compared} diagonals.")


@main.command("symcode-check")
@click.argument("machine")
@click.option("--brute-force", is_flag=True, help="Also fold every word of Gamma_0^8")
@click.pass_obj
def symcode_check_command(obj, machine, brute_force):
    """Check that pi8 is injective up to reversal on the windows of MACHINE"""
    try:
        tm = resolve_machine(machine, obj["seed"])
        report = check_symcod(
            tm.alphabet,
            tm.states,
            brute_force=brute_force,
            exhaustive_limit=obj["config"].symcode.exhaustive_limit,
        )

        table = Table(title=f"Symmetric code check for {tm.name}")
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="white")
        table.add_row("Level-0 letters", str(report.letters))
        table.add_row(
            "E / S / union", f"{report.e_count} / {report.s_count} / {report.union_count}"
        )
        table.add_row("Code classes", str(report.classes))
        table.add_row("Largest class", str(report.largest_class))
        table.add_row("Collisions", str(len(report.collisions)))
        table.add_row("Adjacent equal letters", str(report.adjacency_violations))
        table.add_row("Wider preimages", str(report.wider_preimages))
        table.add_row("Worst-case class", str(report.worst_case_class_size))
        table.add_row("Doubled-letter control collides", yes_no(report.negative_control_collides))
        if brute_force:
            table.add_row(
                "Exhaustive",
                report.exhaustive_skipped
                or f"{report.exhaustive_words} words, "
                f"{len(report.exhaustive_collisions)} collisions",
            )
        console.print(table)
    except Exception as e:
        console.print(f"Error checking codes: {e}")
        sys.exit(1)

    if not report.ok:
        first = (report.collisions or report.exhaustive_collisions or [None])[0]
        console.print(f"Collision found: {first}")
        sys.exit(1)


@main.command("profile-compile")
@click.argument("machine")
@click.option("--max-length", default=8, show_default=True, type=click.IntRange(min=1))
@click.option("--reduction", type=click.Choice(REDUCTIONS), default="uw", show_default=True)
@click.pass_obj
def profile_compile_command(obj, machine, max_length, reduction):
    """Measure compile cost for words of length 0..max-length"""
    try:
        tm = resolve_machine(machine, obj["seed"])
        report = profile_compile(
            tm,
            range(max_length + 1),
            reduction,
            obj["config"].verification.crossing_rule,
        )

        table = Table(title=f"{reduction.upper()} compile profile for {tm.name}")
        table.add_column("|w|", style="cyan")
        table.add_column("dW", style="white")
        table.add_column("Seconds", style="white")
        table.add_column("Letters", style="green")
        table.add_column("Rules", style="green")
        for row in report.rows:
            table.add_row(
                str(row.length),
                str(row.d_w),
                f"{row.seconds:.3f}",
                str(row.letters),
                str(row.rules),
            )
        console.print(table)

        slopes = ", ".join(f"{k} {v:.2f}" for k, v in report.exponents().items())
        console.print(f"Growth exponents against dW: {slopes}")
        if reduction == "suw":
            union = len(enum_windows(tm.alphabet, tm.states).union)
            console.print(f"Level-7 terms: {report.rows[-1].level7} (E u S has {union} windows)")

    except Exception as e:
        console.print(f"Error profiling: {e}")
        sys.exit(1)

    if not report.polynomial:
        console.print("Growth exceeds cubic.")
        sys.exit(1)


if __name__ == "__main__":
    main()
