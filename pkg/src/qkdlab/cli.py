"""Command-line front end: reproducible analysis and simulation runs.

Every command emits a JSON envelope carrying the tool version, an echo of
its inputs, the seed where one applies, and a timestamp (suppressible
with --no-timestamp, after which repeated runs are byte-identical).
Exit codes: 0 success, 1 usage or input error, 2 numerical
non-convergence.
"""

from __future__ import annotations

import csv
import io
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone

import click

from . import __version__, security, simulate
from .cloner import ClonerParams, phi_cloner_matrix
from .jsonio import dumps, jsonable
from .qudit import optimal_bases
from .security import CrossingError

click.UsageError.exit_code = 1  # usage errors are exit 1; exit 2 means non-convergence

_BASES = {"2": 2, "3": 3, "e": "e"}


def _envelope(command: str, inputs: dict, result, seed=None, timestamp=True) -> dict:
    env = {
        "command": command,
        "version": __version__,
        "inputs": dict(inputs),
        "seed": seed,
    }
    if os.environ.get("QKDLAB_THREADS"):
        env["inputs"]["qkdlab_threads"] = os.environ["QKDLAB_THREADS"]
    if timestamp:
        env["timestamp"] = datetime.now(timezone.utc).isoformat()
    env["result"] = jsonable(result)
    return env


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


def _parse_params(spec: str) -> ClonerParams:
    parts = [float(p) for p in spec.split(",")]
    if len(parts) == 3:
        v, x, y = parts
        return ClonerParams(v, x, y, y)
    if len(parts) == 4:
        return ClonerParams(*parts)
    raise click.BadParameter(f"expected v,x,y[,z], got {spec!r}")


def _optimal_attack_params() -> ClonerParams:
    res = security.crossing_point("3deb")
    return res.cloner_params().normalized()


def _parse_channel(spec: str) -> simulate.Channel:
    low = spec.strip().lower()
    if low == "ideal":
        return simulate.IdealChannel()
    if low.startswith(("depol:", "depolarizing:")):
        try:
            v = float(low.split(":", 1)[1])
        except ValueError:
            raise click.BadParameter(f"bad visibility in {spec!r}")
        return simulate.DepolarizingChannel(v)
    if low.startswith("clone:"):
        arg = spec.split(":", 1)[1]
        if arg.strip().lower() == "optimal":
            return simulate.CloningAttackChannel(_optimal_attack_params())
        return simulate.CloningAttackChannel(_parse_params(arg).normalized())
    raise click.BadParameter(
        f"unknown channel {spec!r}; use ideal, depol:V or clone:v,x,y[,z]|optimal")


def _parse_sifting(spec: str) -> simulate.SiftingRule:
    low = spec.strip().lower()
    if low == "same":
        return simulate.SameIndexSifting()
    if low.startswith("pairs:"):
        try:
            pairs = tuple(
                tuple(int(t) for t in chunk.split("-"))
                for chunk in low.split(":", 1)[1].split(","))
            return simulate.PairedIndexSifting(tuple((i, j) for i, j in pairs))
        except (ValueError, TypeError):
            raise click.BadParameter(f"bad sifting spec {spec!r}")
    raise click.BadParameter(f"unknown sifting rule {spec!r}; use same or pairs:i-j,...")


timestamp_option = click.option("--no-timestamp", is_flag=True,
                                help="Omit the timestamp for byte-identical reruns.")
output_option = click.option("--output", type=click.Path(dir_okay=False), default=None,
                             help="Write to a file instead of stdout.")
base_option = click.option("--base", type=click.Choice(["2", "3", "e"]), default="2",
                           show_default=True, help="Log base for information values.")


@click.group()
@click.version_option(version=__version__, prog_name="qkdlab")
def main():
    """Security analysis and simulation of the qutrit entanglement protocol."""


@main.command()
@timestamp_option
@output_option
def bases(no_timestamp, output):
    """Print the four protocol bases and their dodecagon structure."""
    specs = optimal_bases()
    result = {
        "phis": [b.phi for b in specs],
        "bases": [
            {
                "index": i,
                "phi": b.phi,
                "states": [s.to_json() for s in b.states()],
            }
            for i, b in enumerate(specs)
        ],
        "dodecagon_angles": sorted(
            (2 * 3.141592653589793 * l / 3 + b.phi) % (2 * 3.141592653589793)
            for b in specs for l in range(3)),
    }
    _emit(dumps(_envelope("bases", {}, result, timestamp=not no_timestamp)), output)


@main.command("cloner-eval")
@click.option("--params", "params_spec", required=True,
              help="Cloner parameters v,x,y[,z], or 'optimal'.")
@click.option("--normalize/--no-normalize", default=True, show_default=True,
              help="Rescale the parameters onto the normalization surface.")
@base_option
@timestamp_option
@output_option
def cloner_eval(params_spec, normalize, base, no_timestamp, output):
    """Fidelities, disturbances and information quantities of one cloner."""
    if params_spec.strip().lower() == "optimal":
        params = _optimal_attack_params()
    else:
        params = _parse_params(params_spec)
        if normalize:
            params = params.normalized()
    try:
        report = security.info_report(params, base=_BASES[base])
        matrix = phi_cloner_matrix(params)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    result = asdict(report)
    result["amplitude_matrix"] = matrix.to_json()
    inputs = {"params": {"v": params.v, "x": params.x, "y": params.y, "z": params.z},
              "base": base, "normalize": normalize}
    _emit(dumps(_envelope("cloner-eval", inputs, result, timestamp=not no_timestamp)),
          output)


@main.command()
@click.option("--preset", default="3deb", show_default=True,
              help="Protocol preset: 3deb, universal, 2mub or qubit.")
@base_option
@timestamp_option
@output_option
def crossing(preset, base, no_timestamp, output):
    """Solve for the information crossing point of a protocol preset."""
    try:
        preset_obj = security.resolve_preset(preset)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    try:
        result = security.crossing_point(preset_obj, base=_BASES[base])
    except CrossingError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    inputs = {"preset": preset_obj.name, "base": base}
    _emit(dumps(_envelope("crossing", inputs, result, timestamp=not no_timestamp)),
          output)


@main.command()
@timestamp_option
@output_option
def symmetric(no_timestamp, output):
    """Largest fidelity at which both clones are equally good."""
    try:
        result = security.symmetric_point("3deb")
    except CrossingError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    _emit(dumps(_envelope("symmetric", {"preset": "3deb"}, result,
                          timestamp=not no_timestamp)), output)


@main.command()
@timestamp_option
@output_option
def thresholds(no_timestamp, output):
    """Visibility/fidelity threshold constants and their relations."""
    _emit(dumps(_envelope("thresholds", {}, security.thresholds(),
                          timestamp=not no_timestamp)), output)


@main.command()
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@timestamp_option
@output_option
def table(fmt, no_timestamp, output):
    """Acceptable-error-rate comparison across the four protocols."""
    try:
        rows = security.error_rate_table()
    except CrossingError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["protocol", "f_a_star", "error_rate", "paper_value", "delta"])
        for r in rows:
            writer.writerow([r.protocol, f"{r.f_a_star:.10g}", f"{r.error_rate:.10g}",
                             f"{r.paper_value:.10g}", f"{r.delta:.10g}"])
        _emit(buf.getvalue().rstrip("\n"), output)
    else:
        _emit(dumps(_envelope("table", {"format": fmt}, rows,
                              timestamp=not no_timestamp)), output)


@main.command("simulate")
@click.option("--rounds", type=int, default=None, help="Number of protocol rounds.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--channel", "channel_spec", default="ideal", show_default=True,
              help="ideal | depol:V | clone:v,x,y[,z] | clone:optimal")
@click.option("--sifting", "sifting_spec", default="same", show_default=True,
              help="same | pairs:i-j,i-j,...")
@click.option("--alice-weights", default=None, help="Four comma-separated weights.")
@click.option("--bob-weights", default=None, help="Four comma-separated weights.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Read the whole SimConfig from a JSON file instead.")
@click.option("--dump-csv", type=click.Path(dir_okay=False), default=None,
              help="Write per-round (round,basis_i,basis_j,a,b) rows to a CSV file.")
@timestamp_option
@output_option
def simulate_cmd(rounds, seed, channel_spec, sifting_spec, alice_weights, bob_weights,
                 config_path, dump_csv, no_timestamp, output):
    """Run one Monte Carlo session and report its statistics."""

    def parse_weights(spec):
        if spec is None:
            return (0.25, 0.25, 0.25, 0.25)
        return tuple(float(p) for p in spec.split(","))

    try:
        if config_path is not None:
            import json as _json
            with open(config_path) as fh:
                config = simulate.SimConfig.from_json(_json.load(fh))
            seed = config.seed
        else:
            if rounds is None:
                raise click.UsageError("--rounds is required (or pass --config)")
            if rounds < 1:
                raise click.UsageError("--rounds must be at least 1")
            config = simulate.SimConfig(
                rounds=rounds, seed=seed,
                channel=_parse_channel(channel_spec),
                alice_weights=parse_weights(alice_weights),
                bob_weights=parse_weights(bob_weights),
                sifting=_parse_sifting(sifting_spec))
        if config.rounds < 1:
            raise click.UsageError("rounds must be at least 1")
    except ValueError as exc:
        raise click.UsageError(str(exc))

    result = simulate.run_session(config, keep_rounds=dump_csv is not None)
    if dump_csv:
        with open(dump_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["round", "basis_i", "basis_j", "a", "b"])
            writer.writerows(result.rounds_data.tolist())

    payload = {
        "rounds": result.rounds,
        "sifted_count": result.sifted_count,
        "sifted_fraction": result.sifted_fraction,
        "qber": result.qber,
        "qber_se": result.qber_se,
        "basis_correlation_matrix": result.basis_correlation_matrix,
        "empirical_i_ae": result.empirical_i_ae,
        "raw_counts": result.raw_counts,
    }
    inputs = {"rounds": config.rounds, "channel": channel_spec,
              "sifting": sifting_spec, "alice_weights": config.alice_weights,
              "bob_weights": config.bob_weights}
    if config_path is not None:
        inputs["config"] = config_path
    _emit(dumps(_envelope("simulate", inputs, payload, seed=seed,
                          timestamp=not no_timestamp)), output)


@main.command()
@click.option("--rounds", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@timestamp_option
@output_option
def survey(rounds, seed, no_timestamp, output):
    """Enumerate basis pairs with perfect (relabeled) correlations."""
    if rounds < 1:
        raise click.UsageError("--rounds must be at least 1")
    config = simulate.SimConfig(rounds=rounds, seed=seed)
    result = simulate.basis_correlation_survey(config)
    payload = {
        "exact": result.exact,
        "empirical": result.empirical,
        "perfect_pairs": [list(p) for p in result.perfect_pairs],
        "conjugate_pairing": {str(j): i for j, i in result.conjugate_pairing.items()},
    }
    _emit(dumps(_envelope("survey", {"rounds": rounds}, payload, seed=seed,
                          timestamp=not no_timestamp)), output)


@main.command()
@click.option("--preset", default="3deb", show_default=True)
@click.option("--start", type=float, default=0.70, show_default=True)
@click.option("--stop", type=float, default=0.85, show_default=True)
@click.option("--points", type=int, default=151, show_default=True)
@base_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@timestamp_option
@output_option
def sweep(preset, start, stop, points, base, fmt, no_timestamp, output):
    """Best-attack information along a fidelity grid (plot-ready)."""
    try:
        preset_obj = security.resolve_preset(preset)
        rows = security.information_sweep(preset_obj, start, stop, points,
                                          base=_BASES[base])
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if fmt == "json":
        inputs = {"preset": preset_obj.name, "start": start, "stop": stop,
                  "points": points, "base": base}
        _emit(dumps(_envelope("sweep", inputs, rows, timestamp=not no_timestamp)),
              output)
        return
    param_names = list(preset_obj.free_params)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["f_a", "f_b", "i_ab", "i_ae", "r_bound"] + param_names)
    for row in rows:
        rec = [f"{row['f_a']:.10g}",
               "" if row["f_b"] is None else f"{row['f_b']:.10g}",
               f"{row['i_ab']:.10g}", f"{row['i_ae']:.10g}", f"{row['r_bound']:.10g}"]
        rec += [f"{row['params'][p]:.10g}" for p in param_names]
        writer.writerow(rec)
    _emit(buf.getvalue().rstrip("\n"), output)


if __name__ == "__main__":
    main()
