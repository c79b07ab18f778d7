"""Command-line front end for the phase measurement pipeline.

Subcommands cover the pipeline end to end:

* ``povm``     print the measurement elements and, with --phi, the
               analytic outcome distribution
* ``extend``   build the extension matrix both ways (closed form and
               recursive), write both files, report residuals
* ``verify``   run the whole verification battery at one tolerance
* ``compile``  emit the Givens netlist as JSON, --verify re-multiplies
* ``simulate`` propagate a state through the direct and/or folded scheme
* ``sweep``    tabulate P(k | phi) over a phase grid with a
               guessing-probability summary
* ``compare``  direct vs folded vs analytic statistics for one state

Exit codes: 0 success, 1 usage error, 2 verification failure. Every
command is deterministic given its flags and --seed; reruns write
byte-identical files. Data goes to --out (or stdout), human-readable
progress lines to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .compiler import (
    decompose_by_elimination,
    decompose_closed,
    evaluate_netlist,
    netlist_to_json_dict,
    netlists_equal,
)
from .naimark import (
    build_extension_closed,
    build_extension_recursive,
    extension_to_csv,
    extension_to_json_dict,
    verify_naimark,
)
from .optics import (
    build_direct_scheme,
    distribution_to_csv,
    distribution_to_json_dict,
    simulate_direct,
    simulate_folded,
    slot_distribution_to_csv,
    slot_distribution_to_json_dict,
)
from .povm import (
    OutcomeDistribution,
    analytic_phase_distribution,
    guessing_probability,
    outcome_probability,
    phase_povm,
    pure_phase_state,
    random_density,
    validate_density,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation; every command consumes one of these."""

    command: str
    M: int
    phi: float | None = None
    scheme: str = "direct"
    steps: int | None = None
    state_file: str | None = None
    out: str | None = None
    output_format: str = "json"
    tolerance: float = 1e-10
    seed: int = 0
    verify: bool = False

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on bad flags; our contract says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="phasepovm",
        description="M-outcome qubit phase measurement: POVM, Naimark "
        "extension, Givens netlist, and optical simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--M", type=int, required=True, help="outcome count, a power of 2")
        p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
        p.add_argument(
            "--format",
            dest="output_format",
            choices=("json", "csv"),
            default="json",
            help="output format (default json)",
        )
        p.add_argument("--tolerance", type=float, default=1e-10, help="residual tolerance")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
        return p

    p = add("povm", "print the POVM elements, optionally with a distribution")
    p.add_argument("--phi", type=float, default=None, help="input phase in radians")

    add("extend", "build and verify the extension matrix (closed and recursive)")

    add("verify", "run the full verification battery")

    p = add("compile", "emit the Givens-rotation netlist as JSON")
    p.add_argument("--verify", action="store_true", help="re-multiply and check the round trip")

    p = add("simulate", "simulate detector statistics for one input state")
    p.add_argument("--phi", type=float, default=None, help="pure input phase in radians")
    p.add_argument("--state-file", type=str, default=None, help="JSON density matrix file")
    p.add_argument(
        "--scheme",
        choices=("direct", "folded", "both"),
        default="direct",
        help="which interferometer layout to run",
    )

    p = add("sweep", "tabulate P(k | phi) over a uniform phase grid")
    p.add_argument("--steps", type=int, required=True, help="number of grid points on [0, 2*pi)")

    p = add("compare", "compare direct, folded, and analytic statistics")
    p.add_argument("--phi", type=float, default=None, help="pure input phase in radians")
    p.add_argument("--state-file", type=str, default=None, help="JSON density matrix file")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        M=args.M,
        phi=getattr(args, "phi", None),
        scheme=getattr(args, "scheme", "direct"),
        steps=getattr(args, "steps", None),
        state_file=getattr(args, "state_file", None),
        out=args.out,
        output_format=args.output_format,
        tolerance=args.tolerance,
        seed=args.seed,
        verify=getattr(args, "verify", False),
    )


def load_density(cfg: RunConfig) -> np.ndarray:
    """Input state from --state-file (JSON [[ [re,im], ... ]]) or --phi."""
    if cfg.state_file is not None and cfg.phi is not None:
        raise ValueError("give either --phi or --state-file, not both")
    if cfg.state_file is not None:
        with open(cfg.state_file, encoding="utf-8") as fh:
            raw = json.load(fh)
        try:
            rho = np.array(
                [[complex(re, im) for re, im in row] for row in raw], dtype=complex
            )
        except (TypeError, ValueError) as exc:
            raise ValueError(
                f"state file must hold a 2x2 matrix of [re, im] pairs: {exc}"
            ) from exc
        return validate_density(rho)
    if cfg.phi is not None:
        return pure_phase_state(cfg.phi)
    raise ValueError("an input state is required: give --phi or --state-file")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _fmt_complex(v: complex) -> str:
    return f"{v.real:+.12f}{v.imag:+.12f}j"


def cmd_povm(cfg: RunConfig) -> int:
    povm = phase_povm(cfg.M)
    weight = 2.0 / povm.M
    lines = [f"phase POVM, M = {povm.M} outcomes, element weight 2/M = {weight!r}"]
    for k in range(povm.M):
        e = povm.elements[k]
        lines.append(f"Pi_{k}:")
        for row in e:
            lines.append("  [" + "  ".join(_fmt_complex(v) for v in row) + "]")
    if cfg.phi is not None:
        dist = analytic_phase_distribution(cfg.M, cfg.phi)
        lines.append(f"analytic distribution at phi = {float(cfg.phi)!r}:")
        for k, p in enumerate(dist.probabilities):
            lines.append(f"  P({k}) = {float(p)!r}")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def _extension_paths(cfg: RunConfig) -> tuple[Path, Path]:
    ext = "json" if cfg.output_format == "json" else "csv"
    base = Path(cfg.out) if cfg.out is not None else Path(f"extension_M{cfg.M}.{ext}")
    stem, suffix = base.stem, base.suffix or f".{ext}"
    return (
        base.with_name(f"{stem}_closed{suffix}"),
        base.with_name(f"{stem}_recursive{suffix}"),
    )


def cmd_extend(cfg: RunConfig) -> int:
    closed = build_extension_closed(cfg.M)
    recursive = build_extension_recursive(cfg.M)
    diff = float(np.max(np.abs(closed.Z - recursive.Z)))
    report = verify_naimark(closed, tol=cfg.tolerance, seed=cfg.seed)

    path_closed, path_recursive = _extension_paths(cfg)
    if cfg.output_format == "json":
        path_closed.write_text(_json_text(extension_to_json_dict(closed)), encoding="utf-8")
        path_recursive.write_text(
            _json_text(extension_to_json_dict(recursive)), encoding="utf-8"
        )
    else:
        path_closed.write_text(extension_to_csv(closed), encoding="utf-8")
        path_recursive.write_text(extension_to_csv(recursive), encoding="utf-8")

    _note(f"wrote {path_closed} and {path_recursive}")
    _note(f"closed vs recursive max difference: {diff:.3e}")
    _note(f"orthogonality residual:  {report.max_orthogonality_residual:.3e}")
    _note(f"norm residual:           {report.max_norm_residual:.3e}")
    _note(f"POVM block residual:     {report.max_povm_block_residual:.3e}")
    _note(f"unitarity residual:      {report.unitarity_residual:.3e}")
    _note(f"probability residual:    {report.max_probability_residual:.3e} (seed {cfg.seed})")
    ok = report.within_tolerance(cfg.tolerance) and diff <= cfg.tolerance
    _note("extension verification: " + ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_compile(cfg: RunConfig) -> int:
    if cfg.output_format != "json":
        raise ValueError("netlists are emitted as JSON only")
    net = decompose_closed(cfg.M)
    _emit(_json_text(netlist_to_json_dict(net)), cfg.out)
    _note(f"netlist for M = {cfg.M}: {len(net.elements)} elements")
    if cfg.verify:
        z = build_extension_closed(cfg.M).Z
        residual = float(
            np.max(np.abs(evaluate_netlist(net) @ z - np.eye(cfg.M)))
        )
        _note(f"round-trip residual |netlist * Z - I|: {residual:.3e}")
        if residual > cfg.tolerance:
            return EXIT_VERIFICATION
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    rho = load_density(cfg)
    status = EXIT_OK

    direct_dist = None
    if cfg.scheme in ("direct", "both"):
        direct_dist = simulate_direct(build_direct_scheme(cfg.M), rho)
    folded_sd = None
    if cfg.scheme in ("folded", "both"):
        folded_sd = simulate_folded(cfg.M, rho)

    if cfg.scheme == "both":
        disc = float(
            np.max(np.abs(folded_sd.flatten().probabilities - direct_dist.probabilities))
        )
        _note(f"max direct/folded discrepancy: {disc:.3e}")
        if disc > cfg.tolerance:
            status = EXIT_VERIFICATION

    if cfg.scheme == "folded":
        text = (
            _json_text(slot_distribution_to_json_dict(folded_sd))
            if cfg.output_format == "json"
            else slot_distribution_to_csv(folded_sd)
        )
    else:
        text = (
            _json_text(distribution_to_json_dict(direct_dist))
            if cfg.output_format == "json"
            else distribution_to_csv(direct_dist)
        )
    _emit(text, cfg.out)
    return status


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.steps is None or cfg.steps < 1:
        raise ValueError(f"steps must be a positive integer, got {cfg.steps}")
    phis = [2.0 * np.pi * i / cfg.steps for i in range(cfg.steps)]
    rows = [analytic_phase_distribution(cfg.M, phi) for phi in phis]
    guess = guessing_probability(cfg.M)

    if cfg.output_format == "json":
        payload = {
            "M": cfg.M,
            "steps": cfg.steps,
            "guessing_probability": float(guess),
            "rows": [
                {"phi": float(phi), "probabilities": [float(p) for p in d.probabilities]}
                for phi, d in zip(phis, rows)
            ],
        }
        text = _json_text(payload)
    else:
        header = "phi," + ",".join(f"p_{k}" for k in range(cfg.M))
        lines = [header]
        for phi, d in zip(phis, rows):
            lines.append(
                f"{float(phi)!r}," + ",".join(f"{float(p)!r}" for p in d.probabilities)
            )
        text = "\n".join(lines) + "\n"
    _emit(text, cfg.out)
    _note(f"guessing probability: {guess!r}")
    return EXIT_OK


def _analytic_distribution_for(m: int, rho: np.ndarray) -> OutcomeDistribution:
    povm = phase_povm(m)
    p = np.array([outcome_probability(povm, k, rho) for k in range(m)])
    return OutcomeDistribution(M=m, probabilities=p)


def cmd_compare(cfg: RunConfig) -> int:
    rho = load_density(cfg)
    analytic = _analytic_distribution_for(cfg.M, rho)
    direct = simulate_direct(build_direct_scheme(cfg.M), rho)
    residuals = {
        "direct_vs_analytic": float(
            np.max(np.abs(direct.probabilities - analytic.probabilities))
        )
    }
    if cfg.M > 2:
        folded = simulate_folded(cfg.M, rho).flatten()
        residuals["folded_vs_direct"] = float(
            np.max(np.abs(folded.probabilities - direct.probabilities))
        )
    for name, value in residuals.items():
        _note(f"{name}: {value:.3e}")
    payload = {
        "M": cfg.M,
        "tolerance": cfg.tolerance,
        "residuals": residuals,
        "passed": all(v <= cfg.tolerance for v in residuals.values()),
    }
    _emit(_json_text(payload), cfg.out)
    return EXIT_OK if payload["passed"] else EXIT_VERIFICATION


def cmd_verify(cfg: RunConfig) -> int:
    """Whole-pipeline battery: extension, netlist, and both simulators."""
    checks: dict[str, float] = {}

    closed = build_extension_closed(cfg.M)
    recursive = build_extension_recursive(cfg.M)
    checks["closed_vs_recursive"] = float(np.max(np.abs(closed.Z - recursive.Z)))

    report = verify_naimark(closed, tol=cfg.tolerance, seed=cfg.seed)
    checks["orthogonality"] = report.max_orthogonality_residual
    checks["norms"] = report.max_norm_residual
    checks["povm_blocks"] = report.max_povm_block_residual
    checks["unitarity"] = report.unitarity_residual
    checks["probability_constraint"] = report.max_probability_residual

    net = decompose_closed(cfg.M)
    checks["netlist_round_trip"] = float(
        np.max(np.abs(evaluate_netlist(net) @ closed.Z - np.eye(cfg.M)))
    )
    elim = decompose_by_elimination(closed)
    checks["elimination_vs_closed_matrix"] = float(
        np.max(np.abs(evaluate_netlist(elim) - evaluate_netlist(net)))
    )
    structural = netlists_equal(net, elim, tol=cfg.tolerance)

    rng = np.random.default_rng(cfg.seed)
    scheme = build_direct_scheme(cfg.M)
    sim_residual = 0.0
    folded_residual = 0.0
    for _ in range(20):
        rho = random_density(rng)
        analytic = _analytic_distribution_for(cfg.M, rho)
        direct = simulate_direct(scheme, rho)
        sim_residual = max(
            sim_residual,
            float(np.max(np.abs(direct.probabilities - analytic.probabilities))),
        )
        if cfg.M > 2:
            folded = simulate_folded(cfg.M, rho).flatten()
            folded_residual = max(
                folded_residual,
                float(np.max(np.abs(folded.probabilities - direct.probabilities))),
            )
    checks["direct_vs_analytic"] = sim_residual
    if cfg.M > 2:
        checks["folded_vs_direct"] = folded_residual

    checks["guessing_probability"] = abs(guessing_probability(cfg.M) - 2.0 / cfg.M)

    passed = structural and all(v <= cfg.tolerance for v in checks.values())
    for name, value in checks.items():
        verdict = "ok" if value <= cfg.tolerance else "FAIL"
        _note(f"{name}: {value:.3e} [{verdict}]")
    _note(f"elimination netlist structurally equal: {structural}")
    _note("verification: " + ("PASS" if passed else "FAIL"))

    payload = {
        "M": cfg.M,
        "seed": cfg.seed,
        "tolerance": cfg.tolerance,
        "checks": checks,
        "elimination_structural_match": structural,
        "passed": passed,
    }
    _emit(_json_text(payload), cfg.out)
    return EXIT_OK if passed else EXIT_VERIFICATION


_COMMANDS = {
    "povm": cmd_povm,
    "extend": cmd_extend,
    "verify": cmd_verify,
    "compile": cmd_compile,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
