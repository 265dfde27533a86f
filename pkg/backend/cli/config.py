"""Command line parsing: flags, an optional JSON config file, and per-command defaults.

Precedence is flag > config file > command default. Module sources are either
``--sig r,s --module TEXT`` or ``--alg FILE`` holding a module spec or a full
module dump.
"""

import argparse
import json
import os
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

from asymptotics.leading_coefficient import canonical_convention
from clifford_rep.modules import CliffordModule, ModuleSpec, Signature
from heat_trace.totals import TraceControls

ModuleSource = Union[ModuleSpec, CliffordModule]

SCENARIOS = ("pair-12d", "family-11d", "family-20d", "heisenberg-match")

SOURCE_COMMANDS = ("dump-module", "dump-algebra", "trace", "spectrum", "compare", "asymptotics", "probe-expansion")

FORMATS: Dict[str, Tuple[str, ...]] = {
    "trace": ("csv", "json"),
    "spectrum": ("csv", "json"),
    "probe-expansion": ("csv", "json"),
}

DEFAULTS: Dict[str, dict] = {
    "trace": {"t": (0.1, 0.5, 1.0), "tol": 1e-12},
    "spectrum": {"cutoff": 200.0},
    "compare": {"t": (0.1, 0.25, 0.5, 1.0, 2.0), "tol": 1e-12},
    "family": {"m": 1},
    "asymptotics": {"convention": "unit"},
    "probe-expansion": {"t": (0.2, 0.15, 0.1, 0.07, 0.05), "precision": "extended", "min_slope": 6.0},
}


class UsageError(Exception):
    """Bad command line or config file; exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    source: Optional[ModuleSource] = None
    source_b: Optional[ModuleSource] = None
    controls: TraceControls = field(default_factory=TraceControls)
    t_values: Tuple[float, ...] = ()
    output: Optional[str] = None
    fmt: str = "json"
    tol: float = 1e-12
    laplacian: bool = False
    cutoff: Optional[float] = None
    m: Optional[int] = None
    signature: Optional[Signature] = None
    max_dim: Optional[int] = None
    convention: str = "unit"
    injectivity: Optional[int] = None
    min_slope: float = 6.0
    scenario: Optional[str] = None


def _float_list(text) -> Tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        values = tuple(float(v) for v in text)
    else:
        values = tuple(float(part) for part in str(text).split(",") if part.strip())
    if not values:
        raise ValueError("empty list")
    return values


def _signature(text) -> Signature:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(",")
    if len(parts) != 2:
        raise ValueError(f"expected r,s, got {text!r}")
    return Signature(int(parts[0]), int(parts[1]))


def _add_source(parser: argparse.ArgumentParser, suffix: str = "") -> None:
    dest = suffix.replace("-", "_")
    parser.add_argument(f"--sig{suffix}", dest=f"sig{dest}", help="signature r,s")
    parser.add_argument(f"--module{suffix}", dest=f"module{dest}", help="minimal | p+:a,p-:b | p++:a,...")
    parser.add_argument(f"--alg{suffix}", dest=f"alg{dest}", help="JSON module spec or module dump")


def _add_controls(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t", help="comma-separated t values")
    parser.add_argument("--tol", type=float, help="tail / comparison tolerance")
    parser.add_argument("--radius", type=int, help="starting lattice radius")
    parser.add_argument("--theta-radius", dest="theta_radius", type=int)
    parser.add_argument("--rel-tol", dest="rel_tol", type=float, help="tail tolerance relative to the n=0 term")
    parser.add_argument("--precision", choices=("double", "extended"))


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output file (stdout when omitted)")
    parser.add_argument("--format", dest="format", choices=("csv", "json"))
    parser.add_argument("--config", help="JSON file with default values for these flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="htype", description="Pseudo H-type nilmanifold spectral engine")
    commands = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    commands.required = True
    parser.command_parsers = {}

    def command(name, help_text):
        sub = commands.add_parser(name, help=help_text, argument_default=argparse.SUPPRESS)
        _add_output(sub)
        parser.command_parsers[name] = sub
        return sub

    for name, help_text in (("dump-module", "build and verify a Clifford module"),
                            ("dump-algebra", "structure constants of the H-type algebra")):
        _add_source(command(name, help_text))

    trace = command("trace", "total heat trace with tail bounds")
    _add_source(trace)
    _add_controls(trace)
    trace.add_argument("--laplacian", action="store_true")

    spectrum = command("spectrum", "explicit spectrum for s = 0")
    _add_source(spectrum)
    spectrum.add_argument("--cutoff", type=float)

    compare = command("compare", "isospectrality of two modules")
    _add_source(compare)
    _add_source(compare, "-b")
    _add_controls(compare)
    compare.add_argument("--laplacian", action="store_true")

    classify = command("classify", "N_{r,s} against N_{s,r} for minimal modules")
    classify.add_argument("--sig", dest="sig")
    classify.add_argument("--max-dim", dest="max_dim", type=int)

    family = command("family", "isospectral non-isomorphic family")
    family.add_argument("--sig", dest="sig")
    family.add_argument("--m", type=int)
    _add_controls(family)

    asymptotics = command("asymptotics", "leading coefficient and Heisenberg match")
    _add_source(asymptotics)
    asymptotics.add_argument("--convention", choices=("paper", "unit", "lebesgue"))
    asymptotics.add_argument("--injectivity", type=int, help="also scan N + d = K")

    probe = command("probe-expansion", "decay of the trace difference to the matched Heisenberg manifold")
    _add_source(probe)
    _add_source(probe, "-b")
    _add_controls(probe)
    probe.add_argument("--min-slope", dest="min_slope", type=float)

    reproduce = command("reproduce", "named example scenarios")
    reproduce.add_argument("scenario", choices=SCENARIOS)
    _add_controls(reproduce)
    return parser


def _load_json(path: str, flag: str) -> dict:
    if not os.path.isfile(path):
        raise UsageError(f"{flag}: no such file {path!r}")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: {path!r} is not valid JSON ({exc})") from exc


def _resolve_source(values: dict, suffix: str, flag_suffix: str) -> Optional[ModuleSource]:
    sig_text = values.get(f"sig{suffix}")
    module_text = values.get(f"module{suffix}")
    alg_path = values.get(f"alg{suffix}")
    try:
        sig = _signature(sig_text) if sig_text is not None else None
    except ValueError as exc:
        raise UsageError(f"--sig{flag_suffix}: {exc}") from exc
    if alg_path is None:
        if sig is None:
            if module_text is not None:
                raise UsageError(f"--module{flag_suffix} needs --sig{flag_suffix}")
            return None
        try:
            return ModuleSpec.parse(sig, module_text or "minimal")
        except ValueError as exc:
            raise UsageError(f"--module{flag_suffix}: {exc}") from exc

    if module_text is not None:
        raise UsageError(f"--module{flag_suffix} conflicts with --alg{flag_suffix}")
    payload = _load_json(alg_path, f"--alg{flag_suffix}")
    try:
        source = CliffordModule.from_dict(payload) if "generators" in payload else ModuleSpec.from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"--alg{flag_suffix}: {alg_path!r} is not a module spec or module dump ({exc})") from exc
    if sig is not None and sig != source.signature:
        raise UsageError(f"--sig{flag_suffix} {sig} conflicts with --alg{flag_suffix} signature {source.signature}")
    return source


def parse_config(argv: Sequence[str], config_file: Optional[str] = None) -> RunConfig:
    flags = vars(build_parser().parse_args(list(argv)))
    command = flags.pop("command")
    path = flags.pop("config", None) or config_file
    from_file = _load_json(path, "--config") if path else {}
    if not isinstance(from_file, dict):
        raise UsageError("--config: expected a JSON object")
    allowed = {action.dest for action in _command_parser(command)._actions} - {"help", "config"}
    unknown = sorted(set(from_file) - allowed)
    if unknown:
        raise UsageError(f"--config: unknown keys {unknown} for {command}")
    values = {**DEFAULTS.get(command, {}), **from_file, **flags}

    fmt = values.get("format") or FORMATS.get(command, ("json",))[0]
    if fmt not in FORMATS.get(command, ("json",)):
        raise UsageError(f"--format {fmt} is not available for {command}")

    try:
        t_values = _float_list(values["t"]) if "t" in values else ()
    except ValueError as exc:
        raise UsageError(f"--t: {exc}") from exc
    try:
        controls = TraceControls(
            lattice_radius=int(values.get("radius", 4)),
            theta_radius=int(values.get("theta_radius", 64)),
            tail_tolerance=float(values.get("tol", 1e-13)),
            precision=values.get("precision", "double"),
            relative_tolerance=values.get("rel_tol"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    source = source_b = None
    if command in SOURCE_COMMANDS:
        source = _resolve_source(values, "", "")
        source_b = _resolve_source(values, "_b", "-b")
    if command in SOURCE_COMMANDS and source is None:
        raise UsageError(f"{command} needs --sig or --alg")
    if command == "compare" and source_b is None:
        raise UsageError("compare needs --sig-b or --alg-b")

    signature = None
    if command in ("classify", "family") and values.get("sig") is not None:
        try:
            signature = _signature(values["sig"])
        except ValueError as exc:
            raise UsageError(f"--sig: {exc}") from exc
    if command == "family" and signature is None:
        raise UsageError("family needs --sig")
    if command == "classify" and signature is None and values.get("max_dim") is None:
        raise UsageError("classify needs --sig or --max-dim")
    try:
        convention = canonical_convention(values.get("convention", "unit"))
    except ValueError as exc:
        raise UsageError(f"--convention: {exc}") from exc

    return RunConfig(
        command=command,
        source=source,
        source_b=source_b,
        controls=controls,
        t_values=t_values,
        output=values.get("out"),
        fmt=fmt,
        tol=float(values.get("tol", 1e-12)),
        laplacian=bool(values.get("laplacian", False)),
        cutoff=values.get("cutoff"),
        m=values.get("m"),
        signature=signature,
        max_dim=values.get("max_dim"),
        convention=convention,
        injectivity=values.get("injectivity"),
        min_slope=float(values.get("min_slope", 6.0)),
        scenario=values.get("scenario"),
    )


def _command_parser(command: str) -> argparse.ArgumentParser:
    return build_parser().command_parsers[command]
