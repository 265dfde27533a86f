"""Dispatch a RunConfig to the engine and write the artifact."""

import itertools
import logging
import sys
from typing import Optional, Sequence

from asymptotics.heisenberg import heisenberg_match, heisenberg_trace
from asymptotics.leading_coefficient import (
    injectivity_scan,
    leading_coefficient_quadrature,
    leading_coefficient_zeta,
)
from asymptotics.probe import expansion_difference_probe
from backend.cli.config import RunConfig, UsageError, parse_config
from backend.cli.output import emit, render_csv, render_json
from backend.cli.scenarios import run_scenario
from clifford_rep.modules import CliffordModule, ModuleSpec, build_module, verify_module_axioms
from clifford_rep.tables import min_admissible_dim
from common import config as env
from common.errors import EngineError
from heat_trace.spectrum import recover_module_dimension, spectrum_s0
from heat_trace.totals import heat_trace_series, total_trace
from htype_algebra.algebra import algebra_to_dict, build_algebra, build_algebra_from_spec, jacobi_holds
from isospectral.classification import enumerate_minimal_pairs, minimal_pair_table
from isospectral.comparison import compare_modules, numeric_isospectral
from isospectral.families import generate_isospectral_family

logger = logging.getLogger(__name__)


def _algebra(source):
    if isinstance(source, CliffordModule):
        return build_algebra(source)
    return build_algebra_from_spec(source)


def _module(source) -> CliffordModule:
    return source if isinstance(source, CliffordModule) else build_module(source)


def dump_module(cfg: RunConfig) -> str:
    module = _module(cfg.source)
    report = verify_module_axioms(module)
    payload = module.to_dict()
    payload["verification"] = {
        "passed": report.passed,
        "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness, "detail": c.detail} for c in report.checks],
    }
    return render_json(payload)


def dump_algebra(cfg: RunConfig) -> str:
    alg = _algebra(cfg.source)
    payload = algebra_to_dict(alg)
    payload["jacobi"] = jacobi_holds(alg)
    payload["manifold_dimension"] = alg.manifold_dimension
    return render_json(payload)


def trace(cfg: RunConfig) -> str:
    series = heat_trace_series(_algebra(cfg.source), cfg.t_values, cfg.controls, laplacian=cfg.laplacian)
    if cfg.fmt == "csv":
        return render_csv(("t", "value", "tail_bound"), series.rows())
    return render_json({
        "laplacian": cfg.laplacian,
        "controls": cfg.controls.to_dict(),
        "rows": [{"t": t, "value": value, "tail_bound": bound} for t, value, bound in series.rows()],
    })


def spectrum(cfg: RunConfig) -> str:
    table = spectrum_s0(_algebra(cfg.source), cfg.cutoff)
    rows = [
        (entry.eigenvalue, entry.multiplicity if isinstance(entry.multiplicity, int) else str(entry.multiplicity),
         entry.series, entry.key)
        for entry in table.entries
    ]
    if cfg.fmt == "csv":
        return render_csv(("eigenvalue", "multiplicity", "series", "key"), rows)
    payload = {
        "cutoff": table.cutoff,
        "entries": [dict(zip(("eigenvalue", "multiplicity", "series", "key"), row)) for row in rows],
    }
    try:
        payload["module_dimension"] = recover_module_dimension(table)
    except EngineError as exc:
        logger.info("Module dimension not recovered: %s", exc)
    return render_json(payload)


def compare(cfg: RunConfig) -> str:
    if isinstance(cfg.source, ModuleSpec) and isinstance(cfg.source_b, ModuleSpec):
        report = compare_modules(cfg.source, cfg.source_b, cfg.t_values, cfg.tol, cfg.controls, cfg.laplacian)
    else:
        report = numeric_isospectral(
            _algebra(cfg.source), _algebra(cfg.source_b), cfg.t_values, cfg.tol, cfg.controls, cfg.laplacian
        )
    return render_json(report.to_dict())


def classify(cfg: RunConfig) -> str:
    if cfg.signature is None:
        pairs = enumerate_minimal_pairs(cfg.max_dim)
        return render_json({
            "max_manifold_dim": cfg.max_dim,
            "pairs": [{"r": p.r, "s": p.s, "manifold_dimension": p.manifold_dimension} for p in pairs],
        })
    r, s = cfg.signature.r, cfg.signature.s
    payload = minimal_pair_table(r, s).to_dict()
    payload["dimensions"] = [min_admissible_dim(r, s) + r + s, min_admissible_dim(s, r) + r + s]
    return render_json(payload)


def family(cfg: RunConfig) -> str:
    result = generate_isospectral_family(cfg.signature, cfg.m)
    payload = result.to_dict()
    if cfg.t_values:
        payload["numeric"] = [
            {"pair": [i, j], **compare_modules(first, second, cfg.t_values, cfg.tol, cfg.controls).to_dict()}
            for (i, first), (j, second) in itertools.combinations(enumerate(result.specs), 2)
        ]
    return render_json(payload)


def asymptotics(cfg: RunConfig) -> str:
    alg = _algebra(cfg.source)
    coefficient = leading_coefficient_quadrature(alg, cfg.convention)
    payload = {
        "cM": coefficient.value,
        "method": coefficient.method,
        "error": coefficient.error_estimate,
        "convention": coefficient.convention,
    }
    if alg.s == 0:
        payload["zeta"] = leading_coefficient_zeta(alg.half_dim, alg.d, cfg.convention).to_dict()
    if alg.d > 1:
        match = heisenberg_match(alg, cfg.convention)
        payload["match"] = {
            "n": match.n,
            "alpha": match.alpha,
            "dims": {"manifold": match.manifold_dimension, "heisenberg": match.heisenberg_dimension},
        }
    if cfg.injectivity is not None:
        payload["injectivity"] = injectivity_scan(cfg.injectivity).to_dict()
    return render_json(payload)


def probe_expansion(cfg: RunConfig) -> str:
    alg = _algebra(cfg.source)
    trace_a = lambda t: total_trace(alg, t, cfg.controls)
    if cfg.source_b is not None:
        alg_b = _algebra(cfg.source_b)
        trace_b = lambda t: total_trace(alg_b, t, cfg.controls)
    else:
        # the lattice sums realise the Lebesgue volume convention
        match = heisenberg_match(alg, "lebesgue")
        trace_b = lambda t: heisenberg_trace(match, t, cfg.controls)
    report = expansion_difference_probe(trace_a, trace_b, cfg.t_values, cfg.min_slope)
    if cfg.fmt == "csv":
        return render_csv(
            ("t", "D", "slope", "noise_floor"),
            [(row.t, row.difference, row.slope, row.noise_floor) for row in report.rows],
        )
    return render_json(report.to_dict())


def reproduce(cfg: RunConfig) -> str:
    return render_json(run_scenario(cfg.scenario, cfg.controls, cfg.t_values or None))


HANDLERS = {
    "dump-module": dump_module,
    "dump-algebra": dump_algebra,
    "trace": trace,
    "spectrum": spectrum,
    "compare": compare,
    "classify": classify,
    "family": family,
    "asymptotics": asymptotics,
    "probe-expansion": probe_expansion,
    "reproduce": reproduce,
}


def run(cfg: RunConfig) -> int:
    """0 on success, 1 when the engine reports an error."""
    try:
        text = HANDLERS[cfg.command](cfg)
    except EngineError as exc:
        logger.debug("Engine error in %s", cfg.command, exc_info=True)
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    emit(text, cfg.output)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, env.LOG_LEVEL, logging.INFO),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    return run(cfg)
