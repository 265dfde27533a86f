"""Named example runs for ``reproduce``; each payload lists the facts it checks under "facts"."""

import itertools
import logging
import math
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from asymptotics.heisenberg import heisenberg_match
from clifford_rep.modules import ModuleSpec
from clifford_rep.tables import min_admissible_dim
from common.errors import ScenarioFactError
from heat_trace.totals import TraceControls
from htype_algebra.algebra import build_algebra_from_spec
from isospectral.classification import Relation, minimal_pair_table
from isospectral.comparison import Verdict, compare_modules
from isospectral.families import generate_isospectral_family

logger = logging.getLogger(__name__)

PAIR_T_VALUES = tuple(float(t) for t in np.geomspace(0.1, 2.0, 20))
FAMILY_T_VALUES = (0.1, 0.5, 1.0, 2.0)


def _manifold_dimension(spec: ModuleSpec) -> int:
    return spec.total_dim + spec.signature.d


def pair_12d(ctrl: TraceControls, t_values: Optional[Sequence[float]] = None) -> dict:
    """Minimal (1,3) against minimal (3,1): isospectral, dimension 12, not isomorphic."""
    first, second = ModuleSpec.minimal((1, 3)), ModuleSpec.minimal((3, 1))
    t_values = tuple(t_values or PAIR_T_VALUES)
    sub = compare_modules(first, second, t_values, 1e-12, ctrl)
    full = compare_modules(first, second, t_values, 1e-12, ctrl, laplacian=True)
    entry = minimal_pair_table(3, 1)
    dims = [_manifold_dimension(first), _manifold_dimension(second)]
    return {
        "scenario": "pair-12d",
        "modules": [first.to_dict(), second.to_dict()],
        "dimensions": dims,
        "classification": entry.to_dict(),
        "sub_laplacian": sub.to_dict(),
        "laplacian": full.to_dict(),
        "facts": {
            "dimensions_are_12": dims == [12, 12],
            "non_isomorphic": entry.relation is Relation.NON_ISOMORPHIC,
            "sub_laplacian_traces_agree": sub.verdict is not Verdict.DISTINGUISHED,
            "laplacian_traces_agree": full.verdict is not Verdict.DISTINGUISHED,
        },
    }


def _family(sig, m: int, dimension: int, name: str, ctrl: TraceControls, t_values) -> dict:
    family = generate_isospectral_family(sig, m)
    t_values = tuple(t_values or FAMILY_T_VALUES)
    pairs = list(itertools.combinations(range(len(family.specs)), 2))
    reports = [compare_modules(family.specs[i], family.specs[j], t_values, 1e-10, ctrl) for i, j in pairs]
    return {
        "scenario": name,
        "family": family.to_dict(),
        "numeric": [{"pair": [i, j], **report.to_dict()} for (i, j), report in zip(pairs, reports)],
        "facts": {
            "dimension": family.manifold_dimension == dimension,
            "pairwise_non_isomorphic": family.certified,
            "traces_agree": all(report.verdict is not Verdict.DISTINGUISHED for report in reports),
        },
    }


def family_11d(ctrl: TraceControls, t_values: Optional[Sequence[float]] = None) -> dict:
    """(3,0) with m = 1: two isospectral non-isomorphic nilmanifolds of dimension 3 + 8."""
    return _family((3, 0), 1, 11, "family-11d", ctrl, t_values)


def family_20d(ctrl: TraceControls, t_values: Optional[Sequence[float]] = None) -> dict:
    return _family((3, 1), 1, 20, "family-20d", ctrl, t_values)


def heisenberg_match_12d(ctrl: TraceControls, t_values: Optional[Sequence[float]] = None) -> dict:
    """Minimal (1,3) against the Heisenberg nilmanifold H_alpha with the same leading coefficient."""
    spec = ModuleSpec.minimal((1, 3))
    match = heisenberg_match(build_algebra_from_spec(spec))
    inverted = match.matched_coefficient()
    return {
        "scenario": "heisenberg-match",
        "module": spec.to_dict(),
        "match": match.to_dict(),
        "facts": {
            "n_is_7": match.n == 7,
            "dimensions_12_15": (match.manifold_dimension, match.heisenberg_dimension) == (12, 15),
            "coefficient_inverts": math.isclose(inverted, match.cM.value, rel_tol=1e-8),
            "minimal_dimension": min_admissible_dim(1, 3) == 8,
        },
    }


SCENARIOS: Dict[str, Callable[..., dict]] = {
    "pair-12d": pair_12d,
    "family-11d": family_11d,
    "family-20d": family_20d,
    "heisenberg-match": heisenberg_match_12d,
}


def run_scenario(name: str, ctrl: TraceControls, t_values: Optional[Sequence[float]] = None) -> dict:
    payload = SCENARIOS[name](ctrl, t_values)
    failed = [fact for fact, holds in payload["facts"].items() if not holds]
    if failed:
        logger.error("Scenario %s: facts do not hold: %s", name, ", ".join(failed))
        raise ScenarioFactError(f"{name}: facts do not hold: {', '.join(failed)}", name, failed)
    payload["all_facts_hold"] = True
    return payload
