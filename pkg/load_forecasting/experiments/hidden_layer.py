""" Rules of thumb for the hidden-layer size, capacity checks, and the
trial-and-error search over candidate sizes.

The four rules, for `n_in` inputs, `n_out` outputs and `k` training samples:

* binomial sum: the smallest `m` with ``sum(C(m, i) for i in 0..n_in) > k``;
* square root: ``sqrt(n_in + n_out) + a`` for every constant `a` in 1..10;
* logarithm: ``log2(n_in)``;
* double plus one: ``2 * n_in + 1``.

Non-integer values round half up.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from load_forecasting.data.aggregate import ScaleDataset
from load_forecasting.data.datamodule import build_design_matrix
from load_forecasting.experiments.harness import ExperimentPlan, RepeatedResult, run_plans
from load_forecasting.experiments.processing import ProcessingScheduler
from load_forecasting.nn.network import Topology

_logger = logging.getLogger(__name__)

SQRT_CONSTANTS = range(1, 11)


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class FormulaCandidates:
    binomial_sum: int
    sqrt_plus_constant: Tuple[int, ...]
    log2: int
    double_plus_one: int
    log2_degenerate: bool = False

    def all_counts(self) -> Tuple[int, ...]:
        """ Every distinct candidate, ascending. """
        values = {self.binomial_sum, self.log2, self.double_plus_one, *self.sqrt_plus_constant}
        return tuple(sorted(values))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'binomial_sum': self.binomial_sum,
            'sqrt_plus_constant': list(self.sqrt_plus_constant),
            'log2': self.log2,
            'log2_degenerate': self.log2_degenerate,
            'double_plus_one': self.double_plus_one,
        }


def binomial_sum(m: int, n_in: int) -> int:
    return sum(math.comb(m, i) for i in range(n_in + 1))


def hidden_formula_candidates(n_in: int, n_out: int, k_samples: int) -> FormulaCandidates:
    for name, value in (('n_in', n_in), ('n_out', n_out), ('k_samples', k_samples)):
        if value < 1:
            raise ValueError(f'{name} must be >= 1, got {value}')

    # the sum is 2**m while m <= n_in, and grows with m
    m = 1
    while binomial_sum(m, n_in) <= k_samples:
        m += 1

    root = math.sqrt(n_in + n_out)
    log2 = _round_half_up(math.log2(n_in))
    degenerate = log2 < 1
    if degenerate:
        _logger.warning('log2 rule gives %d hidden nodes for %d input(s); using 1', log2, n_in)
        log2 = 1

    return FormulaCandidates(
        binomial_sum=m,
        sqrt_plus_constant=tuple(_round_half_up(root + a) for a in SQRT_CONSTANTS),
        log2=log2,
        double_plus_one=2 * n_in + 1,
        log2_degenerate=degenerate,
    )


@dataclass(frozen=True)
class CapacityViolation:
    n_hidden: int
    rule: str
    message: str


def check_capacity(topology: Topology, n_train: int) -> List[CapacityViolation]:
    """ Flags a hidden layer of at least `n_train - 1` nodes and a network with
    at least as many parameters as training samples.
    """
    violations = []
    if topology.n_hidden >= n_train - 1:
        violations.append(CapacityViolation(
            topology.n_hidden, 'hidden_nodes',
            f'{topology.n_hidden} hidden nodes is not fewer than {n_train - 1} (training samples - 1)'))
    if topology.parameter_count >= n_train:
        violations.append(CapacityViolation(
            topology.n_hidden, 'parameters',
            f'{topology} has {topology.parameter_count} parameters, not fewer than {n_train} training samples'))
    return violations


@dataclass(frozen=True)
class HiddenSearchResult:
    formula_candidates: FormulaCandidates
    tried: Tuple[Tuple[int, RepeatedResult], ...]
    best_by_mse: int
    capacity_violations: Tuple[CapacityViolation, ...]


def hidden_layer_search(plan: ExperimentPlan, dataset: ScaleDataset, candidate_range: Sequence[int],
                        scheduler: Optional[ProcessingScheduler] = None) -> HiddenSearchResult:
    """ Repeats `plan` for every hidden-layer size in `candidate_range` and
    picks the size with the lowest mean kWh MSE, the smaller size on ties.
    Sizes violating a capacity condition run anyway, with a warning.
    """
    candidates = sorted(set(int(n) for n in candidate_range))
    if not candidates:
        raise ValueError('candidate_range is empty')

    n_rows = len(build_design_matrix(dataset, plan.feature_spec))
    n_train = plan.split_spec.sizes(n_rows)[0]
    formulas = hidden_formula_candidates(plan.topology.n_in, plan.topology.n_out, n_train)

    violations = []
    plans = []
    for n_hidden in candidates:
        candidate = plan.with_hidden(n_hidden)
        found = check_capacity(candidate.topology, n_train)
        for v in found:
            _logger.warning('capacity: %s', v.message)
        violations.extend(found)
        plans.append(candidate)

    results = run_plans(plans, dataset, scheduler)
    tried = tuple(zip(candidates, results))
    best, _ = min(tried, key=lambda item: (item[1].mean.mse_kwh2, item[0]))
    return HiddenSearchResult(formulas, tried, best, tuple(violations))
