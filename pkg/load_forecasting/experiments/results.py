""" Machine-readable (JSON) and plot-ready (CSV) experiment results.

Every file embeds the resolved run configuration: JSON documents under the
``config`` key, CSV files as leading ``# key=value`` comment lines. Output is
sorted and free of timestamps, so identical runs give identical bytes.
"""

import json
import os
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from load_forecasting.experiments.harness import AblationResult, RepeatedResult, SweepCell, SweepResult
from load_forecasting.experiments.hidden_layer import HiddenSearchResult

CSV_COLUMNS = ('grid_value', 'context', 'mean_accuracy', 'mean_mse_kwh2', 'mean_mse_norm', 'n_trials')


def _context_label(include_context: bool) -> str:
    return 'on' if include_context else 'off'


def _row(grid_value, include_context: bool, result: RepeatedResult) -> Dict[str, Any]:
    return {
        'grid_value': grid_value,
        'context': _context_label(include_context),
        'mean_accuracy': result.mean.accuracy_pct,
        'mean_mse_kwh2': result.mean.mse_kwh2,
        'mean_mse_norm': result.mean.mse_norm,
        'n_trials': result.n_trials,
    }


def sweep_frame(sweep: SweepResult) -> pd.DataFrame:
    rows = [_row(c.lag_count, c.include_context, c.result) for c in sweep.cells]
    return pd.DataFrame(rows, columns=list(CSV_COLUMNS))


def ablation_frame(ablation: AblationResult) -> pd.DataFrame:
    """ One row per dropped factor after the baseline (`grid_value` "none"),
    with the accuracy change against the baseline appended.
    """
    rows = [dict(_row('none', True, ablation.baseline), accuracy_delta=0.0)]
    rows += [dict(_row(d.factor, True, d.result), accuracy_delta=d.accuracy_delta) for d in ablation.drops]
    return pd.DataFrame(rows, columns=list(CSV_COLUMNS) + ['accuracy_delta'])


def hidden_search_frame(search: HiddenSearchResult, include_context: bool) -> pd.DataFrame:
    violating = {v.n_hidden for v in search.capacity_violations}
    rows = [dict(_row(n, include_context, r), capacity_ok=n not in violating) for n, r in search.tried]
    return pd.DataFrame(rows, columns=list(CSV_COLUMNS) + ['capacity_ok'])


def best_frame(cells: Dict[str, SweepCell]) -> pd.DataFrame:
    """ Best context-on cell per scale. """
    rows = [dict(scale=scale, **_row(c.lag_count, c.include_context, c.result)) for scale, c in cells.items()]
    return pd.DataFrame(rows, columns=['scale'] + list(CSV_COLUMNS))


def sweep_document(sweep: SweepResult) -> Dict[str, Any]:
    return {
        'kind': 'lag_sweep',
        'scale': sweep.scale,
        'cells': [{'lag_count': c.lag_count, 'context': _context_label(c.include_context),
                   **c.result.to_dict()} for c in sweep.cells],
    }


def ablation_document(ablation: AblationResult) -> Dict[str, Any]:
    return {
        'kind': 'factor_ablation',
        'scale': ablation.scale,
        'baseline': ablation.baseline.to_dict(),
        'drops': [{'factor': d.factor, 'accuracy_delta': d.accuracy_delta, **d.result.to_dict()}
                  for d in ablation.drops],
    }


def hidden_search_document(search: HiddenSearchResult) -> Dict[str, Any]:
    return {
        'kind': 'hidden_layer_search',
        'formula_candidates': search.formula_candidates.to_dict(),
        'tried': [{'n_hidden': n, **r.to_dict()} for n, r in search.tried],
        'best_by_mse': search.best_by_mse,
        'capacity_violations': [{'n_hidden': v.n_hidden, 'rule': v.rule, 'message': v.message}
                                for v in search.capacity_violations],
    }


def _ensure_parent(path):
    directory = os.path.dirname(os.fspath(path))
    if directory:
        os.makedirs(directory, exist_ok=True)


def write_json(path, document: Dict[str, Any], config: Optional[Dict[str, Any]] = None) -> None:
    doc = dict(document)
    if config is not None:
        doc['config'] = config
    _ensure_parent(path)
    with open(path, 'w') as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write('\n')


def config_header(config: Dict[str, Any]) -> List[str]:
    return [f'# {key}={_format_value(config[key])}' for key in sorted(config)]


def _format_value(value) -> str:
    if isinstance(value, (list, tuple)):
        return ','.join(str(v) for v in value)
    return str(value)


def write_csv(path, frame: pd.DataFrame, config: Optional[Dict[str, Any]] = None) -> None:
    """ Writes `frame` without its index, after the configuration comments. """
    _ensure_parent(path)
    with open(path, 'w', newline='') as f:
        for line in config_header(config or {}):
            f.write(line + '\n')
        frame.to_csv(f, index=False, lineterminator='\n')


def read_csv(path) -> pd.DataFrame:
    """ Reads a result CSV, skipping the configuration comments. """
    return pd.read_csv(path, comment='#')


def result_rows(frame: pd.DataFrame, columns: Sequence[str]) -> List[List[Any]]:
    return frame[list(columns)].values.tolist()
