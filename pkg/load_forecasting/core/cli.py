import argparse
import logging
import os
import pathlib
import sys
from typing import Dict, List, Optional, Sequence

import click
import pandas as pd

from load_forecasting.core.config import RunConfig
from load_forecasting.core.constants import LAG_GRIDS, SCALES
from load_forecasting.data.aggregate import ScaleDataset, build_dataset
from load_forecasting.data.calendar import HourRange, load_holidays
from load_forecasting.data.datamodule import FeatureSpec, SplitSpec, feature_rows
from load_forecasting.data.normalization import NormParams, apply_normalizer, invert_target
from load_forecasting.data.postprocessing import predictions_frame, write_predictions
from load_forecasting.data.preprocessing import load_clean_series
from load_forecasting.data.synthetic import SynthConfig, generate
from load_forecasting.experiments import results
from load_forecasting.experiments.harness import (ExperimentPlan, best_cell, factor_ablation, fit_trial,
                                                  lag_sweep)
from load_forecasting.experiments.hidden_layer import hidden_formula_candidates, hidden_layer_search
from load_forecasting.experiments.processing import make_scheduler
from load_forecasting.nn.checkpoint import load_checkpoint, save_checkpoint
from load_forecasting.nn.log import StandardOutLogger, results_table
from load_forecasting.nn.network import Topology, predict
from load_forecasting.nn.train import TrainConfig

_logger = logging.getLogger(__name__)

RESULT_HEADERS = ['GRID', 'CONTEXT', 'ACCURACY (%)', 'MSE (kWh^2)', 'MSE (norm)', 'TRIALS']


def _split_arg(text: str):
    return tuple(float(v) for v in text.split(','))


def _range_arg(text: str) -> List[int]:
    """ `a:b` (inclusive) or a comma separated list. """
    if ':' in text:
        lo, hi = text.split(':', 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(',')]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', dest='config_file', type=pathlib.Path, default=None,
                        help='Flat key=value file with run settings; flags override it')
    common.add_argument('--seed', type=int, default=None, help='Seed of the first trial')
    common.add_argument('--silent', action='store_true', help='Minimize stdout output')
    common.add_argument('--verbose', action='store_true', help='Log progress messages')
    return common


def _data_args(parser: argparse.ArgumentParser, scale_choices: Sequence[str] = SCALES):
    paths = parser.add_argument_group('Data')
    paths.add_argument('--in', dest='data_dir', type=str, default=None,
                       help='Directory with consumption.csv, weather.csv and holidays.txt')
    paths.add_argument('--holidays', dest='holiday_file', type=os.path.abspath, default=None,
                       help='Holiday list, one YYYY-MM-DD date per line (default: holidays.txt in --in)')
    paths.add_argument('--dataset', type=pathlib.Path, default=None,
                       help='Aggregated dataset CSV, used instead of --in')
    paths.add_argument('--start', dest='range_start', type=str, default=None, help='First hour of the data range')
    paths.add_argument('--end', dest='range_end', type=str, default=None, help='End of the data range (exclusive)')
    paths.add_argument('--scale', choices=list(scale_choices), default=None)


def _feature_args(parser: argparse.ArgumentParser):
    features = parser.add_argument_group('Features')
    features.add_argument('--lags', dest='lag_count', type=int, default=None, help='Number of lagged periods')
    features.add_argument('--no-context', dest='include_context', action='store_false', default=None,
                          help='Leave out the context factors')
    features.add_argument('--drop-factor', dest='drop_factors', action='append', default=None,
                          help='Leave out one context factor (repeatable)')


def _train_args(parser: argparse.ArgumentParser):
    training = parser.add_argument_group('Training')
    training.add_argument('--hidden', dest='n_hidden', type=int, default=None, help='Hidden-layer size')
    training.add_argument('--learning_rate', '--lr', dest='learning_rate', type=float, default=None)
    training.add_argument('--epochs', dest='max_epochs', type=int, default=None, help='Maximum training epochs')
    training.add_argument('--patience', type=int, default=None, help='Early-stopping patience in epochs')
    training.add_argument('--split', type=_split_arg, default=None, help='Train,validation,test fractions')
    training.add_argument('--repeat', dest='repeat_count', type=int, default=None,
                          help='Seeded trials per experiment cell')
    training.add_argument('--jobs', type=int, default=None, help='Worker processes running trials')


def get_parser() -> argparse.ArgumentParser:
    PARSER = argparse.ArgumentParser(prog='load-forecast', description='BPNN Electricity Load Forecasting')
    common = _common_parser()
    commands = PARSER.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    synth = commands.add_parser('synth', parents=[common], help='Generate synthetic smart-meter data')
    synth.add_argument('--out', type=str, required=True, help='Output directory')
    synth.add_argument('--start', dest='range_start', type=str, default=None)
    synth.add_argument('--end', dest='range_end', type=str, default=None)
    synth.add_argument('--noise-sd', type=float, default=SynthConfig.noise_sd)
    synth.add_argument('--gap-rate', type=float, default=SynthConfig.gap_rate)
    synth.add_argument('--sentinel-rate', type=float, default=SynthConfig.sentinel_rate)
    synth.add_argument('--block-gaps', type=int, default=SynthConfig.block_gap_count)
    synth.add_argument('--block-hours', type=int, default=SynthConfig.block_gap_hours)
    synth.add_argument('--weather-variability', type=float, default=SynthConfig.weather_variability)

    ingest = commands.add_parser('ingest', parents=[common], help='Clean raw data and report its continuity')
    _data_args(ingest)
    ingest.add_argument('--report', type=str, required=True, help='Continuity report JSON')
    ingest.add_argument('--out', type=str, default=None, help='Clean hourly series CSV')

    aggregate = commands.add_parser('aggregate', parents=[common], help='Build the dataset of one scale')
    _data_args(aggregate)
    aggregate.add_argument('--out', type=str, required=True, help='Dataset CSV')

    train = commands.add_parser('train', parents=[common], help='Train one network and save the model')
    _data_args(train)
    _feature_args(train)
    _train_args(train)
    train.add_argument('--model', type=str, required=True, help='Model JSON to write')
    train.add_argument('--predictions', type=str, default=None, help='Test-set predictions CSV')

    predict_cmd = commands.add_parser('predict', parents=[common], help='Predict kWh with a saved model')
    predict_cmd.add_argument('--model', type=str, required=True)
    rows = predict_cmd.add_mutually_exclusive_group(required=True)
    rows.add_argument('--rows', type=str, help='CSV with one column per model input, in raw units')
    rows.add_argument('--dataset', type=str, help='Aggregated dataset CSV of the model scale')
    predict_cmd.add_argument('--out', type=str, default=None, help='Predictions CSV (default: stdout)')

    sweep = commands.add_parser('sweep', parents=[common], help='Lag sweep with and without context')
    _data_args(sweep, SCALES + ('all',))
    _feature_args(sweep)
    _train_args(sweep)
    sweep.add_argument('--out', dest='out_dir', type=str, default=None, help='Result directory')

    ablate = commands.add_parser('ablate', parents=[common], help='Drop one context factor at a time')
    _data_args(ablate)
    _feature_args(ablate)
    _train_args(ablate)
    ablate.add_argument('--out', dest='out_dir', type=str, default=None, help='Result directory')

    search = commands.add_parser('search-hidden', parents=[common], help='Trial-and-error hidden-layer search')
    _data_args(search)
    _feature_args(search)
    _train_args(search)
    search.add_argument('--hidden-range', type=_range_arg, default=None,
                        help='Candidate sizes, "a:b" or a comma list (default: the rule-of-thumb range)')
    search.add_argument('--out', dest='out_dir', type=str, default=None, help='Result directory')

    return PARSER


_CONFIG_KEYS = set(RunConfig.ATTRIBUTES)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """ Defaults < config file < flags. """
    overrides = {k: v for k, v in vars(args).items() if k in _CONFIG_KEYS}
    return RunConfig(file_pathname=args.config_file, **overrides)


def feature_spec(config: RunConfig, scale: str, lag_count: Optional[int] = None,
                 include_context: Optional[bool] = None) -> FeatureSpec:
    spec = FeatureSpec(scale,
                       config.lag_count if lag_count is None else lag_count,
                       config.include_context if include_context is None else include_context)
    for factor in config.drop_factors:
        spec = spec.without(factor)
    return spec


def experiment_plan(config: RunConfig, scale: str, spec: Optional[FeatureSpec] = None) -> ExperimentPlan:
    spec = spec or feature_spec(config, scale)
    return ExperimentPlan(
        feature_spec=spec,
        topology=Topology(spec.width, config.n_hidden),
        train_config=TrainConfig(config.learning_rate, config.max_epochs, config.patience, config.seed),
        split_spec=SplitSpec(*config.split, seed=config.seed),
        repeat_count=config.repeat_count,
    )


def load_series(config: RunConfig):
    hour_range = config.hour_range()
    return load_clean_series(config.path('consumption_file'), config.path('weather_file'), hour_range)


def load_dataset(args: argparse.Namespace, config: RunConfig, scale: str) -> ScaleDataset:
    if getattr(args, 'dataset', None) is not None:
        dataset = ScaleDataset.read_csv(args.dataset)
        if dataset.scale != scale:
            raise ValueError(f'{args.dataset} holds {dataset.scale} rows, expected {scale}')
        return dataset
    series, _ = load_series(config)
    holidays = load_holidays(config.path('holiday_file'), config.hour_range())
    return build_dataset(scale, series, holidays)


def _print(args, text: str):
    if not args.silent:
        click.echo(text)


def _ensure_parent(path):
    directory = os.path.dirname(os.fspath(path))
    if directory:
        os.makedirs(directory, exist_ok=True)
    return path


def _result_paths(config: RunConfig, stem: str) -> Dict[str, str]:
    return {ext: os.path.join(config.out_dir, f'{stem}.{ext}') for ext in ('json', 'csv')}


def cmd_synth(args, config: RunConfig) -> int:
    hour_range = HourRange(pd.Timestamp(config.range_start), pd.Timestamp(config.range_end))
    synth_config = SynthConfig(
        hour_range=hour_range,
        noise_sd=args.noise_sd,
        seed=config.seed,
        gap_rate=args.gap_rate,
        sentinel_rate=args.sentinel_rate,
        block_gap_count=args.block_gaps,
        block_gap_hours=args.block_hours,
        weather_variability=args.weather_variability,
    )
    paths = generate(synth_config).write(args.out)
    _print(args, f'wrote {", ".join(sorted(os.path.basename(p) for p in paths.values()))} to {args.out}')
    return 0


def cmd_ingest(args, config: RunConfig) -> int:
    series, report = load_series(config)
    with open(_ensure_parent(args.report), 'w') as f:
        f.write(report.to_json())
    if args.out:
        series.to_csv(_ensure_parent(args.out))
    _print(args, f'{report.actual_count}/{report.expected_count} hours present, '
                 f'{len(report.point_gaps)} point gaps, {len(report.block_gaps)} block gaps, '
                 f'{len(report.sentinel_hits)} invalid values')
    return 0


def cmd_aggregate(args, config: RunConfig) -> int:
    dataset = load_dataset(args, config, config.scale)
    dataset.to_csv(_ensure_parent(args.out))
    _print(args, f'{dataset.scale}: {len(dataset)} rows x {len(dataset.frame.columns)} columns')
    return 0


def cmd_train(args, config: RunConfig) -> int:
    plan = experiment_plan(config, config.scale)
    dataset = load_dataset(args, config, config.scale)
    console = StandardOutLogger(config.log_interval, silent=args.silent)
    trial = fit_trial(plan, dataset, config.seed, console_logger=console)
    save_checkpoint(args.model, trial.params, {
        'normalizer': trial.norm_params.to_dict(),
        'feature_spec': plan.feature_spec.to_dict(),
        'feature_names': list(trial.test.feature_names),
        'test_set': trial.test.to_dict(),
        'metrics': trial.metrics.to_dict(),
        'epochs_run': trial.report.epochs_run,
        'config': config.to_dict(),
    })
    if args.predictions:
        write_predictions(predictions_frame(trial.test.period_starts, trial.pred_kwh, trial.test.y),
                          _ensure_parent(args.predictions))
    m = trial.metrics
    _print(args, f'{plan.topology} trained for {trial.report.epochs_run} epochs: test accuracy '
                 f'{m.accuracy_pct:.2f}%, mse {m.mse_kwh2:.6g} kWh^2')
    return 0


def cmd_predict(args, config: RunConfig) -> int:
    params, bundle = load_checkpoint(args.model)
    spec = FeatureSpec.from_dict(bundle['feature_spec'])
    norm = NormParams.from_dict(bundle['normalizer'])
    if args.dataset:
        dataset = ScaleDataset.read_csv(args.dataset)
        x, starts = feature_rows(dataset, spec)
    else:
        rows = pd.read_csv(args.rows)
        names = bundle['feature_names']
        missing = [n for n in names if n not in rows.columns]
        if missing:
            raise ValueError(f'{args.rows}: missing input column(s) {", ".join(missing)}')
        x = rows[names].to_numpy(dtype=float)
        starts = None
        if 'period_start' in rows.columns:
            starts = pd.DatetimeIndex(pd.to_datetime(rows['period_start'], format='ISO8601'))
    pred = invert_target(norm, predict(params, apply_normalizer(norm, x)))
    if args.out:
        _ensure_parent(args.out)
    text = write_predictions(predictions_frame(starts, pred), args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _sweep_rows(frame: pd.DataFrame) -> List[list]:
    return results.result_rows(frame, results.CSV_COLUMNS)


def cmd_sweep(args, config: RunConfig) -> int:
    scales = SCALES if config.scale == 'all' else (config.scale,)
    best = {}
    with make_scheduler(config.jobs) as scheduler:
        for scale in scales:
            dataset = load_dataset(args, config, scale)
            plan = experiment_plan(config, scale, feature_spec(config, scale, LAG_GRIDS[scale][0], True))
            sweep = lag_sweep(scale, dataset, plan, scheduler)
            paths = _result_paths(config, f'sweep_{scale}')
            frame = results.sweep_frame(sweep)
            results.write_json(paths['json'], results.sweep_document(sweep), config.to_dict())
            results.write_csv(paths['csv'], frame, config.to_dict())
            best[scale] = best_cell(sweep)
            _print(args, f'{scale} lag sweep')
            _print(args, results_table(RESULT_HEADERS, _sweep_rows(frame)))
    if len(scales) > 1:
        frame = results.best_frame(best)
        results.write_csv(os.path.join(config.out_dir, 'best.csv'), frame, config.to_dict())
        _print(args, results_table(['SCALE'] + RESULT_HEADERS, results.result_rows(
            frame, ('scale',) + results.CSV_COLUMNS)))
    return 0


def cmd_ablate(args, config: RunConfig) -> int:
    plan = experiment_plan(config, config.scale)
    dataset = load_dataset(args, config, config.scale)
    with make_scheduler(config.jobs) as scheduler:
        ablation = factor_ablation(config.scale, dataset, plan, scheduler)
    paths = _result_paths(config, f'ablation_{config.scale}')
    frame = results.ablation_frame(ablation)
    results.write_json(paths['json'], results.ablation_document(ablation), config.to_dict())
    results.write_csv(paths['csv'], frame, config.to_dict())
    _print(args, results_table(['DROPPED'] + RESULT_HEADERS[1:] + ['DELTA (%)'], results.result_rows(
        frame, ('grid_value',) + results.CSV_COLUMNS[1:] + ('accuracy_delta',))))
    return 0


def cmd_search_hidden(args, config: RunConfig) -> int:
    plan = experiment_plan(config, config.scale)
    dataset = load_dataset(args, config, config.scale)
    candidates = args.hidden_range
    if candidates is None:
        n_rows = len(dataset) - plan.feature_spec.lag_count
        n_train = plan.split_spec.sizes(n_rows)[0]
        candidates = hidden_formula_candidates(plan.topology.n_in, 1, n_train).sqrt_plus_constant
    with make_scheduler(config.jobs) as scheduler:
        search = hidden_layer_search(plan, dataset, candidates, scheduler)
    paths = _result_paths(config, f'hidden_{config.scale}')
    frame = results.hidden_search_frame(search, plan.feature_spec.include_context)
    results.write_json(paths['json'], results.hidden_search_document(search), config.to_dict())
    results.write_csv(paths['csv'], frame, config.to_dict())
    _print(args, results_table(RESULT_HEADERS, _sweep_rows(frame)))
    _print(args, f'best hidden-layer size by mse: {search.best_by_mse}')
    return 0


COMMANDS = {
    'synth': cmd_synth,
    'ingest': cmd_ingest,
    'aggregate': cmd_aggregate,
    'train': cmd_train,
    'predict': cmd_predict,
    'sweep': cmd_sweep,
    'ablate': cmd_ablate,
    'search-hidden': cmd_search_hidden,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """ Runs one subcommand and returns the process exit code: 0 on success,
    1 on a data or configuration error, 2 on a usage error.
    """
    parser = get_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else 2

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        config = resolve_config(args)
        return COMMANDS[args.command](args, config)
    except (ValueError, OSError, KeyError) as err:
        message = err.args[0] if isinstance(err, KeyError) and err.args else err
        click.echo(click.style(f'error: {message}', fg='red'), err=True)
        return 1
