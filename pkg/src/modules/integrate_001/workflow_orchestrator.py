"""
Workflow Orchestrator - INTEGRATE-001 Core Component

Runs the flowcast commands end to end:
    synth     synthetic load CSV
    train     flow checkpoint + loss history
    forecast  scenario CSVs for the flow and the AR-noise baseline
    eval      reliability / sharpness CSVs, metrics.json and SVG charts
    toy       KL vs W1 mixture fit curves and chart

forecast writes scenarios_<method>.csv next to realized.csv and the
AR-noise table; eval scores every scenarios_*.csv it finds. To compare
reinforced and vanilla flows, train each into its own directory, then run
forecast once per checkpoint (--checkpoint) into one shared --out before
eval. The repeated realized and AR-noise tables are identical for the same
config and seed.

Every command takes a validated RunConfig, writes into config.out (plus the
resolved-config echo) and returns a result dict with status, outputs,
errors and the process exit code.
"""

import traceback
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .export_manager import ExportManager
from ..data_001 import (
    LoadSeries,
    Standardizer,
    WindowDataset,
    aggregate,
    make_windows,
    parse_csv,
    split_and_standardize,
    synth_generate,
    write_csv,
)
from ..evaluation_001 import EvaluationEngine, ScenarioSet, ar_fit
from ..flow_001 import FlowModel, load_checkpoint, save_checkpoint
from ..training_001 import FlowTrainer, ToyMetric, toy_fit
from ..visual_001 import VisualEngine
from ...utils.config import RESOLVED_CONFIG_NAME, RunConfig
from ...utils.errors import DimensionMismatchError, InputError, exit_code_for

COMMANDS = ["synth", "train", "forecast", "eval", "toy"]
LOAD_CSV = "load.csv"
CHECKPOINT_DIR = "checkpoint"
REALIZED_CSV = "realized.csv"
SCENARIO_PREFIX = "scenarios_"
AR_METHOD = "ar-noise"
SCENARIO_COLUMNS = ["window_id", "scenario_id", "hour", "kw"]
REALIZED_COLUMNS = ["window_id", "hour", "kw"]


def method_name(variant: str, beta: float) -> str:
    """Label of a trained flow: the coupling variant, '-wflow' when beta > 0."""
    return f"{variant}-wflow" if beta > 0 else variant


class PipelineOrchestrator:
    """
    Executes one flowcast command per call.

    Args:
        callback: Optional logging callback function
    """

    def __init__(self, callback: Optional[Callable[[str], None]] = None):
        self.callback = callback or (lambda x: None)

    def run(self, command: str, config: RunConfig, **paths) -> Dict:
        """
        Validate the config and run a command.

        Args:
            command: one of COMMANDS
            config: RunConfig (validated here before any computation)
            **paths: command inputs (checkpoint=..., input_dir=...)

        Returns:
            Dict with command, status, outputs, errors, exit_code, metadata
        """
        if command not in COMMANDS:
            raise ValueError(f"Invalid command '{command}'. Must be one of: {COMMANDS}")

        self.callback(f"flowcast {command}: output -> {config.out}")
        start_time = datetime.now()
        results = {
            "command": command,
            "status": "running",
            "outputs": [],
            "errors": [],
            "exit_code": 0,
            "metadata": {"start_time": start_time.isoformat()},
        }

        try:
            config.validate()
            handler = getattr(self, f"cmd_{command}")
            exporter = ExportManager(config.out, callback=self.callback)
            summary = handler(config, exporter, **paths)
            exporter.export_json(RESOLVED_CONFIG_NAME, config.to_dict())
            results["outputs"] = exporter.file_list()
            results["summary"] = summary
            results["status"] = "complete"
        except Exception as e:
            results["status"] = "failed"
            results["exit_code"] = exit_code_for(e)
            results["errors"].append({
                "type": type(e).__name__,
                "message": str(e),
                "traceback": traceback.format_exc(),
            })
            self.callback(f"✗ {command} failed: {e}")

        return self._finalize_results(results, start_time)

    # ------------------------------------------------------------------
    # data preparation
    # ------------------------------------------------------------------

    def _load_households(self, config: RunConfig) -> List[LoadSeries]:
        if config.data.csv_path:
            return parse_csv(config.data.csv_path, callback=self.callback)
        self.callback("No data.csv_path given; generating the synthetic dataset in memory")
        return synth_generate(config.synth, callback=self.callback)

    def _prepare(self, config: RunConfig) -> Tuple[LoadSeries, WindowDataset, Tuple]:
        """Aggregated series, raw windows and the (train, validation, test) split."""
        data = config.data
        series = aggregate(self._load_households(config), data.households, seed=data.aggregation_seed)
        windows = make_windows(series, data.h, data.k)
        splits = split_and_standardize(windows, data.train_end, data.test_start, data.validation_fraction)
        self.callback(
            f"✓ {series.household_id}: {len(splits[0])} train / {len(splits[1])} validation / "
            f"{len(splits[2])} test windows"
        )
        return series, windows, splits

    # ------------------------------------------------------------------
    # commands
    # ------------------------------------------------------------------

    def cmd_synth(self, config: RunConfig, exporter: ExportManager) -> Dict:
        """Write the synthetic dataset in the load CSV schema."""
        series = synth_generate(config.synth, callback=self.callback)
        path = write_csv(series, Path(config.out) / LOAD_CSV)
        exporter.register(LOAD_CSV, path)
        return {"households": len(series), "hours": len(series[0])}

    def cmd_train(self, config: RunConfig, exporter: ExportManager) -> Dict:
        """Train a flow and write its checkpoint and loss history."""
        _, _, (train, validation, _) = self._prepare(config)
        m = config.model
        model = FlowModel(
            dim=config.data.k,
            cond_dim=config.data.h,
            n_blocks=m.blocks,
            variant=m.variant,
            hidden_channels=m.hidden_channels,
            cond_hidden=m.cond_hidden,
            kernel_width=m.kernel_width,
            seed=config.train.seed,
        )
        result = FlowTrainer(config.train, callback=self.callback).train_wflow(train, model, validation)

        method = method_name(m.variant, config.train.beta)
        metadata = {
            "method": method,
            "standardizer": train.standardizer.to_dict(),
            "h": config.data.h,
            "k": config.data.k,
            "best_epoch": result.best_epoch,
            "best_val_nll": result.best_val_nll,
        }
        manifest = save_checkpoint(result.model, Path(config.out) / CHECKPOINT_DIR, metadata)
        for path in (manifest, manifest.parent / "parameters.bin"):
            exporter.register(f"{CHECKPOINT_DIR}/{path.name}", path)
        exporter.export_table(
            "loss_history.csv", ["epoch", "train_nll", "val_nll", "w_estimate"], result.loss_rows()
        )
        self.callback(
            f"✓ {method}: val nll {result.initial_val_nll:.4f} -> {result.final_val_nll:.4f} "
            f"(best epoch {result.best_epoch})"
        )
        return {
            "method": method,
            "initial_val_nll": result.initial_val_nll,
            "final_val_nll": result.final_val_nll,
            "best_epoch": result.best_epoch,
            "stopped_early": result.stopped_early,
        }

    def cmd_forecast(self, config: RunConfig, exporter: ExportManager, checkpoint=None) -> Dict:
        """Sample flow and AR-noise scenarios for every test window."""
        checkpoint = Path(checkpoint) if checkpoint else Path(config.out) / CHECKPOINT_DIR
        model, metadata = load_checkpoint(checkpoint)
        if (model.dim, model.cond_dim) != (config.data.k, config.data.h):
            raise DimensionMismatchError(
                f"checkpoint expects h={model.cond_dim}, k={model.dim}; "
                f"config has h={config.data.h}, k={config.data.k}"
            )
        if "standardizer" not in metadata:
            raise InputError(f"checkpoint {checkpoint} carries no standardization statistics")

        series, windows, (_, _, test) = self._prepare(config)
        test = windows.subset(test.window_ids, "test").standardize(
            Standardizer.from_dict(metadata["standardizer"])
        )
        method = metadata.get("method", model.variant.value)
        f = config.forecast
        engine = EvaluationEngine(coverage_grid=f.coverage_grid, callback=self.callback)

        flow_sets = engine.forecast_flow(model, test, f.scenarios, f.seed, method=method)
        history = series.power[np.asarray(series.timestamps < pd.Timestamp(config.data.train_end))]
        baseline = ar_fit(history, callback=self.callback)
        ar_sets = engine.forecast_ar(baseline, test, f.scenarios, f.seed)

        for name, sets in ((method, flow_sets), (AR_METHOD, ar_sets)):
            exporter.export_frame(f"{SCENARIO_PREFIX}{name}.csv", scenario_frame(sets))
        exporter.export_frame(REALIZED_CSV, realized_frame(test))
        return {
            "method": method,
            "windows": len(test),
            "scenarios": f.scenarios,
            "ar_sigma": baseline.sigma,
            "ar_ridge_fallback": baseline.ridge_fallback,
        }

    def cmd_eval(self, config: RunConfig, exporter: ExportManager, input_dir=None) -> Dict:
        """Reliability and sharpness metrics plus charts for every scenario file found."""
        source = Path(input_dir) if input_dir else Path(config.out)
        window_ids, realized = read_realized(source / REALIZED_CSV)
        files = sorted(source.glob(f"{SCENARIO_PREFIX}*.csv"))
        if not files:
            raise InputError(f"no {SCENARIO_PREFIX}<method>.csv files in {source}")

        methods = {}
        for path in files:
            name = path.stem[len(SCENARIO_PREFIX):]
            methods[name] = read_scenarios(path, name, window_ids, realized.shape[1])

        engine = EvaluationEngine(coverage_grid=config.forecast.coverage_grid, callback=self.callback)
        evaluations = engine.evaluate_all(realized, methods)

        for name, evaluation in evaluations.items():
            exporter.export_table(f"coverage_{name}.csv", ["coverage", "deviation"], evaluation.curve.rows())
            exporter.export_table(
                f"width_{name}.csv", ["hour", "width"], list(enumerate(evaluation.width_profile.tolist()))
            )

        metrics = {name: evaluation.summary() for name, evaluation in evaluations.items()}
        exporter.export_json("metrics.json", {"windows": int(len(window_ids)), "methods": metrics})

        chart_data = {
            "coverage": {n: (e.curve.coverages, e.curve.deviations) for n, e in evaluations.items()},
            "width": {n: e.width_profile for n, e in evaluations.items()},
            "fan": {
                n: {
                    "median": e.bands_50[0].median,
                    "lower": e.bands_50[0].lower,
                    "upper": e.bands_50[0].upper,
                    "realized": realized[0],
                    "window_id": int(window_ids[0]),
                }
                for n, e in evaluations.items()
            },
        }
        self._export_charts(exporter, chart_data, ["coverage", "fan", "width"])
        return metrics

    def cmd_toy(self, config: RunConfig, exporter: ExportManager) -> Dict:
        """KL and W1 fits of N(0, sigma^2) to the two-mode mixture."""
        fits = {metric: toy_fit(config.toy, metric, callback=self.callback) for metric in ToyMetric}
        for metric, fit in fits.items():
            exporter.export_table(f"toy_{metric.value}.csv", ["sigma2", "objective"], fit.rows())
        summary = {metric.value: fit.summary() for metric, fit in fits.items()}
        exporter.export_json("toy_summary.json", summary)

        toy = {
            "mixture": config.toy.mixture(),
            "kl_sigma2": fits[ToyMetric.KL].argmin,
            "w1_sigma2": fits[ToyMetric.W1].argmin,
        }
        self._export_charts(exporter, {"toy": toy}, ["toy"])
        return summary

    # ------------------------------------------------------------------
    # helpers
    # ------------------------------------------------------------------

    def _export_charts(self, exporter: ExportManager, data: Dict, chart_types: List[str]):
        visuals = VisualEngine(callback=self.callback).generate_all(
            data, {"chart_types": chart_types, "validate": True}
        )
        if not visuals["validation"]["all_valid"]:
            self.callback(f"⚠ chart validation: {visuals['validation']['errors'][0]}")
        for name, chart in visuals["charts"].items():
            exporter.export_svg(f"{name}.svg", chart["svg"])

    def _finalize_results(self, results: Dict, start_time: datetime) -> Dict:
        """Add final metadata to results."""
        end_time = datetime.now()
        execution_time = (end_time - start_time).total_seconds()

        results["metadata"]["end_time"] = end_time.isoformat()
        results["metadata"]["execution_time_seconds"] = execution_time

        if results["status"] == "complete":
            self.callback(f"✓ {results['command']} complete: {len(results['outputs'])} files")
        self.callback(f"Execution time: {execution_time:.2f}s")
        return results


# ----------------------------------------------------------------------
# scenario / realized tables
# ----------------------------------------------------------------------


def scenario_frame(sets: List[ScenarioSet]) -> pd.DataFrame:
    """Long table window_id, scenario_id, hour, kw (raw values, window order)."""
    if not sets:
        return pd.DataFrame(columns=SCENARIO_COLUMNS)
    m, k = sets[0].values.shape
    values = np.stack([s.values for s in sets])
    window_ids = np.array([s.window_id for s in sets])
    return pd.DataFrame({
        "window_id": np.repeat(window_ids, m * k),
        "scenario_id": np.tile(np.repeat(np.arange(m), k), len(sets)),
        "hour": np.tile(np.arange(k), len(sets) * m),
        "kw": values.ravel(),
    })


def realized_frame(dataset: WindowDataset) -> pd.DataFrame:
    """Long table window_id, hour, kw of the realized futures."""
    future = dataset.raw_future()
    n, k = future.shape
    return pd.DataFrame({
        "window_id": np.repeat(dataset.window_ids, k),
        "hour": np.tile(np.arange(k), n),
        "kw": future.ravel(),
    })


def _read_table(path: Path, columns: List[str]) -> pd.DataFrame:
    if not path.exists():
        raise InputError(f"missing input file {path}")
    frame = pd.read_csv(path)
    if list(frame.columns) != columns:
        raise InputError(f"{path}: header must be {','.join(columns)}")
    if not np.all(np.isfinite(frame["kw"].to_numpy(dtype=np.float64))):
        raise InputError(f"{path}: non-finite kw value")
    return frame


def _pivot(frame: pd.DataFrame, index: str, path: Path) -> pd.DataFrame:
    try:
        return frame.pivot(index=index, columns="hour", values="kw")
    except ValueError:
        raise InputError(f"{path}: duplicate {index} / hour rows") from None


def read_realized(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns:
        (window_ids Array[W], realized Array[W, k])
    """
    frame = _read_table(path, REALIZED_COLUMNS)
    table = _pivot(frame, "window_id", path)
    if table.isna().any().any():
        raise InputError(f"{path}: windows have unequal hour counts")
    return table.index.to_numpy(), table.to_numpy(dtype=np.float64)


def read_scenarios(path: Path, method: str, window_ids: np.ndarray, k: int) -> List[ScenarioSet]:
    """
    Rebuild per-window ScenarioSets aligned with the realized windows.

    Raises:
        DimensionMismatchError: windows or hours do not match realized.csv
    """
    frame = _read_table(path, SCENARIO_COLUMNS)
    found = np.sort(frame["window_id"].unique())
    if not np.array_equal(found, np.sort(window_ids)):
        raise DimensionMismatchError(f"{path.name}: scenario windows do not match {REALIZED_CSV}")
    sets = []
    for window_id, group in frame.groupby("window_id", sort=True):
        table = _pivot(group, "scenario_id", path)
        if table.shape[1] != k or table.isna().any().any():
            raise DimensionMismatchError(f"{path.name}: window {window_id} does not hold {k} hours per scenario")
        sets.append(ScenarioSet(table.to_numpy(dtype=np.float64), np.empty(0), method=method,
                                window_id=int(window_id)))
    return sets
