"""Command-line interface.

Subcommands mirror the pipeline stages: ``audit`` scores condition and
evidence pairs, ``decide`` turns instances plus scores into predictions,
``sweep`` produces the risk-coverage artifacts, ``report`` prints a
summary table and renders figures, ``synth`` generates oracle data, and
``check`` runs the theory-check suite.

Exit codes: 0 success, 1 run failures or failed checks, 2 usage errors.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import __version__
from .audit import AuditThresholds, ConstantStubBackend
from .checks import run_theory_checks
from .client import TOKEN_ENV_VAR, EndpointConfig, ScoreCache, remote_score_batch
from .errors import ClaimgateError
from .model import LABELS_BY_TASK, Task
from .pipeline import RunManifest, eval_records, run_pipeline
from .riskcov import summarize, sweep as sweep_records
from .schemas import (
    ScoreRecord,
    load_instances,
    load_predictions,
    pairs_for_instances,
    read_rc_csv,
    read_summary,
    write_eval_records,
    write_instances,
    write_pairs,
    write_rc_csv,
    write_scores,
    write_summary,
)
from .synth import OracleConfig, Regime, analytic_curve, generate_instances, generate_records


@click.group()
@click.version_option(version=__version__)
def main():
    """Abstention-aware scientific claim verification."""


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@main.command()
@click.argument("instances_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--scores-out", type=click.Path(dir_okay=False), help="Where to write pair scores (JSONL).")
@click.option("--emit-pairs", type=click.Path(dir_okay=False), help="Write the (premise, hypothesis) pairs file for an external scorer and skip scoring unless a backend is also given.")
@click.option("--endpoint", help="Remote scorer URL; credentials via $" + TOKEN_ENV_VAR + ".")
@click.option("--batch-size", default=32, show_default=True)
@click.option("--cache", "cache_path", type=click.Path(dir_okay=False), help="Persistent score cache (JSONL).")
@click.option("--stub", nargs=3, type=float, default=None, help="Use a constant stub backend with this (entail, contradict, neutral) triple.")
@click.option("--strict/--lenient", default=True, show_default=True)
@click.option("--max-evidence", default=30, show_default=True)
def audit(instances_path, scores_out, emit_pairs, endpoint, batch_size, cache_path, stub, strict, max_evidence):
    """Score every (condition, evidence) pair of INSTANCES_PATH."""
    try:
        instances, errors = load_instances(instances_path, strict=strict, max_evidence=max_evidence)
    except ClaimgateError as exc:
        _fail(str(exc))
    for err in errors:
        click.echo(f"skipped: {err}", err=True)
    pairs = pairs_for_instances(instances)
    if emit_pairs:
        write_pairs(pairs, emit_pairs)
        click.echo(f"wrote {len(pairs)} pairs to {emit_pairs}")
        if not scores_out:
            return
    if not scores_out:
        raise click.UsageError("either --scores-out or --emit-pairs is required")
    if endpoint:
        config = EndpointConfig(url=endpoint, batch_size=batch_size, cache=ScoreCache(cache_path))
        try:
            triples = remote_score_batch([(p.premise, p.hypothesis) for p in pairs], config)
        except ClaimgateError as exc:
            _fail(str(exc))
    elif stub is not None:
        backend = ConstantStubBackend(*stub)
        triples = [backend.score_pair(None, None, None, None) for _ in pairs]
    else:
        raise click.UsageError("scoring requires --endpoint or --stub")
    records = [
        ScoreRecord(
            instance_id=p.instance_id,
            condition_index=p.condition_index,
            evidence_index=p.evidence_index,
            p_entail=t[0],
            p_contradict=t[1],
            p_neutral=t[2],
        )
        for p, t in zip(pairs, triples)
    ]
    write_scores(records, scores_out)
    click.echo(f"wrote {len(records)} scores to {scores_out}")


@main.command()
@click.argument("instances_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--scores", "scores_path", type=click.Path(exists=True, dir_okay=False), help="Precomputed pair scores (JSONL).")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--theta-ent", default=0.7, show_default=True)
@click.option("--theta-con", default=0.7, show_default=True)
@click.option("--confidence", type=click.Choice(["max", "min", "mean"]), default="max", show_default=True)
@click.option("--mode", type=click.Choice(["full", "no-decompose", "no-audit"]), default="full", show_default=True)
@click.option("--tau", default=0.0, show_default=True, help="Single-threshold abstention decision.")
@click.option("--seed", default=0, show_default=True)
@click.option("--strict/--lenient", default=True, show_default=True)
@click.option("--max-evidence", default=30, show_default=True)
def decide(instances_path, scores_path, out_dir, theta_ent, theta_con, confidence, mode, tau, seed, strict, max_evidence):
    """Audit, aggregate, and threshold INSTANCES_PATH into predictions.

    Writes predictions.jsonl plus, when gold labels are present,
    rc_curve.csv and summary.json under --out-dir.
    """
    mode_value = mode.replace("-", "_")
    backend = None
    if mode_value != "no_audit":
        if not scores_path:
            raise click.UsageError("--scores is required unless --mode no-audit")
        backend = {"kind": "precomputed_file", "path": str(scores_path)}
    manifest = RunManifest.for_run(
        instances_path,
        theta_ent=theta_ent,
        theta_con=theta_con,
        confidence=confidence,
        mode=mode_value,
        backend=backend,
        tau=tau,
        seed=seed,
        strict=strict,
        max_evidence=max_evidence,
    )
    try:
        result = run_pipeline(manifest, out_dir)
    except ClaimgateError as exc:
        _fail(str(exc))
    click.echo(f"wrote {len(result.predictions)} predictions to {result.predictions_path}")
    if result.summary_path:
        click.echo(f"wrote {result.curve_path} and {result.summary_path}")
    for instance_id, reason in result.failures:
        click.echo(f"failed: {instance_id}: {reason}", err=True)
    if result.failures and strict:
        sys.exit(1)


@main.command("sweep")
@click.argument("predictions_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--instances", "instances_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Instance file carrying gold labels.")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--strict/--lenient", default=True, show_default=True)
def sweep_cmd(predictions_path, instances_path, out_dir, strict):
    """Compute the risk-coverage curve and summary for saved predictions."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        predictions, manifest = load_predictions(predictions_path)
        instances, _ = load_instances(instances_path, strict=strict)
        records = eval_records(instances, predictions)
        if not records:
            _fail("no instances with gold labels matched the predictions")
        task = instances[0].task
        labels = [label.value for label in LABELS_BY_TASK[task]]
        curve = sweep_records(records)
        summary = {
            "metrics": summarize(records, labels),
            "task": task.value,
            "manifest": manifest,
            "conventions": {
                "risk_at_coverage": "linear interpolation between operating points",
                "tau_grid": "distinct observed confidences plus zero",
            },
        }
        write_rc_csv(curve, out / "rc_curve.csv")
        write_summary(summary, out / "summary.json")
        write_eval_records(records, out / "eval_records.jsonl")
    except ClaimgateError as exc:
        _fail(str(exc))
    click.echo(f"wrote {out / 'rc_curve.csv'} and {out / 'summary.json'}")


@main.command()
@click.option("--curve", "curve_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--summary", "summary_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--predictions", "predictions_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", type=click.Path(file_okay=False), help="Directory for rendered figures; defaults to the curve's directory.")
@click.option("--figures/--no-figures", default=True, show_default=True)
def report(curve_path, summary_path, predictions_path, out_dir, figures):
    """Print the run summary and render risk-coverage figures."""
    from .plots import plot_confidence_histogram, plot_rc_curve

    try:
        curve = read_rc_csv(curve_path)
    except (ClaimgateError, ValueError, KeyError) as exc:
        _fail(f"could not read curve: {exc}")
    out = Path(out_dir) if out_dir else Path(curve_path).parent
    out.mkdir(parents=True, exist_ok=True)

    if summary_path:
        summary = read_summary(summary_path)
        metrics = summary.get("metrics", {})
        click.echo("metric            value")
        click.echo("----------------  --------")
        for key in ("n_records", "accuracy", "macro_f1", "aurc", "risk_at_0.8", "risk_at_0.9"):
            if key in metrics:
                value = metrics[key]
                shown = f"{value:.4f}" if isinstance(value, float) else str(value)
                click.echo(f"{key:<16}  {shown}")
    click.echo(f"curve points: {len(curve)}")

    if figures:
        figure_path = plot_rc_curve(curve, out / "rc_curve.png")
        click.echo(f"wrote {figure_path}")
        if predictions_path:
            predictions, _ = load_predictions(predictions_path)
            tau = predictions[0].tau if predictions else None
            hist_path = plot_confidence_histogram(predictions, out / "confidence_hist.png", tau=tau)
            click.echo(f"wrote {hist_path}")


@main.command()
@click.option("--kind", type=click.Choice(["instances", "records"]), default="instances", show_default=True)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--n", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--regime", type=click.Choice([r.value for r in Regime]), default="rank_calibrated", show_default=True)
@click.option("--task", type=click.Choice([t.value for t in Task]), default="claim_verification", show_default=True)
@click.option("--k-min", default=2, show_default=True)
@click.option("--k-max", default=4, show_default=True)
@click.option("--levels-per-band", default=1, show_default=True)
@click.option("--theta-ent", default=0.7, show_default=True)
@click.option("--theta-con", default=0.7, show_default=True)
def synth(kind, out_dir, n, seed, regime, task, k_min, k_max, levels_per_band, theta_ent, theta_con):
    """Generate synthetic oracle data with known ground truth."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        config = OracleConfig(
            n_instances=n,
            k_min=k_min,
            k_max=k_max,
            regime=Regime(regime),
            seed=seed,
            levels_per_band=levels_per_band,
            task=Task(task),
        )
        if kind == "instances":
            thresholds = AuditThresholds(theta_ent=theta_ent, theta_con=theta_con)
            instances, scores = generate_instances(config, thresholds)
            write_instances(instances, out / "instances.jsonl")
            write_scores(scores, out / "scores.jsonl")
            click.echo(f"wrote {len(instances)} instances and {len(scores)} pair scores to {out}")
        else:
            records, _ = generate_records(config)
            write_eval_records(records, out / "records.jsonl")
            with open(out / "analytic_curve.csv", "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["tau", "coverage", "risk"])
                for point in analytic_curve(config):
                    writer.writerow([repr(point.tau), repr(point.coverage), repr(point.risk)])
            click.echo(f"wrote {len(records)} records and the analytic curve to {out}")
        with open(out / "oracle_config.json", "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "kind": kind, "n_instances": n, "seed": seed, "regime": regime,
                    "task": task, "k_min": k_min, "k_max": k_max,
                    "levels_per_band": levels_per_band,
                    "theta_ent": theta_ent, "theta_con": theta_con,
                    "tool_version": __version__,
                },
                fh, indent=2, sort_keys=True,
            )
            fh.write("\n")
    except ClaimgateError as exc:
        _fail(str(exc))


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--n", default=10_000, show_default=True)
@click.option("--trials", default=200, show_default=True)
def check(seed, n, trials):
    """Run the theory-check suite and report one line per property."""
    results = run_theory_checks(seed=seed, n=n, trials=trials)
    failed = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        click.echo(f"[{status}] {result.name}: {result.detail}")
        if not result.passed:
            failed += 1
    if failed:
        _fail(f"{failed} of {len(results)} checks failed")
    click.echo(f"all {len(results)} checks passed")


if __name__ == "__main__":
    main()
