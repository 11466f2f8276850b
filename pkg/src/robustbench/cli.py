"""Command-line interface."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import corruptions
from .errors import RobustbenchError
from .harness import RunConfig, RunStore, curve_points, resume, run, summarize
from .image import load_image, save_image
from .planner import (
    DomainProfile,
    HttpChatClient,
    PlanRules,
    TranscriptReplayClient,
    default_rules,
    select_plan,
    validate_plan,
)
from .report import render_curves, render_heatmap, render_summary
from .synth import make_shapes_dataset


@click.group()
def main() -> None:
    """Domain-aware robustness evaluation for zero-shot image classifiers."""


def _locate_run(run_ref: str, store_dir: str) -> Path:
    path = Path(run_ref)
    if path.is_dir():
        return path
    candidate = Path(store_dir) / run_ref
    if candidate.is_dir():
        return candidate
    raise click.ClickException(f"no run found at {run_ref!r} (looked in {store_dir})")


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Input image (PNG/JPEG).")
@click.option("--kind", required=True, help="Corruption kind name.")
@click.option("--severity", default=0, show_default=True, type=int, help="Severity grid index.")
@click.option("--seed", default=0, show_default=True, type=int, help="Instance seed.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output image path.")
def corrupt(in_path: str, kind: str, severity: int, seed: int, out_path: str) -> None:
    """Apply one corruption at one severity to one image."""
    img = load_image(in_path)
    inst = corruptions.instance_for_level(kind, severity, seed)
    save_image(corruptions.apply(img, inst), out_path)
    click.echo(f"{kind}[{severity}] seed={seed}: {in_path} -> {out_path}")


def _load_rules(path: str | None) -> PlanRules:
    if path is None:
        return default_rules()
    data = json.loads(Path(path).read_text())
    return PlanRules(
        whitelist={d: frozenset(ks) for d, ks in data.get("whitelist", {}).items()},
        blacklist={d: frozenset(ks) for d, ks in data.get("blacklist", {}).items()},
    )


@main.command()
@click.option("--domain", "profile_path", required=True, type=click.Path(exists=True), help="Domain profile JSON {domain_id, description}.")
@click.option("--transcripts", type=click.Path(exists=True), help="Replay transcripts from <dir>/<domain>/<run>.txt instead of calling an endpoint.")
@click.option("--endpoint", help="Chat-completion endpoint URL.")
@click.option("--model", default="gpt-4o", show_default=True, help="Model name for the endpoint.")
@click.option("--runs", default=10, show_default=True, type=int, help="Number of prompting rounds.")
@click.option("--threshold", default=0.5, show_default=True, type=float, help="Majority threshold (strict).")
@click.option("--temperature", default=0.0, show_default=True, type=float)
@click.option("--rules", "rules_path", type=click.Path(exists=True), help="Custom whitelist/blacklist JSON.")
@click.option("--out", "out_path", type=click.Path(), help="Plan JSON output path.")
@click.option("--save-transcripts", type=click.Path(), help="Directory to persist raw responses.")
def plan(
    profile_path: str,
    transcripts: str | None,
    endpoint: str | None,
    model: str,
    runs: int,
    threshold: float,
    temperature: float,
    rules_path: str | None,
    out_path: str | None,
    save_transcripts: str | None,
) -> None:
    """Select a corruption plan for a domain by repeated prompting."""
    data = json.loads(Path(profile_path).read_text())
    profile = DomainProfile(
        domain_id=data["domain_id"],
        description=data["description"],
        display_name=data.get("display_name", ""),
    )
    if transcripts:
        client = TranscriptReplayClient(transcripts)
    elif endpoint:
        client = HttpChatClient(endpoint, model=model)
    else:
        raise click.ClickException("either --transcripts or --endpoint is required")
    corruption_plan, selection_runs = select_plan(
        profile, client, n_runs=runs, threshold=threshold, temperature=temperature
    )
    violations = validate_plan(corruption_plan, _load_rules(rules_path))
    if save_transcripts:
        root = Path(save_transcripts) / profile.domain_id
        root.mkdir(parents=True, exist_ok=True)
        for selection_run in selection_runs:
            (root / f"{selection_run.run_index}.txt").write_text(selection_run.raw_response)
    from .planner import tally_votes

    payload = corruption_plan.to_dict(violations)
    payload["selection_counts"] = tally_votes(selection_runs)
    out_file = Path(out_path or f"{profile.domain_id}_plan.json")
    out_file.write_text(json.dumps(payload, indent=2))
    click.echo(f"plan for {profile.domain_id}: {', '.join(corruption_plan.kinds) or '(empty)'}")
    for violation in violations:
        click.echo(f"  violation: {violation.rule} {violation.kind}", err=True)
    click.echo(f"wrote {out_file}")


@main.command(name="run")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True), help="Run config JSON.")
def run_command(config_path: str) -> None:
    """Execute the full evaluation matrix described by a config."""
    config = RunConfig.from_json(config_path)
    run_id = run(config)
    click.echo(f"run complete: {Path(config.out_dir) / run_id}")


@main.command(name="resume")
@click.argument("run_ref")
@click.option("--store", default="runs", show_default=True, help="Directory holding run stores.")
def resume_command(run_ref: str, store: str) -> None:
    """Execute only the missing cells of an interrupted run."""
    run_dir = _locate_run(run_ref, store)
    run_id = resume(run_dir)
    click.echo(f"resumed {run_id}: store at {run_dir}")


@main.command(name="summarize")
@click.argument("run_ref")
@click.option("--baseline", "baseline_ref", help="Baseline run (id or path) for relative metrics.")
@click.option("--store", default="runs", show_default=True, help="Directory holding run stores.")
def summarize_command(run_ref: str, baseline_ref: str | None, store: str) -> None:
    """Print per-model robustness summaries as JSON."""
    run_dir = _locate_run(run_ref, store)
    baseline_dir = _locate_run(baseline_ref, store) if baseline_ref else None
    summaries = summarize(run_dir, baseline_dir)
    click.echo(json.dumps({m: s.to_dict() for m, s in summaries.items()}, indent=2))


@main.command(name="report")
@click.argument("run_ref")
@click.option("--baseline", "baseline_ref", help="Baseline run (id or path) for relative metrics.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Report output directory.")
@click.option("--store", default="runs", show_default=True, help="Directory holding run stores.")
@click.option("--plan", "plan_paths", multiple=True, type=click.Path(exists=True), help="Plan JSON(s) to render into the selection heatmap.")
def report_command(
    run_ref: str, baseline_ref: str | None, out_dir: str, store: str, plan_paths: tuple[str, ...]
) -> None:
    """Render summary tables, per-kind curves, and the selection heatmap."""
    run_dir = _locate_run(run_ref, store)
    baseline_dir = _locate_run(baseline_ref, store) if baseline_ref else None
    summaries = summarize(run_dir, baseline_dir)
    if baseline_dir is not None and baseline_dir != run_dir:
        for model_id, summary in summarize(baseline_dir, baseline_dir).items():
            summaries.setdefault(f"baseline:{model_id}", summary)
    out = Path(out_dir)
    render_summary(list(summaries.values()), out)

    run_store = RunStore(run_dir)
    header = run_store.read_header()
    n_classes = len(header.get("class_names") or [])
    model_ids = sorted({m for m in summaries if not m.startswith("baseline:")})
    for model_id in model_ids:
        curves = curve_points(run_store, model_id)
        labeled = summaries[model_id].labeled
        target = out / "curves" if len(model_ids) == 1 else out / "curves" / model_id.replace("/", "_")
        render_curves(curves, n_classes, target, labeled)

    if plan_paths:
        matrix: dict[str, dict[str, int]] = {}
        n_runs = 0
        for path in plan_paths:
            payload = json.loads(Path(path).read_text())
            matrix[payload["domain_id"]] = payload.get("selection_counts", {})
            n_runs = max(n_runs, int(payload.get("n_runs", 0)))
        render_heatmap(matrix, n_runs, out, default_rules())
    click.echo(f"report written to {out}")


@main.command(name="synth")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Dataset root to create.")
@click.option("--classes", default="red,green,blue,yellow", show_default=True, help="Comma-separated color classes.")
@click.option("--per-class", default=10, show_default=True, type=int)
@click.option("--size", default=64, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
def synth_command(out_dir: str, classes: str, per_class: int, size: int, seed: int) -> None:
    """Generate a small colored-shapes dataset for offline demos."""
    root = make_shapes_dataset(
        out_dir, tuple(c.strip() for c in classes.split(",")), per_class, size, seed
    )
    click.echo(f"synthetic dataset at {root}")


def entry() -> None:
    try:
        main(standalone_mode=True)
    except RobustbenchError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    entry()
