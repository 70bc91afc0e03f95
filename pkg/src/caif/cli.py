"""Command-line entry points: serve the gateway, run the evaluation
harness, replay intent scripts, validate contract files."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from caif.contracts.catalog import load_catalog
from caif.contracts.jsonld import ParseError, parse_contract
from caif.contracts.validation import validate_contract
from caif.harness.dataset import generate_dataset, load_dataset, save_dataset
from caif.harness.reporting import (
    format_report,
    report,
    write_per_shot_csv,
    write_report_json,
)
from caif.harness.runner import RunMode, run_baseline, run_caif, run_fault_matrix
from caif.service.config import AppConfig, DEFAULT_CATALOG
from caif.service.replay import run_replay


def _load_config(args: argparse.Namespace) -> AppConfig:
    if getattr(args, "config", None):
        return AppConfig.from_file(args.config)
    return AppConfig()


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from caif.service.app import create_app
    from caif.service.engine import Engine

    config = _load_config(args)
    if args.scenario:
        config.scenario_path = Path(args.scenario)
    if args.catalog:
        config.catalog_path = Path(args.catalog)
    app = create_app(Engine(config))
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog or DEFAULT_CATALOG)
    if args.dataset:
        instances = load_dataset(args.dataset)
    else:
        instances = generate_dataset(seed=args.seed, n=args.n)
        if args.save_dataset:
            save_dataset(instances, args.save_dataset)

    if args.faults:
        matrix = run_fault_matrix(instances, catalog, seeds=range(args.fault_seeds))
        records = (
            matrix.baseline_records if args.mode == RunMode.BASELINE.value.lower()
            else matrix.caif_records
        )
        print(
            f"fault matrix: baseline harmful={matrix.baseline_harmful} "
            f"caif harmful={matrix.caif_harmful}"
        )
    else:
        records = []
        for instance in instances:
            if args.mode == RunMode.BASELINE.value.lower():
                records.append(run_baseline(instance))
            else:
                records.append(run_caif(instance, catalog))

    reports = report(records)
    print(format_report(reports))
    if args.out:
        write_report_json(reports, args.out)
        print(f"report written to {args.out}")
    if args.csv:
        write_per_shot_csv(reports, args.csv)
        print(f"per-shot CSV written to {args.csv}")
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.scenario:
        config.scenario_path = Path(args.scenario)
    if args.catalog:
        config.catalog_path = Path(args.catalog)
    try:
        result = run_replay(args.script, config)
    except Exception as exc:  # surfaced as a diagnostic, non-zero exit
        print(f"replay failed: {exc}", file=sys.stderr)
        return 1
    out = args.out or "replay.csv"
    result.write_csv(out)
    print(f"replayed {len(result.rows)} rows; markers:")
    for marker in result.markers:
        print(f"  t={marker.tick:>4} {marker.label:<10} "
              f"policy={marker.policy_id} cell={marker.cell_id} slice={marker.slice_id}")
    print(f"series written to {out}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog or DEFAULT_CATALOG)
    try:
        document = Path(args.contract).read_text(encoding="utf-8")
        contract = parse_contract(document)
    except (OSError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    result = validate_contract(contract, catalog)
    if result.ok:
        print(f"OK: contract {contract.id} valid against specification "
              f"{contract.specification_id}")
        return 0
    print(f"INVALID: {len(result.violations)} violation(s)", file=sys.stderr)
    for violation in result.violations:
        print(f"  {violation.field}: {violation.reason}", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="caif")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="start the gateway service and simulator")
    p_serve.add_argument("--config", help="JSON deployment config file")
    p_serve.add_argument("--scenario", help="scenario file override")
    p_serve.add_argument("--catalog", help="catalog file override")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.set_defaults(func=cmd_serve)

    p_eval = sub.add_parser("eval", help="run the evaluation harness")
    p_eval.add_argument("--mode", choices=["baseline", "caif"], required=True)
    p_eval.add_argument("--dataset", help="NDJSON dataset path (generated when omitted)")
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--n", type=int, default=500)
    p_eval.add_argument("--save-dataset", help="write the generated dataset here")
    p_eval.add_argument("--faults", action="store_true", help="run the fault-injection matrix")
    p_eval.add_argument("--fault-seeds", type=int, default=10)
    p_eval.add_argument("--catalog")
    p_eval.add_argument("--out", help="JSON report path")
    p_eval.add_argument("--csv", help="per-shot CSV path")
    p_eval.set_defaults(func=cmd_eval)

    p_replay = sub.add_parser("replay", help="replay a timed intent script")
    p_replay.add_argument("--script", required=True)
    p_replay.add_argument("--config")
    p_replay.add_argument("--scenario")
    p_replay.add_argument("--catalog")
    p_replay.add_argument("--out", help="CSV output path (default replay.csv)")
    p_replay.set_defaults(func=cmd_replay)

    p_validate = sub.add_parser("validate", help="offline contract check")
    p_validate.add_argument("--contract", required=True)
    p_validate.add_argument("--catalog")
    p_validate.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
