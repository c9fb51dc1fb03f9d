"""Command line interface.

Three subcommands: ``run`` executes a scenario (from a file or generated
from a seed), ``audit`` assesses a pair of exported log files, and
``validate`` checks a scenario or log file without executing anything.

Exit codes: ``run`` and ``validate`` exit 0 on success and 2 on any
error; violations found by a scenario's audits are data, not errors.
``audit`` exits 0 when the assessment finds no violations, 1 when it
finds at least one, and 2 on any error, so scripts can branch on it.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .audit import (
    AuditMode,
    derive_creator,
    local_trust_assessment,
    parse_audit_mode,
    report_to_dict,
)
from .errors import LogTrustError, MixedDocumentsError, ScenarioError
from .events import Document, LogRole, log_from_dict
from .kernel import backend_name
from .scengen import generate_scenario
from .simulator import run_scenario
from .trust import DEFAULT_TRUST_MODEL, TrustModel, parse_trust_model


@dataclass(frozen=True)
class CliConfig:
    """Everything a subcommand needs beyond its input paths."""

    subcommand: str
    mode: AuditMode = AuditMode.PROSE
    trust_model: TrustModel = DEFAULT_TRUST_MODEL
    output_format: str = "table"
    assessor: str = ""
    seed: Optional[int] = None
    export_dir: Optional[str] = None


class _CliError(Exception):
    """Internal: message already formatted for stderr."""


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise _CliError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise _CliError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def _print_json(data: Any) -> None:
    print(json.dumps(data, indent=2))


def _format_trust(trust: dict[str, float]) -> str:
    return "  ".join(f"{peer}={trust[peer]:g}" for peer in sorted(trust))


def _print_report_table(report_dict: dict[str, Any], indent: str = "") -> None:
    violations = report_dict["violations"]
    print(
        f"{indent}assessor={report_dict['assessor']}"
        f" doc={report_dict['doc_id']}"
        f" mode={report_dict['mode']}"
        f" violations={len(violations)}"
    )
    for v in violations:
        print(
            f"{indent}  {v['offender']} performed {v['verb']} at clock"
            f" {v['action_clock']} against a forbid from {v['grantor']}"
            f" (forbid clock {v['forbid_clock']},"
            f" granted at share clock {v['origin']['share_clock']})"
        )
    print(f"{indent}  trust: {_format_trust(report_dict['trust'])}")


def _describe_command(command: dict[str, Any]) -> str:
    op = command["op"]
    if op in ("create", "audit"):
        return f"{op} {command['peer']} {command['doc_id']}"
    if op == "edit":
        suffix = " (ignoring obligations)" if command.get("ignore_obligations") else ""
        return f"edit {command['peer']} {command['doc_id']} {command['verb']}{suffix}"
    if op == "batch":
        suffix = " (ignoring obligations)" if command.get("ignore_obligations") else ""
        return (
            f"batch {command['peer']} {command['doc_id']}"
            f" [{', '.join(command['verbs'])}]{suffix}"
        )
    if op == "share":
        atoms = ", ".join(
            f"{a['verb']}{'+' if a['allow'] else '-'}" for a in command["obligations"]
        )
        return f"share {command['from']} -> {command['to']} {command['doc_id']} {{{atoms}}}"
    return f"deliver {command['to']} <- {command['from']} {command['doc_id']}"


def _export_logs(trace, directory: str) -> list[str]:
    """Write every peer's final logs as importable log files."""
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if not trace.snapshots:
        return written
    for state in trace.snapshots[-1].states:
        for role in ("edit", "comm"):
            payload = {
                "doc_id": state["doc"],
                "role": role,
                "events": state[role],
            }
            path = out_dir / f"{state['peer']}_{state['doc']}_{role}.json"
            path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
            written.append(str(path))
    return written


def cmd_run(scenario_path: Optional[str], config: CliConfig) -> int:
    """Execute a scenario file (or a generated one) and print its trace.

    Exits 0 whenever the scenario executes, whether or not its audits
    found violations.
    """
    if config.seed is not None:
        scenario = generate_scenario(config.seed)
        source = f"seed {config.seed}"
    else:
        assert scenario_path is not None
        scenario = _load_json(scenario_path)
        source = scenario_path
    try:
        trace = run_scenario(scenario, mode=config.mode, trust_model=config.trust_model)
    except ScenarioError as exc:
        raise _CliError(f"{source}: {exc}") from None

    if config.export_dir:
        written = _export_logs(trace, config.export_dir)
        for path in written:
            print(f"wrote {path}", file=sys.stderr)

    if config.output_format == "json":
        _print_json(trace.to_dict())
    else:
        name = trace.name or source
        print(
            f"scenario: {name} ({len(trace.snapshots)} commands,"
            f" mode={trace.mode.value}, trust={trace.trust_model},"
            f" backend={backend_name()})"
        )
        for snapshot in trace.snapshots:
            line = f"[{snapshot.index:2d}] {_describe_command(snapshot.command)}"
            if snapshot.command["op"] != "audit":
                line += f"  clock={snapshot.clock}"
            print(line)
            if snapshot.report is not None:
                _print_report_table(snapshot.report, indent="     ")
    return 0


def _load_log(path: str, expected_role: LogRole):
    data = _load_json(path)
    try:
        doc_id, log = log_from_dict(data, where=path)
    except (LogTrustError, ValueError) as exc:
        raise _CliError(str(exc)) from None
    if log.role is not expected_role:
        raise _CliError(f"{path}: expected a {expected_role.value} log, got {log.role.value}")
    return doc_id, log


def cmd_audit(edit_log_path: str, comm_log_path: str, config: CliConfig) -> int:
    """Assess a pair of exported logs and print the audit report.

    Exits 0 with no violations, 1 with violations, 2 on input errors.
    """
    edit_doc, edit_log = _load_log(edit_log_path, LogRole.EDIT)
    comm_doc, comm_log = _load_log(comm_log_path, LogRole.COMM)
    if edit_doc != comm_doc:
        raise _CliError(
            str(
                MixedDocumentsError(
                    f"logs describe different documents: {edit_doc!r} vs {comm_doc!r}"
                )
            )
        )
    try:
        creator = derive_creator(edit_log)
        doc = Document(edit_doc, creator) if creator else None
        report = local_trust_assessment(
            edit_log,
            comm_log,
            doc,
            config.assessor,
            config.trust_model,
            mode=config.mode,
        )
    except LogTrustError as exc:
        raise _CliError(f"{edit_log_path}: {exc}") from None
    if report.doc_id != edit_doc:
        report = dataclasses.replace(report, doc_id=edit_doc)
    report_dict = report_to_dict(report)
    if config.output_format == "json":
        _print_json(report_dict)
    else:
        _print_report_table(report_dict)
    return 1 if report.violations else 0


def cmd_validate(path: str, config: CliConfig) -> int:
    """Check a scenario or log file without executing anything."""
    del config  # validation has no knobs
    data = _load_json(path)
    if isinstance(data, dict) and "commands" in data:
        try:
            from .simulator import parse_scenario

            _, commands = parse_scenario(data)
        except ScenarioError as exc:
            raise _CliError(f"{path}: {exc}") from None
        print(f"{path}: valid scenario ({len(commands)} commands)")
        return 0
    if isinstance(data, dict) and "events" in data:
        try:
            doc_id, log = log_from_dict(data, where=path)
        except (LogTrustError, ValueError) as exc:
            raise _CliError(str(exc)) from None
        print(
            f"{path}: valid {log.role.value} log for {doc_id!r}"
            f" ({len(log)} events)"
        )
        return 0
    raise _CliError(f"{path}: neither a scenario (commands) nor a log (events) file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logtrust",
        description="Audit obligation compliance in decentrally shared document logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--mode",
        default="prose",
        choices=("prose", "literal"),
        help="violation rule: latest obligation governs (prose) or any prior forbid condemns (literal)",
    )
    common.add_argument(
        "--trust-model",
        default=DEFAULT_TRUST_MODEL.describe(),
        metavar="MODEL",
        help="multiplicative[:factor] or fixed[:delta] (default %(default)s)",
    )
    common.add_argument(
        "--format",
        default="table",
        choices=("table", "json"),
        help="output format (default %(default)s)",
    )

    run = sub.add_parser("run", parents=[common], help="execute a scenario")
    run.add_argument("scenario", nargs="?", help="scenario JSON file")
    run.add_argument("--seed", type=int, help="generate the scenario from a seed instead")
    run.add_argument(
        "--export-logs",
        metavar="DIR",
        help="write every peer's final logs to DIR as JSON files",
    )

    audit = sub.add_parser("audit", parents=[common], help="audit exported log files")
    audit.add_argument("edit_log", help="edit log JSON file")
    audit.add_argument("comm_log", help="communication log JSON file")
    audit.add_argument("--assessor", required=True, help="peer performing the assessment")

    validate = sub.add_parser("validate", help="check a scenario or log file")
    validate.add_argument("path", help="JSON file to validate")
    return parser


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        subcommand=args.command,
        mode=parse_audit_mode(args.mode) if hasattr(args, "mode") else AuditMode.PROSE,
        trust_model=(
            parse_trust_model(args.trust_model)
            if hasattr(args, "trust_model")
            else DEFAULT_TRUST_MODEL
        ),
        output_format=getattr(args, "format", "table"),
        assessor=getattr(args, "assessor", ""),
        seed=getattr(args, "seed", None),
        export_dir=getattr(args, "export_logs", None),
    )


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run" and (args.scenario is None) == (args.seed is None):
        parser.error("run needs a scenario file or --seed, but not both")
    try:
        config = _config_from_args(args)
        if args.command == "run":
            return cmd_run(args.scenario, config)
        if args.command == "audit":
            return cmd_audit(args.edit_log, args.comm_log, config)
        return cmd_validate(args.path, config)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
