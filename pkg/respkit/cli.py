"""
Command-line front end.

  respkit validate  MODEL
  respkit enumerate MODEL [--scope all|inter-org] [--matrix FILE] [--register OUT]
  respkit diff      BEFORE AFTER [--format md|dot]
  respkit analyze   MODEL --agent ID [--assoc both|forward|none]
  respkit render    MODEL [--dot OUT]
  respkit export    REGISTER [--csv OUT] [--md OUT]
  respkit triage    REGISTER --clause ID --condition TEXT --consequences TEXT
                    --likelihood L --severity S [--action TEXT]
  respkit status    REGISTER --clause ID --set STATUS

MODEL may be a path or a bundled short name (`as-is`, `to-be`, ...).
Exit status: 0 success, 1 domain error (invalid model, unknown entity, bad
register), 2 usage or I/O problem. Reports go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from . import __version__
from .analysis import AssocMode, ClosureConfig, control_boundary, diff
from .dsl import ParseDiagnostic, format_diagnostic, parse_file
from .errors import InvalidModel, RespkitError
from .hazard import ApplicabilityMatrix, enumerate_clauses, load_matrix, parse_scope
from .model import Model
from .register import export_csv, init_register, load_register, merge, save_register, set_status, triage
from .registry import resolve_matrix_path, resolve_model_path
from .report import boundary_report_md, diff_report, register_report_md, to_dot
from .settings import Settings, configure_logging, load_settings
from .storage import write_text_atomic

logger = logging.getLogger(__name__)

_COLORS = {"error": "\033[31m", "warning": "\033[33m"}
_RESET = "\033[0m"


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _write_out(text: str, stream: Optional[TextIO] = None) -> None:
    """Write to stdout, falling back to UTF-8 bytes on consoles that cannot encode the text."""
    stream = stream or sys.stdout
    try:
        stream.write(text)
    except UnicodeEncodeError:
        stream.buffer.write(text.encode("utf-8"))
    stream.flush()


def _use_color(settings: Settings) -> bool:
    if settings.no_color:
        return False
    try:
        return sys.stderr.isatty()
    except (AttributeError, ValueError):
        return False


def _report_diagnostics(path: str, diags: Sequence[ParseDiagnostic], settings: Settings) -> None:
    color = _use_color(settings)
    for d in diags:
        line = format_diagnostic(path, d)
        if color:
            line = f"{_COLORS.get(d.severity, '')}{line}{_RESET}"
        print(line, file=sys.stderr)


def _resolve_model(arg: str, settings: Settings) -> str:
    path = resolve_model_path(arg, settings.data_dir)
    if path is None:
        raise FileNotFoundError(f"no such model file or bundled model: {arg}")
    return path


def _load_model(arg: str, settings: Settings) -> Model:
    path = _resolve_model(arg, settings)
    result = parse_file(path)
    _report_diagnostics(path, result.diagnostics, settings)
    if not result.ok:
        raise InvalidModel(f"{path}: {len(result.errors)} error(s)")
    return result.model


# ---------------- commands ----------------

def cmd_validate(args, settings: Settings) -> int:
    path = _resolve_model(args.model, settings)
    result = parse_file(path)
    _report_diagnostics(path, result.diagnostics, settings)
    return 0 if result.ok else 1


def cmd_enumerate(args, settings: Settings) -> int:
    model_path = _resolve_model(args.model, settings)
    model = _load_model(model_path, settings)
    matrix_path = args.matrix or resolve_matrix_path(settings.data_dir)
    matrix = load_matrix(matrix_path) if matrix_path else ApplicabilityMatrix.default()
    skeletons = enumerate_clauses(model, parse_scope(args.scope), matrix)

    if args.register:
        reg_path = Path(args.register)
    elif Path(args.model).is_file():
        reg_path = Path(model_path).with_suffix(".rmreg")
    else:
        # bundled model: keep the register out of the data directory
        reg_path = Path.cwd() / (Path(model_path).stem + ".rmreg")
    if reg_path.exists():
        register, summary = merge(load_register(reg_path), skeletons)
    else:
        register = init_register(skeletons, model.name)
        summary = f"kept=0 added={len(register)} orphaned=0"
    save_register(register, reg_path)
    _write_out(f"{summary} -> {reg_path}\n")
    return 0


def cmd_diff(args, settings: Settings) -> int:
    before = _load_model(args.before, settings)
    after = _load_model(args.after, settings)
    d = diff(before, after)
    _write_out(to_dot(after, highlight=d) if args.format == "dot" else diff_report(d))
    return 0


def cmd_analyze(args, settings: Settings) -> int:
    model = _load_model(args.model, settings)
    report = control_boundary(model, args.agent, ClosureConfig(follow_assoc=AssocMode(args.assoc)))
    _write_out(boundary_report_md(report))
    return 0


def cmd_render(args, settings: Settings) -> int:
    text = to_dot(_load_model(args.model, settings))
    if args.dot:
        write_text_atomic(args.dot, text)
    else:
        _write_out(text)
    return 0


def cmd_export(args, settings: Settings) -> int:
    register = load_register(args.register)
    if args.csv:
        write_text_atomic(args.csv, export_csv(register))
    if args.md:
        write_text_atomic(args.md, register_report_md(register))
    if not (args.csv or args.md):
        _write_out(export_csv(register))
    return 0


def cmd_triage(args, settings: Settings) -> int:
    register = triage(
        load_register(args.register),
        args.clause,
        condition=args.condition,
        consequences=args.consequences,
        likelihood=args.likelihood,
        severity=args.severity,
        action=args.action,
    )
    save_register(register, args.register)
    _write_out(f"triaged {args.clause}\n")
    return 0


def cmd_status(args, settings: Settings) -> int:
    register = set_status(load_register(args.register), args.clause, args.set)
    save_register(register, args.register)
    _write_out(f"{args.clause}: {register.clause(args.clause).status.value}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgumentParser(prog="respkit", description="Responsibility modelling and risk-clause toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = ap.add_subparsers(dest="command", metavar="command", parser_class=_ArgumentParser)
    sub.required = True

    p = sub.add_parser("validate", help="parse and check a model")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("enumerate", help="enumerate risk-clause skeletons into a register")
    p.add_argument("model")
    p.add_argument("--scope", default="all", choices=["all", "inter-org"])
    p.add_argument("--matrix", help="applicability matrix YAML (default: bundled matrix)")
    p.add_argument("--register", help="register file (default: model path with .rmreg suffix; bundled models write to the current directory)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("diff", help="compare an as-is model with a to-be model")
    p.add_argument("before")
    p.add_argument("after")
    p.add_argument("--format", default="md", choices=["md", "dot"])
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("analyze", help="control boundary of an agent")
    p.add_argument("model")
    p.add_argument("--agent", required=True)
    p.add_argument("--assoc", default=AssocMode.BOTH.value, choices=[m.value for m in AssocMode])
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("render", help="emit a Graphviz DOT diagram")
    p.add_argument("model")
    p.add_argument("--dot", help="output file (default: stdout)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("export", help="export a register as CSV and/or Markdown")
    p.add_argument("register")
    p.add_argument("--csv")
    p.add_argument("--md")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("triage", help="record the analysis of one clause")
    p.add_argument("register")
    p.add_argument("--clause", required=True)
    p.add_argument("--condition", required=True)
    p.add_argument("--consequences", required=True)
    p.add_argument("--likelihood", required=True)
    p.add_argument("--severity", required=True)
    p.add_argument("--action", default="")
    p.set_defaults(func=cmd_triage)

    p = sub.add_parser("status", help="change the status of one clause")
    p.add_argument("register")
    p.add_argument("--clause", required=True)
    p.add_argument("--set", required=True, help="Open, Triaged, Accepted or Mitigated")
    p.set_defaults(func=cmd_status)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    settings = load_settings()
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        print(f"respkit: error: {e}", file=sys.stderr)
        return 2
    configure_logging(settings, args.verbose)
    try:
        return args.func(args, settings)
    except RespkitError as e:
        print(f"respkit: error: {e}", file=sys.stderr)
        return 1
    except (OSError, UnicodeDecodeError) as e:
        print(f"respkit: error: {e}", file=sys.stderr)
        return 2
