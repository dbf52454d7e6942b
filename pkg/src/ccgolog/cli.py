"""Command line interface.

Exit codes: 0 completed/executable, 2 blocked, 3 parse or validation error,
4 step limit reached.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import scenarios
from .domain import expand_macros, validate_domain
from .engine import ProjectionResult, project
from .errors import DomainError, ParseError
from .parser import parse_domain, parse_program
from .report import decimal_text, format_trace, trace_document

EXIT_OK = 0
EXIT_BLOCKED = 2
EXIT_INPUT_ERROR = 3
EXIT_STEP_LIMIT = 4

_STATUS_EXIT = {"completed": EXIT_OK, "blocked": EXIT_BLOCKED, "step-limit": EXIT_STEP_LIMIT}


def _load_inputs(domain_path: str, program_path: str):
    with open(domain_path, encoding="utf-8") as fh:
        domain_text = fh.read()
    with open(program_path, encoding="utf-8") as fh:
        program_text = fh.read()
    dom = validate_domain(parse_domain(domain_text))
    surface = parse_program(program_text)
    return expand_macros(surface, dom)


def _run(args) -> tuple[ProjectionResult, object]:
    core, dom = _load_inputs(args.domain, args.program)
    return project(core, dom, max_steps=args.max_steps), dom


def _cmd_project(args) -> int:
    result, dom = _run(args)
    text = format_trace(trace_document(result, dom), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return _STATUS_EXIT[result.status]


def _cmd_check(args) -> int:
    result, _ = _run(args)
    if result.status == "completed":
        print(f"executable: {len(result.trace)} action(s), "
              f"final time {decimal_text(result.situation.start)}")
    elif result.status == "blocked":
        print(f"not executable: {result.reason}")
    else:
        print(f"undecided: step limit of {result.steps} reached")
    return _STATUS_EXIT[result.status]


def _cmd_bench(args) -> int:
    core, dom = scenarios.load(args.scenario)
    worst = EXIT_OK
    for run in range(1, args.repeat + 1):
        started = time.perf_counter()
        result = project(core, dom, max_steps=args.max_steps)
        elapsed = time.perf_counter() - started
        print(f"{args.scenario}\trun {run}\t{elapsed:.3f} s\t"
              f"{len(result.trace)} acts\t{result.steps} steps\t{result.status}")
        worst = max(worst, _STATUS_EXIT[result.status])
    return worst


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ccgolog",
        description="Project timestamped action traces of event-driven concurrent robot plans.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--domain", required=True, help="domain file")
        p.add_argument("--program", required=True, help="program file")
        p.add_argument("--max-steps", type=int, default=100000)

    p_project = sub.add_parser("project", help="print the projected trace")
    add_io(p_project)
    p_project.add_argument("--format", choices=("text", "json"), default="text")
    p_project.add_argument("--out", help="write the trace here instead of stdout")
    p_project.set_defaults(func=_cmd_project)

    p_check = sub.add_parser("check", help="report only whether the program is executable")
    add_io(p_check)
    p_check.set_defaults(func=_cmd_check)

    p_bench = sub.add_parser("bench", help="time the bundled scenarios")
    p_bench.add_argument("--scenario", choices=("intro", "opportunity", "long"),
                         required=True)
    p_bench.add_argument("--repeat", type=int, default=1)
    p_bench.add_argument("--max-steps", type=int, default=100000)
    p_bench.set_defaults(func=_cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
