"""Command-line front end.

Every command prints a report whose first lines start with ``#`` and echo the
command, its inputs and the effective bounds. Exit codes: 0 for a positive
result or a witness, 1 for a refutation, 2 when bounded search was
inconclusive, 3 for usage, parse and input errors.
"""
import argparse
import configparser
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .applicative import check_bounded_bisim, check_bounded_sim
from .ciu import ciu_compare
from .config import COMMAND_BOUNDS, RunConfig, read_bounds, resolve_config
from .eval import Approximator
from .flow import disentangle
from .formats import load
from .fs import check_clb, fs_eval, fs_step, parse_ext_term
from .lmc import bisim_partition, greatest_simulation
from .report import EXIT_REFUTED, EXIT_USAGE, exit_code, render
from .separator import context_witness, separate
from .syntax.env import NamedEnv
from .syntax.parser import parse_context, parse_term
from .trees import llt, llt_eq

__all__ = ["build_parser", "run", "corpus_check", "main"]

_logger = logging.getLogger(__name__)

CASE_CONFIG = "bounds.cfg"
CASE_INPUT = "input.lop"
CASE_EXPECT = "expect.txt"

_Handler = Callable[[RunConfig, Optional[NamedEnv]], object]
_HANDLERS: Dict[str, _Handler] = {}


def _command(name: str):
    def decorator(handler: _Handler) -> _Handler:
        _HANDLERS[name] = handler
        return handler

    return decorator


def _closed(config: RunConfig, env, index: int = 0):
    return parse_term(config.inputs[index], env)


def _pure(config: RunConfig, env, index: int = 0):
    return parse_term(config.inputs[index], env, allow_free=True)


def _arguments(config: RunConfig, env):
    return None if config.args_path is None else load(config.args_path, "arguments", env)


@_command("eval")
def _eval(config, env):
    return Approximator(config.strategy, config.heuristic).approximate(_closed(config, env), config.depth)


@_command("prob")
def _prob(config, env):
    return Approximator(config.strategy, config.heuristic).approximate(_closed(config, env), config.depth).interval


@_command("bisim")
def _bisim(config, env):
    m, n = _closed(config, env), _closed(config, env, 1)
    return check_bounded_bisim(
        m, n, _arguments(config, env), config.depth, config.alternation, config.strategy, config.max_states
    )


@_command("sim")
def _sim(config, env):
    m, n = _closed(config, env), _closed(config, env, 1)
    return check_bounded_sim(
        m, n, _arguments(config, env), config.depth, config.alternation, config.strategy, config.max_states
    )


@_command("ciu")
def _ciu(config, env):
    stacks = None if config.stacks_path is None else load(config.stacks_path, "stacks", env)
    return ciu_compare(
        _closed(config, env), _closed(config, env, 1), stacks, config.depth, config.heuristic
    )


@_command("llt")
def _llt(config, env):
    return llt(_pure(config, env), config.depth, config.budget, config.heuristic)


@_command("llt-eq")
def _llt_eq(config, env):
    return llt_eq(_pure(config, env), _pure(config, env, 1), config.level, config.budget, config.heuristic)


@_command("separate")
def _separate(config, env):
    m, n = _pure(config, env), _pure(config, env, 1)
    if config.context is not None:
        return context_witness(m, n, parse_context(config.context, env))
    return separate(m, n, config.level, config.budget)


@_command("fs-eval")
def _fs_eval(config, env):
    return fs_eval(parse_ext_term(config.inputs[0], env), config.steps, config.sem_depth)


@_command("fs-step")
def _fs_step(config, env):
    return fs_step(parse_ext_term(config.inputs[0], env), config.sem_depth)


@_command("clb-check")
def _clb_check(config, env):
    relation = load(config.inputs[0], "relation", env)
    return check_clb(relation, config.mode, config.steps, config.sem_depth)


@_command("disentangle")
def _disentangle(config, env):
    return disentangle(load(config.inputs[0], "assignment"))


@_command("lmc-bisim")
def _lmc_bisim(config, env):
    return bisim_partition(load(config.inputs[0], "lmc"))


@_command("lmc-sim")
def _lmc_sim(config, env):
    return greatest_simulation(load(config.inputs[0], "lmc"), jobs=config.jobs)


_INPUTS = {
    "eval": ["term"],
    "prob": ["term"],
    "bisim": ["left", "right"],
    "sim": ["left", "right"],
    "ciu": ["left", "right"],
    "llt": ["term"],
    "llt-eq": ["left", "right"],
    "separate": ["left", "right"],
    "fs-eval": ["term"],
    "fs-step": ["term"],
    "clb-check": ["relation"],
    "disentangle": ["assignment"],
    "lmc-bisim": ["chain"],
    "lmc-sim": ["chain"],
    "corpus": ["directory"],
}

_FLAGS = {
    "depth": dict(type=int, help="evaluation, stack or tree depth"),
    "alternation": dict(type=int, help="evaluate-then-apply alternations"),
    "level": dict(type=int, help="approximant level"),
    "budget": dict(type=int, help="head reduction budget per node"),
    "steps": dict(type=int, help="formal-sum reduction steps"),
    "sem_depth": dict(type=int, help="depth of the semantics used by rule spc"),
    "max_states": dict(type=int, help="exploration cap of the applicative chain"),
    "mode": dict(help="checking mode: smallstep, bigstep, upto_fs or upto_ctx"),
    "strategy": dict(choices=["cbn", "cbv"], help="evaluation strategy"),
    "jobs": dict(type=int, help="worker threads"),
}

_PATH_FLAGS = {
    "eval": (),
    "prob": (),
    "bisim": ("args_path",),
    "sim": ("args_path",),
    "ciu": ("stacks_path",),
    "separate": ("context",),
}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="plambda", description="Probabilistic λ-calculus workbench")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    for command, inputs in _INPUTS.items():
        sub = subparsers.add_parser(command)
        for name in inputs:
            sub.add_argument(name)
        sub.add_argument("-v", "--verbose", action="count", default=0, dest="verbosity")
        sub.add_argument("--defs", dest="defs_path", help="definitions file resolving names")
        for name in COMMAND_BOUNDS[command]:
            if name == "heuristic":
                sub.add_argument(
                    "--no-heuristic",
                    dest="heuristic",
                    action="store_const",
                    const=False,
                    default=None,
                    help="disable the divergence detector",
                )
            else:
                sub.add_argument("--" + name.replace("_", "-"), dest=name, default=None, **_FLAGS[name])
        for name in _PATH_FLAGS.get(command, ()):
            option = {"args_path": "--args", "stacks_path": "--stacks", "context": "--context"}[name]
            sub.add_argument(option, dest=name, default=None)
    return parser


def run(config: RunConfig) -> Tuple[int, str]:
    """Run one command and return its exit code and report text.

    Raises
    ------
    ValueError
        On parse errors and invalid inputs.
    OSError
        If an input file cannot be read.
    """
    env = None if config.defs_path is None else load(config.defs_path, "definitions")
    result = _HANDLERS[config.command](config, env)
    lines = config.header() + render(result, env)
    return exit_code(result), "\n".join(lines) + "\n"


def _case_config(case_dir: str) -> RunConfig:
    parser = configparser.ConfigParser()
    with open(os.path.join(case_dir, CASE_CONFIG), encoding="utf-8") as buff:
        parser.read_file(buff)
    if not parser.has_section("case"):
        raise ValueError(f"{CASE_CONFIG} has no [case] section")
    case = parser["case"]
    command = case.get("command")
    if not command:
        raise ValueError(f"{CASE_CONFIG} does not name a command")
    source = os.path.join(case_dir, CASE_INPUT)
    fmt = case.get("format", "definitions")
    if fmt == "definitions":
        inputs = [line.strip() for line in case.get("terms", "").splitlines() if line.strip()]
        flags = {"defs_path": source}
    else:
        inputs = [source]
        flags = {}
    for name in ("args_path", "stacks_path"):
        if case.get(name):
            flags[name] = os.path.join(case_dir, case.get(name))
    if case.get("context"):
        flags["context"] = case.get("context")
    bounds = read_bounds(os.path.join(case_dir, CASE_CONFIG), "bounds")
    return resolve_config(command, inputs, flags, bounds)


def _expectation(case_dir: str) -> Tuple[int, List[str]]:
    with open(os.path.join(case_dir, CASE_EXPECT), encoding="utf-8") as buff:
        lines = [line.rstrip("\n") for line in buff]
    if not lines or not lines[0].startswith("exit "):
        raise ValueError(f"{CASE_EXPECT} must start with 'exit <code>'")
    return int(lines[0].split()[1]), [line for line in lines[1:] if line.strip()]


def _contains_in_order(report: Sequence[str], expected: Sequence[str]) -> Optional[str]:
    position = 0
    for line in expected:
        while position < len(report) and report[position] != line:
            position += 1
        if position == len(report):
            return line
        position += 1
    return None


def _run_case(case_dir: str) -> str:
    name = os.path.basename(case_dir)
    try:
        config = _case_config(case_dir)
        code, expected = _expectation(case_dir)
        actual, report = run(config)
    except (ValueError, OSError) as err:
        return f"case {name} error: {err}"
    if actual != code:
        return f"case {name} mismatch: exit {actual}, expected {code}"
    missing = _contains_in_order(report.splitlines(), expected)
    if missing is not None:
        return f"case {name} mismatch: missing line {missing!r}"
    return f"case {name} ok"


def corpus_check(directory: str, jobs: int = 1) -> Tuple[int, str]:
    """Run every case directory under ``directory`` and summarize.

    Cases run on ``jobs`` threads; lines are reported in case-name order.
    """
    cases = sorted(
        os.path.join(directory, entry)
        for entry in os.listdir(directory)
        if os.path.isdir(os.path.join(directory, entry))
    )
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        lines = list(pool.map(_run_case, cases))
    passed = sum(line.endswith(" ok") for line in lines)
    lines.append(f"cases {len(cases)} passed {passed} failed {len(cases) - passed}")
    return (0 if passed == len(cases) else EXIT_REFUTED), "\n".join(lines) + "\n"


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        namespace = build_parser().parse_args(argv)
        flags = vars(namespace).copy()
        command = flags.pop("command")
        verbosity = flags.pop("verbosity")
        _configure_logging(verbosity)
        if command == "corpus":
            jobs = flags.get("jobs") or 1
            code, text = corpus_check(flags["directory"], jobs)
        else:
            inputs = [flags.pop(name) for name in _INPUTS[command]]
            config = resolve_config(command, inputs, flags)
            code, text = run(config)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
