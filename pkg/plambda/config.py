"""Run configuration and bounds files.

Bounds are resolved in increasing priority from the built-in defaults, the
``[defaults]`` section of the file named by ``PLAMBDA_BOUNDS``, the ``[bounds]``
section of a corpus case's ``bounds.cfg``, and explicit command-line flags.
"""
import configparser
import logging
import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .applicative import DEFAULT_ALTERNATION, DEFAULT_DEPTH, DEFAULT_MAX_STATES
from .ciu import DEFAULT_STACK_DEPTH
from .fs.reduction import DEFAULT_SEM_DEPTH, DEFAULT_STEPS
from .separator import DEFAULT_LEVEL
from .trees import DEFAULT_BUDGET
from .utils import PathType, input_path

__all__ = [
    "RunConfig",
    "BOUNDS_ENV",
    "COMMAND_BOUNDS",
    "read_bounds",
    "environment_defaults",
    "resolve_config",
]

_logger = logging.getLogger(__name__)

BOUNDS_ENV = "PLAMBDA_BOUNDS"

DEFAULT_EVAL_DEPTH = 10
DEFAULT_TREE_DEPTH = 3

# the bounds each command reads, in the order they are echoed in report headers
COMMAND_BOUNDS: Dict[str, Tuple[str, ...]] = {
    "eval": ("strategy", "depth", "heuristic"),
    "prob": ("strategy", "depth", "heuristic"),
    "bisim": ("strategy", "depth", "alternation", "max_states"),
    "sim": ("strategy", "depth", "alternation", "max_states"),
    "ciu": ("depth", "heuristic"),
    "llt": ("depth", "budget", "heuristic"),
    "llt-eq": ("level", "budget", "heuristic"),
    "separate": ("level", "budget"),
    "fs-eval": ("steps", "sem_depth"),
    "fs-step": ("sem_depth",),
    "clb-check": ("mode", "steps", "sem_depth"),
    "disentangle": (),
    "lmc-bisim": (),
    "lmc-sim": ("jobs",),
    "corpus": ("jobs",),
}

_POSITIVE_BOUNDS = ("depth", "alternation", "level", "budget", "steps", "sem_depth", "max_states", "jobs")

_COMMAND_DEPTHS = {
    "eval": DEFAULT_EVAL_DEPTH,
    "prob": DEFAULT_EVAL_DEPTH,
    "bisim": DEFAULT_DEPTH,
    "sim": DEFAULT_DEPTH,
    "ciu": DEFAULT_STACK_DEPTH,
    "llt": DEFAULT_TREE_DEPTH,
}


@dataclass
class RunConfig:
    """Everything a single command needs.

    ``depth`` is ``None`` until resolved; it then takes the default of the
    command (approximation depth, applicative depth, stack depth or tree depth).
    """

    command: str
    inputs: List[str] = field(default_factory=list)
    strategy: str = "cbn"
    depth: Optional[int] = None
    alternation: int = DEFAULT_ALTERNATION
    level: int = DEFAULT_LEVEL
    budget: int = DEFAULT_BUDGET
    steps: int = DEFAULT_STEPS
    sem_depth: int = DEFAULT_SEM_DEPTH
    max_states: int = DEFAULT_MAX_STATES
    mode: str = "smallstep"
    heuristic: bool = True
    args_path: Optional[str] = None
    stacks_path: Optional[str] = None
    defs_path: Optional[str] = None
    context: Optional[str] = None
    jobs: int = 1
    verbosity: int = 0

    def __post_init__(self):
        if self.command not in COMMAND_BOUNDS:
            raise ValueError(
                f"Unknown command {repr(self.command)}. Available values are {list(COMMAND_BOUNDS)}"
            )
        if self.depth is None:
            self.depth = _COMMAND_DEPTHS.get(self.command, DEFAULT_EVAL_DEPTH)
        for name in _POSITIVE_BOUNDS:
            value = getattr(self, name)
            if value < 1:
                raise ValueError(f"{name} must be positive, got {value}")

    def bounds(self) -> List[Tuple[str, Any]]:
        return [(name, getattr(self, name)) for name in COMMAND_BOUNDS[self.command]]

    def header(self) -> List[str]:
        """Report header lines echoing the command, its inputs and its effective bounds."""
        lines = [f"# plambda {self.command}"]
        lines.extend(f"# input {text}" for text in self.inputs)
        for name, path in (("defs", self.defs_path), ("args", self.args_path), ("stacks", self.stacks_path)):
            if path is not None:
                lines.append(f"# {name} {os.path.basename(path)}")
        if self.context is not None:
            lines.append(f"# context {self.context}")
        bounds = " ".join(f"{name}={_show(value)}" for name, value in self.bounds())
        if bounds:
            lines.append(f"# bounds {bounds}")
        return lines


def _show(value) -> str:
    if isinstance(value, bool):
        return "on" if value else "off"
    return str(value)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_INT_FIELDS = set(_POSITIVE_BOUNDS)


def _coerce(section: configparser.SectionProxy) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for key in section:
        name = key.replace("-", "_")
        if name not in _FIELD_TYPES or name in ("command", "inputs"):
            raise ValueError(f"Unknown bound {repr(key)} in section [{section.name}]")
        if name in _INT_FIELDS:
            values[name] = section.getint(key)
        elif name == "heuristic":
            values[name] = section.getboolean(key)
        else:
            values[name] = section.get(key)
    return values


def read_bounds(path: PathType, section: str = "bounds") -> Dict[str, Any]:
    """Read one section of a bounds file; a missing section gives no overrides."""
    parser = configparser.ConfigParser()
    with input_path(path).open(encoding="utf-8") as buff:
        parser.read_file(buff)
    if not parser.has_section(section):
        return {}
    return _coerce(parser[section])


def environment_defaults(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """The ``[defaults]`` section of the bounds file named by ``PLAMBDA_BOUNDS``, if set."""
    environ = os.environ if environ is None else environ
    path = environ.get(BOUNDS_ENV)
    if not path:
        return {}
    _logger.debug("Reading default bounds from %s", path)
    return read_bounds(path, "defaults")


def resolve_config(
    command: str,
    inputs: List[str],
    flags: Mapping[str, Any],
    case_bounds: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Merge the four sources of bounds; flags set to ``None`` are absent."""
    values: Dict[str, Any] = {}
    values.update(environment_defaults(environ))
    values.update(case_bounds or {})
    values.update({key: value for key, value in flags.items() if value is not None})
    return RunConfig(command, list(inputs), **values)
