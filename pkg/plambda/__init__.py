from . import formats, fs, strategies, syntax, utils
from .applicative import (
    adequacy_check,
    build_applicative_lmc,
    check_bounded_bisim,
    check_bounded_sim,
    replay_certificate,
)
from .ciu import ciu_compare, stack_prob
from .eval import approx_semantics, converge_prob, semantics_lub, smallstep_semantics
from .flow import disentangle, max_flow
from .formats.registry import get_known_formats, load, loads
from .fs import check_clb, fs_eval, fs_step
from .lmc import MLMC, bisim_partition, greatest_simulation, largest_simulation, refine_partition
from .separator import separate, verify_witness
from .strategies.registry import get_known_strategies
from .syntax import parse_term, print_term
from .trees import llt, llt_eq

__version__ = "0.1.0"
