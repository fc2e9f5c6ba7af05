import pytest
from fixtures import (
    checker_modes,
    convergent_terms,
    corpus_directory,
    format_extensions,
    invalid_extensions,
    random_assignments,
    random_chains,
    random_redexes,
    random_terms,
    strategies,
    venn_assignment,
    wrong_strategies,
)
