"""Founded and constraint semantics for rules with negation, quantification and aggregation."""

from .analysis import constants_of, dependency_graph, domain_of, validate_declarations
from .errors import (
    BudgetExceeded,
    DeclarationError,
    FoundalogError,
    InconsistencyError,
    OracleScaleError,
    ParseError,
)
from .evaluation import F, T, UD, Interpretation, TruthValue, derivable
from .parser import parse
from .semantics import (
    ConstraintModelSet,
    FoundedModel,
    check_model,
    constraint_models,
    founded,
    founded0,
    unfounded_sets_greatest,
)
from .syntax import Atom, Lit, Program, format_program
from .transform import complete, name_neg

__all__ = [
    "Atom", "BudgetExceeded", "ConstraintModelSet", "DeclarationError", "F",
    "FoundalogError", "FoundedModel", "InconsistencyError", "Interpretation", "Lit",
    "OracleScaleError", "ParseError", "Program", "T", "TruthValue", "UD",
    "check_model", "complete", "constants_of", "constraint_models", "dependency_graph",
    "derivable", "domain_of", "format_program", "founded", "founded0", "name_neg", "parse",
    "unfounded_sets_greatest", "validate_declarations",
]
