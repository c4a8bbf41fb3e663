"""Knowledge preconditions for SharedPlans and the discourse structure they explain."""

from .discourse import Discourse, UtteranceEvent, current_structure, process_event
from .knowledge import (
    IdConstraint,
    OracleGap,
    OracleTable,
    has_recipe,
    has_sat_descr,
    held_recipes,
    id_params,
    suff_for_id,
    unidentified_params,
)
from .mental import MentalFact, MentalStore
from .plans import (
    KB,
    Plan,
    RequirementKey,
    apply_establishment,
    bcba,
    check_fsp,
    infer_subsidiary,
    mbcbag,
    missing_requirements,
)
from .recipes import R_EMPTY, Constraint, Recipe, RecipeRegistry
from .sexpr import ParseError, SharedPlanError
from .terms import ActionDescr, AgentSet, ParamDescr, Signature, descr_equal, mk_action

__all__ = [
    "KB", "R_EMPTY", "ActionDescr", "AgentSet", "Constraint", "Discourse", "IdConstraint",
    "MentalFact", "MentalStore", "OracleGap", "OracleTable", "ParamDescr", "ParseError", "Plan",
    "Recipe", "RecipeRegistry", "RequirementKey", "SharedPlanError", "Signature", "UtteranceEvent",
    "apply_establishment", "bcba", "check_fsp", "current_structure", "descr_equal", "has_recipe",
    "has_sat_descr", "held_recipes", "id_params", "infer_subsidiary", "mbcbag", "missing_requirements",
    "mk_action", "process_event", "suff_for_id", "unidentified_params",
]
