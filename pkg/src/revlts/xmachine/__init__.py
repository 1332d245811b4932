from revlts.xmachine.actions import (
    UNIT,
    CommutationVerdict,
    Memory,
    RefinedAction,
    YInSources,
    commutation_check,
    from_table,
    make_add_assign,
    make_assign,
    make_test,
    syntactic_independent,
)
from revlts.xmachine.expr import ExpressionError, parse_expr
from revlts.xmachine.system import (
    Machine,
    ModelError,
    SharedSystem,
    SystemLabel,
    SystemTerm,
    enumerate_system,
    independent_labels,
    load,
    system_from_json,
)

__all__ = [
    "UNIT", "CommutationVerdict", "ExpressionError", "Machine", "Memory", "ModelError",
    "RefinedAction", "SharedSystem", "SystemLabel", "SystemTerm", "YInSources",
    "commutation_check", "enumerate_system", "from_table", "independent_labels", "load",
    "make_add_assign", "make_assign", "make_test", "parse_expr", "syntactic_independent",
    "system_from_json",
]
