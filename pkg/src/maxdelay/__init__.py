"""Max-automata, cap-m equivalence classes and delay-game simulation."""

from .automaton import (
    And,
    Bounded,
    Inc,
    MaxAutomaton,
    MaxOp,
    Not,
    Or,
    Reset,
    RunTrace,
    apply_ops,
    eval_acceptance,
    run_finite,
)
from .errors import (
    BudgetExceeded,
    ContractError,
    IllegalMove,
    MaxDelayError,
    ParseError,
    StructuralError,
)

__all__ = [
    "And",
    "Bounded",
    "BudgetExceeded",
    "ContractError",
    "IllegalMove",
    "Inc",
    "MaxAutomaton",
    "MaxDelayError",
    "MaxOp",
    "Not",
    "Or",
    "ParseError",
    "Reset",
    "RunTrace",
    "StructuralError",
    "apply_ops",
    "eval_acceptance",
    "run_finite",
]
