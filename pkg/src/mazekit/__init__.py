"""Deterministic maze-programming engine: game rules, optimal solving,
trace-to-program compression, design checks, staged hints, HTTP gateway."""

from .errors import (
    CapacityError,
    LimitError,
    MazeKitError,
    ParseError,
    PatchFailure,
    PreconditionError,
    SchemaError,
    StaleSessionError,
)
from .maze import (
    DEFAULT_DAMAGE,
    Direction,
    Maze,
    MonsterKind,
    maze_hash,
    parse_maze,
    serialize_maze,
)
from .program import (
    Action,
    ActionNode,
    Condition,
    ConditionKind,
    If,
    IfElse,
    Repeat,
    Sequence,
    While,
    block_count,
    parse_program,
    print_program,
    seq,
)
from .interpreter import (
    FailReason,
    Outcome,
    RunFailure,
    SimState,
    Trace,
    eval_condition,
    execute,
    initial_state,
    run_actions,
    step,
)
from .solver import (
    SolverResult,
    UnsolvableReason,
    is_solvable,
    oracle_enumerate,
    solve_low,
)
from .compressor import (
    CompressionResult,
    UnsolvableError,
    VnsConfig,
    build_program_tree,
    compress,
    patch,
    solve_high,
    vns_refine,
)
from .scaffold import (
    DesignReport,
    DesignRequirements,
    HintKind,
    HintPayload,
    HintSession,
    check_design,
    new_session,
    pattern_report,
    render_hint_text,
    request_hint,
)

__version__ = "0.1.0"
