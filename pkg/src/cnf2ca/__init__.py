"""cnf2ca: compile CNF formulas into two-dimensional cellular automata,
analyze injectivity on bounded configurations, and synthesize/verify
inverse automata as unsatisfiability refutations."""

__version__ = "0.1.0"

from .analysis import (
    BudgetExceeded,
    ChainDecomposition,
    CollisionResult,
    InjectivityResult,
    class_injective,
    class_injective_bruteforce,
    collision_search,
    decide_injectivity,
    decompose,
    random_configuration,
    random_skeleton_configuration,
)
from .automaton import (
    BLUE,
    RED,
    CellState,
    ConfigFormatError,
    Configuration,
    QUIESCENT,
    StateSet,
    cell_classification,
    color,
    direction,
    enumerate_states,
    is_quiescent,
    is_similar,
    labels_of,
    local_rule_violation,
    parse_config,
    relabel,
    state_pattern,
    state_to_text,
    step,
    suc,
    successor_of,
    write_config,
)
from .catable import (
    CaTable,
    decode_ca,
    encode_ca,
    materialize_table,
    read_catable,
    step_with_table,
    write_catable,
)
from .formula import (
    ABSENT,
    NEG,
    POS,
    CnfFormula,
    FormulaError,
    enumerate_assignments,
    from_clauses,
    gen_onto_php,
    gen_weak_php,
    is_unsatisfiable,
    normalize_odd,
    parse_dimacs,
    satisfying_assignments,
    write_dimacs,
)
from .inverse import (
    Counterexample,
    GlobalCheckResult,
    InverseAutomaton,
    LocalCheckResult,
    Refutation,
    RefutationFormatError,
    RefutationVerdict,
    SatisfiableFormulaError,
    apply_inverse,
    check_inv_local,
    check_inverse_global,
    corrupt_refutation,
    default_t,
    full_window_offsets,
    invert_configuration,
    make_refutation,
    mutate_table_row,
    read_refutation,
    sequence_code,
    sequence_decode,
    size_report,
    structural_automaton,
    structural_inverse,
    verify_refutation,
    write_refutation,
)
from .tableau import build_table, render_table, similar, with_labels, witness_pair
from .translate import (
    Add,
    And,
    Eq,
    Exists,
    Forall,
    FormulaSyntaxError,
    Le,
    Mul,
    Not,
    Num,
    Or,
    PropAnd,
    PropConst,
    PropNot,
    PropOr,
    PropVar,
    Rel,
    Var,
    depth,
    eval_term,
    format_prop,
    pairing,
    parse_delta0,
    pw_translate,
    size,
    size_depth_scan,
    unpair,
)
