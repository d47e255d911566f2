//! Finite-memory strategies: validation, simulation and file exchange.

mod automaton;
mod file;
mod simulate;
mod validate;

pub use automaton::{StrategyAutomaton, Transition};
pub use file::{export_strategy, import_strategy, StrategyFileError};
pub use simulate::{
    parse_input, simulate, EnvPolicy, PlayTrace, RandomEnv, ScriptedEnv, SimError, TerminalEnv,
    Termination,
};
pub use validate::{
    validate, validate_with, Lasso, Objective, ProductNode, Undefined, ValidationReport,
    MAX_WITNESSES,
};
