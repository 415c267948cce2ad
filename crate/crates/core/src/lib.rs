pub mod automata;
pub mod cli;
pub mod countermachine;
pub mod eval;
pub mod formula;
pub mod reductions;
pub mod timedword;
