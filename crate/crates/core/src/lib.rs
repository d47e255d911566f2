pub mod decomp;
pub mod expr;
pub mod game;
pub mod grid;
pub mod solver;
pub mod strategy;
pub mod synth;
