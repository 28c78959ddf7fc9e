pub mod acceptance;
pub mod cli;
pub mod complex;
pub mod concordance;
pub mod f2;
pub mod invariants;
pub mod ring;
pub mod staircase;
pub mod surgery;
