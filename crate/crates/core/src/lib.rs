pub mod error;
pub mod linalg;
pub mod groups;
pub mod algebra;
pub mod repcalc;
pub mod hopf;
pub mod builtins;
pub mod clifford;
pub mod scenario;
