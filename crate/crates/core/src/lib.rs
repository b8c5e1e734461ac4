//! Exact decision and certified escape-time bounds for linear dynamical
//! systems `x' = Ax` (or `x_{n+1} = A x_n`) on compact rational polytopes,
//! with a ball-arithmetic simulator for cross-checking the bounds.

pub mod ball;
pub mod bounds;
pub mod decide;
pub mod directed;
pub mod heights;
pub mod instance_file;
pub mod logscale;
pub mod lp;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod serde_rational;
pub mod simulate;
pub mod spectrum;
