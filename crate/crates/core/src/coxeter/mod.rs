//! Coxeter systems, exact element arithmetic and Cayley balls.

mod ball;
mod element;
mod matrix;
pub mod presets;
mod skeleton;
mod system;

pub use ball::{
    enumerate_ball, enumerate_ball_with_limit, enumerate_group, BallExport, CayleyBall, Edge, DEFAULT_MAX_VERTICES,
    DOT_MAX_VERTICES,
};
pub use element::{shortlex_cmp, GroupElement};
pub use matrix::{CoxeterMatrix, Label, MatrixFile, MAX_RANK};
pub use skeleton::{enumerate_skeleton, BallSkeleton};
pub use system::{default_names, CoxeterSystem};
