pub mod bitvec;
pub mod brwt;
mod codec;
pub mod error;
pub mod format;
pub mod rel_gwt;
pub mod rel_str;
pub mod rel_wt;
pub mod relation;
pub mod seq;
pub mod space;
pub mod trace;
pub mod verify;

pub use bitvec::{BitVector, BitVectorBuilder};
pub use error::{Error, Result};
pub use relation::{
    Answer, NaiveRelation, NativeOps, Op, OpSet, Pair, Plan, Query, Relation, RelationDims,
    Strategy,
};
pub use trace::Trace;

/// Space report with `f64` arithmetic.
pub type SpaceReportF64 = space::SpaceReport<f64>;
/// Space report with `f32` arithmetic.
pub type SpaceReportF32 = space::SpaceReport<f32>;
