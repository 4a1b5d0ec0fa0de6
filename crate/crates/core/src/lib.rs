//! SLOCC overlaps, projector witnesses and their two-copy embeddings, PPT relaxations,
//! and the analytic GHZ/W thresholds.

pub mod catalog;
pub mod error;
pub mod ghzw;
pub mod hierarchy;
pub mod overlap;
pub mod sdp;
pub mod serde_util;
pub mod tensor;
pub mod witness;

pub use catalog::{random_ginibre, random_product_state, representative, StateId};
pub use error::{Error, Result};
pub use overlap::{
    maximize_slocc_overlap, overlap_objective, overlap_table, per_party_update, OptimizerConfig,
    OverlapResult, OverlapTable,
};
pub use tensor::{
    apply_local, conjugate_state, hermitian_eig, partial_transpose, vectorize, CMatrix, DensityMatrix,
    HermitianOperator, LocalOperatorTuple, PureState, C64,
};
