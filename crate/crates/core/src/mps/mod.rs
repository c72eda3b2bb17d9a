//! Matrix product state tensors, transfer operators and the closed-form
//! bounds built from them.

pub mod bounds;
pub mod gamma;
pub mod tensor;
pub mod transfer;

pub use bounds::{epsilon_bound, q_matrices, BoundInputs, BoundSuite, EpsilonBound, QMatrices};
pub use gamma::{gamma_state, norm_sandwich_check, SandwichCase, SandwichReport};
pub use tensor::{aklt_boundary_tensors, aklt_site_tensor, SiteTensor};
pub use transfer::{a_of_n, compose_and_power, fixed_point, transfer_operator, FixedPoint, TransferOperator};
