//! Prolate eigenfunctions of the time-limited band-limiting operator, the
//! quaternion tensor-product basis and its verification.

mod basis1d;
mod basis2d;
mod verify;

pub use basis1d::{
    build_sinc_operator, composite_gauss, eig_prolate_1d, eig_prolate_grid, extend_eigenfunction, gauss_legendre,
    i_power, nystrom_matrix, Kernel, ProlateBasis1D, EIGEN_FLOOR,
};
pub use basis2d::{build_qpswf_basis, tensor_order, BasisSet2D, Expansion, Qpswf2D, SepTerm};
pub use verify::{
    gram_matrix, gram_tensor, plane_gram_1d, time_gram_1d, verify_allpass, verify_finite_qft, verify_lowpass,
    AllpassCheck, FiniteQftCheck, GramDomain,
};
