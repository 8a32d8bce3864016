//! Linear algebra over F2 and F2[U].

mod f2;
mod homology;
mod umatrix;
mod upoly;

pub use f2::{BitVec, Echelon, F2Matrix};
pub use homology::{
    f2_homology, f2_self_homology, in_image, solve_in_image, u_homology, u_torsion_order,
    HomologySummary, TorsionOrder,
};
pub use umatrix::{smith_normal_form, Smith, UMatrix};
pub use upoly::UPoly;
