//! Differentiable known operators: Sobel edge magnitude, Gaussian smoothing
//! and the Hough transform with its exact adjoint.
//!
//! Every operator ships with its analytic vector-Jacobian product so that
//! scalar functionals built on top of them can be checked against central
//! finite differences (see [`gradcheck`]).

mod filter;
pub mod gradcheck;
mod transform;

pub use filter::{
    gaussian_smooth, gaussian_smooth_adjoint, sobel, sobel_adjoint, sobel_magnitude_adjoint,
    GaussianKernelSpec, SobelResponse, SOBEL_X, SOBEL_Y,
};
pub(crate) use filter::smooth_raw;
pub use gradcheck::{finite_difference_check, GradCheckReport};
pub use transform::{hough_adjoint, hough_forward};
