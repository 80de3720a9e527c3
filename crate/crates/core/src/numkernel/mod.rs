//! Numerical building blocks shared by all models.

pub mod diff;
pub mod fit;
pub mod quad;
pub mod roots;
pub mod series;
pub mod thermal;

pub use diff::{derivative_fd, try_derivative_fd};
pub use fit::{fit_asymptotic, AsymptoticFit, Basis};
pub use quad::{
    integrate_algebraic, integrate_decaying, integrate_edge_singular, integrate_finite,
    integrate_semiinf, integrate_with_breaks, QuadResult, QuadSettings,
};
pub use roots::find_root_bracketed;
pub use thermal::{bose_log, g, ZETA3, ZETA5};
