//! Functions on tori: the ring `ℂ[℘, ℘′]`, character projections, the
//! `P_j` and `p_χ` families with their constants, and fitting back into the
//! ring.

pub mod fit;
pub mod function;
pub mod klein;
pub mod pfamily;
pub mod wpoly;

pub use fit::{fit_univariate, fit_wpoly, FitConfig};
pub use function::{character_project, probe_points, residue_at, residue_with_radius, Divisor, TorusFunction};
pub use klein::{c2c2_constants, p_small, C2C2Constants, KleinFunctions};
pub use pfamily::{cover_embedding, fit_lambda_mu, quotient_lattice, LambdaMu, PFamily};
pub use wpoly::WPoly;
