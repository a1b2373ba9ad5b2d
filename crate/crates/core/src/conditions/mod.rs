//! Sufficient and necessary conditions for boundedness of the maximal
//! operator, evaluated numerically on grids and cube families.

pub mod checks;
pub mod kernel;
pub mod local;
pub mod radial;
mod report;
pub mod sums;
pub mod uinf;

pub use checks::{run_check, CheckKind, ProbeConfig};
pub use kernel::{f_kernel, pow_ext, psi, t_q, xi_q, LocalExponent};
pub use local::{a_ratio, lh0_constant, lhinf_constant, ninf_integral};
pub use radial::{convexity_bound_check, ussc_check};
pub use report::{
    Aggregation, ConditionParams, ConditionReport, CubeTerm, Verdict, VerdictRule,
};
pub use sums::{sum_intcon, sum_strf, sum_weakf};
pub use uinf::{uinf_nested, uinf_sum, uinf_term, UinfMode};
