//! Exact exponential sums with sparse polynomials over prime fields.
//!
//! The crate evaluates sums `S_χ(Ψ) = Σ_{x ≠ 0} χ(x) e_p(Ψ(x))` exactly (up to
//! floating rounding) through table-driven arithmetic, counts the additive and
//! multiplicative quantities that control their size (multiplicative energy,
//! `D_×`, `N(F, G, H)`, the `J`/`I` distributions) with paired oracle and
//! optimized counters, and evaluates a catalog of upper-bound expressions for
//! quadrinomial sums.
//!
//! Integer counting is exact (`u128` accumulators). Floating-point work is
//! generic over [`Scalar`], implemented for `f32` and `f64`; the `*64` aliases
//! below are what the rest of the workspace uses.

pub mod bounds;
pub mod charsum;
pub mod convolution;
pub mod energy;
pub mod error;
pub mod field;
pub mod group;
pub mod params;
pub mod poly;
pub mod scalar;

pub use bounds::{
    ccp_bound, compare_bounds, cp_bound, dx_bound, gcd_bound, i_sum_bound, j_sum_bound,
    lemma_t_bound, n_triples_bound, petshp_quadlinear_bound, shifted_energy_bound, trivial_bound,
    weil_bound, BoundEntry, BoundName, BoundReport, GcdBound, PiecewiseBound, Regime,
};
pub use charsum::{
    bilinear_sum, quadlinear_sum, sum_decomposed, sum_decomposed_with_budget, sum_exact,
    CharacterIndex, QuadWeights, SumValue, Weights3,
};
pub use energy::{
    cauchy_step, d_times, d_times_oracle, i_distribution, j_distribution, mult_energy,
    mult_energy_oracle, n_triples, n_triples_oracle, shifted_energy, CauchyStep, CountValue,
    Distribution, Method, TripleCounter,
};
pub use error::{Error, Result};
pub use field::{FieldCtx, ResidueSet};
pub use group::{power_image, product_set, subgroup_of_order, ImageWithMultiplicity, Subgroup};
pub use params::{gcd_params, GcdParams, RoleMode};
pub use poly::{SparsePoly, Term};
pub use scalar::Scalar;

pub type Field64 = FieldCtx<f64>;
pub type Field32 = FieldCtx<f32>;
pub type Sum64 = SumValue<f64>;
pub type Sum32 = SumValue<f32>;
pub type Report64 = BoundReport<f64>;
pub type Weights64 = Weights3<f64>;
pub type QuadWeights64 = QuadWeights<f64>;
pub type Complex64 = num_complex::Complex<f64>;
