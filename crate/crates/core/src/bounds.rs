//! Upper-bound expressions for sparse-polynomial sums and for the counting
//! quantities behind them.
//!
//! Asymptotic bounds are evaluated with implied constant 1 and `o(1) = 0`;
//! "log" is the natural logarithm. Piecewise bounds pick the first case, in
//! the order written, whose condition holds. Only the Weil and trivial bounds
//! are true inequalities at constant 1; the rest are comparable indices.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charsum::{sum_exact, CharacterIndex};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::params::{gcd_params, GcdParams, RoleMode};
use crate::poly::SparsePoly;
use crate::scalar::Scalar;

/// Largest `p` for which [`compare_bounds`] also evaluates `|S_χ(Ψ)|`.
pub const EXACT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundName {
    Weil,
    Ccp,
    Cp,
    Gcd,
    Trivial,
}

impl BoundName {
    pub const ALL: [BoundName; 5] = [
        BoundName::Weil,
        BoundName::Ccp,
        BoundName::Cp,
        BoundName::Gcd,
        BoundName::Trivial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Weil => "weil",
            BoundName::Ccp => "ccp",
            BoundName::Cp => "cp",
            BoundName::Gcd => "gcd",
            BoundName::Trivial => "trivial",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Case selected in a piecewise bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Bound with a single expression.
    Single,
    // quadrinomial bound: g ≥ T; f ≥ T > g; p/δ ≥ T > f; p/δ < T
    GLarge,
    FLarge,
    PdeltaLarge,
    PdeltaSmall,
    // quadrilinear sums and Σ J(μ)²: which of W ≥ X ≥ Y clear the threshold
    YLarge,
    XLarge,
    XSmall,
    WLarge,
    WSmall,
    // single-cardinality bounds
    Huge,
    Large,
    Small,
    // N(F, G, H): H ≥ T; G ≥ T > H; G < T
    HLarge,
    GSmall,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Single => "single",
            Regime::GLarge => "g_large",
            Regime::FLarge => "f_large",
            Regime::PdeltaLarge => "pdelta_large",
            Regime::PdeltaSmall => "pdelta_small",
            Regime::YLarge => "y_large",
            Regime::XLarge => "x_large",
            Regime::XSmall => "x_small",
            Regime::WLarge => "w_large",
            Regime::WSmall => "w_small",
            Regime::Huge => "huge",
            Regime::Large => "large",
            Regime::Small => "small",
            Regime::HLarge => "h_large",
            Regime::GSmall => "g_small",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Value of a piecewise bound, split into the case-independent term (zero
/// when there is none) and the term of the selected case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseBound<T> {
    pub main: T,
    pub regime_term: T,
    pub regime: Regime,
}

impl<T: Scalar> PiecewiseBound<T> {
    fn single(value: T, regime: Regime) -> Self {
        Self {
            main: T::zero(),
            regime_term: value,
            regime,
        }
    }

    pub fn value(&self) -> T {
        self.main + self.regime_term
    }

    /// The larger of the two terms; within a factor 2 of `value`.
    pub fn dominant(&self) -> T {
        self.main.max(self.regime_term)
    }
}

fn t<T: Scalar>(x: u64) -> T {
    T::of_u64(x)
}

fn frac<T: Scalar>(num: i32, den: i32) -> T {
    T::of_f64(num as f64 / den as f64)
}

/// `p^{1/2} log p`, the threshold that separates the cases.
pub fn log_threshold<T: Scalar>(p: u64) -> T {
    let p = t::<T>(p);
    p.sqrt() * p.ln()
}

pub fn trivial_bound<T: Scalar>(p: u64) -> T {
    t(p - 1)
}

/// `max(k_i) p^{1/2}`.
pub fn weil_bound<T: Scalar>(p: u64, exponents: &[u64]) -> T {
    let k = exponents.iter().copied().max().unwrap_or(0);
    t::<T>(k) * t::<T>(p).sqrt()
}

/// `(klmn / max)^{1/9} p^{8/9}`, nontrivial when `klmn / max < p`.
pub fn ccp_bound<T: Scalar>(p: u64, exps: [u64; 4]) -> (T, bool) {
    let prod: u128 = exps.iter().map(|&k| k as u128).product();
    let max = *exps.iter().max().expect("four exponents") as u128;
    let value = (t::<T>(1).max(T::of_f64(prod as f64 / max as f64))).powf(frac(1, 9))
        * t::<T>(p).powf(frac(8, 9));
    (value, prod < p as u128 * max)
}

/// `(klmn)^{1/16} p^{7/8}`, nontrivial when `klmn < p^2`.
pub fn cp_bound<T: Scalar>(p: u64, exps: [u64; 4]) -> (T, bool) {
    let prod: u128 = exps.iter().map(|&k| k as u128).product();
    let value = T::of_f64(prod as f64).powf(frac(1, 16)) * t::<T>(p).powf(frac(7, 8));
    (value, prod < p as u128 * p as u128)
}

/// Four-case quadrinomial bound for a fixed role assignment:
/// `p g^{-1/8}` plus the term selected by `g`, `f` and `p/δ` against
/// `p^{1/2} log p`.
pub fn gcd_bound_for_params<T: Scalar>(p: u64, params: &GcdParams) -> PiecewiseBound<T> {
    let pp = t::<T>(p);
    let (f, g, delta) = (t::<T>(params.f), t::<T>(params.g), t::<T>(params.delta));
    let thr = log_threshold::<T>(p);
    let main = pp * g.powf(frac(-1, 8));
    let (regime, regime_term) = if g >= thr {
        (
            Regime::GLarge,
            pp.powf(frac(15, 16)) * delta.powf(frac(1, 32)),
        )
    } else if f >= thr {
        (
            Regime::FLarge,
            pp.powf(frac(31, 32)) * delta.powf(frac(1, 32)) * g.powf(frac(-1, 16)),
        )
    } else if pp / delta >= thr {
        (
            Regime::PdeltaLarge,
            pp * delta.powf(frac(1, 32)) * (f * g).powf(frac(-1, 16)),
        )
    } else {
        (
            Regime::PdeltaSmall,
            pp.powf(frac(31, 32)) * delta.powf(frac(3, 32)) * (f * g).powf(frac(-1, 16)),
        )
    };
    PiecewiseBound {
        main,
        regime_term,
        regime,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GcdBound<T> {
    pub bound: PiecewiseBound<T>,
    pub params: GcdParams,
}

impl<T: Scalar> GcdBound<T> {
    pub fn value(&self) -> T {
        self.bound.value()
    }
}

/// Quadrinomial gcd bound; in `Best` mode the smallest value over the four
/// choices of the `n` role (first one on ties).
pub fn gcd_bound<T: Scalar>(p: u64, exps: [u64; 4], mode: RoleMode) -> Result<GcdBound<T>> {
    let mut best: Option<GcdBound<T>> = None;
    for params in gcd_params(p, exps, mode)? {
        let bound = gcd_bound_for_params(p, &params);
        if best.is_none_or(|b| bound.value() < b.value()) {
            best = Some(GcdBound { bound, params });
        }
    }
    Ok(best.expect("at least one parameter pack"))
}

/// Bound on quadrilinear sums over subgroups with `W >= X >= Y >= Z`:
/// `W X Z Y^{7/8}` plus a term chosen by which of `Y`, `X`, `W` reach
/// `p^{1/2} log p`.
pub fn lemma_t_bound<T: Scalar>(p: u64, sizes: [T; 4]) -> Result<PiecewiseBound<T>> {
    let [w, x, y, z] = sizes;
    if !(w >= x && x >= y && y >= z && z >= T::one()) {
        return Err(Error::OrderingViolated(format!(
            "need W >= X >= Y >= Z >= 1, got {w}, {x}, {y}, {z}"
        )));
    }
    let pp = t::<T>(p);
    let thr = log_threshold::<T>(p);
    let main = w * x * z * y.powf(frac(7, 8));
    let w31 = w.powf(frac(31, 32));
    let (regime, regime_term) = if y >= thr {
        (Regime::YLarge, w31 * x * y * z * pp.powf(frac(-1, 32)))
    } else if x >= thr {
        (Regime::XLarge, w31 * x * y.powf(frac(15, 16)) * z)
    } else if w >= thr {
        (
            Regime::WLarge,
            w31 * (x * y).powf(frac(15, 16)) * z * pp.powf(frac(1, 32)),
        )
    } else {
        (
            Regime::WSmall,
            w.powf(frac(29, 32)) * (x * y).powf(frac(15, 16)) * z * pp.powf(frac(1, 16)),
        )
    };
    Ok(PiecewiseBound {
        main,
        regime_term,
        regime,
    })
}

/// General-set quadrilinear bound `p^{1/16} W^{15/16} (XY)^{61/64} Z^{31/32}`.
pub fn petshp_quadlinear_bound<T: Scalar>(p: u64, sizes: [T; 4]) -> T {
    let [w, x, y, z] = sizes;
    t::<T>(p).powf(frac(1, 16))
        * w.powf(frac(15, 16))
        * (x * y).powf(frac(61, 64))
        * z.powf(frac(31, 32))
}

/// `D_×(G)`: `G^8 / p` when `G >= p^{1/2} log p`, else `G^6 log G`.
pub fn dx_bound<T: Scalar>(p: u64, g: T) -> PiecewiseBound<T> {
    if g >= log_threshold::<T>(p) {
        PiecewiseBound::single(g.powi(8) / t::<T>(p), Regime::Large)
    } else {
        PiecewiseBound::single(g.powi(6) * g.ln(), Regime::Small)
    }
}

/// Bound on `|E^×(G + λ) - G^4 / p|` with cases `G >= p^{2/3}`,
/// `p^{2/3} > G >= p^{1/2} log p` and `G < p^{1/2} log p`.
pub fn shifted_energy_bound<T: Scalar>(p: u64, g: T) -> PiecewiseBound<T> {
    let pp = t::<T>(p);
    if g >= pp.powf(frac(2, 3)) {
        PiecewiseBound::single(pp.sqrt() * g.powf(frac(3, 2)), Regime::Huge)
    } else if g >= log_threshold::<T>(p) {
        PiecewiseBound::single(g.powi(3) / pp.sqrt(), Regime::Large)
    } else {
        PiecewiseBound::single(g.powi(2) * g.ln(), Regime::Small)
    }
}

/// Bound on `N(F, G, H)` for `G >= H`, with `M = max(F, G)`:
/// `F^2 M^{-1/2}` times `G^2 H^2 p^{-1/2}`, `G^2 H^{3/2} p^{-1/4}` or
/// `(GH)^{3/2}`.
pub fn n_triples_bound<T: Scalar>(p: u64, f: T, g: T, h: T) -> Result<PiecewiseBound<T>> {
    if g < h {
        return Err(Error::OrderingViolated(format!(
            "need G >= H, got G = {g}, H = {h}"
        )));
    }
    let pp = t::<T>(p);
    let thr = log_threshold::<T>(p);
    let lead = f * f / f.max(g).sqrt();
    let (regime, rest) = if h >= thr {
        (Regime::HLarge, g * g * h * h / pp.sqrt())
    } else if g >= thr {
        (
            Regime::GLarge,
            g * g * h.powf(frac(3, 2)) * pp.powf(frac(-1, 4)),
        )
    } else {
        (Regime::GSmall, (g * h).powf(frac(3, 2)))
    };
    Ok(PiecewiseBound::single(lead * rest, regime))
}

/// Bound on `Σ_{μ ≠ 0} J(μ)^2` for `X >= Y`: `X^4 Y^4 / p`,
/// `X^4 Y^3 p^{-1/2}` or `(XY)^3`.
pub fn j_sum_bound<T: Scalar>(p: u64, x: T, y: T) -> Result<PiecewiseBound<T>> {
    if x < y {
        return Err(Error::OrderingViolated(format!(
            "need X >= Y, got X = {x}, Y = {y}"
        )));
    }
    let pp = t::<T>(p);
    let thr = log_threshold::<T>(p);
    Ok(if y >= thr {
        PiecewiseBound::single(x.powi(4) * y.powi(4) / pp, Regime::YLarge)
    } else if x >= thr {
        PiecewiseBound::single(x.powi(4) * y.powi(3) / pp.sqrt(), Regime::XLarge)
    } else {
        PiecewiseBound::single((x * y).powi(3), Regime::XSmall)
    })
}

/// Bound on `Σ_λ I(λ)^2`: `Z^2 W^{7/2} p^{-1/2}` or `Z^2 W^{5/2}`.
pub fn i_sum_bound<T: Scalar>(p: u64, w: T, z: T) -> PiecewiseBound<T> {
    if w >= log_threshold::<T>(p) {
        PiecewiseBound::single(
            z * z * w.powf(frac(7, 2)) / t::<T>(p).sqrt(),
            Regime::WLarge,
        )
    } else {
        PiecewiseBound::single(z * z * w.powf(frac(5, 2)), Regime::WSmall)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry<T> {
    pub value: T,
    pub regime: Regime,
    /// `value < p - 1`.
    pub nontrivial: bool,
}

/// All catalog bounds for one quadrinomial sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<T> {
    pub p: u64,
    pub exponents: [u64; 4],
    pub bounds: BTreeMap<BoundName, BoundEntry<T>>,
    pub params: GcdParams,
    pub mode: RoleMode,
    /// Smallest nontrivial bound, ties going to the earlier catalog entry;
    /// `Trivial` when nothing beats `p - 1`.
    pub winner: BoundName,
    pub exact_magnitude: Option<T>,
}

impl<T: Scalar> BoundReport<T> {
    pub fn value(&self, name: BoundName) -> T {
        self.bounds[&name].value
    }
}

/// Evaluates the catalog for `psi` (a quadrinomial) and, for
/// `p <= EXACT_BUDGET`, the exact `|S_χ(Ψ)|`.
pub fn compare_bounds<T: Scalar>(
    ctx: &FieldCtx<T>,
    psi: &SparsePoly,
    chi: CharacterIndex,
    mode: RoleMode,
) -> Result<BoundReport<T>> {
    let p = ctx.p();
    let exps = psi.quad_exponents().ok_or_else(|| {
        Error::InvalidPolynomial(format!("need a quadrinomial, got {} terms", psi.len()))
    })?;
    let trivial = trivial_bound::<T>(p);
    let entry = |value: T, regime: Regime| BoundEntry {
        value,
        regime,
        nontrivial: value < trivial,
    };
    let by_gcd = gcd_bound::<T>(p, exps, mode)?;
    let mut bounds = BTreeMap::new();
    bounds.insert(BoundName::Weil, entry(weil_bound(p, &exps), Regime::Single));
    bounds.insert(BoundName::Ccp, entry(ccp_bound(p, exps).0, Regime::Single));
    bounds.insert(BoundName::Cp, entry(cp_bound(p, exps).0, Regime::Single));
    bounds.insert(BoundName::Gcd, entry(by_gcd.value(), by_gcd.bound.regime));
    bounds.insert(BoundName::Trivial, entry(trivial, Regime::Single));

    let mut winner = BoundName::Trivial;
    let mut best = trivial;
    for name in [
        BoundName::Weil,
        BoundName::Ccp,
        BoundName::Cp,
        BoundName::Gcd,
    ] {
        let e = bounds[&name];
        if e.nontrivial && e.value < best {
            best = e.value;
            winner = name;
        }
    }

    let exact_magnitude = if p <= EXACT_BUDGET && ctx.has_tables() {
        Some(sum_exact(ctx, psi, chi)?.magnitude)
    } else {
        None
    };
    Ok(BoundReport {
        p,
        exponents: exps,
        bounds,
        params: by_gcd.params,
        mode,
        winner,
        exact_magnitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn weil_values() {
        assert!(close(
            weil_bound::<f64>(13, &[3, 1]),
            3.0 * 13f64.sqrt(),
            1e-12
        ));
        assert!(close(weil_bound::<f64>(13, &[4, 6, 3, 2]), 21.633, 1e-3));
        assert!(close(weil_bound::<f64>(101, &[1]), 10.0499, 1e-4));
    }

    #[test]
    fn ccp_values() {
        let (v, nontrivial) = ccp_bound::<f64>(13, [4, 6, 3, 2]);
        assert!(close(
            v,
            24f64.powf(1.0 / 9.0) * 13f64.powf(8.0 / 9.0),
            1e-9
        ));
        assert!(close(v, 13.92, 0.01));
        assert!(!nontrivial);
        let (v, nontrivial) = ccp_bound::<f64>(13, [1, 1, 1, 1]);
        assert!(close(v, 13f64.powf(8.0 / 9.0), 1e-12));
        assert!(nontrivial);
        let (_, nontrivial) = ccp_bound::<f64>(10007, [2, 3, 5, 7]);
        assert!(nontrivial);
    }

    #[test]
    fn cp_values() {
        let (v, nontrivial) = cp_bound::<f64>(13, [4, 6, 3, 2]);
        assert!(close(
            v,
            144f64.powf(1.0 / 16.0) * 13f64.powf(7.0 / 8.0),
            1e-9
        ));
        assert!(close(v, 12.87, 0.01));
        assert!(nontrivial);
        assert!(!cp_bound::<f64>(13, [12, 12, 12, 12]).1);
        assert!(cp_bound::<f64>(101, [1, 1, 1, 2]).1);
    }

    #[test]
    fn gcd_bound_worked_example() {
        let b = gcd_bound::<f64>(13, [4, 6, 3, 2], RoleMode::Canonical).unwrap();
        assert_eq!(b.bound.regime, Regime::PdeltaSmall);
        let expected = 13.0 * 3f64.powf(-0.125)
            + 13f64.powf(31.0 / 32.0) * 2f64.powf(3.0 / 32.0) * 9f64.powf(-1.0 / 16.0);
        assert!(close(b.value(), expected, 1e-9));
        assert!(close(b.value(), 22.49, 0.01));
    }

    #[test]
    fn gcd_bound_g_large_formula() {
        let params = GcdParams {
            alpha: 5000,
            beta: 5000,
            gamma: 5000,
            delta: 2,
            f: 5000,
            g: 5000,
            h: 5000,
            roles: [0, 1, 2, 3],
        };
        let p = 10007;
        let b = gcd_bound_for_params::<f64>(p, &params);
        assert_eq!(b.regime, Regime::GLarge);
        let pf = p as f64;
        assert!(close(
            b.value(),
            pf * 5000f64.powf(-0.125) + pf.powf(15.0 / 16.0) * 2f64.powf(1.0 / 32.0),
            1e-6
        ));
    }

    #[test]
    fn best_mode_never_worse() {
        for exps in [[4u64, 6, 3, 2], [6, 10, 15, 5], [1, 2, 3, 4], [12, 6, 4, 3]] {
            for p in [13u64, 31, 61] {
                let canon = gcd_bound::<f64>(p, exps, RoleMode::Canonical).unwrap();
                let best = gcd_bound::<f64>(p, exps, RoleMode::Best).unwrap();
                assert!(best.value() <= canon.value());
            }
        }
    }

    #[test]
    fn quadlinear_exponents_at_square_root() {
        let p = 1u64 << 40;
        let w = (p as f64).sqrt();
        let pet = petshp_quadlinear_bound::<f64>(p, [w; 4]);
        assert!(close(pet.ln() / (p as f64).ln(), 63.0 / 32.0, 1e-12));
        let lem = lemma_t_bound::<f64>(p, [w; 4]).unwrap();
        assert_eq!(lem.regime, Regime::WSmall);
        assert!(close(
            lem.regime_term.ln() / (p as f64).ln(),
            125.0 / 64.0,
            1e-12
        ));
        assert!(close(lem.main.ln() / (p as f64).ln(), 124.0 / 64.0, 1e-12));
    }

    #[test]
    fn quadlinear_small_cases() {
        let v = petshp_quadlinear_bound::<f64>(13, [1.0; 4]);
        assert!(close(v, 13f64.powf(1.0 / 16.0), 1e-12));
        assert!(close(v, 1.174, 1e-3));
        let b = lemma_t_bound::<f64>(13, [1.0; 4]).unwrap();
        assert_eq!(b.regime, Regime::WSmall);
        assert!(close(b.main, 1.0, 1e-12));
        assert!(close(b.regime_term, 13f64.powf(1.0 / 16.0), 1e-12));
        let b = lemma_t_bound::<f64>(13, [12.0, 4.0, 3.0, 2.0]).unwrap();
        // W = 12 clears sqrt(13) log 13 = 9.25, X does not
        assert_eq!(b.regime, Regime::WLarge);
        let expected = 12.0 * 4.0 * 2.0 * 3f64.powf(7.0 / 8.0)
            + 12f64.powf(31.0 / 32.0) * 12f64.powf(15.0 / 16.0) * 2.0 * 13f64.powf(1.0 / 32.0);
        assert!(close(b.value(), expected, 1e-9));
        assert!(matches!(
            lemma_t_bound::<f64>(13, [1.0, 2.0, 1.0, 1.0]),
            Err(Error::OrderingViolated(_))
        ));
    }

    #[test]
    fn counting_bounds() {
        let b = shifted_energy_bound::<f64>(101, 4.0);
        assert_eq!(b.regime, Regime::Small);
        assert!(close(b.value(), 16.0 * 4f64.ln(), 1e-12));
        assert!(close(b.value(), 22.18, 0.01));

        let b = n_triples_bound::<f64>(101, 4.0, 4.0, 4.0).unwrap();
        assert_eq!(b.regime, Regime::GSmall);
        assert!(close(b.value(), 512.0, 1e-9));
        assert!(n_triples_bound::<f64>(101, 4.0, 2.0, 4.0).is_err());

        let p = 1_000_003u64;
        let g = 200_000.0;
        let b = dx_bound::<f64>(p, g);
        assert_eq!(b.regime, Regime::Large);
        assert!(close(b.value() / (g.powi(8) / p as f64), 1.0, 1e-12));
    }

    #[test]
    fn f32_and_f64_agree() {
        let a = gcd_bound::<f32>(10007, [6, 10, 15, 5], RoleMode::Canonical).unwrap();
        let b = gcd_bound::<f64>(10007, [6, 10, 15, 5], RoleMode::Canonical).unwrap();
        assert_eq!(a.bound.regime, b.bound.regime);
        assert!(((a.value() as f64) - b.value()).abs() / b.value() < 1e-5);
    }

    #[test]
    fn report_for_p13() {
        let ctx = FieldCtx::<f64>::new(13).unwrap();
        let psi = SparsePoly::parse(13, "1,4;1,6;1,3;1,2").unwrap();
        let r = compare_bounds(
            &ctx,
            &psi,
            CharacterIndex::trivial(&ctx),
            RoleMode::Canonical,
        )
        .unwrap();
        assert_eq!(r.bounds.len(), 5);
        assert_eq!(r.value(BoundName::Trivial), 12.0);
        let exact = r.exact_magnitude.unwrap();
        assert!(exact <= r.value(BoundName::Weil));
        assert!(exact <= r.value(BoundName::Trivial) + 1e-9);
        // cp = 12.864 > 12, ccp = 13.9, weil = 21.6, gcd = 22.5
        assert_eq!(r.winner, BoundName::Trivial);
        assert_eq!(r.bounds[&BoundName::Gcd].regime, Regime::PdeltaSmall);
    }
}
