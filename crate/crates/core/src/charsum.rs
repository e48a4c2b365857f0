//! Complex-valued character sums evaluated term by term.
//!
//! Every sum runs through the context tables: `x = g^t`, powers `x^k` become
//! index arithmetic `k t mod (p - 1)`, characters are `χ_j(g^t) = ζ^{jt}` with
//! `ζ = exp(2πi / (p - 1))`. Accumulation is compensated (Neumaier) and the
//! outer loop is split into fixed chunks that are combined in index order, so
//! results do not depend on the thread count.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gcd, FieldCtx, ResidueSet};
use crate::poly::SparsePoly;
use crate::scalar::Scalar;

/// Enumeration cap for [`sum_decomposed`], counted as `αβγ(p - 1)`.
pub const DECOMPOSED_BUDGET: u128 = 1_000_000_000;
/// Enumeration cap for [`quadlinear_sum`], counted as `|W||X||Y||Z|`.
pub const QUADLINEAR_BUDGET: u128 = 100_000_000;

const CHUNK: u64 = 1 << 14;
const WEIGHT_SLACK: f64 = 1e-9;

/// Multiplicative character `χ_j(g^t) = exp(2πi jt / (p - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterIndex {
    j: u64,
    group_order: u64,
}

impl CharacterIndex {
    pub fn new<T: Scalar>(ctx: &FieldCtx<T>, j: u64) -> Result<Self> {
        let group_order = ctx.group_order();
        if j >= group_order {
            return Err(Error::CharacterOutOfRange {
                j,
                order: group_order,
            });
        }
        Ok(Self { j, group_order })
    }

    pub fn trivial<T: Scalar>(ctx: &FieldCtx<T>) -> Self {
        Self {
            j: 0,
            group_order: ctx.group_order(),
        }
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn is_trivial(&self) -> bool {
        self.j == 0
    }

    /// `(p - 1) / gcd(j, p - 1)`.
    pub fn order(&self) -> u64 {
        self.group_order / gcd(self.j, self.group_order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumValue<T> {
    pub value: Complex<T>,
    pub magnitude: T,
    /// Number of unimodular terms; bounds `magnitude` trivially.
    pub term_count: u64,
}

impl<T: Scalar> SumValue<T> {
    fn new(value: Complex<T>, term_count: u64) -> Self {
        Self {
            value,
            magnitude: value.norm(),
            term_count,
        }
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: Complex<T>,
    carry: Complex<T>,
}

#[inline]
fn neumaier<T: Scalar>(sum: &mut T, carry: &mut T, x: T) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *carry = *carry + ((*sum - t) + x);
    } else {
        *carry = *carry + ((x - t) + *sum);
    }
    *sum = t;
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: Complex::new(T::zero(), T::zero()),
            carry: Complex::new(T::zero(), T::zero()),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        neumaier(&mut self.sum.re, &mut self.carry.re, z.re);
        neumaier(&mut self.sum.im, &mut self.carry.im, z.im);
    }

    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> Complex<T> {
        self.sum + self.carry
    }
}

fn chunked<T, F>(len: u64, f: F) -> CompensatedSum<T>
where
    T: Scalar,
    F: Fn(u64, u64) -> CompensatedSum<T> + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let parts: Vec<CompensatedSum<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| f(c * CHUNK, ((c + 1) * CHUNK).min(len)))
        .collect();
    let mut acc = CompensatedSum::new();
    for part in &parts {
        acc.merge(part);
    }
    acc
}

fn check_poly<T: Scalar>(ctx: &FieldCtx<T>, psi: &SparsePoly) -> Result<()> {
    if psi.p() != ctx.p() {
        return Err(Error::InvalidPolynomial(format!(
            "polynomial is over F_{}, context is F_{}",
            psi.p(),
            ctx.p()
        )));
    }
    Ok(())
}

/// `S_χ(Ψ) = Σ_{x ∈ F_p^*} χ(x) e_p(Ψ(x))`.
pub fn sum_exact<T: Scalar>(
    ctx: &FieldCtx<T>,
    psi: &SparsePoly,
    chi: CharacterIndex,
) -> Result<SumValue<T>> {
    check_poly(ctx, psi)?;
    let tb = ctx.tables("sum_exact")?;
    let p = ctx.p();
    let n = ctx.group_order();
    let terms: Vec<(u64, u64)> = psi.terms().iter().map(|t| (t.coeff, t.exp % n)).collect();
    let j = chi.j();
    let acc = chunked(n, |start, end| {
        let mut acc = CompensatedSum::new();
        let mut idx: Vec<u64> = terms.iter().map(|&(_, k)| k * start % n).collect();
        let mut c = j * start % n;
        for _ in start..end {
            let mut u = 0u64;
            for (i, &(a, k)) in terms.iter().enumerate() {
                u += a * tb.pow[idx[i] as usize] as u64 % p;
                idx[i] += k;
                if idx[i] >= n {
                    idx[i] -= n;
                }
            }
            acc.add(tb.roots[c as usize] * tb.phase[(u % p) as usize]);
            c += j;
            if c >= n {
                c -= n;
            }
        }
        acc
    });
    Ok(SumValue::new(acc.value(), n))
}

/// Right-hand side of the subgroup-averaging identity for a quadrinomial
/// `a X^k + b X^l + c X^m + d X^n` (terms in that order):
///
/// `(1 / αβγ) Σ_{x ∈ G_α} Σ_{y ∈ G_β} Σ_{z ∈ G_γ} Σ_{w ≠ 0} ϑ_{w,x,y} ρ_{w,x,z} σ_{w,y,z} e_p(d (wxyz)^n)`
///
/// with `ϑ = χ(wxy) e_p(c (wxy)^m)`, `ρ = χ(z) e_p(b (wxz)^l)`,
/// `σ = e_p(a (wyz)^k)` and `α = gcd(k, p - 1)` etc. The weights drop the
/// factor killed by each subgroup (`x^k = 1` on `G_α`), so agreement with
/// [`sum_exact`] checks that reduction as well as the averaging.
pub fn sum_decomposed<T: Scalar>(
    ctx: &FieldCtx<T>,
    psi: &SparsePoly,
    chi: CharacterIndex,
) -> Result<SumValue<T>> {
    sum_decomposed_with_budget(ctx, psi, chi, DECOMPOSED_BUDGET)
}

pub fn sum_decomposed_with_budget<T: Scalar>(
    ctx: &FieldCtx<T>,
    psi: &SparsePoly,
    chi: CharacterIndex,
    budget: u128,
) -> Result<SumValue<T>> {
    check_poly(ctx, psi)?;
    let [k, l, m, nn] = psi.quad_exponents().ok_or_else(|| {
        Error::InvalidPolynomial(format!("need a quadrinomial, got {} terms", psi.len()))
    })?;
    let order = ctx.group_order();
    let (alpha, beta, gamma) = (gcd(k, order), gcd(l, order), gcd(m, order));
    let cost = alpha as u128 * beta as u128 * gamma as u128 * order as u128;
    if cost > budget {
        return Err(Error::BudgetExceeded {
            quantity: "sum_decomposed",
            cost,
            budget,
        });
    }
    let tb = ctx.tables("sum_decomposed")?;
    let p = ctx.p();
    let coeffs = psi.coefficients();
    let (a, b, c, d) = (coeffs[0], coeffs[1], coeffs[2], coeffs[3]);
    let (k, l, m, nn) = (k % order, l % order, m % order, nn % order);
    let j = chi.j();
    let phase = |coeff: u64, idx: u64| tb.phase[(coeff * tb.pow[idx as usize] as u64 % p) as usize];

    // discrete logs of subgroup elements are the multiples of (p - 1) / size
    let (sa, sb, sc) = (order / alpha, order / beta, order / gamma);
    let triples: Vec<(u64, u64, u64)> = (0..alpha)
        .flat_map(|ix| (0..beta).flat_map(move |iy| (0..gamma).map(move |iz| (ix, iy, iz))))
        .map(|(ix, iy, iz)| (ix * sa, iy * sb, iz * sc))
        .collect();

    let parts: Vec<CompensatedSum<T>> = triples
        .par_iter()
        .map(|&(tx, ty, tz)| {
            let mut acc = CompensatedSum::new();
            let chi_z = tb.roots[(j * tz % order) as usize];
            let (txy, txz, tyz) = ((tx + ty) % order, (tx + tz) % order, (ty + tz) % order);
            let txyz = (txy + tz) % order;
            // exponent indices at w = g^0, advanced by the exponent per step
            let mut i_theta = m * txy % order;
            let mut i_rho = l * txz % order;
            let mut i_sigma = k * tyz % order;
            let mut i_tau = nn * txyz % order;
            let mut i_chi = j * txy % order;
            for _ in 0..order {
                let theta = tb.roots[i_chi as usize] * phase(c, i_theta);
                let rho = chi_z * phase(b, i_rho);
                let sigma = phase(a, i_sigma);
                acc.add(theta * rho * sigma * phase(d, i_tau));
                for (idx, step) in [
                    (&mut i_theta, m),
                    (&mut i_rho, l),
                    (&mut i_sigma, k),
                    (&mut i_tau, nn),
                    (&mut i_chi, j),
                ] {
                    *idx += step;
                    if *idx >= order {
                        *idx -= order;
                    }
                }
            }
            acc
        })
        .collect();
    let mut acc = CompensatedSum::new();
    for part in &parts {
        acc.merge(part);
    }
    let scale = T::of_u64(alpha) * T::of_u64(beta) * T::of_u64(gamma);
    Ok(SumValue::new(acc.value() / scale, order))
}

fn check_weights<T: Scalar>(name: &str, weights: &[Complex<T>], len: usize) -> Result<()> {
    if weights.len() != len {
        return Err(Error::InvalidWeights(format!(
            "{name}: {} weights for {len} elements",
            weights.len()
        )));
    }
    let limit = T::one() + T::of_f64(WEIGHT_SLACK);
    if let Some(i) = weights
        .iter()
        .position(|w| w.norm().partial_cmp(&limit).is_none_or(|o| o.is_gt()))
    {
        return Err(Error::InvalidWeights(format!(
            "{name}[{i}] has magnitude above 1"
        )));
    }
    Ok(())
}

/// `Σ_{x ∈ X} Σ_{y ∈ Y} α_x β_y e_p(xy)`; weights are indexed by position in
/// the sorted sets.
pub fn bilinear_sum<T: Scalar>(
    ctx: &FieldCtx<T>,
    xs: &ResidueSet,
    ys: &ResidueSet,
    x_weights: &[Complex<T>],
    y_weights: &[Complex<T>],
) -> Result<SumValue<T>> {
    let p = ctx.p();
    xs.check_reduced(p)?;
    ys.check_reduced(p)?;
    check_weights("alpha", x_weights, xs.len())?;
    check_weights("beta", y_weights, ys.len())?;
    let mut outer = CompensatedSum::new();
    for (x, &wx) in xs.iter().zip(x_weights) {
        let mut inner = CompensatedSum::new();
        for (y, &wy) in ys.iter().zip(y_weights) {
            inner.add(wy * ctx.e(x * y % p));
        }
        outer.add(wx * inner.value());
    }
    Ok(SumValue::new(outer.value(), (xs.len() * ys.len()) as u64))
}

/// Dense complex array indexed by positions in three sorted sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights3<T> {
    dims: [usize; 3],
    data: Vec<Complex<T>>,
}

impl<T: Scalar> Weights3<T> {
    pub fn ones(d0: usize, d1: usize, d2: usize) -> Self {
        Self {
            dims: [d0, d1, d2],
            data: vec![Complex::new(T::one(), T::zero()); d0 * d1 * d2],
        }
    }

    pub fn from_fn(
        d0: usize,
        d1: usize,
        d2: usize,
        mut f: impl FnMut(usize, usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(d0 * d1 * d2);
        for i in 0..d0 {
            for j in 0..d1 {
                for k in 0..d2 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self {
            dims: [d0, d1, d2],
            data,
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex<T> {
        self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }
}

/// The four weight arrays `ϑ_{w,x,y}`, `ρ_{w,x,z}`, `σ_{w,y,z}`, `τ_{x,y,z}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadWeights<T> {
    pub theta: Weights3<T>,
    pub rho: Weights3<T>,
    pub sigma: Weights3<T>,
    pub tau: Weights3<T>,
}

impl<T: Scalar> QuadWeights<T> {
    pub fn ones(w: usize, x: usize, y: usize, z: usize) -> Self {
        Self {
            theta: Weights3::ones(w, x, y),
            rho: Weights3::ones(w, x, z),
            sigma: Weights3::ones(w, y, z),
            tau: Weights3::ones(x, y, z),
        }
    }

    fn check(&self, w: usize, x: usize, y: usize, z: usize) -> Result<()> {
        for (name, arr, dims) in [
            ("theta", &self.theta, [w, x, y]),
            ("rho", &self.rho, [w, x, z]),
            ("sigma", &self.sigma, [w, y, z]),
            ("tau", &self.tau, [x, y, z]),
        ] {
            if arr.dims != dims {
                return Err(Error::InvalidWeights(format!(
                    "{name} has shape {:?}, expected {dims:?}",
                    arr.dims
                )));
            }
            check_weights(name, &arr.data, arr.data.len())?;
        }
        Ok(())
    }
}

/// `T = Σ_w Σ_x Σ_y Σ_z ϑ_{w,x,y} ρ_{w,x,z} σ_{w,y,z} τ_{x,y,z} e_p(a wxyz)`.
pub fn quadlinear_sum<T: Scalar>(
    ctx: &FieldCtx<T>,
    sets: [&ResidueSet; 4],
    weights: &QuadWeights<T>,
    a: u64,
) -> Result<SumValue<T>> {
    let p = ctx.p();
    let a = a % p;
    if a == 0 {
        return Err(Error::NonzeroRequired("a"));
    }
    let [ws, xs, ys, zs] = sets;
    for s in sets {
        s.check_reduced(p)?;
    }
    let cost = [ws, xs, ys, zs]
        .iter()
        .map(|s| s.len() as u128)
        .product::<u128>();
    if cost > QUADLINEAR_BUDGET {
        return Err(Error::BudgetExceeded {
            quantity: "quadlinear_sum",
            cost,
            budget: QUADLINEAR_BUDGET,
        });
    }
    weights.check(ws.len(), xs.len(), ys.len(), zs.len())?;

    let zv: Vec<u64> = zs.iter().collect();
    let parts: Vec<CompensatedSum<T>> = ws
        .as_slice()
        .par_iter()
        .enumerate()
        .map(|(iw, &w)| {
            let mut acc = CompensatedSum::new();
            let aw = a * w % p;
            for (ix, x) in xs.iter().enumerate() {
                let awx = aw * x % p;
                for (iy, y) in ys.iter().enumerate() {
                    let awxy = awx * y % p;
                    let theta = weights.theta.get(iw, ix, iy);
                    for (iz, &z) in zv.iter().enumerate() {
                        let w4 = weights.rho.get(iw, ix, iz)
                            * weights.sigma.get(iw, iy, iz)
                            * weights.tau.get(ix, iy, iz);
                        acc.add(theta * w4 * ctx.e(awxy * z % p));
                    }
                }
            }
            acc
        })
        .collect();
    let mut acc = CompensatedSum::new();
    for part in &parts {
        acc.merge(part);
    }
    Ok(SumValue::new(acc.value(), cost as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::subgroup_of_order;

    fn ctx(p: u64) -> FieldCtx<f64> {
        FieldCtx::new(p).unwrap()
    }

    #[test]
    fn complete_linear_sum_is_minus_one() {
        let c = ctx(5);
        let psi = SparsePoly::parse(5, "1,1").unwrap();
        let s = sum_exact(&c, &psi, CharacterIndex::trivial(&c)).unwrap();
        assert!((s.value - Complex::new(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn quadratic_gauss_sum_p5() {
        let c = ctx(5);
        let psi = SparsePoly::parse(5, "1,2").unwrap();
        let s = sum_exact(&c, &psi, CharacterIndex::trivial(&c)).unwrap();
        assert!((s.value - Complex::new(5f64.sqrt() - 1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn character_order() {
        let c = ctx(13);
        assert_eq!(CharacterIndex::new(&c, 0).unwrap().order(), 1);
        assert_eq!(CharacterIndex::new(&c, 4).unwrap().order(), 3);
        assert_eq!(CharacterIndex::new(&c, 5).unwrap().order(), 12);
        assert!(CharacterIndex::new(&c, 12).is_err());
    }

    #[test]
    fn decomposition_matches_on_p13() {
        let c = ctx(13);
        let psi = SparsePoly::parse(13, "1,4;1,6;1,3;1,2").unwrap();
        for j in [0, 5] {
            let chi = CharacterIndex::new(&c, j).unwrap();
            let exact = sum_exact(&c, &psi, chi).unwrap();
            let dec = sum_decomposed(&c, &psi, chi).unwrap();
            assert!((exact.value - dec.value).norm() < 1e-9, "j={j}");
        }
    }

    #[test]
    fn decomposition_needs_four_terms_and_budget() {
        let c = ctx(13);
        let chi = CharacterIndex::trivial(&c);
        let tri = SparsePoly::parse(13, "1,1;1,2;1,3").unwrap();
        assert!(matches!(
            sum_decomposed(&c, &tri, chi),
            Err(Error::InvalidPolynomial(_))
        ));
        let psi = SparsePoly::parse(13, "1,12;1,6;1,4;1,1").unwrap();
        assert!(matches!(
            sum_decomposed_with_budget(&c, &psi, chi, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn full_bilinear_sum() {
        let c = ctx(13);
        let all = ResidueSet::new((1..13).collect()).unwrap();
        let ones = vec![Complex::new(1.0, 0.0); 12];
        let s = bilinear_sum(&c, &all, &all, &ones, &ones).unwrap();
        assert!((s.value - Complex::new(-12.0, 0.0)).norm() < 1e-9);

        let zero = ResidueSet::new(vec![0]).unwrap();
        let some = ResidueSet::new(vec![2, 5, 7]).unwrap();
        let s = bilinear_sum(&c, &zero, &some, &ones[..1], &ones[..3]).unwrap();
        assert!((s.value - Complex::new(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn bilinear_rejects_heavy_weights() {
        let c = ctx(13);
        let s = ResidueSet::new(vec![1]).unwrap();
        let heavy = [Complex::new(1.5, 0.0)];
        assert!(bilinear_sum(&c, &s, &s, &heavy, &heavy).is_err());
        assert!(bilinear_sum(&c, &s, &s, &[], &heavy).is_err());
    }

    #[test]
    fn single_term_quadlinear() {
        let c = ctx(13);
        let one = ResidueSet::new(vec![1]).unwrap();
        let w = QuadWeights::ones(1, 1, 1, 1);
        let t = quadlinear_sum(&c, [&one, &one, &one, &one], &w, 1).unwrap();
        assert!((t.value - c.e(1)).norm() < 1e-12);
    }

    #[test]
    fn quadlinear_requires_nonzero_a() {
        let c = ctx(13);
        let g = subgroup_of_order(&c, 3).unwrap();
        let s = g.elements();
        let w = QuadWeights::ones(3, 3, 3, 3);
        assert_eq!(
            quadlinear_sum(&c, [s, s, s, s], &w, 0).unwrap_err(),
            Error::NonzeroRequired("a")
        );
        assert_eq!(
            quadlinear_sum(&c, [s, s, s, s], &w, 13).unwrap_err(),
            Error::NonzeroRequired("a")
        );
    }

    #[test]
    fn quadlinear_shape_is_checked() {
        let c = ctx(13);
        let s = ResidueSet::new(vec![1, 3]).unwrap();
        let w = QuadWeights::ones(2, 2, 2, 1);
        assert!(matches!(
            quadlinear_sum(&c, [&s, &s, &s, &s], &w, 1),
            Err(Error::InvalidWeights(_))
        ));
    }
}
