//! Exact counting of additive-multiplicative quantities.
//!
//! Each quantity has an oracle (direct enumeration) and an optimized counter
//! built on frequency tables; both return `u128` counts and must agree
//! exactly. Difference tables `d(a) = #{(u, v) : u - v = a}` are the shared
//! building block: products of differences become multiplicative
//! convolutions, which run as cyclic convolutions of length `p - 1` after
//! mapping nonzero residues through the discrete logarithm.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::convolution::cyclic_convolution;
use crate::error::{Error, Result};
use crate::field::{lcm, FieldCtx, ResidueSet};
use crate::group::Subgroup;
use crate::scalar::Scalar;

pub const MULT_ENERGY_ORACLE_BUDGET: u128 = 100_000_000;
pub const MULT_ENERGY_BUDGET: u128 = 100_000_000;
pub const D_TIMES_ORACLE_MAX_SET: usize = 60;
pub const D_TIMES_MAX_SET: usize = 10_000;
pub const D_TIMES_MAX_P: u64 = 1_000_000;
pub const N_TRIPLES_ORACLE_BUDGET: u128 = 100_000_000;
pub const N_TRIPLES_BUDGET: u128 = 100_000_000;
pub const DISTRIBUTION_BUDGET: u128 = 100_000_000;
pub const CAUCHY_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Optimized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountValue {
    pub count: u128,
    pub method: Method,
}

impl CountValue {
    fn oracle(count: u128) -> Self {
        Self {
            count,
            method: Method::Oracle,
        }
    }

    fn optimized(count: u128) -> Self {
        Self {
            count,
            method: Method::Optimized,
        }
    }
}

/// Counts indexed by residue.
///
/// For `J` the zero product is kept out of `counts` and reported in
/// `zero_count`; for `I` the residue 0 is an ordinary entry and `zero_count`
/// is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub counts: Vec<u128>,
    pub zero_count: u128,
    pub total: u128,
}

impl Distribution {
    pub fn get(&self, r: u64) -> u128 {
        self.counts.get(r as usize).copied().unwrap_or(0)
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.counts.iter().map(|&c| c * c).sum()
    }

    /// Nonzero entries as `(residue, count)`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u128)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| (r as u64, c))
    }
}

fn budget(quantity: &'static str, cost: u128, limit: u128) -> Result<()> {
    if cost > limit {
        Err(Error::BudgetExceeded {
            quantity,
            cost,
            budget: limit,
        })
    } else {
        Ok(())
    }
}

/// Dense difference table over all residues.
fn difference_table(p: u64, set: &[u64]) -> Vec<u64> {
    let mut d = vec![0u64; p as usize];
    for &u in set {
        for &v in set {
            d[((u + p - v) % p) as usize] += 1;
        }
    }
    d
}

/// Difference table of a subgroup in discrete-log coordinates: entry `s` is
/// `d(g^s)`; `d(0) = |G|` is implicit.
///
/// Uses `g1 - g2 = g2 (h - 1)` with `h = g1 / g2`: every `h ≠ 1` contributes
/// the whole coset `(h - 1) G`, so only `|G| - 1` discrete logs are needed.
pub fn subgroup_difference_log_table<T: Scalar>(
    ctx: &FieldCtx<T>,
    group: &Subgroup,
) -> Result<Vec<u64>> {
    let tb = ctx.tables("subgroup difference table")?;
    let p = ctx.p();
    let n = ctx.group_order() as usize;
    let index = group.index(p) as usize;
    let mut by_coset = vec![0u64; index];
    for h in group.elements().iter().filter(|&h| h != 1) {
        by_coset[tb.dlog[(h - 1) as usize] as usize % index] += 1;
    }
    Ok((0..n).map(|s| by_coset[s % index]).collect())
}

/// Number of solutions of `u1 v1 = u2 v2`, by direct enumeration.
pub fn mult_energy_oracle<T: Scalar>(
    ctx: &FieldCtx<T>,
    us: &ResidueSet,
    vs: &ResidueSet,
) -> Result<CountValue> {
    let p = ctx.p();
    us.check_reduced(p)?;
    vs.check_reduced(p)?;
    let (nu, nv) = (us.len() as u128, vs.len() as u128);
    budget(
        "mult_energy oracle",
        nu * nu * nv * nv,
        MULT_ENERGY_ORACLE_BUDGET,
    )?;
    let mut count = 0u128;
    for u1 in us.iter() {
        for v1 in vs.iter() {
            let left = u1 * v1 % p;
            for u2 in us.iter() {
                for v2 in vs.iter() {
                    if u2 * v2 % p == left {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(CountValue::oracle(count))
}

/// Multiplicative energy `E^×(U, V)` as the sum of squared product
/// frequencies.
///
/// Large inputs go through discrete logs: the nonzero product frequencies are
/// the cyclic convolution of the two log histograms, and the zero product
/// occurs for every pair containing a zero.
pub fn mult_energy<T: Scalar>(
    ctx: &FieldCtx<T>,
    us: &ResidueSet,
    vs: &ResidueSet,
) -> Result<CountValue> {
    let p = ctx.p();
    us.check_reduced(p)?;
    vs.check_reduced(p)?;
    let pairs = us.len() as u128 * vs.len() as u128;
    if ctx.has_tables() && pairs > 8 * p as u128 {
        let tb = ctx.tables("mult_energy")?;
        let histogram = |set: &ResidueSet| {
            let mut h = vec![0u64; ctx.group_order() as usize];
            for x in set.iter().filter(|&x| x != 0) {
                h[tb.dlog[x as usize] as usize] += 1;
            }
            h
        };
        let nonzero = |set: &ResidueSet| set.iter().filter(|&x| x != 0).count() as u128;
        let zero_pairs = pairs - nonzero(us) * nonzero(vs);
        let conv = cyclic_convolution(&histogram(us), &histogram(vs));
        let count = zero_pairs * zero_pairs + conv.iter().map(|&r| r * r).sum::<u128>();
        return Ok(CountValue::optimized(count));
    }
    budget("mult_energy", pairs, MULT_ENERGY_BUDGET)?;
    let mut freq = vec![0u64; p as usize];
    for u in us.iter() {
        for v in vs.iter() {
            freq[(u * v % p) as usize] += 1;
        }
    }
    let count = freq.iter().map(|&f| f as u128 * f as u128).sum();
    debug_assert!(count <= (us.len() * us.len() * vs.len() * vs.len()) as u128);
    Ok(CountValue::optimized(count))
}

/// `E^×(G + λ)` for `λ ≠ 0`; the shifted set may contain 0.
pub fn shifted_energy<T: Scalar>(
    ctx: &FieldCtx<T>,
    group: &Subgroup,
    lambda: u64,
) -> Result<CountValue> {
    let p = ctx.p();
    let lambda = lambda % p;
    if lambda == 0 {
        return Err(Error::NonzeroRequired("lambda"));
    }
    let shifted = group.elements().shifted(lambda, p);
    mult_energy(ctx, &shifted, &shifted)
}

/// `D_×(U)` with the multiplicative convolution done pairwise over the
/// support of the difference table. Requires `|U| <= 60`.
pub fn d_times_oracle<T: Scalar>(ctx: &FieldCtx<T>, us: &ResidueSet) -> Result<CountValue> {
    let p = ctx.p();
    us.check_reduced(p)?;
    if us.len() > D_TIMES_ORACLE_MAX_SET {
        return Err(Error::BudgetExceeded {
            quantity: "d_times oracle",
            cost: us.len() as u128,
            budget: D_TIMES_ORACLE_MAX_SET as u128,
        });
    }
    let d = difference_table(p, us.as_slice());
    let support: Vec<(u64, u128)> = d
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(a, &c)| (a as u64, c as u128))
        .collect();
    let mut r: HashMap<u64, u128> = HashMap::new();
    for &(a, da) in &support {
        for &(b, db) in &support {
            *r.entry(a * b % p).or_default() += da * db;
        }
    }
    Ok(CountValue::oracle(r.values().map(|&c| c * c).sum()))
}

/// `D_×(U)`, the number of solutions of
/// `(u1 - v1)(u2 - v2) = (u3 - v3)(u4 - v4)` over `U`.
///
/// Zero products are counted in closed form; nonzero ones through a cyclic
/// convolution of the discrete-log difference table with itself.
pub fn d_times<T: Scalar>(ctx: &FieldCtx<T>, us: &ResidueSet) -> Result<CountValue> {
    let p = ctx.p();
    us.check_reduced(p)?;
    if us.len() > D_TIMES_MAX_SET {
        return Err(Error::BudgetExceeded {
            quantity: "d_times",
            cost: us.len() as u128,
            budget: D_TIMES_MAX_SET as u128,
        });
    }
    if p > D_TIMES_MAX_P {
        return Err(Error::BudgetExceeded {
            quantity: "d_times",
            cost: p as u128,
            budget: D_TIMES_MAX_P as u128,
        });
    }
    let tb = ctx.tables("d_times")?;
    let n = ctx.group_order() as usize;
    let mut logs = vec![0u64; n];
    for u in us.iter() {
        for v in us.iter() {
            if u != v {
                logs[tb.dlog[((u + p - v) % p) as usize] as usize] += 1;
            }
        }
    }
    Ok(CountValue::optimized(d_times_from_logs(
        &logs,
        us.len() as u128,
    )))
}

/// `D_×(G)` for a subgroup via [`subgroup_difference_log_table`].
pub fn d_times_subgroup<T: Scalar>(ctx: &FieldCtx<T>, group: &Subgroup) -> Result<CountValue> {
    if ctx.p() > D_TIMES_MAX_P {
        return Err(Error::BudgetExceeded {
            quantity: "d_times",
            cost: ctx.p() as u128,
            budget: D_TIMES_MAX_P as u128,
        });
    }
    let logs = subgroup_difference_log_table(ctx, group)?;
    Ok(CountValue::optimized(d_times_from_logs(
        &logs,
        group.order() as u128,
    )))
}

fn d_times_from_logs(logs: &[u64], size: u128) -> u128 {
    let zero = size;
    let total = size * size;
    // pairs (a, b) of differences with ab = 0, weighted by d(a) d(b)
    let r0 = 2 * zero * total - zero * zero;
    let conv = cyclic_convolution(logs, logs);
    r0 * r0 + conv.iter().map(|&r| r * r).sum::<u128>()
}

/// Six-fold enumeration of `f1 (g1 - g2) = f2 (h1 - h2)`.
pub fn n_triples_oracle<T: Scalar>(
    ctx: &FieldCtx<T>,
    f: &Subgroup,
    g: &Subgroup,
    h: &Subgroup,
) -> Result<CountValue> {
    let p = ctx.p();
    let (nf, ng, nh) = (f.order() as u128, g.order() as u128, h.order() as u128);
    budget(
        "n_triples oracle",
        nf * nf * ng * ng * nh * nh,
        N_TRIPLES_ORACLE_BUDGET,
    )?;
    let (fs, gs, hs) = (f.elements(), g.elements(), h.elements());
    let mut count = 0u128;
    for f1 in fs.iter() {
        for g1 in gs.iter() {
            for g2 in gs.iter() {
                let left = f1 * ((g1 + p - g2) % p) % p;
                for f2 in fs.iter() {
                    for h1 in hs.iter() {
                        for h2 in hs.iter() {
                            if f2 * ((h1 + p - h2) % p) % p == left {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(CountValue::oracle(count))
}

/// Caches subgroup difference tables so that many `N(F, G, H)` evaluations
/// over one field cost `O(p)` each.
///
/// With `r_FG(v) = #{(f, g1, g2) : f (g1 - g2) = v}`, `N = Σ_v r_FG(v) r_FH(v)`.
/// In log coordinates `r_FG` is the difference table of `G` summed over the
/// residue classes modulo the index of `F`.
pub struct TripleCounter<'a, T: Scalar> {
    ctx: &'a FieldCtx<T>,
    tables: HashMap<u64, Vec<u64>>,
    folds: HashMap<(u64, usize), Vec<u128>>,
}

impl<'a, T: Scalar> TripleCounter<'a, T> {
    pub fn new(ctx: &'a FieldCtx<T>) -> Self {
        Self {
            ctx,
            tables: HashMap::new(),
            folds: HashMap::new(),
        }
    }

    fn logs(&mut self, group: &Subgroup) -> Result<&[u64]> {
        if !self.tables.contains_key(&group.order()) {
            let t = subgroup_difference_log_table(self.ctx, group)?;
            self.tables.insert(group.order(), t);
        }
        Ok(&self.tables[&group.order()])
    }

    fn folded(&mut self, group: &Subgroup, modulus: usize) -> Result<&[u128]> {
        let key = (group.order(), modulus);
        if !self.folds.contains_key(&key) {
            let logs = self.logs(group)?;
            let mut out = vec![0u128; modulus];
            for (s, &c) in logs.iter().enumerate() {
                out[s % modulus] += c as u128;
            }
            self.folds.insert(key, out);
        }
        Ok(&self.folds[&key])
    }

    pub fn count(&mut self, f: &Subgroup, g: &Subgroup, h: &Subgroup) -> Result<CountValue> {
        let p = self.ctx.p();
        budget(
            "n_triples",
            g.order() as u128 + h.order() as u128 + p as u128,
            N_TRIPLES_BUDGET,
        )?;
        let (nf, ng, nh) = (f.order() as u128, g.order() as u128, h.order() as u128);
        let index = f.index(p) as usize;
        self.folded(g, index)?;
        self.folded(h, index)?;
        let fg = &self.folds[&(g.order(), index)];
        let fh = &self.folds[&(h.order(), index)];
        let nonzero: u128 = fg.iter().zip(fh.iter()).map(|(a, b)| a * b).sum::<u128>() * nf;
        // v = 0 needs g1 = g2 and h1 = h2
        Ok(CountValue::optimized(nf * nf * ng * nh + nonzero))
    }
}

/// `N(F, G, H)`: solutions of `f1 (g1 - g2) = f2 (h1 - h2)`.
pub fn n_triples<T: Scalar>(
    ctx: &FieldCtx<T>,
    f: &Subgroup,
    g: &Subgroup,
    h: &Subgroup,
) -> Result<CountValue> {
    TripleCounter::new(ctx).count(f, g, h)
}

/// `J(μ) = #{(x1, x2, y1, y2) : (x1 - x2)(y1 - y2) = μ}` for `μ ≠ 0`.
pub fn j_distribution<T: Scalar>(
    ctx: &FieldCtx<T>,
    xs: &ResidueSet,
    ys: &ResidueSet,
) -> Result<Distribution> {
    let p = ctx.p();
    xs.check_reduced(p)?;
    ys.check_reduced(p)?;
    let support = |set: &ResidueSet| -> Vec<(u64, u128)> {
        difference_table(p, set.as_slice())
            .into_iter()
            .enumerate()
            .skip(1)
            .filter(|&(_, c)| c > 0)
            .map(|(a, c)| (a as u64, c as u128))
            .collect()
    };
    let (dx, dy) = (support(xs), support(ys));
    budget(
        "j_distribution",
        dx.len() as u128 * dy.len() as u128,
        DISTRIBUTION_BUDGET,
    )?;
    let mut counts = vec![0u128; p as usize];
    for &(a, ca) in &dx {
        for &(b, cb) in &dy {
            counts[(a * b % p) as usize] += ca * cb;
        }
    }
    let total: u128 = counts.iter().sum();
    let all = (xs.len() * xs.len()) as u128 * (ys.len() * ys.len()) as u128;
    Ok(Distribution {
        counts,
        zero_count: all - total,
        total,
    })
}

/// `I(λ) = #{(w1, w2, z) : z (w1 - w2) = λ}` for every `λ ∈ F_p`.
pub fn i_distribution<T: Scalar>(
    ctx: &FieldCtx<T>,
    ws: &ResidueSet,
    zs: &ResidueSet,
) -> Result<Distribution> {
    let p = ctx.p();
    ws.check_reduced(p)?;
    zs.check_reduced(p)?;
    budget(
        "i_distribution",
        (ws.len() * ws.len()) as u128 * zs.len() as u128,
        DISTRIBUTION_BUDGET,
    )?;
    let d = difference_table(p, ws.as_slice());
    let mut counts = vec![0u128; p as usize];
    for z in zs.iter() {
        for (a, &c) in d.iter().enumerate() {
            if c > 0 {
                counts[(z * a as u64 % p) as usize] += c as u128;
            }
        }
    }
    let total = counts.iter().sum();
    Ok(Distribution {
        counts,
        zero_count: 0,
        total,
    })
}

/// Exact data for the Cauchy–Schwarz step bounding `N(F, G, H)`.
///
/// With `S = FGH` and `r(λ) = #{(g, h) ∈ G × H : λ (g - 1) = h - 1}`:
///
/// * identity: `N |S| = F² G H Σ_{λ ∈ S} r(λ)`;
/// * Cauchy step: `N² |S| <= F⁴ G² H² Σ_{λ ∈ S} r(λ)²`;
/// * energy form: `N² <= (F⁴ G² H² / |S|) (E^×(G - 1) E^×(H - 1))^{1/2}`,
///   compared exactly as `N⁴ |S|² <= F⁸ G⁴ H⁴ E^×(G - 1) E^×(H - 1)`.
///
/// The energy form replaces `Σ r(λ)²` by the energies and so ignores the pair
/// `(g, h) = (1, 1)`, which solves `λ (g - 1) = h - 1` for every `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyStep {
    pub orders: [u64; 3],
    pub n: u128,
    pub product_set_size: u64,
    pub sum_r: u128,
    pub sum_r_squared: u128,
    pub energy_g_minus_one: u128,
    pub energy_h_minus_one: u128,
    pub identity_holds: bool,
    pub cauchy_step_holds: bool,
    pub energy_form_holds: bool,
    /// `N²` as a float, for reporting.
    pub lhs: f64,
    /// `(F⁴ G² H² / |S|) (E^×(G - 1) E^×(H - 1))^{1/2}` as a float.
    pub energy_form_rhs: f64,
}

pub fn cauchy_step<T: Scalar>(
    ctx: &FieldCtx<T>,
    f: &Subgroup,
    g: &Subgroup,
    h: &Subgroup,
) -> Result<CauchyStep> {
    let p = ctx.p();
    let s_order = lcm(lcm(f.order(), g.order()), h.order());
    budget(
        "cauchy_step",
        s_order as u128 * g.order() as u128,
        CAUCHY_BUDGET,
    )?;
    let n = n_triples(ctx, f, g, h)?.count;
    let s = crate::group::product_set(ctx, &[f.clone(), g.clone(), h.clone()])?;
    debug_assert_eq!(s.order(), s_order);

    let mut in_h_minus_one = vec![false; p as usize];
    for x in h.elements().iter() {
        in_h_minus_one[((x + p - 1) % p) as usize] = true;
    }
    let (mut sum_r, mut sum_r2) = (0u128, 0u128);
    for lambda in s.elements().iter() {
        let r = g
            .elements()
            .iter()
            .filter(|&x| in_h_minus_one[(lambda * ((x + p - 1) % p) % p) as usize])
            .count() as u128;
        sum_r += r;
        sum_r2 += r * r;
    }

    let eg = mult_energy(ctx, &g.minus_one(p), &g.minus_one(p))?.count;
    let eh = mult_energy(ctx, &h.minus_one(p), &h.minus_one(p))?.count;

    let big = |x: u128| BigUint::from(x);
    let (nf, ng, nh, ns) = (
        big(f.order() as u128),
        big(g.order() as u128),
        big(h.order() as u128),
        big(s_order as u128),
    );
    let nn = big(n);
    let weight = nf.pow(4) * ng.pow(2) * nh.pow(2);
    let identity_holds = &nn * &ns == nf.pow(2) * &ng * &nh * big(sum_r);
    let cauchy_step_holds = nn.pow(2) * &ns <= &weight * big(sum_r2);
    let energy_form_holds = nn.pow(4) * ns.pow(2) <= weight.pow(2) * big(eg) * big(eh);

    let (ff, gf, hf) = (f.order() as f64, g.order() as f64, h.order() as f64);
    let energy_form_rhs =
        ff.powi(4) * gf.powi(2) * hf.powi(2) / s_order as f64 * ((eg as f64) * (eh as f64)).sqrt();
    Ok(CauchyStep {
        orders: [f.order(), g.order(), h.order()],
        n,
        product_set_size: s_order,
        sum_r,
        sum_r_squared: sum_r2,
        energy_g_minus_one: eg,
        energy_h_minus_one: eh,
        identity_holds,
        cauchy_step_holds,
        energy_form_holds,
        lhs: (n as f64) * (n as f64),
        energy_form_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::subgroup_of_order;

    fn ctx(p: u64) -> FieldCtx<f64> {
        FieldCtx::new(p).unwrap()
    }

    fn set(v: &[u64]) -> ResidueSet {
        ResidueSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn energy_of_shifted_cube_roots() {
        let c = ctx(13);
        let u = set(&[2, 4, 10]);
        assert_eq!(mult_energy(&c, &u, &u).unwrap().count, 15);
        assert_eq!(mult_energy_oracle(&c, &u, &u).unwrap().count, 15);
        let g = subgroup_of_order(&c, 3).unwrap();
        assert_eq!(shifted_energy(&c, &g, 1).unwrap().count, 15);
    }

    #[test]
    fn energy_edge_cases() {
        let c = ctx(13);
        assert_eq!(mult_energy(&c, &set(&[0]), &set(&[1, 2])).unwrap().count, 4);
        let trivial = subgroup_of_order(&c, 1).unwrap();
        assert_eq!(shifted_energy(&c, &trivial, 1).unwrap().count, 1);
        let pm = subgroup_of_order(&c, 2).unwrap();
        assert_eq!(shifted_energy(&c, &pm, 1).unwrap().count, 10);
        assert_eq!(
            shifted_energy(&c, &pm, 13).unwrap_err(),
            Error::NonzeroRequired("lambda")
        );
    }

    #[test]
    fn d_times_small_values() {
        let c5 = ctx(5);
        let u = set(&[1, 4]);
        assert_eq!(d_times(&c5, &u).unwrap().count, 152);
        assert_eq!(d_times_oracle(&c5, &u).unwrap().count, 152);
        let c13 = ctx(13);
        assert_eq!(d_times(&c13, &set(&[1])).unwrap().count, 1);
        assert_eq!(d_times_oracle(&c13, &set(&[1])).unwrap().count, 1);
    }

    #[test]
    fn d_times_oracle_size_gate() {
        let c = ctx(101);
        let big = set(&(0..61).collect::<Vec<_>>());
        assert!(matches!(
            d_times_oracle(&c, &big),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn subgroup_difference_table_matches_direct() {
        for p in [13u64, 31, 101] {
            let c = ctx(p);
            for d in crate::field::divisors(p - 1) {
                let g = subgroup_of_order(&c, d).unwrap();
                let direct = difference_table(p, g.elements().as_slice());
                let logs = subgroup_difference_log_table(&c, &g).unwrap();
                for a in 1..p {
                    assert_eq!(direct[a as usize], logs[c.dlog(a).unwrap() as usize]);
                }
                assert_eq!(
                    d_times_subgroup(&c, &g).unwrap().count,
                    d_times(&c, g.elements()).unwrap().count
                );
            }
        }
    }

    #[test]
    fn n_triples_small() {
        let c = ctx(13);
        let s = |d| subgroup_of_order(&c, d).unwrap();
        assert_eq!(n_triples(&c, &s(1), &s(1), &s(1)).unwrap().count, 1);
        assert_eq!(n_triples(&c, &s(1), &s(2), &s(1)).unwrap().count, 2);
        assert_eq!(
            n_triples(&c, &s(3), &s(4), &s(2)).unwrap().count,
            n_triples_oracle(&c, &s(3), &s(4), &s(2)).unwrap().count
        );
    }

    #[test]
    fn j_distribution_p5() {
        let c = ctx(5);
        let u = set(&[1, 4]);
        let j = j_distribution(&c, &u, &u).unwrap();
        assert_eq!(j.entries().collect::<Vec<_>>(), vec![(1, 2), (4, 2)]);
        assert_eq!(j.zero_count, 12);
        assert_eq!(j.total + j.zero_count, 16);

        let one = set(&[1]);
        let j = j_distribution(&c, &one, &one).unwrap();
        assert_eq!(j.total, 0);
        assert_eq!(j.zero_count, 1);
    }

    #[test]
    fn i_distribution_p13() {
        let c = ctx(13);
        let i = i_distribution(&c, &set(&[1, 12]), &set(&[1])).unwrap();
        assert_eq!(
            i.entries().collect::<Vec<_>>(),
            vec![(0, 2), (2, 1), (11, 1)]
        );
        assert_eq!(i.sum_of_squares(), 6);
        let s = |d| subgroup_of_order(&c, d).unwrap();
        assert_eq!(n_triples(&c, &s(1), &s(2), &s(2)).unwrap().count, 6);

        let z = set(&[2, 5, 7]);
        let i = i_distribution(&c, &set(&[1]), &z).unwrap();
        assert_eq!(i.get(0), 3);
        assert_eq!(i.total, 3);
    }

    #[test]
    fn cauchy_identity_and_step() {
        let c = ctx(13);
        let s = |d| subgroup_of_order(&c, d).unwrap();
        let step = cauchy_step(&c, &s(3), &s(4), &s(2)).unwrap();
        assert!(step.identity_holds);
        assert!(step.cauchy_step_holds);
    }

    #[test]
    fn energy_form_misses_the_degenerate_pair() {
        // G = H = {1}: N = F^2, but the energy form caps N^2 at F^4 / |S| = F^3
        let c = ctx(13);
        let s = |d| subgroup_of_order(&c, d).unwrap();
        let step = cauchy_step(&c, &s(12), &s(1), &s(1)).unwrap();
        assert_eq!(step.n, 144);
        assert!(step.identity_holds && step.cauchy_step_holds);
        assert!(!step.energy_form_holds);
    }
}
