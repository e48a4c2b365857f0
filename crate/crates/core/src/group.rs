//! Multiplicative subgroups of `F_p^*` and power maps on them.

use crate::error::{Error, Result};
use crate::field::{gcd, lcm, FieldCtx, ResidueSet};
use crate::scalar::Scalar;

/// The subgroup of `F_p^*` of order `d`, i.e. the `d`-th roots of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    order: u64,
    elements: ResidueSet,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn elements(&self) -> &ResidueSet {
        &self.elements
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.contains(x)
    }

    /// Step between consecutive discrete logs of elements, `(p - 1) / order`.
    pub fn index(&self, p: u64) -> u64 {
        (p - 1) / self.order
    }

    /// `{g - 1 : g ∈ G}`; contains 0.
    pub fn minus_one(&self, p: u64) -> ResidueSet {
        self.elements.shifted(p - 1, p)
    }
}

/// `{x : x^d = 1} = {g^{j(p-1)/d} : 0 <= j < d}`.
pub fn subgroup_of_order<T: Scalar>(ctx: &FieldCtx<T>, d: u64) -> Result<Subgroup> {
    let order = ctx.group_order();
    if d == 0 || !order.is_multiple_of(d) {
        return Err(Error::NotADivisor { d, order });
    }
    let step = order / d;
    let mut elements: Vec<u64> = (0..d).map(|j| ctx.gen_pow(j * step)).collect();
    elements.sort_unstable();
    Ok(Subgroup {
        order: d,
        elements: ResidueSet::from_sorted(elements)?,
    })
}

/// Image of `x -> x^n` on a subgroup together with its uniform fibre size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageWithMultiplicity {
    pub image: ResidueSet,
    pub multiplicity: u64,
    pub source_size: u64,
}

/// Power map image on `source` (pass the order `p - 1` subgroup for all of
/// `F_p^*`). Every fibre is counted; a non-uniform tally is an error.
pub fn power_image<T: Scalar>(
    ctx: &FieldCtx<T>,
    source: &Subgroup,
    n: u64,
) -> Result<ImageWithMultiplicity> {
    let p = ctx.p();
    let mut tally = std::collections::BTreeMap::<u64, u64>::new();
    for x in source.elements.iter() {
        *tally.entry(ctx.pow(x, n)).or_default() += 1;
    }
    let multiplicity = *tally.values().next().expect("subgroups are nonempty");
    if tally.values().any(|&c| c != multiplicity) {
        return Err(Error::NonUniformImage {
            n,
            source_size: source.order,
        });
    }
    debug_assert!(tally.keys().all(|&y| y < p));
    Ok(ImageWithMultiplicity {
        image: ResidueSet::from_sorted(tally.into_keys().collect())?,
        multiplicity,
        source_size: source.order,
    })
}

/// Predicted `(|image|, multiplicity)` for `x -> x^n` on a subgroup of order
/// `alpha`: `(alpha / gcd(alpha, δ), gcd(alpha, δ))` with `δ = gcd(n, p - 1)`.
pub fn power_image_shape(p: u64, alpha: u64, n: u64) -> (u64, u64) {
    let delta = gcd(n, p - 1);
    let m = gcd(alpha, delta);
    (alpha / m, m)
}

/// `{f g h ... : f ∈ F, g ∈ G, ...}`, enumerated and checked against the
/// subgroup of order `lcm` of the orders.
pub fn product_set<T: Scalar>(ctx: &FieldCtx<T>, groups: &[Subgroup]) -> Result<Subgroup> {
    let p = ctx.p();
    let mut present = vec![false; p as usize];
    let mut current = vec![1u64];
    for g in groups {
        g.elements.check_reduced(p)?;
        let mut next = Vec::new();
        for &a in &current {
            for b in g.elements.iter() {
                let c = ctx.mul(a, b);
                if !present[c as usize] {
                    present[c as usize] = true;
                    next.push(c);
                }
            }
        }
        for &c in &next {
            present[c as usize] = false;
        }
        current = next;
    }
    current.sort_unstable();
    let order = groups.iter().fold(1, |acc, g| lcm(acc, g.order));
    let expected = subgroup_of_order(ctx, order)?;
    if expected.elements.as_slice() != current.as_slice() {
        return Err(Error::Invariant(format!(
            "product set has {} elements, expected the subgroup of order {order}",
            current.len()
        )));
    }
    Ok(expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> FieldCtx<f64> {
        FieldCtx::new(p).unwrap()
    }

    #[test]
    fn small_subgroups_of_13() {
        let c = ctx(13);
        assert_eq!(
            subgroup_of_order(&c, 3).unwrap().elements().as_slice(),
            &[1, 3, 9]
        );
        assert_eq!(
            subgroup_of_order(&c, 4).unwrap().elements().as_slice(),
            &[1, 5, 8, 12]
        );
        assert_eq!(
            subgroup_of_order(&c, 1).unwrap().elements().as_slice(),
            &[1]
        );
        assert_eq!(
            subgroup_of_order(&c, 5).unwrap_err(),
            Error::NotADivisor { d: 5, order: 12 }
        );
    }

    #[test]
    fn subgroup_equals_roots_of_unity_by_scan() {
        for p in [3u64, 13, 31, 97, 211] {
            let c = ctx(p);
            for d in crate::field::divisors(p - 1) {
                let g = subgroup_of_order(&c, d).unwrap();
                let scan: Vec<u64> = (1..p).filter(|&x| c.pow(x, d) == 1).collect();
                assert_eq!(g.elements().as_slice(), scan.as_slice(), "p={p} d={d}");
            }
        }
    }

    #[test]
    fn squares_mod_13() {
        let c = ctx(13);
        let full = subgroup_of_order(&c, 12).unwrap();
        let img = power_image(&c, &full, 2).unwrap();
        assert_eq!(img.image.as_slice(), &[1, 3, 4, 9, 10, 12]);
        assert_eq!(img.multiplicity, 2);
        let id = power_image(&c, &full, 1).unwrap();
        assert_eq!(id.image.len(), 12);
        assert_eq!(id.multiplicity, 1);
    }

    #[test]
    fn cube_map_kills_order_three() {
        let c = ctx(13);
        let g3 = subgroup_of_order(&c, 3).unwrap();
        let img = power_image(&c, &g3, 3).unwrap();
        assert_eq!(img.image.as_slice(), &[1]);
        assert_eq!(img.multiplicity, 3);
    }

    #[test]
    fn product_sets() {
        let c = ctx(13);
        let s = |d| subgroup_of_order(&c, d).unwrap();
        assert_eq!(product_set(&c, &[s(3), s(4)]).unwrap().order(), 12);
        assert_eq!(
            product_set(&c, &[s(2), s(2)])
                .unwrap()
                .elements()
                .as_slice(),
            &[1, 12]
        );
        assert_eq!(product_set(&c, &[s(1), s(1), s(1)]).unwrap().order(), 1);
    }

    #[test]
    fn minus_one_contains_zero() {
        let c = ctx(13);
        let g = subgroup_of_order(&c, 2).unwrap();
        assert_eq!(g.minus_one(13).as_slice(), &[0, 11]);
    }
}
