//! Seeded instance generation.
//!
//! Every random draw comes from a ChaCha stream keyed by the config seed and
//! the position of the instance, so adding primes or families never changes
//! the instances generated for the others.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsesum_core::field::{divisors, gcd};
use sparsesum_core::{ResidueSet, SparsePoly};

use crate::config::{PolyFamily, SweepConfig};
use crate::error::Result;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stream identified by `tags`.
pub fn stream_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix(seed), |h, &t| splitmix(h ^ splitmix(t)))
}

pub fn stream(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, tags))
}

// stream tags
const TAG_RANDOM: u64 = 1;
const TAG_GCD: u64 = 2;
const TAG_CHI: u64 = 3;
const TAG_BILINEAR: u64 = 4;
const TAG_TRIPLES: u64 = 5;

/// A quadrinomial sum to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct SumInstance {
    pub p: u64,
    pub poly: SparsePoly,
    pub j: u64,
    pub family: &'static str,
}

/// Four distinct exponents in `[1, p - 2]` with nonzero coefficients.
pub fn random_quadrinomial(p: u64, rng: &mut ChaCha8Rng) -> SparsePoly {
    let mut exps: Vec<i64> = Vec::with_capacity(4);
    while exps.len() < 4 {
        let k = rng.gen_range(1..p as i64 - 1);
        if !exps.contains(&k) {
            exps.push(k);
        }
    }
    let terms: Vec<(i64, i64)> = exps
        .into_iter()
        .map(|k| (rng.gen_range(1..p as i64), k))
        .collect();
    SparsePoly::new(p, &terms).expect("distinct exponents below p - 1")
}

/// Exponent with `gcd(k, p - 1) = target`: `target * u` with `u` coprime to
/// `(p - 1) / target`.
fn lift(p: u64, target: u64, rng: &mut ChaCha8Rng) -> u64 {
    let cofactor = (p - 1) / target;
    loop {
        let u = rng.gen_range(1..cofactor.max(2));
        if gcd(u, cofactor) == 1 {
            return target * u;
        }
    }
}

/// Quadrinomial whose last exponent has tiny gcd with `p - 1` and whose
/// other exponents are multiples of large proper divisors of `p - 1`.
pub fn gcd_structured_quadrinomial(p: u64, rng: &mut ChaCha8Rng) -> SparsePoly {
    let order = p - 1;
    let ds: Vec<u64> = divisors(order).into_iter().filter(|&d| d < order).collect();
    // the upper half of the proper divisors
    let large = &ds[ds.len() / 2..];
    let small: Vec<u64> = ds.iter().copied().filter(|&d| d <= 2).collect();
    for _ in 0..64 {
        let mut exps = Vec::with_capacity(4);
        for _ in 0..3 {
            let target = *large.choose(rng).expect("p - 1 has a proper divisor");
            exps.push(lift(p, target, rng));
        }
        exps.push(lift(p, *small.choose(rng).expect("1 divides p - 1"), rng));
        let mut sorted = exps.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == 4 {
            let terms: Vec<(i64, i64)> = exps
                .iter()
                .map(|&k| (rng.gen_range(1..p as i64), k as i64))
                .collect();
            return SparsePoly::new(p, &terms).expect("distinct exponents below p - 1");
        }
    }
    // too few exponents with the requested gcds: fall back to a random pick
    random_quadrinomial(p, rng)
}

/// Character indices for one quadrinomial, without repeats.
fn characters(config: &SweepConfig, p: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let order = p - 1;
    let mut out: Vec<u64> = Vec::new();
    let mut push = |j: u64| {
        if !out.contains(&j) {
            out.push(j);
        }
    };
    for &j in &config.characters.list {
        push(j % order);
    }
    if config.characters.all_orders {
        for d in divisors(order) {
            push(order / d % order);
        }
    }
    for _ in 0..config.characters.random {
        push(rng.gen_range(0..order));
    }
    out
}

/// Sum instances at `primes[index]`, in family order.
pub fn sum_instances(
    config: &SweepConfig,
    primes: &[u64],
    index: usize,
) -> Result<Vec<SumInstance>> {
    let p = primes[index];
    let mut polys: Vec<(SparsePoly, &'static str, u64)> = Vec::new();
    for (f, family) in config.polynomials.iter().enumerate() {
        let f = f as u64;
        match family {
            PolyFamily::Explicit(list) => {
                for (k, text) in list.iter().enumerate() {
                    polys.push((SparsePoly::parse(p, text)?, "explicit", k as u64));
                }
            }
            PolyFamily::Random(r) => {
                for i in (index..r.count).step_by(primes.len()) {
                    let mut rng = stream(config.seed, &[TAG_RANDOM, f, i as u64]);
                    polys.push((random_quadrinomial(p, &mut rng), "random", i as u64));
                }
            }
            PolyFamily::GcdStructured(g) => {
                for i in 0..g.per_prime {
                    let mut rng = stream(config.seed, &[TAG_GCD, f, p, i as u64]);
                    polys.push((
                        gcd_structured_quadrinomial(p, &mut rng),
                        "gcd_structured",
                        i as u64,
                    ));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (n, (poly, family, i)) in polys.into_iter().enumerate() {
        let mut rng = stream(config.seed, &[TAG_CHI, p, n as u64, i]);
        for j in characters(config, p, &mut rng) {
            out.push(SumInstance {
                p,
                poly: poly.clone(),
                j,
                family,
            });
        }
    }
    Ok(out)
}

/// Seeds of the bilinear instances at `p`.
pub fn bilinear_seeds(config: &SweepConfig, p: u64) -> Vec<u64> {
    (0..config.bilinear_per_prime as u64)
        .map(|i| stream_seed(config.seed, &[TAG_BILINEAR, p, i]))
        .collect()
}

/// Sets and weights of a bilinear instance.
pub struct BilinearInstance {
    pub xs: ResidueSet,
    pub ys: ResidueSet,
    pub x_weights: Vec<Complex64>,
    pub y_weights: Vec<Complex64>,
}

/// Random subsets of `F_p` with random weights of modulus at most 1.
pub fn bilinear_instance(p: u64, seed: u64) -> BilinearInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subset = |rng: &mut ChaCha8Rng| {
        let size = rng.gen_range(1..=p as usize);
        let mut all: Vec<u64> = (0..p).collect();
        let (chosen, _) = all.partial_shuffle(rng, size);
        ResidueSet::new(chosen.to_vec()).expect("distinct residues")
    };
    let xs = subset(&mut rng);
    let ys = subset(&mut rng);
    let mut weights = |n: usize| -> Vec<Complex64> {
        (0..n)
            .map(|_| {
                Complex64::from_polar(
                    rng.gen_range(0.0..=1.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect()
    };
    let x_weights = weights(xs.len());
    let y_weights = weights(ys.len());
    BilinearInstance {
        xs,
        ys,
        x_weights,
        y_weights,
    }
}

/// Subgroup order triples `(F, G, H)` with `G >= H`, all of them or a seeded
/// sample kept in lexicographic order.
pub fn subgroup_triples(config: &SweepConfig, p: u64, suite_tag: u64) -> Vec<[u64; 3]> {
    let ds = divisors(p - 1);
    let mut all = Vec::new();
    for &f in &ds {
        for &g in &ds {
            for &h in ds.iter().filter(|&&h| h <= g) {
                all.push([f, g, h]);
            }
        }
    }
    match config.triples_per_prime {
        Some(k) if k < all.len() => {
            let mut rng = stream(config.seed, &[TAG_TRIPLES, suite_tag, p]);
            let mut picked: Vec<[u64; 3]> = all.choose_multiple(&mut rng, k).copied().collect();
            picked.sort_unstable();
            picked
        }
        _ => all,
    }
}

/// Evenly spaced coset representatives `g^t` of a subgroup of index `index`,
/// at most `samples` of them, as exponents `t`.
pub fn coset_exponents(index: u64, samples: usize) -> Vec<u64> {
    let k = (samples as u64).min(index);
    (0..k).map(|i| i * index / k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{GcdFamily, RandomFamily};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream(1, &[2, 3]).gen()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(stream_seed(1, &[2, 3]), stream_seed(1, &[3, 2]));
        assert_ne!(stream_seed(1, &[2]), stream_seed(2, &[2]));
    }

    #[test]
    fn gcd_structured_targets() {
        let p = 1009; // p - 1 = 2^4 * 3^2 * 7
        for i in 0..20 {
            let mut rng = stream(5, &[i]);
            let psi = gcd_structured_quadrinomial(p, &mut rng);
            let e = psi.exponents();
            assert!(gcd(e[3], p - 1) <= 2);
            for &k in &e[..3] {
                assert!(gcd(k, p - 1) >= 12, "exponent {k}");
            }
        }
    }

    #[test]
    fn random_family_is_spread_over_primes() {
        let config = SweepConfig {
            polynomials: vec![
                PolyFamily::Random(RandomFamily { count: 5 }),
                PolyFamily::GcdStructured(GcdFamily { per_prime: 1 }),
            ],
            ..SweepConfig::default()
        };
        let primes = [11, 13];
        let a = sum_instances(&config, &primes, 0).unwrap();
        let b = sum_instances(&config, &primes, 1).unwrap();
        // 3 + 2 random and 1 structured per prime, two characters each
        assert_eq!(a.len(), (3 + 1) * 2);
        assert_eq!(b.len(), (2 + 1) * 2);
        assert_eq!(a, sum_instances(&config, &primes, 0).unwrap());
    }

    #[test]
    fn triples_sample() {
        let config = SweepConfig::default();
        let t = subgroup_triples(&config, 13, 0);
        assert_eq!(t.len(), 6);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        assert!(t.iter().all(|[_, g, h]| g >= h));
        let all = subgroup_triples(
            &SweepConfig {
                triples_per_prime: None,
                ..config
            },
            13,
            0,
        );
        // 6 divisors of 12: 6 * 21 ordered (G >= H) choices
        assert_eq!(all.len(), 126);
    }

    #[test]
    fn cosets() {
        assert_eq!(coset_exponents(3, 16), vec![0, 1, 2]);
        assert_eq!(coset_exponents(100, 4), vec![0, 25, 50, 75]);
    }
}
