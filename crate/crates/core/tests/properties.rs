use proptest::prelude::*;
use sparsesum_core::field::{divisors, gcd, is_prime, lcm};
use sparsesum_core::*;

fn prime_in(lo: u64, hi: u64) -> impl Strategy<Value = u64> {
    (lo..hi).prop_filter_map("prime", |n| is_prime(n).then_some(n))
}

/// A prime together with a divisor of `p - 1`.
fn prime_and_divisor(lo: u64, hi: u64) -> impl Strategy<Value = (u64, u64)> {
    prime_in(lo, hi).prop_flat_map(|p| {
        let ds = divisors(p - 1);
        (Just(p), proptest::sample::select(ds))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subgroup_is_the_set_of_d_th_roots((p, d) in prime_and_divisor(3, 400)) {
        let ctx = Field64::new(p).unwrap();
        let g = subgroup_of_order(&ctx, d).unwrap();
        let scan: Vec<u64> = (1..p).filter(|&x| ctx.pow(x, d) == 1).collect();
        prop_assert_eq!(g.elements().as_slice(), scan.as_slice());
    }

    #[test]
    fn power_image_is_uniform((p, alpha) in prime_and_divisor(3, 400), n in 1u64..60) {
        let ctx = Field64::new(p).unwrap();
        let g = subgroup_of_order(&ctx, alpha).unwrap();
        let img = power_image(&ctx, &g, n).unwrap();
        let (size, mult) = group::power_image_shape(p, alpha, n);
        prop_assert_eq!(img.image.len() as u64, size);
        prop_assert_eq!(img.multiplicity, mult);
        prop_assert_eq!(size * mult, alpha);
    }

    #[test]
    fn product_set_has_lcm_order(
        (p, a) in prime_and_divisor(3, 300),
        i in 0usize..64,
        j in 0usize..64,
    ) {
        let ctx = Field64::new(p).unwrap();
        let ds = divisors(p - 1);
        let (b, c) = (ds[i % ds.len()], ds[j % ds.len()]);
        let subs = [a, b, c].map(|d| subgroup_of_order(&ctx, d).unwrap());
        let s = product_set(&ctx, &subs).unwrap();
        prop_assert_eq!(s.order(), lcm(lcm(a, b), c));
    }

    #[test]
    fn gcd_pack_identities(p in prime_in(5, 2000), exps in prop::array::uniform4(1u64..2000)) {
        for mode in [RoleMode::Canonical, RoleMode::Best] {
            for pack in gcd_params(p, exps, mode).unwrap() {
                let order = p - 1;
                prop_assert_eq!(pack.delta, gcd(exps[pack.roles[3]], order));
                for (r, (a, f)) in [(pack.alpha, pack.f), (pack.beta, pack.g), (pack.gamma, pack.h)]
                    .into_iter()
                    .enumerate()
                {
                    prop_assert_eq!(a, gcd(exps[pack.roles[r]], order));
                    prop_assert_eq!(f * gcd(a, pack.delta), a);
                }
                prop_assert!(pack.f >= pack.g && pack.g >= pack.h);
                prop_assert!(pack.f * pack.delta <= p);
            }
        }
    }

    #[test]
    fn best_mode_is_no_worse(p in prime_in(5, 100_000), exps in prop::array::uniform4(1u64..1000)) {
        let canon = gcd_bound::<f64>(p, exps, RoleMode::Canonical).unwrap();
        let best = gcd_bound::<f64>(p, exps, RoleMode::Best).unwrap();
        prop_assert!(best.value() <= canon.value());
    }

    #[test]
    fn regime_follows_first_true_condition(p in prime_in(5, 1_000_000), exps in prop::array::uniform4(1u64..5000)) {
        let b = gcd_bound::<f64>(p, exps, RoleMode::Canonical).unwrap();
        let thr = (p as f64).sqrt() * (p as f64).ln();
        let GcdParams { f, g, delta, .. } = b.params;
        let expected = if g as f64 >= thr {
            Regime::GLarge
        } else if f as f64 >= thr {
            Regime::FLarge
        } else if p as f64 / delta as f64 >= thr {
            Regime::PdeltaLarge
        } else {
            Regime::PdeltaSmall
        };
        prop_assert_eq!(b.bound.regime, expected);
    }

    #[test]
    fn weil_grows_with_max_exponent(p in prime_in(5, 10_000), k in 1u64..500, extra in 1u64..500) {
        prop_assert!(weil_bound::<f64>(p, &[k]) < weil_bound::<f64>(p, &[k + extra]));
    }

    #[test]
    fn cp_grows_in_each_exponent(p in prime_in(5, 10_000), exps in prop::array::uniform4(1u64..500), i in 0usize..4) {
        let mut bigger = exps;
        bigger[i] += 1;
        prop_assert!(cp_bound::<f64>(p, exps).0 < cp_bound::<f64>(p, bigger).0);
    }

    #[test]
    fn gcd_bound_main_term_falls_with_g(p in prime_in(5, 100_000), g in 1u64..1000) {
        let pf = p as f64;
        let main = |g: u64| pf * (g as f64).powf(-0.125);
        prop_assert!(main(g + 1) < main(g));
    }

    #[test]
    fn distribution_masses((p, dw) in prime_and_divisor(3, 200), seed in 0u64..1000) {
        let ctx = Field64::new(p).unwrap();
        let w = subgroup_of_order(&ctx, dw).unwrap();
        let zs = ResidueSet::new((0..p).filter(|x| (x * 7 + seed) % 5 == 0).collect()).unwrap();
        let i = i_distribution(&ctx, w.elements(), &zs).unwrap();
        prop_assert_eq!(i.total, (dw * dw) as u128 * zs.len() as u128);
        let j = j_distribution(&ctx, w.elements(), &zs).unwrap();
        prop_assert_eq!(j.total + j.zero_count, (dw * dw) as u128 * (zs.len() * zs.len()) as u128);
    }

    #[test]
    fn exact_sum_obeys_trivial_and_weil(p in prime_in(11, 400), seed in any::<u64>(), j in 0u64..400) {
        let ctx = Field64::new(p).unwrap();
        let mut exps = Vec::new();
        let mut s = seed;
        while exps.len() < 4 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let k = 1 + (s >> 33) % (p - 2);
            if !exps.contains(&k) {
                exps.push(k);
            }
        }
        let terms: Vec<(i64, i64)> = exps.iter().map(|&k| (1 + (k % 5) as i64, k as i64)).collect();
        let psi = SparsePoly::new(p, &terms).unwrap();
        let chi = CharacterIndex::new(&ctx, j % (p - 1)).unwrap();
        let s = sum_exact(&ctx, &psi, chi).unwrap().magnitude;
        prop_assert!(s <= (p - 1) as f64 + 1e-9);
        prop_assert!(s <= weil_bound::<f64>(p, &exps) + 1e-9);
    }
}
