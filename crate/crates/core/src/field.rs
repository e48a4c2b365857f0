//! Prime-field context and modular integer helpers.
//!
//! All residues are `u64` values in `[0, p)`. Because `p < 2^31`, products of
//! two residues fit in a `u64` without widening.

use num_complex::Complex;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exclusive upper limit on the modulus.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Largest modulus for which discrete-log and phase tables are built.
///
/// Above this the context still supports arithmetic and bound evaluation, but
/// every table-driven operation reports `BudgetExceeded`.
pub const TABLE_LIMIT: u64 = 1 << 21;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as `(prime, multiplicity)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (q, k) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= q;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Smallest primitive root of the prime `p`.
pub fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors: Vec<u64> = factorize(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Reduce a signed exponent to the positive residue class in `[1, p - 1]`.
///
/// On `F_p^*` the power `x^k` only depends on `k mod (p - 1)`; the class of 0
/// is represented by `p - 1` so exponents stay positive.
pub fn normalize_exponent(k: i64, order: u64) -> u64 {
    let r = k.rem_euclid(order as i64) as u64;
    if r == 0 {
        order
    } else {
        r
    }
}

/// A sorted, duplicate-free list of residues.
///
/// Weight arrays and distributions index sets by position, so the sort order
/// fixes the indexing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ResidueSet(Vec<u64>);

impl ResidueSet {
    /// Sorts `elements`; rejects duplicates.
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        if let Some(i) = elements.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::UnsortedSet(i + 1));
        }
        Ok(Self(elements))
    }

    /// Accepts an already strictly increasing list.
    pub fn from_sorted(elements: Vec<u64>) -> Result<Self> {
        if let Some(i) = elements.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSet(i + 1));
        }
        Ok(Self(elements))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    /// `{x + shift mod p}`.
    pub fn shifted(&self, shift: u64, p: u64) -> Self {
        let mut v: Vec<u64> = self.0.iter().map(|&x| (x + shift) % p).collect();
        v.sort_unstable();
        Self(v)
    }

    pub(crate) fn check_reduced(&self, p: u64) -> Result<()> {
        match self.0.last() {
            Some(&x) if x >= p => Err(Error::ResidueOutOfRange { value: x, p }),
            _ => Ok(()),
        }
    }
}

impl AsRef<[u64]> for ResidueSet {
    fn as_ref(&self) -> &[u64] {
        &self.0
    }
}

pub(crate) struct Tables<T> {
    /// `dlog[x]` for `x` in `[1, p)`; `dlog[0]` is unused.
    pub dlog: Vec<u32>,
    /// `pow[t] = g^t` for `t` in `[0, p - 1)`.
    pub pow: Vec<u32>,
    /// `phase[u] = exp(2πi u / p)`.
    pub phase: Vec<Complex<T>>,
    /// `roots[s] = exp(2πi s / (p - 1))`, the values of characters.
    pub roots: Vec<Complex<T>>,
}

/// Immutable context for arithmetic in `F_p`.
///
/// Holds the modulus, its smallest primitive root and, for `p <= TABLE_LIMIT`,
/// discrete-log, power and phase tables. Cheap to share across threads.
pub struct FieldCtx<T: Scalar = f64> {
    p: u64,
    generator: u64,
    tables: Option<Tables<T>>,
}

impl<T: Scalar> std::fmt::Debug for FieldCtx<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("generator", &self.generator)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl<T: Scalar> FieldCtx<T> {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        let generator = smallest_primitive_root(p);
        let tables = (p <= TABLE_LIMIT).then(|| build_tables(p, generator));
        Ok(Self {
            p,
            generator,
            tables,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Order of the multiplicative group, `p - 1`.
    pub fn group_order(&self) -> u64 {
        self.p - 1
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub(crate) fn tables(&self, quantity: &'static str) -> Result<&Tables<T>> {
        self.tables.as_ref().ok_or(Error::BudgetExceeded {
            quantity,
            cost: self.p as u128,
            budget: TABLE_LIMIT as u128,
        })
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, x: u64, e: u64) -> u64 {
        pow_mod(x, e, self.p)
    }

    pub fn inv(&self, x: u64) -> u64 {
        debug_assert!(!x.is_multiple_of(self.p));
        pow_mod(x, self.p - 2, self.p)
    }

    /// `g^t`.
    pub fn gen_pow(&self, t: u64) -> u64 {
        let t = t % (self.p - 1);
        match &self.tables {
            Some(tb) => tb.pow[t as usize] as u64,
            None => pow_mod(self.generator, t, self.p),
        }
    }

    /// Discrete logarithm to base `g`; `None` for zero or when no tables exist.
    pub fn dlog(&self, x: u64) -> Option<u64> {
        let x = x % self.p;
        if x == 0 {
            return None;
        }
        self.tables.as_ref().map(|tb| tb.dlog[x as usize] as u64)
    }

    /// `e_p(u) = exp(2πi u / p)`.
    pub fn e(&self, u: u64) -> Complex<T> {
        let u = u % self.p;
        match &self.tables {
            Some(tb) => tb.phase[u as usize],
            None => unit_phase(u, self.p),
        }
    }
}

pub(crate) fn unit_phase<T: Scalar>(num: u64, den: u64) -> Complex<T> {
    let angle = std::f64::consts::TAU * (num as f64 / den as f64);
    Complex::new(T::of_f64(angle.cos()), T::of_f64(angle.sin()))
}

fn build_tables<T: Scalar>(p: u64, g: u64) -> Tables<T> {
    let order = (p - 1) as usize;
    let mut dlog = vec![u32::MAX; p as usize];
    let mut pow = Vec::with_capacity(order);
    let mut x = 1u64;
    for t in 0..order {
        pow.push(x as u32);
        dlog[x as usize] = t as u32;
        x = x * g % p;
    }
    debug_assert_eq!(x, 1);
    let phase = (0..p).map(|u| unit_phase(u, p)).collect();
    let roots = (0..p - 1).map(|s| unit_phase(s, p - 1)).collect();
    Tables {
        dlog,
        pow,
        phase,
        roots,
    }
}
