use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::gcd;

/// How exponents are assigned to the `k, l, m, n` roles of the quadrinomial
/// bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleMode {
    /// The last exponent keeps the `n` role; only `k, l, m` are reordered.
    #[default]
    Canonical,
    /// Every exponent is tried in the `n` role.
    Best,
}

impl std::str::FromStr for RoleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "canonical" => Ok(Self::Canonical),
            "best" => Ok(Self::Best),
            other => Err(format!("unknown mode {other:?} (expected canonical|best)")),
        }
    }
}

/// gcd data attached to a quadrinomial after role assignment.
///
/// `alpha..delta` are `gcd(exponent, p - 1)` for the exponents in the
/// `k, l, m, n` roles, and `f, g, h` are `alpha / gcd(alpha, delta)` and so
/// on. Roles are ordered so that `f >= g >= h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdParams {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
    pub delta: u64,
    pub f: u64,
    pub g: u64,
    pub h: u64,
    /// `roles[r]` is the input position placed in role `r` (`k, l, m, n`).
    pub roles: [usize; 4],
}

impl GcdParams {
    fn assign(p: u64, exps: [u64; 4], delta_role: usize) -> Result<Self> {
        let order = p - 1;
        let delta = gcd(exps[delta_role], order);
        let mut rest: Vec<(usize, u64, u64)> = (0..4)
            .filter(|&i| i != delta_role)
            .map(|i| {
                let a = gcd(exps[i], order);
                (i, a, a / gcd(a, delta))
            })
            .collect();
        // stable: ties keep input order
        rest.sort_by_key(|x| std::cmp::Reverse(x.2));
        let params = Self {
            alpha: rest[0].1,
            beta: rest[1].1,
            gamma: rest[2].1,
            delta,
            f: rest[0].2,
            g: rest[1].2,
            h: rest[2].2,
            roles: [rest[0].0, rest[1].0, rest[2].0, delta_role],
        };
        params.check(p)?;
        Ok(params)
    }

    /// `f >= g >= h` and `f <= p / delta`.
    pub fn check(&self, p: u64) -> Result<()> {
        if !(self.f >= self.g && self.g >= self.h) {
            return Err(Error::Invariant(format!(
                "f, g, h = {}, {}, {} not ordered",
                self.f, self.g, self.h
            )));
        }
        if self.f * self.delta > p {
            return Err(Error::Invariant(format!(
                "f = {} exceeds p / delta = {p} / {}",
                self.f, self.delta
            )));
        }
        Ok(())
    }
}

/// Parameter packs for the exponents `[k, l, m, n]`: one pack in canonical
/// mode, four (one per choice of the `n` role, in input order) in best mode.
pub fn gcd_params(p: u64, exps: [u64; 4], mode: RoleMode) -> Result<Vec<GcdParams>> {
    if let Some(pos) = exps.iter().position(|&k| k == 0) {
        return Err(Error::InvalidPolynomial(format!(
            "exponent at position {pos} is zero"
        )));
    }
    match mode {
        RoleMode::Canonical => Ok(vec![GcdParams::assign(p, exps, 3)?]),
        RoleMode::Best => (0..4).map(|r| GcdParams::assign(p, exps, r)).collect(),
    }
}
