//! Sweep configuration, read from JSON. Unknown keys are rejected.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sparsesum_core::field::{is_prime, MAX_MODULUS};
use sparsesum_core::{RoleMode, SparsePoly};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identity,
    Weil,
    Bilinear,
    Energy,
    Cauchy,
    Ratio,
    Bounds,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Identity,
        Suite::Weil,
        Suite::Bilinear,
        Suite::Energy,
        Suite::Cauchy,
        Suite::Ratio,
        Suite::Bounds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Identity => "identity",
            Suite::Weil => "weil",
            Suite::Bilinear => "bilinear",
            Suite::Energy => "energy",
            Suite::Cauchy => "cauchy",
            Suite::Ratio => "ratio",
            Suite::Bounds => "bounds",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PrimeSpec {
    List(Vec<u64>),
    /// Inclusive bounds; composites are dropped.
    Range([u64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomFamily {
    /// Total number of quadrinomials, spread round-robin over the primes.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GcdFamily {
    /// Number of quadrinomials per prime.
    pub per_prime: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolyFamily {
    /// `"a,k;b,l;c,m;d,n"` strings, instantiated at every prime.
    Explicit(Vec<String>),
    Random(RandomFamily),
    GcdStructured(GcdFamily),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CharacterSpec {
    /// Character indices, reduced modulo `p - 1`.
    pub list: Vec<u64>,
    /// Extra seeded random indices per quadrinomial.
    pub random: usize,
    /// One character of every order `d | p - 1`.
    pub all_orders: bool,
}

impl Default for CharacterSpec {
    fn default() -> Self {
        Self {
            list: vec![0, 1],
            random: 0,
            all_orders: false,
        }
    }
}

/// Per-quantity enumeration caps. Work above a cap is recorded as skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// `αβγ(p - 1)` terms for the subgroup-averaged sum.
    pub decomposed: u64,
    /// Tuples enumerated by any oracle counter.
    pub oracle: u64,
    /// Cost of an optimized counter (pairs or table length).
    pub counting: u64,
    /// Largest prime for which exact sums are evaluated.
    pub exact_p: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            decomposed: 200_000_000,
            oracle: 20_000_000,
            counting: 100_000_000,
            exact_p: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub primes: PrimeSpec,
    pub polynomials: Vec<PolyFamily>,
    pub characters: CharacterSpec,
    pub suites: Vec<Suite>,
    pub budgets: Budgets,
    pub seed: u64,
    pub ratio_ceiling: f64,
    pub workers: usize,
    pub mode: RoleMode,
    /// Weighted bilinear instances per prime.
    pub bilinear_per_prime: usize,
    /// Subgroup triples sampled per prime for the energy and cauchy suites;
    /// `null` takes every triple.
    pub triples_per_prime: Option<usize>,
    /// Coset representatives of `λ` tried per subgroup in the ratio suite.
    pub lambda_samples: usize,
    /// Largest power-map exponent checked in the energy suite.
    pub max_power: u64,
    /// Ratio maxima file; compared against, or created when missing.
    pub baseline: Option<PathBuf>,
    /// Adds wall time to every record (output is then not reproducible).
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            primes: PrimeSpec::Range([11, 199]),
            polynomials: vec![PolyFamily::Random(RandomFamily { count: 50 })],
            characters: CharacterSpec::default(),
            suites: Suite::ALL.to_vec(),
            budgets: Budgets::default(),
            seed: 0,
            ratio_ceiling: 100.0,
            workers: 1,
            mode: RoleMode::Canonical,
            bilinear_per_prime: 2,
            triples_per_prime: Some(6),
            lambda_samples: 16,
            max_power: 50,
            baseline: None,
            timing: false,
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| {
            HarnessError::config(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
    }

    /// The primes to sweep, in increasing order.
    pub fn prime_list(&self) -> Result<Vec<u64>> {
        let primes: Vec<u64> = match &self.primes {
            PrimeSpec::List(list) => {
                for (i, &p) in list.iter().enumerate() {
                    check_prime(&format!("primes.list[{i}]"), p)?;
                }
                let set: BTreeSet<u64> = list.iter().copied().collect();
                set.into_iter().collect()
            }
            PrimeSpec::Range([lo, hi]) => {
                if lo > hi {
                    return Err(HarnessError::config(
                        "primes.range",
                        format!("lower end {lo} exceeds upper end {hi}"),
                    ));
                }
                if *hi >= MAX_MODULUS {
                    return Err(HarnessError::config(
                        "primes.range",
                        sparsesum_core::Error::ModulusTooLarge(*hi).to_string(),
                    ));
                }
                (*lo.max(&3)..=*hi).filter(|&p| is_prime(p)).collect()
            }
        };
        if primes.is_empty() {
            return Err(HarnessError::config("primes", "no primes selected"));
        }
        Ok(primes)
    }

    pub fn validate(&self) -> Result<()> {
        let primes = self.prime_list()?;
        if self.suites.is_empty() {
            return Err(HarnessError::config("suites", "no suites selected"));
        }
        let unique: BTreeSet<Suite> = self.suites.iter().copied().collect();
        if unique.len() != self.suites.len() {
            return Err(HarnessError::config("suites", "duplicate suite"));
        }
        if !(self.ratio_ceiling.is_finite() && self.ratio_ceiling > 0.0) {
            return Err(HarnessError::config(
                "ratio_ceiling",
                "must be a positive finite number",
            ));
        }
        if self.workers == 0 {
            return Err(HarnessError::config("workers", "must be at least 1"));
        }
        if self.lambda_samples == 0 {
            return Err(HarnessError::config("lambda_samples", "must be at least 1"));
        }
        if self.triples_per_prime == Some(0) {
            return Err(HarnessError::config(
                "triples_per_prime",
                "must be at least 1 (or null for all)",
            ));
        }
        let sums = self
            .suites
            .iter()
            .any(|s| matches!(s, Suite::Identity | Suite::Weil | Suite::Bounds));
        // polynomial families only matter to the sum suites
        let families = if sums { &self.polynomials[..] } else { &[] };
        for (i, family) in families.iter().enumerate() {
            let field = format!("polynomials[{i}]");
            match family {
                PolyFamily::Explicit(list) => {
                    if list.is_empty() {
                        return Err(HarnessError::config(field, "empty explicit list"));
                    }
                    for (k, text) in list.iter().enumerate() {
                        for &p in &primes {
                            let psi = SparsePoly::parse(p, text).map_err(|e| {
                                HarnessError::config(
                                    format!("{field}.explicit[{k}]"),
                                    format!("at p = {p}: {e}"),
                                )
                            })?;
                            if psi.len() != 4 {
                                return Err(HarnessError::config(
                                    format!("{field}.explicit[{k}]"),
                                    format!("expected 4 terms, got {}", psi.len()),
                                ));
                            }
                        }
                    }
                }
                PolyFamily::Random(RandomFamily { count }) if *count == 0 => {
                    return Err(HarnessError::config(
                        format!("{field}.random.count"),
                        "must be at least 1",
                    ));
                }
                PolyFamily::Random(_) => {
                    if let Some(&p) = primes.iter().find(|&&p| p < 7) {
                        return Err(HarnessError::config(
                            field,
                            format!("p = {p} has fewer than four usable exponents"),
                        ));
                    }
                }
                PolyFamily::GcdStructured(GcdFamily { per_prime }) if *per_prime == 0 => {
                    return Err(HarnessError::config(
                        format!("{field}.gcd_structured.per_prime"),
                        "must be at least 1",
                    ));
                }
                PolyFamily::GcdStructured(_) => {
                    if let Some(&p) = primes.iter().find(|&&p| p < 7) {
                        return Err(HarnessError::config(
                            field,
                            format!("p = {p} has fewer than four usable exponents"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_prime(field: &str, p: u64) -> Result<()> {
    if p >= MAX_MODULUS {
        return Err(HarnessError::config(
            field,
            sparsesum_core::Error::ModulusTooLarge(p).to_string(),
        ));
    }
    if p < 3 || !is_prime(p) {
        return Err(HarnessError::config(
            field,
            sparsesum_core::Error::CompositeModulus(p).to_string(),
        ));
    }
    Ok(())
}
