use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{normalize_exponent, pow_mod};

pub const MAX_TERMS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: u64,
    pub exp: u64,
}

/// `Ψ(X) = Σ a_i X^{k_i}` over `F_p`, with `1 <= t <= 8` terms.
///
/// Coefficients are nonzero residues. Exponents are stored as positive
/// residues modulo `p - 1` (in `[1, p - 1]`) and are pairwise distinct there.
/// Term order is preserved: for quadrinomials the four terms play the roles
/// `a X^k, b X^l, c X^m, d X^n` in that order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsePoly {
    p: u64,
    terms: Vec<Term>,
}

impl SparsePoly {
    /// Builds a polynomial from signed `(coefficient, exponent)` pairs.
    pub fn new(p: u64, terms: &[(i64, i64)]) -> Result<Self> {
        if p < 3 {
            return Err(Error::InvalidPolynomial(format!("modulus {p} too small")));
        }
        if terms.is_empty() || terms.len() > MAX_TERMS {
            return Err(Error::InvalidPolynomial(format!(
                "need 1..={MAX_TERMS} terms, got {}",
                terms.len()
            )));
        }
        let order = p - 1;
        let mut out = Vec::with_capacity(terms.len());
        for &(a, k) in terms {
            let coeff = a.rem_euclid(p as i64) as u64;
            if coeff == 0 {
                return Err(Error::InvalidPolynomial(format!(
                    "coefficient {a} vanishes mod {p}"
                )));
            }
            if k == 0 {
                return Err(Error::InvalidPolynomial("zero exponent".into()));
            }
            let exp = normalize_exponent(k, order);
            if out.iter().any(|t: &Term| t.exp == exp) {
                return Err(Error::InvalidPolynomial(format!(
                    "exponent {k} collides with another term modulo {order}"
                )));
            }
            out.push(Term { coeff, exp });
        }
        Ok(Self { p, terms: out })
    }

    /// All coefficients equal to one.
    pub fn monic_terms(p: u64, exponents: &[i64]) -> Result<Self> {
        let terms: Vec<(i64, i64)> = exponents.iter().map(|&k| (1, k)).collect();
        Self::new(p, &terms)
    }

    /// Parses `"a,k;b,l;..."`.
    pub fn parse(p: u64, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (a, k) = chunk
                .split_once(',')
                .ok_or_else(|| Error::InvalidPolynomial(format!("term {chunk:?} lacks ','")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidPolynomial(format!("{s:?}: {e}")))
            };
            terms.push((parse(a)?, parse(k)?));
        }
        Self::new(p, &terms)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.exp).collect()
    }

    pub fn coefficients(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    /// The exponents as a `[k, l, m, n]` array when `Ψ` is a quadrinomial.
    pub fn quad_exponents(&self) -> Option<[u64; 4]> {
        (self.terms.len() == 4).then(|| {
            [
                self.terms[0].exp,
                self.terms[1].exp,
                self.terms[2].exp,
                self.terms[3].exp,
            ]
        })
    }

    /// `Ψ(x) mod p` by square-and-multiply.
    pub fn eval(&self, x: u64) -> u64 {
        self.terms.iter().fold(0, |acc, t| {
            (acc + t.coeff * pow_mod(x, t.exp, self.p)) % self.p
        })
    }
}

impl fmt::Display for SparsePoly {
    /// Same `a,k;b,l` syntax accepted by [`SparsePoly::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{}", t.coeff, t.exp)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let poly = SparsePoly::parse(13, "1,4; 1,6;1,3;1,2").unwrap();
        assert_eq!(poly.exponents(), vec![4, 6, 3, 2]);
        assert_eq!(poly.to_string(), "1,4;1,6;1,3;1,2");
        assert_eq!(SparsePoly::parse(13, &poly.to_string()).unwrap(), poly);
    }

    #[test]
    fn negative_exponents_and_coefficients_normalize() {
        let poly = SparsePoly::new(13, &[(-1, -1), (27, 25)]).unwrap();
        assert_eq!(poly.coefficients(), vec![12, 1]);
        assert_eq!(poly.exponents(), vec![11, 1]);
    }

    #[test]
    fn collisions_and_degenerate_terms_are_rejected() {
        assert!(SparsePoly::new(13, &[(1, 1), (1, 13)]).is_err());
        assert!(SparsePoly::new(13, &[(13, 1)]).is_err());
        assert!(SparsePoly::new(13, &[(1, 0)]).is_err());
        assert!(SparsePoly::new(13, &[]).is_err());
        let nine: Vec<(i64, i64)> = (1..=9).map(|k| (1, k)).collect();
        assert!(SparsePoly::new(13, &nine).is_err());
        assert!(SparsePoly::parse(13, "1;2").is_err());
    }

    #[test]
    fn evaluation() {
        let poly = SparsePoly::parse(13, "1,3;1,1").unwrap();
        assert_eq!(poly.eval(2), 10);
        assert_eq!(poly.eval(0), 0);
    }
}
