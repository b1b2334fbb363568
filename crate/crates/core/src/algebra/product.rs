//! Tensor products of single-mode polynomials.
//!
//! Products of local operators such as `∏_k (Z_k†Z_k + Z_kZ_k†)` expand into
//! exponentially many words; kept factored, their expectations cost
//! `O(kets² · modes)` instead.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::monomial::{reorder_single, BosonMonomial, ModePowers};
use super::poly::{OperatorPoly, COEFF_PRUNE};
use crate::error::{check_modes, Error, Result};

/// Largest expansion `ProductOperator::expand` will build.
pub const MAX_EXPANDED_TERMS: usize = 1 << 20;

/// Polynomial in `a`, `a†` of a single mode, normally ordered.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingleModePoly {
    terms: BTreeMap<ModePowers, Complex64>,
}

impl SingleModePoly {
    pub fn identity() -> Self {
        Self::term(ModePowers::IDENTITY, Complex64::new(1.0, 0.0))
    }

    pub fn term(p: ModePowers, c: Complex64) -> Self {
        let mut out = SingleModePoly::default();
        out.terms.insert(p, c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModePowers, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&ModePowers::IDENTITY)
                .is_some_and(|c| (c - Complex64::new(1.0, 0.0)).norm() == 0.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            *out.terms.entry(*p).or_default() += c;
        }
        out.terms.retain(|_, c| c.norm() >= COEFF_PRUNE);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = SingleModePoly::default();
        for (lp, lc) in &self.terms {
            for (rp, rc) in &other.terms {
                for (p, k) in reorder_single(*lp, *rp) {
                    *out.terms.entry(p).or_default() += lc * rc * k;
                }
            }
        }
        out.terms.retain(|_, c| c.norm() >= COEFF_PRUNE);
        out
    }

    pub fn dagger(&self) -> Self {
        SingleModePoly {
            terms: self.terms.iter().map(|(p, c)| (p.swapped(), c.conj())).collect(),
        }
    }

    /// Number-basis transpose: swaps powers, keeps coefficients.
    pub fn transpose(&self) -> Self {
        SingleModePoly {
            terms: self.terms.iter().map(|(p, c)| (p.swapped(), *c)).collect(),
        }
    }

    /// Number-basis complex conjugate: conjugates coefficients only.
    pub fn conj(&self) -> Self {
        SingleModePoly {
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    /// `⟨out|self|inp⟩` for Fock kets of this mode.
    pub fn matrix_element(&self, out: u32, inp: u32) -> Complex64 {
        let mut acc = Complex64::default();
        for (p, c) in &self.terms {
            if p.ann > inp || inp - p.ann + p.dag != out {
                continue;
            }
            acc += c * ladder_factor(inp, p.ann, p.dag);
        }
        acc
    }
}

/// Amplitude of `a†^dag a^ann |n⟩` on `|n - ann + dag⟩`; zero when `ann > n`.
pub(crate) fn ladder_factor(n: u32, ann: u32, dag: u32) -> f64 {
    if ann > n {
        return 0.0;
    }
    let mut f = 1.0;
    for i in 0..ann {
        f *= f64::from(n - i).sqrt();
    }
    let mid = n - ann;
    for i in 1..=dag {
        f *= f64::from(mid + i).sqrt();
    }
    f
}

/// `coeff · ⊗_k F_k` with one single-mode factor per mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductOperator {
    coeff: Complex64,
    factors: Vec<SingleModePoly>,
}

impl ProductOperator {
    pub fn identity(mode_count: usize) -> Self {
        ProductOperator {
            coeff: Complex64::new(1.0, 0.0),
            factors: vec![SingleModePoly::identity(); mode_count],
        }
    }

    pub fn from_factors(coeff: Complex64, factors: Vec<SingleModePoly>) -> Self {
        ProductOperator { coeff, factors }
    }

    pub fn from_monomial(word: &BosonMonomial, coeff: Complex64) -> Self {
        ProductOperator {
            coeff,
            factors: word
                .powers()
                .iter()
                .map(|p| SingleModePoly::term(*p, Complex64::new(1.0, 0.0)))
                .collect(),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.factors.len()
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    pub fn factors(&self) -> &[SingleModePoly] {
        &self.factors
    }

    pub fn factor(&self, k: usize) -> &SingleModePoly {
        &self.factors[k]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ProductOperator { coeff: self.coeff * c, factors: self.factors.clone() }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_modes(self.mode_count(), other.mode_count())?;
        Ok(ProductOperator {
            coeff: self.coeff * other.coeff,
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(l, r)| l.mul(r))
                .collect(),
        })
    }

    pub fn dagger(&self) -> Self {
        ProductOperator {
            coeff: self.coeff.conj(),
            factors: self.factors.iter().map(SingleModePoly::dagger).collect(),
        }
    }

    /// Transposes the listed tensor factors in the number basis.
    pub(crate) fn transpose_modes(&self, modes: &[usize]) -> Self {
        let mut out = self.clone();
        for &k in modes {
            out.factors[k] = out.factors[k].transpose();
        }
        out
    }

    /// Full expansion into one canonical polynomial.
    pub fn expand(&self) -> Result<OperatorPoly> {
        let size = self
            .factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.terms.len().max(1)));
        match size {
            Some(s) if s <= MAX_EXPANDED_TERMS => {}
            _ => {
                return Err(Error::Capacity(format!(
                    "product expansion exceeds {MAX_EXPANDED_TERMS} terms"
                )))
            }
        }
        let mut acc: Vec<(Vec<ModePowers>, Complex64)> = vec![(Vec::new(), self.coeff)];
        for f in &self.factors {
            let mut next = Vec::with_capacity(acc.len() * f.terms.len());
            for (w, c) in &acc {
                for (p, fc) in &f.terms {
                    let mut w2 = w.clone();
                    w2.push(*p);
                    next.push((w2, c * fc));
                }
            }
            acc = next;
        }
        OperatorPoly::from_terms(
            self.mode_count(),
            acc.into_iter().map(|(w, c)| (BosonMonomial::from_powers(w), c)),
        )
    }
}
