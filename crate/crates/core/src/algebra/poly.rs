use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::monomial::{reorder_single, BosonMonomial, ModePowers};
use crate::error::{check_modes, Error, Result};

/// Coefficients below this modulus are dropped.
pub const COEFF_PRUNE: f64 = 1e-14;

/// Relative tolerance for symbolic equality of canonical forms.
pub const SYMBOLIC_TOL: f64 = 1e-12;

/// Complex-weighted sum of normally ordered words on a fixed number of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPoly {
    mode_count: usize,
    terms: BTreeMap<BosonMonomial, Complex64>,
}

impl OperatorPoly {
    pub fn zero(mode_count: usize) -> Self {
        OperatorPoly { mode_count, terms: BTreeMap::new() }
    }

    pub fn identity(mode_count: usize) -> Self {
        Self::scalar(mode_count, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(mode_count: usize, c: Complex64) -> Self {
        Self::monomial(BosonMonomial::identity(mode_count), c)
    }

    pub fn monomial(word: BosonMonomial, coeff: Complex64) -> Self {
        let mut p = Self::zero(word.mode_count());
        p.add_term(word, coeff);
        p
    }

    /// `a_mode`
    pub fn annihilation(mode_count: usize, mode: usize) -> Self {
        Self::monomial(BosonMonomial::annihilator(mode_count, mode, 1), Complex64::new(1.0, 0.0))
    }

    /// `a_mode†`
    pub fn creation(mode_count: usize, mode: usize) -> Self {
        Self::monomial(BosonMonomial::creator(mode_count, mode, 1), Complex64::new(1.0, 0.0))
    }

    /// `a_mode† a_mode`
    pub fn number(mode_count: usize, mode: usize) -> Self {
        let mut w = BosonMonomial::identity(mode_count);
        w.set_mode(mode, ModePowers::new(1, 1));
        Self::monomial(w, Complex64::new(1.0, 0.0))
    }

    /// Builds from `(word, coeff)` pairs, merging duplicates.
    pub fn from_terms(
        mode_count: usize,
        terms: impl IntoIterator<Item = (BosonMonomial, Complex64)>,
    ) -> Result<Self> {
        let mut p = Self::zero(mode_count);
        for (w, c) in terms {
            check_modes(mode_count, w.mode_count())?;
            p.accumulate(w, c);
        }
        p.prune();
        Ok(p)
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BosonMonomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &BosonMonomial) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn accumulate(&mut self, word: BosonMonomial, coeff: Complex64) {
        *self.terms.entry(word).or_default() += coeff;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= COEFF_PRUNE);
    }

    /// Adds one term, panicking on a mode-count mismatch.
    pub fn add_term(&mut self, word: BosonMonomial, coeff: Complex64) {
        assert_eq!(word.mode_count(), self.mode_count, "mode count mismatch");
        let entry = self.terms.entry(word).or_default();
        *entry += coeff;
        if entry.norm() < COEFF_PRUNE {
            self.prune();
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = OperatorPoly {
            mode_count: self.mode_count,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        };
        out.prune();
        out
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_modes(self.mode_count, other.mode_count)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), *c);
        }
        out.prune();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale_real(-1.0))
    }

    /// Operator product `self · other` in canonical normal order.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_modes(self.mode_count, other.mode_count)?;
        let mut out = Self::zero(self.mode_count);
        for (lw, lc) in &self.terms {
            for (rw, rc) in &other.terms {
                let coeff = lc * rc;
                for (w, c) in expand_product(lw, rw) {
                    out.accumulate(w, coeff * c);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Hermitian adjoint: conjugated coefficients, swapped per-mode powers.
    pub fn dagger(&self) -> Self {
        OperatorPoly {
            mode_count: self.mode_count,
            terms: self.terms.iter().map(|(w, c)| (w.dagger(), c.conj())).collect(),
        }
    }

    /// Swaps `(dag, ann)` on the given modes of every word, keeping coefficients.
    pub(crate) fn swap_modes(&self, modes: &[usize]) -> Self {
        OperatorPoly {
            mode_count: self.mode_count,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.swap_on(modes.iter().copied()), *c))
                .collect(),
        }
    }

    /// Equality of canonical forms up to `SYMBOLIC_TOL` times the largest coefficient.
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.mode_count != other.mode_count {
            return false;
        }
        let scale = self.max_coeff().max(other.max_coeff()).max(1.0);
        match self.checked_sub(other) {
            Ok(d) => d.max_coeff() <= SYMBOLIC_TOL * scale,
            Err(_) => false,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.approx_eq(&self.dagger())
    }

    /// Largest per-mode dagger power across all words.
    pub fn max_dag_power(&self) -> u32 {
        self.terms.keys().map(|w| w.max_dag_power()).max().unwrap_or(0)
    }

    /// Per-mode maximum creation power.
    pub fn dag_powers_per_mode(&self) -> Vec<u32> {
        let mut out = vec![0; self.mode_count];
        for w in self.terms.keys() {
            for (k, p) in w.powers().iter().enumerate() {
                out[k] = out[k].max(p.dag);
            }
        }
        out
    }
}

/// Normally ordered expansion of the product of two words, one mode at a time.
fn expand_product(left: &BosonMonomial, right: &BosonMonomial) -> Vec<(BosonMonomial, f64)> {
    let n = left.mode_count();
    let mut acc: Vec<(Vec<ModePowers>, f64)> = vec![(Vec::with_capacity(n), 1.0)];
    for k in 0..n {
        let local = reorder_single(left.mode(k), right.mode(k));
        if local.len() == 1 {
            let (p, c) = local[0];
            for (w, v) in &mut acc {
                w.push(p);
                *v *= c;
            }
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for (w, v) in &acc {
            for &(p, c) in &local {
                let mut w2 = w.clone();
                w2.push(p);
                next.push((w2, v * c));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(w, c)| (BosonMonomial::from_powers(w), c))
        .collect()
}

/// Exact normally ordered expansion of `left · right`.
pub fn normal_order_product(left: &BosonMonomial, right: &BosonMonomial) -> Result<OperatorPoly> {
    check_modes(left.mode_count(), right.mode_count())?;
    OperatorPoly::from_terms(
        left.mode_count(),
        expand_product(left, right)
            .into_iter()
            .map(|(w, c)| (w, Complex64::new(c, 0.0))),
    )
}

/// `pq − qp` in canonical form.
pub fn commutator(p: &OperatorPoly, q: &OperatorPoly) -> Result<OperatorPoly> {
    p.checked_mul(q)?.checked_sub(&q.checked_mul(p)?)
}

pub fn dagger(p: &OperatorPoly) -> OperatorPoly {
    p.dagger()
}

pub(crate) fn require_hermitian(p: &OperatorPoly) -> Result<()> {
    if p.is_hermitian() {
        Ok(())
    } else {
        Err(Error::Contract("operator is not Hermitian".into()))
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)·{}", c.re, c.im, w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn a_times_adag() {
        let a = BosonMonomial::annihilator(1, 0, 1);
        let ad = BosonMonomial::creator(1, 0, 1);
        let p = normal_order_product(&a, &ad).unwrap();
        let expected = OperatorPoly::from_terms(
            1,
            [(BosonMonomial::from_pairs(&[(1, 1)]), c(1.0)), (BosonMonomial::identity(1), c(1.0))],
        )
        .unwrap();
        assert!(p.approx_eq(&expected));
    }

    #[test]
    fn a2_times_adag2() {
        let p = normal_order_product(
            &BosonMonomial::annihilator(1, 0, 2),
            &BosonMonomial::creator(1, 0, 2),
        )
        .unwrap();
        let expected = OperatorPoly::from_terms(
            1,
            [
                (BosonMonomial::from_pairs(&[(2, 2)]), c(1.0)),
                (BosonMonomial::from_pairs(&[(1, 1)]), c(4.0)),
                (BosonMonomial::identity(1), c(2.0)),
            ],
        )
        .unwrap();
        assert!(p.approx_eq(&expected), "{p}");
    }

    #[test]
    fn number_squared() {
        let n = BosonMonomial::from_pairs(&[(1, 1)]);
        let p = normal_order_product(&n, &n).unwrap();
        let expected = OperatorPoly::from_terms(
            1,
            [(BosonMonomial::from_pairs(&[(2, 2)]), c(1.0)), (n.clone(), c(1.0))],
        )
        .unwrap();
        assert!(p.approx_eq(&expected));
    }

    #[test]
    fn mode_mismatch_is_dimension_error() {
        let err = normal_order_product(&BosonMonomial::identity(1), &BosonMonomial::identity(2));
        assert_eq!(err.unwrap_err(), Error::Dimension { expected: 1, found: 2 });
    }

    #[test]
    fn dagger_is_antilinear() {
        // (i a†b)† = -i a b†
        let p = OperatorPoly::monomial(BosonMonomial::from_pairs(&[(1, 0), (0, 1)]), Complex64::i());
        let d = p.dagger();
        let expected =
            OperatorPoly::monomial(BosonMonomial::from_pairs(&[(0, 1), (1, 0)]), -Complex64::i());
        assert!(d.approx_eq(&expected));
        assert!(d.dagger().approx_eq(&p));
    }

    #[test]
    fn cancellation_prunes() {
        let p = OperatorPoly::number(2, 0);
        assert!(p.checked_sub(&p).unwrap().is_zero());
    }
}
