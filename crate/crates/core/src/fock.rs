//! Exact sparse multimode pure states in the number basis.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{
    ladder_factor, require_hermitian, BosonMonomial, OperatorPoly, ProductOperator,
};
use crate::error::{check_modes, Error, Result};

/// Largest photon number stored in any mode.
pub const MAX_OCC: u32 = 64;

/// Amplitudes with smaller modulus are dropped.
pub const AMPLITUDE_PRUNE: f64 = 1e-15;

/// Allowed deviation of the squared norm from one for a normalized state.
pub const NORM_TOL: f64 = 1e-12;

/// Photon number per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockKet(Vec<u32>);

impl FockKet {
    pub fn new(occupations: Vec<u32>) -> Result<Self> {
        if let Some(&n) = occupations.iter().find(|&&n| n > MAX_OCC) {
            return Err(Error::Capacity(format!("occupation {n} exceeds MAX_OCC={MAX_OCC}")));
        }
        Ok(FockKet(occupations))
    }

    pub fn vacuum(mode_count: usize) -> Self {
        FockKet(vec![0; mode_count])
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    /// Image of the word on this ket: `(ket', amplitude)`, or `None` when annihilated.
    pub fn apply(&self, word: &BosonMonomial) -> Result<Option<(FockKet, f64)>> {
        check_modes(self.0.len(), word.mode_count())?;
        let mut out = Vec::with_capacity(self.0.len());
        let mut amp = 1.0;
        for (&n, p) in self.0.iter().zip(word.powers()) {
            if p.ann > n {
                return Ok(None);
            }
            let target = n - p.ann + p.dag;
            if target > MAX_OCC {
                return Err(Error::Capacity(format!(
                    "ladder action reaches occupation {target} > MAX_OCC={MAX_OCC}"
                )));
            }
            amp *= ladder_factor(n, p.ann, p.dag);
            out.push(target);
        }
        Ok(Some((FockKet(out), amp)))
    }
}

impl fmt::Display for FockKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Anything that yields expectation values of operators: pure sparse states
/// here, convex mixtures in the oracle module.
pub trait Moments {
    fn mode_count(&self) -> usize;

    fn expect(&self, poly: &OperatorPoly) -> Result<Complex64>;

    fn expect_product(&self, op: &ProductOperator) -> Result<Complex64>;
}

/// `⟨P²⟩ − ⟨P⟩²` for Hermitian `P`.
pub fn variance_of<M: Moments + ?Sized>(state: &M, poly: &OperatorPoly) -> Result<f64> {
    require_hermitian(poly)?;
    let mean = state.expect(poly)?.re;
    let second = state.expect(&poly.checked_mul(poly)?)?.re;
    Ok(second - mean * mean)
}

/// Superposition of Fock kets with complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    mode_count: usize,
    terms: BTreeMap<FockKet, Complex64>,
    normalized: bool,
}

impl SparseState {
    /// Normalized single-ket state.
    pub fn basis(occupations: Vec<u32>) -> Result<Self> {
        let ket = FockKet::new(occupations)?;
        let mode_count = ket.mode_count();
        if mode_count == 0 {
            return Err(Error::InvalidParameter("a state needs at least one mode".into()));
        }
        let mut terms = BTreeMap::new();
        terms.insert(ket, Complex64::new(1.0, 0.0));
        Ok(SparseState { mode_count, terms, normalized: true })
    }

    pub fn vacuum(mode_count: usize) -> Result<Self> {
        Self::basis(vec![0; mode_count])
    }

    /// Raw superposition; duplicates are summed. Call `normalize` before
    /// taking expectations.
    pub fn from_terms(
        mode_count: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>,
    ) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::InvalidParameter("a state needs at least one mode".into()));
        }
        let mut map: BTreeMap<FockKet, Complex64> = BTreeMap::new();
        for (occ, amp) in terms {
            check_modes(mode_count, occ.len())?;
            *map.entry(FockKet::new(occ)?).or_default() += amp;
        }
        let mut s = SparseState { mode_count, terms: map, normalized: false };
        s.prune();
        Ok(s)
    }

    /// Normalized superposition.
    pub fn superposition(
        mode_count: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>,
    ) -> Result<Self> {
        Self::from_terms(mode_count, terms)?.normalize()
    }

    /// The zero vector on `mode_count` modes.
    pub fn zero(mode_count: usize) -> Self {
        SparseState { mode_count, terms: BTreeMap::new(), normalized: false }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= AMPLITUDE_PRUNE);
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

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockKet, &Complex64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occupations: &[u32]) -> Complex64 {
        self.terms
            .get(&FockKet(occupations.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// Largest occupation of each mode over the support.
    pub fn max_occupations(&self) -> Vec<u32> {
        let mut out = vec![0; self.mode_count];
        for ket in self.terms.keys() {
            for (k, &n) in ket.0.iter().enumerate() {
                out[k] = out[k].max(n);
            }
        }
        out
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateState);
        }
        let mut out = SparseState {
            mode_count: self.mode_count,
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a / norm)).collect(),
            normalized: true,
        };
        out.prune();
        Ok(out)
    }

    /// `|self⟩ ⊗ |other⟩`, modes of `self` first.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (lk, la) in &self.terms {
            for (rk, ra) in &other.terms {
                let mut occ = lk.0.clone();
                occ.extend_from_slice(&rk.0);
                terms.insert(FockKet(occ), la * ra);
            }
        }
        let mut s = SparseState {
            mode_count: self.mode_count + other.mode_count,
            terms,
            normalized: self.normalized && other.normalized,
        };
        s.prune();
        s
    }

    /// Multiplies each amplitude by `exp(i Σ_k φ_k n_k)`.
    pub fn with_local_phases(&self, phases: &[f64]) -> Result<Self> {
        check_modes(self.mode_count, phases.len())?;
        let mut out = self.clone();
        for (ket, amp) in out.terms.iter_mut() {
            let angle: f64 = ket.0.iter().zip(phases).map(|(&n, &p)| f64::from(n) * p).sum();
            *amp *= Complex64::from_polar(1.0, angle);
        }
        Ok(out)
    }

    /// Unnormalized image of the state under a normally ordered word.
    pub fn apply_monomial(&self, word: &BosonMonomial) -> Result<SparseState> {
        check_modes(self.mode_count, word.mode_count())?;
        let mut terms: BTreeMap<FockKet, Complex64> = BTreeMap::new();
        for (ket, amp) in &self.terms {
            if let Some((img, f)) = ket.apply(word)? {
                *terms.entry(img).or_default() += amp * f;
            }
        }
        let mut s = SparseState { mode_count: self.mode_count, terms, normalized: false };
        s.prune();
        Ok(s)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_modes(self.mode_count, other.mode_count)?;
        let (small, large, flip) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::default();
        for (ket, a) in &small.terms {
            if let Some(b) = large.terms.get(ket) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    fn require_normalized(&self) -> Result<()> {
        if self.normalized && (self.norm_sqr() - 1.0).abs() <= NORM_TOL {
            Ok(())
        } else {
            Err(Error::Contract("expectation requires a normalized state".into()))
        }
    }

    /// `⟨ψ| word |ψ⟩`; equivalent to `inner(ψ, apply_monomial(ψ, word))`.
    fn word_expectation(&self, word: &BosonMonomial) -> Result<Complex64> {
        let mut acc = Complex64::default();
        for (ket, amp) in &self.terms {
            if let Some((img, f)) = ket.apply(word)? {
                if let Some(b) = self.terms.get(&img) {
                    acc += b.conj() * amp * f;
                }
            }
        }
        Ok(acc)
    }

    pub fn expectation(&self, poly: &OperatorPoly) -> Result<Complex64> {
        check_modes(self.mode_count, poly.mode_count())?;
        self.require_normalized()?;
        let mut acc = Complex64::default();
        for (word, c) in poly.terms() {
            acc += c * self.word_expectation(word)?;
        }
        Ok(acc)
    }

    /// Expectation of a factored operator via pairwise single-mode matrix elements.
    pub fn expectation_product(&self, op: &ProductOperator) -> Result<Complex64> {
        check_modes(self.mode_count, op.mode_count())?;
        self.require_normalized()?;
        let factors = op.factors();
        let mut acc = Complex64::default();
        for (bra, ba) in &self.terms {
            'ket: for (ket, ka) in &self.terms {
                let mut elem = Complex64::new(1.0, 0.0);
                for ((f, &out), &inp) in factors.iter().zip(&bra.0).zip(&ket.0) {
                    elem *= f.matrix_element(out, inp);
                    if elem.norm_sqr() == 0.0 {
                        continue 'ket;
                    }
                }
                acc += ba.conj() * ka * elem;
            }
        }
        Ok(acc * op.coeff())
    }

    pub fn variance(&self, poly: &OperatorPoly) -> Result<f64> {
        variance_of(self, poly)
    }
}

impl Moments for SparseState {
    fn mode_count(&self) -> usize {
        self.mode_count
    }

    fn expect(&self, poly: &OperatorPoly) -> Result<Complex64> {
        self.expectation(poly)
    }

    fn expect_product(&self, op: &ProductOperator) -> Result<Complex64> {
        self.expectation_product(op)
    }
}

impl fmt::Display for SparseState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", a.re, a.im, k)?;
        }
        Ok(())
    }
}
