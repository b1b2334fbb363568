//! Partial transposition at the level of moments.
//!
//! For a word that factors over a split into untouched and transposed modes,
//! `⟨O_A O_B⟩_{ρ^PT} = ⟨O_A O_B^T⟩_ρ`, and in the number basis the transpose of
//! `b†^p b^q` is `b†^q b^p`. A PT average is therefore an ordinary average of a
//! relabelled polynomial; no density matrix is formed.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{require_hermitian, OperatorPoly, ProductOperator};
use crate::error::{Error, Result};
use crate::fock::Moments;

/// Non-empty set of transposed mode indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeSet(BTreeSet<usize>);

impl ModeSet {
    pub fn new(modes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = modes.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidParameter("transposed mode set is empty".into()));
        }
        Ok(ModeSet(set))
    }

    pub fn single(mode: usize) -> Self {
        ModeSet(BTreeSet::from([mode]))
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.0.contains(&mode)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check_range(&self, mode_count: usize) -> Result<()> {
        match self.0.iter().find(|&&k| k >= mode_count) {
            Some(&index) => Err(Error::ModeIndex { index, mode_count }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ModeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// PT image of a canonical polynomial: `(dag, ann)` swapped on every
/// transposed mode, coefficients unchanged.
pub fn pt_map(poly: &OperatorPoly, modes: &ModeSet) -> Result<OperatorPoly> {
    modes.check_range(poly.mode_count())?;
    Ok(poly.swap_modes(&modes.to_vec()))
}

/// PT image of a factored operator.
pub fn pt_map_product(op: &ProductOperator, modes: &ModeSet) -> Result<ProductOperator> {
    modes.check_range(op.mode_count())?;
    Ok(op.transpose_modes(&modes.to_vec()))
}

/// `⟨poly⟩_{ρ^PT}`
pub fn pt_expectation<M: Moments + ?Sized>(
    state: &M,
    poly: &OperatorPoly,
    modes: &ModeSet,
) -> Result<Complex64> {
    state.expect(&pt_map(poly, modes)?)
}

pub fn pt_expectation_product<M: Moments + ?Sized>(
    state: &M,
    op: &ProductOperator,
    modes: &ModeSet,
) -> Result<Complex64> {
    state.expect_product(&pt_map_product(op, modes)?)
}

/// `⟨poly²⟩_{ρ^PT} − ⟨poly⟩²_{ρ^PT}`. May be negative, which already
/// certifies that the state is NPT.
pub fn pt_variance<M: Moments + ?Sized>(
    state: &M,
    poly: &OperatorPoly,
    modes: &ModeSet,
) -> Result<f64> {
    require_hermitian(poly)?;
    let mean = pt_expectation(state, poly, modes)?.re;
    let second = pt_expectation(state, &poly.checked_mul(poly)?, modes)?.re;
    Ok(second - mean * mean)
}
