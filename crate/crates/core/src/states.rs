//! Constructors for the example states used throughout the test suites and
//! the CLI.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::SparseState;

fn require_even(n: usize, what: &str) -> Result<()> {
    if n >= 2 && n.is_multiple_of(2) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} needs an even mode count >= 2, got {n}")))
    }
}

/// Real amplitudes `(√w, √(1−w))` for a branch weight `w ∈ [0, 1]`.
pub fn branch_amplitudes(weight: f64) -> Result<(Complex64, Complex64)> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidParameter(format!("branch weight {weight} outside [0, 1]")));
    }
    Ok((Complex64::new(weight.sqrt(), 0.0), Complex64::new((1.0 - weight).sqrt(), 0.0)))
}

/// `c₀|N…N, 0…0⟩ + c₁|0…0, N…N⟩`, each group holding `n/2` modes.
pub fn noon(n: usize, photons: u32, c0: Complex64, c1: Complex64) -> Result<SparseState> {
    require_even(n, "noon")?;
    if photons == 0 {
        return Err(Error::InvalidParameter("noon needs at least one photon".into()));
    }
    let half = n / 2;
    let first = (0..n).map(|k| if k < half { photons } else { 0 }).collect();
    let second = (0..n).map(|k| if k < half { 0 } else { photons }).collect();
    SparseState::superposition(n, [(first, c0), (second, c1)])
}

/// `c₀|0…0, 1…1⟩ + c₁|2, 1…1, 0…0⟩`: the first branch has the second half of
/// the modes singly occupied; the second has mode 0 doubly occupied, modes
/// `1..n/2` singly occupied and the second half empty.
pub fn paper_psi(n: usize, c0: Complex64, c1: Complex64) -> Result<SparseState> {
    require_even(n, "paper_psi")?;
    let half = n / 2;
    let first = (0..n).map(|k| u32::from(k >= half)).collect();
    let second = (0..n)
        .map(|k| match k {
            0 => 2,
            k if k < half => 1,
            _ => 0,
        })
        .collect();
    SparseState::superposition(n, [(first, c0), (second, c1)])
}

/// `(|i⟩|j+n⟩ + |i+m⟩|j⟩)/√2`, two modes with fixed `n·N_a + m·N_b`.
pub fn fixed_excitation(i: u32, j: u32, m: u32, n: u32) -> Result<SparseState> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("orders must be >= 1, got m={m}, n={n}")));
    }
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    SparseState::superposition(2, [(vec![i, j + n], h), (vec![i + m, j], h)])
}

/// `c₀|01⟩ + c₁|10⟩`.
pub fn bell_like(c0: Complex64, c1: Complex64) -> Result<SparseState> {
    SparseState::superposition(2, [(vec![0, 1], c0), (vec![1, 0], c1)])
}
