//! Constructors for the named two-mode and multimode operators.
//!
//! Two-mode operators act on modes 0 (`a`) and 1 (`b`). The `L` family is
//! generated by a word `M`: `L_x = ½(M + M†)`, `L_y = (M − M†)/2i`,
//! `L_z = ½[M, M†]`. `J` is the `L` family of `a†b`, and `H`/`K` come from
//! exchanging `b ↔ b†`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::monomial::{BosonMonomial, ModePowers};
use super::poly::{commutator, OperatorPoly};
use crate::error::{Error, Result};

const HALF: Complex64 = Complex64::new(0.5, 0.0);
/// `1/(2i)`
const HALF_OVER_I: Complex64 = Complex64::new(0.0, -0.5);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedOperator {
    Jx,
    Jy,
    Jz,
    Kx,
    Ky,
    Kz,
    Lx,
    Ly,
    Lz,
    Hx,
    Hy,
    Nmn,
    NPlus,
    NGeneral,
}

impl NamedOperator {
    pub const ALL: [NamedOperator; 14] = [
        NamedOperator::Jx,
        NamedOperator::Jy,
        NamedOperator::Jz,
        NamedOperator::Kx,
        NamedOperator::Ky,
        NamedOperator::Kz,
        NamedOperator::Lx,
        NamedOperator::Ly,
        NamedOperator::Lz,
        NamedOperator::Hx,
        NamedOperator::Hy,
        NamedOperator::Nmn,
        NamedOperator::NPlus,
        NamedOperator::NGeneral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NamedOperator::Jx => "J_x",
            NamedOperator::Jy => "J_y",
            NamedOperator::Jz => "J_z",
            NamedOperator::Kx => "K_x",
            NamedOperator::Ky => "K_y",
            NamedOperator::Kz => "K_z",
            NamedOperator::Lx => "L_x",
            NamedOperator::Ly => "L_y",
            NamedOperator::Lz => "L_z",
            NamedOperator::Hx => "H_x",
            NamedOperator::Hy => "H_y",
            NamedOperator::Nmn => "N_mn",
            NamedOperator::NPlus => "N_plus",
            NamedOperator::NGeneral => "N_general",
        }
    }
}

impl fmt::Display for NamedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NamedOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedOperator::ALL
            .into_iter()
            .find(|n| n.as_str() == s || n.as_str().replace('_', "") == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Parameters for `build_named`. `m`, `n` apply to the `L`/`H`/`N_mn`/`N_plus`
/// family; `word` and `transposed` only to `N_general`.
#[derive(Clone, Debug)]
pub struct NamedParams {
    pub m: u32,
    pub n: u32,
    pub word: Option<BosonMonomial>,
    pub transposed: Vec<usize>,
}

impl Default for NamedParams {
    fn default() -> Self {
        NamedParams { m: 1, n: 1, word: None, transposed: Vec::new() }
    }
}

impl NamedParams {
    pub fn orders(m: u32, n: u32) -> Self {
        NamedParams { m, n, ..Default::default() }
    }
}

pub fn build_named(name: NamedOperator, params: &NamedParams) -> Result<OperatorPoly> {
    let (m, n) = (params.m, params.n);
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("orders must be >= 1, got m={m}, n={n}")));
    }
    Ok(match name {
        NamedOperator::Jx => j_x(),
        NamedOperator::Jy => j_y(),
        NamedOperator::Jz => j_z(),
        NamedOperator::Kx => k_x(),
        NamedOperator::Ky => k_y(),
        NamedOperator::Kz => k_z(),
        NamedOperator::Lx => l_x(m, n),
        NamedOperator::Ly => l_y(m, n),
        NamedOperator::Lz => l_z(m, n),
        NamedOperator::Hx => h_x(m, n),
        NamedOperator::Hy => h_y(m, n),
        NamedOperator::Nmn => n_mn(m, n),
        NamedOperator::NPlus => n_plus(m, n),
        NamedOperator::NGeneral => {
            let word = params.word.as_ref().ok_or_else(|| {
                Error::InvalidParameter("N_general requires a word".into())
            })?;
            n_general(word, &params.transposed)?
        }
    })
}

/// `½(M + M†)`
pub fn hermitian_x(word: &BosonMonomial) -> OperatorPoly {
    let m = OperatorPoly::monomial(word.clone(), HALF);
    m.checked_add(&m.dagger()).expect("same mode count")
}

/// `(M − M†)/2i`
pub fn hermitian_y(word: &BosonMonomial) -> OperatorPoly {
    let m = OperatorPoly::monomial(word.clone(), HALF_OVER_I);
    let md = OperatorPoly::monomial(word.dagger(), -HALF_OVER_I);
    m.checked_add(&md).expect("same mode count")
}

/// `½[M, M†]`
pub fn hermitian_z(word: &BosonMonomial) -> OperatorPoly {
    let m = OperatorPoly::monomial(word.clone(), Complex64::new(1.0, 0.0));
    commutator(&m, &m.dagger()).expect("same mode count").scale(HALF)
}

/// `a†^m b^n`
pub fn l_word(m: u32, n: u32) -> BosonMonomial {
    BosonMonomial::from_pairs(&[(m, 0), (0, n)])
}

/// `a†^m b†^n`: the `L` word with `b ↔ b†`.
pub fn h_word(m: u32, n: u32) -> BosonMonomial {
    BosonMonomial::from_pairs(&[(m, 0), (n, 0)])
}

pub fn j_x() -> OperatorPoly {
    l_x(1, 1)
}

pub fn j_y() -> OperatorPoly {
    l_y(1, 1)
}

/// `½(N_a − N_b)`
pub fn j_z() -> OperatorPoly {
    OperatorPoly::number(2, 0)
        .checked_sub(&OperatorPoly::number(2, 1))
        .expect("two modes")
        .scale(HALF)
}

pub fn k_x() -> OperatorPoly {
    h_x(1, 1)
}

pub fn k_y() -> OperatorPoly {
    h_y(1, 1)
}

/// `½(N_a + N_b + 1)`
pub fn k_z() -> OperatorPoly {
    OperatorPoly::number(2, 0)
        .checked_add(&OperatorPoly::number(2, 1))
        .and_then(|p| p.checked_add(&OperatorPoly::identity(2)))
        .expect("two modes")
        .scale(HALF)
}

pub fn l_x(m: u32, n: u32) -> OperatorPoly {
    hermitian_x(&l_word(m, n))
}

pub fn l_y(m: u32, n: u32) -> OperatorPoly {
    hermitian_y(&l_word(m, n))
}

pub fn l_z(m: u32, n: u32) -> OperatorPoly {
    hermitian_z(&l_word(m, n))
}

pub fn h_x(m: u32, n: u32) -> OperatorPoly {
    hermitian_x(&h_word(m, n))
}

pub fn h_y(m: u32, n: u32) -> OperatorPoly {
    hermitian_y(&h_word(m, n))
}

/// Single-mode commutator `[a^p, a†^p]` embedded at `mode`.
fn ladder_commutator(mode_count: usize, mode: usize, p: u32) -> OperatorPoly {
    let ann = OperatorPoly::monomial(BosonMonomial::annihilator(mode_count, mode, p), 1.0.into());
    let cre = OperatorPoly::monomial(BosonMonomial::creator(mode_count, mode, p), 1.0.into());
    commutator(&ann, &cre).expect("same mode count")
}

/// `¼ [a^m, a†^m] ⊗ [b^n, b†^n]`
pub fn n_mn(m: u32, n: u32) -> OperatorPoly {
    ladder_commutator(2, 0, m)
        .checked_mul(&ladder_commutator(2, 1, n))
        .expect("two modes")
        .scale_real(0.25)
}

/// `(n·a†a + m·b†b) / 2mn`
pub fn n_plus(m: u32, n: u32) -> OperatorPoly {
    let (mf, nf) = (f64::from(m), f64::from(n));
    OperatorPoly::number(2, 0)
        .scale_real(nf)
        .checked_add(&OperatorPoly::number(2, 1).scale_real(mf))
        .expect("two modes")
        .scale_real(1.0 / (2.0 * mf * nf))
}

/// `N = ¼ [M_1, M_1†] ⊗ [M_2, M_2†]`, where `M_1` is the word restricted to
/// untouched modes and `M_2` the word on transposed modes with its creation
/// and annihilation powers exchanged.
pub fn n_general(word: &BosonMonomial, transposed: &[usize]) -> Result<OperatorPoly> {
    let count = word.mode_count();
    if let Some(&bad) = transposed.iter().find(|&&k| k >= count) {
        return Err(Error::ModeIndex { index: bad, mode_count: count });
    }
    let mut m1 = BosonMonomial::identity(count);
    let mut m2 = BosonMonomial::identity(count);
    for k in 0..count {
        if transposed.contains(&k) {
            m2.set_mode(k, word.mode(k).swapped());
        } else {
            m1.set_mode(k, word.mode(k));
        }
    }
    let bracket = |w: BosonMonomial| {
        let p = OperatorPoly::monomial(w, 1.0.into());
        commutator(&p, &p.dagger())
    };
    Ok(bracket(m1)?.checked_mul(&bracket(m2)?)?.scale_real(0.25))
}

/// Sets every mode of `word` to `p`; handy for building uniform `M_n` words.
pub fn uniform_word(mode_count: usize, p: ModePowers) -> BosonMonomial {
    BosonMonomial::from_powers(vec![p; mode_count])
}
