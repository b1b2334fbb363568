//! Test-only reference implementation: every quantity is computed from dense
//! truncated matrices built here from scratch, never through the library's
//! moment rules or its own oracle module.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ptwitness_core::{OperatorPoly, SparseState};

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Truncated Fock space with mode 0 as the slowest index.
#[derive(Clone, Debug)]
pub struct Space {
    pub cutoffs: Vec<usize>,
}

impl Space {
    pub fn new(cutoffs: Vec<usize>) -> Self {
        Space { cutoffs }
    }

    pub fn uniform(modes: usize, cutoff: usize) -> Self {
        Space { cutoffs: vec![cutoff; modes] }
    }

    pub fn dim(&self) -> usize {
        self.cutoffs.iter().product()
    }

    pub fn index(&self, occ: &[u32]) -> usize {
        occ.iter().zip(&self.cutoffs).fold(0, |acc, (&o, &d)| {
            assert!((o as usize) < d, "occupation {o} outside cutoff {d}");
            acc * d + o as usize
        })
    }

    pub fn occupations(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.cutoffs.len()];
        for k in (0..self.cutoffs.len()).rev() {
            out[k] = (idx % self.cutoffs[k]) as u32;
            idx /= self.cutoffs[k];
        }
        out
    }

    pub fn vector(&self, state: &SparseState) -> Vec<Complex64> {
        let mut v = vec![Complex64::default(); self.dim()];
        for (ket, amp) in state.terms() {
            v[self.index(ket.occupations())] += *amp;
        }
        v
    }

    pub fn density(&self, state: &SparseState) -> Mat {
        let v = self.vector(state);
        Mat::from_fn(self.dim(), self.dim(), |i, j| v[i] * v[j].conj())
    }

    fn local_lowering(d: usize) -> Mat {
        Mat::from_fn(d, d, |i, j| if j == i + 1 { c((j as f64).sqrt(), 0.0) } else { c(0.0, 0.0) })
    }

    fn kron_all(&self, locals: Vec<Mat>) -> Mat {
        locals
            .into_iter()
            .fold(Mat::from_element(1, 1, c(1.0, 0.0)), |acc, m| acc.kronecker(&m))
    }

    pub fn lowering(&self, mode: usize) -> Mat {
        let locals = self
            .cutoffs
            .iter()
            .enumerate()
            .map(|(k, &d)| if k == mode { Self::local_lowering(d) } else { Mat::identity(d, d) })
            .collect();
        self.kron_all(locals)
    }

    pub fn raising(&self, mode: usize) -> Mat {
        self.lowering(mode).adjoint()
    }

    /// Dense matrix of a polynomial: each term is the Kronecker product of
    /// literal single-mode products `a†^{dag} a^{ann}`.
    pub fn operator(&self, poly: &OperatorPoly) -> Mat {
        let dim = self.dim();
        let mut out = Mat::zeros(dim, dim);
        for (word, coeff) in poly.terms() {
            let locals = self
                .cutoffs
                .iter()
                .enumerate()
                .map(|(k, &d)| {
                    let a = Self::local_lowering(d);
                    let ad = a.adjoint();
                    let p = word.mode(k);
                    let mut m = Mat::identity(d, d);
                    for _ in 0..p.dag {
                        m = &m * &ad;
                    }
                    for _ in 0..p.ann {
                        m = &m * &a;
                    }
                    m
                })
                .collect();
            out += self.kron_all(locals) * *coeff;
        }
        out
    }

    /// Literal partial transpose: swaps the occupation labels of the listed
    /// modes between row and column index.
    pub fn partial_transpose(&self, rho: &Mat, modes: &[usize]) -> Mat {
        let dim = self.dim();
        let mut out = Mat::zeros(dim, dim);
        for i in 0..dim {
            let oi = self.occupations(i);
            for j in 0..dim {
                let oj = self.occupations(j);
                let (mut ni, mut nj) = (oi.clone(), oj.clone());
                for &k in modes {
                    ni[k] = oj[k];
                    nj[k] = oi[k];
                }
                out[(self.index(&ni), self.index(&nj))] = rho[(i, j)];
            }
        }
        out
    }
}

/// `Tr(ρ X)` without forming the product.
pub fn trace_product(rho: &Mat, op: &Mat) -> Complex64 {
    rho.iter().zip(op.transpose().iter()).map(|(r, o)| r * o).sum()
}

/// `Tr(ρ X²) − Tr(ρ X)²` with the square taken as a dense matrix product.
pub fn dense_variance(rho: &Mat, op: &Mat) -> f64 {
    let mean = trace_product(rho, op).re;
    trace_product(rho, &(op * op)).re - mean * mean
}

pub fn min_eig(m: &Mat) -> f64 {
    m.clone().symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Cutoffs large enough for operators whose creation power per mode is at
/// most `extra`.
pub fn cutoffs_for(state: &SparseState, extra: u32) -> Vec<usize> {
    state.max_occupations().iter().map(|&o| (o + extra + 1) as usize).collect()
}

pub fn random_amp(r: &mut impl Rng) -> Complex64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// Normalized superposition of up to `kets` random kets with occupations
/// `≤ max_occ`.
pub fn random_state(r: &mut impl Rng, modes: usize, max_occ: u32, kets: usize) -> SparseState {
    loop {
        let count = r.gen_range(1..=kets);
        let terms: Vec<(Vec<u32>, Complex64)> = (0..count)
            .map(|_| ((0..modes).map(|_| r.gen_range(0..=max_occ)).collect(), random_amp(r)))
            .collect();
        if let Ok(s) = SparseState::superposition(modes, terms) {
            return s;
        }
    }
}

/// Tensor product of random single-mode states.
pub fn random_product(r: &mut impl Rng, modes: usize, max_occ: u32, kets: usize) -> SparseState {
    let mut s = random_state(r, 1, max_occ, kets);
    for _ in 1..modes {
        s = s.tensor(&random_state(r, 1, max_occ, kets));
    }
    s
}

pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a.re - b.re).abs() < tol && (a.im - b.im).abs() < tol
}
