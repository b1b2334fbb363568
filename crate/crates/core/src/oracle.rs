//! Brute-force ground truth: explicit density matrices in a truncated Fock
//! basis, literal partial transposition and Hermitian eigenvalues.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{OperatorPoly, ProductOperator};
use crate::error::{check_modes, Error, Result};
use crate::fock::{FockKet, Moments, SparseState};
use crate::pt::{pt_expectation, ModeSet};

/// Largest matrix side the oracle will diagonalize.
pub const MAX_DENSE_DIM: usize = 4096;

/// `min_eig` below this certifies a negative partial transpose.
pub const NPT_TOL: f64 = 1e-9;

/// Required agreement between the moment rule and the matrix trace.
pub const CROSSCHECK_TOL: f64 = 1e-10;

/// Row-major mode-ordered index arithmetic (mode 0 slowest).
#[derive(Clone, Debug, PartialEq, Eq)]
struct Layout {
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl Layout {
    fn new(cutoffs: &[usize]) -> Result<Self> {
        if cutoffs.contains(&0) {
            return Err(Error::InvalidParameter("cutoffs must be positive".into()));
        }
        let dim = cutoffs
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&d| d <= MAX_DENSE_DIM)
            .ok_or_else(|| {
                Error::Capacity(format!("dense dimension for cutoffs {cutoffs:?} exceeds {MAX_DENSE_DIM}"))
            })?;
        let mut strides = vec![1; cutoffs.len()];
        for k in (0..cutoffs.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * cutoffs[k + 1];
        }
        Ok(Layout { cutoffs: cutoffs.to_vec(), strides, dim })
    }

    fn index(&self, occ: &[u32]) -> Option<usize> {
        let mut i = 0;
        for ((&n, &d), &s) in occ.iter().zip(&self.cutoffs).zip(&self.strides) {
            if n as usize >= d {
                return None;
            }
            i += n as usize * s;
        }
        Some(i)
    }

    fn digits(&self, mut i: usize) -> Vec<u32> {
        self.strides
            .iter()
            .map(|&s| {
                let d = i / s;
                i %= s;
                d as u32
            })
            .collect()
    }
}

/// Density matrix on a truncated multimode Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseDensity {
    layout: Layout,
    matrix: DMatrix<Complex64>,
}

impl DenseDensity {
    pub fn cutoffs(&self) -> &[usize] {
        &self.layout.cutoffs
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr(O ρ)` with `O` represented on the same truncated basis.
    pub fn trace_with(&self, poly: &OperatorPoly) -> Result<Complex64> {
        check_modes(self.layout.cutoffs.len(), poly.mode_count())?;
        let op = operator_matrix(poly, &self.layout)?;
        Ok((op * &self.matrix).trace())
    }
}

fn state_vector(state: &SparseState, layout: &Layout) -> Result<Vec<Complex64>> {
    let mut v = vec![Complex64::default(); layout.dim];
    for (ket, amp) in state.terms() {
        let idx = layout.index(ket.occupations()).ok_or_else(|| {
            let occ = ket.occupations();
            let mode = occ
                .iter()
                .zip(&layout.cutoffs)
                .position(|(&n, &d)| n as usize >= d)
                .unwrap_or(0);
            Error::Capacity(format!(
                "cutoff {} too small for occupation {} in mode {mode}",
                layout.cutoffs[mode], occ[mode]
            ))
        })?;
        v[idx] = *amp;
    }
    Ok(v)
}

/// `|ψ⟩⟨ψ|` on the product basis truncated at `cutoffs`.
pub fn build_density(state: &SparseState, cutoffs: &[usize]) -> Result<DenseDensity> {
    check_modes(state.mode_count(), cutoffs.len())?;
    let layout = Layout::new(cutoffs)?;
    let v = state_vector(state, &layout)?;
    let matrix = DMatrix::from_fn(layout.dim, layout.dim, |i, j| v[i] * v[j].conj());
    Ok(DenseDensity { layout, matrix })
}

/// Transposes the listed tensor factors: the entry at `(i, j)` is taken from
/// the pair with the transposed digits of `i` and `j` exchanged.
pub fn partial_transpose(dm: &DenseDensity, modes: &ModeSet) -> Result<DenseDensity> {
    modes.check_range(dm.layout.cutoffs.len())?;
    let layout = &dm.layout;
    let digits: Vec<Vec<u32>> = (0..layout.dim).map(|i| layout.digits(i)).collect();
    let mut out = DMatrix::zeros(layout.dim, layout.dim);
    for i in 0..layout.dim {
        for j in 0..layout.dim {
            let (mut row, mut col) = (digits[i].clone(), digits[j].clone());
            for k in modes.iter() {
                std::mem::swap(&mut row[k], &mut col[k]);
            }
            let (ri, ci) = (layout.index(&row), layout.index(&col));
            out[(i, j)] = dm.matrix[(ri.expect("in range"), ci.expect("in range"))];
        }
    }
    Ok(DenseDensity { layout: layout.clone(), matrix: out })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(matrix: &DMatrix<Complex64>) -> Result<f64> {
    if !matrix.is_square() {
        return Err(Error::Contract("matrix is not square".into()));
    }
    let n = matrix.nrows();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if n > MAX_DENSE_DIM {
        return Err(Error::Capacity(format!("dimension {n} exceeds {MAX_DENSE_DIM}")));
    }
    let scale = matrix.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let asym = (matrix - matrix.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if asym > 1e-10 * scale {
        return Err(Error::Contract(format!("matrix is not Hermitian (deviation {asym:e})")));
    }
    let eig = matrix.clone().symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NptVerdict {
    pub npt: bool,
    pub min_eig: f64,
    /// Side of the matrix actually diagonalized.
    pub dimension: usize,
}

impl NptVerdict {
    fn from_min(min_eig: f64, dimension: usize) -> Self {
        NptVerdict { npt: min_eig < -NPT_TOL, min_eig, dimension }
    }
}

/// NPT test on an explicit truncated density.
pub fn is_npt(state: &SparseState, modes: &ModeSet, cutoffs: &[usize]) -> Result<NptVerdict> {
    let pt = partial_transpose(&build_density(state, cutoffs)?, modes)?;
    Ok(NptVerdict::from_min(min_eigenvalue(&pt.matrix)?, pt.dim()))
}

/// Smallest cutoffs that hold the state without truncation.
pub fn minimal_cutoffs(state: &SparseState) -> Vec<usize> {
    state.max_occupations().iter().map(|&n| n as usize + 1).collect()
}

/// NPT test at minimal cutoffs; when the full truncated space is too large,
/// the partially transposed matrix is built on its row support only.
pub fn is_npt_auto(state: &SparseState, modes: &ModeSet) -> Result<NptVerdict> {
    let cutoffs = minimal_cutoffs(state);
    let fits = cutoffs
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .is_some_and(|d| d <= MAX_DENSE_DIM);
    if fits {
        is_npt(state, modes, &cutoffs)
    } else {
        is_npt_support(state, modes)
    }
}

/// NPT test on the support of `ρ^PT`.
///
/// For `ρ = |ψ⟩⟨ψ|`, `(ρ^PT)_{(x,y),(x',y')} = ψ_{(x,y')} ψ*_{(x',y)}` where `x`
/// are untouched and `y` transposed occupations. Nonzero rows have `x` from
/// one support ket and `y` from another, so at most `kets²` rows survive; all
/// other rows and columns vanish and contribute eigenvalue zero.
pub fn is_npt_support(state: &SparseState, modes: &ModeSet) -> Result<NptVerdict> {
    let (basis, matrix) = support_partial_transpose(state, modes)?;
    let mut min = min_eigenvalue(&matrix)?;
    // the ambient Fock space always has more dimensions than the support
    min = min.min(0.0);
    Ok(NptVerdict::from_min(min, basis.len()))
}

/// Basis and matrix of `ρ^PT` restricted to its row support.
pub fn support_partial_transpose(
    state: &SparseState,
    modes: &ModeSet,
) -> Result<(Vec<FockKet>, DMatrix<Complex64>)> {
    let n = state.mode_count();
    modes.check_range(n)?;
    let kets: Vec<(&FockKet, &Complex64)> = state.terms().collect();
    let mut basis_set = std::collections::BTreeSet::new();
    for (ki, _) in &kets {
        for (kj, _) in &kets {
            let occ: Vec<u32> = (0..n)
                .map(|k| if modes.contains(k) { kj.occupations()[k] } else { ki.occupations()[k] })
                .collect();
            basis_set.insert(occ);
        }
    }
    if basis_set.len() > MAX_DENSE_DIM {
        return Err(Error::Capacity(format!(
            "PT support of {} kets exceeds {MAX_DENSE_DIM}",
            basis_set.len()
        )));
    }
    let amps: BTreeMap<&[u32], Complex64> =
        kets.iter().map(|(k, a)| (k.occupations(), **a)).collect();
    let basis: Vec<Vec<u32>> = basis_set.into_iter().collect();
    let amp = |occ: &[u32]| amps.get(occ).copied().unwrap_or_default();
    let matrix = DMatrix::from_fn(basis.len(), basis.len(), |r, c| {
        let (row, col) = (&basis[r], &basis[c]);
        // ρ_{(x,y'),(x',y)}: exchange transposed digits between row and column
        let mut u = row.clone();
        let mut v = col.clone();
        for k in modes.iter() {
            std::mem::swap(&mut u[k], &mut v[k]);
        }
        amp(&u) * amp(&v).conj()
    });
    let basis = basis
        .into_iter()
        .map(FockKet::new)
        .collect::<Result<Vec<_>>>()?;
    Ok((basis, matrix))
}

fn operator_matrix(poly: &OperatorPoly, layout: &Layout) -> Result<DMatrix<Complex64>> {
    let mut out = DMatrix::zeros(layout.dim, layout.dim);
    for j in 0..layout.dim {
        let ket = FockKet::new(layout.digits(j))?;
        for (word, c) in poly.terms() {
            if let Some((img, f)) = ket.apply(word)? {
                if let Some(i) = layout.index(img.occupations()) {
                    out[(i, j)] += c * f;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossCheck {
    pub rule_value: Complex64,
    pub matrix_value: Complex64,
    pub abs_diff: f64,
}

/// Compares `⟨poly⟩_{ρ^PT}` from the moment rule with `Tr(poly · ρ^PT)` from
/// an explicit partially transposed density.
pub fn moment_crosscheck(
    state: &SparseState,
    poly: &OperatorPoly,
    modes: &ModeSet,
    cutoffs: &[usize],
) -> Result<CrossCheck> {
    check_modes(state.mode_count(), cutoffs.len())?;
    let occ = state.max_occupations();
    let dag = poly.dag_powers_per_mode();
    for k in 0..cutoffs.len() {
        let need = (occ[k] + dag[k]) as usize + 1;
        if cutoffs[k] < need {
            return Err(Error::Capacity(format!(
                "cutoff {} in mode {k} is below the required {need}",
                cutoffs[k]
            )));
        }
    }
    let rule_value = pt_expectation(state, poly, modes)?;
    let pt = partial_transpose(&build_density(state, cutoffs)?, modes)?;
    let matrix_value = pt.trace_with(poly)?;
    Ok(CrossCheck { rule_value, matrix_value, abs_diff: (rule_value - matrix_value).norm() })
}

/// Convex mixture of pure sparse states.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    mode_count: usize,
    components: Vec<(f64, SparseState)>,
}

impl MixedState {
    /// Weights must be nonnegative; they are rescaled to sum to one.
    pub fn new(components: Vec<(f64, SparseState)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let mode_count = first.1.mode_count();
        let mut total = 0.0;
        for (w, s) in &components {
            check_modes(mode_count, s.mode_count())?;
            if !(*w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!("mixture weight {w} is not >= 0")));
            }
            if !s.is_normalized() {
                return Err(Error::Contract("mixture components must be normalized".into()));
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::DegenerateState);
        }
        Ok(MixedState {
            mode_count,
            components: components.into_iter().map(|(w, s)| (w / total, s)).collect(),
        })
    }

    pub fn components(&self) -> &[(f64, SparseState)] {
        &self.components
    }

    pub fn max_occupations(&self) -> Vec<u32> {
        let mut out = vec![0; self.mode_count];
        for (_, s) in &self.components {
            for (o, n) in out.iter_mut().zip(s.max_occupations()) {
                *o = (*o).max(n);
            }
        }
        out
    }

    pub fn density(&self, cutoffs: &[usize]) -> Result<DenseDensity> {
        let mut acc: Option<DenseDensity> = None;
        for (w, s) in &self.components {
            let d = build_density(s, cutoffs)?;
            acc = Some(match acc {
                None => DenseDensity { layout: d.layout, matrix: d.matrix * Complex64::new(*w, 0.0) },
                Some(mut a) => {
                    a.matrix += d.matrix * Complex64::new(*w, 0.0);
                    a
                }
            });
        }
        Ok(acc.expect("non-empty mixture"))
    }

    pub fn is_npt(&self, modes: &ModeSet, cutoffs: &[usize]) -> Result<NptVerdict> {
        let pt = partial_transpose(&self.density(cutoffs)?, modes)?;
        Ok(NptVerdict::from_min(min_eigenvalue(&pt.matrix)?, pt.dim()))
    }
}

impl Moments for MixedState {
    fn mode_count(&self) -> usize {
        self.mode_count
    }

    fn expect(&self, poly: &OperatorPoly) -> Result<Complex64> {
        self.components
            .iter()
            .try_fold(Complex64::default(), |acc, (w, s)| Ok(acc + s.expectation(poly)? * *w))
    }

    fn expect_product(&self, op: &ProductOperator) -> Result<Complex64> {
        self.components.iter().try_fold(Complex64::default(), |acc, (w, s)| {
            Ok(acc + s.expectation_product(op)? * *w)
        })
    }
}
