//! CFRD Bell inequality, its partition decomposition, and the separability
//! conditions obtained from `P = ∏_{𝒩} Z_k ∏_{𝒜} Z_k^{†*}` under
//! transposition of the antinormal group.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use super::report::{is_negative, kv, WitnessReport};
use crate::algebra::{ModePowers, OperatorPoly, ProductOperator, SingleModePoly};
use crate::error::{check_modes, Error, Result};
use crate::exec::{reduce_range, Execution};
use crate::fock::Moments;
use crate::pt::{pt_map_product, ModeSet};

/// Largest mode count for exhaustive partition enumeration.
pub const MAX_PARTITION_MODES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalKind {
    /// `Z = a^m e^{−iθ}`
    Annihilating,
    /// `Z = a†^m e^{iθ}`
    Creating,
}

/// Local measurement choice `Z_k` on one mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalObservable {
    pub kind: LocalKind,
    pub power: u32,
    pub phase: f64,
}

impl LocalObservable {
    pub fn annihilating(power: u32, phase: f64) -> Self {
        LocalObservable { kind: LocalKind::Annihilating, power, phase }
    }

    pub fn creating(power: u32, phase: f64) -> Self {
        LocalObservable { kind: LocalKind::Creating, power, phase }
    }

    pub fn operator(&self) -> SingleModePoly {
        match self.kind {
            LocalKind::Annihilating => SingleModePoly::term(
                ModePowers::new(0, self.power),
                Complex64::from_polar(1.0, -self.phase),
            ),
            LocalKind::Creating => SingleModePoly::term(
                ModePowers::new(self.power, 0),
                Complex64::from_polar(1.0, self.phase),
            ),
        }
    }

    /// `Z†Z`
    pub fn normal(&self) -> SingleModePoly {
        let z = self.operator();
        z.dagger().mul(&z)
    }

    /// `ZZ†`
    pub fn antinormal(&self) -> SingleModePoly {
        let z = self.operator();
        z.mul(&z.dagger())
    }
}

impl fmt::Display for LocalObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            LocalKind::Annihilating => 'a',
            LocalKind::Creating => 'c',
        };
        write!(f, "{k}{}@{}", self.power, self.phase)
    }
}

/// One local observable per mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSpec(Vec<LocalObservable>);

impl ZSpec {
    pub fn new(locals: Vec<LocalObservable>) -> Result<Self> {
        if locals.is_empty() {
            return Err(Error::InvalidParameter("ZSpec needs at least one mode".into()));
        }
        if let Some(bad) = locals.iter().find(|l| l.power == 0) {
            return Err(Error::InvalidParameter(format!("Z power must be >= 1, got {bad}")));
        }
        if let Some(bad) = locals.iter().find(|l| !l.phase.is_finite()) {
            return Err(Error::InvalidParameter(format!("Z phase must be finite, got {bad}")));
        }
        Ok(ZSpec(locals))
    }

    /// First `annihilating` modes use `a^m e^{−iθ}`, the rest `a†^m e^{iθ}`.
    pub fn split(annihilating: usize, powers: &[u32], phases: &[f64]) -> Result<Self> {
        check_modes(powers.len(), phases.len())?;
        if annihilating > powers.len() {
            return Err(Error::InvalidParameter(format!(
                "{annihilating} annihilating modes out of {}",
                powers.len()
            )));
        }
        ZSpec::new(
            powers
                .iter()
                .zip(phases)
                .enumerate()
                .map(|(k, (&p, &th))| {
                    if k < annihilating {
                        LocalObservable::annihilating(p, th)
                    } else {
                        LocalObservable::creating(p, th)
                    }
                })
                .collect(),
        )
    }

    /// First half annihilating, second half creating, all phases zero.
    pub fn half_split(powers: &[u32]) -> Result<Self> {
        Self::split(powers.len() / 2, powers, &vec![0.0; powers.len()])
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn locals(&self) -> &[LocalObservable] {
        &self.0
    }

    /// `∏_k Z_k`
    pub fn product(&self) -> ProductOperator {
        ProductOperator::from_factors(
            Complex64::new(1.0, 0.0),
            self.0.iter().map(LocalObservable::operator).collect(),
        )
    }

    /// `∏_{𝒩} Z_k†Z_k ∏_{𝒜} Z_k Z_k†`
    pub fn partition_operator(&self, part: &Partition) -> ProductOperator {
        ProductOperator::from_factors(
            Complex64::new(1.0, 0.0),
            self.0
                .iter()
                .enumerate()
                .map(|(k, l)| if part.is_antinormal(k) { l.antinormal() } else { l.normal() })
                .collect(),
        )
    }

    /// `2^{−n} ∏_k (Z_k†Z_k + Z_kZ_k†)`, kept factored.
    pub fn cfrd_bound_operator(&self) -> ProductOperator {
        ProductOperator::from_factors(
            Complex64::new(0.5f64.powi(self.0.len() as i32), 0.0),
            self.0.iter().map(|l| l.normal().add(&l.antinormal())).collect(),
        )
    }

    /// `P = ∏_{𝒩} Z_k ∏_{𝒜} Z_k^{†*}`; `Z^{†*}` is the number-basis transpose.
    pub fn separability_operator(&self, part: &Partition) -> ProductOperator {
        ProductOperator::from_factors(
            Complex64::new(1.0, 0.0),
            self.0
                .iter()
                .enumerate()
                .map(|(k, l)| {
                    let z = l.operator();
                    if part.is_antinormal(k) {
                        z.transpose()
                    } else {
                        z
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for ZSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Split of the modes into a normal group `𝒩` and an antinormal group `𝒜`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    mode_count: usize,
    antinormal: BTreeSet<usize>,
}

impl Partition {
    pub fn new(mode_count: usize, antinormal: impl IntoIterator<Item = usize>) -> Result<Self> {
        let antinormal: BTreeSet<usize> = antinormal.into_iter().collect();
        if let Some(&index) = antinormal.iter().find(|&&k| k >= mode_count) {
            return Err(Error::ModeIndex { index, mode_count });
        }
        Ok(Partition { mode_count, antinormal })
    }

    /// Bit `k` of `mask` set puts mode `k` in `𝒜`.
    pub fn from_mask(mode_count: usize, mask: u64) -> Self {
        Partition {
            mode_count,
            antinormal: (0..mode_count).filter(|k| mask >> k & 1 == 1).collect(),
        }
    }

    /// First half normal, second half antinormal.
    pub fn halves(mode_count: usize) -> Self {
        Partition { mode_count, antinormal: (mode_count / 2..mode_count).collect() }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn is_antinormal(&self, k: usize) -> bool {
        self.antinormal.contains(&k)
    }

    pub fn antinormal(&self) -> Vec<usize> {
        self.antinormal.iter().copied().collect()
    }

    pub fn normal(&self) -> Vec<usize> {
        (0..self.mode_count).filter(|k| !self.antinormal.contains(k)).collect()
    }

    /// Both groups non-empty.
    pub fn is_mixed(&self) -> bool {
        !self.antinormal.is_empty() && self.antinormal.len() < self.mode_count
    }

    /// The antinormal group as a transposition set, if non-empty.
    pub fn transposed(&self) -> Option<ModeSet> {
        ModeSet::new(self.antinormal.iter().copied()).ok()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<usize>| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
            }
        };
        write!(f, "N={{{}}} A={{{}}}", join(self.normal()), join(self.antinormal()))
    }
}

fn check_spec<M: Moments + ?Sized>(state: &M, z: &ZSpec) -> Result<()> {
    check_modes(state.mode_count(), z.mode_count())
}

fn check_partition(z: &ZSpec, part: &Partition) -> Result<()> {
    check_modes(z.mode_count(), part.mode_count())
}

/// `|⟨∏_k Z_k⟩|²`
fn correlation_sq<M: Moments + ?Sized>(state: &M, z: &ZSpec) -> Result<f64> {
    Ok(state.expect_product(&z.product())?.norm_sqr())
}

/// `⟨∏_{𝒩} Z_k†Z_k ∏_{𝒜} Z_kZ_k†⟩`
pub fn partition_moment<M: Moments + ?Sized>(state: &M, z: &ZSpec, part: &Partition) -> Result<f64> {
    check_spec(state, z)?;
    check_partition(z, part)?;
    Ok(state.expect_product(&z.partition_operator(part))?.re)
}

/// CFRD Bell inequality `|⟨∏Z_k⟩|² ≤ 2^{−n}⟨∏(Z_k†Z_k + Z_kZ_k†)⟩`; a
/// violation signals nonlocality.
pub fn cfrd<M: Moments + ?Sized>(state: &M, z: &ZSpec) -> Result<WitnessReport> {
    check_spec(state, z)?;
    let bound = state.expect_product(&z.cfrd_bound_operator())?.re;
    WitnessReport::at_most("cfrd", correlation_sq(state, z)?, bound, vec![kv("zspec", z)])
}

/// Fully expanded CFRD bound operator; `2^n` products, for cross-checks on small `n`.
pub fn cfrd_bound_expanded(z: &ZSpec) -> Result<OperatorPoly> {
    z.cfrd_bound_operator().expand()
}

/// Ordering key for ties: fewer antinormal modes first, then lexicographic
/// order of the antinormal index list.
fn tie_key(mask: u64, n: usize) -> (u32, Vec<usize>) {
    (mask.count_ones(), (0..n).filter(|k| mask >> k & 1 == 1).collect())
}

pub fn min_partition<M: Moments + Sync + ?Sized>(state: &M, z: &ZSpec) -> Result<(Partition, f64)> {
    min_partition_with(state, z, Execution::default())
}

/// Exhaustive search over all `2^n` partitions for the smallest
/// `partition_moment`. Values within `1e−12` relative of the minimum count
/// as ties.
pub fn min_partition_with<M: Moments + Sync + ?Sized>(
    state: &M,
    z: &ZSpec,
    exec: Execution,
) -> Result<(Partition, f64)> {
    check_spec(state, z)?;
    let n = z.mode_count();
    if n > MAX_PARTITION_MODES {
        return Err(Error::Capacity(format!(
            "{n} modes exceeds the partition enumeration cap of {MAX_PARTITION_MODES}"
        )));
    }
    let value = |mask: u64| partition_moment(state, z, &Partition::from_mask(n, mask));
    let total = 1u64 << n;

    let min = reduce_range(
        exec,
        0..total,
        Ok(f64::INFINITY),
        value,
        |a: Result<f64>, b: Result<f64>| Ok(a?.min(b?)),
    )?;
    let tol = 1e-12 * min.abs().max(1.0);

    let pick = |a: Option<u64>, b: Option<u64>| match (a, b) {
        (Some(x), Some(y)) => {
            if tie_key(x, n).cmp(&tie_key(y, n)) == Ordering::Greater {
                Some(y)
            } else {
                Some(x)
            }
        }
        (x, None) => x,
        (None, y) => y,
    };
    let best = reduce_range(
        exec,
        0..total,
        Ok(None),
        |mask| Ok(if value(mask)? <= min + tol { Some(mask) } else { None }),
        |a: Result<Option<u64>>, b: Result<Option<u64>>| Ok(pick(a?, b?)),
    )?
    .expect("at least one partition attains the minimum");
    Ok((Partition::from_mask(n, best), min))
}

/// Separability condition from the sum-form uncertainty relation of
/// `L₁ = P + P†`, `L₂ = i(P − P†)` under PT on `𝒜`:
/// `|⟨∏Z_k⟩|² ≤ ⟨∏_{𝒩}Z_k†Z_k ∏_{𝒜}Z_kZ_k†⟩`. Holds for every separable state
/// and every partition.
pub fn sep_sum<M: Moments + ?Sized>(state: &M, z: &ZSpec, part: &Partition) -> Result<WitnessReport> {
    let bound = partition_moment(state, z, part)?;
    WitnessReport::at_most(
        "sep_sum",
        correlation_sq(state, z)?,
        bound,
        vec![kv("zspec", z), kv("partition", part)],
    )
}

/// Moments of `P` under PT on the antinormal group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparabilityMoments {
    /// `⟨P⟩`
    pub p: Complex64,
    /// `⟨P²⟩`
    pub p2: Complex64,
    /// `⟨PP†⟩`
    pub p_pdag: f64,
    /// `⟨P†P⟩`
    pub pdag_p: f64,
}

impl SeparabilityMoments {
    /// `(ΔL₁)²` with `L₁ = P + P†`.
    pub fn var_l1(&self) -> f64 {
        2.0 * self.p2.re + self.p_pdag + self.pdag_p - 4.0 * self.p.re * self.p.re
    }

    /// `(ΔL₂)²` with `L₂ = i(P − P†)`.
    pub fn var_l2(&self) -> f64 {
        -2.0 * self.p2.re + self.p_pdag + self.pdag_p - 4.0 * self.p.im * self.p.im
    }

    /// `¼|⟨[L₁, L₂]⟩|² = |⟨PP†⟩ − ⟨P†P⟩|²`
    pub fn commutator_term(&self) -> f64 {
        (self.p_pdag - self.pdag_p).powi(2)
    }

    /// `¼⟨ΔL₁ΔL₂ + ΔL₂ΔL₁⟩²`, with `⟨L₁L₂ + L₂L₁⟩ = −4 Im⟨P²⟩`.
    pub fn covariance_term(&self) -> f64 {
        let cov = -4.0 * self.p2.im + 8.0 * self.p.re * self.p.im;
        0.25 * cov * cov
    }

    /// Sum-form condition `(ΔL₁)² + (ΔL₂)² ≥ |⟨[L₁, L₂]⟩|`, i.e.
    /// `|⟨P⟩|² ≤ min(⟨PP†⟩, ⟨P†P⟩)`, as `(lhs, rhs)`.
    pub fn sum_form(&self) -> (f64, f64) {
        (self.var_l1() + self.var_l2(), 2.0 * (self.p_pdag - self.pdag_p).abs())
    }
}

pub fn separability_moments<M: Moments + ?Sized>(
    state: &M,
    z: &ZSpec,
    part: &Partition,
) -> Result<SeparabilityMoments> {
    check_spec(state, z)?;
    check_partition(z, part)?;
    let p = z.separability_operator(part);
    let pd = p.dagger();
    let under_pt = |op: ProductOperator| -> Result<Complex64> {
        match part.transposed() {
            Some(modes) => state.expect_product(&pt_map_product(&op, &modes)?),
            None => state.expect_product(&op),
        }
    };
    Ok(SeparabilityMoments {
        p: under_pt(p.clone())?,
        p2: under_pt(p.checked_mul(&p)?)?,
        p_pdag: under_pt(p.checked_mul(&pd)?)?.re,
        pdag_p: under_pt(pd.checked_mul(&p)?)?.re,
    })
}

fn uncertainty_report(
    name: &str,
    mom: &SeparabilityMoments,
    rhs: f64,
    z: &ZSpec,
    part: &Partition,
) -> Result<WitnessReport> {
    let (v1, v2) = (mom.var_l1(), mom.var_l2());
    let rep = WitnessReport::new(
        name,
        v1 * v2,
        rhs,
        vec![kv("zspec", z), kv("partition", part)],
    )?;
    let scale = mom.p_pdag.abs() + mom.pdag_p.abs() + 2.0 * mom.p2.norm();
    if is_negative(v1, scale) || is_negative(v2, scale) {
        Ok(rep.force_negative_variance())
    } else {
        Ok(rep)
    }
}

/// Product-form relation `ΔL₁ΔL₂ ≥ ½|⟨[L₁,L₂]⟩|` under PT, compared squared:
/// `lhs = (ΔL₁)²(ΔL₂)²`, `rhs = ¼|⟨[L₁,L₂]⟩|²`.
pub fn sep_product<M: Moments + ?Sized>(state: &M, z: &ZSpec, part: &Partition) -> Result<WitnessReport> {
    let mom = separability_moments(state, z, part)?;
    uncertainty_report("sep_product", &mom, mom.commutator_term(), z, part)
}

/// Schrodinger-Robertson relation under PT: the product form plus the
/// squared symmetrized covariance on the right.
pub fn sep_srur<M: Moments + ?Sized>(state: &M, z: &ZSpec, part: &Partition) -> Result<WitnessReport> {
    let mom = separability_moments(state, z, part)?;
    uncertainty_report(
        "sep_srur",
        &mom,
        mom.commutator_term() + mom.covariance_term(),
        z,
        part,
    )
}

/// `Re{c₀c₁* ∏_{k≤n/2} e^{−2i(θ_k−θ_{k+n/2})}}` for a N00N state with
/// amplitudes `c₀, c₁`; the product-form condition at `m_k = N/2` is violated
/// only when this is nonzero.
pub fn noon_phase_diagnostic(c0: Complex64, c1: Complex64, phases: &[f64]) -> f64 {
    let half = phases.len() / 2;
    let angle: f64 = (0..half).map(|k| -2.0 * (phases[k] - phases[k + half])).sum();
    (c0 * c1.conj() * Complex64::from_polar(1.0, angle)).re
}
