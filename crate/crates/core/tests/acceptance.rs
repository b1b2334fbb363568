//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{c, cutoffs_for, dense_variance, random_product, random_state, rng, Space};
use rand::Rng;

use ptwitness_core::algebra::named::{
    hermitian_x, hermitian_y, h_x, h_y, j_x, j_y, k_x, k_y, k_z, l_x, l_y, n_general, n_mn,
};
use ptwitness_core::oracle::{self, MixedState};
use ptwitness_core::states::{bell_like, branch_amplitudes, fixed_excitation, noon, paper_psi};
use ptwitness_core::witness::{
    cfrd, duan_epr, duan_epr_scan, general_multimode, hz_kvariance, jykz, lh_hur, min_partition,
    nplus, peres_check, sep_product, sep_srur, sep_sum, separability_moments, su2_hur, Axis,
    LocalKind, LocalObservable, Partition, WitnessReport, ZSpec,
};
use ptwitness_core::{
    pt_expectation, pt_variance, BosonMonomial, Complex64, ModePowers, ModeSet, Moments,
    OperatorPoly, SparseState,
};

const RULE_TOL: f64 = 1e-10;
const RHS_TOL: f64 = 1e-12;
const NPT_MARGIN: f64 = -0.01;
const PSD_TOL: f64 = -1e-9;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn ok<T>(r: ptwitness_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_mask_set(r: &mut impl Rng, modes: usize, allow_full: bool) -> Vec<usize> {
    loop {
        let set: Vec<usize> = (0..modes).filter(|_| r.gen_bool(0.5)).collect();
        if !set.is_empty() && (allow_full || set.len() < modes) {
            return set;
        }
    }
}

fn random_word(r: &mut impl Rng, modes: usize, max_power: u32) -> BosonMonomial {
    BosonMonomial::from_powers(
        (0..modes)
            .map(|_| ModePowers::new(r.gen_range(0..=max_power), r.gen_range(0..=max_power)))
            .collect(),
    )
}

fn random_zspec(r: &mut impl Rng, modes: usize) -> ZSpec {
    ZSpec::new(
        (0..modes)
            .map(|_| {
                let (p, th) = (r.gen_range(1..=2), r.gen_range(0.0..std::f64::consts::TAU));
                if r.gen_bool(0.5) {
                    LocalObservable::annihilating(p, th)
                } else {
                    LocalObservable::creating(p, th)
                }
            })
            .collect(),
    )
    .expect("valid powers")
}

fn real(x: f64) -> Complex64 {
    c(x, 0.0)
}

/// Word with powers `≤ 3` whose PT image maps one ket of `state` onto
/// another, so the compared averages are generically nonzero.
fn linking_word(r: &mut impl Rng, state: &SparseState, transposed: &[usize]) -> Option<BosonMonomial> {
    let kets: Vec<Vec<u32>> = state.terms().map(|(k, _)| k.occupations().to_vec()).collect();
    let (from, to) = (&kets[r.gen_range(0..kets.len())], &kets[r.gen_range(0..kets.len())]);
    let mut powers = Vec::new();
    for k in 0..from.len() {
        let mut delta = i64::from(to[k]) - i64::from(from[k]);
        if transposed.contains(&k) {
            delta = -delta;
        }
        if delta.abs() > 3 {
            return None;
        }
        let base = r.gen_range(0..=3 - delta.unsigned_abs() as u32);
        powers.push(ModePowers::new(base + delta.max(0) as u32, base + (-delta).max(0) as u32));
    }
    Some(BosonMonomial::from_powers(powers))
}

/// |⟨PT rule⟩ − Tr(X ρ^PT)| on random states and monomials.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let (mut worst, mut nonzero): (f64, usize) = (0.0, 0);
    for case in 0..200 {
        let modes = r.gen_range(1..=3);
        let state = random_state(&mut r, modes, 4, 4);
        let transposed = random_mask_set(&mut r, modes, true);
        let word = if r.gen_bool(0.5) {
            linking_word(&mut r, &state, &transposed).unwrap_or_else(|| random_word(&mut r, modes, 3))
        } else {
            random_word(&mut r, modes, 3)
        };
        let poly = OperatorPoly::monomial(word.clone(), real(1.0));
        let rule = ok(pt_expectation(&state, &poly, &ok(ModeSet::new(transposed.iter().copied()))?))?;
        let occ = state.max_occupations();
        let space = Space::new(
            (0..modes).map(|k| (occ[k] + word.mode(k).dag.max(word.mode(k).ann) + 1) as usize).collect(),
        );
        let rho_pt = space.partial_transpose(&space.density(&state), &transposed);
        let dense = common::trace_product(&rho_pt, &space.operator(&poly));
        let diff = (rule - dense).norm();
        worst = worst.max(diff);
        nonzero += usize::from(dense.norm() > 1e-12);
        ensure(diff < RULE_TOL, || format!("case {case}: {word} on {transposed:?}: diff {diff:e}"))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("200 cases ({nonzero} nonzero), max |diff| {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    let mut check = |what: String, a: f64, b: f64| -> Result<(), String> {
        let diff = (a - b).abs();
        worst = worst.max(diff);
        ensure(diff < RULE_TOL, || format!("{what}: {a} vs {b}"))
    };
    let b = ModeSet::single(1);
    for case in 0..100 {
        let s = random_state(&mut r, 2, 3, 4);
        let space = Space::new(cutoffs_for(&s, 3));
        let rho_pt = space.partial_transpose(&space.density(&s), &[1]);
        for (name, j, k) in [("x", j_x(), k_x()), ("y", j_y(), k_y())] {
            let rule = ok(pt_variance(&s, &j, &b))?;
            check(format!("case {case} J_{name} rule"), rule, ok(s.variance(&k))? - 0.25)?;
            check(format!("case {case} J_{name} dense"), rule, dense_variance(&rho_pt, &space.operator(&j)))?;
        }
        for m in 1..=3 {
            for n in 1..=3 {
                let shift = ok(s.expectation(&n_mn(m, n)))?.re;
                for (name, l, h) in [("x", l_x(m, n), h_x(m, n)), ("y", l_y(m, n), h_y(m, n))] {
                    let rule = ok(pt_variance(&s, &l, &b))?;
                    check(format!("case {case} L_{name}({m},{n}) rule"), rule, ok(s.variance(&h))? - shift)?;
                    check(
                        format!("case {case} L_{name}({m},{n}) dense"),
                        rule,
                        dense_variance(&rho_pt, &space.operator(&l)),
                    )?;
                }
            }
        }
    }
    for case in 0..30 {
        let s = random_state(&mut r, 3, 2, 4);
        let word = random_word(&mut r, 3, 2);
        let transposed = random_mask_set(&mut r, 3, false);
        let modes = ok(ModeSet::new(transposed.iter().copied()))?;
        let swapped = word.swap_on(transposed.iter().copied());
        let shift = ok(s.expectation(&ok(n_general(&word, &transposed))?))?.re;
        let space = Space::new(cutoffs_for(&s, 2));
        let rho_pt = space.partial_transpose(&space.density(&s), &transposed);
        for (l, h) in [
            (hermitian_x(&word), hermitian_x(&swapped)),
            (hermitian_y(&word), hermitian_y(&swapped)),
        ] {
            let rule = ok(pt_variance(&s, &l, &modes))?;
            check(format!("3-mode case {case} {word} rule"), rule, ok(s.variance(&h))? - shift)?;
            check(format!("3-mode case {case} {word} dense"), rule, dense_variance(&rho_pt, &space.operator(&l)))?;
        }
    }
    Ok(format!("100 two-mode + 30 three-mode states, max |diff| {worst:.2e}"))
}

fn npt_on_b(s: &SparseState) -> Result<f64, String> {
    let space = Space::new(cutoffs_for(s, 0));
    let independent = common::min_eig(&space.partial_transpose(&space.density(s), &[1]));
    let verdict = ok(oracle::is_npt(s, &ModeSet::single(1), &oracle::minimal_cutoffs(s)))?;
    ensure((verdict.min_eig - independent).abs() < RULE_TOL, || {
        format!("oracle {} vs reference {independent}", verdict.min_eig)
    })?;
    Ok(independent)
}

fn criterion_3() -> Outcome {
    let bell = ok(bell_like(real(FRAC_1_SQRT_2), real(FRAC_1_SQRT_2)))?;
    let rep = ok(jykz(&bell))?;
    ensure(rep.lhs.abs() < RHS_TOL && (rep.rhs - 1.0 / 16.0).abs() < RHS_TOL && rep.violated, || {
        format!("jykz: {rep}")
    })?;
    let fixed = ok(fixed_excitation(0, 0, 1, 2))?;
    let np = ok(nplus(&fixed, 1, 2))?;
    ensure(np.violated, || format!("nplus: {np}"))?;
    let (e1, e2) = (npt_on_b(&bell)?, npt_on_b(&fixed)?);
    ensure(e1 < NPT_MARGIN && e2 < NPT_MARGIN, || format!("min eigs {e1}, {e2}"))?;
    Ok(format!(
        "jykz lhs {:.1e} rhs {:.12}; nplus margin {:.4}; PT min eig {e1:.4}, {e2:.4}",
        rep.lhs, rep.rhs, np.margin
    ))
}

fn noon_zspec(n: usize, power: u32, half_phases: &[f64]) -> Result<ZSpec, String> {
    let mut phases = half_phases.to_vec();
    phases.resize(n, 0.0);
    ok(ZSpec::split(n / 2, &vec![power; n], &phases))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let h = real(FRAC_1_SQRT_2);
    let grid: Vec<f64> = (0..=4).map(|k| k as f64 * FRAC_PI_8).collect();
    let mut srur_points = 0;
    for n in [2usize, 4] {
        for photons in [1u32, 2] {
            let s = ok(noon(n, photons, h, h))?;
            let halves = Partition::halves(n);
            let z = noon_zspec(n, photons, &[])?;
            let sum = ok(sep_sum(&s, &z, &halves))?;
            ensure(sum.violated, || format!("n={n} N={photons}: {sum}"))?;
            let bell = ok(cfrd(&s, &z))?;
            ensure(!bell.violated, || format!("n={n} N={photons}: {bell}"))?;
            if photons == 2 {
                let z1 = noon_zspec(n, 1, &[])?;
                let pf = ok(sep_product(&s, &z1, &halves))?;
                ensure(pf.violated, || format!("n={n} PF at theta=0: {pf}"))?;
                let half = n / 2;
                for idx in 0..grid.len().pow(half as u32) {
                    let phases: Vec<f64> =
                        (0..half).map(|k| grid[idx / grid.len().pow(k as u32) % grid.len()]).collect();
                    let zt = noon_zspec(n, 1, &phases)?;
                    let sr = ok(sep_srur(&s, &zt, &halves))?;
                    ensure(sr.violated, || format!("n={n} SRUR at {phases:?}: {sr}"))?;
                    srur_points += 1;
                }
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("sep_sum violated, cfrd satisfied at n in {{2,4}}, N in {{1,2}}; SRUR violated at {srur_points} phase points"))
}

/// Best CFRD margin over |c0|^2 for paper_psi at `n` with first power `m1`.
fn psi_scan(n: usize, m1: u32) -> Result<(WitnessReport, f64), String> {
    let mut powers = vec![1; n];
    powers[0] = m1;
    let z = ok(ZSpec::half_split(&powers))?;
    let mut best: Option<(WitnessReport, f64)> = None;
    for k in 1..=9 {
        let w = k as f64 / 10.0;
        let (c0, c1) = ok(branch_amplitudes(w))?;
        let rep = ok(cfrd(&ok(paper_psi(n, c0, c1))?, &z))?;
        if best.as_ref().is_none_or(|(b, _)| rep.margin < b.margin) {
            best = Some((rep, w));
        }
    }
    Ok(best.expect("nine grid points"))
}

fn psi_threshold(m1: u32) -> Result<(Option<usize>, Vec<(usize, f64)>), String> {
    let mut first = None;
    let mut margins = Vec::new();
    for n in [10usize, 12, 14, 16] {
        let (rep, _) = psi_scan(n, m1)?;
        margins.push((n, rep.margin));
        if rep.violated && first.is_none() {
            first = Some(n);
        }
    }
    Ok((first, margins))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let (first, margins) = psi_threshold(2)?;
    ensure(first == Some(14), || format!("m1=2 threshold {first:?}, margins {margins:?}"))?;
    let (none, flat) = psi_threshold(1)?;
    ensure(none.is_none(), || format!("m_k=1 threshold {none:?}, margins {flat:?}"))?;
    within(start, Duration::from_secs(60))?;
    let shown: Vec<String> = margins.iter().map(|(n, m)| format!("n={n}:{m:.3e}")).collect();
    Ok(format!("first violation n=14 ({}); all m_k=1: none", shown.join(" ")))
}

fn criterion_6() -> Outcome {
    let h = real(FRAC_1_SQRT_2);
    let mut cases: Vec<(String, SparseState, ZSpec)> = Vec::new();
    for n in [2usize, 4] {
        for photons in [1u32, 2] {
            cases.push((format!("noon n={n} N={photons}"), ok(noon(n, photons, h, h))?, noon_zspec(n, photons, &[])?));
        }
    }
    for n in [10usize, 12, 14, 16] {
        for m1 in [1u32, 2] {
            let mut powers = vec![1; n];
            powers[0] = m1;
            let z = ok(ZSpec::half_split(&powers))?;
            for k in 1..=9 {
                let (c0, c1) = ok(branch_amplitudes(k as f64 / 10.0))?;
                cases.push((format!("psi n={n} m1={m1} w=0.{k}"), ok(paper_psi(n, c0, c1))?, z.clone()));
            }
        }
    }
    let (mut violations, mut dense) = (0, 0);
    for (name, s, z) in &cases {
        let rec = ok(peres_check(s, z))?;
        if !rec.cfrd_violated() {
            continue;
        }
        violations += 1;
        ensure(rec.partition_mixed() == Some(true), || format!("{name}: partition {:?}", rec.partition))?;
        ensure(rec.sep_sum_violated() == Some(true), || format!("{name}: sep_sum {:?}", rec.sep_sum))?;
        ensure(rec.npt_confirmed() == Some(true), || format!("{name}: npt {:?}", rec.npt))?;
        if let Some(modes) = rec.partition.as_ref().and_then(|(p, _)| p.transposed()) {
            let cut = oracle::minimal_cutoffs(s);
            if cut.iter().product::<usize>() <= oracle::MAX_DENSE_DIM {
                ensure(ok(oracle::is_npt(s, &modes, &cut))?.npt, || format!("{name}: dense oracle"))?;
                dense += 1;
            }
        }
    }
    ensure(violations > 0, || "no CFRD violation to follow".into())?;
    Ok(format!("{violations} CFRD violations, chain holds for all ({dense} also dense-certified)"))
}

fn catalog<M: Moments + Sync + ?Sized>(s: &M, r: &mut impl Rng) -> Result<Vec<WitnessReport>, String> {
    let modes = s.mode_count();
    let mut out = Vec::new();
    if modes == 2 {
        out.push(ok(duan_epr(s, 1.0))?);
        out.push(ok(duan_epr_scan(s))?);
        out.push(ok(hz_kvariance(s, Axis::X))?);
        out.push(ok(hz_kvariance(s, Axis::Y))?);
        out.push(ok(su2_hur(s))?);
        out.push(ok(jykz(s))?);
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            out.push(ok(lh_hur(s, m, n))?);
            out.push(ok(nplus(s, m, n))?);
        }
    }
    let word = random_word(r, modes, 2);
    let transposed = random_mask_set(r, modes, false);
    out.push(ok(general_multimode(s, &word, &ok(ModeSet::new(transposed))?))?);
    let z = random_zspec(r, modes);
    out.push(ok(cfrd(s, &z))?);
    for mask in 0..1u64 << modes {
        let part = Partition::from_mask(modes, mask);
        out.push(ok(sep_sum(s, &z, &part))?);
        out.push(ok(sep_product(s, &z, &part))?);
        out.push(ok(sep_srur(s, &z, &part))?);
    }
    Ok(out)
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let (mut reports, mut eigs, mut worst) = (0usize, 0usize, f64::INFINITY);
    for case in 0..500 {
        let modes = if case % 2 == 0 { 2 } else { 3 };
        let components = if case % 5 < 2 { 1 } else { r.gen_range(2..=3) };
        let mix = ok(MixedState::new(
            (0..components)
                .map(|_| (r.gen_range(0.1..1.0), random_product(&mut r, modes, 2, 3)))
                .collect(),
        ))?;
        for rep in catalog(&mix, &mut r)? {
            reports += 1;
            ensure(!rep.violated, || format!("case {case}: {rep}"))?;
        }
        let cut: Vec<usize> = mix.max_occupations().iter().map(|&o| o as usize + 1).collect();
        for mask in 1..(1u64 << modes) - 1 {
            let set = ok(ModeSet::new((0..modes).filter(|k| mask >> k & 1 == 1)))?;
            let v = ok(mix.is_npt(&set, &cut))?;
            eigs += 1;
            worst = worst.min(v.min_eig);
            ensure(v.min_eig >= PSD_TOL, || format!("case {case}: PT on {set} min eig {}", v.min_eig))?;
        }
    }
    Ok(format!("500 separable states, {reports} reports, {eigs} PT spectra (min eig {worst:.2e}), no violation"))
}

/// Random state, sometimes correlated along `∏Z` so the chain is exercised.
fn hierarchy_sample(r: &mut impl Rng) -> (SparseState, ZSpec) {
    let modes = r.gen_range(2..=4);
    let z = random_zspec(r, modes);
    if r.gen_bool(0.5) {
        return (random_state(r, modes, 2, 3), z);
    }
    let word = BosonMonomial::from_powers(
        z.locals()
            .iter()
            .map(|l| match l.kind {
                LocalKind::Annihilating => ModePowers::new(0, l.power),
                LocalKind::Creating => ModePowers::new(l.power, 0),
            })
            .collect(),
    );
    loop {
        let base = random_state(r, modes, 2, 1);
        let moved = base.apply_monomial(&word).expect("occupations stay small");
        if moved.is_zero() {
            continue;
        }
        let mut terms: Vec<(Vec<u32>, Complex64)> = base
            .terms()
            .chain(moved.terms())
            .map(|(k, a)| (k.occupations().to_vec(), a * common::random_amp(r)))
            .collect();
        if r.gen_bool(0.3) {
            let extra = random_state(r, modes, 2, 1);
            terms.extend(extra.terms().map(|(k, _)| (k.occupations().to_vec(), common::random_amp(r))));
        }
        if let Ok(s) = SparseState::superposition(modes, terms) {
            return (s, z);
        }
    }
}

fn chain_at_min_partition(s: &SparseState, z: &ZSpec) -> Result<Option<[bool; 4]>, String> {
    let (part, _) = ok(min_partition(s, z))?;
    let mom = ok(separability_moments(s, z, &part))?;
    if mom.var_l1() < 0.0 || mom.var_l2() < 0.0 {
        return Ok(None);
    }
    let chain = [
        ok(cfrd(s, z))?.violated,
        ok(sep_sum(s, z, &part))?.violated,
        ok(sep_product(s, z, &part))?.violated,
        ok(sep_srur(s, z, &part))?.violated,
    ];
    for k in 0..3 {
        ensure(!chain[k] || chain[k + 1], || {
            format!("chain {chain:?} broken at link {k} for {s} with {z} at {part}")
        })?;
    }
    Ok(Some(chain))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let (mut samples, mut skipped) = (0, 0);
    let mut counts = [0usize; 4];
    let mut tally = |chain: [bool; 4]| {
        for (k, &v) in chain.iter().enumerate() {
            counts[k] += usize::from(v);
        }
    };
    while samples < 200 {
        let (s, z) = hierarchy_sample(&mut r);
        match chain_at_min_partition(&s, &z).map_err(|e| format!("sample {samples}: {e}"))? {
            Some(chain) => {
                samples += 1;
                tally(chain);
            }
            None => skipped += 1,
        }
    }
    // random few-mode samples never reach a CFRD violation; these do
    let mut powers = vec![1; 14];
    powers[0] = 2;
    let z = ok(ZSpec::half_split(&powers))?;
    let mut structured = 0;
    for k in [4, 5, 6] {
        let (c0, c1) = ok(branch_amplitudes(k as f64 / 10.0))?;
        if let Some(chain) = chain_at_min_partition(&ok(paper_psi(14, c0, c1))?, &z)? {
            structured += 1;
            tally(chain);
        }
    }
    Ok(format!(
        "200 random samples ({skipped} skipped for negative PT variance) + {structured} threshold states; \
         violations cfrd {} sep_sum {} PF {} SRUR {}",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut tightest = f64::INFINITY;
    for case in 0..500 {
        let s = random_state(&mut r, 2, 4, 4);
        let kz = ok(s.expectation(&k_z()))?.re;
        let sum = ok(s.variance(&k_x()))? + ok(s.variance(&k_y()))?;
        ensure(sum >= kz.abs() - RULE_TOL && kz.abs() >= 0.5 - RULE_TOL, || {
            format!("case {case}: {sum} < |{kz}|")
        })?;
        tightest = tightest.min(sum - kz.abs());
        let both = ok(hz_kvariance(&s, Axis::X))?.violated && ok(hz_kvariance(&s, Axis::Y))?.violated;
        ensure(!both, || format!("case {case}: both K variances below 1/4"))?;

        let modes = r.gen_range(2..=3);
        let t = random_state(&mut r, modes, 3, 4);
        let p = OperatorPoly::monomial(random_word(&mut r, modes, 2), real(1.0));
        let mean = ok(t.expectation(&p))?.norm_sqr();
        let pdp = ok(t.expectation(&ok(p.dagger().checked_mul(&p))?))?.re;
        let ppd = ok(t.expectation(&ok(p.checked_mul(&p.dagger()))?))?.re;
        ensure(mean <= pdp.min(ppd) + RULE_TOL * (1.0 + pdp.abs() + ppd.abs()), || {
            format!("case {case}: |<P>|^2 {mean} > min({pdp}, {ppd})")
        })?;
    }
    Ok(format!("500 states, no failure (tightest K slack {tightest:.2e})"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("PT-rule oracle equivalence", criterion_1),
        ("algebraic variance identities", criterion_2),
        ("fixed-excitation detection", criterion_3),
        ("N00N claims", criterion_4),
        ("CFRD threshold", criterion_5),
        ("Peres chain", criterion_6),
        ("separable soundness", criterion_7),
        ("hierarchy", criterion_8),
        ("all-states HUR sanity", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({secs:.2}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({secs:.2}s) {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
