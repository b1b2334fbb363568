use ptwitness_core::oracle::{is_npt, is_npt_auto};
use ptwitness_core::states::{bell_like, branch_amplitudes, fixed_excitation, noon, paper_psi};
use ptwitness_core::witness::{
    cfrd, duan_epr, duan_epr_scan, general_multimode, hz_kvariance, jykz, lh_hur, min_partition,
    nplus, sep_product, sep_srur, sep_sum, su2_hur, Axis, Partition, WitnessReport, ZSpec,
};
use ptwitness_core::{BosonMonomial, Complex64, ModePowers, ModeSet, SparseState};

use crate::error::CliError;
use crate::output::number;
use crate::scenario::{AxisName, Builtin, PartitionSpec, Scenario, StateSpec, WitnessName, WitnessSpec};

/// Run-wide overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub oracle: Option<bool>,
    pub cutoff: Option<usize>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub state: String,
    pub report: WitnessReport,
    pub params: Vec<(String, String)>,
    pub oracle_min_eig: Option<f64>,
}

fn complex(z: [f64; 2]) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn fmt_complex(z: Complex64) -> String {
    format!("[{} {}]", number(z.re), number(z.im))
}

fn need<T: Copy>(v: Option<T>, field: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Schema(format!("state.{field}: required for {what}")))
}

fn branches(spec: &StateSpec) -> Result<(Complex64, Complex64), CliError> {
    match (spec.weight, spec.c0, spec.c1) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            Err(CliError::Schema("state: give `weight` or `c0`/`c1`, not both".into()))
        }
        (Some(w), None, None) => Ok(branch_amplitudes(w)?),
        (None, c0, c1) => {
            let h = [std::f64::consts::FRAC_1_SQRT_2, 0.0];
            Ok((complex(c0.unwrap_or(h)), complex(c1.unwrap_or(h))))
        }
    }
}

/// Builds the state and a description detailed enough to rebuild it.
pub fn build_state(spec: &StateSpec) -> Result<(SparseState, String), CliError> {
    let (state, mut desc) = match (spec.builtin, &spec.kets) {
        (Some(b), _) => {
            let (c0, c1) = branches(spec)?;
            let amps = format!("c0={} c1={}", fmt_complex(c0), fmt_complex(c1));
            match b {
                Builtin::Noon => {
                    let n = need(spec.n, "n", "noon")?;
                    let photons = need(spec.photons, "photons", "noon")?;
                    (noon(n, photons, c0, c1)?, format!("noon n={n} N={photons} {amps}"))
                }
                Builtin::PaperPsi => {
                    let n = need(spec.n, "n", "paper_psi")?;
                    (paper_psi(n, c0, c1)?, format!("paper_psi n={n} {amps}"))
                }
                Builtin::FixedExcitation => {
                    let [m, n] = need(spec.orders, "orders", "fixed_excitation")?;
                    let (i, j) = (spec.i.unwrap_or(0), spec.j.unwrap_or(0));
                    (fixed_excitation(i, j, m, n)?, format!("fixed_excitation i={i} j={j} m={m} n={n}"))
                }
                Builtin::BellLike => (bell_like(c0, c1)?, format!("bell_like {amps}")),
            }
        }
        (None, Some(kets)) => {
            let modes = spec
                .modes
                .or_else(|| kets.first().map(|k| k.occ.len()))
                .ok_or_else(|| CliError::Schema("state.kets: empty ket list".into()))?;
            let terms = kets.iter().map(|k| (k.occ.clone(), complex(k.amp)));
            let state = SparseState::superposition(modes, terms)
                .map_err(|e| CliError::from(e).context("state.kets"))?;
            let listed: Vec<String> = kets
                .iter()
                .map(|k| {
                    let occ: Vec<String> = k.occ.iter().map(u32::to_string).collect();
                    format!("{}|{}>", fmt_complex(complex(k.amp)), occ.join(" "))
                })
                .collect();
            (state, format!("kets {}", listed.join(" + ")))
        }
        (None, None) => unreachable!("validated: builtin or kets present"),
    };
    if let Some(phases) = &spec.phases {
        let state = state.with_local_phases(phases).map_err(|e| CliError::from(e).context("state.phases"))?;
        let shown: Vec<String> = phases.iter().map(|p| number(*p)).collect();
        desc.push_str(&format!(" phases=[{}]", shown.join(" ")));
        return Ok((state, desc));
    }
    Ok((state, desc))
}

fn zspec(w: &WitnessSpec, modes: usize) -> Result<ZSpec, CliError> {
    let mut powers = match &w.powers {
        Some(p) => p.clone(),
        None => vec![w.power.unwrap_or(1); modes],
    };
    if let Some(lead) = w.lead_power {
        if let Some(first) = powers.first_mut() {
            *first = lead;
        }
    }
    if powers.len() != modes {
        return Err(CliError::Schema(format!("powers: {} entries for {modes} modes", powers.len())));
    }
    let mut theta = w.theta.clone().unwrap_or_default();
    if theta.len() > modes {
        return Err(CliError::Schema(format!("theta: {} entries for {modes} modes", theta.len())));
    }
    theta.resize(modes, 0.0);
    Ok(ZSpec::split(w.annihilating.unwrap_or(modes / 2), &powers, &theta)?)
}

fn partition(w: &WitnessSpec, state: &SparseState, z: &ZSpec) -> Result<Partition, CliError> {
    let n = state.mode_count();
    match &w.partition {
        None => Ok(Partition::halves(n)),
        Some(PartitionSpec::Named(s)) if s == "halves" => Ok(Partition::halves(n)),
        Some(PartitionSpec::Named(s)) if s == "min" => Ok(min_partition(state, z)?.0),
        Some(PartitionSpec::Named(s)) => Err(CliError::Schema(format!(
            "partition: expected \"halves\", \"min\" or a list of antinormal modes, got \"{s}\""
        ))),
        Some(PartitionSpec::Antinormal(list)) => Ok(Partition::new(n, list.iter().copied())?),
    }
}

fn orders(w: &WitnessSpec) -> (u32, u32) {
    (w.m.unwrap_or(1), w.n.unwrap_or(1))
}

/// Modes the oracle transposes for a given witness.
enum Split {
    None,
    Fixed(ModeSet),
    /// Antinormal group of the minimizing partition, or the second half
    /// when that partition is not mixed.
    CfrdMinimum(ZSpec),
}

impl Split {
    fn resolve(self, state: &SparseState) -> Result<Option<ModeSet>, CliError> {
        Ok(match self {
            Split::None => None,
            Split::Fixed(m) => Some(m),
            Split::CfrdMinimum(z) => {
                let modes = state.mode_count();
                if modes < 2 {
                    return Ok(None);
                }
                let (p, _) = min_partition(state, &z)?;
                p.transposed().filter(|_| p.is_mixed()).or_else(|| Partition::halves(modes).transposed())
            }
        })
    }
}

/// Evaluates one witness and returns the report with the mode split the
/// oracle should transpose.
fn witness(w: &WitnessSpec, state: &SparseState) -> Result<(WitnessReport, Split), CliError> {
    let b = Split::Fixed(ModeSet::single(1));
    let modes = state.mode_count();
    if matches!(
        w.name,
        WitnessName::DuanEpr
            | WitnessName::HzKvariance
            | WitnessName::Su2Hur
            | WitnessName::Jykz
            | WitnessName::LhHur
            | WitnessName::Nplus
    ) && modes != 2
    {
        return Err(CliError::Schema(format!("{} needs a two-mode state, got {modes} modes", w.name.as_str())));
    }
    Ok(match w.name {
        WitnessName::DuanEpr => match w.r {
            Some(r) => (duan_epr(state, r)?, b),
            None => (duan_epr_scan(state)?, b),
        },
        WitnessName::HzKvariance => {
            let axis = match w.axis.unwrap_or(AxisName::X) {
                AxisName::X => Axis::X,
                AxisName::Y => Axis::Y,
            };
            (hz_kvariance(state, axis)?, b)
        }
        WitnessName::Su2Hur => (su2_hur(state)?, b),
        WitnessName::Jykz => (jykz(state)?, b),
        WitnessName::LhHur => {
            let (m, n) = orders(w);
            (lh_hur(state, m, n)?, b)
        }
        WitnessName::Nplus => {
            let (m, n) = orders(w);
            (nplus(state, m, n)?, b)
        }
        WitnessName::GeneralMultimode => {
            let word = w
                .word
                .as_ref()
                .ok_or_else(|| CliError::Schema("word: required for general_multimode".into()))?;
            let word =
                BosonMonomial::from_powers(word.iter().map(|&[d, a]| ModePowers::new(d, a)).collect());
            let transposed = w
                .transposed
                .as_ref()
                .ok_or_else(|| CliError::Schema("transposed: required for general_multimode".into()))?;
            let set = ModeSet::new(transposed.iter().copied())?;
            (general_multimode(state, &word, &set)?, Split::Fixed(set))
        }
        WitnessName::Cfrd => {
            let z = zspec(w, modes)?;
            (cfrd(state, &z)?, Split::CfrdMinimum(z))
        }
        WitnessName::SepSum | WitnessName::SepProduct | WitnessName::SepSrur => {
            let z = zspec(w, modes)?;
            let part = partition(w, state, &z)?;
            let report = match w.name {
                WitnessName::SepSum => sep_sum(state, &z, &part)?,
                WitnessName::SepProduct => sep_product(state, &z, &part)?,
                _ => sep_srur(state, &z, &part)?,
            };
            match part.transposed().filter(|_| part.is_mixed()) {
                Some(m) => (report, Split::Fixed(m)),
                None => (report, Split::None),
            }
        }
    })
}

fn witness_params(w: &WitnessSpec) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut push = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            out.push((k.to_string(), v));
        }
    };
    let list = |v: &[f64]| format!("[{}]", v.iter().map(|x| number(*x)).collect::<Vec<_>>().join(" "));
    let ilist = |v: &[u32]| format!("[{}]", v.iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
    push("r", w.r.map(number));
    push("axis", w.axis.map(|a| format!("{a:?}").to_lowercase()));
    push("m", w.m.map(|m| m.to_string()));
    push("n", w.n.map(|n| n.to_string()));
    push("word", w.word.as_ref().map(|ws| ws.iter().map(|[d, a]| format!("{d}:{a}")).collect::<Vec<_>>().join(" ")));
    push("power", w.power.map(|p| p.to_string()));
    push("lead_power", w.lead_power.map(|p| p.to_string()));
    push("powers", w.powers.as_deref().map(ilist));
    push("annihilating", w.annihilating.map(|a| a.to_string()));
    push("theta", w.theta.as_deref().map(list));
    out
}

pub fn evaluate(
    scenario: &Scenario,
    index: usize,
    overrides: &Overrides,
) -> Result<Evaluation, CliError> {
    let at = format!("witness[{index}]");
    let spec = &scenario.witnesses[index];
    let (state, desc) = build_state(&scenario.state)?;
    let (mut report, split) = witness(spec, &state).map_err(|e| e.context(&at))?;
    if let Some(eps) = overrides.tolerance.or(scenario.tolerance) {
        report.rejudge(eps);
    }
    let mut params = witness_params(spec);
    for (k, v) in &report.params {
        if !params.iter().any(|(p, _)| p == k) {
            params.push((k.clone(), v.clone()));
        }
    }
    let oracle_on = overrides.oracle.unwrap_or(scenario.oracle.enabled);
    let split = if oracle_on { split.resolve(&state).map_err(|e| e.context(&at))? } else { None };
    let oracle_min_eig = match split {
        Some(modes) => {
            let cutoffs = match (overrides.cutoff, &scenario.oracle.cutoffs) {
                (Some(k), _) => Some(vec![k; state.mode_count()]),
                (None, Some(c)) => Some(c.clone()),
                (None, None) => None,
            };
            let verdict = match &cutoffs {
                Some(c) => is_npt(&state, &modes, c),
                None => is_npt_auto(&state, &modes),
            }
            .map_err(|e| CliError::from(e).context(&format!("{at} oracle")))?;
            params.push(("oracle_split".into(), modes.to_string()));
            if let Some(c) = cutoffs {
                params.push(("cutoffs".into(), format!("{c:?}").replace(',', "")));
            }
            Some(verdict.min_eig)
        }
        None => None,
    };
    Ok(Evaluation { state: desc, report, params, oracle_min_eig })
}
