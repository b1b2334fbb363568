use super::bell::{cfrd, min_partition_with, sep_sum, Partition, ZSpec};
use super::report::WitnessReport;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::SparseState;
use crate::oracle::{is_npt_auto, NptVerdict};

/// Outcome of the chain CFRD violation ⇒ separability violation at the
/// minimizing partition ⇒ negative partial transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct PeresRecord {
    pub cfrd: WitnessReport,
    /// Minimizing partition and its moment; only computed after a CFRD violation.
    pub partition: Option<(Partition, f64)>,
    pub sep_sum: Option<WitnessReport>,
    /// `None` when no violation occurred or the oracle could not run.
    pub npt: Option<NptVerdict>,
}

impl PeresRecord {
    pub fn cfrd_violated(&self) -> bool {
        self.cfrd.violated
    }

    /// Both groups of the minimizing partition are non-empty.
    pub fn partition_mixed(&self) -> Option<bool> {
        self.partition.as_ref().map(|(p, _)| p.is_mixed())
    }

    pub fn sep_sum_violated(&self) -> Option<bool> {
        self.sep_sum.as_ref().map(|r| r.violated)
    }

    pub fn npt_confirmed(&self) -> Option<bool> {
        self.npt.map(|v| v.npt)
    }

    /// True unless some link of the chain is observed to fail.
    pub fn chain_holds(&self) -> bool {
        if !self.cfrd.violated {
            return true;
        }
        self.partition_mixed() == Some(true)
            && self.sep_sum_violated() == Some(true)
            && self.npt_confirmed() != Some(false)
    }
}

pub fn peres_check(state: &SparseState, z: &ZSpec) -> Result<PeresRecord> {
    peres_check_with(state, z, Execution::default())
}

pub fn peres_check_with(state: &SparseState, z: &ZSpec, exec: Execution) -> Result<PeresRecord> {
    let report = cfrd(state, z)?;
    if !report.violated {
        return Ok(PeresRecord { cfrd: report, partition: None, sep_sum: None, npt: None });
    }
    let (part, value) = min_partition_with(state, z, exec)?;
    let sep = sep_sum(state, z, &part)?;
    let npt = match part.transposed() {
        Some(modes) => match is_npt_auto(state, &modes) {
            Ok(v) => Some(v),
            Err(Error::Capacity(_)) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    Ok(PeresRecord { cfrd: report, partition: Some((part, value)), sep_sum: Some(sep), npt })
}
