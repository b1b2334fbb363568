//! Separability conditions and the CFRD Bell inequality, each returning a
//! [`WitnessReport`].

mod bell;
mod multimode;
mod peres;
mod report;
mod two_mode;

pub use bell::{
    cfrd, cfrd_bound_expanded, min_partition, min_partition_with, noon_phase_diagnostic,
    partition_moment, sep_product, sep_srur, sep_sum, separability_moments, LocalKind,
    LocalObservable, Partition, SeparabilityMoments, ZSpec, MAX_PARTITION_MODES,
};
pub use multimode::general_multimode;
pub use peres::{peres_check, peres_check_with, PeresRecord};
pub use report::{Sense, ViolationReason, WitnessReport, VIOLATION_TOL};
pub use two_mode::{
    duan_epr, duan_epr_scan, hz_kvariance, jykz, lh_hur, nplus, su2_hur, Axis, DUAN_SCAN_POINTS,
};
