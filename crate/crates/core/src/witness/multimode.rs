use super::report::{kv, pt_product_report, WitnessReport};
use crate::algebra::named::{hermitian_x, hermitian_y, hermitian_z, n_general};
use crate::algebra::BosonMonomial;
use crate::error::{check_modes, Error, Result};
use crate::fock::{variance_of, Moments};
use crate::pt::ModeSet;

/// Multimode uncertainty condition built from an arbitrary normally ordered
/// word `M`:
///
/// `[(ΔH_x)² − ⟨N⟩][(ΔH_y)² − ⟨N⟩] ≥ ¼|⟨L_z⟩|²`
///
/// where `L_{x,y,z}` are generated by `M`, `H_{x,y}` by `M` with creation and
/// annihilation powers exchanged on the transposed modes, and
/// `N = ¼[M_1, M_1†]⊗[M_2, M_2†]`. Each bracket on the left equals the PT
/// variance `(ΔL_i)²_{ρ^PT}`.
pub fn general_multimode<M: Moments + ?Sized>(
    state: &M,
    word: &BosonMonomial,
    modes: &ModeSet,
) -> Result<WitnessReport> {
    let count = state.mode_count();
    check_modes(count, word.mode_count())?;
    modes.check_range(count)?;
    if modes.len() == count {
        return Err(Error::InvalidParameter(
            "transposing every mode is a full transpose, not a bipartition".into(),
        ));
    }
    let transposed = modes.to_vec();
    let swapped = word.swap_on(transposed.iter().copied());
    let n_mean = state.expect(&n_general(word, &transposed)?)?.re;
    let vx = variance_of(state, &hermitian_x(&swapped))? - n_mean;
    let vy = variance_of(state, &hermitian_y(&swapped))? - n_mean;
    let rhs = 0.25 * state.expect(&hermitian_z(word))?.norm_sqr();
    pt_product_report(
        "general_multimode",
        vx,
        vy,
        rhs,
        vec![kv("word", word), kv("transposed", modes)],
    )
}
