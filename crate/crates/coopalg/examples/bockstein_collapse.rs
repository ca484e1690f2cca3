//! The Bockstein dimension identity: Ext over E(2) of the complement of
//! the free part folds up from its Ext over E(1), one v2-power at a
//! time, with no corrections. Also checks the connecting homomorphism
//! that sets the spectral sequence up, and shows the identity failing
//! for a free module (whose Bockstein differentials are nonzero).

use coopalg::comod::{ModulePres, Ring};
use coopalg::ext::{bockstein_collapse_check, connecting_is_v2_check};
use coopalg::margolis::submodule_s;

fn main() {
    let split = submodule_s(40);
    let report = bockstein_collapse_check(&split.quot, 12, 40).unwrap();
    println!(
        "complement of the free part: {} bidegrees checked, {} mismatches",
        report.checked_cells,
        report.mismatches.len()
    );

    let conn = connecting_is_v2_check(8, 36).unwrap();
    println!(
        "connecting homomorphism equals v2 at {} bidegrees ({} mismatches)",
        conn.checked_cells,
        conn.mismatches.len()
    );

    // For contrast: a free module's Bockstein spectral sequence does
    // not collapse, and the identity fails.
    let free = ModulePres::exterior(2, Ring::E2);
    let free_report = bockstein_collapse_check(&free, 6, 24).unwrap();
    println!(
        "free module: identity fails at {} bidegrees (first: {:?})",
        free_report.mismatches.len(),
        free_report
            .mismatches
            .first()
            .map(|m| (m.s, m.t, m.e2_dim, m.folded_e1_dim))
    );
}
