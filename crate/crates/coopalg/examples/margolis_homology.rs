//! Margolis homology of the ambient algebra: computes the per-degree
//! dimensions under Q0, Q1, Q2 and compares them with the closed-form
//! answers (a polynomial algebra, a mixed polynomial-exterior algebra,
//! and a truncated polynomial algebra).

use coopalg::comod::{ModulePres, Ring};
use coopalg::margolis::margolis;
use coopalg::verify::{
    q0_margolis_closed_form, q1_margolis_closed_form, q2_margolis_closed_form,
};

fn main() {
    let window = 40;
    let amb = ModulePres::ambient(2, window + 8, Ring::E2);
    let closed: [fn(i64) -> usize; 3] = [
        q0_margolis_closed_form,
        q1_margolis_closed_form,
        q2_margolis_closed_form,
    ];
    let names = [
        "F2[z1^2, z2^2]",
        "F2[z1^2] (x) E(z_i^2 | i >= 2)",
        "F2[z_i^2]/(z_i^8)",
    ];
    for i in 0..3u8 {
        let h = margolis(&amb, i);
        println!("Q{i}-Margolis homology vs {}:", names[i as usize]);
        print!("  dims 0..{window}: ");
        let mut all_match = true;
        for d in 0..=window {
            let dim = h.dim(d);
            if dim > 0 {
                print!("{d}:{dim} ");
            }
            all_match &= dim == closed[i as usize](d);
        }
        println!();
        println!("  matches closed form: {all_match}");
        // a couple of representatives
        for d in [6i64, 12] {
            if let Some(entry) = h.degrees.get(&d) {
                if !entry.reps.is_empty() {
                    println!("  degree {d} classes: {}", entry.reps.join(" | "));
                }
            }
        }
        println!();
    }
}
