//! The structural splittings: the free submodule generated by length-3
//! monomials (first visible near degree 100), the length-2 story over
//! E(1), and the Picard invariants classifying the invertible weight
//! pieces of the z1-free subalgebra.

use coopalg::margolis::{
    is_free, margolis, picard_invariant, r_decomposition, submodule_s, submodule_sprime,
};

fn main() {
    // S = E(2){length >= 3} is zero until the three smallest odd
    // generators can multiply; its closure then starts at degree 98.
    let deep = submodule_s(112);
    println!(
        "S in window 112: dim {}, first nonzero degree {:?}",
        deep.sub.total_dim(),
        deep.sub.min_degree()
    );
    println!("  free over E(2) (Margolis test): {}", is_free(&deep.sub));

    // S' = E(1){length = 2 images} inside the complement.
    let split = submodule_s(52);
    let sp = submodule_sprime(&split.quot);
    println!(
        "S' in window 52: dim {}, degrees {:?}",
        sp.sub.total_dim(),
        sp.sub.degrees().collect::<Vec<_>>()
    );
    println!(
        "  Q0/Q1-Margolis vanish: {} {}",
        margolis(&sp.sub, 0).vanishes_reliably(),
        margolis(&sp.sub, 1).vanishes_reliably()
    );

    // Weight pieces of R = P(z2^2, z3^2, z4, ...), with their quotients
    // by the length >= 2 part: each is an invertible E(1)-module.
    let rd = r_decomposition(48);
    println!("\nPicard invariants of the invertible weight pieces:");
    for (k, wbar) in rd.wbar.iter().take(8) {
        match picard_invariant(wbar) {
            Ok(p) => println!(
                "  Wbar_2({k}): dim {:>2}, (a, b) = ({}, {}), Margolis degrees ({}, {})",
                wbar.total_dim(),
                p.a,
                p.b,
                p.q0_degree,
                p.q1_degree
            ),
            Err(e) => println!("  Wbar_2({k}): {e}"),
        }
    }
}
