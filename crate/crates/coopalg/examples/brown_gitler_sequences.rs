//! Brown-Gitler comodules and their exact sequences: the weight
//! decomposition of the ambient algebra, the suspension isomorphisms
//! between weight components and smaller Brown-Gitler pieces, and the
//! degreewise-exact sequences driving the inductive Ext computation.

use coopalg::comod::{even_sequence, odd_sequence, suspension_iso, ModulePres, Ring};

fn main() {
    // dim_d (A//E(2))* = sum_j dim_d Sigma^{2j} bu_{j/2}
    let cap = 24;
    let amb = ModulePres::ambient(2, cap, Ring::E2);
    print!("weight decomposition through degree {cap}: ");
    let ok = (0..=cap).all(|d| {
        let total: usize = (0..=cap)
            .map(|j| ModulePres::brown_gitler(1, j / 2, Ring::E2).dim(d - 2 * j))
            .sum();
        total == amb.dim(d)
    });
    println!("{}", if ok { "holds" } else { "FAILS" });

    // M_2(4) = Sigma^8 bu_2 via the relabeling maps
    let iso = suspension_iso(2, 4, Ring::E2);
    println!(
        "M_2(4) (dim {}) = Sigma^8 bu_2 (dim {}), equivariant both ways: {}",
        iso.source.total_dim(),
        iso.target.total_dim(),
        iso.forward.verify_linear(&iso.source, &iso.target, None).is_ok()
            && iso.inverse.verify_linear(&iso.target, &iso.source, None).is_ok()
    );

    for j in 1..=4 {
        let odd = odd_sequence(j);
        let even = even_sequence(j);
        println!(
            "j = {j}: odd sequence (dims {:>4} -> {:>4} -> {:>4}) exact: {}",
            odd.modules[0].total_dim(),
            odd.modules[1].total_dim(),
            odd.modules[2].total_dim(),
            odd.check_exact(None).is_ok()
        );
        println!(
            "       even sequence (dims {:>4} -> {:>4} -> {:>4} -> {:>4}) exact: {}",
            even.modules[0].total_dim(),
            even.modules[1].total_dim(),
            even.modules[2].total_dim(),
            even.modules[3].total_dim(),
            even.check_exact(None).is_ok()
        );
    }
}
