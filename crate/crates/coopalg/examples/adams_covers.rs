//! Adams covers: the symbolic cover chains (v1 x = v0 x' relations) of
//! generators, the canonical tower chain of the integral Brown-Gitler
//! modules whose length is 2k - alpha(k), and the measured v0-tower
//! bottoms in an honest E(1)-Ext chart.

use coopalg::comod::{ModulePres, Ring};
use coopalg::ext::{ext_chart, v0_localize};
use coopalg::milnor::Monomial;
use coopalg::tables::{adams_cover, hz_cover_chain, hz_cover_index};

fn main() {
    for start in [
        Monomial::from_pairs(&[(2, 4)]),
        Monomial::from_pairs(&[(2, 8)]),
        Monomial::from_pairs(&[(1, 4), (2, 6)]),
    ] {
        let cover = adams_cover(&start);
        let chain: Vec<String> = std::iter::once(start.to_string())
            .chain(cover.steps.iter().map(|s| s.to.to_string()))
            .collect();
        println!(
            "cover chain from {start}: {} (index {})",
            chain.join(" -> "),
            cover.cover_index
        );
    }

    println!("\nintegral Brown-Gitler cover indices (2k - alpha(k)):");
    for k in 1..=8i64 {
        let chain = hz_cover_chain(k);
        println!(
            "  k = {k}: index {} = chain {}",
            hz_cover_index(k),
            chain
                .iter()
                .map(Monomial::to_string)
                .collect::<Vec<_>>()
                .join(" -> ")
        );
    }

    // measured from the chart: localized rank 1 in every even stem,
    // towers dropping to the 0-line until the cover index is exhausted
    let k = 3i64;
    let m = ModulePres::brown_gitler(0, k, Ring::E1);
    let chart = ext_chart(&m, Ring::E1, 16, 40).unwrap();
    let ranks = v0_localize(&chart);
    print!("\nHZ_{k} localized ranks: ");
    for (n, sr) in &ranks {
        if sr.stabilized {
            print!("{n}:{} ", sr.rank);
        }
    }
    println!();
}
