//! The inductive generator tables: prints the per-summand generator
//! lists (hidden v2-extensions starred), resolves the v2-multiple of
//! each leading-summand generator, and cross-validates a table against
//! the honest Ext chart of its weight component.

use coopalg::svg::render_table_svg;
use coopalg::tables::{
    bp2_generators, crosscheck, inductive_table, v2_relation_targets, Parity, V2Relation,
};

fn main() {
    for j in 0..=7 {
        print!("{}", inductive_table(j).render_text());
        println!();
    }

    println!("v2-multiples of the even leading-summand generators (h = 2):");
    for g in bp2_generators(2, Parity::Even) {
        match v2_relation_targets(2, Parity::Even, &g).unwrap() {
            V2Relation::Hidden { x_index } => {
                println!("  v2 ({g}) = x_{x_index}   [hidden extension]");
            }
            V2Relation::Relation {
                v1_target,
                v0_target,
                ..
            } => {
                println!("  v2 ({g}) = v1 ({v1_target}) + v0 ({v0_target})");
            }
        }
    }

    let report = crosscheck(2, 16, 48).unwrap();
    println!(
        "\ncrosscheck of table j=2 against the honest chart: {} \
         ({} stems, {} relations, {} hidden extensions)",
        if report.passed() { "pass" } else { "FAIL" },
        report.stems_compared,
        report.relation_checks,
        report.hidden_checks
    );

    let path = std::env::temp_dir().join("bu4_table.svg");
    std::fs::write(&path, render_table_svg(&inductive_table(4))).unwrap();
    println!("table chart for j=4 written to {}", path.display());
}
