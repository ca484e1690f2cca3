//! Honest trigraded Ext charts: the chart of the weight-8 component
//! (the second Brown-Gitler comodule, suspended), its v0-localized
//! ranks per stem, the three-term relation `v2 x = v1 y + v0 z`, and an
//! SVG rendering in the Adams-chart convention.

use coopalg::comod::{ModulePres, Ring};
use coopalg::ext::{class_of_primitive, ext_chart, rep_labels, v0_localize};
use coopalg::milnor::Monomial;
use coopalg::svg::render_chart_svg;

fn main() {
    let m = ModulePres::weight_component(2, 4, Ring::E2);
    let chart = ext_chart(&m, Ring::E2, 14, 48).unwrap();

    println!("Ext of the weight-8 component (= Sigma^8 bu_2), low bidegrees:");
    for (&(s, t), cell) in &chart.cells {
        if cell.dim > 0 && t <= 22 {
            println!(
                "  (s,t) = ({s},{t}), stem {:>2}: dim {}  {}",
                t - s as i64,
                cell.dim,
                rep_labels(&chart, &m, s, t).join(" ; ")
            );
        }
    }

    // v2 [z1^8] = v0 [z3^2] + v1 [z2^4]
    let z18 = Monomial::from_pairs(&[(1, 8)]);
    let z24 = Monomial::from_pairs(&[(2, 4)]);
    let z32 = Monomial::from_pairs(&[(3, 2)]);
    let (t8, c8) = class_of_primitive(&chart, &m, &z18).unwrap();
    let (t12, c12) = class_of_primitive(&chart, &m, &z24).unwrap();
    let (t14, c14) = class_of_primitive(&chart, &m, &z32).unwrap();
    let mut sum = chart.vmap(2, 0, t8).unwrap().mul_vec(&c8);
    sum.xor_assign(&chart.vmap(1, 0, t12).unwrap().mul_vec(&c12));
    sum.xor_assign(&chart.vmap(0, 0, t14).unwrap().mul_vec(&c14));
    println!("\nv2 [z1^8] = v0 [z3^2] + v1 [z2^4]: {}", sum.is_zero());

    println!("\nstabilized v0-localized ranks per stem:");
    for (n, sr) in v0_localize(&chart) {
        if sr.stabilized && sr.rank > 0 {
            print!("  {n}:{}", sr.rank);
        }
    }
    println!();

    let path = std::env::temp_dir().join("sigma8_bu2_chart.svg");
    std::fs::write(&path, render_chart_svg(&chart, "Ext of Sigma^8 bu_2")).unwrap();
    println!("\nSVG chart written to {}", path.display());
}
