//! Margolis homology of windowed presentations, the freeness and
//! invertibility tests it supports, and the structural splittings of
//! the ambient algebra: the free submodule generated in length >= 3,
//! its complement, the length-2 story over E(1), and the weight
//! decomposition of the z1-free subalgebra.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::comod::{closure_split, Label, ModulePres, Ring, Split};
use crate::gf2::{homology, BitVec};
use crate::milnor::{enumerate_basis, q_degree, AlgebraId, Monomial};

/// Homology of one degree slice under a Milnor primitive.
#[derive(Clone, Debug)]
pub struct MargolisDegree {
    pub dim: usize,
    /// False in the top degrees of an incomplete window, where incoming
    /// boundaries cannot be seen.
    pub reliable: bool,
    pub reps: Vec<String>,
    /// Dimensions refined by the length grading, when every label
    /// involved has a well-defined length.
    pub by_length: Option<BTreeMap<u32, usize>>,
}

#[derive(Clone, Debug)]
pub struct MargolisResult {
    pub q: u8,
    pub degrees: BTreeMap<i64, MargolisDegree>,
}

impl MargolisResult {
    pub fn dim(&self, d: i64) -> usize {
        self.degrees.get(&d).map_or(0, |e| e.dim)
    }

    pub fn reliable_dims(&self) -> BTreeMap<i64, usize> {
        self.degrees
            .iter()
            .filter(|(_, e)| e.reliable)
            .map(|(&d, e)| (d, e.dim))
            .collect()
    }

    pub fn total_reliable_dim(&self) -> usize {
        self.degrees
            .values()
            .filter(|e| e.reliable)
            .map(|e| e.dim)
            .sum()
    }

    pub fn vanishes_reliably(&self) -> bool {
        self.total_reliable_dim() == 0
    }
}

fn lengths_defined(m: &ModulePres, d: i64) -> Option<Vec<u32>> {
    m.labels(d).iter().map(Label::length).collect()
}

/// Margolis homology `ker(Q_i) / im(Q_i)` of every degree in the window.
pub fn margolis(m: &ModulePres, i: u8) -> MargolisResult {
    assert!((i as usize) < m.ring.q_count(), "Q{i} does not act");
    let shift = q_degree(i);
    let mut degrees = BTreeMap::new();
    for d in m.degrees().collect::<Vec<_>>() {
        let d_in = m.action(i, d + shift);
        let d_out = m.action(i, d);
        let h = homology(&d_in, &d_out).expect("Q_i squares to zero");
        let reps = h
            .reps
            .iter()
            .map(|v| {
                let parts: Vec<String> = v
                    .ones()
                    .iter()
                    .map(|&c| m.labels(d)[c].to_string())
                    .collect();
                parts.join(" + ")
            })
            .collect();
        let by_length = (|| {
            let here = lengths_defined(m, d)?;
            let above = lengths_defined(m, d + shift)?;
            let below = lengths_defined(m, d - shift)?;
            let mut out: BTreeMap<u32, usize> = BTreeMap::new();
            let all: Vec<u32> = here.clone();
            let mut lengths: Vec<u32> = all.clone();
            lengths.sort_unstable();
            lengths.dedup();
            for &l in &lengths {
                let cols_in: Vec<usize> = above
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == l + 1)
                    .map(|(c, _)| c)
                    .collect();
                let rows_in: Vec<usize> = here
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == l)
                    .map(|(r, _)| r)
                    .collect();
                let cols_out = rows_in.clone();
                let rows_out: Vec<usize> = below
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x + 1 == l)
                    .map(|(r, _)| r)
                    .collect();
                let sub_in = submatrix(&d_in, &rows_in, &cols_in);
                let sub_out = submatrix(&d_out, &rows_out, &cols_out);
                let h = homology(&sub_in, &sub_out).expect("length-graded complex");
                if h.dim > 0 {
                    out.insert(l, h.dim);
                }
            }
            Some(out)
        })();
        degrees.insert(
            d,
            MargolisDegree {
                dim: h.dim,
                reliable: m.reliable_for(i, d),
                reps,
                by_length,
            },
        );
    }
    MargolisResult { q: i, degrees }
}

fn submatrix(m: &crate::gf2::Mat2, rows: &[usize], cols: &[usize]) -> crate::gf2::Mat2 {
    let mut out = crate::gf2::Mat2::zero(rows.len(), cols.len());
    for (r, &mr) in rows.iter().enumerate() {
        for (c, &mc) in cols.iter().enumerate() {
            if m.get(mr, mc) {
                out.set(r, c, true);
            }
        }
    }
    out
}

/// Freeness test: a bounded-below module is free exactly when every
/// Margolis homology vanishes; here certified on the reliable window.
pub fn is_free(m: &ModulePres) -> bool {
    (0..m.ring.q_count() as u8).all(|i| margolis(m, i).vanishes_reliably())
}

/// Split the ambient algebra `(A//E(2))_*` through degree `max_degree`
/// along the E(2)-submodule generated by monomials of length at least 3.
pub fn submodule_s(max_degree: i64) -> Split {
    let amb = ModulePres::ambient(2, max_degree, Ring::E2);
    let mut seeds = Vec::new();
    for d in amb.degrees().collect::<Vec<_>>() {
        for (idx, label) in amb.labels(d).iter().enumerate() {
            if label.mono().map(Monomial::length).unwrap_or(0) >= 3 {
                seeds.push((d, BitVec::unit(amb.dim(d), idx)));
            }
        }
    }
    closure_split(&amb, seeds, &[0, 1, 2], Ring::E2)
}

/// Split `q` (the complement of the free part) along the E(1)-submodule
/// generated by its length-2 section monomials: the free `S'` and the
/// invertible-sum complement.
pub fn submodule_sprime(q: &ModulePres) -> Split {
    let mut seeds = Vec::new();
    for d in q.degrees().collect::<Vec<_>>() {
        for (idx, label) in q.labels(d).iter().enumerate() {
            if label.length() == Some(2) {
                seeds.push((d, BitVec::unit(q.dim(d), idx)));
            }
        }
    }
    closure_split(q, seeds, &[0, 1], Ring::E1)
}

/// The weight pieces of `R = P(z2^2, z3^2, z4, ...)` as E(1)-modules,
/// together with the quotients by the length >= 2 part whose Picard
/// invariants classify them.
pub struct RDecomposition {
    pub r: ModulePres,
    /// `(k, W_2(k))` with `W_2(k)` spanned by the weight-4k monomials.
    pub w: Vec<(i64, ModulePres)>,
    /// The corresponding invertible quotients.
    pub wbar: Vec<(i64, ModulePres)>,
}

pub fn r_decomposition(max_degree: i64) -> RDecomposition {
    let monos: Vec<Monomial> = enumerate_basis(AlgebraId::AModE(2), Some(max_degree), None)
        .into_iter()
        .filter(|m| m.exp(1) == 0)
        .collect();
    let r = ModulePres::span_closed(Ring::E1, AlgebraId::AModE(2), monos, max_degree, false)
        .expect("R is an E(1)-subcomodule");
    let mut w = Vec::new();
    let mut wbar = Vec::new();
    for k in 0..=max_degree / 4 {
        let monos: Vec<Monomial> =
            enumerate_basis(AlgebraId::AModE(2), None, Some(crate::milnor::WeightFilter::Exactly(4 * k)))
                .into_iter()
                .filter(|m| m.exp(1) == 0)
                .collect();
        let window = monos.iter().map(Monomial::degree).max().unwrap_or(0);
        let wk = ModulePres::span_closed(Ring::E1, AlgebraId::AModE(2), monos, window, true)
            .expect("weight pieces are closed");
        let mut seeds = Vec::new();
        for d in wk.degrees().collect::<Vec<_>>() {
            for (idx, label) in wk.labels(d).iter().enumerate() {
                if label.mono().map(Monomial::length).unwrap_or(0) >= 2 {
                    seeds.push((d, BitVec::unit(wk.dim(d), idx)));
                }
            }
        }
        let split = closure_split(&wk, seeds, &[0, 1], Ring::E1);
        w.push((k, wk));
        wbar.push((k, split.quot));
    }
    RDecomposition { r, w, wbar }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PicardInvariant {
    pub a: i64,
    pub b: i64,
    /// Degree of the Q0-Margolis class.
    pub q0_degree: i64,
    /// Degree of the Q1-Margolis class.
    pub q1_degree: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PicardError {
    #[error("module is not invertible: Margolis dimensions {q0} and {q1}")]
    NotInvertible { q0: usize, q1: usize },
    #[error("Margolis degrees {c} and {d} differ by an odd amount")]
    ParityViolation { c: i64, d: i64 },
}

/// Picard-group coordinates of an invertible E(1)-module: if the Q0-
/// and Q1-Margolis homologies are one-dimensional in degrees c and d,
/// the module is stably the (a,b) twist with `a = (3c-d)/2`,
/// `b = (d-c)/2`.
pub fn picard_invariant(m: &ModulePres) -> Result<PicardInvariant, PicardError> {
    assert_eq!(m.ring, Ring::E1);
    let h0 = margolis(m, 0);
    let h1 = margolis(m, 1);
    let dims0 = h0.reliable_dims();
    let dims1 = h1.reliable_dims();
    let total0: usize = dims0.values().sum();
    let total1: usize = dims1.values().sum();
    if total0 != 1 || total1 != 1 {
        return Err(PicardError::NotInvertible {
            q0: total0,
            q1: total1,
        });
    }
    let c = *dims0.iter().find(|(_, &v)| v > 0).unwrap().0;
    let d = *dims1.iter().find(|(_, &v)| v > 0).unwrap().0;
    if (d - c).rem_euclid(2) != 0 {
        return Err(PicardError::ParityViolation { c, d });
    }
    Ok(PicardInvariant {
        a: (3 * c - d) / 2,
        b: (d - c) / 2,
        q0_degree: c,
        q1_degree: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Graded dimensions of F2[z1^2, z2^2]: the Q0-Margolis answer.
    pub fn q0_closed_form(d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        (0..=d / 2)
            .filter(|a| (d - 2 * a) % 6 == 0)
            .count()
    }

    /// Graded dimensions of F2[z1^2] (x) E(z_i^2 | i >= 2).
    pub fn q1_closed_form(d: i64) -> usize {
        // subsets of {6, 14, 30, 62, ...} plus an even remainder
        fn count(d: i64, gen: u32) -> usize {
            if d < 0 {
                return 0;
            }
            let g = (1i64 << (gen + 1)) - 2;
            if g > d {
                return usize::from(d % 2 == 0);
            }
            count(d, gen + 1) + count(d - g, gen + 1)
        }
        count(d, 2)
    }

    /// Graded dimensions of F2[z_i^2]/(z_i^8).
    pub fn q2_closed_form(d: i64) -> usize {
        fn count(d: i64, gen: u32) -> usize {
            if d == 0 {
                return 1;
            }
            if d < 0 {
                return 0;
            }
            let g = 2 * ((1i64 << gen) - 1);
            if g > d {
                return 0;
            }
            (0..=3)
                .map(|c| count(d - c * g, gen + 1))
                .sum()
        }
        count(d, 1)
    }

    #[test]
    fn margolis_ambient_q0_low_degrees() {
        let amb = ModulePres::ambient(2, 14, Ring::E2);
        let h = margolis(&amb, 0);
        let want = [1, 0, 1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 3];
        for (d, &w) in want.iter().enumerate() {
            assert_eq!(h.dim(d as i64), w, "degree {d}");
            assert_eq!(q0_closed_form(d as i64), w, "closed form at {d}");
        }
    }

    #[test]
    fn margolis_free_module_vanishes() {
        let free = ModulePres::exterior(2, Ring::E2);
        for i in 0..3 {
            assert!(margolis(&free, i).vanishes_reliably(), "Q{i}");
        }
        assert!(is_free(&free));
    }

    #[test]
    fn margolis_zero_module_free() {
        let zero =
            ModulePres::span_closed(Ring::E2, AlgebraId::AModE(2), vec![], 10, true).unwrap();
        assert!(is_free(&zero));
    }

    #[test]
    fn bigraded_vanishing_in_window() {
        // Margolis homology of the ambient algebra is concentrated in
        // length 0 for all three primitives.
        let amb = ModulePres::ambient(2, 30, Ring::E2);
        for i in 0..3u8 {
            let h = margolis(&amb, i);
            for (d, entry) in &h.degrees {
                if !entry.reliable {
                    continue;
                }
                let by_length = entry.by_length.as_ref().expect("monomial labels");
                for (&l, &dim) in by_length {
                    assert!(
                        l == 0 || dim == 0,
                        "Q{i} has length-{l} homology at degree {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn s_vanishes_in_small_windows() {
        let split = submodule_s(40);
        assert_eq!(split.sub.total_dim(), 0);
        for d in 0..=40 {
            assert_eq!(split.quot.dim(d), ModulePres::ambient(2, 40, Ring::E2).dim(d));
        }
    }

    #[test]
    fn sprime_within_window_52() {
        // The first length-2 monomial z4 z5 sits in degree 46 and its
        // E(1)-closure reaches down to degree 42.
        let split = submodule_s(52);
        assert_eq!(split.sub.total_dim(), 0, "S still vanishes here");
        let sp = submodule_sprime(&split.quot);
        assert!(sp.sub.total_dim() > 0);
        assert!(sp.sub.min_degree().unwrap() >= 42);
        for d in sp.sub.degrees().collect::<Vec<_>>() {
            for label in sp.sub.labels(d) {
                if let Some(l) = label.length() {
                    assert!(l <= 2);
                }
            }
        }
        // every length-2 section monomial is in even degree
        for d in sp.sub.degrees().collect::<Vec<_>>() {
            for label in sp.sub.labels(d) {
                if label.length() == Some(2) {
                    assert_eq!(d % 2, 0);
                }
            }
        }
        // S' is free over E(1) in the reliable window
        assert!(margolis(&sp.sub, 0).vanishes_reliably());
        assert!(margolis(&sp.sub, 1).vanishes_reliably());
        // Qbar keeps only short lengths in its section
        for d in sp.quot.degrees().collect::<Vec<_>>() {
            for label in sp.quot.labels(d) {
                assert!(label.length().unwrap_or(0) <= 1);
            }
        }
    }

    #[test]
    fn r_margolis_closed_forms() {
        let rd = r_decomposition(40);
        let h0 = margolis(&rd.r, 0);
        let h1 = margolis(&rd.r, 1);
        for d in 0..=36 {
            // M(R; Q0) = P(z2^2): one class in each degree divisible by 6
            let want0 = usize::from(d % 6 == 0);
            assert_eq!(h0.dim(d), want0, "Q0 at {d}");
            // M(R; Q1) = E(z_k^2 | k >= 2)
            let want1 = {
                fn count(d: i64, gen: u32) -> usize {
                    if d == 0 {
                        return 1;
                    }
                    let g = (1i64 << (gen + 1)) - 2;
                    if d < 0 || g > d {
                        return 0;
                    }
                    count(d, gen + 1) + count(d - g, gen + 1)
                }
                count(d, 2)
            };
            assert_eq!(h1.dim(d), want1, "Q1 at {d}");
        }
        assert_eq!(rd.w[0].1.total_dim(), 1, "W_2(0) = {{1}}");
    }

    #[test]
    fn picard_examples() {
        let trivial = ModulePres::trivial(Ring::E1);
        assert_eq!(
            picard_invariant(&trivial).unwrap(),
            PicardInvariant {
                a: 0,
                b: 0,
                q0_degree: 0,
                q1_degree: 0
            }
        );
        let sigma = ModulePres::f2_at(Ring::E1, 1);
        let p = picard_invariant(&sigma).unwrap();
        assert_eq!((p.a, p.b), (1, 0));

        // The coaugmentation quotient E(1)*/F2 realizes the
        // augmentation-ideal twist: Q0-class in degree 1, Q1-class in
        // degree 3, so (a, b) = (0, 1).
        let e1 = ModulePres::exterior(1, Ring::E1);
        let seed = (0, BitVec::unit(1, 0));
        let split = closure_split(&e1, vec![seed], &[0, 1], Ring::E1);
        assert_eq!(split.quot.total_dim(), 3);
        let p = picard_invariant(&split.quot).unwrap();
        assert_eq!((p.a, p.b, p.q0_degree, p.q1_degree), (0, 1, 1, 3));

        // A free module is not invertible.
        let free = ModulePres::exterior(1, Ring::E1);
        assert!(matches!(
            picard_invariant(&free),
            Err(PicardError::NotInvertible { .. })
        ));
    }

    #[test]
    fn wbar_pieces_are_invertible() {
        let rd = r_decomposition(40);
        let expect = [
            (0, (0, 0)),
            (1, (6, 0)),
            (2, (11, 1)),
            (3, (17, 1)),
            (4, (21, 3)),
            (5, (27, 3)),
        ];
        for (k, (a, b)) in expect {
            let (kk, wbar) = &rd.wbar[k as usize];
            assert_eq!(*kk, k);
            let p = picard_invariant(wbar)
                .unwrap_or_else(|e| panic!("Wbar_2({k}) not invertible: {e}"));
            assert_eq!((p.a, p.b), (a, b), "Wbar_2({k})");
        }
    }

    #[test]
    fn kunneth_spot_check() {
        // Margolis homology of a tensor product is the graded product.
        let a = ModulePres::brown_gitler(1, 2, Ring::E2);
        let b = ModulePres::weight_component(2, 4, Ring::E2);
        let t = a.tensor(&b, None).unwrap();
        for i in 0..3u8 {
            let ha = margolis(&a, i);
            let hb = margolis(&b, i);
            let ht = margolis(&t, i);
            let dmax = t.max_degree().unwrap_or(0);
            for d in 0..=dmax {
                let want: usize = (0..=d).map(|x| ha.dim(x) * hb.dim(d - x)).sum();
                assert_eq!(ht.dim(d), want, "Q{i} degree {d}");
            }
        }
    }

    #[test]
    fn margolis_quotient_matches_ambient() {
        // S = 0 in this window so the quotient has the same homology;
        // run the comparison anyway as the acceptance criterion does.
        let split = submodule_s(30);
        let amb = ModulePres::ambient(2, 30, Ring::E2);
        for i in 0..3u8 {
            let hq = margolis(&split.quot, i);
            let ha = margolis(&amb, i);
            for d in 0..=30 {
                if amb.reliable_for(i, d) {
                    assert_eq!(hq.dim(d), ha.dim(d));
                }
            }
        }
    }
}
