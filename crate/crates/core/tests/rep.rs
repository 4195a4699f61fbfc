use std::sync::OnceLock;

use num_rational::Rational64;

use glfq::chartab::{ClassFunction, Cyclotomic};
use glfq::ff::Fe;
use glfq::mat::{Composition, GroupSpec, DEFAULT_ENUMERATION_BOUND};
use glfq::rep::*;

fn family(q: u64, m: u32, max: usize) -> GlFamily {
    GlFamily::new(GroupSpec::new(1, q, m).unwrap(), max, DEFAULT_ENUMERATION_BOUND).unwrap()
}

fn f3() -> &'static GlFamily {
    static F: OnceLock<GlFamily> = OnceLock::new();
    F.get_or_init(|| family(3, 1, 3))
}

fn f5() -> &'static GlFamily {
    static F: OnceLock<GlFamily> = OnceLock::new();
    F.get_or_init(|| family(5, 1, 2))
}

fn comp(sizes: &[usize]) -> Composition {
    Composition::from_sizes(sizes, sizes.iter().sum()).unwrap()
}

/// Induced character by the defining sum over all of `G`.
fn induce_by_full_sum(fam: &GlFamily, c: &Composition, chi: &ClassFunction) -> Vec<Cyclotomic> {
    let g = fam.group(c.n());
    let par = fam.parabolic(c).unwrap();
    let f = g.field();
    let p_order = par.subgroups.p.order() as i64;
    (0..g.num_classes())
        .map(|cl| {
            let x = g.class_rep(cl);
            let mut counts = vec![0i64; par.levi_info.num_classes()];
            for t in g.elements() {
                let y = t.mul(x, f).mul(&g.inv(t), f);
                if par.subgroups.p.contains(&y) {
                    counts[par.levi_class_of(fam, &y)] += 1;
                }
            }
            Cyclotomic::linear_combination(
                counts.iter().zip(chi.values()).map(|(&k, v)| (Rational64::new(k, p_order), v)),
            )
        })
        .collect()
}

#[test]
fn single_block_is_identity() {
    let fam = f3();
    for n in 1..=3 {
        let c = Composition::trivial(n);
        for chi in fam.table(n).characters() {
            let lchi = chi.with_levi(fam, &c);
            assert_eq!(parabolic_induce(fam, &lchi, &c).unwrap().values(), chi.values());
            assert_eq!(jacquet_restrict(fam, chi, &c).unwrap().values(), chi.values());
        }
    }
}

trait WithLevi {
    fn with_levi(&self, fam: &GlFamily, c: &Composition) -> ClassFunction;
}

impl WithLevi for ClassFunction {
    fn with_levi(&self, fam: &GlFamily, c: &Composition) -> ClassFunction {
        ClassFunction::new(fam.parabolic(c).unwrap().levi_info.clone(), self.values().to_vec()).unwrap()
    }
}

#[test]
fn induction_matches_full_sum() {
    let fam = f3();
    for sizes in [&[1usize, 1][..], &[2, 1], &[1, 2], &[1, 1, 1]] {
        let c = comp(sizes);
        let par = fam.parabolic(&c).unwrap();
        for s in par.levi_table.characters() {
            assert_eq!(par.induce(s).unwrap().values(), induce_by_full_sum(fam, &c, s).as_slice());
        }
    }
}

#[test]
fn borel_induction_of_trivial() {
    let fam = f3();
    let c = comp(&[1, 1]);
    let par = fam.parabolic(&c).unwrap();
    let triv = ClassFunction::trivial(par.levi_info.clone());
    let ind = par.induce(&triv).unwrap();
    assert_eq!(ind.degree(), &Cyclotomic::from_int(4));
    let one = ClassFunction::trivial(par.g_info().clone());
    assert_eq!(ind.integer_inner_product(&one).unwrap(), 1);
    assert_eq!(ind.integer_inner_product(&ind).unwrap(), 2);
    assert_eq!(par.jacquet(&one).unwrap(), triv);
}

#[test]
fn induction_independent_of_block_order() {
    let fam = f3();
    let t1 = fam.table(1);
    let t2 = fam.table(2);
    let (a, b) = (comp(&[1, 2]), comp(&[2, 1]));
    for i in 0..t1.len() {
        for j in 0..t2.len() {
            let x = parabolic_induce(fam, &fam.levi_character(&a, &[i, j]).unwrap(), &a).unwrap();
            let y = parabolic_induce(fam, &fam.levi_character(&b, &[j, i]).unwrap(), &b).unwrap();
            assert_eq!(x, y);
        }
    }
    let c = comp(&[1, 1]);
    for i in 0..t1.len() {
        for j in 0..t1.len() {
            let x = parabolic_induce(fam, &fam.levi_character(&c, &[i, j]).unwrap(), &c).unwrap();
            let y = parabolic_induce(fam, &fam.levi_character(&c, &[j, i]).unwrap(), &c).unwrap();
            assert_eq!(x, y);
        }
    }
}

#[test]
fn frobenius_reciprocity() {
    for (fam, max) in [(f3(), 3usize), (f5(), 2)] {
        for n in 2..=max {
            for c in Composition::all(n) {
                let par = fam.parabolic(&c).unwrap();
                for s in par.levi_table.characters() {
                    let ind = par.induce(s).unwrap();
                    for chi in fam.table(n).characters() {
                        let lhs = ind.inner_product(chi).unwrap();
                        let rhs = s.inner_product(&par.jacquet(chi).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                        assert!(lhs.to_integer().unwrap() >= 0);
                    }
                }
            }
        }
    }
}

#[test]
fn frobenius_reciprocity_over_f9() {
    let fam = family(9, 1, 2);
    let c = comp(&[1, 1]);
    let par = fam.parabolic(&c).unwrap();
    for s in par.levi_table.characters().iter().step_by(7) {
        let ind = par.induce(s).unwrap();
        for chi in fam.table(2).characters() {
            assert_eq!(ind.inner_product(chi).unwrap(), s.inner_product(&par.jacquet(chi).unwrap()).unwrap());
        }
    }
}

#[test]
fn induction_in_stages() {
    // (1,1,1) through (2,1) and through (1,2)
    let fam = f3();
    let full = comp(&[1, 1, 1]);
    let t1 = fam.table(1);
    for i in 0..t1.len() {
        for j in 0..t1.len() {
            for k in 0..t1.len() {
                let direct = parabolic_induce(fam, &fam.levi_character(&full, &[i, j, k]).unwrap(), &full).unwrap();
                // stage through GL_2 x GL_1
                let b2 = comp(&[1, 1]);
                let inner = parabolic_induce(fam, &fam.levi_character(&b2, &[i, j]).unwrap(), &b2).unwrap();
                let mid = comp(&[2, 1]);
                let pm = fam.parabolic(&mid).unwrap();
                let mut staged = ClassFunction::zero(pm.g_info().clone());
                for (a, m) in fam.table(2).decompose(&inner).unwrap().into_iter().enumerate() {
                    if m != 0 {
                        let l = pm.levi_table.character(pm.levi_index(&[a, k]));
                        staged = staged.add(&pm.induce(l).unwrap().scale(Rational64::from_integer(m))).unwrap();
                    }
                }
                assert_eq!(direct, staged);
                // stage through GL_1 x GL_2
                let inner = parabolic_induce(fam, &fam.levi_character(&b2, &[j, k]).unwrap(), &b2).unwrap();
                let mid = comp(&[1, 2]);
                let pm = fam.parabolic(&mid).unwrap();
                let mut staged = ClassFunction::zero(pm.g_info().clone());
                for (a, m) in fam.table(2).decompose(&inner).unwrap().into_iter().enumerate() {
                    if m != 0 {
                        let l = pm.levi_table.character(pm.levi_index(&[i, a]));
                        staged = staged.add(&pm.induce(l).unwrap().scale(Rational64::from_integer(m))).unwrap();
                    }
                }
                assert_eq!(direct, staged);
            }
        }
    }
}

#[test]
fn jacquet_of_trivial_and_opposite_radical() {
    let fam = f3();
    for n in 2..=3 {
        let one = ClassFunction::trivial(fam.table(n).info().clone());
        for c in Composition::all(n) {
            let par = fam.parabolic(&c).unwrap();
            assert_eq!(par.jacquet(&one).unwrap(), ClassFunction::trivial(par.levi_info.clone()));
        }
    }
    // averaging over the lower unitriangular radical gives the same result
    let g = fam.group(2);
    let f = g.field();
    let c = comp(&[1, 1]);
    let par = fam.parabolic(&c).unwrap();
    let lower: Vec<_> = par.subgroups.u.elements().iter().map(|u| u.transpose()).collect();
    for chi in fam.table(2).characters() {
        let r = par.jacquet(chi).unwrap();
        let values: Vec<Cyclotomic> = (0..par.levi_info.num_classes())
            .map(|l| {
                let lrep = par.levi_rep(fam, l);
                let vals: Vec<&Cyclotomic> = lower.iter().map(|u| chi.value(g.class_of_member(&lrep.mul(u, f)))).collect();
                Cyclotomic::linear_combination(vals.into_iter().map(|v| (Rational64::new(1, lower.len() as i64), v)))
            })
            .collect();
        assert_eq!(r.values(), values.as_slice());
    }
}

#[test]
fn cuspidal_counts_match_d_count() {
    for (fam, n, q, expect) in [(f3(), 1usize, 3u64, 2u64), (f3(), 2, 3, 3), (f5(), 2, 5, 10), (f3(), 3, 3, 8)] {
        let cusp = cuspidal_indices(fam, n).unwrap();
        assert_eq!(cusp.len() as u64, expect);
        assert_eq!(d_count(n as u32, q), expect);
    }
    let fam = f3();
    assert!(!is_cuspidal(fam, 2, fam.table(2).trivial_index()).unwrap());
    assert!(!is_cuspidal(fam, 3, fam.table(3).trivial_index()).unwrap());
    for i in 0..fam.table(1).len() {
        assert!(is_cuspidal(fam, 1, i).unwrap());
    }
}

#[test]
fn cuspidal_supports_partition_irreducibles() {
    let fam = f3();
    for n in 1..=3 {
        let scan = SupportScan::new(fam, n).unwrap();
        for chi in 0..fam.table(n).len() {
            assert_eq!(scan.supports_of(chi).len(), 1, "degree {n}, irreducible {chi}");
        }
    }
    for i in cuspidal_indices(fam, 2).unwrap() {
        assert_eq!(cuspidal_support(fam, 2, i).unwrap(), CuspidalSupport(vec![(2, i)]));
    }
    let t1 = fam.table(1).trivial_index();
    let s = cuspidal_support(fam, 2, fam.table(2).trivial_index()).unwrap();
    assert_eq!(s, CuspidalSupport(vec![(1, t1), (1, t1)]));
}

fn units(fam: &GlFamily) -> Vec<Fe> {
    fam.field().units().collect()
}

#[test]
fn whittaker_degree_one() {
    let fam = f3();
    for a in units(fam) {
        for chi in fam.table(1).characters() {
            assert_eq!(whittaker_dim(fam, 1, chi, a).unwrap(), 1);
        }
    }
    assert!(whittaker_dim(fam, 1, fam.table(1).character(0), Fe::ZERO).is_err());
}

#[test]
fn whittaker_generic_constituent_unique() {
    // each principal series has exactly one generic constituent
    for (fam, max) in [(f3(), 3usize), (f5(), 2)] {
        for n in 2..=max {
            let scan = SupportScan::new(fam, n).unwrap();
            for a in units(fam) {
                let model = WhittakerModel::new(fam, n, a).unwrap();
                let dims: Vec<i64> =
                    fam.table(n).characters().iter().map(|c| model.dim(c).unwrap()).collect();
                assert!(dims.iter().all(|&d| d == 0 || d == 1));
                for mults in &scan.multiplicities {
                    let generic: i64 = mults.iter().zip(&dims).map(|(m, d)| m * d).sum();
                    assert_eq!(generic, 1);
                }
            }
        }
    }
}

#[test]
fn psh_degree_two_and_three() {
    let fam = f3();
    let report = psh_verify(fam, 3).unwrap();
    for c in &report.checks {
        assert!(c.passed, "{}: {:?}", c.name, c.witnesses);
        assert!(c.checked > 0, "{}", c.name);
    }
    let triv = fam.table(1).trivial_index();
    let sq = report.squares.iter().find(|s| s.rho == triv).unwrap();
    let degs: Vec<u64> = sq.constituents.iter().map(|c| c.degree).collect();
    assert_eq!(degs, vec![1, 3]);
}
