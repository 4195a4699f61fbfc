use std::collections::BTreeSet;

use glfq::ff::{Fe, Field};
use glfq::rep::d_count;
use glfq::tori::*;

fn torus(p: &[u32], q: u64) -> TorusDatum {
    TorusDatum::new(p.to_vec(), q).unwrap()
}

fn chi(e: &[u128]) -> TorusCharacter {
    TorusCharacter::new(e.to_vec())
}

/// Exponent of `theta o N` read off an explicit norm table of `F_9 -> F_3`.
#[test]
fn norm_pullback_matches_norm_table() {
    let f = Field::new(3, 2).unwrap();
    // F_3^* generated inside F_9 by g^4
    let h = f.from_log(4);
    let log_h = |y: Fe| (0..2u32).find(|&k| f.pow(h, k as u64) == y).unwrap() as u128;
    let t = torus(&[1], 3);
    for e in 0..2u128 {
        let (up, pulled) = norm_pullback(&t, &chi(&[e]), 2).unwrap();
        assert_eq!(up.q, 9);
        assert_eq!(pulled.exponents, [4 * e % 8]);
        for a in 0..8u64 {
            let x = f.from_log(a);
            let norm = f.mul(x, f.frobenius(x, 3).unwrap());
            // zeta_2^{e log_h N(x)} against zeta_8^{pulled * a}
            assert_eq!((e * log_h(norm) % 2) * 4, pulled.exponents[0] * a as u128 % 8);
        }
    }
}

#[test]
fn norm_pullback_is_injective_and_composes() {
    for p in [vec![1], vec![2], vec![2, 1], vec![1, 1]] {
        let t = torus(&p, 3);
        let chars = t.characters().unwrap();
        let pulled: BTreeSet<TorusCharacter> = chars.iter().map(|c| norm_pullback(&t, c, 2).unwrap().1).collect();
        assert_eq!(pulled.len(), chars.len());
        assert_eq!(norm_pullback(&t, &TorusCharacter::trivial(&t), 3).unwrap().1, TorusCharacter::trivial(&t));
        for c in &chars {
            let (t2, c2) = norm_pullback(&t, c, 2).unwrap();
            let (_, via) = norm_pullback(&t2, &c2, 3).unwrap();
            assert_eq!(via, norm_pullback(&t, c, 6).unwrap().1);
        }
    }
}

#[test]
fn point_counts() {
    assert_eq!(torus(&[2], 3).point_count().unwrap(), 8);
    assert_eq!(torus(&[1, 1], 3).point_count().unwrap(), 4);
    assert_eq!(torus(&[3], 3).point_count().unwrap(), 26);
    for t in list_tori(3, 3) {
        assert_eq!(t.characters().unwrap().len() as u128, t.point_count().unwrap());
    }
}

#[test]
fn general_position_examples() {
    for n in 2..=3 {
        let t = torus(&[n], 3);
        assert!(!in_general_position(&t, &TorusCharacter::trivial(&t)).unwrap());
    }
    assert!(in_general_position(&torus(&[2], 3), &chi(&[1])).unwrap());
    assert!(!in_general_position(&torus(&[2], 3), &chi(&[4])).unwrap());
    assert!(!in_general_position(&torus(&[1, 1], 3), &chi(&[1, 1])).unwrap());
    assert!(in_general_position(&torus(&[1, 1], 3), &chi(&[0, 1])).unwrap());
}

/// Stabilizer-free criterion: full Frobenius orbits in every part and no
/// two equal parts in the same orbit.
fn general_position_oracle(t: &TorusDatum, c: &TorusCharacter) -> bool {
    let orbit = |l: u32, e: u128| -> BTreeSet<u128> {
        let m = (t.q as u128).pow(l) - 1;
        (0..l).map(|j| e * (t.q as u128).pow(j) % m).collect()
    };
    let k = t.partition.len();
    (0..k).all(|i| orbit(t.partition[i], c.exponents[i]).len() == t.partition[i] as usize)
        && (0..k).all(|i| {
            (i + 1..k).all(|j| {
                t.partition[i] != t.partition[j] || !orbit(t.partition[i], c.exponents[i]).contains(&c.exponents[j])
            })
        })
}

#[test]
fn general_position_matches_oracle() {
    for q in [3, 5] {
        for n in 1..=3 {
            if q == 5 && n == 3 {
                continue;
            }
            for t in list_tori(n, q) {
                for c in t.characters().unwrap() {
                    assert_eq!(in_general_position(&t, &c).unwrap(), general_position_oracle(&t, &c), "{t:?} {c:?}");
                }
            }
        }
    }
}

/// Orbits of size `n` under multiplication by `q` modulo `q^n - 1`.
fn full_orbit_count(n: u32, q: u64) -> u64 {
    let m = (q as u128).pow(n) - 1;
    let full = (0..m)
        .filter(|&e| {
            let mut x = e * q as u128 % m;
            let mut len = 1;
            while x != e {
                x = x * q as u128 % m;
                len += 1;
            }
            len == n
        })
        .count() as u64;
    full / n as u64
}

#[test]
fn anisotropic_counts() {
    for (n, q) in [(1, 3), (2, 3), (2, 5), (3, 3), (3, 5), (4, 3)] {
        let c = anisotropic_gp_count(n, q).unwrap();
        assert_eq!(c, d_count(n, q), "n={n} q={q}");
        assert_eq!(c, full_orbit_count(n, q));
    }
    assert_eq!(anisotropic_gp_count(1, 3).unwrap(), 2);
    assert_eq!(anisotropic_gp_count(2, 3).unwrap(), 3);
    assert_eq!(anisotropic_gp_count(3, 3).unwrap(), 8);
}

#[test]
fn geometric_conjugacy_examples() {
    let an = torus(&[2], 3);
    let split = torus(&[1, 1], 3);
    for e in 0..8 {
        assert!(geometrically_conjugate(&an, &chi(&[e]), &an, &chi(&[e]), 4).unwrap());
    }
    assert!(geometrically_conjugate(&an, &chi(&[4]), &split, &chi(&[1, 1]), 2).unwrap());
    assert!(geometrically_conjugate(&an, &chi(&[0]), &split, &chi(&[0, 0]), 2).unwrap());
    assert!(!geometrically_conjugate(&an, &chi(&[1]), &an, &chi(&[2]), 4).unwrap());
    assert!(geometrically_conjugate(&an, &chi(&[1]), &an, &chi(&[3]), 2).unwrap());
    assert!(geometrically_conjugate(&an, &chi(&[1]), &an, &chi(&[1]), 1).is_err());
}

/// Anisotropic characters of `GL_2` are geometrically conjugate to a
/// character of the split torus exactly when Frobenius fixes them.
#[test]
fn split_conjugacy_iff_frobenius_invariant() {
    for q in [3u64, 5] {
        let an = torus(&[2], q);
        let split = torus(&[1, 1], q);
        let split_chars = split.characters().unwrap();
        for c in an.characters().unwrap() {
            let e = c.exponents[0];
            let m = (q * q - 1) as u128;
            let fr_invariant = e * q as u128 % m == e;
            let conj = split_chars.iter().any(|s| geometrically_conjugate(&an, &c, &split, s, 4).unwrap());
            assert_eq!(conj, fr_invariant, "q={q} e={e}");
        }
    }
}

fn all_pairs(n: u32, q: u64) -> Vec<(TorusDatum, TorusCharacter)> {
    list_tori(n, q).into_iter().flat_map(|t| t.characters().unwrap().into_iter().map(move |c| (t.clone(), c))).collect()
}

#[test]
fn geometric_conjugacy_is_an_equivalence() {
    for n in [2, 3] {
        let pairs = all_pairs(n, 3);
        let level = if n == 2 { 2 } else { 6 };
        let k = pairs.len();
        let rel: Vec<Vec<bool>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        geometrically_conjugate(&pairs[i].0, &pairs[i].1, &pairs[j].0, &pairs[j].1, level).unwrap()
                    })
                    .collect()
            })
            .collect();
        for i in 0..k {
            assert!(rel[i][i]);
            for j in 0..k {
                assert_eq!(rel[i][j], rel[j][i]);
                if rel[i][j] {
                    assert!((0..k).all(|l| !rel[j][l] || rel[i][l]));
                }
            }
        }
        // a larger bound sees the same relation
        for i in (0..k).step_by(7) {
            for j in (0..k).step_by(5) {
                let wide =
                    geometrically_conjugate(&pairs[i].0, &pairs[i].1, &pairs[j].0, &pairs[j].1, level * 3).unwrap();
                assert_eq!(wide, rel[i][j]);
            }
        }
    }
}

#[test]
fn general_position_conjugate_only_to_own_orbit() {
    for q in [3, 5] {
        let an = torus(&[2], q);
        let pairs = all_pairs(2, q);
        for c in an.characters().unwrap() {
            if !in_general_position(&an, &c).unwrap() {
                continue;
            }
            let orbit: BTreeSet<TorusCharacter> = weyl_orbit(&an, &c).unwrap().into_iter().collect();
            for (t, d) in &pairs {
                let conj = geometrically_conjugate(&an, &c, t, d, 2).unwrap();
                assert_eq!(conj, t == &an && orbit.contains(d), "{c:?} {t:?} {d:?}");
            }
        }
    }
}

#[test]
fn lusztig_condition_examples() {
    for t in list_tori(2, 3) {
        let n = t.n() as usize;
        for c in t.characters().unwrap() {
            assert!(lusztig_condition(&t, &c, &SigmaAction::inverse(n), 2).unwrap());
            let squares_trivial = split_exponents(&t, &c, 2).unwrap().iter().all(|&a| 2 * a % 8 == 0);
            assert_eq!(lusztig_condition(&t, &c, &SigmaAction::identity(n), 2).unwrap(), squares_trivial);
            if c.is_trivial() {
                let swap = SigmaAction { perm: vec![1, 0], signs: vec![1, 1], frob: vec![0, 0] };
                assert!(lusztig_condition(&t, &c, &swap, 2).unwrap());
            }
        }
    }
    // Frobenius twist on the anisotropic torus of GL_2(F_3) at level 2:
    // t_i -> t_{r(i)}^q, so theta~(sigma t) = theta~(t)^{-1} reads e q^2 = -e
    let t = torus(&[2], 3);
    let fr = SigmaAction { perm: vec![1, 0], signs: vec![1, 1], frob: vec![1, 1] };
    for e in 0..8u128 {
        let got = lusztig_condition(&t, &chi(&[e]), &fr, 2).unwrap();
        let a = split_exponents(&t, &chi(&[e]), 2).unwrap();
        let expect = (a[1] * 3 + a[0]).is_multiple_of(8) && (a[0] * 3 + a[1]).is_multiple_of(8);
        assert_eq!(got, expect);
    }
}

#[test]
fn restriction_of_scalars() {
    for n in 1..=3 {
        let r = scalars_bijection(n, 3, 2).unwrap();
        assert!(r.full_match, "{r:?}");
        assert_eq!(r.pairs.len(), list_tori(n, 9).len());
        for p in &r.pairs {
            assert_eq!(p.order, p.restricted_order);
            let direct: u128 = p.partition.iter().map(|&l| 9u128.pow(l) - 1).product();
            assert_eq!(p.order, direct);
        }
    }
    let r = scalars_bijection(1, 3, 2).unwrap();
    assert_eq!(r.pairs[0].order, 8);
    let r = scalars_bijection(2, 3, 2).unwrap();
    assert_eq!(r.pairs[0].restricted_factors, [80]);
    assert_eq!(r.pairs[1].restricted_factors, [8, 8]);
    assert_eq!(r.pairs[1].restricted_type, [2, 2]);
}
