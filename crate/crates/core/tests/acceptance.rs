//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use num_rational::Rational64;

use glfq::chartab::{CharacterTable, ClassFunction, ClassInfo, Cyclotomic};
use glfq::inv::{catalogue, twisted_dual, verify_geometric_lemma, verify_mackey, verify_theorem_a, InvolutionKind, InvolutionSpec};
use glfq::mat::{Composition, GroupSpec, MatrixGroup, DEFAULT_ENUMERATION_BOUND};
use glfq::rep::{cuspidal_indices, d_count, induced_power_whittaker, psh_verify, GlFamily, SupportScan};
use glfq::tori::{anisotropic_gp_count, geometrically_conjugate, list_tori, scalars_bijection, TorusDatum};
use glfq::Result;

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

fn f9() -> &'static GlFamily {
    static F: OnceLock<GlFamily> = OnceLock::new();
    F.get_or_init(|| family(3, 2, 2))
}

/// The groups of the distinction sweep with their involutions.
fn sweep() -> Result<Vec<(&'static GlFamily, usize, Vec<InvolutionSpec>)>> {
    let frob = |s: &InvolutionSpec| s.kind().uses_frobenius();
    Ok(vec![
        (f3(), 2, catalogue(f3().group(2))?),
        (f5(), 2, catalogue(f5().group(2))?),
        (f3(), 3, catalogue(f3().group(3))?),
        (f9(), 2, catalogue(f9().group(2))?.into_iter().filter(frob).collect()),
    ])
}

fn say(ok: bool, msg: String) -> bool {
    if !ok {
        println!("    {msg}");
    }
    ok
}

/// `<chi, 1>_H` summed element by element.
fn multiplicity_by_elements(g: &MatrixGroup, h: &[glfq::mat::Matrix], chi: &ClassFunction) -> Option<i64> {
    let total = h.iter().fold(Cyclotomic::zero(), |acc, x| acc + chi.value(g.class_of_member(x)).clone());
    total.scale(Rational64::new(1, h.len() as i64)).to_integer()
}

/// `chi(sigma(g)^-1) = chi(g)` on every element.
fn tau_invariant_by_elements(g: &MatrixGroup, sigma: &InvolutionSpec, chi: &ClassFunction) -> bool {
    let f = g.field();
    g.elements().iter().all(|x| {
        let y = sigma.apply(x).inverse(f).expect("invertible");
        chi.value(g.class_of_member(&y)) == chi.value(g.class_of_member(x))
    })
}

fn theorem_a_sweep() -> Result<bool> {
    let mut ok = true;
    let mut checked = 0;
    for (fam, n, sigmas) in sweep()? {
        let g = fam.group(n);
        let table = fam.table(n);
        for s in &sigmas {
            let report = verify_theorem_a(g, table, s)?;
            ok &= say(report.verdict.passed(), format!("{} {:?}: {} violations", g.spec(), s.kind(), report.violations.len()));
            let h = s.fixed_subgroup(g);
            for row in &report.rows {
                let chi = table.character(row.char_index);
                let direct = multiplicity_by_elements(g, h.elements(), chi);
                ok &= say(direct == Some(row.multiplicity), format!("{} {:?} chi_{}: multiplicity mismatch", g.spec(), s.kind(), row.char_index));
                if row.multiplicity > 0 {
                    ok &= say(tau_invariant_by_elements(g, s, chi), format!("{} {:?} chi_{}: distinguished, not invariant", g.spec(), s.kind(), row.char_index));
                }
                checked += 1;
            }
        }
    }
    println!("    {checked} (group, involution, irreducible) triples");
    Ok(ok)
}

fn cuspidal_counts() -> Result<bool> {
    let mut ok = true;
    for (fam, n, expected) in [(f3(), 1, 2), (f3(), 2, 3), (f5(), 2, 10), (f3(), 3, 8)] {
        let found = cuspidal_indices(fam, n)?.len() as u64;
        let q = fam.spec(1).q;
        ok &= say(found == expected && d_count(n as u32, q) == expected, format!("n={n} q={q}: found {found}, expected {expected}"));
    }
    Ok(ok)
}

fn table_integrity() -> Result<bool> {
    let mut ok = true;
    for (fam, n, _) in sweep()? {
        let g = fam.group(n);
        let table = fam.table(n);
        ok &= say(table.verify().is_ok(), format!("{}: orthogonality", g.spec()));
        ok &= say(table.len() == g.num_classes(), format!("{}: {} irreducibles, {} classes", g.spec(), table.len(), g.num_classes()));
        let squares: u64 = table.degrees().iter().map(|d| d * d).sum();
        ok &= say(squares == g.order(), format!("{}: sum of squared degrees {squares}", g.spec()));
        let reread = CharacterTable::from_csv(ClassInfo::of_group(g), &table.to_csv())?;
        ok &= say(reread.characters() == table.characters(), format!("{}: csv round trip", g.spec()));
    }
    Ok(ok)
}

fn mackey() -> Result<bool> {
    let mut ok = true;
    for n in [2, 3] {
        let fam = f3();
        for s in catalogue(fam.group(n))? {
            let r = verify_mackey(fam, &Composition::all(n), &s)?;
            ok &= say(r.verdict.passed(), format!("GL_{n}(F_3) {:?}: {} violations", s.kind(), r.violations.len()));
            ok &= say(r.rows.iter().all(|row| row.lhs == row.rhs), "lhs != rhs".into());
        }
    }
    Ok(ok)
}

fn whittaker() -> Result<bool> {
    let mut ok = true;
    let mut cases: Vec<(&GlFamily, usize, usize, usize)> = Vec::new();
    for (fam, ks) in [(f3(), vec![2, 3]), (f5(), vec![2])] {
        for rho in cuspidal_indices(fam, 1)? {
            for &k in &ks {
                cases.push((fam, 1, rho, k));
            }
        }
    }
    for rho in cuspidal_indices(f3(), 2)? {
        cases.push((f3(), 2, rho, 1));
    }
    for (fam, d, rho, k) in cases {
        for a in fam.field().units() {
            let dim = induced_power_whittaker(fam, d, rho, k, a)?;
            ok &= say(dim == 1, format!("q={} d={d} rho={rho} k={k} multiplier={}: dimension {dim}", fam.spec(1).q, a.0));
        }
    }
    Ok(ok)
}

fn psh() -> Result<bool> {
    let r = psh_verify(f3(), 3)?;
    let mut ok = r.max_degree == 3;
    for c in &r.checks {
        ok &= say(c.passed, format!("{}: {:?}", c.name, c.witnesses));
    }
    ok &= say(r.squares.len() == cuspidal_indices(f3(), 1)?.len(), "missing rho^2 splittings".into());
    for sq in &r.squares {
        ok &= say(sq.constituents.len() == 2 && sq.constituents.iter().all(|c| c.multiplicity == 1), format!("rho_{}^2", sq.rho));
    }
    Ok(ok && r.passed)
}

fn cuspidal_support() -> Result<bool> {
    let mut ok = true;
    for n in [2, 3] {
        let scan = SupportScan::new(f3(), n)?;
        for chi in 0..f3().table(n).len() {
            let count = scan.supports_of(chi).len();
            ok &= say(count == 1, format!("GL_{n}(F_3) chi_{chi}: {count} supports"));
        }
    }
    Ok(ok)
}

fn geometric_lemma() -> Result<bool> {
    let mut ok = true;
    for n in [2, 3] {
        let g = f3().group(n);
        for s in catalogue(g)? {
            for c in Composition::all(n) {
                let r = verify_geometric_lemma(g, &c, &s)?;
                let all = r.cosets.iter().all(|x| x.q_twisted && x.involutive && x.preserved && x.maximal);
                ok &= say(r.verdict.passed() && all, format!("GL_{n}(F_3) {:?} {:?}: {:?}", s.kind(), c.sizes(), r.violations));
            }
        }
    }
    Ok(ok)
}

fn tori() -> Result<bool> {
    let mut ok = true;
    for (n, q) in [(1, 3), (2, 3), (2, 5), (3, 3)] {
        let c = anisotropic_gp_count(n, q)?;
        ok &= say(c == d_count(n, q), format!("n={n} q={q}: {c} general-position orbits"));
    }
    for q in [3u64, 5] {
        let an = TorusDatum::new(vec![2], q)?;
        let split = TorusDatum::new(vec![1, 1], q)?;
        let split_chars = split.characters()?;
        let m = (q * q - 1) as u128;
        for c in an.characters()? {
            let fr_invariant = c.exponents[0] * q as u128 % m == c.exponents[0];
            let mut conj = false;
            for s in &split_chars {
                conj |= geometrically_conjugate(&an, &c, &split, s, 4)?;
            }
            ok &= say(conj == fr_invariant, format!("q={q} e={}", c.exponents[0]));
        }
    }
    for n in 1..=3 {
        let r = scalars_bijection(n, 3, 2)?;
        ok &= say(r.full_match && r.pairs.len() == list_tori(n, 9).len(), format!("scalars n={n}"));
    }
    Ok(ok)
}

fn transpose_sanity() -> Result<bool> {
    let mut ok = true;
    for (fam, n) in [(f3(), 2), (f5(), 2), (f3(), 3)] {
        let g = fam.group(n);
        let ti = catalogue(g)?
            .into_iter()
            .find(|s| s.kind() == InvolutionKind::TransposeInverse && s.parameter().is_identity())
            .expect("TransposeInverse(I) in catalogue");
        for (i, chi) in fam.table(n).characters().iter().enumerate() {
            ok &= say(twisted_dual(chi, &ti, g) == *chi, format!("{} chi_{i} moved", g.spec()));
        }
        let bad = g.elements().iter().filter(|x| g.class_of_member(x) != g.class_of_member(&x.transpose())).count();
        ok &= say(bad == 0, format!("{}: {bad} elements not conjugate to their transpose", g.spec()));
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<bool>); 10] = [
        ("distinguished implies tau-invariant", theorem_a_sweep),
        ("cuspidal counts", cuspidal_counts),
        ("character table integrity", table_integrity),
        ("Mackey identity", mackey),
        ("Whittaker uniqueness", whittaker),
        ("PSH axioms", psh),
        ("unique cuspidal support", cuspidal_support),
        ("geometric lemma", geometric_lemma),
        ("torus combinatorics", tori),
        ("transpose-inverse sanity", transpose_sanity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(Ok(ok)) => ok,
            Ok(Err(e)) => {
                println!("    error: {e}");
                false
            }
            Err(_) => false,
        };
        failed += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
