//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Tolerances are zero everywhere; all arithmetic is exact.

use km3::arith::{
    factorize, hilbert_symbol, isotropy_brute_force, rank4_represents_zero, Place,
};
use km3::eisenstein::EisensteinInt;
use km3::genus::{genus_count, is_isometric, lattice_minimum, same_genus};
use km3::linalg::{Mat, Rat};
use km3::nslat::{self, IntLattice, PolCase};
use km3::quat::{self, CountStatus};
use km3::selftest::{Fault, Rng};
use km3::vinberg::{self, ConeVector, Letter};
use std::process::Command;
use std::time::Instant;

fn km3_output(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_km3"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn table_lines(parity: &str) -> Vec<(i64, usize, usize)> {
    let (csv, code) = km3_output(&["tables", "--parity", parity, "--kmax", "18", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,lx_sq,num_components,genus_size"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn criterion_01_table_parity_0() {
    let start = Instant::now();
    let rows = table_lines("0");
    let num: Vec<usize> = rows.iter().map(|r| r.1).collect();
    let gen: Vec<usize> = rows.iter().map(|r| r.2).collect();
    assert_eq!(num, vec![1, 1, 2, 1, 2, 2, 2, 2, 3, 2, 3, 3, 3, 3, 4, 2, 4, 5]);
    assert_eq!(gen, vec![1, 1, 1, 1, 2, 1, 2, 2, 2, 1, 3, 1, 3, 2, 2, 2, 4, 1]);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    println!("criterion 01 (first table, k = 1..18): PASS in {elapsed:?}");
}

#[test]
fn criterion_02_table_parity_2() {
    let rows = table_lines("2");
    let num: Vec<usize> = rows.iter().map(|r| r.1).collect();
    let gen: Vec<usize> = rows.iter().map(|r| r.2).collect();
    assert_eq!(num, vec![1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 2, 5, 4, 5, 3, 7, 3, 5]);
    assert_eq!(gen, vec![1, 1, 1, 2, 1, 2, 1, 3, 2, 3, 2, 3, 2, 4, 2, 5, 2, 4]);
    println!("criterion 02 (second table, k = 1..18): PASS");
}

#[test]
fn criterion_03_minus_84_worked_example() {
    let reps = vinberg::enumerate_components(-84).unwrap();
    assert_eq!(reps.len(), 3);
    let t1_expected = IntLattice::new(Mat::from_rows(vec![
        vec![4, 2, -2],
        vec![2, 6, -3],
        vec![-2, -3, 6],
    ]));
    let ns_neg = nslat::ns_lattice(-84).unwrap().negated();
    let mut with_min_4 = 0;
    let mut with_min_2 = 0;
    let mut complements = Vec::new();
    for rep in &reps {
        let t = vinberg::orthogonal_complement(rep).unwrap();
        match lattice_minimum(&t.gram) {
            4 => {
                assert!(is_isometric(&t, &t1_expected).unwrap());
                with_min_4 += 1;
            }
            2 => {
                assert!(is_isometric(&t, &ns_neg).unwrap());
                with_min_2 += 1;
            }
            other => panic!("unexpected minimum {other}"),
        }
        complements.push(t);
    }
    assert_eq!((with_min_4, with_min_2), (1, 2));
    for a in &complements {
        for b in &complements {
            assert!(same_genus(a, b).unwrap());
        }
    }
    println!("criterion 03 (square -84 example: 3 components, minima 4/2/2, one genus): PASS");
}

#[test]
fn criterion_04_word_identities() {
    let fault = Fault::default();
    for g in km3::selftest::groups() {
        if g.name == "word-identities" {
            (g.run)(&fault).expect("word identities hold");
        }
    }
    // Gram preservation of every generator, stated directly.
    for i in 1..=5u8 {
        assert!(vinberg::compose_word(&[Letter::R(i)]).preserves_gram());
    }
    for t in vinberg::tau_generators() {
        assert!(t.preserves_gram());
    }
    println!("criterion 04 (all 14 word identities, Gram preservation): PASS");
}

#[test]
fn criterion_05_order_discriminants() {
    for d in (-50..=50).filter(|&d| d != 0 && quat::is_admissible(d)) {
        let order = quat::maximal_order(d).unwrap();
        let (finite, _) = quat::algebra_discriminant(d).unwrap();
        assert_eq!(order.trace_gram.det(), -finite * finite, "d = {d}");
    }
    let mut rng = Rng::new(9090);
    let admissible: Vec<i64> = (-30..=30)
        .filter(|&d| d != 0 && quat::is_admissible(d))
        .collect();
    for _ in 0..30 {
        let d = admissible[(rng.next_u64() % admissible.len() as u64) as usize];
        let mu = loop {
            let m = EisensteinInt::new(rng.int(-6, 6), rng.int(-6, 6));
            if !m.is_zero() {
                break m;
            }
        };
        let order = quat::order_mu(d, mu).unwrap();
        let (finite, _) = quat::algebra_discriminant(d).unwrap();
        let disc = mu.norm() * finite;
        assert_eq!(order.trace_gram.det(), -disc * disc, "d = {d}, mu = {mu}");
        assert_eq!(order.reduced_discriminant, disc);
    }
    println!("criterion 05 (order discriminants, exact): PASS");
}

#[test]
fn criterion_06_endomorphism_relations() {
    let mut rng = Rng::new(6161);
    let ident = Mat::<Rat>::identity(4);
    let scalar = |c: Rat| ident.map(|x| x * c);
    let mut done = 0;
    while done < 50 {
        let case = if rng.next_u64() % 2 == 0 { PolCase::I } else { PolCase::II };
        let n = [rng.int(-6, 6), rng.int(-6, 6), rng.int(-6, 6), rng.int(-6, 6)];
        let Ok(pc) = nslat::polarization_class(case, n) else {
            continue;
        };
        let data = nslat::endo_matrices(&pc).unwrap();
        assert!(data.relations_verified, "case {case:?}, n = {n:?}");
        assert_eq!(data.r.mul(&data.r), scalar(Rat::from_integer(-3)));
        assert_eq!(data.r.mul(&data.phi), data.phi.mul(&data.r).neg());
        let target = match case {
            PolCase::I => Rat::new(pc.lx_sq, 2),
            PolCase::II => Rat::new(pc.lx_sq, 6),
        };
        assert_eq!(data.phi.mul(&data.phi), scalar(target));
        if let Some(psi) = &data.psi {
            assert_eq!(psi.mul(psi), scalar(Rat::new(pc.lx_sq - 2, 6)));
        }
        done += 1;
    }
    println!("criterion 06 (endomorphism relations on 50 random classes, exact): PASS");
}

#[test]
fn criterion_07_principal_polarization_dual_path() {
    for ell in (1..=120).filter(|&e| km3::valid_ell(e)) {
        assert_eq!(
            nslat::has_principal_polarization(ell).unwrap(),
            nslat::pp_local_oracle(ell).unwrap(),
            "ell = {ell}"
        );
        if ell <= 60 {
            assert_eq!(
                nslat::has_principal_polarization(ell).unwrap(),
                nslat::pp_vector_search(ell, 12).unwrap(),
                "ell = {ell}"
            );
        }
    }
    println!("criterion 07 (dual-path principal polarization, ell <= 120): PASS");
}

#[test]
fn criterion_08_counting_consistency() {
    for ell in (1..=200).filter(|&e| km3::valid_ell(e)) {
        let c = quat::kummer_structure_count(ell).unwrap();
        if c.status != CountStatus::Exact {
            continue;
        }
        if let Some(closed) = quat::closed_form_count(&c) {
            assert_eq!(c.n_ks, Some(closed), "ell = {ell}");
        }
    }
    assert_eq!(quat::kummer_structure_count(20).unwrap().n_ks, Some(2));
    assert_eq!(quat::kummer_structure_count(12).unwrap().n_ks, Some(1));
    println!("criterion 08 (structure counts vs closed form, ell <= 200; spot values 20 -> 2, 12 -> 1): PASS");
}

#[test]
fn criterion_09_discriminant_groups() {
    for ell in (-120..=120).filter(|&e| km3::valid_ell(e)) {
        let f = nslat::discriminant_form(&nslat::ns_lattice(ell).unwrap()).unwrap();
        assert_eq!(f.group_order(), ell.abs(), "ell = {ell}");
        if ell.rem_euclid(6) == 2 {
            assert_eq!(f.invariant_factors, vec![ell.abs()], "ell = {ell}");
        }
        if ell > 0 && ell % 9 == 0 {
            assert_eq!(f.invariant_factors, vec![3, ell / 3], "ell = {ell}");
        }
    }
    println!("criterion 09 (discriminant groups on [-120, 120]): PASS");
}

#[test]
fn criterion_10_symbols_and_isotropy_oracle() {
    let mut rng = Rng::new(1010);
    for _ in 0..200 {
        let a = rng.nonzero(-60, 60);
        let b = rng.nonzero(-60, 60);
        let (ra, rb) = (Rat::from_integer(a), Rat::from_integer(b));
        let mut prod = hilbert_symbol(ra, rb, Place::REAL);
        let mut primes = vec![2i64];
        for f in [factorize(a).unwrap(), factorize(b).unwrap()] {
            primes.extend(f.primes());
        }
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            prod *= hilbert_symbol(ra, rb, Place::finite(p).unwrap());
        }
        assert_eq!(prod, 1, "product formula at ({a}, {b})");
    }
    for _ in 0..50 {
        let diag = [
            rng.nonzero(-20, 20),
            rng.nonzero(-20, 20),
            rng.nonzero(-20, 20),
            rng.nonzero(-20, 20),
        ];
        let mut places = vec![-1i64, 2, 3, 5, 7];
        for &c in &diag {
            for p in factorize(c).unwrap().primes() {
                if !places.contains(&p) {
                    places.push(p);
                }
            }
        }
        for p in places {
            let place = Place::new(p).unwrap();
            assert_eq!(
                rank4_represents_zero(&diag.map(Rat::from_integer), place),
                isotropy_brute_force(&diag, place).unwrap(),
                "diag = {diag:?}, p = {p}"
            );
        }
    }
    println!("criterion 10 (Hilbert product formula x200, isotropy vs brute force x50): PASS");
}
