//! Structural invariants over many inputs: every exact factorization of S3
//! and S4, bismash axioms, orbit-stabilizer, and Frobenius reciprocity on
//! random characters.

use hopf_clifford::groups::{
    derive_actions, group_from_permutations, is_exact_factorization, orbit_and_stabilizer,
    verify_matched_pair, Composition, FiniteGroup, MatchedPair, Permutation, Subgroup,
    DEFAULT_SIZE_CAP,
};
use hopf_clifford::hopf::{bismash, verify_hopf_axioms, HopfAlgebraData};
use hopf_clifford::linalg::{Vector, C64};
use hopf_clifford::repcalc::{compose, decompose, DEFAULT_SEED};
use hopf_clifford::scenario::{build, Built, Scenario};
use proptest::prelude::*;
use std::sync::OnceLock;

fn symmetric(n: usize) -> FiniteGroup {
    let cycle: String = format!("({})", (1..=n).map(|i| i.to_string()).collect::<String>());
    let gens = [Permutation::parse_cycles(&cycle, n).unwrap(), Permutation::parse_cycles("(12)", n).unwrap()];
    group_from_permutations(&gens, DEFAULT_SIZE_CAP, Composition::RightToLeft)
        .unwrap()
        .group
}

fn factorizations(sigma: &FiniteGroup) -> Vec<(Subgroup, Subgroup)> {
    let subs = sigma.two_generated_subgroups();
    let mut out = Vec::new();
    for f in &subs {
        for g in &subs {
            if f.order() > 1 && g.order() > 1 && is_exact_factorization(sigma, f, g) {
                out.push((f.clone(), g.clone()));
            }
        }
    }
    out
}

fn check_pair(mp: &MatchedPair) {
    assert!(verify_matched_pair(mp).passed());
    let s = &mp.sigma;
    // g·x = (g▷x)(g◁x) recovers every product.
    for g in 0..mp.g_order() {
        for x in 0..mp.f_order() {
            let lhs = s.mul(mp.g_elem(g), mp.f_elem(x));
            let rhs = s.mul(mp.f_elem(mp.lact[g][x]), mp.g_elem(mp.ract[g][x]));
            assert_eq!(lhs, rhs);
        }
    }
    for g in 0..mp.g_order() {
        let (orbit, h) = orbit_and_stabilizer(mp, g).unwrap();
        assert_eq!(orbit.len() * h.order(), mp.f_order());
    }
}

#[test]
fn every_factorization_of_s3_and_s4_is_a_matched_pair() {
    let mut count = 0;
    for n in [3, 4] {
        let sigma = symmetric(n);
        for (f, g) in factorizations(&sigma) {
            let mp = derive_actions(&sigma, &f, &g).unwrap();
            check_pair(&mp);
            count += 1;
        }
    }
    // S3 = C3·C2 both ways; S4 has more than a dozen.
    assert!(count > 12, "{count}");
}

#[test]
fn bismash_products_of_s3_and_some_of_s4_satisfy_the_axioms() {
    for n in [3, 4] {
        let sigma = symmetric(n);
        let pairs = factorizations(&sigma);
        let take = if n == 3 { pairs.len() } else { 6 };
        for (f, g) in pairs.into_iter().take(take) {
            let mp = derive_actions(&sigma, &f, &g).unwrap();
            let (a, inc, kf) = bismash(&mp).unwrap();
            let report = verify_hopf_axioms(&a);
            assert!(report.passed(), "{:?}", report);
            assert!(inc.residual(&a) < 1e-8);
            assert_eq!(kf.pi.target.dim(), f.order());
        }
    }
}

fn s4() -> &'static Built {
    static BUILT: OnceLock<Built> = OnceLock::new();
    BUILT.get_or_init(|| build(Scenario::builtin("s4_counterexample").unwrap(), DEFAULT_SEED).unwrap())
}

fn vector(coeffs: &[f64]) -> Vector {
    Vector::from_iterator(coeffs.len(), coeffs.iter().map(|&x| C64::new(x, 0.0)))
}

fn close(a: &Vector, b: &Vector) -> bool {
    (a - b).norm() < 1e-8 * (1.0 + a.norm())
}

fn antipode_reverses(a: &HopfAlgebraData, x: &Vector, y: &Vector) -> bool {
    close(&a.apply_antipode(&a.mul(x, y)), &a.mul(&a.apply_antipode(y), &a.apply_antipode(x)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn comultiplication_is_multiplicative(
        x in prop::collection::vec(-2.0f64..2.0, 24),
        y in prop::collection::vec(-2.0f64..2.0, 24),
    ) {
        let a = &s4().ext.a;
        let (x, y) = (vector(&x), vector(&y));
        let lhs = a.comul(&a.mul(&x, &y));
        let rhs = a.tensor_mul(&a.comul(&x), &a.comul(&y));
        prop_assert!((&lhs - &rhs).norm() < 1e-8 * (1.0 + lhs.norm()));
        prop_assert!(antipode_reverses(a, &x, &y));
        prop_assert!(close(&a.apply_antipode(&a.apply_antipode(&x)), &x));
    }

    #[test]
    fn frobenius_reciprocity_on_random_characters(
        b_mults in prop::collection::vec(0usize..4, 4),
        a_mults in prop::collection::vec(0usize..4, 5),
    ) {
        let built = s4();
        let e = &built.ext;
        let alpha = compose(&b_mults, &e.dec_b);
        let chi = compose(&a_mults, &e.dec_a);
        let up = decompose(&e.induce(&alpha).unwrap(), &e.dec_a).unwrap();
        let down = decompose(&e.restrict(&chi), &e.dec_b).unwrap();
        let lhs: usize = up.iter().zip(&a_mults).map(|(u, m)| u * m).sum();
        let rhs: usize = down.iter().zip(&b_mults).map(|(d, m)| d * m).sum();
        prop_assert_eq!(lhs, rhs);
        // Degrees scale by the index.
        prop_assert!((e.induce(&alpha).unwrap().degree_real() - 6.0 * alpha.degree_real()).abs() < 1e-6);
    }
}
