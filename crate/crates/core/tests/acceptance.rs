//! Acceptance gate: one pass/fail line per criterion, all criteria asserted
//! at the end so every line is printed even when one fails.

use std::time::Instant;

use glnstar::error::Error;
use glnstar::general::{builtin_unnormalized_spec, consistency_check, twist_family_check};
use glnstar::realization::{build_realization, gln_negative_control, verify_duality, verify_gln, verify_jacobi, verify_zl_relations, Variant};
use glnstar::star::{big_d, big_d_tilde, big_j_closed, big_j_ode, big_k, big_k_inv, max_abs_diff, CMatrix, Sampler, StarParams};
use glnstar::suites::{run_suite, SuiteConfig};
use glnstar::tensor::{coassoc_check, coassoc_negative_control, CoproductVariant};
use glnstar::twist::{cocycle_check, cocycle_negative_control, realization_from_twist, twist_negative_control, twisted_coproduct_check, TwistSpec, TwistVariant};
use glnstar::coeff::GRat;
use num_complex::Complex64;

struct Gate {
    lines: Vec<(String, bool)>,
}

impl Gate {
    fn record(&mut self, idx: usize, description: &str, pass: bool, detail: String) {
        println!(
            "criterion {idx:02}: {} — {description} ({detail})",
            if pass { "PASS" } else { "FAIL" }
        );
        self.lines.push((format!("{idx:02} {description}"), pass));
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate { lines: Vec::new() };

    // 1. linear realizations generate gl(n) for n = 1, 2, 3, within 10 s
    let started = Instant::now();
    let mut pass = true;
    for n in 1..=3u8 {
        for variant in [Variant::First, Variant::Second, Variant::DualOfFirst, Variant::DualOfSecond] {
            let set = build_realization(n, variant).unwrap();
            pass &= verify_gln(&set).unwrap().all_pass();
            pass &= verify_jacobi(&set).unwrap().all_pass();
        }
    }
    let elapsed = started.elapsed();
    pass &= elapsed.as_secs_f64() < 10.0;
    gate.record(1, "gl(n) brackets and Jacobi, four realizations, n <= 3", pass, format!("{elapsed:.2?}, budget 10 s"));

    // 2. duality: coordinate and dual-coordinate families commute, n <= 3
    let mut pass = true;
    for n in 1..=3u8 {
        pass &= verify_duality(n).unwrap().all_pass();
        pass &= verify_zl_relations(n).unwrap().all_pass();
    }
    gate.record(2, "duality and auxiliary-generator relations, n <= 3", pass, "exact".into());

    // 3–6. numeric composition laws: 100 samples at n = 4, u = 0.3
    let params = StarParams::new(0.3);
    let mut sampler = Sampler::new(4, params.u, 42);
    let (mut assoc, mut ode, mut kinv, mut group) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let eye = CMatrix::identity(4, 4);
    let u = Complex64::new(params.u, 0.0);
    for _ in 0..100 {
        let k = sampler.next_matrix();
        let q = sampler.next_matrix();
        let r = sampler.next_matrix();
        assoc = assoc
            .max(max_abs_diff(
                &big_d(&big_d(&k, &q, &params), &r, &params),
                &big_d(&k, &big_d(&q, &r, &params), &params),
            ))
            .max(max_abs_diff(
                &big_d_tilde(&big_d_tilde(&k, &q, &params), &r, &params),
                &big_d_tilde(&k, &big_d_tilde(&q, &r, &params), &params),
            ));
        ode = ode.max(max_abs_diff(
            &big_j_closed(1.0, &k, &q, &params),
            &big_j_ode(1.0, &k, &q, &params),
        ));
        kinv = kinv.max(max_abs_diff(&big_k_inv(&big_k(&k, &params), &params).unwrap(), &k));
        group = group.max(max_abs_diff(
            &(&eye + &big_d(&k, &q, &params) * u),
            &((&eye + &k * u) * (&eye + &q * u)),
        ));
    }
    gate.record(3, "star-product associativity, both families, 100 samples, n = 4, u = 0.3", assoc < 1e-12, format!("worst {assoc:.3e}, tol 1e-12"));
    gate.record(4, "closed-form flow vs RK4 (1000 steps), 100 samples, n = 4", ode < 1e-8, format!("worst {ode:.3e}, tol 1e-8"));
    gate.record(5, "momentum-map inverse round trip, 100 samples, n = 4", kinv < 1e-12, format!("worst {kinv:.3e}, tol 1e-12"));
    gate.record(6, "group law 1 + uD = (1 + uk)(1 + uq), 100 samples, n = 4", group < 1e-13, format!("worst {group:.3e}, tol 1e-13"));

    // 7. coassociativity of both coproducts, exact, n <= 3
    let mut pass = true;
    for n in 1..=3u8 {
        pass &= coassoc_check(n, CoproductVariant::Delta).unwrap().all_pass();
        pass &= coassoc_check(n, CoproductVariant::DeltaTilde).unwrap().all_pass();
    }
    gate.record(7, "coassociativity of both coproducts, n <= 3", pass, "exact".into());

    // 8. twists reproduce the realizations (n <= 3) and untwist the
    //    coproducts (degree <= 3, n <= 2), exactly
    let mut pass = true;
    for variant in [TwistVariant::F1, TwistVariant::F2] {
        let spec = TwistSpec::new(variant, 4);
        for n in 1..=3u8 {
            pass &= realization_from_twist(&spec, n).unwrap().all_pass();
        }
        for n in 1..=2u8 {
            pass &= twisted_coproduct_check(&spec, n, 3).unwrap().all_pass();
        }
    }
    gate.record(8, "twists reproduce realizations (n <= 3) and coproducts (degree <= 3, n <= 2)", pass, "exact".into());

    // 9. Drinfeld cocycle condition and its factorization, degree <= 3,
    //    n <= 2, within 120 s
    let started = Instant::now();
    let mut pass = true;
    for n in 1..=2u8 {
        let spec = TwistSpec::new(TwistVariant::F1, 6);
        pass &= cocycle_check(&spec, n, 3).unwrap().all_pass();
    }
    let elapsed = started.elapsed();
    pass &= elapsed.as_secs_f64() < 120.0;
    gate.record(9, "cocycle condition and factorization, degree <= 3, n <= 2", pass, format!("{elapsed:.2?}, budget 120 s"));

    // 10. conjugated-frame suite over the identity and three further specs
    let config = SuiteConfig::default();
    let general = run_suite("general", &config).unwrap();
    let family = run_suite("family", &config).unwrap();
    let pass = general.all_pass && family.all_pass;
    gate.record(
        10,
        "conjugated frames: automorphism, inverse momentum map, consistency, twist family",
        pass,
        format!("{} + {} checks over 4 specs", general.checks.len(), family.checks.len()),
    );

    // 11. negative controls: documented single mutations must be detected
    let mut pass = true;
    pass &= !gln_negative_control(2).unwrap().all_pass();
    pass &= coassoc_negative_control(2).unwrap().all_pass();
    pass &= twist_negative_control(2, 2).unwrap().all_pass();
    pass &= cocycle_negative_control(1, 2).unwrap().all_pass();
    let bad = builtin_unnormalized_spec(3);
    pass &= !consistency_check(&bad).unwrap().all_pass();
    pass &= matches!(
        twist_family_check(&bad, &[GRat::zero(), GRat::one()], 1),
        Err(Error::InvalidSpec(_))
    );
    gate.record(11, "negative controls detect their documented mutations", pass, "6 controls".into());

    let failures: Vec<&str> = gate
        .lines
        .iter()
        .filter(|(_, p)| !p)
        .map(|(l, _)| l.as_str())
        .collect();
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
