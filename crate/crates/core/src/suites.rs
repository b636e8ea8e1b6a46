//! Named verification suites with machine-readable, deterministic reports,
//! plus the anchor registry behind `explain`.
//!
//! A suite bundles the checks of one module into a `SuiteReport`. Reports
//! are deterministic for a given `(config, seed)`: timing is deliberately
//! not serialized (callers may measure and log it separately).

use serde::{Deserialize, Serialize};

use crate::coeff::GRat;
use crate::error::Error;
use crate::general::{
    adjoint_transform, builtin_specs, builtin_unnormalized_spec, consistency_check,
    coproduct_prime_coassoc, d_prime_numeric_check, lambda, lambda_inverse,
    momentum_subst, twist_family_check, verify_general, verify_general_duality,
};
use crate::realization::{
    build_realization, gln_negative_control, verify_duality, verify_gln, verify_jacobi,
    verify_zl_relations, Variant,
};
use crate::report::VerificationReport;
use crate::star::{
    big_d, big_d_indirect, big_d_tilde, big_d_tilde_indirect, big_j_closed, big_j_ode,
    big_j_tilde_closed, big_j_tilde_ode, big_k, big_k_inv, max_abs_diff, CMatrix,
    Sampler, StarParams,
};
use crate::tensor::{
    coassoc_check, coassoc_negative_control, flip_duality_check, z_multiplicativity_check,
    CoproductVariant,
};
use crate::twist::{
    cocycle_check, cocycle_negative_control, ln_z_primitive_check,
    normal_ordered_twist_check, realization_from_twist, twist_negative_control,
    twisted_coproduct_check, TwistSpec, TwistVariant,
};
use crate::weyl::WeylElement;

pub const SCHEMA_VERSION: u32 = 1;

/// All suite names, in canonical report order.
pub const SUITE_NAMES: &[&str] = &[
    "gln", "duality", "star", "coproduct", "twist", "cocycle", "general", "family",
];

/// Knobs shared by every suite; exact suites ignore `u`, `tol` and
/// `samples`, numeric suites ignore `max_degree` and `order`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_n")]
    pub n: u8,
    #[serde(default = "default_u")]
    pub u: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_degree")]
    pub max_degree: u32,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_n() -> u8 {
    2
}
fn default_u() -> f64 {
    0.3
}
fn default_seed() -> u64 {
    42
}
fn default_tol() -> f64 {
    1e-12
}
fn default_max_degree() -> u32 {
    2
}
fn default_order() -> u32 {
    3
}
fn default_samples() -> usize {
    100
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: default_n(),
            u: default_u(),
            seed: default_seed(),
            tol: default_tol(),
            max_degree: default_max_degree(),
            order: default_order(),
            samples: default_samples(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n == 0 || self.n > 6 {
            return Err(Error::InvalidSpec("n must lie in 1..=6".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidSpec("tol must be positive".into()));
        }
        if self.max_degree > 4 {
            return Err(Error::InvalidSpec(
                "max degree above 4 exceeds the desk-scale guard".into(),
            ));
        }
        if self.order == 0 {
            return Err(Error::InvalidSpec("order must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub id: String,
    pub detail: String,
    pub anchor: String,
    pub residual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub schema_version: u32,
    /// Engine version stamp; fixed for a given build, so reports stay
    /// byte-identical for identical `(config, seed)` on the same build.
    pub version: String,
    pub suite: String,
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, config: &SuiteConfig) -> Self {
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            suite: suite.to_string(),
            config: config.clone(),
            checks: Vec::new(),
            all_pass: true,
        }
    }

    fn push(&mut self, id: &str, detail: String, residual: String, pass: bool) {
        self.all_pass &= pass;
        self.checks.push(CheckResult {
            id: id.to_string(),
            detail,
            anchor: explain(id).unwrap_or("").to_string(),
            residual,
            pass,
        });
    }

    fn absorb(&mut self, report: &VerificationReport) {
        for check in &report.checks {
            self.push(
                &check.relation,
                check.indices.clone(),
                check.residual.clone(),
                check.pass,
            );
        }
    }
}

/// The anchor registry: maps a check id to the section and formula it
/// verifies. Unknown ids yield `None`.
pub fn explain(id: &str) -> Option<&'static str> {
    ANCHORS.iter().find(|(k, _)| *k == id).map(|(_, v)| *v)
}

pub fn anchor_ids() -> impl Iterator<Item = &'static str> {
    ANCHORS.iter().map(|(k, _)| *k)
}

static ANCHORS: &[(&str, &str)] = &[
    ("gln-bracket", "sec. 2: [xh[mu,nu], xh[lambda,rho]] = i u (d(mu,rho) xh[lambda,nu] - d(lambda,nu) xh[mu,rho])"),
    ("phi-factorization", "sec. 2: xh[mu,nu] = x[alpha,beta] phi[alpha,beta][mu,nu](p, u)"),
    ("action-on-unit", "sec. 2: xh[mu,nu] acting on the unit polynomial returns x[mu,nu]"),
    ("jacobi", "sec. 2: Jacobi identity for the bracket of the realized generators"),
    ("structure-antisymmetry", "sec. 2: antisymmetry of the structure constants under (mu,nu) <-> (lambda,rho)"),
    ("cross-commutator", "sec. 5: [xh[mu,nu], yh[lambda,rho]] = 0"),
    ("yh-flip-u-is-second-variant", "sec. 5: yh arises from the second realization under u -> -u"),
    ("yh-flip-u-differs-from-xh", "sec. 5: the dual family is distinct from the first family"),
    ("Z-xh", "sec. 2: [Z[mu,nu], xh[lambda,rho]] = -i u d(mu,lambda) Z[rho,nu]"),
    ("Z-yh", "sec. 5: [Z[mu,nu], yh[lambda,rho]] = -i u d(rho,nu) Z[mu,lambda]"),
    ("L-L", "sec. 2: [L[mu,nu], L[lambda,rho]] = i (d(mu,rho) L[lambda,nu] - d(lambda,nu) L[mu,rho])"),
    ("Lt-Lt", "sec. 5: the transposed generators close under the opposite-sign bracket"),
    ("gln-negative-control", "control: a transposed-index mutation of the realization must break the bracket"),
    ("transposed-index-pattern", "control: a transposed-index mutation of the realization must break the bracket"),
    ("D-assoc", "sec. 3: the star product is associative, D(D(k,q),r) = D(k,D(q,r))"),
    ("Dt-assoc", "sec. 5: the dual composition law is associative"),
    ("D-indirect", "sec. 3: D(k,q,u) = J(K^{-1}(k), q, u) at t = 1"),
    ("Dt-indirect", "sec. 5: the dual composition law through the dual flow"),
    ("J-closed-vs-ode", "sec. 3: closed-form J(t,k,q,u) solves dJ/dt = k(1 + uJ)"),
    ("Jt-closed-vs-ode", "sec. 5: closed-form dual flow solves dJ/dt = (1 + uJ)k"),
    ("K-inverse", "sec. 3: K^{-1}(K(k)) = k on the principal branch"),
    ("group-law", "sec. 4: 1 + uD(k,q) = (1 + uk)(1 + uq), the momentum-space image of Delta Z = Z tensor Z"),
    ("star-singular-branch", "sec. 3: spectra touching the branch cut of ln(1 + uk) are rejected, not silently wrapped"),
    ("coassociativity", "sec. 4: this coproduct is coassociative"),
    ("coassociativity-negative-control", "control: transposing the deformation term must break coassociativity"),
    ("Z-multiplicativity", "sec. 4: Delta Z[mu,nu] = Z[mu,alpha] tensor Z[alpha,nu]"),
    ("flip-duality", "sec. 5: the dual coproduct is the interchange of the left and right tensor factors"),
    ("lnZ-primitive-entry", "sec. 4: Delta(ln Z)[mu,nu] = (ln Z)[mu,nu] tensor 1 + 1 tensor (ln Z)[mu,nu] (entrywise; holds at all orders only for n = 1, at first order otherwise)"),
    ("lnZ-primitive-trace", "sec. 4: the trace of ln Z is primitive at all orders (ln det Z, det multiplicative)"),
    ("twist-realization-xh", "sec. 4: xh[mu,nu] = m F1^{-1} (act tensor 1)(x[mu,nu] tensor 1)"),
    ("twist-realization-yh", "sec. 5: yh[mu,nu] = m F2^{-1} (act tensor 1)(x[mu,nu] tensor 1)"),
    ("twisted-coproduct", "sec. 4: Delta p[mu,nu] = F Delta_0 p[mu,nu] F^{-1}"),
    ("twisted-coproduct-negative-control", "control: pairing the F2 twist with the first coproduct must fail"),
    ("normal-ordered-vs-closed", "sec. 4: :exp(i u p[mu,nu] tensor x[mu,alpha] p[nu,alpha]): equals the closed-form twist in action"),
    ("cocycle", "sec. 4: Drinfeld cocycle condition, (1 tensor F)(1 tensor Delta_0)F = (F tensor 1)(Delta_0 tensor 1)F"),
    ("cocycle-factorization", "sec. 4: (1 tensor Delta_0)F = F_12 F_13 = F_13 F_12"),
    ("cocycle-negative-control", "control: truncating ln Z to first order must break the cocycle condition"),
    ("automorphism", "sec. 6: conjugation by exp(x S + T) preserves products and brackets to O(u^N)"),
    ("lambda-roundtrip", "sec. 6: Lambda(Lambda^{-1}(p')) = p' and Lambda^{-1}(Lambda(p)) = p to O(u^N)"),
    ("primed-frame-roundtrip", "sec. 6: xh[mu,nu] = x'[alpha,beta] phi'[alpha,beta][mu,nu](p',u) + chi'[mu,nu](p',u)"),
    ("primed-frame-gln-bracket", "sec. 6: the bracket relations survive the primed-frame rewriting to O(u^N)"),
    ("primed-frame-duality", "sec. 6: [xh[mu,nu], yh[lambda,rho]] = 0 in the primed frame to O(u^N)"),
    ("coproduct-prime-coassociativity", "sec. 6: Delta p' = Lambda(Delta p, u) at p = Lambda^{-1}(p', u) is coassociative to O(u^N)"),
    ("d-prime-numeric", "sec. 6: Delta p'[mu,nu] = D'[mu,nu](p' tensor 1, 1 tensor p') on numeric samples"),
    ("consistency", "sec. 6: xh = x' + i x' m (Delta - Delta_0) p' (act tensor 1)(x' tensor 1) + chi'"),
    ("consistency-negative-control", "control: a spec violating the counit normalization must fail the consistency relation"),
    ("family-star-s-independent", "sec. 6: the family F1(s) defines the same star product for all s"),
    ("family-realization-s-independent", "sec. 6: m F1(s)^{-1}(act tensor 1)(x' tensor 1) does not depend on s"),
    ("family-leg-swap", "sec. 6: F1(s) equals the leg swap of F2(1-s)"),
    ("family-negative-control", "control: a spec violating the family preconditions must be rejected"),
];

/// Run one suite by name.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport, Error> {
    config.validate()?;
    match name {
        "gln" => run_gln(config),
        "duality" => run_duality(config),
        "star" => run_star(config),
        "coproduct" => run_coproduct(config),
        "twist" => run_twist(config),
        "cocycle" => run_cocycle(config),
        "general" => run_general(config),
        "family" => run_family(config),
        other => Err(Error::InvalidSpec(format!("unknown suite '{other}'"))),
    }
}

fn run_gln(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("gln", config);
    for variant in [
        Variant::First,
        Variant::Second,
        Variant::DualOfFirst,
        Variant::DualOfSecond,
    ] {
        let set = build_realization(config.n, variant)?;
        report.absorb(&verify_gln(&set)?);
        report.absorb(&verify_jacobi(&set)?);
    }
    // the mutated realization's own report must contain failures
    let control = gln_negative_control(config.n)?;
    let broke = !control.all_pass();
    report.push(
        "gln-negative-control",
        "one generator replaced by its transposed-index partner".into(),
        if broke { "nonzero" } else { "0" }.into(),
        broke,
    );
    Ok(report)
}

fn run_duality(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("duality", config);
    report.absorb(&verify_duality(config.n)?);
    report.absorb(&verify_zl_relations(config.n)?);
    Ok(report)
}

fn run_star(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("star", config);
    let params = StarParams::new(config.u);
    let n = config.n as usize;
    let mut sampler = Sampler::new(n, config.u, config.seed);
    let mut worst = [0.0f64; 8];
    for _ in 0..config.samples {
        let k = sampler.next_matrix();
        let q = sampler.next_matrix();
        let r = sampler.next_matrix();
        let d_assoc = max_abs_diff(
            &big_d(&big_d(&k, &q, &params), &r, &params),
            &big_d(&k, &big_d(&q, &r, &params), &params),
        );
        let dt_assoc = max_abs_diff(
            &big_d_tilde(&big_d_tilde(&k, &q, &params), &r, &params),
            &big_d_tilde(&k, &big_d_tilde(&q, &r, &params), &params),
        );
        let d_ind = max_abs_diff(&big_d(&k, &q, &params), &big_d_indirect(&k, &q, &params)?);
        let dt_ind = max_abs_diff(
            &big_d_tilde(&k, &q, &params),
            &big_d_tilde_indirect(&k, &q, &params)?,
        );
        let j_ode = max_abs_diff(
            &big_j_closed(1.0, &k, &q, &params),
            &big_j_ode(1.0, &k, &q, &params),
        );
        let jt_ode = max_abs_diff(
            &big_j_tilde_closed(1.0, &k, &q, &params),
            &big_j_tilde_ode(1.0, &k, &q, &params),
        );
        let k_inv = max_abs_diff(&big_k_inv(&big_k(&k, &params), &params)?, &k);
        let eye = CMatrix::identity(n, n);
        let u = num_complex::Complex64::new(config.u, 0.0);
        let group = max_abs_diff(
            &(&eye + &big_d(&k, &q, &params) * u),
            &((&eye + &k * u) * (&eye + &q * u)),
        );
        for (slot, v) in worst.iter_mut().zip([
            d_assoc, dt_assoc, d_ind, dt_ind, j_ode, jt_ode, k_inv, group,
        ]) {
            *slot = slot.max(v);
        }
    }
    let ode_tol = 1e-8;
    let group_tol = 1e-13;
    let entries = [
        ("D-assoc", worst[0], config.tol),
        ("Dt-assoc", worst[1], config.tol),
        ("D-indirect", worst[2], config.tol),
        ("Dt-indirect", worst[3], config.tol),
        ("J-closed-vs-ode", worst[4], ode_tol),
        ("Jt-closed-vs-ode", worst[5], ode_tol),
        ("K-inverse", worst[6], config.tol),
        ("group-law", worst[7], group_tol),
    ];
    for (id, v, tol) in entries {
        report.push(
            id,
            format!(
                "{} samples, n = {}, u = {}, seed = {}, tol {tol:.1e}",
                config.samples, config.n, config.u, config.seed
            ),
            format!("{v:.3e}"),
            v <= tol,
        );
    }
    // branch guard: an eigenvalue of I + uk pinned at zero must be rejected
    if config.u != 0.0 {
        let mut singular = CMatrix::zeros(n, n);
        singular[(0, 0)] = num_complex::Complex64::new(-1.0 / config.u, 0.0);
        let pass = matches!(big_k_inv(&singular, &params), Err(Error::SingularBranch));
        report.push(
            "star-singular-branch",
            format!("k with eigenvalue -1/u, u = {}", config.u),
            if pass { "rejected" } else { "accepted" }.into(),
            pass,
        );
    }
    Ok(report)
}

fn run_coproduct(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("coproduct", config);
    report.absorb(&coassoc_check(config.n, CoproductVariant::Delta)?);
    report.absorb(&coassoc_check(config.n, CoproductVariant::DeltaTilde)?);
    report.absorb(&z_multiplicativity_check(config.n)?);
    report.absorb(&flip_duality_check(config.n)?);
    report.absorb(&ln_z_primitive_check(config.n, config.order)?);
    // the transposed-pattern mutation coincides with the genuine coproduct
    // at n = 1, so the control needs at least two dimensions to bite
    report.absorb(&coassoc_negative_control(config.n.max(2))?);
    Ok(report)
}

fn run_twist(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("twist", config);
    for variant in [TwistVariant::F1, TwistVariant::F2] {
        let spec = TwistSpec::new(variant, config.max_degree.max(4));
        report.absorb(&realization_from_twist(&spec, config.n)?);
        report.absorb(&twisted_coproduct_check(&spec, config.n, config.max_degree)?);
        report.absorb(&normal_ordered_twist_check(config.n, variant, config.max_degree)?);
    }
    report.absorb(&twist_negative_control(config.n.min(2), config.max_degree.min(2))?);
    Ok(report)
}

fn run_cocycle(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("cocycle", config);
    let spec = TwistSpec::new(TwistVariant::F1, 2 * config.max_degree);
    report.absorb(&cocycle_check(&spec, config.n, config.max_degree)?);
    report.absorb(&cocycle_negative_control(1, config.max_degree.min(2))?);
    Ok(report)
}

fn run_general(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("general", config);
    for (label, spec) in builtin_specs(config.order) {
        let n = spec.n();
        let order = spec.order();
        // automorphism property on generator samples
        let a = WeylElement::x(n, 1, 1)?;
        let b = WeylElement::p(n, 1, n)?;
        let ta = adjoint_transform(&spec, &a)?;
        let tb = adjoint_transform(&spec, &b)?;
        let tab = adjoint_transform(&spec, &a.mul(&b)?)?;
        let r_mul = ta
            .elem()
            .mul(tb.elem())?
            .truncate_u(order)
            .sub(tab.elem())?
            .truncate_u(order);
        let tc = adjoint_transform(&spec, &a.commutator(&b)?)?;
        let r_comm = ta
            .elem()
            .commutator(tb.elem())?
            .truncate_u(order)
            .sub(tc.elem())?
            .truncate_u(order);
        let pass = r_mul.is_zero() && r_comm.is_zero();
        report.push(
            "automorphism",
            format!("{label}, products and brackets to u-order {order}"),
            if pass { "0".into() } else { format!("{r_mul} / {r_comm}") },
            pass,
        );
        // Lambda round trip
        let lam = lambda(&spec)?;
        let inv = lambda_inverse(&lam, n, order)?;
        let mut rt_pass = true;
        let mut rt_residual = String::from("0");
        for mu in 1..=n {
            for nu in 1..=n {
                let p = WeylElement::p(n, mu, nu)?;
                let c1 = momentum_subst(n, &lam[(mu - 1) as usize][(nu - 1) as usize], &inv, order)?;
                let c2 = momentum_subst(n, &inv[(mu - 1) as usize][(nu - 1) as usize], &lam, order)?;
                let r1 = c1.sub(&p)?;
                let r2 = c2.sub(&p)?;
                if !r1.is_zero() || !r2.is_zero() {
                    rt_pass = false;
                    rt_residual = format!("[{mu},{nu}]: {r1} / {r2}");
                }
            }
        }
        report.push(
            "lambda-roundtrip",
            format!("{label}, to u-order {order}"),
            rt_residual,
            rt_pass,
        );
        for variant in [Variant::First, Variant::DualOfFirst] {
            report.absorb(&verify_general(&spec, variant)?);
        }
        report.absorb(&verify_general_duality(&spec)?);
        report.absorb(&coproduct_prime_coassoc(&spec, CoproductVariant::Delta)?);
        report.absorb(&consistency_check(&spec)?);
        // numeric composition law
        let params = StarParams::new(if spec.is_identity() { config.u } else { 0.05 });
        let tol = if spec.is_identity() {
            config.tol
        } else {
            100.0 * params.u.powi(order as i32 + 1)
        };
        let mut sampler = Sampler::new(n as usize, params.u, config.seed);
        let k = sampler.next_matrix();
        let q = sampler.next_matrix();
        report.absorb(&d_prime_numeric_check(
            &spec,
            CoproductVariant::Delta,
            &k,
            &q,
            &params,
            tol,
        )?);
    }
    // negative control: non-normalized spec must fail the consistency relation
    let bad = builtin_unnormalized_spec(config.order);
    let failed = !consistency_check(&bad)?.all_pass();
    report.push(
        "consistency-negative-control",
        "S linear in momenta (counit normalization violated)".into(),
        if failed { "nonzero" } else { "0" }.into(),
        failed,
    );
    Ok(report)
}

fn run_family(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("family", config);
    let s_values = [GRat::zero(), GRat::from_ratio(1, 2), GRat::one()];
    for (label, spec) in builtin_specs(config.order) {
        if !spec.t().is_zero() {
            continue; // the family requires T = 0
        }
        let sub = twist_family_check(&spec, &s_values, config.max_degree)?;
        for check in &sub.checks {
            report.push(
                &check.relation,
                format!("{label}: {}", check.indices),
                check.residual.clone(),
                check.pass,
            );
        }
    }
    let rejected = matches!(
        twist_family_check(&builtin_unnormalized_spec(config.order), &s_values, 1),
        Err(Error::InvalidSpec(_))
    );
    report.push(
        "family-negative-control",
        "S linear in momenta (counit normalization violated)".into(),
        if rejected { "rejected" } else { "accepted" }.into(),
        rejected,
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_with_defaults() {
        let config = SuiteConfig::default();
        for name in SUITE_NAMES {
            let report = run_suite(name, &config).unwrap();
            assert!(report.all_pass, "suite {name} failed:\n{}", summarize(&report));
            assert!(!report.checks.is_empty(), "suite {name} ran no checks");
        }
    }

    fn summarize(report: &SuiteReport) -> String {
        report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} {} residual={}\n", c.id, c.detail, c.residual))
            .collect()
    }

    #[test]
    fn reports_are_deterministic() {
        let config = SuiteConfig::default();
        for name in ["gln", "star", "coproduct"] {
            let a = serde_json::to_string(&run_suite(name, &config).unwrap()).unwrap();
            let b = serde_json::to_string(&run_suite(name, &config).unwrap()).unwrap();
            assert_eq!(a, b, "suite {name} is not deterministic");
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("bogus", &SuiteConfig::default()),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn config_guards() {
        let mut config = SuiteConfig::default();
        config.n = 7;
        assert!(run_suite("gln", &config).is_err());
        config.n = 2;
        config.tol = 0.0;
        assert!(run_suite("gln", &config).is_err());
        config.tol = 1e-12;
        config.max_degree = 5;
        assert!(run_suite("twist", &config).is_err());
    }

    #[test]
    fn explain_registry_covers_emitted_ids() {
        let config = SuiteConfig::default();
        for name in SUITE_NAMES {
            let report = run_suite(name, &config).unwrap();
            for check in &report.checks {
                assert!(
                    explain(&check.id).is_some(),
                    "missing anchor for id '{}' in suite {name}",
                    check.id
                );
            }
        }
    }

    #[test]
    fn explain_known_and_unknown() {
        assert!(explain("D-assoc").unwrap().contains("associative"));
        assert!(explain("cocycle").unwrap().contains("cocycle"));
        assert!(explain("bogus").is_none());
    }
}
