//! Linear realizations of gl(n) inside the generalized Heisenberg algebra,
//! their phi-tensors, and exact verification of the gl(n), dual gl(n),
//! duality and Z/L relations.

use crate::coeff::{GRat, UPoly};
use crate::error::Error;
use crate::report::VerificationReport;
use crate::weyl::{CoordPoly, WeylElement};

/// The four linear realization variants.
///
/// `First` is `x + u x[mu,a] p[nu,a]`, `Second` is `x - u x[a,nu] p[a,mu]`;
/// both close the gl(n) bracket with `+iu`. The two duals close it with
/// `-iu` and commute with their partner realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    First,
    Second,
    DualOfFirst,
    DualOfSecond,
}

impl Variant {
    /// Sign of `u` on the bracket right-hand side.
    pub fn bracket_sign(&self) -> i64 {
        match self {
            Variant::First | Variant::Second => 1,
            Variant::DualOfFirst | Variant::DualOfSecond => -1,
        }
    }
}

/// A realization: the `n^2` generators as Weyl elements plus the phi-tensor
/// with `generators[mu][nu] = sum_{a,b} x[a,b] phi[a][b][mu][nu]`.
pub struct RealizationSet {
    pub n: u8,
    pub variant: Variant,
    /// `generators[mu-1][nu-1]`
    pub generators: Vec<Vec<WeylElement>>,
    /// `phi[alpha-1][beta-1][mu-1][nu-1]`, momentum-only elements
    pub phi: Vec<Vec<Vec<Vec<WeylElement>>>>,
}

fn kron(a: u8, b: u8) -> bool {
    a == b
}

/// Build the generators and phi-tensor of the requested variant.
pub fn build_realization(n: u8, variant: Variant) -> Result<RealizationSet, Error> {
    if n < 1 {
        return Err(Error::InvalidSpec("dimension must be >= 1".into()));
    }
    let u = UPoly::u();
    let mut generators = Vec::new();
    for mu in 1..=n {
        let mut row = Vec::new();
        for nu in 1..=n {
            let mut g = WeylElement::x(n, mu, nu)?;
            for al in 1..=n {
                let term = match variant {
                    Variant::First => WeylElement::x(n, mu, al)?
                        .mul(&WeylElement::p(n, nu, al)?)?
                        .scale(&u),
                    Variant::Second => WeylElement::x(n, al, nu)?
                        .mul(&WeylElement::p(n, al, mu)?)?
                        .scale(&u.neg()),
                    Variant::DualOfFirst => WeylElement::x(n, al, nu)?
                        .mul(&WeylElement::p(n, al, mu)?)?
                        .scale(&u),
                    Variant::DualOfSecond => WeylElement::x(n, mu, al)?
                        .mul(&WeylElement::p(n, nu, al)?)?
                        .scale(&u.neg()),
                };
                g = g.add(&term)?;
            }
            row.push(g);
        }
        generators.push(row);
    }

    let mut phi = Vec::new();
    for al in 1..=n {
        let mut pa = Vec::new();
        for be in 1..=n {
            let mut pb = Vec::new();
            for mu in 1..=n {
                let mut pm = Vec::new();
                for nu in 1..=n {
                    let mut e = if kron(al, mu) && kron(be, nu) {
                        WeylElement::one(n)
                    } else {
                        WeylElement::zero(n)
                    };
                    let uterm = match variant {
                        Variant::First if kron(al, mu) => {
                            Some(WeylElement::p(n, nu, be)?.scale(&u))
                        }
                        Variant::Second if kron(be, nu) => {
                            Some(WeylElement::p(n, al, mu)?.scale(&u.neg()))
                        }
                        Variant::DualOfFirst if kron(be, nu) => {
                            Some(WeylElement::p(n, al, mu)?.scale(&u))
                        }
                        Variant::DualOfSecond if kron(al, mu) => {
                            Some(WeylElement::p(n, nu, be)?.scale(&u.neg()))
                        }
                        _ => None,
                    };
                    if let Some(t) = uterm {
                        e = e.add(&t)?;
                    }
                    pm.push(e);
                }
                pb.push(pm);
            }
            pa.push(pb);
        }
        phi.push(pa);
    }

    Ok(RealizationSet {
        n,
        variant,
        generators,
        phi,
    })
}

impl RealizationSet {
    pub fn generator(&self, mu: u8, nu: u8) -> &WeylElement {
        &self.generators[(mu - 1) as usize][(nu - 1) as usize]
    }

    pub fn phi(&self, al: u8, be: u8, mu: u8, nu: u8) -> &WeylElement {
        &self.phi[(al - 1) as usize][(be - 1) as usize][(mu - 1) as usize][(nu - 1) as usize]
    }

    /// `generators[mu][nu] - sum x[a,b] phi[a][b][mu][nu]`, exact.
    pub fn phi_factorization_residual(&self, mu: u8, nu: u8) -> Result<WeylElement, Error> {
        let n = self.n;
        let mut acc = WeylElement::zero(n);
        for al in 1..=n {
            for be in 1..=n {
                acc = acc.add(
                    &WeylElement::x(n, al, be)?.mul(self.phi(al, be, mu, nu))?,
                )?;
            }
        }
        self.generator(mu, nu).sub(&acc)
    }
}

/// The structure constants `C[mu nu][lambda rho][alpha beta]` from the
/// bracket RHS `iu (d(mu,rho) xh[lambda,nu] - d(lambda,nu) xh[mu,rho])`,
/// i.e. `C = d(mu,rho)d(lambda,alpha)d(nu,beta) - d(lambda,nu)d(mu,alpha)d(rho,beta)`.
///
/// Provided for completeness; the verifier works with the explicit bracket
/// RHS and never relies on this array.
pub struct StructureConstants {
    pub n: u8,
}

impl StructureConstants {
    pub fn get(&self, mu: u8, nu: u8, la: u8, ro: u8, al: u8, be: u8) -> GRat {
        let mut v = 0i64;
        if kron(mu, ro) && kron(la, al) && kron(nu, be) {
            v += 1;
        }
        if kron(la, nu) && kron(mu, al) && kron(ro, be) {
            v -= 1;
        }
        GRat::from_int(v)
    }

    /// Antisymmetry under `(mu nu) <-> (lambda rho)`.
    pub fn verify_antisymmetry(&self) -> bool {
        let n = self.n;
        for mu in 1..=n {
            for nu in 1..=n {
                for la in 1..=n {
                    for ro in 1..=n {
                        for al in 1..=n {
                            for be in 1..=n {
                                let a = self.get(mu, nu, la, ro, al, be);
                                let b = self.get(la, ro, mu, nu, al, be);
                                if a.add(&b) != GRat::zero() {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Check the gl(n) bracket for every index quadruple of the given set:
/// `[g(mu,nu), g(la,ro)] = sign * iu (d(mu,ro) g(la,nu) - d(la,nu) g(mu,ro))`.
pub fn verify_gln(set: &RealizationSet) -> Result<VerificationReport, Error> {
    let n = set.n;
    let iu = UPoly::term(1, GRat::i());
    let signed_iu = if set.variant.bracket_sign() > 0 {
        iu
    } else {
        iu.neg()
    };
    let mut report = VerificationReport::new();
    for mu in 1..=n {
        for nu in 1..=n {
            for la in 1..=n {
                for ro in 1..=n {
                    let lhs = set.generator(mu, nu).commutator(set.generator(la, ro))?;
                    let mut rhs = WeylElement::zero(n);
                    if kron(mu, ro) {
                        rhs = rhs.add(&set.generator(la, nu).scale(&signed_iu))?;
                    }
                    if kron(la, nu) {
                        rhs = rhs.sub(&set.generator(mu, ro).scale(&signed_iu))?;
                    }
                    let residual = lhs.sub(&rhs)?;
                    report.record_zero(
                        "gln-bracket",
                        format!("[{mu},{nu}],[{la},{ro}]"),
                        residual.is_zero(),
                        residual.to_string(),
                    );
                }
            }
        }
    }
    // phi factorization and action on 1 come with the bracket suite
    for mu in 1..=n {
        for nu in 1..=n {
            let r = set.phi_factorization_residual(mu, nu)?;
            report.record_zero(
                "phi-factorization",
                format!("[{mu},{nu}]"),
                r.is_zero(),
                r.to_string(),
            );
            let acted = set.generator(mu, nu).act(&CoordPoly::one(n))?;
            let expect = CoordPoly::var(n, mu, nu)?;
            let diff = acted.sub(&expect)?;
            report.record_zero(
                "action-on-unit",
                format!("[{mu},{nu}]"),
                diff.is_zero(),
                diff.to_string(),
            );
        }
    }
    Ok(report)
}

/// Jacobi identity on the generators of a realization, exact.
pub fn verify_jacobi(set: &RealizationSet) -> Result<VerificationReport, Error> {
    let n = set.n;
    let mut report = VerificationReport::new();
    let idx: Vec<(u8, u8)> = (1..=n)
        .flat_map(|mu| (1..=n).map(move |nu| (mu, nu)))
        .collect();
    for &(a1, a2) in &idx {
        for &(b1, b2) in &idx {
            for &(c1, c2) in &idx {
                let a = set.generator(a1, a2);
                let b = set.generator(b1, b2);
                let c = set.generator(c1, c2);
                let s = a
                    .commutator(&b.commutator(c)?)?
                    .add(&b.commutator(&c.commutator(a)?)?)?
                    .add(&c.commutator(&a.commutator(b)?)?)?;
                report.record_zero(
                    "jacobi",
                    format!("[{a1},{a2}],[{b1},{b2}],[{c1},{c2}]"),
                    s.is_zero(),
                    s.to_string(),
                );
            }
        }
    }
    Ok(report)
}

/// Duality checks: `[xh, yh] = 0` for all quadruples, the dual bracket for
/// `yh`, the `u -> -u` image of `yh` closing the original bracket, and the
/// element-wise distinctness of that image from `xh`.
pub fn verify_duality(n: u8) -> Result<VerificationReport, Error> {
    let xh = build_realization(n, Variant::First)?;
    let yh = build_realization(n, Variant::DualOfFirst)?;
    let mut report = VerificationReport::new();
    for mu in 1..=n {
        for nu in 1..=n {
            for la in 1..=n {
                for ro in 1..=n {
                    let c = xh.generator(mu, nu).commutator(yh.generator(la, ro))?;
                    report.record_zero(
                        "cross-commutator",
                        format!("[{mu},{nu}],[{la},{ro}]"),
                        c.is_zero(),
                        c.to_string(),
                    );
                }
            }
        }
    }
    report.merge(verify_gln(&yh)?);

    // yh(-u) closes the original (+iu) bracket: it is the Second variant.
    let second = build_realization(n, Variant::Second)?;
    let mut flipped_matches_second = true;
    let mut differs_from_xh = false;
    for mu in 1..=n {
        for nu in 1..=n {
            let flipped = yh.generator(mu, nu).flip_u();
            if &flipped != second.generator(mu, nu) {
                flipped_matches_second = false;
            }
            if &flipped != xh.generator(mu, nu) {
                differs_from_xh = true;
            }
        }
    }
    report.record(
        "yh-flip-u-is-second-variant",
        "all".into(),
        if flipped_matches_second { "0" } else { "mismatch" }.into(),
        flipped_matches_second,
    );
    report.merge(verify_gln(&second)?);
    report.record(
        "yh-flip-u-differs-from-xh",
        "all".into(),
        if differs_from_xh { "distinct" } else { "equal" }.into(),
        differs_from_xh,
    );
    Ok(report)
}

/// `Z[mu,nu] = d(mu,nu) + u p[mu,nu]` as a Weyl element.
pub fn big_z(n: u8, mu: u8, nu: u8) -> Result<WeylElement, Error> {
    let mut z = WeylElement::p(n, mu, nu)?.scale(&UPoly::u());
    if mu == nu {
        z = z.add(&WeylElement::one(n))?;
    }
    Ok(z)
}

/// `L[mu,nu] = x[mu,a] p[nu,a]` summed over `a`.
pub fn big_l(n: u8, mu: u8, nu: u8) -> Result<WeylElement, Error> {
    let mut l = WeylElement::zero(n);
    for al in 1..=n {
        l = l.add(&WeylElement::x(n, mu, al)?.mul(&WeylElement::p(n, nu, al)?)?)?;
    }
    Ok(l)
}

/// `Lt[mu,nu] = x[a,nu] p[a,mu]` summed over `a`.
pub fn big_l_tilde(n: u8, mu: u8, nu: u8) -> Result<WeylElement, Error> {
    let mut l = WeylElement::zero(n);
    for al in 1..=n {
        l = l.add(&WeylElement::x(n, al, nu)?.mul(&WeylElement::p(n, al, mu)?)?)?;
    }
    Ok(l)
}

/// The Z and L auxiliary relation families:
/// `[Z, xh] = -iu d(mu,la) Z[ro,nu]`, `[Z, yh] = -iu d(ro,nu) Z[mu,la]`,
/// `[L, L] = i(d L - d L)` and `[Lt, Lt] = -i(d Lt - d Lt)`.
pub fn verify_zl_relations(n: u8) -> Result<VerificationReport, Error> {
    let xh = build_realization(n, Variant::First)?;
    let yh = build_realization(n, Variant::DualOfFirst)?;
    let iu = UPoly::term(1, GRat::i());
    let i = UPoly::i();
    let mut report = VerificationReport::new();
    for mu in 1..=n {
        for nu in 1..=n {
            for la in 1..=n {
                for ro in 1..=n {
                    let z = big_z(n, mu, nu)?;

                    let lhs = z.commutator(xh.generator(la, ro))?;
                    let rhs = if kron(mu, la) {
                        big_z(n, ro, nu)?.scale(&iu.neg())
                    } else {
                        WeylElement::zero(n)
                    };
                    let r = lhs.sub(&rhs)?;
                    report.record_zero(
                        "Z-xh",
                        format!("[{mu},{nu}],[{la},{ro}]"),
                        r.is_zero(),
                        r.to_string(),
                    );

                    let lhs = z.commutator(yh.generator(la, ro))?;
                    let rhs = if kron(ro, nu) {
                        big_z(n, mu, la)?.scale(&iu.neg())
                    } else {
                        WeylElement::zero(n)
                    };
                    let r = lhs.sub(&rhs)?;
                    report.record_zero(
                        "Z-yh",
                        format!("[{mu},{nu}],[{la},{ro}]"),
                        r.is_zero(),
                        r.to_string(),
                    );

                    let lhs = big_l(n, mu, nu)?.commutator(&big_l(n, la, ro)?)?;
                    let mut rhs = WeylElement::zero(n);
                    if kron(mu, ro) {
                        rhs = rhs.add(&big_l(n, la, nu)?.scale(&i))?;
                    }
                    if kron(la, nu) {
                        rhs = rhs.sub(&big_l(n, mu, ro)?.scale(&i))?;
                    }
                    let r = lhs.sub(&rhs)?;
                    report.record_zero(
                        "L-L",
                        format!("[{mu},{nu}],[{la},{ro}]"),
                        r.is_zero(),
                        r.to_string(),
                    );

                    let lhs = big_l_tilde(n, mu, nu)?.commutator(&big_l_tilde(n, la, ro)?)?;
                    let mut rhs = WeylElement::zero(n);
                    if kron(mu, ro) {
                        rhs = rhs.sub(&big_l_tilde(n, la, nu)?.scale(&i))?;
                    }
                    if kron(la, nu) {
                        rhs = rhs.add(&big_l_tilde(n, mu, ro)?.scale(&i))?;
                    }
                    let r = lhs.sub(&rhs)?;
                    report.record_zero(
                        "Lt-Lt",
                        format!("[{mu},{nu}],[{la},{ro}]"),
                        r.is_zero(),
                        r.to_string(),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Negative control: rebuild the first realization with the `u`-term of one
/// generator deleted and confirm the bracket verifier reports a failure.
pub fn gln_negative_control(n: u8) -> Result<VerificationReport, Error> {
    let mut set = build_realization(n, Variant::First)?;
    let mutated = WeylElement::x(n, 1, if n > 1 { 2 } else { 1 })?;
    set.generators[0][if n > 1 { 1 } else { 0 }] = mutated;
    verify_gln(&set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_realization_n1() {
        let set = build_realization(1, Variant::First).unwrap();
        // xh11 = x11 + u x11 p11
        let expected = WeylElement::x(1, 1, 1)
            .unwrap()
            .add(
                &WeylElement::x(1, 1, 1)
                    .unwrap()
                    .mul(&WeylElement::p(1, 1, 1).unwrap())
                    .unwrap()
                    .scale(&UPoly::u()),
            )
            .unwrap();
        assert_eq!(set.generator(1, 1), &expected);
    }

    #[test]
    fn first_realization_n2_offdiagonal() {
        let set = build_realization(2, Variant::First).unwrap();
        // xh12 = x12 + u (x11 p21 + x12 p22)
        let expected = WeylElement::x(2, 1, 2)
            .unwrap()
            .add(
                &WeylElement::x(2, 1, 1)
                    .unwrap()
                    .mul(&WeylElement::p(2, 2, 1).unwrap())
                    .unwrap()
                    .add(
                        &WeylElement::x(2, 1, 2)
                            .unwrap()
                            .mul(&WeylElement::p(2, 2, 2).unwrap())
                            .unwrap(),
                    )
                    .unwrap()
                    .scale(&UPoly::u()),
            )
            .unwrap();
        assert_eq!(set.generator(1, 2), &expected);
    }

    #[test]
    fn u_zero_truncation_gives_plain_coordinates() {
        for variant in [
            Variant::First,
            Variant::Second,
            Variant::DualOfFirst,
            Variant::DualOfSecond,
        ] {
            let set = build_realization(2, variant).unwrap();
            for mu in 1..=2 {
                for nu in 1..=2 {
                    assert_eq!(
                        set.generator(mu, nu).truncate_u(0),
                        WeylElement::x(2, mu, nu).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn gln_bracket_all_variants_n2() {
        for variant in [
            Variant::First,
            Variant::Second,
            Variant::DualOfFirst,
            Variant::DualOfSecond,
        ] {
            let set = build_realization(2, variant).unwrap();
            let report = verify_gln(&set).unwrap();
            assert!(report.all_pass(), "variant {variant:?}:\n{report}");
        }
    }

    #[test]
    fn gln_negative_control_fails() {
        let report = gln_negative_control(2).unwrap();
        assert!(!report.all_pass());
        assert!(report.failures().count() > 0);
    }

    #[test]
    fn duality_n2() {
        let report = verify_duality(2).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn duality_n1_generators_coincide() {
        let xh = build_realization(1, Variant::First).unwrap();
        let yh = build_realization(1, Variant::DualOfFirst).unwrap();
        assert_eq!(xh.generator(1, 1), yh.generator(1, 1));
        assert!(xh
            .generator(1, 1)
            .commutator(yh.generator(1, 1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn zl_relations_n2() {
        let report = verify_zl_relations(2).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn zl_example_l12_l21() {
        // [L12, L21] = i (L22 - L11)
        let lhs = big_l(2, 1, 2)
            .unwrap()
            .commutator(&big_l(2, 2, 1).unwrap())
            .unwrap();
        let rhs = big_l(2, 2, 2)
            .unwrap()
            .sub(&big_l(2, 1, 1).unwrap())
            .unwrap()
            .scale(&UPoly::i());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zl_example_z12_xh11() {
        // [Z12, xh11] = -iu d(1,1) Z[1,2] = -iu * u p12 = -i u^2 p12
        let z12 = big_z(2, 1, 2).unwrap();
        let xh = build_realization(2, Variant::First).unwrap();
        let lhs = z12.commutator(xh.generator(1, 1)).unwrap();
        let rhs = WeylElement::p(2, 1, 2)
            .unwrap()
            .scale(&UPoly::term(2, GRat::i().neg()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn structure_constants_antisymmetric() {
        for n in 1..=3 {
            assert!(StructureConstants { n }.verify_antisymmetry());
        }
    }

    #[test]
    fn jacobi_n2() {
        let set = build_realization(2, Variant::First).unwrap();
        assert!(verify_jacobi(&set).unwrap().all_pass());
    }
}
