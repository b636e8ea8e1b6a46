//! Twists in closed form, `F^{-1} = exp(i (ln Z)[mu,nu] ⊗ L[mu,nu])`, their
//! action on tensor products of polynomials, the twisted coproduct and the
//! Drinfeld cocycle condition.
//!
//! All operator identities are verified extensionally: both sides are
//! applied to a degree-complete basis of polynomial tuples. On such inputs
//! every series terminates — the Mercator expansion of `ln Z = ln(I + u p)`
//! carries at least one momentum per order, and each momentum lowers the
//! x-degree of the leg it acts on.

use crate::coeff::{GRat, UPoly};
use crate::error::Error;
use crate::realization::{big_l, big_l_tilde, build_realization, Variant};
use crate::report::VerificationReport;
use crate::tensor::{
    coproduct, coproduct_momentum_elem, CoproductVariant, TensorElement,
};
use crate::weyl::{coord_monomials, Index, Monomial, WeylElement};

/// Which closed-form twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistVariant {
    /// `exp(i (ln Z)[mu,nu] ⊗ x[mu,a] p[nu,a])`, paired with the `Delta`
    /// coproduct and the first realization.
    F1,
    /// `exp(i (ln Z)[mu,nu] ⊗ x[a,nu] p[a,mu])`, paired with `DeltaTilde`
    /// and the dual realization.
    F2,
}

impl TwistVariant {
    pub fn coproduct_variant(&self) -> CoproductVariant {
        match self {
            TwistVariant::F1 => CoproductVariant::Delta,
            TwistVariant::F2 => CoproductVariant::DeltaTilde,
        }
    }

    pub fn realization_variant(&self) -> Variant {
        match self {
            TwistVariant::F1 => Variant::First,
            TwistVariant::F2 => Variant::DualOfFirst,
        }
    }

    fn second_leg(&self, n: u8, mu: u8, nu: u8) -> Result<WeylElement, Error> {
        match self {
            TwistVariant::F1 => big_l(n, mu, nu),
            TwistVariant::F2 => big_l_tilde(n, mu, nu),
        }
    }
}

/// A twist together with the truncation guard that documents why the
/// series terminate on the inputs it is applied to.
#[derive(Clone, Copy, Debug)]
pub struct TwistSpec {
    pub variant: TwistVariant,
    pub max_p_degree: u32,
}

impl TwistSpec {
    pub fn new(variant: TwistVariant, max_p_degree: u32) -> Self {
        TwistSpec {
            variant,
            max_p_degree,
        }
    }

    fn guard(&self, required: u32) -> Result<(), Error> {
        if required > self.max_p_degree {
            return Err(Error::DegreeGuardExceeded {
                required,
                guard: self.max_p_degree,
            });
        }
        Ok(())
    }
}

/// `(ln(I + u p))[mu,nu]` expanded by the Mercator series to momentum
/// degree `order` (u-degree equals p-degree term by term).
pub fn ln_z(n: u8, mu: u8, nu: u8, order: u32) -> Result<WeylElement, Error> {
    Index::new(mu, nu).check(n)?;
    // matrix powers of p
    let mut power: Vec<Vec<WeylElement>> = (1..=n)
        .map(|a| {
            (1..=n)
                .map(|b| WeylElement::p(n, a, b).unwrap())
                .collect()
        })
        .collect();
    let mut acc = WeylElement::zero(n);
    for k in 1..=order {
        if k > 1 {
            // power = power * p
            let mut next = Vec::new();
            for a in 0..n as usize {
                let mut row = Vec::new();
                for b in 0..n as usize {
                    let mut e = WeylElement::zero(n);
                    for c in 0..n as usize {
                        e = e.add(
                            &power[a][c]
                                .mul(&WeylElement::p(n, c as u8 + 1, b as u8 + 1)?)?,
                        )?;
                    }
                    row.push(e);
                }
                next.push(row);
            }
            power = next;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let coeff = UPoly::term(k, GRat::from_ratio(sign, k as i64));
        acc = acc.add(&power[(mu - 1) as usize][(nu - 1) as usize].scale(&coeff))?;
    }
    Ok(acc)
}

/// The exponent `G = sum_{mu,nu} i (ln Z)[mu,nu] ⊗ L[mu,nu]` of `F^{-1}`,
/// truncated to Mercator order `order`.
pub fn twist_generator(
    n: u8,
    variant: TwistVariant,
    order: u32,
) -> Result<TensorElement, Error> {
    let mut gen = TensorElement::zero(n, 2);
    for mu in 1..=n {
        for nu in 1..=n {
            let first = ln_z(n, mu, nu, order)?.scale(&UPoly::i());
            let second = variant.second_leg(n, mu, nu)?;
            gen = gen.add(&TensorElement::from_weyl(&[first, second])?)?;
        }
    }
    Ok(gen)
}

/// `exp(gen)` applied extensionally to a state with coordinate-polynomial
/// legs. Terminates because every generator term lowers the state's total
/// x-degree.
pub fn apply_exp(gen: &TensorElement, state: &TensorElement) -> Result<TensorElement, Error> {
    let mut acc = state.clone();
    let mut term = state.clone();
    let bound = state.total_x_degree() + 2;
    for m in 1..=bound {
        term = gen
            .apply(&term)?
            .scale(&UPoly::constant(GRat::from_ratio(1, m as i64)));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term)?;
    }
    if !term.is_zero() {
        return Err(Error::DegreeGuardExceeded {
            required: bound,
            guard: bound,
        });
    }
    Ok(acc)
}

/// `exp(gen)` in mixed mode `(act ⊗ multiply)`: the first leg acts on a
/// coordinate polynomial, the second leg left-multiplies.
fn apply_exp_mixed(gen: &TensorElement, state: &TensorElement) -> Result<TensorElement, Error> {
    let apply_once = |t: &TensorElement| -> Result<TensorElement, Error> {
        let mut out = TensorElement::zero(t.n(), 2);
        for (ol, oc) in gen.terms() {
            for (sl, sc) in t.terms() {
                if let Some((m0, w0)) = ol[0].act_on_coord(&sl[0]) {
                    for (m1, w1) in ol[1].mul(&sl[1]) {
                        out.add_term(vec![m0.clone(), m1], oc.mul(sc).scale(&w0.mul(&w1)));
                    }
                }
            }
        }
        Ok(out)
    };
    let mut acc = state.clone();
    let mut term = state.clone();
    let bound = state.max_x_degree_leg(0) + 2;
    for m in 1..=bound {
        term = apply_once(&term)?.scale(&UPoly::constant(GRat::from_ratio(1, m as i64)));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `F^{-1}(act ⊗ 1)` applied to `a ⊗ b`: the inverse twist's first legs
/// act on the (coordinate-polynomial) first leg, its second legs multiply
/// the second leg from the left.
pub fn twist_inverse_apply(
    spec: &TwistSpec,
    state: &TensorElement,
) -> Result<TensorElement, Error> {
    let order = state.max_x_degree_leg(0);
    spec.guard(order)?;
    let gen = twist_generator(state.n(), spec.variant, order)?;
    apply_exp_mixed(&gen, state)
}

/// `m F^{-1}(act ⊗ 1)(x[mu,nu] ⊗ 1)` reproduces the generators of the
/// paired realization, exactly.
pub fn realization_from_twist(spec: &TwistSpec, n: u8) -> Result<VerificationReport, Error> {
    let target = build_realization(n, spec.variant.realization_variant())?;
    let mut report = VerificationReport::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let state = TensorElement::from_weyl(&[
                WeylElement::x(n, mu, nu)?,
                WeylElement::one(n),
            ])?;
            let twisted = twist_inverse_apply(spec, &state)?;
            let produced = twisted.multiply_legs()?;
            let r = produced.sub(target.generator(mu, nu))?;
            report.record_zero(
                match spec.variant {
                    TwistVariant::F1 => "twist-realization-xh",
                    TwistVariant::F2 => "twist-realization-yh",
                },
                format!("[{mu},{nu}]"),
                r.is_zero(),
                r.to_string(),
            );
        }
    }
    Ok(report)
}

/// `F Delta_0 p F^{-1} = Delta p` as operators, verified by applying both
/// sides to every monomial pair of per-leg degree `<= max_deg`.
pub fn twisted_coproduct_check(
    spec: &TwistSpec,
    n: u8,
    max_deg: u32,
) -> Result<VerificationReport, Error> {
    spec.guard(max_deg)?;
    let gen = twist_generator(n, spec.variant, max_deg)?;
    let gen_neg = gen.neg();
    let basis = coord_monomials(n, max_deg);
    let mut report = VerificationReport::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let d0 = coproduct(n, CoproductVariant::Zero, mu, nu)?;
            let dp = coproduct(n, spec.variant.coproduct_variant(), mu, nu)?;
            let mut max_fail: Option<String> = None;
            let mut pairs = 0usize;
            for f in &basis {
                for g in &basis {
                    let state = TensorElement::from_weyl(&[
                        f.as_weyl().clone(),
                        g.as_weyl().clone(),
                    ])?;
                    // F Delta_0 p F^{-1}: rightmost factor applies first
                    let s1 = apply_exp(&gen, &state)?;
                    let s2 = d0.apply(&s1)?;
                    let lhs = apply_exp(&gen_neg, &s2)?;
                    let rhs = dp.apply(&state)?;
                    let r = lhs.sub(&rhs)?;
                    if !r.is_zero() && max_fail.is_none() {
                        max_fail = Some(format!("pair ({f}, {g}): {r}"));
                    }
                    pairs += 1;
                }
            }
            report.record(
                "twisted-coproduct",
                format!("[{mu},{nu}] over {pairs} pairs, per-leg degree <= {max_deg}"),
                max_fail.clone().unwrap_or_else(|| "0".into()),
                max_fail.is_none(),
            );
        }
    }
    Ok(report)
}

/// Negative control: the mismatched pairing (the F2 twist against the
/// `Delta` coproduct) must fail the twisted-coproduct identity.
pub fn twist_negative_control(n: u8, max_deg: u32) -> Result<VerificationReport, Error> {
    let gen = twist_generator(n, TwistVariant::F2, max_deg)?;
    let gen_neg = gen.neg();
    let basis = coord_monomials(n, max_deg);
    let mut any_nonzero = false;
    for mu in 1..=n {
        for nu in 1..=n {
            let d0 = coproduct(n, CoproductVariant::Zero, mu, nu)?;
            let dp = coproduct(n, CoproductVariant::Delta, mu, nu)?;
            for f in &basis {
                for g in &basis {
                    let state = TensorElement::from_weyl(&[
                        f.as_weyl().clone(),
                        g.as_weyl().clone(),
                    ])?;
                    let s1 = apply_exp(&gen, &state)?;
                    let s2 = d0.apply(&s1)?;
                    let lhs = apply_exp(&gen_neg, &s2)?;
                    let rhs = dp.apply(&state)?;
                    if !lhs.sub(&rhs)?.is_zero() {
                        any_nonzero = true;
                    }
                }
            }
        }
    }
    let mut report = VerificationReport::new();
    report.record(
        "twisted-coproduct-negative-control",
        "F2 twist against Delta".into(),
        if any_nonzero { "nonzero" } else { "0" }.into(),
        any_nonzero,
    );
    Ok(report)
}

/// The Drinfeld cocycle condition
/// `(1⊗F)(1⊗D0)F = (F⊗1)(D0⊗1)F`
/// verified on all monomial triples of per-leg degree `<= max_deg`,
/// together with the factorization `(1⊗D0)F = F12 F13 = F13 F12`.
/// Sparse representation of states for the cocycle check: every
/// intermediate state is a linear combination of basis triples (momenta
/// only ever lower the x-degree of a leg), so operator exponentials reduce
/// to sparse linear algebra over the triple index space, with the symbolic
/// single application of a generator computed at most once per basis triple.
struct TripleSpace {
    basis: Vec<Monomial>,
    index: std::collections::HashMap<Monomial, usize>,
}

type TripleKey = [usize; 3];
type SparseState = std::collections::HashMap<TripleKey, UPoly>;

impl TripleSpace {
    fn new(n: u8, max_deg: u32) -> Result<Self, Error> {
        let mut basis = Vec::new();
        for poly in coord_monomials(n, max_deg) {
            let w = poly.as_weyl();
            let (m, _) = w.terms().next().ok_or_else(|| {
                Error::InvalidSpec("empty basis monomial".into())
            })?;
            basis.push(m.clone());
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(TripleSpace { basis, index })
    }

    fn state(&self, n: u8, key: TripleKey) -> TensorElement {
        let mut t = TensorElement::zero(n, 3);
        t.add_term(
            vec![
                self.basis[key[0]].clone(),
                self.basis[key[1]].clone(),
                self.basis[key[2]].clone(),
            ],
            UPoly::one(),
        );
        t
    }

    fn decompose(&self, t: &TensorElement) -> Result<Vec<(TripleKey, UPoly)>, Error> {
        let mut out = Vec::new();
        for (legs, c) in t.terms() {
            let mut key = [0usize; 3];
            for (slot, m) in key.iter_mut().zip(legs) {
                *slot = *self.index.get(m).ok_or_else(|| {
                    Error::InvalidSpec("state left the coordinate basis".into())
                })?;
            }
            out.push((key, c.clone()));
        }
        Ok(out)
    }
}

/// `exp(gen)` on sparse states, with cached single-application rows.
struct CachedExp<'a> {
    n: u8,
    gen: &'a TensorElement,
    rows: std::collections::HashMap<TripleKey, Vec<(TripleKey, UPoly)>>,
}

impl<'a> CachedExp<'a> {
    fn new(n: u8, gen: &'a TensorElement) -> Self {
        CachedExp {
            n,
            gen,
            rows: std::collections::HashMap::new(),
        }
    }

    fn apply_once(
        &mut self,
        space: &TripleSpace,
        v: &SparseState,
    ) -> Result<SparseState, Error> {
        let mut out = SparseState::new();
        for (key, c) in v {
            if !self.rows.contains_key(key) {
                let applied = self.gen.apply(&space.state(self.n, *key))?;
                self.rows.insert(*key, space.decompose(&applied)?);
            }
            for (tk, tc) in &self.rows[key] {
                let add = tc.mul(c);
                let entry = out.entry(*tk).or_insert_with(UPoly::zero);
                *entry = entry.add(&add);
                if entry.is_zero() {
                    out.remove(tk);
                }
            }
        }
        Ok(out)
    }

    fn exp(&mut self, space: &TripleSpace, v: &SparseState) -> Result<SparseState, Error> {
        let mut acc = v.clone();
        let mut cur = v.clone();
        let mut m = 1i64;
        // every generator term lowers the total x-degree of some leg, so
        // the series must terminate within 3 * max_deg + 1 applications
        let bound = 3 * space.basis.iter().map(|b| b.x_degree()).max().unwrap_or(0) as i64 + 2;
        while !cur.is_empty() {
            if m > bound {
                return Err(Error::DegreeGuardExceeded {
                    required: m as u32,
                    guard: bound as u32,
                });
            }
            let inv_m = GRat::from_ratio(1, m);
            let next = self.apply_once(space, &cur)?;
            cur = next
                .into_iter()
                .map(|(k, c)| (k, c.scale(&inv_m)))
                .collect();
            for (k, c) in &cur {
                let entry = acc.entry(*k).or_insert_with(UPoly::zero);
                *entry = entry.add(c);
                if entry.is_zero() {
                    acc.remove(k);
                }
            }
            m += 1;
        }
        Ok(acc)
    }
}

fn sparse_diff(a: &SparseState, b: &SparseState) -> Option<TripleKey> {
    for (k, c) in a {
        if &b.get(k).cloned().unwrap_or_else(UPoly::zero) != c {
            return Some(*k);
        }
    }
    b.keys().find(|k| !a.contains_key(*k)).copied()
}

pub fn cocycle_check(
    spec: &TwistSpec,
    n: u8,
    max_deg: u32,
) -> Result<VerificationReport, Error> {
    spec.guard(2 * max_deg)?;
    let gen2 = twist_generator(n, spec.variant, max_deg)?;
    // F = exp(-G); embeddings into three legs
    let gen12 = gen2.neg().embed(3, (0, 1));
    let gen13 = gen2.neg().embed(3, (0, 2));
    let gen23 = gen2.neg().embed(3, (1, 2));
    // (1 ⊗ D0) of the exponent: L is primitive, so the exponent splits
    let gen_1d0 = gen12.add(&gen13)?;
    // (D0 ⊗ 1) of the exponent: D0 applied multiplicatively to the ln Z leg
    let mut gen_d01 = TensorElement::zero(n, 3);
    for mu in 1..=n {
        for nu in 1..=n {
            let lz = ln_z(n, mu, nu, 2 * max_deg)?.scale(&UPoly::i());
            let split = coproduct_momentum_elem(n, CoproductVariant::Zero, &lz)?;
            let second = spec.variant.second_leg(n, mu, nu)?;
            for (sl, sc) in split.terms() {
                // terms whose momenta exceed the target degree annihilate
                // every test state and can be dropped up front
                if sl[0].p_degree() > max_deg || sl[1].p_degree() > max_deg {
                    continue;
                }
                for (m2, c2) in second.terms() {
                    gen_d01.add_term(
                        vec![sl[0].clone(), sl[1].clone(), m2.clone()],
                        sc.mul(c2).neg(),
                    );
                }
            }
        }
    }

    let space = TripleSpace::new(n, max_deg)?;
    let dim = space.basis.len();
    let mut e12 = CachedExp::new(n, &gen12);
    let mut e13 = CachedExp::new(n, &gen13);
    let mut e23 = CachedExp::new(n, &gen23);
    let mut e_1d0 = CachedExp::new(n, &gen_1d0);
    let mut e_d01 = CachedExp::new(n, &gen_d01);
    let mut report = VerificationReport::new();
    let mut cocycle_fail: Option<String> = None;
    let mut factor_fail: Option<String> = None;
    let mut triples = 0usize;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let key = [i, j, k];
                let mut unit = SparseState::new();
                unit.insert(key, UPoly::one());
                let inner = e_1d0.exp(&space, &unit)?;
                // factorization: F12 F13 and F13 F12, rightmost first
                let fa = e12.exp(&space, &e13.exp(&space, &unit)?)?;
                let fb = e13.exp(&space, &e12.exp(&space, &unit)?)?;
                if factor_fail.is_none() {
                    let at = |name: &str| {
                        format!(
                            "{name} at ({},{},{})",
                            space.basis[i], space.basis[j], space.basis[k]
                        )
                    };
                    if sparse_diff(&inner, &fa).is_some() {
                        factor_fail = Some(at("(1⊗D0)F vs F12F13"));
                    } else if sparse_diff(&inner, &fb).is_some() {
                        factor_fail = Some(at("F12F13 vs F13F12"));
                    }
                }
                let lhs = e23.exp(&space, &inner)?;
                let rhs = e12.exp(&space, &e_d01.exp(&space, &unit)?)?;
                if cocycle_fail.is_none() {
                    if let Some(bad) = sparse_diff(&lhs, &rhs) {
                        cocycle_fail = Some(format!(
                            "triple ({},{},{}), differs at ({},{},{})",
                            space.basis[i],
                            space.basis[j],
                            space.basis[k],
                            space.basis[bad[0]],
                            space.basis[bad[1]],
                            space.basis[bad[2]],
                        ));
                    }
                }
                triples += 1;
            }
        }
    }
    report.record(
        "cocycle",
        format!("{triples} triples, per-leg degree <= {max_deg}, n={n}"),
        cocycle_fail.clone().unwrap_or_else(|| "0".into()),
        cocycle_fail.is_none(),
    );
    report.record(
        "cocycle-factorization",
        format!("{triples} triples, per-leg degree <= {max_deg}, n={n}"),
        factor_fail.clone().unwrap_or_else(|| "0".into()),
        factor_fail.is_none(),
    );
    Ok(report)
}

/// Negative control: truncating `ln Z` to its first Mercator order breaks
/// the cocycle condition at degree 2 and above.
pub fn cocycle_negative_control(n: u8, max_deg: u32) -> Result<VerificationReport, Error> {
    let mut gen2 = TensorElement::zero(n, 2);
    for mu in 1..=n {
        for nu in 1..=n {
            // mutated exponent: i u p ⊗ L instead of i ln(I + u p) ⊗ L
            let first = WeylElement::p(n, mu, nu)?.scale(&UPoly::term(1, GRat::i()));
            gen2 = gen2.add(&TensorElement::from_weyl(&[first, big_l(n, mu, nu)?])?)?;
        }
    }
    let gen12 = gen2.neg().embed(3, (0, 1));
    let gen13 = gen2.neg().embed(3, (0, 2));
    let gen23 = gen2.neg().embed(3, (1, 2));
    let gen_1d0 = gen12.add(&gen13)?;
    let mut gen_d01 = TensorElement::zero(n, 3);
    for mu in 1..=n {
        for nu in 1..=n {
            let lz = WeylElement::p(n, mu, nu)?.scale(&UPoly::term(1, GRat::i()));
            let split = coproduct_momentum_elem(n, CoproductVariant::Zero, &lz)?;
            for (sl, sc) in split.terms() {
                for (m2, c2) in big_l(n, mu, nu)?.terms() {
                    gen_d01.add_term(
                        vec![sl[0].clone(), sl[1].clone(), m2.clone()],
                        sc.mul(c2).neg(),
                    );
                }
            }
        }
    }
    let basis = coord_monomials(n, max_deg);
    let mut any_nonzero = false;
    for f in &basis {
        for g in &basis {
            for h in &basis {
                let state = TensorElement::from_weyl(&[
                    f.as_weyl().clone(),
                    g.as_weyl().clone(),
                    h.as_weyl().clone(),
                ])?;
                let lhs = apply_exp(&gen23, &apply_exp(&gen_1d0, &state)?)?;
                let rhs = apply_exp(&gen12, &apply_exp(&gen_d01, &state)?)?;
                if !lhs.sub(&rhs)?.is_zero() {
                    any_nonzero = true;
                }
            }
        }
    }
    let mut report = VerificationReport::new();
    report.record(
        "cocycle-negative-control",
        format!("ln Z truncated to first order, per-leg degree <= {max_deg}"),
        if any_nonzero { "nonzero" } else { "0" }.into(),
        any_nonzero,
    );
    Ok(report)
}

/// The normal-ordered exponential form of `F^{-1}`: for `F1`,
/// `:exp(i u p[mu,nu] ⊗ x[mu,a] p[nu,a]):` expanded term by term with the
/// x-block kept left of the p-block inside the second leg (no commutator
/// corrections), truncated at order `max_deg` where the first leg
/// annihilates every test state.
pub fn normal_ordered_inverse_twist(
    n: u8,
    variant: TwistVariant,
    max_deg: u32,
) -> Result<TensorElement, Error> {
    let mut out = TensorElement::unit(n, 2);
    // ordered tuples (mu, nu, alpha) per exponent factor
    let tuples: Vec<(u8, u8, u8)> = (1..=n)
        .flat_map(|mu| (1..=n).flat_map(move |nu| (1..=n).map(move |al| (mu, nu, al))))
        .collect();
    for m in 1..=max_deg {
        let coeff = UPoly::term(
            m,
            GRat::from_big(num_rational::BigRational::new(
                1.into(),
                crate::coeff::factorial(m),
            ))
            .mul_neg_i_pow(3 * m), // i^m = (-i)^(3m)
        );
        let mut choice = vec![0usize; m as usize];
        loop {
            let mut first: Vec<(Index, u32)> = Vec::new();
            let mut second_x: Vec<(Index, u32)> = Vec::new();
            let mut second_p: Vec<(Index, u32)> = Vec::new();
            for &c in &choice {
                let (mu, nu, al) = tuples[c];
                first.push((Index::new(mu, nu), 1));
                match variant {
                    TwistVariant::F1 => {
                        second_x.push((Index::new(mu, al), 1));
                        second_p.push((Index::new(nu, al), 1));
                    }
                    TwistVariant::F2 => {
                        second_x.push((Index::new(al, nu), 1));
                        second_p.push((Index::new(al, mu), 1));
                    }
                }
            }
            out.add_term(
                vec![
                    Monomial::from_parts(vec![], first),
                    Monomial::from_parts(second_x, second_p),
                ],
                coeff.clone(),
            );
            // next tuple choice
            let mut k = 0;
            loop {
                if k == choice.len() {
                    break;
                }
                if choice[k] + 1 < tuples.len() {
                    choice[k] += 1;
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Equality of action of the normal-ordered and closed-form twists on all
/// monomial pairs of per-leg degree `<= max_deg`.
pub fn normal_ordered_twist_check(
    n: u8,
    variant: TwistVariant,
    max_deg: u32,
) -> Result<VerificationReport, Error> {
    let no_form = normal_ordered_inverse_twist(n, variant, max_deg)?;
    let gen = twist_generator(n, variant, max_deg)?;
    let basis = coord_monomials(n, max_deg);
    let mut report = VerificationReport::new();
    let mut fail: Option<String> = None;
    let mut pairs = 0usize;
    for f in &basis {
        for g in &basis {
            let state =
                TensorElement::from_weyl(&[f.as_weyl().clone(), g.as_weyl().clone()])?;
            let via_no = no_form.apply(&state)?;
            let via_closed = apply_exp(&gen, &state)?;
            let r = via_no.sub(&via_closed)?;
            if !r.is_zero() && fail.is_none() {
                fail = Some(format!("pair ({f},{g}): {r}"));
            }
            pairs += 1;
        }
    }
    report.record(
        "normal-ordered-vs-closed",
        format!("{pairs} pairs, per-leg degree <= {max_deg}, n={n}"),
        fail.clone().unwrap_or_else(|| "0".into()),
        fail.is_none(),
    );
    Ok(report)
}

/// Primitivity of `ln Z` under the deformed coproduct, checked on its
/// actual domain of validity, order by order up to u-degree `max_p`.
///
/// `Delta Z[mu,nu] = Z[mu,a] ⊗ Z[a,nu]` makes `Delta Z` the matrix product
/// of `Z ⊗ 1` and `1 ⊗ Z`. For n = 1 those commute and the entry of
/// `ln(Delta Z)` is primitive to all orders. For n >= 2 they do not commute
/// as matrices, so the elementwise identity holds only at first order; the
/// trace is still primitive to all orders because `tr ln Z = ln det Z` and
/// the determinant is multiplicative.
pub fn ln_z_primitive_check(n: u8, max_p: u32) -> Result<VerificationReport, Error> {
    let mut report = VerificationReport::new();
    let one = WeylElement::one(n);
    let primitive = |w: &WeylElement| -> Result<TensorElement, Error> {
        TensorElement::from_weyl(&[w.clone(), one.clone()])?
            .add(&TensorElement::from_weyl(&[one.clone(), w.clone()])?)
    };
    // elementwise: all orders for n = 1, first order otherwise
    let elem_order = if n == 1 { max_p } else { 1 };
    for mu in 1..=n {
        for nu in 1..=n {
            let lz = ln_z(n, mu, nu, max_p)?;
            let lhs = coproduct_momentum_elem(n, CoproductVariant::Delta, &lz)?
                .truncate_u(elem_order);
            let r = lhs.sub(&primitive(&lz)?.truncate_u(elem_order))?;
            report.record_zero(
                "lnZ-primitive-entry",
                format!("[{mu},{nu}] to u-order {elem_order}"),
                r.is_zero(),
                r.to_string(),
            );
        }
    }
    // trace: all orders, any n
    let mut trace = WeylElement::zero(n);
    for mu in 1..=n {
        trace = trace.add(&ln_z(n, mu, mu, max_p)?)?;
    }
    let lhs = coproduct_momentum_elem(n, CoproductVariant::Delta, &trace)?
        .truncate_u(max_p);
    let r = lhs.sub(&primitive(&trace)?.truncate_u(max_p))?;
    report.record_zero(
        "lnZ-primitive-trace",
        format!("tr ln Z to u-order {max_p}"),
        r.is_zero(),
        r.to_string(),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_z_first_orders() {
        // n=1: ln(1 + u p) = u p - u^2 p^2/2 + u^3 p^3/3
        let lz = ln_z(1, 1, 1, 3).unwrap();
        let p = WeylElement::p(1, 1, 1).unwrap();
        let expected = p
            .scale(&UPoly::u())
            .add(&p.mul(&p).unwrap().scale(&UPoly::term(2, GRat::from_ratio(-1, 2))))
            .unwrap()
            .add(
                &p.mul(&p)
                    .unwrap()
                    .mul(&p)
                    .unwrap()
                    .scale(&UPoly::term(3, GRat::from_ratio(1, 3))),
            )
            .unwrap();
        assert_eq!(lz, expected);
    }

    #[test]
    fn twist_fixes_constant_first_leg() {
        // 1 ⊗ f is unchanged: ln Z annihilates the constant first leg
        let spec = TwistSpec::new(TwistVariant::F1, 4);
        let n = 2;
        let f = WeylElement::x(n, 1, 2).unwrap();
        let state = TensorElement::from_weyl(&[WeylElement::one(n), f]).unwrap();
        let out = twist_inverse_apply(&spec, &state).unwrap();
        assert_eq!(out, state);
    }

    #[test]
    fn twist_recovers_first_realization() {
        // m F1^{-1}(act⊗1)(x11 ⊗ 1) = x11 + u x[1,a] p[1,a]
        let spec = TwistSpec::new(TwistVariant::F1, 4);
        for n in 1..=3u8 {
            let report = realization_from_twist(&spec, n).unwrap();
            assert!(report.all_pass(), "n={n}:\n{report}");
        }
    }

    #[test]
    fn twist_recovers_dual_realization() {
        let spec = TwistSpec::new(TwistVariant::F2, 4);
        for n in 1..=3u8 {
            let report = realization_from_twist(&spec, n).unwrap();
            assert!(report.all_pass(), "n={n}:\n{report}");
        }
    }

    #[test]
    fn f2_on_x12_gives_yh12() {
        let spec = TwistSpec::new(TwistVariant::F2, 2);
        let n = 2;
        let state = TensorElement::from_weyl(&[
            WeylElement::x(n, 1, 2).unwrap(),
            WeylElement::one(n),
        ])
        .unwrap();
        let out = twist_inverse_apply(&spec, &state)
            .unwrap()
            .multiply_legs()
            .unwrap();
        // x12 + u x[a,2] p[a,1]
        let expected = build_realization(n, Variant::DualOfFirst).unwrap();
        assert_eq!(&out, expected.generator(1, 2));
    }

    #[test]
    fn degree_guard_fires() {
        let spec = TwistSpec::new(TwistVariant::F1, 1);
        let n = 1;
        let x = WeylElement::x(n, 1, 1).unwrap();
        let state =
            TensorElement::from_weyl(&[x.mul(&x).unwrap(), WeylElement::one(n)]).unwrap();
        assert!(matches!(
            twist_inverse_apply(&spec, &state),
            Err(Error::DegreeGuardExceeded { .. })
        ));
    }

    #[test]
    fn twisted_coproduct_small() {
        for variant in [TwistVariant::F1, TwistVariant::F2] {
            let spec = TwistSpec::new(variant, 4);
            let report = twisted_coproduct_check(&spec, 1, 2).unwrap();
            assert!(report.all_pass(), "{variant:?}:\n{report}");
            let report = twisted_coproduct_check(&spec, 2, 2).unwrap();
            assert!(report.all_pass(), "{variant:?}:\n{report}");
        }
    }

    #[test]
    fn twisted_coproduct_negative_control() {
        let report = twist_negative_control(2, 2).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn cocycle_small() {
        let spec = TwistSpec::new(TwistVariant::F1, 6);
        let report = cocycle_check(&spec, 1, 3).unwrap();
        assert!(report.all_pass(), "{report}");
        let report = cocycle_check(&spec, 2, 2).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn cocycle_f2_small() {
        let spec = TwistSpec::new(TwistVariant::F2, 4);
        let report = cocycle_check(&spec, 2, 2).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn cocycle_negative_control_detects_mutation() {
        let report = cocycle_negative_control(1, 2).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn normal_ordered_form_matches_closed_form() {
        for variant in [TwistVariant::F1, TwistVariant::F2] {
            let report = normal_ordered_twist_check(1, variant, 3).unwrap();
            assert!(report.all_pass(), "{variant:?}:\n{report}");
            let report = normal_ordered_twist_check(2, variant, 2).unwrap();
            assert!(report.all_pass(), "{variant:?}:\n{report}");
        }
    }

    #[test]
    fn ln_z_is_primitive_under_delta() {
        for n in 1..=3u8 {
            let report = ln_z_primitive_check(n, 3).unwrap();
            assert!(report.all_pass(), "n={n}:\n{report}");
        }
    }

    #[test]
    fn ln_z_entry_primitivity_obstruction_at_second_order() {
        // the n=2 elementwise identity genuinely fails beyond first order:
        // residual is the leg-antisymmetric commutator contribution
        let n = 2;
        let lz = ln_z(n, 1, 1, 2).unwrap();
        let one = WeylElement::one(n);
        let lhs = coproduct_momentum_elem(n, CoproductVariant::Delta, &lz).unwrap();
        let rhs = TensorElement::from_weyl(&[lz.clone(), one.clone()])
            .unwrap()
            .add(&TensorElement::from_weyl(&[one, lz]).unwrap())
            .unwrap();
        let r = lhs.sub(&rhs).unwrap().truncate_u(2);
        assert!(!r.is_zero());
        // leg-antisymmetric: swapping legs negates it
        assert!(r.leg_swap().add(&r).unwrap().is_zero());
    }
}
