//! Tensor products of Weyl-algebra elements over 2 or 3 factors:
//! coproducts of momenta, twist legs, and the states the extensional
//! operator checks act on.
//!
//! Terms are kept in multilinearity normal form: the scalar coefficient is
//! pulled out to a top-level [`UPoly`] and each leg is a bare normal-ordered
//! monomial. Serialized form joins leg monomials with `⊗`.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::UPoly;
use crate::error::Error;
use crate::report::VerificationReport;
use crate::weyl::{Index, Monomial, WeylElement};

/// A finite sum of elementary tensors with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    n: u8,
    legs: usize,
    terms: BTreeMap<Vec<Monomial>, UPoly>,
}

impl TensorElement {
    pub fn zero(n: u8, legs: usize) -> Self {
        TensorElement {
            n,
            legs,
            terms: BTreeMap::new(),
        }
    }

    /// `1 ⊗ 1 [⊗ 1]`.
    pub fn unit(n: u8, legs: usize) -> Self {
        let mut t = TensorElement::zero(n, legs);
        t.add_term(vec![Monomial::one(); legs], UPoly::one());
        t
    }

    /// Elementary tensor of full Weyl elements; coefficients are pulled up.
    pub fn from_weyl(factors: &[WeylElement]) -> Result<Self, Error> {
        let n = factors
            .first()
            .map(|w| w.n())
            .ok_or_else(|| Error::InvalidSpec("empty tensor".into()))?;
        for w in factors {
            if w.n() != n {
                return Err(Error::DimensionMismatch(n, w.n()));
            }
        }
        let mut out = TensorElement::zero(n, factors.len());
        let mut stack: Vec<(Vec<Monomial>, UPoly)> = vec![(Vec::new(), UPoly::one())];
        for w in factors {
            let mut next = Vec::new();
            for (legs, coeff) in &stack {
                for (m, c) in w.terms() {
                    let mut legs2 = legs.clone();
                    legs2.push(m.clone());
                    next.push((legs2, coeff.mul(c)));
                }
            }
            stack = next;
        }
        for (legs, coeff) in stack {
            out.add_term(legs, coeff);
        }
        Ok(out)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &UPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, legs: Vec<Monomial>, c: UPoly) {
        debug_assert_eq!(legs.len(), self.legs);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(legs) {
            Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check(&self, rhs: &TensorElement) -> Result<(), Error> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(self.n, rhs.n));
        }
        if self.legs != rhs.legs {
            return Err(Error::LegMismatch(self.legs, rhs.legs));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &TensorElement) -> Result<TensorElement, Error> {
        self.check(rhs)?;
        let mut out = self.clone();
        for (legs, c) in &rhs.terms {
            out.add_term(legs.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &TensorElement) -> Result<TensorElement, Error> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> TensorElement {
        TensorElement {
            n: self.n,
            legs: self.legs,
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &UPoly) -> TensorElement {
        let mut out = TensorElement::zero(self.n, self.legs);
        for (l, k) in &self.terms {
            out.add_term(l.clone(), k.mul(c));
        }
        out
    }

    /// Leg-wise algebra product (normal ordering within each leg).
    pub fn mul(&self, rhs: &TensorElement) -> Result<TensorElement, Error> {
        self.check(rhs)?;
        let mut out = TensorElement::zero(self.n, self.legs);
        for (la, ca) in &self.terms {
            for (lb, cb) in &rhs.terms {
                let coeff = ca.mul(cb);
                // per-leg Wick expansions, distributed
                let mut partial: Vec<(Vec<Monomial>, UPoly)> =
                    vec![(Vec::new(), coeff)];
                for leg in 0..self.legs {
                    let products = la[leg].mul(&lb[leg]);
                    let mut next = Vec::new();
                    for (legs_acc, c_acc) in &partial {
                        for (m, wick) in &products {
                            let mut legs2 = legs_acc.clone();
                            legs2.push(m.clone());
                            next.push((legs2, c_acc.scale(wick)));
                        }
                    }
                    partial = next;
                }
                for (legs, c) in partial {
                    out.add_term(legs, c);
                }
            }
        }
        Ok(out)
    }

    /// Interchange of the tensor factors (2 legs).
    pub fn leg_swap(&self) -> TensorElement {
        debug_assert_eq!(self.legs, 2);
        TensorElement {
            n: self.n,
            legs: 2,
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (vec![l[1].clone(), l[0].clone()], c.clone()))
                .collect(),
        }
    }

    /// Place a 2-leg element into `legs` slots of a wider tensor, identity
    /// elsewhere. `pos = (i, j)` with `i != j`, 0-based.
    pub fn embed(&self, legs: usize, pos: (usize, usize)) -> TensorElement {
        debug_assert_eq!(self.legs, 2);
        let mut out = TensorElement::zero(self.n, legs);
        for (l, c) in &self.terms {
            let mut wide = vec![Monomial::one(); legs];
            wide[pos.0] = l[0].clone();
            wide[pos.1] = l[1].clone();
            out.add_term(wide, c.clone());
        }
        out
    }

    /// Drop all terms whose coefficient u-degree exceeds `order`.
    pub fn truncate_u(&self, order: u32) -> TensorElement {
        let mut out = TensorElement::zero(self.n, self.legs);
        for (l, c) in &self.terms {
            out.add_term(l.clone(), c.truncate(order));
        }
        out
    }

    /// The substitution `u -> -u`.
    pub fn flip_u(&self) -> TensorElement {
        TensorElement {
            n: self.n,
            legs: self.legs,
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l.clone(), c.flip_u()))
                .collect(),
        }
    }

    /// Leg-wise action on a state whose legs are coordinate polynomials:
    /// each leg of `self` acts via the Heisenberg action on the matching
    /// leg of `state`.
    pub fn apply(&self, state: &TensorElement) -> Result<TensorElement, Error> {
        self.check(state)?;
        let mut out = TensorElement::zero(self.n, self.legs);
        for (ol, oc) in &self.terms {
            'state: for (sl, sc) in &state.terms {
                let mut legs = Vec::with_capacity(self.legs);
                let mut wick = crate::coeff::GRat::one();
                for leg in 0..self.legs {
                    match ol[leg].act_on_coord(&sl[leg]) {
                        Some((m, c)) => {
                            legs.push(m);
                            wick = wick.mul(&c);
                        }
                        None => continue 'state,
                    }
                }
                out.add_term(legs, oc.mul(sc).scale(&wick));
            }
        }
        Ok(out)
    }

    /// The multiplication map `m`: multiply all legs together (left to
    /// right) into a single Weyl element.
    pub fn multiply_legs(&self) -> Result<WeylElement, Error> {
        let mut out = WeylElement::zero(self.n);
        for (l, c) in &self.terms {
            let mut acc = WeylElement::scalar(self.n, c.clone());
            for m in l {
                acc = acc.mul(&WeylElement::from_terms(
                    self.n,
                    [(m.clone(), UPoly::one())],
                )?)?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    pub fn max_x_degree_leg(&self, leg: usize) -> u32 {
        self.terms
            .keys()
            .map(|l| l[leg].x_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn total_x_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|l| l.iter().map(|m| m.x_degree()).sum())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.iter().count() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            let legs = l
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(" ⊗ ");
            if cs == "1" {
                write!(f, "{legs}")?;
            } else {
                write!(f, "{cs} * {legs}")?;
            }
        }
        Ok(())
    }
}

/// Which coproduct of momenta to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoproductVariant {
    /// Primitive `p ⊗ 1 + 1 ⊗ p`.
    Zero,
    /// `p ⊗ 1 + 1 ⊗ p + u p[mu,a] ⊗ p[a,nu]`.
    Delta,
    /// Leg-swapped deformation `p ⊗ 1 + 1 ⊗ p + u p[a,nu] ⊗ p[mu,a]`.
    DeltaTilde,
}

/// Coproduct of the momentum generator `p[mu,nu]` as a 2-leg element.
pub fn coproduct(n: u8, variant: CoproductVariant, mu: u8, nu: u8) -> Result<TensorElement, Error> {
    Index::new(mu, nu).check(n)?;
    let mut t = TensorElement::zero(n, 2);
    let pmn = Monomial::p(Index::new(mu, nu));
    t.add_term(vec![pmn.clone(), Monomial::one()], UPoly::one());
    t.add_term(vec![Monomial::one(), pmn], UPoly::one());
    match variant {
        CoproductVariant::Zero => {}
        CoproductVariant::Delta => {
            for al in 1..=n {
                t.add_term(
                    vec![
                        Monomial::p(Index::new(mu, al)),
                        Monomial::p(Index::new(al, nu)),
                    ],
                    UPoly::u(),
                );
            }
        }
        CoproductVariant::DeltaTilde => {
            for al in 1..=n {
                t.add_term(
                    vec![
                        Monomial::p(Index::new(al, nu)),
                        Monomial::p(Index::new(mu, al)),
                    ],
                    UPoly::u(),
                );
            }
        }
    }
    Ok(t)
}

/// Multiplicative extension of the coproduct to a momentum-only Weyl
/// element (the momenta form a commutative subalgebra, so the coproduct is
/// an algebra map there).
pub fn coproduct_momentum_elem(
    n: u8,
    variant: CoproductVariant,
    w: &WeylElement,
) -> Result<TensorElement, Error> {
    if !w.is_momentum_only() {
        return Err(Error::NotMomentumPoly);
    }
    let mut out = TensorElement::zero(n, 2);
    for (m, c) in w.terms() {
        let mut acc = TensorElement::unit(n, 2);
        for (g, e) in m.ps() {
            let dp = coproduct(n, variant, g.mu, g.nu)?;
            for _ in 0..*e {
                acc = acc.mul(&dp)?;
            }
        }
        out = out.add(&acc.scale(c))?;
    }
    Ok(out)
}

/// Coassociativity `(D ⊗ 1) D p = (1 ⊗ D) D p` checked exactly for every
/// index pair.
pub fn coassoc_check(n: u8, variant: CoproductVariant) -> Result<VerificationReport, Error> {
    let mut report = VerificationReport::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let dp = coproduct(n, variant, mu, nu)?;
            let lhs = apply_coproduct_to_leg(&dp, variant, 0)?;
            let rhs = apply_coproduct_to_leg(&dp, variant, 1)?;
            let r = lhs.sub(&rhs)?;
            report.record_zero(
                "coassociativity",
                format!("[{mu},{nu}]"),
                r.is_zero(),
                r.to_string(),
            );
        }
    }
    Ok(report)
}

/// Apply the coproduct to one leg of a 2-leg momentum tensor, producing a
/// 3-leg tensor.
pub fn apply_coproduct_to_leg(
    t: &TensorElement,
    variant: CoproductVariant,
    leg: usize,
) -> Result<TensorElement, Error> {
    debug_assert_eq!(t.legs(), 2);
    let n = t.n();
    let mut out = TensorElement::zero(n, 3);
    for (l, c) in t.terms() {
        let target = WeylElement::from_terms(n, [(l[leg].clone(), UPoly::one())])?;
        let split = coproduct_momentum_elem(n, variant, &target)?;
        let other = &l[1 - leg];
        for (sl, sc) in split.terms() {
            let wide = if leg == 0 {
                vec![sl[0].clone(), sl[1].clone(), other.clone()]
            } else {
                vec![other.clone(), sl[0].clone(), sl[1].clone()]
            };
            out.add_term(wide, c.mul(sc));
        }
    }
    Ok(out)
}

/// Negative control for coassociativity: the deformation term with its
/// index pattern transposed is not coassociative.
pub fn coassoc_negative_control(n: u8) -> Result<VerificationReport, Error> {
    let mut report = VerificationReport::new();
    // mutated coproduct: u p[a,mu] ⊗ p[nu,a] (transposed pattern)
    let mutated = |mu: u8, nu: u8| -> Result<TensorElement, Error> {
        let mut t = coproduct(n, CoproductVariant::Zero, mu, nu)?;
        for al in 1..=n {
            t.add_term(
                vec![
                    Monomial::p(Index::new(al, mu)),
                    Monomial::p(Index::new(nu, al)),
                ],
                UPoly::u(),
            );
        }
        Ok(t)
    };
    // coassociativity of the mutated map, extended multiplicatively by hand
    let mut any_nonzero = false;
    for mu in 1..=n {
        for nu in 1..=n {
            let dp = mutated(mu, nu)?;
            // split each leg using the mutated map
            let split_leg = |t: &TensorElement, leg: usize| -> Result<TensorElement, Error> {
                let mut out = TensorElement::zero(n, 3);
                for (l, c) in t.terms() {
                    let mono = &l[leg];
                    // multiplicative extension of the mutated map
                    let mut acc = TensorElement::unit(n, 2);
                    for (g, e) in mono.ps() {
                        let dp = mutated(g.mu, g.nu)?;
                        for _ in 0..*e {
                            acc = acc.mul(&dp)?;
                        }
                    }
                    let other = &l[1 - leg];
                    for (sl, sc) in acc.terms() {
                        let wide = if leg == 0 {
                            vec![sl[0].clone(), sl[1].clone(), other.clone()]
                        } else {
                            vec![other.clone(), sl[0].clone(), sl[1].clone()]
                        };
                        out.add_term(wide, c.mul(sc));
                    }
                }
                Ok(out)
            };
            let r = split_leg(&dp, 0)?.sub(&split_leg(&dp, 1)?)?;
            if !r.is_zero() {
                any_nonzero = true;
            }
        }
    }
    report.record(
        "coassociativity-negative-control",
        "transposed-index-pattern".into(),
        if any_nonzero { "nonzero" } else { "0" }.into(),
        any_nonzero,
    );
    Ok(report)
}

/// `Delta Z[mu,nu] = d(mu,nu) 1⊗1 + u Delta p[mu,nu]` equals
/// `sum_a Z[mu,a] ⊗ Z[a,nu]`, exactly.
pub fn z_multiplicativity_check(n: u8) -> Result<VerificationReport, Error> {
    use crate::realization::big_z;
    let mut report = VerificationReport::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let mut lhs = coproduct(n, CoproductVariant::Delta, mu, nu)?.scale(&UPoly::u());
            if mu == nu {
                lhs = lhs.add(&TensorElement::unit(n, 2))?;
            }
            let mut rhs = TensorElement::zero(n, 2);
            for al in 1..=n {
                rhs = rhs.add(&TensorElement::from_weyl(&[
                    big_z(n, mu, al)?,
                    big_z(n, al, nu)?,
                ])?)?;
            }
            let r = lhs.sub(&rhs)?;
            report.record_zero(
                "Z-multiplicativity",
                format!("[{mu},{nu}]"),
                r.is_zero(),
                r.to_string(),
            );
        }
    }
    Ok(report)
}

/// Flip duality: `Dt p` is the leg swap of `D p` for every index pair.
pub fn flip_duality_check(n: u8) -> Result<VerificationReport, Error> {
    let mut report = VerificationReport::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let d = coproduct(n, CoproductVariant::Delta, mu, nu)?;
            let dt = coproduct(n, CoproductVariant::DeltaTilde, mu, nu)?;
            let r = dt.sub(&d.leg_swap())?;
            report.record_zero(
                "flip-duality",
                format!("[{mu},{nu}]"),
                r.is_zero(),
                r.to_string(),
            );
        }
    }
    Ok(report)
}
