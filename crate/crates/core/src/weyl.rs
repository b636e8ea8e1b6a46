//! The generalized Heisenberg algebra on `n^2` coordinates `x[mu,nu]` and
//! `n^2` momenta `p[mu,nu]` with
//!
//! ```text
//! [x,x] = 0,   [p,p] = 0,   [p[mu,nu], x[alpha,beta]] = -i d(mu,alpha) d(nu,beta)
//! ```
//!
//! Elements are finite sums of normal-ordered monomials (all coordinates to
//! the left of all momenta, each block sorted by `(mu,nu)`), with [`UPoly`]
//! coefficients. All arithmetic is exact.
//!
//! Canonical text form, used by reports and golden tests:
//!
//! ```text
//! element  := "0" | term (" + " term)*
//! term     := coeff (" * " factor)*            (coeff omitted when 1 and factors exist)
//! coeff    := UPoly, parenthesized when it has several u-terms
//! factor   := ("x" | "p") "[" mu "," nu "]" ("^" exp)?
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::coeff::{binomial, factorial, GRat, UPoly};
use crate::error::Error;

/// 1-based index pair of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index {
    pub mu: u8,
    pub nu: u8,
}

impl Index {
    pub fn new(mu: u8, nu: u8) -> Self {
        Index { mu, nu }
    }

    pub fn check(&self, n: u8) -> Result<(), Error> {
        if self.mu < 1 || self.mu > n || self.nu < 1 || self.nu > n {
            return Err(Error::IndexOutOfRange {
                mu: self.mu,
                nu: self.nu,
                n,
            });
        }
        Ok(())
    }
}

/// Which of the two generator families an index refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Coordinate,
    Momentum,
}

/// A single generator, the letters of [`crate::weyl::WeylElement::normal_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub kind: Kind,
    pub idx: Index,
}

impl Generator {
    pub fn x(mu: u8, nu: u8) -> Self {
        Generator {
            kind: Kind::Coordinate,
            idx: Index::new(mu, nu),
        }
    }

    pub fn p(mu: u8, nu: u8) -> Self {
        Generator {
            kind: Kind::Momentum,
            idx: Index::new(mu, nu),
        }
    }
}

/// A normal-ordered monomial: sorted exponent lists for the coordinate block
/// and the momentum block. No zero exponents are stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    xs: Vec<(Index, u32)>,
    ps: Vec<(Index, u32)>,
}

fn merge_exponents(a: &[(Index, u32)], b: &[(Index, u32)]) -> Vec<(Index, u32)> {
    let mut map: BTreeMap<Index, u32> = BTreeMap::new();
    for (g, e) in a.iter().chain(b.iter()) {
        *map.entry(*g).or_insert(0) += e;
    }
    map.into_iter().filter(|(_, e)| *e > 0).collect()
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_parts(xs: Vec<(Index, u32)>, ps: Vec<(Index, u32)>) -> Self {
        Monomial {
            xs: merge_exponents(&xs, &[]),
            ps: merge_exponents(&ps, &[]),
        }
    }

    pub fn x(idx: Index) -> Self {
        Monomial {
            xs: vec![(idx, 1)],
            ps: vec![],
        }
    }

    pub fn p(idx: Index) -> Self {
        Monomial {
            xs: vec![],
            ps: vec![(idx, 1)],
        }
    }

    pub fn xs(&self) -> &[(Index, u32)] {
        &self.xs
    }

    pub fn ps(&self) -> &[(Index, u32)] {
        &self.ps
    }

    pub fn is_one(&self) -> bool {
        self.xs.is_empty() && self.ps.is_empty()
    }

    pub fn x_degree(&self) -> u32 {
        self.xs.iter().map(|(_, e)| e).sum()
    }

    pub fn p_degree(&self) -> u32 {
        self.ps.iter().map(|(_, e)| e).sum()
    }

    /// Action of this monomial on a coordinate monomial: momenta
    /// differentiate (`-i d/dx` each), then the coordinate block
    /// multiplies. Returns `None` when annihilated.
    pub fn act_on_coord(&self, target: &Monomial) -> Option<(Monomial, GRat)> {
        debug_assert!(target.ps.is_empty());
        // quick reject on total degree
        if self.p_degree() > target.x_degree() {
            return None;
        }
        let mut exps: Vec<(Index, u32)> = target.xs.clone();
        let mut coeff = BigRational::from_integer(1.into());
        let mut total_p = 0u32;
        for (g, k) in &self.ps {
            let e = exps.iter().find(|(h, _)| h == g).map(|(_, e)| *e).unwrap_or(0);
            if e < *k {
                return None;
            }
            let fall = factorial(e) / factorial(e - k);
            coeff *= BigRational::from_integer(fall);
            total_p += k;
            for (h, ee) in exps.iter_mut() {
                if h == g {
                    *ee -= k;
                }
            }
        }
        exps.retain(|(_, e)| *e > 0);
        let mono = Monomial {
            xs: merge_exponents(&self.xs, &exps),
            ps: vec![],
        };
        let c = GRat::from_big(coeff).mul_neg_i_pow(total_p);
        Some((mono, c))
    }

    /// Normal-ordered product of two monomials. Moving the left factor's
    /// momentum block past the right factor's coordinate block produces the
    /// Wick sum
    ///
    /// ```text
    /// p^a x^b = sum_j C(a,j) C(b,j) j! (-i)^j x^(b-j) p^(a-j)
    /// ```
    ///
    /// per shared index; distinct indices commute.
    pub fn mul(&self, rhs: &Monomial) -> Vec<(Monomial, GRat)> {
        // Indices appearing in both self.ps and rhs.xs need contraction terms.
        let mut shared: Vec<(Index, u32, u32)> = Vec::new();
        for (g, a) in &self.ps {
            if let Some((_, b)) = rhs.xs.iter().find(|(h, _)| h == g) {
                shared.push((*g, *a, *b));
            }
        }
        let mut out: Vec<(Monomial, GRat)> = Vec::new();
        // Iterate over all contraction multi-indices j = (j_g).
        let mut js = vec![0u32; shared.len()];
        loop {
            let mut coeff = GRat::one();
            let mut total_j = 0u32;
            for (k, (_, a, b)) in shared.iter().enumerate() {
                let j = js[k];
                total_j += j;
                let c = binomial(*a, j) * binomial(*b, j) * factorial(j);
                coeff = coeff.mul(&GRat::from_big(BigRational::from_integer(c)));
            }
            coeff = coeff.mul_neg_i_pow(total_j);

            let mut ps_left: Vec<(Index, u32)> = self.ps.clone();
            let mut xs_right: Vec<(Index, u32)> = rhs.xs.clone();
            for (k, (g, _, _)) in shared.iter().enumerate() {
                let j = js[k];
                for (h, e) in ps_left.iter_mut() {
                    if h == g {
                        *e -= j;
                    }
                }
                for (h, e) in xs_right.iter_mut() {
                    if h == g {
                        *e -= j;
                    }
                }
            }
            let mono = Monomial {
                xs: merge_exponents(&self.xs, &xs_right),
                ps: merge_exponents(&ps_left, &rhs.ps),
            };
            out.push((mono, coeff));

            // advance the multi-index
            let mut k = 0;
            loop {
                if k == shared.len() {
                    return out;
                }
                if js[k] < shared[k].1.min(shared[k].2) {
                    js[k] += 1;
                    break;
                }
                js[k] = 0;
                k += 1;
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (g, e) in &self.xs {
            if *e == 1 {
                parts.push(format!("x[{},{}]", g.mu, g.nu));
            } else {
                parts.push(format!("x[{},{}]^{}", g.mu, g.nu, e));
            }
        }
        for (g, e) in &self.ps {
            if *e == 1 {
                parts.push(format!("p[{},{}]", g.mu, g.nu));
            } else {
                parts.push(format!("p[{},{}]^{}", g.mu, g.nu, e));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// A finite sum of normal-ordered monomials with [`UPoly`] coefficients,
/// tagged with the dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    n: u8,
    terms: BTreeMap<Monomial, UPoly>,
}

impl WeylElement {
    pub fn zero(n: u8) -> Self {
        WeylElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: u8) -> Self {
        WeylElement::scalar(n, UPoly::one())
    }

    pub fn scalar(n: u8, c: UPoly) -> Self {
        let mut w = WeylElement::zero(n);
        w.add_term(Monomial::one(), c);
        w
    }

    pub fn x(n: u8, mu: u8, nu: u8) -> Result<Self, Error> {
        let idx = Index::new(mu, nu);
        idx.check(n)?;
        let mut w = WeylElement::zero(n);
        w.add_term(Monomial::x(idx), UPoly::one());
        Ok(w)
    }

    pub fn p(n: u8, mu: u8, nu: u8) -> Result<Self, Error> {
        let idx = Index::new(mu, nu);
        idx.check(n)?;
        let mut w = WeylElement::zero(n);
        w.add_term(Monomial::p(idx), UPoly::one());
        Ok(w)
    }

    pub fn from_terms(
        n: u8,
        terms: impl IntoIterator<Item = (Monomial, UPoly)>,
    ) -> Result<Self, Error> {
        let mut w = WeylElement::zero(n);
        for (m, c) in terms {
            for (g, _) in m.xs().iter().chain(m.ps().iter()) {
                g.check(n)?;
            }
            w.add_term(m, c);
        }
        Ok(w)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &UPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_coord_only(&self) -> bool {
        self.terms.keys().all(|m| m.ps().is_empty())
    }

    pub fn is_momentum_only(&self) -> bool {
        self.terms.keys().all(|m| m.xs().is_empty())
    }

    pub fn coeff(&self, m: &Monomial) -> UPoly {
        self.terms.get(m).cloned().unwrap_or_else(UPoly::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: UPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    fn check_dim(&self, rhs: &WeylElement) -> Result<(), Error> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(self.n, rhs.n));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &WeylElement) -> Result<WeylElement, Error> {
        self.check_dim(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &WeylElement) -> Result<WeylElement, Error> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> WeylElement {
        WeylElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &UPoly) -> WeylElement {
        let mut out = WeylElement::zero(self.n);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k.mul(c));
        }
        out
    }

    /// Exact normal-ordered product.
    pub fn mul(&self, rhs: &WeylElement) -> Result<WeylElement, Error> {
        self.check_dim(rhs)?;
        let mut out = WeylElement::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let cc = ca.mul(cb);
                for (m, wick) in ma.mul(mb) {
                    out.add_term(m, cc.scale(&wick));
                }
            }
        }
        Ok(out)
    }

    /// `[self, rhs] = self*rhs - rhs*self`, exact.
    pub fn commutator(&self, rhs: &WeylElement) -> Result<WeylElement, Error> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    /// Normal-ordered expansion of an arbitrary word of generators.
    pub fn normal_order(n: u8, factors: &[Generator]) -> Result<WeylElement, Error> {
        let mut acc = WeylElement::one(n);
        for g in factors {
            g.idx.check(n)?;
            let f = match g.kind {
                Kind::Coordinate => WeylElement::x(n, g.idx.mu, g.idx.nu)?,
                Kind::Momentum => WeylElement::p(n, g.idx.mu, g.idx.nu)?,
            };
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    /// The substitution `u -> -u` applied to every coefficient.
    pub fn flip_u(&self) -> WeylElement {
        WeylElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.flip_u()))
                .collect(),
        }
    }

    /// Drop all terms whose coefficient u-degree exceeds `order`.
    pub fn truncate_u(&self, order: u32) -> WeylElement {
        let mut out = WeylElement::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.truncate(order));
        }
        out
    }

    /// Minimum u-degree over all coefficients, `None` when zero.
    pub fn u_valuation(&self) -> Option<u32> {
        self.terms.values().filter_map(|c| c.valuation()).min()
    }

    pub fn max_x_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.x_degree()).max().unwrap_or(0)
    }

    pub fn max_p_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.p_degree()).max().unwrap_or(0)
    }

    /// The action on coordinate polynomials: each normal-ordered term acts
    /// right to left, momenta as `-i d/dx`, coordinates as multiplication.
    pub fn act(&self, f: &CoordPoly) -> Result<CoordPoly, Error> {
        self.check_dim(&f.0)?;
        let mut out = WeylElement::zero(self.n);
        for (m, c) in &self.terms {
            for (fm, fc) in &f.0.terms {
                if let Some((mono, w)) = m.act_on_coord(fm) {
                    out.add_term(mono, c.mul(fc).scale(&w));
                }
            }
        }
        Ok(CoordPoly(out))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.iter().count() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            if m.is_one() {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{cs} * {m}")?;
            }
        }
        Ok(())
    }
}

/// A [`WeylElement`] containing no momenta: the polynomial test functions
/// that the action operates on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordPoly(WeylElement);

impl CoordPoly {
    pub fn new(w: WeylElement) -> Result<Self, Error> {
        if !w.is_coord_only() {
            return Err(Error::NotCoordPoly);
        }
        Ok(CoordPoly(w))
    }

    pub fn one(n: u8) -> Self {
        CoordPoly(WeylElement::one(n))
    }

    pub fn zero(n: u8) -> Self {
        CoordPoly(WeylElement::zero(n))
    }

    pub fn var(n: u8, mu: u8, nu: u8) -> Result<Self, Error> {
        Ok(CoordPoly(WeylElement::x(n, mu, nu)?))
    }

    pub fn as_weyl(&self) -> &WeylElement {
        &self.0
    }

    pub fn into_weyl(self) -> WeylElement {
        self.0
    }

    pub fn add(&self, rhs: &CoordPoly) -> Result<CoordPoly, Error> {
        Ok(CoordPoly(self.0.add(&rhs.0)?))
    }

    pub fn sub(&self, rhs: &CoordPoly) -> Result<CoordPoly, Error> {
        Ok(CoordPoly(self.0.sub(&rhs.0)?))
    }

    pub fn mul(&self, rhs: &CoordPoly) -> Result<CoordPoly, Error> {
        Ok(CoordPoly(self.0.mul(&rhs.0)?))
    }

    pub fn scale(&self, c: &UPoly) -> CoordPoly {
        CoordPoly(self.0.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree(&self) -> u32 {
        self.0.max_x_degree()
    }
}

impl fmt::Display for CoordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All coordinate monomials of total degree `<= max_deg` in the `n^2`
/// variables, in canonical order. Degree-complete test bases for the
/// extensional operator checks.
pub fn coord_monomials(n: u8, max_deg: u32) -> Vec<CoordPoly> {
    let vars: Vec<Index> = (1..=n)
        .flat_map(|mu| (1..=n).map(move |nu| Index::new(mu, nu)))
        .collect();
    let mut out = Vec::new();
    let mut current: Vec<(Index, u32)> = Vec::new();
    fn rec(
        vars: &[Index],
        pos: usize,
        left: u32,
        current: &mut Vec<(Index, u32)>,
        out: &mut Vec<Vec<(Index, u32)>>,
    ) {
        if pos == vars.len() {
            out.push(current.clone());
            return;
        }
        for e in 0..=left {
            if e > 0 {
                current.push((vars[pos], e));
            }
            rec(vars, pos + 1, left - e, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(&vars, 0, max_deg, &mut current, &mut raw);
    raw.sort();
    raw.dedup();
    for exps in raw {
        let mono = Monomial::from_parts(exps, vec![]);
        let mut w = WeylElement::zero(n);
        w.add_term(mono, UPoly::one());
        out.push(CoordPoly(w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: u8, mu: u8, nu: u8) -> WeylElement {
        WeylElement::x(n, mu, nu).unwrap()
    }

    fn p(n: u8, mu: u8, nu: u8) -> WeylElement {
        WeylElement::p(n, mu, nu).unwrap()
    }

    #[test]
    fn normal_order_single_swap() {
        // p11 * x11 = x11 p11 - i
        let w = WeylElement::normal_order(1, &[Generator::p(1, 1), Generator::x(1, 1)]).unwrap();
        let expected = x(1, 1, 1)
            .mul(&p(1, 1, 1))
            .unwrap()
            .add(&WeylElement::scalar(1, UPoly::i().neg()))
            .unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn normal_order_already_ordered() {
        let w = WeylElement::normal_order(2, &[Generator::x(1, 2), Generator::x(2, 1)]).unwrap();
        assert_eq!(w.num_terms(), 1);
        assert_eq!(w.to_string(), "x[1,2] x[2,1]");
    }

    #[test]
    fn normal_order_double_swap() {
        // p11 x11 x11 = x11^2 p11 - 2i x11
        let w = WeylElement::normal_order(
            1,
            &[Generator::p(1, 1), Generator::x(1, 1), Generator::x(1, 1)],
        )
        .unwrap();
        let x11 = x(1, 1, 1);
        let expected = x11
            .mul(&x11)
            .unwrap()
            .mul(&p(1, 1, 1))
            .unwrap()
            .add(&x11.scale(&UPoly::constant(GRat::i().mul(&GRat::from_int(-2)))))
            .unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn normal_order_rejects_bad_index() {
        let err = WeylElement::normal_order(2, &[Generator::x(3, 1)]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { .. }));
    }

    #[test]
    fn multiply_examples() {
        // x11 * p11 stays put
        let a = x(1, 1, 1).mul(&p(1, 1, 1)).unwrap();
        assert_eq!(a.to_string(), "x[1,1] p[1,1]");
        // p11 * x11 picks up -i
        let b = p(1, 1, 1).mul(&x(1, 1, 1)).unwrap();
        assert_eq!(b.to_string(), "-I + x[1,1] p[1,1]");
        // (x11 p21)(x21 p11) = x11 x21 p21 p11 - i x11 p11
        let lhs = x(2, 1, 1)
            .mul(&p(2, 2, 1))
            .unwrap()
            .mul(&x(2, 2, 1).mul(&p(2, 1, 1)).unwrap())
            .unwrap();
        let expected = WeylElement::normal_order(
            2,
            &[
                Generator::x(1, 1),
                Generator::x(2, 1),
                Generator::p(2, 1),
                Generator::p(1, 1),
            ],
        )
        .unwrap()
        .add(
            &x(2, 1, 1)
                .mul(&p(2, 1, 1))
                .unwrap()
                .scale(&UPoly::i().neg()),
        )
        .unwrap();
        assert_eq!(lhs, expected);
    }

    #[test]
    fn multiply_rejects_mismatched_n() {
        let err = x(1, 1, 1).mul(&x(2, 1, 1)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(1, 2)));
    }

    #[test]
    fn commutator_examples() {
        // [p12, x12] = -i
        let c = p(2, 1, 2).commutator(&x(2, 1, 2)).unwrap();
        assert_eq!(c, WeylElement::scalar(2, UPoly::i().neg()));
        // [x11, x22] = 0
        assert!(x(2, 1, 1).commutator(&x(2, 2, 2)).unwrap().is_zero());
        // [x11 p21, x21] = -i x11
        let a = x(2, 1, 1).mul(&p(2, 2, 1)).unwrap();
        let c = a.commutator(&x(2, 2, 1)).unwrap();
        assert_eq!(c, x(2, 1, 1).scale(&UPoly::i().neg()));
    }

    #[test]
    fn heisenberg_relations_all_quadruples() {
        for n in 1..=4u8 {
            for mu in 1..=n {
                for nu in 1..=n {
                    for al in 1..=n {
                        for be in 1..=n {
                            let xx = x(n, mu, nu).commutator(&x(n, al, be)).unwrap();
                            assert!(xx.is_zero());
                            let pp = p(n, mu, nu).commutator(&p(n, al, be)).unwrap();
                            assert!(pp.is_zero());
                            let px = p(n, mu, nu).commutator(&x(n, al, be)).unwrap();
                            let expected = if mu == al && nu == be {
                                WeylElement::scalar(n, UPoly::i().neg())
                            } else {
                                WeylElement::zero(n)
                            };
                            assert_eq!(px, expected);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn act_examples() {
        // x11 |> 1 = x11
        let one = CoordPoly::one(1);
        let r = x(1, 1, 1).act(&one).unwrap();
        assert_eq!(r.as_weyl(), &x(1, 1, 1));
        // p11 |> x11 = -i
        let f = CoordPoly::var(1, 1, 1).unwrap();
        let r = p(1, 1, 1).act(&f).unwrap();
        assert_eq!(r.as_weyl(), &WeylElement::scalar(1, UPoly::i().neg()));
        // (x11 p11) |> x11^2 = -2i x11^2
        let a = x(1, 1, 1).mul(&p(1, 1, 1)).unwrap();
        let f2 = f.mul(&f).unwrap();
        let r = a.act(&f2).unwrap();
        let expected = f2.scale(&UPoly::constant(GRat::i().mul(&GRat::from_int(-2))));
        assert_eq!(r, expected);
    }

    #[test]
    fn act_rejects_momenta_in_test_function() {
        let w = p(1, 1, 1);
        assert!(CoordPoly::new(w).is_err());
    }

    #[test]
    fn display_grammar() {
        let mut w = WeylElement::zero(2);
        let m = Monomial::from_parts(
            vec![(Index::new(1, 2), 2)],
            vec![(Index::new(2, 1), 1)],
        );
        let c = UPoly::term(
            2,
            GRat::from_ratio(3, 2).add(&GRat::i().mul(&GRat::from_ratio(1, 2))),
        );
        w.add_term(m, c);
        assert_eq!(w.to_string(), "(3/2 + 1/2*I)*u^2 * x[1,2]^2 p[2,1]");
    }

    #[test]
    fn coord_monomial_basis_counts() {
        // degree <= 3 in 4 variables: C(7,3)+C(6,2)... total = C(4+3,3) = 35
        assert_eq!(coord_monomials(2, 3).len(), 35);
        assert_eq!(coord_monomials(1, 2).len(), 3);
    }
}
