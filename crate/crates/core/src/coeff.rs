//! Exact coefficient arithmetic: Gaussian rationals and polynomials in the
//! deformation parameter `u`.
//!
//! Every symbolic identity checked by this crate is polynomial in `u` with
//! Gaussian-rational coefficients, so all arithmetic here is exact; floating
//! point only enters through [`UPoly::eval`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Gaussian rational `re + im*I` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GRat {
    pub fn zero() -> Self {
        GRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        GRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        GRat {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_big(re: BigRational) -> Self {
        GRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &GRat) -> GRat {
        GRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn sub(&self, rhs: &GRat) -> GRat {
        GRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    pub fn mul(&self, rhs: &GRat) -> GRat {
        GRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    pub fn neg(&self) -> GRat {
        GRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiplication by `(-i)^j`, used in normal-ordering swaps.
    pub fn mul_neg_i_pow(&self, j: u32) -> GRat {
        match j % 4 {
            0 => self.clone(),
            // (-i)^1 = -i : (re + im I)(-i) = im - re I
            1 => GRat {
                re: self.im.clone(),
                im: -self.re.clone(),
            },
            2 => self.neg(),
            _ => GRat {
                re: -self.im.clone(),
                im: self.re.clone(),
            },
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_part = if self.im.is_one() {
            "I".to_string()
        } else if (-self.im.clone()).is_one() {
            "-I".to_string()
        } else {
            format!("{}*I", fmt_rational(&self.im))
        };
        if self.re.is_zero() {
            return write!(f, "{im_part}");
        }
        if self.im.is_negative() {
            let pos = GRat {
                re: BigRational::zero(),
                im: -self.im.clone(),
            };
            write!(f, "({} - {})", fmt_rational(&self.re), pos)
        } else {
            write!(f, "({} + {})", fmt_rational(&self.re), im_part)
        }
    }
}

/// A polynomial in the formal deformation parameter `u` with [`GRat`]
/// coefficients. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: BTreeMap<u32, GRat>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        UPoly::constant(GRat::one())
    }

    pub fn i() -> Self {
        UPoly::constant(GRat::i())
    }

    pub fn constant(c: GRat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        UPoly { coeffs }
    }

    /// The monomial `c * u^deg`.
    pub fn term(deg: u32, c: GRat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(deg, c);
        }
        UPoly { coeffs }
    }

    /// The variable `u` itself.
    pub fn u() -> Self {
        UPoly::term(1, GRat::one())
    }

    pub fn from_int(v: i64) -> Self {
        UPoly::constant(GRat::from_int(v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, deg: u32) -> GRat {
        self.coeffs.get(&deg).cloned().unwrap_or_else(GRat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &GRat)> {
        self.coeffs.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest power of `u` present, `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn add(&self, rhs: &UPoly) -> UPoly {
        let mut out = self.coeffs.clone();
        for (d, c) in &rhs.coeffs {
            let entry = out.entry(*d).or_insert_with(GRat::zero);
            *entry = entry.add(c);
            if entry.is_zero() {
                out.remove(d);
            }
        }
        UPoly { coeffs: out }
    }

    pub fn sub(&self, rhs: &UPoly) -> UPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, c.neg())).collect(),
        }
    }

    pub fn mul(&self, rhs: &UPoly) -> UPoly {
        let mut out: BTreeMap<u32, GRat> = BTreeMap::new();
        for (da, ca) in &self.coeffs {
            for (db, cb) in &rhs.coeffs {
                let d = da + db;
                let prod = ca.mul(cb);
                let entry = out.entry(d).or_insert_with(GRat::zero);
                *entry = entry.add(&prod);
                if entry.is_zero() {
                    out.remove(&d);
                }
            }
        }
        UPoly { coeffs: out }
    }

    pub fn scale(&self, c: &GRat) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|(d, k)| (*d, k.mul(c))).collect(),
        }
    }

    /// Shift by one power of `u` (multiplication by `u^k`).
    pub fn mul_u_pow(&self, k: u32) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    /// The substitution `u -> -u`.
    pub fn flip_u(&self) -> UPoly {
        UPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (*d, if d % 2 == 1 { c.neg() } else { c.clone() }))
                .collect(),
        }
    }

    /// Drop all terms of u-degree above `n`.
    pub fn truncate(&self, n: u32) -> UPoly {
        UPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(d, _)| **d <= n)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    /// Evaluate at a numeric `u`.
    pub fn eval(&self, u: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (d, c) in &self.coeffs {
            acc += c.to_complex() * u.powi(*d as i32);
        }
        acc
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            match d {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*u")?,
                _ => write!(f, "{cs}*u^{d}")?,
            }
        }
        Ok(())
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}
