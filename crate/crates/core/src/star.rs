//! Numeric momentum-space engine: the matrix maps `K`, `K^{-1}`, `J` and
//! the composition laws `D`, `Dt` behind the star product, evaluated on
//! complex double-precision matrices.
//!
//! The `u -> 0` limit is handled structurally through [`phi1`]
//! (`phi1(A) = sum A^m/(m+1)!`), never by dividing by `u`. The matrix
//! logarithm takes the principal branch; its domain (spectrum of `I + u k`
//! off the closed negative real axis) is this module's choice, the
//! composition law itself being entire.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;

pub type CMatrix = DMatrix<Complex64>;

/// Numeric evaluation parameters.
#[derive(Clone, Copy, Debug)]
pub struct StarParams {
    pub u: f64,
    pub tol: f64,
    pub ode_steps: usize,
}

impl StarParams {
    pub fn new(u: f64) -> Self {
        StarParams {
            u,
            tol: 1e-12,
            ode_steps: 1000,
        }
    }
}

/// Max absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

fn inf_norm(m: &CMatrix) -> f64 {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn identity(n: usize) -> CMatrix {
    DMatrix::identity(n, n)
}

/// `phi1(A) = sum_{m>=0} A^m/(m+1)!`, so `exp(A) = I + A*phi1(A)` and
/// `phi1(0) = I`. Evaluated by Taylor series after halving `A` until its
/// norm is below 1/2, then squared back up via
/// `phi1(2B) = phi1(B)(exp(B)+I)/2`.
pub fn phi1(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = inf_norm(a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a * Complex64::new(0.5f64.powi(s as i32), 0.0);

    // Taylor series of phi1 at the scaled matrix.
    let mut term = identity(n);
    let mut phi = identity(n);
    let mut m = 1u32;
    loop {
        term = (&term * &b) / Complex64::new((m + 1) as f64, 0.0);
        phi += &term;
        if inf_norm(&term) < 1e-20 || m > 60 {
            break;
        }
        m += 1;
    }
    let mut exp = identity(n) + &b * &phi;
    let mut phi = phi;
    for _ in 0..s {
        phi = (&phi * (&exp + identity(n))) * Complex64::new(0.5, 0.0);
        exp = &exp * &exp;
    }
    phi
}

pub fn expm(a: &CMatrix) -> CMatrix {
    identity(a.nrows()) + a * phi1(a)
}

/// Principal square root by the Denman-Beavers iteration.
fn sqrtm(b: &CMatrix) -> Result<CMatrix, Error> {
    let mut x = b.clone();
    let mut y = identity(b.nrows());
    for _ in 0..100 {
        let xi = x.clone().try_inverse().ok_or(Error::SingularBranch)?;
        let yi = y.clone().try_inverse().ok_or(Error::SingularBranch)?;
        let xn = (&x + yi) * Complex64::new(0.5, 0.0);
        let yn = (&y + xi) * Complex64::new(0.5, 0.0);
        let delta = max_abs_diff(&xn, &x);
        x = xn;
        y = yn;
        if delta < 1e-16 {
            break;
        }
    }
    if max_abs_diff(&(&x * &x), b) > 1e-10 * (1.0 + max_abs(b)) {
        return Err(Error::SingularBranch);
    }
    Ok(x)
}

/// Principal matrix logarithm by inverse scaling and squaring: square
/// roots until `B` is close to `I`, then the Mercator series.
///
/// Errors with [`Error::SingularBranch`] when the argument has an
/// eigenvalue on the closed negative real axis (including 0).
pub fn logm(b: &CMatrix) -> Result<CMatrix, Error> {
    let n = b.nrows();
    if let Some(eigs) = b.clone().try_schur(1e-12, 10_000).and_then(|s| s.eigenvalues()) {
        for ev in eigs.iter() {
            if ev.re <= 0.0 && ev.im.abs() < 1e-14 {
                return Err(Error::SingularBranch);
            }
        }
    }
    let mut m = b.clone();
    let mut s = 0u32;
    while inf_norm(&(&m - identity(n))) > 0.35 {
        m = sqrtm(&m)?;
        s += 1;
        if s > 60 {
            return Err(Error::SingularBranch);
        }
    }
    let e = &m - identity(n);
    let mut term = identity(n);
    let mut acc = DMatrix::zeros(n, n);
    for k in 1..=80 {
        term = &term * &e;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc += &term * Complex64::new(sign / k as f64, 0.0);
        if inf_norm(&term) < 1e-18 {
            break;
        }
    }
    Ok(acc * Complex64::new(2f64.powi(s as i32), 0.0))
}

/// `K(k, u) = (exp(u k) - I)/u`, computed as `k * phi1(u k)` so that
/// `K(k, 0) = k` exactly.
pub fn big_k(k: &CMatrix, params: &StarParams) -> CMatrix {
    k * phi1(&(k * Complex64::new(params.u, 0.0)))
}

/// `K^{-1}(k, u) = ln(I + u k)/u`, with `K^{-1}(k, 0) = k`.
pub fn big_k_inv(k: &CMatrix, params: &StarParams) -> Result<CMatrix, Error> {
    if params.u == 0.0 {
        return Ok(k.clone());
    }
    let b = identity(k.nrows()) + k * Complex64::new(params.u, 0.0);
    Ok(logm(&b)? / Complex64::new(params.u, 0.0))
}

/// Closed form `J(t k, q, u) = (exp(u t k) - I)/u + exp(u t k) q`
/// `= t k phi1(u t k) + exp(u t k) q`.
pub fn big_j_closed(t: f64, k: &CMatrix, q: &CMatrix, params: &StarParams) -> CMatrix {
    let utk = k * Complex64::new(params.u * t, 0.0);
    k * Complex64::new(t, 0.0) * phi1(&utk) + expm(&utk) * q
}

/// Dual closed form `Jt(t k, q, u) = (exp(u t k) - I)/u + q exp(u t k)`.
pub fn big_j_tilde_closed(t: f64, k: &CMatrix, q: &CMatrix, params: &StarParams) -> CMatrix {
    let utk = k * Complex64::new(params.u * t, 0.0);
    k * Complex64::new(t, 0.0) * phi1(&utk) + q * expm(&utk)
}

/// Independent oracle for [`big_j_closed`]: classical RK4 integration of
/// `dJ/dt = k (I + u J)`, `J(0) = q`.
pub fn big_j_ode(t: f64, k: &CMatrix, q: &CMatrix, params: &StarParams) -> CMatrix {
    let u = Complex64::new(params.u, 0.0);
    let f = |j: &CMatrix| k * (identity(k.nrows()) + j * u);
    rk4(t, q, params.ode_steps, f)
}

/// RK4 for the dual ODE `dJ/dt = (I + u J) k`.
pub fn big_j_tilde_ode(t: f64, k: &CMatrix, q: &CMatrix, params: &StarParams) -> CMatrix {
    let u = Complex64::new(params.u, 0.0);
    let f = |j: &CMatrix| (identity(k.nrows()) + j * u) * k;
    rk4(t, q, params.ode_steps, f)
}

fn rk4(t: f64, y0: &CMatrix, steps: usize, f: impl Fn(&CMatrix) -> CMatrix) -> CMatrix {
    let steps = steps.max(1);
    let h = t / steps as f64;
    let h_c = Complex64::new(h, 0.0);
    let half = Complex64::new(0.5, 0.0);
    let sixth = Complex64::new(1.0 / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let mut y = y0.clone();
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&(&y + &k1 * h_c * half));
        let k3 = f(&(&y + &k2 * h_c * half));
        let k4 = f(&(&y + &k3 * h_c));
        y += (k1 + k2 * two + k3 * two + k4) * h_c * sixth;
    }
    y
}

/// The composition law `D(k, q, u) = k + q + u k q`.
pub fn big_d(k: &CMatrix, q: &CMatrix, params: &StarParams) -> CMatrix {
    k + q + k * q * Complex64::new(params.u, 0.0)
}

/// The indirect route `D(k, q, u) = J(K^{-1}(k), q, u)` used to
/// cross-validate [`big_d`].
pub fn big_d_indirect(k: &CMatrix, q: &CMatrix, params: &StarParams) -> Result<CMatrix, Error> {
    let kinv = big_k_inv(k, params)?;
    Ok(big_j_closed(1.0, &kinv, q, params))
}

/// The dual composition law `Dt(k, q, u) = k + q + u q k`.
pub fn big_d_tilde(k: &CMatrix, q: &CMatrix, params: &StarParams) -> CMatrix {
    k + q + q * k * Complex64::new(params.u, 0.0)
}

/// Dual indirect route through the dual ODE solution.
pub fn big_d_tilde_indirect(
    k: &CMatrix,
    q: &CMatrix,
    params: &StarParams,
) -> Result<CMatrix, Error> {
    let kinv = big_k_inv(k, params)?;
    Ok(big_j_tilde_closed(1.0, &kinv, q, params))
}

/// Seeded sampling of momentum matrices: complex entries uniform in the
/// unit square, scaled by `1/(2 n |u| + 1)` to keep `I + u k` inside the
/// principal-branch domain of the logarithm.
pub struct Sampler {
    rng: ChaCha8Rng,
    n: usize,
    scale: f64,
}

impl Sampler {
    pub fn new(n: usize, u: f64, seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
            scale: 1.0 / (2.0 * n as f64 * u.abs() + 1.0),
        }
    }

    pub fn next_matrix(&mut self) -> CMatrix {
        let n = self.n;
        DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(
                self.rng.gen_range(-1.0..1.0) * self.scale,
                self.rng.gen_range(-1.0..1.0) * self.scale,
            )
        })
    }
}

/// Row-major JSON form: array of rows, entries as `[re, im]` pairs.
pub fn matrix_to_json(m: &CMatrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<Value> = (0..m.ncols())
                .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json(v: &Value) -> Option<CMatrix> {
    let rows = v.as_array()?;
    let nrows = rows.len();
    let ncols = rows.first()?.as_array()?.len();
    let mut m = DMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array()?;
        if row.len() != ncols {
            return None;
        }
        for (j, e) in row.iter().enumerate() {
            let pair = e.as_array()?;
            m[(i, j)] = Complex64::new(pair.first()?.as_f64()?, pair.get(1)?.as_f64()?);
        }
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(n: usize, entries: &[f64]) -> CMatrix {
        DMatrix::from_fn(n, n, |i, j| Complex64::new(entries[i * n + j], 0.0))
    }

    #[test]
    fn phi1_zero_is_identity() {
        let z = DMatrix::zeros(3, 3);
        assert!(max_abs_diff(&phi1(&z), &identity(3)) < 1e-15);
    }

    #[test]
    fn phi1_scalar_case() {
        // phi1(1) = e - 1, by the scalar series
        let a = cm(1, &[1.0]);
        let mut series = 0.0f64;
        let mut term = 1.0f64;
        for m in 0..30 {
            term = if m == 0 { 1.0 } else { term * 1.0 / (m + 1) as f64 };
            series += term;
        }
        let expected = std::f64::consts::E - 1.0;
        assert!((series - expected).abs() < 1e-12);
        assert!((phi1(&a)[(0, 0)].re - expected).abs() < 1e-13);
    }

    #[test]
    fn phi1_nilpotent() {
        // A = [[0,1],[0,0]]: series terminates, phi1 = I + A/2
        let a = cm(2, &[0.0, 1.0, 0.0, 0.0]);
        let expected = identity(2) + &a * Complex64::new(0.5, 0.0);
        assert!(max_abs_diff(&phi1(&a), &expected) < 1e-15);
    }

    #[test]
    fn big_k_u_zero_is_identity_map() {
        let params = StarParams::new(0.0);
        let k = cm(2, &[0.3, -0.1, 0.2, 0.5]);
        assert!(max_abs_diff(&big_k(&k, &params), &k) < 1e-15);
        assert!(max_abs_diff(&big_k_inv(&k, &params).unwrap(), &k) < 1e-15);
    }

    #[test]
    fn big_k_scalar_log2() {
        // n=1, u=1, k = ln 2: K = e^{ln2} - 1 = 1
        let params = StarParams::new(1.0);
        let k = cm(1, &[std::f64::consts::LN_2]);
        assert!((big_k(&k, &params)[(0, 0)].re - 1.0).abs() < 1e-14);
        // K^{-1}(1) = ln 2
        let one = cm(1, &[1.0]);
        let r = big_k_inv(&one, &params).unwrap();
        assert!((r[(0, 0)].re - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn big_k_nilpotent() {
        let params = StarParams::new(1.0);
        let k = cm(2, &[0.0, 1.0, 0.0, 0.0]);
        // k^2 = 0 so K = k (I + uk/2) = k
        assert!(max_abs_diff(&big_k(&k, &params), &k) < 1e-15);
    }

    #[test]
    fn k_inverse_roundtrip() {
        let params = StarParams::new(0.3);
        let mut sampler = Sampler::new(4, 0.3, 42);
        for _ in 0..20 {
            let k = sampler.next_matrix();
            let r = big_k_inv(&big_k(&k, &params), &params).unwrap();
            assert!(max_abs_diff(&r, &k) < 1e-12);
        }
    }

    #[test]
    fn logm_rejects_negative_real_eigenvalue() {
        let b = cm(2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(logm(&b), Err(Error::SingularBranch)));
        let z = DMatrix::zeros(2, 2);
        assert!(matches!(logm(&z), Err(Error::SingularBranch)));
    }

    #[test]
    fn j_closed_at_t_zero_and_u_zero() {
        let params = StarParams::new(0.7);
        let k = cm(2, &[0.1, 0.2, -0.3, 0.4]);
        let q = cm(2, &[0.5, -0.6, 0.7, 0.8]);
        assert!(max_abs_diff(&big_j_closed(0.0, &k, &q, &params), &q) < 1e-15);
        let p0 = StarParams::new(0.0);
        let expected = &k + &q;
        assert!(max_abs_diff(&big_j_closed(1.0, &k, &q, &p0), &expected) < 1e-14);
    }

    #[test]
    fn j_ode_linear_case_exact() {
        // u = 0: constant-slope ODE, RK4 is exact
        let params = StarParams::new(0.0);
        let k = cm(2, &[0.1, 0.2, -0.3, 0.4]);
        let q = cm(2, &[0.5, -0.6, 0.7, 0.8]);
        let r = big_j_ode(1.0, &k, &q, &params);
        assert!(max_abs_diff(&r, &(&k + &q)) < 1e-12);
        assert!(max_abs_diff(&big_j_ode(0.0, &k, &q, &params), &q) < 1e-15);
    }

    #[test]
    fn j_ode_matches_closed_nilpotent() {
        let params = StarParams::new(1.0);
        let k = cm(2, &[0.0, 1.0, 0.0, 0.0]);
        let q = DMatrix::zeros(2, 2);
        let closed = big_j_closed(1.0, &k, &q, &params);
        assert!(max_abs_diff(&closed, &k) < 1e-14);
        let ode = big_j_ode(1.0, &k, &q, &params);
        assert!(max_abs_diff(&ode, &closed) < 1e-10);
    }

    #[test]
    fn d_examples() {
        let params = StarParams::new(1.0);
        let k = cm(2, &[1.0, 0.0, 0.0, 0.0]);
        let q = cm(2, &[0.0, 1.0, 0.0, 0.0]);
        let d = big_d(&k, &q, &params);
        let expected = cm(2, &[1.0, 2.0, 0.0, 0.0]);
        assert!(max_abs_diff(&d, &expected) < 1e-15);
        // right unit
        let z = DMatrix::zeros(2, 2);
        assert!(max_abs_diff(&big_d(&k, &z, &params), &k) < 1e-15);
        // dual law: q*k = 0 here
        let dt = big_d_tilde(&k, &q, &params);
        let expected = cm(2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(max_abs_diff(&dt, &expected) < 1e-15);
    }

    #[test]
    fn d_direct_vs_indirect() {
        let params = StarParams::new(0.3);
        let mut sampler = Sampler::new(3, 0.3, 7);
        for _ in 0..20 {
            let k = sampler.next_matrix();
            let q = sampler.next_matrix();
            let direct = big_d(&k, &q, &params);
            let indirect = big_d_indirect(&k, &q, &params).unwrap();
            assert!(max_abs_diff(&direct, &indirect) < 1e-10);
            let direct = big_d_tilde(&k, &q, &params);
            let indirect = big_d_tilde_indirect(&k, &q, &params).unwrap();
            assert!(max_abs_diff(&direct, &indirect) < 1e-10);
        }
    }

    #[test]
    fn d_tilde_is_flipped_d() {
        let params = StarParams::new(0.3);
        let mut sampler = Sampler::new(4, 0.3, 11);
        for _ in 0..20 {
            let k = sampler.next_matrix();
            let q = sampler.next_matrix();
            assert!(
                max_abs_diff(&big_d_tilde(&k, &q, &params), &big_d(&q, &k, &params)) < 1e-14
            );
        }
    }

    #[test]
    fn json_roundtrip() {
        let mut sampler = Sampler::new(3, 0.2, 5);
        let m = sampler.next_matrix();
        let v = matrix_to_json(&m);
        let back = matrix_from_json(&v).unwrap();
        assert!(max_abs_diff(&m, &back) < 1e-15);
    }
}
