//! Scalar non-backtracking polynomials and the Kesten-McKay inner-product
//! calculus, plus the two certificate polynomials built from them.
//!
//! The family follows the recurrence
//! `q_0 = 1, q_1 = z, q_2 = z^2 - d, q_s = z q_{s-1} - (d-1) q_{s-2}`,
//! and is orthogonal for the Kesten-McKay measure on
//! `[-2 sqrt(d-1), 2 sqrt(d-1)]` with `||q_s||^2 = q_s(d) = d (d-1)^{s-1}`.
//!
//! Inner products of polynomials are computed by reduction into the q-basis
//! (the constant coefficient of the product is the integral): this is exact
//! in integer arithmetic, which matters because `||q_12||^2` at `d = 10` is
//! ~3.9e12 and no f64 quadrature can pin an absolute error of 1e-8 at that
//! magnitude. Adaptive quadrature of the density is kept alongside as an
//! independent cross-check at scales where it is meaningful.

use crate::error::{Error, Result};

/// Univariate polynomial in monomial coefficients, lowest degree first.
/// Trailing coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn scale(&self, a: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    fn as_i128(&self) -> Option<Vec<i128>> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            if c.fract() != 0.0 || c.abs() >= 9.0e15 {
                return None;
            }
            out.push(c as i128);
        }
        Some(out)
    }
}

/// The non-backtracking polynomial family at degree parameter `d`.
#[derive(Debug, Clone)]
pub struct NbBasis {
    pub d: f64,
    polys: Vec<Poly>,
}

impl NbBasis {
    /// Cache `q_0 ... q_max`.
    pub fn new(d: f64, max: usize) -> Self {
        let mut polys: Vec<Poly> = Vec::with_capacity(max + 1);
        polys.push(Poly::constant(1.0));
        if max >= 1 {
            polys.push(Poly::new(vec![0.0, 1.0]));
        }
        if max >= 2 {
            polys.push(Poly::new(vec![-d, 0.0, 1.0]));
        }
        for s in 3..=max {
            // q_s = z q_{s-1} - (d-1) q_{s-2}
            let mut c = vec![0.0; s + 1];
            for (i, &a) in polys[s - 1].coeffs.iter().enumerate() {
                c[i + 1] += a;
            }
            for (i, &a) in polys[s - 2].coeffs.iter().enumerate() {
                c[i] -= (d - 1.0) * a;
            }
            polys.push(Poly::new(c));
        }
        NbBasis { d, polys }
    }

    pub fn max_order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn q(&self, s: usize) -> &Poly {
        &self.polys[s]
    }

    /// Evaluate `q_s(z)` by the three-term recurrence (numerically stabler
    /// than Horner on the monomial form at large `s`).
    pub fn eval_q(&self, s: usize, z: f64) -> f64 {
        eval_q(self.d, s, z)
    }

    /// Evaluate `sum_s c_s q_s(z)` via the recurrence.
    pub fn eval_expansion(&self, nb_coeffs: &[f64], z: f64) -> f64 {
        let d = self.d;
        let mut acc = 0.0;
        let mut qm2 = 1.0;
        let mut qm1 = z;
        for (s, &c) in nb_coeffs.iter().enumerate() {
            let qs = match s {
                0 => 1.0,
                1 => z,
                _ => {
                    let q = if s == 2 {
                        z * qm1 - d * qm2
                    } else {
                        z * qm1 - (d - 1.0) * qm2
                    };
                    qm2 = qm1;
                    qm1 = q;
                    q
                }
            };
            acc += c * qs;
        }
        acc
    }
}

/// Evaluate `q_s(z)` without caching.
pub fn eval_q(d: f64, s: usize, z: f64) -> f64 {
    match s {
        0 => 1.0,
        1 => z,
        _ => {
            let mut qm1 = z; // q_1
            let mut q = z * z - d; // q_2
            for _ in 3..=s {
                let next = z * q - (d - 1.0) * qm1;
                qm1 = q;
                q = next;
            }
            q
        }
    }
}

/// `||q_s||^2_km = q_s(d)`: 1 when `s = 0`, else `d (d-1)^{s-1}`.
pub fn km_norm_sq(s: usize, d: f64) -> f64 {
    if s == 0 {
        1.0
    } else {
        d * (d - 1.0).powi(s as i32 - 1)
    }
}

/// The Kesten-McKay measure at degree `d`: support
/// `[-2 sqrt(d-1), 2 sqrt(d-1)]`, density
/// `(1/2pi) (d / sqrt(d-1)) sqrt(4(d-1) - z^2) / (d^2 - z^2)`.
#[derive(Debug, Clone, Copy)]
pub struct KmMeasure {
    pub d: f64,
}

impl KmMeasure {
    pub fn new(d: f64) -> Result<Self> {
        if d < 2.0 {
            return Err(Error::InvalidParams(format!("Kesten-McKay needs d >= 2, got {d}")));
        }
        Ok(KmMeasure { d })
    }

    pub fn support(&self) -> (f64, f64) {
        let half = 2.0 * (self.d - 1.0).sqrt();
        (-half, half)
    }

    pub fn density(&self, z: f64) -> f64 {
        let d = self.d;
        let rad = 4.0 * (d - 1.0) - z * z;
        if rad <= 0.0 {
            return 0.0;
        }
        (1.0 / (2.0 * std::f64::consts::PI)) * (d / (d - 1.0).sqrt()) * rad.sqrt()
            / (d * d - z * z)
    }
}

// 15-point Gauss-Legendre nodes and weights on [-1, 1].
const GL15_X: [f64; 15] = [
    -0.9879925180204854,
    -0.9372733924007060,
    -0.8482065834104272,
    -0.7244177313601701,
    -0.5709721726085388,
    -0.3941513470775634,
    -0.2011940939974345,
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.9372733924007060,
    0.9879925180204854,
];
const GL15_W: [f64; 15] = [
    0.0307532419961173,
    0.0703660474881081,
    0.1071592204671719,
    0.1395706779261543,
    0.1662692058169939,
    0.1861610000155622,
    0.1984314853271116,
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
];

fn gl15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..15 {
        acc += GL15_W[i] * f(mid + half * GL15_X[i]);
    }
    acc * half
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> Result<f64> {
    let whole = gl15(f, a, b);
    let mid = 0.5 * (a + b);
    let split = gl15(f, a, mid) + gl15(f, mid, b);
    if (whole - split).abs() <= tol {
        return Ok(split);
    }
    if depth == 0 {
        return Err(Error::Numerical(
            "adaptive quadrature failed to converge".into(),
        ));
    }
    let left = adaptive(f, a, mid, tol / 2.0, depth - 1)?;
    let right = adaptive(f, mid, b, tol / 2.0, depth - 1)?;
    Ok(left + right)
}

/// `int f(z) g(z) dmu_km(z)` by adaptive Gauss-Legendre after substituting
/// `z = 2 sqrt(d-1) sin(theta)`, which removes the square-root endpoint
/// behavior of the density.
pub fn km_inner_quadrature(f: &Poly, g: &Poly, d: f64, tol: f64) -> Result<f64> {
    KmMeasure::new(d)?;
    let r = 2.0 * (d - 1.0).sqrt();
    let scale = 2.0 * d * (d - 1.0) / std::f64::consts::PI;
    let integrand = move |theta: f64| {
        let (s, c) = theta.sin_cos();
        let z = r * s;
        f.eval(z) * g.eval(z) * scale * c * c / (d * d - z * z)
    };
    adaptive(
        &integrand,
        -std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
        tol,
        40,
    )
}

/// Multiply by `z` in q-basis coordinates:
/// `z q_0 = q_1`, `z q_1 = q_2 + d q_0`, `z q_s = q_{s+1} + (d-1) q_{s-1}`.
fn shift_up_f64(coeffs: &[f64], d: f64) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (s, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        out[s + 1] += c;
        match s {
            0 => {}
            1 => out[0] += d * c,
            _ => out[s - 1] += (d - 1.0) * c,
        }
    }
    out
}

fn shift_up_i128(coeffs: &[i128], d: i128) -> Vec<i128> {
    let mut out = vec![0i128; coeffs.len() + 1];
    for (s, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        out[s + 1] += c;
        match s {
            0 => {}
            1 => out[0] += d * c,
            _ => out[s - 1] += (d - 1) * c,
        }
    }
    out
}

/// Coefficients `c_s` with `f = sum_s c_s q_s`, by Horner evaluation in
/// q-basis coordinates (exact back-substitution against the monic basis).
pub fn expand_in_nb_basis(f: &Poly, d: f64) -> Vec<f64> {
    let mut acc: Vec<f64> = vec![*f.coeffs.last().unwrap()];
    for &c in f.coeffs.iter().rev().skip(1) {
        acc = shift_up_f64(&acc, d);
        acc[0] += c;
    }
    acc
}

fn expand_in_nb_basis_i128(coeffs: &[i128], d: i128) -> Vec<i128> {
    let mut acc: Vec<i128> = vec![*coeffs.last().unwrap()];
    for &c in coeffs.iter().rev().skip(1) {
        acc = shift_up_i128(&acc, d);
        acc[0] += c;
    }
    acc
}

/// Kesten-McKay inner product of two polynomials.
///
/// Computed by reducing `f*g` into the q-basis and reading off the constant
/// coefficient (`<p, q_0> = c_0` by orthogonality). When both inputs have
/// integer coefficients and integer `d`, the reduction runs in `i128` and the
/// result is exact; otherwise it runs in f64. Quadrature of the density is
/// available as [`km_inner_quadrature`] and is cross-checked in tests.
pub fn km_inner(f: &Poly, g: &Poly, d: f64) -> Result<f64> {
    KmMeasure::new(d)?;
    if d.fract() == 0.0 {
        if let (Some(fi), Some(gi)) = (f.as_i128(), g.as_i128()) {
            if let Some(prod) = mul_i128_checked(&fi, &gi) {
                let expansion = expand_in_nb_basis_i128(&prod, d as i128);
                return Ok(expansion[0] as f64);
            }
        }
    }
    let prod = f.mul(g);
    Ok(expand_in_nb_basis(&prod, d)[0])
}

fn mul_i128_checked(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let p = x.checked_mul(y)?;
            out[i + j] = out[i + j].checked_add(p)?;
        }
    }
    Some(out)
}

/// Refutation polynomial `f(z) = -q_{m'}(z) + 2 m' ||q_{m'}|| + eps` with
/// `m'` the largest even number at most `m`. Nonnegative on the spectral
/// support interval, and its pairing with `sum_{s<=m} lambda^s q_s` is the
/// certificate value `-||q_{m'}||^2 lambda^{m'} + 2 m' ||q_{m'}|| + eps`.
#[derive(Debug, Clone)]
pub struct RefutationPoly {
    pub poly: Poly,
    /// Coefficients in the q-basis: `-1` at `m'`, `2m'||q_{m'}|| + eps` at 0.
    pub nb_coeffs: Vec<f64>,
    pub m_prime: usize,
    pub eps: f64,
    /// `<f, sum_{s=0}^m lambda^s q_s>_km`; refutes when negative enough.
    pub certificate_value: f64,
    /// `||f||_km = sqrt(||q_{m'}||^2 + (2m'||q_{m'}|| + eps)^2)`.
    pub norm_km: f64,
}

/// Default `eps` for [`refutation_poly`]; exposed as a knob by callers.
pub const DEFAULT_REFUTATION_EPS: f64 = 1e-3;

pub fn refutation_poly(m: usize, lambda: f64, d: f64, eps: f64) -> Result<RefutationPoly> {
    if m < 2 {
        return Err(Error::Precondition(format!("refutation needs m >= 2, got {m}")));
    }
    if eps <= 0.0 {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let m_prime = if m % 2 == 0 { m } else { m - 1 };
    let basis = NbBasis::new(d, m_prime);
    let norm = km_norm_sq(m_prime, d).sqrt();
    let c0 = 2.0 * m_prime as f64 * norm + eps;
    let poly = basis.q(m_prime).scale(-1.0).add(&Poly::constant(c0));
    let mut nb_coeffs = vec![0.0; m_prime + 1];
    nb_coeffs[0] = c0;
    nb_coeffs[m_prime] = -1.0;
    let certificate_value = -km_norm_sq(m_prime, d) * lambda.abs().powi(m_prime as i32) + c0;
    let norm_km = (km_norm_sq(m_prime, d) + c0 * c0).sqrt();
    Ok(RefutationPoly {
        poly,
        nb_coeffs,
        m_prime,
        eps,
        certificate_value,
        norm_km,
    })
}

/// Lower-bound witness polynomial `g = sum_{s=0}^p lambda^s q_s`, strictly
/// positive on the open support interval when `lambda^2 (d-1) < 1`.
#[derive(Debug, Clone)]
pub struct LbPoly {
    pub poly: Poly,
    /// q-basis coefficients `(1, lambda, lambda^2, ..., lambda^p)`.
    pub nb_coeffs: Vec<f64>,
    pub p: usize,
    pub lambda: f64,
    /// Minimum of `g` over the verification grid on the support interval.
    pub grid_min: f64,
}

pub fn lb_poly(p: usize, lambda: f64, d: f64) -> Result<LbPoly> {
    if p % 2 != 0 {
        return Err(Error::Precondition(format!("p must be even, got {p}")));
    }
    if lambda * lambda * (d - 1.0) >= 1.0 {
        return Err(Error::Precondition(format!(
            "need lambda^2 (d-1) < 1, got {}",
            lambda * lambda * (d - 1.0)
        )));
    }
    let basis = NbBasis::new(d, p + 1);
    let mut poly = Poly::zero();
    let mut nb_coeffs = Vec::with_capacity(p + 1);
    for s in 0..=p {
        let c = lambda.powi(s as i32);
        nb_coeffs.push(c);
        poly = poly.add(&basis.q(s).scale(c));
    }

    // Closed-form identity:
    // g(z) = (1 - l^2 + l^{p+2}(d-1) q_p(z) - l^{p+1} q_{p+1}(z))
    //        / ((d-1) l^2 - l z + 1), checked pointwise on a grid.
    let (lo, hi) = KmMeasure::new(d)?.support();
    let grid = 1000;
    let mut grid_min = f64::INFINITY;
    for i in 0..=grid {
        let z = lo + (hi - lo) * i as f64 / grid as f64;
        let series = basis.eval_expansion(&nb_coeffs, z);
        if lambda != 0.0 {
            let numer = 1.0 - lambda * lambda
                + lambda.powi(p as i32 + 2) * (d - 1.0) * basis.eval_q(p, z)
                - lambda.powi(p as i32 + 1) * basis.eval_q(p + 1, z);
            let denom = (d - 1.0) * lambda * lambda - lambda * z + 1.0;
            let closed = numer / denom;
            if (series - closed).abs() > 1e-8 * series.abs().max(1.0) {
                return Err(Error::Numerical(format!(
                    "closed-form identity failed at z={z}: series={series}, closed={closed}"
                )));
            }
        }
        grid_min = grid_min.min(series);
    }
    if grid_min <= 0.0 {
        return Err(Error::Construction(format!(
            "series polynomial not positive on support (min {grid_min}); \
             lambda too large or p too small"
        )));
    }
    Ok(LbPoly { poly, nb_coeffs, p, lambda, grid_min })
}

/// Result of grid-checking `|q_s(z)| <= 2(s+1) ||q_s|| + eps` on the
/// `eta`-fattened support interval.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub ok: bool,
    pub eta: f64,
    /// Worst point and the value of `|q_s|` there if the bound fails.
    pub violation: Option<(f64, f64)>,
}

/// Default fattening is `0.01 sqrt(d-1)`.
pub fn nb_poly_bound_check(s: usize, d: f64, eps: f64) -> Result<BoundCheck> {
    nb_poly_bound_check_eta(s, d, eps, 0.01 * (d - 1.0).sqrt())
}

pub fn nb_poly_bound_check_eta(s: usize, d: f64, eps: f64, eta: f64) -> Result<BoundCheck> {
    let (lo, hi) = KmMeasure::new(d)?.support();
    let bound = 2.0 * (s as f64 + 1.0) * km_norm_sq(s, d).sqrt() + eps;
    let grid = 10_000;
    let (a, b) = (lo - eta, hi + eta);
    for i in 0..=grid {
        let z = a + (b - a) * i as f64 / grid as f64;
        let v = eval_q(d, s, z).abs();
        if v > bound {
            return Ok(BoundCheck { ok: false, eta, violation: Some((z, v)) });
        }
    }
    Ok(BoundCheck { ok: true, eta, violation: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_matches_recurrence_definition() {
        let b = NbBasis::new(3.0, 6);
        assert_eq!(b.q(0).coeffs, vec![1.0]);
        assert_eq!(b.q(1).coeffs, vec![0.0, 1.0]);
        assert_eq!(b.q(2).coeffs, vec![-3.0, 0.0, 1.0]);
        // q_3 = z q_2 - 2 q_1 = z^3 - 5z
        assert_eq!(b.q(3).coeffs, vec![0.0, -5.0, 0.0, 1.0]);
        // monic of degree s
        for s in 0..=6 {
            assert_eq!(b.q(s).degree(), s);
            assert_eq!(*b.q(s).coeffs.last().unwrap(), 1.0);
        }
    }

    #[test]
    fn eval_q_consistent_with_monomial_form() {
        let b = NbBasis::new(4.0, 10);
        for s in 0..=10 {
            for &z in &[-3.0, -0.5, 0.0, 1.7, 3.2] {
                let via_rec = b.eval_q(s, z);
                let via_poly = b.q(s).eval(z);
                assert!(
                    (via_rec - via_poly).abs() <= 1e-9 * via_poly.abs().max(1.0),
                    "s={s} z={z}: {via_rec} vs {via_poly}"
                );
            }
        }
    }

    #[test]
    fn norm_sq_is_q_at_d_exactly() {
        for &d in &[3.0, 4.0, 10.0] {
            let b = NbBasis::new(d, 12);
            for s in 0..=12 {
                let direct = b.eval_q(s, d);
                assert_eq!(km_norm_sq(s, d), direct, "s={s} d={d}");
            }
        }
        assert_eq!(km_norm_sq(0, 3.0), 1.0);
        assert_eq!(km_norm_sq(2, 3.0), 6.0);
        assert_eq!(km_norm_sq(3, 4.0), 36.0);
    }

    #[test]
    fn km_inner_is_exactly_orthogonal() {
        for &d in &[3.0, 4.0, 10.0] {
            let b = NbBasis::new(d, 12);
            for s in 0..=12usize {
                for t in 0..=12usize {
                    let got = km_inner(b.q(s), b.q(t), d).unwrap();
                    let want = if s == t { km_norm_sq(s, d) } else { 0.0 };
                    assert_eq!(got, want, "d={d} s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn quadrature_agrees_with_exact_at_small_degree() {
        let d = 3.0;
        let b = NbBasis::new(d, 6);
        // <1,1> = 1 (probability measure)
        let one = Poly::constant(1.0);
        let got = km_inner_quadrature(&one, &one, d, 1e-12).unwrap();
        assert!((got - 1.0).abs() < 1e-9);
        // <q_1, q_2> = 0
        let got = km_inner_quadrature(b.q(1), b.q(2), d, 1e-12).unwrap();
        assert!(got.abs() < 1e-9);
        // <q_2, q_2> = 6
        let got = km_inner_quadrature(b.q(2), b.q(2), d, 1e-12).unwrap();
        assert!((got - 6.0).abs() < 1e-8);
        // relative agreement at moderate degree
        for s in 0..=6usize {
            let got = km_inner_quadrature(b.q(s), b.q(s), d, 1e-12).unwrap();
            let want = km_norm_sq(s, d);
            assert!(
                (got - want).abs() <= 1e-8 * want.max(1.0),
                "s={s}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn km_measure_has_unit_mass() {
        for &d in &[3.0, 7.0, 10.0] {
            let one = Poly::constant(1.0);
            let got = km_inner_quadrature(&one, &one, d, 1e-10).unwrap();
            assert!((got - 1.0).abs() < 1e-8, "d={d}: mass {got}");
        }
    }

    #[test]
    fn expansion_roundtrip() {
        let d = 3.0;
        let b = NbBasis::new(d, 8);
        // f = q_2 -> (0,0,1)
        let c = expand_in_nb_basis(b.q(2), d);
        assert_eq!(c, vec![0.0, 0.0, 1.0]);
        // f = z^2 -> (d, 0, 1)
        let c = expand_in_nb_basis(&Poly::new(vec![0.0, 0.0, 1.0]), d);
        assert_eq!(c, vec![d, 0.0, 1.0]);
        // f = z^3 -> q_3 + (2d-1) q_1
        let c = expand_in_nb_basis(&Poly::new(vec![0.0, 0.0, 0.0, 1.0]), d);
        assert_eq!(c, vec![0.0, 2.0 * d - 1.0, 0.0, 1.0]);
        // generic roundtrip: reconstruct and compare coefficients
        let f = Poly::new(vec![2.0, -1.0, 0.5, 3.0, -0.25, 1.0]);
        let c = expand_in_nb_basis(&f, d);
        let mut back = Poly::zero();
        for (s, &cs) in c.iter().enumerate() {
            back = back.add(&b.q(s).scale(cs));
        }
        assert_eq!(back.coeffs.len(), f.coeffs.len());
        for (a, b) in back.coeffs.iter().zip(&f.coeffs) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn refutation_certificate_value_matches_closed_form() {
        // d=10, lambda=0.5, m=10: -(10*9^9)(0.5^10) + 20 sqrt(10*9^9) + eps
        let r = refutation_poly(10, 0.5, 10.0, 0.01).unwrap();
        let nsq = 10.0 * 9.0f64.powi(9);
        let want = -nsq * 0.5f64.powi(10) + 20.0 * nsq.sqrt() + 0.01;
        assert!((r.certificate_value - want).abs() < 1e-6 * want.abs());
        assert!(r.certificate_value < 0.0);
        assert!((r.certificate_value - (-2.54e6)).abs() < 0.01e6 * 3.0);
        // lambda = 0: only the s=0 term survives orthogonality
        let r0 = refutation_poly(10, 0.0, 10.0, 0.01).unwrap();
        assert!(r0.certificate_value > 0.0);
        assert!((r0.certificate_value - (20.0 * nsq.sqrt() + 0.01)).abs() < 1e-9 * nsq.sqrt());
    }

    #[test]
    fn refutation_poly_positive_on_support() {
        let r = refutation_poly(6, 0.5, 3.0, 1e-3).unwrap();
        let (lo, hi) = KmMeasure::new(3.0).unwrap().support();
        let mut min = f64::INFINITY;
        for i in 0..=10_000 {
            let z = lo + (hi - lo) * i as f64 / 10_000.0;
            min = min.min(r.poly.eval(z));
        }
        assert!(min >= r.eps - 1e-9, "grid min {min}");
    }

    #[test]
    fn refutation_pairing_against_explicit_series() {
        // Cross-check certificate_value against km_inner with the series.
        let (m, lambda, d) = (8usize, 0.4f64, 4.0f64);
        let r = refutation_poly(m, lambda, d, 1e-3).unwrap();
        let b = NbBasis::new(d, m);
        let mut series = Poly::zero();
        for s in 0..=m {
            series = series.add(&b.q(s).scale(lambda.powi(s as i32)));
        }
        let got = km_inner(&r.poly, &series, d).unwrap();
        assert!(
            (got - r.certificate_value).abs() < 1e-9 * got.abs().max(1.0),
            "{got} vs {}",
            r.certificate_value
        );
    }

    #[test]
    fn lb_poly_cases() {
        // lambda = 0 -> g = 1
        let g = lb_poly(4, 0.0, 10.0).unwrap();
        assert_eq!(g.poly.coeffs, vec![1.0]);
        // p=2: g = 1 + lambda z + lambda^2 (z^2 - d)
        let g = lb_poly(2, 0.25, 5.0).unwrap();
        let want = Poly::new(vec![1.0 - 0.0625 * 5.0, 0.25, 0.0625]);
        for (a, b) in g.poly.coeffs.iter().zip(&want.coeffs) {
            assert!((a - b).abs() < 1e-12);
        }
        // d=10, lambda=0.2, p=20: positive on the support grid
        let g = lb_poly(20, 0.2, 10.0).unwrap();
        assert!(g.grid_min > 0.0);
    }

    #[test]
    fn lb_poly_preconditions() {
        assert!(lb_poly(3, 0.2, 10.0).is_err()); // odd p
        assert!(lb_poly(20, 0.5, 10.0).is_err()); // 0.25 * 9 = 2.25 >= 1
    }

    #[test]
    fn nb_bound_check_holds_inside() {
        assert!(nb_poly_bound_check(0, 3.0, 0.1).unwrap().ok);
        assert!(nb_poly_bound_check(4, 3.0, 0.1).unwrap().ok);
        for s in 0..=10 {
            assert!(nb_poly_bound_check(s, 10.0, 0.01).unwrap().ok, "s={s}");
        }
    }

    #[test]
    fn q_at_d_grows_past_the_interval_bound() {
        // Outside the support the polynomials blow up: q_s(d) = ||q_s||^2
        // exceeds the interval bound 2(s+1)||q_s|| once ||q_s|| > 2(s+1).
        let (s, d) = (6usize, 4.0f64);
        let val = eval_q(d, s, d);
        assert!(val > 2.0 * (s as f64 + 1.0) * km_norm_sq(s, d).sqrt());
    }
}
