//! Scalar root finding, cubics and 3x3 eigenvalues.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Newton's method kept inside a sign-change bracket, bisecting whenever a
/// Newton step would leave it or fails to halve the residual.
pub fn bracketed_newton<F, D>(f: F, df: D, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Search(format!("no sign change on [{a}, {b}]")));
    }
    let neg_at_a = fa < 0.0;
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    for _ in 0..200 {
        if fx.abs() <= tol {
            return Ok(x);
        }
        if (fx < 0.0) == neg_at_a {
            a = x;
        } else {
            b = x;
        }
        if b - a <= f64::EPSILON * x.abs().max(1.0) {
            return Ok(x);
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        let fnext = f(next);
        if fnext.abs() > 0.5 * fx.abs() && d != 0.0 && newton > a && newton < b {
            // slow Newton progress: fall back to a bisection step
            let mid = 0.5 * (a + b);
            x = mid;
            fx = f(mid);
        } else {
            x = next;
            fx = fnext;
        }
    }
    Ok(x)
}

/// `c[0] x³ + c[1] x² + c[2] x + c[3]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic(pub [f64; 4]);

impl Cubic {
    pub fn eval(&self, x: f64) -> f64 {
        let c = self.0;
        ((c[0] * x + c[1]) * x + c[2]) * x + c[3]
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let c = self.0;
        (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2]
    }

    /// Root inside a sign-change bracket, polished to `1e-14` residual.
    pub fn root_in(&self, lo: f64, hi: f64) -> Result<f64> {
        bracketed_newton(|x| self.eval(x), |x| self.deriv(x), lo, hi, 1e-14)
    }

    /// All three roots, complex pairs included.
    pub fn roots(&self) -> Result<[Complex64; 3]> {
        let c = self.0;
        if c[0] == 0.0 {
            return Err(Error::Parameter("leading coefficient vanishes".into()));
        }
        let bound = 1.0 + c[1..].iter().map(|x| (x / c[0]).abs()).fold(0.0, f64::max);
        let r = self.root_in(-bound, bound)?;
        // deflate by (x - r)
        let q2 = c[0];
        let q1 = c[1] + r * q2;
        let q0 = c[2] + r * q1;
        let [z1, z2] = quadratic_roots(q2, q1, q0);
        Ok([Complex64::new(r, 0.0), z1, z2])
    }
}

/// Roots of `a x² + b x + c`, `a ≠ 0`, using the cancellation-free form.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Characteristic polynomial `det(λI − M)` of a 3x3 matrix.
pub fn char_poly3(m: &Matrix) -> Cubic {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    Cubic([1.0, -tr, minors, -crate::linalg::det(m)])
}

/// Eigenvalues of a 3x3 matrix via its characteristic polynomial.
pub fn eigenvalues3(m: &Matrix) -> Result<[Complex64; 3]> {
    char_poly3(m).roots()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_sqrt2() {
        let r = bracketed_newton(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bracketed_newton(|x| x * x + 1.0, |x| 2.0 * x, -1.0, 1.0, 1e-14).is_err());
    }

    #[test]
    fn newton_survives_flat_derivative() {
        // derivative vanishes at the initial midpoint
        let r = bracketed_newton(|x: f64| x.powi(3) - 0.001, |x| 3.0 * x * x, -1.0, 1.0, 1e-15).unwrap();
        assert!((r - 0.1).abs() < 1e-12);
    }

    #[test]
    fn cubic_roots_real_and_complex() {
        // (x-1)(x-2)(x+3) = x³ - 7x + 6
        let mut r: Vec<f64> = Cubic([1.0, 0.0, -7.0, 6.0]).roots().unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (x, y) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        // (x-2)(x²+1)
        let z = Cubic([1.0, -2.0, 1.0, -2.0]).roots().unwrap();
        assert!((z[0].re - 2.0).abs() < 1e-12);
        assert!((z[1].im.abs() - 1.0).abs() < 1e-12 && z[1].re.abs() < 1e-12);
        assert!((z[1] - z[2].conj()).norm() < 1e-15);
    }

    #[test]
    fn eigen_of_triangular() {
        let m = vec![vec![0.5, 3.0, 1.0], vec![0.0, -0.25, 7.0], vec![0.0, 0.0, 2.0]];
        let mut ev: Vec<f64> = eigenvalues3(&m).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        for (x, y) in ev.iter().zip([-0.25, 0.5, 2.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_of_rotation() {
        let (c, s) = (0.6f64, 0.8f64);
        let m = vec![vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 0.3]];
        let ev = eigenvalues3(&m).unwrap();
        let mut mods: Vec<f64> = ev.iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        assert!((mods[0] - 0.3).abs() < 1e-12 && (mods[2] - 1.0).abs() < 1e-12);
    }
}
