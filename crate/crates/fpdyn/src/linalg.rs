//! Small dense linear algebra on `Vec<Vec<f64>>` matrices.

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<f64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn is_square(m: &Matrix) -> bool {
    m.iter().all(|r| r.len() == m.len())
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().flatten().fold(0.0, |a, &x| a.max(x.abs()))
}

pub fn mat_vec(m: &Matrix, v: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[f64], m: &Matrix) -> Vec<f64> {
    let n = m.first().map_or(0, |r| r.len());
    (0..n).map(|j| v.iter().zip(m).map(|(a, r)| a * r[j]).sum()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..m)
                .map(|j| r.iter().zip(b).map(|(x, br)| x * br[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

fn det3(m: &Matrix) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// LU with partial pivoting; returns (lu, perm, sign) or `None` when a
/// pivot is exactly zero.
fn lu(m: &Matrix) -> Option<(Matrix, Vec<usize>, f64)> {
    let n = m.len();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k] == 0.0 {
            return None;
        }
        if p != k {
            a.swap(p, k);
            perm.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            a[i][k] = f;
            for j in k + 1..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    Some((a, perm, sign))
}

pub fn det(m: &Matrix) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => det3(m),
        n => match lu(m) {
            Some((a, _, s)) => (0..n).fold(s, |d, i| d * a[i][i]),
            None => 0.0,
        },
    }
}

/// Scale-aware singularity test: `|det| > 1e-12 * max|entry|^n`.
pub fn is_nonsingular(m: &Matrix) -> bool {
    let n = m.len() as i32;
    let scale = max_abs(m);
    scale > 0.0 && det(m).abs() > 1e-12 * scale.powi(n)
}

/// Matrix inverse: adjugate formula for 3x3, partial-pivot elimination otherwise.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    if !is_square(m) {
        return Err(Error::Structural("matrix is not square".into()));
    }
    if !is_nonsingular(m) {
        return Err(Error::Structural(format!("singular matrix (det = {:e})", det(m))));
    }
    let n = m.len();
    if n == 3 {
        let d = det3(m);
        let c = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        // cyclic minors already carry the cofactor sign
        return Ok((0..3).map(|i| (0..3).map(|j| c(j, i) / d).collect()).collect());
    }
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let e: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            solve(m, &e)
        })
        .collect::<Result<_>>()?;
    Ok(transpose(&cols))
}

/// Solve `m x = b` by partial-pivot elimination.
pub fn solve(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = m.len();
    if !is_square(m) || b.len() != n {
        return Err(Error::Structural("dimension mismatch in solve".into()));
    }
    let (a, perm, _) = lu(m).ok_or_else(|| Error::Structural("singular system".into()))?;
    let mut y: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            y[i] -= a[i][j] * y[j];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            y[i] -= a[i][j] * y[j];
        }
        y[i] /= a[i][i];
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = vec![
            vec![2.0, -1.0, 0.5, 0.0],
            vec![0.3, 4.0, 1.0, -2.0],
            vec![1.0, 0.0, 3.0, 1.0],
            vec![0.0, 2.0, -1.0, 5.0],
        ];
        for a in [m.clone(), m[..3].iter().map(|r| r[..3].to_vec()).collect()] {
            let p = mat_mul(&a, &inverse(&a).unwrap());
            for (i, r) in p.iter().enumerate() {
                for (j, x) in r.iter().enumerate() {
                    assert!((x - if i == j { 1.0 } else { 0.0 }).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn det_paths_agree() {
        let m = vec![vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 4.0], vec![5.0, 6.0, 0.0]];
        let (a, _, s) = lu(&m).unwrap();
        let via_lu = (0..3).fold(s, |d, i| d * a[i][i]);
        assert!((det(&m) - 1.0).abs() < 1e-12);
        assert!((via_lu - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_rejected() {
        let m = vec![vec![2.0, 2.0], vec![1.0, 1.0]];
        assert!(!is_nonsingular(&m));
        assert!(inverse(&m).is_err());
    }
}
