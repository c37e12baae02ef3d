//! Dense helpers: 5x5 linear solves for the moment systems and a Jacobi
//! eigensolver for the radial kernel factorization.

/// Solve a 5x5 system with partial pivoting.
///
/// Returns the solution and the pivot ratio max|p|/min|p| as a cheap
/// condition estimate; `None` when a pivot underflows entirely.
pub fn solve5(a: &[[f64; 5]; 5], b: &[f64; 5]) -> Option<([f64; 5], f64)> {
    let mut m = *a;
    let mut x = *b;
    let mut piv_max: f64 = 0.0;
    let mut piv_min = f64::INFINITY;
    let mut perm = [0usize, 1, 2, 3, 4];
    for col in 0..5 {
        let mut best = col;
        for row in col + 1..5 {
            if m[perm[row]][col].abs() > m[perm[best]][col].abs() {
                best = row;
            }
        }
        perm.swap(col, best);
        let p = m[perm[col]][col];
        if p == 0.0 || !p.is_finite() {
            return None;
        }
        piv_max = piv_max.max(p.abs());
        piv_min = piv_min.min(p.abs());
        for row in col + 1..5 {
            let r = perm[row];
            let factor = m[r][col] / p;
            if factor != 0.0 {
                for k in col..5 {
                    m[r][k] -= factor * m[perm[col]][k];
                }
                x[r] -= factor * x[perm[col]];
            }
        }
    }
    let mut out = [0.0; 5];
    for col in (0..5).rev() {
        let r = perm[col];
        let mut s = x[r];
        for k in col + 1..5 {
            s -= m[r][k] * out[k];
        }
        out[col] = s / m[r][col];
    }
    Some((out, piv_max / piv_min))
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns (eigenvalues, eigenvectors as columns), sorted by decreasing
/// |eigenvalue|. Intended for the modest matrices (n <= 200) that appear
/// when factorizing the radial collision kernel.
pub fn symmetric_eigen(mat: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = mat.len();
    let mut a: Vec<Vec<f64>> = mat.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0, f64::max)
        .max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(a[i][j].abs());
            }
        }
        if off < 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].abs().partial_cmp(&a[i][i].abs()).unwrap());
    let eigvals: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let eigvecs: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (eigvals, eigvecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve5_recovers_known_solution() {
        let a = [
            [4.0, 1.0, 0.0, 0.0, 1.0],
            [1.0, 5.0, 1.0, 0.0, 0.0],
            [0.0, 1.0, 6.0, 1.0, 0.0],
            [0.0, 0.0, 1.0, 7.0, 1.0],
            [1.0, 0.0, 0.0, 1.0, 8.0],
        ];
        let want = [1.0, -2.0, 3.0, -4.0, 5.0];
        let mut b = [0.0; 5];
        for i in 0..5 {
            for j in 0..5 {
                b[i] += a[i][j] * want[j];
            }
        }
        let (got, cond) = solve5(&a, &b).unwrap();
        for i in 0..5 {
            assert!((got[i] - want[i]).abs() < 1e-12);
        }
        assert!(cond < 100.0);
    }

    #[test]
    fn solve5_flags_singular() {
        let mut a = [[0.0; 5]; 5];
        for i in 0..5 {
            a[i][0] = 1.0; // rank 1
        }
        assert!(solve5(&a, &[1.0; 5]).is_none());
    }

    #[test]
    fn jacobi_reconstructs_matrix() {
        let n = 8;
        let mat: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| 1.0 / (1.0 + (i as f64 - j as f64).abs()) + if i == j { 2.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        let (vals, vecs) = symmetric_eigen(&mat);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for r in 0..n {
                    s += vals[r] * vecs[r][i] * vecs[r][j];
                }
                assert!((s - mat[i][j]).abs() < 1e-10);
            }
        }
        // sorted by decreasing magnitude
        for r in 1..n {
            assert!(vals[r - 1].abs() >= vals[r].abs() - 1e-12);
        }
    }
}
