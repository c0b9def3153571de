//! Small dense helpers: symmetric eigenvalues and numerical rank.

use crate::scalar::Real;

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix by cyclic Jacobi sweeps.
/// Eigenvalues are returned in ascending order with matching eigenvector columns.
pub fn symmetric_eigen<T: Real>(matrix: &[Vec<T>]) -> (Vec<T>, Vec<Vec<T>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: T = (0..n).map(|i| a[i][i] * a[i][i]).sum::<T>() + off;
        if off <= T::epsilon() * T::epsilon() * scale || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].is_zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
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
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n)
        .map(|r| order.iter().map(|&c| v[r][c]).collect())
        .collect();
    (values, vectors)
}

/// Singular values of a (rows × cols) matrix, descending.
pub fn singular_values<T: Real>(rows: &[Vec<T>]) -> Vec<T> {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows[0].len();
    // Gram matrix on the smaller side.
    let gram: Vec<Vec<T>> = if rows.len() <= cols {
        rows.iter()
            .map(|a| rows.iter().map(|b| dot(a, b)).collect())
            .collect()
    } else {
        (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| rows.iter().map(|r| r[i] * r[j]).sum())
                    .collect()
            })
            .collect()
    };
    let (values, _) = symmetric_eigen(&gram);
    let mut sv: Vec<T> = values.into_iter().map(|l| l.max(T::zero()).sqrt()).collect();
    sv.reverse();
    sv
}

pub fn numerical_rank<T: Real>(rows: &[Vec<T>], threshold: T) -> usize {
    singular_values(rows).into_iter().filter(|&s| s > threshold).count()
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}
