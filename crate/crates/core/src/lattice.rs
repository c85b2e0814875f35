//! Integer lattice helpers: row-style Hermite normal form and exact solving
//! of integer linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row echelon form over the integers, tracking the unimodular transform.
///
/// Returns `(echelon, transform, pivots)` where `transform * rows = echelon`
/// and `pivots[r]` is the pivot column of echelon row `r`. Rows past
/// `pivots.len()` are zero. When `hermite` is set, pivots are made positive
/// and entries above each pivot are reduced into `[0, pivot)`.
fn echelon(
    rows: &[Vec<BigInt>],
    ncols: usize,
    hermite: bool,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<usize>) {
    let n = rows.len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut t: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == n {
            break;
        }
        loop {
            // smallest nonzero magnitude at or below row r
            let best = (r..n)
                .filter(|&i| !m[i][col].is_zero())
                .min_by(|&i, &j| m[i][col].abs().cmp(&m[j][col].abs()));
            let Some(p) = best else { break };
            m.swap(r, p);
            t.swap(r, p);
            let mut done = true;
            for i in (r + 1)..n {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[r][col]);
                for k in 0..ncols {
                    let v = &q * &m[r][k];
                    m[i][k] -= v;
                }
                for k in 0..n {
                    let v = &q * &t[r][k];
                    t[i][k] -= v;
                }
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][col].is_zero() {
            continue;
        }
        if hermite {
            if m[r][col].is_negative() {
                for v in m[r].iter_mut() {
                    *v = -&*v;
                }
                for v in t[r].iter_mut() {
                    *v = -&*v;
                }
            }
            for i in 0..r {
                let q = m[i][col].div_floor(&m[r][col]);
                if q.is_zero() {
                    continue;
                }
                for k in 0..ncols {
                    let v = &q * &m[r][k];
                    m[i][k] -= v;
                }
                for k in 0..n {
                    let v = &q * &t[r][k];
                    t[i][k] -= v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (m, t, pivots)
}

/// Hermite normal form basis of the lattice spanned by `generators` in `ℤ^dim`.
///
/// The result is upper triangular in the echelon sense, has positive pivots,
/// and entries above each pivot lie in `[0, pivot)`. It is unique for a given
/// lattice, so equal lattices yield equal outputs.
pub fn hermite_basis(generators: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let (m, _, pivots) = echelon(generators, dim, true);
    m.into_iter().take(pivots.len()).collect()
}

/// Index of the lattice spanned by `generators` in `ℤ^dim`, or `None` when the
/// lattice does not have full rank.
pub fn lattice_index(generators: &[Vec<BigInt>], dim: usize) -> Option<BigInt> {
    let h = hermite_basis(generators, dim);
    if h.len() < dim {
        return None;
    }
    Some(h.iter().enumerate().map(|(i, row)| row[i].clone()).product())
}

/// Finds an integer vector `x` with `matrix * x = rhs`, if one exists.
///
/// `matrix` is given by rows (`rhs.len()` rows, `ncols` columns).
pub fn solve_integer(matrix: &[Vec<BigInt>], ncols: usize, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    let nrows = rhs.len();
    // Row operations on the transpose are column operations on the matrix:
    // U * A^T = H^T, so A * U^T = H with H in column echelon form.
    let transpose: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| (0..nrows).map(|i| matrix[i][j].clone()).collect())
        .collect();
    let (ht, u, pivots) = echelon(&transpose, nrows, false);
    let mut w = vec![BigInt::zero(); ncols];
    let mut next = 0;
    for i in 0..nrows {
        let mut acc = rhs[i].clone();
        for (j, _) in pivots.iter().enumerate().take(next) {
            acc -= &ht[j][i] * &w[j];
        }
        if next < pivots.len() && pivots[next] == i {
            let p = &ht[next][i];
            let (q, rem) = acc.div_rem(p);
            if !rem.is_zero() {
                return None;
            }
            w[next] = q;
            next += 1;
        } else if !acc.is_zero() {
            return None;
        }
    }
    // x = U^T w
    let x = (0..ncols)
        .map(|k| (0..ncols).map(|j| &u[j][k] * &w[j]).sum())
        .collect();
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hermite_basis_is_canonical() {
        let a = hermite_basis(&[v(&[2, 0]), v(&[0, 2]), v(&[0, 1]), v(&[8, 0])], 2);
        assert_eq!(a, vec![v(&[2, 0]), v(&[0, 1])]);
        let b = hermite_basis(&[v(&[4, 1]), v(&[2, 1])], 2);
        let c = hermite_basis(&[v(&[2, 1]), v(&[2, 0])], 2);
        assert_eq!(b, c);
    }

    #[test]
    fn index_of_two_and_root_eight() {
        // ⟨2, w⟩ in ℤ[√8]: generators 2, 2w, w, w² = 8
        let gens = [v(&[2, 0]), v(&[0, 2]), v(&[0, 1]), v(&[8, 0])];
        assert_eq!(lattice_index(&gens, 2), Some(BigInt::from(2)));
        assert_eq!(lattice_index(&[v(&[1, 1]), v(&[2, 2])], 2), None);
    }

    #[test]
    fn solves_and_rejects() {
        let m = vec![v(&[2, 0]), v(&[0, 3])];
        assert_eq!(solve_integer(&m, 2, &v(&[4, 9])), Some(v(&[2, 3])));
        assert_eq!(solve_integer(&m, 2, &v(&[1, 0])), None);
        // 6x + 10y + 15z = 1
        let m = vec![v(&[6, 10, 15])];
        let x = solve_integer(&m, 3, &v(&[1])).unwrap();
        assert_eq!(&x[0] * 6 + &x[1] * 10 + &x[2] * 15, BigInt::from(1));
        // inconsistent: x + y = 1, 2x + 2y = 3
        let m = vec![v(&[1, 1]), v(&[2, 2])];
        assert_eq!(solve_integer(&m, 2, &v(&[1, 3])), None);
    }
}
