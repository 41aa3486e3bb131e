//! Dense linear algebra over F_p with `u64` residues.
//!
//! Backs the randomized checks: rank estimation by random evaluation,
//! conjugation tests over a prime field, and polynomial evaluation.

/// `a + b mod p`
#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    debug_assert!(a < p && b < p);
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

/// `a - b mod p`
#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    debug_assert!(a < p && b < p);
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// `a * b mod p` via 128-bit intermediate.
#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `a^e mod p` by square-and-multiply.
pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse mod a prime `p`, `None` for zero.
pub fn inv(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow(a, p - 2, p))
    }
}

/// Row-reduce a dense matrix over F_p and return its rank. Consumes the rows.
pub fn rank(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] % p != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let pinv = inv(m[rank][col], p).expect("pivot is nonzero");
        for c in col..cols {
            m[rank][c] = mul(m[rank][c] % p, pinv, p);
        }
        for r in 0..rows {
            if r != rank && m[r][col] % p != 0 {
                let factor = m[r][col] % p;
                for c in col..cols {
                    let t = mul(factor, m[rank][c], p);
                    m[r][c] = sub(m[r][c] % p, t, p);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `a * b` for dense square matrices over F_p.
pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = add(out[i][j], mul(a[i][k], b[k][j], p), p);
            }
        }
    }
    out
}

/// Inverse of an invertible upper-triangular matrix over F_p by back
/// substitution. Panics if a diagonal entry is zero.
pub fn upper_triangular_inverse(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for j in (0..n).rev() {
        let djj = inv(a[j][j], p).expect("diagonal entry must be invertible");
        out[j][j] = djj;
        for i in (0..j).rev() {
            // solve row i of A * out = I at column j
            let mut s = 0u64;
            for k in (i + 1)..=j {
                s = add(s, mul(a[i][k], out[k][j], p), p);
            }
            out[i][j] = mul(sub(0, s, p), inv(a[i][i], p).expect("diagonal"), p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_basics() {
        let p = 7;
        assert_eq!(add(5, 4, p), 2);
        assert_eq!(sub(2, 5, p), 4);
        assert_eq!(mul(3, 5, p), 1);
        assert_eq!(pow(3, 6, p), 1);
        assert_eq!(inv(3, p), Some(5));
        assert_eq!(inv(0, p), None);
    }

    #[test]
    fn rank_of_singular_matrix() {
        let p = 101;
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank(m, p), 2);
        assert_eq!(rank(vec![vec![0, 0], vec![0, 0]], p), 0);
    }

    #[test]
    fn triangular_inverse_roundtrip() {
        let p = 13;
        let a = vec![vec![2, 5, 1], vec![0, 3, 7], vec![0, 0, 11]];
        let ainv = upper_triangular_inverse(&a, p);
        let prod = mat_mul(&a, &ainv, p);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], u64::from(i == j));
            }
        }
    }
}
