//! Exact linear algebra over `Q` and `Z`.
//!
//! Everything here is dense and small (dimension at most a dozen or so), so
//! the routines favour clarity over asymptotics.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(v: &[i64]) -> QVec {
    v.iter().map(|&x| q(x)).collect()
}

pub fn qzero(d: usize) -> QVec {
    vec![Q::zero(); d]
}

pub fn dot_iq(a: &[i64], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .filter(|(x, _)| **x != 0)
        .fold(Q::zero(), |acc, (x, y)| acc + y * BigInt::from(*x))
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> QVec {
    a.iter().map(|x| x * c).collect()
}

/// Integer matrix (row-major, `rows x cols`) applied to a rational vector.
pub fn imat_apply_q(m: &[i64], rows: usize, cols: usize, v: &[Q]) -> QVec {
    (0..rows)
        .map(|i| dot_iq(&m[i * cols..(i + 1) * cols], v))
        .collect()
}

pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn to_i64_vec(v: &[Q]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_i64()
            } else {
                None
            }
        })
        .collect()
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Reduced row echelon form of a rational matrix given as a list of rows.
/// Returns the reduced rows (all of them, zero rows at the bottom) and the
/// pivot columns.
pub fn rref(mut m: Vec<QVec>, cols: usize) -> (Vec<QVec>, Vec<usize>) {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(rows: &[QVec], cols: usize) -> usize {
    rref(rows.to_vec(), cols).1.len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn nullspace(a: &[QVec], cols: usize) -> Vec<QVec> {
    let (r, piv) = rref(a.to_vec(), cols);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = qzero(cols);
            v[f] = Q::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `A x = b` (free variables set to zero), if consistent.
pub fn solve(a: &[QVec], b: &[Q], cols: usize) -> Option<QVec> {
    let aug: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, piv) = rref(aug, cols + 1);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = qzero(cols);
    for (i, &p) in piv.iter().enumerate() {
        x[p] = r[i][cols].clone();
    }
    Some(x)
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[QVec], v: &[Q], dim: usize) -> bool {
    let mut rows = basis.to_vec();
    let r0 = rank(&rows, dim);
    rows.push(v.to_vec());
    rank(&rows, dim) == r0
}

/// Smith normal form of an integer matrix `a` (`rows x cols`, row-major).
///
/// Returns `(u, d, v)` with `u * a * v = diag(d)`, `u`, `v` unimodular and
/// `d[i] | d[i+1]`, all `d[i] >= 0`. `d` has length `min(rows, cols)`.
pub fn smith(a: &[i64], rows: usize, cols: usize) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
    let mut m: Vec<Vec<i128>> = (0..rows)
        .map(|i| {
            a[i * cols..(i + 1) * cols]
                .iter()
                .map(|&x| x as i128)
                .collect()
        })
        .collect();
    let mut u: Vec<Vec<i128>> = identity128(rows);
    let mut v: Vec<Vec<i128>> = identity128(cols);
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // pick the smallest nonzero entry in the remaining block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap(t, pi);
            u.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = m[i][t] / p;
                if f != 0 {
                    for j in 0..cols {
                        m[i][j] -= f * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= f * u[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let f = m[t][j] / p;
                if f != 0 {
                    for i in 0..rows {
                        m[i][j] -= f * m[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= f * v[i][t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold any offending row into row t
            let mut fixed = true;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if m[i][j] % p != 0 {
                        for k in 0..cols {
                            m[t][k] += m[i][k];
                        }
                        for k in 0..rows {
                            u[t][k] += u[i][k];
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
    }
    let d = (0..n).map(|i| m[i][i] as i64).collect();
    (flatten(&u), d, flatten(&v))
}

/// Row-style Hermite normal form of the lattice spanned by `rows`
/// (each of length `cols`). Zero rows are dropped.
pub fn hnf_rows(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut out_rank = 0;
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (out_rank..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(out_rank, p);
            let mut done = true;
            for i in out_rank + 1..m.len() {
                let f = m[i][c] / m[out_rank][c];
                if f != 0 {
                    for j in 0..cols {
                        m[i][j] -= f * m[out_rank][j];
                    }
                }
                if m[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                if m[out_rank][c] < 0 {
                    for j in 0..cols {
                        m[out_rank][j] = -m[out_rank][j];
                    }
                }
                let piv = m[out_rank][c];
                for i in 0..out_rank {
                    let f = m[i][c].div_euclid(piv);
                    if f != 0 {
                        for j in 0..cols {
                            m[i][j] -= f * m[out_rank][j];
                        }
                    }
                }
                out_rank += 1;
                break;
            }
        }
        if out_rank == m.len() {
            break;
        }
    }
    m.truncate(out_rank);
    m.into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

/// Integer basis (as rows) of `{y in Z^n : y A = 0}` for `a` (`n x m`).
pub fn left_kernel_int(a: &[i64], n: usize, m: usize) -> Vec<Vec<i64>> {
    let (u, d, _) = smith(a, n, m);
    let r = d.iter().filter(|&&x| x != 0).count();
    let rows: Vec<Vec<i64>> = (r..n).map(|i| u[i * n..(i + 1) * n].to_vec()).collect();
    hnf_rows(&rows, n)
}

/// Integer basis (as vectors) of `{x in Z^m : A x = 0}` for `a` (`n x m`).
pub fn kernel_int(a: &[i64], n: usize, m: usize) -> Vec<Vec<i64>> {
    let mut t = vec![0i64; n * m];
    for i in 0..n {
        for j in 0..m {
            t[j * n + i] = a[i * m + j];
        }
    }
    left_kernel_int(&t, m, n)
}

fn identity128(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn flatten(m: &[Vec<i128>]) -> Vec<i64> {
    m.iter().flatten().map(|&x| x as i64).collect()
}

pub fn imat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += x * b[k * n + j];
            }
        }
    }
    c
}

pub fn imat_apply(m: &[i64], v: &[i64], n: usize) -> Vec<i64> {
    (0..n)
        .map(|i| {
            m[i * n..(i + 1) * n]
                .iter()
                .zip(v)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

pub fn imat_identity(n: usize) -> Vec<i64> {
    (0..n * n).map(|k| i64::from(k / n == k % n)).collect()
}

pub fn imat_transpose(m: &[i64], n: usize) -> Vec<i64> {
    (0..n * n).map(|k| m[(k % n) * n + k / n]).collect()
}

/// Determinant of a small integer matrix via fraction-free elimination.
pub fn idet(m: &[i64], n: usize) -> i64 {
    let rows: Vec<QVec> = (0..n).map(|i| qvec(&m[i * n..(i + 1) * n])).collect();
    let mut a = rows;
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &a[c][j] * &f;
                a[i][j] -= t;
            }
        }
    }
    det.to_integer().to_i64().unwrap_or(0)
}

/// Inverse of a unimodular integer matrix.
pub fn imat_inverse(m: &[i64], n: usize) -> Option<Vec<i64>> {
    let rows: Vec<QVec> = (0..n)
        .map(|i| {
            let mut r = qvec(&m[i * n..(i + 1) * n]);
            r.extend((0..n).map(|j| q(i64::from(i == j))));
            r
        })
        .collect();
    let (r, piv) = rref(rows, 2 * n);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    let mut out = Vec::with_capacity(n * n);
    for row in r.iter().take(n) {
        for x in &row[n..] {
            if !x.is_integer() {
                return None;
            }
            out.push(x.to_integer().to_i64()?);
        }
    }
    Some(out)
}

pub fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Ceiling of a rational as `i64`.
pub fn ceil_i64(x: &Q) -> i64 {
    x.ceil()
        .to_integer()
        .to_i64()
        .expect("ceiling out of range")
}

/// An integer solution of `A x = b` (`a` is `rows x cols`), if one exists.
pub fn solve_int(a: &[i64], rows: usize, cols: usize, b: &[i64]) -> Option<Vec<i64>> {
    let (u, d, v) = smith(a, rows, cols);
    let ub: Vec<i64> = (0..rows)
        .map(|i| (0..rows).map(|k| u[i * rows + k] * b[k]).sum())
        .collect();
    let mut z = vec![0i64; cols];
    for i in 0..rows {
        let di = d.get(i).copied().unwrap_or(0);
        if di == 0 {
            if ub[i] != 0 {
                return None;
            }
        } else {
            if ub[i] % di != 0 {
                return None;
            }
            z[i] = ub[i] / di;
        }
    }
    Some(
        (0..cols)
            .map(|i| (0..cols).map(|k| v[i * cols + k] * z[k]).sum())
            .collect(),
    )
}
