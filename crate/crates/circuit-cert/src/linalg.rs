//! Dense exact-rational linear algebra and GF(2) elimination.
//!
//! Matrices here are desk-scale (dimension ≤ a few dozen); plain Gaussian
//! elimination with exact arithmetic is the right tool.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Row-reduced echelon form in place; returns pivot column indices.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let factor = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &self[(i, j)] - &factor * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let ai = a * self.cols + j;
            let bi = b * self.cols + j;
            self.data.swap(ai, bi);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn determinant(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &m[(i, j)] - &factor * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Solves `self * x = rhs` exactly. Returns `None` when the system is
    /// inconsistent; for underdetermined consistent systems the free
    /// variables are set to zero.
    pub fn solve(&self, rhs: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = RatMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = RatMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut inv = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// One-dimensional kernel generator for a matrix of rank `cols - 1`,
    /// scaled to a primitive integer vector. Returns `None` when the
    /// kernel dimension differs from one.
    pub fn kernel_primitive(&self) -> Option<Vec<BigInt>> {
        let mut m = self.clone();
        let pivots = m.rref();
        if pivots.len() + 1 != self.cols {
            return None;
        }
        let free = (0..self.cols).find(|c| !pivots.contains(c))?;
        let mut v = vec![Rat::zero(); self.cols];
        v[free] = Rat::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[(r, free)].clone();
        }
        // clear denominators, divide by content
        let mut lcm = BigInt::one();
        for x in &v {
            lcm = lcm.lcm(x.denom());
        }
        let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if !g.is_zero() && !g.is_one() {
            for x in &mut ints {
                *x /= &g;
            }
        }
        Some(ints)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Converts to f64 entrywise (for numeric back ends).
pub fn to_f64_rows(m: &RatMat) -> Vec<Vec<f64>> {
    (0..m.rows)
        .map(|i| m.row(i).iter().map(crate::scalar::rat_to_f64).collect())
        .collect()
}

/// Solves `A t = r` over GF(2) by Gaussian elimination. Rows are
/// coefficient vectors, `rhs` the parities. Returns the solution with
/// free variables set to 0, or `None` when inconsistent.
pub fn solve_gf2(rows: &[Vec<bool>], rhs: &[bool]) -> Option<Vec<bool>> {
    assert_eq!(rows.len(), rhs.len());
    let nvars = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<bool>> = rows.to_vec();
    let mut b: Vec<bool> = rhs.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; nvars];
    let mut r = 0;
    for c in 0..nvars {
        let Some(p) = (r..a.len()).find(|&i| a[i][c]) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] {
                for j in 0..nvars {
                    a[i][j] ^= a[r][j];
                }
                b[i] ^= b[r];
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
    }
    // inconsistency: zero row with nonzero rhs
    for i in 0..a.len() {
        if b[i] && a[i].iter().all(|&x| !x) {
            return None;
        }
    }
    let mut t = vec![false; nvars];
    for c in 0..nvars {
        if let Some(row) = pivot_of_col[c] {
            t[c] = b[row];
        }
    }
    Some(t)
}
