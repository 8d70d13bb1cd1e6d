//! Symmetric banded matrices and an unpivoted LDLᵀ factorization.

use crate::error::{Error, Result};

/// Symmetric matrix stored by its lower band. Row `i` holds `M[i][i-d]` for
/// `d = 0..=bw` at `data[i * (bw + 1) + d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, d: usize) -> usize {
        i * (self.bw + 1) + d
    }

    /// Entry `M[i][j]`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.bw {
            0.0
        } else {
            self.data[self.idx(r, d)]
        }
    }

    /// Adds `v` to the symmetric pair `M[i][j] = M[j][i]` (a single entry when `i == j`).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        assert!(d <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        let k = self.idx(r, d);
        self.data[k] += v;
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.data[self.idx(i, 0)]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[self.idx(i, 0)..self.idx(i, 0) + self.bw + 1];
            y[i] += row[0] * x[i];
            for d in 1..=self.bw.min(i) {
                let v = row[d];
                y[i] += v * x[i - d];
                y[i - d] += v * x[i];
            }
        }
        y
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.matvec(y))
    }

    /// `self - sigma * other`, both with the same shape.
    pub fn shifted(&self, sigma: f64, other: &SymBand) -> SymBand {
        assert_eq!((self.n, self.bw), (other.n, other.bw));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - sigma * b)
            .collect();
        SymBand {
            n: self.n,
            bw: self.bw,
            data,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Largest magnitude in row `i`, both sides of the diagonal.
    pub fn row_scale(&self, i: usize) -> f64 {
        let mut m = f64::MIN_POSITIVE;
        for d in 0..=self.bw.min(i) {
            m = m.max(self.data[self.idx(i, d)].abs());
        }
        for d in 1..=self.bw {
            if i + d < self.n {
                m = m.max(self.data[self.idx(i + d, d)].abs());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn ldlt(&self) -> Ldlt {
        Ldlt::factor(self)
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `M = L D Lᵀ` with unit lower-banded `L`.
///
/// There is no pivoting. A pivot below machine precision relative to its row
/// is replaced by that threshold with its sign kept (zero counts as
/// positive), which keeps the inertia count meaningful on singular shifts.
#[derive(Debug, Clone)]
pub struct Ldlt {
    n: usize,
    bw: usize,
    l: Vec<f64>,
    d: Vec<f64>,
    guarded: Vec<usize>,
}

impl Ldlt {
    fn factor(m: &SymBand) -> Self {
        let (n, bw) = (m.n, m.bw);
        let mut l = vec![0.0; n * (bw + 1)];
        let mut d = vec![0.0; n];
        let mut guarded = Vec::new();
        let at = |i: usize, dd: usize| i * (bw + 1) + dd;
        // w[k] = L[i][k] * D[k] for the current row.
        let mut w = vec![0.0; bw + 1];
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let mut s = m.data[at(i, i - j)];
                for k in k0..j {
                    s -= w[i - k] * l[at(j, j - k)];
                }
                if j < i {
                    let lij = s / d[j];
                    l[at(i, i - j)] = lij;
                    w[i - j] = lij * d[j];
                } else {
                    // Weights span many orders of magnitude, so the guard scales per row.
                    let tiny = f64::EPSILON * m.row_scale(i);
                    if s.abs() < tiny {
                        guarded.push(i);
                        s = if s < 0.0 { -tiny } else { tiny };
                    }
                    d[i] = s;
                    l[at(i, 0)] = 1.0;
                }
            }
        }
        Self { n, bw, l, d, guarded }
    }

    /// Number of negative pivots, equal to the number of negative eigenvalues.
    pub fn negative_count(&self) -> usize {
        self.d.iter().filter(|&&v| v < 0.0).count()
    }

    pub fn pivots(&self) -> &[f64] {
        &self.d
    }

    /// Rows whose pivot hit the singularity guard.
    pub fn guarded_rows(&self) -> &[usize] {
        &self.guarded
    }

    pub fn first_nonpositive(&self) -> Option<usize> {
        self.d.iter().position(|&v| v <= 0.0)
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let at = |i: usize, dd: usize| i * (bw + 1) + dd;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[at(i, i - k)] * x[k];
            }
            x[i] = s;
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= di;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n.min(i + bw + 1) {
                s -= self.l[at(k, k - i)] * x[k];
            }
            x[i] = s;
        }
        x
    }
}

/// Checks that `b` is positive definite, reporting the first failing row.
pub fn check_positive_definite(b: &SymBand) -> Result<()> {
    let f = b.ldlt();
    let guarded = f.guarded_rows().first().copied();
    match f.first_nonpositive().into_iter().chain(guarded).min() {
        Some(row) => Err(Error::NotPositiveDefinite { row }),
        None => Ok(()),
    }
}
