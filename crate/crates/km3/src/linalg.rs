//! Small dense matrices over `i64` and over exact rationals.
//!
//! Everything in this crate is rank 6 or less, so the implementations favor
//! clarity over asymptotics: Bareiss for integer determinants, plain
//! Gauss-Jordan over rationals for inverses.

use num::rational::Ratio;
use num::{One, Signed, Zero};
use std::ops::{Index, IndexMut};

/// Exact rational scalar.
pub type Rat = Ratio<i64>;

/// Shorthand rational constructor.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }
}

impl<T: Clone + Zero + One> Mat<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone> Mat<T> {
    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self.data[i * self.cols + j].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
{
    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.clone() * other[(k, j)].clone();
                    let cur = out[(i, j)].clone();
                    out[(i, j)] = cur + t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + std::ops::Sub<Output = T>,
{
    pub fn sub(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone() - other[(i, j)].clone();
            }
        }
        out
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + std::ops::Add<Output = T>,
{
    pub fn add(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone() + other[(i, j)].clone();
            }
        }
        out
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + std::ops::Neg<Output = T>,
{
    pub fn neg(&self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

impl Mat<i64> {
    pub fn to_rat(&self) -> Mat<Rat> {
        self.map(|&x| Rat::from_integer(x))
    }

    pub fn scale(&self, s: i64) -> Mat<i64> {
        self.map(|&x| x * s)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Determinant by fraction-free Bareiss elimination; exact in `i64` for
    /// the small matrices used here, with `i128` intermediates.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)] as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n.saturating_sub(1) {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return 0;
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        let d = sign * a[n - 1][n - 1];
        i64::try_from(d).expect("determinant overflow")
    }
}

impl Mat<Rat> {
    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Mat<Rat>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::<Rat>::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[(i, col)].is_zero())?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)];
                for j in 0..n {
                    let t = f * a[(col, j)];
                    a[(i, j)] -= t;
                    let t = f * inv[(col, j)];
                    inv[(i, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    pub fn det_rat(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&i| !a[(i, col)].is_zero()) else {
                return Rat::zero();
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for i in col + 1..n {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)] / p;
                for j in col..n {
                    let t = f * a[(col, j)];
                    a[(i, j)] -= t;
                }
            }
        }
        det
    }

    /// True when every entry has denominator 1.
    pub fn is_integral(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)].is_integer()))
    }

    pub fn to_int(&self) -> Option<Mat<i64>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.map(|x| x.to_integer()))
    }
}

/// Inertia (positive, negative, zero counts) of a symmetric rational matrix,
/// by symmetric Gaussian elimination. Exact, so usable as a signature test.
pub fn inertia(g: &Mat<Rat>) -> (usize, usize, usize) {
    assert_eq!(g.rows, g.cols);
    let n = g.rows;
    let mut a = g.clone();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    let mut k = 0;
    while k < n {
        if a[(k, k)].is_zero() {
            // Look for a nonzero diagonal entry to swap in.
            if let Some(p) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                a.swap_rows(k, p);
                a.swap_cols(k, p);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // Zero diagonal block with a nonzero pairing: adding row/col j
                // into i makes the diagonal entry 2*a[i][j] != 0.
                for c in 0..n {
                    let t = a[(j, c)];
                    a[(i, c)] += t;
                }
                for r in 0..n {
                    let t = a[(r, j)];
                    a[(r, i)] += t;
                }
                a.swap_rows(k, i);
                a.swap_cols(k, i);
            } else {
                zero += n - k;
                break;
            }
        }
        let p = a[(k, k)];
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)] / p;
            for j in k..n {
                let t = f * a[(k, j)];
                a[(i, j)] -= t;
            }
            for j in k..n {
                let t = f * a[(j, k)];
                a[(j, i)] -= t;
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

/// All integer vectors `x != 0` with `x^T G x <= bound` for positive-definite
/// `G`, one of each `±x` pair. Exact rational recursion on a LDL-type
/// decomposition.
pub fn short_vectors(g: &Mat<i64>, bound: i64) -> Vec<Vec<i64>> {
    assert!(g.is_symmetric());
    let n = g.rows;
    let gq = g.to_rat();
    // Decompose Q(x) = sum_i d_i (x_i + sum_{j>i} l_{ij} x_j)^2.
    let mut d = vec![Rat::zero(); n];
    let mut l = Mat::<Rat>::identity(n);
    let mut a = gq;
    for i in 0..n {
        d[i] = a[(i, i)];
        assert!(d[i].is_positive(), "short_vectors needs a positive-definite Gram");
        for j in i + 1..n {
            l[(i, j)] = a[(i, j)] / d[i];
        }
        for r in i + 1..n {
            for c in i + 1..n {
                let t = d[i] * l[(i, r)] * l[(i, c)];
                a[(r, c)] -= t;
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    rec_short(&d, &l, Rat::from_integer(bound), n, &mut x, &mut out);
    out.retain(|v| v.iter().any(|&c| c != 0));
    out
}

fn rec_short(
    d: &[Rat],
    l: &Mat<Rat>,
    remaining: Rat,
    idx: usize,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if remaining < Rat::zero() {
        return;
    }
    if idx == 0 {
        out.push(x.clone());
        return;
    }
    let i = idx - 1;
    // center = -sum_{j>i} l_{ij} x_j
    let mut center = Rat::zero();
    for j in idx..x.len() {
        center -= l[(i, j)] * Rat::from_integer(x[j]);
    }
    // |x_i - center| <= sqrt(remaining / d_i)
    let radius2 = remaining / d[i];
    let lo = ceil_of(center - sqrt_upper(radius2));
    let hi = floor_of(center + sqrt_upper(radius2));
    for xi in lo..=hi {
        // Enforce one representative per ±x pair: highest assigned nonzero
        // coordinate positive.
        if x[idx..].iter().all(|&c| c == 0) && xi < 0 {
            continue;
        }
        x[i] = xi;
        let diff = Rat::from_integer(xi) - center;
        let used = d[i] * diff * diff;
        if used <= remaining {
            rec_short(d, l, remaining - used, i, x, out);
        }
    }
    x[i] = 0;
}

fn floor_of(r: Rat) -> i64 {
    r.floor().to_integer()
}

fn ceil_of(r: Rat) -> i64 {
    r.ceil().to_integer()
}

/// Smallest rational of the form k (integer) with k >= sqrt(r), used only to
/// bound search intervals; r >= 0.
fn sqrt_upper(r: Rat) -> Rat {
    if r < Rat::zero() {
        return Rat::zero();
    }
    let num = *r.numer();
    let den = *r.denom();
    // ceil(sqrt(num/den)) <= ceil(sqrt(num*den))/den ... simpler: integer k
    // with k^2 >= num/den, i.e. k = ceil(sqrt(ceil(num/den))) adjusted.
    let q = num / den + 1;
    let mut k = isqrt(q);
    while k * k < q {
        k += 1;
    }
    Rat::from_integer(k)
}

/// Integer square root (floor) for nonnegative input.
pub fn isqrt(n: i64) -> i64 {
    assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}
