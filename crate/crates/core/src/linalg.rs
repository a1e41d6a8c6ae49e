//! Dense matrices over ℚ and ℚ(x).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{forward_owned, RatFunc, Q};

/// Row-major dense matrix over ℚ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    /// Column vector.
    pub fn column(v: &[Q]) -> Self {
        QMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[Q] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> Self {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Q) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn kron(&self, o: &QMatrix) -> Self {
        QMatrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            &self[(i / o.rows, j / o.cols)] * &o[(i % o.rows, j % o.cols)]
        })
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Row-stacking vectorization.
    pub fn vec_rows(&self) -> Vec<Q> {
        self.data.clone()
    }

    pub fn unvec_rows(v: &[Q], rows: usize, cols: usize) -> Self {
        assert_eq!(v.len(), rows * cols);
        QMatrix { rows, cols, data: v.to_vec() }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        QMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = QMatrix::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows).is_zero()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref_mut(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &self[(r, j)] * &f;
                        self[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_mut();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, piv) = self.rref();
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| !piv.contains(c)) {
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = QMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Q::one()
            } else {
                Q::zero()
            }
        });
        let piv = aug.rref_mut();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular("constant matrix is not invertible".into()));
        }
        Ok(aug.submatrix(0, n, n, n))
    }

    /// Solves `self * x = b`; `None` if inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let n = self.cols;
        let mut aug = QMatrix::from_fn(self.rows, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        let piv = aug.rref_mut();
        if piv.last() == Some(&n) {
            return None;
        }
        let mut x = vec![Q::zero(); n];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = aug[(i, n)].clone();
        }
        Some(x)
    }

    pub fn to_rf(&self) -> RfMatrix {
        RfMatrix::from_fn(self.rows, self.cols, |i, j| RatFunc::constant(self[(i, j)].clone()))
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Add<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = QMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = a * &o[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.scale(&-Q::one())
    }
}

forward_owned!(Add, add, QMatrix);
forward_owned!(Sub, sub, QMatrix);
forward_owned!(Mul, mul, QMatrix);

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Subspace of ℚ^n kept as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors(dim: usize, vs: &[Vec<Q>]) -> Self {
        let mut s = Span::new(dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// `v` minus its projection along the pivot coordinates.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut w = v.to_vec();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (wj, rj) in w.iter_mut().zip(r) {
                    if !rj.is_zero() {
                        *wj -= &f * rj;
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the span.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        self.contains(v).then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.dim);
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|c| !c.is_zero()) else { return false };
        let inv = w[p].recip();
        let w: Vec<Q> = w.iter().map(|c| c * &inv).collect();
        for r in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (rj, wj) in r.iter_mut().zip(&w) {
                    if !wj.is_zero() {
                        *rj -= &f * wj;
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, w);
        true
    }
}

/// Row-major dense matrix over ℚ(x).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RfMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl RfMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RfMatrix { rows, cols, data: vec![RatFunc::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RfMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = RatFunc::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RfMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> RatFunc) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RfMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == RfMatrix::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        RfMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        RfMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn derive(&self) -> Self {
        RfMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.derive()).collect() }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        RfMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, m: &RfMatrix) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self[(r0 + i, c0 + j)] = m[(i, j)].clone();
            }
        }
    }

    pub fn kron(&self, o: &RfMatrix) -> Self {
        RfMatrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            &self[(i / o.rows, j / o.cols)] * &o[(i % o.rows, j % o.cols)]
        })
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(RatFunc::zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    /// Conjugation by a permutation: entry `(i, j)` of the result is `self[(perm[i], perm[j])]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        RfMatrix::from_fn(self.rows, self.cols, |i, j| self[(perm[i], perm[j])].clone())
    }

    /// Constant matrix if every entry is constant.
    pub fn to_constant(&self) -> Option<QMatrix> {
        let vals: Option<Vec<Q>> = self.data.iter().map(|c| c.constant_value()).collect();
        vals.map(|data| QMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Evaluation at a point where no entry has a pole.
    pub fn eval(&self, x: &Q) -> Option<QMatrix> {
        let vals: Option<Vec<Q>> = self.data.iter().map(|c| c.eval(x)).collect();
        vals.map(|data| QMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Gauss–Jordan inverse with first-nonzero pivoting.
    pub fn inverse(&self) -> Result<RfMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RfMatrix::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return Err(Error::Singular("matrix determinant vanishes identically".into()));
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a[(c, c)].inv().unwrap();
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] * &piv;
                inv[(c, j)] = &inv[(c, j)] * &piv;
            }
            for i in 0..n {
                if i == c || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..n {
                    if !a[(c, j)].is_zero() {
                        a[(i, j)] = &a[(i, j)] - &(&f * &a[(c, j)]);
                    }
                    if !inv[(c, j)].is_zero() {
                        inv[(i, j)] = &inv[(i, j)] - &(&f * &inv[(c, j)]);
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> RatFunc {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = RatFunc::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else { return RatFunc::zero() };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det = &det * &piv;
            let pinv = piv.inv().unwrap();
            for i in c + 1..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = &a[(i, c)] * &pinv;
                for j in c..n {
                    if !a[(c, j)].is_zero() {
                        a[(i, j)] = &a[(i, j)] - &(&f * &a[(c, j)]);
                    }
                }
            }
        }
        det
    }

    pub fn to_string_grid(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|c| c.to_string()).collect()).collect()
    }
}

impl Index<(usize, usize)> for RfMatrix {
    type Output = RatFunc;
    fn index(&self, (i, j): (usize, usize)) -> &RatFunc {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RfMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatFunc {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Add<&'a RfMatrix> for &'a RfMatrix {
    type Output = RfMatrix;
    fn add(self, o: &RfMatrix) -> RfMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        RfMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a RfMatrix> for &'a RfMatrix {
    type Output = RfMatrix;
    fn sub(self, o: &RfMatrix) -> RfMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        RfMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a RfMatrix> for &'a RfMatrix {
    type Output = RfMatrix;
    fn mul(self, o: &RfMatrix) -> RfMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = RfMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Neg for &RfMatrix {
    type Output = RfMatrix;
    fn neg(self) -> RfMatrix {
        RfMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

forward_owned!(Add, add, RfMatrix);
forward_owned!(Sub, sub, RfMatrix);
forward_owned!(Mul, mul, RfMatrix);

impl fmt::Debug for RfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RfMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}
