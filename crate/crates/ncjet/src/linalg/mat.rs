use std::fmt;
use std::ops::{Index, IndexMut};

use super::rat::Rat;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Row count above which row operations are spread across threads.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 48;

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds from row vectors; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Mat {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect(),
            cols,
        )
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(cols: &[Vec<Rat>], rows: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m[(i, j)] = x.clone();
                }
            }
        }
        m
    }

    pub fn column_vec(v: &[Rat]) -> Mat {
        Mat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn into_rows(self) -> Vec<Vec<Rat>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(|c| c.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn neg(&self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul: {:?} * {:?}", self.shape(), other.shape());
        #[cfg(feature = "parallel")]
        {
            if self.rows * other.cols >= PAR_THRESHOLD * PAR_THRESHOLD {
                return self.mul_par(other);
            }
        }
        self.mul_seq(other)
    }

    fn mul_row(&self, other: &Mat, i: usize, out: &mut [Rat]) {
        for (k, a) in self.row(i).iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(other.row(k)) {
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
    }

    /// Single-threaded product.
    pub fn mul_seq(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        if other.cols == 0 {
            return out;
        }
        for (i, chunk) in out.data.chunks_mut(other.cols).enumerate() {
            self.mul_row(other, i, chunk);
        }
        out
    }

    /// Row-parallel product.
    #[cfg(feature = "parallel")]
    pub fn mul_par(&self, other: &Mat) -> Mat {
        use rayon::prelude::*;
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        if other.cols == 0 {
            return out;
        }
        out.data
            .par_chunks_mut(other.cols)
            .enumerate()
            .for_each(|(i, chunk)| self.mul_row(other, i, chunk));
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Kronecker product, left factor indexing the slow coordinate.
    pub fn kron(&self, other: &Mat) -> Mat {
        let (r2, c2) = other.shape();
        let mut out = Mat::zeros(self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * r2 + k, j * c2 + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Columns `cols` of `self.kron(other)`, without forming the full product.
    pub fn kron_cols(&self, other: &Mat, cols: &[usize]) -> Mat {
        let (r2, c2) = other.shape();
        let mut out = Mat::zeros(self.rows * r2, cols.len());
        for (o, &c) in cols.iter().enumerate() {
            let (j, l) = (c / c2, c % c2);
            for i in 0..self.rows {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    let b = &other[(k, l)];
                    if !b.is_zero() {
                        out[(i * r2 + k, o)] = a * b;
                    }
                }
            }
        }
        out
    }

    pub fn hstack(parts: &[&Mat]) -> Mat {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Mat]) -> Mat {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            assert_eq!(m.cols, cols, "vstack col mismatch");
            data.extend_from_slice(&m.data);
        }
        Mat { rows, cols, data }
    }

    pub fn block_diag(parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Mat) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "block out of range");
        for i in 0..m.rows {
            for j in 0..m.cols {
                self[(r0 + i, c0 + j)] = m[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn rank(&self) -> usize {
        rref_rows(self.clone().into_rows(), self.cols).1.len()
    }

    /// Reduced row-echelon form (same shape; zero rows at the bottom).
    pub fn rref(&self) -> Mat {
        let (rows, _) = rref_rows(self.clone().into_rows(), self.cols);
        let mut out = Mat::zeros(self.rows, self.cols);
        for (i, r) in rows.into_iter().enumerate() {
            for (j, x) in r.into_iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        out
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rat;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

fn eliminate(target: &mut [Rat], pivot_row: &[Rat], support: &[usize], col: usize) {
    let f = target[col].clone();
    if f.is_zero() {
        return;
    }
    for &j in support {
        let t = &f * &pivot_row[j];
        target[j] -= t;
    }
}

fn eliminate_all(rows: &mut [Vec<Rat>], skip: usize, pivot_row: &[Rat], support: &[usize], col: usize) {
    #[cfg(feature = "parallel")]
    {
        if rows.len() >= PAR_THRESHOLD {
            use rayon::prelude::*;
            rows.par_iter_mut().enumerate().for_each(|(r, row)| {
                if r != skip {
                    eliminate(row, pivot_row, support, col);
                }
            });
            return;
        }
    }
    for (r, row) in rows.iter_mut().enumerate() {
        if r != skip {
            eliminate(row, pivot_row, support, col);
        }
    }
}

/// Gauss-Jordan elimination. Returns the nonzero rows of the reduced
/// row-echelon form together with their pivot columns.
pub fn rref_rows(mut rows: Vec<Vec<Rat>>, ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next >= rows.len() {
            break;
        }
        // Cheapest pivot: sparsest row, then smallest entry.
        let mut best: Option<(usize, usize, u64)> = None;
        for (r, row) in rows.iter().enumerate().skip(next) {
            if row[col].is_zero() {
                continue;
            }
            let nnz = row[col..].iter().filter(|x| !x.is_zero()).count();
            let h = row[col].height();
            if best.is_none_or(|(_, bn, bh)| (nnz, h) < (bn, bh)) {
                best = Some((r, nnz, h));
            }
        }
        let Some((p, _, _)) = best else { continue };
        rows.swap(next, p);
        let inv = rows[next][col].recip();
        if !inv.is_one() {
            for x in rows[next][col..].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[next].clone();
        let support: Vec<usize> = (col..ncols).filter(|&j| !pivot_row[j].is_zero()).collect();
        eliminate_all(&mut rows, next, &pivot_row, &support, col);
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    (rows, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_examples() {
        assert_eq!(Mat::identity(3).rref(), Mat::identity(3));
        let m = Mat::from_i64(&[&[2, 4], &[1, 2]]);
        assert_eq!(m.rref(), Mat::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kron_index_order() {
        let a = Mat::from_i64(&[&[1, 2]]);
        let b = Mat::from_i64(&[&[1], &[10]]);
        assert_eq!(a.kron(&b), Mat::from_i64(&[&[1, 2], &[10, 20]]));
    }

    #[test]
    fn empty_shapes() {
        let z = Mat::zeros(0, 3);
        assert_eq!(z.rank(), 0);
        let p = Mat::zeros(2, 0).mul(&Mat::zeros(0, 4));
        assert_eq!(p, Mat::zeros(2, 4));
    }
}
