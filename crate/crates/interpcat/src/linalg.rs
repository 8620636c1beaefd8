//! Dense exact linear algebra over ℚ: the workhorse behind intertwiner
//! spaces, basis freezing, radical computation, and rank oracles.
//!
//! Matrices act on column vectors, so composition of linear maps is matrix
//! multiplication in application order, and `kron` uses the convention that
//! the first factor indexes the major axis.

use num::traits::{One, Zero};

use crate::scalar::{RankPolynomial, Rational, int};

/// A rows × cols matrix of rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from equal-length rows; a zero-row matrix needs
    /// `zeros` instead since the column count is unknowable here.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged rows in matrix literal"
        );
        Mat {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    /// A single-column matrix holding the vector.
    pub fn column(v: &[Rational]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major flattening; inverse of reading `from_fn(r, c, …)` back.
    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in matmul: {}×{} by {}×{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    /// Kronecker product, first factor major: (A⊗B)[(i,k),(j,l)] = A[i,j]·B[k,l].
    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            a * other.at(k, l),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    /// Reduced row echelon form plus the pivot column indices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.at(r, j).clone();
                m.set(r, j, m.at(p, j).clone());
                m.set(p, j, tmp);
            }
            let inv = m.at(r, c).recip();
            for j in 0..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.at(i, j) - &f * m.at(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A canonical basis of the right nullspace: one vector per free column,
    /// with a 1 in that column, read off the reduced echelon form.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.at(row, free).clone();
            }
            out.push(v);
        }
        out
    }

    /// One solution x of self·x = b, if the system is consistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        aug = aug.rref().0;
        let mut x = vec![Rational::zero(); self.cols];
        for i in 0..self.rows {
            let Some(lead) = (0..=self.cols).find(|&j| !aug.at(i, j).is_zero()) else {
                continue;
            };
            if lead == self.cols {
                return None;
            }
            x[lead] = aug.at(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r.at(i, j + n).clone()))
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                for j in 0..n {
                    let tmp = m.at(c, j).clone();
                    m.set(c, j, m.at(p, j).clone());
                    m.set(p, j, tmp);
                }
                det = -det;
            }
            det *= m.at(c, c);
            let inv = m.at(c, c).recip();
            for i in c + 1..n {
                if m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c) * &inv;
                for j in c..n {
                    let v = m.at(i, j) - &f * m.at(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Coefficients expressing `target` in the given spanning matrices (all of one
/// shape), or None if it lies outside their span. Unique when the basis is
/// linearly independent.
pub fn express_in_span(basis: &[Mat], target: &Mat) -> Option<Vec<Rational>> {
    let n = target.rows * target.cols;
    let system = Mat::from_fn(n, basis.len(), |i, j| {
        assert_eq!(
            (basis[j].rows, basis[j].cols),
            (target.rows, target.cols),
            "span members must share the target's shape"
        );
        basis[j].entries()[i].clone()
    });
    let x = system.solve(target.entries())?;
    // solve() returns some solution of a consistent system; verify exactly.
    let mut recon = Mat::zeros(target.rows, target.cols);
    for (c, b) in x.iter().zip(basis) {
        recon = recon.add(&b.scale(c));
    }
    (recon == *target).then_some(x)
}

/// Rank of a polynomial matrix over the rational function field, computed as
/// the maximum specialization rank over enough sample points: every k×k minor
/// has degree at most the sum of row-wise maximum degrees, so a minor that
/// vanishes at all those points is identically zero.
pub fn generic_rank(rows: &[Vec<RankPolynomial>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let degree_bound: usize = rows
        .iter()
        .map(|row| row.iter().filter_map(|p| p.degree()).max().unwrap_or(0))
        .sum();
    let mut best = 0;
    for sample in 0..=degree_bound as i64 {
        let t0 = int(sample);
        let m = Mat::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j].eval(&t0));
        best = best.max(m.rank());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{falling_factorial, ratio};
    use proptest::prelude::*;

    #[test]
    fn small_inverse_and_det() {
        let m = Mat::from_int_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(2));
        assert_eq!(inv, Mat::from_int_rows(&[&[1, -1], &[-1, 2]]));
        let singular = Mat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), int(0));
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Mat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            let prod = m.matmul(&Mat::column(v));
            assert!(prod.is_zero());
        }
        assert_eq!(ns[0], vec![int(-1), int(-1), int(1)]);
    }

    #[test]
    fn solve_consistency() {
        let m = Mat::from_int_rows(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let inconsistent = Mat::from_int_rows(&[&[1, 1], &[2, 2]]);
        assert!(inconsistent.solve(&[int(1), int(3)]).is_none());
    }

    #[test]
    fn kron_is_first_factor_major() {
        let a = Mat::from_int_rows(&[&[1, 2]]);
        let b = Mat::from_int_rows(&[&[3], &[4]]);
        let k = a.kron(&b);
        assert_eq!(k, Mat::from_int_rows(&[&[3, 6], &[4, 8]]));
    }

    #[test]
    fn express_in_span_finds_unique_coefficients() {
        let e1 = Mat::from_int_rows(&[&[1, 0], &[0, 0]]);
        let e2 = Mat::from_int_rows(&[&[0, 1], &[1, 0]]);
        let target = e1.scale(&ratio(1, 2)).add(&e2.scale(&int(3)));
        assert_eq!(
            express_in_span(&[e1.clone(), e2.clone()], &target),
            Some(vec![ratio(1, 2), int(3)])
        );
        let outside = Mat::from_int_rows(&[&[0, 0], &[0, 1]]);
        assert_eq!(express_in_span(&[e1, e2], &outside), None);
    }

    #[test]
    fn generic_rank_sees_through_vanishing_points() {
        // Diagonal (t, t−1) has rank 2 generically though both points t = 0
        // and t = 1 drop it to 1.
        let t = RankPolynomial::variable();
        let rows = vec![
            vec![t.clone(), RankPolynomial::zero()],
            vec![RankPolynomial::zero(), falling_factorial(1, 2).unwrap()],
        ];
        assert_eq!(generic_rank(&rows), 2);
        let dependent = vec![
            vec![t.clone(), t.clone()],
            vec![t.clone(), t],
        ];
        assert_eq!(generic_rank(&dependent), 1);
        assert_eq!(generic_rank(&[]), 0);
    }

    fn arb_mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
        prop::collection::vec((-9i64..=9, 1i64..=4).prop_map(|(p, q)| ratio(p, q)), rows * cols)
            .prop_map(move |data| Mat { rows, cols, data })
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in arb_mat(3, 3), b in arb_mat(3, 3)) {
            prop_assert_eq!(a.matmul(&b).det(), a.det() * b.det());
        }

        #[test]
        fn rank_bounds_and_nullity(m in arb_mat(3, 4)) {
            let r = m.rank();
            prop_assert!(r <= 3);
            prop_assert_eq!(m.nullspace().len(), 4 - r);
            for v in m.nullspace() {
                prop_assert!(m.matmul(&Mat::column(&v)).is_zero());
            }
        }

        #[test]
        fn transpose_reverses_products(a in arb_mat(2, 3), b in arb_mat(3, 2)) {
            prop_assert_eq!(
                a.matmul(&b).transpose(),
                b.transpose().matmul(&a.transpose())
            );
        }

        #[test]
        fn kron_is_functorial(
            a in arb_mat(2, 2),
            b in arb_mat(2, 2),
            c in arb_mat(2, 2),
            d in arb_mat(2, 2),
        ) {
            prop_assert_eq!(
                a.kron(&b).matmul(&c.kron(&d)),
                a.matmul(&c).kron(&b.matmul(&d))
            );
        }

        #[test]
        fn solve_solutions_check_out(m in arb_mat(3, 3), x in prop::collection::vec((-5i64..=5).prop_map(int), 3)) {
            let b = m.matmul(&Mat::column(&x));
            let b_vec: Vec<Rational> = b.entries().to_vec();
            let sol = m.solve(&b_vec).expect("constructed system is consistent");
            prop_assert_eq!(m.matmul(&Mat::column(&sol)), b);
        }
    }
}
