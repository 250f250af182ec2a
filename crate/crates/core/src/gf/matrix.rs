use std::fmt;

use rand::Rng;

use super::field::{FieldElement, PrimeField};
use crate::error::{Error, Result};

/// Dense row-major matrix over a prime field.
///
/// Zero-row and zero-column matrices are legal and have rank 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FieldMatrix {
    /// Build from row-major data, reducing every entry mod p.
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        let data = data.into_iter().map(|v| field.reduce(v)).collect();
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from a list of equally long rows. An empty list gives a 0x0 matrix.
    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&v| field.reduce(v)));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Like [`Self::from_rows`] but accepts negative entries.
    pub fn from_signed_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let converted: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| field.reduce_signed(v)).collect())
            .collect();
        Self::from_rows(field, &converted)
    }

    /// A single column vector.
    pub fn column(field: PrimeField, values: &[u64]) -> Self {
        Self {
            field,
            rows: values.len(),
            cols: 1,
            data: values.iter().map(|&v| field.reduce(v)).collect(),
        }
    }

    /// Each entry i.i.d. uniform over `[0, p)`, drawn row by row.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, field: PrimeField) -> Self {
        let p = field.modulus();
        let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = self.field.reduce(value);
    }

    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        self.field.element(self.get(r, c))
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch {
                left: self.field.modulus(),
                right: other.field.modulus(),
            });
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let f = self.field;
        let p = f.modulus();
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = (*o + a * b) % p;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product with a plain residue vector.
    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let p = self.field.modulus();
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * (b % p)) % p)
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &Self, op: &'static str, g: impl Fn(PrimeField, u64, u64) -> u64) -> Result<Self> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let f = self.field;
        Ok(Self {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| g(f, a, b)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self {
            data: self.data.iter().map(|&v| f.neg(v)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: u64) -> Self {
        let f = self.field;
        let s = f.reduce(s);
        Self {
            data: self.data.iter().map(|&v| f.mul(v, s)).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Stack matrices vertically. All parts must share the column count and field.
    pub fn vstack(field: PrimeField, cols: usize, parts: &[&Self]) -> Result<Self> {
        let mut data = Vec::with_capacity(parts.iter().map(|m| m.data.len()).sum());
        let mut rows = 0;
        for m in parts {
            if m.field != field {
                return Err(Error::ModulusMismatch {
                    left: field.modulus(),
                    right: m.field.modulus(),
                });
            }
            if m.cols != cols {
                return Err(Error::DimensionMismatch {
                    op: "vstack",
                    left: (rows, cols),
                    right: m.shape(),
                });
            }
            rows += m.rows;
            data.extend_from_slice(&m.data);
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Stack matrices horizontally. All parts must share the row count and field.
    pub fn hstack(field: PrimeField, rows: usize, parts: &[&Self]) -> Result<Self> {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut offset = 0;
        for m in parts {
            if m.field != field {
                return Err(Error::ModulusMismatch {
                    left: field.modulus(),
                    right: m.field.modulus(),
                });
            }
            if m.rows != rows {
                return Err(Error::DimensionMismatch {
                    op: "hstack",
                    left: (rows, cols),
                    right: m.shape(),
                });
            }
            out.place(0, offset, m)?;
            offset += m.cols;
        }
        Ok(out)
    }

    /// Copy `block` into `self` with its top-left corner at `(row, col)`.
    pub fn place(&mut self, row: usize, col: usize, block: &Self) -> Result<()> {
        self.check_field(block)?;
        if row + block.rows > self.rows || col + block.cols > self.cols {
            return Err(Error::DimensionMismatch {
                op: "place",
                left: self.shape(),
                right: (row + block.rows, col + block.cols),
            });
        }
        for r in 0..block.rows {
            let dst = (row + r) * self.cols + col;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
        Ok(())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Self {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Submatrix of `n_rows x n_cols` starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, n_rows: usize, n_cols: usize) -> Self {
        let mut out = Self::zeros(self.field, n_rows, n_cols);
        for r in 0..n_rows {
            let src = (row + r) * self.cols + col;
            out.data[r * n_cols..(r + 1) * n_cols].copy_from_slice(&self.data[src..src + n_cols]);
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns and the
    /// determinant multiplier (product of pivots and row-swap signs).
    fn rref_in_place(&mut self) -> (Vec<usize>, u64) {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut det = 1 % f.modulus();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
                det = f.neg(det);
            }
            let pivot = self.data[r * cols + c];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("nonzero pivot");
            for j in c..cols {
                self.data[r * cols + j] = f.mul(self.data[r * cols + j], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = f.mul(factor, self.data[r * cols + j]);
                    self.data[i * cols + j] = f.sub(self.data[i * cols + j], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, det)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let (pivots, _) = m.rref_in_place();
        (m, pivots)
    }

    /// Row rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminating the shorter side is cheaper; rank is transpose invariant.
        let mut m = if self.rows > self.cols {
            self.transpose()
        } else {
            self.clone()
        };
        m.rref_in_place().0.len()
    }

    pub fn determinant(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let (pivots, det) = m.rref_in_place();
        if pivots.len() < self.rows {
            return Ok(self.field.zero());
        }
        Ok(self.field.element(det))
    }

    /// Columns form a basis of the right null space `{x : A x = 0}`.
    pub fn null_space_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = self.field;
        let mut basis = Self::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            basis.data[fc * free.len() + j] = 1;
            for (pi, &pc) in pivots.iter().enumerate() {
                basis.data[pc * free.len() + j] = f.neg(r.get(pi, fc));
            }
        }
        basis
    }

    /// Solve `A X = B` for square, invertible `A`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.check_field(rhs)?;
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let n = self.rows;
        let mut aug = Self::hstack(self.field, n, &[self, rhs])?;
        let (pivots, _) = aug.rref_in_place();
        let rank = pivots.iter().take_while(|&&c| c < n).count();
        if rank < n {
            return Err(Error::Singular { rank, size: n });
        }
        Ok(aug.block(0, n, n, rhs.cols))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.field, self.rows))
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u64::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn naive_mul(a: &FieldMatrix, b: &FieldMatrix) -> Vec<Vec<u64>> {
        let p = a.field().modulus();
        (0..a.rows())
            .map(|i| {
                (0..b.cols())
                    .map(|j| (0..a.cols()).fold(0, |s, k| (s + a.get(i, k) * b.get(k, j)) % p))
                    .collect()
            })
            .collect()
    }

    fn cofactor_det(m: &[Vec<u64>], p: u64) -> u64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return m[0][0] % p;
        }
        let mut acc: i128 = 0;
        for j in 0..n {
            let minor: Vec<Vec<u64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = (m[0][j] as i128) * (cofactor_det(&minor, p) as i128);
            acc += if j % 2 == 0 { term } else { -term };
        }
        acc.rem_euclid(p as i128) as u64
    }

    #[test]
    fn mat_mul_examples() {
        let f5 = gf(5);
        let a = FieldMatrix::from_rows(f5, &[[1, 1], [1, 2]]).unwrap();
        let b = FieldMatrix::from_rows(f5, &[[1], [3]]).unwrap();
        assert_eq!(a.mat_mul(&b).unwrap().to_rows(), vec![vec![4], vec![2]]);

        let m = FieldMatrix::from_rows(f5, &[[1, 2, 3], [4, 0, 1]]).unwrap();
        assert_eq!(FieldMatrix::identity(f5, 2).mat_mul(&m).unwrap(), m);

        let err = m.mat_mul(&m).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn mat_mul_matches_naive_oracle() {
        let f = gf(73);
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = FieldMatrix::random(&mut rng, 6, 6, f);
            let b = FieldMatrix::random(&mut rng, 6, 6, f);
            assert_eq!(a.mat_mul(&b).unwrap().to_rows(), naive_mul(&a, &b));
        }
    }

    #[test]
    fn rank_examples() {
        let f73 = gf(73);
        assert_eq!(FieldMatrix::identity(f73, 6).rank(), 6);
        let f5 = gf(5);
        let t1 = FieldMatrix::from_rows(f5, &[[1, 0], [0, 1], [1, 1], [1, 2], [1, 3]]).unwrap();
        assert_eq!(t1.rank(), 2);
        assert_eq!(FieldMatrix::zeros(f5, 3, 4).rank(), 0);
        assert_eq!(FieldMatrix::zeros(f5, 0, 4).rank(), 0);
        assert_eq!(FieldMatrix::zeros(f5, 3, 0).rank(), 0);
    }

    #[test]
    fn determinant_examples() {
        let f5 = gf(5);
        assert_eq!(FieldMatrix::identity(f5, 3).determinant().unwrap().value(), 1);
        let a = FieldMatrix::from_rows(f5, &[[1, 1], [1, 2]]).unwrap();
        assert_eq!(a.determinant().unwrap().value(), 1);
        let swapped = FieldMatrix::from_rows(f5, &[[0, 1], [1, 0]]).unwrap();
        assert_eq!(swapped.determinant().unwrap().value(), 4);
        assert!(matches!(
            FieldMatrix::zeros(f5, 2, 3).determinant(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let f = gf(73);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for n in 1..=5 {
            for _ in 0..10 {
                let a = FieldMatrix::random(&mut rng, n, n, f);
                assert_eq!(a.determinant().unwrap().value(), cofactor_det(&a.to_rows(), 73));
            }
        }
    }

    #[test]
    fn null_space_examples() {
        let f5 = gf(5);
        let a = FieldMatrix::from_rows(f5, &[[1, 1]]).unwrap();
        let n = a.null_space_basis();
        assert_eq!(n.shape(), (2, 1));
        assert!(a.mat_mul(&n).unwrap().is_zero());
        // (1, 4) up to scaling
        assert_eq!(f5.mul(n.get(0, 0), 4), n.get(1, 0));

        let full = FieldMatrix::from_rows(f5, &[[1, 1], [1, 2]]).unwrap();
        assert_eq!(full.null_space_basis().cols(), 0);

        let f = gf(73);
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..10 {
            let a = FieldMatrix::random(&mut rng, 3, 6, f);
            let n = a.null_space_basis();
            assert_eq!(n.cols(), 6 - a.rank());
            assert!(a.mat_mul(&n).unwrap().is_zero());
            assert_eq!(n.rank(), n.cols());
        }
    }

    #[test]
    fn solve_examples() {
        let f5 = gf(5);
        let a = FieldMatrix::from_rows(f5, &[[1, 1], [1, 2]]).unwrap();
        let b = FieldMatrix::from_rows(f5, &[[4], [2]]).unwrap();
        assert_eq!(a.solve(&b).unwrap().to_rows(), vec![vec![1], vec![3]]);

        let b2 = FieldMatrix::from_rows(f5, &[[3, 1, 4], [0, 2, 2]]).unwrap();
        assert_eq!(FieldMatrix::identity(f5, 2).solve(&b2).unwrap(), b2);

        let singular = FieldMatrix::from_rows(f5, &[[1, 2], [2, 4]]).unwrap();
        assert_eq!(singular.solve(&b).unwrap_err(), Error::Singular { rank: 1, size: 2 });
    }

    #[test]
    fn solve_random_systems_multiply_back() {
        let f = gf(769);
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let mut solved = 0;
        while solved < 10 {
            let a = FieldMatrix::random(&mut rng, 8, 8, f);
            if a.rank() < 8 {
                continue;
            }
            let b = FieldMatrix::random(&mut rng, 8, 3, f);
            let x = a.solve(&b).unwrap();
            assert_eq!(a.mat_mul(&x).unwrap(), b);
            solved += 1;
        }
    }

    #[test]
    fn random_matrix_is_seed_deterministic() {
        let f = gf(73);
        let a = FieldMatrix::random(&mut ChaCha20Rng::seed_from_u64(3), 2, 2, f);
        let b = FieldMatrix::random(&mut ChaCha20Rng::seed_from_u64(3), 2, 2, f);
        assert_eq!(a, b);
        let e = FieldMatrix::random(&mut ChaCha20Rng::seed_from_u64(3), 0, 5, f);
        assert_eq!(e.shape(), (0, 5));
    }

    #[test]
    fn random_matrix_residues_are_uniform() {
        let f5 = gf(5);
        let m = FieldMatrix::random(&mut ChaCha20Rng::seed_from_u64(2024), 100, 100, f5);
        let mut counts = [0usize; 5];
        for &v in m.data() {
            counts[v as usize] += 1;
        }
        // Binomial(10^4, 1/5): mean 2000, sigma 40.
        for c in counts {
            assert!((c as i64 - 2000).abs() <= 200, "{counts:?}");
        }
    }

    #[test]
    fn stacking_and_blocks() {
        let f = gf(7);
        let a = FieldMatrix::from_rows(f, &[[1, 2], [3, 4]]).unwrap();
        let b = FieldMatrix::from_rows(f, &[[5, 6]]).unwrap();
        let v = FieldMatrix::vstack(f, 2, &[&a, &b]).unwrap();
        assert_eq!(v.to_rows(), vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
        let h = FieldMatrix::hstack(f, 2, &[&a, &a]).unwrap();
        assert_eq!(h.block(1, 2, 1, 2).to_rows(), vec![vec![3, 4]]);
        assert!(FieldMatrix::vstack(f, 3, &[&a]).is_err());
        let other = FieldMatrix::identity(gf(5), 2);
        assert!(matches!(a.add(&other), Err(Error::ModulusMismatch { .. })));
    }
}
