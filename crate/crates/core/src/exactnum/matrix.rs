use std::fmt;

use super::scalar::CycScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry count {got} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, got: usize },
    #[error("internal: elimination step produced an inexact quotient")]
    InexactDivision,
    #[error("determinant {0} is not a unit of the coefficient ring; inverse not representable")]
    NonUnitDeterminant(String),
}

/// Dense row-major matrix over [`CycScalar`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<CycScalar>,
}

/// Outcome of [`ExactMatrix::invert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inverse {
    Invertible(ExactMatrix),
    /// Nonzero vector `v` with `M·v = 0`.
    Singular(Vec<CycScalar>),
}

/// Result of fraction-free Gauss–Jordan elimination.
struct Reduced {
    a: Vec<Vec<CycScalar>>,
    pivot_cols: Vec<usize>,
    last_pivot: CycScalar,
    swaps: usize,
}

fn exact(a: &CycScalar, d: &CycScalar) -> Result<CycScalar, MatrixError> {
    if d.is_one() {
        return Ok(a.clone());
    }
    a.div_exact(d).ok_or(MatrixError::InexactDivision)
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<CycScalar>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::BadShape { rows, cols, got: entries.len() });
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![CycScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![CycScalar::one(); n])
    }

    pub fn diagonal(d: &[CycScalar]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[CycScalar] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycScalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<CycScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[CycScalar]) -> Result<Vec<CycScalar>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &ExactMatrix,
        f: impl Fn(&CycScalar, &CycScalar) -> CycScalar,
    ) -> Result<ExactMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, s: &CycScalar) -> ExactMatrix {
        let entries = self.entries.iter().map(|a| a * s).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, entries }
    }

    /// Right-multiply by `diag(d)`.
    pub fn scale_columns(&self, d: &[CycScalar]) -> Result<ExactMatrix, MatrixError> {
        if d.len() != self.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} column scalars for {} columns",
                d.len(),
                self.cols
            )));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (j, s) in d.iter().enumerate() {
                let idx = i * self.cols + j;
                out.entries[idx] = &self.entries[idx] * s;
            }
        }
        Ok(out)
    }

    /// Left-multiply by `diag(d)`.
    pub fn scale_rows(&self, d: &[CycScalar]) -> Result<ExactMatrix, MatrixError> {
        Ok(self.transpose().scale_columns(d)?.transpose())
    }

    /// Kronecker product.
    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    /// First (i, j) with i < j and M[i][j] ≠ M[j][i].
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Exact rank via forward fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        self.try_rank().expect("fraction-free elimination must divide exactly")
    }

    pub fn try_rank(&self) -> Result<usize, MatrixError> {
        let mut a = self.to_rows();
        let mut prev = CycScalar::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            let piv = a[r][c].clone();
            for i in r + 1..self.rows {
                let f = a[i][c].clone();
                for j in c + 1..self.cols {
                    let v = &(&piv * &a[i][j]) - &(&f * &a[r][j]);
                    a[i][j] = exact(&v, &prev)?;
                }
                a[i][c] = CycScalar::zero();
            }
            prev = piv;
            r += 1;
        }
        Ok(r)
    }

    /// Fraction-free Gauss–Jordan on the first `pivot_limit` columns.
    fn reduce(&self, pivot_limit: usize) -> Result<Reduced, MatrixError> {
        let mut a = self.to_rows();
        let mut prev = CycScalar::one();
        let mut pivot_cols = Vec::new();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..pivot_limit {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else { continue };
            if p != r {
                a.swap(r, p);
                swaps += 1;
            }
            let piv = a[r][c].clone();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..self.cols {
                    if j == c {
                        continue;
                    }
                    let v = &(&piv * &a[i][j]) - &(&f * &a[r][j]);
                    a[i][j] = exact(&v, &prev)?;
                }
                a[i][c] = CycScalar::zero();
            }
            prev = piv;
            pivot_cols.push(c);
            r += 1;
        }
        Ok(Reduced { a, pivot_cols, last_pivot: prev, swaps })
    }

    pub fn det(&self) -> Result<CycScalar, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let red = self.reduce(self.cols)?;
        if red.pivot_cols.len() < self.rows {
            return Ok(CycScalar::zero());
        }
        Ok(if red.swaps % 2 == 1 { -red.last_pivot } else { red.last_pivot })
    }

    /// A nonzero kernel vector, or `None` when the columns are independent.
    pub fn kernel_vector(&self) -> Result<Option<Vec<CycScalar>>, MatrixError> {
        let red = self.reduce(self.cols)?;
        let Some(free) = (0..self.cols).find(|c| !red.pivot_cols.contains(c)) else {
            return Ok(None);
        };
        let mut v = vec![CycScalar::zero(); self.cols];
        v[free] = -&red.last_pivot;
        for (r, &pc) in red.pivot_cols.iter().enumerate() {
            v[pc] = red.a[r][free].clone();
        }
        Ok(Some(v))
    }

    pub fn invert(&self) -> Result<Inverse, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycScalar::one());
        }
        let red = aug.reduce(n)?;
        if red.pivot_cols.len() < n {
            let v = self
                .kernel_vector()?
                .ok_or_else(|| MatrixError::DimensionMismatch("rank deficient without kernel".into()))?;
            return Ok(Inverse::Singular(v));
        }
        let d = red.last_pivot;
        let mut inv = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let q = red.a[i][n + j].div_exact(&d).ok_or_else(|| MatrixError::NonUnitDeterminant(d.to_string()))?;
                inv.set(i, j, q);
            }
        }
        Ok(Inverse::Invertible(inv))
    }

    /// Solve `M·x = b` for square invertible `M`.
    pub fn solve(&self, b: &[CycScalar]) -> Result<Option<Vec<CycScalar>>, MatrixError> {
        match self.invert()? {
            Inverse::Invertible(inv) => Ok(Some(inv.mul_vec(b)?)),
            Inverse::Singular(_) => Ok(None),
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| CycScalar::from_integer(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert_eq!(int_matrix(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]).rank(), 1);
        assert_eq!(int_matrix(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]]).rank(), 2);
        assert_eq!(ExactMatrix::zeros(2, 3).rank(), 0);
    }

    #[test]
    fn invert_diagonal() {
        let d = int_matrix(&[&[2, 0], &[0, 3]]);
        let Inverse::Invertible(inv) = d.invert().unwrap() else { panic!("singular") };
        assert_eq!(d.mul(&inv).unwrap(), ExactMatrix::identity(2));
        assert_eq!(inv.get(1, 1).to_string(), "1/3");
    }

    #[test]
    fn singular_all_ones() {
        let m = int_matrix(&[&[1, 1], &[1, 1]]);
        match m.invert().unwrap() {
            Inverse::Singular(v) => {
                assert_eq!(v, vec![CycScalar::from_integer(1), CycScalar::from_integer(-1)]);
            }
            Inverse::Invertible(_) => panic!("all-ones is singular"),
        }
    }

    #[test]
    fn det_sign_tracks_swaps() {
        assert_eq!(int_matrix(&[&[0, 1], &[1, 0]]).det().unwrap(), CycScalar::from_integer(-1));
        assert_eq!(int_matrix(&[&[2, 1], &[7, 4]]).det().unwrap(), CycScalar::from_integer(1));
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(ExactMatrix::zeros(2, 3).invert(), Err(MatrixError::NotSquare { .. })));
    }
}
