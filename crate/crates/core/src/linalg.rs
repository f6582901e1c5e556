//! Vectors and matrices over [`SparsePoly`], and invertible matrices kept in
//! factored form so that their inverses are exact and cheap.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{sum_of_products, Accumulator, RingParams, SparsePoly};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVector {
    ring: RingParams,
    entries: Vec<SparsePoly>,
}

impl PolyVector {
    pub fn new(ring: RingParams, entries: Vec<SparsePoly>) -> Result<Self> {
        for e in &entries {
            ring.check_same(&e.ring())?;
        }
        Ok(PolyVector { ring, entries })
    }

    pub fn zeros(ring: RingParams, len: usize) -> Self {
        PolyVector {
            ring,
            entries: vec![SparsePoly::zero(ring); len],
        }
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SparsePoly] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<SparsePoly> {
        self.entries
    }

    pub fn get(&self, i: usize) -> &SparsePoly {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SparsePoly::is_zero)
    }

    pub fn add(&self, other: &PolyVector) -> Result<PolyVector> {
        if self.len() != other.len() {
            return Err(Error::dim(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(PolyVector {
            ring: self.ring,
            entries,
        })
    }

    pub fn scale(&self, c: i64) -> PolyVector {
        PolyVector {
            ring: self.ring,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn mul_matrix(&self, m: &PolyMatrix) -> Result<PolyVector> {
        self.ring.check_same(&m.ring)?;
        if self.len() != m.rows {
            return Err(Error::dim(format!(
                "row vector of length {} times {}x{} matrix",
                self.len(),
                m.rows,
                m.cols
            )));
        }
        let entries = (0..m.cols)
            .map(|c| {
                let pairs: Vec<_> = self
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(r, u)| (u, m.get(r, c)))
                    .collect();
                sum_of_products(self.ring, &pairs)
            })
            .collect();
        Ok(PolyVector {
            ring: self.ring,
            entries,
        })
    }

    pub fn evaluate(&self, point: &[u64]) -> Result<Vec<u64>> {
        self.entries.iter().map(|e| e.evaluate(point)).collect()
    }
}

/// Row-major rectangular matrix of polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: RingParams,
    rows: usize,
    cols: usize,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn from_rows(ring: RingParams, rows: Vec<Vec<SparsePoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::dim("matrix must have at least one row and column"));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        let entries: Vec<SparsePoly> = rows.into_iter().flatten().collect();
        for e in &entries {
            ring.check_same(&e.ring())?;
        }
        Ok(PolyMatrix {
            ring,
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn zeros(ring: RingParams, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring,
            rows,
            cols,
            entries: vec![SparsePoly::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: RingParams, dim: usize) -> Self {
        let mut m = Self::zeros(ring, dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = SparsePoly::one(ring);
        }
        m
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based access.
    pub fn get(&self, r: usize, c: usize) -> &SparsePoly {
        &self.entries[r * self.cols + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut SparsePoly {
        &mut self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[SparsePoly] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[SparsePoly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let e = self.get(r, c);
                    if r == c {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().filter_map(SparsePoly::degree).max().unwrap_or(0)
    }

    pub fn total_terms(&self) -> usize {
        self.entries.iter().map(SparsePoly::sparsity).sum()
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.ring.check_same(&other.ring)?;
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let pairs: Vec<_> = (0..self.cols)
                    .map(|t| (self.get(r, t), other.get(t, c)))
                    .collect();
                entries.push(sum_of_products(self.ring, &pairs));
            }
        }
        Ok(PolyMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Right-multiplication by `E_ij(u)` in place: column `j` += `u` * column `i`.
    fn add_column_multiple(&mut self, i: usize, j: usize, u: &SparsePoly) {
        if u.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let src = self.get(r, i);
            if src.is_zero() {
                continue;
            }
            let mut acc = Accumulator::new(self.ring);
            acc.add_poly(self.get(r, j), 1);
            acc.add_product(src, u, 1);
            *self.get_mut(r, j) = acc.finish();
        }
    }

    /// Right-multiplication by the permutation matrix of `perm` (1-based):
    /// column `i` moves to column `perm[i]`.
    fn permute_columns(&mut self, perm: &Permutation) {
        let mut out = self.entries.clone();
        for r in 0..self.rows {
            for (i, &target) in perm.0.iter().enumerate() {
                out[r * self.cols + target - 1] = self.entries[r * self.cols + i].clone();
            }
        }
        self.entries = out;
    }

    pub fn without_columns(&self, removed: &[usize]) -> PolyMatrix {
        let keep: Vec<usize> = (0..self.cols).filter(|c| !removed.contains(&(c + 1))).collect();
        let mut entries = Vec::with_capacity(self.rows * keep.len());
        for r in 0..self.rows {
            for &c in &keep {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: keep.len(),
            entries,
        }
    }

    pub fn without_rows(&self, removed: &[usize]) -> PolyMatrix {
        let entries: Vec<SparsePoly> = (0..self.rows)
            .filter(|r| !removed.contains(&(r + 1)))
            .flat_map(|r| self.row(r).iter().cloned())
            .collect();
        PolyMatrix {
            ring: self.ring,
            rows: self.rows - removed.len(),
            cols: self.cols,
            entries,
        }
    }

    pub fn evaluate(&self, point: &[u64]) -> Result<ZqMatrix> {
        let data = self
            .entries
            .iter()
            .map(|e| e.evaluate(point))
            .collect::<Result<_>>()?;
        Ok(ZqMatrix {
            q: self.ring.q,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over Z_{}", self.rows, self.cols, self.ring.q)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Entry-wise evaluation of a polynomial matrix at a point.
pub fn mat_eval(a: &PolyMatrix, point: &[u64]) -> Result<ZqMatrix> {
    a.evaluate(point)
}

/// `E_ij(u)`: identity with `u` at position `(i, j)`, 1-based, `i != j`.
pub fn elementary_matrix(dim: usize, i: usize, j: usize, u: &SparsePoly) -> Result<PolyMatrix> {
    if i == j {
        return Err(Error::domain("elementary matrix needs i != j"));
    }
    if i == 0 || j == 0 || i > dim || j > dim {
        return Err(Error::domain(format!("position ({i},{j}) outside {dim}x{dim}")));
    }
    let mut m = PolyMatrix::identity(u.ring(), dim);
    *m.get_mut(i - 1, j - 1) = u.clone();
    Ok(m)
}

/// Dense matrix over `Z_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZqMatrix {
    pub q: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl ZqMatrix {
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn mul(&self, other: &ZqMatrix) -> Result<ZqMatrix> {
        if self.cols != other.rows || self.q != other.q {
            return Err(Error::dim("incompatible Z_q matrices"));
        }
        let mut data = vec![0u64; self.rows * other.cols];
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut s = 0u64;
                for t in 0..self.cols {
                    s = (s + self.get(r, t) * other.get(t, c)) % self.q;
                }
                data[r * other.cols + c] = s;
            }
        }
        Ok(ZqMatrix {
            q: self.q,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.rows {
            return Err(Error::dim("vector length does not match matrix rows"));
        }
        Ok((0..self.cols)
            .map(|c| {
                v.iter()
                    .enumerate()
                    .fold(0, |s, (r, x)| (s + x * self.get(r, c)) % self.q)
            })
            .collect())
    }
}

/// A permutation of `1..=k` stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation((1..=k).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i == 0 || i > k || seen[i - 1] {
                return Err(Error::domain(format!("{images:?} is not a permutation of 1..{k}")));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &t) in self.0.iter().enumerate() {
            inv[t - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// The 0/1 matrix with a 1 at `(i, perm[i])`.
    pub fn to_matrix(&self, ring: RingParams) -> PolyMatrix {
        let k = self.0.len();
        let mut m = PolyMatrix::zeros(ring, k, k);
        for (i, &t) in self.0.iter().enumerate() {
            *m.get_mut(i, t - 1) = SparsePoly::one(ring);
        }
        m
    }
}

/// `E_ij(u)` as a factor: 1-based position and entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryFactor {
    pub row: usize,
    pub col: usize,
    pub entry: SparsePoly,
}

/// An invertible `k x k` matrix held as `U * P1 * K * P2` with `U` a product
/// of upper elementary factors and `K` a product of lower ones, each in list
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInvertible {
    ring: RingParams,
    dim: usize,
    upper: Vec<ElementaryFactor>,
    p1: Permutation,
    lower: Vec<ElementaryFactor>,
    p2: Permutation,
}

impl FactoredInvertible {
    pub fn new(
        ring: RingParams,
        dim: usize,
        upper: Vec<ElementaryFactor>,
        p1: Permutation,
        lower: Vec<ElementaryFactor>,
        p2: Permutation,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        if p1.len() != dim || p2.len() != dim {
            return Err(Error::dim("permutation size differs from matrix dimension"));
        }
        for f in &upper {
            if !(1 <= f.row && f.row < f.col && f.col <= dim) {
                return Err(Error::domain(format!(
                    "upper factor at ({},{}) not strictly above the diagonal",
                    f.row, f.col
                )));
            }
            ring.check_same(&f.entry.ring())?;
        }
        for f in &lower {
            if !(1 <= f.col && f.col < f.row && f.row <= dim) {
                return Err(Error::domain(format!(
                    "lower factor at ({},{}) not strictly below the diagonal",
                    f.row, f.col
                )));
            }
            ring.check_same(&f.entry.ring())?;
        }
        Ok(FactoredInvertible {
            ring,
            dim,
            upper,
            p1,
            lower,
            p2,
        })
    }

    pub fn identity(ring: RingParams, dim: usize) -> Self {
        FactoredInvertible {
            ring,
            dim,
            upper: Vec::new(),
            p1: Permutation::identity(dim),
            lower: Vec::new(),
            p2: Permutation::identity(dim),
        }
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn upper(&self) -> &[ElementaryFactor] {
        &self.upper
    }

    pub fn lower(&self) -> &[ElementaryFactor] {
        &self.lower
    }

    pub fn p1(&self) -> &Permutation {
        &self.p1
    }

    pub fn p2(&self) -> &Permutation {
        &self.p2
    }

    /// `S = U * P1 * K * P2`.
    pub fn assemble(&self) -> PolyMatrix {
        let mut s = PolyMatrix::identity(self.ring, self.dim);
        for f in &self.upper {
            s.add_column_multiple(f.row - 1, f.col - 1, &f.entry);
        }
        s.permute_columns(&self.p1);
        for f in &self.lower {
            s.add_column_multiple(f.row - 1, f.col - 1, &f.entry);
        }
        s.permute_columns(&self.p2);
        s
    }

    /// `S^-1 = P2^-1 * K^-1 * P1^-1 * U^-1`, each unitriangular inverse being
    /// the reversed product of `E_ij(-u)`.
    pub fn assemble_inverse(&self) -> PolyMatrix {
        let mut s = PolyMatrix::identity(self.ring, self.dim);
        s.permute_columns(&self.p2.inverse());
        for f in self.lower.iter().rev() {
            s.add_column_multiple(f.row - 1, f.col - 1, &f.entry.neg());
        }
        s.permute_columns(&self.p1.inverse());
        for f in self.upper.iter().rev() {
            s.add_column_multiple(f.row - 1, f.col - 1, &f.entry.neg());
        }
        s
    }
}

/// Deletes columns `removed` (1-based) from `s` and the matching rows from
/// `s_inv`, giving `(M, L)` with `L * M = I`.
pub fn puncture(
    s: &PolyMatrix,
    s_inv: &PolyMatrix,
    removed: &[usize],
) -> Result<(PolyMatrix, PolyMatrix)> {
    let k = s.rows();
    if s.cols() != k || s_inv.rows() != k || s_inv.cols() != k {
        return Err(Error::dim("puncture needs two square matrices of equal size"));
    }
    s.ring.check_same(&s_inv.ring)?;
    let mut seen = vec![false; k];
    for &c in removed {
        if c == 0 || c > k {
            return Err(Error::domain(format!("column {c} outside 1..{k}")));
        }
        if seen[c - 1] {
            return Err(Error::domain(format!("column {c} listed twice")));
        }
        seen[c - 1] = true;
    }
    if removed.len() >= k {
        return Err(Error::domain("puncturing must keep at least one column"));
    }
    Ok((s.without_columns(removed), s_inv.without_rows(removed)))
}
