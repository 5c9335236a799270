//! Dense bit-packed linear algebra over GF(2).
//!
//! Rows are stored as packed `u64` words. Elimination always picks the first
//! nonzero column and, within it, the lowest row index, so reduced forms are
//! reproducible across runs.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// Builds a vector with ones at the given positions. Repeated positions cancel.
    ///
    /// # Panics
    /// Panics if a position is `>= len`.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn clear(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn assign(&mut self, i: usize, value: bool) {
        if value {
            self.set(i)
        } else {
            self.clear(i)
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place addition over GF(2).
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Number of positions where both vectors are one.
    pub fn overlap(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in overlap");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let acc = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        acc.count_ones() % 2 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * WORD + bit)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i);
        }
        for i in other.iter_ones() {
            out.set(self.len + i);
        }
        out
    }

    /// Copy padded with zeros (or truncated) to `len` bits.
    pub fn resized(&self, len: usize) -> BitVector {
        let mut out = BitVector::zeros(len);
        for i in self.iter_ones().take_while(|&i| i < len) {
            out.set(i);
        }
        out
    }

    /// Vector of length `len` whose bit `new_index[i]` is bit `i` of `self`.
    pub fn scatter(&self, len: usize, new_index: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(len);
        for i in self.iter_ones() {
            out.set(new_index[i]);
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A binary matrix stored row-major, one packed [`BitVector`] per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i);
        }
        m
    }

    /// Builds a matrix from per-row supports.
    ///
    /// Errors if a position is out of range. Repeated positions within a row cancel.
    pub fn from_supports<S: AsRef<[usize]>>(cols: usize, supports: &[S]) -> Result<Self> {
        let mut rows = Vec::with_capacity(supports.len());
        for (r, s) in supports.iter().enumerate() {
            let s = s.as_ref();
            if let Some(&bad) = s.iter().find(|&&c| c >= cols) {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has column {bad} but matrix has {cols} columns"
                )));
            }
            rows.push(BitVector::from_support(cols, s));
        }
        Ok(Self { cols, rows })
    }

    /// Builds a matrix from rows, all of which must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has length {} but matrix has {cols} columns",
                r.len()
            )));
        }
        Ok(Self { cols, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.rows[r].set(c)
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r].flip(c)
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn row_supports(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(BitVector::support).collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BitVector::weight).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for c in row.iter_ones() {
                w[c] += 1;
            }
        }
        w
    }

    /// Number of ones.
    pub fn total_weight(&self) -> usize {
        self.rows.iter().map(BitVector::weight).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r);
            }
        }
        t
    }

    /// Columns as vectors of length `num_rows`.
    pub fn columns(&self) -> Vec<BitVector> {
        self.transpose().rows
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(BitVector::from_bools(
            &self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>(),
        ))
    }

    /// `self · otherᵀ`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "inner dimensions {} and {}",
                self.cols, other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|a| BitVector::from_bools(&other.rows.iter().map(|b| a.dot(b)).collect::<Vec<_>>()))
            .collect();
        Ok(BitMatrix {
            cols: other.rows.len(),
            rows,
        })
    }

    /// `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.num_rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.num_rows(),
                self.cols,
                other.num_rows(),
                other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.num_rows(), other.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for k in row.iter_ones() {
                out.rows[r].xor_assign(&other.rows[k]);
            }
        }
        Ok(out)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix {
            cols: self.cols,
            rows,
        })
    }

    /// Kronecker product `self ⊗ other`, rows and columns indexed left-factor major.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let cols = self.cols * other.cols;
        let mut out = BitMatrix::zeros(self.num_rows() * other.num_rows(), cols);
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                let r = &mut out.rows[i * other.num_rows() + j];
                for p in a.iter_ones() {
                    for q in b.iter_ones() {
                        r.set(p * other.cols + q);
                    }
                }
            }
        }
        out
    }

    /// Places `block` with its top-left corner at `(row, col)`, adding into existing entries.
    pub fn add_block(&mut self, row: usize, col: usize, block: &BitMatrix) {
        for (i, b) in block.rows.iter().enumerate() {
            for c in b.iter_ones() {
                self.rows[row + i].flip(col + c);
            }
        }
    }

    /// Matrix with column `c` of `self` moved to column `new_index[c]`.
    pub fn permute_cols(&self, new_index: &[usize]) -> BitMatrix {
        assert_eq!(new_index.len(), self.cols);
        BitMatrix {
            cols: self.cols,
            rows: self
                .rows
                .iter()
                .map(|r| r.scatter(self.cols, new_index))
                .collect(),
        }
    }

    /// Matrix whose row `new_index[r]` is row `r` of `self`.
    pub fn permute_rows(&self, new_index: &[usize]) -> BitMatrix {
        assert_eq!(new_index.len(), self.rows.len());
        let mut rows = vec![BitVector::zeros(self.cols); self.rows.len()];
        for (r, row) in self.rows.iter().enumerate() {
            rows[new_index[r]] = row.clone();
        }
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }

    pub fn echelon(&self) -> RowSpace {
        RowSpace::new(self)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// A basis of `{v : self · v = 0}`, one vector per free column in ascending order.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        self.echelon().kernel_basis()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form of a matrix: a canonical basis of its row space.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    pivots: Vec<usize>,
    basis: Vec<BitVector>,
}

impl RowSpace {
    pub fn new(m: &BitMatrix) -> Self {
        let mut rows: Vec<BitVector> = m.rows.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..m.cols {
            if top == rows.len() {
                break;
            }
            let Some(p) = (top..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(top, p);
            let pivot_row = rows[top].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != top && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            top += 1;
        }
        rows.truncate(top);
        Self {
            cols: m.cols,
            pivots,
            basis: rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the row space.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut out = v.clone();
        self.reduce_in_place(&mut out);
        out
    }

    pub fn reduce_in_place(&self, v: &mut BitVector) {
        assert_eq!(v.len(), self.cols, "length mismatch in reduce");
        for (&p, row) in self.pivots.iter().zip(&self.basis) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f);
                for (&p, row) in self.pivots.iter().zip(&self.basis) {
                    if row.get(f) {
                        v.set(p);
                    }
                }
                v
            })
            .collect()
    }
}

/// True iff `a · bᵀ = 0`.
pub fn product_is_zero(a: &BitMatrix, b_transposed: &BitMatrix) -> Result<bool> {
    if a.num_cols() != b_transposed.num_cols() {
        return Err(Error::DimensionMismatch(format!(
            "inner dimensions {} and {}",
            a.num_cols(),
            b_transposed.num_cols()
        )));
    }
    Ok(a
        .rows()
        .iter()
        .all(|x| b_transposed.rows().iter().all(|z| !x.dot(z))))
}

/// True iff `a` and `b` span the same row space.
pub fn same_row_space(a: &BitMatrix, b: &BitMatrix) -> Result<bool> {
    let stacked = a.vstack(b)?;
    let r = stacked.rank();
    Ok(a.rank() == r && b.rank() == r)
}

/// True iff `v` is a GF(2) combination of rows of `m`.
pub fn in_row_space(v: &BitVector, m: &BitMatrix) -> Result<bool> {
    if v.len() != m.num_cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against {} columns",
            v.len(),
            m.num_cols()
        )));
    }
    Ok(m.echelon().contains(v))
}
