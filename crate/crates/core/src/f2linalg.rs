//! Dense linear algebra over F₂ and over ℤ/2ʳℤ.
//!
//! Rows are packed into 64-bit words and reduced with word-wise XOR, so
//! Gaussian elimination costs O(n³/64). Pivoting is deterministic: the lowest
//! row and column index wins every tie, which keeps bases reproducible.

use crate::error::{GseError, Result};
use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over F₂.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector::zeros(len);
        for w in v.words.iter_mut() {
            *w = !0;
        }
        v.clear_tail();
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVector::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVector::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Builds a vector from raw words; bits past `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVector { words, len };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    #[inline]
    pub fn and_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    #[inline]
    pub fn or_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// `self & !other`.
    #[inline]
    pub fn and_not_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        let mut v = self.clone();
        v.and_assign(other);
        v
    }

    pub fn or(&self, other: &BitVector) -> BitVector {
        let mut v = self.clone();
        v.or_assign(other);
        v
    }

    pub fn and_not(&self, other: &BitVector) -> BitVector {
        let mut v = self.clone();
        v.and_not_assign(other);
        v
    }

    pub fn complement(&self) -> BitVector {
        let mut v = self.clone();
        for w in v.words.iter_mut() {
            *w = !*w;
        }
        v.clear_tail();
        v
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of common set bits.
    #[inline]
    pub fn and_count(&self, other: &BitVector) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Inner product over F₂.
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    #[inline]
    pub fn intersects(&self, other: &BitVector) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// True when every set bit of `self` is set in `other`.
    #[inline]
    pub fn is_subset_of(&self, other: &BitVector) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Lowest set bit at index ≥ `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from / WORD;
        let mut w = self.words[wi] & (!0u64 << (from % WORD));
        loop {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    pub fn iter_ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            wi: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Copy with a different length; truncates or zero-extends.
    pub fn resized(&self, len: usize) -> BitVector {
        BitVector::from_words(len, self.words.clone())
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut v = self.resized(self.len + other.len);
        for i in other.iter_ones() {
            v.set(self.len + i, true);
        }
        v
    }

    /// Bits `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        let mut v = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                v.set(i, true);
            }
        }
        v
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

/// Iterator over the set bits of a [`BitVector`], ascending.
pub struct Ones<'a> {
    words: &'a [u64],
    wi: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.wi * WORD + t);
            }
            self.wi += 1;
            if self.wi >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.wi];
        }
    }
}

/// A dense matrix over F₂ stored as packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    ncols: usize,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVector::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != ncols {
                return Err(GseError::DimensionMismatch {
                    expected: ncols,
                    got: r.len(),
                });
            }
        }
        Ok(BitMatrix { rows, ncols })
    }

    /// Builds a matrix from 0/1 literals, mostly for tests.
    pub fn from_bits(rows: &[&[u8]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged matrix literal");
                BitVector::from_indices(
                    ncols,
                    r.iter()
                        .enumerate()
                        .filter(|(_, b)| **b != 0)
                        .map(|(i, _)| i),
                )
            })
            .collect();
        BitMatrix { rows, ncols }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.ncols {
            return Err(GseError::DimensionMismatch {
                expected: self.ncols,
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.ncols {
            return Err(GseError::DimensionMismatch {
                expected: self.ncols,
                got: x.len(),
            });
        }
        Ok(BitVector::from_indices(
            self.nrows(),
            (0..self.nrows()).filter(|&i| self.rows[i].dot(x)),
        ))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }
}

/// Row rank over F₂.
pub fn rank(m: &BitMatrix) -> usize {
    let mut e = Echelon::new(m.ncols());
    for r in m.rows() {
        e.insert(r.clone());
    }
    e.rank()
}

/// Basis of `{x : Mx = 0}`, one vector per free column in ascending order.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let mut e = Echelon::new(m.ncols());
    for r in m.rows() {
        e.insert(r.clone());
    }
    e.kernel_basis()
}

/// Affine solution set of `Mx = b`: a particular solution and a kernel basis,
/// or `None` when the system is inconsistent.
pub fn solve_affine(m: &BitMatrix, b: &BitVector) -> Result<Option<(BitVector, Vec<BitVector>)>> {
    if b.len() != m.nrows() {
        return Err(GseError::DimensionMismatch {
            expected: m.nrows(),
            got: b.len(),
        });
    }
    let mut sys = AffineSystem::new(m.ncols());
    for (i, r) in m.rows().iter().enumerate() {
        if !sys.add_equation(r, b.get(i)) {
            return Ok(None);
        }
    }
    Ok(Some(sys.solution()))
}

/// Incrementally maintained reduced row echelon form.
///
/// Every stored row has a distinct pivot column (its lowest set bit) and is
/// zero at the pivot columns of all other stored rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
    /// `pivot_row[c]` is the index into `rows` whose pivot is `c`.
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `v` against the stored rows in place.
    pub fn reduce(&self, v: &mut BitVector) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
    }

    /// True when `v` lies in the row span.
    pub fn contains(&self, v: &BitVector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Inserts a row; returns its new pivot when it raised the rank.
    pub fn insert(&mut self, mut v: BitVector) -> Option<usize> {
        debug_assert_eq!(v.len(), self.ncols);
        self.reduce(&mut v);
        let p = v.first_one()?;
        for row in self.rows.iter_mut() {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(p);
        Some(p)
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let mut basis = Vec::new();
        for f in 0..self.ncols {
            if self.pivot_row[f].is_some() {
                continue;
            }
            let mut x = BitVector::zeros(self.ncols);
            x.set(f, true);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if row.get(f) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        basis
    }
}

/// An F₂ system `Ax = b` built one equation at a time.
///
/// The right-hand side rides along as an extra column so that inconsistency is
/// detected at insertion.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    nvars: usize,
    echelon: Echelon,
}

impl AffineSystem {
    pub fn new(nvars: usize) -> Self {
        AffineSystem {
            nvars,
            echelon: Echelon::new(nvars + 1),
        }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Adds `row · x = rhs`; returns false when the system became inconsistent.
    pub fn add_equation(&mut self, row: &BitVector, rhs: bool) -> bool {
        debug_assert_eq!(row.len(), self.nvars);
        let mut v = row.resized(self.nvars + 1);
        if rhs {
            v.set(self.nvars, true);
        }
        self.add_augmented(v)
    }

    /// Adds an equation from variable indices.
    pub fn add_sparse(&mut self, vars: &[usize], rhs: bool) -> bool {
        let mut v = BitVector::zeros(self.nvars + 1);
        for &i in vars {
            v.flip(i);
        }
        if rhs {
            v.flip(self.nvars);
        }
        self.add_augmented(v)
    }

    fn add_augmented(&mut self, v: BitVector) -> bool {
        match self.echelon.insert(v) {
            Some(p) => p != self.nvars,
            None => true,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.echelon.pivot_row[self.nvars].is_none()
    }

    /// Particular solution (free variables zero) and kernel basis.
    pub fn solution(&self) -> (BitVector, Vec<BitVector>) {
        let n = self.nvars;
        let mut particular = BitVector::zeros(n);
        for (row, &p) in self.echelon.rows.iter().zip(&self.echelon.pivots) {
            if p < n && row.get(n) {
                particular.set(p, true);
            }
        }
        let mut basis = Vec::new();
        for f in 0..n {
            if self.echelon.pivot_row[f].is_some() {
                continue;
            }
            let mut x = BitVector::zeros(n);
            x.set(f, true);
            for (row, &p) in self.echelon.rows.iter().zip(&self.echelon.pivots) {
                if p < n && row.get(f) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        (particular, basis)
    }
}

/// A dense matrix over ℤ/2ʳℤ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mod2rMatrix {
    r: u32,
    ncols: usize,
    entries: Vec<Vec<u64>>,
}

impl Mod2rMatrix {
    pub fn zeros(nrows: usize, ncols: usize, r: u32) -> Self {
        assert!((1..=62).contains(&r), "modulus exponent {r} out of range");
        Mod2rMatrix {
            r,
            ncols,
            entries: vec![vec![0; ncols]; nrows],
        }
    }

    /// Builds a matrix from rows, reducing every entry mod 2ʳ.
    pub fn from_rows(r: u32, ncols: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        let mut m = Mod2rMatrix::zeros(0, ncols, r);
        for row in rows {
            m.push_row(row)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, mut row: Vec<u64>) -> Result<()> {
        if row.len() != self.ncols {
            return Err(GseError::DimensionMismatch {
                expected: self.ncols,
                got: row.len(),
            });
        }
        let mask = self.mask();
        for x in row.iter_mut() {
            *x &= mask;
        }
        self.entries.push(row);
        Ok(())
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        1u64 << self.r
    }

    #[inline]
    fn mask(&self) -> u64 {
        self.modulus() - 1
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        let m = self.mask();
        self.entries[i][j] = value & m;
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    /// `Mx mod 2ʳ`.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        let m = self.mask();
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| acc.wrapping_add(a.wrapping_mul(b)))
                    & m
            })
            .collect()
    }
}

/// Multiplicative inverse of an odd `u` modulo 2⁶⁴ (Newton iteration).
fn inverse_odd(u: u64) -> u64 {
    debug_assert!(u & 1 == 1);
    let mut x = u;
    for _ in 0..6 {
        x = x.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(x)));
    }
    x
}

/// Generating set of `{x mod 2ʳ : Mx ≡ 0}`.
///
/// The matrix is brought to diagonal form `PMQ = diag(2^{e_i})` by unimodular
/// row and column operations, pivoting on the entry of least 2-adic valuation
/// (lowest row, then column, on ties). The kernel is then generated by
/// `2^{r−e_i}·Q e_i` for each pivot with `e_i > 0` and by `Q e_j` for every
/// non-pivot column. When the kernel is trivial the zero vector is returned as
/// its only generator.
pub fn solve_mod2r(m: &Mod2rMatrix, r: u32) -> Result<Vec<Vec<u64>>> {
    if r == 0 || r != m.r() {
        return Err(GseError::Precondition(format!(
            "modulus exponent {r} does not match matrix exponent {}",
            m.r()
        )));
    }
    let n = m.ncols();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mask = m.mask();
    let mut a: Vec<Vec<u64>> = m.rows().to_vec();
    // Columns of Q, stored as vectors.
    let mut q: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let mut c = vec![0; n];
            c[j] = 1;
            c
        })
        .collect();
    let rows = a.len();
    let mut valuations = Vec::new();
    let mut t = 0;
    while t < rows.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = x.trailing_zeros();
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((e, pi, pj)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            q.swap(t, pj);
        }
        let unit_inv = inverse_odd(a[t][t] >> e);
        for x in a[t].iter_mut() {
            *x = x.wrapping_mul(unit_inv) & mask;
        }
        debug_assert_eq!(a[t][t], 1u64 << e);
        let pivot_row = a[t].clone();
        for row in a.iter_mut().skip(t + 1) {
            let c = row[t] >> e;
            if c != 0 {
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.wrapping_sub(c.wrapping_mul(p)) & mask;
                }
            }
        }
        for j in t + 1..n {
            let c = a[t][j] >> e;
            if c != 0 {
                a[t][j] = 0;
                let qt = q[t].clone();
                for (x, &p) in q[j].iter_mut().zip(&qt) {
                    *x = x.wrapping_sub(c.wrapping_mul(p)) & mask;
                }
            }
        }
        valuations.push(e);
        t += 1;
    }
    let mut gens = Vec::new();
    for (i, &e) in valuations.iter().enumerate() {
        if e > 0 {
            let s = 1u64 << (r - e);
            gens.push(q[i].iter().map(|&x| x.wrapping_mul(s) & mask).collect());
        }
    }
    for col in q.iter().skip(valuations.len()) {
        gens.push(col.clone());
    }
    if gens.is_empty() {
        gens.push(vec![0; n]);
    }
    Ok(gens)
}
