//! Dense integer matrix products behind a swappable backend.
//!
//! Only the classical products are provided: a naive `i-k-j` loop, a
//! cache-blocked loop, and a bit-packed AND/popcount product for 0/1
//! operands. Every backend returns the exact same integers.

use thiserror::Error;

use crate::cost::WorkMeter;
use crate::graph::WORD_BITS;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatmulError {
    #[error("inner dimensions disagree: {left_cols} columns times {right_rows} rows")]
    DimensionMismatch { left_cols: usize, right_rows: usize },
}

/// Row-major matrix of small non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
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
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&x| x <= 1)
    }

    pub fn max_entry(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// Pack each row into 64-bit words.
    fn pack_rows(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) != 0 {
                    out.set(r, c);
                }
            }
        }
        out
    }

    /// Pack each column into 64-bit words (i.e. pack the transpose's rows).
    fn pack_cols(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) != 0 {
                    out.set(c, r);
                }
            }
        }
        out
    }
}

/// Row-packed boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD_BITS);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.words[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.words[r * self.stride + c / WORD_BITS] |= 1 << (c % WORD_BITS);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }
}

/// Product algorithm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Backend {
    Naive,
    Blocked,
    /// AND/popcount over packed rows; exact for 0/1 operands, falls back to
    /// `Blocked` otherwise.
    #[default]
    BitPacked,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Naive, Backend::Blocked, Backend::BitPacked];
}

fn check_dims(a: &DenseMatrix, b: &DenseMatrix) -> Result<(), MatmulError> {
    if a.cols != b.rows {
        return Err(MatmulError::DimensionMismatch {
            left_cols: a.cols,
            right_rows: b.rows,
        });
    }
    Ok(())
}

/// Exact product with the default backend.
pub fn multiply(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, MatmulError> {
    multiply_with(a, b, Backend::default(), &mut WorkMeter::new())
}

pub fn multiply_with(
    a: &DenseMatrix,
    b: &DenseMatrix,
    backend: Backend,
    meter: &mut WorkMeter,
) -> Result<DenseMatrix, MatmulError> {
    check_dims(a, b)?;
    Ok(match backend {
        Backend::Naive => naive(a, b, meter),
        Backend::Blocked => blocked(a, b, meter),
        Backend::BitPacked if a.is_binary() && b.is_binary() => bit_packed(a, b, meter),
        Backend::BitPacked => blocked(a, b, meter),
    })
}

/// `(a · b > 0)` entrywise.
pub fn multiply_boolean_threshold(a: &DenseMatrix, b: &DenseMatrix) -> Result<BitMatrix, MatmulError> {
    multiply_boolean_threshold_with(a, b, Backend::default(), &mut WorkMeter::new())
}

pub fn multiply_boolean_threshold_with(
    a: &DenseMatrix,
    b: &DenseMatrix,
    backend: Backend,
    meter: &mut WorkMeter,
) -> Result<BitMatrix, MatmulError> {
    check_dims(a, b)?;
    if backend == Backend::BitPacked {
        // only positivity matters, so nonzero entries act as 1
        let ap = a.pack_rows();
        let bp = b.pack_cols();
        return Ok(packed_positive(&ap, &bp, meter));
    }
    let prod = multiply_with(a, b, backend, meter)?;
    let mut out = BitMatrix::zeros(prod.rows, prod.cols);
    for r in 0..prod.rows {
        for c in 0..prod.cols {
            if prod.get(r, c) > 0 {
                out.set(r, c);
            }
        }
    }
    Ok(out)
}

/// `out[r][c] = (a_row(r) ∧ bt_row(c)) ≠ 0`, where `bt` holds `b`'s columns.
pub(crate) fn packed_positive(a: &BitMatrix, bt: &BitMatrix, meter: &mut WorkMeter) -> BitMatrix {
    debug_assert_eq!(a.stride, bt.stride);
    let mut out = BitMatrix::zeros(a.rows, bt.rows);
    for r in 0..a.rows {
        let ar = a.row_words(r);
        for c in 0..bt.rows {
            if ar.iter().zip(bt.row_words(c)).any(|(x, y)| x & y != 0) {
                out.set(r, c);
            }
        }
    }
    meter.charge((a.rows * bt.rows * a.stride.max(1)) as u64);
    out
}

fn naive(a: &DenseMatrix, b: &DenseMatrix, meter: &mut WorkMeter) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if x == 0 {
                continue;
            }
            let brow = b.row(k);
            let orow = &mut out.data[i * b.cols..(i + 1) * b.cols];
            for (o, &y) in orow.iter_mut().zip(brow) {
                *o += x * y;
            }
        }
    }
    meter.charge((a.rows * a.cols * b.cols) as u64);
    out
}

const BLOCK: usize = 64;

fn blocked(a: &DenseMatrix, b: &DenseMatrix, meter: &mut WorkMeter) -> DenseMatrix {
    let (r, s, c) = (a.rows, a.cols, b.cols);
    let mut out = DenseMatrix::zeros(r, c);
    for i0 in (0..r).step_by(BLOCK) {
        let i1 = (i0 + BLOCK).min(r);
        for k0 in (0..s).step_by(BLOCK) {
            let k1 = (k0 + BLOCK).min(s);
            for j0 in (0..c).step_by(BLOCK * 4) {
                let j1 = (j0 + BLOCK * 4).min(c);
                for i in i0..i1 {
                    for k in k0..k1 {
                        let x = a.data[i * s + k];
                        if x == 0 {
                            continue;
                        }
                        let brow = &b.data[k * c + j0..k * c + j1];
                        let orow = &mut out.data[i * c + j0..i * c + j1];
                        for (o, &y) in orow.iter_mut().zip(brow) {
                            *o += x * y;
                        }
                    }
                }
            }
        }
    }
    meter.charge((r * s * c) as u64);
    out
}

fn bit_packed(a: &DenseMatrix, b: &DenseMatrix, meter: &mut WorkMeter) -> DenseMatrix {
    let ap = a.pack_rows();
    let bt = b.pack_cols();
    let mut out = DenseMatrix::zeros(a.rows, b.cols);
    for r in 0..a.rows {
        let ar = ap.row_words(r);
        for c in 0..b.cols {
            let count: u32 = ar.iter().zip(bt.row_words(c)).map(|(x, y)| (x & y).count_ones()).sum();
            out.set(r, c, count);
        }
    }
    meter.charge((a.rows * b.cols * ap.stride.max(1)) as u64);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_binary(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, rng.gen_range(0..=1));
            }
        }
        m
    }

    /// Textbook triple loop, independent of every backend above.
    fn reference(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = 0;
                for k in 0..a.cols() {
                    acc += a.get(i, k) * b.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_binary(&mut rng, 5, 9);
        for backend in Backend::ALL {
            let got = multiply_with(&DenseMatrix::identity(5), &b, backend, &mut WorkMeter::new()).unwrap();
            assert_eq!(got, b, "{backend:?}");
        }
    }

    #[test]
    fn characteristic_vectors_count_intersections() {
        let p = DenseMatrix::from_rows(&[vec![1, 1, 0, 1, 0, 1]]);
        let s = DenseMatrix::from_rows(&[vec![1], vec![0], vec![1], vec![1], vec![1], vec![1]]);
        for backend in Backend::ALL {
            let got = multiply_with(&p, &s, backend, &mut WorkMeter::new()).unwrap();
            assert_eq!(got.get(0, 0), 3);
        }
        assert!(multiply_boolean_threshold(&p, &s).unwrap().get(0, 0));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = DenseMatrix::zeros(2, 3);
        let b = DenseMatrix::zeros(4, 2);
        assert_eq!(
            multiply(&a, &b),
            Err(MatmulError::DimensionMismatch {
                left_cols: 3,
                right_rows: 4
            })
        );
        assert!(multiply_boolean_threshold(&a, &b).is_err());
    }

    #[test]
    fn non_binary_operands_use_exact_fallback() {
        let a = DenseMatrix::from_rows(&[vec![2, 3], vec![0, 7]]);
        let b = DenseMatrix::from_rows(&[vec![1, 4], vec![5, 0]]);
        for backend in Backend::ALL {
            let got = multiply_with(&a, &b, backend, &mut WorkMeter::new()).unwrap();
            assert_eq!(got, reference(&a, &b));
        }
    }

    #[test]
    fn backends_agree_with_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let (r, s, c) = (rng.gen_range(1..=64), rng.gen_range(1..=64), rng.gen_range(1..=200));
            let a = random_binary(&mut rng, r, s);
            let b = random_binary(&mut rng, s, c);
            let want = reference(&a, &b);
            for backend in Backend::ALL {
                let mut meter = WorkMeter::new();
                assert_eq!(multiply_with(&a, &b, backend, &mut meter).unwrap(), want);
                assert!(meter.units() > 0);
                let th = multiply_boolean_threshold_with(&a, &b, backend, &mut WorkMeter::new()).unwrap();
                for i in 0..r {
                    for j in 0..c {
                        assert_eq!(th.get(i, j), want.get(i, j) > 0);
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_spot_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let a = random_binary(&mut rng, 7, 5);
            let b = random_binary(&mut rng, 5, 6);
            let c = random_binary(&mut rng, 6, 4);
            let left = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
            let right = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}
