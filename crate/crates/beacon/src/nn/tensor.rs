//! Dense row-major tensors and the matrix kernels every layer is built on.
//!
//! Everything is generic over [`Scalar`] so the layers can run in `f32` for
//! training and in `f64` for finite-difference gradient checks. The GEMM
//! kernel keeps a 4x16 accumulator block in registers; on a single core with
//! autovectorization this is what makes CNN training on 8k-length inputs
//! tractable.

use crate::error::{Error, Result};

/// Floating-point element type for tensors. Implemented for `f32` and `f64`.
pub trait Scalar:
    Copy
    + PartialOrd
    + std::fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
    + std::ops::AddAssign
    + std::ops::SubAssign
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    const ONE: Self;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn tanh(self) -> Self;
    fn abs(self) -> Self;
    fn is_finite(self) -> bool;

    fn max(self, other: Self) -> Self {
        if self > other {
            self
        } else {
            other
        }
    }
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const ZERO: Self = 0.0;
            const ONE: Self = 1.0;

            fn from_f64(v: f64) -> Self {
                v as $t
            }
            fn to_f64(self) -> f64 {
                self as f64
            }
            fn exp(self) -> Self {
                self.exp()
            }
            fn ln(self) -> Self {
                self.ln()
            }
            fn sqrt(self) -> Self {
                self.sqrt()
            }
            fn tanh(self) -> Self {
                self.tanh()
            }
            fn abs(self) -> Self {
                self.abs()
            }
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);

/// Dense row-major tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    shape: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(shape: &[usize]) -> Self {
        let len = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![T::ZERO; len],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<T>) -> Result<Self> {
        let expect: usize = shape.iter().product();
        if expect != data.len() {
            return Err(Error::Shape(format!(
                "shape {:?} wants {} elements, got {}",
                shape,
                expect,
                data.len()
            )));
        }
        Ok(Tensor {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    /// Reinterprets the tensor with a new shape of the same element count.
    pub fn reshape(mut self, shape: &[usize]) -> Result<Self> {
        let expect: usize = shape.iter().product();
        if expect != self.data.len() {
            return Err(Error::Shape(format!(
                "cannot reshape {:?} into {:?}",
                self.shape, shape
            )));
        }
        self.shape = shape.to_vec();
        Ok(self)
    }

    pub fn fill(&mut self, v: T) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    pub fn assert_finite(&self, what: &str) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Numerical(format!("non-finite value in {what}")))
        }
    }

    pub fn map_to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|v| v.to_f64()).collect()
    }
}

const MR: usize = 4;
const NR: usize = 32;
const KB: usize = 256;

/// `c[m x n] += a[m x k] * b[k x n]`, all row-major.
///
/// k is processed in cache-sized blocks; within a block a 4x32 register tile
/// of C is held across the whole reduction. Tails fall back to a scalar loop.
pub fn gemm<T: Scalar>(m: usize, k: usize, n: usize, a: &[T], b: &[T], c: &mut [T]) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(c.len(), m * n);
    if m == 0 || k == 0 || n == 0 {
        return;
    }

    let m_main = m - m % MR;
    let n_main = n - n % NR;

    let mut k0 = 0;
    while k0 < k {
        let kb = KB.min(k - k0);
        let mut i = 0;
        while i < m_main {
            let mut j = 0;
            while j < n_main {
                kernel_block(kb, &a[i * k + k0..], k, &b[k0 * n + j..], n, &mut c[i * n + j..], n);
                j += NR;
            }
            if j < n {
                gemm_scalar(&a[i * k + k0..], &b[k0 * n..], &mut c[i * n..], MR, kb, k, n, j, n);
            }
            i += MR;
        }
        if i < m {
            gemm_scalar(&a[i * k + k0..], &b[k0 * n..], &mut c[i * n..], m - i, kb, k, n, 0, n);
        }
        k0 += kb;
    }
}

/// One 4x32 block of C held in registers across a k block.
#[inline(always)]
fn kernel_block<T: Scalar>(kb: usize, a: &[T], lda: usize, b: &[T], ldb: usize, c: &mut [T], ldc: usize) {
    let mut acc = [[T::ZERO; NR]; MR];
    for kk in 0..kb {
        let bv = &b[kk * ldb..kk * ldb + NR];
        for (r, accr) in acc.iter_mut().enumerate() {
            let ar = a[r * lda + kk];
            for j in 0..NR {
                accr[j] = accr[j] + ar * bv[j];
            }
        }
    }
    for (r, accr) in acc.iter().enumerate() {
        let crow = &mut c[r * ldc..r * ldc + NR];
        for j in 0..NR {
            crow[j] = crow[j] + accr[j];
        }
    }
}

/// Scalar fallback covering rows `0..rows` and columns `j0..n` of the C block.
#[allow(clippy::too_many_arguments)]
fn gemm_scalar<T: Scalar>(
    a: &[T],
    b: &[T],
    c: &mut [T],
    rows: usize,
    kb: usize,
    lda: usize,
    n: usize,
    j0: usize,
    ldc: usize,
) {
    for r in 0..rows {
        for kk in 0..kb {
            let ar = a[r * lda + kk];
            let brow = &b[kk * n..kk * n + n];
            let crow = &mut c[r * ldc..r * ldc + n];
            for j in j0..n {
                crow[j] = crow[j] + ar * brow[j];
            }
        }
    }
}

/// `dst[n x m] = src[m x n]` transposed.
pub fn transpose<T: Scalar>(m: usize, n: usize, src: &[T], dst: &mut [T]) {
    debug_assert_eq!(src.len(), m * n);
    debug_assert_eq!(dst.len(), m * n);
    for i in 0..m {
        for j in 0..n {
            dst[j * m + i] = src[i * n + j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gemm_naive(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
        for i in 0..m {
            for j in 0..n {
                let mut s = 0.0;
                for kk in 0..k {
                    s += a[i * k + kk] * b[kk * n + j];
                }
                c[i * n + j] += s;
            }
        }
    }

    #[test]
    fn gemm_matches_naive_on_odd_shapes() {
        let mut rng = 0x243f6a88u64;
        let mut next = move || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        for &(m, k, n) in &[(1, 1, 1), (3, 5, 7), (4, 16, 16), (5, 9, 17), (13, 31, 33), (8, 20, 48)] {
            let a: Vec<f64> = (0..m * k).map(|_| next()).collect();
            let b: Vec<f64> = (0..k * n).map(|_| next()).collect();
            let mut c1 = vec![0.25; m * n];
            let mut c2 = vec![0.25; m * n];
            gemm(m, k, n, &a, &b, &mut c1);
            gemm_naive(m, k, n, &a, &b, &mut c2);
            for (x, y) in c1.iter().zip(&c2) {
                assert!((x - y).abs() < 1e-12, "({m},{k},{n}): {x} vs {y}");
            }
        }
    }

    #[test]
    fn transpose_round_trips() {
        let src: Vec<f32> = (0..15).map(|v| v as f32).collect();
        let mut t = vec![0.0f32; 15];
        let mut back = vec![0.0f32; 15];
        transpose(3, 5, &src, &mut t);
        transpose(5, 3, &t, &mut back);
        assert_eq!(src, back);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1], 5.0); // src[1][0]
    }

    #[test]
    fn tensor_shape_checks() {
        assert!(Tensor::<f32>::from_vec(&[2, 3], vec![0.0; 6]).is_ok());
        assert!(Tensor::<f32>::from_vec(&[2, 3], vec![0.0; 5]).is_err());
        let t = Tensor::<f32>::zeros(&[4, 2]);
        assert!(t.clone().reshape(&[8]).is_ok());
        assert!(t.reshape(&[3, 3]).is_err());
    }

    #[test]
    #[ignore = "throughput probe, run manually with --nocapture"]
    fn gemm_throughput() {
        for &(m, k, n) in &[
            (64usize, 160usize, 1152usize),
            (128, 320, 576),
            (64, 36864, 512),
            (36864, 512, 64),
            (36864, 64, 512),
        ] {
            let a = vec![1.0f32; m * k];
            let b = vec![1.0f32; k * n];
            let mut c = vec![0.0f32; m * n];
            let reps = (2e9 / (2.0 * (m * k * n) as f64)).ceil() as usize;
            let t0 = std::time::Instant::now();
            for _ in 0..reps {
                gemm(m, k, n, &a, &b, &mut c);
            }
            let dt = t0.elapsed().as_secs_f64();
            let gflops = 2.0 * (m * k * n) as f64 * reps as f64 / dt / 1e9;
            println!("gemm f32 {m}x{k}x{n}: {gflops:.2} GFLOP/s ({reps} reps in {dt:.2}s)");
        }
    }
}
