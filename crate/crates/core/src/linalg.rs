//! Complex Hermitian linear algebra: dense matrices, eigendecomposition by
//! cyclic Jacobi sweeps, spectral functional calculus, the Loewner order and
//! vector-state expectations.
//!
//! Everything is dense and double precision. The eigensolver is
//! self-contained: a cyclic Jacobi iteration with complex plane rotations,
//! capped at 100 sweeps, declared converged once the off-diagonal Frobenius
//! norm falls below `1e-12 * ||A||_F`. That is exact enough for the desk
//! dimensions (n <= 64) this crate targets, and it is bit-deterministic for
//! identical input: fixed sweep order, fixed tie-breaking.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::Error;
use crate::rng;
use crate::Result;

/// Per-entry absolute tolerance for the Hermitian symmetry invariant.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative off-diagonal threshold at which the Jacobi iteration stops.
pub const JACOBI_REL_TOL: f64 = 1e-12;

/// Sweep cap for the Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix::from_rows(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix::from_rows(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: Complex64) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix::from_rows(self.rows, self.cols, data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `A v` for a column vector given as a slice.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Max |deviation| of `A* A` from the identity.
    pub fn isometry_defect(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        let mut worst: f64 = 0.0;
        for i in 0..gram.rows {
            for j in 0..gram.cols {
                let expect = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max((gram.get(i, j) - expect).norm());
            }
        }
        worst
    }
}

/// Eigendecomposition of a Hermitian operator: ascending real eigenvalues
/// and a unitary whose k-th column is the k-th eigenvector.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// A selfadjoint operator on a finite-dimensional complex Hilbert space,
/// stored as a validated Hermitian matrix with a lazily cached
/// eigendecomposition.
///
/// Values are immutable after construction; the cache is an idempotent
/// `OnceLock` fill, so sharing across threads is safe.
#[derive(Debug)]
pub struct HermitianOperator {
    dim: usize,
    entries: Vec<Complex64>, // row-major dim x dim
    eig: OnceLock<Eigen>,
}

impl Clone for HermitianOperator {
    fn clone(&self) -> Self {
        let eig = OnceLock::new();
        if let Some(e) = self.eig.get() {
            let _ = eig.set(e.clone());
        }
        HermitianOperator {
            dim: self.dim,
            entries: self.entries.clone(),
            eig,
        }
    }
}

impl HermitianOperator {
    /// Validate and wrap a square complex matrix. Fails with
    /// [`Error::NonHermitianInput`] if any entry differs from the conjugate
    /// of its transpose partner by more than `1e-12` in absolute value.
    pub fn new(matrix: Matrix) -> Result<Self> {
        assert_eq!(matrix.rows(), matrix.cols(), "operator must be square");
        let n = matrix.rows();
        for i in 0..n {
            for j in i..n {
                let residual = (matrix.get(i, j) - matrix.get(j, i).conj()).norm();
                if residual > HERMITIAN_TOL {
                    return Err(Error::NonHermitianInput { i, j, residual });
                }
            }
        }
        Ok(HermitianOperator {
            dim: n,
            entries: matrix.data,
            eig: OnceLock::new(),
        })
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator::new(Matrix::identity(n)).expect("identity is Hermitian")
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        HermitianOperator::new(m).expect("diagonal matrix is Hermitian")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.dim, self.dim, self.entries.clone())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && self.entry(i, j) != Complex64::new(0.0, 0.0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.entry(i, i).re).collect()
    }

    /// Eigendecomposition, computed on first use and cached.
    pub fn eig(&self) -> Result<&Eigen> {
        if let Some(e) = self.eig.get() {
            return Ok(e);
        }
        let computed = jacobi_hermitian(self)?;
        Ok(self.eig.get_or_init(|| computed))
    }

    /// Smallest and largest eigenvalue.
    pub fn spectrum_bounds(&self) -> Result<(f64, f64)> {
        let e = self.eig()?;
        Ok((e.values[0], e.values[self.dim - 1]))
    }

    /// Continuous functional calculus with an arbitrary real scalar map:
    /// `U diag(func(lambda)) U*`. The closure may reject an eigenvalue with a
    /// domain error, which is propagated.
    ///
    /// The result is assembled as a sum of rank-one terms
    /// `sum_k func(lambda_k) u_k u_k*`, which keeps it exactly Hermitian in
    /// floating point.
    pub fn apply_with<F>(&self, func: F) -> Result<HermitianOperator>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let e = self.eig()?;
        let n = self.dim;
        let fvals: Vec<f64> = e.values.iter().map(|&l| func(l)).collect::<Result<_>>()?;
        let u = &e.vectors;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, fk) in fvals.iter().enumerate() {
                    acc += u.get(i, k) * u.get(j, k).conj() * fk;
                }
                out.set(i, j, acc);
            }
        }
        HermitianOperator::new(out)
    }

    /// Continuous functional calculus with a catalog function.
    pub fn apply_function(
        &self,
        f: &crate::scalarfun::ScalarFunction,
    ) -> Result<HermitianOperator> {
        self.apply_with(|t| f.evaluate(t))
    }

    /// Vector-state expectation `Re <A x, x>`. The imaginary part of the raw
    /// inner product must vanish to `1e-10 * ||A||_F`; it does for any
    /// operator that satisfies the Hermitian invariant.
    pub fn expectation(&self, x: &UnitVector) -> Result<f64> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "expectation",
                left: self.dim,
                right: x.dim(),
            });
        }
        let av = self.to_matrix().matvec(x.components());
        let mut acc = Complex64::new(0.0, 0.0);
        for (xi, avi) in x.components().iter().zip(&av) {
            acc += xi.conj() * avi;
        }
        let bound = 1e-10 * self.frobenius_norm().max(f64::MIN_POSITIVE);
        assert!(
            acc.im.abs() <= bound,
            "expectation of a Hermitian operator must be real: im = {}, bound = {}",
            acc.im,
            bound
        );
        Ok(acc.re)
    }

    /// Loewner order test: `self >= other` iff the smallest eigenvalue of the
    /// difference is at least `-tol`.
    pub fn is_geq(&self, other: &HermitianOperator, tol: f64) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                context: "operator order",
                left: self.dim,
                right: other.dim,
            });
        }
        let diff = HermitianOperator::new(self.to_matrix().sub(&other.to_matrix()))?;
        let (min, _) = diff.spectrum_bounds()?;
        Ok(min >= -tol)
    }

    /// Seeded random operator with spectrum inside `[lo, hi]`.
    ///
    /// For `dim >= 2` the first two eigenvalues are the endpoints themselves
    /// (so the interval is always attained) and the rest are uniform draws;
    /// the eigenbasis is a seeded Haar-style unitary. Identical seeds give
    /// identical operators, entrywise.
    pub fn random_in_interval(dim: usize, lo: f64, hi: f64, seed: u64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        assert!(dim >= 1, "dimension must be positive");
        let mut rng = rng::rng_from_seed(rng::mix(seed, 0x5eed));
        let uniform = |r: &mut rand_chacha::ChaCha8Rng| {
            use rand::Rng;
            r.gen_range(lo..=hi)
        };
        let mut values = Vec::with_capacity(dim);
        if dim == 1 {
            values.push(uniform(&mut rng));
        } else {
            values.push(lo);
            values.push(hi);
            for _ in 2..dim {
                values.push(uniform(&mut rng));
            }
        }
        let u = random_unitary(dim, rng::mix(seed, 0xba515));
        // sum_k lambda_k u_k u_k*, exactly Hermitian by construction
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &lk) in values.iter().enumerate() {
                    acc += u.get(i, k) * u.get(j, k).conj() * lk;
                }
                m.set(i, j, acc);
            }
        }
        HermitianOperator::new(m)
    }
}

/// Unit vector in a finite-dimensional complex Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    components: Vec<Complex64>,
}

impl UnitVector {
    /// Requires the Euclidean norm to be 1 within `1e-12`.
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        let norm = norm2(&components);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(UnitVector { components })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(components: Vec<Complex64>) -> Result<Self> {
        let norm = norm2(&components);
        if norm <= 1e-12 {
            return Err(Error::NotUnitVector { norm });
        }
        let scaled = components.iter().map(|z| z / norm).collect();
        UnitVector::new(scaled)
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        UnitVector { components: v }
    }

    /// Seeded random unit vector (normalized complex Gaussian).
    pub fn random(dim: usize, seed: u64) -> Self {
        let raw = rng::complex_gaussian_entries(dim, 1, seed);
        UnitVector::normalized(raw).expect("Gaussian vector is nonzero")
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Seeded Haar-style random unitary: modified Gram-Schmidt applied to a
/// complex Gaussian matrix. Retries with a derived seed in the measure-zero
/// event of a degenerate column.
pub fn random_unitary(n: usize, seed: u64) -> Matrix {
    'attempt: for attempt in 0..8u64 {
        let data = rng::complex_gaussian_entries(n, n, rng::mix(seed, attempt));
        let mut q = Matrix::from_rows(n, n, data);
        for k in 0..n {
            // re-orthogonalize twice for stability
            for _ in 0..2 {
                for j in 0..k {
                    let mut proj = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        proj += q.get(i, j).conj() * q.get(i, k);
                    }
                    for i in 0..n {
                        let v = q.get(i, k) - proj * q.get(i, j);
                        q.set(i, k, v);
                    }
                }
            }
            let norm = (0..n).map(|i| q.get(i, k).norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-10 {
                continue 'attempt;
            }
            for i in 0..n {
                let v = q.get(i, k) / norm;
                q.set(i, k, v);
            }
        }
        return q;
    }
    unreachable!("Gaussian matrices do not have collinear columns");
}

/// Cyclic Jacobi eigensolver for a Hermitian matrix.
///
/// Sweeps pivot pairs in fixed row-major order; each rotation annihilates one
/// off-diagonal entry with a complex plane rotation. Converges once the
/// off-diagonal Frobenius norm is at most `1e-12 * ||A||_F`, or fails with
/// [`Error::NoConvergence`] after 100 sweeps. Eigenvalues are returned in
/// ascending order; exact ties keep the order of the diagonalized columns.
fn jacobi_hermitian(op: &HermitianOperator) -> Result<Eigen> {
    let n = op.dim();
    let norm = op.frobenius_norm();
    let threshold = JACOBI_REL_TOL * norm;

    let mut a = op.to_matrix();
    let mut u = Matrix::identity(n);

    let off_norm = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let beta = a.get(p, q);
                let absb = beta.norm();
                if absb == 0.0 {
                    continue;
                }
                let alpha = a.get(p, p).re;
                let delta = a.get(q, q).re;
                let w = beta / absb; // unit phase of the pivot
                let theta = (delta - alpha) / (2.0 * absb);
                let t = if theta >= 0.0 {
                    -1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // columns p and q of A, rows mirrored to keep A Hermitian
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    let new_ip = aip * c + aiq * (w.conj() * s);
                    let new_iq = aip * (-w * s) + aiq * c;
                    a.set(i, p, new_ip);
                    a.set(p, i, new_ip.conj());
                    a.set(i, q, new_iq);
                    a.set(q, i, new_iq.conj());
                }
                a.set(p, p, Complex64::new(alpha + t * absb, 0.0));
                a.set(q, q, Complex64::new(delta - t * absb, 0.0));
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));

                // accumulate the rotation into U
                for i in 0..n {
                    let uip = u.get(i, p);
                    let uiq = u.get(i, q);
                    u.set(i, p, uip * c + uiq * (w.conj() * s));
                    u.set(i, q, uip * (-w * s) + uiq * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("eigenvalues are finite")
    });

    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, new_col, u.get(i, old_col));
        }
    }
    Ok(Eigen { values, vectors })
}
