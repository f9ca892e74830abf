//! Positive unital linear maps between matrix algebras, realized in Kraus
//! form `X -> sum_i V_i* X V_i` with `sum_i V_i* V_i = 1`.
//!
//! Kraus form covers the completely positive unital maps, a strict subset of
//! all positive unital maps; positivity comes for free and random generation
//! is a normalization away. Every inequality verified by this crate assumes
//! only positivity and unitality, so checking on this subset is sound (and
//! never claimed to be exhaustive).

use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::linalg::{random_unitary, HermitianOperator, Matrix};
use crate::rng;
use crate::Result;

/// Frobenius-norm tolerance for the unitality invariant at construction.
pub const UNITALITY_TOL: f64 = 1e-10;

/// Structural kind of a map; retained so the diagonal scalar oracle can
/// recognize the maps it supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapKind {
    Identity,
    UnitaryConjugation,
    Compression,
    Pinching { blocks: Vec<usize> },
    State,
    RandomKraus,
    Raw,
}

/// A positive unital linear map from operators on an input space H
/// (dimension `dim_in`) to operators on an output space K (`dim_out`),
/// with Kraus matrices `V_i` of shape `dim_in x dim_out` (each maps K
/// into H).
#[derive(Debug, Clone)]
pub struct PositiveUnitalMap {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Matrix>,
    label: String,
    kind: MapKind,
}

impl PositiveUnitalMap {
    /// Wrap a Kraus family, enforcing the unitality invariant
    /// `||sum V_i* V_i - 1|| <= 1e-10`.
    pub fn from_kraus(kraus: Vec<Matrix>, label: impl Into<String>) -> Result<Self> {
        Self::from_kraus_with_kind(kraus, label, MapKind::Raw)
    }

    fn from_kraus_with_kind(
        kraus: Vec<Matrix>,
        label: impl Into<String>,
        kind: MapKind,
    ) -> Result<Self> {
        let map = Self::from_kraus_unchecked(kraus, label, kind)?;
        let residual = map.unitality_residual();
        if residual > UNITALITY_TOL {
            return Err(Error::NonUnitalMap {
                residual,
                limit: UNITALITY_TOL,
            });
        }
        Ok(map)
    }

    /// Wrap a Kraus family without the unitality check. Intended for
    /// adversarial runs that deliberately break the unital hypothesis;
    /// shapes are still validated.
    pub fn from_kraus_unchecked(
        kraus: Vec<Matrix>,
        label: impl Into<String>,
        kind: MapKind,
    ) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::BuilderValidation(
                "a map needs at least one Kraus matrix".into(),
            ));
        }
        let dim_in = kraus[0].rows();
        let dim_out = kraus[0].cols();
        for v in &kraus {
            if v.rows() != dim_in || v.cols() != dim_out {
                return Err(Error::BuilderValidation(
                    "Kraus matrices must share one shape".into(),
                ));
            }
        }
        Ok(PositiveUnitalMap {
            dim_in,
            dim_out,
            kraus,
            label: label.into(),
            kind,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn kraus(&self) -> &[Matrix] {
        &self.kraus
    }

    /// `||sum_i V_i* V_i - 1_K||_F`.
    pub fn unitality_residual(&self) -> f64 {
        let mut acc = Matrix::zeros(self.dim_out, self.dim_out);
        for v in &self.kraus {
            acc = acc.add(&v.adjoint().mul(v));
        }
        acc.sub(&Matrix::identity(self.dim_out)).frobenius_norm()
    }

    /// Apply the map: `sum_i V_i* X V_i`.
    pub fn apply(&self, x: &HermitianOperator) -> Result<HermitianOperator> {
        if x.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                context: "map application",
                left: self.dim_in,
                right: x.dim(),
            });
        }
        let xm = x.to_matrix();
        let mut acc = Matrix::zeros(self.dim_out, self.dim_out);
        for v in &self.kraus {
            acc = acc.add(&v.adjoint().mul(&xm).mul(v));
        }
        // V* X V of a Hermitian X is Hermitian up to rounding; symmetrize
        // the representation so downstream invariants hold exactly.
        let mut sym = Matrix::zeros(self.dim_out, self.dim_out);
        for i in 0..self.dim_out {
            for j in 0..self.dim_out {
                let v = (acc.get(i, j) + acc.get(j, i).conj()) * 0.5;
                sym.set(i, j, v);
            }
        }
        HermitianOperator::new(sym)
    }

    /// The identity map on `n x n` operators.
    pub fn identity(n: usize) -> Self {
        Self::from_kraus_with_kind(vec![Matrix::identity(n)], "identity", MapKind::Identity)
            .expect("identity map is unital")
    }

    /// Conjugation `X -> U* X U` by a unitary.
    pub fn unitary_conjugation(u: Matrix) -> Result<Self> {
        if u.rows() != u.cols() {
            return Err(Error::BuilderValidation(
                "conjugation needs a square matrix".into(),
            ));
        }
        if u.isometry_defect() > UNITALITY_TOL {
            return Err(Error::BuilderValidation(format!(
                "matrix is not unitary: defect {:.3e}",
                u.isometry_defect()
            )));
        }
        Self::from_kraus_with_kind(vec![u], "unitary", MapKind::UnitaryConjugation)
    }

    /// Compression `X -> V* X V` by an isometry `V` (columns orthonormal).
    pub fn compression(v: Matrix) -> Result<Self> {
        if v.rows() < v.cols() {
            return Err(Error::BuilderValidation(
                "compression isometry cannot widen the space".into(),
            ));
        }
        if v.isometry_defect() > UNITALITY_TOL {
            return Err(Error::BuilderValidation(format!(
                "matrix is not an isometry: defect {:.3e}",
                v.isometry_defect()
            )));
        }
        Self::from_kraus_with_kind(vec![v], "compression", MapKind::Compression)
    }

    /// Coordinate compression onto the first `dim_out` basis vectors.
    pub fn coordinate_compression(dim_in: usize, dim_out: usize) -> Result<Self> {
        if dim_out > dim_in || dim_out == 0 {
            return Err(Error::BuilderValidation(format!(
                "cannot compress dimension {dim_in} onto {dim_out}"
            )));
        }
        let mut v = Matrix::zeros(dim_in, dim_out);
        for i in 0..dim_out {
            v.set(i, i, Complex64::new(1.0, 0.0));
        }
        Self::compression(v)
    }

    /// Pinching onto a diagonal block structure; the Kraus family is the
    /// block projectors.
    pub fn pinching(block_sizes: &[usize], n: usize) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::BuilderValidation("blocks must be non-empty".into()));
        }
        if block_sizes.iter().sum::<usize>() != n {
            return Err(Error::BuilderValidation(format!(
                "block sizes {block_sizes:?} do not sum to {n}"
            )));
        }
        let mut kraus = Vec::with_capacity(block_sizes.len());
        let mut start = 0;
        for &b in block_sizes {
            let mut p = Matrix::zeros(n, n);
            for i in start..start + b {
                p.set(i, i, Complex64::new(1.0, 0.0));
            }
            kraus.push(p);
            start += b;
        }
        Self::from_kraus_with_kind(
            kraus,
            format!("pinching:{block_sizes:?}"),
            MapKind::Pinching {
                blocks: block_sizes.to_vec(),
            },
        )
    }

    /// The state map `X -> trace(rho X) * 1_K` for a density matrix `rho`
    /// (positive semidefinite, unit trace). Unital because trace(rho) = 1.
    pub fn state_map(rho: &HermitianOperator, dim_out: usize) -> Result<Self> {
        let trace: f64 = rho.diagonal().iter().sum();
        if (trace - 1.0).abs() > UNITALITY_TOL {
            return Err(Error::BuilderValidation(format!(
                "density matrix trace {trace} is not 1"
            )));
        }
        let eig = rho.eig()?;
        if eig.values[0] < -UNITALITY_TOL {
            return Err(Error::BuilderValidation(format!(
                "density matrix has negative eigenvalue {}",
                eig.values[0]
            )));
        }
        let n = rho.dim();
        let mut kraus = Vec::new();
        for (k, &lambda) in eig.values.iter().enumerate() {
            let w = lambda.max(0.0).sqrt();
            for j in 0..dim_out {
                // sqrt(lambda_k) * u_k e_j*: sends e_j to the k-th eigenvector
                let mut v = Matrix::zeros(n, dim_out);
                for i in 0..n {
                    v.set(i, j, eig.vectors.get(i, k) * w);
                }
                kraus.push(v);
            }
        }
        Self::from_kraus_with_kind(kraus, "state", MapKind::State)
    }

    /// Seeded random unital map: draws Gaussian `W_i`, forms the normalizer
    /// `S = sum W_i* W_i` and returns `V_i = W_i S^{-1/2}`. Retries with a
    /// derived seed (at most 8 times) if `S` is numerically singular.
    pub fn random_unital(dim_in: usize, dim_out: usize, n_kraus: usize, seed: u64) -> Result<Self> {
        assert!(n_kraus >= 1, "need at least one Kraus term");
        let mut last_min = f64::INFINITY;
        for attempt in 0..8u64 {
            let attempt_seed = rng::mix(seed, attempt);
            let ws: Vec<Matrix> = (0..n_kraus)
                .map(|i| {
                    Matrix::from_rows(
                        dim_in,
                        dim_out,
                        rng::complex_gaussian_entries(
                            dim_in,
                            dim_out,
                            rng::mix(attempt_seed, i as u64),
                        ),
                    )
                })
                .collect();
            let mut s = Matrix::zeros(dim_out, dim_out);
            for w in &ws {
                s = s.add(&w.adjoint().mul(w));
            }
            let s_op = HermitianOperator::new(symmetrized(&s))?;
            let (min_eig, _) = s_op.spectrum_bounds()?;
            if min_eig < 1e-12 {
                last_min = last_min.min(min_eig);
                continue;
            }
            let inv_sqrt = s_op.apply_with(|t| Ok(1.0 / t.sqrt()))?.to_matrix();
            let kraus = ws.iter().map(|w| w.mul(&inv_sqrt)).collect();
            return Self::from_kraus_with_kind(
                kraus,
                format!("kraus:{n_kraus}"),
                MapKind::RandomKraus,
            );
        }
        Err(Error::SingularNormalizer {
            min_eig: last_min,
            attempts: 8,
        })
    }
}

fn symmetrized(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut sym = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sym.set(i, j, (m.get(i, j) + m.get(j, i).conj()) * 0.5);
        }
    }
    sym
}

/// Parsed map literal: `identity`, `unitary:seed`, `compression:dim_out`,
/// `pinching:b1,b2,...`, `state:seed`, `kraus:n[:seed]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapSpec {
    Identity,
    Unitary { seed: u64 },
    Compression { dim_out: usize },
    Pinching { blocks: Vec<usize> },
    State { seed: u64 },
    Kraus { n: usize, seed: u64 },
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::BadLiteral {
            literal: s.to_string(),
            reason,
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["identity"] => Ok(MapSpec::Identity),
            ["unitary", seed] => Ok(MapSpec::Unitary {
                seed: seed.parse().map_err(|_| bad("bad seed".into()))?,
            }),
            ["compression", d] => Ok(MapSpec::Compression {
                dim_out: d.parse().map_err(|_| bad("bad dimension".into()))?,
            }),
            ["pinching", blocks] => {
                let blocks: Vec<usize> = blocks
                    .split(',')
                    .map(|b| b.parse().map_err(|_| bad(format!("bad block size {b:?}"))))
                    .collect::<Result<_>>()?;
                Ok(MapSpec::Pinching { blocks })
            }
            ["state", seed] => Ok(MapSpec::State {
                seed: seed.parse().map_err(|_| bad("bad seed".into()))?,
            }),
            ["kraus", n] => Ok(MapSpec::Kraus {
                n: n.parse().map_err(|_| bad("bad Kraus count".into()))?,
                seed: 0,
            }),
            ["kraus", n, seed] => Ok(MapSpec::Kraus {
                n: n.parse().map_err(|_| bad("bad Kraus count".into()))?,
                seed: seed.parse().map_err(|_| bad("bad seed".into()))?,
            }),
            _ => Err(bad("unknown map literal".into())),
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Identity => write!(f, "identity"),
            MapSpec::Unitary { seed } => write!(f, "unitary:{seed}"),
            MapSpec::Compression { dim_out } => write!(f, "compression:{dim_out}"),
            MapSpec::Pinching { blocks } => {
                let list: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
                write!(f, "pinching:{}", list.join(","))
            }
            MapSpec::State { seed } => write!(f, "state:{seed}"),
            MapSpec::Kraus { n, seed } => write!(f, "kraus:{n}:{seed}"),
        }
    }
}

impl MapSpec {
    /// Build a concrete map for the given spaces. `base_seed` is a derived
    /// per-role, per-trial seed from the harness; the literal's own seed is
    /// mixed in on top, so two roles sharing a literal still get independent
    /// draws.
    pub fn build(
        &self,
        dim_in: usize,
        dim_out: usize,
        base_seed: u64,
    ) -> Result<PositiveUnitalMap> {
        let require_square = |what: &str| -> Result<()> {
            if dim_in != dim_out {
                return Err(Error::DimensionMismatch {
                    context: match what {
                        "identity" => "identity map literal",
                        "unitary" => "unitary map literal",
                        "state" => "state map literal",
                        _ => "pinching map literal",
                    },
                    left: dim_in,
                    right: dim_out,
                });
            }
            Ok(())
        };
        match self {
            MapSpec::Identity => {
                require_square("identity")?;
                Ok(PositiveUnitalMap::identity(dim_in))
            }
            MapSpec::Unitary { seed } => {
                require_square("unitary")?;
                let u = random_unitary(dim_in, rng::mix(base_seed, *seed));
                PositiveUnitalMap::unitary_conjugation(u)
            }
            MapSpec::Compression { dim_out: d } => {
                if *d != dim_out {
                    return Err(Error::DimensionMismatch {
                        context: "compression map literal",
                        left: *d,
                        right: dim_out,
                    });
                }
                PositiveUnitalMap::coordinate_compression(dim_in, dim_out)
            }
            MapSpec::Pinching { blocks } => {
                require_square("pinching")?;
                PositiveUnitalMap::pinching(blocks, dim_in)
            }
            MapSpec::State { seed } => {
                let g = Matrix::from_rows(
                    dim_in,
                    dim_in,
                    rng::complex_gaussian_entries(dim_in, dim_in, rng::mix(base_seed, *seed)),
                );
                let gram = g.adjoint().mul(&g);
                let raw = HermitianOperator::new(symmetrized(&gram))?;
                let trace: f64 = raw.diagonal().iter().sum();
                let rho = raw.apply_with(|t| Ok(t / trace))?;
                PositiveUnitalMap::state_map(&rho, dim_out)
            }
            MapSpec::Kraus { n, seed } => {
                PositiveUnitalMap::random_unital(dim_in, dim_out, *n, rng::mix(base_seed, *seed))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::UnitVector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_map_is_identity() {
        let phi = PositiveUnitalMap::identity(3);
        let x = HermitianOperator::random_in_interval(3, -1.0, 2.0, 7).unwrap();
        let y = phi.apply(&x).unwrap();
        let res = y.to_matrix().sub(&x.to_matrix()).frobenius_norm();
        assert!(res < 1e-14);
        assert!(phi.unitality_residual() < 1e-14);
    }

    #[test]
    fn unital_maps_preserve_identity() {
        let one3 = HermitianOperator::identity(3);
        for map in [
            PositiveUnitalMap::random_unital(3, 2, 3, 5).unwrap(),
            PositiveUnitalMap::coordinate_compression(3, 2).unwrap(),
        ] {
            let out = map.apply(&one3).unwrap();
            let res = out
                .to_matrix()
                .sub(&Matrix::identity(map.dim_out()))
                .frobenius_norm();
            assert!(res <= 1e-10, "map {}: residual {res}", map.label());
        }
    }

    #[test]
    fn compression_extracts_leading_block() {
        let phi = PositiveUnitalMap::coordinate_compression(3, 2).unwrap();
        let x = HermitianOperator::from_diagonal(&[1.0, 2.0, 3.0]);
        let y = phi.apply(&x).unwrap();
        let expect = HermitianOperator::from_diagonal(&[1.0, 2.0]);
        assert!(y.to_matrix().sub(&expect.to_matrix()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn pinching_zeroes_off_diagonal() {
        let phi = PositiveUnitalMap::pinching(&[1, 1], 2).unwrap();
        let m = Matrix::from_rows(
            2,
            2,
            vec![c(1.0, 0.0), c(0.5, 0.25), c(0.5, -0.25), c(2.0, 0.0)],
        );
        let x = HermitianOperator::new(m).unwrap();
        let y = phi.apply(&x).unwrap();
        let expect = HermitianOperator::from_diagonal(&[1.0, 2.0]);
        assert!(y.to_matrix().sub(&expect.to_matrix()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn unitary_conjugation_preserves_spectrum() {
        let u = random_unitary(4, 3);
        let phi = PositiveUnitalMap::unitary_conjugation(u.clone()).unwrap();
        let x = HermitianOperator::random_in_interval(4, 0.0, 1.0, 9).unwrap();
        let y = phi.apply(&x).unwrap();
        let (a, b) = x.spectrum_bounds().unwrap();
        let (a2, b2) = y.spectrum_bounds().unwrap();
        assert!((a - a2).abs() < 1e-10 && (b - b2).abs() < 1e-10);
        // and matches U* X U directly
        let direct = u.adjoint().mul(&x.to_matrix()).mul(&u);
        assert!(y.to_matrix().sub(&direct).frobenius_norm() < 1e-12);
    }

    #[test]
    fn state_map_example() {
        let rho = HermitianOperator::from_diagonal(&[0.5, 0.5]);
        let phi = PositiveUnitalMap::state_map(&rho, 2).unwrap();
        let x = HermitianOperator::from_diagonal(&[1.0, 3.0]);
        let y = phi.apply(&x).unwrap();
        let expect = Matrix::identity(2).scale(c(2.0, 0.0));
        assert!(y.to_matrix().sub(&expect).frobenius_norm() < 1e-10);
    }

    #[test]
    fn halved_identity_is_not_unital() {
        let v = Matrix::identity(2).scale(c(0.5, 0.0));
        match PositiveUnitalMap::from_kraus(vec![v.clone()], "halved") {
            Err(Error::NonUnitalMap { residual, .. }) => {
                // sum V*V = I/4, so the residual is ||3/4 I||_F
                let expect = 0.75 * (2.0f64).sqrt();
                assert!((residual - expect).abs() < 1e-12);
            }
            other => panic!("expected NonUnitalMap, got {other:?}"),
        }
        // but the unchecked constructor admits it for adversarial use
        let m = PositiveUnitalMap::from_kraus_unchecked(vec![v], "halved", MapKind::Raw).unwrap();
        assert!(m.unitality_residual() > 1.0);
    }

    #[test]
    fn random_maps_are_unital_and_deterministic() {
        for seed in 0..100u64 {
            let m = PositiveUnitalMap::random_unital(4, 3, 2, seed).unwrap();
            assert!(m.unitality_residual() <= 1e-10, "seed {seed}");
            let one = HermitianOperator::identity(4);
            let out = m.apply(&one).unwrap();
            let res = out.to_matrix().sub(&Matrix::identity(3)).frobenius_norm();
            assert!(res <= 1e-10, "seed {seed}");
        }
        let a = PositiveUnitalMap::random_unital(3, 3, 2, 11).unwrap();
        let b = PositiveUnitalMap::random_unital(3, 3, 2, 11).unwrap();
        for (va, vb) in a.kraus().iter().zip(b.kraus()) {
            assert_eq!(va, vb);
        }
    }

    #[test]
    fn single_kraus_normalizes_to_isometry() {
        let m = PositiveUnitalMap::random_unital(3, 3, 1, 4).unwrap();
        assert!(m.kraus()[0].isometry_defect() < 1e-10);
    }

    #[test]
    fn positivity_is_preserved() {
        // X >= 0 implies map(X) >= 0
        for seed in 0..20u64 {
            let m = PositiveUnitalMap::random_unital(4, 3, 3, seed).unwrap();
            let x = HermitianOperator::random_in_interval(4, 0.0, 2.0, seed).unwrap();
            let y = m.apply(&x).unwrap();
            let (min, _) = y.spectrum_bounds().unwrap();
            assert!(min >= -1e-10, "seed {seed}: min {min}");
        }
    }

    #[test]
    fn hermitian_output_for_hermitian_input() {
        let m = PositiveUnitalMap::random_unital(5, 4, 2, 2).unwrap();
        let x = HermitianOperator::random_in_interval(5, -2.0, 2.0, 13).unwrap();
        let y = m.apply(&x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let res = (y.entry(i, j) - y.entry(j, i).conj()).norm();
                assert!(res <= 1e-12);
            }
        }
    }

    #[test]
    fn map_spec_literals() {
        assert_eq!("identity".parse::<MapSpec>().unwrap(), MapSpec::Identity);
        assert_eq!(
            "pinching:1,2,1".parse::<MapSpec>().unwrap(),
            MapSpec::Pinching {
                blocks: vec![1, 2, 1]
            }
        );
        assert_eq!(
            "kraus:3".parse::<MapSpec>().unwrap(),
            MapSpec::Kraus { n: 3, seed: 0 }
        );
        assert_eq!(
            "kraus:3:17".parse::<MapSpec>().unwrap(),
            MapSpec::Kraus { n: 3, seed: 17 }
        );
        assert!("bogus:1".parse::<MapSpec>().is_err());

        let spec: MapSpec = "kraus:2:9".parse().unwrap();
        let m = spec.build(4, 3, 100).unwrap();
        assert_eq!((m.dim_in(), m.dim_out()), (4, 3));
        assert!(m.unitality_residual() <= 1e-10);

        // identity literal needs matching dimensions
        assert!(MapSpec::Identity.build(3, 2, 0).is_err());
    }

    #[test]
    fn expectation_through_map_stays_in_hull() {
        // sanity: <map(A) x, x> lies within the spectral bounds of A
        let m = PositiveUnitalMap::random_unital(4, 4, 2, 8).unwrap();
        let a = HermitianOperator::random_in_interval(4, 1.0, 2.0, 3).unwrap();
        let x = UnitVector::random(4, 21);
        let v = m.apply(&a).unwrap().expectation(&x).unwrap();
        assert!((1.0 - 1e-9..=2.0 + 1e-9).contains(&v));
    }
}
