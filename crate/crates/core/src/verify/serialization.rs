//! JSON shape for fully materialized instances: complex numbers as
//! `[re, im]` pairs, matrices row-major. Used to serialize violation
//! witnesses so any instance can be replayed exactly.

use serde::{Deserialize, Serialize};

use super::{CheckId, InequalityInstance};
use crate::functionals::Direction;
use crate::linalg::{HermitianOperator, Matrix, UnitVector};
use crate::posmaps::{MapKind, PositiveUnitalMap};
use crate::scalarfun::Interval;
use crate::Result;
use num_complex::Complex64;

type JsonComplex = [f64; 2];
type JsonMatrix = Vec<Vec<JsonComplex>>;

fn complex_out(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

fn complex_in(v: JsonComplex) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn matrix_out(m: &Matrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| complex_out(m.get(i, j))).collect())
        .collect()
}

fn matrix_in(rows: &JsonMatrix) -> Matrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let data = rows
        .iter()
        .flat_map(|row| row.iter().copied().map(complex_in))
        .collect();
    Matrix::from_rows(r, c, data)
}

/// Serializable snapshot of an [`InequalityInstance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub check: String,
    pub seed: u64,
    pub trial: u64,
    pub dim_h: usize,
    pub dim_k: usize,
    pub interval: [f64; 2],
    pub direction: Direction,
    pub tol: f64,
    pub f: String,
    pub g: String,
    pub h: String,
    pub a: JsonMatrix,
    pub b: JsonMatrix,
    pub x: Vec<JsonComplex>,
    pub y: Vec<JsonComplex>,
    pub psi_kraus: Vec<JsonMatrix>,
    pub phi_kraus: Vec<JsonMatrix>,
}

impl InstanceJson {
    pub fn from_instance(inst: &InequalityInstance) -> Self {
        InstanceJson {
            check: inst.check.as_str().into(),
            seed: inst.seed,
            trial: inst.trial,
            dim_h: inst.a.dim(),
            dim_k: inst.x.dim(),
            interval: [inst.interval.lo, inst.interval.hi],
            direction: inst.direction,
            tol: inst.tol,
            f: inst.f.to_string(),
            g: inst.g.to_string(),
            h: inst.h.to_string(),
            a: matrix_out(&inst.a.to_matrix()),
            b: matrix_out(&inst.b.to_matrix()),
            x: inst
                .x
                .components()
                .iter()
                .copied()
                .map(complex_out)
                .collect(),
            y: inst
                .y
                .components()
                .iter()
                .copied()
                .map(complex_out)
                .collect(),
            psi_kraus: inst.psi.kraus().iter().map(matrix_out).collect(),
            phi_kraus: inst.phi.kraus().iter().map(matrix_out).collect(),
        }
    }

    /// Rebuild the numeric instance. Kraus families are taken as-is without
    /// the unitality gate, so adversarial witnesses replay faithfully.
    pub fn to_instance(&self) -> Result<InequalityInstance> {
        let check: CheckId = self.check.parse()?;
        let a = HermitianOperator::new(matrix_in(&self.a))?;
        let b = HermitianOperator::new(matrix_in(&self.b))?;
        let x = UnitVector::new(self.x.iter().copied().map(complex_in).collect())?;
        let y = UnitVector::new(self.y.iter().copied().map(complex_in).collect())?;
        let psi = PositiveUnitalMap::from_kraus_unchecked(
            self.psi_kraus.iter().map(matrix_in).collect(),
            "replayed-psi",
            MapKind::Raw,
        )?;
        let phi = PositiveUnitalMap::from_kraus_unchecked(
            self.phi_kraus.iter().map(matrix_in).collect(),
            "replayed-phi",
            MapKind::Raw,
        )?;
        Ok(InequalityInstance {
            check,
            a,
            b,
            x,
            y,
            psi,
            phi,
            f: self.f.parse()?,
            g: self.g.parse()?,
            h: self.h.parse()?,
            interval: Interval::new(self.interval[0], self.interval[1])?,
            direction: self.direction,
            seed: self.seed,
            trial: self.trial,
            tol: self.tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{generate_instance, run_check, SuiteConfig};
    use super::*;

    #[test]
    fn instance_round_trip_reproduces_reports() {
        let mut cfg = SuiteConfig::new(super::super::CheckId::Thm21);
        cfg.dim_h = 3;
        cfg.dim_k = 2;
        cfg.f = "power:2".into();
        cfg.g = "power:1.5".into();
        cfg.h = "power:1".into();
        cfg.map_psi = "kraus:2".into();
        cfg.map_phi = "kraus:1:5".into();
        cfg.seed = 7;
        let inst = generate_instance(&cfg, 3).unwrap();
        let json = InstanceJson::from_instance(&inst);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: InstanceJson = serde_json::from_str(&text).unwrap();
        let replayed = parsed.to_instance().unwrap();
        let original = run_check(&inst, false).unwrap();
        let replay = run_check(&replayed, false).unwrap();
        assert_eq!(original, replay);
    }
}
