//! Scalar brute-force oracle for diagonal instances.
//!
//! For diagonal operators and identity or pinching maps, every expectation
//! collapses to an explicit weighted sum: with weights `wx_i = |x_i|^2` and
//! diagonal entries `a_i`,
//!
//! ```text
//! <psi(u(A)) x, x> = sum_i wx_i u(a_i)
//! ```
//!
//! (a pinching leaves a diagonal matrix untouched). The oracle restates each
//! check's gap in that scalar form, never building a matrix, an
//! eigendecomposition or a Kraus application, and so checks the whole
//! operator pipeline from the outside.

use super::{CheckId, InequalityInstance};
use crate::error::Error;
use crate::linalg::HermitianOperator;
use crate::posmaps::{MapKind, PositiveUnitalMap};
use crate::scalarfun::{Interval, ScalarFunction};
use crate::Result;

fn oracle_supported_map(map: &PositiveUnitalMap) -> bool {
    matches!(map.kind(), MapKind::Identity | MapKind::Pinching { .. })
}

fn require_applicable(inst: &InequalityInstance) -> Result<()> {
    let fail = |detail: &str| Error::OracleInapplicable {
        detail: detail.to_string(),
    };
    if !inst.a.is_diagonal() || !inst.b.is_diagonal() {
        return Err(fail("operators must be exactly diagonal"));
    }
    if !oracle_supported_map(&inst.psi) || !oracle_supported_map(&inst.phi) {
        return Err(fail("maps must be the identity or a pinching"));
    }
    if inst.a.dim() != inst.x.dim() || inst.b.dim() != inst.y.dim() {
        return Err(fail("diagonal oracle needs matching space dimensions"));
    }
    Ok(())
}

/// One scalar expectation side: weights and diagonal values.
struct ScalarSide {
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl ScalarSide {
    fn of(op: &HermitianOperator, vec: &crate::linalg::UnitVector) -> ScalarSide {
        ScalarSide {
            weights: vec.components().iter().map(|c| c.norm_sqr()).collect(),
            values: op.diagonal(),
        }
    }

    fn sum<F>(&self, u: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut acc = 0.0;
        for (w, t) in self.weights.iter().zip(&self.values) {
            acc += w * u(*t)?;
        }
        Ok(acc)
    }
}

fn clamp(m: f64, interval: Interval) -> f64 {
    if m < interval.lo && m >= interval.lo - 1e-12 {
        interval.lo
    } else if m > interval.hi && m <= interval.hi + 1e-12 {
        interval.hi
    } else {
        m
    }
}

/// Compute the gaps of an instance by scalar arithmetic alone, in the same
/// order as the reports of [`super::run_check`]. Only diagonal instances
/// with identity or pinching maps are supported.
pub fn oracle_gap(inst: &InequalityInstance) -> Result<Vec<f64>> {
    require_applicable(inst)?;
    let ea = ScalarSide::of(&inst.a, &inst.x);
    let eb = ScalarSide::of(&inst.b, &inst.y);
    // thm2.1-same substitutes B = A while keeping the second vector
    let eb_same = ScalarSide::of(&inst.a, &inst.y);

    let f = &inst.f;
    let g = &inst.g;
    let h = &inst.h;
    let fv = |t: f64| f.evaluate(t);
    let gv = |t: f64| g.evaluate(t);
    let hv = |t: f64| h.evaluate(t);
    let fg = |t: f64| Ok(f.evaluate(t)? * g.evaluate(t)?);
    let hf = |t: f64| Ok(h.evaluate(t)? * f.evaluate(t)?);
    let hg = |t: f64| Ok(h.evaluate(t)? * g.evaluate(t)?);
    let h2 = |t: f64| {
        let v = h.evaluate(t)?;
        Ok(v * v)
    };
    let f2 = |t: f64| {
        let v = f.evaluate(t)?;
        Ok(v * v)
    };
    let t1 = |t: f64| Ok(t);
    let t2 = |t: f64| Ok(t * t);
    let tf = |t: f64| Ok(t * f.evaluate(t)?);
    let tg = |t: f64| Ok(t * g.evaluate(t)?);

    let gaps = match inst.check {
        CheckId::Thm21 => {
            let lhs = eb.sum(h2)? * ea.sum(fg)? + ea.sum(h2)? * eb.sum(fg)?;
            let rhs = ea.sum(hf)? * eb.sum(hg)? + ea.sum(hg)? * eb.sum(hf)?;
            vec![lhs - rhs]
        }
        CheckId::Thm21Same => {
            let lhs = eb_same.sum(h2)? * ea.sum(fg)? + ea.sum(h2)? * eb_same.sum(fg)?;
            let rhs = ea.sum(hf)? * eb_same.sum(hg)? + ea.sum(hg)? * eb_same.sum(hf)?;
            vec![lhs - rhs]
        }
        CheckId::CorH1 => {
            let lhs = ea.sum(fg)? + eb.sum(fg)?;
            let rhs = ea.sum(fv)? * eb.sum(gv)? + ea.sum(gv)? * eb.sum(fv)?;
            vec![lhs - rhs]
        }
        CheckId::Cor1Cs => {
            let pair = eb.sum(h2)? * ea.sum(f2)? + ea.sum(h2)? * eb.sum(f2)?
                - 2.0 * ea.sum(hf)? * eb.sum(hf)?;
            let ehf = ea.sum(hf)?;
            let squared = ea.sum(h2)? * ea.sum(f2)? - ehf * ehf;
            vec![pair, squared]
        }
        CheckId::Cor2 => {
            let lhs = eb.sum(t2)? * ea.sum(fg)? + ea.sum(t2)? * eb.sum(fg)?;
            let rhs = ea.sum(tf)? * eb.sum(tg)? + ea.sum(tg)? * eb.sum(tf)?;
            vec![lhs - rhs]
        }
        CheckId::Cor3 => {
            let etf = ea.sum(tf)?;
            vec![ea.sum(t2)? * ea.sum(f2)? - etf * etf]
        }
        CheckId::Cor4 => {
            let lhs = eb.sum(h2)? * ea.sum(fv)? + ea.sum(h2)? * eb.sum(fv)?;
            let rhs = ea.sum(hf)? * eb.sum(hv)? + ea.sum(hv)? * eb.sum(hf)?;
            vec![lhs - rhs]
        }
        CheckId::Cor4Inv => {
            // B = A^{-1} entrywise, y = x
            let inv_values: Vec<f64> = ea
                .values
                .iter()
                .map(|&t| {
                    if t.abs() <= 1e-10 {
                        Err(Error::SingularOperator { min_abs: t.abs() })
                    } else {
                        Ok(1.0 / t)
                    }
                })
                .collect::<Result<_>>()?;
            let ei = ScalarSide {
                weights: ea.weights.clone(),
                values: inv_values,
            };
            let lhs = ei.sum(h2)? * ea.sum(fv)? + ea.sum(h2)? * ei.sum(fv)?;
            let rhs = ea.sum(hf)? * ei.sum(hv)? + ea.sum(hv)? * ei.sum(hf)?;
            vec![lhs - rhs]
        }
        CheckId::Thm22 => {
            let m = clamp(ea.sum(t1)?, inst.interval);
            let (fm, gm, hm) = (f.evaluate(m)?, g.evaluate(m)?, h.evaluate(m)?);
            let lhs = eb.sum(h2)? * fm * gm + hm * hm * eb.sum(fg)?;
            let rhs = eb.sum(hg)? * fm * hm + eb.sum(hf)? * hm * gm;
            vec![lhs - rhs]
        }
        CheckId::Cor5 => {
            let m = clamp(ea.sum(t1)?, inst.interval);
            let (fm, hm) = (f.evaluate(m)?, h.evaluate(m)?);
            let lhs = eb.sum(h2)? * fm * fm + eb.sum(f2)? * hm * hm;
            let rhs = 2.0 * eb.sum(hf)? * fm * hm;
            vec![lhs - rhs]
        }
        CheckId::Cor6 => {
            let m = clamp(ea.sum(t1)?, inst.interval);
            let fm = f.evaluate(m)?;
            let lhs = eb.sum(t2)? * fm * fm + eb.sum(f2)? * m * m;
            let rhs = 2.0 * eb.sum(tf)? * fm * m;
            vec![lhs - rhs]
        }
        CheckId::Thm23 | CheckId::Thm23Chain => {
            let am = clamp(ea.sum(t1)?, inst.interval);
            let bm = clamp(eb.sum(t1)?, inst.interval);
            let (ha, hb) = (h.evaluate(am)?, h.evaluate(bm)?);
            let (fa, fb) = (f.evaluate(am)?, f.evaluate(bm)?);
            let (ga, gb) = (g.evaluate(am)?, g.evaluate(bm)?);
            let s1 = ha * ha * eb.sum(fv)? * eb.sum(gv)? + hb * hb * ea.sum(fv)? * ea.sum(gv)?;
            let s2 = ha * ha * fb * gb + hb * hb * fa * ga;
            let s3 = ha * hb * (fb * ga + fa * gb);
            if inst.check == CheckId::Thm23 {
                vec![s1 - s3]
            } else {
                vec![s1 - s2, s2 - s3]
            }
        }
        CheckId::Remark1Pp | CheckId::Remark1Plog | CheckId::Remark1Exp => {
            let pw = |e: f64| move |t: f64| ScalarFunction::power(e).evaluate(t);
            let pwlog = |e: f64| {
                move |t: f64| {
                    Ok(ScalarFunction::power(e).evaluate(t)? * ScalarFunction::Log.evaluate(t)?)
                }
            };
            match super::family_of(inst)? {
                super::PowerFamily::PowerPower { p, q, r } => {
                    let lhs = eb.sum(pw(2.0 * r))? * ea.sum(pw(p + q))?
                        + ea.sum(pw(2.0 * r))? * eb.sum(pw(p + q))?;
                    let rhs = ea.sum(pw(p + r))? * eb.sum(pw(q + r))?
                        + ea.sum(pw(q + r))? * eb.sum(pw(p + r))?;
                    vec![lhs - rhs]
                }
                super::PowerFamily::PowerLog { p, r } => {
                    let lhs = eb.sum(pw(2.0 * r))? * ea.sum(pwlog(p))?
                        + ea.sum(pw(2.0 * r))? * eb.sum(pwlog(p))?;
                    let rhs = ea.sum(pw(p + r))? * eb.sum(pwlog(r))?
                        + ea.sum(pwlog(r))? * eb.sum(pw(p + r))?;
                    vec![lhs - rhs]
                }
                super::PowerFamily::ExpExp { r } => {
                    let exp2 = |t: f64| Ok((2.0 * t).exp());
                    let rexp = move |t: f64| Ok(ScalarFunction::power(r).evaluate(t)? * t.exp());
                    let lhs = eb.sum(pw(2.0 * r))? * ea.sum(exp2)?
                        + ea.sum(pw(2.0 * r))? * eb.sum(exp2)?;
                    let rhs = 2.0 * ea.sum(rexp)? * eb.sum(rexp)?;
                    vec![lhs - rhs]
                }
            }
        }
        CheckId::Thm11Reduction => {
            vec![ea.sum(fg)? - ea.sum(gv)? * ea.sum(fv)?]
        }
        CheckId::Thm12Reduction => {
            vec![ea.sum(h2)? * ea.sum(fg)? - ea.sum(hg)? * ea.sum(hf)?]
        }
    };
    Ok(gaps)
}
