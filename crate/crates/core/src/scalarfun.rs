//! Closed catalog of real scalar functions together with the weighted
//! monotonicity and synchronicity oracles.
//!
//! A pair `f, g` is *h-synchronous* on `[a, b]` for a non-negative weight `h`
//! when the product defect
//!
//! ```text
//! D(x, y) = (h(y) f(x) - h(x) f(y)) * (h(y) g(x) - h(x) g(y))
//! ```
//!
//! is non-negative for all `x, y` in the interval, and *h-asynchronous* when
//! it is non-positive. The oracles here decide those verdicts on a uniform
//! grid (64 points by default, endpoints included); catalog functions are
//! smooth, so sign changes of the defect are resolvable at that density for
//! the parameter ranges exercised by the fixture table.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::Result;

/// Relative tolerance applied to grid verdicts, scaled by the largest
/// absolute defect seen on the grid. A defect that is identically zero
/// (e.g. `f = g = const`) classifies as synchronous.
pub const VERDICT_REL_TOL: f64 = 1e-12;

/// Maximum expression-tree depth accepted by the catalog.
pub const MAX_DEPTH: usize = 8;

/// Closed real interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn clamp(&self, t: f64) -> f64 {
        t.clamp(self.lo, self.hi)
    }

    /// `n >= 2` uniform points, first and last exactly the endpoints.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least the two endpoints");
        let step = (self.hi - self.lo) / (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|i| self.lo + step * i as f64).collect();
        pts[n - 1] = self.hi;
        pts
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A real scalar function from the closed catalog.
///
/// `power(p)` means `t^p` (integer exponents are valid for negative
/// arguments, fractional exponents require `t > 0`), `log` is the natural
/// logarithm, `affine(a, b)` is `t -> a*t + b`, and `product`/`scalar` build
/// small expression trees of depth at most [`MAX_DEPTH`].
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFunction {
    Constant(f64),
    Identity,
    Power(f64),
    Reciprocal,
    Exp,
    Log,
    Affine { slope: f64, intercept: f64 },
    Product(Box<ScalarFunction>, Box<ScalarFunction>),
    Scaled(f64, Box<ScalarFunction>),
}

impl ScalarFunction {
    pub fn constant(c: f64) -> Self {
        ScalarFunction::Constant(c)
    }

    pub fn power(p: f64) -> Self {
        ScalarFunction::Power(p)
    }

    pub fn affine(slope: f64, intercept: f64) -> Self {
        ScalarFunction::Affine { slope, intercept }
    }

    pub fn product(f: ScalarFunction, g: ScalarFunction) -> Self {
        let node = ScalarFunction::Product(Box::new(f), Box::new(g));
        assert!(node.depth() <= MAX_DEPTH, "function tree too deep");
        node
    }

    pub fn scaled(c: f64, f: ScalarFunction) -> Self {
        let node = ScalarFunction::Scaled(c, Box::new(f));
        assert!(node.depth() <= MAX_DEPTH, "function tree too deep");
        node
    }

    pub fn depth(&self) -> usize {
        match self {
            ScalarFunction::Product(f, g) => 1 + f.depth().max(g.depth()),
            ScalarFunction::Scaled(_, f) => 1 + f.depth(),
            _ => 1,
        }
    }

    /// Evaluate at `t`, failing with [`Error::DomainViolation`] outside the
    /// function's domain.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let violation = || Error::DomainViolation {
            function: self.to_string(),
            point: t,
        };
        match self {
            ScalarFunction::Constant(c) => Ok(*c),
            ScalarFunction::Identity => Ok(t),
            ScalarFunction::Power(p) => {
                if *p == 0.0 {
                    Ok(1.0)
                } else if p.fract() == 0.0 && p.abs() < 2_147_483_647.0 {
                    if t == 0.0 && *p < 0.0 {
                        Err(violation())
                    } else {
                        Ok(t.powi(*p as i32))
                    }
                } else if t > 0.0 {
                    Ok(t.powf(*p))
                } else {
                    Err(violation())
                }
            }
            ScalarFunction::Reciprocal => {
                if t == 0.0 {
                    Err(violation())
                } else {
                    Ok(1.0 / t)
                }
            }
            ScalarFunction::Exp => Ok(t.exp()),
            ScalarFunction::Log => {
                if t > 0.0 {
                    Ok(t.ln())
                } else {
                    Err(violation())
                }
            }
            ScalarFunction::Affine { slope, intercept } => Ok(slope * t + intercept),
            ScalarFunction::Product(f, g) => Ok(f.evaluate(t)? * g.evaluate(t)?),
            ScalarFunction::Scaled(c, f) => Ok(c * f.evaluate(t)?),
        }
    }

    /// Evaluate on every grid point, failing fast on a domain violation.
    pub fn evaluate_on(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&t| self.evaluate(t)).collect()
    }

    /// True when the whole closed interval lies in the function's domain.
    /// The domain of every catalog function is an interval (or everything,
    /// or everything except 0), so checking the endpoints and 0 suffices.
    pub fn defined_on(&self, interval: Interval) -> bool {
        let probe = |t: f64| self.evaluate(t).is_ok();
        let endpoints = probe(interval.lo) && probe(interval.hi);
        if interval.contains(0.0) {
            endpoints && probe(0.0)
        } else {
            endpoints
        }
    }
}

impl fmt::Display for ScalarFunction {
    /// The colon-separated literal form, e.g. `power:2`, `affine:1:0.5`,
    /// `product:power:1:log`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFunction::Constant(c) => write!(out, "constant:{c}"),
            ScalarFunction::Identity => write!(out, "identity"),
            ScalarFunction::Power(p) => write!(out, "power:{p}"),
            ScalarFunction::Reciprocal => write!(out, "reciprocal"),
            ScalarFunction::Exp => write!(out, "exp"),
            ScalarFunction::Log => write!(out, "log"),
            ScalarFunction::Affine { slope, intercept } => {
                write!(out, "affine:{slope}:{intercept}")
            }
            ScalarFunction::Product(f, g) => write!(out, "product:{f}:{g}"),
            ScalarFunction::Scaled(c, f) => write!(out, "scalar:{c}:{f}"),
        }
    }
}

impl FromStr for ScalarFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split(':').collect();
        let mut pos = 0usize;
        let parsed = parse_tokens(s, &tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::BadLiteral {
                literal: s.to_string(),
                reason: format!("unexpected trailing tokens after position {pos}"),
            });
        }
        if parsed.depth() > MAX_DEPTH {
            return Err(Error::BadLiteral {
                literal: s.to_string(),
                reason: format!("tree depth exceeds {MAX_DEPTH}"),
            });
        }
        Ok(parsed)
    }
}

fn parse_tokens(literal: &str, tokens: &[&str], pos: &mut usize) -> Result<ScalarFunction> {
    let bad = |reason: String| Error::BadLiteral {
        literal: literal.to_string(),
        reason,
    };
    let head = *tokens
        .get(*pos)
        .ok_or_else(|| bad("missing function kind".into()))?;
    *pos += 1;
    let mut number = |what: &str| -> Result<f64> {
        let tok = tokens
            .get(*pos)
            .ok_or_else(|| bad(format!("missing {what}")))?;
        *pos += 1;
        tok.parse::<f64>()
            .map_err(|_| bad(format!("{what} is not a number: {tok:?}")))
    };
    match head {
        "constant" => Ok(ScalarFunction::Constant(number("constant value")?)),
        "identity" => Ok(ScalarFunction::Identity),
        "power" => Ok(ScalarFunction::Power(number("exponent")?)),
        "reciprocal" => Ok(ScalarFunction::Reciprocal),
        "exp" => Ok(ScalarFunction::Exp),
        "log" => Ok(ScalarFunction::Log),
        "affine" => {
            let slope = number("slope")?;
            let intercept = number("intercept")?;
            Ok(ScalarFunction::Affine { slope, intercept })
        }
        "product" => {
            let f = parse_tokens(literal, tokens, pos)?;
            let g = parse_tokens(literal, tokens, pos)?;
            Ok(ScalarFunction::Product(Box::new(f), Box::new(g)))
        }
        "scalar" => {
            let c = number("scale factor")?;
            let f = parse_tokens(literal, tokens, pos)?;
            Ok(ScalarFunction::Scaled(c, Box::new(f)))
        }
        other => Err(bad(format!("unknown function kind {other:?}"))),
    }
}

/// Verdict of the weighted monotonicity oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HMonotonicity {
    HIncreasing,
    HDecreasing,
    Neither,
}

impl fmt::Display for HMonotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HMonotonicity::HIncreasing => "h-increasing",
            HMonotonicity::HDecreasing => "h-decreasing",
            HMonotonicity::Neither => "neither",
        };
        write!(f, "{s}")
    }
}

/// Verdict of the weighted synchronicity oracle. `Mixed` is an artifact
/// extension for defects that change sign; it never asserts a claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyncKind {
    Synchronous,
    Asynchronous,
    Mixed,
}

impl fmt::Display for SyncKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SyncKind::Synchronous => "synchronous",
            SyncKind::Asynchronous => "asynchronous",
            SyncKind::Mixed => "mixed",
        };
        write!(f, "{s}")
    }
}

/// A grid pair at which the product defect takes a definite sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectWitness {
    pub x: f64,
    pub y: f64,
    pub defect: f64,
}

/// Result of the synchronicity oracle: the verdict plus extreme-defect
/// witnesses. `witness_neg` is present exactly when the verdict is not
/// `Synchronous` (a pair violating the `>=` reading), and symmetrically
/// `witness_pos` when the verdict is not `Asynchronous`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncVerdict {
    pub verdict: SyncKind,
    pub witness_neg: Option<DefectWitness>,
    pub witness_pos: Option<DefectWitness>,
    pub grid_size: usize,
}

/// Weighted monotonicity of `f` with respect to a positive weight `h`:
/// evaluates `h(x) f(t) - h(t) f(x)` over all ordered grid pairs `x <= t`.
pub fn h_monotonicity(
    f: &ScalarFunction,
    h: &ScalarFunction,
    interval: Interval,
    grid_n: usize,
) -> Result<HMonotonicity> {
    assert!(grid_n >= 2, "monotonicity grid needs at least 2 points");
    let grid = interval.grid(grid_n);
    let fv = f.evaluate_on(&grid)?;
    let hv = h.evaluate_on(&grid)?;
    for (t, v) in grid.iter().zip(&hv) {
        if *v <= 0.0 {
            return Err(Error::NonPositiveWeight {
                point: *t,
                value: *v,
            });
        }
    }

    let mut min_defect = f64::INFINITY;
    let mut max_defect = f64::NEG_INFINITY;
    let mut scale: f64 = 0.0;
    for i in 0..grid.len() {
        for j in i..grid.len() {
            // x = grid[i] <= t = grid[j]
            let defect = hv[i] * fv[j] - hv[j] * fv[i];
            min_defect = min_defect.min(defect);
            max_defect = max_defect.max(defect);
            scale = scale.max(defect.abs());
        }
    }
    let tol = VERDICT_REL_TOL * scale;
    if min_defect >= -tol {
        Ok(HMonotonicity::HIncreasing)
    } else if max_defect <= tol {
        Ok(HMonotonicity::HDecreasing)
    } else {
        Ok(HMonotonicity::Neither)
    }
}

/// Weighted synchronicity of the pair `(f, g)` with respect to a
/// non-negative weight `h`, decided on a uniform grid.
pub fn h_synchronicity(
    f: &ScalarFunction,
    g: &ScalarFunction,
    h: &ScalarFunction,
    interval: Interval,
    grid_n: usize,
) -> Result<SyncVerdict> {
    assert!(grid_n >= 2, "synchronicity grid needs at least 2 points");
    let grid = interval.grid(grid_n);
    let fv = f.evaluate_on(&grid)?;
    let gv = g.evaluate_on(&grid)?;
    let hv = h.evaluate_on(&grid)?;
    for (t, v) in grid.iter().zip(&hv) {
        if *v < 0.0 {
            return Err(Error::NegativeWeight {
                point: *t,
                value: *v,
            });
        }
    }

    let mut most_neg: Option<DefectWitness> = None;
    let mut most_pos: Option<DefectWitness> = None;
    let mut scale: f64 = 0.0;
    for i in 0..grid.len() {
        for j in i..grid.len() {
            let (x, y) = (grid[i], grid[j]);
            let defect = (hv[j] * fv[i] - hv[i] * fv[j]) * (hv[j] * gv[i] - hv[i] * gv[j]);
            scale = scale.max(defect.abs());
            if most_neg.is_none_or(|w| defect < w.defect) {
                most_neg = Some(DefectWitness { x, y, defect });
            }
            if most_pos.is_none_or(|w| defect > w.defect) {
                most_pos = Some(DefectWitness { x, y, defect });
            }
        }
    }
    let tol = VERDICT_REL_TOL * scale;
    let has_neg = most_neg.is_some_and(|w| w.defect < -tol);
    let has_pos = most_pos.is_some_and(|w| w.defect > tol);
    let verdict = if !has_neg {
        SyncKind::Synchronous
    } else if !has_pos {
        SyncKind::Asynchronous
    } else {
        SyncKind::Mixed
    };
    Ok(SyncVerdict {
        verdict,
        witness_neg: if has_neg { most_neg } else { None },
        witness_pos: if has_pos { most_pos } else { None },
        grid_size: grid_n,
    })
}

/// Midpoint convexity over all grid pairs:
/// `f((u+v)/2) <= (f(u)+f(v))/2` up to `1e-12` scaled by the largest
/// function magnitude on the grid.
pub fn is_convex_on(f: &ScalarFunction, interval: Interval, grid_n: usize) -> Result<bool> {
    assert!(grid_n >= 3, "convexity grid needs at least 3 points");
    let grid = interval.grid(grid_n);
    let fv = f.evaluate_on(&grid)?;
    let scale = fv.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * scale;
    for i in 0..grid.len() {
        for j in i..grid.len() {
            let mid = 0.5 * (grid[i] + grid[j]);
            let fmid = f.evaluate(mid)?;
            if fmid > 0.5 * (fv[i] + fv[j]) + tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest value of `f` on the grid; used for positivity prechecks.
pub fn min_on_grid(f: &ScalarFunction, interval: Interval, grid_n: usize) -> Result<f64> {
    let grid = interval.grid(grid_n);
    let fv = f.evaluate_on(&grid)?;
    Ok(fv.iter().fold(f64::INFINITY, |m, v| m.min(*v)))
}

pub mod examples;
