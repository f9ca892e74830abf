//! Randomized verification harness: suite configuration, deterministic
//! instance generation, check dispatch, a diagonal scalar oracle, and
//! deliberate-violation search.
//!
//! Determinism contract: everything a suite produces is a pure function of
//! its [`SuiteConfig`]. Trial `t` derives its seed as `mix(cfg.seed, t)`
//! ([`crate::rng::mix`]) and every object of the trial (operators, vectors,
//! maps) draws from its own sub-stream, so results do not depend on
//! evaluation order and two runs emit identical report sequences.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::functionals::{self, Direction, GapContext, GapReport, PairArgs, PowerFamily};
use crate::linalg::{HermitianOperator, UnitVector};
use crate::posmaps::{MapSpec, PositiveUnitalMap};
use crate::rng::mix;
use crate::scalarfun::{self, Interval, ScalarFunction, SyncKind};
use crate::Result;

/// Identifier of one verifiable inequality. The string forms are the stable
/// external names used in configs, reports and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    Thm21,
    Thm21Same,
    CorH1,
    Cor1Cs,
    Cor2,
    Cor3,
    Cor4,
    Cor4Inv,
    Thm22,
    Cor5,
    Cor6,
    Thm23,
    Thm23Chain,
    Remark1Pp,
    Remark1Plog,
    Remark1Exp,
    Thm11Reduction,
    Thm12Reduction,
}

impl CheckId {
    pub const ALL: [CheckId; 18] = [
        CheckId::Thm21,
        CheckId::Thm21Same,
        CheckId::CorH1,
        CheckId::Cor1Cs,
        CheckId::Cor2,
        CheckId::Cor3,
        CheckId::Cor4,
        CheckId::Cor4Inv,
        CheckId::Thm22,
        CheckId::Cor5,
        CheckId::Cor6,
        CheckId::Thm23,
        CheckId::Thm23Chain,
        CheckId::Remark1Pp,
        CheckId::Remark1Plog,
        CheckId::Remark1Exp,
        CheckId::Thm11Reduction,
        CheckId::Thm12Reduction,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Thm21 => "thm2.1",
            CheckId::Thm21Same => "thm2.1-same",
            CheckId::CorH1 => "cor-h1",
            CheckId::Cor1Cs => "cor1-cs",
            CheckId::Cor2 => "cor2",
            CheckId::Cor3 => "cor3",
            CheckId::Cor4 => "cor4",
            CheckId::Cor4Inv => "cor4-inv",
            CheckId::Thm22 => "thm2.2",
            CheckId::Cor5 => "cor5",
            CheckId::Cor6 => "cor6",
            CheckId::Thm23 => "thm2.3",
            CheckId::Thm23Chain => "thm2.3-chain",
            CheckId::Remark1Pp => "remark1-pp",
            CheckId::Remark1Plog => "remark1-plog",
            CheckId::Remark1Exp => "remark1-exp",
            CheckId::Thm11Reduction => "thm1.1-reduction",
            CheckId::Thm12Reduction => "thm1.2-reduction",
        }
    }

    /// Number of reports one instance of this check emits.
    pub fn report_count(&self) -> usize {
        match self {
            CheckId::Cor1Cs | CheckId::Thm23Chain => 2,
            _ => 1,
        }
    }

    /// Checks evaluating functions at single scalars or through vector
    /// states directly; these need the input and output spaces to agree.
    pub fn needs_equal_dims(&self) -> bool {
        matches!(self, CheckId::Thm11Reduction | CheckId::Thm12Reduction)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .iter()
            .find(|c| c.as_str() == s)
            .copied()
            .ok_or_else(|| Error::BadLiteral {
                literal: s.to_string(),
                reason: "unknown check id".into(),
            })
    }
}

fn default_dim() -> usize {
    4
}
fn default_interval() -> [f64; 2] {
    [1.0, 2.0]
}
fn default_fun() -> String {
    "identity".into()
}
fn default_weight() -> String {
    "constant:1".into()
}
fn default_map() -> String {
    "identity".into()
}
fn default_trials() -> u64 {
    100
}
fn default_tol() -> f64 {
    functionals::DEFAULT_GAP_TOL
}
fn default_direction() -> Direction {
    Direction::Geq
}

/// Declarative description of one verification suite. This is exactly the
/// JSON config schema consumed by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SuiteConfig {
    pub check: String,
    #[serde(default = "default_dim")]
    pub dim_h: usize,
    #[serde(default = "default_dim")]
    pub dim_k: usize,
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    #[serde(default = "default_fun")]
    pub f: String,
    #[serde(default = "default_fun")]
    pub g: String,
    #[serde(default = "default_weight")]
    pub h: String,
    #[serde(default = "default_map")]
    pub map_psi: String,
    #[serde(default = "default_map")]
    pub map_phi: String,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_direction")]
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    /// Optional explicit instance. When present the suite replays exactly
    /// this instance (the worked-example fixture and violation witnesses
    /// use it); the surrounding randomized-generation fields are ignored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceJson>,
}

impl SuiteConfig {
    pub fn new(check: CheckId) -> Self {
        SuiteConfig {
            check: check.as_str().into(),
            dim_h: default_dim(),
            dim_k: default_dim(),
            interval: default_interval(),
            f: default_fun(),
            g: default_fun(),
            h: default_weight(),
            map_psi: default_map(),
            map_phi: default_map(),
            trials: default_trials(),
            seed: 0,
            tol: default_tol(),
            direction: Direction::Geq,
            comment: None,
            instance: None,
        }
    }

    /// Parse and validate every field, producing the typed view used by the
    /// generator and the dispatcher.
    pub fn parsed(&self) -> Result<ParsedConfig> {
        let check: CheckId = self.check.parse()?;
        let interval = Interval::new(self.interval[0], self.interval[1])?;
        if self.dim_h == 0 || self.dim_k == 0 {
            return Err(Error::Config("dimensions must be positive".into()));
        }
        if self.dim_h > 64 || self.dim_k > 64 {
            return Err(Error::Config("dimensions beyond 64 are unsupported".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        if check.needs_equal_dims() && self.dim_h != self.dim_k {
            return Err(Error::Config(format!(
                "check {check} evaluates vector states on the input space and needs dim_h == dim_k"
            )));
        }
        let f: ScalarFunction = self.f.parse()?;
        let g: ScalarFunction = self.g.parse()?;
        let h: ScalarFunction = self.h.parse()?;
        let map_psi: MapSpec = self.map_psi.parse()?;
        let map_phi: MapSpec = self.map_phi.parse()?;
        Ok(ParsedConfig {
            check,
            interval,
            f,
            g,
            h,
            map_psi,
            map_phi,
        })
    }
}

/// Typed view of a validated [`SuiteConfig`].
#[derive(Debug, Clone)]
pub struct ParsedConfig {
    pub check: CheckId,
    pub interval: Interval,
    pub f: ScalarFunction,
    pub g: ScalarFunction,
    pub h: ScalarFunction,
    pub map_psi: MapSpec,
    pub map_phi: MapSpec,
}

/// Fully materialized randomized instance of one inequality check.
#[derive(Debug, Clone)]
pub struct InequalityInstance {
    pub check: CheckId,
    pub a: HermitianOperator,
    pub b: HermitianOperator,
    pub x: UnitVector,
    pub y: UnitVector,
    pub psi: PositiveUnitalMap,
    pub phi: PositiveUnitalMap,
    pub f: ScalarFunction,
    pub g: ScalarFunction,
    pub h: ScalarFunction,
    pub interval: Interval,
    pub direction: Direction,
    pub seed: u64,
    pub trial: u64,
    pub tol: f64,
}

// fixed sub-stream indices for the per-trial seed derivation
const STREAM_A: u64 = 1;
const STREAM_B: u64 = 2;
const STREAM_X: u64 = 3;
const STREAM_Y: u64 = 4;
const STREAM_PSI: u64 = 5;
const STREAM_PHI: u64 = 6;
const STREAM_DIAG: u64 = 7;
const STREAM_BLOCKS: u64 = 8;

/// Deterministically build the instance for `(cfg.seed, trial)`.
pub fn generate_instance(cfg: &SuiteConfig, trial: u64) -> Result<InequalityInstance> {
    let parsed = cfg.parsed()?;
    let trial_seed = mix(cfg.seed, trial);
    let build = || -> Result<InequalityInstance> {
        let a = HermitianOperator::random_in_interval(
            cfg.dim_h,
            parsed.interval.lo,
            parsed.interval.hi,
            mix(trial_seed, STREAM_A),
        )?;
        let b = HermitianOperator::random_in_interval(
            cfg.dim_h,
            parsed.interval.lo,
            parsed.interval.hi,
            mix(trial_seed, STREAM_B),
        )?;
        let x = UnitVector::random(cfg.dim_k, mix(trial_seed, STREAM_X));
        let y = UnitVector::random(cfg.dim_k, mix(trial_seed, STREAM_Y));
        let psi = parsed
            .map_psi
            .build(cfg.dim_h, cfg.dim_k, mix(trial_seed, STREAM_PSI))?;
        let phi = parsed
            .map_phi
            .build(cfg.dim_h, cfg.dim_k, mix(trial_seed, STREAM_PHI))?;
        let instance = InequalityInstance {
            check: parsed.check,
            a,
            b,
            x,
            y,
            psi,
            phi,
            f: parsed.f.clone(),
            g: parsed.g.clone(),
            h: parsed.h.clone(),
            interval: parsed.interval,
            direction: cfg.direction,
            seed: cfg.seed,
            trial,
            tol: cfg.tol,
        };
        instance.validate()?;
        Ok(instance)
    };
    build().map_err(|e| e.at_trial(trial))
}

/// Diagonal variant of [`generate_instance`] for oracle comparisons: both
/// operators are exactly diagonal and the maps alternate between the
/// identity and a seeded pinching. Requires `dim_h == dim_k`.
pub fn generate_diagonal_instance(cfg: &SuiteConfig, trial: u64) -> Result<InequalityInstance> {
    let parsed = cfg.parsed()?;
    if cfg.dim_h != cfg.dim_k {
        return Err(Error::Config(
            "diagonal oracle instances need dim_h == dim_k".into(),
        ));
    }
    let n = cfg.dim_h;
    let trial_seed = mix(cfg.seed, trial);
    let build = || -> Result<InequalityInstance> {
        let diag = |stream: u64| -> Vec<f64> {
            let mut rng = crate::rng::rng_from_seed(mix(trial_seed, mix(STREAM_DIAG, stream)));
            use rand::Rng;
            let mut v: Vec<f64> = Vec::with_capacity(n);
            if n == 1 {
                v.push(rng.gen_range(parsed.interval.lo..=parsed.interval.hi));
            } else {
                v.push(parsed.interval.lo);
                v.push(parsed.interval.hi);
                for _ in 2..n {
                    v.push(rng.gen_range(parsed.interval.lo..=parsed.interval.hi));
                }
            }
            v
        };
        let a = HermitianOperator::from_diagonal(&diag(STREAM_A));
        let b = HermitianOperator::from_diagonal(&diag(STREAM_B));
        let x = UnitVector::random(n, mix(trial_seed, STREAM_X));
        let y = UnitVector::random(n, mix(trial_seed, STREAM_Y));
        let pinching_map = |stream: u64| -> Result<PositiveUnitalMap> {
            let mut rng = crate::rng::rng_from_seed(mix(trial_seed, mix(STREAM_BLOCKS, stream)));
            use rand::Rng;
            let mut blocks = Vec::new();
            let mut left = n;
            while left > 0 {
                let b = rng.gen_range(1..=left);
                blocks.push(b);
                left -= b;
            }
            PositiveUnitalMap::pinching(&blocks, n)
        };
        let (psi, phi) = if trial.is_multiple_of(2) {
            (PositiveUnitalMap::identity(n), pinching_map(STREAM_PHI)?)
        } else {
            (pinching_map(STREAM_PSI)?, PositiveUnitalMap::identity(n))
        };
        let instance = InequalityInstance {
            check: parsed.check,
            a,
            b,
            x,
            y,
            psi,
            phi,
            f: parsed.f.clone(),
            g: parsed.g.clone(),
            h: parsed.h.clone(),
            interval: parsed.interval,
            direction: cfg.direction,
            seed: cfg.seed,
            trial,
            tol: cfg.tol,
        };
        instance.validate()?;
        Ok(instance)
    };
    build().map_err(|e| e.at_trial(trial))
}

impl InequalityInstance {
    /// Structural invariants: spectra inside the interval, unit vectors,
    /// unital maps, dimensions consistent.
    pub fn validate(&self) -> Result<()> {
        for (op, name) in [(&self.a, "A"), (&self.b, "B")] {
            let (lo, hi) = op.spectrum_bounds()?;
            if lo < self.interval.lo - 1e-10 || hi > self.interval.hi + 1e-10 {
                return Err(Error::HypothesisViolation {
                    check: self.check.as_str().into(),
                    detail: format!(
                        "spectrum of {name} [{lo}, {hi}] leaves the interval {}",
                        self.interval
                    ),
                });
            }
        }
        // function domains must cover the whole interval; every catalog
        // domain is an interval or punctured at 0, so probing the endpoints
        // and 0 decides it
        for func in [&self.f, &self.g, &self.h] {
            func.evaluate(self.interval.lo)?;
            func.evaluate(self.interval.hi)?;
            if self.interval.contains(0.0) {
                func.evaluate(0.0)?;
            }
        }
        for (map, name) in [(&self.psi, "psi"), (&self.phi, "phi")] {
            let residual = map.unitality_residual();
            if residual > crate::posmaps::UNITALITY_TOL {
                return Err(Error::NonUnitalMap {
                    residual,
                    limit: crate::posmaps::UNITALITY_TOL,
                });
            }
            if map.dim_in() != self.a.dim() || map.dim_out() != self.x.dim() {
                return Err(Error::DimensionMismatch {
                    context: if name == "psi" {
                        "psi map spaces"
                    } else {
                        "phi map spaces"
                    },
                    left: map.dim_in(),
                    right: self.a.dim(),
                });
            }
        }
        Ok(())
    }

    fn pair_args(&self) -> PairArgs<'_> {
        PairArgs {
            a: &self.a,
            b: &self.b,
            psi: &self.psi,
            phi: &self.phi,
            x: &self.x,
            y: &self.y,
        }
    }
}

/// The effective `(f, g, h)` triple whose synchronicity the check's
/// direction relies on, when it has such a hypothesis.
fn sync_triple(
    inst: &InequalityInstance,
) -> Option<(ScalarFunction, ScalarFunction, ScalarFunction)> {
    let one = ScalarFunction::constant(1.0);
    let t = ScalarFunction::Identity;
    match inst.check {
        CheckId::Thm21 | CheckId::Thm21Same | CheckId::Thm22 | CheckId::Thm12Reduction => {
            Some((inst.f.clone(), inst.g.clone(), inst.h.clone()))
        }
        CheckId::CorH1 | CheckId::Thm11Reduction => Some((inst.f.clone(), inst.g.clone(), one)),
        CheckId::Cor2 => Some((inst.f.clone(), inst.g.clone(), t)),
        CheckId::Cor3 | CheckId::Cor6 => Some((inst.f.clone(), inst.f.clone(), t)),
        CheckId::Cor4 | CheckId::Cor4Inv => Some((inst.f.clone(), one, inst.h.clone())),
        CheckId::Cor1Cs | CheckId::Cor5 => Some((inst.f.clone(), inst.f.clone(), inst.h.clone())),
        CheckId::Thm23 | CheckId::Thm23Chain => {
            Some((inst.f.clone(), inst.g.clone(), inst.h.clone()))
        }
        // the families validate their parameter ranges too; the grid verdict
        // on the equivalent catalog functions is a second, independent gate
        CheckId::Remark1Pp | CheckId::Remark1Plog | CheckId::Remark1Exp => {
            Some((inst.f.clone(), inst.g.clone(), inst.h.clone()))
        }
    }
}

fn power_exponent(f: &ScalarFunction) -> Option<f64> {
    match f {
        ScalarFunction::Power(p) => Some(*p),
        ScalarFunction::Identity => Some(1.0),
        ScalarFunction::Reciprocal => Some(-1.0),
        _ => None,
    }
}

/// Extract the family member encoded by the instance's function literals.
fn family_of(inst: &InequalityInstance) -> Result<PowerFamily> {
    let bad = |detail: String| Error::Config(detail);
    match inst.check {
        CheckId::Remark1Pp => {
            let p = power_exponent(&inst.f)
                .ok_or_else(|| bad(format!("remark1-pp needs a power f, got {}", inst.f)))?;
            let q = power_exponent(&inst.g)
                .ok_or_else(|| bad(format!("remark1-pp needs a power g, got {}", inst.g)))?;
            let r = power_exponent(&inst.h)
                .ok_or_else(|| bad(format!("remark1-pp needs a power weight, got {}", inst.h)))?;
            Ok(PowerFamily::PowerPower { p, q, r })
        }
        CheckId::Remark1Plog => {
            let p = power_exponent(&inst.f)
                .ok_or_else(|| bad(format!("remark1-plog needs a power f, got {}", inst.f)))?;
            if inst.g != ScalarFunction::Log {
                return Err(bad(format!("remark1-plog needs g = log, got {}", inst.g)));
            }
            let r = power_exponent(&inst.h)
                .ok_or_else(|| bad(format!("remark1-plog needs a power weight, got {}", inst.h)))?;
            Ok(PowerFamily::PowerLog { p, r })
        }
        CheckId::Remark1Exp => {
            if inst.f != ScalarFunction::Exp || inst.g != ScalarFunction::Exp {
                return Err(bad("remark1-exp needs f = g = exp".into()));
            }
            let r = power_exponent(&inst.h)
                .ok_or_else(|| bad(format!("remark1-exp needs a power weight, got {}", inst.h)))?;
            Ok(PowerFamily::ExpExp { r })
        }
        other => Err(bad(format!("{other} is not a parameter family"))),
    }
}

/// Validate the check-specific hypotheses of an instance: positivity of the
/// interval where the check's weight demands it, the grid synchronicity
/// verdict against the requested direction, and parameter ranges for the
/// families.
fn validate_hypotheses(inst: &InequalityInstance) -> Result<()> {
    let check = inst.check;
    let fail = |detail: String| Error::HypothesisViolation {
        check: check.as_str().into(),
        detail,
    };

    let needs_positive_interval = matches!(
        check,
        CheckId::Cor2 | CheckId::Cor3 | CheckId::Cor6 | CheckId::Remark1Pp | CheckId::Remark1Exp
    );
    if needs_positive_interval && inst.interval.lo <= 0.0 {
        return Err(fail(format!(
            "the identity weight needs a positive interval, got {}",
            inst.interval
        )));
    }
    if check == CheckId::Remark1Plog && inst.interval.lo < 1.0 {
        return Err(fail(format!(
            "the power-log family lives above 1, got {}",
            inst.interval
        )));
    }
    if check == CheckId::Cor4Inv {
        let inv = functionals::operator_inverse(&inst.a)?;
        let (lo, hi) = inv.spectrum_bounds()?;
        if lo < inst.interval.lo - 1e-9 || hi > inst.interval.hi + 1e-9 {
            return Err(fail(format!(
                "the inverse spectrum [{lo}, {hi}] leaves the interval {}; use an inversion-closed interval",
                inst.interval
            )));
        }
    }

    if matches!(
        check,
        CheckId::Remark1Pp | CheckId::Remark1Plog | CheckId::Remark1Exp
    ) {
        let family = family_of(inst)?;
        if family.supported_direction() != Some(inst.direction) {
            return Err(Error::ParameterViolation {
                detail: format!("{family:?} does not support direction {}", inst.direction),
            });
        }
    }

    if let Some((f, g, h)) = sync_triple(inst) {
        let verdict =
            scalarfun::h_synchronicity(&f, &g, &h, inst.interval, functionals::HYPOTHESIS_GRID)?;
        let ok = matches!(
            (inst.direction, verdict.verdict),
            (Direction::Geq, SyncKind::Synchronous) | (Direction::Leq, SyncKind::Asynchronous)
        );
        if !ok {
            return Err(fail(format!(
                "grid verdict {} does not support direction {}",
                verdict.verdict, inst.direction
            )));
        }
    }
    Ok(())
}

/// Evaluate one instance, returning one report (or two for the chained
/// checks). In non-adversarial mode the check-specific hypotheses are
/// validated first and a mismatch is an error, never a violation report;
/// the adversarial flag lifts that gate so deliberately broken hypotheses
/// can be probed.
pub fn run_check(inst: &InequalityInstance, adversarial: bool) -> Result<Vec<GapReport>> {
    if !adversarial {
        validate_hypotheses(inst)?;
    }
    let mut ctx = GapContext::new(inst.check.as_str())
        .with_tol(inst.tol)
        .with_provenance(inst.seed, inst.trial);
    if adversarial {
        ctx = ctx.unenforced();
    }
    let args = inst.pair_args();
    let dir = inst.direction;
    let reports = match inst.check {
        CheckId::Thm21 => vec![functionals::weighted_pair_gap(
            &ctx, &inst.f, &inst.g, &inst.h, &args, dir,
        )?],
        CheckId::Thm21Same => vec![functionals::weighted_pair_same_operator_gap(
            &ctx, &inst.f, &inst.g, &inst.h, &inst.a, &inst.psi, &inst.phi, &inst.x, &inst.y, dir,
        )?],
        CheckId::CorH1 => vec![functionals::unweighted_pair_gap(
            &ctx, &inst.f, &inst.g, &args, dir,
        )?],
        CheckId::Cor1Cs => functionals::cauchy_schwarz_gaps(&ctx, &inst.f, &inst.h, &args)?,
        CheckId::Cor2 => vec![functionals::linear_weight_pair_gap(
            &ctx, &inst.f, &inst.g, &args, dir,
        )?],
        CheckId::Cor3 => vec![functionals::second_moment_gap(
            &ctx, &inst.f, &inst.a, &inst.psi, &inst.x,
        )?],
        CheckId::Cor4 => vec![functionals::unit_partner_gap(
            &ctx, &inst.f, &inst.h, &args, dir,
        )?],
        CheckId::Cor4Inv => vec![functionals::unit_partner_inverse_gap(
            &ctx, &inst.f, &inst.h, &inst.a, &inst.psi, &inst.phi, &inst.x, dir,
        )?],
        CheckId::Thm22 => vec![functionals::scalarized_gap(
            &ctx,
            &inst.f,
            &inst.g,
            &inst.h,
            &args,
            inst.interval,
            dir,
        )?],
        CheckId::Cor5 => vec![functionals::scalarized_squared_gap(
            &ctx,
            &inst.f,
            &inst.h,
            &args,
            inst.interval,
            dir,
        )?],
        CheckId::Cor6 => vec![functionals::scalarized_linear_weight_gap(
            &ctx,
            &inst.f,
            &args,
            inst.interval,
            dir,
        )?],
        CheckId::Thm23 => vec![functionals::jensen_product_gap(
            &ctx,
            &inst.f,
            &inst.g,
            &inst.h,
            &args,
            inst.interval,
        )?],
        CheckId::Thm23Chain => functionals::jensen_product_chain(
            &ctx,
            &inst.f,
            &inst.g,
            &inst.h,
            &args,
            inst.interval,
        )?,
        CheckId::Remark1Pp | CheckId::Remark1Plog | CheckId::Remark1Exp => {
            let family = family_of(inst)?;
            vec![functionals::power_family_gap(&ctx, family, &args, dir)?]
        }
        CheckId::Thm11Reduction => {
            let fg = inst
                .a
                .apply_with(|t| Ok(inst.f.evaluate(t)? * inst.g.evaluate(t)?))?
                .expectation(&inst.x)?;
            let ef = inst
                .a
                .apply_with(|t| inst.f.evaluate(t))?
                .expectation(&inst.x)?;
            let eg = inst
                .a
                .apply_with(|t| inst.g.evaluate(t))?
                .expectation(&inst.x)?;
            vec![ctx.report(None, fg, eg * ef, dir)]
        }
        CheckId::Thm12Reduction => {
            let eval = |u: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
                inst.a.apply_with(u)?.expectation(&inst.x)
            };
            let h2 = eval(&|t| {
                let v = inst.h.evaluate(t)?;
                Ok(v * v)
            })?;
            let fg = eval(&|t| Ok(inst.f.evaluate(t)? * inst.g.evaluate(t)?))?;
            let hg = eval(&|t| Ok(inst.h.evaluate(t)? * inst.g.evaluate(t)?))?;
            let hf = eval(&|t| Ok(inst.h.evaluate(t)? * inst.f.evaluate(t)?))?;
            vec![ctx.report(None, h2 * fg, hg * hf, dir)]
        }
    };
    Ok(reports)
}

pub mod fixtures;
pub mod oracle;
pub mod serialization;

pub use oracle::oracle_gap;
pub use serialization::InstanceJson;

/// One retained worst case from a violation search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorstCase {
    pub violation: f64,
    pub report: GapReport,
    pub instance: InstanceJson,
}

/// Outcome of [`search_violations`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSummary {
    pub check: String,
    pub adversarial: bool,
    pub trials: u64,
    pub reports: u64,
    pub violations: u64,
    /// The 10 largest violations with fully serialized instances for replay.
    pub worst: Vec<WorstCase>,
}

/// The instance a suite evaluates at a given trial: the embedded explicit
/// instance when the config carries one, otherwise a fresh seeded draw.
/// Structural invariants are enforced except in adversarial runs, where
/// deliberately broken witnesses must replay as-is.
pub fn instance_for_trial(
    cfg: &SuiteConfig,
    trial: u64,
    adversarial: bool,
) -> Result<InequalityInstance> {
    match &cfg.instance {
        Some(json) => {
            if json.check != cfg.check {
                return Err(Error::Config(format!(
                    "embedded instance is for check {} but the suite runs {}",
                    json.check, cfg.check
                )));
            }
            let inst = json.to_instance()?;
            if !adversarial {
                inst.validate()?;
            }
            Ok(inst)
        }
        None => generate_instance(cfg, trial),
    }
}

/// Number of trials a suite actually runs: an embedded explicit instance is
/// evaluated once.
pub fn effective_trials(cfg: &SuiteConfig) -> u64 {
    if cfg.instance.is_some() {
        1
    } else {
        cfg.trials
    }
}

/// Run every trial of a suite, returning the full report stream in trial
/// order. Trials are independent (each derives its own seed), so this could
/// run concurrently; the sequential order here is already the canonical
/// sorted order.
pub fn run_suite(cfg: &SuiteConfig, adversarial: bool) -> Result<Vec<GapReport>> {
    cfg.parsed()?;
    let mut reports = Vec::with_capacity(cfg.trials as usize * 2);
    for trial in 0..effective_trials(cfg) {
        let inst = instance_for_trial(cfg, trial, adversarial)?;
        let rs = run_check(&inst, adversarial).map_err(|e| e.at_trial(trial))?;
        reports.extend(rs);
    }
    Ok(reports)
}

/// Search a suite for violating instances. Violations are data, not errors:
/// non-adversarial suites are expected to find zero, adversarial suites
/// (broken hypotheses on purpose) demonstrate that a check has teeth.
pub fn search_violations(cfg: &SuiteConfig, adversarial: bool) -> Result<SearchSummary> {
    cfg.parsed()?;
    let trials = effective_trials(cfg);
    let mut summary = SearchSummary {
        check: cfg.check.clone(),
        adversarial,
        trials,
        reports: 0,
        violations: 0,
        worst: Vec::new(),
    };
    let mut candidates: Vec<WorstCase> = Vec::new();
    for trial in 0..trials {
        let inst = instance_for_trial(cfg, trial, adversarial)?;
        let reports = run_check(&inst, adversarial).map_err(|e| e.at_trial(trial))?;
        for report in reports {
            summary.reports += 1;
            if !report.pass {
                summary.violations += 1;
                candidates.push(WorstCase {
                    violation: report.violation(),
                    report,
                    instance: InstanceJson::from_instance(&inst),
                });
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.violation
            .partial_cmp(&a.violation)
            .expect("violations are finite")
            .then(a.report.context.trial.cmp(&b.report.context.trial))
            .then(a.report.check_id.cmp(&b.report.check_id))
    });
    candidates.truncate(10);
    summary.worst = candidates;
    Ok(summary)
}
