//! Bundled suite configurations: one per check id, each encoding a verified
//! claim about a concrete function triple, plus a deterministic
//! worked-example fixture and one deliberately broken configuration for
//! adversarial runs.
//!
//! The function parameters are chosen so the grid oracle confirms the
//! claimed direction; in particular the power-log family uses the range
//! `r < p < 0`, which is the side the defect factorization actually
//! supports.

use num_complex::Complex64;

use super::{CheckId, InequalityInstance, InstanceJson, SuiteConfig};
use crate::functionals::Direction;
use crate::linalg::{HermitianOperator, UnitVector};
use crate::posmaps::PositiveUnitalMap;
use crate::scalarfun::Interval;

/// A named, bundled suite configuration.
#[derive(Debug, Clone)]
pub struct Fixture {
    /// File stem used when the set is written to a directory.
    pub name: &'static str,
    pub config: SuiteConfig,
}

fn claim(
    name: &'static str,
    check: CheckId,
    setup: impl FnOnce(&mut SuiteConfig),
    comment: &str,
    seed: u64,
) -> Fixture {
    let mut config = SuiteConfig::new(check);
    config.dim_h = 4;
    config.dim_k = 3;
    config.map_psi = "kraus:2".into();
    config.map_phi = "kraus:3".into();
    config.trials = 200;
    config.seed = seed;
    setup(&mut config);
    config.comment = Some(comment.to_string());
    Fixture { name, config }
}

/// The deterministic worked example: `A = diag(1, 2)`, `x = (1,1)/sqrt(2)`,
/// identity maps, unit weight, identity pair. Its gap is exactly `0.5`.
pub fn worked_example_instance() -> InequalityInstance {
    let a = HermitianOperator::from_diagonal(&[1.0, 2.0]);
    let x = UnitVector::normalized(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)])
        .expect("nonzero");
    InequalityInstance {
        check: CheckId::Thm21,
        a: a.clone(),
        b: a,
        x: x.clone(),
        y: x,
        psi: PositiveUnitalMap::identity(2),
        phi: PositiveUnitalMap::identity(2),
        f: "identity".parse().expect("catalog literal"),
        g: "identity".parse().expect("catalog literal"),
        h: "constant:1".parse().expect("catalog literal"),
        interval: Interval::new(1.0, 2.0).expect("valid interval"),
        direction: Direction::Geq,
        seed: 0,
        trial: 0,
        tol: 1e-9,
    }
}

/// The full bundled fixture set: one verified claim per check id, the
/// deterministic smoke fixture, and an asynchronous configuration meant for
/// `--adversarial` runs (without the flag it is rejected as a hypothesis
/// violation).
pub fn bundled_fixtures() -> Vec<Fixture> {
    let mut fixtures = vec![
        claim(
            "thm21",
            CheckId::Thm21,
            |c| {
                c.f = "power:2".into();
                c.g = "power:1.5".into();
                c.h = "power:1".into();
            },
            "two-map weighted product inequality; (t^2, t^1.5) is t-synchronous on [1,2] since both exponents exceed the weight's",
            101,
        ),
        claim(
            "thm21_same",
            CheckId::Thm21Same,
            |c| {
                c.f = "power:3".into();
                c.g = "power:2".into();
                c.h = "power:1".into();
            },
            "single-operator form of the weighted product inequality with a synchronous power pair",
            102,
        ),
        claim(
            "cor_h1",
            CheckId::CorH1,
            |c| {
                c.f = "exp".into();
                c.g = "identity".into();
                c.h = "constant:1".into();
                c.interval = [0.5, 2.0];
            },
            "unweighted pair inequality; exp and the identity are both increasing, hence synchronous",
            103,
        ),
        claim(
            "cor1_cs",
            CheckId::Cor1Cs,
            |c| {
                c.f = "log".into();
                c.h = "power:0.5".into();
            },
            "Cauchy-Schwarz forms; unconditional for any f and non-negative weight",
            104,
        ),
        claim(
            "cor2",
            CheckId::Cor2,
            |c| {
                c.f = "exp".into();
                c.g = "power:2".into();
            },
            "identity-weight pair inequality; exp and t^2 are both t-increasing on [1,2]",
            105,
        ),
        claim(
            "cor3",
            CheckId::Cor3,
            |c| {
                c.f = "power:2".into();
                c.interval = [0.5, 2.0];
            },
            "second-moment Cauchy-Schwarz form on one side; a function pairs synchronously with itself",
            106,
        ),
        claim(
            "cor4",
            CheckId::Cor4,
            |c| {
                c.f = "reciprocal".into();
                c.h = "power:1".into();
            },
            "unit-partner inequality; (1/t, 1) is t-synchronous because 1/t is t-decreasing",
            107,
        ),
        claim(
            "cor4_inv",
            CheckId::Cor4Inv,
            |c| {
                c.f = "reciprocal".into();
                c.h = "power:1".into();
                c.interval = [0.5, 2.0];
            },
            "unit-partner inequality with the inverse operator; [0.5, 2] is closed under inversion",
            108,
        ),
        claim(
            "thm22",
            CheckId::Thm22,
            |c| {
                c.f = "power:2".into();
                c.g = "power:1.5".into();
                c.h = "power:1".into();
            },
            "scalarized inequality at the mapped mean with a synchronous power pair",
            109,
        ),
        claim(
            "cor5",
            CheckId::Cor5,
            |c| {
                c.f = "log".into();
                c.h = "power:0.5".into();
                c.interval = [1.5, 3.0];
            },
            "scalarized squared inequality; self-pair, any non-negative weight",
            110,
        ),
        claim(
            "cor6",
            CheckId::Cor6,
            |c| {
                c.f = "exp".into();
            },
            "scalarized squared inequality with the identity weight on a positive interval",
            111,
        ),
        claim(
            "thm23",
            CheckId::Thm23,
            |c| {
                c.f = "exp".into();
                c.g = "power:2".into();
                c.h = "power:1".into();
            },
            "Jensen product inequality endpoints; exp and t^2 are positive, convex and t-synchronous on [1,2]",
            112,
        ),
        claim(
            "thm23_chain",
            CheckId::Thm23Chain,
            |c| {
                c.f = "exp".into();
                c.g = "power:2".into();
                c.h = "power:1".into();
            },
            "Jensen product chain, one report per adjacent comparison",
            113,
        ),
        claim(
            "remark1_pp",
            CheckId::Remark1Pp,
            |c| {
                c.f = "power:2".into();
                c.g = "power:1.5".into();
                c.h = "power:1".into();
            },
            "power-power family with p, q > r > 0 (synchronous side)",
            114,
        ),
        claim(
            "remark1_plog",
            CheckId::Remark1Plog,
            |c| {
                c.f = "power:-1".into();
                c.g = "log".into();
                c.h = "power:-2".into();
                c.interval = [1.5, 3.0];
            },
            "power-log family with r < p < 0, the synchronous side per the defect factorization (the reversed ranges do not hold)",
            115,
        ),
        claim(
            "remark1_exp",
            CheckId::Remark1Exp,
            |c| {
                c.f = "exp".into();
                c.g = "exp".into();
                c.h = "power:0.5".into();
            },
            "exponential self-pair family, synchronous for every weight exponent",
            116,
        ),
        claim(
            "thm11_reduction",
            CheckId::Thm11Reduction,
            |c| {
                c.f = "exp".into();
                c.g = "identity".into();
                c.h = "constant:1".into();
                c.interval = [0.5, 2.0];
                c.dim_k = 4;
                c.map_psi = "identity".into();
                c.map_phi = "identity".into();
            },
            "map-free synchronous pair inequality on vector states",
            117,
        ),
        claim(
            "thm12_reduction",
            CheckId::Thm12Reduction,
            |c| {
                c.f = "power:3".into();
                c.g = "power:2".into();
                c.h = "power:1".into();
                c.dim_k = 4;
                c.map_psi = "identity".into();
                c.map_phi = "identity".into();
            },
            "map-free weighted functional positivity for a synchronous pair",
            118,
        ),
    ];

    // deterministic smoke fixture: the worked example, gap exactly 0.5
    let mut smoke = SuiteConfig::new(CheckId::Thm21);
    smoke.dim_h = 2;
    smoke.dim_k = 2;
    smoke.trials = 1;
    smoke.instance = Some(InstanceJson::from_instance(&worked_example_instance()));
    smoke.comment = Some(
        "explicit worked example diag(1,2) with x = (1,1)/sqrt(2); the gap is exactly 0.5".into(),
    );
    fixtures.push(Fixture {
        name: "thm21_smoke",
        config: smoke,
    });

    // asynchronous pair requested in the synchronous direction: rejected in
    // strict runs, finds violations under --adversarial
    let mut async_cfg = SuiteConfig::new(CheckId::Thm21);
    async_cfg.dim_h = 4;
    async_cfg.dim_k = 3;
    async_cfg.map_psi = "kraus:2".into();
    async_cfg.map_phi = "kraus:2".into();
    async_cfg.f = "constant:1".into();
    async_cfg.g = "identity".into();
    async_cfg.h = "power:0.5".into();
    async_cfg.trials = 200;
    async_cfg.seed = 999;
    async_cfg.direction = Direction::Geq;
    async_cfg.comment = Some(
        "(1, t) is asynchronous against the sqrt weight; run with --adversarial to mine violations"
            .into(),
    );
    fixtures.push(Fixture {
        name: "thm21_async",
        config: async_cfg,
    });

    fixtures
}

#[cfg(test)]
mod tests {
    use super::super::{run_suite, search_violations};
    use super::*;

    #[test]
    fn fixture_set_covers_every_check() {
        let fixtures = bundled_fixtures();
        assert!(fixtures.len() >= 18);
        for id in CheckId::ALL {
            assert!(
                fixtures.iter().any(|f| f.config.check == id.as_str()),
                "missing fixture for {id}"
            );
        }
        // names are unique
        let mut names: Vec<_> = fixtures.iter().map(|f| f.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), fixtures.len());
    }

    #[test]
    fn smoke_fixture_reproduces_the_worked_gap() {
        let fixtures = bundled_fixtures();
        let smoke = fixtures.iter().find(|f| f.name == "thm21_smoke").unwrap();
        let reports = run_suite(&smoke.config, false).unwrap();
        assert_eq!(reports.len(), 1);
        assert!((reports[0].gap - 0.5).abs() < 1e-12);
        assert!(reports[0].pass);
    }

    #[test]
    fn async_fixture_is_rejected_without_the_flag() {
        let fixtures = bundled_fixtures();
        let bad = fixtures.iter().find(|f| f.name == "thm21_async").unwrap();
        assert!(run_suite(&bad.config, false).is_err());
        let mut quick = bad.config.clone();
        quick.trials = 40;
        let summary = search_violations(&quick, true).unwrap();
        assert!(summary.violations > 0);
    }
}
