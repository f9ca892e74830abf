//! Cross-module invariants: spectral calculus properties, order
//! preservation through positive maps, and the reduction lattice that ties
//! the general weighted-pair inequality to its special cases.

use num_complex::Complex64;
use opcheb::functionals::{self, Direction, GapContext, PairArgs};
use opcheb::linalg::{HermitianOperator, Matrix, UnitVector};
use opcheb::posmaps::PositiveUnitalMap;
use opcheb::rng::mix;
use opcheb::scalarfun::{Interval, ScalarFunction};

fn pool() -> Vec<ScalarFunction> {
    [
        "identity",
        "constant:1",
        "power:2",
        "power:1.5",
        "exp",
        "log",
        "reciprocal",
        "affine:1:0.5",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

fn weight_pool() -> Vec<ScalarFunction> {
    ["constant:1", "identity", "power:0.5", "power:2", "exp"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

#[test]
fn eigendecomposition_round_trip_across_dimensions() {
    let mut count = 0;
    for dim in 2..=16 {
        for rep in 0..7u64 {
            let seed = mix(1000 + dim as u64, rep);
            let a = HermitianOperator::random_in_interval(dim, -2.0, 3.0, seed).unwrap();
            let e = a.eig().unwrap();
            let mut recon = Matrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..dim {
                        acc += e.vectors.get(i, k) * e.vectors.get(j, k).conj() * e.values[k];
                    }
                    recon.set(i, j, acc);
                }
            }
            let res = recon.sub(&a.to_matrix()).frobenius_norm();
            assert!(
                res <= 1e-10 * a.frobenius_norm().max(1.0),
                "dim {dim} rep {rep}: residual {res}"
            );
            assert!(e.vectors.isometry_defect() <= 1e-10);
            count += 1;
        }
    }
    assert!(count >= 100);
}

#[test]
fn diagonal_functional_calculus_is_entrywise() {
    let values = [0.5, 1.25, 2.0, 0.75, 1.5];
    let a = HermitianOperator::from_diagonal(&values);
    for f in pool() {
        let fa = a.apply_with(|t| f.evaluate(t)).unwrap();
        for (i, &v) in values.iter().enumerate() {
            let expect = f.evaluate(v).unwrap();
            assert!(
                (fa.entry(i, i).re - expect).abs() <= 1e-12,
                "{f} at {v}: {} vs {expect}",
                fa.entry(i, i).re
            );
            for j in 0..values.len() {
                if i != j {
                    assert!(fa.entry(i, j).norm() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn pointwise_dominance_lifts_to_operator_order() {
    // for f >= g pointwise on the spectrum, f(A) >= g(A)
    let functions = pool();
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 200 {
        seed += 1;
        let dim = 2 + (seed % 5) as usize;
        let a = HermitianOperator::random_in_interval(dim, 0.5, 2.0, mix(7, seed)).unwrap();
        let eig = a.eig().unwrap();
        let f = &functions[(seed % functions.len() as u64) as usize];
        let g = &functions[(mix(3, seed) % functions.len() as u64) as usize];
        let dominates = eig
            .values
            .iter()
            .all(|&l| f.evaluate(l).unwrap() >= g.evaluate(l).unwrap());
        if !dominates {
            continue;
        }
        let fa = a.apply_with(|t| f.evaluate(t)).unwrap();
        let ga = a.apply_with(|t| g.evaluate(t)).unwrap();
        assert!(
            fa.is_geq(&ga, 1e-9).unwrap(),
            "seed {seed}: {f} should dominate {g}"
        );
        checked += 1;
    }
}

#[test]
fn functional_calculus_is_multiplicative() {
    // (f g)(A) agrees with f(A) g(A)
    let functions = pool();
    for seed in 0..40u64 {
        let dim = 2 + (seed % 4) as usize;
        let a = HermitianOperator::random_in_interval(dim, 0.5, 2.0, mix(11, seed)).unwrap();
        let f = &functions[(seed % functions.len() as u64) as usize];
        let g = &functions[((seed / 3) % functions.len() as u64) as usize];
        let combined = a
            .apply_with(|t| Ok(f.evaluate(t)? * g.evaluate(t)?))
            .unwrap();
        let fa = a.apply_with(|t| f.evaluate(t)).unwrap();
        let ga = a.apply_with(|t| g.evaluate(t)).unwrap();
        let product = fa.to_matrix().mul(&ga.to_matrix());
        let res = combined.to_matrix().sub(&product).frobenius_norm();
        assert!(
            res <= 1e-9 * combined.frobenius_norm().max(1.0),
            "seed {seed}: {f} * {g} residual {res}"
        );
    }
}

#[test]
fn expectations_stay_in_the_function_hull() {
    for seed in 0..50u64 {
        let dim = 2 + (seed % 6) as usize;
        let a = HermitianOperator::random_in_interval(dim, 0.5, 2.0, mix(13, seed)).unwrap();
        let x = UnitVector::random(dim, mix(17, seed));
        let eig = a.eig().unwrap();
        for f in pool() {
            let vals: Vec<f64> = eig.values.iter().map(|&l| f.evaluate(l).unwrap()).collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let e = a
                .apply_with(|t| f.evaluate(t))
                .unwrap()
                .expectation(&x)
                .unwrap();
            assert!(
                e >= lo - 1e-10 && e <= hi + 1e-10,
                "seed {seed} {f}: {e} outside [{lo}, {hi}]"
            );
        }
    }
}

#[test]
fn positive_maps_preserve_the_loewner_order() {
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 200 {
        seed += 1;
        let dim_in = 2 + (seed % 4) as usize;
        let dim_out = 2 + ((seed / 2) % 3) as usize;
        let n_kraus = 1 + (seed % 3) as usize;
        let map =
            PositiveUnitalMap::random_unital(dim_in, dim_out, n_kraus, mix(19, seed)).unwrap();
        // X = Y + (positive), so X >= Y by construction
        let y = HermitianOperator::random_in_interval(dim_in, -1.0, 1.0, mix(23, seed)).unwrap();
        let bump = HermitianOperator::random_in_interval(dim_in, 0.0, 1.5, mix(29, seed)).unwrap();
        let x = HermitianOperator::new(y.to_matrix().add(&bump.to_matrix())).unwrap();
        assert!(x.is_geq(&y, 1e-10).unwrap());
        let mx = map.apply(&x).unwrap();
        let my = map.apply(&y).unwrap();
        assert!(mx.is_geq(&my, 1e-9).unwrap(), "seed {seed}");
        checked += 1;
    }
}

#[test]
fn maps_are_linear() {
    for seed in 0..50u64 {
        let map = PositiveUnitalMap::random_unital(3, 3, 2, mix(31, seed)).unwrap();
        let x = HermitianOperator::random_in_interval(3, -1.0, 2.0, mix(37, seed)).unwrap();
        let y = HermitianOperator::random_in_interval(3, -2.0, 1.0, mix(41, seed)).unwrap();
        let alpha = 0.25 + (seed as f64) * 0.1;
        let beta = 1.75 - (seed as f64) * 0.05;
        let lin = HermitianOperator::new(
            x.to_matrix()
                .scale(Complex64::new(alpha, 0.0))
                .add(&y.to_matrix().scale(Complex64::new(beta, 0.0))),
        )
        .unwrap();
        let lhs = map.apply(&lin).unwrap();
        let rhs = map
            .apply(&x)
            .unwrap()
            .to_matrix()
            .scale(Complex64::new(alpha, 0.0))
            .add(
                &map.apply(&y)
                    .unwrap()
                    .to_matrix()
                    .scale(Complex64::new(beta, 0.0)),
            );
        let res = lhs.to_matrix().sub(&rhs).frobenius_norm();
        assert!(res <= 1e-10 * lhs.frobenius_norm().max(1.0), "seed {seed}");
    }
}

struct Setup {
    a: HermitianOperator,
    b: HermitianOperator,
    x: UnitVector,
    y: UnitVector,
    psi: PositiveUnitalMap,
    phi: PositiveUnitalMap,
}

fn random_setup(seed: u64, dim_h: usize, dim_k: usize) -> Setup {
    Setup {
        a: HermitianOperator::random_in_interval(dim_h, 0.5, 2.0, mix(seed, 1)).unwrap(),
        b: HermitianOperator::random_in_interval(dim_h, 0.5, 2.0, mix(seed, 2)).unwrap(),
        x: UnitVector::random(dim_k, mix(seed, 3)),
        y: UnitVector::random(dim_k, mix(seed, 4)),
        psi: PositiveUnitalMap::random_unital(dim_h, dim_k, 2, mix(seed, 5)).unwrap(),
        phi: PositiveUnitalMap::random_unital(dim_h, dim_k, 3, mix(seed, 6)).unwrap(),
    }
}

impl Setup {
    fn args(&self) -> PairArgs<'_> {
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

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Two reports describe the same inequality when both sides agree to the
/// stated tolerance, scaled by the side magnitudes (a raw comparison of the
/// gaps would judge rounding noise of large sides against a tiny gap).
fn sides_close(a: &functionals::GapReport, b: &functionals::GapReport, tol: f64) -> bool {
    let scale = a
        .lhs
        .abs()
        .max(a.rhs.abs())
        .max(b.lhs.abs())
        .max(b.rhs.abs())
        .max(1.0);
    (a.lhs - b.lhs).abs() <= tol * scale && (a.rhs - b.rhs).abs() <= tol * scale
}

#[test]
fn unit_weight_collapses_the_weighted_functional() {
    let one: ScalarFunction = "constant:1".parse().unwrap();
    for seed in 0..100u64 {
        let dim = 2 + (seed % 5) as usize;
        let a = HermitianOperator::random_in_interval(dim, 0.5, 2.0, mix(43, seed)).unwrap();
        let x = UnitVector::random(dim, mix(47, seed));
        let fs = pool();
        let f = &fs[(seed % fs.len() as u64) as usize];
        let g = &fs[((seed + 3) % fs.len() as u64) as usize];
        let p = functionals::pompeiu_cebysev(f, g, &one, &a, &x).unwrap();
        let c = functionals::cebysev(f, g, &a, &x).unwrap();
        assert!(close(p, c, 1e-12), "seed {seed}: {p} vs {c}");
    }
}

#[test]
fn same_operator_identity_maps_double_the_weighted_functional() {
    let ctx = GapContext::new("reduction");
    for seed in 0..100u64 {
        let dim = 2 + (seed % 5) as usize;
        let a = HermitianOperator::random_in_interval(dim, 0.5, 2.0, mix(53, seed)).unwrap();
        let x = UnitVector::random(dim, mix(59, seed));
        let ident = PositiveUnitalMap::identity(dim);
        let fs = pool();
        let ws = weight_pool();
        let f = &fs[(seed % fs.len() as u64) as usize];
        let g = &fs[((seed + 5) % fs.len() as u64) as usize];
        let h = &ws[(seed % ws.len() as u64) as usize];
        let r = functionals::weighted_pair_same_operator_gap(
            &ctx,
            f,
            g,
            h,
            &a,
            &ident,
            &ident,
            &x,
            &x,
            Direction::Geq,
        )
        .unwrap();
        let p = functionals::pompeiu_cebysev(f, g, h, &a, &x).unwrap();
        assert!(
            close(r.gap, 2.0 * p, 1e-12),
            "seed {seed}: gap {} vs 2*{p}",
            r.gap
        );
    }
}

#[test]
fn corollaries_equal_their_restricted_parents() {
    let one: ScalarFunction = "constant:1".parse().unwrap();
    let t: ScalarFunction = "identity".parse().unwrap();
    let ctx = GapContext::new("restriction");
    for seed in 0..60u64 {
        let s = random_setup(mix(61, seed), 3, 3);
        let args = s.args();
        let fs = pool();
        let ws = weight_pool();
        let f = &fs[(seed % fs.len() as u64) as usize];
        let g = &fs[((seed + 2) % fs.len() as u64) as usize];
        let h = &ws[(seed % ws.len() as u64) as usize];

        // unweighted pair = weighted pair at h = 1
        let direct = functionals::unweighted_pair_gap(&ctx, f, g, &args, Direction::Geq).unwrap();
        let parent =
            functionals::weighted_pair_gap(&ctx, f, g, &one, &args, Direction::Geq).unwrap();
        assert!(sides_close(&direct, &parent, 1e-12), "h=1 seed {seed}");

        // linear-weight pair = weighted pair at h = t
        let direct =
            functionals::linear_weight_pair_gap(&ctx, f, g, &args, Direction::Geq).unwrap();
        let parent = functionals::weighted_pair_gap(&ctx, f, g, &t, &args, Direction::Geq).unwrap();
        assert!(sides_close(&direct, &parent, 1e-12), "h=t seed {seed}");

        // unit partner = weighted pair at g = 1
        let direct = functionals::unit_partner_gap(&ctx, f, h, &args, Direction::Geq).unwrap();
        let parent =
            functionals::weighted_pair_gap(&ctx, f, &one, h, &args, Direction::Geq).unwrap();
        assert!(sides_close(&direct, &parent, 1e-12), "g=1 seed {seed}");

        // second moment = squared Cauchy-Schwarz at h = t
        let direct =
            functionals::second_moment_gap(&ctx, f, s.args().a, s.args().psi, s.args().x).unwrap();
        let cs = functionals::cauchy_schwarz_gaps(&ctx, f, &t, &args).unwrap();
        assert!(sides_close(&direct, &cs[1], 1e-12), "cs seed {seed}");

        // scalarized squared = scalarized at g = f
        let interval = Interval::new(0.5, 2.0).unwrap();
        let direct =
            functionals::scalarized_squared_gap(&ctx, f, h, &args, interval, Direction::Geq)
                .unwrap();
        let parent =
            functionals::scalarized_gap(&ctx, f, f, h, &args, interval, Direction::Geq).unwrap();
        assert!(sides_close(&direct, &parent, 1e-12), "f=g seed {seed}");

        // scalarized linear weight = scalarized squared at h = t
        let direct =
            functionals::scalarized_linear_weight_gap(&ctx, f, &args, interval, Direction::Geq)
                .unwrap();
        let parent =
            functionals::scalarized_squared_gap(&ctx, f, &t, &args, interval, Direction::Geq)
                .unwrap();
        assert!(
            sides_close(&direct, &parent, 1e-12),
            "h=t squared seed {seed}"
        );
    }
}

#[test]
fn shared_operators_are_safe_across_threads() {
    // the eigendecomposition cache fills idempotently under concurrent use
    let a = std::sync::Arc::new(HermitianOperator::random_in_interval(8, -1.0, 1.0, 4242).unwrap());
    let handles: Vec<_> = (0..8)
        .map(|k| {
            let op = a.clone();
            std::thread::spawn(move || {
                let x = UnitVector::random(8, k);
                let sq = op.apply_with(|t| Ok(t * t)).unwrap();
                sq.expectation(&x).unwrap()
            })
        })
        .collect();
    let values: Vec<f64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    let (lo, hi) = a.spectrum_bounds().unwrap();
    let bound = lo.abs().max(hi.abs()).powi(2);
    for v in values {
        assert!(v >= -1e-12 && v <= bound + 1e-9);
    }
}

#[test]
fn cauchy_schwarz_is_unconditional() {
    // every catalog function against every non-negative weight, no
    // synchronicity precondition
    let ctx = GapContext::new("cs-unconditional");
    for seed in 0..30u64 {
        let s = random_setup(mix(67, seed), 3, 2);
        let args = s.args();
        for f in pool() {
            for h in weight_pool() {
                let reports = functionals::cauchy_schwarz_gaps(&ctx, &f, &h, &args).unwrap();
                for r in &reports {
                    assert!(
                        r.gap >= -1e-9 * r.lhs.abs().max(r.rhs.abs()).max(1.0),
                        "seed {seed} f={f} h={h}: {r:?}"
                    );
                }
            }
        }
    }
}
