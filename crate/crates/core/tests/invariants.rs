//! Cross-module invariants that no single unit suite can see: the orbit
//! sampler against an independent matrix-conjugation oracle, closed-form
//! conditional averages against the spectral density laws, and ordering
//! facts tying the two mixing rules together.

use qmix_core::matrix::{C64, Mat2};
use qmix_core::{
    binary_entropy, cond_avg_entropy_equi, cond_avg_entropy_qadd, distance_equi, distance_qadd,
    entropy_phi, integrate, ks_one_sample, ks_threshold, matrix_to_bloch, mix_weighted,
    qjsd_equi, qjsd_qadd, quantum_add_bloch, DensityKind, DensityMatrix2, OrbitSpec,
    QuadratureConfig, SeededSampler, TripleMode,
};

/// Standard normal via Box-Muller; consumes two uniforms.
fn normal_pair(s: &mut SeededSampler) -> (f64, f64) {
    let u = s.uniform().max(f64::MIN_POSITIVE);
    let v = s.uniform();
    let r = (-2.0 * u.ln()).sqrt();
    let t = std::f64::consts::TAU * v;
    (r * t.cos(), r * t.sin())
}

/// Haar-random SU(2) element from a normalized Gaussian quaternion.
fn haar_su2(s: &mut SeededSampler) -> Mat2 {
    let (a, b) = normal_pair(s);
    let (c, d) = normal_pair(s);
    let n = (a * a + b * b + c * c + d * d).sqrt();
    let (a, b, c, d) = (a / n, b / n, c / n, d / n);
    Mat2([
        [C64::new(a, b), C64::new(c, d)],
        [C64::new(-c, d), C64::new(a, -b)],
    ])
}

/// The orbit sampler draws a uniform direction at the orbit radius. The
/// oracle here instead conjugates diag(1 - mu, mu) by a Haar-random
/// unitary and reads the Bloch vector back off the matrix; both routes
/// must give radius 1 - 2 mu exactly and a uniform z / (1 - 2 mu).
#[test]
fn orbit_sampler_matches_haar_conjugation() {
    const N: usize = 100_000;
    let mu = 0.15;
    let radius = 1.0 - 2.0 * mu;
    let spectrum = Mat2([
        [C64::new(1.0 - mu, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(mu, 0.0)],
    ]);
    // uniform direction <=> z uniform on [-radius, radius]
    let z_cdf = |z: f64| (z / radius + 1.0) / 2.0;

    let mut s = SeededSampler::new(41);
    let mut oracle_z = Vec::with_capacity(N);
    for _ in 0..N {
        let u = haar_su2(&mut s);
        let rho = DensityMatrix2::from_matrix(u.mul(&spectrum).mul(&u.adjoint()))
            .expect("conjugation preserves the state");
        let (hi, lo) = rho.eigenvalues();
        assert!((hi - (1.0 - mu)).abs() < 1e-12 && (lo - mu).abs() < 1e-12);
        let v = matrix_to_bloch(&rho);
        assert!((v.length() - radius).abs() < 1e-12);
        oracle_z.push(v.z());
    }
    oracle_z.sort_by(f64::total_cmp);
    let d_oracle = ks_one_sample(&oracle_z, z_cdf).unwrap();

    let orbit = OrbitSpec::new(mu).unwrap();
    let mut t = SeededSampler::new(42);
    let mut sampler_z: Vec<f64> = (0..N)
        .map(|_| {
            let v = t.sample_orbit(orbit);
            assert!((v.length() - radius).abs() < 1e-12);
            v.z()
        })
        .collect();
    sampler_z.sort_by(f64::total_cmp);
    let d_sampler = ks_one_sample(&sampler_z, z_cdf).unwrap();

    let threshold = ks_threshold(N);
    assert!(
        d_oracle < threshold && d_sampler < threshold,
        "KS oracle {d_oracle:.5}, sampler {d_sampler:.5}, threshold {threshold:.5}"
    );
}

/// Expected output entropy computed by integrating Phi against the radius
/// law (and binary entropy against the eigenvalue law) must match the
/// closed-form conditional averages. Ties densities, quadrature and the
/// entropy formulas to one convention.
#[test]
fn conditional_averages_match_density_laws() {
    let cfg = QuadratureConfig::default();
    let qcfg = QuadratureConfig::with_tols(1e-10, 1e-10);
    let expect_under = |kind: DensityKind, weight: &dyn Fn(f64) -> f64| -> f64 {
        kind.support()
            .unwrap()
            .intervals()
            .iter()
            .map(|iv| {
                integrate(|x| weight(x) * kind.pdf(x).unwrap(), iv.lo, iv.hi, &cfg)
                    .unwrap()
                    .value
            })
            .sum()
    };
    let phi = |r: f64| entropy_phi(r).unwrap().bits();
    for (r1, r2) in [(0.9, 0.4), (1.0 / 3.0, 2.0 / 3.0), (0.7, 0.7)] {
        let equi = cond_avg_entropy_equi(r1, r2).unwrap();
        let via_radius = expect_under(DensityKind::REqui { r1, r2 }, &phi);
        let (mu, nu) = (0.5 * (1.0 - r1), 0.5 * (1.0 - r2));
        let via_lambda = expect_under(DensityKind::LambdaEqui { mu, nu }, &|x| binary_entropy(x));
        assert!(
            (via_radius - equi).abs() < 1e-8 && (via_lambda - equi).abs() < 1e-8,
            "equi ({r1}, {r2}): closed form {equi}, radius law {via_radius}, eigenvalue law {via_lambda}"
        );

        let qadd = cond_avg_entropy_qadd(r1, r2, &qcfg).unwrap();
        let via_radius = expect_under(DensityKind::RQadd { r1, r2 }, &phi);
        let via_lambda = expect_under(DensityKind::LambdaQadd { mu, nu }, &|x| binary_entropy(x));
        assert!(
            (via_radius - qadd).abs() < 1e-7 && (via_lambda - qadd).abs() < 1e-7,
            "qadd ({r1}, {r2}): conditional {qadd}, radius law {via_radius}, eigenvalue law {via_lambda}"
        );
    }
}

/// The distance built on the equiprobable mixture is conjectured to obey
/// the triangle inequality; this is a soft numerical check, not a proof.
/// All apex choices over 10^5 random triples per mode must come out
/// nonnegative to rounding.
#[test]
fn equi_distance_triangle_holds_on_random_triples() {
    for (mode, seed) in [(TripleMode::Pure, 43u64), (TripleMode::Mixed, 44u64)] {
        let mut s = SeededSampler::new(seed);
        let mut worst = f64::INFINITY;
        for _ in 0..100_000 {
            let mut one = || match mode {
                TripleMode::Pure => s.sample_direction(),
                TripleMode::Mixed => s.sample_hs_state(),
            };
            let (a, b, c) = (one(), one(), one());
            let d = [
                distance_equi(&a, &b),
                distance_equi(&a, &c),
                distance_equi(&b, &c),
            ];
            for apex in 0..3 {
                let sum: f64 = (0..3).filter(|&k| k != apex).map(|k| d[k]).sum();
                worst = worst.min(sum - d[apex]);
            }
        }
        assert!(
            worst >= -1e-12,
            "triangle deficit {worst:.3e} for {mode:?} triples"
        );
    }
}

/// The cross term can only lengthen the output, so the quantum mixture is
/// never more mixed than the classical one; the divergences inherit the
/// same ordering and both stay nonnegative.
#[test]
fn quantum_mixture_never_less_pure() {
    let mut s = SeededSampler::new(45);
    for _ in 0..100_000 {
        let a = s.sample_hs_state();
        let b = s.sample_hs_state();
        let w = s.uniform();
        let classical = mix_weighted(&a, &b, w).unwrap();
        let quantum = quantum_add_bloch(&a, &b, w).unwrap();
        assert!(quantum.length() >= classical.length() - 1e-12);
        let j = qjsd_equi(&a, &b);
        let jq = qjsd_qadd(&a, &b);
        assert!(j >= jq && jq >= -1e-12, "J {j}, J_quantum {jq}");
        assert!(distance_equi(&a, &b) >= distance_qadd(&a, &b));
    }
}
