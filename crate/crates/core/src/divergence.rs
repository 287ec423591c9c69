//! Jensen-Shannon style divergences for qubit states, the candidate
//! distances they induce, and the randomized triangle-inequality search.
//!
//! Two divergences are compared: one built on the equiprobable mixture
//! and one on the quantum mixture at even weight. The square root of the
//! first is conjectured to be a metric; the square root of the second is
//! not, and `violation_search` hunts for concrete triangle violations.

use serde::Serialize;

use crate::bloch::{phi_unchecked, BlochVector};
use crate::ensembles::SeededSampler;
use crate::error::{Error, Result};
use crate::mixing::{mix_weighted, quantum_add_bloch};

/// Divergence from the equiprobable mixture:
/// S((a + b)/2) - (S(a) + S(b))/2, in bits.
pub fn qjsd_equi(a: &BlochVector, b: &BlochVector) -> f64 {
    let mid = mix_weighted(a, b, 0.5).expect("even weight is valid");
    phi_unchecked(mid.length()) - 0.5 * (phi_unchecked(a.length()) + phi_unchecked(b.length()))
}

/// Divergence from the quantum mixture at even weight, in bits. Never
/// exceeds `qjsd_equi` because the cross term only lengthens the output.
pub fn qjsd_qadd(a: &BlochVector, b: &BlochVector) -> f64 {
    let mid = quantum_add_bloch(a, b, 0.5).expect("even weight is valid");
    phi_unchecked(mid.length()) - 0.5 * (phi_unchecked(a.length()) + phi_unchecked(b.length()))
}

/// sqrt of `qjsd_equi`, clamped at zero against fp noise.
pub fn distance_equi(a: &BlochVector, b: &BlochVector) -> f64 {
    qjsd_equi(a, b).max(0.0).sqrt()
}

/// sqrt of `qjsd_qadd`, clamped at zero against fp noise.
pub fn distance_qadd(a: &BlochVector, b: &BlochVector) -> f64 {
    qjsd_qadd(a, b).max(0.0).sqrt()
}

/// Triangle deficits of the quantum-mixture distance with `a` as apex:
/// (d(a,b) + d(a,c) - d(b,c), same with squared distances).
/// Negative values witness a triangle-inequality violation.
pub fn triangle_deficits(a: &BlochVector, b: &BlochVector, c: &BlochVector) -> (f64, f64) {
    let d_ab = distance_qadd(a, b);
    let d_ac = distance_qadd(a, c);
    let d_bc = distance_qadd(b, c);
    (
        d_ab + d_ac - d_bc,
        d_ab * d_ab + d_ac * d_ac - d_bc * d_bc,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleMode {
    /// Unit Bloch vectors.
    Pure,
    /// Hilbert-Schmidt random states.
    Mixed,
}

/// One violating triple found by the search. `deficit` is the minimum of
/// the distance deficit over the three apex choices (`deficit_apex` says
/// which); `squared_deficit` likewise for squared distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleReport {
    pub vectors: [[f64; 3]; 3],
    pub deficit: f64,
    pub deficit_apex: u8,
    pub squared_deficit: f64,
    pub squared_deficit_apex: u8,
    pub pure_flags: [bool; 3],
    pub seed: u64,
    pub draw_index: u64,
}

/// Outcome of a violation search over `n_triples` random triples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub mode: TripleMode,
    pub seed: u64,
    pub n_triples: u64,
    /// Triples with deficit < 0.
    pub distance_violations: u64,
    /// Triples with squared deficit < 0.
    pub squared_violations: u64,
    /// Every triple violating either inequality, sorted by draw index.
    pub reports: Vec<TripleReport>,
}

fn min_with_apex(values: [f64; 3]) -> (f64, u8) {
    let mut best = (values[0], 0u8);
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < best.0 {
            best = (v, i as u8);
        }
    }
    best
}

fn examine_triple(vs: &[BlochVector; 3], seed: u64, draw_index: u64) -> Option<TripleReport> {
    let d = [
        distance_qadd(&vs[0], &vs[1]),
        distance_qadd(&vs[0], &vs[2]),
        distance_qadd(&vs[1], &vs[2]),
    ];
    // apex k pairs the two distances touching vertex k
    let deficits = [
        d[0] + d[1] - d[2],
        d[0] + d[2] - d[1],
        d[1] + d[2] - d[0],
    ];
    let squares = [
        d[0] * d[0] + d[1] * d[1] - d[2] * d[2],
        d[0] * d[0] + d[2] * d[2] - d[1] * d[1],
        d[1] * d[1] + d[2] * d[2] - d[0] * d[0],
    ];
    let (deficit, deficit_apex) = min_with_apex(deficits);
    let (squared_deficit, squared_deficit_apex) = min_with_apex(squares);
    if deficit >= 0.0 && squared_deficit >= 0.0 {
        return None;
    }
    Some(TripleReport {
        vectors: [vs[0].components(), vs[1].components(), vs[2].components()],
        deficit,
        deficit_apex,
        squared_deficit,
        squared_deficit_apex,
        pure_flags: [
            (vs[0].length() - 1.0).abs() < 1e-9,
            (vs[1].length() - 1.0).abs() < 1e-9,
            (vs[2].length() - 1.0).abs() < 1e-9,
        ],
        seed,
        draw_index,
    })
}

fn draw_triple(stream: &mut SeededSampler, mode: TripleMode) -> [BlochVector; 3] {
    let mut one = || match mode {
        TripleMode::Pure => stream.sample_direction(),
        TripleMode::Mixed => stream.sample_hs_state(),
    };
    [one(), one(), one()]
}

/// Scans `n_triples` random triples for triangle violations of the
/// quantum-mixture distance and its square.
///
/// Triple i is drawn from substream i of `sampler`, so the outcome is a
/// pure function of the sampler identity and `n_triples`; `workers` only
/// splits the index range.
pub fn violation_search(
    mode: TripleMode,
    n_triples: u64,
    sampler: &SeededSampler,
    workers: usize,
) -> Result<ViolationReport> {
    if n_triples == 0 {
        return Err(Error::contract("violation search needs at least one triple"));
    }
    if workers == 0 {
        return Err(Error::contract("need at least one worker"));
    }
    let seed = sampler.seed();
    let workers = workers.min(n_triples as usize);
    let share = n_triples / workers as u64;
    let extra = n_triples % workers as u64;
    // contiguous index ranges, first `extra` workers take one more
    let mut starts = Vec::with_capacity(workers + 1);
    let mut at = 0u64;
    for i in 0..workers {
        starts.push(at);
        at += share + u64::from((i as u64) < extra);
    }
    starts.push(at);

    let per_worker: Vec<(u64, u64, Vec<TripleReport>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let range = starts[w]..starts[w + 1];
                let sampler = &sampler;
                scope.spawn(move || {
                    let mut dist = 0u64;
                    let mut sq = 0u64;
                    let mut found = Vec::new();
                    for i in range {
                        let mut stream = sampler.substream(i);
                        let vs = draw_triple(&mut stream, mode);
                        if let Some(report) = examine_triple(&vs, seed, i) {
                            dist += u64::from(report.deficit < 0.0);
                            sq += u64::from(report.squared_deficit < 0.0);
                            found.push(report);
                        }
                    }
                    (dist, sq, found)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });

    let mut report = ViolationReport {
        mode,
        seed,
        n_triples,
        distance_violations: 0,
        squared_violations: 0,
        reports: Vec::new(),
    };
    for (dist, sq, found) in per_worker {
        report.distance_violations += dist;
        report.squared_violations += sq;
        report.reports.extend(found);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(x: f64, y: f64, z: f64) -> BlochVector {
        let n = (x * x + y * y + z * z).sqrt();
        BlochVector::new(x / n, y / n, z / n).unwrap()
    }

    /// Rodrigues rotation about `axis` by `angle`.
    fn rotate(v: &BlochVector, axis: &BlochVector, angle: f64) -> BlochVector {
        let (sin, cos) = angle.sin_cos();
        let k = axis.components();
        let p = v.components();
        let kxp = axis.cross(v);
        let kdp = axis.dot(v);
        BlochVector::new(
            p[0] * cos + kxp[0] * sin + k[0] * kdp * (1.0 - cos),
            p[1] * cos + kxp[1] * sin + k[1] * kdp * (1.0 - cos),
            p[2] * cos + kxp[2] * sin + k[2] * kdp * (1.0 - cos),
        )
        .unwrap()
    }

    fn known_violating_triple() -> [BlochVector; 3] {
        [
            BlochVector::new(0.594637, -0.562167, -0.402354).unwrap(),
            BlochVector::new(0.246183, -0.755573, 0.593725).unwrap(),
            BlochVector::new(0.190508, -0.0792096, -0.855743).unwrap(),
        ]
    }

    #[test]
    fn identical_states_have_zero_divergence() {
        let v = BlochVector::new(0.3, -0.2, 0.4).unwrap();
        assert_eq!(qjsd_equi(&v, &v), 0.0);
        assert!(qjsd_qadd(&v, &v).abs() < 1e-15);
        assert_eq!(distance_equi(&v, &v), 0.0);
    }

    #[test]
    fn antipodal_pure_states_score_one_bit() {
        let up = BlochVector::new(0.0, 0.0, 1.0).unwrap();
        let down = BlochVector::new(0.0, 0.0, -1.0).unwrap();
        assert!((qjsd_equi(&up, &down) - 1.0).abs() < 1e-15);
        assert!((qjsd_qadd(&up, &down) - 1.0).abs() < 1e-15);
        assert!((distance_equi(&up, &down) - 1.0).abs() < 1e-15);
        assert!((distance_qadd(&up, &down) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parallel_states_make_the_rules_coincide() {
        let a = unit(1.0, 2.0, -1.0).scale(0.8);
        let b = unit(1.0, 2.0, -1.0).scale(0.3);
        assert!((qjsd_qadd(&a, &b) - qjsd_equi(&a, &b)).abs() < 1e-15);
    }

    #[test]
    fn quantum_divergence_is_a_lower_bound() {
        let mut s = SeededSampler::new(41);
        for _ in 0..10_000 {
            let a = s.sample_hs_state();
            let b = s.sample_hs_state();
            let j = qjsd_equi(&a, &b);
            let jq = qjsd_qadd(&a, &b);
            assert!(j >= jq - 1e-12, "ordering failed: {j} < {jq}");
            assert!(jq >= -1e-12, "negative divergence {jq}");
            assert!(distance_equi(&a, &b) >= distance_qadd(&a, &b) - 1e-12);
        }
    }

    #[test]
    fn divergences_are_symmetric_and_rotation_invariant() {
        let mut s = SeededSampler::new(42);
        let axis = unit(0.3, -1.0, 0.7);
        for _ in 0..1_000 {
            let a = s.sample_hs_state();
            let b = s.sample_hs_state();
            assert!((qjsd_equi(&a, &b) - qjsd_equi(&b, &a)).abs() < 1e-12);
            assert!((qjsd_qadd(&a, &b) - qjsd_qadd(&b, &a)).abs() < 1e-12);
            let (ra, rb) = (rotate(&a, &axis, 1.234), rotate(&b, &axis, 1.234));
            assert!((qjsd_equi(&ra, &rb) - qjsd_equi(&a, &b)).abs() < 1e-12);
            assert!((qjsd_qadd(&ra, &rb) - qjsd_qadd(&a, &b)).abs() < 1e-12);
        }
    }

    #[test]
    fn counterexample_triple_breaks_the_triangle_inequality() {
        let [a, b, c] = known_violating_triple();
        let (deficit, squared) = triangle_deficits(&a, &b, &c);
        assert!(
            (deficit - (-0.08208160753448923)).abs() < 1e-12,
            "deficit {deficit}"
        );
        assert!((deficit - (-0.0820814)).abs() < 1e-6);
        assert!(squared < 0.1, "squared deficit unexpectedly large");
    }

    #[test]
    fn degenerate_triples() {
        let a = BlochVector::new(0.1, 0.5, -0.2).unwrap();
        let b = BlochVector::new(-0.3, 0.0, 0.6).unwrap();
        let (d, dsq) = triangle_deficits(&a, &a, &a);
        assert_eq!((d, dsq), (0.0, 0.0));
        let (d, dsq) = triangle_deficits(&a, &b, &b);
        assert!((d - 2.0 * distance_qadd(&a, &b)).abs() < 1e-15);
        assert!(d >= 0.0 && dsq >= 0.0);
    }

    #[test]
    fn search_finds_violations_in_both_modes() {
        let sampler = SeededSampler::new(4242);
        for mode in [TripleMode::Pure, TripleMode::Mixed] {
            let out = violation_search(mode, 10_000, &sampler, 2).unwrap();
            assert!(out.distance_violations >= 1, "{mode:?}: no distance violation");
            assert!(out.squared_violations >= 1, "{mode:?}: no squared violation");
            for report in out.reports.iter().take(25) {
                let vs: Vec<BlochVector> = report
                    .vectors
                    .iter()
                    .map(|v| BlochVector::new(v[0], v[1], v[2]).unwrap())
                    .collect();
                let apex = report.deficit_apex as usize;
                let others: Vec<usize> = (0..3).filter(|&k| k != apex).collect();
                let recomputed = distance_qadd(&vs[apex], &vs[others[0]])
                    + distance_qadd(&vs[apex], &vs[others[1]])
                    - distance_qadd(&vs[others[0]], &vs[others[1]]);
                assert!(
                    (recomputed - report.deficit).abs() < 1e-12,
                    "stored deficit does not recompute"
                );
                match mode {
                    TripleMode::Pure => assert!(report.pure_flags.iter().all(|&f| f)),
                    TripleMode::Mixed => assert!(!report.pure_flags.iter().all(|&f| f)),
                }
            }
        }
    }

    #[test]
    fn search_rates_sit_in_the_expected_bands() {
        let sampler = SeededSampler::new(7777);
        let pure = violation_search(TripleMode::Pure, 10_000, &sampler, 2).unwrap();
        let rate = pure.distance_violations as f64 / 10_000.0;
        assert!((0.26..0.33).contains(&rate), "pure distance rate {rate}");
        let sq_rate = pure.squared_violations as f64 / 10_000.0;
        assert!((0.72..0.79).contains(&sq_rate), "pure squared rate {sq_rate}");
        let mixed = violation_search(TripleMode::Mixed, 10_000, &sampler, 2).unwrap();
        let rate = mixed.distance_violations as f64 / 10_000.0;
        assert!((0.03..0.06).contains(&rate), "mixed distance rate {rate}");
        let sq_rate = mixed.squared_violations as f64 / 10_000.0;
        assert!((0.58..0.66).contains(&sq_rate), "mixed squared rate {sq_rate}");
    }

    #[test]
    fn search_is_reproducible_and_worker_independent() {
        let sampler = SeededSampler::new(99);
        let one = violation_search(TripleMode::Mixed, 4_001, &sampler, 1).unwrap();
        let again = violation_search(TripleMode::Mixed, 4_001, &sampler, 1).unwrap();
        let three = violation_search(TripleMode::Mixed, 4_001, &sampler, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&three).unwrap()
        );
        assert!(violation_search(TripleMode::Pure, 0, &sampler, 1).is_err());
        assert!(violation_search(TripleMode::Pure, 10, &sampler, 0).is_err());
    }
}
