//! Adaptive Gauss-Kronrod quadrature.
//!
//! Plain QUADPACK scheme: evaluate a Gauss-Kronrod pair on a segment,
//! estimate the error from the Gauss/Kronrod discrepancy, keep a queue
//! of segments ordered by error and bisect the worst one until the
//! summed error meets the tolerance or the subdivision budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkRule {
    /// 7-point Gauss with 15-point Kronrod extension.
    G7K15,
    /// 10-point Gauss with 21-point Kronrod extension.
    G10K21,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub rule: GkRule,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_subdivisions: 200,
            rule: GkRule::G10K21,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        // a NaN tolerance fails the positivity test too
        let positive = |t: f64| t > 0.0;
        if !positive(self.abs_tol) || !positive(self.rel_tol) {
            return Err(Error::contract(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::contract("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

// The node and weight tables below keep their full published precision;
// f64 rounds the trailing digits.

// 15-point Kronrod nodes; odd indices are the embedded 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss-Kronrod pass over [a, b]: Kronrod value plus error bound.
fn gk_segment<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    xgk: &[f64],
    wg: &[f64],
    wgk: &[f64],
) -> (f64, f64) {
    let n = xgk.len();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0f64; 11];
    let mut fv2 = [0.0f64; 11];

    // odd-order Gauss rules (xgk of even length) include the center node
    let mut res_gauss = if n.is_multiple_of(2) {
        wg[wg.len() - 1] * f_center
    } else {
        0.0
    };
    let mut res_kronrod = f_center * wgk[n - 1];
    let mut res_abs = res_kronrod.abs();

    for (j, w_gauss) in wg.iter().enumerate().take((n - 1) / 2) {
        let jtw = 2 * j + 1;
        let dx = half * xgk[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += w_gauss * (f1 + f2);
        res_kronrod += wgk[jtw] * (f1 + f2);
        res_abs += wgk[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..n / 2 {
        let jtw = 2 * j;
        let dx = half * xgk[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_kronrod += wgk[jtw] * (f1 + f2);
        res_abs += wgk[jtw] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = wgk[n - 1] * (f_center - mean).abs();
    for j in 0..n - 1 {
        res_asc += wgk[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let raw_err = (res_kronrod - res_gauss) * half;
    let value = res_kronrod * half;
    let err = rescale_error(raw_err, res_abs * half.abs(), res_asc * half.abs());
    (value, err)
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over [a, b] to the configured tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadEstimate> {
    cfg.validate()?;
    if a == b {
        return Ok(QuadEstimate {
            value: 0.0,
            abs_error: 0.0,
            subdivisions: 0,
        });
    }
    let (sign, lo, hi) = if a < b { (1.0, a, b) } else { (-1.0, b, a) };

    let eval = |x0: f64, x1: f64| -> (f64, f64) {
        match cfg.rule {
            GkRule::G7K15 => gk_segment(&f, x0, x1, &XGK15, &WG7, &WGK15),
            GkRule::G10K21 => gk_segment(&f, x0, x1, &XGK21, &WG10, &WGK21),
        }
    };

    let fail = |estimate: f64, error: f64, requested: f64, subdivisions: usize, why: &str| {
        Err(Error::NumericalFailure {
            what: format!("adaptive Gauss-Kronrod quadrature ({why})"),
            estimate,
            error_bound: error,
            requested,
            subdivisions,
        })
    };

    let (v0, e0) = eval(lo, hi);
    if !v0.is_finite() {
        return fail(v0, e0, cfg.abs_tol, 0, "non-finite integrand");
    }

    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a: lo,
        b: hi,
        value: v0,
        error: e0,
    });
    let mut total_value = v0;
    let mut total_error = e0;
    let mut subdivisions = 0usize;

    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total_value.abs());
        if total_error <= target {
            return Ok(QuadEstimate {
                value: sign * total_value,
                abs_error: total_error,
                subdivisions,
            });
        }
        if subdivisions >= cfg.max_subdivisions {
            return fail(
                sign * total_value,
                total_error,
                target,
                subdivisions,
                "subdivision limit",
            );
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable in f64
            return fail(
                sign * total_value,
                total_error,
                target,
                subdivisions,
                "interval exhausted at machine precision",
            );
        }
        let (vl, el) = eval(worst.a, mid);
        let (vr, er) = eval(mid, worst.b);
        if !(vl.is_finite() && vr.is_finite()) {
            return fail(
                sign * total_value,
                total_error,
                target,
                subdivisions,
                "non-finite integrand",
            );
        }
        total_value += vl + vr - worst.value;
        total_error += el + er - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: vl,
            error: el,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: vr,
            error: er,
        });
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact_without_subdivision() {
        let cfg = QuadratureConfig::default();
        // K15 integrates degree <= 22 exactly; x^10 over [0,1] = 1/11
        let got = integrate(|x| x.powi(10), 0.0, 1.0, &cfg).unwrap();
        assert!((got.value - 1.0 / 11.0).abs() < 1e-15);
        assert_eq!(got.subdivisions, 0);
    }

    #[test]
    fn sine_over_half_period() {
        for rule in [GkRule::G7K15, GkRule::G10K21] {
            let cfg = QuadratureConfig {
                rule,
                ..Default::default()
            };
            let got = integrate(f64::sin, 0.0, PI, &cfg).unwrap();
            assert!((got.value - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn length_density_normalizes() {
        let cfg = QuadratureConfig::with_tols(1e-12, 1e-12);
        let got = integrate(|r| 3.0 * r * r, 0.0, 1.0, &cfg).unwrap();
        assert!((got.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let cfg = QuadratureConfig {
            max_subdivisions: 2000,
            ..QuadratureConfig::with_tols(1e-10, 1e-10)
        };
        let got = integrate(|x| 0.5 / x.sqrt(), 1e-300, 1.0, &cfg).unwrap();
        assert!((got.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let cfg = QuadratureConfig::default();
        let fwd = integrate(|x| x * x, 0.0, 2.0, &cfg).unwrap();
        let rev = integrate(|x| x * x, 2.0, 0.0, &cfg).unwrap();
        assert!((fwd.value + rev.value).abs() < 1e-14);
        let empty = integrate(|x| x, 1.0, 1.0, &cfg).unwrap();
        assert_eq!(empty.value, 0.0);
    }

    #[test]
    fn subdivision_limit_reports_failure() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            ..QuadratureConfig::with_tols(1e-14, 1e-14)
        };
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 1.0, &cfg).unwrap_err();
        match err {
            Error::NumericalFailure {
                subdivisions,
                estimate,
                ..
            } => {
                assert_eq!(subdivisions, 3);
                assert!(estimate.is_finite());
            }
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let cfg = QuadratureConfig::default();
        // non-integrable pole: must error out, never fabricate a value
        assert!(integrate(|x| 1.0 / (x - 0.3), 0.0, 1.0, &cfg).is_err());
        let err = integrate(|_| f64::NAN, 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::NumericalFailure { .. }));
    }

    #[test]
    fn bad_config_is_a_contract_error() {
        let cfg = QuadratureConfig {
            abs_tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, &cfg),
            Err(Error::Contract(_))
        ));
    }
}
