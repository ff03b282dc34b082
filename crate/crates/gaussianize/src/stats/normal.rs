//! Gaussian quantile function and density.

// The rational-approximation coefficients are kept digit-for-digit as
// published.
#![allow(clippy::excessive_precision)]

use super::{GaussianRef, StatsError};

/// Inverse CDF of `Normal(mu, sigma^2)`.
///
/// Uses Wichura's PPND16 rational approximations (AS 241), accurate to well
/// below 1e-9 absolute over the whole open interval.
pub fn gaussian_quantile(p: f64, reference: &GaussianRef) -> Result<f64, StatsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::DomainError(format!(
            "quantile probability must lie in (0, 1), got {p}"
        )));
    }
    Ok(reference.mu() + reference.sigma() * standard_normal_quantile(p))
}

/// Density of `Normal(mu, sigma^2)` at `x`.
pub fn gaussian_pdf(x: f64, reference: &GaussianRef) -> f64 {
    let z = (x - reference.mu()) / reference.sigma();
    (-0.5 * z * z).exp() / (reference.sigma() * (2.0 * std::f64::consts::PI).sqrt())
}

// AS 241 central-region coefficients, |p - 0.5| <= 0.425.
const A: [f64; 8] = [
    3.387_132_872_796_366_608e0,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const B: [f64; 7] = [
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
// Intermediate region, sqrt(-log(min(p, 1-p))) <= 5.
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34e0,
    4.630_337_846_156_545_295_9e0,
    5.769_497_221_460_691_405_5e0,
    3.647_848_324_763_204_605_04e0,
    1.270_458_252_452_368_382_58e0,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_4e-4,
];
const D: [f64; 7] = [
    2.053_191_626_637_758_821_87e0,
    1.676_384_830_183_803_849_4e0,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
// Tail region, sqrt(-log(min(p, 1-p))) > 5.
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2e0,
    5.463_784_911_164_114_369_9e0,
    1.784_826_539_917_291_335_8e0,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 7] = [
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

fn rational(r: f64, num: &[f64; 8], den: &[f64; 7]) -> f64 {
    let mut p = num[7];
    for &coeff in num[..7].iter().rev() {
        p = p * r + coeff;
    }
    let mut q = den[6];
    for &coeff in den[..6].iter().rev() {
        q = q * r + coeff;
    }
    p / (q * r + 1.0)
}

fn standard_normal_quantile(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * rational(r, &A, &B);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        rational(r - 1.6, &C, &D)
    } else {
        rational(r - 5.0, &E, &F)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}
