//! Standard normal quantiles (Wichura's AS241, PPND16; relative accuracy
//! about 1e-16).

// coefficients are kept as published
#![allow(clippy::excessive_precision)]

// inherent f64 math shadows these whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

fn poly(c: &[f64; 8], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

const A: [f64; 8] = [
    3.387_132_872_796_366_5,
    133.141_667_891_784_38,
    1_971.590_950_306_551_3,
    13_731.693_765_509_461,
    45_921.953_931_549_87,
    67_265.770_927_008_7,
    33_430.575_583_588_13,
    2_509.080_928_730_122_7,
];
const B: [f64; 8] = [
    1.0,
    42.313_330_701_600_91,
    687.187_007_492_057_9,
    5_394.196_021_424_751,
    21_213.794_301_586_597,
    39_307.895_800_092_71,
    28_729.085_735_721_943,
    5_226.495_278_852_545,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_5,
    4.630_337_846_156_546,
    5.769_497_221_460_691,
    3.647_848_324_763_204_5,
    1.270_458_252_452_368_4,
    0.241_780_725_177_450_6,
    0.022_723_844_989_269_184,
    7.745_450_142_783_414e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_759,
    1.676_384_830_183_803_8,
    0.689_767_334_985_1,
    0.148_103_976_427_480_08,
    0.015_198_666_563_616_457,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_9e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103,
    5.463_784_911_164_114,
    1.784_826_539_917_291_3,
    0.296_560_571_828_504_9,
    0.026_532_189_526_576_124,
    0.001_242_660_947_388_078_4,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
const F: [f64; 8] = [
    1.0,
    0.599_832_206_555_888,
    0.136_929_880_922_735_8,
    0.014_875_361_290_850_615,
    7.868_691_311_456_133e-4,
    1.846_318_317_510_054_8e-5,
    1.421_511_758_316_446e-7,
    2.044_263_103_389_939_8e-15,
];

/// Lower quantile `Phi^{-1}(q)` for `0 < q < 1`.
pub fn standard_normal_inverse_cdf(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain("normal quantile level must lie in (0, 1)"));
    }
    let dq = q - 0.5;
    if dq.abs() <= 0.425 {
        let r = 0.180_625 - dq * dq;
        return Ok(dq * poly(&A, r) / poly(&B, r));
    }
    let tail = if dq < 0.0 { q } else { 1.0 - q };
    let r = (-tail.ln()).sqrt();
    let z = if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    };
    Ok(if dq < 0.0 { -z } else { z })
}

/// Upper-tail critical value `z` with `P(Z > z) = p`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    // -Phi^{-1}(p) keeps full relative accuracy for small p
    standard_normal_inverse_cdf(p).map(|z| -z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{Continuous, ContinuousCDF, Normal};

    #[test]
    fn examples() {
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        assert!((normal_quantile(0.025).unwrap() - 1.959_964).abs() < 1e-6);
        assert!((normal_quantile(0.025).unwrap() - 1.959_963_984_540_054).abs() < 1e-12);
        for p in [0.000_976_562_5, 0.125, 0.25, 0.375, 0.437_5] {
            assert!(
                (normal_quantile(p).unwrap() + normal_quantile(1.0 - p).unwrap()).abs() < 1e-12
            );
        }
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
        assert!(normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn matches_multiprecision_roots() {
        // roots of erfc(z / sqrt 2) / 2 = p at 40 digits
        let table = [
            (1e-12, 7.034_483_825_301_131_929_8),
            (1e-8, 5.612_001_244_174_788_731_5),
            (1e-5, 4.264_890_793_922_824_628_5),
            (0.001, 3.090_232_306_167_813_541_5),
            (0.0025, 2.807_033_768_343_804_117_2),
            (0.025, 1.959_963_984_540_054_235_5),
            (0.1, 1.281_551_565_544_600_467),
            (0.3, 0.524_400_512_708_040_784_04),
        ];
        for (p, z) in table {
            let got = normal_quantile(p).unwrap();
            assert!((got - z).abs() <= 4e-16 * z, "p = {p}: {got} vs {z}");
        }
    }

    #[test]
    fn inverts_the_cdf() {
        // residual of statrs' survival function, mapped back to z
        let n = Normal::new(0.0, 1.0).unwrap();
        for i in 1..2000 {
            let p = i as f64 / 2000.0;
            let z = normal_quantile(p).unwrap();
            assert!(((n.sf(z) - p) / n.pdf(z)).abs() < 1e-9, "p = {p}");
        }
        for p in [1e-12, 1e-8, 1e-5] {
            let z = normal_quantile(p).unwrap();
            assert!((n.sf(z) / p - 1.0).abs() < 1e-9, "p = {p}");
        }
    }
}
