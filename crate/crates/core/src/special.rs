//! Log-gamma for positive arguments.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 10.900511;
// ln(2 sqrt(e / pi))
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;
const LANCZOS_D: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

/// `ln Gamma(z)` for `z > 0` (Lanczos series, `g = 10.900511`).
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "log-gamma is only provided for finite z > 0",
        });
    }
    if z < 0.5 {
        // Gamma(z) = Gamma(z + 1) / z
        return Ok(lanczos(z + 1.0) - z.ln());
    }
    Ok(lanczos(z))
}

fn lanczos(z: f64) -> f64 {
    let mut s = LANCZOS_D[0];
    for (i, d) in LANCZOS_D.iter().enumerate().skip(1) {
        s += d / (z + i as f64 - 1.0);
    }
    s.ln() + LN_2_SQRT_E_OVER_PI + (z - 0.5) * ((z - 0.5 + LANCZOS_G) / std::f64::consts::E).ln()
}
