//! Special functions used by the oracles and the test statistics.

use std::f64::consts::{PI, SQRT_2};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal upper tail `P(Z > x)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / SQRT_2)
}

pub fn normal_cdf(x: f64) -> f64 {
    normal_sf(-x)
}

/// Exponential integral `E1(x) = Γ(0, x)` for `x > 0`.
///
/// Power series below 1, modified Lentz continued fraction above.
pub fn exp_integral_e1(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            let k = k as f64;
            term *= -x / k;
            let add = term / k;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        // E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Survival function of the Kolmogorov distribution, `P(K > x)`.
///
/// Alternating series for `x >= 1.18`, Jacobi theta form below. Terms are
/// dropped once they fall under `1e-12`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let p = if x < 1.18 {
        // CDF = sqrt(2π)/x Σ_{k≥1} exp(-(2k-1)² π² / (8x²))
        let w = -PI * PI / (8.0 * x * x);
        let mut cdf = 0.0;
        for k in 1..100 {
            let m = (2 * k - 1) as f64;
            let term = (w * m * m).exp();
            cdf += term;
            if term < 1e-12 {
                break;
            }
        }
        1.0 - (2.0 * PI).sqrt() / x * cdf
    } else {
        let mut sf = 0.0;
        for k in 1..100 {
            let k = k as f64;
            let term = (-2.0 * k * k * x * x).exp();
            if k as i64 % 2 == 1 {
                sf += term;
            } else {
                sf -= term;
            }
            if term < 1e-12 {
                break;
            }
        }
        2.0 * sf
    };
    p.clamp(0.0, 1.0)
}
