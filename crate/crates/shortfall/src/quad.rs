//! Adaptive Gauss–Kronrod quadrature (G7–K15).
//!
//! Two entry points cover everything the solver needs: [`integrate`] splits a
//! finite interval adaptively on the largest-error subinterval, and
//! [`integrate_decaying`] walks a half-line with width-doubling panels,
//! stopping once consecutive panels stop contributing. The latter is meant
//! for integrands made exponentially decaying by a substitution such as
//! s = 1 - e^(-w).

use crate::error::{Error, Result};

// 15-point Kronrod / 7-point Gauss abscissae and weights (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value and error-bound pair returned by every integration routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

/// Single G7-K15 rule application on [a, b]: (kronrod, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut res_abs = kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[i] = f1;
        fv[14 - i] = f2;
        kronrod += WGK[i] * (f1 + f2);
        res_abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }

    // Scaled error, following the usual QUADPACK heuristic.
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for i in 0..7 {
        res_asc += WGK[i] * ((fv[i] - mean).abs() + (fv[14 - i] - mean).abs());
    }
    res_asc *= half.abs();
    res_abs *= half.abs();

    let raw = ((kronrod - gauss) * half).abs();
    let mut err = raw;
    if res_asc != 0.0 && raw != 0.0 {
        let scale = (200.0 * raw / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let min_err = 50.0 * f64::EPSILON * res_abs;
    if min_err > err {
        err = min_err;
    }

    (kronrod * half, err)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive integration of `f` over the finite interval [a, b].
///
/// Splits the segment with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |integral|)` or the
/// subdivision budget is exhausted (then a `QuadratureAccuracy` error carries
/// the partial result).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    let (value, error) = gk15(&f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];

    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if total_err <= tol {
            return Ok(QuadResult { value: total, error: total_err });
        }
        if segments.len() >= max_segments {
            return Err(Error::QuadratureAccuracy { estimate: total, error: total_err });
        }

        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("non-empty segment list");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval no longer splittable in f64; accept what we have.
            segments.push(seg);
            let total: f64 = segments.iter().map(|s| s.value).sum();
            let total_err: f64 = segments.iter().map(|s| s.error).sum();
            return Ok(QuadResult { value: total, error: total_err });
        }
        let (lv, le) = gk15(&f, seg.a, mid);
        let (rv, re) = gk15(&f, mid, seg.b);
        segments.push(Segment { a: seg.a, b: mid, value: lv, error: le });
        segments.push(Segment { a: mid, b: seg.b, value: rv, error: re });
    }
}

/// Integration of an (eventually) exponentially decaying integrand over
/// [start, infinity).
///
/// Panels of doubling width (capped at 64) are integrated adaptively and
/// accumulated until two consecutive panels contribute less than
/// `rel_tol * |accumulated|`, with a hard cap of 60 panels.
pub fn integrate_decaying<F: Fn(f64) -> f64>(f: F, start: f64, rel_tol: f64) -> Result<QuadResult> {
    const MAX_PANELS: usize = 60;
    const MAX_WIDTH: f64 = 64.0;

    let mut acc = 0.0f64;
    let mut err = 0.0f64;
    let mut lo = start;
    let mut width = 1.0f64;
    let mut negligible_run = 0;
    // Running magnitude: later panels only need accuracy relative to the
    // whole integral, not to their own (vanishing) value.
    let mut scale = 0.0f64;

    for _ in 0..MAX_PANELS {
        let hi = lo + width;
        let abs_floor = (rel_tol * scale).max(f64::MIN_POSITIVE);
        let panel = integrate(&f, lo, hi, abs_floor, rel_tol.max(1e-14), 400)?;
        acc += panel.value;
        err += panel.error;
        scale = scale.max(acc.abs()).max(panel.value.abs());

        // Leading zero panels (mass further out) must not trigger the stop;
        // only count negligible panels once something has accumulated.
        if scale > 0.0 && panel.value.abs() <= rel_tol * scale {
            negligible_run += 1;
            if negligible_run >= 2 {
                // Remaining tail is bounded by a geometric continuation of
                // the last panel; fold it into the error estimate.
                err += panel.value.abs();
                return Ok(QuadResult { value: acc, error: err });
            }
        } else {
            negligible_run = 0;
        }

        lo = hi;
        width = (width * 2.0).min(MAX_WIDTH);
    }

    if scale == 0.0 {
        // Identically zero over the whole scanned range.
        return Ok(QuadResult { value: 0.0, error: err });
    }
    Err(Error::QuadratureAccuracy { estimate: acc, error: err })
}

/// Integration over the whole real line of an integrand decaying
/// exponentially in both directions: split at zero, reflect the left half.
pub fn integrate_real_line<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<QuadResult> {
    let right = integrate_decaying(&f, 0.0, rel_tol)?;
    let left = integrate_decaying(|v| f(-v), 0.0, rel_tol)?;
    Ok(QuadResult {
        value: right.value + left.value,
        error: right.error + left.error,
    })
}
