//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Every subinterval carries the difference between its 15-point Kronrod
//! and embedded 7-point Gauss values as its error estimate. The interval with
//! the largest estimate is bisected until the summed estimate meets the
//! tolerance. Endpoint singularities of the form (x−a)^(β−1) are removed by a
//! change of variables in [`integrate_singular`] before delegating here.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl QuadConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        let cfg = QuadConfig {
            abs_tol,
            rel_tol,
            max_depth,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::domain(
                "quadrature config",
                format!(
                    "tolerances must be positive, got abs {} rel {}",
                    self.abs_tol, self.rel_tol
                ),
            ));
        }
        if self.max_depth == 0 {
            return Err(Error::domain("quadrature config", "max_depth must be at least 1"));
        }
        Ok(())
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Which end of the interval carries the (x−a)^(β−1) / (b−x)^(β−1) factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularEnd {
    Left,
    Right,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard cap on live subintervals, independent of the depth cap.
const MAX_SEGMENTS: usize = 200_000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
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

fn checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite { x, value: y })
    }
}

/// One G7/K15 panel. Returns the segment plus a roundoff floor for its error.
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Result<(Segment, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let lo = checked(f, center - dx)?;
        let hi = checked(f, center + dx)?;
        kronrod += w * (lo + hi);
        abs_sum += w * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    let floor = 50.0 * f64::EPSILON * abs_sum * half.abs();
    Ok((
        Segment {
            a,
            b,
            value,
            error: error.max(floor),
            depth,
        },
        floor,
    ))
}

/// Integrates `f` over [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    cfg.validate()?;
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::domain(
            "integrate",
            format!("requires finite a ≤ b, got [{a}, {b}]"),
        ));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }

    let mut evaluations = 15;
    let (first, first_floor) = kronrod_panel(&f, a, b, 0)?;
    let mut active = BinaryHeap::new();
    // segments whose estimate is already at the roundoff floor
    let mut settled_value = 0.0;
    let mut settled_error = 0.0;
    if first.error <= first_floor {
        settled_value += first.value;
        settled_error += first.error;
    } else {
        active.push(first);
    }
    // running sums over the active heap; re-summed exactly before returning
    let (mut active_value, mut active_error) = (first.value, first.error);
    if active.is_empty() {
        (active_value, active_error) = (0.0, 0.0);
    }

    let target = |value: f64| cfg.abs_tol.max(cfg.rel_tol * value.abs());
    loop {
        let mut value = settled_value + active_value;
        let mut error = settled_error + active_error;
        if error <= target(value) || active.is_empty() {
            (active_value, active_error) = active.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            value = settled_value + active_value;
            error = settled_error + active_error;
            if error <= target(value) || active.is_empty() {
                return Ok(QuadResult {
                    value,
                    error_estimate: error,
                    evaluations,
                });
            }
        }
        let worst = active.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= cfg.max_depth || active.len() >= MAX_SEGMENTS || mid <= worst.a || mid >= worst.b {
            return Err(Error::DepthExhausted { estimate: value, error });
        }
        active_value -= worst.value;
        active_error -= worst.error;
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (seg, floor) = kronrod_panel(&f, lo, hi, worst.depth + 1)?;
            evaluations += 15;
            if seg.error <= floor {
                settled_value += seg.value;
                settled_error += seg.error;
            } else {
                active_value += seg.value;
                active_error += seg.error;
                active.push(seg);
            }
        }
    }
}

/// Integrates f(w)·(w−a)^(β−1) (left) or f(w)·(b−w)^(β−1) (right) over [a, b].
///
/// With u = ((w−a)/(b−a))^β the weight and the Jacobian cancel:
/// ∫ₐᵇ f(w)(w−a)^(β−1) dw = (b−a)^β/β ∫₀¹ f(a + (b−a)u^(1/β)) du.
pub fn integrate_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    beta: f64,
    end: SingularEnd,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain(
            "integrate_singular",
            format!("requires 0 < β ≤ 1, got {beta}"),
        ));
    }
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::domain(
            "integrate_singular",
            format!("requires finite a ≤ b, got [{a}, {b}]"),
        ));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if beta == 1.0 {
        return integrate(f, a, b, cfg);
    }
    let width = b - a;
    let scale = width.powf(beta) / beta;
    let inv_beta = beta.recip();
    let mapped = |u: f64| {
        let offset = width * u.powf(inv_beta);
        match end {
            SingularEnd::Left => f(a + offset),
            SingularEnd::Right => f(b - offset),
        }
    };
    // For small β the map u ↦ u^(1/β) pushes all variation of f into a thin
    // layer next to u = 1, where a single panel would see a constant. Split u
    // so each piece spans at most a 2^OFFSET_BITS range of offsets; below
    // 2^-OFFSET_BITS·PIECE_LIMIT the offset is under roundoff and f is flat.
    const OFFSET_BITS: f64 = 20.0;
    const PIECE_LIMIT: f64 = 3.0;
    let pieces = (OFFSET_BITS * beta).recip().ceil().clamp(1.0, PIECE_LIMIT) as i32;
    let breaks: Vec<f64> = (0..=pieces)
        .map(|k| (-f64::from(k) * OFFSET_BITS * beta * std::f64::consts::LN_2).exp())
        .chain(std::iter::once(0.0))
        .collect();
    // the scale multiplies the result, so tighten the absolute tolerance to match
    let inner = QuadConfig {
        abs_tol: cfg.abs_tol / (scale.max(f64::MIN_POSITIVE) * breaks.len() as f64),
        ..*cfg
    };
    let (mut value, mut error, mut evaluations) = (0.0, 0.0, 0);
    for pair in breaks.windows(2) {
        let (hi, lo) = (pair[0], pair[1]);
        match integrate(mapped, lo, hi, &inner) {
            Ok(r) => {
                value += r.value;
                error += r.error_estimate;
                evaluations += r.evaluations;
            }
            Err(Error::DepthExhausted { estimate, error: e }) => {
                return Err(Error::DepthExhausted {
                    estimate: (value + estimate) * scale,
                    error: (error + e) * scale,
                });
            }
            Err(other) => return Err(other),
        }
    }
    Ok(QuadResult {
        value: value * scale,
        error_estimate: error * scale,
        evaluations,
    })
}
