//! Adaptive Gauss–Kronrod (7/15-point) quadrature, scalar and vector-valued.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

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
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn abs(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

struct Interval {
    a: f64,
    b: f64,
    values: Vec<f64>,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64, &mut [f64])>(f: &mut F, dim: usize, a: f64, b: f64, buf: &mut [f64]) -> Interval {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    f(c, buf);
    for d in 0..dim {
        k[d] = WGK[7] * buf[d];
        g[d] = WG[3] * buf[d];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        for x in [c - dx, c + dx] {
            f(x, buf);
            for d in 0..dim {
                k[d] += WGK[j] * buf[d];
                if j % 2 == 1 {
                    g[d] += WG[j / 2] * buf[d];
                }
            }
        }
    }
    let mut error = 0.0f64;
    for d in 0..dim {
        k[d] *= h;
        error = error.max((k[d] - g[d] * h).abs());
    }
    Interval { a, b, values: k, error }
}

/// Integrates a vector-valued `f` over `[a, b]`; `f(x, out)` fills `out`.
/// The error is the largest componentwise Kronrod–Gauss difference and the
/// target is `max(abs_tol, rel_tol · max_d |I_d|)`.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<(Vec<f64>, f64)> {
    if a == b {
        return Ok((vec![0.0; dim], 0.0));
    }
    let mut buf = vec![0.0; dim];
    let first = kronrod(&mut f, dim, a, b, &mut buf);
    let mut total = first.values.clone();
    let mut heap = BinaryHeap::new();
    let mut err_sum = first.error;
    heap.push(first);
    loop {
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let target = opts.abs_tol.max(opts.rel_tol * scale);
        if err_sum <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature {
                error_estimate: err_sum,
                lower: a,
                upper: b,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(&mut f, dim, worst.a, mid, &mut buf);
        let right = kronrod(&mut f, dim, mid, worst.b, &mut buf);
        for (d, t) in total.iter_mut().enumerate() {
            *t += left.values[d] + right.values[d] - worst.values[d];
        }
        err_sum += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // keep the running sums free of drift
        if heap.len() % 64 == 0 {
            err_sum = heap.iter().map(|i| i.error).sum();
            for (d, t) in total.iter_mut().enumerate() {
                *t = heap.iter().map(|i| i.values[d]).sum();
            }
        }
    }
    let err: f64 = heap.iter().map(|i| i.error).sum();
    let mut out = vec![0.0; dim];
    for iv in heap.iter() {
        for (o, v) in out.iter_mut().zip(&iv.values) {
            *o += v;
        }
    }
    Ok((out, err))
}

/// Scalar form of [`integrate_vec`].
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    let (v, error) = integrate_vec(|x, out| out[0] = f(x), 1, a, b, opts)?;
    Ok(QuadResult { value: v[0], error })
}

/// Shrinks `[a, b]` to the part where some component of `f` exceeds
/// `rel · peak` on a `grid`-point scan, keeping one grid step of margin.
pub fn trim_support<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    a: f64,
    b: f64,
    rel: f64,
    grid: usize,
) -> (f64, f64) {
    let step = (b - a) / grid as f64;
    let mut vals = vec![vec![0.0; dim]; grid + 1];
    for (g, v) in vals.iter_mut().enumerate() {
        f(a + step * g as f64, v);
    }
    let mut peak = vec![0.0f64; dim];
    for v in &vals {
        for d in 0..dim {
            peak[d] = peak[d].max(v[d].abs());
        }
    }
    let significant = |v: &[f64]| (0..dim).any(|d| peak[d] > 0.0 && v[d].abs() >= rel * peak[d]);
    let lo = vals.iter().position(|v| significant(v)).unwrap_or(0);
    let hi = vals.iter().rposition(|v| significant(v)).unwrap_or(grid);
    let lo = lo.saturating_sub(1);
    let hi = (hi + 1).min(grid);
    (a + step * lo as f64, a + step * hi as f64)
}
