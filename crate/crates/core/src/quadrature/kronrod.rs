use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{QuadResult, QuadValue};
use crate::error::{Error, Result};

// QUADPACK qk21 abscissae and weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
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
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
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

/// Options for [`integrate_finite_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for FiniteOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 0.0,
            max_subdivisions: 2000,
        }
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Returns the Kronrod value, its error estimate, and whether that estimate is
/// at the rounding floor (further bisection cannot reduce it).
fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64, bool) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_g = T::zero();
    let mut res_abs = f_center.magnitude() * WGK[10];
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + (f1 + f2) * WGK[j];
        res_abs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (f_center - mean).magnitude();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let h = half.abs();
    let res_abs = res_abs * h;
    let res_asc = res_asc * h;
    let mut err = ((res_k - res_g) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    let at_floor = err <= floor;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (res_k * half, err, at_floor)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate_finite<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_finite_with(
        f,
        a,
        b,
        &FiniteOptions {
            abs_tol: tol,
            ..FiniteOptions::default()
        },
    )
}

/// Globally adaptive bisection: the segment with the largest error estimate is
/// split until the summed estimate meets `max(abs_tol, rel_tol * |I|)` or the
/// subdivision budget is exhausted (reported as `converged = false`).
pub fn integrate_finite_with<T, F>(mut f: F, a: f64, b: f64, opts: &FiniteOptions) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "integrate_finite: need finite a < b, got [{a}, {b}]"
        )));
    }
    if !(opts.abs_tol > 0.0 || opts.rel_tol > 0.0) {
        return Err(Error::InvalidInput(
            "integrate_finite: tolerance must be positive".into(),
        ));
    }

    let mut n_evals = 0;
    let mut heap = BinaryHeap::new();
    // Segments whose error is already at the rounding floor.
    let mut settled = Vec::new();
    let mut push = |f: &mut F, a: f64, b: f64, heap: &mut BinaryHeap<Segment<T>>, settled: &mut Vec<Segment<T>>| {
        let (value, error, at_floor) = gk21(f, a, b);
        n_evals += 21;
        let seg = Segment { a, b, value, error };
        if at_floor {
            settled.push(seg);
        } else {
            heap.push(seg);
        }
        (value, error)
    };
    let (mut total, mut total_err) = push(&mut f, a, b, &mut heap, &mut settled);

    let target = |v: &T| opts.abs_tol.max(opts.rel_tol * v.magnitude());
    let mut converged = total_err <= target(&total);
    while !converged && heap.len() + settled.len() < opts.max_subdivisions {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if !(seg.a < mid && mid < seg.b) {
            settled.push(seg);
            continue;
        }
        let (v1, e1) = push(&mut f, seg.a, mid, &mut heap, &mut settled);
        let (v2, e2) = push(&mut f, mid, seg.b, &mut heap, &mut settled);
        total = total - seg.value + v1 + v2;
        total_err += e1 + e2 - seg.error;
        converged = total_err <= target(&total);
    }
    // Re-sum to shed the drift of the running updates.
    let mut value = T::zero();
    let mut abs_error = 0.0;
    for seg in heap.iter().chain(settled.iter()) {
        value = value + seg.value;
        abs_error += seg.error;
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: abs_error,
        n_evals,
        converged: abs_error <= target(&value),
    })
}

/// Integrate a smooth, decaying `f` over `[a, ∞)` via `x = a + t/(1-t)`.
pub fn integrate_semi_infinite<T, F>(mut f: F, a: f64, tol: f64) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_finite(
        move |t: f64| {
            let s = 1.0 - t;
            f(a + t / s) * (1.0 / (s * s))
        },
        0.0,
        1.0,
        tol,
    )
}
