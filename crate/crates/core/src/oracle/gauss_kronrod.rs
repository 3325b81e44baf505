//! Globally adaptive 21-point Gauss–Kronrod integration of vector-valued
//! integrands on an interval.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [-1, 1], descending; odd indices are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_453,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
pub struct Rule<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
}

/// One Kronrod/Gauss pair on `[a, b]`; the error is `max_k |K_k - G_k|`.
pub fn kronrod21<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Rule<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];

    let fc = f(center);
    for k in 0..N {
        kronrod[k] = WGK[10] * fc[k];
    }
    for (j, (&x, &wk)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let lo = f(center - dx);
        let hi = f(center + dx);
        for k in 0..N {
            let s = lo[k] + hi[k];
            kronrod[k] += wk * s;
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * s;
            }
        }
    }
    let mut error = 0.0f64;
    for k in 0..N {
        kronrod[k] *= half;
        gauss[k] *= half;
        error = error.max((kronrod[k] - gauss[k]).abs());
    }
    Rule { value: kronrod, error }
}

#[derive(Debug, Clone, Copy)]
pub struct Adaptive<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

struct Cell<const N: usize> {
    a: f64,
    b: f64,
    rule: Rule<N>,
}

impl<const N: usize> PartialEq for Cell<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Cell<N> {}
impl<const N: usize> PartialOrd for Cell<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Cell<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule.error.total_cmp(&other.rule.error).then(other.a.total_cmp(&self.a))
    }
}

/// Integrates `f` over the partition given by `knots` (sorted, at least two
/// entries), bisecting the worst cell until the summed error estimate drops
/// below `max(abs_tol, rel_tol · max_k |I_k|)` or `max_intervals` is reached.
pub fn integrate<const N: usize, F>(
    mut f: F,
    knots: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Adaptive<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let mut heap = BinaryHeap::with_capacity(knots.len() + 16);
    for w in knots.windows(2) {
        if w[1] > w[0] {
            heap.push(Cell { a: w[0], b: w[1], rule: kronrod21(&mut f, w[0], w[1]) });
        }
    }
    loop {
        let mut value = [0.0; N];
        let mut error = 0.0;
        for c in heap.iter() {
            for k in 0..N {
                value[k] += c.rule.value[k];
            }
            error += c.rule.error;
        }
        let scale = value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = abs_tol.max(rel_tol * scale);
        let converged = error <= tol;
        if converged || heap.len() >= max_intervals.max(1) {
            return Adaptive { value, error, intervals: heap.len(), converged };
        }
        let worst = heap.pop().expect("at least one cell");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval exhausted at machine resolution.
            heap.push(worst);
            return Adaptive { value, error, intervals: heap.len(), converged: false };
        }
        heap.push(Cell { a: worst.a, b: mid, rule: kronrod21(&mut f, worst.a, mid) });
        heap.push(Cell { a: mid, b: worst.b, rule: kronrod21(&mut f, mid, worst.b) });
    }
}
