//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Kronrod panel: (15-point estimate, error estimate). The error uses the
/// QUADPACK scaling of |K15 − G7| with a rounding floor.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv = [(0.0, 0.0); 7];
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        fv[j] = (f1, f2);
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let habs = h.abs();
    let (resabs, resasc) = (resabs * habs, resasc * habs);
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (resk * h, err)
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Tolerance {
    pub fn abs(abs: f64) -> Self {
        Tolerance {
            abs,
            rel: 0.0,
            max_panels: 20_000,
        }
    }
    pub fn rel(rel: f64) -> Self {
        Tolerance {
            abs: 0.0,
            rel,
            max_panels: 20_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    /// Final panel partition, sorted by left endpoint.
    pub panels: Vec<(f64, f64, f64)>,
}

/// Globally adaptive bisection: always split the panel with the largest error
/// estimate. `breaks` seeds the initial partition (e.g. known kinks).
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<Integral> {
    struct Panel {
        a: f64,
        b: f64,
        val: f64,
        err: f64,
    }
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .map(|w| {
            let (val, err) = gk15(&mut f, w[0], w[1]);
            Panel {
                a: w[0],
                b: w[1],
                val,
                err,
            }
        })
        .collect();
    loop {
        let total: f64 = panels.iter().map(|p| p.val).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let target = tol.abs.max(tol.rel * total.abs());
        if err <= target {
            let mut out: Vec<_> = panels.iter().map(|p| (p.a, p.b, p.val)).collect();
            out.sort_by(|x, y| x.0.total_cmp(&y.0));
            return Ok(Integral {
                value: total,
                error: err,
                panels: out,
            });
        }
        let (idx, worst) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one panel");
        let (a, b) = (worst.a, worst.b);
        let m = 0.5 * (a + b);
        if panels.len() >= tol.max_panels || m <= a || m >= b {
            return Err(Error::Quadrature { lo: a, hi: b, err });
        }
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        panels[idx] = Panel {
            a,
            b: m,
            val: v1,
            err: e1,
        };
        panels.push(Panel {
            a: m,
            b,
            val: v2,
            err: e2,
        });
    }
}

pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    integrate_with_breaks(f, &[a, b], tol).map(|r| r.value)
}
