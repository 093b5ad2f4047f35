#![allow(dead_code)]

use std::f64::consts::PI;

use dtrans_core::sobolev::{Payload, Piece, PiecewiseAnalytic};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const K_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * K_WEIGHTS[7];
    let mut g = fc * G_WEIGHTS[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += K_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod (7, 15) quadrature of a real integrand.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let (whole, err) = gk15(f, a, b);
    let mut stack = vec![(a, b, whole, err)];
    let mut total = 0.0;
    let mut err_total = 0.0;
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi, v, e)) = stack.pop() {
        let width_ok = (hi - lo) <= 1e-14 * (b - a);
        if e <= rel * scale * (hi - lo) / (b - a) || width_ok || stack.len() > 100_000 {
            total += v;
            err_total += e;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let l = gk15(f, lo, mid);
        let r = gk15(f, mid, hi);
        stack.push((lo, mid, l.0, l.1));
        stack.push((mid, hi, r.0, r.1));
    }
    let _ = err_total;
    total
}

/// `∫ Σ_d weights[d] |f^{(d)}|²` by quadrature over each piece, times the
/// number of periods for periodic functions.
pub fn quad_energy(f: &PiecewiseAnalytic, weights: [f64; 3]) -> f64 {
    let mut total = 0.0;
    for p in f.pieces() {
        let g = |x: f64| {
            let v = p.payload.eval(x);
            (0..3).map(|d| weights[d] * v[d].norm_sqr()).sum::<f64>()
        };
        total += integrate(&g, p.a, p.b, 1e-13);
    }
    total * f.repeats().unwrap_or(1) as f64
}

pub fn quad_w22(f: &PiecewiseAnalytic) -> f64 {
    quad_energy(f, [1.0, 1.0, 1.0])
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_c(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Random trigonometric polynomial with frequencies in `-6..=6`.
pub fn random_trig(rng: &mut ChaCha8Rng) -> Payload {
    let n = rng.gen_range(1..=4);
    let terms = (0..n).map(|_| (rng.gen_range(-6i64..=6), random_c(rng, 1.0))).collect();
    Payload::Trig { terms }
}

/// Degree-5 polynomial on `[a, b]` with the given end values and slopes:
/// the Hermite cubic plus `u²(u - w)²(c₀ + c₁u)`.
pub fn quintic_bridge(
    a: f64,
    b: f64,
    ends: ([Complex64; 3], [Complex64; 3]),
    extra: (Complex64, Complex64),
) -> Payload {
    let w = b - a;
    let (l, r) = ends;
    let d = r[0] - l[0];
    let c2 = (d * 3.0 / w - l[1] * 2.0 - r[1]) / w;
    let c3 = (-d * 2.0 / w + l[1] + r[1]) / (w * w);
    // u²(u - w)² = u⁴ - 2wu³ + w²u²
    let (e0, e1) = extra;
    let mut coeffs = vec![l[0], l[1], c2, c3, c(0.0, 0.0), c(0.0, 0.0)];
    let quartic = [0.0, 0.0, w * w, -2.0 * w, 1.0];
    for (j, &q) in quartic.iter().enumerate() {
        coeffs[j] += e0 * q;
        if j + 1 < 6 {
            coeffs[j + 1] += e1 * q;
        }
    }
    Payload::Poly { origin: a, coeffs }
}

/// Random `C¹` function: a periodic trigonometric background on `[-π, π]`
/// with some pieces replaced by quintic bridges, or a non-periodic chain of
/// bridges on a random interval.
pub fn random_piecewise(rng: &mut ChaCha8Rng) -> PiecewiseAnalytic {
    let periodic = rng.gen_bool(0.6);
    let (lo, hi) = if periodic {
        (-PI, PI)
    } else {
        let a = rng.gen_range(-3.0..0.0);
        (a, a + rng.gen_range(0.5..4.0))
    };
    let n = rng.gen_range(1..=5);
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(lo..hi)).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
    if cuts.len() < 2 || cuts[cuts.len() - 1] != hi {
        cuts = vec![lo, hi];
    }
    let background = random_trig(rng);
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let bridge = !periodic || rng.gen_bool(0.5);
        let payload = if bridge {
            let extra = (random_c(rng, 2.0), random_c(rng, 2.0));
            quintic_bridge(a, b, (background.eval(a), background.eval(b)), extra)
        } else {
            background.clone()
        };
        pieces.push(Piece { a, b, payload });
    }
    PiecewiseAnalytic::new(pieces, periodic.then_some(1)).expect("bridges are C1")
}
