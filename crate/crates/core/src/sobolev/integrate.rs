//! Exact integrals of products of pieces.

use num_complex::Complex64;

use super::{Payload, PiecewiseAnalytic};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `∫_a^b e^{iωx} dx`, stable for tiny `ω·(b-a)`.
fn exp_integral(omega: f64, a: f64, b: f64) -> Complex64 {
    let w = b - a;
    if omega == 0.0 {
        return Complex64::new(w, 0.0);
    }
    let half = 0.5 * omega * w;
    // 2 sin(ωw/2)/ω = w · sinc(ωw/2)
    let sinc = if half.abs() < 1e-4 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(w * sinc, 0.5 * omega * (a + b))
}

/// `∫_0^w u^p e^{iωu} du`.
fn moment(p: usize, omega: f64, w: f64) -> Complex64 {
    if (omega * w).abs() < 4.0 {
        // Taylor series in iωu.
        let mut sum = ZERO;
        let mut coef = Complex64::new(1.0, 0.0);
        let mut wpow = w.powi(p as i32 + 1);
        for n in 0..200usize {
            let term = coef * (wpow / (p + n + 1) as f64);
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() && n > 2 {
                break;
            }
            coef = coef * Complex64::new(0.0, omega) / (n + 1) as f64;
            wpow *= w;
        }
        sum
    } else {
        let iw = Complex64::new(0.0, omega);
        let e = Complex64::from_polar(1.0, omega * w);
        let mut j = (e - 1.0) / iw;
        for k in 1..=p {
            j = (e * w.powi(k as i32) - j * k as f64) / iw;
        }
        j
    }
}

/// Coefficients of `Σ c_j (x - from)^j` re-expanded around `to`.
fn recenter(coeffs: &[Complex64], from: f64, to: f64) -> Vec<Complex64> {
    let s = to - from;
    if s == 0.0 {
        return coeffs.to_vec();
    }
    // (u' + s)^j with u' = x - to
    let n = coeffs.len();
    let mut out = vec![ZERO; n];
    for (j, &c) in coeffs.iter().enumerate() {
        let mut binom = 1.0;
        for i in 0..=j {
            out[i] += c * binom * s.powi((j - i) as i32);
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
    }
    out
}

/// `∫_a^b p(x) · conj(q(x)) dx` in closed form.
fn product_integral(p: &Payload, q: &Payload, a: f64, b: f64) -> Complex64 {
    let w = b - a;
    match (p, q) {
        (Payload::Trig { terms: tp }, Payload::Trig { terms: tq }) => {
            let mut s = ZERO;
            for &(m, c) in tp {
                for &(n, d) in tq {
                    s += c * d.conj() * exp_integral((m - n) as f64, a, b);
                }
            }
            s
        }
        (Payload::Poly { origin: op, coeffs: cp }, Payload::Poly { origin: oq, coeffs: cq }) => {
            let cp = recenter(cp, *op, a);
            let cq = recenter(cq, *oq, a);
            let mut s = ZERO;
            for (j, &c) in cp.iter().enumerate() {
                for (l, &d) in cq.iter().enumerate() {
                    let k = (j + l + 1) as i32;
                    s += c * d.conj() * (w.powi(k) / k as f64);
                }
            }
            s
        }
        (Payload::Poly { origin, coeffs }, Payload::Trig { terms }) => {
            // ∫ u^j e^{-im(u + a)} du
            let cp = recenter(coeffs, *origin, a);
            let mut s = ZERO;
            for &(m, d) in terms {
                let phase = Complex64::from_polar(1.0, -(m as f64) * a);
                for (j, &c) in cp.iter().enumerate() {
                    s += c * d.conj() * phase * moment(j, -(m as f64), w);
                }
            }
            s
        }
        (Payload::Trig { .. }, Payload::Poly { .. }) => product_integral(q, p, a, b).conj(),
    }
}

/// Merged breakpoints of two functions on the same domain.
fn common_pieces<'a>(
    f: &'a PiecewiseAnalytic,
    g: &'a PiecewiseAnalytic,
) -> Result<Vec<(f64, f64, &'a Payload, &'a Payload)>> {
    if f.repeats != g.repeats || f.domain() != g.domain() {
        return Err(Error::Mismatch(
            "functions live on different domains or periods".into(),
        ));
    }
    let mut cuts: Vec<f64> = f
        .pieces
        .iter()
        .chain(&g.pieces)
        .flat_map(|p| [p.a, p.b])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let payload_at = |h: &'a PiecewiseAnalytic, mid: f64| -> &'a Payload {
        let idx = h.pieces.partition_point(|p| p.b <= mid).min(h.pieces.len() - 1);
        &h.pieces[idx].payload
    };
    Ok(cuts
        .windows(2)
        .map(|c| {
            let mid = 0.5 * (c[0] + c[1]);
            (c[0], c[1], payload_at(f, mid), payload_at(g, mid))
        })
        .collect())
}

/// `Σ_d weights[d] ∫ f^{(d)} conj(g^{(d)})` over `[-π, π]` (or the domain of
/// non-periodic functions).
fn weighted_inner(f: &PiecewiseAnalytic, g: &PiecewiseAnalytic, weights: [f64; 3]) -> Result<Complex64> {
    let mut total = ZERO;
    for (a, b, p, q) in common_pieces(f, g)? {
        for (d, &wt) in weights.iter().enumerate() {
            if wt != 0.0 {
                total += product_integral(&p.derivative(d), &q.derivative(d), a, b) * wt;
            }
        }
    }
    Ok(total * f.multiplicity())
}

/// `⟨f, g⟩ = ∫ (f ḡ + f' ḡ' + f'' ḡ'')`.
pub fn w22_inner(f: &PiecewiseAnalytic, g: &PiecewiseAnalytic) -> Result<Complex64> {
    weighted_inner(f, g, [1.0, 1.0, 1.0])
}

/// `‖f‖²_{W^{2,2}}` in closed form. Junctions are re-checked for `C¹`.
pub fn w22_norm_sq(f: &PiecewiseAnalytic) -> Result<f64> {
    f.check_c1()?;
    Ok(weighted_inner(f, f, [1.0, 1.0, 1.0])?.re)
}

/// `‖f^{(order)}‖²_{L²}` for `order <= 2`.
pub fn l2_norm_sq(f: &PiecewiseAnalytic, order: usize) -> Result<f64> {
    let mut w = [0.0; 3];
    *w.get_mut(order)
        .ok_or_else(|| crate::error::invalid("derivative order must be at most 2"))? = 1.0;
    Ok(weighted_inner(f, f, w)?.re)
}
