//! Golden-section search for the maximum of a one-dimensional function.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenMax {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Maximizes `f` on `[lo, hi]` until the bracket is narrower than `width_tol`
/// or every probed value in the bracket agrees to within `flat_tol`.
///
/// The bracket is assumed to contain a single local maximum. The returned
/// point is the best one evaluated, endpoints included.
pub fn maximize<F>(mut f: F, lo: f64, hi: f64, width_tol: f64, flat_tol: f64) -> GoldenMax
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 4;

    let mut best = GoldenMax {
        x: a,
        value: fa,
        evaluations,
    };
    let consider = |x: f64, v: f64, best: &mut GoldenMax| {
        if v > best.value {
            best.x = x;
            best.value = v;
        }
    };
    consider(b, fb, &mut best);
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);

    while b - a > width_tol {
        let hi_v = fa.max(fb).max(fc).max(fd);
        let lo_v = fa.min(fb).min(fc).min(fd);
        if hi_v - lo_v <= flat_tol {
            break;
        }
        if fc >= fd {
            b = d;
            fb = fd;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            consider(c, fc, &mut best);
        } else {
            a = c;
            fa = fc;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            consider(d, fd, &mut best);
        }
        evaluations += 1;
    }
    best.evaluations = evaluations;
    best
}
