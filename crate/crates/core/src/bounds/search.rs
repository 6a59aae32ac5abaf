//! One-dimensional search primitives used by the bound optimisers.

/// Minimiser of `max(dec(x), inc(x))` on a closed interval.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Crossing {
    pub x: f64,
    pub value: f64,
}

const MAX_BISECTIONS: usize = 200;

/// Minimise `max(dec(x), inc(x))` over `[lo, hi]`, where `eval` returns
/// `(dec(x), inc(x))`, `dec` is nonincreasing and `inc` is nondecreasing.
///
/// The minimiser is the crossing point of the two curves, or an endpoint
/// when they do not cross. Bisection stops once the bracket is narrower than
/// `tol * (hi - lo)`. Either curve may be `+∞`.
pub(crate) fn minimax_crossing<F>(lo: f64, hi: f64, tol: f64, mut eval: F) -> Crossing
where
    F: FnMut(f64) -> (f64, f64),
{
    let (dec_lo, inc_lo) = eval(lo);
    if dec_lo <= inc_lo {
        return Crossing { x: lo, value: inc_lo };
    }
    let (dec_hi, inc_hi) = eval(hi);
    if dec_hi >= inc_hi {
        return Crossing { x: hi, value: dec_hi };
    }
    let width = (hi - lo) * tol;
    let (mut left, mut right) = (lo, hi);
    // invariant: dec > inc at `left`, dec <= inc at `right`
    let (mut left_val, mut right_val) = (dec_lo, inc_hi);
    for _ in 0..MAX_BISECTIONS {
        if right - left <= width {
            break;
        }
        let mid = 0.5 * (left + right);
        if mid <= left || mid >= right {
            break;
        }
        let (dec, inc) = eval(mid);
        if dec > inc {
            left = mid;
            left_val = dec;
        } else {
            right = mid;
            right_val = inc;
        }
    }
    if left_val < right_val {
        Crossing {
            x: left,
            value: left_val,
        }
    } else {
        Crossing {
            x: right,
            value: right_val,
        }
    }
}

/// Smallest root of a nondecreasing function on `[lo, hi]`, assuming
/// `f(lo) < 0 <= f(hi)`. Returns the right end of the final bracket.
pub(crate) fn bisect_increasing<F>(lo: f64, hi: f64, tol: f64, mut f: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    let (mut left, mut right) = (lo, hi);
    for _ in 0..MAX_BISECTIONS {
        if right - left <= tol {
            break;
        }
        let mid = 0.5 * (left + right);
        if mid <= left || mid >= right {
            break;
        }
        if f(mid) < 0.0 {
            left = mid;
        } else {
            right = mid;
        }
    }
    right
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a local minimum of `f` on `[lo, hi]`.
/// Returns `(x, f(x))` for the best point evaluated.
pub(crate) fn golden_section<F>(lo: f64, hi: f64, xtol: f64, mut f: F) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..MAX_BISECTIONS {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    best
}
