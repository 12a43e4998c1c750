//! Small shared numerical utilities: quadrature, interpolation, regression,
//! a 3×3 real eigen-solver, and CSV float formatting.

/// Trapezoid rule for samples `f` on a strictly increasing grid `x`.
pub fn trapezoid(x: &[f64], f: &[f64]) -> f64 {
    assert_eq!(x.len(), f.len());
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    }
    acc
}

/// Trapezoid rule on a uniform grid with spacing `dx`: half weights at the
/// two ends, full weights inside.
pub fn trapezoid_uniform(dx: f64, f: &[f64]) -> f64 {
    if f.len() < 2 {
        return 0.0;
    }
    let inner: f64 = f[1..f.len() - 1].iter().sum();
    dx * (inner + 0.5 * (f[0] + f[f.len() - 1]))
}

/// Cubic Hermite interpolation on `[x0, x1]` from endpoint values and
/// derivatives. `s` is the normalized coordinate `(x - x0)/(x1 - x0)`.
#[inline]
pub fn hermite(s: f64, h: f64, f0: f64, f1: f64, d0: f64, d1: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * f0
        + (s3 - 2.0 * s2 + s) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * f1
        + (s3 - s2) * h * d1
}

/// Derivative (with respect to x) of the cubic Hermite interpolant above.
#[inline]
pub fn hermite_deriv(s: f64, h: f64, f0: f64, f1: f64, d0: f64, d1: f64) -> f64 {
    let s2 = s * s;
    (6.0 * s2 - 6.0 * s) * (f0 - f1) / h
        + (3.0 * s2 - 4.0 * s + 1.0) * d0
        + (3.0 * s2 - 2.0 * s) * d1
}

/// Least-squares straight line `y ≈ a + b x`; returns `(a, b)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    let b = (n * sxy - sx * sy) / det;
    let a = (sy - b * sx) / n;
    (a, b)
}

/// Real roots of `x^3 + a x^2 + b x + c`, by the trigonometric/Cardano
/// method. Returns 1 or 3 roots (a double root is reported twice).
pub fn cubic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    // Depressed cubic t^3 + p t + q with x = t - a/3.
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let mut roots = if disc > 0.0 {
        // Three distinct real roots (trigonometric form; p < 0 here).
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect::<Vec<_>>()
    } else {
        // One real root (Cardano), plus possibly a real double root.
        let half_q = q / 2.0;
        let d = (half_q * half_q + p * p * p / 27.0).max(0.0).sqrt();
        let u = (-half_q + d).cbrt();
        let w = (-half_q - d).cbrt();
        let mut r = vec![u + w + shift];
        if disc == 0.0 && p != 0.0 {
            r.push(-(u + w) / 2.0 + shift);
            r.push(-(u + w) / 2.0 + shift);
        }
        r
    };
    // One Newton polish per root on the original cubic.
    for x in roots.iter_mut() {
        for _ in 0..2 {
            let f = ((*x + a) * *x + b) * *x + c;
            let df = (3.0 * *x + 2.0 * a) * *x + b;
            if df != 0.0 {
                *x -= f / df;
            }
        }
    }
    roots
}

/// Eigenvalues of a real 3×3 matrix, as `(real_roots, complex_pair_re)`.
/// If the characteristic cubic has one real root, the real part of the
/// complex-conjugate pair is returned in the second slot.
pub fn eigenvalues_3x3(m: &[[f64; 3]; 3]) -> (Vec<f64>, Option<f64>) {
    let tr = m[0][0] + m[1][1] + m[2][2];
    // Sum of principal 2x2 minors.
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // charpoly: λ^3 - tr λ^2 + minors λ - det
    let roots = cubic_real_roots(-tr, minors, -det);
    if roots.len() == 3 {
        (roots, None)
    } else {
        // Remaining quadratic factor λ^2 + βλ + γ with β = root - tr.
        let pair_re = (tr - roots[0]) / 2.0;
        (roots, Some(pair_re))
    }
}

/// Unit-norm null vector of a rank-2 real 3×3 matrix, computed as the cross
/// product of the two most independent rows.
pub fn null_vector_3x3(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let cross = |a: &[f64; 3], b: &[f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let candidates = [
        cross(&m[0], &m[1]),
        cross(&m[0], &m[2]),
        cross(&m[1], &m[2]),
    ];
    let norm = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let best = candidates
        .iter()
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .unwrap();
    let n = norm(best);
    [best[0] / n, best[1] / n, best[2] / n]
}

/// Quintic smoothstep: 0 at s≤0, 1 at s≥1, C² monotone ramp in between with
/// maximum slope 15/8 < 2.
pub fn smoothstep5(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
}

/// Format a float with 17 significant digits, enough to round-trip f64
/// exactly, for bit-faithful CSV comparison.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let x: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let f: Vec<f64> = x.iter().map(|&t| 3.0 * t + 1.0).collect();
        assert_relative_eq!(trapezoid(&x, &f), 2.5, max_relative = 1e-14);
        assert_relative_eq!(trapezoid_uniform(0.1, &f), 2.5, max_relative = 1e-14);
    }

    #[test]
    fn hermite_reproduces_cubic() {
        // f(x) = x^3 - 2x on [1, 3]
        let f = |x: f64| x * x * x - 2.0 * x;
        let d = |x: f64| 3.0 * x * x - 2.0;
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            let x = 1.0 + 2.0 * s;
            assert_relative_eq!(
                hermite(s, 2.0, f(1.0), f(3.0), d(1.0), d(3.0)),
                f(x),
                max_relative = 1e-13
            );
            assert_relative_eq!(
                hermite_deriv(s, 2.0, f(1.0), f(3.0), d(1.0), d(3.0)),
                d(x),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn linear_fit_recovers_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let (a, b) = linear_fit(&x, &y);
        assert_relative_eq!(a, 1.0, epsilon = 1e-12);
        assert_relative_eq!(b, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn cubic_roots_three_real() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let mut r = cubic_real_roots(-6.0, 11.0, -6.0);
        r.sort_by(f64::total_cmp);
        assert_relative_eq!(r[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(r[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(r[2], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn cubic_roots_one_real() {
        // (x-2)(x^2+1) = x^3 - 2x^2 + x - 2
        let r = cubic_real_roots(-2.0, 1.0, -2.0);
        assert_eq!(r.len(), 1);
        assert_relative_eq!(r[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn eigen_3x3_known_matrix() {
        // Upper triangular: eigenvalues on the diagonal.
        let m = [[2.0, 1.0, 0.0], [0.0, -1.0, 3.0], [0.0, 0.0, 0.5]];
        let (mut roots, pair) = eigenvalues_3x3(&m);
        assert!(pair.is_none());
        roots.sort_by(f64::total_cmp);
        assert_relative_eq!(roots[0], -1.0, epsilon = 1e-10);
        assert_relative_eq!(roots[1], 0.5, epsilon = 1e-10);
        assert_relative_eq!(roots[2], 2.0, epsilon = 1e-10);
    }

    #[test]
    fn null_vector_annihilated() {
        // Rank-2 matrix with null vector (1, 1, 1)/sqrt(3).
        let m = [[1.0, -2.0, 1.0], [0.0, 1.0, -1.0], [1.0, -1.0, 0.0]];
        let n = null_vector_3x3(&m);
        for row in &m {
            let dot: f64 = row.iter().zip(&n).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-12);
        }
    }

    #[test]
    fn smoothstep_endpoints_and_slope() {
        assert_eq!(smoothstep5(-1.0), 0.0);
        assert_eq!(smoothstep5(2.0), 1.0);
        assert_relative_eq!(smoothstep5(0.5), 0.5, epsilon = 1e-14);
        // max slope at s=1/2 is 15/8
        let h = 1e-6;
        let slope = (smoothstep5(0.5 + h) - smoothstep5(0.5 - h)) / (2.0 * h);
        assert_relative_eq!(slope, 15.0 / 8.0, epsilon = 1e-6);
    }

    #[test]
    fn fmt_round_trips() {
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, -2.5e-17, 6.02e23] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }
}
