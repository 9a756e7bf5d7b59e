//! Special functions: spherical Bessel and Riccati-Bessel functions,
//! associated Legendre tables, Gauss-Legendre quadrature nodes, and the
//! Maxwell-eigenvalue-free criterion for the reference ball.

use num_complex::Complex64;
use serde::Serialize;

use crate::wave::WaveContext;
use crate::Error;

/// Spherical Bessel values `j_n`, `j'_n`, `y_n`, `y'_n` for orders `0..=n_max`.
///
/// `y_n` uses upward recurrence (stable); `j_n` uses Miller's downward
/// recurrence normalized by `j_0 = sin(x)/x`.
#[derive(Debug, Clone)]
pub struct BesselTable {
    pub x: f64,
    pub j: Vec<f64>,
    pub dj: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

impl BesselTable {
    pub fn build(n_max: usize, x: f64) -> Result<Self, Error> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Config(format!("Bessel argument must be positive, got {x}")));
        }
        // Work to order >= 1 so the derivative recurrences have a neighbor.
        let n_work = n_max.max(1);
        let mut j = sph_bessel_j(n_work, x)?;
        let mut y = vec![0.0; n_work + 1];
        y[0] = -x.cos() / x;
        y[1] = -x.cos() / (x * x) - x.sin() / x;
        for n in 1..n_work {
            y[n + 1] = (2 * n + 1) as f64 / x * y[n] - y[n - 1];
            if !y[n + 1].is_finite() {
                return Err(Error::BesselOverflow { order: n + 1, argument: x });
            }
        }
        let mut dj = derivative_from_values(&j, x);
        let mut dy = derivative_from_values(&y, x);
        j.truncate(n_max + 1);
        y.truncate(n_max + 1);
        dj.truncate(n_max + 1);
        dy.truncate(n_max + 1);
        Ok(BesselTable { x, j, dj, y, dy })
    }

    /// Hankel function of the first kind `h_n = j_n + i y_n` and derivative.
    pub fn hankel1(&self, n: usize) -> (Complex64, Complex64) {
        (
            Complex64::new(self.j[n], self.y[n]),
            Complex64::new(self.dj[n], self.dy[n]),
        )
    }
}

/// `f'_n` from values via `f'_0 = -f_1`, `f'_n = f_{n-1} - (n+1)/x f_n`.
fn derivative_from_values(f: &[f64], x: f64) -> Vec<f64> {
    debug_assert!(f.len() >= 2);
    let mut df = vec![0.0; f.len()];
    df[0] = -f[1];
    for n in 1..f.len() {
        df[n] = f[n - 1] - (n + 1) as f64 / x * f[n];
    }
    df
}

/// `j_0..j_{n_max}` by Miller's downward recurrence.
fn sph_bessel_j(n_max: usize, x: f64) -> Result<Vec<f64>, Error> {
    let mut j = vec![0.0; n_max + 1];
    j[0] = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    if n_max == 0 {
        return Ok(j);
    }
    // Start the downward pass well above both n_max and the turning point.
    let start = n_max + 16 + (1.5 * x) as usize + (n_max as f64).sqrt() as usize;
    let mut fp = 0.0_f64; // f_{m+1}
    let mut fc = 1e-280_f64; // f_m
    for m in (0..=start).rev() {
        let fm = (2 * m + 3) as f64 / x * fc - fp;
        fp = fc;
        fc = fm;
        if m <= n_max {
            j[m] = fm;
        }
        // Rescale to avoid overflow during the pass.
        if fc.abs() > 1e260 {
            let scale = 1e-260;
            fp *= scale;
            fc *= scale;
            for v in j.iter_mut() {
                *v *= scale;
            }
        }
    }
    let norm = j[0];
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::BesselOverflow { order: n_max, argument: x });
    }
    let scale = (if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x }) / norm;
    for v in j.iter_mut() {
        *v *= scale;
        if !v.is_finite() {
            return Err(Error::BesselOverflow { order: n_max, argument: x });
        }
    }
    Ok(j)
}

/// `j_0..j_{n_max}` and derivatives for complex argument (interior fields of
/// dielectric spheres). Downward recurrence normalized by `j_0 = sin(z)/z`.
pub fn sph_bessel_j_complex(n_max: usize, z: Complex64) -> Result<(Vec<Complex64>, Vec<Complex64>), Error> {
    if z.norm() < 1e-12 {
        return Err(Error::Config("complex Bessel argument too close to zero".into()));
    }
    let mut j = vec![Complex64::default(); n_max + 1];
    let j0 = z.sin() / z;
    j[0] = j0;
    if n_max > 0 {
        let start = n_max + 16 + (1.5 * z.norm()) as usize + (n_max as f64).sqrt() as usize;
        let mut fp = Complex64::default();
        let mut fc = Complex64::new(1e-280, 0.0);
        for m in (0..=start).rev() {
            let fm = (2 * m + 3) as f64 / z * fc - fp;
            fp = fc;
            fc = fm;
            if m <= n_max {
                j[m] = fm;
            }
            if fc.norm() > 1e260 {
                let scale = 1e-260;
                fp *= scale;
                fc *= scale;
                for v in j.iter_mut() {
                    *v *= scale;
                }
            }
        }
        // Bring the raw pass to O(1) before the complex division: squaring
        // a ~1e-250 denominator inside `/` would underflow to zero.
        let mag = j[0].norm();
        if mag == 0.0 || !mag.is_finite() {
            return Err(Error::BesselOverflow { order: n_max, argument: z.norm() });
        }
        let pre = 1.0 / mag;
        for v in j.iter_mut() {
            *v *= pre;
        }
        let scale = j0 / j[0];
        for v in j.iter_mut() {
            *v *= scale;
        }
        j[0] = j0;
    }
    let mut dj = vec![Complex64::default(); n_max + 1];
    dj[0] = if n_max > 0 { -j[1] } else { z.cos() / z - z.sin() / (z * z) };
    for n in 1..=n_max {
        dj[n] = j[n - 1] - (n + 1) as f64 / z * j[n];
    }
    for v in j.iter().chain(dj.iter()) {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::BesselOverflow { order: n_max, argument: z.norm() });
        }
    }
    Ok((j, dj))
}

/// Riccati-Bessel functions `psi_n = x j_n`, `xi_n = x h^(1)_n` and their
/// derivatives for orders `0..=n_max`.
#[derive(Debug, Clone)]
pub struct RiccatiTable {
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub xi: Vec<Complex64>,
    pub dxi: Vec<Complex64>,
}

pub fn riccati_bessel(n_max: usize, x: f64) -> Result<RiccatiTable, Error> {
    let t = BesselTable::build(n_max, x)?;
    let mut psi = Vec::with_capacity(n_max + 1);
    let mut dpsi = Vec::with_capacity(n_max + 1);
    let mut xi = Vec::with_capacity(n_max + 1);
    let mut dxi = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (h, dh) = t.hankel1(n);
        psi.push(x * t.j[n]);
        dpsi.push(t.j[n] + x * t.dj[n]);
        xi.push(x * h);
        dxi.push(h + x * dh);
    }
    Ok(RiccatiTable { psi, dpsi, xi, dxi })
}

/// Complex-argument `psi_n = z j_n(z)` and derivative.
pub fn riccati_psi_complex(n_max: usize, z: Complex64) -> Result<(Vec<Complex64>, Vec<Complex64>), Error> {
    let (j, dj) = sph_bessel_j_complex(n_max, z)?;
    let psi = (0..=n_max).map(|n| z * j[n]).collect();
    let dpsi = (0..=n_max).map(|n| j[n] + z * dj[n]).collect();
    Ok((psi, dpsi))
}

/// Associated Legendre table `P_n^m(cos theta)` with the Condon-Shortley
/// phase, together with theta-derivatives, for `0 <= m <= n <= n_max`.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    n_max: usize,
    /// p[n][m]
    p: Vec<Vec<f64>>,
    /// dp/dtheta[n][m]
    dp: Vec<Vec<f64>>,
}

impl LegendreTable {
    pub fn build(n_max: usize, cos_theta: f64) -> LegendreTable {
        let x = cos_theta.clamp(-1.0, 1.0);
        let s = (1.0 - x * x).max(0.0).sqrt(); // sin theta >= 0
        let mut p = vec![vec![0.0; n_max + 1]; n_max + 1];
        let mut dp = vec![vec![0.0; n_max + 1]; n_max + 1];
        p[0][0] = 1.0;
        // Diagonal: P_m^m = (2m-1)!! (-s)^m
        for m in 1..=n_max {
            p[m][m] = -(2.0 * m as f64 - 1.0) * s * p[m - 1][m - 1];
        }
        for m in 0..n_max {
            p[m + 1][m] = (2.0 * m as f64 + 1.0) * x * p[m][m];
        }
        for m in 0..=n_max {
            for n in (m + 2)..=n_max {
                p[n][m] = ((2 * n - 1) as f64 * x * p[n - 1][m] - (n + m - 1) as f64 * p[n - 2][m])
                    / (n - m) as f64;
            }
        }
        // sin-free identity: dP_n^m/dtheta = 0.5[P_n^{m+1} - (n+m)(n-m+1)P_n^{m-1}],
        // with P_n^{-1} = -P_n^1 / (n(n+1)).
        for n in 0..=n_max {
            for m in 0..=n {
                let upper = if m + 1 <= n { p[n][m + 1] } else { 0.0 };
                let lower = if m >= 1 {
                    (n + m) as f64 * (n - m + 1) as f64 * p[n][m - 1]
                } else if n >= 1 {
                    -p[n][1]
                } else {
                    0.0
                };
                dp[n][m] = 0.5 * (upper - lower);
            }
        }
        LegendreTable { n_max, p, dp }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn value(&self, n: usize, m: usize) -> f64 {
        self.p[n][m]
    }

    pub fn dtheta(&self, n: usize, m: usize) -> f64 {
        self.dp[n][m]
    }
}

/// Mie angular functions `pi_n = P_n^1(mu)/sin(theta)` and
/// `tau_n = dP_n^1(mu)/dtheta`, without the Condon-Shortley phase, for
/// `n = 1..=n_max` (index 0 of the returned vectors corresponds to n = 1).
///
/// The recurrence works in `mu = cos(theta)` directly, so it stays finite at
/// the poles where the `1/sin(theta)` form degenerates.
pub fn pi_tau(n_max: usize, mu: f64) -> (Vec<f64>, Vec<f64>) {
    let mut pi = Vec::with_capacity(n_max);
    let mut tau = Vec::with_capacity(n_max);
    let mut pi_prev = 0.0; // pi_0
    let mut pi_cur = 1.0; // pi_1
    for n in 1..=n_max {
        let nf = n as f64;
        let tau_n = nf * mu * pi_cur - (nf + 1.0) * pi_prev;
        pi.push(pi_cur);
        tau.push(tau_n);
        let pi_next = ((2.0 * nf + 1.0) * mu * pi_cur - (nf + 1.0) * pi_prev) / nf;
        pi_prev = pi_cur;
        pi_cur = pi_next;
    }
    (pi, tau)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess (Abramowitz & Stegun 25.4.30 style).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (pn, dpn) = legendre_poly_and_deriv(n, x);
            let dx = pn / dpn;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dpn) = legendre_poly_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dpn * dpn);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, dpn) = legendre_poly_and_deriv(n, 0.0);
        weights[n / 2] = 2.0 / (dpn * dpn);
    }
    (nodes, weights)
}

fn legendre_poly_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Outcome of the Maxwell-eigenvalue-free scan for a ball of radius `r`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueFreeReport {
    pub kr: f64,
    pub n_max: usize,
    /// Smallest `|j_n(kr)|` or `|j_n(kr) + kr j'_n(kr)|` over the orders
    /// that can actually carry a zero (`n <= kr`).
    pub margin: f64,
    /// Order at which the margin is attained.
    pub critical_order: usize,
    /// Which of the two quantities attains the margin.
    pub critical_kind: EigenvalueKind,
    /// Both quantities verified strictly positive for every order past the
    /// turning point up to `n_max` (they are provably nonzero there; their
    /// magnitudes decay super-exponentially and carry no resonance
    /// information).
    pub tail_positive: bool,
    pub tolerance: f64,
    pub admissible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EigenvalueKind {
    /// `j_n(kr)` (interior resonance of the M-type modes).
    Bessel,
    /// `j_n(kr) + kr j'_n(kr)` (N-type modes).
    BesselCombination,
}

pub const EIGENVALUE_FREE_TOL: f64 = 1e-8;

/// Default scan depth: past `kr` by a fixed buffer, beyond which both
/// quantities are strictly positive at desk scale.
pub fn default_scan_order(kr: f64) -> usize {
    kr.ceil() as usize + 20
}

/// Checks that `k` is not a Maxwell eigenvalue of the ball of radius `r`:
/// `j_n(kr) != 0` and `j_n(kr) + kr j'_n(kr) != 0` for `n = 0..=n_max`,
/// with "nonzero" meaning a margin above [`EIGENVALUE_FREE_TOL`].
pub fn maxwell_eigenvalue_free(ctx: WaveContext, r: f64, n_max: usize) -> Result<EigenvalueFreeReport, Error> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Config(format!("ball radius must be positive, got {r}")));
    }
    let kr = ctx.k() * r;
    let n_req = default_scan_order(kr);
    let n_scan = n_max.max(n_req);
    let t = BesselTable::build(n_scan, kr)?;
    // The first zeros of j_n and psi'_n lie above n + 1.57, so only orders
    // n <= kr can vanish; beyond that the functions are strictly positive.
    let n_margin = (kr.floor() as usize).min(n_scan);
    let mut margin = f64::INFINITY;
    let mut critical_order = 0;
    let mut critical_kind = EigenvalueKind::Bessel;
    let mut tail_positive = true;
    for n in 0..=n_scan {
        let m1 = t.j[n];
        // j_n + x j_n' = psi_n'(x)
        let m2 = t.j[n] + kr * t.dj[n];
        if n <= n_margin {
            if m1.abs() < margin {
                margin = m1.abs();
                critical_order = n;
                critical_kind = EigenvalueKind::Bessel;
            }
            if m2.abs() < margin {
                margin = m2.abs();
                critical_order = n;
                critical_kind = EigenvalueKind::BesselCombination;
            }
        } else if m1 <= 0.0 || m2 <= 0.0 {
            tail_positive = false;
        }
    }
    Ok(EigenvalueFreeReport {
        kr,
        n_max: n_scan,
        margin,
        critical_order,
        critical_kind,
        tail_positive,
        tolerance: EIGENVALUE_FREE_TOL,
        admissible: margin > EIGENVALUE_FREE_TOL && tail_positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn j0_closed_form() {
        let t = BesselTable::build(0, std::f64::consts::PI).unwrap();
        assert!(t.j[0].abs() < 1e-14, "j_0(pi) = {}", t.j[0]);
        let t = BesselTable::build(0, 1.0).unwrap();
        assert_abs_diff_eq!(t.j[0], 1.0_f64.sin(), epsilon = 1e-15);
    }

    /// Identity oracle: j_n y'_n - j'_n y_n = 1/x^2.
    #[test]
    fn wronskian_identity() {
        let x = 2.7;
        let t = BesselTable::build(10, x).unwrap();
        for n in 0..=10 {
            let w = t.j[n] * t.dy[n] - t.dj[n] * t.y[n];
            assert_relative_eq!(w, 1.0 / (x * x), max_relative = 1e-12);
        }
        // Spot checks across the argument range used by the solvers.
        for &x in &[0.1, 0.5, 5.0, 17.3, 50.0] {
            let t = BesselTable::build(12, x).unwrap();
            for n in 0..=12 {
                let w = t.j[n] * t.dy[n] - t.dj[n] * t.y[n];
                assert_relative_eq!(w, 1.0 / (x * x), max_relative = 1e-10);
            }
        }
    }

    /// Exact-arithmetic series oracle for j_n at rational arguments: the
    /// ascending series is summed in `BigRational`, so the alternating-sum
    /// cancellation at large x costs no precision (equivalent to hundreds
    /// of decimal digits).
    fn j_series_exact(n: usize, x_num: i64, x_den: i64) -> f64 {
        use num::bigint::BigInt;
        use num::rational::BigRational;
        use num::{One, Signed, Zero};

        fn to_f64(r: &BigRational) -> f64 {
            use num::ToPrimitive;
            if r.is_zero() {
                return 0.0;
            }
            let num = r.numer();
            let den = r.denom();
            let s = 128 + (den.bits() as i64 - num.bits() as i64).max(0);
            let q: BigInt = (num << s) / den;
            q.to_f64().unwrap() * 2f64.powi(-(s as i32))
        }

        let x = BigRational::new(BigInt::from(x_num), BigInt::from(x_den));
        let half_x2 = &x * &x / BigRational::from_integer(BigInt::from(2));
        let mut term = BigRational::one();
        let mut sum = BigRational::one();
        for m in 1..400i64 {
            // term_m = (-x^2/2)^m / (m! * prod_{k=1..m}(2n+2k+1))
            term = -term * &half_x2
                / BigRational::from_integer(BigInt::from(m * (2 * n as i64 + 2 * m + 1)));
            sum += &term;
            if m > 10 && term.abs() * BigRational::from_integer(BigInt::from(10).pow(30)) < sum.abs() {
                break;
            }
        }
        let mut pref = BigRational::one();
        for k in 1..=n {
            pref = pref * &x / BigRational::from_integer(BigInt::from(2 * k as i64 + 1));
        }
        to_f64(&(pref * sum))
    }

    #[test]
    fn downward_recurrence_matches_series_oracle() {
        for &(num, den) in &[(1i64, 10i64), (7, 10), (2, 1), (19, 2), (30, 1)] {
            let x = num as f64 / den as f64;
            let t = BesselTable::build(60, x).unwrap();
            for n in (0..=60).step_by(5) {
                let oracle = j_series_exact(n, num, den);
                if oracle.abs() > 1e-280 {
                    assert_relative_eq!(t.j[n], oracle, max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn riccati_values() {
        // psi_0(x) = sin x, so psi_0(pi/2) = 1; xi_0 = -i e^{ix} has modulus 1.
        let t = riccati_bessel(0, std::f64::consts::FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(t.psi[0], 1.0, epsilon = 1e-14);
        let t = riccati_bessel(0, 1.0).unwrap();
        assert_abs_diff_eq!(t.xi[0].norm(), 1.0, epsilon = 1e-13);
        // xi_0 = -i e^{ix} exactly
        let expect = -Complex64::i() * Complex64::new(0.0, 1.0).exp();
        assert_abs_diff_eq!((t.xi[0] - expect).norm(), 0.0, epsilon = 1e-13);
    }

    /// Internal consistency: Riccati values vs direct j/h products.
    #[test]
    fn riccati_consistent_with_bessel_products() {
        let x = 5.0;
        let n_max = 20;
        let r = riccati_bessel(n_max, x).unwrap();
        let b = BesselTable::build(n_max, x).unwrap();
        for n in 0..=n_max {
            let (h, dh) = b.hankel1(n);
            assert_relative_eq!(r.psi[n], x * b.j[n], max_relative = 1e-12);
            assert_relative_eq!(r.dpsi[n], b.j[n] + x * b.dj[n], max_relative = 1e-12);
            assert!((r.xi[n] - x * h).norm() <= 1e-12 * (x * h).norm());
            assert!((r.dxi[n] - (h + x * dh)).norm() <= 1e-12 * (h + x * dh).norm());
        }
    }

    #[test]
    fn complex_bessel_reduces_to_real() {
        let x = 3.7;
        let (jc, djc) = sph_bessel_j_complex(15, Complex64::new(x, 0.0)).unwrap();
        let t = BesselTable::build(15, x).unwrap();
        for n in 0..=15 {
            assert_relative_eq!(jc[n].re, t.j[n], max_relative = 1e-11);
            assert_abs_diff_eq!(jc[n].im, 0.0, epsilon = 1e-14);
            assert_relative_eq!(djc[n].re, t.dj[n], max_relative = 1e-10);
        }
    }

    #[test]
    fn legendre_table_invariants() {
        for &mu in &[1.0, -1.0] {
            let t = LegendreTable::build(8, mu);
            for n in 0..=8 {
                assert_abs_diff_eq!(t.value(n, 0).abs(), 1.0, epsilon = 1e-14);
                for m in 1..=n {
                    assert_abs_diff_eq!(t.value(n, m), 0.0, epsilon = 1e-14);
                }
            }
            assert_abs_diff_eq!(t.value(3, 0), if mu > 0.0 { 1.0 } else { -1.0 }, epsilon = 1e-14);
        }
        // Condon-Shortley: P_1^1(cos t) = -sin t.
        let t = LegendreTable::build(2, 0.6);
        let s = (1.0_f64 - 0.36).sqrt();
        assert_abs_diff_eq!(t.value(1, 1), -s, epsilon = 1e-14);
        // P_2^1 = -3 mu sqrt(1-mu^2)
        assert_abs_diff_eq!(t.value(2, 1), -3.0 * 0.6 * s, epsilon = 1e-14);
    }

    #[test]
    fn legendre_dtheta_matches_finite_differences() {
        let theta: f64 = 1.1;
        let h = 1e-6;
        let t0 = LegendreTable::build(6, (theta - h).cos());
        let t1 = LegendreTable::build(6, (theta + h).cos());
        let tc = LegendreTable::build(6, theta.cos());
        for n in 0..=6 {
            for m in 0..=n {
                let fd = (t1.value(n, m) - t0.value(n, m)) / (2.0 * h);
                assert_abs_diff_eq!(tc.dtheta(n, m), fd, epsilon = 1e-7 * (1.0 + fd.abs()));
            }
        }
    }

    #[test]
    fn pi_tau_consistent_with_legendre() {
        // pi_n = -P_n^1(CS)/sin, tau_n = -dP_n^1(CS)/dtheta.
        let theta: f64 = 0.9;
        let mu = theta.cos();
        let s = theta.sin();
        let (pi, tau) = pi_tau(6, mu);
        let t = LegendreTable::build(6, mu);
        for n in 1..=6 {
            assert_relative_eq!(pi[n - 1], -t.value(n, 1) / s, max_relative = 1e-12);
            assert_relative_eq!(tau[n - 1], -t.dtheta(n, 1), max_relative = 1e-12);
        }
    }

    #[test]
    fn pi_tau_pole_limits() {
        let (pi, tau) = pi_tau(5, 1.0);
        for n in 1..=5 {
            let expect = n as f64 * (n + 1) as f64 / 2.0;
            assert_abs_diff_eq!(pi[n - 1], expect, epsilon = 1e-12);
            assert_abs_diff_eq!(tau[n - 1], expect, epsilon = 1e-12);
        }
        let (pi, tau) = pi_tau(5, -1.0);
        for n in 1..=5 {
            let expect = n as f64 * (n + 1) as f64 / 2.0;
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert_abs_diff_eq!(pi[n - 1], sign * expect, epsilon = 1e-12);
            assert_abs_diff_eq!(tau[n - 1], -sign * expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // exact for degree <= 15
        let integral: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(14)).sum();
        assert_relative_eq!(integral, 2.0 / 15.0, max_relative = 1e-13);
        let total: f64 = w.iter().sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn eigenvalue_free_examples() {
        let ctx = WaveContext::new(1.0).unwrap();
        // j_0(pi) = 0: radius pi is resonant.
        let rep = maxwell_eigenvalue_free(ctx, std::f64::consts::PI, 40).unwrap();
        assert!(!rep.admissible);
        assert_eq!(rep.critical_order, 0);
        assert_eq!(rep.critical_kind, EigenvalueKind::Bessel);

        // radius 1 is clean (oracle: scan with the high-accuracy table).
        let rep = maxwell_eigenvalue_free(ctx, 1.0, 40).unwrap();
        assert!(rep.admissible, "margin {}", rep.margin);
        assert!(rep.margin > 1e-3, "margin {}", rep.margin);

        // k = 2, r = pi/2: kr = pi resonant again.
        let ctx2 = WaveContext::new(2.0).unwrap();
        let rep = maxwell_eigenvalue_free(ctx2, std::f64::consts::FRAC_PI_2, 40).unwrap();
        assert!(!rep.admissible);
    }

    /// Loosening the tolerance never flips admissible from true to false:
    /// admissibility is monotone in the margin comparison.
    #[test]
    fn eigenvalue_free_monotone_in_tolerance() {
        let ctx = WaveContext::new(1.0).unwrap();
        for &r in &[0.5, 1.0, 2.0, 3.0, 3.1, std::f64::consts::PI] {
            let rep = maxwell_eigenvalue_free(ctx, r, 40).unwrap();
            for &tol in &[1e-12, 1e-10, 1e-8, 1e-6] {
                let admissible_at = rep.margin > tol;
                if tol <= rep.tolerance && rep.admissible {
                    assert!(admissible_at);
                }
            }
        }
    }
}

