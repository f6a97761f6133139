//! Gabor analysis and synthesis operators, the frame operator in its
//! pointwise-multiplier form, and the Wexler–Raz style duality certifier.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::signals::SampledSignal;
use crate::windows::Window;
use num_complex::Complex64;
use rayon::prelude::*;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Time-frequency lattice: translation step `a`, modulation step `b`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Lattice {
    pub a: f64,
    pub b: f64,
}

impl Lattice {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lattice steps must be positive, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b })
    }
}

/// Inclusive integer index range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IdxRange {
    pub lo: i64,
    pub hi: i64,
}

impl IdxRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidConfig(format!("empty index range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn symmetric(radius: i64) -> Self {
        Self { lo: -radius, hi: radius }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// Coefficients `c_{m,n} = <f, E_{mb} T_{na} g>` over inclusive index ranges.
#[derive(Debug, Clone)]
pub struct GaborCoefficients {
    pub m_range: IdxRange,
    pub n_range: IdxRange,
    /// Row-major over m, then n.
    pub values: Vec<Complex64>,
}

impl GaborCoefficients {
    pub fn zeros(m_range: IdxRange, n_range: IdxRange) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); m_range.len() * n_range.len()];
        Self { m_range, n_range, values }
    }

    #[inline]
    fn index(&self, m: i64, n: i64) -> usize {
        let mi = (m - self.m_range.lo) as usize;
        let ni = (n - self.n_range.lo) as usize;
        mi * self.n_range.len() + ni
    }

    pub fn get(&self, m: i64, n: i64) -> Complex64 {
        self.values[self.index(m, n)]
    }

    pub fn set(&mut self, m: i64, n: i64, v: Complex64) {
        let i = self.index(m, n);
        self.values[i] = v;
    }
}

/// The time-frequency shift `E_{mb} T_{na} w`, evaluatable as a complex function.
#[derive(Debug, Clone, Copy)]
pub struct TimeFreqShift<'a> {
    pub window: &'a Window,
    pub m: i64,
    pub n: i64,
    pub lattice: Lattice,
}

/// `x -> e^{2 pi i m b x} w(x - n a)`.
pub fn modulate_translate(w: &Window, m: i64, n: i64, lattice: Lattice) -> TimeFreqShift<'_> {
    TimeFreqShift { window: w, m, n, lattice }
}

impl TimeFreqShift<'_> {
    pub fn eval(&self, x: f64) -> Complex64 {
        let phase = TWO_PI * self.m as f64 * self.lattice.b * x;
        let value = self.window.eval(x - self.n as f64 * self.lattice.a);
        Complex64::from_polar(1.0, phase) * value
    }

    pub fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.window.support();
        let shift = self.n as f64 * self.lattice.a;
        (lo + shift, hi + shift)
    }
}

fn trapezoid_weight(i: usize, count: usize) -> f64 {
    if i == 0 || i + 1 == count {
        0.5
    } else {
        1.0
    }
}

/// Analysis coefficients by composite trapezoid quadrature on the signal grid.
///
/// The samples define `f` on the grid span; `f` is treated as identically zero
/// outside it, so window translates reaching past the grid only integrate over
/// the covered part.
pub fn analysis(
    f: &SampledSignal,
    w: &Window,
    lattice: Lattice,
    m_range: IdxRange,
    n_range: IdxRange,
) -> GaborCoefficients {
    let grid = f.grid;
    let pairs: Vec<(i64, i64)> = m_range
        .iter()
        .flat_map(|m| n_range.iter().map(move |n| (m, n)))
        .collect();
    let values: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(m, n)| {
            let shift = n as f64 * lattice.a;
            let freq = TWO_PI * m as f64 * lattice.b;
            let (wlo, whi) = w.support();
            // restrict to grid indices where the translate is supported
            let i_lo = (((wlo + shift) - grid.origin) / grid.step).floor().max(0.0) as usize;
            let i_hi_f = (((whi + shift) - grid.origin) / grid.step).ceil();
            let i_hi = if i_hi_f < 0.0 { 0 } else { (i_hi_f as usize).min(grid.count - 1) };
            let mut acc = Complex64::new(0.0, 0.0);
            for i in i_lo..=i_hi {
                let x = grid.point(i);
                let wv = w.eval(x - shift);
                if wv == 0.0 {
                    continue;
                }
                let kernel = Complex64::from_polar(1.0, -freq * x);
                acc += kernel * (f.values[i] * wv * trapezoid_weight(i, grid.count));
            }
            acc * grid.step
        })
        .collect();
    GaborCoefficients { m_range, n_range, values }
}

/// Result of a synthesis or reconstruction: the real part of the output plus
/// the largest imaginary magnitude encountered (a consistency diagnostic; it
/// vanishes up to roundoff for conjugate-symmetric coefficients).
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub signal: SampledSignal,
    pub imag_residual: f64,
}

/// `sum_{m,n} c_{m,n} e^{2 pi i m b x} g(x - n a)` sampled on `grid`.
pub fn synthesis(
    c: &GaborCoefficients,
    g: &Window,
    lattice: Lattice,
    grid: Grid,
) -> Synthesis {
    let points: Vec<(f64, f64)> = (0..grid.count)
        .into_par_iter()
        .map(|i| {
            let x = grid.point(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for m in c.m_range.iter() {
                let phase = Complex64::from_polar(1.0, TWO_PI * m as f64 * lattice.b * x);
                for n in c.n_range.iter() {
                    let gv = g.eval(x - n as f64 * lattice.a);
                    if gv != 0.0 {
                        acc += c.get(m, n) * phase * gv;
                    }
                }
            }
            (acc.re, acc.im.abs())
        })
        .collect();
    let imag_residual = points.iter().fold(0.0f64, |a, &(_, im)| a.max(im));
    let values = points.into_iter().map(|(re, _)| re).collect();
    Synthesis { signal: SampledSignal { grid, values }, imag_residual }
}

/// The gram function `G(x) = sum_n |g(x - n a)|^2`; the lattice sum is finite
/// by compact support.
pub fn gram_value(g: &Window, a: f64, x: f64) -> f64 {
    let (lo, hi) = g.support();
    let n_min = ((x - hi) / a).ceil() as i64;
    let n_max = ((x - lo) / a).floor() as i64;
    let mut sum = 0.0;
    for n in n_min..=n_max {
        let v = g.eval(x - n as f64 * a);
        sum += v * v;
    }
    sum
}

fn require_multiplier_form(g: &Window, lattice: Lattice) -> Result<()> {
    if g.support_len() > 1.0 / lattice.b + 1e-12 {
        return Err(Error::HypothesisViolated(format!(
            "the pointwise frame-operator form needs supp g within one modulation period: \
             support length {} > 1/b = {}",
            g.support_len(),
            1.0 / lattice.b
        )));
    }
    Ok(())
}

/// Apply the frame operator pointwise: `(S f)(x) = G(x) f(x) / b`.
///
/// Valid only when the window support fits in an interval of length `1/b`;
/// other windows are rejected rather than silently approximated.
pub fn frame_operator_apply(
    f: &SampledSignal,
    g: &Window,
    lattice: Lattice,
) -> Result<SampledSignal> {
    require_multiplier_form(g, lattice)?;
    let values = f
        .grid
        .points()
        .zip(&f.values)
        .map(|(x, &v)| gram_value(g, lattice.a, x) * v / lattice.b)
        .collect();
    Ok(SampledSignal { grid: f.grid, values })
}

/// Numerical duality certificate for the pair `(g, h)` at `a = 1`:
///
/// ```text
///   max_{|n| <= n_max} max_{x in [0,1] grid} | sum_m g(x - n/b + m) h(x + m) - b delta_{n,0} |
/// ```
///
/// A residual at roundoff level certifies that the two windows generate dual
/// Gabor frames for the lattice.
pub fn duality_residual(
    g: &Window,
    h: &Window,
    lattice: Lattice,
    x_step: f64,
    n_max: i64,
) -> Result<f64> {
    if (lattice.a - 1.0).abs() > 1e-12 {
        return Err(Error::UnsupportedLattice { a: lattice.a });
    }
    if !(x_step > 0.0) || n_max < 0 {
        return Err(Error::InvalidConfig(format!(
            "duality residual needs x_step > 0 and n_max >= 0, got {x_step}, {n_max}"
        )));
    }
    let grid = Grid::aligned_cover(0.0, 1.0, x_step)?;
    let (glo, ghi) = g.support();
    let (hlo, hhi) = h.support();
    let mut worst: f64 = 0.0;
    for n in -n_max..=n_max {
        let shift = n as f64 / lattice.b;
        let target = if n == 0 { lattice.b } else { 0.0 };
        for x in grid.points() {
            if x > 1.0 + 1e-12 {
                break;
            }
            // m must place x + m inside supp h and x - shift + m inside supp g
            let m_lo = (hlo - x).ceil().max((glo + shift - x).ceil()) as i64;
            let m_hi = (hhi - x).floor().min((ghi + shift - x).floor()) as i64;
            let mut sum = 0.0;
            for m in m_lo..=m_hi {
                sum += g.eval(x - shift + m as f64) * h.eval(x + m as f64);
            }
            worst = worst.max((sum - target).abs());
        }
    }
    Ok(worst)
}

/// Truncated frame expansion: coefficients against `dual`, synthesis with
/// `generator`, both over the given index ranges, evaluated on the signal grid.
///
/// Swapping the two window arguments gives the flipped composition; for a
/// certified dual pair over wide-enough ranges the two agree up to truncation
/// and quadrature error.
pub fn reconstruct(
    f: &SampledSignal,
    generator: &Window,
    dual: &Window,
    lattice: Lattice,
    m_range: IdxRange,
    n_range: IdxRange,
) -> Synthesis {
    let coeffs = analysis(f, dual, lattice, m_range, n_range);
    synthesis(&coeffs, generator, lattice, f.grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{make_signal, map_to_interval, SignalKind};
    use crate::windows::bspline;

    fn b2_signal(step: f64) -> SampledSignal {
        let g = bspline(2).unwrap();
        let grid = Grid::aligned_cover(-2.0, 2.0, step).unwrap();
        let values = grid.points().map(|x| g.eval(x)).collect();
        SampledSignal::new(grid, values).unwrap()
    }

    #[test]
    fn modulate_translate_identities() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let id = modulate_translate(&g, 0, 0, lat);
        for &x in &[-0.7, 0.0, 0.4] {
            assert_eq!(id.eval(x), Complex64::new(g.eval(x), 0.0));
        }
        let shifted = modulate_translate(&g, 0, 2, lat);
        assert_eq!(shifted.support(), (1.0, 3.0));
        let modulated = modulate_translate(&g, 1, 0, lat);
        assert_eq!(modulated.eval(0.0), Complex64::new(g.eval(0.0), 0.0));
    }

    #[test]
    fn analysis_of_zero_signal_is_zero() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let f = SampledSignal::zeros(Grid::over(-2.0, 2.0, 512).unwrap());
        let c = analysis(&f, &g, lat, IdxRange::symmetric(3), IdxRange::symmetric(3));
        assert!(c.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn analysis_recovers_window_energy() {
        // c_{0,0} with f = g = B2 is the integral of B2^2 = 2/3.
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let f = b2_signal(1.0 / 8192.0);
        let c = analysis(&f, &g, lat, IdxRange::symmetric(0), IdxRange::symmetric(0));
        let v = c.get(0, 0);
        assert!((v.re - 2.0 / 3.0).abs() < 1e-8, "got {v}");
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn analysis_conjugate_symmetry_for_real_data() {
        let g = bspline(3).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let f = map_to_interval(&make_signal(SignalKind::Doppler, 1024).unwrap(), -3.0, 3.0)
            .unwrap();
        let c = analysis(&f, &g, lat, IdxRange::symmetric(3), IdxRange::symmetric(3));
        for m in 0..=3i64 {
            for n in -3..=3i64 {
                let diff = (c.get(-m, n) - c.get(m, n).conj()).norm();
                assert!(diff < 1e-10, "conjugate symmetry broken at ({m},{n}): {diff}");
            }
        }
    }

    #[test]
    fn synthesis_of_zero_coefficients_is_zero() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let grid = Grid::over(-2.0, 2.0, 257).unwrap();
        let c = GaborCoefficients::zeros(IdxRange::symmetric(2), IdxRange::symmetric(2));
        let out = synthesis(&c, &g, lat, grid);
        assert!(out.signal.values.iter().all(|&v| v == 0.0));
        assert_eq!(out.imag_residual, 0.0);
    }

    #[test]
    fn synthesis_of_unit_coefficient_is_the_window() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let grid = Grid::over(-2.0, 2.0, 257).unwrap();
        let mut c = GaborCoefficients::zeros(IdxRange::symmetric(1), IdxRange::symmetric(1));
        c.set(0, 0, Complex64::new(1.0, 0.0));
        let out = synthesis(&c, &g, lat, grid);
        for (x, v) in grid.points().zip(&out.signal.values) {
            assert!((v - g.eval(x)).abs() < 1e-14);
        }
        assert!(out.imag_residual < 1e-14);
    }

    #[test]
    fn round_trip_has_negligible_imaginary_part() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let f = map_to_interval(&make_signal(SignalKind::Heavisine, 1024).unwrap(), -3.0, 3.0)
            .unwrap();
        let c = analysis(&f, &g, lat, IdxRange::symmetric(3), IdxRange::symmetric(3));
        let out = synthesis(&c, &g, lat, f.grid);
        assert!(out.imag_residual < 1e-10, "imaginary residual {}", out.imag_residual);
    }

    #[test]
    fn frame_operator_is_gram_multiplier() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let grid = Grid::aligned_cover(-2.0, 2.0, 1.0 / 1024.0).unwrap();
        let f = SampledSignal::new(grid, grid.points().map(|x| (0.3 * x).cos()).collect()).unwrap();
        let sf = frame_operator_apply(&f, &g, lat).unwrap();
        // G(0) = 1, so (S f)(0) = f(0) / b = 5 f(0)
        let i0 = grid.points().position(|x| x == 0.0).unwrap();
        assert!((sf.values[i0] - 5.0 * f.values[i0]).abs() < 1e-12);
    }

    #[test]
    fn frame_operator_rejects_wide_windows() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.6).unwrap(); // 1/b < support length 2
        let f = SampledSignal::zeros(Grid::over(-2.0, 2.0, 64).unwrap());
        assert!(matches!(
            frame_operator_apply(&f, &g, lat),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn frame_operator_commutes_with_lattice_translation() {
        // G is 1-periodic for a = 1, so translating by a lattice point and
        // applying S commute.
        let g = bspline(3).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let grid = Grid::aligned_cover(-3.0, 3.0, 1.0 / 512.0).unwrap();
        let f = SampledSignal::new(grid, grid.points().map(|x| (-x * x).exp()).collect()).unwrap();

        let sf = frame_operator_apply(&f, &g, lat).unwrap();
        let translate = |s: &SampledSignal| -> SampledSignal {
            let shifted = Grid::new(s.grid.origin + 1.0, s.grid.step, s.grid.count).unwrap();
            SampledSignal { grid: shifted, values: s.values.clone() }
        };
        let t_sf = translate(&sf);
        let s_tf = frame_operator_apply(&translate(&f), &g, lat).unwrap();
        for (a, b) in t_sf.values.iter().zip(&s_tf.values) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    /// C-infinity bump supported on (0, 1); it vanishes to all orders at the
    /// integer lattice knots, so the modulation tail of the truncated frame
    /// operator decays faster than any power.
    pub(crate) fn smooth_bump(x: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            0.0
        } else {
            (-1.0 / (x * (1.0 - x))).exp() * 55.0
        }
    }

    #[test]
    fn frame_operator_matches_truncated_lattice_sum() {
        // Brute-force oracle: S f = sum_{m,n} <f, E T g> E T g with |m| <= 300.
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let grid = Grid::aligned_cover(-0.5, 1.5, 1.0 / 512.0).unwrap();
        let f = SampledSignal::new(grid, grid.points().map(smooth_bump).collect()).unwrap();

        let pointwise = frame_operator_apply(&f, &g, lat).unwrap();

        let m_range = IdxRange::symmetric(300);
        let n_range = IdxRange::symmetric(4);
        let coeffs = analysis(&f, &g, lat, m_range, n_range);
        let direct = synthesis(&coeffs, &g, lat, grid);

        let sup = pointwise
            .values
            .iter()
            .zip(&direct.signal.values)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        assert!(sup < 1e-3, "pointwise vs truncated sum sup-norm {sup}");
    }

    #[test]
    fn duality_residual_rejects_general_translation() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(0.5, 0.2).unwrap();
        assert!(matches!(
            duality_residual(&g, &g, lat, 1e-2, 2),
            Err(Error::UnsupportedLattice { .. })
        ));
    }

    #[test]
    fn window_is_not_its_own_dual() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let r = duality_residual(&g, &g, lat, 1e-2, 2).unwrap();
        assert!(r >= 0.1, "B2 against itself should fail duality, residual {r}");
    }

    #[test]
    fn reconstruct_zero_signal_gives_zero() {
        let g = bspline(2).unwrap();
        let lat = Lattice::new(1.0, 0.2).unwrap();
        let f = SampledSignal::zeros(Grid::over(-3.0, 3.0, 512).unwrap());
        let rec = reconstruct(&f, &g, &g, lat, IdxRange::symmetric(3), IdxRange::symmetric(3));
        assert!(rec.signal.values.iter().all(|&v| v == 0.0));
    }
}
