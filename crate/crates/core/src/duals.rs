//! Dual window constructions for Gabor frames with compactly supported
//! spline-type generators.
//!
//! Five families are provided:
//!
//! * the canonical dual `b g / G` (valid when the support fits in one
//!   modulation period),
//! * the symmetric dual `k = sum_n a_n g(. + n)` built from a coefficient
//!   sequence with `a_0 = b`, `a_n + a_{-n} = 2b`,
//! * the asymmetric dual `h = b g + 2b sum_{n>=1} g(. + n)` with the shortest
//!   support in this family,
//! * iterated duals `h' = S^{-1}g - g + S h`, and
//! * perturbation duals `phi = g_d + u - sum_k q_k(.) u(. - ka)` where the
//!   modulation series of `q_k` is resolved through FFTs on the quadrature
//!   lattice.
//!
//! Every constructor returns a [`Window`] plus construction metadata; duality
//! is certified separately through [`crate::gabor::duality_residual`].

use crate::error::{Error, Result};
use crate::gabor::{duality_residual, gram_value, Lattice};
use crate::grid::Grid;
use crate::signals::SampledSignal;
use crate::windows::Window;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Lower bound below which the gram function is considered to vanish.
pub const FRAME_TOL: f64 = 1e-12;

/// Ceiling on the magnitude of the last retained modulation coefficient in
/// the perturbation construction.
pub const TRUNCATION_TAIL_LIMIT: f64 = 1e-6;

/// Numerically certified frame bounds: extrema of the gram function.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// The gram function `G(x) = sum_n |g(x - n a)|^2` sampled on a grid.
pub fn gram_function(g: &Window, a: f64, grid: &Grid) -> SampledSignal {
    let values = grid.points().map(|x| gram_value(g, a, x)).collect();
    SampledSignal { grid: *grid, values }
}

/// Extrema of the gram function over one lattice period `[0, a]`, sampled at
/// the resolution of the supplied grid. A lower bound below [`FRAME_TOL`]
/// means some point of the line is uncovered and the translates cannot
/// satisfy the lower frame inequality.
pub fn frame_bounds(g: &Window, a: f64, grid: &Grid) -> Result<FrameBounds> {
    let step = grid.step;
    let count = (a / step).ceil() as usize + 1;
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    for i in 0..count {
        let x = (i as f64 * step).min(a);
        let v = gram_value(g, a, x);
        lower = lower.min(v);
        upper = upper.max(v);
    }
    if lower < FRAME_TOL {
        return Err(Error::NotAFrame { lower });
    }
    Ok(FrameBounds { lower, upper })
}

/// Construction metadata carried alongside each dual window.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DualMeta {
    pub label: String,
    pub support: (f64, f64),
    /// Translation indices with nonzero cross terms (perturbation duals only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_set: Option<Vec<i64>>,
    /// Number of modulation terms retained (perturbation duals only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    /// Magnitude of the last retained modulation coefficient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_coefficient: Option<f64>,
    /// Certified duality residual, filled in after certification.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duality_residual: Option<f64>,
}

impl DualMeta {
    fn plain(w: &Window) -> Self {
        Self {
            label: w.label().to_string(),
            support: w.support(),
            k_set: None,
            j_max: None,
            tail_coefficient: None,
            duality_residual: None,
        }
    }
}

// ---------------------------------------------------------------------------
// canonical dual
// ---------------------------------------------------------------------------

fn require_one_period_support(g: &Window, lattice: Lattice) -> Result<()> {
    if g.support_len() > 1.0 / lattice.b + 1e-12 {
        return Err(Error::HypothesisViolated(format!(
            "support length {} exceeds one modulation period 1/b = {}",
            g.support_len(),
            1.0 / lattice.b
        )));
    }
    Ok(())
}

/// The canonical dual `S^{-1} g = (b / G) g`, materialized on a
/// lattice-aligned grid with the given step.
pub fn canonical_dual(g: &Window, lattice: Lattice, step: f64) -> Result<Window> {
    require_one_period_support(g, lattice)?;
    let probe = Grid::aligned_cover(0.0, lattice.a.max(step), step)?;
    frame_bounds(g, lattice.a, &probe)?;

    let (lo, hi) = g.support();
    let grid = Grid::aligned_cover(lo, hi, step)?;
    let mut values = Vec::with_capacity(grid.count);
    for x in grid.points() {
        let gv = g.eval(x);
        if gv == 0.0 {
            values.push(0.0);
            continue;
        }
        let gram = gram_value(g, lattice.a, x);
        if gram < FRAME_TOL {
            return Err(Error::SingularDual { at: x, gram });
        }
        values.push(lattice.b * gv / gram);
    }
    Window::from_samples(format!("canonical dual of {}", g.label()), grid, values)
}

// ---------------------------------------------------------------------------
// shift-combination duals (symmetric / asymmetric)
// ---------------------------------------------------------------------------

/// Checks the hypotheses shared by the shift-combination constructions:
/// centered support `[-N/2, N/2]`, strict positivity on the open support, and
/// the partition of unity.
fn check_shift_dual_hypotheses(g: &Window, order: usize) -> Result<()> {
    let (lo, hi) = g.support();
    let half = order as f64 / 2.0;
    if (lo + half).abs() > 1e-9 || (hi - half).abs() > 1e-9 {
        return Err(Error::HypothesisViolated(format!(
            "window support [{lo}, {hi}] is not [-{half}, {half}]"
        )));
    }
    let margin = (hi - lo) * 1e-4;
    let interior = Grid::over(lo + margin, hi - margin, 2001).expect("nondegenerate support");
    for x in interior.points() {
        if g.eval(x) <= 0.0 {
            return Err(Error::HypothesisViolated(format!(
                "window is not strictly positive on the open support (value {} at {x})",
                g.eval(x)
            )));
        }
    }
    let pou_grid = Grid::over(0.0, 1.0, 1001).expect("static grid");
    let residual = crate::windows::partition_of_unity_residual(g, &pou_grid);
    if residual > 1e-8 {
        return Err(Error::HypothesisViolated(format!(
            "window does not partition unity (residual {residual:.3e})"
        )));
    }
    Ok(())
}

/// `sum_i c_i g(x + s_i)`, kept in exact piecewise form when `g` is exact.
fn shift_combination(g: &Window, terms: &[(f64, f64)], label: String) -> Window {
    if let Some(pw) = g.piecewise() {
        let mut acc: Option<crate::piecewise::Piecewise> = None;
        for &(c, s) in terms {
            let part = pw.shift(s).scale(c);
            acc = Some(match acc {
                None => part,
                Some(prev) => prev.add(&part),
            });
        }
        Window::from_piecewise(label, acc.expect("at least one term"))
    } else {
        let step = g.table_step().expect("sampled windows carry a step");
        let (lo, hi) = g.support();
        let s_min = terms.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
        let s_max = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let grid = Grid::aligned_cover(lo - s_max, hi - s_min, step).expect("valid cover");
        let values = grid
            .points()
            .map(|x| terms.iter().map(|&(c, s)| c * g.eval(x + s)).sum())
            .collect();
        Window::from_samples(label, grid, values).expect("grid and values agree")
    }
}

/// Symmetric-family dual `k(x) = sum_{n=-N+1}^{N-1} a_n g(x + n)` for
/// `b <= 1/(2N - 1)`. `coeffs`, ordered from `n = -N+1` to `N-1`, must satisfy
/// `a_0 = b` and `a_n + a_{-n} = 2b`; `None` selects the all-`b` choice, which
/// preserves the symmetry of `g`.
pub fn symmetric_dual(
    g: &Window,
    order: usize,
    b: f64,
    coeffs: Option<&[f64]>,
) -> Result<Window> {
    let b_max = 1.0 / (2.0 * order as f64 - 1.0);
    if !(b > 0.0) || b > b_max + 1e-12 {
        return Err(Error::InvalidModulationStep { b, max: b_max });
    }
    check_shift_dual_hypotheses(g, order)?;

    let count = 2 * order - 1;
    let default_coeffs = vec![b; count];
    let coeffs = coeffs.unwrap_or(&default_coeffs);
    if coeffs.len() != count {
        return Err(Error::InvalidCoefficients(format!(
            "need {count} coefficients for order {order}, got {}",
            coeffs.len()
        )));
    }
    let a0 = coeffs[order - 1];
    if (a0 - b).abs() > 1e-12 {
        return Err(Error::InvalidCoefficients(format!("a_0 = {a0} must equal b = {b}")));
    }
    for n in 1..order {
        let plus = coeffs[order - 1 + n];
        let minus = coeffs[order - 1 - n];
        if (plus + minus - 2.0 * b).abs() > 1e-12 {
            return Err(Error::InvalidCoefficients(format!(
                "a_{n} + a_{} = {} must equal 2b = {}",
                -(n as i64),
                plus + minus,
                2.0 * b
            )));
        }
    }

    let terms: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i as f64 - (order as f64 - 1.0)))
        .collect();
    Ok(shift_combination(g, &terms, format!("symmetric dual k of {}", g.label())))
}

/// Asymmetric dual `h(x) = b g(x) + 2b sum_{n=1}^{N-1} g(x + n)` for
/// `b <= 1/N`; supported on `[-3N/2 + 1, N/2]`, the shortest in this family.
pub fn asymmetric_dual(g: &Window, order: usize, b: f64) -> Result<Window> {
    let b_max = 1.0 / order as f64;
    if !(b > 0.0) || b > b_max + 1e-12 {
        return Err(Error::InvalidModulationStep { b, max: b_max });
    }
    check_shift_dual_hypotheses(g, order)?;

    let mut terms = vec![(b, 0.0)];
    for n in 1..order {
        terms.push((2.0 * b, n as f64));
    }
    Ok(shift_combination(g, &terms, format!("asymmetric dual h of {}", g.label())))
}

// ---------------------------------------------------------------------------
// iterated duals
// ---------------------------------------------------------------------------

/// Smallest `n_max` beyond which all terms of the duality sum vanish by
/// support disjointness.
pub fn default_n_max(g: &Window, h: &Window, b: f64) -> i64 {
    (b * (g.support_len() + h.support_len())).ceil() as i64
}

/// Duality residual of `(g, h)` at the configured resolution.
pub fn certify(g: &Window, h: &Window, lattice: Lattice, x_step: f64) -> Result<f64> {
    duality_residual(g, h, lattice, x_step, default_n_max(g, h, lattice.b))
}

/// Iterate `h -> S^{-1} g - g + S h` starting from a certified dual `h`.
///
/// `levels = 1` returns the base dual unchanged; each further level applies
/// the map once. The canonical dual is a fixed point. Requires the pointwise
/// frame-operator form (support within one modulation period).
pub fn iterated_dual(
    g: &Window,
    h: &Window,
    lattice: Lattice,
    levels: u32,
    step: f64,
    cert_tolerance: f64,
) -> Result<Window> {
    if levels == 0 {
        return Err(Error::InvalidParameter("iteration needs levels >= 1".into()));
    }
    let residual = certify(g, h, lattice, step)?;
    if residual > cert_tolerance {
        return Err(Error::NotADual { residual, tolerance: cert_tolerance });
    }
    if levels == 1 {
        return Ok(h.clone());
    }
    require_one_period_support(g, lattice)?;

    let (glo, ghi) = g.support();
    let (hlo, hhi) = h.support();
    let grid = Grid::aligned_cover(glo.min(hlo), ghi.max(hhi), step)?;
    let xs: Vec<f64> = grid.points().collect();
    let gram: Vec<f64> = xs.iter().map(|&x| gram_value(g, lattice.a, x)).collect();
    let gv: Vec<f64> = xs.iter().map(|&x| g.eval(x)).collect();
    let canon: Vec<f64> = gv
        .iter()
        .zip(&gram)
        .map(|(&gx, &gr)| if gx == 0.0 { 0.0 } else { lattice.b * gx / gr })
        .collect();

    let mut current: Vec<f64> = xs.iter().map(|&x| h.eval(x)).collect();
    for _ in 1..levels {
        current = (0..xs.len())
            .map(|i| canon[i] - gv[i] + gram[i] * current[i] / lattice.b)
            .collect();
    }
    Window::from_samples(
        format!("level-{levels} iterate of {}", h.label()),
        grid,
        current,
    )
}

// ---------------------------------------------------------------------------
// perturbation duals
// ---------------------------------------------------------------------------

/// Result of a perturbation-dual construction.
#[derive(Debug, Clone)]
pub struct PerturbedDual {
    pub window: Window,
    pub meta: DualMeta,
}

/// Translation indices whose shifted copies of `g` overlap `supp g_d` on a
/// set of positive measure.
fn cross_term_indices(g: &Window, g_d: &Window, a: f64) -> Vec<i64> {
    let (glo, ghi) = g.support();
    let (dlo, dhi) = g_d.support();
    let lo = ((dlo - ghi) / a).floor() as i64 - 1;
    let hi = ((dhi - glo) / a).ceil() as i64 + 1;
    (lo..=hi)
        .filter(|&k| {
            let s = k as f64 * a;
            dhi.min(ghi + s) - dlo.max(glo + s) > 1e-12
        })
        .collect()
}

/// Compactly supported dual from the perturbation characterization:
///
/// ```text
///   phi = g_d + u - sum_{k in K} q_k(x) u(x - ka),
///   q_k(x) = <g_d, T_{ka} g> + 2 sum_{j=1}^{j_max} (C_{j,k} cos(2 pi j b x)
///                                                  + S_{j,k} sin(2 pi j b x))
/// ```
///
/// with `C`/`S` the cosine/sine cross integrals of `g_d` against the shifted
/// generator and `u = bessel_scale * g`. The modulation series is resolved by
/// FFTs on the quadrature lattice, which requires `b * step` to divide 1; with
/// `j_max` at the grid Nyquist (the default) the truncated series coincides
/// with the exact lattice periodization and the construction is a dual up to
/// roundoff.
pub fn perturbed_dual(
    g: &Window,
    g_d: &Window,
    lattice: Lattice,
    bessel_scale: f64,
    j_max: Option<usize>,
    step: f64,
) -> Result<PerturbedDual> {
    if !bessel_scale.is_finite() {
        return Err(Error::InvalidParameter("bessel_scale must be finite".into()));
    }
    let k_set = cross_term_indices(g, g_d, lattice.a);

    if bessel_scale == 0.0 {
        // u = 0 collapses the construction to the base dual.
        let window = g_d.clone();
        let meta = DualMeta {
            label: format!("perturbation dual from {}", g_d.label()),
            support: window.support(),
            k_set: Some(k_set),
            j_max,
            tail_coefficient: Some(0.0),
            duality_residual: None,
        };
        return Ok(PerturbedDual { window, meta });
    }

    let period_bins = (1.0 / (lattice.b * step)).round();
    if !(period_bins >= 4.0) || (period_bins * lattice.b * step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "the modulation period 1/b = {} must be an integer multiple of the quadrature \
             step {step}",
            1.0 / lattice.b
        )));
    }
    let bins = period_bins as usize;
    let nyquist = bins / 2;
    let j_max = j_max.unwrap_or(nyquist);
    if j_max == 0 || j_max > nyquist {
        return Err(Error::InvalidConfig(format!(
            "j_max must lie in [1, {nyquist}] at this resolution, got {j_max}"
        )));
    }

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(bins);
    let inverse = planner.plan_fft_inverse(bins);

    let (glo, ghi) = g.support();
    let (dlo, dhi) = g_d.support();

    let mut tail: f64 = 0.0;
    let mut series: Vec<Vec<Complex64>> = Vec::with_capacity(k_set.len());
    for &k in &k_set {
        let shift = k as f64 * lattice.a;
        let lo = dlo.max(glo + shift);
        let hi = dhi.min(ghi + shift);
        let cover = Grid::aligned_cover(lo, hi, step)?;

        // Fold node samples of g_d(t) g(t - ka) into one modulation period;
        // the DFT of the folded samples gives the cross integrals at every
        // multiple of b in a single transform.
        let mut folded = vec![Complex64::new(0.0, 0.0); bins];
        for i in 0..cover.count {
            let t = cover.point(i);
            let v = g_d.eval(t) * g.eval(t - shift);
            if v != 0.0 {
                let node = (t / step).round() as i64;
                let idx = node.rem_euclid(bins as i64) as usize;
                folded[idx].re += v;
            }
        }
        forward.process(&mut folded);
        for c in folded.iter_mut() {
            *c *= step;
        }

        tail = tail.max(folded[j_max].re.abs()).max(folded[j_max].im.abs());

        // Truncated conjugate-symmetric spectrum; its inverse DFT evaluates
        // q_k at every node of the period.
        let mut spectrum = vec![Complex64::new(0.0, 0.0); bins];
        spectrum[0] = Complex64::new(folded[0].re, 0.0);
        for j in 1..=j_max {
            spectrum[j] = folded[j];
            if j != bins - j {
                spectrum[bins - j] = folded[j].conj();
            }
        }
        inverse.process(&mut spectrum);
        series.push(spectrum);
    }

    if tail > TRUNCATION_TAIL_LIMIT {
        return Err(Error::TruncationTooCoarse {
            tail,
            j_max,
            limit: TRUNCATION_TAIL_LIMIT,
        });
    }

    // Support hull: the base dual plus every shifted copy of u that carries a
    // cross term.
    let mut hull_lo = dlo.min(glo);
    let mut hull_hi = dhi.max(ghi);
    for &k in &k_set {
        let s = k as f64 * lattice.a;
        hull_lo = hull_lo.min(glo + s);
        hull_hi = hull_hi.max(ghi + s);
    }
    let grid = Grid::aligned_cover(hull_lo, hull_hi, step)?;
    let values: Vec<f64> = (0..grid.count)
        .map(|i| {
            let x = grid.point(i);
            let node = (x / step).round() as i64;
            let idx = node.rem_euclid(bins as i64) as usize;
            let mut v = g_d.eval(x) + bessel_scale * g.eval(x);
            for (series_k, &k) in series.iter().zip(&k_set) {
                let u_shift = bessel_scale * g.eval(x - k as f64 * lattice.a);
                if u_shift != 0.0 {
                    v -= series_k[idx].re * u_shift;
                }
            }
            v
        })
        .collect();

    let label = format!("perturbation dual from {}", g_d.label());
    let window = Window::from_samples(label.clone(), grid, values)?;
    let meta = DualMeta {
        label,
        support: window.support(),
        k_set: Some(k_set),
        j_max: Some(j_max),
        tail_coefficient: Some(tail),
        duality_residual: None,
    };
    Ok(PerturbedDual { window, meta })
}

// ---------------------------------------------------------------------------
// declarative construction
// ---------------------------------------------------------------------------

/// Declarative description of a dual construction.
#[derive(Debug, Clone, PartialEq)]
pub enum DualSpec {
    Canonical,
    /// `None` selects the all-`b` coefficient sequence.
    Symmetric { coeffs: Option<Vec<f64>> },
    Asymmetric,
    Iterated { base: Box<DualSpec>, levels: u32 },
    Perturbed { base: Box<DualSpec>, bessel_scale: f64, j_max: Option<usize> },
}

/// Spline order implied by a centered support `[-N/2, N/2]`.
fn implied_order(g: &Window) -> Result<usize> {
    let (lo, hi) = g.support();
    let span = hi - lo;
    let order = span.round();
    if (span - order).abs() > 1e-9 || (lo + hi).abs() > 1e-9 || order < 1.0 {
        return Err(Error::HypothesisViolated(format!(
            "shift-combination duals need a centered integer-length support, got [{lo}, {hi}]"
        )));
    }
    Ok(order as usize)
}

impl DualSpec {
    /// Construct the described dual for generator `g`, materializing sampled
    /// windows at `quad_step`. Iterated bases are certified at
    /// `cert_tolerance` before the iteration is applied.
    pub fn build(
        &self,
        g: &Window,
        lattice: Lattice,
        quad_step: f64,
        cert_tolerance: f64,
    ) -> Result<(Window, DualMeta)> {
        match self {
            DualSpec::Canonical => {
                let w = canonical_dual(g, lattice, quad_step)?;
                let meta = DualMeta::plain(&w);
                Ok((w, meta))
            }
            DualSpec::Symmetric { coeffs } => {
                let order = implied_order(g)?;
                let w = symmetric_dual(g, order, lattice.b, coeffs.as_deref())?;
                let meta = DualMeta::plain(&w);
                Ok((w, meta))
            }
            DualSpec::Asymmetric => {
                let order = implied_order(g)?;
                let w = asymmetric_dual(g, order, lattice.b)?;
                let meta = DualMeta::plain(&w);
                Ok((w, meta))
            }
            DualSpec::Iterated { base, levels } => {
                let (base_window, _) = base.build(g, lattice, quad_step, cert_tolerance)?;
                let w = iterated_dual(g, &base_window, lattice, *levels, quad_step, cert_tolerance)?;
                let meta = DualMeta::plain(&w);
                Ok((w, meta))
            }
            DualSpec::Perturbed { base, bessel_scale, j_max } => {
                let (base_window, _) = base.build(g, lattice, quad_step, cert_tolerance)?;
                let built =
                    perturbed_dual(g, &base_window, lattice, *bessel_scale, *j_max, quad_step)?;
                Ok((built.window, built.meta))
            }
        }
    }
}
