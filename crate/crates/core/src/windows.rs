//! Window functions: symmetric B-splines and exponential B-splines.
//!
//! Windows are real-valued and compactly supported. Closed-form windows carry
//! exact piecewise exponential-polynomial segments; windows produced by
//! operator-based constructions (canonical and iterated duals) are stored as
//! tables on a lattice-aligned grid with linear interpolation between nodes.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::piecewise::{ExpPolyTerm, Piecewise, SegmentExpr};

/// Minimal admissible gap between exponent rates; closer pairs are rejected
/// because the explicit formula divides by every pairwise difference.
pub const MIN_RATE_GAP: f64 = 1e-8;

/// How a window evaluates.
#[derive(Debug, Clone)]
enum Form {
    Exact(Piecewise),
    Sampled(Table),
}

/// Uniformly sampled window values with linear interpolation between nodes.
#[derive(Debug, Clone)]
struct Table {
    origin: f64,
    step: f64,
    values: Vec<f64>,
}

impl Table {
    fn eval(&self, x: f64) -> f64 {
        let u = (x - self.origin) / self.step;
        let n = self.values.len();
        if u < 0.0 || u > (n - 1) as f64 {
            return 0.0;
        }
        let nearest = u.round();
        if (u - nearest).abs() < 1e-9 {
            return self.values[nearest as usize];
        }
        let i = u.floor() as usize;
        let frac = u - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// A real-valued window with compact support.
#[derive(Debug, Clone)]
pub struct Window {
    label: String,
    support: (f64, f64),
    form: Form,
}

impl Window {
    pub(crate) fn from_piecewise(label: impl Into<String>, pw: Piecewise) -> Self {
        let support = pw.support();
        Self { label: label.into(), support, form: Form::Exact(pw) }
    }

    /// Window from values sampled on a uniform grid (zero outside the grid).
    pub fn from_samples(label: impl Into<String>, grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count {
            return Err(Error::InvalidConfig(format!(
                "sample count {} does not match grid count {}",
                values.len(),
                grid.count
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("window samples must be finite".into()));
        }
        Ok(Self {
            label: label.into(),
            support: grid.span(),
            form: Form::Sampled(Table { origin: grid.origin, step: grid.step, values }),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn support_len(&self) -> f64 {
        self.support.1 - self.support.0
    }

    /// Evaluate the window; zero outside the support.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.support.0 || x > self.support.1 {
            return 0.0;
        }
        match &self.form {
            Form::Exact(pw) => pw.eval(x),
            Form::Sampled(t) => t.eval(x),
        }
    }

    /// The window `x -> w(x + shift)`; the support moves accordingly and the
    /// shift is recorded in the label.
    pub fn recenter(&self, shift: f64) -> Self {
        if shift == 0.0 {
            return self.clone();
        }
        let label = format!("{}(x{:+})", self.label, shift);
        match &self.form {
            Form::Exact(pw) => Self::from_piecewise(label, pw.shift(shift)),
            Form::Sampled(t) => Self {
                label,
                support: (self.support.0 - shift, self.support.1 - shift),
                form: Form::Sampled(Table {
                    origin: t.origin - shift,
                    step: t.step,
                    values: t.values.clone(),
                }),
            },
        }
    }

    pub(crate) fn piecewise(&self) -> Option<&Piecewise> {
        match &self.form {
            Form::Exact(pw) => Some(pw),
            Form::Sampled(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.form, Form::Exact(_))
    }

    /// Table step for sampled windows, `None` for closed forms.
    pub fn table_step(&self) -> Option<f64> {
        match &self.form {
            Form::Exact(_) => None,
            Form::Sampled(t) => Some(t.step),
        }
    }

    /// Materialize the window on a lattice-aligned grid with the given step.
    pub fn sampled(&self, step: f64, label: impl Into<String>) -> Result<Self> {
        let (lo, hi) = self.support;
        let grid = Grid::aligned_cover(lo, hi, step)?;
        let values = grid.points().map(|x| self.eval(x)).collect();
        Self::from_samples(label, grid, values)
    }

    /// Largest jump across interior knots; 0 for sampled windows.
    pub fn knot_discontinuity(&self) -> f64 {
        match &self.form {
            Form::Exact(pw) => pw.continuity_gap(),
            Form::Sampled(_) => 0.0,
        }
    }
}

// ---------------------------------------------------------------------------
// symmetric B-splines
// ---------------------------------------------------------------------------

fn bspline_piecewise(order: usize) -> Result<Piecewise> {
    match order {
        0 => Err(Error::InvalidOrder(0)),
        1 => Ok(Piecewise::new(vec![(-0.5, 0.5, SegmentExpr::constant(1.0))])),
        2 => Ok(Piecewise::new(vec![
            (-1.0, 0.0, SegmentExpr::poly(vec![1.0, 1.0])),
            (0.0, 1.0, SegmentExpr::poly(vec![1.0, -1.0])),
        ])),
        3 => Ok(Piecewise::new(vec![
            (-1.5, -0.5, SegmentExpr::poly(vec![9.0 / 8.0, 1.5, 0.5])),
            (-0.5, 0.5, SegmentExpr::poly(vec![0.75, 0.0, -1.0])),
            (0.5, 1.5, SegmentExpr::poly(vec![9.0 / 8.0, -1.5, 0.5])),
        ])),
        n => {
            // B_{N+1} = B_N * B_1; convolving with chi_[0,1] and shifting by
            // one half realizes the centered unit box.
            let mut pw = bspline_piecewise(3)?;
            for _ in 3..n {
                pw = pw.convolve_exp_box(0.0).shift(0.5);
            }
            Ok(pw)
        }
    }
}

/// The symmetric B-spline of the given order, supported on `[-order/2, order/2]`.
pub fn bspline(order: usize) -> Result<Window> {
    Ok(Window::from_piecewise(format!("B{order}"), bspline_piecewise(order)?))
}

/// Evaluate the symmetric B-spline `B_order` at `x`.
pub fn eval_bspline(order: usize, x: f64) -> Result<f64> {
    Ok(bspline_piecewise(order)?.eval(x))
}

// ---------------------------------------------------------------------------
// exponential B-splines
// ---------------------------------------------------------------------------

/// Parameters of an exponential B-spline: a strictly increasing tuple of
/// exponent rates, at least one of them nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSplineParams {
    rates: Vec<f64>,
}

impl ExpSplineParams {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "exponential B-spline needs order >= 2, got {} rates",
                rates.len()
            )));
        }
        if rates.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidParameter("rates must be finite".into()));
        }
        let mut min_gap = f64::INFINITY;
        for pair in rates.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidParameter(format!(
                    "rates must be strictly increasing, got {:?}",
                    rates
                )));
            }
            min_gap = min_gap.min(pair[1] - pair[0]);
        }
        if min_gap < MIN_RATE_GAP {
            return Err(Error::DegenerateRates { gap: min_gap, min_gap: MIN_RATE_GAP });
        }
        if rates.iter().all(|&r| r == 0.0) {
            return Err(Error::InvalidParameter("at least one rate must be nonzero".into()));
        }
        Ok(Self { rates })
    }

    /// Symmetric third-order parameters with rates `(-p, 0, p)`.
    pub fn symmetric(p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "symmetric exponential spline needs p > 0, got {p}"
            )));
        }
        Self::new(vec![-p, 0.0, p])
    }

    pub fn order(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }
}

/// Evaluate the unnormalized symmetric third-order exponential B-spline at `x`
/// using its closed-form branches (support `[0, 3]`).
pub fn eval_exp_bspline_raw(p: f64, x: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "symmetric exponential spline needs p > 0, got {p}"
        )));
    }
    let p2 = p * p;
    let value = if !(0.0..=3.0).contains(&x) {
        0.0
    } else if x < 1.0 {
        ((p * x).exp() + (-p * x).exp() - 2.0) / (2.0 * p2)
    } else if x < 2.0 {
        (p.exp() + (-p).exp()) / p2
            - (1.0 + (-p).exp()) * (p * (x - 1.0)).exp() / (2.0 * p2)
            - (1.0 + p.exp()) * (-p * (x - 1.0)).exp() / (2.0 * p2)
    } else {
        -1.0 / p2
            + (-p).exp() * (p * (x - 2.0)).exp() / (2.0 * p2)
            + p.exp() * (-p * (x - 2.0)).exp() / (2.0 * p2)
    };
    Ok(value)
}

fn exp_bspline_symmetric_piecewise(p: f64) -> Piecewise {
    let p2 = p * p;
    let ep = p.exp();
    let em = (-p).exp();
    Piecewise::new(vec![
        (
            0.0,
            1.0,
            SegmentExpr::from_terms(vec![
                ExpPolyTerm { rate: p, coeffs: vec![1.0 / (2.0 * p2)] },
                ExpPolyTerm { rate: -p, coeffs: vec![1.0 / (2.0 * p2)] },
                ExpPolyTerm { rate: 0.0, coeffs: vec![-1.0 / p2] },
            ]),
        ),
        (
            1.0,
            2.0,
            SegmentExpr::from_terms(vec![
                ExpPolyTerm { rate: 0.0, coeffs: vec![(ep + em) / p2] },
                // e^{p(x-1)} = e^{-p} e^{px},   e^{-p(x-1)} = e^{p} e^{-px}
                ExpPolyTerm { rate: p, coeffs: vec![-(1.0 + em) * em / (2.0 * p2)] },
                ExpPolyTerm { rate: -p, coeffs: vec![-(1.0 + ep) * ep / (2.0 * p2)] },
            ]),
        ),
        (
            2.0,
            3.0,
            SegmentExpr::from_terms(vec![
                ExpPolyTerm { rate: 0.0, coeffs: vec![-1.0 / p2] },
                ExpPolyTerm { rate: p, coeffs: vec![em * (-2.0 * p).exp() / (2.0 * p2)] },
                ExpPolyTerm { rate: -p, coeffs: vec![ep * (2.0 * p).exp() / (2.0 * p2)] },
            ]),
        ),
    ])
}

/// Explicit piecewise formula for an exponential B-spline with pairwise
/// distinct rates: on `[k-1, k]`,
///
/// ```text
///   (-1)^{k-1} sum_i [ sum_{|S|=k-1, S excl. i} e^{sum_{j in S} a_j} ]
///             (prod_{j != i} 1/(a_i - a_j)) e^{a_i (x-k+1)}
/// ```
fn exp_bspline_general_piecewise(params: &ExpSplineParams) -> Piecewise {
    let rates = params.rates();
    let n = rates.len();

    // prod_{j != i} 1/(a_i - a_j)
    let inv_prod: Vec<f64> = (0..n)
        .map(|i| {
            let mut prod = 1.0;
            for j in 0..n {
                if j != i {
                    prod *= rates[i] - rates[j];
                }
            }
            1.0 / prod
        })
        .collect();

    // sum over size-m subsets of the rates excluding index i of e^{subset sum};
    // elementary-symmetric recurrence on the values e^{a_j}.
    let subset_exp_sum = |i: usize, m: usize| -> f64 {
        let others: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| rates[j].exp()).collect();
        let mut esym = vec![0.0; m + 1];
        esym[0] = 1.0;
        for &v in &others {
            for k in (1..=m).rev() {
                esym[k] += esym[k - 1] * v;
            }
        }
        esym[m]
    };

    let mut segments = Vec::with_capacity(n);
    for k in 1..=n {
        let sign = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let mut terms = Vec::with_capacity(n);
        for i in 0..n {
            let weight = sign * subset_exp_sum(i, k - 1) * inv_prod[i];
            // e^{a_i (x - k + 1)} = e^{-a_i (k-1)} e^{a_i x}
            let folded = weight * (-rates[i] * (k as f64 - 1.0)).exp();
            terms.push(ExpPolyTerm { rate: rates[i], coeffs: vec![folded] });
        }
        segments.push(((k - 1) as f64, k as f64, SegmentExpr::from_terms(terms)));
    }
    Piecewise::new(segments)
}

/// Evaluate the order-`N` exponential B-spline for the given rate tuple at `x`
/// (support `[0, N]`).
pub fn eval_exp_bspline_general(params: &ExpSplineParams, x: f64) -> f64 {
    exp_bspline_general_piecewise(params).eval(x)
}

/// Exact convolution construction `e^{a_1 .}chi * ... * e^{a_N .}chi` of the
/// exponential B-spline. Slower than the explicit formula but independent of
/// it; used to cross-check the closed forms.
pub fn exp_bspline_by_convolution(rates: &[f64]) -> Result<Window> {
    if rates.is_empty() {
        return Err(Error::InvalidParameter("need at least one rate".into()));
    }
    let mut pw = Piecewise::new(vec![(
        0.0,
        1.0,
        SegmentExpr::from_terms(vec![ExpPolyTerm { rate: rates[0], coeffs: vec![1.0] }]),
    )]);
    for &a in &rates[1..] {
        pw = pw.convolve_exp_box(a);
    }
    Ok(Window::from_piecewise(format!("conv eps' {rates:?}"), pw))
}

/// Scale factor that makes the symmetric third-order exponential B-spline
/// satisfy the partition of unity: `p^2 e^p / (e^p - 1)^2`.
pub fn exp_bspline_unity_scale(p: f64) -> f64 {
    let em1 = p.exp() - 1.0;
    p * p * p.exp() / (em1 * em1)
}

/// The symmetric third-order exponential B-spline scaled to partition unity,
/// as a window on `[0, 3]`.
pub fn normalize_exp_bspline(p: f64) -> Result<Window> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "symmetric exponential spline needs p > 0, got {p}"
        )));
    }
    let pw = exp_bspline_symmetric_piecewise(p).scale(exp_bspline_unity_scale(p));
    Ok(Window::from_piecewise(format!("eps3(p={p})"), pw))
}

/// Scaled symmetric exponential B-spline recentered onto `[-3/2, 3/2]`, the
/// form assumed by the shift-based dual constructions.
pub fn normalize_exp_bspline_centered(p: f64) -> Result<Window> {
    Ok(normalize_exp_bspline(p)?.recenter(1.5))
}

// ---------------------------------------------------------------------------
// partition of unity
// ---------------------------------------------------------------------------

/// Maximum over the grid of `|sum_n w(x - n) - 1|`; the lattice sum is finite
/// because the support is compact.
pub fn partition_of_unity_residual(w: &Window, grid: &Grid) -> f64 {
    let (lo, hi) = w.support();
    let mut worst: f64 = 0.0;
    for x in grid.points() {
        let n_min = (x - hi).ceil() as i64;
        let n_max = (x - lo).floor() as i64;
        let mut sum = 0.0;
        for n in n_min..=n_max {
            sum += w.eval(x - n as f64);
        }
        worst = worst.max((sum - 1.0).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_grid(lo: f64, hi: f64, n: usize) -> Grid {
        Grid::over(lo, hi, n).unwrap()
    }

    #[test]
    fn bspline_closed_form_values() {
        assert_eq!(eval_bspline(2, 0.5).unwrap(), 0.5);
        assert_eq!(eval_bspline(3, 0.0).unwrap(), 0.75);
        assert_eq!(eval_bspline(3, 1.5).unwrap(), 0.0);
        assert_eq!(eval_bspline(1, 0.4).unwrap(), 1.0);
        assert!(matches!(eval_bspline(0, 0.0), Err(Error::InvalidOrder(0))));
    }

    #[test]
    fn bspline_support_endpoints() {
        for n in 1..=6 {
            let w = bspline(n).unwrap();
            assert_eq!(w.support(), (-(n as f64) / 2.0, n as f64 / 2.0));
        }
    }

    #[test]
    fn quartic_bspline_matches_frozen_closed_form() {
        // Independent oracle: the centered cubic-degree B-spline B_4 is
        //   (2 - |x|)^3 / 6              for 1 <= |x| <= 2
        //   2/3 - x^2 + |x|^3 / 2        for |x| <= 1
        let oracle = |x: f64| -> f64 {
            let a = x.abs();
            if a >= 2.0 {
                0.0
            } else if a >= 1.0 {
                (2.0 - a).powi(3) / 6.0
            } else {
                2.0 / 3.0 - x * x + a.powi(3) / 2.0
            }
        };
        let b4 = bspline(4).unwrap();
        let grid = dense_grid(-2.5, 2.5, 2001);
        for x in grid.points() {
            assert!(
                (b4.eval(x) - oracle(x)).abs() < 1e-12,
                "B4({x}) = {} vs oracle {}",
                b4.eval(x),
                oracle(x)
            );
        }
    }

    #[test]
    fn closed_forms_match_exact_convolution() {
        // B_N for N <= 4 against piecewise convolution of B_{N-1} with B_1.
        for n in 2..=4usize {
            let closed = bspline_piecewise(n).unwrap();
            let convolved = bspline_piecewise(n - 1).unwrap().convolve_exp_box(0.0).shift(0.5);
            let grid = dense_grid(-(n as f64) / 2.0 - 0.25, n as f64 / 2.0 + 0.25, 10_001);
            for x in grid.points() {
                assert!(
                    (closed.eval(x) - convolved.eval(x)).abs() < 1e-12,
                    "order {n} mismatch at {x}"
                );
            }
        }
    }

    #[test]
    fn bspline_symmetry_and_nonnegativity() {
        for n in 1..=5usize {
            let w = bspline(n).unwrap();
            let grid = dense_grid(-(n as f64) / 2.0, n as f64 / 2.0, 4001);
            for x in grid.points() {
                let v = w.eval(x);
                // endpoint values of convolved splines carry roundoff dust
                assert!(v >= -1e-12, "B{n}({x}) = {v} negative");
                assert!((v - w.eval(-x)).abs() < 1e-12, "B{n} asymmetric at {x}");
            }
        }
    }

    #[test]
    fn raw_symmetric_branch_values() {
        assert_eq!(eval_exp_bspline_raw(1.0, 0.0).unwrap(), 0.0);
        let v = eval_exp_bspline_raw(1.0, 1.5).unwrap();
        assert!((v - 0.830909).abs() < 1e-5, "eps3'(1.5) = {v}");
        assert_eq!(eval_exp_bspline_raw(1.0, 3.1).unwrap(), 0.0);
        assert_eq!(eval_exp_bspline_raw(1.0, -0.1).unwrap(), 0.0);
        assert!(eval_exp_bspline_raw(0.0, 1.0).is_err());
        assert!(eval_exp_bspline_raw(-2.0, 1.0).is_err());
    }

    #[test]
    fn raw_branches_match_piecewise_form() {
        for &p in &[0.5, 1.0, 2.0] {
            let pw = exp_bspline_symmetric_piecewise(p);
            let grid = dense_grid(-0.2, 3.2, 3001);
            for x in grid.points() {
                let direct = eval_exp_bspline_raw(p, x).unwrap();
                assert!((pw.eval(x) - direct).abs() < 1e-13, "p={p}, x={x}");
            }
        }
    }

    #[test]
    fn general_formula_matches_symmetric_branches() {
        let params = ExpSplineParams::symmetric(1.0).unwrap();
        let grid = dense_grid(-0.5, 3.5, 4001);
        for x in grid.points() {
            let general = eval_exp_bspline_general(&params, x);
            let raw = eval_exp_bspline_raw(1.0, x).unwrap();
            assert!((general - raw).abs() < 1e-12, "mismatch at {x}: {general} vs {raw}");
        }
        assert_eq!(eval_exp_bspline_general(&params, -0.2), 0.0);
    }

    #[test]
    fn general_formula_matches_exact_convolution() {
        // Independent route: iterated exponential box convolutions.
        for rates in [vec![0.0, 1.0], vec![-1.0, 0.0, 1.0], vec![-0.7, 0.1, 0.9, 2.0]] {
            let params = ExpSplineParams::new(rates.clone()).unwrap();
            let explicit = exp_bspline_general_piecewise(&params);
            let conv = exp_bspline_by_convolution(&rates).unwrap();
            let n = rates.len() as f64;
            let grid = dense_grid(-0.25, n + 0.25, 4001);
            for x in grid.points() {
                assert!(
                    (explicit.eval(x) - conv.eval(x)).abs() < 1e-12,
                    "rates {rates:?} differ at {x}"
                );
            }
        }
    }

    #[test]
    fn order_two_value_from_hand_integral() {
        // integral_0^{1/2} e^t dt = e^{1/2} - 1
        let params = ExpSplineParams::new(vec![0.0, 1.0]).unwrap();
        let v = eval_exp_bspline_general(&params, 0.5);
        assert!((v - (0.5f64.exp() - 1.0)).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn degenerate_rates_are_rejected() {
        assert!(matches!(
            ExpSplineParams::new(vec![0.0, 0.0, 1.0]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            ExpSplineParams::new(vec![0.0, 5e-9, 1.0]),
            Err(Error::DegenerateRates { .. })
        ));
    }

    #[test]
    fn normalized_spline_values() {
        let eps3 = normalize_exp_bspline(1.0).unwrap();
        let expect = 0.830909339217726 * exp_bspline_unity_scale(1.0);
        assert!((eps3.eval(1.5) - 0.765).abs() < 1e-3);
        assert!((eps3.eval(1.5) - expect).abs() < 1e-12);
        assert_eq!(eps3.eval(0.0), 0.0);
        assert_eq!(eps3.support(), (0.0, 3.0));
    }

    #[test]
    fn partition_of_unity_for_splines() {
        let grid = dense_grid(0.0, 1.0, 1001);
        assert!(partition_of_unity_residual(&bspline(2).unwrap(), &grid) < 1e-12);
        assert!(partition_of_unity_residual(&bspline(3).unwrap(), &grid) < 1e-12);
        for &p in &[0.5, 1.0, 2.0] {
            let eps3 = normalize_exp_bspline(p).unwrap();
            let r = partition_of_unity_residual(&eps3, &grid);
            assert!(r < 1e-10, "p = {p}: residual {r}");
        }
    }

    #[test]
    fn recentering_moves_support_and_matches_shift() {
        let eps3 = normalize_exp_bspline(1.0).unwrap();
        let centered = eps3.recenter(1.5);
        assert_eq!(centered.support(), (-1.5, 1.5));
        assert_eq!(centered.eval(0.0), eps3.eval(1.5));
        assert!(centered.label().contains("+1.5"));

        let b2 = bspline(2).unwrap();
        let same = b2.recenter(0.0);
        assert_eq!(same.support(), b2.support());
        assert_eq!(same.eval(0.3), b2.eval(0.3));

        let moved = b2.recenter(1.0);
        assert_eq!(moved.support(), (-2.0, 0.0));
    }

    #[test]
    fn exponential_spline_reflection_symmetry() {
        // eps3'(x) = eps3'(3 - x) for symmetric rates.
        for &p in &[0.5, 1.0, 2.0] {
            let grid = dense_grid(0.0, 3.0, 2001);
            for x in grid.points() {
                let a = eval_exp_bspline_raw(p, x).unwrap();
                let b = eval_exp_bspline_raw(p, 3.0 - x).unwrap();
                assert!((a - b).abs() < 1e-12, "p={p}, x={x}");
            }
        }
    }

    #[test]
    fn continuity_at_knots() {
        assert!(bspline(2).unwrap().knot_discontinuity() < 1e-10);
        assert!(bspline(3).unwrap().knot_discontinuity() < 1e-10);
        for &p in &[0.5, 1.0, 2.0] {
            let pw = exp_bspline_symmetric_piecewise(p);
            assert!(pw.continuity_gap() < 1e-10, "p = {p}");
        }
    }

    #[test]
    fn sampled_window_hits_nodes_exactly() {
        let b2 = bspline(2).unwrap();
        let s = b2.sampled(1.0 / 8192.0, "B2 sampled").unwrap();
        assert_eq!(s.eval(0.0), 1.0);
        assert_eq!(s.eval(0.5), 0.5);
        // off-node points interpolate linearly, which is exact for B2
        assert!((s.eval(0.3000001) - b2.eval(0.3000001)).abs() < 1e-9);
        // integer shifts of nodes are nodes
        let x = 0.25 + 3.0;
        assert_eq!(s.eval(x - 3.0), 0.75);
    }
}
