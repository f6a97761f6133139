//! Exact piecewise exponential-polynomial functions.
//!
//! Every closed-form window in this crate (B-splines, exponential B-splines,
//! and the dual windows built from them by shifted linear combinations) lives
//! in the algebra of functions that are, on each knot interval, a finite sum
//!
//! ```text
//!     sum_i  p_i(x) * exp(r_i * x)
//! ```
//!
//! with polynomial `p_i` and real rate `r_i` (rate 0 is the plain polynomial
//! part). The algebra is closed under addition, scalar multiplication, shifts,
//! antidifferentiation, and convolution with an exponential box
//! `exp(r .) * chi_[0,1]`, which is exactly what inductive spline definitions
//! need. All operations here are exact up to floating-point roundoff; no
//! sampling or quadrature is involved.

const KNOT_EPS: f64 = 1e-12;
const RATE_EPS: f64 = 1e-12;

// ---------------------------------------------------------------------------
// dense polynomial helpers, coefficients ordered low -> high
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_trim(coeffs: &mut Vec<f64>) {
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(0.0);
    }
}

fn poly_add_into(dst: &mut Vec<f64>, src: &[f64]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0.0);
    }
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d += s;
    }
    poly_trim(dst);
}

fn poly_scale(coeffs: &[f64], c: f64) -> Vec<f64> {
    let mut out: Vec<f64> = coeffs.iter().map(|a| a * c).collect();
    poly_trim(&mut out);
    out
}

/// Coefficients of `p(x + delta)`.
fn poly_shift(coeffs: &[f64], delta: f64) -> Vec<f64> {
    // Horner recomposition: fold in one coefficient at a time while
    // multiplying the accumulator by (x + delta).
    let mut out = vec![0.0; coeffs.len()];
    for &c in coeffs.iter().rev() {
        // out := out * (x + delta) + c
        let mut next = vec![0.0; out.len()];
        for i in (1..out.len()).rev() {
            next[i] = out[i - 1] + out[i] * delta;
        }
        next[0] = out[0] * delta + c;
        out = next;
    }
    poly_trim(&mut out);
    out
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    let mut out: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();
    poly_trim(&mut out);
    out
}

fn poly_antiderivative(coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (i, c) in coeffs.iter().enumerate() {
        out[i + 1] = c / (i + 1) as f64;
    }
    poly_trim(&mut out);
    out
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_is_zero(coeffs: &[f64]) -> bool {
    coeffs.iter().all(|&c| c == 0.0)
}

// ---------------------------------------------------------------------------
// exponential-polynomial expressions
// ---------------------------------------------------------------------------

/// One summand `p(x) * exp(rate * x)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ExpPolyTerm {
    pub rate: f64,
    pub coeffs: Vec<f64>,
}

/// Sum of exponential-polynomial terms, valid on one knot interval.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct SegmentExpr {
    terms: Vec<ExpPolyTerm>,
}

impl SegmentExpr {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms(vec![ExpPolyTerm { rate: 0.0, coeffs: vec![c] }])
    }

    pub fn poly(coeffs: Vec<f64>) -> Self {
        Self::from_terms(vec![ExpPolyTerm { rate: 0.0, coeffs }])
    }

    pub fn from_terms(terms: Vec<ExpPolyTerm>) -> Self {
        let mut expr = Self { terms };
        expr.normalize();
        expr
    }

    fn normalize(&mut self) {
        self.terms
            .sort_by(|a, b| a.rate.partial_cmp(&b.rate).expect("rates are finite"));
        let mut merged: Vec<ExpPolyTerm> = Vec::with_capacity(self.terms.len());
        for term in self.terms.drain(..) {
            let tol = RATE_EPS * term.rate.abs().max(1.0);
            match merged.last_mut() {
                Some(last) if (last.rate - term.rate).abs() <= tol => {
                    poly_add_into(&mut last.coeffs, &term.coeffs);
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| !poly_is_zero(&t.coeffs));
        self.terms = merged;
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for term in &self.terms {
            let p = poly_eval(&term.coeffs, x);
            acc += if term.rate == 0.0 { p } else { p * (term.rate * x).exp() };
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_terms(terms)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| ExpPolyTerm { rate: t.rate, coeffs: poly_scale(&t.coeffs, c) })
                .collect(),
        )
    }

    /// Expression of `x -> self(x + delta)`.
    pub fn composed_shift(&self, delta: f64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| {
                    let shifted = poly_shift(&t.coeffs, delta);
                    let weight = if t.rate == 0.0 { 1.0 } else { (t.rate * delta).exp() };
                    ExpPolyTerm { rate: t.rate, coeffs: poly_scale(&shifted, weight) }
                })
                .collect(),
        )
    }

    /// Product with a single term `q(x) * exp(rate * x)`.
    pub fn mul_term(&self, rate: f64, coeffs: &[f64]) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| ExpPolyTerm {
                    rate: t.rate + rate,
                    coeffs: poly_mul(&t.coeffs, coeffs),
                })
                .collect(),
        )
    }

    /// Antiderivative within the algebra (defined up to a constant).
    pub fn antiderivative(&self) -> Self {
        let mut out: Vec<ExpPolyTerm> = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            if term.rate == 0.0 {
                out.push(ExpPolyTerm { rate: 0.0, coeffs: poly_antiderivative(&term.coeffs) });
            } else {
                // integral of p e^{rx} = e^{rx} sum_k (-1)^k p^{(k)} / r^{k+1}
                let r = term.rate;
                let mut q = vec![0.0];
                let mut deriv = term.coeffs.clone();
                let mut scale = 1.0 / r;
                loop {
                    poly_add_into(&mut q, &poly_scale(&deriv, scale));
                    if deriv.len() <= 1 {
                        break;
                    }
                    deriv = poly_derivative(&deriv);
                    scale = -scale / r;
                }
                out.push(ExpPolyTerm { rate: r, coeffs: q });
            }
        }
        Self::from_terms(out)
    }

}

// ---------------------------------------------------------------------------
// piecewise functions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub expr: SegmentExpr,
}

/// A compactly supported function given by contiguous exponential-polynomial
/// segments tiling `[support_lo, support_hi]`; zero outside.
///
/// Evaluation at an interior knot uses the right-closed branch; the upper
/// support endpoint belongs to the last segment.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Piecewise {
    segments: Vec<Segment>,
}

impl Piecewise {
    pub fn new(segments: Vec<(f64, f64, SegmentExpr)>) -> Self {
        assert!(!segments.is_empty(), "piecewise function needs at least one segment");
        let segments: Vec<Segment> = segments
            .into_iter()
            .map(|(lo, hi, expr)| {
                assert!(lo.is_finite() && hi.is_finite() && lo < hi, "bad segment [{lo}, {hi}]");
                Segment { lo, hi, expr }
            })
            .collect();
        for pair in segments.windows(2) {
            let gap = (pair[1].lo - pair[0].hi).abs();
            assert!(
                gap <= KNOT_EPS * pair[0].hi.abs().max(1.0),
                "segments must tile the support without gaps or overlaps ({} vs {})",
                pair[0].hi,
                pair[1].lo
            );
        }
        Self { segments }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.segments[0].lo, self.segments[self.segments.len() - 1].hi)
    }

    pub fn knots(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.segments.iter().map(|s| s.lo).collect();
        out.push(self.support().1);
        out
    }

    fn segment_index(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return None;
        }
        // Right-closed convention: the first segment with x < hi, or the last
        // one when x equals the upper support endpoint.
        let idx = self.segments.partition_point(|s| s.hi <= x);
        Some(idx.min(self.segments.len() - 1))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.segment_index(x) {
            Some(i) => self.segments[i].expr.eval(x),
            None => 0.0,
        }
    }

    fn expr_at(&self, x: f64) -> SegmentExpr {
        match self.segment_index(x) {
            Some(i) => self.segments[i].expr.clone(),
            None => SegmentExpr::zero(),
        }
    }

    /// `x -> f(x + delta)`; the support moves from `[lo, hi]` to `[lo - delta, hi - delta]`.
    pub fn shift(&self, delta: f64) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    lo: s.lo - delta,
                    hi: s.hi - delta,
                    expr: s.expr.composed_shift(delta),
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| Segment { lo: s.lo, hi: s.hi, expr: s.expr.scale(c) })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut knots = self.knots();
        knots.extend(other.knots());
        knots.sort_by(|a, b| a.partial_cmp(b).expect("knots are finite"));
        knots.dedup_by(|a, b| (*a - *b).abs() <= KNOT_EPS * a.abs().max(1.0));
        let mut segments = Vec::with_capacity(knots.len() - 1);
        for pair in knots.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let mid = 0.5 * (lo + hi);
            let expr = self.expr_at(mid).add(&other.expr_at(mid));
            segments.push((lo, hi, expr));
        }
        Self::new(segments)
    }

    /// Continuous antiderivative `A` with `A(support_lo) = 0`, together with
    /// the total integral `A(support_hi)`.
    pub fn antiderivative(&self) -> (Self, f64) {
        let mut segments = Vec::with_capacity(self.segments.len());
        let mut running = 0.0;
        for s in &self.segments {
            let indef = s.expr.antiderivative();
            let offset = running - indef.eval(s.lo);
            let expr = indef.add(&SegmentExpr::constant(offset));
            running = expr.eval(s.hi);
            segments.push((s.lo, s.hi, expr));
        }
        (Self::new(segments), running)
    }

    /// Definite integral over the support.
    #[cfg(test)]
    pub fn integral(&self) -> f64 {
        self.antiderivative().1
    }

    /// Exact convolution with `exp(rate .) * chi_[0,1]`.
    ///
    /// This is the inductive step for both polynomial B-splines (rate 0) and
    /// exponential B-splines; the result is supported on `[lo, hi + 1]`.
    pub fn convolve_exp_box(&self, rate: f64) -> Self {
        // (f * e^{a.}chi)(x) = e^{ax} [ A(x) - A(x-1) ],  A' = f(t) e^{-at}
        let weighted = Self {
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    lo: s.lo,
                    hi: s.hi,
                    expr: s.expr.mul_term(-rate, &[1.0]),
                })
                .collect(),
        };
        let (anti, total) = weighted.antiderivative();
        let (lo, hi) = self.support();

        let mut knots = self.knots();
        knots.extend(self.knots().iter().map(|k| k + 1.0));
        knots.sort_by(|a, b| a.partial_cmp(b).expect("knots are finite"));
        knots.dedup_by(|a, b| (*a - *b).abs() <= KNOT_EPS * a.abs().max(1.0));

        // A extended to the real line: 0 left of the support, `total` right of it.
        let anti_ext = |x: f64| -> SegmentExpr {
            if x < lo {
                SegmentExpr::zero()
            } else if x > hi {
                SegmentExpr::constant(total)
            } else {
                anti.expr_at(x)
            }
        };

        let mut segments = Vec::with_capacity(knots.len() - 1);
        for pair in knots.windows(2) {
            let (l, u) = (pair[0], pair[1]);
            let mid = 0.5 * (l + u);
            let upper = anti_ext(mid);
            let lower = anti_ext(mid - 1.0).composed_shift(-1.0);
            let expr = upper.sub_expr(&lower).mul_term(rate, &[1.0]);
            segments.push((l, u, expr));
        }
        Self::new(segments)
    }

    /// Largest jump in value across interior knots (0 for a continuous function).
    pub fn continuity_gap(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for pair in self.segments.windows(2) {
            let knot = pair[1].lo;
            let left = pair[0].expr.eval(knot);
            let right = pair[1].expr.eval(knot);
            worst = worst.max((left - right).abs());
        }
        worst
    }
}

impl SegmentExpr {
    fn sub_expr(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }
}
