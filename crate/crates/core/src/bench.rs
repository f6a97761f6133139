//! AMSE benchmark harness: run every (generator, dual, signal) cell, certify
//! the dual used in each cell, reconstruct with the truncated frame expansion,
//! and aggregate mean-square errors over noise replications.

use crate::duals::{certify, DualMeta, DualSpec};
use crate::error::{Error, Result};
use crate::gabor::{reconstruct, IdxRange, Lattice};
use crate::signals::{add_noise, make_signal, map_to_interval, NoiseConfig, SampledSignal, SignalKind};
use crate::windows::{bspline, normalize_exp_bspline_centered, Window};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default quadrature step shared by dual construction and certification.
pub const DEFAULT_QUAD_STEP: f64 = 1.0 / 8192.0;
/// Default certification tolerance for duality residuals.
pub const DEFAULT_CERT_TOLERANCE: f64 = 1e-5;

// ---------------------------------------------------------------------------
// cell coordinates
// ---------------------------------------------------------------------------

/// Generator windows covered by the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    B2,
    B3,
    Eps3,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 3] = [GeneratorKind::B2, GeneratorKind::B3, GeneratorKind::Eps3];

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::B2 => "b2",
            GeneratorKind::B3 => "b3",
            GeneratorKind::Eps3 => "eps3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b2" => Ok(GeneratorKind::B2),
            "b3" => Ok(GeneratorKind::B3),
            "eps3" => Ok(GeneratorKind::Eps3),
            other => Err(Error::InvalidConfig(format!("unknown generator '{other}'"))),
        }
    }

    /// Build the generator window; `eps3` is scaled to partition unity and
    /// recentered onto `[-3/2, 3/2]` so the shift-based constructions apply.
    pub fn window(&self, p: f64) -> Result<Window> {
        match self {
            GeneratorKind::B2 => bspline(2),
            GeneratorKind::B3 => bspline(3),
            GeneratorKind::Eps3 => normalize_exp_bspline_centered(p),
        }
    }

    /// Largest admissible modulation step for the symmetric dual family.
    pub fn admissible_b(&self) -> f64 {
        match self {
            GeneratorKind::B2 => 1.0 / 3.0,
            GeneratorKind::B3 | GeneratorKind::Eps3 => 1.0 / 5.0,
        }
    }
}

impl std::fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The eight dual windows of the benchmark grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualKind {
    Canonical,
    H,
    K,
    H2,
    K2,
    PhiH,
    PhiK,
    PhiCanonical,
}

impl DualKind {
    pub const ALL: [DualKind; 8] = [
        DualKind::Canonical,
        DualKind::H,
        DualKind::K,
        DualKind::H2,
        DualKind::K2,
        DualKind::PhiH,
        DualKind::PhiK,
        DualKind::PhiCanonical,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DualKind::Canonical => "canonical",
            DualKind::H => "h",
            DualKind::K => "k",
            DualKind::H2 => "h2",
            DualKind::K2 => "k2",
            DualKind::PhiH => "phi_h",
            DualKind::PhiK => "phi_k",
            DualKind::PhiCanonical => "phi_canonical",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "canonical" => Ok(DualKind::Canonical),
            "h" => Ok(DualKind::H),
            "k" => Ok(DualKind::K),
            "h2" => Ok(DualKind::H2),
            "k2" => Ok(DualKind::K2),
            "phi_h" | "phi-h" => Ok(DualKind::PhiH),
            "phi_k" | "phi-k" => Ok(DualKind::PhiK),
            "phi_canonical" | "phi-canonical" => Ok(DualKind::PhiCanonical),
            other => Err(Error::InvalidConfig(format!("unknown dual '{other}'"))),
        }
    }

    pub fn spec(&self, bessel_scale: f64, j_max: Option<usize>) -> DualSpec {
        let sym = || Box::new(DualSpec::Symmetric { coeffs: None });
        let asym = || Box::new(DualSpec::Asymmetric);
        match self {
            DualKind::Canonical => DualSpec::Canonical,
            DualKind::K => DualSpec::Symmetric { coeffs: None },
            DualKind::H => DualSpec::Asymmetric,
            DualKind::K2 => DualSpec::Iterated { base: sym(), levels: 2 },
            DualKind::H2 => DualSpec::Iterated { base: asym(), levels: 2 },
            DualKind::PhiK => DualSpec::Perturbed { base: sym(), bessel_scale, j_max },
            DualKind::PhiH => DualSpec::Perturbed { base: asym(), bessel_scale, j_max },
            DualKind::PhiCanonical => DualSpec::Perturbed {
                base: Box::new(DualSpec::Canonical),
                bessel_scale,
                j_max,
            },
        }
    }
}

impl std::fmt::Display for DualKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

/// Noise amplitude policy for replicated runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSigma {
    /// No noise: AMSE equals the deterministic truncation MSE.
    Zero,
    /// Fixed standard deviation.
    Absolute(f64),
    /// Standard deviation as a fraction of each clean signal's RMS.
    RmsFraction(f64),
}

impl NoiseSigma {
    fn resolve(&self, clean: &SampledSignal) -> f64 {
        match self {
            NoiseSigma::Zero => 0.0,
            NoiseSigma::Absolute(s) => *s,
            NoiseSigma::RmsFraction(fr) => fr * clean.rms(),
        }
    }
}

/// Full benchmark configuration; the default reproduces the standard grid
/// (a = 1, b = 1/5, indices in [-3, 3], 2048 samples mapped to [-3, 3],
/// noiseless single replication).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub lattice: Lattice,
    pub m_range: IdxRange,
    pub n_range: IdxRange,
    pub signal_count: usize,
    pub map_lo: f64,
    pub map_hi: f64,
    pub quad_step: f64,
    /// Rate parameter of the exponential B-spline generator.
    pub p: f64,
    /// Scale of the Bessel window `u = scale * g` in the perturbation duals.
    pub bessel_scale: f64,
    /// Modulation-series truncation; `None` selects the grid Nyquist.
    pub j_max: Option<usize>,
    pub sigma: NoiseSigma,
    pub replications: usize,
    pub seed: u64,
    pub cert_tolerance: f64,
    pub generators: Vec<GeneratorKind>,
    pub duals: Vec<DualKind>,
    pub signals: Vec<SignalKind>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            lattice: Lattice { a: 1.0, b: 0.2 },
            m_range: IdxRange::symmetric(3),
            n_range: IdxRange::symmetric(3),
            signal_count: 2048,
            map_lo: -3.0,
            map_hi: 3.0,
            quad_step: DEFAULT_QUAD_STEP,
            p: 1.0,
            bessel_scale: 0.1,
            j_max: None,
            sigma: NoiseSigma::Zero,
            replications: 1,
            seed: 42,
            cert_tolerance: DEFAULT_CERT_TOLERANCE,
            generators: GeneratorKind::ALL.to_vec(),
            duals: DualKind::ALL.to_vec(),
            signals: SignalKind::ALL.to_vec(),
        }
    }
}

/// The standard noisy profile: sigma = 0.1 x signal RMS, 30 replications.
pub fn standard_noise_profile(config: &mut BenchConfig) {
    config.sigma = NoiseSigma::RmsFraction(0.1);
    config.replications = 30;
    config.seed = 42;
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lattice.a > 0.0) || !(self.lattice.b > 0.0) {
            return Err(Error::InvalidConfig("lattice steps must be positive".into()));
        }
        if (self.lattice.a - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(
                "the dual constructions and the duality certificate require a = 1".into(),
            ));
        }
        for g in &self.generators {
            if self.lattice.b > g.admissible_b() + 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "b = {} exceeds the admissible bound {} for generator {}",
                    self.lattice.b,
                    g.admissible_b(),
                    g
                )));
            }
        }
        if self.signal_count < 2 {
            return Err(Error::InvalidConfig("signal_count must be at least 2".into()));
        }
        if !(self.map_hi > self.map_lo) {
            return Err(Error::InvalidConfig("mapping interval must be nonempty".into()));
        }
        if !(self.quad_step > 0.0) {
            return Err(Error::InvalidConfig("quad_step must be positive".into()));
        }
        if !(self.p > 0.0) {
            return Err(Error::InvalidConfig("p must be positive".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be at least 1".into()));
        }
        if !(self.cert_tolerance > 0.0) {
            return Err(Error::InvalidConfig("cert_tolerance must be positive".into()));
        }
        match self.sigma {
            NoiseSigma::Absolute(s) if !(s >= 0.0) => {
                return Err(Error::InvalidConfig("sigma must be >= 0".into()));
            }
            NoiseSigma::RmsFraction(fr) if !(fr >= 0.0) => {
                return Err(Error::InvalidConfig("rms fraction must be >= 0".into()));
            }
            _ => {}
        }
        if self.generators.is_empty() || self.duals.is_empty() || self.signals.is_empty() {
            return Err(Error::InvalidConfig(
                "generator, dual, and signal lists must be nonempty".into(),
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// AMSE
// ---------------------------------------------------------------------------

/// Average over replications of the per-sample mean squared error.
pub fn amse(original: &SampledSignal, reconstructions: &[SampledSignal]) -> Result<f64> {
    if reconstructions.is_empty() {
        return Err(Error::InvalidParameter("AMSE needs at least one reconstruction".into()));
    }
    let mut total = 0.0;
    for rec in reconstructions {
        total += original.mse(rec)?;
    }
    Ok(total / reconstructions.len() as f64)
}

// ---------------------------------------------------------------------------
// the benchmark itself
// ---------------------------------------------------------------------------

/// Outcome of one benchmark cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CellOutcome {
    Ok {
        amse: f64,
        duality_residual: f64,
        imag_residual: f64,
    },
    Failed(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub generator: GeneratorKind,
    pub dual: DualKind,
    pub signal: SignalKind,
    pub outcome: CellOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmseReport {
    pub config: BenchConfig,
    pub cells: Vec<CellResult>,
}

impl AmseReport {
    pub fn amse_of(&self, g: GeneratorKind, d: DualKind, s: SignalKind) -> Option<f64> {
        self.cells.iter().find_map(|c| match &c.outcome {
            CellOutcome::Ok { amse, .. } if c.generator == g && c.dual == d && c.signal == s => {
                Some(*amse)
            }
            _ => None,
        })
    }

    pub fn any_failed(&self) -> bool {
        self.cells.iter().any(|c| matches!(c.outcome, CellOutcome::Failed(_)))
    }

    /// Deterministic CSV rendering, one row per cell in configured order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generator,dual,signal,amse,duality_residual,imag_residual,status\n");
        for cell in &self.cells {
            match &cell.outcome {
                CellOutcome::Ok { amse, duality_residual, imag_residual } => {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},ok\n",
                        cell.generator, cell.dual, cell.signal, amse, duality_residual, imag_residual
                    ));
                }
                CellOutcome::Failed(msg) => {
                    out.push_str(&format!(
                        "{},{},{},,,,error: {}\n",
                        cell.generator,
                        cell.dual,
                        cell.signal,
                        msg.replace(',', ";").replace('\n', " ")
                    ));
                }
            }
        }
        out
    }
}

struct BuiltDual {
    window: Window,
    residual: f64,
}

/// Construct and certify the dual for one (generator, dual) pair.
pub fn build_certified_dual(
    generator: &Window,
    dual: DualKind,
    config: &BenchConfig,
) -> Result<(Window, DualMeta)> {
    let spec = dual.spec(config.bessel_scale, config.j_max);
    let (window, mut meta) = spec.build(generator, config.lattice, config.quad_step, config.cert_tolerance)?;
    let residual = certify(generator, &window, config.lattice, config.quad_step)?;
    meta.duality_residual = Some(residual);
    if residual > config.cert_tolerance {
        return Err(Error::NotADual { residual, tolerance: config.cert_tolerance });
    }
    Ok((window, meta))
}

/// Run the full benchmark grid. Cells are independent and evaluated in
/// parallel; the report is assembled in configured order regardless of
/// completion order, and all randomness is derived from (seed, replication),
/// so reruns of the same config are bit-identical.
pub fn run_bench(config: &BenchConfig) -> Result<AmseReport> {
    config.validate()?;

    let mut generators: Vec<(GeneratorKind, Window)> = Vec::new();
    for &gk in &config.generators {
        generators.push((gk, gk.window(config.p)?));
    }

    // Duals are shared across signals; build and certify once per pair.
    let mut duals: Vec<((GeneratorKind, DualKind), std::result::Result<BuiltDual, String>)> =
        Vec::new();
    for (gk, gw) in &generators {
        for &dk in &config.duals {
            let built = build_certified_dual(gw, dk, config)
                .map(|(window, meta)| BuiltDual {
                    window,
                    residual: meta.duality_residual.unwrap_or(f64::NAN),
                })
                .map_err(|e| e.to_string());
            duals.push(((*gk, dk), built));
        }
    }
    let dual_of = |gk: GeneratorKind, dk: DualKind| {
        duals
            .iter()
            .find(|((g, d), _)| *g == gk && *d == dk)
            .map(|(_, built)| built)
            .expect("dual was built for every configured pair")
    };

    let mut signals: Vec<(SignalKind, SampledSignal)> = Vec::new();
    for &sk in &config.signals {
        let raw = make_signal(sk, config.signal_count)?;
        signals.push((sk, map_to_interval(&raw, config.map_lo, config.map_hi)?));
    }
    let signal_of = |sk: SignalKind| {
        signals
            .iter()
            .find(|(k, _)| *k == sk)
            .map(|(_, s)| s)
            .expect("signal was generated for every configured kind")
    };

    let keys: Vec<(GeneratorKind, DualKind, SignalKind)> = config
        .generators
        .iter()
        .flat_map(|&g| {
            config.duals.iter().flat_map(move |&d| {
                config.signals.iter().map(move |&s| (g, d, s))
            })
        })
        .collect();

    let cells: Vec<CellResult> = keys
        .par_iter()
        .map(|&(gk, dk, sk)| {
            let outcome = match dual_of(gk, dk) {
                Err(msg) => CellOutcome::Failed(msg.clone()),
                Ok(built) => {
                    let generator = &generators.iter().find(|(k, _)| *k == gk).unwrap().1;
                    let clean = signal_of(sk);
                    run_cell(clean, generator, &built.window, built.residual, config)
                }
            };
            CellResult { generator: gk, dual: dk, signal: sk, outcome }
        })
        .collect();

    Ok(AmseReport { config: config.clone(), cells })
}

fn run_cell(
    clean: &SampledSignal,
    generator: &Window,
    dual: &Window,
    duality_residual: f64,
    config: &BenchConfig,
) -> CellOutcome {
    let sigma = config.sigma.resolve(clean);
    let noise = NoiseConfig { sigma, replications: config.replications, seed: config.seed };
    let mut reconstructions = Vec::with_capacity(config.replications);
    let mut imag_residual: f64 = 0.0;
    for rep in 0..config.replications {
        let input = match add_noise(clean, &noise, rep) {
            Ok(s) => s,
            Err(e) => return CellOutcome::Failed(e.to_string()),
        };
        let rec = reconstruct(&input, generator, dual, config.lattice, config.m_range, config.n_range);
        imag_residual = imag_residual.max(rec.imag_residual);
        reconstructions.push(rec.signal);
    }
    match amse(clean, &reconstructions) {
        Ok(value) => CellOutcome::Ok { amse: value, duality_residual, imag_residual },
        Err(e) => CellOutcome::Failed(e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// ordering analysis
// ---------------------------------------------------------------------------

/// Equality tolerance when ranking AMSE values.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Ranking {
    /// What was held fixed, e.g. "b2/blocks".
    pub scope: String,
    /// (candidate, amse) sorted ascending; ties keep configured order.
    pub entries: Vec<(String, f64)>,
    /// Number of leading entries within [`TIE_TOLERANCE`] of the minimum.
    pub tied_leaders: usize,
}

fn rank(scope: String, entries: Vec<(String, f64)>) -> Ranking {
    let mut sorted = entries;
    // stable sort preserves configured order among ties
    sorted.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("AMSE values are finite"));
    let tied_leaders = if sorted.is_empty() {
        0
    } else {
        let best = sorted[0].1;
        sorted.iter().take_while(|(_, v)| (v - best).abs() <= TIE_TOLERANCE).count()
    };
    Ranking { scope, entries: sorted, tied_leaders }
}

/// Summary of the two headline ordering claims plus full per-scope rankings.
#[derive(Debug, Clone, Serialize)]
pub struct OrderingSummary {
    pub dual_rankings: Vec<Ranking>,
    pub generator_rankings: Vec<Ranking>,
    /// Cells (generator, signal) where the symmetric dual k attains the
    /// minimum (within the tie tolerance), out of all ranked cells.
    pub k_lowest: (usize, usize),
    pub k_lowest_holds: bool,
    /// Cells (dual, signal) where eps3 attains the minimum, out of all ranked.
    pub eps3_lowest: (usize, usize),
    pub eps3_lowest_holds: bool,
}

/// Rank duals within each (generator, signal) cell and generators within each
/// (dual, signal) cell; a claim "holds" when it wins a strict majority of the
/// cells it applies to. Ties within [`TIE_TOLERANCE`] count as attaining the
/// minimum and are reported through `tied_leaders`.
pub fn ordering_analysis(report: &AmseReport) -> OrderingSummary {
    let config = &report.config;
    let mut dual_rankings = Vec::new();
    let mut k_hits = 0usize;
    let mut k_total = 0usize;
    for &g in &config.generators {
        for &s in &config.signals {
            let entries: Vec<(String, f64)> = config
                .duals
                .iter()
                .filter_map(|&d| report.amse_of(g, d, s).map(|v| (d.name().to_string(), v)))
                .collect();
            if entries.len() != config.duals.len() {
                continue; // errored cells leave the scope unranked
            }
            let ranking = rank(format!("{g}/{s}"), entries);
            if config.duals.contains(&DualKind::K) {
                k_total += 1;
                let best = ranking.entries[0].1;
                if report
                    .amse_of(g, DualKind::K, s)
                    .is_some_and(|v| (v - best).abs() <= TIE_TOLERANCE)
                {
                    k_hits += 1;
                }
            }
            dual_rankings.push(ranking);
        }
    }

    let mut generator_rankings = Vec::new();
    let mut e_hits = 0usize;
    let mut e_total = 0usize;
    for &d in &config.duals {
        for &s in &config.signals {
            let entries: Vec<(String, f64)> = config
                .generators
                .iter()
                .filter_map(|&g| report.amse_of(g, d, s).map(|v| (g.name().to_string(), v)))
                .collect();
            if entries.len() != config.generators.len() {
                continue;
            }
            let ranking = rank(format!("{d}/{s}"), entries);
            if config.generators.contains(&GeneratorKind::Eps3) {
                e_total += 1;
                let best = ranking.entries[0].1;
                if report
                    .amse_of(GeneratorKind::Eps3, d, s)
                    .is_some_and(|v| (v - best).abs() <= TIE_TOLERANCE)
                {
                    e_hits += 1;
                }
            }
            generator_rankings.push(ranking);
        }
    }

    OrderingSummary {
        dual_rankings,
        generator_rankings,
        k_lowest: (k_hits, k_total),
        k_lowest_holds: 2 * k_hits > k_total,
        eps3_lowest: (e_hits, e_total),
        eps3_lowest_holds: 2 * e_hits > e_total,
    }
}

impl OrderingSummary {
    /// Human-readable rendering used for the `orderings.txt` artifact.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("AMSE orderings (ascending; ties within 1e-12 keep configured order)\n\n");
        out.push_str("== duals ranked per (generator, signal) ==\n");
        for r in &self.dual_rankings {
            let row: Vec<String> = r.entries.iter().map(|(n, v)| format!("{n}={v:.6}")).collect();
            let tie = if r.tied_leaders > 1 {
                format!("  [tie among first {}]", r.tied_leaders)
            } else {
                String::new()
            };
            out.push_str(&format!("{}: {}{}\n", r.scope, row.join(" < "), tie));
        }
        out.push_str("\n== generators ranked per (dual, signal) ==\n");
        for r in &self.generator_rankings {
            let row: Vec<String> = r.entries.iter().map(|(n, v)| format!("{n}={v:.6}")).collect();
            let tie = if r.tied_leaders > 1 {
                format!("  [tie among first {}]", r.tied_leaders)
            } else {
                String::new()
            };
            out.push_str(&format!("{}: {}{}\n", r.scope, row.join(" < "), tie));
        }
        out.push_str("\n== headline claims ==\n");
        out.push_str(&format!(
            "symmetric dual k attains the lowest AMSE: {}/{} cells -> {}\n",
            self.k_lowest.0,
            self.k_lowest.1,
            if self.k_lowest_holds { "HOLDS (majority)" } else { "DOES NOT HOLD" }
        ));
        out.push_str(&format!(
            "eps3 generator attains the lowest AMSE: {}/{} cells -> {}\n",
            self.eps3_lowest.0,
            self.eps3_lowest.1,
            if self.eps3_lowest_holds { "HOLDS (majority)" } else { "DOES NOT HOLD" }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn toy_signal(values: Vec<f64>) -> SampledSignal {
        let grid = Grid::over(0.0, 1.0, values.len()).unwrap();
        SampledSignal::new(grid, values).unwrap()
    }

    #[test]
    fn amse_of_identical_signal_is_zero() {
        let f = toy_signal(vec![1.0, -2.0, 3.0]);
        assert_eq!(amse(&f, &[f.clone()]).unwrap(), 0.0);
    }

    #[test]
    fn amse_of_constant_offset_is_its_square() {
        let f = toy_signal(vec![1.0, -2.0, 3.0]);
        let shifted = toy_signal(vec![1.5, -1.5, 3.5]);
        let v = amse(&f, &[shifted]).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn amse_averages_replications() {
        // replication MSEs 0 and 2/3 average to 1/3
        let f = toy_signal(vec![0.0, 1.0, 2.0]);
        let r1 = f.clone();
        let r2 = toy_signal(vec![1.0, 1.0, 1.0]);
        let v = amse(&f, &[r1, r2]).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn amse_rejects_grid_mismatch_and_empty_lists() {
        let f = toy_signal(vec![0.0, 1.0, 2.0]);
        let other = SampledSignal::zeros(Grid::over(0.0, 2.0, 3).unwrap());
        assert!(amse(&f, &[other]).is_err());
        assert!(amse(&f, &[]).is_err());
    }

    fn single_cell_config() -> BenchConfig {
        BenchConfig {
            generators: vec![GeneratorKind::B2],
            duals: vec![DualKind::K],
            signals: vec![SignalKind::Blocks],
            signal_count: 512,
            quad_step: 1.0 / 2048.0,
            ..BenchConfig::default()
        }
    }

    #[test]
    fn single_cell_truncation_error_is_positive() {
        let report = run_bench(&single_cell_config()).unwrap();
        assert_eq!(report.cells.len(), 1);
        match &report.cells[0].outcome {
            CellOutcome::Ok { amse, duality_residual, imag_residual } => {
                assert!(*amse > 0.0, "truncated reconstruction of a discontinuous signal");
                assert!(*duality_residual < 1e-5);
                assert!(*imag_residual < 1e-8);
            }
            CellOutcome::Failed(msg) => panic!("cell failed: {msg}"),
        }
    }

    #[test]
    fn noiseless_amse_is_independent_of_replication_count() {
        let mut config = single_cell_config();
        let one = run_bench(&config).unwrap();
        config.replications = 5;
        let five = run_bench(&config).unwrap();
        assert_eq!(
            one.amse_of(GeneratorKind::B2, DualKind::K, SignalKind::Blocks),
            five.amse_of(GeneratorKind::B2, DualKind::K, SignalKind::Blocks)
        );
    }

    #[test]
    fn noisy_runs_are_deterministic() {
        let mut config = single_cell_config();
        config.sigma = NoiseSigma::RmsFraction(0.1);
        config.replications = 3;
        let a = run_bench(&config).unwrap();
        let b = run_bench(&config).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn invalid_b_is_rejected_up_front() {
        let mut config = BenchConfig::default();
        config.lattice.b = 0.25; // above 1/5, inadmissible for b3 and eps3
        assert!(matches!(run_bench(&config), Err(Error::InvalidConfig(_))));
    }

    fn synthetic_report(cells: &[(GeneratorKind, DualKind, SignalKind, f64)]) -> AmseReport {
        let mut config = BenchConfig::default();
        config.generators = cells.iter().map(|c| c.0).collect::<Vec<_>>();
        config.generators.dedup();
        config.duals = {
            let mut seen = Vec::new();
            for c in cells {
                if !seen.contains(&c.1) {
                    seen.push(c.1);
                }
            }
            seen
        };
        config.signals = {
            let mut seen = Vec::new();
            for c in cells {
                if !seen.contains(&c.2) {
                    seen.push(c.2);
                }
            }
            seen
        };
        AmseReport {
            config,
            cells: cells
                .iter()
                .map(|&(g, d, s, v)| CellResult {
                    generator: g,
                    dual: d,
                    signal: s,
                    outcome: CellOutcome::Ok {
                        amse: v,
                        duality_residual: 0.0,
                        imag_residual: 0.0,
                    },
                })
                .collect(),
        }
    }

    #[test]
    fn reference_column_ordering_is_recovered() {
        // Published AMSE column for the B2 generator on Blocks.
        use DualKind::*;
        let cells: Vec<(GeneratorKind, DualKind, SignalKind, f64)> = vec![
            (GeneratorKind::B2, Canonical, SignalKind::Blocks, 3.4992),
            (GeneratorKind::B2, H, SignalKind::Blocks, 3.3969),
            (GeneratorKind::B2, K, SignalKind::Blocks, 3.3877),
            (GeneratorKind::B2, H2, SignalKind::Blocks, 6.2686),
            (GeneratorKind::B2, K2, SignalKind::Blocks, 3.8635),
            (GeneratorKind::B2, PhiH, SignalKind::Blocks, 3.4246),
            (GeneratorKind::B2, PhiK, SignalKind::Blocks, 3.4225),
            (GeneratorKind::B2, PhiCanonical, SignalKind::Blocks, 3.4946),
        ];
        let report = synthetic_report(&cells);
        let summary = ordering_analysis(&report);
        assert_eq!(summary.dual_rankings.len(), 1);
        let names: Vec<&str> =
            summary.dual_rankings[0].entries.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            vec!["k", "h", "phi_k", "phi_h", "phi_canonical", "canonical", "k2", "h2"]
        );
        assert_eq!(summary.k_lowest, (1, 1));
        assert!(summary.k_lowest_holds);
    }

    #[test]
    fn k_optimal_everywhere_is_counted_fully() {
        let mut cells = Vec::new();
        for g in GeneratorKind::ALL {
            for s in SignalKind::ALL {
                cells.push((g, DualKind::K, s, 1.0));
                cells.push((g, DualKind::H, s, 2.0));
            }
        }
        let report = synthetic_report(&cells);
        let summary = ordering_analysis(&report);
        assert_eq!(summary.k_lowest, (15, 15));
        assert!(summary.k_lowest_holds);
    }

    #[test]
    fn exact_ties_keep_configured_order_and_are_flagged() {
        let cells = vec![
            (GeneratorKind::B2, DualKind::Canonical, SignalKind::Doppler, 0.5),
            (GeneratorKind::B2, DualKind::H, SignalKind::Doppler, 0.5),
            (GeneratorKind::B2, DualKind::K, SignalKind::Doppler, 0.7),
        ];
        let report = synthetic_report(&cells);
        let summary = ordering_analysis(&report);
        let r = &summary.dual_rankings[0];
        assert_eq!(r.tied_leaders, 2);
        assert_eq!(r.entries[0].0, "canonical"); // configured order preserved
        assert_eq!(r.entries[1].0, "h");
        // k does not attain the tied minimum
        assert_eq!(summary.k_lowest, (0, 1));
    }

    #[test]
    fn csv_marks_failed_cells() {
        let mut report = synthetic_report(&[(
            GeneratorKind::B2,
            DualKind::K,
            SignalKind::Blocks,
            1.0,
        )]);
        report.cells.push(CellResult {
            generator: GeneratorKind::B2,
            dual: DualKind::H,
            signal: SignalKind::Blocks,
            outcome: CellOutcome::Failed("boom, with comma".into()),
        });
        let csv = report.to_csv();
        assert!(csv.contains("b2,k,blocks,1,0,0,ok"));
        assert!(csv.contains("b2,h,blocks,,,,error: boom; with comma"));
        assert!(report.any_failed());
    }
}
