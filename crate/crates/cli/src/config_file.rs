//! Flat `key = value` configuration files for the benchmark harness.
//!
//! Lines are `key = value`; `#` starts a comment; blank lines are ignored.
//! Unknown keys are errors. List-valued keys take comma-separated entries.
//! The recognized keys mirror [`BenchConfig`]; see the repository README for
//! the full table.

use gaborkit::{BenchConfig, DualKind, GeneratorKind, IdxRange, NoiseSigma, SignalKind};

pub fn parse_bench_config(text: &str, base: BenchConfig) -> Result<BenchConfig, String> {
    let mut config = base;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected 'key = value', got '{raw}'", lineno + 1));
        };
        let key = key.trim();
        let value = value.trim();
        apply_key(&mut config, key, value)
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
    }
    Ok(config)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse::<T>().map_err(|_| format!("invalid value '{value}' for {key}"))
}

fn apply_key(config: &mut BenchConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "a" => config.lattice.a = parse_num(key, value)?,
        "b" => config.lattice.b = parse_num(key, value)?,
        "m_min" => config.m_range.lo = parse_num(key, value)?,
        "m_max" => config.m_range.hi = parse_num(key, value)?,
        "n_min" => config.n_range.lo = parse_num(key, value)?,
        "n_max" => config.n_range.hi = parse_num(key, value)?,
        "count" => config.signal_count = parse_num(key, value)?,
        "map_lo" => config.map_lo = parse_num(key, value)?,
        "map_hi" => config.map_hi = parse_num(key, value)?,
        "quad_step" => config.quad_step = parse_num(key, value)?,
        "p" => config.p = parse_num(key, value)?,
        "bessel_scale" => config.bessel_scale = parse_num(key, value)?,
        "j_max" => {
            config.j_max = if value.eq_ignore_ascii_case("auto") {
                None
            } else {
                Some(parse_num(key, value)?)
            }
        }
        "sigma" => {
            config.sigma = if let Some(frac) = value.strip_prefix("rms:") {
                NoiseSigma::RmsFraction(parse_num(key, frac)?)
            } else {
                let s: f64 = parse_num(key, value)?;
                if s == 0.0 {
                    NoiseSigma::Zero
                } else {
                    NoiseSigma::Absolute(s)
                }
            }
        }
        "replications" => config.replications = parse_num(key, value)?,
        "seed" => config.seed = parse_num(key, value)?,
        "cert_tolerance" => config.cert_tolerance = parse_num(key, value)?,
        "generators" => {
            config.generators = split_list(value)
                .map(|s| GeneratorKind::parse(s).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
        }
        "duals" => {
            config.duals = split_list(value)
                .map(|s| DualKind::parse(s).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
        }
        "signals" => {
            config.signals = split_list(value)
                .map(|s| SignalKind::parse(s).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
        }
        other => return Err(format!("unknown key '{other}'")),
    }
    Ok(())
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Render a config back into the flat key = value format (used to document
/// the resolved configuration next to the manifest).
pub fn render_bench_config(config: &BenchConfig) -> String {
    let IdxRange { lo: m_lo, hi: m_hi } = config.m_range;
    let IdxRange { lo: n_lo, hi: n_hi } = config.n_range;
    let sigma = match config.sigma {
        NoiseSigma::Zero => "0".to_string(),
        NoiseSigma::Absolute(s) => format!("{s}"),
        NoiseSigma::RmsFraction(fr) => format!("rms:{fr}"),
    };
    let j_max = config.j_max.map_or("auto".to_string(), |j| j.to_string());
    let list = |items: Vec<String>| items.join(",");
    format!(
        "a = {}\nb = {}\nm_min = {m_lo}\nm_max = {m_hi}\nn_min = {n_lo}\nn_max = {n_hi}\n\
         count = {}\nmap_lo = {}\nmap_hi = {}\nquad_step = {}\np = {}\nbessel_scale = {}\n\
         j_max = {j_max}\nsigma = {sigma}\nreplications = {}\nseed = {}\ncert_tolerance = {}\n\
         generators = {}\nduals = {}\nsignals = {}\n",
        config.lattice.a,
        config.lattice.b,
        config.signal_count,
        config.map_lo,
        config.map_hi,
        config.quad_step,
        config.p,
        config.bessel_scale,
        config.replications,
        config.seed,
        config.cert_tolerance,
        list(config.generators.iter().map(|g| g.name().to_string()).collect()),
        list(config.duals.iter().map(|d| d.name().to_string()).collect()),
        list(config.signals.iter().map(|s| s.name().to_string()).collect()),
    )
}
