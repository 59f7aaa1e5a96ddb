//! Run configuration: a line-based `key = value` format with `[section]`
//! headers and `#` comments. Unknown keys are rejected, missing keys take
//! documented defaults, and every diagnostic names the offending line.

use std::fmt;

use qd_core::variation::VariationConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    MapElites,
    NoveltySearch,
    ObjectiveGa,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MapElites => "map_elites",
            Algorithm::NoveltySearch => "novelty_search",
            Algorithm::ObjectiveGa => "objective_ga",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "map_elites" => Some(Algorithm::MapElites),
            "novelty_search" => Some(Algorithm::NoveltySearch),
            "objective_ga" => Some(Algorithm::ObjectiveGa),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainName {
    Sphere,
    Arm,
    Maze,
    CppnImage,
}

impl DomainName {
    pub fn name(self) -> &'static str {
        match self {
            DomainName::Sphere => "sphere",
            DomainName::Arm => "arm",
            DomainName::Maze => "maze",
            DomainName::CppnImage => "cppn_image",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "sphere" => Some(DomainName::Sphere),
            "arm" => Some(DomainName::Arm),
            "maze" => Some(DomainName::Maze),
            "cppn_image" => Some(DomainName::CppnImage),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchiveKind {
    Grid,
    Cvt,
}

impl ArchiveKind {
    pub fn name(self) -> &'static str {
        match self {
            ArchiveKind::Grid => "grid",
            ArchiveKind::Cvt => "cvt",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "grid" => Some(ArchiveKind::Grid),
            "cvt" => Some(ArchiveKind::Cvt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    pub algorithm: Algorithm,
    pub domain: DomainName,
    pub budget: u64,
    pub seed: u64,
    pub batch: usize,
    /// 0 selects the automatic bootstrap size `max(100, niches / 10)`.
    pub init_count: usize,
    /// Rayon worker threads; 0 uses all cores. Results are identical for
    /// any worker count.
    pub workers: usize,
    /// Seed of the held-out target generator for the image domain.
    pub target_seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            algorithm: Algorithm::MapElites,
            domain: DomainName::Sphere,
            budget: 10_000,
            seed: 1,
            batch: 64,
            init_count: 0,
            workers: 0,
            target_seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveSection {
    pub kind: ArchiveKind,
    /// Bins per descriptor dimension; a single value is replicated.
    pub bins: Vec<usize>,
    /// Centroid count for CVT archives.
    pub k: usize,
    pub cvt_samples: usize,
    pub cvt_iters: usize,
}

impl Default for ArchiveSection {
    fn default() -> Self {
        ArchiveSection {
            kind: ArchiveKind::Grid,
            bins: vec![32],
            k: 1000,
            cvt_samples: 100_000,
            cvt_iters: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsSection {
    pub pop_size: usize,
    pub k: usize,
    pub rho: f64,
    pub local_competition: bool,
    pub blend_weight: f64,
    pub tournament_size: usize,
}

impl Default for NsSection {
    fn default() -> Self {
        NsSection {
            pop_size: 200,
            k: 15,
            rho: 0.03,
            local_competition: false,
            blend_weight: 0.5,
            tournament_size: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaSection {
    pub pop_size: usize,
    pub tournament_size: usize,
    pub elite_keep: usize,
}

impl Default for GaSection {
    fn default() -> Self {
        GaSection { pop_size: 200, tournament_size: 3, elite_keep: 10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptSection {
    pub ucb_beta: f64,
    pub max_trials: usize,
    pub success_eps: f64,
    pub target: [f64; 2],
    pub locked_joint: usize,
    pub locked_angle: f64,
}

impl Default for AdaptSection {
    fn default() -> Self {
        AdaptSection {
            ucb_beta: 0.5,
            max_trials: 20,
            success_eps: 0.02,
            target: [0.5, 0.5],
            locked_joint: 3,
            locked_angle: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub run: RunSection,
    pub archive: ArchiveSection,
    pub variation: VariationConfig,
    pub ns: NsSection,
    pub ga: GaSection,
    pub adapt: AdaptSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Run,
    Archive,
    Variation,
    Ns,
    Ga,
    Adapt,
}

impl Section {
    fn from_name(s: &str) -> Option<Self> {
        match s {
            "run" => Some(Section::Run),
            "archive" => Some(Section::Archive),
            "variation" => Some(Section::Variation),
            "ns" => Some(Section::Ns),
            "ga" => Some(Section::Ga),
            "adapt" => Some(Section::Adapt),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Section::Run => "run",
            Section::Archive => "archive",
            Section::Variation => "variation",
            Section::Ns => "ns",
            Section::Ga => "ga",
            Section::Adapt => "adapt",
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut section: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| ConfigError { line: line_no, message };
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated section header".into()))?
                .trim();
            section = Some(
                Section::from_name(name).ok_or_else(|| err(format!("unknown section `{name}`")))?,
            );
            continue;
        }

        let Some((key, value)) = line.split_once('=') else {
            return Err(err(format!("expected `key = value`, got `{line}`")));
        };
        let key = key.trim();
        let value = value.trim();
        let Some(section) = section else {
            return Err(err(format!("key `{key}` appears before any [section] header")));
        };

        apply_key(&mut cfg, section, key, value).map_err(err)?;
    }

    Ok(cfg)
}

fn apply_key(cfg: &mut RunConfig, section: Section, key: &str, value: &str) -> Result<(), String> {
    match (section, key) {
        (Section::Run, "algorithm") => {
            cfg.run.algorithm = Algorithm::from_name(value)
                .ok_or_else(|| format!("unknown algorithm `{value}`"))?;
        }
        (Section::Run, "domain") => {
            cfg.run.domain =
                DomainName::from_name(value).ok_or_else(|| format!("unknown domain `{value}`"))?;
        }
        (Section::Run, "budget") => cfg.run.budget = parse_u64(key, value, 0)?,
        (Section::Run, "seed") => cfg.run.seed = parse_u64(key, value, 0)?,
        (Section::Run, "batch") => cfg.run.batch = parse_usize(key, value, 1)?,
        (Section::Run, "init_count") => cfg.run.init_count = parse_usize(key, value, 0)?,
        (Section::Run, "workers") => cfg.run.workers = parse_usize(key, value, 0)?,
        (Section::Run, "target_seed") => cfg.run.target_seed = parse_u64(key, value, 0)?,

        (Section::Archive, "kind") => {
            cfg.archive.kind = ArchiveKind::from_name(value)
                .ok_or_else(|| format!("unknown archive kind `{value}`"))?;
        }
        (Section::Archive, "bins") => {
            let bins: Vec<usize> = value
                .split_whitespace()
                .map(|v| parse_usize(key, v, 1))
                .collect::<Result<_, _>>()?;
            if bins.is_empty() {
                return Err("`bins` needs at least one value".into());
            }
            cfg.archive.bins = bins;
        }
        (Section::Archive, "k") => cfg.archive.k = parse_usize(key, value, 1)?,
        (Section::Archive, "cvt_samples") => cfg.archive.cvt_samples = parse_usize(key, value, 1)?,
        (Section::Archive, "cvt_iters") => cfg.archive.cvt_iters = parse_usize(key, value, 1)?,

        (Section::Variation, "sigma_gauss") => {
            cfg.variation.sigma_gauss = parse_f64(key, value, 0.0, f64::INFINITY)?;
        }
        (Section::Variation, "p_mut") => {
            cfg.variation.p_mut = parse_f64(key, value, 0.0, 1.0)?;
        }
        (Section::Variation, "sigma_iso") => {
            cfg.variation.sigma_iso = parse_f64(key, value, 0.0, f64::INFINITY)?;
        }
        (Section::Variation, "sigma_line") => {
            cfg.variation.sigma_line = parse_f64(key, value, 0.0, f64::INFINITY)?;
        }

        (Section::Ns, "pop_size") => cfg.ns.pop_size = parse_usize(key, value, 2)?,
        (Section::Ns, "k") => cfg.ns.k = parse_usize(key, value, 1)?,
        (Section::Ns, "rho") => {
            let rho = parse_f64(key, value, 0.0, f64::INFINITY)?;
            if rho == 0.0 {
                return Err("`rho` out of range: must be > 0".into());
            }
            cfg.ns.rho = rho;
        }
        (Section::Ns, "local_competition") => {
            cfg.ns.local_competition = parse_bool(key, value)?;
        }
        (Section::Ns, "blend_weight") => cfg.ns.blend_weight = parse_f64(key, value, 0.0, 1.0)?,
        (Section::Ns, "tournament_size") => cfg.ns.tournament_size = parse_usize(key, value, 1)?,

        (Section::Ga, "pop_size") => cfg.ga.pop_size = parse_usize(key, value, 1)?,
        (Section::Ga, "tournament_size") => cfg.ga.tournament_size = parse_usize(key, value, 1)?,
        (Section::Ga, "elite_keep") => cfg.ga.elite_keep = parse_usize(key, value, 0)?,

        (Section::Adapt, "ucb_beta") => {
            cfg.adapt.ucb_beta = parse_f64(key, value, 0.0, f64::INFINITY)?;
        }
        (Section::Adapt, "max_trials") => cfg.adapt.max_trials = parse_usize(key, value, 1)?,
        (Section::Adapt, "success_eps") => {
            let eps = parse_f64(key, value, 0.0, f64::INFINITY)?;
            if eps == 0.0 {
                return Err("`success_eps` out of range: must be > 0".into());
            }
            cfg.adapt.success_eps = eps;
        }
        (Section::Adapt, "target") => {
            let parts: Vec<f64> = value
                .split_whitespace()
                .map(|v| parse_f64(key, v, f64::NEG_INFINITY, f64::INFINITY))
                .collect::<Result<_, _>>()?;
            if parts.len() != 2 {
                return Err(format!("`target` needs two values, got {}", parts.len()));
            }
            cfg.adapt.target = [parts[0], parts[1]];
        }
        (Section::Adapt, "locked_joint") => cfg.adapt.locked_joint = parse_usize(key, value, 0)?,
        (Section::Adapt, "locked_angle") => {
            cfg.adapt.locked_angle = parse_f64(key, value, f64::NEG_INFINITY, f64::INFINITY)?;
        }

        (section, key) => {
            return Err(format!("unknown key `{key}` in [{}]", section.name()));
        }
    }
    Ok(())
}

fn parse_u64(key: &str, value: &str, min: u64) -> Result<u64, String> {
    let v: i128 = value
        .parse()
        .map_err(|_| format!("expected an integer for `{key}`, got `{value}`"))?;
    if v < min as i128 || v > u64::MAX as i128 {
        return Err(format!("`{key}` out of range: {v} (must be >= {min})"));
    }
    Ok(v as u64)
}

fn parse_usize(key: &str, value: &str, min: usize) -> Result<usize, String> {
    let v: i128 = value
        .parse()
        .map_err(|_| format!("expected an integer for `{key}`, got `{value}`"))?;
    if v < min as i128 || v > usize::MAX as i128 {
        return Err(format!("`{key}` out of range: {v} (must be >= {min})"));
    }
    Ok(v as usize)
}

fn parse_f64(key: &str, value: &str, min: f64, max: f64) -> Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("expected a number for `{key}`, got `{value}`"))?;
    if !v.is_finite() || v < min || v > max {
        return Err(format!("`{key}` out of range: {value}"));
    }
    Ok(v)
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true/false for `{key}`, got `{value}`")),
    }
}

/// Decimal text with 17 significant digits; round-trips f64 exactly.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Canonical text form; `parse_config(serialize_config(c)) == c`.
pub fn serialize_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let bins =
        cfg.archive.bins.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
    out.push_str(&format!(
        "[run]\nalgorithm = {}\ndomain = {}\nbudget = {}\nseed = {}\nbatch = {}\n\
         init_count = {}\nworkers = {}\ntarget_seed = {}\n\n",
        cfg.run.algorithm.name(),
        cfg.run.domain.name(),
        cfg.run.budget,
        cfg.run.seed,
        cfg.run.batch,
        cfg.run.init_count,
        cfg.run.workers,
        cfg.run.target_seed,
    ));
    out.push_str(&format!(
        "[archive]\nkind = {}\nbins = {}\nk = {}\ncvt_samples = {}\ncvt_iters = {}\n\n",
        cfg.archive.kind.name(),
        bins,
        cfg.archive.k,
        cfg.archive.cvt_samples,
        cfg.archive.cvt_iters,
    ));
    out.push_str(&format!(
        "[variation]\nsigma_gauss = {}\np_mut = {}\nsigma_iso = {}\nsigma_line = {}\n\n",
        fmt_real(cfg.variation.sigma_gauss),
        fmt_real(cfg.variation.p_mut),
        fmt_real(cfg.variation.sigma_iso),
        fmt_real(cfg.variation.sigma_line),
    ));
    out.push_str(&format!(
        "[ns]\npop_size = {}\nk = {}\nrho = {}\nlocal_competition = {}\nblend_weight = {}\n\
         tournament_size = {}\n\n",
        cfg.ns.pop_size,
        cfg.ns.k,
        fmt_real(cfg.ns.rho),
        cfg.ns.local_competition,
        fmt_real(cfg.ns.blend_weight),
        cfg.ns.tournament_size,
    ));
    out.push_str(&format!(
        "[ga]\npop_size = {}\ntournament_size = {}\nelite_keep = {}\n\n",
        cfg.ga.pop_size, cfg.ga.tournament_size, cfg.ga.elite_keep,
    ));
    out.push_str(&format!(
        "[adapt]\nucb_beta = {}\nmax_trials = {}\nsuccess_eps = {}\ntarget = {} {}\n\
         locked_joint = {}\nlocked_angle = {}\n",
        fmt_real(cfg.adapt.ucb_beta),
        cfg.adapt.max_trials,
        fmt_real(cfg.adapt.success_eps),
        fmt_real(cfg.adapt.target[0]),
        fmt_real(cfg.adapt.target[1]),
        cfg.adapt.locked_joint,
        fmt_real(cfg.adapt.locked_angle),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_file_yields_defaults() {
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
        assert_eq!(parse_config("# just a comment\n\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn negative_budget_names_the_line() {
        let err = parse_config("[run]\nbudget = -5\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("out of range"), "{}", err.message);

        let err = parse_config("budget = -5").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse_config("[run]\nbudgit = 5\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("unknown key `budgit`"));
    }

    #[test]
    fn type_mismatch_is_reported() {
        let err = parse_config("[run]\nbudget = soon\n").unwrap_err();
        assert!(err.message.contains("expected an integer"));
        let err = parse_config("[variation]\np_mut = maybe\n").unwrap_err();
        assert!(err.message.contains("expected a number"));
    }

    #[test]
    fn sections_and_comments_parse() {
        let text = "\
# experiment
[run]
algorithm = novelty_search   # trailing comment
domain = maze
budget = 50000
[ns]
pop_size = 120
rho = 0.05
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.run.algorithm, Algorithm::NoveltySearch);
        assert_eq!(cfg.run.domain, DomainName::Maze);
        assert_eq!(cfg.run.budget, 50_000);
        assert_eq!(cfg.ns.pop_size, 120);
        assert_eq!(cfg.ns.rho, 0.05);
        // Untouched sections keep defaults.
        assert_eq!(cfg.ga, GaSection::default());
    }

    #[test]
    fn serialized_defaults_reparse() {
        let cfg = RunConfig::default();
        let text = serialize_config(&cfg);
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }

    fn arb_config() -> impl Strategy<Value = RunConfig> {
        (
            (0u64..1_000_000, 0u64..u64::MAX, 1usize..500, 0usize..200),
            (0.0f64..2.0, 0.0f64..=1.0, 0.0f64..1.0, 0.0f64..2.0),
            (2usize..300, 1usize..30, 1e-6f64..1.0, any::<bool>(), 0.0f64..=1.0),
            (1usize..300, 1usize..10, 0usize..50),
            (0.0f64..3.0, 1usize..100, 1e-6f64..0.5, -1.0f64..1.0, -1.0f64..1.0),
            prop::collection::vec(1usize..64, 1..3),
        )
            .prop_map(|(run, var, ns, ga, adapt, bins)| {
                let mut cfg = RunConfig::default();
                cfg.run.budget = run.0;
                cfg.run.seed = run.1;
                cfg.run.batch = run.2;
                cfg.run.init_count = run.3;
                cfg.variation = VariationConfig {
                    sigma_gauss: var.0,
                    p_mut: var.1,
                    sigma_iso: var.2,
                    sigma_line: var.3,
                };
                cfg.ns.pop_size = ns.0;
                cfg.ns.k = ns.1;
                cfg.ns.rho = ns.2;
                cfg.ns.local_competition = ns.3;
                cfg.ns.blend_weight = ns.4;
                cfg.ga.pop_size = ga.0;
                cfg.ga.tournament_size = ga.1;
                cfg.ga.elite_keep = ga.2;
                cfg.adapt.ucb_beta = adapt.0;
                cfg.adapt.max_trials = adapt.1;
                cfg.adapt.success_eps = adapt.2;
                cfg.adapt.target = [adapt.3, adapt.4];
                cfg.archive.bins = bins;
                cfg
            })
    }

    proptest! {
        /// serialize -> parse is a fixed point.
        #[test]
        fn round_trip(cfg in arb_config()) {
            let text = serialize_config(&cfg);
            let parsed = parse_config(&text).unwrap();
            prop_assert_eq!(parsed, cfg);
        }
    }
}
