//! On-disk formats: `archive.csv` (+ per-niche graph files and
//! `centroids.csv`), `archive_meta.ini`, `metrics.csv`, the adaptation
//! trial log, and binary portable graymaps. All files are written
//! atomically (temp then rename) and all reals carry 17 significant
//! digits, so save -> load -> save is byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use qd_core::adapt::TrialRow;
use qd_core::archive::{Archive, CvtArchive, CvtIndexer, GridArchive, GridIndexer};
use qd_core::domains::cppn::{
    Activation, CppnEdge, CppnGenome, CppnInput, CppnNode, GrayImage,
};
use qd_core::engines::MetricsRow;
use qd_core::novelty::{NoveltyArchive, NoveltyEntry};
use qd_core::types::{Descriptor, Elite, Evaluation, Genome};

use crate::config::fmt_real;

/// Any persistable run artifact holding solutions.
#[derive(Debug)]
pub enum AnyArchive {
    Grid(GridArchive),
    Cvt(CvtArchive),
    Novelty(NoveltyArchive),
    /// Single best solution of a non-archive engine.
    Best(Elite),
}

impl AnyArchive {
    pub fn kind_name(&self) -> &'static str {
        match self {
            AnyArchive::Grid(_) => "grid",
            AnyArchive::Cvt(_) => "cvt",
            AnyArchive::Novelty(_) => "novelty",
            AnyArchive::Best(_) => "best",
        }
    }

    /// `(niche, elite)` rows in file order.
    pub fn rows(&self) -> Vec<(usize, &Elite)> {
        match self {
            AnyArchive::Grid(a) => a.cells().collect(),
            AnyArchive::Cvt(a) => a.cells().collect(),
            AnyArchive::Novelty(a) => a
                .entries()
                .iter()
                .enumerate()
                .filter_map(|(i, e)| e.elite.as_ref().map(|el| (i, el)))
                .collect(),
            AnyArchive::Best(e) => vec![(0, e)],
        }
    }

    pub fn descriptor_dim(&self) -> Option<usize> {
        self.rows().first().map(|(_, e)| e.descriptor().dim())
    }
}

/// An archive plus the context needed to interpret it.
#[derive(Debug)]
pub struct SavedArchive {
    pub archive: AnyArchive,
    pub fitness_bounds: (f64, f64),
    pub descriptor_bounds: Vec<(f64, f64)>,
}

/// Write `bytes` to `path` via a temporary file in the same directory, so
/// interrupted runs never leave truncated artifacts.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn genome_file_name(niche: usize) -> String {
    format!("genome_{niche}.cppn")
}

/// Serialize one genome for the archive CSV cell; graph genomes go to a
/// side file and the cell holds its name.
fn genome_cell(dir: &Path, niche: usize, genome: &Genome) -> Result<String> {
    match genome {
        Genome::Real(values) => {
            Ok(values.iter().map(|v| fmt_real(*v)).collect::<Vec<_>>().join(";"))
        }
        Genome::Cppn(g) => {
            let name = genome_file_name(niche);
            write_atomic(&dir.join(&name), serialize_cppn(g).as_bytes())?;
            Ok(name)
        }
    }
}

pub fn serialize_cppn(genome: &CppnGenome) -> String {
    let mut out = String::new();
    for (id, node) in genome.nodes.iter().enumerate() {
        let label = match node {
            CppnNode::Input(i) => i.name(),
            CppnNode::Computed(a) => a.name(),
        };
        out.push_str(&format!("node {id} {label}\n"));
    }
    for e in &genome.edges {
        out.push_str(&format!("edge {} {} {}\n", e.src, e.dst, fmt_real(e.weight)));
    }
    out.push_str(&format!("output {}\n", genome.output));
    out
}

pub fn parse_cppn(text: &str) -> Result<CppnGenome> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut output = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("node") => {
                let id: usize = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .with_context(|| format!("graph line {line_no}: bad node id"))?;
                if id != nodes.len() {
                    bail!("graph line {line_no}: node ids must be contiguous");
                }
                let label = parts
                    .next()
                    .with_context(|| format!("graph line {line_no}: missing node label"))?;
                let node = CppnInput::from_name(label)
                    .map(CppnNode::Input)
                    .or_else(|| Activation::from_name(label).map(CppnNode::Computed))
                    .with_context(|| format!("graph line {line_no}: unknown label `{label}`"))?;
                nodes.push(node);
            }
            Some("edge") => {
                let src: usize = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .with_context(|| format!("graph line {line_no}: bad edge source"))?;
                let dst: usize = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .with_context(|| format!("graph line {line_no}: bad edge target"))?;
                let weight: f64 = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .with_context(|| format!("graph line {line_no}: bad edge weight"))?;
                edges.push(CppnEdge { src, dst, weight });
            }
            Some("output") => {
                output = Some(
                    parts
                        .next()
                        .and_then(|v| v.parse().ok())
                        .with_context(|| format!("graph line {line_no}: bad output id"))?,
                );
            }
            Some(other) => bail!("graph line {line_no}: unknown record `{other}`"),
            None => {}
        }
    }
    let output = output.context("graph file has no output record")?;
    let genome = CppnGenome { nodes, edges, output };
    genome.validate().map_err(|e| anyhow::anyhow!("invalid graph: {e}"))?;
    Ok(genome)
}

fn csv_header(d: usize) -> String {
    let descs: Vec<String> = (0..d).map(|i| format!("desc_{i}")).collect();
    format!("niche,{},fitness,genome", descs.join(","))
}

/// Write `archive.csv`, `archive_meta.ini` and, for CVT archives,
/// `centroids.csv` into `dir`.
pub fn save_archive(dir: &Path, saved: &SavedArchive) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let d = saved.descriptor_bounds.len();

    let mut csv = csv_header(d);
    csv.push('\n');
    let mut genome_kind = "real";
    for (niche, elite) in saved.archive.rows() {
        if matches!(elite.genome, Genome::Cppn(_)) {
            genome_kind = "cppn";
        }
        let descs: Vec<String> =
            elite.descriptor().values().iter().map(|v| fmt_real(*v)).collect();
        csv.push_str(&format!(
            "{niche},{},{},{}\n",
            descs.join(","),
            fmt_real(elite.fitness()),
            genome_cell(dir, niche, &elite.genome)?,
        ));
    }
    write_atomic(&dir.join("archive.csv"), csv.as_bytes())?;

    if let AnyArchive::Cvt(a) = &saved.archive {
        let mut out = String::from("centroid,");
        out.push_str(
            &(0..d).map(|i| format!("c_{i}")).collect::<Vec<_>>().join(","),
        );
        out.push('\n');
        for (i, c) in a.indexer().centroids().iter().enumerate() {
            let vals: Vec<String> = c.iter().map(|v| fmt_real(*v)).collect();
            out.push_str(&format!("{i},{}\n", vals.join(",")));
        }
        write_atomic(&dir.join("centroids.csv"), out.as_bytes())?;
    }

    let mut meta = String::from("[archive]\n");
    meta.push_str(&format!("kind = {}\n", saved.archive.kind_name()));
    meta.push_str(&format!("genome = {genome_kind}\n"));
    if let AnyArchive::Grid(a) = &saved.archive {
        let bins: Vec<String> = a.indexer().bins().iter().map(|b| b.to_string()).collect();
        meta.push_str(&format!("bins = {}\n", bins.join(" ")));
    }
    if let AnyArchive::Novelty(a) = &saved.archive {
        meta.push_str(&format!("rho = {}\n", fmt_real(a.rho())));
        meta.push_str(&format!("k = {}\n", a.k()));
    }
    let lo: Vec<String> = saved.descriptor_bounds.iter().map(|b| fmt_real(b.0)).collect();
    let hi: Vec<String> = saved.descriptor_bounds.iter().map(|b| fmt_real(b.1)).collect();
    meta.push_str(&format!("lo = {}\n", lo.join(" ")));
    meta.push_str(&format!("hi = {}\n", hi.join(" ")));
    meta.push_str(&format!("f_min = {}\n", fmt_real(saved.fitness_bounds.0)));
    meta.push_str(&format!("f_max = {}\n", fmt_real(saved.fitness_bounds.1)));
    write_atomic(&dir.join("archive_meta.ini"), meta.as_bytes())?;
    Ok(())
}

struct Meta {
    kind: String,
    genome: String,
    bins: Vec<usize>,
    rho: f64,
    k: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    f_min: f64,
    f_max: f64,
}

fn read_meta(path: &Path) -> Result<Meta> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut meta = Meta {
        kind: String::new(),
        genome: "real".into(),
        bins: Vec::new(),
        rho: 1.0,
        k: 15,
        lo: Vec::new(),
        hi: Vec::new(),
        f_min: 0.0,
        f_max: 1.0,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('[') || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("{}:{}: expected key = value", path.display(), idx + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let parse_list = |v: &str| -> Result<Vec<f64>> {
            v.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(Into::into))
                .collect::<Result<_>>()
                .with_context(|| format!("{}:{}: bad number list", path.display(), idx + 1))
        };
        match key {
            "kind" => meta.kind = value.to_string(),
            "genome" => meta.genome = value.to_string(),
            "bins" => {
                meta.bins = value
                    .split_whitespace()
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .with_context(|| format!("{}:{}: bad bins", path.display(), idx + 1))?;
            }
            "rho" => meta.rho = value.parse()?,
            "k" => meta.k = value.parse()?,
            "lo" => meta.lo = parse_list(value)?,
            "hi" => meta.hi = parse_list(value)?,
            "f_min" => meta.f_min = value.parse()?,
            "f_max" => meta.f_max = value.parse()?,
            other => bail!("{}:{}: unknown meta key `{other}`", path.display(), idx + 1),
        }
    }
    if meta.kind.is_empty() {
        bail!("{}: missing `kind`", path.display());
    }
    Ok(meta)
}

/// Load an archive previously written by [`save_archive`].
pub fn load_archive(dir: &Path) -> Result<SavedArchive> {
    let meta = read_meta(&dir.join("archive_meta.ini"))?;
    let csv_path = dir.join("archive.csv");
    let text = fs::read_to_string(&csv_path)
        .with_context(|| format!("reading {}", csv_path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().with_context(|| format!("{}: empty file", csv_path.display()))?;
    let d = header.split(',').filter(|c| c.starts_with("desc_")).count();
    if d == 0 || meta.lo.len() != d || meta.hi.len() != d {
        bail!("{}: header and meta disagree on descriptor dimension", csv_path.display());
    }

    let mut rows: Vec<(usize, Elite)> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != d + 3 {
            bail!("{}:{}: expected {} fields, got {}", csv_path.display(), line_no, d + 3, fields.len());
        }
        let niche: usize = fields[0]
            .parse()
            .with_context(|| format!("{}:{}: bad niche index", csv_path.display(), line_no))?;
        let desc: Vec<f64> = fields[1..=d]
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("{}:{}: bad descriptor", csv_path.display(), line_no))?;
        let fitness: f64 = fields[d + 1]
            .parse()
            .with_context(|| format!("{}:{}: bad fitness", csv_path.display(), line_no))?;
        let genome = if meta.genome == "cppn" {
            let gpath = dir.join(fields[d + 2]);
            let gtext = fs::read_to_string(&gpath)
                .with_context(|| format!("reading {}", gpath.display()))?;
            Genome::Cppn(parse_cppn(&gtext)?)
        } else {
            let values: Vec<f64> = fields[d + 2]
                .split(';')
                .map(|v| v.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .with_context(|| format!("{}:{}: bad genome", csv_path.display(), line_no))?;
            Genome::Real(values)
        };
        let evaluation = Evaluation { fitness, descriptor: Descriptor::new(desc) };
        rows.push((niche, Elite::new(genome, evaluation)));
    }

    let descriptor_bounds: Vec<(f64, f64)> =
        meta.lo.iter().zip(&meta.hi).map(|(&a, &b)| (a, b)).collect();
    let archive = match meta.kind.as_str() {
        "grid" => {
            let indexer = GridIndexer::new(descriptor_bounds.clone(), meta.bins.clone())
                .map_err(|e| anyhow::anyhow!("bad grid meta: {e}"))?;
            AnyArchive::Grid(
                Archive::from_cells(indexer, rows)
                    .map_err(|e| anyhow::anyhow!("corrupt archive: {e}"))?,
            )
        }
        "cvt" => {
            let centroids = read_centroids(&dir.join("centroids.csv"), d)?;
            let indexer = CvtIndexer::new(centroids)
                .map_err(|e| anyhow::anyhow!("bad centroids: {e}"))?;
            AnyArchive::Cvt(
                Archive::from_cells(indexer, rows)
                    .map_err(|e| anyhow::anyhow!("corrupt archive: {e}"))?,
            )
        }
        "novelty" => {
            let entries: Vec<NoveltyEntry> = rows
                .into_iter()
                .map(|(_, elite)| NoveltyEntry {
                    descriptor: elite.descriptor().clone(),
                    elite: Some(elite),
                })
                .collect();
            AnyArchive::Novelty(
                NoveltyArchive::from_parts(meta.rho, meta.k, entries)
                    .map_err(|e| anyhow::anyhow!("bad novelty meta: {e}"))?,
            )
        }
        "best" => {
            if rows.len() != 1 {
                bail!("{}: expected exactly one row, got {}", csv_path.display(), rows.len());
            }
            AnyArchive::Best(rows.remove(0).1)
        }
        other => bail!("unknown archive kind `{other}`"),
    };
    Ok(SavedArchive {
        archive,
        fitness_bounds: (meta.f_min, meta.f_max),
        descriptor_bounds,
    })
}

fn read_centroids(path: &Path, d: usize) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != d + 1 {
            bail!("{}:{}: expected {} fields", path.display(), idx + 1, d + 1);
        }
        let index: usize = fields[0]
            .parse()
            .with_context(|| format!("{}:{}: bad centroid index", path.display(), idx + 1))?;
        if index != out.len() {
            bail!("{}:{}: centroid indices must be contiguous", path.display(), idx + 1);
        }
        let c: Vec<f64> = fields[1..]
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("{}:{}: bad centroid", path.display(), idx + 1))?;
        out.push(c);
    }
    Ok(out)
}

pub fn save_metrics(path: &Path, rows: &[MetricsRow]) -> Result<()> {
    let mut out = String::from("evals,coverage,qd_score,best_fitness\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.evals,
            fmt_real(r.coverage),
            fmt_real(r.qd_score),
            fmt_real(r.best_fitness),
        ));
    }
    write_atomic(path, out.as_bytes())
}

pub fn save_trials(path: &Path, rows: &[TrialRow]) -> Result<()> {
    let mut out = String::from("trial,niche,prior_mean,posterior_mean,posterior_sd,observed\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.trial,
            r.niche,
            fmt_real(r.prior_mean),
            fmt_real(r.posterior_mean),
            fmt_real(r.posterior_sd),
            fmt_real(r.observed),
        ));
    }
    write_atomic(path, out.as_bytes())
}

/// Binary portable graymap (P5, maxval 255, row-major), bit-exact.
pub fn save_pgm(path: &Path, image: &GrayImage) -> Result<()> {
    let mut bytes = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    bytes.extend_from_slice(image.pixels());
    write_atomic(path, &bytes)
}
