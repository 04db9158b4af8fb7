//! Batch driver: job configuration, the pipeline per task, and output files.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::contraction::{build_context, ContractionContext};
use crate::error::{Error, Result};
use crate::orbits::{superclasses_ua, GaGroup, GroupOracle, Superclass, UaGroup};
use crate::rook::canonical_basic_pairs;
use crate::roots::{LieTypeSpec, PartitionSpec, Series};
use crate::scalars::Prime;
use crate::superchar::{theory_ga, theory_ua, SupercharTheory, Target, TheoryOptions};
use crate::verify::{check_axioms, check_claims, VerificationReport, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    ClassifyUa,
    TheoryUa,
    TheoryGa,
    Verify,
    ExportAll,
}

#[derive(Debug, Parser)]
#[command(name = "parcon", about = "Supercharacter theories of parabolic contractions over F_p")]
pub struct Args {
    /// A, B, C or D
    #[arg(long)]
    pub series: String,
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub prime: u32,
    /// Block sizes in position order, e.g. 2,1; Borel if omitted
    #[arg(long, value_delimiter = ',')]
    pub partition: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub task: Task,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1 << 22)]
    pub orbit_cap: usize,
    /// Worker threads; 0 uses all cores
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JobConfig {
    pub series: Series,
    pub rank: usize,
    pub prime: u32,
    pub partition: Option<Vec<usize>>,
    pub task: Task,
    #[serde(skip)]
    pub out: PathBuf,
    pub orbit_cap: usize,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub timestamp: bool,
}

impl JobConfig {
    pub fn from_args(a: Args) -> Result<Self> {
        let series: Series = a.series.parse().map_err(|_| Error::Config(format!("unknown series {}", a.series)))?;
        Ok(JobConfig {
            series,
            rank: a.rank,
            prime: a.prime,
            partition: a.partition,
            task: a.task,
            out: a.out,
            orbit_cap: a.orbit_cap,
            workers: a.workers,
            timestamp: !a.no_timestamp,
        })
    }

    /// Validated context for the job.
    pub fn context(&self) -> Result<ContractionContext> {
        let p = Prime::new(self.prime).map_err(|e| Error::Config(e.to_string()))?;
        let spec = LieTypeSpec::new(self.series, self.rank).map_err(|e| Error::Config(e.to_string()))?;
        let part = match &self.partition {
            Some(s) => PartitionSpec::new(spec, s).map_err(|e| Error::Config(e.to_string()))?,
            None => PartitionSpec::borel(spec),
        };
        build_context(spec, part, p)
    }
}

/// Result of a run: overall status and the files written.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::BadPrime(_) | Error::Partition(_) | Error::Spec(_) => EXIT_CONFIG,
        Error::Claim(_) => EXIT_CHECK_FAILED,
        _ => EXIT_ERROR,
    }
}

fn write_json(path: &Path, v: &Value, files: &mut Vec<PathBuf>) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s)?;
    files.push(path.to_path_buf());
    Ok(())
}

fn representative(ctx: &ContractionContext, target: Target, id: u64) -> Value {
    let (levi, u) = match target {
        Target::Ua => (None, id),
        Target::Ga => {
            let n = ctx.ua_order();
            (Some(ctx.levi[(id / n) as usize].rows()), id % n)
        }
    };
    let coords: Vec<Value> = ctx
        .coder()
        .decode(u)
        .iter()
        .zip(&ctx.basis)
        .filter(|(c, _)| **c != 0)
        .map(|(c, b)| json!({"root": [b.root.pair.0, b.root.pair.1], "value": c}))
        .collect();
    match levi {
        Some(h) => json!({"id": id, "levi": h, "coords": coords}),
        None => json!({"id": id, "coords": coords}),
    }
}

fn classes_json(ctx: &ContractionContext, target: Target, classes: &[Superclass]) -> Value {
    let rows: Vec<Value> = classes
        .iter()
        .enumerate()
        .map(|(k, c)| {
            json!({
                "index": k,
                "labels": c.labels,
                "size": c.size,
                "representative": representative(ctx, target, c.representative),
            })
        })
        .collect();
    json!({
        "group": target,
        "order": match target { Target::Ua => ctx.ua_order(), Target::Ga => ctx.ga_order() },
        "count": classes.len(),
        "classes": rows,
    })
}

fn characters_json(th: &SupercharTheory) -> Value {
    let id = th.identity_class().unwrap_or(0);
    let chars: Vec<Value> = th
        .chars
        .iter()
        .enumerate()
        .map(|(i, ch)| {
            let values: Vec<Value> = (0..th.classes.len())
                .map(|k| {
                    let v = ch.value(k);
                    json!({"class": k, "conductor": v.conductor(), "coeffs": v.coeff_strings(), "value": v.to_string()})
                })
                .collect();
            json!({
                "index": i,
                "label": ch.label,
                "degree": ch.degree(id).to_string(),
                "scale": ch.scale.to_string(),
                "values": values,
            })
        })
        .collect();
    json!({"group": th.target, "theorem": th.theorem, "count": th.chars.len(), "characters": chars})
}

fn display_only(x: f64) -> String {
    if x.abs() < 5e-7 {
        "0.000000".into()
    } else {
        format!("{:.6}", x)
    }
}

fn write_csv(path: &Path, th: &SupercharTheory, files: &mut Vec<PathBuf>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["character", "class", "conductor", "coefficients", "re_display_only", "im_display_only"])?;
    for ch in &th.chars {
        for (k, cls) in th.classes.iter().enumerate() {
            let v = ch.value(k);
            let (re, im) = v.approx();
            let cls_label = cls.labels.first().cloned().unwrap_or_else(|| k.to_string());
            w.write_record([
                ch.label.clone(),
                cls_label,
                v.conductor().to_string(),
                format!("({})", v.coeff_strings().join(";")),
                display_only(re),
                display_only(im),
            ])?;
        }
    }
    w.flush()?;
    files.push(path.to_path_buf());
    Ok(())
}

fn oracle<'a>(ctx: &'a ContractionContext, target: Target) -> Result<Box<dyn GroupOracle + 'a>> {
    Ok(match target {
        Target::Ua => Box::new(UaGroup::new(ctx)?),
        Target::Ga => Box::new(GaGroup::new(ctx)?),
    })
}

fn build(ctx: &ContractionContext, target: Target, opts: TheoryOptions) -> Result<SupercharTheory> {
    match target {
        Target::Ua => theory_ua(ctx, opts),
        Target::Ga => theory_ga(ctx, opts),
    }
}

fn theory_report(
    ctx: &ContractionContext,
    cfg: &JobConfig,
    target: Target,
) -> Result<(SupercharTheory, VerificationReport, Value)> {
    let th = build(ctx, target, TheoryOptions { orbit_cap: cfg.orbit_cap })?;
    let rep = check_axioms(&th, oracle(ctx, target)?.as_ref(), VerifyOptions { timing: cfg.timestamp });
    let summary = json!({
        "theorem": th.theorem,
        "classes": th.classes.len(),
        "characters": th.chars.len(),
        "diagnostics": th.diagnostics,
        "axioms": rep,
    });
    Ok((th, rep, summary))
}

/// superclasses.json, supercharacters.json and table.csv in `dir`.
fn write_theory(ctx: &ContractionContext, th: &SupercharTheory, dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_json(&dir.join("superclasses.json"), &classes_json(ctx, th.target, &th.classes), files)?;
    write_json(&dir.join("supercharacters.json"), &characters_json(th), files)?;
    write_csv(&dir.join("table.csv"), th, files)
}

fn header(cfg: &JobConfig, ctx: &ContractionContext) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("config".into(), json!(cfg));
    m.insert("context".into(), json!(ctx.summary()));
    if cfg.timestamp {
        let t = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        m.insert("generated_unix".into(), json!(t));
    }
    m
}

/// Runs one job and writes its artifacts under `cfg.out`.
pub fn run(cfg: &JobConfig) -> Result<Outcome> {
    if cfg.workers > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global();
    }
    let ctx = cfg.context()?;
    fs::create_dir_all(&cfg.out)?;
    let mut files = Vec::new();
    let mut report = header(cfg, &ctx);
    let passed = match cfg.task {
        Task::ClassifyUa => {
            let labels = canonical_basic_pairs(&ctx)?;
            let ua = superclasses_ua(&ctx, &labels, cfg.orbit_cap)?;
            write_json(&cfg.out.join("superclasses.json"), &classes_json(&ctx, Target::Ua, &ua.classes), &mut files)?;
            report.insert("orbits".into(), json!(ua.partition.orbits.len()));
            report.insert("canonical_labels".into(), json!(labels.len()));
            true
        }
        Task::TheoryUa | Task::TheoryGa => {
            let target = if cfg.task == Task::TheoryUa { Target::Ua } else { Target::Ga };
            let (th, rep, summary) = theory_report(&ctx, cfg, target)?;
            write_theory(&ctx, &th, &cfg.out, &mut files)?;
            report.insert("theory".into(), summary);
            rep.passed
        }
        Task::Verify | Task::ExportAll => {
            let claims = check_claims(&ctx, VerifyOptions { timing: cfg.timestamp });
            let mut ok = claims.passed;
            report.insert("claims".into(), json!(claims));
            for (target, name) in [(Target::Ua, "ua"), (Target::Ga, "ga")] {
                let (th, rep, summary) = theory_report(&ctx, cfg, target)?;
                if cfg.task == Task::ExportAll {
                    write_theory(&ctx, &th, &cfg.out.join(name), &mut files)?;
                }
                ok &= rep.passed;
                report.insert(name.into(), summary);
            }
            ok
        }
    };
    report.insert("passed".into(), json!(passed));
    write_json(&cfg.out.join("report.json"), &Value::Object(report), &mut files)?;
    Ok(Outcome { passed, files })
}
