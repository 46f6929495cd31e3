//! Batch command-line front end. [`run`] parses arguments, runs one
//! operation and returns the exit code with a versioned report.
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::kan::{ex_iterate, horn_is_unfillable, is_fibration, is_kan, solve_lift, LiftProblem};
use crate::pi::{pi0, pi1, pi_n_classes};
use crate::scomplex::{format::to_spec, load_smap, load_sset, standard, SMap, SSet};
use crate::sgpd::{
    adjunction_bijection, diag_nerve, load_sgpd, postnikov_gpd, shift_check, unit_map, wbar, SGpd,
};
use crate::site::{
    generating_sets, load_presheaf, load_site, rlp_against, roundtrip_check, FiniteCat, Presheaf, PresheafMap,
    Sampling,
};
use crate::truncate::{cosk, is_n_fibration, is_n_type, postnikov, sphere_is_unhit, Fibrancy};
use crate::{Budget, Error, KanCertificate, Result, Verdict};

pub const SCHEMA: &str = "ntype-report/1";

#[derive(Parser, Debug)]
#[command(name = "ntype", version, about = "Truncation and fibrancy checks for finite simplicial objects")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Highest dimension enumerated or checked
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Search node limit
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Truncation level
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Site file; sections given as plain simplicial sets become constant presheaves
    #[arg(long, global = true)]
    pub site: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for sampled lifting squares
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Leave the wall time out of the report
    #[arg(long, global = true)]
    pub no_time: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// `cosk_n X`
    Cosk { input: PathBuf },
    /// `P_n X` of a Kan complex
    Postnikov { input: PathBuf },
    /// `Ex^k X`
    Ex {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Horn filling up to `--max-dim`
    KanCheck { input: PathBuf },
    /// Relative horn filling for a map
    FibCheck { map: PathBuf },
    /// Matching-map criterion for an `n`-fibration
    NfibCheck { map: PathBuf },
    /// Is `X → Δ0` an `n`-fibration
    NtypeCheck { input: PathBuf },
    /// Path components
    Pi0 { input: PathBuf },
    /// Edge-path group presentation
    Pi1 {
        input: PathBuf,
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Homotopy classes of spherical `n`-simplices
    Pin {
        input: PathBuf,
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Level sizes of the loop groupoid
    Loopgpd {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        word_length: usize,
    },
    /// Classifying space of a simplicial groupoid file
    Wbar { input: PathBuf },
    /// Diagonal nerve of a simplicial groupoid file
    Dnerve { input: PathBuf },
    /// `X → W̄GX` on `π0` and `π1`
    UnitCheck { input: PathBuf },
    /// `Hom(GX, H) ≅ Hom(X, W̄H)` for a constant groupoid `H`
    AdjunctionCheck {
        input: PathBuf,
        #[arg(long)]
        groupoid: PathBuf,
    },
    /// `π_s dBH ≅ π_{s-1} H(x, x)`
    ShiftCheck {
        input: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 1)]
        s: usize,
    },
    /// `dB P_n H` against `dB H` on `π0` and `π1`
    TruncationCheck { input: PathBuf },
    /// `W̄ P_{n-1} G X` against `P_n X`, sectionwise
    Roundtrip {
        input: PathBuf,
        /// Replace every section by `W̄G` of it (words of length 1), fibrant by construction
        #[arg(long)]
        kanify: bool,
    },
    /// The generating sets over `--site`
    GenSets {
        #[arg(long)]
        dim_bound: Option<usize>,
    },
    /// Lifting against the `J_n` slice, for a map made constant over `--site`
    RlpCheck {
        map: PathBuf,
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// A diagonal for the square `i`, `f`, `top`, `bottom`
    Lift {
        i: PathBuf,
        f: PathBuf,
        top: PathBuf,
        bottom: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Positive,
    Negative,
    Unknown,
    InputError,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Positive => "positive",
            Status::Negative => "negative",
            Status::Unknown => "unknown",
            Status::InputError => "input_error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Positive => 0,
            Status::Negative => 1,
            Status::Unknown => 2,
            Status::InputError => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    pub result: Value,
    pub budget: Budget,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialize") + "\n",
            Format::Text => {
                let mut out = format!("{}\nstatus: {}\n", self.command.join(" "), self.status.name());
                for i in &self.inputs {
                    out += &format!("input {} sha256:{}\n", i.path, i.sha256);
                }
                if let Some(s) = self.result.get("summary").and_then(Value::as_str) {
                    out += s;
                    out += "\n";
                }
                if let Some(w) = self.result.get("witness") {
                    out += &format!("witness: {w}\n");
                }
                if let Some(t) = self.wall_time_ms {
                    out += &format!("time: {t} ms\n");
                }
                out
            }
        }
    }
}

/// Exit code, rendered report and destination.
pub struct Outcome {
    pub code: i32,
    pub report: Option<Report>,
    pub rendered: String,
    pub out: Option<PathBuf>,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            return Outcome {
                code,
                report: None,
                rendered: e.to_string(),
                out: None,
            };
        }
    };
    let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut budget = Budget::default();
    if let Some(nodes) = cli.budget {
        budget = budget.with_search_nodes(nodes);
    }
    let start = Instant::now();
    let mut ctx = Ctx {
        cli: &cli,
        budget,
        inputs: Vec::new(),
    };
    let (status, result) = match ctx.dispatch() {
        Ok(r) => r,
        Err(e) if e.is_budget() => (Status::Unknown, json!({ "summary": e.to_string() })),
        Err(e) => (Status::InputError, json!({ "summary": e.to_string(), "error": format!("{e:?}") })),
    };
    let report = Report {
        schema: SCHEMA,
        command,
        inputs: ctx.inputs,
        status,
        result,
        budget: ctx.budget,
        wall_time_ms: (!cli.no_time).then(|| start.elapsed().as_millis() as u64),
    };
    Outcome {
        code: status.exit_code(),
        rendered: report.render(cli.format),
        report: Some(report),
        out: cli.out.clone(),
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    budget: Budget,
    inputs: Vec<InputDigest>,
}

type Answer = (Status, Value);

fn verdict_status(v: &Verdict) -> Status {
    match v {
        Verdict::Certified => Status::Positive,
        Verdict::Refuted(_) => Status::Negative,
        Verdict::Unknown(_) => Status::Unknown,
    }
}

fn sset_summary(x: &SSet) -> Value {
    json!({
        "name": x.name(),
        "cell_counts": x.cell_counts(),
        "sset": to_spec(x),
    })
}

fn certificate(cert: &KanCertificate, recheck: Option<bool>) -> Answer {
    let summary = match &cert.verdict {
        Verdict::Certified => format!("{}: certified up to dimension {}", cert.subject, cert.checked_dim),
        Verdict::Refuted(_) => format!("{}: refuted", cert.subject),
        Verdict::Unknown(why) => format!("{}: unknown ({why})", cert.subject),
    };
    let mut v = json!({ "summary": summary, "certificate": cert });
    if let Some(w) = cert.verdict.witness() {
        v["witness"] = serde_json::to_value(w).expect("witnesses serialize");
    }
    if let Some(r) = recheck {
        v["witness_rechecked"] = json!(r);
    }
    (verdict_status(&cert.verdict), v)
}

impl Ctx<'_> {
    fn digest(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        let p = path.display().to_string();
        if !self.inputs.iter().any(|i| i.path == p) {
            self.inputs.push(InputDigest {
                path: p,
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
        Ok(())
    }

    fn sset(&mut self, path: &Path) -> Result<Arc<SSet>> {
        self.digest(path)?;
        Ok(Arc::new(load_sset(path)?))
    }

    fn smap(&mut self, path: &Path) -> Result<SMap> {
        self.digest(path)?;
        load_smap(path)
    }

    fn sgpd(&mut self, path: &Path) -> Result<SGpd> {
        self.digest(path)?;
        load_sgpd(path, &self.budget)
    }

    fn site(&mut self) -> Result<Arc<FiniteCat>> {
        match self.cli.site.clone() {
            Some(p) => {
                self.digest(&p)?;
                Ok(Arc::new(load_site(&p)?))
            }
            None => Ok(Arc::new(FiniteCat::point())),
        }
    }

    /// A presheaf file, or a simplicial set made constant over the site.
    fn presheaf(&mut self, path: &Path) -> Result<Presheaf> {
        self.digest(path)?;
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)?;
        if value.get("sections").is_some() {
            return load_presheaf(path);
        }
        let x = Arc::new(load_sset(path)?);
        let site = self.site()?;
        Ok(Presheaf::constant(&site, &x))
    }

    fn n(&self) -> Result<usize> {
        self.cli.n.ok_or_else(|| Error::malformed("this command needs --n"))
    }

    fn max_dim(&self, default: usize) -> Result<usize> {
        let d = self.cli.max_dim.unwrap_or(default);
        self.budget.check_dim(d)?;
        Ok(d)
    }

    fn dispatch(&mut self) -> Result<Answer> {
        let b = self.budget.clone();
        match &self.cli.command {
            Command::Cosk { input } => {
                let x = self.sset(input)?;
                let n = self.n()?;
                let c = cosk(&x, n, self.max_dim(n + 2)?, &b)?;
                let mut v = sset_summary(&c.sset);
                v["summary"] = json!(format!("cosk{n}: cells {:?}", c.sset.cell_counts()));
                Ok((Status::Positive, v))
            }
            Command::Postnikov { input } => {
                let x = self.sset(input)?;
                let n = self.n()?;
                let d = self.max_dim(n + 2)?;
                let p = postnikov(&x, n, d, &Fibrancy::Certify { dim: d.max(n + 2) }, &b)?;
                let mut v = sset_summary(&p.stage);
                v["fibrancy"] = serde_json::to_value(&p.fibrancy)?;
                v["summary"] = json!(format!("P{n}: cells {:?}", p.stage.cell_counts()));
                Ok((Status::Positive, v))
            }
            Command::Ex { input, steps } => {
                let x = self.sset(input)?;
                let (e, _) = ex_iterate(&x, *steps, self.max_dim(2)?, &b)?;
                let mut v = sset_summary(&e);
                v["summary"] = json!(format!("Ex^{steps}: cells {:?}", e.cell_counts()));
                Ok((Status::Positive, v))
            }
            Command::KanCheck { input } => {
                let x = self.sset(input)?;
                let cert = is_kan(&x, self.max_dim(3)?, &b)?;
                let recheck = match cert.verdict.witness() {
                    Some(w) => Some(horn_is_unfillable(&x, w, &b)?),
                    None => None,
                };
                Ok(certificate(&cert, recheck))
            }
            Command::FibCheck { map } => {
                let f = self.smap(map)?;
                Ok(certificate(&is_fibration(&f, self.max_dim(3)?, &b)?, None))
            }
            Command::NfibCheck { map } => {
                let f = self.smap(map)?;
                let n = self.n()?;
                let cert = is_n_fibration(&f, n, self.max_dim(n + 2)?, &b)?;
                let recheck = match cert.verdict.witness() {
                    Some(w) => Some(sphere_is_unhit(&f, w, &b)?),
                    None => None,
                };
                Ok(certificate(&cert, recheck))
            }
            Command::NtypeCheck { input } => {
                let x = self.sset(input)?;
                let n = self.n()?;
                let cert = is_n_type(&x, n, self.max_dim(n + 2)?, &b)?;
                let recheck = match cert.verdict.witness() {
                    Some(w) => {
                        let f = SMap::to_point(x.clone(), Arc::new(standard(0)))?;
                        Some(sphere_is_unhit(&f, w, &b)?)
                    }
                    None => None,
                };
                Ok(certificate(&cert, recheck))
            }
            Command::Pi0 { input } => {
                let x = self.sset(input)?;
                let comps: Vec<Vec<String>> = pi0(&x)
                    .iter()
                    .map(|c| c.iter().map(|v| x.cell_name(*v).to_string()).collect())
                    .collect();
                let summary = match comps.len() {
                    1 => "1 component".to_string(),
                    k => format!("{k} components"),
                };
                Ok((Status::Positive, json!({ "summary": summary, "components": comps })))
            }
            Command::Pi1 { input, basepoint } => {
                let x = self.sset(input)?;
                let v = self.basepoint(&x, basepoint.as_deref())?;
                let g = pi1(&x, &v)?;
                let s = g.simplify();
                Ok((
                    Status::Positive,
                    json!({ "summary": format!("π1({}, {v}) = {s}", x.name()), "presentation": g, "simplified": s }),
                ))
            }
            Command::Pin { input, basepoint } => {
                let x = self.sset(input)?;
                let n = self.n()?;
                let v = self.basepoint(&x, basepoint.as_deref())?;
                let c = pi_n_classes(&x, &v, n, &b)?;
                Ok((
                    Status::Positive,
                    json!({ "summary": format!("{} classes in π{n}", c.count()), "classes": c }),
                ))
            }
            Command::Loopgpd { input, word_length } => {
                let x = self.sset(input)?;
                let g = SGpd::loop_groupoid(&x);
                let wb = b.clone().with_word_length(*word_length);
                let mut levels = Vec::new();
                for n in 0..=self.max_dim(1)? {
                    let (arrows, truncated) = g.all_arrows(n, &wb)?;
                    levels.push(json!({ "level": n, "arrows": arrows.len(), "truncated": truncated }));
                }
                Ok((
                    Status::Positive,
                    json!({ "summary": format!("{}: {} objects", g.name(), g.objects().len()), "objects": g.objects(), "levels": levels }),
                ))
            }
            Command::Wbar { input } => {
                let h = self.sgpd(input)?;
                let w = wbar(&h, self.max_dim(3)?, &b)?;
                let mut v = sset_summary(&w.sset);
                v["truncated"] = json!(w.truncated);
                v["summary"] = json!(format!("{}: cells {:?}", w.sset.name(), w.sset.cell_counts()));
                Ok((Status::Positive, v))
            }
            Command::Dnerve { input } => {
                let h = self.sgpd(input)?;
                let d = diag_nerve(&h, self.max_dim(3)?, &b)?;
                let mut v = sset_summary(&d.sset);
                v["truncated"] = json!(d.truncated);
                v["summary"] = json!(format!("{}: cells {:?}", d.sset.name(), d.sset.cell_counts()));
                Ok((Status::Positive, v))
            }
            Command::UnitCheck { input } => {
                let x = self.sset(input)?;
                let sk = Arc::new(x.skeleton(2).with_name(x.name()));
                let u = unit_map(&sk, 2, &b)?;
                let e = crate::site::section_weq(&u.map, 1, &b);
                let status = equivalence_status(&e);
                Ok((status, json!({ "summary": format!("unit of {}: {}", x.name(), status.name()), "verdict": e })))
            }
            Command::AdjunctionCheck { input, groupoid } => {
                let x = self.sset(input)?;
                let h = self.sgpd(groupoid)?;
                let g = h
                    .as_constant()
                    .ok_or_else(|| Error::malformed("adjunction-check needs a constant groupoid"))?;
                let r = adjunction_bijection(&x, g, &b)?;
                let status = if r.is_bijection() { Status::Positive } else { Status::Negative };
                Ok((
                    status,
                    json!({ "summary": format!("|Hom(GX, H)| = {}, |Hom(X, W̄H)| = {}", r.functors, r.maps), "report": r }),
                ))
            }
            Command::ShiftCheck { input, object, s } => {
                let h = self.sgpd(input)?;
                let r = shift_check(&h, object, *s, &b)?;
                let status = compare_status(&r.verdict);
                Ok((
                    status,
                    json!({ "summary": format!("π{s}: {} vs {}", r.nerve_side, r.hom_side), "report": r }),
                ))
            }
            Command::TruncationCheck { input } => {
                let h = self.sgpd(input)?;
                let n = self.n()?;
                let d = self.max_dim(2)?;
                let p = postnikov_gpd(&h, n);
                let left = diag_nerve(&p, d, &b)?;
                let right = diag_nerve(&h, d, &b)?;
                let r = crate::site::gpd::compare_sections(h.name(), &left.sset, &right.sset, &b);
                let status = equivalence_status(&r.verdict);
                Ok((
                    status,
                    json!({ "summary": format!("dB P{n} vs dB on π0, π1: {}", status.name()), "report": r }),
                ))
            }
            Command::Roundtrip { input, kanify } => {
                let n = self.n()?;
                let mut x = self.presheaf(input)?;
                let mut structural = Vec::new();
                if *kanify {
                    x = kanified(&x, &b)?;
                    structural = x.site().objects().to_vec();
                }
                let names: Vec<&str> = structural.iter().map(String::as_str).collect();
                let wb = if *kanify { b.clone().with_word_length(1) } else { b.clone() };
                let r = roundtrip_check(&x, n, &names, &wb)?;
                let status = equivalence_status(&r.verdict);
                Ok((status, json!({ "summary": format!("roundtrip n = {n}: {}", status.name()), "report": r })))
            }
            Command::GenSets { dim_bound } => {
                let site = self.site()?;
                let n = self.n()?;
                let g = generating_sets(n, &site, dim_bound.unwrap_or(n + 3))?;
                let labels = |v: &[crate::site::Generator]| v.iter().map(|g| g.label.clone()).collect::<Vec<_>>();
                Ok((
                    Status::Positive,
                    json!({
                        "summary": format!("|I| = {}, |J| = {}, |J_n extension| = {}", g.i_proj.len(), g.j_proj.len(), g.j_extension.len()),
                        "i_proj": labels(&g.i_proj),
                        "j_proj": labels(&g.j_proj),
                        "j_extension": labels(&g.j_extension),
                    }),
                ))
            }
            Command::RlpCheck { map, samples } => {
                let f = self.smap(map)?;
                let site = self.site()?;
                let n = self.n()?;
                let g = generating_sets(n, &site, self.cli.max_dim.unwrap_or(n + 3))?;
                let pf = PresheafMap::constant(&site, &f);
                let sampling = self.cli.seed.map(|seed| Sampling {
                    seed,
                    squares_per_generator: *samples,
                });
                let r = rlp_against(&pf, &g.j_n(), sampling, &b)?;
                let mut v = json!({ "summary": format!("{} squares: {}", r.squares, verdict_status(&r.verdict).name()), "certificate": r });
                if let Some(w) = r.verdict.witness() {
                    v["witness"] = serde_json::to_value(w)?;
                }
                Ok((verdict_status(&r.verdict), v))
            }
            Command::Lift { i, f, top, bottom } => {
                let p = LiftProblem::new(self.smap(i)?, self.smap(f)?, self.smap(top)?, self.smap(bottom)?)?;
                match solve_lift(&p, &b)? {
                    Some(h) => Ok((
                        Status::Positive,
                        json!({ "summary": "lift found", "lift": crate::scomplex::format::smap_to_spec(&h) }),
                    )),
                    None => Ok((Status::Negative, json!({ "summary": "no lift exists" }))),
                }
            }
        }
    }

    fn basepoint(&self, x: &SSet, given: Option<&str>) -> Result<String> {
        match given {
            Some(v) => Ok(v.to_string()),
            None => x
                .cells(0)
                .next()
                .map(|v| x.cell_name(v).to_string())
                .ok_or_else(|| Error::malformed(format!("{} has no vertices", x.name()))),
        }
    }
}

fn equivalence_status(e: &crate::site::Equivalence) -> Status {
    match e {
        crate::site::Equivalence::Positive { .. } => Status::Positive,
        crate::site::Equivalence::Negative { .. } => Status::Negative,
        crate::site::Equivalence::Unknown { .. } => Status::Unknown,
    }
}

fn compare_status(c: &crate::pi::CompareVerdict) -> Status {
    match c {
        crate::pi::CompareVerdict::Isomorphic(_) => Status::Positive,
        crate::pi::CompareVerdict::NotIsomorphic(_) => Status::Negative,
        crate::pi::CompareVerdict::Unknown(_) => Status::Unknown,
    }
}

/// Every section replaced by `W̄G` of it, words of length at most 1, with
/// the induced restrictions.
pub fn kanified(x: &Presheaf, budget: &Budget) -> Result<Presheaf> {
    let b = budget.clone().with_word_length(1);
    let g = crate::site::loop_groupoid_presheaf(x, &b)?;
    let dim = x.sections().iter().map(|s| s.top_dim()).max().unwrap_or(0).max(2) + 1;
    Ok(crate::site::wbar_presheaf(&g, dim, &b)?.with_name(&format!("W̄G{}", x.name())))
}
