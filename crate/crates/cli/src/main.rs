use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use convgoppa::cgc::{self, CgcFile, FamilyKind, MultiPoly, Outcome, ScanDomain};
use convgoppa::distance::{self, DistanceConfig, DEFAULT_CAP, DEFAULT_FALLBACK_STAGE};
use convgoppa::extend;
use convgoppa::text::{format_code_file, parse_code_file};
use convgoppa::{ConvCode, Error, FieldEmbedding, FiniteField, Gf};

#[derive(Parser)]
#[command(name = "convgoppa", version, about = "Free distance and MDS checks for convolutional codes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Stable `key: value` output.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Maximum number of search nodes per enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(u64).range(1000..))]
    cap: u64,
    /// Worker threads for scans (defaults to all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
}

#[derive(Subcommand)]
enum Command {
    /// Degree data and the Singleton bound of a code file.
    Invariants { file: PathBuf },
    /// Free distance with the row-distance profile.
    Freedist {
        file: PathBuf,
        /// Minimum over all stages up to --max-stage instead of the stage bound.
        #[arg(long)]
        oracle: bool,
        /// Last stage examined by --oracle or by the fallback.
        #[arg(long)]
        max_stage: Option<usize>,
    },
    /// Exits 0 when the code reaches the Singleton bound, 1 otherwise.
    Mds { file: PathBuf },
    /// Goppa code constructions from a spec file.
    #[command(subcommand)]
    Cgc(CgcCommand),
    /// Recompute the free distance over an extension field.
    Lift {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        ext_degree: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    All,
    TopNonzero,
}

#[derive(Subcommand)]
enum CgcCommand {
    /// Write the code file of a spec.
    Build {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify every member of a family.
    Scan {
        spec: PathBuf,
        /// Overrides the `scan:` line of the spec.
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        /// `;`-separated polynomials whose zeros should be the non-MDS members.
        #[arg(long)]
        predict: Option<String>,
    },
    /// Certify adding the point a z + b.
    Extend {
        spec: PathBuf,
        /// New point as `a,b`.
        #[arg(long)]
        point: String,
        /// Write the extended code file here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Every point whose extension is certified MDS.
    Eligible { spec: PathBuf },
}

enum Fail {
    Mismatch(String),
    Input(String),
    Cap(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge(_) => Fail::Cap(e.to_string()),
            e => Fail::Input(e.to_string()),
        }
    }
}

struct Report {
    title: String,
    fields: Vec<(&'static str, String)>,
}

impl Report {
    fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), fields: Vec::new() }
    }

    fn add(&mut self, key: &'static str, value: impl ToString) -> &mut Self {
        self.fields.push((key, value.to_string()));
        self
    }

    fn render(&self, porcelain: bool) -> String {
        let mut out = String::new();
        if porcelain {
            for (k, v) in &self.fields {
                let _ = writeln!(out, "{k}: {v}");
            }
        } else {
            let w = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let _ = writeln!(out, "{}", self.title);
            for (k, v) in &self.fields {
                let _ = writeln!(out, "  {k:<w$}  {v}");
            }
        }
        out
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: convgoppa::Result<T>) -> Result<T, Fail> {
    r.map_err(|e| match e {
        Error::Parse { .. } => Fail::Input(format!("{}: {e}", path.display())),
        e => e.into(),
    })
}

fn load_code(path: &Path) -> Result<ConvCode, Fail> {
    let g = in_file(path, parse_code_file(&read(path)?))?;
    Ok(ConvCode::new(&g)?)
}

fn load_cgc(path: &Path) -> Result<CgcFile, Fail> {
    in_file(path, cgc::parse_cgc_file(&read(path)?))
}

fn write_out(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn tuple(f: &FiniteField, t: &[Gf]) -> String {
    format!("({})", t.iter().map(|&x| f.format(x)).collect::<Vec<_>>().join(","))
}

fn tuples(f: &FiniteField, ts: &[Vec<Gf>]) -> String {
    if ts.is_empty() {
        return "-".into();
    }
    ts.iter().map(|t| tuple(f, t)).collect::<Vec<_>>().join(" ")
}

fn invariants(c: &ConvCode) -> Report {
    let mut r = Report::new(format!("code over {}", c.field().spec_string()));
    let cols = c.column_degrees().iter().map(|d| d.map_or("-".to_string(), |d| d.to_string()));
    let p = c.classification_params();
    r.add("field", c.field().spec_string())
        .add("n", c.n())
        .add("k", c.k())
        .add("delta", c.delta())
        .add("memory", c.memory())
        .add("forney", list(c.forney()))
        .add("column_degrees", list(cols))
        .add("kappa", p.kappa)
        .add("mu_g", p.mu_g)
        .add("singleton_bound", c.singleton_bound());
    r
}

fn method_name(m: distance::Method) -> &'static str {
    match m {
        distance::Method::Theorem => "theorem",
        distance::Method::Oracle => "oracle",
    }
}

fn freedist(c: &ConvCode, oracle: bool, max_stage: Option<usize>, cfg: &DistanceConfig) -> Result<Report, Fail> {
    let mut r = Report::new("free distance");
    if oracle {
        let d = distance::free_distance_oracle(c, max_stage, cfg)?;
        r.add("method", "oracle")
            .add("max_stage", max_stage.map_or("auto".to_string(), |s| s.to_string()))
            .add("dfree", d)
            .add("singleton_bound", c.singleton_bound())
            .add("mds", d == c.singleton_bound());
        return Ok(r);
    }
    let p = distance::free_distance(c, cfg)?;
    r.add("nu", p.nu)
        .add("mu", p.mu)
        .add("hypothesis", p.hypothesis_ok)
        .add("l_of_c", p.l_of_c)
        .add("row_distances", list(&p.row_distances))
        .add("dfree", p.dfree)
        .add("singleton_bound", p.singleton_bound)
        .add("mds", p.is_mds)
        .add("method", method_name(p.method));
    Ok(r)
}

fn parse_point(f: &FiniteField, s: &str) -> Result<(Gf, Gf), Fail> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (a, b) = s.split_once(',').ok_or_else(|| Fail::Input(format!("point `{s}` is not `a,b`")))?;
    Ok((f.parse(a.trim())?, f.parse(b.trim())?))
}

fn scan(
    file: &CgcFile,
    domain: Option<DomainArg>,
    predict: Option<&str>,
    porcelain: bool,
    cfg: &DistanceConfig,
) -> Result<(Report, Option<Fail>), Fail> {
    let fam = file.family()?;
    let f = fam.field().clone();
    let dom = match domain {
        Some(DomainArg::All) => ScanDomain::All,
        Some(DomainArg::TopNonzero) => ScanDomain::TopNonzero,
        None => file.scan.clone().unwrap_or(ScanDomain::All),
    };
    let conds = match predict {
        Some(p) => Some(MultiPoly::parse_list(&f, &fam.param_names(), p)?),
        None => None,
    };
    let rep = cgc::scan_family(fam.as_ref(), &dom, conds.as_deref(), cfg);
    let mut r = Report::new(rep.family.clone());
    r.add("family", &rep.family)
        .add("singleton_bound", rep.singleton_bound)
        .add("domain_size", rep.total())
        .add("mds_count", rep.mds_set().len())
        .add("non_mds_count", rep.non_mds_set().len())
        .add("non_mds", tuples(&f, &rep.non_mds_set()))
        .add("degenerate", tuples(&f, &rep.degenerate_set()))
        .add("excluded", tuples(&f, &rep.excluded().into_keys().collect::<Vec<_>>()));
    let failures = rep.failures();
    r.add("failed", tuples(&f, &failures.keys().cloned().collect::<Vec<_>>()));
    let mut fail = None;
    if let Some(conds) = &conds {
        for (c, ok) in conds.iter().zip(&rep.condition_matches) {
            r.add("condition", format!("{c} -> {}", if *ok { "non-mds on all zeros" } else { "has mds zeros" }));
        }
        let matched = rep.matched_equations == Some(true);
        r.add("matched_equations", matched).add("mismatches", tuples(&f, &rep.mismatches));
        if !matched {
            fail = Some(Fail::Mismatch(format!("{} tuples disagree with the prediction", rep.mismatches.len())));
        }
    }
    if let Some((t, msg)) = failures.iter().next() {
        fail = Some(Fail::Cap(format!("{} members failed, first {}: {msg}", failures.len(), tuple(&f, t))));
    }
    // per-member lines only in the human view, and only for small domains
    if !porcelain && rep.results.len() <= 64 {
        for (t, o) in &rep.results {
            let v = match o {
                Outcome::Mds { dfree } => format!("mds dfree {dfree}"),
                Outcome::NonMds { dfree, degenerate: false } => format!("non-mds dfree {dfree}"),
                Outcome::NonMds { dfree, degenerate: true } => format!("degenerate dfree {dfree}"),
                Outcome::Excluded(m) => format!("excluded: {m}"),
                Outcome::Failed(m) => format!("failed: {m}"),
            };
            r.add("member", format!("{} {v}", tuple(&f, t)));
        }
    }
    Ok((r, fail))
}

fn extend_report(file: &CgcFile, point: &str, output: Option<&Path>, cfg: &DistanceConfig) -> Result<Report, Fail> {
    let spec = file.spec()?;
    let f = spec.field().clone();
    let p = parse_point(&f, point)?;
    let e = extend::check_extension(&spec, p, cfg)?;
    let fmt = |x: Gf| f.format(x);
    let c = &e.conditions;
    let mut r = Report::new(format!("extension by {}", tuple(&f, &[p.0, p.1])));
    r.add("new_point", tuple(&f, &[p.0, p.1]))
        .add("f", list(e.f.iter().map(|&x| fmt(x))))
        .add("h", list(e.h.iter().map(|&x| fmt(x))))
        .add("stacked_distance_ge_3", c.stacked_distance_ge_3)
        .add("a_nonzero", c.a_nonzero)
        .add("s0_at_b_nonzero", c.s0_at_b_nonzero)
        .add("lambda2_nonzero", c.lambda2_nonzero)
        .add("all_h_nonzero", c.all_h_nonzero)
        .add("base_stacked_distance", e.base_stacked_distance)
        .add("base_l", e.base_l)
        .add("base_dfree", e.base_dfree)
        .add("extended_stacked_distance", e.extended_stacked_distance)
        .add("extended_l", e.extended_l)
        .add("k0", e.k0)
        .add("d_f_k0", e.d_f_k0.map_or("-".into(), |d| d.to_string()))
        .add("dfree_lower_bound", e.dfree_lower_bound.map_or("-".into(), |d| d.to_string()))
        .add("extended_singleton_bound", e.extended_singleton_bound)
        .add("conditions_certified", e.conditions_certified)
        .add("bound_certified", e.bound_certified)
        .add("certified", e.certified_mds)
        .add("extended_mu_ge_3", e.extended_mu_ge_3)
        .add("extended_l_within_one", e.extended_l_within_one);
    r.add("extended_dfree", distance::free_distance(&e.extended, cfg)?.dfree);
    if let Some(out) = output {
        write_out(out, &format_code_file(e.extended.generator()))?;
    }
    Ok(r)
}

fn lift(c: &ConvCode, s: u32, cfg: &DistanceConfig) -> Result<(Report, Option<Fail>), Fail> {
    let f = c.field();
    let big = FiniteField::with_default(f.characteristic(), f.degree() * s)?;
    let e = FieldEmbedding::new(f, &big)?;
    let before = distance::free_distance(c, cfg)?.dfree;
    let after = distance::free_distance(&c.lift(&e)?, cfg)?.dfree;
    let mut r = Report::new(format!("lift {} -> {}", f.spec_string(), big.spec_string()));
    r.add("source_field", f.spec_string())
        .add("target_field", big.spec_string())
        .add("generator_image", big.format(e.image_of_generator()))
        .add("dfree_before", before)
        .add("dfree_after", after)
        .add("equal", before == after);
    let fail = (before != after).then(|| Fail::Mismatch(format!("free distance changed from {before} to {after}")));
    Ok((r, fail))
}

fn run(cli: &Cli) -> Result<(String, Option<Fail>), Fail> {
    let cfg = DistanceConfig { cap: cli.global.cap, fallback_max_stage: DEFAULT_FALLBACK_STAGE };
    let porcelain = cli.global.porcelain;
    let done = |r: Report| Ok((r.render(porcelain), None));
    match &cli.command {
        Command::Invariants { file } => done(invariants(&load_code(file)?)),
        Command::Freedist { file, oracle, max_stage } => {
            let cfg = DistanceConfig { fallback_max_stage: max_stage.unwrap_or(DEFAULT_FALLBACK_STAGE), ..cfg };
            done(freedist(&load_code(file)?, *oracle, *max_stage, &cfg)?)
        }
        Command::Mds { file } => {
            let c = load_code(file)?;
            let p = distance::free_distance(&c, &cfg)?;
            let mut r = Report::new("mds check");
            r.add("dfree", p.dfree)
                .add("singleton_bound", p.singleton_bound)
                .add("mds", p.is_mds)
                .add("method", method_name(p.method));
            let fail = (!p.is_mds).then(|| Fail::Mismatch(format!("dfree {} below {}", p.dfree, p.singleton_bound)));
            Ok((r.render(porcelain), fail))
        }
        Command::Lift { file, ext_degree } => {
            let (r, fail) = lift(&load_code(file)?, *ext_degree, &cfg)?;
            Ok((r.render(porcelain), fail))
        }
        Command::Cgc(sub) => match sub {
            CgcCommand::Build { spec, output } => {
                let file = load_cgc(spec)?;
                let code = cgc::build(&file.spec()?)?;
                let text = format_code_file(code.generator());
                match output {
                    Some(out) => {
                        write_out(out, &text)?;
                        Ok((String::new(), None))
                    }
                    None => Ok((text, None)),
                }
            }
            CgcCommand::Scan { spec, domain, predict } => {
                let (r, fail) = scan(&load_cgc(spec)?, *domain, predict.as_deref(), porcelain, &cfg)?;
                Ok((r.render(porcelain), fail))
            }
            CgcCommand::Extend { spec, point, output } => {
                done(extend_report(&load_cgc(spec)?, point, output.as_deref(), &cfg)?)
            }
            CgcCommand::Eligible { spec } => {
                let file = load_cgc(spec)?;
                if let FamilyKind::CaseStudy = file.kind {
                    return Err(Fail::Input("eligible points need a CGC spec".into()));
                }
                let s = file.spec()?;
                let f = s.field().clone();
                let e = extend::eligible_points(&s, &cfg)?;
                let pts: Vec<Vec<Gf>> = e.points.iter().map(|&(a, b)| vec![a, b]).collect();
                let mut r = Report::new("certified extension points");
                r.add("count", pts.len())
                    .add("points", tuples(&f, &pts))
                    .add("diagnostic", e.diagnostic.as_deref().unwrap_or("-"));
                done(r)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (out, fail) = match run(&cli) {
        Ok(x) => x,
        Err(f) => (String::new(), Some(f)),
    };
    print!("{out}");
    match fail {
        None => ExitCode::SUCCESS,
        Some(Fail::Mismatch(m)) => {
            eprintln!("mismatch: {m}");
            ExitCode::from(1)
        }
        Some(Fail::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Some(Fail::Cap(m)) => {
            eprintln!("resource limit: {m}");
            ExitCode::from(3)
        }
    }
}
