use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sl3z::hessenberg::complete_type;
use sl3z::klein::factor_sail;
use sl3z::reduction::{decide, find_conjugator, shared_reduced, sigma_reduced_set, ReductionConfig};
use sl3z::survey::{
    census, count_nonreduced_stabilized, is_nrs_ray, parse_range, ray_diagnostics, render_grid, render_reports, render_sail, scan_family, scan_ray,
    Format, SurveyConfig, Window,
};
use sl3z::{Error, Family, HessenbergType, Mat3Z, RayIndex, RaySpec, Result, Vec3Z};

#[derive(Parser)]
#[command(name = "sl3z", version, about = "Integer conjugacy and ς-reduced Hessenberg forms in SL(3, Z)")]
struct Cli {
    /// key = value settings file (box_bound, orbit_samples, padding, cell_budget, cache_dir, workers, max_window)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FamilyArgs {
    /// Hessenberg type "a11,a21|a12,a22,a32".
    #[arg(long = "type", required = false)]
    ty: String,
    /// Completion vector "a13,a23,a33"; defaults to the canonical one.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family> {
        let ty: HessenbergType = self.ty.parse()?;
        let v = match &self.v {
            Some(s) => s.parse::<Vec3Z>()?,
            None => complete_type(&ty)?,
        };
        Family::new(ty, v)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify every cell of a family window.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        box_bound: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Verdict and ς-reduced set of one matrix.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Box bound used for real-spectrum input.
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Decide integer conjugacy of two matrices.
    Conjugate {
        #[arg(long, allow_hyphen_values = true)]
        m1: String,
        #[arg(long, allow_hyphen_values = true)]
        m2: String,
    },
    /// Factor-sails from a truncated lattice box.
    Sail {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value_t = 30)]
        bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Count ς-nonreduced NRS matrices for every perfect type up to a complexity.
    Census {
        #[arg(long, default_value_t = 4)]
        max_complexity: u64,
        /// Count a single family instead of every type.
        #[command(flatten)]
        family: Option<FamilyArgs>,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan an NRS-ray.
    Ray {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 1)]
        index: u8,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long, default_value_t = 50)]
        steps: u64,
    },
    /// Exact MD-slope check and orbit axis-ratio exponent along an index-1 ray.
    DiagnoseRay {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Point "x,y" of the plane z = 0.
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1000u64, 3000, 10000])]
        ts: Vec<u64>,
    },
}

fn pair(s: &str) -> Result<(i64, i64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|_| Error::Parse(format!("bad integer {a}")))?,
            b.parse().map_err(|_| Error::Parse(format!("bad integer {b}")))?,
        )),
        _ => Err(Error::Parse(format!("expected two integers, got {s}"))),
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match out.write_all(bytes).and_then(|_| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    emit(&None, text.as_bytes())
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => SurveyConfig::load(p)?,
        None => SurveyConfig::default(),
    };
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(d) = cli.cache_dir {
        cfg.cache_dir = Some(d);
    }
    match cli.cmd {
        Cmd::Classify { family, m, n, box_bound, out, svg, csv } => {
            let f = family.family()?;
            if let Some(b) = box_bound {
                cfg.box_bound = b;
            }
            let window = Window { m: parse_range(&m)?, n: parse_range(&n)? };
            let grid = scan_family(&f, window, &cfg)?;
            if let Some(p) = svg {
                std::fs::write(p, render_grid(&grid, Format::Svg)?)?;
            }
            if let Some(p) = csv {
                std::fs::write(p, render_grid(&grid, Format::Csv)?)?;
            }
            emit(&out, &render_grid(&grid, Format::Json)?)
        }
        Cmd::Reduce { matrix, bound } => {
            let m: Mat3Z = matrix.parse()?;
            let rcfg = ReductionConfig { rs_bound: bound, parallelism: cfg.parallelism(), ..cfg.reduction() };
            let mut v = json!({ "matrix": m.to_string() });
            if m.is_hessenberg() && sl3z::hessenberg::type_of(&m)?.1 {
                v["decision"] = decide(&m, &rcfg)?.to_json();
            }
            match sigma_reduced_set(&m, &cfg.klein()) {
                Ok(set) => {
                    v["mu"] = set.to_json()["mu"].clone();
                    v["reduced"] = set.to_json()["reduced"].clone();
                }
                Err(Error::SpectrumMismatch(_)) => v["reduced"] = serde_json::Value::Null,
                Err(e) => return Err(e),
            }
            print_json(&v)
        }
        Cmd::Conjugate { m1, m2 } => {
            let (a, b): (Mat3Z, Mat3Z) = (m1.parse()?, m2.parse()?);
            let shared = shared_reduced(&a, &b, &cfg.klein())?.unwrap_or_default();
            let mut v = json!({
                "conjugate": !shared.is_empty(),
                "shared": shared.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            });
            if !shared.is_empty() {
                if let Some(x) = find_conjugator(&a, &b, &cfg.klein())? {
                    v["conjugator"] = json!(x.to_string());
                }
            }
            print_json(&v)
        }
        Cmd::Sail { matrix, bound, out, format } => {
            let sail = factor_sail(&matrix.parse()?, bound)?;
            emit(&out, &render_sail(&sail, format.parse()?)?)
        }
        Cmd::Census { max_complexity, family, format, out } => {
            let fmt: Format = format.parse()?;
            let reports = match family {
                Some(f) => vec![count_nonreduced_stabilized(&f.family()?, &cfg)?],
                None => census(max_complexity, &cfg)?,
            };
            emit(&out, &render_reports(&reports, fmt)?)?;
            if let Some(r) = reports.iter().find(|r| !r.stabilized) {
                return Err(Error::BudgetExceeded(format!("count for {} did not stabilize by half-width {}", r.ty, r.window)));
            }
            Ok(())
        }
        Cmd::Ray { family, index, base, steps } => {
            let r = RaySpec::new(family.family()?, pair(&base)?, RayIndex::from_number(index)?);
            let scan = scan_ray(&r, steps, &cfg)?;
            let mut v = scan.to_json();
            v["nrs_ray"] = match is_nrs_ray(&r) {
                Ok(b) => json!(b),
                Err(e) => json!(e.to_string()),
            };
            print_json(&v)
        }
        Cmd::DiagnoseRay { family, base, point, ts } => {
            let r = RaySpec::new(family.family()?, pair(&base)?, RayIndex::One);
            let d = ray_diagnostics(&r, &ts, &ts, pair(&point)?)?;
            print_json(&serde_json::to_value(&d)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
