use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use inflex_core::base::{ChowModel, NumericalBaseData, Preset};
use inflex_core::jet::{self, JetProbeSpec};
use inflex_core::parse::parse_rational;
use inflex_core::scroll::{self, derivative_counts, ScrollSetup};
use inflex_core::search::{self, Family};
use inflex_core::{closed_forms, regression, ClassRecord, Rat};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug, Clone, Serialize, Deserialize, PartialEq)]
#[command(name = "inflex", version, about = "Classes and degrees of inflectional loci of scrolls")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
enum Format {
    Pretty,
    Json,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
struct SetupArgs {
    /// Dimension of the scroll
    #[arg(long)]
    n: u32,
    /// Dimension of the base
    #[arg(long)]
    m: u32,
    /// Jet order
    #[arg(long)]
    k: u32,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize, PartialEq)]
struct BaseArgs {
    /// Bundled base preset: P1, P2, P3, Q3, Fe[:e], BxP1[:q], abelian2, abelian3, K3, ruled
    #[arg(long, conflicts_with = "data")]
    base: Option<String>,
    /// Base data file (TOML); relative paths are also looked up in $INFLEX_DATA_DIR
    #[arg(long)]
    data: Option<PathBuf>,
    /// Fix a parameter of the base data, e.g. --set x=4
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize, PartialEq)]
enum Command {
    /// Maximal generic jet rank r_k with the per-order derivative count
    Rank(SetupArgs),
    /// Class of the inflectional locus, before and after Chern-Wu reduction
    Class {
        #[command(flatten)]
        setup: SetupArgs,
        /// Dimension of the ambient projective space
        #[arg(long = "N")]
        big_n: u32,
    },
    /// Degree of the inflectional locus on explicit base data
    Degree {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long = "N")]
        big_n: u32,
        #[command(flatten)]
        base: BaseArgs,
    },
    /// Integer-point scan for uninflected scrolls
    Scan {
        /// P2_N10, P2_N9, Fe, ProductsBxP1, P3 or Q3
        #[arg(long)]
        family: String,
        /// Codimension for P3 and Q3
        #[arg(long)]
        ell: Option<i64>,
        /// Invariant e of F_e
        #[arg(long)]
        e: Option<i64>,
        /// Genus of B for B x P^1
        #[arg(long)]
        q: Option<i64>,
        /// Largest scroll degree scanned for Fe and ProductsBxP1
        #[arg(long, default_value_t = 60)]
        d_max: i64,
    },
    /// Generic jet rank of a chart described in a TOML file
    Jet {
        spec: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u32>,
        /// Also compute the common factor of the r x r minors
        #[arg(long)]
        minors: Option<usize>,
    },
    /// Run the regression catalogue
    Verify {
        /// Run only checks whose id or group contains this text
        #[arg(long)]
        filter: Option<String>,
        /// Perturb the expected value of this check (it must then fail)
        #[arg(long, hide = true)]
        tamper: Option<String>,
    },
    /// List the transcribed closed-form formulas
    Formulas,
}

fn setup(s: &SetupArgs, big_n: u32) -> Result<ScrollSetup> {
    Ok(ScrollSetup::new(s.n, s.m, s.k, big_n)?)
}

fn resolve_data_path(p: &Path) -> PathBuf {
    if p.is_relative() && !p.exists() {
        if let Some(dir) = std::env::var_os("INFLEX_DATA_DIR") {
            let candidate = Path::new(&dir).join(p);
            if candidate.exists() {
                return candidate;
            }
        }
    }
    p.to_path_buf()
}

fn base_data(args: &BaseArgs, rank: u32) -> Result<NumericalBaseData> {
    let data = match (&args.base, &args.data) {
        (Some(name), None) => ChowModel::preset(Preset::parse(name)?).data(rank),
        (None, Some(path)) => {
            let path = resolve_data_path(path);
            let src = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            NumericalBaseData::from_toml(&src)?
        }
        (None, None) => bail!("one of --base or --data is required"),
        (Some(_), Some(_)) => bail!("--base and --data are mutually exclusive"),
    };
    let mut values: Vec<(String, Rat)> = Vec::new();
    for s in &args.set {
        let (k, v) = s.split_once('=').with_context(|| format!("expected NAME=VALUE, got '{s}'"))?;
        values.push((k.trim().to_string(), parse_rational(v.trim())?));
    }
    let refs: Vec<(&str, Rat)> = values.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    Ok(if refs.is_empty() { data } else { data.bind(&refs)? })
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct RankOutput {
    n: u32,
    m: u32,
    k: u32,
    r_k: u64,
    orders: Vec<scroll::OrderCount>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct ClassOutput {
    ell: i64,
    in_range: bool,
    class: ClassRecord,
    reduced: ClassRecord,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct DegreeOutput {
    ell: i64,
    in_range: bool,
    params: Vec<String>,
    symbolic: ClassRecord,
    value: String,
    integer: Option<String>,
}

fn emit<T: Serialize>(format: Format, value: &T, pretty: impl FnOnce() -> String) -> Result<()> {
    use std::io::Write;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value)?,
        Format::Pretty => pretty(),
    };
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let format = cli.format;
    match &cli.command {
        Command::Rank(s) => {
            if s.m == 0 || s.m >= s.n {
                bail!("need 1 <= m < n");
            }
            let r = inflex_core::max_rank(s.n, s.m, s.k);
            let out = RankOutput { n: s.n, m: s.m, k: s.k, r_k: r, orders: derivative_counts(s.n, s.m, s.k) };
            emit(format, &out, || {
                let mut t = format!("r_{} = {}\norder  base  mixed", s.k, r);
                for o in &out.orders {
                    t.push_str(&format!("\n{:>5} {:>5} {:>6}", o.order, o.base, o.mixed));
                }
                t
            })?;
        }
        Command::Class { setup: s, big_n } => {
            let st = setup(s, *big_n)?;
            let infl = scroll::inflection_class(&st)?;
            let reduced = infl.reduced()?;
            let out = ClassOutput { ell: infl.codim.ell, in_range: infl.codim.in_range, class: infl.class.to_record(), reduced: reduced.to_record() };
            emit(format, &out, || format!("ell     {}\nclass   {}\nreduced {}", infl.codim.ell, infl.class, reduced))?;
        }
        Command::Degree { setup: s, big_n, base } => {
            let st = setup(s, *big_n)?;
            let data = base_data(base, st.rank_v())?;
            let rep = scroll::degree_of_inflection(&st, &data)?;
            let value = rep.value.display(data.params()).to_string();
            let out = DegreeOutput {
                ell: rep.codim.ell,
                in_range: rep.codim.in_range,
                params: data.params().to_vec(),
                symbolic: rep.symbolic.to_record(),
                value: value.clone(),
                integer: rep.integer().map(|i| i.to_string()),
            };
            emit(format, &out, || format!("ell      {}\nsymbolic {}\ndegree   {}", rep.codim.ell, rep.symbolic, value))?;
        }
        Command::Scan { family, ell, e, q, d_max } => {
            let fam = Family::parse(family)?;
            let param = match fam {
                Family::P3 | Family::Q3 => *ell,
                Family::Fe => *e,
                Family::CurveTimesLine => *q,
                _ => None,
            };
            let problem = search::problem(fam, param, Some(*d_max))?;
            let report = search::scan(&problem)?;
            emit(format, &report, || report.table())?;
        }
        Command::Jet { spec, seed, trials, minors } => {
            let src = std::fs::read_to_string(spec).with_context(|| format!("reading {}", spec.display()))?;
            let mut p = JetProbeSpec::from_toml(&src)?;
            if let Some(s) = seed {
                p.seed = *s;
            }
            if let Some(t) = trials {
                p.trials = *t;
            }
            let rep = jet::generic_jet_rank(&p)?;
            let content = match minors {
                Some(r) => Some(jet::inflection_equations(&p, *r)?.content.display(&p.vars).to_string()),
                None => None,
            };
            #[derive(Serialize)]
            struct JetOutput<'a> {
                #[serde(flatten)]
                report: &'a jet::RankReport,
                bound: Option<u64>,
                minor_content: Option<String>,
            }
            let out = JetOutput { report: &rep, bound: jet::rank_bound(&p), minor_content: content.clone() };
            emit(format, &out, || {
                let mut t = rep.to_string();
                if let Some(b) = out.bound {
                    t.push_str(&format!("\nbound r_k    {b}"));
                }
                if let Some(c) = &content {
                    t.push_str(&format!("\nminor content {c}"));
                }
                t
            })?;
        }
        Command::Verify { filter, tamper } => {
            // the catalogue deliberately exercises edge cases that log warnings
            log::set_max_level(log::LevelFilter::Error);
            if let Some(t) = tamper {
                if !regression::all_checks().iter().any(|c| &c.id == t) {
                    bail!("no check with id '{t}'");
                }
            }
            let results = regression::verify(filter.as_deref(), tamper.as_deref());
            let all_pass = !results.is_empty() && results.iter().all(|r| r.pass);
            emit(format, &results, || {
                let w = results.iter().map(|r| r.id.len()).max().unwrap_or(0);
                let mut t = String::new();
                for r in &results {
                    t.push_str(&format!("{:<4} {:<w$}", if r.pass { "ok" } else { "FAIL" }, r.id));
                    if !r.pass {
                        match &r.error {
                            Some(e) => t.push_str(&format!("  error: {e}")),
                            None => t.push_str(&format!("  expected {} got {}", r.expected, r.actual)),
                        }
                    }
                    t.push('\n');
                }
                let failed = results.iter().filter(|r| !r.pass).count();
                t.push_str(&format!("{} checks, {} failed", results.len(), failed));
                t
            })?;
            return Ok(all_pass);
        }
        Command::Formulas => {
            let cat = closed_forms::catalogue();
            emit(format, &cat, || cat.iter().map(|r| format!("{:<28} {}", r.id, r.template)).collect::<Vec<_>>().join("\n"))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use inflex_core::GradedClass;

    #[test]
    fn config_roundtrip() {
        let cli = Cli::try_parse_from(["inflex", "--format", "json", "degree", "--n", "3", "--m", "2", "--k", "2", "--N", "9", "--base", "P2"]).unwrap();
        let back: Cli = serde_json::from_str(&serde_json::to_string(&cli).unwrap()).unwrap();
        assert_eq!(back, cli);
    }

    #[test]
    fn conflicting_flags_are_rejected() {
        let r = Cli::try_parse_from(["inflex", "degree", "--n", "3", "--m", "2", "--k", "2", "--N", "9", "--base", "P2", "--data", "x.toml"]);
        assert!(r.is_err());
    }

    #[test]
    fn class_record_roundtrip() {
        let st = ScrollSetup::new(3, 2, 2, 8).unwrap();
        let c = scroll::inflection_class(&st).unwrap().class;
        let rec: ClassRecord = serde_json::from_str(&serde_json::to_string(&c.to_record()).unwrap()).unwrap();
        assert_eq!(GradedClass::from_record(&rec).unwrap(), c);
    }
}
