//! `ltf` command line: subcommand dispatch, file IO and exit codes.
//!
//! Exit codes: 0 on success, 1 on usage or domain errors (a JSON error
//! object goes to the error stream), 2 when a method ran but missed its
//! target or a verification suite recorded failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ltf_core::anticonc::{extension_check, halasz_probe, levy, profile, LevyMode};
use ltf_core::cube::{distance, validate_kwise, DistanceMode, Distribution};
use ltf_core::fourier::{critical_index, influences_checked, margin_stats, regularity};
use ltf_core::junta::{prop14_witness, theorem1_pipeline, JuntaOptions};
use ltf_core::lp::{ltf_vertex, min_weight_search, omb_table, omb_witness};
use ltf_core::rational::{self, int, Rational};
use ltf_core::weights::{
    junta_then_weights, pipeline_critical, pipeline_erdos, pipeline_halasz, round_weights, truncate_to_junta, PipelineOptions,
    RoundingMode, RoundingSpec,
};
use ltf_core::{Caps, PipelineConstants};
use serde_json::{json, Value};

use crate::config::{parse_constants, Config};
use crate::format::{self, load_distribution, load_function, parse_list, parse_point, TableFile};
use crate::suites::{self, SuiteParams};
use crate::{export, CliError};

#[derive(Debug, Parser)]
#[command(name = "ltf", version, about = "Linear threshold functions: analysis, representations and low-weight approximation")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Pipeline constants, e.g. `L_c=2,K_c=2,R_c=2`.
    #[arg(long, global = true)]
    pub constants: Option<String>,
    /// Largest n enumerated exhaustively.
    #[arg(long = "cap-enum", global = true)]
    pub cap_enum: Option<usize>,
    /// Largest number of LP rows.
    #[arg(long = "cap-lp", global = true)]
    pub cap_lp: Option<usize>,
    /// Seed for every random draw (ChaCha8); 0 when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; defaults to csv for `.csv` outputs and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ser07,
    Thm25,
    Thm2,
    Cor13,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    Prop14,
    Omb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rounding {
    Uniform,
    General,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function at a point.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated coordinates in {1,-1}.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Truth table of an LTF.
    Table {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Fourier spectrum and influences; with --tau also regularity, margins and the critical index.
    Fourier {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tau: Option<String>,
    },
    /// Junta approximation with measured distance.
    Junta {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        eps: String,
        /// Head cutoff on |f^(i)|.
        #[arg(long)]
        cutoff: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long, default_value_t = 32)]
        budget: u32,
        #[arg(long)]
        draws: Option<u64>,
    },
    /// Levy anti-concentration, profiles, probes and extension checks.
    Anticonc {
        /// Comma-separated weights; alternatively --in with an LTF file.
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value = "1")]
        r: String,
        #[arg(long, default_value = "uniform")]
        dist: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Comma-separated radii; emits a profile.
        #[arg(long)]
        profile: Option<String>,
        /// `kmin..kmax`: probe the family (1, ..., k) at radius r.
        #[arg(long)]
        probe: Option<String>,
        /// Length of a prefix to compare against the full vector.
        #[arg(long)]
        prefix: Option<usize>,
    },
    /// Gap-structured vertex representation with its certificate.
    Lp {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the gap report as CSV here.
        #[arg(long = "gaps-out")]
        gaps_out: Option<PathBuf>,
    },
    /// Round an LTF on a grid, or truncate it to its heaviest weights.
    Weights {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: Option<String>,
        #[arg(long, default_value = "0.1")]
        eps: String,
        #[arg(long, value_enum, default_value = "uniform")]
        rounding: Rounding,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// End-to-end low-weight approximation.
    Pipeline {
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        budget: Option<u32>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Witness functions and minimum-weight search.
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessKind,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Search integer representations up to this max weight.
        #[arg(long = "min-weight")]
        min_weight: Option<u64>,
    },
    /// Distance between two functions, or a k-wise independence check of a distribution.
    Dist {
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long, default_value = "uniform")]
        dist: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0.01)]
        confidence: f64,
        #[arg(long)]
        kwise: Option<usize>,
        /// Dimension for --kwise checks.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run a verification suite.
    Verify {
        /// One of lemma9, lemma10, erdos, halasz, extension, lemma26, lemma29,
        /// lemma22, claim40, berryesseen, prop17, corollary13.
        #[arg(long)]
        suite: String,
        /// Smallest dimension drawn.
        #[arg(long)]
        nmin: Option<usize>,
        /// Largest dimension drawn.
        #[arg(long)]
        nmax: Option<usize>,
        /// Instances per parameter setting.
        #[arg(long)]
        instances: Option<usize>,
        /// Comma-separated tau values.
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        /// Samples per instance for sampled checks.
        #[arg(long)]
        draws: Option<u32>,
    },
}

/// What a command produced.
struct Output {
    body: String,
    shortfall: bool,
}

impl Output {
    fn json(v: Value, shortfall: bool) -> Self {
        Output {
            body: serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            shortfall,
        }
    }

    fn text(body: String) -> Self {
        Output { body, shortfall: false }
    }
}

struct Context {
    caps: Caps,
    constants: PipelineConstants,
    seed: u64,
    config: Config,
    format: OutputFormat,
}

fn parse_q(s: &str) -> Result<Rational, CliError> {
    Ok(rational::parse(s)?)
}

fn context(g: &GlobalArgs) -> Result<Context, CliError> {
    let config = match &g.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let mut caps = Caps::default();
    config.apply_caps(&mut caps);
    if let Some(v) = g.cap_enum {
        caps.enum_n = v;
    }
    if let Some(v) = g.cap_lp {
        caps.lp_rows = v;
    }
    let mut constants = PipelineConstants::default();
    config.apply_constants(&mut constants);
    if let Some(spec) = &g.constants {
        parse_constants(spec, &mut constants)?;
    }
    let csv_out = g.out.as_ref().and_then(|p| p.extension()).is_some_and(|e| e == "csv");
    Ok(Context {
        caps,
        constants,
        seed: g.seed.or(config.seed).unwrap_or(0),
        config,
        format: g.format.unwrap_or(if csv_out { OutputFormat::Csv } else { OutputFormat::Json }),
    })
}

fn exec(cli: &Cli) -> Result<Output, CliError> {
    let ctx = context(&cli.global)?;
    let caps = &ctx.caps;
    match &cli.command {
        Command::Eval { input, x } => {
            let f = load_function(input)?;
            let x = parse_point(x)?;
            let v = match &f {
                format::FunctionInput::Ltf(l) => l.eval(&x)?,
                format::FunctionInput::Table(t) => t.eval(&x)?,
            };
            Ok(Output::json(json!({ "x": x, "value": v }), false))
        }
        Command::Table { input } => {
            let t = load_function(input)?.table(caps)?;
            Ok(Output::json(serde_json::to_value(TableFile::from_table(&t)).expect("serializable"), false))
        }
        Command::Fourier { input, tau } => {
            let f = load_function(input)?;
            let t = f.table(caps)?;
            let (inf, spec) = influences_checked(&t, caps)?;
            if ctx.format == OutputFormat::Csv {
                return Ok(Output::text(export::spectrum_csv(&spec)));
            }
            let mut v = export::spectrum(&spec, &inf);
            if let (Some(tau), format::FunctionInput::Ltf(l)) = (tau, &f) {
                let tau = parse_q(tau)?;
                let reg = regularity(l)?;
                v["regularity_sq"] = export::q(&reg.tau_sq);
                v["regularity_decimal"] = json!(reg.tau);
                v["margins"] = export::margins(&margin_stats(l, &tau, caps)?);
                v["critical_index"] = export::critical_index(&critical_index(l, &tau)?);
            }
            Ok(Output::json(v, false))
        }
        Command::Junta {
            input,
            eps,
            cutoff,
            tau,
            budget,
            draws,
        } => {
            let f = load_function(input)?;
            let mut opts = JuntaOptions::new(parse_q(eps)?);
            opts.cutoff = cutoff.as_deref().map(parse_q).transpose()?;
            opts.tau = tau.as_deref().map(parse_q).transpose()?;
            opts.budget = *budget;
            opts.draws_override = *draws;
            let mut rng = ltf_core::rng::seeded(ctx.seed);
            let j = theorem1_pipeline(f.ltf()?, &opts, &mut rng, caps)?;
            Ok(Output::json(export::junta(&j, ctx.seed), !j.met))
        }
        Command::Anticonc {
            weights,
            input,
            r,
            dist,
            mode,
            samples,
            profile: radii,
            probe,
            prefix,
        } => {
            let r = parse_q(r)?;
            if let Some(range) = probe {
                let (lo, hi) = range
                    .split_once("..")
                    .ok_or_else(|| CliError::Usage("--probe takes kmin..kmax".into()))?;
                let parse_k = |s: &str| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad k {s:?}")));
                let family = |k: usize| (1..=k as i64).map(int).collect::<Vec<_>>();
                let rows = halasz_probe(&family, &r, parse_k(lo)?..=parse_k(hi)?, None, caps)?;
                if ctx.format == OutputFormat::Csv {
                    return Ok(Output::text(export::probe_csv(&rows)));
                }
                let v: Vec<Value> = rows
                    .iter()
                    .map(|row| json!({ "k": row.k, "p": export::q(&row.p), "normalized_decimal": row.normalized }))
                    .collect();
                return Ok(Output::json(json!({ "r": export::q(&r), "rows": v }), false));
            }
            let a = match (weights, input) {
                (Some(w), _) => parse_list(w)?,
                (None, Some(p)) => load_function(p)?.ltf()?.weights().to_vec(),
                (None, None) => return Err(CliError::Usage("give --weights or --in".into())),
            };
            let d = load_distribution(dist, a.len())?;
            if let Some(radii) = radii {
                let rows = profile(&a, &parse_list(radii)?, &d, caps)?;
                if ctx.format == OutputFormat::Csv {
                    return Ok(Output::text(export::profile_csv(&rows)));
                }
                let v: Vec<Value> = rows
                    .iter()
                    .map(|row| json!({ "r": export::q(&row.r), "p": export::q(&row.p), "center": export::q(&row.center) }))
                    .collect();
                return Ok(Output::json(json!({ "rows": v }), false));
            }
            if let Some(k) = prefix {
                if *k == 0 || *k > a.len() {
                    return Err(CliError::Usage("--prefix must lie in [1, n]".into()));
                }
                let c = extension_check(&a[..*k], &a, &r, &d, caps)?;
                return Ok(Output::json(
                    json!({ "p_prefix": export::q(&c.p_prefix), "p_extension": export::q(&c.p_extension), "pass": c.pass }),
                    !c.pass,
                ));
            }
            let lm = match mode {
                Mode::Exact => LevyMode::Exact,
                Mode::Mc => LevyMode::MonteCarlo {
                    samples: *samples,
                    seed: ctx.seed,
                },
            };
            Ok(Output::json(export::levy(&levy(&a, &r, &d, lm, caps)?, &r), false))
        }
        Command::Lp { input, gaps_out } => {
            let t = load_function(input)?.table(caps)?;
            let s = ltf_vertex(&t, caps)?;
            if let Some(p) = gaps_out {
                std::fs::write(p, export::gaps_csv(&s.gaps)).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            }
            if ctx.format == OutputFormat::Csv {
                return Ok(Output::text(export::gaps_csv(&s.gaps)));
            }
            let mut v = export::certificate(&s);
            v["integer_form"] = export::ltf(&ltf_core::weights::integer_form(&s.representation.to_ltf()));
            Ok(Output::json(v, !s.gaps.passes()))
        }
        Command::Weights {
            input,
            r,
            eps,
            rounding,
            alpha,
            truncate,
        } => {
            let f = load_function(input)?;
            let f = f.ltf()?;
            if let Some(l) = truncate {
                let g = truncate_to_junta(f, *l)?;
                let mut v = json!({ "ltf": export::ltf(&g) });
                if let (Ok(a), Ok(b)) = (f.truth_table(caps), g.truth_table(caps)) {
                    let d = distance((&a).into(), (&b).into(), &Distribution::Uniform, DistanceMode::Exact, caps)?;
                    v["distance"] = export::distance(&d);
                }
                return Ok(Output::json(v, false));
            }
            let eps = parse_q(eps)?;
            let g = crate::suites::normalized(f);
            let mode = match rounding {
                Rounding::Uniform => RoundingMode::Uniform,
                Rounding::General => RoundingMode::General,
            };
            let spec = match (alpha, r) {
                (Some(a), _) => RoundingSpec::with_alpha(&int(1), &eps, parse_q(a)?, mode),
                (None, Some(r)) => RoundingSpec::new(&parse_q(r)?, &eps, g.n(), mode)?,
                (None, None) => return Err(CliError::Usage("give --r or --alpha".into())),
            };
            let h = round_weights(&g, &spec)?;
            let mut v = json!({
                "ltf": export::ltf(&h.ltf),
                "alpha": export::q(&spec.alpha),
                "max_weight": h.max_weight.to_string(),
                "ceiling": h.ceiling.to_string(),
                "error_l1": export::q(&h.error_l1),
            });
            if let Ok(d) = distance((&g).into(), (&h.ltf).into(), &Distribution::Uniform, DistanceMode::Exact, caps) {
                v["distance"] = export::distance(&d);
            }
            Ok(Output::json(v, false))
        }
        Command::Pipeline {
            method,
            eps,
            input,
            dist,
            budget,
            mode,
        } => {
            let f = load_function(input)?;
            let f = f.ltf()?;
            let method = match (method, ctx.config.method.as_deref()) {
                (Some(m), _) => *m,
                (None, Some(name)) => Method::from_str(name, true).map_err(|_| CliError::Usage(format!("unknown method {name:?}")))?,
                (None, None) => return Err(CliError::Usage("give --method".into())),
            };
            let eps = eps
                .as_deref()
                .or(ctx.config.eps.as_deref())
                .ok_or_else(|| CliError::Usage("give --eps".into()))?;
            let eps = parse_q(eps)?;
            let dist = dist.as_deref().or(ctx.config.dist.as_deref()).unwrap_or("uniform");
            let d = load_distribution(dist, f.n())?;
            let mut constants = ctx.constants;
            if let Some(b) = budget {
                constants.budget = *b;
            }
            let opts = PipelineOptions {
                constants,
                seed: ctx.seed,
                mode: match mode {
                    Some(Mode::Exact) => Some(DistanceMode::Exact),
                    Some(Mode::Mc) => Some(DistanceMode::MonteCarlo {
                        delta: rational::to_f64(&eps) / 4.0,
                        confidence: 0.01,
                        seed: ctx.seed,
                    }),
                    None => None,
                },
            };
            let report = match method {
                Method::Ser07 => pipeline_erdos(f, &eps, &d, &opts, caps)?,
                Method::Thm25 => pipeline_halasz(f, &eps, &d, &opts, caps)?,
                Method::Thm2 => pipeline_critical(f, &eps, &d, &opts, caps)?,
                Method::Cor13 => {
                    if !matches!(d, Distribution::Uniform) {
                        return Err(CliError::Usage("cor13 runs under the uniform distribution".into()));
                    }
                    let mut rng = ltf_core::rng::seeded(ctx.seed);
                    let c = junta_then_weights(f, &eps, &opts, &mut rng, caps)?;
                    return Ok(Output::json(export::composed(&c, ctx.seed), !c.met));
                }
            };
            Ok(Output::json(export::pipeline(&report), !report.met))
        }
        Command::Witness {
            kind,
            a,
            b,
            n,
            min_weight,
        } => {
            let need = |v: &Option<usize>, name: &str| v.ok_or_else(|| CliError::Usage(format!("give --{name}")));
            let (f, table) = match kind {
                WitnessKind::Prop14 => {
                    let f = prop14_witness(need(a, "a")?, need(b, "b")?)?;
                    let t = f.truth_table(caps).ok();
                    (f, t)
                }
                WitnessKind::Omb => {
                    let n = need(n, "n")?;
                    (omb_witness(n)?, Some(omb_table(n, caps)?))
                }
            };
            let mut v = json!({ "ltf": export::ltf(&f) });
            if let Some(w) = min_weight {
                let t = table.ok_or_else(|| CliError::Usage("minimum-weight search needs a table within the cap".into()))?;
                let found = min_weight_search(&t, *w, caps)?;
                let missing = found.is_none();
                v["min_weight"] = export::min_weight(&found, *w);
                return Ok(Output::json(v, missing));
            }
            Ok(Output::json(v, false))
        }
        Command::Dist {
            f,
            g,
            dist,
            mode,
            delta,
            confidence,
            kwise,
            n,
        } => {
            if let Some(k) = kwise {
                let n = n.ok_or_else(|| CliError::Usage("--kwise needs --n".into()))?;
                let d = load_distribution(dist, n)?;
                let r = validate_kwise(&d, n, *k, caps)?;
                return Ok(Output::json(export::kwise(&r), false));
            }
            let (Some(f), Some(g)) = (f, g) else {
                return Err(CliError::Usage("give --f and --g, or --kwise".into()));
            };
            let (f, g) = (load_function(f)?, load_function(g)?);
            let d = load_distribution(dist, f.n())?;
            let m = match mode {
                Mode::Exact => DistanceMode::Exact,
                Mode::Mc => DistanceMode::MonteCarlo {
                    delta: *delta,
                    confidence: *confidence,
                    seed: ctx.seed,
                },
            };
            let r = distance(f.as_function(), g.as_function(), &d, m, caps)?;
            Ok(Output::json(export::distance(&r), false))
        }
        Command::Verify {
            suite,
            nmin,
            nmax,
            instances,
            tau,
            eps,
            draws,
        } => {
            let mut p = SuiteParams::new(ctx.seed);
            p.caps = ctx.caps;
            if let Some(v) = nmin {
                p.nmin = *v;
            }
            if let Some(v) = nmax {
                p.nmax = *v;
            }
            if let Some(v) = instances {
                p.instances = *v;
            }
            if let Some(t) = tau {
                p.taus = parse_list(t)?;
            }
            if let Some(e) = eps {
                p.eps = parse_q(e)?;
            }
            if let Some(d) = draws {
                p.draws = *d;
            }
            if p.nmin > p.nmax {
                return Err(CliError::Usage("--nmin exceeds --nmax".into()));
            }
            let report = suites::run(suite, &p)?;
            let failed = !report.all_pass();
            Ok(Output::json(serde_json::to_value(&report).expect("serializable"), failed))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().trim().to_string());
            let _ = writeln!(stderr, "{}", err.to_json());
            return 1;
        }
    };
    match exec(&cli) {
        Ok(out) => {
            let written = match &cli.global.out {
                Some(p) => std::fs::write(p, &out.body).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
                None => stdout.write_all(out.body.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "{}", e.to_json());
                return 1;
            }
            if out.shortfall {
                2
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            1
        }
    }
}
