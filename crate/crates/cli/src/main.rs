use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use unorm_analytic::synthetic::random_member;
use unorm_analytic::{check_a_membership, contradiction_pipeline, MembershipParams, Mode, Outcome, PipelineConfig, Verdict, VectorSeries};
use unorm_padic::exec::Exec;
use unorm_phimod::{
    fil1, is_weakly_admissible, n_condition, tensor_product, universal_norm_rank, wedge_power, Certificate, FilteredPhiModule,
};
use unorm_series::ops::{d, ell, gamma_action, phi, psi};
use unorm_series::{growth_order_estimate, log_order, TruncatedSeries};

use unorm_cli::config::{Config, Overrides};
use unorm_cli::json::{
    basis_value, module_value, parse_field, parse_log_polynomial, parse_padic, parse_rational_str, parse_series, parse_vector_series,
    rational_value, series_value,
};
use unorm_cli::report::{contradiction_text, contradiction_value, log_order_str, log_order_value, membership_tsv, membership_value};
use unorm_cli::suites::{default_count, run_case, run_suite, SeriesParams, SUITES};
use unorm_cli::table::mf_rank_table;
use unorm_cli::{load_module, read_json, CliError};

/// Filtered φ-modules, universal-norm ranks and p-adic series calculus.
///
/// Modular-form modules use the Frobenius divided by p^(k-1), so that the
/// slopes sum to t_H = -(k-1); divide the crystalline Frobenius by p^(k-1)
/// to convert.
#[derive(Parser)]
#[command(name = "unorm", version)]
struct Cli {
    /// TOML file with any of: p, f, precision, trunc, nmax, guard, seed, json.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Absolute p-adic precision of field elements.
    #[arg(long, global = true)]
    precision: Option<i64>,
    /// Series truncation degree (default p^3).
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Highest cyclotomic layer checked.
    #[arg(long, global = true)]
    nmax: Option<u32>,
    /// Guard digits required before a precision-sensitive decision.
    #[arg(long, global = true)]
    guard: Option<i64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct ModuleArg {
    /// Module file, or preset:NAME (supersingular, ordinary, weight4, qp1, ordinary-eigenline).
    #[arg(long, short)]
    module: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Newton slopes and Hodge jumps.
    Slopes(ModuleArg),
    /// Weak admissibility with its certificate.
    Admissible(ModuleArg),
    /// Condition (N_j).
    Ncond {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
    },
    /// The subspace Fil¹.
    Fil1(ModuleArg),
    /// Universal-norm rank f·dim Fil¹.
    Rank(ModuleArg),
    /// Tate twist by K, as a module file.
    Twist {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Tensor product with a second module.
    Tensor {
        #[command(flatten)]
        m: ModuleArg,
        /// Second factor (file or preset:NAME).
        #[arg(long)]
        with: String,
    },
    /// Exterior power Λ^V.
    Wedge {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long)]
        v: usize,
    },
    /// Move the jump K of the filtration down by one.
    Tilde {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Rank table j ↦ rank for the modular-form module (p, k, a_p), as TSV.
    MfRankTable {
        #[arg(value_name = "P")]
        p_pos: Option<u32>,
        #[arg(value_name = "K")]
        k_pos: Option<i64>,
        #[arg(value_name = "A_P")]
        ap_pos: Option<String>,
        #[arg(long = "p")]
        p: Option<u32>,
        #[arg(long = "k")]
        k: Option<i64>,
        #[arg(long = "ap", allow_hyphen_values = true)]
        ap: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        jmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        jmax: i64,
    },
    /// Series operations.
    Series {
        #[command(subcommand)]
        cmd: SeriesCmd,
    },
    /// Finite-layer membership of a vector series.
    Amember {
        #[command(flatten)]
        m: ModuleArg,
        /// Vector series file; a seeded synthetic member when omitted.
        #[arg(long)]
        series: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        v: i64,
        /// Comma-separated vanishing set.
        #[arg(long = "J", allow_hyphen_values = true, default_value = "")]
        j_set: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        r: String,
        /// Also require ψ(g) = 0.
        #[arg(long)]
        psi: bool,
    },
    /// Order against log-divisibility for a determinant built from g.
    Contradict {
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        m: ModuleArg,
        /// Vector series file; a seeded synthetic member when omitted.
        #[arg(long)]
        series: Option<String>,
    },
    /// Seeded property suites.
    Verify {
        /// One of the suites, or "all".
        suite: String,
        #[arg(long)]
        count: Option<usize>,
        /// Rerun a single case.
        #[arg(long)]
        case: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Apply an operator to a series file and print the result.
    Apply {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        input: String,
        /// Unit c of γ_c.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Index j of ℓ_j.
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i64>,
    },
    /// Growth order (exact on {"terms": …} files) and log-divisibility.
    Order {
        #[arg(long)]
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Phi,
    Psi,
    #[value(name = "D")]
    D,
    Gamma,
    Ell,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "dim2-det")]
    Dim2Det,
    Wronskian,
    #[value(name = "orbit-wedge")]
    OrbitWedge,
}

/// Printed text and exit status.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
    fn verdict(text: String, ok: bool) -> Self {
        Output { text, code: if ok { 0 } else { 1 } }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn module(cfg: &Config, src: &str) -> Result<FilteredPhiModule, CliError> {
    load_module(src, cfg.precision, cfg.guard)
}

fn certificate_output(cfg: &Config, name: &str, cert: &Certificate) -> Output {
    let text = if cfg.json {
        let entries: Vec<Value> = cert
            .entries
            .iter()
            .map(|e| json!({"dim": e.dim(), "t_H": e.t_h, "t_N": e.t_n, "basis": basis_value(e.space.basis())}))
            .collect();
        let witness = cert.witness_entry().map(|e| json!({"dim": e.dim(), "t_H": e.t_h, "t_N": e.t_n, "basis": basis_value(e.space.basis())}));
        pretty(&json!({name: cert.holds, "subspaces": entries, "witness": witness}))
    } else {
        let mut s = format!("{name}\t{}\n", cert.holds);
        s.push_str("dim\tt_H\tt_N\tbasis\n");
        for e in &cert.entries {
            writeln!(s, "{}\t{}\t{}\t{}", e.dim(), e.t_h, e.t_n, basis_value(e.space.basis())).unwrap();
        }
        if let (false, Some(e)) = (cert.holds, cert.witness_entry()) {
            writeln!(s, "witness\t{}\t{}\t{}\t{}", e.dim(), e.t_h, e.t_n, basis_value(e.space.basis())).unwrap();
        }
        s
    };
    Output::verdict(text, cert.holds)
}

fn slopes_cmd(cfg: &Config, m: &FilteredPhiModule) -> Result<Output, CliError> {
    let poly = m.newton_slopes()?;
    let hodge = m.hodge();
    let t_n = m.t_n()?;
    if cfg.json {
        let slopes: Vec<Value> = poly.slopes.iter().map(|s| rational_value(*s)).collect();
        let h: Vec<Value> = hodge.h.iter().map(|(j, n)| json!({"jump": j, "multiplicity": n})).collect();
        return Ok(Output::ok(pretty(&json!({"slopes": slopes, "hodge": h, "t_H": hodge.t_h, "t_N": t_n}))));
    }
    let mut s = String::new();
    writeln!(s, "slopes\t{}", join(&poly.slopes)).unwrap();
    writeln!(s, "multiplicities\t{}", join(poly.multiplicities().iter().map(|(a, n)| format!("{a}:{n}")))).unwrap();
    writeln!(s, "hodge_jumps\t{}", join(hodge.h.iter().map(|(j, n)| format!("{j}:{n}")))).unwrap();
    writeln!(s, "t_H\t{}", hodge.t_h).unwrap();
    writeln!(s, "t_N\t{t_n}").unwrap();
    Ok(Output::ok(s))
}

fn fil1_cmd(cfg: &Config, m: &FilteredPhiModule, rank: bool) -> Result<Output, CliError> {
    let s = fil1(m)?;
    let f = m.field().degree();
    if rank {
        let r = universal_norm_rank(m)?;
        let text = if cfg.json {
            pretty(&json!({"rank": r, "f": f, "dim_fil1": s.dim()}))
        } else {
            format!("rank\t{r}\nf\t{f}\ndim_fil1\t{}\n", s.dim())
        };
        return Ok(Output::ok(text));
    }
    let text = if cfg.json {
        pretty(&json!({"dim": s.dim(), "basis": basis_value(s.basis())}))
    } else {
        format!("dim\t{}\nbasis\t{}\n", s.dim(), basis_value(s.basis()))
    };
    Ok(Output::ok(text))
}

fn series_file(cfg: &Config, path: &str) -> Result<(Value, Arc<unorm_padic::UnramifiedField>), CliError> {
    let v = read_json(path)?;
    let k = parse_field(&v, "$", cfg.precision, cfg.p, cfg.f)?;
    Ok((v, k))
}

fn series_apply(cfg: &Config, op: Op, input: &str, c: Option<&str>, j: Option<i64>) -> Result<Output, CliError> {
    let (v, k) = series_file(cfg, input)?;
    let f = parse_series(&k, &v, "$")?;
    let out: TruncatedSeries = match op {
        Op::Phi => phi(&f),
        Op::Psi => psi(&f)?,
        Op::D => d(&f)?,
        Op::Gamma => {
            let c = c.ok_or_else(|| CliError::Usage("gamma needs --c".into()))?;
            let c = parse_padic(k.p(), &Value::String(c.to_string()), "--c")?.with_prec(cfg.precision);
            gamma_action(&f, &c)?
        }
        Op::Ell => ell(&f, j.ok_or_else(|| CliError::Usage("ell needs --j".into()))?)?,
    };
    Ok(Output::ok(pretty(&series_value(&out))))
}

fn series_order(cfg: &Config, input: &str) -> Result<Output, CliError> {
    let (v, k) = series_file(cfg, input)?;
    if v.get("terms").is_some() {
        let lp = parse_log_polynomial(&k, &v, "$")?;
        let o = lp.growth_order()?;
        let text = if cfg.json {
            pretty(&json!({"growth_order": rational_value(o), "exact": true}))
        } else {
            format!("growth_order\t{o}\texact\n")
        };
        return Ok(Output::ok(text));
    }
    let f = parse_series(&k, &v, "$")?;
    let lo = log_order(&f, cfg.n_max);
    let est = growth_order_estimate(&f, cfg.n_max);
    let text = if cfg.json {
        let est = match &est {
            Ok(i) => json!([rational_value(i.lo), rational_value(i.hi)]),
            Err(e) => json!({"error": e.to_string()}),
        };
        pretty(&json!({"growth_order_estimate": est, "exact": false, "log_order": log_order_value(lo)}))
    } else {
        let est = match &est {
            Ok(i) => format!("[{}, {}]\testimate", i.lo, i.hi),
            Err(e) => format!("unavailable\t{e}"),
        };
        format!("growth_order\t{est}\nlog_order\t{}\n", log_order_str(lo))
    };
    Ok(Output::ok(text))
}

fn vector_input(cfg: &Config, m: &Arc<FilteredPhiModule>, series: Option<&str>) -> Result<VectorSeries, CliError> {
    let n = cfg.trunc_for(m.field().p());
    match series {
        Some(path) => parse_vector_series(m, &read_json(path)?, n),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Ok(random_member(m, n, &mut rng)?)
        }
    }
}

fn parse_j_set(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Usage(format!("bad entry {x:?} in --J"))))
        .collect()
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let file = cli.config.as_deref().map(Overrides::from_file).transpose()?;
    let flags = Overrides {
        precision: cli.precision,
        trunc: cli.trunc,
        nmax: cli.nmax,
        guard: cli.guard,
        seed: cli.seed,
        json: cli.json.then_some(true),
        ..Overrides::default()
    };
    let cfg = Config::resolve(file.as_ref(), &flags)?;
    match cli.cmd {
        Cmd::Slopes(a) => slopes_cmd(&cfg, &module(&cfg, &a.module)?),
        Cmd::Admissible(a) => Ok(certificate_output(&cfg, "weakly_admissible", &is_weakly_admissible(&module(&cfg, &a.module)?)?)),
        Cmd::Ncond { m, j } => Ok(certificate_output(&cfg, &format!("N_{j}"), &n_condition(&module(&cfg, &m.module)?, j)?)),
        Cmd::Fil1(a) => fil1_cmd(&cfg, &module(&cfg, &a.module)?, false),
        Cmd::Rank(a) => fil1_cmd(&cfg, &module(&cfg, &a.module)?, true),
        Cmd::Twist { m, k } => Ok(Output::ok(pretty(&module_value(&module(&cfg, &m.module)?.twist(k))))),
        Cmd::Tensor { m, with } => {
            let t = tensor_product(&module(&cfg, &m.module)?, &module(&cfg, &with)?)?;
            Ok(Output::ok(pretty(&module_value(&t))))
        }
        Cmd::Wedge { m, v } => Ok(Output::ok(pretty(&module_value(&wedge_power(&module(&cfg, &m.module)?, v)?)))),
        Cmd::Tilde { m, k } => Ok(Output::ok(pretty(&module_value(&module(&cfg, &m.module)?.tilde_modification(k)?)))),
        Cmd::MfRankTable { p_pos, k_pos, ap_pos, p, k, ap, jmin, jmax } => {
            let p = p.or(p_pos).ok_or_else(|| CliError::Usage("missing p".into()))?;
            let k = k.or(k_pos).ok_or_else(|| CliError::Usage("missing weight k".into()))?;
            let ap = ap.or(ap_pos).ok_or_else(|| CliError::Usage("missing a_p".into()))?;
            let ap = parse_rational_str(&ap).ok_or_else(|| CliError::Usage(format!("bad a_p {ap:?}")))?;
            let t = mf_rank_table(p, k, ap, jmin, jmax, cfg.precision)?;
            let text = if cfg.json { pretty(&serde_json::to_value(&t).unwrap()) } else { t.tsv() };
            Ok(Output::ok(text))
        }
        Cmd::Series { cmd: SeriesCmd::Apply { op, input, c, j } } => series_apply(&cfg, op, &input, c.as_deref(), j),
        Cmd::Series { cmd: SeriesCmd::Order { input } } => series_order(&cfg, &input),
        Cmd::Amember { m, series, v, j_set, r, psi } => {
            let m = Arc::new(module(&cfg, &m.module)?);
            let g = vector_input(&cfg, &m, series.as_deref())?;
            let r = parse_rational_str(&r).ok_or_else(|| CliError::Usage(format!("bad r {r:?}")))?;
            let mut params = MembershipParams::new(v, parse_j_set(&j_set)?, r, cfg.n_max);
            params.guard = cfg.guard;
            params.require_psi = psi;
            let rep = check_a_membership(&g, &params)?;
            let text = if cfg.json { pretty(&membership_value(&rep)) } else { membership_tsv(&rep) };
            Ok(Output { text, code: verdict_code(rep.verdict) })
        }
        Cmd::Contradict { which, m, series } => {
            let m = Arc::new(module(&cfg, &m.module)?);
            let g = vector_input(&cfg, &m, series.as_deref())?;
            let mode = match which {
                Which::Dim2Det => Mode::Dim2Det,
                Which::Wronskian => Mode::Wronskian,
                Which::OrbitWedge => Mode::OrbitWedge,
            };
            let pc = PipelineConfig { n_max: cfg.n_max, guard: cfg.guard };
            let rep = contradiction_pipeline(&m, mode, &g, &pc)?;
            let text = if cfg.json { pretty(&contradiction_value(&rep)) } else { contradiction_text(&rep) };
            let code = match rep.verdict {
                Outcome::ForcedZero => 0,
                Outcome::NotForced => 1,
                Outcome::Inconclusive => 2,
            };
            Ok(Output { text, code })
        }
        Cmd::Verify { suite, count, case } => verify(&cfg, &suite, count, case),
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Member => 0,
        Verdict::NonMember => 1,
        Verdict::Inconclusive => 2,
    }
}

fn verify(cfg: &Config, suite: &str, count: Option<usize>, case: Option<usize>) -> Result<Output, CliError> {
    let sp = SeriesParams::new(cfg.p, cfg.precision, cfg.trunc_for(cfg.p))?;
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut all_ok = true;
    for name in names {
        let cases = match case {
            Some(i) => vec![run_case(name, &sp, cfg.seed, i)?],
            None => run_suite(name, &sp, cfg.seed, count.unwrap_or_else(|| default_count(name)), Exec::default())?.cases,
        };
        let passed = cases.iter().filter(|c| c.passed).count();
        let ok = passed == cases.len();
        all_ok &= ok;
        let failures: Vec<_> = cases.iter().filter(|c| !c.passed).collect();
        if cfg.json {
            reports.push(json!({
                "suite": name,
                "seed": cfg.seed,
                "count": cases.len(),
                "passed": passed,
                "failures": failures.iter().map(|c| json!({
                    "case": c.index, "detail": c.detail, "input": c.input,
                    "replay": format!("unorm verify {name} --seed {} --case {}", cfg.seed, c.index),
                })).collect::<Vec<_>>(),
            }));
        } else {
            writeln!(text, "{name}\tseed {}\t{passed}/{}\t{}", cfg.seed, cases.len(), if ok { "pass" } else { "FAIL" }).unwrap();
            for c in failures {
                writeln!(text, "  case {}\t{}", c.index, c.detail).unwrap();
                writeln!(text, "    input\t{}", c.input).unwrap();
                writeln!(text, "    replay\tunorm verify {name} --seed {} --case {}", cfg.seed, c.index).unwrap();
            }
        }
    }
    if cfg.json {
        text = pretty(&Value::Array(reports));
    }
    Ok(Output::verdict(text, all_ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
