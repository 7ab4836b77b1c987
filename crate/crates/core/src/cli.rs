//! Command-line front end.
//!
//! Exit codes: 0 success (or an optimal cover), 1 domain failure, 2 parse
//! failure or bad usage, 3 solver timeout.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::compose::{build_chain_with, compose_extremal_with, ComposeError};
use crate::cover::{self, check_guarantee, CoverCertificate, SolveOptions};
use crate::hypergraph::{extend_universal, meta_keys, PartiteHypergraph};
use crate::planes::{self, PlaneError};
use crate::primes::{self, ChainDecomposition};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_TIMEOUT: u8 = 3;

/// Environment variable holding the default solver budget in seconds.
pub const BUDGET_ENV: &str = "RYSER_BUDGET_SECS";

#[derive(Debug, Parser)]
#[command(
    name = "ryser",
    version,
    about = "Intersecting partite hypergraphs with large cover number"
)]
pub struct Cli {
    /// Structured JSON summaries on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Extra diagnostics on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Pg,
    Ag,
    TruncPg,
    Ap,
    GadgetJ,
    HrChain,
    Gr,
    Extend,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a construction and write it as an .rhg file.
    Build {
        kind: Kind,
        /// Plane order or prime power parameter.
        #[arg(long, visible_alias = "q")]
        p: Option<u64>,
        /// Comma-separated chain for hr-chain, e.g. 2,3,7.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Input hypergraph for `extend`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Randomize placements and matchings (hr-chain, gr).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the structural claims recorded in a hypergraph file.
    Verify { file: PathBuf },
    /// Compute the cover number and write a certificate.
    Cover {
        file: PathBuf,
        /// Time budget in seconds.
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<f64>,
        /// Initial cover, comma-separated vertex ids.
        #[arg(long, value_delimiter = ',')]
        seed_cover: Vec<u32>,
        /// Single-threaded deterministic search (the default).
        #[arg(long, conflicts_with = "parallel")]
        canonical: bool,
        /// Split the search across threads.
        #[arg(long)]
        parallel: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate file against a hypergraph file.
    CheckCover { file: PathBuf, certificate: PathBuf },
    /// Matching number and Ryser ratio.
    Ratio {
        file: PathBuf,
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<f64>,
    },
    /// Prime chain with sum r - 1.
    Decompose {
        r: u64,
        /// Chain length; without it, even r uses the three-prime census.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        primes_only: bool,
    },
    /// Good-integer census over odd t.
    Census {
        #[arg(long)]
        t_min: u64,
        #[arg(long)]
        t_max: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<PlaneError> for Failure {
    fn from(e: PlaneError) -> Self {
        Failure::domain(e.to_string())
    }
}

impl From<ComposeError> for Failure {
    fn from(e: ComposeError) -> Self {
        Failure::domain(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        verbose: cli.verbose,
        out,
        err,
    };
    let result = match cli.command {
        Command::Build {
            kind,
            p,
            primes,
            input,
            seed,
            output,
        } => ctx.build(kind, p, &primes, input.as_deref(), seed, &output),
        Command::Verify { file } => ctx.verify(&file),
        Command::Cover {
            file,
            budget,
            seed_cover,
            canonical: _,
            parallel,
            output,
        } => ctx.cover(&file, budget, seed_cover, parallel, output.as_deref()),
        Command::CheckCover { file, certificate } => ctx.check_cover(&file, &certificate),
        Command::Ratio { file, budget } => ctx.ratio(&file, budget),
        Command::Decompose { r, k, primes_only } => ctx.decompose(r, k, primes_only),
        Command::Census {
            t_min,
            t_max,
            output,
        } => ctx.census(t_min, t_max, output.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.err, "error: {}", f.message);
            f.code
        }
    }
}

struct Ctx<'a> {
    json: bool,
    verbose: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn read_hypergraph(path: &Path) -> Result<PartiteHypergraph, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    PartiteHypergraph::parse(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

/// Write to a temporary file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| Failure::domain(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn budget_from(secs: Option<f64>) -> Result<Duration, Failure> {
    match secs {
        None => Ok(cover::DEFAULT_BUDGET),
        Some(s) if s.is_finite() && s >= 0.0 => Ok(Duration::from_secs_f64(s)),
        Some(s) => Err(Failure::parse(format!("invalid budget {s}"))),
    }
}

fn require_param(p: Option<u64>, kind: Kind) -> Result<u64, Failure> {
    p.ok_or_else(|| Failure::parse(format!("{kind:?} needs --p")))
}

impl Ctx<'_> {
    fn say(&mut self, text: &str, value: serde_json::Value) {
        let _ = if self.json {
            writeln!(self.out, "{value}")
        } else {
            writeln!(self.out, "{text}")
        };
    }

    fn build(
        &mut self,
        kind: Kind,
        p: Option<u64>,
        primes: &[u64],
        input: Option<&Path>,
        seed: Option<u64>,
        output: &Path,
    ) -> CmdResult {
        let h = match kind {
            Kind::Pg => planes::build_projective(require_param(p, kind)?)?.to_hypergraph()?,
            Kind::Ag => planes::build_affine(require_param(p, kind)?)?.to_hypergraph()?,
            Kind::TruncPg => planes::truncate_projective(require_param(p, kind)?)?.base,
            Kind::Ap => planes::build_ap(require_param(p, kind)?)?.base,
            Kind::GadgetJ => planes::build_j_gadget(require_param(p, kind)?)?.base,
            Kind::Gr => compose_extremal_with(require_param(p, kind)?, seed)?,
            Kind::HrChain => {
                if primes.is_empty() {
                    return Err(Failure::parse("hr-chain needs --primes"));
                }
                let chain = ChainDecomposition::new(primes.to_vec())
                    .map_err(|e| Failure::domain(e.to_string()))?;
                build_chain_with(&chain, seed)?
            }
            Kind::Extend => {
                let path = input.ok_or_else(|| Failure::parse("extend needs --input"))?;
                let base = read_hypergraph(path)?;
                extend_universal(&base).map_err(|e| Failure::domain(e.to_string()))?
            }
        };
        write_atomic(output, &h.serialize())?;
        let guarantee = h
            .guarantee()
            .map_or_else(|| "none".to_string(), |g| format!("τ≥{g}"));
        let text = format!(
            "r={} n={} m={} guarantee {}",
            h.r(),
            h.n(),
            h.m(),
            guarantee
        );
        let value = json!({
            "construction": h.meta_value(meta_keys::CONSTRUCTION),
            "r": h.r(), "n": h.n(), "m": h.m(),
            "guarantee": h.guarantee(),
            "output": output.display().to_string(),
        });
        self.say(&text, value);
        Ok(EXIT_OK)
    }

    fn verify(&mut self, file: &Path) -> CmdResult {
        let h = read_hypergraph(file)?;
        let partite = h.is_r_partite();
        let uniform_r = h.is_partite_uniform();
        let witness = h.disjoint_pair();
        let intersecting = witness.is_none();
        let profile = h.intersection_profile();
        let mut failures = Vec::new();
        let meta_bool = |key: &str| h.meta_value(key).map(|v| v == "true");
        if meta_bool(meta_keys::CLAIM_PARTITE) == Some(true) && !partite {
            let bad = h
                .edges()
                .iter()
                .position(|e| {
                    let mut cls: Vec<usize> = e.iter().map(|&v| h.class_of(v)).collect();
                    cls.sort_unstable();
                    cls.windows(2).any(|w| w[0] == w[1])
                })
                .unwrap_or(0);
            failures.push(format!(
                "claimed partite, but edge {bad} has two vertices in one class"
            ));
        }
        if let Some(k) = h.meta_value(meta_keys::CLAIM_UNIFORM) {
            match k.parse::<usize>() {
                Ok(k) if h.is_uniform(k) => {}
                Ok(k) => {
                    let bad = h.edges().iter().position(|e| e.len() != k).unwrap_or(0);
                    failures.push(format!(
                        "claimed {k}-uniform, but edge {bad} has size {}",
                        h.edges()[bad].len()
                    ));
                }
                Err(_) => failures.push(format!("unreadable uniformity claim {k:?}")),
            }
        }
        if let Some(claim) = meta_bool(meta_keys::CLAIM_INTERSECTING) {
            if claim != intersecting {
                match witness {
                    Some((i, j)) => failures.push(format!(
                        "claimed intersecting, but edges {i} and {j} are disjoint"
                    )),
                    None => failures.push(
                        "claimed not intersecting, but every pair of edges meets".to_string(),
                    ),
                }
            }
        }
        let mut text = format!(
            "r={} n={} m={}\npartite={partite}\nr-uniform={uniform_r}\nintersecting={intersecting}",
            h.r(),
            h.n(),
            h.m()
        );
        if let Some((i, j)) = witness {
            text.push_str(&format!(" (edges {i} and {j} are disjoint)"));
        }
        let hist: Vec<String> = profile
            .histogram
            .iter()
            .map(|(k, c)| format!("{k}:{c}"))
            .collect();
        text.push_str(&format!("\nintersection histogram {{{}}}", hist.join(", ")));
        for f in &failures {
            text.push_str(&format!("\nFAILED: {f}"));
        }
        let value = json!({
            "r": h.r(), "n": h.n(), "m": h.m(),
            "partite": partite,
            "r_uniform": uniform_r,
            "intersecting": intersecting,
            "disjoint_pair": witness,
            "profile": profile,
            "failures": failures,
        });
        self.say(&text, value);
        Ok(if failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_DOMAIN
        })
    }

    fn cover(
        &mut self,
        file: &Path,
        budget: Option<f64>,
        seed_cover: Vec<u32>,
        parallel: bool,
        output: Option<&Path>,
    ) -> CmdResult {
        let h = read_hypergraph(file)?;
        let opts = SolveOptions {
            budget: Some(budget_from(budget)?),
            seed_cover: (!seed_cover.is_empty()).then_some(seed_cover),
            parallel,
        };
        let cert = cover::solve_exact(&h, &opts);
        if let Err(i) = cover::verify_cover(&h, &cert.cover) {
            return Err(Failure::domain(format!(
                "internal error: solver cover misses edge {i}"
            )));
        }
        if let Err(e) = check_guarantee(&h, &cert) {
            let _ = writeln!(self.err, "!!! CONSISTENCY ALARM: {e}");
            return Err(Failure::domain(e.to_string()));
        }
        if let Some(path) = output {
            write_atomic(path, &cert.to_text())?;
        }
        if self.verbose {
            let _ = writeln!(
                self.err,
                "{} nodes in {:?}",
                cert.nodes_explored, cert.elapsed
            );
        }
        let status = if cert.optimal { "optimal" } else { "timed out" };
        let text = format!(
            "tau={} ({status}) lower_bound={} [{}] upper [{}] nodes={}",
            cert.size, cert.lower_bound, cert.lb_method, cert.ub_method, cert.nodes_explored
        );
        self.say(&text, serde_json::to_value(&cert).unwrap_or_default());
        Ok(if cert.timed_out {
            EXIT_TIMEOUT
        } else {
            EXIT_OK
        })
    }

    fn check_cover(&mut self, file: &Path, certificate: &Path) -> CmdResult {
        let h = read_hypergraph(file)?;
        let text = fs::read_to_string(certificate)
            .map_err(|e| Failure::parse(format!("{}: {e}", certificate.display())))?;
        let cert = CoverCertificate::parse(&text).map_err(|e| Failure::parse(e.to_string()))?;
        match cover::verify_cover(&h, &cert.cover) {
            Ok(()) => {
                self.say(
                    &format!("valid cover of size {}", cert.size),
                    json!({"valid": true, "size": cert.size}),
                );
                Ok(EXIT_OK)
            }
            Err(i) => {
                self.say(
                    &format!("INVALID: edge {i} is not covered"),
                    json!({"valid": false, "missed_edge": i}),
                );
                Ok(EXIT_DOMAIN)
            }
        }
    }

    fn ratio(&mut self, file: &Path, budget: Option<f64>) -> CmdResult {
        let h = read_hypergraph(file)?;
        let tau = cover::solve_exact(&h, &SolveOptions::with_budget(budget_from(budget)?));
        let nu = cover::matching_number(&h);
        match cover::ryser_ratio(&h, &tau, &nu) {
            Ok(ratio) => {
                let text = format!(
                    "tau={} nu={} r={} ratio={}",
                    tau.size,
                    nu.size,
                    h.r(),
                    ratio
                );
                let value = json!({
                    "tau": tau.size, "nu": nu.size, "r": h.r(),
                    "ratio": [*ratio.numer(), *ratio.denom()],
                });
                self.say(&text, value);
                Ok(EXIT_OK)
            }
            Err(cover::CoverError::RequiresExactCertificates) => {
                let _ = writeln!(self.err, "cover search timed out");
                Ok(EXIT_TIMEOUT)
            }
            Err(e) => Err(Failure::domain(e.to_string())),
        }
    }

    fn decompose(&mut self, r: u64, k: Option<usize>, primes_only: bool) -> CmdResult {
        let found = match k {
            Some(k) => primes::find_chain(r, k, !primes_only),
            None => primes::decompose_even_r(r).map_err(|e| Failure::domain(e.to_string()))?,
        };
        match found {
            Some(chain) => {
                let text = format!(
                    "{chain} r={} guarantee τ≥{}",
                    chain.r(),
                    chain.r() as usize - chain.k()
                );
                self.say(&text, json!({"r": r, "chain": chain.primes()}));
            }
            None => {
                let fallback = if k.is_none() {
                    primes::find_chain(r, 2, true)
                } else {
                    None
                };
                let mut text = "NotFound".to_string();
                if let Some(f) = &fallback {
                    text.push_str(&format!("\nfallback k=2: {f}"));
                }
                let value = json!({
                    "r": r, "chain": null,
                    "fallback": fallback.as_ref().map(|f| f.primes().to_vec()),
                });
                self.say(&text, value);
            }
        }
        Ok(EXIT_OK)
    }

    fn census(&mut self, t_min: u64, t_max: u64, output: Option<&Path>) -> CmdResult {
        if t_min > t_max {
            return Err(Failure::domain(format!("empty range {t_min}..={t_max}")));
        }
        let start = t_min.max(5) | 1;
        let mut table = String::from("t\tw\ty\tz\tgood\twitness\n");
        let mut rows = Vec::new();
        let mut inconsistent = Vec::new();
        for t in (start..=t_max).step_by(2) {
            let c = primes::good_census(t).map_err(|e| Failure::domain(e.to_string()))?;
            let witness = c
                .witness
                .map_or_else(|| "-".to_string(), |(a, b, d)| format!("({a},{b},{d})"));
            table.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                c.t,
                c.w,
                c.y,
                c.z,
                c.good.len(),
                witness
            ));
            if !c.is_consistent() {
                inconsistent.push(t);
            }
            rows.push(c);
        }
        if let Some(path) = output {
            write_atomic(path, &table)?;
        }
        let value = json!({"rows": rows, "inconsistent": inconsistent});
        let text = format!(
            "{}{} rows, {} inconsistent",
            table,
            rows.len(),
            inconsistent.len()
        );
        self.say(&text, value);
        Ok(if inconsistent.is_empty() {
            EXIT_OK
        } else {
            EXIT_DOMAIN
        })
    }
}
