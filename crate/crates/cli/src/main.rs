//! `grscert`: build Grassl-Rötteler codes and certify them as GRS codes.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad usage or input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use grscert_core::constructions::{glynn_code, gr_code, segre_code};
use grscert_core::equivalence::{
    conjecture11_check, grs_probe_permutations, sweep_cases, verify_theorem, Caps, Conjecture11Report,
    ProbeOutcome, PunctureStatus, Status, DEFAULT_NULLSPACE_CAP,
};
use grscert_core::field_tower::prime_powers_up_to;
use grscert_core::linear_code::DEFAULT_DISTANCE_CAP;
use grscert_core::{CaseKind, Error, FieldElement, FieldTower, LinearCode, VerificationReport};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "grscert",
    version,
    about = "Certify Grassl-Rötteler MDS codes as generalised Reed-Solomon codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Emit JSON (one object per line for streams).
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of projective codewords enumerated for a distance.
    #[arg(long, global = true, default_value_t = DEFAULT_DISTANCE_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    cap_dist: u64,
    /// Maximum number of candidates tried in a multiplier search.
    #[arg(long, global = true, default_value_t = DEFAULT_NULLSPACE_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    cap_null: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the field tower for F_q and F_{q^2}.
    Field {
        #[arg(long)]
        q: u64,
    },
    /// Build the Grassl-Rötteler [q+1, k] code.
    Gr {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
        /// Write the generator matrix to this file.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Run the full certification for one (q, k).
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
    },
    /// Run the certification for every prime power q <= qmax and every k.
    VerifySweep {
        #[arg(long)]
        qmax: u64,
    },
    /// Compare puncture-code distances with the conjectured formula.
    Conjecture11 {
        #[arg(long, conflicts_with = "qmax", required_unless_present = "qmax")]
        q: Option<u64>,
        #[arg(long)]
        qmax: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// Treat cases skipped because of the distance cap as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Minimum distance of a code read from a matrix file.
    Mindist {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// The Segre [2^h + 1, 4] code with twist exponent e.
    Segre {
        h: u32,
        e: u32,
        /// Search every coordinate order for a GRS witness.
        #[arg(long)]
        witness_permutations: bool,
    },
    /// The Glynn [10, 5] code over F_9.
    Glynn {
        /// Search every coordinate order for a GRS witness.
        #[arg(long)]
        witness_permutations: bool,
    },
}

enum Outcome {
    Success(String),
    Failure(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = cli.opts.clone();
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(jobs) = opts.jobs {
            builder = builder.num_threads(jobs as usize);
        }
        match builder.build() {
            Ok(pool) => pool,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    };
    let result = pool.install(|| run(cli.command, &opts));
    let (text, code) = match result {
        Ok(Outcome::Success(text)) => (text, 0),
        Ok(Outcome::Failure(text)) => (text, 1),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &opts.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn caps(opts: &Opts) -> Caps {
    Caps { distance: opts.cap_dist, nullspace: opts.cap_null }
}

fn tower(q: u64) -> Result<Arc<FieldTower>, Error> {
    Ok(Arc::new(FieldTower::for_order(q)?))
}

fn json_line<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&serde_json::to_string(value).expect("reports serialize"));
    out.push('\n');
}

fn encs(xs: &[FieldElement]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.enc().to_string()).collect();
    parts.join(" ")
}

fn run(command: Command, opts: &Opts) -> Result<Outcome, Error> {
    match command {
        Command::Field { q } => cmd_field(q, opts),
        Command::Gr { q, k, matrix } => cmd_gr(q, k, matrix, opts),
        Command::Verify { q, k } => {
            let report = verify_theorem(&tower(q)?, k, caps(opts))?;
            Ok(verification_output(&[report], opts))
        }
        Command::VerifySweep { qmax } => {
            let cases = sweep_cases(qmax);
            let towers = prime_powers_up_to(qmax)
                .into_iter()
                .map(|q| Ok((q, tower(q)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let caps = caps(opts);
            let reports = par_map(&cases, |&(q, k)| {
                let t = &towers.iter().find(|(tq, _)| *tq == q).expect("tower built").1;
                verify_theorem(t, k, caps)
            })?;
            Ok(verification_output(&reports, opts))
        }
        Command::Conjecture11 { q, qmax, k, strict } => {
            let qs = match (q, qmax) {
                (Some(q), _) => vec![q],
                (None, Some(qmax)) => prime_powers_up_to(qmax),
                (None, None) => unreachable!("clap requires one of --q and --qmax"),
            };
            let mut cases = Vec::new();
            for q in qs {
                match k {
                    Some(k) => cases.push((q, k)),
                    None => cases.extend((1..=q).map(|k| (q, k))),
                }
            }
            let caps = caps(opts);
            let reports = par_map(&cases, |&(q, k)| conjecture11_check(q, k, caps))?;
            Ok(conjecture11_output(&reports, strict, opts))
        }
        Command::Mindist { matrix } => {
            let text = std::fs::read_to_string(&matrix)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", matrix.display())))?;
            let code = LinearCode::from_matrix_file(&text)?;
            let d = code.min_distance(opts.cap_dist)?;
            let mut out = String::new();
            if opts.json {
                json_line(&mut out, &serde_json::json!({ "n": code.n(), "k": code.k(), "d": d }));
            } else {
                writeln!(out, "[{},{},{}]", code.n(), code.k(), d).unwrap();
            }
            Ok(Outcome::Success(out))
        }
        Command::Segre { h, e, witness_permutations } => {
            let code = segre_code(h, e)?;
            known_code_output("segre", &code, witness_permutations, opts)
        }
        Command::Glynn { witness_permutations } => {
            let code = glynn_code()?;
            known_code_output("glynn", &code, witness_permutations, opts)
        }
    }
}

/// Ordered parallel map; the first error in input order wins.
fn par_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<R, Error> + Sync + Send,
) -> Result<Vec<R>, Error> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

#[derive(Serialize)]
struct FieldReport {
    p: u32,
    h: u32,
    q: u32,
    base_modulus: Vec<u32>,
    ext_modulus: Vec<u32>,
    omega: FieldElement,
    alpha: FieldElement,
    beta: FieldElement,
}

fn cmd_field(q: u64, opts: &Opts) -> Result<Outcome, Error> {
    let t = FieldTower::for_order(q)?;
    let mut out = String::new();
    if opts.json {
        let report = FieldReport {
            p: t.p(),
            h: t.h(),
            q: t.q(),
            base_modulus: t.base().modulus().to_vec(),
            ext_modulus: t.ext_modulus().iter().map(|c| c.enc()).collect(),
            omega: t.omega(),
            alpha: t.alpha(),
            beta: t.beta(),
        };
        json_line(&mut out, &report);
    } else {
        writeln!(out, "{}", t.header()).unwrap();
        writeln!(out, "omega {}", t.omega()).unwrap();
        writeln!(out, "alpha {}", t.alpha()).unwrap();
        writeln!(out, "beta {}", t.beta()).unwrap();
    }
    Ok(Outcome::Success(out))
}

#[derive(Serialize)]
struct GrReport {
    q: u32,
    k: u32,
    case: CaseKind,
    g: Vec<FieldElement>,
    n: usize,
    dim: usize,
    d: Option<usize>,
    mds: bool,
}

fn cmd_gr(q: u64, k: u32, matrix: Option<PathBuf>, opts: &Opts) -> Result<Outcome, Error> {
    let t = tower(q)?;
    let (code, case) = gr_code(&t, k)?;
    let mds = code.is_mds();
    let d = match code.min_distance(opts.cap_dist) {
        Ok(d) => Some(d),
        Err(Error::CapExceeded { .. }) => mds.then(|| code.n() + 1 - code.k()),
        Err(e) => return Err(e),
    };
    if let Some(path) = matrix {
        std::fs::write(&path, code.to_matrix_file())
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = GrReport {
        q: t.q(),
        k,
        case: case.kind,
        g: case.g.coeffs().to_vec(),
        n: code.n(),
        dim: code.k(),
        d,
        mds,
    };
    let mut out = String::new();
    if opts.json {
        json_line(&mut out, &report);
    } else {
        writeln!(out, "case {}", report.case.tag()).unwrap();
        writeln!(out, "g {}", case.g).unwrap();
        writeln!(out, "params [{},{},{}]", report.n, report.dim, fmt_opt(report.d)).unwrap();
        writeln!(out, "mds {}", report.mds).unwrap();
    }
    Ok(Outcome::Success(out))
}

fn fmt_opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "?".to_string(), |v| v.to_string())
}

fn verification_output(reports: &[VerificationReport], opts: &Opts) -> Outcome {
    let mut out = String::new();
    for r in reports {
        if opts.json {
            json_line(&mut out, r);
            continue;
        }
        let witness = match &r.witness {
            Some(w) => format!("found (dim V = {})", w.nullspace_dim),
            None => "none".to_string(),
        };
        writeln!(
            out,
            "q={} k={} {} [{},{},{}] mds={} g_ok={} h_a_ok={} lemma_equal={} theta=[{}] witness={}{} {}",
            r.q,
            r.k,
            r.case.tag(),
            r.n,
            r.dim,
            fmt_opt(r.d),
            r.mds,
            r.g_ok,
            r.h_a_ok,
            r.lemma_equal,
            encs(&r.theta),
            witness,
            if r.anomaly() { " ANOMALY" } else { "" },
            if r.status == Status::Ok { "ok" } else { "FAIL" },
        )
        .unwrap();
    }
    if reports.iter().all(|r| r.status == Status::Ok) {
        Outcome::Success(out)
    } else {
        Outcome::Failure(out)
    }
}

fn conjecture11_output(reports: &[Conjecture11Report], strict: bool, opts: &Opts) -> Outcome {
    let mut out = String::new();
    for r in reports {
        if opts.json {
            json_line(&mut out, r);
        } else {
            let status = match r.status {
                PunctureStatus::Match => "match",
                PunctureStatus::Mismatch => "MISMATCH",
                PunctureStatus::Untested => "untested (distance cap)",
            };
            writeln!(
                out,
                "q={} k={} n={} dim={} formula={} computed={} {}",
                r.q,
                r.k,
                r.n,
                r.puncture_dim,
                r.formula_d,
                fmt_opt(r.computed_d),
                status
            )
            .unwrap();
        }
    }
    let untested = reports.iter().filter(|r| r.status == PunctureStatus::Untested).count();
    if !opts.json && untested > 0 {
        writeln!(out, "{untested} case(s) untested under --cap-dist {}", opts.cap_dist).unwrap();
    }
    let failed = reports
        .iter()
        .any(|r| r.status == PunctureStatus::Mismatch || (strict && r.status == PunctureStatus::Untested));
    if failed {
        Outcome::Failure(out)
    } else {
        Outcome::Success(out)
    }
}

#[derive(Serialize)]
struct KnownCodeReport {
    code: &'static str,
    q: u32,
    n: usize,
    k: usize,
    d: Option<usize>,
    mds: bool,
    /// `witness`, `none` or `inconclusive`; absent unless requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    grs_probe: Option<&'static str>,
}

fn known_code_output(
    name: &'static str,
    code: &LinearCode,
    probe: bool,
    opts: &Opts,
) -> Result<Outcome, Error> {
    let mds = code.is_mds();
    let d = match code.min_distance(opts.cap_dist) {
        Ok(d) => Some(d),
        Err(Error::CapExceeded { .. }) => mds.then(|| code.n() + 1 - code.k()),
        Err(e) => return Err(e),
    };
    let grs_probe = if probe {
        Some(match grs_probe_permutations(code, opts.cap_null)? {
            ProbeOutcome::Witness(_) => "witness",
            ProbeOutcome::NoWitness => "none",
            ProbeOutcome::Inconclusive => "inconclusive",
        })
    } else {
        None
    };
    let report =
        KnownCodeReport { code: name, q: code.tower().q(), n: code.n(), k: code.k(), d, mds, grs_probe };
    let mut out = String::new();
    if opts.json {
        json_line(&mut out, &report);
    } else {
        writeln!(out, "{} [{},{},{}]_{} mds={}", name, report.n, report.k, fmt_opt(report.d), report.q, mds)
            .unwrap();
        if let Some(p) = grs_probe {
            writeln!(out, "grs probe: {p}").unwrap();
        }
    }
    Ok(Outcome::Success(out))
}
