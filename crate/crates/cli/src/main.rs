use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use lee_tiling::certify::{
    certify_range, certify_with, CertVerdict, CertifyOptions, NonexistenceCertificate,
};
use lee_tiling::group::{enumerate_groups_with_bound, FactorBound};
use lee_tiling::lee::{sphere_points, sphere_size};
use lee_tiling::profile::{profile_report, ProfileReport, Relation};
use lee_tiling::search::{search_all, search_group, SearchOptions, SearchOutcome};
use lee_tiling::tiling::{check_conditions, verify_lattice, VerificationReport, Witness};
use lee_tiling::{AbelianGroup, GroupElement, LatticeBasis, LeeSphereSpec, TilingCandidate};
use serde::Serialize;

const EXIT_REJECT: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_GAP: u8 = 3;

macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)?
    };
}

/// Lattice tilings of Z^n by Lee spheres: verification, search and
/// nonexistence certificates.
#[derive(Parser, Debug)]
#[command(name = "leetile", version)]
struct Cli {
    /// Largest group order the factorizer accepts.
    #[arg(long, global = true, env = "LEETILE_FACTOR_BOUND", default_value_t = FactorBound::DEFAULT.0)]
    factor_bound: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size (and optionally the points) of the Lee sphere S(n, r).
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
    },
    /// Every abelian group of the given order, in invariant-factor form.
    Groups {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check a lattice basis geometrically, or an arm set algebraically.
    Verify(VerifyArgs),
    /// Multiplicity profile of T^(k) T and its identities.
    Profile {
        #[command(flatten)]
        candidate: CandidateArgs,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive search for arm sets over groups of order 2n^2+2n+1.
    Search {
        #[arg(long)]
        n: u64,
        /// Restrict to one group, e.g. Z25 or Z5xZ5.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 1)]
        partitions: usize,
        /// Cap on attempted pair additions per group.
        #[arg(long)]
        budget: Option<u64>,
        /// Search every set instead of one per unit orbit.
        #[arg(long)]
        no_reduction: bool,
        #[arg(long)]
        json: bool,
    },
    /// Nonexistence certificate for one n or a range lo:hi.
    Certify {
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        n: Option<u64>,
        #[arg(long, value_parser = parse_range)]
        range: Option<(u64, u64)>,
        /// Settle small n below the branch threshold by exhaustive search.
        #[arg(long)]
        search_fallback: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct CandidateArgs {
    /// Group spec, e.g. Z13 or Z5xZ5.
    #[arg(long)]
    group: String,
    #[arg(long)]
    n: u64,
    /// Arm set as semicolon-separated elements, e.g. "0;1;12;5;8".
    #[arg(long)]
    t: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Basis file: whitespace text (n, then n rows) or a JSON array of rows.
    /// Columns are the lattice generators.
    #[arg(long, conflicts_with_all = ["group", "n", "t"])]
    basis: Option<PathBuf>,
    #[arg(long, default_value_t = 2, requires = "basis")]
    r: u64,
    #[arg(long, required_unless_present = "basis")]
    group: Option<String>,
    #[arg(long, required_unless_present = "basis")]
    n: Option<u64>,
    #[arg(long, required_unless_present = "basis")]
    t: Option<String>,
    #[arg(long)]
    json: bool,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 <= lo <= hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    out!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// The serde name of a unit enum variant.
fn tag<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn join(elements: &[GroupElement]) -> String {
    elements
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn build_candidate(group: &str, n: u64, t: &str) -> anyhow::Result<TilingCandidate> {
    let group = AbelianGroup::parse(group).context("group spec")?;
    let arms = GroupElement::parse_list(t).context("arm set")?;
    Ok(TilingCandidate::new(group, n, arms)?)
}

fn read_basis(path: &Path) -> anyhow::Result<LatticeBasis> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        let rows: Vec<Vec<i64>> = serde_json::from_str(&text).context("basis JSON")?;
        Ok(LatticeBasis::from_rows(rows)?)
    } else {
        Ok(LatticeBasis::parse_text(&text)?)
    }
}

fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::Coefficient {
            element,
            expected,
            actual,
        } => format!("coefficient of T^2 at {element} is {actual}, expected {expected}"),
        Witness::MissingInverse { element, inverse } => {
            format!("{element} in T but its inverse {inverse} is not")
        }
        Witness::Count { expected, actual } => format!("expected {expected}, found {actual}"),
        Witness::Collision {
            first,
            second,
            image,
        } => {
            format!(
                "sphere points {:?} and {:?} both map to {image}",
                first.coords(),
                second.coords()
            )
        }
    }
}

fn report_verdict(report: &VerificationReport, json: bool) -> anyhow::Result<ExitCode> {
    if json {
        print_json(report)?;
    } else if report.accepted() {
        out!("accept");
    } else {
        let condition = report.failed_condition.map(|c| tag(&c)).unwrap_or_default();
        match &report.witness {
            Some(w) => out!("reject: {condition}: {}", describe_witness(w)),
            None => out!("reject: {condition}"),
        }
    }
    Ok(if report.accepted() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_REJECT)
    })
}

fn print_profile(report: &ProfileReport) -> io::Result<()> {
    let p = &report.profile;
    out!(
        "k = {}, n = {}, max multiplicity = {}",
        p.k,
        p.n,
        p.max_index
    );
    for (i, size) in &p.histogram {
        out!("  |class {i}| = {size}");
    }
    for check in &report.identities.checks {
        let rel = match check.relation {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Le => "<=",
        };
        let status = if check.holds { "ok  " } else { "FAIL" };
        out!("{status} {}: {} {rel} {}", check.name, check.lhs, check.rhs);
    }
    if let Some(d) = &report.delta {
        out!("delta = {}, delta_raw = {}", d.delta, d.delta_raw);
    }
    Ok(())
}

fn print_outcome(o: &SearchOutcome) -> io::Result<()> {
    let status = if o.exhausted {
        "exhausted"
    } else {
        "budget hit"
    };
    out!(
        "{}: {} solution(s), {} nodes, {status}{}",
        o.group,
        o.solutions.len(),
        o.nodes_explored,
        if o.reduction_applied {
            ", one per unit orbit"
        } else {
            ""
        }
    );
    for s in &o.solutions {
        out!("  {}", join(s));
    }
    Ok(())
}

fn certificate_line(c: &NonexistenceCertificate) -> String {
    let verdict = tag(&c.verdict);
    let how = tag(&c.justification);
    format!(
        "n = {}: {verdict} by {how} [{}]; p(n) = {} = {} (threshold {})",
        c.n, c.branch.label, c.inequality.polynomial, c.evaluated_value, c.threshold
    )
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let bound = FactorBound(cli.factor_bound);
    match cli.command {
        Command::Sphere { n, r, list, json } => {
            let spec = LeeSphereSpec::new(n, r)?;
            let size = sphere_size(n as u64, r);
            let points = list.then(|| sphere_points(spec));
            if json {
                #[derive(Serialize)]
                struct SphereOut {
                    n: usize,
                    r: u64,
                    size: String,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    points: Option<Vec<Vec<i64>>>,
                }
                print_json(&SphereOut {
                    n,
                    r,
                    size: size.to_string(),
                    points: points.map(|ps| ps.into_iter().map(|p| p.0).collect()),
                })?;
            } else {
                out!("{size}");
                for p in points.unwrap_or_default() {
                    out!(
                        "{}",
                        p.coords()
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Groups { order, json } => {
            let groups = enumerate_groups_with_bound(order, bound)?;
            if json {
                print_json(&groups)?;
            } else {
                for g in &groups {
                    out!("{g}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let report = match (&args.basis, &args.group, args.n, &args.t) {
                (Some(path), ..) => verify_lattice(&read_basis(path)?, args.r)?,
                (None, Some(group), Some(n), Some(t)) => {
                    check_conditions(&build_candidate(group, n, t)?)
                }
                _ => bail!("give either --basis or all of --group, --n, --t"),
            };
            report_verdict(&report, args.json)
        }
        Command::Profile { candidate, k, json } => {
            let c = build_candidate(&candidate.group, candidate.n, &candidate.t)?;
            let verdict = check_conditions(&c);
            if !verdict.accepted() {
                eprintln!("arm set fails the tiling conditions; no profile");
                return report_verdict(&verdict, json);
            }
            let report = profile_report(&c, k)?;
            if json {
                print_json(&report)?;
            } else {
                print_profile(&report)?;
            }
            Ok(if report.all_hold() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_REJECT)
            })
        }
        Command::Search {
            n,
            group,
            partitions,
            budget,
            no_reduction,
            json,
        } => {
            let opts = SearchOptions {
                use_automorphism_reduction: !no_reduction,
                worker_partitions: partitions,
                node_budget: budget,
                factor_bound: bound,
            };
            let outcomes = match group {
                Some(spec) => vec![search_group(&AbelianGroup::parse(&spec)?, n, &opts)?],
                None => search_all(n, &opts)?,
            };
            if json {
                print_json(&outcomes)?;
            } else {
                for o in &outcomes {
                    print_outcome(o)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify {
            n,
            range,
            search_fallback,
            json,
        } => {
            let opts = CertifyOptions {
                search_fallback,
                search: SearchOptions {
                    factor_bound: bound,
                    ..SearchOptions::default()
                },
            };
            let settled = match (n, range) {
                (Some(n), _) => {
                    let cert = certify_with(n, &opts)?;
                    if json {
                        print_json(&cert)?;
                    } else {
                        out!("{}", certificate_line(&cert));
                        for note in &cert.notes {
                            out!("  note: {note}");
                        }
                    }
                    cert.verdict != CertVerdict::Unresolved
                }
                (None, Some((lo, hi))) => {
                    let summary = certify_range(lo, hi, &opts)?;
                    if json {
                        print_json(&summary)?;
                    } else {
                        for c in &summary.certificates {
                            out!("{}", certificate_line(c));
                        }
                        let counts: Vec<String> = summary
                            .by_justification
                            .iter()
                            .map(|(j, k)| format!("{}: {k}", tag(j)))
                            .collect();
                        out!(
                            "{} certificates ({}); gaps: {:?}",
                            summary.certificates.len(),
                            counts.join(", "),
                            summary.gaps
                        );
                    }
                    summary.gaps.is_empty()
                }
                (None, None) => bail!("give --n or --range"),
            };
            Ok(if settled {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_GAP)
            })
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<io::Error>()
        .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_MALFORMED)
        }
    }
}
