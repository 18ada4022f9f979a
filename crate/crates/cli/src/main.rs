//! `zerosum` — compute zero-sum spectra, classify sequences against the
//! structural forms, brute-force the group invariants, and run or cache the
//! certification checks.
//!
//! Exit status: 0 on success/verified, 1 when a check is refuted, 2 on usage
//! errors and feasibility aborts.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use zerosum_core::cache::ReportCache;
use zerosum_core::report::checks;
use zerosum_core::search::{
    davenport_report, disc_report, l1_report, sufficiency_scan, verify_lemma31,
    verify_main_theorem, verify_schmid, verify_sigma_full,
};
use zerosum_core::sequence::Sequence;
use zerosum_core::spectrum::length_spectrum;
use zerosum_core::structure::{match_schmid, match_theorem_forms};
use zerosum_core::{Group, SearchConfig, SearchReport, Verdict, CODE_VERSION};

#[derive(Parser)]
#[command(
    name = "zerosum",
    version,
    about = "Zero-sum invariants and structure certification over rank-<=2 finite abelian groups"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct GroupArg {
    /// Invariant factors n1,n2 of the group C_n1 (+) C_n2
    #[arg(long, value_parser = parse_group)]
    group: Group,
}

fn parse_group(raw: &str) -> Result<Group, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err("expected n1,n2".into());
    }
    let n1: u32 = parts[0].trim().parse().map_err(|e| format!("n1: {e}"))?;
    let n2: u32 = parts[1].trim().parse().map_err(|e| format!("n2: {e}"))?;
    Group::new(n1, n2).map_err(|e| e.to_string())
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SeqArgs {
    /// Sequence entries as inline JSON: an array of a,b,mult triples
    #[arg(long)]
    seq: Option<String>,
    /// Path to a JSON sequence file (full object or bare entries array)
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Worker threads for the enumeration
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Node budget for the feasibility gate
    #[arg(long, default_value_t = 500_000_000)]
    budget: u64,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            threads: self.threads.max(1),
            node_budget: self.budget.max(1),
            ..SearchConfig::default()
        }
    }
}

#[derive(Args)]
struct CacheArgs {
    /// Report cache path (JSON lines)
    #[arg(long, default_value = "zerosum-cache.jsonl")]
    cache: PathBuf,
    /// Recompute even if a cached report exists, and do not persist
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Zero-sum length spectrum of a sequence
    Spectrum {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Match a sequence against the five structural forms
    Classify {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Match a sequence against the minimal zero-sum forms
    Schmid {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Brute-force the Davenport constant and cross-check n1 + n2 - 1
    Davenport {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Brute-force the smallest length forcing two distinct zero-sum lengths
    Disc {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Brute-force the extremal equal-length value set
    L1 {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Run a certification check
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Tally the equal-length property over all form instances
    ScanSufficiency {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Dump the report cache
    Report {
        #[command(flatten)]
        cache: CacheArgs,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Every extremal equal-length sequence matches a structural form
    Theorem {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Minimal zero-sum sequences of length n1+n2-1 are exactly the Schmid forms
    Schmid {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Zero-sum-free sequences of length D(G)-1 attain every nonzero subsum
    Sigma {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Splice disjointness holds for every extremal sequence and zero-sum part
    Lemma31 {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let format = cli.format;
    match cli.command {
        Command::Spectrum { group, seq } => {
            let s = load_sequence(group.group, &seq)?;
            let spectrum = length_spectrum(&s, &SearchConfig::default().limits)?;
            let lengths: Vec<usize> = spectrum.lengths().iter().copied().collect();
            match format {
                Format::Json => println!("{}", serde_json::to_string(&lengths)?),
                Format::Table => println!(
                    "spectrum: {{{}}}",
                    lengths
                        .iter()
                        .map(|k| k.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            }
            Ok(0)
        }
        Command::Classify { group, seq } => {
            let s = load_sequence(group.group, &seq)?;
            let matches = match_theorem_forms(&s);
            match format {
                Format::Json => {
                    let arr: Vec<Value> = matches.iter().map(|m| m.to_json()).collect();
                    println!("{}", serde_json::to_string(&arr)?);
                }
                Format::Table => {
                    if matches.is_empty() {
                        println!("no form matches");
                    }
                    for m in &matches {
                        println!(
                            "form {}: g1=({},{}) g2=({},{}) params={}",
                            m.form.as_u8(),
                            m.g1.a,
                            m.g1.b,
                            m.g2.a,
                            m.g2.b,
                            m.to_json()["params"]
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Schmid { group, seq } => {
            let s = load_sequence(group.group, &seq)?;
            let matches = match_schmid(&s);
            match format {
                Format::Json => {
                    let arr: Vec<Value> = matches.iter().map(|m| m.to_json()).collect();
                    println!("{}", serde_json::to_string(&arr)?);
                }
                Format::Table => {
                    if matches.is_empty() {
                        println!("no form matches");
                    }
                    for m in &matches {
                        println!("{}", m.to_json());
                    }
                }
            }
            Ok(0)
        }
        Command::Davenport {
            group,
            search,
            cache,
        } => cached_check(format, checks::DAVENPORT, &group.group, &cache, || {
            davenport_report(&group.group, &search.config())
        }),
        Command::Disc {
            group,
            search,
            cache,
        } => cached_check(format, checks::DISC, &group.group, &cache, || {
            disc_report(&group.group, &search.config())
        }),
        Command::L1 {
            group,
            search,
            cache,
        } => cached_check(format, checks::L1, &group.group, &cache, || {
            l1_report(&group.group, &search.config())
        }),
        Command::Verify { target } => match target {
            VerifyTarget::Theorem {
                group,
                search,
                cache,
            } => cached_check(format, checks::VERIFY_THEOREM, &group.group, &cache, || {
                verify_main_theorem(&group.group, &search.config())
            }),
            VerifyTarget::Schmid {
                group,
                search,
                cache,
            } => cached_check(format, checks::VERIFY_SCHMID, &group.group, &cache, || {
                verify_schmid(&group.group, &search.config())
            }),
            VerifyTarget::Sigma {
                group,
                search,
                cache,
            } => cached_check(format, checks::VERIFY_SIGMA, &group.group, &cache, || {
                verify_sigma_full(&group.group, &search.config())
            }),
            VerifyTarget::Lemma31 {
                group,
                search,
                cache,
            } => cached_check(format, checks::VERIFY_LEMMA31, &group.group, &cache, || {
                verify_lemma31(&group.group, &search.config())
            }),
        },
        Command::ScanSufficiency {
            group,
            search,
            cache,
        } => cached_check(
            format,
            checks::SUFFICIENCY_SCAN,
            &group.group,
            &cache,
            || sufficiency_scan(&group.group, &search.config()),
        ),
        Command::Report { cache } => {
            let store = ReportCache::new(&cache.cache);
            for report in store.load_all()? {
                print_report(&report, format);
            }
            Ok(0)
        }
    }
}

fn load_sequence(group: Group, seq: &SeqArgs) -> anyhow::Result<Sequence> {
    let value: Value = match (&seq.seq, &seq.file) {
        (Some(inline), None) => serde_json::from_str(inline).context("parsing --seq JSON")?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).context("parsing sequence file")?
        }
        _ => bail!("exactly one of --seq or --file is required"),
    };
    if value.is_array() {
        Ok(Sequence::from_json_entries(group, &value)?)
    } else {
        let s = Sequence::from_json(&value)?;
        if s.group() != group {
            return Err(anyhow!(
                "sequence file is over {} but --group names {}",
                s.group(),
                group
            ));
        }
        Ok(s)
    }
}

fn cached_check(
    format: Format,
    check: &str,
    group: &Group,
    cache_args: &CacheArgs,
    compute: impl FnOnce() -> SearchReport,
) -> anyhow::Result<i32> {
    let cache = (!cache_args.no_cache).then(|| ReportCache::new(&cache_args.cache));
    if let Some(store) = &cache {
        if let Some(hit) = store.lookup(group, check, CODE_VERSION)? {
            print_report(&hit, format);
            return Ok(exit_code(hit.verdict));
        }
    }
    let report = compute();
    if let Some(store) = &cache {
        if report.verdict != Verdict::Aborted {
            store.append(&report)?;
        }
    }
    print_report(&report, format);
    Ok(exit_code(report.verdict))
}

fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Verified => 0,
        Verdict::Refuted => 1,
        Verdict::Aborted => 2,
    }
}

fn print_report(report: &SearchReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json_line()),
        Format::Table => {
            let verdict = match report.verdict {
                Verdict::Verified => "verified",
                Verdict::Refuted => "refuted",
                Verdict::Aborted => "aborted",
            };
            println!("check:    {}", report.check);
            println!("group:    C{}xC{}", report.group[0], report.group[1]);
            println!("verdict:  {verdict}");
            if let Some(claimed) = &report.claimed {
                println!("claimed:  {claimed}");
            }
            if let Some(computed) = &report.computed {
                println!("computed: {computed}");
            }
            if let Some(message) = &report.message {
                println!("message:  {message}");
            }
            if let Some(witness) = &report.witness {
                println!("witness:  {}", sequence_display(witness));
            }
            let s = &report.stats;
            println!(
                "stats:    nodes={} orbits={} sequences={} wall_ms={}",
                s.nodes_expanded, s.orbits_visited, s.sequences_tested, s.wall_ms
            );
            if !s.per_form_matches.is_empty() {
                let forms: Vec<String> = s
                    .per_form_matches
                    .iter()
                    .map(|(k, v)| format!("{k}:{v}"))
                    .collect();
                println!("forms:    {}", forms.join(" "));
            }
            if report.counterexamples.is_empty() {
                println!("counterexamples: none");
            } else {
                println!("counterexamples:");
                for v in &report.counterexamples {
                    println!("  {}", sequence_display(v));
                }
            }
        }
    }
}

fn sequence_display(v: &Value) -> String {
    Sequence::from_json(v)
        .map(|s| s.to_string())
        .unwrap_or_else(|_| v.to_string())
}
