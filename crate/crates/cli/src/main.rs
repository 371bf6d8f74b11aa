mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use blockscope::arith::{is_prime, prime_divisors};
use blockscope::blocks::{block_distribution, block_report, p_rational_chars};
use blockscope::chartab::{compute_character_table, TableCache};
use blockscope::correspond::{relative_glauberman, theorem_f_extension, ActionScene};
use blockscope::io::{export_table, import_table, read_group_file, table_to_json, LoadedGroup, TABLE_SCHEMA};
use blockscope::verify::{
    corpus_run, generate_scenes, reproduce_cyclic_quotient_counterexample, verify_p_rational_extension,
    verify_self_normalizing_sylow, verify_sigma_invariance, verify_theorem_d, verify_theorem_e_scene,
    verify_theorem_f_instance, CorpusOptions, PrimeFilter, Verdict, VerificationReport, SCENES_PER_GROUP,
};
use blockscope::{Error, PermGroup};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "blockscope",
    version,
    about = "Character tables, p-blocks and theorem checks for permutation groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of a group file, or validation of an exported table.
    Table { input: PathBuf },
    /// p-blocks with defects, heights and p-rationality.
    Blocks {
        group: PathBuf,
        #[arg(short = 'p', long = "prime", required = true, value_parser = parse_prime)]
        primes: Vec<u64>,
    },
    /// Galois conjugation `zeta -> zeta^k` on the irreducibles.
    Galois {
        group: PathBuf,
        /// Multipliers; every unit modulo the exponent when omitted.
        #[arg(short = 'k', long = "multiplier")]
        multipliers: Vec<i64>,
        /// Also list the p-rational irreducibles for these primes.
        #[arg(short = 'p', long = "prime", value_parser = parse_prime)]
        primes: Vec<u64>,
    },
    /// Relative Glauberman correspondence for a scene declared in the group file.
    Glauberman {
        group: PathBuf,
        #[arg(long)]
        scene: String,
    },
    /// Canonical p-rational extension of an irreducible of a normal subgroup.
    ExtendF {
        group: PathBuf,
        /// Declared subgroup playing `N`.
        #[arg(long)]
        normal: String,
        /// Index of `theta` in the table of `N`.
        #[arg(long)]
        theta: usize,
        #[arg(short = 'p', long = "prime", value_parser = parse_prime)]
        p: u64,
    },
    /// Theorem checks producing verification reports.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Corpus sweeps.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Normal p-complement of `N_G(P)` against p-rational p'-degree principal-block characters.
    ThmD {
        group: PathBuf,
        /// Odd primes; every odd prime divisor of `|G|` when omitted.
        #[arg(short = 'p', long = "prime", value_parser = parse_prime)]
        primes: Vec<u64>,
    },
    /// Relative Glauberman correspondence on declared or generated scenes.
    ThmE {
        group: PathBuf,
        /// A declared scene; all declared scenes plus generated ones when omitted.
        #[arg(long)]
        scene: Option<String>,
        #[arg(long, default_value_t = SCENES_PER_GROUP)]
        scenes: usize,
    },
    /// Canonical extension; every `theta` when `--theta` is omitted.
    ThmF {
        group: PathBuf,
        #[arg(long)]
        normal: String,
        #[arg(long)]
        theta: Option<usize>,
        #[arg(short = 'p', long = "prime", value_parser = parse_prime)]
        p: u64,
    },
    /// Existence of a p-rational p'-degree principal-block character over `nu`.
    #[command(name = "p-rational-ext")]
    PRationalExt {
        group: PathBuf,
        #[arg(long)]
        normal: String,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(short = 'p', long = "prime", value_parser = parse_prime)]
        p: u64,
    },
    /// Self-normalizing Sylow subgroups over products of simple groups.
    #[command(name = "self-normalizing")]
    SelfNormalizing {
        group: PathBuf,
        #[arg(long, default_value = "whole")]
        normal: String,
        #[arg(short = 'p', long = "prime", value_parser = parse_prime)]
        p: u64,
    },
    /// Search the group of order 216 for the cyclic-quotient configuration at p = 3.
    CyclicQuotient { group: PathBuf },
    /// The p = 2 statement with the automorphism fixing 2-power roots of unity.
    #[command(name = "sigma")]
    Sigma { group: PathBuf },
}

#[derive(Subcommand)]
enum CorpusAction {
    Run {
        dir: PathBuf,
        /// `odd`, `all`, or a comma-separated list of primes.
        #[arg(long, default_value = "all", value_parser = parse_prime_selection)]
        primes: PrimeSelection,
        /// Additional primes, combined with `--primes`.
        #[arg(short = 'p', long = "prime", value_parser = parse_prime)]
        extra: Vec<u64>,
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long, default_value_t = SCENES_PER_GROUP)]
        scenes: usize,
        /// Also sweep every normal subgroup and character for the extension statements.
        #[arg(long)]
        extensions: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Debug)]
enum PrimeSelection {
    All,
    Odd,
    List(Vec<u64>),
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

fn parse_prime_selection(s: &str) -> Result<PrimeSelection, String> {
    match s {
        "all" => Ok(PrimeSelection::All),
        "odd" => Ok(PrimeSelection::Odd),
        list => list
            .split(',')
            .map(|x| parse_prime(x.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map(PrimeSelection::List),
    }
}

/// A finished command: its JSON document, text rendering and whether a check failed.
struct Outcome {
    json: Value,
    text: String,
    failed: bool,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::Input(_)
        | Error::Domain(_)
        | Error::Hypothesis(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::NotIntegralAtP(_) => EXIT_INPUT,
        Error::Arithmetic(_) | Error::TheoremViolation { .. } => EXIT_FAIL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli.command) {
        Ok(outcome) => {
            if let Err(e) = emit(&out, &outcome) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            if outcome.failed {
                ExitCode::from(EXIT_FAIL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn emit(out: &Output, outcome: &Outcome) -> blockscope::Result<()> {
    let doc = serde_json::to_string_pretty(&outcome.json)?;
    if let Some(path) = &out.report {
        std::fs::write(path, format!("{doc}\n"))?;
    }
    let written = match out.format {
        Format::Text => write!(std::io::stdout().lock(), "{}", outcome.text),
        Format::Json if out.report.is_none() => writeln!(std::io::stdout().lock(), "{doc}"),
        Format::Json => Ok(()),
    };
    match written {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn reports_outcome(reports: Vec<VerificationReport>) -> blockscope::Result<Outcome> {
    let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
    let text = reports.iter().map(render::report).collect();
    Ok(Outcome {
        json: json!({ "schema": blockscope::io::REPORT_SCHEMA, "reports": reports }),
        text,
        failed,
    })
}

fn load(path: &PathBuf) -> blockscope::Result<LoadedGroup> {
    read_group_file(path)
}

fn run(command: Command) -> blockscope::Result<Outcome> {
    match command {
        Command::Table { input } => table(&input),
        Command::Blocks { group, primes } => {
            let loaded = load(&group)?;
            let t = compute_character_table(&loaded.group)?;
            let reports = primes
                .iter()
                .map(|&p| block_report(&t, &*block_distribution(&t, p)?))
                .collect::<blockscope::Result<Vec<_>>>()?;
            Ok(Outcome {
                text: reports.iter().map(render::blocks).collect(),
                json: json!({ "group": loaded.name, "blocks": reports }),
                failed: false,
            })
        }
        Command::Galois {
            group,
            multipliers,
            primes,
        } => galois(&group, multipliers, primes),
        Command::Glauberman { group, scene } => {
            let loaded = load(&group)?;
            let scene = loaded.scene(&scene)?;
            let res = relative_glauberman(&scene, &mut TableCache::new())?;
            let json = json!({
                "group": loaded.name,
                "C_order": res.c.order(),
                "pairs": res.pairs,
                "checks": res.checks,
            });
            Ok(Outcome {
                text: render::correspondence(&res),
                json,
                failed: false,
            })
        }
        Command::ExtendF {
            group,
            normal,
            theta,
            p,
        } => {
            let loaded = load(&group)?;
            let n = loaded.subgroup(&normal)?.clone();
            let ext = theorem_f_extension(&loaded.group, &n, theta, p, &mut TableCache::new())?;
            let chi = ext.table_g.irreducible(ext.chi);
            let json = json!({
                "group": loaded.name,
                "chi": ext.chi,
                "degree": chi.degree(),
                "values": chi.values(),
                "M_order": ext.m.order(),
                "eta": ext.eta,
                "p_rational_principal_extensions": ext.p_rational_principal_extensions,
            });
            Ok(Outcome {
                text: format!(
                    "canonical extension chi_{} of degree {} ({} p-rational principal-block extensions)\n",
                    ext.chi,
                    chi.degree(),
                    ext.p_rational_principal_extensions.len()
                ),
                json,
                failed: false,
            })
        }
        Command::Verify { check } => verify(check),
        Command::Corpus {
            action:
                CorpusAction::Run {
                    dir,
                    primes,
                    extra,
                    max_order,
                    scenes,
                    extensions,
                    threads,
                },
        } => {
            let primes = match primes {
                PrimeSelection::All if extra.is_empty() => PrimeFilter::All,
                PrimeSelection::All => PrimeFilter::Only(extra),
                PrimeSelection::Odd => PrimeFilter::Odd,
                PrimeSelection::List(mut list) => {
                    list.extend(extra);
                    PrimeFilter::Only(list)
                }
            };
            let opts = CorpusOptions {
                primes,
                max_order,
                scenes_per_group: scenes,
                extensions,
                threads,
            };
            let report = corpus_run(&dir, &opts)?;
            let failed = report.summary.fails() > 0 || report.summary.pin_mismatches > 0;
            Ok(Outcome {
                text: render::corpus(&report),
                json: serde_json::to_value(&report)?,
                failed,
            })
        }
    }
}

fn table(input: &PathBuf) -> blockscope::Result<Outcome> {
    let text = std::fs::read_to_string(input)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", input.display())))?;
    let t = if value.get("schema").and_then(Value::as_str) == Some(TABLE_SCHEMA) {
        import_table(&text)?
    } else {
        compute_character_table(&read_group_file(input)?.group)?
    };
    // canonical form, identical for a computed table and its re-import
    let json: Value = serde_json::from_str(&export_table(&t)?)?;
    debug_assert_eq!(json, serde_json::to_value(table_to_json(&t))?);
    Ok(Outcome {
        text: render::table(&t),
        json,
        failed: false,
    })
}

fn galois(group: &PathBuf, multipliers: Vec<i64>, primes: Vec<u64>) -> blockscope::Result<Outcome> {
    let loaded = load(group)?;
    let t = compute_character_table(&loaded.group)?;
    let n = t.exponent();
    let ks: Vec<i64> = if multipliers.is_empty() {
        (1..=n as i64)
            .filter(|&k| gcd(k as u64, n) == 1 && (k as u64) < n.max(2))
            .collect()
    } else {
        multipliers
    };
    let mut conjugates = Vec::new();
    let mut text = format!("exponent {n}\n");
    for k in ks {
        let perm = t.galois_permutation(k)?;
        text.push_str(&format!("k = {k}: {perm:?}\n"));
        conjugates.push(json!({ "k": k, "permutation": perm }));
    }
    let mut rational = serde_json::Map::new();
    for p in primes {
        let chars = p_rational_chars(&t, p)?;
        text.push_str(&format!("{p}-rational: {chars:?}\n"));
        rational.insert(p.to_string(), json!(chars));
    }
    Ok(Outcome {
        json: json!({ "group": loaded.name, "exponent": n, "conjugates": conjugates, "p_rational": rational }),
        text,
        failed: false,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn verify(check: Check) -> blockscope::Result<Outcome> {
    let mut cache = TableCache::new();
    let reports = match check {
        Check::ThmD { group, primes } => {
            let loaded = load(&group)?;
            let primes = if primes.is_empty() {
                prime_divisors(loaded.group.order())
                    .into_iter()
                    .filter(|&p| p != 2)
                    .collect()
            } else {
                primes
            };
            primes
                .into_iter()
                .map(|p| Ok(verify_theorem_d(&loaded.group, p, &mut cache)?.labelled(&loaded.name)))
                .collect::<blockscope::Result<Vec<_>>>()?
        }
        Check::ThmE { group, scene, scenes } => {
            let loaded = load(&group)?;
            let list: Vec<ActionScene> = match scene {
                Some(name) => vec![loaded.scene(&name)?],
                None => {
                    let mut v = loaded
                        .scenes
                        .iter()
                        .map(|s| loaded.resolve_scene(s))
                        .collect::<blockscope::Result<Vec<_>>>()?;
                    v.extend(generate_scenes(&loaded.group, scenes, &mut cache)?);
                    v
                }
            };
            list.iter()
                .map(|s| Ok(verify_theorem_e_scene(s, &mut cache)?.labelled(&loaded.name)))
                .collect::<blockscope::Result<Vec<_>>>()?
        }
        Check::ThmF {
            group,
            normal,
            theta,
            p,
        } => {
            let loaded = load(&group)?;
            let n = loaded.subgroup(&normal)?.clone();
            each_character(&n, theta, &mut cache)?
                .into_iter()
                .map(|i| Ok(verify_theorem_f_instance(&loaded.group, &n, i, p, &mut cache)?.labelled(&loaded.name)))
                .collect::<blockscope::Result<Vec<_>>>()?
        }
        Check::PRationalExt { group, normal, nu, p } => {
            let loaded = load(&group)?;
            let n = loaded.subgroup(&normal)?.clone();
            each_character(&n, nu, &mut cache)?
                .into_iter()
                .map(|i| Ok(verify_p_rational_extension(&loaded.group, &n, i, p, &mut cache)?.labelled(&loaded.name)))
                .collect::<blockscope::Result<Vec<_>>>()?
        }
        Check::SelfNormalizing { group, normal, p } => {
            let loaded = load(&group)?;
            let n = loaded.subgroup(&normal)?.clone();
            vec![verify_self_normalizing_sylow(&loaded.group, &n, p, &mut cache)?.labelled(&loaded.name)]
        }
        Check::CyclicQuotient { group } => {
            let loaded = load(&group)?;
            vec![reproduce_cyclic_quotient_counterexample(&loaded.group, &mut cache)?.labelled(&loaded.name)]
        }
        Check::Sigma { group } => {
            let loaded = load(&group)?;
            vec![verify_sigma_invariance(&loaded.group, &mut cache)?.labelled(&loaded.name)]
        }
    };
    reports_outcome(reports)
}

fn each_character(n: &PermGroup, chosen: Option<usize>, cache: &mut TableCache) -> blockscope::Result<Vec<usize>> {
    let r = cache.table(n)?.num_classes();
    match chosen {
        Some(i) if i < r => Ok(vec![i]),
        Some(i) => Err(Error::Input(format!(
            "the subgroup has only {r} irreducibles, not {}",
            i + 1
        ))),
        None => Ok((0..r).collect()),
    }
}
