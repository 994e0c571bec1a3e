//! Command-line front end for the Belyi covering census.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 resource budget
//! exceeded, 4 empty result (a dessin request with no connected classes).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use belyi_core::census::{
    run_range, verify_degree, verify_scheme, CensusConfig, OutputFormat, ResultStore,
};
use belyi_core::character::CharacterTable;
use belyi_core::dessin::{dessin_from_class, export_dot};
use belyi_core::enumerate::{class_mass_sum, enumerate_classes, EnumerationLimits, HARD_MAX_DEGREE};
use belyi_core::mass::frobenius_mass;
use belyi_core::partition::RamificationScheme;
use belyi_core::Error;

/// Default degree cap; matches the census scope. `--allow-large` raises it
/// to the enumeration hard limit.
const DEFAULT_MAX_DEGREE: u32 = 12;

const ENV_CACHE_DIR: &str = "BELYI_CACHE_DIR";

const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_EMPTY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "belyi",
    about = "Census of Belyi coverings by ramification scheme",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Worker threads (default: all cores). Never changes output bytes.
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,

    /// Character-table cache directory (default: $BELYI_CACHE_DIR if set,
    /// otherwise no cache).
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,

    /// Permit degrees above 12, up to the enumeration limit of 16.
    /// Expect long runtimes.
    #[arg(long)]
    allow_large: bool,

    /// Conjugacy classes smaller than this are enumerated by plain
    /// iteration instead of the pruned backtracking generator.
    #[arg(long, value_name = "N", default_value_t = 4096)]
    plain_threshold: u64,
}

impl CommonOpts {
    fn max_degree(&self) -> u32 {
        if self.allow_large {
            HARD_MAX_DEGREE
        } else {
            DEFAULT_MAX_DEGREE
        }
    }

    fn census_config(&self) -> CensusConfig {
        let cache_dir = self
            .cache
            .clone()
            .or_else(|| std::env::var_os(ENV_CACHE_DIR).map(PathBuf::from));
        CensusConfig {
            cache_dir,
            limits: EnumerationLimits {
                max_degree: self.max_degree(),
                plain_threshold: self.plain_threshold,
                ..EnumerationLimits::default()
            },
        }
    }

    fn install_thread_pool(&self) -> Result<(), String> {
        if let Some(jobs) = self.jobs {
            if jobs < 1 {
                return Err("--jobs must be at least 1".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global()
                .map_err(|e| e.to_string())?;
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the census for a degree or degree range; writes one
    /// format-versioned file per degree and prints a summary line each.
    /// Completed degrees found in the output directory are not recomputed.
    Census {
        /// Single degree to examine.
        #[arg(long, value_name = "N", conflicts_with = "degrees")]
        degree: Option<u32>,

        /// Inclusive degree range, e.g. 1..12.
        #[arg(long, value_name = "A..B")]
        degrees: Option<String>,

        /// Genus of the covering surface (1 = elliptic).
        #[arg(long, value_name = "G")]
        genus: u32,

        /// Output format: csv or json.
        #[arg(long, value_name = "FMT", default_value = "csv")]
        format: String,

        /// Output directory for per-degree census files.
        #[arg(long, value_name = "PATH", default_value = "belyi-out")]
        out: PathBuf,

        /// Re-derive the mass identity and Euler-genus checks for every
        /// scheme before emitting results (slow).
        #[arg(long)]
        verify: bool,

        #[command(flatten)]
        common: CommonOpts,
    },

    /// Classify a single scheme: genus, masses, connected classes with
    /// automorphism orders and representatives, exceptional verdict.
    Scheme {
        /// Pipe-separated partitions, e.g. "6,2|6,1,1|4,2,2".
        scheme: String,

        /// Run the consistency suites for this scheme first.
        #[arg(long)]
        verify: bool,

        /// Also write one DOT file per connected class into this directory.
        #[arg(long, value_name = "DIR")]
        emit_dot: Option<PathBuf>,

        #[command(flatten)]
        common: CommonOpts,
    },

    /// Export the dessins of a scheme's connected classes as DOT files.
    Dessin {
        /// Pipe-separated partitions, e.g. "1,5|3,3|3,3".
        scheme: String,

        /// Output directory for the DOT files.
        #[arg(long, value_name = "DIR", default_value = "dessins")]
        emit_dot: PathBuf,

        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    // Die quietly when stdout is closed early (e.g. piped into head).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Census {
            degree,
            degrees,
            genus,
            format,
            out,
            verify,
            common,
        } => cmd_census(degree, degrees, genus, &format, &out, verify, &common),
        Command::Scheme {
            scheme,
            verify,
            emit_dot,
            common,
        } => cmd_scheme(&scheme, verify, emit_dot.as_deref(), &common),
        Command::Dessin {
            scheme,
            emit_dot,
            common,
        } => cmd_dessin(&scheme, &emit_dot, &common),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::DegreeMismatch { .. } => EXIT_USAGE,
        Error::Budget { .. } | Error::OracleBudget { .. } => EXIT_RESOURCE,
        _ => 1,
    }
}

fn usage_error(message: &str) -> Result<ExitCode, Error> {
    eprintln!("error: {message}");
    Ok(ExitCode::from(EXIT_USAGE))
}

fn parse_degree_range(text: &str) -> Option<(u32, u32)> {
    let (a, b) = text.split_once("..")?;
    let lo: u32 = a.parse().ok()?;
    let hi: u32 = b.parse().ok()?;
    Some((lo, hi))
}

fn cmd_census(
    degree: Option<u32>,
    degrees: Option<String>,
    genus: u32,
    format: &str,
    out: &std::path::Path,
    verify: bool,
    common: &CommonOpts,
) -> Result<ExitCode, Error> {
    let (n_min, n_max) = match (degree, degrees) {
        (Some(n), None) => (n, n),
        (None, Some(range)) => match parse_degree_range(&range) {
            Some(pair) => pair,
            None => return usage_error(&format!("bad degree range {range:?}, expected A..B")),
        },
        (None, None) => return usage_error("one of --degree or --degrees is required"),
        (Some(_), Some(_)) => unreachable!("clap forbids both"),
    };
    if n_min < 1 || n_min > n_max {
        return usage_error("degree range must satisfy 1 <= A <= B");
    }
    let cap = common.max_degree();
    if n_max > cap {
        if common.allow_large {
            return usage_error(&format!("degree {n_max} exceeds the enumeration limit {cap}"));
        }
        return usage_error(&format!(
            "degree {n_max} exceeds the default cap {cap}; pass --allow-large to proceed"
        ));
    }
    if common.allow_large && n_max > DEFAULT_MAX_DEGREE {
        log::warn!("degrees above {DEFAULT_MAX_DEGREE} can take very long; proceeding (--allow-large)");
    }
    let format: OutputFormat = match format.parse() {
        Ok(f) => f,
        Err(_) => return usage_error(&format!("unknown format {format:?}, expected csv or json")),
    };
    common.install_thread_pool().map_err(Error::Parse)?;
    let config = common.census_config();
    if verify {
        for n in n_min..=n_max {
            let stats = verify_degree(n, genus, &config)?;
            println!(
                "verified degree {n} genus {genus}: {} schemes, {} classes",
                stats.schemes, stats.classes
            );
        }
    }
    let store = ResultStore::new(out, format)?;
    let summaries = run_range(n_min, n_max, genus, &store, &config)?;
    for summary in &summaries {
        println!("{summary}");
    }
    let total_exceptional: usize = summaries.iter().map(|s| s.exceptional).sum();
    println!(
        "total: {} degrees, {} exceptional schemes, files in {}",
        summaries.len(),
        total_exceptional,
        store.dir().display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_scheme(
    scheme: &str,
    verify: bool,
    emit_dot: Option<&std::path::Path>,
    common: &CommonOpts,
) -> Result<ExitCode, Error> {
    let scheme: RamificationScheme = scheme.parse()?;
    common.install_thread_pool().map_err(Error::Parse)?;
    let config = common.census_config();
    let n = scheme.degree();
    println!("scheme: {scheme}");
    println!("degree: {n}");
    match scheme.genus() {
        Some(g) => println!("genus: {g}"),
        None => println!("genus: impossible"),
    }
    let table = CharacterTable::load_or_compute(n, config.cache_dir.as_deref());
    if verify {
        verify_scheme(&scheme, &table, &config.limits)?;
        println!("verify: mass identity and Euler genus hold");
    }
    let total = frobenius_mass(&scheme, &table);
    println!("total mass: {total}");
    let classes = enumerate_classes(&scheme, &config.limits)?;
    let connected: Vec<_> = classes.iter().filter(|c| c.connected()).collect();
    println!("connected mass: {}", class_mass_sum(&classes, true));
    println!(
        "classes: {} connected, {} disconnected",
        connected.len(),
        classes.len() - connected.len()
    );
    if classes.is_empty() {
        let parity = scheme.lambdas().iter().map(|l| l.sign()).product::<i64>();
        if parity == -1 {
            println!("no coverings (parity obstruction)");
        } else {
            println!("no coverings");
        }
    }
    for (i, class) in connected.iter().enumerate() {
        println!(
            "  {}: aut={} monodromy {}|{}|{}",
            i + 1,
            class.aut_order(),
            class.g0(),
            class.g1(),
            class.g_inf()
        );
    }
    println!(
        "exceptional: {}",
        if connected.len() == 1 { "yes" } else { "no" }
    );
    if let Some(dir) = emit_dot {
        let written = write_dessins(&scheme, &connected, dir)?;
        println!("wrote {written} dessin files to {}", dir.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dessin(
    scheme: &str,
    emit_dot: &std::path::Path,
    common: &CommonOpts,
) -> Result<ExitCode, Error> {
    let scheme: RamificationScheme = scheme.parse()?;
    common.install_thread_pool().map_err(Error::Parse)?;
    let config = common.census_config();
    let classes = enumerate_classes(&scheme, &config.limits)?;
    let connected: Vec<_> = classes.iter().filter(|c| c.connected()).collect();
    if connected.is_empty() {
        eprintln!("no connected covering classes for scheme {scheme}");
        return Ok(ExitCode::from(EXIT_EMPTY));
    }
    let written = write_dessins(&scheme, &connected, emit_dot)?;
    println!("wrote {written} dessin files to {}", emit_dot.display());
    Ok(ExitCode::SUCCESS)
}

/// Writes one DOT file per connected class, named
/// `d{degree}_{scheme}_{index}.dot` with `|` replaced by `-` in the scheme.
fn write_dessins(
    scheme: &RamificationScheme,
    connected: &[&belyi_core::CoveringClass],
    dir: &std::path::Path,
) -> Result<usize, Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tag = scheme.to_string().replace('|', "-");
    for (i, class) in connected.iter().enumerate() {
        let dessin = dessin_from_class(class)?;
        let path = dir.join(format!("d{}_{}_{}.dot", scheme.degree(), tag, i + 1));
        std::fs::write(&path, export_dot(&dessin)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(connected.len())
}
