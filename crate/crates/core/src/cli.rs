//! Command-line front end.
//!
//! Exit codes: 0 success or pass, 1 failed check or non-existence verdict,
//! 2 usage error, 3 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::export::{self, format_f64, GraticuleSpec, MeshSpec};
use crate::profile::{DomainInterval, GeneralProfile, QuadraticProfile, SurfacePoint};
use crate::projection::{Branch, Projection, ProjectionParams, Theta0Branch};
use crate::verifier::{self, ClassifierConfig, Grid, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "meridian-map",
    version,
    about = "Meridian-straightening projections of surfaces of revolution f^2 = c u^2 + d u + k"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project one surface point and print `x y`.
    Project {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        u: f64,
    },
    /// Run every residual check; exit 0 iff all pass.
    Verify {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        map: MapArgs,
        /// Grid size as NTxNU.
        #[arg(long, default_value = "50x50")]
        grid: GridSize,
        #[arg(long, default_value_t = verifier::DEFAULT_FD_STEP)]
        fd_step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// u interval as LO,HI (default: a working interval beside u*).
        #[arg(long, allow_hyphen_values = true)]
        u_range: Option<Range>,
        /// Shift θ₀ away from its admissible value (fault injection).
        #[arg(
            long,
            hide = true,
            default_value_t = 0.0,
            allow_negative_numbers = true
        )]
        theta0_offset: f64,
    },
    /// Decide whether a profile admits such a projection; exit 0 iff it does.
    Classify {
        /// sphere | pseudosphere | quadratic:C,D,K | csv:PATH
        #[arg(long, allow_hyphen_values = true)]
        profile: ProfileSource,
        #[arg(long, default_value_t = verifier::CLASSIFIER_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = verifier::CLASSIFIER_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = verifier::CLASSIFIER_FD_STEP)]
        fd_step: f64,
        /// Override the domain as LO,HI (not for csv profiles).
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<Range>,
    },
    /// Write the projected meridians and parallels as SVG.
    ExportGraticule {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        map: MapArgs,
        #[arg(
            long,
            allow_hyphen_values = true,
            default_value = "0,3.141592653589793"
        )]
        t_range: Range,
        #[arg(long, allow_hyphen_values = true)]
        u_range: Option<Range>,
        #[arg(long, default_value_t = 9)]
        meridians: usize,
        #[arg(long, default_value_t = 5)]
        parallels: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the surface itself as a Wavefront OBJ quad mesh.
    ExportMesh {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 64)]
        t_divisions: usize,
        #[arg(long, default_value_t = 32)]
        u_divisions: usize,
        #[arg(long, allow_hyphen_values = true)]
        u_range: Option<Range>,
        /// Where g(u) = 0 (default: the low end of the u range).
        #[arg(long, allow_negative_numbers = true)]
        u_ref: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write `t,u,x,y` rows over a grid as CSV.
    Table {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        map: MapArgs,
        #[arg(
            long,
            allow_hyphen_values = true,
            default_value = "0,3.141592653589793"
        )]
        t_range: Range,
        #[arg(long, allow_hyphen_values = true)]
        u_range: Option<Range>,
        #[arg(long, default_value = "10x10")]
        grid: GridSize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    d: f64,
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
}

impl ProfileArgs {
    fn build(&self) -> Result<QuadraticProfile, Error> {
        QuadraticProfile::new(self.c, self.d, self.k)
    }
}

#[derive(Debug, Args)]
struct MapArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c0: f64,
    #[arg(long, value_enum, default_value_t = Theta0Choice::Principal)]
    theta0_branch: Theta0Choice,
    #[arg(long = "case", value_enum, default_value_t = CaseChoice::A)]
    case: CaseChoice,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t_base: f64,
}

impl MapArgs {
    fn build(&self, p: QuadraticProfile) -> Projection {
        let branch = match self.case {
            CaseChoice::A => Branch::CaseA,
            CaseChoice::B => Branch::CaseB,
        };
        let theta0 = match self.theta0_branch {
            Theta0Choice::Principal => Theta0Branch::Principal,
            Theta0Choice::Mirror => Theta0Branch::Mirror,
        };
        Projection::new(
            p,
            ProjectionParams::with_theta0_branch(&p, self.c0, branch, self.t_base, theta0),
        )
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Theta0Choice {
    Principal,
    Mirror,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseChoice {
    A,
    B,
}

#[derive(Debug, Clone, Copy)]
struct GridSize(usize, usize);

impl FromStr for GridSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected NTxNU, got {s:?}"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("grid sizes must be positive integers, got {s:?}"))
        };
        Ok(GridSize(parse(a)?, parse(b)?))
    }
}

#[derive(Debug, Clone, Copy)]
struct Range(f64, f64);

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: {v:?}"))
        };
        let (lo, hi) = (parse(a)?, parse(b)?);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("need finite LO < HI, got {s:?}"));
        }
        Ok(Range(lo, hi))
    }
}

impl Range {
    fn interval(self) -> DomainInterval {
        DomainInterval {
            lo: self.0,
            hi: self.1,
        }
    }
}

#[derive(Debug, Clone)]
enum ProfileSource {
    Builtin(String),
    Quadratic(f64, f64, f64),
    Csv(PathBuf),
}

impl FromStr for ProfileSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("quadratic:") {
            let v: Vec<f64> = rest
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("expected quadratic:C,D,K, got {s:?}"))?;
            return match v[..] {
                [c, d, k] => Ok(ProfileSource::Quadratic(c, d, k)),
                _ => Err(format!("expected quadratic:C,D,K, got {s:?}")),
            };
        }
        if let Some(path) = s.strip_prefix("csv:") {
            return Ok(ProfileSource::Csv(PathBuf::from(path)));
        }
        match s {
            "sphere" | "pseudosphere" => Ok(ProfileSource::Builtin(s.to_string())),
            _ => Err(format!(
                "unknown profile {s:?} (sphere, pseudosphere, quadratic:C,D,K, csv:PATH)"
            )),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::NoConvergence { .. }
        | Error::CollinearityViolation { .. }
        | Error::QuadratureTolerance { .. } => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing to the given streams. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().next().unwrap_or("error: invalid usage");
                    let _ = writeln!(err, "{first}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs against the process's stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    let io = |source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match command {
        Command::Project { profile, map, t, u } => {
            let proj = map.build(profile.build()?);
            let q = proj.project(SurfacePoint::new(t, u));
            writeln!(out, "{} {}", format_f64(q.x), format_f64(q.y)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            profile,
            map,
            grid,
            fd_step,
            seed,
            u_range,
            theta0_offset,
        } => {
            let mut proj = map.build(profile.build()?);
            proj.params = proj.params.with_theta0_offset(theta0_offset);
            let config = SuiteConfig {
                nt: grid.0,
                nu: grid.1,
                fd_step,
                seed,
                u_range: u_range.map(Range::interval),
                ..SuiteConfig::default()
            };
            let outcomes = verifier::verify_projection(&proj, &config)?;
            for o in &outcomes {
                writeln!(out, "{o}").map_err(io)?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            writeln!(out, "{} checks, {} failed", outcomes.len(), failed).map_err(io)?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Classify {
            profile,
            threshold,
            samples,
            fd_step,
            domain,
        } => {
            let gp = match profile {
                ProfileSource::Csv(path) => {
                    if domain.is_some() {
                        return Err(Error::Invalid(
                            "--domain does not apply to csv profiles".into(),
                        ));
                    }
                    export::read_profile_csv(&path)?
                }
                ProfileSource::Builtin(name) => {
                    let gp = GeneralProfile::builtin(&name).expect("validated by the parser");
                    match domain {
                        None => gp,
                        Some(r) => {
                            let f = move |u: f64| gp.eval(u);
                            GeneralProfile::from_fn(name, r.interval(), f)?
                        }
                    }
                }
                ProfileSource::Quadratic(c, d, k) => {
                    // Inadmissible coefficients are still classified; they
                    // simply fail the fit.
                    let dom = match (domain, QuadraticProfile::new(c, d, k)) {
                        (Some(r), _) => r.interval(),
                        (None, Ok(p)) => p.default_domain(),
                        (None, Err(e)) => {
                            return Err(Error::Invalid(format!("{e}; pass --domain LO,HI")))
                        }
                    };
                    GeneralProfile::from_fn(
                        format!("quadratic:{c},{d},{k}"),
                        dom,
                        move |u: f64| ((c * u + d) * u + k).sqrt(),
                    )?
                }
            };
            let verdict = verifier::existence_classifier(
                &gp,
                ClassifierConfig {
                    n_samples: samples,
                    fd_step,
                    threshold,
                },
            )?;
            writeln!(out, "profile: {} on {}", gp.name(), gp.domain()).map_err(io)?;
            writeln!(out, "{verdict}").map_err(io)?;
            Ok(if verdict.exists { EXIT_OK } else { EXIT_FAILED })
        }
        Command::ExportGraticule {
            profile,
            map,
            t_range,
            u_range,
            meridians,
            parallels,
            samples,
            output,
        } => {
            let proj = map.build(profile.build()?);
            let spec = GraticuleSpec {
                t_range: (t_range.0, t_range.1),
                u_range: u_range.map_or_else(|| proj.profile.default_domain(), Range::interval),
                n_meridians: meridians,
                n_parallels: parallels,
                samples_per_curve: samples,
            };
            let s = export::export_graticule_svg(&proj, &spec, &output)?;
            writeln!(
                out,
                "wrote {}: {} meridians, {} parallels, max meridian deviation {:e}",
                output.display(),
                s.meridians,
                s.parallels,
                s.max_meridian_deviation
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::ExportMesh {
            profile,
            t_divisions,
            u_divisions,
            u_range,
            u_ref,
            output,
        } => {
            let p = profile.build()?;
            let u_range = u_range.map_or_else(|| default_mesh_range(&p), Range::interval);
            let spec = MeshSpec {
                t_divisions,
                u_divisions,
                u_range,
                u_ref: u_ref.unwrap_or(u_range.lo),
            };
            let s = export::export_mesh_obj(&p, &spec, &output)?;
            writeln!(
                out,
                "wrote {}: {} vertices, {} faces, max radius error {:e}",
                output.display(),
                s.vertices,
                s.faces,
                s.max_radius_error
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Table {
            profile,
            map,
            t_range,
            u_range,
            grid,
            output,
        } => {
            let proj = map.build(profile.build()?);
            let u_range = u_range.map_or_else(|| proj.profile.default_domain(), Range::interval);
            let u_range = proj.profile.admissible_interval(u_range)?;
            let grid = Grid::new((t_range.0, t_range.1), u_range, grid.0, grid.1)?;
            let rows = export::sample_table_csv(&proj, &grid.points(), &output)?;
            writeln!(out, "wrote {}: {} rows", output.display(), rows).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// `[u* + 0.05, u* + 2]` when every `u` is feasible, otherwise the default
/// working interval.
fn default_mesh_range(p: &QuadraticProfile) -> DomainInterval {
    match p.feasible_band() {
        None => {
            let s = p.singular_abscissa();
            DomainInterval {
                lo: s + 0.05,
                hi: s + 2.0,
            }
        }
        Some(_) => p.default_domain(),
    }
}
