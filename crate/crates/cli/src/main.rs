use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use semifree::fixed_point_data::extract_fpd;
use semifree::linalg::parse_rational;
use semifree_cli::render;
use semifree_cli::report::{render_slice, run_analysis, run_report, AnalysisReport, Report};
use semifree_cli::scenario::{bundled, parse_scenario, Analysis, FpdSource, Rational, Restriction, Scenario, BUNDLED};

#[derive(Parser)]
#[command(name = "semifree", version, about = "Exact computations for semi-free circle actions on toric 6-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Scenario file with the named polytopes, circles and matrices.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    polytope: Option<String>,
    #[arg(long)]
    circle: Option<String>,
    /// A rational such as 2, -2/5 or 0.1.
    #[arg(long, allow_hyphen_values = true)]
    level: Option<String>,
    /// Two rationals separated by a comma.
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analysis of a scenario.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Run a bundled fixture and report whether all of its assertions hold.
    Verify {
        /// Fixture name; `list` prints the available ones.
        fixture: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    CheckDelzant {
        #[command(flatten)]
        common: Common,
    },
    Restrict {
        #[command(flatten)]
        common: Common,
    },
    Slice {
        #[command(flatten)]
        common: Common,
    },
    DhReport {
        #[command(flatten)]
        common: Common,
    },
    Fpd {
        #[command(flatten)]
        common: Common,
    },
    /// Minimal exceptional classes of a blowup form, e.g. --form "9;4,4,1".
    Emin {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        form: Option<String>,
    },
    Eprime {
        #[command(flatten)]
        common: Common,
    },
    Wall {
        #[command(flatten)]
        common: Common,
    },
    /// Compare the fixed point data of two restrictions given as polytope:circle.
    CompareFpd {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        #[arg(long, default_value = "full")]
        mode: String,
    },
    Glue {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gluing: Option<String>,
    },
    Monotone {
        #[command(flatten)]
        common: Common,
    },
    NormalBundle {
        #[command(flatten)]
        common: Common,
    },
    /// Draw a reduced polygon, a planar polytope or a level diagram.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        /// Draw the critical levels and fixed components instead of a slice.
        #[arg(long)]
        diagram: bool,
    },
}

fn rational(s: &str) -> anyhow::Result<Rational> {
    Ok(Rational(parse_rational(s.trim()).map_err(|e| anyhow!("{e}"))?))
}

fn interval(s: &str) -> anyhow::Result<(Rational, Rational)> {
    let (a, b) = s.split_once(',').ok_or_else(|| anyhow!("expected an interval of the form a,b"))?;
    Ok((rational(a)?, rational(b)?))
}

fn restriction(s: &str) -> anyhow::Result<Restriction> {
    let (p, c) = s.split_once(':').ok_or_else(|| anyhow!("expected polytope:circle, got {s:?}"))?;
    Ok(Restriction { polytope: p.into(), circle: c.into() })
}

fn load(c: &Common) -> anyhow::Result<Scenario> {
    match &c.scenario {
        Some(p) => Ok(parse_scenario(p)?),
        None => Ok(Scenario::from_str("{}")?),
    }
}

impl Common {
    fn pc(&self) -> anyhow::Result<Option<(String, String)>> {
        match (&self.polytope, &self.circle) {
            (Some(p), Some(c)) => Ok(Some((p.clone(), c.clone()))),
            (None, None) => Ok(None),
            _ => bail!("--polytope and --circle go together"),
        }
    }

    fn level(&self) -> anyhow::Result<Rational> {
        rational(self.level.as_deref().ok_or_else(|| anyhow!("--level is required"))?)
    }
}

/// The analysis requested on the command line, or `None` to run the scenario's
/// own analyses of this kind.
fn adhoc(cmd: &Command) -> anyhow::Result<Option<Analysis>> {
    let a = match cmd {
        Command::CheckDelzant { common } => common.polytope.clone().map(|polytope| Analysis::CheckDelzant { polytope, expect_ok: None }),
        Command::Restrict { common } => {
            common.pc()?.map(|(polytope, circle)| Analysis::Restrict { polytope, circle, expect_semifree: None })
        }
        Command::Slice { common } => match common.pc()? {
            Some((polytope, circle)) => Some(Analysis::Slice {
                polytope,
                circle,
                level: common.level.as_deref().map(rational).transpose()?,
                interval: common.interval.as_deref().map(interval).transpose()?,
            }),
            None => None,
        },
        Command::DhReport { common } => common.pc()?.map(|(polytope, circle)| Analysis::DhReport { polytope, circle }),
        Command::Fpd { common } => common.pc()?.map(|(polytope, circle)| Analysis::Fpd { polytope, circle }),
        Command::Emin { form, .. } => match form {
            Some(f) => {
                let (a, d) = f.split_once(';').ok_or_else(|| anyhow!("expected a form like \"9;4,4,1\""))?;
                let delta = d.split(',').filter(|x| !x.trim().is_empty()).map(rational).collect::<anyhow::Result<_>>()?;
                Some(Analysis::Emin { alpha: rational(a)?, delta })
            }
            None => None,
        },
        Command::Eprime { common } => match common.pc()? {
            Some((polytope, circle)) => Some(Analysis::Eprime { polytope, circle, level: common.level()? }),
            None => None,
        },
        Command::Wall { common } => match common.pc()? {
            Some((polytope, circle)) => Some(Analysis::Wall { polytope, circle, level: common.level()? }),
            None => None,
        },
        Command::CompareFpd { left, right, mode, .. } => match (left, right) {
            (Some(l), Some(r)) => Some(Analysis::CompareFpd {
                left: FpdSource::Direct(restriction(l)?),
                right: FpdSource::Direct(restriction(r)?),
                mode: mode.clone(),
                expect: None,
            }),
            (None, None) => None,
            _ => bail!("--left and --right go together"),
        },
        Command::Glue { gluing, .. } => gluing.clone().map(|gluing| Analysis::Glue { gluing, compare: None, expect_equal: None }),
        Command::Monotone { common } => {
            common.pc()?.map(|(polytope, circle)| Analysis::Monotone { polytope, circle, expect_ok: None })
        }
        Command::NormalBundle { common } => common.pc()?.map(|(polytope, circle)| Analysis::NormalBundle { polytope, circle }),
        _ => None,
    };
    Ok(a)
}

fn kind(cmd: &Command) -> &'static str {
    match cmd {
        Command::CheckDelzant { .. } => "check-delzant",
        Command::Restrict { .. } => "restrict",
        Command::Slice { .. } => "slice",
        Command::DhReport { .. } => "dh-report",
        Command::Fpd { .. } => "fpd",
        Command::Emin { .. } => "emin",
        Command::Eprime { .. } => "eprime",
        Command::Wall { .. } => "wall",
        Command::CompareFpd { .. } => "compare-fpd",
        Command::Glue { .. } => "glue",
        Command::Monotone { .. } => "monotone",
        Command::NormalBundle { .. } => "normal-bundle",
        Command::Render { .. } => "render",
        Command::Run { .. } | Command::Verify { .. } => "",
    }
}

fn common(cmd: &Command) -> Common {
    match cmd {
        Command::Run { common }
        | Command::CheckDelzant { common }
        | Command::Restrict { common }
        | Command::Slice { common }
        | Command::DhReport { common }
        | Command::Fpd { common }
        | Command::Emin { common, .. }
        | Command::Eprime { common }
        | Command::Wall { common }
        | Command::CompareFpd { common, .. }
        | Command::Glue { common, .. }
        | Command::Monotone { common }
        | Command::NormalBundle { common }
        | Command::Render { common, .. } => common.clone(),
        Command::Verify { output, .. } => Common { output: output.clone(), ..Common::default() },
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(report: &Report, out: &Option<PathBuf>) -> anyhow::Result<ExitCode> {
    emit(out, &report.to_json())?;
    for f in report.failures() {
        eprintln!("FAILED {f}");
    }
    Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn render_cmd(c: &Common, format: Format, diagram: bool) -> anyhow::Result<ExitCode> {
    let s = load(c)?;
    let svg = if diagram {
        let (p, xi) = c.pc()?.ok_or_else(|| anyhow!("--polytope and --circle are required"))?;
        let d = extract_fpd(&s.polytope(&p)?, &s.circle(&xi)?)?;
        render::render_level_diagram(&d, &format!("critical levels of {p}"))?
    } else if let (Some(p), Some(xi)) = (&c.polytope, &c.circle) {
        let level = c.level()?;
        render_slice(&s.polytope(p)?, &s.circle(xi)?, &level.0, &format!("{p} at t = {}", level.0))?
    } else if let Some(p) = &c.polytope {
        render::render_planar(&s.polytope(p)?, p)?
    } else {
        let reports: Vec<AnalysisReport> = s
            .analyses
            .iter()
            .enumerate()
            .filter(|(_, a)| a.kind() == "render")
            .map(|(i, a)| run_analysis(&s, i, a))
            .collect();
        let report = Report { ok: reports.iter().all(|r| r.ok), description: s.description.clone(), analyses: reports };
        return finish(&report, &c.output);
    };
    match format {
        Format::Svg => emit(&c.output, &svg)?,
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&serde_json::json!({ "svg": svg }))?;
            text.push('\n');
            emit(&c.output, &text)?
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let c = common(&cli.command);
    match &cli.command {
        Command::Verify { fixture, output } => {
            if fixture == "list" {
                for (name, _) in BUNDLED {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let s = bundled(fixture).ok_or_else(|| anyhow!("no bundled fixture named {fixture:?}; try `verify list`"))?;
            let report = run_report(&s);
            if output.is_some() {
                emit(output, &report.to_json())?;
            }
            for a in &report.analyses {
                println!("{} #{} {}", if a.ok { "ok  " } else { "FAIL" }, a.index, a.kind);
            }
            for f in report.failures() {
                eprintln!("FAILED {f}");
            }
            println!("{}: {}", fixture, if report.ok { "verified" } else { "failed" });
            Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Run { .. } => finish(&run_report(&load(&c)?), &c.output),
        Command::Render { format, diagram, .. } => render_cmd(&c, *format, *diagram),
        cmd => {
            let mut s = load(&c)?;
            match adhoc(cmd)? {
                Some(a) => {
                    s.analyses = vec![a];
                    s.validate()?;
                }
                None => {
                    let k = kind(cmd);
                    s.analyses.retain(|a| a.kind() == k);
                    if s.analyses.is_empty() {
                        bail!("nothing to do: pass the inputs on the command line or a scenario with {k} analyses");
                    }
                }
            }
            finish(&run_report(&s), &c.output)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
