//! The `ctop` command line: membership, inclusion, conversions, continuity
//! checks, enumeration and a small gallery of worked constructions.
//!
//! Output is line records `stage<TAB>kind<TAB>payload`. Exit codes: 0 for
//! YES or a passing check, 1 for usage and parse errors, 2 for NOT_YET, 3
//! for NO or a confirmed violation.

mod demo;
pub mod literal;

use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::kernel::dovetail::enumerate;
use crate::kernel::{Fuel, Nat, Registry};
use crate::metric::{
    ball, ball_formal_incl, balls_spreen_basis, cauchy_completion, default_dense, exact_radius, radius_approx,
    BallName, DenseSequence, ExactKind, InclusionMode, MetricSpace,
};
use crate::numberings::{ce_finite, Decision, Verdict};
use crate::reals::{format_rational, left_term, parse_rational};
use crate::topology::continuity::{map_realizer, modulus_program, MapId, ModulusCheck, ModulusConfig, ModulusId};
use crate::topology::{
    ball_nogina_open, basic_as_open, interval_open, lacombe_to_spreen, metric_radius, metric_to_spreen,
    nogina_to_lacombe, spreen_basis_to_lacombe_basis, spreen_intersect, spreen_member_counted, spreen_stream,
    spreen_to_lacombe, spreen_to_metric, spreen_union_of, LacombeOpenName, MetricOpenName, SpreenBasis,
    SpreenOpenName,
};

use literal::{parse_ball, parse_lacombe, parse_open, parse_point, BallLit, OpenLit};

#[derive(Parser, Debug)]
#[command(name = "ctop", version, about = "Fuel-bounded computable topology on exact metric spaces")]
pub struct Cli {
    /// rationals, unit-interval, unit-square, discrete, reals,
    /// parity-oracle:<id> or parity-line:<id> (ids: squares, primes, all, none)
    #[arg(long, global = true, default_value = "rationals")]
    space: String,
    /// Step budget for every semi-decision and enumeration.
    #[arg(long, global = true, default_value_t = 100_000)]
    fuel: u64,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    mode: Mode,
    /// Dense sequence of the space, for conversions that need one.
    #[arg(long, global = true, value_enum, num_args = 0..=1, default_missing_value = "standard")]
    dense: Option<Dense>,
    #[arg(long, global = true, value_enum, default_value = "records")]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exact,
    Semidecide,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dense {
    Standard,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Output {
    Records,
    Human,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    LacombeToSpreen,
    SpreenToLacombe,
    NoginaToLacombe,
    MetricToSpreen,
    SpreenToMetric,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Semi-decide membership of a point in an open.
    Member {
        #[arg(long)]
        open: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Formal inclusion of two balls.
    Incl {
        #[arg(allow_hyphen_values = true)]
        ball1: String,
        #[arg(allow_hyphen_values = true)]
        ball2: String,
    },
    /// Convert between open-set representations and stream the result.
    Convert {
        #[arg(long, value_enum)]
        direction: Direction,
        /// An open literal, a ball (nogina-to-lacombe) or a list `[b|b|…]`
        /// (lacombe-to-spreen).
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Sample a continuity modulus for a map on a line space.
    Modulus {
        /// identity, double, half or square
        #[arg(long)]
        function: String,
        /// eps, half-eps or square-local
        #[arg(long)]
        phi: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-10")]
        lo: String,
        #[arg(long, allow_hyphen_values = true, default_value = "10")]
        hi: String,
        #[arg(long)]
        codomain: Option<String>,
    },
    /// Run a scripted construction and print its checked facts.
    Demo { name: String },
    /// Stream the basic names of an open at a point, or all of them.
    Enumerate {
        #[arg(long)]
        open: String,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

/// Violations printed individually; the summary counts all of them.
const MAX_WITNESSES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Yes = 0,
    Usage = 1,
    NotYet = 2,
    No = 3,
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Yes => Status::Yes,
            Verdict::NotYet => Status::NotYet,
        }
    }
}

impl From<Decision> for Status {
    fn from(d: Decision) -> Self {
        match d {
            Decision::Yes => Status::Yes,
            Decision::No => Status::No,
            Decision::NotYet => Status::NotYet,
        }
    }
}

pub(crate) struct Records<'a> {
    out: &'a mut dyn Write,
    human: bool,
}

impl Records<'_> {
    pub(crate) fn emit(&mut self, stage: impl std::fmt::Display, kind: &str, payload: impl std::fmt::Display) -> Result<()> {
        let line = if self.human {
            format!("[{stage:>4}] {kind:<12} {payload}")
        } else {
            format!("{stage}\t{kind}\t{payload}")
        };
        writeln!(self.out, "{line}").map_err(|e| Error::Invalid(format!("write failed: {e}")))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Status::Usage as i32 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut rec = Records { out, human: matches!(cli.output, Output::Human) };
    match execute(&cli, &mut rec) {
        Ok(s) => s as i32,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Status::Usage as i32
        }
    }
}

struct Ctx {
    reg: Registry,
    space: Arc<MetricSpace>,
    kind: ExactKind,
    basis: SpreenBasis,
    fuel: Fuel,
}

impl Ctx {
    fn new(cli: &Cli) -> Result<Self> {
        let reg = Registry::new();
        let space = MetricSpace::by_handle(&reg, &cli.space)?;
        Self::with_space(reg, space, Fuel(cli.fuel))
    }

    fn with_space(reg: Registry, space: Arc<MetricSpace>, fuel: Fuel) -> Result<Self> {
        let kind = space
            .exact_kind()
            .ok_or_else(|| Error::NotExact(format!("{} has no literal syntax", space.handle.0)))?;
        let basis = balls_spreen_basis(&reg, &space);
        Ok(Ctx { reg, space, kind, basis, fuel })
    }

    fn point(&self, text: &str) -> Result<Nat> {
        let p = parse_point(text, self.kind)?;
        self.space.point_name(&self.reg, &p).ok_or_else(|| Error::Invalid(format!("{p} has no name")))
    }

    fn ball(&self, b: &BallLit) -> Result<BallName> {
        ball(&self.reg, &self.space, &b.center, b.radius.clone())
    }

    fn open(&self, lit: &OpenLit) -> Result<SpreenOpenName> {
        Ok(match lit {
            OpenLit::Basic(b) => basic_as_open(&self.reg, &self.basis, &self.ball(b)?.0),
            OpenLit::Interval(lo, hi) => metric_to_spreen(&self.reg, &interval_open(&self.reg, &self.space, lo, hi)?)?,
            OpenLit::Union(parts) => {
                let parts = parts.iter().map(|p| self.open(p)).collect::<Result<Vec<_>>>()?;
                spreen_union_of(&self.reg, &parts)
            }
            OpenLit::Inter(a, b) => spreen_intersect(&self.reg, &self.basis, &self.open(a)?, &self.open(b)?)?,
        })
    }

    fn metric_open(&self, lit: &OpenLit) -> Result<MetricOpenName> {
        match lit {
            OpenLit::Interval(lo, hi) => interval_open(&self.reg, &self.space, lo, hi),
            OpenLit::Basic(b) => crate::topology::ball_metric_open(&self.reg, &self.space, &self.ball(b)?),
            _ => Err(Error::Invalid("metric opens are written as `basic:` or `interval:` literals".into())),
        }
    }

    fn show_ball(&self, name: &Nat) -> Result<String> {
        let b = BallName(name.clone());
        let center = match self.space.exact_point(&self.reg, &b.center()) {
            Some(p) => p.to_string(),
            None => format!("#{}", b.center()),
        };
        let radius = match exact_radius(&self.reg, b.radius(&self.reg)?) {
            Some(r) => r.to_string(),
            None => format!("~{}", format_rational(&radius_approx(&self.reg, &b, 20)?)),
        };
        Ok(format!("{center};{radius}"))
    }
}

fn dense_for(cli: &Cli, ctx: &Ctx, what: &str) -> Result<DenseSequence> {
    match cli.dense {
        Some(Dense::Standard) => default_dense(&ctx.reg, &ctx.space),
        None => Err(Error::Invalid(format!("{what} needs a dense sequence; pass --dense"))),
    }
}

fn execute(cli: &Cli, rec: &mut Records<'_>) -> Result<Status> {
    let config = format!("space={} fuel={} seed={} samples={}", cli.space, cli.fuel, cli.seed, cli.samples);
    match &cli.command {
        Command::Demo { name } => {
            demo::validate(name)?;
            rec.emit(0, "config", &config)?;
            demo::run(name, rec, Fuel(cli.fuel))
        }
        Command::Member { open, point } => {
            let ctx = Ctx::new(cli)?;
            let o = ctx.open(&parse_open(open, ctx.kind)?)?;
            let p = ctx.point(point)?;
            rec.emit(0, "config", &config)?;
            let (v, steps) = spreen_member_counted(&ctx.reg, &o, &p, ctx.fuel)?;
            rec.emit(0, "member", format!("{v} steps={steps}"))?;
            Ok(v.into())
        }
        Command::Incl { ball1, ball2 } => {
            let ctx = Ctx::new(cli)?;
            let b1 = ctx.ball(&parse_ball(ball1, ctx.kind)?)?;
            let b2 = ctx.ball(&parse_ball(ball2, ctx.kind)?)?;
            let mode = match cli.mode {
                Mode::Exact => InclusionMode::Exact,
                Mode::Semidecide => InclusionMode::Semidecide,
            };
            rec.emit(0, "config", &config)?;
            let d = ball_formal_incl(&ctx.reg, &ctx.space, &b1, &b2, mode, ctx.fuel)?;
            rec.emit(0, "incl", d)?;
            Ok(d.into())
        }
        Command::Convert { direction, input, point, count } => convert(cli, rec, &config, *direction, input, point.as_deref(), *count),
        Command::Enumerate { open, point, count } => {
            let ctx = Ctx::new(cli)?;
            let o = ctx.open(&parse_open(open, ctx.kind)?)?;
            let status = match point {
                Some(p) => {
                    let p = ctx.point(p)?;
                    rec.emit(0, "config", &config)?;
                    stream_at(&ctx, rec, &o, &p, *count)?
                }
                None => {
                    let dense = dense_for(cli, &ctx, "enumerating an open without --point")?;
                    rec.emit(0, "config", &config)?;
                    let l = spreen_to_lacombe(&ctx.reg, dense, &o)?;
                    emit_lacombe(&ctx, rec, l, *count)?
                }
            };
            Ok(status)
        }
        Command::Modulus { function, phi, lo, hi, codomain } => {
            let reg = Registry::new();
            let domain = MetricSpace::by_handle(&reg, &cli.space)?;
            let codomain = match codomain {
                Some(h) => MetricSpace::by_handle(&reg, h)?,
                None => domain.clone(),
            };
            if !matches!(domain.geometry, crate::metric::Geometry::Exact(ExactKind::Rationals | ExactKind::UnitInterval)) {
                return Err(Error::Invalid("modulus checks run on rationals or unit-interval".into()));
            }
            let f = map_realizer(&reg, MapId::from_str(function)?);
            let phi = modulus_program(&reg, ModulusId::from_str(phi)?);
            let cfg = ModulusConfig {
                samples: cli.samples,
                seed: cli.seed,
                lo: parse_rational(lo)?,
                hi: parse_rational(hi)?,
                max_den: 100,
            };
            rec.emit(0, "config", format!("{config} function={function} lo={lo} hi={hi}"))?;
            let check = ModulusCheck { domain: &domain, codomain: &codomain, f, phi, fuel: Fuel(cli.fuel) };
            let report = check.run(&reg, &cfg)?;
            for w in report.violations.iter().take(MAX_WITNESSES) {
                rec.emit(0, "violation", format!("x={} y={} eps={}", w.x, w.y, format_rational(&w.eps)))?;
            }
            rec.emit(
                0,
                "summary",
                format!("ok={} inconclusive={} violations={}", report.ok, report.inconclusive, report.violations.len()),
            )?;
            Ok(if report.violations.is_empty() { Status::Yes } else { Status::No })
        }
    }
}

fn stream_at(ctx: &Ctx, rec: &mut Records<'_>, o: &SpreenOpenName, p: &Nat, count: usize) -> Result<Status> {
    let (v, steps) = spreen_member_counted(&ctx.reg, o, p, ctx.fuel)?;
    rec.emit(0, "member", format!("{v} steps={steps}"))?;
    if v == Verdict::Yes {
        let mut d = spreen_stream(&ctx.reg, o, p)?;
        for e in d.run_count(&ctx.reg, count, ctx.fuel)? {
            rec.emit(e.stage, "ball", ctx.show_ball(&e.value)?)?;
        }
    }
    Ok(v.into())
}

fn emit_lacombe(ctx: &Ctx, rec: &mut Records<'_>, l: LacombeOpenName, count: usize) -> Result<Status> {
    let mut d = enumerate(l.0 .0, None);
    let mut seen = std::collections::HashSet::new();
    let mut shown = Vec::new();
    d.run_until(&ctx.reg, ctx.fuel, |e| {
        if seen.insert(e.value.clone()) {
            shown.push(e.clone());
        }
        shown.len() >= count
    })?;
    for e in &shown {
        rec.emit(e.stage, "ball", ctx.show_ball(&e.value)?)?;
    }
    rec.emit(d.stage(), "done", format!("emitted={} steps={}", shown.len(), d.steps()))?;
    Ok(Status::Yes)
}

fn convert(
    cli: &Cli,
    rec: &mut Records<'_>,
    config: &str,
    direction: Direction,
    input: &str,
    point: Option<&str>,
    count: usize,
) -> Result<Status> {
    let need_point = || Error::Invalid("this direction reports at a point; pass --point".into());
    match direction {
        Direction::SpreenToLacombe => {
            let ctx = Ctx::new(cli)?;
            let dense = dense_for(cli, &ctx, "spreen-to-lacombe")?;
            let o = ctx.open(&parse_open(input, ctx.kind)?)?;
            rec.emit(0, "config", config)?;
            emit_lacombe(&ctx, rec, spreen_to_lacombe(&ctx.reg, dense, &o)?, count)
        }
        Direction::NoginaToLacombe => {
            let reg = Registry::new();
            let space = MetricSpace::by_handle(&reg, &cli.space)?;
            let space = if space.limit.is_some() { space } else { cauchy_completion(&reg, &space) };
            let ctx = Ctx::with_space(reg, space, Fuel(cli.fuel))?;
            let dense = dense_for(cli, &ctx, "nogina-to-lacombe")?;
            let b = ctx.ball(&parse_ball(input, ctx.kind)?)?;
            let o = ball_nogina_open(&ctx.reg, &ctx.space, &b)?;
            rec.emit(0, "config", format!("{config} completed={}", ctx.space.handle.0))?;
            emit_lacombe(&ctx, rec, nogina_to_lacombe(&ctx.reg, &ctx.space, dense, &o)?, count)
        }
        Direction::LacombeToSpreen => {
            let ctx = Ctx::new(cli)?;
            let balls = parse_lacombe(input, ctx.kind)?;
            let names = balls.iter().map(|b| ctx.ball(b).map(|b| b.0)).collect::<Result<Vec<_>>>()?;
            let dense = match cli.dense {
                Some(_) => dense_for(cli, &ctx, "lacombe-to-spreen")?,
                None => default_dense(&ctx.reg, &ctx.space)?,
            };
            let lb = spreen_basis_to_lacombe_basis(&ctx.reg, &ctx.basis, dense);
            let o = lacombe_to_spreen(&ctx.reg, &lb, LacombeOpenName(ce_finite(&ctx.reg, &names)));
            let p = ctx.point(point.ok_or_else(need_point)?)?;
            rec.emit(0, "config", config)?;
            stream_at(&ctx, rec, &o, &p, count)
        }
        Direction::MetricToSpreen => {
            let ctx = Ctx::new(cli)?;
            let mo = ctx.metric_open(&parse_open(input, ctx.kind)?)?;
            let p = ctx.point(point.ok_or_else(need_point)?)?;
            rec.emit(0, "config", config)?;
            stream_at(&ctx, rec, &metric_to_spreen(&ctx.reg, &mo)?, &p, count)
        }
        Direction::SpreenToMetric => {
            let ctx = Ctx::new(cli)?;
            let o = ctx.open(&parse_open(input, ctx.kind)?)?;
            let p = ctx.point(point.ok_or_else(need_point)?)?;
            rec.emit(0, "config", config)?;
            let mo = spreen_to_metric(&ctx.reg, &ctx.space, &o)?;
            let (v, steps) = spreen_member_counted(&ctx.reg, &o, &p, ctx.fuel)?;
            rec.emit(0, "member", format!("{v} steps={steps}"))?;
            if v == Verdict::Yes {
                let l = metric_radius(&ctx.reg, &mo, &p, ctx.fuel)?;
                for n in 0..count as u64 {
                    match left_term(&ctx.reg, l, n, ctx.fuel)? {
                        Some(q) => rec.emit(n, "radius", format_rational(&q))?,
                        None => {
                            rec.emit(n, "radius", "NOT_YET")?;
                            break;
                        }
                    }
                }
            }
            Ok(v.into())
        }
    }
}
