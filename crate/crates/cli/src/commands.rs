use std::fmt;
use std::io::Read;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use refocus::compiler::{
    compile, efficiency_report, verify_combinatorial, ColoringMethod, CompileOptions, Objective,
    TargetSpec,
};
use refocus::graphmodel::GraphDocument;
use refocus::hadamard::hadamard_of_order;
use refocus::schedule::{
    from_json, render_ascii, render_ascii_width, schedule_from_sign_matrix, to_json, PulseSchedule,
};
use refocus::simulator::{effective_report, SpinSystemParams};

use crate::args::{Command, Format, GraphArgs, HadamardArgs, ObjectiveArg};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    /// The report is still printed; the message names what failed.
    Verification {
        report: String,
        message: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Verification { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) => f.write_str(m),
            CliError::Verification { message, .. } => f.write_str(message),
        }
    }
}

impl From<refocus::Error> for CliError {
    fn from(e: refocus::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(command: &Command) -> CliResult<String> {
    match command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a),
        Command::Compare(a) => compare(a),
        Command::Diagram(a) => diagram(a),
        Command::Hadamard(a) => hadamard(a),
    }
}

fn read_source(path: Option<&Path>) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn load_graph(a: &GraphArgs) -> CliResult<GraphDocument> {
    Ok(GraphDocument::parse(&read_source(a.input.as_deref())?)?)
}

fn spin_index(doc: &GraphDocument, name: &str) -> Option<usize> {
    doc.graph.index_of(name)
}

/// Splits `a:b` at the first colon that yields two known spin names, so
/// names containing colons still resolve.
fn coupling_pair(doc: &GraphDocument, spec: &str) -> CliResult<(usize, usize)> {
    for (pos, _) in spec.match_indices(':') {
        let (a, b) = (&spec[..pos], &spec[pos + 1..]);
        if let (Some(ia), Some(ib)) = (spin_index(doc, a), spin_index(doc, b)) {
            return Ok((ia, ib));
        }
    }
    Err(CliError::Input(format!(
        "--retain-coupling `{spec}` does not name two spins of the graph"
    )))
}

fn target(a: &GraphArgs, doc: &GraphDocument) -> CliResult<TargetSpec> {
    let t = if let Some(name) = &a.retain_shift {
        let s = spin_index(doc, name)
            .ok_or_else(|| CliError::Input(format!("--retain-shift: unknown spin `{name}`")))?;
        TargetSpec::RetainShift(s)
    } else if let Some(spec) = &a.retain_coupling {
        let (x, y) = coupling_pair(doc, spec)?;
        TargetSpec::RetainCoupling(x, y)
    } else if a.refocus_all {
        TargetSpec::RefocusAll
    } else {
        return Err(CliError::Usage(
            "a target is required: --retain-shift, --retain-coupling or --refocus-all".to_string(),
        ));
    };
    t.validate(&doc.graph)?;
    Ok(t)
}

fn options(a: &GraphArgs) -> CompileOptions {
    CompileOptions {
        objective: match a.objective {
            ObjectiveArg::TotalPulses => Objective::TotalPulses,
            ObjectiveArg::MaxSimultaneous => Objective::MaxSimultaneous,
        },
        exhaustive_row_search_limit: a.search_limit,
        coloring: if a.exact_coloring {
            ColoringMethod::Exact
        } else {
            ColoringMethod::Greedy
        },
    }
}

fn compiled_schedule(
    a: &GraphArgs,
    doc: &GraphDocument,
    t: TargetSpec,
) -> CliResult<PulseSchedule> {
    let m = compile(&doc.graph, t, &options(a))?;
    let s = schedule_from_sign_matrix(&m, a.total_time, a.omit_final)?;
    Ok(s.with_names(doc.graph.names())?)
}

fn load_schedule(path: &Path) -> CliResult<PulseSchedule> {
    Ok(from_json(&read_source(Some(path))?)?)
}

/// Reorders the schedule's spins to the graph's order, matching by name.
fn align(s: PulseSchedule, doc: &GraphDocument) -> CliResult<PulseSchedule> {
    let names = doc.graph.names();
    let mut mismatch = s.spin_count() != names.len();
    let mut spins = Vec::with_capacity(names.len());
    for name in names {
        match s.spins.iter().find(|sp| &sp.name == name) {
            Some(sp) => spins.push(sp.clone()),
            None => mismatch = true,
        }
    }
    if mismatch {
        return Err(CliError::Input(format!(
            "schedule spins [{}] do not match graph spins [{}]",
            s.names().join(", "),
            names.join(", ")
        )));
    }
    Ok(PulseSchedule { spins, ..s })
}

/// The schedule under test: from `--schedule` or compiled on the spot.
fn subject(a: &GraphArgs, doc: &GraphDocument, t: TargetSpec) -> CliResult<PulseSchedule> {
    match &a.schedule {
        Some(path) => align(load_schedule(path)?, doc),
        None => compiled_schedule(a, doc, t),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}

fn ascii(a: &GraphArgs, s: &PulseSchedule) -> String {
    let names = s.names();
    match a.width {
        Some(w) => render_ascii_width(s, &names, w),
        None => render_ascii(s, &names),
    }
}

fn generate(a: &GraphArgs) -> CliResult<String> {
    let doc = load_graph(a)?;
    let t = target(a, &doc)?;
    let s = compiled_schedule(a, &doc, t)?;
    Ok(match a.format {
        Format::Json => {
            let mut out = to_json(&s);
            out.push('\n');
            out
        }
        Format::Ascii => ascii(a, &s),
    })
}

fn verify(a: &GraphArgs) -> CliResult<String> {
    let doc = load_graph(a)?;
    let t = target(a, &doc)?;
    let s = subject(a, &doc, t)?;
    let report = verify_combinatorial(&s.to_sign_matrix()?, &doc.graph, t)?;
    let out = json(&report);
    if report.pass {
        Ok(out)
    } else {
        Err(CliError::Verification {
            report: out,
            message: format!("verification failed:\n  {}", report.failures.join("\n  ")),
        })
    }
}

fn simulate(a: &GraphArgs) -> CliResult<String> {
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".to_string()));
    }
    let doc = load_graph(a)?;
    let t = target(a, &doc)?;
    let s = subject(a, &doc, t)?;
    let total_time = s.total_time;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut samples = Vec::with_capacity(a.samples);
    samples.push(SpinSystemParams::fill(
        &doc.graph,
        &doc.shifts,
        &doc.couplings,
        total_time,
        &mut rng,
    )?);
    for _ in 1..a.samples {
        samples.push(SpinSystemParams::random(&doc.graph, total_time, &mut rng)?);
    }
    let report = effective_report(&s, &doc.graph, t, &samples, a.tolerance)?;
    let out = json(&report);
    if report.pass {
        Ok(out)
    } else {
        let mut lines = report.failures.clone();
        lines.push(format!(
            "propagator distance {:.3e} exceeds tolerance {:.1e}",
            report.frobenius_distance, report.tolerance
        ));
        Err(CliError::Verification {
            report: out,
            message: format!("simulation check failed:\n  {}", lines.join("\n  ")),
        })
    }
}

fn compare(a: &GraphArgs) -> CliResult<String> {
    let doc = load_graph(a)?;
    let t = target(a, &doc)?;
    let report = efficiency_report(&doc.graph, t, &options(a))?;
    Ok(match a.format {
        Format::Json => json(&report),
        Format::Ascii => {
            let mut out = format!(
                "target        {}\nspins         {}\ncolors        {}\nhadamard      {}\n",
                report.target, report.spins, report.colors, report.hadamard_order
            );
            out.push_str(&format!(
                "efficient     {} intervals, {} pulses\nconventional  {} intervals, {} pulses\nratio         {}\n",
                report.efficient.intervals,
                report.efficient.internal_pulses,
                report.conventional.intervals,
                report.conventional.internal_pulses,
                report.interval_ratio
            ));
            for row in &report.assignment {
                out.push_str(&format!(
                    "  {} -> color {}, row {}\n",
                    row.spin, row.color, row.hadamard_row
                ));
            }
            out
        }
    })
}

fn diagram(a: &GraphArgs) -> CliResult<String> {
    let s = match &a.schedule {
        Some(path) => {
            let s = load_schedule(path)?;
            if a.input.is_some() {
                align(s, &load_graph(a)?)?
            } else {
                s
            }
        }
        None => {
            let doc = load_graph(a)?;
            let t = target(a, &doc)?;
            compiled_schedule(a, &doc, t)?
        }
    };
    Ok(ascii(a, &s))
}

fn hadamard(a: &HadamardArgs) -> CliResult<String> {
    Ok(hadamard_of_order(a.order)?.to_string())
}
