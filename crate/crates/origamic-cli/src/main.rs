//! `origamic` command-line tool.
//!
//! Exit status is 0 on success, 1 when an input fails validation and 2 for
//! usage errors, including unreadable files and bad configuration.

mod config;

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use origamic::compiler::{self, CompileError, NetlistError};
use origamic::crease_pattern::{
    export_fold, export_svg, import_fold, kawasaki_residual, maekawa_delta, CreasePattern, PatternError,
};
use origamic::flat_fold_oracle::{self, Decision, OracleConfig, OracleError};
use origamic::gadgets::{self, Chirality, CrossingKind, GadgetInstance, NaeHubVariant, Pose};
use origamic::geometry::{Direction, ExactPoint, ExactScalar};
use origamic::logic_layer;

use config::{parse_scalar, CliConfig};

#[derive(Parser)]
#[command(name = "origamic", version, about = "Compile boolean netlists into flat-foldable crease patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Layout {
    #[arg(long)]
    pitch: Option<String>,
    #[arg(long)]
    base_width: Option<String>,
    #[arg(long)]
    spacing: Option<String>,
    #[arg(long)]
    face_limit: Option<usize>,
    /// SVG style table, `key = value` per line.
    #[arg(long)]
    style: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Netlist to `.fold`, `.svg` and a `.txt` report.
    Compile {
        netlist: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Input values the mountain/valley assignment is drawn for, as `A=1,B=0`.
        #[arg(long)]
        inputs: Option<String>,
        #[command(flatten)]
        layout: Layout,
    },
    /// Per-cycle table of inputs and outputs, read from the compiled layout.
    Simulate {
        netlist: PathBuf,
        /// JSON object of per-input waveforms; omitted means every input
        /// vector once (combinational designs only).
        stimulus: Option<PathBuf>,
        /// Use the gate-level simulator instead of the layout.
        #[arg(long)]
        reference: bool,
    },
    /// Local flatness report, plus a foldability decision with `--oracle`.
    Validate {
        fold: PathBuf,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        face_limit: Option<usize>,
    },
    /// Writes one gadget as a standalone fragment.
    Gadget {
        kind: String,
        #[arg(long)]
        theta: Option<i64>,
        /// Port states to pin, comma separated in port order.
        #[arg(long)]
        states: Option<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// FOLD to SVG.
    Export {
        fold: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        style: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Invalid(String),
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = CliConfig::load().map_err(Failure::Usage).and_then(|cfg| run(cli.command, cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, mut cfg: CliConfig) -> Outcome {
    match cmd {
        Command::Compile { netlist, out, inputs, layout } => {
            apply_layout(&mut cfg, &layout)?;
            cmd_compile(&netlist, out.or(cfg.out_dir.clone()), inputs.as_deref(), &cfg)
        }
        Command::Simulate { netlist, stimulus, reference } => cmd_simulate(&netlist, stimulus.as_deref(), reference),
        Command::Validate { fold, oracle, face_limit } => {
            if let Some(n) = face_limit {
                cfg.set("face_limit", &n.to_string()).map_err(Failure::Usage)?;
            }
            cmd_validate(&fold, oracle, &cfg)
        }
        Command::Gadget { kind, theta, states, out } => cmd_gadget(&kind, theta, states.as_deref(), &out),
        Command::Export { fold, out, style } => {
            if let Some(s) = style {
                cfg.style = Some(s);
            }
            let p = read_fold(&fold)?;
            let svg = export_svg(&p, &cfg.svg_style().map_err(Failure::Usage)?);
            write_atomic(&out, &svg)
        }
    }
}

fn apply_layout(cfg: &mut CliConfig, l: &Layout) -> Outcome {
    for (k, v) in [("pitch", &l.pitch), ("base_width", &l.base_width), ("spacing", &l.spacing)] {
        if let Some(v) = v {
            cfg.set(k, v).map_err(Failure::Usage)?;
        }
    }
    if let Some(n) = l.face_limit {
        cfg.set("face_limit", &n.to_string()).map_err(Failure::Usage)?;
    }
    if let Some(s) = &l.style {
        cfg.style = Some(s.clone());
    }
    Ok(())
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Outcome {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| Failure::Usage(format!("{}: {e}", path.display()));
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
    }
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// First line of `text` mentioning `"name"`, 1-based.
fn line_of(text: &str, name: &str) -> Option<usize> {
    let quoted = format!("\"{name}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

fn netlist_failure(path: &Path, text: &str, e: &NetlistError) -> Failure {
    let name = match e {
        NetlistError::Json { line, column, .. } => {
            return Failure::Invalid(format!("{}:{line}:{column}: {e}", path.display()));
        }
        NetlistError::MultipleDrivers(n)
        | NetlistError::UndeclaredNet(n)
        | NetlistError::UndrivenNet(n)
        | NetlistError::DuplicateId(n)
        | NetlistError::InverterLoop(n) => Some(n.as_str()),
        NetlistError::ArityMismatch { gate, .. } | NetlistError::UnknownGateKind { gate, .. } => Some(gate.as_str()),
        NetlistError::MissingClock => None,
    };
    match name.and_then(|n| line_of(text, n)) {
        Some(l) => Failure::Invalid(format!("{}:{l}: {e}", path.display())),
        None => Failure::Invalid(format!("{}: {e}", path.display())),
    }
}

fn load_netlist(path: &Path) -> Result<compiler::CircuitNetlist, Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes).into_owned();
    compiler::parse_netlist(&bytes).map_err(|e| netlist_failure(path, &text, &e))
}

fn compile_failure(path: &Path, e: CompileError) -> Failure {
    match e {
        CompileError::Config(m) => Failure::Usage(m),
        CompileError::Netlist(n) => {
            let text = std::fs::read_to_string(path).unwrap_or_default();
            netlist_failure(path, &text, &n)
        }
        e => Failure::Invalid(format!("{}: {e}", path.display())),
    }
}

fn parse_bits(s: &str) -> Result<BTreeMap<String, u8>, Failure> {
    let mut out = BTreeMap::new();
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Failure::Usage(format!("expected NAME=0|1, got {item}")))?;
        let bit = match v.trim() {
            "0" => 0,
            "1" => 1,
            _ => return Err(Failure::Usage(format!("expected 0 or 1 for {k}"))),
        };
        out.insert(k.trim().to_string(), bit);
    }
    Ok(out)
}

fn cmd_compile(netlist: &Path, out: Option<PathBuf>, inputs: Option<&str>, cfg: &CliConfig) -> Outcome {
    let nl = load_netlist(netlist)?;
    let mut cc = cfg.compile_config();
    if let Some(s) = inputs {
        cc.inputs = parse_bits(s)?;
    }
    let style = cfg.svg_style().map_err(Failure::Usage)?;
    let compiled = compiler::compile(&nl, &cc).map_err(|e| compile_failure(netlist, e))?;
    let dir = out.unwrap_or_else(|| PathBuf::from("."));
    let stem = netlist.file_stem().and_then(|s| s.to_str()).unwrap_or("design");
    write_atomic(&dir.join(format!("{stem}.fold")), &export_fold(&compiled.pattern))?;
    write_atomic(&dir.join(format!("{stem}.svg")), &export_svg(&compiled.pattern, &style))?;
    let report = compiler::report(&compiled);
    write_atomic(&dir.join(format!("{stem}.txt")), report.as_bytes())?;
    print!("{report}");
    Ok(())
}

fn cmd_simulate(netlist: &Path, stimulus: Option<&Path>, reference: bool) -> Outcome {
    let nl = load_netlist(netlist)?;
    let circuit = nl.to_circuit().map_err(|e| compile_failure(netlist, e.into()))?;
    let names: Vec<String> = circuit.inputs.iter().map(|(n, _)| n.clone()).collect();
    let (waves, cycles) = match stimulus {
        Some(p) => {
            let w: BTreeMap<String, Vec<u8>> = serde_json::from_slice(&read(p)?)
                .map_err(|e| Failure::Usage(format!("{}:{}:{}: {e}", p.display(), e.line(), e.column())))?;
            let cycles = names.iter().filter_map(|n| w.get(n).map(|v| v.len())).min().unwrap_or(0);
            (w, cycles)
        }
        None if circuit.clock.is_some() => {
            return Err(Failure::Usage("sequential designs need a stimulus file".into()));
        }
        None => {
            let cycles = 1usize << names.len();
            let w = names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), (0..cycles).map(|t| ((t >> (names.len() - 1 - i)) & 1) as u8).collect()))
                .collect();
            (w, cycles)
        }
    };
    let table = if reference {
        logic_layer::simulate(&circuit, &waves, cycles).map_err(|e| Failure::Invalid(format!("{}: {e}", netlist.display())))?
    } else {
        let cc = compiler::CompileConfig::default();
        let design = compiler::lay_out(&circuit, &cc).map_err(|e| compile_failure(netlist, e))?;
        let ex = compiler::extract(&design).map_err(|e| compile_failure(netlist, e.into()))?;
        ex.simulate(&design, &waves, cycles).map_err(|e| compile_failure(netlist, e.into()))?.0
    };
    let outs: Vec<&String> = circuit.outputs.iter().map(|(n, _)| n).collect();
    let mut s = String::from("cycle");
    for n in &names {
        s += &format!(" {n}");
    }
    s += " |";
    for n in &outs {
        s += &format!(" {n}");
    }
    println!("{s}");
    for t in 0..cycles {
        let mut row = format!("{t}");
        for n in &names {
            row += &format!(" {}", waves[n][t]);
        }
        row += " |";
        for n in &outs {
            row += &format!(" {}", table[*n][t]);
        }
        println!("{row}");
    }
    Ok(())
}

fn read_fold(path: &Path) -> Result<CreasePattern, Failure> {
    import_fold(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn cmd_validate(path: &Path, oracle: bool, cfg: &CliConfig) -> Outcome {
    let p = read_fold(path)?;
    let interior: Vec<usize> = p.interior_vertices().collect();
    let mut kawasaki_bad = 0;
    let mut maekawa_checked = 0;
    let mut maekawa_bad = 0;
    for &v in &interior {
        match kawasaki_residual(&p, v) {
            Ok(r) if r.is_zero() => {}
            _ => kawasaki_bad += 1,
        }
        match maekawa_delta(&p, v) {
            Ok(d) => {
                maekawa_checked += 1;
                if d.abs() != 2 {
                    maekawa_bad += 1;
                }
            }
            Err(PatternError::UnassignedIncidentCrease(_)) => {}
            Err(_) => maekawa_bad += 1,
        }
    }
    println!("interior vertices {}", interior.len());
    println!("kawasaki failures {kawasaki_bad}");
    println!("maekawa checked {maekawa_checked} failures {maekawa_bad}");
    let mut ok = kawasaki_bad == 0 && maekawa_bad == 0;
    if oracle {
        let oc = OracleConfig { face_limit: cfg.face_limit };
        match flat_fold_oracle::is_flat_foldable_with(&p, &[], &oc) {
            Ok(Decision::Foldable(_)) => println!("oracle Foldable"),
            Ok(Decision::Unfoldable) => {
                println!("oracle Unfoldable");
                ok = false;
            }
            Err(e @ OracleError::TooLarge { .. }) => {
                println!("oracle TooLarge");
                return Err(Failure::Invalid(format!("{}: {e}", path.display())));
            }
            Err(e) => {
                println!("oracle Unfoldable");
                return Err(Failure::Invalid(format!("{}: {e}", path.display())));
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("{} fails validation", path.display())))
    }
}

fn build_gadget(kind: &str, theta: Option<i64>) -> Result<GadgetInstance, Failure> {
    let o = Pose::default();
    let no_theta = |g: Result<GadgetInstance, gadgets::GadgetError>| {
        if theta.is_some() {
            Err(Failure::Usage(format!("{kind} takes no --theta")))
        } else {
            g.map_err(|e| Failure::Invalid(e.to_string()))
        }
    };
    let origin = ExactPoint::origin();
    match kind {
        "nae" => gadgets::make_nae(&o, theta.unwrap_or(60)).map_err(|e| Failure::Invalid(e.to_string())),
        "reflector" => gadgets::make_reflector(&o, theta.unwrap_or(120)).map_err(|e| Failure::Invalid(e.to_string())),
        "rotator" => no_theta(gadgets::make_rotator(&o)),
        "duplicator" => no_theta(gadgets::make_duplicator(&o)),
        "combiner" => no_theta(gadgets::make_combiner(&o)),
        "not" => no_theta(gadgets::make_not(&o)),
        "hub" => no_theta(gadgets::make_hub(&o, Chirality::Plain)),
        "hub-mirrored" => no_theta(gadgets::make_hub(&o, Chirality::Mirrored)),
        "nae-hub" => no_theta(gadgets::make_nae_hub(&o, NaeHubVariant::Base)),
        "crossing" => no_theta(gadgets::make_crossing(
            CrossingKind::Right,
            [(origin.clone(), Direction::EAST), (origin, Direction::NORTH)],
            0,
        )),
        "zigzag" => no_theta(gadgets::make_crossing(
            CrossingKind::Zigzag,
            [(origin.clone(), Direction::EAST), (origin, Direction::new(2))],
            0,
        )),
        "pleat" => no_theta(gadgets::make_pleat(
            (origin, Direction::EAST),
            ExactScalar::one(),
            parse_scalar("4").expect("literal"),
            0,
            Default::default(),
        )),
        _ => Err(Failure::Usage(format!(
            "unknown gadget {kind}; expected nae, reflector, rotator, duplicator, combiner, not, hub, \
             hub-mirrored, nae-hub, crossing, zigzag or pleat"
        ))),
    }
}

fn cmd_gadget(kind: &str, theta: Option<i64>, states: Option<&str>, out: &Path) -> Outcome {
    let g = build_gadget(kind, theta)?;
    let mut pattern = g.fragment.clone();
    if let Some(s) = states {
        let bits: Vec<u8> = s
            .split(',')
            .map(|b| match b.trim() {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => Err(Failure::Usage(format!("bad state {b}"))),
            })
            .collect::<Result<_, _>>()?;
        if bits.len() != g.ports.len() {
            let names: Vec<&str> = g.ports.iter().map(|p| p.name.as_str()).collect();
            return Err(Failure::Usage(format!("{kind} has {} ports: {}", names.len(), names.join(","))));
        }
        let pins = g
            .consistent_pins(&bits)
            .ok_or_else(|| Failure::Invalid(format!("states {s} disagree on a shared crease")))?;
        pattern = pattern.with_assignments(&pins);
    }
    write_atomic(out, &export_fold(&pattern))?;
    let ports: Vec<String> = g.ports.iter().map(|p| format!("{}({:?})", p.name, p.polarity)).collect();
    println!("{} ports {}", g.kind.name(), ports.join(" "));
    Ok(())
}
