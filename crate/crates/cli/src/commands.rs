//! Command implementations.

use std::fs;
use std::path::{Path, PathBuf};

use meshforge::exact::ExactScalar;
use meshforge::flexlab::{grid_flex_demo_with, placed_frame, FlexTolerances};
use meshforge::hull::extend_net;
use meshforge::io::{
    flex_csv, frame_obj, mesh_from_spec, motif_from_json, net_obj, parse_mesh_arg, report_json, truncation_to_json,
    MeshSpec,
};
use meshforge::meshops::{mesh_is_regular, tensor, MeshTruncation};
use meshforge::netlib::{catalog, generate, sierpinski, Motif, NetTruncation, CATALOG, CATALOG_2D, CATALOG_3D};
use meshforge::supernatural::Supernatural;
use meshforge::symmetry::census::{census, census_table};
use meshforge::symmetry::is_regular;

use crate::args::{AnalyzeArgs, CatalogSet, Cli, Command, ExtendArgs, FlexArgs, GenArgs, Source, VerifyArgs};

/// Outcome other than success, mapped to the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit code 2.
    Deviation(String),
    /// Exit code 3.
    Input(String),
}

impl From<meshforge::Error> for Failure {
    fn from(e: meshforge::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::VerifyRegular(a) => cmd_verify_regular(a),
        Command::Extend(a) => cmd_extend(a),
        Command::Flex(a) => cmd_flex(a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn scalar(text: &str) -> Result<ExactScalar, Failure> {
    text.parse::<ExactScalar>()
        .map_err(|e| Failure::Input(format!("`{text}`: {e}")))
}

/// Smallest integer at least twice the longest period.
fn default_radius(m: &Motif) -> ExactScalar {
    let longest = m.periods.iter().map(|p| p.norm_sq().to_f64()).fold(0.0, f64::max).sqrt();
    ExactScalar::int((2.0 * longest - 1e-9).ceil().max(1.0) as i64)
}

fn stem(text: &str) -> String {
    text.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

enum Loaded {
    Net(NetTruncation),
    Mesh(MeshTruncation, String),
}

fn net_from(name: Option<&str>, json: Option<&PathBuf>, radius: Option<&str>, depth: u32) -> Result<NetTruncation, Failure> {
    let motif = match (name, json) {
        (Some(n), _) if n.eq_ignore_ascii_case("sierpinski") => return Ok(sierpinski(depth)?),
        (Some(n), _) => catalog(n)?,
        (None, Some(p)) => motif_from_json(&read(p)?)?,
        (None, None) => return Err(Failure::Input("give --net or --net-json".into())),
    };
    let r = match radius {
        Some(r) => scalar(r)?,
        None => default_radius(&motif),
    };
    Ok(generate(&motif, &r)?)
}

fn load(src: &Source) -> Result<Loaded, Failure> {
    if let Some(arg) = &src.mesh {
        let r = src.radius.as_deref().map(scalar).transpose()?.unwrap_or_else(ExactScalar::one);
        let spec = parse_mesh_arg(arg, src.depth, r)?;
        return Ok(Loaded::Mesh(mesh_from_spec(&spec)?, stem(arg)));
    }
    if let Some(p) = &src.mesh_json {
        let spec: MeshSpec = serde_json::from_str(&read(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        let name = match (&spec.group, spec.scale) {
            (Some(g), _) => format!("{}@{g}", spec.base),
            (None, Some(m)) => format!("{}/{m}", spec.base),
            _ => spec.base.clone(),
        };
        return Ok(Loaded::Mesh(mesh_from_spec(&spec)?, stem(&name)));
    }
    Ok(Loaded::Net(net_from(
        src.net.as_deref(),
        src.net_json.as_ref(),
        src.radius.as_deref(),
        src.depth,
    )?))
}

fn summary(net: &NetTruncation) -> String {
    format!(
        "{}: {} nodes, {} strings, radius {}",
        net.name,
        net.nodes().len(),
        net.strings().len(),
        net.radius
    )
}

fn cmd_gen(a: &GenArgs) -> Outcome {
    let (net, default_stem) = match load(&a.source)? {
        Loaded::Net(n) => {
            let s = stem(&n.name);
            (n, s)
        }
        Loaded::Mesh(m, s) => {
            let unit = m.net.nodes().iter().filter(|n| n.point.coords().iter().all(|c| !c.is_negative() && c <= &ExactScalar::one())).count();
            println!("nodes in the unit cube: {unit}");
            println!("spacing certificate: {}", if m.gap.holds() { "holds" } else { "fails" });
            (m.net, s)
        }
    };
    println!("{}", summary(&net));
    let stem = a.name.clone().unwrap_or(default_stem);
    write(&a.out.join(format!("{stem}.json")), &truncation_to_json(&net))?;
    write(&a.out.join(format!("{stem}.obj")), &net_obj(&net))
}

fn cmd_analyze(a: &AnalyzeArgs) -> Outcome {
    let (line, json) = match load(&a.source)? {
        Loaded::Net(n) => {
            let r = is_regular(&n)?;
            (r.to_string(), report_json("regularity", &r))
        }
        Loaded::Mesh(m, _) => {
            let r = mesh_is_regular(&m)?;
            (r.to_string(), report_json("mesh-regularity", &r))
        }
    };
    match &a.report {
        Some(p) => {
            println!("{line}");
            write(p, &json)
        }
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn cmd_verify_regular(a: &VerifyArgs) -> Outcome {
    let names: Vec<&str> = if a.net.is_empty() {
        match a.catalog {
            CatalogSet::Planar => CATALOG_2D.to_vec(),
            CatalogSet::Spatial => CATALOG_3D.to_vec(),
            CatalogSet::All => CATALOG.to_vec(),
        }
    } else {
        a.net.iter().map(String::as_str).collect()
    };
    let rows = census(&names, &scalar(&a.radius)?)?;
    print!("{}", census_table(&rows));
    for row in &rows {
        if let Some(w) = &row.report.condition_iii.witness {
            println!("{} witness: {w}", row.net);
        }
        if row.report.quasiregular {
            println!("{} is quasiregular: {} figure", row.net, row.figure.as_str());
        }
    }
    let regular: Vec<&str> = rows.iter().filter(|r| r.report.is_regular()).map(|r| r.net.as_str()).collect();
    println!("regular: {}", regular.join(", "));
    if let Some(p) = &a.report {
        write(p, &report_json("census", &rows))?;
    }
    let off: Vec<&str> = rows.iter().filter(|r| !r.matches_expectation()).map(|r| r.net.as_str()).collect();
    if off.is_empty() {
        Ok(())
    } else {
        Err(Failure::Deviation(format!("unexpected verdict for {}", off.join(", "))))
    }
}

fn cmd_extend(a: &ExtendArgs) -> Outcome {
    let net = net_from(a.net.as_deref(), a.net_json.as_ref(), a.radius.as_deref(), 1)?;
    let gens = a.scales.iter().map(|s| scalar(s)).collect::<Result<Vec<_>, _>>()?;
    let (ext, report) = extend_net(&net, &gens, a.depth, &net.radius)?;
    println!("{}", summary(&ext));
    println!(
        "lines merged {}, nodes {} -> {}, orbit nodes {}, extra intersections {}",
        report.lines_merged, report.nodes_in, report.nodes_out, report.orbit_nodes, report.extra_intersection_nodes
    );
    println!("orbit-node inclusion = {}", report.node_inclusion());
    println!("invariance on R = {}: {}", report.invariance_checked_radius, report.invariant());
    let base = stem(&net.name);
    write(&a.out.join(format!("{base}-extension.json")), &report_json("extension", &report))?;
    write(&a.out.join(format!("{base}-extended.json")), &truncation_to_json(&ext))?;
    write(&a.out.join(format!("{base}-extended.obj")), &net_obj(&ext))?;
    if report.node_inclusion() && report.invariant() {
        Ok(())
    } else {
        Err(Failure::Deviation("extension fails node inclusion or invariance".into()))
    }
}

fn cmd_flex(a: &FlexArgs) -> Outcome {
    let mesh = tensor("Z2", &Supernatural::infinite_at(&[2])?, a.depth, &ExactScalar::one())?;
    let tol = FlexTolerances {
        seed: a.seed,
        length_tol: a.length_tol,
        ..FlexTolerances::default()
    };
    let demo = grid_flex_demo_with(a.kappa, a.steps, &mesh, tol)?;
    println!(
        "{} steps: min margin {:.6}, max length error {:.3e}, max laminarity residual {:.3e}",
        demo.steps.len(),
        demo.min_margin(),
        demo.max_length_error(),
        demo.max_residual()
    );
    write(&a.out.join("flex.csv"), &flex_csv(&demo))?;
    write(&a.out.join("flex.json"), &report_json("flex", &demo))?;
    if !a.no_frames {
        for s in &demo.steps {
            let q = demo.path.placement(s.time);
            let (v, e) = placed_frame(&q, &mesh.net);
            let name = format!("frame_{:03}", s.step);
            write(&a.out.join("frames").join(format!("{name}.obj")), &frame_obj(&name, &v, &e))?;
        }
    }
    if demo.all_green() {
        println!("all steps verified");
        Ok(())
    } else {
        let bad: Vec<String> = demo.steps.iter().filter(|s| !s.green(&demo.tolerances)).map(|s| s.step.to_string()).collect();
        Err(Failure::Deviation(format!("steps {} failed verification", bad.join(", "))))
    }
}
