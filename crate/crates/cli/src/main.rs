//! `hiveweb`: JSON in, JSON out front end for hiveweb-core.
//!
//! Exit codes: 0 success or valid, 1 semantically invalid input, 2 malformed
//! input or usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hiveweb_core::metric::{lattice_name, OrientedGraph};
use hiveweb_core::*;
use serde_json::{json, Value};

const MAX_ENV: &str = "HIVEWEB_MAX_THIRDS";

#[derive(Parser)]
#[command(
    name = "hiveweb",
    version,
    about = "Exact tropical SL3 web and hive calculations"
)]
struct Cli {
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TriArg {
    /// Triangulation JSON (may be omitted if the input document embeds one).
    #[arg(long)]
    triangulation: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a triangulation, or a hive on it.
    Validate {
        #[command(flatten)]
        tri: TriArg,
        #[arg(long)]
        hive: Option<PathBuf>,
    },
    /// Web coordinates to hive values.
    Web2hive {
        #[command(flatten)]
        tri: TriArg,
        /// Single triangle: x,y,z,t,u,v,w.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "web")]
        coords: Option<String>,
        /// Per-triangle coordinates on a surface.
        #[arg(long)]
        web: Option<PathBuf>,
    },
    /// Hive values to web coordinates.
    Hive2web {
        #[command(flatten)]
        tri: TriArg,
        /// A triangle hive `{"a1":..,"a7":..}` or a hive on a triangulation.
        #[arg(long)]
        hive: PathBuf,
    },
    /// Flip an edge, optionally transporting a hive.
    Flip {
        #[command(flatten)]
        tri: TriArg,
        #[arg(long)]
        edge: u32,
        #[arg(long)]
        hive: Option<PathBuf>,
    },
    /// Tropical potential of a hive.
    Potential {
        #[command(flatten)]
        tri: TriArg,
        #[arg(long)]
        hive: PathBuf,
    },
    /// Positive-cone membership of a hive.
    Cone {
        #[command(flatten)]
        tri: TriArg,
        #[arg(long)]
        hive: PathBuf,
    },
    /// Compare the closed-form hive with shortest paths on the net.
    Oracle {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "sweep")]
        coords: Option<String>,
        /// Number of random triangles to check.
        #[arg(long)]
        sweep: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Range for random coordinates: |x| <= K, corner counts <= K.
        #[arg(long, default_value_t = 2)]
        bound: u32,
        /// Include the net graph in the output.
        #[arg(long)]
        emit_net: bool,
    },
    /// Distance in the lattice graph.
    GammaDist {
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Fermat minimum of three lattice points on a window around them.
    Fermat {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Window margin around the three points.
        #[arg(long, default_value_t = 3)]
        margin: i64,
    },
    /// Random valid hive on a triangulation.
    Sample {
        #[command(flatten)]
        tri: TriArg,
        #[arg(long, default_value_t = 2)]
        bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Shortest distance in an oriented graph.
    Dist {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Triangulated polygon with the given diagonals (a fan if none).
    Polygon {
        #[arg(long)]
        m: u32,
        /// Diagonal a,b; repeatable.
        #[arg(long = "diagonal")]
        diagonals: Vec<String>,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "Malformed".into(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or("Error")
            .to_string();
        let code = match e {
            Error::OutOfRange { .. } | Error::BadVertexKey(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Output document and exit code.
struct Report {
    doc: Value,
    code: u8,
}

impl Report {
    fn ok(doc: Value) -> Self {
        Report { doc, code: 0 }
    }

    fn verdict(doc: Value, good: bool) -> Self {
        Report {
            doc,
            code: if good { 0 } else { 1 },
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn max_thirds() -> CliResult<i64> {
    match std::env::var(MAX_ENV) {
        Ok(s) => s
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|&n| n >= 0)
            .ok_or_else(|| {
                Failure::malformed(format!("{MAX_ENV}={s:?} is not a non-negative integer"))
            }),
        Err(_) => Ok(DEFAULT_MAX_THIRDS),
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::malformed(format!("{}: invalid JSON: {e}", path.display())))
}

fn decode<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| Failure::malformed(format!("not a valid {what}: {e}")))
}

fn parse_arg<T: std::str::FromStr<Err = String>>(s: &str, what: &str) -> CliResult<T> {
    s.parse::<T>()
        .map_err(|e| Failure::malformed(format!("{what}: {e}")))
}

fn parse_coords(s: &str, limit: i64) -> CliResult<TriangleWebCoords> {
    let c: TriangleWebCoords = parse_arg(s, "--coords")?;
    c.check_bound(limit)?;
    Ok(c)
}

fn parse_point(s: &str, flag: &str, limit: i64) -> CliResult<LatticePoint> {
    let p: LatticePoint = parse_arg(s, flag)?;
    for v in [p.x, p.y] {
        Third::from_thirds(v).check_bound(limit)?;
    }
    Ok(p)
}

/// Split a document into its embedded triangulation (if any) and payload.
fn split_doc(v: Value, payload: &str) -> (Option<Value>, Value) {
    match v {
        Value::Object(mut m) if m.contains_key(payload) => {
            let tri = m.remove("triangulation");
            (tri, m.remove(payload).unwrap())
        }
        other => (None, other),
    }
}

fn resolve_triangulation(arg: &TriArg, embedded: Option<Value>) -> CliResult<Triangulation> {
    let v = match (&arg.triangulation, embedded) {
        (Some(p), _) => read_json(p)?,
        (None, Some(v)) => v,
        (None, None) => return Err(Failure::malformed("--triangulation is required")),
    };
    decode(v, "triangulation")
}

/// A triangulation that passes complex validation.
fn checked_triangulation(arg: &TriArg, embedded: Option<Value>) -> CliResult<Triangulation> {
    let t = resolve_triangulation(arg, embedded)?;
    let report = validate_complex(&t);
    if !report.is_empty() {
        return Err(Error::InvalidComplex(report).into());
    }
    Ok(t)
}

fn load_hive(arg: &TriArg, path: &Path, limit: i64) -> CliResult<(Triangulation, Hive)> {
    let (embedded, payload) = split_doc(read_json(path)?, "values");
    let t = checked_triangulation(arg, embedded)?;
    let h: Hive = decode(payload, "hive")?;
    h.check_bound(limit)?;
    h.check_support(&t)?;
    Ok((t, h))
}

fn hive_doc(t: &Triangulation, h: &Hive) -> Value {
    json!({ "triangulation": to_value(t), "values": to_value(h) })
}

fn execute(cmd: Command) -> CliResult<Report> {
    let limit = max_thirds()?;
    match cmd {
        Command::Validate { tri, hive: None } => {
            let t = resolve_triangulation(&tri, None)?;
            let report = validate_complex(&t);
            let valid = report.is_empty();
            Ok(Report::verdict(
                json!({ "valid": valid, "violations": to_value(&report.violations) }),
                valid,
            ))
        }
        Command::Validate {
            tri,
            hive: Some(path),
        } => {
            let (t, h) = load_hive(&tri, &path, limit)?;
            let violations = validate_hive(&t, &h)?;
            let valid = violations.is_empty();
            Ok(Report::verdict(
                json!({ "valid": valid, "violations": to_value(&violations) }),
                valid,
            ))
        }
        Command::Web2hive {
            coords: Some(s), ..
        } => {
            let c = parse_coords(&s, limit)?;
            Ok(Report::ok(to_value(&web_to_hive_triangle(&c)?)))
        }
        Command::Web2hive {
            tri,
            coords: None,
            web: Some(path),
        } => {
            let (embedded, payload) = split_doc(read_json(&path)?, "coords");
            let t = checked_triangulation(&tri, embedded)?;
            let web: SurfaceWeb = decode(payload, "surface web")?;
            for c in web.coords.values() {
                c.check_bound(limit)?;
            }
            let h = surface_web_to_hive(&t, &web)?;
            Ok(Report::ok(hive_doc(&t, &h)))
        }
        Command::Web2hive { .. } => Err(Failure::malformed("one of --coords or --web is required")),
        Command::Hive2web { tri, hive } => {
            let v = read_json(&hive)?;
            if v.get("a1").is_some() {
                let th: TriangleHive = decode(v, "triangle hive")?;
                for x in th.to_array() {
                    x.check_bound(limit)?;
                }
                return Ok(Report::ok(to_value(&hive_to_web_triangle(&th)?)));
            }
            let (t, h) = load_hive(&tri, &hive, limit)?;
            let web = hive_to_surface_web(&t, &h)?;
            Ok(Report::ok(
                json!({ "triangulation": to_value(&t), "coords": to_value(&web) }),
            ))
        }
        Command::Flip {
            tri,
            edge,
            hive: None,
        } => {
            let t = checked_triangulation(&tri, None)?;
            let (t2, _, _) = flip_triangulation(&t, edge)?;
            Ok(Report::ok(to_value(&t2)))
        }
        Command::Flip {
            tri,
            edge,
            hive: Some(path),
        } => {
            let (t, h) = load_hive(&tri, &path, limit)?;
            let (t2, h2) = flip_hive(&t, &h, edge)?;
            Ok(Report::ok(hive_doc(&t2, &h2)))
        }
        Command::Potential { tri, hive } => {
            let (t, h) = load_hive(&tri, &hive, limit)?;
            Ok(Report::ok(
                json!({ "potential": to_value(&tropical_potential(&t, &h)?) }),
            ))
        }
        Command::Cone { tri, hive } => {
            let (t, h) = load_hive(&tri, &hive, limit)?;
            let inside = is_in_positive_cone(&t, &h)?;
            Ok(Report::verdict(json!({ "in_cone": inside }), inside))
        }
        Command::Oracle {
            coords: Some(s),
            emit_net,
            ..
        } => {
            let c = parse_coords(&s, limit)?;
            let (doc, matched) = oracle_case(&c, emit_net)?;
            Ok(Report::verdict(doc, matched))
        }
        Command::Oracle {
            coords: None,
            sweep: Some(n),
            seed,
            bound,
            ..
        } => {
            use rand::{Rng, SeedableRng};
            let k = i64::from(bound);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut mismatches = Vec::new();
            for _ in 0..n {
                let mut c = [0i64; 7];
                c[0] = rng.gen_range(-k..=k);
                for slot in c.iter_mut().skip(1) {
                    *slot = rng.gen_range(0..=k);
                }
                let (doc, matched) = oracle_case(&TriangleWebCoords::from_array(c), false)?;
                if !matched {
                    mismatches.push(doc);
                }
            }
            let all = mismatches.is_empty();
            Ok(Report::verdict(
                json!({ "cases": n, "all_match": all, "mismatches": mismatches }),
                all,
            ))
        }
        Command::Oracle { .. } => Err(Failure::malformed("one of --coords or --sweep is required")),
        Command::GammaDist { from, to } => {
            let p = parse_point(&from, "--from", limit)?;
            let q = parse_point(&to, "--to", limit)?;
            let d = LatticePoint::new(q.x - p.x, q.y - p.y);
            let r = d.x.abs() + d.y.abs() + 2;
            if r > 2_000 {
                return Ok(Report::ok(to_value(&gamma_distance(d))));
            }
            let g = gamma_window(-r, r, -r, r);
            let dist = shortest_distance(&g, "0,0", &lattice_name(d))?;
            Ok(Report::ok(to_value(&dist)))
        }
        Command::Fermat { a, b, c, margin } => {
            let f = FermatSpec {
                a: parse_point(&a, "--a", limit)?,
                b: parse_point(&b, "--b", limit)?,
                c: parse_point(&c, "--c", limit)?,
            };
            let pts = [f.a, f.b, f.c];
            let margin = margin.max(0);
            let span = |sel: fn(&LatticePoint) -> i64| {
                let lo = pts.iter().map(sel).min().unwrap() - margin;
                let hi = pts.iter().map(sel).max().unwrap() + margin;
                (lo, hi)
            };
            let ((x0, x1), (y0, y1)) = (span(|p| p.x), span(|p| p.y));
            if (x1 - x0 + 1) * (y1 - y0 + 1) > 1_000_000 {
                return Err(Failure::malformed("window larger than 10^6 vertices"));
            }
            let g = gamma_window(x0, x1, y0, y1);
            let (value, argmin) = fermat_brute(
                &g,
                &lattice_name(f.a),
                &lattice_name(f.b),
                &lattice_name(f.c),
            )?;
            let closed = fermat_closed_form(&f).ok();
            let omega: Vec<String> = f.omega().into_iter().map(lattice_name).collect();
            Ok(Report::ok(json!({
                "value": to_value(&value),
                "argmin": argmin,
                "closed_form": closed.map(|c| to_value(&c)),
                "omega": omega,
                "window": [[x0, y0], [x1, y1]],
            })))
        }
        Command::Sample { tri, bound, seed } => {
            let t = checked_triangulation(&tri, None)?;
            if bound > 4 {
                return Err(Failure::malformed("--bound must be at most 4"));
            }
            let h = sample_hive(&t, bound, seed)?;
            Ok(Report::ok(hive_doc(&t, &h)))
        }
        Command::Dist { graph, from, to } => {
            let g: OrientedGraph = decode(read_json(&graph)?, "graph")?;
            Ok(Report::ok(to_value(&shortest_distance(&g, &from, &to)?)))
        }
        Command::Polygon { m, diagonals } => {
            let diags = diagonals
                .iter()
                .map(|s| {
                    let p: LatticePoint = parse_arg(s, "--diagonal")?;
                    let conv = |v: i64| {
                        u32::try_from(v).map_err(|_| Failure::malformed(format!("--diagonal {s}")))
                    };
                    Ok((conv(p.x)?, conv(p.y)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let t = if diags.is_empty() {
                fan_polygon(m)?
            } else {
                build_polygon(m, &diags)?
            };
            Ok(Report::ok(to_value(&t)))
        }
    }
}

fn oracle_case(c: &TriangleWebCoords, emit_net: bool) -> CliResult<(Value, bool)> {
    let formula = web_to_hive_triangle(c)?;
    let oracle = oracle_triangle_hive(c)?;
    let matched = formula == oracle;
    let mut doc = json!({
        "coords": to_value(c),
        "formula": to_value(&formula),
        "oracle": to_value(&oracle),
        "match": matched,
    });
    if emit_net {
        let net = build_net(c)?;
        doc["net"] = json!({
            "graph": to_value(&net.graph),
            "terminals": { "a": net.a, "b": net.b, "c": net.c },
        });
    }
    Ok((doc, matched))
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string(doc).expect("JSON values serialize");
    match out {
        Some(p) => {
            std::fs::write(p, text + "\n").map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code) = match execute(cli.command) {
        Ok(r) => (r.doc, r.code),
        Err(f) => {
            eprintln!("hiveweb: {}", f.message);
            (
                json!({ "error": { "kind": f.kind, "message": f.message } }),
                f.code,
            )
        }
    };
    if let Err(msg) = emit(&doc, cli.out.as_deref()) {
        eprintln!("hiveweb: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
