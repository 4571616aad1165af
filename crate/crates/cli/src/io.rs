//! File formats: function, body and weight specs (JSON), grid data and
//! measures (CSV).

use std::fs;
use std::path::{Path, PathBuf};

use orlicz_core::{
    Ambient, Atom, ClosedFormPrototype, ConvexBody, DiscreteMeasure, Grid, LogConcaveFunction, Point, Potential,
    Provenance, SampledConvexFunction, WeightFunction,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(what: impl Into<String>, msg: impl ToString) -> CliError {
    CliError::Parse {
        what: what.into(),
        msg: msg.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub m: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid, CliError> {
        Ok(Grid::new(self.dim, self.r, self.m)?)
    }

    pub fn of(grid: &Grid) -> Self {
        Self {
            dim: grid.dim(),
            r: grid.half_width(0),
            m: grid.m(),
        }
    }
}

/// `R,m` as given on the command line.
pub fn parse_grid_flag(s: &str, dim: usize) -> Result<Grid, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [r, m] = parts[..] else {
        return Err(parse_err("grid", format!("expected R,m, got {s:?}")));
    };
    let r: f64 = r.parse().map_err(|e| parse_err("grid radius", e))?;
    let m: usize = m.parse().map_err(|e| parse_err("grid size", e))?;
    Ok(Grid::new(dim, r, m)?)
}

pub fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| parse_err(what, e)))
        .collect()
}

/// A scalar (1D) or a pair (2D).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Scalar(f64),
    Pair(Vec<f64>),
}

impl Coord {
    fn point(&self) -> Result<Point, CliError> {
        match self {
            Coord::Scalar(x) => Ok([*x, 0.0]),
            Coord::Pair(v) if v.len() == 1 => Ok([v[0], 0.0]),
            Coord::Pair(v) if v.len() == 2 => Ok([v[0], v[1]]),
            Coord::Pair(v) => Err(parse_err("coordinate", format!("{} components", v.len()))),
        }
    }

    fn is_planar(&self) -> bool {
        matches!(self, Coord::Pair(v) if v.len() == 2)
    }
}

fn points(coords: &[Coord]) -> Result<Vec<Point>, CliError> {
    coords.iter().map(Coord::point).collect()
}

/// Body JSON: `{"vertices": [...]}`, `{"cube": r}`, `{"ball": r}` or `{"interval": [a, b]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BodySpec {
    Vertices {
        dim: Option<usize>,
        vertices: Vec<Coord>,
    },
    Cube {
        dim: Option<usize>,
        cube: f64,
    },
    Ball {
        dim: Option<usize>,
        ball: f64,
        n: Option<usize>,
    },
    Interval {
        interval: [f64; 2],
    },
}

/// Vertices of the polygonal disc used for `{"ball": r}` in the plane.
pub const BALL_VERTICES: usize = 256;

impl BodySpec {
    pub fn build(&self, default_dim: usize) -> Result<ConvexBody, CliError> {
        Ok(match self {
            BodySpec::Vertices { dim, vertices } => {
                let inferred = if vertices.iter().any(Coord::is_planar) { 2 } else { 1 };
                ConvexBody::from_points(dim.unwrap_or(inferred), &points(vertices)?)?
            }
            BodySpec::Cube { dim, cube } => ConvexBody::cube(dim.unwrap_or(default_dim), *cube)?,
            BodySpec::Ball { dim, ball, n } => {
                ConvexBody::ball(dim.unwrap_or(default_dim), *ball, n.unwrap_or(BALL_VERTICES))?
            }
            BodySpec::Interval { interval } => ConvexBody::interval(interval[0], interval[1])?,
        })
    }
}

pub fn load_body(path: &Path, default_dim: usize) -> Result<ConvexBody, CliError> {
    let spec: BodySpec = serde_json::from_str(&read(path)?).map_err(|e| parse_err(path.display().to_string(), e))?;
    spec.build(default_dim)
}

pub fn body_json(body: &ConvexBody) -> Value {
    json!({ "dim": body.dim(), "vertices": body.vertices().iter().map(|v| point_json(v, body.dim())).collect::<Vec<_>>() })
}

pub fn point_json(p: &Point, dim: usize) -> Value {
    if dim == 1 {
        json!(p[0])
    } else {
        json!([p[0], p[1]])
    }
}

/// Node value of grid data: a number or the `inf` token.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum NodeValue {
    Number(f64),
    Token(String),
}

fn node_value(v: &NodeValue) -> Result<Option<f64>, CliError> {
    match v {
        NodeValue::Number(x) => Ok(Some(*x)),
        NodeValue::Token(t) => parse_node(t),
    }
}

fn parse_node(t: &str) -> Result<Option<f64>, CliError> {
    match t.trim() {
        "inf" | "+inf" | "Infinity" => Ok(None),
        s => s
            .parse::<f64>()
            .map(Some)
            .map_err(|e| parse_err("grid value", format!("{s:?}: {e}"))),
    }
}

#[derive(Debug, Clone, Deserialize)]
struct FunctionSpec {
    kind: String,
    dim: Option<usize>,
    t: Option<f64>,
    c: Option<f64>,
    body: Option<BodySpec>,
    slopes: Option<Vec<Coord>>,
    offsets: Option<Vec<f64>>,
    values: Option<Vec<NodeValue>>,
    data: Option<PathBuf>,
    grid: Option<GridSpec>,
}

/// A function read from a spec file together with its computation grid, if given.
#[derive(Debug, Clone)]
pub struct LoadedFunction {
    pub f: LogConcaveFunction,
    pub grid: Option<Grid>,
    pub spec: Value,
}

impl LoadedFunction {
    pub fn grid_or_natural(&self) -> Result<Grid, CliError> {
        match &self.grid {
            Some(g) => Ok(g.clone()),
            None => Ok(self.f.natural_grid()?),
        }
    }
}

fn need<T: Clone>(v: &Option<T>, kind: &str, field: &str) -> Result<T, CliError> {
    v.clone()
        .ok_or_else(|| parse_err(format!("{kind} function"), format!("missing field {field:?}")))
}

pub fn load_function(path: &Path) -> Result<LoadedFunction, CliError> {
    let text = read(path)?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| parse_err(path.display().to_string(), e))?;
    // a solve report carries its solution under "result.solution"
    if let Some(sol) = value.pointer("/result/solution").cloned() {
        value = sol;
    }
    function_from_value(&value, path.parent().unwrap_or(Path::new(".")))
}

pub fn function_from_value(value: &Value, base: &Path) -> Result<LoadedFunction, CliError> {
    let spec: FunctionSpec = serde_json::from_value(value.clone()).map_err(|e| parse_err("function spec", e))?;
    let grid = spec.grid.map(|g| g.build()).transpose()?;
    let dim = spec.dim.or(grid.as_ref().map(Grid::dim));
    let kind = spec.kind.as_str();
    let body = |d| -> Result<ConvexBody, CliError> { need(&spec.body, kind, "body")?.build(d) };
    let f: LogConcaveFunction = match kind {
        "exponential_cone" => ClosedFormPrototype::exponential_cone(dim.unwrap_or(1), spec.t.unwrap_or(1.0))?.into(),
        "gaussian" => ClosedFormPrototype::Gaussian { dim: dim.unwrap_or(1) }.into(),
        "indicator" => ClosedFormPrototype::Indicator {
            body: body(dim.unwrap_or(1))?,
        }
        .into(),
        "scaled_indicator" => {
            ClosedFormPrototype::scaled_indicator(need(&spec.c, kind, "c")?, body(dim.unwrap_or(1))?)?.into()
        }
        "max_affine" => {
            let slopes = need(&spec.slopes, kind, "slopes")?;
            let inferred = if slopes.iter().any(Coord::is_planar) { 2 } else { 1 };
            ClosedFormPrototype::max_affine(
                dim.unwrap_or(inferred),
                points(&slopes)?,
                need(&spec.offsets, kind, "offsets")?,
            )?
            .into()
        }
        "grid" => {
            let g = grid
                .clone()
                .ok_or_else(|| parse_err("grid function", "missing field \"grid\""))?;
            let nodes: Vec<Option<f64>> = match (&spec.values, &spec.data) {
                (Some(v), _) => v.iter().map(node_value).collect::<Result<_, _>>()?,
                (None, Some(p)) => read_grid_data(&base.join(p))?,
                (None, None) => return Err(parse_err("grid function", "needs \"values\" or \"data\"")),
            };
            sampled_from_nodes(g, nodes)?.into()
        }
        other => return Err(parse_err("function spec", format!("unknown kind {other:?}"))),
    };
    Ok(LoadedFunction {
        f,
        grid,
        spec: value.clone(),
    })
}

fn sampled_from_nodes(grid: Grid, nodes: Vec<Option<f64>>) -> Result<SampledConvexFunction, CliError> {
    if nodes.len() != grid.len() {
        return Err(parse_err(
            "grid data",
            format!("{} values for {} nodes", nodes.len(), grid.len()),
        ));
    }
    let mask: Vec<bool> = nodes.iter().map(Option::is_none).collect();
    let values: Vec<f64> = nodes.iter().map(|v| v.unwrap_or(0.0)).collect();
    Ok(SampledConvexFunction::new(grid, values, mask, Provenance::GridData)?)
}

/// Flat CSV of node values, row-major, `inf` for masked nodes.
pub fn read_grid_data(path: &Path) -> Result<Vec<Option<f64>>, CliError> {
    let text = read(path)?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_node)
        .collect()
}

pub fn write_grid_data(values: &[Option<f64>]) -> String {
    let mut out = values
        .iter()
        .map(|v| v.map_or_else(|| "inf".to_string(), |x| format!("{x:?}")))
        .collect::<Vec<_>>()
        .join("\n");
    out.push('\n');
    out
}

/// JSON spec that `load_function` reads back.
pub fn function_json(f: &LogConcaveFunction) -> Value {
    match f.potential() {
        Potential::Closed(p) => serde_json::to_value(p).expect("prototype serializes"),
        Potential::Sampled(s) => {
            let values: Vec<Value> = (0..s.grid().len())
                .map(|k| s.value(k).map_or_else(|| json!("inf"), |x| json!(x)))
                .collect();
            json!({ "kind": "grid", "grid": GridSpec::of(s.grid()), "values": values })
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
struct WeightSpec {
    kind: String,
    q: Option<f64>,
    alpha: Option<f64>,
}

/// `constant`, `power:q=2`, `gaussian_density`, `stretched_exp:alpha=0.5`,
/// `exp_abs` (the inadmissible `e^{|x|}`), a JSON object or a `.json` file.
pub fn parse_weight(s: &str, dim: usize) -> Result<WeightFunction, CliError> {
    let s = s.trim();
    let spec = if s.starts_with('{') {
        serde_json::from_str::<WeightSpec>(s).map_err(|e| parse_err("weight", e))?
    } else if s.ends_with(".json") {
        let path = Path::new(s);
        serde_json::from_str::<WeightSpec>(&read(path)?).map_err(|e| parse_err("weight", e))?
    } else {
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let mut spec = WeightSpec {
            kind: kind.to_string(),
            q: None,
            alpha: None,
        };
        for kv in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| parse_err("weight", format!("expected key=value, got {kv:?}")))?;
            let v: f64 = v.trim().parse().map_err(|e| parse_err("weight parameter", e))?;
            match k.trim() {
                "q" => spec.q = Some(v),
                "alpha" => spec.alpha = Some(v),
                other => return Err(parse_err("weight", format!("unknown parameter {other:?}"))),
            }
        }
        spec
    };
    let missing = |p: &str| parse_err("weight", format!("{} needs {p}", spec.kind));
    Ok(match spec.kind.as_str() {
        "constant" => WeightFunction::constant(dim),
        "power" => WeightFunction::power(dim, spec.q.ok_or_else(|| missing("q"))?)?,
        "gaussian_density" | "gaussian" => WeightFunction::gaussian_density(dim),
        "stretched_exp" => WeightFunction::stretched_exp(dim, spec.alpha.ok_or_else(|| missing("alpha"))?)?,
        "exp_abs" => WeightFunction::custom(dim, "exp_abs", true, |x| x[0].hypot(x[1]).exp())?,
        other => return Err(parse_err("weight", format!("unknown kind {other:?}"))),
    })
}

/// Measure CSV with header `mass,x1[,x2]`.
pub fn read_measure(path: &Path, sphere: bool) -> Result<DiscreteMeasure, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(path.display().to_string(), e))?;
    let headers = rdr.headers().map_err(|e| parse_err("measure header", e))?.clone();
    let dim = match headers.iter().collect::<Vec<_>>()[..] {
        ["mass", "x1"] => 1,
        ["mass", "x1", "x2"] => 2,
        _ => {
            return Err(parse_err(
                "measure header",
                format!("expected mass,x1[,x2], got {headers:?}"),
            ))
        }
    };
    let mut atoms = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err("measure row", e))?;
        let num = |i: usize| -> Result<f64, CliError> {
            rec.get(i)
                .ok_or_else(|| parse_err("measure row", "short row"))?
                .parse::<f64>()
                .map_err(|e| parse_err("measure value", e))
        };
        let location = if dim == 1 { [num(1)?, 0.0] } else { [num(1)?, num(2)?] };
        atoms.push(Atom {
            location,
            mass: num(0)?,
        });
    }
    let ambient = if sphere {
        Ambient::Sphere(dim)
    } else {
        Ambient::Euclidean(dim)
    };
    Ok(DiscreteMeasure::new(ambient, atoms)?)
}

pub fn measure_csv(measure: &DiscreteMeasure) -> Result<String, CliError> {
    let dim = measure.dim();
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: &[&str] = if dim == 1 {
        &["mass", "x1"]
    } else {
        &["mass", "x1", "x2"]
    };
    let csv_err = |e: csv::Error| parse_err("measure output", e);
    w.write_record(header).map_err(csv_err)?;
    for a in &measure.atoms {
        let mut row = vec![format!("{:?}", a.mass), format!("{:?}", a.location[0])];
        if dim == 2 {
            row.push(format!("{:?}", a.location[1]));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| parse_err("measure output", e))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn measure_json(measure: &DiscreteMeasure) -> Value {
    let dim = measure.dim();
    json!({
        "ambient": measure.ambient,
        "total_mass": measure.total_mass(),
        "atoms": measure.atoms.iter().map(|a| json!({ "mass": a.mass, "location": point_json(&a.location, dim) })).collect::<Vec<_>>(),
    })
}
