//! Surface documents, the named surface catalog, result serialization and
//! SVG rendering. The command-line binary is a thin wrapper over this
//! module.

use crate::catalog;
use crate::driver::VeechResult;
use crate::exactnum::{FieldElement, FieldSpec, Rat};
use crate::geom::{Mat2, Vec2};
use crate::hyperbolic::{Geodesic, HPolygon, IdealPoint, Vertex};
use crate::surface::{build_surface, PolygonalPresentation, TranslationSurface};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Surface(crate::surface::SurfaceError),
    Field(crate::exactnum::FieldError),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "{m}"),
            CliError::Surface(e) => write!(f, "{e}"),
            CliError::Field(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<crate::surface::SurfaceError> for CliError {
    fn from(e: crate::surface::SurfaceError) -> Self {
        CliError::Surface(e)
    }
}

impl From<crate::exactnum::FieldError> for CliError {
    fn from(e: crate::exactnum::FieldError) -> Self {
        CliError::Field(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn parse_err(path: &str, msg: impl fmt::Display) -> CliError {
    CliError::Parse(format!("{path}: {msg}"))
}

/// Parse a rational like "3", "-7/2".
pub fn parse_rational(s: &str) -> Result<Rat, CliError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| CliError::Parse(format!("bad rational {s:?}")))?;
    let d = BigInt::from_str(den).map_err(|_| CliError::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(CliError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Parse a field element literal: sums of terms like "2", "1/2",
/// "sqrt3", "3/4*sqrt5", "-sqrt2". All radicals must agree and match the
/// target field (a quadratic field over that radical, or none).
pub fn parse_element_literal(spec: &Arc<FieldSpec>, input: &str) -> Result<FieldElement, CliError> {
    let mut rational = Rat::zero();
    let mut radical = Rat::zero();
    let mut radicand: Option<i64> = None;
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(CliError::Parse("empty element literal".into()));
    }
    // split into signed terms
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !matches!(cleaned.as_bytes()[i - 1], b'/' | b'*') {
            terms.push(cur.clone());
            cur.clear();
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in &terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1, term.strip_prefix('+').unwrap_or(term)),
        };
        if let Some(pos) = body.find("sqrt") {
            let coef_part = &body[..pos];
            let coef_part = coef_part.strip_suffix('*').unwrap_or(coef_part);
            let coef = if coef_part.is_empty() {
                Rat::from_integer(BigInt::from(1))
            } else {
                parse_rational(coef_part)?
            };
            let n: i64 = body[pos + 4..]
                .parse()
                .map_err(|_| CliError::Parse(format!("bad radical in term {term:?}")))?;
            match radicand {
                None => radicand = Some(n),
                Some(m) if m == n => {}
                Some(m) => {
                    return Err(CliError::Parse(format!(
                        "mixed radicals sqrt{m} and sqrt{n} in {input:?}"
                    )))
                }
            }
            radical = radical + coef * Rat::from_integer(BigInt::from(sign));
        } else {
            rational = rational + parse_rational(body)? * Rat::from_integer(BigInt::from(sign));
        }
    }
    match radicand {
        None => Ok(FieldElement::from_rat(spec, rational)),
        Some(n) => {
            if spec.degree() != 2 {
                return Err(CliError::Parse(format!(
                    "literal {input:?} uses sqrt{n} but the field is not quadratic"
                )));
            }
            // the field generator must be sqrt n: check x^2 - n
            let want = vec![BigInt::from(-n), BigInt::zero(), BigInt::from(1)];
            if spec.min_poly() != want.as_slice() {
                return Err(CliError::Parse(format!(
                    "literal {input:?} uses sqrt{n} but the field has a different generator"
                )));
            }
            Ok(FieldElement::new(spec.clone(), vec![rational, radical])
                .map_err(CliError::Field)?)
        }
    }
}

/// Parse a coordinate value: a rational string, or an array of rational
/// coefficient strings in the power basis.
fn parse_coordinate(spec: &Arc<FieldSpec>, v: &Value, path: &str) -> Result<FieldElement, CliError> {
    match v {
        Value::String(s) => {
            if s.contains("sqrt") {
                parse_element_literal(spec, s)
            } else {
                Ok(FieldElement::from_rat(spec, parse_rational(s)?))
            }
        }
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| parse_err(path, "non-integer numeric coordinate"))?;
            Ok(FieldElement::from_int(spec, i))
        }
        Value::Array(items) => {
            let mut coeffs = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                match item {
                    Value::String(s) => coeffs.push(parse_rational(s)?),
                    Value::Number(n) => coeffs.push(Rat::from_integer(BigInt::from(
                        n.as_i64()
                            .ok_or_else(|| parse_err(&format!("{path}[{i}]"), "non-integer"))?,
                    ))),
                    other => {
                        return Err(parse_err(
                            &format!("{path}[{i}]"),
                            format!("expected string or number, got {other}"),
                        ))
                    }
                }
            }
            FieldElement::new(spec.clone(), coeffs).map_err(CliError::Field)
        }
        other => Err(parse_err(path, format!("expected coordinate, got {other}"))),
    }
}

/// Parse a surface document (structured JSON text).
pub fn parse_surface_document(text: &str) -> Result<TranslationSurface, CliError> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("document is not valid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| parse_err("$", "document must be an object"))?;
    let field = obj
        .get("field")
        .ok_or_else(|| parse_err("$.field", "missing"))?;
    let spec = parse_field_spec(field)?;
    let polys_v = obj
        .get("polygons")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("$.polygons", "missing or not an array"))?;
    let mut polygons = Vec::with_capacity(polys_v.len());
    for (pi, poly) in polys_v.iter().enumerate() {
        let verts = poly
            .as_array()
            .ok_or_else(|| parse_err(&format!("$.polygons[{pi}]"), "not an array"))?;
        let mut out = Vec::with_capacity(verts.len());
        for (vi, vert) in verts.iter().enumerate() {
            let pair = vert.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                parse_err(&format!("$.polygons[{pi}][{vi}]"), "expected [x, y]")
            })?;
            let x = parse_coordinate(&spec, &pair[0], &format!("$.polygons[{pi}][{vi}][0]"))?;
            let y = parse_coordinate(&spec, &pair[1], &format!("$.polygons[{pi}][{vi}][1]"))?;
            out.push(Vec2::new(x, y));
        }
        polygons.push(out);
    }
    let gluings_v = obj
        .get("gluings")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("$.gluings", "missing or not an array"))?;
    let mut gluings = Vec::with_capacity(gluings_v.len());
    for (gi, g) in gluings_v.iter().enumerate() {
        let pair = g
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| parse_err(&format!("$.gluings[{gi}]"), "expected [[p,e],[p,e]]"))?;
        let mut sides = [(0usize, 0usize); 2];
        for (k, side) in pair.iter().enumerate() {
            let s = side.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                parse_err(&format!("$.gluings[{gi}][{k}]"), "expected [polygon, edge]")
            })?;
            let p = s[0]
                .as_u64()
                .ok_or_else(|| parse_err(&format!("$.gluings[{gi}][{k}][0]"), "expected index"))?;
            let e = s[1]
                .as_u64()
                .ok_or_else(|| parse_err(&format!("$.gluings[{gi}][{k}][1]"), "expected index"))?;
            sides[k] = (p as usize, e as usize);
        }
        gluings.push((sides[0], sides[1]));
    }
    let marked = match obj.get("marked") {
        None => Vec::new(),
        Some(Value::Array(items)) => {
            let mut out = Vec::with_capacity(items.len());
            for (mi, m) in items.iter().enumerate() {
                let s = m.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    parse_err(&format!("$.marked[{mi}]"), "expected [polygon, vertex]")
                })?;
                let p = s[0]
                    .as_u64()
                    .ok_or_else(|| parse_err(&format!("$.marked[{mi}][0]"), "expected index"))?;
                let v = s[1]
                    .as_u64()
                    .ok_or_else(|| parse_err(&format!("$.marked[{mi}][1]"), "expected index"))?;
                out.push((p as usize, v as usize));
            }
            out
        }
        Some(other) => return Err(parse_err("$.marked", format!("expected array, got {other}"))),
    };
    let pres = PolygonalPresentation {
        field: spec,
        polygons,
        gluings,
    };
    build_surface(pres, marked).map_err(CliError::Surface)
}

fn parse_field_spec(v: &Value) -> Result<Arc<FieldSpec>, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("$.field", "expected object"))?;
    let poly_v = obj
        .get("min_poly")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("$.field.min_poly", "missing or not an array"))?;
    let mut coeffs = Vec::with_capacity(poly_v.len());
    for (i, c) in poly_v.iter().enumerate() {
        let n = c
            .as_i64()
            .ok_or_else(|| parse_err(&format!("$.field.min_poly[{i}]"), "expected integer"))?;
        coeffs.push(BigInt::from(n));
    }
    let emb_v = obj
        .get("embedding")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| parse_err("$.field.embedding", "expected [lo, hi]"))?;
    let lo = match &emb_v[0] {
        Value::String(s) => parse_rational(s)?,
        Value::Number(n) => Rat::from_integer(BigInt::from(
            n.as_i64()
                .ok_or_else(|| parse_err("$.field.embedding[0]", "expected rational string"))?,
        )),
        other => return Err(parse_err("$.field.embedding[0]", format!("got {other}"))),
    };
    let hi = match &emb_v[1] {
        Value::String(s) => parse_rational(s)?,
        Value::Number(n) => Rat::from_integer(BigInt::from(
            n.as_i64()
                .ok_or_else(|| parse_err("$.field.embedding[1]", "expected rational string"))?,
        )),
        other => return Err(parse_err("$.field.embedding[1]", format!("got {other}"))),
    };
    FieldSpec::new(coeffs, (lo, hi)).map_err(CliError::Field)
}

/// Serialize a surface back to the document format; parsing the output
/// reproduces the same presentation.
pub fn surface_to_document(surface: &TranslationSurface) -> Value {
    let pres = surface.presentation();
    let field = json!({
        "min_poly": pres.field.min_poly().iter().map(|c| {
            Value::Number(serde_json::Number::from(i64::try_from(c).unwrap_or(0)))
        }).collect::<Vec<_>>(),
        "embedding": [pres.field.embedding().0.to_string(), pres.field.embedding().1.to_string()],
    });
    let polygons: Vec<Value> = pres
        .polygons
        .iter()
        .map(|poly| {
            Value::Array(
                poly.iter()
                    .map(|v| json!([element_to_json(&v.x), element_to_json(&v.y)]))
                    .collect(),
            )
        })
        .collect();
    let gluings: Vec<Value> = pres
        .gluings
        .iter()
        .map(|(a, b)| json!([[a.0, a.1], [b.0, b.1]]))
        .collect();
    let marked: Vec<Value> = surface
        .marked()
        .iter()
        .map(|(p, v)| json!([p, v]))
        .collect();
    json!({
        "field": field,
        "polygons": polygons,
        "gluings": gluings,
        "marked": marked,
    })
}

/// Resolve a surface argument: a catalog name, possibly with parameters,
/// or a path to a surface document.
pub fn resolve_surface(name: &str, a_flag: Option<&str>) -> Result<TranslationSurface, CliError> {
    match name {
        "square-torus" => return Ok(catalog::square_torus()?),
        "hex-torus" => return Ok(catalog::hex_torus()?),
        "L" => return Ok(catalog::l_surface_default()?),
        "mcmullen-genus2" => {
            return match a_flag {
                None => Ok(catalog::mcmullen_genus2_sqrt3()?),
                Some(lit) => {
                    let spec = field_for_literal(lit)?;
                    let a = parse_element_literal(&spec, lit)?;
                    Ok(catalog::mcmullen_genus2(a)?)
                }
            }
        }
        _ => {}
    }
    if let Some(args) = name.strip_prefix("L(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 2 {
            return Err(CliError::Parse(format!("L(a,b) takes two parameters, got {name:?}")));
        }
        let spec = field_for_literal(args)?;
        let a = parse_element_literal(&spec, parts[0])?;
        let b = parse_element_literal(&spec, parts[1])?;
        return Ok(catalog::l_surface(a, b)?);
    }
    let text = std::fs::read_to_string(name)
        .map_err(|e| CliError::Parse(format!("cannot read surface {name:?}: {e}")))?;
    parse_surface_document(&text)
}

/// The smallest field accommodating the radicals in a literal.
fn field_for_literal(lit: &str) -> Result<Arc<FieldSpec>, CliError> {
    if let Some(pos) = lit.find("sqrt") {
        let digits: String = lit[pos + 4..]
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        let n: i64 = digits
            .parse()
            .map_err(|_| CliError::Parse(format!("bad radical in {lit:?}")))?;
        Ok(FieldSpec::quadratic_sqrt(n))
    } else {
        Ok(FieldSpec::rationals())
    }
}

/// Parse a matrix given as "a,b;c,d" with field element literal entries.
pub fn parse_matrix(spec: &Arc<FieldSpec>, text: &str) -> Result<Mat2, CliError> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 2 {
        return Err(CliError::Parse(format!("matrix {text:?} must have two rows")));
    }
    let mut entries = Vec::with_capacity(4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 2 {
            return Err(CliError::Parse(format!("matrix row {row:?} must have two entries")));
        }
        for c in cols {
            entries.push(parse_element_literal(spec, c)?);
        }
    }
    let mut it = entries.into_iter();
    Ok(Mat2::new(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    ))
}

pub fn element_to_json(x: &FieldElement) -> Value {
    Value::Array(
        x.coeffs()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

pub fn matrix_to_json(m: &Mat2) -> Value {
    json!([
        [element_to_json(&m.a), element_to_json(&m.b)],
        [element_to_json(&m.c), element_to_json(&m.d)]
    ])
}

fn vertex_to_json(v: &Vertex) -> Value {
    match v {
        Vertex::Interior { x, y_sq } => {
            let (xf, y) = (x.to_f64(), y_sq.to_f64().max(0.0).sqrt());
            json!({"kind": "interior", "x": xf, "y": y,
                   "x_exact": element_to_json(x), "y_sq_exact": element_to_json(y_sq)})
        }
        Vertex::Ideal(IdealPoint::Finite(s)) => {
            json!({"kind": "ideal", "x": s.to_f64(), "y": 0.0})
        }
        Vertex::Ideal(IdealPoint::Infinity) => json!({"kind": "infinity"}),
    }
}

pub fn domain_to_json(poly: &HPolygon) -> Value {
    let vertices: Vec<Value> = poly.vertices().iter().map(vertex_to_json).collect();
    let sides: Vec<Value> = poly
        .sides()
        .map(|s| {
            let geo = match &s.hp.geodesic {
                Geodesic::Vertical { x } => json!({"type": "vertical", "x": x.to_f64()}),
                Geodesic::Circle { center, radius_sq } => json!({
                    "type": "circle",
                    "center": center.to_f64(),
                    "radius": radius_sq.to_f64().max(0.0).sqrt()
                }),
            };
            json!({
                "geodesic": geo,
                "matrix": matrix_to_json(&s.hp.matrix),
                "pairing_matrix": matrix_to_json(&s.hp.matrix.inv_unimodular()),
                "from": vertex_to_json(&s.from),
                "to": vertex_to_json(&s.to),
            })
        })
        .collect();
    json!({"vertices": vertices, "sides": sides, "has_free_boundary": poly.has_free_arc()})
}

pub fn result_to_json(res: &VeechResult) -> Value {
    let mut out = Map::new();
    out.insert(
        "status".into(),
        Value::String(
            match res.status {
                crate::driver::Status::Terminated => "terminated",
                crate::driver::Status::NormBoundReached => "norm_bound_reached",
            }
            .into(),
        ),
    );
    out.insert(
        "elements".into(),
        Value::Array(
            res.elements
                .iter()
                .map(|(m, n)| {
                    json!({"matrix": matrix_to_json(m), "norm_sq": element_to_json(n),
                           "norm": n.to_f64().sqrt()})
                })
                .collect(),
        ),
    );
    out.insert(
        "generators".into(),
        Value::Array(res.generators.iter().map(matrix_to_json).collect()),
    );
    out.insert("domain".into(), domain_to_json(&res.domain));
    out.insert(
        "signature".into(),
        match &res.signature {
            None => Value::Null,
            Some(sig) => json!({
                "genus": sig.genus,
                "elliptic_orders": sig.elliptic_orders,
                "cusps": sig.cusps,
                "display": sig.to_string(),
            }),
        },
    );
    out.insert(
        "shift".into(),
        match &res.shift {
            None => Value::Null,
            Some((m, n)) => json!({"matrix": matrix_to_json(m), "n": n}),
        },
    );
    out.insert(
        "contains_minus_identity".into(),
        Value::Bool(res.contains_minus_identity),
    );
    out.insert(
        "final_norm_sq".into(),
        Value::String(res.final_norm_sq.to_string()),
    );
    if let Some((mid, width)) = res.domain_area {
        out.insert("domain_area".into(), json!({"mid": mid, "width": width}));
    }
    if let Some((area_upper, twice_ball_lower)) = res.certificate {
        out.insert(
            "termination_certificate".into(),
            json!({
                "domain_area_upper": area_upper,
                "twice_ball_area_lower": twice_ball_lower,
            }),
        );
    }
    out.insert(
        "precision_exhausted".into(),
        Value::Bool(res.precision_exhausted),
    );
    Value::Object(out)
}

/// Render the domain, the agreement ball, and side labels to SVG with
/// deterministic bytes for fixed input.
pub fn render_domain_svg(res: &VeechResult, ball_cosh_sinh: Option<(f64, f64)>) -> String {
    let poly = &res.domain;
    // collect horizontal extent from side data
    let mut min_x = -1.5f64;
    let mut max_x = 1.5f64;
    for s in poly.sides() {
        match &s.hp.geodesic {
            Geodesic::Vertical { x } => {
                let v = x.to_f64();
                min_x = min_x.min(v - 0.5);
                max_x = max_x.max(v + 0.5);
            }
            Geodesic::Circle { center, radius_sq } => {
                let c = center.to_f64();
                let r = radius_sq.to_f64().max(0.0).sqrt();
                min_x = min_x.min(c - r - 0.3);
                max_x = max_x.max(c + r + 0.3);
            }
        }
    }
    let top = 3.0f64;
    let scale = 200.0;
    let width = (max_x - min_x) * scale;
    let height = top * scale;
    let sx = |x: f64| (x - min_x) * scale;
    let sy = |y: f64| (top - y) * scale;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n",
        width, height, width, height
    ));
    svg.push_str(&format!(
        "<rect width=\"{:.0}\" height=\"{:.0}\" fill=\"white\"/>\n",
        width, height
    ));
    // real axis
    svg.push_str(&format!(
        "<line x1=\"0\" y1=\"{0:.2}\" x2=\"{1:.2}\" y2=\"{0:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        sy(0.0),
        width
    ));
    // agreement ball
    if let Some((ch, sh)) = ball_cosh_sinh {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"#d0e8ff\" stroke=\"#4488cc\" stroke-width=\"1\"/>\n",
            sx(0.0),
            sy(ch),
            sh * scale
        ));
    }
    // bisector boundaries of all reported elements, faint
    for (m, _) in &res.elements {
        if let Ok(h) = crate::hyperbolic::HalfPlane::from_matrix(m) {
            match &h.geodesic {
                Geodesic::Vertical { x } => {
                    let v = x.to_f64();
                    if v.is_finite() && v > min_x && v < max_x {
                        svg.push_str(&format!(
                            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n",
                            sx(v), sy(0.0), sy(top)
                        ));
                    }
                }
                Geodesic::Circle { center, radius_sq } => {
                    let c = center.to_f64();
                    let r = radius_sq.to_f64().max(0.0).sqrt();
                    svg.push_str(&format!(
                        "<path d=\"M {:.2} {:.2} A {:.2} {:.2} 0 0 1 {:.2} {:.2}\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n",
                        sx(c - r), sy(0.0), r * scale, r * scale, sx(c + r), sy(0.0)
                    ));
                }
            }
        }
    }
    // center i
    svg.push_str(&format!(
        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#cc3333\"/>\n",
        sx(0.0),
        sy(1.0)
    ));
    for (idx, s) in poly.sides().enumerate() {
        let (label_x, label_y);
        match &s.hp.geodesic {
            Geodesic::Vertical { x } => {
                let v = x.to_f64();
                let (ya, yb) = vertical_side_span(s, top);
                svg.push_str(&format!(
                    "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#222222\" stroke-width=\"2\"/>\n",
                    sx(v), sy(ya), sx(v), sy(yb)
                ));
                label_x = v;
                label_y = (ya + yb) / 2.0;
            }
            Geodesic::Circle { center, radius_sq } => {
                let c = center.to_f64();
                let r = radius_sq.to_f64().max(0.0).sqrt();
                let (xa, ya) = point_f64(&s.from, c, r);
                let (xb, yb) = point_f64(&s.to, c, r);
                let sweep = if xa > xb { 1 } else { 0 };
                svg.push_str(&format!(
                    "<path d=\"M {:.2} {:.2} A {:.2} {:.2} 0 0 {} {:.2} {:.2}\" fill=\"none\" stroke=\"#222222\" stroke-width=\"2\"/>\n",
                    sx(xa), sy(ya), r * scale, r * scale, sweep, sx(xb), sy(yb)
                ));
                label_x = c;
                label_y = r * 1.02;
            }
        }
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#555555\">s{}</text>\n",
            sx(label_x),
            sy(label_y) - 4.0,
            idx
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn vertical_side_span(s: &crate::hyperbolic::polygon::SideData, top: f64) -> (f64, f64) {
    let yv = |v: &Vertex| -> f64 {
        match v {
            Vertex::Interior { y_sq, .. } => y_sq.to_f64().max(0.0).sqrt(),
            Vertex::Ideal(IdealPoint::Finite(_)) => 0.0,
            Vertex::Ideal(IdealPoint::Infinity) => top,
        }
    };
    (yv(&s.from), yv(&s.to))
}

fn point_f64(v: &Vertex, center: f64, r: f64) -> (f64, f64) {
    match v {
        Vertex::Interior { x, y_sq } => (x.to_f64(), y_sq.to_f64().max(0.0).sqrt()),
        Vertex::Ideal(IdealPoint::Finite(s)) => (s.to_f64(), 0.0),
        Vertex::Ideal(IdealPoint::Infinity) => (center + r, 0.0),
    }
}

/// JSON form of a marked segment: cone, sector, holonomy, pairing index.
pub fn marked_segment_to_json(m: &crate::model::MarkedSegment, pair: usize) -> Value {
    json!({
        "cone": m.cone,
        "sector": m.sector,
        "holonomy": [element_to_json(&m.holonomy.x), element_to_json(&m.holonomy.y)],
        "pair": pair,
    })
}

/// JSON for one saddle connection in marked-segment form.
pub fn connection_to_json(c: &crate::flat::SaddleConnection) -> Value {
    json!({
        "source": c.source,
        "target": c.target,
        "holonomy": [element_to_json(&c.holonomy.x), element_to_json(&c.holonomy.y)],
        "holonomy_approx": [c.holonomy.x.to_f64(), c.holonomy.y.to_f64()],
        "sector": c.source_sector,
        "target_sector": c.target_sector,
        "length_sq": element_to_json(&c.length_sq),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;

    #[test]
    fn parse_literals() {
        let q = FieldSpec::rationals();
        assert_eq!(
            parse_element_literal(&q, "3/4").unwrap(),
            FieldElement::from_rat(&q, crate::exactnum::rat(3, 4))
        );
        assert_eq!(
            parse_element_literal(&q, "-2").unwrap(),
            FieldElement::from_int(&q, -2)
        );
        let f3 = FieldSpec::quadratic_sqrt(3);
        let got = parse_element_literal(&f3, "1+sqrt3").unwrap();
        let want = FieldElement::new(f3.clone(), vec![rat_int(1), rat_int(1)]).unwrap();
        assert_eq!(got, want);
        let got = parse_element_literal(&f3, "1/2-3/4*sqrt3").unwrap();
        let want = FieldElement::new(
            f3.clone(),
            vec![crate::exactnum::rat(1, 2), crate::exactnum::rat(-3, 4)],
        )
        .unwrap();
        assert_eq!(got, want);
        assert!(parse_element_literal(&f3, "sqrt5").is_err());
        assert!(parse_element_literal(&FieldSpec::rationals(), "sqrt2").is_err());
    }

    #[test]
    fn parse_matrix_entries() {
        let q = FieldSpec::rationals();
        let m = parse_matrix(&q, "1,0;2,1").unwrap();
        assert_eq!(m, Mat2::from_ints(&q, 1, 0, 2, 1));
        let m = parse_matrix(&q, "1, -1/2; 0, 1").unwrap();
        assert_eq!(
            m.b,
            FieldElement::from_rat(&q, crate::exactnum::rat(-1, 2))
        );
        assert!(parse_matrix(&q, "1,2,3;4,5,6").is_err());
    }

    #[test]
    fn surface_document_roundtrip() {
        let text = r#"{
            "name": "square torus",
            "field": {"min_poly": [0, 1], "embedding": ["-1", "1"]},
            "polygons": [[["0","0"],["1","0"],["1","1"],["0","1"]]],
            "gluings": [[[0,0],[0,2]], [[0,1],[0,3]]],
            "marked": [[0,0]]
        }"#;
        let s = parse_surface_document(text).unwrap();
        assert_eq!(s.stratum(), vec![0]);
        assert_eq!(s.total_area(), FieldElement::from_int(s.spec(), 1));
    }

    #[test]
    fn surface_document_sqrt3_field() {
        // hexagonal torus from a document over Q(sqrt 3)
        let text = r#"{
            "field": {"min_poly": [-3, 0, 1], "embedding": ["17/10", "9/5"]},
            "polygons": [[
                [["0"],["0"]], [["2"],["0"]], [["3"],["0","1"]],
                [["2"],["0","2"]], [["0"],["0","2"]], [["-1"],["0","1"]]
            ]],
            "gluings": [[[0,0],[0,3]], [[0,1],[0,4]], [[0,2],[0,5]]],
            "marked": [[0,0],[0,1]]
        }"#;
        let s = parse_surface_document(text).unwrap();
        assert_eq!(s.stratum(), vec![0, 0]);
    }

    #[test]
    fn bad_gluing_document_diagnostics() {
        let text = r#"{
            "field": {"min_poly": [0, 1], "embedding": ["-1", "1"]},
            "polygons": [[["0","0"],["1","0"],["1","1"],["0","1"]]],
            "gluings": [[[0,0],[0,1]], [[0,2],[0,3]]]
        }"#;
        let err = parse_surface_document(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(0,0)") && msg.contains("(0,1)"), "got: {msg}");
    }

    #[test]
    fn document_roundtrip_is_idempotent() {
        for surface in [
            crate::catalog::square_torus().unwrap(),
            crate::catalog::hex_torus().unwrap(),
            crate::catalog::l_surface_default().unwrap(),
            crate::catalog::mcmullen_genus2_sqrt3().unwrap(),
        ] {
            let doc1 = surface_to_document(&surface);
            let reparsed = parse_surface_document(&doc1.to_string()).unwrap();
            let doc2 = surface_to_document(&reparsed);
            assert_eq!(doc1, doc2);
            assert_eq!(reparsed.stratum(), surface.stratum());
            assert_eq!(reparsed.total_area(), surface.total_area());
        }
    }

    #[test]
    fn resolve_catalog_names() {
        assert_eq!(resolve_surface("L", None).unwrap().stratum(), vec![2]);
        assert_eq!(
            resolve_surface("square-torus", None).unwrap().stratum(),
            vec![0]
        );
        assert_eq!(
            resolve_surface("L(3,2)", None).unwrap().stratum(),
            vec![2]
        );
        assert_eq!(
            resolve_surface("mcmullen-genus2", None).unwrap().stratum(),
            vec![1, 1]
        );
        assert_eq!(
            resolve_surface("mcmullen-genus2", Some("1+sqrt3"))
                .unwrap()
                .stratum(),
            vec![1, 1]
        );
    }
}
