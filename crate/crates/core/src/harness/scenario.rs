//! Scenario documents.
//!
//! A scenario is a TOML document. Every table is checked against a fixed key
//! set so that a misspelt key is reported instead of silently ignored:
//!
//! ```toml
//! name = "example"
//! frames = ["identity", { kind = "constant_rotation", rate = 0.5 }, { kind = "wobble", fd_fallback = true }]
//! fields = ["shear", { kind = "taylor_green", wavenumber = 2.0, modulation = { a = 0.2, sigma = 3.0 } }]
//! checks = ["div_invariance", "vorticity_relation"]   # or checks = "all"
//! samples = 100
//! seed = 42
//!
//! [box]
//! min = [-1.0, -1.0, -1.0]
//! max = [1.0, 1.0, 1.0]
//!
//! [time]
//! start = 0.0
//! end = 1.0
//!
//! [fd]
//! h = 1e-3
//! ht = 1e-5
//! order = 4
//!
//! [tolerances]
//! div_invariance = 1e-6
//!
//! [physics]
//! pressure = "gaussian_T"
//! mu = 1.0
//! rho = 1.0
//! g = [0.0, 0.0, -9.81]
//! k = 1.0
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::diffops::{FdConfig, StencilOrder};
use crate::error::{Error, Result};
use crate::fields::{make_field, Field, FlowField, ScalarField, FIELD_IDS};
use crate::frames::{FrameKind, FrameSpec, FRAME_IDS};
use crate::objectivity::{CheckId, Physics, SamplingBox, TimeWindow};
use crate::tensor::Vec3;

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_SEED: u64 = 0;

const TOP_KEYS: &[&str] =
    &["name", "frames", "fields", "checks", "samples", "seed", "box", "time", "fd", "tolerances", "physics"];

/// A validated scenario with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub frames: Vec<FrameSpec>,
    pub fields: Vec<Field>,
    pub checks: Vec<CheckId>,
    pub samples: usize,
    pub seed: u64,
    #[serde(rename = "box")]
    pub bbox: SamplingBox,
    pub time: TimeWindow,
    pub fd: FdConfig,
    pub tolerances: BTreeMap<CheckId, f64>,
    pub physics: Physics,
}

impl Scenario {
    /// A scenario with the given catalog entries and default settings.
    pub fn new(frames: Vec<FrameSpec>, fields: Vec<Field>, checks: Vec<CheckId>) -> Self {
        Scenario {
            name: None,
            frames,
            fields,
            checks,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            bbox: SamplingBox::default(),
            time: TimeWindow::default(),
            fd: FdConfig::default(),
            tolerances: BTreeMap::new(),
            physics: Physics::default(),
        }
    }

    /// Tolerance for `check`: the override if present, else the default.
    pub fn tolerance(&self, check: CheckId) -> f64 {
        self.tolerances.get(&check).copied().unwrap_or_else(|| check.default_tolerance())
    }

    pub fn validate(&self) -> Result<()> {
        if self.frames.is_empty() {
            return Err(config("frames must not be empty"));
        }
        if self.fields.is_empty() {
            return Err(config("fields must not be empty"));
        }
        if self.checks.is_empty() {
            return Err(config("checks must not be empty"));
        }
        if self.samples < 1 {
            return Err(config(format!("samples ≥ 1 required (got {})", self.samples)));
        }
        for (i, f) in self.frames.iter().enumerate() {
            f.build().map_err(|e| config(format!("frames[{i}] ({}): {e}", f.label())))?;
        }
        for (i, f) in self.fields.iter().enumerate() {
            make_field(*f).map_err(|e| config(format!("fields[{i}] ({}): {e}", f.id())))?;
        }
        self.bbox.validate().map_err(|e| config(e.to_string()))?;
        self.time.validate().map_err(|e| config(e.to_string()))?;
        self.fd.validate().map_err(|e| config(format!("fd: {e}")))?;
        for (c, tol) in &self.tolerances {
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(config(format!("tolerances.{c} must be positive, got {tol}")));
            }
        }
        let p = &self.physics;
        if !(p.mu.is_finite() && p.mu >= 0.0) {
            return Err(config(format!("physics.mu must be non-negative, got {}", p.mu)));
        }
        if !(p.rho.is_finite() && p.rho > 0.0) {
            return Err(config(format!("physics.rho must be positive, got {}", p.rho)));
        }
        if !(p.k.is_finite() && p.k >= 0.0) {
            return Err(config(format!("physics.k must be non-negative, got {}", p.k)));
        }
        if !p.g.is_finite() {
            return Err(config("physics.g must be finite"));
        }
        make_field(Field::Scalar(p.pressure)).map_err(|e| config(format!("physics.pressure: {e}")))?;
        Ok(())
    }
}

fn config(msg: impl Into<String>) -> Error {
    Error::Scenario(msg.into())
}

fn check_keys(table: &Table, allowed: &[&str], context: &str) -> Result<()> {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            let path = if context.is_empty() { key.clone() } else { format!("{context}.{key}") };
            return Err(config(format!("unknown key `{path}`; allowed keys: {}", allowed.join(", "))));
        }
    }
    Ok(())
}

fn as_table<'a>(v: &'a Value, key: &str) -> Result<&'a Table> {
    v.as_table().ok_or_else(|| config(format!("`{key}` must be a table")))
}

fn as_f64(v: &Value, key: &str) -> Result<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(config(format!("`{key}` must be a number"))),
    }
}

fn as_vec3(v: &Value, key: &str) -> Result<Vec3> {
    let arr = v.as_array().filter(|a| a.len() == 3).ok_or_else(|| config(format!("`{key}` must be an array of 3 numbers")))?;
    Ok(Vec3::new(as_f64(&arr[0], key)?, as_f64(&arr[1], key)?, as_f64(&arr[2], key)?))
}

fn as_u64(v: &Value, key: &str) -> Result<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(config(format!("`{key}` must be a non-negative integer"))),
    }
}

fn entry_kind<'a>(t: &'a Table, context: &str) -> Result<&'a str> {
    t.get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| config(format!("{context}: missing string key `kind`")))
}

fn parse_frame(v: &Value, context: &str) -> Result<FrameSpec> {
    let unknown = |id: &str| config(format!("{context}: unknown frame id `{id}`; valid ids: {}", FRAME_IDS.join(", ")));
    match v {
        Value::String(id) => FrameSpec::default_for(id).ok_or_else(|| unknown(id)),
        Value::Table(t) => {
            let kind = entry_kind(t, context)?;
            if FrameKind::default_for(kind).is_none() {
                return Err(unknown(kind));
            }
            let mut allowed = vec!["kind", "fd_fallback"];
            allowed.extend_from_slice(FrameKind::param_keys(kind));
            check_keys(t, &allowed, context)?;
            Value::Table(t.clone())
                .try_into::<FrameSpec>()
                .map_err(|e| config(format!("{context} ({kind}): {}", e.message().trim())))
        }
        _ => Err(config(format!("{context} must be a frame id or a table"))),
    }
}

fn parse_field(v: &Value, context: &str) -> Result<Field> {
    let unknown = |id: &str| config(format!("{context}: unknown field id `{id}`; valid ids: {}", FIELD_IDS.join(", ")));
    match v {
        Value::String(id) => Field::default_for(id).map_err(|_| unknown(id)),
        Value::Table(t) => {
            let kind = entry_kind(t, context)?;
            let default = Field::default_for(kind).map_err(|_| unknown(kind))?;
            let mut allowed = vec!["kind", "modulation"];
            allowed.extend_from_slice(Field::param_keys(kind));
            check_keys(t, &allowed, context)?;
            let value = Value::Table(t.clone());
            let wrap = |e: toml::de::Error| config(format!("{context} ({kind}): {}", e.message().trim()));
            match default {
                Field::Flow(_) => value.try_into::<FlowField>().map(Field::Flow).map_err(wrap),
                Field::Scalar(_) => value.try_into::<ScalarField>().map(Field::Scalar).map_err(wrap),
            }
        }
        _ => Err(config(format!("{context} must be a field id or a table"))),
    }
}

fn parse_checks(v: &Value) -> Result<Vec<CheckId>> {
    if v.as_str() == Some("all") {
        return Ok(CheckId::ALL.to_vec());
    }
    let arr = v.as_array().ok_or_else(|| config("`checks` must be a list of check ids or \"all\""))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, c) in arr.iter().enumerate() {
        let id = c.as_str().ok_or_else(|| config(format!("checks[{i}] must be a string")))?;
        let check: CheckId = id.parse().map_err(|e: String| config(format!("checks[{i}]: {e}")))?;
        if out.contains(&check) {
            return Err(config(format!("checks[{i}]: duplicate check id `{id}`")));
        }
        out.push(check);
    }
    Ok(out)
}

fn parse_list<T>(doc: &Table, key: &str, parse: impl Fn(&Value, &str) -> Result<T>) -> Result<Vec<T>> {
    let v = doc.get(key).ok_or_else(|| config(format!("missing required key `{key}`")))?;
    let arr = v.as_array().ok_or_else(|| config(format!("`{key}` must be a list")))?;
    arr.iter().enumerate().map(|(i, e)| parse(e, &format!("{key}[{i}]"))).collect()
}

fn parse_fd(t: &Table) -> Result<FdConfig> {
    check_keys(t, &["h", "ht", "order"], "fd")?;
    let mut fd = FdConfig::default();
    if let Some(v) = t.get("h") {
        fd.h = as_f64(v, "fd.h")?;
    }
    if let Some(v) = t.get("ht") {
        fd.h_t = as_f64(v, "fd.ht")?;
    }
    if let Some(v) = t.get("order") {
        let order = as_u64(v, "fd.order")?;
        fd.order = u8::try_from(order)
            .ok()
            .and_then(|o| StencilOrder::try_from(o).ok())
            .ok_or_else(|| config(format!("fd.order must be 2 or 4, got {order}")))?;
    }
    Ok(fd)
}

fn parse_physics(t: &Table) -> Result<Physics> {
    check_keys(t, &["pressure", "mu", "rho", "g", "k"], "physics")?;
    let mut p = Physics::default();
    if let Some(v) = t.get("pressure") {
        p.pressure = match parse_field(v, "physics.pressure")? {
            Field::Scalar(s) => s,
            Field::Flow(_) => return Err(config("physics.pressure must be a scalar field (gaussian_T or linear_T)")),
        };
    }
    if let Some(v) = t.get("mu") {
        p.mu = as_f64(v, "physics.mu")?;
    }
    if let Some(v) = t.get("rho") {
        p.rho = as_f64(v, "physics.rho")?;
    }
    if let Some(v) = t.get("g") {
        p.g = as_vec3(v, "physics.g")?;
    }
    if let Some(v) = t.get("k") {
        p.k = as_f64(v, "physics.k")?;
    }
    Ok(p)
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: Table = toml::from_str(text).map_err(|e| config(format!("malformed document: {}", e.message().trim())))?;
    check_keys(&doc, TOP_KEYS, "")?;

    let checks = parse_checks(doc.get("checks").ok_or_else(|| config("missing required key `checks`"))?)?;
    let mut s = Scenario::new(parse_list(&doc, "frames", parse_frame)?, parse_list(&doc, "fields", parse_field)?, checks);

    if let Some(v) = doc.get("name") {
        s.name = Some(v.as_str().ok_or_else(|| config("`name` must be a string"))?.to_string());
    }
    if let Some(v) = doc.get("samples") {
        let n = as_u64(v, "samples")?;
        s.samples = usize::try_from(n).map_err(|_| config("`samples` is too large"))?;
    }
    if let Some(v) = doc.get("seed") {
        s.seed = as_u64(v, "seed")?;
    }
    if let Some(v) = doc.get("box") {
        let t = as_table(v, "box")?;
        check_keys(t, &["min", "max"], "box")?;
        if let Some(m) = t.get("min") {
            s.bbox.min = as_vec3(m, "box.min")?;
        }
        if let Some(m) = t.get("max") {
            s.bbox.max = as_vec3(m, "box.max")?;
        }
    }
    if let Some(v) = doc.get("time") {
        let t = as_table(v, "time")?;
        check_keys(t, &["start", "end"], "time")?;
        if let Some(x) = t.get("start") {
            s.time.start = as_f64(x, "time.start")?;
        }
        if let Some(x) = t.get("end") {
            s.time.end = as_f64(x, "time.end")?;
        }
    }
    if let Some(v) = doc.get("fd") {
        s.fd = parse_fd(as_table(v, "fd")?)?;
    }
    if let Some(v) = doc.get("tolerances") {
        let t = as_table(v, "tolerances")?;
        for (key, val) in t {
            let check: CheckId = key.parse().map_err(|e: String| config(format!("tolerances: {e}")))?;
            s.tolerances.insert(check, as_f64(val, &format!("tolerances.{key}"))?);
        }
    }
    if let Some(v) = doc.get("physics") {
        s.physics = parse_physics(as_table(v, "physics")?)?;
    }

    s.validate()?;
    Ok(s)
}
