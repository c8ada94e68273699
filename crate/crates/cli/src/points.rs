//! Points file: `{"n": 2, "points": [[1, 0, 0], ["1/2", 3, 0]], "special": true}`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::Value;
use seshadri::exact::{parse_rational, Rational};
use seshadri::fatpoints::PointConfiguration;

#[derive(Deserialize)]
struct PointsFile {
    n: usize,
    points: Vec<Vec<Value>>,
    #[serde(default = "default_special")]
    special: bool,
}

fn default_special() -> bool {
    true
}

fn coordinate(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(num) => match num.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => bail!("coordinate {num} is not an integer; write rationals as strings like \"1/2\""),
        },
        Value::String(s) => Ok(parse_rational(s)?),
        other => bail!("coordinate {other} must be an integer or a rational string"),
    }
}

pub fn parse_points(text: &str) -> Result<PointConfiguration> {
    let file: PointsFile = serde_json::from_str(text).context("points file must be {\"n\": .., \"points\": [[..], ..]}")?;
    let points = file
        .points
        .iter()
        .map(|p| p.iter().map(coordinate).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(PointConfiguration::explicit(file.n, points, file.special)?)
}

pub fn load_points(path: &Path) -> Result<PointConfiguration> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_points(&text).with_context(|| format!("in {}", path.display()))
}
