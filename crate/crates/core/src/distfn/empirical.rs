use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Right-continuous step function of a weighted sample. Tied points merge.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalStep {
    points: Vec<f64>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    tail: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    points: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl EmpiricalStep {
    /// Equal weights unless `weights` is given; weights are normalized.
    pub fn new(points: Vec<f64>, weights: Option<Vec<f64>>) -> Result<EmpiricalStep> {
        if points.is_empty() {
            return Err(Error::parameter("empirical law needs at least one sample point"));
        }
        let weights = weights.unwrap_or_else(|| vec![1.0; points.len()]);
        if weights.len() != points.len() {
            return Err(Error::parameter(format!(
                "got {} sample points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::parameter(format!("sample points must be finite, got {p}")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::parameter(format!("sample weights must be > 0, got {w}")));
        }
        let mut pairs: Vec<(f64, f64)> = points.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (x, w) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        let points: Vec<f64> = merged.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = merged.iter().map(|p| p.1 / total).collect();
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cumulative.push(acc.min(1.0));
        }
        *cumulative.last_mut().expect("non-empty") = 1.0;
        let mut tail = vec![0.0; weights.len()];
        let mut acc = 0.0f64;
        for i in (0..weights.len()).rev() {
            tail[i] = acc.min(1.0);
            acc += weights[i];
        }
        Ok(EmpiricalStep {
            points,
            weights,
            cumulative,
            tail,
        })
    }

    /// Reads a CSV whose first column is `x` and optional second column a
    /// weight. A non-numeric first row is treated as a header.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<EmpiricalStep> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        EmpiricalStep::from_reader(file).map_err(|e| match e {
            Error::Io(msg) => Error::Io(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_reader(reader: impl std::io::Read) -> Result<EmpiricalStep> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut any_weight = false;
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Io(e.to_string()))?;
            let Some(first) = record.get(0).filter(|s| !s.is_empty()) else {
                continue;
            };
            let x = match first.parse::<f64>() {
                Ok(x) => x,
                Err(_) if row == 0 => continue,
                Err(_) => {
                    return Err(Error::parameter(format!("row {}: cannot parse x value {first:?}", row + 1)));
                }
            };
            let w = match record.get(1).filter(|s| !s.is_empty()) {
                Some(s) => {
                    any_weight = true;
                    s.parse::<f64>().map_err(|_| {
                        Error::parameter(format!("row {}: cannot parse weight {s:?}", row + 1))
                    })?
                }
                None => 1.0,
            };
            points.push(x);
            weights.push(w);
        }
        EmpiricalStep::new(points, any_weight.then_some(weights))
    }

    /// Distinct sample points, increasing.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Normalized weights of the distinct points.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.points.partition_point(|p| *p <= x) {
            0 => 0.0,
            i => self.cumulative[i - 1],
        }
    }

    pub fn survival(&self, x: f64) -> f64 {
        match self.points.partition_point(|p| *p <= x) {
            0 => 1.0,
            i => self.tail[i - 1],
        }
    }
}

impl Serialize for EmpiricalStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let equal = self.weights.windows(2).all(|w| w[0] == w[1]);
        Raw {
            points: self.points.clone(),
            weights: (!equal).then(|| self.weights.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EmpiricalStep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Raw::deserialize(d)?;
        EmpiricalStep::new(raw.points, raw.weights).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_is_right_continuous_and_merges_ties() {
        let e = EmpiricalStep::new(vec![2.0, 1.0, 2.0, 3.0], None).unwrap();
        assert_eq!(e.points(), &[1.0, 2.0, 3.0]);
        assert_eq!(e.value(0.999), 0.0);
        assert_eq!(e.value(1.0), 0.25);
        assert_eq!(e.value(2.0), 0.75);
        assert_eq!(e.value(2.5), 0.75);
        assert_eq!(e.value(3.0), 1.0);
        assert_eq!(e.survival(2.0), 0.25);
        assert_eq!(e.survival(3.0), 0.0);
    }

    #[test]
    fn csv_with_header_and_weights() {
        let text = "x,w\n1.0,1\n2.0,3\n";
        let e = EmpiricalStep::from_reader(text.as_bytes()).unwrap();
        assert_eq!(e.value(1.5), 0.25);
        assert_eq!(e.value(2.0), 1.0);
        let plain = EmpiricalStep::from_reader("0.5\n-1\n".as_bytes()).unwrap();
        assert_eq!(plain.points(), &[-1.0, 0.5]);
        assert!(EmpiricalStep::from_reader("1\nabc\n".as_bytes()).is_err());
        assert!(EmpiricalStep::from_reader("".as_bytes()).is_err());
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(EmpiricalStep::new(vec![1.0], Some(vec![0.0])).is_err());
        assert!(EmpiricalStep::new(vec![1.0, 2.0], Some(vec![1.0])).is_err());
        assert!(EmpiricalStep::new(vec![f64::NAN], None).is_err());
    }
}
