use std::str::FromStr;

use crate::error::CliError;

/// One sweep axis, parsed from `param:start:stop:step`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridAxis {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridAxis {
    /// Points start + k·step for k = 0..=K, with stop included when it lies
    /// on the grid up to 1e-9 of a step.
    pub fn points(&self) -> Vec<f64> {
        let span = (self.stop - self.start) / self.step;
        let count = (span + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

impl FromStr for GridAxis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let [param, start, stop, step] = parts[..] else {
            return Err(CliError::Usage(format!(
                "grid `{s}` is not param:start:stop:step"
            )));
        };
        let num = |field: &str, what: &str| -> Result<f64, CliError> {
            field
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "grid `{s}`: {what} `{field}` is not a finite number"
                    ))
                })
        };
        let axis = GridAxis {
            param: param.trim().to_string(),
            start: num(start, "start")?,
            stop: num(stop, "stop")?,
            step: num(step, "step")?,
        };
        if axis.param.is_empty() {
            return Err(CliError::Usage(format!("grid `{s}` has no parameter name")));
        }
        if axis.step <= 0.0 || axis.stop < axis.start {
            return Err(CliError::Usage(format!(
                "grid `{s}` is empty: need step > 0 and stop >= start"
            )));
        }
        Ok(axis)
    }
}

/// Cartesian product of the axes; the first axis varies slowest.
pub fn grid_points(axes: &[GridAxis]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for axis in axes {
        let values = axis.points();
        points = points
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    points
}
