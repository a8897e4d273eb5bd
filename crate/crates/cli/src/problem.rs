use bregman_cc::bregman::Mode;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Operation {
    BackwardCc,
    BackwardPseudo,
    ForwardCc,
    ForwardPseudo,
    Distance,
    ProjectBackward,
    ProjectForward,
    DualityCheck,
    Verify,
}

impl Operation {
    /// Which equidistance the operation's answer satisfies.
    pub fn mode(self) -> Option<Mode> {
        match self {
            Operation::BackwardCc | Operation::BackwardPseudo => Some(Mode::Backward),
            Operation::ForwardCc | Operation::ForwardPseudo => Some(Mode::Forward),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatSpec {
    pub base: Vec<f64>,
    #[serde(default)]
    pub directions: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Equidistance tolerance for verification; defaults to the library's
    /// scaled tolerance.
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    /// Target flat of `project_*`.
    pub flat: Option<FlatSpec>,
    #[serde(default)]
    pub emit_plot: bool,
    /// Point checked by `verify`.
    pub candidate: Option<Vec<f64>>,
    /// Equidistance checked by `verify`.
    pub mode: Option<Mode>,
}

/// What a suite run compares the result against.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub status: Option<String>,
    pub point: Option<Vec<f64>>,
    pub value: Option<f64>,
    #[serde(default = "default_expect_tol")]
    pub tol: f64,
}

fn default_expect_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub function: String,
    pub dimension: Option<usize>,
    pub points: Vec<Vec<f64>>,
    pub operation: Operation,
    #[serde(default)]
    pub options: Options,
    pub expected: Option<Expected>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let p: ProblemFile = serde_json::from_str(text).map_err(|e| format!("malformed problem file: {e}"))?;
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), String> {
        let Some(first) = self.points.first() else {
            return Err("points must be nonempty".into());
        };
        let n = self.dimension.unwrap_or(first.len());
        if n == 0 {
            return Err("dimension must be positive".into());
        }
        for (i, q) in self.points.iter().enumerate() {
            if q.len() != n {
                return Err(format!("point {i} has dimension {}, expected {n}", q.len()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}
