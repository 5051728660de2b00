use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DunklError, Result};

/// Multiplicities k = (k₁, …, k_n), one per coordinate reflection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MultiplicityVector {
    k: Vec<f64>,
}

impl MultiplicityVector {
    pub fn new(k: Vec<f64>) -> Result<Self> {
        if k.is_empty() {
            return Err(DunklError::Config(
                "multiplicity vector must be non-empty".into(),
            ));
        }
        for &kj in &k {
            if !(kj.is_finite() && kj >= 0.0) {
                return Err(DunklError::InvalidParameter {
                    name: "k",
                    value: kj,
                    reason: "multiplicities must be finite and non-negative",
                });
            }
        }
        Ok(Self { k })
    }

    /// One-dimensional multiplicity.
    pub fn scalar(k: f64) -> Result<Self> {
        Self::new(vec![k])
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn get(&self, j: usize) -> f64 {
        self.k[j]
    }

    /// N = n + 2 Σ k_j.
    pub fn homogeneous_dimension(&self) -> f64 {
        self.k.len() as f64 + 2.0 * self.k.iter().sum::<f64>()
    }

    pub fn is_zero(&self) -> bool {
        self.k.iter().all(|&kj| kj == 0.0)
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(DunklError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for MultiplicityVector {
    type Error = DunklError;

    fn try_from(k: Vec<f64>) -> Result<Self> {
        Self::new(k)
    }
}

impl From<MultiplicityVector> for Vec<f64> {
    fn from(m: MultiplicityVector) -> Self {
        m.k
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.k.iter().map(|v| format!("{v}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for MultiplicityVector {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self> {
        let k = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| DunklError::Config(format!("bad multiplicity `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_dimension() {
        let m = MultiplicityVector::new(vec![0.7, 1.2]).unwrap();
        assert!((m.homogeneous_dimension() - 5.8).abs() < 1e-15);
        assert_eq!(
            MultiplicityVector::scalar(0.0)
                .unwrap()
                .homogeneous_dimension(),
            1.0
        );
    }

    #[test]
    fn rejects_negative() {
        assert!(MultiplicityVector::new(vec![0.5, -0.1]).is_err());
        assert!(MultiplicityVector::new(vec![]).is_err());
    }

    #[test]
    fn round_trips_through_text() {
        let m: MultiplicityVector = "0.7, 1.2".parse().unwrap();
        assert_eq!(m.to_string(), "0.7,1.2");
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[0.7,1.2]");
        assert!(serde_json::from_str::<MultiplicityVector>("[-1.0]").is_err());
    }
}
