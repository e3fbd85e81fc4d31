//! Named configurations: Lie type, diagram automorphism, ring and base field.

use std::sync::Arc;

use serde_json::Value;

use crate::ema::{EmaError, MapSetting};
use crate::gammaring::{GammaError, GammaRing, RingKind, WeightFunction};
use crate::liecore::{build_root_system, chevalley_algebra, DiagramAutomorphism, Family};
use crate::scalar::{Field, ParseScalarError, Scalar};
use crate::LieError;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}` (expected one of S1, S2, S3, S4)")]
    Unknown(String),
    #[error("invalid ψ: {0}")]
    Psi(String),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Ema(#[from] EmaError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub family: Family,
    pub rank: usize,
    /// automorphism in 1-based cycle notation
    pub cycles: &'static str,
    pub field: Field,
    pub ring: RingKind,
    pub default_points: Vec<Scalar>,
    /// shipped weight functions, as accepted by [`Scenario::parse_psi`]
    pub examples: Vec<&'static str>,
}

pub const NAMES: [&str; 4] = ["S1", "S2", "S3", "S4"];

impl Scenario {
    pub fn get(name: &str) -> Result<Self, ScenarioError> {
        let (family, rank, cycles, field) = match name {
            "S1" => (Family::A, 1, "id", Field::Rational),
            "S2" => (Family::A, 3, "(1 3)", Field::Rational),
            "S3" => (Family::A, 2, "(1 2)", Field::Sqrt2),
            "S4" => (Family::D, 4, "(1 3 4)", Field::Eisenstein),
            _ => return Err(ScenarioError::Unknown(name.to_string())),
        };
        let examples = match name {
            "S1" => vec![r#"{"1": [1]}"#, r#"{"1": [2]}"#, r#"{"1": [3]}"#, r#"{"1": [1], "2": [1]}"#],
            "S2" => vec![r#"{"1": [1, 0, 0]}"#, r#"{"1": [0, 1, 0]}"#, r#"{"1": [1, 0, 1]}"#],
            "S3" => vec![r#"{"1": [1, 0]}"#, r#"{"1": [1, 1]}"#, r#"{"1": [1, 0], "2": [1, 0]}"#],
            _ => vec![r#"{"1": [1, 0, 0, 0]}"#],
        };
        let name = NAMES.iter().find(|n| **n == name).expect("listed above");
        Ok(Scenario {
            name,
            family,
            rank,
            cycles,
            field,
            ring: RingKind::Laurent,
            default_points: vec![Scalar::one()],
            examples,
        })
    }

    pub fn all() -> Vec<Self> {
        NAMES.iter().map(|n| Self::get(n).expect("shipped scenario")).collect()
    }

    pub fn setting(&self) -> Result<Arc<MapSetting>, ScenarioError> {
        let lie = Arc::new(chevalley_algebra(&build_root_system(self.family, self.rank)?));
        let sigma = DiagramAutomorphism::from_cycles(self.cycles, &lie.rs.cartan)?;
        let ring = GammaRing::new(self.ring, sigma.order, self.field);
        Ok(Arc::new(MapSetting::new(lie, &sigma, ring)?))
    }

    pub fn parse_point(&self, s: &str) -> Result<Scalar, ScenarioError> {
        Ok(Scalar::parse_in(s, self.field)?)
    }

    /// Parses `{"point": [weight coefficients], ...}` and completes it along Γ-orbits.
    /// Returns the given function and its completion.
    pub fn parse_psi(
        &self,
        setting: &MapSetting,
        json: &str,
    ) -> Result<(WeightFunction, WeightFunction), ScenarioError> {
        let v: Value = serde_json::from_str(json).map_err(|e| ScenarioError::Psi(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| ScenarioError::Psi("expected a JSON object".into()))?;
        let mut pairs = Vec::new();
        for (k, w) in obj {
            let p = self.parse_point(k)?;
            let mu: Vec<i64> = serde_json::from_value(w.clone())
                .map_err(|_| ScenarioError::Psi(format!("weight at {k} must be an integer array")))?;
            pairs.push((p, mu));
        }
        let given = WeightFunction::from_pairs(pairs);
        let full = given.complete(&setting.ring, &setting.fd.sigma, setting.lie.rank())?;
        Ok((given, full))
    }

    /// `ψ(p) = μ` at each default point, completed.
    pub fn psi_at_default(&self, setting: &MapSetting, mu: &[i64]) -> Result<WeightFunction, ScenarioError> {
        let given = WeightFunction::from_pairs(self.default_points.iter().map(|p| (p.clone(), mu.to_vec())));
        Ok(given.complete(&setting.ring, &setting.fd.sigma, setting.lie.rank())?)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "name": self.name,
            "type": crate::liecore::CartanType::new(self.family, self.rank).map(|t| t.to_string()).unwrap_or_default(),
            "automorphism": self.cycles,
            "ring": match self.ring { RingKind::Laurent => "k[t, t^-1]", RingKind::Polynomial => "k[t]" },
            "field_min_poly": self.field.min_poly(),
            "default_points": self.default_points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "examples": self.examples,
        })
    }
}
