//! Domain-randomization parameter sampling and application.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How a sampled value modifies its nominal quantity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApplyMode {
    Scaling,
    Additive,
}

/// Sampling distribution for one randomized parameter.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dist {
    Uniform { a: f64, b: f64 },
    /// `sigma_sq` is the variance.
    Normal { mu: f64, sigma_sq: f64 },
    /// exp(Uniform(ln a, ln b)); support [a, b].
    ExpUniform { a: f64, b: f64 },
}

#[derive(Debug, Error)]
pub enum RandError {
    #[error("malformed randomization spec for '{name}': {reason}")]
    MalformedSpec { name: String, reason: String },
}

impl Dist {
    fn validate(&self, name: &str) -> Result<(), RandError> {
        let err = |reason: &str| RandError::MalformedSpec {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        match *self {
            Dist::Uniform { a, b } => {
                if a > b {
                    return Err(err(&format!("uniform bounds inverted: {a} > {b}")));
                }
            }
            Dist::Normal { sigma_sq, .. } => {
                if sigma_sq < 0.0 {
                    return Err(err("negative variance"));
                }
            }
            Dist::ExpUniform { a, b } => {
                if a <= 0.0 || b <= 0.0 {
                    return Err(err("exp-uniform requires positive bounds"));
                }
                if a > b {
                    return Err(err(&format!("exp-uniform bounds inverted: {a} > {b}")));
                }
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            Dist::Uniform { a, b } => {
                if a == b {
                    a
                } else {
                    rng.gen_range(a..b)
                }
            }
            Dist::Normal { mu, sigma_sq } => {
                if sigma_sq == 0.0 {
                    mu
                } else {
                    Normal::new(mu, sigma_sq.sqrt()).expect("validated").sample(rng)
                }
            }
            Dist::ExpUniform { a, b } => {
                if a == b {
                    a
                } else {
                    rng.gen_range(a.ln()..b.ln()).exp()
                }
            }
        }
    }

    /// Inclusive support bounds (infinite for normal).
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Dist::Uniform { a, b } => (a, b),
            Dist::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Dist::ExpUniform { a, b } => (a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub mode: ApplyMode,
    pub dist: Dist,
}

/// The set of randomized physical and control parameters for a task.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RandomizationSpec {
    pub params: Vec<ParamSpec>,
}

impl RandomizationSpec {
    /// The default parameter set used by every bundled task.
    pub fn standard() -> RandomizationSpec {
        use ApplyMode::*;
        let p = |name: &str, mode: ApplyMode, dist: Dist| ParamSpec {
            name: name.to_string(),
            mode,
            dist,
        };
        RandomizationSpec {
            params: vec![
                p("object_mass", Scaling, Dist::Uniform { a: 0.5, b: 1.5 }),
                p("object_static_friction", Scaling, Dist::Uniform { a: 0.7, b: 1.3 }),
                p("robot_static_friction", Scaling, Dist::Uniform { a: 0.7, b: 1.3 }),
                p("state_observation", Additive, Dist::Uniform { a: -0.002, b: 0.002 }),
                p("action", Additive, Dist::Normal { mu: 0.0, sigma_sq: 0.01 }),
                p("restitution", Scaling, Dist::Uniform { a: 0.5, b: 1.5 }),
                p("joint_lower_range", Additive, Dist::Normal { mu: 0.0, sigma_sq: 0.01 }),
                p("joint_upper_range", Additive, Dist::Normal { mu: 0.0, sigma_sq: 0.01 }),
                p("joint_damping", Scaling, Dist::ExpUniform { a: 0.3, b: 3.0 }),
                p("joint_stiffness", Scaling, Dist::ExpUniform { a: 0.75, b: 1.5 }),
                p("gravity", Scaling, Dist::Uniform { a: 0.9, b: 1.1 }),
                p("compliance", Scaling, Dist::Uniform { a: 0.5, b: 1.5 }),
            ],
        }
    }

    pub fn validate(&self) -> Result<(), RandError> {
        for p in &self.params {
            p.dist.validate(&p.name)?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }

    /// A spec whose uniform-style ranges are widened by `factor` around their
    /// center, so samples can fall outside the training support. Used by the
    /// deployment-analog evaluation regime.
    pub fn widened(&self, factor: f64) -> RandomizationSpec {
        let params = self
            .params
            .iter()
            .map(|p| {
                let dist = match p.dist {
                    Dist::Uniform { a, b } => {
                        let c = 0.5 * (a + b);
                        let h = 0.5 * (b - a) * factor;
                        Dist::Uniform { a: c - h, b: c + h }
                    }
                    Dist::Normal { mu, sigma_sq } => Dist::Normal {
                        mu,
                        sigma_sq: sigma_sq * factor * factor,
                    },
                    Dist::ExpUniform { a, b } => {
                        let (la, lb) = (a.ln(), b.ln());
                        let c = 0.5 * (la + lb);
                        let h = 0.5 * (lb - la) * factor;
                        Dist::ExpUniform {
                            a: (c - h).exp(),
                            b: (c + h).exp(),
                        }
                    }
                };
                ParamSpec {
                    name: p.name.clone(),
                    mode: p.mode,
                    dist,
                }
            })
            .collect();
        RandomizationSpec { params }
    }
}

/// One drawn value per parameter. An empty sample is the identity.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RandomizationSample {
    pub values: Vec<(String, f64)>,
}

impl RandomizationSample {
    pub fn identity() -> RandomizationSample {
        RandomizationSample::default()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    /// Scaling parameter value, defaulting to 1 when absent.
    pub fn scale(&self, name: &str) -> f64 {
        self.get(name).unwrap_or(1.0)
    }

    /// Additive parameter value, defaulting to 0 when absent.
    pub fn offset(&self, name: &str) -> f64 {
        self.get(name).unwrap_or(0.0)
    }
}

/// Draw one value per parameter from its declared distribution.
pub fn sample_randomization<R: Rng>(
    spec: &RandomizationSpec,
    rng: &mut R,
) -> Result<RandomizationSample, RandError> {
    spec.validate()?;
    let values = spec
        .params
        .iter()
        .map(|p| (p.name.clone(), p.dist.sample(rng)))
        .collect();
    Ok(RandomizationSample { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_respect_support() {
        let spec = RandomizationSpec::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let s = sample_randomization(&spec, &mut rng).unwrap();
            for p in &spec.params {
                let v = s.get(&p.name).unwrap();
                let (lo, hi) = p.dist.support();
                assert!(v >= lo && v <= hi, "{} = {v} outside [{lo}, {hi}]", p.name);
            }
        }
    }

    #[test]
    fn exp_uniform_is_log_uniform() {
        let d = Dist::ExpUniform { a: 0.3, b: 3.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 20_000;
        let mut below = 0;
        for _ in 0..n {
            let v = d.sample(&mut rng);
            assert!((0.3..=3.0).contains(&v));
            // Median of exp(U(ln .3, ln 3)) is sqrt(0.3 * 3.0) ≈ 0.9487.
            if v < (0.3f64 * 3.0).sqrt() {
                below += 1;
            }
        }
        let frac = below as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.02, "median split was {frac}");
    }

    #[test]
    fn degenerate_uniform_is_constant() {
        let d = Dist::Uniform { a: 1.0, b: 1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            assert_eq!(d.sample(&mut rng), 1.0);
        }
    }

    #[test]
    fn inverted_bounds_rejected() {
        let spec = RandomizationSpec {
            params: vec![ParamSpec {
                name: "bad".into(),
                mode: ApplyMode::Scaling,
                dist: Dist::Uniform { a: 2.0, b: 1.0 },
            }],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            sample_randomization(&spec, &mut rng),
            Err(RandError::MalformedSpec { .. })
        ));
    }
}
