//! JSON scenario files. Every physical field carries its unit in the name.

use crate::error::CliError;
use lgt_core::dynamics::MbsState;
use lgt_core::integrate::{IntegratorConfig, Scheme};
use lgt_core::lgt::{AbsCoords, AbsKind, LgtCombo};
use lgt_core::models::{free_rigid_body, pinned_body, two_body_chain, BodyParams, ChainJoints, RigidBodySystem};
use lgt_core::motiongroups::{GroupModel, Twist};
use lgt_core::Vec3;
use nalgebra::DVector;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    model: serde_json::Value,
    initial_state: Vec<BodyStateSpec>,
    integrator: IntegratorSpec,
    #[serde(default)]
    output_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub mass_kg: f64,
    pub inertia_kgm2: [f64; 3],
    #[serde(default)]
    pub com_offset_m: [f64; 3],
}

/// Model description. The `kind` field selects the variant; it is parsed in a
/// second pass so that error paths reach into the variant's fields.
#[derive(Debug, Clone)]
pub enum ModelSpec {
    FreeBody(FreeBodySpec),
    PinnedBody(PinnedBodySpec),
    TwoBodyChain(TwoBodyChainSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeBodySpec {
    #[allow(dead_code)]
    kind: String,
    pub body: BodySpec,
    #[serde(default)]
    pub gravity_mps2: [f64; 3],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinnedBodySpec {
    #[allow(dead_code)]
    kind: String,
    pub body: BodySpec,
    #[serde(default)]
    pub gravity_mps2: [f64; 3],
    pub pin_point_body_m: [f64; 3],
    pub anchor_m: [f64; 3],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoBodyChainSpec {
    #[allow(dead_code)]
    kind: String,
    pub bodies: [BodySpec; 2],
    #[serde(default)]
    pub gravity_mps2: [f64; 3],
    pub anchor_m: [f64; 3],
    pub body1_pin_m: [f64; 3],
    pub body1_tip_m: [f64; 3],
    pub body2_pin_m: [f64; 3],
}

fn from_value<T: serde::de::DeserializeOwned>(value: serde_json::Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let full = if path == "." { prefix.to_string() } else { format!("{prefix}.{path}") };
        CliError::schema(&full, e.inner())
    })
}

impl ModelSpec {
    fn from_json(value: serde_json::Value) -> Result<ModelSpec, CliError> {
        let kind = match value.get("kind") {
            Some(serde_json::Value::String(k)) => k.clone(),
            Some(_) => return Err(CliError::schema("model.kind", "expected a string")),
            None => return Err(CliError::schema("model.kind", "missing field")),
        };
        match kind.as_str() {
            "free_body" => Ok(ModelSpec::FreeBody(from_value(value, "model")?)),
            "pinned_body" => Ok(ModelSpec::PinnedBody(from_value(value, "model")?)),
            "two_body_chain" => Ok(ModelSpec::TwoBodyChain(from_value(value, "model")?)),
            other => Err(CliError::schema(
                "model.kind",
                format!("unknown kind `{other}`, expected free_body, pinned_body or two_body_chain"),
            )),
        }
    }
}

/// Physical initial state of one body.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyStateSpec {
    pub rotation_vector_rad: [f64; 3],
    pub position_m: [f64; 3],
    /// Angular velocity in body axes.
    #[serde(default)]
    pub angular_velocity_body_radps: [f64; 3],
    /// Inertial velocity of the body frame origin.
    #[serde(default)]
    pub velocity_mps: [f64; 3],
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeSpec {
    #[default]
    MuntheKaasRk4,
    LocalVectorRk4,
    BaselineQuatRk4,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionSpec {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_max_iter() -> usize {
    10
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    #[serde(default)]
    pub scheme: SchemeSpec,
    pub combo: String,
    pub h_s: f64,
    pub t_end_s: f64,
    #[serde(default)]
    pub projection: Option<ProjectionSpec>,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    model: RigidBodySystem,
    bodies: Vec<BodyStateSpec>,
    pub config: IntegratorConfig,
    pub output_csv: Option<PathBuf>,
}

fn v3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn body_params(spec: &BodySpec, gravity: [f64; 3], path: &str) -> Result<BodyParams, CliError> {
    let p = BodyParams {
        mass: spec.mass_kg,
        inertia: v3(spec.inertia_kgm2),
        com_offset: v3(spec.com_offset_m),
        gravity: v3(gravity),
    };
    if !(p.mass > 0.0 && p.mass.is_finite()) {
        return Err(CliError::schema(&format!("{path}.mass_kg"), "must be positive"));
    }
    if p.inertia.iter().any(|&i| !(i > 0.0 && i.is_finite())) {
        return Err(CliError::schema(&format!("{path}.inertia_kgm2"), "entries must be positive"));
    }
    Ok(p)
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Scenario, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Scenario::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::schema(if path.is_empty() { "." } else { &path }, e.inner())
        })?;
        Scenario::from_file(file)
    }

    fn from_file(file: ScenarioFile) -> Result<Scenario, CliError> {
        let i = &file.integrator;
        let combo: LgtCombo = i.combo.parse().map_err(|e| CliError::schema("integrator.combo", e))?;
        let scheme = match i.scheme {
            SchemeSpec::MuntheKaasRk4 => Scheme::MuntheKaasRK4,
            SchemeSpec::LocalVectorRk4 => Scheme::LocalVectorRK4,
            SchemeSpec::BaselineQuatRk4 => Scheme::BaselineQuatRK4,
        };
        if scheme == Scheme::BaselineQuatRK4 && combo.absolute != AbsKind::QuatPos {
            return Err(CliError::schema(
                "integrator.combo",
                "the baseline scheme needs a quaternion combo (1a..1d)",
            ));
        }
        if !(i.h_s > 0.0 && i.h_s.is_finite()) {
            return Err(CliError::schema("integrator.h_s", "must be positive"));
        }
        if !(i.t_end_s >= 0.0 && i.t_end_s.is_finite()) {
            return Err(CliError::schema("integrator.t_end_s", "must be non-negative"));
        }
        let mut config = IntegratorConfig::new(scheme, combo, i.h_s, i.t_end_s);
        if let Some(p) = &i.projection {
            if !(p.tol > 0.0) {
                return Err(CliError::schema("integrator.projection.tol", "must be positive"));
            }
            config = config.with_projection(p.tol, p.max_iter);
        }

        let group = combo.group();
        let model = match &ModelSpec::from_json(file.model)? {
            ModelSpec::FreeBody(FreeBodySpec { body, gravity_mps2, .. }) => {
                free_rigid_body(body_params(body, *gravity_mps2, "model.body")?, group)
            }
            ModelSpec::PinnedBody(PinnedBodySpec { body, gravity_mps2, pin_point_body_m, anchor_m, .. }) => pinned_body(
                body_params(body, *gravity_mps2, "model.body")?,
                v3(*pin_point_body_m),
                v3(*anchor_m),
                group,
            ),
            ModelSpec::TwoBodyChain(TwoBodyChainSpec {
                bodies,
                gravity_mps2,
                anchor_m,
                body1_pin_m,
                body1_tip_m,
                body2_pin_m,
                ..
            }) => {
                two_body_chain(
                    body_params(&bodies[0], *gravity_mps2, "model.bodies[0]")?,
                    body_params(&bodies[1], *gravity_mps2, "model.bodies[1]")?,
                    ChainJoints {
                        anchor: v3(*anchor_m),
                        body1_pin: v3(*body1_pin_m),
                        body1_tip: v3(*body1_tip_m),
                        body2_pin: v3(*body2_pin_m),
                    },
                    group,
                )
            }
        };
        if file.initial_state.len() != model.bodies.len() {
            return Err(CliError::schema(
                "initial_state",
                format!("expected {} bodies, found {}", model.bodies.len(), file.initial_state.len()),
            ));
        }
        Ok(Scenario { model, bodies: file.initial_state, config, output_csv: file.output_csv })
    }

    /// The model with velocities in the twists of `group`.
    pub fn model(&self, group: GroupModel) -> RigidBodySystem {
        self.model.with_group(group)
    }

    /// Initial state in the coordinates of `kind` and the twists of `group`.
    pub fn state(&self, kind: AbsKind, group: GroupModel) -> MbsState {
        let mut q = Vec::with_capacity(self.bodies.len());
        let mut v = DVector::zeros(6 * self.bodies.len());
        for (i, b) in self.bodies.iter().enumerate() {
            let qi = AbsCoords::from_rotation_vector(kind, &v3(b.rotation_vector_rad), v3(b.position_m));
            let tw = Twist::from_physical(group, &qi.rotation(), v3(b.angular_velocity_body_radps), v3(b.velocity_mps));
            v.fixed_rows_mut::<6>(6 * i).copy_from(&tw.to_vec6());
            q.push(qi);
        }
        MbsState::new(q, v, 0.0)
    }

    /// Model and initial state matching a configuration.
    pub fn setup(&self, config: &IntegratorConfig) -> (RigidBodySystem, MbsState) {
        let group = config.combo.group();
        let kind = match config.scheme {
            Scheme::BaselineQuatRK4 => AbsKind::QuatPos,
            _ => config.combo.absolute,
        };
        (self.model(group), self.state(kind, group))
    }
}
