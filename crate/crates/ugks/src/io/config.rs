//! Run configuration: a strict TOML document with every default resolved
//! at parse time, echoed back losslessly.

use serde::{Deserialize, Serialize};

use crate::collision::{CollisionModel, CrossSection};
use crate::error::{Error, Result};
use crate::kinetic::{GasProperties, MacroState, RelaxationFamily};
use crate::solver::{CflSpeed, CollisionTreatment, CriticalTimeMode, SpectralSettings};

/// Experiment selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Relax,
    Sod,
    Shock,
}

/// Collision treatment selector in configs and on the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollisionMode {
    Hybrid,
    Shakhov,
    Boltzmann,
    Collisionless,
}

impl From<CollisionMode> for CollisionTreatment {
    fn from(m: CollisionMode) -> Self {
        match m {
            CollisionMode::Hybrid => CollisionTreatment::Hybrid,
            CollisionMode::Shakhov => CollisionTreatment::Shakhov,
            CollisionMode::Boltzmann => CollisionTreatment::Boltzmann,
            CollisionMode::Collisionless => CollisionTreatment::Collisionless,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasBlock {
    #[serde(default = "d_one")]
    pub mass: f64,
    #[serde(default = "d_half")]
    pub r_gas: f64,
    #[serde(default = "d_half")]
    pub boltzmann: f64,
}

impl Default for GasBlock {
    fn default() -> Self {
        Self {
            mass: 1.0,
            r_gas: 0.5,
            boltzmann: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionBlock {
    #[serde(default = "d_family")]
    pub family: String,
    #[serde(default = "d_omega")]
    pub omega: f64,
    #[serde(default)]
    pub lj_term: usize,
    #[serde(default = "d_one")]
    pub knudsen: f64,
    #[serde(default = "d_mode")]
    pub mode: CollisionMode,
}

impl Default for CollisionBlock {
    fn default() -> Self {
        Self {
            family: d_family(),
            omega: d_omega(),
            lj_term: 0,
            knudsen: 1.0,
            mode: CollisionMode::Hybrid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocityGridBlock {
    #[serde(default = "d_halfwidth")]
    pub half_width: f64,
    #[serde(default = "d_points")]
    pub points: usize,
}

impl Default for VelocityGridBlock {
    fn default() -> Self {
        Self {
            half_width: 8.0,
            points: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralBlock {
    /// Fourier modes per axis (defaults to the velocity point count).
    #[serde(default)]
    pub modes: Option<usize>,
    #[serde(default = "d_eight")]
    pub sphere_polar: usize,
    #[serde(default = "d_eight")]
    pub sphere_azimuth: usize,
}

impl Default for SpectralBlock {
    fn default() -> Self {
        Self {
            modes: None,
            sphere_polar: 8,
            sphere_azimuth: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshBlock {
    #[serde(default = "d_domain")]
    pub domain: [f64; 2],
    #[serde(default = "d_cells")]
    pub cells: usize,
    #[serde(default = "d_kind")]
    pub kind: String,
    #[serde(default = "d_fine_zone")]
    pub fine_zone: [f64; 2],
    #[serde(default = "d_fine_dx")]
    pub fine_dx: f64,
    #[serde(default = "d_ratio")]
    pub stretch_ratio: f64,
}

impl Default for MeshBlock {
    fn default() -> Self {
        Self {
            domain: d_domain(),
            cells: d_cells(),
            kind: d_kind(),
            fine_zone: d_fine_zone(),
            fine_dx: d_fine_dx(),
            stretch_ratio: d_ratio(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeBlock {
    #[serde(default = "d_cfl")]
    pub cfl: f64,
    #[serde(default = "d_tmode")]
    pub mode: String, // global | local
    #[serde(default = "d_cflspeed")]
    pub cfl_speed: String, // lattice | waves
    #[serde(default = "d_tfinal")]
    pub final_time: f64,
    #[serde(default = "d_resid")]
    pub residual_target: f64,
    #[serde(default = "d_maxsteps")]
    pub max_steps: usize,
}

impl Default for TimeBlock {
    fn default() -> Self {
        Self {
            cfl: 0.5,
            mode: "global".into(),
            cfl_speed: "lattice".into(),
            final_time: 0.15,
            residual_target: 1e-8,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HybridBlock {
    #[serde(default = "d_tc_mode")]
    pub t_c: String, // adaptive | multiple
    #[serde(default = "d_tc_multiple")]
    pub t_c_multiple: f64,
    #[serde(default = "d_prandtl")]
    pub prandtl: f64,
}

impl Default for HybridBlock {
    fn default() -> Self {
        Self {
            t_c: "adaptive".into(),
            t_c_multiple: 0.4,
            prandtl: 2.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxationBlock {
    #[serde(default = "d_relax_family")]
    pub family: String,
    #[serde(default = "d_temps")]
    pub temps: [f64; 3],
    #[serde(default = "d_outputs")]
    pub output_times: Vec<f64>,
    #[serde(default = "d_dtfrac")]
    pub dt_fraction: f64,
    #[serde(default = "d_deficit")]
    pub deficit_tolerance: f64,
}

impl Default for RelaxationBlock {
    fn default() -> Self {
        Self {
            family: d_relax_family(),
            temps: d_temps(),
            output_times: d_outputs(),
            dt_fraction: d_dtfrac(),
            deficit_tolerance: d_deficit(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideState {
    pub rho: f64,
    pub velocity: f64,
    pub temp: f64,
}

impl SideState {
    pub fn to_state(self) -> Result<MacroState> {
        MacroState::new(self.rho, [self.velocity, 0.0, 0.0], self.temp)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SodBlock {
    #[serde(default = "d_sod_left")]
    pub left: SideState,
    #[serde(default = "d_sod_right")]
    pub right: SideState,
    #[serde(default = "d_half")]
    pub diaphragm: f64,
}

impl Default for SodBlock {
    fn default() -> Self {
        Self {
            left: d_sod_left(),
            right: d_sod_right(),
            diaphragm: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockBlock {
    #[serde(default = "d_mach")]
    pub mach: f64,
    #[serde(default = "d_thick")]
    pub init_thickness: f64,
}

impl Default for ShockBlock {
    fn default() -> Self {
        Self {
            mach: 3.0,
            init_thickness: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "d_outdir")]
    pub directory: String,
    /// Opt-in flat dump of the full 3-D distribution.
    #[serde(default)]
    pub write_distribution: bool,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            directory: "out".into(),
            write_distribution: false,
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub gas: GasBlock,
    #[serde(default)]
    pub collision: CollisionBlock,
    #[serde(default)]
    pub velocity_grid: VelocityGridBlock,
    #[serde(default)]
    pub spectral: SpectralBlock,
    #[serde(default)]
    pub mesh: MeshBlock,
    #[serde(default)]
    pub time: TimeBlock,
    #[serde(default)]
    pub hybrid: HybridBlock,
    #[serde(default)]
    pub relaxation: RelaxationBlock,
    #[serde(default)]
    pub sod: SodBlock,
    #[serde(default)]
    pub shock: ShockBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

fn d_one() -> f64 {
    1.0
}
fn d_half() -> f64 {
    0.5
}
fn d_family() -> String {
    "vhs".into()
}
fn d_omega() -> f64 {
    0.81
}
fn d_mode() -> CollisionMode {
    CollisionMode::Hybrid
}
fn d_halfwidth() -> f64 {
    8.0
}
fn d_points() -> usize {
    32
}
fn d_eight() -> usize {
    8
}
fn d_domain() -> [f64; 2] {
    [0.0, 1.0]
}
fn d_cells() -> usize {
    100
}
fn d_kind() -> String {
    "uniform".into()
}
fn d_fine_zone() -> [f64; 2] {
    [-10.0, 5.0]
}
fn d_fine_dx() -> f64 {
    0.5
}
fn d_ratio() -> f64 {
    1.2
}
fn d_cfl() -> f64 {
    0.5
}
fn d_tmode() -> String {
    "global".into()
}
fn d_cflspeed() -> String {
    "lattice".into()
}
fn d_tfinal() -> f64 {
    0.15
}
fn d_resid() -> f64 {
    1e-8
}
fn d_maxsteps() -> usize {
    200_000
}
fn d_tc_mode() -> String {
    "adaptive".into()
}
fn d_tc_multiple() -> f64 {
    0.4
}
fn d_prandtl() -> f64 {
    2.0 / 3.0
}
fn d_relax_family() -> String {
    "anisotropic".into()
}
fn d_temps() -> [f64; 3] {
    [1.0, 373.0 / 273.0, 1.0]
}
fn d_outputs() -> Vec<f64> {
    vec![0.2, 0.5, 1.0, 2.0, 4.0]
}
fn d_dtfrac() -> f64 {
    0.05
}
fn d_deficit() -> f64 {
    1e-3
}
fn d_sod_left() -> SideState {
    SideState {
        rho: 1.0,
        velocity: 0.0,
        temp: 1.0,
    }
}
fn d_sod_right() -> SideState {
    SideState {
        rho: 0.125,
        velocity: 0.0,
        temp: 1.25,
    }
}
fn d_mach() -> f64 {
    3.0
}
fn d_thick() -> f64 {
    2.0
}
fn d_outdir() -> String {
    "out".into()
}

/// Parse and validate a config document; every default is resolved in the
/// returned value, unknown keys are rejected with the offending name.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Serialize a resolved config back to TOML (lossless echo).
pub fn write_config(cfg: &RunConfig) -> Result<String> {
    toml::to_string_pretty(cfg).map_err(|e| Error::Parse(e.to_string()))
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.gas_properties().validate()?;
        self.collision_model()?.validate()?;
        if self.velocity_grid.points < 4 || !(self.velocity_grid.half_width > 0.0) {
            return Err(Error::Config(format!(
                "velocity_grid: need half_width > 0 and points >= 4, got {} x {}",
                self.velocity_grid.half_width, self.velocity_grid.points
            )));
        }
        if let Some(modes) = self.spectral.modes {
            if modes > self.velocity_grid.points {
                return Err(Error::Config(format!(
                    "spectral.modes ({modes}) exceeds velocity_grid.points ({})",
                    self.velocity_grid.points
                )));
            }
        }
        if !(self.time.cfl > 0.0 && self.time.cfl <= 1.0) {
            return Err(Error::Config(format!(
                "time.cfl must lie in (0, 1], got {}",
                self.time.cfl
            )));
        }
        match self.time.mode.as_str() {
            "global" | "local" => {}
            other => {
                return Err(Error::Config(format!(
                    "time.mode must be 'global' or 'local', got '{other}'"
                )))
            }
        }
        match self.time.cfl_speed.as_str() {
            "lattice" | "waves" => {}
            other => {
                return Err(Error::Config(format!(
                    "time.cfl_speed must be 'lattice' or 'waves', got '{other}'"
                )))
            }
        }
        match self.hybrid.t_c.as_str() {
            "adaptive" | "multiple" => {}
            other => {
                return Err(Error::Config(format!(
                    "hybrid.t_c must be 'adaptive' or 'multiple', got '{other}'"
                )))
            }
        }
        if !(self.hybrid.prandtl > 0.0) {
            return Err(Error::Config(format!(
                "hybrid.prandtl must be positive, got {}",
                self.hybrid.prandtl
            )));
        }
        match self.mesh.kind.as_str() {
            "uniform" | "stretched" => {}
            other => {
                return Err(Error::Config(format!(
                    "mesh.kind must be 'uniform' or 'stretched', got '{other}'"
                )))
            }
        }
        self.relaxation_family()?;
        for s in [&self.sod.left, &self.sod.right] {
            s.to_state()?;
        }
        if self.experiment == Experiment::Shock && !(self.shock.mach > 1.0) {
            return Err(Error::Config(format!(
                "shock.mach must exceed 1, got {}",
                self.shock.mach
            )));
        }
        Ok(())
    }

    pub fn gas_properties(&self) -> GasProperties {
        GasProperties {
            mass: self.gas.mass,
            r_gas: self.gas.r_gas,
            boltzmann: self.gas.boltzmann,
            prandtl: self.hybrid.prandtl,
        }
    }

    pub fn collision_model(&self) -> Result<CollisionModel> {
        let cross = match self.collision.family.as_str() {
            "hard_sphere" => CrossSection::HardSphere,
            "vhs" => CrossSection::VariableHardSphere {
                omega: self.collision.omega,
            },
            "lennard_jones" => CrossSection::LennardJones,
            "lennard_jones_term" => CrossSection::LennardJonesTerm {
                index: self.collision.lj_term,
            },
            other => {
                return Err(Error::Config(format!(
                    "collision.family '{other}' is not one of hard_sphere, vhs, lennard_jones, lennard_jones_term"
                )))
            }
        };
        CollisionModel::new(cross, self.collision.knudsen)
    }

    pub fn relaxation_family(&self) -> Result<RelaxationFamily> {
        match self.relaxation.family.as_str() {
            "anisotropic" => Ok(RelaxationFamily::Anisotropic),
            "double_half_normal" => Ok(RelaxationFamily::DoubleHalfNormal),
            "tailored_half_maxwellian" => Ok(RelaxationFamily::TailoredHalfMaxwellian),
            other => Err(Error::Config(format!(
                "relaxation.family '{other}' is not one of anisotropic, double_half_normal, tailored_half_maxwellian"
            ))),
        }
    }

    pub fn spectral_settings(&self) -> SpectralSettings {
        SpectralSettings {
            modes: self.spectral.modes.unwrap_or(self.velocity_grid.points),
            sphere: (self.spectral.sphere_polar, self.spectral.sphere_azimuth),
        }
    }

    pub fn treatment(&self) -> CollisionTreatment {
        self.collision.mode.into()
    }

    pub fn t_c_mode(&self) -> CriticalTimeMode {
        match self.hybrid.t_c.as_str() {
            "multiple" => CriticalTimeMode::FixedMultiple(self.hybrid.t_c_multiple),
            _ => CriticalTimeMode::Adaptive,
        }
    }

    pub fn cfl_speed(&self) -> CflSpeed {
        match self.time.cfl_speed.as_str() {
            "waves" => CflSpeed::Waves,
            _ => CflSpeed::Lattice,
        }
    }
}
