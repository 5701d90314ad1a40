//! Run configuration: command-line flags over a `key = value` file over defaults.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use pntomo::numerics::disk_quadrature;
use pntomo::{FockSpace, Frame, OrderingParameter, Reduction};

/// Partially specified configuration, one per source.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigLayer {
    pub dim: Option<usize>,
    pub n_max: Option<usize>,
    pub radius: Option<f64>,
    pub radial_nodes: Option<usize>,
    pub angular_nodes: Option<usize>,
    pub s_re: Option<f64>,
    pub s_im: Option<f64>,
    pub seed: Option<u64>,
    pub ordered_reduction: Option<bool>,
}

impl ConfigLayer {
    /// Parses `key = value` lines. Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut layer = ConfigLayer::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`, got {line:?}", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn std::fmt::Display| format!("line {}: {key}: {e}", lineno + 1);
            match key {
                "dim" => layer.dim = Some(value.parse().map_err(|e| bad(&e))?),
                "n_max" => layer.n_max = Some(value.parse().map_err(|e| bad(&e))?),
                "radius" => layer.radius = Some(value.parse().map_err(|e| bad(&e))?),
                "radial_nodes" => layer.radial_nodes = Some(value.parse().map_err(|e| bad(&e))?),
                "angular_nodes" => layer.angular_nodes = Some(value.parse().map_err(|e| bad(&e))?),
                "s_re" => layer.s_re = Some(value.parse().map_err(|e| bad(&e))?),
                "s_im" => layer.s_im = Some(value.parse().map_err(|e| bad(&e))?),
                "seed" => layer.seed = Some(value.parse().map_err(|e| bad(&e))?),
                "ordered_reduction" => layer.ordered_reduction = Some(value.parse().map_err(|e| bad(&e))?),
                _ => return Err(format!("line {}: unknown key {key:?}", lineno + 1)),
            }
        }
        Ok(layer)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            dim: self.dim.or(base.dim),
            n_max: self.n_max.or(base.n_max),
            radius: self.radius.or(base.radius),
            radial_nodes: self.radial_nodes.or(base.radial_nodes),
            angular_nodes: self.angular_nodes.or(base.angular_nodes),
            s_re: self.s_re.or(base.s_re),
            s_im: self.s_im.or(base.s_im),
            seed: self.seed.or(base.seed),
            ordered_reduction: self.ordered_reduction.or(base.ordered_reduction),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub n_max: usize,
    pub radius: f64,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub s_re: f64,
    pub s_im: f64,
    pub seed: u64,
    pub ordered_reduction: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 24,
            n_max: 20,
            radius: 6.0,
            radial_nodes: 64,
            angular_nodes: 64,
            s_re: -0.5,
            s_im: 0.0,
            seed: 0,
            ordered_reduction: true,
        }
    }
}

impl RunConfig {
    pub fn resolve(layer: &ConfigLayer, defaults: RunConfig) -> RunConfig {
        RunConfig {
            dim: layer.dim.unwrap_or(defaults.dim),
            n_max: layer.n_max.unwrap_or(defaults.n_max),
            radius: layer.radius.unwrap_or(defaults.radius),
            radial_nodes: layer.radial_nodes.unwrap_or(defaults.radial_nodes),
            angular_nodes: layer.angular_nodes.unwrap_or(defaults.angular_nodes),
            s_re: layer.s_re.unwrap_or(defaults.s_re),
            s_im: layer.s_im.unwrap_or(defaults.s_im),
            seed: layer.seed.unwrap_or(defaults.seed),
            ordered_reduction: layer.ordered_reduction.unwrap_or(defaults.ordered_reduction),
        }
    }

    /// Checks every precondition of the library calls a command may make.
    pub fn validate(&self) -> Result<(), String> {
        self.space()?;
        self.ordering()?;
        if self.n_max >= self.dim {
            return Err(format!("n_max = {} must be below dim = {}", self.n_max, self.dim));
        }
        disk_quadrature(self.radius, self.radial_nodes, self.angular_nodes).map_err(|e| e.to_string())?;
        Ok(())
    }

    pub fn space(&self) -> Result<FockSpace, String> {
        FockSpace::new(self.dim).map_err(|e| e.to_string())
    }

    pub fn ordering(&self) -> Result<OrderingParameter, String> {
        OrderingParameter::new(Complex64::new(self.s_re, self.s_im)).map_err(|e| e.to_string())
    }

    pub fn reduction(&self) -> Reduction {
        if self.ordered_reduction {
            Reduction::Ordered
        } else {
            Reduction::Unordered
        }
    }

    /// Frame on the configured disk grid.
    pub fn frame(&self) -> Result<Frame, String> {
        let scheme = disk_quadrature(self.radius, self.radial_nodes, self.angular_nodes).map_err(|e| e.to_string())?;
        self.frame_on(scheme, self.n_max)
    }

    /// Frame on a grid read from a tomogram file.
    pub fn frame_on(&self, scheme: pntomo::QuadratureScheme, n_max: usize) -> Result<Frame, String> {
        Frame::new(self.space()?, self.ordering()?, scheme, n_max)
            .map(|f| f.with_reduction(self.reduction()))
            .map_err(|e| e.to_string())
    }
}
