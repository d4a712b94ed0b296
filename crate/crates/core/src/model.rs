use crate::{Error, Result};

/// Global model parameters: degree, inverse temperature, external field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub d: u32,
    pub beta: f64,
    pub h: f64,
}

impl ModelParams {
    /// Zero-field parameters. Requires d ≥ 3 and β ≥ 0.
    pub fn new(d: u32, beta: f64) -> Result<Self> {
        Self::with_field(d, beta, 0.0)
    }

    pub fn with_field(d: u32, beta: f64, h: f64) -> Result<Self> {
        if d < 3 {
            return Err(Error::invalid_parameter(format!("degree d = {d} must be at least 3")));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::invalid_parameter(format!(
                "inverse temperature beta = {beta} must be finite and nonnegative"
            )));
        }
        if !h.is_finite() {
            return Err(Error::invalid_parameter(format!("field h = {h} must be finite")));
        }
        Ok(ModelParams { d, beta, h })
    }
}
