//! Flag parsing helpers and the flags / config-file / environment merge.
//!
//! Precedence: command-line flag, then `--config` file entry, then the
//! `ANISO_EMIT_TOL` environment variable (tolerance only), then defaults.

use aniso_emit::{
    Direction, LocalFieldTensor, MaterialFrame, PermittivityTensor, QuadratureSpec,
};
use serde::Deserialize;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Optional entries accepted in a `--config` JSON file. Keys mirror the
/// long flag names in snake_case; flags override file entries.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub eps: Option<[f64; 3]>,
    pub eps_x: Option<f64>,
    pub eps_y: Option<f64>,
    pub eps_z: Option<f64>,
    pub dipole: Option<[f64; 3]>,
    pub frame: Option<Vec<f64>>,
    pub method: Option<String>,
    pub local_field: Option<[f64; 3]>,
    pub tol: Option<f64>,
    pub output: Option<String>,
    pub out: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub theta_max: Option<String>,
    pub sweep: Option<String>,
    pub range: Option<String>,
    pub si: Option<bool>,
    pub omega: Option<f64>,
    pub dipole_si: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))
    }
}

pub fn parse_triple(text: &str, what: &str) -> Result<[f64; 3], ConfigError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return err(format!("{what} expects three comma-separated numbers, got `{text}`"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| ConfigError(format!("{what}: `{part}` is not a number")))?;
    }
    Ok(out)
}

/// Angle in radians; a `deg` suffix marks degrees explicitly.
pub fn parse_angle(text: &str) -> Result<f64, ConfigError> {
    let t = text.trim();
    if let Some(deg) = t.strip_suffix("deg") {
        let v = deg
            .trim()
            .parse::<f64>()
            .map_err(|_| ConfigError(format!("`{text}` is not an angle")))?;
        Ok(v.to_radians())
    } else if t == "pi" {
        Ok(std::f64::consts::PI)
    } else {
        t.parse::<f64>().map_err(|_| ConfigError(format!("`{text}` is not an angle")))
    }
}

/// `start:stop:count` sweep range with positive bounds and count >= 2.
pub fn parse_range(text: &str) -> Result<(f64, f64, usize), ConfigError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return err(format!("range expects start:stop:count, got `{text}`"));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| ConfigError(format!("range start `{}` is not a number", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| ConfigError(format!("range stop `{}` is not a number", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| ConfigError(format!("range count `{}` is not an integer", parts[2])))?;
    if count < 2 {
        return err("sweep count must be at least 2");
    }
    if !(start > 0.0 && stop > 0.0) {
        return err("sweep range bounds must be positive");
    }
    Ok((start, stop, count))
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let step = (stop - start) / (count - 1) as f64;
    (0..count)
        .map(|i| if i == count - 1 { stop } else { start + i as f64 * step })
        .collect()
}

/// Assembles the permittivity tensor from `--eps` plus per-axis overrides.
/// `fill` supplies a value for axes left unset (used by sweep commands).
pub fn resolve_eps(
    eps: Option<[f64; 3]>,
    eps_x: Option<f64>,
    eps_y: Option<f64>,
    eps_z: Option<f64>,
    fill: Option<(usize, f64)>,
) -> Result<PermittivityTensor, ConfigError> {
    let mut entries = [eps.map(|e| e[0]), eps.map(|e| e[1]), eps.map(|e| e[2])];
    for (slot, over) in entries.iter_mut().zip([eps_x, eps_y, eps_z]) {
        if over.is_some() {
            *slot = over;
        }
    }
    if let Some((axis, value)) = fill {
        entries[axis].get_or_insert(value);
    }
    let [x, y, z] = entries;
    match (x, y, z) {
        (Some(x), Some(y), Some(z)) => PermittivityTensor::new(x, y, z)
            .map_err(|e| ConfigError(format!("invalid permittivity: {e}"))),
        _ => err("permittivity not fully specified; pass --eps X,Y,Z or per-axis flags"),
    }
}

pub fn resolve_dipole(dipole: Option<[f64; 3]>) -> Result<Direction, ConfigError> {
    let [x, y, z] = dipole.unwrap_or([0.0, 0.0, 1.0]);
    Direction::new(x, y, z).map_err(|e| ConfigError(format!("invalid dipole: {e}")))
}

pub fn resolve_frame(frame: Option<Vec<f64>>) -> Result<Option<MaterialFrame>, ConfigError> {
    match frame {
        None => Ok(None),
        Some(vals) => {
            let entries: [f64; 9] = vals
                .as_slice()
                .try_into()
                .map_err(|_| ConfigError(format!("--frame expects 9 numbers, got {}", vals.len())))?;
            MaterialFrame::from_row_major(entries)
                .map(Some)
                .map_err(|e| ConfigError(format!("invalid frame: {e}")))
        }
    }
}

pub fn resolve_local_field(
    local_field: Option<[f64; 3]>,
) -> Result<Option<LocalFieldTensor>, ConfigError> {
    match local_field {
        None => Ok(None),
        Some([l1, l2, l3]) => LocalFieldTensor::new(l1, l2, l3)
            .map(Some)
            .map_err(|e| ConfigError(format!("invalid local-field tensor: {e}"))),
    }
}

/// Tolerance precedence: flag, config file, ANISO_EMIT_TOL, default 1e-10.
pub fn resolve_tolerance(flag: Option<f64>, file: Option<f64>) -> Result<f64, ConfigError> {
    let from_env = || -> Result<Option<f64>, ConfigError> {
        match std::env::var("ANISO_EMIT_TOL") {
            Ok(text) => text
                .parse::<f64>()
                .map(Some)
                .map_err(|_| ConfigError(format!("ANISO_EMIT_TOL=`{text}` is not a number"))),
            Err(_) => Ok(None),
        }
    };
    let tol = match (flag, file) {
        (Some(t), _) => t,
        (None, Some(t)) => t,
        (None, None) => from_env()?.unwrap_or(1e-10),
    };
    if tol > 0.0 {
        Ok(tol)
    } else {
        err("tolerance must be positive")
    }
}

pub fn quadrature_spec(tol: f64) -> Result<QuadratureSpec, ConfigError> {
    QuadratureSpec::with_tolerance(tol).map_err(|e| ConfigError(format!("invalid spec: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triples_and_ranges() {
        assert_eq!(parse_triple("1,2.5,3", "eps").unwrap(), [1.0, 2.5, 3.0]);
        assert!(parse_triple("1,2", "eps").is_err());
        assert_eq!(parse_range("1.5:5:100").unwrap(), (1.5, 5.0, 100));
        assert!(parse_range("0:5:10").is_err());
        assert!(parse_range("1:5:1").is_err());
    }

    #[test]
    fn angles_accept_deg_suffix() {
        assert!((parse_angle("90deg").unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((parse_angle("pi").unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!((parse_angle("1.25").unwrap() - 1.25).abs() < 1e-15);
        assert!(parse_angle("fast").is_err());
    }

    #[test]
    fn linspace_hits_both_ends() {
        let v = linspace(1.5, 5.0, 100);
        assert_eq!(v.len(), 100);
        assert_eq!(v[0], 1.5);
        assert_eq!(v[99], 5.0);
    }

    #[test]
    fn eps_overrides() {
        let t = resolve_eps(Some([1.0, 2.0, 3.0]), None, Some(9.0), None, None).unwrap();
        assert_eq!((t.eps_x(), t.eps_y(), t.eps_z()), (1.0, 9.0, 3.0));
        let t = resolve_eps(None, Some(1.5), None, Some(5.0), Some((1, 2.0))).unwrap();
        assert_eq!((t.eps_x(), t.eps_y(), t.eps_z()), (1.5, 2.0, 5.0));
        assert!(resolve_eps(None, Some(1.5), None, None, None).is_err());
    }
}
