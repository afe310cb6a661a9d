//! `key = value` configuration, read from the file named by
//! `ORIGAMIC_CONFIG` and overridden by flags.

use std::path::{Path, PathBuf};

use origamic::compiler::CompileConfig;
use origamic::crease_pattern::SvgStyle;
use origamic::geometry::ExactScalar;

pub const ENV_VAR: &str = "ORIGAMIC_CONFIG";
pub const MIN_FACE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub pitch: ExactScalar,
    pub base_width: ExactScalar,
    pub spacing: ExactScalar,
    pub face_limit: usize,
    pub style: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        let c = CompileConfig::default();
        CliConfig {
            pitch: c.pitch,
            base_width: c.base_width,
            spacing: c.spacing,
            face_limit: origamic::flat_fold_oracle::OracleConfig::default().face_limit,
            style: None,
            out_dir: None,
        }
    }
}

/// Accepts `3`, `1/8` or the exact `a|b` form meaning `a + b√3`.
pub fn parse_scalar(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    if s.contains('|') {
        s.parse().ok()
    } else {
        format!("{s}|0").parse().ok()
    }
}

fn positive(s: &str) -> Option<ExactScalar> {
    parse_scalar(s).filter(|v| v.signum() > 0)
}

impl CliConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = || format!("bad value for {key}: {value}");
        match key {
            "pitch" => self.pitch = positive(value).ok_or_else(bad)?,
            "base_width" => self.base_width = positive(value).ok_or_else(bad)?,
            "spacing" => self.spacing = positive(value).ok_or_else(bad)?,
            "face_limit" => {
                let n: usize = value.trim().parse().map_err(|_| bad())?;
                if n < MIN_FACE_LIMIT {
                    return Err(format!("face_limit must be at least {MIN_FACE_LIMIT}"));
                }
                self.face_limit = n;
            }
            "style" => self.style = Some(PathBuf::from(value.trim())),
            "out_dir" => self.out_dir = Some(PathBuf::from(value.trim())),
            _ => return Err(format!("unknown key {key}")),
        }
        Ok(())
    }

    pub fn from_text(text: &str, origin: &Path) -> Result<CliConfig, String> {
        let mut c = CliConfig::default();
        c.apply_text(text, origin)?;
        Ok(c)
    }

    fn apply_text(&mut self, text: &str, origin: &Path) -> Result<(), String> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = format!("{}:{}", origin.display(), i + 1);
            let (k, v) = line.split_once('=').ok_or_else(|| format!("{at}: expected key = value"))?;
            self.set(k.trim(), v.trim()).map_err(|e| format!("{at}: {e}"))?;
        }
        Ok(())
    }

    /// Defaults, then the file in `ORIGAMIC_CONFIG` if set.
    pub fn load() -> Result<CliConfig, String> {
        match std::env::var_os(ENV_VAR) {
            Some(p) if !p.is_empty() => {
                let path = PathBuf::from(p);
                let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                CliConfig::from_text(&text, &path)
            }
            _ => Ok(CliConfig::default()),
        }
    }

    pub fn compile_config(&self) -> CompileConfig {
        CompileConfig {
            pitch: self.pitch.clone(),
            base_width: self.base_width.clone(),
            spacing: self.spacing.clone(),
            ..CompileConfig::default()
        }
    }

    pub fn svg_style(&self) -> Result<SvgStyle, String> {
        let mut style = SvgStyle::default();
        if let Some(path) = &self.style {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let ok = line.split_once('=').map(|(k, v)| style.set(k.trim(), v.trim())).unwrap_or(false);
                if !ok {
                    return Err(format!("{}:{}: bad style entry", path.display(), i + 1));
                }
            }
        }
        Ok(style)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reports_lines() {
        let c = CliConfig::from_text("# c\npitch = 2\nbase_width = 1/4\nface_limit = 20\n", Path::new("x.cfg")).unwrap();
        assert_eq!(c.pitch, ExactScalar::int(2));
        assert_eq!(c.base_width, ExactScalar::ratio(1, 4));
        assert_eq!(c.face_limit, 20);
        let e = CliConfig::from_text("pitch = 1\nface_limit = 4\n", Path::new("x.cfg")).unwrap_err();
        assert!(e.starts_with("x.cfg:2:"), "{e}");
        let e = CliConfig::from_text("spacing = -1\n", Path::new("y")).unwrap_err();
        assert!(e.starts_with("y:1:"));
    }
}
