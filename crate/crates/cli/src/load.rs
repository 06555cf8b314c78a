//! Input resolution shared by the subcommands: preset-or-file lookup,
//! descriptor building in the right host-field mode, and small display
//! helpers.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use oresharp_core::exec::Jobs;
use oresharp_core::{DrinfeldModule, Error, Experiment, FFElem, Mode, ModuleDescriptor, RatFunc};

use crate::presets;

/// A module built in whichever mode its descriptor requested.
pub enum HostModule {
    Finite(DrinfeldModule<FFElem>),
    Rational(DrinfeldModule<RatFunc>),
}

fn read_file(path: &Path, what: &str) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {what} `{}`: {e}", path.display())))
}

/// Resolve a module reference: preset name first, then a path (relative
/// to `base` when the reference came out of an experiment file).
pub fn module_text(reference: &str, base: Option<&Path>) -> Result<String, Error> {
    if let Some(text) = presets::module(reference) {
        return Ok(text.to_string());
    }
    let direct = Path::new(reference);
    if let (Some(base), true) = (base, direct.is_relative()) {
        let joined = base.join(direct);
        if joined.exists() {
            return read_file(&joined, "module file");
        }
    }
    read_file(direct, "module file")
}

pub fn load_descriptor(reference: &str, base: Option<&Path>) -> Result<ModuleDescriptor, Error> {
    ModuleDescriptor::parse(&module_text(reference, base)?)
}

pub fn build_any(desc: &ModuleDescriptor) -> Result<HostModule, Error> {
    match desc.mode {
        Mode::Finite => Ok(HostModule::Finite(desc.build()?)),
        Mode::RatFunc => Ok(HostModule::Rational(desc.build()?)),
    }
}

/// Resolve an experiment reference; the returned directory anchors any
/// relative module path inside the file.
pub fn load_experiment(reference: &str) -> Result<(Experiment, Option<PathBuf>), Error> {
    if let Some(text) = presets::experiment(reference) {
        return Ok((Experiment::parse(text)?, None));
    }
    let path = Path::new(reference);
    let text = read_file(path, "experiment file")?;
    let base = path.parent().map(Path::to_path_buf);
    Ok((Experiment::parse(&text)?, base))
}

/// `--jobs` as the kernels understand it: 0 means "all cores".
pub fn jobs_arg(n: usize) -> Jobs {
    match n {
        0 => None,
        k => Some(k),
    }
}

/// `(x, y)` rendering for points of the ambient module.
pub fn point_str<C: Display>(point: &[C]) -> String {
    let coords: Vec<String> = point.iter().map(ToString::to_string).collect();
    format!("({})", coords.join(", "))
}

/// Render an optional exponent the way the searches report it.
pub fn exponent_str(n: Option<u32>) -> String {
    match n {
        Some(n) => n.to_string(),
        None => "NONE".to_string(),
    }
}
