//! Shipped module descriptors and experiment files.
//!
//! `--module` and `--experiment` arguments first try these names and
//! fall back to the filesystem, so the examples run without any setup.

/// Built-in module descriptor, by name.
pub fn module(name: &str) -> Option<&'static str> {
    match name {
        "trivial_tau" => Some(include_str!("../presets/trivial_tau.cfg")),
        "example_lambda" => Some(include_str!("../presets/example_lambda.cfg")),
        "example_lambda_p2" => Some(include_str!("../presets/example_lambda_p2.cfg")),
        "remark_sharp" => Some(include_str!("../presets/remark_sharp.cfg")),
        "reduction_host" => Some(include_str!("../presets/reduction_host.cfg")),
        _ => None,
    }
}

/// Built-in experiment file, by name.
pub fn experiment(name: &str) -> Option<&'static str> {
    match name {
        "remark_sharp" => Some(include_str!("../presets/remark_sharp_exp.cfg")),
        "remark_important" => Some(include_str!("../presets/remark_important_exp.cfg")),
        "reduction_scan" => Some(include_str!("../presets/reduction_scan_exp.cfg")),
        _ => None,
    }
}
