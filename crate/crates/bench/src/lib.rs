//! Fixed workloads shared by the benchmarks.

use gradient_echo::{builtin, Scenario};

/// A built-in scenario with its grid coarsened to `nz` cells.
pub fn builtin_at(name: &str, nz: usize) -> Scenario {
    let mut s = builtin::scenario(name).unwrap_or_else(|| panic!("unknown builtin {name}"));
    s.grid.nz = nz;
    s
}

/// Linear-gradient storage run at a few spatial resolutions.
pub fn storage_ladder() -> Vec<(usize, Scenario)> {
    [128, 256, 512].into_iter().map(|nz| (nz, builtin_at("fig4b", nz))).collect()
}

/// Sweep spec over a 2×2 corner of the storage map.
pub const SMALL_SWEEP: &str = r#"name = "bench"
base = "fig4b"
metrics = ["efficiency_R", "fidelity"]
workers = 1

[[axes]]
path = "medium.xi"
values = [1000.0, 2000.0]

[[axes]]
path = "control.profile.zeta"
values = ["500 gamma", "1000 gamma"]

[[axes]]
path = "grid.nz"
values = [128]
"#;
