//! Configuration-driven parameter sweeps with CSV output.

pub mod config;
pub mod presets;
pub mod quantity;
pub mod sweep;

pub use config::{parse_config, ScanSpec};
pub use presets::{preset_names, preset_text};
pub use quantity::{Cell, Quantity};
pub use sweep::{emit_csv, output_path, run_sweep, write_csv, Row};
