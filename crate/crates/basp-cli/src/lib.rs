//! File formats and report types behind the `basp` command-line tool.
//!
//! The binary itself lives in `main.rs`; this library carries the parts
//! with stable contracts so they can be tested and reused directly:
//!
//! * [`format`]: the JSON instance format (load, validate, save),
//! * [`report`]: the versioned JSON report emitted by `--json`.

pub mod format;
pub mod report;

pub use format::{
    instance_to_dto, load_instance, parse_instance, render_instance, save_instance, FormatError,
    InstanceDto,
};
pub use report::{Report, StatsDto, ViolationDto, REPORT_VERSION};
