//! Configuration, CSV persistence, and plot-script emission for the
//! sweep frontend.

pub mod config;
pub mod csvout;
pub mod plot;

pub use config::{parse_config, render_config, AppConfig};
pub use csvout::write_csv;
pub use plot::emit_plot_script;
