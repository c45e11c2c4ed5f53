//! Closed-form probabilities, the repeat-until-success Monte Carlo harness
//! and tabulated total-success curves.

mod fig2;
mod probability;
mod repeat;

pub use fig2::{default_figure2_grids, figure2_data, geometric_success, Fig2Row};
pub use probability::{
    enumerate_success_probability, failure_probability, ramirez_povm_report, success_probability, PovmReport,
};
pub use repeat::{monte_carlo_repeat, RepeatStats, SENDER_TOL};
