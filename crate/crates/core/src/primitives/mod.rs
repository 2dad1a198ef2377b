//! Black-box subroutines the constructions compose.

mod hitting;
mod multspan;
mod subset;

pub use hitting::{hitting_set, hitting_set_bound, SetFamily};
pub use multspan::multspan;
pub use subset::{subset_spanner, SubsetSpannerStats};

pub(crate) use subset::subset_spanner_rows;
