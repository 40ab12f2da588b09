//! Statistics and checks evaluated on finished trajectories.

pub mod bounds;
pub mod clusters;
pub mod crossings;
pub mod dx;
pub mod events;
pub mod hitting;
pub mod intersect;
pub mod lemmas;
pub mod traversal;

pub use bounds::{theoretical_bounds, BoundParams, BoundRow};
pub use clusters::{decompose_clusters, realization_clusters, reduce_to_cluster_leads, Cluster, ClusterDecomposition};
pub use crossings::detect_crossings;
pub use dx::{compute_dx, dx_value, DxRecord};
pub use events::{check_povratak, detect_a_events, detect_b_c, EventFamily, EventRecord, PovratakReport};
pub use hitting::HittingTimes;
pub use intersect::{extract_halfline_changes, extract_uv_sequences, UvRecord, UvVerdict};
pub use lemmas::{check_dx_bounds, check_lemmas, LemmaReport, Tally};
pub use traversal::{check_cluster_consecutive, check_indented_entry, check_reduced_alignment};
