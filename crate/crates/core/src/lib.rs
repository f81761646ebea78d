//! Inhomogeneous node deployment over circular regions.
//!
//! Two generators share one point model:
//!
//! * [`auto`] cuts the disk of radius `L` into a random number of concentric
//!   layers with random widths and fills each layer uniformly, so the layer
//!   densities differ. Only `L`, the maximum layer count and the node count
//!   are needed.
//! * [`planned`] fills designer-specified non-overlapping sectors (annuli,
//!   disks, rectangles) with fixed node quotas and concatenates them.
//!
//! [`stats`] checks the output: per-sector counts and densities, radial KS,
//! angular and equal-area chi-square tests.
//!
//! ```
//! use netdeploy::{deploy_automatic, NetworkConfig, RandomStream};
//!
//! let config = NetworkConfig::new(1.0, 5, 100, 42);
//! let d = deploy_automatic(&config, &mut RandomStream::new(config.seed, 0)).unwrap();
//! assert_eq!(d.points.len(), 100);
//! assert!(d.points.iter().all(|p| p.radius() < 1.0));
//! ```

pub mod auto;
pub mod config;
pub mod deployment;
pub mod error;
pub mod geometry;
pub mod planned;
pub mod rng;
pub mod stats;

pub use auto::{
    deploy_automatic, deploy_with_layer_count, sample_layer_count, sample_layer_radii,
    sample_point_in_annulus, split_nodes, AutoDeploymentPlan, LayerSet,
};
pub use config::{validate_config, NetworkConfig};
pub use deployment::{Deployment, Origin, Point};
pub use error::{Error, Result, Violation};
pub use geometry::{annulus_area, sector_area, sector_density, SectorSpec, Shape};
pub use planned::{check_non_overlap, deploy_planned, sample_point_in_sector, DeploymentPlan};
pub use rng::{RandomStream, ReplayStream, UniformSource};
pub use stats::{build_report, ReportOptions, StatReport};
