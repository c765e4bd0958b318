//! Interactive segmentation of roughly round lesions in 2-D ultrasound images.
//!
//! A circular template of radial rays is centred on the seed point (the cursor). Nodes are
//! sampled along each ray, joined by infinite-capacity edges that force a single, smooth
//! boundary crossing per ray, and tied to a virtual source and sink by gray-value weights.
//! The minimum s-t cut of that graph is the lesion outline.
//!
//! The pipeline stages are exposed individually:
//!
//! * [`image`] loads PGM files and samples intensities off-lattice.
//! * [`graph`] samples the template and builds the flow network.
//! * [`maxflow`] solves it and extracts per-ray cut indices.
//! * [`contour`] turns those into a polygon with diameter, area and Dice metrics.
//! * [`phantom`] synthesises speckled test images with ground truth.
//! * [`session`] runs the whole chain for a seed.

pub mod contour;
pub mod error;
pub mod graph;
pub mod image;
pub mod maxflow;
pub mod phantom;
pub mod session;

mod point;

pub use contour::Contour;
pub use error::{Error, Result};
pub use graph::{NodeGrid, TemplateConfig, TerminalWeights, WeightModel};
pub use image::{GrayImage, SeedStats};
pub use maxflow::{CutResult, FlowNetwork, Solver};
pub use phantom::{EchoClass, PhantomSpec};
pub use point::Point;
pub use session::{segment_at, sweep, SegmentationResult};
