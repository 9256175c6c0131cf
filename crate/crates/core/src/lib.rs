//! Attraction field maps for line segment maps.
//!
//! A line segment map on an image lattice can be turned into a dense field
//! that stores, for every pixel, the vector to the closest point of its
//! nearest segment. The field is an (almost) lossless dual of the segments:
//! [`squeeze`](squeeze::squeeze) groups the projected points back into
//! segments by greedy angular region growing.
//!
//! * [`geom`]: points, segments, projections and undirected directions.
//! * [`afm`]: region partition, field encoding and the invertible
//!   size-normalization / stretching transforms.
//! * [`squeeze`]: proposal map, outlier removal, region growing and
//!   rectangle fitting.
//! * [`eval`]: pixel matching, precision/recall, threshold sweeps,
//!   multi-scale round-trip checks and field statistics.
//! * [`io`]: JSON annotations, the binary field format, CSV tables and the
//!   synthetic scene generator.

// `!(x > 0.0)` style guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod afm;
pub mod error;
pub mod eval;
pub mod geom;
pub mod io;
pub mod squeeze;

pub use afm::{encode_afm, region_partition, AfmState, AttractionFieldMap, RegionPartitionMap};
pub use error::{Error, Result};
pub use geom::{Direction, LatticeDims, LineSegment, LineSegmentMap, Point2, Vec2};
pub use squeeze::{squeeze, Detection, Detections, SqueezeConfig};
