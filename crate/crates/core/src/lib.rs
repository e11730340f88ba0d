//! Certified constructions for colorful piercing of planar convex translates.

pub mod disk;
pub mod four_color;
pub mod fuzz;
pub mod geometry;
pub mod instance;
pub mod oracle;
pub mod pierce;
pub mod render;
pub mod symmetric;
pub mod triangle;

pub use geometry::{ConvexBody, Disk, Gauge, Point2, Polygon};
pub use pierce::{pierce, Method, PierceError};
