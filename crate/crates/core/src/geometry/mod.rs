//! Planar machinery: the 5:3 rectangle family and its squares, porosity,
//! box-counting dimension and polyline length.

pub mod boxdim;
pub mod length;
pub mod porosity;
pub mod rect;

pub use boxdim::{box_count, box_dimension, sample_graph, BoxDimension};
pub use length::{graph_length, LengthBounds};
pub use porosity::{porosity_estimate, verify_empty_ball, EmptyBall, PorosityConfig, PorosityReport};
pub use rect::{square_avoidance, squares_of_rect, Rect53, Square};
