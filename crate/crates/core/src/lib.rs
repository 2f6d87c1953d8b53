//! Ruler-compass construction toolkit for matchstick graphs.
//!
//! A matchstick graph is drawn in the plane with every edge a straight segment
//! of length one and no two edges crossing. This crate executes declarative
//! construction scripts for such drawings, solves a free angle parameter so
//! that a final closing edge also attains length one, verifies the resulting
//! graph (degrees, girth, unit lengths, crossings, clearance, symmetry), and
//! renders it to SVG.
//!
//! The bundled flagship construction, [`builtin_graph54`], produces a
//! 3-regular matchstick graph of girth 5 with 54 vertices and 81 edges once
//! its free angle `mu` is solved to roughly 38.0673 degrees.
//!
//! ```
//! use matchstick_core::{builtin_graph54, solve_param, verify, CheckConfig};
//!
//! let construction = builtin_graph54();
//! let solved = solve_param(&construction, None).unwrap();
//! let embedding = construction.execute_with(&[("mu", solved.value)]).unwrap();
//! let report = verify(&embedding, &CheckConfig::default());
//! assert!(report.passed);
//! ```

pub mod construct;
pub mod geom;
pub mod graphcheck;
pub mod render;
pub mod solve;

pub use construct::{
    builtin_graph54, parse_script, Construction, Embedding, ExecError, ParseError, Step,
    GRAPH54_SCRIPT,
};
pub use geom::{Coord, GeomError, SegmentRelation, Turn};
pub use graphcheck::{girth, verify, CheckConfig, CrossingReport, VerificationReport};
pub use render::{render_svg, RenderError, RenderOptions};
pub use solve::{
    calibrate_orientations, find_root, residual, solve_param, solve_param_with, sweep,
    sweep_to_csv, CalibrateOptions, RootResult, SolveError, SolveResult, SweepSample,
};
