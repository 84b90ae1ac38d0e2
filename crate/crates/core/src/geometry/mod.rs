//! Street systems: sampling, lilypond growth, order decomposition and
//! chord lengths.

mod chord;
mod io;
mod junction;
mod lilypond;
mod sample;
mod street;

pub use chord::{disk_chord_length, line_disk_chord, stick_chord, total_length_in, Disk};
pub use io::{parse_system, read_system, write_system, COLUMN_HEADER};
pub use junction::{decompose, JunctionSet};
pub use lilypond::{
    collision_time, default_t_cap, grow_lilypond, sample_plm, sample_seeds, Collision, Extent, GrowthEvent,
    LilypondOutcome, Seed,
};
pub use sample::{poisson_count, sample_og, sample_plp, sample_psp, uniform_in_disk};
pub use street::{normalize_orientation, Line, Model, Point, Stick, Street, StreetSystem, GEOM_TOL};
