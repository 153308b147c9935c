//! File formats, parallel hunting and the `pcm` command-line tool on top of
//! [`pcm_core`].

pub mod cli;
pub mod hunt;
pub mod io;

pub use hunt::{hunt_parallel, write_witnesses};
pub use io::{read_matrix_file, read_pcm, write_matrix_file, Entry, FileError, MatrixFile};
