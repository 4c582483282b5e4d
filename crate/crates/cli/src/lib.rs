//! Stream files, workload generators and the replay and benchmark drivers
//! behind the `dynmatch` command.

pub mod bench;
pub mod error;
pub mod generate;
pub mod replay;
pub mod stream;

pub use error::CliError;
pub use generate::{generate, StreamKind};
pub use replay::{replay, replay_engine, ReplayOptions, RunReport};
pub use stream::UpdateStream;
