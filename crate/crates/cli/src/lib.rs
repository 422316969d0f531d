//! Front-end for the Burchnall-Chaundy kernel: session files, commands and
//! output encodings.

pub mod commands;
pub mod parse;
pub mod render;
pub mod session;

pub use commands::{cmd_bc_ideal, cmd_example, cmd_member, cmd_reduce, cmd_verify, CmdError, Format};
pub use parse::ParseError;
pub use session::{parse_session, Session, SessionError};
