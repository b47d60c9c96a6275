//! Library side of the `powerprod` binary: certificate wire format and the
//! resumable scan driver. Lives in a lib so integration tests can exercise
//! the serialization contract directly.

pub mod scan;
pub mod wire;
