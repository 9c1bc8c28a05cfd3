pub mod evolve;
pub mod kernels;
pub mod sweep;
pub mod verify;

pub use evolve::{cmd_evolve, EvolveOutput};
pub use kernels::{cmd_kernels, Kernel};
pub use sweep::{cmd_sweep, SweepRow};
pub use verify::{cmd_verify, cmd_verify_with, CheckResult, Status, VerifyHooks, VerifyReport};
