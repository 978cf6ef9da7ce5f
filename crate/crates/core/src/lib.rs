//! Holographic stabilizer codes on `{p, 4}` hyperbolic tilings.
//!
//! Codes are assembled from small seed codes placed on the tiles of a
//! layered tiling, boundary operators are obtained by pushing logical and
//! stabilizer operators outward through the network, and the resulting
//! codes can be decoded under erasure and Pauli noise.

pub mod decoders;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod pauli;
pub mod push;
pub mod seed;
pub mod tiling;

pub use error::{Error, Result};
pub use pauli::{commutes, multiply, weight, Pauli, PauliString, RestrictedSolver, SymplecticMatrix};
pub use seed::{
    fix_leg, perfect_513, steane_713, steane_octagon, tensor_group, verify_k_uniform, FixBasis,
    SeedCode, TensorStabilizerGroup,
};
pub use tiling::{
    boundary_order, build_tiling, setup_max_rate_happy, setup_zero_rate_happy,
    setup_zero_rate_steane, InflationRule, LegKind, LegRef, Preset, Schlafli, Tensor,
    TensorLeg, TensorNetwork, TileSeed,
};
pub use push::{
    batch_push, correctness_check, generate_operators, leg_group, push_through_tensor, readout,
    BoundaryOperatorSet, CheckReport, OperatorTag, PushResult, PushedOperator,
};
pub use decoders::{
    destabilizers, erasure_correctable, int_opt_decode, oracle_ml_decode, sample_erasure,
    syndrome_of, tn_build, tn_decode, CosetDistribution, ErasureDecoder, ErasurePattern,
    IntOptDecoder, NoisePrior, Syndrome, TnDecoder,
};
pub use harness::{
    crossing_point, run_erasure_sweep, run_pauli_sweep, run_sweep, runtime_bench, write_csv,
    DecoderKind, SweepConfig, SweepResult, SweepRow,
};
