pub mod config;
pub mod error;
pub mod expr;
pub mod fock;
pub mod ladder;
pub mod layout;
pub mod phase_space;
pub mod poly;
pub mod quadrature;
pub mod quantize;
pub mod random;
pub mod scalar;
pub mod state_literal;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{coherent_state, expectation, segal_bargmann_transform, FockState, SBFunction};
pub use ladder::{LadderExpr, OperatorMatrix};
pub use layout::FockLayout;
pub use quadrature::{GaussHermiteRule, QuadratureGrid};
pub use quantize::{convert_scheme, groenewold_residual, quantize, symbol_of, Scheme};
pub use scalar::Scalar;
pub use symbol::{PhaseSymbol, VariableConvention};
