//! Synchronizing strategies for Markov decision processes.
//!
//! A strategy synchronizes an MDP when the probability mass of the state
//! distribution concentrates in a single state: from some point on (strong)
//! or infinitely often (weak). This crate decides both objectives for blind
//! and perfect-information strategies by searching cycles of the subset
//! construction, builds eventually periodic witness strategies, and
//! simulates the resulting distributions.

pub mod cycles;
pub mod decide;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod simulate;
pub mod subset;
pub mod synthesize;

pub use cycles::{Cycle, CyclicFamily, Objective};
pub use decide::{decide, Answer, DecideConfig, Verdict, Witness};
pub use error::{Error, Result};
pub use model::{ActionId, Distribution, MarkovChain, Mdp, MdpBuilder, StateId};
pub use simulate::{check_sync, DistributionTrace, Policy, SyncCheck};
pub use subset::{Cell, Letter, Mode};
pub use synthesize::{strategy_from_witness, synthesize, Strategy};
