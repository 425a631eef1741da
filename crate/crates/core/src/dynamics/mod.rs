//! Parabolic generators, Salem-degree word search and fibration transfer.

mod generators;
mod search;
mod transfer;

pub use generators::{
    build_generators, eichler_transvection, generators_for_classes, positive_vector, Generator,
    GeneratorSet,
};
pub use search::{
    search_max_salem, search_strategies, search_with_strategy, Exhaustive, Hybrid, RandomWalk,
    SearchConfig, SearchReport, SearchStrategy, WordUnit,
};
pub use transfer::{transfer_fibrations, Embedding, TransferReport};
