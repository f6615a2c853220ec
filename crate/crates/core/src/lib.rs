pub mod hashing;
pub mod language;
pub mod source_model;
pub mod corpus;
pub mod fault_injector;
pub mod spm;
pub mod sandbox;
pub mod gateway;
pub mod underspec;
pub mod runstore;
pub mod metrics;
pub mod demo;
pub mod pipeline;
