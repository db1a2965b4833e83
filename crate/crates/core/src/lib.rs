pub mod algebra;
pub mod character;
pub mod classify;
pub mod diagram;
pub mod dsl;
pub mod embed;
pub mod error;
pub mod field;
pub mod lie;
pub mod matrix;
pub mod module;
pub mod normal;
pub mod oracle;
pub mod realize;
pub mod rules;
pub mod tables;
pub mod verify;

pub use error::Error;
