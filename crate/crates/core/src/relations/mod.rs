pub mod catalogs;
pub mod check;
pub mod dsl;
pub mod engine;
pub mod realize;
