pub mod caps;
pub mod cli;
pub mod order;
pub mod textfmt;
pub mod extension;
pub mod forcing;
pub mod sentence;
pub mod table;
