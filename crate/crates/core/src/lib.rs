pub mod abgroup;
pub mod cli;
pub mod conditions;
pub mod coverdata;
pub mod exactalg;
pub mod forms;
pub mod search;
pub mod table;
pub mod verify;
