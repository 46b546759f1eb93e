pub mod cli;
pub mod dulac;
pub mod jets;
pub mod normalform;
pub mod oracle;
pub mod real;
pub mod resonance;
pub mod ring;
