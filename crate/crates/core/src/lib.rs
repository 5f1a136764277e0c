pub mod intlat;
pub mod permkit;
pub mod ybecore;
pub mod sconstruct;
pub mod braceforge;
pub mod quotients;
pub mod enumerate;
pub mod cli;
