pub mod ansatz;
pub mod blocks;
pub mod cli;
pub mod growth;
pub mod interp;
pub mod pfaff;
pub mod series;
pub mod weier;
