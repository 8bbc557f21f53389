pub mod cli;
pub mod diagram;
pub mod domains;
pub mod floer;
pub mod linalg;
pub mod nicefy;
