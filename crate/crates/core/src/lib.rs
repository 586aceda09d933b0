pub mod check;
pub mod cli;
pub mod error;
pub mod frt;
pub mod linalg;
pub mod lorentz;
pub mod minkspace;
pub mod params;
pub mod rmat;
pub mod scalar;
pub mod sigma;
pub mod tensor;
