pub mod calabi;
pub mod cli;
pub mod cr3;
pub mod exact_arith;
pub mod hj;
pub mod hypersurface;
pub mod ma_radial;
pub mod numfmt;
pub mod quadrature;
