pub mod cli;
pub mod cycles;
pub mod dynamics;
pub mod life;
pub mod lifepoly;
pub mod orbit;
pub mod polymap;
pub mod turing;
