pub mod hirzebruch;
pub mod homcalc;
pub mod mcg;
pub mod par;
pub mod scenario;
pub mod sweep;
pub mod swledger;
