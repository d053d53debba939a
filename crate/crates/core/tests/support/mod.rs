#![allow(dead_code)]

pub mod explorer;
pub mod oracles;
pub mod random_lp;
