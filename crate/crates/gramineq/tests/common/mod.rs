// each integration-test target uses its own subset of the oracle
#![allow(dead_code)]

pub mod naive;
