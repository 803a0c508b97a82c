//! Shared test code: an independent reference implementation, random model
//! generators and the property bodies run by the acceptance target.

#![allow(dead_code)]

pub mod gen;
pub mod oracle;
pub mod props;
