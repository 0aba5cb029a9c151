pub mod calibration;
pub mod corpus;
pub mod correspondence;
pub mod linguistics;
pub mod patterns;
pub mod pipeline;
pub mod queryparse;
pub mod signatures;
pub mod table;
pub mod vocab;
