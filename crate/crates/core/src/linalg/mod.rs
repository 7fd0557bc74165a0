//! Enumeration, sparse exact linear algebra and cohomology of finite
//! windows.

pub mod cohomology;
pub mod enumerate;
pub mod ihx;
pub mod rank;
pub mod sparse;
