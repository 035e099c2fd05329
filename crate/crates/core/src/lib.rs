pub mod atlas;
pub mod channel;
#[cfg(feature = "cli")]
pub mod cli;
pub mod corpus;
pub mod font;
pub mod glyph;
pub mod pgm;
pub mod raster;
pub mod recognition;
pub mod standin;
