//! Adaptive density deconvolution.
//!
//! Observations `Z = X + σε` are available with `ε` of known density. The
//! density of `X` is estimated by projection on the sinc spaces
//! `S_m = {f : supp f* ⊂ [-πm, πm]}` and the dimension `m` is chosen by
//! minimizing a penalized contrast.
//!
//! ```
//! use deconv_core::{estimator::SampleBatch, noise::NoiseModel, selection};
//!
//! let sample = SampleBatch::new(vec![-0.4, 0.1, 0.3, 0.9, 1.4]).unwrap();
//! let noise = NoiseModel::laplace(0.3).unwrap();
//! let fit = selection::select(&sample, &noise, &Default::default(), 64, None).unwrap();
//! assert!(fit.chosen.m >= 1);
//! ```

pub mod error;
pub mod estimator;
pub mod harness;
pub mod noise;
pub mod quadrature;
pub mod selection;

pub use error::{DeconvError, Result};
