//! Nyström-regularized kernel ridge regression with sequential sub-sampling
//! for one-step time-series forecasting.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`kernels`] | Wendland, Gaussian and `1 + min(x, x')` kernels; Gram blocks |
//! | [`linalg`] | symmetric eigendecomposition, pseudo-inverse solves, spectra |
//! | [`sampling`] | sequential, positional, strided and random-start index sets |
//! | [`estimator`] | full KRR, Nyström KRR, prediction, residuals, model files |
//! | [`timeseries`] | synthetic mechanisms, delay embedding, noise, ACF |
//! | [`experiments`] | evaluation protocols, λ selection, sweeps, diagnostics |
//!
//! A minimal fit looks like:
//!
//! ```
//! use seqnystrom::estimator::fit_nystrom;
//! use seqnystrom::kernels::KernelSpec;
//! use seqnystrom::sampling::{SubsampleSpec, SubsampleMode, SubsampleSize};
//! use seqnystrom::timeseries::{embed, gen_m1, NoiseSpec};
//! use seqnystrom::rng::seeded;
//!
//! let g = gen_m1(501, &NoiseSpec::uniform(-0.7, 0.7).unwrap(), 0.3, 7).unwrap();
//! let data = embed(&g.series, 1).unwrap();
//! let spec = SubsampleSpec::new(SubsampleSize::Ratio(0.1), SubsampleMode::RandomStart);
//! let idx = spec.resolve(data.len(), &mut seeded(7)).unwrap();
//! let model = fit_nystrom(&data, &KernelSpec::wendland(), 1e-3, &idx, None).unwrap();
//! assert_eq!(model.centers().len(), 50);
//! ```

pub mod error;
pub mod estimator;
pub mod experiments;
pub mod format;
pub mod kernels;
pub mod linalg;
pub mod points;
pub mod rng;
pub mod sampling;
pub mod timeseries;

pub use error::{Error, Result};
pub use estimator::{EmbeddedDataset, NystromModel};
pub use kernels::{KernelKind, KernelSpec};
pub use points::Points;
pub use sampling::{IndexSet, SubsampleSpec};
