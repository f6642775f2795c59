//! Rolling-window real-time dispatch with co-optimized flexible ramping
//! products, under raw forecast-based dispatch (FBD) and regulated
//! forecast-based dispatch (RFBD) with capped VER schedules.
//!
//! Layers, bottom up:
//!
//! * [`lp`]: dense simplex with duals and an optimality certificate.
//! * [`market`]: the per-window energy/FRP LP and its accounting.
//! * [`uncertainty`]: VER caps, realizations and net-load forecast errors.
//! * [`frp`]: quantile-based requirements and histograms.
//! * [`diagnostics`]: KKT residuals, transfer patterns, finite-difference prices.
//! * [`engine`]: rolling cascade and Monte Carlo ensembles.

pub mod case_study;
pub mod diagnostics;
pub mod engine;
pub mod frp;
pub mod lp;
pub mod market;
pub mod rng;
pub mod uncertainty;
