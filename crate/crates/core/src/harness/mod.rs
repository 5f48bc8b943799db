//! Monte-Carlo experiments over the solvers and patch-wise image recovery.

mod experiment;
mod image;

pub use experiment::{
    build_quaternion_model, default_solver_config, gaussian_signal, run_snr_curve, run_sweep,
    run_trial, ExperimentRecord, ExperimentSpec, ModelParams, TrialOutcome,
};
pub use image::{
    psnr, recover_image, synthetic_gradient_rgb, synthetic_msi, ChannelMapping, Image,
    ImageRecovery, ImageSolver, ImageTask,
};
