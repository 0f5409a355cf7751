#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fmcw/frame.hpp"

namespace fmcw {

struct EllipseFit {
    double center_i = 0.0;
    double center_q = 0.0;
    double semi_major = 0.0;  // a >= b > 0
    double semi_minor = 0.0;
    double tilt_rad = 0.0;    // in (-pi/2, pi/2]
    double algebraic_residual = 0.0;
    double geometric_rms = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct ImbalanceEstimate {
    double a_e_hat = 1.0;
    double theta_e_hat_rad = 0.0;
    EllipseFit source_fit;
};

// Taubin-normalized algebraic conic fit. Requires >= 6 points; rejects
// non-elliptic solutions. Throws InsufficientPoints / DegenerateConic.
EllipseFit fit_ellipse_taubin(const std::vector<std::pair<double, double>>& points);

// Levenberg-Marquardt refinement minimizing the sum of squared orthogonal
// point-to-ellipse distances. Cost is non-increasing over accepted steps.
// Never throws for non-convergence; returns best-so-far with converged=false.
EllipseFit refine_ellipse_lm(const EllipseFit& fit,
                             const std::vector<std::pair<double, double>>& points,
                             double tol, std::size_t max_iters);

// Orthogonal distance from a point to the ellipse (exact, iterative).
double point_ellipse_distance(const EllipseFit& fit, double x, double y);

struct CalibrationOptions {
    double min_peak_to_floor_db = 30.0; // leakage must dominate by this margin
    std::size_t max_points = 8192;      // pooled sample cap (strided)
    double lm_tol = 1e-9;
    std::size_t lm_max_iters = 50;
};

// Internal calibration on the leakage tone: pool (I, Q) samples, fit the
// ellipse (Taubin then LM), map the shape to the imbalance pair. The I
// channel is the amplitude reference.
ImbalanceEstimate estimate_imbalance(const FrameCube& i, const FrameCube& q,
                                     const CalibrationOptions& opts = {});

// 2x2 correction: I' = I, Q' = -tan(theta)*I + Q/(A*cos(theta)); returns
// I' + jQ'. Throws SingularTransform when |cos(theta)| < 1e-9.
FrameCube correct_iq(const FrameCube& i, const FrameCube& q,
                     const ImbalanceEstimate& est);

// Analytic image rejection ratio in dB; +infinity for perfect balance.
double irr_db(double a_e, double theta_e_rad);

// Measured IRR: carrier peak power minus image peak power on the complex
// spectrum, image searched within +-3 bins of the mirrored carrier bin.
double measured_irr_db(const FrameCube& complex_frames, std::size_t nfft);

} // namespace fmcw
