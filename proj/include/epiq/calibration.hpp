#pragma once

#include <cstdint>
#include <vector>

#include "epiq/evolution.hpp"
#include "epiq/fitting.hpp"
#include "epiq/geometry.hpp"

namespace epiq {

struct VirusInputs {
    double sar = 0.251;      // secondary attack rate, fraction in (0,1)
    int sar_horizon = 7;     // days
    double r0 = 9.5;         // basic reproduction number
    int incubation = 4;      // days
};

struct SimSettings {
    RunMode mode = RunMode::density;
    std::int64_t shots = 4096;
    std::uint64_t seed = 1;
    double delta_t = 1.0;
    double trotter_dt = 0.01;
};

// Gamma_SAR = -ln(1 - sar) / sar_horizon.
double gamma_from_sar(const VirusInputs& inputs);

// alpha = pi / (n_index * delta_t).
double auto_alpha(int n_index, double delta_t);

// Computer-time dilation a = (lambda_ref / lambda)^2.
double rescale_time(double lambda_ref, double lambda_target);

struct GridPoint {
    double param = 0.0;
    double value = 0.0;  // rate (lambda grid) or total infected (sigma grid)
    double stderr_ = 0.0;
};

struct LambdaCalibration {
    double lambda = 0.0, stderr_ = 0.0;
    double slope = 0.0, slope_err = 0.0;
    double intercept = 0.0, intercept_err = 0.0;
    double gamma_sar = 0.0;
    std::vector<GridPoint> grid;
};

std::vector<double> default_lambda_grid(); // {0.05, 0.10, ..., 0.40}
std::vector<double> default_sigma_grid(); // {40, 45, ..., 90} metres

// Resonant 1+1 runs over the grid, rate per lambda, log-log line fit,
// lambda* solved on the fitted line at Gamma_SAR. Throws CalibrationError
// when the fitted slope leaves [1.5, 2.5].
LambdaCalibration calibrate_lambda(const VirusInputs& inputs,
                                   const std::vector<double>& lambda_grid,
                                   const SimSettings& settings);

struct SigmaCalibration {
    double sigma = 0.0, stderr_ = 0.0;
    double slope = 0.0, intercept = 0.0;
    bool extrapolated = false; // R0 outside the simulated total range
    std::vector<GridPoint> grid;
};

// For each sigma on the grid: resolve couplings from the community layout,
// run the protocol for `incubation` days, total infected; linear fit of
// total(sigma); sigma* solves total = R0. Non-monotone totals throw
// CalibrationError.
SigmaCalibration calibrate_sigma(const std::vector<Site>& sites,
                                 const VirusInputs& inputs, double lambda,
                                 const std::vector<double>& sigma_grid,
                                 const SimSettings& settings);

// Build the EpidemicModel for a community layout at a given sigma: couplings
// from gamma_from_overlap per index patient, auto alpha, sites with all
// couplings below 1e-6 excluded. `kept` receives the susceptible-site
// indices (into the susceptible subset of `sites`) that stayed in the model.
EpidemicModel model_from_layout(const std::vector<Site>& sites, double sigma,
                                double lambda, const SimSettings& settings,
                                std::vector<int>* kept = nullptr);

} // namespace epiq
