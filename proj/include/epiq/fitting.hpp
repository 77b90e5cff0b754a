#pragma once

#include <vector>

namespace epiq {

struct LinearFit {
    double intercept = 0.0, slope = 0.0;
    double var_intercept = 0.0, var_slope = 0.0, cov = 0.0;
    double residual_rms = 0.0;
    int n = 0;
};

// Ordinary least squares y = intercept + slope * x with residual-scaled
// parameter covariance.
LinearFit fit_linear(const std::vector<double>& xs,
                     const std::vector<double>& ys);

double sinc(double x); // sin(x)/x, 1 at 0

struct SincFit {
    double lambda_hat = 0.0, dt_hat = 0.0;
    double lambda_err = 0.0, dt_err = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Least-squares fit of rate(gamma) = l^2 d sinc^2((gamma - alpha) d) by
// Gauss-Newton with numerical Jacobian.
SincFit fit_sinc_rate(const std::vector<double>& gammas,
                      const std::vector<double>& rates, double alpha,
                      double l0 = 0.2, double d0 = 1.0);

} // namespace epiq
