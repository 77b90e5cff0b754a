#include "epiq/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epiq {

LinearFit fit_linear(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw std::invalid_argument("fit_linear: need >= 3 matched points");
    const int n = static_cast<int>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int k = 0; k < n; ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300)
        throw std::invalid_argument("fit_linear: degenerate abscissae");
    LinearFit f;
    f.n = n;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    double ss = 0.0;
    for (int k = 0; k < n; ++k) {
        const double r = ys[k] - (f.intercept + f.slope * xs[k]);
        ss += r * r;
    }
    const double s2 = ss / std::max(1, n - 2);
    f.residual_rms = std::sqrt(ss / n);
    f.var_slope = s2 * n / det;
    f.var_intercept = s2 * sxx / det;
    f.cov = -s2 * sx / det;
    return f;
}

double sinc(double x) {
    return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

namespace {
double sinc_model(double g, double alpha, double l, double d) {
    const double s = sinc((g - alpha) * d);
    return l * l * d * s * s;
}
} // namespace

SincFit fit_sinc_rate(const std::vector<double>& gammas,
                      const std::vector<double>& rates, double alpha,
                      double l0, double d0) {
    if (gammas.size() != rates.size() || gammas.size() < 3)
        throw std::invalid_argument("fit_sinc_rate: need >= 3 matched points");
    const int n = static_cast<int>(gammas.size());
    double l = l0, d = d0;
    SincFit fit;
    double jtj[2][2] = {};
    for (int it = 0; it < 200; ++it) {
        double jtr[2] = {0.0, 0.0};
        jtj[0][0] = jtj[0][1] = jtj[1][0] = jtj[1][1] = 0.0;
        const double hl = 1e-7 * std::max(1.0, std::abs(l));
        const double hd = 1e-7 * std::max(1.0, std::abs(d));
        for (int k = 0; k < n; ++k) {
            const double f = sinc_model(gammas[k], alpha, l, d);
            const double r = rates[k] - f;
            const double jl =
                (sinc_model(gammas[k], alpha, l + hl, d) - f) / hl;
            const double jd =
                (sinc_model(gammas[k], alpha, l, d + hd) - f) / hd;
            jtj[0][0] += jl * jl;
            jtj[0][1] += jl * jd;
            jtj[1][1] += jd * jd;
            jtr[0] += jl * r;
            jtr[1] += jd * r;
        }
        jtj[1][0] = jtj[0][1];
        const double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if (std::abs(det) < 1e-300) break;
        const double dl = (jtj[1][1] * jtr[0] - jtj[0][1] * jtr[1]) / det;
        const double dd = (jtj[0][0] * jtr[1] - jtj[1][0] * jtr[0]) / det;
        l += dl;
        d += dd;
        fit.iterations = it + 1;
        if (std::abs(dl) < 1e-12 && std::abs(dd) < 1e-12) {
            fit.converged = true;
            break;
        }
    }
    fit.lambda_hat = std::abs(l);
    fit.dt_hat = d;
    double ss = 0.0;
    for (int k = 0; k < n; ++k) {
        const double r = rates[k] - sinc_model(gammas[k], alpha, l, d);
        ss += r * r;
    }
    const double s2 = ss / std::max(1, n - 2);
    const double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
    if (det > 0.0) {
        fit.lambda_err = std::sqrt(s2 * jtj[1][1] / det);
        fit.dt_err = std::sqrt(s2 * jtj[0][0] / det);
    }
    return fit;
}

} // namespace epiq
