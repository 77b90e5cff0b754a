#include "epiq/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "epiq/errors.hpp"

namespace epiq {

double gamma_from_sar(const VirusInputs& inputs) {
    if (inputs.sar < 0.0 || inputs.sar >= 1.0)
        throw std::domain_error("gamma_from_sar: sar must lie in [0, 1)");
    if (inputs.sar_horizon <= 0)
        throw std::domain_error("gamma_from_sar: horizon must be positive");
    return -std::log1p(-inputs.sar) / inputs.sar_horizon;
}

double auto_alpha(int n_index, double delta_t) {
    if (n_index < 1 || delta_t <= 0.0)
        throw std::domain_error("auto_alpha: need n_index >= 1, delta_t > 0");
    return std::numbers::pi / (n_index * delta_t);
}

double rescale_time(double lambda_ref, double lambda_target) {
    if (lambda_ref <= 0.0 || lambda_target <= 0.0)
        throw std::domain_error("rescale_time: couplings must be positive");
    const double r = lambda_ref / lambda_target;
    return r * r;
}

std::vector<double> default_lambda_grid() {
    return {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
}

std::vector<double> default_sigma_grid() {
    std::vector<double> g;
    for (double s = 40.0; s <= 90.0 + 1e-9; s += 5.0)
        g.push_back(s);
    return g;
}

LambdaCalibration calibrate_lambda(const VirusInputs& inputs,
                                   const std::vector<double>& lambda_grid,
                                   const SimSettings& settings) {
    if (lambda_grid.size() < 3)
        throw ValidationError("calibrate_lambda: grid needs >= 3 points");
    LambdaCalibration out;
    out.gamma_sar = gamma_from_sar(inputs);
    if (out.gamma_sar <= 0.0)
        throw std::domain_error("calibrate_lambda: sar must be positive");

    const double alpha = auto_alpha(1, settings.delta_t);
    std::vector<double> logl, logg;
    for (double lam : lambda_grid) {
        EpidemicModel m;
        m.n_index = 1;
        m.n_susceptible = 1;
        m.gamma = {{alpha}}; // resonance gamma = alpha
        m.lambda = lam;
        m.alpha = alpha;
        m.delta_t = settings.delta_t;
        m.trotter_dt = settings.trotter_dt;
        const TimeSeries series = run_protocol(m, inputs.sar_horizon,
                                               settings.mode, settings.shots,
                                               settings.seed);
        const RateFit fit = extract_infection_rate(series, 0);
        out.grid.push_back({lam, fit.rate, fit.stderr_});
        logl.push_back(std::log(lam));
        logg.push_back(std::log(fit.rate));
    }
    const LinearFit line = fit_linear(logl, logg);
    out.slope = line.slope;
    out.slope_err = std::sqrt(line.var_slope);
    out.intercept = line.intercept;
    out.intercept_err = std::sqrt(line.var_intercept);
    if (line.slope < 1.5 || line.slope > 2.5)
        throw CalibrationError(
            "calibrate_lambda: log-log slope " + std::to_string(line.slope) +
            " outside [1.5, 2.5]; perturbative regime violated");
    const double x = (std::log(out.gamma_sar) - line.intercept) / line.slope;
    out.lambda = std::exp(x);
    // Propagate the fit covariance through lambda* = exp((ln G - b)/s).
    const double ds = -x / line.slope;         // d x / d slope
    const double db = -1.0 / line.slope;       // d x / d intercept
    const double var_x = ds * ds * line.var_slope + db * db * line.var_intercept +
                         2.0 * ds * db * line.cov;
    out.stderr_ = out.lambda * std::sqrt(std::max(0.0, var_x));
    return out;
}

EpidemicModel model_from_layout(const std::vector<Site>& sites, double sigma,
                                double lambda, const SimSettings& settings,
                                std::vector<int>* kept) {
    std::vector<Point> patients;
    std::vector<const Site*> susceptible;
    for (const Site& s : sites) {
        if (s.kind == SiteKind::index_patient)
            patients.push_back(s.position);
        else
            susceptible.push_back(&s);
    }
    if (patients.empty())
        throw ValidationError("community layout needs at least one index patient");
    if (susceptible.empty())
        throw ValidationError("community layout needs at least one susceptible site");

    const int n_index = static_cast<int>(patients.size());
    // Couplings follow the single-source reference branch (alpha_ref*dt = pi)
    // for every patient independently; the bath coupling then uses the
    // multi-patient convention alpha = pi/(|I| dt).
    const double alpha_ref = auto_alpha(1, settings.delta_t);
    std::vector<std::vector<double>> gamma_full(n_index);
    std::vector<int> keep;
    for (std::size_t j = 0; j < susceptible.size(); ++j) {
        bool coupled = false;
        for (int i = 0; i < n_index; ++i) {
            const double ov = site_overlap(*susceptible[j], patients[i], sigma);
            const double g = ov <= 0.0
                                 ? 0.0
                                 : gamma_from_overlap(ov, alpha_ref,
                                                      settings.delta_t);
            gamma_full[i].push_back(g);
            if (g >= 1e-6) coupled = true;
        }
        if (coupled) keep.push_back(static_cast<int>(j));
    }
    if (keep.empty())
        throw ValidationError("all susceptible sites decoupled (couplings < 1e-6)");

    EpidemicModel m;
    m.n_index = n_index;
    m.n_susceptible = static_cast<int>(keep.size());
    m.gamma.assign(n_index, {});
    for (int i = 0; i < n_index; ++i)
        for (int j : keep)
            m.gamma[i].push_back(gamma_full[i][j]);
    m.lambda = lambda;
    m.alpha = auto_alpha(n_index, settings.delta_t);
    m.delta_t = settings.delta_t;
    m.trotter_dt = settings.trotter_dt;
    for (int j : keep)
        m.populations.push_back(susceptible[j]->population > 0.0
                                    ? susceptible[j]->population
                                    : 1.0);
    if (kept) *kept = keep;
    return m;
}

SigmaCalibration calibrate_sigma(const std::vector<Site>& sites,
                                 const VirusInputs& inputs, double lambda,
                                 const std::vector<double>& sigma_grid,
                                 const SimSettings& settings) {
    if (sigma_grid.size() < 3)
        throw ValidationError("calibrate_sigma: grid needs >= 3 points");
    SigmaCalibration out;
    std::vector<double> xs, ys;
    for (double sigma : sigma_grid) {
        const EpidemicModel m = model_from_layout(sites, sigma, lambda, settings);
        const TimeSeries series = run_protocol(m, inputs.incubation,
                                               settings.mode, settings.shots,
                                               settings.seed);
        const int last = series.n_times() - 1;
        const double total = series.total_infected(last);
        double var = 0.0;
        for (int j = 0; j < series.n_sites(); ++j) {
            const double se = series.stderrs[last][j] * series.populations[j];
            var += se * se;
        }
        out.grid.push_back({sigma, total, std::sqrt(var)});
        xs.push_back(sigma);
        ys.push_back(total);
    }
    for (std::size_t k = 1; k < ys.size(); ++k)
        if (ys[k] <= ys[k - 1])
            throw CalibrationError(
                "calibrate_sigma: total infected not monotone increasing over "
                "the sigma grid");
    const LinearFit line = fit_linear(xs, ys);
    out.slope = line.slope;
    out.intercept = line.intercept;
    out.sigma = (inputs.r0 - line.intercept) / line.slope;
    // sigma* = (R0 - b)/c: propagate the line's parameter covariance.
    const double db = -1.0 / line.slope;
    const double dc = -out.sigma / line.slope;
    const double var = db * db * line.var_intercept + dc * dc * line.var_slope +
                       2.0 * db * dc * line.cov;
    out.stderr_ = std::sqrt(std::max(0.0, var));
    out.extrapolated = inputs.r0 < ys.front() || inputs.r0 > ys.back();
    return out;
}

} // namespace epiq
