#include "epiq/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "epiq/fitting.hpp"

namespace epiq {

namespace {

// Average of exp(-(x-x0)^2 / 2 sigma^2) over [x1, x2].
double overlap_1d(double x1, double x2, double x0, double sigma) {
    const double root2 = std::sqrt(2.0);
    const double u1 = (x1 - x0) / (sigma * root2);
    const double u2 = (x2 - x0) / (sigma * root2);
    return sigma * std::sqrt(std::acos(-1.0) / 2.0) *
           (std::erf(u2) - std::erf(u1)) / (x2 - x1);
}

} // namespace

double point_overlap(Point p, Point r0, double sigma) {
    const double dx = p.x - r0.x, dy = p.y - r0.y;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

double gaussian_overlap(const Rect& rect, Point r0, double sigma) {
    if (sigma <= 0.0)
        throw std::domain_error("gaussian_overlap: sigma must be positive");
    if (rect.width() < 0.0 || rect.height() < 0.0)
        throw std::domain_error("gaussian_overlap: rectangle needs x1<=x2, y1<=y2");
    if (rect.area() == 0.0)
        return point_overlap({rect.x1, rect.y1}, r0, sigma);
    return overlap_1d(rect.x1, rect.x2, r0.x, sigma) *
           overlap_1d(rect.y1, rect.y2, r0.y, sigma);
}

double site_overlap(const Site& site, Point r0, double sigma) {
    if (site.has_rect)
        return gaussian_overlap(site.rect, r0, sigma);
    return point_overlap(site.position, r0, sigma);
}

double site_infection_rate(const ContactProfile& profile, const Site& site,
                           Point r0) {
    return profile.gamma_sar * site_overlap(site, r0, profile.sigma);
}

namespace {

// Bisection for the strictly increasing branch of sinc^2((g - a) dt) on
// (0, a]: returns g with sinc^2 = target.
double solve_sinc_branch(double target, double alpha, double delta_t) {
    const double s_low = sinc(-alpha * delta_t);
    const double floor = s_low * s_low; // value as gamma -> 0+
    if (target > 1.0 + 1e-12)
        throw std::domain_error("sinc inversion: target exceeds resonance maximum");
    if (target >= 1.0) return alpha;
    if (target < floor)
        throw std::domain_error(
            "sinc inversion: target below the (0, alpha] branch minimum");
    double lo = 0.0, hi = alpha;
    // f is increasing on (0, alpha] when alpha*dt <= pi; enforced by callers
    // using the auto-alpha convention.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double s = sinc((mid - alpha) * delta_t);
        if (s * s < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-10) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double invert_sinc(double rate, double lambda, double alpha, double delta_t) {
    if (rate <= 0.0)
        throw std::domain_error("invert_sinc: rate must be positive");
    if (lambda <= 0.0 || alpha <= 0.0 || delta_t <= 0.0)
        throw std::domain_error("invert_sinc: lambda, alpha, delta_t must be positive");
    const double peak = lambda * lambda * delta_t;
    if (rate > peak * (1.0 + 1e-9))
        throw std::domain_error(
            "invert_sinc: rate exceeds the resonance maximum lambda^2*delta_t");
    return solve_sinc_branch(std::min(1.0, rate / peak), alpha, delta_t);
}

double gamma_from_overlap(double overlap, double alpha_ref, double delta_t) {
    if (overlap <= 0.0 || overlap > 1.0 + 1e-12)
        throw std::domain_error("gamma_from_overlap: overlap must lie in (0, 1]");
    return solve_sinc_branch(std::min(1.0, overlap), alpha_ref, delta_t);
}

} // namespace epiq
