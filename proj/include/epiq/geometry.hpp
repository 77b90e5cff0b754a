#pragma once

#include <string>

namespace epiq {

struct Point {
    double x = 0.0, y = 0.0;
};

struct Rect {
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
};

enum class SiteKind { index_patient, household, community };

struct Site {
    int id = 0;
    SiteKind kind = SiteKind::community;
    Point position;       // index patients, households
    Rect rect;            // communities
    bool has_rect = false;
    double population = 0.0; // susceptible sites only
    std::string name;
};

struct ContactProfile {
    double sigma = 65.0;     // activity distance scale, metres
    double gamma_sar = 0.0;  // household infection rate per day
};

// Average of exp(-|r-r0|^2 / 2 sigma^2) over an axis-aligned rectangle,
// computed as the product of two closed-form 1-D error-function averages.
// A zero-area rectangle degenerates to point evaluation at its corner.
double gaussian_overlap(const Rect& rect, Point r0, double sigma);

double point_overlap(Point p, Point r0, double sigma);

// Overlap of a site's geometry (rect for communities, point otherwise).
double site_overlap(const Site& site, Point r0, double sigma);

// Gamma_j = Gamma_SAR * overlap; households at r0 give Gamma_SAR exactly.
double site_infection_rate(const ContactProfile& profile, const Site& site,
                           Point r0);

// Unique gamma in (0, alpha] with lambda^2 dt sinc^2((gamma-alpha) dt) =
// rate, by bisection to 1e-10. Throws std::domain_error when rate <= 0 or
// rate exceeds the resonance maximum lambda^2 dt.
double invert_sinc(double rate, double lambda, double alpha, double delta_t);

// Same monotone branch parameterised by the overlap ratio itself:
// gamma in (0, alpha_ref] with sinc^2((gamma - alpha_ref) dt) = overlap.
// Used to translate contact geometry into couplings independent of lambda.
double gamma_from_overlap(double overlap, double alpha_ref, double delta_t);

} // namespace epiq
