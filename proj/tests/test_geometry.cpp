#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "epiq/fitting.hpp"
#include "epiq/geometry.hpp"

using namespace epiq;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force midpoint-rule average of the Gaussian over the rectangle.
double quadrature_overlap(const Rect& r, Point r0, double sigma, int cells) {
    const double dx = r.width() / cells, dy = r.height() / cells;
    double acc = 0.0;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            const double x = r.x1 + (i + 0.5) * dx - r0.x;
            const double y = r.y1 + (j + 0.5) * dy - r0.y;
            acc += std::exp(-(x * x + y * y) / (2 * sigma * sigma));
        }
    return acc / (cells * cells);
}

double sincsq(double x) {
    const double s = sinc(x);
    return s * s;
}

} // namespace

TEST_CASE("gaussian_overlap") {
    CHECK(point_overlap({3, 4}, {3, 4}, 10.0) == doctest::Approx(1.0));

    const Rect r{100, 100, 200, 200};
    CHECK(gaussian_overlap(r, {0, 0}, 1e9) == doctest::Approx(1.0).epsilon(1e-6));

    const double closed = gaussian_overlap(r, {0, 0}, 65.0);
    const double brute = quadrature_overlap(r, {0, 0}, 65.0, 1000);
    CHECK(std::abs(closed - brute) / brute < 1e-6);

    // Zero-area rectangle degenerates to the point evaluation.
    const Rect pt{50, 60, 50, 60};
    CHECK(gaussian_overlap(pt, {0, 0}, 65.0) ==
          doctest::Approx(point_overlap({50, 60}, {0, 0}, 65.0)));

    CHECK_THROWS_AS(gaussian_overlap(r, {0, 0}, -1.0), std::domain_error);
}

TEST_CASE("overlap separates into 1-D factors and decreases radially") {
    const double sigma = 65.0;
    const Rect rx{30, -10, 130, 40};
    // Separability: product structure checked against 2-D quadrature.
    CHECK(std::abs(gaussian_overlap(rx, {5, -3}, sigma) -
                   quadrature_overlap(rx, {5, -3}, sigma, 800)) < 2e-6);
    // Monotone decay when the rectangle is translated away along an axis.
    double prev = 1.0;
    for (double shift : {0.0, 40.0, 80.0, 160.0, 320.0}) {
        const Rect shifted{rx.x1 + shift, rx.y1, rx.x2 + shift, rx.y2};
        const double ov = gaussian_overlap(shifted, {5, -3}, sigma);
        CHECK(ov <= prev + 1e-15);
        prev = ov;
    }
}

TEST_CASE("site_infection_rate") {
    ContactProfile profile{65.0, 0.0413};
    Site household;
    household.kind = SiteKind::household;
    household.position = {0, 0};
    CHECK(site_infection_rate(profile, household, {0, 0}) ==
          doctest::Approx(0.0413));

    // overlap 0.5 scales the rate by half.
    CHECK(0.5 * profile.gamma_sar == doctest::Approx(0.02065));

    Site faraway;
    faraway.kind = SiteKind::community;
    faraway.has_rect = true;
    faraway.rect = {5000, 5000, 5100, 5100};
    CHECK(site_infection_rate(profile, faraway, {0, 0}) < 1e-12);
}

TEST_CASE("invert_sinc round trips and errors") {
    const double lam = 0.201, dt = 1.0;
    const double peak = lam * lam * dt;

    CHECK(invert_sinc(peak, lam, kPi, dt) == doctest::Approx(kPi).epsilon(1e-9));

    const double g_true = 2.0;
    const double rate = peak * sincsq((g_true - kPi) * dt);
    CHECK(invert_sinc(rate, lam, kPi, dt) == doctest::Approx(2.0).epsilon(1e-9));

    // Half-peak rate: verify against a dense grid scan.
    const double g_half = invert_sinc(0.5 * peak, lam, kPi, dt);
    double best_g = 0.0, best_err = 1e300;
    for (int k = 1; k <= 2000000; ++k) {
        const double g = kPi * k / 2000000.0;
        const double err = std::abs(sincsq((g - kPi) * dt) - 0.5);
        if (err < best_err) {
            best_err = err;
            best_g = g;
        }
    }
    CHECK(g_half == doctest::Approx(best_g).epsilon(1e-5));

    // Monotone in the rate.
    double prev = 0.0;
    for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        const double g = invert_sinc(frac * peak, lam, kPi, dt);
        CHECK(g > prev);
        prev = g;
    }

    CHECK_THROWS_AS(invert_sinc(0.0, lam, kPi, dt), std::domain_error);
    CHECK_THROWS_AS(invert_sinc(1.5 * peak, lam, kPi, dt), std::domain_error);
}

TEST_CASE("rate -> gamma -> rate consistency chain") {
    const double lam = 0.201, dt = 1.0;
    ContactProfile profile{65.0, 0.0404};
    Site community;
    community.kind = SiteKind::community;
    community.has_rect = true;
    community.rect = {-60, 40, 40, 140};
    const double rate = site_infection_rate(profile, community, {0, 0});
    const double g = invert_sinc(rate, lam, kPi, dt);
    const double back = lam * lam * dt * sincsq((g - kPi) * dt);
    CHECK(std::abs(back - rate) / rate < 1e-9);
}

TEST_CASE("gamma_from_overlap matches the overlap branch") {
    const double dt = 1.0;
    for (double ov : {1.0, 0.7, 0.3, 0.05, 1e-4}) {
        const double g = gamma_from_overlap(ov, kPi, dt);
        CHECK(g > 0.0);
        CHECK(g <= kPi + 1e-12);
        CHECK(sincsq((g - kPi) * dt) == doctest::Approx(ov).epsilon(1e-8));
    }
    CHECK(gamma_from_overlap(1.0, kPi, dt) == doctest::Approx(kPi));
    CHECK_THROWS_AS(gamma_from_overlap(0.0, kPi, dt), std::domain_error);
}
