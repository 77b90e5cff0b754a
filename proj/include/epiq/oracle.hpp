#pragma once

#include <cstdint>
#include <vector>

#include "epiq/model.hpp"
#include "epiq/timeseries.hpp"

namespace epiq {

// Dense column-stochastic matrix over the 2^(|I|+|S|) classical
// configurations of the system sites (bit k of a configuration index is
// site k, matching the quantum qubit layout).
struct StochasticMatrix {
    std::size_t dim = 0;
    std::vector<double> entries; // row-major

    explicit StochasticMatrix(std::size_t d)
        : dim(d), entries(d * d, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return entries[r * dim + c]; }
    double at(std::size_t r, std::size_t c) const {
        return entries[r * dim + c];
    }
    double column_sum(std::size_t c) const {
        double s = 0.0;
        for (std::size_t r = 0; r < dim; ++r)
            s += entries[r * dim + c];
        return s;
    }
    std::vector<double> apply(const std::vector<double>& p) const;
};

// E_n = -sum_ij gamma_ij z_i z_j with z = +1 for bit 0.
double config_energy(std::size_t n, const EpidemicModel& model);

// Second-order stochastic matrix S = I + lambda^2 S^(2)(delta_t).
// include_index_flips=false zeroes the B terms (used to demonstrate that
// the reset absorbs them). Throws CalibrationError if any diagonal entry
// goes negative (lambda outside the perturbative regime).
StochasticMatrix second_order_matrix(const EpidemicModel& model,
                                     bool include_index_flips = true);

// Reset matrix R: probability of (index bits, susceptible bits) moves to
// (all index bits set, same susceptible bits). Idempotent.
StochasticMatrix reset_matrix(const EpidemicModel& model);

// Point distribution on the all-index-infected, all-susceptible-clean
// configuration.
std::vector<double> initial_distribution(const EpidemicModel& model);

// p(k) = (R S)^k p0, recording per-susceptible-site survival each step.
TimeSeries markov_evolve(const StochasticMatrix& S, const StochasticMatrix& R,
                         std::vector<double> p0, int steps,
                         const EpidemicModel& model);

// Perturbative multi-source rate lambda^2 dt sinc^2(sum_i (gamma_i - alpha_i) dt)
// with every alpha_i = alpha.
double multi_source_rate(const std::vector<double>& gammas, double alpha,
                         double lambda, double delta_t);

struct PairRate {
    double rate = 0.0;          // (1/dt) ln 1/(1 - lambda^2 (A0 + A1))
    double a0 = 0.0, a1 = 0.0;  // sin^2((g±a)dt)/(g±a)^2
    bool diagonalizable = true; // false when A0 == A1 (singular eigenbasis)
};

// Closed-form 1+1 decay constant of the staggered chain R S.
PairRate pair_decay_rate(double gamma, double alpha, double lambda,
                         double delta_t);

// RK4 integration of d rho/dt = -i [H, rho] with fixed step (default 1e-3
// day) between reset boundaries, identical reset channels at each delta_t.
TimeSeries rk4_evolve(const EpidemicModel& model, int days, double step = 1e-3);

} // namespace epiq
