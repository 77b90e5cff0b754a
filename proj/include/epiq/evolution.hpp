#pragma once

#include <cstdint>

#include "epiq/model.hpp"
#include "epiq/state.hpp"
#include "epiq/timeseries.hpp"

namespace epiq {

enum class RunMode { density, shots };

// Number of Trotter steps per reset interval; throws ValidationError if
// delta_t is not an integer multiple of dt (tolerance 1e-9).
int trotter_steps(double delta_t, double dt);

// N first-order Trotter steps of exp(-iH delta_t), each applying every term
// once in the order given (the canonical order when terms come from
// build_terms).
void trotter_interval(QuantumState& state,
                      const std::vector<HamiltonianTerm>& terms,
                      double delta_t, double dt);

// Full protocol: init (index |1>, rest |0>), then per interval evolve,
// reset baths to 0, reset index qubits to 1, record survival of every
// susceptible site. Shots mode runs an independent trajectory batch per
// recorded day, measured only at that terminal day.
TimeSeries run_protocol(const EpidemicModel& model, int days, RunMode mode,
                        std::int64_t shots = 4096, std::uint64_t seed = 1);

struct RateFit {
    double rate = 0.0;
    double stderr_ = 0.0;
    double chi2_reduced = 0.0;
    bool single_exponential = true; // false when reduced chi^2 > 10
};

// Weighted least squares of ln P(t) = -Gamma t through the origin over the
// t > 0 points of the series.
RateFit extract_infection_rate(const TimeSeries& series, int site);

} // namespace epiq
