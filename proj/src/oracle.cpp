#include "epiq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "epiq/errors.hpp"
#include "epiq/evolution.hpp"
#include "epiq/fitting.hpp"

namespace epiq {

namespace {

inline double zbit(std::size_t n, int k) {
    return (n >> k) & 1 ? -1.0 : 1.0;
}

// (1 - cos(w t)) / w^2 with its removable singularity evaluated as t^2/2.
double cos_kernel(double w, double t) {
    if (std::abs(w) < 1e-9) return t * t / 2.0;
    return (1.0 - std::cos(w * t)) / (w * w);
}

std::size_t config_dim(const EpidemicModel& model) {
    const int sites = model.n_sites();
    if (sites > 12)
        throw EngineRefusal("markov oracle refuses " + std::to_string(sites) +
                            " sites (dense limit 12)");
    return std::size_t{1} << sites;
}

} // namespace

std::vector<double> StochasticMatrix::apply(const std::vector<double>& p) const {
    std::vector<double> out(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        const double* row = entries.data() + r * dim;
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c)
            acc += row[c] * p[c];
        out[r] = acc;
    }
    return out;
}

double config_energy(std::size_t n, const EpidemicModel& model) {
    double e = 0.0;
    for (int i = 0; i < model.n_index; ++i)
        for (int j = 0; j < model.n_susceptible; ++j)
            e += -model.gamma[i][j] * zbit(n, i) *
                 zbit(n, model.susceptible_qubit(j));
    return e;
}

StochasticMatrix second_order_matrix(const EpidemicModel& model,
                                     bool include_index_flips) {
    model.validate();
    const std::size_t dim = config_dim(model);
    const double l2 = model.lambda * model.lambda;
    const double dt = model.delta_t;
    StochasticMatrix S(dim);
    std::vector<double> energy(dim);
    for (std::size_t n = 0; n < dim; ++n)
        energy[n] = config_energy(n, model);
    for (std::size_t n = 0; n < dim; ++n) {
        double tot = 0.0;
        for (int j = 0; j < model.n_susceptible; ++j) {
            const std::size_t m = n ^ (std::size_t{1} << model.susceptible_qubit(j));
            const double w = -2.0 * model.n_index * model.alpha + energy[n] -
                             energy[m];
            const double a = cos_kernel(w, dt);
            S.at(m, n) += 2.0 * l2 * a;
            tot += a;
        }
        if (include_index_flips) {
            for (int i = 0; i < model.n_index; ++i) {
                const std::size_t m = n ^ (std::size_t{1} << i);
                const double w = -2.0 * model.n_susceptible * model.alpha +
                                 energy[n] - energy[m];
                const double b = cos_kernel(w, dt);
                S.at(m, n) += 2.0 * l2 * b;
                tot += b;
            }
        }
        const double diag = 1.0 - 2.0 * l2 * tot;
        if (diag < -1e-12)
            throw CalibrationError(
                "second_order_matrix: negative diagonal at lambda = " +
                std::to_string(model.lambda) +
                " (outside the perturbative regime)");
        S.at(n, n) += std::max(0.0, diag);
    }
    return S;
}

StochasticMatrix reset_matrix(const EpidemicModel& model) {
    const std::size_t dim = config_dim(model);
    const std::size_t index_mask = (std::size_t{1} << model.n_index) - 1;
    StochasticMatrix R(dim);
    for (std::size_t n = 0; n < dim; ++n)
        R.at(n | index_mask, n) += 1.0;
    return R;
}

std::vector<double> initial_distribution(const EpidemicModel& model) {
    const std::size_t dim = config_dim(model);
    std::vector<double> p(dim, 0.0);
    p[(std::size_t{1} << model.n_index) - 1] = 1.0;
    return p;
}

TimeSeries markov_evolve(const StochasticMatrix& S, const StochasticMatrix& R,
                         std::vector<double> p0, int steps,
                         const EpidemicModel& model) {
    if (S.dim != R.dim || p0.size() != S.dim)
        throw ValidationError("markov_evolve: dimension mismatch");
    TimeSeries out;
    out.populations.resize(model.n_susceptible);
    for (int j = 0; j < model.n_susceptible; ++j)
        out.populations[j] = model.population(j);
    auto record = [&](double day, const std::vector<double>& p) {
        std::vector<double> surv(model.n_susceptible, 0.0);
        for (std::size_t n = 0; n < p.size(); ++n)
            for (int j = 0; j < model.n_susceptible; ++j)
                if (!((n >> model.susceptible_qubit(j)) & 1))
                    surv[j] += p[n];
        for (double& s : surv)
            s = std::clamp(s, 0.0, 1.0);
        out.times.push_back(day);
        out.survival.push_back(std::move(surv));
        out.stderrs.emplace_back(model.n_susceptible, 0.0);
    };
    record(0.0, p0);
    std::vector<double> p = std::move(p0);
    for (int k = 1; k <= steps; ++k) {
        p = R.apply(S.apply(p));
        record(k * model.delta_t, p);
    }
    return out;
}

double multi_source_rate(const std::vector<double>& gammas, double alpha,
                         double lambda, double delta_t) {
    double arg = 0.0;
    for (double g : gammas)
        arg += (g - alpha) * delta_t;
    const double s = sinc(arg);
    return lambda * lambda * delta_t * s * s;
}

PairRate pair_decay_rate(double gamma, double alpha, double lambda,
                         double delta_t) {
    auto coeff = [&](double w) {
        if (std::abs(w) < 1e-9) return delta_t * delta_t;
        const double s = std::sin(w * delta_t);
        return s * s / (w * w);
    };
    PairRate r;
    r.a0 = coeff(gamma + alpha);
    r.a1 = coeff(gamma - alpha);
    const double scale = std::max({r.a0, r.a1, 1e-30});
    r.diagonalizable = std::abs(r.a0 - r.a1) > 1e-12 * scale;
    const double q = lambda * lambda * (r.a0 + r.a1);
    if (q >= 1.0)
        throw CalibrationError(
            "pair_decay_rate: lambda^2 (A0+A1) >= 1, outside the perturbative regime");
    r.rate = -std::log1p(-q) / delta_t;
    return r;
}

namespace {

// Sparse Hamiltonian: real diagonal plus XX couplings, each of which is a
// basis-index XOR mask with a real coefficient.
struct SparseHam {
    std::vector<double> diag;
    std::vector<std::pair<std::size_t, double>> xx;
    std::size_t dim = 0;
};

SparseHam build_sparse(const EpidemicModel& m) {
    SparseHam h;
    h.dim = std::size_t{1} << m.n_qubits();
    h.diag.resize(h.dim);
    for (std::size_t k = 0; k < h.dim; ++k) {
        double e = 0.0;
        for (int i = 0; i < m.n_index; ++i)
            for (int j = 0; j < m.n_susceptible; ++j) {
                e += -m.gamma[i][j] * zbit(k, i) *
                     zbit(k, m.susceptible_qubit(j));
                e += -m.alpha * zbit(k, m.bath_qubit(i)) *
                     zbit(k, m.bath_qubit(m.susceptible_qubit(j)));
            }
        h.diag[k] = e;
    }
    for (int k = 0; k < m.n_sites(); ++k) {
        const std::size_t mask = (std::size_t{1} << k) |
                                 (std::size_t{1} << m.bath_qubit(k));
        h.xx.emplace_back(mask, -m.lambda);
    }
    return h;
}

// out = -i (H rho - rho H)
void commutator(const SparseHam& h, const cplx* rho, cplx* out) {
    const std::size_t dim = h.dim;
    for (std::size_t r = 0; r < dim; ++r) {
        const double dr = h.diag[r];
        const cplx* row = rho + r * dim;
        cplx* orow = out + r * dim;
        for (std::size_t c = 0; c < dim; ++c)
            orow[c] = (dr - h.diag[c]) * row[c];
        for (const auto& [mask, coeff] : h.xx) {
            const cplx* prow = rho + (r ^ mask) * dim;
            for (std::size_t c = 0; c < dim; ++c)
                orow[c] += coeff * (prow[c] - row[c ^ mask]);
        }
        for (std::size_t c = 0; c < dim; ++c) {
            const cplx v = orow[c];
            orow[c] = cplx(v.imag(), -v.real());
        }
    }
}

void reset_density_raw(std::vector<cplx>& rho, std::size_t dim, int q,
                       int target) {
    const std::size_t mq = std::size_t{1} << q;
    for (std::size_t r = 0; r < dim; ++r) {
        if (r & mq) continue;
        cplx* rowa = rho.data() + r * dim;
        cplx* rowb = rho.data() + (r | mq) * dim;
        cplx* rowt = target ? rowb : rowa;
        for (std::size_t c = 0; c < dim; ++c) {
            if (c & mq) continue;
            const std::size_t c1 = c | mq;
            const cplx keep = rowa[c] + rowb[c1];
            rowa[c] = 0.0;
            rowa[c1] = 0.0;
            rowb[c] = 0.0;
            rowb[c1] = 0.0;
            rowt[target ? c1 : c] = keep;
        }
    }
}

} // namespace

TimeSeries rk4_evolve(const EpidemicModel& model, int days, double step) {
    model.validate();
    if (days < 1)
        throw ValidationError("rk4_evolve: days must be positive");
    if (model.n_qubits() > 12)
        throw EngineRefusal("rk4 oracle refuses " +
                            std::to_string(model.n_qubits()) +
                            " qubits (density limit 12)");
    const double ratio = model.delta_t / step;
    const long nsteps = std::lround(ratio);
    if (nsteps < 1 || std::abs(ratio - nsteps) > 1e-6)
        throw ValidationError("rk4_evolve: delta_t must be a multiple of the step");
    const SparseHam h = build_sparse(model);
    const std::size_t dim = h.dim;
    const std::size_t sz = dim * dim;

    std::vector<cplx> rho(sz, cplx{});
    const std::size_t init = (std::size_t{1} << model.n_index) - 1;
    rho[init * dim + init] = 1.0;
    std::vector<cplx> k1(sz), k2(sz), k3(sz), k4(sz), tmp(sz);

    TimeSeries out;
    out.populations.resize(model.n_susceptible);
    for (int j = 0; j < model.n_susceptible; ++j)
        out.populations[j] = model.population(j);
    auto record = [&](double day) {
        std::vector<double> surv(model.n_susceptible);
        for (int j = 0; j < model.n_susceptible; ++j) {
            double z = 0.0;
            const int q = model.susceptible_qubit(j);
            for (std::size_t k = 0; k < dim; ++k)
                z += ((k >> q) & 1 ? -1.0 : 1.0) * rho[k * dim + k].real();
            surv[j] = std::clamp((1.0 + z) / 2.0, 0.0, 1.0);
        }
        out.times.push_back(day);
        out.survival.push_back(std::move(surv));
        out.stderrs.emplace_back(model.n_susceptible, 0.0);
    };
    record(0.0);

    const double hh = step;
    for (int d = 1; d <= days; ++d) {
        for (long s = 0; s < nsteps; ++s) {
            commutator(h, rho.data(), k1.data());
            for (std::size_t i = 0; i < sz; ++i)
                tmp[i] = rho[i] + 0.5 * hh * k1[i];
            commutator(h, tmp.data(), k2.data());
            for (std::size_t i = 0; i < sz; ++i)
                tmp[i] = rho[i] + 0.5 * hh * k2[i];
            commutator(h, tmp.data(), k3.data());
            for (std::size_t i = 0; i < sz; ++i)
                tmp[i] = rho[i] + hh * k3[i];
            commutator(h, tmp.data(), k4.data());
            for (std::size_t i = 0; i < sz; ++i)
                rho[i] += hh / 6.0 *
                          (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        double trace = 0.0;
        for (std::size_t k = 0; k < dim; ++k)
            trace += rho[k * dim + k].real();
        if (std::abs(trace - 1.0) > 1e-8)
            throw std::runtime_error(
                "rk4_evolve: trace drift " + std::to_string(trace - 1.0) +
                " exceeds 1e-8; reduce the step size");
        for (int k = 0; k < model.n_sites(); ++k)
            reset_density_raw(rho, dim, model.bath_qubit(k), 0);
        for (int i = 0; i < model.n_index; ++i)
            reset_density_raw(rho, dim, i, 1);
        record(d * model.delta_t);
    }
    return out;
}

} // namespace epiq
