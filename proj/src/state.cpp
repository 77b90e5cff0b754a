#include "epiq/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epiq/errors.hpp"

namespace epiq {

namespace {
constexpr int kMaxPureQubits = 28;
constexpr int kMaxDensityQubits = 13;
} // namespace

void check_qubit_budget(int n_qubits, StateMode mode) {
    if (mode == StateMode::pure && n_qubits > kMaxPureQubits)
        throw EngineRefusal("statevector engine refuses " +
                            std::to_string(n_qubits) + " qubits (max " +
                            std::to_string(kMaxPureQubits) + ")");
    if (mode == StateMode::density && n_qubits > kMaxDensityQubits)
        throw EngineRefusal("density-matrix engine refuses " +
                            std::to_string(n_qubits) + " qubits (max " +
                            std::to_string(kMaxDensityQubits) + ")");
}

QuantumState::QuantumState(int n_qubits, StateMode mode)
    : n_qubits_(n_qubits), mode_(mode) {
    if (n_qubits < 1)
        throw ValidationError("QuantumState: need at least one qubit");
    check_qubit_budget(n_qubits, mode);
    dim_ = std::size_t{1} << n_qubits;
    amp_.assign(mode == StateMode::pure ? dim_ : dim_ * dim_, cplx{});
    amp_[0] = 1.0; // |0...0> / |0..0><0..0|
}

QuantumState QuantumState::basis_state(int n_qubits, const std::string& bits,
                                       StateMode mode) {
    if (static_cast<int>(bits.size()) != n_qubits)
        throw ValidationError("basis_state: bitstring length " +
                              std::to_string(bits.size()) + " != n_qubits " +
                              std::to_string(n_qubits));
    std::size_t idx = 0;
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw ValidationError("basis_state: bitstring must be 0/1");
        idx = (idx << 1) | static_cast<std::size_t>(c - '0');
    }
    QuantumState st(n_qubits, mode);
    st.amp_[0] = 0.0;
    if (mode == StateMode::pure)
        st.amp_[idx] = 1.0;
    else
        st.amp_[idx * st.dim_ + idx] = 1.0;
    return st;
}

void QuantumState::check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_)
        throw std::out_of_range("qubit index " + std::to_string(q) +
                                " out of range for " +
                                std::to_string(n_qubits_) + " qubits");
}

void QuantumState::apply_zz_rotation(int a, int b, double theta) {
    check_qubit(a);
    check_qubit(b);
    if (a == b)
        throw std::invalid_argument("zz rotation needs two distinct qubits");
    if (!std::isfinite(theta))
        throw std::invalid_argument("zz rotation angle must be finite");
    const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b;
    const cplx ph_even = std::polar(1.0, -theta / 2); // parity bits equal
    const cplx ph_odd = std::conj(ph_even);
    if (mode_ == StateMode::pure) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const bool odd = ((k & ma) != 0) != ((k & mb) != 0);
            amp_[k] *= odd ? ph_odd : ph_even;
        }
        return;
    }
    // rho -> U rho U^dag: entry (r,c) picks up ph(r) * conj(ph(c)); equal
    // parities cancel, so only mixed-parity entries change.
    const cplx cross = ph_even * std::conj(ph_odd); // row even, col odd
    const cplx cross_c = std::conj(cross);
    for (std::size_t r = 0; r < dim_; ++r) {
        const bool ro = ((r & ma) != 0) != ((r & mb) != 0);
        cplx* row = amp_.data() + r * dim_;
        for (std::size_t c = 0; c < dim_; ++c) {
            const bool co = ((c & ma) != 0) != ((c & mb) != 0);
            if (ro != co)
                row[c] *= ro ? cross_c : cross;
        }
    }
}

void QuantumState::apply_xx_rotation(int a, int b, double theta) {
    check_qubit(a);
    check_qubit(b);
    if (a == b)
        throw std::invalid_argument("xx rotation needs two distinct qubits");
    if (!std::isfinite(theta))
        throw std::invalid_argument("xx rotation angle must be finite");
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    const double co = std::cos(theta / 2);
    const cplx si = cplx{0.0, -std::sin(theta / 2)};
    const std::size_t bit_a = std::size_t{1} << std::min(a, b);
    if (mode_ == StateMode::pure) {
        for (std::size_t k = 0; k < dim_; ++k) {
            if (k & bit_a) continue; // visit each {k, k^mask} pair once
            const std::size_t p = k ^ mask;
            const cplx u = amp_[k], v = amp_[p];
            amp_[k] = co * u + si * v;
            amp_[p] = si * u + co * v;
        }
        return;
    }
    // Row pass (U rho), then column pass (rho U^dag).
    for (std::size_t r = 0; r < dim_; ++r) {
        if (r & bit_a) continue;
        cplx* row0 = amp_.data() + r * dim_;
        cplx* row1 = amp_.data() + (r ^ mask) * dim_;
        for (std::size_t c = 0; c < dim_; ++c) {
            const cplx u = row0[c], v = row1[c];
            row0[c] = co * u + si * v;
            row1[c] = si * u + co * v;
        }
    }
    const cplx si_c = std::conj(si);
    for (std::size_t r = 0; r < dim_; ++r) {
        cplx* row = amp_.data() + r * dim_;
        for (std::size_t c = 0; c < dim_; ++c) {
            if (c & bit_a) continue;
            const std::size_t p = c ^ mask;
            const cplx u = row[c], v = row[p];
            row[c] = co * u + si_c * v;
            row[p] = si_c * u + co * v;
        }
    }
}

void QuantumState::apply_phase_diagonal(const std::vector<cplx>& phase) {
    if (phase.size() != dim_)
        throw std::invalid_argument("phase vector size must equal state dim");
    if (mode_ == StateMode::pure) {
        for (std::size_t k = 0; k < dim_; ++k)
            amp_[k] *= phase[k];
        return;
    }
    for (std::size_t r = 0; r < dim_; ++r) {
        cplx* row = amp_.data() + r * dim_;
        const cplx pr = phase[r];
        for (std::size_t c = 0; c < dim_; ++c)
            row[c] *= pr * std::conj(phase[c]);
    }
}

void QuantumState::reset_qubit(int q, int target) {
    if (mode_ != StateMode::density)
        throw std::logic_error("rng-less reset_qubit is density-mode only");
    check_qubit(q);
    if (target != 0 && target != 1)
        throw std::invalid_argument("reset target must be 0 or 1");
    const std::size_t mq = std::size_t{1} << q;
    // rho -> |t><t|_q (x) Tr_q(rho): within each 2x2 block over qubit q the
    // two diagonal sub-blocks add into the target slot, the off-diagonal
    // sub-blocks vanish.
    for (std::size_t r = 0; r < dim_; ++r) {
        if (r & mq) continue;
        const std::size_t r1 = r | mq;
        cplx* rowa = amp_.data() + r * dim_;
        cplx* rowb = amp_.data() + r1 * dim_;
        cplx* rowt = target ? rowb : rowa;
        for (std::size_t c = 0; c < dim_; ++c) {
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

void QuantumState::reset_qubit(int q, int target, RandomStream& rng) {
    if (mode_ == StateMode::density) {
        reset_qubit(q, target);
        return;
    }
    check_qubit(q);
    if (target != 0 && target != 1)
        throw std::invalid_argument("reset target must be 0 or 1");
    const std::size_t mq = std::size_t{1} << q;
    double p1 = 0.0;
    for (std::size_t k = 0; k < dim_; ++k)
        if (k & mq) p1 += std::norm(amp_[k]);
    const int outcome = rng.uniform() < p1 ? 1 : 0;
    const double pk = outcome ? p1 : 1.0 - p1;
    const double scale = pk > 0.0 ? 1.0 / std::sqrt(pk) : 0.0;
    // Project onto the outcome branch, renormalise, then flip if needed.
    for (std::size_t k = 0; k < dim_; ++k) {
        const bool bit = (k & mq) != 0;
        amp_[k] = (bit == (outcome == 1)) ? amp_[k] * scale : cplx{};
    }
    if (outcome != target) {
        for (std::size_t k = 0; k < dim_; ++k) {
            if (k & mq) continue;
            std::swap(amp_[k], amp_[k | mq]);
        }
    }
}

double QuantumState::expect_z(int q) const {
    check_qubit(q);
    const std::size_t mq = std::size_t{1} << q;
    double acc = 0.0;
    if (mode_ == StateMode::pure) {
        for (std::size_t k = 0; k < dim_; ++k)
            acc += ((k & mq) ? -1.0 : 1.0) * std::norm(amp_[k]);
    } else {
        for (std::size_t k = 0; k < dim_; ++k)
            acc += ((k & mq) ? -1.0 : 1.0) * amp_[k * dim_ + k].real();
    }
    return acc;
}

double QuantumState::norm() const {
    if (mode_ == StateMode::pure) {
        double s = 0.0;
        for (const cplx& a : amp_)
            s += std::norm(a);
        return std::sqrt(s);
    }
    double tr = 0.0;
    for (std::size_t k = 0; k < dim_; ++k)
        tr += amp_[k * dim_ + k].real();
    return tr;
}

double QuantumState::hermiticity_defect() const {
    if (mode_ == StateMode::pure) return 0.0;
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r + 1; c < dim_; ++c)
            worst = std::max(worst, std::abs(amp_[r * dim_ + c] -
                                             std::conj(amp_[c * dim_ + r])));
    return worst;
}

std::vector<double> QuantumState::basis_probabilities() const {
    std::vector<double> p(dim_);
    if (mode_ == StateMode::pure) {
        for (std::size_t k = 0; k < dim_; ++k)
            p[k] = std::norm(amp_[k]);
    } else {
        for (std::size_t k = 0; k < dim_; ++k)
            p[k] = std::max(0.0, amp_[k * dim_ + k].real());
    }
    return p;
}

std::size_t QuantumState::sample_basis(RandomStream& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    if (mode_ == StateMode::pure) {
        for (std::size_t k = 0; k < dim_; ++k) {
            acc += std::norm(amp_[k]);
            if (u < acc) return k;
        }
    } else {
        for (std::size_t k = 0; k < dim_; ++k) {
            acc += std::max(0.0, amp_[k * dim_ + k].real());
            if (u < acc) return k;
        }
    }
    return dim_ - 1;
}

ShotResult sample_z(const QuantumState& state, const std::vector<int>& qubits,
                    std::int64_t shots, std::uint64_t seed) {
    if (shots <= 0)
        throw std::invalid_argument("sample_z: shots must be positive");
    ShotResult res;
    res.shots = shots;
    res.seed = seed;
    RandomStream rng(seed);
    for (std::int64_t s = 0; s < shots; ++s) {
        const std::size_t k = state.sample_basis(rng);
        std::string bits;
        bits.reserve(qubits.size());
        for (int q : qubits)
            bits.push_back((k >> q) & 1 ? '1' : '0');
        ++res.counts[bits];
    }
    return res;
}

} // namespace epiq
