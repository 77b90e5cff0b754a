#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "epiq/rng.hpp"

namespace epiq {

using cplx = std::complex<double>;

enum class StateMode { pure, density };

// Throws EngineRefusal when n_qubits exceeds the engine budget for the mode.
void check_qubit_budget(int n_qubits, StateMode mode);

// Dense multi-qubit state, either a statevector (pure mode) or a full density
// matrix (density mode, row-major dim x dim). Qubit q corresponds to bit q of
// the basis index; bitstrings read the highest qubit first.
class QuantumState {
public:
    QuantumState(int n_qubits, StateMode mode);

    static QuantumState basis_state(int n_qubits, const std::string& bits,
                                    StateMode mode = StateMode::pure);

    int n_qubits() const { return n_qubits_; }
    StateMode mode() const { return mode_; }
    std::size_t dim() const { return dim_; }

    cplx* data() { return amp_.data(); }
    const cplx* data() const { return amp_.data(); }
    std::vector<cplx>& raw() { return amp_; }
    const std::vector<cplx>& raw() const { return amp_; }

    // exp(-i theta/2 Z_a Z_b)
    void apply_zz_rotation(int a, int b, double theta);
    // exp(-i theta/2 X_a X_b)
    void apply_xx_rotation(int a, int b, double theta);
    // Multiply basis state k by phase[k] (fused diagonal evolution).
    void apply_phase_diagonal(const std::vector<cplx>& phase);

    // Reset channel. Density mode: exact channel |t><t|_q (x) Tr_q(rho),
    // rng unused. Pure mode: projective measurement using rng, then a flip
    // if the outcome differs from target.
    void reset_qubit(int q, int target, RandomStream& rng);
    // Density-mode-only overload (deterministic channel needs no rng).
    void reset_qubit(int q, int target);

    double expect_z(int q) const;

    // Pure: 2-norm of the amplitude vector. Density: trace (real part).
    double norm() const;

    // Max |rho - rho^dagger| entry; 0 in pure mode.
    double hermiticity_defect() const;

    std::vector<double> basis_probabilities() const;

    std::size_t sample_basis(RandomStream& rng) const;

private:
    void check_qubit(int q) const;

    int n_qubits_;
    StateMode mode_;
    std::size_t dim_;
    std::vector<cplx> amp_;
};

struct ShotResult {
    std::map<std::string, std::int64_t> counts;
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
};

// Measure the given qubits (bitstring ordered highest-listed-qubit first is
// NOT used; the string lists qubits in the order given) over `shots`
// repetitions of the Born distribution.
ShotResult sample_z(const QuantumState& state, const std::vector<int>& qubits,
                    std::int64_t shots, std::uint64_t seed);

} // namespace epiq
