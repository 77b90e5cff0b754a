#pragma once

#include <vector>

namespace epiq {

// All Hamiltonian parameters and the qubit layout they imply. System qubits
// come first: index patients 0..n_index-1, susceptible sites follow; bath
// qubit k + n_sites() pairs with system qubit k.
struct EpidemicModel {
    int n_index = 1;
    int n_susceptible = 1;
    std::vector<std::vector<double>> gamma; // [n_index][n_susceptible]
    double lambda = 0.201;
    double alpha = 3.14159265358979323846;
    double delta_t = 1.0;   // reset interval (days)
    double trotter_dt = 0.01;
    std::vector<double> populations; // per susceptible site; empty -> all 1

    int n_sites() const { return n_index + n_susceptible; }
    int n_qubits() const { return 2 * n_sites(); }
    int susceptible_qubit(int j) const { return n_index + j; }
    int bath_qubit(int k) const { return k + n_sites(); }

    double population(int j) const {
        return populations.empty() ? 1.0 : populations[j];
    }

    // Throws ValidationError on malformed sizes / signs / non-divisible steps.
    void validate() const;
};

struct HamiltonianTerm {
    enum class Kind { system_zz, coupling_xx, bath_zz };
    Kind kind;
    int a, b;
    double coefficient; // -gamma_ij, -lambda, -alpha respectively
};

// Terms of the full Hamiltonian in the canonical application order:
// system_zz sorted by (i,j), then coupling_xx by site, then bath_zz by (i,j).
std::vector<HamiltonianTerm> build_terms(const EpidemicModel& model);

} // namespace epiq
