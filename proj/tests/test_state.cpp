#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "epiq/errors.hpp"
#include "epiq/rng.hpp"
#include "epiq/state.hpp"

using namespace epiq;

namespace {

QuantumState random_state(int n, std::uint64_t seed) {
    QuantumState st(n, StateMode::pure);
    RandomStream rng(seed);
    double norm = 0.0;
    for (auto& a : st.raw()) {
        a = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
        norm += std::norm(a);
    }
    for (auto& a : st.raw())
        a /= std::sqrt(norm);
    return st;
}

// Fidelity |<a|b>| between two pure states.
double overlap_mag(const QuantumState& a, const QuantumState& b) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k)
        acc += std::conj(a.raw()[k]) * b.raw()[k];
    return std::abs(acc);
}

void apply_cnot(QuantumState& st, int control, int target) {
    const std::size_t mc = std::size_t{1} << control;
    const std::size_t mt = std::size_t{1} << target;
    auto& amp = st.raw();
    for (std::size_t k = 0; k < st.dim(); ++k)
        if ((k & mc) && !(k & mt))
            std::swap(amp[k], amp[k | mt]);
}

void apply_rz(QuantumState& st, int q, double theta) {
    const std::size_t mq = std::size_t{1} << q;
    const cplx p0 = std::polar(1.0, -theta / 2);
    const cplx p1 = std::polar(1.0, theta / 2);
    auto& amp = st.raw();
    for (std::size_t k = 0; k < st.dim(); ++k)
        amp[k] *= (k & mq) ? p1 : p0;
}

void apply_hadamard(QuantumState& st, int q) {
    const std::size_t mq = std::size_t{1} << q;
    const double r = 1.0 / std::sqrt(2.0);
    auto& amp = st.raw();
    for (std::size_t k = 0; k < st.dim(); ++k) {
        if (k & mq) continue;
        const cplx u = amp[k], v = amp[k | mq];
        amp[k] = r * (u + v);
        amp[k | mq] = r * (u - v);
    }
}

} // namespace

TEST_CASE("basis state construction") {
    QuantumState a = QuantumState::basis_state(1, "0");
    CHECK(a.raw()[0] == cplx(1.0, 0.0));

    QuantumState b = QuantumState::basis_state(2, "01");
    CHECK(b.raw()[1] == cplx(1.0, 0.0)); // |01>: qubit 0 set

    // 1+4 layout: index qubit 0 is |1>, susceptible 1..4 and baths |0>.
    QuantumState c = QuantumState::basis_state(10, "0000000001");
    CHECK(c.norm() == doctest::Approx(1.0));
    CHECK(c.expect_z(0) == doctest::Approx(-1.0));
    for (int q = 1; q <= 4; ++q)
        CHECK(c.expect_z(q) == doctest::Approx(1.0));

    CHECK_THROWS_AS(QuantumState::basis_state(3, "01"), ValidationError);
}

TEST_CASE("zz rotation phases and errors") {
    QuantumState st = QuantumState::basis_state(2, "00");
    st.apply_zz_rotation(0, 1, 0.7);
    CHECK(st.raw()[0].real() == doctest::Approx(std::cos(0.35)));
    CHECK(st.raw()[0].imag() == doctest::Approx(-std::sin(0.35)));

    QuantumState id = random_state(3, 11);
    QuantumState copy = id;
    id.apply_zz_rotation(0, 2, 0.0);
    CHECK(overlap_mag(id, copy) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(st.apply_zz_rotation(1, 1, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(st.apply_zz_rotation(0, 1, std::nan("")),
                    std::invalid_argument);
}

TEST_CASE("zz rotation matches CNOT-Rz-CNOT decomposition") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const double theta = 0.37 + 0.11 * seed;
        QuantumState a = random_state(4, seed);
        QuantumState b = a;
        a.apply_zz_rotation(1, 3, theta);
        apply_cnot(b, 1, 3);
        apply_rz(b, 3, theta);
        apply_cnot(b, 1, 3);
        CHECK(overlap_mag(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("xx rotation action and Hadamard conjugation oracle") {
    QuantumState st = QuantumState::basis_state(2, "00");
    st.apply_xx_rotation(0, 1, std::numbers::pi);
    CHECK(std::abs(st.raw()[3] - cplx(0.0, -1.0)) < 1e-12); // -i|11>

    for (std::uint64_t seed : {5u, 6u}) {
        const double theta = 0.91 + 0.2 * seed;
        QuantumState a = random_state(4, seed);
        QuantumState b = a;
        a.apply_xx_rotation(0, 2, theta);
        apply_hadamard(b, 0);
        apply_hadamard(b, 2);
        b.apply_zz_rotation(0, 2, theta);
        apply_hadamard(b, 0);
        apply_hadamard(b, 2);
        CHECK(overlap_mag(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(st.apply_xx_rotation(0, 0, 0.3), std::invalid_argument);
}

TEST_CASE("density-mode gates match pure-mode outer products") {
    QuantumState psi = random_state(3, 17);
    QuantumState rho(3, StateMode::density);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c)
            rho.raw()[r * 8 + c] = psi.raw()[r] * std::conj(psi.raw()[c]);
    psi.apply_zz_rotation(0, 2, 0.41);
    psi.apply_xx_rotation(1, 2, 1.3);
    rho.apply_zz_rotation(0, 2, 0.41);
    rho.apply_xx_rotation(1, 2, 1.3);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c)
            CHECK(std::abs(rho.raw()[r * 8 + c] -
                           psi.raw()[r] * std::conj(psi.raw()[c])) < 1e-12);
}

TEST_CASE("reset channel") {
    RandomStream rng(3);

    QuantumState one = QuantumState::basis_state(1, "1");
    one.reset_qubit(0, 1, rng);
    CHECK(std::abs(one.raw()[1] - cplx(1.0, 0.0)) < 1e-12);

    QuantumState plus(1, StateMode::pure);
    plus.raw() = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};
    plus.reset_qubit(0, 1, rng);
    CHECK(std::norm(plus.raw()[1]) == doctest::Approx(1.0));

    // Bell state, density mode: reset qubit 0 to 0 -> |0><0| (x) I/2.
    QuantumState bell(2, StateMode::density);
    std::fill(bell.raw().begin(), bell.raw().end(), cplx{});
    for (std::size_t r : {std::size_t{0}, std::size_t{3}})
        for (std::size_t c : {std::size_t{0}, std::size_t{3}})
            bell.raw()[r * 4 + c] = 0.5;
    bell.reset_qubit(0, 0);
    CHECK(bell.raw()[0].real() == doctest::Approx(0.5));  // |00><00|
    CHECK(bell.raw()[2 * 4 + 2].real() == doctest::Approx(0.5)); // |10><10|
    CHECK(std::abs(bell.raw()[1]) < 1e-12);
    CHECK(bell.norm() == doctest::Approx(1.0));

    // Bell state, trajectory mode: outcome is |00> or |01> equally likely.
    int outcomes[2] = {0, 0};
    for (int t = 0; t < 400; ++t) {
        RandomStream traj = RandomStream::derive(9, t);
        QuantumState b(2, StateMode::pure);
        b.raw() = {cplx(1 / std::sqrt(2.0), 0), 0.0, 0.0,
                   cplx(1 / std::sqrt(2.0), 0)};
        b.reset_qubit(0, 0, traj);
        if (std::norm(b.raw()[0]) > 0.5)
            ++outcomes[0];
        else {
            CHECK(std::norm(b.raw()[2]) == doctest::Approx(1.0));
            ++outcomes[1];
        }
    }
    CHECK(outcomes[0] + outcomes[1] == 400);
    CHECK(outcomes[0] > 140);
    CHECK(outcomes[1] > 140);
}

TEST_CASE("expect_z basics") {
    CHECK(QuantumState::basis_state(1, "0").expect_z(0) == doctest::Approx(1.0));
    CHECK(QuantumState::basis_state(1, "1").expect_z(0) == doctest::Approx(-1.0));
    QuantumState plus(1, StateMode::pure);
    plus.raw() = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};
    CHECK(plus.expect_z(0) == doctest::Approx(0.0));
}

TEST_CASE("sample_z statistics and determinism") {
    QuantumState zero = QuantumState::basis_state(1, "0");
    ShotResult all0 = sample_z(zero, {0}, 4096, 7);
    CHECK(all0.counts.at("0") == 4096);

    QuantumState plus(1, StateMode::pure);
    plus.raw() = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};
    ShotResult r1 = sample_z(plus, {0}, 4096, 42);
    ShotResult r2 = sample_z(plus, {0}, 4096, 42);
    CHECK(r1.counts == r2.counts);
    const double frac = static_cast<double>(r1.counts.at("0")) / 4096.0;
    CHECK(std::abs(frac - 0.5) < 0.03);

    CHECK_THROWS_AS(sample_z(plus, {0}, 0, 1), std::invalid_argument);
}

TEST_CASE("norm and trace preserved over long random gate sequences") {
    RandomStream rng(101);
    QuantumState psi = random_state(4, 55);
    QuantumState rho(4, StateMode::density);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c)
            rho.raw()[r * 16 + c] = psi.raw()[r] * std::conj(psi.raw()[c]);
    for (int g = 0; g < 1000; ++g) {
        const int a = static_cast<int>(rng.next_u64() % 4);
        int b = static_cast<int>(rng.next_u64() % 4);
        if (b == a) b = (b + 1) % 4;
        const double theta = 4.0 * rng.uniform() - 2.0;
        if (rng.uniform() < 0.5) {
            psi.apply_zz_rotation(a, b, theta);
            rho.apply_zz_rotation(a, b, theta);
        } else {
            psi.apply_xx_rotation(a, b, theta);
            rho.apply_xx_rotation(a, b, theta);
        }
    }
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
    CHECK(std::abs(rho.norm() - 1.0) < 1e-10);
    CHECK(rho.hermiticity_defect() < 1e-10);
}

TEST_CASE("system ZZ terms commute: application order is irrelevant") {
    QuantumState a = random_state(4, 77);
    QuantumState b = a;
    a.apply_zz_rotation(0, 2, 0.3);
    a.apply_zz_rotation(0, 3, 0.9);
    a.apply_zz_rotation(1, 2, -0.4);
    b.apply_zz_rotation(1, 2, -0.4);
    b.apply_zz_rotation(0, 3, 0.9);
    b.apply_zz_rotation(0, 2, 0.3);
    for (std::size_t k = 0; k < a.dim(); ++k)
        CHECK(std::abs(a.raw()[k] - b.raw()[k]) < 1e-12);
}

TEST_CASE("trajectory average of reset reproduces density-mode marginals") {
    QuantumState psi = random_state(4, 31);
    QuantumState rho(4, StateMode::density);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c)
            rho.raw()[r * 16 + c] = psi.raw()[r] * std::conj(psi.raw()[c]);
    rho.reset_qubit(2, 0);

    const int n_traj = 10000;
    std::vector<double> z_sum(4, 0.0);
    for (int t = 0; t < n_traj; ++t) {
        RandomStream rng = RandomStream::derive(123, t);
        QuantumState s = psi;
        s.reset_qubit(2, 0, rng);
        for (int q = 0; q < 4; ++q)
            z_sum[q] += s.expect_z(q);
    }
    for (int q = 0; q < 4; ++q) {
        const double traj_z = z_sum[q] / n_traj;
        const double dens_z = rho.expect_z(q);
        // 4 binomial standard errors on the +/-1-valued estimate.
        const double tol = 4.0 / std::sqrt(static_cast<double>(n_traj)) + 1e-9;
        CHECK(std::abs(traj_z - dens_z) < tol);
    }
}

TEST_CASE("engine size refusal") {
    CHECK_THROWS_AS(QuantumState(14, StateMode::density), EngineRefusal);
}
