// Independent brute-force oracles for the test suites. Deliberately written
// against dense containers with naive loops so they share no code path with
// the library implementations they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qaemu/ising.hpp"

namespace oracle {

struct DenseModel {
    int n = 0;
    std::vector<double> h;
    std::vector<std::vector<double>> j;  // full matrix, upper triangle used
    double offset = 0.0;
};

inline DenseModel densify(const qaemu::IsingModel& model) {
    DenseModel dense;
    dense.n = static_cast<int>(model.num_spins());
    dense.h = model.h();
    dense.j.assign(dense.n, std::vector<double>(dense.n, 0.0));
    for (const auto& c : model.couplings()) dense.j[c.i][c.j] = c.value;
    dense.offset = model.offset();
    return dense;
}

inline double ising_energy(const DenseModel& m, const std::vector<int>& s) {
    double e = m.offset;
    for (int i = 0; i < m.n; ++i) e += m.h[i] * s[i];
    for (int i = 0; i < m.n; ++i)
        for (int k = i + 1; k < m.n; ++k) e += m.j[i][k] * s[i] * s[k];
    return e;
}

// QUBO value of the same coefficient triple over x in {0,1}^N.
inline double qubo_energy(const DenseModel& m, const std::vector<int>& x) {
    double e = m.offset;
    for (int i = 0; i < m.n; ++i) e += m.h[i] * x[i];
    for (int i = 0; i < m.n; ++i)
        for (int k = i + 1; k < m.n; ++k) e += m.j[i][k] * x[i] * x[k];
    return e;
}

// Basis order: counter x with spin 0 as the most significant bit.
inline std::vector<int> basis_spins(int n, std::uint64_t x) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = ((x >> (n - 1 - i)) & 1u) ? 1 : -1;
    return s;
}

inline std::vector<int> basis_bits(int n, std::uint64_t x) {
    std::vector<int> b(n);
    for (int i = 0; i < n; ++i) b[i] = static_cast<int>((x >> (n - 1 - i)) & 1u);
    return b;
}

inline std::vector<double> all_energies(const DenseModel& m) {
    if (m.n > 24) throw std::invalid_argument("oracle enumeration limit");
    std::vector<double> energies(std::uint64_t{1} << m.n);
    for (std::uint64_t x = 0; x < energies.size(); ++x)
        energies[x] = ising_energy(m, basis_spins(m.n, x));
    return energies;
}

// Boltzmann weights by direct summation (max-shifted for safety).
inline std::vector<double> boltzmann(const DenseModel& m, double beta) {
    const std::vector<double> energies = all_energies(m);
    double e_min = energies[0];
    for (const double e : energies) e_min = std::min(e_min, e);
    std::vector<double> p(energies.size());
    double z = 0.0;
    for (std::size_t k = 0; k < energies.size(); ++k) {
        p[k] = std::exp(-beta * (energies[k] - e_min));
        z += p[k];
    }
    for (double& v : p) v /= z;
    return p;
}

inline double partition(const DenseModel& m, double beta) {
    double z = 0.0;
    for (const double e : all_energies(m)) z += std::exp(-beta * e);
    return z;
}

}  // namespace oracle
