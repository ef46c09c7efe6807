#pragma once

#include <cstdint>

#include "qaemu/ising.hpp"
#include "qaemu/rng.hpp"
#include "qaemu/sampleset.hpp"

namespace qaemu {

struct SamplerConfig {
    std::uint64_t seed = 0;
    std::uint64_t num_reads = 1000;
    std::uint64_t sweeps_per_read = 10;
    std::uint64_t burn_in_sweeps = 1000;
};

// Single-site Gibbs (heat-bath) chain. Each sweep resamples sites 0..N-1 in
// order from the exact conditional P(S_i = s | rest) = sigmoid(-2 beta s l_i)
// with l_i = h_i + sum_j J_ij S_j. The initial state is uniform random from
// the seed; one read is recorded every sweeps_per_read after burn-in.
// Deterministic for a fixed seed.
Sampleset gibbs_sample(const IsingModel& model, double beta, const SamplerConfig& config);

// Internal chain form used by the device emulator: advances an existing
// state in place by one sweep.
void gibbs_sweep(const IsingModel& model, double beta, std::vector<std::int8_t>& spins,
                 Rng& rng);

// I.i.d. draws from a distribution table by inverse CDF over the table's
// fixed (sorted) state order. Row energies are recovered from the table's
// (beta, log Z) when available with beta > 0, otherwise set to 0.
Sampleset exact_sample(const DistributionTable& table, std::uint64_t num_reads,
                       std::uint64_t seed);

}  // namespace qaemu
