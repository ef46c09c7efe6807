#include "qaemu/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qaemu {

void gibbs_sweep(const IsingModel& model, double beta, std::vector<std::int8_t>& spins,
                 Rng& rng) {
    const auto& h = model.h();
    const auto& adj = model.adjacency();
    for (std::size_t i = 0; i < spins.size(); ++i) {
        double local = h[i];
        for (const auto& [nbr, j] : adj[i]) local += j * spins[nbr];
        // P(S_i = +1 | rest) = 1 / (1 + exp(2 beta local))
        const double p_plus = 1.0 / (1.0 + std::exp(2.0 * beta * local));
        spins[i] = rng.uniform01() < p_plus ? std::int8_t{1} : std::int8_t{-1};
    }
}

Sampleset gibbs_sample(const IsingModel& model, double beta, const SamplerConfig& config) {
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
    if (config.num_reads == 0) throw std::invalid_argument("num_reads must be >= 1");
    if (config.sweeps_per_read == 0) throw std::invalid_argument("sweeps_per_read must be >= 1");

    Rng rng(config.seed);
    std::vector<std::int8_t> spins(model.num_spins());
    for (auto& s : spins) s = static_cast<std::int8_t>(rng.spin());

    for (std::uint64_t sweep = 0; sweep < config.burn_in_sweeps; ++sweep)
        gibbs_sweep(model, beta, spins, rng);

    std::vector<SampleRow> rows;
    rows.reserve(config.num_reads);
    for (std::uint64_t read = 0; read < config.num_reads; ++read) {
        for (std::uint64_t sweep = 0; sweep < config.sweeps_per_read; ++sweep)
            gibbs_sweep(model, beta, spins, rng);
        SpinState state(spins);
        const double e = energy(model, state);
        rows.push_back({std::move(state), e, 1});
    }
    return Sampleset(std::move(rows), model.fingerprint());
}

Sampleset exact_sample(const DistributionTable& table, std::uint64_t num_reads,
                       std::uint64_t seed) {
    if (table.size() == 0) throw std::invalid_argument("cannot sample from an empty table");
    if (num_reads == 0) throw std::invalid_argument("num_reads must be >= 1");

    const auto& entries = table.entries();
    std::vector<double> cdf(entries.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        acc += entries[k].second;
        cdf[k] = acc;
    }
    cdf.back() = std::max(cdf.back(), 1.0);

    std::vector<double> energies(entries.size(), 0.0);
    if (table.log_z() && table.beta() > 0.0) {
        // P = exp(-beta E) / Z  =>  E = -(log P + log Z) / beta
        for (std::size_t k = 0; k < entries.size(); ++k)
            energies[k] = -(std::log(entries[k].second) + *table.log_z()) / table.beta();
    }

    Rng rng(seed);
    std::vector<SampleRow> rows;
    rows.reserve(num_reads);
    for (std::uint64_t read = 0; read < num_reads; ++read) {
        const double u = rng.uniform01();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t k = std::min(static_cast<std::size_t>(it - cdf.begin()),
                                       entries.size() - 1);
        rows.push_back({entries[k].first, energies[k], 1});
    }
    return Sampleset(std::move(rows), table.source_fingerprint());
}

}  // namespace qaemu
