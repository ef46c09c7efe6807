#pragma once

#include <cstdint>
#include <vector>

#include "qaemu/ising.hpp"

namespace qaemu {

struct SampleRow {
    SpinState state;
    double energy;
    std::uint64_t occurrences;

    friend bool operator==(const SampleRow&, const SampleRow&) = default;
};

// Ordered collection of reads. Samplers emit one row per read in generation
// order (occurrences = 1) so sequence diagnostics stay possible; aggregate()
// collapses identical states when only counts matter. The 10^4 cap is a
// device property enforced by the emulator, not here.
class Sampleset {
public:
    Sampleset() = default;
    Sampleset(std::vector<SampleRow> rows, std::uint64_t model_fingerprint);

    const std::vector<SampleRow>& rows() const { return rows_; }
    std::uint64_t model_fingerprint() const { return model_fingerprint_; }
    std::uint64_t total_reads() const { return total_reads_; }
    std::size_t num_spins() const;
    bool empty() const { return rows_.empty(); }

    // Unique states with summed occurrences, ordered by state. Energy of a
    // merged row is the occurrence-weighted mean of the inputs.
    Sampleset aggregate() const;

    friend bool operator==(const Sampleset&, const Sampleset&) = default;

private:
    std::vector<SampleRow> rows_;
    std::uint64_t model_fingerprint_{0};
    std::uint64_t total_reads_{0};
};

}  // namespace qaemu
