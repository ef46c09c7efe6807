#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qaemu {

// Kahan-compensated sum. Partition sums run over up to 2^24 terms, where
// naive accumulation error exceeds the 1e-12 normalization contract.
double kahan_sum(std::span<const double> values);

// State vector over {-1,+1}^N. Immutable after construction.
class SpinState {
public:
    SpinState() = default;
    explicit SpinState(std::vector<std::int8_t> spins);

    // Parses e.g. "+-+" (character at position i is spin i).
    static SpinState from_string(const std::string& text);
    std::string to_string() const;

    std::size_t size() const { return spins_.size(); }
    int spin(std::size_t i) const { return spins_[i]; }
    const std::vector<std::int8_t>& spins() const { return spins_; }

    friend bool operator==(const SpinState&, const SpinState&) = default;
    friend auto operator<=>(const SpinState&, const SpinState&) = default;

private:
    std::vector<std::int8_t> spins_;
};

struct CouplingEntry {
    std::uint32_t i;
    std::uint32_t j;
    double value;
};

// Weights (h, J, offset) of an Ising energy over N spins:
//   E(S) = sum_i h_i S_i + sum_{i<j} J_ij S_i S_j + offset.
// J is stored sparse upper-triangular; (j,i) input keys are folded into
// (i,j), duplicates accumulate. Immutable after construction; adjacency and
// fingerprint are precomputed so instances are safe to share across threads.
//
// The same container holds QUBO coefficients (linear/quadratic/constant over
// x in {0,1}^N) when produced by ising_to_qubo; the convention is the
// caller's to track.
class IsingModel {
public:
    IsingModel(std::size_t num_spins, std::vector<double> h,
               const std::vector<CouplingEntry>& couplings, double offset = 0.0);

    std::size_t num_spins() const { return num_spins_; }
    const std::vector<double>& h() const { return h_; }
    // Sorted by (i, j), strictly upper-triangular.
    const std::vector<CouplingEntry>& couplings() const { return couplings_; }
    double offset() const { return offset_; }

    // adjacency()[i] lists (neighbor, J_value) pairs for every nonzero
    // coupling incident to spin i.
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adjacency() const {
        return adjacency_;
    }

    double max_abs_h() const;
    double max_abs_coupling() const;

    // FNV-1a over a canonical serialization of (N, h, J, offset).
    std::uint64_t fingerprint() const { return fingerprint_; }

private:
    std::size_t num_spins_;
    std::vector<double> h_;
    std::vector<CouplingEntry> couplings_;
    double offset_;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency_;
    std::uint64_t fingerprint_;
};

// Explicit probability mass over a set of discovered states, kept sorted by
// state and normalized (entries divided by their compensated sum; the raw
// sum must already be within 1e-6 of 1). beta records the inverse-temperature
// multiplier the table was built with; log_z is present when the table came
// from a Boltzmann construction and holds the log partition sum.
class DistributionTable {
public:
    DistributionTable(std::size_t num_spins,
                      std::vector<std::pair<SpinState, double>> entries, double beta,
                      std::optional<double> log_z = std::nullopt,
                      std::uint64_t source_fingerprint = 0);

    std::size_t num_spins() const { return num_spins_; }
    const std::vector<std::pair<SpinState, double>>& entries() const { return entries_; }
    double beta() const { return beta_; }
    std::optional<double> log_z() const { return log_z_; }
    std::uint64_t source_fingerprint() const { return source_fingerprint_; }

    std::size_t size() const { return entries_.size(); }
    // 0 for states not in the table.
    double prob_of(const SpinState& state) const;
    // Compensated sum of all entries; equals 1 to within 1e-12.
    double total_mass() const;

private:
    std::size_t num_spins_;
    std::vector<std::pair<SpinState, double>> entries_;
    double beta_;
    std::optional<double> log_z_;
    std::uint64_t source_fingerprint_;
};

// E(S) for the model's convention. Throws on dimension mismatch.
double energy(const IsingModel& model, const SpinState& state);

// Energies of all 2^N basis states in computational-basis order: x runs as
// an N-bit binary counter with spin 0 as the most significant bit, and
// S = 2x - 1. Gray-code incremental evaluation, O(2^N * avg degree).
std::vector<double> enumerate_energies(const IsingModel& model, std::size_t max_spins = 24);

// Basis state (as +-1 spins) for counter value x under the MSB convention.
SpinState basis_state(std::size_t num_spins, std::uint64_t x);

// log sum_S exp(-beta * E(S)) over all 2^N states, computed with a max
// shift so large offsets cannot overflow. N <= 24.
double log_partition(const IsingModel& model, double beta);

// Boltzmann distribution P(S) = exp(-beta E(S)) / Z by full enumeration.
// N <= 24 ("enumeration limit exceeded" otherwise), beta >= 0. The offset
// cancels in P; Z picks up the factor exp(-beta * offset).
DistributionTable exact_distribution(const IsingModel& model, double beta);

// Diagonal of the Ising Hamiltonian in computational-basis order, i.e.
// energy(model, 2x-1) for x = 0 .. 2^N-1. N <= 12.
std::vector<double> diagonal_energies(const IsingModel& model);

enum class ConvertDirection { QuboToIsing, IsingToQubo };

// Change of convention under x = (S+1)/2. Energies agree state-by-state;
// the offset absorbs the constants.
IsingModel qubo_to_ising(const IsingModel& qubo);
IsingModel ising_to_qubo(const IsingModel& ising);
IsingModel qubo_ising_convert(ConvertDirection direction, const IsingModel& model);

}  // namespace qaemu
