#include "qaemu/sampleset.hpp"

#include <map>
#include <stdexcept>

namespace qaemu {

Sampleset::Sampleset(std::vector<SampleRow> rows, std::uint64_t model_fingerprint)
    : rows_(std::move(rows)), model_fingerprint_(model_fingerprint) {
    if (!rows_.empty()) {
        const std::size_t n = rows_.front().state.size();
        for (const auto& row : rows_) {
            if (row.occurrences == 0)
                throw std::invalid_argument("sample row occurrences must be positive");
            if (row.state.size() != n)
                throw std::invalid_argument("dimension mismatch: inconsistent state lengths");
            total_reads_ += row.occurrences;
        }
    }
}

std::size_t Sampleset::num_spins() const {
    return rows_.empty() ? 0 : rows_.front().state.size();
}

Sampleset Sampleset::aggregate() const {
    std::map<SpinState, std::pair<double, std::uint64_t>> merged;  // state -> (sum E*occ, occ)
    for (const auto& row : rows_) {
        auto& slot = merged[row.state];
        slot.first += row.energy * static_cast<double>(row.occurrences);
        slot.second += row.occurrences;
    }
    std::vector<SampleRow> rows;
    rows.reserve(merged.size());
    for (const auto& [state, acc] : merged)
        rows.push_back({state, acc.first / static_cast<double>(acc.second), acc.second});
    return Sampleset(std::move(rows), model_fingerprint_);
}

}  // namespace qaemu
