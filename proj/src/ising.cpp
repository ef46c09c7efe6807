#include "qaemu/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

namespace qaemu {

double kahan_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (const double v : values) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

SpinState::SpinState(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
    for (const std::int8_t s : spins_) {
        if (s != 1 && s != -1) throw std::invalid_argument("spin values must be +1 or -1");
    }
}

SpinState SpinState::from_string(const std::string& text) {
    std::vector<std::int8_t> spins;
    spins.reserve(text.size());
    for (const char c : text) {
        if (c == '+')
            spins.push_back(1);
        else if (c == '-')
            spins.push_back(-1);
        else
            throw std::invalid_argument("spin state string may contain only '+' and '-'");
    }
    return SpinState(std::move(spins));
}

std::string SpinState::to_string() const {
    std::string out;
    out.reserve(spins_.size());
    for (const std::int8_t s : spins_) out.push_back(s > 0 ? '+' : '-');
    return out;
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
        h ^= bytes[k];
        h *= 0x100000001b3ull;
    }
}

void hash_double(std::uint64_t& h, double v) {
    if (v == 0.0) v = 0.0;  // collapse -0.0
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    hash_bytes(h, &bits, sizeof(bits));
}

std::uint64_t model_fingerprint(std::size_t n, const std::vector<double>& h,
                                const std::vector<CouplingEntry>& couplings, double offset) {
    std::uint64_t fp = 0xcbf29ce484222325ull;
    const auto n64 = static_cast<std::uint64_t>(n);
    hash_bytes(fp, &n64, sizeof(n64));
    for (const double v : h) hash_double(fp, v);
    for (const auto& c : couplings) {
        hash_bytes(fp, &c.i, sizeof(c.i));
        hash_bytes(fp, &c.j, sizeof(c.j));
        hash_double(fp, c.value);
    }
    hash_double(fp, offset);
    return fp;
}

}  // namespace

IsingModel::IsingModel(std::size_t num_spins, std::vector<double> h,
                       const std::vector<CouplingEntry>& couplings, double offset)
    : num_spins_(num_spins), h_(std::move(h)), offset_(offset) {
    if (num_spins_ == 0) throw std::invalid_argument("model must have at least one spin");
    if (h_.size() != num_spins_)
        throw std::invalid_argument("h must have exactly num_spins entries");
    for (const double v : h_) {
        if (!std::isfinite(v)) throw std::invalid_argument("h weights must be finite");
    }
    if (!std::isfinite(offset_)) throw std::invalid_argument("offset must be finite");

    // Normalize to strict upper-triangular storage; duplicate keys accumulate.
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> folded;
    for (const auto& c : couplings) {
        if (!std::isfinite(c.value)) throw std::invalid_argument("J weights must be finite");
        std::uint32_t i = c.i, j = c.j;
        if (i == j) throw std::invalid_argument("coupling indices must differ (no self-loops)");
        if (i > j) std::swap(i, j);
        if (j >= num_spins_) throw std::invalid_argument("coupling index out of range");
        folded[{i, j}] += c.value;
    }
    couplings_.reserve(folded.size());
    for (const auto& [key, value] : folded) couplings_.push_back({key.first, key.second, value});

    adjacency_.resize(num_spins_);
    for (const auto& c : couplings_) {
        adjacency_[c.i].emplace_back(c.j, c.value);
        adjacency_[c.j].emplace_back(c.i, c.value);
    }
    fingerprint_ = model_fingerprint(num_spins_, h_, couplings_, offset_);
}

double IsingModel::max_abs_h() const {
    double m = 0.0;
    for (const double v : h_) m = std::max(m, std::abs(v));
    return m;
}

double IsingModel::max_abs_coupling() const {
    double m = 0.0;
    for (const auto& c : couplings_) m = std::max(m, std::abs(c.value));
    return m;
}

DistributionTable::DistributionTable(std::size_t num_spins,
                                     std::vector<std::pair<SpinState, double>> entries,
                                     double beta, std::optional<double> log_z,
                                     std::uint64_t source_fingerprint)
    : num_spins_(num_spins),
      entries_(std::move(entries)),
      beta_(beta),
      log_z_(log_z),
      source_fingerprint_(source_fingerprint) {
    if (beta_ < 0.0 || !std::isfinite(beta_))
        throw std::invalid_argument("beta must be finite and >= 0");
    if (entries_.empty()) throw std::invalid_argument("distribution table must not be empty");
    for (const auto& [state, p] : entries_) {
        if (state.size() != num_spins_)
            throw std::invalid_argument("dimension mismatch: state length != num_spins");
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("probabilities must be finite and >= 0");
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < entries_.size(); ++k) {
        if (entries_[k].first == entries_[k - 1].first)
            throw std::invalid_argument("duplicate state in distribution table");
    }

    std::vector<double> probs;
    probs.reserve(entries_.size());
    for (const auto& e : entries_) probs.push_back(e.second);
    const double mass = kahan_sum(probs);
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("distribution table mass deviates from 1 by more than 1e-6");
    for (auto& e : entries_) e.second /= mass;
}

double DistributionTable::prob_of(const SpinState& state) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), state,
        [](const auto& entry, const SpinState& s) { return entry.first < s; });
    if (it != entries_.end() && it->first == state) return it->second;
    return 0.0;
}

double DistributionTable::total_mass() const {
    std::vector<double> probs;
    probs.reserve(entries_.size());
    for (const auto& e : entries_) probs.push_back(e.second);
    return kahan_sum(probs);
}

double energy(const IsingModel& model, const SpinState& state) {
    if (state.size() != model.num_spins())
        throw std::invalid_argument("dimension mismatch: state length != model num_spins");
    double e = model.offset();
    const auto& h = model.h();
    for (std::size_t i = 0; i < h.size(); ++i) e += h[i] * state.spin(i);
    for (const auto& c : model.couplings()) e += c.value * state.spin(c.i) * state.spin(c.j);
    return e;
}

SpinState basis_state(std::size_t num_spins, std::uint64_t x) {
    std::vector<std::int8_t> spins(num_spins);
    for (std::size_t i = 0; i < num_spins; ++i) {
        const std::uint64_t bit = (x >> (num_spins - 1 - i)) & 1u;
        spins[i] = bit ? std::int8_t{1} : std::int8_t{-1};
    }
    return SpinState(std::move(spins));
}

std::vector<double> enumerate_energies(const IsingModel& model, std::size_t max_spins) {
    const std::size_t n = model.num_spins();
    if (n > max_spins) throw std::invalid_argument("enumeration limit exceeded");

    const std::size_t count = std::size_t{1} << n;
    std::vector<double> energies(count);
    std::vector<std::int8_t> spins(n, -1);  // x = 0

    double e = model.offset();
    for (std::size_t i = 0; i < n; ++i) e -= model.h()[i];
    for (const auto& c : model.couplings()) e += c.value;  // (-1)(-1) = +1
    energies[0] = e;

    // Walk states in Gray-code order; index of the visited state is k^(k>>1).
    const auto& adj = model.adjacency();
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < count; ++k) {
        const unsigned bit = std::countr_zero(k);     // counter bit that flips
        const std::size_t site = n - 1 - bit;         // spin 0 is the MSB
        double local = model.h()[site];
        for (const auto& [nbr, j] : adj[site]) local += j * spins[nbr];
        e -= 2.0 * spins[site] * local;
        spins[site] = static_cast<std::int8_t>(-spins[site]);
        gray ^= (std::uint64_t{1} << bit);
        energies[gray] = e;
    }
    return energies;
}

namespace {

// Shift by the minimum energy so exp never overflows; returns log Z.
double log_partition_from_energies(const std::vector<double>& energies, double beta,
                                   std::vector<double>* weights_out = nullptr) {
    const double e_min = *std::min_element(energies.begin(), energies.end());
    std::vector<double> weights;
    weights.reserve(energies.size());
    for (const double e : energies) weights.push_back(std::exp(-beta * (e - e_min)));
    const double z_shifted = kahan_sum(weights);
    if (weights_out) *weights_out = std::move(weights);
    return std::log(z_shifted) - beta * e_min;
}

}  // namespace

double log_partition(const IsingModel& model, double beta) {
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
    const auto energies = enumerate_energies(model);
    return log_partition_from_energies(energies, beta);
}

DistributionTable exact_distribution(const IsingModel& model, double beta) {
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
    const auto energies = enumerate_energies(model);

    std::vector<double> weights;
    const double log_z = log_partition_from_energies(energies, beta, &weights);
    const double z_shifted = kahan_sum(weights);

    const std::size_t n = model.num_spins();
    std::vector<std::pair<SpinState, double>> entries;
    entries.reserve(weights.size());
    for (std::uint64_t x = 0; x < weights.size(); ++x)
        entries.emplace_back(basis_state(n, x), weights[x] / z_shifted);
    return DistributionTable(n, std::move(entries), beta, log_z, model.fingerprint());
}

std::vector<double> diagonal_energies(const IsingModel& model) {
    return enumerate_energies(model, 12);
}

IsingModel qubo_to_ising(const IsingModel& qubo) {
    const std::size_t n = qubo.num_spins();
    std::vector<double> h(n, 0.0);
    std::vector<CouplingEntry> couplings;
    double offset = qubo.offset();

    for (std::size_t i = 0; i < n; ++i) {
        h[i] += 0.5 * qubo.h()[i];
        offset += 0.5 * qubo.h()[i];
    }
    for (const auto& c : qubo.couplings()) {
        couplings.push_back({c.i, c.j, 0.25 * c.value});
        h[c.i] += 0.25 * c.value;
        h[c.j] += 0.25 * c.value;
        offset += 0.25 * c.value;
    }
    return IsingModel(n, std::move(h), couplings, offset);
}

IsingModel ising_to_qubo(const IsingModel& ising) {
    const std::size_t n = ising.num_spins();
    std::vector<double> linear(n, 0.0);
    std::vector<CouplingEntry> quadratic;
    double constant = ising.offset();

    for (std::size_t i = 0; i < n; ++i) {
        linear[i] += 2.0 * ising.h()[i];
        constant -= ising.h()[i];
    }
    for (const auto& c : ising.couplings()) {
        quadratic.push_back({c.i, c.j, 4.0 * c.value});
        linear[c.i] -= 2.0 * c.value;
        linear[c.j] -= 2.0 * c.value;
        constant += c.value;
    }
    return IsingModel(n, std::move(linear), quadratic, constant);
}

IsingModel qubo_ising_convert(ConvertDirection direction, const IsingModel& model) {
    return direction == ConvertDirection::QuboToIsing ? qubo_to_ising(model)
                                                      : ising_to_qubo(model);
}

}  // namespace qaemu
