#include "qaemu/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace qaemu {

DistributionTable empirical_distribution(const Sampleset& sampleset) {
    if (sampleset.empty()) throw std::invalid_argument("sampleset is empty");
    const Sampleset agg = sampleset.aggregate();
    const double total = static_cast<double>(agg.total_reads());
    std::vector<std::pair<SpinState, double>> entries;
    entries.reserve(agg.rows().size());
    for (const auto& row : agg.rows())
        entries.emplace_back(row.state, static_cast<double>(row.occurrences) / total);
    return DistributionTable(agg.num_spins(), std::move(entries), 0.0, std::nullopt,
                             sampleset.model_fingerprint());
}

DistributionTable energy_reconstruction(const Sampleset& sampleset, double beta) {
    if (sampleset.empty()) throw std::invalid_argument("sampleset is empty");
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");

    const Sampleset agg = sampleset.aggregate();  // occurrence-weighted mean energies
    std::vector<double> energies;
    energies.reserve(agg.rows().size());
    for (const auto& row : agg.rows()) energies.push_back(row.energy);
    const double e_min = *std::min_element(energies.begin(), energies.end());

    std::vector<double> weights;
    weights.reserve(energies.size());
    for (const double e : energies) weights.push_back(std::exp(-beta * (e - e_min)));
    const double z_shifted = kahan_sum(weights);
    const double log_z = std::log(z_shifted) - beta * e_min;

    std::vector<std::pair<SpinState, double>> entries;
    entries.reserve(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k)
        entries.emplace_back(agg.rows()[k].state, weights[k] / z_shifted);
    return DistributionTable(agg.num_spins(), std::move(entries), beta, log_z,
                             sampleset.model_fingerprint());
}

double energy_conflict_magnitude(const Sampleset& sampleset) {
    std::map<SpinState, std::pair<double, double>> extents;  // state -> (min E, max E)
    for (const auto& row : sampleset.rows()) {
        const auto it = extents.find(row.state);
        if (it == extents.end()) {
            extents.emplace(row.state, std::make_pair(row.energy, row.energy));
        } else {
            it->second.first = std::min(it->second.first, row.energy);
            it->second.second = std::max(it->second.second, row.energy);
        }
    }
    double spread = 0.0;
    for (const auto& [state, extent] : extents)
        spread = std::max(spread, extent.second - extent.first);
    return spread;
}

DistanceMetric parse_metric(const std::string& name) {
    if (name == "tv") return DistanceMetric::TotalVariation;
    if (name == "kl") return DistanceMetric::KlDivergence;
    throw std::invalid_argument("unknown distance metric: " + name);
}

std::string metric_name(DistanceMetric metric) {
    return metric == DistanceMetric::TotalVariation ? "tv" : "kl";
}

double distribution_distance(const DistributionTable& p, const DistributionTable& q,
                             DistanceMetric metric) {
    if (p.num_spins() != q.num_spins())
        throw std::invalid_argument("dimension mismatch: tables span different spin counts");

    const auto& pe = p.entries();
    const auto& qe = q.entries();
    if (metric == DistanceMetric::TotalVariation) {
        std::vector<double> diffs;
        diffs.reserve(pe.size() + qe.size());
        std::size_t a = 0, b = 0;
        while (a < pe.size() || b < qe.size()) {
            if (b == qe.size() || (a < pe.size() && pe[a].first < qe[b].first)) {
                diffs.push_back(std::abs(pe[a].second));
                ++a;
            } else if (a == pe.size() || qe[b].first < pe[a].first) {
                diffs.push_back(std::abs(qe[b].second));
                ++b;
            } else {
                diffs.push_back(std::abs(pe[a].second - qe[b].second));
                ++a;
                ++b;
            }
        }
        return 0.5 * kahan_sum(diffs);
    }

    std::vector<double> terms;
    terms.reserve(pe.size());
    for (const auto& [state, prob] : pe) {
        if (prob == 0.0) continue;
        const double qprob = q.prob_of(state);
        if (qprob == 0.0)
            throw std::invalid_argument(
                "kl support violation: support(p) not contained in support(q)");
        terms.push_back(prob * std::log(prob / qprob));
    }
    return kahan_sum(terms);
}

namespace {

// Objective dist(empirical, P_a) evaluated without materializing the full
// 2^N table: P_a needs only log Z(a) plus the energies of observed states.
class RetrofitObjective {
public:
    RetrofitObjective(const Sampleset& sampleset, const IsingModel& model,
                      DistanceMetric metric)
        : metric_(metric), all_energies_(enumerate_energies(model)) {
        e_min_ = *std::min_element(all_energies_.begin(), all_energies_.end());
        const DistributionTable empirical = empirical_distribution(sampleset);
        observed_probs_.reserve(empirical.size());
        observed_energies_.reserve(empirical.size());
        for (const auto& [state, prob] : empirical.entries()) {
            observed_probs_.push_back(prob);
            observed_energies_.push_back(energy(model, state));
        }
    }

    double operator()(double a) const {
        std::vector<double> weights;
        weights.reserve(all_energies_.size());
        for (const double e : all_energies_) weights.push_back(std::exp(-a * (e - e_min_)));
        const double log_z = std::log(kahan_sum(weights)) - a * e_min_;

        std::vector<double> terms;
        terms.reserve(observed_probs_.size());
        if (metric_ == DistanceMetric::TotalVariation) {
            std::vector<double> masses;
            masses.reserve(observed_probs_.size());
            for (std::size_t k = 0; k < observed_probs_.size(); ++k) {
                const double q = std::exp(-a * observed_energies_[k] - log_z);
                masses.push_back(q);
                terms.push_back(std::abs(observed_probs_[k] - q));
            }
            const double unobserved = std::max(0.0, 1.0 - kahan_sum(masses));
            return 0.5 * (kahan_sum(terms) + unobserved);
        }
        for (std::size_t k = 0; k < observed_probs_.size(); ++k) {
            const double p = observed_probs_[k];
            terms.push_back(p * (std::log(p) + a * observed_energies_[k] + log_z));
        }
        return kahan_sum(terms);
    }

private:
    DistanceMetric metric_;
    std::vector<double> all_energies_;
    double e_min_;
    std::vector<double> observed_probs_;
    std::vector<double> observed_energies_;
};

}  // namespace

RetrofitResult retrofit_alpha(const Sampleset& sampleset, const IsingModel& model,
                              DistanceMetric metric, double a_lo, double a_hi) {
    if (sampleset.empty()) throw std::invalid_argument("sampleset is empty");
    if (!(a_lo >= 0.0) || !(a_hi > a_lo))
        throw std::invalid_argument("degenerate search interval: need 0 <= a_lo < a_hi");
    if (sampleset.num_spins() != model.num_spins())
        throw std::invalid_argument("dimension mismatch: sampleset states vs model spins");

    const RetrofitObjective objective(sampleset, model, metric);
    RetrofitResult result{};
    const auto evaluate = [&](double a) {
        const double d = objective(a);
        result.evaluations.emplace_back(a, d);
        return d;
    };

    constexpr int kGridPoints = 32;
    double best_a = a_lo;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGridPoints; ++k) {
        const double a = a_lo + (a_hi - a_lo) * static_cast<double>(k) / (kGridPoints - 1);
        const double d = evaluate(a);
        if (d < best_d) {
            best_d = d;
            best_a = a;
        }
    }

    const double step = (a_hi - a_lo) / (kGridPoints - 1);
    double lo = std::max(a_lo, best_a - step);
    double hi = std::min(a_hi, best_a + step);

    constexpr double kInvPhi = 0.6180339887498949;
    constexpr double kTolerance = 1e-4;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = evaluate(x1);
    double f2 = evaluate(x2);
    while (hi - lo > kTolerance) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = evaluate(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = evaluate(x2);
        }
    }

    result.alpha = 0.5 * (lo + hi);
    result.distance = evaluate(result.alpha);
    return result;
}

CoverageReport coverage_report(const Sampleset& sampleset, const IsingModel* model,
                               double beta) {
    CoverageReport report;
    if (sampleset.empty()) return report;

    const Sampleset agg = sampleset.aggregate();
    report.states_discovered = agg.rows().size();

    const std::size_t n = sampleset.num_spins();
    if (n <= 62) report.states_total = std::uint64_t{1} << n;

    if (model) {
        if (model->num_spins() != n)
            throw std::invalid_argument("dimension mismatch: sampleset states vs model spins");
        const double log_z = log_partition(*model, beta);  // enforces N <= 24
        std::vector<double> masses;
        masses.reserve(agg.rows().size());
        for (const auto& row : agg.rows())
            masses.push_back(std::exp(-beta * energy(*model, row.state) - log_z));
        report.discovered_mass = std::min(1.0, kahan_sum(masses));
    }
    return report;
}

}  // namespace qaemu
