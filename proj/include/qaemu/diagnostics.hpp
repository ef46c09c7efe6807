#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qaemu/ising.hpp"
#include "qaemu/sampleset.hpp"

namespace qaemu {

// Population estimation: P(state) = occurrences / total_reads over the
// observed states only.
DistributionTable empirical_distribution(const Sampleset& sampleset);

// Boltzmann law over the discovered states from their reported energies,
// with the partition sum restricted to those states (at most one term per
// distinct state). Duplicate states with conflicting energies collapse to
// the occurrence-weighted mean. Occurrence counts otherwise play no role.
DistributionTable energy_reconstruction(const Sampleset& sampleset, double beta);

// Largest energy spread among rows sharing a state; 0 when energies are
// consistent. Surfaced in reconstruction reports.
double energy_conflict_magnitude(const Sampleset& sampleset);

enum class DistanceMetric { TotalVariation, KlDivergence };

DistanceMetric parse_metric(const std::string& name);  // "tv" | "kl"
std::string metric_name(DistanceMetric metric);

// tv: half the L1 distance over the union of supports (absent states count
// as 0). kl: sum p log(p/q) over support(p); rejected when support(p) is
// not contained in support(q).
double distribution_distance(const DistributionTable& p, const DistributionTable& q,
                             DistanceMetric metric);

struct RetrofitResult {
    double alpha;
    double distance;
    // Every objective evaluation in order: 32-point coarse grid, then the
    // golden-section refinement, then the final point.
    std::vector<std::pair<double, double>> evaluations;
};

// Best-fit inverse-temperature multiplier: argmin over a in
// [a_lo, a_hi] of dist(empirical(sampleset), Boltzmann(model, a)), located
// by golden-section search (absolute tolerance 1e-4 on a) after a 32-point
// grid pre-scan that guards against non-unimodal objectives. Model N <= 24;
// the exact distribution is evaluated through one shared energy enumeration.
RetrofitResult retrofit_alpha(const Sampleset& sampleset, const IsingModel& model,
                              DistanceMetric metric, double a_lo, double a_hi);

struct CoverageReport {
    std::uint64_t states_discovered = 0;
    std::optional<std::uint64_t> states_total;
    std::optional<double> discovered_mass;
};

// Counts distinct discovered states; with a model (N <= 24) also reports the
// exact target mass they carry at the given beta.
CoverageReport coverage_report(const Sampleset& sampleset, const IsingModel* model,
                               double beta);

}  // namespace qaemu
