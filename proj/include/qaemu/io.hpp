#pragma once

#include <filesystem>
#include <string>

#include "qaemu/device.hpp"
#include "qaemu/embedding.hpp"
#include "qaemu/graph.hpp"
#include "qaemu/ising.hpp"
#include "qaemu/sampleset.hpp"

namespace qaemu::io {

// Doubles are written with enough digits to round-trip bit-exactly.
std::string format_double(double v);

// Problem files: JSON with fields num_spins, h, J ([i, j, value] triples)
// and offset. The parser rejects duplicate or transposed-duplicate (i, j)
// pairs and out-of-range indices.
IsingModel load_problem(const std::filesystem::path& path);
void save_problem(const IsingModel& model, const std::filesystem::path& path);
IsingModel problem_from_json_text(const std::string& text, const std::string& context);
std::string problem_to_json_text(const IsingModel& model);

// Sampleset files: a header line carrying total_reads and the model
// fingerprint, then one row per entry as `state,energy,occurrences` with
// states spelled like "+-+". Round-trips bit-exactly.
Sampleset load_sampleset(const std::filesystem::path& path);
void save_sampleset(const Sampleset& sampleset, const std::filesystem::path& path);

// Distribution tables: header with num_spins, beta, log_z and fingerprint,
// then `state,probability` rows. Round-trips bit-exactly.
DistributionTable load_table(const std::filesystem::path& path);
void save_table(const DistributionTable& table, const std::filesystem::path& path);

// Device profile / anneal schedule: flat JSON, one key per knob.
DeviceProfile load_profile(const std::filesystem::path& path);
void save_profile(const DeviceProfile& profile, const std::filesystem::path& path);
AnnealSchedule load_schedule(const std::filesystem::path& path);
void save_schedule(const AnnealSchedule& schedule, const std::filesystem::path& path);

// Embedding files: one line per chain, `logical_index: qubit qubit ...`.
// Chain strength is not part of the format and is supplied by the caller.
Embedding load_embedding(const std::filesystem::path& path, double chain_strength = 1.0);
void save_embedding(const Embedding& emb, const std::filesystem::path& path);

// Hardware graphs as plain edge lists, one `a b` pair per line.
HardwareGraph load_graph(const std::filesystem::path& path);
void save_graph(const HardwareGraph& graph, const std::filesystem::path& path);

}  // namespace qaemu::io
