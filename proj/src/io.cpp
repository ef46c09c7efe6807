#include "qaemu/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qaemu::io {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path.string() + ": cannot open for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

json parse_json(const std::string& text, const std::string& context) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) throw std::runtime_error(context + ": invalid JSON");
    return parsed;
}

double parse_double(const std::string& text, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw std::runtime_error(context + ": malformed number '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (const char c : line) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    return parts;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

IsingModel problem_from_json_text(const std::string& text, const std::string& context) {
    const json j = parse_json(text, context);
    if (!j.is_object() || !j.contains("num_spins") || !j.contains("h") || !j.contains("J"))
        throw std::runtime_error(context + ": expected fields num_spins, h, J");

    const auto num_spins = j.at("num_spins").get<std::uint64_t>();
    std::vector<double> h = j.at("h").get<std::vector<double>>();
    const double offset = j.value("offset", 0.0);

    std::vector<CouplingEntry> couplings;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& triple : j.at("J")) {
        if (!triple.is_array() || triple.size() != 3)
            throw std::runtime_error(context + ": J entries must be [i, j, value] triples");
        const auto i = triple[0].get<std::uint64_t>();
        const auto jj = triple[1].get<std::uint64_t>();
        const double value = triple[2].get<double>();
        if (i >= num_spins || jj >= num_spins)
            throw std::runtime_error(context + ": coupling index out of range");
        if (i == jj) throw std::runtime_error(context + ": coupling (i, i) is a self-loop");
        const auto lo = static_cast<std::uint32_t>(std::min(i, jj));
        const auto hi = static_cast<std::uint32_t>(std::max(i, jj));
        if (!seen.insert({lo, hi}).second)
            throw std::runtime_error(context + ": duplicate coupling (" + std::to_string(lo) +
                                     ", " + std::to_string(hi) + ")");
        couplings.push_back(
            {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(jj), value});
    }
    try {
        return IsingModel(num_spins, std::move(h), couplings, offset);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

std::string problem_to_json_text(const IsingModel& model) {
    json j;
    j["num_spins"] = model.num_spins();
    j["h"] = model.h();
    json couplings = json::array();
    for (const auto& c : model.couplings()) couplings.push_back({c.i, c.j, c.value});
    j["J"] = couplings;
    j["offset"] = model.offset();
    return j.dump(2) + "\n";
}

IsingModel load_problem(const std::filesystem::path& path) {
    return problem_from_json_text(read_file(path), path.string());
}

void save_problem(const IsingModel& model, const std::filesystem::path& path) {
    write_file(path, problem_to_json_text(model));
}

void save_sampleset(const Sampleset& sampleset, const std::filesystem::path& path) {
    std::string out = "qaemu-sampleset v1 total_reads=" + std::to_string(sampleset.total_reads());
    char fp[32];
    std::snprintf(fp, sizeof(fp), "%016" PRIx64, sampleset.model_fingerprint());
    out += " fingerprint=";
    out += fp;
    out += "\n";
    for (const auto& row : sampleset.rows()) {
        out += row.state.to_string();
        out += ',';
        out += format_double(row.energy);
        out += ',';
        out += std::to_string(row.occurrences);
        out += '\n';
    }
    write_file(path, out);
}

Sampleset load_sampleset(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header) || header.rfind("qaemu-sampleset v1 ", 0) != 0)
        throw std::runtime_error(path.string() + ": missing sampleset header");

    std::uint64_t total_reads = 0;
    std::uint64_t fingerprint = 0;
    if (std::sscanf(header.c_str(), "qaemu-sampleset v1 total_reads=%" SCNu64
                    " fingerprint=%" SCNx64,
                    &total_reads, &fingerprint) != 2)
        throw std::runtime_error(path.string() + ": malformed sampleset header");

    std::vector<SampleRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto parts = split(line, ',');
        if (parts.size() != 3)
            throw std::runtime_error(path.string() + ": expected state,energy,occurrences");
        SpinState state = SpinState::from_string(parts[0]);
        const double e = parse_double(parts[1], path.string());
        const auto occ = static_cast<std::uint64_t>(
            std::strtoull(parts[2].c_str(), nullptr, 10));
        if (occ == 0) throw std::runtime_error(path.string() + ": occurrences must be positive");
        rows.push_back({std::move(state), e, occ});
    }
    Sampleset result(std::move(rows), fingerprint);
    if (result.total_reads() != total_reads)
        throw std::runtime_error(path.string() + ": header total_reads does not match rows");
    return result;
}

void save_table(const DistributionTable& table, const std::filesystem::path& path) {
    std::string out = "qaemu-distribution v1 num_spins=" + std::to_string(table.num_spins());
    out += " beta=" + format_double(table.beta());
    out += " log_z=" + (table.log_z() ? format_double(*table.log_z()) : std::string("none"));
    char fp[32];
    std::snprintf(fp, sizeof(fp), "%016" PRIx64, table.source_fingerprint());
    out += " fingerprint=";
    out += fp;
    out += "\n";
    for (const auto& [state, prob] : table.entries()) {
        out += state.to_string();
        out += ',';
        out += format_double(prob);
        out += '\n';
    }
    write_file(path, out);
}

DistributionTable load_table(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header) || header.rfind("qaemu-distribution v1 ", 0) != 0)
        throw std::runtime_error(path.string() + ": missing distribution header");

    const auto fields = split(header, ' ');
    std::uint64_t num_spins = 0;
    double beta = 0.0;
    std::optional<double> log_z;
    std::uint64_t fingerprint = 0;
    for (const auto& field : fields) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "num_spins")
            num_spins = std::strtoull(value.c_str(), nullptr, 10);
        else if (key == "beta")
            beta = parse_double(value, path.string());
        else if (key == "log_z")
            log_z = value == "none" ? std::optional<double>{}
                                    : std::optional<double>{parse_double(value, path.string())};
        else if (key == "fingerprint")
            fingerprint = std::strtoull(value.c_str(), nullptr, 16);
    }

    std::vector<std::pair<SpinState, double>> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto parts = split(line, ',');
        if (parts.size() != 2)
            throw std::runtime_error(path.string() + ": expected state,probability rows");
        entries.emplace_back(SpinState::from_string(parts[0]),
                             parse_double(parts[1], path.string()));
    }
    try {
        return DistributionTable(num_spins, std::move(entries), beta, log_z, fingerprint);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void save_profile(const DeviceProfile& profile, const std::filesystem::path& path) {
    json j;
    j["h_range"] = {profile.h_range.min, profile.h_range.max};
    j["j_range"] = {profile.j_range.min, profile.j_range.max};
    j["ice_sigma_h"] = profile.ice_sigma_h;
    j["ice_sigma_j"] = profile.ice_sigma_j;
    j["background_chi"] = profile.background_chi;
    j["dac_step"] = profile.dac_step;
    j["h_scale_spread"] = profile.h_scale_spread;
    j["readout_fidelity"] = profile.readout_fidelity;
    j["photon_tau"] = profile.photon_tau;
    j["spinbath_rho"] = profile.spinbath_rho;
    j["depolarize_wait"] = profile.depolarize_wait;
    j["alpha_base"] = profile.alpha_base;
    j["alpha_eq"] = profile.alpha_eq;
    j["tau_relax"] = profile.tau_relax;
    j["max_reads"] = profile.max_reads;
    write_file(path, j.dump(2) + "\n");
}

DeviceProfile load_profile(const std::filesystem::path& path) {
    const json j = parse_json(read_file(path), path.string());
    DeviceProfile profile;
    const auto range = [&j, &path](const char* key, Range fallback) {
        if (!j.contains(key)) return fallback;
        const auto& arr = j.at(key);
        if (!arr.is_array() || arr.size() != 2)
            throw std::runtime_error(path.string() + ": " + key + " must be [min, max]");
        return Range{arr[0].get<double>(), arr[1].get<double>()};
    };
    profile.h_range = range("h_range", profile.h_range);
    profile.j_range = range("j_range", profile.j_range);
    profile.ice_sigma_h = j.value("ice_sigma_h", profile.ice_sigma_h);
    profile.ice_sigma_j = j.value("ice_sigma_j", profile.ice_sigma_j);
    profile.background_chi = j.value("background_chi", profile.background_chi);
    profile.dac_step = j.value("dac_step", profile.dac_step);
    profile.h_scale_spread = j.value("h_scale_spread", profile.h_scale_spread);
    profile.readout_fidelity = j.value("readout_fidelity", profile.readout_fidelity);
    profile.photon_tau = j.value("photon_tau", profile.photon_tau);
    profile.spinbath_rho = j.value("spinbath_rho", profile.spinbath_rho);
    profile.depolarize_wait = j.value("depolarize_wait", profile.depolarize_wait);
    profile.alpha_base = j.value("alpha_base", profile.alpha_base);
    profile.alpha_eq = j.value("alpha_eq", profile.alpha_eq);
    profile.tau_relax = j.value("tau_relax", profile.tau_relax);
    profile.max_reads = j.value("max_reads", profile.max_reads);
    try {
        profile.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    return profile;
}

void save_schedule(const AnnealSchedule& schedule, const std::filesystem::path& path) {
    json j;
    j["t_f"] = schedule.t_f();
    json points = json::array();
    for (const auto& p : schedule.points()) points.push_back({p.s, p.a, p.b});
    j["points"] = points;
    if (schedule.pause_s())
        j["pause_s"] = *schedule.pause_s();
    else
        j["pause_s"] = nullptr;
    j["pause_duration"] = schedule.pause_duration();
    write_file(path, j.dump(2) + "\n");
}

AnnealSchedule load_schedule(const std::filesystem::path& path) {
    const json j = parse_json(read_file(path), path.string());
    if (!j.contains("t_f") || !j.contains("points"))
        throw std::runtime_error(path.string() + ": expected fields t_f and points");
    std::vector<SchedulePoint> points;
    for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 3)
            throw std::runtime_error(path.string() + ": points must be [s, A, B] triples");
        points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
    std::optional<double> pause_s;
    if (j.contains("pause_s") && !j.at("pause_s").is_null())
        pause_s = j.at("pause_s").get<double>();
    const double pause_duration = j.value("pause_duration", 0.0);
    try {
        return AnnealSchedule(j.at("t_f").get<double>(), std::move(points), pause_s,
                              pause_duration);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void save_embedding(const Embedding& emb, const std::filesystem::path& path) {
    std::string out;
    for (const auto& [var, chain] : emb.chains) {
        out += std::to_string(var);
        out += ':';
        for (const std::uint32_t q : chain) {
            out += ' ';
            out += std::to_string(q);
        }
        out += '\n';
    }
    write_file(path, out);
}

Embedding load_embedding(const std::filesystem::path& path, double chain_strength) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    Embedding emb;
    emb.chain_strength = chain_strength;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error(path.string() + ": expected 'index: qubit qubit ...'");
        const auto var = static_cast<std::uint32_t>(
            std::strtoul(line.substr(0, colon).c_str(), nullptr, 10));
        std::istringstream rest(line.substr(colon + 1));
        std::vector<std::uint32_t> chain;
        std::uint64_t q = 0;
        while (rest >> q) chain.push_back(static_cast<std::uint32_t>(q));
        if (chain.empty())
            throw std::runtime_error(path.string() + ": chain of variable " +
                                     std::to_string(var) + " is empty");
        std::sort(chain.begin(), chain.end());
        if (!emb.chains.emplace(var, std::move(chain)).second)
            throw std::runtime_error(path.string() + ": duplicate chain for variable " +
                                     std::to_string(var));
    }
    if (emb.chains.empty()) throw std::runtime_error(path.string() + ": no chains found");
    return emb;
}

void save_graph(const HardwareGraph& graph, const std::filesystem::path& path) {
    std::string out;
    for (const auto& [a, b] : graph.edges()) {
        out += std::to_string(a);
        out += ' ';
        out += std::to_string(b);
        out += '\n';
    }
    write_file(path, out);
}

HardwareGraph load_graph(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::uint32_t> nodes;
    std::uint64_t a = 0, b = 0;
    while (in >> a >> b) {
        edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
        nodes.push_back(static_cast<std::uint32_t>(a));
        nodes.push_back(static_cast<std::uint32_t>(b));
    }
    if (edges.empty()) throw std::runtime_error(path.string() + ": no edges found");
    return HardwareGraph(std::move(nodes), std::move(edges));
}

}  // namespace qaemu::io
