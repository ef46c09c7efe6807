// Command-line front end: reproducible experiment runs over the sampler,
// embedding and diagnostics modules. Every run is a pure function of its
// input files, flags and --seed; repeated invocations write identical bytes.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qaemu/device.hpp"
#include "qaemu/diagnostics.hpp"
#include "qaemu/embedding.hpp"
#include "qaemu/graph.hpp"
#include "qaemu/io.hpp"
#include "qaemu/ising.hpp"
#include "qaemu/rng.hpp"
#include "qaemu/samplers.hpp"

namespace fs = std::filesystem;
using namespace qaemu;

namespace {

constexpr const char* kProfileEnvVar = "QAEMU_PROFILE";

std::string fmt(double v) { return io::format_double(v); }

void write_text(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << content;
}

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

struct CommonOutput {
    std::string out_dir;
    fs::path dir() const { return fs::path(out_dir); }
};

// --- gen -------------------------------------------------------------

struct GenArgs {
    std::uint64_t spins = 0;
    double density = 0.5;
    std::pair<double, double> h_range{-1.0, 1.0};
    std::pair<double, double> j_range{-1.0, 1.0};
    double offset = 0.0;
    std::uint64_t seed = 0;
    CommonOutput out;
};

int run_gen(const GenArgs& args) {
    Rng rng(derive_seed(args.seed, "gen"));
    std::vector<double> h(args.spins);
    for (auto& v : h)
        v = args.h_range.first + (args.h_range.second - args.h_range.first) * rng.uniform01();
    std::vector<CouplingEntry> couplings;
    for (std::uint32_t i = 0; i < args.spins; ++i) {
        for (std::uint32_t j = i + 1; j < args.spins; ++j) {
            if (rng.uniform01() >= args.density) continue;
            const double v = args.j_range.first +
                             (args.j_range.second - args.j_range.first) * rng.uniform01();
            couplings.push_back({i, j, v});
        }
    }
    const IsingModel model(args.spins, std::move(h), couplings, args.offset);
    io::save_problem(model, args.out.dir() / "problem.json");
    std::printf("wrote %s (%zu spins, %zu couplings, fingerprint %s)\n",
                (args.out.dir() / "problem.json").c_str(), model.num_spins(),
                model.couplings().size(), fingerprint_hex(model.fingerprint()).c_str());
    return 0;
}

// --- sample ----------------------------------------------------------

struct SampleArgs {
    std::string problem_path;
    std::string sampler = "gibbs";
    std::uint64_t reads = 1000;
    std::uint64_t seed = 0;
    double beta = 1.0;
    std::string profile_path;
    std::string schedule_path;
    std::string noise;
    std::string embedding = "none";  // none | auto | <file>
    unsigned chimera_m = 4;
    std::string graph_path;
    double gamma = 1.0;
    std::uint64_t burn_in = 1000;
    std::uint64_t sweeps_per_read = 10;
    CommonOutput out;
};

DeviceProfile resolve_profile(const SampleArgs& args) {
    DeviceProfile profile;
    if (!args.profile_path.empty()) {
        profile = io::load_profile(args.profile_path);
    } else if (const char* env = std::getenv(kProfileEnvVar); env && *env) {
        profile = io::load_profile(env);
    }
    if (args.noise == "off") profile = profile.noise_free();
    return profile;
}

HardwareGraph resolve_graph(const SampleArgs& args) {
    if (!args.graph_path.empty()) return io::load_graph(args.graph_path);
    return chimera_graph(args.chimera_m);
}

int run_sample(const SampleArgs& args) {
    const IsingModel model = io::load_problem(args.problem_path);
    fs::create_directories(args.out.dir());
    io::save_problem(model, args.out.dir() / "problem.json");

    std::string report = "qaemu sample report\n";
    report += "problem: " + args.problem_path + "\n";
    report += "fingerprint: " + fingerprint_hex(model.fingerprint()) + "\n";
    report += "sampler: " + args.sampler + "\n";
    report += "reads: " + std::to_string(args.reads) + "\n";
    report += "seed: " + std::to_string(args.seed) + "\n";

    Sampleset sampleset;
    if (args.sampler == "gibbs") {
        SamplerConfig config;
        config.seed = derive_seed(args.seed, "sampling");
        config.num_reads = args.reads;
        config.sweeps_per_read = args.sweeps_per_read;
        config.burn_in_sweeps = args.burn_in;
        sampleset = gibbs_sample(model, args.beta, config);
        report += "beta: " + fmt(args.beta) + "\n";
    } else if (args.sampler == "exact") {
        const auto table = exact_distribution(model, args.beta);
        sampleset = exact_sample(table, args.reads, derive_seed(args.seed, "sampling"));
        report += "beta: " + fmt(args.beta) + "\n";
    } else if (args.sampler == "device") {
        const DeviceProfile profile = resolve_profile(args);
        const AnnealSchedule schedule = args.schedule_path.empty()
                                            ? AnnealSchedule::standard()
                                            : io::load_schedule(args.schedule_path);
        Device device(profile, schedule, args.burn_in, args.sweeps_per_read);

        if (args.embedding == "none") {
            sampleset = device.sample(model, args.reads, args.seed);
            const double scale = autoscale(model, profile).scale;
            report += "scale: " + fmt(scale) + "\n";
            report += "effective_alpha: " + fmt(effective_alpha(schedule, profile, scale)) + "\n";
        } else {
            const HardwareGraph hardware = resolve_graph(args);
            Embedding emb;
            if (args.embedding == "auto") {
                emb = find_embedding(model.num_spins(), logical_edges(model), hardware,
                                     derive_seed(args.seed, "embedding"));
            } else {
                emb = io::load_embedding(args.embedding);
            }
            emb.chain_strength = args.gamma;
            io::save_embedding(emb, args.out.dir() / "embedding.txt");
            io::save_graph(hardware, args.out.dir() / "graph.txt");
            sampleset = device.sample_embedded(model, emb, hardware, args.reads, args.seed);

            const IsingModel embedded = embed_model(model, emb, hardware);
            const double scale = autoscale(embedded, profile).scale;
            report += "embedding: " + args.embedding + "\n";
            report += "chain_strength: " + fmt(args.gamma) + "\n";
            report += "hardware_qubits: " + std::to_string(emb.active_qubits().size()) + "\n";
            report += "scale: " + fmt(scale) + "\n";
            report += "effective_alpha: " + fmt(effective_alpha(schedule, profile, scale)) + "\n";
        }
        report += "p_excited: " +
                  fmt(1.0 - std::exp(-schedule.t_f() / profile.photon_tau)) + "\n";
    } else {
        throw CLI::ValidationError("--sampler must be gibbs, exact or device");
    }

    io::save_sampleset(sampleset, args.out.dir() / "sampleset.csv");
    report += "total_reads: " + std::to_string(sampleset.total_reads()) + "\n";
    write_text(args.out.dir() / "report.txt", report);
    std::printf("wrote %s (%llu reads)\n", (args.out.dir() / "sampleset.csv").c_str(),
                static_cast<unsigned long long>(sampleset.total_reads()));
    return 0;
}

// --- embed -----------------------------------------------------------

struct EmbedArgs {
    std::string problem_path;
    unsigned chimera_m = 4;
    std::string graph_path;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    CommonOutput out;
};

int run_embed(const EmbedArgs& args) {
    const IsingModel model = io::load_problem(args.problem_path);
    const HardwareGraph hardware = args.graph_path.empty()
                                       ? chimera_graph(args.chimera_m)
                                       : io::load_graph(args.graph_path);
    Embedding emb = find_embedding(model.num_spins(), logical_edges(model), hardware,
                                   derive_seed(args.seed, "embedding"));
    emb.chain_strength = args.gamma;
    const IsingModel embedded = embed_model(model, emb, hardware);

    io::save_embedding(emb, args.out.dir() / "embedding.txt");
    io::save_graph(hardware, args.out.dir() / "graph.txt");
    io::save_problem(embedded, args.out.dir() / "problem.json");

    std::size_t longest = 0;
    for (const auto& [var, chain] : emb.chains) longest = std::max(longest, chain.size());
    std::string report = "qaemu embed report\n";
    report += "problem: " + args.problem_path + "\n";
    report += "variables: " + std::to_string(model.num_spins()) + "\n";
    report += "hardware_qubits_used: " + std::to_string(emb.active_qubits().size()) + "\n";
    report += "longest_chain: " + std::to_string(longest) + "\n";
    report += "chain_strength: " + fmt(args.gamma) + "\n";
    report += "intra_chain_edges: " + std::to_string(intra_chain_edges(emb, hardware)) + "\n";
    write_text(args.out.dir() / "report.txt", report);
    std::printf("wrote %s (%zu variables onto %zu qubits)\n",
                (args.out.dir() / "embedding.txt").c_str(), model.num_spins(),
                emb.active_qubits().size());
    return 0;
}

// --- unembed ---------------------------------------------------------

struct UnembedArgs {
    std::string sampleset_path;
    std::string embedding_path;
    std::string problem_path;
    std::string policy = "majority";
    std::uint64_t seed = 0;
    CommonOutput out;
};

int run_unembed(const UnembedArgs& args) {
    const Sampleset hardware_reads = io::load_sampleset(args.sampleset_path);
    const IsingModel logical = io::load_problem(args.problem_path);
    const Embedding emb = io::load_embedding(args.embedding_path);
    const ChainBreakPolicy policy = args.policy == "discard" ? ChainBreakPolicy::Discard
                                                             : ChainBreakPolicy::Majority;
    const auto result = unembed(hardware_reads, logical, emb, policy, args.seed);

    io::save_sampleset(result.sampleset, args.out.dir() / "sampleset.csv");
    std::string report = "qaemu unembed report\n";
    report += "sampleset: " + args.sampleset_path + "\n";
    report += "policy: " + args.policy + "\n";
    report += "reads_in: " + std::to_string(hardware_reads.total_reads()) + "\n";
    report += "reads_out: " + std::to_string(result.sampleset.total_reads()) + "\n";
    report += "break_fraction: " + fmt(result.break_fraction) + "\n";
    write_text(args.out.dir() / "report.txt", report);
    std::printf("break_fraction = %s (%llu reads kept)\n", fmt(result.break_fraction).c_str(),
                static_cast<unsigned long long>(result.sampleset.total_reads()));
    return 0;
}

// --- diagnose --------------------------------------------------------

struct DiagnoseArgs {
    std::string sampleset_path;
    std::string problem_path;
    double beta = 1.0;
    CommonOutput out;
};

int run_diagnose(const DiagnoseArgs& args) {
    const Sampleset sampleset = io::load_sampleset(args.sampleset_path);
    const IsingModel model = io::load_problem(args.problem_path);
    const auto empirical = empirical_distribution(sampleset);
    const auto exact = exact_distribution(model, args.beta);
    const auto coverage = coverage_report(sampleset, &model, args.beta);

    const double tv = distribution_distance(empirical, exact, DistanceMetric::TotalVariation);
    const double kl = distribution_distance(empirical, exact, DistanceMetric::KlDivergence);

    std::string report = "qaemu diagnose report\n";
    report += "sampleset: " + args.sampleset_path + "\n";
    report += "problem: " + args.problem_path + "\n";
    report += "beta: " + fmt(args.beta) + "\n";
    report += "total_reads: " + std::to_string(sampleset.total_reads()) + "\n";
    report += "states_discovered: " + std::to_string(coverage.states_discovered) + "\n";
    report += "states_total: " +
              (coverage.states_total ? std::to_string(*coverage.states_total)
                                     : std::string("unknown")) + "\n";
    report += "discovered_mass: " +
              (coverage.discovered_mass ? fmt(*coverage.discovered_mass)
                                        : std::string("unknown")) + "\n";
    report += "tv_empirical_vs_exact: " + fmt(tv) + "\n";
    report += "kl_empirical_vs_exact: " + fmt(kl) + "\n";
    report += "energy_conflict_magnitude: " + fmt(energy_conflict_magnitude(sampleset)) + "\n";
    write_text(args.out.dir() / "report.txt", report);
    std::printf("tv = %s, kl = %s, discovered %llu states\n", fmt(tv).c_str(), fmt(kl).c_str(),
                static_cast<unsigned long long>(coverage.states_discovered));
    return 0;
}

// --- retrofit --------------------------------------------------------

struct RetrofitArgs {
    std::string sampleset_path;
    std::string problem_path;
    std::string metric = "tv";
    double a_min = 0.0;
    double a_max = 2.0;
    CommonOutput out;
};

int run_retrofit(const RetrofitArgs& args) {
    const Sampleset sampleset = io::load_sampleset(args.sampleset_path);
    const IsingModel model = io::load_problem(args.problem_path);
    const auto result = retrofit_alpha(sampleset, model, parse_metric(args.metric),
                                       args.a_min, args.a_max);

    std::string scan = "a,distance\n";
    for (const auto& [a, d] : result.evaluations) scan += fmt(a) + "," + fmt(d) + "\n";
    write_text(args.out.dir() / "scan.csv", scan);

    std::string report = "qaemu retrofit report\n";
    report += "sampleset: " + args.sampleset_path + "\n";
    report += "problem: " + args.problem_path + "\n";
    report += "metric: " + args.metric + "\n";
    report += "interval: [" + fmt(args.a_min) + ", " + fmt(args.a_max) + "]\n";
    report += "alpha_out: " + fmt(result.alpha) + "\n";
    report += "min_distance: " + fmt(result.distance) + "\n";
    report += "evaluations: " + std::to_string(result.evaluations.size()) + "\n";
    write_text(args.out.dir() / "report.txt", report);
    std::printf("alpha_out = %s (distance %s)\n", fmt(result.alpha).c_str(),
                fmt(result.distance).c_str());
    return 0;
}

// --- reconstruct -----------------------------------------------------

struct ReconstructArgs {
    std::string sampleset_path;
    std::string problem_path;  // optional oracle comparison
    double beta = 1.0;
    CommonOutput out;
};

int run_reconstruct(const ReconstructArgs& args) {
    const Sampleset sampleset = io::load_sampleset(args.sampleset_path);
    const auto table = energy_reconstruction(sampleset, args.beta);
    io::save_table(table, args.out.dir() / "distribution.csv");

    std::string report = "qaemu reconstruct report\n";
    report += "sampleset: " + args.sampleset_path + "\n";
    report += "beta: " + fmt(args.beta) + "\n";
    report += "states: " + std::to_string(table.size()) + "\n";
    report += "energy_conflict_magnitude: " + fmt(energy_conflict_magnitude(sampleset)) + "\n";
    if (!args.problem_path.empty()) {
        const IsingModel model = io::load_problem(args.problem_path);
        const auto exact = exact_distribution(model, args.beta);
        const auto empirical = empirical_distribution(sampleset);
        report += "tv_reconstruction_vs_exact: " +
                  fmt(distribution_distance(table, exact, DistanceMetric::TotalVariation)) + "\n";
        report += "tv_empirical_vs_exact: " +
                  fmt(distribution_distance(empirical, exact, DistanceMetric::TotalVariation)) +
                  "\n";
    }
    write_text(args.out.dir() / "report.txt", report);
    std::printf("wrote %s (%zu states)\n", (args.out.dir() / "distribution.csv").c_str(),
                table.size());
    return 0;
}

// --- compare ---------------------------------------------------------

struct CompareArgs {
    std::string a_path;
    std::string b_path;
    std::string metric = "tv";
    CommonOutput out;
};

int run_compare(const CompareArgs& args) {
    const auto a = empirical_distribution(io::load_sampleset(args.a_path));
    const auto b = empirical_distribution(io::load_sampleset(args.b_path));
    const double d = distribution_distance(a, b, parse_metric(args.metric));

    std::string report = "qaemu compare report\n";
    report += "a: " + args.a_path + "\n";
    report += "b: " + args.b_path + "\n";
    report += "metric: " + args.metric + "\n";
    report += "distance: " + fmt(d) + "\n";
    write_text(args.out.dir() / "report.txt", report);
    std::printf("%s(a, b) = %s\n", args.metric.c_str(), fmt(d).c_str());
    return 0;
}

// --- validate-embedding ----------------------------------------------

struct ValidateArgs {
    std::string embedding_path;
    std::string problem_path;
    unsigned chimera_m = 4;
    std::string graph_path;
};

int run_validate(const ValidateArgs& args) {
    const Embedding emb = io::load_embedding(args.embedding_path);
    const IsingModel model = io::load_problem(args.problem_path);
    const HardwareGraph hardware = args.graph_path.empty()
                                       ? chimera_graph(args.chimera_m)
                                       : io::load_graph(args.graph_path);
    const auto validation = validate_embedding(emb, logical_edges(model), hardware);
    if (validation.ok) {
        std::printf("embedding is valid\n");
        return 0;
    }
    for (const auto& violation : validation.violations)
        std::fprintf(stderr, "violation: %s\n", violation.c_str());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qaemu: quantum annealer emulation and Boltzmann sampling diagnostics"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a random Ising problem");
    gen->add_option("--spins", gen_args.spins, "number of spins")->required();
    gen->add_option("--density", gen_args.density, "coupling density in [0,1]");
    gen->add_option("--h-range", gen_args.h_range, "linear field range (lo hi)");
    gen->add_option("--j-range", gen_args.j_range, "coupling range (lo hi)");
    gen->add_option("--offset", gen_args.offset, "constant energy offset");
    gen->add_option("--seed", gen_args.seed, "random seed");
    gen->add_option("-o,--out", gen_args.out.out_dir, "output directory")->required();

    SampleArgs sample_args;
    auto* sample = app.add_subcommand("sample", "draw samples from a problem");
    sample->add_option("--problem", sample_args.problem_path, "problem file")->required();
    sample->add_option("--sampler", sample_args.sampler, "gibbs | exact | device");
    sample->add_option("--reads", sample_args.reads, "number of reads");
    sample->add_option("--seed", sample_args.seed, "random seed");
    sample->add_option("--beta", sample_args.beta, "inverse temperature (gibbs/exact)");
    sample->add_option("--profile", sample_args.profile_path,
                       "device profile file (default: $QAEMU_PROFILE or built-ins)");
    sample->add_option("--schedule", sample_args.schedule_path, "anneal schedule file");
    sample->add_option("--noise", sample_args.noise, "'off' zeroes all device imperfections");
    sample->add_option("--embedding", sample_args.embedding,
                       "none | auto | embedding file (device only)");
    sample->add_option("--chimera", sample_args.chimera_m, "chimera grid size for embedding");
    sample->add_option("--graph", sample_args.graph_path, "hardware graph edge-list file");
    sample->add_option("--gamma", sample_args.gamma, "chain strength");
    sample->add_option("--burn-in", sample_args.burn_in, "burn-in sweeps");
    sample->add_option("--sweeps-per-read", sample_args.sweeps_per_read, "thinning interval");
    sample->add_option("-o,--out", sample_args.out.out_dir, "output directory")->required();

    EmbedArgs embed_args;
    auto* embed = app.add_subcommand("embed", "embed a problem into a hardware graph");
    embed->add_option("--problem", embed_args.problem_path, "problem file")->required();
    embed->add_option("--chimera", embed_args.chimera_m, "chimera grid size");
    embed->add_option("--graph", embed_args.graph_path, "hardware graph edge-list file");
    embed->add_option("--gamma", embed_args.gamma, "chain strength");
    embed->add_option("--seed", embed_args.seed, "random seed");
    embed->add_option("-o,--out", embed_args.out.out_dir, "output directory")->required();

    UnembedArgs unembed_args;
    auto* unembed_cmd = app.add_subcommand("unembed", "collapse hardware reads to logical states");
    unembed_cmd->add_option("--sampleset", unembed_args.sampleset_path, "hardware sampleset")
        ->required();
    unembed_cmd->add_option("--embedding", unembed_args.embedding_path, "embedding file")
        ->required();
    unembed_cmd->add_option("--problem", unembed_args.problem_path, "logical problem file")
        ->required();
    unembed_cmd->add_option("--policy", unembed_args.policy, "majority | discard");
    unembed_cmd->add_option("--seed", unembed_args.seed, "random seed (majority ties)");
    unembed_cmd->add_option("-o,--out", unembed_args.out.out_dir, "output directory")->required();

    DiagnoseArgs diagnose_args;
    auto* diagnose = app.add_subcommand("diagnose", "coverage and distances against the oracle");
    diagnose->add_option("--sampleset", diagnose_args.sampleset_path, "sampleset file")
        ->required();
    diagnose->add_option("--problem", diagnose_args.problem_path, "problem file")->required();
    diagnose->add_option("--beta", diagnose_args.beta, "oracle inverse temperature");
    diagnose->add_option("-o,--out", diagnose_args.out.out_dir, "output directory")->required();

    RetrofitArgs retrofit_args;
    auto* retrofit = app.add_subcommand("retrofit", "best-fit Boltzmann inverse temperature");
    retrofit->add_option("--sampleset", retrofit_args.sampleset_path, "sampleset file")
        ->required();
    retrofit->add_option("--problem", retrofit_args.problem_path, "problem file")->required();
    retrofit->add_option("--metric", retrofit_args.metric, "tv | kl");
    retrofit->add_option("--a-min", retrofit_args.a_min, "search interval lower end");
    retrofit->add_option("--a-max", retrofit_args.a_max, "search interval upper end");
    retrofit->add_option("-o,--out", retrofit_args.out.out_dir, "output directory")->required();

    ReconstructArgs reconstruct_args;
    auto* reconstruct =
        app.add_subcommand("reconstruct", "Boltzmann law over the discovered states");
    reconstruct->add_option("--sampleset", reconstruct_args.sampleset_path, "sampleset file")
        ->required();
    reconstruct->add_option("--problem", reconstruct_args.problem_path,
                            "optional problem file for oracle comparison");
    reconstruct->add_option("--beta", reconstruct_args.beta, "reconstruction inverse temperature");
    reconstruct->add_option("-o,--out", reconstruct_args.out.out_dir, "output directory")
        ->required();

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "distance between two samplesets");
    compare->add_option("--a", compare_args.a_path, "first sampleset")->required();
    compare->add_option("--b", compare_args.b_path, "second sampleset")->required();
    compare->add_option("--metric", compare_args.metric, "tv | kl");
    compare->add_option("-o,--out", compare_args.out.out_dir, "output directory")->required();

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate-embedding", "check the embedding invariants");
    validate->add_option("--embedding", validate_args.embedding_path, "embedding file")
        ->required();
    validate->add_option("--problem", validate_args.problem_path, "problem file")->required();
    validate->add_option("--chimera", validate_args.chimera_m, "chimera grid size");
    validate->add_option("--graph", validate_args.graph_path, "hardware graph edge-list file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // help text, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (sample->parsed()) return run_sample(sample_args);
        if (embed->parsed()) return run_embed(embed_args);
        if (unembed_cmd->parsed()) return run_unembed(unembed_args);
        if (diagnose->parsed()) return run_diagnose(diagnose_args);
        if (retrofit->parsed()) return run_retrofit(retrofit_args);
        if (reconstruct->parsed()) return run_reconstruct(reconstruct_args);
        if (compare->parsed()) return run_compare(compare_args);
        if (validate->parsed()) return run_validate(validate_args);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
