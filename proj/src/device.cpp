#include "qaemu/device.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qaemu/samplers.hpp"

namespace qaemu {

void DeviceProfile::validate() const {
    const auto check_range = [](const Range& r, const char* name) {
        if (!(r.min < 0.0 && 0.0 < r.max))
            throw std::invalid_argument(std::string(name) + " range must straddle zero");
    };
    check_range(h_range, "h");
    check_range(j_range, "J");
    if (ice_sigma_h < 0.0 || ice_sigma_j < 0.0)
        throw std::invalid_argument("ICE sigmas must be >= 0");
    if (dac_step < 0.0) throw std::invalid_argument("dac_step must be >= 0");
    if (h_scale_spread < 0.0) throw std::invalid_argument("h_scale_spread must be >= 0");
    // 0.5 is admitted as the fully randomizing limit.
    if (!(readout_fidelity >= 0.5 && readout_fidelity <= 1.0))
        throw std::invalid_argument("readout_fidelity must lie in [0.5, 1]");
    if (!(photon_tau > 0.0)) throw std::invalid_argument("photon_tau must be > 0");
    if (!(spinbath_rho >= 0.0 && spinbath_rho < 1.0))
        throw std::invalid_argument("spinbath_rho must lie in [0, 1)");
    if (depolarize_wait < 0.0) throw std::invalid_argument("depolarize_wait must be >= 0");
    if (!(alpha_base > 0.0)) throw std::invalid_argument("alpha_base must be > 0");
    if (!(alpha_eq > 0.0)) throw std::invalid_argument("alpha_eq must be > 0");
    if (!(tau_relax > 0.0)) throw std::invalid_argument("tau_relax must be > 0");
    if (max_reads == 0) throw std::invalid_argument("max_reads must be >= 1");
}

DeviceProfile DeviceProfile::noise_free() const {
    DeviceProfile p = *this;
    p.ice_sigma_h = 0.0;
    p.ice_sigma_j = 0.0;
    p.background_chi = 0.0;
    p.dac_step = 0.0;
    p.h_scale_spread = 0.0;
    p.readout_fidelity = 1.0;
    p.photon_tau = 1e18;
    p.spinbath_rho = 0.0;
    p.depolarize_wait = 0.0;
    return p;
}

AnnealSchedule::AnnealSchedule(double t_f, std::vector<SchedulePoint> points,
                               std::optional<double> pause_s, double pause_duration)
    : t_f_(t_f), points_(std::move(points)), pause_s_(pause_s), pause_duration_(pause_duration) {
    if (!(t_f_ > 0.0)) throw std::invalid_argument("anneal time t_f must be > 0");
    if (points_.size() < 2) throw std::invalid_argument("schedule needs at least two points");
    if (points_.front().s != 0.0 || points_.back().s != 1.0)
        throw std::invalid_argument("schedule must span s = 0 to s = 1");
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const auto& p = points_[k];
        if (p.s < 0.0 || p.s > 1.0) throw std::invalid_argument("schedule s outside [0, 1]");
        if (p.a < 0.0 || p.b < 0.0) throw std::invalid_argument("A and B must be >= 0");
        if (k > 0) {
            if (p.s < points_[k - 1].s) throw std::invalid_argument("schedule s must be nondecreasing");
            if (p.a > points_[k - 1].a) throw std::invalid_argument("A(s) must be nonincreasing");
            if (p.b < points_[k - 1].b) throw std::invalid_argument("B(s) must be nondecreasing");
        }
    }
    if (points_.front().a < 10.0 * points_.front().b)
        throw std::invalid_argument("schedule must satisfy A(0) >= 10 B(0)");
    if (points_.back().b < 10.0 * points_.back().a)
        throw std::invalid_argument("schedule must satisfy B(1) >= 10 A(1)");
    if (pause_s_) {
        if (!(*pause_s_ > 0.0 && *pause_s_ < 1.0))
            throw std::invalid_argument("pause_s must lie in (0, 1)");
    } else if (pause_duration_ != 0.0) {
        throw std::invalid_argument("pause_duration requires pause_s");
    }
    if (pause_duration_ < 0.0) throw std::invalid_argument("pause_duration must be >= 0");
}

AnnealSchedule AnnealSchedule::standard(double t_f) {
    return AnnealSchedule(t_f, {{0.0, 10.0, 0.0}, {1.0, 0.0, 10.0}});
}

AnnealSchedule AnnealSchedule::with_pause(double s, double duration) const {
    return AnnealSchedule(t_f_, points_, s, duration);
}

AutoscaleResult autoscale(const IsingModel& model, const DeviceProfile& profile) {
    profile.validate();
    double scale = 1.0;
    const auto tighten = [&scale](double weight, const Range& range) {
        if (weight > 0.0)
            scale = std::min(scale, range.max / weight);
        else if (weight < 0.0)
            scale = std::min(scale, range.min / weight);
    };
    for (const double v : model.h()) tighten(v, profile.h_range);
    for (const auto& c : model.couplings()) tighten(c.value, profile.j_range);

    std::vector<double> h = model.h();
    for (double& v : h) v *= scale;
    std::vector<CouplingEntry> couplings = model.couplings();
    for (auto& c : couplings) c.value *= scale;
    return {IsingModel(model.num_spins(), std::move(h), couplings, scale * model.offset()),
            scale};
}

IsingModel apply_ice(const IsingModel& model, const DeviceProfile& profile, Rng& rng) {
    profile.validate();
    const auto quantize = [&profile](double v) {
        return profile.dac_step == 0.0 ? v : std::round(v / profile.dac_step) * profile.dac_step;
    };

    const std::size_t n = model.num_spins();
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        double leak = 0.0;
        for (const auto& [nbr, j] : model.adjacency()[i]) leak += j * model.h()[nbr];
        const double xi = rng.normal() * profile.h_scale_spread;
        const double delta = rng.normal() * profile.ice_sigma_h;
        h[i] = quantize(model.h()[i] * (1.0 + xi) + delta + profile.background_chi * leak);
    }
    std::vector<CouplingEntry> couplings = model.couplings();
    for (auto& c : couplings) c.value = quantize(c.value + rng.normal() * profile.ice_sigma_j);
    return IsingModel(n, std::move(h), couplings, model.offset());
}

namespace {

double device_inverse_temperature(const AnnealSchedule& schedule, const DeviceProfile& profile) {
    double relaxed = 0.0;
    if (schedule.pause_s())
        relaxed = 1.0 - std::exp(-schedule.pause_duration() / profile.tau_relax);
    return profile.alpha_base + (profile.alpha_eq - profile.alpha_base) * relaxed;
}

}  // namespace

double effective_alpha(const AnnealSchedule& schedule, const DeviceProfile& profile,
                       double scale) {
    profile.validate();
    return scale * device_inverse_temperature(schedule, profile);
}

Device::Device(DeviceProfile profile, AnnealSchedule schedule, std::uint64_t chain_burn_in,
               std::uint64_t chain_sweeps_per_read)
    : profile_(std::move(profile)),
      schedule_(std::move(schedule)),
      chain_burn_in_(chain_burn_in),
      chain_sweeps_per_read_(std::max<std::uint64_t>(1, chain_sweeps_per_read)) {
    profile_.validate();
}

Sampleset Device::sample(const IsingModel& model, std::uint64_t num_reads, std::uint64_t seed) {
    if (num_reads == 0) throw std::invalid_argument("num_reads must be >= 1");
    if (num_reads > profile_.max_reads)
        throw std::runtime_error("sampleset cap exceeded: requested " +
                                 std::to_string(num_reads) + " reads, device maximum is " +
                                 std::to_string(profile_.max_reads));

    const auto [scaled, scale] = autoscale(model, profile_);

    Rng ice_rng(derive_seed(seed, "ice"));
    const IsingModel programmed = apply_ice(scaled, profile_, ice_rng);

    // The chains run on the scaled+perturbed model at the device inverse
    // temperature, so the exponent against the user model composes to
    // effective_alpha(schedule, profile, scale) plus the ICE distortion.
    const double beta_dev = device_inverse_temperature(schedule_, profile_);
    const double p_excited = 1.0 - std::exp(-schedule_.t_f() / profile_.photon_tau);
    const double persistence =
        profile_.spinbath_rho * std::exp(-profile_.depolarize_wait / profile_.tau_relax);
    const double p_flip = 1.0 - profile_.readout_fidelity;

    const std::size_t n = programmed.num_spins();
    Rng cold_rng(derive_seed(seed, "chain-cold"));
    Rng hot_rng(derive_seed(seed, "chain-hot"));
    Rng photon_rng(derive_seed(seed, "photon"));
    Rng bath_rng(derive_seed(seed, "spinbath"));
    Rng readout_rng(derive_seed(seed, "readout"));

    std::vector<std::int8_t> cold(n), hot(n);
    for (auto& s : cold) s = static_cast<std::int8_t>(cold_rng.spin());
    for (auto& s : hot) s = static_cast<std::int8_t>(hot_rng.spin());
    for (std::uint64_t sweep = 0; sweep < chain_burn_in_; ++sweep) {
        gibbs_sweep(programmed, beta_dev, cold, cold_rng);
        gibbs_sweep(programmed, 0.5 * beta_dev, hot, hot_rng);
    }

    std::vector<SampleRow> rows;
    rows.reserve(num_reads);
    std::vector<std::int8_t> read(n);
    for (std::uint64_t k = 0; k < num_reads; ++k) {
        const bool excited = photon_rng.bernoulli(p_excited);
        auto& chain = excited ? hot : cold;
        auto& chain_rng = excited ? hot_rng : cold_rng;
        const double beta = excited ? 0.5 * beta_dev : beta_dev;
        for (std::uint64_t sweep = 0; sweep < chain_sweeps_per_read_; ++sweep)
            gibbs_sweep(programmed, beta, chain, chain_rng);
        read = chain;

        if (persistence > 0.0 && last_read_.size() == n) {
            for (std::size_t i = 0; i < n; ++i)
                if (bath_rng.bernoulli(persistence)) read[i] = last_read_[i];
        }
        last_read_ = read;

        if (p_flip > 0.0) {
            for (std::size_t i = 0; i < n; ++i)
                if (readout_rng.bernoulli(p_flip)) read[i] = static_cast<std::int8_t>(-read[i]);
        }

        SpinState state(read);
        const double e = energy(model, state);
        rows.push_back({std::move(state), e, 1});
    }
    return Sampleset(std::move(rows), model.fingerprint());
}

Sampleset Device::sample_embedded(const IsingModel& logical_model, const Embedding& emb,
                                  const HardwareGraph& hardware, std::uint64_t num_reads,
                                  std::uint64_t seed) {
    const IsingModel hardware_model = embed_model(logical_model, emb, hardware);
    return sample(hardware_model, num_reads, seed);
}

Sampleset device_sample(const IsingModel& model, const AnnealSchedule& schedule,
                        const DeviceProfile& profile, std::uint64_t num_reads,
                        std::uint64_t seed) {
    Device device(profile, schedule);
    return device.sample(model, num_reads, seed);
}

Sampleset device_sample(const IsingModel& logical_model, const AnnealSchedule& schedule,
                        const DeviceProfile& profile, const Embedding& emb,
                        const HardwareGraph& hardware, std::uint64_t num_reads,
                        std::uint64_t seed) {
    Device device(profile, schedule);
    return device.sample_embedded(logical_model, emb, hardware, num_reads, seed);
}

}  // namespace qaemu
