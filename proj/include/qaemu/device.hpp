#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qaemu/embedding.hpp"
#include "qaemu/graph.hpp"
#include "qaemu/ising.hpp"
#include "qaemu/rng.hpp"
#include "qaemu/sampleset.hpp"

namespace qaemu {

struct Range {
    double min;
    double max;
};

// Every imperfection knob of the emulated annealer. Times are in
// microseconds. readout_fidelity (0.99) and max_reads (10^4) follow the
// published device figures; the remaining defaults are plumbing choices that
// describe a mildly imperfect device and can all be zeroed with
// DeviceProfile::noise_free().
struct DeviceProfile {
    Range h_range{-2.0, 2.0};  // programmable linear-field window
    Range j_range{-1.0, 1.0};  // programmable coupling window

    double ice_sigma_h = 0.01;      // std dev of additive h perturbation
    double ice_sigma_j = 0.01;      // std dev of additive J perturbation
    double background_chi = 0.0;    // susceptibility leak: h_i += chi * sum_j J_ij h_j
    double dac_step = 1.0 / 256.0;  // DAC quantization step (0 = ideal)
    double h_scale_spread = 0.0;    // per-qubit multiplicative spread of h

    double readout_fidelity = 0.99;  // probability a spin is reported correctly
    double photon_tau = 2000.0;      // excitation time constant; p_ex = 1 - exp(-t_f/tau)

    double spinbath_rho = 0.0;      // per-spin copy-from-previous-read persistence
    double depolarize_wait = 0.0;   // idle time decaying the persistence

    double alpha_base = 1.0;  // Hamiltonian scaling without a pause
    double alpha_eq = 1.0;    // scaling limit under an infinitely long pause
    double tau_relax = 100.0; // pause-relaxation time constant

    std::uint64_t max_reads = 10000;  // sampleset cap

    void validate() const;

    // Copy of this profile with every imperfection disabled: sigmas, chi,
    // spread, dac and spin-bath zeroed, fidelity 1, photon_tau pushed high
    // enough that p_ex vanishes.
    DeviceProfile noise_free() const;
};

struct SchedulePoint {
    double s;  // dimensionless anneal fraction
    double a;  // transverse energy scale A(s)
    double b;  // problem energy scale B(s)
};

// Anneal schedule metadata. The emulator never integrates the quantum
// dynamics; the schedule contributes t_f (photon exposure) and the optional
// pause (equilibration model). Shape constraints are still enforced:
// s nondecreasing over [0,1], A nonincreasing, B nondecreasing,
// A(0) >= 10 B(0) and B(1) >= 10 A(1).
class AnnealSchedule {
public:
    AnnealSchedule(double t_f, std::vector<SchedulePoint> points,
                   std::optional<double> pause_s = std::nullopt, double pause_duration = 0.0);

    // Linear A ramp-down / B ramp-up over [0,1].
    static AnnealSchedule standard(double t_f = 20.0);

    double t_f() const { return t_f_; }
    const std::vector<SchedulePoint>& points() const { return points_; }
    std::optional<double> pause_s() const { return pause_s_; }
    double pause_duration() const { return pause_duration_; }

    AnnealSchedule with_pause(double s, double duration) const;

private:
    double t_f_;
    std::vector<SchedulePoint> points_;
    std::optional<double> pause_s_;
    double pause_duration_;
};

struct AutoscaleResult {
    IsingModel model;
    double scale;
};

// Largest scale <= 1 placing every weight inside the profile ranges; the
// model (h, J and offset alike) is multiplied by it. All-zero models pass
// through with scale 1.
AutoscaleResult autoscale(const IsingModel& model, const DeviceProfile& profile);

// Integrated control errors: h_i <- q(h_i (1 + xi_i) + delta_i + leak_i)
// with leak_i = chi * sum_j J_ij h_j, J <- q(J + delta_J), where xi and
// delta are zero-mean normals and q rounds to the nearest dac_step multiple.
// Draw order is fixed (per site xi then delta, then couplings in key order)
// so the result is a pure function of the rng state.
IsingModel apply_ice(const IsingModel& model, const DeviceProfile& profile, Rng& rng);

// Effective Hamiltonian scaling: the single dimensionless factor relating
// the user's Ising energy to the Boltzmann exponent of the device output,
//   alpha = scale * (alpha_base + (alpha_eq - alpha_base) (1 - exp(-pause/tau))).
// A schedule without a pause contributes alpha_base alone.
double effective_alpha(const AnnealSchedule& schedule, const DeviceProfile& profile,
                       double scale);

// Phenomenological annealer. One sample() call is one programming cycle:
// autoscale, fresh ICE draw, equilibrium Gibbs sampling of the programmed
// model at the device inverse temperature (halved for photon-excited reads),
// spin-bath persistence, readout flips. Reported energies are always the
// user model's Eq.-style energy of the reported state.
//
// The spin-bath memory persists across calls (earlier samplesets bias later
// ones) which is why a device instance must be operated serially; use
// depolarize() or a fresh instance for independent runs.
class Device {
public:
    Device(DeviceProfile profile, AnnealSchedule schedule,
           std::uint64_t chain_burn_in = 1000, std::uint64_t chain_sweeps_per_read = 10);

    const DeviceProfile& profile() const { return profile_; }
    const AnnealSchedule& schedule() const { return schedule_; }

    Sampleset sample(const IsingModel& model, std::uint64_t num_reads, std::uint64_t seed);

    // Embeds the logical model first; reads come back hardware-indexed
    // (densely, by position in emb.active_qubits()) with energies of the
    // embedded, unscaled model.
    Sampleset sample_embedded(const IsingModel& logical_model, const Embedding& emb,
                              const HardwareGraph& hardware, std::uint64_t num_reads,
                              std::uint64_t seed);

    // Clears the spin-bath memory.
    void depolarize() { last_read_.clear(); }

private:
    DeviceProfile profile_;
    AnnealSchedule schedule_;
    std::uint64_t chain_burn_in_;
    std::uint64_t chain_sweeps_per_read_;
    std::vector<std::int8_t> last_read_;
};

// Single-cycle convenience wrappers over a fresh Device.
Sampleset device_sample(const IsingModel& model, const AnnealSchedule& schedule,
                        const DeviceProfile& profile, std::uint64_t num_reads,
                        std::uint64_t seed);
Sampleset device_sample(const IsingModel& logical_model, const AnnealSchedule& schedule,
                        const DeviceProfile& profile, const Embedding& emb,
                        const HardwareGraph& hardware, std::uint64_t num_reads,
                        std::uint64_t seed);

}  // namespace qaemu
