#pragma once

#include "qdb/gates.hpp"

#include <map>
#include <string>

namespace qdb {

/// Hardware characterization consumed by the scheduler, the noise injector
/// and the cost model: calibrated gate durations t_g, gate error rates
/// eps_g, per-layer control overhead t_ctrl and the effective coherence
/// bound T2_eff.
struct DeviceModel {
    std::map<GateKind, double> gate_time_ns;
    std::map<GateKind, double> gate_error;
    double t_ctrl_ns = 10.0;
    double t2_eff_ns = 1e8;
    int qubit_cap = 24;
    std::string name = "device";

    /// Throws UnknownGateDuration when the device has no calibration for
    /// the gate kind.
    double time_for(GateKind kind) const;

    /// Missing entries count as error-free.
    double error_for(GateKind kind) const;

    /// Noiseless device with nominal gate durations.
    static DeviceModel ideal();

    /// The shipped default: mildly noisy superconducting-style parameters.
    static DeviceModel default_noisy();

    static DeviceModel load_json(const std::string& path);
    void save_json(const std::string& path) const;
    std::string to_json_string() const;
    static DeviceModel from_json_string(const std::string& text);
};

} // namespace qdb
