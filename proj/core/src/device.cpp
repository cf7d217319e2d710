#include "qdb/device.hpp"

#include "qdb/errors.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <fstream>

namespace qdb {

namespace {

using nlohmann::json;

constexpr std::array<GateKind, 12> kAllKinds = {
    GateKind::H,    GateKind::X,   GateKind::Z,     GateKind::RX,
    GateKind::RY,   GateKind::RZ,  GateKind::CNOT,  GateKind::CZ,
    GateKind::CSWAP, GateKind::MCX, GateKind::MCZ,  GateKind::SWAP,
};

GateKind kind_from_name(const std::string& name) {
    for (GateKind k : kAllKinds) {
        if (name == gate_kind_name(k)) {
            return k;
        }
    }
    raise(ErrorCode::ParseError, "unknown gate kind '" + name + "' in device model");
}

} // namespace

double DeviceModel::time_for(GateKind kind) const {
    auto it = gate_time_ns.find(kind);
    if (it == gate_time_ns.end()) {
        raise(ErrorCode::UnknownGateDuration,
              std::string("device '") + name + "' has no duration for " + gate_kind_name(kind));
    }
    return it->second;
}

double DeviceModel::error_for(GateKind kind) const {
    auto it = gate_error.find(kind);
    return it == gate_error.end() ? 0.0 : it->second;
}

DeviceModel DeviceModel::ideal() {
    DeviceModel d;
    d.name = "ideal";
    for (GateKind k : kAllKinds) {
        d.gate_time_ns[k] = 30.0;
        d.gate_error[k] = 0.0;
    }
    d.gate_time_ns[GateKind::CNOT] = 60.0;
    d.gate_time_ns[GateKind::CZ] = 60.0;
    d.gate_time_ns[GateKind::SWAP] = 60.0;
    d.gate_time_ns[GateKind::CSWAP] = 90.0;
    d.gate_time_ns[GateKind::MCX] = 90.0;
    d.gate_time_ns[GateKind::MCZ] = 90.0;
    d.t_ctrl_ns = 10.0;
    d.t2_eff_ns = 1e12;
    return d;
}

DeviceModel DeviceModel::default_noisy() {
    DeviceModel d = ideal();
    d.name = "default-noisy";
    for (GateKind k : {GateKind::H, GateKind::X, GateKind::Z, GateKind::RX, GateKind::RY,
                       GateKind::RZ}) {
        d.gate_error[k] = 2e-6;
    }
    for (GateKind k : {GateKind::CNOT, GateKind::CZ, GateKind::SWAP}) {
        d.gate_error[k] = 5e-6;
    }
    for (GateKind k : {GateKind::CSWAP, GateKind::MCX, GateKind::MCZ}) {
        d.gate_error[k] = 1e-5;
    }
    d.t2_eff_ns = 1e8;
    return d;
}

std::string DeviceModel::to_json_string() const {
    json j;
    j["name"] = name;
    j["t_ctrl_ns"] = t_ctrl_ns;
    j["t2_eff_ns"] = t2_eff_ns;
    j["qubit_cap"] = qubit_cap;
    json times = json::object(), errors = json::object();
    for (const auto& [k, v] : gate_time_ns) {
        times[gate_kind_name(k)] = v;
    }
    for (const auto& [k, v] : gate_error) {
        errors[gate_kind_name(k)] = v;
    }
    j["gate_times_ns"] = times;
    j["gate_errors"] = errors;
    return j.dump(2);
}

DeviceModel DeviceModel::from_json_string(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
        raise(ErrorCode::ParseError, "device model is not valid JSON");
    }
    DeviceModel d;
    d.name = j.value("name", std::string("device"));
    d.t_ctrl_ns = j.value("t_ctrl_ns", 10.0);
    d.t2_eff_ns = j.value("t2_eff_ns", 1e8);
    d.qubit_cap = j.value("qubit_cap", 24);
    if (j.contains("gate_times_ns")) {
        for (auto& [key, val] : j["gate_times_ns"].items()) {
            d.gate_time_ns[kind_from_name(key)] = val.get<double>();
        }
    }
    if (j.contains("gate_errors")) {
        for (auto& [key, val] : j["gate_errors"].items()) {
            d.gate_error[kind_from_name(key)] = val.get<double>();
        }
    }
    for (const auto& [k, eps] : d.gate_error) {
        if (eps < 0.0 || eps >= 1.0) {
            raise(ErrorCode::ValueOutOfBounds, "gate error rate must be in [0, 1)");
        }
    }
    if (d.t2_eff_ns <= 0.0) {
        raise(ErrorCode::ValueOutOfBounds, "t2_eff_ns must be positive");
    }
    return d;
}

DeviceModel DeviceModel::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::IoError, "cannot open device model file " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

void DeviceModel::save_json(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        raise(ErrorCode::IoError, "cannot write device model file " + path);
    }
    out << to_json_string() << '\n';
}

} // namespace qdb
