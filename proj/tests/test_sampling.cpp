#include "test_util.hpp"

#include "qdb/simulator.hpp"

#include <doctest.h>

#include <cmath>

using namespace qdb;

TEST_CASE("deterministic basis state measures 100% '1'") {
    Circuit c(1);
    c.append(GateInstance::x(0));
    const auto result = sample(c, 500, NoiseModel::disabled(42));
    REQUIRE(result.counts.size() == 1);
    CHECK(result.counts.at("1") == 500);
}

TEST_CASE("Bell circuit sampled 2000 shots stays within 3 sigma of 1000/1000") {
    Circuit c(2);
    c.append(GateInstance::h(0)).append(GateInstance::cnot(0, 1));
    const auto result = sample(c, kDefaultShots, NoiseModel::disabled(7));
    CHECK(kDefaultShots == 2000);
    std::uint64_t total = 0;
    for (const auto& [bits, count] : result.counts) {
        REQUIRE((bits == "00" || bits == "11"));
        total += count;
    }
    REQUIRE(total == 2000);
    const double sigma = std::sqrt(2000.0 * 0.25);
    CHECK(std::abs(static_cast<double>(result.counts.at("00")) - 1000.0) <= 3.0 * sigma);
    CHECK(std::abs(static_cast<double>(result.counts.at("11")) - 1000.0) <= 3.0 * sigma);
}

TEST_CASE("identical seeds give bit-identical counts") {
    std::mt19937_64 rng(5);
    const auto c = qdbtest::random_circuit(4, 25, rng);

    const auto a = sample(c, 2000, NoiseModel::disabled(99));
    const auto b = sample(c, 2000, NoiseModel::disabled(99));
    CHECK(a.counts == b.counts);

    auto noisy = NoiseModel::from_device(DeviceModel::default_noisy(), 123);
    const auto na = sample(c, 500, noisy);
    const auto nb = sample(c, 500, noisy);
    CHECK(na.counts == nb.counts);

    auto other_seed = noisy;
    other_seed.seed = 124;
    const auto nc = sample(c, 500, other_seed);
    CHECK(na.counts != nc.counts);
}

TEST_CASE("empirical frequencies track Born probabilities on random circuits") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = qdbtest::random_circuit(4, 30, rng);
        const auto state = run_statevector(c);
        const auto dist = measured_distribution(state, {});
        const std::uint64_t shots = 100000;
        const auto counts = sample_counts(c, shots, NoiseModel::disabled(1000 + trial));
        for (std::uint64_t value = 0; value < dist.size(); ++value) {
            const double expected = dist[value] * static_cast<double>(shots);
            const double sigma = std::sqrt(
                static_cast<double>(shots) * dist[value] * (1.0 - dist[value]));
            auto it = counts.find(value);
            const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
            REQUIRE(std::abs(observed - expected) <= 4.0 * sigma + 1.0);
        }
    }
}

TEST_CASE("restricting measurement to a subset marginalizes the distribution") {
    Circuit c(3);
    c.append(GateInstance::h(0)).append(GateInstance::cnot(0, 2));
    c.measured_qubits = {2};
    const auto result = sample(c, 4000, NoiseModel::disabled(3));
    CHECK(result.counts.size() == 2);
    CHECK(result.counts.at("0") + result.counts.at("1") == 4000);
}

TEST_CASE("heavy gate noise visibly corrupts a deterministic circuit") {
    DeviceModel dev = DeviceModel::ideal();
    dev.gate_error[GateKind::X] = 0.5;
    Circuit c(1);
    c.append(GateInstance::x(0));
    const auto counts = sample_counts(c, 2000, NoiseModel::from_device(dev, 11));
    // Half of the shots should carry a fault; X and Y faults flip the readout.
    REQUIRE(counts.count(0) == 1);
    CHECK(counts.at(0) > 200);
    CHECK(counts.at(1) > 1000);
}

TEST_CASE("dephasing-only noise leaves basis states untouched") {
    DeviceModel dev = DeviceModel::ideal();
    dev.t2_eff_ns = 10.0; // violent dephasing
    Circuit c(2);
    c.append(GateInstance::x(0)).append(GateInstance::x(1));
    auto noise = NoiseModel::from_device(dev, 17);
    noise.enabled = true; // only layer dephasing fires
    const auto counts = sample_counts(c, 500, noise);
    REQUIRE(counts.size() == 1);
    CHECK(counts.begin()->first == 3);
}
