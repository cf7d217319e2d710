#include "qdb/minfind.hpp"

#include "qdb/errors.hpp"
#include "qdb/grover.hpp"
#include "qdb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qdb {

namespace {

using u64 = std::uint64_t;

constexpr const char* kValueColumn = "v";

PredicateOracle below_threshold_oracle(const QromLoader& loader, int n, int bits, u64 threshold,
                                       int qubit_cap) {
    // marks {x : v(x) < threshold}
    const auto pred =
        Predicate::range(kValueColumn, 0.0, static_cast<double>(threshold) - 1.0);
    return compile_oracle(pred, loader, n, bits, qubit_cap);
}

} // namespace

MinFindResult durr_hoyer_min(const std::vector<std::uint64_t>& values, int bits,
                             const MinFindOptions& opts) {
    const u64 n_rows = values.size();
    if (n_rows == 0 || (n_rows & (n_rows - 1)) != 0) {
        raise(ErrorCode::InvalidCounts, "value count must be a power of two");
    }
    int n = 0;
    while ((u64{1} << n) < n_rows) {
        ++n;
    }
    n = std::max(n, 1);

    QromLoader loader(n);
    loader.add_column(kValueColumn, bits, values);

    const u64 budget =
        static_cast<u64>(std::ceil(22.5 * std::sqrt(static_cast<double>(n_rows))));
    std::mt19937_64 rng(mix_seed(opts.seed, 0x6d696e));
    std::uniform_int_distribution<u64> pick_rid(0, n_rows - 1);

    MinFindResult best;
    bool have_best = false;

    for (int rep = 0; rep < opts.repetitions; ++rep) {
        u64 incumbent = pick_rid(rng);
        MinFindResult run;
        run.candidate_trail.push_back(incumbent);

        u64 used = 0;
        double schedule = 1.0;
        int stalled_rounds = 0;
        u64 round_counter = 0;

        while (used < budget && values[incumbent] > 0) {
            const auto oracle =
                below_threshold_oracle(loader, n, bits, values[incumbent], opts.qubit_cap);
            const u64 k_cap = std::max<u64>(1, static_cast<u64>(schedule));
            std::uniform_int_distribution<u64> pick_k(1, k_cap);
            const u64 k = pick_k(rng);

            NoiseModel noise = opts.noise;
            noise.seed = mix_seed(opts.seed, 0xd00d + (static_cast<u64>(rep) << 32) +
                                                 round_counter++);
            const Circuit circuit = assemble_grover_circuit(oracle, k);
            const auto counts = sample_counts(circuit, opts.round_shots, noise, opts.qubit_cap);
            used += k;
            run.grover_iterations_used += k;

            u64 best_seen = incumbent;
            for (const auto& [rid, count] : counts) {
                (void)count;
                if (rid < n_rows && values[rid] < values[best_seen]) {
                    best_seen = rid;
                }
            }
            if (values[best_seen] < values[incumbent]) {
                incumbent = best_seen;
                run.candidate_trail.push_back(incumbent);
                ++run.threshold_updates;
                schedule = 1.0;
                stalled_rounds = 0;
                continue;
            }
            schedule = std::min(schedule * 1.2 + 1.0,
                                std::sqrt(static_cast<double>(n_rows)) * 1.5);
            ++stalled_rounds;
            if (stalled_rounds >= 3) {
                // Probably converged; ask the counting routine whether any
                // improver remains before giving up this run.
                NoiseModel count_noise = opts.noise;
                count_noise.seed = mix_seed(opts.seed, 0xc047 + round_counter);
                const u64 improvers =
                    quantum_count(oracle, opts.certify_phase_bits, 64, count_noise,
                                  opts.qubit_cap);
                if (improvers == 0) {
                    break;
                }
                stalled_rounds = 0;
            }
        }

        if (!have_best || values[incumbent] < best.min_value ||
            (values[incumbent] == best.min_value && incumbent < best.min_rid)) {
            best.min_rid = incumbent;
            best.min_value = values[incumbent];
            have_best = true;
        }
        best.grover_iterations_used += run.grover_iterations_used;
        best.threshold_updates += run.threshold_updates;
        best.candidate_trail.insert(best.candidate_trail.end(), run.candidate_trail.begin(),
                                    run.candidate_trail.end());
        best.run_trails.push_back(std::move(run.candidate_trail));
    }
    return best;
}

} // namespace qdb
