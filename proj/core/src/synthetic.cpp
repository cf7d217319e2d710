#include "qdb/synthetic.hpp"

#include "qdb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qdb {

namespace {

bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::uint64_t target_matches(double selectivity, std::uint64_t rows) {
    if (selectivity <= 0.0 || selectivity > 0.02) {
        raise(ErrorCode::InfeasibleSelectivity,
              "target selectivity " + std::to_string(selectivity) + " is outside (0, 0.02]");
    }
    const double exact = selectivity * static_cast<double>(rows);
    const auto m = static_cast<std::uint64_t>(std::llround(exact));
    if (m < 1) {
        raise(ErrorCode::InfeasibleSelectivity,
              "selectivity " + std::to_string(selectivity) + " selects no rows at N=" +
                  std::to_string(rows));
    }
    if (std::abs(static_cast<double>(m) - exact) / exact > 0.10) {
        raise(ErrorCode::InfeasibleSelectivity,
              "rounding to whole rows misses the target by more than 10%");
    }
    return m;
}

} // namespace

SyntheticResult generate_synthetic(Catalog& catalog, const std::string& name,
                                   const SyntheticSpec& spec, std::uint64_t seed) {
    if (!is_power_of_two(spec.rows)) {
        raise(ErrorCode::InvalidCounts, "synthetic row count must be a power of two");
    }
    if (spec.value_bits < 1 || spec.value_bits > 16) {
        raise(ErrorCode::SchemaMismatch, "value_bits must be 1..16");
    }
    std::mt19937_64 rng(seed);
    const std::uint64_t domain = std::uint64_t{1} << spec.value_bits;
    std::uniform_int_distribution<std::uint64_t> uniform(0, domain - 1);

    TableDef def;
    def.name = name;
    for (const auto& target : spec.targets) {
        def.columns.push_back({target.column, ColumnType::UInt, spec.value_bits, 0});
    }

    SyntheticResult result;
    result.table = name;
    std::vector<std::vector<std::uint64_t>> data(spec.targets.size());

    for (std::size_t t = 0; t < spec.targets.size(); ++t) {
        const auto& target = spec.targets[t];
        const std::uint64_t m = target_matches(target.selectivity, spec.rows);
        auto& column = data[t];
        column.resize(spec.rows);

        if (target.kind == SelectivityTarget::Kind::Eq) {
            const std::uint64_t constant = uniform(rng);
            for (auto& v : column) {
                do {
                    v = uniform(rng);
                } while (v == constant);
            }
            // Plant the constant at m distinct positions.
            std::vector<std::uint64_t> rids(spec.rows);
            for (std::uint64_t i = 0; i < spec.rows; ++i) {
                rids[i] = i;
            }
            for (std::uint64_t i = 0; i < m; ++i) {
                std::uniform_int_distribution<std::uint64_t> pick(i, spec.rows - 1);
                std::swap(rids[i], rids[pick(rng)]);
                column[rids[i]] = constant;
            }
            PlantedPredicate planted;
            planted.pred = Predicate::eq(target.column, static_cast<double>(constant));
            planted.match_count = m;
            planted.selectivity = static_cast<double>(m) / static_cast<double>(spec.rows);
            result.predicates.push_back(std::move(planted));
        } else {
            for (auto& v : column) {
                v = uniform(rng);
            }
            std::vector<std::uint64_t> sorted = column;
            std::sort(sorted.begin(), sorted.end());
            // Pick a window of m order statistics; duplicates at the window
            // boundary can inflate the true count, so verify and retry.
            const double goal = target.selectivity * static_cast<double>(spec.rows);
            bool accepted = false;
            for (int attempt = 0; attempt < 64 && !accepted; ++attempt) {
                std::uniform_int_distribution<std::uint64_t> start(0, spec.rows - m);
                const std::uint64_t s = start(rng);
                const std::uint64_t lo = sorted[s];
                const std::uint64_t hi = sorted[s + m - 1];
                const auto count = static_cast<std::uint64_t>(
                    std::upper_bound(sorted.begin(), sorted.end(), hi) -
                    std::lower_bound(sorted.begin(), sorted.end(), lo));
                if (std::abs(static_cast<double>(count) - goal) / goal <= 0.10) {
                    PlantedPredicate planted;
                    planted.pred = Predicate::range(target.column, static_cast<double>(lo),
                                                    static_cast<double>(hi));
                    planted.match_count = count;
                    planted.selectivity =
                        static_cast<double>(count) / static_cast<double>(spec.rows);
                    result.predicates.push_back(std::move(planted));
                    accepted = true;
                }
            }
            if (!accepted) {
                raise(ErrorCode::InfeasibleSelectivity,
                      "could not place a range window within 10% of the target on column '" +
                          target.column + "'");
            }
        }
    }

    Table& table = catalog.create_table(def);
    for (std::uint64_t rid = 0; rid < spec.rows; ++rid) {
        Row row;
        row.reserve(spec.targets.size());
        for (std::size_t t = 0; t < spec.targets.size(); ++t) {
            row.emplace_back(data[t][rid]);
        }
        table.append_row(row);
    }
    table.refresh_stats();
    return result;
}

} // namespace qdb
