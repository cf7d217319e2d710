#pragma once

#include "qdb/optimizer.hpp"
#include "qdb/sql/ir.hpp"
#include "qdb/storage.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qdb::exec {

struct TraceEntry {
    std::string node;
    std::string realization; // quantum | classical | deferred->... | quantum->fallback
    std::string alg;
    std::uint64_t shots_used = 0;
    std::vector<std::string> adaptations;
    std::string fallback_reason;
};

struct ResultSet {
    sql::Schema schema;
    std::vector<Row> rows;
    std::vector<std::uint64_t> rids; // per row, when the result is a rid set

    bool scalar = false;
    double scalar_value = 0.0;

    enum class Quality { Exact, Approximate };
    Quality quality = Quality::Exact;
    double error_bound = 0.0;

    std::vector<TraceEntry> trace;

    std::string to_table() const;
    std::string to_csv() const;
    std::string trace_text() const; // EXPLAIN ANALYZE style block
};

/// Dedup + classical recheck of measured rids; false positives are
/// dropped. Returns the verified rids in ascending order.
std::vector<std::uint64_t> reconcile(const std::map<std::uint64_t, std::uint64_t>& raw_hits,
                                     const Predicate& pred, const Table& table);

// Classical baseline operators; exact, also used as property-test oracles.
std::vector<std::uint64_t> classical_filter(const Table& table, const Predicate& pred);
double classical_sum(const Table& table, const std::string& column,
                     const std::vector<std::uint64_t>& rids);
std::optional<std::uint64_t> classical_min_rid(const Table& table, const std::string& column,
                                               const std::vector<std::uint64_t>& rids);

struct ExecutorOptions {
    std::uint64_t seed = 0;
    bool noisy = false;
    opt::PlanPolicy policy;
};

class Executor {
  public:
    Executor(const Catalog& catalog, const DeviceModel& device, ExecutorOptions options);

    /// Bottom-up plan execution. Deferred nodes bind at visit time using
    /// the live queue signal; quantum nodes run the adaptation loop and
    /// always complete through the classical fallback if necessary.
    ResultSet execute(const opt::HybridPlan& plan);

  private:
    struct Impl;
    const Catalog& catalog_;
    DeviceModel device_;
    ExecutorOptions options_;
};

} // namespace qdb::exec
