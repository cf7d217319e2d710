#include "qdb/executor.hpp"

#include "qdb/amplitude.hpp"
#include "qdb/errors.hpp"
#include "qdb/grover.hpp"
#include "qdb/minfind.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace qdb::exec {

namespace {

using opt::Binding;
using opt::HybridPlan;
using opt::PlanNode;
using sql::AggKind;
using sql::LogicalNode;
using sql::LogicalOp;
using u64 = std::uint64_t;

std::string value_to_string(const Value& v) {
    if (const auto* u = std::get_if<u64>(&v)) {
        return std::to_string(*u);
    }
    if (const auto* d = std::get_if<double>(&v)) {
        std::ostringstream out;
        out.precision(10);
        out << *d;
        return out.str();
    }
    const Vec& vec = std::get<Vec>(v);
    std::ostringstream out;
    out.precision(10);
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (i) {
            out << ';';
        }
        out << vec[i];
    }
    return out.str();
}

// Materialized intermediate relation flowing between operators.
struct Relation {
    sql::Schema schema;
    std::vector<Row> rows;
    std::vector<u64> rids; // source rids for single-table chains, else empty
    const Table* base = nullptr;
};

Relation materialize_scan(const Table& table) {
    Relation rel;
    rel.base = &table;
    for (std::size_t c = 0; c < table.column_count(); ++c) {
        const auto& def = table.column_at(static_cast<int>(c)).def;
        rel.schema.push_back({def.name, def.type, def.bits, table.name()});
    }
    rel.rows.reserve(table.row_count());
    for (u64 rid = 0; rid < table.row_count(); ++rid) {
        Row row;
        row.reserve(table.column_count());
        for (std::size_t c = 0; c < table.column_count(); ++c) {
            const auto& col = table.column_at(static_cast<int>(c));
            switch (col.def.type) {
                case ColumnType::UInt: row.emplace_back(col.u[rid]); break;
                case ColumnType::Real: row.emplace_back(col.r[rid]); break;
                case ColumnType::Vector: row.emplace_back(col.v[rid]); break;
            }
        }
        rel.rows.push_back(std::move(row));
        rel.rids.push_back(rid);
    }
    return rel;
}

int schema_index(const sql::Schema& schema, const std::string& name) {
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].name == name || schema[i].table + "." + schema[i].name == name) {
            return static_cast<int>(i);
        }
    }
    raise(ErrorCode::UnknownColumn, "executor cannot resolve column '" + name + "'");
}

double numeric_value(const Value& v) {
    if (const auto* u = std::get_if<u64>(&v)) {
        return static_cast<double>(*u);
    }
    if (const auto* d = std::get_if<double>(&v)) {
        return *d;
    }
    raise(ErrorCode::TypeMismatch, "expected a scalar value");
}

double normalized_overlap_sq(const Vec& a, const Vec& b) {
    double ip = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ip += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return ip * ip / (na * nb);
}

bool compare_values(double l, sql::PredExpr::Cmp cmp, double r) {
    switch (cmp) {
        case sql::PredExpr::Cmp::Eq: return l == r;
        case sql::PredExpr::Cmp::Lt: return l < r;
        case sql::PredExpr::Cmp::Le: return l <= r;
        case sql::PredExpr::Cmp::Gt: return l > r;
        case sql::PredExpr::Cmp::Ge: return l >= r;
    }
    return false;
}

} // namespace

std::vector<std::uint64_t> reconcile(const std::map<std::uint64_t, std::uint64_t>& raw_hits,
                                     const Predicate& pred, const Table& table) {
    std::vector<u64> verified;
    for (const auto& [rid, count] : raw_hits) {
        (void)count;
        if (rid >= table.row_count()) {
            continue; // padding sentinel
        }
        const bool ok = eval_predicate(pred, [&](const std::string& col) {
            return table.numeric_at(col, rid);
        });
        if (ok) {
            verified.push_back(rid);
        }
    }
    std::sort(verified.begin(), verified.end());
    verified.erase(std::unique(verified.begin(), verified.end()), verified.end());
    return verified;
}

std::vector<std::uint64_t> classical_filter(const Table& table, const Predicate& pred) {
    std::vector<u64> out;
    for (u64 rid = 0; rid < table.row_count(); ++rid) {
        if (eval_predicate(pred, [&](const std::string& col) {
                return table.numeric_at(col, rid);
            })) {
            out.push_back(rid);
        }
    }
    return out;
}

double classical_sum(const Table& table, const std::string& column,
                     const std::vector<std::uint64_t>& rids) {
    double sum = 0.0;
    for (u64 rid : rids) {
        sum += table.numeric_at(column, rid);
    }
    return sum;
}

std::optional<std::uint64_t> classical_min_rid(const Table& table, const std::string& column,
                                               const std::vector<std::uint64_t>& rids) {
    std::optional<u64> best;
    for (u64 rid : rids) {
        if (!best || table.numeric_at(column, rid) < table.numeric_at(column, *best)) {
            best = rid;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

struct Executor::Impl {
    const Catalog& catalog;
    const DeviceModel& device;
    const ExecutorOptions& options;
    const HybridPlan& plan;
    std::vector<TraceEntry>* trace;
    NoiseModel noise;
    std::chrono::steady_clock::time_point started;
    u64 node_counter = 0;
    std::map<int, bool> exists_cache;
    ResultSet* result;

    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         started)
            .count();
    }

    bool over_budget() const { return elapsed_ms() > options.policy.latency_budget_ms; }

    NoiseModel node_noise(u64 round) {
        NoiseModel n = noise;
        n.seed = mix_seed(options.seed, (node_counter << 20) + round);
        return n;
    }

    TraceEntry& push_trace(const PlanNode& node, const char* realization) {
        trace->push_back(TraceEntry{});
        TraceEntry& entry = trace->back();
        entry.node = logical_op_name(node.logical->op);
        if (node.logical->op == LogicalOp::Scan) {
            entry.node += " " + node.logical->table;
        }
        entry.realization = realization;
        if (node.quantum) {
            entry.alg = quantum_alg_name(node.quantum->alg);
        }
        return entry;
    }

    Binding effective_binding(const PlanNode& node, TraceEntry& entry) {
        Binding binding = node.binding;
        if (binding == Binding::Deferred) {
            // Live signal: queue penalty charged against the quantum side.
            const double q = node.quantum_expected_ns + options.policy.queue_penalty_ns;
            binding = q < node.classical_ns ? Binding::Quantum : Binding::Classical;
            entry.realization =
                std::string("deferred->") + opt::binding_name(binding);
        }
        if (binding == Binding::Quantum && over_budget()) {
            binding = Binding::Classical;
            entry.realization = "quantum->fallback";
            entry.fallback_reason = "latency budget exceeded";
        }
        return binding;
    }

    bool resolve_exists(int subquery_id) {
        auto it = exists_cache.find(subquery_id);
        if (it != exists_cache.end()) {
            return it->second;
        }
        const PlanNode& sub = *plan.subqueries.at(static_cast<std::size_t>(subquery_id));
        const Relation rel = eval(sub);
        bool value = false;
        if (rel.rows.size() == 1 && rel.schema.size() == 1 && rel.schema[0].name == "exists") {
            value = numeric_value(rel.rows[0][0]) != 0.0;
        } else {
            value = !rel.rows.empty();
        }
        exists_cache.emplace(subquery_id, value);
        return value;
    }

    PredicateNode resolved_predicate(const PredicateNode& pred) {
        return qdb::resolve_exists(pred,
                                   [this](int id) { return resolve_exists(id); });
    }

    // ---- quantum filter with reconciliation rounds and adaptation -------

    std::vector<u64> quantum_filter_rids(const PlanNode& node, const PredicateNode& pred,
                                         const Table& table, TraceEntry& entry,
                                         bool& fell_back) {
        fell_back = false;
        const auto& quantum = *node.quantum;
        std::shared_ptr<PredicateOracle> oracle = quantum.oracle;
        if (!oracle) {
            oracle = std::make_shared<PredicateOracle>(
                compile_oracle(pred, *quantum.loader, quantum.loader->rid_bits(),
                               std::max(quantum.loader->max_width(), 1),
                               options.policy.qubit_cap));
        }
        const u64 n_domain = oracle->domain();

        // Matched-count estimate: the optimizer's hint, else counting.
        u64 m_hat = 0;
        bool m_from_counting = false;
        if (oracle->marked_count_hint && *oracle->marked_count_hint > 0) {
            m_hat = std::min(*oracle->marked_count_hint, n_domain);
        } else {
            m_hat = quantum_count(*oracle, options.policy.count_phase_bits,
                                  std::max<u64>(64, quantum.shots / 16), node_noise(7777),
                                  options.policy.qubit_cap);
            m_from_counting = true;
            entry.adaptations.push_back("counting M=" + std::to_string(m_hat));
            if (m_hat == 0) {
                // Exact empty set after classical confirmation.
                const auto confirmed = classical_filter(table, *pred);
                if (confirmed.empty()) {
                    entry.adaptations.push_back("zero-matches confirmed classically");
                    return {};
                }
                entry.adaptations.push_back("zero-estimate disproved classically");
                fell_back = true;
                return confirmed;
            }
        }

        u64 k = grover_iterations(n_domain, std::max<u64>(m_hat, 1));
        u64 round_shots = quantum.shots;
        const u64 initial_shots = quantum.shots;
        std::set<u64> verified;
        int stall = 0;
        int variant_switches = 0;
        u64 shots_total = 0;

        Circuit batch = assemble_grover_circuit(*oracle, k);
        u64 batch_k = k;
        for (u64 round = 0; round < 64; ++round) {
            if (over_budget()) {
                entry.fallback_reason = "latency budget exceeded mid-node";
                fell_back = true;
                break;
            }
            if (batch_k != k) {
                batch = assemble_grover_circuit(*oracle, k);
                batch_k = k;
            }
            const auto counts =
                sample_counts(batch, round_shots, node_noise(round), options.policy.qubit_cap);
            shots_total += round_shots;
            u64 verified_shots = 0;
            bool grew = false;
            for (const auto& [rid, count] : counts) {
                if (oracle->classical_predicate(rid)) {
                    verified_shots += count;
                    grew = verified.insert(rid).second || grew;
                }
            }
            stall = grew ? 0 : stall + 1;
            // Stopping rule: the estimate is reached and a round added
            // nothing new, or three consecutive stalls.
            if ((verified.size() >= m_hat && !grew) || stall >= 3) {
                break;
            }

            const double observed =
                static_cast<double>(verified_shots) / static_cast<double>(round_shots);
            opt::RuntimeFeedback feedback;
            feedback.observed_success = observed;
            feedback.shots_used = round_shots;
            feedback.initial_shots = initial_shots;
            feedback.variant_switches = variant_switches;
            feedback.elapsed_ms = elapsed_ms();
            const auto action = opt::adapt(feedback, quantum.profile, options.policy);
            if (!action) {
                continue;
            }
            switch (action->kind) {
                case opt::AdaptationAction::Kind::IncreaseShots:
                    round_shots = static_cast<u64>(static_cast<double>(round_shots) *
                                                   action->factor);
                    entry.adaptations.push_back("increase-shots x" +
                                                std::to_string(action->factor));
                    break;
                case opt::AdaptationAction::Kind::SwitchVariant:
                    // Robust variant: fewer amplification rounds, more shots.
                    k = std::max<u64>(1, k / 2);
                    round_shots = initial_shots *
                                  static_cast<u64>(options.policy.shot_cap_factor);
                    ++variant_switches;
                    entry.adaptations.push_back("switch-variant k=" + std::to_string(k));
                    break;
                case opt::AdaptationAction::Kind::Fallback:
                    entry.adaptations.push_back("fallback");
                    entry.fallback_reason = "adaptation exhausted";
                    fell_back = true;
                    round = 64;
                    break;
            }
        }
        entry.shots_used += shots_total;

        if (fell_back) {
            const auto exact = classical_filter(table, *pred);
            return exact;
        }
        // Reconciliation guarantees soundness; completeness comes from the
        // stopping rule (plus M-hat when counting supplied it).
        (void)m_from_counting;
        return std::vector<u64>(verified.begin(), verified.end());
    }

    // ---- node evaluation -------------------------------------------------

    Relation eval(const PlanNode& node) {
        ++node_counter;
        switch (node.logical->op) {
            case LogicalOp::Scan: {
                TraceEntry& entry = push_trace(node, "classical");
                (void)entry;
                return materialize_scan(catalog.table(node.logical->table));
            }
            case LogicalOp::Filter: return eval_filter(node);
            case LogicalOp::Project: return eval_project(node);
            case LogicalOp::EquiJoin:
            case LogicalOp::NonEquiJoin: return eval_join(node);
            case LogicalOp::SimilarityJoin: return eval_similarity(node);
            case LogicalOp::Aggregate: return eval_aggregate(node);
            case LogicalOp::Exists: return eval_exists(node);
            case LogicalOp::Sample: return eval_sample(node);
        }
        raise(ErrorCode::UnknownOperator, "unhandled plan node");
    }

    Relation filtered_relation(const Relation& input, const std::vector<u64>& rids) {
        Relation out;
        out.schema = input.schema;
        out.base = input.base;
        std::set<u64> keep(rids.begin(), rids.end());
        for (std::size_t i = 0; i < input.rows.size(); ++i) {
            if (keep.count(input.rids[i])) {
                out.rows.push_back(input.rows[i]);
                out.rids.push_back(input.rids[i]);
            }
        }
        return out;
    }

    Relation eval_filter(const PlanNode& node) {
        Relation input = eval(*node.children[0]);
        TraceEntry& entry = push_trace(node, opt::binding_name(node.binding));
        const PredicateNode pred = resolved_predicate(node.logical->predicate);
        const Binding binding = effective_binding(node, entry);

        if (binding == Binding::Quantum && input.base != nullptr) {
            bool fell_back = false;
            const auto rids =
                quantum_filter_rids(node, pred, *input.base, entry, fell_back);
            if (fell_back) {
                entry.realization = "quantum->fallback";
            }
            return filtered_relation(input, rids);
        }
        // Classical realization.
        Relation out;
        out.schema = input.schema;
        out.base = input.base;
        for (std::size_t i = 0; i < input.rows.size(); ++i) {
            const bool keep = eval_predicate(*pred, [&](const std::string& col) {
                return numeric_value(input.rows[i][static_cast<std::size_t>(
                    schema_index(input.schema, col))]);
            });
            if (keep) {
                out.rows.push_back(input.rows[i]);
                if (!input.rids.empty()) {
                    out.rids.push_back(input.rids[i]);
                }
            }
        }
        return out;
    }

    Relation eval_project(const PlanNode& node) {
        Relation input = eval(*node.children[0]);
        push_trace(node, "classical");
        const LogicalNode& logical = *node.logical;
        Relation out;
        out.schema = logical.schema;
        out.base = input.base;
        out.rids = input.rids;
        if (logical.projection.empty() && !logical.project_rid) {
            out.rows = std::move(input.rows);
            return out;
        }
        for (std::size_t i = 0; i < input.rows.size(); ++i) {
            Row row;
            if (logical.project_rid) {
                row.emplace_back(input.rids.empty() ? static_cast<u64>(i) : input.rids[i]);
            }
            for (const auto& name : logical.projection) {
                row.push_back(
                    input.rows[i][static_cast<std::size_t>(schema_index(input.schema, name))]);
            }
            out.rows.push_back(std::move(row));
        }
        return out;
    }

    Relation eval_join(const PlanNode& node) {
        Relation left = eval(*node.children[0]);
        Relation right = eval(*node.children[1]);
        TraceEntry& entry = push_trace(node, opt::binding_name(node.binding));
        const Binding binding = effective_binding(node, entry);
        const LogicalNode& logical = *node.logical;

        Relation out;
        out.schema = logical.schema;
        const int left_idx = schema_index(left.schema, logical.left_col);
        const int right_idx = schema_index(right.schema, logical.right_col);

        const bool probe_quantum =
            binding == Binding::Quantum && right.base != nullptr && node.quantum &&
            node.quantum->loader != nullptr;
        if (probe_quantum) {
            // One amplified probe of the inner rid space per outer row.
            std::map<u64, std::vector<u64>> probe_cache;
            const Table& inner = *right.base;
            const auto distinct =
                std::max<u64>(1, inner.column(logical.right_col).stats.distinct_estimate);
            for (std::size_t l = 0; l < left.rows.size(); ++l) {
                if (over_budget()) {
                    entry.fallback_reason = "latency budget exceeded mid-join";
                    entry.realization = "quantum->fallback";
                    return classical_join(left, right, logical, left_idx, right_idx);
                }
                const double key = numeric_value(left.rows[l][left_idx]);
                const u64 key_int = static_cast<u64>(key);
                std::vector<u64> inner_rids;
                const auto cached = probe_cache.find(key_int);
                if (cached != probe_cache.end()) {
                    inner_rids = cached->second;
                } else {
                    PredicateNode pred;
                    if (logical.op == LogicalOp::EquiJoin) {
                        pred = Predicate::eq(logical.right_col, key);
                    } else {
                        // outer CMP inner: probe the inner side that satisfies it
                        switch (logical.join_cmp) {
                            case sql::PredExpr::Cmp::Le:
                                pred = Predicate::greater(logical.right_col, key, true);
                                break;
                            case sql::PredExpr::Cmp::Lt:
                                pred = Predicate::greater(logical.right_col, key, false);
                                break;
                            case sql::PredExpr::Cmp::Ge:
                                pred = Predicate::less(logical.right_col, key, true);
                                break;
                            case sql::PredExpr::Cmp::Gt:
                                pred = Predicate::less(logical.right_col, key, false);
                                break;
                            case sql::PredExpr::Cmp::Eq:
                                pred = Predicate::eq(logical.right_col, key);
                                break;
                        }
                    }
                    try {
                        const auto oracle = compile_oracle(
                            pred, *node.quantum->loader, node.quantum->loader->rid_bits(),
                            std::max(node.quantum->loader->max_width(), 1),
                            options.policy.qubit_cap);
                        GroverOptions gopts;
                        gopts.shots = std::max<u64>(128, node.quantum->shots / 8);
                        gopts.noise = node_noise(1000 + l);
                        gopts.qubit_cap = options.policy.qubit_cap;
                        if (logical.op == LogicalOp::EquiJoin) {
                            gopts.m_est = std::max<u64>(1, inner.row_count() / distinct);
                        }
                        inner_rids = equijoin_probe(oracle, gopts);
                        entry.shots_used += gopts.shots;
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::CapacityExceeded) {
                            throw;
                        }
                        entry.adaptations.push_back("probe capacity fallback");
                        inner_rids = classical_filter(inner, *pred);
                    }
                    probe_cache.emplace(key_int, inner_rids);
                }
                for (u64 r : inner_rids) {
                    Row row = left.rows[l];
                    for (const auto& v : right.rows[r]) {
                        row.push_back(v);
                    }
                    out.rows.push_back(std::move(row));
                }
            }
            return out;
        }
        return classical_join(left, right, logical, left_idx, right_idx);
    }

    Relation classical_join(const Relation& left, const Relation& right,
                            const LogicalNode& logical, int left_idx, int right_idx) {
        Relation out;
        out.schema = logical.schema;
        for (const auto& lrow : left.rows) {
            const double lv = numeric_value(lrow[static_cast<std::size_t>(left_idx)]);
            for (const auto& rrow : right.rows) {
                const double rv = numeric_value(rrow[static_cast<std::size_t>(right_idx)]);
                if (compare_values(lv, logical.join_cmp, rv)) {
                    Row row = lrow;
                    for (const auto& v : rrow) {
                        row.push_back(v);
                    }
                    out.rows.push_back(std::move(row));
                }
            }
        }
        return out;
    }

    Relation eval_similarity(const PlanNode& node) {
        Relation left = eval(*node.children[0]);
        Relation right = eval(*node.children[1]);
        TraceEntry& entry = push_trace(node, opt::binding_name(node.binding));
        const Binding binding = effective_binding(node, entry);
        const LogicalNode& logical = *node.logical;

        Relation out;
        out.schema = logical.schema;
        const int li = schema_index(left.schema, logical.left_col);
        const int ri = schema_index(right.schema, logical.right_col);
        const u64 shots = node.quantum ? node.quantum->shots : options.policy.default_shots;

        for (std::size_t l = 0; l < left.rows.size(); ++l) {
            for (std::size_t r = 0; r < right.rows.size(); ++r) {
                const Vec& x = std::get<Vec>(left.rows[l][static_cast<std::size_t>(li)]);
                const Vec& y = std::get<Vec>(right.rows[r][static_cast<std::size_t>(ri)]);
                double estimate = 0.0;
                if (binding == Binding::Quantum) {
                    estimate =
                        swap_test(x, y, shots, node_noise(l * right.rows.size() + r),
                                  options.policy.qubit_cap)
                            .estimate;
                    entry.shots_used += shots;
                } else {
                    estimate = normalized_overlap_sq(x, y);
                }
                if (estimate > logical.sim_threshold) {
                    Row row = left.rows[l];
                    for (const auto& v : right.rows[r]) {
                        row.push_back(v);
                    }
                    out.rows.push_back(std::move(row));
                }
            }
        }
        if (binding == Binding::Quantum) {
            result->quality = ResultSet::Quality::Approximate;
            result->error_bound =
                std::max(result->error_bound, 1.5 / std::sqrt(static_cast<double>(shots)));
        }
        return out;
    }

    Relation eval_aggregate(const PlanNode& node) {
        Relation input = eval(*node.children[0]);
        TraceEntry& entry = push_trace(node, opt::binding_name(node.binding));
        const Binding binding = effective_binding(node, entry);
        const LogicalNode& logical = *node.logical;

        Relation out;
        out.schema = logical.schema;
        double value = 0.0;
        const bool can_quantum = binding == Binding::Quantum && input.base != nullptr;

        switch (logical.agg) {
            case AggKind::Count: {
                if (can_quantum && node.quantum && node.quantum->oracle) {
                    const u64 m_hat = quantum_count(
                        *node.quantum->oracle, node.quantum->phase_bits,
                        node.quantum->shots, node_noise(1), options.policy.qubit_cap);
                    entry.shots_used += node.quantum->shots;
                    value = static_cast<double>(m_hat);
                    result->quality = ResultSet::Quality::Approximate;
                    result->error_bound = std::max(
                        result->error_bound,
                        static_cast<double>(node.quantum->oracle->domain()) *
                            ae_error_bound(node.quantum->phase_bits));
                } else {
                    value = static_cast<double>(input.rows.size());
                }
                break;
            }
            case AggKind::Sum:
            case AggKind::Avg: {
                if (can_quantum) {
                    value = quantum_sum(node, input, entry);
                } else {
                    const int idx = schema_index(input.schema, logical.agg_column);
                    for (const auto& row : input.rows) {
                        value += numeric_value(row[static_cast<std::size_t>(idx)]);
                    }
                }
                if (logical.agg == AggKind::Avg) {
                    value = input.rows.empty()
                                ? 0.0
                                : value / static_cast<double>(input.rows.size());
                }
                break;
            }
            case AggKind::Min: {
                if (input.rows.empty()) {
                    out.rows.push_back({0.0});
                    return out;
                }
                if (can_quantum) {
                    value = quantum_min(node, input, entry);
                } else {
                    const int idx = schema_index(input.schema, logical.agg_column);
                    double best = numeric_value(input.rows[0][static_cast<std::size_t>(idx)]);
                    for (const auto& row : input.rows) {
                        best = std::min(best,
                                        numeric_value(row[static_cast<std::size_t>(idx)]));
                    }
                    value = best;
                }
                break;
            }
        }
        out.rows.push_back({value});
        return out;
    }

    double quantum_sum(const PlanNode& node, const Relation& input, TraceEntry& entry) {
        const LogicalNode& logical = *node.logical;
        const Table& table = *input.base;
        const Column& col = table.column(logical.agg_column);
        const u64 padded = node.logical->qinfo.padded_domain;

        // Affine shift to [0, V_max]; rows outside the child subset load 0.
        const double shift = std::min(col.stats.min, 0.0);
        const double v_max = std::max(col.stats.max - shift, 1e-12);
        std::vector<double> values(padded, 0.0);
        for (std::size_t i = 0; i < input.rids.size(); ++i) {
            values[input.rids[i]] = table.numeric_at(logical.agg_column, input.rids[i]) - shift;
        }
        const auto prep = build_sum_state_prep(values, v_max);
        const int phase_bits = node.quantum ? node.quantum->phase_bits : 6;
        const u64 shots = node.quantum ? node.quantum->shots : 256;
        const auto est = amplitude_estimate(prep.circuit, prep.good_qubit, phase_bits, shots,
                                            node_noise(2), options.policy.qubit_cap);
        entry.shots_used += shots;
        const double scale = static_cast<double>(padded) * v_max;
        const double sum_shifted = scale * est.a_hat;
        const double bound = scale * ae_error_bound(phase_bits);
        result->quality = ResultSet::Quality::Approximate;
        const double unshift =
            shift * static_cast<double>(input.rids.size());
        double node_bound = bound;
        if (logical.agg == AggKind::Avg && !input.rids.empty()) {
            node_bound = bound / static_cast<double>(input.rids.size());
        }
        result->error_bound = std::max(result->error_bound, node_bound);
        return sum_shifted + unshift;
    }

    double quantum_min(const PlanNode& node, const Relation& input, TraceEntry& entry) {
        const LogicalNode& logical = *node.logical;
        const Table& table = *input.base;
        const Column& col = table.column(logical.agg_column);
        const u64 padded = node.logical->qinfo.padded_domain;
        const u64 sentinel = (u64{1} << col.def.bits) - 1;

        std::vector<u64> values(padded, sentinel);
        std::set<u64> subset(input.rids.begin(), input.rids.end());
        for (u64 rid : input.rids) {
            values[rid] = table.uint_at(table.column_index(logical.agg_column), rid);
        }
        MinFindOptions mopts;
        mopts.seed = mix_seed(options.seed, node_counter);
        mopts.noise = noise;
        mopts.qubit_cap = options.policy.qubit_cap;
        MinFindResult found;
        bool searched = false;
        try {
            found = durr_hoyer_min(values, col.def.bits, mopts);
            searched = true;
            entry.shots_used += found.grover_iterations_used * mopts.round_shots;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::CapacityExceeded) {
                throw;
            }
            entry.adaptations.push_back("capacity fallback");
        }
        // Classical verification over the candidate trail plus a final
        // verification scan keeps MIN exact regardless of noise.
        double best = std::numeric_limits<double>::infinity();
        if (searched && subset.count(found.min_rid)) {
            best = static_cast<double>(found.min_value);
        }
        for (u64 rid : found.candidate_trail) {
            if (subset.count(rid)) {
                best = std::min(best, static_cast<double>(values[rid]));
            }
        }
        bool corrected = false;
        for (u64 rid : input.rids) {
            const double v = table.numeric_at(logical.agg_column, rid);
            if (v < best) {
                best = v;
                corrected = true;
            }
        }
        if (corrected) {
            entry.adaptations.push_back("verification scan corrected the incumbent");
        }
        return best;
    }

    Relation eval_exists(const PlanNode& node) {
        TraceEntry& entry = push_trace(node, opt::binding_name(node.binding));
        const Binding binding = effective_binding(node, entry);
        bool value = false;
        if (binding == Binding::Quantum && node.quantum && node.quantum->oracle) {
            const u64 m_hat =
                quantum_count(*node.quantum->oracle, node.quantum->phase_bits,
                              node.quantum->shots, node_noise(3), options.policy.qubit_cap);
            entry.shots_used += node.quantum->shots;
            if (m_hat > 0) {
                value = true;
            } else {
                // Exactness needs a classical confirmation of emptiness.
                const Relation child = eval(*node.children[0]);
                value = !child.rows.empty();
                if (value) {
                    entry.adaptations.push_back("zero-estimate disproved classically");
                }
            }
        } else {
            const Relation child = eval(*node.children[0]);
            value = !child.rows.empty();
        }
        Relation out;
        out.schema = {{"exists", ColumnType::UInt, 1, ""}};
        out.rows.push_back({static_cast<u64>(value ? 1 : 0)});
        return out;
    }

    Relation eval_sample(const PlanNode& node) {
        Relation input = eval(*node.children[0]);
        TraceEntry& entry = push_trace(node, opt::binding_name(node.binding));
        effective_binding(node, entry);
        const u64 k = node.logical->sample_k;
        Relation out;
        out.schema = input.schema;
        out.base = input.base;
        if (input.rows.size() <= k) {
            out.rows = std::move(input.rows);
            out.rids = std::move(input.rids);
            return out;
        }
        // Seeded reservoir over the (already validated) input rows.
        std::mt19937_64 rng(mix_seed(options.seed, 0x5a5a + node_counter));
        std::vector<std::size_t> indices(input.rows.size());
        for (std::size_t i = 0; i < indices.size(); ++i) {
            indices[i] = i;
        }
        for (u64 i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, indices.size() - 1);
            std::swap(indices[i], indices[pick(rng)]);
        }
        indices.resize(k);
        std::sort(indices.begin(), indices.end());
        for (std::size_t i : indices) {
            out.rows.push_back(input.rows[i]);
            if (!input.rids.empty()) {
                out.rids.push_back(input.rids[i]);
            }
        }
        return out;
    }
};

Executor::Executor(const Catalog& catalog, const DeviceModel& device, ExecutorOptions options)
    : catalog_(catalog), device_(device), options_(std::move(options)) {}

ResultSet Executor::execute(const opt::HybridPlan& plan) {
    ResultSet result;
    NoiseModel noise = options_.noisy ? NoiseModel::from_device(device_, options_.seed)
                                      : NoiseModel::disabled(options_.seed);
    Impl impl{catalog_,       device_, options_,
              plan,           &result.trace, noise,
              std::chrono::steady_clock::now(), 0, {}, &result};
    const Relation rel = impl.eval(*plan.root);
    result.schema = rel.schema;
    result.rows = rel.rows;
    result.rids = rel.rids;
    if (plan.root->logical->op == LogicalOp::Aggregate && rel.rows.size() == 1 &&
        rel.rows[0].size() == 1) {
        result.scalar = true;
        result.scalar_value = numeric_value(rel.rows[0][0]);
    }
    return result;
}

std::string ResultSet::to_table() const {
    std::ostringstream out;
    std::vector<std::size_t> widths;
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header;
    for (const auto& col : schema) {
        header.push_back(col.name);
        widths.push_back(col.name.size());
    }
    for (const auto& row : rows) {
        std::vector<std::string> line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line.push_back(value_to_string(row[i]));
            if (i < widths.size()) {
                widths[i] = std::max(widths[i], line.back().size());
            }
        }
        cells.push_back(std::move(line));
    }
    auto emit_row = [&](const std::vector<std::string>& line) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            out << (i ? " | " : "");
            out << line[i] << std::string(widths[i] - line[i].size(), ' ');
        }
        out << '\n';
    };
    emit_row(header);
    std::size_t total = 0;
    for (std::size_t w : widths) {
        total += w + 3;
    }
    out << std::string(total > 3 ? total - 3 : total, '-') << '\n';
    for (const auto& line : cells) {
        emit_row(line);
    }
    if (quality == Quality::Approximate) {
        out << "-- approximate; error bound " << error_bound << '\n';
    }
    return out.str();
}

std::string ResultSet::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        out << (i ? "," : "") << schema[i].name;
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << value_to_string(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string ResultSet::trace_text() const {
    std::ostringstream out;
    for (const auto& entry : trace) {
        out << entry.node << " [" << entry.realization << "]";
        if (!entry.alg.empty()) {
            out << " alg=" << entry.alg;
        }
        if (entry.shots_used > 0) {
            out << " shots=" << entry.shots_used;
        }
        for (const auto& a : entry.adaptations) {
            out << " {" << a << "}";
        }
        if (!entry.fallback_reason.empty()) {
            out << " fallback: " << entry.fallback_reason;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace qdb::exec
