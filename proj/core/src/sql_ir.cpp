#include "qdb/sql/ir.hpp"

#include "qdb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qdb::sql {

namespace {

using u64 = std::uint64_t;

u64 next_power_of_two(u64 n) {
    u64 p = 1;
    while (p < n) {
        p <<= 1;
    }
    return std::max<u64>(p, 2);
}

// Resolves a possibly qualified column reference against a schema.
const SchemaCol& resolve_column(const Schema& schema, const std::string& ref) {
    const SchemaCol* found = nullptr;
    for (const auto& col : schema) {
        const bool match =
            col.name == ref || (col.table + "." + col.name) == ref;
        if (match) {
            if (found != nullptr) {
                raise(ErrorCode::TypeMismatch, "ambiguous column reference '" + ref + "'");
            }
            found = &col;
        }
    }
    if (found == nullptr) {
        raise(ErrorCode::UnknownColumn, "cannot resolve column '" + ref + "'");
    }
    return *found;
}

struct LoweringContext {
    const Catalog& catalog;
    std::vector<std::unique_ptr<LogicalNode>>* subqueries;
};

std::unique_ptr<LogicalNode> lower_select(const SelectStmt& stmt, LoweringContext& ctx);

PredicateNode lower_pred(const PredExpr& expr, const Schema& schema, LoweringContext& ctx) {
    switch (expr.kind) {
        case PredExpr::Kind::Compare: {
            const SchemaCol& col = resolve_column(schema, expr.column);
            if (col.type == ColumnType::Vector) {
                raise(ErrorCode::TypeMismatch,
                      "cannot compare vector column '" + expr.column + "' with a scalar");
            }
            const std::string name = col.name;
            switch (expr.cmp) {
                case PredExpr::Cmp::Eq: {
                    if (col.type == ColumnType::UInt && expr.value != std::floor(expr.value)) {
                        raise(ErrorCode::TypeMismatch,
                              "non-integral equality constant on uint column '" + name + "'");
                    }
                    return Predicate::eq(name, expr.value);
                }
                case PredExpr::Cmp::Lt: return Predicate::less(name, expr.value, false);
                case PredExpr::Cmp::Le: return Predicate::less(name, expr.value, true);
                case PredExpr::Cmp::Gt: return Predicate::greater(name, expr.value, false);
                case PredExpr::Cmp::Ge: return Predicate::greater(name, expr.value, true);
            }
            break;
        }
        case PredExpr::Kind::Between: {
            const SchemaCol& col = resolve_column(schema, expr.column);
            if (col.type == ColumnType::Vector) {
                raise(ErrorCode::TypeMismatch, "BETWEEN needs a scalar column");
            }
            return Predicate::range(col.name, expr.low, expr.high);
        }
        case PredExpr::Kind::Like: {
            const SchemaCol& col = resolve_column(schema, expr.column);
            if (col.type != ColumnType::UInt) {
                raise(ErrorCode::TypeMismatch,
                      "LIKE prefix matching applies to uint-coded columns");
            }
            auto pred = Predicate::prefix_like(
                col.name, expr.pattern.substr(0, expr.pattern.size() - 1));
            auto copy = std::make_shared<Predicate>(*pred);
            copy->column_bits = col.bits;
            return copy;
        }
        case PredExpr::Kind::And: {
            return Predicate::conj({lower_pred(*expr.children[0], schema, ctx),
                                    lower_pred(*expr.children[1], schema, ctx)});
        }
        case PredExpr::Kind::Or: {
            return Predicate::disj({lower_pred(*expr.children[0], schema, ctx),
                                    lower_pred(*expr.children[1], schema, ctx)});
        }
        case PredExpr::Kind::Not:
            return Predicate::negate(lower_pred(*expr.children[0], schema, ctx));
        case PredExpr::Kind::Exists: {
            auto subplan = lower_select(*expr.subquery, ctx);
            auto exists = std::make_unique<LogicalNode>();
            exists->op = LogicalOp::Exists;
            exists->schema = {{"exists", ColumnType::UInt, 1, ""}};
            exists->children.push_back(std::move(subplan));
            const int id = static_cast<int>(ctx.subqueries->size());
            ctx.subqueries->push_back(std::move(exists));
            return Predicate::exists(id);
        }
    }
    raise(ErrorCode::UnsupportedPredicate, "unhandled predicate expression");
}

Schema scan_schema(const Table& table) {
    Schema schema;
    for (std::size_t i = 0; i < table.column_count(); ++i) {
        const auto& def = table.column_at(static_cast<int>(i)).def;
        schema.push_back({def.name, def.type, def.bits, table.name()});
    }
    return schema;
}

std::unique_ptr<LogicalNode> make_scan(const std::string& table, LoweringContext& ctx) {
    const Table& t = ctx.catalog.table(table);
    auto node = std::make_unique<LogicalNode>();
    node->op = LogicalOp::Scan;
    node->table = table;
    node->schema = scan_schema(t);
    return node;
}

std::unique_ptr<LogicalNode> lower_select(const SelectStmt& stmt, LoweringContext& ctx) {
    auto plan = make_scan(stmt.table, ctx);

    if (stmt.join) {
        auto right = make_scan(stmt.join->table, ctx);
        auto join = std::make_unique<LogicalNode>();
        switch (stmt.join->kind) {
            case JoinSpec::Kind::Equi: join->op = LogicalOp::EquiJoin; break;
            case JoinSpec::Kind::NonEqui: join->op = LogicalOp::NonEquiJoin; break;
            case JoinSpec::Kind::Similarity: join->op = LogicalOp::SimilarityJoin; break;
        }
        join->join_cmp = stmt.join->cmp;
        join->sim_threshold = stmt.join->threshold;

        // Joined schema: qualified column names from both sides.
        Schema joined;
        for (const auto& col : plan->schema) {
            joined.push_back(col);
        }
        for (const auto& col : right->schema) {
            joined.push_back(col);
        }
        const SchemaCol& left_col = resolve_column(plan->schema, stmt.join->left_col);
        const SchemaCol& right_col = resolve_column(right->schema, stmt.join->right_col);
        if (stmt.join->kind == JoinSpec::Kind::Similarity) {
            if (left_col.type != ColumnType::Vector || right_col.type != ColumnType::Vector) {
                raise(ErrorCode::TypeMismatch, "similarity joins need vector columns");
            }
        } else if (left_col.type == ColumnType::Vector ||
                   right_col.type == ColumnType::Vector) {
            raise(ErrorCode::TypeMismatch, "join comparisons need scalar columns");
        }
        join->left_col = left_col.name;
        join->right_col = right_col.name;
        join->schema = std::move(joined);
        join->children.push_back(std::move(plan));
        join->children.push_back(std::move(right));
        plan = std::move(join);
    }

    if (stmt.where) {
        auto filter = std::make_unique<LogicalNode>();
        filter->op = LogicalOp::Filter;
        filter->predicate = lower_pred(*stmt.where, plan->schema, ctx);
        filter->schema = plan->schema;
        filter->children.push_back(std::move(plan));
        plan = std::move(filter);
    }

    if (stmt.sample_k) {
        auto sample = std::make_unique<LogicalNode>();
        sample->op = LogicalOp::Sample;
        sample->sample_k = *stmt.sample_k;
        sample->schema = plan->schema;
        sample->children.push_back(std::move(plan));
        plan = std::move(sample);
    }

    if (!stmt.aggregates.empty()) {
        if (stmt.aggregates.size() > 1 || stmt.star || stmt.rid_only ||
            !stmt.columns.empty()) {
            raise(ErrorCode::UnsupportedFeature,
                  "exactly one aggregate per query, without plain columns");
        }
        const AggSpec& spec = stmt.aggregates.front();
        auto agg = std::make_unique<LogicalNode>();
        agg->op = LogicalOp::Aggregate;
        agg->agg = spec.kind == AggSpec::Kind::Sum   ? AggKind::Sum
                   : spec.kind == AggSpec::Kind::Avg ? AggKind::Avg
                   : spec.kind == AggSpec::Kind::Min ? AggKind::Min
                                                     : AggKind::Count;
        if (!spec.star) {
            const SchemaCol& col = resolve_column(plan->schema, spec.column);
            if (col.type == ColumnType::Vector) {
                raise(ErrorCode::TypeMismatch, "aggregates need scalar columns");
            }
            agg->agg_column = col.name;
        }
        agg->schema = {{"agg", ColumnType::Real, 0, ""}};
        agg->children.push_back(std::move(plan));
        return agg;
    }

    auto project = std::make_unique<LogicalNode>();
    project->op = LogicalOp::Project;
    project->project_rid = stmt.rid_only && stmt.columns.empty() && !stmt.star;
    if (!stmt.star) {
        for (const auto& ref : stmt.columns) {
            project->projection.push_back(resolve_column(plan->schema, ref).name);
        }
    }
    if (stmt.star) {
        project->schema = plan->schema;
    } else if (project->project_rid) {
        project->schema = {{"rid", ColumnType::UInt, 16, ""}};
    } else {
        for (const auto& name : project->projection) {
            project->schema.push_back(resolve_column(plan->schema, name));
        }
        if (stmt.rid_only) {
            project->project_rid = true;
            project->schema.insert(project->schema.begin(), {"rid", ColumnType::UInt, 16, ""});
        }
    }
    project->children.push_back(std::move(plan));
    return project;
}

} // namespace

const char* logical_op_name(LogicalOp op) {
    switch (op) {
        case LogicalOp::Scan: return "Scan";
        case LogicalOp::Filter: return "Filter";
        case LogicalOp::Project: return "Project";
        case LogicalOp::EquiJoin: return "EquiJoin";
        case LogicalOp::NonEquiJoin: return "NonEquiJoin";
        case LogicalOp::SimilarityJoin: return "SimilarityJoin";
        case LogicalOp::Aggregate: return "Aggregate";
        case LogicalOp::Exists: return "Exists";
        case LogicalOp::Sample: return "Sample";
    }
    return "?";
}

const char* quantum_alg_name(QuantumAlg alg) {
    switch (alg) {
        case QuantumAlg::None: return "none";
        case QuantumAlg::GroverSearch: return "grover-search";
        case QuantumAlg::GroverThresholdOracle: return "grover-threshold-oracle";
        case QuantumAlg::GroverPrefixOracle: return "grover-prefix-oracle";
        case QuantumAlg::GroverIndexProbe: return "grover-index-probe";
        case QuantumAlg::GroverComparisonProbe: return "grover-comparison-probe";
        case QuantumAlg::SwapTest: return "swap-test";
        case QuantumAlg::DurrHoyerMin: return "durr-hoyer-min";
        case QuantumAlg::AmplitudeEstimationCount: return "amplitude-estimation-count";
        case QuantumAlg::AmplitudeEstimationSum: return "amplitude-estimation-sum";
        case QuantumAlg::QuantumCounting: return "quantum-counting";
        case QuantumAlg::GroverSampling: return "grover-filtered-sampling";
    }
    return "?";
}

LogicalIR lower_logical(const Statement& stmt, const Catalog& catalog) {
    if (stmt.kind != Statement::Kind::Select) {
        raise(ErrorCode::UnsupportedFeature, "only SELECT statements lower to plans");
    }
    LogicalIR ir;
    LoweringContext ctx{catalog, &ir.subqueries};
    ir.root = lower_select(*stmt.select, ctx);
    return ir;
}

double estimate_selectivity(const Predicate& pred, const Table& table) {
    switch (pred.kind) {
        case Predicate::Kind::Eq: {
            const Column& col = table.column(pred.column);
            if (!col.stats.valid || col.stats.distinct_estimate == 0) {
                return 0.01;
            }
            if (pred.value < col.stats.min || pred.value > col.stats.max) {
                return 0.0;
            }
            return 1.0 / static_cast<double>(col.stats.distinct_estimate);
        }
        case Predicate::Kind::Range: {
            const Column& col = table.column(pred.column);
            if (!col.stats.valid) {
                return 0.3;
            }
            const double span = col.stats.max - col.stats.min + 1.0;
            const double lo = std::max(pred.low + (pred.low_open ? 1.0 : 0.0), col.stats.min);
            const double hi = std::min(pred.high - (pred.high_open ? 1.0 : 0.0), col.stats.max);
            if (lo > hi) {
                return 0.0;
            }
            return std::clamp((hi - lo + 1.0) / span, 0.0, 1.0);
        }
        case Predicate::Kind::PrefixLike:
            return std::pow(2.0, -pred.prefix_bits);
        case Predicate::Kind::And: {
            double s = 1.0;
            for (const auto& c : pred.children) {
                s *= estimate_selectivity(*c, table);
            }
            return s;
        }
        case Predicate::Kind::Or: {
            double miss = 1.0;
            for (const auto& c : pred.children) {
                miss *= 1.0 - estimate_selectivity(*c, table);
            }
            return 1.0 - miss;
        }
        case Predicate::Kind::Not:
            return 1.0 - estimate_selectivity(*pred.children.at(0), table);
        case Predicate::Kind::Exists:
            return 0.5;
        case Predicate::Kind::ConstBool:
            return pred.const_value ? 1.0 : 0.0;
    }
    return 0.5;
}

namespace {

// --- rewrite rules -------------------------------------------------------

bool fuse_filters(LogicalNode* node) {
    bool changed = false;
    for (auto& child : node->children) {
        changed = fuse_filters(child.get()) || changed;
    }
    if (node->op == LogicalOp::Filter && !node->children.empty() &&
        node->child(0)->op == LogicalOp::Filter) {
        auto inner = std::move(node->children[0]);
        node->predicate = Predicate::conj({node->predicate, inner->predicate});
        node->children[0] = std::move(inner->children[0]);
        changed = true;
    }
    return changed;
}

bool columns_covered(const Predicate& pred, const Schema& schema) {
    std::set<std::string> cols;
    collect_columns(pred, cols);
    for (const auto& name : cols) {
        const bool present =
            std::any_of(schema.begin(), schema.end(), [&](const SchemaCol& c) {
                return c.name == name || c.table + "." + c.name == name;
            });
        if (!present) {
            return false;
        }
    }
    return true;
}

bool push_down_below_joins(LogicalNode* node) {
    bool changed = false;
    for (auto& child : node->children) {
        changed = push_down_below_joins(child.get()) || changed;
    }
    if (node->op != LogicalOp::Filter || node->children.empty()) {
        return changed;
    }
    LogicalNode* join = node->child(0);
    if (join->op != LogicalOp::EquiJoin && join->op != LogicalOp::NonEquiJoin &&
        join->op != LogicalOp::SimilarityJoin) {
        return changed;
    }
    auto conjuncts = split_conjuncts(node->predicate);
    std::vector<PredicateNode> stay;
    for (const auto& conjunct : conjuncts) {
        int side = -1;
        if (columns_covered(*conjunct, join->child(0)->schema)) {
            side = 0;
        } else if (columns_covered(*conjunct, join->child(1)->schema)) {
            side = 1;
        }
        if (side < 0) {
            stay.push_back(conjunct);
            continue;
        }
        auto pushed = std::make_unique<LogicalNode>();
        pushed->op = LogicalOp::Filter;
        pushed->predicate = conjunct;
        pushed->schema = join->child(side)->schema;
        pushed->children.push_back(std::move(join->children[side]));
        join->children[side] = std::move(pushed);
        changed = true;
    }
    if (stay.size() != conjuncts.size()) {
        if (stay.empty()) {
            node->predicate = Predicate::constant(true);
        } else if (stay.size() == 1) {
            node->predicate = stay.front();
        } else {
            node->predicate = Predicate::conj(std::move(stay));
        }
        changed = true;
    }
    return changed;
}

// Drops Filter(TRUE) wrappers left behind by a full pushdown.
bool drop_trivial_filters(std::unique_ptr<LogicalNode>& node) {
    bool changed = false;
    for (auto& child : node->children) {
        changed = drop_trivial_filters(child) || changed;
    }
    if (node->op == LogicalOp::Filter && node->predicate &&
        node->predicate->kind == Predicate::Kind::ConstBool && node->predicate->const_value) {
        auto child = std::move(node->children[0]);
        node = std::move(child);
        return true;
    }
    return changed;
}

const Table* single_source_table(const LogicalNode* node, const Catalog& catalog) {
    while (node != nullptr) {
        if (node->op == LogicalOp::Scan) {
            return &catalog.table(node->table);
        }
        if (node->children.size() != 1) {
            return nullptr;
        }
        node = node->child(0);
    }
    return nullptr;
}

bool reorder_conjuncts(LogicalNode* node, const Catalog& catalog) {
    bool changed = false;
    for (auto& child : node->children) {
        changed = reorder_conjuncts(child.get(), catalog) || changed;
    }
    if (node->op != LogicalOp::Filter || node->predicate == nullptr ||
        node->predicate->kind != Predicate::Kind::And) {
        return changed;
    }
    const Table* table = single_source_table(node, catalog);
    if (table == nullptr) {
        return changed;
    }
    auto conjuncts = split_conjuncts(node->predicate);
    std::vector<std::pair<double, PredicateNode>> ranked;
    for (const auto& c : conjuncts) {
        ranked.emplace_back(estimate_selectivity(*c, *table), c);
    }
    const bool sorted = std::is_sorted(ranked.begin(), ranked.end(),
                                       [](const auto& a, const auto& b) {
                                           return a.first < b.first;
                                       });
    if (sorted) {
        return changed;
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<PredicateNode> ordered;
    ordered.reserve(ranked.size());
    for (auto& [sel, pred] : ranked) {
        ordered.push_back(std::move(pred));
    }
    node->predicate = Predicate::conj(std::move(ordered));
    return true;
}

} // namespace

const std::vector<RewriteRule>& default_rewrite_rules() {
    static const std::vector<RewriteRule> rules = {
        {"filter-fusion",
         [](LogicalIR& ir, const Catalog&) { return fuse_filters(ir.root.get()); }},
        {"predicate-pushdown",
         [](LogicalIR& ir, const Catalog&) {
             bool changed = push_down_below_joins(ir.root.get());
             changed = drop_trivial_filters(ir.root) || changed;
             return changed;
         }},
        {"conjunct-reorder",
         [](LogicalIR& ir, const Catalog& catalog) {
             return reorder_conjuncts(ir.root.get(), catalog);
         }},
    };
    return rules;
}

void apply_rewrites(LogicalIR& ir, const Catalog& catalog,
                    const std::vector<RewriteRule>& rules) {
    for (auto& sub : ir.subqueries) {
        LogicalIR wrapper;
        wrapper.root = std::move(sub);
        apply_rewrites(wrapper, catalog, rules);
        sub = std::move(wrapper.root);
    }
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 32) {
        changed = false;
        for (const auto& rule : rules) {
            changed = rule.apply(ir, catalog) || changed;
        }
    }
}

namespace {

bool predicate_quantum_codable(const Predicate& pred, const Table& table,
                               std::string& reason) {
    std::set<std::string> cols;
    collect_columns(pred, cols);
    if (cols.empty() && pred.kind != Predicate::Kind::ConstBool) {
        reason = "predicate references no columns";
        return false;
    }
    for (const auto& name : cols) {
        if (!table.has_column(name)) {
            reason = "column '" + name + "' not on the scanned table";
            return false;
        }
        const Column& col = table.column(name);
        if (col.def.type != ColumnType::UInt) {
            reason = "column '" + name + "' is not uint-coded";
            return false;
        }
        if (col.def.bits > 16) {
            reason = "column '" + name + "' exceeds 16 bits";
            return false;
        }
    }
    return true;
}

QuantumAlg filter_alg(const Predicate& pred) {
    const Predicate* node = &pred;
    while (node->kind == Predicate::Kind::Not && !node->children.empty()) {
        node = node->children[0].get();
    }
    switch (node->kind) {
        case Predicate::Kind::Eq: return QuantumAlg::GroverSearch;
        case Predicate::Kind::Range: return QuantumAlg::GroverThresholdOracle;
        case Predicate::Kind::PrefixLike: return QuantumAlg::GroverPrefixOracle;
        default: return QuantumAlg::GroverSearch; // compound oracle
    }
}

void annotate(LogicalNode* node, const Catalog& catalog, const DeviceModel& device) {
    for (auto& child : node->children) {
        annotate(child.get(), catalog, device);
    }
    QuantumAnnotation& q = node->qinfo;
    q = QuantumAnnotation{};

    switch (node->op) {
        case LogicalOp::Scan:
        case LogicalOp::Project:
            q.demotion_reason = "classical only";
            return;
        case LogicalOp::Filter: {
            const Table* table = single_source_table(node, catalog);
            if (table == nullptr) {
                q.demotion_reason = "filter above a join is reconciled classically";
                return;
            }
            std::string reason;
            if (!predicate_quantum_codable(*node->predicate, *table, reason)) {
                q.demotion_reason = reason;
                return;
            }
            if (table->row_count() == 0) {
                q.demotion_reason = "empty table";
                return;
            }
            q.padded_domain = next_power_of_two(table->row_count());
            int n = 0;
            while ((u64{1} << n) < q.padded_domain) {
                ++n;
            }
            if (n >= device.qubit_cap) {
                q.demotion_reason = "capacity";
                return;
            }
            q.eligible = true;
            q.alg = filter_alg(*node->predicate);
            const double sel = estimate_selectivity(*node->predicate, *table);
            q.m_estimate = static_cast<u64>(
                std::llround(sel * static_cast<double>(table->row_count())));
            return;
        }
        case LogicalOp::EquiJoin:
        case LogicalOp::NonEquiJoin: {
            const Table* right = single_source_table(node->child(1), catalog);
            if (right == nullptr) {
                q.demotion_reason = "inner side is not a base table";
                return;
            }
            if (!right->has_column(node->right_col) ||
                right->column(node->right_col).def.type != ColumnType::UInt) {
                q.demotion_reason = "join key is not uint-coded";
                return;
            }
            if (right->row_count() == 0) {
                q.demotion_reason = "empty inner table";
                return;
            }
            q.padded_domain = next_power_of_two(right->row_count());
            q.eligible = true;
            q.alg = node->op == LogicalOp::EquiJoin ? QuantumAlg::GroverIndexProbe
                                                    : QuantumAlg::GroverComparisonProbe;
            const auto distinct =
                std::max<u64>(1, right->column(node->right_col).stats.distinct_estimate);
            q.m_estimate = std::max<u64>(1, right->row_count() / distinct);
            return;
        }
        case LogicalOp::SimilarityJoin:
            q.eligible = true;
            q.alg = QuantumAlg::SwapTest;
            return;
        case LogicalOp::Aggregate: {
            const Table* table = single_source_table(node, catalog);
            if (table == nullptr) {
                q.demotion_reason = "aggregate above a join is classical";
                return;
            }
            switch (node->agg) {
                case AggKind::Min: {
                    if (!table->has_column(node->agg_column) ||
                        table->column(node->agg_column).def.type != ColumnType::UInt) {
                        q.demotion_reason = "minimum search needs a uint column";
                        return;
                    }
                    q.padded_domain = next_power_of_two(table->row_count());
                    q.eligible = true;
                    q.alg = QuantumAlg::DurrHoyerMin;
                    return;
                }
                case AggKind::Count: {
                    q.padded_domain = next_power_of_two(std::max<u64>(table->row_count(), 1));
                    q.eligible = true;
                    q.alg = QuantumAlg::AmplitudeEstimationCount;
                    return;
                }
                case AggKind::Sum:
                case AggKind::Avg: {
                    if (node->agg_column.empty()) {
                        q.demotion_reason = "SUM/AVG need a column";
                        return;
                    }
                    q.padded_domain = next_power_of_two(std::max<u64>(table->row_count(), 1));
                    q.eligible = true;
                    q.alg = QuantumAlg::AmplitudeEstimationSum;
                    return;
                }
            }
            return;
        }
        case LogicalOp::Exists:
        case LogicalOp::Sample: {
            // Counting/sampling run over the underlying filter's oracle (a
            // tautology oracle when the child is a bare scan).
            const Table* table = single_source_table(node, catalog);
            if (table == nullptr || table->row_count() == 0) {
                q.demotion_reason = "needs a base-table source";
                return;
            }
            const LogicalNode* below = node->child(0);
            while (below->op == LogicalOp::Project || below->op == LogicalOp::Sample) {
                below = below->child(0);
            }
            if (below->op == LogicalOp::Filter) {
                std::string reason;
                if (!predicate_quantum_codable(*below->predicate, *table, reason)) {
                    q.demotion_reason = reason;
                    return;
                }
                q.m_estimate = static_cast<u64>(
                    std::llround(estimate_selectivity(*below->predicate, *table) *
                                 static_cast<double>(table->row_count())));
            } else if (below->op != LogicalOp::Scan) {
                q.demotion_reason = "source is not a scan or filter";
                return;
            } else {
                q.m_estimate = table->row_count();
            }
            q.padded_domain = next_power_of_two(table->row_count());
            q.eligible = true;
            q.alg = node->op == LogicalOp::Exists ? QuantumAlg::QuantumCounting
                                                  : QuantumAlg::GroverSampling;
            return;
        }
    }
}

void to_string_rec(const LogicalNode* node, int depth, std::ostringstream& out) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << logical_op_name(node->op);
    if (node->op == LogicalOp::Scan) {
        out << " " << node->table;
    }
    if (node->predicate) {
        out << " [" << predicate_to_string(*node->predicate) << "]";
    }
    if (node->qinfo.eligible) {
        out << " {" << quantum_alg_name(node->qinfo.alg) << "}";
    }
    out << '\n';
    for (const auto& child : node->children) {
        to_string_rec(child.get(), depth + 1, out);
    }
}

} // namespace

QuantumIR lower_quantum(LogicalIR ir, const Catalog& catalog, const DeviceModel& device) {
    annotate(ir.root.get(), catalog, device);
    for (auto& sub : ir.subqueries) {
        annotate(sub.get(), catalog, device);
    }
    return ir;
}

std::string logical_to_string(const LogicalIR& ir) {
    std::ostringstream out;
    to_string_rec(ir.root.get(), 0, out);
    for (std::size_t i = 0; i < ir.subqueries.size(); ++i) {
        out << "subquery #" << i << ":\n";
        to_string_rec(ir.subqueries[i].get(), 1, out);
    }
    return out.str();
}

} // namespace qdb::sql
