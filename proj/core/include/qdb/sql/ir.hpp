#pragma once

#include "qdb/device.hpp"
#include "qdb/predicate.hpp"
#include "qdb/sql/ast.hpp"
#include "qdb/storage.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qdb::sql {

enum class LogicalOp {
    Scan,
    Filter,
    Project,
    EquiJoin,
    NonEquiJoin,
    SimilarityJoin,
    Aggregate,
    Exists,
    Sample,
};

const char* logical_op_name(LogicalOp op);

enum class AggKind { Sum, Avg, Count, Min };

struct SchemaCol {
    std::string name; // qualified as table.column after joins
    ColumnType type = ColumnType::UInt;
    int bits = 0;
    std::string table;
};
using Schema = std::vector<SchemaCol>;

/// Candidate quantum realizations of eligible operators.
enum class QuantumAlg {
    None,
    GroverSearch,
    GroverThresholdOracle,
    GroverPrefixOracle,
    GroverIndexProbe,
    GroverComparisonProbe,
    SwapTest,
    DurrHoyerMin,
    AmplitudeEstimationCount,
    AmplitudeEstimationSum,
    QuantumCounting,
    GroverSampling,
};

const char* quantum_alg_name(QuantumAlg alg);

/// Eligibility annotation added by the quantum-extension pass. Eligible
/// nodes always retain their classical realization.
struct QuantumAnnotation {
    bool eligible = false;
    QuantumAlg alg = QuantumAlg::None;
    std::string demotion_reason;
    std::uint64_t padded_domain = 0;          // rid space, next power of two
    std::optional<std::uint64_t> m_estimate;  // matched-row estimate from stats
};

struct LogicalNode {
    LogicalOp op = LogicalOp::Scan;
    std::vector<std::unique_ptr<LogicalNode>> children;

    std::string table;                    // Scan
    PredicateNode predicate;              // Filter / Exists-resolved subtrees
    std::vector<std::string> projection;  // Project
    bool project_rid = false;
    AggKind agg = AggKind::Count;         // Aggregate
    std::string agg_column;
    std::string left_col, right_col;      // joins
    PredExpr::Cmp join_cmp = PredExpr::Cmp::Eq;
    double sim_threshold = 0.0;           // SimilarityJoin
    std::uint64_t sample_k = 0;           // Sample

    Schema schema;
    QuantumAnnotation qinfo;

    LogicalNode* child(std::size_t i) const { return children.at(i).get(); }
};

/// Logical plan plus the lowered EXISTS subqueries referenced by
/// Predicate::subquery_id.
struct LogicalIR {
    std::unique_ptr<LogicalNode> root;
    std::vector<std::unique_ptr<LogicalNode>> subqueries;
};

/// After lower_quantum the tree carries eligibility annotations; the type
/// stays the same by design (annotations live in the nodes).
using QuantumIR = LogicalIR;

/// Name resolution and schema typing. Throws UnknownTable, UnknownColumn,
/// TypeMismatch.
LogicalIR lower_logical(const Statement& stmt, const Catalog& catalog);

struct RewriteRule {
    std::string name;
    // Applies once; returns true when the tree changed.
    std::function<bool(LogicalIR&, const Catalog&)> apply;
};

/// Default catalog: filter fusion, predicate pushdown below joins,
/// conjunct reordering by ascending estimated selectivity.
const std::vector<RewriteRule>& default_rewrite_rules();

/// Fixpoint application of the rule set.
void apply_rewrites(LogicalIR& ir, const Catalog& catalog,
                    const std::vector<RewriteRule>& rules = default_rewrite_rules());

/// Marks quantum-eligible nodes with their candidate algorithm and padded
/// domain; ineligible nodes record the reason.
QuantumIR lower_quantum(LogicalIR ir, const Catalog& catalog, const DeviceModel& device);

/// Uniformity-based selectivity estimate of a predicate against a table's
/// catalog stats, in [0, 1].
double estimate_selectivity(const Predicate& pred, const Table& table);

/// Debug rendering of the logical tree (one node per line).
std::string logical_to_string(const LogicalIR& ir);

} // namespace qdb::sql
