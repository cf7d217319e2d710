#pragma once

#include "qdb/grover.hpp"
#include "qdb/oracle.hpp"
#include "qdb/schedule.hpp"
#include "qdb/sql/ir.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qdb::opt {

/// Per-operator summary the planner trades off: modeled latency, circuit
/// success probability, and approximation error (0 for search-backed exact
/// operators, an additive bound for estimation-backed ones).
struct OperatorProfile {
    double t_q_ns = 0.0;
    double p_q = 1.0;
    double eps_q = 0.0;
};

/// Numeric realizations of the symbolic per-operator depth terms; all are
/// gate-layer counts as functions of register widths.
struct DepthModel {
    double oracle_unit = 4.0;   // per rid qubit per conjunct
    double cmp_unit = 6.0;      // per value bit
    double pref_unit = 2.0;     // per prefix bit
    double prep_unit = 2.0;     // per vector component
    double load_unit = 4.0;     // per value bit
    double rot_depth = 1.0;
    double idx_unit = 4.0;      // per inner rid qubit
    double key_unit = 2.0;      // per key bit
    double t_readout_ns = 100.0;
    double min_iterations = 22.5; // minimum-finding cumulative budget factor

    double d_orc(int n, int conjuncts) const {
        return oracle_unit * n * std::max(1, conjuncts);
    }
    double d_diff(int n) const { return 2.0 * n + 1.0; }
    double d_cmp(int b) const { return cmp_unit * b; }
    double d_pref(int bits) const { return pref_unit * bits; }
    double d_prep(int d) const { return prep_unit * d; }
    double d_load(int b) const { return load_unit * b; }
    double d_idx(int n) const { return idx_unit * n; }
    double d_key(int b) const { return key_unit * b; }

    void apply_json_overrides(const std::string& json_text);
};

/// T_q = sum_k (max_{g in L_k} t_g + t_ctrl).
double estimate_time(const LayerSchedule& schedule, const DeviceModel& device);

/// P_q = prod_k (1 - sum eps_g) * exp(-t_k / T2_eff). Throws
/// LayerErrorOverflow when a layer's error mass reaches 1.
double estimate_success(const LayerSchedule& schedule, const DeviceModel& device);

/// E[T] = P_q * T_quantum + (1 - P_q) * T_classical.
double expected_runtime(double p_q, double t_quantum_ns, double t_classical_ns);

struct ClassicalCostModel {
    double c_tuple_ns = 100.0;

    double scan(std::uint64_t n) const { return c_tuple_ns * static_cast<double>(n); }
    double join(std::uint64_t n1, std::uint64_t n2) const {
        return c_tuple_ns * static_cast<double>(n1) * static_cast<double>(n2);
    }
};

double classical_cost(const sql::LogicalNode& node, const Catalog& catalog,
                      const ClassicalCostModel& model);

enum class OperatorKind {
    EqualityFilter,
    RangeFilter,
    PrefixFilter,
    Exists,
    EquiJoin,
    NonEquiJoin,
    SimilarityJoin,
    Min,
    Count,
    Sum,
    Avg,
    Sampling,
};

struct ProjectionParams {
    std::uint64_t n_domain = 0;  // rid space (inner table for joins)
    std::uint64_t m_marked = 1;
    std::uint64_t probes = 1;    // outer rows for joins, pairs for swap tests
    int value_bits = 8;
    int vector_dim = 4;
    double epsilon = 0.01;       // estimation precision
    std::uint64_t shots = 4;     // circuit calls charged per operator
    int conjuncts = 1;
};

/// Large-N latency projection from the symbolic depth formulas; used where
/// direct simulation is infeasible. Throws UnknownOperator.
double project_quantum_cost(OperatorKind kind, const ProjectionParams& params,
                            const DepthModel& depth, const DeviceModel& device);

// --------------------------------------------------------------------------
// Hybrid plans

enum class Binding { Quantum, Classical, Deferred };
const char* binding_name(Binding binding);

struct QuantumRealization {
    sql::QuantumAlg alg = sql::QuantumAlg::None;
    std::shared_ptr<PredicateOracle> oracle;  // filters, counting, sampling
    std::shared_ptr<QromLoader> loader;       // joins compile per-key oracles
    std::uint64_t k = 0;
    std::uint64_t shots = kDefaultShots;
    int phase_bits = 6;
    OperatorProfile profile;
    double transfer_ns = 0.0; // QROM load + reconciliation charge
};

struct PlanNode {
    const sql::LogicalNode* logical = nullptr;
    std::vector<std::unique_ptr<PlanNode>> children;
    Binding binding = Binding::Classical;
    std::optional<QuantumRealization> quantum;
    double classical_ns = 0.0;
    double quantum_expected_ns = 0.0;
    std::string note; // demotion reason or binding rationale
};

struct HybridPlan {
    sql::QuantumIR ir; // owns the logical nodes the plan references
    std::unique_ptr<PlanNode> root;
    std::vector<std::unique_ptr<PlanNode>> subqueries;
};

struct PlanPolicy {
    std::uint64_t default_shots = kDefaultShots;
    double deferred_band = 0.20;
    double queue_penalty_ns = 0.0; // live backlog signal for deferred binding
    int shot_cap_factor = 8;
    double t_load_ns = 1.0; // per row per bit
    int ae_phase_bits = 6;
    int count_phase_bits = 5;
    double latency_budget_ms = 1e9;
    int qubit_cap = kDefaultQubitCap;
};

/// Compiles circuits for eligible nodes, attaches profiles, and keeps the
/// classical realization alongside. Capacity misses demote to classical
/// with the reason recorded; they are never fatal.
HybridPlan lower_physical(sql::QuantumIR ir, const Catalog& catalog, const DeviceModel& device,
                          const DepthModel& depth, const ClassicalCostModel& classical,
                          const PlanPolicy& policy);

/// Chooses a binding per node from the expected-runtime comparison, or
/// defers the choice when both sides sit within the policy band.
void bind_plan(HybridPlan& plan, const PlanPolicy& policy);

/// lower_physical + bind_plan.
HybridPlan plan(sql::QuantumIR ir, const Catalog& catalog, const DeviceModel& device,
                const PlanPolicy& policy, const DepthModel& depth = {},
                const ClassicalCostModel& classical = {});

/// EXPLAIN rendering, one node per line:
///   <indent><op> [realization=...] [alg=...] [Tq=..ns Pq=.. eps=..] [fallback=classical]
std::string explain(const HybridPlan& plan);

// --------------------------------------------------------------------------
// Adaptive runtime policy

struct RuntimeFeedback {
    double observed_success = 1.0;
    std::uint64_t shots_used = 0;
    std::uint64_t initial_shots = 0;
    int variant_switches = 0;
    bool quality_ok = true;
    double elapsed_ms = 0.0;
};

struct AdaptationAction {
    enum class Kind { IncreaseShots, SwitchVariant, Fallback };
    Kind kind = Kind::Fallback;
    double factor = 2.0;
};

/// Escalation policy: under-performing success doubles the shot budget up
/// to the cap, then a robust variant, then the classical fallback. Returns
/// nullopt when the node meets its prediction.
std::optional<AdaptationAction> adapt(const RuntimeFeedback& feedback,
                                      const OperatorProfile& profile,
                                      const PlanPolicy& policy);

// --------------------------------------------------------------------------
// Crossover analysis

struct CrossoverConfig {
    std::uint64_t n_min = std::uint64_t{1} << 10;
    std::uint64_t n_max = std::uint64_t{1} << 40;
    enum class MRule { FixedOne, FixedSelectivity } m_rule = MRule::FixedOne;
    double selectivity = 0.02;
    std::uint64_t shots = 4;
    OperatorKind op = OperatorKind::EqualityFilter;
    int value_bits = 16;
    double tau_layer_ns = 0.0; // calibrated layer time; 0 = device mean
};

struct CrossoverRow {
    std::uint64_t n = 0;
    double classical_ns = 0.0;
    double quantum_expected_ns = 0.0;
    bool quantum_chosen = false;
};

struct CrossoverResult {
    std::vector<CrossoverRow> rows;
    std::optional<std::uint64_t> crossover_n; // empty: no crossover in range
};

/// Sweeps N over powers of two and finds the smallest N* whose expected
/// quantum runtime beats the classical baseline for every larger N.
CrossoverResult crossover_analysis(const DeviceModel& device, const DepthModel& depth,
                                   const ClassicalCostModel& classical,
                                   const CrossoverConfig& config);

/// CSV: header "N,classical_ns,quantum_expected_ns,chosen".
void write_crossover_csv(std::ostream& out, const CrossoverResult& result);

// --------------------------------------------------------------------------
// Calibration against simulator runs at small N

struct CalibrationPoint {
    std::uint64_t n = 0;
    double measured_ns = 0.0; // layered schedule of the executed circuit
    double fitted_ns = 0.0;   // depth-formula model with the fitted unit
};

struct CalibrationResult {
    double tau_layer_ns = 0.0; // fitted per-layer time of the depth model
    double c_tuple_ns = 0.0;   // classical per-tuple wall time
    std::vector<CalibrationPoint> points;
    double max_rel_err = 0.0;
};

/// Least-squares fit of the depth model's per-layer time on measured
/// amplified-filter circuits at N = n_min..n_max (powers of two), plus a
/// wall-clock fit of the classical per-tuple constant.
CalibrationResult calibrate_cost_model(const DeviceModel& device, const DepthModel& depth,
                                       std::uint64_t n_min = 16, std::uint64_t n_max = 1024,
                                       std::uint64_t seed = 17);

} // namespace qdb::opt
