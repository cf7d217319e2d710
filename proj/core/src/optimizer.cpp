#include "qdb/optimizer.hpp"

#include "qdb/amplitude.hpp"
#include "qdb/errors.hpp"
#include "qdb/minfind.hpp"
#include "qdb/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace qdb::opt {

namespace {

using sql::LogicalNode;
using sql::LogicalOp;
using sql::QuantumAlg;
using u64 = std::uint64_t;

int log2_of(u64 power_of_two) {
    int n = 0;
    while ((u64{1} << n) < power_of_two) {
        ++n;
    }
    return n;
}

Circuit compute_only(const Circuit& circuit) {
    Circuit out(circuit.n_qubits);
    for (const auto& g : circuit.gates) {
        if (g.role == GateRole::Compute) {
            out.append(g);
        }
    }
    return out;
}

double mean_layer_time_ns(const DeviceModel& device) {
    double sum = 0.0;
    for (const auto& [kind, t] : device.gate_time_ns) {
        sum += t;
    }
    const double mean =
        device.gate_time_ns.empty() ? 30.0 : sum / static_cast<double>(device.gate_time_ns.size());
    return mean + device.t_ctrl_ns;
}

double mean_gate_error(const DeviceModel& device) {
    if (device.gate_error.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& [kind, eps] : device.gate_error) {
        sum += eps;
    }
    return sum / static_cast<double>(device.gate_error.size());
}

} // namespace

void DepthModel::apply_json_overrides(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) {
        raise(ErrorCode::ParseError, "depth model overrides are not valid JSON");
    }
    oracle_unit = j.value("oracle_unit", oracle_unit);
    cmp_unit = j.value("cmp_unit", cmp_unit);
    pref_unit = j.value("pref_unit", pref_unit);
    prep_unit = j.value("prep_unit", prep_unit);
    load_unit = j.value("load_unit", load_unit);
    rot_depth = j.value("rot_depth", rot_depth);
    idx_unit = j.value("idx_unit", idx_unit);
    key_unit = j.value("key_unit", key_unit);
    t_readout_ns = j.value("t_readout_ns", t_readout_ns);
    min_iterations = j.value("min_iterations", min_iterations);
}

double estimate_time(const LayerSchedule& schedule, const DeviceModel& device) {
    double total = 0.0;
    for (const auto& kinds : schedule.layer_kinds) {
        double layer = 0.0;
        for (GateKind kind : kinds) {
            layer = std::max(layer, device.time_for(kind));
        }
        total += layer + device.t_ctrl_ns;
    }
    return total;
}

double estimate_success(const LayerSchedule& schedule, const DeviceModel& device) {
    double p = 1.0;
    for (const auto& kinds : schedule.layer_kinds) {
        double eps_sum = 0.0;
        double t_k = 0.0;
        for (GateKind kind : kinds) {
            eps_sum += device.error_for(kind);
            t_k = std::max(t_k, device.time_for(kind));
        }
        if (eps_sum >= 1.0) {
            raise(ErrorCode::LayerErrorOverflow,
                  "layer error mass reaches 1; circuit is infeasible on this device");
        }
        p *= (1.0 - eps_sum) * std::exp(-t_k / device.t2_eff_ns);
    }
    return p;
}

double expected_runtime(double p_q, double t_quantum_ns, double t_classical_ns) {
    return p_q * t_quantum_ns + (1.0 - p_q) * t_classical_ns;
}

namespace {

u64 estimate_rows(const LogicalNode& node, const Catalog& catalog) {
    switch (node.op) {
        case LogicalOp::Scan:
            return catalog.table(node.table).row_count();
        case LogicalOp::Filter: {
            const u64 input = estimate_rows(*node.child(0), catalog);
            const Table* table = nullptr;
            const LogicalNode* scan = node.child(0);
            while (scan != nullptr && scan->op != LogicalOp::Scan) {
                scan = scan->children.empty() ? nullptr : scan->child(0);
            }
            if (scan != nullptr) {
                table = &catalog.table(scan->table);
            }
            const double sel =
                table != nullptr ? sql::estimate_selectivity(*node.predicate, *table) : 0.5;
            return static_cast<u64>(std::ceil(sel * static_cast<double>(input)));
        }
        case LogicalOp::EquiJoin: {
            const u64 n1 = estimate_rows(*node.child(0), catalog);
            const u64 n2 = estimate_rows(*node.child(1), catalog);
            return std::max<u64>(1, n1 * std::max<u64>(1, n2 / std::max<u64>(1, n2)));
        }
        case LogicalOp::NonEquiJoin:
        case LogicalOp::SimilarityJoin: {
            const u64 n1 = estimate_rows(*node.child(0), catalog);
            const u64 n2 = estimate_rows(*node.child(1), catalog);
            return std::max<u64>(1, (n1 * n2) / 4);
        }
        case LogicalOp::Aggregate:
        case LogicalOp::Exists:
            return 1;
        case LogicalOp::Sample:
            return std::min<u64>(node.sample_k, estimate_rows(*node.child(0), catalog));
        case LogicalOp::Project:
            return estimate_rows(*node.child(0), catalog);
    }
    return 1;
}

} // namespace

double classical_cost(const sql::LogicalNode& node, const Catalog& catalog,
                      const ClassicalCostModel& model) {
    switch (node.op) {
        case LogicalOp::Scan:
            return model.scan(catalog.table(node.table).row_count());
        case LogicalOp::Filter:
        case LogicalOp::Sample:
        case LogicalOp::Project:
            return model.scan(estimate_rows(*node.child(0), catalog));
        case LogicalOp::EquiJoin:
        case LogicalOp::NonEquiJoin:
        case LogicalOp::SimilarityJoin:
            return model.join(estimate_rows(*node.child(0), catalog),
                              estimate_rows(*node.child(1), catalog));
        case LogicalOp::Aggregate:
        case LogicalOp::Exists:
            return model.scan(estimate_rows(*node.child(0), catalog));
    }
    return 0.0;
}

double project_quantum_cost(OperatorKind kind, const ProjectionParams& params,
                            const DepthModel& depth, const DeviceModel& device) {
    const int n = log2_of(std::max<u64>(params.n_domain, 2));
    const double root_nm = std::sqrt(static_cast<double>(params.n_domain) /
                                     static_cast<double>(std::max<u64>(params.m_marked, 1)));
    double layers = 0.0;
    double calls = static_cast<double>(params.shots);
    switch (kind) {
        case OperatorKind::EqualityFilter:
        case OperatorKind::Sampling:
            layers = (depth.d_orc(n, params.conjuncts) + depth.d_diff(n)) * root_nm;
            break;
        case OperatorKind::RangeFilter:
            layers = (depth.d_cmp(params.value_bits) + depth.d_diff(n)) * root_nm;
            break;
        case OperatorKind::PrefixFilter:
            layers = (depth.d_pref(params.value_bits) + depth.d_diff(n)) * root_nm;
            break;
        case OperatorKind::Exists:
            layers = (depth.d_orc(n, params.conjuncts) + depth.d_diff(n)) *
                     std::sqrt(static_cast<double>(params.n_domain));
            break;
        case OperatorKind::EquiJoin:
            layers = (depth.d_idx(n) + depth.d_key(params.value_bits) + depth.d_diff(n)) *
                     std::sqrt(static_cast<double>(params.n_domain));
            calls *= static_cast<double>(params.probes);
            break;
        case OperatorKind::NonEquiJoin:
            layers = (depth.d_cmp(params.value_bits) + depth.d_diff(n)) *
                     std::sqrt(static_cast<double>(params.n_domain));
            calls *= static_cast<double>(params.probes);
            break;
        case OperatorKind::SimilarityJoin: {
            const int q = log2_of(std::max<u64>(params.vector_dim, 2));
            layers = 2.0 * depth.d_prep(params.vector_dim) + static_cast<double>(q);
            calls *= static_cast<double>(params.probes);
            break;
        }
        case OperatorKind::Min:
            layers = (depth.d_cmp(params.value_bits) + depth.d_diff(n)) * depth.min_iterations *
                     std::sqrt(static_cast<double>(params.n_domain));
            break;
        case OperatorKind::Count:
            layers = (depth.d_orc(n, params.conjuncts) + depth.d_diff(n)) / params.epsilon;
            break;
        case OperatorKind::Sum:
        case OperatorKind::Avg:
            layers = (depth.d_load(params.value_bits) + depth.rot_depth + depth.d_diff(n)) /
                     params.epsilon;
            break;
        default:
            raise(ErrorCode::UnknownOperator, "no projection formula for this operator");
    }
    return calls * (layers * mean_layer_time_ns(device) + depth.t_readout_ns);
}

const char* binding_name(Binding binding) {
    switch (binding) {
        case Binding::Quantum: return "quantum";
        case Binding::Classical: return "classical";
        case Binding::Deferred: return "deferred";
    }
    return "?";
}

namespace {

struct PhysicalContext {
    const Catalog& catalog;
    const DeviceModel& device;
    const DepthModel& depth;
    const ClassicalCostModel& classical;
    const PlanPolicy& policy;
};

const Table* source_table(const LogicalNode* node, const Catalog& catalog) {
    while (node != nullptr) {
        if (node->op == LogicalOp::Scan) {
            return &catalog.table(node->table);
        }
        node = node->children.empty() ? nullptr : node->child(0);
    }
    return nullptr;
}

// Profile of a single compiled circuit: compute-time from the layered
// schedule with loader gates excluded (they are charged as transfer), and
// success probability over the full circuit.
OperatorProfile profile_circuit(const Circuit& circuit, const PhysicalContext& ctx) {
    OperatorProfile profile;
    const auto compute_sched = schedule_layers(compute_only(circuit), ctx.device);
    profile.t_q_ns = estimate_time(compute_sched, ctx.device);
    const auto full_sched = schedule_layers(circuit, ctx.device);
    profile.p_q = estimate_success(full_sched, ctx.device);
    return profile;
}

void realize_filter_like(PlanNode& plan, const LogicalNode& node, const PhysicalContext& ctx,
                         sql::QuantumAlg alg) {
    const Table* table = source_table(&node, ctx.catalog);
    const int n = log2_of(node.qinfo.padded_domain);
    auto loader =
        std::make_shared<QromLoader>(QromLoader::from_table(*table, n));
    PredicateNode pred = node.predicate;
    if (node.op == LogicalOp::Sample || node.op == LogicalOp::Exists ||
        node.op == LogicalOp::Aggregate) {
        // These may sit above a filter (their oracle) or a bare scan
        // (tautology oracle over the real rows).
        const LogicalNode* below = node.child(0);
        while (below->op == LogicalOp::Project) {
            below = below->child(0);
        }
        pred = below->op == LogicalOp::Filter ? below->predicate : Predicate::constant(true);
    }
    QuantumRealization quantum;
    quantum.alg = alg;
    quantum.loader = loader;
    quantum.oracle = std::make_shared<PredicateOracle>(
        compile_oracle(pred, *loader, n, std::max(loader->max_width(), 1), ctx.policy.qubit_cap));
    quantum.oracle->marked_count_hint = node.qinfo.m_estimate;
    quantum.shots = ctx.policy.default_shots;
    quantum.k = grover_iterations(node.qinfo.padded_domain,
                                  std::max<u64>(node.qinfo.m_estimate.value_or(1), 1));
    const Circuit batch = assemble_grover_circuit(*quantum.oracle, quantum.k);
    if (batch.n_qubits > ctx.policy.qubit_cap) {
        raise(ErrorCode::CapacityExceeded, "amplification circuit exceeds the qubit cap");
    }
    quantum.profile = profile_circuit(batch, ctx);
    quantum.profile.t_q_ns += ctx.depth.t_readout_ns;
    quantum.profile.eps_q = 0.0; // exact after classical reconciliation
    quantum.transfer_ns =
        ctx.policy.t_load_ns * static_cast<double>(loader->rows()) *
            static_cast<double>(loader->max_width()) +
        ctx.classical.c_tuple_ns *
            static_cast<double>(std::max<u64>(node.qinfo.m_estimate.value_or(1), 1));
    plan.quantum = std::move(quantum);
}

void realize_counting(PlanNode& plan, const LogicalNode& node, const PhysicalContext& ctx,
                      sql::QuantumAlg alg) {
    realize_filter_like(plan, node, ctx, alg);
    auto& quantum = *plan.quantum;
    quantum.phase_bits = ctx.policy.count_phase_bits;
    const Circuit counting = assemble_counting_circuit(*quantum.oracle, quantum.phase_bits);
    if (counting.n_qubits > ctx.policy.qubit_cap) {
        raise(ErrorCode::CapacityExceeded, "counting circuit exceeds the qubit cap");
    }
    quantum.profile = profile_circuit(counting, ctx);
    quantum.profile.t_q_ns += ctx.depth.t_readout_ns;
    quantum.profile.eps_q =
        static_cast<double>(node.qinfo.padded_domain) * ae_error_bound(quantum.phase_bits);
    quantum.shots = std::max<u64>(64, ctx.policy.default_shots / 8);
}

void realize_sum(PlanNode& plan, const LogicalNode& node, const PhysicalContext& ctx) {
    const Table* table = source_table(&node, ctx.catalog);
    const Column& col = table->column(node.agg_column);
    const u64 n_rows = table->row_count();
    const u64 padded = node.qinfo.padded_domain;

    // Affine shift into [0, V_max] using catalog stats; padding rows
    // contribute zero.
    const double shift = std::min(col.stats.min, 0.0);
    const double v_max = std::max(col.stats.max - shift, 1e-12);
    std::vector<double> values(padded, 0.0);
    for (u64 rid = 0; rid < n_rows; ++rid) {
        values[rid] = table->numeric_at(node.agg_column, rid) - shift;
    }
    const SumStatePrep prep = build_sum_state_prep(values, v_max);

    QuantumRealization quantum;
    quantum.alg = sql::QuantumAlg::AmplitudeEstimationSum;
    quantum.phase_bits = ctx.policy.ae_phase_bits;
    const Circuit estimation =
        assemble_estimation_circuit(prep.circuit, prep.good_qubit, quantum.phase_bits);
    if (estimation.n_qubits > ctx.policy.qubit_cap) {
        raise(ErrorCode::CapacityExceeded, "estimation circuit exceeds the qubit cap");
    }
    quantum.profile = profile_circuit(estimation, ctx);
    quantum.profile.t_q_ns += ctx.depth.t_readout_ns;
    quantum.profile.eps_q =
        static_cast<double>(padded) * v_max * ae_error_bound(quantum.phase_bits);
    if (node.agg == sql::AggKind::Avg) {
        quantum.profile.eps_q /= static_cast<double>(std::max<u64>(n_rows, 1));
    }
    quantum.shots = std::max<u64>(128, ctx.policy.default_shots / 4);
    quantum.transfer_ns = ctx.classical.c_tuple_ns; // scalar readback only
    plan.quantum = std::move(quantum);
}

void realize_min(PlanNode& plan, const LogicalNode& node, const PhysicalContext& ctx) {
    const Table* table = source_table(&node, ctx.catalog);
    const Column& col = table->column(node.agg_column);
    QuantumRealization quantum;
    quantum.alg = sql::QuantumAlg::DurrHoyerMin;
    quantum.shots = 32;
    ProjectionParams params;
    params.n_domain = node.qinfo.padded_domain;
    params.value_bits = col.def.bits;
    params.shots = 3; // repetitions
    quantum.profile.t_q_ns =
        project_quantum_cost(OperatorKind::Min, params, ctx.depth, ctx.device);
    const double depth_layers =
        (ctx.depth.d_cmp(col.def.bits) + ctx.depth.d_diff(log2_of(params.n_domain))) *
        ctx.depth.min_iterations * std::sqrt(static_cast<double>(params.n_domain));
    quantum.profile.p_q = std::exp(-mean_gate_error(ctx.device) * depth_layers) *
                          std::exp(-quantum.profile.t_q_ns / ctx.device.t2_eff_ns);
    quantum.profile.eps_q = 0.0; // verified classically
    quantum.transfer_ns = ctx.policy.t_load_ns * static_cast<double>(table->row_count()) *
                          static_cast<double>(col.def.bits);
    // The comparator oracle must fit alongside the counting register.
    const int n = log2_of(params.n_domain);
    if (n + 2 * col.def.bits + 1 > ctx.policy.qubit_cap) {
        raise(ErrorCode::CapacityExceeded, "comparator oracle exceeds the qubit cap");
    }
    plan.quantum = std::move(quantum);
}

void realize_join(PlanNode& plan, const LogicalNode& node, const PhysicalContext& ctx) {
    const Table* inner = source_table(node.child(1), ctx.catalog);
    const int n = log2_of(node.qinfo.padded_domain);
    auto loader = std::make_shared<QromLoader>(QromLoader::from_table(*inner, n));

    // Representative probe oracle for costing; execution compiles one per
    // outer key.
    const Column& key_col = inner->column(node.right_col);
    PredicateNode probe_pred;
    if (node.op == LogicalOp::EquiJoin) {
        probe_pred = Predicate::eq(node.right_col, key_col.stats.valid ? key_col.stats.min : 0);
    } else {
        const double mid =
            key_col.stats.valid ? (key_col.stats.min + key_col.stats.max) / 2.0 : 0.0;
        probe_pred = Predicate::less(node.right_col, std::floor(mid), true);
    }
    QuantumRealization quantum;
    quantum.alg = node.qinfo.alg;
    quantum.loader = loader;
    quantum.oracle = std::make_shared<PredicateOracle>(compile_oracle(
        probe_pred, *loader, n, std::max(loader->max_width(), 1), ctx.policy.qubit_cap));
    quantum.shots = ctx.policy.default_shots;
    quantum.k = grover_iterations(node.qinfo.padded_domain,
                                  std::max<u64>(node.qinfo.m_estimate.value_or(1), 1));
    const Circuit batch = assemble_grover_circuit(*quantum.oracle, quantum.k);
    quantum.profile = profile_circuit(batch, ctx);
    quantum.profile.t_q_ns += ctx.depth.t_readout_ns;
    const u64 outer_rows = estimate_rows(*node.child(0), ctx.catalog);
    quantum.profile.t_q_ns *= static_cast<double>(std::max<u64>(outer_rows, 1));
    quantum.profile.eps_q = 0.0;
    quantum.transfer_ns = ctx.policy.t_load_ns * static_cast<double>(loader->rows()) *
                          static_cast<double>(loader->max_width());
    plan.quantum = std::move(quantum);
}

void realize_similarity(PlanNode& plan, const LogicalNode& node, const PhysicalContext& ctx) {
    const Table* left = source_table(node.child(0), ctx.catalog);
    const Table* right = source_table(node.child(1), ctx.catalog);
    const int dim = left->column(node.left_col).def.dim;

    QuantumRealization quantum;
    quantum.alg = sql::QuantumAlg::SwapTest;
    quantum.shots = ctx.policy.default_shots;
    // Representative pair circuit for the per-pair cost.
    std::vector<double> unit(static_cast<std::size_t>(dim), 0.0);
    unit[0] = 1.0;
    const Circuit ax = amplitude_encode(unit);
    const int q = ax.n_qubits;
    Circuit pair(2 * q + 1);
    pair.append(embedded(ax, 0, 2 * q + 1));
    pair.append(embedded(ax, q, 2 * q + 1));
    pair.append(GateInstance::h(2 * q));
    for (int i = 0; i < q; ++i) {
        pair.append(GateInstance::cswap(2 * q, i, q + i));
    }
    pair.append(GateInstance::h(2 * q));
    quantum.profile = profile_circuit(pair, ctx);
    quantum.profile.t_q_ns += ctx.depth.t_readout_ns;
    const double pairs = static_cast<double>(left->row_count()) *
                         static_cast<double>(right->row_count());
    quantum.profile.t_q_ns *= std::max(pairs, 1.0) * static_cast<double>(quantum.shots);
    quantum.profile.eps_q = 1.5 / std::sqrt(static_cast<double>(quantum.shots));
    plan.quantum = std::move(quantum);
}

std::unique_ptr<PlanNode> lower_node(const LogicalNode* node, const PhysicalContext& ctx) {
    auto plan = std::make_unique<PlanNode>();
    plan->logical = node;
    for (const auto& child : node->children) {
        plan->children.push_back(lower_node(child.get(), ctx));
    }
    plan->classical_ns = classical_cost(*node, ctx.catalog, ctx.classical);
    plan->binding = Binding::Classical;

    if (!node->qinfo.eligible) {
        plan->note = node->qinfo.demotion_reason;
        return plan;
    }
    try {
        switch (node->op) {
            case LogicalOp::Filter:
                realize_filter_like(*plan, *node, ctx, node->qinfo.alg);
                break;
            case LogicalOp::Sample:
                realize_filter_like(*plan, *node, ctx, sql::QuantumAlg::GroverSampling);
                break;
            case LogicalOp::Exists:
                realize_counting(*plan, *node, ctx, sql::QuantumAlg::QuantumCounting);
                break;
            case LogicalOp::EquiJoin:
            case LogicalOp::NonEquiJoin:
                realize_join(*plan, *node, ctx);
                break;
            case LogicalOp::SimilarityJoin:
                realize_similarity(*plan, *node, ctx);
                break;
            case LogicalOp::Aggregate:
                if (node->agg == sql::AggKind::Min) {
                    realize_min(*plan, *node, ctx);
                } else if (node->agg == sql::AggKind::Count) {
                    realize_counting(*plan, *node, ctx,
                                     sql::QuantumAlg::AmplitudeEstimationCount);
                } else {
                    realize_sum(*plan, *node, ctx);
                }
                break;
            default:
                plan->note = "no quantum realization";
                return plan;
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CapacityExceeded ||
            e.code() == ErrorCode::LayerErrorOverflow) {
            // Automatic demotion, never a hard failure.
            plan->quantum.reset();
            plan->binding = Binding::Classical;
            plan->note = e.code() == ErrorCode::CapacityExceeded ? "capacity"
                                                                 : "layer error overflow";
            return plan;
        }
        throw;
    }
    return plan;
}

void bind_node(PlanNode& plan, const PlanPolicy& policy) {
    for (auto& child : plan.children) {
        bind_node(*child, policy);
    }
    if (!plan.quantum) {
        plan.binding = Binding::Classical;
        return;
    }
    const auto& q = *plan.quantum;
    const double t_quantum =
        q.profile.t_q_ns * static_cast<double>(q.shots ? 1 : 1) + q.transfer_ns;
    plan.quantum_expected_ns = expected_runtime(q.profile.p_q, t_quantum, plan.classical_ns);
    const double band = policy.deferred_band *
                        std::min(plan.quantum_expected_ns, plan.classical_ns);
    if (std::abs(plan.quantum_expected_ns - plan.classical_ns) <= band) {
        plan.binding = Binding::Deferred;
        plan.note = "within the deferred band; bound at execution";
    } else if (plan.quantum_expected_ns < plan.classical_ns) {
        plan.binding = Binding::Quantum;
    } else {
        plan.binding = Binding::Classical;
        plan.note = "classical realization is cheaper";
    }
}

void explain_node(const PlanNode& plan, int depth, std::ostringstream& out) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ')
        << logical_op_name(plan.logical->op);
    if (plan.logical->op == LogicalOp::Scan) {
        out << " " << plan.logical->table;
    }
    out << " [realization=" << binding_name(plan.binding) << "]";
    if (plan.quantum) {
        out << " [alg=" << quantum_alg_name(plan.quantum->alg) << "]";
        std::ostringstream prof;
        prof.precision(6);
        prof << " [Tq=" << plan.quantum->profile.t_q_ns << "ns Pq=" << plan.quantum->profile.p_q
             << " eps=" << plan.quantum->profile.eps_q << "]";
        out << prof.str();
        out << " [fallback=classical]";
    }
    if (!plan.note.empty()) {
        out << " -- " << plan.note;
    }
    out << '\n';
    for (const auto& child : plan.children) {
        explain_node(*child, depth + 1, out);
    }
}

} // namespace

HybridPlan lower_physical(sql::QuantumIR ir, const Catalog& catalog, const DeviceModel& device,
                          const DepthModel& depth, const ClassicalCostModel& classical,
                          const PlanPolicy& policy) {
    PhysicalContext ctx{catalog, device, depth, classical, policy};
    HybridPlan plan;
    plan.ir = std::move(ir);
    plan.root = lower_node(plan.ir.root.get(), ctx);
    for (const auto& sub : plan.ir.subqueries) {
        plan.subqueries.push_back(lower_node(sub.get(), ctx));
    }
    return plan;
}

void bind_plan(HybridPlan& plan, const PlanPolicy& policy) {
    bind_node(*plan.root, policy);
    for (auto& sub : plan.subqueries) {
        bind_node(*sub, policy);
    }
}

HybridPlan plan(sql::QuantumIR ir, const Catalog& catalog, const DeviceModel& device,
                const PlanPolicy& policy, const DepthModel& depth,
                const ClassicalCostModel& classical) {
    HybridPlan hybrid = lower_physical(std::move(ir), catalog, device, depth, classical, policy);
    bind_plan(hybrid, policy);
    return hybrid;
}

std::string explain(const HybridPlan& plan) {
    std::ostringstream out;
    explain_node(*plan.root, 0, out);
    for (std::size_t i = 0; i < plan.subqueries.size(); ++i) {
        out << "subquery #" << i << ":\n";
        explain_node(*plan.subqueries[i], 1, out);
    }
    return out.str();
}

std::optional<AdaptationAction> adapt(const RuntimeFeedback& feedback,
                                      const OperatorProfile& profile,
                                      const PlanPolicy& policy) {
    if (feedback.elapsed_ms > policy.latency_budget_ms) {
        return AdaptationAction{AdaptationAction::Kind::Fallback, 0.0};
    }
    if (feedback.observed_success >= 0.5 * profile.p_q && feedback.quality_ok) {
        return std::nullopt;
    }
    const u64 cap = feedback.initial_shots * static_cast<u64>(policy.shot_cap_factor);
    if (feedback.shots_used * 2 <= cap) {
        return AdaptationAction{AdaptationAction::Kind::IncreaseShots, 2.0};
    }
    if (feedback.variant_switches == 0) {
        return AdaptationAction{AdaptationAction::Kind::SwitchVariant, 1.0};
    }
    return AdaptationAction{AdaptationAction::Kind::Fallback, 0.0};
}

CrossoverResult crossover_analysis(const DeviceModel& device, const DepthModel& depth,
                                   const ClassicalCostModel& classical,
                                   const CrossoverConfig& config) {
    CrossoverResult result;
    const double mean_eps = mean_gate_error(device);
    const double layer_ns =
        config.tau_layer_ns > 0.0 ? config.tau_layer_ns : mean_layer_time_ns(device);
    for (u64 n = std::max<u64>(config.n_min, 2); n <= config.n_max && n != 0; n <<= 1) {
        ProjectionParams params;
        params.n_domain = n;
        params.m_marked =
            config.m_rule == CrossoverConfig::MRule::FixedOne
                ? 1
                : std::max<u64>(1, static_cast<u64>(config.selectivity *
                                                    static_cast<double>(n)));
        params.value_bits = config.value_bits;
        params.shots = config.shots;
        double t_quantum = project_quantum_cost(config.op, params, depth, device);
        t_quantum *= layer_ns / mean_layer_time_ns(device);
        const double layers = t_quantum / layer_ns;
        const double p_q = std::exp(-mean_eps * layers) * std::exp(-t_quantum / device.t2_eff_ns);
        const double t_classical = classical.scan(n);
        CrossoverRow row;
        row.n = n;
        row.classical_ns = t_classical;
        row.quantum_expected_ns = expected_runtime(p_q, t_quantum, t_classical);
        row.quantum_chosen = row.quantum_expected_ns < row.classical_ns;
        result.rows.push_back(row);
    }
    // Smallest N whose quantum expectation wins for every larger N too.
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        bool wins_onward = true;
        for (std::size_t j = i; j < result.rows.size(); ++j) {
            wins_onward = wins_onward && result.rows[j].quantum_chosen;
        }
        if (wins_onward && result.rows[i].quantum_chosen) {
            result.crossover_n = result.rows[i].n;
            break;
        }
    }
    return result;
}

void write_crossover_csv(std::ostream& out, const CrossoverResult& result) {
    out << "N,classical_ns,quantum_expected_ns,chosen\n";
    for (const auto& row : result.rows) {
        out << row.n << ',' << row.classical_ns << ',' << row.quantum_expected_ns << ','
            << (row.quantum_chosen ? "quantum" : "classical") << '\n';
    }
}

CalibrationResult calibrate_cost_model(const DeviceModel& device, const DepthModel& depth,
                                       std::uint64_t n_min, std::uint64_t n_max,
                                       std::uint64_t seed) {
    CalibrationResult result;
    double num = 0.0, den = 0.0;
    std::vector<double> formulas;
    // Threshold-oracle circuits: their comparator layer structure is what
    // the d_cmp(b) term of the depth model describes.
    constexpr int kBits = 8;
    for (u64 n = n_min; n <= n_max; n <<= 1) {
        const int rid_bits = log2_of(n);
        const u64 m = std::max<u64>(1, static_cast<u64>(0.02 * static_cast<double>(n)));
        std::vector<u64> values(n, 200);
        for (u64 i = 0; i < m; ++i) {
            values[i] = 10;
        }
        QromLoader loader(rid_bits);
        loader.add_column("c", kBits, values);
        const auto oracle = compile_oracle(Predicate::less("c", 100.0, true), loader, rid_bits,
                                           kBits, /*qubit_cap=*/40);
        const u64 k = grover_iterations(n, m);
        const Circuit batch = assemble_grover_circuit(oracle, k);
        const auto sched = schedule_layers(compute_only(batch), device);
        const double measured = estimate_time(sched, device);
        const double formula = (depth.d_cmp(kBits) + depth.d_diff(rid_bits)) *
                               std::sqrt(static_cast<double>(n) / static_cast<double>(m));
        num += measured * formula;
        den += formula * formula;
        formulas.push_back(formula);
        result.points.push_back({n, measured, 0.0});
    }
    result.tau_layer_ns = den > 0.0 ? num / den : 0.0;
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        result.points[i].fitted_ns = result.tau_layer_ns * formulas[i];
        const double rel = std::abs(result.points[i].fitted_ns - result.points[i].measured_ns) /
                           result.points[i].measured_ns;
        result.max_rel_err = std::max(result.max_rel_err, rel);
    }

    // Classical per-tuple wall time from a timed predicate scan.
    {
        std::mt19937_64 rng(seed);
        const u64 rows = u64{1} << 20;
        std::vector<u64> data(rows);
        for (auto& v : data) {
            v = rng() % 1024;
        }
        volatile u64 sink = 0;
        const auto start = std::chrono::steady_clock::now();
        u64 hits = 0;
        for (u64 v : data) {
            hits += (v == 7) ? 1 : 0;
        }
        sink = hits;
        (void)sink;
        const auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        result.c_tuple_ns = static_cast<double>(elapsed) / static_cast<double>(rows);
    }
    return result;
}

} // namespace qdb::opt
