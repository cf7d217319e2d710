#include "qdb/oracle.hpp"

#include "qdb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qdb {

// ---------------------------------------------------------------------------
// QromLoader

QromLoader::QromLoader(int rid_bits) : rid_bits_(rid_bits) {
    if (rid_bits < 1 || rid_bits > 32) {
        raise(ErrorCode::InvalidCounts, "rid register needs 1..32 bits");
    }
}

QromLoader QromLoader::from_table(const Table& table, int rid_bits) {
    QromLoader loader(rid_bits);
    for (std::size_t i = 0; i < table.column_count(); ++i) {
        const Column& c = table.column_at(static_cast<int>(i));
        if (c.def.type == ColumnType::UInt) {
            loader.add_column(c.def.name, c.def.bits, c.u);
        }
    }
    if (loader.columns_.empty()) {
        loader.rows_ = table.row_count();
    }
    return loader;
}

void QromLoader::add_column(const std::string& name, int bits,
                            std::vector<std::uint64_t> values) {
    if (bits < 1 || bits > 16) {
        raise(ErrorCode::WidthOverflow, "loadable columns are 1..16 bits wide");
    }
    if (values.size() > domain()) {
        raise(ErrorCode::WidthOverflow, "value table does not fit the rid register");
    }
    if (!columns_.empty() && values.size() != rows_) {
        raise(ErrorCode::SchemaMismatch, "loader columns must have equal length");
    }
    for (std::uint64_t v : values) {
        if (v >> bits) {
            raise(ErrorCode::WidthOverflow, "value exceeds declared column width");
        }
    }
    rows_ = values.size();
    columns_.push_back({name, bits, std::move(values)});
}

const QromLoader::ColumnData& QromLoader::find(const std::string& name) const {
    for (const auto& c : columns_) {
        if (c.name == name) {
            return c;
        }
    }
    raise(ErrorCode::UnknownColumn, "loader has no column '" + name + "'");
}

bool QromLoader::has_column(const std::string& name) const {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const auto& c) { return c.name == name; });
}

int QromLoader::width_of(const std::string& name) const { return find(name).bits; }

std::uint64_t QromLoader::value(const std::string& name, std::uint64_t rid) const {
    return find(name).values.at(rid);
}

int QromLoader::max_width() const {
    int w = 0;
    for (const auto& c : columns_) {
        w = std::max(w, c.bits);
    }
    return w;
}

void QromLoader::emit_load(Circuit& circuit, const std::string& name, int value_offset) const {
    const ColumnData& col = find(name);
    std::vector<ControlBit> pattern(static_cast<std::size_t>(rid_bits_));
    for (std::uint64_t rid = 0; rid < col.values.size(); ++rid) {
        const std::uint64_t v = col.values[rid];
        if (v == 0) {
            continue;
        }
        for (int q = 0; q < rid_bits_; ++q) {
            pattern[static_cast<std::size_t>(q)] = {q, ((rid >> q) & 1u) != 0};
        }
        for (int j = 0; j < col.bits; ++j) {
            if ((v >> j) & 1u) {
                GateInstance g = GateInstance::mcx(pattern, value_offset + j);
                g.role = GateRole::Load;
                circuit.append(std::move(g));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Predicate normalization against the loader's column widths

namespace {

PredicateNode normalize(const PredicateNode& p, const QromLoader& loader) {
    switch (p->kind) {
        case Predicate::Kind::ConstBool:
            return p;
        case Predicate::Kind::Exists:
            raise(ErrorCode::UnsupportedPredicate,
                  "EXISTS must be resolved before oracle compilation");
        case Predicate::Kind::Eq: {
            const int w = loader.width_of(p->column);
            const double max_value = static_cast<double>((std::uint64_t{1} << w) - 1);
            if (p->value != std::floor(p->value)) {
                raise(ErrorCode::TypeMismatch,
                      "non-integral equality constant on uint column '" + p->column + "'");
            }
            if (p->value < 0.0 || p->value > max_value) {
                raise(ErrorCode::WidthOverflow, "equality constant does not fit " +
                                                    std::to_string(w) + " bits of '" +
                                                    p->column + "'");
            }
            auto copy = std::make_shared<Predicate>(*p);
            copy->column_bits = w;
            return copy;
        }
        case Predicate::Kind::Range: {
            const int w = loader.width_of(p->column);
            const auto interval = canonical_uint_interval(*p, w);
            if (interval.empty) {
                return Predicate::constant(false);
            }
            const std::uint64_t max_value = (std::uint64_t{1} << w) - 1;
            if (interval.lo == 0 && interval.hi == max_value) {
                return Predicate::constant(true);
            }
            auto copy = std::make_shared<Predicate>(*p);
            copy->low = static_cast<double>(interval.lo);
            copy->high = static_cast<double>(interval.hi);
            copy->low_open = copy->high_open = false;
            copy->column_bits = w;
            return copy;
        }
        case Predicate::Kind::PrefixLike: {
            const int w = loader.width_of(p->column);
            if (p->prefix_bits > w) {
                raise(ErrorCode::WidthOverflow, "prefix is longer than column '" + p->column +
                                                    "' (" + std::to_string(w) + " bits)");
            }
            auto copy = std::make_shared<Predicate>(*p);
            copy->column_bits = w;
            return copy;
        }
        case Predicate::Kind::Not: {
            auto child = normalize(p->children.at(0), loader);
            if (child->kind == Predicate::Kind::ConstBool) {
                return Predicate::constant(!child->const_value);
            }
            return Predicate::negate(std::move(child));
        }
        case Predicate::Kind::And:
        case Predicate::Kind::Or: {
            const bool is_and = p->kind == Predicate::Kind::And;
            std::vector<PredicateNode> kept;
            for (const auto& c : p->children) {
                auto norm = normalize(c, loader);
                if (norm->kind == Predicate::Kind::ConstBool) {
                    if (norm->const_value == is_and) {
                        continue; // neutral element
                    }
                    return Predicate::constant(!is_and); // absorbing element
                }
                kept.push_back(std::move(norm));
            }
            if (kept.empty()) {
                return Predicate::constant(is_and);
            }
            if (kept.size() == 1) {
                return kept.front();
            }
            return is_and ? Predicate::conj(std::move(kept)) : Predicate::disj(std::move(kept));
        }
    }
    return Predicate::constant(false);
}

// Peak number of concurrently live flag ancillas for a node compiled as a
// flag writer (including its own output flag).
int peak_flags(const Predicate& node) {
    switch (node.kind) {
        case Predicate::Kind::Eq:
        case Predicate::Kind::PrefixLike:
        case Predicate::Kind::ConstBool:
            return 1;
        case Predicate::Kind::Range: {
            const bool lo = node.low > 0.0;
            const bool hi_side =
                node.high < static_cast<double>((std::uint64_t{1} << node.column_bits) - 1);
            return (lo && hi_side) ? 3 : 1;
        }
        case Predicate::Kind::Not:
            return peak_flags(*node.children.at(0));
        case Predicate::Kind::And:
        case Predicate::Kind::Or: {
            // Own output flag + already-computed child flags + the live
            // child's internal peak.
            int inner = static_cast<int>(node.children.size());
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                inner = std::max(inner, static_cast<int>(i) + peak_flags(*node.children[i]));
            }
            return 1 + inner;
        }
        default:
            return 1;
    }
}

// Peak flags for the root phase emission (no output flag at the root).
int peak_flags_root(const Predicate& root) {
    const Predicate* node = &root;
    while (node->kind == Predicate::Kind::Not) {
        node = node->children.at(0).get();
    }
    switch (node->kind) {
        case Predicate::Kind::Eq:
        case Predicate::Kind::PrefixLike:
        case Predicate::Kind::ConstBool:
            return 0;
        case Predicate::Kind::Range: {
            const bool lo = node->low > 0.0;
            const bool hi_side =
                node->high < static_cast<double>((std::uint64_t{1} << node->column_bits) - 1);
            return (lo && hi_side) ? 2 : 1;
        }
        case Predicate::Kind::And:
        case Predicate::Kind::Or: {
            int peak = static_cast<int>(node->children.size());
            for (std::size_t i = 0; i < node->children.size(); ++i) {
                peak = std::max(peak, static_cast<int>(i) + peak_flags(*node->children[i]));
            }
            return peak;
        }
        default:
            return 0;
    }
}

// Widest comparator used anywhere (borrow-chain scratch size).
int scratch_width(const Predicate& node) {
    switch (node.kind) {
        case Predicate::Kind::Range: {
            const bool lo = node.low > 0.0;
            const bool hi_side =
                node.high < static_cast<double>((std::uint64_t{1} << node.column_bits) - 1);
            return (lo || hi_side) ? node.column_bits : 0;
        }
        case Predicate::Kind::Not:
        case Predicate::Kind::And:
        case Predicate::Kind::Or: {
            int w = 0;
            for (const auto& c : node.children) {
                w = std::max(w, scratch_width(*c));
            }
            return w;
        }
        default:
            return 0;
    }
}

int max_referenced_width(const Predicate& node, const QromLoader& loader) {
    int w = 0;
    if (!node.column.empty()) {
        w = loader.width_of(node.column);
    }
    for (const auto& c : node.children) {
        w = std::max(w, max_referenced_width(*c, loader));
    }
    return w;
}

struct Emitter {
    const QromLoader& loader;
    Circuit circuit;
    int n;
    int b;
    int scratch_base;
    int flag_base;
    int flag_sp = 0;
    std::vector<std::size_t> phase_gates;
    bool global_flip = false;

    int alloc_flag() { return flag_base + flag_sp++; }
    void free_flag() { --flag_sp; }

    void load(const std::string& column) { loader.emit_load(circuit, column, n); }

    // All compute gates are X/MCX, so the inverse of a segment is simply
    // the reversed gate sequence.
    void emit_inverse_segment(std::size_t from, std::size_t to) {
        for (std::size_t i = to; i > from; --i) {
            circuit.append(circuit.gates[i - 1]);
        }
    }

    std::vector<ControlBit> value_pattern(std::uint64_t constant, int width) const {
        std::vector<ControlBit> pattern;
        pattern.reserve(static_cast<std::size_t>(width));
        for (int j = 0; j < width; ++j) {
            pattern.push_back({n + j, ((constant >> j) & 1u) != 0});
        }
        return pattern;
    }

    std::vector<ControlBit> prefix_pattern(const Predicate& node) const {
        std::vector<ControlBit> pattern;
        for (int k = 0; k < node.prefix_bits; ++k) {
            // prefix bit k (0 = most significant of the prefix) sits at
            // value-register bit column_bits-1-k.
            const bool bit = ((node.prefix_value >> (node.prefix_bits - 1 - k)) & 1u) != 0;
            pattern.push_back({n + node.column_bits - 1 - k, bit});
        }
        return pattern;
    }

    // flag ^= (v >= C) or (v <= C) for the register at [off, off+w).
    void emit_compare(int off, int w, std::uint64_t c, bool ge, int flag) {
        const std::uint64_t max_value = (std::uint64_t{1} << w) - 1;
        if ((ge && c == 0) || (!ge && c >= max_value)) {
            circuit.append(GateInstance::x(flag));
            return;
        }
        const std::uint64_t k = ge ? c : c + 1;
        const std::size_t chain_begin = circuit.gates.size();
        for (int i = 0; i < w; ++i) {
            const int borrow = scratch_base + i;
            const bool k_i = ((k >> i) & 1u) != 0;
            const int v_i = off + i;
            if (i == 0) {
                if (k_i) {
                    circuit.append(GateInstance::mcx({{v_i, false}}, borrow));
                }
            } else {
                const int prev = scratch_base + i - 1;
                if (k_i) {
                    circuit.append(GateInstance::x(borrow));
                    circuit.append(GateInstance::mcx({{v_i, true}, {prev, false}}, borrow));
                } else {
                    circuit.append(GateInstance::mcx({{v_i, false}, {prev, true}}, borrow));
                }
            }
        }
        const std::size_t chain_end = circuit.gates.size();
        const int borrow_out = scratch_base + w - 1;
        // v >= C  <=>  no borrow out of v - C; v <= C  <=>  borrow out of v - (C+1).
        circuit.append(GateInstance::mcx({{borrow_out, !ge}}, flag));
        emit_inverse_segment(chain_begin, chain_end);
    }

    void emit_flag_into(const Predicate& node, int flag) {
        switch (node.kind) {
            case Predicate::Kind::ConstBool:
                if (node.const_value) {
                    circuit.append(GateInstance::x(flag));
                }
                return;
            case Predicate::Kind::Eq: {
                load(node.column);
                circuit.append(GateInstance::mcx(
                    value_pattern(static_cast<std::uint64_t>(node.value), node.column_bits),
                    flag));
                load(node.column);
                return;
            }
            case Predicate::Kind::PrefixLike: {
                load(node.column);
                circuit.append(GateInstance::mcx(prefix_pattern(node), flag));
                load(node.column);
                return;
            }
            case Predicate::Kind::Range: {
                const auto lo = static_cast<std::uint64_t>(node.low);
                const auto hi = static_cast<std::uint64_t>(node.high);
                const std::uint64_t max_value =
                    (std::uint64_t{1} << node.column_bits) - 1;
                load(node.column);
                if (lo > 0 && hi < max_value) {
                    const int t1 = alloc_flag();
                    const std::size_t s1 = circuit.gates.size();
                    emit_compare(n, node.column_bits, lo, /*ge=*/true, t1);
                    const std::size_t e1 = circuit.gates.size();
                    const int t2 = alloc_flag();
                    const std::size_t s2 = circuit.gates.size();
                    emit_compare(n, node.column_bits, hi, /*ge=*/false, t2);
                    const std::size_t e2 = circuit.gates.size();
                    circuit.append(GateInstance::mcx({{t1, true}, {t2, true}}, flag));
                    emit_inverse_segment(s2, e2);
                    emit_inverse_segment(s1, e1);
                    free_flag();
                    free_flag();
                } else if (lo > 0) {
                    emit_compare(n, node.column_bits, lo, /*ge=*/true, flag);
                } else {
                    emit_compare(n, node.column_bits, hi, /*ge=*/false, flag);
                }
                load(node.column);
                return;
            }
            case Predicate::Kind::Not:
                emit_flag_into(*node.children.at(0), flag);
                circuit.append(GateInstance::x(flag));
                return;
            case Predicate::Kind::And:
            case Predicate::Kind::Or: {
                const bool is_and = node.kind == Predicate::Kind::And;
                std::vector<int> child_flags;
                std::vector<std::pair<std::size_t, std::size_t>> segments;
                for (const auto& c : node.children) {
                    const int f = alloc_flag();
                    const std::size_t s = circuit.gates.size();
                    emit_flag_into(*c, f);
                    segments.emplace_back(s, circuit.gates.size());
                    child_flags.push_back(f);
                }
                std::vector<ControlBit> controls;
                for (int f : child_flags) {
                    controls.push_back({f, is_and});
                }
                circuit.append(GateInstance::mcx(controls, flag));
                if (!is_and) {
                    circuit.append(GateInstance::x(flag));
                }
                for (std::size_t i = segments.size(); i > 0; --i) {
                    emit_inverse_segment(segments[i - 1].first, segments[i - 1].second);
                    free_flag();
                }
                return;
            }
            case Predicate::Kind::Exists:
                raise(ErrorCode::UnsupportedPredicate, "unresolved EXISTS in oracle");
        }
    }

    void add_phase_mcz(std::vector<ControlBit> controls, int guard_flag) {
        if (guard_flag >= 0) {
            controls.push_back({guard_flag, true});
        }
        phase_gates.push_back(circuit.gates.size());
        circuit.append(GateInstance::mcz(std::move(controls)));
    }

    void emit_root_phase(const Predicate& root, int guard_flag) {
        const Predicate* node = &root;
        bool guard_z = false; // parity of an extra Z on the guard flag
        bool parity = false;
        while (node->kind == Predicate::Kind::Not) {
            parity = !parity;
            node = node->children.at(0).get();
        }
        if (parity) {
            if (guard_flag >= 0) {
                guard_z = !guard_z;
            } else {
                global_flip = !global_flip;
            }
        }
        switch (node->kind) {
            case Predicate::Kind::ConstBool:
                if (node->const_value) {
                    if (guard_flag >= 0) {
                        guard_z = !guard_z;
                    } else {
                        global_flip = !global_flip;
                    }
                }
                break;
            case Predicate::Kind::Eq: {
                load(node->column);
                add_phase_mcz(
                    value_pattern(static_cast<std::uint64_t>(node->value), node->column_bits),
                    guard_flag);
                load(node->column);
                break;
            }
            case Predicate::Kind::PrefixLike: {
                load(node->column);
                add_phase_mcz(prefix_pattern(*node), guard_flag);
                load(node->column);
                break;
            }
            case Predicate::Kind::Range: {
                const auto lo = static_cast<std::uint64_t>(node->low);
                const auto hi = static_cast<std::uint64_t>(node->high);
                const std::uint64_t max_value =
                    (std::uint64_t{1} << node->column_bits) - 1;
                load(node->column);
                std::vector<int> side_flags;
                std::vector<std::pair<std::size_t, std::size_t>> segments;
                auto add_side = [&](std::uint64_t c, bool ge) {
                    const int f = alloc_flag();
                    const std::size_t s = circuit.gates.size();
                    emit_compare(n, node->column_bits, c, ge, f);
                    segments.emplace_back(s, circuit.gates.size());
                    side_flags.push_back(f);
                };
                if (lo > 0) {
                    add_side(lo, true);
                }
                if (hi < max_value) {
                    add_side(hi, false);
                }
                std::vector<ControlBit> controls;
                for (int f : side_flags) {
                    controls.push_back({f, true});
                }
                add_phase_mcz(std::move(controls), guard_flag);
                for (std::size_t i = segments.size(); i > 0; --i) {
                    emit_inverse_segment(segments[i - 1].first, segments[i - 1].second);
                    free_flag();
                }
                load(node->column);
                break;
            }
            case Predicate::Kind::And:
            case Predicate::Kind::Or: {
                const bool is_and = node->kind == Predicate::Kind::And;
                if (!is_and) {
                    if (guard_flag >= 0) {
                        guard_z = !guard_z;
                    } else {
                        global_flip = !global_flip;
                    }
                }
                std::vector<int> child_flags;
                std::vector<std::pair<std::size_t, std::size_t>> segments;
                for (const auto& c : node->children) {
                    const int f = alloc_flag();
                    const std::size_t s = circuit.gates.size();
                    emit_flag_into(*c, f);
                    segments.emplace_back(s, circuit.gates.size());
                    child_flags.push_back(f);
                }
                std::vector<ControlBit> controls;
                for (int f : child_flags) {
                    controls.push_back({f, is_and});
                }
                add_phase_mcz(std::move(controls), guard_flag);
                for (std::size_t i = segments.size(); i > 0; --i) {
                    emit_inverse_segment(segments[i - 1].first, segments[i - 1].second);
                    free_flag();
                }
                break;
            }
            case Predicate::Kind::Exists:
            case Predicate::Kind::Not:
                raise(ErrorCode::UnsupportedPredicate, "unexpected root node");
        }
        if (guard_z) {
            phase_gates.push_back(circuit.gates.size());
            circuit.append(GateInstance::z(guard_flag));
        }
    }
};

} // namespace

PredicateOracle compile_oracle(const PredicateNode& pred, const QromLoader& loader, int n, int b,
                               int qubit_cap) {
    if (n != loader.rid_bits()) {
        raise(ErrorCode::InvalidCounts, "rid width disagrees with the loader");
    }
    const PredicateNode norm = normalize(pred, loader);
    if (b < max_referenced_width(*norm, loader)) {
        raise(ErrorCode::WidthOverflow, "value register narrower than a referenced column");
    }

    const bool need_guard = loader.rows() < (std::uint64_t{1} << n);
    int scratch = scratch_width(*norm);
    if (need_guard) {
        scratch = std::max(scratch, n);
    }
    const int flags = peak_flags_root(*norm) + (need_guard ? 1 : 0);
    const int total = n + b + scratch + flags;
    if (total > qubit_cap) {
        raise(ErrorCode::CapacityExceeded,
              "oracle needs " + std::to_string(total) + " qubits (cap " +
                  std::to_string(qubit_cap) + ")");
    }

    Emitter em{loader, Circuit(total), n, b, n + b, n + b + scratch, 0, {}, false};

    int guard_flag = -1;
    std::size_t guard_begin = 0, guard_end = 0;
    if (need_guard && loader.rows() > 0) {
        guard_flag = em.alloc_flag();
        guard_begin = em.circuit.gates.size();
        // guard = (rid <= rows-1) over the rid register itself
        em.emit_compare(0, n, loader.rows() - 1, /*ge=*/false, guard_flag);
        guard_end = em.circuit.gates.size();
    }
    if (loader.rows() == 0) {
        // Empty table: nothing is ever marked.
    } else {
        em.emit_root_phase(*norm, guard_flag);
    }
    if (guard_flag >= 0) {
        em.emit_inverse_segment(guard_begin, guard_end);
        em.free_flag();
    }

    PredicateOracle oracle;
    oracle.circuit = std::move(em.circuit);
    oracle.circuit.measured_qubits.clear();
    for (int q = 0; q < n; ++q) {
        oracle.circuit.measured_qubits.push_back(q);
    }
    oracle.rid_bits = n;
    oracle.value_bits = b;
    oracle.total_qubits = total;
    oracle.a_orc = flags;
    oracle.a_cmp = scratch;
    oracle.a_pref = 0;
    oracle.phase_gate_indices = std::move(em.phase_gates);
    oracle.global_phase_flip = em.global_flip;

    // Snapshot the referenced columns for classical verification.
    auto data = std::make_shared<std::map<std::string, std::vector<std::uint64_t>>>();
    std::set<std::string> referenced;
    collect_columns(*norm, referenced);
    for (const auto& col : referenced) {
        auto& values = (*data)[col];
        values.reserve(loader.rows());
        for (std::uint64_t rid = 0; rid < loader.rows(); ++rid) {
            values.push_back(loader.value(col, rid));
        }
    }
    const std::uint64_t rows = loader.rows();
    oracle.classical_predicate = [data, norm, rows](std::uint64_t rid) {
        if (rid >= rows) {
            return false;
        }
        return eval_predicate(*norm, [&](const std::string& col) {
            return static_cast<double>(data->at(col)[rid]);
        });
    };
    return oracle;
}

Circuit controlled_oracle(const PredicateOracle& oracle, int control_qubit, int total_qubits) {
    if (control_qubit < oracle.total_qubits || control_qubit >= total_qubits) {
        raise(ErrorCode::IndexOutOfRange, "control qubit must lie outside the oracle registers");
    }
    Circuit out(total_qubits);
    std::size_t next_phase = 0;
    for (std::size_t i = 0; i < oracle.circuit.gates.size(); ++i) {
        GateInstance g = oracle.circuit.gates[i];
        const bool is_phase = next_phase < oracle.phase_gate_indices.size() &&
                              oracle.phase_gate_indices[next_phase] == i;
        if (is_phase) {
            ++next_phase;
            if (g.kind == GateKind::Z) {
                g = GateInstance::mcz({{g.targets[0], true}, {control_qubit, true}});
            } else {
                g.controls.push_back({control_qubit, true});
            }
        }
        out.append(std::move(g));
    }
    if (oracle.global_phase_flip) {
        out.append(GateInstance::z(control_qubit));
    }
    return out;
}

} // namespace qdb
