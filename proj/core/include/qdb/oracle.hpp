#pragma once

#include "qdb/gates.hpp"
#include "qdb/predicate.hpp"
#include "qdb/statevector.hpp"
#include "qdb/storage.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qdb {

/// Classical value table rendered as reversible load fragments: for each
/// basis state |x> of the rid register, the fragment maps |x>|0> to
/// |x>|v(x)> on the value register, and is self-inverse when reapplied.
/// Loads are per-RID multi-controlled flips, tagged GateRole::Load.
class QromLoader {
  public:
    explicit QromLoader(int rid_bits);

    /// All uint columns of the table become loadable.
    static QromLoader from_table(const Table& table, int rid_bits);

    void add_column(const std::string& name, int bits, std::vector<std::uint64_t> values);

    int rid_bits() const { return rid_bits_; }
    std::uint64_t domain() const { return std::uint64_t{1} << rid_bits_; }
    std::uint64_t rows() const { return rows_; }
    bool has_column(const std::string& name) const;
    int width_of(const std::string& name) const;              // UnknownColumn
    std::uint64_t value(const std::string& name, std::uint64_t rid) const;
    int max_width() const;

    /// Appends the load fragment for `name` targeting value qubits
    /// [value_offset, value_offset + width_of(name)).
    void emit_load(Circuit& circuit, const std::string& name, int value_offset) const;

  private:
    struct ColumnData {
        std::string name;
        int bits = 0;
        std::vector<std::uint64_t> values;
    };
    const ColumnData& find(const std::string& name) const;

    int rid_bits_ = 0;
    std::uint64_t rows_ = 0;
    std::vector<ColumnData> columns_;
};

/// Compiled phase oracle for a predicate: acting on basis state |x> with
/// all ancillas zeroed, the circuit maps |x> -> (-1)^{f(x)} |x> (up to one
/// recorded global flip) and restores every ancilla
/// (compute-phase-uncompute). Padding rids beyond the loader's row count
/// never satisfy f.
struct PredicateOracle {
    Circuit circuit;
    int rid_bits = 0;   // n: qubits [0, n)
    int value_bits = 0; // b: shared value register, qubits [n, n+b)
    int total_qubits = 0;

    int a_orc = 0;  // flag ancillas
    int a_cmp = 0;  // comparator borrow-chain scratch
    int a_pref = 0; // prefix matching needs no extra ancillas

    std::optional<std::uint64_t> marked_count_hint;

    /// Indices of the phase gates inside `circuit`; promoting exactly these
    /// (plus a Z on the control when global_phase_flip is set) yields the
    /// controlled oracle.
    std::vector<std::size_t> phase_gate_indices;
    /// True when a constant -1 factor was dropped as global phase.
    bool global_phase_flip = false;

    /// Ground-truth predicate over rids (false for padding rids); used for
    /// classical reconciliation and verification.
    std::function<bool(std::uint64_t)> classical_predicate;

    std::uint64_t domain() const { return std::uint64_t{1} << rid_bits; }
};

/// Compiles the predicate against the loader. The value register is shared
/// across referenced columns (loaded and unloaded per comparison), so `b`
/// must be at least the widest referenced column.
PredicateOracle compile_oracle(const PredicateNode& pred, const QromLoader& loader, int n, int b,
                               int qubit_cap = kDefaultQubitCap);

/// Controlled version of the oracle: |c>|x> -> (-1)^{c & f(x)} |c>|x>.
/// Only the phase gates acquire the extra control; compute and uncompute
/// segments cancel when the phase core is the identity.
Circuit controlled_oracle(const PredicateOracle& oracle, int control_qubit, int total_qubits);

} // namespace qdb
