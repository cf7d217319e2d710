#pragma once

#include "qdb/gates.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qdb {

enum class ColumnType { UInt, Real, Vector };

const char* column_type_name(ColumnType type);

using Vec = std::vector<double>;
using Value = std::variant<std::uint64_t, double, Vec>;
using Row = std::vector<Value>;

struct ColumnDef {
    std::string name;
    ColumnType type = ColumnType::UInt;
    int bits = 0; // UInt width, 1..16
    int dim = 0;  // Vector dimension
};

struct TableDef {
    std::string name;
    std::vector<ColumnDef> columns;
};

struct ColumnStats {
    bool valid = false;
    double min = 0.0;
    double max = 0.0;
    std::uint64_t distinct_estimate = 0;
};

struct Column {
    ColumnDef def;
    ColumnStats stats;
    std::vector<std::uint64_t> u;
    std::vector<double> r;
    std::vector<Vec> v;
};

/// In-memory columnar table. Rows are dense, identified by RID 0..N-1 in
/// insertion order; scans yield RID order.
class Table {
  public:
    Table() = default;
    explicit Table(TableDef def);

    const std::string& name() const { return def_.name; }
    const TableDef& def() const { return def_; }
    std::uint64_t row_count() const { return row_count_; }

    int column_index(const std::string& name) const; // UnknownColumn
    bool has_column(const std::string& name) const;
    const Column& column(const std::string& name) const;
    const Column& column_at(int index) const { return columns_[static_cast<std::size_t>(index)]; }
    std::size_t column_count() const { return columns_.size(); }

    std::uint64_t uint_at(int col, std::uint64_t rid) const;
    double real_at(int col, std::uint64_t rid) const;
    const Vec& vec_at(int col, std::uint64_t rid) const;
    /// UInt and Real columns as double, for predicate evaluation.
    double numeric_at(const std::string& name, std::uint64_t rid) const;

    /// Appends one row (SchemaMismatch, WidthOverflow). Batch loaders call
    /// refresh_stats() once at the end of the batch.
    void append_row(const Row& row);
    void refresh_stats();

  private:
    TableDef def_;
    std::vector<Column> columns_;
    std::uint64_t row_count_ = 0;
};

class Catalog {
  public:
    Table& create_table(const TableDef& def); // DuplicateTable
    void insert_rows(const std::string& table, const std::vector<Row>& rows);
    const Table& table(const std::string& name) const; // UnknownTable
    Table& table_mut(const std::string& name);
    bool has_table(const std::string& name) const;
    void drop_table(const std::string& name);
    std::vector<std::string> table_names() const;

    /// Appends a CSV file (header row must match the schema). Vector cells
    /// are semicolon-separated reals inside one CSV field. Returns the
    /// number of appended rows.
    std::uint64_t ingest_csv(const std::string& path, const std::string& table);

    /// Persistence: JSON catalog plus one little-endian fixed-width binary
    /// file per column.
    void save(const std::string& dir) const;
    static Catalog load(const std::string& dir);

  private:
    std::map<std::string, Table> tables_;
};

/// Maps a RID to its computational basis index (identity under the
/// little-endian convention). Throws WidthOverflow when rid >= 2^n.
std::uint64_t basis_encode(std::uint64_t rid, int n);

/// Boolean metadata columns (declared uint with bits == 1) rendered as
/// control polarities for oracle compilation.
std::vector<ControlBit> control_flags(const Table& table, std::uint64_t rid,
                                      const std::vector<int>& flag_ancilla_qubits);

} // namespace qdb
