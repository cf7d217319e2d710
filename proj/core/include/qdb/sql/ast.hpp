#pragma once

#include "qdb/storage.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qdb::sql {

struct SelectStmt;

/// Parser-level predicate expression. Column references may carry a table
/// qualifier ("t.c"); resolution happens during logical lowering.
struct PredExpr {
    enum class Kind { Compare, Between, Like, And, Or, Not, Exists };
    enum class Cmp { Eq, Lt, Le, Gt, Ge };

    Kind kind = Kind::Compare;
    std::string column;
    Cmp cmp = Cmp::Eq;
    double value = 0.0;
    double low = 0.0, high = 0.0;              // Between
    std::string pattern;                        // Like, "<bits>%"
    std::vector<std::unique_ptr<PredExpr>> children;
    std::unique_ptr<SelectStmt> subquery;       // Exists
};

struct AggSpec {
    enum class Kind { Sum, Avg, Count, Min };
    Kind kind = Kind::Count;
    std::string column; // empty for COUNT(*)
    bool star = false;
};

struct JoinSpec {
    enum class Kind { Equi, NonEqui, Similarity };
    Kind kind = Kind::Equi;
    std::string table;
    std::string left_col, right_col; // join columns / vector columns
    PredExpr::Cmp cmp = PredExpr::Cmp::Eq;
    double threshold = 0.0;          // Similarity: IP(l, r) > threshold
};

struct SelectStmt {
    bool star = false;
    bool rid_only = false;
    std::vector<std::string> columns;
    std::vector<AggSpec> aggregates;
    std::string table;
    std::optional<JoinSpec> join;
    std::unique_ptr<PredExpr> where;
    std::optional<std::uint64_t> sample_k;
};

struct CreateTableStmt {
    TableDef def;
};

struct InsertStmt {
    std::string table;
    std::vector<Row> rows;
};

struct CopyCsvStmt {
    std::string table;
    std::string path;
};

struct Statement {
    enum class Kind { Select, CreateTable, Insert, CopyCsv };
    Kind kind = Kind::Select;
    std::unique_ptr<SelectStmt> select;
    std::optional<CreateTableStmt> create;
    std::optional<InsertStmt> insert;
    std::optional<CopyCsvStmt> copy;
    bool explain = false;
    bool explain_analyze = false;
};

/// Canonical SQL rendering; parsing the output reproduces the statement.
std::string to_sql(const Statement& stmt);
std::string to_sql(const SelectStmt& stmt);
std::string to_sql(const PredExpr& expr);

} // namespace qdb::sql
