#include "qdb/sql/ast.hpp"

#include <sstream>

namespace qdb::sql {

namespace {

const char* cmp_text(PredExpr::Cmp cmp) {
    switch (cmp) {
        case PredExpr::Cmp::Eq: return "=";
        case PredExpr::Cmp::Lt: return "<";
        case PredExpr::Cmp::Le: return "<=";
        case PredExpr::Cmp::Gt: return ">";
        case PredExpr::Cmp::Ge: return ">=";
    }
    return "?";
}

void format_number(std::ostream& out, double v) {
    std::ostringstream tmp;
    tmp.precision(15);
    tmp << v;
    out << tmp.str();
}

} // namespace

std::string to_sql(const PredExpr& expr) {
    std::ostringstream out;
    switch (expr.kind) {
        case PredExpr::Kind::Compare:
            out << expr.column << " " << cmp_text(expr.cmp) << " ";
            format_number(out, expr.value);
            break;
        case PredExpr::Kind::Between:
            out << expr.column << " BETWEEN ";
            format_number(out, expr.low);
            out << " AND ";
            format_number(out, expr.high);
            break;
        case PredExpr::Kind::Like:
            out << expr.column << " LIKE '" << expr.pattern << "'";
            break;
        case PredExpr::Kind::And:
            out << "(" << to_sql(*expr.children[0]) << " AND " << to_sql(*expr.children[1])
                << ")";
            break;
        case PredExpr::Kind::Or:
            out << "(" << to_sql(*expr.children[0]) << " OR " << to_sql(*expr.children[1])
                << ")";
            break;
        case PredExpr::Kind::Not:
            out << "NOT (" << to_sql(*expr.children[0]) << ")";
            break;
        case PredExpr::Kind::Exists:
            out << "EXISTS (" << to_sql(*expr.subquery) << ")";
            break;
    }
    return out.str();
}

std::string to_sql(const SelectStmt& stmt) {
    std::ostringstream out;
    out << "SELECT ";
    bool first = true;
    auto sep = [&] {
        if (!first) {
            out << ", ";
        }
        first = false;
    };
    if (stmt.star) {
        out << "*";
        first = false;
    }
    if (stmt.rid_only) {
        sep();
        out << "RID";
    }
    for (const auto& col : stmt.columns) {
        sep();
        out << col;
    }
    for (const auto& agg : stmt.aggregates) {
        sep();
        switch (agg.kind) {
            case AggSpec::Kind::Sum: out << "SUM("; break;
            case AggSpec::Kind::Avg: out << "AVG("; break;
            case AggSpec::Kind::Count: out << "COUNT("; break;
            case AggSpec::Kind::Min: out << "MIN("; break;
        }
        out << (agg.star ? "*" : agg.column) << ")";
    }
    out << " FROM " << stmt.table;
    if (stmt.join) {
        if (stmt.join->kind == JoinSpec::Kind::Similarity) {
            out << " SIMJOIN " << stmt.join->table << " ON IP(" << stmt.join->left_col << ", "
                << stmt.join->right_col << ") > ";
            format_number(out, stmt.join->threshold);
        } else {
            out << " JOIN " << stmt.join->table << " ON " << stmt.join->left_col << " "
                << cmp_text(stmt.join->cmp) << " " << stmt.join->right_col;
        }
    }
    if (stmt.where) {
        out << " WHERE " << to_sql(*stmt.where);
    }
    if (stmt.sample_k) {
        out << " SAMPLE " << *stmt.sample_k;
    }
    return out.str();
}

std::string to_sql(const Statement& stmt) {
    std::ostringstream out;
    if (stmt.explain) {
        out << "EXPLAIN ";
        if (stmt.explain_analyze) {
            out << "ANALYZE ";
        }
    }
    switch (stmt.kind) {
        case Statement::Kind::Select:
            out << to_sql(*stmt.select);
            break;
        case Statement::Kind::CreateTable: {
            out << "CREATE TABLE " << stmt.create->def.name << " (";
            for (std::size_t i = 0; i < stmt.create->def.columns.size(); ++i) {
                const auto& col = stmt.create->def.columns[i];
                if (i) {
                    out << ", ";
                }
                out << col.name << " ";
                switch (col.type) {
                    case ColumnType::UInt: out << "UINT(" << col.bits << ")"; break;
                    case ColumnType::Real: out << "REAL"; break;
                    case ColumnType::Vector: out << "VECTOR(" << col.dim << ")"; break;
                }
            }
            out << ")";
            break;
        }
        case Statement::Kind::Insert: {
            out << "INSERT INTO " << stmt.insert->table << " VALUES ";
            for (std::size_t r = 0; r < stmt.insert->rows.size(); ++r) {
                if (r) {
                    out << ", ";
                }
                out << "(";
                const Row& row = stmt.insert->rows[r];
                for (std::size_t i = 0; i < row.size(); ++i) {
                    if (i) {
                        out << ", ";
                    }
                    if (const auto* u = std::get_if<std::uint64_t>(&row[i])) {
                        out << *u;
                    } else if (const auto* d = std::get_if<double>(&row[i])) {
                        format_number(out, *d);
                    } else {
                        const Vec& v = std::get<Vec>(row[i]);
                        out << "'";
                        for (std::size_t j = 0; j < v.size(); ++j) {
                            if (j) {
                                out << ";";
                            }
                            format_number(out, v[j]);
                        }
                        out << "'";
                    }
                }
                out << ")";
            }
            break;
        }
        case Statement::Kind::CopyCsv:
            out << "COPY " << stmt.copy->table << " FROM '" << stmt.copy->path << "'";
            break;
    }
    return out.str();
}

} // namespace qdb::sql
