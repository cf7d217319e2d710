#include "qdb/storage.hpp"

#include "qdb/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace qdb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ColumnType column_type_from_name(const std::string& name) {
    if (name == "uint") return ColumnType::UInt;
    if (name == "real") return ColumnType::Real;
    if (name == "vector") return ColumnType::Vector;
    raise(ErrorCode::ParseError, "unknown column type '" + name + "'");
}

void validate_column_def(const ColumnDef& def) {
    if (def.name.empty()) {
        raise(ErrorCode::SchemaMismatch, "column name must be non-empty");
    }
    switch (def.type) {
        case ColumnType::UInt:
            if (def.bits < 1 || def.bits > 16) {
                raise(ErrorCode::SchemaMismatch,
                      "uint column '" + def.name + "' needs 1..16 bits");
            }
            break;
        case ColumnType::Vector:
            if (def.dim < 1) {
                raise(ErrorCode::SchemaMismatch,
                      "vector column '" + def.name + "' needs a positive dimension");
            }
            break;
        case ColumnType::Real:
            break;
    }
}

} // namespace

const char* column_type_name(ColumnType type) {
    switch (type) {
        case ColumnType::UInt: return "uint";
        case ColumnType::Real: return "real";
        case ColumnType::Vector: return "vector";
    }
    return "?";
}

Table::Table(TableDef def) : def_(std::move(def)) {
    if (def_.name.empty()) {
        raise(ErrorCode::SchemaMismatch, "table name must be non-empty");
    }
    std::set<std::string> seen;
    for (const auto& col : def_.columns) {
        validate_column_def(col);
        if (!seen.insert(col.name).second) {
            raise(ErrorCode::SchemaMismatch, "duplicate column '" + col.name + "'");
        }
        Column c;
        c.def = col;
        columns_.push_back(std::move(c));
    }
}

int Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].def.name == name) {
            return static_cast<int>(i);
        }
    }
    raise(ErrorCode::UnknownColumn, "table '" + def_.name + "' has no column '" + name + "'");
}

bool Table::has_column(const std::string& name) const {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const Column& c) { return c.def.name == name; });
}

const Column& Table::column(const std::string& name) const {
    return columns_[static_cast<std::size_t>(column_index(name))];
}

std::uint64_t Table::uint_at(int col, std::uint64_t rid) const {
    return columns_[static_cast<std::size_t>(col)].u[rid];
}

double Table::real_at(int col, std::uint64_t rid) const {
    return columns_[static_cast<std::size_t>(col)].r[rid];
}

const Vec& Table::vec_at(int col, std::uint64_t rid) const {
    return columns_[static_cast<std::size_t>(col)].v[rid];
}

double Table::numeric_at(const std::string& name, std::uint64_t rid) const {
    const Column& c = column(name);
    switch (c.def.type) {
        case ColumnType::UInt: return static_cast<double>(c.u[rid]);
        case ColumnType::Real: return c.r[rid];
        case ColumnType::Vector:
            raise(ErrorCode::TypeMismatch, "column '" + name + "' is a vector");
    }
    return 0.0;
}

void Table::append_row(const Row& row) {
    if (row.size() != columns_.size()) {
        raise(ErrorCode::SchemaMismatch,
              "row has " + std::to_string(row.size()) + " values, table '" + def_.name +
                  "' has " + std::to_string(columns_.size()) + " columns");
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        Column& c = columns_[i];
        switch (c.def.type) {
            case ColumnType::UInt: {
                std::uint64_t value = 0;
                if (const auto* u = std::get_if<std::uint64_t>(&row[i])) {
                    value = *u;
                } else if (const auto* d = std::get_if<double>(&row[i])) {
                    if (*d < 0.0 || *d != std::floor(*d)) {
                        raise(ErrorCode::TypeMismatch,
                              "non-integral value for uint column '" + c.def.name + "'");
                    }
                    value = static_cast<std::uint64_t>(*d);
                } else {
                    raise(ErrorCode::SchemaMismatch,
                          "vector value for uint column '" + c.def.name + "'");
                }
                if (value >> c.def.bits) {
                    raise(ErrorCode::WidthOverflow,
                          std::to_string(value) + " does not fit in " +
                              std::to_string(c.def.bits) + " bits of '" + c.def.name + "'");
                }
                c.u.push_back(value);
                break;
            }
            case ColumnType::Real: {
                if (const auto* d = std::get_if<double>(&row[i])) {
                    c.r.push_back(*d);
                } else if (const auto* u = std::get_if<std::uint64_t>(&row[i])) {
                    c.r.push_back(static_cast<double>(*u));
                } else {
                    raise(ErrorCode::SchemaMismatch,
                          "vector value for real column '" + c.def.name + "'");
                }
                break;
            }
            case ColumnType::Vector: {
                const auto* v = std::get_if<Vec>(&row[i]);
                if (v == nullptr) {
                    raise(ErrorCode::SchemaMismatch,
                          "scalar value for vector column '" + c.def.name + "'");
                }
                if (static_cast<int>(v->size()) != c.def.dim) {
                    raise(ErrorCode::SchemaMismatch,
                          "vector of dim " + std::to_string(v->size()) + " for column '" +
                              c.def.name + "' of dim " + std::to_string(c.def.dim));
                }
                c.v.push_back(*v);
                break;
            }
        }
    }
    ++row_count_;
}

void Table::refresh_stats() {
    for (Column& c : columns_) {
        if (row_count_ == 0 || c.def.type == ColumnType::Vector) {
            c.stats.valid = false;
            continue;
        }
        c.stats.valid = true;
        if (c.def.type == ColumnType::UInt) {
            const auto [mn, mx] = std::minmax_element(c.u.begin(), c.u.end());
            c.stats.min = static_cast<double>(*mn);
            c.stats.max = static_cast<double>(*mx);
            std::set<std::uint64_t> distinct(c.u.begin(), c.u.end());
            c.stats.distinct_estimate = distinct.size();
        } else {
            const auto [mn, mx] = std::minmax_element(c.r.begin(), c.r.end());
            c.stats.min = *mn;
            c.stats.max = *mx;
            c.stats.distinct_estimate = row_count_;
        }
    }
}

Table& Catalog::create_table(const TableDef& def) {
    if (tables_.count(def.name)) {
        raise(ErrorCode::DuplicateTable, "table '" + def.name + "' already exists");
    }
    auto [it, inserted] = tables_.emplace(def.name, Table(def));
    return it->second;
}

void Catalog::insert_rows(const std::string& table, const std::vector<Row>& rows) {
    Table& t = table_mut(table);
    for (const auto& row : rows) {
        t.append_row(row);
    }
    t.refresh_stats();
}

const Table& Catalog::table(const std::string& name) const {
    auto it = tables_.find(name);
    if (it == tables_.end()) {
        raise(ErrorCode::UnknownTable, "no table named '" + name + "'");
    }
    return it->second;
}

Table& Catalog::table_mut(const std::string& name) {
    auto it = tables_.find(name);
    if (it == tables_.end()) {
        raise(ErrorCode::UnknownTable, "no table named '" + name + "'");
    }
    return it->second;
}

bool Catalog::has_table(const std::string& name) const { return tables_.count(name) > 0; }

void Catalog::drop_table(const std::string& name) { tables_.erase(name); }

std::vector<std::string> Catalog::table_names() const {
    std::vector<std::string> names;
    names.reserve(tables_.size());
    for (const auto& [name, _] : tables_) {
        names.push_back(name);
    }
    return names;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& cell, std::uint64_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) {
            throw std::invalid_argument("trailing junk");
        }
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::ParseError,
              "line " + std::to_string(line_no) + ": bad numeric cell '" + cell + "'");
    }
}

} // namespace

std::uint64_t Catalog::ingest_csv(const std::string& path, const std::string& table) {
    Table& t = table_mut(table);
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::IoError, "cannot open CSV file " + path);
    }
    std::string line;
    std::uint64_t line_no = 0;
    if (!std::getline(in, line)) {
        raise(ErrorCode::ParseError, "empty CSV file " + path);
    }
    ++line_no;
    const auto header = split(strip(line), ',');
    if (header.size() != t.column_count()) {
        raise(ErrorCode::SchemaMismatch, "CSV header has " + std::to_string(header.size()) +
                                             " columns, table expects " +
                                             std::to_string(t.column_count()));
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (strip(header[i]) != t.column_at(static_cast<int>(i)).def.name) {
            raise(ErrorCode::SchemaMismatch,
                  "CSV header column '" + strip(header[i]) + "' does not match schema column '" +
                      t.column_at(static_cast<int>(i)).def.name + "'");
        }
    }
    std::uint64_t appended = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto stripped = strip(line);
        if (stripped.empty()) {
            continue;
        }
        const auto cells = split(stripped, ',');
        if (cells.size() != t.column_count()) {
            raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(t.column_count()) + " cells, got " +
                                             std::to_string(cells.size()));
        }
        Row row;
        row.reserve(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& def = t.column_at(static_cast<int>(i)).def;
            const auto cell = strip(cells[i]);
            if (def.type == ColumnType::Vector) {
                Vec v;
                for (const auto& piece : split(cell, ';')) {
                    v.push_back(parse_number(strip(piece), line_no));
                }
                row.emplace_back(std::move(v));
            } else {
                const double num = parse_number(cell, line_no);
                if (def.type == ColumnType::UInt) {
                    if (num < 0.0 || num != std::floor(num)) {
                        raise(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                                         ": non-integral value for uint column");
                    }
                    row.emplace_back(static_cast<std::uint64_t>(num));
                } else {
                    row.emplace_back(num);
                }
            }
        }
        t.append_row(row);
        ++appended;
    }
    t.refresh_stats();
    return appended;
}

void Catalog::save(const std::string& dir) const {
    fs::create_directories(dir);
    json cat;
    cat["tables"] = json::array();
    for (const auto& [name, t] : tables_) {
        json jt;
        jt["name"] = name;
        jt["row_count"] = t.row_count();
        jt["columns"] = json::array();
        for (std::size_t i = 0; i < t.column_count(); ++i) {
            const Column& c = t.column_at(static_cast<int>(i));
            json jc;
            jc["name"] = c.def.name;
            jc["type"] = column_type_name(c.def.type);
            jc["bits"] = c.def.bits;
            jc["dim"] = c.def.dim;
            jc["stats"] = {{"valid", c.stats.valid},
                           {"min", c.stats.min},
                           {"max", c.stats.max},
                           {"distinct", c.stats.distinct_estimate}};
            jt["columns"].push_back(jc);

            std::ofstream out(fs::path(dir) / (name + "." + c.def.name + ".col"),
                              std::ios::binary);
            if (!out) {
                raise(ErrorCode::IoError, "cannot write column file for " + c.def.name);
            }
            switch (c.def.type) {
                case ColumnType::UInt:
                    for (std::uint64_t v : c.u) {
                        const auto narrow = static_cast<std::uint16_t>(v);
                        out.write(reinterpret_cast<const char*>(&narrow), sizeof(narrow));
                    }
                    break;
                case ColumnType::Real:
                    out.write(reinterpret_cast<const char*>(c.r.data()),
                              static_cast<std::streamsize>(c.r.size() * sizeof(double)));
                    break;
                case ColumnType::Vector:
                    for (const auto& vec : c.v) {
                        out.write(reinterpret_cast<const char*>(vec.data()),
                                  static_cast<std::streamsize>(vec.size() * sizeof(double)));
                    }
                    break;
            }
        }
        cat["tables"].push_back(jt);
    }
    std::ofstream out(fs::path(dir) / "catalog.json");
    if (!out) {
        raise(ErrorCode::IoError, "cannot write catalog.json in " + dir);
    }
    out << cat.dump(2) << '\n';
}

Catalog Catalog::load(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "catalog.json");
    if (!in) {
        raise(ErrorCode::IoError, "cannot open catalog.json in " + dir);
    }
    json cat = json::parse(in, nullptr, false);
    if (cat.is_discarded()) {
        raise(ErrorCode::ParseError, "catalog.json is not valid JSON");
    }
    Catalog catalog;
    for (const auto& jt : cat["tables"]) {
        TableDef def;
        def.name = jt["name"].get<std::string>();
        for (const auto& jc : jt["columns"]) {
            ColumnDef col;
            col.name = jc["name"].get<std::string>();
            col.type = column_type_from_name(jc["type"].get<std::string>());
            col.bits = jc["bits"].get<int>();
            col.dim = jc["dim"].get<int>();
            def.columns.push_back(col);
        }
        const auto rows = jt["row_count"].get<std::uint64_t>();
        Table& t = catalog.create_table(def);
        // Pull the raw column data back in and rebuild rows.
        std::vector<std::vector<Value>> columns(def.columns.size());
        for (std::size_t i = 0; i < def.columns.size(); ++i) {
            const auto& col = def.columns[i];
            std::ifstream cin(fs::path(dir) / (def.name + "." + col.name + ".col"),
                              std::ios::binary);
            if (!cin) {
                raise(ErrorCode::IoError, "missing column file for " + col.name);
            }
            for (std::uint64_t r = 0; r < rows; ++r) {
                switch (col.type) {
                    case ColumnType::UInt: {
                        std::uint16_t v = 0;
                        cin.read(reinterpret_cast<char*>(&v), sizeof(v));
                        columns[i].emplace_back(static_cast<std::uint64_t>(v));
                        break;
                    }
                    case ColumnType::Real: {
                        double v = 0.0;
                        cin.read(reinterpret_cast<char*>(&v), sizeof(v));
                        columns[i].emplace_back(v);
                        break;
                    }
                    case ColumnType::Vector: {
                        Vec vec(static_cast<std::size_t>(col.dim));
                        cin.read(reinterpret_cast<char*>(vec.data()),
                                 static_cast<std::streamsize>(vec.size() * sizeof(double)));
                        columns[i].emplace_back(std::move(vec));
                        break;
                    }
                }
                if (!cin) {
                    raise(ErrorCode::IoError, "column file for " + col.name + " is truncated");
                }
            }
        }
        for (std::uint64_t r = 0; r < rows; ++r) {
            Row row;
            for (std::size_t i = 0; i < columns.size(); ++i) {
                row.push_back(columns[i][r]);
            }
            t.append_row(row);
        }
        t.refresh_stats();
    }
    return catalog;
}

std::uint64_t basis_encode(std::uint64_t rid, int n) {
    if (n < 1 || n > 63 || (rid >> n) != 0) {
        raise(ErrorCode::WidthOverflow,
              "rid " + std::to_string(rid) + " does not fit in " + std::to_string(n) + " bits");
    }
    return rid;
}

std::vector<ControlBit> control_flags(const Table& table, std::uint64_t rid,
                                      const std::vector<int>& flag_ancilla_qubits) {
    std::vector<ControlBit> out;
    std::size_t next = 0;
    for (std::size_t i = 0; i < table.column_count(); ++i) {
        const Column& c = table.column_at(static_cast<int>(i));
        if (c.def.type != ColumnType::UInt || c.def.bits != 1) {
            continue;
        }
        if (next >= flag_ancilla_qubits.size()) {
            break;
        }
        out.push_back({flag_ancilla_qubits[next], c.u[rid] != 0});
        ++next;
    }
    return out;
}

} // namespace qdb
