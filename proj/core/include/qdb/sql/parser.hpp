#pragma once

#include "qdb/sql/ast.hpp"

#include <string>
#include <vector>

namespace qdb::sql {

/// Parses one statement (trailing ';' optional). Throws SyntaxError with a
/// line:column position, or UnsupportedFeature for recognized SQL outside
/// the subset.
Statement parse_statement(const std::string& text);

/// Splits a script on ';' (string literals respected) and parses each
/// non-empty statement.
std::vector<Statement> parse_script(const std::string& text);

} // namespace qdb::sql
