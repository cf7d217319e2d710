#pragma once

#include "qdb/predicate.hpp"
#include "qdb/storage.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qdb {

/// One planted predicate: the generator chooses the constants so that the
/// true selectivity lands within +-10% relative of the target.
struct SelectivityTarget {
    std::string column;
    enum class Kind { Eq, Range } kind = Kind::Eq;
    double selectivity = 0.02; // each target must be <= 0.02
};

struct SyntheticSpec {
    std::uint64_t rows = 0; // power of two
    int value_bits = 10;    // width of every generated uint column
    std::vector<SelectivityTarget> targets;
};

struct PlantedPredicate {
    PredicateNode pred;
    std::uint64_t match_count = 0;
    double selectivity = 0.0;
};

struct SyntheticResult {
    std::string table;
    std::vector<PlantedPredicate> predicates;
};

/// Creates the table in the catalog, fills it with uniform random columns,
/// plants one predicate per target and returns the matching constants.
/// Deterministic per seed.
SyntheticResult generate_synthetic(Catalog& catalog, const std::string& name,
                                   const SyntheticSpec& spec, std::uint64_t seed);

} // namespace qdb
