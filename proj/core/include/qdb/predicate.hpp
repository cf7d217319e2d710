#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace qdb {

struct Predicate;
using PredicateNode = std::shared_ptr<const Predicate>;

/// Boolean predicate tree over table columns. Leaves compare one column
/// against constants; inner nodes are And/Or/Not. Exists leaves reference a
/// subquery by handle and must be resolved to constants before oracle
/// compilation or row evaluation.
struct Predicate {
    enum class Kind { Eq, Range, PrefixLike, And, Or, Not, Exists, ConstBool };

    Kind kind = Kind::ConstBool;
    std::string column;

    double value = 0.0;                 // Eq constant
    double low = -std::numeric_limits<double>::infinity();
    double high = std::numeric_limits<double>::infinity();
    bool low_open = false;
    bool high_open = false;

    std::uint64_t prefix_value = 0;     // leading bits, MSB-aligned
    int prefix_bits = 0;
    int column_bits = 0;                // width of the column, set at resolution

    std::vector<PredicateNode> children;
    int subquery_id = -1;
    bool const_value = false;

    static PredicateNode eq(std::string column, double value);
    static PredicateNode range(std::string column, double low, double high,
                               bool low_open = false, bool high_open = false);
    static PredicateNode greater(std::string column, double bound, bool or_equal);
    static PredicateNode less(std::string column, double bound, bool or_equal);
    static PredicateNode prefix_like(std::string column, const std::string& bit_prefix);
    static PredicateNode conj(std::vector<PredicateNode> children);
    static PredicateNode disj(std::vector<PredicateNode> children);
    static PredicateNode negate(PredicateNode child);
    static PredicateNode exists(int subquery_id);
    static PredicateNode constant(bool value);
};

/// Row evaluation; `get` returns the row's numeric value of a column.
/// Throws UnsupportedPredicate on unresolved Exists nodes.
bool eval_predicate(const Predicate& pred,
                    const std::function<double(const std::string&)>& get);

void collect_columns(const Predicate& pred, std::set<std::string>& out);

/// Flattens nested Ands into a conjunct list (a non-And root yields itself).
std::vector<PredicateNode> split_conjuncts(const PredicateNode& pred);

/// Replaces Exists leaves using the resolver; other nodes are shared.
PredicateNode resolve_exists(const PredicateNode& pred,
                             const std::function<bool(int)>& resolver);

/// Closed integer interval of a Range/Eq leaf over an unsigned b-bit column.
struct UIntInterval {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    bool empty = false;
};
UIntInterval canonical_uint_interval(const Predicate& leaf, int bits);

std::string predicate_to_string(const Predicate& pred);

} // namespace qdb
