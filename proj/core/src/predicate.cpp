#include "qdb/predicate.hpp"

#include "qdb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdb {

namespace {

std::shared_ptr<Predicate> make(Predicate::Kind kind) {
    auto p = std::make_shared<Predicate>();
    p->kind = kind;
    return p;
}

} // namespace

PredicateNode Predicate::eq(std::string column, double value) {
    auto p = make(Kind::Eq);
    p->column = std::move(column);
    p->value = value;
    return p;
}

PredicateNode Predicate::range(std::string column, double low, double high, bool low_open,
                               bool high_open) {
    auto p = make(Kind::Range);
    p->column = std::move(column);
    p->low = low;
    p->high = high;
    p->low_open = low_open;
    p->high_open = high_open;
    return p;
}

PredicateNode Predicate::greater(std::string column, double bound, bool or_equal) {
    return range(std::move(column), bound, std::numeric_limits<double>::infinity(), !or_equal,
                 false);
}

PredicateNode Predicate::less(std::string column, double bound, bool or_equal) {
    return range(std::move(column), -std::numeric_limits<double>::infinity(), bound, false,
                 !or_equal);
}

PredicateNode Predicate::prefix_like(std::string column, const std::string& bit_prefix) {
    if (bit_prefix.empty() || bit_prefix.size() > 63) {
        raise(ErrorCode::UnsupportedPredicate, "prefix must have 1..63 bits");
    }
    auto p = make(Kind::PrefixLike);
    p->column = std::move(column);
    p->prefix_bits = static_cast<int>(bit_prefix.size());
    for (char c : bit_prefix) {
        if (c != '0' && c != '1') {
            raise(ErrorCode::UnsupportedPredicate,
                  "prefix pattern must be a binary string, got '" + bit_prefix + "'");
        }
        p->prefix_value = (p->prefix_value << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return p;
}

PredicateNode Predicate::conj(std::vector<PredicateNode> children) {
    auto p = make(Kind::And);
    p->children = std::move(children);
    return p;
}

PredicateNode Predicate::disj(std::vector<PredicateNode> children) {
    auto p = make(Kind::Or);
    p->children = std::move(children);
    return p;
}

PredicateNode Predicate::negate(PredicateNode child) {
    auto p = make(Kind::Not);
    p->children.push_back(std::move(child));
    return p;
}

PredicateNode Predicate::exists(int subquery_id) {
    auto p = make(Kind::Exists);
    p->subquery_id = subquery_id;
    return p;
}

PredicateNode Predicate::constant(bool value) {
    auto p = make(Kind::ConstBool);
    p->const_value = value;
    return p;
}

bool eval_predicate(const Predicate& pred,
                    const std::function<double(const std::string&)>& get) {
    switch (pred.kind) {
        case Predicate::Kind::Eq:
            return get(pred.column) == pred.value;
        case Predicate::Kind::Range: {
            const double v = get(pred.column);
            if (pred.low_open ? !(v > pred.low) : !(v >= pred.low)) {
                return false;
            }
            return pred.high_open ? v < pred.high : v <= pred.high;
        }
        case Predicate::Kind::PrefixLike: {
            if (pred.column_bits <= 0) {
                raise(ErrorCode::UnsupportedPredicate,
                      "prefix predicate on column of unknown width");
            }
            const auto v = static_cast<std::uint64_t>(get(pred.column));
            if (pred.prefix_bits > pred.column_bits) {
                return false;
            }
            return (v >> (pred.column_bits - pred.prefix_bits)) == pred.prefix_value;
        }
        case Predicate::Kind::And:
            return std::all_of(pred.children.begin(), pred.children.end(),
                               [&](const auto& c) { return eval_predicate(*c, get); });
        case Predicate::Kind::Or:
            return std::any_of(pred.children.begin(), pred.children.end(),
                               [&](const auto& c) { return eval_predicate(*c, get); });
        case Predicate::Kind::Not:
            return !eval_predicate(*pred.children.at(0), get);
        case Predicate::Kind::Exists:
            raise(ErrorCode::UnsupportedPredicate,
                  "EXISTS must be resolved before row evaluation");
        case Predicate::Kind::ConstBool:
            return pred.const_value;
    }
    return false;
}

void collect_columns(const Predicate& pred, std::set<std::string>& out) {
    if (!pred.column.empty()) {
        out.insert(pred.column);
    }
    for (const auto& c : pred.children) {
        collect_columns(*c, out);
    }
}

std::vector<PredicateNode> split_conjuncts(const PredicateNode& pred) {
    if (pred->kind != Predicate::Kind::And) {
        return {pred};
    }
    std::vector<PredicateNode> out;
    for (const auto& c : pred->children) {
        auto sub = split_conjuncts(c);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

PredicateNode resolve_exists(const PredicateNode& pred,
                             const std::function<bool(int)>& resolver) {
    if (pred->kind == Predicate::Kind::Exists) {
        return Predicate::constant(resolver(pred->subquery_id));
    }
    if (pred->children.empty()) {
        return pred;
    }
    bool changed = false;
    std::vector<PredicateNode> children;
    children.reserve(pred->children.size());
    for (const auto& c : pred->children) {
        auto resolved = resolve_exists(c, resolver);
        changed = changed || resolved != c;
        children.push_back(std::move(resolved));
    }
    if (!changed) {
        return pred;
    }
    auto copy = std::make_shared<Predicate>(*pred);
    copy->children = std::move(children);
    return copy;
}

UIntInterval canonical_uint_interval(const Predicate& leaf, int bits) {
    const std::uint64_t max_value = (std::uint64_t{1} << bits) - 1;
    UIntInterval out;
    if (leaf.kind == Predicate::Kind::Eq) {
        if (leaf.value < 0.0 || leaf.value > static_cast<double>(max_value) ||
            leaf.value != std::floor(leaf.value)) {
            out.empty = true;
            return out;
        }
        out.lo = out.hi = static_cast<std::uint64_t>(leaf.value);
        return out;
    }
    if (leaf.kind != Predicate::Kind::Range) {
        raise(ErrorCode::UnsupportedPredicate, "leaf is not an interval predicate");
    }
    double lo = leaf.low_open ? std::floor(leaf.low) + 1.0 : std::ceil(leaf.low);
    double hi = leaf.high_open ? std::ceil(leaf.high) - 1.0 : std::floor(leaf.high);
    lo = std::max(lo, 0.0);
    hi = std::min(hi, static_cast<double>(max_value));
    if (lo > hi) {
        out.empty = true;
        return out;
    }
    out.lo = static_cast<std::uint64_t>(lo);
    out.hi = static_cast<std::uint64_t>(hi);
    return out;
}

std::string predicate_to_string(const Predicate& pred) {
    std::ostringstream out;
    switch (pred.kind) {
        case Predicate::Kind::Eq:
            out << pred.column << " = " << pred.value;
            break;
        case Predicate::Kind::Range:
            out << pred.column << " in " << (pred.low_open ? '(' : '[') << pred.low << ", "
                << pred.high << (pred.high_open ? ')' : ']');
            break;
        case Predicate::Kind::PrefixLike: {
            out << pred.column << " LIKE '";
            for (int b = pred.prefix_bits - 1; b >= 0; --b) {
                out << (((pred.prefix_value >> b) & 1u) ? '1' : '0');
            }
            out << "%'";
            break;
        }
        case Predicate::Kind::And:
        case Predicate::Kind::Or: {
            const char* sep = pred.kind == Predicate::Kind::And ? " AND " : " OR ";
            out << '(';
            for (std::size_t i = 0; i < pred.children.size(); ++i) {
                if (i) {
                    out << sep;
                }
                out << predicate_to_string(*pred.children[i]);
            }
            out << ')';
            break;
        }
        case Predicate::Kind::Not:
            out << "NOT (" << predicate_to_string(*pred.children.at(0)) << ')';
            break;
        case Predicate::Kind::Exists:
            out << "EXISTS(#" << pred.subquery_id << ')';
            break;
        case Predicate::Kind::ConstBool:
            out << (pred.const_value ? "TRUE" : "FALSE");
            break;
    }
    return out.str();
}

} // namespace qdb
