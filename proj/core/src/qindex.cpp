#include "qdb/qindex.hpp"

#include "qdb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qdb::qindex {

namespace {
using u64 = std::uint64_t;
}

BPlusTreeIndex::BPlusTreeIndex(const Table& table, const std::string& column, int order)
    : column_(column) {
    if (order < 2) {
        raise(ErrorCode::InvalidCounts, "tree order must be at least 2");
    }
    const Column& col = table.column(column);
    if (col.def.type != ColumnType::UInt) {
        raise(ErrorCode::TypeMismatch, "tree indexes cover uint columns");
    }
    std::vector<std::pair<u64, u64>> entries;
    entries.reserve(table.row_count());
    for (u64 rid = 0; rid < table.row_count(); ++rid) {
        entries.emplace_back(col.u[rid], rid);
    }
    std::sort(entries.begin(), entries.end());

    // Leaf layer: chunks of `order` entries, chained left to right.
    std::vector<int> level;
    for (std::size_t begin = 0; begin < entries.size(); begin += order) {
        Node leaf;
        leaf.leaf = true;
        const std::size_t end = std::min(entries.size(), begin + order);
        leaf.entries.assign(entries.begin() + static_cast<std::ptrdiff_t>(begin),
                            entries.begin() + static_cast<std::ptrdiff_t>(end));
        const int id = static_cast<int>(nodes_.size());
        if (!level.empty()) {
            nodes_[static_cast<std::size_t>(level.back())].next = id;
        }
        nodes_.push_back(std::move(leaf));
        level.push_back(id);
    }
    if (level.empty()) {
        Node leaf;
        leaf.leaf = true;
        nodes_.push_back(std::move(leaf));
        level.push_back(0);
    }

    // Internal levels bottom-up; separator i is the smallest key of child i.
    while (level.size() > 1) {
        std::vector<int> parents;
        for (std::size_t begin = 0; begin < level.size(); begin += order) {
            const std::size_t end = std::min(level.size(), begin + order);
            Node inner;
            inner.leaf = false;
            for (std::size_t i = begin; i < end; ++i) {
                const Node& child = nodes_[static_cast<std::size_t>(level[i])];
                const u64 first_key =
                    child.leaf ? (child.entries.empty() ? 0 : child.entries.front().first)
                               : child.keys.front();
                inner.keys.push_back(first_key);
                inner.children.push_back(level[i]);
            }
            parents.push_back(static_cast<int>(nodes_.size()));
            nodes_.push_back(std::move(inner));
        }
        level = std::move(parents);
    }
    root_ = level.front();
}

ProbeResult BPlusTreeIndex::probe(const KeyRange& range) const {
    ProbeResult result;
    result.column = column_;
    if (range.lo > range.hi) {
        return result;
    }
    // Descend to the first leaf that can contain range.lo.
    int node = root_;
    ++result.nodes_visited;
    while (!nodes_[static_cast<std::size_t>(node)].leaf) {
        const Node& inner = nodes_[static_cast<std::size_t>(node)];
        // Largest child whose first key is strictly below lo; an equal
        // first key may continue a run of duplicates from the left sibling.
        std::size_t pick = 0;
        for (std::size_t i = 1; i < inner.keys.size(); ++i) {
            if (inner.keys[i] < range.lo) {
                pick = i;
            }
        }
        node = inner.children[pick];
        ++result.nodes_visited;
    }
    // Walk the leaf chain.
    while (node >= 0) {
        const Node& leaf = nodes_[static_cast<std::size_t>(node)];
        if (!leaf.entries.empty()) {
            const u64 leaf_min = leaf.entries.front().first;
            const u64 leaf_max = leaf.entries.back().first;
            if (leaf_min > range.hi) {
                break;
            }
            if (leaf_min >= range.lo && leaf_max <= range.hi) {
                ++result.wholesale_leaves;
                for (const auto& [key, rid] : leaf.entries) {
                    result.rids.push_back(rid);
                }
            } else {
                for (const auto& [key, rid] : leaf.entries) {
                    ++result.filtered_entries;
                    if (key >= range.lo && key <= range.hi) {
                        result.rids.push_back(rid);
                    }
                }
            }
        }
        node = leaf.next;
        if (node >= 0) {
            ++result.nodes_visited;
        }
    }
    std::sort(result.rids.begin(), result.rids.end());
    return result;
}

StrategyDecision select_strategy(const std::vector<ProbeResult>& probes, std::uint64_t n_rows,
                                 double c) {
    if (probes.empty()) {
        raise(ErrorCode::InvalidCounts, "strategy selection needs at least one probe");
    }
    StrategyDecision decision;
    decision.k_s = probes.front().k();
    for (std::size_t i = 1; i < probes.size(); ++i) {
        if (probes[i].k() < decision.k_s) {
            decision.k_s = probes[i].k();
            decision.best_probe = i;
        }
    }
    decision.threshold = c * std::log2(std::max<double>(2.0, static_cast<double>(n_rows)));
    decision.chosen = static_cast<double>(decision.k_s) <= decision.threshold
                          ? Strategy::ClassicalPostFilter
                          : Strategy::KdTreeSearch;
    return decision;
}

std::vector<std::uint64_t> classical_post_filter(const std::vector<std::uint64_t>& candidates,
                                                 const std::vector<PredicateNode>& residual,
                                                 const Table& table,
                                                 std::uint64_t* eval_counter) {
    std::vector<u64> out;
    for (u64 rid : candidates) {
        bool keep = true;
        for (const auto& pred : residual) {
            if (eval_counter != nullptr) {
                ++*eval_counter;
            }
            if (!eval_predicate(*pred, [&](const std::string& col) {
                    return table.numeric_at(col, rid);
                })) {
                keep = false;
                break;
            }
        }
        if (keep) {
            out.push_back(rid);
        }
    }
    return out;
}

KdTreeIndex::KdTreeIndex(const Table& table, std::vector<std::string> columns, int leaf_size)
    : table_(&table), columns_(std::move(columns)), leaf_size_(std::max(leaf_size, 1)) {
    for (const auto& name : columns_) {
        if (table.column(name).def.type != ColumnType::UInt) {
            raise(ErrorCode::TypeMismatch, "KD-tree dimensions must be uint columns");
        }
        column_indices_.push_back(table.column_index(name));
    }
    std::vector<u64> rids(table.row_count());
    for (u64 i = 0; i < table.row_count(); ++i) {
        rids[i] = i;
    }
    if (!rids.empty()) {
        root_ = build(rids, 0, rids.size(), 0);
    }
}

int KdTreeIndex::build(std::vector<u64>& rids, std::size_t begin, std::size_t end, int depth) {
    Node node;
    node.bounds.resize(columns_.size());
    for (std::size_t d = 0; d < columns_.size(); ++d) {
        u64 lo = ~u64{0}, hi = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const u64 v = table_->uint_at(column_indices_[d], rids[i]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        node.bounds[d] = {lo, hi};
    }
    if (end - begin <= static_cast<std::size_t>(leaf_size_)) {
        node.rids.assign(rids.begin() + static_cast<std::ptrdiff_t>(begin),
                         rids.begin() + static_cast<std::ptrdiff_t>(end));
        node.dim = -1;
        nodes_.push_back(std::move(node));
        return static_cast<int>(nodes_.size() - 1);
    }
    const int dim = depth % static_cast<int>(columns_.size());
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(rids.begin() + static_cast<std::ptrdiff_t>(begin),
                     rids.begin() + static_cast<std::ptrdiff_t>(mid),
                     rids.begin() + static_cast<std::ptrdiff_t>(end), [&](u64 a, u64 b) {
                         return table_->uint_at(column_indices_[static_cast<std::size_t>(dim)],
                                                a) <
                                table_->uint_at(column_indices_[static_cast<std::size_t>(dim)],
                                                b);
                     });
    node.dim = dim;
    node.split =
        table_->uint_at(column_indices_[static_cast<std::size_t>(dim)], rids[mid]);
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(node));
    const int left = build(rids, begin, mid, depth + 1);
    const int right = build(rids, mid, end, depth + 1);
    nodes_[static_cast<std::size_t>(self)].left = left;
    nodes_[static_cast<std::size_t>(self)].right = right;
    return self;
}

void KdTreeIndex::collect(int node_id, std::vector<u64>& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.dim < 0) {
        out.insert(out.end(), node.rids.begin(), node.rids.end());
        return;
    }
    collect(node.left, out);
    collect(node.right, out);
}

void KdTreeIndex::search_rec(int node_id, const std::vector<KeyRange>& box,
                             std::vector<u64>& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    bool disjoint = false;
    bool contained = true;
    for (std::size_t d = 0; d < box.size(); ++d) {
        disjoint = disjoint || node.bounds[d].lo > box[d].hi || node.bounds[d].hi < box[d].lo;
        contained = contained && node.bounds[d].lo >= box[d].lo &&
                    node.bounds[d].hi <= box[d].hi;
    }
    if (disjoint) {
        return;
    }
    if (contained) {
        collect(node_id, out);
        return;
    }
    if (node.dim < 0) {
        for (u64 rid : node.rids) {
            bool keep = true;
            for (std::size_t d = 0; d < box.size(); ++d) {
                const u64 v = table_->uint_at(column_indices_[d], rid);
                keep = keep && v >= box[d].lo && v <= box[d].hi;
            }
            if (keep) {
                out.push_back(rid);
            }
        }
        return;
    }
    search_rec(node.left, box, out);
    search_rec(node.right, box, out);
}

std::vector<std::uint64_t> KdTreeIndex::search(const std::vector<KeyRange>& box) const {
    if (box.size() != columns_.size()) {
        raise(ErrorCode::DimensionMismatch, "query box must cover every indexed dimension");
    }
    std::vector<u64> out;
    if (root_ >= 0) {
        search_rec(root_, box, out);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> disjunctive_probe(const std::vector<ProbeResult>& probes) {
    std::set<u64> merged;
    for (const auto& probe : probes) {
        merged.insert(probe.rids.begin(), probe.rids.end());
    }
    return {merged.begin(), merged.end()};
}

SelectiveIndex::SelectiveIndex(const Table& table, std::vector<std::string> dims, int order,
                               double c, int max_probes)
    : table_(&table), dims_(dims), kd_(table, dims, 16), c_(c), max_probes_(max_probes) {
    for (const auto& dim : dims_) {
        trees_.emplace(dim, BPlusTreeIndex(table, dim, order));
    }
}

SelectiveIndex::Answer SelectiveIndex::conjunctive_query(
    const std::vector<std::pair<std::string, KeyRange>>& ranges) const {
    if (ranges.empty()) {
        raise(ErrorCode::InvalidCounts, "conjunctive query needs at least one range");
    }
    Answer answer;
    // Probe the indexed dimensions, cheapest first, capped.
    int probed = 0;
    for (const auto& [dim, range] : ranges) {
        auto it = trees_.find(dim);
        if (it == trees_.end()) {
            raise(ErrorCode::NoIndex, "no tree index on dimension '" + dim + "'");
        }
        if (probed++ >= max_probes_) {
            break;
        }
        answer.probes.push_back(it->second.probe(range));
    }
    answer.decision = select_strategy(answer.probes, table_->row_count(), c_);

    if (answer.decision.chosen == Strategy::ClassicalPostFilter) {
        const auto& best = answer.probes[answer.decision.best_probe];
        std::vector<PredicateNode> residual;
        for (const auto& [dim, range] : ranges) {
            if (dim == best.column) {
                continue;
            }
            residual.push_back(Predicate::range(dim, static_cast<double>(range.lo),
                                                static_cast<double>(range.hi)));
        }
        answer.rids =
            classical_post_filter(best.rids, residual, *table_, &answer.residual_evals);
        return answer;
    }

    // Escalation: the jointly indexed tree answers the full box; ranges on
    // dimensions outside the query keep their full domain.
    std::vector<KeyRange> box(dims_.size());
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        box[d] = {0, ~u64{0}};
        for (const auto& [dim, range] : ranges) {
            if (dim == dims_[d]) {
                box[d] = range;
            }
        }
    }
    answer.rids = kd_.search(box);
    return answer;
}

std::vector<std::uint64_t> SelectiveIndex::disjunctive_query(
    const std::vector<std::pair<std::string, KeyRange>>& ranges) const {
    std::vector<ProbeResult> probes;
    for (const auto& [dim, range] : ranges) {
        auto it = trees_.find(dim);
        if (it == trees_.end()) {
            raise(ErrorCode::NoIndex, "no tree index on dimension '" + dim + "'");
        }
        probes.push_back(it->second.probe(range));
    }
    return disjunctive_probe(probes);
}

} // namespace qdb::qindex
