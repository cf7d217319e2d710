#pragma once

#include "qdb/predicate.hpp"
#include "qdb/storage.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qdb::qindex {

/// Closed key interval.
struct KeyRange {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
};

struct ProbeResult {
    std::string column;
    std::vector<std::uint64_t> rids; // exact, ascending
    std::uint64_t nodes_visited = 0;
    std::uint64_t wholesale_leaves = 0;
    std::uint64_t filtered_entries = 0;

    std::uint64_t k() const { return rids.size(); }
};

/// Static one-dimensional B+-tree over a uint column: balanced internal
/// levels above a sorted, chained leaf layer. Rebuilt after inserts.
class BPlusTreeIndex {
  public:
    BPlusTreeIndex(const Table& table, const std::string& column, int order = 32);

    const std::string& column() const { return column_; }

    /// Exact rid set for the closed range. Leaves fully contained in the
    /// range are taken wholesale, boundary leaves are filtered entry-wise.
    ProbeResult probe(const KeyRange& range) const;

  private:
    struct Node {
        bool leaf = true;
        std::vector<std::uint64_t> keys;                      // internal separators
        std::vector<int> children;                            // internal
        std::vector<std::pair<std::uint64_t, std::uint64_t>> entries; // leaf (key, rid)
        int next = -1;                                        // leaf chain
    };

    std::vector<Node> nodes_;
    int root_ = -1;
    std::string column_;
};

enum class Strategy { ClassicalPostFilter, KdTreeSearch };

struct StrategyDecision {
    Strategy chosen = Strategy::ClassicalPostFilter;
    std::uint64_t k_s = 0;       // smallest candidate set size
    double threshold = 0.0;      // c * log2(N)
    std::size_t best_probe = 0;  // index of the smallest probe
};

/// Smallest probe wins; classical post-filtering iff k_s <= c * log2(N).
StrategyDecision select_strategy(const std::vector<ProbeResult>& probes, std::uint64_t n_rows,
                                 double c = 1.0);

/// Exact residual verification over the candidate set. `eval_counter`
/// accumulates the number of conjunct evaluations performed, which is at
/// most k_s * (number of residual conjuncts).
std::vector<std::uint64_t> classical_post_filter(const std::vector<std::uint64_t>& candidates,
                                                 const std::vector<PredicateNode>& residual,
                                                 const Table& table,
                                                 std::uint64_t* eval_counter = nullptr);

/// Static KD-tree over several uint columns; median splits cycle through
/// the dimensions, leaves hold up to leaf_size rids.
class KdTreeIndex {
  public:
    KdTreeIndex(const Table& table, std::vector<std::string> columns, int leaf_size = 16);

    const std::vector<std::string>& columns() const { return columns_; }

    /// Exact multi-dimensional range result; subtrees disjoint from the
    /// query box are pruned, fully covered subtrees are taken wholesale.
    std::vector<std::uint64_t> search(const std::vector<KeyRange>& box) const;

  private:
    struct Node {
        int dim = 0;
        std::uint64_t split = 0;
        int left = -1, right = -1;
        std::vector<std::uint64_t> rids; // leaf
        std::vector<KeyRange> bounds;    // bounding box per dimension
    };

    int build(std::vector<std::uint64_t>& rids, std::size_t begin, std::size_t end, int depth);
    void collect(int node, std::vector<std::uint64_t>& out) const;
    void search_rec(int node, const std::vector<KeyRange>& box,
                    std::vector<std::uint64_t>& out) const;

    const Table* table_ = nullptr;
    std::vector<std::string> columns_;
    std::vector<int> column_indices_;
    std::vector<Node> nodes_;
    int root_ = -1;
    int leaf_size_ = 16;
};

/// Set union of per-disjunct probes (the classical realization of
/// combining the probed superpositions).
std::vector<std::uint64_t> disjunctive_probe(const std::vector<ProbeResult>& probes);

/// The composite selective-probing strategy: per-dimension tree probes,
/// smallest-candidate selection, then classical post-filtering or KD-tree
/// escalation depending on k_s.
class SelectiveIndex {
  public:
    SelectiveIndex(const Table& table, std::vector<std::string> dims, int order = 32,
                   double c = 1.0, int max_probes = 4);

    struct Answer {
        std::vector<std::uint64_t> rids;
        StrategyDecision decision;
        std::vector<ProbeResult> probes;
        std::uint64_t residual_evals = 0;
    };

    /// Conjunctive multi-dimensional range query (one range per queried
    /// dimension, all of which must be indexed).
    Answer conjunctive_query(const std::vector<std::pair<std::string, KeyRange>>& ranges) const;

    /// Disjunctive query: independent probes, results combined by union.
    std::vector<std::uint64_t> disjunctive_query(
        const std::vector<std::pair<std::string, KeyRange>>& ranges) const;

  private:
    const Table* table_;
    std::vector<std::string> dims_;
    std::map<std::string, BPlusTreeIndex> trees_;
    KdTreeIndex kd_;
    double c_;
    int max_probes_;
};

} // namespace qdb::qindex
