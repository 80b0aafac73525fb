#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "matrix.hpp"

namespace ilpkit {

// Dual graph of a matrix: one vertex per row, an edge between two rows iff
// some column is nonzero in both.
struct RowGraph {
    std::size_t n = 0;
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;  // n rows of `words` 64-bit words

    explicit RowGraph(std::size_t n_ = 0)
        : n(n_), words((n_ + 63) / 64), bits(n_ * words, 0) {}

    void add_edge(std::size_t i, std::size_t j) {
        if (i == j) return;
        bits[i * words + j / 64] |= 1ULL << (j % 64);
        bits[j * words + i / 64] |= 1ULL << (i % 64);
    }

    bool adjacent(std::size_t i, std::size_t j) const {
        return (bits[i * words + j / 64] >> (j % 64)) & 1;
    }

    std::size_t degree(std::size_t i) const {
        std::size_t d = 0;
        for (std::size_t w = 0; w < words; ++w) d += std::popcount(bits[i * words + w]);
        return d;
    }
};

inline RowGraph dual_graph(const Mat& a) {
    RowGraph g(a.rows());
    std::vector<std::size_t> hit;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        hit.clear();
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (a.at(i, j) != 0) hit.push_back(i);
        for (std::size_t p = 0; p < hit.size(); ++p)
            for (std::size_t q = p + 1; q < hit.size(); ++q) g.add_edge(hit[p], hit[q]);
    }
    return g;
}

// Finest block-diagonal structure reachable by row/column permutation:
// connected components of the bipartite row/column incidence. Columns that
// touch no row form the free segment (they never constrain anything).
struct BlockDecomposition {
    struct Block {
        std::vector<std::size_t> rows, cols;  // ascending original indices
    };
    std::vector<Block> blocks;
    std::vector<std::size_t> free_cols;
};

inline BlockDecomposition block_components(const Mat& a) {
    std::size_t k = a.rows(), l = a.cols();
    std::vector<std::size_t> parent(k + l);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < l; ++j)
            if (a.at(i, j) != 0) parent[find(i)] = find(k + j);

    BlockDecomposition dec;
    std::unordered_map<std::size_t, std::size_t> index;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t r = find(i);
        auto [it, fresh] = index.emplace(r, dec.blocks.size());
        if (fresh) dec.blocks.emplace_back();
        dec.blocks[it->second].rows.push_back(i);
    }
    for (std::size_t j = 0; j < l; ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < k && zero; ++i)
            if (a.at(i, j) != 0) zero = false;
        if (zero) {
            dec.free_cols.push_back(j);
            continue;
        }
        dec.blocks[index.at(find(k + j))].cols.push_back(j);
    }
    // all-zero rows end up as singleton blocks with no columns; keep them,
    // they are honest 0 = b_i constraints
    return dec;
}

inline Mat submatrix(const Mat& a, const std::vector<std::size_t>& rows,
                     const std::vector<std::size_t>& cols) {
    Mat s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s.set(i, j, a.at(rows[i], cols[j]));
    return s;
}

struct TreedepthResult {
    int depth = 0;
    std::vector<int> parent;  // elimination forest, -1 marks roots
};

namespace detail {

// Exact treedepth of one connected component by iterative deepening on the
// target depth. can_reach(mask, t) decides td(mask) <= t by branching on the
// eliminated root; the memo stores per mask the tightest known yes/no depths
// and is shared across deepening rounds, which is what keeps revisits cheap.
struct TdSearch {
    const std::vector<std::uint64_t>& adj;  // local adjacency, <= 64 vertices
    struct Entry {
        int yes = 127;  // td <= yes known
        int no = 0;     // td > no known
    };
    std::unordered_map<std::uint64_t, Entry> memo;

    std::uint64_t component_of(std::uint64_t mask, int start) const {
        std::uint64_t comp = 1ULL << start, frontier = comp;
        while (frontier) {
            std::uint64_t next = 0;
            while (frontier) {
                int v = std::countr_zero(frontier);
                frontier &= frontier - 1;
                next |= adj[v] & mask & ~comp;
            }
            comp |= next;
            frontier = next;
        }
        return comp;
    }

    bool can_reach(std::uint64_t mask, int t) {
        int c = std::popcount(mask);
        if (c == 0) return true;
        if (t <= 0) return false;
        if (c == 1) return true;
        auto& e = memo[mask];
        if (t >= e.yes) return true;
        if (t <= e.no) return false;
        if (t >= c) {  // eliminate everything one by one
            e.yes = std::min(e.yes, c);
            return true;
        }
        std::uint64_t m = mask;
        while (m) {
            int v = std::countr_zero(m);
            m &= m - 1;
            std::uint64_t rest = mask & ~(1ULL << v);
            bool ok = true;
            std::uint64_t todo = rest;
            while (todo && ok) {
                std::uint64_t comp = component_of(todo, std::countr_zero(todo));
                todo &= ~comp;
                ok = can_reach(comp, t - 1);
            }
            if (ok) {
                e.yes = std::min(e.yes, t);
                return true;
            }
        }
        e.no = std::max(e.no, t);
        return false;
    }

    int exact(std::uint64_t mask, int limit) {
        for (int t = 1; t <= limit; ++t)
            if (can_reach(mask, t)) return t;
        throw Error(Error::budget, "treedepth exceeds limit " + std::to_string(limit));
    }

    // rebuilds one optimal elimination forest; lowest eligible root wins so
    // the output is deterministic
    void build(std::uint64_t mask, int t, int up, const std::vector<int>& names,
               std::vector<int>& parent) {
        if (mask == 0) return;
        std::uint64_t todo = mask;
        while (todo) {
            std::uint64_t comp = component_of(todo, std::countr_zero(todo));
            todo &= ~comp;
            std::uint64_t m = comp;
            while (m) {
                int v = std::countr_zero(m);
                m &= m - 1;
                std::uint64_t rest = comp & ~(1ULL << v);
                bool ok = true;
                std::uint64_t sub = rest;
                while (sub && ok) {
                    std::uint64_t c2 = component_of(sub, std::countr_zero(sub));
                    sub &= ~c2;
                    ok = can_reach(c2, t - 1);
                }
                if (ok) {
                    parent[names[v]] = up;
                    build(rest, t - 1, names[v], names, parent);
                    break;
                }
            }
        }
    }
};

}  // namespace detail

// Exact treedepth with elimination forest. Components are solved
// independently; each must fit in 64 vertices. `limit` caps the search and
// exceeding it is a budget error, not an answer.
inline TreedepthResult treedepth_exact(const RowGraph& g, int limit = 20) {
    TreedepthResult res;
    res.parent.assign(g.n, -1);
    std::vector<char> seen(g.n, 0);
    for (std::size_t s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        std::vector<int> names;  // component vertices, global ids
        std::vector<std::size_t> queue{s};
        seen[s] = 1;
        while (!queue.empty()) {
            std::size_t v = queue.back();
            queue.pop_back();
            names.push_back(static_cast<int>(v));
            for (std::size_t u = 0; u < g.n; ++u)
                if (!seen[u] && g.adjacent(v, u)) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
        }
        std::sort(names.begin(), names.end());
        if (names.size() > 64)
            throw Error(Error::budget, "component too large for exact treedepth");
        std::vector<std::uint64_t> adj(names.size(), 0);
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = 0; j < names.size(); ++j)
                if (g.adjacent(names[i], names[j])) adj[i] |= 1ULL << j;
        detail::TdSearch search{adj, {}};
        std::uint64_t full =
            names.size() == 64 ? ~0ULL : ((1ULL << names.size()) - 1);
        int t = search.exact(full, limit);
        search.build(full, t, -1, names, res.parent);
        res.depth = std::max(res.depth, t);
    }
    return res;
}

inline TreedepthResult dual_treedepth(const Mat& a, int limit = 20) {
    return treedepth_exact(dual_graph(a), limit);
}

}  // namespace ilpkit
