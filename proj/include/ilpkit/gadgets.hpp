#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "instance.hpp"
#include "matrix.hpp"

namespace ilpkit {

// Columns of a gadget instance that carry meaning for callers. A single
// number gadget designates its value column z, the power chain y, and (in
// the free variant) the branch selector u. An assembly designates the value
// column of each element block in y and the target block's value column w.
struct DesignatedColumns {
    std::optional<std::size_t> z;
    std::optional<std::size_t> u;
    std::optional<std::size_t> w;
    std::vector<std::size_t> y;
};

struct GadgetInstance {
    IlpInstance instance;
    DesignatedColumns designated;
    // declared solution count: 2 for a free gadget, 1 for a forced one,
    // 0 when the count depends on the data (assemblies)
    int expected_solutions = 0;

    // designated columns must be distinct and in range
    void validate() const {
        std::vector<std::size_t> all = designated.y;
        if (designated.z) all.push_back(*designated.z);
        if (designated.u) all.push_back(*designated.u);
        if (designated.w) all.push_back(*designated.w);
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            throw Error(Error::internal, "gadget: designated columns collide");
        if (!all.empty() && all.back() >= instance.cols())
            throw Error(Error::internal, "gadget: designated column out of range");
    }
};

// Encodes a number s with 0 <= s < 2^delta. Column 0 is the value column z,
// columns 1..delta hold the chain y_0..y_{delta-1}, and the free variant
// appends the selector u. The rows are u + y_0 = 1 (y_0 = 1 when forced),
// the doubling chain 2 y_{j-1} - y_j = 0, and the digit row that collects
// the set bits of s into z. Either everything past the selector is zero, or
// y_j = 2^j and z = s; so the free gadget has exactly two solutions and the
// forced one exactly one. Entries stay in {-1,0,1,2} and right-hand sides
// in {0,1}. The dual graph is the chain path plus the digit row as an apex,
// so its treedepth is at most ceil(log2(delta+1)) + 1.
inline GadgetInstance encode_number(Int delta, Int s, bool forced) {
    if (delta < 1) throw Error(Error::precondition, "encode_number: delta must be positive");
    if (s < 0 || bit_length(s) > delta)
        throw Error(Error::precondition, "encode_number: value does not fit in delta digits");

    auto d = static_cast<std::size_t>(delta);
    Mat a(d + 1, d + (forced ? 1 : 2));
    Vec b(d + 1, 0);
    a.set(0, 1, 1);
    if (!forced) a.set(0, d + 1, 1);
    b[0] = 1;
    for (std::size_t j = 1; j < d; ++j) {
        a.set(j, j, 2);
        a.set(j, j + 1, -1);
    }
    for (std::size_t j = 0; j < d; ++j)
        if ((s >> j) & 1) a.set(d, j + 1, 1);
    a.set(d, 0, -1);

    GadgetInstance g{IlpInstance(std::move(a), std::move(b)), {}, forced ? 1 : 2};
    g.designated.z = 0;
    if (!forced) g.designated.u = d + 1;
    for (std::size_t j = 0; j < d; ++j) g.designated.y.push_back(j + 1);
    g.validate();
    return g;
}

// Reduces subset sum to feasibility: one free number gadget per element, a
// forced gadget for the target, assembled block-diagonally under a linking
// row z_1 + ... + z_k - w = 0. The linking row comes first and each block's
// value column is its first, so the row reads 1 0...0 | ... | 1 0...0 | -1
// 0...0 across the blocks. Every element block contributes 0 or its value,
// the target block always contributes t; the system is feasible exactly
// when some subset of the elements sums to the target. The digit width is
// the smallest that covers every element and the target, so the dual
// treedepth stays logarithmic in it.
inline GadgetInstance subset_sum_to_ilp(const Vec& s, Int t) {
    if (t < 0) throw Error(Error::precondition, "subset_sum_to_ilp: negative target");
    Int delta = std::max<Int>(Int{1}, bit_length(t));
    for (Int v : s) {
        if (v < 0) throw Error(Error::precondition, "subset_sum_to_ilp: negative element");
        delta = std::max(delta, bit_length(v));
    }

    std::vector<GadgetInstance> blocks;
    blocks.reserve(s.size() + 1);
    for (Int v : s) blocks.push_back(encode_number(delta, v, false));
    blocks.push_back(encode_number(delta, t, true));

    std::size_t rows = 1, cols = 0;
    for (const GadgetInstance& blk : blocks) {
        rows += blk.instance.rows();
        cols += blk.instance.cols();
    }
    Mat a(rows, cols);
    Vec b(rows, 0);
    DesignatedColumns designated;
    std::size_t r = 1, c = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const IlpInstance& blk = blocks[i].instance;
        bool target = i + 1 == blocks.size();
        a.set(0, c, target ? -1 : 1);
        if (target)
            designated.w = c;
        else
            designated.y.push_back(c);
        for (std::size_t bi = 0; bi < blk.rows(); ++bi) {
            for (std::size_t bj = 0; bj < blk.cols(); ++bj)
                if (Int v = blk.a.at(bi, bj); v != 0) a.set(r + bi, c + bj, v);
            b[r + bi] = blk.b[bi];
        }
        r += blk.rows();
        c += blk.cols();
    }

    GadgetInstance g{IlpInstance(std::move(a), std::move(b)), std::move(designated), 0};
    g.validate();
    return g;
}

// Rewrites every coefficient 2 as x + x' for a fresh duplicate column tied
// to x by a pendant row x - x' = 0, bringing all entries into {-1,0,1}.
// Solutions extend bijectively by x' = x, so feasibility and solution
// counts are untouched, and original column indices keep their meaning. In
// the dual graph each pendant row hangs below the lowest constraint that
// contains x, so the treedepth grows by at most one.
inline IlpInstance duplicate_to_pm1(const IlpInstance& inst) {
    if (!inst.standard_form())
        throw Error(Error::precondition, "duplicate_to_pm1: instance not in standard form");
    for (Int v : inst.a.data())
        if (v < -1 || v > 2)
            throw Error(Error::precondition, "duplicate_to_pm1: entry outside {-1,0,1,2}");
    for (Int v : inst.b)
        if (v < 0 || v > 1)
            throw Error(Error::precondition, "duplicate_to_pm1: right-hand side outside {0,1}");

    std::vector<std::size_t> doubled;
    for (std::size_t j = 0; j < inst.cols(); ++j)
        for (std::size_t i = 0; i < inst.rows(); ++i)
            if (inst.a.at(i, j) == 2) {
                doubled.push_back(j);
                break;
            }

    Mat a(inst.rows() + doubled.size(), inst.cols() + doubled.size());
    Vec b(inst.b);
    b.resize(inst.rows() + doubled.size(), 0);
    for (std::size_t i = 0; i < inst.rows(); ++i)
        for (std::size_t j = 0; j < inst.cols(); ++j)
            if (Int v = inst.a.at(i, j); v != 0) a.set(i, j, v == 2 ? 1 : v);
    for (std::size_t n = 0; n < doubled.size(); ++n) {
        std::size_t j = doubled[n], dup = inst.cols() + n;
        for (std::size_t i = 0; i < inst.rows(); ++i)
            if (inst.a.at(i, j) == 2) a.set(i, dup, 1);
        a.set(inst.rows() + n, j, 1);
        a.set(inst.rows() + n, dup, -1);
    }
    return IlpInstance(std::move(a), std::move(b));
}

}  // namespace ilpkit
