#pragma once

#include <optional>
#include <string>
#include <vector>

#include "structure.hpp"

namespace ilpkit {

// a conformally below b: sign-compatible and componentwise no larger
inline bool conformal_leq(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error(Error::dimension, "conformal_leq: length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > 0 && (b[i] < a[i])) return false;
        if (a[i] < 0 && (b[i] > a[i])) return false;
    }
    return true;
}

struct GraverBasis {
    Mat matrix;
    std::vector<Vec> vectors;  // ascending l1 shells, lexicographic within a shell
    Int g1 = 0;
    Int g_inf = 0;
    Int enumeration_bound = 0;
};

namespace detail {

// Enumerates one l1 shell in lexicographic order, feeding exact kernel
// vectors to `emit`. Partial row sums are pruned against the largest change
// the remaining coordinates could still make; that never discards a kernel
// vector, so the emitted sequence is the same as without pruning.
struct ShellEnum {
    const Mat& a;
    std::vector<Int> sufmax;  // sufmax[i*(l+1)+j] = max |a_i,j'| over j' >= j
    std::uint64_t visited = 0;
    std::uint64_t budget;

    ShellEnum(const Mat& a_, std::uint64_t budget_) : a(a_), budget(budget_) {
        std::size_t k = a.rows(), l = a.cols();
        sufmax.assign(k * (l + 1), 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = l; j-- > 0;) {
                Int v = a.at(i, j);
                sufmax[i * (l + 1) + j] = std::max(sufmax[i * (l + 1) + j + 1], v < 0 ? -v : v);
            }
    }

    template <typename Emit>
    void run(Int shell, Emit&& emit) {
        Vec v(a.cols(), 0), sums(a.rows(), 0);
        rec(0, shell, v, sums, emit);
    }

    template <typename Emit>
    void rec(std::size_t j, Int rem, Vec& v, Vec& sums, Emit&& emit) {
        std::size_t k = a.rows(), l = a.cols();
        if (j == l) {
            // rem == 0 and all row sums zero guaranteed by the last-level prune
            emit(v);
            return;
        }
        Int lo = -rem, hi = rem;
        if (j == l - 1) {
            // last coordinate must absorb the whole remaining norm
            for (Int val : rem == 0 ? std::vector<Int>{0} : std::vector<Int>{-rem, rem}) {
                if (++visited > budget)
                    throw Error(Error::budget, "graver enumeration budget exhausted");
                bool ok = true;
                for (std::size_t i = 0; i < k && ok; ++i)
                    if (sums[i] + a.at(i, j) * val != 0) ok = false;
                if (!ok) continue;
                v[j] = val;
                for (std::size_t i = 0; i < k; ++i) sums[i] += a.at(i, j) * val;
                rec(j + 1, 0, v, sums, emit);
                for (std::size_t i = 0; i < k; ++i) sums[i] -= a.at(i, j) * val;
                v[j] = 0;
            }
            return;
        }
        for (Int val = lo; val <= hi; ++val) {
            if (++visited > budget)
                throw Error(Error::budget, "graver enumeration budget exhausted");
            Int rem2 = rem - (val < 0 ? -val : val);
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i) {
                Int s = sums[i] + a.at(i, j) * val;
                Int reach = checked_mul(rem2, sufmax[i * (l + 1) + j + 1]);
                if (s > reach || s < -reach) ok = false;
            }
            if (!ok) continue;
            v[j] = val;
            for (std::size_t i = 0; i < k; ++i) sums[i] += a.at(i, j) * val;
            rec(j + 1, rem2, v, sums, emit);
            for (std::size_t i = 0; i < k; ++i) sums[i] -= a.at(i, j) * val;
            v[j] = 0;
        }
    }
};

}  // namespace detail

inline Int default_graver_bound(const Mat& a, int td_limit = 20) {
    int td = dual_treedepth(a, td_limit).depth;
    Int delta = a.max_abs();
    // (2*delta+1)^(2^td - 1); doubly exponential, so overflow is the common
    // failure mode and must surface as a clean size error
    Int expo = checked_sub(checked_pow(2, td), 1);
    return checked_pow(checked_add(checked_mul(2, delta), 1), expo);
}

// All conformally minimal non-zero integer kernel vectors of l1 norm up to
// the bound. With the default treedepth bound the result is the full Graver
// basis; with an explicit smaller bound it is the truncation to that ball.
inline GraverBasis graver_basis(const Mat& a, std::optional<Int> l1_bound = {},
                                std::uint64_t node_budget = 50'000'000) {
    GraverBasis basis;
    basis.matrix = a;
    Int bound;
    try {
        bound = l1_bound ? *l1_bound : default_graver_bound(a);
    } catch (const Error& e) {
        if (e.kind == Error::overflow)
            throw Error(Error::budget,
                        "default enumeration bound overflows 64 bits; pass an explicit l1 bound");
        throw;
    }
    if (bound < 0) throw Error(Error::precondition, "negative l1 bound");
    basis.enumeration_bound = bound;
    if (a.cols() == 0) return basis;
    // partial row sums stay within 2*delta*bound; verify once so the inner
    // loops can use unchecked arithmetic
    checked_mul(checked_mul(2, std::max<Int>(1, a.max_abs())), std::max<Int>(1, bound));

    detail::ShellEnum en(a, node_budget);
    for (Int shell = 1; shell <= bound; ++shell) {
        en.run(shell, [&](const Vec& v) {
            for (const Vec& g : basis.vectors)
                if (conformal_leq(g, v)) return;  // dominated, not minimal
            basis.vectors.push_back(v);
            basis.g1 = std::max(basis.g1, norm_1(v));
            basis.g_inf = std::max(basis.g_inf, norm_inf(v));
        });
    }
    return basis;
}

struct NormBoundReport {
    Int delta = 0;
    int treedepth = 0;
    std::optional<Int> lemma_bound;  // (2*delta+1)^(2^td - 1) when representable
    Int g1 = 0;
    Int g_inf = 0;
    bool lemma_holds = false;
    std::optional<bool> one_row_holds;      // single non-zero row: g1 <= 2*delta - 1
    std::optional<Int> blocks_g1_max;       // decomposable matrices only
    std::optional<bool> decomposable_holds; // g1 == max over block components
};

inline NormBoundReport certify_norm_bounds(const Mat& a, std::optional<Int> l1_bound = {},
                                           int td_limit = 20) {
    NormBoundReport rep;
    rep.delta = a.max_abs();
    rep.treedepth = dual_treedepth(a, td_limit).depth;
    try {
        Int expo = checked_sub(checked_pow(2, rep.treedepth), 1);
        rep.lemma_bound = checked_pow(checked_add(checked_mul(2, rep.delta), 1), expo);
    } catch (const Error&) {
        rep.lemma_bound = std::nullopt;
    }
    GraverBasis basis = graver_basis(a, l1_bound);
    rep.g1 = basis.g1;
    rep.g_inf = basis.g_inf;
    rep.lemma_holds = !rep.lemma_bound || rep.g1 <= *rep.lemma_bound;

    if (a.rows() == 1 && rep.delta > 0)
        rep.one_row_holds = rep.g1 <= 2 * rep.delta - 1;

    BlockDecomposition dec = block_components(a);
    if (dec.blocks.size() + (dec.free_cols.empty() ? 0 : 1) >= 2) {
        Int mx = dec.free_cols.empty() ? 0 : 1;  // free coordinates contribute unit vectors
        for (const auto& blk : dec.blocks) {
            if (blk.cols.empty()) continue;  // all-zero row, trivial kernel
            GraverBasis sub = graver_basis(submatrix(a, blk.rows, blk.cols), l1_bound);
            mx = std::max(mx, sub.g1);
        }
        rep.blocks_g1_max = mx;
        rep.decomposable_holds = rep.g1 == mx;
    }
    return rep;
}

struct ConformalDecomposition {
    std::vector<std::pair<Int, Vec>> parts;  // (multiplier, basis vector)
};

// Greedy reconstruction of u as a sign-compatible sum of Graver vectors.
// Each subtraction keeps the remainder conformally below u, so every part is
// sign-compatible with the original u.
inline ConformalDecomposition check_conformal_decomposition(const Mat& a, const Vec& u,
                                                            std::optional<Int> l1_bound = {}) {
    if (u.size() != a.cols()) throw Error(Error::dimension, "vector length mismatch");
    for (Int s : mat_vec(a, u))
        if (s != 0) throw Error(Error::precondition, "vector not in the kernel");
    GraverBasis basis = graver_basis(a, l1_bound);
    ConformalDecomposition dec;
    Vec r = u;
    while (norm_1(r) != 0) {
        const Vec* pick = nullptr;
        for (const Vec& g : basis.vectors)
            if (conformal_leq(g, r)) {
                pick = &g;
                break;
            }
        if (!pick)
            throw Error(Error::internal, "no basis vector conformally below remainder");
        Int lam = 0;
        for (std::size_t i = 0; i < r.size(); ++i)
            if ((*pick)[i] != 0) {
                Int q = r[i] / (*pick)[i];  // same sign, so q >= 1
                lam = lam == 0 ? q : std::min(lam, q);
            }
        dec.parts.emplace_back(lam, *pick);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lam * (*pick)[i];
    }
    return dec;
}

}  // namespace ilpkit
