#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graver.hpp"
#include "instance.hpp"

namespace ilpkit {

inline Int floor_div(Int a, Int b) {
    Int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline Int ceil_div(Int a, Int b) { return -floor_div(-a, b); }

struct SolveReport {
    enum Verdict { feasible, infeasible };
    Verdict verdict = infeasible;
    std::optional<Solution> witness;
    std::string method;
    std::uint64_t explored_states = 0;
    Int bound = 0;  // box cap / DP box / tube radius, depending on method
};

constexpr std::uint64_t kDefaultStateBudget = 20'000'000;

namespace detail {

// Shared search core for the bounded exhaustive solver and the solution
// enumerator: depth-first over columns in index order with ascending values,
// so the first full assignment found is the lexicographically smallest one.
// Three reductions, all solution-preserving inside the effective box:
//   - iterated interval tightening of the per-column bounds,
//   - per-row reachability windows against the unfixed remainder,
//   - forcing of rows with a single unfixed column.
struct BoxCore {
    const Mat& a;
    const Vec& b;
    std::vector<Int> lo, hi;  // effective per-column bounds
    std::vector<std::vector<std::pair<std::size_t, Int>>> col_rows;
    std::vector<std::vector<std::size_t>> row_cols;
    Vec cur, minrem, maxrem;
    std::vector<int> unfixed;
    Vec vals;
    std::vector<char> is_fixed;
    std::uint64_t work = 0;
    std::uint64_t budget;
    bool root_infeasible = false;

    BoxCore(const IlpInstance& inst, const Vec& box, std::uint64_t budget_)
        : a(inst.a), b(inst.b), budget(budget_) {
        std::size_t k = a.rows(), l = a.cols();
        if (box.size() != l) throw Error(Error::dimension, "box length mismatch");
        lo.resize(l);
        hi.resize(l);
        for (std::size_t j = 0; j < l; ++j) {
            lo[j] = std::max<Int>(0, inst.lower[j]);
            hi[j] = inst.upper[j] ? std::min(*inst.upper[j], box[j]) : box[j];
        }
        if (!tighten()) {
            root_infeasible = true;
            return;
        }
        col_rows.resize(l);
        row_cols.resize(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < l; ++j)
                if (a.at(i, j) != 0) {
                    col_rows[j].emplace_back(i, a.at(i, j));
                    row_cols[i].push_back(j);
                }
        cur.assign(k, 0);
        minrem.assign(k, 0);
        maxrem.assign(k, 0);
        unfixed.assign(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            Int mn = 0, mx = 0, mass = 0;
            for (std::size_t j : row_cols[i]) {
                Int c = a.at(i, j);
                Int tlo = checked_mul(c, lo[j]), thi = checked_mul(c, hi[j]);
                mn = checked_add(mn, std::min(tlo, thi));
                mx = checked_add(mx, std::max(tlo, thi));
                mass = checked_add(mass, std::max(tlo < 0 ? -tlo : tlo, thi < 0 ? -thi : thi));
                unfixed[i]++;
            }
            // partial sums stay within +-mass and the window tests add two
            // such terms, so this preflight lets fix/undo run unchecked
            checked_add(checked_add(mass, mass), b[i] < 0 ? -b[i] : b[i]);
            minrem[i] = mn;
            maxrem[i] = mx;
            if (mn > b[i] || mx < b[i]) {
                root_infeasible = true;
                return;
            }
        }
        vals = lo;  // zero columns thereby sit at their smallest value
        is_fixed.assign(l, 0);
    }

    // interval propagation on the rows until fixpoint (or a pass cap; it is
    // a pure strengthening, never required for correctness)
    bool tighten() {
        std::size_t k = a.rows(), l = a.cols();
        for (int pass = 0; pass < 64; ++pass) {
            bool changed = false;
            for (std::size_t j = 0; j < l; ++j)
                if (lo[j] > hi[j]) return false;
            for (std::size_t i = 0; i < k; ++i) {
                Int mn = 0, mx = 0;
                for (std::size_t j = 0; j < l; ++j) {
                    Int c = a.at(i, j);
                    if (c == 0) continue;
                    mn = checked_add(mn, std::min(checked_mul(c, lo[j]), checked_mul(c, hi[j])));
                    mx = checked_add(mx, std::max(checked_mul(c, lo[j]), checked_mul(c, hi[j])));
                }
                if (mn > b[i] || mx < b[i]) return false;
                for (std::size_t j = 0; j < l; ++j) {
                    Int c = a.at(i, j);
                    if (c == 0) continue;
                    Int tlo = std::min(checked_mul(c, lo[j]), checked_mul(c, hi[j]));
                    Int thi = std::max(checked_mul(c, lo[j]), checked_mul(c, hi[j]));
                    // residual interval for c*x_j from this row
                    Int rlo = checked_sub(b[i], checked_sub(mx, thi));
                    Int rhi = checked_sub(b[i], checked_sub(mn, tlo));
                    Int nlo = c > 0 ? ceil_div(rlo, c) : ceil_div(-rhi, -c);
                    Int nhi = c > 0 ? floor_div(rhi, c) : floor_div(-rlo, -c);
                    if (nlo > lo[j]) {
                        lo[j] = nlo;
                        changed = true;
                    }
                    if (nhi < hi[j]) {
                        hi[j] = nhi;
                        changed = true;
                    }
                    if (lo[j] > hi[j]) return false;
                }
            }
            if (!changed) break;
        }
        return true;
    }

    bool fix(std::size_t j, Int v, std::vector<std::size_t>& trail) {
        vals[j] = v;
        is_fixed[j] = 1;
        trail.push_back(j);
        bool ok = true;
        for (auto [i, c] : col_rows[j]) {
            cur[i] += c * v;
            minrem[i] -= std::min(c * lo[j], c * hi[j]);
            maxrem[i] -= std::max(c * lo[j], c * hi[j]);
            unfixed[i]--;
            if (cur[i] + minrem[i] > b[i] || cur[i] + maxrem[i] < b[i]) ok = false;
        }
        return ok;
    }

    void undo_to(std::size_t mark, std::vector<std::size_t>& trail) {
        while (trail.size() > mark) {
            std::size_t j = trail.back();
            trail.pop_back();
            Int v = vals[j];
            for (auto [i, c] : col_rows[j]) {
                cur[i] -= c * v;
                minrem[i] += std::min(c * lo[j], c * hi[j]);
                maxrem[i] += std::max(c * lo[j], c * hi[j]);
                unfixed[i]++;
            }
            is_fixed[j] = 0;
            vals[j] = lo[j];
        }
    }

    // rows with a single unfixed column pin that column; repeats until
    // stable. Forced values are uniquely determined, so no solution below
    // the current prefix is skipped.
    bool force(std::vector<std::size_t>& trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < a.rows(); ++i) {
                if (unfixed[i] != 1) continue;
                std::size_t j = row_cols[i][0];
                for (std::size_t cand : row_cols[i])
                    if (!is_fixed[cand]) {
                        j = cand;
                        break;
                    }
                Int c = a.at(i, j);
                Int need = b[i] - cur[i];
                if (need % c != 0) return false;
                Int v = need / c;
                if (v < lo[j] || v > hi[j]) return false;
                if (++work > budget) throw Error(Error::budget, "state budget exceeded");
                if (!fix(j, v, trail)) return false;
                changed = true;
            }
        }
        return true;
    }

    // emit(vals) returns true to stop the search
    template <typename Emit>
    bool dfs(std::size_t j, std::vector<std::size_t>& trail, Emit&& emit) {
        while (j < a.cols() && (is_fixed[j] || col_rows[j].empty())) ++j;
        if (j == a.cols()) {
            // every constrained column fixed; rows with unfixed[i]==0 were
            // checked exactly by the window test (minrem==maxrem==0)
            return emit(const_cast<const Vec&>(vals));
        }
        for (Int v = lo[j]; v <= hi[j]; ++v) {
            if (++work > budget) throw Error(Error::budget, "state budget exceeded");
            std::size_t mark = trail.size();
            if (fix(j, v, trail) && force(trail)) {
                if (dfs(j + 1, trail, emit)) return true;
            }
            undo_to(mark, trail);
        }
        return false;
    }

    template <typename Emit>
    void run(Emit&& emit) {
        if (root_infeasible) return;
        std::vector<std::size_t> trail;
        if (!force(trail)) return;
        dfs(0, trail, emit);
    }
};

}  // namespace detail

// Exhaustive feasibility inside 0 <= x <= box (further clipped by the
// instance bounds). Exact within that box; the witness, when one exists, is
// the lexicographically smallest boxed solution.
inline SolveReport solve_box(const IlpInstance& inst, const Vec& box,
                             std::uint64_t state_budget = kDefaultStateBudget) {
    inst.validate();
    SolveReport rep;
    rep.method = "box";
    detail::BoxCore core(inst, box, state_budget);
    for (std::size_t j = 0; j < inst.cols(); ++j)
        rep.bound = std::max(rep.bound, core.root_infeasible ? 0 : core.hi[j]);
    core.run([&](const Vec& x) {
        rep.verdict = SolveReport::feasible;
        rep.witness = Solution::of(x);
        return true;
    });
    rep.explored_states = core.work;
    return rep;
}

// All solutions inside the box, in lexicographic order. Columns outside
// every row are held at their lower bound: any other value solves the same
// system with a strictly larger support, so nothing of interest is lost and
// the output stays finite-minded on wide boxes.
inline std::vector<Solution> enumerate_solutions(const IlpInstance& inst, const Vec& box,
                                                 std::uint64_t state_budget = kDefaultStateBudget) {
    inst.validate();
    std::vector<Solution> out;
    detail::BoxCore core(inst, box, state_budget);
    core.run([&](const Vec& x) {
        out.push_back(Solution::of(x));
        return false;
    });
    return out;
}

// l * ((||A||inf + ||b||inf) * k)^(2k+1): some solution fits below this
// whenever any exists, so boxing the search there loses nothing.
inline Int papadimitriou_bound(const IlpInstance& inst) {
    Int k = static_cast<Int>(inst.rows()), l = static_cast<Int>(inst.cols());
    Int base = checked_mul(checked_add(inst.a.max_abs(), norm_inf(inst.b)), k);
    return checked_mul(l, checked_pow(base, checked_add(checked_mul(2, k), 1)));
}

// Dynamic program over column prefixes: states are reachable partial sums,
// kept only while each row can still reach b_i given the remaining columns'
// contribution window. Exact: infeasible means no solution in [0,B]^l and
// hence none at all.
inline SolveReport solve_papadimitriou(const IlpInstance& inst,
                                       std::uint64_t state_budget = kDefaultStateBudget) {
    inst.validate();
    if (!inst.standard_form())
        throw Error(Error::precondition, "dp solver requires standard form (x >= 0, no uppers)");
    SolveReport rep;
    rep.method = "dp";
    Int bound;
    try {
        bound = papadimitriou_bound(inst);
    } catch (const Error& e) {
        if (e.kind == Error::overflow)
            throw Error(Error::budget, "solution bound exceeds 64 bits; instance too large");
        throw;
    }
    rep.bound = bound;
    std::size_t k = inst.rows(), l = inst.cols();

    // per-column caps: [0, bound] tightened by interval propagation; the
    // preflight inside may overflow on huge bounds, which is a size problem
    auto caps_ptr = [&] {
        try {
            return std::make_unique<detail::BoxCore>(inst, Vec(l, bound), state_budget);
        } catch (const Error& e) {
            if (e.kind == Error::overflow)
                throw Error(Error::budget, "solution bound exceeds 64 bits; instance too large");
            throw;
        }
    }();
    const detail::BoxCore& caps = *caps_ptr;
    if (caps.root_infeasible) return rep;
    const Vec &lo = caps.lo, &hi = caps.hi;

    // suffix contribution windows
    std::vector<Int> sufmin(k * (l + 1), 0), sufmax(k * (l + 1), 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = l; j-- > 0;) {
            Int c = inst.a.at(i, j);
            sufmin[i * (l + 1) + j] = checked_add(
                sufmin[i * (l + 1) + j + 1], std::min(checked_mul(c, lo[j]), checked_mul(c, hi[j])));
            sufmax[i * (l + 1) + j] = checked_add(
                sufmax[i * (l + 1) + j + 1], std::max(checked_mul(c, lo[j]), checked_mul(c, hi[j])));
        }

    using Layer = std::map<Vec, Int>;  // partial sum -> value chosen at this column
    std::vector<Layer> layers(l + 1);
    layers[0].emplace(Vec(k, 0), -1);
    std::uint64_t work = 0;
    for (std::size_t j = 0; j < l; ++j) {
        for (const auto& [s, val] : layers[j]) {
            (void)val;
            for (Int v = lo[j]; v <= hi[j]; ++v) {
                if (++work > state_budget)
                    throw Error(Error::budget, "state budget exceeded");
                Vec t = s;
                bool ok = true;
                for (std::size_t i = 0; i < k; ++i) {
                    t[i] += inst.a.at(i, j) * v;
                    if (t[i] + sufmin[i * (l + 1) + j + 1] > inst.b[i] ||
                        t[i] + sufmax[i * (l + 1) + j + 1] < inst.b[i]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) layers[j + 1].try_emplace(std::move(t), v);
            }
        }
    }
    rep.explored_states = work;
    auto hit = layers[l].find(inst.b);
    if (hit == layers[l].end()) return rep;
    Vec x(l, 0), s = inst.b;
    for (std::size_t j = l; j-- > 0;) {
        Int v = layers[j + 1].at(s);
        x[j] = v;
        for (std::size_t i = 0; i < k; ++i) s[i] -= inst.a.at(i, j) * v;
    }
    rep.verdict = SolveReport::feasible;
    rep.witness = Solution::of(x);
    return rep;
}

namespace detail {

// p/q <= r/s for positive q, s
inline bool frac_leq(Int p, Int q, Int r, Int s) {
    return checked_mul(p, s) <= checked_mul(r, q);
}

// is there t in [0,1] with |p_i - t*b_i| <= r for every row?
inline bool in_tube(const Vec& p, const Vec& b, Int r) {
    Int lon = 0, lod = 1, hin = 1, hid = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        Int bi = b[i];
        if (bi == 0) {
            if (p[i] > r || p[i] < -r) return false;
            continue;
        }
        Int n1 = checked_sub(p[i], r), n2 = checked_add(p[i], r), den = bi;
        if (den < 0) {
            std::swap(n1, n2);
            n1 = -n1;
            n2 = -n2;
            den = -bi;
        }
        if (!frac_leq(lon, lod, n1, den)) {
            // does not lower the bound
        } else {
            lon = n1;
            lod = den;
        }
        if (!frac_leq(n2, den, hin, hid)) {
            // does not raise the bound
        } else {
            hin = n2;
            hid = den;
        }
        if (!frac_leq(lon, lod, hin, hid)) return false;
    }
    return true;
}

}  // namespace detail

// Feasibility via breadth-first search over lattice points near the segment
// {t*b : t in [0,1]}: moves are single column additions, so a path from 0 to
// b is exactly a solution (its column-use counts). Completeness of the
// radius cap 2*k*delta: a solution with N column copies v_1..v_N has
// sum(v_i - b/N) = 0 and each ||v_i - b/N||inf <= 2*delta (as ||b||inf <=
// N*delta), so by the Steinitz rearrangement the copies admit an order whose
// running sums stay within k*2*delta of the segment. Smaller radii can only
// miss solutions, hence the escalation loop below.
inline SolveReport solve_steinitz(const IlpInstance& inst, std::optional<Int> radius = {},
                                  std::uint64_t node_budget = 2'000'000) {
    inst.validate();
    if (!inst.standard_form())
        throw Error(Error::precondition, "steinitz solver requires standard form");
    SolveReport rep;
    rep.method = "steinitz";
    std::size_t k = inst.rows(), l = inst.cols();
    if (norm_inf(inst.b) == 0) {
        rep.verdict = SolveReport::feasible;
        rep.witness = Solution::of(Vec(l, 0));
        return rep;
    }
    Int delta = inst.a.max_abs();
    if (delta == 0) return rep;  // all moves are zero, b != 0 unreachable
    Int ceiling = checked_mul(2, checked_mul(static_cast<Int>(k), delta));
    Int r = radius ? std::clamp<Int>(*radius, 1, ceiling)
                   : std::min<Int>(checked_mul(static_cast<Int>(k), delta), ceiling);
    std::uint64_t nodes = 0;
    while (true) {
        std::map<Vec, int> came;  // point -> column used to reach it (-1 at origin)
        std::deque<Vec> queue;
        came.emplace(Vec(k, 0), -1);
        queue.emplace_back(k, 0);
        ++nodes;
        bool found = false;
        while (!queue.empty() && !found) {
            Vec p = std::move(queue.front());
            queue.pop_front();
            for (std::size_t j = 0; j < l && !found; ++j) {
                Vec q = p;
                bool zero = true;
                for (std::size_t i = 0; i < k; ++i) {
                    q[i] += inst.a.at(i, j);
                    if (inst.a.at(i, j) != 0) zero = false;
                }
                if (zero) continue;
                if (came.count(q) || !detail::in_tube(q, inst.b, r)) continue;
                if (++nodes > node_budget) throw Error(Error::budget, "node budget exceeded");
                came.emplace(q, static_cast<int>(j));
                if (q == inst.b)
                    found = true;
                else
                    queue.push_back(std::move(q));
            }
        }
        rep.explored_states = nodes;
        rep.bound = r;
        if (found) {
            const Vec origin(k, 0);
            Vec x(l, 0), p = inst.b;
            while (p != origin) {
                int j = came.at(p);
                x[j] += 1;
                for (std::size_t i = 0; i < k; ++i) p[i] -= inst.a.at(i, j);
            }
            rep.verdict = SolveReport::feasible;
            rep.witness = Solution::of(x);
            return rep;
        }
        if (r >= ceiling) return rep;  // exhaustive at the proven-complete radius
        r = std::min(checked_mul(2, r), ceiling);
    }
}

struct AugmentStep {
    Vec direction;
    Int step_length;
    Int gain;
};

struct AugmentResult {
    Solution optimum;
    Int objective_value = 0;
    std::vector<AugmentStep> steps;
};

// Graver-best augmentation, maximizing the linear objective. Each round
// applies the basis direction with the best total gain at its largest
// bound-feasible step length; for linear objectives this local search stops
// exactly at a global optimum. lambda_max caps the step length per round;
// the cap changes the step count, never the optimum reached.
inline AugmentResult solve_graver_augment(const IlpInstance& inst, const Vec& x0,
                                          std::optional<Int> l1_bound = {},
                                          std::optional<Int> lambda_max = {}) {
    inst.validate();
    if (!inst.objective) throw Error(Error::precondition, "augmentation needs an objective");
    if (x0.size() != inst.cols()) throw Error(Error::dimension, "start vector length mismatch");
    if (!inst.satisfies(x0)) throw Error(Error::precondition, "start vector not feasible");
    for (std::size_t j = 0; j < inst.cols(); ++j)
        if (!inst.upper[j])
            throw Error(Error::precondition, "augmentation needs finite upper bounds");

    GraverBasis basis = graver_basis(inst.a, l1_bound);
    const Vec& w = *inst.objective;
    AugmentResult res;
    Vec x = x0;
    Int value = 0;
    for (std::size_t j = 0; j < inst.cols(); ++j) value = checked_add(value, checked_mul(w[j], x[j]));
    while (true) {
        Int best_gain = 0, best_lam = 0;
        const Vec* best_g = nullptr;
        for (const Vec& g : basis.vectors) {
            Int wg = 0;
            for (std::size_t j = 0; j < inst.cols(); ++j)
                wg = checked_add(wg, checked_mul(w[j], g[j]));
            if (wg <= 0) continue;
            Int lam = -1;  // max lambda >= 0 keeping lower <= x + lam*g <= upper
            for (std::size_t j = 0; j < inst.cols(); ++j) {
                if (g[j] == 0) continue;
                Int room = g[j] > 0 ? (*inst.upper[j] - x[j]) / g[j] : (x[j] - inst.lower[j]) / -g[j];
                lam = lam < 0 ? room : std::min(lam, room);
            }
            if (lambda_max && lam > *lambda_max) lam = *lambda_max;
            if (lam < 1) continue;
            Int gain = checked_mul(lam, wg);
            if (gain > best_gain) {
                best_gain = gain;
                best_lam = lam;
                best_g = &g;
            }
        }
        if (!best_g) break;
        for (std::size_t j = 0; j < inst.cols(); ++j) x[j] += best_lam * (*best_g)[j];
        value = checked_add(value, best_gain);
        res.steps.push_back({*best_g, best_lam, best_gain});
    }
    res.optimum = Solution::of(x);
    res.objective_value = value;
    return res;
}

struct SupportReport {
    Solution solution;
    std::size_t support_size = 0;
    Int delta = 0;
    Int h = 0;          // subset size parameter: c * ceil(log2(delta+1)) * rows
    Int threshold = 0;  // 2h, the support size the pigeonhole step needs
    std::uint64_t reduction_steps = 0;
};

namespace detail {
inline Int support_h(const IlpInstance& inst, Int c) {
    Int delta = inst.a.max_abs();
    // ceil(log2(delta+1)) == bit_length(delta)
    return checked_mul(checked_mul(c, bit_length(delta)), static_cast<Int>(inst.rows()));
}
}  // namespace detail

// Smallest-support solution within the Papadimitriou box, by exhaustive
// enumeration: containment-minimal support first, then fewer non-zeros,
// then the lexicographically smallest support set, then the smallest x.
inline SupportReport minimal_support(const IlpInstance& inst, Int c = 2,
                                     std::uint64_t state_budget = kDefaultStateBudget) {
    inst.validate();
    if (!inst.standard_form())
        throw Error(Error::precondition, "support search requires standard form");
    Int bound;
    try {
        bound = papadimitriou_bound(inst);
    } catch (const Error& e) {
        if (e.kind == Error::overflow)
            throw Error(Error::budget, "solution bound exceeds 64 bits; instance too large");
        throw;
    }
    std::vector<Solution> all;
    try {
        all = enumerate_solutions(inst, Vec(inst.cols(), bound), state_budget);
    } catch (const Error& e) {
        if (e.kind == Error::overflow)
            throw Error(Error::budget, "solution bound exceeds 64 bits; instance too large");
        throw;
    }
    if (all.empty()) throw Error(Error::precondition, "instance is infeasible");
    const Solution* best = nullptr;
    for (const Solution& s : all) {
        bool dominated = false;
        for (const Solution& t : all) {
            if (t.support == s.support) continue;
            if (std::includes(s.support.begin(), s.support.end(), t.support.begin(),
                              t.support.end())) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        if (!best) {
            best = &s;
            continue;
        }
        if (s.support.size() != best->support.size()) {
            if (s.support.size() < best->support.size()) best = &s;
            continue;
        }
        if (s.support != best->support) {
            if (s.support < best->support) best = &s;
            continue;
        }
        if (s.x < best->x) best = &s;
    }
    SupportReport rep;
    rep.solution = *best;
    rep.support_size = best->support.size();
    rep.delta = inst.a.max_abs();
    rep.h = detail::support_h(inst, c);
    rep.threshold = checked_mul(2, rep.h);
    return rep;
}

// One pigeonhole swap: among the h-subsets I of supp(x), two with equal
// A*1_I trade places. Both I', I'' lie inside the support, so the swap never
// grows it; it shrinks iff some traded coordinate drops to zero.
inline std::optional<Solution> support_reduce_step(const IlpInstance& inst, const Vec& x, Int h) {
    inst.validate();
    if (!inst.standard_form())
        throw Error(Error::precondition, "support reduction requires standard form");
    if (!inst.satisfies(x)) throw Error(Error::precondition, "x is not a solution");
    Solution s = Solution::of(x);
    if (h < 1 || s.support.size() < 2 * static_cast<std::size_t>(h))
        throw Error(Error::precondition, "support smaller than 2h");

    std::vector<std::size_t> idx(h);  // positions into s.support, lexicographic
    for (Int t = 0; t < h; ++t) idx[t] = t;
    std::map<Vec, std::vector<std::size_t>> seen;  // A*1_I -> first I
    auto indicator_image = [&](const std::vector<std::size_t>& positions) {
        Vec img(inst.rows(), 0);
        for (std::size_t p : positions)
            for (std::size_t i = 0; i < inst.rows(); ++i) img[i] += inst.a.at(i, s.support[p]);
        return img;
    };
    while (true) {
        Vec img = indicator_image(idx);
        auto [it, fresh] = seen.try_emplace(img, idx);
        if (!fresh) {
            const std::vector<std::size_t>&first = it->second, &second = idx;
            Vec y1 = x, y2 = x;
            for (std::size_t p : first) {
                y1[s.support[p]] -= 1;
                y2[s.support[p]] += 1;
            }
            for (std::size_t p : second) {
                y1[s.support[p]] += 1;
                y2[s.support[p]] -= 1;
            }
            Solution s1 = Solution::of(y1), s2 = Solution::of(y2);
            if (s1.support.size() != s2.support.size())
                return s1.support.size() < s2.support.size() ? s1 : s2;
            return s1.x < s2.x ? s1 : s2;
        }
        // next lexicographic h-subset
        std::size_t n = s.support.size();
        Int t = h - 1;
        while (t >= 0 && idx[t] == n - static_cast<std::size_t>(h - t)) --t;
        if (t < 0) return std::nullopt;  // no collision in the whole family
        ++idx[t];
        for (Int u = t + 1; u < h; ++u) idx[u] = idx[u - 1] + 1;
    }
}

}  // namespace ilpkit
