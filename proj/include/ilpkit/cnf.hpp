#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"

namespace ilpkit {

// Clauses as DIMACS-style signed literals: +v / -v, variables 1..num_vars.
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

// Bounded-occurrence normal form accepted by the ILP encoding: every clause
// has 2 or 3 literals over distinct variables, every variable occurs in at
// most 4 clauses and at most 3 times with the same sign. Width-2 clauses are
// admitted on purpose: with exactly-3 clauses alone, an occurrence cap of 4
// cannot absorb the equality cycles that the splitting step introduces.
inline bool validate_34sat(const CnfFormula& f, std::string* why = nullptr) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (f.num_vars < 1) return fail("no variables");
    std::vector<int> occ(f.num_vars + 1, 0), pos(f.num_vars + 1, 0), neg(f.num_vars + 1, 0);
    for (const auto& c : f.clauses) {
        if (c.size() < 2 || c.size() > 3) return fail("clause width not 2 or 3");
        std::set<int> vars;
        for (int lit : c) {
            int v = lit > 0 ? lit : -lit;
            if (v < 1 || v > f.num_vars) return fail("literal out of range");
            if (!vars.insert(v).second) return fail("repeated variable in clause");
            occ[v]++;
            (lit > 0 ? pos[v] : neg[v])++;
        }
    }
    for (int v = 1; v <= f.num_vars; ++v) {
        if (occ[v] > 4) return fail("variable occurs more than 4 times");
        if (pos[v] > 3 || neg[v] > 3) return fail("same sign more than 3 times");
    }
    return true;
}

inline bool brute_force_sat(const CnfFormula& f) {
    if (f.num_vars > 25) throw Error(Error::precondition, "brute force limited to 25 variables");
    for (unsigned long long m = 0; m < (1ULL << f.num_vars); ++m) {
        bool ok = true;
        for (const auto& c : f.clauses) {
            bool sat = false;
            for (int lit : c) {
                int v = lit > 0 ? lit : -lit;
                bool val = (m >> (v - 1)) & 1;
                if ((lit > 0) == val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

// Plain DPLL with unit propagation, first-unassigned branching. Independent
// of the reduction path; serves as the satisfiability oracle in tests.
namespace detail {
inline bool dpll_rec(const std::vector<std::vector<int>>& clauses, std::vector<int>& assign) {
    // assign: 0 unknown, +1 true, -1 false, indexed by variable
    std::vector<int> trail;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : clauses) {
            int unassigned = 0, last = 0;
            bool sat = false;
            for (int lit : c) {
                int v = lit > 0 ? lit : -lit;
                int a = assign[v];
                if (a == 0) {
                    unassigned++;
                    last = lit;
                } else if ((lit > 0) == (a > 0)) {
                    sat = true;
                    break;
                }
            }
            if (sat) continue;
            if (unassigned == 0) {
                for (int v : trail) assign[v] = 0;
                return false;
            }
            if (unassigned == 1) {
                int v = last > 0 ? last : -last;
                assign[v] = last > 0 ? 1 : -1;
                trail.push_back(v);
                changed = true;
            }
        }
    }
    int branch = 0;
    for (std::size_t v = 1; v < assign.size(); ++v)
        if (assign[v] == 0) {
            branch = static_cast<int>(v);
            break;
        }
    if (branch == 0) return true;
    for (int val : {1, -1}) {
        assign[branch] = val;
        if (dpll_rec(clauses, assign)) return true;
        assign[branch] = 0;
    }
    for (int v : trail) assign[v] = 0;
    return false;
}
}  // namespace detail

inline bool dpll_sat(const CnfFormula& f) {
    std::vector<int> assign(f.num_vars + 1, 0);
    return detail::dpll_rec(f.clauses, assign);
}

namespace detail {

// Fixed formulas standing in for degenerate normalization outcomes, so the
// output always carries at least one clause and validates.
inline CnfFormula canonical_unsat() {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses = {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}};
    return f;
}

inline CnfFormula canonical_sat() {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses = {{1, 2}};
    return f;
}

}  // namespace detail

// Rewrites a CNF with clauses of width <= 3 into the bounded-occurrence form
// above, preserving satisfiability.
//
// Stage 1 (normalize): duplicate literals are merged, tautological clauses
// dropped, unit clauses eliminated by propagation to a fixpoint, and the
// remaining variables renumbered contiguously. A derived contradiction maps
// to a fixed unsatisfiable output, an empty residue to a fixed satisfiable
// one.
//
// Stage 2 (split): while some variable v occurs more than 4 times or more
// than 3 times with one sign, v's p occurrences are replaced by p copies and
// the copies chained by the implication cycle
//   (-c_1 v c_2), (-c_2 v c_3), ..., (-c_p v c_1),
// which forces all copies equal. Each copy then occurs 3 times, at most
// twice per sign, and the cycle clauses are width-2 over distinct variables.
inline CnfFormula sat_to_34sat(const CnfFormula& input) {
    for (const auto& c : input.clauses)
        if (c.size() > 3) throw Error(Error::precondition, "clause wider than 3 literals");
    for (const auto& c : input.clauses)
        for (int lit : c) {
            int v = lit > 0 ? lit : -lit;
            if (v < 1 || v > input.num_vars)
                throw Error(Error::precondition, "literal out of range");
        }

    // normalize
    std::vector<std::vector<int>> clauses;
    for (const auto& c : input.clauses) {
        std::set<int> lits(c.begin(), c.end());
        bool taut = false;
        for (int lit : lits)
            if (lits.count(-lit)) {
                taut = true;
                break;
            }
        if (taut) continue;
        clauses.emplace_back(lits.begin(), lits.end());
    }
    std::vector<int> assign(input.num_vars + 1, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<int>> next;
        for (const auto& c : clauses) {
            std::vector<int> rest;
            bool sat = false;
            for (int lit : c) {
                int v = lit > 0 ? lit : -lit;
                if (assign[v] == 0)
                    rest.push_back(lit);
                else if ((lit > 0) == (assign[v] > 0))
                    sat = true;
            }
            if (sat) continue;
            if (rest.empty()) return detail::canonical_unsat();
            if (rest.size() == 1) {
                int lit = rest[0];
                int v = lit > 0 ? lit : -lit;
                int want = lit > 0 ? 1 : -1;
                if (assign[v] != 0 && assign[v] != want) return detail::canonical_unsat();
                assign[v] = want;
                changed = true;
                continue;
            }
            next.push_back(rest);
        }
        clauses = std::move(next);
    }
    if (clauses.empty()) return detail::canonical_sat();

    // renumber survivors contiguously
    std::map<int, int> rename;
    for (const auto& c : clauses)
        for (int lit : c) rename.emplace(lit > 0 ? lit : -lit, 0);
    int n = 0;
    for (auto& [v, id] : rename) id = ++n;
    for (auto& c : clauses)
        for (int& lit : c) lit = lit > 0 ? rename[lit] : -rename[-lit];

    // split overloaded variables
    for (int v = 1; v <= n; ++v) {
        std::vector<std::pair<std::size_t, std::size_t>> where;  // (clause, slot)
        int posc = 0, negc = 0;
        for (std::size_t i = 0; i < clauses.size(); ++i)
            for (std::size_t s = 0; s < clauses[i].size(); ++s) {
                int lit = clauses[i][s];
                if (lit == v || lit == -v) {
                    where.emplace_back(i, s);
                    (lit > 0 ? posc : negc)++;
                }
            }
        if (where.size() <= 4 && posc <= 3 && negc <= 3) continue;
        std::vector<int> copies(where.size());
        copies[0] = v;
        for (std::size_t t = 1; t < where.size(); ++t) copies[t] = ++n;
        for (std::size_t t = 0; t < where.size(); ++t) {
            auto [i, s] = where[t];
            clauses[i][s] = clauses[i][s] > 0 ? copies[t] : -copies[t];
        }
        for (std::size_t t = 0; t < copies.size(); ++t) {
            int a = copies[t], b = copies[(t + 1) % copies.size()];
            clauses.push_back({-a, b});
        }
    }

    CnfFormula out;
    out.num_vars = n;
    out.clauses = std::move(clauses);
    std::string why;
    if (!validate_34sat(out, &why)) throw Error(Error::internal, "splitting failed: " + why);
    return out;
}

}  // namespace ilpkit
