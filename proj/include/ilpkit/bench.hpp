#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cnf.hpp"
#include "detecting.hpp"
#include "gadgets.hpp"
#include "graver.hpp"
#include "instance.hpp"
#include "reduction.hpp"
#include "solvers.hpp"
#include "structure.hpp"

namespace ilpkit {

struct BenchCheck {
    std::string name;
    bool pass = false;
    std::string detail;  // counts, a recorded instance, or empty
};

// One suite run. Everything here is a pure function of (suite, seed,
// trials): the generators draw in a fixed order regardless of per-trial
// outcomes, so reports are reproducible byte for byte.
struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<BenchCheck> checks;
    std::vector<std::pair<std::string, Int>> measurements;

    bool pass() const {
        for (const BenchCheck& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline CnfFormula bench_cnf(SplitMix64& rng, int n, std::size_t m, std::size_t width = 3) {
    CnfFormula f;
    f.num_vars = n;
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<int> vars;
        while (vars.size() < width) {
            int v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        std::vector<int> clause;
        for (int v : vars) clause.push_back(rng.coin() ? v : -v);
        f.clauses.push_back(clause);
    }
    return f;
}

inline Mat bench_mat(SplitMix64& rng, std::size_t k, std::size_t l, Int lo, Int hi) {
    Mat a(k, l);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < l; ++j) a.set(i, j, rng.range(lo, hi));
    return a;
}

// The clause encoding promises: k = n + 2m rows, l = 2n + 2m columns, 0/1
// entries, at most four non-zeros per row and per column, targets in 1..3.
inline bool encoding_audit(const CnfFormula& f, const ReductionStep& ilp) {
    std::size_t n = static_cast<std::size_t>(f.num_vars), m = f.clauses.size();
    if (ilp.instance.rows() != n + 2 * m || ilp.instance.cols() != 2 * n + 2 * m) return false;
    for (Int v : ilp.instance.a.data())
        if (v != 0 && v != 1) return false;
    for (Int v : ilp.instance.b)
        if (v < 1 || v > 3) return false;
    std::vector<int> col_nz(ilp.instance.cols(), 0);
    for (std::size_t i = 0; i < ilp.instance.rows(); ++i) {
        int row_nz = 0;
        for (std::size_t j = 0; j < ilp.instance.cols(); ++j)
            if (ilp.instance.a.at(i, j) != 0) {
                ++row_nz;
                ++col_nz[j];
            }
        if (row_nz > 4) return false;
    }
    return *std::max_element(col_nz.begin(), col_nz.end()) <= 4;
}

// Slices a stacked detecting matrix back into its diagonal blocks; fails if
// the blocks do not tile the matrix or a non-zero falls outside them.
inline std::optional<std::vector<Mat>> detecting_blocks(const DetectingMatrix& dm) {
    std::vector<Mat> out;
    std::size_t r0 = 0, c0 = 0, in_blocks = 0;
    for (auto [br, bc] : dm.blocks) {
        if (r0 + br > dm.matrix.rows() || c0 + bc > dm.matrix.cols()) return std::nullopt;
        Mat blk(br, bc);
        for (std::size_t i = 0; i < br; ++i)
            for (std::size_t j = 0; j < bc; ++j) {
                Int v = dm.matrix.at(r0 + i, c0 + j);
                blk.set(i, j, v);
                in_blocks += v != 0;
            }
        out.push_back(std::move(blk));
        r0 += br;
        c0 += bc;
    }
    if (r0 != dm.matrix.rows() || c0 != dm.matrix.cols()) return std::nullopt;
    std::size_t nz = 0;
    for (Int v : dm.matrix.data()) nz += v != 0;
    if (nz != in_blocks) return std::nullopt;
    return out;
}

// Verifies each distinct block content once; repeats are matched by
// equality, so the expensive uniqueness search never runs twice.
struct BlockVerifier {
    Int d;
    std::vector<Mat> verified;

    bool check(const Mat& m) {
        for (const Mat& v : verified)
            if (v == m) return true;
        if (!verify_detecting(m, d).verified) return false;
        verified.push_back(m);
        return true;
    }
};

}  // namespace detail

// Random 3-CNFs through the whole reduction chain: the relaxed formula, the
// clause encoding, the compressed system, the coefficient-reduced system,
// and the target-reduced system must all agree with brute-force
// satisfiability. The encoding stage is decided by a box search; the later
// stages are decided by certification: verified detecting blocks plus
// recomputed products carry the encoding verdict through the compression,
// the row-recombination certificates carry it through the last two stages,
// and on the satisfiable side the lifted witnesses confirm each system
// directly.
inline SuiteResult bench_pipeline(std::uint64_t seed, int trials = 200, int max_vars = 6) {
    if (max_vars < 3) throw Error(Error::precondition, "pipeline bench needs max_vars >= 3");
    SuiteResult res{"pipeline", seed, trials, {}, {}};
    SplitMix64 rng(seed);
    detail::BlockVerifier blocks{4, {}};
    int sat = 0, unsat = 0;
    int relaxed_ok = 0, audit_ok = 0, encode_ok = 0, comp_ok = 0, coeff_ok = 0, target_ok = 0;
    int shape_ok = 0;
    Int max_rows = 0;

    for (int trial = 0; trial < trials; ++trial) {
        // A lane of width-3 clauses over 3..6 variables is satisfiable in
        // practice (an unsatisfiable width-3 draw needs every sign pattern
        // on some triple), so every fourth trial draws width-2 clauses over
        // a single pair, where contradictions are common. Width-2 clauses
        // are legal throughout the pipeline.
        bool dense = trial % 4 == 3;
        int n = dense ? 2 : 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_vars - 2)));
        std::size_t m = dense ? 8 + rng.below(3) : 1 + rng.below(6);
        CnfFormula f = detail::bench_cnf(rng, n, m, dense ? 2 : 3);
        bool expect = brute_force_sat(f);
        (expect ? sat : unsat)++;

        PipelineResult pipe = run_pipeline(f, true);
        max_rows = std::max(max_rows, static_cast<Int>(pipe.ilp.instance.rows()));

        relaxed_ok += validate_34sat(pipe.relaxed) && dpll_sat(pipe.relaxed) == expect;
        audit_ok += detail::encoding_audit(pipe.relaxed, pipe.ilp);

        SolveReport enc = solve_box(pipe.ilp.instance, Vec(pipe.ilp.instance.cols(), 3));
        bool enc_feasible = enc.verdict == SolveReport::feasible;
        encode_ok += enc_feasible == expect;

        // compression: blocks detect, inputs are admissible, products match
        bool certified = pipe.compressed.detecting.has_value();
        if (certified) {
            auto sliced = detail::detecting_blocks(*pipe.compressed.detecting);
            certified = sliced.has_value();
            if (certified)
                for (const Mat& blk : *sliced) certified = certified && blocks.check(blk);
            for (Int v : pipe.ilp.instance.a.data()) certified = certified && v >= 0;
            for (Int v : pipe.ilp.instance.b) certified = certified && 0 <= v && v <= 3;
            const Mat& mm = pipe.compressed.detecting->matrix;
            certified = certified && mat_mul(mm, pipe.ilp.instance.a) == pipe.compressed.instance.a;
            certified = certified && mat_vec(mm, pipe.ilp.instance.b) == pipe.compressed.instance.b;
        }
        bool coeff_cert =
            check_coefficient_certificate(pipe.compressed.instance, pipe.binary);
        bool target_cert = pipe.targets.has_value() &&
                           check_target_certificate(pipe.binary.instance, *pipe.targets);

        if (expect && enc_feasible) {
            const Vec& x = enc.witness->x;
            certified = certified && pipe.compressed.instance.satisfies(x);
            if (coeff_cert) {
                Vec xb = lift_coefficient_witness(pipe.compressed.instance, pipe.binary, x);
                coeff_cert = pipe.binary.instance.satisfies(xb) &&
                             project_witness(pipe.binary, xb) == x;
                if (coeff_cert && target_cert) {
                    Vec xt = lift_target_witness(pipe.binary.instance, *pipe.targets, xb);
                    target_cert = pipe.targets->instance.satisfies(xt) &&
                                  project_witness(*pipe.targets, xt) == xb;
                }
            }
        }
        comp_ok += certified;
        coeff_ok += coeff_cert;
        target_ok += target_cert;

        bool shapes = pipe.targets.has_value();
        if (shapes) {
            for (Int v : pipe.binary.instance.a.data()) shapes = shapes && (v == 0 || v == 1);
            for (Int v : pipe.targets->instance.a.data()) shapes = shapes && -1 <= v && v <= 1;
            for (Int v : pipe.targets->instance.b) shapes = shapes && (v == 0 || v == 1);
        }
        shape_ok += shapes;
    }

    auto all = [&](int got, const char* name) {
        res.checks.push_back(
            {name, got == trials, std::to_string(got) + "/" + std::to_string(trials)});
    };
    all(relaxed_ok, "relaxed stage matches brute-force satisfiability");
    all(audit_ok, "clause encoding dimensions, entries, degrees, targets");
    all(encode_ok, "encoding stage verdict matches satisfiability");
    all(comp_ok, "compression certified against verified detecting blocks");
    all(coeff_ok, "coefficient stage certificate and witness lift");
    all(target_ok, "target stage certificate and witness lift");
    all(shape_ok, "final stages shaped {0,1} and {-1,0,1} with {0,1} targets");
    res.checks.push_back({"both verdicts exercised", sat > 0 && unsat > 0,
                          std::to_string(sat) + " sat, " + std::to_string(unsat) + " unsat"});
    res.measurements = {{"sat_instances", sat},
                        {"unsat_instances", unsat},
                        {"max_encoded_rows", max_rows},
                        {"detecting_blocks_verified",
                         static_cast<Int>(blocks.verified.size())}};
    return res;
}

// Exact Graver bases of small random matrices against the norm bounds: the
// treedepth bound (2*max+1)^(2^td - 1) must never be exceeded, and one-row
// matrices are additionally held to the declared 2*max-1 threshold, with at
// least one instance meeting it exactly. The relaxed one-row threshold
// 2*max+1 is reported alongside to locate the boundary: rows with two unit
// entries of any signs have a kernel step of l1 norm 2, which already
// exceeds 2*max-1 = 1, so the declared threshold is expected to fail while
// the relaxed one holds.
inline SuiteResult bench_graver_bounds(std::uint64_t seed, int trials = 500) {
    SuiteResult res{"graver-bounds", seed, trials, {}, {}};
    SplitMix64 rng(seed);
    int tree_violations = 0, one_row_seen = 0, declared_violations = 0, relaxed_violations = 0;
    int equalities = 0;
    Int max_g1 = 0;
    std::string first_violation, first_equality;

    for (int trial = 0; trial < trials; ++trial) {
        std::size_t k = 1 + rng.below(2), l = 1 + rng.below(3);
        Mat a = detail::bench_mat(rng, k, l, -2, 2);
        NormBoundReport rep = certify_norm_bounds(a);
        max_g1 = std::max(max_g1, rep.g1);
        tree_violations += !rep.lemma_holds;
        if (rep.one_row_holds.has_value()) {
            ++one_row_seen;
            Int declared = 2 * rep.delta - 1;
            if (!*rep.one_row_holds) {
                ++declared_violations;
                if (first_violation.empty()) {
                    first_violation = "trial " + std::to_string(trial) + ": [";
                    for (std::size_t j = 0; j < a.cols(); ++j)
                        first_violation +=
                            (j ? " " : "") + std::to_string(a.at(0, j));
                    first_violation += "] g1=" + std::to_string(rep.g1) +
                                       " > " + std::to_string(declared);
                }
            }
            relaxed_violations += rep.g1 > 2 * rep.delta + 1;
            if (rep.g1 == declared) {
                ++equalities;
                if (first_equality.empty())
                    first_equality =
                        "trial " + std::to_string(trial) + ": g1=" + std::to_string(rep.g1);
            }
        }
    }

    res.checks.push_back({"l1 norms within the treedepth bound", tree_violations == 0,
                          std::to_string(tree_violations) + " violations"});
    res.checks.push_back({"one-row l1 norms within 2*max+1", relaxed_violations == 0,
                          std::to_string(relaxed_violations) + " violations"});
    res.checks.push_back({"one-row l1 norms within 2*max-1", declared_violations == 0,
                          declared_violations == 0 ? "0 violations" : first_violation});
    res.checks.push_back(
        {"one-row equality 2*max-1 attained", equalities > 0, first_equality});
    res.measurements = {{"one_row_instances", one_row_seen},
                        {"declared_violations", declared_violations},
                        {"equalities", equalities},
                        {"max_g1", max_g1}};
    return res;
}

// Gadget exactness: the enumeration oracle certifies the declared solution
// counts for every representable value up to four digits; assembled subset
// sum systems agree with the brute-force oracle; and the duplication pass
// keeps entries in {-1,0,1}, the verdict, and the dual treedepth within one
// of the original on every instance it touches.
inline SuiteResult bench_gadgets(std::uint64_t seed, int trials = 100) {
    SuiteResult res{"gadgets", seed, trials, {}, {}};
    SplitMix64 rng(seed);
    int counts_ok = 0, counts_total = 0;
    int agree = 0, pm1_entries_ok = 0, pm1_td_ok = 0, pm1_verdict_ok = 0, feasible_seen = 0;
    Int max_td_increase = 0, max_td = 0;

    for (Int delta = 1; delta <= 4; ++delta)
        for (Int s = 0; s < (Int{1} << delta); ++s)
            for (bool forced : {false, true}) {
                ++counts_total;
                GadgetInstance g = encode_number(delta, s, forced);
                std::vector<Solution> sols =
                    enumerate_solutions(g.instance, Vec(g.instance.cols(), Int{1} << delta));
                counts_ok += static_cast<int>(sols.size()) == g.expected_solutions;
            }

    for (int trial = 0; trial < trials; ++trial) {
        std::size_t k = 1 + rng.below(4);
        Vec s(k);
        for (Int& v : s) v = static_cast<Int>(rng.below(8));
        Int t = 0;
        if (trial % 2 == 0) {
            for (Int v : s)
                if (rng.coin()) t += v;
        } else {
            t = static_cast<Int>(rng.below(32));
        }

        bool expect = false;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            Int sum = 0;
            for (std::size_t i = 0; i < k; ++i)
                if ((mask >> i) & 1) sum += s[i];
            if (sum == t) expect = true;
        }
        feasible_seen += expect;

        GadgetInstance g = subset_sum_to_ilp(s, t);
        Int delta = std::max<Int>(Int{1}, bit_length(t));
        for (Int v : s) delta = std::max(delta, bit_length(v));
        Vec box(g.instance.cols(), Int{1} << delta);
        agree += (solve_box(g.instance, box).verdict == SolveReport::feasible) == expect;

        IlpInstance flat = duplicate_to_pm1(g.instance);
        bool entries = true;
        for (Int v : flat.a.data()) entries = entries && -1 <= v && v <= 1;
        pm1_entries_ok += entries;

        int before = dual_treedepth(g.instance.a).depth;
        int after = dual_treedepth(flat.a).depth;
        pm1_td_ok += after <= before + 1;
        max_td_increase = std::max<Int>(max_td_increase, after - before);
        max_td = std::max<Int>(max_td, after);

        Vec flat_box(flat.cols(), Int{1} << delta);
        pm1_verdict_ok +=
            (solve_box(flat, flat_box).verdict == SolveReport::feasible) == expect;
    }

    res.checks.push_back({"number gadget solution counts exact", counts_ok == counts_total,
                          std::to_string(counts_ok) + "/" + std::to_string(counts_total)});
    auto all = [&](int got, const char* name) {
        res.checks.push_back(
            {name, got == trials, std::to_string(got) + "/" + std::to_string(trials)});
    };
    all(agree, "subset sum agrees with the brute-force oracle");
    all(pm1_entries_ok, "duplication leaves entries in {-1,0,1}");
    all(pm1_td_ok, "duplication grows dual treedepth by at most one");
    all(pm1_verdict_ok, "duplication preserves the verdict");
    res.measurements = {{"gadget_count_instances", counts_total},
                        {"feasible_instances", feasible_seen},
                        {"max_td_increase", max_td_increase},
                        {"max_dual_treedepth", max_td}};
    return res;
}

// Cross-checks the three decision procedures on random standard-form
// systems. A trial compares only when all three finish within budget; the
// verdicts must then be identical and every feasible witness re-verifies
// against the instance. Skips are reported, never silently dropped.
inline SuiteResult bench_solver_agreement(std::uint64_t seed, int trials = 500) {
    SuiteResult res{"solver-agreement", seed, trials, {}, {}};
    SplitMix64 rng(seed);
    int compared = 0, skipped = 0, disagreements = 0, witness_ok = 0;
    int feasible_seen = 0, infeasible_seen = 0;

    for (int trial = 0; trial < trials; ++trial) {
        std::size_t k = 1 + rng.below(3), l = 1 + rng.below(6);
        Mat a = detail::bench_mat(rng, k, l, -3, 3);
        Vec b(k);
        for (Int& v : b) v = rng.range(-6, 6);
        IlpInstance inst(std::move(a), std::move(b));

        SolveReport box, dp, st;
        try {
            dp = solve_papadimitriou(inst, 2'000'000);
            box = solve_box(inst, Vec(inst.cols(), dp.bound), 2'000'000);
            st = solve_steinitz(inst);
        } catch (const Error& e) {
            if (e.kind != Error::budget) throw;
            ++skipped;
            continue;
        }
        ++compared;
        if (box.verdict != dp.verdict || box.verdict != st.verdict) {
            ++disagreements;
            continue;
        }
        if (box.verdict == SolveReport::feasible) {
            ++feasible_seen;
            witness_ok += inst.satisfies(box.witness->x) && inst.satisfies(dp.witness->x) &&
                          inst.satisfies(st.witness->x);
        } else {
            ++infeasible_seen;
            ++witness_ok;
        }
    }

    res.checks.push_back({"verdicts identical on compared instances", disagreements == 0,
                          std::to_string(disagreements) + " disagreements in " +
                              std::to_string(compared)});
    res.checks.push_back({"feasible witnesses re-verify", witness_ok == compared,
                          std::to_string(witness_ok) + "/" + std::to_string(compared)});
    res.checks.push_back({"most trials compared within budget", compared * 2 >= trials,
                          std::to_string(skipped) + " skipped"});
    res.checks.push_back({"both verdicts exercised", feasible_seen > 0 && infeasible_seen > 0,
                          std::to_string(feasible_seen) + " feasible, " +
                              std::to_string(infeasible_seen) + " infeasible"});
    res.measurements = {{"compared", compared},
                        {"skipped", skipped},
                        {"feasible", feasible_seen},
                        {"infeasible", infeasible_seen}};
    return res;
}

// Support bounds on feasible systems built around a planted solution, in
// two alternating lanes. The search lane keeps right-hand sides small so
// the exhaustive minimal-support search stays affordable (it skips on
// budget when a mixed-sign draw has too many box solutions); its results
// must land within the pigeonhole threshold 2h. The reduction lane plants a
// fully dense solution on a single wide row, which always starts the swap
// loop above the threshold; the loop must strictly descend and stop below
// it on every run.
inline SuiteResult bench_support(std::uint64_t seed, int trials = 100) {
    SuiteResult res{"support", seed, trials, {}, {}};
    SplitMix64 rng(seed);
    int minimal_runs = 0, minimal_skips = 0, minimal_ok = 0;
    int reduce_ok = 0, descent_ok = 0, loops_started = 0;
    Int max_steps = 0;

    for (int trial = 0; trial < trials; ++trial) {
        bool dense = trial % 2 == 1;
        std::size_t k = dense ? 1 : 1 + rng.below(2);
        std::size_t l = dense ? 8 + rng.below(3) : 1 + rng.below(10);
        Mat a = detail::bench_mat(rng, k, l, dense ? -3 : 0, 3);
        if (a.max_abs() == 0) a.set(0, 0, 1);  // the threshold needs a non-zero matrix
        Vec x0(l);
        for (Int& v : x0) v = static_cast<Int>(dense ? 1 + rng.below(2) : rng.below(2));
        Vec b = mat_vec(a, x0);
        IlpInstance inst(std::move(a), std::move(b));

        // h as the pigeonhole subset size at c = 2: 2 * digits(max) * rows
        Int h = 2 * bit_length(inst.a.max_abs()) * static_cast<Int>(inst.rows());

        if (!dense) {
            try {
                SupportReport rep = minimal_support(inst, 2, 4'000'000);
                ++minimal_runs;
                minimal_ok += inst.satisfies(rep.solution.x) &&
                              static_cast<Int>(rep.support_size) <= rep.threshold &&
                              rep.h == h;
            } catch (const Error& e) {
                if (e.kind != Error::budget) throw;
                ++minimal_skips;
            }
        }

        Vec x = x0;
        Int steps = 0;
        bool descending = true, stuck = false;
        loops_started +=
            Solution::of(x).support.size() >= 2 * static_cast<std::size_t>(h);
        while (Solution::of(x).support.size() >= 2 * static_cast<std::size_t>(h)) {
            std::optional<Solution> next = support_reduce_step(inst, x, h);
            if (!next) {
                stuck = true;
                break;
            }
            std::size_t before = Solution::of(x).support.size();
            descending = descending && next->support.size() <= before &&
                         (next->support.size() < before || next->x < x);
            x = next->x;
            if (++steps > 1000) {
                stuck = true;
                break;
            }
        }
        max_steps = std::max(max_steps, steps);
        descent_ok += descending;
        reduce_ok += !stuck && inst.satisfies(x) &&
                     Solution::of(x).support.size() < 2 * static_cast<std::size_t>(h);
    }

    res.checks.push_back({"minimal support within the threshold", minimal_ok == minimal_runs,
                          std::to_string(minimal_ok) + "/" + std::to_string(minimal_runs)});
    res.checks.push_back({"exhaustive search ran on most of its lane",
                          minimal_runs * 4 >= trials,
                          std::to_string(minimal_skips) + " skipped on budget"});
    res.checks.push_back({"reduction loop exercised above the threshold",
                          loops_started * 4 >= trials,
                          std::to_string(loops_started) + " runs"});
    auto all = [&](int got, const char* name) {
        res.checks.push_back(
            {name, got == trials, std::to_string(got) + "/" + std::to_string(trials)});
    };
    all(descent_ok, "reduction steps strictly descend");
    all(reduce_ok, "iterated reduction ends below the threshold");
    res.measurements = {{"minimal_runs", minimal_runs},
                        {"minimal_skips", minimal_skips},
                        {"loops_started", loops_started},
                        {"max_reduction_steps", max_steps}};
    return res;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                             std::optional<int> trials = {}, int max_vars = 6) {
    if (name == "pipeline") return bench_pipeline(seed, trials.value_or(200), max_vars);
    if (name == "graver-bounds") return bench_graver_bounds(seed, trials.value_or(500));
    if (name == "gadgets") return bench_gadgets(seed, trials.value_or(100));
    if (name == "solver-agreement") return bench_solver_agreement(seed, trials.value_or(500));
    if (name == "support") return bench_support(seed, trials.value_or(100));
    throw Error(Error::precondition, "unknown bench suite: " + name);
}

}  // namespace ilpkit
