#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "ilpkit/reduction.hpp"
#include "ilpkit/solvers.hpp"

using namespace ilpkit;

namespace {

Mat from_rows(const std::vector<std::vector<Int>>& rows) {
    Mat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.set(i, j, rows[i][j]);
    return m;
}

template <typename F>
Error::Kind thrown_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind;
    }
    throw std::runtime_error("expected an Error");
}

CnfFormula random_cnf(SplitMix64& rng, int n, std::size_t m) {
    CnfFormula f;
    f.num_vars = n;
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<int> vars;
        while (vars.size() < 3) {
            int v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        std::vector<int> clause;
        for (int v : vars) clause.push_back(rng.coin() ? v : -v);
        f.clauses.push_back(clause);
    }
    return f;
}

// Reads a truth assignment off an encoded witness: x_{2(v-1)} is the
// positive-literal indicator.
bool witness_satisfies(const CnfFormula& f, const Vec& x) {
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (int lit : c) {
            std::size_t v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
            if ((lit > 0) == (x[2 * (v - 1)] == 1)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

// Builds the encoded witness for a satisfying assignment: indicator pairs
// from the assignment, y_c = 3 - (#satisfied literals), z_c = 2 - y_c.
Vec encode_assignment(const CnfFormula& f, unsigned long long mask) {
    std::size_t n = static_cast<std::size_t>(f.num_vars), m = f.clauses.size();
    Vec x(2 * n + 2 * m, 0);
    for (std::size_t v = 0; v < n; ++v) {
        bool val = (mask >> v) & 1;
        x[2 * v] = val ? 1 : 0;
        x[2 * v + 1] = val ? 0 : 1;
    }
    for (std::size_t c = 0; c < m; ++c) {
        Int sat = 0;
        for (int lit : f.clauses[c]) {
            std::size_t v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
            if ((lit > 0) == (((mask >> (v - 1)) & 1) != 0)) ++sat;
        }
        x[2 * n + 2 * c] = 3 - sat;
        x[2 * n + 2 * c + 1] = 2 - (3 - sat);
    }
    return x;
}

std::optional<unsigned long long> first_satisfying_mask(const CnfFormula& f) {
    for (unsigned long long mask = 0; mask < (1ULL << f.num_vars); ++mask) {
        bool ok = true;
        for (const auto& c : f.clauses) {
            bool sat = false;
            for (int lit : c) {
                int v = lit > 0 ? lit : -lit;
                if ((lit > 0) == (((mask >> (v - 1)) & 1) != 0)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return mask;
    }
    return std::nullopt;
}

// Per-column search box derived from column provenance; pass_box bounds the
// stage input's columns, bsrc the stage input's largest target.
Vec stage_box(const ReductionStep& step, Int pass_box, Int bsrc) {
    Vec box(step.instance.cols(), 0);
    for (std::size_t j = 0; j < box.size(); ++j) {
        switch (step.columns[j].kind) {
            case ColumnOrigin::carry: box[j] = bsrc; break;
            case ColumnOrigin::complement_a:
            case ColumnOrigin::complement_b: box[j] = 2 * bsrc + 1; break;
            case ColumnOrigin::target_z: box[j] = 1; break;
            case ColumnOrigin::target_power:
                box[j] = checked_pow(2, static_cast<Int>(step.columns[j].a));
                break;
            default: box[j] = pass_box; break;
        }
    }
    return box;
}

bool box_feasible(const IlpInstance& inst, const Vec& box) {
    return solve_box(inst, box).verdict == SolveReport::feasible;
}

bool box_feasible(const IlpInstance& inst, Int box) {
    return box_feasible(inst, Vec(inst.cols(), box));
}

}  // namespace

TEST_CASE("(3,4) form validation") {
    CnfFormula f;
    f.num_vars = 3;
    f.clauses = {{1, 2, 3}, {-1, -2}, {2, -3}};
    CHECK(validate_34sat(f));

    std::string why;
    CnfFormula bad = f;
    bad.clauses.push_back({1});
    CHECK_FALSE(validate_34sat(bad, &why));
    CHECK(why == "clause width not 2 or 3");

    bad = f;
    bad.clauses.push_back({1, 2, 3, -1});
    CHECK_FALSE(validate_34sat(bad, &why));
    CHECK(why == "clause width not 2 or 3");

    bad = f;
    bad.clauses.push_back({2, -2});
    CHECK_FALSE(validate_34sat(bad, &why));
    CHECK(why == "repeated variable in clause");

    bad = f;
    bad.clauses.push_back({1, 4});
    CHECK_FALSE(validate_34sat(bad, &why));
    CHECK(why == "literal out of range");

    bad = f;  // variable 2 already occurs 3 times
    bad.clauses.push_back({2, 1});
    bad.clauses.push_back({2, 3});
    CHECK_FALSE(validate_34sat(bad, &why));
    CHECK(why == "variable occurs more than 4 times");

    bad = f;  // positive 2 occurs twice; two more cross the same-sign cap
    bad.clauses.push_back({2, 1});
    CHECK(validate_34sat(bad, &why));
    bad.clauses[1] = {2, -1};
    CHECK_FALSE(validate_34sat(bad, &why));
    CHECK(why == "same sign more than 3 times");

    bad.num_vars = 0;
    bad.clauses.clear();
    CHECK_FALSE(validate_34sat(bad, &why));
    CHECK(why == "no variables");
}

TEST_CASE("brute force and dpll agree on random formulas") {
    SplitMix64 rng(0xC0FFEE01);
    int sat = 0, unsat = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int n = 3 + static_cast<int>(rng.below(4));
        std::size_t m = 1 + rng.below(static_cast<std::uint64_t>(6 * n));
        CnfFormula f = random_cnf(rng, n, m);
        bool expect = brute_force_sat(f);
        CHECK(dpll_sat(f) == expect);
        (expect ? sat : unsat)++;
    }
    CHECK(sat == 46);
    CHECK(unsat == 14);

    CnfFormula wide;
    wide.num_vars = 26;
    CHECK(thrown_kind([&] { brute_force_sat(wide); }) == Error::precondition);
}

TEST_CASE("normalization handles degenerate inputs") {
    CnfFormula taut;
    taut.num_vars = 2;
    taut.clauses = {{1, -1}, {2, -2, 1}};
    CnfFormula out = sat_to_34sat(taut);
    CHECK(out.num_vars == 2);
    CHECK(out.clauses == std::vector<std::vector<int>>{{1, 2}});

    CnfFormula contra;
    contra.num_vars = 1;
    contra.clauses = {{1}, {-1}};
    out = sat_to_34sat(contra);
    CHECK(out.clauses == std::vector<std::vector<int>>{{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
    CHECK_FALSE(dpll_sat(out));

    CnfFormula chain;  // units cascade into a contradiction
    chain.num_vars = 3;
    chain.clauses = {{1}, {-1, 2}, {-2, 3}, {-3}};
    CHECK(sat_to_34sat(chain).clauses.size() == 4);
    CHECK_FALSE(dpll_sat(sat_to_34sat(chain)));

    CnfFormula empty_clause;
    empty_clause.num_vars = 2;
    empty_clause.clauses = {{1, 2}, {}};
    CHECK_FALSE(dpll_sat(sat_to_34sat(empty_clause)));

    CnfFormula all_forced;  // propagation satisfies everything
    all_forced.num_vars = 2;
    all_forced.clauses = {{1}, {-1, 2}};
    out = sat_to_34sat(all_forced);
    CHECK(out.clauses == std::vector<std::vector<int>>{{1, 2}});
    CHECK(dpll_sat(out));

    CnfFormula sparse;  // surviving variables are renumbered contiguously;
                        // literals come back sorted by signed value
    sparse.num_vars = 9;
    sparse.clauses = {{5, 7, 9}, {-5, -7, -9}};
    out = sat_to_34sat(sparse);
    CHECK(out.num_vars == 3);
    CHECK(out.clauses == std::vector<std::vector<int>>{{1, 2, 3}, {-3, -2, -1}});

    CnfFormula wide;
    wide.num_vars = 4;
    wide.clauses = {{1, 2, 3, 4}};
    CHECK(thrown_kind([&] { sat_to_34sat(wide); }) == Error::precondition);

    CnfFormula stray;
    stray.num_vars = 2;
    stray.clauses = {{1, 3}};
    CHECK(thrown_kind([&] { sat_to_34sat(stray); }) == Error::precondition);
}

TEST_CASE("splitting bounds occurrences and preserves satisfiability") {
    CnfFormula crowded;  // variable 1 occurs six times, three per sign
    crowded.num_vars = 4;
    crowded.clauses = {{1, 2, 3},  {1, -2, 4},   {1, -3, -4},
                       {-1, 2, 4}, {-1, -2, -3}, {-1, 3, -4}};
    CnfFormula out = sat_to_34sat(crowded);
    CHECK(validate_34sat(out));
    CHECK(out.num_vars > crowded.num_vars);
    CHECK(brute_force_sat(out) == brute_force_sat(crowded));

    SplitMix64 rng(0xC0FFEE02);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 3 + static_cast<int>(rng.below(6));
        std::size_t m = 1 + rng.below(14);
        CnfFormula f = random_cnf(rng, n, m);
        CnfFormula relaxed = sat_to_34sat(f);
        CHECK(validate_34sat(relaxed));
        CHECK(dpll_sat(relaxed) == brute_force_sat(f));
    }
}

TEST_CASE("clause encoding layout") {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses = {{1, 2}};
    ReductionStep step = sat34_to_ilp(f);
    CHECK(step.instance.a == from_rows({{1, 1, 0, 0, 0, 0},
                                        {0, 0, 1, 1, 0, 0},
                                        {0, 0, 0, 0, 1, 1},
                                        {1, 0, 1, 0, 1, 0}}));
    CHECK(step.instance.b == Vec{1, 1, 2, 3});
    CHECK(step.instance.standard_form());
    REQUIRE(step.columns.size() == 6);
    CHECK(step.columns[0].kind == ColumnOrigin::literal_pos);
    CHECK(step.columns[0].a == 1);
    CHECK(step.columns[1].kind == ColumnOrigin::literal_neg);
    CHECK(step.columns[2].kind == ColumnOrigin::literal_pos);
    CHECK(step.columns[2].a == 2);
    CHECK(step.columns[4].kind == ColumnOrigin::clause_y);
    CHECK(step.columns[5].kind == ColumnOrigin::clause_z);
    REQUIRE(step.rows.size() == 4);
    CHECK(step.rows[0].kind == RowOrigin::variable_pair);
    CHECK(step.rows[1].a == 2);
    CHECK(step.rows[2].kind == RowOrigin::clause_slack);
    CHECK(step.rows[3].kind == RowOrigin::clause_sum);
    CHECK(step.info.name == "ilp");
    CHECK(step.info.entry_min == 0);
    CHECK(step.info.entry_max == 1);
    CHECK(step.info.b_max == 3);

    CnfFormula g;
    g.num_vars = 3;
    g.clauses = {{1, -2, 3}};
    step = sat34_to_ilp(g);
    CHECK(step.instance.a == from_rows({{1, 1, 0, 0, 0, 0, 0, 0},
                                        {0, 0, 1, 1, 0, 0, 0, 0},
                                        {0, 0, 0, 0, 1, 1, 0, 0},
                                        {0, 0, 0, 0, 0, 0, 1, 1},
                                        {1, 0, 0, 1, 1, 0, 1, 0}}));
    CHECK(step.instance.b == Vec{1, 1, 1, 2, 3});

    CnfFormula bad;
    bad.num_vars = 1;
    bad.clauses = {{1}};
    CHECK(thrown_kind([&] { sat34_to_ilp(bad); }) == Error::precondition);
}

TEST_CASE("clause encoding feasibility matches satisfiability") {
    SECTION("canonical formulas") {
        CHECK(box_feasible(sat34_to_ilp(detail::canonical_sat()).instance, 3));
        CHECK_FALSE(box_feasible(sat34_to_ilp(detail::canonical_unsat()).instance, 3));
    }

    SECTION("random formulas, both directions of the witness map") {
        SplitMix64 rng(0xC0FFEE03);
        int feasible_seen = 0;
        for (int trial = 0; trial < 20; ++trial) {
            int n = 3 + static_cast<int>(rng.below(4));
            std::size_t m = 1 + rng.below(static_cast<std::uint64_t>(n));
            CnfFormula relaxed = sat_to_34sat(random_cnf(rng, n, m));
            ReductionStep step = sat34_to_ilp(relaxed);
            SolveReport rep = solve_box(step.instance, Vec(step.instance.cols(), 3));
            bool expect = dpll_sat(relaxed);
            CHECK((rep.verdict == SolveReport::feasible) == expect);
            if (rep.verdict == SolveReport::feasible) {
                ++feasible_seen;
                CHECK(step.instance.satisfies(rep.witness->x));
                CHECK(witness_satisfies(relaxed, rep.witness->x));
            }
            if (relaxed.num_vars <= 16) {
                if (auto mask = first_satisfying_mask(relaxed)) {
                    Vec x = encode_assignment(relaxed, *mask);
                    CHECK(mat_vec(step.instance.a, x) == step.instance.b);
                }
            }
        }
        CHECK(feasible_seen > 5);
    }
}

TEST_CASE("clause encoding structural caps") {
    SplitMix64 rng(0xC0FFEE04);
    for (int trial = 0; trial < 20; ++trial) {
        int n0 = 3 + static_cast<int>(rng.below(4));
        std::size_t m0 = 1 + rng.below(static_cast<std::uint64_t>(3 * n0));
        CnfFormula relaxed = sat_to_34sat(random_cnf(rng, n0, m0));
        ReductionStep step = sat34_to_ilp(relaxed);
        const IlpInstance& inst = step.instance;
        std::size_t n = static_cast<std::size_t>(relaxed.num_vars), m = relaxed.clauses.size();
        REQUIRE(inst.rows() == n + 2 * m);
        REQUIRE(inst.cols() == 2 * n + 2 * m);
        for (Int v : inst.a.data()) CHECK((v == 0 || v == 1));
        for (Int v : inst.b) CHECK((1 <= v && v <= 3));
        for (std::size_t i = 0; i < inst.rows(); ++i) {
            Int nz = 0;
            for (std::size_t j = 0; j < inst.cols(); ++j) nz += inst.a.at(i, j) != 0;
            CHECK(nz <= 4);
        }
        for (std::size_t j = 0; j < inst.cols(); ++j) {
            Int nz = 0;
            for (std::size_t i = 0; i < inst.rows(); ++i) nz += inst.a.at(i, j) != 0;
            CHECK(nz <= 4);
        }
    }
}

TEST_CASE("constraint compression preserves the solution set") {
    SECTION("identity regime: fewer detection columns than the smallest level") {
        CnfFormula f = detail::canonical_unsat();
        ReductionStep ilp = sat34_to_ilp(f);
        ReductionStep comp = compress_constraints(ilp.instance);
        REQUIRE(comp.detecting.has_value());
        CHECK(comp.detecting->matrix.cols() == ilp.instance.rows());
        CHECK(comp.instance.rows() == comp.detecting->matrix.rows());
        CHECK(comp.rows.size() == comp.instance.rows());
        CHECK_FALSE(box_feasible(comp.instance, 3));
    }

    SECTION("compression regime: entries grow, equivalence holds") {
        SplitMix64 rng(0xC0FFEE05);
        int feasible_seen = 0;
        Int grown = 0;
        for (int trial = 0; trial < 6; ++trial) {
            // n = 6 keeps the splitting mild, so the encoded systems stay
            // small enough to solve while still reaching the level-2 block
            int n = 6;
            std::size_t m = 8 + rng.below(3);
            CnfFormula relaxed = sat_to_34sat(random_cnf(rng, n, m));
            ReductionStep ilp = sat34_to_ilp(relaxed);
            REQUIRE(ilp.instance.rows() >= 20);  // reaches the first level-2 block
            ReductionStep comp = compress_constraints(ilp.instance);
            grown = std::max(grown, comp.info.entry_max);

            // independent product check against the stored matrix
            const Mat& mm = comp.detecting->matrix;
            bool product_ok = true;
            for (std::size_t i = 0; i < comp.instance.rows(); ++i) {
                Int s = 0;
                for (std::size_t r = 0; r < ilp.instance.rows(); ++r)
                    s += mm.at(i, r) * ilp.instance.b[r];
                product_ok &= comp.instance.b[i] == s;
                for (std::size_t j = 0; j < comp.instance.cols(); ++j) {
                    Int e = 0;
                    for (std::size_t r = 0; r < ilp.instance.rows(); ++r)
                        e += mm.at(i, r) * ilp.instance.a.at(r, j);
                    product_ok &= e == comp.instance.a.at(i, j);
                }
            }
            CHECK(product_ok);

            // exhausting an infeasible search at this size is a different
            // test (below); random draws here are solved only when
            // satisfiable, and the compressed side only while the system is
            // small enough that the coupled detection rows stay searchable
            if (dpll_sat(relaxed)) {
                ++feasible_seen;
                CHECK(box_feasible(ilp.instance, 3));
                if (ilp.instance.rows() <= 60) CHECK(box_feasible(comp.instance, 3));
            }
        }
        CHECK(feasible_seen > 1);
        CHECK(grown > 1);
    }

    SECTION("compression regime, unsatisfiable input") {
        // three disjoint copies of the contradiction block: already in (3,4)
        // form, 30 encoded rows, so the level-2 block is in play
        CnfFormula f;
        f.num_vars = 6;
        for (int o : {0, 2, 4}) {
            f.clauses.push_back({o + 1, o + 2});
            f.clauses.push_back({o + 1, -(o + 2)});
            f.clauses.push_back({-(o + 1), o + 2});
            f.clauses.push_back({-(o + 1), -(o + 2)});
        }
        REQUIRE(validate_34sat(f));
        ReductionStep ilp = sat34_to_ilp(f);
        REQUIRE(ilp.instance.rows() == 30);
        ReductionStep comp = compress_constraints(ilp.instance);
        CHECK(comp.info.entry_max > 1);
        CHECK_FALSE(box_feasible(ilp.instance, 3));
        CHECK_FALSE(box_feasible(comp.instance, 3));
    }

    SECTION("preconditions") {
        IlpInstance neg(from_rows({{-1, 1}}), Vec{1});
        CHECK(thrown_kind([&] { compress_constraints(neg); }) == Error::precondition);

        IlpInstance big(from_rows({{1, 1}}), Vec{4});
        CHECK(thrown_kind([&] { compress_constraints(big); }) == Error::precondition);
        CHECK(thrown_kind([&] { compress_constraints(big, 2); }) == Error::precondition);

        IlpInstance ok(from_rows({{1, 1}}), Vec{3});
        CHECK(compress_constraints(ok, 4).instance.rows() == 1);
        CHECK(thrown_kind([&] { compress_constraints(ok, 1); }) == Error::precondition);

        IlpInstance bounded(from_rows({{1, 1}}), Vec{2});
        bounded.upper[0] = 5;
        CHECK(thrown_kind([&] { compress_constraints(bounded); }) == Error::precondition);
    }
}

TEST_CASE("coefficient reduction layout") {
    SECTION("two rows, full expected system") {
        IlpInstance src(from_rows({{5, 3}, {2, 0}}), Vec{7, 2});
        ReductionStep step = reduce_coefficients(src);
        CHECK(step.instance.a == from_rows({
                  {0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},  // y_0 + y'_0 = 8
                  {0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},  // y_0 + y''_0 = 8
                  {0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0},  // y_1 + y'_1 = 8
                  {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},  // y_1 + y''_1 = 8
                  {1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0},  // digit 0 of row 0
                  {0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0},  // digit 1 of row 0
                  {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},  // top digit of row 0
                  {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0},  // y_0 + y'_0 = 4
                  {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0},  // y_0 + y''_0 = 4
                  {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0},  // y_1 + y'_1 = 4
                  {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1},  // y_1 + y''_1 = 4
                  {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0},  // digit 0 of row 1
                  {1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1},  // digit 1 of row 1
                  {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},  // top digit of row 1
              }));
        CHECK(step.instance.b == Vec{8, 8, 8, 8, 17, 17, 1, 4, 4, 4, 4, 8, 9, 0});
        CHECK(step.info.name == "binary");
        CHECK(step.info.entry_max == 1);

        REQUIRE(step.columns.size() == 14);
        CHECK(step.columns[0].kind == ColumnOrigin::passthrough);
        CHECK(step.columns[2].kind == ColumnOrigin::carry);
        CHECK(step.columns[2].a == 0);
        CHECK(step.columns[3].b == 1);
        CHECK(step.columns[4].kind == ColumnOrigin::complement_a);
        CHECK(step.columns[6].kind == ColumnOrigin::complement_b);
        CHECK(step.columns[8].kind == ColumnOrigin::carry);
        CHECK(step.columns[8].a == 1);
        REQUIRE(step.rows.size() == 14);
        CHECK(step.rows[0].kind == RowOrigin::complement_a);
        CHECK(step.rows[1].kind == RowOrigin::complement_b);
        CHECK(step.rows[4].kind == RowOrigin::digit);
        CHECK(step.rows[6].b == 2);
        CHECK(step.rows[13].a == 1);

        CHECK(check_coefficient_certificate(src, step));

        ReductionStep tampered = step;
        tampered.instance.a.set(4, 0, 0);
        CHECK_FALSE(check_coefficient_certificate(src, tampered));
        tampered = step;
        tampered.instance.b[6] = 2;
        CHECK_FALSE(check_coefficient_certificate(src, tampered));
    }

    SECTION("entries already 0/1 pass through untouched") {
        IlpInstance src(from_rows({{1, 0}, {0, 1}}), Vec{1, 1});
        ReductionStep step = reduce_coefficients(src);
        CHECK(step.instance.a == src.a);
        CHECK(step.instance.b == src.b);
        CHECK(step.columns[1].kind == ColumnOrigin::passthrough);
        CHECK(step.rows[0].kind == RowOrigin::passthrough);
        CHECK(check_coefficient_certificate(src, step));
    }

    SECTION("preconditions") {
        IlpInstance neg(from_rows({{-2, 1}}), Vec{1});
        CHECK(thrown_kind([&] { reduce_coefficients(neg); }) == Error::precondition);
        IlpInstance negb(from_rows({{2, 1}}), Vec{-1});
        CHECK(thrown_kind([&] { reduce_coefficients(negb); }) == Error::precondition);
        IlpInstance bounded(from_rows({{2, 1}}), Vec{1});
        bounded.upper[1] = 1;
        CHECK(thrown_kind([&] { reduce_coefficients(bounded); }) == Error::precondition);
    }
}

TEST_CASE("coefficient reduction carries") {
    SECTION("hand lift") {
        IlpInstance src(from_rows({{3}}), Vec{6});
        ReductionStep step = reduce_coefficients(src);
        REQUIRE(step.instance.cols() == 4);
        CHECK(lift_coefficient_witness(src, step, Vec{2}) == Vec{2, 1, 7, 7});

        auto sols = enumerate_solutions(step.instance, Vec{6, 6, 13, 13});
        REQUIRE(sols.size() == 1);
        CHECK(sols[0].x == Vec{2, 1, 7, 7});

        CHECK(thrown_kind([&] { lift_coefficient_witness(src, step, Vec{1}); }) ==
              Error::precondition);
    }

    SECTION("zero row with nonzero target is preserved as infeasible") {
        IlpInstance src(from_rows({{2}, {0}}), Vec{2, 2});
        ReductionStep step = reduce_coefficients(src);
        CHECK(check_coefficient_certificate(src, step));
        CHECK_FALSE(box_feasible(step.instance, stage_box(step, 2, 2)));
    }

    SECTION("random equivalence against the source system") {
        SplitMix64 rng(0xC0FFEE06);
        int feasible_seen = 0;
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t k = 1 + rng.below(2), l = 2 + rng.below(3);
            Mat a(k, l);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < l; ++j) a.set(i, j, rng.range(0, 7));
            Vec b(k);
            for (std::size_t i = 0; i < k; ++i) b[i] = rng.range(0, 12);
            IlpInstance src(std::move(a), std::move(b));
            ReductionStep step = reduce_coefficients(src);
            CHECK(check_coefficient_certificate(src, step));

            Int bmax = norm_inf(src.b);
            bool expect = box_feasible(src, bmax);
            CHECK(box_feasible(step.instance, stage_box(step, bmax, bmax)) == expect);
            if (expect) {
                ++feasible_seen;
                SolveReport rep = solve_box(src, Vec(src.cols(), bmax));
                Vec lifted = lift_coefficient_witness(src, step, rep.witness->x);
                CHECK(mat_vec(step.instance.a, lifted) == step.instance.b);
            }
        }
        CHECK(feasible_seen == 12);
    }
}

TEST_CASE("target reduction layout") {
    SECTION("hand example") {
        IlpInstance src(from_rows({{1, 2}}), Vec{5});
        ReductionStep step = reduce_targets(src);
        CHECK(step.instance.a == from_rows({
                  {1, 2, 0, -1, 0, -1},  // homogenized: bits 0 and 2 of 5
                  {0, 0, 1, 0, 0, 0},    // z = 1
                  {0, 0, 1, -1, 0, 0},   // y_0 = z
                  {0, 0, 1, 1, -1, 0},   // y_1 = z + y_0
                  {0, 0, 1, 1, 1, -1},   // y_2 = z + y_0 + y_1
              }));
        CHECK(step.instance.b == Vec{0, 1, 0, 0, 0});
        CHECK(step.info.name == "pm1-targets");
        CHECK(step.columns[2].kind == ColumnOrigin::target_z);
        CHECK(step.columns[5].kind == ColumnOrigin::target_power);
        CHECK(step.columns[5].a == 2);
        CHECK(step.rows[0].kind == RowOrigin::homogenized);
        CHECK(step.rows[1].kind == RowOrigin::unit_z);
        CHECK(step.rows[4].kind == RowOrigin::chain);
        CHECK(check_target_certificate(src, step));

        ReductionStep tampered = step;
        tampered.instance.a.set(0, 3, 0);
        CHECK_FALSE(check_target_certificate(src, tampered));
        tampered = step;
        tampered.instance.a.set(4, 2, 0);
        CHECK_FALSE(check_target_certificate(src, tampered));
        tampered = step;
        tampered.instance.b[1] = 0;
        CHECK_FALSE(check_target_certificate(src, tampered));

        CHECK(lift_target_witness(src, step, Vec{1, 2}) == Vec{1, 2, 1, 1, 2, 4});
        CHECK(thrown_kind([&] { lift_target_witness(src, step, Vec{0, 0}); }) ==
              Error::precondition);

        // the chain pins z and the power columns in every solution
        auto sols = enumerate_solutions(step.instance, stage_box(step, 5, 5));
        REQUIRE(sols.size() == 3);
        for (const auto& s : sols) {
            CHECK(Vec(s.x.begin() + 2, s.x.end()) == Vec{1, 1, 2, 4});
            CHECK(s.x[0] + 2 * s.x[1] == 5);
        }
    }

    SECTION("all-zero targets produce only the unit row") {
        IlpInstance src(from_rows({{1}}), Vec{0});
        ReductionStep step = reduce_targets(src);
        CHECK(step.instance.a == from_rows({{1, 0}, {0, 1}}));
        CHECK(step.instance.b == Vec{0, 1});
        CHECK(check_target_certificate(src, step));
    }

    SECTION("random equivalence against the source system") {
        SplitMix64 rng(0xC0FFEE07);
        int feasible_seen = 0;
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t k = 1 + rng.below(2), l = 1 + rng.below(4);
            Mat a(k, l);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < l; ++j) a.set(i, j, rng.range(0, 2));
            Vec b(k);
            for (std::size_t i = 0; i < k; ++i) b[i] = rng.range(0, 20);
            IlpInstance src(std::move(a), std::move(b));
            ReductionStep step = reduce_targets(src);
            CHECK(check_target_certificate(src, step));

            Int bmax = norm_inf(src.b);
            bool expect = box_feasible(src, bmax);
            CHECK(box_feasible(step.instance, stage_box(step, bmax, bmax)) == expect);
            if (expect) ++feasible_seen;
        }
        CHECK(feasible_seen > 8);
    }

    SECTION("preconditions") {
        IlpInstance negb(from_rows({{1}}), Vec{-1});
        CHECK(thrown_kind([&] { reduce_targets(negb); }) == Error::precondition);
        IlpInstance bounded(from_rows({{1}}), Vec{1});
        bounded.upper[0] = 1;
        CHECK(thrown_kind([&] { reduce_targets(bounded); }) == Error::precondition);
    }
}

namespace {

// Audits and equivalence checks shared by the pipeline cases. expect is the
// satisfiability of the input. solve_deep additionally demands box verdicts
// for the stages past the encoding; search effort there grows steeply with
// the row count (the detection rows couple every column), so callers enable
// it only for small systems. Satisfiable inputs are still verified at every
// stage regardless: the witness chain proves feasibility without a search.
void check_pipeline(const PipelineResult& pipe, bool expect, bool solve_deep) {
    CHECK(validate_34sat(pipe.relaxed));
    CHECK(dpll_sat(pipe.relaxed) == expect);
    REQUIRE(pipe.targets.has_value());
    bool shapes_ok = true;
    for (Int v : pipe.binary.instance.a.data()) shapes_ok &= v == 0 || v == 1;
    for (Int v : pipe.targets->instance.a.data()) shapes_ok &= -1 <= v && v <= 1;
    for (Int v : pipe.targets->instance.b) shapes_ok &= 0 <= v && v <= 1;
    CHECK(shapes_ok);
    CHECK(check_coefficient_certificate(pipe.compressed.instance, pipe.binary));
    CHECK(check_target_certificate(pipe.binary.instance, *pipe.targets));

    CHECK(box_feasible(pipe.ilp.instance, 3) == expect);
    if (solve_deep) {
        Int bcomp = norm_inf(pipe.compressed.instance.b);
        CHECK(box_feasible(pipe.compressed.instance, 3) == expect);
        CHECK(box_feasible(pipe.binary.instance, stage_box(pipe.binary, 3, bcomp)) == expect);
        CHECK(box_feasible(pipe.targets->instance,
                           stage_box(*pipe.targets, 2 * bcomp + 1,
                                     norm_inf(pipe.binary.instance.b))) == expect);
    }

    if (expect) {
        // lift the encoded witness through every stage; each lift
        // revalidates against its system
        SolveReport rep = solve_box(pipe.ilp.instance, Vec(pipe.ilp.instance.cols(), 3));
        REQUIRE(rep.witness.has_value());
        const Vec& x = rep.witness->x;
        CHECK(witness_satisfies(pipe.relaxed, x));
        REQUIRE(mat_vec(pipe.compressed.instance.a, x) == pipe.compressed.instance.b);
        Vec xb = lift_coefficient_witness(pipe.compressed.instance, pipe.binary, x);
        Vec xt = lift_target_witness(pipe.binary.instance, *pipe.targets, xb);
        CHECK(project_witness(*pipe.targets, xt) == xb);
        CHECK(project_witness(pipe.binary, xb) == x);
    }
}

}  // namespace

TEST_CASE("pipeline stage equivalence") {
    SECTION("fixed unsatisfiable formulas, all stages solved") {
        check_pipeline(run_pipeline(detail::canonical_unsat(), true), false, true);

        CnfFormula blocks;  // 30 encoded rows: compression regime while unsatisfiable
        blocks.num_vars = 6;
        for (int o : {0, 2, 4}) {
            blocks.clauses.push_back({o + 1, o + 2});
            blocks.clauses.push_back({o + 1, -(o + 2)});
            blocks.clauses.push_back({-(o + 1), o + 2});
            blocks.clauses.push_back({-(o + 1), -(o + 2)});
        }
        check_pipeline(run_pipeline(blocks, true), false, true);
    }

    SECTION("random formulas") {
        SplitMix64 rng(0xC0FFEE08);
        int sat_seen = 0;
        for (int trial = 0; trial < 12; ++trial) {
            int n = 3 + static_cast<int>(rng.below(2));
            std::size_t m = 2 + rng.below(9);
            CnfFormula f = random_cnf(rng, n, m);
            PipelineResult pipe = run_pipeline(f, true);
            bool expect = brute_force_sat(f);
            if (expect) ++sat_seen;
            // past the encoding stage, box searches are only affordable for
            // modest systems; larger trials still get the full audit,
            // certificate, and witness-chain treatment
            check_pipeline(pipe, expect, pipe.ilp.instance.rows() <= 60);
        }
        CHECK(sat_seen > 3);
    }
}

TEST_CASE("pipeline trace bookkeeping") {
    CnfFormula f;
    f.num_vars = 4;
    f.clauses = {{1, 2, 3}, {-1, -2, 4}, {2, -3, -4}};
    PipelineResult pipe = run_pipeline(f, true);

    REQUIRE(pipe.stages.size() == 5);
    CHECK(pipe.stages[0].name == "34sat");
    CHECK(pipe.stages[1].name == "ilp");
    CHECK(pipe.stages[2].name == "compressed");
    CHECK(pipe.stages[3].name == "binary");
    CHECK(pipe.stages[4].name == "pm1-targets");
    CHECK(pipe.stages[0].rows == pipe.relaxed.clauses.size());
    CHECK(pipe.stages[0].cols == static_cast<std::size_t>(pipe.relaxed.num_vars));
    for (std::size_t s = 1; s < 5; ++s) {
        const ReductionStep* step = nullptr;
        switch (s) {
            case 1: step = &pipe.ilp; break;
            case 2: step = &pipe.compressed; break;
            case 3: step = &pipe.binary; break;
            default: step = &*pipe.targets; break;
        }
        CHECK(pipe.stages[s].rows == step->instance.rows());
        CHECK(pipe.stages[s].cols == step->instance.cols());
        CHECK(step->columns.size() == step->instance.cols());
        CHECK(step->rows.size() == step->instance.rows());
    }
    REQUIRE(pipe.compressed.detecting.has_value());
    CHECK(pipe.compressed.detecting->matrix.rows() == pipe.compressed.instance.rows());
    CHECK(pipe.compressed.detecting->matrix.cols() == pipe.ilp.instance.rows());
    CHECK_FALSE(pipe.ilp.detecting.has_value());

    PipelineResult bare = run_pipeline(f, false);
    CHECK(bare.stages.size() == 4);
    CHECK_FALSE(bare.targets.has_value());
}
