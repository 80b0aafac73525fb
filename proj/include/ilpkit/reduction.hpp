#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnf.hpp"
#include "detecting.hpp"
#include "instance.hpp"
#include "matrix.hpp"

namespace ilpkit {

// Provenance of a column in a reduction stage, relative to that stage's
// input: either a fresh auxiliary column or a passthrough of an input column.
struct ColumnOrigin {
    enum Kind {
        literal_pos,   // a = variable, indicator for the positive literal
        literal_neg,   // a = variable, indicator for the negative literal
        clause_y,      // a = clause index, slack absorbed by the sum row
        clause_z,      // a = clause index, complement of the slack
        carry,         // a = source row, b = bit position
        complement_a,  // a = source row, b = bit position (first complement)
        complement_b,  // a = source row, b = bit position (second complement)
        target_z,      // the all-stages unit column
        target_power,  // a = bit position t, forced to the value 2^t
        passthrough    // a = column index in the stage input
    };

    Kind kind;
    std::size_t a = 0;
    std::size_t b = 0;
};

struct RowOrigin {
    enum Kind {
        variable_pair,  // a = variable, x_v + x_{not v} = 1
        clause_slack,   // a = clause, y_c + z_c = 2
        clause_sum,     // a = clause, sum of literals + y_c = 3
        detecting_row,  // a = row of the detecting matrix
        complement_a,   // a = source row, b = bit, y + y' = B
        complement_b,   // a = source row, b = bit, y + y'' = B
        digit,          // a = source row, b = bit (b = delta-1 is the top row)
        homogenized,    // a = source row, right-hand side moved into columns
        unit_z,         // z = 1
        chain,          // a = bit t, forces y_t = 2^t
        passthrough     // a = row index in the stage input (no-op stages)
    };

    Kind kind;
    std::size_t a = 0;
    std::size_t b = 0;
};

struct StageInfo {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    Int entry_min = 0;
    Int entry_max = 0;
    Int b_min = 0;
    Int b_max = 0;
};

struct ReductionStep {
    IlpInstance instance;
    std::vector<ColumnOrigin> columns;            // one per instance column
    std::vector<RowOrigin> rows;                  // one per instance row
    StageInfo info;
    std::optional<DetectingMatrix> detecting;     // set by compress_constraints
};

inline StageInfo make_stage_info(std::string name, const IlpInstance& inst) {
    StageInfo s;
    s.name = std::move(name);
    s.rows = inst.rows();
    s.cols = inst.cols();
    for (Int v : inst.a.data()) {
        s.entry_min = std::min(s.entry_min, v);
        s.entry_max = std::max(s.entry_max, v);
    }
    for (std::size_t i = 0; i < inst.b.size(); ++i) {
        s.b_min = i == 0 ? inst.b[i] : std::min(s.b_min, inst.b[i]);
        s.b_max = i == 0 ? inst.b[i] : std::max(s.b_max, inst.b[i]);
    }
    return s;
}

namespace detail {
inline Int bit_at(Int v, Int j) { return (v >> j) & 1; }
}  // namespace detail

// Encodes a (3,4)-form CNF as an equality system over nonnegative integers.
// Columns: one indicator per literal (positive before negative, variables in
// order), then a slack pair y_c, z_c per clause. Rows: x_v + x_{not v} = 1
// per variable, then per clause y_c + z_c = 2 followed by
// sum of literal indicators + y_c = 3. A 0/1 assignment satisfies the clause
// iff the sum row can absorb the deficit with y_c <= 2, so feasibility
// equals satisfiability. Every entry is 0/1, right-hand sides are 1, 2, 3,
// and the occurrence caps of the (3,4) form keep every row and column at
// four nonzeros or fewer.
inline ReductionStep sat34_to_ilp(const CnfFormula& f) {
    std::string why;
    if (!validate_34sat(f, &why))
        throw Error(Error::precondition, "sat34_to_ilp needs (3,4) form: " + why);
    std::size_t n = static_cast<std::size_t>(f.num_vars), m = f.clauses.size();
    std::size_t k = n + 2 * m, l = 2 * n + 2 * m;

    auto xcol = [](int lit) {
        std::size_t v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
        return 2 * (v - 1) + (lit > 0 ? 0 : 1);
    };

    ReductionStep step;
    Mat a(k, l);
    Vec b(k, 0);
    step.columns.resize(l);
    step.rows.resize(k);
    for (std::size_t v = 0; v < n; ++v) {
        a.set(v, 2 * v, 1);
        a.set(v, 2 * v + 1, 1);
        b[v] = 1;
        step.rows[v] = {RowOrigin::variable_pair, v + 1, 0};
        step.columns[2 * v] = {ColumnOrigin::literal_pos, v + 1, 0};
        step.columns[2 * v + 1] = {ColumnOrigin::literal_neg, v + 1, 0};
    }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t ycol = 2 * n + 2 * c, zcol = ycol + 1;
        std::size_t ry = n + 2 * c, rs = ry + 1;
        a.set(ry, ycol, 1);
        a.set(ry, zcol, 1);
        b[ry] = 2;
        for (int lit : f.clauses[c]) a.set(rs, xcol(lit), a.at(rs, xcol(lit)) + 1);
        a.set(rs, ycol, 1);
        b[rs] = 3;
        step.rows[ry] = {RowOrigin::clause_slack, c, 0};
        step.rows[rs] = {RowOrigin::clause_sum, c, 0};
        step.columns[ycol] = {ColumnOrigin::clause_y, c, 0};
        step.columns[zcol] = {ColumnOrigin::clause_z, c, 0};
    }
    step.instance = IlpInstance(std::move(a), std::move(b));
    step.info = make_stage_info("ilp", step.instance);
    return step;
}

// Replaces A x = b by M A x = M b where M is a deterministic d-detecting
// matrix with as many detection columns as A has rows. For nonnegative A and
// x the product A x is a nonnegative vector, and b lies in {0..d-1}^k, so
// detection makes the two systems have the same solution set: u >= 0 and
// M u = M b imply u + ((d-1) - b) componentwise extends to the canonical
// unique representation, forcing u = b. Shrinks the row count from k to
// O(d log_d k) at the price of entries as large as row counts of M.
inline ReductionStep compress_constraints(const IlpInstance& inst, Int d = 4) {
    if (!inst.standard_form())
        throw Error(Error::precondition, "compress_constraints needs standard form");
    if (d < 2) throw Error(Error::precondition, "compress_constraints needs d >= 2");
    for (Int v : inst.a.data())
        if (v < 0) throw Error(Error::precondition, "compress_constraints needs a nonnegative matrix");
    for (Int v : inst.b)
        if (v < 0 || v > d - 1)
            throw Error(Error::precondition, "compress_constraints needs 0 <= b <= d-1");

    DetectingMatrix m = gen_detecting_deterministic(d, inst.rows());
    ReductionStep step;
    step.instance = IlpInstance(mat_mul(m.matrix, inst.a), mat_vec(m.matrix, inst.b));
    for (std::size_t j = 0; j < inst.cols(); ++j)
        step.columns.push_back({ColumnOrigin::passthrough, j, 0});
    for (std::size_t i = 0; i < m.matrix.rows(); ++i)
        step.rows.push_back({RowOrigin::detecting_row, i, 0});
    step.detecting = std::move(m);
    step.info = make_stage_info("compressed", step.instance);
    return step;
}

// Rewrites a nonnegative system with entries up to 2^delta - 1 as an
// equivalent one with 0/1 entries, processing each source row bit by bit.
// Digit row j states: (bit j of the row) applied to x, plus the carry from
// digit j-1, plus two complement slacks, equals bit j of b plus 2B, where
// B = 2^bitlen(b_i) bounds every carry. The complement rows y + y' = B and
// y + y'' = B pin both slacks to B - y, so the three rows for digit j encode
// exactly "column sum + carry in = target bit + 2 * carry out". Weighting
// digit rows by 2^j and complement pairs by -2^j telescopes back to the
// source row, which is what check_coefficient_certificate recomputes.
inline ReductionStep reduce_coefficients(const IlpInstance& inst) {
    if (!inst.standard_form())
        throw Error(Error::precondition, "reduce_coefficients needs standard form");
    for (Int v : inst.a.data())
        if (v < 0) throw Error(Error::precondition, "reduce_coefficients needs a nonnegative matrix");
    for (Int v : inst.b)
        if (v < 0) throw Error(Error::precondition, "reduce_coefficients needs nonnegative targets");

    std::size_t k = inst.rows(), l = inst.cols();
    Int delta = bit_length(inst.a.max_abs());
    ReductionStep step;
    if (delta <= 1) {
        step.instance = inst;
        for (std::size_t j = 0; j < l; ++j)
            step.columns.push_back({ColumnOrigin::passthrough, j, 0});
        for (std::size_t i = 0; i < k; ++i) step.rows.push_back({RowOrigin::passthrough, i, 0});
        step.info = make_stage_info("binary", step.instance);
        return step;
    }

    std::size_t width = static_cast<std::size_t>(delta - 1);
    Mat a(k * (3 * static_cast<std::size_t>(delta) - 2), l + 3 * width * k);
    Vec b(a.rows(), 0);
    step.columns.resize(a.cols());
    step.rows.resize(a.rows());
    for (std::size_t j = 0; j < l; ++j) step.columns[j] = {ColumnOrigin::passthrough, j, 0};

    std::size_t row = 0, col = l;
    for (std::size_t i = 0; i < k; ++i) {
        Int big = inst.b[i] > 0 ? checked_pow(2, bit_length(inst.b[i])) : 1;
        std::size_t ycol = col, c1col = col + width, c2col = col + 2 * width;
        col += 3 * width;
        for (std::size_t j = 0; j < width; ++j) {
            step.columns[ycol + j] = {ColumnOrigin::carry, i, j};
            step.columns[c1col + j] = {ColumnOrigin::complement_a, i, j};
            step.columns[c2col + j] = {ColumnOrigin::complement_b, i, j};
            a.set(row, ycol + j, 1);
            a.set(row, c1col + j, 1);
            b[row] = big;
            step.rows[row++] = {RowOrigin::complement_a, i, j};
            a.set(row, ycol + j, 1);
            a.set(row, c2col + j, 1);
            b[row] = big;
            step.rows[row++] = {RowOrigin::complement_b, i, j};
        }
        for (Int j = 0; j < delta - 1; ++j) {
            for (std::size_t t = 0; t < l; ++t) a.set(row, t, detail::bit_at(inst.a.at(i, t), j));
            if (j > 0) a.set(row, ycol + static_cast<std::size_t>(j) - 1, 1);
            a.set(row, c1col + static_cast<std::size_t>(j), 1);
            a.set(row, c2col + static_cast<std::size_t>(j), 1);
            b[row] = checked_add(detail::bit_at(inst.b[i], j), checked_mul(2, big));
            step.rows[row++] = {RowOrigin::digit, i, static_cast<std::size_t>(j)};
        }
        for (std::size_t t = 0; t < l; ++t) a.set(row, t, detail::bit_at(inst.a.at(i, t), delta - 1));
        a.set(row, ycol + width - 1, 1);
        b[row] = inst.b[i] >> (delta - 1);
        step.rows[row++] = {RowOrigin::digit, i, static_cast<std::size_t>(delta - 1)};
    }
    step.instance = IlpInstance(std::move(a), std::move(b));
    step.info = make_stage_info("binary", step.instance);
    return step;
}

// Moves the right-hand side into the matrix: each source row becomes
// homogeneous with -1 entries on power columns selected by the bits of b_i,
// a unit row pins z = 1, and chain rows z + y_0 + ... + y_{t-1} - y_t = 0
// force y_t = 2^t. Matrix entries grow by at most {-1, 1}, and the new
// right-hand side is all zero except the single 1 for z, so a 0/1 source
// system lands in entries {-1,0,1} with targets in {0,1}.
inline ReductionStep reduce_targets(const IlpInstance& inst) {
    if (!inst.standard_form())
        throw Error(Error::precondition, "reduce_targets needs standard form");
    for (Int v : inst.b)
        if (v < 0) throw Error(Error::precondition, "reduce_targets needs nonnegative targets");

    std::size_t k = inst.rows(), l = inst.cols();
    std::size_t s = static_cast<std::size_t>(bit_length(norm_inf(inst.b)));
    Mat a(k + 1 + s, l + 1 + s);
    Vec b(a.rows(), 0);
    std::size_t zcol = l;

    ReductionStep step;
    for (std::size_t j = 0; j < l; ++j) step.columns.push_back({ColumnOrigin::passthrough, j, 0});
    step.columns.push_back({ColumnOrigin::target_z, 0, 0});
    for (std::size_t t = 0; t < s; ++t) step.columns.push_back({ColumnOrigin::target_power, t, 0});

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < l; ++j) a.set(i, j, inst.a.at(i, j));
        for (std::size_t t = 0; t < s; ++t)
            if (detail::bit_at(inst.b[i], static_cast<Int>(t))) a.set(i, zcol + 1 + t, -1);
        step.rows.push_back({RowOrigin::homogenized, i, 0});
    }
    a.set(k, zcol, 1);
    b[k] = 1;
    step.rows.push_back({RowOrigin::unit_z, 0, 0});
    for (std::size_t t = 0; t < s; ++t) {
        std::size_t r = k + 1 + t;
        a.set(r, zcol, 1);
        for (std::size_t j = 0; j < t; ++j) a.set(r, zcol + 1 + j, 1);
        a.set(r, zcol + 1 + t, -1);
        step.rows.push_back({RowOrigin::chain, t, 0});
    }
    step.instance = IlpInstance(std::move(a), std::move(b));
    step.info = make_stage_info("pm1-targets", step.instance);
    return step;
}

// Certificate that a reduce_coefficients output encodes its source: for each
// source row, the 2^bit weighted digit rows minus the 2^bit weighted
// complement pairs must reproduce the source row exactly, with every
// auxiliary column cancelling. Passing means any solution of the reduced
// system satisfies the source system on the passthrough columns.
inline bool check_coefficient_certificate(const IlpInstance& source, const ReductionStep& step) {
    std::size_t k = source.rows(), l = source.cols();
    const IlpInstance& red = step.instance;
    if (step.rows.size() != red.rows() || step.columns.size() != red.cols()) return false;
    for (std::size_t j = 0; j < l; ++j)
        if (step.columns[j].kind != ColumnOrigin::passthrough || step.columns[j].a != j) return false;

    if (red.cols() == l) return red.a == source.a && red.b == source.b;

    for (std::size_t i = 0; i < k; ++i) {
        Vec w(red.cols(), 0);
        Int rhs = 0;
        bool any = false;
        for (std::size_t r = 0; r < red.rows(); ++r) {
            const RowOrigin& ro = step.rows[r];
            if (ro.a != i) continue;
            Int sign;
            if (ro.kind == RowOrigin::digit)
                sign = 1;
            else if (ro.kind == RowOrigin::complement_a || ro.kind == RowOrigin::complement_b)
                sign = -1;
            else
                return false;
            any = true;
            Int weight = checked_mul(sign, checked_pow(2, static_cast<Int>(ro.b)));
            for (std::size_t j = 0; j < red.cols(); ++j)
                w[j] = checked_add(w[j], checked_mul(weight, red.a.at(r, j)));
            rhs = checked_add(rhs, checked_mul(weight, red.b[r]));
        }
        if (!any) return false;
        for (std::size_t j = 0; j < red.cols(); ++j)
            if (w[j] != (j < l ? source.a.at(i, j) : 0)) return false;
        if (rhs != source.b[i]) return false;
    }
    return true;
}

// Certificate that a reduce_targets output encodes its source: the chain
// rows must have the exact shape that forces y_t = 2^t, the unit row must
// pin z, and each homogenized row must carry the source coefficients with
// -1 entries whose powers sum back to the source target.
inline bool check_target_certificate(const IlpInstance& source, const ReductionStep& step) {
    std::size_t k = source.rows(), l = source.cols();
    const IlpInstance& red = step.instance;
    std::size_t s = red.cols() >= l + 1 ? red.cols() - l - 1 : red.rows();
    if (red.cols() != l + 1 + s || red.rows() != k + 1 + s) return false;
    if (step.rows.size() != red.rows() || step.columns.size() != red.cols()) return false;
    std::size_t zcol = l;

    for (std::size_t i = 0; i < k; ++i) {
        if (step.rows[i].kind != RowOrigin::homogenized || step.rows[i].a != i) return false;
        if (red.b[i] != 0) return false;
        Int target = 0;
        for (std::size_t j = 0; j < l; ++j)
            if (red.a.at(i, j) != source.a.at(i, j)) return false;
        if (red.a.at(i, zcol) != 0) return false;
        for (std::size_t t = 0; t < s; ++t) {
            Int c = red.a.at(i, zcol + 1 + t);
            if (c != 0 && c != -1) return false;
            if (c == -1) target = checked_add(target, checked_pow(2, static_cast<Int>(t)));
        }
        if (target != source.b[i]) return false;
    }
    if (step.rows[k].kind != RowOrigin::unit_z || red.b[k] != 1) return false;
    for (std::size_t j = 0; j < red.cols(); ++j)
        if (red.a.at(k, j) != (j == zcol ? 1 : 0)) return false;
    for (std::size_t t = 0; t < s; ++t) {
        std::size_t r = k + 1 + t;
        if (step.rows[r].kind != RowOrigin::chain || step.rows[r].a != t) return false;
        if (red.b[r] != 0) return false;
        for (std::size_t j = 0; j < red.cols(); ++j) {
            Int want = 0;
            if (j == zcol) want = 1;
            else if (j > zcol && j < zcol + 1 + t) want = 1;
            else if (j == zcol + 1 + t) want = -1;
            if (red.a.at(r, j) != want) return false;
        }
    }
    return true;
}

// Extends a solution of the source system to the coefficient-reduced one by
// running the binary addition the digit rows encode: the carry into digit
// j+1 is (column sum at digit j + carry in - target bit) / 2, and both
// complements are B - carry. Carries never exceed b_i / 2 < B, so the
// extension stays nonnegative.
inline Vec lift_coefficient_witness(const IlpInstance& source, const ReductionStep& step,
                                    const Vec& x) {
    if (mat_vec(source.a, x) != source.b)
        throw Error(Error::precondition, "lift_coefficient_witness needs a solution of the source");
    Vec out(step.instance.cols(), 0);
    for (std::size_t j = 0; j < source.cols(); ++j) out[j] = x[j];
    if (step.instance.cols() == source.cols()) return out;

    Int delta = bit_length(source.a.max_abs());
    for (std::size_t i = 0; i < source.rows(); ++i) {
        Int big = source.b[i] > 0 ? checked_pow(2, bit_length(source.b[i])) : 1;
        std::vector<std::size_t> ycol(static_cast<std::size_t>(delta - 1)),
            c1col(ycol.size()), c2col(ycol.size());
        for (std::size_t j = 0; j < step.columns.size(); ++j) {
            const ColumnOrigin& co = step.columns[j];
            if (co.a != i) continue;
            if (co.kind == ColumnOrigin::carry) ycol[co.b] = j;
            if (co.kind == ColumnOrigin::complement_a) c1col[co.b] = j;
            if (co.kind == ColumnOrigin::complement_b) c2col[co.b] = j;
        }
        Int carry = 0;
        for (Int j = 0; j + 1 < delta; ++j) {
            Int sum = carry;
            for (std::size_t t = 0; t < source.cols(); ++t)
                sum = checked_add(sum, checked_mul(detail::bit_at(source.a.at(i, t), j), x[t]));
            carry = (sum - detail::bit_at(source.b[i], j)) / 2;
            if (carry < 0 || carry > big)
                throw Error(Error::internal, "carry escaped its complement bound");
            std::size_t jj = static_cast<std::size_t>(j);
            out[ycol[jj]] = carry;
            out[c1col[jj]] = big - carry;
            out[c2col[jj]] = big - carry;
        }
    }
    if (mat_vec(step.instance.a, out) != step.instance.b)
        throw Error(Error::internal, "lifted witness does not satisfy the reduced system");
    return out;
}

// Extends a solution of the source system to the target-reduced one: z = 1
// and y_t = 2^t, the values the chain rows force.
inline Vec lift_target_witness(const IlpInstance& source, const ReductionStep& step, const Vec& x) {
    if (mat_vec(source.a, x) != source.b)
        throw Error(Error::precondition, "lift_target_witness needs a solution of the source");
    Vec out(step.instance.cols(), 0);
    for (std::size_t j = 0; j < source.cols(); ++j) out[j] = x[j];
    out[source.cols()] = 1;
    for (std::size_t t = source.cols() + 1; t < out.size(); ++t)
        out[t] = checked_pow(2, static_cast<Int>(t - source.cols() - 1));
    if (mat_vec(step.instance.a, out) != step.instance.b)
        throw Error(Error::internal, "lifted witness does not satisfy the reduced system");
    return out;
}

// Restriction of a reduced-system solution to the stage input's columns.
inline Vec project_witness(const ReductionStep& step, const Vec& y) {
    if (y.size() != step.instance.cols())
        throw Error(Error::dimension, "project_witness: size mismatch");
    std::size_t l = 0;
    for (const ColumnOrigin& co : step.columns)
        if (co.kind == ColumnOrigin::passthrough) l = std::max(l, co.a + 1);
    Vec out(l, 0);
    for (std::size_t j = 0; j < step.columns.size(); ++j)
        if (step.columns[j].kind == ColumnOrigin::passthrough) out[step.columns[j].a] = y[j];
    return out;
}

struct PipelineResult {
    CnfFormula relaxed;                    // equisatisfiable (3,4) form of the input
    ReductionStep ilp;                     // 0/1 entries, targets in {1,2,3}
    ReductionStep compressed;              // detecting-matrix image of the ilp stage
    ReductionStep binary;                  // entries back to 0/1, large targets
    std::optional<ReductionStep> targets;  // entries {-1,0,1}, targets {0,1}
    std::vector<StageInfo> stages;
};

// The full chain from CNF to a feasibility-equivalent equality system.
// Every stage preserves feasibility exactly, so satisfiability of the input
// equals feasibility of each produced instance.
inline PipelineResult run_pipeline(const CnfFormula& input, bool to_targets = false, Int d = 4) {
    PipelineResult out;
    out.relaxed = sat_to_34sat(input);
    StageInfo cnf_info;
    cnf_info.name = "34sat";
    cnf_info.rows = out.relaxed.clauses.size();
    cnf_info.cols = static_cast<std::size_t>(out.relaxed.num_vars);
    out.stages.push_back(cnf_info);

    out.ilp = sat34_to_ilp(out.relaxed);
    out.compressed = compress_constraints(out.ilp.instance, d);
    out.binary = reduce_coefficients(out.compressed.instance);
    out.stages.push_back(out.ilp.info);
    out.stages.push_back(out.compressed.info);
    out.stages.push_back(out.binary.info);
    if (to_targets) {
        out.targets = reduce_targets(out.binary.instance);
        out.stages.push_back(out.targets->info);
    }
    return out;
}

}  // namespace ilpkit
