#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cnf.hpp"
#include "instance.hpp"

namespace ilpkit {

// Line-oriented text formats. '#' starts a comment, blank lines are ignored.
//
//   ilp <k> <l>      header, then k rows of l integers
//   b: <k ints>
//   l: <l ints>      optional, default all zeros
//   u: <l tokens>    optional, integer or * for unbounded
//   w: <l ints>      optional objective
//
// and for bare matrices:
//
//   mat <k> <l>      header, then k rows of l integers
//
// Serialization is canonical (minimal decimal, single spaces, optional
// sections only when they differ from the default), so serialize(parse(t))
// == t holds for canonical t and reports are byte-stable.

namespace detail {

inline Int parse_int_token(const std::string& tok) {
    Int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc::result_out_of_range)
        throw Error(Error::overflow, "integer literal out of range: " + tok);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw Error(Error::parse, "not an integer: '" + tok + "'");
    return v;
}

inline std::vector<std::string> tokenize(std::istream& in) {
    std::vector<std::string> toks;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) toks.push_back(t);
    }
    return toks;
}

struct TokenReader {
    const std::vector<std::string>& toks;
    std::size_t pos = 0;

    bool done() const { return pos >= toks.size(); }
    const std::string& peek() const {
        if (done()) throw Error(Error::parse, "unexpected end of input");
        return toks[pos];
    }
    std::string take() {
        if (done()) throw Error(Error::parse, "unexpected end of input");
        return toks[pos++];
    }
    Int take_int() { return parse_int_token(take()); }
    std::size_t take_size(const char* what) {
        Int v = take_int();
        if (v < 0) throw Error(Error::parse, std::string("negative ") + what);
        return static_cast<std::size_t>(v);
    }
    void expect(const std::string& kw) {
        std::string t = take();
        if (t != kw) throw Error(Error::parse, "expected '" + kw + "', got '" + t + "'");
    }
};

inline Vec take_vec(TokenReader& r, std::size_t n) {
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = r.take_int();
    return v;
}

}  // namespace detail

inline Mat parse_matrix_body(detail::TokenReader& r) {
    std::size_t k = r.take_size("row count"), l = r.take_size("column count");
    Mat m(k, l);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < l; ++j) m.set(i, j, r.take_int());
    return m;
}

inline Mat parse_matrix(std::istream& in) {
    auto toks = detail::tokenize(in);
    detail::TokenReader r{toks};
    r.expect("mat");
    Mat m = parse_matrix_body(r);
    if (!r.done()) throw Error(Error::parse, "trailing input after matrix");
    return m;
}

inline IlpInstance parse_instance(std::istream& in) {
    auto toks = detail::tokenize(in);
    detail::TokenReader r{toks};
    r.expect("ilp");
    IlpInstance inst;
    inst.a = parse_matrix_body(r);
    std::size_t l = inst.a.cols();
    inst.lower.assign(l, 0);
    inst.upper.assign(l, std::nullopt);
    bool have_b = false, have_l = false, have_u = false, have_w = false;
    while (!r.done()) {
        std::string section = r.take();
        if (section == "b:" && !have_b) {
            inst.b = detail::take_vec(r, inst.a.rows());
            have_b = true;
        } else if (section == "l:" && !have_l) {
            inst.lower = detail::take_vec(r, l);
            have_l = true;
        } else if (section == "u:" && !have_u) {
            for (std::size_t j = 0; j < l; ++j) {
                std::string t = r.take();
                if (t == "*")
                    inst.upper[j] = std::nullopt;
                else
                    inst.upper[j] = detail::parse_int_token(t);
            }
            have_u = true;
        } else if (section == "w:" && !have_w) {
            inst.objective = detail::take_vec(r, l);
            have_w = true;
        } else {
            throw Error(Error::parse, "unexpected section '" + section + "'");
        }
    }
    if (!have_b) throw Error(Error::parse, "missing b: section");
    inst.validate();
    return inst;
}

inline IlpInstance parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

namespace detail {
inline void write_row(std::ostream& out, const Mat& m, std::size_t i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j) out << ' ';
        out << m.at(i, j);
    }
    out << '\n';
}
}  // namespace detail

inline void serialize_matrix(std::ostream& out, const Mat& m) {
    out << "mat " << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) detail::write_row(out, m, i);
}

inline void serialize_instance(std::ostream& out, const IlpInstance& inst) {
    out << "ilp " << inst.rows() << ' ' << inst.cols() << '\n';
    for (std::size_t i = 0; i < inst.rows(); ++i) detail::write_row(out, inst.a, i);
    out << "b:";
    for (Int v : inst.b) out << ' ' << v;
    out << '\n';
    bool def_l = true, def_u = true;
    for (std::size_t j = 0; j < inst.cols(); ++j) {
        if (inst.lower[j] != 0) def_l = false;
        if (inst.upper[j]) def_u = false;
    }
    if (!def_l) {
        out << "l:";
        for (Int v : inst.lower) out << ' ' << v;
        out << '\n';
    }
    if (!def_u) {
        out << "u:";
        for (const auto& u : inst.upper) {
            out << ' ';
            if (u)
                out << *u;
            else
                out << '*';
        }
        out << '\n';
    }
    if (inst.objective) {
        out << "w:";
        for (Int v : *inst.objective) out << ' ' << v;
        out << '\n';
    }
}

inline std::string serialize_instance(const IlpInstance& inst) {
    std::ostringstream out;
    serialize_instance(out, inst);
    return out.str();
}

inline std::string serialize_matrix(const Mat& m) {
    std::ostringstream out;
    serialize_matrix(out, m);
    return out.str();
}

// DIMACS CNF. Tolerates comment lines, a '%' end marker, and a clause-count
// header that disagrees with the body (the body wins).
inline CnfFormula read_dimacs(std::istream& in) {
    CnfFormula f;
    std::string line;
    bool have_header = false;
    std::vector<int> cur;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == 'c') continue;
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) {
            if (t == "%") goto done;  // SATLIB end marker, rest is padding
            if (!have_header) {
                if (t != "p") throw Error(Error::parse, "expected DIMACS 'p cnf' header");
                std::string fmt;
                if (!(ls >> fmt) || fmt != "cnf")
                    throw Error(Error::parse, "expected DIMACS 'p cnf' header");
                long long n = 0, m = 0;
                if (!(ls >> n >> m) || n < 0)
                    throw Error(Error::parse, "malformed DIMACS header");
                f.num_vars = static_cast<int>(n);
                have_header = true;
                break;
            }
            Int lit = detail::parse_int_token(t);
            if (lit == 0) {
                f.clauses.push_back(cur);
                cur.clear();
            } else {
                Int v = lit > 0 ? lit : -lit;
                if (v > f.num_vars) throw Error(Error::parse, "literal exceeds variable count");
                cur.push_back(static_cast<int>(lit));
            }
        }
    }
done:
    if (!have_header) throw Error(Error::parse, "missing DIMACS header");
    if (!cur.empty()) f.clauses.push_back(cur);  // unterminated final clause
    return f;
}

inline void write_dimacs(std::ostream& out, const CnfFormula& f) {
    out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (int lit : c) out << lit << ' ';
        out << "0\n";
    }
}

}  // namespace ilpkit
