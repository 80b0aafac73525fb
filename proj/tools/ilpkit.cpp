// Command-line front end: one binary per the library, one subcommand per
// module. Reports go to stdout (or --output); diagnostics go to stderr, so
// with --json the report stream carries exactly one JSON document. Exit
// codes: 0 success or feasible, 1 infeasible, 2 usage error, 3 budget
// exhausted, 4 verification counterexample found.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ilpkit/bench.hpp"
#include "ilpkit/detecting.hpp"
#include "ilpkit/gadgets.hpp"
#include "ilpkit/graver.hpp"
#include "ilpkit/io.hpp"
#include "ilpkit/reduction.hpp"
#include "ilpkit/solvers.hpp"
#include "ilpkit/structure.hpp"

namespace {

using nlohmann::ordered_json;
using namespace ilpkit;

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;
constexpr int kCounterexample = 4;

struct Global {
    bool json = false;
    std::uint64_t seed = 7;
    std::uint64_t budget = kDefaultStateBudget;
    int td_limit = 20;
    std::optional<Int> l1_bound;
    std::string output;

    std::ofstream file;
    std::ostream& out() {
        if (output.empty()) return std::cout;
        if (!file.is_open()) {
            file.open(output);
            if (!file) throw Error(Error::parse, "cannot open output file: " + output);
        }
        return file;
    }
};

// "-" and the empty string mean stdin
template <typename F>
auto with_input(const std::string& path, F f) {
    if (path.empty() || path == "-") return f(std::cin);
    std::ifstream in(path);
    if (!in) throw Error(Error::parse, "cannot open input file: " + path);
    return f(in);
}

IlpInstance load_instance(const std::string& path) {
    return with_input(path, [](std::istream& in) { return parse_instance(in); });
}

ordered_json jmat(const Mat& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json jinstance(const IlpInstance& inst) {
    ordered_json j;
    j["rows"] = inst.rows();
    j["cols"] = inst.cols();
    j["a"] = jmat(inst.a);
    j["b"] = inst.b;
    j["lower"] = inst.lower;
    ordered_json upper = ordered_json::array();
    for (const auto& u : inst.upper)
        upper.push_back(u ? ordered_json(*u) : ordered_json(nullptr));
    j["upper"] = std::move(upper);
    if (inst.objective) j["objective"] = *inst.objective;
    return j;
}

ordered_json jstage(const StageInfo& s, bool cnf_stage) {
    ordered_json j;
    j["stage"] = s.name;
    j["rows"] = s.rows;
    j["cols"] = s.cols;
    if (!cnf_stage) {
        j["entry_min"] = s.entry_min;
        j["entry_max"] = s.entry_max;
        j["b_min"] = s.b_min;
        j["b_max"] = s.b_max;
    }
    return j;
}

ordered_json jdesignated(const DesignatedColumns& d) {
    ordered_json j = ordered_json::object();
    if (d.z) j["z"] = *d.z;
    if (d.u) j["u"] = *d.u;
    if (d.w) j["w"] = *d.w;
    j["y"] = d.y;
    return j;
}

void emit(Global& g, const ordered_json& j) { g.out() << j.dump(2) << '\n'; }

void print_vec(std::ostream& out, const Vec& v) {
    for (std::size_t j = 0; j < v.size(); ++j) out << (j ? " " : "") << v[j];
}

void trace_line(std::ostream& out, const StageInfo& s, bool cnf_stage, const char* prefix) {
    out << prefix << "trace: " << s.name << " rows=" << s.rows << " cols=" << s.cols;
    if (!cnf_stage)
        out << " entries=[" << s.entry_min << "," << s.entry_max << "] b=[" << s.b_min << ","
            << s.b_max << "]";
    out << '\n';
}

int run_detect_gen(Global& g, Int d, std::size_t cols, bool random) {
    DetectingMatrix dm =
        random ? gen_detecting_random(d, cols, g.seed) : gen_detecting_deterministic(d, cols);
    const char* method = random ? "randomized" : "deterministic";
    if (g.json) {
        ordered_json j;
        j["command"] = "detect gen";
        j["seed"] = g.seed;
        j["d"] = dm.d;
        j["method"] = method;
        j["rows"] = dm.matrix.rows();
        j["cols"] = dm.matrix.cols();
        ordered_json blocks = ordered_json::array();
        for (const auto& [r, c] : dm.blocks) blocks.push_back(ordered_json::array({r, c}));
        j["blocks"] = std::move(blocks);
        j["matrix"] = jmat(dm.matrix);
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "# detecting d=" << dm.d << " method=" << method << " rows=" << dm.matrix.rows()
            << " cols=" << dm.matrix.cols() << '\n';
        serialize_matrix(out, dm.matrix);
    }
    return kOk;
}

int run_detect_verify(Global& g, Int d, const std::string& input) {
    Mat m = with_input(input, [](std::istream& in) { return parse_matrix(in); });
    VerificationReport rep = verify_detecting(m, d, g.budget);
    if (g.json) {
        ordered_json j;
        j["command"] = "detect verify";
        j["seed"] = g.seed;
        j["d"] = d;
        j["rows"] = m.rows();
        j["cols"] = m.cols();
        j["verified"] = rep.verified;
        if (rep.counterexample) {
            ordered_json ce;
            ce["u"] = rep.counterexample->first;
            ce["v"] = rep.counterexample->second;
            j["counterexample"] = std::move(ce);
        } else {
            j["counterexample"] = nullptr;
        }
        j["search_bound"] = rep.search_bound;
        j["explored_states"] = rep.explored_states;
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "verified: " << (rep.verified ? "yes" : "no") << '\n';
        if (rep.counterexample) {
            out << "u: ";
            print_vec(out, rep.counterexample->first);
            out << "\nv: ";
            print_vec(out, rep.counterexample->second);
            out << '\n';
        }
        out << "explored_states = " << rep.explored_states << '\n';
    }
    return rep.verified ? kOk : kCounterexample;
}

int run_reduce(Global& g, const std::string& input, const std::string& stage, Int d) {
    CnfFormula f = with_input(input, [](std::istream& in) { return read_dimacs(in); });
    if (stage == "34sat") {
        CnfFormula relaxed = sat_to_34sat(f);
        if (g.json) {
            ordered_json j;
            j["command"] = "reduce sat";
            j["seed"] = g.seed;
            j["stage"] = stage;
            ordered_json trace = ordered_json::array();
            ordered_json st;
            st["stage"] = "34sat";
            st["rows"] = relaxed.clauses.size();
            st["cols"] = relaxed.num_vars;
            trace.push_back(std::move(st));
            j["trace"] = std::move(trace);
            ordered_json cnf;
            cnf["num_vars"] = relaxed.num_vars;
            cnf["clauses"] = relaxed.clauses;
            j["cnf"] = std::move(cnf);
            emit(g, j);
        } else {
            std::ostream& out = g.out();
            out << "c trace: 34sat clauses=" << relaxed.clauses.size()
                << " vars=" << relaxed.num_vars << '\n';
            write_dimacs(out, relaxed);
        }
        return kOk;
    }

    PipelineResult pipe = run_pipeline(f, stage == "pm1-targets", d);
    const IlpInstance* inst = nullptr;
    std::size_t upto = 0;  // stages [0, upto] belong to the requested prefix
    if (stage == "ilp") {
        inst = &pipe.ilp.instance;
        upto = 1;
    } else if (stage == "compressed") {
        inst = &pipe.compressed.instance;
        upto = 2;
    } else if (stage == "binary") {
        inst = &pipe.binary.instance;
        upto = 3;
    } else {
        inst = &pipe.targets->instance;
        upto = 4;
    }
    if (g.json) {
        ordered_json j;
        j["command"] = "reduce sat";
        j["seed"] = g.seed;
        j["stage"] = stage;
        j["d"] = d;
        ordered_json trace = ordered_json::array();
        for (std::size_t i = 0; i <= upto; ++i) trace.push_back(jstage(pipe.stages[i], i == 0));
        j["trace"] = std::move(trace);
        j["instance"] = jinstance(*inst);
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        for (std::size_t i = 0; i <= upto; ++i) trace_line(out, pipe.stages[i], i == 0, "# ");
        serialize_instance(out, *inst);
    }
    return kOk;
}

int run_gadget(Global& g, GadgetInstance gi, ordered_json params, const std::string& title,
               bool pm1) {
    if (pm1) gi.instance = duplicate_to_pm1(gi.instance);
    if (g.json) {
        ordered_json j;
        j["command"] = title;
        j["seed"] = g.seed;
        for (auto& [k, v] : params.items()) j[k] = v;
        j["instance"] = jinstance(gi.instance);
        j["designated"] = jdesignated(gi.designated);
        j["expected_solutions"] = gi.expected_solutions;
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "# " << title;
        for (auto& [k, v] : params.items()) out << ' ' << k << '=' << v.dump();
        out << '\n';
        serialize_instance(out, gi.instance);
        out << "# designated: " << jdesignated(gi.designated).dump() << '\n';
        out << "# expected_solutions: " << gi.expected_solutions << '\n';
    }
    return kOk;
}

int run_structure_td(Global& g, const std::string& input, int limit) {
    IlpInstance inst = load_instance(input);
    TreedepthResult td = dual_treedepth(inst.a, limit);
    if (g.json) {
        ordered_json j;
        j["command"] = "structure td";
        j["seed"] = g.seed;
        j["depth"] = td.depth;
        j["parent"] = td.parent;
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "td_D = " << td.depth << '\n';
        out << "parent: " << ordered_json(td.parent).dump() << '\n';
    }
    return kOk;
}

int run_graver_basis(Global& g, const std::string& input) {
    IlpInstance inst = load_instance(input);
    GraverBasis basis = graver_basis(inst.a, g.l1_bound, g.budget);
    if (g.json) {
        ordered_json j;
        j["command"] = "graver basis";
        j["seed"] = g.seed;
        j["count"] = basis.vectors.size();
        j["g1"] = basis.g1;
        j["g_inf"] = basis.g_inf;
        j["enumeration_bound"] = basis.enumeration_bound;
        j["vectors"] = basis.vectors;
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "# graver basis: " << basis.vectors.size() << " vectors g1=" << basis.g1
            << " g_inf=" << basis.g_inf << " bound=" << basis.enumeration_bound << '\n';
        Mat rows(basis.vectors.size(), inst.cols());
        for (std::size_t i = 0; i < basis.vectors.size(); ++i)
            for (std::size_t j = 0; j < inst.cols(); ++j) rows.set(i, j, basis.vectors[i][j]);
        serialize_matrix(out, rows);
    }
    return kOk;
}

int run_graver_certify(Global& g, const std::string& input) {
    IlpInstance inst = load_instance(input);
    NormBoundReport rep = certify_norm_bounds(inst.a, g.l1_bound, g.td_limit);
    bool pass = rep.lemma_holds && rep.decomposable_holds.value_or(true);
    auto opt_bool = [](const std::optional<bool>& v) {
        return v ? ordered_json(*v) : ordered_json(nullptr);
    };
    if (g.json) {
        ordered_json j;
        j["command"] = "graver certify";
        j["seed"] = g.seed;
        j["delta"] = rep.delta;
        j["td"] = rep.treedepth;
        j["lemma_bound"] = rep.lemma_bound ? ordered_json(*rep.lemma_bound) : ordered_json(nullptr);
        j["g1"] = rep.g1;
        j["g_inf"] = rep.g_inf;
        j["lemma_holds"] = rep.lemma_holds;
        j["one_row_holds"] = opt_bool(rep.one_row_holds);
        j["blocks_g1_max"] =
            rep.blocks_g1_max ? ordered_json(*rep.blocks_g1_max) : ordered_json(nullptr);
        j["decomposable_holds"] = opt_bool(rep.decomposable_holds);
        j["pass"] = pass;
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "delta = " << rep.delta << '\n';
        out << "td_D = " << rep.treedepth << '\n';
        if (rep.lemma_bound)
            out << "bound = " << *rep.lemma_bound << '\n';
        else
            out << "bound = (beyond 64 bits)\n";
        out << "g1 = " << rep.g1 << '\n';
        out << "g_inf = " << rep.g_inf << '\n';
        out << "lemma holds: " << (rep.lemma_holds ? "yes" : "no") << '\n';
        if (rep.one_row_holds)
            out << "one-row 2*delta-1 holds: " << (*rep.one_row_holds ? "yes" : "no") << '\n';
        if (rep.blocks_g1_max) out << "blocks g1 max = " << *rep.blocks_g1_max << '\n';
        if (rep.decomposable_holds)
            out << "block decomposition agrees: " << (*rep.decomposable_holds ? "yes" : "no")
                << '\n';
        out << (pass ? "PASS" : "FAIL") << '\n';
    }
    return pass ? kOk : kCounterexample;
}

int report_solve(Global& g, const SolveReport& rep) {
    bool feasible = rep.verdict == SolveReport::feasible;
    if (g.json) {
        ordered_json j;
        j["command"] = "solve";
        j["seed"] = g.seed;
        j["method"] = rep.method;
        j["verdict"] = feasible ? "feasible" : "infeasible";
        j["witness"] = rep.witness ? ordered_json(rep.witness->x) : ordered_json(nullptr);
        j["bound"] = rep.bound;
        j["explored_states"] = rep.explored_states;
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "verdict: " << (feasible ? "feasible" : "infeasible") << '\n';
        if (rep.witness) {
            out << "x: ";
            print_vec(out, rep.witness->x);
            out << '\n';
        }
        out << "explored_states = " << rep.explored_states << '\n';
    }
    return feasible ? kOk : kInfeasible;
}

int run_solve(Global& g, const std::string& input, const std::string& method,
              std::optional<Int> radius, std::uint64_t budget) {
    IlpInstance inst = load_instance(input);
    SolveReport rep;
    if (method == "box")
        rep = solve_box(inst, Vec(inst.cols(), papadimitriou_bound(inst)), budget);
    else if (method == "dp")
        rep = solve_papadimitriou(inst, budget);
    else
        rep = solve_steinitz(inst, radius, budget);
    return report_solve(g, rep);
}

int run_solve_optimize(Global& g, const std::string& input, const Vec& x0,
                       std::optional<Int> lambda_max) {
    IlpInstance inst = load_instance(input);
    AugmentResult res = solve_graver_augment(inst, x0, g.l1_bound, lambda_max);
    if (g.json) {
        ordered_json j;
        j["command"] = "solve optimize";
        j["seed"] = g.seed;
        j["objective_value"] = res.objective_value;
        j["optimum"] = res.optimum.x;
        ordered_json steps = ordered_json::array();
        for (const AugmentStep& s : res.steps) {
            ordered_json st;
            st["direction"] = s.direction;
            st["step_length"] = s.step_length;
            st["gain"] = s.gain;
            steps.push_back(std::move(st));
        }
        j["steps"] = std::move(steps);
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        for (std::size_t i = 0; i < res.steps.size(); ++i) {
            out << "# trace: step " << i + 1 << " lambda=" << res.steps[i].step_length
                << " gain=" << res.steps[i].gain << " direction=(";
            print_vec(out, res.steps[i].direction);
            out << ")\n";
        }
        out << "optimum: ";
        print_vec(out, res.optimum.x);
        out << '\n';
        out << "objective = " << res.objective_value << '\n';
    }
    return kOk;
}

int run_solve_minsupport(Global& g, const std::string& input, Int c) {
    IlpInstance inst = load_instance(input);
    SupportReport rep;
    try {
        rep = minimal_support(inst, c, g.budget);
    } catch (const Error& e) {
        if (e.kind == Error::precondition && std::string(e.what()) == "instance is infeasible") {
            if (g.json) {
                ordered_json j;
                j["command"] = "solve minsupport";
                j["seed"] = g.seed;
                j["verdict"] = "infeasible";
                emit(g, j);
            } else {
                g.out() << "verdict: infeasible\n";
            }
            return kInfeasible;
        }
        throw;
    }
    if (g.json) {
        ordered_json j;
        j["command"] = "solve minsupport";
        j["seed"] = g.seed;
        j["verdict"] = "feasible";
        j["c"] = c;
        j["support_size"] = rep.support_size;
        j["h"] = rep.h;
        j["threshold"] = rep.threshold;
        j["delta"] = rep.delta;
        j["x"] = rep.solution.x;
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "support = " << rep.support_size << " threshold = " << rep.threshold
            << " h = " << rep.h << " delta = " << rep.delta << '\n';
        out << "x: ";
        print_vec(out, rep.solution.x);
        out << '\n';
    }
    return kOk;
}

int run_bench(Global& g, const std::string& suite, std::optional<int> trials, int max_vars) {
    SuiteResult res = run_suite(suite, g.seed, trials, max_vars);
    if (g.json) {
        ordered_json j;
        j["command"] = "bench";
        j["suite"] = res.suite;
        j["seed"] = res.seed;
        j["trials"] = res.trials;
        ordered_json checks = ordered_json::array();
        for (const BenchCheck& c : res.checks) {
            ordered_json cj;
            cj["name"] = c.name;
            cj["pass"] = c.pass;
            cj["detail"] = c.detail;
            checks.push_back(std::move(cj));
        }
        j["checks"] = std::move(checks);
        ordered_json meas = ordered_json::object();
        for (const auto& [name, value] : res.measurements) meas[name] = value;
        j["measurements"] = std::move(meas);
        j["pass"] = res.pass();
        emit(g, j);
    } else {
        std::ostream& out = g.out();
        out << "suite " << res.suite << " seed=" << res.seed << " trials=" << res.trials << '\n';
        for (const BenchCheck& c : res.checks)
            out << (c.pass ? "[ok] " : "[XX] ") << c.name << ": " << c.detail << '\n';
        for (const auto& [name, value] : res.measurements)
            out << name << " = " << value << '\n';
        out << (res.pass() ? "PASS" : "FAIL") << '\n';
    }
    return res.pass() ? kOk : kCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
    Global g;
    CLI::App app{
        "exact integer programming toolkit: detecting matrices, CNF reduction, "
        "number gadgets, dual treedepth, Graver bases, cross-checked solvers"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", g.json, "emit one JSON document on the report stream");
    app.add_option("--seed", g.seed, "random seed, recorded in every report");
    app.add_option("--budget-states", g.budget, "search state budget");
    app.add_option("--td-limit", g.td_limit, "treedepth search depth cap");
    Int l1 = 0;
    auto* l1_opt = app.add_option("--l1-bound", l1, "Graver enumeration l1 cap");
    app.add_option("--output", g.output, "report file, default stdout");

    auto* detect = app.add_subcommand("detect", "detecting matrix generation and verification");
    detect->require_subcommand(1);
    detect->fallthrough();
    auto* dgen = detect->add_subcommand("gen", "generate a d-detecting matrix");
    dgen->fallthrough();
    Int dg_d = 2;
    std::size_t dg_cols = 0;
    bool dg_random = false;
    dgen->add_option("--d", dg_d, "domain bound, entries detected in {0..d-1}")->required();
    dgen->add_option("--cols", dg_cols, "number of columns")->required();
    dgen->add_flag("--random", dg_random, "randomized construction instead of deterministic");
    auto* dver = detect->add_subcommand("verify", "verify the detecting property of a matrix");
    dver->fallthrough();
    Int dv_d = 2;
    std::string dv_input;
    dver->add_option("--d", dv_d, "domain bound to verify against")->required();
    dver->add_option("--input", dv_input, "matrix file, default stdin");

    auto* reduce = app.add_subcommand("reduce", "CNF to equality-system reduction chain");
    reduce->require_subcommand(1);
    reduce->fallthrough();
    auto* rsat = reduce->add_subcommand("sat", "reduce a DIMACS CNF");
    rsat->fallthrough();
    std::string rs_input, rs_stage = "pm1-targets";
    Int rs_d = 4;
    rsat->add_option("--input", rs_input, "DIMACS CNF file, default stdin");
    rsat->add_option("--stage", rs_stage, "pipeline stage to emit")
        ->check(CLI::IsMember({"34sat", "ilp", "compressed", "binary", "pm1-targets"}));
    rsat->add_option("--d", rs_d, "detecting matrix domain bound");

    auto* gadget = app.add_subcommand("gadget", "low-treedepth number encodings");
    gadget->require_subcommand(1);
    gadget->fallthrough();
    auto* gnum = gadget->add_subcommand("number", "single-number encoding");
    gnum->fallthrough();
    Int gn_delta = 0, gn_value = 0;
    bool gn_forced = false;
    gnum->add_option("--delta", gn_delta, "digit count")->required();
    gnum->add_option("--value", gn_value, "encoded value")->required();
    gnum->add_flag("--forced", gn_forced, "pin the value instead of offering 0 or s");
    auto* gss = gadget->add_subcommand("subsetsum", "subset-sum assembly");
    gss->fallthrough();
    std::vector<Int> gs_values;
    Int gs_target = 0;
    bool gs_pm1 = false;
    gss->add_option("--values", gs_values, "comma-separated element values")
        ->required()
        ->delimiter(',');
    gss->add_option("--target", gs_target, "subset-sum target")->required();
    gss->add_flag("--pm1", gs_pm1, "rewrite entries into {-1,0,1} by column duplication");

    auto* structure = app.add_subcommand("structure", "constraint graph structure");
    structure->require_subcommand(1);
    structure->fallthrough();
    auto* std_td = structure->add_subcommand("td", "exact dual treedepth");
    std_td->fallthrough();
    std::string st_input;
    int st_limit = 0;
    std_td->add_option("--input", st_input, "ILP file, default stdin");
    std_td->add_option("--limit", st_limit, "depth cap, default --td-limit");

    auto* graver = app.add_subcommand("graver", "Graver basis and norm bounds");
    graver->require_subcommand(1);
    graver->fallthrough();
    auto* gbasis = graver->add_subcommand("basis", "enumerate the Graver basis");
    gbasis->fallthrough();
    std::string gb_input;
    gbasis->add_option("--input", gb_input, "ILP file, default stdin");
    auto* gcert = graver->add_subcommand("certify", "check the treedepth norm bound");
    gcert->fallthrough();
    std::string gc_input;
    gcert->add_option("--input", gc_input, "ILP file, default stdin");

    auto* solve = app.add_subcommand("solve", "decide feasibility");
    solve->fallthrough();
    std::string sv_input, sv_method = "dp";
    solve->add_option("--input", sv_input, "ILP file, default stdin");
    solve->add_option("--method", sv_method, "search strategy")
        ->check(CLI::IsMember({"box", "dp", "steinitz"}));
    Int sv_radius = 0;
    auto* sv_radius_opt = solve->add_option("--radius", sv_radius, "steinitz tube radius");
    std::uint64_t sv_boxbudget = 0;
    auto* sv_bb_opt =
        solve->add_option("--box-budget", sv_boxbudget, "state budget, overrides --budget-states");
    auto* sopt = solve->add_subcommand("optimize", "maximize the objective by augmentation");
    sopt->fallthrough();
    std::string so_input;
    std::vector<Int> so_x0;
    Int so_lambda = 0;
    sopt->add_option("--input", so_input, "ILP file with w:, default stdin");
    sopt->add_option("--x0", so_x0, "comma-separated feasible start")->required()->delimiter(',');
    auto* so_lambda_opt = sopt->add_option("--lambda-max", so_lambda, "step length cap");
    auto* smin = solve->add_subcommand("minsupport", "minimal-support solution");
    smin->fallthrough();
    std::string sm_input;
    Int sm_c = 2;
    smin->add_option("--input", sm_input, "ILP file, default stdin");
    smin->add_option("--c", sm_c, "constant in the subset size h = c*ceil(lg(delta+1))*rows");

    auto* bench = app.add_subcommand("bench", "seeded verification suites");
    bench->fallthrough();
    std::string be_suite;
    bench->add_option("suite", be_suite,
                      "pipeline | graver-bounds | gadgets | solver-agreement | support")
        ->required();
    int be_trials = 0;
    auto* be_trials_opt = bench->add_option("--trials", be_trials, "trial count override");
    int be_n = 6;
    bench->add_option("--n", be_n, "variable cap for the pipeline suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    if (l1_opt->count()) g.l1_bound = l1;

    try {
        if (*dgen) return run_detect_gen(g, dg_d, dg_cols, dg_random);
        if (*dver) return run_detect_verify(g, dv_d, dv_input);
        if (*rsat) return run_reduce(g, rs_input, rs_stage, rs_d);
        if (*gnum) {
            ordered_json params;
            params["delta"] = gn_delta;
            params["value"] = gn_value;
            params["variant"] = gn_forced ? "forced" : "free";
            return run_gadget(g, encode_number(gn_delta, gn_value, gn_forced), std::move(params),
                              "gadget number", false);
        }
        if (*gss) {
            ordered_json params;
            params["values"] = gs_values;
            params["target"] = gs_target;
            params["pm1"] = gs_pm1;
            return run_gadget(g, subset_sum_to_ilp(gs_values, gs_target), std::move(params),
                              "gadget subsetsum", gs_pm1);
        }
        if (*std_td) return run_structure_td(g, st_input, st_limit > 0 ? st_limit : g.td_limit);
        if (*gbasis) return run_graver_basis(g, gb_input);
        if (*gcert) return run_graver_certify(g, gc_input);
        if (*sopt)
            return run_solve_optimize(
                g, so_input, so_x0,
                so_lambda_opt->count() ? std::optional<Int>(so_lambda) : std::nullopt);
        if (*smin) return run_solve_minsupport(g, sm_input, sm_c);
        if (*solve)
            return run_solve(g, sv_input, sv_method,
                             sv_radius_opt->count() ? std::optional<Int>(sv_radius) : std::nullopt,
                             sv_bb_opt->count() ? sv_boxbudget : g.budget);
        if (*bench)
            return run_bench(g, be_suite,
                             be_trials_opt->count() ? std::optional<int>(be_trials) : std::nullopt,
                             be_n);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind) {
            case Error::parse:
            case Error::dimension:
            case Error::precondition:
                return kUsage;
            case Error::budget:
            case Error::overflow:
                return kBudget;
            case Error::internal:
                return 70;
        }
        return 70;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 70;
    }
    return kUsage;
}
