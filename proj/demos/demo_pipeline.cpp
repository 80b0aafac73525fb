// Walks one CNF through the whole reduction chain and prints what each move
// does to the system: the bounded-occurrence relaxation, the 0/1 clause
// encoding, the detecting-matrix compression, and the two shape-normalizing
// rewrites. The encoding stage is solved outright; its witness is then
// lifted stage by stage, so the final {-1,0,1} system is handed a solution
// that was never searched for at that level.

#include <iostream>

#include "ilpkit/reduction.hpp"
#include "ilpkit/solvers.hpp"

using namespace ilpkit;

namespace {

void print_stage(const StageInfo& s) {
    std::cout << "  " << s.name;
    for (std::size_t pad = s.name.size(); pad < 12; ++pad) std::cout << ' ';
    std::cout << s.rows << " x " << s.cols;
    if (s.name != "34sat")
        std::cout << "  entries [" << s.entry_min << ", " << s.entry_max << "]  b ["
                  << s.b_min << ", " << s.b_max << "]";
    std::cout << '\n';
}

}  // namespace

int main() {
    // (x1 or not x2 or x3) and (not x1 or x2 or x4) and (not x3 or not x4)
    CnfFormula f;
    f.num_vars = 4;
    f.clauses = {{1, -2, 3}, {-1, 2, 4}, {-3, -4}};

    std::cout << "input: " << f.num_vars << " variables, " << f.clauses.size()
              << " clauses, satisfiable = " << (brute_force_sat(f) ? "yes" : "no") << "\n\n";

    PipelineResult pipe = run_pipeline(f, true);
    std::cout << "stages:\n";
    for (const StageInfo& s : pipe.stages) print_stage(s);

    // the clause encoding is small enough to solve directly; every later
    // stage then inherits this witness instead of a fresh search
    SolveReport enc = solve_box(pipe.ilp.instance, Vec(pipe.ilp.instance.cols(), 3));
    if (enc.verdict != SolveReport::feasible) {
        std::cout << "\nencoding stage infeasible, formula unsatisfiable\n";
        return 0;
    }
    std::cout << "\nencoding witness found after " << enc.explored_states << " states\n";

    Vec x = enc.witness->x;
    std::cout << "assignment:";
    for (int v = 0; v < pipe.relaxed.num_vars; ++v)
        std::cout << ' ' << (x[2 * static_cast<std::size_t>(v)] ? 'T' : 'F');
    std::cout << " (relaxed variables, positive-literal columns)\n";

    // compression keeps the variables, so the witness passes through as is;
    // the coefficient and target rewrites extend it over their fresh columns
    if (!pipe.compressed.instance.satisfies(x))
        throw Error(Error::internal, "compressed stage rejected the witness");
    Vec y = lift_coefficient_witness(pipe.compressed.instance, pipe.binary, x);
    Vec z = lift_target_witness(pipe.binary.instance, *pipe.targets, y);
    std::cout << "witness lifts: compressed " << x.size() << " -> binary " << y.size()
              << " -> targets " << z.size() << " columns\n";

    if (project_witness(*pipe.targets, z) != y)
        throw Error(Error::internal, "projection does not invert the lift");
    std::cout << "projecting back recovers the binary-stage witness\n";
    return 0;
}
