// Non-adaptive coin weighing. Every coin weighs 0..d-1 grams; one batch of
// weighings, fixed in advance, must pin down all the weights at once. Each
// row of a d-detecting matrix names the coins that go on the scale for one
// round, and detection says the round totals identify the weights uniquely.
// The demo hides a random weight vector, runs the rounds, and recovers the
// hidden vector as the only bounded solution of the measurement system.

#include <cstdlib>
#include <iostream>

#include "ilpkit/detecting.hpp"
#include "ilpkit/solvers.hpp"

using namespace ilpkit;

int main(int argc, char** argv) {
    std::size_t coins = argc > 1 ? static_cast<std::size_t>(std::atoi(argv[1])) : 18;
    Int d = argc > 2 ? std::atoi(argv[2]) : 2;
    std::uint64_t seed = argc > 3 ? static_cast<std::uint64_t>(std::atoll(argv[3])) : 42;

    DetectingMatrix dm = gen_detecting_deterministic(d, coins);
    std::cout << coins << " coins, weights 0.." << d - 1 << ", " << dm.matrix.rows()
              << " weighings\n\n";

    SplitMix64 rng(seed);
    Vec hidden(coins);
    for (Int& w : hidden) w = static_cast<Int>(rng.below(static_cast<std::uint64_t>(d)));

    Vec totals = mat_vec(dm.matrix, hidden);
    for (std::size_t i = 0; i < dm.matrix.rows(); ++i) {
        std::cout << "round " << i + 1 << ": coins {";
        bool sep = false;
        for (std::size_t j = 0; j < coins; ++j) {
            if (!dm.matrix.at(i, j)) continue;
            std::cout << (sep ? "," : "") << j;
            sep = true;
        }
        std::cout << "} weigh " << totals[i] << '\n';
    }

    // recovery: the totals plus the 0..d-1 caps admit exactly one solution.
    // Every column of a detecting matrix is non-zero (a skipped coin could
    // never be told from itself plus one), so the enumeration misses nothing.
    IlpInstance inst(dm.matrix, totals);
    for (auto& u : inst.upper) u = d - 1;
    std::vector<Solution> sols = enumerate_solutions(inst, Vec(coins, d - 1));
    if (sols.size() != 1) {
        std::cout << "\nrecovery failed: " << sols.size() << " candidates\n";
        return 1;
    }

    std::cout << "\nhidden:    ";
    for (Int w : hidden) std::cout << w << ' ';
    std::cout << "\nrecovered: ";
    for (Int w : sols[0].x) std::cout << w << ' ';
    std::cout << '\n';
    return sols[0].x == hidden ? 0 : 1;
}
