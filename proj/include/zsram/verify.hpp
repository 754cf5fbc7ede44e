#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zsram/coloring.hpp"
#include "zsram/embed.hpp"
#include "zsram/forest.hpp"

namespace zsram {

struct RamseyResult {
    int value = 0;
    ForestClass cls = ForestClass::Type0;
    std::string formula_case;
};

RamseyResult ramsey_formula(const Forest& f);

// true iff a zero-sum copy of f exists in chi (structural first, exact fallback)
bool arrow_check(const Forest& f, const Coloring& chi);

struct SearchBudget {
    std::uint64_t max_states = 50'000'000;
    double max_seconds = 300.0;
    enum class Mode { Exhaustive, SymmetryReduced, Sampled } mode = Mode::SymmetryReduced;
    std::uint64_t samples = 100'000;
};

struct LowerBoundWitness {
    Coloring coloring;
    bool certified = false;       // exact: no zero-sum copy, by complete enumeration
    int shows_r_greater_than = 0; // host size
};

// Requires type 1 or type 2.
LowerBoundWitness witness_lower_bound(const Forest& f);

struct UpperBoundOutcome {
    enum class Kind { Proved, CounterexampleFound, BudgetExceeded } kind;
    std::optional<Coloring> counterexample;
    std::uint64_t states = 0;
    double elapsed_seconds = 0.0;
};

UpperBoundOutcome exhaustive_upper_bound(const Forest& f, int N, const SearchBudget& budget,
                                         int jobs = 1);

// number of sampled colorings of K_N without a zero-sum copy
std::uint64_t sample_upper_bound(const Forest& f, int N, std::uint64_t samples,
                                 std::uint64_t seed, int jobs = 1);

struct BruteForceResult {
    std::optional<int> value;
    std::vector<std::pair<int, Coloring>> counterexamples; // per host size below value
    bool budget_exceeded = false;
    std::uint64_t states = 0;
};

BruteForceResult brute_force_ramsey(const Forest& f, int n_max, const SearchBudget& budget,
                                    int jobs = 1);

struct VerificationReport {
    std::string forest_canonical;
    int formula_value = 0;
    std::string formula_case;
    std::optional<int> oracle_value;
    bool lower_witness_ok = false;
    bool lower_witness_applicable = false;
    std::optional<bool> upper_bound_ok;
    std::string upper_verdict; // Proved | Sampled | BudgetExceeded+Sampled | LowerBoundsOnly
    std::uint64_t states_explored = 0;
    double elapsed_seconds = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t sample_failures = 0;
    std::vector<std::pair<int, Coloring>> counterexamples; // hosts below the value
};

struct VerifyOptions {
    bool exhaustive = false;
    std::uint64_t samples = 10'000;
    int n_max = -1; // default: formula value
    std::uint64_t seed = 1;
    int jobs = 1;
    SearchBudget budget;
};

VerificationReport verify_forest(const Forest& f, const VerifyOptions& opts);

// distinct copies of f in K_N as sorted edge-index sets
std::vector<std::vector<int>> enumerate_copy_edge_sets(const Forest& f, int host_n);

} // namespace zsram
