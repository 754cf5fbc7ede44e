// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <thread>

#include "zsram/egz.hpp"
#include "zsram/embed.hpp"
#include "zsram/verify.hpp"

#include "oracles.hpp"

using namespace zsram;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& detail, double secs) {
    std::printf("CRITERION %d: %s — %s (%.1fs)\n", idx, ok ? "PASS" : "FAIL", detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!ok) failures++;
}

Forest P(int n) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
    return Forest::from_edges(n, es);
}

Forest star(int d) {
    std::vector<std::pair<int, int>> es;
    for (int i = 1; i <= d; ++i) es.emplace_back(0, i);
    return Forest::from_edges(d + 1, es);
}

Forest matching(int m) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < m; ++i) es.emplace_back(2 * i, 2 * i + 1);
    return Forest::from_edges(2 * m, es);
}

int hw_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 2 : static_cast<int>(n);
}

// ---------------------------------------------------------------------------

void criterion1_small_forests() {
    auto t0 = Clock::now();
    SearchBudget budget;
    budget.max_states = 200'000'000;
    budget.max_seconds = 600;
    int jobs = hw_jobs();
    bool ok = true;
    std::string detail;

    auto check_value = [&](const Forest& f, int expected, const char* name) {
        auto formula = ramsey_formula(f);
        auto brute = brute_force_ramsey(f, expected + 1, budget, jobs);
        bool good = brute.value && *brute.value == expected && formula.value == expected;
        if (!good) ok = false;
        detail += std::string(name) + "=" +
                  (brute.value ? std::to_string(*brute.value) : std::string("?")) + " ";
    };
    check_value(P(4), 5, "R(P4)");
    check_value(star(3), 6, "R(S3)");
    check_value(Forest::from_edges(5, {{0, 1}, {2, 3}, {3, 4}}), 6, "R(S1+P3)");
    report(1, ok, "small-forest exact values: " + detail, std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion2_three_matchings() {
    auto t0 = Clock::now();
    auto f = matching(3);
    bool ok = true;
    std::string detail;

    auto w = witness_lower_bound(f);
    bool lower_ok = w.certified && w.shows_r_greater_than == 7;
    if (!lower_ok) ok = false;
    detail += std::string("lower(K7)=") + (lower_ok ? "certified" : "FAILED") + " ";

    SearchBudget budget;
    budget.max_states = 400'000'000;
    budget.max_seconds = 240;
    auto upper = exhaustive_upper_bound(f, 8, budget, hw_jobs());
    if (upper.kind == UpperBoundOutcome::Kind::Proved) {
        detail += "upper(K8)=Proved states=" + std::to_string(upper.states);
    } else if (upper.kind == UpperBoundOutcome::Kind::BudgetExceeded) {
        auto fails = sample_upper_bound(f, 8, 1'000'000, 2026, hw_jobs());
        detail += "upper(K8)=BudgetExceeded+Sampled failures=" + std::to_string(fails) + "/1e6";
        if (fails != 0) ok = false;
    } else {
        detail += "upper(K8)=CounterexampleFound";
        ok = false;
    }
    report(2, ok, "R(3K2)=8: " + detail, std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion3_six_edge_sweep() {
    auto t0 = Clock::now();
    auto forests = oracles::all_forests_with_edges(6);
    bool ok = forests.size() == 34;
    std::string detail = "classes=" + std::to_string(forests.size());
    int certified = 0, sampled_clean = 0;
    int jobs = hw_jobs();
    for (auto& f : forests) {
        auto formula = ramsey_formula(f);
        if (formula.cls != ForestClass::Type0) {
            auto w = witness_lower_bound(f);
            if (w.certified && w.shows_r_greater_than == formula.value - 1) certified++;
            else ok = false;
        } else {
            certified++; // no witness needed above K_{n-1}
        }
        auto fails = sample_upper_bound(f, formula.value, 10'000, 97, jobs);
        if (fails == 0) sampled_clean++;
        else ok = false;
    }
    detail += " lower_certified=" + std::to_string(certified) + "/34 sampled_clean=" +
              std::to_string(sampled_clean) + "/34";
    report(3, ok, "formula conformance sweep e(F)=6: " + detail,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion4_lemma_suite() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string detail;

    // zero-sum iff congruent class sizes: P4 against all colorings of K4
    {
        auto p4 = P(4);
        std::vector<Embedding> embeddings;
        std::vector<int> perm{0, 1, 2, 3};
        do embeddings.push_back(Embedding{perm});
        while (std::next_permutation(perm.begin(), perm.end()));
        int bad = 0;
        Coloring chi(4);
        std::function<void(int)> rec = [&](int e) {
            if (e == num_edges(4)) {
                for (auto& phi : embeddings) {
                    std::array<int, 3> cls{0, 0, 0};
                    for (auto& [u, v] : p4.edges) cls[chi.at(phi.map[u], phi.map[v])]++;
                    bool congruent =
                        cls[0] % 3 == cls[1] % 3 && cls[1] % 3 == cls[2] % 3;
                    if ((copy_sum(chi, p4, phi) == 0) != congruent) bad++;
                }
                return;
            }
            for (int c = 0; c < 3; ++c) {
                chi.colors[e] = static_cast<Color>(c);
                rec(e + 1);
            }
        };
        rec(0);
        SeqRng rng(303);
        for (int iter = 0; iter < 2000; ++iter) {
            auto f = oracles::random_forest(9, rng);
            auto col = oracles::random_coloring(f.n, rng);
            std::vector<int> map(f.n);
            std::iota(map.begin(), map.end(), 0);
            Embedding phi{map};
            std::array<int, 3> cls{0, 0, 0};
            for (auto& [u, v] : f.edges) cls[col.at(phi.map[u], phi.map[v])]++;
            bool congruent = cls[0] % 3 == cls[1] % 3 && cls[1] % 3 == cls[2] % 3;
            if ((copy_sum(col, f, phi) == 0) != congruent) bad++;
        }
        if (bad) ok = false;
        detail += "zerosum-iff-classes=" + std::to_string(bad) + " ";
    }
    // four-sum cover over all combinations
    {
        int bad = 0;
        for (int base = 0; base < 3; ++base)
            for (int a1 = 0; a1 < 3; ++a1)
                for (int a2 = 0; a2 < 3; ++a2)
                    for (int b1 = 0; b1 < 3; ++b1)
                        for (int b2 = 0; b2 < 3; ++b2) {
                            if (a1 == a2 || b1 == b2) continue;
                            try {
                                auto [i, j] = four_sum_cover_select(
                                    static_cast<Color>(base),
                                    {static_cast<Color>(a1), static_cast<Color>(a2)},
                                    {static_cast<Color>(b1), static_cast<Color>(b2)});
                                int da = i == 0 ? a1 : a2, db = j == 0 ? b1 : b2;
                                if ((base + da + db) % 3 != 0) bad++;
                            } catch (const Error&) {
                                bad++;
                            }
                        }
        if (bad) ok = false;
        detail += "cover4=" + std::to_string(bad) + " ";
    }
    // all 3^10 colorings of K5: no alternating C4 forces CC, and an
    // unbalanced-corner-free coloring is monochromatic
    {
        int bad_cc = 0, bad_corner = 0;
        Coloring chi(5);
        std::function<void(int)> rec = [&](int e) {
            if (e == num_edges(5)) {
                if (!find_alternating_c4(chi).has_value()) {
                    auto p = detect_cc(chi);
                    if (!p || !cc_partition_valid(chi, *p)) bad_cc++;
                }
                if (!find_unbalanced_corner_c4(chi).has_value() && !chi.is_monochromatic())
                    bad_corner++;
                return;
            }
            for (int c = 0; c < 3; ++c) {
                chi.colors[e] = static_cast<Color>(c);
                rec(e + 1);
            }
        };
        rec(0);
        if (bad_cc || bad_corner) ok = false;
        detail += "cc=" + std::to_string(bad_cc) + " corner=" + std::to_string(bad_corner) + " ";
    }
    // EGZ tightness and the cover claim
    {
        int bad = 0;
        std::vector<int> terms;
        std::function<void(int, int)> seqs = [&](int len, int pos) {
            if (pos == len) {
                if (len == 5) {
                    if (!egz_find(ResidueSequence(3, terms), 3).has_value()) bad++;
                } else if (len == 4) {
                    bool found = egz_find(ResidueSequence(3, terms), 3).has_value();
                    bool extremal = egz_extremal_check(ResidueSequence(3, terms), 3);
                    if (found == extremal) bad++;
                } else {
                    int sum = std::accumulate(terms.begin(), terms.end(), 0);
                    if (sum % 3 == 0) {
                        auto c = cover_triples(ResidueSequence(3, terms));
                        if (auto* t = std::get_if<CoverTriples>(&c)) {
                            for (int target = 0; target < 3; ++target) {
                                auto& tri = t->for_target[target];
                                if ((terms[tri[0]] + terms[tri[1]] + terms[tri[2]]) % 3 != target)
                                    bad++;
                            }
                        } else {
                            for (int x : terms)
                                if (x != terms[0]) bad++;
                        }
                    }
                }
                return;
            }
            for (int c = 0; c < 3; ++c) {
                terms[pos] = c;
                seqs(len, pos + 1);
            }
        };
        for (int len : {5, 4, 6}) {
            terms.assign(len, 0);
            seqs(len, 0);
        }
        if (bad) ok = false;
        detail += "egz=" + std::to_string(bad);
    }
    report(4, ok, "lemma suite violations: " + detail,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion5_differential() {
    auto t0 = Clock::now();
    const int total = 100'000;
    std::atomic<int> disagreements{0};
    std::atomic<int> next{0};
    int jobs = hw_jobs();
    auto work = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= total) return;
            SeqRng rng(0x5eed0000 + i);
            auto f = oracles::random_forest(8, rng);
            int host = f.n + static_cast<int>(rng.next_below(3));
            if (host > 9) host = 9;
            auto chi = oracles::random_coloring(host, rng);
            bool structural = find_zero_sum_copy(f, chi).has_value();
            bool exact = backtrack_embed(f, chi).has_value();
            if (structural != exact) disagreements.fetch_add(1);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    bool ok = disagreements.load() == 0;
    report(5, ok,
           "differential completeness over 1e5 instances: disagreements=" +
               std::to_string(disagreements.load()),
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion6_swap_soundness() {
    auto t0 = Clock::now();
    SeqRng rng(606);
    int applications = 0, bad_delta = 0, bad_iso = 0;
    while (applications < 10'000) {
        auto f = oracles::random_forest(9, rng, false);
        auto chi = oracles::random_coloring(f.n + static_cast<int>(rng.next_below(2)), rng);
        std::vector<int> map(f.n);
        std::iota(map.begin(), map.end(), 0);
        // random injection
        for (int i = f.n - 1; i > 0; --i) std::swap(map[i], map[rng.next_below(i + 1)]);
        Embedding base{map};
        auto canon = canonical_form(f);
        for (auto& s : find_switching_structures(f)) {
            auto rec = make_swap_record(f, chi, base, s);
            try {
                auto after = swap_copies(base, rec, chi, f);
                if (sub3(copy_sum(chi, f, after), copy_sum(chi, f, base)) != rec.delta) bad_delta++;
            } catch (const Error&) {
                bad_delta++;
            }
            if (canonical_form(apply_switching_rewrite(f, s)) != canon) bad_iso++;
            applications++;
        }
        for (auto& g : find_generalized_switchings(f)) {
            auto rec = make_swap_record(f, chi, base, g);
            try {
                auto after = swap_copies(base, rec, chi, f);
                if (sub3(copy_sum(chi, f, after), copy_sum(chi, f, base)) != rec.delta) bad_delta++;
            } catch (const Error&) {
                bad_delta++;
            }
            if (canonical_form(apply_generalized_rewrite(f, g)) != canon) bad_iso++;
            applications++;
        }
    }
    bool ok = bad_delta == 0 && bad_iso == 0;
    report(6, ok,
           "swap soundness over " + std::to_string(applications) +
               " applications: delta_mismatch=" + std::to_string(bad_delta) +
               " iso_break=" + std::to_string(bad_iso),
           std::chrono::duration<double>(Clock::now() - t0).count());
}

} // namespace

int main() {
    criterion1_small_forests();
    criterion2_three_matchings();
    criterion3_six_edge_sweep();
    criterion4_lemma_suite();
    criterion5_differential();
    criterion6_swap_soundness();
    if (failures == 0) {
        std::printf("ACCEPTANCE: all criteria passed\n");
        return 0;
    }
    std::printf("ACCEPTANCE: %d criteria FAILED\n", failures);
    return 1;
}
