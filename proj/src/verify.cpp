#include "zsram/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

#include "zsram/rng.hpp"

namespace zsram {

RamseyResult ramsey_formula(const Forest& f) {
    if (f.edge_count() % 3 != 0)
        throw Error(Errc::EdgeCountNotDivisible, "e(F) = " + std::to_string(f.edge_count()));
    std::vector<int> keep;
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) > 0) keep.push_back(v);
    if (keep.empty()) {
        // edgeless forest: every coloring of K_n hosts it
        return {std::max(f.n, 1), ForestClass::Type0, "edgeless"};
    }
    std::vector<int> remap(f.n, -1);
    for (size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> es;
    for (auto& [u, v] : f.edges) es.emplace_back(remap[u], remap[v]);
    Forest core = Forest::from_edges(static_cast<int>(keep.size()), std::move(es));
    auto cls = classify_forest(core);
    RamseyResult res;
    res.cls = cls;
    int base = core.n + type_index(cls);
    switch (cls) {
        case ForestClass::Type2: res.formula_case = "1 mod 3 regular or a star"; break;
        case ForestClass::Type1: {
            auto p = degree_profile(core);
            res.formula_case = p.counts_mod3[0] == 0
                                   ? "no vertex of degree 0 mod 3"
                                   : "one vertex of degree 0 mod 3, rest 1 mod 3";
            break;
        }
        case ForestClass::Type0: res.formula_case = "at least two obstructing degrees"; break;
    }
    // isolated vertices: R(G + v) = max(R(G), |V(G)|+1), iterated
    res.value = std::max(base, f.n);
    if (f.n > core.n && res.value == f.n && base < f.n) res.formula_case += " (isolated-vertex rule)";
    return res;
}

bool arrow_check(const Forest& f, const Coloring& chi) {
    if (f.edge_count() % 3 != 0)
        throw Error(Errc::EdgeCountNotDivisible, "e(F) = " + std::to_string(f.edge_count()));
    if (chi.n < f.n) return false;
    return find_zero_sum_copy(f, chi).has_value();
}

LowerBoundWitness witness_lower_bound(const Forest& f) {
    auto ex = extremal_coloring(f);
    if (!ex) throw Error(Errc::NoWitnessNeeded, "type 0 forest");
    LowerBoundWitness w;
    w.coloring = ex->coloring;
    w.shows_r_greater_than = ex->shows_r_greater_than;
    w.certified = !backtrack_embed(f, ex->coloring).has_value();
    return w;
}

// ---------------------------------------------------------------------------
// copy enumeration

std::vector<std::vector<int>> enumerate_copy_edge_sets(const Forest& f, int host_n) {
    std::set<std::vector<int>> sets;
    if (host_n < f.n) return {};
    std::vector<int> map(f.n, -1);
    std::vector<bool> used(host_n, false);
    // simple ordered placement; dedupe handles automorphic repeats
    std::vector<int> order;
    {
        std::vector<bool> seen(f.n, false);
        for (auto& comp : f.components()) {
            int root = comp[0];
            for (int v : comp)
                if (f.degree(v) > f.degree(root)) root = v;
            std::vector<int> q{root};
            seen[root] = true;
            size_t h = 0;
            while (h < q.size()) {
                int x = q[h++];
                order.push_back(x);
                for (int y : f.adj[x])
                    if (!seen[y]) {
                        seen[y] = true;
                        q.push_back(y);
                    }
            }
        }
    }
    std::function<void(size_t)> rec = [&](size_t p) {
        if (p == order.size()) {
            std::vector<int> idx;
            idx.reserve(f.edges.size());
            for (auto& [u, v] : f.edges) idx.push_back(edge_index(map[u], map[v]));
            std::sort(idx.begin(), idx.end());
            sets.insert(std::move(idx));
            return;
        }
        int v = order[p];
        for (int h = 0; h < host_n; ++h) {
            if (used[h]) continue;
            map[v] = h;
            used[h] = true;
            rec(p + 1);
            used[h] = false;
            map[v] = -1;
        }
    };
    // exponential in general; intended for desk-scale hosts only
    rec(0);
    return {sets.begin(), sets.end()};
}

// ---------------------------------------------------------------------------
// exhaustive search over colorings with isomorph pruning

namespace {

struct BlockSymmetry {
    int depth;                               // prefix length = edges of K_B
    std::vector<std::vector<int>> edge_maps; // per permutation of the block
};

std::vector<BlockSymmetry> build_block_symmetries(int N, int M) {
    std::vector<BlockSymmetry> blocks;
    for (int B : {4, 5, 6}) {
        int E = num_edges(B);
        if (N < B || M < E) continue;
        BlockSymmetry bs;
        bs.depth = E;
        std::vector<int> perm(B);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<int> emap(E);
            for (int u = 0; u < B; ++u)
                for (int v = u + 1; v < B; ++v)
                    emap[edge_index(u, v)] = edge_index(perm[u], perm[v]);
            bs.edge_maps.push_back(std::move(emap));
        } while (std::next_permutation(perm.begin(), perm.end()));
        blocks.push_back(std::move(bs));
    }
    return blocks;
}

// affine color maps x -> a*x + b with a in {1,2}
constexpr int kAffineCount = 6;
inline Color affine_apply(int which, Color c) {
    int a = which < 3 ? 1 : 2;
    int b = which % 3;
    return static_cast<Color>((a * c + b) % 3);
}

bool prefix_is_minimal(const std::vector<Color>& colors, const BlockSymmetry& bs) {
    int E = bs.depth;
    std::vector<Color> mapped(E);
    for (auto& emap : bs.edge_maps) {
        for (int w = 0; w < kAffineCount; ++w) {
            for (int e = 0; e < E; ++e) mapped[emap[e]] = affine_apply(w, colors[e]);
            if (std::lexicographical_compare(mapped.begin(), mapped.end(), colors.begin(),
                                             colors.begin() + E))
                return false;
        }
    }
    return true;
}

struct CopyTable {
    std::vector<std::vector<std::vector<int>>> by_last_edge; // [depth] -> copies
};

CopyTable build_copy_table(const Forest& f, int N) {
    CopyTable t;
    t.by_last_edge.assign(num_edges(N), {});
    for (auto& copy : enumerate_copy_edge_sets(f, N)) t.by_last_edge[copy.back()].push_back(copy);
    return t;
}

struct SearchShared {
    const CopyTable* copies;
    const std::vector<BlockSymmetry>* blocks;
    int M;
    bool symmetry;
    std::uint64_t max_states;
    double max_seconds;
    std::chrono::steady_clock::time_point t0;
    std::atomic<std::uint64_t> states{0};
    std::atomic<bool> budget_stop{false};
    std::atomic<int> first_cex_task{INT32_MAX};
};

struct SearchWorker {
    SearchShared& sh;
    int task_index;
    std::vector<Color> colors;
    std::uint64_t local_states = 0; // pending flush into the shared counter
    std::uint64_t total_states = 0;
    bool out_of_budget = false;
    std::optional<std::vector<Color>> cex;

    SearchWorker(SearchShared& s, int task) : sh(s), task_index(task), colors(s.M, 0) {}

    bool budget_ok() {
        if (sh.states.load(std::memory_order_relaxed) + local_states > sh.max_states)
            return false;
        if ((total_states & 0xfff) == 0) {
            sh.states.fetch_add(local_states, std::memory_order_relaxed);
            local_states = 0;
            auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - sh.t0);
            if (dt.count() > sh.max_seconds) return false;
        }
        return true;
    }

    // returns false when a counterexample or budget stop occurred
    bool dfs(int depth) {
        // a lower-index counterexample supersedes this branch
        if (sh.first_cex_task.load(std::memory_order_relaxed) < task_index) return true;
        if (sh.budget_stop.load(std::memory_order_relaxed)) return true;
        local_states++;
        total_states++;
        if (!budget_ok()) {
            out_of_budget = true;
            return false;
        }
        if (depth == sh.M) {
            cex = colors;
            return false;
        }
        for (int c = 0; c < 3; ++c) {
            if (sh.symmetry && depth == 0 && c != 0) break;
            colors[depth] = static_cast<Color>(c);
            bool contains = false;
            for (auto& copy : sh.copies->by_last_edge[depth]) {
                int s = 0;
                for (int e : copy) s += colors[e];
                if (s % 3 == 0) {
                    contains = true;
                    break;
                }
            }
            if (contains) continue;
            if (sh.symmetry) {
                bool pruned = false;
                for (auto& bs : *sh.blocks)
                    if (depth + 1 == bs.depth && !prefix_is_minimal(colors, bs)) {
                        pruned = true;
                        break;
                    }
                if (pruned) continue;
            }
            if (!dfs(depth + 1)) return false;
        }
        return true;
    }
};

} // namespace

UpperBoundOutcome exhaustive_upper_bound(const Forest& f, int N, const SearchBudget& budget,
                                         int jobs) {
    if (N < f.n) throw Error(Errc::HostTooSmall, "N < n(F)");
    if (f.edge_count() % 3 != 0)
        throw Error(Errc::EdgeCountNotDivisible, "e(F) = " + std::to_string(f.edge_count()));
    auto t0 = std::chrono::steady_clock::now();
    CopyTable copies = build_copy_table(f, N);
    auto blocks = build_block_symmetries(N, num_edges(N));

    SearchShared sh;
    sh.copies = &copies;
    sh.blocks = &blocks;
    sh.M = num_edges(N);
    sh.symmetry = budget.mode != SearchBudget::Mode::Exhaustive;
    sh.max_states = budget.max_states;
    sh.max_seconds = budget.max_seconds;
    sh.t0 = t0;

    // split the search at a shallow depth into independent tasks
    int split_depth = std::min(sh.M, 6);
    std::vector<std::vector<Color>> tasks;
    {
        std::vector<Color> prefix(split_depth, 0);
        std::function<void(int)> gen = [&](int d) {
            if (d == split_depth) {
                tasks.push_back(prefix);
                return;
            }
            for (int c = 0; c < 3; ++c) {
                if (sh.symmetry && d == 0 && c != 0) break;
                prefix[d] = static_cast<Color>(c);
                bool contains = false;
                for (auto& copy : copies.by_last_edge[d]) {
                    int s = 0;
                    bool in_range = true;
                    for (int e : copy)
                        if (e > d) in_range = false;
                    if (!in_range) continue;
                    for (int e : copy) s += prefix[e];
                    if (s % 3 == 0) contains = true;
                }
                if (contains) continue;
                bool pruned = false;
                if (sh.symmetry)
                    for (auto& bs : blocks)
                        if (d + 1 == bs.depth &&
                            !prefix_is_minimal(std::vector<Color>(prefix.begin(), prefix.end()), bs))
                            pruned = true;
                if (pruned) continue;
                gen(d + 1);
            }
        };
        gen(0);
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> any_budget{false};
    std::vector<std::optional<std::vector<Color>>> results(tasks.size());
    std::vector<std::uint64_t> task_states(tasks.size(), 0);
    int workers = std::max(1, jobs);
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            if (static_cast<int>(i) > sh.first_cex_task.load()) continue;
            SearchWorker w(sh, static_cast<int>(i));
            std::copy(tasks[i].begin(), tasks[i].end(), w.colors.begin());
            bool complete = w.dfs(split_depth);
            sh.states.fetch_add(w.local_states);
            task_states[i] = w.total_states;
            if (!complete) {
                if (w.cex) {
                    results[i] = w.cex;
                    int expected = sh.first_cex_task.load();
                    while (static_cast<int>(i) < expected &&
                           !sh.first_cex_task.compare_exchange_weak(expected, static_cast<int>(i)))
                        ;
                } else if (w.out_of_budget) {
                    any_budget.store(true);
                    sh.budget_stop.store(true);
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    UpperBoundOutcome out;
    out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int cex_task = sh.first_cex_task.load();
    if (cex_task != INT32_MAX) {
        // deterministic merge: tasks below the winner always complete, the
        // winner's own run never sees a lower index, counts above it race
        out.states = 0;
        for (int i = 0; i <= cex_task; ++i) out.states += task_states[i];
        out.kind = UpperBoundOutcome::Kind::CounterexampleFound;
        Coloring chi(N);
        chi.colors = *results[cex_task];
        out.counterexample = chi;
        return out;
    }
    out.states = sh.states.load();
    if (any_budget.load()) {
        out.kind = UpperBoundOutcome::Kind::BudgetExceeded;
        return out;
    }
    out.kind = UpperBoundOutcome::Kind::Proved;
    return out;
}

std::uint64_t sample_upper_bound(const Forest& f, int N, std::uint64_t samples,
                                 std::uint64_t seed, int jobs) {
    if (N < f.n) throw Error(Errc::HostTooSmall, "N < n(F)");
    CounterRng rng(seed);
    int M = num_edges(N);
    std::atomic<std::uint64_t> failures{0};
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (;;) {
            std::uint64_t s = next.fetch_add(1);
            if (s >= samples) return;
            PackedColoring packed(N);
            for (int e = 0; e < M; ++e)
                packed.set(e, static_cast<Color>(rng.bounded(s * M + e, 3)));
            Coloring chi = packed.unpack();
            if (!backtrack_embed(f, chi)) failures.fetch_add(1);
        }
    };
    int workers = std::max(1, jobs);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return failures.load();
}

BruteForceResult brute_force_ramsey(const Forest& f, int n_max, const SearchBudget& budget,
                                    int jobs) {
    if (f.edge_count() % 3 != 0)
        throw Error(Errc::EdgeCountNotDivisible, "e(F) = " + std::to_string(f.edge_count()));
    BruteForceResult res;
    for (int N = std::max(1, f.n); N <= n_max; ++N) {
        auto out = exhaustive_upper_bound(f, N, budget, jobs);
        res.states += out.states;
        if (out.kind == UpperBoundOutcome::Kind::Proved) {
            res.value = N;
            return res;
        }
        if (out.kind == UpperBoundOutcome::Kind::BudgetExceeded) {
            res.budget_exceeded = true;
            return res;
        }
        res.counterexamples.emplace_back(N, *out.counterexample);
    }
    return res;
}

VerificationReport verify_forest(const Forest& f, const VerifyOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.forest_canonical = canonical_form(f);
    auto formula = ramsey_formula(f);
    rep.formula_value = formula.value;
    rep.formula_case = formula.formula_case;
    rep.seed = opts.seed;

    // lower bound: exact certification for type 1 / type 2
    rep.lower_witness_applicable = formula.cls != ForestClass::Type0;
    rep.lower_witness_ok = true;
    if (rep.lower_witness_applicable) {
        auto w = witness_lower_bound(f);
        rep.lower_witness_ok = w.certified;
    }

    if (opts.exhaustive) {
        int nmax = opts.n_max > 0 ? opts.n_max : formula.value;
        auto r = brute_force_ramsey(f, nmax, opts.budget, opts.jobs);
        rep.states_explored = r.states;
        rep.counterexamples = r.counterexamples;
        if (r.value) {
            rep.oracle_value = r.value;
            rep.upper_bound_ok = (*r.value == formula.value);
            rep.upper_verdict = "Proved";
        } else if (r.budget_exceeded) {
            // fall back to sampling at the formula value
            rep.samples = opts.samples;
            rep.sample_failures = sample_upper_bound(f, formula.value, opts.samples, opts.seed,
                                                     opts.jobs);
            rep.upper_bound_ok = rep.sample_failures == 0;
            rep.upper_verdict = "BudgetExceeded+Sampled";
        } else if (nmax < formula.value) {
            // every host up to nmax was refuted, consistent with the formula
            rep.upper_verdict = "LowerBoundsOnly";
        } else {
            // a counterexample at or above the formula value: flag, never reconcile
            rep.upper_bound_ok = false;
            rep.upper_verdict = "CounterexampleAtFormulaValue";
        }
    } else {
        rep.samples = opts.samples;
        rep.sample_failures = sample_upper_bound(f, formula.value, opts.samples, opts.seed,
                                                 opts.jobs);
        rep.upper_bound_ok = rep.sample_failures == 0;
        rep.upper_verdict = "Sampled";
    }
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace zsram
