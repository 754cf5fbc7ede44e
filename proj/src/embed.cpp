#include "zsram/embed.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <set>

#include "zsram/egz.hpp"

namespace zsram {

const char* strategy_name(Strategy::Kind k) {
    switch (k) {
        case Strategy::Kind::Monochromatic: return "Monochromatic";
        case Strategy::Kind::TwoSwitchTwoC4: return "TwoSwitchTwoC4";
        case Strategy::Kind::CCEmbed: return "CCEmbed";
        case Strategy::Kind::NoAltC4: return "NoAltC4";
        case Strategy::Kind::Siblings: return "Siblings";
        case Strategy::Kind::OneAltC4NonMono: return "OneAltC4NonMono";
        case Strategy::Kind::OneAltC4Mono: return "OneAltC4Mono";
        case Strategy::Kind::GeneralizedSwitch: return "GeneralizedSwitch";
        case Strategy::Kind::FamilySpecific: return "FamilySpecific";
        case Strategy::Kind::TransferReduced: return "TransferReduced";
        case Strategy::Kind::Fallback: return "Fallback";
    }
    return "?";
}

bool embedding_valid(const Coloring& chi, const Forest& f, const Embedding& phi) {
    if (phi.map.size() != static_cast<size_t>(f.n)) return false;
    std::vector<bool> used(chi.n, false);
    for (int h : phi.map) {
        if (h < 0 || h >= chi.n || used[h]) return false;
        used[h] = true;
    }
    return true;
}

Forest pad_forest(const Forest& f, int extra) {
    return Forest::from_edges(f.n + extra, f.edges);
}

// ---------------------------------------------------------------------------
// exact backtracking embedder

namespace {

struct Plan {
    std::vector<int> order;      // forest vertices in placement order
    std::vector<int> parent_pos; // position of attach parent, -1 for roots
    std::vector<int> after_pos;  // host must exceed host at this position, -1 none
    std::vector<int> comp_id;
    std::vector<int> comp_prev;  // per comp: previous identical comp or -1
    int first_isolated = 0;      // order position where 1-vertex components start
    int last_edge_pos = -1;
};

Plan make_plan(const Forest& f) {
    Plan plan;
    auto comps = f.components();
    std::vector<std::string> canon(comps.size());
    std::vector<size_t> idx(comps.size());
    std::iota(idx.begin(), idx.end(), 0);
    {
        std::vector<Forest> sub;
        sub.reserve(comps.size());
        for (auto& c : comps) {
            std::vector<std::pair<int, int>> es;
            std::vector<int> remap(f.n, -1);
            for (size_t i = 0; i < c.size(); ++i) remap[c[i]] = static_cast<int>(i);
            for (auto& [u, v] : f.edges)
                if (remap[u] >= 0 && remap[v] >= 0) es.emplace_back(remap[u], remap[v]);
            sub.push_back(Forest::from_edges(static_cast<int>(c.size()), std::move(es)));
        }
        for (size_t i = 0; i < comps.size(); ++i) canon[i] = canonical_form(sub[i]);
    }
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (comps[a].size() != comps[b].size()) return comps[a].size() > comps[b].size();
        if (canon[a] != canon[b]) return canon[a] < canon[b];
        return comps[a][0] < comps[b][0];
    });

    int pos = 0;
    plan.first_isolated = -1;
    for (size_t oi = 0; oi < idx.size(); ++oi) {
        size_t ci = idx[oi];
        auto& comp = comps[ci];
        int cid = static_cast<int>(oi);
        int prev = -1;
        if (oi > 0 && canon[idx[oi - 1]] == canon[ci]) prev = cid - 1;
        if (comp.size() == 1 && plan.first_isolated < 0) plan.first_isolated = pos;

        int root = comp[0];
        for (int v : comp)
            if (f.degree(v) > f.degree(root)) root = v;
        std::vector<int> queue{root};
        std::vector<int> parent_of(f.n, -1);
        std::vector<bool> seen(f.n, false);
        seen[root] = true;
        size_t qh = 0;
        std::vector<int> pos_of(f.n, -1);
        while (qh < queue.size()) {
            int x = queue[qh++];
            plan.order.push_back(x);
            plan.comp_id.push_back(cid);
            pos_of[x] = pos;
            plan.parent_pos.push_back(parent_of[x] >= 0 ? pos_of[parent_of[x]] : -1);
            plan.after_pos.push_back(-1);
            pos++;
            // non-leaf children first, then leaf children chained in order
            std::vector<int> non_leaf, leaf;
            for (int y : f.adj[x]) {
                if (seen[y]) continue;
                (f.degree(y) == 1 ? leaf : non_leaf).push_back(y);
            }
            for (int y : non_leaf) {
                seen[y] = true;
                parent_of[y] = x;
                queue.push_back(y);
            }
            for (int y : leaf) {
                seen[y] = true;
                parent_of[y] = x;
                queue.push_back(y);
            }
        }
        // sibling leaf groups: consecutive children of the same parent
        for (size_t i = 1; i < comp.size(); ++i) {
            int p0 = pos - static_cast<int>(comp.size()) + static_cast<int>(i);
            int v = plan.order[p0];
            int pv = plan.order[p0 - 1];
            if (f.degree(v) == 1 && f.degree(pv) == 1 &&
                plan.parent_pos[p0] == plan.parent_pos[p0 - 1])
                plan.after_pos[p0] = p0 - 1;
        }
        if (comp.size() == 2) plan.after_pos[pos - 1] = pos - 2;
        plan.comp_prev.push_back(prev);
    }
    if (plan.first_isolated < 0) plan.first_isolated = static_cast<int>(plan.order.size());
    for (int p = 0; p < static_cast<int>(plan.order.size()); ++p)
        if (plan.parent_pos[p] >= 0) plan.last_edge_pos = p;
    return plan;
}

struct Backtracker {
    const Forest& f;
    const Coloring& chi;
    Plan plan;
    std::vector<int> host_at;  // per order position
    std::vector<int> comp_min; // running min host per comp id
    std::vector<int> comp_bound;
    std::vector<bool> used;
    std::uint64_t nodes = 0;
    Embedding result;

    Backtracker(const Forest& f_, const Coloring& chi_)
        : f(f_), chi(chi_), plan(make_plan(f_)), host_at(f_.n, -1),
          comp_min(f_.n + 1, chi_.n), comp_bound(f_.n + 1, -1), used(chi_.n, false) {}

    bool run() {
        if (chi.n < f.n) return false;
        return place(0, 0);
    }

    bool place(int p, int sum) {
        nodes++;
        int n_pos = static_cast<int>(plan.order.size());
        if (p == n_pos) return finish();
        if (p >= plan.first_isolated) {
            if (sum % 3 != 0) return false;
            // remaining vertices are isolated; ascending hosts satisfy the
            // identical-component ordering
            std::vector<int> taken;
            int h = 0;
            for (int q = p; q < n_pos; ++q) {
                while (h < chi.n && used[h]) h++;
                if (h == chi.n) {
                    for (int t : taken) used[t] = false;
                    return false;
                }
                used[h] = true;
                taken.push_back(h);
                host_at[q] = h;
            }
            if (finish()) return true;
            for (int t : taken) used[t] = false;
            return false;
        }
        int cid = plan.comp_id[p];
        bool comp_start = (p == 0 || plan.comp_id[p - 1] != cid);
        if (comp_start) {
            comp_bound[cid] = -1;
            if (plan.comp_prev[cid] >= 0) comp_bound[cid] = comp_min[plan.comp_prev[cid]];
            comp_min[cid] = chi.n;
        }
        int lo = comp_bound[cid];
        if (plan.after_pos[p] >= 0) lo = std::max(lo, host_at[plan.after_pos[p]]);
        int pp = plan.parent_pos[p];
        int ph = pp >= 0 ? host_at[pp] : -1;
        bool last_edge = (p == plan.last_edge_pos);
        int need = ((-sum) % 3 + 3) % 3;
        int saved_min = comp_min[cid];
        for (int h = lo + 1; h < chi.n; ++h) {
            if (used[h]) continue;
            int add = 0;
            if (pp >= 0) {
                add = chi.at(ph, h);
                if (last_edge && add != need) continue;
            }
            used[h] = true;
            host_at[p] = h;
            comp_min[cid] = std::min(saved_min, h);
            if (place(p + 1, sum + add)) return true;
            used[h] = false;
        }
        comp_min[cid] = saved_min;
        host_at[p] = -1;
        return false;
    }

    bool finish() {
        result.map.assign(f.n, -1);
        for (size_t p = 0; p < plan.order.size(); ++p) result.map[plan.order[p]] = host_at[p];
        return true;
    }
};

} // namespace

std::optional<Embedding> backtrack_embed(const Forest& f, const Coloring& chi,
                                         EngineStats* stats) {
    if (f.n == 0) return Embedding{};
    Backtracker bt(f, chi);
    bool ok = bt.run();
    if (stats) stats->nodes += bt.nodes;
    if (!ok) return std::nullopt;
    return bt.result;
}

// ---------------------------------------------------------------------------
// swap machinery

namespace {

std::pair<int, int> swapped_pair(const SwitchingStructure& s) { return {s.v[1], s.v[2]}; }
std::pair<int, int> swapped_pair(const GeneralizedSwitching& s) { return {s.u, s.l}; }

Embedding transpose_images(const Embedding& phi, int a, int b) {
    Embedding out = phi;
    std::swap(out.map[a], out.map[b]);
    return out;
}

} // namespace

SwapRecord make_swap_record(const Forest& f, const Coloring& chi, const Embedding& phi,
                            const SwitchingStructure& s) {
    SwapRecord rec;
    rec.structure = s;
    for (int v : s.v) rec.host_vertices.push_back(phi.map[v]);
    Color before = copy_sum(chi, f, phi);
    Color after = copy_sum(chi, f, transpose_images(phi, s.v[1], s.v[2]));
    rec.delta = sub3(after, before);
    return rec;
}

SwapRecord make_swap_record(const Forest& f, const Coloring& chi, const Embedding& phi,
                            const GeneralizedSwitching& s) {
    SwapRecord rec;
    rec.structure = s;
    for (int v : s.elements()) rec.host_vertices.push_back(phi.map[v]);
    Color before = copy_sum(chi, f, phi);
    Color after = copy_sum(chi, f, transpose_images(phi, s.u, s.l));
    rec.delta = sub3(after, before);
    return rec;
}

Embedding swap_copies(const Embedding& phi, const SwapRecord& rec, const Coloring& chi,
                      const Forest& f) {
    int a, b;
    if (auto* s = std::get_if<SwitchingStructure>(&rec.structure)) {
        std::tie(a, b) = swapped_pair(*s);
    } else {
        std::tie(a, b) = swapped_pair(std::get<GeneralizedSwitching>(rec.structure));
    }
    if (a < 0 || b < 0 || a >= f.n || b >= f.n)
        throw Error(Errc::InvalidSwap, "structure vertices outside forest");
    Color before = copy_sum(chi, f, phi);
    Embedding out = transpose_images(phi, a, b);
    Color after = copy_sum(chi, f, out);
    if (sub3(after, before) != rec.delta)
        throw Error(Errc::InvalidSwap, "delta mismatch");
    return out;
}

std::pair<int, int> four_sum_cover_select(Color base, std::pair<Color, Color> da,
                                          std::pair<Color, Color> db) {
    if (da.first == da.second || db.first == db.second)
        throw Error(Errc::PreconditionViolated, "delta pairs must hold distinct elements");
    std::array<Color, 2> a{da.first, da.second}, b{db.first, db.second};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (add3(base, add3(a[i], b[j])) == 0) return {i, j};
    throw Error(Errc::PreconditionViolated, "cover violated");
}

// ---------------------------------------------------------------------------
// candidate utilities

namespace {

struct Partial {
    int host_n;
    std::vector<int> map;
    std::vector<bool> used;
    std::vector<bool> blocked;

    Partial(const Forest& f, const Coloring& chi)
        : host_n(chi.n), map(f.n, -1), used(chi.n, false), blocked(chi.n, false) {}

    bool assign(int fv, int h) {
        if (h < 0 || h >= host_n || used[h] || blocked[h] || map[fv] != -1) return false;
        map[fv] = h;
        used[h] = true;
        return true;
    }
    void block(int h) { blocked[h] = true; }
    bool complete() {
        int h = 0;
        for (int v = 0; v < static_cast<int>(map.size()); ++v) {
            if (map[v] != -1) continue;
            while (h < host_n && (used[h] || blocked[h])) h++;
            if (h == host_n) return false;
            map[v] = h;
            used[h] = true;
        }
        return true;
    }
    Embedding embedding() const { return Embedding{map}; }
};

std::optional<Embedding> first_zero_sum(const Coloring& chi, const Forest& f,
                                        const std::vector<Embedding>& candidates) {
    for (auto& phi : candidates) {
        if (!embedding_valid(chi, f, phi)) continue;
        if (copy_sum(chi, f, phi) == 0) return phi;
    }
    return std::nullopt;
}

Embedding reassign(const Embedding& phi, int fv, int new_host) {
    Embedding out = phi;
    out.map[fv] = new_host;
    return out;
}

// orientations (x1,x2,x3,x4) such that x1-x2-x4-x3 traverses the cycle
std::vector<std::array<int, 4>> structure_orientations(const AlternatingC4& c) {
    std::vector<std::array<int, 4>> out;
    auto& v = c.v;
    for (int r = 0; r < 4; ++r) {
        std::array<int, 4> cyc{v[r], v[(r + 1) % 4], v[(r + 2) % 4], v[(r + 3) % 4]};
        out.push_back({cyc[0], cyc[1], cyc[3], cyc[2]});
        std::array<int, 4> rev{cyc[0], cyc[3], cyc[2], cyc[1]};
        out.push_back({rev[0], rev[1], rev[3], rev[2]});
    }
    return out;
}

// greedy embedding into the whole host (any injection works on K_n)
std::optional<Embedding> greedy_embedding(const Forest& f, const Coloring& chi) {
    if (chi.n < f.n) return std::nullopt;
    Embedding phi;
    phi.map.resize(f.n);
    std::iota(phi.map.begin(), phi.map.end(), 0);
    return phi;
}

std::optional<Embedding> strip_padding(const std::optional<Embedding>& phi, int n) {
    if (!phi) return std::nullopt;
    Embedding out;
    out.map.assign(phi->map.begin(), phi->map.begin() + n);
    return out;
}

bool is_star_forest(const Forest& f) {
    if (f.components().size() != 1 || f.n < 2) return false;
    int high = 0;
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) > 1) high++;
    return high <= 1;
}

bool is_one_mod3_regular_forest(const Forest& f) {
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) % 3 != 1) return false;
    return f.n > 0;
}

} // namespace

// ---------------------------------------------------------------------------
// CC colorings

std::optional<Embedding> embed_cc(const Forest& f, const CCPartition& partition,
                                  const Coloring& chi) {
    if (chi.n < f.n) throw Error(Errc::HostTooSmall, "host smaller than forest");
    if (f.edge_count() == 0) return greedy_embedding(f, chi);

    int nonempty = 0;
    for (auto& c : partition.classes)
        if (!c.empty()) nonempty++;
    if (nonempty <= 1) {
        auto phi = greedy_embedding(f, chi);
        return first_zero_sum(chi, f, {*phi});
    }

    int v0 = -1, v1 = -1, v2 = -1;
    for (int v = 0; v < f.n; ++v) {
        int d = f.degree(v) % 3;
        if (d == 0 && v0 < 0) v0 = v;
        else if (d == 1 && v1 < 0) v1 = v;
        else if (d == 2 && v2 < 0) v2 = v;
    }

    std::vector<Embedding> candidates;
    if (v0 >= 0 && v1 >= 0 && v2 >= 0) {
        for (int xi = 0; xi < 3; ++xi) {
            if (partition.classes[xi].size() < 2) continue;
            for (int yi = 0; yi < 3; ++yi) {
                if (yi == xi || partition.classes[yi].empty()) continue;
                Partial part(f, chi);
                if (!part.assign(v0, partition.classes[xi][0])) continue;
                if (!part.assign(v2, partition.classes[xi][1])) continue;
                if (!part.assign(v1, partition.classes[yi][0])) continue;
                if (!part.complete()) continue;
                auto base = part.embedding();
                candidates.push_back(base);
                candidates.push_back(transpose_images(base, v0, v1));
                candidates.push_back(transpose_images(base, v2, v1));
                if (auto r = first_zero_sum(chi, f, candidates)) return r;
                candidates.clear();
            }
        }
    }

    // two vertices of degree 0 mod 3 plus two leaves
    std::vector<int> zeros, leaves;
    for (int v = 0; v < f.n; ++v) {
        if (f.degree(v) % 3 == 0 && f.degree(v) > 0 && zeros.size() < 2) zeros.push_back(v);
        if (f.degree(v) == 1 && leaves.size() < 2) leaves.push_back(v);
    }
    if (zeros.size() < 2) {
        // isolated vertices also carry degree 0
        for (int v = 0; v < f.n && zeros.size() < 2; ++v)
            if (f.degree(v) == 0) zeros.push_back(v);
    }
    if (zeros.size() == 2 && leaves.size() == 2) {
        int x0 = zeros[0], y0 = zeros[1], x1 = leaves[0], y1 = leaves[1];
        for (int xi = 0; xi < 3; ++xi) {
            if (partition.classes[xi].size() < 2) continue;
            for (int yi = 0; yi < 3; ++yi) {
                if (yi == xi || partition.classes[yi].size() < 2) continue;
                Partial part(f, chi);
                if (!part.assign(x0, partition.classes[xi][0])) continue;
                if (!part.assign(x1, partition.classes[xi][1])) continue;
                if (!part.assign(y0, partition.classes[yi][0])) continue;
                if (!part.assign(y1, partition.classes[yi][1])) continue;
                if (!part.complete()) continue;
                auto base = part.embedding();
                candidates.push_back(base);
                candidates.push_back(transpose_images(base, x0, y1));
                candidates.push_back(transpose_images(base, x1, y0));
                if (auto r = first_zero_sum(chi, f, candidates)) return r;
                candidates.clear();
            }
        }
        // unitary classes: zeros into the singleton classes
        std::vector<int> singles, bigs;
        for (int i = 0; i < 3; ++i) {
            if (partition.classes[i].size() == 1) singles.push_back(i);
            else if (!partition.classes[i].empty()) bigs.push_back(i);
        }
        if (!singles.empty()) {
            for (auto [za, zb] : {std::pair{x0, y0}, std::pair{y0, x0}}) {
                Partial part(f, chi);
                bool ok = part.assign(za, partition.classes[singles[0]][0]);
                if (ok && singles.size() >= 2)
                    ok = part.assign(zb, partition.classes[singles[1]][0]);
                if (ok && part.complete()) candidates.push_back(part.embedding());
            }
            if (auto r = first_zero_sum(chi, f, candidates)) return r;
            candidates.clear();
        }
    }
    throw Error(Errc::HypothesisViolated, "degree profile unsuitable for CC embedding");
}

std::optional<Embedding> embed_no_alt_c4(const Forest& f, const Coloring& chi) {
    if (find_alternating_c4(chi)) throw Error(Errc::AltC4Present, "coloring has an alternating C4");
    if (chi.n < f.n) throw Error(Errc::HostTooSmall, "host smaller than forest");
    auto p = detect_cc(chi);
    if (!p) return std::nullopt;
    Forest padded = pad_forest(f, chi.n - f.n);
    try {
        auto phi = embed_cc(padded, *p, chi);
        return strip_padding(phi, f.n);
    } catch (const Error& e) {
        if (e.code == Errc::HypothesisViolated) return std::nullopt;
        throw;
    }
}

// ---------------------------------------------------------------------------
// two disjoint structures on two disjoint alternating C4s

std::optional<Embedding> embed_two_switch(const Forest& f, const Coloring& chi,
                                          const SwitchingStructure& s1,
                                          const SwitchingStructure& s2,
                                          const AlternatingC4& c1, const AlternatingC4& c2) {
    if (chi.n < f.n) throw Error(Errc::HostTooSmall, "host smaller than forest");
    for (int a : s1.v)
        for (int b : s2.v)
            if (a == b) throw Error(Errc::WitnessMismatch, "structures share vertices");
    for (int a : c1.v)
        for (int b : c2.v)
            if (a == b) throw Error(Errc::WitnessMismatch, "cycles share vertices");
    if (!is_alternating(chi, c1) || !is_alternating(chi, c2))
        throw Error(Errc::WitnessMismatch, "cycle is not alternating");
    auto or1 = structure_orientations(c1);
    auto or2 = structure_orientations(c2);
    Partial part(f, chi);
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) ok = part.assign(s1.v[i], or1[0][i]);
    for (int i = 0; i < 4 && ok; ++i) ok = part.assign(s2.v[i], or2[0][i]);
    if (!ok || !part.complete()) return std::nullopt;
    auto base = part.embedding();
    auto t1 = transpose_images(base, s1.v[1], s1.v[2]);
    auto t2 = transpose_images(base, s2.v[1], s2.v[2]);
    auto t12 = transpose_images(t1, s2.v[1], s2.v[2]);
    std::array<bool, 3> seen{false, false, false};
    for (auto& cand : {base, t1, t2, t12}) seen[copy_sum(chi, f, cand)] = true;
    if (!seen[0] || !seen[1] || !seen[2])
        throw Error(Errc::WitnessMismatch, "four candidate sums do not cover Z3");
    return first_zero_sum(chi, f, {base, t1, t2, t12});
}

// ---------------------------------------------------------------------------
// forests with sibling leaves, host >= n+1

namespace {

// first two leaves with distinct parents
std::optional<std::array<int, 4>> leaves_distinct_parents(const Forest& f) {
    for (int l1 = 0; l1 < f.n; ++l1) {
        if (!f.is_leaf(l1)) continue;
        int p1 = f.leaf_parent(l1);
        for (int l2 = l1 + 1; l2 < f.n; ++l2) {
            if (!f.is_leaf(l2)) continue;
            int p2 = f.leaf_parent(l2);
            if (p2 != p1 && l2 != p1 && l1 != p2) return std::array<int, 4>{l1, p1, l2, p2};
        }
    }
    return std::nullopt;
}

std::optional<Embedding> siblings_trichromatic(const Forest& f, const Coloring& chi,
                                               int tri_host) {
    auto sib = find_sibling_leaves(f);
    if (!sib) return std::nullopt;
    auto [f1, f2, p] = *sib;
    int u0 = -1, u1 = -1, u2 = -1;
    for (int x = 0; x < chi.n; ++x) {
        if (x == tri_host) continue;
        Color c = chi.at(tri_host, x);
        if (c == 0 && u0 < 0) u0 = x;
        else if (c == 1 && u1 < 0) u1 = x;
        else if (c == 2 && u2 < 0) u2 = x;
    }
    if (u0 < 0 || u1 < 0 || u2 < 0) return std::nullopt;
    Partial part(f, chi);
    if (!part.assign(p, tri_host)) return std::nullopt;
    part.block(u0);
    part.block(u1);
    part.block(u2);
    Embedding skeleton;
    {
        Partial probe = part;
        std::vector<int> rest;
        for (int v = 0; v < f.n; ++v)
            if (v != p && v != f1 && v != f2) rest.push_back(v);
        for (int v : rest)
            if (probe.map[v] == -1) {
                // fill below via complete(); nothing to pin here
            }
        probe.map[f1] = -2; // placeholders so complete() skips them
        probe.map[f2] = -2;
        if (!probe.complete()) return std::nullopt;
        skeleton = probe.embedding();
    }
    std::vector<Embedding> candidates;
    for (auto [a, b] : {std::pair{u0, u1}, std::pair{u0, u2}, std::pair{u1, u2}}) {
        Embedding phi = skeleton;
        phi.map[f1] = a;
        phi.map[f2] = b;
        candidates.push_back(phi);
    }
    return first_zero_sum(chi, f, candidates);
}

// common color of two palette classes identified by color pairs
Color common_color(std::pair<Color, Color> a, std::pair<Color, Color> b) {
    if (a.first == b.first || a.first == b.second) return a.first;
    return a.second;
}

} // namespace

std::optional<Embedding> embed_siblings(const Forest& f, const Coloring& chi) {
    if (chi.n < f.n + 1) throw Error(Errc::HypothesisViolated, "needs host >= n+1");
    if (is_star_forest(f) || is_one_mod3_regular_forest(f))
        throw Error(Errc::HypothesisViolated, "star or 1 mod 3 regular");
    if (!find_sibling_leaves(f)) throw Error(Errc::HypothesisViolated, "no sibling leaves");

    auto pal = vertex_palettes(chi);
    for (int t : pal.tri)
        if (auto r = siblings_trichromatic(f, chi, t)) return r;
    if (!pal.tri.empty()) return std::nullopt; // trichromatic recipe should not miss

    auto lp = leaves_distinct_parents(f);
    if (!lp) return std::nullopt;
    auto [l1, p1, l2, p2] = *lp;

    // bichromatic classes; monochromatic-c vertices join V_{c,c+1}
    std::array<std::vector<int>, 3> cls; // 0: V01, 1: V02, 2: V12
    std::array<std::pair<Color, Color>, 3> pair_of{{{0, 1}, {0, 2}, {1, 2}}};
    for (int v = 0; v < chi.n; ++v) {
        auto& p = pal.palette[v];
        if (p.size() == 1) {
            Color c = *p.begin();
            if (c == 0) cls[0].push_back(v);
            else if (c == 1) cls[2].push_back(v);
            else cls[1].push_back(v);
        } else if (p == std::set<Color>{0, 1}) cls[0].push_back(v);
        else if (p == std::set<Color>{0, 2}) cls[1].push_back(v);
        else cls[2].push_back(v);
    }
    int nonempty = 0;
    for (auto& c : cls)
        if (!c.empty()) nonempty++;

    std::vector<Embedding> cands;
    if (nonempty == 3) {
        for (int ai = 0; ai < 3; ++ai) {
            if (cls[ai].size() < 3) continue;
            int bi = (ai + 1) % 3, ci = (ai + 2) % 3;
            Color cab = common_color(pair_of[ai], pair_of[bi]);
            Color cac = common_color(pair_of[ai], pair_of[ci]);
            int a1 = cls[ai][0], a2 = cls[ai][1], a3 = cls[ai][2];
            Color col = chi.at(a2, a3);
            int pclass, sclass;
            if (col == cab) {
                pclass = bi;
                sclass = ci;
            } else if (col == cac) {
                pclass = ci;
                sclass = bi;
            } else {
                continue;
            }
            Partial part(f, chi);
            bool ok = part.assign(l1, a1) && part.assign(p2, a2) && part.assign(l2, a3) &&
                      part.assign(p1, cls[pclass][0]);
            if (!ok) continue;
            int spare = cls[sclass][0];
            part.block(spare);
            if (!part.complete()) continue;
            auto base = part.embedding();
            cands.push_back(base);
            cands.push_back(reassign(base, l1, spare));
            cands.push_back(reassign(base, l2, spare));
            if (auto r = first_zero_sum(chi, f, cands)) return r;
            cands.clear();
        }
    }
    if (nonempty == 2) {
        int wi = -1, oi = -1;
        for (int i = 0; i < 3; ++i)
            if (!cls[i].empty()) (wi < 0 ? wi : oi) = i;
        Color shared = common_color(pair_of[wi], pair_of[oi]);
        for (auto [W, O] : {std::pair{wi, oi}, std::pair{oi, wi}}) {
            Color wother = pair_of[W].first == shared ? pair_of[W].second : pair_of[W].first;
            Color oother = pair_of[O].first == shared ? pair_of[O].second : pair_of[O].first;
            // x,y,z in W with chi(xy) = wother, chi(yz) = shared
            auto& ws = cls[W];
            for (size_t iy = 0; iy < ws.size(); ++iy)
                for (size_t ix = 0; ix < ws.size(); ++ix)
                    for (size_t iz = 0; iz < ws.size(); ++iz) {
                        if (ix == iy || iy == iz || ix == iz) continue;
                        int x = ws[ix], y = ws[iy], z = ws[iz];
                        if (chi.at(x, y) != wother || chi.at(y, z) != shared) continue;
                        // edge of color oother inside O
                        for (size_t i1 = 0; i1 < cls[O].size(); ++i1)
                            for (size_t i2 = i1 + 1; i2 < cls[O].size(); ++i2) {
                                int h1 = cls[O][i1], h2 = cls[O][i2];
                                if (chi.at(h1, h2) != oother) continue;
                                Partial part(f, chi);
                                bool ok = part.assign(l1, x) && part.assign(p1, y) &&
                                          part.assign(p2, h1) && part.assign(l2, h2);
                                if (!ok) continue;
                                part.block(z);
                                if (!part.complete()) continue;
                                auto base = part.embedding();
                                cands.push_back(base);
                                cands.push_back(reassign(base, l1, z));
                                cands.push_back(reassign(base, l2, z));
                                if (auto r = first_zero_sum(chi, f, cands)) return r;
                                cands.clear();
                            }
                    }
        }
    }

    // two-color host: alternating P5, near-monochromatic vertex, clique shapes
    {
        // alternating path v1..v5 with colors c1,c2,c1,c2
        for (int c1i = 0; c1i < 3; ++c1i)
            for (int c2i = 0; c2i < 3; ++c2i) {
                if (c1i == c2i) continue;
                Color c1 = static_cast<Color>(c1i), c2 = static_cast<Color>(c2i);
                for (int v2 = 0; v2 < chi.n; ++v2)
                    for (int v3 = 0; v3 < chi.n; ++v3) {
                        if (v3 == v2 || chi.at(v2, v3) != c2) continue;
                        for (int v4 = 0; v4 < chi.n; ++v4) {
                            if (v4 == v2 || v4 == v3 || chi.at(v3, v4) != c1) continue;
                            for (int v1 = 0; v1 < chi.n; ++v1) {
                                if (v1 == v2 || v1 == v3 || v1 == v4 || chi.at(v1, v2) != c1)
                                    continue;
                                for (int v5 = 0; v5 < chi.n; ++v5) {
                                    if (v5 == v1 || v5 == v2 || v5 == v3 || v5 == v4 ||
                                        chi.at(v4, v5) != c2)
                                        continue;
                                    Partial part(f, chi);
                                    bool ok = part.assign(l1, v1) && part.assign(p1, v2) &&
                                              part.assign(p2, v4) && part.assign(l2, v5);
                                    if (!ok) continue;
                                    part.block(v3);
                                    if (!part.complete()) continue;
                                    auto base = part.embedding();
                                    cands.push_back(base);
                                    cands.push_back(reassign(base, l1, v3));
                                    cands.push_back(reassign(base, l2, v3));
                                    if (auto r = first_zero_sum(chi, f, cands)) return r;
                                    cands.clear();
                                }
                            }
                        }
                    }
            }
    }
    // some vertex whose removal leaves a monochromatic clique
    for (int w = 0; w < chi.n; ++w) {
        bool mono = true;
        Color c = 0;
        bool any = false;
        for (int u = 0; u < chi.n && mono; ++u) {
            if (u == w) continue;
            for (int v = u + 1; v < chi.n && mono; ++v) {
                if (v == w) continue;
                if (!any) {
                    c = chi.at(u, v);
                    any = true;
                } else if (chi.at(u, v) != c) mono = false;
            }
        }
        if (!mono) continue;
        Partial part(f, chi);
        part.block(w);
        if (!part.complete()) continue;
        if (auto r = first_zero_sum(chi, f, {part.embedding()})) return r;
    }
    // clique X mono alpha, everything else beta
    {
        auto try_shape = [&](const std::vector<int>& X, Color /*alpha*/,
                             const std::vector<int>& rest, Color /*beta*/) -> std::optional<Embedding> {
            if (rest.size() == 2) {
                int u = rest[0], v = rest[1];
                for (int x = 0; x < f.n; ++x) {
                    if (f.degree(x) % 3 == 0 && f.degree(x) > 0) {
                        Partial part(f, chi);
                        if (!part.assign(x, u)) continue;
                        part.block(v);
                        if (!part.complete()) continue;
                        if (auto r = first_zero_sum(chi, f, {part.embedding()})) return r;
                    }
                    if (f.degree(x) % 3 == 2) {
                        for (int leaf = 0; leaf < f.n; ++leaf) {
                            if (!f.is_leaf(leaf) || f.has_edge(x, leaf) || leaf == x) continue;
                            Partial part(f, chi);
                            if (!part.assign(x, u) || !part.assign(leaf, v)) continue;
                            if (!part.complete()) continue;
                            if (auto r = first_zero_sum(chi, f, {part.embedding()})) return r;
                            break;
                        }
                    }
                }
                return std::nullopt;
            }
            if (rest.size() < 3 || X.size() < 3) return std::nullopt;
            auto sib = find_sibling_leaves(f);
            if (!sib) return std::nullopt;
            auto [sf, sg, sp] = *sib;
            int d = f.degree(sp);
            int rest_cap = static_cast<int>(rest.size()) - 1;
            for (int j = 2; j <= std::min(d, static_cast<int>(X.size()) - 1); j += 3) {
                if (d - j > rest_cap) continue;
                Partial part(f, chi);
                bool ok = part.assign(sp, X[0]) && part.assign(sf, X[1]);
                // j neighbors of sp in X (including sf), the rest outside
                int placed_in = 1;
                size_t xi = 2, ri = 1;
                int spare = rest[0];
                part.block(spare);
                for (int nb : f.adj[sp]) {
                    if (!ok) break;
                    if (nb == sf) continue;
                    if (placed_in < j) {
                        if (xi >= X.size()) { ok = false; break; }
                        ok = part.assign(nb, X[xi++]);
                        placed_in++;
                    } else {
                        while (ri < rest.size() && part.used[rest[ri]]) ri++;
                        if (ri >= rest.size()) { ok = false; break; }
                        ok = part.assign(nb, rest[ri++]);
                    }
                }
                if (!ok || !part.complete()) continue;
                auto base = part.embedding();
                std::vector<Embedding> cs{base, reassign(base, sf, spare), reassign(base, sp, spare)};
                if (auto r = first_zero_sum(chi, f, cs)) return r;
            }
            return std::nullopt;
        };
        // maximal monochromatic clique from each seed edge
        for (int a = 0; a < chi.n; ++a) {
            for (int b = a + 1; b < chi.n; ++b) {
                Color alpha = chi.at(a, b);
                std::vector<int> X{a, b};
                for (int w = 0; w < chi.n; ++w) {
                    if (w == a || w == b) continue;
                    bool fits = true;
                    for (int x : X)
                        if (chi.at(w, x) != alpha) fits = false;
                    if (fits) X.push_back(w);
                }
                std::sort(X.begin(), X.end());
                std::vector<int> rest;
                std::vector<bool> in_x(chi.n, false);
                for (int x : X) in_x[x] = true;
                for (int v = 0; v < chi.n; ++v)
                    if (!in_x[v]) rest.push_back(v);
                if (rest.empty()) continue;
                // rest must be monochromatic and the cross edges constant
                Color beta = 0;
                bool rest_mono = true, rest_any = false;
                for (size_t i = 0; i < rest.size() && rest_mono; ++i)
                    for (size_t j = i + 1; j < rest.size(); ++j) {
                        Color c = chi.at(rest[i], rest[j]);
                        if (!rest_any) {
                            beta = c;
                            rest_any = true;
                        } else if (c != beta) {
                            rest_mono = false;
                            break;
                        }
                    }
                if (!rest_mono) continue;
                Color gamma = chi.at(X[0], rest[0]);
                bool cross_const = true;
                for (int x : X)
                    for (int r : rest)
                        if (chi.at(x, r) != gamma) cross_const = false;
                if (!cross_const) continue;
                std::optional<Embedding> r;
                if (!rest_any || beta == gamma) {
                    r = try_shape(X, alpha, rest, gamma);
                } else if (gamma == alpha) {
                    r = try_shape(rest, beta, X, alpha);
                }
                if (r) return r;
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// one alternating C4

namespace {

bool complement_monochromatic(const Coloring& chi, const AlternatingC4& c) {
    std::set<int> excl(c.v.begin(), c.v.end());
    Color col = 0;
    bool any = false;
    for (int u = 0; u < chi.n; ++u) {
        if (excl.count(u)) continue;
        for (int v = u + 1; v < chi.n; ++v) {
            if (excl.count(v)) continue;
            if (!any) {
                col = chi.at(u, v);
                any = true;
            } else if (chi.at(u, v) != col) return false;
        }
    }
    return true;
}

std::optional<Embedding> one_alt_nonmono(const Forest& f, const Coloring& chi,
                                         const std::vector<AlternatingC4>& cycles) {
    int t = chi.n - f.n;
    Forest padded = pad_forest(f, t);
    if (!profile_is_type0(padded)) return std::nullopt;
    std::optional<SixTuple> six;
    try {
        six = find_six_tuple(padded);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!six) return std::nullopt;
    for (auto& c : cycles) {
        if (complement_monochromatic(chi, c)) continue;
        std::vector<int> outside;
        std::set<int> on(c.v.begin(), c.v.end());
        for (int v = 0; v < chi.n; ++v)
            if (!on.count(v)) outside.push_back(v);
        auto restricted = chi.restrict(outside);
        auto part = detect_cc(restricted);
        if (!part) continue;
        std::vector<int> reps;
        for (auto& cl : part->classes)
            if (!cl.empty()) reps.push_back(outside[cl[0]]);
        if (reps.size() < 2) continue;
        auto& s = six->structure;
        auto orient = structure_orientations(c);
        for (auto [hu, hv] : {std::pair{reps[0], reps[1]}, std::pair{reps[1], reps[0]}}) {
            Partial base(padded, chi);
            bool ok = true;
            for (int i = 0; i < 4 && ok; ++i) ok = base.assign(s.v[i], orient[0][i]);
            ok = ok && base.assign(six->u, hu) && base.assign(six->v, hv);
            if (!ok || !base.complete()) continue;
            auto b = base.embedding();
            auto t1 = transpose_images(b, s.v[1], s.v[2]);
            auto t2 = transpose_images(b, six->u, six->v);
            auto t12 = transpose_images(t1, six->u, six->v);
            for (auto& cand : {b, t1, t2, t12})
                if (copy_sum(chi, padded, cand) == 0)
                    return strip_padding(std::optional<Embedding>(cand), f.n);
        }
    }
    return std::nullopt;
}

std::vector<int> independent_vertices(const Forest& f, int count) {
    std::vector<int> picked;
    std::vector<bool> banned(f.n, false);
    std::vector<int> order(f.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return f.degree(a) < f.degree(b); });
    for (int v : order) {
        if (banned[v]) continue;
        picked.push_back(v);
        if (static_cast<int>(picked.size()) == count) return picked;
        for (int y : f.adj[v]) banned[y] = true;
    }
    return {};
}

std::optional<Embedding> one_alt_mono_pattern(const Forest& f, const Coloring& chi) {
    auto pattern = classify_near_mono_pattern(chi);
    if (!pattern) return std::nullopt;
    int n = f.n;

    if (auto* p = std::get_if<MonoCliqueMinusOne>(&*pattern)) {
        int odd = p->odd_vertex;
        if (chi.n - 1 >= n) {
            Partial part(f, chi);
            part.block(odd);
            if (part.complete())
                if (auto r = first_zero_sum(chi, f, {part.embedding()})) return r;
        }
        // host == n: the odd vertex must participate
        for (int w = 0; w < chi.n; ++w) {
            if (w == odd || chi.at(odd, w) != p->clique_color) continue;
            for (int leaf = 0; leaf < f.n; ++leaf) {
                if (!f.is_leaf(leaf)) continue;
                Partial part(f, chi);
                if (!part.assign(leaf, odd) || !part.assign(f.leaf_parent(leaf), w)) continue;
                if (!part.complete()) continue;
                if (auto r = first_zero_sum(chi, f, {part.embedding()})) return r;
                break;
            }
            break;
        }
        for (int x = 0; x < f.n; ++x) {
            if (f.degree(x) % 3 != 0 || f.degree(x) == 0) continue;
            std::vector<int> star_colors;
            std::vector<int> star_hosts;
            for (int w = 0; w < chi.n; ++w)
                if (w != odd) {
                    star_colors.push_back(chi.at(odd, w));
                    star_hosts.push_back(w);
                }
            auto pick = egz_find(ResidueSequence(3, star_colors), f.degree(x));
            if (!pick) continue;
            Partial part(f, chi);
            if (!part.assign(x, odd)) continue;
            bool ok = true;
            size_t pi = 0;
            for (int nb : f.adj[x]) {
                if (pi >= pick->size()) { ok = false; break; }
                ok = part.assign(nb, star_hosts[(*pick)[pi++]]);
                if (!ok) break;
            }
            if (!ok || !part.complete()) continue;
            if (auto r = first_zero_sum(chi, f, {part.embedding()})) return r;
        }
        return std::nullopt;
    }
    if (auto* p = std::get_if<MonoExceptTriangle>(&*pattern)) {
        auto ind = independent_vertices(f, 3);
        int avail = chi.n - 3 + static_cast<int>(ind.size());
        if (avail < n || ind.size() < 3) {
            if (chi.n - 3 >= n) ind.clear(); // avoid the triangle entirely
            else return std::nullopt;
        }
        Partial part(f, chi);
        bool ok = true;
        for (size_t i = 0; i < ind.size() && i < 3; ++i) ok = ok && part.assign(ind[i], p->triangle[i]);
        for (int h : p->triangle)
            if (!part.used[h]) part.block(h);
        if (!ok || !part.complete()) return std::nullopt;
        return first_zero_sum(chi, f, {part.embedding()});
    }

    int hu, hv;
    std::vector<Embedding> cands;
    auto deg2_with_leaf = [&](int host_u, int host_v) {
        for (int x = 0; x < f.n; ++x) {
            if (f.degree(x) % 3 != 2) continue;
            for (int leaf = 0; leaf < f.n; ++leaf) {
                if (!f.is_leaf(leaf) || leaf == x || f.has_edge(x, leaf)) continue;
                Partial part(f, chi);
                if (!part.assign(x, host_u) || !part.assign(leaf, host_v)) continue;
                if (!part.complete()) continue;
                cands.push_back(part.embedding());
                return;
            }
        }
    };
    if (auto* p = std::get_if<TwoOutside_AllSecond>(&*pattern)) {
        hu = p->u;
        hv = p->v;
        deg2_with_leaf(hu, hv);
        deg2_with_leaf(hv, hu);
        // adjacent pair of degrees 0 and 1 mod 3
        for (auto& [a, b] : f.edges)
            for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}})
                if (f.degree(x) % 3 == 0 && f.degree(y) % 3 == 1) {
                    Partial part(f, chi);
                    if (part.assign(x, hu) && part.assign(y, hv) && part.complete())
                        cands.push_back(part.embedding());
                }
        return first_zero_sum(chi, f, cands);
    }
    if (auto* p = std::get_if<TwoOutside_SecondExceptUV>(&*pattern)) {
        hu = p->u;
        hv = p->v;
        deg2_with_leaf(hu, hv);
        deg2_with_leaf(hv, hu);
        std::vector<int> zeros;
        for (int x = 0; x < f.n; ++x)
            if (f.degree(x) % 3 == 0) zeros.push_back(x);
        if (zeros.size() == 1 && chi.n > f.n) {
            Partial part(f, chi);
            if (part.assign(zeros[0], hu)) {
                part.block(hv);
                if (part.complete()) cands.push_back(part.embedding());
            }
        }
        for (size_t i = 0; i < zeros.size(); ++i)
            for (size_t j = i + 1; j < zeros.size(); ++j)
                if (!f.has_edge(zeros[i], zeros[j])) {
                    Partial part(f, chi);
                    if (part.assign(zeros[i], hu) && part.assign(zeros[j], hv) && part.complete())
                        cands.push_back(part.embedding());
                }
        for (auto& [a, b] : f.edges)
            if (f.degree(a) % 3 == 1 && f.degree(b) % 3 == 1) {
                Partial part(f, chi);
                if (part.assign(a, hu) && part.assign(b, hv) && part.complete())
                    cands.push_back(part.embedding());
            }
        return first_zero_sum(chi, f, cands);
    }
    if (auto* p = std::get_if<TwoOutside_TwoColors>(&*pattern)) {
        for (int la = 0; la < f.n; ++la) {
            if (!f.is_leaf(la)) continue;
            for (int lb = 0; lb < f.n; ++lb) {
                if (lb == la || !f.is_leaf(lb) || f.has_edge(la, lb)) continue;
                Partial part(f, chi);
                if (part.assign(la, p->u) && part.assign(lb, p->v) && part.complete())
                    cands.push_back(part.embedding());
            }
        }
        return first_zero_sum(chi, f, cands);
    }
    return std::nullopt;
}

} // namespace

std::optional<Embedding> embed_one_alt_c4(const Forest& f, const Coloring& chi) {
    if (chi.n < f.n) throw Error(Errc::HostTooSmall, "host smaller than forest");
    auto cycles = all_alternating_c4s(chi);
    if (cycles.empty()) return std::nullopt;
    bool any_nonmono = false;
    for (auto& c : cycles)
        if (!complement_monochromatic(chi, c)) {
            any_nonmono = true;
            break;
        }
    if (any_nonmono) return one_alt_nonmono(f, chi, cycles);
    return one_alt_mono_pattern(f, chi);
}

// ---------------------------------------------------------------------------
// generalized switchings

std::optional<Embedding> embed_generalized(const Forest& f, const Coloring& chi,
                                           const SwitchingStructure& s1,
                                           const GeneralizedSwitching& s2) {
    if (chi.n < f.n) throw Error(Errc::HostTooSmall, "host smaller than forest");
    int threshold = s2.kind == GeneralizedSwitching::Kind::Deg2 ? 7 : 9;
    if (chi.n < threshold)
        throw Error(Errc::HypothesisViolated, "host below structure threshold");
    auto elems = s2.elements();
    for (int a : s1.v)
        for (int b : elems)
            if (a == b) throw Error(Errc::HypothesisViolated, "structures share vertices");

    auto cycles = all_alternating_c4s(chi);
    int tried = 0;
    for (auto& c : cycles) {
        if (complement_monochromatic(chi, c)) continue;
        if (++tried > 24) break;
        std::set<int> on(c.v.begin(), c.v.end());
        std::vector<int> outside;
        for (int v = 0; v < chi.n; ++v)
            if (!on.count(v)) outside.push_back(v);

        auto orients = structure_orientations(c);
        if (s2.kind == GeneralizedSwitching::Kind::Deg2) {
            bool v_in_s1 = std::find(s1.v.begin(), s1.v.end(), s2.v) != s1.v.end();
            if (!v_in_s1) {
                // x,y,z outside with chi(xy) != chi(xz)
                for (int x : outside) {
                    for (int y : outside) {
                        if (y == x) continue;
                        for (int z : outside) {
                            if (z == x || z == y || chi.at(x, y) == chi.at(x, z)) continue;
                            Partial part(f, chi);
                            bool ok = true;
                            for (int i = 0; i < 4 && ok; ++i) ok = part.assign(s1.v[i], orients[0][i]);
                            ok = ok && part.assign(s2.v, x) && part.assign(s2.u, y) &&
                                 part.assign(s2.l, z);
                            if (!ok || !part.complete()) continue;
                            auto base = part.embedding();
                            auto t1 = transpose_images(base, s1.v[1], s1.v[2]);
                            auto t2 = transpose_images(base, s2.u, s2.l);
                            auto t12 = transpose_images(t1, s2.u, s2.l);
                            if (auto r = first_zero_sum(chi, f, {base, t1, t2, t12})) return r;
                            goto next_cycle;
                        }
                    }
                }
            } else {
                auto pivot = find_pivot_vertex(chi, c);
                if (!pivot) continue;
                for (auto& ori : orients) {
                    int slot = -1;
                    for (int i = 0; i < 4; ++i)
                        if (s1.v[i] == s2.v) slot = i;
                    if (ori[slot] != pivot->u) continue;
                    Partial part(f, chi);
                    bool ok = true;
                    for (int i = 0; i < 4 && ok; ++i) ok = part.assign(s1.v[i], ori[i]);
                    ok = ok && part.assign(s2.u, pivot->v) && part.assign(s2.l, pivot->w);
                    if (!ok || !part.complete()) continue;
                    auto base = part.embedding();
                    auto t1 = transpose_images(base, s1.v[1], s1.v[2]);
                    auto t2 = transpose_images(base, s2.u, s2.l);
                    auto t12 = transpose_images(t1, s2.u, s2.l);
                    if (auto r = first_zero_sum(chi, f, {base, t1, t2, t12})) return r;
                }
            }
        } else {
            std::set<int> forb(c.v.begin(), c.v.end());
            auto corner = find_unbalanced_corner_c4(chi, forb);
            if (!corner) continue;
            Partial part(f, chi);
            bool ok = true;
            for (int i = 0; i < 4 && ok; ++i) ok = part.assign(s1.v[i], orients[0][i]);
            ok = ok && part.assign(s2.w, corner->v[0]) && part.assign(s2.u, corner->v[1]) &&
                 part.assign(s2.v, corner->v[2]) && part.assign(s2.l, corner->v[3]);
            if (!ok || !part.complete()) continue;
            auto base = part.embedding();
            auto t1 = transpose_images(base, s1.v[1], s1.v[2]);
            auto t2 = transpose_images(base, s2.u, s2.l);
            auto t12 = transpose_images(t1, s2.u, s2.l);
            if (auto r = first_zero_sum(chi, f, {base, t1, t2, t12})) return r;
        }
    next_cycle:;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// transfer lemma

std::pair<Forest, Embedding> transfer_rewrite(const Forest& f, const Embedding& phi,
                                              const Coloring& chi, int u, int v) {
    if (!embedding_valid(chi, f, phi) || copy_sum(chi, f, phi) != 0)
        throw Error(Errc::PreconditionViolated, "embedding not zero-sum");
    std::vector<int> leaves;
    for (int x : f.adj[u])
        if (f.is_leaf(x)) leaves.push_back(x);
    if (leaves.size() < 5) throw Error(Errc::PreconditionViolated, "needs >= 5 leaf children");
    leaves.resize(5);
    if (v == u || std::find(leaves.begin(), leaves.end(), v) != leaves.end())
        throw Error(Errc::PreconditionViolated, "v must avoid the five leaves");
    std::vector<int> deltas;
    for (int l : leaves) deltas.push_back(sub3(chi.at(phi.map[v], phi.map[l]), chi.at(phi.map[u], phi.map[l])));
    auto pick = egz_find(ResidueSequence(3, deltas), 3);
    if (!pick) throw Error(Errc::PreconditionViolated, "no zero-sum triple");
    auto es = f.edges;
    for (int idx : *pick) {
        int l = leaves[idx];
        auto it = std::find(es.begin(), es.end(),
                            std::pair{std::min(u, l), std::max(u, l)});
        es.erase(it);
        es.emplace_back(std::min(v, l), std::max(v, l));
    }
    Forest out = Forest::from_edges(f.n, std::move(es));
    if (copy_sum(chi, out, phi) != 0) throw Error(Errc::PreconditionViolated, "transfer broke zero sum");
    return {out, phi};
}

// ---------------------------------------------------------------------------
// family handlers

namespace {

std::optional<Embedding> embed_star_family(const Forest& f, const Coloring& chi) {
    int center = 0;
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) > f.degree(center)) center = v;
    int d = f.degree(center);
    for (int u = 0; u < chi.n; ++u) {
        std::vector<int> colors, hosts;
        for (int w = 0; w < chi.n; ++w)
            if (w != u) {
                colors.push_back(chi.at(u, w));
                hosts.push_back(w);
            }
        auto pick = egz_find(ResidueSequence(3, colors), d);
        if (!pick) continue;
        Partial part(f, chi);
        if (!part.assign(center, u)) continue;
        size_t pi = 0;
        bool ok = true;
        for (int nb : f.adj[center]) {
            ok = part.assign(nb, hosts[(*pick)[pi++]]);
            if (!ok) break;
        }
        if (!ok || !part.complete()) continue;
        if (auto r = first_zero_sum(chi, f, {part.embedding()})) return r;
    }
    return std::nullopt;
}

// forest into host avoiding forbidden host pairs
std::optional<Embedding> embed_avoiding_pairs(const Forest& f, const Coloring& chi,
                                              const std::set<std::pair<int, int>>& forbidden) {
    std::vector<int> map(f.n, -1);
    std::vector<bool> used(chi.n, false);
    // order: BFS within components so each vertex attaches to a placed parent
    Plan plan = make_plan(f);
    std::function<bool(int)> rec = [&](int p) -> bool {
        if (p == static_cast<int>(plan.order.size())) return true;
        int v = plan.order[p];
        int pp = plan.parent_pos[p];
        for (int h = 0; h < chi.n; ++h) {
            if (used[h]) continue;
            if (pp >= 0) {
                int ph = map[plan.order[pp]];
                auto key = std::pair{std::min(ph, h), std::max(ph, h)};
                if (forbidden.count(key)) continue;
            }
            map[v] = h;
            used[h] = true;
            if (rec(p + 1)) return true;
            used[h] = false;
            map[v] = -1;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return Embedding{map};
}

std::optional<Embedding> embed_one_mod3_regular(const Forest& f, const Coloring& chi) {
    auto sib = find_sibling_leaves(f);
    if (!sib) return std::nullopt;
    auto [f1, f2, p] = *sib;
    auto pal = vertex_palettes(chi);
    // trichromatic vertex
    for (int t : pal.tri)
        if (auto r = siblings_trichromatic(f, chi, t)) return r;
    // aabb vertex: two colors, both at least twice
    if (chi.n >= f.n + 2) {
        for (int u = 0; u < chi.n; ++u) {
            std::array<std::vector<int>, 3> by_color;
            for (int w = 0; w < chi.n; ++w)
                if (w != u) by_color[chi.at(u, w)].push_back(w);
            int c1 = -1, c2 = -1;
            for (int c = 0; c < 3; ++c)
                if (by_color[c].size() >= 2) (c1 < 0 ? c1 : c2) = c;
            if (c2 < 0) continue;
            std::array<int, 4> S{by_color[c1][0], by_color[c1][1], by_color[c2][0],
                                 by_color[c2][1]};
            Partial part(f, chi);
            if (!part.assign(p, u)) continue;
            for (int s : S) part.block(s);
            Partial probe = part;
            probe.map[f1] = -2;
            probe.map[f2] = -2;
            if (!probe.complete()) continue;
            std::vector<Embedding> cands;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) {
                    Embedding phi = probe.embedding();
                    phi.map[f1] = S[i];
                    phi.map[f2] = S[j];
                    cands.push_back(phi);
                }
            if (auto r = first_zero_sum(chi, f, cands)) return r;
        }
    }
    // structured colorings
    try {
        auto outcome = detect_aabb_structure(chi);
        if (!outcome) return std::nullopt;
        if (auto* m = std::get_if<ComplementOfMatching>(&*outcome)) {
            std::set<std::pair<int, int>> forbidden;
            for (int u = 0; u < chi.n; ++u)
                for (int v = u + 1; v < chi.n; ++v)
                    if (chi.at(u, v) != m->color) forbidden.insert({u, v});
            auto phi = embed_avoiding_pairs(f, chi, forbidden);
            if (phi && copy_sum(chi, f, *phi) == 0) return phi;
            return std::nullopt;
        }
        auto* k = std::get_if<MonoKm1>(&*outcome);
        if (chi.n - 1 >= f.n) {
            Partial part(f, chi);
            part.block(k->vertex_excluded);
            if (part.complete())
                if (auto r = first_zero_sum(chi, f, {part.embedding()})) return r;
        }
    } catch (const Error& e) {
        if (e.code != Errc::PreconditionViolated) throw;
    }
    return std::nullopt;
}

// Moves `count` hosts from Lu (leaves of the big-star center hu) onto hv, in
// zero-sum triples; the first triple may hit a nonzero target via the cover
// lemma. Returns the selected subset of Lu.
std::optional<std::vector<int>> select_transfer_set(const Coloring& chi, int hu, int hv,
                                                    std::vector<int> pool, int count,
                                                    Color first_target) {
    std::vector<int> chosen;
    auto delta = [&](int x) { return static_cast<int>(sub3(chi.at(hv, x), chi.at(hu, x))); };
    if (count % 3 != 0 || static_cast<int>(pool.size()) < count) return std::nullopt;
    if (count == 0) {
        if (first_target != 0) return std::nullopt;
        return std::vector<int>{};
    }
    if (first_target != 0) {
        std::vector<int> deltas;
        for (int x : pool) deltas.push_back(delta(x));
        int sum = 0;
        for (int d : deltas) sum += d;
        if (static_cast<int>(pool.size()) < 6 || pool.size() % 3 != 0 || sum % 3 != 0)
            return std::nullopt;
        auto cov = cover_triples(ResidueSequence(3, deltas));
        auto* triples = std::get_if<CoverTriples>(&cov);
        if (!triples) return std::nullopt;
        auto tri = triples->for_target[first_target];
        std::vector<int> next_pool;
        for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
            if (i == tri[0] || i == tri[1] || i == tri[2]) chosen.push_back(pool[i]);
            else next_pool.push_back(pool[i]);
        }
        pool = next_pool;
        count -= 3;
    }
    while (count > 0) {
        std::vector<int> deltas;
        for (int x : pool) deltas.push_back(delta(x));
        auto pick = egz_find(ResidueSequence(3, deltas), 3);
        if (!pick) return std::nullopt;
        std::vector<int> next_pool;
        for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
            if (std::find(pick->begin(), pick->end(), i) != pick->end()) chosen.push_back(pool[i]);
            else next_pool.push_back(pool[i]);
        }
        pool = next_pool;
        count -= 3;
    }
    return chosen;
}

// union of two stars with d1 = d2 = 0 (mod 3); host may exceed n
std::optional<Embedding> embed_double_stars_00(const Forest& f, int d1, int d2,
                                               const Coloring& chi, bool* used_transfer) {
    int c_small = -1, c_big = -1;
    for (int v = 0; v < f.n; ++v) {
        if (f.degree(v) == d1 && c_small < 0 && f.degree(v) > 1) c_small = v;
        else if (f.degree(v) == d2 && f.degree(v) > 1) c_big = v;
    }
    // equal sizes: pick two distinct centers
    if (c_small < 0 || c_big < 0) {
        std::vector<int> centers;
        for (int v = 0; v < f.n; ++v)
            if (f.degree(v) > 1) centers.push_back(v);
        if (centers.size() != 2) return std::nullopt;
        c_small = centers[0];
        c_big = centers[1];
        d1 = f.degree(c_small);
        d2 = f.degree(c_big);
    }

    // Case 1: a zero-sum big star exists somewhere
    for (int u = 0; u < chi.n; ++u) {
        std::vector<int> colors, hosts;
        for (int w = 0; w < chi.n; ++w)
            if (w != u) {
                colors.push_back(chi.at(u, w));
                hosts.push_back(w);
            }
        auto pick = egz_find(ResidueSequence(3, colors), d1 + d2);
        if (!pick) continue;
        std::vector<int> T;
        for (int idx : *pick) T.push_back(hosts[idx]);
        for (int v = 0; v < chi.n; ++v) {
            if (v == u || std::find(T.begin(), T.end(), v) != T.end()) continue;
            auto moved = select_transfer_set(chi, u, v, T, d1, 0);
            if (!moved) continue;
            // the small star moves to v
            Partial part(f, chi);
            bool ok = part.assign(c_big, u) && part.assign(c_small, v);
            std::set<int> mv(moved->begin(), moved->end());
            std::vector<int> rem;
            for (int x : T)
                if (!mv.count(x)) rem.push_back(x);
            size_t ri = 0, mi = 0;
            std::vector<int> mvv(mv.begin(), mv.end());
            for (int nb : f.adj[c_big]) {
                if (!ok) break;
                ok = part.assign(nb, rem[ri++]);
            }
            for (int nb : f.adj[c_small]) {
                if (!ok) break;
                ok = part.assign(nb, mvv[mi++]);
            }
            if (!ok || !part.complete()) continue;
            if (auto r = first_zero_sum(chi, f, {part.embedding()})) {
                if (used_transfer) *used_transfer = true;
                return r;
            }
            break;
        }
    }

    // Case 2: no zero-sum big star; work from a same-palette pair
    for (int u = 0; u < chi.n; ++u) {
        for (int v = 0; v < chi.n; ++v) {
            if (v == u) continue;
            std::vector<int> others;
            for (int w = 0; w < chi.n; ++w)
                if (w != u && w != v) others.push_back(w);
            int s = 0;
            for (int w : others) s += chi.at(u, w);
            s %= 3;
            Color target = sub3(0, s);
            auto moved = select_transfer_set(chi, u, v, others, d2, target);
            if (!moved) continue;
            std::set<int> mv(moved->begin(), moved->end());
            std::vector<int> rem;
            for (int x : others)
                if (!mv.count(x)) rem.push_back(x);
            if (static_cast<int>(rem.size()) < d1) continue;
            std::vector<int> mvv(mv.begin(), mv.end());
            // c_small (d1 leaves) stays at u with rem; c_big (d2) moves to v
            Partial p3(f, chi);
            bool good = p3.assign(c_small, u) && p3.assign(c_big, v);
            size_t ai = 0;
            for (int nb : f.adj[c_small]) {
                if (!good) break;
                good = p3.assign(nb, rem[ai++]);
            }
            size_t bi = 0;
            for (int nb : f.adj[c_big]) {
                if (!good) break;
                good = p3.assign(nb, mvv[bi++]);
            }
            if (!good || !p3.complete()) continue;
            if (auto r = first_zero_sum(chi, f, {p3.embedding()})) {
                if (used_transfer) *used_transfer = true;
                return r;
            }
        }
    }

    // monochromatic-class colorings: explicit small-star shapes
    if (chi.n == f.n) {
        for (int q = 0; q < chi.n; ++q) {
            for (int r = 0; r < chi.n; ++r) {
                if (r == q) continue;
                std::vector<int> others;
                for (int w = 0; w < chi.n; ++w)
                    if (w != q && w != r) others.push_back(w);
                // q carries the small star (3 leaves), r the rest
                for (size_t i = 0; i < others.size(); ++i)
                    for (size_t j = i + 1; j < others.size(); ++j)
                        for (size_t k = j + 1; k < others.size(); ++k) {
                            int sum = chi.at(q, others[i]) + chi.at(q, others[j]) +
                                      chi.at(q, others[k]);
                            for (size_t t = 0; t < others.size(); ++t) {
                                if (t == i || t == j || t == k) continue;
                                sum += chi.at(r, others[t]);
                            }
                            if (sum % 3 != 0) continue;
                            // grow the q-star from 3 to d1 (or d2)
                            std::vector<int> small_set{others[i], others[j], others[k]};
                            std::vector<int> big_set;
                            for (size_t t = 0; t < others.size(); ++t)
                                if (t != i && t != j && t != k) big_set.push_back(others[t]);
                            for (auto [goal_small, cs, cb] :
                                 {std::tuple{d1, c_small, c_big}, std::tuple{d2, c_big, c_small}}) {
                                int extra = goal_small - 3;
                                if (extra < 0) continue;
                                auto moved = select_transfer_set(chi, r, q, big_set, extra, 0);
                                if (!moved) continue;
                                std::set<int> mv(moved->begin(), moved->end());
                                std::vector<int> q_hosts = small_set;
                                for (int x : *moved) q_hosts.push_back(x);
                                std::vector<int> r_hosts;
                                for (int x : big_set)
                                    if (!mv.count(x)) r_hosts.push_back(x);
                                if (static_cast<int>(q_hosts.size()) != f.degree(cs) ||
                                    static_cast<int>(r_hosts.size()) != f.degree(cb))
                                    continue;
                                Partial part(f, chi);
                                bool ok = part.assign(cs, q) && part.assign(cb, r);
                                size_t ai = 0, bi = 0;
                                for (int nb : f.adj[cs]) {
                                    if (!ok) break;
                                    ok = part.assign(nb, q_hosts[ai++]);
                                }
                                for (int nb : f.adj[cb]) {
                                    if (!ok) break;
                                    ok = part.assign(nb, r_hosts[bi++]);
                                }
                                if (!ok || !part.complete()) continue;
                                if (auto res = first_zero_sum(chi, f, {part.embedding()})) {
                                    if (used_transfer) *used_transfer = true;
                                    return res;
                                }
                            }
                        }
            }
        }
    }
    return std::nullopt;
}

std::optional<Embedding> structural_pair_embed(const Forest& f, const Coloring& chi) {
    auto plains = find_switching_structures(f);
    auto gens = find_generalized_switchings(f);
    std::stable_sort(gens.begin(), gens.end(),
                     [](const GeneralizedSwitching& a, const GeneralizedSwitching& b) {
                         return a.kind < b.kind; // Deg2 first
                     });
    int tried = 0;
    for (const auto& s1 : plains)
        for (const auto& s2 : gens) {
            bool disjoint = true;
            for (int a : s1.v)
                for (int b : s2.elements())
                    if (a == b) disjoint = false;
            if (!disjoint) continue;
            if (++tried > 60) return std::nullopt;
            try {
                if (auto r = embed_generalized(f, chi, s1, s2)) return r;
            } catch (const Error&) {
            }
        }
    return std::nullopt;
}

// P7: two degree-2 generalized switchings pivoting at a shared host
std::optional<Embedding> embed_p7_special(const Forest& f, const Coloring& chi) {
    // identify the path order
    int end = -1;
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) == 1) {
            end = v;
            break;
        }
    if (end < 0) return std::nullopt;
    std::vector<int> pathv{end};
    std::vector<bool> seen(f.n, false);
    seen[end] = true;
    while (static_cast<int>(pathv.size()) < f.n) {
        int x = pathv.back();
        bool moved = false;
        for (int y : f.adj[x])
            if (!seen[y]) {
                pathv.push_back(y);
                seen[y] = true;
                moved = true;
                break;
            }
        if (!moved) return std::nullopt;
    }
    if (static_cast<int>(pathv.size()) != 7) return std::nullopt;
    int v1 = pathv[0], v3 = pathv[2], v4 = pathv[3], v5 = pathv[4], v7 = pathv[6];
    // deltas pivot at the host of v4: need chi(h4,h1) != chi(h4,h3) and
    // chi(h4,h7) != chi(h4,h5)
    std::vector<int> hosts(chi.n);
    std::iota(hosts.begin(), hosts.end(), 0);
    for (int h4 : hosts) {
        for (int h1 : hosts) {
            if (h1 == h4) continue;
            for (int h3 : hosts) {
                if (h3 == h4 || h3 == h1 || chi.at(h4, h1) == chi.at(h4, h3)) continue;
                for (int h5 : hosts) {
                    if (h5 == h4 || h5 == h1 || h5 == h3) continue;
                    for (int h7 : hosts) {
                        if (h7 == h4 || h7 == h1 || h7 == h3 || h7 == h5) continue;
                        if (chi.at(h4, h7) == chi.at(h4, h5)) continue;
                        Partial part(f, chi);
                        bool ok = part.assign(v1, h1) && part.assign(v3, h3) &&
                                  part.assign(v4, h4) && part.assign(v5, h5) &&
                                  part.assign(v7, h7);
                        if (!ok || !part.complete()) continue;
                        auto base = part.embedding();
                        auto t1 = transpose_images(base, v1, v3);
                        auto t2 = transpose_images(base, v7, v5);
                        auto t12 = transpose_images(t1, v7, v5);
                        if (auto r = first_zero_sum(chi, f, {base, t1, t2, t12})) return r;
                    }
                }
            }
        }
    }
    return std::nullopt;
}

// Fb = F with `count` leaf children of `receiver` reattached to `donor`
std::optional<Forest> borrow_leaves(const Forest& f, int receiver, int donor, int count) {
    std::vector<int> leaves;
    for (int x : f.adj[receiver])
        if (f.is_leaf(x)) leaves.push_back(x);
    if (static_cast<int>(leaves.size()) < count) return std::nullopt;
    auto es = f.edges;
    for (int i = 0; i < count; ++i) {
        int l = leaves[i];
        auto it = std::find(es.begin(), es.end(),
                            std::pair{std::min(receiver, l), std::max(receiver, l)});
        es.erase(it);
        es.emplace_back(std::min(donor, l), std::max(donor, l));
    }
    try {
        return Forest::from_edges(f.n, std::move(es));
    } catch (const Error&) {
        return std::nullopt;
    }
}

// embed Fb, then move leaves back from donor to receiver in zero-sum triples
std::optional<Embedding> shift_back(const Forest& f, const Forest& fb, const Embedding& phi_b,
                                    const Coloring& chi, int receiver, int donor, int count) {
    Forest cur = fb;
    Embedding phi = phi_b;
    for (int moved = 0; moved < count; moved += 3) {
        try {
            std::tie(cur, phi) = transfer_rewrite(cur, phi, chi, donor, receiver);
        } catch (const Error&) {
            return std::nullopt;
        }
    }
    if (canonical_form(cur) != canonical_form(f)) return std::nullopt;
    // cur and f differ only in which leaves hang on receiver/donor
    std::vector<int> f_r, f_d, c_r, c_d;
    for (int x = 0; x < f.n; ++x) {
        if (f.is_leaf(x) && f.leaf_parent(x) == receiver) f_r.push_back(x);
        if (f.is_leaf(x) && f.leaf_parent(x) == donor) f_d.push_back(x);
        if (cur.is_leaf(x) && cur.leaf_parent(x) == receiver) c_r.push_back(x);
        if (cur.is_leaf(x) && cur.leaf_parent(x) == donor) c_d.push_back(x);
    }
    if (f_r.size() != c_r.size() || f_d.size() != c_d.size()) return std::nullopt;
    // identical leaf buckets up to order; match them positionally
    Embedding out;
    out.map.assign(f.n, -1);
    for (size_t i = 0; i < f_r.size(); ++i) out.map[f_r[i]] = phi.map[c_r[i]];
    for (size_t i = 0; i < f_d.size(); ++i) out.map[f_d[i]] = phi.map[c_d[i]];
    for (int x = 0; x < f.n; ++x)
        if (out.map[x] < 0) out.map[x] = phi.map[x];
    if (!embedding_valid(chi, f, out) || copy_sum(chi, f, out) != 0) return std::nullopt;
    return out;
}

std::optional<Embedding> family_base_embed(const Forest& fb, const Coloring& chi, int depth);

// try leaf-shift reductions: move 3k leaves off some parent, embed, shift back
std::optional<Embedding> reduction_search(const Forest& f, const Coloring& chi, int depth,
                                          bool* used_transfer) {
    if (depth <= 0) return std::nullopt;
    std::vector<int> parents;
    for (int v = 0; v < f.n; ++v) {
        bool has_leaf = false;
        for (int x : f.adj[v])
            if (f.is_leaf(x)) has_leaf = true;
        if (has_leaf) parents.push_back(v);
    }
    int combos = 0;
    for (int receiver : parents) {
        int rc = 0;
        for (int x : f.adj[receiver])
            if (f.is_leaf(x)) rc++;
        for (int donor : parents) {
            if (donor == receiver) continue;
            for (int keep = 0; keep <= 2 && keep < rc; ++keep) {
                int count = rc - keep;
                if (count < 3 || count % 3 != 0) continue;
                if (++combos > 16) return std::nullopt;
                auto fb = borrow_leaves(f, receiver, donor, count);
                if (!fb) continue;
                auto phi_b = family_base_embed(*fb, chi, depth - 1);
                if (!phi_b) continue;
                auto out = shift_back(f, *fb, *phi_b, chi, receiver, donor, count);
                if (out) {
                    if (used_transfer) *used_transfer = true;
                    return out;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<Embedding> family_base_embed(const Forest& fb, const Coloring& chi, int depth) {
    if (auto r = structural_pair_embed(fb, chi)) return r;
    Family fam;
    try {
        fam = recognize_family(fb);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (fam.kind == Family::Kind::B && fam.params[0] == 1 && fam.params[1] == 3 &&
        fam.params[2] == 1)
        if (auto r = embed_p7_special(fb, chi)) return r;
    if (fam.kind == Family::Kind::Star)
        if (auto r = embed_star_family(fb, chi)) return r;
    if (fam.kind == Family::Kind::UnionTwoStars && fam.params[0] % 3 == 0 &&
        fam.params[1] % 3 == 0)
        if (auto r = embed_double_stars_00(fb, fam.params[0], fam.params[1], chi, nullptr))
            return r;
    if (depth > 0)
        if (auto r = reduction_search(fb, chi, depth, nullptr)) return r;
    return std::nullopt;
}

std::optional<Embedding> embed_three_stars(const Forest& f, const std::vector<int>& d,
                                           const Coloring& chi, bool* used_transfer) {
    // d sorted ascending
    bool all0 = d[0] % 3 == 0 && d[1] % 3 == 0 && d[2] % 3 == 0;
    if (all0) {
        // peel the largest star, then recurse on a double star
        int cbig = -1;
        for (int v = 0; v < f.n; ++v)
            if (f.degree(v) == d[2] && (cbig < 0 || f.degree(v) > f.degree(cbig))) cbig = v;
        if (cbig < 0) return std::nullopt;
        for (int u = 0; u < chi.n; ++u) {
            std::vector<int> colors, hosts;
            for (int w = 0; w < chi.n; ++w)
                if (w != u) {
                    colors.push_back(chi.at(u, w));
                    hosts.push_back(w);
                }
            auto pick = egz_find(ResidueSequence(3, colors), d[2]);
            if (!pick) continue;
            Partial part(f, chi);
            if (!part.assign(cbig, u)) continue;
            size_t pi = 0;
            bool ok = true;
            for (int nb : f.adj[cbig]) {
                ok = part.assign(nb, hosts[(*pick)[pi++]]);
                if (!ok) break;
            }
            if (!ok) continue;
            // remaining forest = the two other stars
            std::vector<int> rest_hosts;
            for (int w = 0; w < chi.n; ++w)
                if (!part.used[w]) rest_hosts.push_back(w);
            std::vector<int> rest_verts;
            for (int v = 0; v < f.n; ++v)
                if (part.map[v] == -1) rest_verts.push_back(v);
            std::vector<std::pair<int, int>> rest_edges;
            std::vector<int> remap(f.n, -1);
            for (size_t i = 0; i < rest_verts.size(); ++i) remap[rest_verts[i]] = static_cast<int>(i);
            for (auto& [a, b] : f.edges)
                if (remap[a] >= 0 && remap[b] >= 0) rest_edges.emplace_back(remap[a], remap[b]);
            Forest rest = Forest::from_edges(static_cast<int>(rest_verts.size()), rest_edges);
            auto sub_chi = chi.restrict(rest_hosts);
            auto sub = embed_double_stars_00(rest, d[0], d[1], sub_chi, used_transfer);
            if (!sub) continue;
            for (size_t i = 0; i < rest_verts.size(); ++i)
                part.map[rest_verts[i]] = rest_hosts[sub->map[i]];
            Embedding full{part.map};
            if (embedding_valid(chi, f, full) && copy_sum(chi, f, full) == 0) return full;
        }
        return std::nullopt;
    }
    // residues {0,1,2}: shift the 2-star down to 2 and use the structures
    return std::nullopt; // handled by reduction_search from the dispatcher
}

} // namespace

std::optional<Embedding> embed_family_specific(const Forest& f, const Family& family,
                                               const Coloring& chi) {
    if (chi.n < f.n) throw Error(Errc::HostTooSmall, "host smaller than forest");
    bool used_transfer = false;
    switch (family.kind) {
        case Family::Kind::Star:
            return embed_star_family(f, chi);
        case Family::Kind::Matching:
            return std::nullopt; // exact search handles matchings
        case Family::Kind::OneMod3Regular:
            return embed_one_mod3_regular(f, chi);
        case Family::Kind::UnionTwoStars:
            if (family.params[0] % 3 == 0 && family.params[1] % 3 == 0)
                return embed_double_stars_00(f, family.params[0], family.params[1], chi,
                                             &used_transfer);
            return std::nullopt;
        case Family::Kind::UnionThreeStars: {
            if (auto r = embed_three_stars(f, family.params, chi, &used_transfer)) return r;
            if (auto r = structural_pair_embed(f, chi)) return r;
            return reduction_search(f, chi, 2, &used_transfer);
        }
        case Family::Kind::B: {
            if (family.params[0] == 1 && family.params[1] == 3 && family.params[2] == 1)
                if (auto r = embed_p7_special(f, chi)) return r;
            if (auto r = structural_pair_embed(f, chi)) return r;
            return reduction_search(f, chi, 2, &used_transfer);
        }
        case Family::Kind::BPlusStar:
        case Family::Kind::C:
        case Family::Kind::T: {
            if (auto r = structural_pair_embed(f, chi)) return r;
            return reduction_search(f, chi, 2, &used_transfer);
        }
        case Family::Kind::Path:
        case Family::Kind::Generic:
            return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// dispatch

std::optional<std::pair<Embedding, Strategy>> find_zero_sum_copy(const Forest& f,
                                                                 const Coloring& chi,
                                                                 EngineStats* stats) {
    if (f.edge_count() % 3 != 0)
        throw Error(Errc::EdgeCountNotDivisible, "e(F) = " + std::to_string(f.edge_count()));
    if (chi.n < f.n) throw Error(Errc::HostTooSmall, "host smaller than forest");

    auto wrap = [&](std::optional<Embedding> e, Strategy::Kind k,
                    std::string detail = "") -> std::optional<std::pair<Embedding, Strategy>> {
        if (!e) return std::nullopt;
        if (!embedding_valid(chi, f, *e) || copy_sum(chi, f, *e) != 0) return std::nullopt;
        return std::pair{*e, Strategy{k, std::move(detail)}};
    };

    if (f.edge_count() == 0 || chi.is_monochromatic()) {
        Embedding phi;
        phi.map.resize(f.n);
        std::iota(phi.map.begin(), phi.map.end(), 0);
        return wrap(phi, Strategy::Kind::Monochromatic);
    }

    // no alternating C4: CC structure
    if (!find_alternating_c4(chi)) {
        try {
            if (auto r = wrap(embed_no_alt_c4(f, chi), Strategy::Kind::NoAltC4)) return r;
        } catch (const Error&) {
        }
    } else {
        Family fam{Family::Kind::Generic, {}};
        bool fam_known = false;
        try {
            fam = recognize_family(f);
            fam_known = true;
        } catch (const Error&) {
        }

        // coloring-agnostic family routes
        if (fam_known) {
            if (fam.kind == Family::Kind::Star) {
                try {
                    if (auto r = wrap(embed_family_specific(f, fam, chi),
                                      Strategy::Kind::FamilySpecific, "Star"))
                        return r;
                } catch (const Error&) {
                }
            }
            if (fam.kind == Family::Kind::OneMod3Regular) {
                try {
                    if (auto r = wrap(embed_family_specific(f, fam, chi),
                                      Strategy::Kind::FamilySpecific, "OneMod3Regular"))
                        return r;
                } catch (const Error&) {
                }
            }
            if (fam.kind == Family::Kind::UnionTwoStars && fam.params[0] % 3 == 0 &&
                fam.params[1] % 3 == 0) {
                try {
                    if (auto r = wrap(embed_family_specific(f, fam, chi),
                                      Strategy::Kind::TransferReduced, "UnionTwoStars"))
                        return r;
                } catch (const Error&) {
                }
            }
            if (fam.kind == Family::Kind::UnionThreeStars) {
                bool all0 = true;
                for (int d : fam.params) all0 = all0 && d % 3 == 0;
                if (all0) {
                    try {
                        if (auto r = wrap(embed_family_specific(f, fam, chi),
                                          Strategy::Kind::TransferReduced, "UnionThreeStars"))
                            return r;
                    } catch (const Error&) {
                    }
                }
            }
        }

        // siblings shortcut at host >= n+1
        if (chi.n >= f.n + 1) {
            try {
                if (auto r = wrap(embed_siblings(f, chi), Strategy::Kind::Siblings)) return r;
            } catch (const Error&) {
            }
        }

        // two disjoint structures onto two disjoint alternating cycles
        if (alpha_s(f) == AlphaS::TwoPlus) {
            auto ac = alpha_c4_at_least(chi, 2);
            if (ac.holds) {
                auto ss = find_switching_structures(f);
                for (size_t i = 0; i < ss.size(); ++i) {
                    bool done = false;
                    for (size_t j = i + 1; j < ss.size() && !done; ++j) {
                        bool disjoint = true;
                        for (int a : ss[i].v)
                            for (int b : ss[j].v)
                                if (a == b) disjoint = false;
                        if (!disjoint) continue;
                        try {
                            if (auto r = wrap(embed_two_switch(f, chi, ss[i], ss[j],
                                                               ac.witnesses[0], ac.witnesses[1]),
                                              Strategy::Kind::TwoSwitchTwoC4))
                                return r;
                        } catch (const Error&) {
                        }
                        done = true; // first disjoint pair decides
                    }
                    if (done) break;
                }
            }
        }

        // alpha_C4 analysis
        auto cycles = all_alternating_c4s(chi);
        bool any_nonmono = false;
        for (auto& c : cycles)
            if (!complement_monochromatic(chi, c)) {
                any_nonmono = true;
                break;
            }
        if (any_nonmono) {
            try {
                if (auto r = wrap(embed_one_alt_c4(f, chi), Strategy::Kind::OneAltC4NonMono))
                    return r;
            } catch (const Error&) {
            }
            // generalized switching structures
            {
                auto plains = find_switching_structures(f);
                auto gens = find_generalized_switchings(f);
                std::stable_sort(gens.begin(), gens.end(),
                                 [](const GeneralizedSwitching& a, const GeneralizedSwitching& b) {
                                     return a.kind < b.kind;
                                 });
                int tried = 0;
                for (const auto& s1 : plains) {
                    for (const auto& s2 : gens) {
                        bool disjoint = true;
                        for (int a : s1.v)
                            for (int b : s2.elements())
                                if (a == b) disjoint = false;
                        if (!disjoint) continue;
                        if (++tried > 40) break;
                        try {
                            if (auto r = wrap(embed_generalized(f, chi, s1, s2),
                                              Strategy::Kind::GeneralizedSwitch))
                                return r;
                        } catch (const Error&) {
                        }
                    }
                    if (tried > 40) break;
                }
            }
            if (fam_known && fam.kind != Family::Kind::Generic) {
                try {
                    if (auto r = wrap(embed_family_specific(f, fam, chi),
                                      Strategy::Kind::FamilySpecific, family_name(fam.kind)))
                        return r;
                } catch (const Error&) {
                }
            }
        } else {
            try {
                if (auto r = wrap(embed_one_alt_c4(f, chi), Strategy::Kind::OneAltC4Mono))
                    return r;
            } catch (const Error&) {
            }
        }
    }

    auto fb = backtrack_embed(f, chi, stats);
    if (!fb) return std::nullopt;
    return std::pair{*fb, Strategy{Strategy::Kind::Fallback, ""}};
}

} // namespace zsram
