#include "zsram/forest.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace zsram {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::MalformedLine: return "MalformedLine";
        case Errc::SelfLoop: return "SelfLoop";
        case Errc::DuplicateEdge: return "DuplicateEdge";
        case Errc::CycleDetected: return "CycleDetected";
        case Errc::EdgeCountNotDivisible: return "EdgeCountNotDivisible";
        case Errc::HasIsolatedVertex: return "HasIsolatedVertex";
        case Errc::PreconditionViolated: return "PreconditionViolated";
        case Errc::NonInjectiveMap: return "NonInjectiveMap";
        case Errc::VertexOutOfRange: return "VertexOutOfRange";
        case Errc::ModulusMismatch: return "ModulusMismatch";
        case Errc::MNotDivisible: return "MNotDivisible";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::HypothesisViolated: return "HypothesisViolated";
        case Errc::AltC4Present: return "AltC4Present";
        case Errc::WitnessMismatch: return "WitnessMismatch";
        case Errc::InvalidSwap: return "InvalidSwap";
        case Errc::HostTooSmall: return "HostTooSmall";
        case Errc::NoWitnessNeeded: return "NoWitnessNeeded";
        case Errc::NotFound: return "NotFound";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

} // namespace

Forest Forest::from_edges(int n, std::vector<std::pair<int, int>> es) {
    for (auto& [u, v] : es) {
        if (u == v) throw Error(Errc::SelfLoop, "edge " + std::to_string(u) + "-" + std::to_string(v));
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw Error(Errc::VertexOutOfRange, "edge endpoint outside 0.." + std::to_string(n - 1));
    }
    std::sort(es.begin(), es.end());
    if (std::adjacent_find(es.begin(), es.end()) != es.end())
        throw Error(Errc::DuplicateEdge, "repeated edge");
    Dsu dsu(n);
    for (auto& [u, v] : es)
        if (!dsu.unite(u, v)) throw Error(Errc::CycleDetected, "input is not a forest");
    Forest f;
    f.n = n;
    f.edges = std::move(es);
    f.adj.assign(n, {});
    for (auto& [u, v] : f.edges) {
        f.adj[u].push_back(v);
        f.adj[v].push_back(u);
    }
    for (auto& a : f.adj) std::sort(a.begin(), a.end());
    return f;
}

bool Forest::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n || v >= n) return false;
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

std::vector<std::vector<int>> Forest::components() const {
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        int id = static_cast<int>(out.size());
        out.emplace_back();
        std::vector<int> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            out[id].push_back(x);
            for (int y : adj[x])
                if (comp[y] < 0) {
                    comp[y] = id;
                    stack.push_back(y);
                }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

Forest parse_forest(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<int, int>> edges;
    int declared_n = -1;
    bool first = true;
    int max_idx = -1;
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue; // blank
        if (first && tok == "n") {
            first = false;
            if (!(ls >> declared_n) || declared_n < 0)
                throw Error(Errc::MalformedLine, "bad vertex count line");
            std::string rest;
            if (ls >> rest) throw Error(Errc::MalformedLine, "trailing tokens: " + line);
            continue;
        }
        first = false;
        int u, v;
        try {
            size_t used = 0;
            u = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(Errc::MalformedLine, "expected integer, got '" + tok + "'");
        }
        if (!(ls >> v)) throw Error(Errc::MalformedLine, "missing second endpoint: " + line);
        std::string rest;
        if (ls >> rest) throw Error(Errc::MalformedLine, "trailing tokens: " + line);
        if (u < 0 || v < 0) throw Error(Errc::MalformedLine, "negative vertex index");
        edges.emplace_back(u, v);
        max_idx = std::max({max_idx, u, v});
    }
    int n = declared_n >= 0 ? declared_n : max_idx + 1;
    if (max_idx >= n) throw Error(Errc::VertexOutOfRange, "edge endpoint exceeds declared count");
    return Forest::from_edges(n, std::move(edges));
}

std::string write_forest(const Forest& f) {
    std::ostringstream out;
    out << "n " << f.n << "\n";
    for (auto& [u, v] : f.edges) out << u << " " << v << "\n";
    return out.str();
}

DegreeProfile degree_profile(const Forest& f) {
    DegreeProfile p;
    for (int v = 0; v < f.n; ++v) {
        int d = f.degree(v);
        p.counts_mod3[d % 3]++;
        if (d == 0) p.isolated_count++;
        p.max_degree = std::max(p.max_degree, d);
    }
    return p;
}

int type_index(ForestClass c) {
    switch (c) {
        case ForestClass::Type0: return 0;
        case ForestClass::Type1: return 1;
        case ForestClass::Type2: return 2;
    }
    return 0;
}

namespace {

bool is_star_graph(const Forest& f) {
    if (f.n < 2 || f.edge_count() != f.n - 1) return false;
    int high = 0;
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) > 1) high++;
    // S1 = K2 has no high-degree vertex; larger stars have exactly one.
    return f.n == 2 ? true : (high == 1 && f.edge_count() == f.n - 1);
}

bool is_one_mod3_regular(const Forest& f) {
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) % 3 != 1) return false;
    return f.n > 0;
}

} // namespace

ForestClass classify_forest(const Forest& f) {
    if (f.edge_count() % 3 != 0)
        throw Error(Errc::EdgeCountNotDivisible, "e(F) = " + std::to_string(f.edge_count()));
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) == 0) throw Error(Errc::HasIsolatedVertex, "vertex " + std::to_string(v));
    if (is_one_mod3_regular(f) || is_star_graph(f)) return ForestClass::Type2;
    auto p = degree_profile(f);
    bool no_zero = p.counts_mod3[0] == 0;
    bool one_zero_rest_one = p.counts_mod3[0] == 1 && p.counts_mod3[2] == 0;
    if (no_zero || one_zero_rest_one) return ForestClass::Type1;
    return ForestClass::Type0;
}

bool profile_is_type0(const Forest& f) {
    auto p = degree_profile(f);
    return p.counts_mod3[0] >= 2 || (p.counts_mod3[0] >= 1 && p.counts_mod3[2] >= 1);
}

const char* family_name(Family::Kind k) {
    switch (k) {
        case Family::Kind::Star: return "Star";
        case Family::Kind::Matching: return "Matching";
        case Family::Kind::OneMod3Regular: return "OneMod3Regular";
        case Family::Kind::UnionTwoStars: return "UnionTwoStars";
        case Family::Kind::UnionThreeStars: return "UnionThreeStars";
        case Family::Kind::B: return "B";
        case Family::Kind::BPlusStar: return "BPlusStar";
        case Family::Kind::C: return "C";
        case Family::Kind::T: return "T";
        case Family::Kind::Path: return "Path";
        case Family::Kind::Generic: return "Generic";
    }
    return "?";
}

namespace {

Forest induced(const Forest& f, const std::vector<int>& verts) {
    std::vector<int> idx(f.n, -1);
    for (size_t i = 0; i < verts.size(); ++i) idx[verts[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> es;
    for (auto& [u, v] : f.edges)
        if (idx[u] >= 0 && idx[v] >= 0) es.emplace_back(idx[u], idx[v]);
    return Forest::from_edges(static_cast<int>(verts.size()), std::move(es));
}

// star component -> number of edges, else nullopt
std::optional<int> star_edges(const Forest& comp) {
    return is_star_graph(comp) ? std::optional<int>(comp.edge_count()) : std::nullopt;
}

// parents = vertices with at least one leaf child
std::vector<int> parent_vertices(const Forest& f) {
    std::vector<int> out;
    for (int v = 0; v < f.n; ++v) {
        bool has_leaf_child = false;
        for (int u : f.adj[v])
            if (f.is_leaf(u)) has_leaf_child = true;
        if (has_leaf_child && f.degree(v) >= 1) out.push_back(v);
    }
    return out;
}

int leaf_children_count(const Forest& f, int v) {
    int c = 0;
    for (int u : f.adj[v])
        if (f.is_leaf(u)) c++;
    return c;
}

std::optional<std::vector<int>> tree_path(const Forest& f, int a, int b) {
    std::vector<int> prev(f.n, -2);
    std::vector<int> stack{a};
    prev[a] = -1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (x == b) break;
        for (int y : f.adj[x])
            if (prev[y] == -2) {
                prev[y] = x;
                stack.push_back(y);
            }
    }
    if (prev[b] == -2) return std::nullopt;
    std::vector<int> path;
    for (int x = b; x != -1; x = prev[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

// B(d1,n,d2) with d1 <= d2, or nullopt. comp must be a connected tree.
std::optional<std::array<int, 3>> match_b_tree(const Forest& t) {
    auto parents = parent_vertices(t);
    if (parents.size() != 2) return std::nullopt;
    for (int v = 0; v < t.n; ++v) {
        if (t.degree(v) <= 1) continue;
        if (v != parents[0] && v != parents[1] && t.degree(v) != 2) return std::nullopt;
    }
    auto path = tree_path(t, parents[0], parents[1]);
    if (!path) return std::nullopt;
    int inner = static_cast<int>(path->size()) - 2;
    // internal degree-2 vertices must all lie on the parent path
    int expected = 2 + inner + leaf_children_count(t, parents[0]) + leaf_children_count(t, parents[1]);
    if (expected != t.n) return std::nullopt;
    int d1 = leaf_children_count(t, parents[0]);
    int d2 = leaf_children_count(t, parents[1]);
    if (d1 > d2) std::swap(d1, d2);
    if (d1 < 1) return std::nullopt;
    return std::array<int, 3>{d1, inner, d2};
}

// C(d1,n1,d2,n2,d3): three collinear parents. Returns canonical params.
std::optional<std::array<int, 5>> match_c_tree(const Forest& t) {
    auto parents = parent_vertices(t);
    if (parents.size() != 3) return std::nullopt;
    for (int v = 0; v < t.n; ++v) {
        if (t.degree(v) <= 1) continue;
        bool is_parent = std::find(parents.begin(), parents.end(), v) != parents.end();
        if (!is_parent && t.degree(v) != 2) return std::nullopt;
    }
    // find the middle parent: lies on the path joining the other two
    for (int mid = 0; mid < 3; ++mid) {
        int a = parents[(mid + 1) % 3], b = parents[(mid + 2) % 3];
        auto path = tree_path(t, a, b);
        if (!path) return std::nullopt;
        if (std::find(path->begin(), path->end(), parents[mid]) == path->end()) continue;
        auto p1 = tree_path(t, a, parents[mid]);
        auto p2 = tree_path(t, parents[mid], b);
        int n1 = static_cast<int>(p1->size()) - 2;
        int n2 = static_cast<int>(p2->size()) - 2;
        int d1 = leaf_children_count(t, a);
        int d2 = leaf_children_count(t, parents[mid]);
        int d3 = leaf_children_count(t, b);
        int expected = 3 + n1 + n2 + d1 + d2 + d3;
        if (expected != t.n) return std::nullopt;
        if (d1 < 1 || d2 < 1 || d3 < 1) return std::nullopt;
        std::array<int, 5> fwd{d1, n1, d2, n2, d3};
        std::array<int, 5> rev{d3, n2, d2, n1, d1};
        return std::min(fwd, rev);
    }
    return std::nullopt;
}

// T(d1,n1,d2,n2,d3,n3): junction of degree 3, parents at the ends.
std::optional<std::array<int, 6>> match_t_tree(const Forest& t) {
    auto parents = parent_vertices(t);
    if (parents.size() != 3) return std::nullopt;
    int junction = -1;
    for (int v = 0; v < t.n; ++v) {
        if (t.degree(v) <= 1) continue;
        bool is_parent = std::find(parents.begin(), parents.end(), v) != parents.end();
        if (is_parent) continue;
        if (t.degree(v) == 2) continue;
        if (t.degree(v) == 3 && junction < 0) {
            junction = v;
            continue;
        }
        return std::nullopt;
    }
    if (junction < 0) return std::nullopt;
    std::array<std::pair<int, int>, 3> legs; // (d_i, n_i)
    int total = 1;
    for (int i = 0; i < 3; ++i) {
        auto path = tree_path(t, junction, parents[i]);
        if (!path) return std::nullopt;
        int ni = static_cast<int>(path->size()) - 2;
        int di = leaf_children_count(t, parents[i]);
        if (di < 1) return std::nullopt;
        legs[i] = {di, ni};
        total += 1 + ni + di;
    }
    if (total != t.n) return std::nullopt;
    std::sort(legs.begin(), legs.end());
    return std::array<int, 6>{legs[0].first, legs[0].second, legs[1].first,
                              legs[1].second, legs[2].first, legs[2].second};
}

bool is_path_graph(const Forest& t) {
    if (t.n < 2) return false;
    int leaves = 0;
    for (int v = 0; v < t.n; ++v) {
        if (t.degree(v) == 1) leaves++;
        else if (t.degree(v) != 2) return false;
    }
    return leaves == 2 && t.edge_count() == t.n - 1;
}

} // namespace

Family recognize_family(const Forest& f) {
    if (f.edge_count() % 3 != 0)
        throw Error(Errc::EdgeCountNotDivisible, "e(F) = " + std::to_string(f.edge_count()));
    for (int v = 0; v < f.n; ++v)
        if (f.degree(v) == 0) throw Error(Errc::HasIsolatedVertex, "vertex " + std::to_string(v));

    auto comps = f.components();
    std::vector<Forest> parts;
    parts.reserve(comps.size());
    for (auto& c : comps) parts.push_back(induced(f, c));

    if (parts.size() == 1 && is_star_graph(parts[0]))
        return {Family::Kind::Star, {parts[0].edge_count()}};

    bool all_edges = true;
    for (auto& p : parts) all_edges = all_edges && p.n == 2;
    if (all_edges) return {Family::Kind::Matching, {static_cast<int>(parts.size())}};

    if (is_one_mod3_regular(f)) return {Family::Kind::OneMod3Regular, {}};

    if (parts.size() == 2) {
        auto s0 = star_edges(parts[0]), s1 = star_edges(parts[1]);
        if (s0 && s1) {
            int a = *s0, b = *s1;
            if (a > b) std::swap(a, b);
            return {Family::Kind::UnionTwoStars, {a, b}};
        }
    }
    if (parts.size() == 3) {
        auto s0 = star_edges(parts[0]), s1 = star_edges(parts[1]), s2 = star_edges(parts[2]);
        if (s0 && s1 && s2) {
            std::array<int, 3> d{*s0, *s1, *s2};
            std::sort(d.begin(), d.end());
            return {Family::Kind::UnionThreeStars, {d[0], d[1], d[2]}};
        }
    }
    if (parts.size() == 1) {
        if (auto b = match_b_tree(parts[0])) return {Family::Kind::B, {(*b)[0], (*b)[1], (*b)[2]}};
    }
    if (parts.size() == 2) {
        for (int i = 0; i < 2; ++i) {
            auto b = match_b_tree(parts[i]);
            auto s = star_edges(parts[1 - i]);
            if (b && s)
                return {Family::Kind::BPlusStar, {(*b)[0], (*b)[1], (*b)[2], *s}};
        }
    }
    if (parts.size() == 1) {
        if (auto c = match_c_tree(parts[0]))
            return {Family::Kind::C, {(*c)[0], (*c)[1], (*c)[2], (*c)[3], (*c)[4]}};
        if (auto t = match_t_tree(parts[0]))
            return {Family::Kind::T,
                    {(*t)[0], (*t)[1], (*t)[2], (*t)[3], (*t)[4], (*t)[5]}};
        if (is_path_graph(parts[0])) return {Family::Kind::Path, {parts[0].n}};
    }
    return {Family::Kind::Generic, {}};
}

namespace {

SwitchingStructure canonical_structure(SwitchingStructure s) {
    std::array<int, 4> rev{s.v[3], s.v[2], s.v[1], s.v[0]};
    if (rev < s.v) s.v = rev;
    return s;
}

} // namespace

std::vector<SwitchingStructure> find_switching_structures(const Forest& f) {
    // structures performing the same rewrite are counted once
    auto rewrite_key = [](const SwitchingStructure& s) {
        auto e = [](int a, int b) { return std::pair{std::min(a, b), std::max(a, b)}; };
        auto d1 = e(s.v[0], s.v[1]), d2 = e(s.v[2], s.v[3]);
        if (d2 < d1) std::swap(d1, d2);
        auto a1 = e(s.v[0], s.v[2]), a2 = e(s.v[1], s.v[3]);
        if (a2 < a1) std::swap(a1, a2);
        return std::tuple(d1, d2, a1, a2);
    };
    std::set<std::tuple<std::pair<int, int>, std::pair<int, int>, std::pair<int, int>,
                        std::pair<int, int>>>
        seen;
    std::vector<SwitchingStructure> out;
    auto add = [&](SwitchingStructure s) {
        s = canonical_structure(s);
        if (seen.insert(rewrite_key(s)).second) out.push_back(s);
    };
    // InnerPath: v1v2v3v4 a path, deg(v2) = deg(v3) = 2
    for (int v2 = 0; v2 < f.n; ++v2) {
        if (f.degree(v2) != 2) continue;
        for (int v3 : f.adj[v2]) {
            if (f.degree(v3) != 2) continue;
            for (int v1 : f.adj[v2]) {
                if (v1 == v3) continue;
                for (int v4 : f.adj[v3]) {
                    if (v4 == v2 || v4 == v1) continue;
                    add({SwitchingStructure::Kind::InnerPath, {v1, v2, v3, v4}});
                }
            }
        }
    }
    // TwoParents: v2, v3 leaves with parents v1 != v4
    for (int v2 = 0; v2 < f.n; ++v2) {
        if (!f.is_leaf(v2)) continue;
        int v1 = f.leaf_parent(v2);
        for (int v3 = v2 + 1; v3 < f.n; ++v3) {
            if (!f.is_leaf(v3)) continue;
            int v4 = f.leaf_parent(v3);
            if (v4 == v1 || v4 == v2 || v3 == v1) continue;
            add({SwitchingStructure::Kind::TwoParents, {v1, v2, v3, v4}});
        }
    }
    std::sort(out.begin(), out.end(), [](const SwitchingStructure& a, const SwitchingStructure& b) {
        auto ka = a.v, kb = b.v;
        std::sort(ka.begin(), ka.end());
        std::sort(kb.begin(), kb.end());
        if (ka != kb) return ka < kb;
        if (a.v != b.v) return a.v < b.v;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return out;
}

AlphaS alpha_s(const Forest& f) {
    auto ss = find_switching_structures(f);
    if (ss.empty()) return AlphaS::Zero;
    for (size_t i = 0; i < ss.size(); ++i) {
        for (size_t j = i + 1; j < ss.size(); ++j) {
            bool disjoint = true;
            for (int a : ss[i].v)
                for (int b : ss[j].v)
                    if (a == b) disjoint = false;
            if (disjoint) return AlphaS::TwoPlus;
        }
    }
    return AlphaS::One;
}

std::vector<int> GeneralizedSwitching::elements() const {
    if (kind == Kind::Deg2) return {l, u};
    return {l, u, v, w};
}

std::vector<GeneralizedSwitching> find_generalized_switchings(const Forest& f) {
    std::vector<GeneralizedSwitching> out;
    for (int u = 0; u < f.n; ++u) {
        if (f.degree(u) == 2) {
            int a = f.adj[u][0], b = f.adj[u][1];
            for (auto [p, v] : {std::pair{a, b}, std::pair{b, a}}) {
                if (f.is_leaf(p))
                    out.push_back({GeneralizedSwitching::Kind::Deg2, p, u, v, -1});
                for (int l : f.adj[p])
                    if (f.is_leaf(l) && l != u)
                        out.push_back({GeneralizedSwitching::Kind::Deg2, l, u, v, -1});
            }
        } else if (f.degree(u) == 3) {
            auto nb = f.adj[u];
            for (int pi = 0; pi < 3; ++pi) {
                int p = nb[pi];
                int v = nb[(pi + 1) % 3], w = nb[(pi + 2) % 3];
                if (v > w) std::swap(v, w);
                if (f.is_leaf(p))
                    out.push_back({GeneralizedSwitching::Kind::Deg3, p, u, v, w});
                for (int l : f.adj[p])
                    if (f.is_leaf(l) && l != u)
                        out.push_back({GeneralizedSwitching::Kind::Deg3, l, u, v, w});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const GeneralizedSwitching& a, const GeneralizedSwitching& b) {
        return std::tuple(a.kind, a.l, a.u, a.v, a.w) < std::tuple(b.kind, b.l, b.u, b.v, b.w);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool six_tuple_valid(const Forest& f, const SixTuple& t) {
    std::array<int, 6> all{t.structure.v[0], t.structure.v[1], t.structure.v[2],
                           t.structure.v[3], t.u, t.v};
    std::set<int> distinct(all.begin(), all.end());
    if (distinct.size() != 6) return false;
    for (int x : all)
        if (x < 0 || x >= f.n) return false;
    // (i) switching structure
    auto s = t.structure;
    bool valid_structure = false;
    if (s.kind == SwitchingStructure::Kind::InnerPath) {
        valid_structure = f.has_edge(s.v[0], s.v[1]) && f.has_edge(s.v[1], s.v[2]) &&
                          f.has_edge(s.v[2], s.v[3]) && f.degree(s.v[1]) == 2 &&
                          f.degree(s.v[2]) == 2;
    } else {
        valid_structure = f.is_leaf(s.v[1]) && f.leaf_parent(s.v[1]) == s.v[0] &&
                          f.is_leaf(s.v[2]) && f.leaf_parent(s.v[2]) == s.v[3] &&
                          s.v[0] != s.v[3];
    }
    if (!valid_structure) return false;
    // (ii) u, v jointly adjacent or non-adjacent to every structure vertex
    for (int x : s.v)
        if (f.has_edge(t.u, x) != f.has_edge(t.v, x)) return false;
    // (iii) degrees differ mod 3
    return f.degree(t.u) % 3 != f.degree(t.v) % 3;
}

namespace {

bool is_excluded_six_tuple_family(const Forest& f) {
    auto p = degree_profile(f);
    if (p.isolated_count > 0) return false; // padded forests never match
    Family fam = recognize_family(f);
    switch (fam.kind) {
        case Family::Kind::UnionTwoStars: return true;
        case Family::Kind::Star: return false;
        case Family::Kind::B: return fam.params[1] <= 1;
        case Family::Kind::C:
            return fam.params[1] == 0 && fam.params[2] == 1 && fam.params[3] == 0;
        default: return false;
    }
}

} // namespace

std::optional<SixTuple> find_six_tuple(const Forest& f) {
    if (!profile_is_type0(f))
        throw Error(Errc::PreconditionViolated, "forest is not type 0");
    if (f.edge_count() % 3 != 0)
        throw Error(Errc::EdgeCountNotDivisible, "e(F) = " + std::to_string(f.edge_count()));
    if (is_excluded_six_tuple_family(f))
        throw Error(Errc::PreconditionViolated, "excluded family");

    auto comps = f.components();
    std::vector<std::vector<int>> nontrivial;
    for (auto& c : comps)
        if (c.size() > 1) nontrivial.push_back(c);

    // >= 3 components: leaves of two components plus (x, l) in a third
    if (nontrivial.size() >= 3) {
        for (size_t ci = 0; ci < nontrivial.size(); ++ci) {
            int x = -1, l = -1;
            for (int cand : nontrivial[ci]) {
                if (f.degree(cand) % 3 == 1) continue;
                for (int leaf : nontrivial[ci])
                    if (f.is_leaf(leaf) && leaf != cand) {
                        x = cand;
                        l = leaf;
                        break;
                    }
                if (x >= 0) break;
            }
            if (x < 0) continue;
            std::array<int, 2> others{-1, -1};
            std::array<int, 2> leaf{-1, -1}, par{-1, -1};
            int found = 0;
            for (size_t cj = 0; cj < nontrivial.size() && found < 2; ++cj) {
                if (cj == ci) continue;
                for (int cand : nontrivial[cj])
                    if (f.is_leaf(cand)) {
                        leaf[found] = cand;
                        par[found] = f.leaf_parent(cand);
                        others[found] = static_cast<int>(cj);
                        found++;
                        break;
                    }
            }
            if (found == 2) {
                SixTuple t;
                t.structure = {SwitchingStructure::Kind::TwoParents,
                               {par[0], leaf[0], leaf[1], par[1]}};
                t.u = x;
                t.v = l;
                if (six_tuple_valid(f, t)) return t;
            }
        }
    }

    // complete scan: structures in canonical order, (u, v) pairs lex
    auto structures = find_switching_structures(f);
    for (const auto& s : structures) {
        for (int u = 0; u < f.n; ++u) {
            if (std::find(s.v.begin(), s.v.end(), u) != s.v.end()) continue;
            for (int v = u + 1; v < f.n; ++v) {
                if (std::find(s.v.begin(), s.v.end(), v) != s.v.end()) continue;
                SixTuple t{s, u, v};
                if (six_tuple_valid(f, t)) return t;
                t = {s, v, u};
                if (six_tuple_valid(f, t)) return t;
            }
        }
    }
    return std::nullopt;
}

std::optional<std::array<int, 3>> find_sibling_leaves(const Forest& f) {
    for (int p = 0; p < f.n; ++p) {
        int first = -1;
        for (int u : f.adj[p]) {
            if (!f.is_leaf(u)) continue;
            if (first < 0) {
                first = u;
            } else {
                return std::array<int, 3>{first, u, p};
            }
        }
    }
    return std::nullopt;
}

namespace {

std::string ahu_encode(const Forest& f, int root, int parent) {
    std::vector<std::string> child;
    for (int y : f.adj[root])
        if (y != parent) child.push_back(ahu_encode(f, y, root));
    std::sort(child.begin(), child.end());
    std::string s = "(";
    for (auto& c : child) s += c;
    s += ")";
    return s;
}

std::vector<int> tree_centers(const Forest& f, const std::vector<int>& comp) {
    if (comp.size() == 1) return comp;
    std::map<int, int> deg;
    for (int v : comp) deg[v] = f.degree(v);
    std::vector<int> layer;
    for (int v : comp)
        if (deg[v] <= 1) layer.push_back(v);
    size_t removed = 0;
    std::vector<int> current = layer;
    std::map<int, bool> gone;
    while (removed + current.size() < comp.size()) {
        std::vector<int> next;
        for (int v : current) gone[v] = true;
        removed += current.size();
        for (int v : current)
            for (int y : f.adj[v])
                if (!gone[y] && --deg[y] == 1) next.push_back(y);
        current = next;
    }
    std::sort(current.begin(), current.end());
    return current;
}

} // namespace

std::string canonical_form(const Forest& f) {
    std::vector<std::string> comp_forms;
    for (auto& comp : f.components()) {
        auto centers = tree_centers(f, comp);
        std::string best;
        for (int c : centers) {
            auto s = ahu_encode(f, c, -1);
            if (best.empty() || s < best) best = s;
        }
        comp_forms.push_back(best);
    }
    std::sort(comp_forms.begin(), comp_forms.end());
    std::string out;
    for (auto& s : comp_forms) out += s;
    return out;
}

Forest apply_switching_rewrite(const Forest& f, const SwitchingStructure& s) {
    auto es = f.edges;
    auto del = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        auto it = std::find(es.begin(), es.end(), std::pair{a, b});
        if (it == es.end()) throw Error(Errc::InvalidSwap, "missing structure edge");
        es.erase(it);
    };
    auto ins = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        es.emplace_back(a, b);
    };
    del(s.v[0], s.v[1]);
    del(s.v[2], s.v[3]);
    ins(s.v[0], s.v[2]);
    ins(s.v[1], s.v[3]);
    return Forest::from_edges(f.n, std::move(es));
}

Forest apply_generalized_rewrite(const Forest& f, const GeneralizedSwitching& s) {
    auto es = f.edges;
    auto del = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        auto it = std::find(es.begin(), es.end(), std::pair{a, b});
        if (it == es.end()) throw Error(Errc::InvalidSwap, "missing structure edge");
        es.erase(it);
    };
    auto ins = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        es.emplace_back(a, b);
    };
    del(s.u, s.v);
    ins(s.l, s.v);
    if (s.kind == GeneralizedSwitching::Kind::Deg3) {
        del(s.u, s.w);
        ins(s.l, s.w);
    }
    return Forest::from_edges(f.n, std::move(es));
}

} // namespace zsram
