#include "zsram/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zsram {

std::pair<int, int> edge_by_index(int idx) {
    int v = static_cast<int>((1 + std::sqrt(1.0 + 8.0 * idx)) / 2);
    while (v * (v - 1) / 2 > idx) v--;
    while ((v + 1) * v / 2 <= idx) v++;
    return {idx - v * (v - 1) / 2, v};
}

bool Coloring::is_monochromatic() const {
    for (auto c : colors)
        if (c != colors[0]) return false;
    return true;
}

Coloring Coloring::restrict(const std::vector<int>& verts) const {
    Coloring out(static_cast<int>(verts.size()));
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j)
            out.set(static_cast<int>(i), static_cast<int>(j), at(verts[i], verts[j]));
    return out;
}

Coloring PackedColoring::unpack() const {
    Coloring out(n);
    for (int i = 0; i < num_edges(n); ++i) out.colors[i] = get(i);
    return out;
}

Coloring parse_coloring(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    if (!(in >> tok) || tok != "n") throw Error(Errc::MalformedLine, "expected 'n <N>' header");
    int n;
    if (!(in >> n) || n < 1) throw Error(Errc::MalformedLine, "bad vertex count");
    Coloring chi(n);
    std::vector<bool> seen(num_edges(n), false);
    int u, v, c;
    while (in >> u >> v >> c) {
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw Error(Errc::VertexOutOfRange, "edge " + std::to_string(u) + "-" + std::to_string(v));
        if (c < 0 || c > 2) throw Error(Errc::MalformedLine, "color out of range");
        int idx = edge_index(u, v);
        if (seen[idx]) throw Error(Errc::DuplicateEdge, "edge listed twice");
        seen[idx] = true;
        chi.colors[idx] = static_cast<Color>(c);
    }
    if (!in.eof()) throw Error(Errc::MalformedLine, "trailing garbage");
    for (int i = 0; i < num_edges(n); ++i)
        if (!seen[i]) throw Error(Errc::MalformedLine, "missing edges; all C(n,2) required");
    return chi;
}

std::string write_coloring(const Coloring& chi) {
    std::ostringstream out;
    out << "n " << chi.n << "\n";
    for (int u = 0; u < chi.n; ++u)
        for (int v = u + 1; v < chi.n; ++v)
            out << u << " " << v << " " << int(chi.at(u, v)) << "\n";
    return out.str();
}

int CCPartition::class_of(int v) const {
    for (int i = 0; i < 3; ++i)
        if (std::find(classes[i].begin(), classes[i].end(), v) != classes[i].end()) return i;
    return -1;
}

Color cc_edge_color(int a, int b) {
    if (a == b) return static_cast<Color>(a);
    return sub3(0, a + b); // {a,b} = {i+1,i+2} forces i = -(a+b)
}

Coloring build_cc(int n0, int n1, int n2) {
    int n = n0 + n1 + n2;
    Coloring chi(n);
    auto cls = [&](int v) { return v < n0 ? 0 : (v < n0 + n1 ? 1 : 2); };
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) chi.set(u, v, cc_edge_color(cls(u), cls(v)));
    return chi;
}

bool cc_partition_valid(const Coloring& chi, const CCPartition& p) {
    std::vector<int> cls(chi.n, -1);
    int covered = 0;
    for (int i = 0; i < 3; ++i)
        for (int v : p.classes[i]) {
            if (v < 0 || v >= chi.n || cls[v] >= 0) return false;
            cls[v] = i;
            covered++;
        }
    if (covered != chi.n) return false;
    for (int u = 0; u < chi.n; ++u)
        for (int v = u + 1; v < chi.n; ++v)
            if (chi.at(u, v) != cc_edge_color(cls[u], cls[v])) return false;
    return true;
}

std::optional<CCPartition> detect_cc(const Coloring& chi) {
    std::optional<CCPartition> best;
    auto key = [](const CCPartition& p) {
        return std::tuple(p.classes[0].size(), p.classes[1].size(), p.classes[2].size(),
                          p.classes[0], p.classes[1], p.classes[2]);
    };
    for (int c0 = 0; c0 < 3; ++c0) {
        std::vector<int> cls(chi.n, -1);
        cls[0] = c0;
        bool ok = true;
        for (int v = 1; v < chi.n && ok; ++v) {
            int c = chi.at(0, v);
            if (cls[0] == c) {
                cls[v] = c;
            } else {
                // color c joins V_{c+1} and V_{c+2}
                int a = add3(c, 1), b = add3(c, 2);
                if (cls[0] == a) cls[v] = b;
                else if (cls[0] == b) cls[v] = a;
                else ok = false;
            }
        }
        if (chi.n == 1) cls[0] = c0;
        if (!ok) continue;
        CCPartition p;
        for (int v = 0; v < chi.n; ++v) p.classes[cls[v]].push_back(v);
        if (!cc_partition_valid(chi, p)) continue;
        if (!best || key(p) < key(*best)) best = p;
    }
    return best;
}

Color copy_sum(const Coloring& chi, const Forest& f, const Embedding& phi) {
    if (phi.map.size() != static_cast<size_t>(f.n))
        throw Error(Errc::VertexOutOfRange, "embedding size mismatch");
    std::vector<bool> used(chi.n, false);
    for (int h : phi.map) {
        if (h < 0 || h >= chi.n) throw Error(Errc::VertexOutOfRange, "host " + std::to_string(h));
        if (used[h]) throw Error(Errc::NonInjectiveMap, "host " + std::to_string(h) + " reused");
        used[h] = true;
    }
    int s = 0;
    for (auto& [u, v] : f.edges) s += chi.at(phi.map[u], phi.map[v]);
    return static_cast<Color>(s % 3);
}

bool is_alternating(const Coloring& chi, const AlternatingC4& c) {
    auto& v = c.v;
    return add3(chi.at(v[0], v[1]), chi.at(v[2], v[3])) !=
           add3(chi.at(v[1], v[2]), chi.at(v[3], v[0]));
}

namespace {

// The three 4-cycles on vertices a<b<c<d.
std::array<AlternatingC4, 3> cycles_on(int a, int b, int c, int d) {
    return {AlternatingC4{{a, b, c, d}}, AlternatingC4{{a, b, d, c}}, AlternatingC4{{a, c, b, d}}};
}

} // namespace

std::optional<AlternatingC4> find_alternating_c4(const Coloring& chi,
                                                 const std::set<int>& forbidden) {
    for (int a = 0; a < chi.n; ++a) {
        if (forbidden.count(a)) continue;
        for (int b = a + 1; b < chi.n; ++b) {
            if (forbidden.count(b)) continue;
            for (int c = b + 1; c < chi.n; ++c) {
                if (forbidden.count(c)) continue;
                for (int d = c + 1; d < chi.n; ++d) {
                    if (forbidden.count(d)) continue;
                    for (auto& cyc : cycles_on(a, b, c, d))
                        if (is_alternating(chi, cyc)) return cyc;
                }
            }
        }
    }
    return std::nullopt;
}

std::vector<AlternatingC4> all_alternating_c4s(const Coloring& chi) {
    std::vector<AlternatingC4> out;
    for (int a = 0; a < chi.n; ++a)
        for (int b = a + 1; b < chi.n; ++b)
            for (int c = b + 1; c < chi.n; ++c)
                for (int d = c + 1; d < chi.n; ++d)
                    for (auto& cyc : cycles_on(a, b, c, d))
                        if (is_alternating(chi, cyc)) out.push_back(cyc);
    return out;
}

AlphaC4Result alpha_c4_at_least(const Coloring& chi, int k) {
    AlphaC4Result res;
    if (k == 1) {
        auto c = find_alternating_c4(chi);
        if (c) {
            res.holds = true;
            res.witnesses = {*c};
        }
        return res;
    }
    if (k != 2) throw Error(Errc::PreconditionViolated, "k must be 1 or 2");
    auto all = all_alternating_c4s(chi);
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) {
            bool disjoint = true;
            for (int a : all[i].v)
                for (int b : all[j].v)
                    if (a == b) disjoint = false;
            if (disjoint) {
                res.holds = true;
                res.witnesses = {all[i], all[j]};
                return res;
            }
        }
    return res;
}

VertexPalettes vertex_palettes(const Coloring& chi) {
    if (chi.n < 2) throw Error(Errc::PreconditionViolated, "need n >= 2");
    VertexPalettes out;
    out.palette.resize(chi.n);
    for (int v = 0; v < chi.n; ++v) {
        for (int u = 0; u < chi.n; ++u)
            if (u != v) out.palette[v].insert(chi.at(u, v));
        auto& p = out.palette[v];
        if (p.size() == 1) out.mono.push_back(v);
        else if (p.size() == 3) out.tri.push_back(v);
        else if (p == std::set<Color>{0, 1}) out.v01.push_back(v);
        else if (p == std::set<Color>{0, 2}) out.v02.push_back(v);
        else out.v12.push_back(v);
    }
    return out;
}

std::optional<ExtremalWitness> extremal_coloring(const Forest& f) {
    auto cls = classify_forest(f); // validates divisibility and isolated vertices
    int n = f.n;
    if (cls == ForestClass::Type0) return std::nullopt;
    if (cls == ForestClass::Type1) {
        auto p = degree_profile(f);
        if (p.counts_mod3[0] == 0) return ExtremalWitness{build_cc(n - 1, 1, 0), n};
        return ExtremalWitness{build_cc(n - 2, 2, 0), n};
    }
    // Type 2
    bool star = false;
    {
        int high = 0;
        for (int v = 0; v < n; ++v)
            if (f.degree(v) > 1) high++;
        star = (f.components().size() == 1) && (high <= 1);
    }
    if (star) {
        Coloring chi(n + 1, 0);
        for (int i = 0; i < n + 1; ++i) chi.set(i, (i + 1) % (n + 1), 1);
        return ExtremalWitness{chi, n + 1};
    }
    // 1 mod 3 regular: CC(n-1,2,0) on the K_{n+1} host
    return ExtremalWitness{build_cc(n - 1, 2, 0), n + 1};
}

namespace {

bool rest_monochromatic(const Coloring& chi, const std::set<int>& excluded, Color* color_out) {
    Color c = 0;
    bool any = false;
    for (int u = 0; u < chi.n; ++u) {
        if (excluded.count(u)) continue;
        for (int v = u + 1; v < chi.n; ++v) {
            if (excluded.count(v)) continue;
            if (!any) {
                c = chi.at(u, v);
                any = true;
            } else if (chi.at(u, v) != c) {
                return false;
            }
        }
    }
    if (color_out) *color_out = c;
    return any;
}

std::optional<Color> constant_star(const Coloring& chi, int u, const std::set<int>& excluded) {
    std::optional<Color> c;
    for (int v = 0; v < chi.n; ++v) {
        if (v == u || excluded.count(v)) continue;
        if (!c) c = chi.at(u, v);
        else if (*c != chi.at(u, v)) return std::nullopt;
    }
    return c;
}

} // namespace

std::optional<ColoringPattern> classify_near_mono_pattern(const Coloring& chi) {
    if (chi.n < 7) throw Error(Errc::PreconditionViolated, "need n >= 7");
    auto all = all_alternating_c4s(chi);
    if (all.empty()) return std::nullopt;
    if (alpha_c4_at_least(chi, 2).holds) return std::nullopt;
    for (auto& c : all) {
        std::set<int> excl(c.v.begin(), c.v.end());
        if (!rest_monochromatic(chi, excl, nullptr)) return std::nullopt;
    }

    // pattern 1: monochromatic K_{n-1}
    for (int u = 0; u < chi.n; ++u) {
        Color a;
        if (!rest_monochromatic(chi, {u}, &a)) continue;
        bool varied = false;
        Color first = chi.at(u, u == 0 ? 1 : 0);
        for (int v = 0; v < chi.n; ++v)
            if (v != u && chi.at(u, v) != first) varied = true;
        if (varied) return ColoringPattern{MonoCliqueMinusOne{a, u}};
    }
    // pattern 2: monochromatic K_{n-2} plus two constant-star vertices
    for (int u = 0; u < chi.n; ++u) {
        for (int v = u + 1; v < chi.n; ++v) {
            Color a;
            std::set<int> excl{u, v};
            if (!rest_monochromatic(chi, excl, &a)) continue;
            auto cu = constant_star(chi, u, excl);
            auto cv = constant_star(chi, v, excl);
            if (!cu || !cv) continue;
            Color uv = chi.at(u, v);
            if (*cu == a || *cv == a) continue;
            if (*cu == *cv) {
                if (uv == *cu) return ColoringPattern{TwoOutside_AllSecond{a, *cu, u, v}};
                if (uv == a) return ColoringPattern{TwoOutside_SecondExceptUV{a, *cu, u, v}};
                continue;
            }
            // 2(c): all edges at u color b including uv; v's other edges color c
            if (uv == *cu) return ColoringPattern{TwoOutside_TwoColors{a, *cu, *cv, u, v}};
            if (uv == *cv) return ColoringPattern{TwoOutside_TwoColors{a, *cv, *cu, v, u}};
        }
    }
    // pattern 3: monochromatic apart from a triangle
    {
        std::array<int, 3> count{0, 0, 0};
        for (auto c : chi.colors) count[c]++;
        Color a = 0;
        for (int c = 1; c < 3; ++c)
            if (count[c] > count[a]) a = static_cast<Color>(c);
        std::set<int> touched;
        for (int u = 0; u < chi.n; ++u)
            for (int v = u + 1; v < chi.n; ++v)
                if (chi.at(u, v) != a) {
                    touched.insert(u);
                    touched.insert(v);
                }
        if (!touched.empty() && touched.size() <= 3) {
            std::array<int, 3> tri{-1, -1, -1};
            int i = 0;
            for (int t : touched) tri[i++] = t;
            for (int v = 0; i < 3 && v < chi.n; ++v)
                if (!touched.count(v)) tri[i++] = v;
            return ColoringPattern{MonoExceptTriangle{a, tri}};
        }
    }
    return std::nullopt;
}

std::optional<AabbOutcome> detect_aabb_structure(const Coloring& chi) {
    if (chi.n < 5) throw Error(Errc::PreconditionViolated, "need m >= 5");
    for (int v = 0; v < chi.n; ++v) {
        std::array<int, 3> cnt{0, 0, 0};
        for (int u = 0; u < chi.n; ++u)
            if (u != v) cnt[chi.at(u, v)]++;
        int colors_used = 0, minority = chi.n;
        for (int c = 0; c < 3; ++c)
            if (cnt[c] > 0) {
                colors_used++;
                minority = std::min(minority, cnt[c]);
            }
        if (colors_used >= 3)
            throw Error(Errc::PreconditionViolated, "trichromatic vertex " + std::to_string(v));
        if (colors_used == 2 && minority > 1)
            throw Error(Errc::PreconditionViolated, "aabb pattern at vertex " + std::to_string(v));
    }
    for (int a = 0; a < 3; ++a) {
        // non-a edges must form a matching
        std::vector<int> deg(chi.n, 0);
        bool ok = true;
        for (int u = 0; u < chi.n && ok; ++u)
            for (int v = u + 1; v < chi.n && ok; ++v)
                if (chi.at(u, v) != a) {
                    if (++deg[u] > 1 || ++deg[v] > 1) ok = false;
                }
        if (ok) return AabbOutcome{ComplementOfMatching{static_cast<Color>(a)}};
    }
    for (int v = 0; v < chi.n; ++v) {
        Color c;
        if (rest_monochromatic(chi, {v}, &c)) return AabbOutcome{MonoKm1{v}};
    }
    return std::nullopt;
}

std::optional<CornerC4> find_unbalanced_corner_c4(const Coloring& chi,
                                                  const std::set<int>& forbidden) {
    std::vector<int> avail;
    for (int v = 0; v < chi.n; ++v)
        if (!forbidden.count(v)) avail.push_back(v);
    int m = static_cast<int>(avail.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
                    int x = avail[i], y = avail[j], z = avail[k], t = avail[l];
                    if (add3(chi.at(x, y), chi.at(y, z)) != add3(chi.at(z, t), chi.at(t, x)))
                        return CornerC4{{x, y, z, t}};
                }
    return std::nullopt;
}

std::optional<PivotWitness> find_pivot_vertex(const Coloring& chi, const AlternatingC4& c) {
    std::set<int> on(c.v.begin(), c.v.end());
    for (int u : c.v)
        for (int v = 0; v < chi.n; ++v) {
            if (on.count(v)) continue;
            for (int w = v + 1; w < chi.n; ++w) {
                if (on.count(w)) continue;
                if (chi.at(u, v) != chi.at(u, w)) return PivotWitness{u, v, w};
            }
        }
    return std::nullopt;
}

} // namespace zsram
