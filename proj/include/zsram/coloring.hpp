#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "zsram/error.hpp"
#include "zsram/forest.hpp"

namespace zsram {

using Color = std::uint8_t; // element of Z3

inline Color add3(int a, int b) { return static_cast<Color>(((a + b) % 3 + 3) % 3); }
inline Color sub3(int a, int b) { return static_cast<Color>(((a - b) % 3 + 3) % 3); }
inline Color mul3(int a, int b) { return static_cast<Color>(((a * b) % 3 + 3) % 3); }

// Edge index in colex order: edges of K_m form a prefix of K_n for m <= n.
inline int edge_index(int u, int v) {
    if (u > v) std::swap(u, v);
    return v * (v - 1) / 2 + u;
}
inline int num_edges(int n) { return n * (n - 1) / 2; }
// inverse of edge_index
std::pair<int, int> edge_by_index(int idx);

/// Total Z3 coloring of the edges of K_n.
struct Coloring {
    int n = 0;
    std::vector<Color> colors; // size n(n-1)/2, colex-indexed

    Coloring() = default;
    explicit Coloring(int n_, Color fill = 0) : n(n_), colors(num_edges(n_), fill) {}

    Color at(int u, int v) const { return colors[edge_index(u, v)]; }
    void set(int u, int v, Color c) { colors[edge_index(u, v)] = c; }

    bool is_monochromatic() const;
    // restriction to a vertex subset (remapped to 0..k-1, order preserved)
    Coloring restrict(const std::vector<int>& verts) const;
};

// Two-bit-per-edge packed form for bulk random generation.
struct PackedColoring {
    int n = 0;
    std::vector<std::uint64_t> words;

    explicit PackedColoring(int n_) : n(n_), words((num_edges(n_) + 31) / 32, 0) {}
    Color get(int idx) const { return (words[idx >> 5] >> ((idx & 31) * 2)) & 3; }
    void set(int idx, Color c) {
        auto& w = words[idx >> 5];
        w = (w & ~(3ULL << ((idx & 31) * 2))) | (std::uint64_t(c) << ((idx & 31) * 2));
    }
    Coloring unpack() const;
};

// Coloring file: "n <N>" then "u v c" for every edge, lexicographic order.
Coloring parse_coloring(const std::string& text);
std::string write_coloring(const Coloring& chi);

struct CCPartition {
    std::array<std::vector<int>, 3> classes;

    int class_of(int v) const;
    bool operator==(const CCPartition&) const = default;
};

// Definition: edges inside V_i get color i, edges between V_{i+1} and V_{i+2}
// get color i.
Color cc_edge_color(int class_u, int class_v);

Coloring build_cc(int n0, int n1, int n2);

bool cc_partition_valid(const Coloring& chi, const CCPartition& p);

// Lexicographically least valid partition under (|V0|,|V1|,|V2|, members).
std::optional<CCPartition> detect_cc(const Coloring& chi);

struct Embedding {
    std::vector<int> map; // host vertex per forest vertex
};

Color copy_sum(const Coloring& chi, const Forest& f, const Embedding& phi);

struct AlternatingC4 {
    std::array<int, 4> v; // cycle v0-v1-v2-v3-v0

    bool operator==(const AlternatingC4&) const = default;
};

bool is_alternating(const Coloring& chi, const AlternatingC4& c);

std::optional<AlternatingC4> find_alternating_c4(const Coloring& chi,
                                                 const std::set<int>& forbidden = {});

std::vector<AlternatingC4> all_alternating_c4s(const Coloring& chi);

struct AlphaC4Result {
    bool holds = false;
    std::vector<AlternatingC4> witnesses;
};

AlphaC4Result alpha_c4_at_least(const Coloring& chi, int k);

struct VertexPalettes {
    std::vector<std::set<Color>> palette;
    std::vector<int> mono, tri;
    std::vector<int> v01, v02, v12; // bichromatic split by color pair
};

VertexPalettes vertex_palettes(const Coloring& chi);

struct ExtremalWitness {
    Coloring coloring;
    int shows_r_greater_than; // host size; the construction claims R(F) > this
};

// Lower-bound constructions; absent for type-0 forests.
std::optional<ExtremalWitness> extremal_coloring(const Forest& f);

// Shape patterns for colorings in which every alternating C4 has a
// monochromatic complement.
struct MonoCliqueMinusOne {
    Color clique_color;
    int odd_vertex;
};
struct TwoOutside_AllSecond {
    Color a, b;
    int u, v;
};
struct TwoOutside_SecondExceptUV {
    Color a, b;
    int u, v;
};
struct TwoOutside_TwoColors {
    Color a, b, c;
    int u, v;
};
struct MonoExceptTriangle {
    Color base_color;
    std::array<int, 3> triangle;
};

using ColoringPattern = std::variant<MonoCliqueMinusOne, TwoOutside_AllSecond,
                                     TwoOutside_SecondExceptUV, TwoOutside_TwoColors,
                                     MonoExceptTriangle>;

std::optional<ColoringPattern> classify_near_mono_pattern(const Coloring& chi);

struct ComplementOfMatching {
    Color color;
};
struct MonoKm1 {
    int vertex_excluded;
};
using AabbOutcome = std::variant<ComplementOfMatching, MonoKm1>;

// Requires m >= 5 and every vertex bichromatic at most with minority color
// appearing at most once.
std::optional<AabbOutcome> detect_aabb_structure(const Coloring& chi);

struct CornerC4 {
    std::array<int, 4> v; // x,y,z,t with chi(xy)+chi(yz) != chi(zt)+chi(tx)
};

std::optional<CornerC4> find_unbalanced_corner_c4(const Coloring& chi,
                                                  const std::set<int>& forbidden = {});

struct PivotWitness {
    int u; // on the cycle
    int v, w;
};

std::optional<PivotWitness> find_pivot_vertex(const Coloring& chi, const AlternatingC4& c);

} // namespace zsram
