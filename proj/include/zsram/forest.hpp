#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zsram/error.hpp"

namespace zsram {

/// Labeled forest on vertices 0..n-1. Immutable after construction.
struct Forest {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // u < v, sorted
    std::vector<std::vector<int>> adj;      // sorted neighbor lists

    Forest() = default;
    static Forest from_edges(int n, std::vector<std::pair<int, int>> edges);

    int edge_count() const { return static_cast<int>(edges.size()); }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    bool has_edge(int u, int v) const;
    bool is_leaf(int v) const { return degree(v) == 1; }
    // parent of a leaf = its unique neighbor
    int leaf_parent(int v) const { return adj[v][0]; }

    std::vector<std::vector<int>> components() const;
};

// Edge-list text: optional first line "n <count>", then lines "u v".
Forest parse_forest(const std::string& text);
std::string write_forest(const Forest& f);

struct DegreeProfile {
    std::array<int, 3> counts_mod3{};
    int isolated_count = 0;
    int max_degree = 0;
};

DegreeProfile degree_profile(const Forest& f);

enum class ForestClass { Type0, Type1, Type2 };

int type_index(ForestClass c); // Type0 -> 0, Type1 -> 1, Type2 -> 2

// Requires 3 | e(F) and no isolated vertices.
ForestClass classify_forest(const Forest& f);

struct Family {
    enum class Kind {
        Star,
        Matching,
        OneMod3Regular,
        UnionTwoStars,
        UnionThreeStars,
        B,
        BPlusStar,
        C,
        T,
        Path,
        Generic,
    };
    Kind kind = Kind::Generic;
    std::vector<int> params;

    bool operator==(const Family&) const = default;
};

const char* family_name(Family::Kind k);

// Priority: Star > Matching > OneMod3Regular > UnionTwoStars > UnionThreeStars
// > B > BPlusStar > C > T > Path > Generic. Requires 3 | e(F), no isolated
// vertices.
Family recognize_family(const Forest& f);

struct SwitchingStructure {
    enum class Kind { InnerPath, TwoParents };
    Kind kind;
    std::array<int, 4> v; // (v1, v2, v3, v4)

    bool operator==(const SwitchingStructure&) const = default;
};

std::vector<SwitchingStructure> find_switching_structures(const Forest& f);

enum class AlphaS { Zero, One, TwoPlus };

AlphaS alpha_s(const Forest& f);

struct GeneralizedSwitching {
    enum class Kind { Deg2, Deg3 };
    Kind kind;
    int l = -1;
    int u = -1;
    int v = -1; // Deg2: u's neighbor losing the edge; Deg3: first swap target
    int w = -1; // Deg3 only

    bool operator==(const GeneralizedSwitching&) const = default;

    // vertices owned by the structure for disjointness checks
    std::vector<int> elements() const;
};

std::vector<GeneralizedSwitching> find_generalized_switchings(const Forest& f);

struct SixTuple {
    SwitchingStructure structure; // (p1, l1, l2, p2)
    int u = -1;
    int v = -1;
};

bool six_tuple_valid(const Forest& f, const SixTuple& t);

// Requires a type-0 degree profile and that F is none of: union of two stars,
// B(d1,0,d2), B(d1,1,d2), C(d1,0,1,0,d3). Isolated vertices are permitted
// (they arise from host padding).
std::optional<SixTuple> find_six_tuple(const Forest& f);

std::optional<std::array<int, 3>> find_sibling_leaves(const Forest& f); // (leaf, leaf, parent)

// Equal strings iff isomorphic. AHU hashing rooted at centers, components
// sorted.
std::string canonical_form(const Forest& f);

// Edge rewrite of a switching structure: delete v1v2, v3v4; add v1v3, v2v4.
Forest apply_switching_rewrite(const Forest& f, const SwitchingStructure& s);

// Deg2: delete uv, add lv. Deg3: delete uv, uw; add lv, lw.
Forest apply_generalized_rewrite(const Forest& f, const GeneralizedSwitching& s);

// True when the degree profile is type 0 (>=2 vertices of degree 0 mod 3, or
// one of degree 0 and one of degree 2). Tolerates isolated vertices.
bool profile_is_type0(const Forest& f);

} // namespace zsram
