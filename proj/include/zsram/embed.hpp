#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zsram/coloring.hpp"
#include "zsram/forest.hpp"

namespace zsram {

struct Strategy {
    enum class Kind {
        Monochromatic,
        TwoSwitchTwoC4,
        CCEmbed,
        NoAltC4,
        Siblings,
        OneAltC4NonMono,
        OneAltC4Mono,
        GeneralizedSwitch,
        FamilySpecific,
        TransferReduced,
        Fallback,
    };
    Kind kind = Kind::Fallback;
    std::string detail;
};

const char* strategy_name(Strategy::Kind k);

struct SwapRecord {
    std::variant<SwitchingStructure, GeneralizedSwitching> structure;
    std::vector<int> host_vertices; // hosts of the structure elements, in element order
    Color delta = 0;
};

struct EngineStats {
    std::uint64_t nodes = 0;
};

bool embedding_valid(const Coloring& chi, const Forest& f, const Embedding& phi);

// Exact decision procedure: returns a zero-sum embedding iff one exists.
std::optional<Embedding> backtrack_embed(const Forest& f, const Coloring& chi,
                                         EngineStats* stats = nullptr);

// Strategy dispatch with backtracking fallback; complete.
std::optional<std::pair<Embedding, Strategy>> find_zero_sum_copy(const Forest& f,
                                                                 const Coloring& chi,
                                                                 EngineStats* stats = nullptr);

// Applies a structure swap to an embedded copy: images of the two exchanged
// vertices are transposed. The record's delta must match the induced change.
Embedding swap_copies(const Embedding& phi, const SwapRecord& rec, const Coloring& chi,
                      const Forest& f);

// Builds the record for swapping an embedded switching structure.
SwapRecord make_swap_record(const Forest& f, const Coloring& chi, const Embedding& phi,
                            const SwitchingStructure& s);
SwapRecord make_swap_record(const Forest& f, const Coloring& chi, const Embedding& phi,
                            const GeneralizedSwitching& s);

// One delta from each pair so that base + da + db = 0. Both pairs must hold
// distinct elements.
std::pair<int, int> four_sum_cover_select(Color base, std::pair<Color, Color> deltas_a,
                                          std::pair<Color, Color> deltas_b);

std::optional<Embedding> embed_cc(const Forest& f, const CCPartition& partition,
                                  const Coloring& chi);

std::optional<Embedding> embed_no_alt_c4(const Forest& f, const Coloring& chi);

std::optional<Embedding> embed_two_switch(const Forest& f, const Coloring& chi,
                                          const SwitchingStructure& s1,
                                          const SwitchingStructure& s2,
                                          const AlternatingC4& c1, const AlternatingC4& c2);

std::optional<Embedding> embed_siblings(const Forest& f, const Coloring& chi);

std::optional<Embedding> embed_one_alt_c4(const Forest& f, const Coloring& chi);

std::optional<Embedding> embed_generalized(const Forest& f, const Coloring& chi,
                                           const SwitchingStructure& s1,
                                           const GeneralizedSwitching& s2);

// EGZ reattachment of 3 of the first 5 leaf children of u onto v. The map is
// unchanged; the forest is rewritten. Requires phi zero-sum.
std::pair<Forest, Embedding> transfer_rewrite(const Forest& f, const Embedding& phi,
                                              const Coloring& chi, int u, int v);

std::optional<Embedding> embed_family_specific(const Forest& f, const Family& family,
                                               const Coloring& chi);

// pad with isolated vertices
Forest pad_forest(const Forest& f, int extra);

} // namespace zsram
