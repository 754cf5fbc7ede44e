#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "zsram/error.hpp"

namespace zsram {

struct ResidueSequence {
    int k = 3;
    std::vector<int> terms;

    ResidueSequence(int modulus, std::vector<int> t);
    int size() const { return static_cast<int>(terms.size()); }
};

// Lexicographically least index set n_1 < ... < n_m with k | sum, or absent.
// Always succeeds when |seq| >= m + k - 1.
std::optional<std::vector<int>> egz_find(const ResidueSequence& seq, int m);

// |seq| must equal m + k - 2. True iff no zero-sum m-subsequence exists; the
// two-class structural characterization is re-verified whenever true.
bool egz_extremal_check(const ResidueSequence& seq, int m);

struct CoverConstant {};
struct CoverTriples {
    // triple of indices for each target residue 0, 1, 2
    std::array<std::array<int, 3>, 3> for_target;
};
using CoverResult = std::variant<CoverConstant, CoverTriples>;

// k = 3 only; requires |seq| >= 6, 3 | |seq|, and zero total sum.
CoverResult cover_triples(const ResidueSequence& seq);

} // namespace zsram
