#include "zsram/egz.hpp"

#include <algorithm>
#include <numeric>

namespace zsram {

ResidueSequence::ResidueSequence(int modulus, std::vector<int> t) : k(modulus), terms(std::move(t)) {
    if (k < 2) throw Error(Errc::ModulusMismatch, "modulus must be >= 2");
    for (int& x : terms) {
        x %= k;
        if (x < 0) x += k;
    }
}

std::optional<std::vector<int>> egz_find(const ResidueSequence& seq, int m) {
    int k = seq.k;
    if (m <= 0 || m % k != 0) throw Error(Errc::MNotDivisible, "k must divide m");
    int len = seq.size();
    if (m > len) return std::nullopt;

    // feas[i][c][r]: from suffix i, can we pick c terms with residue sum r
    int states = (len + 1) * (m + 1) * k;
    std::vector<char> feas(states, 0);
    auto at = [&](int i, int c, int r) -> char& { return feas[(i * (m + 1) + c) * k + r]; };
    at(len, 0, 0) = 1;
    for (int i = len - 1; i >= 0; --i)
        for (int c = 0; c <= m; ++c)
            for (int r = 0; r < k; ++r) {
                char ok = at(i + 1, c, r);
                if (!ok && c > 0) ok = at(i + 1, c - 1, (r - seq.terms[i] % k + k) % k);
                at(i, c, r) = ok;
            }
    if (!at(0, m, 0)) return std::nullopt;
    std::vector<int> picked;
    int c = m, r = 0;
    for (int i = 0; i < len && c > 0; ++i) {
        int r2 = (r - seq.terms[i] % k + k) % k;
        if (at(i + 1, c - 1, r2)) { // taking the earliest feasible index is lex-least
            picked.push_back(i);
            c--;
            r = r2;
        }
    }
    return picked;
}

bool egz_extremal_check(const ResidueSequence& seq, int m) {
    int k = seq.k;
    if (m % k != 0) throw Error(Errc::MNotDivisible, "k must divide m");
    if (seq.size() != m + k - 2)
        throw Error(Errc::LengthMismatch,
                    "need length m+k-2 = " + std::to_string(m + k - 2));
    bool extremal = !egz_find(seq, m).has_value();
    if (!extremal) return false;
    // structural characterization, per divisor d >= 2 of k
    for (int d = 2; d <= k; ++d) {
        if (k % d != 0) continue;
        std::vector<int> residues;
        for (int x : seq.terms) {
            int r = x % d;
            if (std::find(residues.begin(), residues.end(), r) == residues.end())
                residues.push_back(r);
        }
        if (residues.size() != 2)
            throw Error(Errc::PreconditionViolated, "extremal characterization failed: class count");
        int a = residues[0], b = residues[1];
        int ca = 0, cb = 0;
        for (int x : seq.terms) (x % d == a ? ca : cb)++;
        if (ca % d != d - 1 || cb % d != d - 1)
            throw Error(Errc::PreconditionViolated, "extremal characterization failed: class sizes");
        if (std::gcd(((b - a) % d + d) % d, d) != 1)
            throw Error(Errc::PreconditionViolated, "extremal characterization failed: gcd");
    }
    return true;
}

CoverResult cover_triples(const ResidueSequence& seq) {
    if (seq.k != 3) throw Error(Errc::ModulusMismatch, "cover lemma is for k = 3");
    int len = seq.size();
    if (len < 6 || len % 3 != 0)
        throw Error(Errc::PreconditionViolated, "need |seq| >= 6 with 3 | |seq|");
    int total = 0;
    for (int x : seq.terms) total += x;
    if (total % 3 != 0) throw Error(Errc::PreconditionViolated, "sequence must have zero sum");

    bool constant = true;
    for (int x : seq.terms) constant = constant && x == seq.terms[0];
    if (constant) return CoverConstant{};

    CoverTriples out;
    for (int target = 0; target < 3; ++target) {
        bool found = false;
        for (int i = 0; i < len && !found; ++i)
            for (int j = i + 1; j < len && !found; ++j)
                for (int l = j + 1; l < len && !found; ++l)
                    if ((seq.terms[i] + seq.terms[j] + seq.terms[l]) % 3 == target) {
                        out.for_target[target] = {i, j, l};
                        found = true;
                    }
        if (!found)
            throw Error(Errc::PreconditionViolated,
                        "cover lemma violated for target " + std::to_string(target));
    }
    return out;
}

} // namespace zsram
