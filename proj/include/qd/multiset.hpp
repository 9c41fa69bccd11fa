#pragma once
#include <optional>
#include <string>
#include <vector>

namespace qd {

// Multiset of residues mod d, stored as per-residue multiplicities.
struct Multiset {
    int d = 2;
    std::vector<int> counts;  // size d

    Multiset() = default;
    explicit Multiset(int d_) : d(d_), counts(d_, 0) {}
    Multiset(int d_, const std::vector<int>& elements);

    int cardinality() const;
    long long integer_sum() const;  // sum over Z, not mod d
    int mod_sum() const;
    void add(int residue, int times = 1);
    bool contains(const Multiset& sub) const;  // componentwise counts >=
    Multiset minus(const Multiset& sub) const;
    std::vector<int> elements() const;  // sorted ascending with multiplicity

    bool operator==(const Multiset& o) const { return d == o.d && counts == o.counts; }
};

// Set of residues realizable as a nonempty subset sum of f, following the
// recursion sp(f + {x}) = {x} u sp(f) u (sp(f) + x). Grows strictly under
// adding any element while f stays zero-sum free.
std::vector<bool> spectrum(const Multiset& f);

bool is_zero_sum_free(const Multiset& f);

// Smallest-cardinality zero-sum subset of f, ties broken toward the
// lexicographically smallest sorted element list; nullopt if f is zero-sum
// free. The returned witness is re-verified internally before returning.
std::optional<Multiset> find_zero_sum_subset(const Multiset& f);

// Exhaustive scan over all multisets of nonzero residues mod d, cardinality
// up to d. Confirms that the largest zero-sum-free multiset has cardinality
// d-1, that the largest integer sum of a zero-sum-free multiset is (d-1)^2,
// and that every multiset of cardinality d contains a zero-sum subset.
struct ExtremalReport {
    int d = 0;
    int max_cardinality = 0;           // over zero-sum-free multisets
    long long max_sum = 0;             // integer sum over zero-sum-free multisets
    std::vector<int> cardinality_witness;
    std::vector<int> sum_witness;
    long long multisets_scanned = 0;
    bool cardinality_bound_ok = false;  // max_cardinality == d-1
    bool sum_bound_ok = false;          // max_sum == (d-1)^2
    bool all_card_d_have_zero_sum = false;
};

ExtremalReport verify_extremal_theorems(int d);  // guarded to 2 <= d <= 9

}  // namespace qd
