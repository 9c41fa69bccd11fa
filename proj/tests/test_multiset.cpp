#include <functional>
#include <vector>

#include "doctest.h"
#include "qd/ditvec.hpp"
#include "qd/errors.hpp"
#include "qd/multiset.hpp"

using namespace qd;

namespace {

// reference spectrum: walk every sub-multiset explicitly
std::vector<bool> spectrum_by_enumeration(const Multiset& f) {
    std::vector<bool> sp(f.d, false);
    std::vector<int> pick(f.d, 0);
    std::function<void(int)> rec = [&](int r) {
        if (r == f.d) {
            long long total = 0, sum = 0;
            for (int i = 0; i < f.d; ++i) {
                total += pick[i];
                sum += static_cast<long long>(pick[i]) * i;
            }
            if (total > 0) sp[mod_d(sum, f.d)] = true;
            return;
        }
        for (pick[r] = 0; pick[r] <= f.counts[r]; ++pick[r]) rec(r + 1);
        pick[r] = 0;
    };
    rec(0);
    return sp;
}

// every multiset of nonzero residues mod d with cardinality <= max_card
void for_each_multiset(int d, int max_card, const std::function<void(const Multiset&)>& fn) {
    Multiset f(d);
    std::function<void(int, int)> rec = [&](int r, int left) {
        if (r == d) {
            fn(f);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            f.counts[r] = c;
            rec(r + 1, left - c);
        }
        f.counts[r] = 0;
    };
    rec(1, max_card);  // residue 0 never appears
}

}  // namespace

TEST_CASE("spectrum matches the enumeration oracle") {
    for (int d = 2; d <= 5; ++d)
        for_each_multiset(d, 4, [&](const Multiset& f) {
            CHECK(spectrum(f) == spectrum_by_enumeration(f));
        });
}

TEST_CASE("spectrum pinned examples") {
    Multiset f(5, {1, 1, 3});
    auto sp = spectrum(f);
    for (int r = 0; r < 5; ++r) CHECK(sp[r]);  // reaches every residue
    CHECK_FALSE(is_zero_sum_free(f));

    Multiset g(5, {4, 4, 4, 4});
    auto sg = spectrum(g);
    CHECK_FALSE(sg[0]);
    for (int r = 1; r < 5; ++r) CHECK(sg[r]);
    CHECK(is_zero_sum_free(g));
    CHECK(g.cardinality() == 4);
    CHECK(g.integer_sum() == 16);

    CHECK(is_zero_sum_free(Multiset(7)));  // empty multiset
}

TEST_CASE("adding an element grows a zero-sum-free spectrum strictly") {
    for (int d = 2; d <= 5; ++d)
        for_each_multiset(d, d - 1, [&](const Multiset& f) {
            auto sp = spectrum(f);
            int size = 0;
            for (bool b : sp) size += b;
            for (int x = 1; x < d; ++x) {
                Multiset g = f;
                g.add(x);
                if (!is_zero_sum_free(g)) continue;
                auto sg = spectrum(g);
                int gsize = 0;
                for (bool b : sg) gsize += b;
                CHECK(gsize > size);
            }
        });
}

TEST_CASE("zero sum witness is minimal and lexicographically smallest") {
    auto w = find_zero_sum_subset(Multiset(5, {1, 1, 3}));
    REQUIRE(w.has_value());
    CHECK(w->elements() == std::vector<int>{1, 1, 3});

    auto w2 = find_zero_sum_subset(Multiset(5, {2, 3, 1}));
    REQUIRE(w2.has_value());
    CHECK(w2->elements() == std::vector<int>{2, 3});

    // two cardinality-2 candidates: {1,3} beats {2,2} lexicographically
    auto w3 = find_zero_sum_subset(Multiset(4, {2, 2, 1, 3}));
    REQUIRE(w3.has_value());
    CHECK(w3->elements() == std::vector<int>{1, 3});

    CHECK_FALSE(find_zero_sum_subset(Multiset(5, {4, 4, 4, 4})).has_value());
    CHECK_FALSE(find_zero_sum_subset(Multiset(7)).has_value());
}

TEST_CASE("witnesses agree with the spectrum on random multisets") {
    for (int d = 2; d <= 6; ++d)
        for_each_multiset(d, d, [&](const Multiset& f) {
            auto w = find_zero_sum_subset(f);
            if (is_zero_sum_free(f)) {
                CHECK_FALSE(w.has_value());
            } else {
                REQUIRE(w.has_value());
                CHECK(f.contains(*w));
                CHECK(w->mod_sum() == 0);
                CHECK(w->cardinality() >= 1);
            }
        });
}

TEST_CASE("extremal scan reproduces the closed forms") {
    for (int d = 2; d <= 5; ++d) {
        ExtremalReport rep = verify_extremal_theorems(d);
        CHECK(rep.cardinality_bound_ok);
        CHECK(rep.sum_bound_ok);
        CHECK(rep.all_card_d_have_zero_sum);
        CHECK(rep.max_cardinality == d - 1);
        CHECK(rep.max_sum == static_cast<long long>(d - 1) * (d - 1));
        CHECK(is_zero_sum_free(Multiset(d, rep.cardinality_witness)));
        CHECK(is_zero_sum_free(Multiset(d, rep.sum_witness)));
        CHECK(static_cast<int>(rep.cardinality_witness.size()) == d - 1);
        long long s = 0;
        for (int e : rep.sum_witness) s += e;
        CHECK(s == rep.max_sum);
    }
}

TEST_CASE("guards reject out-of-range requests") {
    CHECK_THROWS_AS(verify_extremal_theorems(10), size_error);
    CHECK_THROWS_AS(verify_extremal_theorems(1), validation_error);
    CHECK_THROWS_AS(Multiset(5, {5}), validation_error);
    CHECK_THROWS_AS(Multiset(1, {0}), validation_error);
    Multiset f(3);
    CHECK_THROWS_AS(f.add(3), validation_error);
    CHECK_THROWS_AS(f.minus(Multiset(3, {1})), validation_error);
}
