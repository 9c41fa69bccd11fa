#include "qd/multiset.hpp"

#include <algorithm>

#include "qd/errors.hpp"
#include "qd/ditvec.hpp"

namespace qd {

static constexpr int kMaxCardinality = 64;

static void check_multiset(const Multiset& f) {
    if (f.d < 2) throw validation_error("multiset dimension must be >= 2");
    if ((int)f.counts.size() != f.d) throw validation_error("multiset counts must have exactly d entries");
    for (int c : f.counts)
        if (c < 0) throw validation_error("negative multiplicity");
    if (f.cardinality() > kMaxCardinality)
        throw size_error("multiset cardinality exceeds the guard of " + std::to_string(kMaxCardinality));
}

Multiset::Multiset(int d_, const std::vector<int>& elements) : d(d_), counts(d_, 0) {
    if (d < 2) throw validation_error("multiset dimension must be >= 2");
    for (int e : elements) {
        if (e < 0 || e >= d) throw validation_error("element " + std::to_string(e) + " out of range for d=" + std::to_string(d));
        counts[e]++;
    }
}

int Multiset::cardinality() const {
    int c = 0;
    for (int k : counts) c += k;
    return c;
}

long long Multiset::integer_sum() const {
    long long s = 0;
    for (int r = 0; r < d; ++r) s += (long long)r * counts[r];
    return s;
}

int Multiset::mod_sum() const { return mod_d(integer_sum(), d); }

void Multiset::add(int residue, int times) {
    if (residue < 0 || residue >= d) throw validation_error("residue out of range");
    counts[residue] += times;
}

bool Multiset::contains(const Multiset& sub) const {
    if (sub.d != d) return false;
    for (int r = 0; r < d; ++r)
        if (sub.counts[r] > counts[r]) return false;
    return true;
}

Multiset Multiset::minus(const Multiset& sub) const {
    if (!contains(sub)) throw validation_error("minus: not a sub-multiset");
    Multiset out(d);
    for (int r = 0; r < d; ++r) out.counts[r] = counts[r] - sub.counts[r];
    return out;
}

std::vector<int> Multiset::elements() const {
    std::vector<int> out;
    for (int r = 0; r < d; ++r) out.insert(out.end(), counts[r], r);
    return out;
}

std::vector<bool> spectrum(const Multiset& f) {
    check_multiset(f);
    std::vector<bool> sp(f.d, false);
    for (int x : f.elements()) {
        std::vector<bool> next = sp;
        next[x] = true;
        for (int r = 0; r < f.d; ++r)
            if (sp[r]) next[mod_d(r + x, f.d)] = true;
        sp.swap(next);
    }
    return sp;
}

bool is_zero_sum_free(const Multiset& f) {
    if (f.cardinality() == 0) return true;
    return !spectrum(f)[0];
}

std::optional<Multiset> find_zero_sum_subset(const Multiset& f) {
    check_multiset(f);
    const int d = f.d;
    std::vector<int> values;
    for (int r = 0; r < d; ++r)
        if (f.counts[r]) values.push_back(r);
    const int m = (int)values.size();
    const int cap = f.cardinality();
    if (m == 0) return std::nullopt;

    // feas[i][t][r]: some sub-multiset of values[i..] with exactly t elements
    // sums to r mod d. Suffix direction so the reconstruction below can fix
    // multiplicities of small residues first.
    std::vector<std::vector<std::vector<char>>> feas(
        m + 1, std::vector<std::vector<char>>(cap + 1, std::vector<char>(d, 0)));
    feas[m][0][0] = 1;
    for (int i = m - 1; i >= 0; --i) {
        const int v = values[i], c = f.counts[v];
        for (int t = 0; t <= cap; ++t)
            for (int r = 0; r < d; ++r) {
                for (int u = 0; u <= c && u <= t; ++u) {
                    if (feas[i + 1][t - u][mod_d(r - (long long)u * v, d)]) {
                        feas[i][t][r] = 1;
                        break;
                    }
                }
            }
    }

    int best = -1;
    for (int t = 1; t <= cap; ++t)
        if (feas[0][t][0]) {
            best = t;
            break;
        }
    if (best < 0) return std::nullopt;

    // among witnesses of minimal cardinality, take as many copies of the
    // smallest residue as possible, then the next, so the sorted element list
    // is lexicographically smallest
    Multiset witness(d);
    int t_rem = best, r_rem = 0;
    for (int i = 0; i < m; ++i) {
        const int v = values[i], c = f.counts[v];
        for (int u = std::min(c, t_rem); u >= 0; --u) {
            if (feas[i + 1][t_rem - u][mod_d(r_rem - (long long)u * v, d)]) {
                witness.counts[v] = u;
                t_rem -= u;
                r_rem = mod_d(r_rem - (long long)u * v, d);
                break;
            }
        }
    }
    if (t_rem != 0 || r_rem != 0 || witness.cardinality() != best || witness.mod_sum() != 0 || !f.contains(witness))
        throw std::logic_error("zero-sum witness reconstruction failed self-check");
    return witness;
}

static void scan_multisets(int d, int max_card, int min_value, Multiset& cur, ExtremalReport& rep) {
    if (cur.cardinality() > 0) {
        rep.multisets_scanned++;
        bool zsf = is_zero_sum_free(cur);
        if (zsf) {
            if (cur.cardinality() > rep.max_cardinality) {
                rep.max_cardinality = cur.cardinality();
                rep.cardinality_witness = cur.elements();
            }
            if (cur.integer_sum() > rep.max_sum) {
                rep.max_sum = cur.integer_sum();
                rep.sum_witness = cur.elements();
            }
        }
        if (cur.cardinality() == max_card && zsf) rep.all_card_d_have_zero_sum = false;
    }
    if (cur.cardinality() == max_card) return;
    for (int v = min_value; v < d; ++v) {
        cur.counts[v]++;
        scan_multisets(d, max_card, v, cur, rep);
        cur.counts[v]--;
    }
}

ExtremalReport verify_extremal_theorems(int d) {
    if (d < 2) throw validation_error("d must be >= 2");
    if (d > 9) throw size_error("exhaustive extremal scan guarded to d <= 9");
    ExtremalReport rep;
    rep.d = d;
    rep.all_card_d_have_zero_sum = true;  // falsified by any zero-sum-free multiset of cardinality d
    Multiset cur(d);
    scan_multisets(d, d, 1, cur, rep);
    rep.cardinality_bound_ok = (rep.max_cardinality == d - 1);
    rep.sum_bound_ok = (rep.max_sum == (long long)(d - 1) * (d - 1));
    return rep;
}

}  // namespace qd
