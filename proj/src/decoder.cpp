#include "qd/decoder.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <vector>

#include "qd/errors.hpp"
#include "qd/fixtures.hpp"

namespace qd {

namespace {

int torus_l1(int a, int b, int lx, int ly) {
    int ax = a % lx, ay = a / lx;
    int bx = b % lx, by = b / lx;
    int dx = std::abs(ax - bx);
    int dy = std::abs(ay - by);
    return std::min(dx, lx - dx) + std::min(dy, ly - dy);
}

// Anchors at the smallest charged site and emits a shortest string to each
// remaining charge, nearest first, delivering exactly the charge that site
// needs. The anchor's own requirement absorbs every delivery's backaction;
// a valid syndrome leaves it at zero.
void absorb_charges(PauliError& corr, const DitVector& target, Sector sec, const TorusLattice& lat) {
    int d = lat.d();
    std::vector<int> rem(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) rem[i] = target[i];

    auto first_charged = [&]() {
        for (std::size_t i = 0; i < rem.size(); ++i)
            if (rem[i] != 0) return static_cast<int>(i);
        return -1;
    };

    for (;;) {
        int u = first_charged();
        if (u < 0) return;
        int w = -1, best = -1;
        for (std::size_t i = u + 1; i < rem.size(); ++i) {
            if (rem[i] == 0) continue;
            int dist = torus_l1(u, static_cast<int>(i), lat.lx(), lat.ly());
            if (w < 0 || dist < best) { w = static_cast<int>(i); best = dist; }
        }
        if (w < 0)
            throw validation_error("syndrome charges do not sum to zero mod d");
        if (sec == Sector::chargeon)
            add_z_string(corr, lat, u, w, rem[w]);
        else
            add_x_string(corr, lat, u, w, rem[w]);
        rem[u] = mod_d(rem[u] + rem[w], d);
        rem[w] = 0;
    }
}

}  // namespace

PauliError GreedyDecoder::decode(const Syndrome& s, const TorusLattice& lat) const {
    if (static_cast<int>(s.a.size()) != lat.n_sites(Sector::chargeon) || s.a.d() != lat.d() ||
        static_cast<int>(s.b.size()) != lat.n_sites(Sector::fluxon) || s.b.d() != lat.d())
        throw validation_error("syndrome does not match the lattice");
    PauliError corr = lat.identity();
    absorb_charges(corr, s.a, Sector::chargeon, lat);
    absorb_charges(corr, s.b, Sector::fluxon, lat);
    Syndrome got = lat.syndrome(corr);
    if (got.a.raw() != s.a.raw() || got.b.raw() != s.b.raw())
        throw std::logic_error("greedy decoder produced a mismatched syndrome");
    return corr;
}

uint64_t pack_syndrome(const Syndrome& s) {
    uint64_t key = 0;
    int d = s.a.d();
    for (std::size_t i = 0; i < s.a.size(); ++i) key = key * d + s.a[i];
    for (std::size_t i = 0; i < s.b.size(); ++i) key = key * d + s.b[i];
    return key;
}

BruteDecoder::BruteDecoder(const TorusLattice& lat) : d_(lat.d()), n_qudits_(lat.n_qudits()) {
    long long frames = 1;
    for (int i = 0; i < 2 * n_qudits_; ++i) {
        frames *= d_;
        if (frames > 1'000'000)
            throw size_error("decoder table exceeds 10^6 frames");
    }

    struct Agg {
        int weight = -1;
        long long count = 0;
        PauliError rep;
    };
    // syndrome key -> logical class -> best frames in that class
    std::map<uint64_t, std::map<std::array<int, 4>, Agg>> classes;

    PauliError frame = lat.identity();
    std::vector<int> digits(2 * n_qudits_, 0);  // z[0..nq-1], x[0..nq-1]
    for (long long it = 0; it < frames; ++it) {
        int weight = 0;
        for (int q = 0; q < n_qudits_; ++q)
            if (frame.z[q] != 0 || frame.x[q] != 0) ++weight;
        uint64_t key = pack_syndrome(lat.syndrome(frame));
        Agg& agg = classes[key][lat.logical_class(frame)];
        if (agg.weight < 0 || weight < agg.weight) {
            agg.weight = weight;
            agg.count = 1;
            agg.rep = frame;
        } else if (weight == agg.weight) {
            ++agg.count;
        }

        // odometer step, digit 0 fastest
        for (int pos = 0; pos < 2 * n_qudits_; ++pos) {
            digits[pos] = (digits[pos] + 1) % d_;
            if (pos < n_qudits_)
                frame.z.set(pos, digits[pos]);
            else
                frame.x.set(pos - n_qudits_, digits[pos]);
            if (digits[pos] != 0) break;
        }
    }

    for (auto& [key, per_class] : classes) {
        const Agg* best = nullptr;
        const std::array<int, 4>* best_cls = nullptr;
        for (auto& [cls, agg] : per_class) {
            bool take = best == nullptr || agg.weight < best->weight ||
                        (agg.weight == best->weight && agg.count > best->count) ||
                        (agg.weight == best->weight && agg.count == best->count && cls < *best_cls);
            if (take) { best = &agg; best_cls = &cls; }
        }
        table_.emplace(key, best->rep);
    }
}

PauliError BruteDecoder::decode(const Syndrome& s, const TorusLattice& lat) const {
    if (lat.d() != d_ || lat.n_qudits() != n_qudits_)
        throw validation_error("decoder was built for a different lattice");
    auto it = table_.find(pack_syndrome(s));
    if (it == table_.end())
        throw validation_error("syndrome is not realizable on this lattice");
    return it->second;
}

std::unique_ptr<SyndromeDecoder> make_decoder(const std::string& name, const TorusLattice& lat) {
    if (name == "greedy") return std::make_unique<GreedyDecoder>();
    if (name == "brute") return std::make_unique<BruteDecoder>(lat);
    throw validation_error("unknown decoder '" + name + "' (expected greedy or brute)");
}

}  // namespace qd
