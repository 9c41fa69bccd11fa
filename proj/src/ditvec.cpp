#include "qd/ditvec.hpp"

#include <numeric>

#include "qd/errors.hpp"

namespace qd {

static void check_d(int d) {
    if (d < 2 || d > 250) throw validation_error("qudit dimension must satisfy 2 <= d <= 250, got " + std::to_string(d));
}

DitVector::DitVector(int d, std::size_t n) : d_(d), v_(n, 0) { check_d(d); }

DitVector::DitVector(int d, std::vector<uint8_t> values) : d_(d), v_(std::move(values)) {
    check_d(d);
    for (uint8_t x : v_)
        if (x >= d_) throw validation_error("residue " + std::to_string(int(x)) + " out of range for d=" + std::to_string(d_));
}

void DitVector::set(std::size_t i, int value) { v_[i] = static_cast<uint8_t>(mod_d(value, d_)); }

void DitVector::add(std::size_t i, int delta) { v_[i] = static_cast<uint8_t>(mod_d(v_[i] + delta, d_)); }

bool DitVector::is_zero() const {
    for (uint8_t x : v_)
        if (x) return false;
    return true;
}

int DitVector::sum() const {
    long long s = std::accumulate(v_.begin(), v_.end(), 0LL);
    return mod_d(s, d_);
}

DitVector DitVector::plus(const DitVector& o) const {
    if (d_ != o.d_ || v_.size() != o.v_.size()) throw validation_error("DitVector shape mismatch in plus()");
    DitVector r(d_, v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = static_cast<uint8_t>(mod_d(v_[i] + o.v_[i], d_));
    return r;
}

DitVector DitVector::negated() const {
    DitVector r(d_, v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = static_cast<uint8_t>(mod_d(-int(v_[i]), d_));
    return r;
}

int mod_inverse(int a, int d) {
    int r0 = d, r1 = mod_d(a, d);
    long long t0 = 0, t1 = 1;
    while (r1 != 0) {
        int q = r0 / r1;
        int r2 = r0 - q * r1;
        long long t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1)
        throw validation_error(std::to_string(a) + " is not invertible mod " + std::to_string(d));
    return mod_d(t0, d);
}

std::string DitVector::to_csv() const {
    std::string s;
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(int(v_[i]));
    }
    return s;
}

}  // namespace qd
