#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace qd {

// Vector of residues mod d. All arithmetic is componentwise in Z_d; global
// phases are never tracked anywhere in this library, so exponent vectors are
// the whole story.
class DitVector {
  public:
    DitVector() = default;
    DitVector(int d, std::size_t n);                      // zero vector
    DitVector(int d, std::vector<uint8_t> values);        // values must be < d

    int d() const { return d_; }
    std::size_t size() const { return v_.size(); }
    uint8_t operator[](std::size_t i) const { return v_[i]; }

    void set(std::size_t i, int value);                   // reduced mod d
    void add(std::size_t i, int delta);                   // in-place mod-d add
    bool is_zero() const;
    int sum() const;                                      // mod d

    DitVector plus(const DitVector& o) const;             // componentwise mod-d sum
    DitVector negated() const;

    bool operator==(const DitVector& o) const { return d_ == o.d_ && v_ == o.v_; }
    bool operator!=(const DitVector& o) const { return !(*this == o); }

    const std::vector<uint8_t>& raw() const { return v_; }
    std::string to_csv() const;

  private:
    int d_ = 2;
    std::vector<uint8_t> v_;
};

// canonical residue of x mod d, in [0, d)
inline int mod_d(long long x, int d) {
    long long r = x % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

// inverse of a mod d; throws validation_error when gcd(a, d) != 1
int mod_inverse(int a, int d);

}  // namespace qd
