#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>

#include "qd/lattice.hpp"
#include "qd/pauli.hpp"

namespace qd {

// Maps a syndrome to a recovery error with that syndrome. A frame F is
// decoded correctly when F composed with the inverse of decode(syndrome(F))
// lies in the trivial logical class.
class SyndromeDecoder {
  public:
    virtual ~SyndromeDecoder() = default;
    virtual PauliError decode(const Syndrome& s, const TorusLattice& lat) const = 0;
};

// Walks charges together: repeatedly fuse the nearest other charge into the
// smallest-index charged site along L-shaped torus-shortest strings.
class GreedyDecoder : public SyndromeDecoder {
  public:
    PauliError decode(const Syndrome& s, const TorusLattice& lat) const override;
};

// Exhaustive table decoder: enumerates every Pauli frame once, aggregates per
// syndrome and logical class (minimal weight, then class multiplicity at that
// weight, then lexicographic class), and answers with the stored
// representative of the winning class. Throws size_error when d^(2 * number
// of qudits) exceeds 10^6 frames.
class BruteDecoder : public SyndromeDecoder {
  public:
    explicit BruteDecoder(const TorusLattice& lat);
    PauliError decode(const Syndrome& s, const TorusLattice& lat) const override;

  private:
    std::unordered_map<uint64_t, PauliError> table_;
    int d_;
    int n_qudits_;
};

uint64_t pack_syndrome(const Syndrome& s);

// "greedy" or "brute"
std::unique_ptr<SyndromeDecoder> make_decoder(const std::string& name, const TorusLattice& lat);

}  // namespace qd
