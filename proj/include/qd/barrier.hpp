#pragma once
#include <cstdint>
#include <vector>

#include "qd/lattice.hpp"
#include "qd/masses.hpp"
#include "qd/pauli.hpp"

namespace qd {

// Path of single-qudit multiplications from the identity to `target`.
// profile[t] is the additional energy right after step t.
struct LocalErrorsPath {
    PauliError target;
    std::vector<SingleQuditStep> steps;
    std::vector<double> profile;
};

// Energy of the intermediate syndrome counting only sites whose charge is
// nonzero and differs from the final charge: excitations already in their
// final place are free, and so is vacuum.
double additional_energy(const Syndrome& inter, const Syndrome& fin, const MassTable& m);

// Canonical constructive path. Both sectors are decomposed into flows, loops
// are merged and trees pruned, then the Z sector is built before the X
// sector: each cycle by creating a conjugate pair and dragging one anyon
// around the walk, each simple tree string by string (a string leaves the
// final charge at its end site immediately and walks the conjugate anyon to
// the group root). At most two sites ever deviate from vacuum-or-final at
// once, so every profile entry is a sum of at most two masses.
LocalErrorsPath schedule_path(const PauliError& p, const TorusLattice& lat, const MassTable& m);

// max over steps of additional_energy, recomputed from the steps
double path_barrier(const LocalErrorsPath& path, const TorusLattice& lat, const MassTable& m);

// every step a proper single-qudit Pauli, prefix composition reaches target
void validate_path(const LocalErrorsPath& path, const TorusLattice& lat);

// Exact minimax barrier: bottleneck shortest path (monotone bucket queue over
// the sorted distinct additional-energy values) over all errors supported on
// the adjacency-dilated support of p, at most support_cap qudits. Throws
// size_error when the state space exceeds 10^7 states.
double brute_force_barrier(const PauliError& p, const TorusLattice& lat, const MassTable& m,
                           int support_cap);

struct PathLengthStats {
    long long length = 0;  // steps in the scheduled path
    long long bound = 0;   // 8 (d-1) N
};
PathLengthStats path_length_stats(const PauliError& p, const TorusLattice& lat, const MassTable& m);

// max constructive barrier over `samples` random errors plus adversarial
// fixtures (logical strings, stabilizer products, spread trees)
double hamiltonian_barrier_estimate(const TorusLattice& lat, const MassTable& m, int samples,
                                    uint64_t seed);

}  // namespace qd
