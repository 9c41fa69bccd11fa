#pragma once
#include <string>
#include <vector>

#include "qd/ditvec.hpp"

namespace qd {

// Generalized Pauli on n qudits of dimension d, kept as exponent vectors only:
// the operator is prod_j Z_j^{z_j} X_j^{x_j} up to a global phase, which this
// library discards throughout (syndromes, energies and barriers never depend
// on it).
struct PauliError {
    DitVector z;
    DitVector x;

    PauliError() = default;
    PauliError(int d, std::size_t n) : z(d, n), x(d, n) {}
    PauliError(DitVector z_, DitVector x_);

    int d() const { return z.d(); }
    std::size_t n_qudits() const { return z.size(); }
    bool is_identity() const { return z.is_zero() && x.is_zero(); }

    bool operator==(const PauliError& o) const { return z == o.z && x == o.x; }
    bool operator!=(const PauliError& o) const { return !(*this == o); }
};

// one factor of a product expansion: Z^{z_exp} X^{x_exp} on a single qudit
struct SingleQuditStep {
    int qudit;
    int z_exp;
    int x_exp;
    bool operator==(const SingleQuditStep& o) const {
        return qudit == o.qudit && z_exp == o.z_exp && x_exp == o.x_exp;
    }
};

// Exponentwise mod-d sum: the phase-free product P*Q.
PauliError compose(const PauliError& p, const PauliError& q);
PauliError inverse(const PauliError& p);

// c with P Q = omega^c Q P, omega = exp(2 pi i / d):
// c = sum_j (p.z_j q.x_j - p.x_j q.z_j) mod d.
int commutation_exponent(const PauliError& p, const PauliError& q);

// qudit indices touched by p (nonzero z or x), ascending
std::vector<int> support(const PauliError& p);

// Expansion into single-qudit factors, ascending qudit index, and for a qudit
// with both parts nonzero the Z part is emitted before the X part.
std::vector<SingleQuditStep> single_qudit_factorization(const PauliError& p);

// Text form "d=<d>;Z=<csv>;X=<csv>". parse() round-trips format().
std::string format_pauli(const PauliError& p);
PauliError parse_pauli(const std::string& text);

}  // namespace qd
