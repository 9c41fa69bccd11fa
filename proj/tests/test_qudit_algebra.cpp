#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "qd/errors.hpp"
#include "qd/pauli.hpp"
#include "qd/rng.hpp"

using namespace qd;

namespace {

using CMat = Eigen::MatrixXcd;

// dense single-qudit generators: X|j> = |j+1 mod d>, Z|j> = w^j |j>
CMat mat_x(int d) {
    CMat m = CMat::Zero(d, d);
    for (int j = 0; j < d; ++j) m(mod_d(j + 1, d), j) = 1.0;
    return m;
}

CMat mat_z(int d) {
    CMat m = CMat::Zero(d, d);
    const double pi = std::acos(-1.0);
    for (int j = 0; j < d; ++j) m(j, j) = std::exp(std::complex<double>(0, 2 * pi * j / d));
    return m;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CMat pauli_matrix(const PauliError& p) {
    const int d = p.d();
    CMat zm = mat_z(d), xm = mat_x(d);
    CMat out = CMat::Identity(1, 1);
    for (std::size_t j = 0; j < p.n_qudits(); ++j) {
        CMat f = CMat::Identity(d, d);
        for (int t = 0; t < p.z[j]; ++t) f = zm * f;
        for (int t = 0; t < p.x[j]; ++t) f = f * xm;  // Z^z X^x per site
        out = kron(out, f);
    }
    return out;
}

PauliError random_pauli(int d, int n, Rng& rng) {
    PauliError p(d, n);
    for (int j = 0; j < n; ++j) {
        p.z.set(j, rng.below(d));
        p.x.set(j, rng.below(d));
    }
    return p;
}

}  // namespace

TEST_CASE("commutation exponent against the dense matrix oracle") {
    const double pi = std::acos(-1.0);
    for (int d : {2, 3, 5}) {
        Rng rng(17, d);
        for (int trial = 0; trial < 12; ++trial) {
            PauliError p = random_pauli(d, 2, rng);
            PauliError q = random_pauli(d, 2, rng);
            CMat pq = pauli_matrix(p) * pauli_matrix(q);
            CMat qp = pauli_matrix(q) * pauli_matrix(p);
            int c = commutation_exponent(p, q);
            std::complex<double> w = std::exp(std::complex<double>(0, 2 * pi * c / d));
            CHECK((pq - w * qp).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("compose adds exponents mod d") {
    PauliError p(5, 1), q(5, 1);
    p.z.set(0, 2);
    p.x.set(0, 1);
    q.z.set(0, 4);
    q.x.set(0, 3);
    PauliError r = compose(p, q);
    CHECK(r.z[0] == 1);
    CHECK(r.x[0] == 4);

    CHECK(compose(p, inverse(p)).is_identity());
    CHECK(compose(inverse(q), q).is_identity());
}

TEST_CASE("composition is syndrome-compatible with exponent sums") {
    Rng rng(3, 0);
    for (int trial = 0; trial < 20; ++trial) {
        PauliError p = random_pauli(7, 4, rng);
        PauliError q = random_pauli(7, 4, rng);
        PauliError r = compose(p, q);
        for (int j = 0; j < 4; ++j) {
            CHECK(r.z[j] == mod_d(p.z[j] + q.z[j], 7));
            CHECK(r.x[j] == mod_d(p.x[j] + q.x[j], 7));
        }
    }
}

TEST_CASE("single qudit factorization order and recomposition") {
    PauliError p(3, 4);
    p.z.set(3, 2);
    p.x.set(1, 1);
    p.z.set(1, 2);
    auto steps = single_qudit_factorization(p);
    REQUIRE(steps.size() == 3);
    // ascending qudit, Z before X on qudit 1
    CHECK(steps[0] == SingleQuditStep{1, 2, 0});
    CHECK(steps[1] == SingleQuditStep{1, 0, 1});
    CHECK(steps[2] == SingleQuditStep{3, 2, 0});

    PauliError acc(3, 4);
    for (const auto& s : steps) {
        acc.z.add(s.qudit, s.z_exp);
        acc.x.add(s.qudit, s.x_exp);
    }
    CHECK(acc == p);

    CHECK(single_qudit_factorization(PauliError(3, 4)).empty());
}

TEST_CASE("support lists touched qudits ascending") {
    PauliError p(5, 6);
    p.x.set(4, 2);
    p.z.set(0, 1);
    p.z.set(4, 3);
    CHECK(support(p) == std::vector<int>{0, 4});
    CHECK(support(PauliError(5, 6)).empty());
}

TEST_CASE("pauli text form round-trips") {
    Rng rng(11, 0);
    for (int d : {2, 5, 7}) {
        PauliError p = random_pauli(d, 5, rng);
        CHECK(parse_pauli(format_pauli(p)) == p);
    }
    PauliError one(3, 2);
    one.z.set(1, 2);
    CHECK(format_pauli(one) == "d=3;Z=0,2;X=0,0");
}

TEST_CASE("malformed pauli text is rejected") {
    CHECK_THROWS_AS(parse_pauli("garbage"), validation_error);
    CHECK_THROWS_AS(parse_pauli("d=4;Z=9;X=0"), validation_error);          // digit out of range
    CHECK_THROWS_AS(parse_pauli("d=1;Z=0;X=0"), validation_error);          // d too small
    CHECK_THROWS_AS(parse_pauli("d=3;Z=1,2;X=1"), validation_error);        // length mismatch
    CHECK_THROWS_AS(parse_pauli("d=3;Z=1,x;X=1,0"), validation_error);      // not a digit
}

TEST_CASE("ditvec arithmetic wraps mod d") {
    DitVector v(5, 3);
    v.set(0, 7);  // reduced
    CHECK(v[0] == 2);
    v.add(0, -4);
    CHECK(v[0] == 3);
    v.add(2, 4);
    CHECK(v.sum() == 2);  // 3 + 0 + 4 = 7 = 2 mod 5

    DitVector w(5, 3);
    w.set(0, 4);
    CHECK(v.plus(w)[0] == 2);
    CHECK(v.negated()[0] == 2);
    CHECK(v.negated()[1] == 0);  // -0 stays 0
    CHECK_FALSE(v.is_zero());
    CHECK(DitVector(5, 3).is_zero());
}

TEST_CASE("mod_inverse on units, throws on non-units") {
    CHECK(mod_inverse(2, 5) == 3);
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(1, 2) == 1);
    for (int d : {5, 7, 9})
        for (int a = 1; a < d; ++a)
            if (std::gcd(a, d) == 1) CHECK(mod_d(a * mod_inverse(a, d), d) == 1);
    CHECK_THROWS_AS(mod_inverse(2, 4), validation_error);
    CHECK_THROWS_AS(mod_inverse(0, 5), validation_error);
    CHECK(mod_d(-3, 5) == 2);
    CHECK(mod_d(10, 5) == 0);
}
