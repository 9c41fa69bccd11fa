#include "qd/pauli.hpp"

#include <sstream>

#include "qd/errors.hpp"

namespace qd {

PauliError::PauliError(DitVector z_, DitVector x_) : z(std::move(z_)), x(std::move(x_)) {
    if (z.d() != x.d() || z.size() != x.size()) throw validation_error("Z and X exponent vectors must share d and length");
}

PauliError compose(const PauliError& p, const PauliError& q) {
    if (p.d() != q.d() || p.n_qudits() != q.n_qudits()) throw validation_error("compose: operand shape mismatch");
    return PauliError(p.z.plus(q.z), p.x.plus(q.x));
}

PauliError inverse(const PauliError& p) { return PauliError(p.z.negated(), p.x.negated()); }

int commutation_exponent(const PauliError& p, const PauliError& q) {
    if (p.d() != q.d() || p.n_qudits() != q.n_qudits()) throw validation_error("commutation_exponent: operand shape mismatch");
    long long c = 0;
    for (std::size_t j = 0; j < p.n_qudits(); ++j) c += (long long)p.z[j] * q.x[j] - (long long)p.x[j] * q.z[j];
    return mod_d(c, p.d());
}

std::vector<int> support(const PauliError& p) {
    std::vector<int> s;
    for (std::size_t j = 0; j < p.n_qudits(); ++j)
        if (p.z[j] || p.x[j]) s.push_back(static_cast<int>(j));
    return s;
}

std::vector<SingleQuditStep> single_qudit_factorization(const PauliError& p) {
    std::vector<SingleQuditStep> steps;
    for (std::size_t j = 0; j < p.n_qudits(); ++j) {
        if (p.z[j]) steps.push_back({static_cast<int>(j), int(p.z[j]), 0});
        if (p.x[j]) steps.push_back({static_cast<int>(j), 0, int(p.x[j])});
    }
    return steps;
}

std::string format_pauli(const PauliError& p) {
    return "d=" + std::to_string(p.d()) + ";Z=" + p.z.to_csv() + ";X=" + p.x.to_csv();
}

static std::vector<uint8_t> parse_csv(const std::string& body, int d, const std::string& label) {
    std::vector<uint8_t> out;
    if (body.empty()) return out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int v;
        try {
            std::size_t pos = 0;
            v = std::stoi(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw validation_error("bad " + label + " entry '" + tok + "' in Pauli text");
        }
        if (v < 0 || v >= d) throw validation_error(label + " exponent " + std::to_string(v) + " out of range for d=" + std::to_string(d));
        out.push_back(static_cast<uint8_t>(v));
    }
    return out;
}

PauliError parse_pauli(const std::string& text) {
    // expected shape: d=<int>;Z=<csv>;X=<csv>
    auto semi1 = text.find(';');
    auto semi2 = text.find(';', semi1 == std::string::npos ? semi1 : semi1 + 1);
    if (text.rfind("d=", 0) != 0 || semi1 == std::string::npos || semi2 == std::string::npos)
        throw validation_error("Pauli text must look like d=<d>;Z=<csv>;X=<csv>");
    std::string dpart = text.substr(2, semi1 - 2);
    std::string zpart = text.substr(semi1 + 1, semi2 - semi1 - 1);
    std::string xpart = text.substr(semi2 + 1);
    if (zpart.rfind("Z=", 0) != 0 || xpart.rfind("X=", 0) != 0)
        throw validation_error("Pauli text must look like d=<d>;Z=<csv>;X=<csv>");
    int d;
    try {
        d = std::stoi(dpart);
    } catch (const std::exception&) {
        throw validation_error("bad dimension '" + dpart + "' in Pauli text");
    }
    if (d < 2) throw validation_error("qudit dimension must be >= 2");
    auto zv = parse_csv(zpart.substr(2), d, "Z");
    auto xv = parse_csv(xpart.substr(2), d, "X");
    if (zv.size() != xv.size()) throw validation_error("Z and X exponent lists differ in length");
    return PauliError(DitVector(d, std::move(zv)), DitVector(d, std::move(xv)));
}

}  // namespace qd
