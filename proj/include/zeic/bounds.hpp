#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zeic/bigmath.hpp"

namespace zeic {

// Uniform reporting wrapper for the closed-form inequalities. The value is
// always computed; hypotheses_ok flags out-of-regime evaluation and lists
// the violated preconditions so experiments can filter on it.
struct BoundReport {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    double value = 0.0;
    bool hypotheses_ok = true;
    std::vector<std::string> violated;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            hypotheses_ok = false;
            violated.push_back(what);
        }
    }
};

// Time-sharing slack -log2(1-eps)/n; +infinity at eps = 1.
inline double lemma1_delta(double eps, int n) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("lemma1_delta: eps must lie in [0, 1]");
    if (n < 1) throw std::invalid_argument("lemma1_delta: n must be >= 1");
    if (eps == 1.0) return std::numeric_limits<double>::infinity();
    return -std::log2(1.0 - eps) / n;
}

// High-probability zero-error upper bound 2q(1 - 1/n)(1 + gamma), with its
// hypotheses n >= 2, gamma > 0 and q >= max{log2 n, (4/gamma) log2(3/eps)}
// checked when eps is supplied.
inline BoundReport theorem3_rhs(double q, int n, double gamma,
                                std::optional<double> eps = std::nullopt) {
    BoundReport r;
    r.name = "theorem3_rhs";
    r.params = {{"q", q}, {"n", static_cast<double>(n)}, {"gamma", gamma}};
    if (eps) r.params.emplace_back("eps", *eps);
    r.require(n >= 2, "n >= 2");
    r.require(gamma > 0.0, "gamma > 0");
    if (n >= 1) r.require(q >= std::log2(static_cast<double>(n)), "q >= log2(n)");
    if (eps) {
        if (*eps > 0.0 && gamma > 0.0)
            r.require(q >= (4.0 / gamma) * std::log2(3.0 / *eps),
                      "q >= (4/gamma) log2(3/eps)");
        else
            r.require(false, "eps > 0 for the hypothesis check");
    }
    r.value = 2.0 * q * (1.0 - 1.0 / static_cast<double>(n)) * (1.0 + gamma);
    return r;
}

// Rate guaranteed by a gamma-uniform pair of sizes Q^{n(1-delta_i)}:
//   2q(1 - ((delta1+delta2)/2 + 2(1+gamma) eps + delta)) - 2.
inline double eq2_rate(double q, double delta1, double delta2, double gamma, double eps,
                       double delta) {
    return 2.0 * q * (1.0 - ((delta1 + delta2) / 2.0 + 2.0 * (1.0 + gamma) * eps + delta)) - 2.0;
}

// Rate guaranteed by a (d, 2 eps)-diverse pair of sizes Q^{n(1-delta_i)}:
//   2q(1 - ((delta1+delta2)/2 + d)) - 2.
inline double theorem7_rate(double q, double delta1, double delta2, double d) {
    return 2.0 * q * (1.0 - ((delta1 + delta2) / 2.0 + d)) - 2.0;
}

// Rate of the scheme instantiated with a family pair matching the general
// construction's size guarantee, i.e. (delta1+delta2)/2 substituted by
// 1/2 - gamma/(2Q^2) - 1/(2q):
//   2q(1/2 + gamma/(2Q^2) - 2(1+gamma) eps - delta) - 1.
// Whenever eps > 1/(2Q^2) this is below q - 1.
inline double claim1_rhs(int q, double gamma, double eps, double delta) {
    if (q < 1) throw std::invalid_argument("claim1_rhs: q must be >= 1");
    const double q2 = std::pow(2.0, 2.0 * q); // Q^2 for Q = 2^q
    return 2.0 * q * (0.5 + gamma / (2.0 * q2) - 2.0 * (1.0 + gamma) * eps - delta) - 1.0;
}

// Rate of the scheme instantiated with a family pair matching the uniform
// upper bound, i.e. (delta1+delta2)/2 = 1/2 - gamma/4 - H(gamma/2)/2:
//   2q(1/2 + gamma/4 + H(gamma/2)/2 - 2 eps (1+gamma) - delta) - 2.
// Exceeds q for eps < (gamma + 2H(gamma/2)) / (8(1+gamma)) and large q.
inline double claim2_rhs(double q, double gamma, double eps, double delta) {
    return 2.0 * q *
               (0.5 + gamma / 4.0 + binary_entropy(gamma / 2.0) / 2.0 -
                2.0 * eps * (1.0 + gamma) - delta) -
           2.0;
}

inline double claim2_eps_threshold(double gamma) {
    return (gamma + 2.0 * binary_entropy(gamma / 2.0)) / (8.0 * (1.0 + gamma));
}

} // namespace zeic
