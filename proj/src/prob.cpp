#include "selrisk/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace selrisk {

ProbSpace ProbSpace::make(std::vector<double> probs) {
    if (probs.empty())
        throw NonPositiveProbability("probability space needs at least one atom");
    for (double p : probs)
        if (!(p > 0.0))
            throw NonPositiveProbability("atom probability must be strictly positive");
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-9)
        throw ProbabilitiesDoNotSumToOne("atom probabilities sum to " + std::to_string(sum));
    for (double& p : probs)
        p /= sum;
    return ProbSpace(std::move(probs));
}

bool ProbSpace::is_uniform() const {
    for (double p : probs_)
        if (p != probs_.front())
            return false;
    return true;
}

ProbSpace make_space(std::vector<double> probs) { return ProbSpace::make(std::move(probs)); }

RandomVariable RandomVector::component(std::size_t j) const {
    RandomVariable xi;
    xi.values.reserve(rows.size());
    for (const auto& row : rows) {
        if (j >= row.size())
            throw DimensionMismatch("component index exceeds vector dimension");
        xi.values.push_back(row[j]);
    }
    return xi;
}

void require_same_length(const RandomVariable& xi, const ProbSpace& sp) {
    if (xi.size() != sp.atom_count())
        throw DimensionMismatch("random variable has " + std::to_string(xi.size()) +
                                " values for " + std::to_string(sp.atom_count()) + " atoms");
}

double QuantileFunction::quantile(double t) const {
    for (std::size_t k = 0; k < cum.size(); ++k)
        if (cum[k] >= t)
            return values[k];
    return values.back();
}

QuantileFunction distribution_of(const std::vector<double>& values,
                                 const std::vector<double>& probs) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    QuantileFunction q;
    for (std::size_t i : order) {
        if (!q.values.empty() && values[i] == q.values.back()) {
            q.cum.back() += probs[i];
        } else {
            q.values.push_back(values[i]);
            q.cum.push_back((q.cum.empty() ? 0.0 : q.cum.back()) + probs[i]);
        }
    }
    if (!q.cum.empty())
        q.cum.back() = 1.0; // absorb rounding in the last increment
    return q;
}

QuantileFunction quantile_function(const RandomVariable& xi, const ProbSpace& sp) {
    require_same_length(xi, sp);
    return distribution_of(xi.values, sp.probs());
}

double expectation(const RandomVariable& xi, const ProbSpace& sp) {
    require_same_length(xi, sp);
    // Summation in sorted-value order, matching the other distribution-based
    // functionals bit for bit.
    const QuantileFunction q = quantile_function(xi, sp);
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        acc += q.values[k] * (q.cum[k] - prev);
        prev = q.cum[k];
    }
    return acc;
}

RandomVariable indicator(const std::set<std::size_t>& atoms, const ProbSpace& sp) {
    for (std::size_t i : atoms)
        if (i >= sp.atom_count())
            throw IndexOutOfRange("atom index " + std::to_string(i) + " out of range");
    RandomVariable xi;
    xi.values.assign(sp.atom_count(), 0.0);
    for (std::size_t i : atoms)
        xi.values[i] = 1.0;
    return xi;
}

} // namespace selrisk
