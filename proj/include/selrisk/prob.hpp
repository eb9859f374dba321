#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "selrisk/errors.hpp"

namespace selrisk {

inline constexpr double kExactTol = 1e-12;   // tolerance for exact identities
inline constexpr double kBoundaryTol = 1e-9; // tolerance for set membership

/// Finite probability space: one strictly positive weight per atom.
class ProbSpace {
public:
    ProbSpace() : probs_{1.0} {} // trivial one-atom space

    static ProbSpace make(std::vector<double> probs);

    std::size_t atom_count() const { return probs_.size(); }
    double prob(std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    // All atoms carry the same weight (bitwise equal after normalization).
    bool is_uniform() const;

private:
    explicit ProbSpace(std::vector<double> probs) : probs_(std::move(probs)) {}
    std::vector<double> probs_;
};

/// Random variable as a per-atom value table.
struct RandomVariable {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Random vector: atoms x d table, stored row-per-atom.
struct RandomVector {
    std::vector<std::vector<double>> rows;

    std::size_t atom_count() const { return rows.size(); }
    std::size_t dim() const { return rows.empty() ? 0 : rows.front().size(); }
    RandomVariable component(std::size_t j) const;
};

/// A discrete distribution in canonical form: values strictly increasing,
/// probabilities of equal atom values merged. `cum` holds the running
/// cumulative probability, ending at 1.
struct QuantileFunction {
    std::vector<double> values;
    std::vector<double> cum;

    std::size_t size() const { return values.size(); }
    // F^{-1}(t): first value whose cumulative probability reaches t.
    double quantile(double t) const;
};

// Sorted (value, probability) pairs with equal values merged. This is the
// canonical summation order shared by every distribution-determined risk
// measure, which keeps outputs bit-identical under atom permutations of a
// uniform space.
QuantileFunction distribution_of(const std::vector<double>& values,
                                 const std::vector<double>& probs);

ProbSpace make_space(std::vector<double> probs);

double expectation(const RandomVariable& xi, const ProbSpace& sp);

QuantileFunction quantile_function(const RandomVariable& xi, const ProbSpace& sp);

RandomVariable indicator(const std::set<std::size_t>& atoms, const ProbSpace& sp);

void require_same_length(const RandomVariable& xi, const ProbSpace& sp);

} // namespace selrisk
