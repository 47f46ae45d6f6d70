#pragma once

#include <array>
#include <random>
#include <string>
#include <variant>

namespace qmg1 {

// Service-time laws. Parameters are validated once at construction;
// evaluation never throws.
struct Exponential {
    double rate;  // > 0; E[X] = 1/rate
};

struct Normal {
    // Left-truncated at 0 and renormalized, so the law stays a positive
    // service time even for wide variances.
    double mean;
    double variance;
};

struct Uniform {
    double lo;
    double hi;
};

struct Deterministic {
    double value;
};

struct PhaseType {
    // Initial phase probabilities and 3x3 sub-generator. Diagonal strictly
    // negative, off-diagonal nonnegative, row sums nonpositive.
    std::array<double, 3> alpha;
    std::array<std::array<double, 3>, 3> sub_generator;
};

struct Moments {
    double mean;
    double second_moment;
};

class ServiceDistribution {
public:
    using Variant = std::variant<Exponential, Normal, Uniform, Deterministic, PhaseType>;

    explicit ServiceDistribution(Variant law);

    static ServiceDistribution exponential(double rate);
    static ServiceDistribution normal(double mean, double variance);
    static ServiceDistribution uniform(double lo, double hi);
    static ServiceDistribution deterministic(double value);
    static ServiceDistribution phase_type(const std::array<double, 3>& alpha,
                                          const std::array<std::array<double, 3>, 3>& sub_generator);

    /// P(X <= t); 0 for t < 0, nondecreasing, tends to 1.
    double cdf(double t) const;

    /// First and second raw moments.
    Moments moments() const;

    /// Discrete hazard of bin r at slice width dt:
    ///   h(r) = [F((r+1)dt) - F(r dt)] / [1 - F(r dt)],
    /// clamped to [0,1]; returns 1 once survival drops below 1e-12.
    double hazard_bin(int r, double dt) const;

    /// Random variate; deterministic for a given rng state.
    double sample(std::mt19937_64& rng) const;

    const Variant& law() const { return law_; }
    std::string label() const;

private:
    Variant law_;
};

/// Three sequential phases with rates (lambda, lambda, 1): the coupled
/// phase-type configuration used by the experiment grid.
ServiceDistribution phase_type_chain(double lambda);

}  // namespace qmg1
