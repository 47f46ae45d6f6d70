#include "qmg1/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmg1 {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

constexpr double kSurvivalFloor = 1e-12;
constexpr double kSeriesTol = 1e-12;

double inf_norm(const Mat3& m) {
    double best = 0.0;
    for (const auto& row : m) {
        double s = std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]);
        best = std::max(best, s);
    }
    return best;
}

Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

// exp(M) by scaling-and-squaring: halve until ||M||_inf <= 0.5, Taylor
// series to 1e-12, square back up.
Mat3 expm3(Mat3 m) {
    int squarings = 0;
    while (inf_norm(m) > 0.5) {
        for (auto& row : m)
            for (auto& v : row) v *= 0.5;
        ++squarings;
    }
    Mat3 result{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    Mat3 term = result;
    for (int k = 1; k <= 40; ++k) {
        term = matmul(term, m);
        for (auto& row : term)
            for (auto& v : row) v /= k;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) result[i][j] += term[i][j];
        if (inf_norm(term) < kSeriesTol) break;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

// Solve M x = b for the 3x3 sub-generator (invertible by construction).
Vec3 solve3(Mat3 m, Vec3 b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::abs(m[col][col]) < 1e-300) throw std::invalid_argument("singular sub-generator");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    return {b[0] / m[0][0], b[1] / m[1][1], b[2] / m[2][2]};
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

void validate(const Exponential& d) {
    if (!(d.rate > 0.0)) throw std::invalid_argument("exponential rate must be > 0");
}

void validate(const Normal& d) {
    if (!(d.variance > 0.0)) throw std::invalid_argument("normal variance must be > 0");
    if (!std::isfinite(d.mean)) throw std::invalid_argument("normal mean must be finite");
}

void validate(const Uniform& d) {
    if (!(d.lo < d.hi)) throw std::invalid_argument("uniform requires lo < hi");
    if (d.lo < 0.0) throw std::invalid_argument("uniform requires lo >= 0");
}

void validate(const Deterministic& d) {
    if (!(d.value > 0.0)) throw std::invalid_argument("deterministic value must be > 0");
}

void validate(const PhaseType& d) {
    double alpha_sum = 0.0;
    for (double a : d.alpha) {
        if (a < 0.0) throw std::invalid_argument("phase-type alpha entries must be >= 0");
        alpha_sum += a;
    }
    if (std::abs(alpha_sum - 1.0) > 1e-9)
        throw std::invalid_argument("phase-type alpha must sum to 1");
    for (int i = 0; i < 3; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < 3; ++j) {
            double v = d.sub_generator[i][j];
            if (i == j && !(v < 0.0))
                throw std::invalid_argument("phase-type diagonal must be strictly negative");
            if (i != j && v < 0.0)
                throw std::invalid_argument("phase-type off-diagonal must be nonnegative");
            row_sum += v;
        }
        if (row_sum > 1e-12) throw std::invalid_argument("phase-type row sums must be <= 0");
    }
}

double truncation_point(const Normal& d) { return -d.mean / std::sqrt(d.variance); }

}  // namespace

ServiceDistribution::ServiceDistribution(Variant law) : law_(std::move(law)) {
    std::visit([](const auto& d) { validate(d); }, law_);
}

ServiceDistribution ServiceDistribution::exponential(double rate) {
    return ServiceDistribution(Exponential{rate});
}

ServiceDistribution ServiceDistribution::normal(double mean, double variance) {
    return ServiceDistribution(Normal{mean, variance});
}

ServiceDistribution ServiceDistribution::uniform(double lo, double hi) {
    return ServiceDistribution(Uniform{lo, hi});
}

ServiceDistribution ServiceDistribution::deterministic(double value) {
    return ServiceDistribution(Deterministic{value});
}

ServiceDistribution ServiceDistribution::phase_type(const std::array<double, 3>& alpha,
                                                    const Mat3& sub_generator) {
    return ServiceDistribution(PhaseType{alpha, sub_generator});
}

double ServiceDistribution::cdf(double t) const {
    if (t < 0.0) return 0.0;
    return std::visit(
        [t](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return -std::expm1(-d.rate * t);
            } else if constexpr (std::is_same_v<T, Normal>) {
                double sigma = std::sqrt(d.variance);
                double z0 = std_normal_cdf(truncation_point(d));
                double f = (std_normal_cdf((t - d.mean) / sigma) - z0) / (1.0 - z0);
                return std::clamp(f, 0.0, 1.0);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (t <= d.lo) return 0.0;
                if (t >= d.hi) return 1.0;
                return (t - d.lo) / (d.hi - d.lo);
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                return t >= d.value ? 1.0 : 0.0;
            } else {
                Mat3 scaled = d.sub_generator;
                for (auto& row : scaled)
                    for (auto& v : row) v *= t;
                Mat3 e = expm3(scaled);
                double survival = 0.0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) survival += d.alpha[i] * e[i][j];
                return std::clamp(1.0 - survival, 0.0, 1.0);
            }
        },
        law_);
}

Moments ServiceDistribution::moments() const {
    return std::visit(
        [](const auto& d) -> Moments {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                double m = 1.0 / d.rate;
                return {m, 2.0 * m * m};
            } else if constexpr (std::is_same_v<T, Normal>) {
                double sigma = std::sqrt(d.variance);
                double a = truncation_point(d);
                double z = 1.0 - std_normal_cdf(a);
                double lambda_a = std_normal_pdf(a) / z;
                double mean = d.mean + sigma * lambda_a;
                double var = d.variance * (1.0 + a * lambda_a - lambda_a * lambda_a);
                return {mean, var + mean * mean};
            } else if constexpr (std::is_same_v<T, Uniform>) {
                double mean = 0.5 * (d.lo + d.hi);
                double w = d.hi - d.lo;
                return {mean, mean * mean + w * w / 12.0};
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                return {d.value, d.value * d.value};
            } else {
                // mean = -alpha T^-1 1, second = 2 alpha T^-2 1.
                Vec3 x = solve3(d.sub_generator, {1.0, 1.0, 1.0});
                Vec3 y = solve3(d.sub_generator, x);
                double mean = 0.0, second = 0.0;
                for (int i = 0; i < 3; ++i) {
                    mean -= d.alpha[i] * x[i];
                    second += 2.0 * d.alpha[i] * y[i];
                }
                return {mean, second};
            }
        },
        law_);
}

double ServiceDistribution::hazard_bin(int r, double dt) const {
    double survival = 1.0 - cdf(r * dt);
    if (survival <= kSurvivalFloor) return 1.0;
    double mass = cdf((r + 1) * dt) - cdf(r * dt);
    return std::clamp(mass / survival, 0.0, 1.0);
}

double ServiceDistribution::sample(std::mt19937_64& rng) const {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::exponential_distribution<double>(d.rate)(rng);
            } else if constexpr (std::is_same_v<T, Normal>) {
                std::normal_distribution<double> gauss(d.mean, std::sqrt(d.variance));
                double v;
                do {
                    v = gauss(rng);
                } while (v <= 0.0);
                return v;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return std::uniform_real_distribution<double>(d.lo, d.hi)(rng);
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                return d.value;
            } else {
                std::uniform_real_distribution<double> unit(0.0, 1.0);
                double u = unit(rng);
                int phase = 2;
                double acc = 0.0;
                for (int i = 0; i < 3; ++i) {
                    acc += d.alpha[i];
                    if (u <= acc) {
                        phase = i;
                        break;
                    }
                }
                double t = 0.0;
                while (true) {
                    double exit_rate = -d.sub_generator[phase][phase];
                    t += std::exponential_distribution<double>(exit_rate)(rng);
                    double v = unit(rng) * exit_rate;
                    double cum = 0.0;
                    int next = -1;
                    for (int j = 0; j < 3; ++j) {
                        if (j == phase) continue;
                        cum += d.sub_generator[phase][j];
                        if (v <= cum) {
                            next = j;
                            break;
                        }
                    }
                    if (next < 0) return t;  // absorbed
                    phase = next;
                }
            }
        },
        law_);
}

std::string ServiceDistribution::label() const {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) return "exponential";
            else if constexpr (std::is_same_v<T, Normal>) return "normal";
            else if constexpr (std::is_same_v<T, Uniform>) return "uniform";
            else if constexpr (std::is_same_v<T, Deterministic>) return "deterministic";
            else return "phase_type";
        },
        law_);
}

ServiceDistribution phase_type_chain(double lambda) {
    return ServiceDistribution::phase_type(
        {1.0, 0.0, 0.0},
        {{{-lambda, lambda, 0.0}, {0.0, -lambda, lambda}, {0.0, 0.0, -1.0}}});
}

}  // namespace qmg1
