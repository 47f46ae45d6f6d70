#include "qmg1/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace qmg1 {
namespace {

void check_lengths(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("distribution length mismatch");
}

double kl_term(double a, double m) {
    if (a <= 0.0) return 0.0;
    return a * std::log(a / m);
}

}  // namespace

double fidelity(std::span<const double> p, std::span<const double> q) {
    check_lengths(p, q);
    double bc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) bc += std::sqrt(p[i] * q[i]);
    return bc * bc;
}

double jsd(std::span<const double> p, std::span<const double> q) {
    check_lengths(p, q);
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        if (m <= 0.0) continue;
        total += 0.5 * (kl_term(p[i], m) + kl_term(q[i], m));
    }
    return total;
}

TvPair tv_distance(std::span<const double> p, std::span<const double> q) {
    check_lengths(p, q);
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
    return {0.5 * l1, l1};
}

double relative_error(double est, double ref) {
    if (ref == 0.0) throw std::domain_error("zero reference");
    return std::abs(est - ref) / std::abs(ref);
}

double log10_offset(double x) { return std::log10(x + 1e-10); }

MetricReport make_metric_report(std::span<const double> p, std::span<const double> q,
                                double l_est, double l_ref, double w_est, double w_ref) {
    const TvPair tv = tv_distance(p, q);
    return {fidelity(p, q), jsd(p, q), tv.halved, tv.l1,
            relative_error(l_est, l_ref), relative_error(w_est, w_ref)};
}

}  // namespace qmg1
