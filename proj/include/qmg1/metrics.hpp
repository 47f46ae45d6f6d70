#pragma once

#include <span>

namespace qmg1 {

/// Squared Bhattacharyya coefficient (sum sqrt(p q))^2. Symmetric, 1 iff
/// p = q, 0 on disjoint supports. Throws on length mismatch.
double fidelity(std::span<const double> p, std::span<const double> q);

/// Jensen-Shannon divergence in nats against the mixture midpoint;
/// bounded by ln 2. 0*ln(0/x) terms contribute 0.
double jsd(std::span<const double> p, std::span<const double> q);

/// Both total-variation conventions: halved = (1/2) sum |p - q| and the
/// unhalved L1 sum.
struct TvPair {
    double halved;
    double l1;
};
TvPair tv_distance(std::span<const double> p, std::span<const double> q);

/// |est - ref| / |ref|; throws std::domain_error on ref == 0.
double relative_error(double est, double ref);

/// log10(x + 1e-10), the offset transform used for sensitivity sweeps.
double log10_offset(double x);

struct MetricReport {
    double fidelity;
    double jsd;
    double tv_halved;
    double l1_gap;
    double rel_err_L;
    double rel_err_W;
};

MetricReport make_metric_report(std::span<const double> p, std::span<const double> q,
                                double l_est, double l_ref, double w_est, double w_ref);

}  // namespace qmg1
