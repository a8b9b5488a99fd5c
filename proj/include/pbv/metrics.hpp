#pragma once

#include <vector>

#include "pbv/core.hpp"

namespace pbv {

/// One verification operating point. Scores are similarities: a trial is
/// accepted iff score >= threshold (ties accepted).
struct RocPoint {
    double threshold = 0.0;
    double far = 0.0; // false acceptance rate
    double frr = 0.0; // false rejection rate
};

/// Operating points at every distinct score, plus the (far=1,frr=0) and
/// (far=0,frr=1) endpoints. Ordered by rising threshold, so far is
/// non-increasing and frr non-decreasing along the curve.
std::vector<RocPoint> roc(const std::vector<double>& scores, const std::vector<int>& labels);

std::vector<RocPoint> roc_of_table(const ScoreTable& table, const std::string& comparator);

/// Interpolated equal error rate: the value where far - frr crosses zero
/// along the ROC polyline.
double eer(const std::vector<RocPoint>& curve);

struct FrrAtFar {
    double frr = 0.0;
    double threshold = 0.0;
    /// Set when alpha lies below the smallest achievable nonzero FAR; frr is
    /// then reported at FAR = 0.
    bool saturated = false;
};

FrrAtFar frr_at_far(const std::vector<RocPoint>& curve, double alpha);

/// Inverse standard normal CDF (Wichura AS241), |error| < 1e-9 over
/// (1e-12, 1-1e-12).
double normal_quantile(double p);

struct DetPoint {
    double threshold = 0.0;
    double far = 0.0;
    double frr = 0.0;
    double nd_far = 0.0; // normal_quantile(far)
    double nd_frr = 0.0;
};

/// DET polyline: interior ROC points mapped through the inverse normal CDF.
/// Endpoints with far or frr outside (0,1) are dropped.
std::vector<DetPoint> det_points(const std::vector<RocPoint>& curve);

/// DET CSV with header threshold,far,frr,nd_far,nd_frr.
void write_det(const std::vector<DetPoint>& points, const std::string& path);

} // namespace pbv
