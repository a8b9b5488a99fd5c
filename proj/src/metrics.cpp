#include "pbv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace pbv {

std::vector<RocPoint> roc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) fail("metrics", "scores/labels length mismatch");
    std::size_t n_t = 0, n_nt = 0;
    for (int l : labels) (l == 1 ? n_t : n_nt) += 1;
    if (n_t == 0 || n_nt == 0) fail("metrics", "both classes must be present");
    for (double s : scores)
        if (!std::isfinite(s)) fail("metrics", "non-finite score");

    std::vector<std::pair<double, int>> v(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) v[i] = {scores[i], labels[i]};
    std::sort(v.begin(), v.end());

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<RocPoint> curve;
    curve.push_back({-inf, 1.0, 0.0});

    // At threshold t (accept iff score >= t):
    //   far = #{nontarget >= t} / n_nt,  frr = #{target < t} / n_t
    std::size_t t_below = 0, nt_below = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        double t = v[i].first;
        curve.push_back({t, static_cast<double>(n_nt - nt_below) / n_nt,
                         static_cast<double>(t_below) / n_t});
        while (i < v.size() && v[i].first == t) {
            (v[i].second == 1 ? t_below : nt_below) += 1;
            ++i;
        }
    }
    curve.push_back({inf, 0.0, 1.0});
    return curve;
}

std::vector<RocPoint> roc_of_table(const ScoreTable& table, const std::string& comparator) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (const ScoreRow& r : table.rows) {
        if (r.comparator != comparator) continue;
        scores.push_back(r.score);
        labels.push_back(r.label);
    }
    if (scores.empty()) fail("metrics", "no rows for comparator " + comparator);
    return roc(scores, labels);
}

namespace {

// One representative point per attained FAR level (the first point of each
// run, i.e. the smallest FRR at that FAR). FAR is then strictly decreasing
// along the result, which makes frr-vs-far interpolation single valued and
// keeps eer() and frr_at_far() mutually consistent.
std::vector<RocPoint> far_level_points(const std::vector<RocPoint>& curve) {
    std::vector<RocPoint> reps;
    for (const RocPoint& p : curve) {
        if (reps.empty() || p.far < reps.back().far) reps.push_back(p);
    }
    return reps;
}

} // namespace

double eer(const std::vector<RocPoint>& curve) {
    std::vector<RocPoint> reps = far_level_points(curve);
    // d = frr - far rises from -1 to >= 0 along reps.
    for (std::size_t i = 0; i < reps.size(); ++i) {
        double d = reps[i].frr - reps[i].far;
        if (d == 0.0) return reps[i].far;
        if (d > 0.0) {
            const RocPoint& a = reps[i - 1];
            const RocPoint& b = reps[i];
            double denom = (b.frr - a.frr) - (b.far - a.far);
            double s = (a.far - a.frr) / denom;
            return a.far + s * (b.far - a.far);
        }
    }
    fail("metrics", "no EER crossing found");
}

FrrAtFar frr_at_far(const std::vector<RocPoint>& curve, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) fail("metrics", "alpha must be in [0,1]");
    std::vector<RocPoint> reps = far_level_points(curve);
    if (alpha >= reps.front().far) return {reps.front().frr, reps.front().threshold, false};
    for (std::size_t i = 1; i < reps.size(); ++i) {
        if (reps[i].far == alpha) return {reps[i].frr, reps[i].threshold, false};
        if (reps[i].far < alpha) {
            const RocPoint& a = reps[i - 1];
            const RocPoint& b = reps[i];
            if (b.far == 0.0) {
                // alpha below the smallest achievable nonzero FAR.
                return {b.frr, b.threshold, true};
            }
            double s = (a.far - alpha) / (a.far - b.far);
            return {a.frr + s * (b.frr - a.frr), a.threshold + s * (b.threshold - a.threshold),
                    false};
        }
    }
    const RocPoint& last = reps.back();
    return {last.frr, last.threshold, last.far > alpha};
}

double normal_quantile(double p) {
    // Wichura's algorithm AS241 (PPND16).
    if (!(p > 0.0 && p < 1.0)) fail("metrics", "normal_quantile needs p in (0,1)");
    double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) *
                        r +
                    4.5921953931549871457e4) *
                       r +
                   1.3731693765509461125e4) *
                      r +
                  1.9715909503065514427e3) *
                     r +
                 1.3314166789178437745e2) *
                    r +
                3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) *
                        r +
                    2.1213794301586595867e4) *
                       r +
                   5.3941960214247511077e3) *
                      r +
                  6.8718700749205790830e2) *
                     r +
                 4.2313330701600911252e1) *
                    r +
                1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        v = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) *
                     r +
                 1.27045825245236838258e0) *
                    r +
                3.64784832476320460504e0) *
                   r +
               5.76949722146069140550e0) *
                  r +
              4.63033784615654529590e0) *
                 r +
             1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) *
                     r +
                 1.48103976427480074590e-1) *
                    r +
                6.89767334985100004550e-1) *
                   r +
               1.67638483018380384940e0) *
                  r +
              2.05319162663775882187e0) *
                 r +
             1.0);
    } else {
        r -= 5.0;
        v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) *
                     r +
                 2.65321895265761230930e-2) *
                    r +
                2.96560571828504891230e-1) *
                   r +
               1.78482653991729133580e0) *
                  r +
              5.46378491116411436990e0) *
                 r +
             6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) *
                     r +
                 7.86869131145613259100e-4) *
                    r +
                1.48753612908506148525e-2) *
                   r +
               1.36929880922735805310e-1) *
                  r +
              5.99832206555887937690e-1) *
                 r +
             1.0);
    }
    return (q < 0.0) ? -v : v;
}

std::vector<DetPoint> det_points(const std::vector<RocPoint>& curve) {
    std::vector<DetPoint> out;
    for (const RocPoint& p : curve) {
        if (p.far <= 0.0 || p.far >= 1.0 || p.frr <= 0.0 || p.frr >= 1.0) continue;
        out.push_back({p.threshold, p.far, p.frr, normal_quantile(p.far), normal_quantile(p.frr)});
    }
    return out;
}

void write_det(const std::vector<DetPoint>& points, const std::string& path) {
    std::ostringstream out;
    out << "threshold,far,frr,nd_far,nd_frr\n";
    char buf[160];
    for (const DetPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.threshold, p.far,
                      p.frr, p.nd_far, p.nd_frr);
        out << buf;
    }
    atomic_write_file(path, out.str());
}

} // namespace pbv
