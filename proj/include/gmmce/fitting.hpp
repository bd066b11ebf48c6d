#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmmce/gmm.hpp"
#include "gmmce/histogram.hpp"

namespace gmmce {

struct FitParams {
    double alpha = 0.95;        // coverage target, (0, 1]
    double sigma0 = 2.0;        // mean-search kernel std, > 0
    int smooth_n = 2;           // averaging half-width, >= 1
    int max_components = 20;    // hard cap, >= 1
    double significance = 0.001;  // dynamic-range / stop threshold, [0, 1)
};

inline void validate(const FitParams& p) {
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
        throw std::invalid_argument("alpha must be in (0, 1], got " + std::to_string(p.alpha));
    }
    if (!(p.sigma0 > 0.0)) {
        throw std::invalid_argument("sigma0 must be > 0, got " + std::to_string(p.sigma0));
    }
    if (p.smooth_n < 1) {
        throw std::invalid_argument("smooth half-width must be >= 1, got " +
                                    std::to_string(p.smooth_n));
    }
    if (p.max_components < 1) {
        throw std::invalid_argument("max-components must be >= 1, got " +
                                    std::to_string(p.max_components));
    }
    if (!(p.significance >= 0.0 && p.significance < 1.0)) {
        throw std::invalid_argument("significance must be in [0, 1), got " +
                                    std::to_string(p.significance));
    }
}

// Search window of one component: nearest local minima around its mean.
struct Boundaries {
    int lb = 0;
    int ub = 255;

    bool operator==(const Boundaries&) const = default;
};

// Mean of the next component: the intensity whose Gaussian-kernel correlation
// with the histogram is maximal. Ties break toward the smallest intensity.
inline int estimate_mean(const Histogram& h, double sigma0) {
    if (!(sigma0 > 0.0)) {
        throw std::invalid_argument("estimate_mean: sigma0 must be positive");
    }
    if (!(h.total > 0.0)) {
        throw std::invalid_argument("estimate_mean: histogram has no mass");
    }
    int best_i = 0;
    double best_s = -1.0;
    for (int i = 0; i < 256; ++i) {
        double s = 0.0;
        for (int j = 0; j < 256; ++j) {
            s += gaussian_pdf(static_cast<double>(j), static_cast<double>(i), sigma0) *
                 h.bins[j];
        }
        if (s > best_s) {
            best_s = s;
            best_i = i;
        }
    }
    return best_i;
}

namespace detail {

// Elementwise local minimum; out-of-range neighbors count as +infinity.
inline bool is_local_min(const Histogram& h, int i) {
    const bool left_ok = (i - 1 < 0) || h.bins[i] <= h.bins[i - 1];
    const bool right_ok = (i + 1 > 255) || h.bins[i] <= h.bins[i + 1];
    return left_ok && right_ok;
}

}  // namespace detail

// Nearest local minima of the smoothed histogram on each side of mu
// (inclusive scan). Plateau runs resolve to the run edge nearest mu.
// Defaults to 0 / 255 when no minimum exists on that side.
inline Boundaries find_boundaries(const Histogram& h_s, int mu) {
    if (mu < 0 || mu > 255) {
        throw std::invalid_argument("find_boundaries: mu out of range");
    }
    Boundaries b{0, 255};
    for (int i = mu; i >= 0; --i) {
        if (detail::is_local_min(h_s, i)) {
            int j = i;
            while (j + 1 <= mu && h_s.bins[j + 1] == h_s.bins[i]) ++j;
            b.lb = j;
            break;
        }
    }
    for (int i = mu; i <= 255; ++i) {
        if (detail::is_local_min(h_s, i)) {
            int j = i;
            while (j - 1 >= mu && h_s.bins[j - 1] == h_s.bins[i]) --j;
            b.ub = j;
            break;
        }
    }
    return b;
}

// One drop-ratio estimate d / sqrt(2 ln R) per displacement with a strictly
// decaying, positive sample; invalid displacements are skipped.
inline std::vector<double> variance_candidates(const Histogram& h_s, int mu,
                                               const Boundaries& b) {
    const double peak = h_s.bins[mu];
    std::vector<double> cands;
    for (int d = 1; d <= b.ub - mu; ++d) {
        const double v = h_s.bins[mu + d];
        if (v > 0.0 && peak > v) {
            cands.push_back(d / std::sqrt(2.0 * std::log(peak / v)));
        }
    }
    for (int d = 1; d <= mu - b.lb; ++d) {
        const double v = h_s.bins[mu - d];
        if (v > 0.0 && peak > v) {
            cands.push_back(d / std::sqrt(2.0 * std::log(peak / v)));
        }
    }
    return cands;
}

namespace detail {

inline double median(std::vector<double> vals) {
    std::sort(vals.begin(), vals.end());
    const std::size_t m = vals.size();
    if (m % 2 == 1) return vals[m / 2];
    return 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
}

}  // namespace detail

// Median of the drop-ratio candidates, clamped to sigma_floor; sigma_floor
// when no displacement yields a valid candidate.
inline double estimate_variance(const Histogram& h_s, int mu, const Boundaries& b) {
    if (!(h_s.bins[mu] > 0.0)) {
        throw std::invalid_argument("estimate_variance: zero frequency at mu");
    }
    const std::vector<double> cands = variance_candidates(h_s, mu, b);
    if (cands.empty()) return sigma_floor;
    return std::max(detail::median(cands), sigma_floor);
}

// Weight that zeroes the working histogram at mu after subtraction.
inline double estimate_weight(const Histogram& h_s, int mu, double sigma) {
    if (!(sigma >= sigma_floor)) {
        throw std::invalid_argument("estimate_weight: sigma below sigma_floor");
    }
    if (!(h_s.bins[mu] > 0.0)) {
        throw std::invalid_argument("estimate_weight: zero frequency at mu");
    }
    return std::sqrt(2.0 * std::numbers::pi * sigma * sigma) * h_s.bins[mu];
}

// Removes one component's contribution, clamping bins at zero.
inline Histogram subtract_component(const Histogram& h, const GaussianComponent& c) {
    Histogram out;
    for (int i = 0; i < 256; ++i) {
        out.bins[i] = std::max(
            0.0, h.bins[i] - c.weight * gaussian_pdf(static_cast<double>(i), c.mu, c.sigma));
    }
    out.recompute_total();
    return out;
}

// Greedy extraction: smooth once, then repeatedly estimate one component and
// subtract it from the working histogram until the coverage target alpha is
// reached (or a stop condition fires).
inline GmmModel fit_gmm(const Histogram& h_org, const FitParams& params = {}) {
    validate(params);
    const double total = std::accumulate(h_org.bins.begin(), h_org.bins.end(), 0.0);
    if (!(total > 0.0)) {
        throw std::invalid_argument("fit_gmm: histogram has no mass");
    }

    GmmModel model;
    model.alpha = params.alpha;
    model.source_total = total;

    Histogram work = smooth(h_org, params.smooth_n);
    double cum = 0.0;
    while (true) {
        if (cum >= params.alpha * total) break;
        if (static_cast<int>(model.components.size()) >= params.max_components) break;
        const double peak = *std::max_element(work.bins.begin(), work.bins.end());
        if (peak <= 0.0 || peak < params.significance * total) break;

        int mu = estimate_mean(work, params.sigma0);
        if (work.bins[mu] <= 0.0) {
            // The correlation can peak inside a gap of a comb-like histogram;
            // retarget to the tallest bin so the drop-ratio math is defined.
            mu = static_cast<int>(
                std::max_element(work.bins.begin(), work.bins.end()) - work.bins.begin());
        }

        const Boundaries b = find_boundaries(work, mu);
        const std::vector<double> cands = variance_candidates(work, mu, b);
        double sigma, w;
        if (!cands.empty()) {
            sigma = std::max(detail::median(cands), sigma_floor);
            w = estimate_weight(work, mu, sigma);
        } else {
            // Flat neighborhood (delta after smoothing, or a plateau): take the
            // mass of the equal-valued run as the weight of a floored spike.
            sigma = sigma_floor;
            int a = mu, z = mu;
            while (a - 1 >= 0 && work.bins[a - 1] == work.bins[mu]) --a;
            while (z + 1 <= 255 && work.bins[z + 1] == work.bins[mu]) ++z;
            w = 0.0;
            for (int i = a; i <= z; ++i) w += work.bins[i];
        }
        w = std::min(w, total - cum);  // keep the alpha accounting sound

        const GaussianComponent comp{static_cast<double>(mu), sigma, w};
        model.components.push_back(comp);
        cum += w;
        work = subtract_component(work, comp);
    }
    return model;
}

}  // namespace gmmce
