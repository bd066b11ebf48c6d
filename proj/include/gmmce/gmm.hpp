#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gmmce/histogram.hpp"

namespace gmmce {

// Components narrower than half an intensity level are meaningless at 8-bit
// quantization; estimators clamp up to this floor.
inline constexpr double sigma_floor = 0.5;

struct GaussianComponent {
    double mu = 0.0;      // intensity levels, [0, 255]
    double sigma = 0.0;   // intensity levels, >= sigma_floor
    double weight = 0.0;  // pixel-count units

    bool operator==(const GaussianComponent&) const = default;
};

// Components are kept in extraction order.
struct GmmModel {
    std::vector<GaussianComponent> components;
    double alpha = 0.95;
    double source_total = 0.0;
};

inline double gaussian_pdf(double x, double mu, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian_pdf: sigma must be positive");
    }
    const double dx = x - mu;
    return std::exp(-(dx * dx) / (2.0 * sigma * sigma)) /
           (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

inline double evaluate(const GmmModel& model, int intensity) {
    double s = 0.0;
    for (const auto& c : model.components) {
        s += c.weight * gaussian_pdf(static_cast<double>(intensity), c.mu, c.sigma);
    }
    return s;
}

inline double residual_sse(const GmmModel& model, const Histogram& h) {
    double sse = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double diff = h.bins[i] - evaluate(model, i);
        sse += diff * diff;
    }
    return sse;
}

// --- dump format (CLI `fit` output) ---

struct GmmDump {
    GmmModel model;
    DynamicRange range;
};

inline std::string gmm_to_json(const GmmModel& model, const DynamicRange& range) {
    nlohmann::json j;
    j["alpha"] = model.alpha;
    j["source_total"] = model.source_total;
    j["lo"] = range.lo;
    j["hi"] = range.hi;
    j["components"] = nlohmann::json::array();
    for (const auto& c : model.components) {
        j["components"].push_back({{"mu", c.mu}, {"sigma", c.sigma}, {"weight", c.weight}});
    }
    return j.dump(2) + "\n";
}

inline GmmDump gmm_from_json(std::string_view text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    GmmDump dump;
    dump.model.alpha = j.at("alpha").get<double>();
    dump.model.source_total = j.at("source_total").get<double>();
    dump.range.lo = j.at("lo").get<int>();
    dump.range.hi = j.at("hi").get<int>();
    for (const auto& jc : j.at("components")) {
        dump.model.components.push_back(GaussianComponent{jc.at("mu").get<double>(),
                                                          jc.at("sigma").get<double>(),
                                                          jc.at("weight").get<double>()});
    }
    return dump;
}

}  // namespace gmmce
