// gmmce: contrast enhancement by Gaussian-mixture histogram broadening.
//
// Exit codes: 0 success, 1 I/O failure, 2 PGM parse failure, 3 invalid flag value.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmmce/gmmce.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitParse = 2;
constexpr int kExitFlag = 3;

void add_fit_options(CLI::App* cmd, gmmce::FitParams& p) {
    cmd->add_option("--alpha", p.alpha, "coverage target in (0, 1]")->capture_default_str();
    cmd->add_option("--sigma0", p.sigma0, "mean-search kernel std, > 0")
        ->capture_default_str();
    cmd->add_option("--smooth", p.smooth_n, "histogram smoothing half-width, >= 1")
        ->capture_default_str();
    cmd->add_option("--max-components", p.max_components, "component cap, >= 1")
        ->capture_default_str();
    cmd->add_option("--significance", p.significance, "dynamic-range threshold in [0, 1)")
        ->capture_default_str();
}

std::optional<std::string> flag_error(const gmmce::FitParams& p) {
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
        return "--alpha must be in (0, 1], got " + std::to_string(p.alpha);
    }
    if (!(p.sigma0 > 0.0)) {
        return "--sigma0 must be > 0, got " + std::to_string(p.sigma0);
    }
    if (p.smooth_n < 1) {
        return "--smooth must be >= 1, got " + std::to_string(p.smooth_n);
    }
    if (p.max_components < 1) {
        return "--max-components must be >= 1, got " + std::to_string(p.max_components);
    }
    if (!(p.significance >= 0.0 && p.significance < 1.0)) {
        return "--significance must be in [0, 1), got " + std::to_string(p.significance);
    }
    return std::nullopt;
}

// Data goes to `path`, or to standard output when no path was given.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw gmmce::IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw gmmce::IoError("write failure on " + path);
}

int run_enhance(const std::string& input, const std::string& output,
                const gmmce::FitParams& params, const std::string& dump_gmm,
                const std::string& dump_lut) {
    const gmmce::GrayImage img = gmmce::load_pgm(input);
    const gmmce::EnhanceResult res = gmmce::enhance(img, params);
    if (res.bypassed()) {
        std::cerr << "gmmce: warning: " << input
                  << ": degenerate dynamic range, image passes through unchanged\n";
    }
    gmmce::save_pgm(output, res.image);
    if (!dump_gmm.empty()) write_text(dump_gmm, gmmce::gmm_to_json(res.model, res.range));
    if (!dump_lut.empty()) write_text(dump_lut, gmmce::lut_to_csv(res.lut));
    return kExitOk;
}

int run_fit(const std::string& input, const std::string& out_path,
            const gmmce::FitParams& params) {
    const gmmce::GrayImage img = gmmce::load_pgm(input);
    const gmmce::Histogram h = gmmce::compute_histogram(img);
    const gmmce::GmmModel model = gmmce::fit_gmm(h, params);
    const gmmce::DynamicRange range = gmmce::dynamic_range(h, params.significance);
    write_text(out_path, gmmce::gmm_to_json(model, range));
    return kExitOk;
}

int run_histogram(const std::string& input, const std::string& out_path, int smooth_n) {
    const gmmce::GrayImage img = gmmce::load_pgm(input);
    gmmce::Histogram h = gmmce::compute_histogram(img);
    if (smooth_n >= 1) h = gmmce::smooth(h, smooth_n);
    write_text(out_path, gmmce::histogram_to_csv(h));
    return kExitOk;
}

int run_compare(const std::vector<std::string>& inputs, const std::string& out_path,
                const gmmce::FitParams& params) {
    using clock = std::chrono::steady_clock;
    std::string csv = "method,entropy_in,entropy_out,brightness_error,runtime_ms\n";
    bool any_failed = false;

    for (const std::string& path : inputs) {
        try {
            const gmmce::GrayImage img = gmmce::load_pgm(path);
            const double entropy_in = gmmce::shannon_entropy(gmmce::compute_histogram(img));

            const auto t0 = clock::now();
            const gmmce::EnhanceResult res = gmmce::enhance(img, params);
            const auto t1 = clock::now();
            const gmmce::GrayImage he = gmmce::histogram_equalize(img);
            const auto t2 = clock::now();

            const double ms_gmmce = std::chrono::duration<double, std::milli>(t1 - t0).count();
            const double ms_he = std::chrono::duration<double, std::milli>(t2 - t1).count();

            char row[160];
            std::snprintf(row, sizeof(row), "gmmce,%.6f,%.6f,%.6f,%.6f\n", entropy_in,
                          gmmce::shannon_entropy(gmmce::compute_histogram(res.image)),
                          gmmce::mean_brightness_error(img, res.image), ms_gmmce);
            csv += row;
            std::snprintf(row, sizeof(row), "he,%.6f,%.6f,%.6f,%.6f\n", entropy_in,
                          gmmce::shannon_entropy(gmmce::compute_histogram(he)),
                          gmmce::mean_brightness_error(img, he), ms_he);
            csv += row;
        } catch (const std::exception& e) {
            std::cerr << "gmmce: " << path << ": " << e.what() << "\n";
            any_failed = true;
        }
    }
    write_text(out_path, csv);
    return any_failed ? kExitIo : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contrast enhancement by Gaussian-mixture histogram broadening"};
    app.require_subcommand(1);

    gmmce::FitParams params;

    auto* enhance_cmd = app.add_subcommand("enhance", "Enhance a PGM image");
    std::string enhance_in, enhance_out, dump_gmm, dump_lut;
    enhance_cmd->add_option("input", enhance_in, "input PGM path")->required();
    enhance_cmd->add_option("output", enhance_out, "output PGM path")->required();
    add_fit_options(enhance_cmd, params);
    enhance_cmd->add_option("--dump-gmm", dump_gmm, "write the fitted mixture as JSON");
    enhance_cmd->add_option("--dump-lut", dump_lut, "write the transfer table as CSV");

    auto* fit_cmd = app.add_subcommand("fit", "Fit a Gaussian mixture to an image histogram");
    std::string fit_in, fit_out;
    fit_cmd->add_option("input", fit_in, "input PGM path")->required();
    fit_cmd->add_option("--out", fit_out, "output JSON path (default: stdout)");
    add_fit_options(fit_cmd, params);

    auto* hist_cmd = app.add_subcommand("histogram", "Export an image histogram as CSV");
    std::string hist_in, hist_out;
    int hist_smooth = 0;
    hist_cmd->add_option("input", hist_in, "input PGM path")->required();
    hist_cmd->add_option("--out", hist_out, "output CSV path (default: stdout)");
    hist_cmd->add_option("--smooth", hist_smooth, "apply box smoothing of this half-width first");

    auto* compare_cmd = app.add_subcommand("compare", "Compare enhancement methods per image");
    std::vector<std::string> compare_in;
    std::string compare_out;
    compare_cmd->add_option("inputs", compare_in, "input PGM paths")->required();
    compare_cmd->add_option("--out", compare_out, "output CSV path (default: stdout)");
    add_fit_options(compare_cmd, params);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFlag;
    }

    try {
        if (app.got_subcommand(enhance_cmd) || app.got_subcommand(fit_cmd) ||
            app.got_subcommand(compare_cmd)) {
            if (const auto err = flag_error(params)) {
                std::cerr << "gmmce: " << *err << "\n";
                return kExitFlag;
            }
        }
        if (app.got_subcommand(hist_cmd) && hist_smooth < 0) {
            std::cerr << "gmmce: --smooth must be >= 0, got " << hist_smooth << "\n";
            return kExitFlag;
        }

        if (app.got_subcommand(enhance_cmd)) {
            return run_enhance(enhance_in, enhance_out, params, dump_gmm, dump_lut);
        }
        if (app.got_subcommand(fit_cmd)) return run_fit(fit_in, fit_out, params);
        if (app.got_subcommand(hist_cmd)) return run_histogram(hist_in, hist_out, hist_smooth);
        if (app.got_subcommand(compare_cmd)) {
            return run_compare(compare_in, compare_out, params);
        }
    } catch (const gmmce::PgmParseError& e) {
        std::cerr << "gmmce: " << e.what() << "\n";
        return kExitParse;
    } catch (const gmmce::IoError& e) {
        std::cerr << "gmmce: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "gmmce: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
