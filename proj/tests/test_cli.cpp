#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "gmmce/gmmce.hpp"
#include "test_util.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string cli_path() { return GMMCE_CLI_PATH; }
std::string fixture_path(const std::string& name) {
    return std::string(GMMCE_FIXTURE_DIR) + "/" + name;
}

std::string tmp_path(const std::string& name) {
    return ::testing::TempDir() + "gmmce_cli_" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args, const std::string& tag) {
    const std::string out_file = tmp_path(tag + ".out");
    const std::string err_file = tmp_path(tag + ".err");
    const std::string cmd =
        "'" + cli_path() + "' " + args + " >'" + out_file + "' 2>'" + err_file + "'";
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST(CliEnhance, WritesValidOutputImage) {
    const std::string out = tmp_path("enhance_out.pgm");
    const auto r = run_cli("enhance '" + fixture_path("dunes.pgm") + "' '" + out + "'",
                           "enhance_basic");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto in_img = gmmce::load_pgm(fixture_path("dunes.pgm"));
    const auto out_img = gmmce::load_pgm(out);
    EXPECT_EQ(out_img.width, in_img.width);
    EXPECT_EQ(out_img.height, in_img.height);
}

TEST(CliEnhance, RejectsAlphaOutOfRange) {
    const auto r = run_cli("enhance '" + fixture_path("dunes.pgm") + "' '" +
                               tmp_path("never.pgm") + "' --alpha 1.5",
                           "bad_alpha");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.err.find("--alpha"), std::string::npos) << r.err;
}

TEST(CliEnhance, MissingInputExitsOne) {
    const auto r = run_cli("enhance '" + tmp_path("no_such.pgm") + "' '" +
                               tmp_path("never2.pgm") + "'",
                           "missing_input");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST(CliEnhance, MalformedImageExitsTwo) {
    const std::string bad = tmp_path("truncated.pgm");
    {
        std::ofstream f(bad, std::ios::binary);
        f << "P5\n10 10\n255\n";
        f << std::string(20, '\x42');  // 80 bytes short
    }
    const auto r = run_cli("enhance '" + bad + "' '" + tmp_path("never3.pgm") + "'",
                           "malformed");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST(CliEnhance, ConstantImageWarnsAndPassesThrough) {
    const std::string in = tmp_path("flat_in.pgm");
    const std::string out = tmp_path("flat_out.pgm");
    const auto img = gmmce::make_image(16, 16, std::vector<std::uint8_t>(256, 128));
    gmmce::save_pgm(in, img);
    const auto r = run_cli("enhance '" + in + "' '" + out + "'", "flat");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(gmmce::load_pgm(out), img);
    EXPECT_FALSE(r.err.empty());  // pass-through is worth a warning
}

TEST(CliEnhance, GmmDumpIsParseableJson) {
    const std::string in = tmp_path("mix_in.pgm");
    gmmce::save_pgm(in, testutil::two_gaussian_image());
    const std::string dump = tmp_path("mix_gmm.json");
    const auto r = run_cli("enhance '" + in + "' '" + tmp_path("mix_out.pgm") +
                               "' --dump-gmm '" + dump + "'",
                           "dump_gmm");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dump));
    EXPECT_TRUE(j.contains("alpha"));
    EXPECT_TRUE(j.contains("source_total"));
    EXPECT_TRUE(j.contains("lo"));
    EXPECT_TRUE(j.contains("hi"));
    ASSERT_TRUE(j.contains("components"));
    EXPECT_GE(j["components"].size(), 2u);
    for (const auto& c : j["components"]) {
        EXPECT_TRUE(c.contains("mu"));
        EXPECT_TRUE(c.contains("sigma"));
        EXPECT_TRUE(c.contains("weight"));
    }
}

TEST(CliFit, StdoutDumpMatchesInProcessFit) {
    const std::string in = tmp_path("fit_in.pgm");
    const auto img = testutil::two_gaussian_image();
    gmmce::save_pgm(in, img);
    const auto r = run_cli("fit '" + in + "'", "fit_stdout");
    ASSERT_EQ(r.exit_code, 0) << r.err;

    const auto dumped = gmmce::gmm_from_json(r.out);
    const auto local = gmmce::fit_gmm(gmmce::compute_histogram(img));
    ASSERT_EQ(dumped.model.components.size(), local.components.size());
    for (std::size_t i = 0; i < local.components.size(); ++i) {
        EXPECT_EQ(dumped.model.components[i].mu, local.components[i].mu);
        EXPECT_EQ(dumped.model.components[i].sigma, local.components[i].sigma);
        EXPECT_EQ(dumped.model.components[i].weight, local.components[i].weight);
    }
    EXPECT_EQ(dumped.model.source_total, local.source_total);
}

TEST(CliFit, ConstantImageYieldsSingleFlooredComponent) {
    const std::string in = tmp_path("fit_flat.pgm");
    gmmce::save_pgm(in, gmmce::make_image(32, 32, std::vector<std::uint8_t>(1024, 128)));
    const auto r = run_cli("fit '" + in + "'", "fit_flat");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["components"].size(), 1u);
    EXPECT_EQ(j["components"][0]["sigma"].get<double>(), 0.5);
    EXPECT_NEAR(j["components"][0]["weight"].get<double>(), 1024.0, 1e-6);
}

TEST(CliHistogram, CsvHas257Lines) {
    const std::string in = tmp_path("hist_in.pgm");
    gmmce::save_pgm(in, gmmce::make_image(8, 8, std::vector<std::uint8_t>(64, 90)));
    const auto r = run_cli("histogram '" + in + "'", "hist_csv");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 257u);
    EXPECT_EQ(lines[0], "intensity,frequency");
    EXPECT_EQ(lines[91], "90,64");
    int nonzero = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].substr(lines[i].find(',') + 1) != "0") ++nonzero;
    }
    EXPECT_EQ(nonzero, 1);
}

TEST(CliHistogram, SmoothingSpreadsASpike) {
    const std::string in = tmp_path("hist_smooth_in.pgm");
    gmmce::save_pgm(in, gmmce::make_image(8, 8, std::vector<std::uint8_t>(64, 90)));
    const auto r = run_cli("histogram '" + in + "' --smooth 1", "hist_smooth");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 257u);
    int nonzero = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].substr(lines[i].find(',') + 1) != "0") ++nonzero;
    }
    EXPECT_EQ(nonzero, 3);
}

TEST(CliHistogram, NegativeSmoothExitsThree) {
    const auto r = run_cli("histogram '" + fixture_path("dunes.pgm") + "' --smooth -1",
                           "hist_bad_smooth");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.err.find("--smooth"), std::string::npos) << r.err;
}

TEST(CliCompare, EmitsHeaderAndBothMethodRows) {
    const auto r =
        run_cli("compare '" + fixture_path("dunes.pgm") + "'", "compare_one");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "method,entropy_in,entropy_out,brightness_error,runtime_ms");
    EXPECT_EQ(lines[1].rfind("gmmce,", 0), 0u);
    EXPECT_EQ(lines[2].rfind("he,", 0), 0u);
    for (int row = 1; row <= 2; ++row) {
        const auto fields = [&] {
            std::vector<std::string> f;
            std::istringstream ss(lines[row]);
            std::string tok;
            while (std::getline(ss, tok, ',')) f.push_back(tok);
            return f;
        }();
        ASSERT_EQ(fields.size(), 5u);
        EXPECT_GT(std::stod(fields[4]), 0.0) << "runtime in row " << row;
    }
}

TEST(CliCompare, MissingFileReportsButKeepsGoodRows) {
    const auto r = run_cli("compare '" + fixture_path("dunes.pgm") + "' '" +
                               tmp_path("ghost.pgm") + "'",
                           "compare_partial");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("ghost.pgm"), std::string::npos) << r.err;
    const auto lines = split_lines(r.out);
    ASSERT_GE(lines.size(), 3u);  // header + two rows for the good file
    EXPECT_EQ(lines[1].rfind("gmmce,", 0), 0u);
}

TEST(CliGeneral, HelpExitsZero) {
    const auto r = run_cli("--help", "help");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("enhance"), std::string::npos);
}

TEST(CliGeneral, UnknownFlagExitsThree) {
    const auto r = run_cli("enhance '" + fixture_path("dunes.pgm") + "' '" +
                               tmp_path("never4.pgm") + "' --bogus",
                           "unknown_flag");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_FALSE(r.err.empty());
}
