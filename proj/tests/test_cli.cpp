#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli_args.hpp"
#include "nhbl/bloch.hpp"
#include "nhbl/error.hpp"

namespace fs = std::filesystem;
using nhbl::kPi;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(NHBL_CLI_PATH) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json parse(const CliRun& r) { return nlohmann::json::parse(r.out); }

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("nhbl_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::size_t lines(const fs::path& p) {
    std::ifstream f(p);
    std::size_t n = 0;
    for (std::string s; std::getline(f, s);) {
        ++n;
    }
    return n;
}

const std::string kIV = "--T -1.5 --gamma 0.5 --t 0.5";

} // namespace

TEST(ParseAngle, PiLiterals) {
    using nhbl::cli::parse_angle;
    EXPECT_DOUBLE_EQ(parse_angle("1.25"), 1.25);
    EXPECT_DOUBLE_EQ(parse_angle("pi"), kPi);
    EXPECT_DOUBLE_EQ(parse_angle("-pi/2"), -kPi / 2);
    EXPECT_DOUBLE_EQ(parse_angle("pi/3"), kPi / 3);
    EXPECT_DOUBLE_EQ(parse_angle("2pi/3"), 2 * kPi / 3);
    EXPECT_DOUBLE_EQ(parse_angle("2*pi/3"), 2 * kPi / 3);
    EXPECT_THROW(parse_angle("pi/0"), nhbl::InvalidInput);
    EXPECT_THROW(parse_angle("two"), nhbl::InvalidInput);
    EXPECT_THROW(parse_angle("pix"), nhbl::InvalidInput);
}

TEST(ResolveFormat, FlagThenExtension) {
    using namespace nhbl::cli;
    EXPECT_EQ(resolve_format("csv", "a.json", Format::json), Format::csv);
    EXPECT_EQ(resolve_format("", "a.csv", Format::json), Format::csv);
    EXPECT_EQ(resolve_format("", "", Format::svg), Format::svg);
    EXPECT_THROW(resolve_format("xml", "", Format::json), nhbl::InvalidInput);
}

TEST(Cli, BtpsTypeFour) {
    const CliRun r = run("btps " + kIV);
    ASSERT_EQ(r.code, 0);
    const auto j = parse(r);
    EXPECT_EQ(j["schemaVersion"], 1);
    EXPECT_EQ(j["btps"].size(), 12u);
    EXPECT_EQ(j["type"], "IV");
    double prev_kx = -10, prev_ky = -10;
    for (const auto& b : j["btps"]) {
        const double kx = b["kx"], ky = b["ky"];
        EXPECT_TRUE(kx > prev_kx + 1e-9 || (std::abs(kx - prev_kx) < 1e-9 && ky > prev_ky));
        prev_kx = kx;
        prev_ky = ky;
    }
}

TEST(Cli, BtpsSemiDirac) {
    const auto j = parse(run("btps --T 0 --gamma 0 --t 0.5"));
    ASSERT_EQ(j["btps"].size(), 4u);
    for (const auto& b : j["btps"]) {
        EXPECT_EQ(b["kind"], "SemiDiracPoint");
    }
}

TEST(Cli, BtpsGapped) {
    const CliRun r = run("btps --T 5 --gamma 0.5 --t 0");
    ASSERT_EQ(r.code, 0);
    const auto j = parse(r);
    EXPECT_TRUE(j["btps"].empty());
    EXPECT_EQ(j["note"], "gapped");
    EXPECT_GT(j["minGap"].get<double>(), 0.1);
}

TEST(Cli, RingRegimeNeedsFlag) {
    EXPECT_EQ(run("btps --T 1 --gamma 0.5 --t 0").code, 2);
    const CliRun r = run("btps --T 1 --gamma 0.5 --t 0 --ring");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(parse(r)["rings"].size(), 2u);
}

TEST(Cli, WindingPinnedPattern) {
    const std::string at = " --kx -1.0471975 --ky -1.5707963";
    EXPECT_EQ(parse(run("winding " + kIV + at + " --field F"))["value"], 0.5);
    EXPECT_EQ(parse(run("winding " + kIV + at + " --field E"))["value"], -0.5);
    EXPECT_EQ(parse(run("winding " + kIV + " --kx -pi/3 --ky -pi/2 --field E"))["value"], -0.5);
    EXPECT_EQ(parse(run("winding " + kIV + " --kx 1.0 --ky 1.0"))["value"], 0.0);
}

TEST(Cli, WindingThroughDefectIsNumerical) {
    EXPECT_EQ(run("winding " + kIV + " --kx -pi/3 --ky -pi/2 --loop-radius 1.0471975511965976").code, 3);
}

TEST(Cli, BadInput) {
    EXPECT_EQ(run("btps --J 0").code, 2);
    EXPECT_EQ(run("winding " + kIV + " --kx 1 --ky 1 --field Q").code, 2);
    EXPECT_EQ(run("nosuchcommand").code, 2);
    EXPECT_EQ(run("realspace --N 5").code, 2);
}

TEST(Cli, SymmetryTable) {
    const CliRun r = run("symmetry " + kIV + " --grid 64");
    ASSERT_EQ(r.code, 0);
    const auto j = parse(r);
    ASSERT_EQ(j["residuals"].size(), 9u);
    for (const auto& row : j["residuals"]) {
        EXPECT_LT(row["maxResidual"].get<double>(), 1e-12);
    }
}

TEST(Cli, Realspace) {
    const CliRun r = run("realspace " + kIV + " --N 6");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(parse(r)["pass"], true);
}

TEST(Cli, Dispersion) {
    const CliRun r = run("dispersion " + kIV + " --kx 0 --ky -pi/2");
    ASSERT_EQ(r.code, 0);
    const auto j = parse(r);
    ASSERT_EQ(j["rays"].size(), 2u);
    EXPECT_EQ(j["rays"][0]["caseId"], "hybrid-0:ky=0");
}

TEST(Cli, ScanWritesGrid) {
    const fs::path d = scratch("scan");
    const CliRun r = run("scan --gamma-range -2:2 --T-range -2:2 --res 41 --t 0.5 --out " + (d / "scan.csv").string());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(lines(d / "scan.csv"), 1682u);
    std::ifstream f(d / "scan.csv");
    std::string all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    for (const char* t : {",I,", ",II,", ",III,", ",IV,", ",V,"}) {
        EXPECT_NE(all.find(t), std::string::npos) << t;
    }
}

TEST(Cli, RingCsv) {
    const CliRun r = run("ring --T 1 --gamma 0.5 --t 0 --branch +1 --samples 64");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("ring,branch,level,vertex,kx,ky\n", 0), 0u);
}

TEST(Cli, FieldExportWritesSvgAndCsv) {
    const fs::path d = scratch("field");
    ASSERT_EQ(run("field-export " + kIV + " --grid 32 --out " + (d / "field.svg").string()).code, 0);
    EXPECT_TRUE(fs::exists(d / "field.svg"));
    EXPECT_EQ(lines(d / "field.csv"), 32u * 32u + 1u);
}

TEST(Cli, Deterministic) {
    EXPECT_EQ(run("btps " + kIV).out, run("btps " + kIV).out);
    EXPECT_EQ(run("scan --res 8 --t 0.5 --threads 1").out, run("scan --res 8 --t 0.5 --threads 2").out);
}

TEST(Cli, NoPartialFileOnError) {
    const fs::path d = scratch("partial");
    EXPECT_EQ(run("winding " + kIV + " --kx -pi/3 --ky -pi/2 --loop-radius 1.0471975511965976 --out " +
                  (d / "w.json").string())
                  .code,
              3);
    EXPECT_TRUE(fs::is_empty(d));
}
