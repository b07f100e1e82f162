#include <sstream>

#include <gtest/gtest.h>

#include "nhbl/error.hpp"
#include "nhbl/phase.hpp"
#include "nhbl/report.hpp"

using namespace nhbl;

namespace {

ConfigurationSignature sig_at(double gamma, double T) { return signature(make_params(1.0, T, 0.5, gamma)); }

void expect_counts(const ConfigurationSignature& s, int z, int h, int o) {
    EXPECT_EQ(s.count_zero, z);
    EXPECT_EQ(s.count_half, h);
    EXPECT_EQ(s.count_one, o);
}

} // namespace

TEST(Signature, TypeTableRows) {
    const ConfigurationSignature i = sig_at(0.0, 0.0);
    expect_counts(i, 4, 0, 0);
    EXPECT_EQ(table1_type(i), TableType::I);
    const ConfigurationSignature ii = sig_at(0.0, -1.0);
    expect_counts(ii, 0, 0, 8);
    EXPECT_EQ(table1_type(ii), TableType::II);
    const ConfigurationSignature iii = sig_at(0.5, -1.0);
    expect_counts(iii, 0, 16, 0);
    EXPECT_EQ(table1_type(iii), TableType::III);
    const ConfigurationSignature iv = sig_at(0.5, -1.5);
    expect_counts(iv, 4, 8, 0);
    EXPECT_EQ(table1_type(iv), TableType::IV);
    const ConfigurationSignature v = sig_at(-1.0, -1.0);
    expect_counts(v, 8, 0, 0);
    EXPECT_EQ(table1_type(v), TableType::V);
}

TEST(Signature, OneValidBranchOutsideDiamond) {
    // c+ = 1.35 has no solution, c- = 0.85 gives eight normal EPs.
    const ConfigurationSignature s = sig_at(0.5, -2.2);
    expect_counts(s, 0, 8, 0);
    EXPECT_EQ(table1_type(s), TableType::None);
    EXPECT_FALSE(s.boundary);
}

TEST(Signature, TotalChargeVanishes) {
    for (auto [g, T] : {std::pair{0.5, -1.5}, {0.3, 0.4}, {-0.7, 1.1}, {0.0, -1.0}}) {
        EXPECT_EQ(sig_at(g, T).total_w1, 0.0);
    }
}

TEST(Signature, MergerLineFlag) {
    EXPECT_TRUE(sig_at(0.5, -1.5).boundary);
    EXPECT_TRUE(sig_at(0.0, -1.0).boundary);
    EXPECT_FALSE(sig_at(0.5, -1.0).boundary);
}

TEST(Signature, TopologyKeyIgnoresPositions) {
    const auto a = sig_at(0.5, -1.0), b = sig_at(0.45, -1.05);
    EXPECT_EQ(a.topology_key(), b.topology_key());
    EXPECT_NE(a.phase_label(), b.phase_label());
    EXPECT_EQ(a.w2_hash(), b.w2_hash());
}

TEST(Signature, GammaMirror) {
    const auto a = sig_at(0.5, -1.0), b = sig_at(-0.5, -1.0);
    EXPECT_EQ(a.count_zero, b.count_zero);
    EXPECT_EQ(a.count_half, b.count_half);
    EXPECT_EQ(a.count_one, b.count_one);
    const auto wa = a.signed_w2(), wb = b.signed_w2();
    ASSERT_EQ(wa.size(), wb.size());
    for (std::size_t i = 0; i < wa.size(); ++i) {
        EXPECT_EQ(wa[i].w2, -wb[i].w2);
    }
}

TEST(TableType, CountTriples) {
    ConfigurationSignature s;
    s.count_zero = 4;
    s.count_half = 8;
    EXPECT_EQ(table1_type(s), TableType::IV);
    s.count_zero = 0;
    EXPECT_EQ(table1_type(s), TableType::None);
    s.count_zero = 8;
    s.count_half = 0;
    EXPECT_EQ(table1_type(s), TableType::V);
    EXPECT_EQ(to_string(TableType::III), "III");
}

TEST(ParseRange, Forms) {
    const Range r = parse_range("-2:2.5");
    EXPECT_EQ(r.lo, -2.0);
    EXPECT_EQ(r.hi, 2.5);
    EXPECT_THROW(parse_range("2"), InvalidInput);
    EXPECT_THROW(parse_range("a:b"), InvalidInput);
    EXPECT_THROW(parse_range("3:1"), InvalidInput);
}

TEST(Scan, DegenerateRangeGivesSinglePoint) {
    const PhaseGrid g = scan_phase_diagram({0.5, 0.5}, {-1.5, -1.5}, 8, make_params(1.0, 0.0, 0.5, 0.0), 1);
    ASSERT_EQ(g.cells.size(), 1u);
    ASSERT_TRUE(g.cells[0].sig);
    EXPECT_EQ(table1_type(*g.cells[0].sig), TableType::IV);
}

TEST(Scan, RejectsLowResolution) {
    EXPECT_THROW(scan_phase_diagram({0, 1}, {0, 1}, 4, make_params(1.0, 0.0, 0.5, 0.0)), InvalidInput);
}

TEST(Scan, UniformInsideOpenCell) {
    const PhaseGrid g = scan_phase_diagram({0.3, 0.45}, {-1.2, -1.05}, 8, make_params(1.0, 0.0, 0.5, 0.0));
    EXPECT_TRUE(detect_boundaries(g).edges.empty());
}

TEST(Scan, BoundaryAlongDiagonal) {
    const PhaseGrid g = scan_phase_diagram({0.3, 0.7}, {0.31, 0.71}, 9, make_params(1.0, 0.0, 0.5, 0.0));
    const BoundaryReport rep = detect_boundaries(g);
    EXPECT_FALSE(rep.edges.empty());
    EXPECT_TRUE(rep.consistent());
    for (const BoundaryEdge& e : rep.edges) {
        EXPECT_EQ(e.nearest_line, "T=gamma");
    }
}

TEST(Scan, IndependentOfThreadCount) {
    const ModelParams base = make_params(1.0, 0.0, 0.5, 0.0);
    std::ostringstream one, three;
    write_scan_csv(one, scan_phase_diagram({-1, 1}, {-1, 1}, 8, base, 1));
    write_scan_csv(three, scan_phase_diagram({-1, 1}, {-1, 1}, 8, base, 3));
    EXPECT_EQ(one.str(), three.str());
}

TEST(CandidateLines, Distances) {
    const auto lines = candidate_lines(1.0);
    ASSERT_EQ(lines.size(), 7u);
    EXPECT_NEAR(lines[1].distance(0.5, 0.5), 0.0, 1e-15);
    EXPECT_NEAR(lines[3].distance(1.0, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(lines[0].distance(0.25, 3.0), 0.25, 1e-15);
}
