#include <gtest/gtest.h>

#include <filesystem>

#include "helpers.hpp"
#include "lpkit/io.hpp"

using namespace lpkit;

namespace {
std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("lpkit_io_" + std::to_string(::getpid()) + "_" + name);
}

std::vector<std::string> keys(const json& j) {
    std::vector<std::string> k;
    for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
    return k;
}
}  // namespace

TEST(FieldIO, BinaryRoundTripIsBitExact) {
    for (const Grid& g : {th::grid1(256, 8.0), th::grid2(32, 4.0)}) {
        const auto f = th::random_smooth(g, 3, true);
        std::stringstream ss;
        write_field_binary(ss, f);
        EXPECT_EQ(ss.str().size(), 4 + 4 + 8 + 8 + 16 * f.size());
        const auto back = read_field_binary(ss);
        EXPECT_EQ(back.grid.dim, g.dim);
        EXPECT_EQ(back.grid.n, g.n);
        EXPECT_EQ(back.grid.half_length, g.half_length);
        EXPECT_EQ(back.values, f.values);
    }
}

TEST(FieldIO, BinaryLayoutIsLittleEndian) {
    SampledField f(Grid(1, 8, 1.0));
    f.values[0] = {1.0, -2.0};
    std::stringstream ss;
    write_field_binary(ss, f);
    const std::string s = ss.str();
    EXPECT_EQ(s.substr(0, 4), "LPKF");
    EXPECT_EQ(static_cast<unsigned char>(s[4]), 1u);  // dim, low byte first
    EXPECT_EQ(static_cast<unsigned char>(s[8]), 8u);  // N
    // 1.0 = 0x3FF0000000000000: last byte of the first value carries 0x3F.
    EXPECT_EQ(static_cast<unsigned char>(s[24 + 7]), 0x3Fu);
    EXPECT_EQ(static_cast<unsigned char>(s[24 + 6]), 0xF0u);
}

TEST(FieldIO, CsvRoundTrip) {
    const auto g = th::grid2(16, 3.0);
    const auto f = th::random_smooth(g, 5, true);
    std::stringstream ss;
    write_field_csv(ss, f);
    const auto back = read_field_csv(ss);
    EXPECT_EQ(back.grid.n, 16u);
    EXPECT_EQ(back.values, f.values);  // 17 significant digits round-trip
}

TEST(FieldIO, FilesPickFormatByExtension) {
    const auto f = th::random_smooth(th::grid1(64, 4.0), 1, false);
    const auto bin = tmp("f.bin"), csv = tmp("f.csv");
    save_field(bin.string(), f);
    save_field(csv.string(), f);
    EXPECT_EQ(load_field(bin.string()).values, f.values);
    EXPECT_EQ(load_field(csv.string()).values, f.values);
    std::ifstream head(csv);
    std::string line;
    std::getline(head, line);
    EXPECT_EQ(line, "# dim=1 n=64 L=4");
    std::filesystem::remove(bin);
    std::filesystem::remove(csv);
}

TEST(FieldIO, Errors) {
    std::stringstream bad("XXXX0000");
    EXPECT_THROW(read_field_binary(bad), io_error);
    const auto f = th::random_smooth(th::grid1(64, 4.0), 1, false);
    std::stringstream ss;
    write_field_binary(ss, f);
    std::stringstream cut(ss.str().substr(0, ss.str().size() - 3));
    EXPECT_THROW(read_field_binary(cut), io_error);
    EXPECT_THROW(load_field("/nonexistent/dir/x.bin"), io_error);
    std::stringstream noheader("index,re,im\n0,1,0\n");
    EXPECT_THROW(read_field_csv(noheader), io_error);
    std::stringstream few("# dim=1 n=8 L=1\nindex,re,im\n0,1,0\n1,1,0\n");
    EXPECT_THROW(read_field_csv(few), io_error);
    std::stringstream range("# dim=1 n=8 L=1\nindex,re,im\n0,1,0\n70,1,0\n");
    EXPECT_THROW(read_field_csv(range), io_error);
    std::stringstream nan("# dim=1 n=2 L=1\nindex,re,im\n0,nan,0\n1,1,0\n");
    EXPECT_ANY_THROW(read_field_csv(nan));
    std::stringstream badgrid("# dim=1 n=6 L=1\nindex,re,im\n");
    EXPECT_THROW(read_field_csv(badgrid), grid_error);
}

TEST(SymbolCsv, Columns) {
    std::stringstream ss;
    write_symbol_csv(ss, constant_symbol(2.5), {Vec{0.5, 0}, Vec{1.0, 0}});
    EXPECT_EQ(ss.str(), "xi,re,im\n0.5,2.5,0\n1,2.5,0\n");
    std::stringstream s2;
    write_symbol_csv(s2, constant_symbol(1.0, 2), {Vec{0.5, 0.25}});
    EXPECT_EQ(s2.str(), "xi0,xi1,re,im\n0.5,0.25,1,0\n");
}

TEST(ReportJson, RatioReportKeysAndNulls) {
    RatioReport r;
    r.op = "sobolev";
    r.p = 2.0;
    r.weight = "pow:0.5";
    r.members = 3;
    r.ratios = {1.0, 1.5, INFINITY};
    r.min = 1.0;
    r.max = INFINITY;
    r.spread = NAN;
    const json j = to_json(r);
    const std::vector<std::string> want{"operator", "p", "weight", "members", "ratios", "min", "max", "spread"};
    EXPECT_EQ(keys(j), want);
    EXPECT_TRUE(j["ratios"][2].is_null());
    EXPECT_TRUE(j["max"].is_null());
    EXPECT_TRUE(j["spread"].is_null());
    EXPECT_EQ(j["members"], 3);
    r.skipped = {"member 2: zero norm"};
    EXPECT_EQ(to_json(r)["skipped"][0], "member 2: zero norm");
}

TEST(ReportJson, ScanReportKeys) {
    ScanReport s;
    s.alpha = 0.75;
    s.max_ratio = 2.0;
    s.argmax = {1.0, 0.25, 2.0};
    s.refinement_delta = 0.01;
    s.pass = true;
    const json j = to_json(s);
    const auto k = keys(j);
    const std::vector<std::string> want{"alpha", "max_ratio", "argmax", "refinement_delta", "pass"};
    ASSERT_GE(k.size(), want.size());
    EXPECT_EQ(std::vector<std::string>(k.begin(), k.begin() + 5), want);
    EXPECT_EQ(j["argmax"]["y"], 0.25);
    EXPECT_EQ(j["pass"], true);
    // Serialization is a pure function of the report.
    EXPECT_EQ(j.dump(), to_json(s).dump());
}

TEST(ReportJson, ConditionReports) {
    const json q = to_json(QuantityReport::divergent("tail"));
    EXPECT_TRUE(q["value"].is_null());
    EXPECT_EQ(q["finite"], false);
    EXPECT_EQ(q["note"], "tail");
    const json m = to_json(moment_class_check(make_ball_average(1), 1.0));
    EXPECT_TRUE(m.contains("moments"));
    EXPECT_EQ(to_json(fourier_decay_check(make_haar(), 1.0))["pass"], true);
}
