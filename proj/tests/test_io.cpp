#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>

#include "mvkit/io.hpp"

using namespace mvkit;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() /
              ("mvkit_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST(FamilyJson, RoundTripIsCanonical) {
    TempDir tmp;
    MvFamily f = canonical_family(6);
    write_json_file(tmp.path("fam.json"), family_to_json(f));
    MvFamily g = family_from_json(read_json_file(tmp.path("fam.json")));
    EXPECT_EQ(g.m, f.m);
    EXPECT_EQ(g.U, f.U);
    EXPECT_EQ(g.V, f.V);
    write_json_file(tmp.path("fam2.json"), family_to_json(g));
    EXPECT_EQ(slurp(tmp.path("fam.json")), slurp(tmp.path("fam2.json")));
}

TEST(FamilyJson, RejectsOutOfRangeEntries) {
    json j = family_to_json(canonical_family(4));
    j["pairs"][0]["u"][0] = 4;  // == m
    EXPECT_THROW(family_from_json(j), std::invalid_argument);
    j["pairs"][0]["u"][0] = -1;
    EXPECT_THROW(family_from_json(j), std::invalid_argument);
}

TEST(DistributionJson, RoundTripAndTotalCheck) {
    auto d = ResidueDistribution::from_counts(4, {1, 0, 2, 5});
    json j = distribution_to_json(d);
    auto e = distribution_from_json(j);
    EXPECT_EQ(e.counts, d.counts);
    j["total"] = 9;
    EXPECT_THROW(distribution_from_json(j), std::invalid_argument);
}

TEST(FBudgetSpec, Parsing) {
    EXPECT_EQ(parse_fbudget_spec("power:1.735").kind, FBudget::Kind::Power);
    EXPECT_DOUBLE_EQ(parse_fbudget_spec("power:2.5").alpha, 2.5);
    EXPECT_EQ(parse_fbudget_spec("loglaw").kind, FBudget::Kind::LogLaw);
    EXPECT_THROW(parse_fbudget_spec("power:abc"), std::invalid_argument);
    EXPECT_THROW(parse_fbudget_spec("exp:2"), std::invalid_argument);
}

TEST(TraceJson, RoundTripFromDrive) {
    TempDir tmp;
    ReductionTrace t = drive(canonical_family(6), FBudget::power(1.735), Variant::General,
                             Mode::BestEffort);
    write_json_file(tmp.path("trace.json"), trace_to_json(t));
    ReductionTrace u = trace_from_json(read_json_file(tmp.path("trace.json")));
    EXPECT_EQ(u.m, t.m);
    EXPECT_EQ(u.rounds.size(), t.rounds.size());
    EXPECT_EQ(u.terminal, t.terminal);
    for (std::size_t k = 0; k < t.rounds.size(); ++k) {
        EXPECT_EQ(u.rounds[k].j, t.rounds[k].j);
        EXPECT_EQ(u.rounds[k].s, t.rounds[k].s);
        EXPECT_EQ(u.rounds[k].branch, t.rounds[k].branch);
        EXPECT_EQ(u.rounds[k].bucket_label, t.rounds[k].bucket_label);
        EXPECT_EQ(u.rounds[k].partition_after, t.rounds[k].partition_after);
        EXPECT_DOUBLE_EQ(u.rounds[k].bias, t.rounds[k].bias);  // 17-digit round trip
        EXPECT_DOUBLE_EQ(u.rounds[k].shifted_bias, t.rounds[k].shifted_bias);
    }
    // audit accepts the reloaded trace
    EXPECT_TRUE(audit_trace(u, u.f).pass);
    // byte-identical on re-save
    write_json_file(tmp.path("trace2.json"), trace_to_json(u));
    EXPECT_EQ(slurp(tmp.path("trace.json")), slurp(tmp.path("trace2.json")));
}

TEST(TraceJson, DriveIsDeterministic) {
    // identical inputs produce byte-identical serialized traces
    for (Variant variant : {Variant::General, Variant::DistinctPrime}) {
        ReductionTrace a = drive(canonical_family(10), FBudget::power(1.735), variant,
                                 Mode::BestEffort);
        ReductionTrace b = drive(canonical_family(10), FBudget::power(1.735), variant,
                                 Mode::BestEffort);
        EXPECT_EQ(trace_to_json(a).dump(), trace_to_json(b).dump());
    }
}

TEST(TraceJson, RejectsBadEnums) {
    ReductionTrace t = drive(canonical_family(4), FBudget::power(1.735), Variant::General,
                             Mode::BestEffort);
    json j = trace_to_json(t);
    json bad = j;
    bad["variant"] = "quantum";
    EXPECT_THROW(trace_from_json(bad), std::invalid_argument);
    bad = j;
    bad["terminal"] = "halted";
    EXPECT_THROW(trace_from_json(bad), std::invalid_argument);
    bad = j;
    bad["rounds"][0]["branch"] = "W";
    EXPECT_THROW(trace_from_json(bad), std::invalid_argument);
    bad = j;
    bad["rounds"][0]["partition_before"] = json::array({1, 1});
    EXPECT_THROW(trace_from_json(bad), std::invalid_argument);
}

TEST(CodewordBinary, RoundTrip) {
    TempDir tmp;
    CodeParams params = ldc_setup(canonical_family(6));
    Codeword c = encode(params, {1, 0, 1, 1, 0, 1});
    write_codeword(tmp.path("cw.bin"), c);
    Codeword d = read_codeword(tmp.path("cw.bin"));
    EXPECT_EQ(d.m, c.m);
    EXPECT_EQ(d.n, c.n);
    EXPECT_EQ(d.p, c.p);
    EXPECT_EQ(d.t, c.t);
    EXPECT_EQ(d.values, c.values);
}

TEST(CodewordBinary, RejectsGarbage) {
    TempDir tmp;
    {
        std::ofstream out(tmp.path("bad.bin"), std::ios::binary);
        out << "NOTMAGIC";
    }
    EXPECT_THROW(read_codeword(tmp.path("bad.bin")), std::invalid_argument);
    EXPECT_THROW(read_codeword(tmp.path("missing.bin")), std::invalid_argument);
}

TEST(Reports, Shapes) {
    json b = bound_to_json(bound_eval(2, 2));
    EXPECT_TRUE(b.contains("log10_bound_general"));
    json r = rate_to_json(rate_check(3, 3, 2));
    EXPECT_EQ(r.at("K"), 3);
    CodeParams params = ldc_setup(canonical_family(6));
    json s = simulation_to_json(simulate(params, {1, 0, 1, 0, 1, 0}, 0.0, 3, 1));
    EXPECT_EQ(s.at("per_bit_success").size(), 6u);
}
