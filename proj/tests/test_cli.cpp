#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "kpat/serialize.hpp"

using namespace kpat;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(KPAT_CLI_PATH) + " " + args + " 2>&1";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::path(::testing::TempDir()) / ("kpat_cli_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = temp_path(name);
    std::ofstream(path) << text;
    return path;
}

bool contains(const std::string& s, const std::string& sub) { return s.find(sub) != std::string::npos; }

}  // namespace

TEST(Cli, ComputeChain) {
    const CliRun r = run("compute 'chain 4'");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "1 + 6t + 7t² + 2t³ [proven]")) << r.out;
    EXPECT_TRUE(contains(r.out, "q-basis: -2q + q² + 2q³")) << r.out;
}

TEST(Cli, ComputeAntichain) {
    const CliRun r = run("compute 'antichain 7'");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "1 [proven]")) << r.out;
}

TEST(Cli, ComputeDataFile) {
    const CliRun r = run("compute --json " + std::string(KPAT_DATA_DIR) + "/pattern_example.poset");
    ASSERT_EQ(r.code, 0) << r.out;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("n"), 5);
    EXPECT_EQ(j.at("result").at("status"), "proven");
}

TEST(Cli, ComputeJsonIsParseable) {
    const CliRun r = run("compute 'chain 3' --json");
    ASSERT_EQ(r.code, 0);
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("result").at("status"), "proven");
    EXPECT_EQ(poly_from_json(j.at("result").at("poly")), (Poly{1, 3, 1}));
}

TEST(Cli, OracleValues) {
    CliRun r = run("oracle 'chain 6' -q 2");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "275")) << r.out;
    r = run("oracle 'chain 5' -q 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "361")) << r.out;
    r = run("oracle 'chain 3' -q 2 --fiber --m 3 --antichain 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "1")) << r.out;
}

TEST(Cli, ParseErrorReportsLine) {
    const std::string path = write_temp("bad.poset", "# comment\n3\n1 2\n2 x\n");
    const CliRun r = run("compute " + path);
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.out, "line 4")) << r.out;
    EXPECT_EQ(run("oracle 'chain 3' -q 4").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
}

TEST(Cli, UnresolvedExitCode) {
    const std::string path = write_temp("exceptional.poset", "8\n1 4\n2 3\n3 5\n3 6\n4 5\n4 6\n5 8\n6 7\n");
    const CliRun r = run("compute " + path);
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.out, "unresolved")) << r.out;
    EXPECT_TRUE(contains(r.out, "residual system")) << r.out;
}

TEST(Cli, BudgetExitCode) {
    const CliRun r = run("oracle 'chain 8' -q 2 --budget 100");
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(contains(r.out, "268435456")) << r.out;
}

TEST(Cli, EmbedAndVerifyCertificate) {
    const std::string cert = temp_path("pd.json");
    CliRun r = run("embed p-diamond --out " + cert);
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "C59")) << r.out;
    r = run("embed --certificate " + cert);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "verified")) << r.out;

    Json j;
    std::ifstream(cert) >> j;
    EXPECT_EQ(j.at("length"), 48);
    j["steps"][3]["a"] = j["steps"][3]["m"];
    const std::string bad = write_temp("pd_bad.json", j.dump());
    r = run("embed --certificate " + bad);
    EXPECT_EQ(r.code, 4);
    EXPECT_TRUE(contains(r.out, "step 3")) << r.out;

    r = run("embed 'antichain 2' --verify --numeric --json");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NO_THROW((void)Json::parse(r.out));
}

TEST(Cli, CacheRoundTrip) {
    const std::string dir = temp_path("cache");
    std::filesystem::remove_all(dir);
    const CliRun first = run("compute 'chain 7' --json --cache " + dir);
    const CliRun second = run("compute 'chain 7' --json --cache " + dir);
    ASSERT_EQ(first.code, 0) << first.out;
    ASSERT_EQ(second.code, 0) << second.out;
    const Json a = Json::parse(first.out), b = Json::parse(second.out);
    EXPECT_EQ(a.at("cache"), "stored");
    EXPECT_EQ(b.at("cache"), "hit");
    EXPECT_EQ(a.at("result").dump(), b.at("result").dump());
    EXPECT_FALSE(std::filesystem::is_empty(dir));
}

TEST(Cli, VerifyTablesAndSweep) {
    CliRun r = run("verify-tables --max-chain 6 --max-q2 5 --max-q3 4");
    EXPECT_EQ(r.code, 0) << r.out;
    r = run("sweep --max 4");
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, Selftest) {
    const CliRun r = run("selftest");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_FALSE(contains(r.out, "FAIL")) << r.out;
}
