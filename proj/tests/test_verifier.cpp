#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ebconst/errors.hpp"
#include "ebconst/verifier.hpp"

using namespace ebconst;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "ebconst");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("ebconst-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

RecordParams small_params() {
    RecordParams p;
    p.trials = 20;
    return p;
}

std::size_t count_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += line.empty() ? 0 : 1;
    return n;
}

}  // namespace

TEST(Record, JsonRoundTripIsExact) {
    for (const char* key : {"zmod:12", "zmod:2", "zmod:18", "polyring:3:t^2", "polyring:2:t^2+t"}) {
        const auto r = compute_record(key, small_params());
        const auto line = to_json_line(r);
        EXPECT_EQ(line.find('\n'), std::string::npos);
        const auto back = record_from_json_line(line);
        EXPECT_EQ(back, r) << key;
        EXPECT_EQ(to_json_line(back), line) << key;
    }
}

TEST(Record, FieldsForSmallModulus) {
    const auto r = compute_record("zmod:12", small_params());
    EXPECT_EQ(r.key, "zmod:12");
    EXPECT_EQ(r.case_tag, "twoPrimes");
    EXPECT_EQ(r.status, "confirmed");
    EXPECT_EQ(r.unit_group, (std::vector<std::uint64_t>{2, 2}));
    EXPECT_EQ(r.davenport, 3u);
    EXPECT_EQ(r.ir, std::optional<std::uint64_t>(4));
    EXPECT_EQ(r.delta, std::optional<std::int64_t>(0));
    EXPECT_EQ(r.burgess_witness, (std::vector<std::string>{"2", "3", "5"}));
    EXPECT_EQ(r.construction, (std::vector<std::string>{"2", "5", "7"}));
}

TEST(Record, MissingValueSerializesAsNull) {
    auto p = small_params();
    p.node_budget = 5;
    const auto r = compute_record("zmod:36", p);
    EXPECT_FALSE(r.ir.has_value());
    EXPECT_EQ(r.status, "boundsOnly");
    const auto line = to_json_line(r);
    EXPECT_NE(line.find("\"Ir\":null"), std::string::npos);
    EXPECT_EQ(record_from_json_line(line), r);
}

TEST(Record, RejectsMalformedLines) {
    EXPECT_THROW(record_from_json_line("not json"), ParseError);
    EXPECT_THROW(record_from_json_line("{}"), ParseError);
    auto line = to_json_line(compute_record("zmod:6", small_params()));
    line.replace(line.find("\"schema\":1"), 10, "\"schema\":9");
    EXPECT_THROW(record_from_json_line(line), ParseError);
}

TEST(Cache, LastWriterWinsAndSkipsBadLines) {
    TempDir dir;
    const auto file = dir.path() / "nested" / "cache.jsonl";
    auto first = compute_record("zmod:10", small_params());
    first.elapsed_ms = 111;
    auto second = first;
    second.elapsed_ms = 222;
    {
        RecordCache cache(file);
        EXPECT_EQ(cache.size(), 0u);
        cache.append(first);
        cache.append(second);
    }
    {
        std::ofstream(file, std::ios::app) << "{\"truncated\n";
    }
    RecordCache reloaded(file);
    EXPECT_EQ(reloaded.size(), 1u);
    EXPECT_EQ(reloaded.skipped_lines(), 1u);
    const auto hit = reloaded.find("zmod:10", small_params());
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(hit->elapsed_ms, 222);
    auto other = small_params();
    other.seed = 7;
    EXPECT_FALSE(reloaded.find("zmod:10", other).has_value());
    EXPECT_FALSE(reloaded.find("zmod:11", small_params()).has_value());
}

TEST(Output, CsvQuoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Output, CsvRowsUseCrlf) {
    std::vector<SweepRow> rows{{"zmod:4", compute_record("zmod:4", small_params()), "", kExitOk}};
    std::ostringstream out;
    write_rows(out, rows, OutputFormat::csv, true);
    EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\r\nzmod:4,2,2,3,1,0,primePower,0\r\n");
}

TEST(Output, SummaryCountsStatuses) {
    auto ok = compute_record("zmod:4", small_params());
    auto bounded = ok;
    bounded.status = "boundsOnly";
    std::vector<SweepRow> rows{{"a", ok, "", kExitOk},
                               {"b", bounded, "", kExitOk},
                               {"c", std::nullopt, "too large", kExitCapacity}};
    const auto s = summarize(rows);
    EXPECT_EQ(summary_line(s), "summary: confirmed=1 boundsOnly=1 violation=0 failed=1");
    EXPECT_EQ(parse_output_format("md"), OutputFormat::md);
    EXPECT_THROW(parse_output_format("xml"), ParseError);
}

TEST(Suites, NoViolations) {
    for (const auto& report : {run_kfold_suite(200, 3), run_stabilizer_suite(200, 3), run_gcd_suite(200, 3),
                               run_reduction_suite(200, 3)}) {
        EXPECT_EQ(report.violations, 0u) << report.name;
        EXPECT_TRUE(report.failures.empty()) << report.name;
        EXPECT_EQ(report.trials, 200u) << report.name;
    }
    EXPECT_GT(run_gcd_suite(0, 1).exhaustive_cases, 0u);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"--no-cache", "--trials", "20", "compute", "zmod:12"}).code, kExitOk);
    EXPECT_EQ(run({"--no-cache", "compute", "zmod:1"}).code, kExitUsage);
    EXPECT_EQ(run({"--no-cache", "compute", "zmod"}).code, kExitUsage);
    EXPECT_EQ(run({"--no-cache", "compute", "zmod:9999"}).code, kExitCapacity);
    EXPECT_EQ(run({"--no-cache", "--format", "xml", "compute", "zmod:5"}).code, kExitUsage);
    EXPECT_EQ(run({"--no-cache", "sweep", "9", "3"}).code, kExitUsage);
    EXPECT_EQ(run({"properties", "--suite", "nope"}).code, kExitUsage);
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"--no-cache", "--limit", "1", "extremal", "zmod:12"}).code, kExitCapacity);
}

TEST(Cli, ComputeTableShowsWitnesses) {
    const auto r = run({"--no-cache", "--trials", "20", "compute", "zmod:12"});
    EXPECT_NE(r.out.find("Ir witness    (2,3,5)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("case          twoPrimes"), std::string::npos);
}

TEST(Cli, StableSweepIsDeterministic) {
    const std::vector<std::string> args{"--no-cache", "--trials", "20", "sweep", "2", "20", "--stable", "--seed", "1"};
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("summary: confirmed=19 boundsOnly=0 violation=0 failed=0"), std::string::npos) << a.out;
}

TEST(Cli, JobsDoNotChangeOutput) {
    const std::vector<std::string> base{"--no-cache", "--trials", "20", "--format", "csv", "--stable"};
    auto one = base;
    one.insert(one.end(), {"--jobs", "1", "sweep", "2", "24"});
    auto four = base;
    four.insert(four.end(), {"--jobs", "4", "sweep", "2", "24"});
    EXPECT_EQ(run(one).out, run(four).out);
}

TEST(Cli, CacheIsReused) {
    TempDir dir;
    const auto file = (dir.path() / "c.jsonl").string();
    const std::vector<std::string> args{"--cache-path", file, "--trials", "20", "--stable", "sweep", "2", "8"};
    const auto first = run(args);
    EXPECT_EQ(count_lines(file), 7u);
    const auto second = run(args);
    EXPECT_EQ(count_lines(file), 7u);
    EXPECT_EQ(first.out, second.out);
}

TEST(Cli, PropertiesReportZeroViolations) {
    const auto r = run({"--trials", "100", "--seed", "5", "properties", "--suite", "all"});
    EXPECT_EQ(r.code, kExitOk);
    for (const char* name : {"lemma22", "lemma42", "prop45", "lemma23"})
        EXPECT_NE(r.out.find(name), std::string::npos) << name;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(Cli, ExtremalListing) {
    const auto r = run({"--no-cache", "extremal", "zmod:6"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("(2)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("(5)"), std::string::npos) << r.out;
}
