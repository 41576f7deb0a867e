#pragma once

/**
 * @file verifier.hpp
 * @brief Constant records, the JSONL record cache, output formats, property
 * suites and the command-line driver.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ebconst/burgess.hpp"

namespace ebconst {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitCapacity = 3,
    kExitViolation = 4,
};

/// Inputs that change a record's content; part of the cache key.
struct RecordParams {
    std::string reduced_mode = "off";
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::uint64_t node_budget = 0;

    bool operator==(const RecordParams&) const = default;
};

struct ConstantRecord {
    int schema = kSchemaVersion;
    std::string tool_version = kToolVersion;
    std::string key;
    std::string case_tag;
    std::string status;
    std::vector<std::uint64_t> unit_group;
    std::uint64_t davenport = 0;
    std::string davenport_method;
    std::uint64_t m_formula = 0;
    std::optional<std::uint64_t> ir;
    std::uint32_t omega_gap = 0;
    std::optional<std::int64_t> delta;
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    std::vector<std::string> davenport_witness;
    std::vector<std::string> burgess_witness;
    std::vector<std::string> construction;
    std::vector<CheckResult> checks;
    RecordParams params;
    std::int64_t elapsed_ms = 0;

    bool operator==(const ConstantRecord&) const;
};

/// Compact single-line JSON with a fixed field order.
std::string to_json_line(const ConstantRecord& r);
/// Throws ParseError on malformed or incompatible input.
ConstantRecord record_from_json_line(const std::string& line);

ConstantRecord make_record(const RingInstance& ring, const TheoremCertificate& cert, const RecordParams& params,
                           std::int64_t elapsed_ms);

/// Parses the key, certifies it and times the run.
ConstantRecord compute_record(const std::string& key, const RecordParams& params);

/// Append-only JSON Lines store. On load, later lines replace earlier ones
/// with the same (key, params, tool version); unreadable lines are skipped.
class RecordCache {
public:
    explicit RecordCache(std::filesystem::path path);

    [[nodiscard]] std::optional<ConstantRecord> find(const std::string& key, const RecordParams& params) const;
    void append(const ConstantRecord& r);
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    [[nodiscard]] std::size_t skipped_lines() const noexcept { return skipped_; }

private:
    static std::string slot(const std::string& key, const RecordParams& params, const std::string& version);

    std::filesystem::path path_;
    std::map<std::string, ConstantRecord> records_;
    std::size_t skipped_ = 0;
};

enum class OutputFormat { table, csv, json, md };
OutputFormat parse_output_format(const std::string& text);

/// One sweep row: a record, or the error that prevented it.
struct SweepRow {
    std::string key;
    std::optional<ConstantRecord> record;
    std::string error;
    int error_code = kExitOk;
};

struct SweepSummary {
    std::size_t confirmed = 0;
    std::size_t bounds_only = 0;
    std::size_t violation = 0;
    std::size_t failed = 0;
};

SweepSummary summarize(const std::vector<SweepRow>& rows);
std::string summary_line(const SweepSummary& s);

inline constexpr const char* kCsvHeader = "key,D,M,Ir,omega_gap,delta,case,elapsed_ms";

/// RFC 4180 field quoting.
std::string csv_field(const std::string& text);

void write_rows(std::ostream& out, const std::vector<SweepRow>& rows, OutputFormat format, bool stable);
/// Full single-record view used by `compute` in table format.
void write_detail(std::ostream& out, const ConstantRecord& r, bool stable);

struct SuiteReport {
    std::string name;
    std::size_t trials = 0;
    std::size_t exhaustive_cases = 0;
    std::size_t violations = 0;
    std::vector<std::string> failures;  ///< first few counterexamples
};

SuiteReport run_kfold_suite(std::size_t trials, std::uint64_t seed);
SuiteReport run_stabilizer_suite(std::size_t trials, std::uint64_t seed);
/// Exhaustive scan over a, c <= 60 with b | c, then random trials.
SuiteReport run_gcd_suite(std::size_t trials, std::uint64_t seed);
/// Random sequences over Z/nZ for n in {6, 10, 12, 30}.
SuiteReport run_reduction_suite(std::size_t trials, std::uint64_t seed);

/// Entry point of the `ebconst` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ebconst
