#include <atomic>
#include <condition_variable>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebconst/errors.hpp"
#include "ebconst/verifier.hpp"

namespace ebconst {

namespace {

struct CliOptions {
    std::size_t jobs = 1;
    std::string format = "table";
    std::string cache_path = "ebconst-cache.jsonl";
    bool no_cache = false;
    std::uint64_t seed = 1;
    std::uint64_t trials = 1000;
    bool stable = false;
    std::string reduced_mode = "off";
    std::uint64_t node_budget = 5000000;
    std::size_t limit = 100000;
};

RecordParams params_of(const CliOptions& o) { return {o.reduced_mode, o.trials, o.seed, o.node_budget}; }

// Runs `body`, mapping library exceptions to exit codes with a message on err.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << "instance too large: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const SearchBudgetExceeded& e) {
        err << "instance too large: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const InvariantFailure& e) {
        err << "invariant failure: " << e.what() << '\n';
        return kExitViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}

SweepRow compute_row(const std::string& key, const RecordParams& params) {
    SweepRow row{key, std::nullopt, "", kExitOk};
    std::ostringstream sink;
    row.error_code = guarded(sink, [&] {
        row.record = compute_record(key, params);
        return kExitOk;
    });
    if (row.error_code != kExitOk) {
        row.error = sink.str();
        while (!row.error.empty() && row.error.back() == '\n') row.error.pop_back();
    }
    return row;
}

int exit_for(const std::vector<SweepRow>& rows) {
    int code = kExitOk;
    for (const auto& row : rows) {
        if (row.record && row.record->status == "violation") return kExitViolation;
        if (!row.record && code == kExitOk) code = row.error_code;
    }
    return code;
}

int cmd_compute(const CliOptions& o, const std::string& key, std::ostream& out, std::ostream& err) {
    const auto format = parse_output_format(o.format);
    const auto params = params_of(o);
    parse_reduced_mode(o.reduced_mode);
    const auto canonical = parse_ring_key(key).key;

    std::optional<RecordCache> cache;
    if (!o.no_cache) cache.emplace(o.cache_path);
    std::optional<ConstantRecord> record;
    if (cache) record = cache->find(canonical, params);
    if (!record) {
        record = compute_record(canonical, params);
        if (cache) cache->append(*record);
    }
    if (format == OutputFormat::table) write_detail(out, *record, o.stable);
    else write_rows(out, {SweepRow{canonical, record, "", kExitOk}}, format, o.stable);
    (void)err;
    return record->status == "violation" ? kExitViolation : kExitOk;
}

int cmd_sweep(const CliOptions& o, std::uint64_t n_min, std::uint64_t n_max, std::ostream& out, std::ostream& err) {
    if (n_min < 2 || n_min > n_max) throw ParseError("sweep needs 2 <= nMin <= nMax");
    const auto format = parse_output_format(o.format);
    const auto params = params_of(o);
    parse_reduced_mode(o.reduced_mode);

    std::optional<RecordCache> cache;
    if (!o.no_cache) cache.emplace(o.cache_path);

    const std::size_t count = n_max - n_min + 1;
    std::vector<std::string> keys;
    for (std::uint64_t n = n_min; n <= n_max; ++n) keys.push_back("zmod:" + std::to_string(n));

    std::vector<std::optional<SweepRow>> results(count);
    std::vector<bool> from_cache(count, false);
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < count; ++i) {
        if (cache)
            if (auto hit = cache->find(keys[i], params)) {
                results[i] = SweepRow{keys[i], std::move(hit), "", kExitOk};
                from_cache[i] = true;
                continue;
            }
        pending.push_back(i);
    }

    // Workers take indices from a shared counter; this thread is the only
    // cache writer and appends rows in key order as they become available.
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < pending.size(); j = next++) {
            auto row = compute_row(keys[pending[j]], params);
            std::lock_guard lock(mutex);
            results[pending[j]] = std::move(row);
            ready.notify_all();
        }
    };
    std::vector<std::thread> threads;
    const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, pending.size()));
    if (!pending.empty())
        for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);

    for (std::size_t i = 0; i < count; ++i) {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return results[i].has_value(); });
        const auto& row = *results[i];
        lock.unlock();
        if (cache && !from_cache[i] && row.record) cache->append(*row.record);
    }
    for (auto& t : threads) t.join();

    std::vector<SweepRow> rows;
    for (auto& r : results) rows.push_back(std::move(*r));
    write_rows(out, rows, format, o.stable);
    const auto line = summary_line(summarize(rows));
    if (format == OutputFormat::table || format == OutputFormat::md) out << line << '\n';
    else err << line << '\n';
    return exit_for(rows);
}

int cmd_properties(const CliOptions& o, const std::string& suite, std::ostream& out) {
    const auto format = parse_output_format(o.format);
    std::vector<SuiteReport> reports;
    const bool all = suite == "all";
    if (all || suite == "lemma22") reports.push_back(run_kfold_suite(o.trials, o.seed));
    if (all || suite == "lemma42") reports.push_back(run_stabilizer_suite(o.trials, o.seed));
    if (all || suite == "prop45") reports.push_back(run_gcd_suite(o.trials, o.seed));
    if (all || suite == "lemma23") reports.push_back(run_reduction_suite(o.trials, o.seed));

    std::size_t violations = 0;
    for (const auto& r : reports) violations += r.violations;
    if (format == OutputFormat::json) {
        nlohmann::ordered_json array = nlohmann::ordered_json::array();
        for (const auto& r : reports)
            array.push_back({{"suite", r.name},
                             {"trials", r.trials},
                             {"exhaustive_cases", r.exhaustive_cases},
                             {"violations", r.violations},
                             {"failures", r.failures}});
        out << array.dump(2) << '\n';
    } else {
        for (const auto& r : reports) {
            out << std::left << std::setw(9) << r.name << "trials=" << r.trials
                << " exhaustive=" << r.exhaustive_cases << " violations=" << r.violations << "  "
                << (r.violations == 0 ? "pass" : "FAIL") << '\n';
            for (const auto& f : r.failures) out << "  counterexample: " << f << '\n';
        }
    }
    return violations == 0 ? kExitOk : kExitViolation;
}

int cmd_extremal(const CliOptions& o, const std::string& key, std::ostream& out) {
    const auto format = parse_output_format(o.format);
    const auto ring = parse_ring_key(key);
    const auto report = enumerate_extremal(ring, o.limit, o.node_budget);
    const auto restriction = quasi_squarefree_restriction_check(ring, o.node_budget);
    const std::size_t total = report.sequences.size();
    auto fraction = [total](std::size_t part) {
        std::ostringstream s;
        s << part << '/' << total;
        if (total) s << " (" << std::fixed << std::setprecision(3) << static_cast<double>(part) / total << ')';
        return s.str();
    };

    if (format == OutputFormat::json) {
        nlohmann::ordered_json seqs = nlohmann::ordered_json::array();
        for (const auto& e : report.sequences) {
            std::vector<std::string> terms;
            for (auto x : e.sequence) terms.push_back(ring.label(x));
            seqs.push_back({{"sequence", terms},
                            {"quasi_squarefree", e.quasi_squarefree},
                            {"coprime_to_simple", e.coprime_to_simple}});
        }
        nlohmann::ordered_json j{{"key", ring.key},
                                 {"Ir", report.value},
                                 {"length", report.value - 1},
                                 {"count", total},
                                 {"quasi_squarefree", report.quasi_squarefree_count},
                                 {"coprime_to_simple", report.coprime_count},
                                 {"restricted_max", restriction.restricted},
                                 {"unrestricted_max", restriction.unrestricted},
                                 {"sequences", seqs}};
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    if (format == OutputFormat::csv) {
        out << "sequence,quasi_squarefree,coprime_to_simple\r\n";
        for (const auto& e : report.sequences)
            out << csv_field(ring.format(e.sequence)) << ',' << (e.quasi_squarefree ? "yes" : "no") << ','
                << (e.coprime_to_simple ? "yes" : "no") << "\r\n";
        return kExitOk;
    }
    const bool md = format == OutputFormat::md;
    out << (md ? "**" : "") << ring.key << (md ? "**" : "") << "  Ir=" << report.value
        << "  length=" << report.value - 1 << "  sequences=" << total << "\n";
    if (md) out << "\n| sequence | quasi-squarefree | coprime to simple primes |\n|---|---|---|\n";
    for (const auto& e : report.sequences) {
        if (md)
            out << "| " << ring.format(e.sequence) << " | " << (e.quasi_squarefree ? "yes" : "no") << " | "
                << (e.coprime_to_simple ? "yes" : "no") << " |\n";
        else
            out << "  " << ring.format(e.sequence) << "  quasi_squarefree=" << (e.quasi_squarefree ? "yes" : "no")
                << " coprime_to_simple=" << (e.coprime_to_simple ? "yes" : "no") << '\n';
    }
    if (md) out << '\n';
    out << "quasi-squarefree: " << fraction(report.quasi_squarefree_count) << '\n';
    out << "coprime to simple primes: " << fraction(report.coprime_count) << '\n';
    out << "quasi-squarefree restriction: restricted=" << restriction.restricted
        << " unrestricted=" << restriction.unrestricted << (restriction.agree() ? " agree" : " differ") << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Erdős–Burgess and Davenport constants with certificate checks", "ebconst"};
    app.fallthrough();
    app.require_subcommand(1);

    CliOptions o;
    app.add_option("--jobs", o.jobs, "Worker threads for sweep")->check(CLI::PositiveNumber);
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"table", "csv", "json", "md"}));
    app.add_option("--cache-path", o.cache_path, "JSONL record cache");
    app.add_flag("--no-cache", o.no_cache, "Neither read nor write the cache");
    app.add_option("--seed", o.seed, "Seed for randomized checks");
    app.add_option("--trials", o.trials, "Random trials per check");
    app.add_flag("--stable", o.stable, "Print 0 for timings so output is byte-stable");
    app.add_option("--reduced-mode", o.reduced_mode, "Candidate restriction")
        ->check(CLI::IsMember({"off", "on", "check"}));
    app.add_option("--node-budget", o.node_budget, "Search node budget per instance (0 = unlimited)");
    app.add_option("--limit", o.limit, "Maximum number of extremal sequences to list");

    std::string key;
    auto* compute = app.add_subcommand("compute", "Certify one ring, e.g. zmod:12 or polyring:2:t^2");
    compute->add_option("key", key, "Ring key")->required();

    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    auto* sweep = app.add_subcommand("sweep", "Certify zmod:n for nMin <= n <= nMax");
    sweep->add_option("nMin", n_min)->required();
    sweep->add_option("nMax", n_max)->required();

    std::string suite = "all";
    auto* properties = app.add_subcommand("properties", "Run randomized and exhaustive lemma checks");
    properties->add_option("--suite", suite, "Suite to run")
        ->check(CLI::IsMember({"lemma22", "lemma42", "prop45", "lemma23", "all"}));

    auto* extremal = app.add_subcommand("extremal", "List every longest idempotent-product-free sequence");
    extremal->add_option("key", key, "Ring key")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    return guarded(err, [&] {
        if (compute->parsed()) return cmd_compute(o, key, out, err);
        if (sweep->parsed()) return cmd_sweep(o, n_min, n_max, out, err);
        if (properties->parsed()) return cmd_properties(o, suite, out);
        return cmd_extremal(o, key, out);
    });
}

}  // namespace ebconst
