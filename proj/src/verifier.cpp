#include "ebconst/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ebconst/errors.hpp"
#include "ebconst/integers.hpp"
#include "ebconst/zerosum.hpp"

namespace ebconst {

using json = nlohmann::ordered_json;

namespace {

CheckOutcome parse_outcome(const std::string& text) {
    for (auto o : {CheckOutcome::pass, CheckOutcome::fail, CheckOutcome::info, CheckOutcome::skipped})
        if (to_string(o) == text) return o;
    throw ParseError("unknown check outcome '" + text + "'");
}

json optional_json(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

json record_json(const ConstantRecord& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"outcome", to_string(c.outcome)}, {"detail", c.detail}});
    return {
        {"schema", r.schema},
        {"tool_version", r.tool_version},
        {"key", r.key},
        {"case", r.case_tag},
        {"status", r.status},
        {"unit_group", r.unit_group},
        {"D", r.davenport},
        {"davenport_method", r.davenport_method},
        {"M", r.m_formula},
        {"Ir", optional_json(r.ir)},
        {"omega_gap", r.omega_gap},
        {"delta", optional_json(r.delta)},
        {"bounds", {{"lower", r.lower}, {"upper", r.upper}}},
        {"witnesses",
         {{"davenport", r.davenport_witness}, {"burgess", r.burgess_witness}, {"construction", r.construction}}},
        {"checks", checks},
        {"params",
         {{"reduced_mode", r.params.reduced_mode},
          {"trials", r.params.trials},
          {"seed", r.params.seed},
          {"node_budget", r.params.node_budget}}},
        {"elapsed_ms", r.elapsed_ms},
    };
}

ConstantRecord record_from(const json& j) {
    ConstantRecord r;
    r.schema = j.at("schema").get<int>();
    if (r.schema != kSchemaVersion) throw ParseError("unsupported schema version " + std::to_string(r.schema));
    r.tool_version = j.at("tool_version").get<std::string>();
    r.key = j.at("key").get<std::string>();
    r.case_tag = j.at("case").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.unit_group = j.at("unit_group").get<std::vector<std::uint64_t>>();
    r.davenport = j.at("D").get<std::uint64_t>();
    r.davenport_method = j.at("davenport_method").get<std::string>();
    r.m_formula = j.at("M").get<std::uint64_t>();
    if (!j.at("Ir").is_null()) r.ir = j.at("Ir").get<std::uint64_t>();
    r.omega_gap = j.at("omega_gap").get<std::uint32_t>();
    if (!j.at("delta").is_null()) r.delta = j.at("delta").get<std::int64_t>();
    r.lower = j.at("bounds").at("lower").get<std::uint64_t>();
    r.upper = j.at("bounds").at("upper").get<std::uint64_t>();
    const auto& w = j.at("witnesses");
    r.davenport_witness = w.at("davenport").get<std::vector<std::string>>();
    r.burgess_witness = w.at("burgess").get<std::vector<std::string>>();
    r.construction = w.at("construction").get<std::vector<std::string>>();
    for (const auto& c : j.at("checks"))
        r.checks.push_back({c.at("name").get<std::string>(), parse_outcome(c.at("outcome").get<std::string>()),
                            c.at("detail").get<std::string>()});
    const auto& p = j.at("params");
    r.params.reduced_mode = p.at("reduced_mode").get<std::string>();
    r.params.trials = p.at("trials").get<std::uint64_t>();
    r.params.seed = p.at("seed").get<std::uint64_t>();
    r.params.node_budget = p.at("node_budget").get<std::uint64_t>();
    r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    return r;
}

std::vector<std::string> labels(const RingInstance& ring, const Sequence& s) {
    std::vector<std::string> out;
    for (auto x : s) out.push_back(ring.label(x));
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string shape_text(const std::vector<std::uint64_t>& orders) {
    if (orders.empty()) return "trivial";
    std::vector<std::string> parts;
    for (auto o : orders) parts.push_back("C" + std::to_string(o));
    return join(parts, " x ");
}

std::string or_dash(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : "-"; }
std::string or_dash(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "-"; }
std::string or_empty(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : ""; }
std::string or_empty(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : ""; }

std::vector<std::string> row_cells(const SweepRow& row, bool stable) {
    if (!row.record) return {row.key, "-", "-", "-", "-", "-", "error", "error", "0"};
    const auto& r = *row.record;
    return {r.key,
            std::to_string(r.davenport),
            std::to_string(r.m_formula),
            or_dash(r.ir),
            std::to_string(r.omega_gap),
            or_dash(r.delta),
            r.case_tag,
            r.status,
            std::to_string(stable ? 0 : r.elapsed_ms)};
}

const std::vector<std::string> kTableHeader{"key", "D", "M", "Ir", "omega_gap", "delta", "case", "status", "elapsed_ms"};

void write_table(std::ostream& out, const std::vector<SweepRow>& rows, bool stable) {
    std::vector<std::vector<std::string>> cells{kTableHeader};
    for (const auto& row : rows) cells.push_back(row_cells(row, stable));
    std::vector<std::size_t> width(kTableHeader.size(), 0);
    for (const auto& line : cells)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    for (const auto& line : cells) {
        std::string text;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i) text += "  ";
            // key and case left-aligned, numbers right-aligned
            const bool left = i == 0 || i == 6 || i == 7;
            const std::string pad(width[i] - line[i].size(), ' ');
            text += left ? line[i] + pad : pad + line[i];
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out << text << '\n';
    }
    for (const auto& row : rows)
        if (!row.record) out << "error " << row.key << ": " << row.error << '\n';
}

void write_md(std::ostream& out, const std::vector<SweepRow>& rows, bool stable) {
    out << "| " << join(kTableHeader, " | ") << " |\n";
    out << '|';
    for (std::size_t i = 0; i < kTableHeader.size(); ++i) out << (i == 0 || i == 6 || i == 7 ? "---|" : "--:|");
    out << '\n';
    for (const auto& row : rows) out << "| " << join(row_cells(row, stable), " | ") << " |\n";
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool stable) {
    out << kCsvHeader << "\r\n";
    for (const auto& row : rows) {
        if (!row.record) {
            out << csv_field(row.key) << ",,,,,,error,0\r\n";
            continue;
        }
        const auto& r = *row.record;
        out << csv_field(r.key) << ',' << r.davenport << ',' << r.m_formula << ',' << or_empty(r.ir) << ','
            << r.omega_gap << ',' << or_empty(r.delta) << ',' << csv_field(r.case_tag) << ','
            << (stable ? 0 : r.elapsed_ms) << "\r\n";
    }
}

void write_json(std::ostream& out, const std::vector<SweepRow>& rows, bool stable) {
    json array = json::array();
    for (const auto& row : rows) {
        if (!row.record) {
            array.push_back({{"key", row.key}, {"error", row.error}});
            continue;
        }
        auto j = record_json(*row.record);
        if (stable) j["elapsed_ms"] = 0;
        array.push_back(std::move(j));
    }
    out << array.dump(2) << '\n';
}

}  // namespace

bool ConstantRecord::operator==(const ConstantRecord& other) const { return to_json_line(*this) == to_json_line(other); }

std::string to_json_line(const ConstantRecord& r) { return record_json(r).dump(); }

ConstantRecord record_from_json_line(const std::string& line) {
    try {
        return record_from(json::parse(line));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed record: ") + e.what());
    }
}

ConstantRecord make_record(const RingInstance& ring, const TheoremCertificate& cert, const RecordParams& params,
                           std::int64_t elapsed_ms) {
    ConstantRecord r;
    r.key = cert.key;
    r.case_tag = to_string(cert.tag);
    r.status = to_string(cert.status);
    r.unit_group = cert.unit_shape.orders();
    r.davenport = cert.davenport;
    r.davenport_method = to_string(cert.davenport_method);
    r.m_formula = cert.m_formula;
    r.ir = cert.exhaustive;
    r.omega_gap = cert.omega_gap;
    r.delta = cert.delta();
    r.lower = cert.lower;
    r.upper = cert.upper;
    r.davenport_witness = labels(ring, cert.davenport_witness);
    r.burgess_witness = labels(ring, cert.burgess_witness);
    r.construction = labels(ring, cert.construction);
    r.checks = cert.checks;
    r.params = params;
    r.elapsed_ms = elapsed_ms;
    return r;
}

ConstantRecord compute_record(const std::string& key, const RecordParams& params) {
    const auto start = std::chrono::steady_clock::now();
    const auto ring = parse_ring_key(key);
    CertifyOptions options;
    options.reduced_mode = parse_reduced_mode(params.reduced_mode);
    options.trials = params.trials;
    options.seed = params.seed;
    options.node_budget = params.node_budget;
    options.davenport.node_budget = params.node_budget;
    const auto cert = certify(ring, options);
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return make_record(ring, cert, params, elapsed);
}

RecordCache::RecordCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            auto r = record_from_json_line(line);
            auto s = slot(r.key, r.params, r.tool_version);
            records_.insert_or_assign(std::move(s), std::move(r));
        } catch (const ParseError&) {
            ++skipped_;
        }
    }
}

std::string RecordCache::slot(const std::string& key, const RecordParams& params, const std::string& version) {
    return key + '|' + params.reduced_mode + '|' + std::to_string(params.trials) + '|' + std::to_string(params.seed) +
           '|' + std::to_string(params.node_budget) + '|' + version;
}

std::optional<ConstantRecord> RecordCache::find(const std::string& key, const RecordParams& params) const {
    auto it = records_.find(slot(key, params, kToolVersion));
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void RecordCache::append(const ConstantRecord& r) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw std::runtime_error("cannot open cache file " + path_.string());
    out << to_json_line(r) << '\n';
    out.flush();
    records_.insert_or_assign(slot(r.key, r.params, r.tool_version), r);
}

OutputFormat parse_output_format(const std::string& text) {
    if (text == "table") return OutputFormat::table;
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    if (text == "md") return OutputFormat::md;
    throw ParseError("format must be table, csv, json or md");
}

SweepSummary summarize(const std::vector<SweepRow>& rows) {
    SweepSummary s;
    for (const auto& row : rows) {
        if (!row.record) ++s.failed;
        else if (row.record->status == "confirmed") ++s.confirmed;
        else if (row.record->status == "boundsOnly") ++s.bounds_only;
        else ++s.violation;
    }
    return s;
}

std::string summary_line(const SweepSummary& s) {
    return "summary: confirmed=" + std::to_string(s.confirmed) + " boundsOnly=" + std::to_string(s.bounds_only) +
           " violation=" + std::to_string(s.violation) + " failed=" + std::to_string(s.failed);
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void write_rows(std::ostream& out, const std::vector<SweepRow>& rows, OutputFormat format, bool stable) {
    switch (format) {
        case OutputFormat::table: write_table(out, rows, stable); break;
        case OutputFormat::csv: write_csv(out, rows, stable); break;
        case OutputFormat::json: write_json(out, rows, stable); break;
        case OutputFormat::md: write_md(out, rows, stable); break;
    }
}

void write_detail(std::ostream& out, const ConstantRecord& r, bool stable) {
    auto line = [&](const char* name, const std::string& value) {
        out << std::left << std::setw(14) << name << value << '\n';
    };
    line("key", r.key);
    line("case", r.case_tag);
    line("status", r.status);
    line("unit group", shape_text(r.unit_group));
    line("D", std::to_string(r.davenport) + " (" + r.davenport_method + ")");
    line("M", std::to_string(r.m_formula));
    line("Ir", or_dash(r.ir));
    line("omega_gap", std::to_string(r.omega_gap));
    line("delta", or_dash(r.delta));
    line("bounds", "[" + std::to_string(r.lower) + ", " + std::to_string(r.upper) + "]");
    line("D witness", "(" + join(r.davenport_witness, ",") + ")");
    line("Ir witness", r.ir ? "(" + join(r.burgess_witness, ",") + ")" : "-");
    line("construction", "(" + join(r.construction, ",") + ")");
    line("elapsed_ms", std::to_string(stable ? 0 : r.elapsed_ms));
    out << "checks\n";
    std::size_t width = 0;
    for (const auto& c : r.checks) width = std::max(width, c.name.size());
    for (const auto& c : r.checks)
        out << "  " << std::left << std::setw(static_cast<int>(width + 2)) << c.name << std::setw(9)
            << to_string(c.outcome) << c.detail << '\n';
}

namespace {

std::vector<CyclicDecomposition> group_pool() {
    // Every invariant-factor chain of order <= 64.
    std::vector<CyclicDecomposition> pool;
    std::vector<std::uint64_t> chain;
    auto extend = [&](auto&& self, std::uint64_t order) -> void {
        if (!chain.empty()) {
            std::vector<std::uint64_t> ascending(chain.rbegin(), chain.rend());
            pool.emplace_back(ascending);
        }
        for (std::uint64_t d = 2; order * d <= 64; ++d) {
            if (!chain.empty() && chain.back() % d != 0) continue;
            chain.push_back(d);
            self(self, order * d);
            chain.pop_back();
        }
    };
    // chain is built largest factor first, each next one dividing the previous
    extend(extend, 1);
    return pool;
}

void note_failure(SuiteReport& report, const std::string& what) {
    ++report.violations;
    if (report.failures.size() < 5) report.failures.push_back(what);
}

struct GroupSampler {
    std::vector<CyclicDecomposition> shapes = group_pool();
    std::map<std::size_t, FiniteCommutativeMonoid> built;

    const FiniteCommutativeMonoid& get(std::size_t i) {
        auto it = built.find(i);
        if (it == built.end()) it = built.emplace(i, group_as_monoid(shapes[i])).first;
        return it->second;
    }
};

std::string describe(const CyclicDecomposition& g, const Sequence& s) {
    std::vector<std::string> parts;
    for (auto x : s) parts.push_back(std::to_string(x));
    return shape_text(g.orders()) + " (" + join(parts, ",") + ")";
}

}  // namespace

SuiteReport run_kfold_suite(std::size_t trials, std::uint64_t seed) {
    SuiteReport report{"lemma22", trials, 0, 0, {}};
    std::mt19937_64 rng(seed ^ 0x6b666f6c64ull);
    GroupSampler sampler;
    std::uniform_int_distribution<std::size_t> pick_shape(0, sampler.shapes.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_k(1, 5);
    std::uniform_int_distribution<std::size_t> pick_t(0, 8);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto i = pick_shape(rng);
        const auto& g = sampler.get(i);
        const auto k = pick_k(rng);
        const auto t = pick_t(rng);
        std::uniform_int_distribution<Element> pick(0, static_cast<Element>(g.size() - 1));
        std::vector<Element> terms(k + t);
        for (auto& x : terms) x = pick(rng);
        const Sequence s(std::move(terms));
        try {
            kfold_lemma_check(g, s, k);
        } catch (const InvariantFailure&) {
            note_failure(report, describe(sampler.shapes[i], s) + " k=" + std::to_string(k));
        }
    }
    return report;
}

SuiteReport run_stabilizer_suite(std::size_t trials, std::uint64_t seed) {
    SuiteReport report{"lemma42", trials, 0, 0, {}};
    std::mt19937_64 rng(seed ^ 0x7374616275ull);
    GroupSampler sampler;
    std::uniform_int_distribution<std::size_t> pick_shape(0, sampler.shapes.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_length(1, 10);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto i = pick_shape(rng);
        const auto& g = sampler.get(i);
        std::uniform_int_distribution<Element> pick(1, static_cast<Element>(g.size() - 1));
        std::vector<Element> terms(pick_length(rng));
        for (auto& x : terms) x = pick(rng);  // identity is element 0
        const Sequence s(std::move(terms));
        try {
            stabilizer_bound_check(g, s);
        } catch (const InvariantFailure&) {
            note_failure(report, describe(sampler.shapes[i], s));
        }
    }
    return report;
}

SuiteReport run_gcd_suite(std::size_t trials, std::uint64_t seed) {
    SuiteReport report{"prop45", trials, 0, 0, {}};
    auto check = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        try {
            gcd_inequality_check(a, b, c);
        } catch (const InvariantFailure&) {
            note_failure(report, "a=" + std::to_string(a) + " b=" + std::to_string(b) + " c=" + std::to_string(c));
        }
    };
    for (std::uint64_t a = 1; a <= 60; ++a)
        for (std::uint64_t c = 1; c <= 60; ++c)
            for (std::uint64_t b = 1; b <= c; ++b)
                if (c % b == 0) {
                    check(a, b, c);
                    ++report.exhaustive_cases;
                }
    std::mt19937_64 rng(seed ^ 0x70726f70ull);
    std::uniform_int_distribution<std::uint64_t> pick_a(1, 1000000);
    std::uniform_int_distribution<std::uint64_t> pick_b(1, 10000);
    std::uniform_int_distribution<std::uint64_t> pick_q(1, 1000);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto a = pick_a(rng);
        const auto b = pick_b(rng);
        check(a, b, b * pick_q(rng));
    }
    return report;
}

SuiteReport run_reduction_suite(std::size_t trials, std::uint64_t seed) {
    SuiteReport report{"lemma23", trials, 0, 0, {}};
    const std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> moduli{
        {6, {2, 3}}, {10, {2, 5}}, {12, {3}}, {30, {2, 3, 5}}};
    std::mt19937_64 rng(seed ^ 0x726564ull);
    std::uniform_int_distribution<std::size_t> pick_length(1, 12);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto& [n, primes] = moduli[trial % moduli.size()];
        std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
        std::vector<std::uint64_t> terms(pick_length(rng));
        for (auto& x : terms) x = pick(rng);
        try {
            reduction_transfer_check(n, primes, terms);
        } catch (const InvariantFailure& e) {
            note_failure(report, e.what());
        }
    }
    return report;
}

}  // namespace ebconst
