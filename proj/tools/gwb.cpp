// gwb: genus-0 Gromov-Witten invariants of P^n and of P^n blown up at a point.
//
// Exit codes: 0 ok, 2 parse error, 3 engine error, 4 table mismatch under
// --diff-paper, 5 check suite failure, 6 cache conflict or verify mismatch.

#include "gwb/checks.hpp"
#include "gwb/cli_parse.hpp"
#include "gwb/engine.hpp"
#include "gwb/enumerative.hpp"
#include "gwb/memo_store.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace gwb;

enum ExitCode : int {
    kOk = 0,
    kParse = 2,
    kEngine = 3,
    kTableMismatch = 4,
    kSuiteFailure = 5,
    kCache = 6,
};

struct Options {
    std::string config_path;
    std::string cache_path;
    std::string format;
    std::string space;
    int n = 0;
    int verbosity = 0;

    // invariant
    std::string beta;
    std::string classes;
    bool explain = false;

    // table
    std::string table_id;
    int dmax = 0;
    bool diff_paper = false;

    // check
    std::string suite;
    std::uint64_t seed = 1;

    // cache
    std::vector<std::string> cache_inputs;
    std::string cache_out;
    double fraction = 0.05;
};

/// Defaults, then config file, then GW_CACHE, then flags.
struct Resolved {
    Space space = Space::blowup;
    int n = 2;
    std::optional<std::filesystem::path> cache;
    std::string format = "md";
};

Resolved resolve(const Options& o) {
    Resolved r;
    std::map<std::string, std::string> cfg;
    if (!o.config_path.empty()) cfg = cli::read_config(o.config_path);
    if (auto it = cfg.find("space"); it != cfg.end()) r.space = cli::parse_space(it->second);
    if (auto it = cfg.find("n"); it != cfg.end()) r.n = cli::parse_int(it->second);
    if (auto it = cfg.find("cache_path"); it != cfg.end() && !it->second.empty()) r.cache = it->second;
    if (auto it = cfg.find("format"); it != cfg.end()) r.format = it->second;
    if (const char* env = std::getenv("GW_CACHE"); env && *env) r.cache = env;
    if (!o.space.empty()) r.space = cli::parse_space(o.space);
    if (o.n != 0) r.n = o.n;
    if (!o.cache_path.empty()) r.cache = o.cache_path;
    if (!o.format.empty()) r.format = o.format;
    if (r.format != "md" && r.format != "csv" && r.format != "json")
        throw cli::ParseError("format must be md, csv or json");
    if (r.n < 2) throw cli::ParseError("n must be at least 2");
    return r;
}

/// Engine bound to an optional cache file: loaded on construction, written
/// back when something new was memoized.
class CachedEngine {
public:
    CachedEngine(std::optional<std::filesystem::path> path, int verbosity) : path_(std::move(path)) {
        if (path_ && std::filesystem::exists(*path_)) {
            engine_ = Engine(MemoStore::load(*path_));
            if (verbosity > 0) std::cerr << "loaded " << engine_.store().size() << " cached invariants\n";
        }
    }
    Engine& engine() { return engine_; }
    void flush() {
        if (path_ && engine_.store().dirty_count() > 0) engine_.store().save(*path_);
    }

private:
    std::optional<std::filesystem::path> path_;
    Engine engine_;
};

int cmd_invariant(const Options& o) {
    const Resolved r = resolve(o);
    const Geometry g(r.space, r.n);
    if (o.beta.empty()) throw cli::ParseError("--beta is required");
    const CurveClass beta = cli::parse_beta(r.space, o.beta);
    const auto classes = cli::parse_classes(g, o.classes);
    int codims = 0;
    for (BasisIndex b : classes) codims += b.codim();
    if (codims != vdim(g, beta, static_cast<int>(classes.size())))
        std::cerr << "warning: codimension sum " << codims << " differs from the expected dimension "
                  << vdim(g, beta, static_cast<int>(classes.size())) << "; the invariant vanishes\n";

    CachedEngine ce(r.cache, o.verbosity);
    Trace trace;
    const ExactRational v = ce.engine().evaluate(g, beta, classes, o.explain ? &trace : nullptr);
    ce.flush();
    if (r.format == "json") {
        std::cout << to_record(make_key(g, beta, classes), v) << "\n";
    } else {
        std::cout << to_display_string(v) << "\n";
    }
    if (o.explain)
        for (const auto& line : trace) std::cout << "  " << line << "\n";
    return kOk;
}

int cmd_table(const Options& o) {
    const Resolved r = resolve(o);
    const auto id = parse_table_id(o.table_id);
    if (!id) throw cli::ParseError("--id must be P2-points, P3-points or P3-exceptional");
    const int dmax = o.dmax > 0 ? o.dmax : published_table(*id).dmax;
    CachedEngine ce(r.cache, o.verbosity);
    const Table t = emit_table(ce.engine(), make_table_spec(*id, dmax));
    ce.flush();
    if (r.format == "csv") std::cout << format_csv(t);
    else if (r.format == "json") std::cout << format_json(t);
    else std::cout << format_markdown(t);
    if (o.diff_paper) {
        const auto diffs = diff_against_published(t);
        for (const auto& m : diffs)
            std::cerr << "mismatch at d=" << m.d << " e=" << m.e << ": computed " << m.computed.get_str()
                      << ", published " << m.published.get_str() << "\n";
        if (!diffs.empty()) return kTableMismatch;
        if (o.verbosity > 0) std::cerr << "all published cells match\n";
    }
    return kOk;
}

int cmd_check(const Options& o) {
    const Resolved r = resolve(o);
    CachedEngine ce(r.cache, o.verbosity);
    Report report;
    const int dmax = o.dmax > 0 ? o.dmax : 5;
    if (o.suite == "axioms") report = axiom_checks(ce.engine(), o.seed);
    else if (o.suite == "wdvv") report = wdvv_checks(ce.engine(), Geometry(r.space, r.n), dmax, o.seed);
    else if (o.suite == "remarks") report = consistency_suite(ce.engine(), std::max(dmax, 2));
    else if (o.suite == "oracle") report = oracle_checks(ce.engine(), dmax);
    else throw cli::ParseError("--suite must be axioms, wdvv, remarks or oracle");
    ce.flush();
    if (r.format == "json") std::cout << report.to_json().dump() << "\n";
    else std::cout << report.to_text();
    return report.passed() ? kOk : kSuiteFailure;
}

int cmd_cache_dump(const Options& o) {
    const MemoStore store = MemoStore::load(o.cache_inputs.at(0));
    for (const auto& line : store.dump_lines()) std::cout << line << "\n";
    return kOk;
}

int cmd_cache_merge(const Options& o) {
    MemoStore merged;
    for (const auto& in : o.cache_inputs) merged.merge(MemoStore::load(in));
    if (o.cache_out.empty()) {
        for (const auto& line : merged.dump_lines()) std::cout << line << "\n";
    } else {
        merged.save(o.cache_out);
        if (o.verbosity > 0) std::cerr << "wrote " << merged.size() << " records to " << o.cache_out << "\n";
    }
    return kOk;
}

int cmd_cache_verify(const Options& o) {
    const MemoStore store = MemoStore::load(o.cache_inputs.at(0));
    const CacheVerification v = verify_cache_sample(store, o.fraction, o.seed);
    for (const auto& m : v.mismatches) std::cerr << "mismatch: " << m << "\n";
    std::cout << "verified " << v.checked << " of " << v.total << " entries, " << v.mismatches.size()
              << " mismatches\n";
    return v.mismatches.empty() ? kOk : kCache;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genus-0 Gromov-Witten invariants of P^n and of P^n blown up at a point"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config_path, "key=value file presetting space, n, cache_path, format");
    app.add_option("--cache", o.cache_path, "memo cache file (overrides GW_CACHE)");
    app.add_option("--format", o.format, "output format: md, csv or json");
    app.add_flag("-v,--verbose", o.verbosity, "log progress to stderr");

    auto* inv = app.add_subcommand("invariant", "evaluate one invariant");
    inv->add_option("--space", o.space, "plain or blowup");
    inv->add_option("--n", o.n, "dimension of the projective space");
    inv->add_option("--beta", o.beta, "curve class d,e meaning dH' - eE' (plain: d)");
    inv->add_option("--classes", o.classes, "comma-separated H<k>/E<k>/pt insertions");
    inv->add_flag("--explain", o.explain, "print the axioms applied and the levels solved");
    inv->add_option("--format", o.format, "output format");
    inv->add_option("--cache", o.cache_path, "memo cache file");

    auto* tab = app.add_subcommand("table", "reproduce one of the reference tables");
    tab->add_option("--id", o.table_id, "P2-points, P3-points or P3-exceptional")->required();
    tab->add_option("--dmax", o.dmax, "largest degree column");
    tab->add_flag("--diff-paper", o.diff_paper, "compare against the published values (exit 4 on mismatch)");
    tab->add_option("--format", o.format, "output format");
    tab->add_option("--cache", o.cache_path, "memo cache file");

    auto* chk = app.add_subcommand("check", "run a property suite");
    chk->add_option("--suite", o.suite, "axioms, wdvv, remarks or oracle")->required();
    chk->add_option("--dmax", o.dmax, "largest degree");
    chk->add_option("--n", o.n, "dimension for the wdvv suite");
    chk->add_option("--space", o.space, "geometry for the wdvv suite");
    chk->add_option("--seed", o.seed, "random seed");
    chk->add_option("--format", o.format, "text or json report (json with --format json)");
    chk->add_option("--cache", o.cache_path, "memo cache file");

    auto* cache = app.add_subcommand("cache", "inspect or combine cache files");
    cache->require_subcommand(1);
    auto* dump = cache->add_subcommand("dump", "print sorted records");
    dump->add_option("file", o.cache_inputs, "cache file")->required()->expected(1);
    auto* merge = cache->add_subcommand("merge", "union of cache files with conflict detection");
    merge->add_option("files", o.cache_inputs, "input cache files")->required();
    merge->add_option("--out", o.cache_out, "output file (stdout when omitted)");
    auto* verify = cache->add_subcommand("verify", "recompute a sample of entries from scratch");
    verify->add_option("file", o.cache_inputs, "cache file")->required()->expected(1);
    verify->add_option("--fraction", o.fraction, "share of entries to recompute")->check(CLI::Range(0.0, 1.0));
    verify->add_option("--seed", o.seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }

    try {
        if (inv->parsed()) return cmd_invariant(o);
        if (tab->parsed()) return cmd_table(o);
        if (chk->parsed()) return cmd_check(o);
        if (dump->parsed()) return cmd_cache_dump(o);
        if (merge->parsed()) return cmd_cache_merge(o);
        if (verify->parsed()) return cmd_cache_verify(o);
    } catch (const cli::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParse;
    } catch (const ConflictingCacheEntry& e) {
        std::cerr << "cache conflict: " << e.what() << "\n";
        return kCache;
    } catch (const CacheFormatError& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return kCache;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "engine error: " << e.what() << "\n";
        return kEngine;
    }
    return kOk;
}
