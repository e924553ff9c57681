#ifndef INVPERS_PIPELINE_HPP
#define INVPERS_PIPELINE_HPP

#include <filesystem>
#include <iostream>

#include "invpers/io.hpp"

namespace invpers {

/// Everything a full pipeline invocation needs; mirrors the CLI flags.
struct PipelineConfig {
    // source: exactly one of input_path / generator
    std::string input_path;
    std::string input_kind = "auto";  // points | matrix | auto
    std::string generator;            // "warsaw:3", "triadic:2", "cantor:4"

    // schedule and approximation strategy
    std::string schedule;  // "" (canonical if available, else auto), "auto[:c]", "explicit:e1,e2,..."
    std::string strategy;  // "" (canonical if available, else greedy), "canonical", "greedy",
                           // "all", "ultrametric", "file:<subset.csv>"
    int max_levels = 8;
    unsigned seed = 0;
    std::map<int, double> gamma_override;

    // persistence
    std::vector<int> dims = {1};
    Fp field = 2;
    int range_lo = 0, range_hi = 0;  // 0 = choose from the built sequence

    // resources
    int size_cap = -1;
    std::size_t max_elements = 0;  // 0 = env/default ceiling

    // comparison
    bool with_vr = false;
    int vr_grid = 0;  // 0 = all critical values, m > 0 = m evenly spaced critical values

    // outputs
    std::string output_dir = ".";
    std::string format = "json";  // json | json+svg

    double tol_tie = 1e-9;
    double tol_metric = 1e-9;

    Tol tol() const { return Tol{tol_tie}; }
};

inline json config_echo(const PipelineConfig& c) {
    json g = json::object();
    for (auto& [k, v] : c.gamma_override) g[std::to_string(k)] = v;
    return json{{"input", c.input_path},        {"input_kind", c.input_kind},
                {"generate", c.generator},      {"schedule", c.schedule},
                {"strategy", c.strategy},       {"max_levels", c.max_levels},
                {"seed", c.seed},               {"gamma_override", g},
                {"dims", c.dims},               {"field", c.field},
                {"range", {c.range_lo, c.range_hi}}, {"size_cap", c.size_cap},
                {"with_vr", c.with_vr},         {"vr_grid", c.vr_grid},
                {"format", c.format},           {"tol_tie", c.tol_tie},
                {"tol_metric", c.tol_metric}};
}

namespace detail {

struct ResolvedInput {
    FiniteMetricSpace space;
    std::optional<GeneratedSpace> generated;
};

inline ResolvedInput resolve_input(const PipelineConfig& c) {
    if (!c.generator.empty() && !c.input_path.empty())
        throw Error(Error::Kind::argument, "give either an input file or a generator, not both");
    if (c.generator.empty() && c.input_path.empty())
        throw Error(Error::Kind::argument, "no input: use an input file or a generator");
    if (!c.generator.empty()) {
        GeneratedSpace g = generate_space(c.generator);
        return {g.space, std::move(g)};
    }
    return {load_space(c.input_path, c.input_kind, c.tol_metric), std::nullopt};
}

inline IndexSet load_subset_csv(const std::string& path) {
    IndexSet out;
    for (const auto& row : parse_csv(read_file(path), path))
        for (double v : row) out.push_back(static_cast<int>(v));
    return sorted_unique(std::move(out));
}

inline FasOptions resolve_fas_options(const PipelineConfig& c, const ResolvedInput& in) {
    FasOptions opt;
    opt.max_levels = c.max_levels;
    opt.seed = c.seed;
    opt.gamma_override = c.gamma_override;
    opt.tol = c.tol();

    const bool canonical_available = in.generated && !in.generated->epsilons.empty();

    std::string schedule = c.schedule;
    if (schedule.empty()) schedule = canonical_available ? "canonical" : "auto";
    if (schedule == "canonical") {
        if (!canonical_available)
            throw Error(Error::Kind::validation, "canonical schedule requires a generated space with one");
        opt.explicit_epsilons = in.generated->epsilons;
    } else if (schedule == "auto" || schedule.rfind("auto:", 0) == 0) {
        if (schedule.size() > 5) opt.auto_factor = parse_double(schedule.substr(5), "schedule");
        if (!(opt.auto_factor > 0 && opt.auto_factor < 1))
            throw Error(Error::Kind::validation, "auto schedule factor must lie in (0,1)");
    } else if (schedule.rfind("explicit:", 0) == 0) {
        std::istringstream ls(schedule.substr(9));
        std::string tok;
        while (std::getline(ls, tok, ',')) opt.explicit_epsilons.push_back(parse_double(tok, "schedule"));
        if (opt.explicit_epsilons.empty())
            throw Error(Error::Kind::validation, "explicit schedule needs at least one epsilon");
    } else {
        throw Error(Error::Kind::argument, "unknown schedule '" + schedule + "'");
    }

    std::string strategy = c.strategy;
    if (strategy.empty()) strategy = canonical_available ? "canonical" : "greedy";
    if (strategy == "canonical") {
        if (!canonical_available)
            throw Error(Error::Kind::validation, "canonical strategy requires a generated space with one");
        opt.strategy = ApproxStrategy::given;
        opt.given_levels = in.generated->approximations;
        if (opt.explicit_epsilons.empty())
            throw Error(Error::Kind::validation, "canonical strategy needs the canonical/explicit schedule");
    } else if (strategy == "greedy") {
        opt.strategy = ApproxStrategy::greedy;
    } else if (strategy == "all") {
        opt.strategy = ApproxStrategy::all_points;
    } else if (strategy == "ultrametric") {
        opt.strategy = ApproxStrategy::ultrametric;
    } else if (strategy.rfind("file:", 0) == 0) {
        opt.strategy = ApproxStrategy::given;
        opt.given_levels.assign(static_cast<std::size_t>(c.max_levels), load_subset_csv(strategy.substr(5)));
    } else {
        throw Error(Error::Kind::argument, "unknown strategy '" + strategy + "'");
    }
    return opt;
}

inline int exit_code_of(const Error& e) {
    switch (e.kind) {
        case Error::Kind::parse: return 2;
        case Error::Kind::argument:
        case Error::Kind::validation:
        case Error::Kind::precondition: return 3;
        case Error::Kind::resource: return 4;
        case Error::Kind::internal:
        default: return 1;
    }
}

inline const char* kind_name(Error::Kind k) {
    switch (k) {
        case Error::Kind::parse: return "parse";
        case Error::Kind::argument: return "argument";
        case Error::Kind::validation: return "validation";
        case Error::Kind::precondition: return "precondition";
        case Error::Kind::resource: return "resource";
        case Error::Kind::internal:
        default: return "internal";
    }
}

inline int report_error(const Error& e, std::ostream& err) {
    int code = exit_code_of(e);
    err << json{{"error", {{"code", code}, {"kind", kind_name(e.kind)}, {"message", e.what()}}}}.dump()
        << "\n";
    return code;
}

}  // namespace detail

/// End-to-end pipeline: ingest or generate the space, build the FAS, emit a
/// FAS report, per-level complex statistics and inverse barcodes, optionally
/// VR comparison barcodes and a bottleneck summary.  Returns a process exit
/// code; failures print a machine-readable error object to `err`.
inline int run_pipeline(const PipelineConfig& config, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    try {
        namespace fs = std::filesystem;
        fs::create_directories(config.output_dir);
        auto path_of = [&](const std::string& name) { return (fs::path(config.output_dir) / name).string(); };
        const json echo = config_echo(config);
        const bool svg = config.format == "json+svg";
        if (!svg && config.format != "json")
            throw Error(Error::Kind::argument, "unknown format '" + config.format + "'");
        for (int k : config.dims)
            if (k < 0) throw Error(Error::Kind::argument, "homology dimensions must be >= 0");

        auto input = detail::resolve_input(config);
        FasOptions fas_opt = detail::resolve_fas_options(config, input);
        FasSequence fas = build_fas(input.space, fas_opt);

        json report = fas_report_json(fas);
        report["config_echo"] = echo;
        write_file(path_of("fas_report.json"), report.dump(2) + "\n");

        int lo = config.range_lo > 0 ? config.range_lo : std::min(2, fas.last_level());
        int hi = config.range_hi > 0 ? config.range_hi : fas.last_level();
        if (lo > hi || lo < 1)
            throw Error(Error::Kind::validation, "bad level range [" + std::to_string(lo) + "," +
                                                     std::to_string(hi) + "]");
        if (hi > fas.last_level() && !fas.stabilized_at)
            throw Error(Error::Kind::validation,
                        "range reaches level " + std::to_string(hi) + " but only " +
                            std::to_string(fas.last_level()) + " levels were built");

        InverseModuleOptions mod_opt;
        mod_opt.size_cap = config.size_cap;
        mod_opt.max_elements = config.max_elements;
        mod_opt.tol = config.tol();

        // per-level complexes, shared across requested dimensions
        std::map<int, LevelComplex> cache;
        for (int level = lo; level <= hi; ++level) {
            int eff = std::min(level, fas.last_level());
            if (!cache.count(eff))
                cache.emplace(eff, build_level_complex(fas, eff, config.field, config.dims, mod_opt));
        }

        json stats_levels = json::array();
        for (auto& [eff, lc] : cache) {
            json by_card = json::object(), by_dim = json::object(), betti = json::object();
            std::map<std::size_t, int> cards;
            for (const auto& e : lc.poset.elements) ++cards[e.size()];
            for (auto& [card, count] : cards) by_card[std::to_string(card)] = count;
            for (int d = 0; d <= lc.complex.dim(); ++d)
                by_dim[std::to_string(d)] = lc.complex.simplices(d).size();
            for (int k : config.dims) betti[std::to_string(k)] = lc.bases.at(k).betti;
            stats_levels.push_back({{"level", eff},
                                    {"epsilon", fas.level(eff).epsilon},
                                    {"approximation_size", fas.level(eff).approx.size()},
                                    {"poset_elements_by_card", by_card},
                                    {"boundary_ties_excluded", lc.poset.boundary_hits},
                                    {"order_complex_simplices_by_dim", by_dim},
                                    {"betti", betti}});
        }
        write_file(path_of("complex_stats.json"),
                   json{{"config_echo", echo}, {"levels", stats_levels}}.dump(2) + "\n");

        json summary{{"config_echo", echo}, {"outputs", json::array()}, {"bottleneck", json::object()}};
        auto record_output = [&](const std::string& name) { summary["outputs"].push_back(name); };
        record_output("fas_report.json");
        record_output("complex_stats.json");

        std::vector<double> vr_grid;
        if (config.with_vr) {
            vr_grid = vr_critical_values(input.space, config.tol());
            if (config.vr_grid > 1 && static_cast<int>(vr_grid.size()) > config.vr_grid) {
                // evenly spaced by index, always keeping the first and last
                std::vector<double> sub;
                for (int i = 0; i < config.vr_grid; ++i)
                    sub.push_back(vr_grid[static_cast<std::size_t>(i) * (vr_grid.size() - 1) /
                                          static_cast<std::size_t>(config.vr_grid - 1)]);
                sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
                vr_grid = std::move(sub);
            }
        }

        for (int k : config.dims) {
            Barcode inv =
                interval_decomposition(inverse_module(fas, k, config.field, lo, hi, mod_opt, &cache));
            json jb = barcode_to_json(inv);
            jb["config_echo"] = echo;
            std::string base = "inverse_barcode_k" + std::to_string(k);
            write_file(path_of(base + ".json"), jb.dump(2) + "\n");
            record_output(base + ".json");
            if (svg) {
                write_file(path_of(base + ".svg"), barcode_to_svg(inv));
                record_output(base + ".svg");
            }
            if (config.with_vr) {
                Barcode vr = vr_filtration_persistence(input.space, k, config.field, vr_grid,
                                                       config.max_elements, config.tol());
                json jv = barcode_to_json(vr);
                jv["config_echo"] = echo;
                std::string vbase = "vr_barcode_k" + std::to_string(k);
                write_file(path_of(vbase + ".json"), jv.dump(2) + "\n");
                record_output(vbase + ".json");
                if (svg) {
                    write_file(path_of(vbase + ".svg"), barcode_to_svg(vr));
                    record_output(vbase + ".svg");
                }
                summary["bottleneck"][std::to_string(k)] =
                    bottleneck_distance(inv, vr, BarMapping::embedded);
            }
        }

        write_file(path_of("summary.json"), summary.dump(2) + "\n");
        out << "wrote " << summary["outputs"].size() << " artifacts to " << config.output_dir << "\n";
        return 0;
    } catch (const Error& e) {
        return detail::report_error(e, err);
    } catch (const std::exception& e) {
        return detail::report_error(Error(Error::Kind::internal, e.what()), err);
    }
}

/// Bottleneck comparison of two barcode files; prints the distance and the
/// realizing matching.
inline int diff_barcodes(const std::string& file1, const std::string& file2, const std::string& mapping,
                         std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        Barcode a = load_barcode(file1);
        Barcode b = load_barcode(file2);
        if (a.dimension != b.dimension)
            throw Error(Error::Kind::validation,
                        "homology dimensions differ: " + std::to_string(a.dimension) + " vs " +
                            std::to_string(b.dimension));
        BarMapping bm;
        if (mapping == "raw")
            bm = BarMapping::raw;
        else if (mapping == "embedded")
            bm = BarMapping::embedded;
        else if (mapping.empty() || mapping == "auto")
            bm = (!a.labels.empty() && !b.labels.empty()) ? BarMapping::embedded : BarMapping::raw;
        else
            throw Error(Error::Kind::argument, "unknown mapping '" + mapping + "' (raw|embedded|auto)");
        if (bm == BarMapping::embedded && (a.labels.empty() || b.labels.empty()))
            throw Error(Error::Kind::validation, "embedded mapping needs index_values in both files");

        std::vector<RealBar> ra = real_bars(a, bm), rb = real_bars(b, bm);
        BottleneckMatching match;
        double d = bottleneck_distance(ra, rb, &match);
        out << "bottleneck distance: " << d << "\n";
        std::vector<char> used_a(ra.size(), 0), used_b(rb.size(), 0);
        for (auto [i, j] : match.pairs) {
            used_a[static_cast<std::size_t>(i)] = 1;
            used_b[static_cast<std::size_t>(j)] = 1;
            out << "  [" << ra[static_cast<std::size_t>(i)].lo << "," << ra[static_cast<std::size_t>(i)].hi
                << "] <-> [" << rb[static_cast<std::size_t>(j)].lo << "," << rb[static_cast<std::size_t>(j)].hi
                << "]  cost " << linf_cost(ra[static_cast<std::size_t>(i)], rb[static_cast<std::size_t>(j)])
                << "\n";
        }
        for (std::size_t i = 0; i < ra.size(); ++i)
            if (!used_a[i])
                out << "  [" << ra[i].lo << "," << ra[i].hi << "] -> diagonal  cost " << diagonal_cost(ra[i])
                    << "\n";
        for (std::size_t j = 0; j < rb.size(); ++j)
            if (!used_b[j])
                out << "  diagonal <- [" << rb[j].lo << "," << rb[j].hi << "]  cost " << diagonal_cost(rb[j])
                    << "\n";
        return 0;
    } catch (const Error& e) {
        return detail::report_error(e, err);
    } catch (const std::exception& e) {
        return detail::report_error(Error(Error::Kind::internal, e.what()), err);
    }
}

}  // namespace invpers

#endif
