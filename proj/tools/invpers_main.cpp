// invpers: finite approximative sequences and inverse persistence for
// finite metric spaces.  Subcommands: fas build, complex build,
// persist inverse, persist vr, diff, run.

#include <iostream>

#include <CLI11.hpp>

#include "invpers/pipeline.hpp"

namespace {

using namespace invpers;

int parse_int(const std::string& tok, const std::string& what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error(Error::Kind::argument, what + ": not an integer: '" + tok + "'");
    }
}

std::map<int, double> parse_gamma_override(const std::string& spec) {
    std::map<int, double> out;
    if (spec.empty()) return out;
    std::istringstream is(spec);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(Error::Kind::argument, "--gamma-override expects level=value, got '" + item + "'");
        out[parse_int(item.substr(0, eq), "--gamma-override")] =
            detail::parse_double(item.substr(eq + 1), "--gamma-override");
    }
    return out;
}

std::pair<int, int> parse_range(const std::string& spec) {
    if (spec.empty()) return {0, 0};
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error(Error::Kind::argument, "--range expects lo:hi, got '" + spec + "'");
    return {parse_int(spec.substr(0, colon), "--range"), parse_int(spec.substr(colon + 1), "--range")};
}

struct CommonFlags {
    std::string input, input_kind = "auto", generate;
    double tol_tie = 1e-9, tol_metric = 1e-9;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "point cloud or distance matrix (CSV or JSON)");
        cmd->add_option("--input-kind", input_kind, "points|matrix|auto (CSV interpretation)");
        cmd->add_option("--generate", generate, "generator spec: warsaw:<n>, triadic:<n>, cantor:<depth>");
        cmd->add_option("--tol-tie", tol_tie, "tie tolerance for strict thresholds");
        cmd->add_option("--tol-metric", tol_metric, "tolerance for metric validation");
    }
};

struct FasFlags {
    std::string schedule, strategy, gamma_override, range;
    int max_levels = 8;
    unsigned seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--schedule", schedule,
                        "auto[:c] | explicit:<eps,...> | canonical (default: canonical when generated)");
        cmd->add_option("--strategy", strategy,
                        "canonical|greedy|all|ultrametric|file:<subset.csv> (default: canonical/greedy)");
        cmd->add_option("--max-levels", max_levels, "stop after this many levels");
        cmd->add_option("--seed", seed, "seed for the greedy start point");
        cmd->add_option("--gamma-override", gamma_override, "level=value,... reference gammas for the schedule");
    }
};

void fill_config(PipelineConfig& c, const CommonFlags& in, const FasFlags& fas) {
    c.input_path = in.input;
    c.input_kind = in.input_kind;
    c.generator = in.generate;
    c.tol_tie = in.tol_tie;
    c.tol_metric = in.tol_metric;
    c.schedule = fas.schedule;
    c.strategy = fas.strategy;
    c.max_levels = fas.max_levels;
    c.seed = fas.seed;
    c.gamma_override = parse_gamma_override(fas.gamma_override);
    auto [lo, hi] = parse_range(fas.range);
    c.range_lo = lo;
    c.range_hi = hi;
}

int cmd_fas_build(const CommonFlags& in, const FasFlags& fas, const std::string& output_dir) {
    try {
        PipelineConfig c;
        fill_config(c, in, fas);
        auto input = detail::resolve_input(c);
        FasOptions opt = detail::resolve_fas_options(c, input);
        FasSequence seq = build_fas(input.space, opt);
        json report = fas_report_json(seq);
        report["config_echo"] = config_echo(c);
        std::cout << report.dump(2) << "\n";
        if (!output_dir.empty()) {
            std::filesystem::create_directories(output_dir);
            write_file((std::filesystem::path(output_dir) / "fas_report.json").string(),
                       report.dump(2) + "\n");
        }
        return 0;
    } catch (const Error& e) {
        return detail::report_error(e, std::cerr);
    }
}

int cmd_complex_build(const CommonFlags& in, double epsilon, bool order, int dim_cap,
                      const std::string& dump_path) {
    try {
        PipelineConfig c;
        c.input_path = in.input;
        c.input_kind = in.input_kind;
        c.generator = in.generate;
        c.tol_tie = in.tol_tie;
        c.tol_metric = in.tol_metric;
        auto input = detail::resolve_input(c);
        IndexSet all(static_cast<std::size_t>(input.space.size()));
        std::iota(all.begin(), all.end(), 0);
        Tol tol{in.tol_tie};

        SimplicialComplex k;
        if (order) {
            Poset p = u_space(input.space, all, epsilon, dim_cap < 0 ? -1 : dim_cap + 1, 0, tol);
            k = order_complex(p);
        } else {
            k = vr_complex(input.space, all, epsilon, dim_cap, 0, tol);
        }
        json by_dim = json::object();
        for (int d = 0; d <= k.dim(); ++d) by_dim[std::to_string(d)] = k.simplices(d).size();
        long long euler = 0;
        for (int d = 0; d <= k.dim(); ++d)
            euler += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(k.simplices(d).size());
        std::cout << json{{"epsilon", epsilon},
                          {"order_complex", order},
                          {"simplices_by_dim", by_dim},
                          {"total", k.simplex_count()},
                          {"euler_characteristic", euler}}
                         .dump(2)
                  << "\n";
        if (!dump_path.empty()) {
            std::ostringstream os;
            for (int d = 0; d <= k.dim(); ++d)
                for (const auto& s : k.simplices(d)) {
                    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
                    os << "\n";
                }
            write_file(dump_path, os.str());
        }
        return 0;
    } catch (const Error& e) {
        return detail::report_error(e, std::cerr);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite approximative sequences and inverse persistence on point clouds"};
    app.require_subcommand(1);

    // ---- fas build ----------------------------------------------------
    auto* fas_cmd = app.add_subcommand("fas", "approximation sequences");
    auto* fas_build = fas_cmd->add_subcommand("build", "build a FAS and emit its report");
    CommonFlags fb_in;
    FasFlags fb_fas;
    std::string fb_outdir;
    fb_in.attach(fas_build);
    fb_fas.attach(fas_build);
    fas_build->add_option("--output-dir", fb_outdir, "also write fas_report.json here");

    // ---- complex build -------------------------------------------------
    auto* cx_cmd = app.add_subcommand("complex", "simplicial complexes");
    auto* cx_build = cx_cmd->add_subcommand("build", "build a VR complex (or its order complex) and print stats");
    CommonFlags cx_in;
    double cx_eps = 0;
    bool cx_order = false;
    int cx_dim_cap = -1;
    std::string cx_dump;
    cx_in.attach(cx_build);
    cx_build->add_option("--epsilon", cx_eps, "strict diameter bound")->required();
    cx_build->add_flag("--order-complex", cx_order, "emit the order complex of U_eps instead of the VR complex");
    cx_build->add_option("--dim-cap", cx_dim_cap, "skeleton truncation");
    cx_build->add_option("--dump", cx_dump, "write one simplex per line (sorted vertex ids) to this file");

    // ---- persist inverse / vr -------------------------------------------
    auto* persist = app.add_subcommand("persist", "persistence barcodes");
    auto* pinv = persist->add_subcommand("inverse", "inverse barcode from a FAS");
    CommonFlags pi_in;
    FasFlags pi_fas;
    PipelineConfig pi_cfg;
    std::string pi_dims = "1";
    pi_in.attach(pinv);
    pi_fas.attach(pinv);
    pinv->add_option("--range", pi_fas.range, "level range lo:hi (default: 2:last)");
    pinv->add_option("--dims", pi_dims, "homology dimensions, comma separated");
    pinv->add_option("--field", pi_cfg.field, "prime field characteristic");
    pinv->add_option("--size-cap", pi_cfg.size_cap, "cap poset element cardinality");
    pinv->add_option("--output-dir", pi_cfg.output_dir, "artifact directory");
    pinv->add_option("--format", pi_cfg.format, "json | json+svg");

    auto* pvr = persist->add_subcommand("vr", "standard VR filtration barcode");
    CommonFlags pv_in;
    PipelineConfig pv_cfg;
    std::string pv_dims = "1";
    int pv_grid = 0;
    pv_in.attach(pvr);
    pvr->add_option("--dims", pv_dims, "homology dimensions, comma separated");
    pvr->add_option("--field", pv_cfg.field, "prime field characteristic");
    pvr->add_option("--grid", pv_grid, "use this many evenly spaced critical values (0 = all)");
    pvr->add_option("--output-dir", pv_cfg.output_dir, "artifact directory");
    pvr->add_option("--format", pv_cfg.format, "json | json+svg");

    // ---- diff ------------------------------------------------------------
    auto* diff = app.add_subcommand("diff", "bottleneck distance between two barcode files");
    std::string diff_a, diff_b, diff_mapping = "auto";
    diff->add_option("file1", diff_a)->required();
    diff->add_option("file2", diff_b)->required();
    diff->add_option("--mapping", diff_mapping, "raw | embedded | auto");

    // ---- run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "full pipeline: FAS, complexes, barcodes, summary");
    CommonFlags run_in;
    FasFlags run_fas;
    PipelineConfig run_cfg;
    std::string run_dims = "1";
    run_in.attach(run);
    run_fas.attach(run);
    run->add_option("--range", run_fas.range, "level range lo:hi (default: 2:last)");
    run->add_option("--dims", run_dims, "homology dimensions, comma separated");
    run->add_option("--field", run_cfg.field, "prime field characteristic");
    run->add_option("--size-cap", run_cfg.size_cap, "cap poset element cardinality");
    run->add_flag("--with-vr", run_cfg.with_vr, "also compute the VR comparison barcode");
    run->add_option("--vr-grid", run_cfg.vr_grid, "VR critical-value subsample size (0 = all)");
    run->add_option("--output-dir", run_cfg.output_dir, "artifact directory");
    run->add_option("--format", run_cfg.format, "json | json+svg");

    CLI11_PARSE(app, argc, argv);

    auto parse_dims = [](const std::string& spec) {
        std::vector<int> dims;
        std::istringstream is(spec);
        std::string tok;
        while (std::getline(is, tok, ',')) dims.push_back(parse_int(tok, "--dims"));
        return dims;
    };

    try {
        if (fas_build->parsed()) return cmd_fas_build(fb_in, fb_fas, fb_outdir);
        if (cx_build->parsed()) return cmd_complex_build(cx_in, cx_eps, cx_order, cx_dim_cap, cx_dump);
        if (pinv->parsed()) {
            fill_config(pi_cfg, pi_in, pi_fas);
            pi_cfg.dims = parse_dims(pi_dims);
            return invpers::run_pipeline(pi_cfg);
        }
        if (pvr->parsed()) {
            pv_cfg.input_path = pv_in.input;
            pv_cfg.input_kind = pv_in.input_kind;
            pv_cfg.generator = pv_in.generate;
            pv_cfg.tol_tie = pv_in.tol_tie;
            pv_cfg.tol_metric = pv_in.tol_metric;
            auto input = invpers::detail::resolve_input(pv_cfg);
            std::vector<double> grid = invpers::vr_critical_values(input.space, pv_cfg.tol());
            if (pv_grid > 1 && static_cast<int>(grid.size()) > pv_grid) {
                std::vector<double> sub;
                for (int i = 0; i < pv_grid; ++i)
                    sub.push_back(grid[static_cast<std::size_t>(i) * (grid.size() - 1) /
                                       static_cast<std::size_t>(pv_grid - 1)]);
                sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
                grid = std::move(sub);
            }
            std::filesystem::create_directories(pv_cfg.output_dir);
            for (int k : parse_dims(pv_dims)) {
                invpers::Barcode bc = invpers::vr_filtration_persistence(input.space, k, pv_cfg.field, grid,
                                                                         0, pv_cfg.tol());
                invpers::json jb = invpers::barcode_to_json(bc);
                jb["config_echo"] = invpers::config_echo(pv_cfg);
                std::string base = (std::filesystem::path(pv_cfg.output_dir) /
                                    ("vr_barcode_k" + std::to_string(k)))
                                       .string();
                invpers::write_file(base + ".json", jb.dump(2) + "\n");
                if (pv_cfg.format == "json+svg") invpers::write_file(base + ".svg", invpers::barcode_to_svg(bc));
                std::cout << jb.dump(2) << "\n";
            }
            return 0;
        }
        if (diff->parsed()) return invpers::diff_barcodes(diff_a, diff_b, diff_mapping);
        if (run->parsed()) {
            fill_config(run_cfg, run_in, run_fas);
            run_cfg.dims = parse_dims(run_dims);
            return invpers::run_pipeline(run_cfg);
        }
    } catch (const invpers::Error& e) {
        return invpers::detail::report_error(e, std::cerr);
    } catch (const std::exception& e) {
        return invpers::detail::report_error(invpers::Error(invpers::Error::Kind::internal, e.what()),
                                             std::cerr);
    }
    return 1;
}
