#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "invpers/pipeline.hpp"
#include "oracles.hpp"

using namespace invpers;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::path("pipeline_test_out") / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::map<std::pair<int, int>, int> bars_of(const fs::path& file) {
    Barcode bc = load_barcode(file.string());
    std::map<std::pair<int, int>, int> out;
    for (const auto& b : bc.bars) out[{b.birth, b.death}] += b.multiplicity;
    return out;
}

}  // namespace

TEST_CASE("pipeline reproduces the warsaw inverse barcode") {
    fs::path dir = fresh_dir("warsaw3");
    PipelineConfig c;
    c.generator = "warsaw:3";
    c.dims = {1};
    c.range_lo = 2;
    c.range_hi = 3;
    c.output_dir = dir.string();
    std::ostringstream out, err;
    REQUIRE(run_pipeline(c, out, err) == 0);

    auto bars = bars_of(dir / "inverse_barcode_k1.json");
    CHECK(bars[{2, 3}] == 1);
    CHECK(bars[{2, 2}] == 2);
    CHECK(bars[{3, 3}] == 16);

    json stats = json::parse(slurp(dir / "complex_stats.json"));
    CHECK(stats["levels"][0]["betti"]["1"] == 3);
    CHECK(stats["levels"][1]["betti"]["1"] == 17);
}

TEST_CASE("pipeline triadic run yields the single connectivity bar") {
    fs::path dir = fresh_dir("triadic3");
    PipelineConfig c;
    c.generator = "triadic:3";
    c.dims = {0};
    c.range_lo = 2;
    c.range_hi = 3;
    c.output_dir = dir.string();
    std::ostringstream out, err;
    REQUIRE(run_pipeline(c, out, err) == 0);
    auto bars = bars_of(dir / "inverse_barcode_k0.json");
    REQUIRE(bars.size() == 1);
    CHECK(bars[{2, 3}] == 1);
}

TEST_CASE("pipeline outputs are byte-identical across runs") {
    PipelineConfig c;
    c.generator = "warsaw:2";
    c.dims = {0, 1};
    c.with_vr = true;
    c.format = "json+svg";
    fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
    std::ostringstream out, err;
    c.output_dir = d1.string();
    REQUIRE(run_pipeline(c, out, err) == 0);
    c.output_dir = d2.string();
    REQUIRE(run_pipeline(c, out, err) == 0);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(d1)) {
        fs::path other = d2 / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        ++compared;
    }
    CHECK(compared >= 7);  // fas report, stats, 2x inverse json+svg, 2x vr, summary
}

TEST_CASE("pipeline exit codes") {
    std::ostringstream out, err;
    SECTION("empty input file parses to exit 2") {
        fs::path dir = fresh_dir("empty");
        fs::path input = dir / "empty.csv";
        std::ofstream(input).close();
        PipelineConfig c;
        c.input_path = input.string();
        c.output_dir = (dir / "out").string();
        CHECK(run_pipeline(c, out, err) == 2);
        CHECK(err.str().find("\"code\":2") != std::string::npos);
    }
    SECTION("schedule violation exits 3") {
        PipelineConfig c;
        c.generator = "triadic:2";
        c.schedule = "explicit:2.0,0.9";  // violates (2-1)/2
        c.strategy = "canonical";
        c.output_dir = fresh_dir("sched").string();
        CHECK(run_pipeline(c, out, err) == 3);
    }
    SECTION("resource ceiling exits 4") {
        PipelineConfig c;
        c.generator = "warsaw:2";
        c.max_elements = 10;
        c.output_dir = fresh_dir("res").string();
        CHECK(run_pipeline(c, out, err) == 4);
    }
    SECTION("unknown schedule exits 3") {
        PipelineConfig c;
        c.generator = "triadic:2";
        c.schedule = "sometimes";
        c.output_dir = fresh_dir("badsched").string();
        CHECK(run_pipeline(c, out, err) == 3);
    }
}

TEST_CASE("barcode json round trip") {
    Barcode bc;
    bc.direction = PersistenceModule::Direction::inverse;
    bc.dimension = 1;
    bc.field = 2;
    bc.bars = {{2, 3, 1}, {3, 3, 16}};
    bc.labels = {2, 3};
    bc.label_values = {0.176776695296637, 0.0220970869120796};
    Barcode back = barcode_from_json(barcode_to_json(bc));
    CHECK(back.direction == bc.direction);
    CHECK(back.dimension == bc.dimension);
    CHECK(back.field == bc.field);
    CHECK(back.bars == bc.bars);
    CHECK(back.labels == bc.labels);
    CHECK(back.label_values == bc.label_values);
}

TEST_CASE("diff_barcodes") {
    fs::path dir = fresh_dir("diff");
    PipelineConfig c;
    c.generator = "warsaw:2";
    c.dims = {1};
    c.with_vr = true;
    c.output_dir = dir.string();
    std::ostringstream out, err;
    REQUIRE(run_pipeline(c, out, err) == 0);

    SECTION("identical files have distance zero") {
        std::ostringstream text, derr;
        int code = diff_barcodes((dir / "inverse_barcode_k1.json").string(),
                                 (dir / "inverse_barcode_k1.json").string(), "auto", text, derr);
        CHECK(code == 0);
        CHECK(text.str().find("bottleneck distance: 0") != std::string::npos);
    }
    SECTION("inverse vs vr under the embedded scale is finite and non-negative") {
        std::ostringstream text, derr;
        int code = diff_barcodes((dir / "inverse_barcode_k1.json").string(),
                                 (dir / "vr_barcode_k1.json").string(), "embedded", text, derr);
        CHECK(code == 0);
        double d = -1;
        std::sscanf(text.str().c_str(), "bottleneck distance: %lf", &d);
        CHECK(d >= 0.0);
        CHECK(std::isfinite(d));
        // sanity against the library value
        Barcode a = load_barcode((dir / "inverse_barcode_k1.json").string());
        Barcode b = load_barcode((dir / "vr_barcode_k1.json").string());
        CHECK(d == Catch::Approx(bottleneck_distance(a, b, BarMapping::embedded)));
    }
    SECTION("malformed json exits 2") {
        fs::path bad = dir / "bad.json";
        std::ofstream(bad) << "{ not json";
        std::ostringstream text, derr;
        CHECK(diff_barcodes(bad.string(), bad.string(), "auto", text, derr) == 2);
    }
    SECTION("dimension mismatch exits 3") {
        fs::path other = fresh_dir("diffdim");
        PipelineConfig c0 = c;
        c0.dims = {0};
        c0.with_vr = false;
        c0.output_dir = other.string();
        std::ostringstream o2, e2;
        REQUIRE(run_pipeline(c0, o2, e2) == 0);
        std::ostringstream text, derr;
        CHECK(diff_barcodes((dir / "inverse_barcode_k1.json").string(),
                            (other / "inverse_barcode_k0.json").string(), "auto", text, derr) == 3);
    }
}

TEST_CASE("svg output is emitted and stable") {
    fs::path dir = fresh_dir("svg");
    PipelineConfig c;
    c.generator = "triadic:2";
    c.dims = {0};
    c.range_lo = 1;
    c.range_hi = 2;
    c.format = "json+svg";
    c.output_dir = dir.string();
    std::ostringstream out, err;
    REQUIRE(run_pipeline(c, out, err) == 0);
    std::string svg = slurp(dir / "inverse_barcode_k0.svg");
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("inverse barcode, H0") != std::string::npos);
}

TEST_CASE("load_space accepts points, matrices and json") {
    fs::path dir = fresh_dir("load");
    {
        std::ofstream f(dir / "pts.csv");
        f << "0,0\n1,0\n0,1\n";
    }
    FiniteMetricSpace s = load_space((dir / "pts.csv").string());
    CHECK(s.size() == 3);
    CHECK(s.d(0, 1) == Catch::Approx(1.0));

    {
        std::ofstream f(dir / "mat.csv");
        f << "0,1,2\n1,0,1\n2,1,0\n";
    }
    FiniteMetricSpace m = load_space((dir / "mat.csv").string());
    CHECK(m.size() == 3);
    CHECK(m.d(0, 2) == 2.0);
    CHECK(m.coords.empty());  // recognized as a matrix

    // the same file forced as points
    FiniteMetricSpace p = load_space((dir / "mat.csv").string(), "points");
    CHECK(!p.coords.empty());

    {
        std::ofstream f(dir / "space.json");
        f << R"({"points": [[0,0],[3,4]]})";
    }
    FiniteMetricSpace j = load_space((dir / "space.json").string());
    CHECK(j.d(0, 1) == Catch::Approx(5.0));

    {
        std::ofstream f(dir / "matrix.json");
        f << R"({"distance_matrix": [[0,2],[2,0]], "ids": ["a","b"]})";
    }
    FiniteMetricSpace jm = load_space((dir / "matrix.json").string());
    CHECK(jm.d(0, 1) == 2.0);
    CHECK(jm.point_ids == std::vector<std::string>{"a", "b"});

    {
        std::ofstream f(dir / "bad.csv");
        f << "0,a\n";
    }
    CHECK_THROWS_AS(load_space((dir / "bad.csv").string()), Error);
}

TEST_CASE("file-backed subset strategy") {
    fs::path dir = fresh_dir("subset");
    {
        std::ofstream f(dir / "pts.csv");
        f << "0\n0.3\n0.5\n0.9\n";
    }
    {
        std::ofstream f(dir / "subset.csv");
        f << "0\n2\n";  // {0, 0.5}
    }
    PipelineConfig c;
    c.input_path = (dir / "pts.csv").string();
    c.strategy = "file:" + (dir / "subset.csv").string();
    c.schedule = "explicit:0.45";
    c.max_levels = 1;
    c.range_lo = 1;
    c.range_hi = 1;
    c.dims = {0};
    c.output_dir = (dir / "out").string();
    std::ostringstream out, err;
    REQUIRE(run_pipeline(c, out, err) == 0);
    json report = json::parse(slurp(dir / "out" / "fas_report.json"));
    CHECK(report["levels"][0]["size"] == 2);

    // a subset that fails to cover is a validation failure (exit 3)
    c.schedule = "explicit:0.2";
    std::ostringstream out2, err2;
    CHECK(run_pipeline(c, out2, err2) == 3);
}
