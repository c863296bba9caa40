#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cscale/config.hpp"
#include "cscale/errors.hpp"
#include "cscale/experiments.hpp"
#include "cscale/plot.hpp"

using namespace cscale;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("cscale_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("config parsing") {
    Config c = Config::parse("name = demo # trailing\n[run]\nsizes = 1, 2,3\ndt=0.5\nleader = none\n[gains]\na = 0.1, 1\n");
    CHECK(c.get_string("name", "") == "demo");
    CHECK(c.get_ints("run.sizes", {}) == std::vector<int>{1, 2, 3});
    CHECK(c.get_double("run.dt", 0.0) == 0.5);
    CHECK_FALSE(c.get_optional_int("run.leader").has_value());
    CHECK(c.get_doubles("gains.a", {}) == std::vector<double>{0.1, 1.0});
    CHECK(c.get_int("run.missing", 7) == 7);
    CHECK_THROWS_AS(c.get_int("run.dt", 0), ValidationError);
    CHECK_THROWS_AS(Config::parse("[run\n"), ValidationError);
    CHECK_THROWS_AS(Config::parse("just words\n"), ValidationError);
    CHECK_THROWS_AS(c.require_known({"name", "run.sizes"}), ValidationError);
    CHECK(Config::parse(c.dump()).dump() == c.dump());
}

TEST_CASE("experiment config round trip") {
    for (auto kind : {ExperimentKind::sweep, ExperimentKind::formation, ExperimentKind::third_order}) {
        ExperimentConfig d = ExperimentConfig::defaults(kind);
        const std::string text = d.to_config().dump();
        ExperimentConfig back = ExperimentConfig::from_config(kind, Config::parse(text));
        CHECK(back.to_config().dump() == text);
    }
    Config bad = Config::parse("[run]\nsizez = 3\n");
    CHECK_THROWS_AS(ExperimentConfig::from_config(ExperimentKind::sweep, bad), ValidationError);
    Config meta = Config::parse("[meta]\nversion = x\n");
    CHECK_NOTHROW(ExperimentConfig::from_config(ExperimentKind::sweep, meta));
}

TEST_CASE("svg output") {
    Series a{"a", {1, 2, 3}, {1, 4, 9}};
    Series b{"b", {1, 2, 3}, {2, 3, 4}};
    Axes axes{"title", "x", "y"};
    const std::string svg = render_svg({Panel{axes, {a, b}}});
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count(svg, "<polyline") == 2);
    CHECK(svg.find("width=\"800\"") != std::string::npos);
    CHECK(render_svg({Panel{axes, {a, b}}}) == svg);

    CHECK_THROWS_AS(render_svg({}), ValidationError);
    CHECK_THROWS_AS(render_svg({Panel{axes, {}}}), ValidationError);
    CHECK_THROWS_AS(render_svg({Panel{axes, {Series{"e", {}, {}}}}}), ValidationError);
    Axes log{"t", "x", "y", true, true};
    CHECK_THROWS_AS(render_svg({Panel{log, {Series{"z", {0, 1}, {1, 2}}}}}), ValidationError);
    CHECK_NOTHROW(render_svg({Panel{log, {Series{"one", {64}, {0.5}}}}}));

    const std::string csv = plot_csv({Panel{axes, {a}}});
    CHECK(csv.rfind("panel,series,x,y\n", 0) == 0);
    CHECK(count(csv, "\n") == 4);

    fs::path dir = scratch("svg");
    emit_svg({a, b}, axes, (dir / "chart.svg").string());
    CHECK(slurp(dir / "chart.svg") == svg);
    fs::remove_all(dir);
}

TEST_CASE("small scaling sweep is reproducible") {
    ExperimentConfig cfg = ExperimentConfig::defaults(ExperimentKind::sweep);
    cfg.sizes = {16, 36, 64};
    cfg.seeds = {1, 2};
    fs::path dir = scratch("sweep");
    cfg.output_dir = dir.string();
    auto r = run_scaling_sweep(cfg);
    CHECK(r.rows.size() == 6);
    CHECK(r.bound_holds);
    for (const auto& row : r.rows) CHECK(row.random_grounded_lambda1 <= row.lemma2_bound);
    CHECK(fs::exists(dir / "scaling_plot.svg"));
    CHECK(fs::exists(dir / "scaling.csv"));
    CHECK(fs::exists(dir / "scaling_plot.csv"));
    CHECK(fs::exists(dir / "config.resolved.txt"));
    CHECK(slurp(dir / "scaling.csv").rfind("N,seed,lattice_lambda2,random_lambda2,random_grounded_lambda1,lemma2_bound\n", 0) == 0);

    // rerun from the resolved config
    const std::string first = slurp(dir / "scaling.csv");
    ExperimentConfig again = ExperimentConfig::from_config(ExperimentKind::sweep, Config::load((dir / "config.resolved.txt").string()));
    fs::path dir2 = scratch("sweep2");
    again.output_dir = dir2.string();
    run_scaling_sweep(again);
    CHECK(slurp(dir2 / "scaling.csv") == first);
    CHECK(slurp(dir2 / "scaling_plot.svg") == slurp(dir / "scaling_plot.svg"));

    cfg.sizes = {64};
    cfg.output_dir = scratch("sweep1").string();
    CHECK_NOTHROW(run_scaling_sweep(cfg));

    fs::remove_all(dir);
    fs::remove_all(dir2);
    fs::remove_all(cfg.output_dir);
}

TEST_CASE("undisturbed formation stays on its desired trajectory") {
    ExperimentConfig cfg = ExperimentConfig::defaults(ExperimentKind::formation);
    cfg.sizes = {10};
    cfg.horizon = 20.0;
    cfg.disturbance.magnitude = 0.0;
    auto r = run_formation_demo(cfg, false);
    REQUIRE(r.runs.size() == 2);
    for (const auto& run : r.runs) {
        REQUIRE(run.settling_time.has_value());
        CHECK(*run.settling_time == doctest::Approx(cfg.disturbance.time));
    }
}

TEST_CASE("formation demo rejects a disturbed leader") {
    ExperimentConfig cfg = ExperimentConfig::defaults(ExperimentKind::formation);
    cfg.disturbance.node = 0;
    CHECK_THROWS_AS(run_formation_demo(cfg, false), ValidationError);
}
