#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "polar/config.hpp"
#include "polar/io.hpp"

using namespace polar;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("polar_config_test_" + std::to_string(++counter) + ".cfg"))
                   .string();
        std::ofstream(path) << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("empty config file resolves to the documented defaults") {
    TempFile f("");
    const RunConfig c = load_config(f.path);
    CHECK(c.params.b_in == 0.5);
    CHECK(c.params.b_out == 1.0);
    CHECK(c.params.q_in == 1.0);
    CHECK(c.params.q_out == 0.6);
    CHECK(c.params.n == 5);
    CHECK(c.sim.population_size == 1000);
    CHECK(c.sim.selection_strength == 10.0);
    CHECK(c.sim.mutation_rate == 0.001);
    CHECK(c.curve.steepness == 10.0);
    CHECK(c.curve.slope == 0.02);
    CHECK(c.model == Model::Fixed);
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
    TempFile f("# interaction game\n  q_o = 0.7   # higher success\n\n N=200 \n");
    const RunConfig c = load_config(f.path);
    CHECK(c.params.q_out == 0.7);
    CHECK(c.sim.population_size == 200);
}

TEST_CASE("out-of-range values name the key") {
    TempFile f("q_o = 1.5\n");
    try {
        load_config(f.path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("q_o") != std::string::npos);
    }
}

TEST_CASE("unknown keys are hard errors") {
    TempFile f("qo = 0.6\n");
    try {
        load_config(f.path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("unknown") != std::string::npos);
        CHECK(msg.find("qo") != std::string::npos);
        CHECK(msg.find(":1") != std::string::npos);  // line diagnostic
    }
}

TEST_CASE("unparsable values are rejected") {
    TempFile f("sigma = fast\n");
    CHECK_THROWS_AS(load_config(f.path), ConfigError);
    TempFile g("n = 2.5\n");
    CHECK_THROWS_AS(load_config(g.path), ConfigError);
    TempFile h("model = quantum\n");
    CHECK_THROWS_AS(load_config(h.path), ConfigError);
    TempFile i("just a line\n");
    CHECK_THROWS_AS(load_config(i.path), ConfigError);
}

TEST_CASE("model key drives both analysis and simulation") {
    TempFile f("model = social\nmutation_kernel = local_step\ndelta = 0.01\n");
    const RunConfig c = load_config(f.path);
    CHECK(c.model == Model::Social);
    CHECK(c.sim.model == Model::Social);
    CHECK(c.sim.mutation_kernel == MutationKernelKind::LocalStep);
}

TEST_CASE("csv doubles round-trip at 17 significant digits") {
    for (double v : {0.1, 1.0 / 3.0, 2.5e-17, 123456.789012345678, -0.0, 1e300}) {
        const std::string s = CsvWriter::format_double(v);
        CHECK(std::stod(s) == v);
    }
}
