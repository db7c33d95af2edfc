#include <doctest.h>

#include "mech/config.hpp"

using namespace mech;

namespace {

const char* kSample = R"(
# architecture
[chiplet]
structure = square
chiplet_rows = 6
chiplet_cols = 6
array_rows = 3
array_cols = 3
cross_sparsity = 3/7

[highway]
density_multiplier = 2
interleave = true

[error_model]
ratio_cross = 7.4
ratio_meas = 2.2
meas_depth = 2

[run]
seed = 42
min_targets = 2
)";

}  // namespace

TEST_CASE("config parses all sections") {
    const RunConfig cfg = parse_config(kSample);
    CHECK(cfg.chip.structure == Structure::square);
    CHECK(cfg.chip.chiplet_rows == 6);
    CHECK(cfg.chip.array_cols == 3);
    CHECK(cfg.chip.cross_sparsity == doctest::Approx(3.0 / 7.0));
    CHECK(cfg.highway.density_multiplier == 2);
    CHECK(cfg.highway.interleave);
    CHECK(cfg.error_model.ratio_cross == doctest::Approx(7.4));
    CHECK(cfg.seed == 42);
    CHECK(cfg.min_targets == 2);
}

TEST_CASE("unknown keys are named in the error") {
    try {
        parse_config("[chiplet]\nchiplet_rows = 6\nbananas = 9\n");
        FAIL("expected a throw");
    } catch (const MechError& e) {
        CHECK(std::string(e.what()).find("bananas") != std::string::npos);
    }
}

TEST_CASE("malformed values name the offending key") {
    try {
        parse_config("[error_model]\nratio_cross = often\n");
        FAIL("expected a throw");
    } catch (const MechError& e) {
        CHECK(std::string(e.what()).find("ratio_cross") != std::string::npos);
    }
}

TEST_CASE("unknown sections and sectionless keys are rejected") {
    CHECK_THROWS_AS(parse_config("[wheels]\nn = 4\n"), MechError);
    CHECK_THROWS_AS(parse_config("chiplet_rows = 6\n"), MechError);
}

TEST_CASE("config round-trips through its text form") {
    const RunConfig cfg = parse_config(kSample);
    const RunConfig back = parse_config(config_to_text(cfg));
    CHECK(back.chip.chiplet_rows == cfg.chip.chiplet_rows);
    CHECK(back.chip.cross_sparsity == doctest::Approx(cfg.chip.cross_sparsity));
    CHECK(back.highway.density_multiplier == cfg.highway.density_multiplier);
    CHECK(back.seed == cfg.seed);
}

TEST_CASE("validation catches out-of-range entries") {
    CHECK_THROWS_AS(parse_config("[chiplet]\ncross_sparsity = 0\n"), MechError);
    CHECK_THROWS_AS(parse_config("[run]\nmin_targets = 0\n"), MechError);
    CHECK_THROWS_AS(parse_config("[error_model]\nmeas_depth = -1\n"), MechError);
}
