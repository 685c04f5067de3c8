#include "revsent/error.hpp"
#include "revsent/io.hpp"
#include "revsent/run_config.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

using namespace revsent;
using nlohmann::json;

TEST_CASE("defaults validate and echo round-trips") {
    auto c = default_run_config();
    CHECK_NOTHROW(validate(c));
    CHECK(c.seed == 42);
    CHECK(c.split_ratio == 0.2);
    CHECK(c.families.size() == 4);
    auto back = run_config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(version_string().rfind("revsent ", 0) == 0);
}

TEST_CASE("partial overrides merge onto defaults") {
    auto c = run_config_from_json(json::parse(R"({
        "seed": 7,
        "grids": {"nb": {"alpha": [0.25]}},
        "endpoint": {"base_url": "http://127.0.0.1:8000", "batch_size": 8},
        "families": ["nb", "lr"]
    })"));
    CHECK(c.seed == 7);
    CHECK(c.grids.nb_alpha == std::vector<double>{0.25});
    CHECK(c.grids.lr_lambda.size() == 3);
    CHECK(c.endpoint.batch_size == 8);
    CHECK(c.endpoint.max_retries == 2);
    CHECK(c.families == std::vector<models::Family>{models::Family::NaiveBayes, models::Family::LogisticRegression});

    auto nb = grid_for(c, models::Family::NaiveBayes);
    REQUIRE(nb.size() == 1);
    CHECK(std::get<models::NBParams>(nb[0]).alpha == 0.25);
    auto rf = grid_for(c, models::Family::RandomForest);
    CHECK(rf.size() == 4);
    for (const auto& p : rf) CHECK(std::get<models::RFParams>(p).seed == 7);
}

TEST_CASE("bad configs are rejected") {
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"sede": 1})")), ValidationError);
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"grids": {"nb": {"alpah": [1]}}})")), ValidationError);
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"seed": "seven"})")), ValidationError);
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"families": ["xgboost"]})")), ValidationError);

    auto c = default_run_config();
    c.split_ratio = 1.5;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = default_run_config();
    c.grids.nb_alpha = {0.0};
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = default_run_config();
    c.model_text = "shouty";
    CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("load_run_config reads files") {
    const auto dir = testing::scratch_dir("config");
    io::write_file(dir / "c.json", R"({"seed": 99, "bootstrap": {"resamples": 500}})");
    auto c = load_run_config(dir / "c.json");
    CHECK(c.seed == 99);
    CHECK(c.bootstrap_resamples == 500);
    CHECK_THROWS_AS(load_run_config(dir / "none.json"), IoError);
    io::write_file(dir / "bad.json", "{not json");
    CHECK_THROWS_AS(load_run_config(dir / "bad.json"), ValidationError);
}
