#include <doctest.h>

#include <sstream>

#include "gal/config.hpp"

using namespace gal;

namespace {

IniFile ini_of(const std::string& text) {
    std::istringstream in(text);
    return IniFile::parse(in);
}

}  // namespace

TEST_CASE("ini parsing") {
    IniFile ini = ini_of(
        "# top comment\n"
        "[dataset]\n"
        "path = /tmp/cora   \n"
        "drop_isolated=true\n"
        "; another comment\n"
        "[gcn]\n"
        "hidden = 16\n"
        "learning_rate = 0.01\n");
    CHECK(ini.get("dataset.path", "") == "/tmp/cora");
    CHECK(ini.get_bool("dataset.drop_isolated", false));
    CHECK(ini.get_int("gcn.hidden", 0) == 16);
    CHECK(ini.get_double("gcn.learning_rate", 0) == 0.01);
    CHECK(ini.get("missing.key", "fallback") == "fallback");
    CHECK(!ini.has("missing.key"));

    CHECK_THROWS_WITH_AS(ini_of("[broken\n"), doctest::Contains("line 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ini_of("novalue\n"),
                         doctest::Contains("key = value"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ini_of("= orphan\n"), doctest::Contains("empty key"),
                         std::invalid_argument);
}

TEST_CASE("typed getters name the offending field") {
    IniFile ini = ini_of("[a]\nx = potato\n");
    CHECK_THROWS_WITH_AS(ini.get_int("a.x", 0), doctest::Contains("a.x"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ini.get_double("a.x", 0), doctest::Contains("a.x"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ini.get_bool("a.x", false), doctest::Contains("a.x"),
                         std::invalid_argument);
}

TEST_CASE("minimal config resolves to documented defaults") {
    RunConfig rc = parse_run_config(ini_of("[dataset]\npath = d\n"));
    CHECK(rc.dataset_path == "d");
    CHECK(rc.protocol.protocol == Protocol::FractionBudget);
    CHECK(rc.protocol.strategy == "random");
    CHECK(rc.protocol.batch_size == 1);
    REQUIRE(rc.protocol.label_fraction.has_value());
    CHECK(*rc.protocol.label_fraction == 0.15);
    CHECK(!rc.protocol.query_budget.has_value());
    CHECK(rc.protocol.repetitions == 20);
    CHECK(rc.protocol.gamma == 0.85);
    CHECK(rc.protocol.distance_cap == 9);
    CHECK(rc.protocol.gcn.hidden == 16);
    CHECK(rc.protocol.gcn.epochs == 200);
    CHECK(rc.protocol.gcn.learning_rate == 0.01);
    CHECK(rc.protocol.gcn.dropout == 0.6);
    CHECK(rc.protocol.gcn.weight_decay == 0.005);
    CHECK(rc.protocol.gcn.validation_fraction == 0.10);
    CHECK(rc.protocol.gcn.adjacency_mode == AdjacencyMode::Symmetric);
    CHECK(rc.base_seed == 1);
    CHECK(rc.output_dir == "out");
}

TEST_CASE("fixed-split default stop rule is a 200-query budget") {
    RunConfig rc = parse_run_config(
        ini_of("[dataset]\npath = d\n[protocol]\ntype = fixed-split\n"));
    CHECK(rc.protocol.protocol == Protocol::FixedSplit);
    CHECK(!rc.protocol.label_fraction.has_value());
    REQUIRE(rc.protocol.query_budget.has_value());
    CHECK(*rc.protocol.query_budget == 200);
    CHECK(rc.protocol.test_size == 1000);
    CHECK(rc.protocol.validation_size == 500);
}

TEST_CASE("full config round-trips every field") {
    RunConfig rc = parse_run_config(ini_of(
        "[dataset]\npath = /data/x\nname = cora\ndrop_isolated = yes\n"
        "whitespace_edges = on\n"
        "[protocol]\ntype = fraction-budget\nbatch_size = 5\n"
        "label_fraction = 0.3\nfeature_kind = bag-of-words\n"
        "repetitions = 7\ngamma = 0.9\ndistance_cap = 4\nseed = 42\n"
        "[gcn]\nhidden = 32\nepochs = 50\nlearning_rate = 0.05\n"
        "dropout = 0.2\nweight_decay = 0.001\nvalidation_fraction = 0\n"
        "adjacency_mode = directed-split\n"
        "[strategy]\nname = region_margin\nlof_k = 11\n"
        "[output]\ndir = results\n"));
    CHECK(rc.dataset.name == "cora");
    CHECK(rc.dataset.drop_isolated);
    CHECK(rc.dataset.any_whitespace);
    CHECK(rc.protocol.batch_size == 5);
    CHECK(*rc.protocol.label_fraction == 0.3);
    CHECK(rc.protocol.feature_kind == FeatureKind::BagOfWords);
    CHECK(rc.protocol.repetitions == 7);
    CHECK(rc.protocol.gamma == 0.9);
    CHECK(rc.protocol.distance_cap == 4);
    CHECK(rc.protocol.lof_k == 11);
    CHECK(rc.protocol.strategy == "region_margin");
    CHECK(rc.protocol.gcn.hidden == 32);
    CHECK(rc.protocol.gcn.adjacency_mode == AdjacencyMode::DirectedSplit);
    CHECK(rc.base_seed == 42);
    CHECK(rc.output_dir == "results");
}

TEST_CASE("invalid values are rejected with the field name") {
    auto with = [](const std::string& extra) {
        return ini_of("[dataset]\npath = d\n" + extra);
    };
    CHECK_THROWS_WITH_AS(parse_run_config(ini_of("[dataset]\nname = x\n")),
                         doctest::Contains("dataset.path"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_run_config(with("[strategy]\nname = bogus\n")),
        doctest::Contains("region_margin"),  // the error lists known names
        std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_run_config(with("[protocol]\nbatch_size = 0\n")),
                         doctest::Contains("batch_size"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_run_config(
            with("[protocol]\nlabel_fraction = 0.1\nquery_budget = 5\n")),
        doctest::Contains("not both"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_run_config(with("[protocol]\nlabel_fraction = 1.5\n")),
        doctest::Contains("label_fraction"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_run_config(with("[protocol]\ngamma = 1\n")),
                         doctest::Contains("gamma"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_run_config(with("[gcn]\ndropout = 1\n")),
                         doctest::Contains("dropout"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_run_config(with("[gcn]\nadjacency_mode = x\n")),
                         doctest::Contains("adjacency_mode"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_run_config(with("[protocol]\nfeature_kind = x\n")),
        doctest::Contains("feature_kind"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_run_config(with("[protocol]\ntype = x\n")),
                         doctest::Contains("protocol"), std::invalid_argument);
}

TEST_CASE("parse_file reports missing paths") {
    CHECK_THROWS_WITH_AS(IniFile::parse_file("/no/such/file.ini"),
                         doctest::Contains("cannot open"),
                         std::invalid_argument);
}
