#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "varineq/varineq.hpp"

using namespace varineq;

namespace {

io::input_document parse_text(const std::string& text) {
    std::istringstream in(text);
    return io::parse_auto(in);
}

}  // namespace

TEST_CASE("CSV parsing", "[io]") {
    SECTION("value-only header") {
        std::istringstream in("value\n1\n4\n");
        const io::input_document doc = io::parse_csv(in);
        REQUIRE(doc.values.size() == 2);
        CHECK(doc.values[0] == 1.0);
        CHECK(doc.values[1] == 4.0);
        CHECK_FALSE(doc.weights.has_value());
    }
    SECTION("value,weight header") {
        std::istringstream in("value,weight\n2, 0.75\n8, 0.25\n");
        const io::input_document doc = io::parse_csv(in);
        REQUIRE(doc.weights.has_value());
        CHECK(doc.values == std::vector<double>{2.0, 8.0});
        CHECK(*doc.weights == std::vector<double>{0.75, 0.25});
    }
    SECTION("blank lines and surrounding whitespace are tolerated") {
        std::istringstream in("value\n 1 \n\n4\n\n");
        CHECK(io::parse_csv(in).values.size() == 2);
    }
    SECTION("negative and scientific-notation numbers") {
        std::istringstream in("value\n-1\n2.5e-3\n");
        const io::input_document doc = io::parse_csv(in);
        CHECK(doc.values[0] == -1.0);
        CHECK(doc.values[1] == 2.5e-3);
    }
    SECTION("malformed documents are rejected") {
        std::istringstream bad_header("values\n1\n");
        CHECK_THROWS_AS(io::parse_csv(bad_header), io::parse_error);
        std::istringstream bad_number("value\nabc\n");
        CHECK_THROWS_AS(io::parse_csv(bad_number), io::parse_error);
        std::istringstream extra_column("value\n1,2\n");
        CHECK_THROWS_AS(io::parse_csv(extra_column), io::parse_error);
        std::istringstream missing_weight("value,weight\n1\n");
        CHECK_THROWS_AS(io::parse_csv(missing_weight), io::parse_error);
        std::istringstream empty("");
        CHECK_THROWS_AS(io::parse_csv(empty), io::parse_error);
    }
}

TEST_CASE("JSON parsing", "[io]") {
    SECTION("values with optional weights") {
        std::istringstream in(R"({"values": [1, 4], "weights": [0.5, 0.5]})");
        const io::input_document doc = io::parse_json(in);
        CHECK(doc.values == std::vector<double>{1.0, 4.0});
        REQUIRE(doc.weights.has_value());
        CHECK(*doc.weights == std::vector<double>{0.5, 0.5});
    }
    SECTION("weights may be omitted or null") {
        std::istringstream in(R"({"values": [1, 4]})");
        CHECK_FALSE(io::parse_json(in).weights.has_value());
        std::istringstream in2(R"({"values": [1, 4], "weights": null})");
        CHECK_FALSE(io::parse_json(in2).weights.has_value());
    }
    SECTION("malformed documents are rejected") {
        std::istringstream not_object("[1, 2]");
        CHECK_THROWS_AS(io::parse_json(not_object), io::parse_error);
        std::istringstream no_values(R"({"weights": [1]})");
        CHECK_THROWS_AS(io::parse_json(no_values), io::parse_error);
        std::istringstream bad_entry(R"({"values": [1, "x"]})");
        CHECK_THROWS_AS(io::parse_json(bad_entry), io::parse_error);
        std::istringstream truncated(R"({"values": [1, )");
        CHECK_THROWS_AS(io::parse_json(truncated), io::parse_error);
    }
}

TEST_CASE("format sniffing", "[io]") {
    CHECK(parse_text("value\n1\n2\n").values.size() == 2);
    CHECK(parse_text("  \n {\"values\": [3]}").values.size() == 1);
    CHECK_THROWS_AS(parse_text("   \n  "), io::parse_error);
}

TEST_CASE("to_sample: omitted weights become uniform", "[io]") {
    const io::input_document bare = parse_text("value\n1\n4\n");
    const io::input_document explicit_uniform = parse_text("value,weight\n1,0.5\n4,0.5\n");
    const weighted_sample a = io::to_sample(bare);
    const weighted_sample b = io::to_sample(explicit_uniform);

    const amgm_gap_report ra = full_gap_report(a, 1.0, 1.0);
    const amgm_gap_report rb = full_gap_report(b, 1.0, 1.0);
    CHECK(ra.gap == rb.gap);
    CHECK(ra.var_lower == rb.var_lower);
    CHECK(ra.var_upper == rb.var_upper);
    CHECK(ra.sqrt_var_lower == rb.sqrt_var_lower);
}

TEST_CASE("JSON rendering follows the published schema", "[io]") {
    const weighted_sample x14 = weighted_sample::uniform({1.0, 4.0});

    SECTION("gap report") {
        const nlohmann::json j = io::to_json(full_gap_report(x14, 1.0, 1.0), x14);
        CHECK(j["gap"] == 0.5);
        CHECK(j["bounds"]["thm4"]["lower"] == 0.5);
        CHECK(j["bounds"]["thm4"]["upper"] == 0.5);
        CHECK(j["bounds"]["thm4"]["r"] == 1.0);
        CHECK(j["bounds"]["thm4"]["s"] == 1.0);
        CHECK(j["bounds"]["cartwright_field"]["lower"] == 0.28125);
        CHECK(j["bounds"]["cartwright_field"]["upper"] == 1.125);
        CHECK(j["bounds"]["a2_lower"] == 0.25);
        CHECK(j["sample"]["n"] == 2);
        CHECK(j["sample"]["alpha_min"] == 0.5);
        CHECK(j["sample"]["x_min"] == 1.0);
        CHECK(j["sample"]["x_max"] == 4.0);

        SECTION("round-trips through text") {
            const nlohmann::json back = nlohmann::json::parse(j.dump());
            CHECK(back == j);
        }
    }
    SECTION("cartwright_field is null when X_min = 0") {
        const weighted_sample x04 = weighted_sample::uniform({0.0, 4.0});
        const nlohmann::json j = io::to_json(full_gap_report(x04, 1.0, 1.0), x04);
        CHECK(j["bounds"]["cartwright_field"].is_null());
    }
    SECTION("curve: -infinity renders as null") {
        const weighted_sample constant = weighted_sample::uniform({2.0, 2.0});
        const power_variance_curve c = curve(constant, {0.25, 0.5, 1.0});
        const nlohmann::json j = io::to_json(c, check_monotone(c));
        REQUIRE(j["curve"]["grid"].size() == 3);
        CHECK(j["curve"]["log_v"][0].is_null());
        CHECK(j["curve"]["monotone"] == true);
        CHECK(nlohmann::json::parse(j.dump()) == j);
    }
    SECTION("curve: finite values stay numeric") {
        const power_variance_curve c = curve(x14, {0.25, 0.5, 1.0});
        const nlohmann::json j = io::to_json(c, check_monotone(c));
        CHECK(j["curve"]["log_v"][2].is_number());
        CHECK(j["curve"]["log_v"][2].get<double>() ==
              Catch::Approx(0.81093021621632876).epsilon(1e-13));
    }
    SECTION("decomposition report") {
        const nlohmann::json j =
            io::to_json(decompose(weighted_sample::uniform({-1.0, 2.0})));
        CHECK(j["decomposition"]["var_x"] == 2.25);
        CHECK(j["decomposition"]["var_pos"] == 1.0);
        CHECK(j["decomposition"]["var_neg"] == 0.25);
        CHECK(j["decomposition"]["var_cond_pos"] == 1.0);
        CHECK(j["decomposition"]["var_cond_neg"] == 0.25);
        CHECK(j["decomposition"]["eq_first"] == false);
        CHECK(j["decomposition"]["eq_middle"] == false);
        CHECK(j["decomposition"]["eq_third"] == true);
        CHECK(j["decomposition"]["algebra"] == "b");
    }
    SECTION("stress findings document") {
        stress::stress_config cfg;
        cfg.seed = 5;
        cfg.trials = 50;
        cfg.n_min = cfg.n_max = 2;
        cfg.target = stress::stress_target::thm4;
        const stress::stress_result result = stress::run(cfg);
        const nlohmann::json j = io::to_json(result, cfg);
        CHECK(j["seed"] == 5);
        CHECK(j["trials"] == 50);
        CHECK(j["target"] == "thm4");
        CHECK(j["summary"]["trials"] == 50);
        CHECK(j["summary"]["violations"] == 0);
        CHECK(j["summary"]["min_slack"].contains("thm4_lower"));
        CHECK(j["summary"]["min_slack"]["thm4_lower"].contains("sample"));
        for (const auto& f : j["findings"]) {
            CHECK(f.contains("kind"));
            CHECK(f.contains("inequality_id"));
            CHECK(f.contains("slack"));
            CHECK(f.contains("trial"));
            CHECK(f.contains("sample"));
        }
        CHECK(nlohmann::json::parse(j.dump()) == j);
    }
}
