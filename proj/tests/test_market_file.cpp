#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "illiq/analysis.hpp"
#include "illiq/market_file.hpp"

using namespace illiq;

namespace {

const char* kBasic = R"({
  "assets": ["cash", "stock"],
  "tree": [
    {"id": 0, "parent": null, "time": 0, "prob": "1"},
    {"id": 1, "parent": 0, "time": 1, "prob": "0.5"},
    {"id": 2, "parent": 0, "time": 1, "prob": "1/2"}
  ],
  "costs": [
    {"node": 0, "type": "bid_ask", "bid": ["1", "1"], "ask": ["1", "1.25"]},
    {"node": 1, "type": "linear", "prices": ["1", "2"]},
    {"node": 2, "type": "order_book", "books": [
      {"ask": [["1", "inf"]], "bid": [["1", "inf"]]},
      {"bid": [["0.5", "4"]], "ask": [["0.75", "4"]]}
    ]}
  ],
  "constraints": [
    {"node": 0, "type": "halfspaces", "rows": [{"a": ["0", "-1"], "b": "0"}]},
    {"node": 1, "type": "none"}
  ],
  "claims": {"payout": ["0", "1", "-1"]},
  "deflators": {"unit": {"y": ["1", "1", "1"], "s": [["1", "1"], ["1", "1"], ["1", "1"]]}}
})";

}  // namespace

TEST_CASE("a full description parses and validates") {
    const ParsedMarket market = load_market_text(kBasic);
    CHECK(market.assets == std::vector<std::string>{"cash", "stock"});
    CHECK(market.instance.tree().num_nodes() == 3);
    CHECK(market.instance.num_assets() == 2);
    CHECK(market.instance.tree().prob(1) == rat(1, 2));

    // bid_ask node
    const auto& sep = std::get<SeparableCost>(market.instance.cost(0));
    CHECK(sep.per_asset[1].subdifferential(Rat(0)) ==
          Interval::make(ExtReal(Rat(1)), ExtReal(rat(5, 4))));
    // order-book node: infinite-depth cash book is a plain line
    const auto& book = std::get<SeparableCost>(market.instance.cost(2));
    CHECK(book.per_asset[0] == Pwl::linear(Rat(1)));
    CHECK(book.per_asset[1].eval(Rat(4)) == ExtReal(Rat(3)));

    // constraint: short-sale ban on the stock at node 0, default none at node 2
    CHECK(!market.instance.constraint(0).contains({Rat(0), Rat(-1)}));
    CHECK(market.instance.constraint(2).is_whole_space());

    CHECK(market.claims.at("payout")[2] == Rat(-1));
    CHECK(market.deflators.at("unit").s[0][1] == Rat(1));
}

TEST_CASE("unknown fields are rejected") {
    std::string bad = kBasic;
    bad.insert(bad.find("\"assets\""), "\"extra\": 1, ");
    CHECK_THROWS_AS(load_market_text(bad), MarketFileError);

    std::string bad_cost = kBasic;
    bad_cost.insert(bad_cost.find("\"type\": \"linear\""), "\"typo\": 1, ");
    CHECK_THROWS_AS(load_market_text(bad_cost), MarketFileError);
}

TEST_CASE("structural violations are rejected with context") {
    // bad probability sum
    std::string bad = kBasic;
    bad.replace(bad.find("\"1/2\""), 5, "\"1/3\"");
    CHECK_THROWS_WITH_AS(load_market_text(bad),
                         "tree: children probabilities must sum to the parent's", MarketFileError);

    // missing cost entry
    std::string missing = kBasic;
    missing.erase(missing.find("{\"node\": 1, \"type\": \"linear\", \"prices\": [\"1\", \"2\"]},"), 53);
    CHECK_THROWS_AS(load_market_text(missing), MarketFileError);

    // duplicate cost entry
    std::string dup = kBasic;
    const std::string entry = "{\"node\": 1, \"type\": \"linear\", \"prices\": [\"1\", \"2\"]},";
    dup.insert(dup.find(entry), entry);
    CHECK_THROWS_AS(load_market_text(dup), MarketFileError);

    // crossed quotes reach the builder validation
    std::string crossed = kBasic;
    crossed.replace(crossed.find("\"ask\": [\"1\", \"1.25\"]"), 21, "\"ask\": [\"1\", \"0.5\"]");
    CHECK_THROWS_AS(load_market_text(crossed), MarketFileError);
}

TEST_CASE("exact numbers only, floats behind the flag") {
    std::string floaty = kBasic;
    floaty.replace(floaty.find("\"0.5\""), 5, "0.5");
    CHECK_THROWS_AS(load_market_text(floaty), MarketFileError);
    LoadOptions opt;
    opt.allow_float_input = true;
    CHECK(load_market_text(floaty, opt).instance.tree().prob(1) == rat(1, 2));
}

TEST_CASE("cone and matrix constraints") {
    const char* text = R"({
      "assets": ["a", "b"],
      "tree": [{"id": 0, "parent": null, "time": 0, "prob": "1"},
               {"id": 1, "parent": 0, "time": 1, "prob": "1"}],
      "costs": [{"node": 0, "type": "linear", "prices": ["1", "1"]},
                {"node": 1, "type": "linear", "prices": ["1", "1"]}],
      "constraints": [
        {"node": 0, "type": "cone", "generators": [["1", "0"], ["0", "1"]]},
        {"node": 1, "type": "matrix_cone",
         "M": [["2", "0"], ["0", "4"]],
         "K": [{"a": ["1", "0"], "b": "1"}, {"a": ["0", "1"], "b": "1"}]}
      ]
    })";
    const ParsedMarket market = load_market_text(text);
    CHECK(market.instance.constraint(0).contains({Rat(1), Rat(2)}));
    CHECK(!market.instance.constraint(0).contains({Rat(-1), Rat(0)}));
    CHECK(market.instance.constraint(1).contains({rat(1, 2), rat(1, 4)}));
    CHECK(!market.instance.constraint(1).contains({Rat(1), Rat(0)}));
}

TEST_CASE("exponential costs and analysis from a file") {
    const char* text = R"({
      "assets": ["stock"],
      "tree": [{"id": 0, "parent": null, "time": 0, "prob": "1"},
               {"id": 1, "parent": 0, "time": 1, "prob": "1"}],
      "costs": [{"node": 0, "type": "linear", "prices": ["1"]},
                {"node": 1, "type": "exponential", "sbar": "1", "alpha": "1", "cash": false}]
    })";
    const ParsedMarket market = load_market_text(text);
    CHECK(!market.instance.is_polyhedral());
    CHECK(check_arbitrage(market.instance).verdict == Verdict::NoArbitrage);
}

TEST_CASE("order book csv reference") {
    const std::string dir = "/tmp/illiq_test_csv";
    std::system(("mkdir -p " + dir).c_str());
    {
        std::ofstream csv(dir + "/book.csv");
        csv << "side,price,depth\nask,10,5\nask,12,5\nbid,9,5\n";
    }
    {
        std::ofstream mf(dir + "/market.json");
        mf << R"({
          "assets": ["stock"],
          "tree": [{"id": 0, "parent": null, "time": 0, "prob": "1"},
                   {"id": 1, "parent": 0, "time": 1, "prob": "1"}],
          "costs": [{"node": 0, "type": "order_book", "books": [{"csv": "book.csv"}]},
                    {"node": 1, "type": "linear", "prices": ["10"]}]
        })";
    }
    const ParsedMarket market = load_market_file(dir + "/market.json");
    const auto& sep = std::get<SeparableCost>(market.instance.cost(0));
    CHECK(sep.per_asset[0].eval(Rat(7)) == ExtReal(Rat(74)));
    CHECK(sep.per_asset[0].eval(Rat(-7)) == ExtReal(Rat(-45)));
}

TEST_CASE("digest is deterministic") {
    CHECK(content_digest(kBasic) == content_digest(kBasic));
    CHECK(content_digest("a") != content_digest("b"));
}
