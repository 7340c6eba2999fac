#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "regimecast/llm_client.hpp"
#include "regimecast/stock_client.hpp"

using namespace regimecast;

namespace {

DateRange wide_range() { return {Date::parse("2000-01-01"), Date::parse("2030-01-01")}; }

struct TestServer {
    httplib::Server server;
    int port = 0;
    std::thread thread;

    explicit TestServer() = default;

    void start() {
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port); }

    ~TestServer() {
        server.stop();
        if (thread.joinable()) thread.join();
    }
};

}  // namespace

TEST_CASE("parse_price_payload sorts, filters, and validates") {
    const std::string payload = R"({
        "symbol": "SPX",
        "prices": [
            {"date": "2020-01-03", "close": 3234.85},
            {"date": "2020-01-02", "close": 3257.85},
            {"date": "1999-01-01", "close": 10.0}
        ]})";
    auto h = parse_price_payload(payload, "SPX", wide_range());
    CHECK(h.symbol == "SPX");
    REQUIRE(h.dates.size() == 2);  // 1999 row filtered by range
    CHECK(h.dates[0].to_string() == "2020-01-02");
    CHECK(h.closes[0] == doctest::Approx(3257.85));

    CHECK_THROWS_AS(parse_price_payload("not json", "S", wide_range()), UpstreamError);
    CHECK_THROWS_AS(parse_price_payload(R"({"prices": []})", "S", wide_range()), UpstreamError);
    CHECK_THROWS_AS(parse_price_payload(R"({"no_prices": 1})", "S", wide_range()), UpstreamError);
    const std::string dup = R"({"prices": [
        {"date": "2020-01-02", "close": 1.0},
        {"date": "2020-01-02", "close": 2.0}]})";
    CHECK_THROWS_AS(parse_price_payload(dup, "S", wide_range()), UpstreamError);
}

TEST_CASE("fetch_stock_history reads a fixture file") {
    const std::string path = "test_prices.json";
    {
        std::ofstream out(path);
        out << R"({"symbol": "T", "prices": [{"date": "2020-06-01", "close": 12.5}]})";
    }
    auto h = fetch_stock_history("T", wide_range(), path);
    REQUIRE(h.dates.size() == 1);
    CHECK(h.closes[0] == 12.5);
    std::remove(path.c_str());

    CHECK_THROWS_AS(fetch_stock_history("T", wide_range(), "missing_fixture.json"),
                    UpstreamError);
}

TEST_CASE("fetch_stock_history talks to an HTTP endpoint") {
    TestServer ts;
    std::string seen_path;
    ts.server.Get("/history", [&](const httplib::Request& req, httplib::Response& res) {
        seen_path = req.path + "?symbol=" + req.get_param_value("symbol");
        res.set_content(
            R"({"symbol": "NET", "prices": [{"date": "2021-02-01", "close": 5.0},
                                            {"date": "2021-02-02", "close": 6.0}]})",
            "application/json");
    });
    ts.start();

    auto h = fetch_stock_history("NET", wide_range(), ts.base_url());
    CHECK(seen_path == "/history?symbol=NET");
    REQUIRE(h.dates.size() == 2);
    CHECK(h.closes[1] == 6.0);
}

TEST_CASE("fetch_stock_history surfaces HTTP failures as UpstreamError") {
    TestServer ts;
    ts.server.Get("/history", [](const httplib::Request&, httplib::Response& res) {
        res.status = 503;
    });
    ts.start();
    CHECK_THROWS_AS(fetch_stock_history("X", wide_range(), ts.base_url()), UpstreamError);
    // a port with no listener
    CHECK_THROWS_AS(fetch_stock_history("X", wide_range(), "http://127.0.0.1:1"), UpstreamError);
}

TEST_CASE("render_label_prompt substitutes the keyword list") {
    auto prompt = render_label_prompt("Label these: {keywords}!", {"fed", "rates"});
    CHECK(prompt == "Label these: fed, rates!");
    CHECK_THROWS(render_label_prompt("no placeholder", {"a"}));
    CHECK(render_label_prompt(default_label_prompt_template(), {"x"}).find("x") !=
          std::string::npos);
}

TEST_CASE("label_cluster_llm round-trips through a chat endpoint and caches") {
    TestServer ts;
    std::atomic<int> calls{0};
    std::string seen_model, seen_auth;
    ts.server.Post("/v1/chat/completions",
                   [&](const httplib::Request& req, httplib::Response& res) {
                       ++calls;
                       auto body = nlohmann::json::parse(req.body);
                       seen_model = body.at("model").get<std::string>();
                       seen_auth = req.get_header_value("Authorization");
                       nlohmann::json reply = {
                           {"choices",
                            {{{"message", {{"role", "assistant"},
                                           {"content", "Monetary Policy\nextra line"}}}}}}};
                       res.set_content(reply.dump(), "application/json");
                   });
    ts.start();

    const std::string cache_dir = "test_label_cache";
    std::filesystem::remove_all(cache_dir);
    setenv("TEST_LLM_KEY", "sekrit", 1);

    LlmConfig cfg;
    cfg.base_url = ts.base_url();
    cfg.model = "test-model";
    cfg.api_key_env = "TEST_LLM_KEY";
    cfg.cache_dir = cache_dir;

    auto label = label_cluster_llm({"fed", "rates", "bonds"}, cfg);
    CHECK(label == "Monetary Policy");  // first line only
    CHECK(seen_model == "test-model");
    CHECK(seen_auth == "Bearer sekrit");
    CHECK(calls == 1);

    // second call is served from the cache, even with the server stopped
    ts.server.stop();
    auto cached = label_cluster_llm({"fed", "rates", "bonds"}, cfg);
    CHECK(cached == "Monetary Policy");
    CHECK(calls == 1);
    std::filesystem::remove_all(cache_dir);
}

TEST_CASE("label_cluster_llm retries then reports empty responses") {
    TestServer ts;
    std::atomic<int> calls{0};
    ts.server.Post("/v1/chat/completions",
                   [&](const httplib::Request&, httplib::Response& res) {
                       ++calls;
                       nlohmann::json reply = {
                           {"choices", {{{"message", {{"content", ""}}}}}}};
                       res.set_content(reply.dump(), "application/json");
                   });
    ts.start();

    LlmConfig cfg;
    cfg.base_url = ts.base_url();
    cfg.max_retries = 2;
    CHECK_THROWS(label_cluster_llm({"kw"}, cfg));
    CHECK(calls == 3);  // initial attempt plus two retries
}

TEST_CASE("fnv1a_hex is stable") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("abc") != fnv1a_hex("abd"));
}
