#include "backend.hpp"

#include "errors.hpp"
#include "prompts.hpp"
#include "scripted_backend.hpp"
#include "support.hpp"

#include <doctest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <thread>

using namespace aida;
using nlohmann::json;

namespace {

CompletionRequest make_request(const std::string& text, std::int64_t seed = 7) {
    CompletionRequest request;
    request.model_id = "test-model";
    request.temperature = 0.7;
    request.seed = seed;
    request.max_tokens = 64;
    request.messages = {{Role::system, "sys"}, {Role::user, text}};
    return request;
}

}  // namespace

TEST_CASE("request validation rejects empty and malformed requests") {
    CompletionRequest request = make_request("hi");
    request.messages.clear();
    CHECK_THROWS_AS(request.validate(), Error);

    request = make_request("hi");
    request.messages[1].content = "";
    CHECK_THROWS_AS(request.validate(), Error);

    request = make_request("hi");
    request.temperature = -0.1;
    CHECK_THROWS_AS(request.validate(), Error);
}

TEST_CASE("digest is stable under request re-serialization") {
    const CompletionRequest request = make_request("round trip me");
    const std::string digest = request_digest(request);

    // Serialize through the wire format and parse back by hand.
    const json body = json::parse(HttpBackend::request_body_json(request));
    CompletionRequest round;
    round.model_id = body["model"];
    round.temperature = body["temperature"];
    round.seed = body["seed"];
    round.max_tokens = body["max_tokens"];
    for (const auto& message : body["messages"]) {
        Role role = message["role"] == "system" ? Role::system
                    : message["role"] == "user" ? Role::user
                                                : Role::assistant;
        round.messages.push_back({role, message["content"]});
    }
    CHECK(request_digest(round) == digest);
}

TEST_CASE("digest ignores max_tokens but tracks everything else") {
    CompletionRequest request = make_request("hello");
    const std::string digest = request_digest(request);
    request.max_tokens = 999;
    CHECK(request_digest(request) == digest);
    request.seed = 8;
    CHECK(request_digest(request) != digest);
}

TEST_CASE("cassette grows, overwrites duplicates with a warning, round-trips") {
    test::WarningCapture warnings;
    Cassette cassette;
    CHECK(cassette.record("d1", {"first", 1, 2}));
    CHECK(cassette.size() == 1);
    CHECK(cassette.record("d2", {"second", 0, 0}));
    CHECK(cassette.size() == 2);

    CHECK_FALSE(cassette.record("d1", {"first again", 0, 0}));
    CHECK(cassette.size() == 2);
    REQUIRE(warnings.messages().size() == 1);
    CHECK(cassette.find("d1")->content == "first again");

    test::TempDir dir("cassette");
    const auto path = dir.path() / "c.jsonl";
    cassette.save(path);
    const Cassette loaded = Cassette::load(path);
    CHECK(loaded.size() == 2);
    CHECK(loaded.find("d2")->content == "second");
    CHECK(loaded.find("nope") == nullptr);
}

TEST_CASE("replay returns recorded responses byte-identically, misses are errors") {
    const CompletionRequest request = make_request("what is an ejector?");
    Cassette cassette;
    cassette.record(request_digest(request), {"recorded answer", 10, 3});
    ReplayBackend replay{std::move(cassette)};

    const auto first = replay.complete(request);
    const auto second = replay.complete(request);
    CHECK(first.content == "recorded answer");
    CHECK(first == second);

    const CompletionRequest other = make_request("something else");
    CHECK_THROWS_WITH_AS(replay.complete(other), doctest::Contains("replay miss"), Error);
}

TEST_CASE("record mode persists exchanges and replays them") {
    test::TempDir dir("record");
    const auto path = dir.path() / "rec.jsonl";
    {
        RecordBackend recorder(std::make_shared<ScriptedBackend>(), path);
        recorder.complete(make_request("first prompt"));
        recorder.complete(make_request("second prompt"));
    }
    ReplayBackend replay = ReplayBackend::from_file(path);
    ScriptedBackend scripted;
    CHECK(replay.complete(make_request("first prompt")).content ==
          scripted.complete(make_request("first prompt")).content);
}

TEST_CASE("scripted backend is a pure function of the request") {
    ScriptedBackend scripted;
    const auto a = scripted.complete(make_request("tell me about airflow"));
    const auto b = scripted.complete(make_request("tell me about airflow"));
    CHECK(a == b);
    const auto c = scripted.complete(make_request("tell me about airflow", 8));
    CHECK(a.content != c.content);
}

TEST_CASE("retry delays are non-decreasing and capped") {
    RetryPolicy policy;
    policy.base_delay = std::chrono::milliseconds(100);
    policy.max_delay = std::chrono::milliseconds(1500);
    std::chrono::milliseconds previous{0};
    for (int attempt = 1; attempt <= 12; ++attempt) {
        const auto delay = policy.delay_before_retry(attempt);
        CHECK(delay >= previous);
        CHECK(delay <= policy.max_delay);
        previous = delay;
    }
    CHECK(policy.delay_before_retry(1) == std::chrono::milliseconds(100));
    CHECK(policy.delay_before_retry(2) == std::chrono::milliseconds(200));
    CHECK(policy.delay_before_retry(12) == policy.max_delay);
}

TEST_CASE("replay backend serves concurrent callers") {
    const CompletionRequest request = make_request("concurrent");
    Cassette cassette;
    cassette.record(request_digest(request), {"shared", 0, 0});
    ReplayBackend replay{std::move(cassette)};

    std::atomic<int> mismatches{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 50; ++i) {
                if (replay.complete(request).content != "shared") {
                    ++mismatches;
                }
            }
        });
    }
    for (auto& thread : threads) {
        thread.join();
    }
    CHECK(mismatches == 0);
}

namespace {

/// Minimal OpenAI-compatible server for exercising the HTTP client.
class LocalServer {
public:
    explicit LocalServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post("/v1/chat/completions",
                     [handler = std::move(handler)](const httplib::Request& req,
                                                    httplib::Response& res) { handler(req, res); });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~LocalServer() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

HttpBackendConfig fast_config(const std::string& endpoint) {
    HttpBackendConfig config;
    config.endpoint = endpoint;
    config.api_key = "test-key";
    config.retry = {3, std::chrono::milliseconds(1), std::chrono::milliseconds(4)};
    return config;
}

}  // namespace

TEST_CASE("http backend round-trips the chat completion wire format") {
    LocalServer server([](const httplib::Request& req, httplib::Response& res) {
        const json body = json::parse(req.body);
        CHECK(body["model"] == "test-model");
        CHECK(body["messages"][1]["role"] == "user");
        CHECK(req.get_header_value("Authorization") == "Bearer test-key");
        res.set_content(json{{"choices", json::array({{{"message", {{"content", "pong"}}}}})},
                             {"usage", {{"prompt_tokens", 5}, {"completion_tokens", 1}}}}
                            .dump(),
                        "application/json");
    });
    HttpBackend backend(fast_config(server.endpoint()));
    const auto response = backend.complete(make_request("ping"));
    CHECK(response.content == "pong");
    CHECK(response.prompt_tokens == 5);
    CHECK(response.completion_tokens == 1);
}

TEST_CASE("http backend maps provider failures onto typed errors") {
    std::atomic<int> hits{0};

    SUBCASE("401 is an auth error, no retry") {
        LocalServer server([&](const httplib::Request&, httplib::Response& res) {
            ++hits;
            res.status = 401;
        });
        HttpBackend backend(fast_config(server.endpoint()));
        backend.set_sleeper([](std::chrono::milliseconds) {});
        CHECK_THROWS_WITH_AS(backend.complete(make_request("x")), doctest::Contains("auth"),
                             Error);
        CHECK(hits == 1);
    }

    SUBCASE("429 retries with policy delays then gives up as rate limited") {
        LocalServer server([&](const httplib::Request&, httplib::Response& res) {
            ++hits;
            res.status = 429;
        });
        HttpBackend backend(fast_config(server.endpoint()));
        std::vector<std::chrono::milliseconds> sleeps;
        backend.set_sleeper([&](std::chrono::milliseconds d) { sleeps.push_back(d); });
        CHECK_THROWS_WITH_AS(backend.complete(make_request("x")),
                             doctest::Contains("rate limited"), Error);
        CHECK(hits == 3);
        // Two retry waits at the policy schedule (plus any cooldown waits).
        REQUIRE(sleeps.size() >= 2);
        CHECK(sleeps[0] == std::chrono::milliseconds(1));
        CHECK(std::count(sleeps.begin(), sleeps.end(), std::chrono::milliseconds(2)) >= 1);
    }

    SUBCASE("transient 500s are retried until success") {
        LocalServer server([&](const httplib::Request&, httplib::Response& res) {
            if (++hits < 3) {
                res.status = 500;
                return;
            }
            res.set_content(
                json{{"choices", json::array({{{"message", {{"content", "recovered"}}}}})}}.dump(),
                "application/json");
        });
        HttpBackend backend(fast_config(server.endpoint()));
        backend.set_sleeper([](std::chrono::milliseconds) {});
        CHECK(backend.complete(make_request("x")).content == "recovered");
        CHECK(hits == 3);
    }

    SUBCASE("400 mentioning context length signals an assembly budget bug") {
        LocalServer server([&](const httplib::Request&, httplib::Response& res) {
            res.status = 400;
            res.set_content(json{{"error", {{"message", "maximum context length exceeded"}}}}.dump(),
                            "application/json");
        });
        HttpBackend backend(fast_config(server.endpoint()));
        CHECK_THROWS_WITH_AS(backend.complete(make_request("x")),
                             doctest::Contains("context overflow"), Error);
    }
}
