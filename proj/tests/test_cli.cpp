#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

// End-to-end checks of the goalforge binary. The test runner exports
// GOALFORGE_BIN with the freshly built tool's path.

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string output; // stdout and stderr interleaved
};

std::string binary() {
    const char* bin = std::getenv("GOALFORGE_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "GOALFORGE_BIN must point at the goalforge binary");
    return bin;
}

RunResult run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " \"" + binary() + "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, n);
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gfcli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static inline int counter = 0;
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

json parse(const RunResult& r) {
    CAPTURE(r.output);
    return json::parse(r.output);
}

} // namespace

TEST_CASE("plan on a demo scene emits a feasible plan as json") {
    RunResult r = run("plan --demo pool-blocker --seed 3");
    REQUIRE(r.status == 0);
    json j = parse(r);
    CHECK(j["feasible"].get<bool>());
    REQUIRE(j["plans"].size() == 1);
    CHECK(j["plans"][0]["force"]["initiator"].get<std::string>() == "shooter0");
    CHECK(j["plans"][0]["predicted_collision_time"].get<double>() > 0.0);
    CHECK(j["goal"]["target"].get<std::string>() == "target");
    CHECK(j["initiator_counts"]["shooter0"].get<int>() == 1);
}

TEST_CASE("plan failure modes map to distinct exit codes") {
    RunResult unknown = run("plan --demo domino-line --target phantom");
    CHECK(unknown.status == 2);
    CHECK(parse(unknown)["code"].get<std::string>() == "unknown-target");

    // a goal no candidate can reach: every rejection is reported
    RunResult infeasible = run("plan --demo mass-grid --magnitude 1.0");
    CHECK(infeasible.status == 2);
    json j = parse(infeasible);
    CHECK(j["code"].get<std::string>() == "no-feasible-plan");
    CHECK(j["rejected"].size() > 0);

    RunResult badflag = run("plan --demo domino-line --no-such-flag");
    CHECK(badflag.status == 1);
    CHECK(parse(badflag)["code"].get<std::string>() == "bad-config");
}

TEST_CASE("seed resolution prefers the flag over the environment") {
    std::string args = "plan --demo domino-line --n 6";
    json from_flag = parse(run(args + " --seed 7"));
    json from_env = parse(run(args, "GOALFORGE_SEED=7"));
    json flag_beats_env = parse(run(args + " --seed 7", "GOALFORGE_SEED=99"));
    CHECK(from_flag["plans"] == from_env["plans"]);
    CHECK(from_flag["plans"] == flag_beats_env["plans"]);
    CHECK(from_flag["initiator_counts"] == from_env["initiator_counts"]);

    RunResult bad = run("plan --demo domino-line", "GOALFORGE_SEED=zebra");
    CHECK(bad.status == 1);
    CHECK(parse(bad)["code"].get<std::string>() == "bad-config");
}

TEST_CASE("gen writes the documented tree and rejects unknown families") {
    TempDir tmp;
    fs::path cfg = tmp.path / "cfg.json";
    write_text(cfg, R"({"domain": {"image_h": 48, "image_w": 48, "frames": 17,
                        "encoding": {"duration_min": 4, "duration_max": 17}}})");

    RunResult r = run("gen --out \"" + (tmp.path / "data").string() +
                      "\" --seed 5 --workers 2 --dominos 1 --collide 1 --miss 1 --sway 0 "
                      "--config \"" + cfg.string() + "\"");
    REQUIRE_MESSAGE(r.status == 0, r.output);
    json j = parse(r);
    CHECK(j["total"].get<int>() == 3);
    CHECK(j["counts"]["dominos"].get<int>() == 1);
    CHECK(j["config"]["domain"]["image_h"].get<int>() == 48);

    fs::path data = tmp.path / "data";
    CHECK(fs::exists(data / "manifest.json"));
    CHECK(fs::exists(data / "config.json"));
    for (const char* family : {"dominos", "balls-collide", "balls-miss"}) {
        fs::path sample = data / family / "000000";
        CHECK(fs::exists(sample / "meta.json"));
        CHECK(fs::exists(sample / "tensor.gfct"));
        CHECK(fs::exists(sample / "frames" / "00000.png"));
    }
    CHECK_FALSE(fs::exists(data / "sway"));

    RunResult bad = run("gen --out \"" + (tmp.path / "x").string() + "\" --family footballs");
    CHECK(bad.status == 1);
    CHECK(parse(bad)["code"].get<std::string>() == "bad-family");
}

TEST_CASE("simulate reports events and an outcome for the chain demo") {
    RunResult r = run("simulate --demo domino-line --initiator domino0 --direction 0 "
                      "--magnitude 0.8 --target domino5 --duration 5");
    REQUIRE(r.status == 0);
    json j = parse(r);
    CHECK(j["events"].size() >= 5);
    CHECK_FALSE(j["outcome"].is_null());
    CHECK(j["outcome"]["direction"].get<double>() == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("eval covers all three metrics plus the empty-input guard") {
    TempDir tmp;

    fs::path counts = tmp.path / "counts.json";
    write_text(counts, "[4, 4, 4, 4, 4]");
    json div = parse(run("eval --metric diversity --input \"" + counts.string() + "\""));
    CHECK(div["score"].get<double>() == doctest::Approx(1.0));
    CHECK(div["support"].get<int>() == 5);

    fs::path trials = tmp.path / "trials.json";
    write_text(trials, R"([{"scene": "s0", "truth": "a", "observed": "a"},
                           {"scene": "s1", "truth": "a", "observed": "b"}])");
    json acc = parse(run("eval --metric accuracy --input \"" + trials.string() + "\""));
    CHECK(acc["accuracy_percent"].get<double>() == doctest::Approx(50.0));
    CHECK(acc["valid"].get<int>() == 2);

    fs::path speeds = tmp.path / "speeds.json";
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        rows.push_back({{"m_p", 1.0}, {"m_t", 1.0}, {"speed", 2.0 + 0.1 * i}});
        rows.push_back({{"m_p", 1.0}, {"m_t", 3.0}, {"speed", 4.0 + 0.1 * i}});
    }
    write_text(speeds, rows.dump());
    json spd = parse(run("eval --metric speed --input \"" + speeds.string() + "\""));
    CHECK(spd["all_satisfied"].get<bool>());

    fs::path empty = tmp.path / "empty.json";
    write_text(empty, "\n");
    RunResult r = run("eval --metric accuracy --input \"" + empty.string() + "\"");
    CHECK(r.status == 1);
    CHECK(parse(r)["code"].get<std::string>() == "no-valid-trials");
}

TEST_CASE("overlay requires a tensor next to the frames") {
    TempDir tmp;
    fs::create_directories(tmp.path / "frames");
    RunResult r = run("overlay --sample \"" + tmp.path.string() + "\"");
    CHECK(r.status == 1);
    CHECK(parse(r)["code"].get<std::string>() == "missing-tensor");
}

TEST_CASE("encode writes a loadable tensor and reports kept channels") {
    TempDir tmp;
    fs::path out = tmp.path / "t.gfct";
    RunResult r = run("encode --demo mass-grid --target target --mask-mode direct-only "
                      "--seed 2 --out \"" + out.string() + "\"");
    REQUIRE_MESSAGE(r.status == 0, r.output);
    json j = parse(r);
    CHECK(j["channels"]["direct"].get<bool>());
    CHECK_FALSE(j["channels"]["goal"].get<bool>());
    CHECK(fs::exists(out));
    CHECK(fs::file_size(out) > 20);
}
