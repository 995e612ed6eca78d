#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end checks of the decouple binary; the path comes from the
// DECOUPLE_BIN environment variable set by ctest.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string binary() {
    const char* env = std::getenv("DECOUPLE_BIN");
    REQUIRE_MESSAGE(env != nullptr, "DECOUPLE_BIN must point at the decouple binary");
    return env;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args, int idx) {
    std::string out_path = "./cli_out_" + std::to_string(idx) + ".txt";
    std::string cmd = "\"" + binary() + "\" " + args + " > " + out_path + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    std::remove(out_path.c_str());
    return r;
}

} // namespace

TEST_CASE("exponent command emits the exact breakdown") {
    auto r = run("--cache \"\" exponent -d 3 -v +- -p 4 -q 4", 0);
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.output);
    CHECK(j["schema_version"] == 1);
    CHECK(j["results"][0]["sharp"] == "1/4");
    CHECK(j["results"][0]["attained_by"].size() == 3);

    auto inf = run("--cache \"\" exponent -d 3 -v +- -p inf -q 2", 1);
    auto ji = nlohmann::json::parse(inf.output);
    CHECK(ji["results"][0]["sharp"] == "1/2");
    CHECK(ji["results"][0]["region"] == "pentagon");
}

TEST_CASE("bad inputs exit nonzero with a message") {
    CHECK(run("exponent -d 1 -p 2 -q 2", 2).exit_code != 0);
    CHECK(run("exponent -d 2 -p x -q 2", 3).exit_code != 0);
    CHECK(run("exponent -d 2 -v ++- -p 2 -q 2", 4).exit_code != 0);
    CHECK(run("nonsense", 5).exit_code != 0);
    CHECK(run("verify-extremizer --kind hyperplane -d 2 --pq 4:4 --ladder 4,8 --cache \"\"", 6)
              .exit_code != 0);
}

TEST_CASE("diagram csv grid") {
    auto r = run("--cache \"\" diagram -d 2 --bound 4 --format csv", 7);
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("rp,rq,region,sharp\n", 0) == 0);
    // 3x3 grid plus header
    int lines = 0;
    for (char c : r.output)
        if (c == '\n') ++lines;
    CHECK(lines == 10);
    CHECK(r.output.find("0/1,0/1,pentagon,1/1") != std::string::npos);
    CHECK(r.output.find("1/2,1/2,trapezoid,0/1") != std::string::npos);
    // elliptic case: the triangle region is empty
    CHECK(run("--cache \"\" diagram -d 2 --bound 12 --format csv", 8)
              .output.find("triangle") == std::string::npos);
    CHECK(run("--cache \"\" diagram -d 3 -v +- --bound 12 --format csv", 9)
              .output.find("triangle") != std::string::npos);
}

TEST_CASE("DECOUPLE_CACHE environment variable sets the default path") {
    std::string cache = "./cli_env_cache.csv";
    std::remove(cache.c_str());
    std::string cmd = "DECOUPLE_CACHE=" + cache + " \"" + binary() +
                      "\" verify-extremizer --kind dirichlet --pq 4:2 --ladder 4,8,16"
                      " > /dev/null 2>/dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    std::ifstream in(cache);
    CHECK(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("dirichlet") != std::string::npos);
    std::remove(cache.c_str());
}

TEST_CASE("json reports are byte-identical across runs") {
    std::string cmds[] = {
        "--cache \"\" exponent -d 3 -v +- -p 10/3 -q 2",
        "--cache \"\" verify-moments --ladder 4,8,16 --p 2,4",
        "--cache \"\" verify-extremizer --kind hyperplane -d 3 -v +- --pq 4:4 --ladder 4,8,16",
    };
    int idx = 10;
    for (const auto& cmd : cmds) {
        auto a = run(cmd, idx++);
        auto b = run(cmd, idx++);
        CHECK(a.exit_code == 0);
        CHECK(a.output == b.output);
        CHECK_FALSE(a.output.empty());
    }
}

TEST_CASE("cache reuse and --force") {
    std::string cache = "./cli_cache_test.csv";
    std::remove(cache.c_str());
    std::string base = "verify-extremizer --kind constant -d 2 --pq inf:2 --ladder 8,16,32 --cache " + cache;

    auto first = run(base, 20);
    CHECK(first.exit_code == 0);
    std::ifstream in1(cache);
    std::string text1((std::istreambuf_iterator<char>(in1)), std::istreambuf_iterator<char>());
    CHECK(text1.find("constant") != std::string::npos);
    int rows1 = 0;
    for (char c : text1)
        if (c == '\n') ++rows1;

    // second run hits the cache and reports the identical values
    auto second = run(base, 21);
    CHECK(second.output == first.output);
    std::ifstream in2(cache);
    std::string text2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
    CHECK(text2 == text1);

    // --force recomputes and appends; report values unchanged
    auto forced = run(base + " --force", 22);
    CHECK(forced.output == first.output);
    std::ifstream in3(cache);
    std::string text3((std::istreambuf_iterator<char>(in3)), std::istreambuf_iterator<char>());
    int rows3 = 0;
    for (char c : text3)
        if (c == '\n') ++rows3;
    CHECK(rows3 == 2 * rows1 - 1);  // header not repeated
    std::remove(cache.c_str());
}

TEST_CASE("failing verdicts drive a nonzero exit code") {
    auto r = run("--cache \"\" verify-extremizer --kind dirichlet --pq 4:2 --ladder 8,16,32 --tol 1e-9", 30);
    CHECK(r.exit_code == 1);
    auto j = nlohmann::json::parse(r.output);
    CHECK(j["verdicts"][0]["verdict"] == "fail");
}

TEST_CASE("csv output format emits sample rows") {
    auto r = run("--cache \"\" --format csv verify-extremizer --kind hyperplane -d 3 -v +- --pq 4:4 --ladder 4,8,16", 31);
    CHECK(r.output.find("hyperplane,3,+-,8,4/1,4/1,") != std::string::npos);
}
