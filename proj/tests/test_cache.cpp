#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "decoupling/cache.hpp"

using namespace decoupling;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("./" + name) { std::remove(path.c_str()); }
    ~TempFile() { std::remove(path.c_str()); }
};

CacheRecord sample(int M, double value) {
    CacheRecord r;
    r.kind = "expsum";
    r.d = 2;
    r.signs = "+";
    r.M = M;
    r.set_p(Lp::finite(Rational(4)));
    r.set_q(Lp::finite(Rational(2)));
    r.value = value;
    r.err = 0.0;
    return r;
}

} // namespace

TEST_CASE("csv row round trip") {
    CacheRecord r = sample(16, 3.25);
    r.timestamp = "2026-01-01T00:00:00Z";
    auto parsed = CacheFile::parse_row(r.csv());
    REQUIRE(parsed.has_value());
    CHECK(parsed->key() == r.key());
    CHECK(parsed->value == r.value);
    CHECK(parsed->timestamp == r.timestamp);

    CacheRecord inf_r = sample(8, 1.0);
    inf_r.set_p(Lp::inf());
    auto parsed_inf = CacheFile::parse_row(inf_r.csv());
    REQUIRE(parsed_inf.has_value());
    CHECK(parsed_inf->p_num == 1);
    CHECK(parsed_inf->p_den == 0);
}

TEST_CASE("malformed rows are skipped") {
    CHECK_FALSE(CacheFile::parse_row("too,few,fields").has_value());
    CHECK_FALSE(CacheFile::parse_row("k,2,+,x,4,1,2,1,1.0,0,ts").has_value());
    CHECK(CacheFile::parse_row("k,2,+,8,4,1,2,1,1.0,0,ts").has_value());
}

TEST_CASE("empty or missing file yields an empty cache") {
    TempFile tmp("cache_empty.csv");
    CacheFile cache(tmp.path);
    CHECK(cache.size() == 0);
    CHECK_FALSE(cache.lookup(sample(8, 0)).has_value());
}

TEST_CASE("write, reload, lookup") {
    TempFile tmp("cache_rw.csv");
    {
        CacheFile cache(tmp.path);
        cache.append(sample(8, 1.5));
        cache.append(sample(16, 2.5));
        CHECK(cache.size() == 2);
    }
    CacheFile reloaded(tmp.path);
    CHECK(reloaded.size() == 2);
    auto hit = reloaded.lookup(sample(8, 0));
    REQUIRE(hit.has_value());
    CHECK(hit->value == 1.5);
    CHECK_FALSE(hit->timestamp.empty());
    // different key fields miss
    CacheRecord other = sample(8, 0);
    other.signs = "-";
    CHECK_FALSE(reloaded.lookup(other).has_value());
}

TEST_CASE("duplicate keys: the newest row wins") {
    TempFile tmp("cache_dup.csv");
    {
        CacheFile cache(tmp.path);
        cache.append(sample(8, 1.0));
        cache.append(sample(8, 9.0));  // forced recompute appends a fresh row
    }
    CacheFile reloaded(tmp.path);
    auto hit = reloaded.lookup(sample(8, 0));
    REQUIRE(hit.has_value());
    CHECK(hit->value == 9.0);
}

TEST_CASE("a malformed line in the middle is skipped on load") {
    TempFile tmp("cache_bad.csv");
    {
        CacheFile cache(tmp.path);
        cache.append(sample(8, 1.5));
    }
    {
        std::ofstream out(tmp.path, std::ios::app);
        out << "garbage line without commas\n";
    }
    {
        CacheFile cache(tmp.path);
        cache.append(sample(16, 2.5));
    }
    CacheFile reloaded(tmp.path);
    CHECK(reloaded.size() == 2);
    CHECK(reloaded.lookup(sample(16, 0))->value == 2.5);
}

TEST_CASE("disabled cache never stores") {
    CacheFile cache("");
    CHECK_FALSE(cache.enabled());
    cache.append(sample(8, 1.0));
    CHECK_FALSE(cache.lookup(sample(8, 0)).has_value());
}
