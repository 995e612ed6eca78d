#pragma once

// Append-only CSV cache of computed samples.  Schema:
//   kind,d,signs,M,p_num,p_den,q_num,q_den,value,err,timestamp
// p and q are stored as reduced fractions with infinity encoded as 1/0.
// Rows are keyed on everything before `value`; duplicate keys are allowed in
// the file and the latest row wins on read, which is what makes --force
// reruns stick.  Malformed rows are skipped with a warning.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "decoupling/rational.hpp"

namespace decoupling {

struct CacheRecord {
    std::string kind;
    int d = 0;
    std::string signs;
    int M = 0;
    std::int64_t p_num = 0, p_den = 1;
    std::int64_t q_num = 0, q_den = 1;
    double value = 0.0;
    double err = 0.0;
    std::string timestamp;

    static std::pair<std::int64_t, std::int64_t> encode(const Lp& x) {
        if (x.is_inf()) return {1, 0};
        return {x.rational().num(), x.rational().den()};
    }

    void set_p(const Lp& p) { std::tie(p_num, p_den) = encode(p); }
    void set_q(const Lp& q) { std::tie(q_num, q_den) = encode(q); }

    std::string key() const {
        std::ostringstream os;
        os << kind << '|' << d << '|' << signs << '|' << M << '|' << p_num << '/' << p_den
           << '|' << q_num << '/' << q_den;
        return os.str();
    }

    std::string csv() const {
        char num[64];
        std::ostringstream os;
        os << kind << ',' << d << ',' << signs << ',' << M << ',' << p_num << ',' << p_den
           << ',' << q_num << ',' << q_den << ',';
        std::snprintf(num, sizeof num, "%.17g", value);
        os << num << ',';
        std::snprintf(num, sizeof num, "%.17g", err);
        os << num << ',' << timestamp;
        return os.str();
    }
};

inline std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class CacheFile {
public:
    static constexpr const char* header = "kind,d,signs,M,p_num,p_den,q_num,q_den,value,err,timestamp";

    // An empty path disables the cache entirely.
    explicit CacheFile(std::string path) : path_(std::move(path)) {
        if (!enabled()) return;
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (first && line.rfind("kind,", 0) == 0) { first = false; continue; }
            first = false;
            auto rec = parse_row(line);
            if (rec)
                rows_[rec->key()] = *rec;  // later rows overwrite earlier ones
            else
                std::cerr << "warning: skipping malformed cache row: " << line << "\n";
        }
    }

    bool enabled() const { return !path_.empty(); }
    std::size_t size() const { return rows_.size(); }

    std::optional<CacheRecord> lookup(const CacheRecord& probe) const {
        auto it = rows_.find(probe.key());
        if (it == rows_.end()) return std::nullopt;
        return it->second;
    }

    void append(CacheRecord rec) {
        if (rec.timestamp.empty()) rec.timestamp = utc_timestamp();
        if (!enabled()) return;
        bool fresh = !std::ifstream(path_).good();
        std::ofstream out(path_, std::ios::app);
        if (!out) {
            std::cerr << "warning: cannot write cache file " << path_ << "\n";
            return;
        }
        if (fresh) out << header << "\n";
        out << rec.csv() << "\n";
        rows_[rec.key()] = rec;
    }

    static std::optional<CacheRecord> parse_row(const std::string& line) {
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') { f.push_back(cur); cur.clear(); }
            else cur.push_back(c);
        }
        f.push_back(cur);
        if (f.size() != 11) return std::nullopt;
        try {
            CacheRecord r;
            r.kind = f[0];
            r.d = std::stoi(f[1]);
            r.signs = f[2];
            r.M = std::stoi(f[3]);
            r.p_num = std::stoll(f[4]);
            r.p_den = std::stoll(f[5]);
            r.q_num = std::stoll(f[6]);
            r.q_den = std::stoll(f[7]);
            r.value = std::stod(f[8]);
            r.err = std::stod(f[9]);
            r.timestamp = f[10];
            if (r.M < 0 || r.d < 0) return std::nullopt;
            return r;
        } catch (const std::logic_error&) {
            return std::nullopt;
        }
    }

private:
    std::string path_;
    std::map<std::string, CacheRecord> rows_;
};

} // namespace decoupling
