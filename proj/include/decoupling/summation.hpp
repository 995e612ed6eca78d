#pragma once

// Deterministic accumulation helpers.  All quadrature sums in this library
// run through Neumaier-compensated accumulators in a fixed order: work is
// cut into fixed-size blocks, blocks may be evaluated on any number of
// threads, and the per-block partials are folded sequentially by block
// index.  Results are therefore independent of the thread count.

#include <atomic>
#include <cstdint>
#include <cmath>
#include <thread>
#include <vector>

namespace decoupling {

class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Applies fn(block) for block = 0..n_blocks-1 and returns all results in
// block order.  T must be default-constructible.
template <class T, class Fn>
std::vector<T> map_blocks(std::int64_t n_blocks, Fn&& fn, unsigned thread_cap = 0) {
    std::vector<T> out(static_cast<std::size_t>(n_blocks));
    unsigned hw = std::thread::hardware_concurrency();
    unsigned threads = thread_cap ? std::min(thread_cap, hw ? hw : 1u) : (hw ? hw : 1u);
    if (threads <= 1 || n_blocks <= 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) out[b] = fn(b);
        return out;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::int64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            out[b] = fn(b);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

inline double sum_ordered(const std::vector<double>& parts) {
    NeumaierSum s;
    for (double p : parts) s.add(p);
    return s.value();
}

} // namespace decoupling
