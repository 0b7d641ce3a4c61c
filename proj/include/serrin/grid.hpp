#pragma once

#include <Eigen/Core>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace serrin {

/// Uniform rectangular grid on [x0,x1] x [y0,y1]. Row index = y, column
/// index = x throughout.
struct GridSpec {
    int nx = 201;
    int ny = 401;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

    double dx() const { return (x1 - x0) / (nx - 1); }
    double dy() const { return (y1 - y0) / (ny - 1); }
    double x(int i) const { return x0 + dx() * i; }
    double y(int j) const { return y0 + dy() * j; }
};

/// Chunked parallel loop over [0, n); falls back to serial for small n.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw < 2 || n < 16) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    int nthreads = int(std::min<unsigned>(hw, 8));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace serrin
