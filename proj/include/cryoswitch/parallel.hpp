#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <future>
#include <vector>

namespace cryoswitch {

// Applies f to 0..n-1 on up to `workers` threads; results are stored by index so the
// schedule never changes the output.
template <class R>
std::vector<R> parallel_map(std::size_t n, int workers, const std::function<R(std::size_t)>& f) {
    std::vector<R> out(n);
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::future<void>> jobs;
    for (std::size_t k = 0; k < w; ++k) {
        jobs.push_back(std::async(std::launch::async, [&, k] {
            for (std::size_t i = k; i < n; i += w) out[i] = f(i);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace cryoswitch
