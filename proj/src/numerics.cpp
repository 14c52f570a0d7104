#include "wpscat/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "wpscat/error.hpp"

namespace wpscat {

namespace {
std::atomic<unsigned> g_threads{0};
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument, "linspace needs at least two points");
    }
    std::vector<double> x(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = lo + h * static_cast<double>(i);
    }
    x.back() = hi;
    return x;
}

std::vector<double> simpson_weights(std::size_t n, double h)
{
    if (n < 3 || n % 2 == 0) {
        throw Error(ErrorCode::InvalidArgument, "Simpson rule needs an odd node count >= 3");
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = (i % 2 == 1) ? 4.0 : 2.0;
    }
    w.front() = 1.0;
    w.back() = 1.0;
    for (auto& v : w) {
        v *= h / 3.0;
    }
    return w;
}

std::vector<double> trapezoid_weights(std::span<const double> x)
{
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double half = 0.5 * (x[i + 1] - x[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    return w;
}

bool is_uniform(std::span<const double> x)
{
    if (x.size() < 3) {
        return true;
    }
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (std::abs((x[i + 1] - x[i]) - h) > 1e-9 * std::abs(h)) {
            return false;
        }
    }
    return true;
}

void set_thread_count(unsigned n) { g_threads = n; }

unsigned thread_count()
{
    const unsigned n = g_threads.load();
    if (n > 0) {
        return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&body, &failure, &failure_mutex, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace wpscat
