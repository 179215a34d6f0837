#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace slhardy {

// Shortest decimal that round-trips the double.
std::string format_double(double x);

/// CSV with a header row and full-precision numbers.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);
    void row(const std::vector<double>& values);
    std::size_t rows() const { return rows_; }

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t rows_ = 0;
};

// Runs f(0..n-1) on up to `jobs` threads. Results land in index order, so the
// output never depends on scheduling. The first exception (by index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& f) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n));
    auto run = [&](std::size_t w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

} // namespace slhardy
