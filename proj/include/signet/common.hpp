#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace signet {

/// Dense feature vector. All numerics in this library are double precision.
using Vec = std::vector<double>;

/// Row-major dense matrix, just enough for small feedforward nets.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

// splitmix64; used to derive independent sub-seeds from a master seed so that
// every stochastic stage of a run owns its own stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

template <typename... Rest>
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, Rest... rest) {
    return mix_seed(mix_seed(seed, stream), static_cast<std::uint64_t>(rest)...);
}

inline void log_message(const std::string& msg) {
    std::fprintf(stderr, "[signet] %s\n", msg.c_str());
}

/// Emits a diagnostic at most once per process for a given key.
inline void log_once(const std::string& key, const std::string& msg) {
    static std::unordered_set<std::string> seen;
    if (seen.insert(key).second) log_message(msg);
}

/// Shortest decimal form that round-trips a double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace signet
